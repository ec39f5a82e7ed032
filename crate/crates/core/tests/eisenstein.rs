use ncms::eisenstein::{classical_e, e_calligraphic, e_mn, fourier_coefficient, pairing, q_series, twisted_e, whittaker_w};
use ncms::iterated_integrals::EngineConfig;
use ncms::modular_group::{euler_phi, gcd};
use ncms::special::bessel_k;
use ncms::{
    CuspForm64, CuspLabel, EisParams64, Gamma0, NcmsError, PathPoint64, SymbolEngine64, UpperHalfPoint64, Word,
};
use num_complex::Complex64;
use std::f64::consts::PI;

fn g11() -> Gamma0 {
    Gamma0::new(11).unwrap()
}

fn f11() -> CuspForm64 {
    CuspForm64::builtin("11a", 5000).unwrap()
}

fn params(s: f64, cusp: CuspLabel, cmax: f64) -> EisParams64 {
    EisParams64::new(Complex64::new(s, 0.0), cusp, cmax).unwrap()
}

fn pt(x: f64, y: f64) -> UpperHalfPoint64 {
    UpperHalfPoint64::new(x, y).unwrap()
}

/// `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this analytic, doubly decaying integrand.
fn k_trapezoid(nu: Complex64, x: f64) -> Complex64 {
    let h = 0.01;
    let mut acc = Complex64::new(0.5 * (-x).exp(), 0.0);
    for i in 1..4000 {
        let t = i as f64 * h;
        acc += (nu * t).cosh() * (-x * t.cosh()).exp();
    }
    acc * h
}

fn classical(group: &Gamma0, p: EisParams64) -> impl Fn(&UpperHalfPoint64) -> ncms::Result<Complex64> + '_ {
    move |z| classical_e(group, z, &p).map(|v| v.scalar().unwrap())
}

#[test]
fn bessel_against_quadrature() {
    let nu = Complex64::new(1.5, 0.5);
    let got = bessel_k(nu, 2.0).unwrap();
    let want = k_trapezoid(nu, 2.0);
    assert!((got - want).norm() < 1e-9 * want.norm(), "{got} vs {want}");
    // K_{1/2}(x) = √(π/2x)·e^{−x}
    for x in [0.3, 1.0, 7.5] {
        let k = bessel_k(Complex64::new(0.5, 0.0), x).unwrap();
        let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
        assert!((k.re - exact).abs() < 1e-12 * exact && k.im.abs() < 1e-12 * exact);
    }
}

#[test]
fn whittaker_decays_exponentially() {
    let s = Complex64::new(2.5, 0.0);
    for k in [1i64, 3] {
        let lo = whittaker_w(s, k, &pt(0.2, 2.0)).unwrap().norm();
        let hi = whittaker_w(s, k, &pt(0.2, 4.0)).unwrap().norm();
        let ratio = hi / lo / (-4.0 * PI * k as f64).exp();
        assert!((0.8..1.25).contains(&ratio), "k = {k}: {ratio}");
    }
    assert!(whittaker_w(s, 0, &pt(0.0, 1.0)).is_err());
}

#[test]
fn nonzero_fourier_coefficients_match_ramanujan_sums() {
    let g = g11();
    let (s, cmax) = (2.5, 300.0);
    let p = params(s, CuspLabel::Infinity, cmax);
    let y = 1.0;
    for k in [1i64, 2, -3] {
        let a = fourier_coefficient(&g, CuspLabel::Infinity, classical(&g, p), k, y, 64).unwrap();
        let ka = k.unsigned_abs() as f64;
        let w = 2.0 * (ka * y).sqrt() * k_trapezoid(Complex64::new(s - 0.5, 0.0), 2.0 * PI * ka * y);
        // φ(k,s) = π^s|k|^{s−1}/Γ(s)·Σ_c c^{−2s} Σ_{d mod c, (d,c)=1} e(kd/c), Γ(5/2) = 3√π/4
        let mut sum = 0.0;
        for c in (11..=cmax as i64).step_by(11) {
            let ram: f64 = (0..c).filter(|&d| gcd(c, d) == 1).map(|d| (2.0 * PI * (k * d) as f64 / c as f64).cos()).sum();
            sum += ram * (c as f64).powf(-2.0 * s);
        }
        let phi = PI.powf(s) * ka.powf(s - 1.0) / (0.75 * PI.sqrt()) * sum;
        let got = a / w;
        // E is O(1), so its roundoff enters a/W scaled by 1/|W|
        let tol = 1e-8 * phi.abs() + 1e-14 / w.norm();
        assert!((got - phi).norm() < tol, "k = {k}: {got} vs {phi}");
    }
}

/// Constant term `A y^s + B y^{1−s}` solved from two heights.
fn constant_term(g: &Gamma0, p: EisParams64, chart: CuspLabel, s: f64) -> (f64, f64) {
    let (y1, y2) = (1.0, 2.0);
    let a1 = fourier_coefficient(g, chart, classical(g, p), 0, y1, 64).unwrap();
    let a2 = fourier_coefficient(g, chart, classical(g, p), 0, y2, 64).unwrap();
    assert!(a1.im.abs() < 1e-12 && a2.im.abs() < 1e-12);
    let det = y1.powf(s) * y2.powf(1.0 - s) - y2.powf(s) * y1.powf(1.0 - s);
    let a = (a1.re * y2.powf(1.0 - s) - a2.re * y1.powf(1.0 - s)) / det;
    let b = (y1.powf(s) * a2.re - y2.powf(s) * a1.re) / det;
    (a, b)
}

#[test]
fn constant_term_and_scattering() {
    let g = g11();
    let (s, cmax) = (3.0, 300.0);
    // φ(s) = √π Γ(s−½)/Γ(s)·Σ_c φ(c) c^{−2s}; at s = 3 the gamma ratio is 3√π/8
    let tail: f64 = (11..=cmax as i64).step_by(11).map(|c| euler_phi(c) as f64 * (c as f64).powf(-2.0 * s)).sum();
    let phi = 3.0 * PI / 8.0 * tail;
    let (a, b) = constant_term(&g, params(s, CuspLabel::Infinity, cmax), CuspLabel::Infinity, s);
    assert!((a - 1.0).abs() < 1e-4, "{a}");
    assert!((b - phi).abs() < 1e-4 * phi, "{b} vs {phi}");
    // E_0 has no y^s term at ∞, and the off-diagonal scattering entries agree
    let (a0, b0) = constant_term(&g, params(s, CuspLabel::Zero, cmax), CuspLabel::Infinity, s);
    let (_, b_inf) = constant_term(&g, params(s, CuspLabel::Infinity, cmax), CuspLabel::Zero, s);
    assert!(a0.abs() < 1e-8, "{a0}");
    assert!((b0 - b_inf).abs() < 1e-6 * b0.abs(), "{b0} vs {b_inf}");
}

#[test]
fn classical_series_is_invariant() {
    let g = g11();
    let z = pt(0.3, 1.2);
    for cusp in [CuspLabel::Infinity, CuspLabel::Zero] {
        let p = params(2.5, cusp, 1500.0);
        let e = classical_e(&g, &z, &p).unwrap();
        let shifted = classical_e(&g, &pt(1.3, 1.2), &p).unwrap();
        assert!((e.scalar().unwrap() - shifted.scalar().unwrap()).norm() < 1e-12);
        for gm in [g.element(7, -2, 11, -3).unwrap(), g.element(8, -3, 11, -4).unwrap()] {
            let moved = classical_e(&g, &gm.apply(&z), &p).unwrap();
            let d = (moved.scalar().unwrap() - e.scalar().unwrap()).norm();
            assert!(d < 2.0 * (e.truncation_estimate + moved.truncation_estimate), "{cusp:?}: {d}");
        }
    }
}

#[test]
fn pairing_does_not_depend_on_the_base_point() {
    let g = g11();
    let e = SymbolEngine64::new(g.clone(), vec![f11()], vec![], EngineConfig { degree: 1, ..Default::default() }).unwrap();
    let delta = g.element(7, -2, 11, -3).unwrap();
    let bases = [
        PathPoint64::infinity(),
        PathPoint64::cusp(0, 1),
        PathPoint64::interior(0.0, 1.0).unwrap(),
        PathPoint64::interior(0.4, 0.3).unwrap(),
        PathPoint64::interior(-0.2, 2.0).unwrap(),
    ];
    let p0 = pairing(&e, &delta, 1, &bases[0]).unwrap();
    assert!(p0.norm() > 1e-3);
    for b in &bases[1..] {
        assert!((pairing(&e, &delta, 1, b).unwrap() - p0).norm() < 1e-10, "{b:?}");
    }
    assert!(pairing(&e, &delta, 2, &bases[0]).is_err());
}

#[test]
fn word_coefficients_are_twisted_series() {
    let g = g11();
    let f = f11();
    let z = pt(0.3, 1.2);
    let p = params(2.5, CuspLabel::Infinity, 400.0);
    let base = PathPoint64::infinity();
    let cfg = EngineConfig { degree: 2, ..Default::default() };
    let e = SymbolEngine64::new(g.clone(), vec![f.clone()], vec![f.clone()], cfg).unwrap();
    let series = e_calligraphic(&e, &z, &p, &base).unwrap();
    let series = series.series().unwrap();
    let cases: [(Word, usize, usize); 5] = [
        (Word::xs(&[1]), 1, 0),
        (Word::ys(&[1]), 0, 1),
        (Word::xs(&[1]).concat(&Word::ys(&[1])), 1, 1),
        (Word::xs(&[1, 1]), 2, 0),
        (Word::ys(&[1, 1]), 0, 2),
    ];
    for (w, m, n) in cases {
        let t = twisted_e(&g, &z, &p, &vec![f.clone(); m], &vec![f.clone(); n], &base, cfg).unwrap();
        let (a, b) = (series.coeff(&w), t.scalar().unwrap());
        assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{w}: {a} vs {b}");
    }
    let empty = series.coeff(&Word::empty());
    let classical = classical_e(&g, &z, &p).unwrap().scalar().unwrap();
    assert!((empty - classical).norm() < 1e-12 * classical.norm());
    let q = q_series(&g, &z, &p, &[], &[], &base, cfg).unwrap();
    assert_eq!(q.scalar(), Some(classical));
}

#[test]
fn twisted_sums_follow_the_binomial_law() {
    let g = g11();
    let f = f11();
    let z = pt(0.3, 1.2);
    let delta = g.element(7, -2, 11, -3).unwrap();
    let dz = delta.apply(&z);
    let p = params(2.5, CuspLabel::Infinity, 600.0);
    let base = PathPoint64::infinity();
    let cfg = EngineConfig::default();
    let emn = |w: &UpperHalfPoint64, m, n| e_mn(&g, w, &p, &f, &f, m, n, &base, cfg).unwrap();
    let e = SymbolEngine64::new(g.clone(), vec![f.clone()], vec![], EngineConfig { degree: 1, ..Default::default() }).unwrap();
    let pd = pairing(&e, &delta, 1, &base).unwrap();

    let lhs = emn(&dz, 1, 1);
    let (e11, e10, e01) = (emn(&z, 1, 1), emn(&z, 1, 0), emn(&z, 0, 1));
    let e00 = classical_e(&g, &z, &p).unwrap();
    let rhs = e11.scalar().unwrap() - pd.conj() * e10.scalar().unwrap() - pd * e01.scalar().unwrap()
        + pd * pd.conj() * e00.scalar().unwrap();
    let resid = (lhs.scalar().unwrap() - rhs).norm();
    let budget = lhs.truncation_estimate
        + e11.truncation_estimate
        + pd.norm() * (e10.truncation_estimate + e01.truncation_estimate)
        + pd.norm_sqr() * e00.truncation_estimate;
    assert!(resid <= budget, "{resid} vs {budget}");
}

#[test]
fn oversized_truncation_is_refused() {
    let g = g11();
    let p = params(2.5, CuspLabel::Infinity, 1.0e5);
    assert!(matches!(classical_e(&g, &pt(0.0, 1.0), &p), Err(NcmsError::CostGuard(_))));
    assert!(EisParams64::new(Complex64::new(1.0, 0.0), CuspLabel::Infinity, 10.0).is_err());
    assert!(EisParams64::new(Complex64::new(2.0, 0.0), CuspLabel::Infinity, 0.0).is_err());
}
