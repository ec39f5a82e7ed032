//! Special functions used by the Eisenstein series: complex log-gamma,
//! Hurwitz zeta, the periodic lattice sum in the real direction, adaptive
//! Gauss–Kronrod quadrature and the modified Bessel function `K_ν`.

use crate::error::{NcmsError, Result};
use crate::scalar::Real;
use num_complex::Complex;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` on the principal branch (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let pi = T::PI();
        let one = Complex::new(T::one(), T::zero());
        return Complex::new(pi.ln(), T::zero()) - (z * pi).sin().ln() - ln_gamma(one - z);
    }
    let z = z - T::one();
    let mut acc = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(T::lit(c), T::zero()) / (z + T::from_int(k as i64));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    Complex::new(ln_sqrt_2pi, T::zero()) + (z + half) * t.ln() - t + acc.ln()
}

pub fn gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    ln_gamma(z).exp()
}

/// `B_{2k}/(2k)!` for k = 1..=10.
const BERNOULLI_OVER_FACT: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q+k)^{-s}` for `Re s > 1`, `q > 0`,
/// by Euler–Maclaurin summation.
pub fn hurwitz_zeta<T: Real>(s: Complex<T>, q: T) -> Result<Complex<T>> {
    if !(s.re > T::one()) || !(q > T::zero()) {
        return Err(NcmsError::Domain(format!(
            "Hurwitz zeta needs Re s > 1 and q > 0 (s = {}+{}i, q = {})",
            s.re, s.im, q
        )));
    }
    let pow = |base: T, e: Complex<T>| -> Complex<T> { (e * (-base.ln())).exp() }; // base^{-e}
    // shift so that q + K is large relative to |s|
    let target = T::lit(12.0).max(s.norm() * T::lit(1.5));
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut a = q;
    while a < target {
        sum = sum + pow(a, s);
        a = a + T::one();
    }
    let one = Complex::new(T::one(), T::zero());
    let a_pow = pow(a, s);
    sum = sum + a_pow * a / (s - one) + a_pow * T::lit(0.5);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k-2) · a^{-s-2k+1}
    let mut rising = s; // s(s+1)...(s+2k-2)
    let mut apow = a_pow / a; // a^{-s-1}
    let inv_a2 = T::one() / (a * a);
    for (k, &b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let term = rising * apow * T::lit(b);
        sum = sum + term;
        if term.norm() <= sum.norm() * T::epsilon() {
            break;
        }
        let kk = T::from_int(2 * k as i64 + 1);
        rising = rising * (s + kk) * (s + kk + T::one());
        apow = apow * inv_a2;
    }
    Ok(sum)
}

/// `Σ_{ℓ∈ℤ} (y / ((x+ℓ)² + y²))^s` for `Re s > 1/2`, `y > 0`.
///
/// A central block is summed directly; the two tails are expanded
/// binomially in `(y/t)²` and summed with Hurwitz zeta values.
pub fn periodic_sum<T: Real>(s: Complex<T>, x: T, y: T) -> Result<Complex<T>> {
    if !(s.re > T::lit(0.5)) || !(y > T::zero()) {
        return Err(NcmsError::Domain("periodic sum needs Re s > 1/2 and y > 0".into()));
    }
    let x = x - x.floor();
    let l = T::lit(10.0).max((y * T::lit(3.0)).ceil());
    let li = l.to_i64().unwrap_or(10);
    let mut direct = Complex::new(T::zero(), T::zero());
    for ell in -li..li {
        let t = x + T::from_int(ell);
        let w = y / (t * t + y * y);
        direct = direct + (s * w.ln()).exp();
    }
    // tails: t = x + ℓ for ℓ ≥ L, and |t| = -x - ℓ for ℓ ≤ -L-1
    let q_pos = x + l;
    let q_neg = l + T::one() - x;
    let ys = (s * y.ln()).exp();
    let y2 = y * y;
    let mut tail = Complex::new(T::zero(), T::zero());
    let mut binom = Complex::new(T::one(), T::zero()); // binom(-s, j)
    let mut y2j = T::one();
    for j in 0..200i64 {
        let e = s * T::lit(2.0) + T::from_int(2 * j);
        let z = hurwitz_zeta(e, q_pos)? + hurwitz_zeta(e, q_neg)?;
        let term = binom * z * y2j;
        tail = tail + term;
        if term.norm() <= (tail.norm() + direct.norm() / ys.norm()) * T::epsilon() * T::lit(0.1) {
            break;
        }
        binom = binom * (-s - T::from_int(j)) / T::from_int(j + 1);
        y2j = y2j * y2;
    }
    Ok(direct + ys * tail)
}

/// `t ↦ Σ_ℓ (y/((t+ℓ)²+y²))^s` for fixed `s` and `y`.
///
/// For moderate `y` the Poisson-summed form
/// `ĝ(0) + 2Σ_{k≥1} ĝ(k) cos(2πkt)` is precomputed, with
/// `ĝ(0) = √π Γ(s−½)/Γ(s)·y^{1−s}` and
/// `ĝ(k) = 2π^s k^{s−½} y^{½} K_{s−½}(2πky)/Γ(s)`;
/// small `y` falls back to [`periodic_sum`].
#[derive(Clone, Debug)]
pub struct PeriodicKernel<T: Real> {
    s: Complex<T>,
    y: T,
    constant: Complex<T>,
    fourier: Option<Vec<Complex<T>>>,
}

/// Below this height the Fourier series of the kernel converges slowly.
const POISSON_MIN_HEIGHT: f64 = 0.3;

impl<T: Real> PeriodicKernel<T> {
    pub fn new(s: Complex<T>, y: T) -> Result<Self> {
        if !(s.re > T::lit(0.5)) || !(y > T::zero()) {
            return Err(NcmsError::Domain("periodic kernel needs Re s > 1/2 and y > 0".into()));
        }
        let half = T::lit(0.5);
        let one = Complex::new(T::one(), T::zero());
        let lg_s = ln_gamma(s);
        let constant = (ln_gamma(s - half) - lg_s + (one - s) * y.ln()).exp() * T::PI().sqrt();
        let fourier = if y >= T::lit(POISSON_MIN_HEIGHT) {
            let mut ak = Vec::new();
            let nu = s - half;
            let scale = constant.norm();
            for k in 1..10_000i64 {
                let kk = T::from_int(k);
                let arg = T::TAU() * kk * y;
                let bk = bessel_k(nu, arg)?;
                let log_pref = s * T::PI().ln() + nu * kk.ln() + Complex::new(half * y.ln(), T::zero()) - lg_s;
                let a = log_pref.exp() * bk * T::lit(2.0);
                let small = a.norm() < scale * T::epsilon() * T::lit(1e-2);
                ak.push(a);
                if small {
                    break;
                }
            }
            Some(ak)
        } else {
            None
        };
        Ok(PeriodicKernel { s, y, constant, fourier })
    }

    pub fn y(&self) -> T {
        self.y
    }

    /// `ĝ(0)`, the coefficient of the constant Fourier mode.
    pub fn constant_term(&self) -> Complex<T> {
        self.constant
    }

    pub fn eval(&self, t: T) -> Result<Complex<T>> {
        match &self.fourier {
            None => periodic_sum(self.s, t, self.y),
            Some(ak) => {
                let theta = T::TAU() * (t - t.floor());
                let c1 = theta.cos();
                // cos(kθ) by the Chebyshev recurrence
                let (mut prev, mut cur) = (T::one(), c1);
                let mut acc = self.constant;
                for a in ak {
                    acc = acc + *a * (cur + cur);
                    let next = (c1 + c1) * cur - prev;
                    prev = cur;
                    cur = next;
                }
                Ok(acc)
            }
        }
    }
}

/// 15-point Kronrod nodes/weights on [-1, 1] with embedded 7-point Gauss.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> (Complex<T>, T) {
    let c = (a + b) * T::lit(0.5);
    let h = (b - a) * T::lit(0.5);
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let pair = f(c - dx) + f(c + dx);
        k = k + pair * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + pair * T::lit(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
pub fn integrate<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, tol: T) -> Result<Complex<T>> {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex::new(T::zero(), T::zero());
    let width = b - a;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let share = tol * (hi - lo) / width;
        if err <= share.max(val.norm() * T::epsilon() * T::lit(10.0)) || depth >= 40 {
            if depth >= 40 && err > share * T::lit(1e3) {
                return Err(NcmsError::Truncation("quadrature did not converge".into()));
            }
            total = total + val;
        } else {
            let mid = (lo + hi) * T::lit(0.5);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}

/// `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt` for complex order and `x > 0`.
pub fn bessel_k<T: Real>(nu: Complex<T>, x: T) -> Result<Complex<T>> {
    if !(x > T::zero()) {
        return Err(NcmsError::Domain(format!("Bessel K needs x > 0, got {x}")));
    }
    let nr = nu.re.abs();
    let log_peak = {
        // maximum of -x cosh t + |Re ν| t is at sinh t = |Re ν|/x
        let t0 = (nr / x).asinh();
        -x * t0.cosh() + nr * t0
    };
    // cut where the integrand is 1e-22 below its peak
    let mut t_max = T::one();
    while -x * t_max.cosh() + nr * t_max > log_peak - T::lit(50.0) {
        t_max = t_max * T::lit(1.25);
    }
    let scale = log_peak.exp();
    let f = |t: T| -> Complex<T> {
        let ch = ((nu * t).exp() + (-nu * t).exp()) * T::lit(0.5);
        ch * (-x * t.cosh()).exp()
    };
    integrate(f, T::zero(), t_max, scale * T::lit(1e-15))
}
