//! Real-analytic Eisenstein series for Γ₀(N) at a cusp, plain and twisted by
//! noncommutative modular symbols, in the region of absolute convergence.
//!
//! Sums run over `Γ_𝔟\Γ`, organised by double cosets `Γ_𝔟 γ Γ_∞`. Every
//! twist is constant on a double coset, and the sum of `Im(σ_𝔟⁻¹γT^ℓz)^s`
//! over `ℓ` is `|C|^{-2s}·H(x + D/C)` with `H` the periodic kernel.

use crate::error::{NcmsError, Result};
use crate::free_series::{FreeSeries, Word};
use crate::iterated_integrals::{Dense, EngineConfig, PathPoint, SymbolEngine};
use crate::modular_group::{CuspLabel, Gamma0, GroupElement, UpperHalfPoint};
use crate::scalar::{two_pi_i, Real};
use crate::special::{bessel_k, PeriodicKernel};
use crate::cusp_forms::CuspForm;
use num_complex::Complex;
use rayon::prelude::*;

/// Upper bound on the number of double cosets in one sum.
pub const MAX_COSETS: usize = 1_000_000;

/// Smallest `Re(s)` accepted by [`EisParams::new`]. Closer to 1 the coset
/// tail bound degenerates; [`EisParams::with_floor`] lowers it explicitly.
pub const DEFAULT_MIN_RE_S: f64 = 1.1;

/// Largest word length accepted by [`higher_order_residual`].
pub const MAX_HIGHER_ORDER: usize = 4;

/// Spectral parameter, cusp and truncation of a coset sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisParams<T: Real> {
    pub s: Complex<T>,
    pub cusp: CuspLabel,
    /// Double cosets with effective `c` above this are dropped.
    pub cmax: f64,
    /// Worker threads; 0 or 1 sums sequentially. Results do not depend on it.
    pub threads: usize,
}

impl<T: Real> EisParams<T> {
    pub fn new(s: Complex<T>, cusp: CuspLabel, cmax: f64) -> Result<Self> {
        Self::with_floor(s, cusp, cmax, DEFAULT_MIN_RE_S)
    }

    /// Like [`EisParams::new`] with `Re(s) ≥ floor`; `floor` itself must exceed 1.
    pub fn with_floor(s: Complex<T>, cusp: CuspLabel, cmax: f64, floor: f64) -> Result<Self> {
        if !(floor > 1.0) {
            return Err(NcmsError::Domain(format!("the floor on Re(s) must exceed 1, got {floor}")));
        }
        if !(s.re.to_f64_lossy() >= floor) {
            return Err(NcmsError::Domain(format!("Re(s) must be at least {floor}, got {}", s.re)));
        }
        if !(cmax > 0.0) {
            return Err(NcmsError::Domain(format!("Cmax must be positive, got {cmax}")));
        }
        Ok(EisParams { s, cusp, cmax, threads: 1 })
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EisPayload<T: Real> {
    Scalar(Complex<T>),
    Series(FreeSeries<T>),
}

/// A truncated coset sum with its tail estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct EisValue<T: Real> {
    pub value: EisPayload<T>,
    pub truncation_estimate: f64,
    pub cosets_used: usize,
}

impl<T: Real> EisValue<T> {
    pub fn scalar(&self) -> Option<Complex<T>> {
        match &self.value {
            EisPayload::Scalar(c) => Some(*c),
            EisPayload::Series(_) => None,
        }
    }

    pub fn series(&self) -> Option<&FreeSeries<T>> {
        match &self.value {
            EisPayload::Series(s) => Some(s),
            EisPayload::Scalar(_) => None,
        }
    }
}

/// Invariant height `y_Γ` and domain height `y_F` of a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightReport {
    pub y_gamma: f64,
    pub y_f: f64,
}

/// Raw result of a coset sum: dense coefficients per twist component.
struct CosetSum<T: Real> {
    value: Dense<T>,
    estimate: f64,
    count: usize,
}

type Twist<'a, T> = dyn Fn(&GroupElement) -> Result<Dense<T>> + Sync + 'a;

fn run_on_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if threads <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| NcmsError::Domain(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// `Σ_γ twist(γ)·Im(σ_𝔟⁻¹γz)^s` with `dim` components (`twist = None`
/// means the constant twist 1).
fn coset_sum<T: Real>(
    group: &Gamma0,
    z: &UpperHalfPoint<T>,
    params: &EisParams<T>,
    dim: usize,
    twist: Option<&Twist<'_, T>>,
) -> Result<CosetSum<T>> {
    let count = group.coset_count(params.cusp, params.cmax)?;
    if count > MAX_COSETS {
        return Err(NcmsError::CostGuard(format!(
            "{count} cosets exceed the limit of {MAX_COSETS}; lower Cmax"
        )));
    }
    let keys = group.coset_keys(params.cusp, params.cmax)?;
    let kernel = PeriodicKernel::new(params.s, z.y)?;
    let s = params.s;
    let zero = Complex::new(T::zero(), T::zero());
    let per_key = |key: &i64| -> Result<(Dense<T>, f64)> {
        let mut acc = vec![zero; dim];
        let mut top = 0f64;
        for g in group.cosets_for_key(params.cusp, *key) {
            let w = match twist {
                None => None,
                Some(t) => Some(t(&g)?),
            };
            let weight = if params.cusp == CuspLabel::Infinity && *key == 0 {
                (s * z.y.ln()).exp()
            } else {
                let (c, d) = group.scaled_bottom_row::<T>(params.cusp, &g);
                let cpow = (-(s + s) * c.abs().ln()).exp();
                cpow * kernel.eval(z.x + d / c)?
            };
            match w {
                None => acc[0] = acc[0] + weight,
                Some(w) => {
                    for (a, b) in acc.iter_mut().zip(&w) {
                        *a = *a + *b * weight;
                    }
                    if group.effective_c(params.cusp, &g) > params.cmax / 2.0 {
                        top = top.max(w.iter().skip(1).map(|c| c.norm().to_f64_lossy()).fold(0.0, f64::max));
                    }
                }
            }
        }
        Ok((acc, top))
    };
    let partials: Vec<Result<(Dense<T>, f64)>> = if params.threads <= 1 {
        keys.iter().map(per_key).collect()
    } else {
        run_on_pool(params.threads, || keys.par_iter().map(per_key).collect())?
    };
    // fixed reduction order keeps results independent of the thread count
    let mut value = vec![zero; dim];
    let mut top = 0f64;
    for p in partials {
        let (v, t) = p?;
        for (a, b) in value.iter_mut().zip(&v) {
            *a = *a + *b;
        }
        top = top.max(t);
    }
    let estimate = tail_estimate(group, z, params, if twist.is_some() { top.max(1.0) } else { 1.0 })?;
    Ok(CosetSum { value, estimate, count })
}

/// `H_max·Cmax^{2−2σ}/(N(2σ−2))` times the largest twist seen near the
/// truncation boundary.
fn tail_estimate<T: Real>(group: &Gamma0, z: &UpperHalfPoint<T>, params: &EisParams<T>, twist: f64) -> Result<f64> {
    let sigma = params.s.re.to_f64_lossy();
    let y = z.y.to_f64_lossy();
    let hmax = crate::special::periodic_sum(Complex::new(sigma, 0.0), 0.0, y)?.re;
    let n = group.level() as f64;
    Ok(hmax * params.cmax.powf(2.0 - 2.0 * sigma) / (n * (2.0 * sigma - 2.0)) * twist)
}

/// Ordinary Eisenstein series `E_𝔟(z, s)`.
pub fn classical_e<T: Real>(group: &Gamma0, z: &UpperHalfPoint<T>, params: &EisParams<T>) -> Result<EisValue<T>> {
    let r = coset_sum(group, z, params, 1, None)?;
    Ok(EisValue { value: EisPayload::Scalar(r.value[0]), truncation_estimate: r.estimate, cosets_used: r.count })
}

/// `𝓔_𝔟(z, s) = Σ_γ W_{γa}^a·Im(σ_𝔟⁻¹γz)^s`, with the engine's forms and degree.
pub fn e_calligraphic<T: Real>(engine: &SymbolEngine<T>, z: &UpperHalfPoint<T>, params: &EisParams<T>, base: &PathPoint<T>) -> Result<EisValue<T>> {
    let r = e_dense(engine, z, params, base)?;
    Ok(EisValue {
        value: EisPayload::Series(engine.to_series(&r.value)),
        truncation_estimate: r.estimate,
        cosets_used: r.count,
    })
}

fn e_dense<T: Real>(engine: &SymbolEngine<T>, z: &UpperHalfPoint<T>, params: &EisParams<T>, base: &PathPoint<T>) -> Result<CosetSum<T>> {
    if matches!(base, PathPoint::CuspPoint(c) if c.is_infinity()) {
        let cs = |g: &GroupElement| engine.cusp_symbol(g);
        engine.manin_symbols()?;
        return coset_sum(engine.group(), z, params, engine.basis().len(), Some(&cs));
    }
    // the conjugation by W_a^{i∞} is linear, so it is applied once to the sum
    let inner = e_dense(engine, z, params, &PathPoint::infinity())?;
    let p = engine.path(base, &PathPoint::infinity())?;
    let value = engine.mul(&engine.mul(&p, &inner.value), &engine.inv(&p));
    Ok(CosetSum { value, ..inner })
}

/// Engine whose slots are exactly the listed forms, one letter each.
fn slot_engine<T: Real>(group: &Gamma0, f: &[CuspForm<T>], g: &[CuspForm<T>], config: EngineConfig) -> Result<SymbolEngine<T>> {
    let config = EngineConfig { degree: f.len() + g.len(), ..config };
    SymbolEngine::new(group.clone(), f.to_vec(), g.to_vec(), config)
}

fn top_word(m: usize, n: usize) -> Word {
    let xs: Vec<usize> = (1..=m).collect();
    let ys: Vec<usize> = (1..=n).collect();
    Word::xs(&xs).concat(&Word::ys(&ys))
}

/// `E_𝔟(z, s; f_1..f_m, ḡ_1..ḡ_n) = Σ_γ C^a_{γa}(f's)·conj(C^a_{γa}(g's))·Im(σ_𝔟⁻¹γz)^s`.
#[allow(clippy::too_many_arguments)]
pub fn twisted_e<T: Real>(
    group: &Gamma0,
    z: &UpperHalfPoint<T>,
    params: &EisParams<T>,
    f: &[CuspForm<T>],
    g: &[CuspForm<T>],
    base: &PathPoint<T>,
    config: EngineConfig,
) -> Result<EisValue<T>> {
    if f.is_empty() && g.is_empty() {
        return classical_e(group, z, params);
    }
    let engine = slot_engine(group, f, g, config)?;
    let r = e_dense(&engine, z, params, base)?;
    let v = engine.coeff(&r.value, &top_word(f.len(), g.len()));
    Ok(EisValue { value: EisPayload::Scalar(v), truncation_estimate: r.estimate, cosets_used: r.count })
}

/// `𝒬_𝔟(z, s) = Σ_γ W_{γz}^a·Im(σ_𝔟⁻¹γz)^s`, assembled as `W_z^a·𝓔_𝔟(z, s)`
/// from `W_{γz}^a = W_{γz}^{γa} W_{γa}^a = W_z^a W_{γa}^a`.
pub fn q_calligraphic<T: Real>(engine: &SymbolEngine<T>, z: &UpperHalfPoint<T>, params: &EisParams<T>, base: &PathPoint<T>) -> Result<EisValue<T>> {
    let e = e_dense(engine, z, params, base)?;
    let w = engine.path(&PathPoint::Interior(*z), base)?;
    let q = engine.mul(&w, &e.value);
    Ok(EisValue { value: EisPayload::Series(engine.to_series(&q)), truncation_estimate: e.estimate, cosets_used: e.count })
}

/// `Q_𝔟(z, s; f_1..f_m, ḡ_1..ḡ_n)`; the integrals end at `γz`.
#[allow(clippy::too_many_arguments)]
pub fn q_series<T: Real>(
    group: &Gamma0,
    z: &UpperHalfPoint<T>,
    params: &EisParams<T>,
    f: &[CuspForm<T>],
    g: &[CuspForm<T>],
    base: &PathPoint<T>,
    config: EngineConfig,
) -> Result<EisValue<T>> {
    if f.is_empty() && g.is_empty() {
        return classical_e(group, z, params);
    }
    let engine = slot_engine(group, f, g, config)?;
    let q = q_calligraphic(&engine, z, params, base)?;
    let v = q.series().expect("series payload").coeff(&top_word(f.len(), g.len()));
    Ok(EisValue { value: EisPayload::Scalar(v), ..q })
}

/// `⟨γ, f_slot⟩ = 2πi ∫_{z₀}^{γz₀} f_slot`, from the degree-1 part of the
/// engine's path series.
pub fn pairing<T: Real>(engine: &SymbolEngine<T>, gamma: &GroupElement, slot: usize, z0: &PathPoint<T>) -> Result<Complex<T>> {
    if slot == 0 || slot > engine.forms_f().len() {
        return Err(NcmsError::InvalidLetter(format!("X{slot}")));
    }
    if !gamma.in_gamma0(engine.group().level()) {
        return Err(NcmsError::NotInGroup(gamma.entries(), engine.group().level()));
    }
    let w = engine.path(z0, &z0.apply(gamma))?;
    Ok(engine.coeff(&w, &Word::xs(&[slot])) * two_pi_i::<T>())
}

/// `E^{m,n}_𝔟(z, s; f, g) = Σ_γ ⟨γ,f⟩^m conj(⟨γ,g⟩)^n Im(σ_𝔟⁻¹γz)^s`,
/// with pairings computed along paths from `z₀`.
#[allow(clippy::too_many_arguments)]
pub fn e_mn<T: Real>(
    group: &Gamma0,
    z: &UpperHalfPoint<T>,
    params: &EisParams<T>,
    f: &CuspForm<T>,
    g: &CuspForm<T>,
    m: u32,
    n: u32,
    z0: &PathPoint<T>,
    config: EngineConfig,
) -> Result<EisValue<T>> {
    let engine = SymbolEngine::new(group.clone(), vec![f.clone(), g.clone()], Vec::new(), EngineConfig { degree: 1, ..config })?;
    engine.manin_symbols()?;
    let twist = |gm: &GroupElement| -> Result<Dense<T>> {
        let pf = if m > 0 { pairing(&engine, gm, 1, z0)?.powu(m) } else { Complex::new(T::one(), T::zero()) };
        let pg = if n > 0 { pairing(&engine, gm, 2, z0)?.conj().powu(n) } else { Complex::new(T::one(), T::zero()) };
        Ok(vec![Complex::new(T::one(), T::zero()), pf * pg])
    };
    let r = coset_sum(group, z, params, 2, Some(&twist))?;
    Ok(EisValue { value: EisPayload::Scalar(r.value[1]), truncation_estimate: r.estimate, cosets_used: r.count })
}

/// `(1/N)·Σ_{x_j = j/N} F(σ_𝔟(x_j+iy))·e(−k x_j)`.
pub fn fourier_coefficient<T: Real, F>(group: &Gamma0, cusp: CuspLabel, evaluator: F, k: i64, y: T, npoints: usize) -> Result<Complex<T>>
where
    F: Fn(&UpperHalfPoint<T>) -> Result<Complex<T>>,
{
    if npoints < 8 {
        return Err(NcmsError::Domain(format!("need at least 8 quadrature points, got {npoints}")));
    }
    let sigma = group.scaling_matrix::<T>(cusp)?;
    let np = T::from_int(npoints as i64);
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..npoints {
        let x = T::from_int(j as i64) / np;
        let w = sigma.apply(&UpperHalfPoint::new(x, y)?);
        let phase = Complex::from_polar(T::one(), -T::TAU() * T::from_int(k) * x);
        acc = acc + evaluator(&w)? * phase;
    }
    Ok(acc / np)
}

/// `W_s(kz) = 2√(|k|y)·K_{s−½}(2π|k|y)·e(kx)`.
pub fn whittaker_w<T: Real>(s: Complex<T>, k: i64, z: &UpperHalfPoint<T>) -> Result<Complex<T>> {
    if k == 0 {
        return Err(NcmsError::Domain("Whittaker function needs k ≠ 0".into()));
    }
    let ky = T::from_int(k.abs()) * z.y;
    let arg = T::TAU() * ky;
    if arg < T::lit(1e-8) {
        return Err(NcmsError::Range(format!("2π|k|y = {arg} is too small")));
    }
    let kv = bessel_k(s - T::lit(0.5), arg)?;
    let phase = Complex::from_polar(T::one(), T::TAU() * T::from_int(k) * z.x);
    Ok(kv * (T::lit(2.0) * ky.sqrt()) * phase)
}

/// Outcome of the finite-difference eigenvalue check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplacianReport {
    pub residual: f64,
    /// False when `|F(z)|` was too small and the residual is absolute.
    pub relative: bool,
}

/// `|ΔF − s(s−1)F| / |F|` at `z` with a 5-point stencil of step `h`.
pub fn laplacian_residual<T: Real, F>(evaluator: F, z: &UpperHalfPoint<T>, s: Complex<T>, h: T) -> Result<LaplacianReport>
where
    F: Fn(&UpperHalfPoint<T>) -> Result<Complex<T>>,
{
    if !(h > T::zero()) || h >= z.y {
        return Err(NcmsError::Domain("step must satisfy 0 < h < Im z".into()));
    }
    let at = |dx: T, dy: T| evaluator(&UpperHalfPoint { x: z.x + dx, y: z.y + dy });
    let f0 = at(T::zero(), T::zero())?;
    let lap = (at(h, T::zero())? + at(-h, T::zero())? + at(T::zero(), h)? + at(T::zero(), -h)? - f0 * T::lit(4.0))
        * (z.y * z.y / (h * h));
    let r = (lap - f0 * s * (s - T::one())).norm().to_f64_lossy();
    let mag = f0.norm().to_f64_lossy();
    Ok(if mag < 1e-12 {
        LaplacianReport { residual: r, relative: false }
    } else {
        LaplacianReport { residual: r / mag, relative: true }
    })
}

/// `y_Γ(z) = max_{𝔞,γ} Im(σ_𝔞⁻¹γz)` and `y_F(z) = max_𝔞 Im(σ_𝔞⁻¹z)`.
pub fn heights<T: Real>(group: &Gamma0, z: &UpperHalfPoint<T>) -> HeightReport {
    let y_f = group.domain_height(z);
    let y_gamma = group.reduce_point(z).height.max(y_f);
    HeightReport { y_gamma, y_f }
}

/// `|(F|(γ_1−I)…(γ_n−I))(z)|` with `(F|γ)(z) = F(γz)`, expanded over the
/// `2ⁿ` subsets.
pub fn higher_order_residual<T: Real, F>(evaluator: F, word: &[GroupElement], z: &UpperHalfPoint<T>) -> Result<f64>
where
    F: Fn(&UpperHalfPoint<T>) -> Result<Complex<T>>,
{
    let n = word.len();
    if n > MAX_HIGHER_ORDER {
        return Err(NcmsError::CostGuard(format!("word length {n} exceeds {MAX_HIGHER_ORDER}")));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for mask in 0u32..(1 << n) {
        let mut g = GroupElement::identity();
        for (i, gi) in word.iter().enumerate() {
            if mask & (1 << i) != 0 {
                g = g.mul(gi);
            }
        }
        let sign = if (n as u32 - mask.count_ones()).is_multiple_of(2) { T::one() } else { -T::one() };
        acc = acc + evaluator(&g.apply(z))? * sign;
    }
    Ok(acc.norm().to_f64_lossy())
}
