//! Iterated integrals of cusp forms in closed form, the generating series
//! `I_a^b(X)·J̄_a^b(Ȳ)` between arbitrary endpoints, and noncommutative
//! modular symbols.
//!
//! Every integral is evaluated term by term from the q-expansions: along a
//! segment `u → v` in the coordinates of one cusp the nested integral of
//! exponentials is an exponential polynomial in the endpoints. Endpoints
//! that sit too close to the real axis are first moved up by an element of
//! Γ₀(N); the resulting correction `I_∞^{δ∞}` is a product of Manin-type
//! symbols read off from the continued fraction of `δ∞`.

use crate::cusp_forms::{CuspForm, DEFAULT_MAX_TERMS};
use crate::error::{NcmsError, Result};
use crate::free_series::{Basis, FreeSeries, Word};
use crate::modular_group::{Cusp, CuspLabel, Gamma0, GroupElement, UpperHalfPoint};
use crate::scalar::{e2pi, two_pi_i, Real};
use num_complex::Complex;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// Dense coefficient vector over an engine's [`Basis`].
pub type Dense<T> = Vec<Complex<T>>;

/// Endpoint of a path: a point of ℍ or a cusp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPoint<T: Real> {
    Interior(UpperHalfPoint<T>),
    CuspPoint(Cusp),
}

impl<T: Real> PathPoint<T> {
    pub fn interior(x: T, y: T) -> Result<Self> {
        Ok(PathPoint::Interior(UpperHalfPoint::new(x, y)?))
    }

    pub fn infinity() -> Self {
        PathPoint::CuspPoint(Cusp::infinity())
    }

    pub fn cusp(num: i64, den: i64) -> Self {
        PathPoint::CuspPoint(Cusp::new(num, den))
    }

    pub fn apply(&self, g: &GroupElement) -> Self {
        match self {
            PathPoint::Interior(z) => PathPoint::Interior(g.apply(z)),
            PathPoint::CuspPoint(c) => PathPoint::CuspPoint(g.apply_cusp(c)),
        }
    }

    /// Accepts `inf`/`i∞`, a rational `p/q` or integer (a cusp), or a
    /// complex number `x+yi`, `x-yi`, `yi`, `i`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if matches!(t.as_str(), "inf" | "i∞" | "∞" | "iinf" | "infinity") {
            return Ok(Self::infinity());
        }
        let bad = || NcmsError::Parse(format!("cannot read point `{s}`"));
        if !t.ends_with('i') {
            let (p, q) = match t.split_once('/') {
                Some((p, q)) => (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?),
                None => (t.parse().map_err(|_| bad())?, 1i64),
            };
            if q == 0 {
                return Err(bad());
            }
            return Ok(Self::cusp(p, q));
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let num = |u: &str| -> Result<f64> {
            match u {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => u.parse().map_err(|_| bad()),
            }
        };
        let (x, y) = match split {
            Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
            None => (0.0, num(body)?),
        };
        Self::interior(T::lit(x), T::lit(y))
    }
}

impl<T: Real> fmt::Display for PathPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathPoint::CuspPoint(c) if c.is_infinity() => write!(f, "i∞"),
            PathPoint::CuspPoint(c) => write!(f, "{c}"),
            PathPoint::Interior(z) => write!(f, "{}{:+}i", z.x, z.y),
        }
    }
}

/// `constant + Σ coefficient·e(frequency·w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTermList<T: Real> {
    pub constant: Complex<T>,
    pub terms: Vec<(i64, Complex<T>)>,
}

impl<T: Real> ExpTermList<T> {
    pub fn one() -> Self {
        ExpTermList { constant: Complex::new(T::one(), T::zero()), terms: Vec::new() }
    }

    /// `w ↦ ∫_u^w e(m w')·F(w') dw'`; `u = None` stands for i∞.
    pub fn integrate(&self, m: i64, u: Option<Complex<T>>) -> Result<Self> {
        if m <= 0 {
            return Err(NcmsError::InvalidFrequency(m));
        }
        let tpi = two_pi_i::<T>();
        let mut acc: BTreeMap<i64, Complex<T>> = BTreeMap::new();
        let zero = Complex::new(T::zero(), T::zero());
        if self.constant != zero {
            let e = acc.entry(m).or_insert(zero);
            *e = *e + self.constant / (tpi * T::from_int(m));
        }
        for &(s, a) in &self.terms {
            let f = s + m;
            let e = acc.entry(f).or_insert(zero);
            *e = *e + a / (tpi * T::from_int(f));
        }
        let terms: Vec<(i64, Complex<T>)> = acc.into_iter().collect();
        let constant = match u {
            None => zero,
            Some(u) => -terms.iter().fold(zero, |s, &(f, a)| s + a * e2pi(u * T::from_int(f))),
        };
        Ok(ExpTermList { constant, terms })
    }

    /// Value at `v` (`None` = i∞, where only the constant survives).
    pub fn eval(&self, v: Option<Complex<T>>) -> Complex<T> {
        match v {
            None => self.constant,
            Some(v) => self.terms.iter().fold(self.constant, |s, &(f, a)| s + a * e2pi(v * T::from_int(f))),
        }
    }
}

fn check_endpoint<T: Real>(p: Option<Complex<T>>) -> Result<()> {
    match p {
        Some(z) if !(z.im > T::zero()) => Err(NcmsError::NotInUpperHalfPlane(z.im.to_f64_lossy())),
        _ => Ok(()),
    }
}

/// `∫_u^v e(m_n w_n) ∫_u^{w_n} … ∫_u^{w_2} e(m_1 w_1) dw_1 … dw_n` in
/// closed form; `None` endpoints stand for i∞.
pub fn exp_iterated_integral<T: Real>(freqs: &[i64], u: Option<Complex<T>>, v: Option<Complex<T>>) -> Result<Complex<T>> {
    check_endpoint(u)?;
    check_endpoint(v)?;
    if freqs.is_empty() {
        return Err(NcmsError::Domain("at least one frequency is required".into()));
    }
    let mut f = ExpTermList::one();
    for &m in freqs {
        f = f.integrate(m, u)?;
    }
    Ok(f.eval(v))
}

/// Smallest total frequency `M` such that the tuples with `m₁+…+m_n > M`
/// contribute less than `tol` along a path of minimal height `y`, using
/// `Σ_{T>M} 2ⁿ (2T)^{2n} e^{-2πTy}`.
pub fn truncation_order(y: f64, n: usize, tol: f64, cap: usize) -> Result<usize> {
    if n == 0 {
        return Ok(0);
    }
    if !(y > 0.0) {
        return Err(NcmsError::NotInUpperHalfPlane(y));
    }
    let nn = n as f64;
    let log_term = |t: f64| nn * 2f64.ln() + 2.0 * nn * (2.0 * t).ln() - std::f64::consts::TAU * t * y;
    let log_tol = tol.ln();
    for m in 1..=cap {
        let t = (m + 1) as f64;
        let log_ratio = 2.0 * nn * ((t + 1.0) / t).ln() - std::f64::consts::TAU * y;
        if log_ratio < 0.0 {
            // terms decrease from here on with decreasing ratio
            let bound = log_term(t) - (1.0 - log_ratio.exp()).ln();
            if bound < log_tol {
                return Ok(m);
            }
        }
    }
    Err(NcmsError::Truncation(format!(
        "frequency cap {cap} cannot reach tolerance {tol:e} at height {y}"
    )))
}

/// Precomputed powers `e(t·u)`, `e(t·v)` for a segment.
struct Segment<T: Real> {
    m: usize,
    pu: Option<Vec<Complex<T>>>,
    pv: Option<Vec<Complex<T>>>,
}

fn powers<T: Real>(z: Complex<T>, m: usize) -> Vec<Complex<T>> {
    let q = e2pi(z);
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..=m {
        out.push(acc);
        acc = acc * q;
    }
    out
}

impl<T: Real> Segment<T> {
    fn new(u: Option<Complex<T>>, v: Option<Complex<T>>, m: usize) -> Self {
        Segment { m, pu: u.map(|z| powers(z, m)), pv: v.map(|z| powers(z, m)) }
    }

    fn start(&self) -> Vec<Complex<T>> {
        let mut f = vec![Complex::new(T::zero(), T::zero()); self.m + 1];
        f[0] = Complex::new(T::one(), T::zero());
        f
    }

    /// One integration step against `Σ c(k) e(kw)`; entry `t` of the
    /// vectors is the coefficient of `e(tw)`, entry 0 the constant.
    fn step(&self, prev: &[Complex<T>], c: &[Complex<T>]) -> Vec<Complex<T>> {
        let m = self.m;
        let tpi = two_pi_i::<T>();
        let zero = Complex::new(T::zero(), T::zero());
        let mut next = vec![zero; m + 1];
        for t in 1..=m {
            let mut b = zero;
            for k in 1..=t {
                b = b + c[k] * prev[t - k];
            }
            next[t] = b / (tpi * T::from_int(t as i64));
        }
        if let Some(pu) = &self.pu {
            next[0] = -(1..=m).fold(zero, |s, t| s + next[t] * pu[t]);
        }
        next
    }

    fn eval(&self, f: &[Complex<T>]) -> Complex<T> {
        match &self.pv {
            None => f[0],
            Some(pv) => (1..=self.m).fold(f[0], |s, t| s + f[t] * pv[t]),
        }
    }

    /// Values of every word of length ≤ `depth` over the coefficient sets,
    /// keyed by the 1-based index sequence (first index innermost).
    fn words(&self, sets: &[Vec<Complex<T>>], depth: usize) -> BTreeMap<Vec<usize>, Complex<T>> {
        let mut out = BTreeMap::new();
        out.insert(Vec::new(), Complex::new(T::one(), T::zero()));
        let mut stack = vec![(Vec::new(), self.start())];
        while let Some((word, f)) = stack.pop() {
            if word.len() == depth {
                continue;
            }
            for (i, c) in sets.iter().enumerate() {
                let g = self.step(&f, c);
                let mut w = word.clone();
                w.push(i + 1);
                out.insert(w.clone(), self.eval(&g));
                stack.push((w, g));
            }
        }
        out
    }
}

/// Numerical settings shared by every computation of an engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    /// Truncation degree `D` of the generating series.
    pub degree: usize,
    /// Target error for each iterated integral.
    pub tol: f64,
    /// Heights below this are moved up by Γ₀(N) before integrating.
    pub y_min: f64,
    /// Cap on the total frequency of the multi-sums.
    pub max_terms: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { degree: 3, tol: 1e-10, y_min: 0.05, max_terms: DEFAULT_MAX_TERMS }
    }
}

/// Computes generating series `W_a^b = I_a^b(𝐟; X)·J̄_a^b(𝐠; Ȳ)` for a fixed
/// level, form tuples `𝐟 = (f_1..f_r)`, `𝐠 = (g_1..g_t)` and degree.
#[derive(Debug)]
pub struct SymbolEngine<T: Real> {
    group: Gamma0,
    f: Vec<CuspForm<T>>,
    g: Vec<CuspForm<T>>,
    config: EngineConfig,
    basis: Basis,
    /// Indices of pure-X and pure-Ȳ words in `basis`, by index sequence.
    x_index: Vec<(Vec<usize>, Vec<usize>, usize)>,
    manin: OnceLock<Vec<Dense<T>>>,
}

impl<T: Real> SymbolEngine<T> {
    pub fn new(group: Gamma0, f: Vec<CuspForm<T>>, g: Vec<CuspForm<T>>, config: EngineConfig) -> Result<Self> {
        for form in f.iter().chain(&g) {
            if form.level() != group.level() {
                return Err(NcmsError::Domain(format!(
                    "form {} has level {}, group has level {}",
                    form.label(),
                    form.level(),
                    group.level()
                )));
            }
            if group.has_cusp(CuspLabel::Zero) {
                form.cusp_sign(CuspLabel::Zero)?;
            }
        }
        if !(config.tol > 0.0) || !(config.y_min > 0.0) {
            return Err(NcmsError::Domain("tolerance and minimal height must be positive".into()));
        }
        let basis = Basis::new(f.len(), g.len(), config.degree);
        let x_index = basis
            .words()
            .iter()
            .enumerate()
            .map(|(k, w)| (w.x_part(), w.y_part(), k))
            .collect();
        Ok(SymbolEngine { group, f, g, config, basis, x_index, manin: OnceLock::new() })
    }

    pub fn group(&self) -> &Gamma0 {
        &self.group
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn forms_f(&self) -> &[CuspForm<T>] {
        &self.f
    }

    pub fn forms_g(&self) -> &[CuspForm<T>] {
        &self.g
    }

    pub fn one(&self) -> Dense<T> {
        self.basis.one()
    }

    pub fn mul(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Dense<T> {
        self.basis.mul(a, b)
    }

    pub fn inv(&self, a: &[Complex<T>]) -> Dense<T> {
        self.basis.inverse(a)
    }

    pub fn to_series(&self, v: &[Complex<T>]) -> FreeSeries<T> {
        self.basis.to_series(v)
    }

    pub fn from_series(&self, s: &FreeSeries<T>) -> Result<Dense<T>> {
        let (x, y) = s.alphabet();
        let (bx, by) = self.basis.alphabet();
        if (x, y) != (bx, by) {
            return Err(NcmsError::AlphabetMismatch(x, y, bx, by));
        }
        Ok(self.basis.from_series(s))
    }

    fn n(&self) -> T {
        T::from_int(self.group.level() as i64)
    }

    fn zero_chart(&self) -> bool {
        self.group.has_cusp(CuspLabel::Zero)
    }

    /// `σ₀⁻¹ z = −1/(Nz)`.
    fn to_zero_chart(&self, z: Complex<T>) -> Complex<T> {
        -(z * self.n()).inv()
    }

    fn zero_height(&self, z: &UpperHalfPoint<T>) -> T {
        z.y / (self.n() * z.to_complex().norm_sqr())
    }

    /// Coordinates of an endpoint in the chart of a cusp (`None` = i∞).
    pub fn chart_coordinate(&self, p: &PathPoint<T>, chart: CuspLabel) -> Result<Option<Complex<T>>> {
        if chart == CuspLabel::Zero && !self.zero_chart() {
            return Err(NcmsError::UnsupportedCusp(format!("cusp 0 for level {}", self.group.level())));
        }
        match (p, chart) {
            (PathPoint::Interior(z), CuspLabel::Infinity) => Ok(Some(z.to_complex())),
            (PathPoint::Interior(z), CuspLabel::Zero) => Ok(Some(self.to_zero_chart(z.to_complex()))),
            (PathPoint::CuspPoint(c), _) if *c == chart.value() => Ok(None),
            (PathPoint::CuspPoint(c), _) => Err(NcmsError::UnsupportedCusp(format!(
                "cusp {c} is not the point at infinity of the {} chart",
                chart.name()
            ))),
        }
    }

    fn coefficient_sets(&self, forms: &[&CuspForm<T>], chart: CuspLabel, m: usize) -> Result<Vec<Vec<Complex<T>>>> {
        forms
            .iter()
            .map(|f| {
                if f.len() < m {
                    return Err(NcmsError::Truncation(format!(
                        "form {} has {} coefficients, {} needed",
                        f.label(),
                        f.len(),
                        m
                    )));
                }
                let mut c = f.coefficients_at_cusp(chart)?;
                c.truncate(m + 1);
                Ok(c)
            })
            .collect()
    }

    fn order_for(&self, u: Option<Complex<T>>, v: Option<Complex<T>>, n: usize) -> Result<usize> {
        let y = [u, v].iter().flatten().map(|z| z.im.to_f64_lossy()).fold(f64::INFINITY, f64::min);
        let cap = self.config.max_terms;
        truncation_order(y, n, self.config.tol, cap)
    }

    /// `C_a^b(f_1, …, f_n)` with the integral taken along the straight
    /// segment in the coordinates of `chart`.
    pub fn compute_c(&self, a: &PathPoint<T>, b: &PathPoint<T>, forms: &[&CuspForm<T>], chart: CuspLabel) -> Result<Complex<T>> {
        let u = self.chart_coordinate(a, chart)?;
        let v = self.chart_coordinate(b, chart)?;
        if forms.is_empty() || (u.is_none() && v.is_none()) || u == v {
            return Ok(if forms.is_empty() { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) });
        }
        let m = self.order_for(u, v, forms.len())?;
        let sets = self.coefficient_sets(forms, chart, m)?;
        let seg = Segment::new(u, v, m);
        let mut f = seg.start();
        for c in &sets {
            f = seg.step(&f, c);
        }
        Ok(seg.eval(&f))
    }

    /// `W` along a straight segment in chart coordinates.
    fn segment(&self, chart: CuspLabel, u: Option<Complex<T>>, v: Option<Complex<T>>) -> Result<Dense<T>> {
        check_endpoint(u)?;
        check_endpoint(v)?;
        if (u.is_none() && v.is_none()) || u == v {
            return Ok(self.one());
        }
        let d = self.config.degree;
        let m = self.order_for(u, v, d)?;
        let seg = Segment::new(u, v, m);
        let fs: Vec<&CuspForm<T>> = self.f.iter().collect();
        let gs: Vec<&CuspForm<T>> = self.g.iter().collect();
        let xv = seg.words(&self.coefficient_sets(&fs, chart, m)?, d);
        let yv = seg.words(&self.coefficient_sets(&gs, chart, m)?, d);
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.basis.len()];
        for (xs, ys, k) in &self.x_index {
            out[*k] = xv[xs] * yv[ys].conj();
        }
        Ok(out)
    }

    /// `W_p^{i∞}` for an interior point.
    pub fn to_infinity(&self, p: &UpperHalfPoint<T>) -> Result<Dense<T>> {
        let y_min = T::lit(self.config.y_min);
        if p.y >= y_min {
            return self.segment(CuspLabel::Infinity, Some(p.to_complex()), None);
        }
        if self.zero_chart() && self.zero_height(p) >= y_min {
            return self.via_zero_chart(p);
        }
        let r = self.group.reduce_point(p);
        let q = r.element.apply(p);
        let head = match r.chart {
            CuspLabel::Infinity => self.segment(CuspLabel::Infinity, Some(q.to_complex()), None)?,
            CuspLabel::Zero => self.via_zero_chart(&q)?,
        };
        let tail = self.infinity_to_cusp(&r.element.apply_cusp(&Cusp::infinity()))?;
        Ok(self.mul(&head, &tail))
    }

    /// `W_p^0 · W_0^{i∞}`.
    fn via_zero_chart(&self, p: &UpperHalfPoint<T>) -> Result<Dense<T>> {
        let u = self.to_zero_chart(p.to_complex());
        let head = self.segment(CuspLabel::Zero, Some(u), None)?;
        Ok(self.mul(&head, &self.manin_symbols()?[0]))
    }

    /// Symbols `W_{r0}^{r∞}` for the coset representatives `r` of
    /// `Γ₀(N)\SL₂(ℤ)` (see [`Gamma0::sl2z_coset_rep`]).
    pub fn manin_symbols(&self) -> Result<&[Dense<T>]> {
        if let Some(v) = self.manin.get() {
            return Ok(v);
        }
        let v = self.compute_manin()?;
        let _ = self.manin.set(v);
        Ok(self.manin.get().expect("just set"))
    }

    fn compute_manin(&self) -> Result<Vec<Dense<T>>> {
        let level = self.group.level() as i64;
        if level == 1 {
            return Ok(vec![self.one()]);
        }
        if !self.group.is_prime_level() {
            return Err(NcmsError::UnsupportedCusp(format!(
                "cusp paths need prime level, got {level}"
            )));
        }
        let n = self.n();
        let w0 = Complex::new(T::zero(), T::one() / n.sqrt());
        // W_0^{i∞} = W_0^{w0} W_{w0}^{i∞}, the first factor in the 0 chart
        let m0 = self.mul(
            &self.segment(CuspLabel::Zero, None, Some(w0))?,
            &self.segment(CuspLabel::Infinity, Some(w0), None)?,
        );
        let mut out = vec![m0.clone(), self.inv(&m0)];
        for j in 1..level {
            // W_{-1/j}^0 in the 0 chart is W_{j/N}^{i∞} = W_{i∞}^{w} W_{γw}^{i∞}
            // with γ = (j b; N d) and γw = (j+i)/N
            let (_, d, _) = crate::modular_group::ext_gcd(j, level);
            let d = d.rem_euclid(level);
            let w = Complex::new(T::from_int(-d), T::one()) / n;
            let gw = Complex::new(T::from_int(j), T::one()) / n;
            out.push(self.mul(
                &self.segment(CuspLabel::Zero, None, Some(w))?,
                &self.segment(CuspLabel::Zero, Some(gw), None)?,
            ));
        }
        Ok(out)
    }

    /// `W_{i∞}^{c}` for a cusp `c`, as a product over its continued fraction.
    pub fn infinity_to_cusp(&self, c: &Cusp) -> Result<Dense<T>> {
        if c.is_infinity() {
            return Ok(self.one());
        }
        let manin = self.manin_symbols()?;
        let mut acc = self.one();
        for step in self.group.continued_fraction_steps(c) {
            acc = self.mul(&acc, &manin[self.group.sl2z_coset_index(&step)]);
        }
        Ok(acc)
    }

    /// `W_{γ∞}^{i∞}`.
    pub fn cusp_symbol(&self, gamma: &GroupElement) -> Result<Dense<T>> {
        Ok(self.inv(&self.infinity_to_cusp(&gamma.apply_cusp(&Cusp::infinity()))?))
    }

    /// `W_a^b` for arbitrary endpoints, routed through well-conditioned
    /// segments.
    pub fn path(&self, a: &PathPoint<T>, b: &PathPoint<T>) -> Result<Dense<T>> {
        if a == b {
            return Ok(self.one());
        }
        let y_min = T::lit(self.config.y_min);
        match (a, b) {
            (PathPoint::Interior(p), PathPoint::Interior(q)) => {
                let h_inf = p.y.min(q.y);
                let h_zero = if self.zero_chart() { self.zero_height(p).min(self.zero_height(q)) } else { T::zero() };
                if h_inf >= y_min && h_inf >= h_zero {
                    return self.segment(CuspLabel::Infinity, Some(p.to_complex()), Some(q.to_complex()));
                }
                if h_zero >= y_min {
                    let (u, v) = (self.to_zero_chart(p.to_complex()), self.to_zero_chart(q.to_complex()));
                    return self.segment(CuspLabel::Zero, Some(u), Some(v));
                }
                Ok(self.mul(&self.to_infinity(p)?, &self.inv(&self.to_infinity(q)?)))
            }
            (PathPoint::Interior(p), PathPoint::CuspPoint(c)) => {
                if c.is_infinity() {
                    return self.to_infinity(p);
                }
                if *c == Cusp::zero() && self.zero_chart() && self.zero_height(p) >= y_min {
                    return self.segment(CuspLabel::Zero, Some(self.to_zero_chart(p.to_complex())), None);
                }
                Ok(self.mul(&self.to_infinity(p)?, &self.infinity_to_cusp(c)?))
            }
            (PathPoint::CuspPoint(_), PathPoint::Interior(_)) => Ok(self.inv(&self.path(b, a)?)),
            (PathPoint::CuspPoint(c), PathPoint::CuspPoint(d)) => {
                Ok(self.mul(&self.inv(&self.infinity_to_cusp(c)?), &self.infinity_to_cusp(d)?))
            }
        }
    }

    /// `I_a^b(X)·J̄_a^b(Ȳ)`.
    pub fn path_series(&self, a: &PathPoint<T>, b: &PathPoint<T>) -> Result<FreeSeries<T>> {
        Ok(self.to_series(&self.path(a, b)?))
    }

    /// `I_a^b`: the pure-X part of [`Self::path_series`].
    pub fn i_series(&self, a: &PathPoint<T>, b: &PathPoint<T>) -> Result<FreeSeries<T>> {
        let w = self.path(a, b)?;
        Ok(self.project(&w, true))
    }

    /// `J̄_a^b`: the pure-Ȳ part of [`Self::path_series`], whose coefficients
    /// are complex conjugates of iterated integrals of the `g_j`.
    pub fn j_series(&self, a: &PathPoint<T>, b: &PathPoint<T>) -> Result<FreeSeries<T>> {
        let w = self.path(a, b)?;
        Ok(self.project(&w, false))
    }

    fn project(&self, w: &[Complex<T>], x: bool) -> FreeSeries<T> {
        let mut v = w.to_vec();
        for (xs, ys, k) in &self.x_index {
            if (x && !ys.is_empty()) || (!x && !xs.is_empty()) {
                v[*k] = Complex::new(T::zero(), T::zero());
            }
        }
        self.to_series(&v)
    }

    /// Noncommutative modular symbol `W_{γa}^a`.
    pub fn symbol(&self, gamma: &GroupElement, base: &PathPoint<T>) -> Result<Dense<T>> {
        if !gamma.in_gamma0(self.group.level()) {
            return Err(NcmsError::NotInGroup(gamma.entries(), self.group.level()));
        }
        self.path(&base.apply(gamma), base)
    }

    pub fn symbol_series(&self, gamma: &GroupElement, base: &PathPoint<T>) -> Result<FreeSeries<T>> {
        Ok(self.to_series(&self.symbol(gamma, base)?))
    }

    /// Coefficient of a word in a dense vector.
    pub fn coeff(&self, v: &[Complex<T>], w: &Word) -> Complex<T> {
        self.basis.index_of(w).map(|k| v[k]).unwrap_or_default()
    }
}
