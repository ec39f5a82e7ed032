//! Weight-2 cusp forms given by their q-expansions, with truncation-aware
//! evaluation at ∞ and at the cusp 0 of a prime level.

use crate::error::{NcmsError, Result};
use crate::modular_group::{is_prime, CuspLabel, UpperHalfPoint};
use crate::scalar::{e2pi, Real};
use num_complex::Complex;
use std::fmt::Write as _;

/// Default cap on the number of Fourier coefficients.
pub const DEFAULT_MAX_TERMS: usize = 5000;

/// `∏_{n≥1}(1 − qⁿ)` up to `q^len` by Euler's pentagonal theorem.
fn euler_product(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len + 1];
    for k in 0i64.. {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e <= len {
                out[e] += if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len + 1];
    for (i, &x) in a.iter().enumerate().take(len + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `c(0..=m)` of a built-in eta product. Only `"11a"`,
/// `η(z)²η(11z)² = q∏(1−qⁿ)²(1−q¹¹ⁿ)²`, is built in.
pub fn eta_product_coefficients(label: &str, m: usize) -> Result<Vec<i64>> {
    if label != "11a" {
        return Err(NcmsError::UnknownForm(label.to_string()));
    }
    if m == 0 {
        return Err(NcmsError::Domain("need at least one coefficient".into()));
    }
    let len = m - 1;
    let e1 = euler_product(len);
    let mut e11 = vec![0i64; len + 1];
    for (i, &v) in euler_product(len / 11).iter().enumerate() {
        e11[11 * i] = v;
    }
    let sq1 = poly_mul(&e1, &e1, len);
    let sq11 = poly_mul(&e11, &e11, len);
    let prod = poly_mul(&sq1, &sq11, len);
    let mut out = vec![0i64; m + 1];
    out[1..].copy_from_slice(&prod);
    Ok(out)
}

/// A weight-2 cusp form on Γ₀(N) given by `c(m)` at ∞.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspForm<T: Real> {
    level: u32,
    label: String,
    /// `coeffs[m] = c(m)`, with `coeffs[0] = 0`.
    coeffs: Vec<Complex<T>>,
    atkin_lehner_sign: Option<i8>,
}

impl<T: Real> CuspForm<T> {
    /// Built-in form with `m` coefficients; the Atkin–Lehner sign is
    /// computed numerically.
    pub fn builtin(label: &str, m: usize) -> Result<Self> {
        let c = eta_product_coefficients(label, m)?;
        let mut f = Self::from_integers(11, label, &c[1..], None)?;
        f.atkin_lehner_sign = Some(f.numerical_atkin_lehner_sign()?);
        Ok(f)
    }

    /// `c` holds `c(1), c(2), …`. For prime level without a supplied sign,
    /// the sign is determined numerically.
    pub fn from_integers(level: u32, label: &str, c: &[i64], sign: Option<i8>) -> Result<Self> {
        let coeffs = std::iter::once(0)
            .chain(c.iter().copied())
            .map(|v| Complex::new(T::from_int(v), T::zero()))
            .collect();
        Self::from_complex(level, label, coeffs, sign)
    }

    /// `coeffs[0]` must be zero.
    pub fn from_complex(level: u32, label: &str, coeffs: Vec<Complex<T>>, sign: Option<i8>) -> Result<Self> {
        if level == 0 {
            return Err(NcmsError::InvalidLevel(0));
        }
        if coeffs.len() < 2 {
            return Err(NcmsError::Domain("need at least one coefficient".into()));
        }
        if coeffs[0] != Complex::new(T::zero(), T::zero()) {
            return Err(NcmsError::Domain("a cusp form has c(0) = 0".into()));
        }
        for (m, c) in coeffs.iter().enumerate().skip(1) {
            if c.norm() > T::from_int(2 * m as i64) * T::from_int(d_count(m as i64)) {
                return Err(NcmsError::Domain(format!("coefficient c({m}) = {c} violates the Hecke bound")));
            }
        }
        if let Some(s) = sign {
            if s != 1 && s != -1 {
                return Err(NcmsError::Parse(format!("Atkin-Lehner sign must be ±1, got {s}")));
            }
        }
        let mut f = CuspForm { level, label: label.to_string(), coeffs, atkin_lehner_sign: sign };
        if sign.is_none() && is_prime(level as i64) {
            f.atkin_lehner_sign = Some(f.numerical_atkin_lehner_sign()?);
        }
        Ok(f)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of stored coefficients `M`.
    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn atkin_lehner_sign(&self) -> Option<i8> {
        self.atkin_lehner_sign
    }

    /// `c(m)` (zero beyond the stored range).
    pub fn coeff(&self, m: usize) -> Complex<T> {
        self.coeffs.get(m).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Exact integer coefficients, if every stored coefficient is one.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .skip(1)
            .map(|c| {
                let r = c.re.round();
                (c.im == T::zero() && c.re == r).then(|| r.to_i64()).flatten()
            })
            .collect()
    }

    /// Multiplier relating the expansion at a cusp to the one at ∞.
    pub fn cusp_sign(&self, cusp: CuspLabel) -> Result<T> {
        match cusp {
            CuspLabel::Infinity => Ok(T::one()),
            CuspLabel::Zero => {
                if !is_prime(self.level as i64) {
                    return Err(NcmsError::UnsupportedCusp(format!("cusp 0 for level {}", self.level)));
                }
                let s = self.atkin_lehner_sign.ok_or_else(|| {
                    NcmsError::UnsupportedCusp(format!("no Atkin-Lehner sign for {}", self.label))
                })?;
                Ok(T::from_int(s as i64))
            }
        }
    }

    /// `c_𝔟(m)` for `m = 0..=M`.
    pub fn coefficients_at_cusp(&self, cusp: CuspLabel) -> Result<Vec<Complex<T>>> {
        let e = self.cusp_sign(cusp)?;
        Ok(self.coeffs.iter().map(|c| c * e).collect())
    }

    /// `2·Σ_{m>M} 2m e^{-2πmy}` in closed form.
    pub fn tail_bound(m: usize, y: T) -> T {
        let q = (-T::TAU() * y).exp();
        if q >= T::one() {
            return T::infinity();
        }
        let mm = T::from_int(m as i64);
        let one = T::one();
        let s = q.powi(m as i32 + 1) * ((mm + one) - mm * q) / ((one - q) * (one - q));
        T::lit(4.0) * s
    }

    /// Smallest `M` with tail bound below `tol`, or a truncation error when
    /// it would exceed the stored coefficients.
    pub fn terms_needed(&self, y: T, tol: T) -> Result<usize> {
        let cap = self.len();
        let mut m = 1usize;
        while Self::tail_bound(m, y) > tol {
            if m >= cap {
                return Err(NcmsError::Truncation(format!(
                    "{} coefficients cannot reach {} at Im z = {}",
                    cap, tol, y
                )));
            }
            m = (m * 2).min(cap);
        }
        // shrink back by bisection
        let (mut lo, mut hi) = (m / 2, m);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if Self::tail_bound(mid, y) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi.max(1))
    }

    /// `Σ_{m≤M} c_𝔟(m) e(mz)` with `M` chosen from `tol`; returns the value
    /// and the certified truncation bound.
    pub fn eval(&self, z: &UpperHalfPoint<T>, cusp: CuspLabel, tol: T) -> Result<(Complex<T>, T)> {
        let m = self.terms_needed(z.y, tol)?;
        Ok((self.eval_truncated(z.to_complex(), m) * self.cusp_sign(cusp)?, Self::tail_bound(m, z.y)))
    }

    /// Partial sum with exactly `m` terms at ∞.
    pub fn eval_truncated(&self, z: Complex<T>, m: usize) -> Complex<T> {
        let q = e2pi(z);
        let mut qm = q;
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().take(m + 1).skip(1) {
            acc = acc + c * qm;
            qm = qm * q;
        }
        acc
    }

    /// `(f|₂σ₀)(z) = (Nz²)⁻¹ f(−1/(Nz))`, evaluated from the expansion at ∞.
    pub fn slash_zero_direct(&self, z: Complex<T>, tol: T) -> Result<Complex<T>> {
        let n = T::from_int(self.level as i64);
        let w = -(z * n).inv();
        let wp = UpperHalfPoint::from_complex(w)?;
        let (fw, _) = self.eval(&wp, CuspLabel::Infinity, tol)?;
        Ok(fw / (z * z * n))
    }

    /// Atkin–Lehner sign from `f|₂σ₀ = ε f` at a point away from the
    /// fixed point `i/√N`.
    pub fn numerical_atkin_lehner_sign(&self) -> Result<i8> {
        let n = T::from_int(self.level as i64);
        // chosen so that both z and −1/(Nz) have comparable height
        let z = Complex::new(T::lit(0.07), T::lit(0.9) / n.sqrt());
        let tol = T::lit(1e-12);
        let lhs = self.slash_zero_direct(z, tol)?;
        let (rhs, _) = self.eval(&UpperHalfPoint::from_complex(z)?, CuspLabel::Infinity, tol)?;
        let ratio = lhs / rhs;
        for s in [1i8, -1] {
            if (ratio - T::from_int(s as i64)).norm() < T::lit(1e-6) {
                return Ok(s);
            }
        }
        Err(NcmsError::Domain(format!(
            "{} is not an Atkin-Lehner eigenform (ratio {})",
            self.label, ratio
        )))
    }

    /// Reads the coefficient text format: a header
    /// `# level N label L sign ±1` then one integer per line.
    pub fn parse_coefficient_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| NcmsError::Parse("empty coefficient file".into()))?;
        let toks: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
        let field = |name: &str| -> Result<&str> {
            toks.iter()
                .position(|t| *t == name)
                .and_then(|i| toks.get(i + 1).copied())
                .ok_or_else(|| NcmsError::Parse(format!("header lacks `{name}`")))
        };
        if !header.starts_with('#') {
            return Err(NcmsError::Parse("first line must be the `#` header".into()));
        }
        let level: u32 = field("level")?.parse().map_err(|_| NcmsError::Parse("bad level".into()))?;
        let label = field("label")?.to_string();
        let sign: i8 = field("sign")?
            .trim_start_matches('+')
            .parse()
            .map_err(|_| NcmsError::Parse("bad sign".into()))?;
        let coeffs = lines
            .enumerate()
            .map(|(i, l)| l.parse::<i64>().map_err(|_| NcmsError::Parse(format!("line {}: `{l}` is not an integer", i + 2))))
            .collect::<Result<Vec<i64>>>()?;
        Self::from_integers(level, &label, &coeffs, Some(sign))
    }

    /// Inverse of [`Self::parse_coefficient_file`] (integer coefficients only).
    pub fn to_coefficient_file(&self) -> Result<String> {
        let ints = self
            .integer_coefficients()
            .ok_or_else(|| NcmsError::Domain("coefficients are not integers".into()))?;
        let sign = self.atkin_lehner_sign.unwrap_or(1);
        let mut out = format!("# level {} label {} sign {}\n", self.level, self.label, sign);
        for c in ints {
            let _ = writeln!(out, "{c}");
        }
        Ok(out)
    }
}

fn d_count(m: i64) -> i64 {
    (1..=m).take_while(|k| k * k <= m).map(|k| if m % k != 0 { 0 } else if k * k == m { 1 } else { 2 }).sum()
}
