//! Statistics of the modular-symbol pairing `⟨γ, f⟩` over bottom rows
//! `(c, d)` with `c² + d² ≤ T`.
//!
//! `⟨γ, f⟩` depends only on `Γ_∞γ`, so each admissible bottom row is one
//! sample; it is read off the cusp symbol `W_{γ∞}^{i∞}` at degree 1.

use crate::cusp_forms::CuspForm;
use crate::error::{NcmsError, Result};
use crate::free_series::Word;
use crate::iterated_integrals::{EngineConfig, SymbolEngine};
use crate::modular_group::{ext_gcd, gcd, Gamma0, GroupElement};
use crate::scalar::two_pi_i;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Largest `T` accepted by [`pairing_table`].
pub const MAX_T: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingRow {
    pub c: i64,
    pub d: i64,
    pub re_pairing: f64,
    pub im_pairing: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingSummary {
    pub t: f64,
    pub count: usize,
    /// `Σ |⟨γ, f⟩|²`.
    pub second_moment: f64,
    /// Moments of `Re⟨γ, f⟩ / √log(c² + d²)`.
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

/// An element of `Γ₀(N)` with bottom row `(c, d)`, `gcd(c, d) = 1`.
pub fn element_with_bottom_row(c: i64, d: i64) -> Result<GroupElement> {
    let (g, s, t) = ext_gcd(c, d);
    if g.abs() != 1 {
        return Err(NcmsError::Domain(format!("bottom row ({c}, {d}) is not coprime")));
    }
    // s·c + t·d = g, so (t·g)·d − (−s·g)·c = 1
    GroupElement::new(t * g, -s * g, c, d)
}

/// All `(c, d)` with `c > 0`, `N | c`, `gcd(c, d) = 1`, `c² + d² ≤ T`,
/// ordered by `c` then `d`, with `⟨γ, f⟩`.
pub fn pairing_table(group: &Gamma0, f: &CuspForm<f64>, t: f64, config: EngineConfig) -> Result<Vec<PairingRow>> {
    if !(t >= 0.0) || t > MAX_T {
        return Err(NcmsError::CostGuard(format!("T = {t} is outside [0, {MAX_T}]")));
    }
    let engine = SymbolEngine::new(group.clone(), vec![f.clone()], Vec::new(), EngineConfig { degree: 1, ..config })?;
    let n = group.level() as i64;
    let x1 = Word::xs(&[1]);
    let mut rows = Vec::new();
    let mut c = n;
    while (c * c) as f64 <= t {
        let dmax = (t - (c * c) as f64).sqrt().floor() as i64;
        for d in -dmax..=dmax {
            if gcd(c, d) != 1 {
                continue;
            }
            let g = element_with_bottom_row(c, d)?;
            // ⟨γ, f⟩ = 2πi·C_{i∞}^{γ∞}(f) and the cusp symbol runs γ∞ → i∞
            let p = -engine.coeff(&engine.cusp_symbol(&g)?, &x1) * two_pi_i::<f64>();
            rows.push(PairingRow { c, d, re_pairing: p.re, im_pairing: p.im });
        }
        c += n;
    }
    Ok(rows)
}

pub fn summarize(rows: &[PairingRow], t: f64) -> PairingSummary {
    let second_moment = rows.iter().map(|r| Complex::new(r.re_pairing, r.im_pairing).norm_sqr()).sum();
    let vals: Vec<f64> = rows
        .iter()
        .map(|r| r.re_pairing / (((r.c * r.c + r.d * r.d) as f64).ln()).sqrt())
        .collect();
    let count = vals.len();
    let (mut mean, mut variance, mut skewness) = (0.0, 0.0, 0.0);
    if count > 0 {
        mean = vals.iter().sum::<f64>() / count as f64;
        variance = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count as f64;
        if variance > 0.0 {
            skewness = vals.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / count as f64 / variance.powf(1.5);
        }
    }
    PairingSummary { t, count, second_moment, mean, variance, skewness }
}

/// CSV with the fixed header `c,d,re_pairing,im_pairing`.
pub fn to_csv(rows: &[PairingRow]) -> String {
    let mut out = String::from("c,d,re_pairing,im_pairing\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.17e},{:.17e}\n", r.c, r.d, r.re_pairing, r.im_pairing));
    }
    out
}
