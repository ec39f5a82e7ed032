//! A fast, self-contained identity suite with one named row per identity.
//!
//! Each row records the measured residual, the tolerance it is held to and
//! an anchor naming the identity it exercises.

use crate::cusp_forms::CuspForm;
use crate::eisenstein::{classical_e, e_calligraphic, e_mn, laplacian_residual, pairing, twisted_e, EisParams};
use crate::error::Result;
use crate::free_series::Word;
use crate::iterated_integrals::{EngineConfig, PathPoint, SymbolEngine};
use crate::modular_group::{CuspLabel, Gamma0, UpperHalfPoint};
use crate::scalar::two_pi_i;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub form: CuspForm<f64>,
    pub s: Complex<f64>,
    pub z: UpperHalfPoint<f64>,
    pub cmax: f64,
    pub engine: EngineConfig,
    /// Flips the sign used by the reversal row so that it must fail.
    pub inject_reversal_fault: bool,
}

impl VerifyConfig {
    pub fn level11() -> Result<Self> {
        Ok(VerifyConfig {
            form: CuspForm::builtin("11a", crate::cusp_forms::DEFAULT_MAX_TERMS)?,
            s: Complex::new(2.5, 0.0),
            z: UpperHalfPoint::new(0.3, 1.2)?,
            cmax: 300.0,
            engine: EngineConfig::default(),
            inject_reversal_fault: false,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    fn push(&mut self, name: &str, anchor: &str, residual: f64, tolerance: f64) {
        // NaN residuals fail
        let passed = residual <= tolerance;
        self.rows.push(CheckRow { name: name.into(), anchor: anchor.into(), residual, tolerance, passed });
    }
}

fn max_diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn symbol_rows(cfg: &VerifyConfig, group: &Gamma0, rep: &mut VerifyReport) -> Result<()> {
    let f = &cfg.form;
    let two = SymbolEngine::new(group.clone(), vec![f.clone(), f.clone()], Vec::new(), cfg.engine)?;
    let a = PathPoint::interior(0.1, 0.9)?;
    let b = PathPoint::interior(0.7, 0.4)?;
    let c = PathPoint::interior(-0.3, 1.5)?;

    let ab = two.path(&a, &b)?;
    let bc = two.path(&b, &c)?;
    let ac = two.path(&a, &c)?;
    rep.push("concatenation", "concatenation of paths", max_diff(&ac, &two.mul(&ab, &bc)), 1e-9);

    let ba = two.path(&b, &a)?;
    let sign_flip = if cfg.inject_reversal_fault { -1.0 } else { 1.0 };
    let mut res = 0f64;
    for w in two.basis().words().iter().filter(|w| w.degree() > 0) {
        let xs = w.x_part();
        let rev: Vec<usize> = xs.iter().rev().copied().collect();
        let sign = if xs.len() % 2 == 0 { 1.0 } else { -1.0 } * sign_flip;
        let lhs = two.coeff(&ab, w);
        let rhs = two.coeff(&ba, &Word::xs(&rev)) * sign;
        res = res.max((lhs - rhs).norm());
    }
    rep.push("reversal", "path reversal", res, 1e-9);

    let one = SymbolEngine::new(group.clone(), vec![f.clone()], Vec::new(), cfg.engine)?;
    let p = one.path(&a, &c)?;
    let c1 = one.coeff(&p, &Word::xs(&[1]));
    let mut res = 0f64;
    let mut fact = 1.0;
    for n in 2..=cfg.engine.degree {
        fact *= n as f64;
        let cn = one.coeff(&p, &Word::xs(&vec![1; n]));
        res = res.max((cn - c1.powu(n as u32) / fact).norm());
    }
    rep.push("power", "repeated single form", res, 1e-9);

    let shuffle = (one.coeff(&p, &Word::xs(&[1])).powu(2) - two.coeff(&ac, &Word::xs(&[1, 2])) - two.coeff(&ac, &Word::xs(&[2, 1]))).norm();
    rep.push("shuffle", "shuffle product (1,1)", shuffle, 1e-9);

    let g = group.element(7, -2, 11, -3)?;
    let moved = two.path(&a.apply(&g), &c.apply(&g))?;
    rep.push("gamma-invariance", "invariance under the group", max_diff(&moved, &ac), 1e-8);

    let mut res = 0f64;
    for par in [group.element(1, 1, 0, 1)?, group.element(1, 0, 11, 1)?, group.element(1, 0, -22, 1)?] {
        let sym = two.symbol(&par, &a)?;
        res = res.max(max_diff(&sym, &two.one()));
    }
    rep.push("parabolic", "parabolic symbols vanish", res, 1e-8);

    let at_a = two.symbol(&g, &a)?;
    let at_c = two.symbol(&g, &c)?;
    let moved = two.mul(&two.mul(&two.path(&c, &a)?, &at_a), &ac);
    rep.push("base-point", "change of base point", max_diff(&at_c, &moved), 1e-8);

    // W_{γ∞}^{i∞} = W_{i∞}^{z}·W_{γz}^{z}·W_{z}^{i∞} by invariance and concatenation
    let zp = PathPoint::Interior(cfg.z);
    let up = two.path(&zp, &PathPoint::infinity())?;
    let via = two.mul(&two.mul(&two.inv(&up), &two.path(&zp.apply(&g), &zp)?), &up);
    let cusp = two.cusp_symbol(&g)?;
    rep.push("cusp-symbol", "cusp route versus interior route", max_diff(&cusp, &via), 1e-8);

    let e1 = SymbolEngine::new(group.clone(), vec![f.clone()], Vec::new(), EngineConfig { degree: 1, ..cfg.engine })?;
    let g2 = group.element(8, -3, 11, -4)?;
    let z0s = [PathPoint::interior(0.0, 1.0)?, PathPoint::interior(0.45, 0.15)?, PathPoint::interior(-0.2, 0.6)?];
    let p0 = pairing(&e1, &g, 1, &z0s[0])?;
    let mut res = 0f64;
    for z0 in &z0s[1..] {
        res = res.max((pairing(&e1, &g, 1, z0)? - p0).norm());
    }
    rep.push("pairing-base", "pairing independent of base point", res, 1e-10);
    let hom = pairing(&e1, &g.mul(&g2), 1, &z0s[0])? - p0 - pairing(&e1, &g2, 1, &z0s[0])?;
    rep.push("pairing-hom", "pairing is a homomorphism", hom.norm(), 1e-10);
    Ok(())
}

fn eisenstein_rows(cfg: &VerifyConfig, group: &Gamma0, rep: &mut VerifyReport) -> Result<()> {
    let f = &cfg.form;
    let params = EisParams::new(cfg.s, CuspLabel::Infinity, cfg.cmax)?;
    let z = cfg.z;
    let e0 = classical_e(group, &z, &params)?.scalar().unwrap_or_default();
    let shifted = classical_e(group, &UpperHalfPoint::new(z.x + 1.0, z.y)?, &params)?.scalar().unwrap_or_default();
    rep.push("translation", "invariance under z ↦ z+1", rel(shifted, e0), 1e-12);

    let eng = SymbolEngine::new(group.clone(), vec![f.clone()], vec![f.clone()], EngineConfig { degree: 2, ..cfg.engine })?;
    let cal = e_calligraphic(&eng, &z, &params, &PathPoint::infinity())?;
    let series = cal.series().cloned().unwrap_or_else(|| crate::free_series::FreeSeries::one(1, 1, 2));
    let tw = twisted_e(group, &z, &params, std::slice::from_ref(f), &[], &PathPoint::infinity(), cfg.engine)?;
    let tw = tw.scalar().unwrap_or_default();
    let mut res = rel(series.coeff(&Word::xs(&[1])), tw);
    res = res.max(rel(series.constant(), e0));
    rep.push("word-coefficient", "series coefficients are the twisted series", res, 1e-12);

    let emn = e_mn(group, &z, &params, f, f, 1, 0, &PathPoint::interior(0.0, 1.0)?, cfg.engine)?;
    let bridge = -emn.scalar().unwrap_or_default() / two_pi_i::<f64>();
    rep.push("bridge", "twisted series versus pairing powers", rel(tw, bridge), 1e-6);

    let eval = |w: &UpperHalfPoint<f64>| -> Result<Complex<f64>> {
        Ok(classical_e(group, w, &params)?.scalar().unwrap_or_default())
    };
    let lap = laplacian_residual(eval, &z, cfg.s, 1e-3)?;
    rep.push("laplacian", "eigenfunction of the Laplacian", lap.residual, 1e-3);
    Ok(())
}

/// Runs every row; errors inside a computation abort the run.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let group = Gamma0::new(cfg.form.level() as i64)?;
    let mut rep = VerifyReport { rows: Vec::new() };
    symbol_rows(cfg, &group, &mut rep)?;
    eisenstein_rows(cfg, &group, &mut rep)?;
    Ok(rep)
}
