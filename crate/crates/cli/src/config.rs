//! Run configuration: an optional TOML file overlaid by command-line flags.

use clap::Args;
use ncms::iterated_integrals::EngineConfig;
use ncms::{CuspForm64, CuspLabel, NcmsError, PathPoint64, UpperHalfPoint64};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Options shared by every command. Each is optional so that a config file
/// can supply it; flags given on the command line win.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Form list for the X variables: built-in labels or coefficient files, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub forms: Option<Vec<String>>,
    /// Form list for the Ȳ variables.
    #[arg(long, value_delimiter = ',')]
    pub gforms: Option<Vec<String>>,
    /// Spectral parameter, e.g. `2.5` or `2.5+0.3i`.
    #[arg(long)]
    pub s: Option<String>,
    /// Evaluation point `x+yi`.
    #[arg(long)]
    pub z: Option<String>,
    /// Cusp of the Eisenstein series: `inf` or `0`.
    #[arg(long)]
    pub cusp: Option<String>,
    /// Base point of the modular symbols.
    #[arg(long)]
    pub base: Option<String>,
    /// Truncation degree of the series.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Coset truncation.
    #[arg(long)]
    pub cmax: Option<f64>,
    /// Per-integral tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads for coset sums (1 is bit-reproducible).
    #[arg(long, env = "NCMS_THREADS")]
    pub threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => { $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )* };
}

impl RunConfig {
    /// Fills every unset field from `file`.
    pub fn overlay(mut self, file: &RunConfig) -> Self {
        overlay!(self, file; forms, gforms, s, z, cusp, base, degree, cmax, tol, threads, output);
        self
    }

    pub fn load(path: &Path) -> Result<RunConfig, NcmsError> {
        let text = std::fs::read_to_string(path).map_err(|e| NcmsError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| NcmsError::Parse(format!("{}: {e}", path.display())))
    }

    /// Fills remaining gaps with the documented defaults.
    pub fn resolved(mut self) -> Self {
        self.forms.get_or_insert_with(|| vec!["11a".into()]);
        self.gforms.get_or_insert_with(Vec::new);
        self.s.get_or_insert_with(|| "2.5".into());
        self.z.get_or_insert_with(|| "0.3+1.2i".into());
        self.cusp.get_or_insert_with(|| "inf".into());
        self.base.get_or_insert_with(|| "i∞".into());
        self.degree.get_or_insert(2);
        self.cmax.get_or_insert(1000.0);
        self.tol.get_or_insert(1e-10);
        self.threads.get_or_insert(1);
        self
    }

    pub fn s_value(&self) -> Result<Complex64, NcmsError> {
        parse_complex(self.s.as_deref().unwrap_or("2.5"))
    }

    pub fn z_value(&self) -> Result<UpperHalfPoint64, NcmsError> {
        match PathPoint64::parse(self.z.as_deref().unwrap_or("0.3+1.2i"))? {
            PathPoint64::Interior(p) => Ok(p),
            PathPoint64::CuspPoint(c) => Err(NcmsError::Domain(format!("z must be interior, got cusp {c}"))),
        }
    }

    pub fn cusp_value(&self) -> Result<CuspLabel, NcmsError> {
        CuspLabel::parse(self.cusp.as_deref().unwrap_or("inf"))
    }

    pub fn base_value(&self) -> Result<PathPoint64, NcmsError> {
        PathPoint64::parse(self.base.as_deref().unwrap_or("i∞"))
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig { degree: self.degree.unwrap_or(2), tol: self.tol.unwrap_or(1e-10), ..EngineConfig::default() }
    }

    pub fn f_forms(&self) -> Result<Vec<CuspForm64>, NcmsError> {
        load_forms(self.forms.as_deref().unwrap_or(&[]))
    }

    pub fn g_forms(&self) -> Result<Vec<CuspForm64>, NcmsError> {
        load_forms(self.gforms.as_deref().unwrap_or(&[]))
    }
}

/// Built-in label, or a path to a coefficient file.
pub fn load_form(name: &str) -> Result<CuspForm64, NcmsError> {
    match CuspForm64::builtin(name, ncms::cusp_forms::DEFAULT_MAX_TERMS) {
        Err(NcmsError::UnknownForm(_)) if Path::new(name).exists() => {
            let text = std::fs::read_to_string(name).map_err(|e| NcmsError::Io(format!("{name}: {e}")))?;
            CuspForm64::parse_coefficient_file(&text)
        }
        other => other,
    }
}

fn load_forms(specs: &[String]) -> Result<Vec<CuspForm64>, NcmsError> {
    specs.iter().filter(|s| !s.is_empty()).map(|s| load_form(s)).collect()
}

/// `a`, `a+bi`, `a-bi`, `bi`.
pub fn parse_complex(text: &str) -> Result<Complex64, NcmsError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || NcmsError::Parse(format!("not a complex number: {text:?}"));
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}
