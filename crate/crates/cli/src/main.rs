//! `ncms`: batch front end for noncommutative modular symbols and twisted
//! Eisenstein series.
//!
//! Exit codes: 0 success, 1 an identity check failed, 2 usage or domain error.

mod config;

use clap::{Parser, Subcommand};
use config::RunConfig;
use ncms::eisenstein::{self, EisParams, EisPayload, EisValue};
use ncms::iterated_integrals::EngineConfig;
use ncms::stats;
use ncms::verify::{self, VerifyConfig};
use ncms::{Gamma0, GroupElement, NcmsError, SymbolEngine, SCHEMA_VERSION};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ncms", version, about = "Noncommutative modular symbols and twisted Eisenstein series")]
struct Cli {
    /// TOML file with defaults for any of the shared options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noncommutative modular symbol of γ at the base point.
    Symbol {
        /// Matrix entries `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Evaluate a classical, twisted or series-valued Eisenstein series.
    Eval {
        /// Ignore the form lists and sum the ordinary series.
        #[arg(long)]
        classical: bool,
        /// Return the full series in the X and Ȳ variables up to `--degree`.
        #[arg(long)]
        series: bool,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Run the identity suite; exit code 1 if any row fails.
    Verify {
        /// Deliberately break the reversal row.
        #[arg(long, hide = true)]
        inject_reversal_fault: bool,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Pairing statistics over bottom rows with c² + d² ≤ T.
    Stats {
        /// Bound on c² + d²
        #[arg(long = "t")]
        t: f64,
        /// CSV destination; the summary JSON goes to `--output`.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Fourier coefficient of the Eisenstein series at height y.
    Fourier {
        /// Frequency of the coefficient
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Height of the horizontal line sampled
        #[arg(long)]
        y: f64,
        /// Equispaced sample points on the line
        #[arg(long, default_value_t = 64)]
        npoints: usize,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Dump q-expansion coefficients of the first form.
    Coeffs {
        /// Number of coefficients, starting at q¹
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        run: RunConfig,
    },
}

enum Failure {
    Identity(String),
    Usage(String),
}

impl From<NcmsError> for Failure {
    fn from(e: NcmsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn complex_json(c: Complex64) -> Value {
    json!({"re": c.re, "im": c.im})
}

fn write_out(run: &RunConfig, text: &str) -> Result<(), Failure> {
    match &run.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn emit(run: &RunConfig, mut doc: Value) -> Result<(), Failure> {
    doc["schema"] = json!(SCHEMA_VERSION);
    doc["config"] = serde_json::to_value(run).unwrap_or(Value::Null);
    write_out(run, &serde_json::to_string_pretty(&doc).unwrap_or_default())
}

fn parse_gamma(text: &str) -> Result<GroupElement, NcmsError> {
    let v: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| NcmsError::Parse(format!("matrix must be four integers a,b,c,d: {text:?}")))?;
    if v.len() != 4 {
        return Err(NcmsError::Parse(format!("matrix must be four integers a,b,c,d: {text:?}")));
    }
    GroupElement::new(v[0], v[1], v[2], v[3])
}

fn group_for(run: &RunConfig) -> Result<Gamma0, NcmsError> {
    let forms = run.f_forms()?;
    let level = forms.iter().chain(run.g_forms()?.iter()).map(|f| f.level()).next().unwrap_or(11);
    Gamma0::new(level as i64)
}

fn params(run: &RunConfig) -> Result<EisParams<f64>, NcmsError> {
    Ok(EisParams::new(run.s_value()?, run.cusp_value()?, run.cmax.unwrap_or(1000.0))?.with_threads(run.threads.unwrap_or(1)))
}

fn eis_json(run: &RunConfig, v: &EisValue<f64>) -> Result<Value, NcmsError> {
    let value = match &v.value {
        EisPayload::Scalar(c) => complex_json(*c),
        EisPayload::Series(s) => s.to_json(),
    };
    Ok(json!({
        "s": complex_json(run.s_value()?),
        "cusp": run.cusp_value()?.name(),
        "value": value,
        "trunc": v.truncation_estimate,
        "cosets": v.cosets_used,
    }))
}

fn cmd_symbol(run: &RunConfig, gamma: &str) -> Result<(), Failure> {
    let g = parse_gamma(gamma)?;
    let group = group_for(run)?;
    let engine = SymbolEngine::new(group, run.f_forms()?, run.g_forms()?, run.engine())?;
    let base = run.base_value()?;
    let series = engine.symbol_series(&g, &base)?;
    let mut doc = series.to_json();
    doc["gamma"] = json!(g.entries());
    doc["base"] = json!(base.to_string());
    emit(run, doc)
}

fn cmd_eval(run: &RunConfig, classical: bool, series: bool) -> Result<(), Failure> {
    let group = group_for(run)?;
    let p = params(run)?;
    let z = run.z_value()?;
    let (f, g) = (run.f_forms()?, run.g_forms()?);
    let v = if classical || (!series && f.is_empty() && g.is_empty()) {
        eisenstein::classical_e(&group, &z, &p)?
    } else if series {
        let engine = SymbolEngine::new(group, f, g, run.engine())?;
        eisenstein::e_calligraphic(&engine, &z, &p, &run.base_value()?)?
    } else {
        eisenstein::twisted_e(&group, &z, &p, &f, &g, &run.base_value()?, run.engine())?
    };
    emit(run, eis_json(run, &v)?)
}

fn cmd_verify(run: &RunConfig, inject: bool) -> Result<(), Failure> {
    let mut cfg = VerifyConfig::level11()?;
    if let Some(f) = run.f_forms()?.into_iter().next() {
        cfg.form = f;
    }
    cfg.s = run.s_value()?;
    cfg.z = run.z_value()?;
    if let Some(c) = run.cmax {
        cfg.cmax = c;
    }
    cfg.engine = EngineConfig { degree: cfg.engine.degree.max(run.engine().degree), tol: run.engine().tol, ..cfg.engine };
    cfg.inject_reversal_fault = inject;
    let report = verify::run_suite(&cfg)?;
    let passed = report.all_passed();
    emit(run, json!({"passed": passed, "rows": report.rows}))?;
    if passed {
        Ok(())
    } else {
        let names: Vec<&str> = report.rows.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
        Err(Failure::Identity(format!("failed: {}", names.join(", "))))
    }
}

fn cmd_stats(run: &RunConfig, t: f64, csv: Option<&PathBuf>) -> Result<(), Failure> {
    let group = group_for(run)?;
    let f = run.f_forms()?.into_iter().next().ok_or_else(|| Failure::Usage("stats needs a form".into()))?;
    let rows = stats::pairing_table(&group, &f, t, run.engine())?;
    let table = stats::to_csv(&rows);
    if let Some(p) = csv {
        std::fs::write(p, table).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    let summary = stats::summarize(&rows, t);
    emit(run, json!({"summary": summary}))
}

fn cmd_fourier(run: &RunConfig, k: i64, y: f64, npoints: usize) -> Result<(), Failure> {
    let group = group_for(run)?;
    let p = params(run)?;
    let (f, g) = (run.f_forms()?, run.g_forms()?);
    let base = run.base_value()?;
    let engine = run.engine();
    // the summation cusp is `p.cusp`; the expansion is taken at the same cusp
    let eval = |w: &ncms::UpperHalfPoint64| -> ncms::Result<Complex64> {
        let v = if f.is_empty() && g.is_empty() {
            eisenstein::classical_e(&group, w, &p)?
        } else {
            eisenstein::twisted_e(&group, w, &p, &f, &g, &base, engine)?
        };
        Ok(v.scalar().unwrap_or_default())
    };
    let coeff = eisenstein::fourier_coefficient(&group, p.cusp, eval, k, y, npoints)?;
    let mut doc = json!({"k": k, "y": y, "npoints": npoints, "coefficient": complex_json(coeff)});
    if k != 0 {
        let w = eisenstein::whittaker_w(p.s, k, &ncms::UpperHalfPoint64::new(0.0, y)?)?;
        doc["phi"] = complex_json(coeff / w);
    }
    emit(run, doc)
}

fn cmd_coeffs(run: &RunConfig, count: usize) -> Result<(), Failure> {
    let f = run.f_forms()?.into_iter().next().ok_or_else(|| Failure::Usage("coeffs needs a form".into()))?;
    let ints = f.integer_coefficients().ok_or_else(|| Failure::Usage("coefficients are not integral".into()))?;
    let sign = f.atkin_lehner_sign().unwrap_or(1);
    let mut out = format!("# level {} label {} sign {:+}\n", f.level(), f.label(), sign);
    for c in ints.iter().take(count) {
        out.push_str(&format!("{c}\n"));
    }
    write_out(run, out.trim_end())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let prep = |r: &RunConfig| r.clone().overlay(&file).resolved();
    match &cli.command {
        Command::Symbol { gamma, run } => cmd_symbol(&prep(run), gamma),
        Command::Eval { classical, series, run } => cmd_eval(&prep(run), *classical, *series),
        Command::Verify { inject_reversal_fault, run } => cmd_verify(&prep(run), *inject_reversal_fault),
        Command::Stats { t, csv, run } => cmd_stats(&prep(run), *t, csv.as_ref()),
        Command::Fourier { k, y, npoints, run } => cmd_fourier(&prep(run), *k, *y, *npoints),
        Command::Coeffs { count, run } => cmd_coeffs(&prep(run), *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(msg)) => {
            eprintln!("ncms: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ncms: {msg}");
            ExitCode::from(2)
        }
    }
}
