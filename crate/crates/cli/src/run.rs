//! Subcommand bodies. Each returns [`Outcome`] when it ran to completion and
//! [`CliError`] when it could not.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rbf_lp::approx::{run_rates, KernelSpec, RateConfig};
use rbf_lp::exact::to_pair;
use rbf_lp::geometry::{make_quasi_uniform, BoxDomain};
use rbf_lp::kernels::wendland_construct;
use rbf_lp::polyrep::{default_c3, property2_exponents, property2_scan, ReproBuilder, ReproSettings};
use rbf_lp::spectral::{
    build_measure_1d, decay_summary, factorization_table, log_grid, ratio_diagnostic, wend1d_decompose, young_trials,
    WendlandTransform,
};
use rbf_lp::Error;
use serde_json::{json, Value};

use crate::config::config_hash;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(Error::InvalidParameter(_) | Error::GuardExceeded(_) | Error::Unsupported(_)) => 2,
            _ => 1,
        }
    }
}

pub enum Outcome {
    Pass,
    Fail(String),
}

fn verdict(failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Adds the hash of `inputs` to the report and writes it.
fn report(inputs: Value, mut body: Value, out: Option<PathBuf>) -> Result<(), CliError> {
    body["config_hash"] = json!(config_hash(&inputs));
    body["config"] = inputs;
    emit(&body, out.as_deref())
}

// integers beyond i64 stay strings
fn int_json(c: &impl ToString) -> Value {
    let s = c.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

pub fn kernels_table(d: usize, k: usize, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let w = wendland_construct(d, k)?;
    let f = w.factored();
    let smooth = w.boundary_smooth();
    let body = json!({
        "d": d,
        "k": k,
        "support": 1.0,
        "coeffs": w.coeffs().iter().map(to_pair).collect::<Vec<_>>(),
        "factored": {
            "ell": f.ell,
            "q": f.q.iter().map(int_json).collect::<Vec<_>>(),
            "scale": to_pair(&f.scale),
        },
        "boundary_smooth": smooth,
    });
    report(json!({"command": "kernels table", "d": d, "k": k}), body, out)?;
    let mut fails = Vec::new();
    if !smooth {
        fails.push(format!("Φ_{{{d},{k}}} is not C^{} at r = 1", 2 * k));
    }
    Ok(verdict(fails))
}

pub fn spectral_check(d: usize, k: usize, radii: usize, tol: f64, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    if radii == 0 || !(tol > 0.0) {
        return Err(CliError::Config("--radii must be positive and --tol > 0".into()));
    }
    let grid: Vec<f64> = log_grid(0.1, 50.0, radii);
    let tr = WendlandTransform::<f64>::calibrate_at(d, k, 1.0, &grid)?;
    let decay = decay_summary(&tr, 40);
    let max_res = tr.max_residual();
    let body = json!({
        "d": d,
        "k": k,
        "m": tr.m(),
        "amplitude": tr.amplitude(),
        "residuals": tr.residuals(),
        "max_residual": max_res,
        "decay": {
            "sup": decay.sup,
            "final_decade_growth": decay.final_decade_growth,
            "all_positive": decay.all_positive,
        },
    });
    report(
        json!({"command": "spectral check", "d": d, "k": k, "radii": radii, "tol": tol}),
        body,
        out,
    )?;
    let mut fails = Vec::new();
    if !(max_res < tol) {
        fails.push(format!("max relative residual {max_res:e} ≥ {tol:e}"));
    }
    if !(decay.final_decade_growth < 0.05) {
        fails.push(format!(
            "r^(2m+2) Φ̂ grew by {:.2}% over the last decade",
            100.0 * decay.final_decade_growth
        ));
    }
    if !decay.all_positive {
        fails.push("transform not positive on [1, 1000]".into());
    }
    Ok(verdict(fails))
}

#[allow(clippy::too_many_arguments)]
pub fn measure_check(
    k: usize,
    omega_max: f64,
    points: usize,
    tol: f64,
    young: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if points < 2 || !(omega_max > 0.0) {
        return Err(CliError::Config("--points must be ≥ 2 and --omega-max > 0".into()));
    }
    let dec = wend1d_decompose::<f64>(k)?;
    let m = build_measure_1d(k, &dec)?;
    let rows = factorization_table(&m, dec.transform(), omega_max, points)?;
    let max_res = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let trials = young_trials(&m.measure, young, seed);
    let violations = trials.iter().filter(|t| !t.holds(1e-10)).count();
    let body = json!({
        "k": k,
        "atoms": m.measure.atoms(),
        "predicted_atoms": m.predicted_atoms,
        "atom_mismatch": m.atom_mismatch(),
        "tv_norm": m.measure.tv_norm(),
        "max_residual": max_res,
        "rows": rows,
        "young": {"trials": trials.len(), "violations": violations},
    });
    report(
        json!({"command": "measure check", "k": k, "omega_max": omega_max, "points": points,
               "tol": tol, "young_trials": young, "seed": seed}),
        body,
        out,
    )?;
    let mut fails = Vec::new();
    if !(max_res < tol) {
        fails.push(format!("max factorization residual {max_res:e} ≥ {tol:e}"));
    }
    if violations > 0 {
        fails.push(format!("{violations} Young's-inequality violations"));
    }
    Ok(verdict(fails))
}

pub struct Property2Job {
    pub spec: KernelSpec,
    pub d: usize,
    pub spacing: f64,
    pub jitter: f64,
    pub seed: u64,
    pub budget: usize,
    pub kappa: Option<f64>,
    pub l: Option<f64>,
    pub c3: Option<f64>,
    pub rho_max: f64,
    pub csv: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

pub fn property2(job: Property2Job) -> Result<Outcome, CliError> {
    if !(job.spacing > 0.0) || job.budget == 0 {
        return Err(CliError::Config("--h must be positive and --budget ≥ 1".into()));
    }
    let phi = job.spec.build::<f64>(job.d)?;
    let (kappa0, l0) = property2_exponents(&phi.id())?;
    let kappa = job.kappa.unwrap_or(kappa0);
    let l = job.l.unwrap_or(l0);
    let degree = job.spec.degree();
    let c3 = job.c3.unwrap_or_else(|| default_c3(job.d, degree, job.rho_max));
    let dom = BoxDomain::cube(job.d, -2.0, 3.0)?;
    let region = BoxDomain::cube(job.d, 0.0, 1.0)?;
    let x = make_quasi_uniform(&dom, job.spacing, job.jitter, job.seed)?;
    x.check_quasi_uniform(job.rho_max)?;
    let builder = ReproBuilder::new(&x, ReproSettings::new(degree, c3));
    let scan = property2_scan(phi.as_ref(), &builder, kappa, l, &region, job.budget, job.seed)?;
    if let Some(p) = &job.csv {
        scan.to_csv(fs::File::create(p)?)?;
    }
    let mut body = serde_json::to_value(&scan)?;
    if let Some(m) = body.as_object_mut() {
        m.remove("records");
        m.insert("C_emp".into(), json!(scan.c_emp));
        m.remove("c_emp");
        m.insert("samples".into(), json!(scan.records.len()));
        m.insert("n_points".into(), json!(x.len()));
        m.insert("q".into(), json!(x.q()));
        m.insert("degree".into(), json!(degree));
        m.insert("c3".into(), json!(c3));
    }
    let inputs = json!({
        "command": "property2", "kernel": job.spec, "d": job.d, "spacing": job.spacing,
        "jitter": job.jitter, "seed": job.seed, "budget": job.budget, "kappa": kappa, "l": l,
        "c3": c3, "rho_max": job.rho_max,
    });
    report(inputs, body, job.out)?;
    let mut fails = Vec::new();
    if !scan.c_emp.is_finite() {
        fails.push("empirical constant is not finite".into());
    }
    if let Some(b) = scan.beyond_support_max {
        if b != 0.0 {
            fails.push(format!("|E| = {b:e} beyond support + C1 h"));
        }
    }
    Ok(verdict(fails))
}

pub fn rates(cfg: &RateConfig, hash: &str, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let mut reports = run_rates(cfg)?;
    for r in &mut reports {
        r.config_hash = hash.to_string();
    }
    match &out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for r in &reports {
                let stem = format!("rates_{}_d{}_{}_p{}", r.kernel.family, r.kernel.d, r.kernel.k_or_gamma, r.p);
                let mut text = serde_json::to_string_pretty(r)?;
                text.push('\n');
                fs::write(dir.join(format!("{stem}.json")), text)?;
                r.to_csv(fs::File::create(dir.join(format!("{stem}.csv")))?)?;
            }
            let mut cfg_text = serde_json::to_string_pretty(cfg)?;
            cfg_text.push('\n');
            fs::write(dir.join("config.json"), cfg_text)?;
        }
        None => emit(&json!({ "config": cfg, "config_hash": hash, "reports": reports }), None)?,
    }
    let fails = reports
        .iter()
        .filter(|r| r.rate_ok != Some(true))
        .map(|r| match r.fitted_rate {
            Some(s) => format!("p={}: fitted rate {s:.3} below {} - {}", r.p, r.theory_rate, cfg.rate_tolerance),
            None => format!("p={}: too few usable levels for a rate fit", r.p),
        })
        .collect();
    Ok(verdict(fails))
}

pub fn ratio_diag(
    d: usize,
    k: usize,
    gamma: Option<usize>,
    omega_max: f64,
    points: usize,
    out: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if points == 0 || !(omega_max > 1e-2) {
        return Err(CliError::Config("--points must be positive and --omega-max > 0.01".into()));
    }
    let table = ratio_diagnostic::<f64>(d, k, gamma, omega_max, points)?;
    let inputs = json!({"command": "ratio-diag", "d": d, "k": k, "gamma": table.gamma,
                        "omega_max": omega_max, "points": points});
    report(inputs, serde_json::to_value(&table)?, out)?;
    Ok(Outcome::Pass)
}
