//! Parameter sweeps and their CSV form.

use std::fs::File;
use std::io::{self, Write};

use secjam::montecarlo::{
    estimate_regime_means_and_beta, predict_mu_a_alice_saturated, predict_mu_a_geo_d1, predict_mu_a_jimmy_saturated,
    simulate, RegimeEstimate, SimOptions, SimResult,
};

use crate::config::{ExperimentConfig, SweepVariable};
use crate::error::CliError;

pub const CSV_HEADER: [&str; 11] = [
    "sweep",
    "value",
    "mu_a",
    "ci_halfwidth",
    "p_joint_on",
    "beta_hat",
    "mean_rate_jammed",
    "mean_rate_unjammed",
    "pred_alice_saturated",
    "pred_jimmy_saturated",
    "pred_geo_d1",
];

/// One simulated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: SweepVariable,
    pub value: f64,
    pub sim: SimResult,
    pub regime: RegimeEstimate,
    /// Only when Alice's arrival rate is 1.
    pub pred_alice_saturated: Option<f64>,
    /// Only when Jimmy's arrival rate is 1.
    pub pred_jimmy_saturated: Option<f64>,
    pub pred_geo_d1: f64,
}

impl SweepRow {
    fn cells(&self) -> Vec<String> {
        let num = |x: f64| format!("{x:.16e}");
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        vec![
            self.variable.name().to_string(),
            num(self.value),
            num(self.sim.mu_a),
            num(self.sim.ci_halfwidth),
            num(self.sim.p_joint_on),
            num(self.sim.beta_hat),
            num(self.sim.mean_rate_jammed),
            num(self.sim.mean_rate_unjammed),
            opt(self.pred_alice_saturated),
            opt(self.pred_jimmy_saturated),
            num(self.pred_geo_d1),
        ]
    }
}

/// Simulates every sweep point with the same seed, so neighbouring points
/// share channel and arrival randomness.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let base = cfg.base_params();
    let opts = SimOptions {
        n_slots: cfg.n_slots,
        replicas: cfg.replicas,
        batches: cfg.batches,
        deplete_on_insecure: cfg.deplete_on_insecure,
        warmup: None,
    };
    // Regime averages do not depend on arrival rates; only a K sweep
    // needs a fresh estimate per point.
    let shared = match cfg.sweep_variable {
        SweepVariable::KActive => None,
        _ => Some(estimate_regime_means_and_beta::<f64>(&base, cfg.n_draws_means)?),
    };
    cfg.sweep_values
        .iter()
        .map(|&v| {
            let p = cfg.sweep_variable.apply(&base, v);
            let regime = match &shared {
                Some(r) => r.clone(),
                None => estimate_regime_means_and_beta::<f64>(&p, cfg.n_draws_means)?,
            };
            let sim = simulate::<f64>(&p, &opts)?;
            let (mj, mu, beta) = (regime.mean_jammed, regime.mean_unjammed, regime.beta);
            Ok(SweepRow {
                variable: cfg.sweep_variable,
                value: v,
                pred_alice_saturated: (p.lambda_a == 1.0)
                    .then(|| predict_mu_a_alice_saturated(mj, mu, p.lambda_j, beta)),
                pred_jimmy_saturated: (p.lambda_j == 1.0).then(|| predict_mu_a_jimmy_saturated(mj, p.lambda_a, beta)),
                pred_geo_d1: predict_mu_a_geo_d1(mj, mu, p.lambda_a, p.lambda_j),
                sim,
                regime,
            })
        })
        .collect()
}

/// Writes the rows as CSV with a header and LF line endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "<csv>".into(),
        source,
    })
}

/// Writes to `cfg.output_path`, or stdout when none is set.
pub fn emit(cfg: &ExperimentConfig, rows: &[SweepRow]) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            write_csv(rows, io::BufWriter::new(file))
        }
        None => write_csv(rows, io::stdout().lock()),
    }
}
