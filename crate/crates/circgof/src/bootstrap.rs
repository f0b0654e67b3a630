//! Parametric bootstrap machinery: classical bootstrap p-values and the
//! warp-speed bootstrap used for size/power studies.

use crate::alternatives::{AltDist, AlternativeSpec};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::gof::{all_statistics, GofStatistics};
use crate::regression::{fit_mle, simulate_model, FitConfig, FitResult, ModelParams, PairedSample};
use crate::rng::RngStream;
use crate::sampler::AngleSampler;
use crate::wrapped_cauchy::WcParams;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const DEFAULT_LAMBDAS: [f64; 3] = [0.3, 0.5, 1.0];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Number of bootstrap replicates.
    pub b: usize,
    pub seed: u64,
    /// Poisson means of the `T_n` weight functions to report.
    pub lambdas: Vec<f64>,
}

impl BootstrapConfig {
    pub fn new(b: usize, seed: u64) -> Self {
        BootstrapConfig {
            b,
            seed,
            lambdas: DEFAULT_LAMBDAS.to_vec(),
        }
    }
}

/// Outcome of a classical bootstrap test run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    pub observed: GofStatistics,
    /// Per-statistic replicate values, each of length `b`, ordered by
    /// replicate index (schedule-independent).
    pub replicate_values: Vec<Vec<f64>>,
    /// `(label, p)` with `p = (1 + #{replicates >= observed}) / (b + 1)`.
    pub p_values: Vec<(String, f64)>,
    pub fit: FitResult,
    pub b: usize,
    pub seed: u64,
}

/// Classical parametric bootstrap: fit, simulate `B` samples under the
/// fitted null, refit each, and read p-values off the replicate empirical
/// distribution.
pub fn classical_bootstrap(
    data: &PairedSample,
    fit_config: &FitConfig,
    config: &BootstrapConfig,
) -> Result<TestReport> {
    let fit = fit_mle(data, fit_config)?;
    let observed = all_statistics(&fit.residuals, fit.params.delta, &config.lambdas);
    let obs_values = observed.values();

    let refit_config = FitConfig {
        warm_start: Some(fit.params),
        ..fit_config.clone()
    };
    let noise = WcParams::centered(fit.params.delta)?;
    let master = RngStream::new(config.seed);

    let replicates: Result<Vec<GofStatistics>> = (0..config.b)
        .into_par_iter()
        .map(|i| {
            null_replicate(
                data.x(),
                &fit.fitted,
                &noise,
                &refit_config,
                &config.lambdas,
                master,
                1 + i as u64,
            )
        })
        .collect();
    let replicates = replicates?;

    let mut replicate_values = vec![Vec::with_capacity(config.b); obs_values.len()];
    for rep in &replicates {
        for (k, (_, v)) in rep.values().into_iter().enumerate() {
            replicate_values[k].push(v);
        }
    }
    let p_values = obs_values
        .iter()
        .zip(&replicate_values)
        .map(|((label, obs), reps)| {
            let count = reps.iter().filter(|&&v| v >= *obs).count();
            (label.clone(), (1 + count) as f64 / (config.b + 1) as f64)
        })
        .collect();

    Ok(TestReport {
        observed,
        replicate_values,
        p_values,
        fit,
        b: config.b,
        seed: config.seed,
    })
}

/// One bootstrap replicate under the fitted null: simulate, refit,
/// recompute the statistics. A replicate whose refit does not converge is
/// redrawn once from a disjoint stream; a second failure aborts.
fn null_replicate(
    x: &[Angle<f64>],
    fitted: &[Angle<f64>],
    noise: &WcParams<f64>,
    refit_config: &FitConfig,
    lambdas: &[f64],
    master: RngStream,
    stream: u64,
) -> Result<GofStatistics> {
    for attempt in 0..2u64 {
        let mut rng = master.substream(stream | (attempt << 62)).rng();
        let y_star: Vec<Angle<f64>> = fitted.iter().map(|&f| f + noise.sample_one(&mut rng)).collect();
        match refit(x, y_star, refit_config, lambdas) {
            Ok(stats) => return Ok(stats),
            Err(Error::FitFailure(_)) if attempt == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::FitFailure(
        "bootstrap replicate failed to converge after redraw".into(),
    ))
}

fn refit(
    x: &[Angle<f64>],
    y: Vec<Angle<f64>>,
    config: &FitConfig,
    lambdas: &[f64],
) -> Result<GofStatistics> {
    let sample = PairedSample::new(x.to_vec(), y)?;
    let fit = fit_mle(&sample, config)?;
    if !fit.converged {
        return Err(Error::FitFailure("no restart converged".into()));
    }
    Ok(all_statistics(&fit.residuals, fit.params.delta, lambdas))
}

/// Innovation law for the warp-speed study: the wrapped Cauchy null or an
/// alternative family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Innovation {
    Wc { delta: f64 },
    Alternative(AlternativeSpec),
}

impl Innovation {
    fn sampler(&self) -> Result<Box<dyn AngleSampler>> {
        match self {
            Innovation::Wc { delta } => Ok(Box::new(WcParams::centered(*delta)?)),
            Innovation::Alternative(spec) => Ok(Box::new(AltDist::new(*spec)?)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Innovation::Wc { delta } => format!("WC({delta})"),
            Innovation::Alternative(spec) => format!(
                "{:?}({}, {})",
                spec.family, spec.shape1, spec.shape2
            ),
        }
    }
}

/// One Monte Carlo scenario of the size/power study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub beta0: Angle<f64>,
    pub beta1_r: f64,
    pub beta1_theta: Angle<f64>,
    pub n: usize,
    pub innovation: Innovation,
    pub b: usize,
    pub alphas: Vec<f64>,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    pub seed: u64,
}

fn default_lambdas() -> Vec<f64> {
    DEFAULT_LAMBDAS.to_vec()
}

/// Rejection rates of every statistic at every requested level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerResult {
    pub labels: Vec<String>,
    pub alphas: Vec<f64>,
    /// `rates[statistic][alpha]`, as fractions in [0, 1].
    pub rates: Vec<Vec<f64>>,
}

/// Warp-speed bootstrap: one bootstrap refit per Monte Carlo iteration;
/// the pooled bootstrap statistics provide the critical values.
pub fn warp_speed_power(scenario: &ScenarioConfig, fit_config: &FitConfig) -> Result<PowerResult> {
    // the true regression map; delta is irrelevant for simulation (errors
    // come from the scenario's innovation law)
    let truth = ModelParams::new(scenario.beta0, scenario.beta1_theta, scenario.beta1_r, 0.5)?;
    let sampler = scenario.innovation.sampler()?;
    let master = RngStream::new(scenario.seed);

    let pairs: Result<Vec<(GofStatistics, GofStatistics)>> = (0..scenario.b)
        .into_par_iter()
        .map(|j| {
            warp_iteration(
                &truth,
                sampler.as_ref(),
                scenario,
                fit_config,
                master,
                1 + j as u64,
            )
        })
        .collect();
    let pairs = pairs?;

    let labels: Vec<String> = pairs[0].0.values().into_iter().map(|(l, _)| l).collect();
    let n_stats = labels.len();
    let b = scenario.b;

    let mut rates = vec![vec![0.0; scenario.alphas.len()]; n_stats];
    for k in 0..n_stats {
        let sample: Vec<f64> = pairs.iter().map(|(s, _)| s.nth_value(k)).collect();
        let mut boot: Vec<f64> = pairs.iter().map(|(_, s)| s.nth_value(k)).collect();
        boot.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (ai, &alpha) in scenario.alphas.iter().enumerate() {
            let c = empirical_quantile(&boot, 1.0 - alpha);
            let rej = sample.iter().filter(|&&s| s >= c).count();
            rates[k][ai] = rej as f64 / b as f64;
        }
    }

    Ok(PowerResult {
        labels,
        alphas: scenario.alphas.clone(),
        rates,
    })
}

fn warp_iteration(
    truth: &ModelParams,
    innovation: &dyn AngleSampler,
    scenario: &ScenarioConfig,
    fit_config: &FitConfig,
    master: RngStream,
    stream: u64,
) -> Result<(GofStatistics, GofStatistics)> {
    for attempt in 0..2u64 {
        let mut rng = master.substream(stream | (attempt << 62)).rng();
        let x: Vec<Angle<f64>> = (0..scenario.n)
            .map(|_| Angle::new(rng.gen::<f64>() * TAU))
            .collect();
        let y = simulate_model(truth, &x, innovation, &mut rng)?;
        let data = PairedSample::new(x.clone(), y)?;
        let fit = match fit_mle(&data, fit_config) {
            Ok(f) if f.converged => f,
            _ if attempt == 0 => continue,
            Ok(_) => return Err(Error::FitFailure("no restart converged".into())),
            Err(e) => return Err(e),
        };
        let stats = all_statistics(&fit.residuals, fit.params.delta, &scenario.lambdas);

        let noise = WcParams::centered(fit.params.delta)?;
        let y_star: Vec<Angle<f64>> = fit
            .fitted
            .iter()
            .map(|&f| f + noise.sample_one(&mut rng))
            .collect();
        let refit_config = FitConfig {
            warm_start: Some(fit.params),
            ..fit_config.clone()
        };
        match refit(&x, y_star, &refit_config, &scenario.lambdas) {
            Ok(boot) => return Ok((stats, boot)),
            Err(Error::FitFailure(_)) if attempt == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::FitFailure(
        "warp-speed iteration failed to converge after redraw".into(),
    ))
}

/// The `q`-th empirical quantile as the `ceil(qB)`-th order statistic.
pub fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    let b = sorted.len();
    let k = ((q * b as f64).ceil() as usize).clamp(1, b);
    sorted[k - 1]
}
