//! Sampling oracle for the closed forms.
//!
//! Draws are generated in fixed-size chunks. Chunk `k` uses a ChaCha8
//! stream selected by `k` under the configured seed, so the variate at a
//! given draw index does not depend on how chunks are scheduled across
//! threads. Partial statistics are merged in chunk order, which keeps the
//! summary bit-identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::economy::Economy;
use crate::error::{ModelError, Result};
use crate::preferences::Preference;

const CHUNK: usize = 1 << 16;

/// Probabilities reported in [`SimulationSummary::quantiles`].
pub const REPORTED_QUANTILES: [f64; 9] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    n: usize,
    seed: u64,
}

impl SimulationConfig {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(ModelError::domain("simulation needs at least one agent"));
        }
        Ok(Self { n, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { n: 1_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub n: usize,
    pub mean: f64,
    pub mean_std_error: f64,
    pub median: f64,
    /// Half the spread between the order statistics one binomial standard
    /// deviation either side of the median rank.
    pub median_std_error: f64,
    /// `(p, empirical quantile)` for each of [`REPORTED_QUANTILES`].
    pub quantiles: Vec<(f64, f64)>,
    pub frac_below: Option<f64>,
    pub utility_mean: Option<f64>,
    pub utility_std_error: Option<f64>,
}

impl SimulationSummary {
    pub fn quantile(&self, p: f64) -> Option<f64> {
        self.quantiles.iter().find(|(q, _)| *q == p).map(|&(_, v)| v)
    }
}

// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }

    fn std_error(&self) -> f64 {
        if self.count < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.count - 1.0) / self.count).sqrt()
    }
}

struct Chunk {
    log_wages: Vec<f64>,
    wages: Moments,
    utility: Moments,
    below: usize,
}

/// The first `len` standard normal draws of chunk `chunk` under `seed`.
fn chunk_draws(seed: u64, chunk: usize, len: usize) -> impl Iterator<Item = f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    (0..len).map(move |_| rng.sample::<f64, _>(StandardNormal))
}

fn run_chunk(
    econ: &Economy,
    cfg: &SimulationConfig,
    chunk: usize,
    threshold: Option<f64>,
    pref: Option<&Preference>,
) -> Chunk {
    let start = chunk * CHUNK;
    let len = CHUNK.min(cfg.n - start);
    let (mu, sigma) = (econ.skills.mu(), econ.skills.sigma());
    let mut out = Chunk {
        log_wages: Vec::with_capacity(len),
        wages: Moments::default(),
        utility: Moments::default(),
        below: 0,
    };
    for z in chunk_draws(cfg.seed, chunk, len) {
        let log_wage = econ.log_wage(mu + sigma * z);
        let wage = log_wage.exp();
        out.log_wages.push(log_wage);
        out.wages.push(wage);
        if let Some(p) = pref {
            out.utility.push(p.utility_of_log(log_wage));
        }
        if threshold.is_some_and(|t| wage < t) {
            out.below += 1;
        }
    }
    out
}

/// Simulates `cfg.n` agents and summarizes their wages.
pub fn simulate(
    econ: &Economy,
    cfg: &SimulationConfig,
    threshold: Option<f64>,
    pref: Option<&Preference>,
) -> SimulationSummary {
    let chunks = cfg.n.div_ceil(CHUNK);
    let parts: Vec<Chunk> = (0..chunks)
        .into_par_iter()
        .map(|k| run_chunk(econ, cfg, k, threshold, pref))
        .collect();

    let mut wages = Moments::default();
    let mut utility = Moments::default();
    let mut below = 0usize;
    let mut log_wages = Vec::with_capacity(cfg.n);
    for part in parts {
        wages = wages.merge(part.wages);
        utility = utility.merge(part.utility);
        below += part.below;
        log_wages.extend(part.log_wages);
    }
    log_wages.par_sort_unstable_by(f64::total_cmp);

    let n = cfg.n;
    let order_stat = |rank: f64| -> f64 {
        let idx = rank.round().clamp(0.0, (n - 1) as f64) as usize;
        log_wages[idx].exp()
    };
    let quantiles = REPORTED_QUANTILES
        .iter()
        .map(|&p| (p, empirical_quantile(&log_wages, p)))
        .collect::<Vec<_>>();
    let median = empirical_quantile(&log_wages, 0.5);
    let half_rank = 0.5 * (n as f64).sqrt();
    let centre = 0.5 * (n - 1) as f64;
    let median_std_error = 0.5 * (order_stat(centre + half_rank) - order_stat(centre - half_rank));

    SimulationSummary {
        n,
        mean: wages.mean,
        mean_std_error: wages.std_error(),
        median,
        median_std_error,
        quantiles,
        frac_below: threshold.map(|_| below as f64 / n as f64),
        utility_mean: pref.map(|_| utility.mean),
        utility_std_error: pref.map(|_| utility.std_error()),
    }
}

/// [`simulate`] on a dedicated pool with `threads` workers.
pub fn simulate_with_threads(
    econ: &Economy,
    cfg: &SimulationConfig,
    threshold: Option<f64>,
    pref: Option<&Preference>,
    threads: usize,
) -> Result<SimulationSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ModelError::domain(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(|| simulate(econ, cfg, threshold, pref)))
}

// Linear interpolation between order statistics (Hyndman–Fan type 7), on wages.
fn empirical_quantile(sorted_logs: &[f64], p: f64) -> f64 {
    let h = (sorted_logs.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted_logs.len() - 1);
    let (a, b) = (sorted_logs[lo].exp(), sorted_logs[hi].exp());
    a + (h - lo as f64) * (b - a)
}

/// Share of agents whose realized wage falls short of an investment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossFraction {
    /// `Φ((ln(I/A)/c - μ)/σ)`.
    pub analytic: f64,
    pub simulated: f64,
    /// Binomial standard error at the analytic probability.
    pub std_error: f64,
}

impl LossFraction {
    /// Distance between the two estimates in binomial standard errors.
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            return if self.analytic == self.simulated {
                0.0
            } else {
                f64::INFINITY
            };
        }
        (self.simulated - self.analytic).abs() / self.std_error
    }
}

pub fn expost_loss_fraction(econ: &Economy, investment: f64, cfg: &SimulationConfig) -> Result<LossFraction> {
    if !(investment > 0.0 && investment.is_finite()) {
        return Err(ModelError::domain(format!("investment {investment} must be positive")));
    }
    let analytic = econ.income_cdf(investment)?;
    let summary = simulate(econ, cfg, Some(investment), None);
    Ok(LossFraction {
        analytic,
        simulated: summary.frac_below.unwrap_or(f64::NAN),
        std_error: (analytic * (1.0 - analytic) / cfg.n as f64).sqrt(),
    })
}
