//! Expected cumulative satellite interference.
//!
//! Two routes evaluate the same point-process model: the shot-noise
//! expectation as an integral of the overlap kernel against the
//! distance-domain intensity (composite trapezoid), and a seeded Monte Carlo
//! over Poisson realizations of the same intensity. Their agreement is the
//! primary correctness check for this module.
//!
//! Monte Carlo realizations are a deterministic function of `(config, n,
//! seed)` regardless of worker count: realization `i` always consumes its own
//! counter-derived ChaCha12 stream, and the reduction is sequential in index
//! order.

use crate::antenna::{overlap_gain, GainPattern, OverlapGain};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::geometry::{
    cumulative_intensity, integration_limits, interferer_path_loss, sqrt_term_integral, OrbitShell,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};

/// Name of the random generator recorded in output metadata.
pub const GENERATOR_NAME: &str = "chacha12/splitmix64";

/// Scenario slice needed to evaluate the interference expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceConfig {
    pub shells: Vec<OrbitShell>,
    /// Satellite (transmit-side) pattern, mainlobe centered on u = 0.
    pub tx_pattern: GainPattern,
    /// Receiving-station pattern, mainlobe centered on `rx_steer_u`.
    pub rx_pattern: GainPattern,
    /// Receiver steering direction cosine.
    pub rx_steer_u: f64,
    /// Zero the product gain outside the mainlobe intersection.
    pub gating: bool,
    /// Trapezoid sample count per shell.
    pub quadrature_points: usize,
    /// Fraction of time the interferers transmit.
    pub duty_cycle: f64,
}

impl InterferenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shells.is_empty() {
            return Err(Error::Validation("at least one orbital shell required".into()));
        }
        if self.quadrature_points < 64 {
            return Err(Error::Validation("quadrature_points must be >= 64".into()));
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(Error::Validation("duty_cycle must be in (0,1]".into()));
        }
        Ok(())
    }

    /// Beam-overlap distance window of one shell, or `None` when the beams
    /// miss each other there.
    pub fn shell_limits(&self, shell: &OrbitShell) -> Option<(f64, f64)> {
        integration_limits(
            self.rx_steer_u,
            self.rx_pattern.mainlobe_halfwidth,
            shell.sat_halfwidth_u,
            shell.altitude,
        )
    }

    /// Product-gain table of one shell on its distance grid.
    pub fn shell_overlap(&self, index: usize) -> Result<OverlapGain> {
        overlap_gain(
            &self.tx_pattern,
            &self.rx_pattern,
            self.shells[index].altitude,
            self.gating,
            index,
        )
    }
}

/// One shell's contribution to the expectation:
/// `2 pi lambda_d * integral of kernel(d) * sqrt(d^2 - L^2) dd` by composite
/// trapezoid on `n` uniform distance samples. The kernel is `F(d)` for the
/// physical model; tests substitute analytic kernels.
pub fn shell_campbell_integral(
    shell: &OrbitShell,
    d_li: f64,
    d_ui: f64,
    n: usize,
    kernel: impl Fn(f64) -> f64,
) -> f64 {
    let l = shell.altitude;
    let h = (d_ui - d_li) / (n - 1) as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let d = d_li + i as f64 * h;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * kernel(d) * (d * d - l * l).max(0.0).sqrt();
    }
    2.0 * std::f64::consts::PI * shell.density * acc * h
}

/// Expectation of the cumulative interference power, in watts.
pub fn expected_interference(cfg: &InterferenceConfig) -> Result<f64> {
    cfg.validate()?;
    let mut total = 0.0;
    for (i, shell) in cfg.shells.iter().enumerate() {
        let Some((d_li, d_ui)) = cfg.shell_limits(shell) else {
            continue;
        };
        let ov = cfg.shell_overlap(i)?;
        let kernel = |d: f64| interferer_path_loss(d, shell).unwrap_or(0.0) * ov.gain_at(d);
        total += shell.tx_power
            * cfg.duty_cycle
            * shell_campbell_integral(shell, d_li, d_ui, cfg.quadrature_points, kernel);
    }
    Ok(total)
}

/// Grid resolution of the per-shell inverse-CDF sampling tables.
const SAMPLER_GRID: usize = 4096;

/// Precomputed per-shell sampling machinery: expected point count plus the
/// kernel tabulated against the uniform quantile of the location density.
struct ShellSampler {
    /// Expected number of points in the overlap window.
    #[cfg_attr(not(test), allow(dead_code))]
    expected_count: f64,
    /// `P_SN * duty_cycle`.
    power: f64,
    /// Kernel value at the inverse CDF of quantile `j / SAMPLER_GRID`.
    kernel_of_quantile: Vec<f64>,
    poisson: Option<Poisson<f64>>,
}

impl ShellSampler {
    fn build(cfg: &InterferenceConfig, index: usize) -> Result<Option<Self>> {
        let shell = &cfg.shells[index];
        let Some((d_li, d_ui)) = cfg.shell_limits(shell) else {
            return Ok(None);
        };
        let expected_count = cumulative_intensity(d_li, d_ui, shell)?;
        if !(expected_count > 0.0) {
            return Ok(None);
        }
        let ov = cfg.shell_overlap(index)?;
        let l = shell.altitude;
        let c0 = sqrt_term_integral(l, d_li);
        let c_tot = sqrt_term_integral(l, d_ui) - c0;
        // Invert the location CDF on a uniform quantile grid by bisection;
        // sampling then needs only a table lerp per point.
        let mut kernel_of_quantile = Vec::with_capacity(SAMPLER_GRID + 1);
        for j in 0..=SAMPLER_GRID {
            let target = c0 + c_tot * j as f64 / SAMPLER_GRID as f64;
            let (mut lo, mut hi) = (d_li, d_ui);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if sqrt_term_integral(l, mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let d = 0.5 * (lo + hi);
            kernel_of_quantile.push(interferer_path_loss(d, shell)? * ov.gain_at(d));
        }
        Ok(Some(ShellSampler {
            expected_count,
            power: shell.tx_power * cfg.duty_cycle,
            kernel_of_quantile,
            poisson: Some(
                Poisson::new(expected_count)
                    .map_err(|e| Error::Validation(format!("poisson mean: {e}")))?,
            ),
        }))
    }

    fn draw(&self, rng: &mut ChaCha12Rng) -> f64 {
        let k = match &self.poisson {
            Some(p) => p.sample(rng) as u64,
            None => 0,
        };
        let mut acc = 0.0;
        for _ in 0..k {
            let x = rng.gen::<f64>() * SAMPLER_GRID as f64;
            let i = (x as usize).min(SAMPLER_GRID - 1);
            let frac = x - i as f64;
            let table = &self.kernel_of_quantile;
            acc += table[i] + (table[i + 1] - table[i]) * frac;
        }
        acc * self.power
    }
}

/// Counter-based per-realization seed derivation (splitmix64 finalizer).
pub(crate) fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn build_samplers(cfg: &InterferenceConfig) -> Result<Vec<ShellSampler>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for i in 0..cfg.shells.len() {
        if let Some(s) = ShellSampler::build(cfg, i)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn one_realization(samplers: &[ShellSampler], seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    samplers.iter().map(|s| s.draw(&mut rng)).sum()
}

/// One Poisson realization of the cumulative interference, in watts.
/// Bit-identical for a fixed `(cfg, seed)`.
pub fn sample_interference(cfg: &InterferenceConfig, seed: u64) -> Result<f64> {
    let samplers = build_samplers(cfg)?;
    Ok(one_realization(&samplers, derive_seed(seed, 0)))
}

fn mc_core(cfg: &InterferenceConfig, n_realizations: usize, seed: u64, parallel: bool) -> Result<(f64, f64)> {
    if n_realizations < 100 {
        return Err(Error::Validation("n_realizations must be >= 100".into()));
    }
    let samplers = build_samplers(cfg)?;
    let values = if parallel {
        map_indexed(n_realizations, |i| one_realization(&samplers, derive_seed(seed, i as u64)))
    } else {
        (0..n_realizations)
            .map(|i| one_realization(&samplers, derive_seed(seed, i as u64)))
            .collect()
    };
    // Sequential index-order reduction keeps the result independent of the
    // worker count.
    let n = n_realizations as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Monte Carlo estimate of the expected interference: `(mean, stderr)` over
/// independent seeded realizations.
pub fn mc_expected_interference(
    cfg: &InterferenceConfig,
    n_realizations: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    mc_core(cfg, n_realizations, seed, true)
}

/// Sequential variant of [`mc_expected_interference`]; same result, used as
/// the single-thread baseline in benchmarks.
pub fn mc_expected_interference_seq(
    cfg: &InterferenceConfig,
    n_realizations: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    mc_core(cfg, n_realizations, seed, false)
}
