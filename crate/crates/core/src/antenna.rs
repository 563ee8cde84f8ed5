//! 1-D antenna gain patterns in direction cosine `u = cos(phi)` and their
//! overlap on the distance grid.
//!
//! Azimuth is collapsed: the receiving array behaves as an equivalent linear
//! array, so every pattern is a function of `u` alone. The flat-plane mapping
//! between direction cosine and slant distance to a shell at height `L` is
//! `d = L / u`; samples at `u <= 0` have no finite distance and are dropped.

use crate::error::{Error, Result};

/// Tabulated power gain versus direction cosine, with a declared mainlobe.
///
/// `samples` are strictly increasing in `u`; the accessor interpolates
/// linearly between them.
#[derive(Debug, Clone, PartialEq)]
pub struct GainPattern {
    /// (u, linear power gain) pairs, strictly increasing in u.
    pub samples: Vec<(f64, f64)>,
    /// Mainlobe center in direction cosine.
    pub mainlobe_center: f64,
    /// Mainlobe half-width in direction cosine.
    pub mainlobe_halfwidth: f64,
}

impl GainPattern {
    pub fn new(samples: Vec<(f64, f64)>, mainlobe_center: f64, mainlobe_halfwidth: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("GainPattern", "need at least 2 samples"));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::domain("GainPattern", "u samples must be strictly increasing"));
            }
        }
        if samples.iter().any(|&(_, g)| !(g >= 0.0)) {
            return Err(Error::domain("GainPattern", "gains must be >= 0"));
        }
        if !(mainlobe_halfwidth > 0.0) {
            return Err(Error::domain("GainPattern", "mainlobe_halfwidth must be > 0"));
        }
        Ok(GainPattern { samples, mainlobe_center, mainlobe_halfwidth })
    }

    /// Closed mainlobe membership: |u - u_0| <= half-width. A 1e-12
    /// absolute slack keeps boundary grid samples inside despite the float
    /// rounding of uniformly generated u grids.
    pub fn in_mainlobe(&self, u: f64) -> bool {
        (u - self.mainlobe_center).abs() <= self.mainlobe_halfwidth + 1e-12
    }

    /// Linear interpolation between samples; clamped to the end gains.
    pub fn gain_at(&self, u: f64) -> f64 {
        interp(&self.samples, u)
    }

    /// Parse a two-column `u gain` text table; `#` starts a comment.
    pub fn parse(text: &str, mainlobe_center: f64, mainlobe_halfwidth: f64) -> Result<Self> {
        let mut samples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Parse { line: idx + 1, msg: "expected two columns".into() })?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })
            };
            let u = parse(cols.next())?;
            let g = parse(cols.next())?;
            if !(-1.0..=1.0).contains(&u) {
                return Err(Error::Parse { line: idx + 1, msg: format!("u = {u} outside [-1,1]") });
            }
            samples.push((u, g));
        }
        GainPattern::new(samples, mainlobe_center, mainlobe_halfwidth)
    }

    pub fn load(path: &std::path::Path, mainlobe_center: f64, mainlobe_halfwidth: f64) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, mainlobe_center, mainlobe_halfwidth)
    }
}

/// Product gain of two beams resampled onto the distance grid of one shell.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapGain {
    /// (distance m, linear product gain) pairs, strictly increasing in d.
    pub samples: Vec<(f64, f64)>,
    /// Index of the orbital shell this table belongs to.
    pub orbit_index: usize,
}

impl OverlapGain {
    /// Linear interpolation; identically 0 outside the sampled support.
    pub fn gain_at(&self, d: f64) -> f64 {
        let (first, last) = (self.samples[0].0, self.samples[self.samples.len() - 1].0);
        if d < first || d > last {
            return 0.0;
        }
        interp(&self.samples, d)
    }
}

fn interp(samples: &[(f64, f64)], x: f64) -> f64 {
    match samples.binary_search_by(|&(s, _)| s.partial_cmp(&x).unwrap()) {
        Ok(i) => samples[i].1,
        Err(0) => samples[0].1,
        Err(i) if i == samples.len() => samples[i - 1].1,
        Err(i) => {
            let (x0, y0) = samples[i - 1];
            let (x1, y1) = samples[i];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Normalized uniform-linear-array power pattern `|AF(u)|^2 / n^2`, peak 1 at
/// `steer_u`, sampled uniformly on u in [-1, 1].
///
/// The declared mainlobe half-width is the first-null offset
/// `1 / (n_elements * spacing_over_wavelength)`.
pub fn array_factor_pattern(
    n_elements: u32,
    spacing_over_wavelength: f64,
    steer_u: f64,
    n_samples: usize,
) -> Result<GainPattern> {
    if n_elements < 2 {
        return Err(Error::domain("array_factor_pattern", "n_elements must be >= 2"));
    }
    if !(spacing_over_wavelength > 0.0 && spacing_over_wavelength <= 1.0) {
        return Err(Error::domain("array_factor_pattern", "spacing must be in (0,1]"));
    }
    if n_samples < 64 {
        return Err(Error::domain("array_factor_pattern", "n_samples must be >= 64"));
    }
    let n = n_elements as f64;
    let s = spacing_over_wavelength;
    let power = |u: f64| -> f64 {
        let psi = std::f64::consts::PI * s * (u - steer_u);
        let den = psi.sin();
        if den.abs() < 1e-12 {
            1.0
        } else {
            let af = (n * psi).sin() / (n * den);
            af * af
        }
    };
    let samples = uniform_u_grid(n_samples).map(|u| (u, power(u))).collect();
    GainPattern::new(samples, steer_u, 1.0 / (n * s))
}

/// Idealized flat mainlobe / flat sidelobe pattern. The boundary
/// |u - u_0| = half-width belongs to the mainlobe.
pub fn piecewise_pattern(
    mainlobe_gain: f64,
    sidelobe_gain: f64,
    mainlobe_center: f64,
    mainlobe_halfwidth: f64,
    n_samples: usize,
) -> Result<GainPattern> {
    if !(mainlobe_gain > sidelobe_gain && sidelobe_gain >= 0.0) {
        return Err(Error::domain("piecewise_pattern", "need mainlobe_gain > sidelobe_gain >= 0"));
    }
    if n_samples < 2 {
        return Err(Error::domain("piecewise_pattern", "n_samples must be >= 2"));
    }
    let samples = uniform_u_grid(n_samples)
        .map(|u| {
            // Same 1e-12 boundary slack as in_mainlobe, so sampled gains and
            // the gate agree at the mainlobe edge.
            let g = if (u - mainlobe_center).abs() <= mainlobe_halfwidth + 1e-12 {
                mainlobe_gain
            } else {
                sidelobe_gain
            };
            (u, g)
        })
        .collect();
    GainPattern::new(samples, mainlobe_center, mainlobe_halfwidth)
}

fn uniform_u_grid(n_samples: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 / (n_samples - 1) as f64;
    (0..n_samples).map(move |i| (-1.0 + i as f64 * step).clamp(-1.0, 1.0))
}

/// Resample the product gain `G_tx(u) * G_rx(u)` onto the distance grid of a
/// shell at height `l_m`, through `d = L / u`.
///
/// With `gating` on, the product is zeroed wherever either beam's mainlobe
/// excludes `u`. Both patterns must be tabulated on the same u grid. Samples
/// at `u <= 0` are dropped; at least two must survive.
pub fn overlap_gain(
    tx: &GainPattern,
    rx: &GainPattern,
    l_m: f64,
    gating: bool,
    orbit_index: usize,
) -> Result<OverlapGain> {
    if !(l_m > 0.0) {
        return Err(Error::domain("overlap_gain", "shell height must be > 0"));
    }
    if tx.samples.len() != rx.samples.len()
        || tx.samples.iter().zip(&rx.samples).any(|(a, b)| a.0 != b.0)
    {
        return Err(Error::domain("overlap_gain", "patterns must share the u grid"));
    }
    let mut samples: Vec<(f64, f64)> = tx
        .samples
        .iter()
        .zip(&rx.samples)
        .filter(|((u, _), _)| *u > 0.0)
        .map(|(&(u, gt), &(_, gr))| {
            let gated = gating && !(tx.in_mainlobe(u) && rx.in_mainlobe(u));
            (l_m / u, if gated { 0.0 } else { gt * gr })
        })
        .collect();
    if samples.len() < 2 {
        return Err(Error::domain("overlap_gain", "fewer than 2 usable samples (u > 0)"));
    }
    samples.reverse(); // u ascending maps to d descending
    Ok(OverlapGain { samples, orbit_index })
}
