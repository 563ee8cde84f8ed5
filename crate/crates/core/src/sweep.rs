//! Sweep orchestration over receiver steering and SN distance, CSV output,
//! and the per-shell overlap-gain table.
//!
//! Rows are computed in parallel but buffered and emitted in grid order, so
//! output for a given `(config, seed)` is byte-identical regardless of the
//! worker count. All numeric fields are printed with 17 significant digits
//! and re-parse to the same `f64`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::geometry::interferer_path_loss;
use crate::interference::{derive_seed, mc_expected_interference, GENERATOR_NAME};
use crate::scenario::{elevation_deg_from_u, Scenario};
use crate::solver::solve_power_threshold;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A sweep over steering direction cosines and SN distances.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenario: Scenario,
    /// Ascending receiver steering grid, direction cosines.
    pub steer_grid: Vec<f64>,
    /// Ascending SN distance grid, meters.
    pub distance_grid: Vec<f64>,
    /// Monte Carlo cross-check realization count, if requested.
    pub mc_check: Option<usize>,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, grid) in [("steering", &self.steer_grid), ("distance", &self.distance_grid)] {
            if grid.is_empty() {
                return Err(Error::Validation(format!("{name} grid is empty")));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Validation(format!("{name} grid must be strictly ascending")));
            }
        }
        if self.steer_grid[0] <= 0.0 || *self.steer_grid.last().unwrap() > 1.0 {
            return Err(Error::Validation("steering grid must lie in (0, 1]".into()));
        }
        if self.distance_grid[0] < self.scenario.params.reference_distance {
            return Err(Error::Validation(
                "distance grid must start at or above the reference distance".into(),
            ));
        }
        if let Some(n) = self.mc_check {
            if n < 100 {
                return Err(Error::Validation("mc-check realization count must be >= 100".into()));
            }
        }
        Ok(())
    }
}

/// One solved grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub u: f64,
    pub elevation_deg: f64,
    pub d_k: f64,
    pub e_i_w: f64,
    pub p_u_w: f64,
    pub p_u_dbm: f64,
    pub eps_c: f64,
    pub eps_q: f64,
    pub eps_t: f64,
    pub g_th: f64,
    pub nu: f64,
    pub converged: bool,
    /// `(mean, stderr)` of the Monte Carlo interference cross-check.
    pub mc: Option<(f64, f64)>,
}

/// Watts to dBm, output boundary only.
pub fn watts_to_dbm(p_w: f64) -> f64 {
    10.0 * p_w.log10() + 30.0
}

/// Solve every `(u, d_k)` grid point. Rows come back in grid order with the
/// steering grid as the outer (slow) index; a failed solve yields a row of
/// NaNs with `converged = false` rather than aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let n_d = spec.distance_grid.len();
    let n = spec.steer_grid.len() * n_d;
    let rows = map_indexed(n, |i| {
        let u = spec.steer_grid[i / n_d];
        let d_k = spec.distance_grid[i % n_d];
        solve_row(spec, u, d_k, derive_seed(spec.seed, i as u64))
    });
    Ok(rows)
}

fn solve_row(spec: &SweepSpec, u: f64, d_k: f64, row_seed: u64) -> SweepRow {
    let sc = &spec.scenario;
    let icfg = sc.interference_config(u);
    let mc = spec
        .mc_check
        .and_then(|n| mc_expected_interference(&icfg, n, row_seed).ok());
    let solved = sc
        .geometry_at(d_k)
        .and_then(|geom| solve_power_threshold(&sc.qos, &sc.params, &geom, &icfg));
    match solved {
        Ok(s) => SweepRow {
            u,
            elevation_deg: elevation_deg_from_u(u),
            d_k,
            e_i_w: s.expected_interference,
            p_u_w: s.p_u,
            p_u_dbm: watts_to_dbm(s.p_u),
            eps_c: s.eps_c,
            eps_q: s.eps_q,
            eps_t: s.eps_t,
            g_th: s.g_th,
            nu: s.nu,
            converged: s.converged,
            mc,
        },
        Err(_) => SweepRow {
            u,
            elevation_deg: elevation_deg_from_u(u),
            d_k,
            e_i_w: f64::NAN,
            p_u_w: f64::NAN,
            p_u_dbm: f64::NAN,
            eps_c: f64::NAN,
            eps_q: f64::NAN,
            eps_t: f64::NAN,
            g_th: f64::NAN,
            nu: f64::NAN,
            converged: false,
            mc,
        },
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_metadata(w: &mut dyn Write, scenario: &Scenario, seed: u64) -> std::io::Result<()> {
    writeln!(w, "# subolink {VERSION}")?;
    writeln!(w, "# seed = {seed}")?;
    writeln!(w, "# generator = {GENERATOR_NAME}")?;
    writeln!(w, "# config_hash = {:016x}", scenario.config_hash)
}

/// Write the sweep result table as CSV with leading `#` metadata lines.
pub fn write_csv(w: &mut dyn Write, spec: &SweepSpec, rows: &[SweepRow]) -> std::io::Result<()> {
    write_metadata(w, &spec.scenario, spec.seed)?;
    write!(w, "u,elevation_deg,d_k,E_I_W,P_u_W,P_u_dBm,eps_c,eps_q,eps_t,g_th,nu,converged")?;
    if spec.mc_check.is_some() {
        write!(w, ",E_I_mc_W,E_I_mc_stderr_W")?;
    }
    writeln!(w)?;
    for r in rows {
        write!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(r.u),
            fmt(r.elevation_deg),
            fmt(r.d_k),
            fmt(r.e_i_w),
            fmt(r.p_u_w),
            fmt(r.p_u_dbm),
            fmt(r.eps_c),
            fmt(r.eps_q),
            fmt(r.eps_t),
            fmt(r.g_th),
            fmt(r.nu),
            r.converged,
        )?;
        if spec.mc_check.is_some() {
            let (m, s) = r.mc.unwrap_or((f64::NAN, f64::NAN));
            write!(w, ",{},{}", fmt(m), fmt(s))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Write the per-shell overlap-gain table: one block per shell with rows
/// `(orbit, d, f_PL, overlap gain, product)` over the shell's overlap
/// window. Shells with no overlap emit no rows.
pub fn emit_overlap_table(w: &mut dyn Write, scenario: &Scenario, seed: u64) -> Result<()> {
    let icfg = scenario.interference_config(scenario.rx_steer_u);
    icfg.validate()?;
    write_metadata(w, scenario, seed)?;
    writeln!(w, "orbit,d_m,f_pl,overlap_gain,product")?;
    for (i, shell) in icfg.shells.iter().enumerate() {
        let Some((d_li, d_ui)) = icfg.shell_limits(shell) else {
            continue;
        };
        let ov = icfg.shell_overlap(i)?;
        writeln!(w, "# shell {i} altitude_m = {}", shell.altitude)?;
        // Only the overlap window carries support; rows outside it are
        // identically zero and not emitted.
        let slack = 1e-9 * d_ui;
        for &(d, gain) in &ov.samples {
            if d < d_li - slack || d > d_ui + slack {
                continue;
            }
            let f_pl = interferer_path_loss(d, shell)?;
            writeln!(w, "{i},{},{},{},{}", fmt(d), fmt(f_pl), fmt(gain), fmt(f_pl * gain))?;
        }
    }
    Ok(())
}
