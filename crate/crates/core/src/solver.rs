//! The power-threshold optimization.
//!
//! The feasible set splits the error budget as `eps_c + eps_q + eps_t <=
//! eps_qos`. For a fixed threshold mass `eps_t` the remaining budget binds
//! (the objective is strictly decreasing in each error term), and the split
//! between `eps_c` and `eps_q` is a scalar convex problem. The outer search
//! over `eps_t` is a multi-start golden-section in log space.

use crate::error::{Error, Result};
use crate::fading::{outage_prob, threshold_from_outage};
use crate::geometry::{sn_path_gain, SnLinkGeometry};
use crate::interference::{expected_interference, InterferenceConfig};
use crate::qos::{effective_bandwidth, inverse_q, LinkParams, QosBudget};

/// Output of the power-threshold solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSolution {
    /// The optimized power ceiling, watts.
    pub p_u: f64,
    /// Minimum power at the threshold gain (equals `p_u` by construction).
    pub p_t_at_gth: f64,
    /// Fading-gain threshold.
    pub g_th: f64,
    /// Required SINR.
    pub nu: f64,
    pub eps_c: f64,
    pub eps_q: f64,
    pub eps_t: f64,
    /// Effective bandwidth at the optimal split, packets/s.
    pub e_b: f64,
    /// Queue-tail decay rate at the optimal split.
    pub theta: f64,
    /// Expected interference used by the solve, watts.
    pub expected_interference: f64,
    /// SN path gain used by the solve, linear.
    pub path_gain: f64,
    /// Total inner + outer golden-section iterations.
    pub iterations: u64,
    pub converged: bool,
}

/// Exponent of the required SINR as a function of the split: the quantity
/// minimized by the inner subproblem. `nu = exp(objective) - 1`.
pub fn subproblem_objective(
    eps_c: f64,
    eps_q: f64,
    params: &LinkParams,
    d_max: f64,
) -> Result<f64> {
    if !(eps_c > 0.0 && eps_c < 1.0) || !(eps_q > 0.0 && eps_q < 1.0) {
        return Err(Error::domain("subproblem_objective", "eps_c, eps_q must be in (0,1)"));
    }
    let log_inv_q = -eps_q.ln();
    let theta = (params.frame_length * log_inv_q / (params.queue_density * d_max) + 1.0).ln();
    let queue_term = log_inv_q * params.packet_bits * std::f64::consts::LN_2
        / (d_max * theta * params.bandwidth);
    let decode_term = (1.0 / params.blocklength()).sqrt() * inverse_q(eps_c)?;
    Ok(queue_term + decode_term)
}

/// Golden-section minimization on `[a, b]`; returns `(x, f(x), evals,
/// converged)` where convergence means the bracket shrank below `tol`.
fn golden_section(
    f: &dyn Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iters: usize,
) -> (f64, f64, u64, bool) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2u64;
    let mut converged = false;
    for _ in 0..max_iters {
        if (b - a).abs() <= tol {
            converged = true;
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 <= f2 {
        (x1, f1, evals, converged)
    } else {
        (x2, f2, evals, converged)
    }
}

/// Optimal split of `budget` between decode and queue error mass.
///
/// Returns `(eps_c, eps_q, nu, iterations, converged)`. The budget always
/// binds: `eps_c + eps_q = budget`. The search runs over `ln(eps_c)`, valid
/// because the objective is convex in the split.
pub fn solve_subproblem(
    budget: f64,
    params: &LinkParams,
    d_max: f64,
) -> Result<(f64, f64, f64, u64, bool)> {
    if !(budget > 0.0 && budget < 1.0) {
        return Err(Error::domain("solve_subproblem", "budget must be in (0,1)"));
    }
    let lo = (budget * 1e-14).ln();
    let hi = (budget * (1.0 - 1e-12)).ln();
    let f = |s: f64| -> f64 {
        let eps_c = s.exp();
        let eps_q = budget - eps_c;
        subproblem_objective(eps_c, eps_q, params, d_max).unwrap_or(f64::INFINITY)
    };
    let (s, obj, iters, converged) = golden_section(&f, lo, hi, 1e-12, 500);
    let eps_c = s.exp();
    let eps_q = budget - eps_c;
    Ok((eps_c, eps_q, obj.exp() - 1.0, iters, converged))
}

/// Full power-threshold solve.
///
/// Phase one fixes the path gain and the interference expectation; the
/// remaining problem is the outer scalar search over `eps_t` with the convex
/// split subproblem nested inside. The outer golden-section runs in
/// `ln(eps_t)` from five log-spaced starting windows; ties resolve to the
/// smallest `eps_t`.
pub fn solve_power_threshold(
    qos: &QosBudget,
    params: &LinkParams,
    geom: &SnLinkGeometry,
    icfg: &InterferenceConfig,
) -> Result<PowerSolution> {
    let n_t = params.tx_antennas;
    let path_gain = sn_path_gain(geom);
    let e_i = expected_interference(icfg)?;
    let noise_plus_i = params.noise_floor() + e_i;
    let eps_qos = qos.eps_qos;

    let p_u_of = |ln_eps_t: f64| -> f64 {
        let eps_t = ln_eps_t.exp();
        if eps_t <= 0.0 || eps_t >= eps_qos {
            return f64::INFINITY;
        }
        let Ok(g_th) = threshold_from_outage(eps_t, n_t) else {
            return f64::INFINITY;
        };
        if g_th <= 0.0 {
            return f64::INFINITY;
        }
        match solve_subproblem(eps_qos - eps_t, params, qos.d_max) {
            Ok((_, _, nu, _, _)) => noise_plus_i * nu / (g_th * path_gain),
            Err(_) => f64::INFINITY,
        }
    };

    // Multi-start: windows of +-1.5 decades around eps_t = 1e-1..1e-5 of the
    // budget, clipped to the admissible range.
    const LN10: f64 = std::f64::consts::LN_10;
    let domain_lo = (eps_qos * 1e-8).ln();
    let domain_hi = (eps_qos * (1.0 - 1e-9)).ln();
    let mut best: Option<(f64, f64)> = None; // (ln_eps_t, p_u)
    let mut iterations = 0u64;
    let mut converged = true;
    for k in 1..=5 {
        let center = eps_qos.ln() - k as f64 * LN10;
        let a = (center - 1.5 * LN10).max(domain_lo);
        let b = (center + 1.5 * LN10).min(domain_hi);
        if b <= a {
            continue;
        }
        let (s, p, iters, ok) = golden_section(&p_u_of, a, b, 1e-12, 200);
        iterations += iters;
        converged &= ok;
        best = match best {
            None => Some((s, p)),
            Some((bs, bp)) => {
                // Tie rule: equal ceilings resolve to the smaller eps_t.
                if p < bp * (1.0 - 1e-12) || (p <= bp * (1.0 + 1e-12) && s < bs) {
                    Some((s, p))
                } else {
                    Some((bs, bp))
                }
            }
        };
    }
    let (ln_eps_t, p_u) = best.ok_or_else(|| Error::Validation("empty outer search domain".into()))?;
    if !p_u.is_finite() {
        return Err(Error::Validation("power-threshold problem infeasible".into()));
    }

    // Local-optimality probe around the accepted eps_t.
    let probe_up = p_u_of(ln_eps_t + (1.1f64).ln());
    let probe_dn = p_u_of(ln_eps_t - (1.1f64).ln());
    if probe_up < p_u * (1.0 - 1e-9) || probe_dn < p_u * (1.0 - 1e-9) {
        converged = false;
    }

    let eps_t = ln_eps_t.exp();
    let g_th = threshold_from_outage(eps_t, n_t)?;
    let (eps_c, eps_q, nu, inner_iters, inner_ok) =
        solve_subproblem(eps_qos - eps_t, params, qos.d_max)?;
    iterations += inner_iters;
    converged &= inner_ok;
    let (e_b, theta) = effective_bandwidth(eps_q, qos.d_max, params.frame_length, params.queue_density)?;
    let p_t_at_gth = crate::qos::min_power(nu, g_th, path_gain, noise_plus_i)?;

    Ok(PowerSolution {
        p_u,
        p_t_at_gth,
        g_th,
        nu,
        eps_c,
        eps_q,
        eps_t,
        e_b,
        theta,
        expected_interference: e_i,
        path_gain,
        iterations,
        converged,
    })
}

impl PowerSolution {
    /// Check the definitional invariants of a solution against the QoS
    /// budget it was solved for. Used by tests and the sweep driver.
    pub fn check_invariants(&self, eps_qos: f64, n_t: u32, noise_floor: f64) -> Result<()> {
        let sum = self.eps_c + self.eps_q + self.eps_t;
        if sum > eps_qos + 1e-15 {
            return Err(Error::Validation(format!("budget violated: {sum} > {eps_qos}")));
        }
        let lhs = self.p_u * self.g_th * self.path_gain;
        let rhs = (noise_floor + self.expected_interference) * self.nu;
        if (lhs - rhs).abs() > 1e-9 * rhs.abs() {
            return Err(Error::Validation(format!("power identity violated: {lhs} vs {rhs}")));
        }
        let p = outage_prob(self.g_th, n_t)?;
        if (p - self.eps_t).abs() > 1e-12 {
            return Err(Error::Validation(format!("threshold mass mismatch: {p} vs {}", self.eps_t)));
        }
        Ok(())
    }
}
