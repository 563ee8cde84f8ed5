//! Small-scale fading of the SN downlink.
//!
//! The fading gain `g` follows a Gamma(N_t, 1) law — the printed density
//! `x^{N_t-1} e^{-x} / (N_t-1)!` — whose mean is exactly the number of
//! transmit antennas. The threshold probability `eps_t` is its CDF.

use crate::error::{Error, Result};
use statrs::function::gamma::{gamma_lr, ln_gamma};

/// Cap on N_t so the log-factorial stays in a comfortable range and the
/// inversion bracket [0, N_t + 40] is guaranteed to contain the root.
pub const MAX_TX_ANTENNAS: u32 = 64;

fn check_nt(n_t: u32, op: &'static str) -> Result<()> {
    if !(1..=MAX_TX_ANTENNAS).contains(&n_t) {
        return Err(Error::domain(op, format!("n_t = {n_t} outside [1, {MAX_TX_ANTENNAS}]")));
    }
    Ok(())
}

/// Density of the fading gain: `x^{N_t-1} e^{-x} / (N_t-1)!`.
pub fn fading_pdf(x: f64, n_t: u32) -> Result<f64> {
    check_nt(n_t, "fading_pdf")?;
    if !(x >= 0.0) {
        return Err(Error::domain("fading_pdf", "x must be >= 0"));
    }
    if x == 0.0 {
        return Ok(if n_t == 1 { 1.0 } else { 0.0 });
    }
    let k = n_t as f64;
    // log form via log-gamma keeps large N_t safe.
    Ok(((k - 1.0) * x.ln() - x - ln_gamma(k)).exp())
}

/// Probability that the fading gain falls below `g_th`: the regularized
/// lower incomplete gamma P(N_t, g_th).
pub fn outage_prob(g_th: f64, n_t: u32) -> Result<f64> {
    check_nt(n_t, "outage_prob")?;
    if !(g_th >= 0.0) {
        return Err(Error::domain("outage_prob", "g_th must be >= 0"));
    }
    if g_th == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_lr(n_t as f64, g_th))
}

/// Inverse of [`outage_prob`]: the gain threshold whose CDF mass is `eps_t`.
///
/// Bracketed bisection on [0, N_t + 40]; the upper end carries CDF mass
/// above 1 - 1e-9 for every admissible N_t, so the bracket always holds.
pub fn threshold_from_outage(eps_t: f64, n_t: u32) -> Result<f64> {
    check_nt(n_t, "threshold_from_outage")?;
    if !(0.0..1.0).contains(&eps_t) {
        return Err(Error::domain("threshold_from_outage", "eps_t must be in [0,1)"));
    }
    if eps_t == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, n_t as f64 + 40.0);
    let mut mid = 0.0;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let p = outage_prob(mid, n_t)?;
        if (p - eps_t).abs() <= 1e-15 {
            break;
        }
        if p < eps_t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}
