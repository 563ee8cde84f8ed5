//! Finite-blocklength rate, effective-bandwidth queueing calculus, and the
//! required-SINR quantity `nu` for the suborbital downlink.
//!
//! Rates are carried internally in packets/frame; conversions to bits/s are
//! left to the output boundary. The effective bandwidth `E_B` is in
//! packets/second, which is what fixes the exponent `E_B * eta * ln2 / B`
//! in the SINR expression.

use crate::error::{Error, Result};
use statrs::function::erf::erfc;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Frame, bandwidth, packet and antenna parameters of the SN downlink.
///
/// `noise_psd` is stored in linear W/Hz; use [`LinkParams::noise_psd_from_dbm_hz`]
/// to convert the usual dBm/Hz figure at the boundary. `queue_density` and
/// `wavelength` are derived, not free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    /// Frame length T_f in seconds.
    pub frame_length: f64,
    /// Channel bandwidth B in Hz.
    pub bandwidth: f64,
    /// Packet size eta in bits/packet.
    pub packet_bits: f64,
    /// Unilateral noise PSD N_0 in W/Hz (linear).
    pub noise_psd: f64,
    /// Packet arrival rate N_u in packets/second.
    pub packet_rate: f64,
    /// Queue density lambda_q = N_u * T_f in packets/frame (derived).
    pub queue_density: f64,
    /// Number of transmit antennas N_t.
    pub tx_antennas: u32,
    /// Carrier frequency f_c in Hz.
    pub carrier_hz: f64,
    /// Carrier wavelength in meters (derived from f_c).
    pub wavelength: f64,
    /// SN-to-station distance d_k in meters.
    pub sn_distance: f64,
    /// Reference distance d_0 in meters.
    pub reference_distance: f64,
    /// Path-loss exponent of the SN link.
    pub path_loss_exp: f64,
}

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Below this blocklength the normal approximation is not trusted.
pub const MIN_BLOCKLENGTH: f64 = 100.0;

impl LinkParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        frame_length: f64,
        bandwidth: f64,
        packet_bits: f64,
        noise_psd: f64,
        packet_rate: f64,
        tx_antennas: u32,
        carrier_hz: f64,
        sn_distance: f64,
        reference_distance: f64,
        path_loss_exp: f64,
    ) -> Result<Self> {
        if !(frame_length > 0.0) {
            return Err(Error::domain("LinkParams", "frame_length must be > 0"));
        }
        if !(bandwidth > 0.0) {
            return Err(Error::domain("LinkParams", "bandwidth must be > 0"));
        }
        if !(packet_bits > 0.0) {
            return Err(Error::domain("LinkParams", "packet_bits must be > 0"));
        }
        if !(noise_psd > 0.0) {
            return Err(Error::domain("LinkParams", "noise_psd must be > 0"));
        }
        if !(packet_rate > 0.0) {
            return Err(Error::domain("LinkParams", "packet_rate must be > 0"));
        }
        if tx_antennas < 1 {
            return Err(Error::domain("LinkParams", "tx_antennas must be >= 1"));
        }
        if !(carrier_hz > 0.0) {
            return Err(Error::domain("LinkParams", "carrier_hz must be > 0"));
        }
        if !(reference_distance > 0.0) || sn_distance < reference_distance {
            return Err(Error::domain(
                "LinkParams",
                "require sn_distance >= reference_distance > 0",
            ));
        }
        let n = frame_length * bandwidth;
        if n < MIN_BLOCKLENGTH {
            return Err(Error::domain(
                "LinkParams",
                format!("blocklength T_f*B = {n} below validity floor {MIN_BLOCKLENGTH}"),
            ));
        }
        Ok(LinkParams {
            frame_length,
            bandwidth,
            packet_bits,
            noise_psd,
            packet_rate,
            queue_density: packet_rate * frame_length,
            tx_antennas,
            carrier_hz,
            wavelength: SPEED_OF_LIGHT / carrier_hz,
            sn_distance,
            reference_distance,
            path_loss_exp,
        })
    }

    /// Blocklength n = T_f * B in channel uses.
    pub fn blocklength(&self) -> f64 {
        self.frame_length * self.bandwidth
    }

    /// Noise floor N_0 * B in watts.
    pub fn noise_floor(&self) -> f64 {
        self.noise_psd * self.bandwidth
    }

    /// Convert a PSD given in dBm/Hz to linear W/Hz.
    pub fn noise_psd_from_dbm_hz(dbm_hz: f64) -> f64 {
        10f64.powf((dbm_hz - 30.0) / 10.0)
    }
}

/// Error-probability budget and delay bound of the downlink QoS target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosBudget {
    /// Total error-probability budget eps_QoS.
    pub eps_qos: f64,
    /// Maximum tolerable delay D_max in seconds.
    pub d_max: f64,
}

impl QosBudget {
    pub fn new(eps_qos: f64, d_max: f64) -> Result<Self> {
        if !(eps_qos > 0.0 && eps_qos < 1.0) {
            return Err(Error::domain("QosBudget", "eps_qos must be in (0,1)"));
        }
        if !(d_max > 0.0) {
            return Err(Error::domain("QosBudget", "d_max must be > 0"));
        }
        Ok(QosBudget { eps_qos, d_max })
    }
}

/// Gaussian Q-function: upper tail of the standard normal.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Standard normal density.
fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Inverse of the Gaussian Q-function.
///
/// Rational initial guess (Acklam) refined with two Newton steps on
/// `Q(x) - p`; absolute accuracy in probability is well below 1e-12
/// over the whole open interval.
pub fn inverse_q(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("inverse_q", format!("p = {p} not in (0,1)")));
    }
    // Q^{-1}(p) = -Phi^{-1}(p)
    let mut x = -acklam_inverse_normal_cdf(p);
    for _ in 0..2 {
        let err = q_function(x) - p;
        let d = normal_pdf(x);
        if d > 0.0 {
            x += err / d;
        }
    }
    Ok(x)
}

/// Acklam's rational approximation to the inverse standard normal CDF.
#[allow(clippy::excessive_precision)] // coefficients kept as published
fn acklam_inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Channel dispersion `sigma = 1 - (1 + gamma)^{-2}`, in [0, 1).
pub fn channel_dispersion(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain("channel_dispersion", "gamma must be >= 0"));
    }
    let t = 1.0 + gamma;
    Ok(1.0 - 1.0 / (t * t))
}

/// Which dispersion factor to use in the finite-blocklength rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DispersionMode {
    /// sigma fixed to 1 (high-SINR form; the one the optimization uses).
    #[default]
    Unit,
    /// Full `sqrt(sigma / n)` penalty.
    General,
}

/// Maximum coding rate of a short packet at SINR `gamma` and decoding error
/// `eps_c`, in packets/frame.
///
/// May be negative for tiny SINR; callers treat a negative rate as
/// infeasible, it is not clamped here.
pub fn finite_blocklength_rate(
    gamma: f64,
    params: &LinkParams,
    eps_c: f64,
    mode: DispersionMode,
) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain("finite_blocklength_rate", "gamma must be > 0"));
    }
    if !(eps_c > 0.0 && eps_c < 1.0) {
        return Err(Error::domain("finite_blocklength_rate", "eps_c must be in (0,1)"));
    }
    let n = params.blocklength();
    let sigma = match mode {
        DispersionMode::Unit => 1.0,
        DispersionMode::General => channel_dispersion(gamma)?,
    };
    let penalty = (sigma / n).sqrt() * inverse_q(eps_c)?;
    Ok(n / (params.packet_bits * std::f64::consts::LN_2) * ((1.0 + gamma).ln() - penalty))
}

/// Queueing exponent `Omega = -2 T_f ln(eps_q) / D_max`.
pub fn omega(eps_q: f64, frame_length: f64, d_max: f64) -> Result<f64> {
    if !(eps_q > 0.0 && eps_q < 1.0) {
        return Err(Error::domain("omega", "eps_q must be in (0,1)"));
    }
    Ok(-2.0 * frame_length * eps_q.ln() / d_max)
}

/// Effective bandwidth of the downlink queue.
///
/// Returns `(E_B, theta)` with `E_B` in packets/second. `theta` is the decay
/// rate of the queue-length tail; `E_B * D_max * theta = ln(1/eps_u)` holds
/// exactly.
pub fn effective_bandwidth(
    eps_u: f64,
    d_max: f64,
    frame_length: f64,
    queue_density: f64,
) -> Result<(f64, f64)> {
    if !(eps_u > 0.0 && eps_u < 1.0) {
        return Err(Error::domain("effective_bandwidth", "eps_u must be in (0,1)"));
    }
    if !(queue_density > 0.0) {
        return Err(Error::domain("effective_bandwidth", "queue_density must be > 0"));
    }
    let log_inv = -eps_u.ln();
    let theta = (frame_length * log_inv / (queue_density * d_max) + 1.0).ln();
    let e_b = log_inv / (d_max * theta);
    Ok((e_b, theta))
}

/// SINR required to carry `E_B` packets/second at decode error `eps_c`:
/// `nu = exp(E_B eta ln2 / B + sqrt(1/(T_f B)) Q^{-1}(eps_c)) - 1`.
pub fn required_sinr_nu(e_b: f64, params: &LinkParams, eps_c: f64) -> Result<f64> {
    if !(e_b > 0.0) {
        return Err(Error::domain("required_sinr_nu", "e_b must be > 0"));
    }
    if !(eps_c > 0.0 && eps_c < 1.0) {
        return Err(Error::domain("required_sinr_nu", "eps_c must be in (0,1)"));
    }
    let expo = e_b * params.packet_bits * std::f64::consts::LN_2 / params.bandwidth
        + (1.0 / params.blocklength()).sqrt() * inverse_q(eps_c)?;
    Ok(expo.exp() - 1.0)
}

/// Minimum transmit power meeting SINR `nu` at fading gain `g`, path gain
/// `path_gain` and total noise-plus-interference `noise_plus_i` watts.
pub fn min_power(nu: f64, g: f64, path_gain: f64, noise_plus_i: f64) -> Result<f64> {
    for (name, v) in [("nu", nu), ("g", g), ("path_gain", path_gain), ("noise_plus_i", noise_plus_i)] {
        if !(v > 0.0) {
            return Err(Error::domain("min_power", format!("{name} must be > 0")));
        }
    }
    Ok(noise_plus_i * nu / (g * path_gain))
}

/// Achievable rate when transmitting at the power ceiling `p_u` with the
/// fading gain pinned to `g_th`, in packets/frame.
pub fn rate_threshold(
    g_th: f64,
    path_gain: f64,
    p_u: f64,
    params: &LinkParams,
    eps_c: f64,
    interference: f64,
) -> Result<f64> {
    if !(interference >= 0.0) {
        return Err(Error::domain("rate_threshold", "interference must be >= 0"));
    }
    let gamma = g_th * path_gain * p_u / (params.noise_floor() + interference);
    finite_blocklength_rate(gamma, params, eps_c, DispersionMode::Unit)
}
