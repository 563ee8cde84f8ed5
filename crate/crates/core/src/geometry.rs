//! Path loss, point-process intensity measures, and per-shell integration
//! limits for the interfering orbital shells, plus the SN's own path gain.
//!
//! Distances are SI meters everywhere. The segmented interferer path loss is
//! dimensionally informal, so a unit convention is required before
//! exponentiation; by default all lengths entering it are expressed in
//! kilometers (`pathloss_unit_km`).

use crate::error::{Error, Result};
use crate::qos::LinkParams;

/// Floor on direction cosines when mapping u -> d = L/u, to keep distances
/// finite near u = 0.
pub const U_FLOOR: f64 = 1e-6;

/// One interfering orbital shell.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitShell {
    /// Orbit altitude L in meters.
    pub altitude: f64,
    /// Number of satellites on the shell.
    pub satellite_count: u64,
    /// Uniform surface density in satellites/m^2 (derived).
    pub density: f64,
    /// Atmosphere boundary height L_r in meters.
    pub atmosphere_ref: f64,
    /// Path-loss exponent inside the atmosphere.
    pub alpha_atmosphere: f64,
    /// Path-loss exponent in space.
    pub alpha_space: f64,
    /// Earth radius C_0 in meters.
    pub earth_radius: f64,
    /// Mean satellite transmit power P_SN in watts.
    pub tx_power: f64,
    /// Satellite mainlobe half-width in direction cosine (centered on u = 0).
    pub sat_halfwidth_u: f64,
    /// Express lengths in kilometers inside the path-loss formula.
    pub pathloss_unit_km: bool,
}

impl OrbitShell {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        altitude: f64,
        satellite_count: u64,
        atmosphere_ref: f64,
        alpha_atmosphere: f64,
        alpha_space: f64,
        earth_radius: f64,
        tx_power: f64,
        sat_halfwidth_u: f64,
    ) -> Result<Self> {
        if !(altitude > atmosphere_ref && atmosphere_ref > 0.0) {
            return Err(Error::domain("OrbitShell", "require altitude > atmosphere_ref > 0"));
        }
        if satellite_count < 1 {
            return Err(Error::domain("OrbitShell", "satellite_count must be >= 1"));
        }
        if !(earth_radius > 0.0) {
            return Err(Error::domain("OrbitShell", "earth_radius must be > 0"));
        }
        if !(tx_power > 0.0) {
            return Err(Error::domain("OrbitShell", "tx_power must be > 0"));
        }
        if !(sat_halfwidth_u > 0.0 && sat_halfwidth_u <= 1.0) {
            return Err(Error::domain("OrbitShell", "sat_halfwidth_u must be in (0,1]"));
        }
        Ok(OrbitShell {
            altitude,
            satellite_count,
            density: satellite_density(satellite_count, altitude, earth_radius),
            atmosphere_ref,
            alpha_atmosphere,
            alpha_space,
            earth_radius,
            tx_power,
            sat_halfwidth_u,
            pathloss_unit_km: true,
        })
    }
}

/// Geometry of the SN's own downlink for the free-space-plus-exponent path
/// gain model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnLinkGeometry {
    /// SN-to-station distance d_k in meters.
    pub sn_distance: f64,
    /// Reference distance d_0 in meters.
    pub reference_distance: f64,
    /// Carrier wavelength in meters.
    pub wavelength: f64,
    /// Path-loss exponent of the SN link.
    pub alpha_link: f64,
}

impl SnLinkGeometry {
    pub fn new(sn_distance: f64, reference_distance: f64, wavelength: f64, alpha_link: f64) -> Result<Self> {
        if !(reference_distance > 0.0) || sn_distance < reference_distance {
            return Err(Error::domain(
                "SnLinkGeometry",
                "require sn_distance >= reference_distance > 0",
            ));
        }
        if !(wavelength > 0.0) {
            return Err(Error::domain("SnLinkGeometry", "wavelength must be > 0"));
        }
        Ok(SnLinkGeometry { sn_distance, reference_distance, wavelength, alpha_link })
    }
}

impl From<&LinkParams> for SnLinkGeometry {
    fn from(p: &LinkParams) -> Self {
        SnLinkGeometry {
            sn_distance: p.sn_distance,
            reference_distance: p.reference_distance,
            wavelength: p.wavelength,
            alpha_link: p.path_loss_exp,
        }
    }
}

/// Segmented interferer path loss
/// `f_PL(d) = (L_r d / L)^{-alpha} + ((d^2 - L_r d) / L)^{-alpha0}`,
/// with lengths in kilometers when the shell's unit convention says so.
pub fn interferer_path_loss(d: f64, shell: &OrbitShell) -> Result<f64> {
    if !(d > shell.atmosphere_ref) {
        return Err(Error::domain(
            "interferer_path_loss",
            format!("d = {d} must exceed the atmosphere boundary {}", shell.atmosphere_ref),
        ));
    }
    let scale = if shell.pathloss_unit_km { 1e-3 } else { 1.0 };
    let (d, l, l_r) = (d * scale, shell.altitude * scale, shell.atmosphere_ref * scale);
    let atmo = (l_r * d / l).powf(-shell.alpha_atmosphere);
    let space = ((d * d - l_r * d) / l).powf(-shell.alpha_space);
    Ok(atmo + space)
}

/// SN downlink path gain, linear: free-space at the reference distance plus
/// a `10 alpha lg(d_k/d_0)` dB distance term.
pub fn sn_path_gain(geom: &SnLinkGeometry) -> f64 {
    10f64.powf(-sn_path_loss_db(geom) / 10.0)
}

/// The same quantity in dB (positive loss).
pub fn sn_path_loss_db(geom: &SnLinkGeometry) -> f64 {
    -20.0 * (geom.wavelength / (4.0 * std::f64::consts::PI * geom.reference_distance)).log10()
        + 10.0 * geom.alpha_link * (geom.sn_distance / geom.reference_distance).log10()
}

/// Uniform shell density `n_L / (4 pi (C_0 + L)^2)` in satellites/m^2.
pub fn satellite_density(n_sats: u64, altitude: f64, earth_radius: f64) -> f64 {
    let r = earth_radius + altitude;
    n_sats as f64 / (4.0 * std::f64::consts::PI * r * r)
}

/// Intensity density of the distance-domain point process:
/// `Lambda'(d) = 2 pi lambda_d sqrt(d^2 - L^2)`, per meter.
pub fn intensity_density(d: f64, shell: &OrbitShell) -> Result<f64> {
    if d < shell.altitude {
        return Err(Error::domain("intensity_density", "d must be >= shell altitude"));
    }
    let l = shell.altitude;
    Ok(2.0 * std::f64::consts::PI * shell.density * (d * d - l * l).sqrt())
}

/// Planar disc measure `lambda_d pi (d^2 - L^2)` — the expected count inside
/// the disc of radius `r = sqrt(d^2 - L^2)` on the shell plane.
pub fn disc_measure(d: f64, shell: &OrbitShell) -> Result<f64> {
    if d < shell.altitude {
        return Err(Error::domain("disc_measure", "d must be >= shell altitude"));
    }
    let l = shell.altitude;
    Ok(shell.density * std::f64::consts::PI * (d * d - l * l))
}

/// Antiderivative of `sqrt(s^2 - L^2)` evaluated as the definite integral
/// over `[L, d]`.
pub(crate) fn sqrt_term_integral(l: f64, d: f64) -> f64 {
    let r = (d * d - l * l).max(0.0).sqrt();
    0.5 * (d * r - l * l * ((d + r) / l).ln())
}

/// Integral of the intensity density over `[d_lo, d_hi]`: the expected point
/// count of the distance-domain process on that window.
pub fn cumulative_intensity(d_lo: f64, d_hi: f64, shell: &OrbitShell) -> Result<f64> {
    if d_lo < shell.altitude || d_hi < d_lo {
        return Err(Error::domain("cumulative_intensity", "need altitude <= d_lo <= d_hi"));
    }
    let l = shell.altitude;
    Ok(2.0 * std::f64::consts::PI
        * shell.density
        * (sqrt_term_integral(l, d_hi) - sqrt_term_integral(l, d_lo)))
}

/// Distance window on one shell where both mainlobes overlap, through
/// `d = L / u`. `None` means no overlap: the shell contributes nothing.
pub fn integration_limits(
    rx_steer_u: f64,
    rx_halfwidth_u: f64,
    sat_halfwidth_u: f64,
    l_m: f64,
) -> Option<(f64, f64)> {
    // The satellite mainlobe's lower edge -sat_halfwidth_u is always below
    // the positive-u floor, so it never binds.
    let u_lo = (rx_steer_u - rx_halfwidth_u).max(U_FLOOR);
    let u_hi = (rx_steer_u + rx_halfwidth_u).min(sat_halfwidth_u);
    if u_hi <= u_lo {
        return None;
    }
    Some((l_m / u_hi, l_m / u_lo))
}
