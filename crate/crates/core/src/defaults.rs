//! Canonical default scenario: the reference parameter set used by the
//! acceptance suite and applied for any key omitted from a config file.

use crate::antenna::GainPattern;
use crate::geometry::OrbitShell;
use crate::qos::{LinkParams, QosBudget};

pub const FRAME_LENGTH_S: f64 = 1e-4;
pub const PACKET_RATE_PKT_S: f64 = 10_000.0;
pub const EPS_QOS: f64 = 1e-9;
pub const D_MAX_S: f64 = 1e-4;
pub const PATHLOSS_EXP_ATMOSPHERE: f64 = 2.5;
pub const PATHLOSS_EXP_SPACE: f64 = 2.0;
pub const PACKET_BITS: f64 = 160.0;
pub const BANDWIDTH_HZ: f64 = 1e7;
pub const CARRIER_HZ: f64 = 12e9;
pub const NOISE_PSD_DBM_HZ: f64 = -150.0;
pub const SAT_TX_POWER_W: f64 = 10.0;
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
/// Atmosphere boundary height (Karman line); overridable in config.
pub const ATMOSPHERE_REF_M: f64 = 100_000.0;
pub const TX_ANTENNAS: u32 = 2;
pub const SN_DISTANCE_M: f64 = 100_000.0;
pub const REFERENCE_DISTANCE_M: f64 = 1.0;
/// Satellite mainlobe half-width in direction cosine, |u| <= 0.28.
pub const SAT_HALFWIDTH_U: f64 = 0.28;
pub const RX_HALFWIDTH_U: f64 = 0.05;
pub const RX_STEER_U: f64 = 0.3;
pub const PATTERN_SAMPLES: usize = 201;
pub const QUADRATURE_POINTS: usize = 1024;

/// Orbit altitudes in meters for the three default shells.
pub const SHELL_ALTITUDES_M: [f64; 3] = [350e3, 1000e3, 4000e3];
/// Satellite counts for the three default shells.
pub const SHELL_COUNTS: [u64; 3] = [60_000, 8_000, 600];

pub fn link_params() -> LinkParams {
    LinkParams::new(
        FRAME_LENGTH_S,
        BANDWIDTH_HZ,
        PACKET_BITS,
        LinkParams::noise_psd_from_dbm_hz(NOISE_PSD_DBM_HZ),
        PACKET_RATE_PKT_S,
        TX_ANTENNAS,
        CARRIER_HZ,
        SN_DISTANCE_M,
        REFERENCE_DISTANCE_M,
        PATHLOSS_EXP_ATMOSPHERE,
    )
    .expect("default link parameters are valid")
}

pub fn qos_budget() -> QosBudget {
    QosBudget::new(EPS_QOS, D_MAX_S).expect("default QoS budget is valid")
}

pub fn shells() -> Vec<OrbitShell> {
    SHELL_ALTITUDES_M
        .iter()
        .zip(SHELL_COUNTS.iter())
        .map(|(&l, &n)| {
            OrbitShell::new(
                l,
                n,
                ATMOSPHERE_REF_M,
                PATHLOSS_EXP_ATMOSPHERE,
                PATHLOSS_EXP_SPACE,
                EARTH_RADIUS_M,
                SAT_TX_POWER_W,
                SAT_HALFWIDTH_U,
            )
            .expect("default shell is valid")
        })
        .collect()
}

/// Unit-gain satellite mainlobe over |u| <= 0.28, zero sidelobes.
pub fn sat_pattern() -> GainPattern {
    crate::antenna::piecewise_pattern(1.0, 0.0, 0.0, SAT_HALFWIDTH_U, PATTERN_SAMPLES)
        .expect("default satellite pattern is valid")
}

/// Unit-gain receiver mainlobe of half-width 0.05 about `steer_u`.
pub fn rx_pattern(steer_u: f64) -> GainPattern {
    crate::antenna::piecewise_pattern(1.0, 0.0, steer_u, RX_HALFWIDTH_U, PATTERN_SAMPLES)
        .expect("default receiver pattern is valid")
}
