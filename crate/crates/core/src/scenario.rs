//! Scenario assembly from flat key-value config files.
//!
//! The format is UTF-8 text, one `key = value` pair per line, `#` starting a
//! comment, with repeated `[shell]` blocks for the orbital shells. Every
//! omitted key falls back to the reference default, so an empty file is the
//! complete default scenario. Validation failures name the offending key.

use std::path::Path;

use crate::antenna::{piecewise_pattern, GainPattern};
use crate::defaults;
use crate::error::{Error, Result};
use crate::geometry::{OrbitShell, SnLinkGeometry};
use crate::interference::InterferenceConfig;
use crate::qos::{LinkParams, QosBudget};

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: LinkParams,
    pub qos: QosBudget,
    pub shells: Vec<OrbitShell>,
    /// Receiver steering direction cosine.
    pub rx_steer_u: f64,
    /// Receiver mainlobe half-width in direction cosine.
    pub rx_halfwidth_u: f64,
    /// Satellite mainlobe half-width in direction cosine.
    pub sat_halfwidth_u: f64,
    /// Fraction of satellites transmitting toward the station.
    pub duty_cycle: f64,
    pub quadrature_points: usize,
    /// Hard-gate gains to zero outside the mainlobe intersection.
    pub gating: bool,
    /// Samples per gain pattern.
    pub pattern_samples: usize,
    /// FNV-1a hash of the raw config bytes (0 for the built-in defaults).
    pub config_hash: u64,
}

/// Elevation angle in degrees for a direction cosine.
pub fn elevation_deg_from_u(u: f64) -> f64 {
    u.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Direction cosine for an elevation angle in degrees.
pub fn u_from_elevation_deg(deg: f64) -> f64 {
    deg.to_radians().cos()
}

/// FNV-1a 64-bit hash.
pub fn fnv1a_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Raw key-value state before validation; every field optional.
#[derive(Debug, Default)]
struct RawScenario {
    globals: Vec<(String, String, usize)>,
    shells: Vec<Vec<(String, String, usize)>>,
}

fn parse_raw(text: &str) -> Result<RawScenario> {
    let mut raw = RawScenario::default();
    let mut in_shell = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line != "[shell]" {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown section {line}; only [shell] is recognized"),
                });
            }
            raw.shells.push(Vec::new());
            in_shell = true;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected key = value, got {line:?}"),
            });
        };
        let entry = (key.trim().to_string(), value.trim().to_string(), lineno);
        if in_shell {
            raw.shells.last_mut().unwrap().push(entry);
        } else {
            raw.globals.push(entry);
        }
    }
    Ok(raw)
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("key {key}: {value:?} is not a number"),
    })
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64> {
    value.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("key {key}: {value:?} is not a non-negative integer"),
    })
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value {
        "true" | "1" | "on" => Ok(true),
        "false" | "0" | "off" => Ok(false),
        _ => Err(Error::Parse {
            line,
            msg: format!("key {key}: {value:?} is not a boolean"),
        }),
    }
}

fn require(cond: bool, key: &str, constraint: &str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(format!("key {key}: value {value} violates {constraint}")))
    }
}

impl Scenario {
    /// The built-in reference scenario.
    pub fn default_scenario() -> Scenario {
        Scenario {
            params: defaults::link_params(),
            qos: defaults::qos_budget(),
            shells: defaults::shells(),
            rx_steer_u: defaults::RX_STEER_U,
            rx_halfwidth_u: defaults::RX_HALFWIDTH_U,
            sat_halfwidth_u: defaults::SAT_HALFWIDTH_U,
            duty_cycle: 1.0,
            quadrature_points: defaults::QUADRATURE_POINTS,
            gating: true,
            pattern_samples: defaults::PATTERN_SAMPLES,
            config_hash: fnv1a_hash(b""),
        }
    }

    /// Parse and validate a config file.
    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        let mut s = Scenario::from_str(&text)?;
        s.config_hash = fnv1a_hash(text.as_bytes());
        Ok(s)
    }

    /// Parse and validate config text.
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Scenario> {
        let raw = parse_raw(text)?;

        let mut frame_length = defaults::FRAME_LENGTH_S;
        let mut bandwidth = defaults::BANDWIDTH_HZ;
        let mut packet_bits = defaults::PACKET_BITS;
        let mut noise_psd_dbm_hz = defaults::NOISE_PSD_DBM_HZ;
        let mut packet_rate = defaults::PACKET_RATE_PKT_S;
        let mut tx_antennas = defaults::TX_ANTENNAS as u64;
        let mut carrier_hz = defaults::CARRIER_HZ;
        let mut sn_distance = defaults::SN_DISTANCE_M;
        let mut reference_distance = defaults::REFERENCE_DISTANCE_M;
        let mut alpha_atmosphere = defaults::PATHLOSS_EXP_ATMOSPHERE;
        let mut alpha_space = defaults::PATHLOSS_EXP_SPACE;
        let mut eps_qos = defaults::EPS_QOS;
        let mut d_max = defaults::D_MAX_S;
        let mut earth_radius = defaults::EARTH_RADIUS_M;
        let mut atmosphere_ref = defaults::ATMOSPHERE_REF_M;
        let mut sat_tx_power = defaults::SAT_TX_POWER_W;
        let mut sat_halfwidth_u = defaults::SAT_HALFWIDTH_U;
        let mut rx_halfwidth_u = defaults::RX_HALFWIDTH_U;
        let mut rx_steer_u = defaults::RX_STEER_U;
        let mut steer_set_by_elevation = false;
        let mut duty_cycle = 1.0;
        let mut quadrature_points = defaults::QUADRATURE_POINTS as u64;
        let mut gating = true;
        let mut pattern_samples = defaults::PATTERN_SAMPLES as u64;

        for (key, value, line) in &raw.globals {
            let (key, value, line) = (key.as_str(), value.as_str(), *line);
            match key {
                "frame_length_s" => frame_length = parse_f64(key, value, line)?,
                "bandwidth_hz" => bandwidth = parse_f64(key, value, line)?,
                "packet_bits" => packet_bits = parse_f64(key, value, line)?,
                "noise_psd_dbm_hz" => noise_psd_dbm_hz = parse_f64(key, value, line)?,
                "packet_rate_pkt_s" => packet_rate = parse_f64(key, value, line)?,
                "tx_antennas" => tx_antennas = parse_u64(key, value, line)?,
                "carrier_hz" => carrier_hz = parse_f64(key, value, line)?,
                "sn_distance_m" => sn_distance = parse_f64(key, value, line)?,
                "reference_distance_m" => reference_distance = parse_f64(key, value, line)?,
                "pathloss_exp_atmosphere" => alpha_atmosphere = parse_f64(key, value, line)?,
                "pathloss_exp_space" => alpha_space = parse_f64(key, value, line)?,
                "eps_qos" => eps_qos = parse_f64(key, value, line)?,
                "d_max_s" => d_max = parse_f64(key, value, line)?,
                "earth_radius_m" => earth_radius = parse_f64(key, value, line)?,
                "atmosphere_ref_m" => atmosphere_ref = parse_f64(key, value, line)?,
                "sat_tx_power_w" => sat_tx_power = parse_f64(key, value, line)?,
                "sat_halfwidth_u" => sat_halfwidth_u = parse_f64(key, value, line)?,
                "rx_halfwidth_u" => rx_halfwidth_u = parse_f64(key, value, line)?,
                "rx_steer_u" => {
                    rx_steer_u = parse_f64(key, value, line)?;
                    steer_set_by_elevation = false;
                }
                "elevation_deg" => {
                    let deg = parse_f64(key, value, line)?;
                    require((0.0..=90.0).contains(&deg), key, "range [0, 90] degrees", deg)?;
                    rx_steer_u = u_from_elevation_deg(deg);
                    steer_set_by_elevation = true;
                }
                "duty_cycle" => duty_cycle = parse_f64(key, value, line)?,
                "quadrature_points" => quadrature_points = parse_u64(key, value, line)?,
                "gating" => gating = parse_bool(key, value, line)?,
                "pattern_samples" => pattern_samples = parse_u64(key, value, line)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown key {key}"),
                    })
                }
            }
        }

        require(eps_qos > 0.0 && eps_qos < 1.0, "eps_qos", "open interval (0, 1)", eps_qos)?;
        require(d_max > 0.0, "d_max_s", "positivity", d_max)?;
        require(frame_length > 0.0, "frame_length_s", "positivity", frame_length)?;
        require(bandwidth > 0.0, "bandwidth_hz", "positivity", bandwidth)?;
        require(packet_bits > 0.0, "packet_bits", "positivity", packet_bits)?;
        require(packet_rate > 0.0, "packet_rate_pkt_s", "positivity", packet_rate)?;
        require(tx_antennas >= 1, "tx_antennas", "at least one antenna", tx_antennas as f64)?;
        require(
            tx_antennas <= crate::fading::MAX_TX_ANTENNAS as u64,
            "tx_antennas",
            "supported antenna range",
            tx_antennas as f64,
        )?;
        require(carrier_hz > 0.0, "carrier_hz", "positivity", carrier_hz)?;
        require(
            reference_distance > 0.0 && sn_distance >= reference_distance,
            "sn_distance_m",
            "sn_distance_m >= reference_distance_m > 0",
            sn_distance,
        )?;
        require(
            sat_halfwidth_u > 0.0 && sat_halfwidth_u <= 1.0,
            "sat_halfwidth_u",
            "half-open interval (0, 1]",
            sat_halfwidth_u,
        )?;
        require(
            rx_halfwidth_u > 0.0 && rx_halfwidth_u <= 1.0,
            "rx_halfwidth_u",
            "half-open interval (0, 1]",
            rx_halfwidth_u,
        )?;
        require(
            (-1.0..=1.0).contains(&rx_steer_u),
            if steer_set_by_elevation { "elevation_deg" } else { "rx_steer_u" },
            "direction cosine range [-1, 1]",
            rx_steer_u,
        )?;
        require(duty_cycle > 0.0 && duty_cycle <= 1.0, "duty_cycle", "half-open interval (0, 1]", duty_cycle)?;
        require(quadrature_points >= 64, "quadrature_points", "minimum of 64", quadrature_points as f64)?;
        require(pattern_samples >= 16, "pattern_samples", "minimum of 16", pattern_samples as f64)?;
        require(atmosphere_ref > 0.0, "atmosphere_ref_m", "positivity", atmosphere_ref)?;
        require(earth_radius > 0.0, "earth_radius_m", "positivity", earth_radius)?;
        require(sat_tx_power > 0.0, "sat_tx_power_w", "positivity", sat_tx_power)?;

        let params = LinkParams::new(
            frame_length,
            bandwidth,
            packet_bits,
            LinkParams::noise_psd_from_dbm_hz(noise_psd_dbm_hz),
            packet_rate,
            tx_antennas as u32,
            carrier_hz,
            sn_distance,
            reference_distance,
            alpha_atmosphere,
        )?;
        let qos = QosBudget::new(eps_qos, d_max)?;

        let mut shells = Vec::new();
        for (i, block) in raw.shells.iter().enumerate() {
            let mut altitude = None;
            let mut count = None;
            let mut power = sat_tx_power;
            let mut halfwidth = sat_halfwidth_u;
            for (key, value, line) in block {
                let (key, value, line) = (key.as_str(), value.as_str(), *line);
                match key {
                    "altitude_m" => altitude = Some(parse_f64(key, value, line)?),
                    "satellite_count" => count = Some(parse_u64(key, value, line)?),
                    "tx_power_w" => power = parse_f64(key, value, line)?,
                    "sat_halfwidth_u" => halfwidth = parse_f64(key, value, line)?,
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("unknown shell key {key}"),
                        })
                    }
                }
            }
            let altitude = altitude.ok_or_else(|| {
                Error::Validation(format!("shell {}: key altitude_m is required", i + 1))
            })?;
            let count = count.ok_or_else(|| {
                Error::Validation(format!("shell {}: key satellite_count is required", i + 1))
            })?;
            require(
                altitude > atmosphere_ref,
                "altitude_m",
                "altitude_m > atmosphere_ref_m",
                altitude,
            )?;
            shells.push(OrbitShell::new(
                altitude,
                count,
                atmosphere_ref,
                alpha_atmosphere,
                alpha_space,
                earth_radius,
                power,
                halfwidth,
            )?);
        }
        if shells.is_empty() {
            shells = defaults::SHELL_ALTITUDES_M
                .iter()
                .zip(defaults::SHELL_COUNTS.iter())
                .map(|(&l, &n)| {
                    OrbitShell::new(
                        l,
                        n,
                        atmosphere_ref,
                        alpha_atmosphere,
                        alpha_space,
                        earth_radius,
                        sat_tx_power,
                        sat_halfwidth_u,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
        }

        Ok(Scenario {
            params,
            qos,
            shells,
            rx_steer_u,
            rx_halfwidth_u,
            sat_halfwidth_u,
            duty_cycle,
            quadrature_points: quadrature_points as usize,
            gating,
            pattern_samples: pattern_samples as usize,
            config_hash: fnv1a_hash(text.as_bytes()),
        })
    }

    /// Unit-gain satellite mainlobe pattern for this scenario.
    pub fn tx_pattern(&self) -> GainPattern {
        piecewise_pattern(1.0, 0.0, 0.0, self.sat_halfwidth_u, self.pattern_samples)
            .expect("validated scenario produces a valid satellite pattern")
    }

    /// Unit-gain receiver pattern steered to `steer_u`.
    pub fn rx_pattern(&self, steer_u: f64) -> GainPattern {
        piecewise_pattern(1.0, 0.0, steer_u, self.rx_halfwidth_u, self.pattern_samples)
            .expect("validated scenario produces a valid receiver pattern")
    }

    /// Interference configuration at receiver steering `steer_u`.
    pub fn interference_config(&self, steer_u: f64) -> InterferenceConfig {
        InterferenceConfig {
            shells: self.shells.clone(),
            tx_pattern: self.tx_pattern(),
            rx_pattern: self.rx_pattern(steer_u),
            rx_steer_u: steer_u,
            gating: self.gating,
            quadrature_points: self.quadrature_points,
            duty_cycle: self.duty_cycle,
        }
    }

    /// SN link geometry at distance `d_k` meters.
    pub fn geometry_at(&self, d_k: f64) -> Result<SnLinkGeometry> {
        SnLinkGeometry::new(
            d_k,
            self.params.reference_distance,
            self.params.wavelength,
            self.params.path_loss_exp,
        )
    }
}
