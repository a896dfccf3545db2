//! Path loss, link budget and ideal rate selection.
//!
//! Three loss models are provided: free-space (Friis) for open venues, the
//! ITU-R P.1411 street-canyon line-of-sight model, and the ITU-R P.1411
//! over-rooftop non-line-of-sight model. Rate selection mimics an ideal
//! remote-station manager: the fastest MCS whose SNR threshold is met.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::RadioError;
use crate::geometry::Position3;

pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Distances below this are rejected to keep the log terms finite.
pub const MIN_DISTANCE: f64 = 0.1;

/// Center frequency of 5 GHz channel 50 (160 MHz wide).
pub const CHANNEL_50_HZ: f64 = 5.25e9;

/// One row of the MCS table: PHY rate in Mbit/s and minimum SNR in dB.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    pub index: u8,
    pub phy_rate: f64,
    pub min_snr: f64,
}

/// VHT, 160 MHz, one spatial stream, 800 ns guard interval.
const VHT160_RATES: [f64; 10] = [58.5, 117.0, 175.5, 234.0, 351.0, 468.0, 526.5, 585.0, 702.0, 780.0];

/// Receiver sensitivity per MCS at 160 MHz minus a -85 dBm noise floor.
const VHT160_MIN_SNR: [f64; 10] = [12.0, 15.0, 17.0, 20.0, 23.0, 27.0, 28.0, 29.0, 33.0, 35.0];

pub fn default_mcs_table() -> Vec<McsEntry> {
    VHT160_RATES
        .iter()
        .zip(VHT160_MIN_SNR.iter())
        .enumerate()
        .map(|(i, (&phy_rate, &min_snr))| McsEntry {
            index: i as u8,
            phy_rate,
            min_snr,
        })
        .collect()
}

/// Checks that rates and thresholds both strictly increase with the index.
pub fn validate_mcs_table(table: &[McsEntry]) -> Result<(), String> {
    if table.is_empty() {
        return Err("table is empty".into());
    }
    for (i, e) in table.iter().enumerate() {
        if e.index as usize != i {
            return Err(format!("[{i}].index must be {i}"));
        }
        if !(e.phy_rate > 0.0 && e.phy_rate.is_finite() && e.min_snr.is_finite()) {
            return Err(format!("[{i}] has a non-finite or non-positive value"));
        }
    }
    for (i, w) in table.windows(2).enumerate() {
        if w[1].phy_rate <= w[0].phy_rate {
            return Err(format!("[{}].phy_rate must exceed [{}].phy_rate", i + 1, i));
        }
        if w[1].min_snr <= w[0].min_snr {
            return Err(format!("[{}].min_snr must exceed [{}].min_snr", i + 1, i));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioConfig {
    /// Hz.
    pub frequency: f64,
    /// dBm.
    pub tx_power: f64,
    pub antenna_gain_tx: f64,
    pub antenna_gain_rx: f64,
    /// dBm.
    pub noise_floor: f64,
    /// MHz.
    pub channel_width: u32,
    /// ns.
    pub guard_interval: u32,
    pub spatial_streams: u32,
    pub mcs_table: Vec<McsEntry>,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            frequency: CHANNEL_50_HZ,
            tx_power: 20.0,
            antenna_gain_tx: 0.0,
            antenna_gain_rx: 0.0,
            noise_floor: -85.0,
            channel_width: 160,
            guard_interval: 800,
            spatial_streams: 1,
            mcs_table: default_mcs_table(),
        }
    }
}

impl RadioConfig {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    pub fn validate(&self) -> Result<(), (String, String)> {
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(("frequency".into(), "must be positive".into()));
        }
        if ![20, 40, 80, 160].contains(&self.channel_width) {
            return Err((
                "channel_width".into(),
                "must be one of 20, 40, 80, 160".into(),
            ));
        }
        if self.spatial_streams != 1 {
            return Err(("spatial_streams".into(), "only 1 is supported".into()));
        }
        for (name, v) in [
            ("tx_power", self.tx_power),
            ("antenna_gain_tx", self.antenna_gain_tx),
            ("antenna_gain_rx", self.antenna_gain_rx),
            ("noise_floor", self.noise_floor),
        ] {
            if !v.is_finite() {
                return Err((name.into(), "must be finite".into()));
            }
        }
        validate_mcs_table(&self.mcs_table).map_err(|m| ("mcs_table".to_string(), m))
    }
}

/// Street layout parameters for the over-rooftop model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NlosStreetParams {
    pub avg_rooftop_height: f64,
    pub street_width: f64,
    pub building_separation: f64,
    /// Degrees, 0..=90.
    pub street_orientation: f64,
    pub ue_antenna_height: f64,
}

impl Default for NlosStreetParams {
    fn default() -> Self {
        Self {
            avg_rooftop_height: 15.0,
            street_width: 20.0,
            building_separation: 40.0,
            street_orientation: 45.0,
            ue_antenna_height: 1.5,
        }
    }
}

impl NlosStreetParams {
    pub fn validate(&self) -> Result<(), (String, String)> {
        for (name, v) in [
            ("avg_rooftop_height", self.avg_rooftop_height),
            ("street_width", self.street_width),
            ("building_separation", self.building_separation),
            ("street_orientation", self.street_orientation),
            ("ue_antenna_height", self.ue_antenna_height),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err((name.into(), "must be positive".into()));
            }
        }
        if self.street_orientation > 90.0 {
            return Err(("street_orientation".into(), "must be within [0, 90]".into()));
        }
        Ok(())
    }
}

/// Which loss models a scenario uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagationMode {
    /// No obstacles: Friis for every link.
    FreeSpace,
    /// Obstacles present: P.1411 LoS or NLoS depending on visibility.
    Urban,
}

fn check_distance(distance: f64) -> Result<(), RadioError> {
    if distance.is_finite() && distance >= MIN_DISTANCE {
        Ok(())
    } else {
        Err(RadioError::DegenerateGeometry { distance })
    }
}

/// Free-space loss `20 log10(4 pi d f / c)` in dB.
pub fn friis_loss(distance: f64, cfg: &RadioConfig) -> Result<f64, RadioError> {
    check_distance(distance)?;
    Ok(20.0 * (4.0 * PI * distance * cfg.frequency / SPEED_OF_LIGHT).log10())
}

/// Breakpoint distance of the two-slope LoS model.
pub fn los_breakpoint(cfg: &RadioConfig, h_uav: f64, h_ue: f64) -> f64 {
    4.0 * h_uav * h_ue / cfg.wavelength()
}

/// Median ITU-R P.1411 street-canyon LoS loss.
///
/// 20 dB/decade up to the breakpoint, 40 dB/decade beyond. The expression
/// depends on the antenna heights only through their product, so the two
/// heights may be given in either order.
pub fn itu1411_los_loss(
    distance: f64,
    cfg: &RadioConfig,
    h_uav: f64,
    h_ue: f64,
) -> Result<f64, RadioError> {
    check_distance(distance)?;
    if !(h_uav > 0.0 && h_ue > 0.0) {
        return Err(RadioError::AntennaHeight { h_uav, h_ue });
    }
    let lambda = cfg.wavelength();
    let r_bp = los_breakpoint(cfg, h_uav, h_ue);
    let l_bp = (20.0 * (lambda * lambda / (8.0 * PI * h_uav * h_ue)).log10()).abs();
    let slope = if distance <= r_bp { 20.0 } else { 40.0 };
    Ok(l_bp + 6.0 + slope * (distance / r_bp).log10())
}

fn orientation_loss(phi: f64) -> f64 {
    if phi < 35.0 {
        -10.0 + 0.354 * phi
    } else if phi < 55.0 {
        2.5 + 0.075 * (phi - 35.0)
    } else {
        4.0 - 0.114 * (phi - 55.0)
    }
}

/// ITU-R P.1411 over-rooftop NLoS loss: free space, plus rooftop-to-street
/// diffraction, plus multi-screen diffraction. Both diffraction terms are
/// clamped at zero so the result never drops below free space.
pub fn itu1411_nlos_rooftop_loss(
    distance: f64,
    cfg: &RadioConfig,
    h_uav: f64,
    street: &NlosStreetParams,
) -> Result<f64, RadioError> {
    let free_space = friis_loss(distance, cfg)?;
    let f_mhz = cfg.frequency / 1e6;
    let h_roof = street.avg_rooftop_height;
    let dh_mobile = h_roof - street.ue_antenna_height;
    let dh_base = h_uav - h_roof;
    let d_km = distance / 1000.0;

    let rooftop_to_street = if dh_mobile > 0.0 {
        -8.2 - 10.0 * street.street_width.log10()
            + 10.0 * f_mhz.log10()
            + 20.0 * dh_mobile.log10()
            + orientation_loss(street.street_orientation)
    } else {
        0.0
    };

    let (shadow, k_a, k_d) = if dh_base > 0.0 {
        let k_a = if f_mhz > 2000.0 { 71.4 } else { 54.0 };
        (-18.0 * (1.0 + dh_base).log10(), k_a, 18.0)
    } else {
        let k_a = if distance >= 500.0 {
            54.0 - 0.8 * dh_base
        } else {
            54.0 - 1.6 * dh_base * d_km
        };
        (0.0, k_a, 18.0 - 15.0 * dh_base / h_roof)
    };
    let k_f = if f_mhz > 2000.0 {
        -8.0
    } else {
        -4.0 + 1.5 * (f_mhz / 925.0 - 1.0)
    };
    let multi_screen = shadow + k_a + k_d * d_km.log10() + k_f * f_mhz.log10()
        - 9.0 * street.building_separation.log10();

    Ok(free_space + rooftop_to_street.max(0.0) + multi_screen.max(0.0))
}

/// Loss between the UAV and a user, picking the model from the propagation
/// mode and the link's visibility. Distance is 3-D Euclidean.
pub fn path_loss(
    uav: &Position3,
    ue: &Position3,
    los: bool,
    mode: PropagationMode,
    cfg: &RadioConfig,
    street: &NlosStreetParams,
) -> Result<f64, RadioError> {
    let d = uav.distance(ue);
    match (mode, los) {
        (PropagationMode::FreeSpace, _) => friis_loss(d, cfg),
        (PropagationMode::Urban, true) => itu1411_los_loss(d, cfg, uav.z, ue.z),
        (PropagationMode::Urban, false) => itu1411_nlos_rooftop_loss(d, cfg, uav.z, street),
    }
}

pub fn snr_db(cfg: &RadioConfig, loss: f64) -> f64 {
    cfg.tx_power + cfg.antenna_gain_tx + cfg.antenna_gain_rx - loss - cfg.noise_floor
}

/// Highest MCS whose threshold is met, or `None` below MCS 0.
pub fn select_mcs(snr: f64, table: &[McsEntry]) -> Option<McsEntry> {
    table.iter().rev().find(|e| e.min_snr <= snr).copied()
}
