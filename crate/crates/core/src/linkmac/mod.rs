//! Turning per-link PHY rates and traffic demands into throughput, delay and
//! feasibility.
//!
//! Two evaluators share the same airtime model: [`analytic_evaluate`] is a
//! closed-form surrogate used while training, and [`des`] is a packet-level
//! simulation of constant-bitrate flows served round-robin on one shared
//! medium, used for reported metrics.

mod analytic;
pub mod des;
mod monitor;

pub use analytic::{analytic_evaluate, demand_feasible, link_budget, LinkReport, UeLink};
pub use des::{des_run, DesOptions, DesReport, LinkSim};
pub use monitor::{window_throughput, Delivery, ThroughputMonitor};

use serde::{Deserialize, Serialize};

use crate::error::LinkError;
use crate::geometry::Position3;
use crate::radio::McsEntry;

/// A ground user with a constant-bitrate uplink demand in Mbit/s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UeSpec {
    pub id: u32,
    pub position: Position3,
    pub demand: f64,
}

impl UeSpec {
    pub fn required_mcs(&self, table: &[McsEntry]) -> Result<u8, LinkError> {
        required_mcs(self.demand, table)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MacParams {
    /// Share of the PHY rate available to payload, in (0, 1].
    pub efficiency: f64,
    /// Fixed per-frame overhead in seconds.
    pub overhead: f64,
    /// Payload bytes per packet.
    pub packet_size: u32,
}

impl Default for MacParams {
    fn default() -> Self {
        Self {
            efficiency: 0.7,
            overhead: 0.0,
            packet_size: 1400,
        }
    }
}

impl MacParams {
    pub fn packet_bits(&self) -> f64 {
        f64::from(self.packet_size) * 8.0
    }

    /// Medium time to carry one packet at `phy_rate` Mbit/s.
    pub fn service_time(&self, phy_rate: f64) -> f64 {
        self.packet_bits() / (self.efficiency * phy_rate * 1e6) + self.overhead
    }

    /// Share of medium time a demand of `demand` Mbit/s occupies at `phy_rate`.
    pub fn airtime(&self, demand: f64, phy_rate: f64) -> f64 {
        demand * 1e6 / self.packet_bits() * self.service_time(phy_rate)
    }

    pub fn validate(&self) -> Result<(), (String, String)> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(("efficiency".into(), "must be in (0, 1]".into()));
        }
        if !(self.overhead >= 0.0 && self.overhead.is_finite()) {
            return Err(("overhead".into(), "must be non-negative".into()));
        }
        if self.packet_size == 0 {
            return Err(("packet_size".into(), "must be positive".into()));
        }
        Ok(())
    }
}

/// Smallest MCS index whose PHY rate covers `demand`.
pub fn required_mcs(demand: f64, table: &[McsEntry]) -> Result<u8, LinkError> {
    table
        .iter()
        .find(|e| e.phy_rate >= demand)
        .map(|e| e.index)
        .ok_or(LinkError::DemandUnserviceable {
            demand,
            max_rate: table.last().map_or(0.0, |e| e.phy_rate),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::default_mcs_table;

    #[test]
    fn required_mcs_ladder() {
        let t = default_mcs_table();
        assert_eq!(required_mcs(58.5, &t).unwrap(), 0);
        assert_eq!(required_mcs(117.0, &t).unwrap(), 1);
        assert_eq!(required_mcs(175.5, &t).unwrap(), 2);
        assert_eq!(required_mcs(234.0, &t).unwrap(), 3);
        assert_eq!(required_mcs(600.0, &t).unwrap(), 8);
        assert!(matches!(
            required_mcs(800.0, &t),
            Err(LinkError::DemandUnserviceable { .. })
        ));
    }

    #[test]
    fn airtime_matches_efficiency_rule() {
        let mac = MacParams::default();
        // 4 users at MCS9 with 58.5 Mbit/s each.
        let u: f64 = (0..4).map(|_| mac.airtime(58.5, 780.0)).sum();
        assert!((u - 0.428_571_428_571).abs() < 1e-9);
        let u0: f64 = (0..4).map(|_| mac.airtime(58.5, 58.5)).sum();
        assert!((u0 - 5.714_285_714).abs() < 1e-6);
    }
}
