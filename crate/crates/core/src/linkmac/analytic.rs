use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::LinkError;
use crate::geometry::{has_los, Position3};
use crate::radio::{path_loss, select_mcs, snr_db};

use super::required_mcs;

/// Per-user link state at one UAV position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UeLink {
    pub los: bool,
    /// dB.
    pub loss: f64,
    /// dB.
    pub snr: f64,
    pub mcs: Option<u8>,
    /// Mbit/s, zero when no MCS is viable.
    pub phy_rate: f64,
    pub offered: f64,
    pub carried: f64,
}

impl UeLink {
    pub fn serviceable(&self) -> bool {
        self.mcs.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub links: Vec<UeLink>,
    /// Mbit/s.
    pub aggregate_throughput: f64,
    /// Seconds. Zero when no user is serviceable.
    pub mean_delay: f64,
    /// Total airtime demanded by serviceable users.
    pub utilization: f64,
    pub feasible: bool,
    pub n_los: usize,
}

impl LinkReport {
    pub fn offered(&self) -> f64 {
        self.links.iter().map(|l| l.offered).sum()
    }
}

/// LoS flag, loss, SNR and selected rate for every user. `carried` is left
/// at zero.
pub fn link_budget(scenario: &ScenarioConfig, uav: &Position3) -> Result<Vec<UeLink>, LinkError> {
    let mode = scenario.propagation_mode();
    let street = scenario.street_params();
    scenario
        .ues
        .iter()
        .map(|ue| {
            let los = has_los(uav, &ue.position, &scenario.buildings);
            let loss = path_loss(uav, &ue.position, los, mode, &scenario.radio, &street)?;
            let snr = snr_db(&scenario.radio, loss);
            let mcs = select_mcs(snr, &scenario.radio.mcs_table);
            Ok(UeLink {
                los,
                loss,
                snr,
                mcs: mcs.map(|m| m.index),
                phy_rate: mcs.map_or(0.0, |m| m.phy_rate),
                offered: ue.demand,
                carried: 0.0,
            })
        })
        .collect()
}

fn feasible_links(scenario: &ScenarioConfig, links: &[UeLink], utilization: f64) -> bool {
    let table = &scenario.radio.mcs_table;
    let every_user_meets_threshold = scenario.ues.iter().zip(links).all(|(ue, link)| {
        link.serviceable()
            && required_mcs(ue.demand, table)
                .map(|idx| link.snr >= table[idx as usize].min_snr)
                .unwrap_or(false)
    });
    every_user_meets_threshold && utilization <= 1.0
}

fn utilization(scenario: &ScenarioConfig, links: &[UeLink]) -> f64 {
    links
        .iter()
        .filter(|l| l.serviceable())
        .map(|l| scenario.mac.airtime(l.offered, l.phy_rate))
        .sum()
}

/// Every user has a viable MCS at or above the one its demand requires, and
/// the summed airtime fits on the medium.
pub fn demand_feasible(scenario: &ScenarioConfig, uav: &Position3) -> bool {
    match link_budget(scenario, uav) {
        Ok(links) => {
            let u = utilization(scenario, &links);
            feasible_links(scenario, &links, u)
        }
        Err(_) => false,
    }
}

/// Closed-form throughput and delay at a fixed UAV position.
///
/// When the airtime `U` exceeds one, every serviceable user is scaled back
/// to `demand / U`. Delay is a single-server heuristic around the
/// demand-weighted service time, with the utilization capped at 0.999.
pub fn analytic_evaluate(scenario: &ScenarioConfig, uav: &Position3) -> Result<LinkReport, LinkError> {
    let mut links = link_budget(scenario, uav)?;
    let u = utilization(scenario, &links);
    let scale = if u <= 1.0 { 1.0 } else { 1.0 / u };

    let mut weighted_service = 0.0;
    let mut served_demand = 0.0;
    for link in links.iter_mut().filter(|l| l.serviceable()) {
        link.carried = link.offered * scale;
        weighted_service += link.offered * scenario.mac.service_time(link.phy_rate);
        served_demand += link.offered;
    }
    let mean_delay = if served_demand > 0.0 {
        (weighted_service / served_demand) / (1.0 - u.min(0.999))
    } else {
        0.0
    };

    Ok(LinkReport {
        aggregate_throughput: links.iter().map(|l| l.carried).sum(),
        mean_delay,
        utilization: u,
        feasible: feasible_links(scenario, &links, u),
        n_los: links.iter().filter(|l| l.los).count(),
        links,
    })
}
