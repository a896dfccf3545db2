//! Slotted discrete-event model of the shared medium.
//!
//! Every user emits fixed-size packets at a constant bitrate starting from a
//! seed-derived phase. A single server visits backlogged queues round-robin
//! and holds the medium for `service_time(phy_rate)` per packet. Arrivals are
//! deterministic, so a queue is fully described by its phase, its interval
//! and the number of packets already served; nothing is stored per packet.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::LinkError;
use crate::geometry::Position3;

use super::monitor::Delivery;
use super::{link_budget, MacParams};

#[derive(Clone, Debug)]
struct Flow {
    phase: f64,
    interval: f64,
    served: u64,
    /// None when no MCS is viable; the queue then never drains.
    service: Option<f64>,
    delivered: u64,
    delay_sum: f64,
}

impl Flow {
    fn head_arrival(&self) -> f64 {
        self.phase + self.served as f64 * self.interval
    }
}

#[derive(Clone, Copy, Debug)]
struct InService {
    flow: usize,
    arrival: f64,
    completion: f64,
}

/// Incrementally advanced simulation of one UAV cell.
#[derive(Clone, Debug)]
pub struct LinkSim {
    flows: Vec<Flow>,
    packet_bits: f64,
    now: f64,
    next_turn: usize,
    current: Option<InService>,
}

impl LinkSim {
    /// `demands` in Mbit/s; phases drawn uniformly in `[0, interval)` from `seed`.
    pub fn new(demands: &[f64], mac: &MacParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let packet_bits = mac.packet_bits();
        let flows = demands
            .iter()
            .map(|&demand| {
                let interval = packet_bits / (demand * 1e6);
                Flow {
                    phase: rng.random::<f64>() * interval,
                    interval,
                    served: 0,
                    service: None,
                    delivered: 0,
                    delay_sum: 0.0,
                }
            })
            .collect();
        Self {
            flows,
            packet_bits,
            now: 0.0,
            next_turn: 0,
            current: None,
        }
    }

    /// Sets per-user PHY rates (Mbit/s); `None` marks a user with no viable
    /// MCS. A packet already on the air keeps its completion time.
    pub fn set_rates(&mut self, rates: &[Option<f64>], mac: &MacParams) {
        for (flow, rate) in self.flows.iter_mut().zip(rates) {
            flow.service = rate.map(|r| mac.service_time(r));
        }
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn num_flows(&self) -> usize {
        self.flows.len()
    }

    pub fn delivered_packets(&self, flow: usize) -> u64 {
        self.flows[flow].delivered
    }

    pub fn delay_sum(&self, flow: usize) -> f64 {
        self.flows[flow].delay_sum
    }

    pub fn packet_bits(&self) -> f64 {
        self.packet_bits
    }

    fn pick_next(&self) -> Option<usize> {
        let n = self.flows.len();
        (0..n).map(|k| (self.next_turn + k) % n).find(|&u| {
            let f = &self.flows[u];
            f.service.is_some() && f.head_arrival() <= self.now
        })
    }

    fn next_arrival(&self) -> Option<f64> {
        self.flows
            .iter()
            .filter(|f| f.service.is_some())
            .map(Flow::head_arrival)
            .min_by(f64::total_cmp)
    }

    /// Runs the medium up to time `until`, reporting every packet that
    /// completes in `(now, until]`.
    pub fn advance(&mut self, until: f64, mut on_delivery: impl FnMut(Delivery)) {
        loop {
            if let Some(pkt) = self.current {
                if pkt.completion > until {
                    break;
                }
                self.current = None;
                self.now = pkt.completion;
                let delay = pkt.completion - pkt.arrival;
                let flow = &mut self.flows[pkt.flow];
                flow.delivered += 1;
                flow.delay_sum += delay;
                on_delivery(Delivery {
                    flow: pkt.flow,
                    time: pkt.completion,
                    bits: self.packet_bits,
                    delay,
                });
            }
            match self.pick_next() {
                Some(u) => {
                    let flow = &mut self.flows[u];
                    let arrival = flow.head_arrival();
                    let service = flow.service.expect("picked flows are serviceable");
                    flow.served += 1;
                    self.current = Some(InService {
                        flow: u,
                        arrival,
                        completion: self.now + service,
                    });
                    self.next_turn = (u + 1) % self.flows.len();
                }
                None => match self.next_arrival() {
                    Some(t) if t <= until => self.now = t,
                    _ => break,
                },
            }
        }
        self.now = self.now.max(until);
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DesOptions {
    /// Keep every packet delay in [`DesReport::delays`].
    pub record_delays: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesReport {
    /// Mbit/s per user.
    pub carried: Vec<f64>,
    /// Mbit/s.
    pub aggregate_throughput: f64,
    /// Mean over delivered packets, seconds; zero if nothing was delivered.
    pub mean_delay: f64,
    pub delivered_packets: u64,
    /// Per-packet delays in delivery order, when recorded.
    pub delays: Vec<f64>,
}

/// Simulates `duration` seconds with the UAV fixed at `uav`.
pub fn des_run(
    scenario: &ScenarioConfig,
    uav: &Position3,
    duration: f64,
    seed: u64,
    options: DesOptions,
) -> Result<DesReport, LinkError> {
    let links = link_budget(scenario, uav)?;
    let demands: Vec<f64> = scenario.ues.iter().map(|u| u.demand).collect();
    let rates: Vec<Option<f64>> = links
        .iter()
        .map(|l| l.serviceable().then_some(l.phy_rate))
        .collect();
    let mut sim = LinkSim::new(&demands, &scenario.mac, seed);
    sim.set_rates(&rates, &scenario.mac);

    let mut delays = Vec::new();
    if options.record_delays {
        sim.advance(duration, |d| delays.push(d.delay));
    } else {
        sim.advance(duration, |_| {});
    }
    Ok(summarize(&sim, duration, delays))
}

fn summarize(sim: &LinkSim, duration: f64, delays: Vec<f64>) -> DesReport {
    let carried: Vec<f64> = (0..sim.num_flows())
        .map(|u| sim.delivered_packets(u) as f64 * sim.packet_bits() / duration / 1e6)
        .collect();
    let delivered: u64 = (0..sim.num_flows()).map(|u| sim.delivered_packets(u)).sum();
    let delay_sum: f64 = (0..sim.num_flows()).map(|u| sim.delay_sum(u)).sum();
    DesReport {
        aggregate_throughput: carried.iter().sum(),
        carried,
        mean_delay: if delivered > 0 {
            delay_sum / delivered as f64
        } else {
            0.0
        },
        delivered_packets: delivered,
        delays,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mac() -> MacParams {
        MacParams::default()
    }

    #[test]
    fn unloaded_single_flow() {
        let m = mac();
        let mut sim = LinkSim::new(&[58.5], &m, 3);
        sim.set_rates(&[Some(780.0)], &m);
        let mut delays = Vec::new();
        sim.advance(1.0, |d| delays.push(d.delay));
        let service = m.service_time(780.0);
        assert!(delays.iter().all(|&d| (d - service).abs() < 1e-12));
        let carried = sim.delivered_packets(0) as f64 * m.packet_bits() / 1e6;
        assert!((carried - 58.5).abs() <= m.packet_bits() / 1e6 + 1e-9);
    }

    #[test]
    fn saturated_round_robin_is_fair() {
        let m = mac();
        let mut sim = LinkSim::new(&[300.0, 300.0], &m, 11);
        sim.set_rates(&[Some(351.0), Some(351.0)], &m);
        sim.advance(2.0, |_| {});
        let a = sim.delivered_packets(0) as f64;
        let b = sim.delivered_packets(1) as f64;
        assert!((a - b).abs() / a.max(b) < 0.01, "{a} vs {b}");
        // Capacity bound: eta * phy per user share.
        let total_mbps = (a + b) * m.packet_bits() / 2.0 / 1e6;
        assert!(total_mbps <= m.efficiency * 351.0 + 1e-6);
    }

    #[test]
    fn unserviceable_flow_never_delivers() {
        let m = mac();
        let mut sim = LinkSim::new(&[10.0, 10.0], &m, 5);
        sim.set_rates(&[Some(117.0), None], &m);
        sim.advance(1.0, |_| {});
        assert!(sim.delivered_packets(0) > 0);
        assert_eq!(sim.delivered_packets(1), 0);
    }

    #[test]
    fn stepping_matches_one_shot() {
        let m = mac();
        let rates = [Some(234.0), Some(468.0), Some(117.0)];
        let mut whole = LinkSim::new(&[40.0, 50.0, 30.0], &m, 9);
        whole.set_rates(&rates, &m);
        let mut a = Vec::new();
        whole.advance(1.0, |d| a.push(d));
        let mut stepped = LinkSim::new(&[40.0, 50.0, 30.0], &m, 9);
        stepped.set_rates(&rates, &m);
        let mut b = Vec::new();
        for k in 1..=10 {
            stepped.advance(k as f64 * 0.1, |d| b.push(d));
        }
        assert_eq!(a, b);
    }
}
