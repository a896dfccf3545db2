use std::collections::VecDeque;

/// One packet received at the UAV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Delivery {
    pub flow: usize,
    /// Completion time, seconds.
    pub time: f64,
    pub bits: f64,
    /// Seconds from arrival to completion.
    pub delay: f64,
}

/// Bits delivered in `(now - window, now]` divided by `window`, in Mbit/s.
pub fn window_throughput(deliveries: &[Delivery], now: f64, window: f64) -> f64 {
    let bits: f64 = deliveries
        .iter()
        .filter(|d| d.time > now - window && d.time <= now)
        .map(|d| d.bits)
        .sum();
    bits / window / 1e6
}

/// Trailing-window throughput and delay over received packets.
#[derive(Clone, Debug)]
pub struct ThroughputMonitor {
    window: f64,
    recent: VecDeque<Delivery>,
}

impl ThroughputMonitor {
    pub fn new(window: f64) -> Self {
        assert!(window > 0.0, "window must be positive");
        Self {
            window,
            recent: VecDeque::new(),
        }
    }

    pub fn record(&mut self, d: Delivery) {
        self.recent.push_back(d);
    }

    pub fn reset(&mut self) {
        self.recent.clear();
    }

    fn prune(&mut self, now: f64) {
        while self
            .recent
            .front()
            .is_some_and(|d| d.time <= now - self.window)
        {
            self.recent.pop_front();
        }
    }

    /// Mbit/s over the trailing window ending at `now`.
    pub fn throughput(&mut self, now: f64) -> f64 {
        self.prune(now);
        let bits: f64 = self.recent.iter().map(|d| d.bits).sum();
        bits / self.window / 1e6
    }

    /// Mean delay of packets in the trailing window, zero if there are none.
    pub fn mean_delay(&mut self, now: f64) -> f64 {
        self.prune(now);
        if self.recent.is_empty() {
            0.0
        } else {
            self.recent.iter().map(|d| d.delay).sum::<f64>() / self.recent.len() as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pkt(time: f64) -> Delivery {
        Delivery {
            flow: 0,
            time,
            bits: 11_200.0,
            delay: 1e-4,
        }
    }

    #[test]
    fn empty_window_is_zero() {
        assert_eq!(window_throughput(&[], 1.0, 0.1), 0.0);
        let mut m = ThroughputMonitor::new(0.1);
        m.record(pkt(0.05));
        assert_eq!(m.throughput(0.5), 0.0);
        assert_eq!(m.mean_delay(0.5), 0.0);
    }

    #[test]
    fn constant_delivery_rate() {
        // 1000 packets per second of 11200 bits = 11.2 Mbit/s.
        let stream: Vec<Delivery> = (1..=2000).map(|k| pkt((k as f64 - 0.5) * 1e-3)).collect();
        let r = window_throughput(&stream, 2.0, 0.5);
        assert!((r - 11.2).abs() < 1e-9, "{r}");
        let mut m = ThroughputMonitor::new(0.5);
        stream.iter().for_each(|&d| m.record(d));
        assert!((m.throughput(2.0) - 11.2).abs() < 1e-9);
    }
}
