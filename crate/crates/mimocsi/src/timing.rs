use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mimocsi_core::codec::Clock;

/// Seconds since construction, from the monotonic system clock.
#[derive(Debug, Clone, Copy)]
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        MonotonicClock { origin: Instant::now() }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Accumulates wall time per section label.
#[derive(Debug, Clone, Default)]
pub struct Stopwatch {
    sections: BTreeMap<String, Duration>,
}

impl Stopwatch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `f` and adds its duration to `label`.
    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.record(label, start.elapsed());
        out
    }

    pub fn record(&mut self, label: &str, d: Duration) {
        *self.sections.entry(label.to_owned()).or_default() += d;
    }

    pub fn get(&self, label: &str) -> Duration {
        self.sections.get(label).copied().unwrap_or_default()
    }

    pub fn seconds(&self, label: &str) -> f64 {
        self.get(label).as_secs_f64()
    }

    pub fn sections(&self) -> impl Iterator<Item = (&str, Duration)> {
        self.sections.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Each labelled duration divided by the largest one.
    pub fn normalized(&self) -> BTreeMap<String, f64> {
        let secs: Vec<f64> = self.sections.values().map(Duration::as_secs_f64).collect();
        let norm = mimocsi_core::metrics::normalize_durations(&secs);
        self.sections.keys().cloned().zip(norm).collect()
    }
}
