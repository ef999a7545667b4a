use super::observe::Observation;

/// Recorded observations of one run, in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub n: usize,
    /// Step size actually used.
    pub dt: f64,
    pub rows: Vec<Observation>,
}

impl TrajectoryRecord {
    pub fn new(n: usize, dt: f64) -> Self {
        Self {
            n,
            dt,
            rows: Vec::new(),
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.t)
    }

    pub fn diff_energy_g(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(Observation::diff_energy_g)
    }

    /// Rows whose time lies in the final `fraction` of the recorded span.
    pub fn tail(&self, fraction: f64) -> &[Observation] {
        let (Some(first), Some(last)) = (self.rows.first(), self.rows.last()) else {
            return &[];
        };
        let cut = last.t - fraction.clamp(0.0, 1.0) * (last.t - first.t);
        let start = self.rows.partition_point(|r| r.t < cut);
        &self.rows[start..]
    }

    /// Largest `Σ diff_energy_G` over the tail window.
    pub fn tail_diff_energy_g(&self, fraction: f64) -> f64 {
        self.tail(fraction)
            .iter()
            .map(Observation::diff_energy_g)
            .fold(0.0, f64::max)
    }
}
