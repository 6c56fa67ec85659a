use serde::{Deserialize, Serialize};

/// Whether a check bounds its residual from above or from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Pass iff the worst (largest) value is at most the threshold.
    Ceiling,
    /// Pass iff the worst (smallest) value is at least the threshold.
    Floor,
}

impl Bound {
    /// The identity for [`Bound::combine`].
    pub fn start(self) -> f64 {
        match self {
            Self::Ceiling => f64::NEG_INFINITY,
            Self::Floor => f64::INFINITY,
        }
    }

    /// The worse of two values; NaN always wins so it cannot hide.
    pub fn combine(self, a: f64, b: f64) -> f64 {
        if a.is_nan() || b.is_nan() {
            return f64::NAN;
        }
        match self {
            Self::Ceiling => a.max(b),
            Self::Floor => a.min(b),
        }
    }

    pub fn passes(self, worst: f64, threshold: f64) -> bool {
        match self {
            Self::Ceiling => worst <= threshold,
            Self::Floor => worst >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// `null` when the value is not finite.
    pub worst_residual: Option<f64>,
    pub threshold: f64,
}

impl Check {
    pub fn new(name: &str, bound: Bound, worst: f64, threshold: f64) -> Self {
        Self {
            name: name.to_owned(),
            pass: bound.passes(worst, threshold),
            worst_residual: worst.is_finite().then_some(worst),
            threshold,
        }
    }

    pub fn at_most(name: &str, worst: f64, threshold: f64) -> Self {
        Self::new(name, Bound::Ceiling, worst, threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
