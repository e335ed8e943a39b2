//! Numerical tolerances shared across the crate.
//!
//! The geometry here is exact mathematics evaluated in `f64`, so every
//! "equal", "real" or "tangent" decision goes through one of these
//! thresholds. They can be overridden at runtime (the CLI exposes
//! `--tol NAME=VALUE`).

use crate::error::{Error, Result};

/// Real-axis membership of `tr²` when classifying a map.
pub const EPS_CLASS: f64 = 1e-10;
/// Point and map equality.
pub const EPS_EQ: f64 = 1e-9;
/// Allowed drift of a determinant away from one.
pub const EPS_DET: f64 = 1e-12;
/// Absolute slack on radius sums and differences when testing tangency.
pub const EPS_TAN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub class: f64,
    pub eq: f64,
    pub det: f64,
    pub tan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            class: EPS_CLASS,
            eq: EPS_EQ,
            det: EPS_DET,
            tan: EPS_TAN,
        }
    }
}

impl Tolerances {
    /// Override one tolerance by name (`class`, `eq`, `det` or `tan`).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Input(format!(
                "tolerance {name} must be a positive finite number, got {value}"
            )));
        }
        let slot = match name.trim_start_matches("eps_") {
            "class" => &mut self.class,
            "eq" => &mut self.eq,
            "det" => &mut self.det,
            "tan" => &mut self.tan,
            other => return Err(Error::Input(format!("unknown tolerance `{other}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Parse a `NAME=VALUE` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("expected NAME=VALUE, got `{spec}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad tolerance value in `{spec}`")))?;
        self.set(name.trim(), value)
    }
}
