//! Run parameters shared by the pipeline and the exporters.

use serde_json::{json, Value};

use crate::robot::{MotionLimits, NoiseConfig};
use crate::world::DEFAULT_SENSOR_DISTANCE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid run configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Spacing of plan lines along edges and arcs (meters).
    pub alpha: f64,
    /// Sensor trigger distance (meters).
    pub sensor_distance: f64,
    pub limits: MotionLimits,
    pub seed: u64,
    pub noise: NoiseConfig,
    pub max_ticks: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            sensor_distance: DEFAULT_SENSOR_DISTANCE,
            limits: MotionLimits::default(),
            seed: 0,
            noise: NoiseConfig::off(),
            max_ticks: 20_000_000,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("alpha", self.alpha),
            ("sensor distance", self.sensor_distance),
            ("step", self.limits.step_max),
            ("turn", self.limits.turn_max),
            ("contact margin", self.limits.contact_margin),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError(format!("{name} must be positive, got {v}")));
            }
        }
        let n = self.noise;
        for (name, v) in [("sigma_dist", n.sigma_dist), ("sigma_head", n.sigma_head), ("sigma_gyro", n.sigma_gyro)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.max_ticks == 0 {
            return Err(ConfigError("max ticks must be positive".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let noise = if self.noise.is_off() {
            Value::String("off".into())
        } else {
            json!({
                "sigma_dist": self.noise.sigma_dist,
                "sigma_head": self.noise.sigma_head,
                "sigma_gyro": self.noise.sigma_gyro,
            })
        };
        json!({
            "alpha": self.alpha,
            "sensor_distance": self.sensor_distance,
            "step_max": self.limits.step_max,
            "turn_max": self.limits.turn_max,
            "seed": self.seed,
            "noise": noise,
            "max_ticks": self.max_ticks,
        })
    }
}
