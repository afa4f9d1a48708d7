//! Feature dimension functions: three bottom-up conspicuity maps computed
//! from the observation window and three top-down goal maps computed from
//! the raw kinematics the bottom-up pass extracts.

mod bottom_up;
mod top_down;

pub use bottom_up::{
    direction_codes, direction_map, distance_map, motion_map, rarity, sector_speeds,
    sonar_distance_map, speed_sign_threshold,
};
pub use top_down::{goal_direction_map, goal_distance_map, goal_speed_map, goal_value, Goal, Quantity, Relation};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::sensors::{BEAM_COUNT, SONAR_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    Sectors8,
    Beams180,
}

impl Resolution {
    pub const fn len(self) -> usize {
        match self {
            Resolution::Sectors8 => SONAR_COUNT,
            Resolution::Beams180 => BEAM_COUNT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Motion,
    Direction,
    Distance,
    GoalSpeed,
    GoalDirection,
    GoalDistance,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Motion,
        Dimension::Direction,
        Dimension::Distance,
        Dimension::GoalSpeed,
        Dimension::GoalDirection,
        Dimension::GoalDistance,
    ];

    pub fn is_top_down(self) -> bool {
        matches!(
            self,
            Dimension::GoalSpeed | Dimension::GoalDirection | Dimension::GoalDistance
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            Dimension::Motion => "motion",
            Dimension::Direction => "direction",
            Dimension::Distance => "distance",
            Dimension::GoalSpeed => "goal_speed",
            Dimension::GoalDirection => "goal_direction",
            Dimension::GoalDistance => "goal_distance",
        }
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A feature map: values in [0, 1] at sector or beam resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap<T> {
    values: Vec<T>,
    resolution: Resolution,
    dimension: Dimension,
}

impl<T: Real> FeatureMap<T> {
    /// Builds a map, clamping every value into [0, 1]. NaN becomes 0.
    pub fn new(dimension: Dimension, resolution: Resolution, values: Vec<T>) -> Self {
        assert_eq!(values.len(), resolution.len(), "map length must match its resolution");
        let values = values
            .into_iter()
            .map(|v| if v.is_nan() { T::zero() } else { v.clamp01() })
            .collect();
        Self {
            values,
            resolution,
            dimension,
        }
    }

    pub fn zeros(dimension: Dimension, resolution: Resolution) -> Self {
        Self {
            values: vec![T::zero(); resolution.len()],
            resolution,
            dimension,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn with_dimension(mut self, dimension: Dimension) -> Self {
        self.dimension = dimension;
        self
    }
}

/// Tunables shared by the feature functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureParams<T> {
    /// Normaliser for speeds (MAX-SPEED of the world), m/s.
    pub max_speed: T,
    /// Range scanner saturation, also the goal-distance normaliser, m.
    pub max_range: T,
    /// Apparent speeds within +/- this band have direction code 0, m/s.
    pub dead_band: T,
    /// Median length (frames) applied to readings before sign extraction.
    pub sign_smoothing: usize,
    /// Relative half-width of the EQUAL goal band.
    pub equal_tolerance: T,
}

impl<T: Real> Default for FeatureParams<T> {
    fn default() -> Self {
        Self {
            max_speed: T::lit(crate::world::World::<f64>::DEFAULT_MAX_SPEED),
            max_range: T::lit(crate::sensors::RANGE_MAX),
            dead_band: T::lit(0.1),
            sign_smoothing: 3,
            equal_tolerance: T::lit(0.02),
        }
    }
}
