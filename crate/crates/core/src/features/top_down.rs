use serde::{Deserialize, Serialize};

use crate::error::FeatureError;
use crate::scalar::Real;
use crate::sensors::{BEAM_COUNT, SONAR_COUNT};

use super::{Dimension, FeatureMap, Resolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Speed,
    Direction,
    Distance,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Speed => "speed",
            Quantity::Direction => "direction",
            Quantity::Distance => "distance",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Quantity::Speed => Dimension::GoalSpeed,
            Quantity::Direction => Dimension::GoalDirection,
            Quantity::Distance => Dimension::GoalDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Between,
    Greater,
    Smaller,
}

/// A top-down goal in physical units (m/s, direction code, or m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Goal<T> {
    quantity: Quantity,
    relation: Relation,
    desired: T,
    delta: T,
}

impl<T: Real> Goal<T> {
    pub fn new(quantity: Quantity, relation: Relation, desired: T, delta: T) -> Result<Self, FeatureError> {
        if !desired.is_finite() || !delta.is_finite() {
            return Err(FeatureError::InvalidGoal("goal values must be finite".into()));
        }
        match quantity {
            Quantity::Direction => {
                if relation != Relation::Equal {
                    return Err(FeatureError::InvalidGoal(
                        "direction goals only support EQUAL".into(),
                    ));
                }
                let code = desired.as_f64();
                if ![-1.0, 0.0, 1.0].contains(&code) {
                    return Err(FeatureError::InvalidGoal(format!(
                        "direction goal must be -1, 0 or +1, got {code}"
                    )));
                }
            }
            Quantity::Speed | Quantity::Distance => {
                if desired <= T::zero() {
                    return Err(FeatureError::InvalidGoal(format!(
                        "desired {} must be positive",
                        quantity.name()
                    )));
                }
                if relation == Relation::Between && delta <= T::zero() {
                    return Err(FeatureError::InvalidGoal("BETWEEN needs a positive delta".into()));
                }
            }
        }
        Ok(Self {
            quantity,
            relation,
            desired,
            delta,
        })
    }

    pub fn speed(relation: Relation, desired: T, delta: T) -> Result<Self, FeatureError> {
        Self::new(Quantity::Speed, relation, desired, delta)
    }

    pub fn distance(relation: Relation, desired: T, delta: T) -> Result<Self, FeatureError> {
        Self::new(Quantity::Distance, relation, desired, delta)
    }

    pub fn direction(code: i8) -> Result<Self, FeatureError> {
        Self::new(Quantity::Direction, Relation::Equal, T::lit(code as f64), T::zero())
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn desired(&self) -> T {
        self.desired
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    fn expect(&self, quantity: Quantity) -> Result<(), FeatureError> {
        if self.quantity == quantity {
            Ok(())
        } else {
            Err(FeatureError::GoalMismatch {
                expected: quantity.name(),
                got: self.quantity.name(),
            })
        }
    }
}

/// Piecewise goal response for one raw value, clamped to [0, 1].
///
/// `max` is MAX-SPEED or MAX-DISTANCE; `tolerance` is the relative
/// half-width of the EQUAL band. Ratio branches with a non-positive
/// denominator evaluate to 0.
pub fn goal_value<T: Real>(raw: T, relation: Relation, desired: T, delta: T, max: T, tolerance: T) -> T {
    let ratio = |num: T, den: T| if den > T::zero() { num / den } else { T::zero() };
    let falling = |from: T| T::one() - ratio(raw - from, max - from);
    let v = match relation {
        Relation::Equal => {
            if (raw - desired).abs() <= tolerance * desired.abs() {
                T::one()
            } else {
                ratio(raw, max)
            }
        }
        Relation::Between => {
            let upper = desired + delta;
            if raw < desired {
                ratio(raw, desired)
            } else if raw <= upper {
                T::one()
            } else {
                falling(upper)
            }
        }
        Relation::Greater => {
            if raw > desired {
                T::one()
            } else {
                ratio(raw, desired)
            }
        }
        Relation::Smaller => {
            if raw < desired {
                T::one()
            } else {
                falling(desired)
            }
        }
    };
    v.clamp01()
}

/// Goal-speed map over the raw (pre-contrast) sector speeds.
pub fn goal_speed_map<T: Real>(
    speeds: &[T; SONAR_COUNT],
    goal: &Goal<T>,
    max_speed: T,
    tolerance: T,
) -> Result<FeatureMap<T>, FeatureError> {
    goal.expect(Quantity::Speed)?;
    let values = speeds
        .iter()
        .map(|&v| goal_value(v, goal.relation, goal.desired, goal.delta, max_speed, tolerance))
        .collect();
    Ok(FeatureMap::new(Dimension::GoalSpeed, Resolution::Sectors8, values))
}

/// Goal-direction map: 1 where the sector's direction code matches the goal.
pub fn goal_direction_map<T: Real>(codes: &[i8; SONAR_COUNT], goal: &Goal<T>) -> Result<FeatureMap<T>, FeatureError> {
    goal.expect(Quantity::Direction)?;
    let wanted = goal.desired.as_f64() as i8;
    let values = codes
        .iter()
        .map(|&c| if c == wanted { T::one() } else { T::zero() })
        .collect();
    Ok(FeatureMap::new(Dimension::GoalDirection, Resolution::Sectors8, values))
}

/// Goal-distance map over raw beam distances, normalised by the scanner saturation.
pub fn goal_distance_map<T: Real>(
    distances: &[T; BEAM_COUNT],
    goal: &Goal<T>,
    max_range: T,
    tolerance: T,
) -> Result<FeatureMap<T>, FeatureError> {
    goal.expect(Quantity::Distance)?;
    let values = distances
        .iter()
        .map(|&d| goal_value(d, goal.relation, goal.desired, goal.delta, max_range, tolerance))
        .collect();
    Ok(FeatureMap::new(Dimension::GoalDistance, Resolution::Beams180, values))
}
