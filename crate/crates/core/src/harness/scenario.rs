//! JSON scenario files: world layout, sensors, features, goals and weights.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attention::{ChronometryParams, WeightSet};
use crate::error::ScenarioError;
use crate::features::{Dimension, FeatureParams, Goal, Quantity, Relation};
use crate::memory::DEFAULT_CAPACITY;
use crate::pipeline::{DistanceSources, PipelineConfig, ScheduledGoal};
use crate::scalar::Real;
use crate::sensors::NoiseModel;
use crate::world::{Entity, Leg, Point, Trajectory, World};

pub const SCHEMA_VERSION: u32 = 1;

/// A point in the world frame, or relative to the attentive robot
/// (`bearing_deg` 90 is straight ahead, 0 is its right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PointSpec {
    Cartesian { x: f64, y: f64 },
    Polar { range: f64, bearing_deg: f64 },
}

impl PointSpec {
    pub fn resolve(self) -> (f64, f64) {
        match self {
            PointSpec::Cartesian { x, y } => (x, y),
            PointSpec::Polar { range, bearing_deg } => {
                let a = bearing_deg.to_radians();
                (range * a.cos(), range * a.sin())
            }
        }
    }

    fn to_point<T: Real>(self) -> Point<T> {
        let (x, y) = self.resolve();
        Point::new(T::lit(x), T::lit(y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Circle { center: PointSpec, radius: f64 },
    Wall { from: PointSpec, to: PointSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSpec {
    pub to: PointSpec,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    #[serde(default)]
    pub start_time: f64,
    pub legs: Vec<LegSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntitySpec {
    pub id: String,
    pub shape: ShapeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectorySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldSpec {
    #[serde(default = "default_max_speed")]
    pub max_speed: f64,
    #[serde(default)]
    pub entities: Vec<EntitySpec>,
}

impl Default for WorldSpec {
    fn default() -> Self {
        Self {
            max_speed: default_max_speed(),
            entities: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSpec {
    #[serde(default = "yes")]
    pub noise: bool,
    #[serde(default = "default_sigma")]
    pub relative_sigma: f64,
}

impl Default for SensorSpec {
    fn default() -> Self {
        Self {
            noise: true,
            relative_sigma: default_sigma(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    Range,
    Sonar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSpec {
    /// Bottom-up dimensions to compute. Goal dimensions follow `goals`.
    #[serde(default = "default_active")]
    pub active: Vec<Dimension>,
    #[serde(default = "default_sources")]
    pub distance_sources: Vec<DistanceSource>,
    #[serde(default = "default_dead_band")]
    pub dead_band: f64,
    #[serde(default = "default_smoothing")]
    pub sign_smoothing: usize,
    #[serde(default = "default_equal_tolerance")]
    pub equal_tolerance: f64,
    #[serde(default = "default_capacity")]
    pub window_capacity: usize,
}

impl Default for FeatureSpec {
    fn default() -> Self {
        Self {
            active: default_active(),
            distance_sources: default_sources(),
            dead_band: default_dead_band(),
            sign_smoothing: default_smoothing(),
            equal_tolerance: default_equal_tolerance(),
            window_capacity: default_capacity(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalSpec {
    pub quantity: Quantity,
    pub relation: Relation,
    pub desired: f64,
    #[serde(default)]
    pub delta: f64,
    /// Activation window `[start, end)` in seconds; the whole run when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

/// Optional overrides of the attentional timing and amplitudes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChronometrySpec {
    pub bu_onset: Option<f64>,
    pub bu_enhance: Option<f64>,
    pub max_enhance_factor: Option<f64>,
    pub ior_duration: Option<f64>,
    pub td_onset: Option<f64>,
    pub vigilance_limit: Option<f64>,
    pub td_release: Option<f64>,
    pub enhancement: Option<f64>,
    pub ior_depth: Option<f64>,
    pub lateral_sigma: Option<f64>,
    pub decay_tau: Option<f64>,
    pub adaptation_factor: Option<f64>,
    pub adaptation_recovery: Option<f64>,
    pub td_hold_threshold: Option<f64>,
}

impl ChronometrySpec {
    pub fn params<T: Real>(&self) -> ChronometryParams<T> {
        let d = ChronometryParams::<T>::default();
        let pick = |o: Option<f64>, v: T| o.map_or(v, T::lit);
        ChronometryParams {
            bu_onset: pick(self.bu_onset, d.bu_onset),
            bu_enhance: pick(self.bu_enhance, d.bu_enhance),
            max_enhance_factor: pick(self.max_enhance_factor, d.max_enhance_factor),
            ior_duration: pick(self.ior_duration, d.ior_duration),
            td_onset: pick(self.td_onset, d.td_onset),
            vigilance_limit: pick(self.vigilance_limit, d.vigilance_limit),
            td_release: pick(self.td_release, d.td_release),
            enhancement: pick(self.enhancement, d.enhancement),
            ior_depth: pick(self.ior_depth, d.ior_depth),
            lateral_sigma: pick(self.lateral_sigma, d.lateral_sigma),
            decay_tau: pick(self.decay_tau, d.decay_tau),
            adaptation_factor: pick(self.adaptation_factor, d.adaptation_factor),
            adaptation_recovery: pick(self.adaptation_recovery, d.adaptation_recovery),
            td_hold_threshold: pick(self.td_hold_threshold, d.td_hold_threshold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub world: WorldSpec,
    #[serde(default)]
    pub sensors: SensorSpec,
    #[serde(default)]
    pub features: FeatureSpec,
    #[serde(default)]
    pub goals: Vec<GoalSpec>,
    /// Per-dimension weights; missing dimensions weigh 1.
    #[serde(default)]
    pub weights: BTreeMap<Dimension, f64>,
    #[serde(default)]
    pub chronometry: ChronometrySpec,
    #[serde(default = "default_threshold")]
    pub wta_threshold: f64,
    #[serde(default = "default_gain")]
    pub gain: f64,
}

fn yes() -> bool {
    true
}
fn default_max_speed() -> f64 {
    World::<f64>::DEFAULT_MAX_SPEED
}
fn default_sigma() -> f64 {
    NoiseModel::default().relative_sigma
}
fn default_active() -> Vec<Dimension> {
    vec![Dimension::Motion]
}
fn default_sources() -> Vec<DistanceSource> {
    vec![DistanceSource::Range]
}
fn default_dead_band() -> f64 {
    FeatureParams::<f64>::default().dead_band
}
fn default_smoothing() -> usize {
    FeatureParams::<f64>::default().sign_smoothing
}
fn default_equal_tolerance() -> f64 {
    FeatureParams::<f64>::default().equal_tolerance
}
fn default_capacity() -> usize {
    DEFAULT_CAPACITY
}
fn default_dt() -> f64 {
    World::<f64>::DEFAULT_DT
}
fn default_threshold() -> f64 {
    0.2
}
fn default_gain() -> f64 {
    1.0
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// Number of ticks the run executes.
    pub fn ticks(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut bad = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            bad.push(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if !positive(self.duration) {
            bad.push(format!("duration must be positive, got {}", self.duration));
        }
        if !positive(self.dt) {
            bad.push(format!("dt must be positive, got {}", self.dt));
        } else if positive(self.duration) && self.duration < self.dt {
            bad.push(format!("duration {} is shorter than one step of {}", self.duration, self.dt));
        }
        if !positive(self.world.max_speed) {
            bad.push("world.max_speed must be positive".into());
        }
        self.validate_entities(&mut bad);

        if !(self.sensors.relative_sigma.is_finite() && self.sensors.relative_sigma >= 0.0) {
            bad.push("sensors.relative_sigma must be non-negative".into());
        }

        let f = &self.features;
        for d in &f.active {
            if d.is_top_down() {
                bad.push(format!(
                    "features.active lists goal dimension `{d}`; goal maps are enabled by `goals`"
                ));
            }
        }
        if f.active.contains(&Dimension::Distance) && f.distance_sources.is_empty() {
            bad.push("features.distance_sources is empty but distance is active".into());
        }
        if !(f.dead_band.is_finite() && f.dead_band >= 0.0) {
            bad.push("features.dead_band must be non-negative".into());
        }
        if f.sign_smoothing == 0 {
            bad.push("features.sign_smoothing must be at least 1".into());
        }
        if !(f.equal_tolerance.is_finite() && f.equal_tolerance >= 0.0) {
            bad.push("features.equal_tolerance must be non-negative".into());
        }
        if f.window_capacity < 2 {
            bad.push("features.window_capacity must be at least 2".into());
        }

        self.validate_goals(&mut bad);

        for (d, w) in &self.weights {
            if !(w.is_finite() && *w >= 0.0) {
                bad.push(format!("weight for `{d}` must be finite and non-negative, got {w}"));
            }
        }
        for name in self.chronometry.params::<f64>().violations() {
            bad.push(format!("chronometry.{name} is out of range"));
        }
        if !(self.wta_threshold.is_finite() && self.wta_threshold >= 0.0) {
            bad.push("wta_threshold must be non-negative".into());
        }
        if !(self.gain.is_finite() && self.gain >= 0.0) {
            bad.push("gain must be non-negative".into());
        }

        if bad.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Invalid(bad))
        }
    }

    fn validate_entities(&self, bad: &mut Vec<String>) {
        let mut ids = HashSet::new();
        for e in &self.world.entities {
            if !ids.insert(e.id.as_str()) {
                bad.push(format!("entity id `{}` is used more than once", e.id));
            }
            match &e.shape {
                ShapeSpec::Circle { radius, .. } => {
                    if !positive(*radius) {
                        bad.push(format!("entity `{}`: radius must be positive", e.id));
                    }
                }
                ShapeSpec::Wall { from, to } => {
                    let (a, b) = (from.resolve(), to.resolve());
                    if (a.0 - b.0).hypot(a.1 - b.1) <= 0.0 {
                        bad.push(format!("entity `{}`: wall endpoints coincide", e.id));
                    }
                    if e.trajectory.is_some() {
                        bad.push(format!("entity `{}`: walls cannot move", e.id));
                    }
                }
            }
            if let Some(t) = &e.trajectory {
                if !(t.start_time.is_finite() && t.start_time >= 0.0) {
                    bad.push(format!("entity `{}`: start_time must be non-negative", e.id));
                }
                if t.legs.is_empty() {
                    bad.push(format!("entity `{}`: trajectory has no legs", e.id));
                }
                for (k, leg) in t.legs.iter().enumerate() {
                    if !positive(leg.speed) {
                        bad.push(format!("entity `{}`: leg {k} speed must be positive", e.id));
                    } else if leg.speed > self.world.max_speed {
                        bad.push(format!(
                            "entity `{}`: leg {k} speed {} exceeds max_speed {}",
                            e.id, leg.speed, self.world.max_speed
                        ));
                    }
                }
            }
        }
    }

    fn validate_goals(&self, bad: &mut Vec<String>) {
        let mut spans: Vec<(Quantity, f64, f64)> = Vec::new();
        for (k, g) in self.goals.iter().enumerate() {
            if let Err(e) = Goal::new(g.quantity, g.relation, g.desired, g.delta) {
                bad.push(format!("goal {k}: {e}"));
            }
            let (start, end) = match g.window {
                Some([s, e]) => {
                    if !(s >= 0.0 && s < e) {
                        bad.push(format!("goal {k}: window [{s}, {e}) is empty or starts before 0"));
                    }
                    if e > self.duration {
                        bad.push(format!("goal {k}: window ends at {e}, after the run duration {}", self.duration));
                    }
                    (s, e)
                }
                None => (0.0, f64::INFINITY),
            };
            for &(q, s, e) in &spans {
                if q == g.quantity && start < e && s < end {
                    bad.push(format!("goal {k}: overlaps another {} goal", q.name()));
                }
            }
            spans.push((g.quantity, start, end));
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            relative_sigma: self.sensors.relative_sigma,
            seed: self.seed,
            enabled: self.sensors.noise,
        }
    }

    pub fn build_world<T: Real>(&self) -> World<T> {
        let mut world = World::new(T::lit(self.dt));
        world.max_speed = T::lit(self.world.max_speed);
        for e in &self.world.entities {
            let mut entity = match &e.shape {
                ShapeSpec::Circle { center, radius } => {
                    Entity::circle(e.id.clone(), center.to_point(), T::lit(*radius))
                }
                ShapeSpec::Wall { from, to } => Entity::wall(e.id.clone(), from.to_point(), to.to_point()),
            };
            if let Some(t) = &e.trajectory {
                entity = entity.with_trajectory(Trajectory::Waypoints {
                    start_time: T::lit(t.start_time),
                    legs: t
                        .legs
                        .iter()
                        .map(|l| Leg {
                            to: l.to.to_point(),
                            speed: T::lit(l.speed),
                        })
                        .collect(),
                });
            }
            world.entities.push(entity);
        }
        world
    }

    pub fn weight_set<T: Real>(&self) -> WeightSet<T> {
        self.weights
            .iter()
            .fold(WeightSet::default(), |ws, (&d, &w)| ws.with(d, T::lit(w)))
    }

    pub fn pipeline_config<T: Real>(&self) -> PipelineConfig<T> {
        let f = &self.features;
        let goals = self
            .goals
            .iter()
            .map(|g| {
                let goal = Goal::new(g.quantity, g.relation, T::lit(g.desired), T::lit(g.delta))
                    .expect("validated goal");
                match g.window {
                    Some([s, e]) => ScheduledGoal {
                        goal,
                        start: T::lit(s),
                        end: T::lit(e),
                    },
                    None => ScheduledGoal::always(goal),
                }
            })
            .collect();
        PipelineConfig {
            noise: self.noise(),
            features: FeatureParams {
                max_speed: T::lit(self.world.max_speed),
                dead_band: T::lit(f.dead_band),
                sign_smoothing: f.sign_smoothing,
                equal_tolerance: T::lit(f.equal_tolerance),
                ..FeatureParams::default()
            },
            bottom_up: f.active.clone(),
            distance_sources: DistanceSources {
                range: f.distance_sources.contains(&DistanceSource::Range),
                sonar: f.distance_sources.contains(&DistanceSource::Sonar),
            },
            goals,
            weights: self.weight_set(),
            chronometry: self.chronometry.params(),
            threshold: T::lit(self.wta_threshold),
            gain: T::lit(self.gain),
            window_capacity: f.window_capacity,
        }
    }

    /// A copy with one entity removed.
    pub fn without_entity(&self, id: &str) -> Scenario {
        let mut s = self.clone();
        s.world.entities.retain(|e| e.id != id);
        s
    }
}
