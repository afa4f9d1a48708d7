//! One attentive-robot tick: world, sensors, memory, features, attention.

use crate::attention::{
    attribute_source, combine, project_to_sectors, saliency, select_winner, top_down_drive, AttentionalState,
    ChronometryParams, CombinedMap, Phase, SaliencyMap, WeightSet, WinnerEvent, SECTORS,
};
use crate::features::{
    direction_map, distance_map, goal_direction_map, goal_distance_map, goal_speed_map, motion_map,
    sonar_distance_map, Dimension, FeatureMap, FeatureParams, Goal, Quantity, Resolution,
};
use crate::memory::{ObservationWindow, DEFAULT_CAPACITY};
use crate::scalar::Real;
use crate::sensors::{sample_range, sample_sonar, NoiseModel, NoiseStreams, RangeFrame, SonarFrame, SONAR_MAX_RANGE};
use crate::world::World;

/// A goal that is declared only during `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledGoal<T> {
    pub goal: Goal<T>,
    pub start: T,
    pub end: T,
}

impl<T: Real> ScheduledGoal<T> {
    pub fn always(goal: Goal<T>) -> Self {
        Self {
            goal,
            start: T::zero(),
            end: T::infinity(),
        }
    }

    pub fn is_active(&self, time: T) -> bool {
        self.start <= time && time < self.end
    }
}

/// Which sensors feed the distance dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceSources {
    pub range: bool,
    pub sonar: bool,
}

impl Default for DistanceSources {
    fn default() -> Self {
        Self { range: true, sonar: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig<T> {
    pub noise: NoiseModel,
    pub features: FeatureParams<T>,
    /// Active bottom-up dimensions. Top-down maps follow the goal schedule.
    pub bottom_up: Vec<Dimension>,
    pub distance_sources: DistanceSources,
    pub goals: Vec<ScheduledGoal<T>>,
    pub weights: WeightSet<T>,
    pub chronometry: ChronometryParams<T>,
    pub threshold: T,
    /// Global attentive-state multiplier on the saliency map.
    pub gain: T,
    pub window_capacity: usize,
}

impl<T: Real> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            noise: NoiseModel::default(),
            features: FeatureParams::default(),
            bottom_up: vec![Dimension::Motion],
            distance_sources: DistanceSources::default(),
            goals: Vec::new(),
            weights: WeightSet::default(),
            chronometry: ChronometryParams::default(),
            threshold: T::lit(0.2),
            gain: T::one(),
            window_capacity: DEFAULT_CAPACITY,
        }
    }
}

/// Everything computed during one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord<T> {
    pub time: T,
    pub sonar: SonarFrame<T>,
    pub range: RangeFrame<T>,
    /// Active feature maps, bottom-up first, in dimension order.
    pub features: Vec<FeatureMap<T>>,
    pub combined: CombinedMap<T>,
    pub td_drive: [T; SECTORS],
    pub modulation: [T; SECTORS],
    pub phases: [Phase; SECTORS],
    pub saliency: SaliencyMap<T>,
    pub winner: Option<WinnerEvent<T>>,
}

impl<T: Real> TickRecord<T> {
    pub fn feature(&self, d: Dimension) -> Option<&FeatureMap<T>> {
        self.features.iter().find(|m| m.dimension() == d)
    }
}

#[derive(Debug, Clone)]
pub struct Pipeline<T> {
    config: PipelineConfig<T>,
    world: World<T>,
    memory: ObservationWindow<T>,
    streams: NoiseStreams,
    state: AttentionalState<T>,
    last_winner: Option<WinnerEvent<T>>,
}

impl<T: Real> Pipeline<T> {
    pub fn new(world: World<T>, config: PipelineConfig<T>) -> Self {
        Self {
            memory: ObservationWindow::new(config.window_capacity),
            streams: NoiseStreams::new(config.noise.seed),
            state: AttentionalState::new(&config.chronometry),
            world,
            config,
            last_winner: None,
        }
    }

    pub fn world(&self) -> &World<T> {
        &self.world
    }

    pub fn world_mut(&mut self) -> &mut World<T> {
        &mut self.world
    }

    pub fn config(&self) -> &PipelineConfig<T> {
        &self.config
    }

    pub fn state(&self) -> &AttentionalState<T> {
        &self.state
    }

    pub fn tick(&mut self) -> TickRecord<T> {
        self.world.step();
        let time = self.world.time();
        let mut sonar = sample_sonar(&self.world, &self.config.noise, &mut self.streams.sonar);
        let mut range = sample_range(&self.world, &self.config.noise, &mut self.streams.range);
        sonar.timestamp = time;
        range.timestamp = time;
        self.memory
            .push(sonar.clone(), range.clone())
            .expect("world clock is strictly increasing");

        let features = self.feature_maps(time);
        let weights = &self.config.weights;
        let combined = combine(&features, weights);
        let td_drive = top_down_drive(&features, weights);

        self.state.update(self.last_winner.as_ref(), &td_drive, self.world.dt());
        let l = saliency(&combined, &self.state, self.config.gain);
        let winner = select_winner(&l, self.config.threshold, time, |s| attribute_source(&features, weights, s));
        self.last_winner = winner;

        TickRecord {
            time,
            sonar,
            range,
            features,
            combined,
            td_drive,
            modulation: *self.state.modulation(),
            phases: self.state.phases(),
            saliency: l,
            winner,
        }
    }

    fn feature_maps(&self, time: T) -> Vec<FeatureMap<T>> {
        let p = &self.config.features;
        let (motion, speeds) = motion_map(&self.memory, p.max_speed);
        let (direction, codes) = direction_map(&self.memory, p);
        let range = self.memory.latest_range().expect("frame just pushed");
        let (beams, raw_distances) = distance_map(range, p.max_range);

        let mut maps = Vec::new();
        for d in Dimension::ALL.into_iter().filter(|d| self.config.bottom_up.contains(d)) {
            match d {
                Dimension::Motion => maps.push(motion.clone()),
                Dimension::Direction => maps.push(direction.clone()),
                Dimension::Distance => maps.push(self.distance_feature(&beams)),
                _ => {}
            }
        }
        let warm = self.memory.len() >= 2;
        for g in self.config.goals.iter().filter(|g| g.is_active(time)) {
            let goal = &g.goal;
            let map = match goal.quantity() {
                // speed and direction need two frames; the cold-start map is empty
                Quantity::Speed if !warm => Ok(FeatureMap::zeros(Dimension::GoalSpeed, Resolution::Sectors8)),
                Quantity::Direction if !warm => Ok(FeatureMap::zeros(Dimension::GoalDirection, Resolution::Sectors8)),
                Quantity::Speed => goal_speed_map(&speeds, goal, p.max_speed, p.equal_tolerance),
                Quantity::Direction => goal_direction_map(&codes, goal),
                Quantity::Distance => goal_distance_map(&raw_distances, goal, p.max_range, p.equal_tolerance),
            }
            .expect("goal quantity matches its map");
            maps.push(map);
        }
        maps
    }

    fn distance_feature(&self, beams: &FeatureMap<T>) -> FeatureMap<T> {
        let src = self.config.distance_sources;
        let sonar = || {
            let frame = self.memory.latest_sonar().expect("frame just pushed");
            sonar_distance_map(frame, T::lit(SONAR_MAX_RANGE))
        };
        match (src.range, src.sonar) {
            (false, true) => sonar(),
            (true, true) => {
                // both sensors feed one dimension: average at sector resolution
                let a = project_to_sectors(beams);
                let b = sonar();
                let values = (0..SECTORS).map(|s| (a[s] + b.values()[s]) / T::lit(2.0)).collect();
                FeatureMap::new(Dimension::Distance, Resolution::Sectors8, values)
            }
            _ => beams.clone(),
        }
    }
}
