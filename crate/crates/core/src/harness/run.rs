use crate::attention::{Source, WinnerEvent};
use crate::pipeline::{Pipeline, PipelineConfig, TickRecord};
use crate::scalar::Real;
use crate::world::World;

use super::Scenario;

/// Per-tick records of one run, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace<T> {
    pub name: String,
    pub dt: T,
    pub records: Vec<TickRecord<T>>,
}

impl<T: Real> RunTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn winners(&self) -> impl Iterator<Item = &WinnerEvent<T>> {
        self.records.iter().filter_map(|r| r.winner.as_ref())
    }

    /// Winning sectors with consecutive repeats collapsed.
    pub fn winner_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = Vec::new();
        for w in self.winners() {
            if seq.last() != Some(&w.sector) {
                seq.push(w.sector);
            }
        }
        seq
    }

    pub fn first_winner(&self) -> Option<&WinnerEvent<T>> {
        self.winners().next()
    }

    pub fn count_source(&self, source: Source) -> usize {
        self.winners().filter(|w| w.source == source).count()
    }
}

/// Runs a validated scenario to completion.
pub fn run<T: Real>(scenario: &Scenario) -> RunTrace<T> {
    run_pipeline(
        &scenario.name,
        scenario.build_world(),
        scenario.pipeline_config(),
        scenario.ticks(),
    )
}

pub fn run_pipeline<T: Real>(name: &str, world: World<T>, config: PipelineConfig<T>, ticks: usize) -> RunTrace<T> {
    let dt = world.dt();
    let mut pipeline = Pipeline::new(world, config);
    let records = (0..ticks).map(|_| pipeline.tick()).collect();
    RunTrace {
        name: name.to_string(),
        dt,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_world_ten_seconds() {
        let s = Scenario::from_json(r#"{ "schema_version": 1, "name": "empty", "duration": 10.0 }"#).unwrap();
        let trace: RunTrace<f64> = run(&s);
        assert_eq!(trace.len(), 100);
        assert_eq!(trace.winners().count(), 0);
        assert!(trace.records.windows(2).all(|w| w[0].time < w[1].time));
    }

    #[test]
    fn sequence_collapses_repeats() {
        let s = Scenario::from_json(r#"{ "schema_version": 1, "name": "empty", "duration": 0.3 }"#).unwrap();
        let mut trace: RunTrace<f64> = run(&s);
        for (r, sector) in trace.records.iter_mut().zip([2, 2, 5]) {
            r.winner = Some(WinnerEvent {
                time: r.time,
                sector,
                saliency: 1.0,
                source: Source::BottomUpDominant,
            });
        }
        assert_eq!(trace.winner_sequence(), vec![2, 5]);
    }
}
