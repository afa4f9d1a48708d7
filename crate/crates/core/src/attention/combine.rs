use log::warn;

use crate::features::{Dimension, FeatureMap, Resolution};
use crate::scalar::Real;
use crate::sensors::beam_sector;

use super::{Source, SECTORS};

/// Non-negative weight per feature dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSet<T> {
    weights: [T; 6],
}

impl<T: Real> Default for WeightSet<T> {
    fn default() -> Self {
        Self {
            weights: [T::one(); 6],
        }
    }
}

fn slot(d: Dimension) -> usize {
    Dimension::ALL.iter().position(|&x| x == d).expect("known dimension")
}

impl<T: Real> WeightSet<T> {
    pub fn zeros() -> Self {
        Self {
            weights: [T::zero(); 6],
        }
    }

    /// Panics on a negative or non-finite weight.
    pub fn with(mut self, d: Dimension, w: T) -> Self {
        self.set(d, w);
        self
    }

    pub fn set(&mut self, d: Dimension, w: T) {
        assert!(w.is_finite() && w >= T::zero(), "weights must be finite and non-negative");
        self.weights[slot(d)] = w;
    }

    pub fn get(&self, d: Dimension) -> T {
        self.weights[slot(d)]
    }
}

/// Combined feature map over the 8 sectors, values in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedMap<T> {
    pub values: [T; SECTORS],
}

impl<T: Real> CombinedMap<T> {
    pub fn zeros() -> Self {
        Self {
            values: [T::zero(); SECTORS],
        }
    }
}

/// Brings a map to sector resolution. Beam maps are max-pooled over the beams
/// registered to each sector so that narrow pop-outs survive.
pub fn project_to_sectors<T: Real>(map: &FeatureMap<T>) -> [T; SECTORS] {
    match map.resolution() {
        Resolution::Sectors8 => std::array::from_fn(|s| map.values()[s]),
        Resolution::Beams180 => {
            let mut out = [T::zero(); SECTORS];
            for (i, &v) in map.values().iter().enumerate() {
                let s = beam_sector(i);
                out[s] = out[s].max(v);
            }
            out
        }
    }
}

/// Weight-normalised mean of the projected maps.
pub fn combine<T: Real>(maps: &[FeatureMap<T>], weights: &WeightSet<T>) -> CombinedMap<T> {
    if maps.is_empty() {
        return CombinedMap::zeros();
    }
    let total = maps.iter().fold(T::zero(), |acc, m| acc + weights.get(m.dimension()));
    if total <= T::zero() {
        warn!("all feature weights are zero; combined map is empty");
        return CombinedMap::zeros();
    }
    let mut values = [T::zero(); SECTORS];
    for m in maps {
        let w = weights.get(m.dimension());
        if w == T::zero() {
            continue;
        }
        for (acc, v) in values.iter_mut().zip(project_to_sectors(m)) {
            *acc = *acc + w * v;
        }
    }
    CombinedMap {
        values: values.map(|v| (v / total).clamp01()),
    }
}

fn weighted_sum<T: Real>(maps: &[FeatureMap<T>], weights: &WeightSet<T>, sector: usize, top_down: bool) -> T {
    maps.iter()
        .filter(|m| m.dimension().is_top_down() == top_down)
        .fold(T::zero(), |acc, m| {
            acc + weights.get(m.dimension()) * project_to_sectors(m)[sector]
        })
}

/// Top-down iff the weighted goal evidence at `sector` strictly exceeds the
/// weighted bottom-up evidence there.
pub fn attribute_source<T: Real>(maps: &[FeatureMap<T>], weights: &WeightSet<T>, sector: usize) -> Source {
    if weighted_sum(maps, weights, sector, true) > weighted_sum(maps, weights, sector, false) {
        Source::TopDownDominant
    } else {
        Source::BottomUpDominant
    }
}

/// Weighted mean of the goal maps per sector; zero when no goal map is active.
pub fn top_down_drive<T: Real>(maps: &[FeatureMap<T>], weights: &WeightSet<T>) -> [T; SECTORS] {
    let goals: Vec<&FeatureMap<T>> = maps.iter().filter(|m| m.dimension().is_top_down()).collect();
    let total = goals.iter().fold(T::zero(), |acc, m| acc + weights.get(m.dimension()));
    if total <= T::zero() {
        return [T::zero(); SECTORS];
    }
    std::array::from_fn(|s| {
        goals
            .iter()
            .fold(T::zero(), |acc, m| acc + weights.get(m.dimension()) * project_to_sectors(m)[s])
            / total
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sectors(d: Dimension, v: [f64; 8]) -> FeatureMap<f64> {
        FeatureMap::new(d, Resolution::Sectors8, v.to_vec())
    }

    fn beams(d: Dimension, f: impl Fn(usize) -> f64) -> FeatureMap<f64> {
        FeatureMap::new(d, Resolution::Beams180, (0..180).map(f).collect())
    }

    #[test]
    fn constant_beam_map_projects_to_constant() {
        let p = project_to_sectors(&beams(Dimension::Distance, |_| 0.3));
        assert!(p.iter().all(|&v| v == 0.3));
    }

    #[test]
    fn beam_spikes_land_in_registered_sector() {
        let p = project_to_sectors(&beams(Dimension::Distance, |i| if i == 90 { 0.8 } else { 0.0 }));
        assert_eq!(p, [0.0, 0.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0]);
        let p = project_to_sectors(&beams(Dimension::Distance, |i| if i == 44 { 0.5 } else { 0.0 }));
        assert_eq!(p[1], 0.5);
        assert_eq!(p.iter().filter(|&&v| v > 0.0).count(), 1);
    }

    #[test]
    fn single_map_passes_through() {
        let m = sectors(Dimension::Motion, [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]);
        let c = combine(&[m.clone()], &WeightSet::default());
        assert_eq!(&c.values[..], m.values());
    }

    #[test]
    fn weighted_mean_of_two_maps() {
        let a = sectors(Dimension::Motion, [0.4; 8]);
        let b = sectors(Dimension::GoalSpeed, [0.8; 8]);
        let w = WeightSet::zeros()
            .with(Dimension::Motion, 0.5)
            .with(Dimension::GoalSpeed, 0.5);
        let c = combine(&[a.clone(), b.clone()], &w);
        assert!(c.values.iter().all(|&v| (v - 0.6).abs() < 1e-12));
        let doubled = WeightSet::zeros()
            .with(Dimension::Motion, 1.0)
            .with(Dimension::GoalSpeed, 1.0);
        assert_eq!(combine(&[a, b], &doubled), c);
    }

    #[test]
    fn empty_or_unweighted_is_zero() {
        assert_eq!(combine::<f64>(&[], &WeightSet::default()), CombinedMap::zeros());
        let m = sectors(Dimension::Motion, [0.9; 8]);
        assert_eq!(combine(&[m], &WeightSet::zeros()), CombinedMap::zeros());
    }

    #[test]
    fn source_attribution() {
        let bu = sectors(Dimension::Motion, [0.3; 8]);
        let mut g = [0.0; 8];
        g[2] = 1.0;
        let td = sectors(Dimension::GoalSpeed, g);
        let w = WeightSet::default();
        assert_eq!(attribute_source(&[bu.clone()], &w, 2), Source::BottomUpDominant);
        assert_eq!(attribute_source(&[bu.clone(), td.clone()], &w, 2), Source::TopDownDominant);
        assert_eq!(attribute_source(&[bu.clone(), td.clone()], &w, 3), Source::BottomUpDominant);
        let tie = sectors(Dimension::GoalSpeed, [0.3; 8]);
        assert_eq!(attribute_source(&[bu, tie], &w, 5), Source::BottomUpDominant);
    }

    #[test]
    fn drive_is_goal_only() {
        let bu = sectors(Dimension::Motion, [0.9; 8]);
        assert_eq!(top_down_drive(&[bu.clone()], &WeightSet::default()), [0.0; 8]);
        let td = sectors(Dimension::GoalSpeed, [0.5; 8]);
        assert_eq!(top_down_drive(&[bu, td], &WeightSet::default()), [0.5; 8]);
    }

    proptest! {
        #[test]
        fn aligned_maps_reinforce(bu in 0.0..1.0f64, td in 0.0..1.0f64, w in 0.01..5.0f64) {
            let mut a = [0.0; 8];
            a[3] = bu;
            let mut b = [0.0; 8];
            b[3] = td;
            let weights = WeightSet::zeros().with(Dimension::Motion, w).with(Dimension::GoalSpeed, w);
            let c = combine(&[sectors(Dimension::Motion, a), sectors(Dimension::GoalSpeed, b)], &weights);
            prop_assert!(c.values[3] + 1e-15 >= w * bu / (2.0 * w));
            prop_assert!(c.values[3] + 1e-15 >= w * td / (2.0 * w));
        }

        #[test]
        fn combined_stays_in_unit_interval(
            vals in proptest::collection::vec(proptest::collection::vec(0.0..1.0f64, 8), 1..6),
            ws in proptest::collection::vec(0.0..10.0f64, 6),
        ) {
            let maps: Vec<FeatureMap<f64>> = vals
                .into_iter()
                .enumerate()
                .map(|(i, v)| FeatureMap::new(Dimension::ALL[i], Resolution::Sectors8, v))
                .collect();
            let mut weights = WeightSet::zeros();
            for (d, w) in Dimension::ALL.iter().zip(ws) {
                weights.set(*d, w);
            }
            let c = combine(&maps, &weights);
            prop_assert!(c.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
