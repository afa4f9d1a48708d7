use crate::scalar::Real;

use super::{AttentionalState, CombinedMap, SECTORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    BottomUpDominant,
    TopDownDominant,
}

impl Source {
    pub fn tag(self) -> &'static str {
        match self {
            Source::BottomUpDominant => "bottom_up",
            Source::TopDownDominant => "top_down",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaliencyMap<T> {
    pub values: [T; SECTORS],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinnerEvent<T> {
    pub time: T,
    pub sector: usize,
    pub saliency: T,
    pub source: Source,
}

/// `L = gain * max(0, C * (1 + M))`: modulation -1 silences a sector, +1 doubles it.
pub fn saliency<T: Real>(combined: &CombinedMap<T>, state: &AttentionalState<T>, gain: T) -> SaliencyMap<T> {
    let m = state.modulation();
    SaliencyMap {
        values: std::array::from_fn(|s| gain * (combined.values[s] * (T::one() + m[s])).max(T::zero())),
    }
}

/// Winner-takes-all: the arg-max sector if it reaches `threshold`.
/// Ties go to the lowest sector index.
pub fn select_winner<T: Real>(
    map: &SaliencyMap<T>,
    threshold: T,
    time: T,
    source: impl FnOnce(usize) -> Source,
) -> Option<WinnerEvent<T>> {
    let (sector, value) = map
        .values
        .iter()
        .copied()
        .enumerate()
        .fold((0, map.values[0]), |best, (s, v)| if v > best.1 { (s, v) } else { best });
    (value >= threshold).then(|| WinnerEvent {
        time,
        sector,
        saliency: value,
        source: source(sector),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attention::ChronometryParams;
    use proptest::prelude::*;

    fn state_with(modulation: [f64; 8]) -> AttentionalState<f64> {
        AttentionalState::with_modulation(modulation)
    }

    #[test]
    fn neutral_modulation_passes_combined() {
        let c = CombinedMap {
            values: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
        };
        let l = saliency(&c, &AttentionalState::new(&ChronometryParams::default()), 1.0);
        assert_eq!(l.values, c.values);
    }

    #[test]
    fn full_suppression_and_boost() {
        let c = CombinedMap { values: [0.5; 8] };
        let mut m = [0.0; 8];
        m[1] = -1.0;
        m[2] = 0.5;
        let l = saliency(&c, &state_with(m), 1.0);
        assert_eq!(l.values[1], 0.0);
        assert!((l.values[2] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn sub_threshold_has_no_winner() {
        let l = SaliencyMap { values: [0.19; 8] };
        assert_eq!(select_winner(&l, 0.2, 1.0, |_| Source::BottomUpDominant), None);
    }

    #[test]
    fn argmax_and_ties() {
        let l = SaliencyMap {
            values: [0.1, 0.1, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1],
        };
        let w = select_winner(&l, 0.2, 1.5, |_| Source::TopDownDominant).unwrap();
        assert_eq!((w.sector, w.saliency, w.time, w.source), (4, 0.9, 1.5, Source::TopDownDominant));
        let tie = SaliencyMap {
            values: [0.0, 0.0, 0.6, 0.0, 0.0, 0.6, 0.0, 0.0],
        };
        assert_eq!(select_winner(&tie, 0.2, 0.0, |_| Source::BottomUpDominant).unwrap().sector, 2);
    }

    proptest! {
        #[test]
        fn positive_scaling_keeps_winner(vals in proptest::collection::vec(0.0..10.0f64, 8), k in 0.001..1000.0f64) {
            let a = SaliencyMap { values: std::array::from_fn(|s| vals[s]) };
            let b = SaliencyMap { values: a.values.map(|v| v * k) };
            let wa = select_winner(&a, 0.0, 0.0, |_| Source::BottomUpDominant).map(|w| w.sector);
            let wb = select_winner(&b, 0.0, 0.0, |_| Source::BottomUpDominant).map(|w| w.sector);
            prop_assert_eq!(wa, wb);
        }
    }
}
