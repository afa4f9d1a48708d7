//! Sensorial memory: a short time window of sonar and range observations.

use std::collections::VecDeque;

use crate::error::MemoryError;
use crate::scalar::Real;
use crate::sensors::{RangeFrame, SonarFrame};

pub const DEFAULT_CAPACITY: usize = 20;

/// Two newest frames of one sensor and the time between them.
#[derive(Debug)]
pub struct FramePair<'a, F, T> {
    pub prev: &'a F,
    pub curr: &'a F,
    pub dt: T,
}

#[derive(Debug)]
pub struct LatestPair<'a, T> {
    pub sonar: FramePair<'a, SonarFrame<T>, T>,
    pub range: FramePair<'a, RangeFrame<T>, T>,
}

/// Ring buffers of sonar (O1) and range (O2) frames sharing one clock.
#[derive(Debug, Clone)]
pub struct ObservationWindow<T> {
    capacity: usize,
    sonar: VecDeque<SonarFrame<T>>,
    range: VecDeque<RangeFrame<T>>,
}

impl<T: Real> Default for ObservationWindow<T> {
    fn default() -> Self {
        Self::new(DEFAULT_CAPACITY)
    }
}

impl<T: Real> ObservationWindow<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 2, "window must hold at least two frames");
        Self {
            capacity,
            sonar: VecDeque::with_capacity(capacity),
            range: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.sonar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sonar.is_empty()
    }

    pub fn push(&mut self, sonar: SonarFrame<T>, range: RangeFrame<T>) -> Result<(), MemoryError> {
        if sonar.timestamp != range.timestamp {
            return Err(MemoryError::MismatchedTimestamps {
                sonar: sonar.timestamp.as_f64(),
                range: range.timestamp.as_f64(),
            });
        }
        if let Some(newest) = self.sonar.back() {
            if sonar.timestamp <= newest.timestamp {
                return Err(MemoryError::OutOfOrder {
                    got: sonar.timestamp.as_f64(),
                    newest: newest.timestamp.as_f64(),
                });
            }
        }
        if self.sonar.len() == self.capacity {
            self.sonar.pop_front();
            self.range.pop_front();
        }
        self.sonar.push_back(sonar);
        self.range.push_back(range);
        Ok(())
    }

    /// Oldest first.
    pub fn sonar_frames(&self) -> impl DoubleEndedIterator<Item = &SonarFrame<T>> + ExactSizeIterator {
        self.sonar.iter()
    }

    /// Oldest first.
    pub fn range_frames(&self) -> impl DoubleEndedIterator<Item = &RangeFrame<T>> + ExactSizeIterator {
        self.range.iter()
    }

    pub fn latest_sonar(&self) -> Option<&SonarFrame<T>> {
        self.sonar.back()
    }

    pub fn latest_range(&self) -> Option<&RangeFrame<T>> {
        self.range.back()
    }

    pub fn latest_pair(&self) -> Result<LatestPair<'_, T>, MemoryError> {
        let n = self.sonar.len();
        if n < 2 {
            return Err(MemoryError::InsufficientHistory { have: n, need: 2 });
        }
        let (sp, sc) = (&self.sonar[n - 2], &self.sonar[n - 1]);
        let (rp, rc) = (&self.range[n - 2], &self.range[n - 1]);
        Ok(LatestPair {
            sonar: FramePair {
                prev: sp,
                curr: sc,
                dt: sc.timestamp - sp.timestamp,
            },
            range: FramePair {
                prev: rp,
                curr: rc,
                dt: rc.timestamp - rp.timestamp,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensors::{BEAM_COUNT, SONAR_COUNT};
    use proptest::prelude::*;

    fn frames(t: f64, v: f64) -> (SonarFrame<f64>, RangeFrame<f64>) {
        (
            SonarFrame {
                readings: [v; SONAR_COUNT],
                timestamp: t,
            },
            RangeFrame {
                readings: [v; BEAM_COUNT],
                timestamp: t,
            },
        )
    }

    #[test]
    fn push_into_empty() {
        let mut w = ObservationWindow::new(10);
        let (s, r) = frames(0.1, 1.0);
        w.push(s, r).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn ring_evicts_oldest() {
        let mut w = ObservationWindow::new(10);
        for k in 1..=11 {
            let (s, r) = frames(k as f64 * 0.1, k as f64);
            w.push(s, r).unwrap();
        }
        assert_eq!(w.len(), 10);
        assert_eq!(w.sonar_frames().next().unwrap().readings[0], 2.0);
        assert_eq!(w.range_frames().next().unwrap().readings[0], 2.0);
    }

    #[test]
    fn rejects_stale_and_mismatched() {
        let mut w = ObservationWindow::new(4);
        let (s, r) = frames(0.2, 1.0);
        w.push(s, r).unwrap();
        let (s, r) = frames(0.2, 1.0);
        assert!(matches!(w.push(s, r), Err(MemoryError::OutOfOrder { .. })));
        let (s, r) = frames(0.1, 1.0);
        assert!(matches!(w.push(s, r), Err(MemoryError::OutOfOrder { .. })));
        let (s, _) = frames(0.3, 1.0);
        let (_, r) = frames(0.4, 1.0);
        assert!(matches!(w.push(s, r), Err(MemoryError::MismatchedTimestamps { .. })));
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn latest_pair_dt() {
        let mut w = ObservationWindow::new(4);
        let (s, r) = frames(0.1, 1.0);
        w.push(s, r).unwrap();
        assert!(matches!(
            w.latest_pair(),
            Err(MemoryError::InsufficientHistory { have: 1, need: 2 })
        ));
        let (s, r) = frames(0.2, 2.0);
        w.push(s, r).unwrap();
        let p = w.latest_pair().unwrap();
        assert!((p.sonar.dt - 0.1).abs() < 1e-12);
        assert!((p.range.dt - 0.1).abs() < 1e-12);
        assert_eq!(p.sonar.curr.readings[0], 2.0);
        assert_eq!(p.sonar.prev.readings[0], 1.0);
    }

    proptest! {
        #[test]
        fn window_holds_last_pushed(cap in 2usize..12, count in 1usize..40) {
            let mut w = ObservationWindow::new(cap);
            for k in 1..=count {
                let (s, r) = frames(k as f64 * 0.1, k as f64);
                w.push(s, r).unwrap();
            }
            let kept: Vec<f64> = w.sonar_frames().map(|f| f.readings[0]).collect();
            let expected: Vec<f64> = ((count - count.min(cap) + 1)..=count).map(|k| k as f64).collect();
            prop_assert_eq!(kept, expected);
            if let Ok(p) = w.latest_pair() {
                prop_assert!(p.sonar.dt > 0.0);
            }
        }
    }
}
