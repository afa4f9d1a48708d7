use crate::memory::ObservationWindow;
use crate::scalar::{mean, median, Real};
use crate::sensors::{sector_beams, RangeFrame, SonarFrame, BEAM_COUNT, SONAR_COUNT};

use super::{Dimension, FeatureMap, FeatureParams, Resolution};

/// Unsigned per-sector speed `|ds / dt|` from the two newest sonar frames.
pub fn sector_speeds<T: Real>(window: &ObservationWindow<T>) -> Option<[T; SONAR_COUNT]> {
    let pair = window.latest_pair().ok()?;
    let s = pair.sonar;
    Some(std::array::from_fn(|n| ((s.curr.readings[n] - s.prev.readings[n]) / s.dt).abs()))
}

/// Motion conspicuity: speed contrast against the mean speed, over MAX-SPEED.
///
/// Returns the map and the raw (pre-contrast) speeds the goal-speed map consumes.
/// With fewer than two frames both are all-zero.
pub fn motion_map<T: Real>(window: &ObservationWindow<T>, max_speed: T) -> (FeatureMap<T>, [T; SONAR_COUNT]) {
    let Some(speeds) = sector_speeds(window) else {
        return (
            FeatureMap::zeros(Dimension::Motion, Resolution::Sectors8),
            [T::zero(); SONAR_COUNT],
        );
    };
    let avg = mean(&speeds);
    let values = speeds
        .iter()
        .map(|&v| ((v - avg).abs() / max_speed).min(T::one()))
        .collect();
    (FeatureMap::new(Dimension::Motion, Resolution::Sectors8, values), speeds)
}

/// Ternary direction code: +1 receding, -1 approaching, 0 inside the dead band.
pub fn speed_sign_threshold<T: Real>(ds: T, dt: T, dead_band: T) -> i8 {
    let v = ds / dt;
    if v > dead_band {
        1
    } else if v < -dead_band {
        -1
    } else {
        0
    }
}

/// Direction codes for every channel of a frame history (oldest first).
///
/// Each channel is median-smoothed over up to `smoothing` frames before the
/// newest two smoothed values are differenced.
pub fn direction_codes<T: Real>(history: &[&[T]], dt: T, dead_band: T, smoothing: usize) -> Vec<i8> {
    let n = history.len();
    let channels = history.first().map_or(0, |f| f.len());
    if n < 2 {
        return vec![0; channels];
    }
    let m = smoothing.max(1).min(n - 1);
    (0..channels)
        .map(|c| {
            let series: Vec<T> = history.iter().map(|f| f[c]).collect();
            let curr = median(&series[n - m..n]);
            let prev = median(&series[n - 1 - m..n - 1]);
            speed_sign_threshold(curr - prev, dt, dead_band)
        })
        .collect()
}

/// Rarity of each code within its map: `1 / count(code)`.
pub fn rarity<T: Real>(codes: &[i8]) -> Vec<T> {
    let count = |c: i8| codes.iter().filter(|&&x| x == c).count();
    let counts = [count(-1), count(0), count(1)];
    codes
        .iter()
        .map(|&c| T::one() / T::from_count(counts[(c + 1) as usize]))
        .collect()
}

/// Direction conspicuity fused from the sonar and range-scanner paths.
///
/// Each path scores codes by rarity; the range path is pooled to sectors by
/// mean over the beams registered to each sector, and the two paths are
/// averaged. Also returns the sonar-path codes.
pub fn direction_map<T: Real>(
    window: &ObservationWindow<T>,
    params: &FeatureParams<T>,
) -> (FeatureMap<T>, [i8; SONAR_COUNT]) {
    let Ok(pair) = window.latest_pair() else {
        return (
            FeatureMap::zeros(Dimension::Direction, Resolution::Sectors8),
            [0; SONAR_COUNT],
        );
    };
    let sonar: Vec<&[T]> = window.sonar_frames().map(|f| &f.readings[..]).collect();
    let range: Vec<&[T]> = window.range_frames().map(|f| &f.readings[..]).collect();
    let sonar_codes = direction_codes(&sonar, pair.sonar.dt, params.dead_band, params.sign_smoothing);
    let range_codes = direction_codes(&range, pair.range.dt, params.dead_band, params.sign_smoothing);

    let sonar_rarity: Vec<T> = rarity(&sonar_codes);
    let range_rarity: Vec<T> = rarity(&range_codes);
    let values = (0..SONAR_COUNT)
        .map(|s| {
            let pooled = mean(&range_rarity[sector_beams(s)]);
            (sonar_rarity[s] + pooled) / T::lit(2.0)
        })
        .collect();
    let codes = std::array::from_fn(|n| sonar_codes[n]);
    (FeatureMap::new(Dimension::Direction, Resolution::Sectors8, values), codes)
}

/// Distance conspicuity per beam: deviation from the mean reading over `max_range`.
pub fn distance_map<T: Real>(range: &RangeFrame<T>, max_range: T) -> (FeatureMap<T>, [T; BEAM_COUNT]) {
    let avg = mean(&range.readings);
    let values = range.readings.iter().map(|&o| (o - avg).abs() / max_range).collect();
    (
        FeatureMap::new(Dimension::Distance, Resolution::Beams180, values),
        range.readings,
    )
}

/// The same deviation measure applied to the sonar ring (normalised by the
/// sonar saturation range), for building distance from both sensors.
pub fn sonar_distance_map<T: Real>(sonar: &SonarFrame<T>, max_range: T) -> FeatureMap<T> {
    let avg = mean(&sonar.readings);
    let values = sonar.readings.iter().map(|&o| (o - avg).abs() / max_range).collect();
    FeatureMap::new(Dimension::Distance, Resolution::Sectors8, values)
}
