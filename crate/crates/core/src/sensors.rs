//! Frontal sonar ring and 180 degree range scanner models.
//!
//! Both sensors look over the frontal half-plane of the attentive robot.
//! Bearings are measured from the robot's right (0 deg) through straight
//! ahead (90 deg) to its left (180 deg). Sonar `k` covers
//! `[k * 22.5, (k + 1) * 22.5)` deg and range beam `i` points at `i + 0.5` deg.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;
use crate::world::World;

pub const SONAR_COUNT: usize = 8;
pub const SONAR_MIN_RANGE: f64 = 0.15;
pub const SONAR_MAX_RANGE: f64 = 5.0;
pub const RAYS_PER_SONAR: usize = 5;
pub const SECTOR_WIDTH_DEG: f64 = 22.5;

pub const BEAM_COUNT: usize = 180;
pub const RANGE_MAX: f64 = 20.0;
/// Lower clamp of the scanner; readings stay strictly positive.
pub const RANGE_MIN: f64 = 0.01;

/// Sector a range beam is registered to: `floor(i / 22.5)`.
pub const fn beam_sector(beam: usize) -> usize {
    (2 * beam) / 45
}

/// Beams registered to `sector`, as a half-open index range.
pub fn sector_beams(sector: usize) -> std::ops::Range<usize> {
    let start = (0..BEAM_COUNT).find(|&i| beam_sector(i) == sector).unwrap_or(BEAM_COUNT);
    let end = (start..BEAM_COUNT).find(|&i| beam_sector(i) != sector).unwrap_or(BEAM_COUNT);
    start..end
}

/// Sector containing a bearing in degrees, or `None` outside the frontal half-plane.
pub fn bearing_sector(bearing_deg: f64) -> Option<usize> {
    (0.0..180.0)
        .contains(&bearing_deg)
        .then(|| ((bearing_deg / SECTOR_WIDTH_DEG).floor() as usize).min(SONAR_COUNT - 1))
}

/// Bearings (deg) of the rays that make up one sonar cone, evenly spaced
/// at the midpoints of five equal slices of the sector.
pub fn sonar_ray_bearings(sector: usize) -> [f64; RAYS_PER_SONAR] {
    let slice = SECTOR_WIDTH_DEG / RAYS_PER_SONAR as f64;
    std::array::from_fn(|j| sector as f64 * SECTOR_WIDTH_DEG + (j as f64 + 0.5) * slice)
}

pub fn beam_bearing(beam: usize) -> f64 {
    beam as f64 + 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct SonarFrame<T> {
    pub readings: [T; SONAR_COUNT],
    pub timestamp: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeFrame<T> {
    pub readings: [T; BEAM_COUNT],
    pub timestamp: T,
}

/// Multiplicative zero-mean Gaussian noise, `sigma` relative to the reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub relative_sigma: f64,
    pub seed: u64,
    pub enabled: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            relative_sigma: 0.05,
            seed: 0,
            enabled: true,
        }
    }
}

impl NoiseModel {
    pub fn off() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }
}

/// Per-sensor random streams derived from one seed.
#[derive(Debug, Clone)]
pub struct NoiseStreams {
    pub sonar: ChaCha8Rng,
    pub range: ChaCha8Rng,
}

impl NoiseStreams {
    pub fn new(seed: u64) -> Self {
        let stream = |id: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        Self {
            sonar: stream(1),
            range: stream(2),
        }
    }
}

pub fn apply_noise<T: Real, R: Rng + ?Sized>(value: T, noise: &NoiseModel, rng: &mut R) -> T {
    if !noise.enabled || noise.relative_sigma == 0.0 {
        return value;
    }
    let z: f64 = rng.sample(StandardNormal);
    value * (T::one() + T::lit(noise.relative_sigma * z))
}

/// Noisy, clamped reading for a true distance. No echo (or an echo past
/// `max`) saturates at `max` without noise.
fn reading<T: Real, R: Rng + ?Sized>(
    truth: Option<T>,
    min: T,
    max: T,
    noise: &NoiseModel,
    rng: &mut R,
) -> T {
    match truth {
        Some(d) if d < max => apply_noise(d, noise, rng).max(min).min(max),
        _ => max,
    }
}

pub fn sample_sonar<T: Real, R: Rng + ?Sized>(world: &World<T>, noise: &NoiseModel, rng: &mut R) -> SonarFrame<T> {
    let pose = world.attentive_pose;
    let origin = pose.position();
    let readings = std::array::from_fn(|k| {
        let nearest = sonar_ray_bearings(k)
            .iter()
            .filter_map(|&b| world.cast_ray(origin, pose.bearing_to_world(T::lit(b.to_radians()))))
            .fold(None, |best: Option<T>, d| Some(best.map_or(d, |b| b.min(d))));
        reading(nearest, T::lit(SONAR_MIN_RANGE), T::lit(SONAR_MAX_RANGE), noise, rng)
    });
    SonarFrame {
        readings,
        timestamp: world.time(),
    }
}

pub fn sample_range<T: Real, R: Rng + ?Sized>(world: &World<T>, noise: &NoiseModel, rng: &mut R) -> RangeFrame<T> {
    let pose = world.attentive_pose;
    let origin = pose.position();
    let readings = std::array::from_fn(|i| {
        let hit = world.cast_ray(origin, pose.bearing_to_world(T::lit(beam_bearing(i).to_radians())));
        reading(hit, T::lit(RANGE_MIN), T::lit(RANGE_MAX), noise, rng)
    });
    RangeFrame {
        readings,
        timestamp: world.time(),
    }
}
