//! Deterministic 2D world: one immobile attentive robot, scripted movers and
//! static obstacles, advanced in fixed time steps.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Point at `range` along world angle `angle` from `origin`.
    pub fn polar(origin: Point<T>, range: T, angle: T) -> Self {
        Self::new(origin.x + range * angle.cos(), origin.y + range * angle.sin())
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        self.sub(other).norm()
    }
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle<T: Real>(angle: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut a = angle % two_pi;
    if a <= -T::PI() {
        a = a + two_pi;
    } else if a > T::PI() {
        a = a - two_pi;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose<T> {
    pub x: T,
    pub y: T,
    pub heading: T,
}

impl<T: Real> Pose<T> {
    pub fn new(x: T, y: T, heading: T) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn position(&self) -> Point<T> {
        Point::new(self.x, self.y)
    }

    /// World angle of a sensor bearing. Bearings run from 0 (robot's right)
    /// through 90 degrees (straight ahead) to 180 degrees (robot's left).
    pub fn bearing_to_world(&self, bearing: T) -> T {
        self.heading - T::FRAC_PI_2() + bearing
    }
}

/// Entity geometry. Segment endpoints are offsets from the entity position.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    Circle { radius: T },
    Segment { a: Point<T>, b: Point<T> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg<T> {
    pub to: Point<T>,
    pub speed: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory<T> {
    Stationary,
    Waypoints { start_time: T, legs: Vec<Leg<T>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity<T> {
    pub id: String,
    pub shape: Shape<T>,
    pub pose: Pose<T>,
    pub trajectory: Trajectory<T>,
    next_leg: usize,
    travelled: T,
}

impl<T: Real> Entity<T> {
    pub fn new(id: impl Into<String>, shape: Shape<T>, pose: Pose<T>, trajectory: Trajectory<T>) -> Self {
        Self {
            id: id.into(),
            shape,
            pose,
            trajectory,
            next_leg: 0,
            travelled: T::zero(),
        }
    }

    pub fn circle(id: impl Into<String>, center: Point<T>, radius: T) -> Self {
        Self::new(
            id,
            Shape::Circle { radius },
            Pose::new(center.x, center.y, T::zero()),
            Trajectory::Stationary,
        )
    }

    /// Static wall between two absolute points.
    pub fn wall(id: impl Into<String>, a: Point<T>, b: Point<T>) -> Self {
        Self::new(
            id,
            Shape::Segment { a, b },
            Pose::new(T::zero(), T::zero(), T::zero()),
            Trajectory::Stationary,
        )
    }

    pub fn with_trajectory(mut self, trajectory: Trajectory<T>) -> Self {
        self.trajectory = trajectory;
        self.next_leg = 0;
        self
    }

    /// Total path length covered since the world was built.
    pub fn travelled(&self) -> T {
        self.travelled
    }

    /// Index of the leg currently being followed; equals the leg count once finished.
    pub fn leg_index(&self) -> usize {
        self.next_leg
    }

    pub fn is_moving_at(&self, time: T) -> bool {
        match &self.trajectory {
            Trajectory::Stationary => false,
            Trajectory::Waypoints { start_time, legs } => {
                time >= *start_time && self.next_leg < legs.len() && legs[self.next_leg].speed > T::zero()
            }
        }
    }

    fn advance(&mut self, time: T, dt: T) {
        let Trajectory::Waypoints { start_time, legs } = &self.trajectory else {
            return;
        };
        if time + dt * T::lit(1e-9) < *start_time {
            return;
        }
        let Some(leg) = legs.get(self.next_leg).copied() else {
            return;
        };
        let step = leg.speed * dt;
        if step <= T::zero() {
            return;
        }
        let here = self.pose.position();
        let delta = leg.to.sub(here);
        let remaining = delta.norm();
        if remaining <= step * (T::one() + T::lit(1e-9)) {
            // snap, no carry-over of the unused part of the step
            if remaining > T::zero() {
                self.pose.heading = normalize_angle(delta.y.atan2(delta.x));
            }
            self.pose.x = leg.to.x;
            self.pose.y = leg.to.y;
            self.travelled = self.travelled + remaining;
            self.next_leg += 1;
        } else {
            let dir = delta.scale(T::one() / remaining);
            self.pose.x = here.x + dir.x * step;
            self.pose.y = here.y + dir.y * step;
            self.pose.heading = normalize_angle(dir.y.atan2(dir.x));
            self.travelled = self.travelled + step;
        }
    }

    /// Smallest positive hit distance of a ray against this entity.
    pub fn intersect(&self, origin: Point<T>, dir: Point<T>) -> Option<T> {
        let eps = T::lit(1e-9);
        match &self.shape {
            Shape::Circle { radius } => {
                let f = origin.sub(self.pose.position());
                let b = f.dot(dir);
                let c = f.dot(f) - *radius * *radius;
                let disc = b * b - c;
                if disc < T::zero() {
                    return None;
                }
                let sq = disc.sqrt();
                let near = -b - sq;
                let far = -b + sq;
                if near > eps {
                    Some(near)
                } else if far > eps {
                    Some(far)
                } else {
                    None
                }
            }
            Shape::Segment { a, b } => {
                let p = self.pose.position();
                let a = p.add(*a);
                let e = p.add(*b).sub(a);
                let denom = dir.cross(e);
                if denom.abs() < eps {
                    return None;
                }
                let ao = a.sub(origin);
                let t = ao.cross(e) / denom;
                let u = ao.cross(dir) / denom;
                (t > eps && u >= -eps && u <= T::one() + eps).then_some(t)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World<T> {
    pub entities: Vec<Entity<T>>,
    pub attentive_pose: Pose<T>,
    pub max_speed: T,
    dt: T,
    ticks: u64,
}

impl<T: Real> World<T> {
    pub const DEFAULT_DT: f64 = 0.1;
    pub const DEFAULT_MAX_SPEED: f64 = 2.0;

    /// Empty world with the attentive robot at the origin facing +y.
    pub fn new(dt: T) -> Self {
        assert!(dt > T::zero(), "dt must be positive");
        Self {
            entities: Vec::new(),
            attentive_pose: Pose::new(T::zero(), T::zero(), T::FRAC_PI_2()),
            max_speed: T::lit(Self::DEFAULT_MAX_SPEED),
            dt,
            ticks: 0,
        }
    }

    pub fn with_entity(mut self, entity: Entity<T>) -> Self {
        self.entities.push(entity);
        self
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    /// Simulation time, always an exact multiple of `dt`.
    pub fn time(&self) -> T {
        T::from_u64(self.ticks).expect("tick count representable") * self.dt
    }

    /// Advances every mover by one step along its trajectory.
    pub fn step(&mut self) {
        let (time, dt) = (self.time(), self.dt);
        for e in &mut self.entities {
            e.advance(time, dt);
        }
        self.ticks += 1;
    }

    /// Nearest hit along a ray, or `None` for an unbounded ray.
    pub fn cast_ray(&self, origin: Point<T>, angle: T) -> Option<T> {
        let dir = Point::new(angle.cos(), angle.sin());
        self.entities
            .iter()
            .filter_map(|e| e.intersect(origin, dir))
            .fold(None, |best: Option<T>, d| Some(best.map_or(d, |b| b.min(d))))
    }

    pub fn entity(&self, id: &str) -> Option<&Entity<T>> {
        self.entities.iter().find(|e| e.id == id)
    }
}
