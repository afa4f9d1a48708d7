//! Sensor-driven visual attention for an immobile mobile robot.
//!
//! A 2D world feeds a sonar ring and a laser range scanner into a short
//! sensorial memory. Bottom-up and goal-driven feature maps are fused into a
//! combined map, modulated by an attentional state with enhancement,
//! inhibition of return and vigilance adaptation, and a winner-takes-all
//! stage picks the attended sector every tick.
//!
//! Everything is generic over the scalar type ([`Real`]); the `*64` aliases
//! below fix it to `f64`.

pub mod attention;
pub mod error;
pub mod features;
pub mod harness;
pub mod memory;
pub mod pipeline;
pub mod scalar;
pub mod sensors;
pub mod world;

pub use scalar::Real;

pub type World64 = world::World<f64>;
pub type Entity64 = world::Entity<f64>;
pub type ObservationWindow64 = memory::ObservationWindow<f64>;
pub type FeatureMap64 = features::FeatureMap<f64>;
pub type Goal64 = features::Goal<f64>;
pub type AttentionalState64 = attention::AttentionalState<f64>;
pub type Pipeline64 = pipeline::Pipeline<f64>;
pub type TickRecord64 = pipeline::TickRecord<f64>;
pub type RunTrace64 = harness::RunTrace<f64>;
