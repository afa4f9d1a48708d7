//! Scenario files, built-in experiment presets, the run loop and CSV export.

mod export;
mod presets;
mod run;
mod scenario;

pub use export::{export_csv, format_number, PLOT_FILE};
pub use presets::{preset, PRESET_NAMES};
pub use run::{run, run_pipeline, RunTrace};
pub use scenario::{
    ChronometrySpec, DistanceSource, EntitySpec, FeatureSpec, GoalSpec, LegSpec, PointSpec, Scenario, SensorSpec,
    ShapeSpec, TrajectorySpec, WorldSpec, SCHEMA_VERSION,
};
