//! Built-in experiment scenarios, embedded at compile time.

use crate::error::ScenarioError;

use super::Scenario;

pub const PRESET_NAMES: [&str; 5] = ["exp01", "exp02", "exp03", "exp04", "exp05"];

const SOURCES: [&str; 5] = [
    include_str!("../../presets/exp01.json"),
    include_str!("../../presets/exp02.json"),
    include_str!("../../presets/exp03.json"),
    include_str!("../../presets/exp04.json"),
    include_str!("../../presets/exp05.json"),
];

pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
    let Some(i) = PRESET_NAMES.iter().position(|&n| n == name) else {
        return Err(ScenarioError::UnknownPreset {
            name: name.to_string(),
            available: PRESET_NAMES.to_vec(),
        });
    };
    Scenario::from_json(SOURCES[i])
}
