//! Weighted combination of feature maps, the attentional map with its
//! bottom-up and top-down chronometry, saliency and winner-takes-all.

mod chronometry;
mod combine;
mod selection;

pub use chronometry::{AttentionalState, ChronometryParams, Phase};
pub use combine::{attribute_source, combine, project_to_sectors, top_down_drive, CombinedMap, WeightSet};
pub use selection::{saliency, select_winner, SaliencyMap, Source, WinnerEvent};

/// Number of angular sectors shared by the combined, attentional and saliency maps.
pub const SECTORS: usize = crate::sensors::SONAR_COUNT;
