//! Adaptive compression-ratio selection.
//!
//! Link measurements are grouped into a dataset by channel, SNR bucket and
//! compression ratio. A lookup table then picks, per bucket, the ratio with
//! the lowest block error rate among those meeting the BLER ceiling, or
//! falls back to uncompressed feedback. Slot schedules and the invalidation
//! check cover the training/inference split.

mod dataset;
mod policy;
mod schedule;

pub use dataset::{build_dataset, Dataset, DatasetEntry, MeasurementRecord, SnrBuckets};
pub use policy::{
    run_adaptive, select_kappa, AdaptivePoint, KappaChoice, PolicyRow, PolicyTable, DEFAULT_B_MAX,
};
pub use schedule::{
    check_invalidation, default_threshold, schedule_slots, Pattern, SlotRole, SlotSchedule,
};
