use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::codec::TrainHistory;
use crate::error::{Error, Result};

/// Training/inference interleaving within a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pattern {
    /// The first `ceil(train_fraction * frame_length)` slots train.
    DutyCycle { train_fraction: f64 },
    /// Slot `i` trains when `i % occasion == 0`.
    Staggered { occasion: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRole {
    Train,
    Infer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotSchedule {
    pub pattern: Pattern,
    pub slots: Vec<SlotRole>,
}

impl SlotSchedule {
    pub fn frame_length(&self) -> usize {
        self.slots.len()
    }

    pub fn train_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == SlotRole::Train)
            .map(|(i, _)| i)
    }

    /// Global indices of the first `n` training slots when the frame
    /// repeats indefinitely.
    pub fn training_slots(&self, n: usize) -> Result<Vec<u64>> {
        let per_frame: Vec<u64> = self.train_slots().map(|i| i as u64).collect();
        if per_frame.is_empty() && n > 0 {
            return Err(Error::invalid("slot schedule", "frame has no training slots"));
        }
        let len = self.slots.len() as u64;
        Ok((0..n)
            .map(|i| (i / per_frame.len()) as u64 * len + per_frame[i % per_frame.len()])
            .collect())
    }
}

pub fn schedule_slots(pattern: Pattern, frame_length: usize) -> Result<SlotSchedule> {
    if frame_length == 0 {
        return Err(Error::invalid(
            "slot schedule",
            "frame length must be at least 1",
        ));
    }
    let slots = match pattern {
        Pattern::DutyCycle { train_fraction } => {
            if !(0.0..=1.0).contains(&train_fraction) {
                return Err(Error::invalid(
                    "slot schedule",
                    "train fraction must lie in [0, 1]",
                ));
            }
            let n_train = ((train_fraction * frame_length as f64 - 1e-9)
                .ceil()
                .max(0.0) as usize)
                .min(frame_length);
            (0..frame_length)
                .map(|i| {
                    if i < n_train {
                        SlotRole::Train
                    } else {
                        SlotRole::Infer
                    }
                })
                .collect()
        }
        Pattern::Staggered { occasion } => {
            if occasion < 1 {
                return Err(Error::invalid(
                    "slot schedule",
                    "measurement occasion must be at least 1",
                ));
            }
            (0..frame_length)
                .map(|i| {
                    if i % occasion == 0 {
                        SlotRole::Train
                    } else {
                        SlotRole::Infer
                    }
                })
                .collect()
        }
    };
    Ok(SlotSchedule { pattern, slots })
}

/// Whether the mean inference loss over `window` strictly exceeds
/// `threshold`. An empty window never triggers.
pub fn check_invalidation(window: &[f64], threshold: f64) -> bool {
    if window.is_empty() {
        return false;
    }
    let mean = window.iter().sum::<f64>() / window.len() as f64;
    mean > threshold
}

/// Twice the final training loss of the deployed model.
pub fn default_threshold(history: &TrainHistory) -> Option<f64> {
    history.final_train_loss().map(|l| 2.0 * l)
}
