//! Core of a link-level massive-MIMO-OFDM simulator with an autoencoder CSI
//! feedback codec.
//!
//! The crate is `no_std` with `alloc`. File formats, timing and the
//! experiment driver live in the `mimocsi` crate.

#![no_std]

extern crate alloc;

pub mod adaptive;
pub mod chanmodel;
pub mod codec;
pub mod error;
pub mod link;
pub mod metrics;
pub mod rng;

pub use error::{Error, Result};
