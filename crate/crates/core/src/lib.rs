//! FDA-MIMO-OFDM transceiver model for far-field location division multiple
//! access (FLDMA).
//!
//! The crate is `no_std` (with `alloc`) and covers the numerical core:
//! frequency-offset plans and steering vectors, the OFDM waveform with its
//! inter-carrier interference, the space-frequency channel, MMSE/ZF
//! precoding and the Monte-Carlo spectral-efficiency experiments. File
//! formats, configuration and the command line live in the `fldma` crate.

#![no_std]

extern crate alloc;

pub mod array;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod math;
pub mod precoding;
pub mod rng;
pub mod waveform;

pub use error::{Error, Result};
