//! A software baseband laboratory for a GFDM transceiver aimed at remote-area
//! broadband links.
//!
//! The chain is built from small, independently testable pieces:
//!
//! - [`waveform`]: prototype pulses, the GFDM modulation matrix and its
//!   zero-forcing inverse, plus an FFT fast path.
//! - [`mapping`]: Gray-coded square QAM with hard and soft (LLR) demapping.
//! - [`polar`]: shortened polar codes with successive-cancellation decoding.
//! - [`mimo`]: time-reversal space-time coding (2x2), least-squares channel
//!   estimation and frequency-domain equalization.
//! - [`framing`]: CP/CS insertion, windowing, frame layout, PRBS and stuffing.
//! - [`channel`]: AWGN, Eb/N0 bookkeeping and flat MIMO channels.
//! - [`link`]: the assembled transmitter and receiver for one chain
//!   configuration, frame by frame.
//! - [`analysis`]: closed-form BER, the Monte Carlo runner and PSD / notch
//!   measurement.
//! - [`iq`]: interleaved f32 I/Q files for hardware playback.
//! - [`plot`]: dependency-free SVG line plots of BER and PSD curves.
//! - [`dft`]: unitary FFT helpers shared by the modem and the equalizers.
//! - [`cli`]: configuration files and the command implementations used by the
//!   `gfdm-lab` binary.

// `!(x > 0.0)` is used on purpose so NaN is rejected along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod dft;
pub mod error;
pub mod framing;
pub mod iq;
pub mod link;
pub mod mapping;
pub mod mimo;
pub mod plot;
pub mod polar;
pub mod waveform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
