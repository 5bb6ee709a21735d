//! Core algorithms for two-layer HDR coding with hue compensation.
//!
//! Everything in this crate is a pure function over in-memory images and
//! byte buffers. It builds under `#![no_std]` with `alloc`; file formats,
//! corpus generation and the command-line tool live in the `huecodec` crate.
//!
//! The pipeline, end to end:
//!
//! 1. [`tmo`] maps an [`HdrImage`] to a display-referred [`LdrImage`].
//! 2. [`hueplane`] replaces each LDR pixel's maximally saturated color with
//!    the one of the matching HDR pixel, keeping its white/black/chroma
//!    weights on the constant hue plane.
//! 3. [`codec`] stores the (compensated) LDR image as a DCT base layer and
//!    a log-ratio residual layer that restores the HDR image.
//! 4. [`metrics`] scores hue distortion (Δc, CIEDE2000 ΔH) and tone-mapping
//!    quality (TMQI).

#![no_std]

extern crate alloc;

pub mod codec;
pub mod error;
pub mod hueplane;
pub mod image;
pub mod math;
pub mod metrics;
pub mod tmo;

pub use error::{Error, Result};
pub use hueplane::{HueCoords, MaxSatColor};
pub use image::{HdrImage, LdrImage, Rgb, ScalarField};
pub use tmo::{Operator, ToneCurve, TmoParams};
