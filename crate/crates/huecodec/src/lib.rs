//! File formats, synthetic test scenes and batch reporting around
//! [`huecodec_core`].

pub mod corpus;
pub mod hdr_io;
pub mod report;

pub use huecodec_core as core;
