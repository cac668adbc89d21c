//! Command line and HTTP front ends over `entwine-core`.
//!
//! Both front ends go through [`service`], so the same inputs give the same
//! documents whichever path is used.

pub mod cli;
pub mod error;
pub mod http;
pub mod service;
pub mod store;

pub use error::{ApiError, ErrorCode};
