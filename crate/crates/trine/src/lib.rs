//! File formats, the parallel mask search and report bundles for
//! [`trine_core`].

pub mod bundle;
pub mod config;
pub mod error;
pub mod formats;
pub mod search;

pub use config::Config;
pub use error::{Error, Result};
pub use trine_core;
