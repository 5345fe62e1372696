//! Core of the digital procurement workspace: domain model, central store,
//! silo ingestion and the information, analytics and sustainability
//! engines.

pub mod bots;
pub mod config;
pub mod domain;
pub mod error;
pub mod ingest;
pub mod paas;
pub mod pis;
pub mod sss;
pub mod store;
pub mod widgets;
pub mod workspace;

pub use config::Config;
pub use workspace::Workspace;
pub use error::{DpwError, Result};
