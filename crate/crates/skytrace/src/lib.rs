//! Post-flight analysis of PX4 ULog files on top of `skytrace-core`:
//! configuration files, exports, the command line and the HTTP service.

pub mod cli;
pub mod config;
pub mod export;
pub mod query;
pub mod service;
