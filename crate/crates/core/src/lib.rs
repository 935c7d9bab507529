//! Flight log decoding, time-series model, trajectory geometry and
//! visual encoding. Pure computation: no I/O, no global state.
#![no_std]

extern crate alloc;

pub mod encoding;
pub mod geo;
pub mod model;
pub mod ulog;
