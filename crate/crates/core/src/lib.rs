#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod knot_diagram;
pub mod numerics;
pub mod oneloop;
pub mod potential;
pub mod triangulation;

pub use error::{Error, Result};
