pub mod analytics;
pub mod batch;
pub mod bilanczos;
pub mod combinatorics;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod harness;
pub mod linop;
pub mod majorana;
pub mod model;
pub mod ode;
pub mod seed;
pub mod superop;
pub mod verify;

pub use error::{Error, Result};
