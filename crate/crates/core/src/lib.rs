//! Adaptive quintic Argyris finite elements for biharmonic eigenvalue problems.

pub mod afem;
pub mod assembly;
pub mod bench;
pub mod cli;
pub mod constants;
pub mod eigensolve;
pub mod error;
pub mod estimator;
pub mod mesh;
pub mod plotdata;
pub mod reference;
pub mod space;
pub mod sparse;

pub use error::{Error, Result};
