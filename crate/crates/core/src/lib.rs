//! Bounded-depth QBF encodings of maker-breaker positional games.

pub mod error;
pub mod explicit;
pub mod game;
pub mod hex;
pub mod httt;
pub mod lifted;
pub mod oracle;
pub mod preprocess;
pub mod qbf;
pub mod runner;
pub mod selfcheck;

pub use error::{Error, Result};
