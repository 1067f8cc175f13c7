pub mod angular;
pub mod distributions;
pub mod error;
pub mod game;
pub mod geometry;
pub mod poly;
pub mod poly2;
pub mod rational;
pub mod regulated1d;
pub mod regulated2d;

pub use error::{Error, Result};
pub use rational::Q;
