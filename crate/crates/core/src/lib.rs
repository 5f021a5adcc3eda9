pub mod algebra;
pub mod charpoly;
pub mod cyclotomic;
pub mod drinfeld;
pub mod error;
pub mod euler;
pub mod field;
pub mod fitting;
pub mod galois;
pub mod group;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod newton;
pub mod poly;
pub mod ring;
pub mod rng;
pub mod series;
pub mod skew;
pub mod suites;

pub use error::{Error, Result};
