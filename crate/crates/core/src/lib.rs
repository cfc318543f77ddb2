pub mod complex;
pub mod example;
pub mod groebner;
pub mod homotopy;
pub mod job;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod resolution;
pub mod ring;
