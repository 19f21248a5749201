//! Number-theoretic building blocks.

pub mod circle;
pub mod dyadic;
pub mod factor;
pub mod fp_poly;
pub mod interval;
pub mod linalg;
pub mod logreal;
pub mod mahler;
pub mod quad;
pub mod rational;
pub mod zpoly;
