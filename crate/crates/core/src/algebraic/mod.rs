//! Exact representation of θ and of Z[θ].

pub(crate) mod interval;
pub(crate) mod minpoly;
mod poly;
mod roots;
mod zint;

pub use interval::{to_decimal, ComplexInterval, Interval, Rounding, DECIMAL_DIGITS};
pub use minpoly::{MinPoly, ModulusOrder, PerronStatus, Sign, DEFAULT_PRECISION_CAP};
pub use poly::{parse_polynomial, IntPolynomial};
pub use roots::{ConjugateSet, RootDisk};
pub use zint::AlgebraicInt;
