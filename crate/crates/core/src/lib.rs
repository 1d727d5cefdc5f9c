//! Exact arithmetic for the digit-power-sum sets of Perron numbers.
//!
//! A Perron number θ is given by its monic minimal polynomial. Elements of
//! Z[θ] are integer coordinate vectors in the power basis 1, θ, …, θ^{d−1},
//! so every equality decision is made exactly; order decisions use certified
//! dyadic interval enclosures of the conjugate embeddings.
//!
//! The crate is organised in four layers:
//!
//! * [`algebraic`]: polynomials, certified root isolation, [`MinPoly`] and
//!   [`AlgebraicInt`].
//! * [`digits`]: enumeration of the sets
//!   D_n(θ) = { Σ_{k=1}^n a_k θ^k : a_k ∈ {0,…,⌊θ⌋} }, minimal gaps, and the
//!   search for bounded-height integer relations.
//! * [`power_sums`]: exact traces and the angular / power-sum statistics.
//! * [`beta`]: greedy θ-expansions and admissible-word counting.
//!
//! Correctness of "value is zero iff the coordinate vector is zero" relies on
//! the input polynomial being the *minimal* polynomial of its dominant root.
//! Construction rejects non-monic, non-squarefree and rationally reducible
//! inputs; other reducible inputs are detected lazily when a sign computation
//! finds a nonzero vector that vanishes (see [`Error::NotMinimal`]).

pub mod algebraic;
pub mod beta;
pub mod digits;
mod error;
pub mod power_sums;

pub use algebraic::{
    AlgebraicInt, ComplexInterval, ConjugateSet, IntPolynomial, Interval, MinPoly, ModulusOrder,
    PerronStatus, RootDisk, Sign,
};
pub use error::{Error, Result};
