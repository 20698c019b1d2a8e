//! Exact-arithmetic engine for certifying that a real sequence which sits
//! exponentially close to integers (or is exactly integral on a dense index
//! set such as the primes) is eventually given by a polynomial.
//!
//! The pipeline constructs an auxiliary bivariate polynomial in the binomial
//! basis that vanishes on a seed window of the data, propagates that vanishing
//! forward point by point — either through a rigorously evaluated analytic
//! bound chain in outward-rounded interval arithmetic, or through the exact
//! integer evaluation oracle, or both — and finally reconstructs and verifies
//! the eventual polynomial by exact finite differences.

pub mod binom_poly;
pub mod bounds;
pub mod continuation;
pub mod dense_sets;
pub mod dyadic;
pub mod growth;
pub mod induction;
pub mod interval;
pub mod pipeline;
pub mod ratio;
pub mod recovery;
pub mod siegel;

pub use binom_poly::{binom_eval, BinomialPoly2, DegreeParams};
pub use dyadic::{Dyadic, RoundDir};
pub use interval::{Interval, DEFAULT_PREC, MAX_PREC};
