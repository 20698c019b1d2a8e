//! Rigorous evaluation of the preliminary estimates that drive the zero
//! propagation: the binomial-coefficient bound, the bound on differences of
//! binomial-basis polynomials in the second argument, the lower bound on
//! products of differences of distinct integers, and the Jensen/Blaschke-type
//! upper bound on an analytic function at the origin.
//!
//! Everything is computed over exact rationals for as long as possible; a
//! modulus only becomes an interval at the final square root. The classical
//! statement of the Blaschke-type estimate writes the correction-term product
//! with the index `k != n`; it is evaluated here as `k != i` (the summation
//! index), the only reading that makes the formula well-formed. The textual
//! note below is surfaced in reports.

use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::interval::{factorial_exact, Interval};

/// Note attached to reports wherever the Blaschke-type estimate is used.
pub const BLASCHKE_INDEX_NOTE: &str =
    "blaschke correction product evaluated over k != i (summation index); \
     the k != n form in the source statement is taken as a typo";

/// Complex number with exact rational coordinates.
pub type ComplexRat = num::complex::Complex<BigRational>;

pub fn complex_rat(re: BigRational, im: BigRational) -> ComplexRat {
    ComplexRat::new(re, im)
}

/// Exact `|z|^2`.
pub fn norm_sqr(z: &ComplexRat) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

/// Enclosure of `|z|` via one interval square root of the exact norm square.
pub fn abs_enclosure(z: &ComplexRat, prec: u32) -> Interval {
    Interval::from_rational(&norm_sqr(z), prec + 8).clamp_nonneg().sqrt(prec)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("binomial bound needs i <= L, got i={i}, L={l}")]
    IndexAboveDegree { i: u32, l: u32 },
    #[error("binomial bound needs L >= 1")]
    DegreeZero,
    #[error("difference bound hypothesis requires b, b' >= 1")]
    ArgumentBelowOne,
    #[error("two interpolation points coincide")]
    DuplicatePoint,
    #[error("point with modulus >= disk radius")]
    PointOnBoundary,
    #[error("point at the origin is not allowed")]
    ZeroPoint,
    #[error("phi_values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// Upper bound `e^L ((|z|+L)/L)^L` on `|binom(z,i)|` for `i <= L`.
pub fn binom_upper_bound(abs_z: &Interval, i: u32, l: u32, prec: u32) -> Result<Interval, BoundsError> {
    if l == 0 {
        return Err(BoundsError::DegreeZero);
    }
    if i > l {
        return Err(BoundsError::IndexAboveDegree { i, l });
    }
    let li = Interval::from_u64(l as u64);
    let ratio = abs_z.clamp_nonneg().add(&li, prec).div(&li, prec);
    let pow = ratio.pow_int(l as u64, prec);
    let el = li.exp(prec);
    Ok(el.mul(&pow, prec))
}

/// Upper bound `(L+1)(M+1)^2 * height * binom_max * b^M * b'^M * |b-b'|` on
/// `|P(a,b) - P(a,b')|` for any `P` of degrees `(L,M)` with the given height,
/// valid for `b, b' >= 1`. `diff` must enclose `|b - b'|`.
pub fn polydiff_bound(
    height: &Interval,
    l: u32,
    m: u32,
    binom_max: &Interval,
    b: &Interval,
    b_prime: &Interval,
    diff: &Interval,
    prec: u32,
) -> Result<Interval, BoundsError> {
    if b.lo().to_rational() < BigRational::one() || b_prime.lo().to_rational() < BigRational::one()
    {
        return Err(BoundsError::ArgumentBelowOne);
    }
    let factor = Interval::from_u64((l as u64 + 1) * (m as u64 + 1) * (m as u64 + 1));
    Ok(factor
        .mul(height, prec)
        .mul(binom_max, prec)
        .mul(&b.pow_int(m as u64, prec), prec)
        .mul(&b_prime.pow_int(m as u64, prec), prec)
        .mul(&diff.abs(), prec))
}

/// Exact `(N-1)!/2^(N-1)`: the lower bound on products of differences from a
/// fixed element among `N` pairwise distinct integers.
pub fn tijdeman_lower_bound(n: u64) -> BigRational {
    assert!(n >= 1);
    BigRational::new(factorial_exact(n - 1), BigInt::one() << (n - 1))
}

/// Inputs of the Jensen/Blaschke-type origin bound: an analytic function on
/// `|z| <= R` with a sup-norm enclosure, plus its values at interior points.
#[derive(Clone, Debug)]
pub struct BlaschkeInstance {
    pub radius: BigRational,
    pub points: Vec<ComplexRat>,
    pub phi_sup: Interval,
    pub phi_values: Vec<Interval>,
}

impl BlaschkeInstance {
    fn validate(&self) -> Result<(), BoundsError> {
        if self.phi_values.len() != self.points.len() {
            return Err(BoundsError::LengthMismatch {
                got: self.phi_values.len(),
                want: self.points.len(),
            });
        }
        let r_sq = &self.radius * &self.radius;
        for (idx, p) in self.points.iter().enumerate() {
            let nsq = norm_sqr(p);
            if nsq.is_zero() {
                return Err(BoundsError::ZeroPoint);
            }
            if nsq >= r_sq {
                return Err(BoundsError::PointOnBoundary);
            }
            for q in &self.points[idx + 1..] {
                if p == q {
                    return Err(BoundsError::DuplicatePoint);
                }
            }
        }
        Ok(())
    }
}

/// Upper bound on `|phi(0)|`:
/// `|phi|_R prod |a_i|/R + sum_i |phi(a_i)| prod_j |R^2 - a_i conj(a_j)|/R^2
///  prod_{k != i} |a_k|/|a_k - a_i|`.
///
/// All products are accumulated as exact rationals on norm squares; a single
/// interval square root per summand keeps the enclosure tight.
pub fn blaschke_rhs(inst: &BlaschkeInstance, prec: u32) -> Result<Interval, BoundsError> {
    inst.validate()?;
    let n = inst.points.len();
    let r_sq = &inst.radius * &inst.radius;

    // (prod |a_i| / R)^2
    let mut first_sq = BigRational::one();
    for p in &inst.points {
        first_sq *= norm_sqr(p) / &r_sq;
    }
    let first = inst
        .phi_sup
        .clamp_nonneg()
        .mul(&Interval::from_rational(&first_sq, prec + 8).clamp_nonneg().sqrt(prec), prec);

    let mut sum = Interval::zero();
    for i in 0..n {
        let a_i = &inst.points[i];
        let mut prod_sq = BigRational::one();
        for (j, a_j) in inst.points.iter().enumerate() {
            let w = ComplexRat::new(r_sq.clone(), BigRational::zero()) - a_i * a_j.conj();
            prod_sq *= norm_sqr(&w) / (&r_sq * &r_sq);
            if j != i {
                let d = a_j - a_i;
                prod_sq *= norm_sqr(a_j) / norm_sqr(&d);
            }
        }
        let factor = Interval::from_rational(&prod_sq, prec + 8).clamp_nonneg().sqrt(prec);
        sum = sum.add(&inst.phi_values[i].clamp_nonneg().mul(&factor, prec), prec);
    }
    Ok(first.add(&sum, prec))
}
