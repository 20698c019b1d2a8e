//! Exact arithmetic for binomial coefficients with rational arguments and for
//! bivariate integer polynomials in the basis `binom(X,i) * Y^j`.
//!
//! The binomial basis is the canonical representation here: the constraint
//! matrices and all integrality arguments live in it. Conversion to the
//! monomial basis is provided for display only.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{BigRational, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::interval::{factorial_exact, Interval};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreeError {
    #[error("L must be odd in theorem-1 shape, got {0}")]
    EvenL(u32),
    #[error("theorem-1 shape requires M+1 < L, got L={l}, M={m}")]
    DegreeOrder { l: u32, m: u32 },
}

/// Degree bounds `L` (X-direction), `M` (Y-direction) and `T = (L+1)(M+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeParams {
    pub l: u32,
    pub m: u32,
    pub t: u64,
    /// Whether the `M+1 < L`, `L` odd shape constraints were enforced.
    pub theorem1_shape: bool,
}

impl DegreeParams {
    /// Parameters with the parity and ordering constraints of the
    /// near-integer regime: `L` odd and `M+1 < L`.
    pub fn theorem1(l: u32, m: u32) -> Result<Self, DegreeError> {
        if l % 2 == 0 {
            return Err(DegreeError::EvenL(l));
        }
        if m + 1 >= l {
            return Err(DegreeError::DegreeOrder { l, m });
        }
        Ok(DegreeParams { l, m, t: (l as u64 + 1) * (m as u64 + 1), theorem1_shape: true })
    }

    /// Unconstrained parameters (dense-set regime).
    pub fn unconstrained(l: u32, m: u32) -> Self {
        DegreeParams { l, m, t: (l as u64 + 1) * (m as u64 + 1), theorem1_shape: false }
    }
}

/// Exact `binom(z, i) = z(z-1)...(z-i+1)/i!` for rational `z`.
pub fn binom_eval(z: &BigRational, i: usize) -> BigRational {
    let mut prod = BigRational::one();
    for k in 0..i {
        prod *= z - BigRational::from_integer(BigInt::from(k));
    }
    prod / BigRational::from_integer(factorial_exact(i as u64))
}

/// Exact integer `binom(n, i)` for integer `n` (negative `n` allowed; the
/// product of `i` consecutive integers is always divisible by `i!`).
pub fn binom_int(n: &BigInt, i: usize) -> BigInt {
    let mut prod = BigInt::one();
    for k in 0..i {
        prod *= n - BigInt::from(k);
    }
    let (q, r) = prod.div_rem(&factorial_exact(i as u64));
    debug_assert!(r.is_zero());
    q
}

/// Enclosure of `binom(x, i)` over an interval argument.
pub fn binom_interval(x: &Interval, i: usize, prec: u32) -> Interval {
    let mut prod = Interval::one();
    for k in 0..i {
        prod = prod.mul(&x.sub(&Interval::from_u64(k as u64), prec), prec);
    }
    prod.div(&Interval::from_bigint(&factorial_exact(i as u64)), prec)
}

/// Bivariate integer polynomial `sum p_{i,j} binom(X,i) Y^j` with `i <= L`,
/// `j <= M`. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialPoly2 {
    l_deg: u32,
    m_deg: u32,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl BinomialPoly2 {
    pub fn new(l_deg: u32, m_deg: u32) -> Self {
        BinomialPoly2 { l_deg, m_deg, coeffs: BTreeMap::new() }
    }

    /// Build from a dense coefficient vector in column order `(i,j)`,
    /// `j` minor: index = i*(M+1) + j.
    pub fn from_dense(l_deg: u32, m_deg: u32, dense: &[BigInt]) -> Self {
        assert_eq!(dense.len() as u64, (l_deg as u64 + 1) * (m_deg as u64 + 1));
        let mut p = BinomialPoly2::new(l_deg, m_deg);
        let cols = m_deg as usize + 1;
        for (idx, c) in dense.iter().enumerate() {
            if !c.is_zero() {
                p.coeffs.insert(((idx / cols) as u32, (idx % cols) as u32), c.clone());
            }
        }
        p
    }

    pub fn set(&mut self, i: u32, j: u32, c: BigInt) {
        assert!(i <= self.l_deg && j <= self.m_deg);
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn l_deg(&self) -> u32 {
        self.l_deg
    }

    pub fn m_deg(&self) -> u32 {
        self.m_deg
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max |p_{i,j}|`, exactly.
    pub fn height(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Exact rational evaluation.
    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let binoms: Vec<BigRational> =
            (0..=self.l_deg as usize).map(|i| binom_eval(x, i)).collect();
        let mut ypows = Vec::with_capacity(self.m_deg as usize + 1);
        ypows.push(BigRational::one());
        for _ in 0..self.m_deg {
            let next = ypows.last().unwrap() * y;
            ypows.push(next);
        }
        let mut acc = BigRational::zero();
        for ((i, j), c) in &self.coeffs {
            acc += BigRational::from_integer(c.clone()) * &binoms[*i as usize] * &ypows[*j as usize];
        }
        acc
    }

    /// Exact integer evaluation at integer arguments; this is the integrality
    /// oracle used to cross-check every analytic zero certificate.
    pub fn eval_int(&self, n: &BigInt, m: &BigInt) -> BigInt {
        let binoms: Vec<BigInt> = (0..=self.l_deg as usize).map(|i| binom_int(n, i)).collect();
        let mut mpows = Vec::with_capacity(self.m_deg as usize + 1);
        mpows.push(BigInt::one());
        for _ in 0..self.m_deg {
            let next = mpows.last().unwrap() * m;
            mpows.push(next);
        }
        let mut acc = BigInt::zero();
        for ((i, j), c) in &self.coeffs {
            acc += c * &binoms[*i as usize] * &mpows[*j as usize];
        }
        acc
    }

    /// Rigorous enclosure of the value set over interval arguments.
    pub fn eval_interval(&self, x: &Interval, y: &Interval, prec: u32) -> Interval {
        let binoms: Vec<Interval> =
            (0..=self.l_deg as usize).map(|i| binom_interval(x, i, prec)).collect();
        let mut ypows = Vec::with_capacity(self.m_deg as usize + 1);
        ypows.push(Interval::one());
        for _ in 0..self.m_deg {
            let next = ypows.last().unwrap().mul(y, prec);
            ypows.push(next);
        }
        let mut acc = Interval::zero();
        for ((i, j), c) in &self.coeffs {
            let term = Interval::from_bigint(c)
                .mul(&binoms[*i as usize], prec)
                .mul(&ypows[*j as usize], prec);
            acc = acc.add(&term, prec);
        }
        acc
    }

    /// Monomial-basis coefficients `q[i][j]` with `P = sum q[i][j] X^i Y^j`,
    /// for display; the binomial basis stays canonical everywhere else.
    pub fn to_monomial(&self) -> Vec<Vec<BigRational>> {
        let rows = self.l_deg as usize + 1;
        let cols = self.m_deg as usize + 1;
        let mut out = vec![vec![BigRational::zero(); cols]; rows];
        // binom(X,i) = sum_k s(i,k)/i! X^k via expanding the falling factorial.
        for ((i, j), c) in &self.coeffs {
            let mut falling = vec![BigRational::one()]; // coefficients of prod (X-k)
            for k in 0..*i {
                let mut next = vec![BigRational::zero(); falling.len() + 1];
                for (d, v) in falling.iter().enumerate() {
                    next[d + 1] += v;
                    next[d] -= v * BigRational::from_integer(BigInt::from(k));
                }
                falling = next;
            }
            let fact = BigRational::from_integer(factorial_exact(*i as u64));
            for (d, v) in falling.iter().enumerate() {
                out[d][*j as usize] += BigRational::from_integer(c.clone()) * v / &fact;
            }
        }
        out
    }
}

impl Serialize for BinomialPoly2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            #[serde(rename = "L")]
            l: u32,
            #[serde(rename = "M")]
            m: u32,
            coeffs: Vec<(u32, u32, &'a str)>,
        }
        let strings: Vec<((u32, u32), String)> =
            self.coeffs.iter().map(|(&k, v)| (k, v.to_string())).collect();
        let raw = Raw {
            l: self.l_deg,
            m: self.m_deg,
            coeffs: strings.iter().map(|((i, j), s)| (*i, *j, s.as_str())).collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinomialPoly2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "L")]
            l: u32,
            #[serde(rename = "M")]
            m: u32,
            coeffs: Vec<(u32, u32, String)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut p = BinomialPoly2::new(raw.l, raw.m);
        for (i, j, s) in raw.coeffs {
            if i > raw.l || j > raw.m {
                return Err(D::Error::custom("coefficient index out of range"));
            }
            let c: BigInt = s.parse().map_err(|_| D::Error::custom("bad coefficient"))?;
            p.set(i, j, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn binom_eval_examples() {
        assert_eq!(binom_eval(&int(5), 2), int(10));
        assert_eq!(binom_eval(&rat(7, 3), 0), int(1));
        assert_eq!(binom_eval(&rat(-9, 2), 0), int(1));
        // (1/2 choose 2) = (1/2)(-1/2)/2 = -1/8
        assert_eq!(binom_eval(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn binom_int_matches_rational_and_handles_negatives() {
        for n in -10i64..=10 {
            for i in 0..=6usize {
                let a = binom_int(&BigInt::from(n), i);
                let b = binom_eval(&int(n), i);
                assert!(b.is_integer());
                assert_eq!(a, b.to_integer());
            }
        }
        assert_eq!(binom_int(&BigInt::from(10), 3), BigInt::from(120));
    }

    #[test]
    fn poly_eval_examples() {
        let mut one = BinomialPoly2::new(0, 0);
        one.set(0, 0, BigInt::one());
        assert_eq!(one.eval_exact(&rat(13, 7), &rat(-2, 5)), int(1));

        let mut p = BinomialPoly2::new(2, 0);
        p.set(2, 0, BigInt::one());
        assert_eq!(p.eval_exact(&int(4), &int(0)), int(6));

        let mut q = BinomialPoly2::new(1, 1);
        q.set(1, 1, BigInt::from(2));
        // brute-force term oracle: 2 * binom(3,1) * 5 = 30
        let expect: BigRational = binom_eval(&int(3), 1) * int(5) * int(2);
        assert_eq!(expect, int(30));
        assert_eq!(q.eval_exact(&int(3), &int(5)), int(30));
        assert_eq!(q.eval_int(&BigInt::from(3), &BigInt::from(5)), BigInt::from(30));
    }

    #[test]
    fn interval_eval_examples() {
        let prec = 96;
        let mut one = BinomialPoly2::new(0, 0);
        one.set(0, 0, BigInt::one());
        let v = one.eval_interval(&Interval::from_i64(3), &Interval::from_i64(9), prec);
        assert!(v.contains_rational(&int(1)));

        let mut y = BinomialPoly2::new(0, 1);
        y.set(0, 1, BigInt::one());
        let v = y.eval_interval(
            &Interval::from_i64(100),
            &Interval::new(crate::dyadic::Dyadic::from_i64(2), crate::dyadic::Dyadic::from_i64(3)),
            prec,
        );
        assert!(v.contains_rational(&int(2)) && v.contains_rational(&int(3)));

        let mut p = BinomialPoly2::new(2, 1);
        p.set(2, 1, BigInt::one());
        let v = p.eval_interval(
            &Interval::from_i64(4),
            &Interval::new(crate::dyadic::Dyadic::from_i64(1), crate::dyadic::Dyadic::from_i64(2)),
            prec,
        );
        // corners evaluated exactly
        for (x, y2, want) in [(4i64, 1i64, 6i64), (4, 2, 12)] {
            assert_eq!(p.eval_exact(&int(x), &int(y2)), int(want));
            assert!(v.contains_rational(&int(want)));
        }
    }

    #[test]
    fn monomial_display_conversion() {
        // n^2 = 2*binom(n,2) + binom(n,1)
        let mut p = BinomialPoly2::new(2, 0);
        p.set(2, 0, BigInt::from(2));
        p.set(1, 0, BigInt::one());
        let mono = p.to_monomial();
        assert_eq!(mono[0][0], int(0));
        assert_eq!(mono[1][0], int(0));
        assert_eq!(mono[2][0], int(1));
    }

    #[test]
    fn serde_schema_round_trip() {
        let mut p = BinomialPoly2::new(3, 2);
        p.set(0, 0, BigInt::from(-7));
        p.set(3, 2, "123456789012345678901234567890".parse().unwrap());
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"L\":3") && json.contains("\"M\":2"));
        assert!(json.contains("\"123456789012345678901234567890\""));
        let back: BinomialPoly2 = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn degree_params() {
        let p = DegreeParams::theorem1(5, 1).unwrap();
        assert_eq!(p.t, 12);
        assert_eq!(DegreeParams::theorem1(4, 1), Err(DegreeError::EvenL(4)));
        assert!(matches!(DegreeParams::theorem1(5, 4), Err(DegreeError::DegreeOrder { .. })));
        let q = DegreeParams::unconstrained(4, 6);
        assert_eq!(q.t, 35);
    }

    #[test]
    fn random_integer_points_are_integral() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let l = rng.gen_range(0..5u32);
            let m = rng.gen_range(0..4u32);
            let mut p = BinomialPoly2::new(l, m);
            for i in 0..=l {
                for j in 0..=m {
                    p.set(i, j, BigInt::from(rng.gen_range(-50i64..=50)));
                }
            }
            let n = rng.gen_range(0i64..40);
            let y = rng.gen_range(-30i64..30);
            let exact = p.eval_exact(&int(n), &int(y));
            assert!(exact.is_integer());
            assert_eq!(exact.to_integer(), p.eval_int(&BigInt::from(n), &BigInt::from(y)));
        }
    }

    proptest! {
        #[test]
        fn pascal_identity(num in -40i64..40, den in 1i64..12, i in 1usize..=10) {
            let z = rat(num, den);
            let zm1 = &z - int(1);
            let lhs = binom_eval(&z, i);
            let rhs = binom_eval(&zm1, i) + binom_eval(&zm1, i - 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn interval_contains_exact(
            xn in -60i64..60, xd in 1i64..10,
            yn in -60i64..60, yd in 1i64..10,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let l = rng.gen_range(0..4u32);
            let m = rng.gen_range(0..3u32);
            let mut p = BinomialPoly2::new(l, m);
            for i in 0..=l {
                for j in 0..=m {
                    p.set(i, j, BigInt::from(rng.gen_range(-9i64..=9)));
                }
            }
            let x = rat(xn, xd);
            let y = rat(yn, yd);
            let exact = p.eval_exact(&x, &y);
            let xi = Interval::from_rational(&x, 96);
            let yi = Interval::from_rational(&y, 96);
            let enc = p.eval_interval(&xi, &yi, 96);
            prop_assert!(enc.contains_rational(&exact));
        }
    }
}
