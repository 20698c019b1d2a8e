//! Outward-rounded real interval arithmetic over dyadic endpoints.
//!
//! Every operation returns an interval that contains the exact result set of
//! the operation applied to the inputs, so chains of these operations yield
//! certified enclosures. Transcendental functions (`exp`, `ln`, powers with
//! real exponent) are evaluated by truncated series with explicit remainder
//! bounds folded into the enclosure; the working precision is a parameter.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num::bigint::BigInt;
use num::{BigRational, One};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, RoundDir};

/// Working precision in mantissa bits for interval endpoints.
pub const DEFAULT_PREC: u32 = 128;

/// Hard ceiling for precision escalation.
pub const MAX_PREC: u32 = 2048;

/// Significant digits used when rendering endpoints as decimal strings.
const DISPLAY_DIGITS: u32 = 40;

/// Factorials up to this argument are computed as exact integers; larger ones
/// fall back to two-sided Stirling-type bounds.
const FACTORIAL_EXACT_MAX: u64 = 10_000;

/// A closed interval `[lo, hi]` of dyadic reals with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_dyadic(&hi) != Ordering::Greater, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Interval::point(Dyadic::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Interval::point(Dyadic::from_i64(n))
    }

    pub fn from_u64(n: u64) -> Self {
        Interval::point(Dyadic::from_bigint(&BigInt::from(n)))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Interval::point(Dyadic::from_bigint(n))
    }

    /// Outward-rounded enclosure of an exact rational.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval::new(
            Dyadic::from_rational_round(q, prec, RoundDir::Down),
            Dyadic::from_rational_round(q, prec, RoundDir::Up),
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn round_out(&self, prec: u32) -> Self {
        Interval::new(self.lo.round(prec, RoundDir::Down), self.hi.round(prec, RoundDir::Up))
    }

    pub fn neg(&self) -> Self {
        Interval::new(self.hi.neg(), self.lo.neg())
    }

    pub fn abs(&self) -> Self {
        if self.lo.sign() >= 0 {
            self.clone()
        } else if self.hi.sign() <= 0 {
            self.neg()
        } else {
            Interval::new(Dyadic::zero(), Dyadic::max_of(&self.lo.neg(), &self.hi))
        }
    }

    pub fn add(&self, other: &Interval, prec: u32) -> Self {
        Interval::new(
            self.lo.add_round(&other.lo, prec, RoundDir::Down),
            self.hi.add_round(&other.hi, prec, RoundDir::Up),
        )
    }

    pub fn sub(&self, other: &Interval, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Interval, prec: u32) -> Self {
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in cands {
            let down = a.mul_round(b, prec, RoundDir::Down);
            let up = a.mul_round(b, prec, RoundDir::Up);
            lo = Some(match lo {
                None => down,
                Some(l) => Dyadic::min_of(&l, &down),
            });
            hi = Some(match hi {
                None => up,
                Some(h) => Dyadic::max_of(&h, &up),
            });
        }
        Interval::new(lo.unwrap(), hi.unwrap())
    }

    /// Quotient; panics if `other` contains zero (all call sites divide by
    /// quantities proved positive or negative beforehand).
    pub fn div(&self, other: &Interval, prec: u32) -> Self {
        assert!(
            other.lo.sign() > 0 || other.hi.sign() < 0,
            "interval division by a range containing zero"
        );
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in cands {
            let down = a.div_round(b, prec, RoundDir::Down);
            let up = a.div_round(b, prec, RoundDir::Up);
            lo = Some(match lo {
                None => down,
                Some(l) => Dyadic::min_of(&l, &down),
            });
            hi = Some(match hi {
                None => up,
                Some(h) => Dyadic::max_of(&h, &up),
            });
        }
        Interval::new(lo.unwrap(), hi.unwrap())
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Interval::new(self.lo.mul_pow2(k), self.hi.mul_pow2(k))
    }

    /// Convex hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Self {
        Interval::new(Dyadic::min_of(&self.lo, &other.lo), Dyadic::max_of(&self.hi, &other.hi))
    }

    pub fn max(&self, other: &Interval) -> Self {
        Interval::new(Dyadic::max_of(&self.lo, &other.lo), Dyadic::max_of(&self.hi, &other.hi))
    }

    pub fn min(&self, other: &Interval) -> Self {
        Interval::new(Dyadic::min_of(&self.lo, &other.lo), Dyadic::min_of(&self.hi, &other.hi))
    }

    pub fn clamp_nonneg(&self) -> Self {
        if self.lo.sign() >= 0 {
            self.clone()
        } else {
            Interval::new(Dyadic::zero(), Dyadic::max_of(&self.hi, &Dyadic::zero()))
        }
    }

    /// Integer power by repeated squaring, with sign analysis for ranges
    /// straddling zero.
    pub fn pow_int(&self, n: u64, prec: u32) -> Self {
        if n == 0 {
            return Interval::one();
        }
        if self.lo.sign() >= 0 {
            return Interval::new(
                pow_dir(&self.lo, n, prec, RoundDir::Down),
                pow_dir(&self.hi, n, prec, RoundDir::Up),
            );
        }
        if self.hi.sign() <= 0 {
            let p = self.neg().pow_int(n, prec);
            return if n % 2 == 0 { p } else { p.neg() };
        }
        // Straddles zero.
        let a = self.lo.neg(); // > 0
        let b = self.hi.clone();
        let top = Dyadic::max_of(&a, &b);
        let hi = pow_dir(&top, n, prec, RoundDir::Up);
        if n % 2 == 0 {
            Interval::new(Dyadic::zero(), hi)
        } else {
            let lo = pow_dir(&a, n, prec, RoundDir::Up).neg();
            Interval::new(lo, hi)
        }
    }

    /// `e^self`, outward rounded (monotone in the endpoints).
    pub fn exp(&self, prec: u32) -> Self {
        let lo = exp_point(&self.lo, prec);
        let hi = exp_point(&self.hi, prec);
        Interval::new(lo.lo, hi.hi)
    }

    /// Natural logarithm; requires a strictly positive lower endpoint.
    pub fn ln(&self, prec: u32) -> Self {
        assert!(self.lo.sign() > 0, "ln of interval with nonpositive lower bound");
        let lo = ln_point(&self.lo, prec);
        let hi = ln_point(&self.hi, prec);
        Interval::new(lo.lo, hi.hi)
    }

    /// Square root; requires a nonnegative lower endpoint.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(self.lo.sign() >= 0, "sqrt of interval with negative lower bound");
        Interval::new(
            sqrt_dir(&self.lo, prec, RoundDir::Down),
            sqrt_dir(&self.hi, prec, RoundDir::Up),
        )
    }

    /// `self^expo` for a strictly positive base, via `exp(expo * ln self)`.
    pub fn pow(&self, expo: &Interval, prec: u32) -> Self {
        assert!(self.lo.sign() > 0, "real power of nonpositive base");
        self.ln(prec).mul(expo, prec).exp(prec)
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo.cmp_dyadic(&other.lo) != Ordering::Greater
            && self.hi.cmp_dyadic(&other.hi) != Ordering::Less
    }

    /// True iff every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi.cmp_dyadic(&other.lo) == Ordering::Less
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi.cmp_dyadic(&other.lo) != Ordering::Greater
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        other.certainly_lt(self)
    }

    /// Upper bound on the width, as a rational (test/diagnostic helper).
    pub fn width(&self) -> BigRational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn to_decimal_pair(&self) -> (String, String) {
        (
            self.lo.to_decimal_string(DISPLAY_DIGITS, RoundDir::Down),
            self.hi.to_decimal_string(DISPLAY_DIGITS, RoundDir::Up),
        )
    }
}

fn pow_dir(base: &Dyadic, n: u64, prec: u32, dir: RoundDir) -> Dyadic {
    debug_assert!(base.sign() >= 0);
    let mut result = Dyadic::one();
    let mut sq = base.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            result = result.mul_round(&sq, prec + 8, dir);
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        sq = sq.mul_round(&sq, prec + 8, dir);
    }
    result
}

/// Enclosure of `e^x` at a dyadic point.
///
/// Reduces the argument so `|r| <= 1/4`, sums the Taylor series with a tail
/// bound, then squares the result back up.
fn exp_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let s = (x.mag_exp() + 2).max(0) as u32;
    let w = prec + 2 * s + 16;
    let r = Interval::point(x.mul_pow2(-(s as i64)));
    debug_assert!(r.hi.is_zero() || r.hi.abs().mag_exp() <= -2);

    let mut sum = Interval::one();
    let mut term = Interval::one();
    let mut k: u64 = 1;
    let tiny = Dyadic::new(BigInt::one(), -(w as i64) - 2);
    loop {
        term = term.mul(&r, w).div(&Interval::from_u64(k), w);
        sum = sum.add(&term, w);
        let mag = term.abs().hi;
        if mag.is_zero() || mag.cmp_dyadic(&tiny) == Ordering::Less {
            break;
        }
        k += 1;
        assert!(k < 10_000, "exp series failed to converge");
    }
    // Remaining tail is dominated by a geometric series with ratio <= 1/4.
    let tail = Interval::new(tiny.neg(), tiny.clone());
    sum = sum.add(&tail, w);

    let mut y = sum;
    for _ in 0..s {
        y = y.mul(&y, w);
    }
    y.round_out(prec)
}

/// Enclosure of `ln x` at a strictly positive dyadic point.
///
/// Writes `x = u * 2^k` with `u` in `[1,2)` and uses the atanh series for
/// `ln u` plus a cached enclosure of `ln 2`.
fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.sign() > 0);
    let w = prec + 16;
    let k = x.mag_exp() - 1;
    let u = x.mul_pow2(-k); // in [1, 2)
    debug_assert!(u.cmp_dyadic(&Dyadic::one()) != Ordering::Less);

    let one = Interval::one();
    let ui = Interval::point(u);
    let t = ui.sub(&one, w).div(&ui.add(&one, w), w); // in [0, 1/3)
    let ln_u = atanh_series(&t, w).mul_pow2(1);

    let ln2 = ln2_enclosure(w);
    let scaled = ln2.mul(&Interval::from_i64(k), w);
    ln_u.add(&scaled, w).round_out(prec)
}

/// Series for atanh(t) valid on |t| <= 1/3, with tail folded in.
fn atanh_series(t: &Interval, w: u32) -> Interval {
    let tsq = t.mul(t, w);
    let mut sum = t.clone();
    let mut pow = t.clone();
    let mut j: u64 = 1;
    let tiny = Dyadic::new(BigInt::one(), -(w as i64) - 2);
    loop {
        pow = pow.mul(&tsq, w);
        let term = pow.div(&Interval::from_u64(2 * j + 1), w);
        sum = sum.add(&term, w);
        let mag = term.abs().hi;
        if mag.is_zero() || mag.cmp_dyadic(&tiny) == Ordering::Less {
            break;
        }
        j += 1;
        assert!(j < 100_000, "atanh series failed to converge");
    }
    // Tail ratio is at most t^2 <= 1/9, so the tail is < 2 * last threshold.
    let tail_mag = tiny.mul_pow2(1);
    sum.add(&Interval::new(tail_mag.neg(), tail_mag), w)
}

static LN2_CACHE: Mutex<Option<HashMap<u32, Interval>>> = Mutex::new(None);

/// Cached enclosure of ln 2 = 2 atanh(1/3).
pub fn ln2_enclosure(prec: u32) -> Interval {
    let mut guard = LN2_CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    if let Some(v) = map.get(&prec) {
        return v.clone();
    }
    let w = prec + 8;
    let third = Interval::one().div(&Interval::from_i64(3), w);
    let v = atanh_series(&third, w).mul_pow2(1).round_out(prec);
    map.insert(prec, v.clone());
    v
}

fn sqrt_dir(x: &Dyadic, prec: u32, dir: RoundDir) -> Dyadic {
    debug_assert!(x.sign() >= 0);
    if x.is_zero() {
        return Dyadic::zero();
    }
    // Scale to at least 2*prec+2 bits with an even exponent.
    let mut shift = (2 * prec as i64 + 4 - x.bits() as i64).max(0);
    if (x.exp() - shift) % 2 != 0 {
        shift += 1;
    }
    let m = x.mant() << shift as u64;
    let e = x.exp() - shift;
    let root = m.sqrt();
    let exact = &root * &root == m;
    let root = match dir {
        RoundDir::Down => root,
        RoundDir::Up => {
            if exact {
                root
            } else {
                root + BigInt::one()
            }
        }
    };
    Dyadic::new(root, e / 2)
}

static FACTORIAL_CACHE: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// Exact factorial for moderate arguments, via an incrementally grown table.
pub fn factorial_exact(n: u64) -> BigInt {
    assert!(n <= FACTORIAL_EXACT_MAX, "factorial argument too large for exact path");
    let mut cache = FACTORIAL_CACHE.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while (cache.len() as u64) <= n {
        let k = cache.len() as u64;
        let next = cache.last().unwrap() * BigInt::from(k);
        cache.push(next);
    }
    cache[n as usize].clone()
}

/// Enclosure of `n!`: exact below `FACTORIAL_EXACT_MAX`, otherwise Stirling-type
/// integral bounds `n ln n - n + 1 <= ln n! <= (n+1) ln(n+1) - n`.
pub fn factorial(n: u64, prec: u32) -> Interval {
    if n <= FACTORIAL_EXACT_MAX {
        return Interval::from_bigint(&factorial_exact(n));
    }
    let w = prec + 16;
    let nn = Interval::from_u64(n);
    let n1 = Interval::from_u64(n + 1);
    let lo = nn
        .mul(&nn.ln(w), w)
        .sub(&nn, w)
        .add(&Interval::one(), w);
    let hi = n1.mul(&n1.ln(w), w).sub(&nn, w);
    Interval::new(lo.exp(prec).lo().clone(), hi.exp(prec).hi().clone())
}

/// Enclosure of `e = exp(1)`.
pub fn euler_e(prec: u32) -> Interval {
    Interval::one().exp(prec)
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.to_decimal_pair();
        let mut s = serializer.serialize_struct("Interval", 2)?;
        s.serialize_field("lo", &lo)?;
        s.serialize_field("hi", &hi)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let lo = parse_decimal(&raw.lo).ok_or_else(|| serde::de::Error::custom("bad lo"))?;
        let hi = parse_decimal(&raw.hi).ok_or_else(|| serde::de::Error::custom("bad hi"))?;
        Ok(Interval::new(
            Dyadic::from_rational_round(&lo, 192, RoundDir::Down),
            Dyadic::from_rational_round(&hi, 192, RoundDir::Up),
        ))
    }
}

/// Parse decimal scientific notation ("-1.25e-3", "42") as an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant_str, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant_str.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant_str, ""),
    };
    if frac_part.contains(['+', '-']) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        BigRational::from_integer(num * ten.pow(scale as u32))
    } else {
        BigRational::new(num, ten.pow((-scale) as u32))
    })
}
