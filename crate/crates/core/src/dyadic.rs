//! Arbitrary-precision dyadic numbers `mant * 2^exp` with directed rounding.
//!
//! These are the endpoints of [`crate::interval::Interval`]. Every operation
//! that can lose information takes an explicit precision (mantissa bits) and a
//! rounding direction, and the rounded result is guaranteed to lie on the
//! requested side of the exact one.

use std::cmp::Ordering;

use num::bigint::{BigInt, Sign};
use num::{Integer, One, Signed, Zero};

/// Rounding direction for lossy operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundDir {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl RoundDir {
    pub fn flip(self) -> Self {
        match self {
            RoundDir::Down => RoundDir::Up,
            RoundDir::Up => RoundDir::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`, normalized so `mant` is odd or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Shift right rounding toward negative infinity (arithmetic shift).
fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    m >> k
}

/// Shift right rounding toward positive infinity.
fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -((-m) >> k)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant = &self.mant >> tz;
            self.exp = self.exp.checked_add(tz as i64).expect("exponent overflow");
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    /// Mantissa bit length.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent `g` with `2^(g-1) <= |self| < 2^g`. Only valid for nonzero values.
    pub fn mag_exp(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: RoundDir) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let m = match dir {
            RoundDir::Down => shr_floor(&self.mant, k),
            RoundDir::Up => shr_ceil(&self.mant, k),
        };
        Dyadic::new(m, self.exp.checked_add(k as i64).expect("exponent overflow"))
    }

    /// Exact sum. The caller must ensure the exponent gap is reasonable;
    /// interval code goes through `add_round` which guards against huge gaps.
    pub fn add_exact(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo_exp, hi, lo) = if self.exp >= other.exp {
            (other.exp, self, other)
        } else {
            (self.exp, other, self)
        };
        let shift = (hi.exp - lo_exp) as u64;
        Dyadic::new((&hi.mant << shift) + &lo.mant, lo_exp)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Self {
        self.add_exact(&other.neg())
    }

    /// Rounded sum; safe for operands of wildly different magnitudes.
    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: RoundDir) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.mag_exp() >= other.mag_exp() {
            (self, other)
        } else {
            (other, self)
        };
        let gap = big.mag_exp() - small.mag_exp();
        if gap > prec as i64 + 8 {
            // The small operand is below one ulp of the rounded result; absorb
            // it into a directed nudge.
            let r = big.round(prec + 2, dir);
            let need_nudge = match dir {
                RoundDir::Down => small.sign() < 0,
                RoundDir::Up => small.sign() > 0,
            };
            if !need_nudge {
                return r;
            }
            let nudge_exp = big.mag_exp() - prec as i64 - 4;
            debug_assert!(nudge_exp > small.mag_exp());
            let nudge = Dyadic::new(BigInt::one(), nudge_exp);
            let out = match dir {
                RoundDir::Down => r.sub_exact(&nudge),
                RoundDir::Up => r.add_exact(&nudge),
            };
            return out.round(prec + 2, dir);
        }
        self.add_exact(other).round(prec, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: u32, dir: RoundDir) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        let m = &self.mant * &other.mant;
        let e = self.exp.checked_add(other.exp).expect("exponent overflow");
        Dyadic::new(m, e).round(prec, dir)
    }

    /// Directed-rounded quotient with roughly `prec + 2` result bits.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: RoundDir) -> Self {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let extra = prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = extra.max(0) as u64;
        let num = &self.mant << shift;
        let q = match dir {
            RoundDir::Down => num.div_floor(&other.mant),
            RoundDir::Up => num.div_ceil(&other.mant),
        };
        let e = self
            .exp
            .checked_sub(other.exp)
            .and_then(|e| e.checked_sub(shift as i64))
            .expect("exponent overflow");
        Dyadic::new(q, e)
    }

    /// Multiply by `2^k` (exact).
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp.checked_add(k).expect("exponent overflow") }
    }

    pub fn cmp_dyadic(&self, other: &Dyadic) -> Ordering {
        let ss = self.sign();
        let os = other.sign();
        if ss != os {
            return ss.cmp(&os);
        }
        if ss == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: disjoint magnitude ranges decide without shifting.
        let sm = self.mag_exp();
        let om = other.mag_exp();
        if sm != om {
            let mag_ord = sm.cmp(&om);
            return if ss > 0 { mag_ord } else { mag_ord.reverse() };
        }
        // Equal magnitude exponent implies |exp difference| <= bit-length difference.
        if self.exp >= other.exp {
            let shift = (self.exp - other.exp) as u64;
            (&self.mant << shift).cmp(&other.mant)
        } else {
            let shift = (other.exp - self.exp) as u64;
            self.mant.cmp(&(&other.mant << shift))
        }
    }

    pub fn min_of(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a.cmp_dyadic(b) == Ordering::Greater { b.clone() } else { a.clone() }
    }

    pub fn max_of(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a.cmp_dyadic(b) == Ordering::Less { b.clone() } else { a.clone() }
    }

    /// Exact conversion to a rational. Intended for tests and moderate exponents.
    pub fn to_rational(&self) -> num::BigRational {
        if self.exp >= 0 {
            num::BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            num::BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn from_rational_round(q: &num::BigRational, prec: u32, dir: RoundDir) -> Self {
        let num = Dyadic::from_bigint(q.numer());
        let den = Dyadic::from_bigint(q.denom());
        num.div_round(&den, prec, dir)
    }

    /// Decimal scientific-notation string with `digits` significant digits,
    /// rounded in direction `dir` so the printed value stays a valid bound.
    pub fn to_decimal_string(&self, digits: u32, dir: RoundDir) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1) as i64;
        // First guess for the decimal magnitude, then correct below.
        let mut d10 = ((self.mag_exp() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let k = d10 - digits + 1;
            let mut num = self.mant.clone();
            let mut den = BigInt::one();
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            if k >= 0 {
                den *= BigInt::from(10u32).pow(k as u32);
            } else {
                num *= BigInt::from(10u32).pow((-k) as u32);
            }
            let q = match dir {
                RoundDir::Down => num.div_floor(&den),
                RoundDir::Up => num.div_ceil(&den),
            };
            let qa = q.abs();
            let ndig = if qa.is_zero() { 1 } else { qa.to_string().len() as i64 };
            if ndig > digits {
                d10 += ndig - digits;
                continue;
            }
            if ndig < digits && !qa.is_zero() {
                d10 -= digits - ndig;
                continue;
            }
            let s = qa.to_string();
            let sign = if q.sign() == Sign::Minus { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            let tail = tail.trim_end_matches('0');
            return if tail.is_empty() {
                format!("{sign}{head}e{d10}")
            } else {
                format!("{sign}{head}.{tail}e{d10}")
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn dy(n: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), e)
    }

    #[test]
    fn bigint_shift_is_floor() {
        assert_eq!(shr_floor(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(shr_ceil(&BigInt::from(-5), 1), BigInt::from(-2));
        assert_eq!(shr_floor(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(shr_ceil(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn round_directions_bracket_value() {
        let x = dy(0b101101, 0); // 45
        let down = x.round(3, RoundDir::Down);
        let up = x.round(3, RoundDir::Up);
        assert!(down.cmp_dyadic(&x) != Ordering::Greater);
        assert!(up.cmp_dyadic(&x) != Ordering::Less);
        assert_eq!(down.to_rational(), BigRational::from_integer(40.into()));
        assert_eq!(up.to_rational(), BigRational::from_integer(48.into()));

        let y = x.neg();
        let down = y.round(3, RoundDir::Down);
        let up = y.round(3, RoundDir::Up);
        assert_eq!(down.to_rational(), BigRational::from_integer((-48).into()));
        assert_eq!(up.to_rational(), BigRational::from_integer((-40).into()));
    }

    #[test]
    fn add_round_with_huge_gap_keeps_direction() {
        let big = dy(1, 0);
        let tiny_neg = dy(-1, -1000);
        let down = big.add_round(&tiny_neg, 64, RoundDir::Down);
        let up = big.add_round(&tiny_neg, 64, RoundDir::Up);
        // exact value is 1 - 2^-1000
        assert!(down.to_rational() < BigRational::one());
        assert!(up.to_rational() >= BigRational::one() - BigRational::new(1.into(), BigInt::one() << 999));
        // down stays within a couple of ulps
        let dist = BigRational::one() - down.to_rational();
        assert!(dist < BigRational::new(1.into(), BigInt::one() << 60));
    }

    #[test]
    fn div_round_brackets_quotient() {
        let a = dy(1, 0);
        let b = dy(3, 0);
        let lo = a.div_round(&b, 64, RoundDir::Down).to_rational();
        let hi = a.div_round(&b, 64, RoundDir::Up).to_rational();
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo <= third && third <= hi);
        assert!(&hi - &lo < BigRational::new(1.into(), BigInt::one() << 60));
    }

    #[test]
    fn cmp_across_magnitudes() {
        assert_eq!(dy(3, 10).cmp_dyadic(&dy(1, 0)), Ordering::Greater);
        assert_eq!(dy(-3, 10).cmp_dyadic(&dy(1, 0)), Ordering::Less);
        assert_eq!(dy(-3, 10).cmp_dyadic(&dy(-1, 0)), Ordering::Less);
        assert_eq!(dy(1, 2).cmp_dyadic(&dy(4, 0)), Ordering::Equal);
        assert_eq!(dy(5, 0).cmp_dyadic(&dy(3, 1)), Ordering::Less);
    }

    #[test]
    fn decimal_strings_are_directed() {
        let third_down = dy(1, 0).div_round(&dy(3, 0), 80, RoundDir::Down);
        let s = third_down.to_decimal_string(10, RoundDir::Down);
        assert!(s.starts_with("3.33333333") && s.ends_with("e-1"), "{s}");
        let x = dy(45, 0);
        assert_eq!(x.to_decimal_string(2, RoundDir::Down), "4.5e1");
        assert_eq!(x.to_decimal_string(1, RoundDir::Down), "4e1");
        assert_eq!(x.to_decimal_string(1, RoundDir::Up), "5e1");
        assert_eq!(dy(-45, 0).to_decimal_string(1, RoundDir::Down), "-5e1");
        assert_eq!(Dyadic::zero().to_decimal_string(5, RoundDir::Up), "0");
    }
}
