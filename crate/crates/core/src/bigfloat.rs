//! Binary floating point with an explicit mantissa precision.
//!
//! A value is `mant * 2^exp` with `|mant| < 2^prec`, stored with trailing
//! zero bits stripped so each value has one representation. Every arithmetic
//! operation rounds to nearest (ties to even) at the larger of the operand
//! precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn pow10(e: u64) -> BigInt {
    num_traits::pow::pow(BigInt::from(10u32), e as usize)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::round(v.clone(), 0, prec)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::div_parts(q.numer(), 0, q.denom(), 0, prec)
    }

    /// Exactly `2^k`.
    pub fn pow2(k: i64, prec: u32) -> Self {
        BigFloat {
            mant: BigInt::one(),
            exp: k,
            prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::round(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            ..self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn round(mant: BigInt, exp: i64, prec: u32) -> Self {
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mut mag) = mant.into_parts();
        let mut exp = exp;
        let bits = mag.bits();
        if bits > u64::from(prec) {
            let shift = bits - u64::from(prec);
            let half = mag.bit(shift - 1);
            let sticky = shift >= 2 && mag.trailing_zeros().unwrap_or(0) < shift - 1;
            mag >>= shift;
            exp += shift as i64;
            if half && (sticky || mag.bit(0)) {
                mag += 1u32;
                if mag.bits() > u64::from(prec) {
                    mag >>= 1;
                    exp += 1;
                }
            }
        }
        let tz = mag.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mag >>= tz;
            exp += tz as i64;
        }
        BigFloat {
            mant: BigInt::from_biguint(sign, mag),
            exp,
            prec,
        }
    }

    fn div_parts(a: &BigInt, ea: i64, b: &BigInt, eb: i64, prec: u32) -> Self {
        assert!(!b.is_zero(), "BigFloat division by zero");
        if a.is_zero() {
            return Self::zero(prec);
        }
        let sign = if a.sign() == b.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (ma, mb) = (a.magnitude(), b.magnitude());
        let shift = (i64::from(prec) + 2 + mb.bits() as i64 - ma.bits() as i64).max(0);
        let (q, r) = (ma << shift as usize).div_rem(mb);
        let q: BigUint = (q << 1usize) | BigUint::from(u8::from(!r.is_zero()));
        Self::round(BigInt::from_biguint(sign, q), ea - eb - shift - 1, prec)
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.prec.max(other.prec);
        let b_mant = if negate_other {
            -&other.mant
        } else {
            other.mant.clone()
        };
        if other.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return Self::round(b_mant, other.exp, prec);
        }
        let gap = self.top() - other.top();
        if gap > i64::from(prec) + 2 {
            return self.with_precision(prec);
        }
        if -gap > i64::from(prec) + 2 {
            return Self::round(b_mant, other.exp, prec);
        }
        let e = self.exp.min(other.exp);
        let sum = (&self.mant << (self.exp - e) as usize) + (b_mant << (other.exp - e) as usize);
        Self::round(sum, e, prec)
    }

    /// Integer power by repeated squaring with guard bits.
    pub fn powi(&self, n: i64) -> Self {
        let prec = self.prec;
        let guard = 2 * (64 - n.unsigned_abs().leading_zeros()) + 8;
        let work = prec + guard;
        let mut base = self.with_precision(work);
        let mut acc = BigFloat::one(work);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc = &BigFloat::one(work) / &acc;
        }
        acc.with_precision(prec)
    }

    /// `log2 |x|` as an `f64` estimate; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top: BigUint = self.mant.magnitude() >> (bits - keep) as usize;
        let lead = top.iter_u64_digits().next().unwrap_or(0) as f64;
        lead.log2() + (self.exp + (bits - keep) as i64) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * self.log2_abs().exp2()
    }

    /// Decimal scientific notation with `digits` significant digits,
    /// rounded to nearest.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0e0".to_string();
        }
        let digits = digits.max(1);
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let magnitude = self.mant.magnitude();
        for _ in 0..8 {
            let p = digits as i64 - 1 - e10;
            let mut num = BigInt::from(magnitude.clone());
            let mut den = BigInt::one();
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            if p >= 0 {
                num *= pow10(p as u64);
            } else {
                den *= pow10((-p) as u64);
            }
            let (q, r) = num.div_rem(&den);
            let rounded = if (r << 1usize) >= den { q + 1 } else { q };
            let text = rounded.to_string();
            match text.len().cmp(&digits) {
                Ordering::Greater => e10 += 1,
                Ordering::Less => e10 -= 1,
                Ordering::Equal => {
                    let sign = if self.is_negative() { "-" } else { "" };
                    return if digits == 1 {
                        format!("{sign}{text}e{e10}")
                    } else {
                        format!("{sign}{}.{}e{e10}", &text[..1], &text[1..])
                    };
                }
            }
        }
        unreachable!("decimal exponent search did not settle")
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_scientific(digits))
    }
}

impl<'a> Add<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::round(
            &self.mant * &rhs.mant,
            self.exp + rhs.exp,
            self.prec.max(rhs.prec),
        )
    }
}

impl<'a> Div<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::div_parts(
            &self.mant,
            self.exp,
            &rhs.mant,
            rhs.exp,
            self.prec.max(rhs.prec),
        )
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat { (&self).$m(rhs) }
        }
        impl<'a> $tr<BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            ..self
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    const P: u32 = 200;

    fn bf(p: i64, q: i64) -> BigFloat {
        BigFloat::from_rational(&rat(p, q), P)
    }

    /// Exact rational value of a float, for checking rounding.
    fn exact(x: &BigFloat) -> Rational {
        let m = Rational::from_integer(x.mant.clone());
        if x.exp >= 0 {
            m * Rational::from_integer(BigInt::one() << x.exp as usize)
        } else {
            m / Rational::from_integer(BigInt::one() << (-x.exp) as usize)
        }
    }

    fn ulp(x: &BigFloat) -> Rational {
        let e = x.top() - i64::from(x.prec);
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            rat(1, 1) / Rational::from_integer(BigInt::one() << (-e) as usize)
        }
    }

    #[test]
    fn small_integers_are_exact() {
        assert_eq!(exact(&BigFloat::from_i64(-12, 8)), int(-12));
        assert_eq!(exact(&(bf(3, 1) * bf(5, 1))), int(15));
        assert_eq!(exact(&(bf(1, 2) + bf(1, 4))), rat(3, 4));
        assert_eq!(exact(&BigFloat::pow2(-3, 10)), rat(1, 8));
    }

    #[test]
    fn rounding_ties_to_even() {
        // 9 = 1001b rounded to 3 bits is a tie between 8 and 10 -> 8 (even mantissa 100b)
        assert_eq!(exact(&BigFloat::from_i64(9, 3)), int(8));
        // 11 = 1011b -> tie between 10 and 12 -> 12 (110b)
        assert_eq!(exact(&BigFloat::from_i64(11, 3)), int(12));
        assert_eq!(exact(&BigFloat::from_i64(13, 3)), int(12));
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(bf(1, 3).to_scientific(5), "3.3333e-1");
        assert_eq!(bf(-2, 3).to_scientific(3), "-6.67e-1");
        assert_eq!(bf(12345, 1).to_scientific(3), "1.23e4");
        assert_eq!(bf(99999, 1).to_scientific(3), "1.00e5");
        assert_eq!(BigFloat::zero(P).to_scientific(4), "0e0");
        assert_eq!(bf(7, 1).to_scientific(1), "7e0");
    }

    #[test]
    fn comparisons() {
        assert!(bf(1, 3) < bf(1, 2));
        assert!(bf(-1, 2) < bf(1, 3));
        assert!(bf(-1, 2) < bf(-1, 3));
        assert_eq!(bf(2, 4), bf(1, 2));
        assert!(BigFloat::pow2(-500, P) > BigFloat::zero(P));
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let one = BigFloat::one(P);
        let tiny = BigFloat::pow2(-1000, P);
        assert_eq!(&one + &tiny, one);
        assert_eq!(&tiny + &one, one);
        assert_eq!(exact(&(&one - &one)), int(0));
    }

    #[test]
    fn powers() {
        assert_eq!(exact(&bf(3, 1).powi(5)), int(243));
        assert_eq!(exact(&bf(2, 1).powi(-3)), rat(1, 8));
        // The input is already rounded, so measure against its exact power.
        let base = bf(1, 3);
        let third = base.powi(40);
        let truth = num_traits::pow::pow(exact(&base), 40);
        let err = (exact(&third) - &truth).abs();
        assert!(err <= ulp(&third));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-1000i64..=1000, 1i64..=997).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn conversion_is_correctly_rounded(q in small()) {
            let x = BigFloat::from_rational(&q, P);
            let err = (exact(&x) - &q).abs();
            prop_assert!(err * int(2) <= ulp(&x));
        }

        #[test]
        fn arithmetic_is_faithful(a in small(), b in small()) {
            let (x, y) = (BigFloat::from_rational(&a, P), BigFloat::from_rational(&b, P));
            let (ea, eb) = (exact(&x), exact(&y));
            let sum = &x + &y;
            prop_assert!((exact(&sum) - (&ea + &eb)).abs() * int(2) <= ulp(&sum));
            let prod = &x * &y;
            prop_assert!((exact(&prod) - (&ea * &eb)).abs() * int(2) <= ulp(&prod));
            if !eb.is_zero() {
                let quo = &x / &y;
                prop_assert!((exact(&quo) - (&ea / &eb)).abs() * int(2) <= ulp(&quo));
            }
        }

        #[test]
        fn order_matches_rationals(a in small(), b in small()) {
            let (x, y) = (BigFloat::from_rational(&a, P), BigFloat::from_rational(&b, P));
            if a != b {
                prop_assert_eq!(x < y, a < b);
            }
        }
    }
}
