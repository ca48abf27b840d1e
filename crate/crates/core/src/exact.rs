//! Exact rational substrate and the factorial-type products used by every
//! family in the crate.
//!
//! All values are `num_rational::BigRational`, which keeps numerator and
//! denominator in lowest terms with a positive denominator after every
//! operation, so structural equality is mathematical equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `p / q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Generalized factorial `(z|alpha)_n = z (z - alpha) ... (z - (n-1) alpha)`.
pub fn gen_factorial(z: &Rational, alpha: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = z.clone();
    for _ in 0..n {
        acc *= &factor;
        factor -= alpha;
    }
    acc
}

/// Rising factorial `<x>_n = x (x + 1) ... (x + n - 1)`.
pub fn rising_factorial(x: &Rational, n: usize) -> Rational {
    gen_factorial(x, &int(-1), n)
}

/// Falling factorial `(x)_n = x (x - 1) ... (x - n + 1)`.
pub fn falling_factorial(x: &Rational, n: usize) -> Rational {
    gen_factorial(x, &int(1), n)
}

/// Generalized binomial coefficient `C(s, k) = (s)_k / k!` for rational `s`.
pub fn binomial_general(s: &Rational, k: usize) -> Rational {
    falling_factorial(s, k) / Rational::from_integer(factorial(k))
}

pub fn pow_int(x: &Rational, e: usize) -> Rational {
    num_traits::pow::pow(x.clone(), e)
}

/// Signed integer power; negative exponents require `x != 0`.
pub fn pow_signed(x: &Rational, e: i64) -> Result<Rational> {
    if e >= 0 {
        Ok(pow_int(x, e as usize))
    } else if x.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(pow_int(&x.recip(), e.unsigned_abs() as usize))
    }
}

/// Parses `p/q`, `-p/q`, `+p` or a plain integer. Decimal notation is
/// rejected so that exact commands never lose precision silently.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (num_str, den_str) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let value: BigInt = digits.parse().map_err(|_| err())?;
        Ok(if s.starts_with('-') { -value } else { value })
    };
    let num = parse_int(num_str)?;
    let den = match den_str {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Exact `p/q` (or `p` for integers) rendering; inverse of [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gen_factorial_examples() {
        assert_eq!(gen_factorial(&rat(7, 3), &rat(-5, 2), 0), int(1));
        assert_eq!(gen_factorial(&int(5), &int(2), 3), int(15));
        assert_eq!(gen_factorial(&int(4), &int(1), 2), int(12));
        assert_eq!(
            gen_factorial(&int(4), &int(1), 2),
            falling_factorial(&int(4), 2)
        );
    }

    #[test]
    fn rising_and_falling_examples() {
        assert_eq!(rising_factorial(&rat(1, 3), 0), int(1));
        assert_eq!(rising_factorial(&int(3), 2), int(12));
        assert_eq!(rising_factorial(&int(-2), 3), int(0));
        assert_eq!(-falling_factorial(&int(2), 3), int(0));
        assert_eq!(falling_factorial(&rat(9, 7), 0), int(1));
        assert_eq!(falling_factorial(&int(1), 2), int(0));
        assert_eq!(falling_factorial(&rat(7, 2), 2), rat(35, 4));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_general(&rat(-4, 3), 0), int(1));
        assert_eq!(binomial_general(&rat(5, 2), 2), rat(15, 8));
        let lhs = binomial_general(&int(5), 3) * int(6);
        assert_eq!(lhs, int(60));
        assert_eq!(lhs, rising_factorial(&int(3), 3));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational(" 2 / -4 ").unwrap(), rat(-1, 2));
        for bad in ["", "1.5", "1/0", "a/2", "--1", "1/2/3", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&int(1), &int(0)), Err(Error::DivisionByZero));
        assert_eq!(checked_div(&int(1), &int(4)).unwrap(), rat(1, 4));
        assert_eq!(pow_signed(&int(0), -1), Err(Error::DivisionByZero));
        assert_eq!(pow_signed(&rat(2, 3), -2).unwrap(), rat(9, 4));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn gen_factorial_step(z in small_rational(), a in small_rational(), n in 1usize..20) {
            let step = gen_factorial(&z, &a, n - 1) * (&z - &a * int(n as i64 - 1));
            prop_assert_eq!(gen_factorial(&z, &a, n), step);
        }

        #[test]
        fn negated_rising_is_signed_falling(x in small_rational(), n in 0usize..=20) {
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(rising_factorial(&-x.clone(), n), sign * falling_factorial(&x, n));
        }

        #[test]
        fn zero_increment_is_power(z in small_rational(), n in 0usize..=20) {
            prop_assert_eq!(gen_factorial(&z, &int(0), n), pow_int(&z, n));
        }

        #[test]
        fn results_are_normalized(z in small_rational(), a in small_rational(), n in 0usize..10) {
            let v = gen_factorial(&z, &a, n);
            let renormalized = Rational::new(v.numer().clone(), v.denom().clone());
            prop_assert!(v.denom().is_positive());
            prop_assert_eq!(renormalized, v);
        }

        #[test]
        fn format_parse_round_trip(q in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}
