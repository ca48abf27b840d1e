//! Mathematical constants and the elementary functions needed by the series
//! checks, computed from scratch at any precision.
//!
//! Constants are cached at the highest precision requested so far and rounded
//! down on demand; the cache is behind a mutex and its content does not
//! depend on request order beyond precision.

use std::sync::Mutex;

use crate::bigfloat::BigFloat;

const GUARD: u32 = 32;

struct Cached {
    slot: Mutex<Option<BigFloat>>,
    compute: fn(u32) -> BigFloat,
}

impl Cached {
    const fn new(compute: fn(u32) -> BigFloat) -> Self {
        Cached {
            slot: Mutex::new(None),
            compute,
        }
    }

    fn get(&self, prec: u32) -> BigFloat {
        let mut slot = self.slot.lock().unwrap_or_else(|e| e.into_inner());
        match slot.as_ref() {
            Some(v) if v.precision() >= prec + GUARD => v.with_precision(prec),
            _ => {
                let v = (self.compute)(prec + GUARD);
                let out = v.with_precision(prec);
                *slot = Some(v);
                out
            }
        }
    }
}

static PI: Cached = Cached::new(compute_pi);
static LN2: Cached = Cached::new(compute_ln2);
static GAMMA: Cached = Cached::new(compute_gamma);

pub(crate) fn pi_at(prec: u32) -> BigFloat {
    PI.get(prec)
}

pub(crate) fn ln2_at(prec: u32) -> BigFloat {
    LN2.get(prec)
}

pub(crate) fn gamma_at(prec: u32) -> BigFloat {
    GAMMA.get(prec)
}

/// `sum_k (sign)^k z^(2k+1)/(2k+1)` for `|z| < 1`: arctangent when
/// `alternate`, inverse hyperbolic tangent otherwise.
fn odd_series(z: &BigFloat, alternate: bool, prec: u32) -> BigFloat {
    let z2 = z * z;
    let mut power = z.with_precision(prec);
    let mut sum = power.clone();
    let stop = -(i64::from(prec) + 4) as f64;
    for k in 1.. {
        power = &power * &z2;
        if power.is_zero() || power.log2_abs() < stop + sum.log2_abs().min(0.0) {
            break;
        }
        let term = &power / &BigFloat::from_i64(2 * k + 1, prec);
        sum = if alternate && k % 2 == 1 {
            &sum - &term
        } else {
            &sum + &term
        };
    }
    sum
}

/// Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`.
fn compute_pi(prec: u32) -> BigFloat {
    let one = BigFloat::one(prec);
    let a = odd_series(&(&one / &BigFloat::from_i64(5, prec)), true, prec);
    let b = odd_series(&(&one / &BigFloat::from_i64(239, prec)), true, prec);
    (a.ldexp(4)) - (b.ldexp(2))
}

/// `log 2 = 2 atanh(1/3)`.
fn compute_ln2(prec: u32) -> BigFloat {
    let third = &BigFloat::one(prec) / &BigFloat::from_i64(3, prec);
    odd_series(&third, false, prec).ldexp(1)
}

/// Natural logarithm of a positive value, by binary reduction to `[1, 2)`
/// and `log m = 2 atanh((m - 1)/(m + 1))`.
pub(crate) fn ln_at(x: &BigFloat, prec: u32) -> BigFloat {
    assert!(
        !x.is_zero() && !x.is_negative(),
        "logarithm of a non-positive value"
    );
    let work = prec + GUARD;
    let e = x.log2_abs().floor() as i64;
    let mut m = x.with_precision(work).ldexp(-e);
    let mut e = e;
    let one = BigFloat::one(work);
    // log2_abs is an estimate; settle m into [1, 2) exactly.
    while m < one {
        m = m.ldexp(1);
        e -= 1;
    }
    while m >= BigFloat::from_i64(2, work) {
        m = m.ldexp(-1);
        e += 1;
    }
    let z = &(&m - &one) / &(&m + &one);
    let log_m = odd_series(&z, false, work).ldexp(1);
    let total = &log_m + &(&ln2_at(work) * &BigFloat::from_i64(e, work));
    total.with_precision(prec)
}

/// Exponential by halving to `|y| < 2^-8`, a Taylor sum, and squaring back.
/// Negative arguments are inverted to keep the relative error small.
pub(crate) fn exp_at(x: &BigFloat, prec: u32) -> BigFloat {
    if x.is_zero() {
        return BigFloat::one(prec);
    }
    let halvings = (x.log2_abs().ceil() as i64 + 8).max(0);
    let work = prec + GUARD + halvings as u32;
    let y = x.abs().with_precision(work).ldexp(-halvings);
    let mut term = BigFloat::one(work);
    let mut sum = term.clone();
    let stop = -(i64::from(work) + 4) as f64;
    for k in 1.. {
        term = &(&term * &y) / &BigFloat::from_i64(k, work);
        if term.is_zero() || term.log2_abs() < stop {
            break;
        }
        sum = &sum + &term;
    }
    for _ in 0..halvings {
        sum = &sum * &sum;
    }
    if x.is_negative() {
        sum = &BigFloat::one(work) / &sum;
    }
    sum.with_precision(prec)
}

/// Euler's constant by the Brent–McMillan formula
/// `gamma = U/V - log n`, `U = sum (n^k/k!)^2 H_k`, `V = sum (n^k/k!)^2`,
/// with error below `pi e^(-4n)`.
fn compute_gamma(prec: u32) -> BigFloat {
    let n = ((f64::from(prec) + 8.0) / (4.0 * std::f64::consts::LOG2_E)).ceil() as i64 + 1;
    let work = prec + GUARD;
    let n2 = BigFloat::from_i64(n * n, work);
    let log_n = ln_at(&BigFloat::from_i64(n, work), work);
    let mut a = -&log_n;
    let mut b = BigFloat::one(work);
    let mut u = a.clone();
    let mut v = b.clone();
    let stop = -(i64::from(work) + 8) as f64;
    for k in 1.. {
        let kf = BigFloat::from_i64(k, work);
        b = &(&b * &n2) / &(&kf * &kf);
        a = &(&(&(&a * &n2) / &kf) + &b) / &kf;
        u = &u + &a;
        v = &v + &b;
        if k > n && b.log2_abs() - v.log2_abs() < stop {
            break;
        }
    }
    &u / &v
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &BigFloat, b: &BigFloat, bits: i64) -> bool {
        let d = (a - b).abs();
        d.is_zero() || d.log2_abs() < -(bits as f64)
    }

    fn parse_digits(s: &str, prec: u32) -> BigFloat {
        let (int_part, frac) = s.split_once('.').unwrap();
        let digits: num_bigint::BigInt = format!("{int_part}{frac}").parse().unwrap();
        let den = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        BigFloat::from_rational(&crate::exact::Rational::new(digits, den), prec)
    }

    #[test]
    fn constants_match_known_digits() {
        let pi = parse_digits(
            "3.14159265358979323846264338327950288419716939937510582097494459",
            P,
        );
        let ln2 = parse_digits(
            "0.69314718055994530941723212145817656807550013436025525412068001",
            P,
        );
        let gamma = parse_digits(
            "0.57721566490153286060651209008240243104215933593992359880576723",
            P,
        );
        assert!(close(&pi_at(P), &pi, 200));
        assert!(close(&ln2_at(P), &ln2, 200));
        assert!(close(&gamma_at(P), &gamma, 200));
    }

    #[test]
    fn cache_serves_lower_precision() {
        let high = pi_at(512);
        let low = pi_at(128);
        assert_eq!(low.precision(), 128);
        assert!(close(&high, &low, 126));
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for (p, q) in [(1, 1), (-7, 3), (25, 2), (1, 1000), (-40, 1)] {
            let x = BigFloat::from_rational(&crate::exact::rat(p, q), P);
            let back = ln_at(&exp_at(&x, P), P);
            assert!(close(&back, &x, 240), "x = {p}/{q}");
        }
        let e = exp_at(&BigFloat::one(P), P);
        let e_digits = parse_digits(
            "2.71828182845904523536028747135266249775724709369995957496696763",
            P,
        );
        assert!(close(&e, &e_digits, 200));
        let ln1024 = ln_at(&BigFloat::from_i64(1024, P), P);
        assert!(close(
            &ln1024,
            &(&ln2_at(P) * &BigFloat::from_i64(10, P)),
            245
        ));
    }
}
