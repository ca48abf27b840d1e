//! Riemann and Hurwitz zeta at integer arguments and the digamma function,
//! by Euler–Maclaurin summation with an explicit remainder bound.

use std::sync::Mutex;

use num_traits::{One, Zero};

use super::constants::ln_at;
use super::EvalConfig;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exact::{binomial_general, int, Rational};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Exact `B_0..=B_m` (with `B_1 = -1/2`), cached and extended on demand via
/// `sum_{j<=m} C(m+1, j) B_j = 0`.
pub(crate) fn bernoulli_upto(m: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= m {
        let k = cache.len();
        let value = if k > 1 && k % 2 == 1 {
            Rational::zero()
        } else {
            let acc: Rational = cache
                .iter()
                .enumerate()
                .filter(|(_, b)| !b.is_zero())
                .map(|(j, b)| binomial_general(&int(k as i64 + 1), j) * b)
                .sum();
            -acc / int(k as i64 + 1)
        };
        cache.push(value);
    }
    cache[..=m].to_vec()
}

/// Euler–Maclaurin correction `sum_k B_2k/(2k)! (s)_(2k-1) X^(1-s-2k)` with
/// `q = X^-s`, stopped at the first term below `eps/4`. While
/// `s + 2k + 1 < 2 pi X` the terms decrease and the remainder is at most
/// twice the first omitted one.
fn em_correction(
    s: u32,
    x: &Rational,
    q: &BigFloat,
    eps_log2: f64,
    cfg: &EvalConfig,
) -> Result<BigFloat> {
    let prec = q.precision();
    let s_q = int(i64::from(s));
    let x2 = x * x;
    let mut sum = BigFloat::zero(prec);
    // (s)_(2k-1) / ((2k)! X^(2k-1)) for k = 1
    let mut weight = s_q.clone() / (int(2) * x);
    let mut k = 1usize;
    loop {
        let b = bernoulli_upto(2 * k);
        let term = &BigFloat::from_rational(&(&weight * &b[2 * k]), prec) * q;
        let size = term.log2_abs();
        if 2 * k + s as usize + 1 >= (2.0 * std::f64::consts::PI * x_to_f64(x)) as usize {
            return Err(Error::NonConvergence(k));
        }
        if size < eps_log2 - 2.0 || term.is_zero() {
            return Ok(sum);
        }
        sum = &sum + &term;
        if k >= cfg.max_terms {
            return Err(Error::NonConvergence(cfg.max_terms));
        }
        // advance (s)_(2k-1) -> (s)_(2k+1), (2k)! -> (2k+2)!, X^(2k-1) -> X^(2k+1)
        let a = int((2 * k) as i64) + &s_q - int(1);
        weight = weight * &a * (&a + int(1)) / (int(((2 * k + 1) * (2 * k + 2)) as i64) * &x2);
        k += 1;
    }
}

fn x_to_f64(x: &Rational) -> f64 {
    BigFloat::from_rational(x, 64).to_f64()
}

/// Hurwitz zeta `zeta(s, a) = sum_{j>=0} (j + a)^-s` for integer `s >= 2` and
/// rational `a > 0`, with relative accuracy about `2^-(precision + 64)`
/// before the final rounding.
pub fn hurwitz_zeta(s: u32, a: &Rational, cfg: &EvalConfig) -> Result<BigFloat> {
    Ok(hurwitz_at(s, a, cfg.working_bits(), cfg)?.with_precision(cfg.precision_bits))
}

pub(crate) fn hurwitz_at(s: u32, a: &Rational, prec: u32, cfg: &EvalConfig) -> Result<BigFloat> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta needs s >= 2, got {s}")));
    }
    if a <= &Rational::zero() {
        return Err(Error::Domain("Hurwitz zeta needs a > 0".into()));
    }
    let a_f = x_to_f64(a);
    // Absolute target relative to the leading term a^-s.
    let eps_log2 = -(f64::from(prec)) - f64::from(s) * a_f.log2() - 4.0;
    let offset = (f64::from(prec) / 2.0).max(16.0);
    let n_direct = (offset - a_f).ceil().max(0.0) as usize;
    let mut sum = BigFloat::zero(prec);
    for j in 0..n_direct {
        let base = a + int(j as i64);
        let term = BigFloat::from_rational(&base.recip(), prec).powi(i64::from(s));
        sum = &sum + &term;
        // Integral tail: sum_{i>j} (i + a)^-s <= (j + a)^(1-s)/(s - 1).
        let tail = term.log2_abs() + x_to_f64(&base).log2() - f64::from(s - 1).log2();
        if tail < eps_log2 - 2.0 {
            return Ok(sum);
        }
    }
    let x = a + int(n_direct as i64);
    let q = BigFloat::from_rational(&x.recip(), prec).powi(i64::from(s));
    let head = &(&q * &BigFloat::from_rational(&(&x / int(i64::from(s) - 1)), prec)) + &q.ldexp(-1);
    let correction = em_correction(s, &x, &q, eps_log2, cfg)?;
    Ok(&(&sum + &head) + &correction)
}

/// Riemann zeta `zeta(s)` for integer `s >= 2`.
pub fn zeta_int(s: u32, cfg: &EvalConfig) -> Result<BigFloat> {
    let values = zeta_batch(s, cfg.working_bits(), cfg)?;
    Ok(values[s as usize].with_precision(cfg.precision_bits))
}

/// `zeta(2), ..., zeta(s_max)` at precision `prec`, sharing the direct
/// powers `j^-s` across consecutive `s`. Index `s` holds `zeta(s)`; indices
/// 0 and 1 are unused zeros.
pub(crate) fn zeta_batch(s_max: u32, prec: u32, cfg: &EvalConfig) -> Result<Vec<BigFloat>> {
    let mut out = vec![BigFloat::zero(prec), BigFloat::zero(prec)];
    if s_max < 2 {
        return Ok(out);
    }
    let n = (f64::from(prec) / 2.0).max(16.0).ceil() as usize;
    let inv: Vec<BigFloat> = (0..n)
        .map(|j| match j {
            0 => BigFloat::zero(prec),
            _ => &BigFloat::one(prec) / &BigFloat::from_i64(j as i64, prec),
        })
        .collect();
    let mut powers: Vec<BigFloat> = inv.iter().map(|v| v * v).collect();
    let x = int(n as i64);
    let inv_n = BigFloat::from_rational(&x.recip(), prec);
    let mut q = &inv_n * &inv_n;
    let eps_log2 = -(f64::from(prec)) - 4.0;
    let mut live = n;
    for s in 2..=s_max {
        let mut sum = BigFloat::one(prec);
        // Integral tail bound after term j: j^(1-s)/(s-1). Once it is met for
        // some s it is met at the same j for every larger s.
        let cutoff = (2..live).find(|&j| {
            powers[j].log2_abs() + (j as f64).log2() - f64::from(s - 1).log2() < eps_log2 - 2.0
        });
        let last = cutoff.map_or(live, |j| j + 1);
        for p in &powers[2..last] {
            sum = &sum + p;
        }
        if cutoff.is_none() {
            debug_assert_eq!(live, n);
            let head = &(&q * &BigFloat::from_rational(&(&x / int(i64::from(s) - 1)), prec))
                + &q.ldexp(-1);
            let correction = em_correction(s, &x, &q, eps_log2, cfg)?;
            sum = &(&sum + &head) + &correction;
        }
        live = last;
        out.push(sum);
        for (p, i) in powers[2..live].iter_mut().zip(&inv[2..live]) {
            *p = &*p * i;
        }
        q = &q * &inv_n;
    }
    Ok(out)
}

/// Digamma `psi(a)` for rational `a > 0`: upward recurrence to a large
/// argument, then `psi(z) = log z - 1/(2z) - sum B_2k/(2k z^2k)`, whose
/// remainder is bounded by the first omitted term.
pub fn digamma(a: &Rational, cfg: &EvalConfig) -> Result<BigFloat> {
    Ok(digamma_at(a, cfg.working_bits(), cfg)?.with_precision(cfg.precision_bits))
}

pub(crate) fn digamma_at(a: &Rational, prec: u32, cfg: &EvalConfig) -> Result<BigFloat> {
    if a <= &Rational::zero() {
        return Err(Error::Domain("digamma is evaluated only for a > 0".into()));
    }
    let target = (f64::from(prec) / 2.0).max(16.0);
    let shift = (target - x_to_f64(a)).ceil().max(0.0) as usize;
    let mut recurrence = BigFloat::zero(prec);
    for j in 0..shift {
        recurrence = &recurrence + &BigFloat::from_rational(&(a + int(j as i64)).recip(), prec);
    }
    let z = a + int(shift as i64);
    let z_f = x_to_f64(&z);
    let mut value = &ln_at(&BigFloat::from_rational(&z, prec), prec)
        - &BigFloat::from_rational(&(int(2) * &z).recip(), prec);
    let z2 = &z * &z;
    let mut z_pow = z2.clone();
    let eps_log2 = -(f64::from(prec)) - 4.0;
    for k in 1.. {
        if 2.0 * k as f64 + 1.0 >= 2.0 * std::f64::consts::PI * z_f {
            return Err(Error::NonConvergence(k));
        }
        if k > cfg.max_terms {
            return Err(Error::NonConvergence(cfg.max_terms));
        }
        let b = bernoulli_upto(2 * k);
        let coeff = &b[2 * k] / (int(2 * k as i64) * &z_pow);
        let term = BigFloat::from_rational(&coeff, prec);
        if term.is_zero() || term.log2_abs() < eps_log2 - 2.0 {
            break;
        }
        value = &value - &term;
        z_pow *= &z2;
    }
    Ok(&value - &recurrence)
}

#[cfg(test)]
mod tests {
    use super::super::constants::{gamma_at, ln2_at, pi_at};
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn within(a: &BigFloat, b: &BigFloat, cfg: &EvalConfig) -> bool {
        (a - b).abs() < cfg.threshold()
    }

    #[test]
    fn bernoulli_cache_values() {
        let b = bernoulli_upto(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert_eq!(b[7], int(0));
        assert_eq!(b, crate::series::bernoulli_numbers(12));
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let c = cfg();
        let pi = pi_at(c.precision_bits);
        let expected = &(&pi * &pi) / &BigFloat::from_i64(6, c.precision_bits);
        assert!(within(&zeta_int(2, &c).unwrap(), &expected, &c));
        // zeta(4) = pi^4 / 90
        let pi4 = pi.powi(4);
        let z4 = &pi4 / &BigFloat::from_i64(90, c.precision_bits);
        assert!(within(&zeta_int(4, &c).unwrap(), &z4, &c));
    }

    #[test]
    fn batch_agrees_with_hurwitz_at_one() {
        let c = cfg();
        for s in 2..=12 {
            let z = zeta_int(s, &c).unwrap();
            let h = hurwitz_zeta(s, &int(1), &c).unwrap();
            assert!(within(&z, &h, &c), "s = {s}");
        }
        let batch = zeta_batch(400, c.working_bits(), &c).unwrap();
        let direct = hurwitz_zeta(400, &int(1), &c).unwrap();
        assert!(within(&batch[400], &direct, &c));
        assert!(within(
            &batch[57],
            &hurwitz_zeta(57, &int(1), &c).unwrap(),
            &c
        ));
    }

    #[test]
    fn half_shift_relation() {
        let c = cfg();
        for s in 2..=10u32 {
            let h = hurwitz_zeta(s, &rat(1, 2), &c).unwrap();
            let factor = BigFloat::from_i64((1i64 << s) - 1, c.precision_bits);
            let z = &zeta_int(s, &c).unwrap() * &factor;
            assert!(within(&h, &z, &c), "s = {s}");
        }
    }

    #[test]
    fn digamma_special_values() {
        let c = cfg();
        let p = c.precision_bits;
        let gamma = gamma_at(p);
        assert!(within(&digamma(&int(1), &c).unwrap(), &(-&gamma), &c));
        let half = -&(&gamma + &ln2_at(p).ldexp(1));
        assert!(within(&digamma(&rat(1, 2), &c).unwrap(), &half, &c));
    }

    #[test]
    fn digamma_taylor_series_at_one() {
        // psi(1 + x) = -gamma + sum_{k>=1} (-1)^(k+1) zeta(k+1) x^k, |x| < 1,
        // truncated where |x|^(K+1) zeta(2)/(1 - |x|) is below the target.
        let c = cfg();
        let wp = c.working_bits();
        for (p, q) in [(1i64, 3i64), (-1, 3)] {
            let x = rat(p, q);
            let terms = ((f64::from(wp) + 8.0) / (3f64).log2()).ceil() as u32 + 2;
            let zetas = zeta_batch(terms + 1, wp, &c).unwrap();
            let xf = BigFloat::from_rational(&x, wp);
            let mut power = xf.clone();
            let mut sum = -&gamma_at(wp);
            for k in 1..=terms {
                let term = &zetas[k as usize + 1] * &power;
                sum = if k % 2 == 1 {
                    &sum + &term
                } else {
                    &sum - &term
                };
                power = &power * &xf;
            }
            let psi = digamma(&(int(1) + &x), &c).unwrap();
            assert!(within(&sum, &psi, &c), "x = {p}/{q}");
        }
    }

    #[test]
    fn domain_errors() {
        let c = cfg();
        assert!(hurwitz_zeta(1, &int(1), &c).is_err());
        assert!(hurwitz_zeta(2, &int(0), &c).is_err());
        assert!(digamma(&rat(-1, 2), &c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn digamma_recurrence(p in 1i64..=16, q in 1i64..=4) {
            let c = cfg();
            let a = rat(p, q);
            let lhs = digamma(&(&a + int(1)), &c).unwrap();
            let rhs = &digamma(&a, &c).unwrap() + &BigFloat::from_rational(&a.recip(), c.precision_bits);
            prop_assert!(within(&lhs, &rhs, &c));
        }
    }
}
