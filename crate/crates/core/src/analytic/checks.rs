//! Numeric verification of the zeta-weighted, trigonometric and Dobinski
//! series. Every infinite sum is truncated only after an analytic bound on
//! its tail has been shown to fall below the configured tolerance.

use std::collections::BTreeMap;
use std::f64::consts::{LOG2_E, PI};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::constants::{exp_at, gamma_at, ln2_at, pi_at};
use super::zeta::{digamma_at, hurwitz_at, zeta_batch};
use super::EvalConfig;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, gen_factorial, int, pow_int, Rational};
use crate::report::{numeric_report, CheckReport, IdentityId};
use crate::stirling::{build_table, HsuShiueParams};

/// Upper bound for `zeta(s)`, `s >= 2`.
const ZETA2_BOUND: f64 = 1.6449341;
/// Truncation aims this many bits below the tail tolerance.
const TAIL_MARGIN: f64 = 16.0;

/// First Stirling index kept on the right-hand side of the trigonometric
/// series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartIndex {
    /// Sum from `j = 1`, as printed; wrong already at `n = 1`.
    PaperJ1,
    DerivedJ0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigKind {
    /// Even-index series, evaluated through `cos 2 pi`.
    Cosine,
    /// Odd-index series, evaluated through `sin 2 pi / 2 pi`.
    Sine,
}

fn to_f64(q: &Rational) -> f64 {
    BigFloat::from_rational(q, 64).to_f64()
}

fn log2_rational(q: &Rational) -> f64 {
    BigFloat::from_rational(q, 64).log2_abs()
}

fn log2_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).log2()).sum()
}

/// `log2` of `(|r| + m|beta| + n|alpha|)^n`, which bounds `|(m beta + r | alpha)_n|`.
/// Its ratio between `m + 1` and `m` is at most `e^(n/m)`.
fn log2_factor_bound(params: &HsuShiueParams, n: usize, m: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let base = to_f64(&params.r().abs())
        + m as f64 * to_f64(&params.beta().abs())
        + n as f64 * to_f64(&params.alpha().abs());
    n as f64 * base.log2()
}

/// `log2(e^(n/k))`.
fn growth(n: usize, k: usize) -> f64 {
    n as f64 / k as f64 * LOG2_E
}

struct Truncation {
    /// Index of the last term kept.
    last: usize,
    /// `log2` of the largest term bound among the kept terms.
    peak: f64,
}

/// Smallest `K >= first` with `|T_(K+1)| / (1 - rho(K+1)) < target`, where
/// `term(k)` bounds `log2 |T_k|` and `ratio(k)` bounds
/// `log2 |T_(k+1)/T_k|` for every index at or beyond `k` (so `ratio` must be
/// non-increasing).
fn truncate(
    first: usize,
    term: impl Fn(usize) -> f64,
    ratio: impl Fn(usize) -> f64,
    target: f64,
    max_terms: usize,
) -> Result<Truncation> {
    let mut peak = f64::NEG_INFINITY;
    for last in first.. {
        if last - first >= max_terms {
            return Err(Error::NonConvergence(max_terms));
        }
        peak = peak.max(term(last));
        let rho = ratio(last + 1);
        if rho < 0.0 {
            let tail = term(last + 1) - (1.0 - rho.exp2()).log2();
            if tail < target {
                return Ok(Truncation { last, peak });
            }
        }
    }
    unreachable!("loop exits by return")
}

fn target(cfg: &EvalConfig) -> f64 {
    cfg.tail_tolerance.log2_abs() - TAIL_MARGIN
}

/// Working precision covering cancellation among terms up to `2^peak` and
/// rounding accumulated over `count` operations.
fn working_bits(cfg: &EvalConfig, peak: f64, count: usize) -> u32 {
    let guard = peak.max(0.0).ceil() + ((count + 1) as f64).log2().ceil();
    cfg.working_bits() + guard as u32
}

fn base_params(params: &HsuShiueParams, n: usize, cfg: &EvalConfig) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    out.insert("alpha".into(), format_rational(params.alpha()));
    out.insert("beta".into(), format_rational(params.beta()));
    out.insert("r".into(), format_rational(params.r()));
    out.insert("n".into(), n.to_string());
    out.insert("precision_bits".into(), cfg.precision_bits.to_string());
    out
}

/// Both sides of a numeric identity at working precision.
pub(crate) struct Sides {
    pub lhs: BigFloat,
    pub rhs: BigFloat,
    pub terms: usize,
}

impl Sides {
    fn report(
        self,
        id: IdentityId,
        mut params: BTreeMap<String, String>,
        cfg: &EvalConfig,
    ) -> CheckReport {
        params.insert("terms".into(), self.terms.to_string());
        numeric_report(
            id,
            params,
            &self.lhs,
            &self.rhs,
            &cfg.threshold(),
            cfg.precision_bits,
        )
    }
}

fn check_unit_disk(x: &Rational) -> Result<()> {
    if x.abs() >= int(1) {
        return Err(Error::Domain(format!(
            "|x| < 1 required, got x = {}",
            format_rational(x)
        )));
    }
    Ok(())
}

/// `sum_{k>=first} zeta(k + shift) c_k x^k` with `|c_k| <= 2^factor(k)`
/// whose ratio grows by at most `e^(n/k)`.
fn zeta_power_series(
    first: usize,
    shift: usize,
    n: usize,
    x: &Rational,
    coeff: impl Fn(usize) -> Rational,
    factor: impl Fn(usize) -> f64,
    cfg: &EvalConfig,
) -> Result<(BigFloat, usize, u32)> {
    let lx = log2_rational(x);
    let plan = truncate(
        first,
        |k| ZETA2_BOUND.log2() + factor(k) + k as f64 * lx,
        |k| lx + growth(n, k),
        target(cfg),
        cfg.max_terms,
    )?;
    let wp = working_bits(cfg, plan.peak, plan.last);
    let zetas = zeta_batch((plan.last + shift) as u32, wp, cfg)?;
    let xf = BigFloat::from_rational(x, wp);
    let mut power = xf.powi(first as i64);
    let mut sum = BigFloat::zero(wp);
    for k in first..=plan.last {
        let c = coeff(k);
        if !c.is_zero() {
            sum = &sum + &(&(&zetas[k + shift] * &BigFloat::from_rational(&c, wp)) * &power);
        }
        power = &power * &xf;
    }
    Ok((sum, plan.last, wp))
}

pub(crate) fn zeta_series_sides(
    params: &HsuShiueParams,
    n: usize,
    x: &Rational,
    cfg: &EvalConfig,
) -> Result<Sides> {
    check_unit_disk(x)?;
    let (alpha, beta, r) = (params.alpha(), params.beta(), params.r());
    let (lhs, terms, wp) = zeta_power_series(
        1,
        1,
        n,
        x,
        |k| gen_factorial(&(r + int(k as i64) * beta), alpha, n),
        |k| log2_factor_bound(params, n, k),
        cfg,
    )?;
    let a = int(1) - x;
    let table = build_table(params, n);
    let constant = gen_factorial(r, alpha, n);
    let mut rhs = BigFloat::zero(wp);
    if !constant.is_zero() {
        let psi = &digamma_at(&a, wp, cfg)? + &gamma_at(wp);
        rhs = -&(&BigFloat::from_rational(&constant, wp) * &psi);
    }
    let bx = beta * x;
    for k in 1..=n {
        let c = table.get(n, k) * Rational::from_integer(factorial(k)) * pow_int(&bx, k);
        if !c.is_zero() {
            let h = hurwitz_at(k as u32 + 1, &a, wp, cfg)?;
            rhs = &rhs + &(&BigFloat::from_rational(&c, wp) * &h);
        }
    }
    Ok(Sides { lhs, rhs, terms })
}

/// `sum_{k>=1} zeta(k+1) (r + k beta | alpha)_n x^k` against
/// `-(r|alpha)_n (psi(1-x) + gamma) + sum_k S(n,k) k! zeta(k+1, 1-x) (beta x)^k`
/// for rational `|x| < 1`.
pub fn eval_theorem5(
    params: &HsuShiueParams,
    n: usize,
    x: &Rational,
    cfg: &EvalConfig,
) -> Result<CheckReport> {
    let sides = zeta_series_sides(params, n, x, cfg)?;
    let mut p = base_params(params, n, cfg);
    p.insert("x".into(), format_rational(x));
    Ok(sides.report(IdentityId::EQ26, p, cfg))
}

pub(crate) fn shifted_zeta_sides(n: usize, x: &Rational, cfg: &EvalConfig) -> Result<Sides> {
    check_unit_disk(x)?;
    let shifted = HsuShiueParams::from_ints(0, 1, 1)?;
    let (lhs, terms, wp) = zeta_power_series(
        1,
        1,
        n,
        x,
        |k| pow_int(&int(k as i64 + 1), n),
        |k| log2_factor_bound(&shifted, n, k),
        cfg,
    )?;
    let a = int(1) - x;
    let stirling2 = build_table(&HsuShiueParams::classical(), n + 1);
    let mut rhs = -&(&digamma_at(&a, wp, cfg)? + &gamma_at(wp));
    for k in 1..=n {
        let c = stirling2.get(n + 1, k + 1) * Rational::from_integer(factorial(k)) * pow_int(x, k);
        let h = hurwitz_at(k as u32 + 1, &a, wp, cfg)?;
        rhs = &rhs + &(&BigFloat::from_rational(&c, wp) * &h);
    }
    Ok(Sides { lhs, rhs, terms })
}

/// `sum_{k>=1} zeta(k+1) (k+1)^n x^k` against
/// `-(psi(1-x) + gamma) + sum_k {n+1, k+1} k! zeta(k+1, 1-x) x^k`.
pub fn eval_shifted_zeta(n: usize, x: &Rational, cfg: &EvalConfig) -> Result<CheckReport> {
    let sides = shifted_zeta_sides(n, x, cfg)?;
    let mut p = base_params(&HsuShiueParams::from_ints(0, 1, 1)?, n, cfg);
    p.insert("x".into(), format_rational(x));
    Ok(sides.report(IdentityId::EQ30_FAMILY, p, cfg))
}

/// Closed form `log 2 + sum_{k=1}^n {n+1, k+1} k! (1 - 2^(-k-1)) zeta(k+1)`
/// as exact coefficients of `zeta(k+1)`; index 0 is the coefficient of
/// `log 2`.
pub(crate) fn half_zeta_coefficients(n: usize) -> Vec<Rational> {
    let stirling2 = build_table(&HsuShiueParams::classical(), n + 1);
    let mut out = vec![int(1)];
    for k in 1..=n {
        let half = int(1) - Rational::new(1.into(), num_bigint::BigInt::from(1) << (k + 1));
        out.push(stirling2.get(n + 1, k + 1) * Rational::from_integer(factorial(k)) * half);
    }
    out
}

pub(crate) fn half_zeta_sides(n: usize, cfg: &EvalConfig) -> Result<Sides> {
    let half = crate::exact::rat(1, 2);
    let (lhs, terms, wp) = zeta_power_series(
        2,
        0,
        n,
        &half,
        |k| pow_int(&int(k as i64), n),
        |k| n as f64 * (k as f64).log2(),
        cfg,
    )?;
    let coeffs = half_zeta_coefficients(n);
    let zetas = zeta_batch(n as u32 + 1, wp, cfg)?;
    let mut rhs = ln2_at(wp);
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        rhs = &rhs + &(&BigFloat::from_rational(c, wp) * &zetas[k + 1]);
    }
    Ok(Sides { lhs, rhs, terms })
}

/// `sum_{k>=2} zeta(k) k^n / 2^k`, summed until its tail bound falls below
/// the configured tolerance.
pub fn zeta_half_power_sum(n: usize, cfg: &EvalConfig) -> Result<BigFloat> {
    Ok(half_zeta_sides(n, cfg)?.lhs)
}

/// `sum_{k>=2} zeta(k) k^n / 2^k = log 2 + sum_k {n+1,k+1} k! (1 - 2^(-k-1)) zeta(k+1)`.
pub fn eval_eq30_family(n: usize, cfg: &EvalConfig) -> Result<CheckReport> {
    let sides = half_zeta_sides(n, cfg)?;
    let mut p = BTreeMap::new();
    p.insert("n".into(), n.to_string());
    p.insert("precision_bits".into(), cfg.precision_bits.to_string());
    Ok(sides.report(IdentityId::EQ30_FAMILY, p, cfg))
}

pub(crate) fn trig_sides(
    n: usize,
    params: &HsuShiueParams,
    cfg: &EvalConfig,
    start: StartIndex,
    kind: TrigKind,
) -> Result<Sides> {
    let (alpha, beta, r) = (params.alpha(), params.beta(), params.r());
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let odd = usize::from(kind == TrigKind::Sine);
    let two_pi_log2 = (2.0 * PI).log2();
    let plan = truncate(
        0,
        |k| {
            2.0 * k as f64 * two_pi_log2 + log2_factor_bound(params, n, 2 * k + odd)
                - log2_factorial(2 * k + odd)
        },
        |k| 2.0 * two_pi_log2 - (((2 * k + 1) * (2 * k + 2)) as f64).log2() + growth(n, k),
        target(cfg),
        cfg.max_terms,
    )?;
    let table = build_table(params, n);
    let j0 = match start {
        StartIndex::DerivedJ0 => 0,
        StartIndex::PaperJ1 => 1,
    };
    // Stirling side: sum_j S(n, 2j + odd) (-1)^j (2 pi beta)^(2j), times beta if odd.
    let rhs_terms: Vec<(usize, Rational)> = (j0..)
        .take_while(|j| 2 * j + odd <= n)
        .map(|j| {
            let mut c = table.get(n, 2 * j + odd) * pow_int(beta, 2 * j);
            if j % 2 == 1 {
                c = -c;
            }
            if odd == 1 {
                c *= beta;
            }
            (j, c)
        })
        .collect();
    let rhs_peak = rhs_terms
        .iter()
        .map(|(j, c)| log2_rational(c) + 2.0 * *j as f64 * two_pi_log2)
        .fold(f64::NEG_INFINITY, f64::max);
    let wp = working_bits(cfg, plan.peak.max(rhs_peak), plan.last + n);
    let two_pi = pi_at(wp).ldexp(1);
    let step = &two_pi * &two_pi;

    let mut lhs = BigFloat::zero(wp);
    let mut power = BigFloat::one(wp);
    for k in 0..=plan.last {
        let m = 2 * k + odd;
        let z = int(m as i64) * beta + r;
        let c = gen_factorial(&z, alpha, n) / Rational::from_integer(factorial(m));
        let term = &BigFloat::from_rational(&c, wp) * &power;
        lhs = if k % 2 == 0 {
            &lhs + &term
        } else {
            &lhs - &term
        };
        power = &power * &step;
    }
    let mut rhs = BigFloat::zero(wp);
    for (j, c) in rhs_terms {
        rhs = &rhs + &(&BigFloat::from_rational(&c, wp) * &step.powi(j as i64));
    }
    Ok(Sides {
        lhs,
        rhs,
        terms: plan.last + 1,
    })
}

/// One of the two trigonometric series: the even-index
/// `sum_k (-1)^k (2 pi)^(2k) (2k beta + r | alpha)_n / (2k)!` against
/// `sum_j S(n, 2j) (-1)^j (2 pi beta)^(2j)`, or the odd-index
/// `sum_k (-1)^k (2 pi)^(2k) ((2k+1) beta + r | alpha)_n / (2k+1)!` against
/// `beta sum_j S(n, 2j+1) (-1)^j (2 pi beta)^(2j)`.
pub fn eval_trig_series(
    n: usize,
    params: &HsuShiueParams,
    cfg: &EvalConfig,
    start: StartIndex,
    kind: TrigKind,
) -> Result<CheckReport> {
    let sides = trig_sides(n, params, cfg, start, kind)?;
    let id = match (kind, start) {
        (TrigKind::Cosine, StartIndex::DerivedJ0) => IdentityId::EQ17,
        (TrigKind::Cosine, StartIndex::PaperJ1) => IdentityId::EQ17_PRINTED,
        (TrigKind::Sine, StartIndex::DerivedJ0) => IdentityId::EQ18,
        (TrigKind::Sine, StartIndex::PaperJ1) => IdentityId::EQ18_PRINTED,
    };
    Ok(sides.report(id, base_params(params, n, cfg), cfg))
}

/// Both trigonometric series (cosine first) with the given start index.
pub fn eval_eq17_18(
    n: usize,
    params: &HsuShiueParams,
    cfg: &EvalConfig,
    start: StartIndex,
) -> Result<Vec<CheckReport>> {
    [TrigKind::Cosine, TrigKind::Sine]
        .into_iter()
        .map(|kind| eval_trig_series(n, params, cfg, start, kind))
        .collect()
}

pub(crate) fn dobinski_sides(
    n: usize,
    params: &HsuShiueParams,
    x: &Rational,
    cfg: &EvalConfig,
) -> Result<Sides> {
    let (alpha, beta, r) = (params.alpha(), params.beta(), params.r());
    if !beta.is_positive() {
        return Err(Error::Domain(
            "the numeric Dobinski check requires beta > 0".into(),
        ));
    }
    let ratio_x = x / beta;
    let lq = log2_rational(&ratio_x);
    let plan = truncate(
        0,
        |k| log2_factor_bound(params, n, k) + k as f64 * lq - log2_factorial(k),
        |k| lq - ((k + 1) as f64).log2() + growth(n, k),
        target(cfg),
        cfg.max_terms,
    )?;
    let exact_poly = crate::families::exp_poly(n, params);
    let s_n = exact_poly.eval(x);
    let wp = working_bits(cfg, plan.peak.max(log2_rational(&s_n)), plan.last);
    let mut lhs = BigFloat::zero(wp);
    let mut weight = Rational::from_integer(1.into());
    for k in 0..=plan.last {
        let z = int(k as i64) * beta + r;
        let c = gen_factorial(&z, alpha, n) * &weight;
        lhs = &lhs + &BigFloat::from_rational(&c, wp);
        weight = weight * &ratio_x / int(k as i64 + 1);
    }
    let rhs =
        &exp_at(&BigFloat::from_rational(&ratio_x, wp), wp) * &BigFloat::from_rational(&s_n, wp);
    Ok(Sides {
        lhs,
        rhs,
        terms: plan.last + 1,
    })
}

/// `sum_k (k beta + r | alpha)_n x^k / (beta^k k!)` against `e^(x/beta) S_n(x)`,
/// restricted to `beta > 0`.
pub fn eval_dobinski_numeric(
    n: usize,
    params: &HsuShiueParams,
    x: &Rational,
    cfg: &EvalConfig,
) -> Result<CheckReport> {
    let sides = dobinski_sides(n, params, x, cfg)?;
    let mut p = base_params(params, n, cfg);
    p.insert("x".into(), format_rational(x));
    Ok(sides.report(IdentityId::EQ16_NUMERIC, p, cfg))
}
