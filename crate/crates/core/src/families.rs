//! Explicit-formula constructors for the polynomial and number families built
//! on generalized Stirling numbers, and the exact identity checks that
//! compare them with independent oracles (generating-function extraction,
//! direct summation, exhaustive enumeration).

use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    binomial_general, factorial, falling_factorial, format_rational, gen_factorial, int, pow_int,
    pow_signed, rising_factorial, Rational,
};
use crate::poly::PolyQ;
use crate::report::{CheckReport, ExactCheck, IdentityId};
use crate::series::{
    bernoulli_numbers, binom_deform, exp_linear, gf_bernoulli2_degenerate, gf_carlitz_beta,
    gf_degenerate_euler, gf_w, PowerSeries,
};
use crate::stirling::{build_table, enumerate_oracle, Enumeration, HsuShiueParams, StirlingTable};

/// Selects between the closed form derived from the generating function and
/// the form as printed in the literature, which is kept as a regression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Derived,
    Printed,
}

fn factorial_q(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn unit_beta(alpha: &Rational, r: &Rational) -> HsuShiueParams {
    HsuShiueParams::new(alpha.clone(), Rational::one(), r.clone()).expect("beta = 1")
}

fn whitney(beta: &Rational, r: &Rational) -> Result<HsuShiueParams> {
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    HsuShiueParams::new(Rational::zero(), beta.clone(), r.clone())
}

fn with_params(check: ExactCheck, params: &HsuShiueParams) -> ExactCheck {
    check
        .param("alpha", format_rational(params.alpha()))
        .param("beta", format_rational(params.beta()))
        .param("r", format_rational(params.r()))
}

/// `sum_k S(n,k) weight(k)` over row `n` of a table.
fn row_sum(table: &StirlingTable, n: usize, weight: impl Fn(usize) -> Rational) -> Rational {
    table
        .row(n)
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(k, s)| s * weight(k))
        .sum()
}

/// Generalized exponential polynomial `S_n(x) = sum_k S(n,k) x^k`.
pub fn exp_poly(n: usize, params: &HsuShiueParams) -> PolyQ {
    PolyQ::new(build_table(params, n).row(n).to_vec())
}

/// `w_n^(m)(x)` read off an existing table.
pub fn geometric_poly_from(table: &StirlingTable, n: usize, m: i64) -> PolyQ {
    let beta = table.params().beta();
    let order = int(m);
    PolyQ::new(
        table
            .row(n)
            .iter()
            .enumerate()
            .map(|(k, s)| s * rising_factorial(&order, k) * pow_int(beta, k))
            .collect(),
    )
}

/// Higher order generalized geometric polynomial
/// `w_n^(m)(x) = sum_k S(n,k) <m>_k beta^k x^k` for any integer order `m`.
/// Negative orders give the `(1 - x)^s` family through `<-s>_k = (-1)^k (s)_k`.
pub fn geometric_poly(n: usize, m: i64, params: &HsuShiueParams) -> PolyQ {
    geometric_poly_from(&build_table(params, n), n, m)
}

/// `w_n^(m)(-1)`, which equals `(r - beta m | alpha)_n`.
pub fn eval_minus_one(n: usize, m: i64, params: &HsuShiueParams) -> Rational {
    let value = geometric_poly(n, m, params).eval(&int(-1));
    debug_assert_eq!(
        value,
        gen_factorial(&(params.r() - params.beta() * int(m)), params.alpha(), n)
    );
    value
}

pub fn check_minus_one(n_max: usize, m: i64, params: &HsuShiueParams) -> CheckReport {
    let table = build_table(params, n_max);
    let z = params.r() - params.beta() * int(m);
    let mut check = with_params(ExactCheck::new(IdentityId::MINUS_ONE), params).param("m", m);
    for n in 0..=n_max {
        let value = geometric_poly_from(&table, n, m).eval(&int(-1));
        check.compare(
            format!("n={n}"),
            &gen_factorial(&z, params.alpha(), n),
            &value,
        );
    }
    check.finish()
}

/// Explicit `w_n^(m)(x)` against `n! [t^n]` of its generating function.
pub fn check_gf_w(n_max: usize, m: i64, x: &Rational, params: &HsuShiueParams) -> CheckReport {
    let table = build_table(params, n_max);
    let gf = gf_w(params, m, x, n_max);
    let mut check = with_params(ExactCheck::new(IdentityId::EQ3_VS_GF8), params)
        .param("m", m)
        .param("x", format_rational(x));
    for n in 0..=n_max {
        let explicit = geometric_poly_from(&table, n, m).eval(x);
        check.compare(format!("n={n}"), &gf.egf_coeff(n), &explicit);
    }
    check.finish()
}

/// `w_n(x) = sum_k S(n,k) k! (beta x)^k` against `1/(1 - x((1+at)^(b/a) - 1))`
/// times the weight, built by division rather than a power.
pub fn check_geometric_gf(n_max: usize, x: &Rational, params: &HsuShiueParams) -> Result<CheckReport> {
    let table = build_table(params, n_max);
    let mut inc = binom_deform(params.alpha(), params.beta(), n_max);
    let one = PowerSeries::one(n_max);
    inc = &inc - &one;
    let denom = &one - &inc.scale(x);
    let gf = &binom_deform(params.alpha(), params.r(), n_max).divide(&denom)?;
    let bx = params.beta() * x;
    let mut check =
        with_params(ExactCheck::new(IdentityId::EQ19), params).param("x", format_rational(x));
    for n in 0..=n_max {
        let explicit = row_sum(&table, n, |k| factorial_q(k) * pow_int(&bx, k));
        check.compare(format!("n={n}"), &gf.egf_coeff(n), &explicit);
    }
    Ok(check.finish())
}

/// The gamma integral representation: with
/// `int_0^inf z^(s-1+k) e^(-z) dz / Gamma(s) = (s+k-1)!/(s-1)!`, the
/// Stirling sum weighted by gamma moments must reproduce `w_n^(s)(x)` from
/// its generating function.
pub fn check_gamma_representation(
    n_max: usize,
    s: u32,
    x: &Rational,
    params: &HsuShiueParams,
) -> Result<CheckReport> {
    if s == 0 {
        return Err(Error::Domain(
            "the gamma representation needs s >= 1".into(),
        ));
    }
    let s = s as usize;
    let table = build_table(params, n_max);
    let gf = gf_w(params, s as i64, x, n_max);
    let gamma_s = factorial_q(s - 1);
    let bx = params.beta() * x;
    let mut check = with_params(ExactCheck::new(IdentityId::EQ7_GAMMA), params)
        .param("s", s)
        .param("x", format_rational(x));
    for n in 0..=n_max {
        let moments = row_sum(&table, n, |k| {
            pow_int(&bx, k) * factorial_q(s + k - 1) / &gamma_s
        });
        check.compare(format!("n={n}"), &gf.egf_coeff(n), &moments);
    }
    Ok(check.finish())
}

/// `w_{n+m}^(s)(x)` assembled from lower-index polynomials of raised order:
///
/// ```text
/// sum_k sum_j C(n,k) S(m,j) (j beta - m alpha | alpha)_(n-k) <s>_j beta^j x^j w_k^(s+j)(x)
/// ```
///
/// `Form::Printed` uses the weight `<s+1>_j` instead of `<s>_j`.
pub fn spivey_step(
    n: usize,
    m: usize,
    s: u32,
    x: &Rational,
    params: &HsuShiueParams,
    form: Form,
) -> Rational {
    let table = build_table(params, n + m);
    spivey_from(&table, n, m, s, x, form)
}

fn spivey_from(
    table: &StirlingTable,
    n: usize,
    m: usize,
    s: u32,
    x: &Rational,
    form: Form,
) -> Rational {
    let params = table.params();
    let (alpha, beta) = (params.alpha(), params.beta());
    let weight_base = match form {
        Form::Derived => int(s as i64),
        Form::Printed => int(s as i64 + 1),
    };
    let bx = beta * x;
    let mut total = Rational::zero();
    for j in 0..=m {
        let s_mj = table.get(m, j);
        if s_mj.is_zero() {
            continue;
        }
        let outer = &s_mj * rising_factorial(&weight_base, j) * pow_int(&bx, j);
        let shift = int(j as i64) * beta - int(m as i64) * alpha;
        for k in 0..=n {
            let w = geometric_poly_from(table, k, s as i64 + j as i64).eval(x);
            total += &outer
                * binomial_general(&int(n as i64), k)
                * gen_factorial(&shift, alpha, n - k)
                * w;
        }
    }
    total
}

pub fn check_spivey(
    n_max: usize,
    m_max: usize,
    s: u32,
    x: &Rational,
    params: &HsuShiueParams,
    form: Form,
) -> CheckReport {
    let id = match form {
        Form::Derived => IdentityId::SPIVEY,
        Form::Printed => IdentityId::SPIVEY_PRINTED,
    };
    let table = build_table(params, n_max + m_max);
    let mut check = with_params(ExactCheck::new(id), params)
        .param("s", s)
        .param("x", format_rational(x));
    for m in 0..=m_max {
        for n in 0..=n_max {
            let direct = geometric_poly_from(&table, n + m, s as i64).eval(x);
            let recurred = spivey_from(&table, n, m, s, x, form);
            check.compare(format!("n={n},m={m}"), &direct, &recurred);
        }
    }
    check.finish()
}

/// `w_n(1; 0, 1, 0)` against exhaustive ordered-set-partition counts.
pub fn check_fubini(n_max: usize) -> Result<CheckReport> {
    let table = build_table(&HsuShiueParams::classical(), n_max);
    let mut check = ExactCheck::new(IdentityId::FUBINI).param("n_max", n_max);
    for n in 0..=n_max {
        let count = enumerate_oracle(Enumeration::OrderedSetPartitions, n)?;
        let value = geometric_poly_from(&table, n, 1).eval(&Rational::one());
        check.compare(format!("n={n}"), &int(count as i64), &value);
    }
    Ok(check.finish())
}

/// Barred preferential arrangement numbers `w_n^(s+1)(1; 0, 1, 0)` against
/// enumeration of arrangements with `s` bars.
pub fn check_bpa(n_max: usize, s: usize) -> Result<CheckReport> {
    let table = build_table(&HsuShiueParams::classical(), n_max);
    let mut check = ExactCheck::new(IdentityId::BPA_NUMBERS)
        .param("n_max", n_max)
        .param("s", s);
    for n in 0..=n_max {
        let count = enumerate_oracle(Enumeration::BarredPreferential { bars: s }, n)?;
        let value = geometric_poly_from(&table, n, s as i64 + 1).eval(&Rational::one());
        check.compare(format!("n={n}"), &int(count as i64), &value);
    }
    Ok(check.finish())
}

/// `<-x>_n = (-1)^n (x)_n`.
pub fn check_rising_falling(n_max: usize, x: &Rational) -> CheckReport {
    let mut check = ExactCheck::new(IdentityId::EQ36).param("x", format_rational(x));
    for n in 0..=n_max {
        check.compare(
            format!("n={n}"),
            &(sign(n) * falling_factorial(x, n)),
            &rising_factorial(&-x, n),
        );
    }
    check.finish()
}

/// Classical Bernoulli polynomial `B_n(x) = sum_i C(n,i) B_(n-i) x^i`.
pub fn bernoulli_poly(n: usize) -> PolyQ {
    let b = bernoulli_numbers(n);
    PolyQ::new(
        (0..=n)
            .map(|i| binomial_general(&int(n as i64), i) * &b[n - i])
            .collect(),
    )
}

/// Classical Euler polynomial of order `s`, `E_n^(s)(x)`, from
/// `(2/(e^t + 1))^s e^(x t)`.
pub fn euler_poly(n: usize, s: u32) -> PolyQ {
    let gf = gf_degenerate_euler(s, &Rational::zero(), &Rational::zero(), n);
    PolyQ::new(
        (0..=n)
            .map(|i| binomial_general(&int(n as i64), i) * gf.egf_coeff(n - i))
            .collect(),
    )
}

/// `B_n = sum_k (-1)^k k!/(k+1) {n k}` and `E_n(0) = sum_k (-1)^k k!/2^k {n k}`.
pub fn check_bernoulli_euler_numbers(n_max: usize) -> CheckReport {
    let table = build_table(&HsuShiueParams::classical(), n_max);
    let bernoulli = bernoulli_numbers(n_max);
    let euler = gf_degenerate_euler(1, &Rational::zero(), &Rational::zero(), n_max);
    let half = Rational::new(1.into(), 2.into());
    let mut check = ExactCheck::new(IdentityId::EQ14).param("n_max", n_max);
    for n in 0..=n_max {
        let b = row_sum(&table, n, |k| sign(k) * factorial_q(k) / int(k as i64 + 1));
        check.compare(format!("B_{n}"), &bernoulli[n], &b);
        let e = row_sum(&table, n, |k| sign(k) * factorial_q(k) * pow_int(&half, k));
        check.compare(format!("E_{n}(0)"), &euler.egf_coeff(n), &e);
    }
    check.finish()
}

fn degenerate_euler_from(table: &StirlingTable, n: usize, order: u32) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    let order = int(order as i64);
    row_sum(table, n, |k| {
        sign(k) * rising_factorial(&order, k) * pow_int(&half, k)
    })
}

/// Higher order degenerate Euler value
/// `E_n^(order)(alpha; r) = sum_k S(n,k; alpha,1,r) (-1)^k <order>_k / 2^k`.
pub fn degenerate_euler(n: usize, order: u32, alpha: &Rational, r: &Rational) -> Rational {
    degenerate_euler_from(&build_table(&unit_beta(alpha, r), n), n, order)
}

/// Stirling-sum degenerate Euler values against the generating function.
/// Order 1 is reported under its own identity.
pub fn check_degenerate_euler(
    n_max: usize,
    order: u32,
    alpha: &Rational,
    r: &Rational,
) -> CheckReport {
    let id = if order == 1 {
        IdentityId::EQ27
    } else {
        IdentityId::EQ10
    };
    let params = unit_beta(alpha, r);
    let table = build_table(&params, n_max);
    let gf = gf_degenerate_euler(order, alpha, r, n_max);
    let mut check = with_params(ExactCheck::new(id), &params).param("order", order);
    for n in 0..=n_max {
        check.compare(
            format!("n={n}"),
            &gf.egf_coeff(n),
            &degenerate_euler_from(&table, n, order),
        );
    }
    check.finish()
}

/// r-Whitney reduction of the Euler formula:
/// `E_n^(s)(r/beta) = sum_k W(n,k) (-1)^k <s>_k / (beta^(n-k) 2^k)`.
pub fn check_whitney_euler(
    n_max: usize,
    s: u32,
    beta: &Rational,
    r: &Rational,
) -> Result<CheckReport> {
    let params = whitney(beta, r)?;
    let table = build_table(&params, n_max);
    let point = r / beta;
    let half = Rational::new(1.into(), 2.into());
    let order = int(s as i64);
    let mut check = with_params(ExactCheck::new(IdentityId::EQ10), &params)
        .param("order", s)
        .param("reduction", "r-Whitney");
    for n in 0..=n_max {
        let closed = row_sum(&table, n, |k| {
            sign(k) * rising_factorial(&order, k) * pow_int(&half, k) / pow_int(beta, n - k)
        });
        check.compare(format!("n={n}"), &euler_poly(n, s).eval(&point), &closed);
    }
    Ok(check.finish())
}

fn bernoulli2_from(table: &StirlingTable, n: usize) -> Rational {
    row_sum(table, n, |k| sign(k) * factorial_q(k) / int(k as i64 + 1))
}

/// Degenerate Bernoulli polynomial of the second kind
/// `B_n(r | alpha) = sum_k S(n,k; alpha,1,r) (-1)^k k!/(k+1)`.
pub fn degenerate_bernoulli2(n: usize, alpha: &Rational, r: &Rational) -> Rational {
    bernoulli2_from(&build_table(&unit_beta(alpha, r), n), n)
}

/// Stirling-sum `B_n(r|alpha)` against the generating function and against
/// `int_{-1}^0 w_n(x; alpha, 1, r) dx`.
pub fn check_bernoulli2(n_max: usize, alpha: &Rational, r: &Rational) -> CheckReport {
    let params = unit_beta(alpha, r);
    let table = build_table(&params, n_max);
    let gf = gf_bernoulli2_degenerate(alpha, r, n_max);
    let mut check = with_params(ExactCheck::new(IdentityId::EQ34_THM2), &params);
    for n in 0..=n_max {
        let expected = gf.egf_coeff(n);
        check.compare(format!("n={n}"), &expected, &bernoulli2_from(&table, n));
        let integral = geometric_poly_from(&table, n, 1).integrate(&int(-1), &Rational::zero());
        check.compare(format!("n={n},integral"), &expected, &integral);
    }
    check.finish()
}

/// r-Whitney reduction: `B_n(r/beta) = sum_k W(n,k) (-1)^k k!/(beta^(n-k)(k+1))`.
pub fn check_whitney_bernoulli(n_max: usize, beta: &Rational, r: &Rational) -> Result<CheckReport> {
    let params = whitney(beta, r)?;
    let table = build_table(&params, n_max);
    let point = r / beta;
    let mut check = with_params(ExactCheck::new(IdentityId::EQ34_THM2), &params)
        .param("reduction", "r-Whitney");
    for n in 0..=n_max {
        let closed = row_sum(&table, n, |k| {
            sign(k) * factorial_q(k) / (int(k as i64 + 1) * pow_int(beta, n - k))
        });
        check.compare(format!("n={n}"), &bernoulli_poly(n).eval(&point), &closed);
    }
    Ok(check.finish())
}

/// Carlitz degenerate Bernoulli polynomial value `beta_n(alpha, x)`.
pub fn carlitz_beta(n: usize, alpha: &Rational, x: &Rational) -> Rational {
    gf_carlitz_beta(alpha, x, n).egf_coeff(n)
}

fn carlitz_values(n_max: usize, alpha: &Rational, x: &Rational) -> Vec<Rational> {
    let gf = gf_carlitz_beta(alpha, x, n_max);
    (0..=n_max).map(|n| gf.egf_coeff(n)).collect()
}

/// `(n+1) sum_k S(n,k; alpha,1,r) (-1)^k <s>_(k+1)/(k+1)`.
fn carlitz_difference_sum(table: &StirlingTable, n: usize, s: &Rational) -> Rational {
    int(n as i64 + 1)
        * row_sum(table, n, |k| {
            sign(k) * rising_factorial(s, k + 1) / int(k as i64 + 1)
        })
}

/// `beta_{n+1}(alpha, r) - beta_{n+1}(alpha, r - s)` against the Stirling sum,
/// against `s (n+1) int_{-1}^0 w_n^(s+1)(x; alpha,1,r) dx` and, for `s = 1`,
/// against `(n+1)(r-1|alpha)_n`.
pub fn check_carlitz_difference(n_max: usize, s: u32, alpha: &Rational, r: &Rational) -> CheckReport {
    let params = unit_beta(alpha, r);
    let table = build_table(&params, n_max);
    let s_q = int(s as i64);
    let upper = carlitz_values(n_max + 1, alpha, r);
    let lower = carlitz_values(n_max + 1, alpha, &(r - &s_q));
    let mut check = with_params(ExactCheck::new(IdentityId::EQ29), &params).param("s", s);
    for n in 0..=n_max {
        let lhs = &upper[n + 1] - &lower[n + 1];
        check.compare(
            format!("n={n}"),
            &lhs,
            &carlitz_difference_sum(&table, n, &s_q),
        );
        if s >= 1 {
            let integral =
                geometric_poly_from(&table, n, s as i64 + 1).integrate(&int(-1), &Rational::zero());
            check.compare(
                format!("n={n},integral"),
                &lhs,
                &(integral * &s_q * int(n as i64 + 1)),
            );
        }
        if s == 1 {
            let reduced = int(n as i64 + 1) * gen_factorial(&(r - int(1)), alpha, n);
            check.compare(format!("n={n},s=1"), &lhs, &reduced);
        }
    }
    check.finish()
}

/// `sum_{j<r} (j|alpha)_n = sum_k S(n,k; alpha,1,r) (-1)^k <r>_(k+1)/(k+1)`
/// for a positive integer `r`, against direct summation and the Carlitz
/// difference `(beta_{n+1}(alpha,r) - beta_{n+1}(alpha))/(n+1)`.
pub fn check_falling_sums(n_max: usize, r: u32, alpha: &Rational) -> Result<CheckReport> {
    if r == 0 {
        return Err(Error::Domain("r must be a positive integer".into()));
    }
    let r_q = int(r as i64);
    let params = unit_beta(alpha, &r_q);
    let table = build_table(&params, n_max);
    let at_r = carlitz_values(n_max + 1, alpha, &r_q);
    let at_0 = carlitz_values(n_max + 1, alpha, &Rational::zero());
    let mut check = with_params(ExactCheck::new(IdentityId::COR2), &params);
    for n in 0..=n_max {
        let direct: Rational = (0..r)
            .map(|j| gen_factorial(&int(j as i64), alpha, n))
            .sum();
        let closed = row_sum(&table, n, |k| {
            sign(k) * rising_factorial(&r_q, k + 1) / int(k as i64 + 1)
        });
        check.compare(format!("n={n}"), &direct, &closed);
        let carlitz = (&at_r[n + 1] - &at_0[n + 1]) / int(n as i64 + 1);
        check.compare(format!("n={n},carlitz"), &direct, &carlitz);
    }
    Ok(check.finish())
}

fn carlitz_shifted(id: IdentityId, n_max: usize, alpha: &Rational, r: &Rational) -> CheckReport {
    let params = unit_beta(alpha, r);
    let table = build_table(&params, n_max);
    let lhs = carlitz_values(n_max, alpha, &(r - alpha));
    let shifted = alpha + int(1);
    let mut check = with_params(ExactCheck::new(id), &params);
    for n in 0..=n_max {
        let closed = row_sum(&table, n, |k| {
            sign(k) * rising_factorial(&shifted, k) / int(k as i64 + 1)
        });
        check.compare(format!("n={n}"), &lhs[n], &closed);
    }
    check.finish()
}

/// `beta_n(alpha, r - alpha) = sum_k S(n,k; alpha,1,r) (-1)^k <alpha+1>_k/(k+1)`.
pub fn check_carlitz_shifted(n_max: usize, alpha: &Rational, r: &Rational) -> CheckReport {
    carlitz_shifted(IdentityId::EQ31, n_max, alpha, r)
}

/// The `r = 0` case: `beta_n(alpha, -alpha)`.
pub fn check_carlitz_minus_alpha(n_max: usize, alpha: &Rational) -> CheckReport {
    carlitz_shifted(IdentityId::EQ32, n_max, alpha, &Rational::zero())
}

/// The `r = alpha` case: Carlitz degenerate Bernoulli numbers `beta_n(alpha)`.
pub fn check_carlitz_numbers(n_max: usize, alpha: &Rational) -> CheckReport {
    carlitz_shifted(IdentityId::EQ33, n_max, alpha, alpha)
}

/// `B_{n+1}(r/beta) - B_{n+1}(r/beta - s)` against
/// `(n+1) sum_k W(n,k) (-1)^k <s>_(k+1) / (beta^e (k+1))` with `e = n - k`
/// (derived) or `e = n + 1 - k` (printed).
pub fn check_bernoulli_difference(
    ns: RangeInclusive<usize>,
    s: u32,
    beta: &Rational,
    r: &Rational,
    form: Form,
) -> Result<CheckReport> {
    let params = whitney(beta, r)?;
    let id = match form {
        Form::Derived => IdentityId::EQ37_CORRECTED,
        Form::Printed => IdentityId::EQ37_PRINTED,
    };
    let table = build_table(&params, *ns.end());
    let point = r / beta;
    let s_q = int(s as i64);
    let mut check = with_params(ExactCheck::new(id), &params).param("s", s);
    for n in ns {
        let b = bernoulli_poly(n + 1);
        let lhs = b.eval(&point) - b.eval(&(&point - &s_q));
        let extra = match form {
            Form::Derived => 0,
            Form::Printed => 1,
        };
        let rhs = int(n as i64 + 1)
            * row_sum(&table, n, |k| {
                sign(k) * rising_factorial(&s_q, k + 1)
                    / (int(k as i64 + 1) * pow_int(beta, n + extra - k))
            });
        check.compare(format!("n={n}"), &lhs, &rhs);
    }
    Ok(check.finish())
}

/// `B_{n+1}(r) = B_{n+1} + sum_k (-1)^k (n+1)/(k+1) {n+r k+r}_r <r>_(k+1)`,
/// plus the falling-factorial expansion
/// `B_{n+1}(x) = B_{n+1} + sum_k (n+1)/(k+1) {n k} (x)_(k+1)` as polynomials.
pub fn check_bernoulli_rising(n_max: usize, r: u32) -> CheckReport {
    let r_q = int(r as i64);
    let params =
        HsuShiueParams::new(Rational::zero(), Rational::one(), r_q.clone()).expect("beta = 1");
    let table = build_table(&params, n_max);
    let classical = build_table(&HsuShiueParams::classical(), n_max);
    let numbers = bernoulli_numbers(n_max + 1);
    let mut check = with_params(ExactCheck::new(IdentityId::COR4), &params);
    let x_minus = |i: usize| PolyQ::new(vec![int(-(i as i64)), int(1)]);
    for n in 0..=n_max {
        let b = bernoulli_poly(n + 1);
        let closed = &numbers[n + 1]
            + int(n as i64 + 1)
                * row_sum(&table, n, |k| {
                    sign(k) * rising_factorial(&r_q, k + 1) / int(k as i64 + 1)
                });
        check.compare(format!("n={n}"), &b.eval(&r_q), &closed);

        let mut expansion = PolyQ::constant(numbers[n + 1].clone());
        let mut falling = x_minus(0);
        for k in 0..=n {
            let weight = classical.get(n, k) * int(n as i64 + 1) / int(k as i64 + 1);
            expansion = &expansion + &falling.scale(&weight);
            falling = &falling * &x_minus(k + 1);
        }
        let len = b.coeffs().len().max(expansion.coeffs().len());
        for i in 0..len {
            check.compare(
                format!("n={n},falling,[x^{i}]"),
                &b.coeff(i),
                &expansion.coeff(i),
            );
        }
    }
    check.finish()
}

/// `sum_{j<m} (r + beta j)^n` by direct summation.
pub fn direct_power_sum(n: usize, m: u32, beta: &Rational, r: &Rational) -> Rational {
    (0..m)
        .map(|j| pow_int(&(r + beta * int(j as i64)), n))
        .sum()
}

fn power_sum_from(
    table: &StirlingTable,
    n: usize,
    m: u32,
    beta: &Rational,
    form: Form,
) -> Rational {
    let offset = match form {
        Form::Derived => 0,
        Form::Printed => 1,
    };
    let m_q = int(m as i64);
    row_sum(table, n, |k| {
        pow_signed(beta, k as i64 - offset).expect("beta is nonzero")
            * falling_factorial(&m_q, k + 1)
            / int(k as i64 + 1)
    })
}

/// Power sums through r-Whitney numbers:
/// `sum_{j<m} (r + beta j)^n = sum_k beta^g/(k+1) W(n,k) (m)_(k+1)` with
/// `g = k` (derived) or `g = k - 1` (printed).
pub fn howard_power_sum(
    n: usize,
    m: u32,
    beta: &Rational,
    r: &Rational,
    form: Form,
) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let table = build_table(&whitney(beta, r)?, n);
    Ok(power_sum_from(&table, n, m, beta, form))
}

/// Closed-form power sums against direct summation; the derived form is also
/// compared with Howard's Bernoulli expression
/// `beta^n/(n+1) (B_{n+1}(m + r/beta) - B_{n+1}(r/beta))`.
pub fn check_power_sums(
    ns: RangeInclusive<usize>,
    ms: RangeInclusive<u32>,
    beta: &Rational,
    r: &Rational,
    form: Form,
) -> Result<CheckReport> {
    let params = whitney(beta, r)?;
    if *ms.start() == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let id = match form {
        Form::Derived => IdentityId::COR5_CORRECTED,
        Form::Printed => IdentityId::COR5_PRINTED,
    };
    let table = build_table(&params, *ns.end());
    let point = r / beta;
    let mut check = with_params(ExactCheck::new(id), &params);
    for n in ns {
        let b = bernoulli_poly(n + 1);
        for m in ms.clone() {
            let direct = direct_power_sum(n, m, beta, r);
            let closed = power_sum_from(&table, n, m, beta, form);
            check.compare(format!("n={n},m={m}"), &direct, &closed);
            if form == Form::Derived {
                let howard = pow_int(beta, n) / int(n as i64 + 1)
                    * (b.eval(&(&point + int(m as i64))) - b.eval(&point));
                check.compare(format!("n={n},m={m},bernoulli"), &direct, &howard);
            }
        }
    }
    Ok(check.finish())
}

/// Coefficientwise Dobinski identity
/// `e^(x/beta) S_n(x) = sum_k (k beta + r | alpha)_n x^k / (beta^k k!)`.
pub fn check_dobinski(
    n_max: usize,
    params: &HsuShiueParams,
    order_x: usize,
) -> Result<CheckReport> {
    let beta = params.beta();
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let table = build_table(params, n_max);
    let exp = exp_linear(&beta.recip(), order_x);
    let mut check =
        with_params(ExactCheck::new(IdentityId::EQ16_EXACT), params).param("order_x", order_x);
    for n in 0..=n_max {
        let product = &exp * &PolyQ::new(table.row(n).to_vec()).to_series(order_x);
        for k in 0..=order_x {
            let z = int(k as i64) * beta + params.r();
            let term = gen_factorial(&z, params.alpha(), n) / (pow_int(beta, k) * factorial_q(k));
            check.compare(format!("n={n},k={k}"), &term, &product.coeff(k));
        }
    }
    Ok(check.finish())
}
