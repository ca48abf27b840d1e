//! The generalized Mellin derivative `(beta x^(1 - alpha/beta) D)^n` acting on
//! graded series `x^(r/beta) sum_k c_k x^k`.
//!
//! The operator is diagonal in the basis `x^(k + (r - m alpha)/beta)`:
//! one application sends `c_k` to `(k beta + r - m alpha) c_k` and raises the
//! application count `m`. The fractional prefactor is never expanded; it is
//! tracked by `(params, applications)`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    binomial_general, factorial, format_rational, gen_factorial, int, pow_int, Rational,
};
use crate::families::geometric_poly_from;
use crate::poly::PolyQ;
use crate::report::{CheckReport, ExactCheck, IdentityId};
use crate::series::{exp_linear, PowerSeries};
use crate::stirling::{build_table, HsuShiueParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    params: HsuShiueParams,
    applications: usize,
    coeffs: Vec<Rational>,
}

impl GradedSeries {
    /// `x^(r/beta) f(x)` with `f` given by its coefficients.
    pub fn embed(params: &HsuShiueParams, coeffs: Vec<Rational>) -> Self {
        GradedSeries {
            params: params.clone(),
            applications: 0,
            coeffs,
        }
    }

    pub fn from_series(params: &HsuShiueParams, f: &PowerSeries) -> Self {
        Self::embed(params, f.coeffs().to_vec())
    }

    pub fn from_poly(params: &HsuShiueParams, f: &PolyQ) -> Self {
        Self::embed(params, f.coeffs().to_vec())
    }

    pub fn params(&self) -> &HsuShiueParams {
        &self.params
    }

    pub fn applications(&self) -> usize {
        self.applications
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Highest tracked index.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The shared exponent offset `(r - m alpha)/beta` of the basis.
    pub fn exponent_offset(&self) -> Result<Rational> {
        let p = &self.params;
        if p.beta().is_zero() {
            return Err(Error::ZeroBeta);
        }
        Ok((p.r() - p.alpha() * int(self.applications as i64)) / p.beta())
    }

    /// Applies the operator `times` more times.
    pub fn apply(&self, times: usize) -> Result<Self> {
        let p = &self.params;
        if p.beta().is_zero() {
            return Err(Error::ZeroBeta);
        }
        let m = int(self.applications as i64);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_zero() {
                    return c.clone();
                }
                // (k beta + r - m alpha | alpha)_times
                let z = int(k as i64) * p.beta() + p.r() - p.alpha() * &m;
                c * gen_factorial(&z, p.alpha(), times)
            })
            .collect();
        Ok(GradedSeries {
            params: p.clone(),
            applications: self.applications + times,
            coeffs,
        })
    }
}

fn describe(check: ExactCheck, params: &HsuShiueParams, n: usize) -> ExactCheck {
    check
        .param("alpha", format_rational(params.alpha()))
        .param("beta", format_rational(params.beta()))
        .param("r", format_rational(params.r()))
        .param("n", n)
}

fn compare_coeffs(check: &mut ExactCheck, expected: &[Rational], actual: &[Rational], len: usize) {
    let zero = Rational::zero();
    for k in 0..len {
        check.compare(
            format!("[x^{k}]"),
            expected.get(k).unwrap_or(&zero),
            actual.get(k).unwrap_or(&zero),
        );
    }
}

/// Operator expansion on a polynomial test function:
/// `(beta x^(1-alpha/beta) D)^n [x^(r/beta) f] = x^((r - n alpha)/beta) sum_k S(n,k) beta^k x^k f^(k)`.
pub fn verify_mellin_poly(n: usize, f: &PolyQ, params: &HsuShiueParams) -> Result<CheckReport> {
    let lhs = GradedSeries::from_poly(params, f).apply(n)?;
    let table = build_table(params, n);
    let mut rhs = PolyQ::zero();
    for k in 0..=n {
        let weight = table.get(n, k) * pow_int(params.beta(), k);
        rhs = &rhs + &(&PolyQ::monomial(weight, k) * &f.derivative(k));
    }
    let mut check = describe(ExactCheck::new(IdentityId::EQ1), params, n).param("f", f);
    let len = lhs.coeffs().len().max(rhs.coeffs().len()).max(1);
    compare_coeffs(&mut check, rhs.coeffs(), lhs.coeffs(), len);
    Ok(check.finish())
}

/// Series identities obtained by applying the operator to `(1-x)^-(s+1)` or
/// `(1-x)^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesIdentity {
    /// `sum_k C(s+k,k) (r + k beta|alpha)_n x^k = (1-x)^-(s+1) w_n^(s+1)(x/(1-x))`.
    Binomial,
    /// The `s = 0` case of [`SeriesIdentity::Binomial`].
    Geometric,
    /// `sum_k C(s,k) (r + k beta|alpha)_n x^k = (1+x)^s w_n^(-s)(-x/(1+x))`.
    BinomialVariant,
}

impl SeriesIdentity {
    fn id(self) -> IdentityId {
        match self {
            SeriesIdentity::Binomial => IdentityId::EQ5,
            SeriesIdentity::Geometric => IdentityId::EQ21,
            SeriesIdentity::BinomialVariant => IdentityId::EQ38,
        }
    }
}

/// Left side built termwise from generalized factorials, right side by
/// substituting a series into the polynomial and multiplying by the
/// binomial prefactor.
pub fn verify_series_identity(
    which: SeriesIdentity,
    n: usize,
    s: i64,
    params: &HsuShiueParams,
    order: usize,
) -> Result<CheckReport> {
    if params.beta().is_zero() {
        return Err(Error::ZeroBeta);
    }
    if s < 0 {
        return Err(Error::Domain(format!("s must be non-negative, got {s}")));
    }
    let s = if which == SeriesIdentity::Geometric { 0 } else { s };
    let table = build_table(params, n);
    let term = |k: usize| {
        gen_factorial(
            &(params.r() + int(k as i64) * params.beta()),
            params.alpha(),
            n,
        )
    };
    let (lhs, rhs) = match which {
        SeriesIdentity::Binomial | SeriesIdentity::Geometric => {
            let lhs: Vec<Rational> = (0..=order)
                .map(|k| binomial_general(&int(s + k as i64), k) * term(k))
                .collect();
            // x/(1-x) = x + x^2 + ...
            let mut inner = vec![Rational::one(); order + 1];
            inner[0] = Rational::zero();
            let substituted = geometric_poly_from(&table, n, s + 1)
                .compose_series(&PowerSeries::from_coeffs(inner));
            let prefactor = PowerSeries::linear(int(-1), order).pow(&int(-(s + 1)))?;
            (lhs, &prefactor * &substituted)
        }
        SeriesIdentity::BinomialVariant => {
            let lhs: Vec<Rational> = (0..=order)
                .map(|k| binomial_general(&int(s), k) * term(k))
                .collect();
            // -x/(1+x) = -x + x^2 - x^3 + ...
            let inner: Vec<Rational> = (0..=order)
                .map(|j| match j {
                    0 => Rational::zero(),
                    _ if j % 2 == 1 => int(-1),
                    _ => int(1),
                })
                .collect();
            let substituted =
                geometric_poly_from(&table, n, -s).compose_series(&PowerSeries::from_coeffs(inner));
            let prefactor = PowerSeries::linear(int(1), order).pow_u(s as u32);
            (lhs, &prefactor * &substituted)
        }
    };
    let mut check = describe(ExactCheck::new(which.id()), params, n)
        .param("s", s)
        .param("order", order);
    compare_coeffs(&mut check, &lhs, rhs.coeffs(), order + 1);
    Ok(check.finish())
}

/// The operator applied to `x^(r/beta) (1-x)^-(s+1)` against
/// `(1-x)^-(s+1) w_n^(s+1)(x/(1-x))`.
pub fn verify_mellin_geometric(n: usize, s: u32, params: &HsuShiueParams, order: usize) -> Result<CheckReport> {
    let f = PowerSeries::linear(int(-1), order).pow(&int(-(s as i64) - 1))?;
    let lhs = GradedSeries::from_series(params, &f).apply(n)?;
    let table = build_table(params, n);
    let mut inner = vec![Rational::one(); order + 1];
    inner[0] = Rational::zero();
    let rhs = &f
        * &geometric_poly_from(&table, n, s as i64 + 1)
            .compose_series(&PowerSeries::from_coeffs(inner));
    let mut check = describe(ExactCheck::new(IdentityId::EQ4_OPERATOR), params, n)
        .param("s", s)
        .param("order", order);
    compare_coeffs(&mut check, rhs.coeffs(), lhs.coeffs(), order + 1);
    Ok(check.finish())
}

/// The operator applied to `x^(r/beta) e^(x/beta)` against `e^(x/beta) S_n(x)`.
pub fn verify_exp_operator(n: usize, params: &HsuShiueParams, order: usize) -> Result<CheckReport> {
    let beta = params.beta();
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let exp = exp_linear(&beta.recip(), order);
    let lhs = GradedSeries::from_series(params, &exp).apply(n)?;
    let table = build_table(params, n);
    let rhs = &exp * &PolyQ::new(table.row(n).to_vec()).to_series(order);
    let mut check = describe(ExactCheck::new(IdentityId::EQ15), params, n).param("order", order);
    compare_coeffs(&mut check, rhs.coeffs(), lhs.coeffs(), order + 1);
    // Spot check against the closed coefficient (k beta + r|alpha)_n / (beta^k k!).
    for k in [0, order] {
        let z = int(k as i64) * beta + params.r();
        let closed = gen_factorial(&z, params.alpha(), n)
            / (pow_int(beta, k) * Rational::from_integer(factorial(k)));
        check.compare(format!("[x^{k}],closed"), &closed, &lhs.coeffs()[k]);
    }
    Ok(check.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::report::Status;
    use proptest::prelude::*;

    fn p(a: (i64, i64), b: (i64, i64), r: (i64, i64)) -> HsuShiueParams {
        HsuShiueParams::new(rat(a.0, a.1), rat(b.0, b.1), rat(r.0, r.1)).unwrap()
    }

    #[test]
    fn apply_examples() {
        let params = HsuShiueParams::from_ints(1, 2, 3).unwrap();
        let gs = GradedSeries::embed(&params, vec![int(1); 5]);
        assert_eq!(gs.apply(0).unwrap(), gs);
        let once = gs.apply(1).unwrap();
        let expected: Vec<Rational> = (0..5).map(|k| int(2 * k + 3)).collect();
        assert_eq!(once.coeffs(), expected.as_slice());
        assert_eq!(once.applications(), 1);
        assert_eq!(once.exponent_offset().unwrap(), int(1));

        let q = p((1, 2), (3, 1), (-1, 1));
        let single = GradedSeries::embed(&q, vec![int(1)]).apply(6).unwrap();
        assert_eq!(single.coeffs()[0], gen_factorial(q.r(), q.alpha(), 6));
    }

    #[test]
    fn zero_beta_is_rejected() {
        let params = HsuShiueParams::from_ints(1, 0, 1).unwrap();
        let gs = GradedSeries::embed(&params, vec![int(1)]);
        assert_eq!(gs.apply(1), Err(Error::ZeroBeta));
    }

    #[test]
    fn mellin_on_monomials_and_cubic() {
        let params = p((1, 2), (3, 1), (-1, 1));
        for j in 0..=6 {
            for n in 0..=8 {
                let f = PolyQ::monomial(int(1), j);
                assert!(verify_mellin_poly(n, &f, &params).unwrap().passed());
            }
        }
        let cubic = PolyQ::new(vec![rat(1, 3), int(-2), rat(5, 7), int(4)]);
        assert!(verify_mellin_poly(8, &cubic, &params).unwrap().passed());
        assert!(verify_mellin_poly(0, &cubic, &params).unwrap().passed());
    }

    #[test]
    fn series_identities() {
        let params = p((1, 2), (2, 1), (-1, 1));
        for n in 0..=8 {
            for which in [
                SeriesIdentity::Binomial,
                SeriesIdentity::Geometric,
                SeriesIdentity::BinomialVariant,
            ] {
                let r = verify_series_identity(which, n, 3, &params, 30).unwrap();
                assert_eq!(r.status, Status::Pass, "{which:?} n={n}: {:?}", r.witness);
            }
        }
        // [x^1] of the left side for n = 1, s = 1 is 2 (r + beta).
        let q = HsuShiueParams::from_ints(0, 2, 5).unwrap();
        assert!(verify_series_identity(SeriesIdentity::Binomial, 1, 1, &q, 1)
            .unwrap()
            .passed());
        assert!(verify_series_identity(SeriesIdentity::Binomial, 1, -1, &q, 1).is_err());
    }

    #[test]
    fn operator_identities() {
        let params = p((1, 2), (2, 1), (-1, 1));
        for n in 0..=8 {
            assert!(verify_exp_operator(n, &params, 24).unwrap().passed());
            assert!(verify_mellin_geometric(n, 2, &params, 20).unwrap().passed());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn operator_powers_compose(a in 0usize..=6, b in 0usize..=6, rn in -6i64..=6, bn in 1i64..=6, an in -6i64..=6) {
            let params = HsuShiueParams::new(rat(an, 2), rat(bn, 3), rat(rn, 4)).unwrap();
            let gs = GradedSeries::embed(&params, (0..6).map(|k| rat(k as i64 + 1, 5)).collect());
            prop_assert_eq!(gs.apply(a + b).unwrap(), gs.apply(a).unwrap().apply(b).unwrap());
        }
    }
}
