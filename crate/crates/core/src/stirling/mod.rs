//! Generalized Stirling numbers `S(n, k; alpha, beta, r)`.
//!
//! The single symbol used throughout the crate is pinned to the exponential
//! generating function
//!
//! ```text
//! sum_n S(n,k) t^n/n! = (1/k!) [((1 + alpha t)^(beta/alpha) - 1)/beta]^k (1 + alpha t)^(r/alpha)
//! ```
//!
//! with the usual limits when `alpha` or `beta` vanish. Tables are filled by
//! the triangular recurrence
//! `S(n+1,k) = S(n,k-1) + (k beta - n alpha + r) S(n,k)`, and
//! [`verify_against_gf`] re-derives every entry by coefficient extraction.

mod enumerate;

pub use enumerate::{enumerate_oracle, Enumeration, ENUMERATION_LIMIT};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, Rational};
use crate::report::{CheckReport, ExactCheck, IdentityId};
use crate::series::gf_stirling_column;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HsuShiueParams {
    alpha: Rational,
    beta: Rational,
    r: Rational,
}

impl HsuShiueParams {
    pub fn new(alpha: Rational, beta: Rational, r: Rational) -> Result<Self> {
        if alpha.is_zero() && beta.is_zero() && r.is_zero() {
            return Err(Error::DegenerateParams);
        }
        Ok(HsuShiueParams { alpha, beta, r })
    }

    pub fn from_ints(alpha: i64, beta: i64, r: i64) -> Result<Self> {
        Self::new(int(alpha), int(beta), int(r))
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// The classical `(0, 1, 0)` triple.
    pub fn classical() -> Self {
        Self::from_ints(0, 1, 0).expect("nondegenerate")
    }
}

impl fmt::Display for HsuShiueParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.alpha),
            format_rational(&self.beta),
            format_rational(&self.r)
        )
    }
}

/// Triangular table `S(n, k)` for `0 <= k <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    params: HsuShiueParams,
    rows: Vec<Vec<Rational>>,
}

impl StirlingTable {
    pub fn params(&self) -> &HsuShiueParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(n, k)`; zero for `k > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        assert!(
            n <= self.n_max(),
            "row {n} beyond table size {}",
            self.n_max()
        );
        self.rows[n].get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// Overwrites one entry. Only used to build negative controls.
    #[doc(hidden)]
    pub fn corrupt_entry(&mut self, n: usize, k: usize, value: Rational) {
        self.rows[n][k] = value;
    }
}

/// Fills the table by the triangular recurrence.
pub fn build_table(params: &HsuShiueParams, n_max: usize) -> StirlingTable {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![Rational::one()]);
    for n in 0..n_max {
        let prev = &rows[n];
        let n_alpha = params.alpha() * int(n as i64);
        let next: Vec<Rational> = (0..=n + 1)
            .map(|k| {
                let mut v = if k > 0 {
                    prev[k - 1].clone()
                } else {
                    Rational::zero()
                };
                if k <= n {
                    let weight = params.beta() * int(k as i64) - &n_alpha + params.r();
                    v += weight * &prev[k];
                }
                v
            })
            .collect();
        rows.push(next);
    }
    StirlingTable {
        params: params.clone(),
        rows,
    }
}

/// Named special cases of the three-parameter family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `{n k}`: `(0, 1, 0)`.
    Stirling2,
    /// `s(n, k)`: `(1, 0, 0)`, the `beta = 0` logarithmic limit.
    Stirling1Signed,
    /// Howard's `S(n, k, r | alpha)`: `(alpha, 1, r)`.
    HowardDegenerateWeighted,
    /// Carlitz's `S(n, k | alpha)`: `(alpha, 1, 0)`.
    CarlitzDegenerate,
    /// `{n+r k+r}_r`: `(0, 1, r)`.
    RStirling,
    /// `W_beta(n, k)`: `(0, beta, 1)`.
    Whitney,
    /// `W_{beta,r}(n, k)`: `(0, beta, r)`.
    RWhitney,
}

impl FamilyKind {
    pub const ALL: &'static [FamilyKind] = &[
        FamilyKind::Stirling2,
        FamilyKind::Stirling1Signed,
        FamilyKind::HowardDegenerateWeighted,
        FamilyKind::CarlitzDegenerate,
        FamilyKind::RStirling,
        FamilyKind::Whitney,
        FamilyKind::RWhitney,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Stirling2 => "stirling2",
            FamilyKind::Stirling1Signed => "stirling1_signed",
            FamilyKind::HowardDegenerateWeighted => "howard_degenerate_weighted",
            FamilyKind::CarlitzDegenerate => "carlitz_degenerate",
            FamilyKind::RStirling => "r_stirling",
            FamilyKind::Whitney => "whitney",
            FamilyKind::RWhitney => "r_whitney",
        }
    }

    /// Names of the extra parameters, in the order [`specialize`] expects.
    pub fn extra_params(self) -> &'static [&'static str] {
        match self {
            FamilyKind::Stirling2 | FamilyKind::Stirling1Signed => &[],
            FamilyKind::HowardDegenerateWeighted => &["alpha", "r"],
            FamilyKind::CarlitzDegenerate => &["alpha"],
            FamilyKind::RStirling => &["r"],
            FamilyKind::Whitney => &["beta"],
            FamilyKind::RWhitney => &["beta", "r"],
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "family",
                name: s.to_string(),
            })
    }
}

/// Parameter triple reproducing a named family under the pinned convention.
pub fn specialize(kind: FamilyKind, extra: &[Rational]) -> Result<HsuShiueParams> {
    let expected = kind.extra_params().len();
    if extra.len() != expected {
        return Err(Error::Domain(format!(
            "{} takes {expected} extra parameter(s) {:?}, got {}",
            kind.name(),
            kind.extra_params(),
            extra.len()
        )));
    }
    let zero = Rational::zero;
    let one = Rational::one;
    match kind {
        FamilyKind::Stirling2 => HsuShiueParams::new(zero(), one(), zero()),
        FamilyKind::Stirling1Signed => HsuShiueParams::new(one(), zero(), zero()),
        FamilyKind::HowardDegenerateWeighted => {
            HsuShiueParams::new(extra[0].clone(), one(), extra[1].clone())
        }
        FamilyKind::CarlitzDegenerate => HsuShiueParams::new(extra[0].clone(), one(), zero()),
        FamilyKind::RStirling => HsuShiueParams::new(zero(), one(), extra[0].clone()),
        FamilyKind::Whitney => HsuShiueParams::new(zero(), extra[0].clone(), one()),
        FamilyKind::RWhitney => HsuShiueParams::new(zero(), extra[0].clone(), extra[1].clone()),
    }
}

/// Compares every table entry with `n! [t^n]` of the column generating
/// function, for `k <= n <= order`.
pub fn verify_against_gf(table: &StirlingTable, order: usize) -> Result<CheckReport> {
    if order > table.n_max() {
        return Err(Error::Domain(format!(
            "order {order} exceeds table size {}",
            table.n_max()
        )));
    }
    let params = table.params();
    let mut check = ExactCheck::new(IdentityId::GF_VS_TABLE)
        .param("alpha", format_rational(params.alpha()))
        .param("beta", format_rational(params.beta()))
        .param("r", format_rational(params.r()))
        .param("order", order);
    for k in 0..=order {
        let column = gf_stirling_column(params, k, order);
        for n in k..=order {
            check.compare(
                format!("n={n},k={k}"),
                &column.egf_coeff(n),
                &table.get(n, k),
            );
        }
    }
    Ok(check.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gen_factorial, rat};
    use crate::report::Status;
    use proptest::prelude::*;

    #[test]
    fn diagonal_and_first_column() {
        let p = HsuShiueParams::new(rat(1, 2), int(3), int(-2)).unwrap();
        let t = build_table(&p, 9);
        for n in 0..=9 {
            assert_eq!(t.get(n, n), int(1));
            assert_eq!(t.get(n, 0), gen_factorial(p.r(), p.alpha(), n));
            assert_eq!(t.get(n, n + 1), int(0));
        }
    }

    #[test]
    fn small_entries() {
        let classical = build_table(&HsuShiueParams::classical(), 4);
        assert_eq!(classical.get(3, 2), int(3));
        assert_eq!(classical.row(4), &[int(0), int(1), int(7), int(6), int(1)]);

        let p = HsuShiueParams::new(rat(2, 3), rat(-5, 4), rat(7, 2)).unwrap();
        let t = build_table(&p, 2);
        assert_eq!(t.get(2, 1), p.r() * int(2) + p.beta() - p.alpha());
    }

    #[test]
    fn degenerate_triple_rejected() {
        assert_eq!(
            HsuShiueParams::from_ints(0, 0, 0),
            Err(Error::DegenerateParams)
        );
        assert!(HsuShiueParams::from_ints(0, 0, 1).is_ok());
    }

    #[test]
    fn specializations() {
        let p = specialize(FamilyKind::Stirling2, &[]).unwrap();
        assert_eq!(p, HsuShiueParams::from_ints(0, 1, 0).unwrap());
        assert_eq!(build_table(&p, 4).get(4, 2), int(7));

        let p = specialize(FamilyKind::RStirling, &[int(1)]).unwrap();
        assert_eq!(p, HsuShiueParams::from_ints(0, 1, 1).unwrap());
        let shifted = build_table(&p, 6);
        let classical = build_table(&HsuShiueParams::classical(), 7);
        for n in 0..=6 {
            for k in 0..=n {
                assert_eq!(shifted.get(n, k), classical.get(n + 1, k + 1));
            }
        }

        let p = specialize(FamilyKind::RWhitney, &[int(2), int(1)]).unwrap();
        assert_eq!(p, HsuShiueParams::from_ints(0, 2, 1).unwrap());
        assert_eq!(build_table(&p, 1).get(1, 1), int(1));

        let s1 = build_table(&specialize(FamilyKind::Stirling1Signed, &[]).unwrap(), 4);
        assert_eq!(s1.row(4), &[int(0), int(-6), int(11), int(-6), int(1)]);

        assert!(specialize(FamilyKind::Whitney, &[]).is_err());
        assert!("lah".parse::<FamilyKind>().is_err());
        for &kind in FamilyKind::ALL {
            assert_eq!(kind.name().parse::<FamilyKind>().unwrap(), kind);
        }
    }

    #[test]
    fn table_matches_gf() {
        let t = build_table(&HsuShiueParams::classical(), 10);
        assert_eq!(verify_against_gf(&t, 10).unwrap().status, Status::Pass);
        let p = HsuShiueParams::new(rat(1, 2), int(3), int(-2)).unwrap();
        let t = build_table(&p, 8);
        assert_eq!(verify_against_gf(&t, 8).unwrap().status, Status::Pass);
        for kind in [FamilyKind::Stirling1Signed, FamilyKind::CarlitzDegenerate] {
            let extra: Vec<Rational> = kind.extra_params().iter().map(|_| rat(-1, 3)).collect();
            let t = build_table(&specialize(kind, &extra).unwrap(), 7);
            assert!(verify_against_gf(&t, 7).unwrap().passed(), "{kind:?}");
        }
        assert!(verify_against_gf(&t, 9).is_err());
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let mut t = build_table(&HsuShiueParams::classical(), 6);
        t.corrupt_entry(5, 3, int(1));
        let report = verify_against_gf(&t, 6).unwrap();
        assert_eq!(report.status, Status::Fail);
        match report.witness {
            Some(crate::report::Witness::Exact {
                index,
                expected,
                actual,
            }) => {
                assert_eq!(index, "n=5,k=3");
                assert_eq!(expected, "25");
                assert_eq!(actual, "1");
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn stirling2_matches_enumeration() {
        let t = build_table(&HsuShiueParams::classical(), 8);
        for n in 0..=8 {
            for k in 0..=n {
                let count =
                    enumerate_oracle(Enumeration::SetPartitions { blocks: Some(k) }, n).unwrap();
                assert_eq!(t.get(n, k), int(count as i64), "n={n} k={k}");
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn recurrence_holds_everywhere(a in small_rational(), b in small_rational(), r in small_rational()) {
            prop_assume!(!(a.is_zero() && b.is_zero() && r.is_zero()));
            let p = HsuShiueParams::new(a, b, r).unwrap();
            let t = build_table(&p, 10);
            for n in 0..10 {
                for k in 1..=n + 1 {
                    let w = p.beta() * int(k as i64) - p.alpha() * int(n as i64) + p.r();
                    prop_assert_eq!(t.get(n + 1, k), t.get(n, k - 1) + w * t.get(n, k));
                }
            }
        }

        #[test]
        fn gf_agrees_with_recurrence(a in small_rational(), b in small_rational(), r in small_rational()) {
            prop_assume!(!b.is_zero());
            let p = HsuShiueParams::new(a, b, r).unwrap();
            let t = build_table(&p, 12);
            prop_assert!(verify_against_gf(&t, 12).unwrap().passed());
        }
    }
}
