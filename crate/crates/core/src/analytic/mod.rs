//! High-precision numerics: constants, zeta, digamma, and numeric checks of
//! the infinite-series identities.

mod checks;
mod constants;
mod zeta;

use crate::bigfloat::BigFloat;

pub use checks::{
    eval_dobinski_numeric, eval_eq17_18, eval_shifted_zeta, eval_eq30_family, eval_theorem5,
    eval_trig_series, zeta_half_power_sum, StartIndex, TrigKind,
};
pub use zeta::{digamma, hurwitz_zeta, zeta_int};

/// Bits held beyond `precision_bits` during evaluation.
pub(crate) const EXTRA_BITS: u32 = 64;
/// Pass threshold is `2^(32 - precision_bits)`.
pub(crate) const THRESHOLD_SLACK: i64 = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub precision_bits: u32,
    /// Bound the analytic tail of each infinite sum must fall below.
    pub tail_tolerance: BigFloat,
    pub max_terms: usize,
}

impl EvalConfig {
    pub fn new(precision_bits: u32) -> Self {
        EvalConfig {
            precision_bits,
            tail_tolerance: BigFloat::pow2(THRESHOLD_SLACK - i64::from(precision_bits), 64),
            max_terms: 10_000,
        }
    }

    /// Largest `|lhs - rhs|` accepted as a pass.
    pub fn threshold(&self) -> BigFloat {
        BigFloat::pow2(THRESHOLD_SLACK - i64::from(self.precision_bits), 64)
    }

    pub(crate) fn working_bits(&self) -> u32 {
        self.precision_bits + EXTRA_BITS
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::new(256)
    }
}

pub fn pi(cfg: &EvalConfig) -> BigFloat {
    constants::pi_at(cfg.precision_bits)
}

pub fn log2(cfg: &EvalConfig) -> BigFloat {
    constants::ln2_at(cfg.precision_bits)
}

/// Euler's constant.
pub fn gamma_euler(cfg: &EvalConfig) -> BigFloat {
    constants::gamma_at(cfg.precision_bits)
}
