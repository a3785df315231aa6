//! Root-system and weight combinatorics for `G = Spin(d,1)`, `K = Spin(d)` and
//! `M = Spin(d-1)` with `d = 2n + 1`.
//!
//! `K` has root system `B_n`, `M` has `D_n` and the complexified `G` has
//! `D_{n+1}`. Weights are stored exactly, as doubled integers, so that the
//! integral / half-integral class of a weight is never a floating-point
//! question.

mod branching;
mod plancherel;
mod weight;
mod weyl;

pub use branching::{
    branching_multiplicity, exterior_decomposition, m_tau_coeffs, restrict_to_m, tau_pm_split,
    weyl_action, VirtualRep,
};
pub use plancherel::{plancherel_polynomial, root_product_coefficients, PlancherelPolynomial};
pub use weight::Weight;
pub use weyl::{
    alternant_quotient, weight_multiset, weyl_character, weyl_dim, Character, GroupType,
    WeightMultiset,
};

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Structural constants of `Spin(d,1)` in the normalisation where the positive
/// restricted root has length one, so `|rho| = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupData {
    d: u32,
    n: usize,
    rho_g: Weight,
    rho_m: Weight,
}

impl GroupData {
    pub fn new(d: u32) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::invalid(format!(
                "dimension d must be an odd integer >= 3, got {d}"
            )));
        }
        let n = ((d - 1) / 2) as usize;
        let rho_g = Weight::from_twice((0..=n).rev().map(|k| 2 * k as i64).collect())?;
        let rho_m = Weight::from_twice((0..n).rev().map(|k| 2 * k as i64).collect())?;
        Ok(Self { d, n, rho_g, rho_m })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Rank of `K` and `M`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `|rho| = (d-1)/2`.
    pub fn rho_norm(&self) -> f64 {
        self.n as f64
    }

    /// Half-sum of positive roots of `D_{n+1}`: `(n, n-1, ..., 0)`.
    pub fn rho_g(&self) -> &Weight {
        &self.rho_g
    }

    /// Half-sum of positive roots of `D_n`: `(n-1, ..., 1, 0)`.
    pub fn rho_m(&self) -> &Weight {
        &self.rho_m
    }

    pub(crate) fn check_m_weight(&self, sigma: &Weight) -> Result<()> {
        if sigma.rank() != self.n {
            return Err(Error::invalid(format!(
                "M-weight {sigma} has rank {}, expected {} for d = {}",
                sigma.rank(),
                self.n,
                self.d
            )));
        }
        sigma.ensure_m_dominant()
    }
}

/// `c(sigma) = -|rho|^2 - |rho_m|^2 + |nu_sigma + rho_m|^2`, the constant by
/// which the Casimir acts on the principal series beyond `-lambda^2`.
pub fn c_sigma(gd: &GroupData, sigma: &Weight) -> Result<f64> {
    gd.check_m_weight(sigma)?;
    // everything in quarter units: (2x)^2 = 4 x^2
    let rho = 2 * gd.n() as i64;
    let rho_m: i64 = gd.rho_m().twice().iter().map(|r| r * r).sum();
    let shifted: i64 = sigma
        .twice()
        .iter()
        .zip(gd.rho_m().twice())
        .map(|(a, b)| (a + b) * (a + b))
        .sum();
    let quarter = Ratio::new(-rho * rho - rho_m + shifted, 4);
    Ok(*quarter.numer() as f64 / *quarter.denom() as f64)
}
