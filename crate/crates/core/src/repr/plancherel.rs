use super::{GroupData, Weight};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

type Q = Ratio<i128>;

/// An even polynomial `P(z) = sum_m a_{2m} z^{2m}` with complex coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlancherelPolynomial {
    /// `coeffs[m]` multiplies `z^{2m}`.
    coeffs: Vec<Complex64>,
}

impl PlancherelPolynomial {
    pub fn from_even_coeffs(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_even_coeffs(vec![Complex64::new(c, 0.0)])
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn even_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree in `z`.
    pub fn degree(&self) -> usize {
        2 * (self.coeffs.len() - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z2 + c)
    }

    /// `P(i lambda)` for real `lambda`.
    pub fn eval_i(&self, lambda: f64) -> Complex64 {
        let u = -lambda * lambda;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_even_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

/// All coefficients (odd ones included) of the root product
/// `prod_{alpha > 0} <z e_1 + nu_sigma + rho_m, alpha> / <rho_g, alpha>` over the
/// positive roots `e_i ± e_j` of `D_{n+1}`, computed in exact rational
/// arithmetic. Index `k` multiplies `z^k`.
pub fn root_product_coefficients(gd: &GroupData, sigma: &Weight) -> Result<Vec<Q>> {
    gd.check_m_weight(sigma)?;
    let n = gd.n();
    // coordinates 2..=n+1 of the evaluation point, as exact halves
    let x: Vec<Q> = sigma
        .twice()
        .iter()
        .zip(gd.rho_m().twice())
        .map(|(a, b)| Q::new((a + b) as i128, 2))
        .collect();
    let rho: Vec<Q> = gd.rho_g().twice().iter().map(|&r| Q::new(r as i128, 2)).collect();

    let mut poly = vec![Q::from_integer(1)];
    let mul_linear = |p: &[Q], c: Q| -> Vec<Q> {
        // (z + c) * p
        let mut out = vec![Q::from_integer(0); p.len() + 1];
        for (k, a) in p.iter().enumerate() {
            out[k + 1] += *a;
            out[k] += *a * c;
        }
        out
    };
    for j in 1..=n {
        let xj = x[j - 1];
        poly = mul_linear(&poly, xj);
        poly = mul_linear(&poly, -xj);
        let denom = (rho[0] + rho[j]) * (rho[0] - rho[j]);
        poly.iter_mut().for_each(|a| *a /= denom);
    }
    let mut constant = Q::from_integer(1);
    for i in 1..=n {
        for j in i + 1..=n {
            let (xi, xj) = (x[i - 1], x[j - 1]);
            constant *= (xi + xj) * (xi - xj) / ((rho[i] + rho[j]) * (rho[i] - rho[j]));
        }
    }
    poly.iter_mut().for_each(|a| *a *= constant);
    Ok(poly)
}

/// The Plancherel polynomial `P_sigma(z)`, with `z` standing for `i lambda`.
///
/// The product is taken verbatim, sign included; for `d = 3` it gives
/// `P(z) = z^2 - k^2`, i.e. a negative density `P(i lambda) = -(lambda^2 + k^2)`.
pub fn plancherel_polynomial(gd: &GroupData, sigma: &Weight) -> Result<PlancherelPolynomial> {
    let all = root_product_coefficients(gd, sigma)?;
    if let Some((k, _)) = all
        .iter()
        .enumerate()
        .find(|(k, a)| k % 2 == 1 && **a != Q::from_integer(0))
    {
        return Err(Error::invalid(format!(
            "root product for {sigma} has a nonzero odd coefficient at z^{k}"
        )));
    }
    let even = all
        .iter()
        .step_by(2)
        .map(|a| Complex64::new(*a.numer() as f64 / *a.denom() as f64, 0.0))
        .collect();
    Ok(PlancherelPolynomial::from_even_coeffs(even))
}
