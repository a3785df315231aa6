//! The two sides of the heat-trace formula: the spectral sum over eigenvalues
//! and the geometric side made of an identity (Plancherel) contribution and a
//! sum over closed geodesics.

use crate::error::{Error, Result};
use crate::quad::sinh_sinh;
use crate::repr::{plancherel_polynomial, PlancherelPolynomial, Weight};
use crate::spectrum::{EigenSpectrum, LengthSpectrum};
use crate::sum::ComplexSum;
use crate::zeta::{EulerSeries, TruncationPolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `ln(1e18)`: Gaussian factors below `e^{-GAUSS_CUT}` are dropped.
const GAUSS_CUT: f64 = 41.446_531_673_892_82;

/// Closed-form moments overflow beyond this degree and quadrature is used instead.
const MAX_MOMENT_DEGREE: usize = 40;

/// Geometric side of the heat trace at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatEvaluation {
    pub t: f64,
    pub identity_part: Complex64,
    pub hyperbolic_part: Complex64,
    pub total: Complex64,
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("heat time must be positive, got {t}")))
    }
}

/// `sum_k m_k e^{-t t_k}`.
pub fn spectral_heat_trace(es: &EigenSpectrum, t: f64) -> Result<Complex64> {
    check_t(t)?;
    Ok(es
        .entries()
        .iter()
        .map(|e| (-t * e.t).exp() * e.m as f64)
        .collect::<ComplexSum>()
        .value())
}

/// `int_R e^{-t lambda^2} P(i lambda) d lambda
///   = sum_m a_{2m} (-1)^m Gamma(m + 1/2) t^{-(m + 1/2)}`.
pub fn plancherel_heat_integral(p: &PlancherelPolynomial, t: f64) -> Result<Complex64> {
    check_t(t)?;
    if p.degree() > MAX_MOMENT_DEGREE {
        return sinh_sinh(|x| (-t * x * x).exp() * p.eval_i(x), 1e-13);
    }
    let mut gamma = PI.sqrt();
    let mut tpow = t.powf(-0.5);
    let mut acc = ComplexSum::new();
    for (m, a) in p.even_coeffs().iter().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(a * (sign * gamma * tpow));
        gamma *= m as f64 + 0.5;
        tpow /= t;
    }
    Ok(acc.value())
}

/// `sum l0 L_sym e^{-l^2/4t} / (4 pi t)^{1/2}` over the terms of `series`, skipping
/// terms whose Gaussian factor is below `1e-18`.
pub fn hyperbolic_heat(series: &EulerSeries, t: f64) -> Result<Complex64> {
    check_t(t)?;
    let norm = (4.0 * PI * t).sqrt();
    let cut = 4.0 * t * GAUSS_CUT;
    let parallel = series.policy().parallel;
    let terms: Vec<_> = series
        .terms()
        .iter()
        .take_while(|term| term.length * term.length <= cut)
        .collect();
    Ok(crate::sum::reduce(&terms, parallel, |term| {
        term.l_sym * (term.l0 * (-term.length * term.length / (4.0 * t)).exp() / norm)
    }))
}

/// Largest length that can still contribute to the hyperbolic heat sum at `t`.
fn heat_cutoff(ls: &LengthSpectrum, t: f64) -> f64 {
    let gauss = (4.0 * t * GAUSS_CUT).sqrt();
    let Some(systole) = ls.systole() else {
        return gauss;
    };
    let gd = ls.group();
    let k = ls
        .classes()
        .iter()
        .map(|c| c.chi_norm().ln() / c.l0())
        .fold(0.0, f64::max);
    let decay = gd.rho_norm() - k;
    if decay <= 0.0 {
        return gauss;
    }
    // every term is at most amp * l * e^{-decay l}; stop once that is negligible
    let det_lb = (1.0 - (-systole).exp()).powi(2 * gd.n() as i32);
    let amp = ls.dim_chi() as f64 * ls.classes().len() as f64 / det_lb;
    let mut geom = (GAUSS_CUT + amp.max(1.0).ln()) / decay;
    geom += 2.0 * (1.0 + geom).ln() / decay;
    gauss.min(geom.max(systole))
}

/// `dim_chi Vol(X) int e^{-t lambda^2} P_sigma(i lambda) d lambda` plus the
/// hyperbolic sum, with class powers enumerated up to the Gaussian cutoff.
pub fn geometric_heat_trace(
    ls: &LengthSpectrum,
    sigma: &Weight,
    t: f64,
    tp: &TruncationPolicy,
) -> Result<HeatEvaluation> {
    check_t(t)?;
    let p = plancherel_polynomial(ls.group(), sigma)?;
    let identity_part = plancherel_heat_integral(&p, t)? * (ls.dim_chi() as f64 * ls.volume());
    let policy = TruncationPolicy {
        lmax: heat_cutoff(ls, t),
        ..*tp
    };
    let series = EulerSeries::new(ls, sigma, policy)?;
    let hyperbolic_part = hyperbolic_heat(&series, t)?;
    Ok(HeatEvaluation {
        t,
        identity_part,
        hyperbolic_part,
        total: identity_part + hyperbolic_part,
    })
}
