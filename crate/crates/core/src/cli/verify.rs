//! Randomised self-checks of the resolvent and continuation identities.

use super::table::{Cell, Table};
use crate::continuation::{
    cauchy_plancherel_identity, heat_resolvent_identity, moment_sum, partial_fraction_coeffs, residue_order,
    small_t_combination, AnchorSet, ContinuedL,
};
use crate::error::{Error, Result};
use crate::repr::{plancherel_polynomial, GroupData, PlancherelPolynomial, Weight};
use crate::spectrum::{EigenEntry, EigenSpectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Partial fractions, moment vanishing and small-t order.
    Lemma6,
    /// Heat-resolvent and Cauchy-Plancherel integrals.
    Identities,
    /// Contour residues of the continued log-derivative.
    Residues,
    All,
}

/// Outcome of one check: the worst error seen and the tolerance it must stay below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if matches!(suite, Suite::Lemma6 | Suite::All) {
        out.push(resolvent_products(&mut rng)?);
        out.push(moments(&mut rng)?);
        out.push(small_t_order()?);
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        out.push(heat_resolvent()?);
        out.extend(cauchy_plancherel()?);
    }
    if matches!(suite, Suite::Residues | Suite::All) {
        out.push(residues(&mut rng)?);
    }
    Ok(out)
}

pub fn results_table(results: &[CheckResult]) -> Table {
    let mut t = Table::new(&["check", "max_error", "tolerance", "pass"]);
    for r in results {
        t.push(vec![
            Cell::Text(r.name.clone()),
            Cell::Real(r.max_error),
            Cell::Real(r.tolerance),
            Cell::Text(if r.passed() { "true" } else { "false" }.into()),
        ])
        .expect("four cells");
    }
    t
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn random_anchors(rng: &mut ChaCha8Rng, n: usize) -> Result<AnchorSet> {
    let s = (0..n)
        .map(|_| Complex64::new(uniform(rng, 0.5, 3.0), uniform(rng, -0.7, 0.7)))
        .collect();
    AnchorSet::new(s)
}

fn inverse(m: DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    m.try_inverse().ok_or_else(|| Error::Quadrature("singular test matrix".into()))
}

/// `prod_i (A + s_i^2)^{-1} = sum_i c_i (A + s_i^2)^{-1}` for random diagonalisable `A`.
fn resolvent_products(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    const DIM: usize = 5;
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..10 {
            let basis = DMatrix::from_fn(DIM, DIM, |_, _| gaussian(rng) * 0.3) + DMatrix::identity(DIM, DIM);
            let eig = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(DIM, |_, _| {
                Complex64::new(uniform(rng, 0.2, 4.0), uniform(rng, -1.0, 1.0))
            }));
            let a = &basis * eig * inverse(basis.clone())?;
            let anchors = random_anchors(rng, n)?;
            let c = partial_fraction_coeffs(&anchors);
            let mut lhs = DMatrix::identity(DIM, DIM);
            let mut rhs = DMatrix::zeros(DIM, DIM);
            for (s, ci) in anchors.points().iter().zip(&c) {
                let r = inverse(&a + DMatrix::identity(DIM, DIM) * (s * s))?;
                lhs = &lhs * &r;
                rhs += r * *ci;
            }
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(CheckResult::new("resolvent_partial_fractions", worst, 1e-9))
}

/// `sum_i s_i^{2l} c_i = 0` for `l <= N - 2`, relative to `sum_i |s_i^{2l} c_i|`.
fn moments(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let exact = AnchorSet::from_real(&[1.0, 2.0, 3.0])?;
    let mut worst = moment_sum(&exact, 1)?.norm();
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let a = random_anchors(rng, n)?;
        let c = partial_fraction_coeffs(&a);
        for l in 0..=n - 2 {
            let scale: f64 = a
                .points()
                .iter()
                .zip(&c)
                .map(|(s, ci)| (s * s).powu(l as u32).norm() * ci.norm())
                .sum();
            worst = worst.max(moment_sum(&a, l)?.norm() / scale);
        }
    }
    Ok(CheckResult::new("moment_vanishing", worst, 1e-9))
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `sum_i c_i e^{-t s_i^2} = O(t^{N-1})`; reports the shortfall of the fitted slope.
fn small_t_order() -> Result<CheckResult> {
    let ts: Vec<f64> = (0..9).map(|k| 10f64.powf(-4.0 + 0.25 * k as f64)).collect();
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        let a = AnchorSet::from_real(&(1..=n).map(|k| 0.5 + 0.6 * k as f64).collect::<Vec<_>>())?;
        let ys = ts
            .iter()
            .map(|&t| small_t_combination(&a, t).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?;
        let slope = log_log_slope(&ts, &ys);
        worst = worst.max((n as f64 - 1.0) - slope);
    }
    Ok(CheckResult::new("small_t_order_shortfall", worst, 0.1))
}

fn heat_resolvent() -> Result<CheckResult> {
    let ss = [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(2.0, 1.0),
        Complex64::new(3.0, -1.0),
        Complex64::new(0.5, 0.0),
    ];
    let ls = [0.2, 1.4, 2.6, 3.8, 5.0];
    let mut worst: f64 = 0.0;
    for s in ss {
        for l in ls {
            let (lhs, rhs) = heat_resolvent_identity(s, l)?;
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    Ok(CheckResult::new("heat_resolvent_identity", worst, 1e-7))
}

fn cauchy_plancherel() -> Result<Vec<CheckResult>> {
    let ss = [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.5),
        Complex64::new(0.7, -1.3),
    ];
    let one = PlancherelPolynomial::constant(1.0);
    let quad = plancherel_polynomial(&GroupData::new(3)?, &Weight::zero(1))?;
    let (mut w1, mut w2): (f64, f64) = (0.0, 0.0);
    for s in ss {
        let r = cauchy_plancherel_identity(s, &one)?;
        w1 = w1.max((r.lhs - r.rhs).norm());
        let r = cauchy_plancherel_identity(s, &quad)?;
        w2 = w2.max((r.lhs - r.rhs).norm() / r.rhs.norm());
    }
    Ok(vec![
        CheckResult::new("cauchy_plancherel_constant", w1, 1e-10),
        CheckResult::new("cauchy_plancherel_quadratic", w2, 1e-6),
    ])
}

/// A random finite spectrum whose singularities are kept apart.
pub fn random_eigen_spectrum(rng: &mut ChaCha8Rng, with_zero: bool) -> Result<EigenSpectrum> {
    let count = rng.random_range(1..=5);
    let mut entries: Vec<EigenEntry> = Vec::new();
    if with_zero {
        entries.push(EigenEntry {
            t: Complex64::new(0.0, 0.0),
            m: rng.random_range(1..=3),
        });
    }
    while entries.len() < count + usize::from(with_zero) {
        let t = Complex64::new(uniform(rng, -3.0, 6.0), uniform(rng, -3.0, 3.0));
        if entries.iter().all(|e| (e.t - t).norm() > 0.3) && t.norm() > 0.3 {
            entries.push(EigenEntry {
                t,
                m: rng.random_range(1..=4),
            });
        }
    }
    EigenSpectrum::new(entries)
}

/// Contour orders equal the predicted multiplicities; the error is the largest
/// distance between the raw contour integral and the prediction, infinite on a
/// rounding mismatch.
fn residues(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let gd = GroupData::new(3)?;
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let es = random_eigen_spectrum(rng, k == 0)?;
        let cl = ContinuedL::for_sigma(es, &gd, &Weight::zero(1), 1, 1.0)?;
        for sing in cl.singularities() {
            let r = residue_order(&cl, sing.s)?;
            let err = (r.raw - sing.expected_order as f64).norm();
            worst = worst.max(if r.order == sing.expected_order as i64 { err } else { f64::INFINITY });
        }
    }
    Ok(CheckResult::new("continuation_residues", worst, 1e-6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(2.5)).collect();
        assert!((log_log_slope(&xs, &ys) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn all_suites_pass() {
        let results = run_suite(Suite::All, 11).unwrap();
        assert_eq!(results.len(), 7);
        for r in &results {
            assert!(r.passed(), "{r:?}");
        }
    }
}
