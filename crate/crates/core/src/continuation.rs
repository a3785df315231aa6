//! Meromorphic continuation of the Selberg log-derivative through the
//! partial-fraction form of products of resolvents.
//!
//! For anchors `s_1, ..., s_N` with distinct squares,
//! `prod_i (x + s_i^2)^{-1} = sum_i c_i (x + s_i^2)^{-1}` with
//! `c_i = prod_{j != i} (s_j^2 - s_i^2)^{-1}`. Applied to the heat trace this turns the
//! trace formula into an identity between resolvent traces, which is solved for
//! the log-derivative `L(s)`.

use crate::error::{Error, Result};
use crate::heat::{hyperbolic_heat, plancherel_heat_integral};
use crate::quad::{exp_sinh, gauss_kronrod, sinh_sinh};
use crate::repr::{plancherel_polynomial, GroupData, PlancherelPolynomial, Weight};
use crate::spectrum::{EigenSpectrum, LengthSpectrum};
use crate::sum::ComplexSum;
use crate::zeta::{EulerSeries, TruncationPolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Relative distance below which a point is treated as sitting on a pole.
const POLE_TOL: f64 = 1e-13;

/// Nodes of the trapezoid rule on the residue contour.
const RESIDUE_NODES: usize = 64;

/// Minimal distance between an integration path and a singularity.
const PATH_MARGIN: f64 = 1e-3;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Auxiliary points `s_1, ..., s_N` with pairwise distinct squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct AnchorSet {
    s: Vec<Complex64>,
}

impl AnchorSet {
    pub fn new(s: Vec<Complex64>) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::invalid(format!("need at least two anchors, got {}", s.len())));
        }
        if s.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("anchors must be finite"));
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let (a, b) = (s[i] * s[i], s[j] * s[j]);
                if (a - b).norm() <= 1e-14 * a.norm().max(b.norm()).max(1.0) {
                    return Err(Error::invalid(format!(
                        "anchors {} and {} have coincident squares",
                        s[i], s[j]
                    )));
                }
            }
        }
        Ok(Self { s })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    fn squares(&self) -> Vec<Complex64> {
        self.s.iter().map(|z| z * z).collect()
    }
}

impl TryFrom<Vec<Complex64>> for AnchorSet {
    type Error = Error;

    fn try_from(s: Vec<Complex64>) -> Result<Self> {
        AnchorSet::new(s)
    }
}

impl From<AnchorSet> for Vec<Complex64> {
    fn from(a: AnchorSet) -> Self {
        a.s
    }
}

/// `c_i = prod_{j != i} 1 / (s_j^2 - s_i^2)`.
pub fn partial_fraction_coeffs(a: &AnchorSet) -> Vec<Complex64> {
    let x = a.squares();
    (0..x.len())
        .map(|i| {
            let denom: Complex64 = (0..x.len()).filter(|&j| j != i).map(|j| x[j] - x[i]).product();
            1.0 / denom
        })
        .collect()
}

/// `sum_i s_i^{2l} c_i`, which vanishes for `l <= N - 2`. At `l = N - 1` it equals
/// `(-1)^{N-1}`; larger `l` are rejected.
pub fn moment_sum(a: &AnchorSet, l: usize) -> Result<Complex64> {
    if l + 1 > a.len() {
        return Err(Error::invalid(format!(
            "moment order {l} out of range 0..={} for {} anchors",
            a.len() - 1,
            a.len()
        )));
    }
    let c = partial_fraction_coeffs(a);
    Ok(a
        .squares()
        .iter()
        .zip(&c)
        .map(|(x, ci)| x.powu(l as u32) * ci)
        .collect::<ComplexSum>()
        .value())
}

/// `sum_i c_i e^{-t s_i^2}`, which is `O(t^{N-1})` as `t -> 0`.
///
/// For small `t |s_i^2|` the sum is evaluated from its Taylor series
/// `(-1)^{N-1} sum_m (-t)^{m+N-1} / (m+N-1)! h_m(s_1^2, ..., s_N^2)` with the complete
/// homogeneous symmetric polynomials `h_m`, avoiding the cancellation of the direct sum.
pub fn small_t_combination(a: &AnchorSet, t: f64) -> Result<Complex64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    let x = a.squares();
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if t * scale > 2.0 {
        let c = partial_fraction_coeffs(a);
        return Ok(x.iter().zip(&c).map(|(xi, ci)| ci * (-t * xi).exp()).collect::<ComplexSum>().value());
    }
    let n = x.len();
    const TERMS: usize = 120;
    let mut h = vec![zero(); TERMS];
    h[0] = Complex64::new(1.0, 0.0);
    for xi in &x {
        for m in 1..TERMS {
            let prev = h[m - 1];
            h[m] += xi * prev;
        }
    }
    // (-t)^{N-1} / (N-1)!
    let mut coef = Complex64::new(1.0, 0.0);
    for k in 1..n {
        coef *= -t / k as f64;
    }
    let mut acc = ComplexSum::new();
    for (m, hm) in h.iter().enumerate() {
        let term = coef * hm;
        acc.add(term);
        if m > 4 && term.norm() <= 1e-18 * acc.value().norm() {
            break;
        }
        coef *= -t / (m + n) as f64;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(acc.value() * sign)
}

/// Both sides of `int_0^inf e^{-t s^2} e^{-l^2/4t} (4 pi t)^{-1/2} dt = e^{-s l} / (2s)`,
/// the left one by double-exponential quadrature along a ray rotated into the sector
/// where the integrand decays.
pub fn heat_resolvent_identity(s: Complex64, l: f64) -> Result<(Complex64, Complex64)> {
    if !((s * s).re > 0.0 && s.re > 0.0) {
        return Err(Error::invalid(format!("need Re s > 0 and Re s^2 > 0, got s = {s}")));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::invalid(format!("length must be positive, got {l}")));
    }
    let s2 = s * s;
    // along arg t = -arg(s^2)/2 both exponentials decay at least like e^{-|.| cos(pi/4)}
    let w = Complex64::from_polar(1.0, -0.5 * s2.arg());
    let lhs = exp_sinh(
        |tau| {
            let t = w * tau;
            w * (-t * s2).exp() * ((-l * l / (4.0 * t)).exp() / (4.0 * PI * t).sqrt())
        },
        1e-13,
    )?;
    let rhs = (-s * l).exp() / (2.0 * s);
    Ok((lhs, rhs))
}

/// Result of [`cauchy_plancherel_identity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyPlancherel {
    /// Quadrature of the regularised integrand `r / (lambda^2 + s^2)`.
    pub lhs: Complex64,
    /// `(pi / s) P(s)`.
    pub rhs: Complex64,
    /// Coefficients of `q(u)`, `u = lambda^2`, in `P(i lambda) = q(lambda^2)(lambda^2 + s^2) + r`.
    pub quotient: Vec<Complex64>,
    /// `r`, equal to `P(s)`.
    pub remainder: Complex64,
}

/// `int_R P(i lambda) / (lambda^2 + s^2) d lambda = (pi / s) P(s)`.
///
/// For `deg P >= 2` the integral diverges; its finite part is defined by dividing
/// `p(u) = P(i sqrt u)` by `u + s^2` and dropping the polynomial quotient, which is
/// reported alongside.
pub fn cauchy_plancherel_identity(s: Complex64, p: &PlancherelPolynomial) -> Result<CauchyPlancherel> {
    if s.re == 0.0 || !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::invalid(format!("s = {s} lies on the imaginary axis")));
    }
    // p(u) = sum_m a_{2m} (-1)^m u^m
    let pu: Vec<Complex64> = p
        .even_coeffs()
        .iter()
        .enumerate()
        .map(|(m, a)| if m % 2 == 0 { *a } else { -a })
        .collect();
    // synthetic division by (u - root), root = -s^2
    let root = -(s * s);
    let deg = pu.len() - 1;
    let mut quotient = vec![zero(); deg];
    let mut carry = zero();
    for k in (0..=deg).rev() {
        carry = carry * root + pu[k];
        if k > 0 {
            quotient[k - 1] = carry;
        }
    }
    let remainder = carry;
    let s2 = s * s;
    let lhs = sinh_sinh(|lam| remainder / (lam * lam + s2), 1e-13)?;
    Ok(CauchyPlancherel {
        lhs,
        rhs: PI / s * p.eval(s),
        quotient,
        remainder,
    })
}

/// `sum_k m_k prod_i (t_k + s_i^2)^{-1}`.
pub fn resolvent_trace_spectral(es: &EigenSpectrum, a: &AnchorSet) -> Result<Complex64> {
    let x = a.squares();
    let mut acc = ComplexSum::new();
    for e in es.entries() {
        let mut prod = Complex64::new(e.m as f64, 0.0);
        for (xi, si) in x.iter().zip(a.points()) {
            let d = e.t + xi;
            if d.norm() <= POLE_TOL * e.t.norm().max(xi.norm()).max(1.0) {
                return Err(Error::Pole {
                    s: *si,
                    reason: format!("anchor square cancels eigenvalue t = {}", e.t),
                });
            }
            prod /= d;
        }
        acc.add(prod);
    }
    Ok(acc.value())
}

fn check_anchor_half_plane(a: &AnchorSet) -> Result<()> {
    for s in a.points() {
        if !(s.re > 0.0 && (s * s).re > 0.0) {
            return Err(Error::domain(*s, "anchors need Re s > 0 and Re s^2 > 0"));
        }
    }
    Ok(())
}

/// `sum_i c_i [ (pi / s_i) dim_chi Vol(X) P(s_i) + L(s_i) / (2 s_i) ]` with `L` the
/// truncated log-derivative series.
pub fn resolvent_trace_geometric(
    ls: &LengthSpectrum,
    sigma: &Weight,
    a: &AnchorSet,
    tp: &TruncationPolicy,
) -> Result<Complex64> {
    check_anchor_half_plane(a)?;
    let series = EulerSeries::new(ls, sigma, *tp)?;
    let p = plancherel_polynomial(ls.group(), sigma)?;
    let dv = ls.dim_chi() as f64 * ls.volume();
    let c = partial_fraction_coeffs(a);
    let mut acc = ComplexSum::new();
    for (si, ci) in a.points().iter().zip(&c) {
        let l = series.log_derivative(*si)?.value;
        acc.add(ci * (PI / si * dv * p.eval(*si) + l / (2.0 * si)));
    }
    Ok(acc.value())
}

/// `int_0^inf sum_i c_i e^{-t s_i^2} Theta(t) dt` with `Theta` the geometric side of
/// the heat trace, over the same class powers as [`resolvent_trace_geometric`].
/// Needs `N > d/2` for integrability at `t = 0`.
pub fn resolvent_trace_via_heat(
    ls: &LengthSpectrum,
    sigma: &Weight,
    a: &AnchorSet,
    tp: &TruncationPolicy,
) -> Result<Complex64> {
    let gd = ls.group();
    if 2 * a.len() <= gd.d() as usize {
        return Err(Error::invalid(format!(
            "{} anchors do not make the heat integral converge at t = 0 for d = {} (need N > d/2)",
            a.len(),
            gd.d()
        )));
    }
    check_anchor_half_plane(a)?;
    let series = EulerSeries::new(ls, sigma, *tp)?;
    let p = plancherel_polynomial(gd, sigma)?;
    let dv = ls.dim_chi() as f64 * ls.volume();
    let failure = RefCell::new(None);
    let integrand = |t: f64| -> Complex64 {
        let run = || -> Result<Complex64> {
            let comb = small_t_combination(a, t)?;
            if comb == zero() {
                return Ok(zero());
            }
            let theta = plancherel_heat_integral(&p, t)? * dv + hyperbolic_heat(&series, t)?;
            Ok(comb * theta)
        };
        run().unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        })
    };
    let value = exp_sinh(integrand, 1e-12);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

/// The continued log-derivative in spectral form:
/// `L(s) = 2s sum_k m_k / (s^2 + t_k) - 2 pi dim_chi Vol(X) P(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedL {
    spectrum: EigenSpectrum,
    p: PlancherelPolynomial,
    dim_chi: usize,
    volume: f64,
}

/// A pole `s` of the continued log-derivative together with the residue predicted
/// from the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub s: Complex64,
    pub t: Complex64,
    pub expected_order: u64,
}

/// `sqrt(t)` with `Re >= 0`; for negative real `t` the root with positive imaginary part.
pub fn principal_sqrt(t: Complex64) -> Complex64 {
    // -0.0 in the imaginary part would select the lower root
    let t = Complex64::new(t.re, if t.im == 0.0 { 0.0 } else { t.im });
    t.sqrt()
}

impl ContinuedL {
    pub fn new(spectrum: EigenSpectrum, p: PlancherelPolynomial, dim_chi: usize, volume: f64) -> Result<Self> {
        if dim_chi == 0 {
            return Err(Error::invalid("dim_chi must be positive"));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::invalid(format!("volume must be positive, got {volume}")));
        }
        Ok(Self {
            spectrum,
            p,
            dim_chi,
            volume,
        })
    }

    /// Uses the Plancherel polynomial of `sigma`.
    pub fn for_sigma(
        spectrum: EigenSpectrum,
        gd: &GroupData,
        sigma: &Weight,
        dim_chi: usize,
        volume: f64,
    ) -> Result<Self> {
        Self::new(spectrum, plancherel_polynomial(gd, sigma)?, dim_chi, volume)
    }

    pub fn spectrum(&self) -> &EigenSpectrum {
        &self.spectrum
    }

    pub fn plancherel(&self) -> &PlancherelPolynomial {
        &self.p
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let s2 = s * s;
        let mut acc = ComplexSum::new();
        for e in self.spectrum.entries() {
            let d = s2 + e.t;
            if d.norm() <= POLE_TOL * e.t.norm().max(s2.norm()).max(1.0) {
                return Err(Error::Pole {
                    s,
                    reason: format!("singularity from eigenvalue t = {}", e.t),
                });
            }
            acc.add(e.m as f64 / d);
        }
        let dv = self.dim_chi as f64 * self.volume;
        Ok(2.0 * s * acc.value() - 2.0 * PI * dv * self.p.eval(s))
    }

    /// The points `+- i sqrt(t_k)` (only `0` for `t_k = 0`), merged when they coincide.
    pub fn singularities(&self) -> Vec<Singularity> {
        let mut out: Vec<Singularity> = Vec::new();
        for e in self.spectrum.entries() {
            let r = principal_sqrt(e.t);
            let candidates: Vec<(Complex64, u64)> = if e.t == zero() {
                vec![(zero(), 2 * e.m as u64)]
            } else {
                let i = Complex64::new(0.0, 1.0);
                vec![(i * r, e.m as u64), (-i * r, e.m as u64)]
            };
            for (s, m) in candidates {
                match out.iter_mut().find(|x| x.s == s) {
                    Some(x) => x.expected_order += m,
                    None => out.push(Singularity {
                        s,
                        t: e.t,
                        expected_order: m,
                    }),
                }
            }
        }
        out
    }

    /// Checks the defining relation against the resolvent trace: returns
    /// `sum_i c_i L(s_i) / (2 s_i)` and
    /// `resolvent_trace_spectral - sum_i c_i (pi / s_i) dim_chi Vol(X) P(s_i)`.
    pub fn anchor_consistency(&self, a: &AnchorSet) -> Result<(Complex64, Complex64)> {
        let c = partial_fraction_coeffs(a);
        let dv = self.dim_chi as f64 * self.volume;
        let mut lhs = ComplexSum::new();
        let mut planch = ComplexSum::new();
        for (si, ci) in a.points().iter().zip(&c) {
            lhs.add(ci * self.eval(*si)? / (2.0 * si));
            planch.add(ci * PI / si * dv * self.p.eval(*si));
        }
        let rhs = resolvent_trace_spectral(&self.spectrum, a)? - planch.value();
        Ok((lhs.value(), rhs))
    }
}

/// Contour estimate of a residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueOrder {
    pub point: Complex64,
    pub order: i64,
    /// The unrounded contour integral `(1 / 2 pi i) \oint L`.
    pub raw: Complex64,
    pub radius: f64,
}

/// Residue of the continued log-derivative at the singularity within `1e-6` of
/// `point`, from a 64-node trapezoid rule on the circle whose radius is half the
/// distance to the nearest other singularity.
pub fn residue_order(cl: &ContinuedL, point: Complex64) -> Result<ResidueOrder> {
    let sing = cl.singularities();
    let centre = sing
        .iter()
        .map(|x| x.s)
        .filter(|s| (s - point).norm() <= 1e-6)
        .min_by(|a, b| (a - point).norm().total_cmp(&(b - point).norm()))
        .ok_or_else(|| Error::invalid(format!("no singularity within 1e-6 of {point}")))?;
    let gap = sing
        .iter()
        .map(|x| (x.s - centre).norm())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let radius = if gap.is_finite() { 0.5 * gap } else { 1.0 };
    let mut acc = ComplexSum::new();
    for k in 0..RESIDUE_NODES {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / RESIDUE_NODES as f64);
        let z = centre + radius * phase;
        acc.add(cl.eval(z)? * radius * phase);
    }
    let raw = acc.value() / RESIDUE_NODES as f64;
    Ok(ResidueOrder {
        point: centre,
        order: raw.re.round() as i64,
        raw,
        radius,
    })
}

/// Anything that can play the role of `L(s) = d/ds log Z(s)` along a path.
pub trait LogDerivative {
    fn log_derivative_at(&self, s: Complex64) -> Result<Complex64>;

    /// Points the integration path has to stay away from.
    fn singular_points(&self) -> Vec<Complex64> {
        Vec::new()
    }
}

impl LogDerivative for ContinuedL {
    fn log_derivative_at(&self, s: Complex64) -> Result<Complex64> {
        self.eval(s)
    }

    fn singular_points(&self) -> Vec<Complex64> {
        self.singularities().into_iter().map(|x| x.s).collect()
    }
}

impl LogDerivative for EulerSeries {
    fn log_derivative_at(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.log_derivative(s)?.value)
    }
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let tau = ((p - a) * ab.conj()).re / len2;
    (p - (a + ab * tau.clamp(0.0, 1.0))).norm()
}

/// `int L(w) dw` along the polyline `s0 -> via[0] -> ... -> s1`, which equals
/// `log Z(s1) - log Z(s0)` for the zeta function whose log-derivative is `L`.
/// Each segment is integrated by adaptive Gauss-Kronrod.
pub fn log_zeta_ratio<L: LogDerivative + ?Sized>(
    s0: Complex64,
    s1: Complex64,
    l: &L,
    via: &[Complex64],
) -> Result<Complex64> {
    let mut nodes = vec![s0];
    nodes.extend_from_slice(via);
    nodes.push(s1);
    let singular = l.singular_points();
    for w in nodes.windows(2) {
        for p in &singular {
            if distance_to_segment(*p, w[0], w[1]) < PATH_MARGIN {
                return Err(Error::domain(
                    *p,
                    format!("integration path {} -> {} passes within {PATH_MARGIN} of a singularity", w[0], w[1]),
                ));
            }
        }
    }
    let mut total = ComplexSum::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let delta = b - a;
        if delta == zero() {
            continue;
        }
        let failure = RefCell::new(None);
        let value = gauss_kronrod(
            |tau| match l.log_derivative_at(a + delta * tau) {
                Ok(v) => v * delta,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            },
            0.0,
            1.0,
            1e-13,
            1e-12,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        total.add(value?);
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_anchor_coefficients() {
        let a = AnchorSet::from_real(&[1.0, 2.0]).unwrap();
        let co = partial_fraction_coeffs(&a);
        assert!((co[0] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((co[1] - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        let x = 1.0;
        let lhs = co[0] / (x + 1.0) + co[1] / (x + 4.0);
        assert!((lhs - c(0.1, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coincident_squares_rejected() {
        assert!(AnchorSet::from_real(&[1.0, -1.0]).is_err());
        assert!(AnchorSet::from_real(&[1.0]).is_err());
    }

    #[test]
    fn moments_vanish_below_n_minus_one() {
        let a = AnchorSet::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert!(moment_sum(&a, 0).unwrap().norm() < 1e-15);
        assert!(moment_sum(&a, 1).unwrap().norm() < 1e-15);
        assert!((moment_sum(&a, 2).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(moment_sum(&a, 3).is_err());
    }

    #[test]
    fn small_t_series_matches_direct_sum() {
        let a = AnchorSet::new(vec![c(1.0, 0.2), c(2.0, -0.5), c(2.7, 0.1)]).unwrap();
        let co = partial_fraction_coeffs(&a);
        for t in [0.05, 0.2, 0.25] {
            let direct: Complex64 = a.points().iter().zip(&co).map(|(s, ci)| ci * (-t * s * s).exp()).sum();
            let series = small_t_combination(&a, t).unwrap();
            assert!((direct - series).norm() < 1e-12 * direct.norm(), "t={t}");
        }
        // N = 2, s = (1, 2): (e^{-t} - e^{-4t}) / 3
        let b = AnchorSet::from_real(&[1.0, 2.0]).unwrap();
        for t in [1e-6, 1e-3, 0.4, 3.0] {
            let v = small_t_combination(&b, t).unwrap();
            let expect = ((-t).exp_m1() - (-4.0 * t).exp_m1()) / 3.0;
            assert!((v.re - expect).abs() < 1e-14 * expect.abs(), "t={t}");
        }
    }

    #[test]
    fn heat_resolvent_sample() {
        let (lhs, rhs) = heat_resolvent_identity(c(1.0, 0.0), 1.0).unwrap();
        assert!((rhs.re - 0.183_939_720_585_721_2).abs() < 1e-15);
        assert!((lhs - rhs).norm() < 1e-8);
        assert!(heat_resolvent_identity(c(0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn cauchy_plancherel_constant_and_quadratic() {
        let one = PlancherelPolynomial::constant(1.0);
        let r = cauchy_plancherel_identity(c(2.0, 0.0), &one).unwrap();
        assert!((r.lhs - c(PI / 2.0, 0.0)).norm() < 1e-10);
        assert!((r.rhs - c(PI / 2.0, 0.0)).norm() < 1e-15);
        assert!(r.quotient.is_empty());

        let z2 = PlancherelPolynomial::from_even_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let s = c(1.5, 0.5);
        let r = cauchy_plancherel_identity(s, &z2).unwrap();
        assert!((r.rhs - PI * s).norm() < 1e-13);
        assert!((r.lhs - r.rhs).norm() < 1e-6 * r.rhs.norm());
        // -lambda^2 = -1 * (lambda^2 + s^2) + s^2
        assert_eq!(r.quotient.len(), 1);
        assert!((r.quotient[0] + 1.0).norm() < 1e-15);
        assert!((r.remainder - s * s).norm() < 1e-14);
    }

    #[test]
    fn spectral_resolvent_examples() {
        let a = AnchorSet::from_real(&[1.0, 2.0]).unwrap();
        let es = EigenSpectrum::from_pairs(&[(c(0.0, 0.0), 1)]).unwrap();
        assert!((resolvent_trace_spectral(&es, &a).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
        let es = EigenSpectrum::from_pairs(&[(c(1.0, 0.0), 1), (c(4.0, 0.0), 2)]).unwrap();
        assert!((resolvent_trace_spectral(&es, &a).unwrap() - c(0.15, 0.0)).norm() < 1e-15);
        let clash = EigenSpectrum::from_pairs(&[(c(-4.0, 0.0), 1)]).unwrap();
        assert!(matches!(resolvent_trace_spectral(&clash, &a), Err(Error::Pole { .. })));
    }

    #[test]
    fn residues_of_simple_spectra() {
        let zero_p = PlancherelPolynomial::zero();
        let cl = ContinuedL::new(EigenSpectrum::from_pairs(&[(c(4.0, 0.0), 2)]).unwrap(), zero_p.clone(), 1, 1.0).unwrap();
        let r = residue_order(&cl, c(0.0, 2.0)).unwrap();
        assert_eq!(r.order, 2);
        assert!((r.raw - c(2.0, 0.0)).norm() < 1e-6);
        assert!(matches!(cl.eval(c(0.0, 2.0)), Err(Error::Pole { .. })));

        let cl = ContinuedL::new(EigenSpectrum::from_pairs(&[(c(0.0, 0.0), 3)]).unwrap(), zero_p, 1, 1.0).unwrap();
        assert_eq!(residue_order(&cl, c(0.0, 0.0)).unwrap().order, 6);
        assert!(residue_order(&cl, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn negative_eigenvalue_branch() {
        assert_eq!(principal_sqrt(c(-4.0, -0.0)), c(0.0, 2.0));
        let cl = ContinuedL::new(
            EigenSpectrum::from_pairs(&[(c(-4.0, 0.0), 1)]).unwrap(),
            PlancherelPolynomial::zero(),
            1,
            1.0,
        )
        .unwrap();
        let pts: Vec<Complex64> = cl.singularities().iter().map(|x| x.s).collect();
        assert!(pts.contains(&c(-2.0, 0.0)) && pts.contains(&c(2.0, 0.0)));
    }

    #[test]
    fn continued_l_parity() {
        let g = GroupData::new(5).unwrap();
        let es = EigenSpectrum::from_pairs(&[(c(1.5, 0.0), 1), (c(3.0, 1.0), 2)]).unwrap();
        let cl = ContinuedL::for_sigma(es, &g, &Weight::zero(2), 2, 0.7).unwrap();
        let s = c(0.3, 1.1);
        let even = -4.0 * PI * 2.0 * 0.7 * cl.plancherel().eval(s);
        assert!((cl.eval(-s).unwrap() + cl.eval(s).unwrap() - even).norm() < 1e-10 * even.norm().max(1.0));
    }

    #[test]
    fn loops_pick_up_residues() {
        let cl = ContinuedL::new(
            EigenSpectrum::from_pairs(&[(c(1.0, 0.0), 3)]).unwrap(),
            PlancherelPolynomial::constant(0.5),
            1,
            1.0,
        )
        .unwrap();
        let square = |centre: Complex64, h: f64| {
            vec![centre + c(h, h), centre + c(-h, h), centre + c(-h, -h)]
        };
        // around s = i
        let start = c(0.5, 0.5);
        let v = log_zeta_ratio(start, start, &cl, &square(c(0.0, 1.0), 0.5)).unwrap();
        assert!((v - c(0.0, 2.0 * PI * 3.0)).norm() < 1e-8, "{v}");
        // around nothing
        let start = c(3.5, 0.5);
        let v = log_zeta_ratio(start, start, &cl, &square(c(3.0, 0.0), 0.5)).unwrap();
        assert!(v.norm() < 1e-8);
        // too close
        assert!(log_zeta_ratio(c(-1.0, 1.0), c(1.0, 1.0), &cl, &[]).is_err());
    }
}
