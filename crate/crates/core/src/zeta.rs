//! Euler-product logarithms of the twisted Selberg and Ruelle zeta functions,
//! the Selberg log-derivative, and the factorisation of Ruelle through the
//! shifted Selberg functions `Z_p`.
//!
//! All series run over the powers `gamma_0^j` of length at most
//! [`TruncationPolicy::lmax`]. Each value carries a bound for the omitted tail.
//! The bound majorises every omitted term by `A e^{-a l}`, where
//! `|tr chi(gamma)| <= dim_chi e^{k l}` with `k = max log ||chi(gamma_0)|| / l0`, and
//! counts classes with `N(R) <= C' e^{2|rho| R}`, `C'` taken as the largest value
//! of `N(R) e^{-2|rho| R}` seen up to `lmax`.

use crate::error::{Error, Result};
use crate::repr::{exterior_decomposition, Character, GroupData, GroupType, Weight};
use crate::spectrum::{ClassPower, LengthSpectrum};
use crate::sum::reduce;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Where to cut the class sums and how much tail to tolerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationPolicy {
    /// Largest length `j * l0` enumerated.
    pub lmax: f64,
    /// Largest acceptable tail bound.
    pub tail_eps: f64,
    /// Points with `Re s <= abscissa - abscissa_margin` are rejected outright.
    pub abscissa_margin: f64,
    /// Evaluate the class sums on the rayon pool. Results are bit-identical either way.
    pub parallel: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            lmax: 30.0,
            tail_eps: 1e-10,
            abscissa_margin: 0.0,
            parallel: false,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.lmax.is_finite() && self.lmax > 0.0) {
            return Err(Error::invalid_at("lmax", format!("must be positive, got {}", self.lmax)));
        }
        if !(self.tail_eps > 0.0) {
            return Err(Error::invalid_at("tail_eps", format!("must be positive, got {}", self.tail_eps)));
        }
        if !self.abscissa_margin.is_finite() {
            return Err(Error::invalid_at("abscissa_margin", "must be finite"));
        }
        Ok(())
    }
}

/// A truncated series value and a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

impl SeriesValue {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
        }
    }
}

/// `det(Id - Ad(m_gamma a_gamma)|_{n-bar}) = prod_j (1 - e^{-l + i theta_j})(1 - e^{-l - i theta_j})`.
pub fn det_term(gd: &GroupData, length: f64, angles: &[f64]) -> Complex64 {
    debug_assert_eq!(angles.len(), gd.n());
    angles
        .iter()
        .map(|&th| {
            let a = Complex64::from_polar((-length).exp(), th);
            (1.0 - a) * (1.0 - a.conj())
        })
        .product()
}

/// `det(Id - Ad(m_gamma a_gamma)|_n)`, eigenvalues `e^{l} e^{+- i theta_j}`.
pub fn det_term_n(gd: &GroupData, length: f64, angles: &[f64]) -> Complex64 {
    debug_assert_eq!(angles.len(), gd.n());
    angles
        .iter()
        .map(|&th| {
            let a = Complex64::from_polar(length.exp(), th);
            (1.0 - a) * (1.0 - a.conj())
        })
        .product()
}

/// `L_sym(gamma; sigma) = tr(chi(gamma)) tr(sigma(m_gamma)) e^{-|rho| l} / det(Id - Ad|_{n-bar})`.
pub fn l_sym(gd: &GroupData, cp: &ClassPower, sigma: &Weight) -> Result<Complex64> {
    gd.check_m_weight(sigma)?;
    let ch = Character::new(sigma, GroupType::D)?;
    Ok(l_sym_with(gd, cp, &ch))
}

fn l_sym_with(gd: &GroupData, cp: &ClassPower, ch: &Character) -> Complex64 {
    cp.chi_trace * ch.eval(&cp.angles) * (-gd.rho_norm() * cp.length).exp()
        / det_term(gd, cp.length, &cp.angles)
}

/// One summand of the class series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub class: usize,
    pub j: u32,
    pub l0: f64,
    pub length: f64,
    /// `tr chi(gamma) * character(m_gamma)`.
    pub twist_char: Complex64,
    /// `twist_char * e^{-|rho| l} / det(Id - Ad|_{n-bar})`.
    pub l_sym: Complex64,
}

/// The class powers of a spectrum up to `lmax`, paired with one `M`-character,
/// ready for repeated evaluation at many `s`.
#[derive(Debug, Clone)]
pub struct EulerSeries {
    gd: GroupData,
    powers: Vec<ClassPower>,
    terms: Vec<SeriesTerm>,
    char_bound: f64,
    twist_rate: f64,
    twist_amp: f64,
    det_lb: f64,
    c_prime: f64,
    tp: TruncationPolicy,
}

impl EulerSeries {
    pub fn new(ls: &LengthSpectrum, sigma: &Weight, tp: TruncationPolicy) -> Result<Self> {
        ls.group().check_m_weight(sigma)?;
        Self::with_character(ls, Character::new(sigma, GroupType::D)?, tp)
    }

    /// As [`EulerSeries::new`] with an arbitrary `M`-character, e.g. a tensor product.
    pub fn with_character(ls: &LengthSpectrum, ch: Character, tp: TruncationPolicy) -> Result<Self> {
        tp.validate()?;
        let gd = ls.group().clone();
        if ch.rank() != gd.n() {
            return Err(Error::invalid(format!(
                "character of rank {} used with d = {}",
                ch.rank(),
                gd.d()
            )));
        }
        let powers = ls.powers_up_to(tp.lmax);
        let (twist_rate, det_lb, c_prime) = match ls.systole() {
            Some(sys) => {
                let k = ls
                    .classes()
                    .iter()
                    .map(|c| c.chi_norm().ln() / c.l0())
                    .fold(0.0, f64::max);
                let det_lb = (1.0 - (-sys).exp()).powi(2 * gd.n() as i32);
                let c_prime = ls.growth_constant(2.0 * gd.rho_norm(), tp.lmax.max(sys));
                (k, det_lb, c_prime)
            }
            None => (0.0, 1.0, 0.0),
        };
        let mut series = Self {
            gd,
            powers,
            terms: Vec::new(),
            char_bound: 0.0,
            twist_rate,
            twist_amp: ls.dim_chi() as f64,
            det_lb,
            c_prime,
            tp,
        };
        series.bind(&ch);
        Ok(series)
    }

    /// The same powers with a different character.
    pub fn rebind(&self, ch: &Character) -> Result<Self> {
        if ch.rank() != self.gd.n() {
            return Err(Error::invalid("character rank does not match the spectrum"));
        }
        let mut out = self.clone();
        out.bind(ch);
        Ok(out)
    }

    fn bind(&mut self, ch: &Character) {
        let gd = &self.gd;
        self.char_bound = ch.abs_sum();
        self.terms = self
            .powers
            .iter()
            .map(|cp| {
                let twist_char = cp.chi_trace * ch.eval(&cp.angles);
                SeriesTerm {
                    class: cp.class,
                    j: cp.j,
                    l0: cp.l0,
                    length: cp.length,
                    twist_char,
                    l_sym: twist_char * (-gd.rho_norm() * cp.length).exp()
                        / det_term(gd, cp.length, &cp.angles),
                }
            })
            .collect();
    }

    pub fn group(&self) -> &GroupData {
        &self.gd
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.tp
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    fn is_trivial(&self) -> bool {
        self.c_prime == 0.0
    }

    /// `|rho| + k`: the Selberg series converges for `Re s` beyond this.
    pub fn selberg_abscissa(&self) -> f64 {
        self.gd.rho_norm() + self.twist_rate
    }

    /// `2|rho| + k`.
    pub fn ruelle_abscissa(&self) -> f64 {
        2.0 * self.gd.rho_norm() + self.twist_rate
    }

    /// `sum_{l > lmax} amp e^{-a l}` (times `l` if `length_weighted`), majorised
    /// with `N(R) <= C' e^{2|rho| R}` over unit length shells.
    fn tail(&self, amp: f64, a: f64, length_weighted: bool) -> f64 {
        let r = 2.0 * self.gd.rho_norm();
        if !(a > r) {
            return f64::INFINITY;
        }
        let (a, amp) = if length_weighted {
            // l e^{-delta l} <= 1 / (e delta)
            let delta = 0.5 * (a - r);
            (a - delta, amp / (std::f64::consts::E * delta))
        } else {
            (a, amp)
        };
        let q = (r - a).exp();
        amp * self.c_prime * r.exp() * ((r - a) * self.tp.lmax).exp() / (1.0 - q)
    }

    fn check(&self, s: Complex64, abscissa: f64, tail: f64, what: &str) -> Result<()> {
        if s.re <= abscissa - self.tp.abscissa_margin {
            return Err(Error::domain(
                s,
                format!("{what} series: Re s is left of the estimated abscissa {abscissa}"),
            ));
        }
        if !(tail <= self.tp.tail_eps) {
            return Err(Error::domain(
                s,
                format!(
                    "{what} series: tail bound {tail:e} exceeds tail_eps {:e} at lmax = {}",
                    self.tp.tail_eps, self.tp.lmax
                ),
            ));
        }
        Ok(())
    }

    fn sum<F>(&self, f: F) -> Complex64
    where
        F: Fn(&SeriesTerm) -> Complex64 + Sync,
    {
        reduce(&self.terms, self.tp.parallel, f)
    }

    /// `log Z(s) = -sum (1/j) L_sym e^{-s l}`.
    pub fn selberg_log(&self, s: Complex64) -> Result<SeriesValue> {
        if self.is_trivial() {
            return Ok(SeriesValue::zero());
        }
        let amp = self.char_bound * self.twist_amp / self.det_lb;
        let tail = self.tail(amp, s.re + self.gd.rho_norm() - self.twist_rate, false);
        self.check(s, self.selberg_abscissa(), tail, "Selberg")?;
        let value = -self.sum(|t| t.l_sym * (-s * t.length).exp() / t.j as f64);
        Ok(SeriesValue { value, tail_bound: tail })
    }

    /// `d/ds log Z(s) = sum l0 L_sym e^{-s l}`.
    pub fn log_derivative(&self, s: Complex64) -> Result<SeriesValue> {
        if self.is_trivial() {
            return Ok(SeriesValue::zero());
        }
        let amp = self.char_bound * self.twist_amp / self.det_lb;
        let tail = self.tail(amp, s.re + self.gd.rho_norm() - self.twist_rate, true);
        self.check(s, self.selberg_abscissa(), tail, "log-derivative")?;
        let value = self.sum(|t| t.l_sym * (-s * t.length).exp() * t.l0);
        Ok(SeriesValue { value, tail_bound: tail })
    }

    /// `log R(s) = (-1)^d sum (1/j) tr(chi) tr(sigma) e^{-s l}`.
    pub fn ruelle_log(&self, s: Complex64) -> Result<SeriesValue> {
        if self.is_trivial() {
            return Ok(SeriesValue::zero());
        }
        let amp = self.char_bound * self.twist_amp;
        let tail = self.tail(amp, s.re - self.twist_rate, false);
        self.check(s, self.ruelle_abscissa(), tail, "Ruelle")?;
        let sign = if self.gd.d() % 2 == 0 { 1.0 } else { -1.0 };
        let value = self.sum(|t| t.twist_char * (-s * t.length).exp() / t.j as f64) * sign;
        Ok(SeriesValue { value, tail_bound: tail })
    }

    /// `log Z_p(s) = sum_{(psi, p) in J_p} log Z(s + |rho| - p; psi (x) sigma)`, where
    /// `sigma` is the character this series was built with.
    pub fn z_p_log(&self, s: Complex64, p: usize, sigma_char: &Character) -> Result<SeriesValue> {
        let mut acc = SeriesValue::zero();
        for (psi, lambda) in exterior_decomposition(&self.gd, p)? {
            let ch = Character::new(&psi, GroupType::D)?.tensor(sigma_char);
            let shifted = s + self.gd.rho_norm() - lambda as f64;
            let v = self.rebind(&ch)?.selberg_log(shifted)?;
            acc.value += v.value;
            acc.tail_bound += v.tail_bound;
        }
        Ok(acc)
    }

    /// `sum_{p=0}^{d-1} (-1)^p log Z_p(s)`.
    pub fn ruelle_factorized_log(&self, s: Complex64, sigma_char: &Character) -> Result<SeriesValue> {
        let mut acc = SeriesValue::zero();
        for p in 0..self.gd.d() as usize {
            let v = self.z_p_log(s, p, sigma_char)?;
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            acc.value += v.value * sign;
            acc.tail_bound += v.tail_bound;
        }
        Ok(acc)
    }
}

pub fn selberg_log(s: Complex64, sigma: &Weight, ls: &LengthSpectrum, tp: &TruncationPolicy) -> Result<SeriesValue> {
    EulerSeries::new(ls, sigma, *tp)?.selberg_log(s)
}

pub fn ruelle_log(s: Complex64, sigma: &Weight, ls: &LengthSpectrum, tp: &TruncationPolicy) -> Result<SeriesValue> {
    EulerSeries::new(ls, sigma, *tp)?.ruelle_log(s)
}

pub fn log_derivative(s: Complex64, sigma: &Weight, ls: &LengthSpectrum, tp: &TruncationPolicy) -> Result<SeriesValue> {
    EulerSeries::new(ls, sigma, *tp)?.log_derivative(s)
}

pub fn z_p_log(
    s: Complex64,
    p: usize,
    sigma: &Weight,
    ls: &LengthSpectrum,
    tp: &TruncationPolicy,
) -> Result<SeriesValue> {
    let series = EulerSeries::new(ls, sigma, *tp)?;
    series.z_p_log(s, p, &Character::new(sigma, GroupType::D)?)
}

pub fn ruelle_factorized_log(
    s: Complex64,
    sigma: &Weight,
    ls: &LengthSpectrum,
    tp: &TruncationPolicy,
) -> Result<SeriesValue> {
    let series = EulerSeries::new(ls, sigma, *tp)?;
    series.ruelle_factorized_log(s, &Character::new(sigma, GroupType::D)?)
}

fn twist_rate(ls: &LengthSpectrum) -> Result<f64> {
    if ls.is_empty() {
        return Err(Error::invalid("abscissa of an empty spectrum is undefined"));
    }
    Ok(ls
        .classes()
        .iter()
        .map(|c| c.chi_norm().ln() / c.l0())
        .fold(0.0, f64::max))
}

/// Estimated abscissa of absolute convergence of the Selberg series:
/// `2|rho| + c_1` with `c_1 = k - |rho|`, `k` the certified twist growth rate.
pub fn abscissa_estimate(ls: &LengthSpectrum, sigma: &Weight) -> Result<f64> {
    ls.group().check_m_weight(sigma)?;
    Ok(ls.group().rho_norm() + twist_rate(ls)?)
}

/// Estimated abscissa of the Ruelle series, `2|rho| + k`.
pub fn ruelle_abscissa(ls: &LengthSpectrum, sigma: &Weight) -> Result<f64> {
    ls.group().check_m_weight(sigma)?;
    Ok(2.0 * ls.group().rho_norm() + twist_rate(ls)?)
}

/// `sum_p (-1)^p sum_{(psi, p) in J_p} e^{p l} tr psi(m) / det(Id - Ad|_n)`, which is
/// identically one.
pub fn exterior_alternating_sum(gd: &GroupData, length: f64, angles: &[f64]) -> Result<Complex64> {
    check_angles(gd, angles)?;
    Ok(exterior_numerator(gd, length, angles)? / det_term_n(gd, length, angles))
}

/// The same sum written over `n-bar`: `e^{-2|rho| l}` times the numerator, divided by
/// `det(Id - Ad|_{n-bar})`.
pub fn exterior_alternating_sum_nbar(gd: &GroupData, length: f64, angles: &[f64]) -> Result<Complex64> {
    check_angles(gd, angles)?;
    let num = exterior_numerator(gd, length, angles)? * (-2.0 * gd.rho_norm() * length).exp();
    Ok(num / det_term(gd, length, angles))
}

fn exterior_numerator(gd: &GroupData, length: f64, angles: &[f64]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..gd.d() as usize {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        for (psi, lambda) in exterior_decomposition(gd, p)? {
            let tr = Character::new(&psi, GroupType::D)?.eval(angles);
            acc += tr * (lambda as f64 * length).exp() * sign;
        }
    }
    Ok(acc)
}

fn check_angles(gd: &GroupData, angles: &[f64]) -> Result<()> {
    if angles.len() != gd.n() {
        return Err(Error::invalid(format!(
            "expected {} angles for d = {}, got {}",
            gd.n(),
            gd.d(),
            angles.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::PrimitiveClass;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_class(gd: &GroupData, l0: f64, angles: Vec<f64>, chi: f64) -> LengthSpectrum {
        let pc = PrimitiveClass::new(l0, angles, DMatrix::from_element(1, 1, c(chi, 0.0))).unwrap();
        LengthSpectrum::new(gd.clone(), 1.0, 1, vec![pc]).unwrap()
    }

    #[test]
    fn det_term_examples() {
        let g = GroupData::new(3).unwrap();
        assert!((det_term(&g, 2f64.ln(), &[0.0]) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((det_term(&g, 50.0, &[1.3]) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn det_identity_between_n_and_nbar() {
        let g = GroupData::new(7).unwrap();
        let (l, th) = (0.83, [0.3, 2.9, 5.1]);
        let lhs = det_term(&g, l, &th);
        let rhs = det_term_n(&g, l, &th) * (-2.0 * g.rho_norm() * l).exp();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
    }

    #[test]
    fn trivial_l_sym_closed_form() {
        let g = GroupData::new(3).unwrap();
        let ls = single_class(&g, 0.9, vec![0.0], 1.0);
        let cp = &ls.powers_up_to(1.0)[0];
        let v = l_sym(&g, cp, &Weight::zero(1)).unwrap();
        let l: f64 = 0.9;
        let expect = (-l).exp() / (1.0 - (-l).exp()).powi(2);
        assert!((v - c(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_spectrum_gives_zero() {
        let g = GroupData::new(5).unwrap();
        let ls = LengthSpectrum::empty(g.clone(), 1.0, 1).unwrap();
        let tp = TruncationPolicy::default();
        let s = c(0.1, 0.0);
        let sigma = Weight::zero(2);
        assert_eq!(selberg_log(s, &sigma, &ls, &tp).unwrap(), SeriesValue::zero());
        assert_eq!(ruelle_log(s, &sigma, &ls, &tp).unwrap(), SeriesValue::zero());
        assert_eq!(log_derivative(s, &sigma, &ls, &tp).unwrap(), SeriesValue::zero());
        assert_eq!(ruelle_factorized_log(s, &sigma, &ls, &tp).unwrap().value, c(0.0, 0.0));
        assert!(abscissa_estimate(&ls, &sigma).is_err());
    }

    #[test]
    fn single_class_selberg_double_series() {
        let g = GroupData::new(3).unwrap();
        let l = 1.0;
        let ls = single_class(&g, l, vec![0.0], 1.0);
        let tp = TruncationPolicy {
            lmax: 40.0,
            tail_eps: 1e-12,
            ..TruncationPolicy::default()
        };
        let v = selberg_log(c(3.0, 0.0), &Weight::zero(1), &ls, &tp).unwrap();
        let mut oracle = 0.0;
        for j in 1..=40 {
            let x = j as f64 * l;
            oracle -= (-4.0 * x).exp() / (1.0 - (-x).exp()).powi(2) / j as f64;
        }
        assert!((v.value - c(oracle, 0.0)).norm() < 1e-12);
        assert!(v.tail_bound <= 1e-12);
    }

    #[test]
    fn ruelle_single_class_is_a_log() {
        let g = GroupData::new(3).unwrap();
        let ls = single_class(&g, 0.7, vec![1.1], 1.0);
        let tp = TruncationPolicy {
            lmax: 60.0,
            ..TruncationPolicy::default()
        };
        let s = c(3.0, 0.5);
        let v = ruelle_log(s, &Weight::zero(1), &ls, &tp).unwrap();
        let expect = (1.0 - (-s * 0.7).exp()).ln();
        assert!((v.value - expect).norm() < 1e-13);
    }

    #[test]
    fn domain_errors_left_of_abscissa() {
        let g = GroupData::new(3).unwrap();
        let ls = single_class(&g, 1.0, vec![0.0], 1.0);
        let tp = TruncationPolicy::default();
        let err = selberg_log(c(0.5, 0.0), &Weight::zero(1), &ls, &tp).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = ruelle_log(c(1.5, 0.0), &Weight::zero(1), &ls, &tp).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn abscissa_tracks_twist_growth() {
        let g = GroupData::new(3).unwrap();
        let unitary = single_class(&g, 1.0, vec![0.0], 1.0);
        let grown = single_class(&g, 1.0, vec![0.0], std::f64::consts::E);
        let s = Weight::zero(1);
        let a0 = abscissa_estimate(&unitary, &s).unwrap();
        let a1 = abscissa_estimate(&grown, &s).unwrap();
        assert!(a0 <= 2.0);
        assert!((a1 - a0 - 1.0).abs() < 1e-12);
        assert!(ruelle_abscissa(&grown, &s).unwrap() <= a1 + g.rho_norm() + 1e-12);
    }

    #[test]
    fn alternating_exterior_sum_is_one() {
        for d in [3, 5, 7] {
            let g = GroupData::new(d).unwrap();
            let angles: Vec<f64> = (0..g.n()).map(|i| 0.4 + 1.3 * i as f64).collect();
            for l in [0.3, 1.0, 4.0] {
                let v = exterior_alternating_sum(&g, l, &angles).unwrap();
                assert!((v - c(1.0, 0.0)).norm() < 1e-12, "d={d} l={l}: {v}");
                let w = exterior_alternating_sum_nbar(&g, l, &angles).unwrap();
                assert!((w - c(1.0, 0.0)).norm() < 1e-12, "d={d} l={l}: {w}");
            }
        }
    }

    #[test]
    fn p0_factor_is_shifted_selberg() {
        let g = GroupData::new(3).unwrap();
        let ls = single_class(&g, 0.8, vec![0.6], 1.0);
        let tp = TruncationPolicy::default();
        let sigma = Weight::new(&[1.0]).unwrap();
        let s = c(4.0, 1.0);
        let z0 = z_p_log(s, 0, &sigma, &ls, &tp).unwrap();
        let direct = selberg_log(s + g.rho_norm(), &sigma, &ls, &tp).unwrap();
        assert_eq!(z0.value, direct.value);
    }

    #[test]
    fn parallel_and_serial_sums_agree_bitwise() {
        let g = GroupData::new(3).unwrap();
        let classes: Vec<PrimitiveClass> = (0..300)
            .map(|i| {
                PrimitiveClass::new(
                    0.5 + 0.01 * i as f64,
                    vec![(0.37 * i as f64) % 6.0],
                    DMatrix::from_element(1, 1, c(1.0, 0.0)),
                )
                .unwrap()
            })
            .collect();
        let ls = LengthSpectrum::new(g, 1.0, 1, classes).unwrap();
        let tp = TruncationPolicy {
            lmax: 10.0,
            tail_eps: 1e3,
            ..TruncationPolicy::default()
        };
        let par = TruncationPolicy { parallel: true, ..tp };
        let s = c(6.0, 2.0);
        let a = selberg_log(s, &Weight::zero(1), &ls, &tp).unwrap();
        let b = selberg_log(s, &Weight::zero(1), &ls, &par).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
    }
}
