//! Branching from `K = Spin(2n+1)` to `M = Spin(2n)` and the virtual
//! representations built from it.

use super::weyl::{weight_multiset, weyl_dim, GroupType};
use super::{GroupData, Weight};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Maximum number of peeling steps in [`m_tau_coeffs`].
const MAX_PEELS: usize = 64;

/// A finite integer combination of irreducible representations, keyed by
/// highest weight. Weights are distinct and coefficients nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VirtualRep {
    terms: BTreeMap<Weight, i64>,
}

impl VirtualRep {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut out = Self::new();
        for (w, c) in terms {
            out.add(w, c);
        }
        out
    }

    pub fn add(&mut self, weight: Weight, coeff: i64) {
        let slot = self.terms.entry(weight.clone()).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&weight);
        }
    }

    pub fn coefficient(&self, weight: &Weight) -> i64 {
        self.terms.get(weight).copied().unwrap_or(0)
    }

    /// Terms in decreasing weight order.
    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.terms.iter().rev().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn difference(&self, other: &VirtualRep) -> VirtualRep {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add(w.clone(), -c);
        }
        out
    }

    /// Restriction of a virtual `K`-representation to `M`.
    pub fn restrict(&self) -> Result<VirtualRep> {
        let mut out = VirtualRep::new();
        for (tau, c) in self.terms() {
            for sigma in restrict_to_m(tau)? {
                out.add(sigma, c);
            }
        }
        Ok(out)
    }
}

/// `[tau|_M : sigma]`: one when the interlacing
/// `tau_1 >= sigma_1 >= tau_2 >= ... >= tau_n >= |sigma_n|` holds with integer
/// differences, zero otherwise.
pub fn branching_multiplicity(tau: &Weight, sigma: &Weight) -> Result<u8> {
    if tau.rank() != sigma.rank() {
        return Err(Error::invalid(format!(
            "branching {tau} -> {sigma}: ranks differ ({} vs {})",
            tau.rank(),
            sigma.rank()
        )));
    }
    if tau.is_integral() != sigma.is_integral() {
        return Ok(0);
    }
    let t = tau.twice();
    let s = sigma.twice();
    let n = t.len();
    let interlaced = (0..n - 1).all(|i| t[i] >= s[i] && s[i] >= t[i + 1])
        && t[n - 1] >= s[n - 1].abs();
    Ok(interlaced as u8)
}

/// All `M`-highest weights occurring in `tau|_M`, each with multiplicity one,
/// in lexicographically decreasing order.
pub fn restrict_to_m(tau: &Weight) -> Result<Vec<Weight>> {
    tau.ensure_k_dominant()?;
    let t = tau.twice();
    let n = t.len();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| if i + 1 < n { (t[i + 1], t[i]) } else { (-t[i], t[i]) })
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(i: usize, ranges: &[(i64, i64)], current: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == ranges.len() {
            out.push(Weight::from_twice(current.clone()).expect("interlacing keeps parity"));
            return;
        }
        let (lo, hi) = ranges[i];
        let mut v = hi;
        while v >= lo {
            current[i] = v;
            rec(i + 1, ranges, current, out);
            v -= 2;
        }
    }
    rec(0, &ranges, &mut current, &mut out);
    Ok(out)
}

/// The non-trivial element of the restricted Weyl group: flips the sign of the
/// last coordinate.
pub fn weyl_action(sigma: &Weight) -> Weight {
    let mut t = sigma.twice().to_vec();
    let last = t.len() - 1;
    t[last] = -t[last];
    Weight::from_twice(t).expect("sign flip keeps parity")
}

/// Splits `sigma + w sigma` as a difference of genuine `K`-representations.
///
/// Over `mu in {0,1}^n`, the weights `nu_sigma - mu` with an even number of
/// ones go into the first part, those with an odd number into the second;
/// weights that fail to be `K`-dominant have vanishing character and are
/// dropped. With these conventions `i*(tau_plus - tau_minus) = sigma + w sigma`.
/// A negative last coordinate is handled through `w sigma`.
pub fn tau_pm_split(sigma: &Weight) -> Result<(VirtualRep, VirtualRep)> {
    sigma.ensure_m_dominant()?;
    let n = sigma.rank();
    let mut nu = sigma.twice().to_vec();
    if nu[n - 1] == 0 {
        return Err(Error::invalid(format!(
            "Weyl-invariant sigma {sigma} has no tau± splitting"
        )));
    }
    nu[n - 1] = nu[n - 1].abs();
    let mut plus = VirtualRep::new();
    let mut minus = VirtualRep::new();
    for mask in 0u32..(1 << n) {
        let shifted: Vec<i64> = (0..n).map(|i| nu[i] - 2 * (mask >> i & 1) as i64).collect();
        let tau = Weight::from_twice(shifted)?;
        if !tau.is_k_dominant() {
            continue;
        }
        if mask.count_ones() % 2 == 0 {
            plus.add(tau, 1);
        } else {
            minus.add(tau, 1);
        }
    }
    Ok((plus, minus))
}

/// The integers `m_tau(sigma)` with `sum_tau m_tau(sigma) i*(tau) = sigma` for a
/// Weyl-invariant `sigma`, found by peeling: the highest remaining `M`-weight
/// `s` is removed with the `K`-type `(s_1, ..., s_{n-1}, |s_n|)`, whose
/// restriction contains it (and `w s`) exactly once.
pub fn m_tau_coeffs(sigma: &Weight) -> Result<VirtualRep> {
    sigma.ensure_m_dominant()?;
    if *sigma.twice().last().unwrap() != 0 {
        return Err(Error::invalid(format!(
            "sigma {sigma} is not Weyl-invariant; use tau_pm_split"
        )));
    }
    let mut remainder = VirtualRep::from_terms([(sigma.clone(), 1)]);
    let mut out = VirtualRep::new();
    for _ in 0..MAX_PEELS {
        let Some((top, coeff)) = remainder
            .terms()
            .max_by_key(|(w, _)| (w.height_twice(), (*w).clone()))
            .map(|(w, c)| (w.clone(), c))
        else {
            return Ok(out);
        };
        let mut t = top.twice().to_vec();
        let last = t.len() - 1;
        t[last] = t[last].abs();
        let tau = Weight::from_twice(t)?;
        for s in restrict_to_m(&tau)? {
            remainder.add(s, -coeff);
        }
        out.add(tau, coeff);
    }
    if remainder.is_empty() {
        Ok(out)
    } else {
        Err(Error::invalid(format!(
            "m_tau peeling for {sigma} did not terminate within {MAX_PEELS} steps"
        )))
    }
}

/// Decomposition of `Lambda^p n_C` under `MA`: the `M`-highest weights of
/// `Lambda^p C^{2n}` (standard representation of `Spin(2n)`) each paired with
/// the `A`-weight `p`. Components are listed lexicographically largest first.
pub fn exterior_decomposition(gd: &GroupData, p: usize) -> Result<Vec<(Weight, i64)>> {
    let n = gd.n();
    if p > 2 * n {
        return Err(Error::invalid(format!(
            "exterior power p = {p} out of range 0..={} for d = {}",
            2 * n,
            gd.d()
        )));
    }
    // weights ±e_i of the standard representation, doubled
    let basis: Vec<Vec<i64>> = (0..n)
        .flat_map(|i| {
            [2i64, -2].into_iter().map(move |s| {
                let mut v = vec![0; n];
                v[i] = s;
                v
            })
        })
        .collect();
    let mut remaining: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for mask in 0u32..(1 << (2 * n)) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let mut v = vec![0i64; n];
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
        }
        *remaining.entry(v).or_default() += 1;
    }

    let mut out = Vec::new();
    let mut dim_total = 0u64;
    while let Some((top, _)) = remaining.iter().next_back() {
        let highest = Weight::from_twice(top.clone())?;
        let multiset = weight_multiset(&highest, GroupType::D)?;
        for (w, m) in multiset.iter() {
            let slot = remaining.entry(w.to_vec()).or_default();
            *slot -= m;
            if *slot < 0 {
                return Err(Error::invalid(format!(
                    "exterior power {p}: peeling {highest} overdraws weight {w:?}"
                )));
            }
        }
        remaining.retain(|_, m| *m != 0);
        dim_total += weyl_dim(&highest, GroupType::D)?;
        out.push((highest, p as i64));
    }
    let expected = binomial(2 * n, p);
    if dim_total != expected {
        return Err(Error::invalid(format!(
            "exterior power {p}: components have total dimension {dim_total}, expected {expected}"
        )));
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[f64]) -> Weight {
        Weight::new(c).unwrap()
    }

    #[test]
    fn trivial_branches_to_trivial() {
        assert_eq!(branching_multiplicity(&Weight::zero(2), &Weight::zero(2)).unwrap(), 1);
    }

    #[test]
    fn d5_standard_rep() {
        let tau = w(&[1.0, 0.0]);
        assert_eq!(branching_multiplicity(&tau, &w(&[1.0, 0.0])).unwrap(), 1);
        assert_eq!(branching_multiplicity(&tau, &w(&[0.0, 0.0])).unwrap(), 1);
        assert_eq!(branching_multiplicity(&tau, &w(&[1.0, 1.0])).unwrap(), 0);
    }

    #[test]
    fn branching_rank_mismatch_is_error() {
        assert!(branching_multiplicity(&Weight::zero(2), &Weight::zero(3)).is_err());
    }

    #[test]
    fn integrality_mismatch_gives_zero() {
        assert_eq!(branching_multiplicity(&w(&[1.0]), &w(&[0.5])).unwrap(), 0);
    }

    #[test]
    fn weyl_action_examples() {
        assert_eq!(weyl_action(&w(&[1.0, 0.0])), w(&[1.0, 0.0]));
        assert_eq!(weyl_action(&w(&[1.0, 1.0])), w(&[1.0, -1.0]));
        let s = w(&[2.5, 1.5, -0.5]);
        assert_eq!(weyl_action(&weyl_action(&s)), s);
    }

    #[test]
    fn tau_split_rank_one() {
        let (plus, minus) = tau_pm_split(&w(&[1.0])).unwrap();
        assert_eq!(plus.coefficient(&w(&[1.0])), 1);
        assert_eq!(minus.coefficient(&w(&[0.0])), 1);
        assert_eq!(plus.len() + minus.len(), 2);
    }

    #[test]
    fn tau_split_drops_non_dominant() {
        // only mu = 0 survives: the spin representation of Spin(5)
        let (plus, minus) = tau_pm_split(&w(&[0.5, 0.5])).unwrap();
        assert_eq!(plus.len(), 1);
        assert!(minus.is_empty());
        assert!(plus.terms().chain(minus.terms()).all(|(t, _)| t.is_k_dominant()));
    }

    #[test]
    fn tau_split_of_invariant_sigma_is_error() {
        let err = tau_pm_split(&w(&[1.0, 0.0])).unwrap_err();
        assert!(err.to_string().contains("no tau± splitting"));
    }

    #[test]
    fn m_tau_of_trivial_rank_one() {
        let m = m_tau_coeffs(&w(&[0.0])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.coefficient(&w(&[0.0])), 1);
    }

    #[test]
    fn m_tau_rejects_chiral_sigma() {
        assert!(m_tau_coeffs(&w(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn exterior_small_cases() {
        let g3 = GroupData::new(3).unwrap();
        assert_eq!(exterior_decomposition(&g3, 0).unwrap(), vec![(w(&[0.0]), 0)]);
        assert_eq!(
            exterior_decomposition(&g3, 1).unwrap(),
            vec![(w(&[1.0]), 1), (w(&[-1.0]), 1)]
        );
        let g5 = GroupData::new(5).unwrap();
        assert_eq!(exterior_decomposition(&g5, 1).unwrap(), vec![(w(&[1.0, 0.0]), 1)]);
        // Lambda^2 C^4 = self-dual + anti-self-dual
        assert_eq!(
            exterior_decomposition(&g5, 2).unwrap(),
            vec![(w(&[1.0, 1.0]), 2), (w(&[1.0, -1.0]), 2)]
        );
        assert!(exterior_decomposition(&g5, 5).is_err());
    }
}
