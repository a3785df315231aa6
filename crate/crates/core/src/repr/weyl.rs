//! Weyl groups of types `B_n` and `D_n`, the Weyl dimension formula, and
//! irreducible characters.
//!
//! Characters are evaluated from the full weight multiset, which is obtained by
//! exact division of the Weyl numerator by the Weyl denominator as Laurent
//! polynomials with integer coefficients. The resulting expansion is valid at
//! every torus element, including the singular ones where the alternant quotient
//! degenerates to `0/0`.

use super::Weight;
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::Ratio;
use std::collections::BTreeMap;

/// Root system type: `B_n` for `K = Spin(2n+1)`, `D_n` for `M = Spin(2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupType {
    B,
    D,
}

impl GroupType {
    /// Doubled half-sum of positive roots of rank `n`.
    fn rho_twice(self, n: usize) -> Vec<i64> {
        match self {
            GroupType::B => (0..n).map(|i| 2 * (n - i) as i64 - 1).collect(),
            GroupType::D => (0..n).map(|i| 2 * (n - 1 - i) as i64).collect(),
        }
    }

    fn check_dominant(self, weight: &Weight) -> Result<()> {
        match self {
            GroupType::B => weight.ensure_k_dominant(),
            GroupType::D => weight.ensure_m_dominant(),
        }
    }
}

/// A signed permutation `x -> (sign_i * x_{perm_i})_i` together with its determinant.
struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i64>,
    det: i64,
}

impl SignedPermutation {
    fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s * x[p])
            .collect()
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

fn weyl_group(ty: GroupType, n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    for (perm, psign) in permutations(n) {
        for mask in 0u32..(1 << n) {
            let flips = mask.count_ones();
            if ty == GroupType::D && flips % 2 == 1 {
                continue;
            }
            let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let det = if flips % 2 == 0 { psign } else { -psign };
            out.push(SignedPermutation {
                perm: perm.clone(),
                signs,
                det,
            });
        }
    }
    out
}

/// Weyl dimension formula, evaluated exactly.
pub fn weyl_dim(weight: &Weight, ty: GroupType) -> Result<u64> {
    ty.check_dominant(weight)?;
    let n = weight.rank();
    let rho = ty.rho_twice(n);
    let shifted: Vec<i128> = weight
        .twice()
        .iter()
        .zip(&rho)
        .map(|(a, b)| (a + b) as i128)
        .collect();
    let rho: Vec<i128> = rho.into_iter().map(|r| r as i128).collect();
    let mut dim = Ratio::from_integer(1i128);
    for i in 0..n {
        for j in i + 1..n {
            dim *= Ratio::new(
                shifted[i] * shifted[i] - shifted[j] * shifted[j],
                rho[i] * rho[i] - rho[j] * rho[j],
            );
        }
        if ty == GroupType::B {
            dim *= Ratio::new(shifted[i], rho[i]);
        }
    }
    if !dim.is_integer() || *dim.numer() <= 0 {
        return Err(Error::invalid(format!(
            "dimension formula gave {dim} for {weight}"
        )));
    }
    Ok(*dim.numer() as u64)
}

/// Weights of an irreducible representation with multiplicities, in doubled
/// coordinates, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiset {
    pub(crate) weights: BTreeMap<Vec<i64>, i64>,
}

impl WeightMultiset {
    pub fn iter(&self) -> impl Iterator<Item = (&[i64], i64)> {
        self.weights.iter().map(|(w, &m)| (w.as_slice(), m))
    }

    pub fn multiplicity_twice(&self, twice: &[i64]) -> i64 {
        self.weights.get(twice).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.weights.values().sum()
    }
}

/// Computes the weight multiset of the irreducible representation with the
/// given highest weight by dividing the alternant `A(lambda + rho)` by `A(rho)`.
pub fn weight_multiset(weight: &Weight, ty: GroupType) -> Result<WeightMultiset> {
    ty.check_dominant(weight)?;
    let n = weight.rank();
    let rho = ty.rho_twice(n);
    let shifted: Vec<i64> = weight.twice().iter().zip(&rho).map(|(a, b)| a + b).collect();

    let group = weyl_group(ty, n);
    let mut numerator: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut denominator: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for w in &group {
        *numerator.entry(w.apply(&shifted)).or_default() += w.det;
        *denominator.entry(w.apply(&rho)).or_default() += w.det;
    }
    numerator.retain(|_, c| *c != 0);
    denominator.retain(|_, c| *c != 0);
    let (lead, lead_coeff) = denominator
        .iter()
        .next_back()
        .map(|(k, &v)| (k.clone(), v))
        .expect("Weyl denominator is nonzero");
    debug_assert_eq!(lead, rho);
    debug_assert_eq!(lead_coeff, 1);

    let mut quotient = BTreeMap::new();
    while let Some((top, &coeff)) = numerator.iter().next_back() {
        let top = top.clone();
        let mono: Vec<i64> = top.iter().zip(&lead).map(|(a, b)| a - b).collect();
        for (d_mono, &d_coeff) in &denominator {
            let key: Vec<i64> = mono.iter().zip(d_mono).map(|(a, b)| a + b).collect();
            let slot = numerator.entry(key.clone()).or_default();
            *slot -= coeff * d_coeff;
            if *slot == 0 {
                numerator.remove(&key);
            }
        }
        debug_assert!(!numerator.contains_key(&top));
        *quotient.entry(mono).or_default() += coeff;
    }
    quotient.retain(|_, c: &mut i64| *c != 0);
    if quotient.values().any(|&m| m < 0) {
        return Err(Error::invalid(format!(
            "negative weight multiplicity while expanding {weight}"
        )));
    }
    Ok(WeightMultiset { weights: quotient })
}

/// An irreducible (or tensor-product) character as a finite sum of torus exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    rank: usize,
    terms: Vec<(Vec<i64>, i64)>,
}

impl Character {
    pub fn new(weight: &Weight, ty: GroupType) -> Result<Self> {
        let multiset = weight_multiset(weight, ty)?;
        Ok(Self {
            rank: weight.rank(),
            terms: multiset.weights.into_iter().collect(),
        })
    }

    pub fn trivial(rank: usize) -> Self {
        Self {
            rank,
            terms: vec![(vec![0; rank], 1)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Value at the identity.
    pub fn dim(&self) -> i64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// Sum of absolute multiplicities, a bound for `|eval|`.
    pub fn abs_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.1.abs() as f64).sum()
    }

    /// Character of the tensor product.
    pub fn tensor(&self, other: &Character) -> Character {
        assert_eq!(self.rank, other.rank, "tensor of characters of different rank");
        let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                let key: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(key).or_default() += ma * mb;
            }
        }
        acc.retain(|_, m| *m != 0);
        Character {
            rank: self.rank,
            terms: acc.into_iter().collect(),
        }
    }

    /// Value at the torus element with rotation angles `angles`.
    pub fn eval(&self, angles: &[f64]) -> Complex64 {
        debug_assert_eq!(angles.len(), self.rank);
        if self.terms.len() == 1 && self.terms[0].0.iter().all(|&t| t == 0) {
            return Complex64::new(self.terms[0].1 as f64, 0.0);
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for (w, m) in &self.terms {
            let phase: f64 = w.iter().zip(angles).map(|(&t, &a)| t as f64 * a).sum::<f64>() * 0.5;
            let (s, c) = phase.sin_cos();
            re += *m as f64 * c;
            im += *m as f64 * s;
        }
        Complex64::new(re, im)
    }
}

/// Irreducible character of highest weight `weight` at rotation angles `angles`.
pub fn weyl_character(weight: &Weight, angles: &[f64], ty: GroupType) -> Result<Complex64> {
    check_rank(weight, angles)?;
    Ok(Character::new(weight, ty)?.eval(angles))
}

/// The Weyl character formula as a quotient of alternants. Only meaningful at
/// regular torus elements; returns a validation error where the denominator
/// vanishes to working precision.
pub fn alternant_quotient(weight: &Weight, angles: &[f64], ty: GroupType) -> Result<Complex64> {
    check_rank(weight, angles)?;
    ty.check_dominant(weight)?;
    let n = weight.rank();
    let rho = ty.rho_twice(n);
    let shifted: Vec<i64> = weight.twice().iter().zip(&rho).map(|(a, b)| a + b).collect();
    let alternant = |x: &[i64]| -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for w in weyl_group(ty, n) {
            let wx = w.apply(x);
            let phase: f64 = wx.iter().zip(angles).map(|(&t, &a)| t as f64 * a).sum::<f64>() * 0.5;
            acc += Complex64::from_polar(w.det as f64, phase);
            scale += 1.0;
        }
        (acc, scale)
    };
    let (num, _) = alternant(&shifted);
    let (den, scale) = alternant(&rho);
    if den.norm() <= 1e-9 * scale {
        return Err(Error::invalid(format!(
            "alternant quotient is singular at angles {angles:?}"
        )));
    }
    Ok(num / den)
}

fn check_rank(weight: &Weight, angles: &[f64]) -> Result<()> {
    if weight.rank() != angles.len() {
        return Err(Error::invalid(format!(
            "weight {weight} has rank {} but {} angles were given",
            weight.rank(),
            angles.len()
        )));
    }
    Ok(())
}
