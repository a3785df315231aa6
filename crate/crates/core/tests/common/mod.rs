#![allow(dead_code)]

use nalgebra::DMatrix;
use zetaflow::repr::{GroupData, Weight};
use zetaflow::spectrum::{synthesize, LengthSpectrum, PrimitiveClass, SynthesisOptions};
use zetaflow::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// `M`-dominant weights of rank `n` with doubled coordinates bounded by `max_twice`.
pub fn m_dominant(n: usize, max_twice: i64) -> Vec<Weight> {
    all_weights(n, max_twice)
        .into_iter()
        .filter(|w| w.is_m_dominant())
        .collect()
}

/// `K`-dominant weights of rank `n` with doubled coordinates bounded by `max_twice`.
pub fn k_dominant(n: usize, max_twice: i64) -> Vec<Weight> {
    all_weights(n, max_twice)
        .into_iter()
        .filter(|w| w.is_k_dominant())
        .collect()
}

fn all_weights(n: usize, max_twice: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    for parity in [0i64, 1] {
        let values: Vec<i64> = (-max_twice..=max_twice).filter(|v| v.rem_euclid(2) == parity).collect();
        let mut idx = vec![0usize; n];
        loop {
            out.push(Weight::from_twice(idx.iter().map(|&i| values[i]).collect()).unwrap());
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

pub fn synthetic(d: u32, count: usize, seed: u64, dim_chi: usize, chi_norm: f64) -> LengthSpectrum {
    let gd = GroupData::new(d).unwrap();
    synthesize(
        &gd,
        SynthesisOptions {
            count,
            systole: 1.0,
            seed,
            dim_chi,
            chi_norm,
        },
    )
    .unwrap()
}

/// A spectrum from `(l0, angles, diagonal twist)` triples.
pub fn diagonal_spectrum(d: u32, classes: &[(f64, Vec<f64>, Vec<Complex64>)]) -> LengthSpectrum {
    let gd = GroupData::new(d).unwrap();
    let dim = classes[0].2.len();
    let pcs = classes
        .iter()
        .map(|(l0, angles, diag)| {
            let chi = DMatrix::from_fn(dim, dim, |r, s| if r == s { diag[r] } else { c(0.0, 0.0) });
            PrimitiveClass::new(*l0, angles.clone(), chi).unwrap()
        })
        .collect();
    LengthSpectrum::new(gd, 1.0, dim, pcs).unwrap()
}
