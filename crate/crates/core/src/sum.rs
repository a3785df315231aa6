//! Compensated accumulation and a block reduction whose result does not depend
//! on how many worker threads run it.

use num_complex::Complex64;
use rayon::prelude::*;

/// Items per reduction block. Block boundaries are fixed so that parallel and
/// sequential evaluation add exactly the same partial sums in the same order.
pub const BLOCK: usize = 64;

/// Neumaier-compensated running sum of real numbers.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of complex numbers; real and imaginary parts are
/// compensated independently.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Sums `term(item)` over `items` in their given order.
///
/// Each block of [`BLOCK`] consecutive items is summed with compensation, then
/// the block partials are combined left to right, again compensated. With
/// `parallel` the blocks are evaluated on the rayon pool; the bits of the
/// result are identical either way.
pub fn reduce<T, F>(items: &[T], parallel: bool, term: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    let block_sum = |chunk: &[T]| -> Complex64 {
        chunk.iter().map(&term).collect::<ComplexSum>().value()
    };
    let partials: Vec<Complex64> = if parallel {
        items.par_chunks(BLOCK).map(block_sum).collect()
    } else {
        items.chunks(BLOCK).map(block_sum).collect()
    };
    partials.into_iter().collect::<ComplexSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_small_terms() {
        let mut acc = NeumaierSum::new();
        for v in [1.0, 1e100, 1.0, -1e100] {
            acc.add(v);
        }
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let items: Vec<f64> = (0..10_000).map(|k| (k as f64 * 0.37).sin() * 1e3 / (k as f64 + 1.0)).collect();
        let f = |x: &f64| Complex64::new(*x, -x * 0.5);
        let a = reduce(&items, false, f);
        let b = reduce(&items, true, f);
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn empty_reduction_is_zero() {
        let items: Vec<f64> = vec![];
        assert_eq!(reduce(&items, true, |x| Complex64::new(*x, 0.0)), Complex64::new(0.0, 0.0));
    }
}
