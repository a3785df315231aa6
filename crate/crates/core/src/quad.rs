//! Numerical integration of complex-valued integrands.
//!
//! The double-exponential rules map the integration range onto the real line
//! so that the transformed integrand decays like `exp(-c exp|u|)`; the plain
//! trapezoid rule then converges geometrically in the number of nodes and the
//! difference between successive step halvings is a safe error estimate.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy)]
pub struct DeOptions {
    /// Relative tolerance on successive halvings.
    pub tol: f64,
    /// Initial step in the transformed variable.
    pub h0: f64,
    /// Maximum number of halvings.
    pub max_level: usize,
    /// Hard limit on `|u|`.
    pub u_cap: f64,
}

impl Default for DeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            h0: 0.5,
            max_level: 9,
            u_cap: 40.0,
        }
    }
}

/// Trapezoid rule on the whole real line for an integrand that already decays
/// double-exponentially in both directions.
///
/// The node range is found once at the coarsest step by walking outward until
/// two consecutive samples fall below `1e-18` of the largest sample seen.
pub fn trapezoid_line<F>(f: F, opts: DeOptions) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let eval = |u: f64| -> Result<Complex64> {
        let v = f(u);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Quadrature(format!("integrand not finite at u = {u}")))
        }
    };

    let h0 = opts.h0;
    let kmax = (opts.u_cap / h0).floor() as i64;
    let centre = eval(0.0)?;
    let mut total = centre;
    let mut max_abs = centre.norm();

    let mut bounds = [0i64; 2];
    for (slot, dir) in [(0usize, -1i64), (1usize, 1i64)] {
        let mut quiet = 0;
        let mut k = 0;
        while k < kmax {
            k += 1;
            let v = eval((dir * k) as f64 * h0)?;
            total += v;
            max_abs = max_abs.max(v.norm());
            if v.norm() <= 1e-18 * max_abs {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        bounds[slot] = dir * k;
    }

    let (k_lo, k_hi) = (bounds[0], bounds[1]);
    let mut h = h0;
    let mut estimate = total * h;
    for level in 1..=opts.max_level {
        h *= 0.5;
        let scale = 1i64 << level;
        let mut fresh = Complex64::new(0.0, 0.0);
        let mut j = k_lo * scale + 1;
        while j < k_hi * scale {
            fresh += eval(j as f64 * h)?;
            j += 2;
        }
        let next = estimate * 0.5 + fresh * h;
        let delta = (next - estimate).norm();
        estimate = next;
        if level >= 2 && (delta <= opts.tol * estimate.norm() || delta < 1e-300) {
            return Ok(estimate);
        }
    }
    Err(Error::Quadrature(format!(
        "no convergence after {} halvings (estimate {estimate})",
        opts.max_level
    )))
}

/// `∫_0^∞ f(t) dt` through `t = exp(π/2 · sinh u)`.
pub fn exp_sinh<F>(f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let opts = DeOptions {
        tol,
        u_cap: 6.0,
        ..DeOptions::default()
    };
    trapezoid_line(
        |u| {
            let t = (FRAC_PI_2 * u.sinh()).exp();
            if t == 0.0 || !t.is_finite() {
                return Complex64::new(0.0, 0.0);
            }
            f(t) * (t * FRAC_PI_2 * u.cosh())
        },
        opts,
    )
}

/// `∫_ℝ f(x) dx` through `x = sinh(π/2 · sinh u)`.
pub fn sinh_sinh<F>(f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let opts = DeOptions {
        tol,
        u_cap: 6.0,
        ..DeOptions::default()
    };
    trapezoid_line(
        |u| {
            let w = FRAC_PI_2 * u.sinh();
            let x = w.sinh();
            if !x.is_finite() {
                return Complex64::new(0.0, 0.0);
            }
            f(x) * (w.cosh() * FRAC_PI_2 * u.cosh())
        },
        opts,
    )
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    ((kronrod * half), ((kronrod - gauss) * half).norm())
}

/// Globally adaptive Gauss–Kronrod 7/15 on `[a, b]`, starting from eight equal pieces.
pub fn gauss_kronrod<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_INTERVALS: usize = 4000;
    // a few initial pieces so that a narrow feature cannot slip between the nodes
    const INITIAL: usize = 8;
    let mut pieces: Vec<(f64, f64, Complex64, f64)> = (0..INITIAL)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / INITIAL as f64;
            let hi = if i + 1 == INITIAL { b } else { a + (b - a) * (i + 1) as f64 / INITIAL as f64 };
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::Quadrature(format!("integrand not finite on [{a}, {b}]")));
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "Gauss-Kronrod did not reach tolerance on [{a}, {b}] (error estimate {err:e})"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gaussian_on_the_line() {
        let v = sinh_sinh(|x| c((-x * x).exp()), 1e-13).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_on_the_line() {
        let v = sinh_sinh(|x| c(1.0 / (1.0 + x * x)), 1e-13).unwrap();
        assert!((v.re - PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn half_line_with_endpoint_singularity() {
        // ∫_0^∞ t^{-1/2} e^{-t} dt = √π
        let v = exp_sinh(|t| c(t.powf(-0.5) * (-t).exp()), 1e-13).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn kronrod_polynomial_and_oscillatory() {
        let v = gauss_kronrod(|x| c(x.powi(6)), 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v.re - 128.0 / 7.0).abs() < 1e-12);
        let w = gauss_kronrod(|x| Complex64::new(0.0, 10.0 * x).exp(), 0.0, 1.0, 1e-14, 1e-13).unwrap();
        let exact = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 10.0);
        assert!((w - exact).norm() < 1e-13);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        assert!(matches!(
            trapezoid_line(|_| c(f64::NAN), DeOptions::default()),
            Err(Error::Quadrature(_))
        ));
    }
}
