//! Length spectra (primitive closed geodesics with holonomy and twist),
//! eigenvalue lists, synthetic spectra and their JSON form.

use crate::error::{Error, Result};
use crate::repr::GroupData;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

const TWO_PI: f64 = 2.0 * PI;
const FOUR_PI: f64 = 4.0 * PI;

/// One primitive conjugacy class `[gamma_0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveClass {
    l0: f64,
    angles: Vec<f64>,
    chi: DMatrix<Complex64>,
}

impl PrimitiveClass {
    /// `angles` are the rotation angles of `m_gamma` on `n-bar`, each in `[0, 2 pi)`;
    /// `chi` is the twist `chi(gamma_0)`.
    pub fn new(l0: f64, angles: Vec<f64>, chi: DMatrix<Complex64>) -> Result<Self> {
        if !(l0.is_finite() && l0 > 0.0) {
            return Err(Error::invalid_at("l0", format!("length must be positive, got {l0}")));
        }
        if let Some(a) = angles.iter().find(|a| !(a.is_finite() && (0.0..TWO_PI).contains(*a))) {
            return Err(Error::invalid_at("angles", format!("angle {a} is outside [0, 2pi)")));
        }
        if chi.nrows() == 0 || chi.nrows() != chi.ncols() {
            return Err(Error::invalid_at(
                "chi",
                format!("twist must be a nonempty square matrix, got {}x{}", chi.nrows(), chi.ncols()),
            ));
        }
        if chi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid_at("chi", "twist has non-finite entries"));
        }
        let det = chi.determinant();
        let scale = chi.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(chi.nrows() as i32);
        if det.norm() <= 1e-14 * scale {
            return Err(Error::invalid_at("chi", "twist matrix is singular"));
        }
        Ok(Self { l0, angles, chi })
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn chi(&self) -> &DMatrix<Complex64> {
        &self.chi
    }

    pub fn dim_chi(&self) -> usize {
        self.chi.nrows()
    }

    /// Spectral norm of the twist.
    pub fn chi_norm(&self) -> f64 {
        self.chi.clone().singular_values().max()
    }

    /// The same class with angles brought to a canonical representative of the
    /// `M`-conjugacy class: angles in `(pi, 2pi)` are reflected to `2pi - theta` two at a
    /// time (a Weyl sign change combined with a central shift), the results sorted
    /// in decreasing order. When the number of such angles is odd the largest
    /// one is kept unreflected and placed last.
    pub fn canonicalized(&self) -> Self {
        Self {
            angles: canonical_angles(&self.angles),
            ..self.clone()
        }
    }

    /// `tr chi(gamma_0)^j` for `j = 1..=jmax`, by successive products.
    pub fn chi_traces(&self, jmax: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(jmax);
        if jmax == 0 {
            return out;
        }
        if self.chi.nrows() == 1 {
            let z = self.chi[(0, 0)];
            let mut p = z;
            for _ in 0..jmax {
                out.push(p);
                p *= z;
            }
            return out;
        }
        let mut p = self.chi.clone();
        out.push(p.trace());
        for _ in 1..jmax {
            p = &p * &self.chi;
            out.push(p.trace());
        }
        out
    }

    /// `tr chi(gamma_0)^j` by binary powering.
    pub fn chi_trace(&self, j: u32) -> Complex64 {
        let n = self.chi.nrows();
        let mut result = DMatrix::<Complex64>::identity(n, n);
        let mut base = self.chi.clone();
        let mut e = j;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result.trace()
    }
}

fn canonical_angles(angles: &[f64]) -> Vec<f64> {
    let mut high: Vec<f64> = angles.iter().copied().filter(|&a| a > PI).collect();
    let mut low: Vec<f64> = angles.iter().copied().filter(|&a| a <= PI).collect();
    high.sort_by(|a, b| a.total_cmp(b));
    let residual = if high.len() % 2 == 1 { high.pop() } else { None };
    low.extend(high.into_iter().map(|a| TWO_PI - a));
    low.sort_by(|a, b| b.total_cmp(a));
    low.extend(residual);
    low
}

/// `gamma_0^j` with its cached data.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPower {
    /// Index of the primitive class in its spectrum.
    pub class: usize,
    pub j: u32,
    pub l0: f64,
    /// `j * l0`.
    pub length: f64,
    /// `j * theta` reduced modulo `4 pi`, which is exact on `Spin`.
    pub angles: Vec<f64>,
    /// `tr chi(gamma_0)^j`.
    pub chi_trace: Complex64,
}

/// Primitive classes together with the global data `d`, `Vol(X)` and `dim V_chi`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    gd: GroupData,
    classes: Vec<PrimitiveClass>,
    volume: f64,
    dim_chi: usize,
}

impl LengthSpectrum {
    pub fn new(gd: GroupData, volume: f64, dim_chi: usize, classes: Vec<PrimitiveClass>) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::invalid_at("volume", format!("volume must be positive, got {volume}")));
        }
        if dim_chi == 0 {
            return Err(Error::invalid_at("dim_chi", "dim_chi must be positive"));
        }
        for (i, c) in classes.iter().enumerate() {
            if c.angles.len() != gd.n() {
                return Err(Error::invalid_at(
                    format!("classes[{i}].angles"),
                    format!("expected {} angles for d = {}, got {}", gd.n(), gd.d(), c.angles.len()),
                ));
            }
            if c.dim_chi() != dim_chi {
                return Err(Error::invalid_at(
                    format!("classes[{i}].chi"),
                    format!("twist has size {}, expected dim_chi = {dim_chi}", c.dim_chi()),
                ));
            }
        }
        Ok(Self {
            gd,
            classes,
            volume,
            dim_chi,
        })
    }

    pub fn empty(gd: GroupData, volume: f64, dim_chi: usize) -> Result<Self> {
        Self::new(gd, volume, dim_chi, Vec::new())
    }

    pub fn group(&self) -> &GroupData {
        &self.gd
    }

    pub fn classes(&self) -> &[PrimitiveClass] {
        &self.classes
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn dim_chi(&self) -> usize {
        self.dim_chi
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Shortest primitive length.
    pub fn systole(&self) -> Option<f64> {
        self.classes.iter().map(|c| c.l0).min_by(|a, b| a.total_cmp(b))
    }

    pub fn max_chi_norm(&self) -> f64 {
        self.classes.iter().map(|c| c.chi_norm()).fold(0.0, f64::max)
    }

    /// The classes of both spectra, `self` first.
    pub fn merged(&self, other: &LengthSpectrum) -> Result<LengthSpectrum> {
        if self.gd != other.gd || self.dim_chi != other.dim_chi {
            return Err(Error::invalid("cannot merge spectra with different d or dim_chi"));
        }
        let mut classes = self.classes.clone();
        classes.extend(other.classes.iter().cloned());
        Self::new(self.gd.clone(), self.volume, self.dim_chi, classes)
    }

    /// All powers `gamma_0^j` with `j * l0 <= lmax`, ordered by length, then class
    /// index, then `j`.
    pub fn powers_up_to(&self, lmax: f64) -> Vec<ClassPower> {
        let mut out = Vec::new();
        for (idx, c) in self.classes.iter().enumerate() {
            let jmax = if lmax >= c.l0 { (lmax / c.l0).floor() as usize } else { 0 };
            // guard against j * l0 rounding above lmax
            let jmax = (jmax.saturating_sub(1)..=jmax + 1)
                .rev()
                .find(|&j| j as f64 * c.l0 <= lmax)
                .unwrap_or(0);
            let traces = c.chi_traces(jmax);
            for (k, tr) in traces.into_iter().enumerate() {
                let j = k + 1;
                out.push(ClassPower {
                    class: idx,
                    j: j as u32,
                    l0: c.l0,
                    length: j as f64 * c.l0,
                    angles: c.angles.iter().map(|a| (j as f64 * a).rem_euclid(FOUR_PI)).collect(),
                    chi_trace: tr,
                });
            }
        }
        out.sort_by(|a, b| {
            a.length
                .total_cmp(&b.length)
                .then(a.class.cmp(&b.class))
                .then(a.j.cmp(&b.j))
        });
        out
    }

    /// `N(R)`: the number of classes `gamma_0^j` of length at most `R`.
    pub fn counting_function(&self, r: f64) -> usize {
        self.classes
            .iter()
            .filter(|c| c.l0 <= r)
            .map(|c| {
                let j = (r / c.l0).floor() as usize;
                (j.saturating_sub(1)..=j + 1).rev().find(|&j| j as f64 * c.l0 <= r).unwrap_or(0)
            })
            .sum()
    }

    /// `sup_{R <= lmax} N(R) e^{-rate R}`, attained at a jump of `N`.
    pub fn growth_constant(&self, rate: f64, lmax: f64) -> f64 {
        let powers = self.powers_up_to(lmax);
        let mut best: f64 = 0.0;
        for (i, p) in powers.iter().enumerate() {
            let last_at_length = powers.get(i + 1).is_none_or(|q| q.length > p.length);
            if last_at_length {
                best = best.max((i + 1) as f64 * (-rate * p.length).exp());
            }
        }
        best
    }

    /// Least-squares slope of `log N(R)` against `R` on `samples` equally spaced
    /// points of `[r_lo, r_hi]`, skipping points where `N(R) = 0`.
    pub fn fit_counting_exponent(&self, r_lo: f64, r_hi: f64, samples: usize) -> Result<GrowthFit> {
        self.fit_counting(r_lo, r_hi, samples, |_| 0.0)
    }

    /// Slope of `log(R N(R))` against `R`: the exponent `a` in `N(R) ~ C e^{aR} / R`,
    /// with the logarithmic factor of the prime-geodesic density removed.
    pub fn fit_prime_geodesic_exponent(&self, r_lo: f64, r_hi: f64, samples: usize) -> Result<GrowthFit> {
        if r_lo <= 0.0 {
            return Err(Error::invalid("prime-geodesic fit needs r_lo > 0"));
        }
        self.fit_counting(r_lo, r_hi, samples, f64::ln)
    }

    fn fit_counting(&self, r_lo: f64, r_hi: f64, samples: usize, shift: impl Fn(f64) -> f64) -> Result<GrowthFit> {
        if !(r_lo < r_hi) || samples < 2 {
            return Err(Error::invalid("growth fit needs r_lo < r_hi and at least two samples"));
        }
        let pts: Vec<(f64, f64)> = (0..samples)
            .map(|i| r_lo + (r_hi - r_lo) * i as f64 / (samples - 1) as f64)
            .filter_map(|r| {
                let n = self.counting_function(r);
                (n > 0).then(|| (r, (n as f64).ln() + shift(r)))
            })
            .collect();
        if pts.len() < 2 {
            return Err(Error::invalid("growth fit window contains fewer than two nonzero counts"));
        }
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let exponent = sxy / sxx;
        Ok(GrowthFit {
            exponent,
            log_constant: my - exponent * mx,
        })
    }
}

/// `log N(R) ~ log_constant + exponent * R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub exponent: f64,
    pub log_constant: f64,
}

/// Constants with `|tr chi(gamma)| <= K e^{k l(gamma)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistGrowthCert {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub k: f64,
}

impl TwistGrowthCert {
    /// Checks the bound on every power up to `lmax`.
    pub fn validate(&self, ls: &LengthSpectrum, lmax: f64) -> Result<()> {
        for p in ls.powers_up_to(lmax) {
            let bound = self.big_k * (self.k * p.length).exp();
            if p.chi_trace.norm() > bound * (1.0 + 1e-12) {
                return Err(Error::invalid(format!(
                    "class {} power {}: |tr chi| = {} exceeds K e^(k l) = {bound}",
                    p.class,
                    p.j,
                    p.chi_trace.norm()
                )));
            }
        }
        Ok(())
    }
}

/// `k = max log(||chi(gamma_0)||) / l0` (at least zero) and the smallest `K` for
/// which the bound holds on all powers up to `lmax`. Since
/// `|tr chi^j| <= dim_chi ||chi||^j`, `K <= dim_chi` always.
pub fn certify_twist_growth(ls: &LengthSpectrum, lmax: f64) -> Result<TwistGrowthCert> {
    if ls.is_empty() {
        return Err(Error::invalid("twist growth of an empty spectrum is undefined"));
    }
    let k = ls
        .classes
        .iter()
        .map(|c| c.chi_norm().ln() / c.l0)
        .fold(0.0, f64::max);
    let big_k = ls
        .powers_up_to(lmax)
        .iter()
        .map(|p| p.chi_trace.norm() * (-k * p.length).exp())
        .fold(0.0, f64::max);
    Ok(TwistGrowthCert { big_k, k })
}

/// Parameters of [`synthesize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisOptions {
    pub count: usize,
    pub systole: f64,
    pub seed: u64,
    pub dim_chi: usize,
    pub chi_norm: f64,
}

/// A pseudo-random formal length spectrum.
///
/// Primitive lengths are drawn from the density proportional to
/// `e^{2|rho| l} / l` on `[systole, L]`, with `L` chosen so that the expected
/// number of lengths below `R` is `Ei(2|rho| R) - Ei(2|rho| systole)`. Angles are
/// uniform. Twists are `U diag(r) V` with Haar unitaries `U`, `V` and `r` uniform
/// in `[1, chi_norm]`, so `||chi|| <= chi_norm`. The volume is one.
pub fn synthesize(gd: &GroupData, opts: SynthesisOptions) -> Result<LengthSpectrum> {
    let SynthesisOptions {
        count,
        systole,
        seed,
        dim_chi,
        chi_norm,
    } = opts;
    if !(systole.is_finite() && systole > 0.0) {
        return Err(Error::invalid(format!("systole must be positive, got {systole}")));
    }
    if !(chi_norm.is_finite() && chi_norm >= 1.0) {
        return Err(Error::invalid(format!("chi_norm must be >= 1, got {chi_norm}")));
    }
    if dim_chi == 0 {
        return Err(Error::invalid("dim_chi must be positive"));
    }
    let rate = 2.0 * gd.rho_norm();
    let base = ei(rate * systole);
    let cdf = |l: f64| ei(rate * l) - base;
    let mut top = systole * 2.0;
    while cdf(top) < count as f64 {
        top *= 1.5;
    }
    let top = bisect(|l| cdf(l) - count as f64, systole, top);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = Vec::with_capacity(count);
    for _ in 0..count {
        let target = rng.random::<f64>() * count as f64;
        let l0 = bisect(|l| cdf(l) - target, systole, top).max(systole);
        let angles: Vec<f64> = (0..gd.n()).map(|_| rng.random::<f64>() * TWO_PI).collect();
        let chi = random_twist(&mut rng, dim_chi, chi_norm);
        classes.push(PrimitiveClass::new(l0, angles, chi)?.canonicalized());
    }
    classes.sort_by(|a, b| a.l0.total_cmp(&b.l0));
    LengthSpectrum::new(gd.clone(), 1.0, dim_chi, classes)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn random_twist(rng: &mut ChaCha8Rng, n: usize, chi_norm: f64) -> DMatrix<Complex64> {
    let u = haar_unitary(rng, n);
    let v = haar_unitary(rng, n);
    let r: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(1.0 + (chi_norm - 1.0) * rng.random::<f64>(), 0.0))
        .collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(r));
    u * d * v
}

fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Exponential integral `Ei(x)` for `x > 0`.
pub(crate) fn ei(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x > 40.0 {
        // asymptotic series, truncated at its smallest term
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            let next = term * k as f64 / x;
            if next > term {
                break;
            }
            term = next;
            sum += term;
        }
        return x.exp() / x * sum;
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..500 {
        term *= x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    EULER + x.ln() + sum
}

/// A finite piece of the spectrum of `A^#_chi(sigma)` with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub t: Complex64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    entries: Vec<EigenEntry>,
}

impl EigenSpectrum {
    /// Sorts the entries by real part, then imaginary part.
    pub fn new(mut entries: Vec<EigenEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if !(e.t.re.is_finite() && e.t.im.is_finite()) {
                return Err(Error::invalid_at(format!("entries[{i}].t"), "eigenvalue is not finite"));
            }
            if e.m == 0 {
                return Err(Error::invalid_at(format!("entries[{i}].m"), "multiplicity must be positive"));
            }
        }
        entries.sort_by(|a, b| a.t.re.total_cmp(&b.t.re).then(a.t.im.total_cmp(&b.t.im)));
        Ok(Self { entries })
    }

    pub fn from_pairs(pairs: &[(Complex64, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(t, m)| EigenEntry { t, m }).collect())
    }

    pub fn entries(&self) -> &[EigenEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: EigenDoc = serde_json::from_str(text)?;
        Self::new(doc.entries)
    }

    pub fn to_json_string(&self) -> String {
        let doc = EigenDoc {
            entries: self.entries.clone(),
        };
        serde_json::to_string(&doc).expect("eigen spectrum serializes") + "\n"
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&read_file(path.as_ref())?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_json_string())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenDoc {
    entries: Vec<EigenEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthDoc {
    d: u32,
    volume: f64,
    dim_chi: usize,
    classes: Vec<ClassDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    l0: f64,
    angles: Vec<f64>,
    chi: Vec<Vec<Complex64>>,
}

impl LengthSpectrum {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: LengthDoc = serde_json::from_str(text)?;
        let gd = GroupData::new(doc.d).map_err(|e| relocate(e, "d"))?;
        let mut classes = Vec::with_capacity(doc.classes.len());
        for (i, c) in doc.classes.into_iter().enumerate() {
            let rows = c.chi.len();
            if let Some((r, row)) = c.chi.iter().enumerate().find(|(_, row)| row.len() != rows) {
                return Err(Error::invalid_at(
                    format!("classes[{i}].chi[{r}]"),
                    format!("row has {} entries, expected {rows}", row.len()),
                ));
            }
            let chi = DMatrix::from_fn(rows, rows, |r, s| c.chi[r][s]);
            let class = PrimitiveClass::new(c.l0, c.angles, chi).map_err(|e| prefix(e, &format!("classes[{i}]")))?;
            classes.push(class);
        }
        Self::new(gd, doc.volume, doc.dim_chi, classes)
    }

    pub fn to_json_string(&self) -> String {
        let doc = LengthDoc {
            d: self.gd.d(),
            volume: self.volume,
            dim_chi: self.dim_chi,
            classes: self
                .classes
                .iter()
                .map(|c| ClassDoc {
                    l0: c.l0,
                    angles: c.angles.clone(),
                    chi: c.chi.row_iter().map(|row| row.iter().copied().collect()).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("length spectrum serializes") + "\n"
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&read_file(path.as_ref())?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_json_string())
    }
}

fn relocate(e: Error, path: &str) -> Error {
    match e {
        Error::Validation { message, .. } => Error::invalid_at(path, message),
        other => other,
    }
}

fn prefix(e: Error, head: &str) -> Error {
    match e {
        Error::Validation { path, message } => Error::Validation {
            path: Some(match path {
                Some(p) => format!("{head}.{p}"),
                None => head.to_string(),
            }),
            message,
        },
        other => other,
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn scalar_class(l0: f64, angles: Vec<f64>, chi: f64) -> PrimitiveClass {
        PrimitiveClass::new(l0, angles, DMatrix::from_element(1, 1, c(chi))).unwrap()
    }

    fn d3() -> GroupData {
        GroupData::new(3).unwrap()
    }

    #[test]
    fn powers_of_a_single_class() {
        let ls = LengthSpectrum::new(d3(), 1.0, 1, vec![scalar_class(1.0, vec![0.5], 2.0)]).unwrap();
        let p = ls.powers_up_to(3.5);
        assert_eq!(p.iter().map(|p| p.j).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(p[2].chi_trace, c(8.0));
        assert_eq!(p[2].length, 3.0);
        assert!((p[2].angles[0] - 1.5).abs() < 1e-15);
        assert!(LengthSpectrum::empty(d3(), 1.0, 1).unwrap().powers_up_to(10.0).is_empty());
    }

    #[test]
    fn powers_are_prefix_stable() {
        let gd = d3();
        let ls = synthesize(
            &gd,
            SynthesisOptions {
                count: 30,
                systole: 0.4,
                seed: 3,
                dim_chi: 2,
                chi_norm: 1.5,
            },
        )
        .unwrap();
        let a = ls.powers_up_to(2.0);
        let b = ls.powers_up_to(3.0);
        assert!(b.len() >= a.len());
        assert_eq!(&b[..a.len()], &a[..]);
    }

    #[test]
    fn counting_function_steps() {
        let ls = LengthSpectrum::new(
            d3(),
            1.0,
            1,
            vec![scalar_class(1.0, vec![0.0], 1.0), scalar_class(2.0, vec![0.0], 1.0)],
        )
        .unwrap();
        assert_eq!(ls.counting_function(0.5), 0);
        assert_eq!(ls.counting_function(1.0), 1);
        // 2 * 1.0 and 2.0 coincide: the jump has size two
        assert_eq!(ls.counting_function(1.999), 1);
        assert_eq!(ls.counting_function(2.0), 3);
        assert_eq!(ls.counting_function(4.0), 6);
        assert_eq!(ls.counting_function(4.0), ls.powers_up_to(4.0).len());
    }

    #[test]
    fn traces_by_products_and_powering_agree() {
        let chi = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.3, 0.4), c(1.0), Complex64::new(0.0, -0.5), Complex64::new(0.9, 0.1)],
        );
        let pc = PrimitiveClass::new(1.0, vec![0.1], chi).unwrap();
        let seq = pc.chi_traces(12);
        for (k, tr) in seq.iter().enumerate() {
            let direct = pc.chi_trace(k as u32 + 1);
            assert!((tr - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn invalid_classes_rejected() {
        let one = DMatrix::from_element(1, 1, c(1.0));
        assert!(PrimitiveClass::new(-1.0, vec![0.0], one.clone()).is_err());
        assert!(PrimitiveClass::new(1.0, vec![7.0], one.clone()).is_err());
        assert!(PrimitiveClass::new(1.0, vec![0.0], DMatrix::from_element(1, 1, c(0.0))).is_err());
        let ls = LengthSpectrum::new(d3(), 1.0, 2, vec![PrimitiveClass::new(1.0, vec![0.0], one).unwrap()]);
        assert!(matches!(ls, Err(Error::Validation { path: Some(p), .. }) if p == "classes[0].chi"));
    }

    #[test]
    fn canonical_angles_pair_reflections() {
        assert_eq!(canonical_angles(&[4.0, 5.0, 1.0]), vec![TWO_PI - 4.0, TWO_PI - 5.0, 1.0]);
        // an odd number of reflections leaves one angle above pi, placed last
        assert_eq!(canonical_angles(&[4.0, 0.5]), vec![0.5, 4.0]);
        assert_eq!(canonical_angles(&[4.0, 5.0, 6.0]), vec![TWO_PI - 4.0, TWO_PI - 5.0, 6.0]);
    }

    #[test]
    fn certificate_for_unitary_and_diagonal_twists() {
        let gd = d3();
        let id = DMatrix::<Complex64>::identity(3, 3);
        let ls = LengthSpectrum::new(gd.clone(), 1.0, 3, vec![PrimitiveClass::new(0.7, vec![0.2], id).unwrap()]).unwrap();
        let cert = certify_twist_growth(&ls, 10.0).unwrap();
        assert_eq!(cert.k, 0.0);
        assert!((cert.big_k - 3.0).abs() < 1e-12);

        let e = std::f64::consts::E;
        let ls = LengthSpectrum::new(gd, 1.0, 1, vec![scalar_class(0.5, vec![0.0], e)]).unwrap();
        let cert = certify_twist_growth(&ls, 10.0).unwrap();
        assert!((cert.k - 2.0).abs() < 1e-12);
        cert.validate(&ls, 10.0).unwrap();
        assert!(certify_twist_growth(&LengthSpectrum::empty(d3(), 1.0, 1).unwrap(), 1.0).is_err());
    }

    #[test]
    fn ei_matches_reference_values() {
        // Ei(1) and Ei(10), Ei(50) from tables
        assert!((ei(1.0) - 1.895_117_816_355_936_8).abs() < 1e-14);
        assert!((ei(10.0) / 2_492.228_976_241_877_7 - 1.0).abs() < 1e-13);
        assert!((ei(50.0) / 1.058_563_689_713_169_1e20 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn synthesis_is_deterministic_and_bounded() {
        let gd = GroupData::new(5).unwrap();
        let opts = SynthesisOptions {
            count: 50,
            systole: 0.3,
            seed: 11,
            dim_chi: 3,
            chi_norm: 2.0,
        };
        let a = synthesize(&gd, opts).unwrap();
        let b = synthesize(&gd, opts).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.classes().len(), 50);
        assert!(a.systole().unwrap() >= 0.3);
        assert!(a.max_chi_norm() <= 2.0 + 1e-12);
        assert!(synthesize(&gd, SynthesisOptions { count: 0, ..opts }).unwrap().is_empty());
    }

    #[test]
    fn log_factor_lifts_the_fitted_exponent() {
        let ls = synthesize(
            &d3(),
            SynthesisOptions {
                count: 3000,
                systole: 1.0,
                seed: 4,
                dim_chi: 1,
                chi_norm: 1.0,
            },
        )
        .unwrap();
        let top = ls.classes().iter().map(|c| c.l0()).fold(0.0, f64::max);
        let plain = ls.fit_counting_exponent(0.5 * top, top, 30).unwrap().exponent;
        let lifted = ls.fit_prime_geodesic_exponent(0.5 * top, top, 30).unwrap().exponent;
        assert!(plain < lifted && lifted < 2.3, "{plain} {lifted}");
        assert!((lifted - 2.0).abs() < 0.2, "{lifted}");
        assert!(ls.fit_prime_geodesic_exponent(0.0, top, 30).is_err());
    }

    #[test]
    fn json_round_trip_and_field_paths() {
        let gd = GroupData::new(5).unwrap();
        let ls = synthesize(
            &gd,
            SynthesisOptions {
                count: 5,
                systole: 0.5,
                seed: 1,
                dim_chi: 2,
                chi_norm: 1.2,
            },
        )
        .unwrap();
        let text = ls.to_json_string();
        assert_eq!(LengthSpectrum::from_json_str(&text).unwrap(), ls);

        let bad = r#"{"d":3,"volume":1,"dim_chi":1,"classes":[
            {"l0":1,"angles":[0],"chi":[[[1,0]]]},
            {"l0":-2,"angles":[0],"chi":[[[1,0]]]}]}"#;
        match LengthSpectrum::from_json_str(bad) {
            Err(Error::Validation { path: Some(p), .. }) => assert_eq!(p, "classes[1].l0"),
            other => panic!("unexpected {other:?}"),
        }

        let es = EigenSpectrum::from_json_str(r#"{"entries":[{"t":[4.0,0.5],"m":2},{"t":[-1,0],"m":1}]}"#).unwrap();
        assert_eq!(es.entries()[0].t, Complex64::new(-1.0, 0.0));
        assert_eq!(es.entries()[1].t, Complex64::new(4.0, 0.5));
        assert_eq!(EigenSpectrum::from_json_str(&es.to_json_string()).unwrap(), es);
        assert!(matches!(
            EigenSpectrum::from_json_str(r#"{"entries":[{"t":[1,0],"m":0}]}"#),
            Err(Error::Validation { path: Some(p), .. }) if p == "entries[0].m"
        ));
    }
}
