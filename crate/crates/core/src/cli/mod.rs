//! The `zetaflow` command line.
//!
//! Every command reads its parameters from flags and, optionally, from a JSON
//! config file given with `--config`; flags take precedence. Results go to stdout
//! or `--output` as CSV or JSON. Exit status is 0 on success, 1 on invalid input
//! and 2 on a numerical failure (including a failed `verify` suite).

mod table;
mod verify;

pub use table::{emit_table, eval_table, read_eval_rows, Cell, EvalRow, Format, Table, EVAL_HEADER};
pub use verify::{log_log_slope, random_eigen_spectrum, results_table, run_suite, CheckResult, Suite};

use crate::continuation::{
    residue_order, resolvent_trace_geometric, resolvent_trace_spectral, resolvent_trace_via_heat, AnchorSet,
    ContinuedL,
};
use crate::error::{Error, Result};
use crate::heat::{geometric_heat_trace, spectral_heat_trace};
use crate::repr::{plancherel_polynomial, Character, GroupData, GroupType, Weight};
use crate::spectrum::{read_file, synthesize, EigenSpectrum, LengthSpectrum, SynthesisOptions};
use crate::zeta::{EulerSeries, TruncationPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Environment variable holding the number of worker threads.
pub const THREADS_ENV: &str = "ZETAFLOW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "zetaflow", version, about = "Twisted Selberg and Ruelle zeta functions from length-spectrum data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with default values for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Odd dimension of the manifold.
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// Highest weight of sigma, e.g. "1/2,1/2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Length spectrum JSON.
    #[arg(long, global = true)]
    pub spectrum: Option<PathBuf>,
    /// Eigenvalue list JSON.
    #[arg(long, global = true)]
    pub eigen: Option<PathBuf>,
    /// Comma-separated complex points, e.g. "3,3+1i,4-0.5i".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, global = true)]
    pub lmax: Option<f64>,
    #[arg(long, global = true)]
    pub tail_eps: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub abscissa_margin: Option<f64>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Fix every implicit choice (such as the default seed) so output bytes are reproducible.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Spectral,
    Geometric,
    Heat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a pseudo-random length spectrum.
    GenSpectrum {
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        systole: Option<f64>,
        #[arg(long)]
        dim_chi: Option<usize>,
        #[arg(long)]
        chi_norm: Option<f64>,
    },
    /// Coefficients of the Plancherel polynomial, or its values on --s.
    Plancherel,
    /// log Z(s; sigma, chi) on --s.
    Selberg,
    /// log R(s; sigma, chi) on --s.
    Ruelle,
    /// d/ds log Z(s; sigma, chi) on --s.
    LogDerivative,
    /// Heat trace at the times --t, spectral with --eigen, geometric with --spectrum.
    HeatTrace {
        #[arg(long)]
        t: Option<String>,
    },
    /// Resolvent trace for the anchors --anchors.
    Resolvent {
        #[arg(long, allow_hyphen_values = true)]
        anchors: Option<String>,
        #[arg(long, value_enum)]
        route: Option<Route>,
    },
    /// The continued log-derivative on --s from an eigenvalue list.
    Continue {
        #[arg(long)]
        dim_chi: Option<usize>,
        #[arg(long)]
        volume: Option<f64>,
    },
    /// Contour residues at every singularity of the continued log-derivative.
    Residues {
        #[arg(long)]
        dim_chi: Option<usize>,
        #[arg(long)]
        volume: Option<f64>,
    },
    /// Compares log R with the alternating sum of log Z_p on --s.
    FactorizationCheck,
    /// Runs a randomised verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
}

/// Defaults read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub d: Option<u32>,
    pub sigma: Option<SigmaSpec>,
    pub spectrum_path: Option<PathBuf>,
    pub eigen_path: Option<PathBuf>,
    pub s_grid: Option<Vec<Complex64>>,
    pub truncation: Option<TruncationPolicy>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub deterministic: Option<bool>,
    pub count: Option<usize>,
    pub systole: Option<f64>,
    pub dim_chi: Option<usize>,
    pub chi_norm: Option<f64>,
    pub volume: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub anchors: Option<Vec<Complex64>>,
    pub route: Option<Route>,
    pub suite: Option<Suite>,
}

/// `sigma` either as text (`"1/2,1/2"`) or as a list of numbers.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Text(String),
    Coords(Vec<f64>),
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&read_file(path)?)?)
    }
}

/// Parses `"2"`, `"-1.5i"`, `"3+0.5i"` or `"1e-3-2i"`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::invalid(format!("cannot parse complex number {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("cannot parse real number {p:?}")))
        })
        .collect()
}

/// Flags merged over the config file.
struct Job {
    common: CommonArgs,
    config: JobConfig,
}

impl Job {
    fn new(common: CommonArgs) -> Result<Self> {
        let config = match &common.config {
            Some(p) => JobConfig::load(p)?,
            None => JobConfig::default(),
        };
        Ok(Self { common, config })
    }

    fn format(&self) -> Format {
        self.common.format.or(self.config.format).unwrap_or(Format::Csv)
    }

    fn output(&self) -> Option<&Path> {
        self.common.output.as_deref().or(self.config.output.as_deref())
    }

    fn deterministic(&self) -> bool {
        self.common.deterministic || self.config.deterministic.unwrap_or(false)
    }

    fn seed(&self) -> u64 {
        self.common.seed.or(self.config.seed).unwrap_or_else(|| {
            if self.deterministic() {
                0
            } else {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_nanos() as u64)
                    .unwrap_or(0)
            }
        })
    }

    fn policy(&self) -> Result<TruncationPolicy> {
        let mut tp = self.config.truncation.unwrap_or_default();
        if let Some(v) = self.common.lmax {
            tp.lmax = v;
        }
        if let Some(v) = self.common.tail_eps {
            tp.tail_eps = v;
        }
        if let Some(v) = self.common.abscissa_margin {
            tp.abscissa_margin = v;
        }
        if rayon::current_num_threads() > 1 {
            tp.parallel = true;
        }
        tp.validate()?;
        Ok(tp)
    }

    fn spectrum_path(&self) -> Option<&Path> {
        self.common.spectrum.as_deref().or(self.config.spectrum_path.as_deref())
    }

    fn eigen_path(&self) -> Option<&Path> {
        self.common.eigen.as_deref().or(self.config.eigen_path.as_deref())
    }

    fn length_spectrum(&self) -> Result<LengthSpectrum> {
        let path = self
            .spectrum_path()
            .ok_or_else(|| Error::invalid_at("spectrum_path", "a length spectrum is required (--spectrum)"))?;
        let ls = LengthSpectrum::load(path)?;
        if let Some(d) = self.common.d.or(self.config.d) {
            if d != ls.group().d() {
                return Err(Error::invalid_at(
                    "d",
                    format!("--d {d} contradicts the spectrum file (d = {})", ls.group().d()),
                ));
            }
        }
        Ok(ls)
    }

    fn eigen_spectrum(&self) -> Result<EigenSpectrum> {
        let path = self
            .eigen_path()
            .ok_or_else(|| Error::invalid_at("eigen_path", "an eigenvalue list is required (--eigen)"))?;
        EigenSpectrum::load(path)
    }

    fn group(&self) -> Result<GroupData> {
        if let Some(d) = self.common.d.or(self.config.d) {
            return GroupData::new(d).map_err(|e| at_path(e, "d"));
        }
        if let Some(path) = self.spectrum_path() {
            return Ok(LengthSpectrum::load(path)?.group().clone());
        }
        Err(Error::invalid_at("d", "the dimension is required (--d)"))
    }

    fn sigma(&self, gd: &GroupData) -> Result<Weight> {
        let sigma = match (&self.common.sigma, &self.config.sigma) {
            (Some(text), _) | (None, Some(SigmaSpec::Text(text))) => Weight::parse(text),
            (None, Some(SigmaSpec::Coords(c))) => Weight::new(c),
            (None, None) => Ok(Weight::zero(gd.n())),
        }
        .map_err(|e| at_path(e, "sigma"))?;
        if sigma.rank() != gd.n() {
            return Err(Error::invalid_at(
                "sigma",
                format!("expected {} coordinates for d = {}, got {}", gd.n(), gd.d(), sigma.rank()),
            ));
        }
        sigma.ensure_m_dominant().map_err(|e| at_path(e, "sigma"))?;
        Ok(sigma)
    }

    fn s_grid(&self) -> Result<Vec<Complex64>> {
        let grid = match (&self.common.s, &self.config.s_grid) {
            (Some(text), _) => parse_complex_list(text).map_err(|e| at_path(e, "s_grid"))?,
            (None, Some(g)) => g.clone(),
            (None, None) => Vec::new(),
        };
        if grid.is_empty() {
            return Err(Error::invalid_at("s_grid", "at least one evaluation point is required (--s)"));
        }
        Ok(grid)
    }

    fn dim_chi(&self, flag: Option<usize>) -> usize {
        flag.or(self.config.dim_chi).unwrap_or(1)
    }

    fn volume(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.volume).unwrap_or(1.0)
    }
}

fn at_path(e: Error, path: &str) -> Error {
    match e {
        Error::Validation { path: None, message } => Error::invalid_at(path, message),
        other => other,
    }
}

fn row3(label: Cell, z: Complex64) -> Vec<Cell> {
    vec![label, Cell::Real(z.re), Cell::Real(z.im)]
}

/// Sets the size of the global rayon pool from [`THREADS_ENV`], if present.
pub fn init_threads() -> Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::invalid_at(THREADS_ENV, format!("expected a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::invalid_at(THREADS_ENV, e.to_string()))
}

/// Executes one command. Returns the process exit status on success paths; a
/// failed verification suite yields 2.
pub fn run(cli: Cli) -> Result<i32> {
    let job = Job::new(cli.common)?;
    let format = job.format();
    let output = job.output();
    let emit = |t: &Table| emit_table(t, format, output);
    match cli.command {
        Command::GenSpectrum {
            count,
            systole,
            dim_chi,
            chi_norm,
        } => {
            let gd = job.group()?;
            let opts = SynthesisOptions {
                count: count.or(job.config.count).unwrap_or(1000),
                systole: systole.or(job.config.systole).unwrap_or(1.0),
                seed: job.seed(),
                dim_chi: job.dim_chi(dim_chi),
                chi_norm: chi_norm.or(job.config.chi_norm).unwrap_or(1.0),
            };
            let ls = synthesize(&gd, opts)?;
            match output {
                Some(p) => ls.save(p)?,
                None => print!("{}", ls.to_json_string()),
            }
        }
        Command::Plancherel => {
            let gd = job.group()?;
            let p = plancherel_polynomial(&gd, &job.sigma(&gd)?)?;
            if job.common.s.is_some() || job.config.s_grid.is_some() {
                let rows: Vec<EvalRow> = job.s_grid()?.into_iter().map(|s| EvalRow::new(s, p.eval(s), 0.0)).collect();
                emit(&eval_table(&rows))?;
            } else {
                let mut t = Table::new(&["power", "coeff_re", "coeff_im"]);
                for (m, a) in p.even_coeffs().iter().enumerate() {
                    t.push(row3(Cell::Int(2 * m as i64), *a))?;
                }
                emit(&t)?;
            }
        }
        Command::Selberg | Command::Ruelle | Command::LogDerivative => {
            let ls = job.length_spectrum()?;
            let sigma = job.sigma(ls.group())?;
            let series = EulerSeries::new(&ls, &sigma, job.policy()?)?;
            let mut rows = Vec::new();
            for s in job.s_grid()? {
                let v = match cli.command {
                    Command::Selberg => series.selberg_log(s)?,
                    Command::Ruelle => series.ruelle_log(s)?,
                    _ => series.log_derivative(s)?,
                };
                rows.push(EvalRow::new(s, v.value, v.tail_bound));
            }
            emit(&eval_table(&rows))?;
        }
        Command::HeatTrace { t } => {
            let times = match (t, &job.config.t_grid) {
                (Some(text), _) => parse_real_list(&text).map_err(|e| at_path(e, "t_grid"))?,
                (None, Some(g)) => g.clone(),
                (None, None) => Vec::new(),
            };
            if times.is_empty() {
                return Err(Error::invalid_at("t_grid", "at least one time is required (--t)"));
            }
            if job.eigen_path().is_some() {
                let es = job.eigen_spectrum()?;
                let mut table = Table::new(&["t", "value_re", "value_im"]);
                for t in times {
                    table.push(row3(Cell::Real(t), spectral_heat_trace(&es, t)?))?;
                }
                emit(&table)?;
            } else {
                let ls = job.length_spectrum()?;
                let sigma = job.sigma(ls.group())?;
                let tp = job.policy()?;
                let mut table = Table::new(&[
                    "t",
                    "identity_re",
                    "identity_im",
                    "hyperbolic_re",
                    "hyperbolic_im",
                    "total_re",
                    "total_im",
                ]);
                for t in times {
                    let h = geometric_heat_trace(&ls, &sigma, t, &tp)?;
                    let mut row = vec![Cell::Real(t)];
                    for z in [h.identity_part, h.hyperbolic_part, h.total] {
                        row.extend([Cell::Real(z.re), Cell::Real(z.im)]);
                    }
                    table.push(row)?;
                }
                emit(&table)?;
            }
        }
        Command::Resolvent { anchors, route } => {
            let points = match (anchors, &job.config.anchors) {
                (Some(text), _) => parse_complex_list(&text).map_err(|e| at_path(e, "anchors"))?,
                (None, Some(a)) => a.clone(),
                (None, None) => return Err(Error::invalid_at("anchors", "anchors are required (--anchors)")),
            };
            let a = AnchorSet::new(points).map_err(|e| at_path(e, "anchors"))?;
            let route = route.or(job.config.route).unwrap_or(if job.eigen_path().is_some() {
                Route::Spectral
            } else {
                Route::Geometric
            });
            let (name, value) = match route {
                Route::Spectral => ("spectral", resolvent_trace_spectral(&job.eigen_spectrum()?, &a)?),
                Route::Geometric | Route::Heat => {
                    let ls = job.length_spectrum()?;
                    let sigma = job.sigma(ls.group())?;
                    let tp = job.policy()?;
                    if route == Route::Heat {
                        ("heat", resolvent_trace_via_heat(&ls, &sigma, &a, &tp)?)
                    } else {
                        ("geometric", resolvent_trace_geometric(&ls, &sigma, &a, &tp)?)
                    }
                }
            };
            let mut t = Table::new(&["route", "value_re", "value_im"]);
            t.push(row3(Cell::Text(name.into()), value))?;
            emit(&t)?;
        }
        Command::Continue { dim_chi, volume } => {
            let cl = continued(&job, dim_chi, volume)?;
            let rows = job
                .s_grid()?
                .into_iter()
                .map(|s| Ok(EvalRow::new(s, cl.eval(s)?, 0.0)))
                .collect::<Result<Vec<_>>>()?;
            emit(&eval_table(&rows))?;
        }
        Command::Residues { dim_chi, volume } => {
            let cl = continued(&job, dim_chi, volume)?;
            let mut t = Table::new(&["s_re", "s_im", "expected_order", "order", "raw_re", "raw_im"]);
            for sing in cl.singularities() {
                let r = residue_order(&cl, sing.s)?;
                t.push(vec![
                    Cell::Real(sing.s.re),
                    Cell::Real(sing.s.im),
                    Cell::Int(sing.expected_order as i64),
                    Cell::Int(r.order),
                    Cell::Real(r.raw.re),
                    Cell::Real(r.raw.im),
                ])?;
            }
            emit(&t)?;
        }
        Command::FactorizationCheck => {
            let ls = job.length_spectrum()?;
            let sigma = job.sigma(ls.group())?;
            let series = EulerSeries::new(&ls, &sigma, job.policy()?)?;
            let sigma_char = Character::new(&sigma, GroupType::D)?;
            let mut t = Table::new(&[
                "s_re",
                "s_im",
                "ruelle_re",
                "ruelle_im",
                "factorized_re",
                "factorized_im",
                "abs_diff",
                "tail_bound",
            ]);
            for s in job.s_grid()? {
                let direct = series.ruelle_log(s)?;
                let fact = series.ruelle_factorized_log(s, &sigma_char)?;
                t.push(vec![
                    Cell::Real(s.re),
                    Cell::Real(s.im),
                    Cell::Real(direct.value.re),
                    Cell::Real(direct.value.im),
                    Cell::Real(fact.value.re),
                    Cell::Real(fact.value.im),
                    Cell::Real((direct.value - fact.value).norm()),
                    Cell::Real(direct.tail_bound + fact.tail_bound),
                ])?;
            }
            emit(&t)?;
        }
        Command::Verify { suite } => {
            let suite = suite.or(job.config.suite).unwrap_or(Suite::All);
            let seed = job.common.seed.or(job.config.seed).unwrap_or(0);
            let results = run_suite(suite, seed)?;
            emit(&results_table(&results))?;
            if results.iter().any(|r| !r.passed()) {
                for r in results.iter().filter(|r| !r.passed()) {
                    eprintln!("verification failed: {} = {:e} (tolerance {:e})", r.name, r.max_error, r.tolerance);
                }
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn continued(job: &Job, dim_chi: Option<usize>, volume: Option<f64>) -> Result<ContinuedL> {
    let gd = job.group()?;
    let sigma = job.sigma(&gd)?;
    ContinuedL::for_sigma(job.eigen_spectrum()?, &gd, &sigma, job.dim_chi(dim_chi), job.volume(volume))
}

/// Parses the process arguments, runs the command and reports errors on stderr.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("3+0.5i").unwrap(), c(3.0, 0.5));
        assert_eq!(parse_complex(" 4 - 2i ").unwrap(), c(4.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-2.5e+1i").unwrap(), c(1e-3, -25.0));
        assert_eq!(parse_complex("-1.5i").unwrap(), c(0.0, -1.5));
        assert!(parse_complex("2+").is_err());
        assert!(parse_complex("").is_err());
        assert_eq!(parse_complex_list("3,3+1i").unwrap().len(), 2);
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("job.json");
        std::fs::write(&cfg, r#"{"d": 5, "sigma": [0.5, 0.5], "format": "json", "truncation": {"lmax": 12.0}}"#).unwrap();
        let cli = Cli::try_parse_from(["zetaflow", "plancherel", "--config", cfg.to_str().unwrap(), "--d", "3", "--sigma", "1/2", "--lmax", "9"])
            .unwrap();
        let job = Job::new(cli.common).unwrap();
        let gd = job.group().unwrap();
        assert_eq!(gd.d(), 3);
        assert_eq!(job.sigma(&gd).unwrap(), Weight::parse("1/2").unwrap());
        assert_eq!(job.format(), Format::Json);
        assert_eq!(job.policy().unwrap().lmax, 9.0);
    }

    #[test]
    fn unknown_config_fields_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("job.json");
        std::fs::write(&cfg, r#"{"dimension": 3}"#).unwrap();
        let err = JobConfig::load(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn missing_grid_is_validation_error() {
        let cli = Cli::try_parse_from(["zetaflow", "selberg", "--d", "3"]).unwrap();
        let job = Job::new(cli.common).unwrap();
        assert!(matches!(job.s_grid(), Err(Error::Validation { .. })));
    }
}
