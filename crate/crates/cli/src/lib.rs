//! Experiment configuration and CSV drivers behind the `ssekit` binary.
//!
//! Every command is available as a function returning the CSV text, so the
//! binary only parses arguments, writes files and maps errors to exit codes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use ssekit::reference::{lindblad_evolve, nonmarkov_bloch, HomodyneSolution};
use ssekit::{
    models, simulate_ensemble, simulate_linear_ensemble, simulate_trajectory, DensityMatrix, EnsembleConfig,
    EnsembleEstimate, EnsembleOutcome, Functional, LoPhase, NoiseStream, SchemeId, StateVector, TimeGrid,
    TrajectoryRecord,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure of a command, grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit code 2).
    Config(String),
    /// Failure inside the numerics (exit code 3).
    Numerical(ssekit::Error),
    /// Filesystem failure (exit code 1).
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ssekit::Error> for CliError {
    fn from(e: ssekit::Error) -> Self {
        match e {
            ssekit::Error::InvalidParameter { .. } | ssekit::Error::ParameterDomain(_) => {
                CliError::Config(e.to_string())
            }
            ssekit::Error::InsufficientSamples(n) => {
                CliError::Config(format!("realizations: statistics need at least 2 accepted, got {n}"))
            }
            e => CliError::Numerical(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelId {
    Homodyne,
    Oscillator,
    OuQubit,
}

impl ModelId {
    pub fn name(self) -> &'static str {
        match self {
            ModelId::Homodyne => "homodyne",
            ModelId::Oscillator => "oscillator",
            ModelId::OuQubit => "ouqubit",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "homodyne" => Ok(ModelId::Homodyne),
            "oscillator" => Ok(ModelId::Oscillator),
            "ouqubit" => Ok(ModelId::OuQubit),
            _ => config_err(format!("model: unknown value `{s}` (homodyne | oscillator | ouqubit)")),
        }
    }
}

fn parse_scheme(s: &str) -> CliResult<SchemeId> {
    match s {
        "euler" => Ok(SchemeId::EulerRenorm),
        "platen" => Ok(SchemeId::PlatenWeak2),
        _ => config_err(format!("scheme: unknown value `{s}` (euler | platen)")),
    }
}

fn parse_functional(s: &str) -> CliResult<Functional> {
    match s {
        "eta11" => Ok(Functional::Eta11),
        "mean_n" => Ok(Functional::MeanN),
        "bloch_z" => Ok(Functional::BlochZ),
        "output_B" => Ok(Functional::OutputB),
        "norm2" => Ok(Functional::Norm2),
        _ => config_err(format!(
            "functional: unknown value `{s}` (eta11 | mean_n | bloch_z | output_B | norm2)"
        )),
    }
}

fn parse_theta(s: &str) -> CliResult<LoPhase> {
    match s {
        "pi2" => Ok(LoPhase::HalfPi),
        "0" => Ok(LoPhase::Zero),
        _ => config_err(format!("theta: unknown value `{s}` (pi2 | 0)")),
    }
}

fn theta_name(t: LoPhase) -> &'static str {
    match t {
        LoPhase::HalfPi => "pi2",
        LoPhase::Zero => "0",
    }
}

/// Raw `key = value` settings before defaults are applied.
///
/// Keys are the long flag names without the leading dashes. Later layers
/// override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

pub const KEYS: &[&str] = &[
    "model",
    "scheme",
    "dt",
    "t-final",
    "realizations",
    "seed",
    "omega-r",
    "gamma",
    "omega0",
    "k",
    "n-max",
    "n0",
    "theta",
    "functional",
    "stride",
    "threads",
    "out",
    "index",
    "dt-list",
];

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a flat `key = value` file. Blank lines and `#` comments are ignored;
    /// underscores in keys are accepted in place of dashes.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return config_err(format!("config line {}: expected `key = value`", i + 1));
            };
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> CliResult<()> {
        let key = key.replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return config_err(format!("unknown key `{key}`"));
        }
        self.0.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Applies `other` on top of `self`.
    pub fn overlay(mut self, other: &Settings) -> Self {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
        self
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse `{v}`")))
            })
            .transpose()
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelId,
    pub scheme: SchemeId,
    pub dt: f64,
    pub t_final: f64,
    pub realizations: usize,
    pub seed: u64,
    pub omega_r: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub k: f64,
    pub n_max: usize,
    pub n0: usize,
    pub theta: LoPhase,
    pub functional: Functional,
    pub stride: usize,
    pub threads: usize,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// Defaults for `model`, matching the standard experiments.
    pub fn defaults(model: ModelId) -> Self {
        let base = Self {
            model,
            scheme: SchemeId::EulerRenorm,
            dt: 0.01,
            t_final: 10.0,
            realizations: 10_000,
            seed: 1,
            omega_r: 1.0,
            gamma: 1.0,
            omega0: 37f64.sqrt() / 2.0,
            k: 1.0,
            n_max: 12,
            n0: 9,
            theta: LoPhase::HalfPi,
            functional: Functional::Eta11,
            stride: 1,
            threads: 0,
            out: PathBuf::from("."),
        };
        match model {
            ModelId::Homodyne | ModelId::OuQubit => base,
            ModelId::Oscillator => Self {
                scheme: SchemeId::PlatenWeak2,
                t_final: 5.0,
                realizations: 1000,
                functional: Functional::MeanN,
                ..base
            },
        }
    }

    /// Resolves settings on top of the model defaults (model defaults to homodyne).
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let model = ModelId::parse(s.get("model").unwrap_or("homodyne"))?;
        let mut c = Self::defaults(model);
        if let Some(v) = s.get("scheme") {
            c.scheme = parse_scheme(v)?;
        }
        if let Some(v) = s.get("theta") {
            c.theta = parse_theta(v)?;
        }
        if let Some(v) = s.get("functional") {
            c.functional = parse_functional(v)?;
        }
        if let Some(v) = s.get("out") {
            c.out = PathBuf::from(v);
        }
        macro_rules! num {
            ($key:literal, $field:ident) => {
                if let Some(v) = s.number($key)? {
                    c.$field = v;
                }
            };
        }
        num!("dt", dt);
        num!("t-final", t_final);
        num!("realizations", realizations);
        num!("seed", seed);
        num!("omega-r", omega_r);
        num!("gamma", gamma);
        num!("omega0", omega0);
        num!("k", k);
        num!("n-max", n_max);
        num!("n0", n0);
        num!("stride", stride);
        num!("threads", threads);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, v) in [
            ("dt", self.dt),
            ("t-final", self.t_final),
            ("omega-r", self.omega_r),
            ("gamma", self.gamma),
            ("omega0", self.omega0),
            ("k", self.k),
        ] {
            if !v.is_finite() {
                return config_err(format!("{name}: must be finite, got {v}"));
            }
        }
        if self.dt <= 0.0 {
            return config_err(format!("dt: must be > 0, got {}", self.dt));
        }
        if self.t_final < self.dt {
            return config_err(format!("t-final: must be ≥ dt, got {}", self.t_final));
        }
        if self.realizations < 1 {
            return config_err("realizations: must be ≥ 1");
        }
        if self.stride < 1 {
            return config_err("stride: must be ≥ 1");
        }
        self.grid()?;
        Ok(())
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        TimeGrid::new(self.t_final, self.dt).map_err(|e| CliError::Config(format!("dt/t-final: {e}")))
    }

    /// `key = value` pairs describing the run; the worker count is omitted
    /// because it never changes the results.
    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        let mut m = vec![
            ("model", self.model.name().to_string()),
            ("scheme", self.scheme.name().to_string()),
            ("functional", self.functional.name()),
            ("dt", num(self.dt)),
            ("t-final", num(self.t_final)),
            ("realizations", self.realizations.to_string()),
            ("seed", self.seed.to_string()),
            ("stride", self.stride.to_string()),
        ];
        match self.model {
            ModelId::Homodyne => {
                m.push(("omega-r", num(self.omega_r)));
                m.push(("gamma", num(self.gamma)));
                m.push(("theta", theta_name(self.theta).into()));
            }
            ModelId::Oscillator => {
                m.push(("gamma", num(self.gamma)));
                m.push(("n-max", self.n_max.to_string()));
                m.push(("n0", self.n0.to_string()));
            }
            ModelId::OuQubit => {
                m.push(("omega0", num(self.omega0)));
                m.push(("gamma", num(self.gamma)));
                m.push(("k", num(self.k)));
            }
        }
        m
    }

    fn ensemble_config(&self, realizations: usize) -> EnsembleConfig {
        EnsembleConfig::new(realizations, self.seed).with_threads(self.threads)
    }
}

/// Round-trip formatting with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(command: &str, cfg: &ExperimentConfig, extra: &[(&str, String)]) -> String {
    let mut s = format!("# ssekit {VERSION}\n# command = {command}\n");
    for (k, v) in cfg.metadata().iter().map(|(k, v)| (*k, v)).chain(extra.iter().map(|(k, v)| (*k, v))) {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s
}

enum Built {
    Homodyne(models::HomodyneQubit<f64>),
    Oscillator(models::DampedOscillator<f64>),
    OuQubit(models::OuQubit<f64>),
}

fn build(cfg: &ExperimentConfig) -> CliResult<Built> {
    Ok(match cfg.model {
        ModelId::Homodyne => Built::Homodyne(models::HomodyneQubit::new(models::HomodyneParams {
            omega_r: cfg.omega_r,
            gamma: cfg.gamma,
            theta: cfg.theta,
        })?),
        ModelId::Oscillator => Built::Oscillator(models::DampedOscillator::new(models::OscillatorParams {
            gamma: cfg.gamma,
            n_max: cfg.n_max,
            n0: cfg.n0,
        })?),
        ModelId::OuQubit => Built::OuQubit(models::OuQubit::new(models::OuQubitParams {
            omega0: cfg.omega0,
            gamma: cfg.gamma,
            k: cfg.k,
        })?),
    })
}

/// Ensemble of the configured functional; `norm2` runs the linear equation.
pub fn ensemble_outcome(cfg: &ExperimentConfig) -> CliResult<EnsembleOutcome> {
    ensemble_outcome_with(cfg, cfg.dt, cfg.realizations)
}

fn ensemble_outcome_with(cfg: &ExperimentConfig, dt: f64, realizations: usize) -> CliResult<EnsembleOutcome> {
    let grid = TimeGrid::new(cfg.t_final, dt).map_err(|e| CliError::Config(format!("dt/t-final: {e}")))?;
    let ec = cfg.ensemble_config(realizations);
    let fs = [cfg.functional];
    let out = match (build(cfg)?, cfg.functional) {
        (Built::Homodyne(m), Functional::Norm2) => {
            simulate_linear_ensemble(&m.linear_sse(), &m.ground_state(), grid, &fs, ec)?
        }
        (Built::Oscillator(m), Functional::Norm2) => {
            simulate_linear_ensemble(&m.linear_sse(), &m.initial_state(), grid, &fs, ec)?
        }
        (Built::OuQubit(_), Functional::Norm2) => {
            return config_err("functional: norm2 needs a linear equation, which ouqubit does not have")
        }
        (Built::Homodyne(m), f) => {
            check_output(&m, f)?;
            simulate_ensemble(&m, cfg.scheme, &m.ground_state(), grid, &fs, ec)?
        }
        (Built::Oscillator(m), f) => {
            check_output(&m, f)?;
            simulate_ensemble(&m, cfg.scheme, &m.initial_state(), grid, &fs, ec)?
        }
        (Built::OuQubit(m), f) => {
            check_output(&m, f)?;
            simulate_ensemble(&m, cfg.scheme, &m.initial_state(), grid, &fs, ec)?
        }
    };
    out.check_abort_rate()?;
    Ok(out)
}

fn check_output<M: ssekit::DiffusionModel<f64>>(m: &M, f: Functional) -> CliResult<()> {
    let probe = StateVector::basis(m.dim(), 0).map_err(CliError::from)?;
    if f == Functional::OutputB && m.output_signal(&probe).is_none() {
        return config_err("functional: output_B needs a model with a measurement output");
    }
    Ok(())
}

/// Reference curve of the configured functional on the `dt` grid, if one exists.
pub fn reference_values(cfg: &ExperimentConfig) -> CliResult<Option<Vec<f64>>> {
    reference_values_with(cfg, cfg.dt)
}

fn reference_values_with(cfg: &ExperimentConfig, dt: f64) -> CliResult<Option<Vec<f64>>> {
    let grid = TimeGrid::new(cfg.t_final, dt).map_err(|e| CliError::Config(format!("dt/t-final: {e}")))?;
    let times = grid.times();
    if cfg.functional == Functional::Norm2 {
        return Ok((cfg.model != ModelId::OuQubit).then(|| vec![1.0; times.len()]));
    }
    let values = match cfg.model {
        ModelId::Homodyne => {
            let sol = HomodyneSolution::new(cfg.omega_r, cfg.gamma)?;
            let eta: Vec<f64> = times.iter().map(|&t| sol.eta11(t)).collect();
            match cfg.functional {
                Functional::Eta11 => eta,
                Functional::BlochZ => eta.iter().map(|e| 2.0 * e - 1.0).collect(),
                Functional::MeanN => eta.iter().map(|e| 1.0 - e).collect(),
                Functional::OutputB => match cfg.theta {
                    LoPhase::HalfPi => sol.mean_output_curve(&times),
                    LoPhase::Zero => times.iter().map(|&t| cfg.gamma.sqrt() * sol.sigma_x(t) * t).collect(),
                },
                _ => return Ok(None),
            }
        }
        ModelId::Oscillator => {
            let m = models::DampedOscillator::new(models::OscillatorParams {
                gamma: cfg.gamma,
                n_max: cfg.n_max,
                n0: cfg.n0,
            })?;
            let (h, jumps) = m.lindblad_operators();
            let rho0 = DensityMatrix::pure(&m.initial_state());
            let path = lindblad_evolve(&h, &jumps, &rho0, cfg.t_final, dt)?;
            match cfg.functional {
                Functional::MeanN => path.iter().map(occupation).collect(),
                Functional::Eta11 => path.iter().map(|r| r.get(0, 0).re).collect(),
                _ => return Ok(None),
            }
        }
        ModelId::OuQubit => {
            if cfg.k.is_nan() || cfg.k < 0.0 {
                return config_err(format!("k: must be ≥ 0, got {}", cfg.k));
            }
            let path = nonmarkov_bloch(cfg.t_final, dt, cfg.omega0, cfg.gamma, cfg.k)?;
            let eta = path.eta11();
            match cfg.functional {
                Functional::Eta11 => eta,
                Functional::BlochZ => path.states.iter().map(|s| s.z).collect(),
                Functional::MeanN => eta.iter().map(|e| 1.0 - e).collect(),
                _ => return Ok(None),
            }
        }
    };
    Ok(Some(values))
}

fn occupation(rho: &DensityMatrix) -> f64 {
    (0..rho.dim()).map(|n| n as f64 * rho.get(n, n).re).sum()
}

fn strided<T: Copy>(xs: &[T], stride: usize) -> impl Iterator<Item = (usize, T)> + '_ {
    xs.iter().copied().enumerate().step_by(stride)
}

/// CSV files produced by one command, as `(file name, contents)`.
pub type Outputs = Vec<(String, String)>;

/// `ensemble.csv` plus `reference.csv` when the functional has a reference.
pub fn ensemble_csv(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    let outcome = ensemble_outcome(cfg)?;
    let est: EnsembleEstimate = outcome.estimate(cfg.functional)?;
    let mut extra = vec![
        ("aborted", outcome.aborted.len().to_string()),
        ("truncation_warnings", outcome.truncation_warnings.to_string()),
    ];
    if cfg.model == ModelId::OuQubit && cfg.functional != Functional::Norm2 {
        extra.retain(|(k, _)| *k != "truncation_warnings");
    }
    let mut s = header("ensemble", cfg, &extra);
    s.push_str("t,mean,stderr,R_accepted\n");
    for (i, t) in strided(&est.times, cfg.stride) {
        let _ = writeln!(s, "{},{},{},{}", num(t), num(est.mean[i]), num(est.stderr[i]), est.count);
    }
    let mut out = vec![("ensemble.csv".to_string(), s)];
    if let Some(r) = reference_csv_opt(cfg)? {
        out.push(("reference.csv".to_string(), r));
    }
    Ok(out)
}

fn reference_csv_opt(cfg: &ExperimentConfig) -> CliResult<Option<String>> {
    let Some(values) = reference_values(cfg)? else {
        return Ok(None);
    };
    let times = cfg.grid()?.times();
    let mut s = header("reference", cfg, &[]);
    s.push_str("t,value\n");
    for (i, t) in strided(&times, cfg.stride) {
        let _ = writeln!(s, "{},{}", num(t), num(values[i]));
    }
    Ok(Some(s))
}

/// `reference.csv` for the configured functional.
pub fn reference_csv(cfg: &ExperimentConfig) -> CliResult<Outputs> {
    match reference_csv_opt(cfg)? {
        Some(s) => Ok(vec![("reference.csv".to_string(), s)]),
        None => config_err(format!(
            "functional: no reference curve for {} in model {}",
            cfg.functional.name(),
            cfg.model.name()
        )),
    }
}

fn trajectory_record(cfg: &ExperimentConfig, index: u64) -> CliResult<TrajectoryRecord> {
    let grid = cfg.grid()?;
    let mut stream = NoiseStream::new(cfg.seed, index);
    let fs = [cfg.functional];
    let rec = match (build(cfg)?, cfg.functional) {
        (Built::Homodyne(m), Functional::Norm2) => m.linear_sse().simulate(&m.ground_state(), grid, &mut stream, &fs)?,
        (Built::Oscillator(m), Functional::Norm2) => {
            m.linear_sse().simulate(&m.initial_state(), grid, &mut stream, &fs)?
        }
        (Built::OuQubit(_), Functional::Norm2) => {
            return config_err("functional: norm2 needs a linear equation, which ouqubit does not have")
        }
        (Built::Homodyne(m), f) => {
            check_output(&m, f)?;
            simulate_trajectory(&m, cfg.scheme, &m.ground_state(), grid, &mut stream, &fs)?
        }
        (Built::Oscillator(m), f) => {
            check_output(&m, f)?;
            simulate_trajectory(&m, cfg.scheme, &m.initial_state(), grid, &mut stream, &fs)?
        }
        (Built::OuQubit(m), f) => {
            check_output(&m, f)?;
            simulate_trajectory(&m, cfg.scheme, &m.initial_state(), grid, &mut stream, &fs)?
        }
    };
    Ok(rec)
}

/// `trajectory_<r>.csv` for each requested realization index.
pub fn trajectory_csv(cfg: &ExperimentConfig, indices: &[u64]) -> CliResult<Outputs> {
    let mut out = Vec::with_capacity(indices.len());
    for &r in indices {
        let rec = trajectory_record(cfg, r)?;
        let values = rec.series(cfg.functional).expect("recorded functional");
        let b = rec.output_path.as_deref();
        let mut s = header("trajectory", cfg, &[("index", r.to_string())]);
        s.push_str(if b.is_some() { "t,value,B\n" } else { "t,value\n" });
        for (i, t) in strided(&rec.times(), cfg.stride) {
            match b {
                Some(b) => writeln!(s, "{},{},{}", num(t), num(values[i]), num(b[i])),
                None => writeln!(s, "{},{}", num(t), num(values[i])),
            }
            .expect("write to string");
        }
        out.push((format!("trajectory_{r}.csv"), s));
    }
    Ok(out)
}

/// One row of a step-size study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// Grid average of `|mean − reference|`.
    pub mean_abs_error: f64,
    /// Grid average of the standard error.
    pub mean_stderr: f64,
    pub accepted: usize,
}

/// Time-averaged deviation from the reference for each step size.
pub fn convergence(cfg: &ExperimentConfig, dt_list: &[f64]) -> CliResult<Vec<ConvergenceRow>> {
    if dt_list.len() < 2 {
        return config_err(format!("dt-list: need ≥ 2 step sizes, got {}", dt_list.len()));
    }
    let mut rows = Vec::with_capacity(dt_list.len());
    for &dt in dt_list {
        if !(dt > 0.0 && dt.is_finite()) {
            return config_err(format!("dt-list: step sizes must be positive, got {dt}"));
        }
        let Some(reference) = reference_values_with(cfg, dt)? else {
            return config_err(format!(
                "functional: no reference curve for {} in model {}",
                cfg.functional.name(),
                cfg.model.name()
            ));
        };
        let outcome = ensemble_outcome_with(cfg, dt, cfg.realizations)?;
        let est = outcome.estimate(cfg.functional)?;
        let n = est.mean.len() as f64;
        rows.push(ConvergenceRow {
            dt,
            mean_abs_error: est.mean.iter().zip(&reference).map(|(m, r)| (m - r).abs()).sum::<f64>() / n,
            mean_stderr: est.stderr.iter().sum::<f64>() / n,
            accepted: est.count,
        });
    }
    Ok(rows)
}

/// `convergence.csv` with one row per step size.
pub fn convergence_csv(cfg: &ExperimentConfig, dt_list: &[f64]) -> CliResult<Outputs> {
    let rows = convergence(cfg, dt_list)?;
    let list = dt_list.iter().map(|d| num(*d)).collect::<Vec<_>>().join(" ");
    let mut s = header("convergence", cfg, &[("dt-list", list)]);
    s.push_str("dt,mean_abs_error,stderr,R_accepted\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", num(r.dt), num(r.mean_abs_error), num(r.mean_stderr), r.accepted);
    }
    Ok(vec![("convergence.csv".to_string(), s)])
}

/// Parses a comma- or whitespace-separated list of step sizes.
pub fn parse_dt_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::Config(format!("dt-list: cannot parse `{p}`")))
        })
        .collect()
}

/// Writes `outputs` into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, outputs: &Outputs) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(outputs.len());
    for (name, text) in outputs {
        let p = dir.join(name);
        fs::write(&p, text)?;
        paths.push(p);
    }
    Ok(paths)
}
