//! Experiment configuration files.
//!
//! A config is a TOML document. Every table and key is optional; missing parts
//! fall back to the spin-1/2 defaults (state `z+`, contexts `z` then `x`).
//!
//! ```toml
//! [state]
//! preset = "z+"                  # or amplitudes = ["0.6", "0.8i"], or polar/azimuth
//!
//! [[context]]
//! name = "z"
//! direction = "z"                # or polar/azimuth, or vectors = [["1", "0"], ["0", "1"]]
//!
//! [[universe]]
//! id = "X"
//! outcomes = ["a", "b", "c"]
//!
//! [run]
//! seed = 0xC0FFEE
//! tol = 1e-9
//! trials = 100000
//! ```

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};

use nogo_core::events::Universe;
use nogo_core::hidden::{Context, HiddenEnsemble, HiddenModel, HiddenState, TransitionKernel};
use nogo_core::hilbert::{spin_direction_basis, spin_state, MeasurementBasis, StateVector};
use nogo_core::numeric::parse_complex;
use nogo_core::random::DEFAULT_SEED;
use nogo_core::Complex64;
use serde::Deserialize;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SAMPLES: usize = 300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid config: {0}")]
    Semantic(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

fn semantic(msg: impl Into<String>) -> ConfigError {
    ConfigError::Semantic(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Amp {
    Num(f64),
    Text(String),
}

impl Amp {
    fn value(&self) -> Result<Complex64, ConfigError> {
        match self {
            Amp::Num(x) => Ok(Complex64::new(*x, 0.0)),
            Amp::Text(t) => parse_complex(t).ok_or_else(|| semantic(format!("cannot read amplitude {t:?}"))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    state: Option<RawState>,
    #[serde(default, rename = "context")]
    contexts: Vec<RawContext>,
    #[serde(default, rename = "universe")]
    universes: Vec<RawUniverse>,
    #[serde(default)]
    run: RawRun,
    model: Option<RawModel>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    preset: Option<String>,
    amplitudes: Option<Vec<Amp>>,
    polar: Option<f64>,
    azimuth: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    name: String,
    direction: Option<String>,
    polar: Option<f64>,
    azimuth: Option<f64>,
    vectors: Option<Vec<Vec<Amp>>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUniverse {
    id: String,
    outcomes: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seed: Option<u64>,
    tol: Option<f64>,
    trials: Option<u64>,
    target: Option<String>,
    interposed: Option<String>,
    outcome: Option<usize>,
    coerce: Option<bool>,
    family: Option<PathBuf>,
    forbid_orthogonal: Option<bool>,
    samples: Option<usize>,
    dims: Option<[usize; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    weights: Vec<Vec<f64>>,
    kernel_ab: Vec<Vec<f64>>,
    kernel_ba: Vec<Vec<f64>>,
}

/// A measurement context: a basis with a short name used in report labels.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedBasis {
    pub name: String,
    pub basis: MeasurementBasis,
}

impl NamedBasis {
    /// `z+` for spin labels, `e:0` for generic ones.
    pub fn outcome_label(&self, index: usize) -> String {
        let label = &self.basis.labels()[index];
        if label.starts_with(['+', '-']) {
            format!("{}{label}", self.name)
        } else {
            format!("{}:{label}", self.name)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub seed: u64,
    pub tol: f64,
    pub trials: u64,
    pub target: Option<String>,
    pub interposed: Option<String>,
    pub outcome: usize,
    pub coerce: bool,
    pub family: Option<PathBuf>,
    pub forbid_orthogonal: bool,
    pub samples: usize,
    pub dims: (usize, usize),
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            trials: DEFAULT_TRIALS,
            target: None,
            interposed: None,
            outcome: 0,
            coerce: true,
            family: None,
            forbid_orthogonal: false,
            samples: DEFAULT_SAMPLES,
            dims: (2, 4),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub state: StateVector,
    pub state_label: String,
    pub contexts: Vec<NamedBasis>,
    pub universes: Vec<Universe>,
    pub run: RunParams,
    /// A saved hidden-variable model over the first two contexts.
    pub model: Option<HiddenModel>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        parse_experiment_config("").expect("the empty config is valid")
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        let mut cfg = parse_experiment_config(&text)?;
        // family paths are relative to the config file
        if let (Some(family), Some(dir)) = (&cfg.run.family, path.parent()) {
            if family.is_relative() {
                cfg.run.family = Some(dir.join(family));
            }
        }
        Ok(cfg)
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ConfigError::Syntax { line, column, message: e.message().trim().to_string() }
    })?;

    let (state, state_label) = match &raw.state {
        Some(s) => build_state(s)?,
        None => (spin_state(0.0, 0.0), "z+".to_string()),
    };

    let contexts = if raw.contexts.is_empty() {
        if state.dim() != 2 {
            return Err(semantic(format!("no contexts given for a dimension {} state", state.dim())));
        }
        vec![
            NamedBasis { name: "z".into(), basis: spin_direction_basis(0.0, 0.0) },
            NamedBasis { name: "x".into(), basis: spin_direction_basis(FRAC_PI_2, 0.0) },
        ]
    } else {
        raw.contexts.iter().map(build_context).collect::<Result<Vec<_>, _>>()?
    };
    for (k, c) in contexts.iter().enumerate() {
        if c.basis.dim() != state.dim() {
            return Err(semantic(format!(
                "context '{}' has dimension {} but the state has dimension {}",
                c.name,
                c.basis.dim(),
                state.dim()
            )));
        }
        if contexts[..k].iter().any(|o| o.name == c.name) {
            return Err(semantic(format!("context name '{}' is used twice", c.name)));
        }
    }

    let universes = raw
        .universes
        .iter()
        .map(|u| Universe::new(u.id.clone(), u.outcomes.clone()).map_err(|e| semantic(format!("universe '{}': {e}", u.id))))
        .collect::<Result<Vec<_>, _>>()?;

    let defaults = RunParams::default();
    let r = &raw.run;
    let run = RunParams {
        seed: r.seed.unwrap_or(defaults.seed),
        tol: r.tol.unwrap_or(defaults.tol),
        trials: r.trials.unwrap_or(defaults.trials),
        target: r.target.clone(),
        interposed: r.interposed.clone(),
        outcome: r.outcome.unwrap_or(defaults.outcome),
        coerce: r.coerce.unwrap_or(defaults.coerce),
        family: r.family.clone(),
        forbid_orthogonal: r.forbid_orthogonal.unwrap_or(defaults.forbid_orthogonal),
        samples: r.samples.unwrap_or(defaults.samples),
        dims: r.dims.map_or(defaults.dims, |[lo, hi]| (lo, hi)),
    };
    if !(run.tol > 0.0 && run.tol.is_finite()) {
        return Err(semantic("tol must be positive"));
    }
    if run.trials == 0 {
        return Err(semantic("trials must be positive"));
    }
    if run.dims.0 < 1 || run.dims.0 > run.dims.1 || run.dims.1 > nogo_core::hilbert::MAX_DIM {
        return Err(semantic(format!("dims must satisfy 1 <= lo <= hi <= {}", nogo_core::hilbert::MAX_DIM)));
    }

    let model = match &raw.model {
        Some(m) => Some(build_model(m, &contexts)?),
        None => None,
    };

    Ok(ExperimentConfig { state, state_label, contexts, universes, run, model })
}

fn preset_direction(name: &str) -> Option<(f64, f64)> {
    match name {
        "z" => Some((0.0, 0.0)),
        "x" => Some((FRAC_PI_2, 0.0)),
        "y" => Some((FRAC_PI_2, FRAC_PI_2)),
        _ => None,
    }
}

fn build_state(s: &RawState) -> Result<(StateVector, String), ConfigError> {
    let given = [s.preset.is_some(), s.amplitudes.is_some(), s.polar.is_some() || s.azimuth.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(semantic("state needs exactly one of preset, amplitudes, or polar/azimuth"));
    }
    if let Some(p) = &s.preset {
        let (axis, sign) = p.split_at(p.len().saturating_sub(1));
        let (polar, azimuth) = preset_direction(axis)
            .filter(|_| sign == "+" || sign == "-")
            .ok_or_else(|| semantic(format!("unknown state preset {p:?}; use z+, z-, x+, x-, y+ or y-")))?;
        let state = if sign == "+" {
            spin_state(polar, azimuth)
        } else {
            spin_down(polar, azimuth)
        };
        return Ok((state, p.clone()));
    }
    if let Some(amps) = &s.amplitudes {
        let values = amps.iter().map(Amp::value).collect::<Result<Vec<_>, _>>()?;
        let norm_sqr: f64 = values.iter().map(|z| z.norm_sqr()).sum();
        let state = StateVector::new(values).map_err(|e| match e {
            nogo_core::Error::NotNormalized(_) => semantic(format!("state not normalized (squared norm {norm_sqr})")),
            other => semantic(format!("state: {other}")),
        })?;
        return Ok((state, "amplitudes".into()));
    }
    let (polar, azimuth) = (s.polar.unwrap_or(0.0), s.azimuth.unwrap_or(0.0));
    Ok((spin_state(polar, azimuth), format!("direction (polar {polar}, azimuth {azimuth})")))
}

// the "-" outcome vector of a spin direction
fn spin_down(polar: f64, azimuth: f64) -> StateVector {
    let (s, c) = (polar / 2.0).sin_cos();
    StateVector::new(vec![Complex64::new(s, 0.0), -Complex64::from_polar(c, azimuth)])
        .expect("unit vector by construction")
}

fn build_context(c: &RawContext) -> Result<NamedBasis, ConfigError> {
    let given = [c.direction.is_some(), c.vectors.is_some(), c.polar.is_some() || c.azimuth.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(semantic(format!("context '{}' needs exactly one of direction, vectors, or polar/azimuth", c.name)));
    }
    if c.labels.is_some() && c.vectors.is_none() {
        return Err(semantic(format!("context '{}': labels are only allowed with vectors", c.name)));
    }
    let basis = if let Some(d) = &c.direction {
        let (polar, azimuth) = preset_direction(d)
            .ok_or_else(|| semantic(format!("context '{}': unknown direction {d:?}; use x, y or z", c.name)))?;
        spin_direction_basis(polar, azimuth)
    } else if let Some(rows) = &c.vectors {
        let vectors = rows
            .iter()
            .map(|r| r.iter().map(Amp::value).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let labels = match &c.labels {
            Some(l) => l.clone(),
            None => (0..vectors.len()).map(|i| i.to_string()).collect(),
        };
        MeasurementBasis::from_vectors(&vectors, labels)
            .map_err(|e| semantic(format!("context '{}' is not an orthonormal basis: {e}", c.name)))?
    } else {
        spin_direction_basis(c.polar.unwrap_or(0.0), c.azimuth.unwrap_or(0.0))
    };
    Ok(NamedBasis { name: c.name.clone(), basis })
}

fn build_model(m: &RawModel, contexts: &[NamedBasis]) -> Result<HiddenModel, ConfigError> {
    let [a, b] = match contexts {
        [a, b, ..] => [a, b],
        _ => return Err(semantic("a model needs two contexts")),
    };
    let (na, nb) = (a.basis.len(), b.basis.len());
    let shaped = |rows: &Vec<Vec<f64>>, r: usize, c: usize| rows.len() == r && rows.iter().all(|x| x.len() == c);
    if !shaped(&m.weights, na, nb) || !shaped(&m.kernel_ab, na, nb) || !shaped(&m.kernel_ba, nb, na) {
        return Err(semantic(format!("model tables must be weights {na}x{nb}, kernel_ab {na}x{nb}, kernel_ba {nb}x{na}")));
    }
    let members = m
        .weights
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &w)| (HiddenState::new(i, j), w)))
        .collect();
    let ensemble = HiddenEnsemble::new(members, na, nb).map_err(|e| semantic(format!("model weights: {e}")))?;
    let forward = TransitionKernel::new(Context::A, Context::B, m.kernel_ab.clone())
        .map_err(|e| semantic(format!("kernel_ab: {e}")))?;
    let backward = TransitionKernel::new(Context::B, Context::A, m.kernel_ba.clone())
        .map_err(|e| semantic(format!("kernel_ba: {e}")))?;
    HiddenModel::from_parts(a.basis.clone(), b.basis.clone(), ensemble, forward, backward)
        .map_err(|e| semantic(format!("model: {e}")))
}

impl fmt::Display for NamedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} outcomes, dim {})", self.name, self.basis.len(), self.basis.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_spin_defaults() {
        let cfg = parse_experiment_config("").unwrap();
        assert_eq!(cfg.state_label, "z+");
        assert_eq!(cfg.contexts.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["z", "x"]);
        assert_eq!(cfg.run.seed, 0xC0FFEE);
        assert_eq!(cfg.run.tol, 1e-9);
        assert_eq!(cfg.run.trials, 100_000);
    }

    #[test]
    fn preset_with_x_context() {
        let cfg = parse_experiment_config("[state]\npreset = \"z+\"\n[[context]]\nname = \"x\"\ndirection = \"x\"\n").unwrap();
        assert_eq!(cfg.contexts.len(), 1);
        assert_eq!(cfg.state.dim(), 2);
    }

    #[test]
    fn normalized_amplitudes_accepted() {
        let cfg = parse_experiment_config("[state]\namplitudes = [0.6, 0.8]\n").unwrap();
        assert!((cfg.state.amplitudes()[1].re - 0.8).abs() < 1e-15);
        parse_experiment_config("[state]\namplitudes = [\"0.6\", \"0.8i\"]\n").unwrap();
    }

    #[test]
    fn unnormalized_state_is_semantic() {
        let err = parse_experiment_config("[state]\namplitudes = [1, 1]\n").unwrap_err();
        assert!(matches!(&err, ConfigError::Semantic(m) if m.starts_with("state not normalized")), "{err}");
    }

    #[test]
    fn unknown_key_reports_position() {
        let err = parse_experiment_config("[run]\nseed = 1\ncolour = 2\n").unwrap_err();
        let ConfigError::Syntax { line, column, message } = err else { panic!("{err:?}") };
        assert_eq!((line, column), (3, 1));
        assert!(message.contains("colour"), "{message}");
    }

    #[test]
    fn broken_toml_reports_position() {
        let err = parse_experiment_config("[state]\npreset = \"z+\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn nonorthogonal_context_is_semantic() {
        let text = "[[context]]\nname = \"bad\"\nvectors = [[1, 0], [1, 1]]\n";
        let err = parse_experiment_config(text).unwrap_err();
        assert!(matches!(&err, ConfigError::Semantic(m) if m.contains("not an orthonormal basis")), "{err}");
    }

    #[test]
    fn down_presets_are_orthogonal_to_up() {
        for axis in ["x", "y", "z"] {
            let up = parse_experiment_config(&format!("[state]\npreset = \"{axis}+\"\n")).unwrap().state;
            let down = parse_experiment_config(&format!("[state]\npreset = \"{axis}-\"\n")).unwrap().state;
            assert!(up.inner(&down).unwrap().norm() < 1e-15);
        }
    }
}
