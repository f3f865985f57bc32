//! Flat key-value run configuration with named sections.
//!
//! The format is a small TOML subset: `[section]` headers, `key = value`
//! lines, `#` comments. Values are numbers, booleans, quoted or bare strings,
//! or flat arrays `[a, b, c]`. Unknown keys are rejected by name so typos
//! surface immediately; units are radians and dimensionless lengths
//! throughout. No environment variables are consulted.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use boojum_core::params::ModelParams;

#[derive(Clone, Debug, PartialEq)]
pub enum SeedKind {
    Vortex,
    Boojum,
    Random,
    File(PathBuf),
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedKind::Vortex => write!(f, "vortex"),
            SeedKind::Boojum => write!(f, "boojum"),
            SeedKind::Random => write!(f, "random"),
            SeedKind::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl SeedKind {
    pub fn parse(text: &str) -> Result<SeedKind> {
        Ok(match text {
            "vortex" => SeedKind::Vortex,
            "boojum" => SeedKind::Boojum,
            "random" => SeedKind::Random,
            other => {
                if let Some(path) = other.strip_prefix("file:") {
                    SeedKind::File(PathBuf::from(path))
                } else {
                    bail!("unknown seed kind '{other}' (vortex | boojum | random | file:<path>)");
                }
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub epsilon: f64,
    pub s: f64,
    pub alpha: f64,
    pub degree: i32,
    /// Optional non-equivariant boundary lifting, one gamma sample per line
    /// (n_theta lines). When absent the equivariant lifting is used.
    pub gamma_file: Option<PathBuf>,
    pub n_r: usize,
    pub n_theta: usize,
    pub seed: SeedKind,
    pub tol: f64,
    pub max_steps: u64,
    /// Optional cap on the flow time; converts to a step cap at run time.
    pub max_time: Option<f64>,
    pub trace_every: u64,
    pub rng_seed: u64,
    pub amplitude: f64,
    /// Optional explicit boojum angles (alternating light/heavy).
    pub boojum_angles: Option<Vec<f64>>,
    /// Optional explicit vortex positions as flat [x1, y1, x2, y2, ...].
    pub vortex_positions: Option<Vec<f64>>,
    /// Degrees matching `vortex_positions`.
    pub vortex_degrees: Option<Vec<i32>>,
    pub s_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub workers: Option<usize>,
    pub out_dir: PathBuf,
    pub image_size: usize,
    pub checkpoint_every: u64,
}

impl Config {
    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.epsilon, self.s, self.alpha, self.degree)?)
    }
}

#[derive(Clone, Debug)]
enum Value {
    Number(f64),
    Text(String),
    List(Vec<f64>),
}

fn parse_value(raw: &str) -> Result<Value> {
    let raw = raw.trim();
    if raw.is_empty() {
        bail!("empty value");
    }
    if let Some(inner) = raw.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| anyhow!("unterminated array"))?;
        let mut items = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            items.push(
                part.parse::<f64>()
                    .with_context(|| format!("array item '{part}' is not a number"))?,
            );
        }
        return Ok(Value::List(items));
    }
    if let Some(stripped) = raw.strip_prefix('"') {
        let inner = stripped
            .strip_suffix('"')
            .ok_or_else(|| anyhow!("unterminated string"))?;
        return Ok(Value::Text(inner.to_string()));
    }
    if let Ok(x) = raw.parse::<f64>() {
        return Ok(Value::Number(x));
    }
    Ok(Value::Text(raw.to_string()))
}

/// Raw section.key -> value map.
fn parse_table(text: &str) -> Result<BTreeMap<String, Value>> {
    let mut table = BTreeMap::new();
    let mut section = String::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(k) if !line[..k].contains('"') => &line[..k],
            _ => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| anyhow!("line {}: unterminated section header", lineno + 1))?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected 'key = value', got '{line}'", lineno + 1))?;
        let full = if section.is_empty() {
            key.trim().to_string()
        } else {
            format!("{section}.{}", key.trim())
        };
        let value =
            parse_value(value).with_context(|| format!("line {}: key '{full}'", lineno + 1))?;
        if table.insert(full.clone(), value).is_some() {
            bail!("line {}: duplicate key '{full}'", lineno + 1);
        }
    }
    Ok(table)
}

struct Reader {
    table: BTreeMap<String, Value>,
    used: Vec<String>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.used.push(key.to_string());
        self.table.remove(key)
    }

    fn require_number(&mut self, key: &str) -> Result<f64> {
        match self.take(key) {
            Some(Value::Number(x)) => Ok(x),
            Some(_) => bail!("key '{key}' must be a number"),
            None => bail!("missing required key '{key}'"),
        }
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            Some(Value::Number(x)) => Ok(x),
            Some(_) => bail!("key '{key}' must be a number"),
            None => Ok(default),
        }
    }

    fn text_or(&mut self, key: &str, default: &str) -> Result<String> {
        match self.take(key) {
            Some(Value::Text(t)) => Ok(t),
            Some(Value::Number(x)) => Ok(x.to_string()),
            Some(_) => bail!("key '{key}' must be a string"),
            None => Ok(default.to_string()),
        }
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            Some(Value::List(v)) => Ok(Some(v)),
            Some(Value::Number(x)) => Ok(Some(vec![x])),
            Some(_) => bail!("key '{key}' must be an array"),
            None => Ok(None),
        }
    }
}

/// Parse a configuration file; every key is validated by name.
pub fn parse_config(text: &str) -> Result<Config> {
    let table = parse_table(text)?;
    let mut r = Reader {
        table,
        used: Vec::new(),
    };

    let epsilon = r.require_number("model.epsilon")?;
    let s = r.require_number("model.s")?;
    let alpha = r.require_number("model.alpha")?;
    let degree = r.require_number("model.degree")? as i32;
    let gamma_file = match r.take("model.gamma_file") {
        Some(Value::Text(t)) => Some(PathBuf::from(t)),
        Some(_) => bail!("key 'model.gamma_file' must be a path string"),
        None => None,
    };
    let n_r = r.require_number("grid.n_r")? as usize;
    let n_theta = r.require_number("grid.n_theta")? as usize;

    let seed = SeedKind::parse(&r.text_or("run.seed", "vortex")?)?;
    let tol = r.number_or("run.tol", 1e-6)?;
    let max_steps = r.number_or("run.max_steps", 2e6)? as u64;
    let max_time = r.take("run.max_time").map(|v| match v {
        Value::Number(x) => Ok(x),
        _ => bail!("key 'run.max_time' must be a number"),
    });
    let max_time = match max_time {
        Some(v) => Some(v?),
        None => None,
    };
    let trace_every = r.number_or("run.trace_every", 50.0)? as u64;
    let rng_seed = r.number_or("run.rng_seed", 1.0)? as u64;
    let amplitude = r.number_or("run.amplitude", 1.0)?;
    let boojum_angles = r.list("run.boojum_angles")?;
    let vortex_positions = r.list("run.vortex_positions")?;
    let vortex_degrees = r
        .list("run.vortex_degrees")?
        .map(|v| v.into_iter().map(|x| x as i32).collect());

    let s_values = r.list("sweep.s_values")?.unwrap_or_default();
    let alpha_values = r.list("sweep.alpha_values")?.unwrap_or_default();
    let workers = match r.take("sweep.workers") {
        Some(Value::Number(x)) if x >= 1.0 => Some(x as usize),
        Some(_) => bail!("key 'sweep.workers' must be a positive number"),
        None => None,
    };

    let out_dir = PathBuf::from(r.text_or("output.dir", "runs/out")?);
    let image_size = r.number_or("output.image_size", 512.0)? as usize;
    let checkpoint_every = r.number_or("output.checkpoint_every", 0.0)? as u64;

    if let Some(stray) = r.table.keys().next() {
        bail!("unknown key '{stray}'");
    }

    let config = Config {
        epsilon,
        s,
        alpha,
        degree,
        gamma_file,
        n_r,
        n_theta,
        seed,
        tol,
        max_steps,
        max_time,
        trace_every,
        rng_seed,
        amplitude,
        boojum_angles,
        vortex_positions,
        vortex_degrees,
        s_values,
        alpha_values,
        workers,
        out_dir,
        image_size,
        checkpoint_every,
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &Config) -> Result<()> {
    config.params()?;
    if let Some(angles) = &config.boojum_angles {
        if angles.iter().any(|a| !a.is_finite() || a.abs() > 2.0 * TAU) {
            bail!("key 'run.boojum_angles' has angles outside a sane range");
        }
    }
    if config.vortex_positions.as_ref().map(|v| v.len() % 2 != 0) == Some(true) {
        bail!("key 'run.vortex_positions' must hold (x, y) pairs");
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing config {}", path.display()))
}
