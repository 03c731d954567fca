//! Flat `key = value` experiment configuration.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Lists are comma separated. Numbers are exact integers, decimals (`0.3`) or
//! fractions (`7/2`).
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `model` | `torus-1-1` or `genus-2` | required |
//! | `pipeline` | must match the subcommand if present | |
//! | `norm` | `torus-diamond`, `torus-square`, `dt-L1`, `dt-weighted`, `hyperbolic-length` | required except for `validate`, `nonsimple` |
//! | `weights` | six dt-weighted weights `u1,u2,u3,v1,v2,v3` | |
//! | `traces` | torus traces `x,y,z`, or `x,y` to complete `z` | `3,3,3` |
//! | `fn_lengths`, `fn_twists` | genus-2 Fenchel-Nielsen data | `1,1,1` and `0,0,0` |
//! | `norm2`, `weights2`, `traces2`, `fn_lengths2`, `fn_twists2` | second length for `ratio` | |
//! | `schedule` | strictly increasing positive `L` values | required except for `validate` |
//! | `type` | type key selecting the counted series | total count |
//! | `seed`, `simple_seed` | orbit seeds for `nonsimple` | `simple_seed = a` |
//! | `margin` | orbit exploration margin | `0.3` |
//! | `epsilon` | tail bound | `0.3` |
//! | `point_cap`, `node_cap` | budgets | `10000000`, `1000000` |
//! | `threads` | worker threads | all cores |
//! | `out` | output directory | `out` |

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number, or 0 when the problem is not tied to a line.
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config field `{}`: {}", self.field, self.message)
        } else {
            write!(f, "config line {}, field `{}`: {}", self.line, self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Enumerate,
    SimpleCount,
    Fit,
    Ratio,
    Frequency,
    Tail,
    NonsimpleCount,
    Validate,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Enumerate => "enumerate",
            Pipeline::SimpleCount => "simple-count",
            Pipeline::Fit => "fit",
            Pipeline::Ratio => "ratio",
            Pipeline::Frequency => "frequency",
            Pipeline::Tail => "tail",
            Pipeline::NonsimpleCount => "nonsimple-count",
            Pipeline::Validate => "validate",
        }
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let all = [
            Pipeline::Enumerate,
            Pipeline::SimpleCount,
            Pipeline::Fit,
            Pipeline::Ratio,
            Pipeline::Frequency,
            Pipeline::Tail,
            Pipeline::NonsimpleCount,
            Pipeline::Validate,
        ];
        all.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown pipeline `{s}`"))
    }
}

/// A length functional as written in the config, before it is bound to a model.
#[derive(Debug, Clone, PartialEq)]
pub enum NormConfig {
    TorusDiamond,
    TorusSquare,
    DtL1,
    DtWeighted { u: [Ratio<i64>; 3], v: [Ratio<i64>; 3] },
    Hyperbolic(Structure),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Torus { x: f64, y: f64, z: Option<f64> },
    Genus2 { lengths: [f64; 3], twists: [f64; 3] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: String,
    pub pipeline: Option<Pipeline>,
    pub norm: Option<NormConfig>,
    pub norm2: Option<NormConfig>,
    /// Structure used by orbit counting and validation.
    pub structure: Structure,
    pub schedule: Vec<f64>,
    pub type_key: Option<String>,
    pub seed: Option<String>,
    pub simple_seed: String,
    pub margin: f64,
    pub epsilon: f64,
    pub point_cap: u64,
    pub node_cap: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    /// Every assignment as written, for the summary echo.
    pub raw: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "model",
    "pipeline",
    "norm",
    "weights",
    "traces",
    "fn_lengths",
    "fn_twists",
    "norm2",
    "weights2",
    "traces2",
    "fn_lengths2",
    "fn_twists2",
    "schedule",
    "type",
    "seed",
    "simple_seed",
    "margin",
    "epsilon",
    "point_cap",
    "node_cap",
    "threads",
    "out",
];

/// Exact rational from `12`, `-0.25` or `7/2`.
pub fn parse_exact(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not an integer, decimal or fraction");
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs().checked_mul(den).and_then(|w| w.checked_add(num)).ok_or_else(bad)?;
        return Ok(Ratio::new(if neg { -mag } else { mag }, den));
    }
    let r = Ratio::<i64>::from_str(s).map_err(|_| bad())?;
    Ok(r)
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let line = self.map.get(key).map_or(0, |(l, _)| *l);
        ConfigError { line, field: key.to_string(), message: message.into() }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn list(&self, key: &str) -> Result<Option<Vec<Ratio<i64>>>, ConfigError> {
        let Some(v) = self.get(key) else { return Ok(None) };
        v.split(',').map(|x| parse_exact(x).map_err(|m| self.err(key, m))).collect::<Result<Vec<_>, _>>().map(Some)
    }

    fn fixed<const N: usize>(&self, key: &str) -> Result<Option<[Ratio<i64>; N]>, ConfigError> {
        match self.list(key)? {
            None => Ok(None),
            Some(v) => {
                let n = v.len();
                v.try_into().map(Some).map_err(|_| self.err(key, format!("expected {N} values, got {n}")))
            }
        }
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_exact(v).map(to_f64).map_err(|m| self.err(key, m)),
        }
    }

    fn count(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| self.err(key, format!("`{v}` is not a nonnegative integer"))),
        }
    }

    fn structure(&self, suffix: &str, model: &str) -> Result<Structure, ConfigError> {
        let (tk, lk, wk) = (format!("traces{suffix}"), format!("fn_lengths{suffix}"), format!("fn_twists{suffix}"));
        if model == "genus-2" {
            if self.get(&tk).is_some() {
                return Err(self.err(&tk, "torus traces given for the genus-2 model"));
            }
            let one = Ratio::from_integer(1);
            let lengths = self.fixed::<3>(&lk)?.unwrap_or([one; 3]).map(to_f64);
            let twists = self.fixed::<3>(&wk)?.unwrap_or([Ratio::from_integer(0); 3]).map(to_f64);
            Ok(Structure::Genus2 { lengths, twists })
        } else {
            for k in [&lk, &wk] {
                if self.get(k).is_some() {
                    return Err(self.err(k, "Fenchel-Nielsen data given for the torus model"));
                }
            }
            match self.list(&tk)? {
                None => Ok(Structure::Torus { x: 3.0, y: 3.0, z: Some(3.0) }),
                Some(v) if v.len() == 2 => Ok(Structure::Torus { x: to_f64(v[0]), y: to_f64(v[1]), z: None }),
                Some(v) if v.len() == 3 => {
                    Ok(Structure::Torus { x: to_f64(v[0]), y: to_f64(v[1]), z: Some(to_f64(v[2])) })
                }
                Some(v) => Err(self.err(&tk, format!("expected 2 or 3 traces, got {}", v.len()))),
            }
        }
    }

    fn norm(&self, suffix: &str, model: &str) -> Result<Option<NormConfig>, ConfigError> {
        let key = format!("norm{suffix}");
        let Some(name) = self.get(&key) else { return Ok(None) };
        let wk = format!("weights{suffix}");
        let norm = match name {
            "torus-diamond" => NormConfig::TorusDiamond,
            "torus-square" => NormConfig::TorusSquare,
            "dt-L1" => NormConfig::DtL1,
            "dt-weighted" => {
                let w = self.fixed::<6>(&wk)?.ok_or_else(|| self.err(&key, format!("dt-weighted needs `{wk}`")))?;
                if let Some(bad) = w.iter().find(|x| **x <= Ratio::from_integer(0)) {
                    return Err(self.err(&wk, format!("weights must be positive, got {bad}")));
                }
                NormConfig::DtWeighted { u: [w[0], w[1], w[2]], v: [w[3], w[4], w[5]] }
            }
            "hyperbolic-length" => NormConfig::Hyperbolic(self.structure(suffix, model)?),
            other => return Err(self.err(&key, format!("unknown norm `{other}`"))),
        };
        let torus_norm = matches!(norm, NormConfig::TorusDiamond | NormConfig::TorusSquare);
        let dt_norm = matches!(norm, NormConfig::DtL1 | NormConfig::DtWeighted { .. });
        if (model == "genus-2" && torus_norm) || (model == "torus-1-1" && dt_norm) {
            return Err(self.err(&key, format!("norm `{name}` does not apply to model `{model}`")));
        }
        Ok(Some(norm))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(ConfigError { line, field: content.to_string(), message: "expected `key = value`".into() });
            };
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(ConfigError { line, field: k.to_string(), message: "unknown key".into() });
            }
            if v.is_empty() {
                return Err(ConfigError { line, field: k.to_string(), message: "empty value".into() });
            }
            if let Some((first, _)) = map.insert(k.to_string(), (line, v.to_string())) {
                return Err(ConfigError {
                    line,
                    field: k.to_string(),
                    message: format!("duplicate key (first on line {first})"),
                });
            }
        }
        let e = Entries { map };

        let model = e.get("model").ok_or_else(|| e.err("model", "missing required key"))?.to_string();
        if model != "torus-1-1" && model != "genus-2" {
            return Err(e.err("model", format!("unknown model id `{model}`")));
        }
        let pipeline = match e.get("pipeline") {
            None => None,
            Some(p) => Some(p.parse::<Pipeline>().map_err(|m| e.err("pipeline", m))?),
        };

        let schedule = match e.list("schedule")? {
            None => Vec::new(),
            Some(v) => v.into_iter().map(to_f64).collect(),
        };
        if schedule.iter().any(|l| *l <= 0.0) {
            return Err(e.err("schedule", "L values must be positive"));
        }
        if schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(e.err("schedule", "L values must be strictly increasing"));
        }
        let margin = e.number("margin", 0.3)?;
        if margin < 0.0 {
            return Err(e.err("margin", "margin must be nonnegative"));
        }
        let epsilon = e.number("epsilon", 0.3)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(e.err("epsilon", "epsilon must lie strictly between 0 and 1"));
        }
        let threads = match e.get("threads") {
            None => None,
            Some(_) => match e.count("threads", 0)? {
                0 => return Err(e.err("threads", "thread count must be positive")),
                n => Some(n as usize),
            },
        };

        Ok(ExperimentConfig {
            norm: e.norm("", &model)?,
            norm2: e.norm("2", &model)?,
            structure: e.structure("", &model)?,
            pipeline,
            schedule,
            type_key: e.get("type").map(str::to_string),
            seed: e.get("seed").map(str::to_string),
            simple_seed: e.get("simple_seed").unwrap_or("a").to_string(),
            margin,
            epsilon,
            point_cap: e.count("point_cap", 10_000_000)?,
            node_cap: e.count("node_cap", 1_000_000)?,
            threads,
            out: e.get("out").map(PathBuf::from),
            raw: e.map.into_iter().map(|(k, (_, v))| (k, v)).collect(),
            model,
        })
    }

    /// Diagnostic for a key the selected pipeline cannot do without.
    pub fn missing(&self, field: &str, why: &str) -> ConfigError {
        ConfigError { line: 0, field: field.to_string(), message: format!("required {why}") }
    }
}
