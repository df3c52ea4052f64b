//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Deserializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Circle,
    Ellipse,
    Lens,
    Paperclip,
    Curvature,
    RegularPolygon,
    Rhomboid,
    PerturbedPolygon,
}

/// Every parameter any subcommand understands. Commands ignore the fields
/// they have no use for.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: Option<PathBuf>,
    pub spec: Option<PathBuf>,
    pub polygon: Option<PathBuf>,
    pub result: Option<PathBuf>,
    pub alpha: Option<f64>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub u: Option<Vec<f64>>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub p: Option<Vec<f64>>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub m: Option<Vec<usize>>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub sign: Option<SignChoice>,
    pub epsilon: Option<f64>,
    pub extent: Option<f64>,
    pub samples: Option<usize>,
    pub length: Option<f64>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub radius: Option<Vec<f64>>,
    pub shape: Option<Shape>,
    pub ratio: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub r: Option<f64>,
    pub angle: Option<f64>,
    pub side: Option<f64>,
    pub vertices: Option<usize>,
    pub amplitude: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn one_or_many<'de, D, T>(deserializer: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(Option::<OneOrMany<T>>::deserialize(deserializer)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Copy every flag that was given on the command line into the config.
macro_rules! overlay {
    ($cfg:expr, $args:expr, [$($field:ident),* $(,)?]) => {
        $(
            if let Some(v) = &$args.$field {
                $cfg.$field = Some(v.clone());
            }
        )*
    };
}
pub(crate) use overlay;

pub fn positive(name: &str, value: f64) -> Result<f64> {
    if !(value > 0.0 && value.is_finite()) {
        bail!("{name} must be positive and finite, got {value}");
    }
    Ok(value)
}
