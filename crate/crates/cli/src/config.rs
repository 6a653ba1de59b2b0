use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use serde::{Deserialize, Serialize};

use floerlab::closed_open::Basepoint;
use floerlab::geometry::build_link_model;
use floerlab::{Rational, RationalModel};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => bail!("unknown format {other:?} (expected json or csv)"),
        }
    }
}

/// On-disk layout of a config file. Every field but `schema` is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: Option<u32>,
    pub genus: Option<i64>,
    pub k: Option<i64>,
    pub epsilons: Option<Vec<String>>,
    pub profile: Option<String>,
    pub window: Option<usize>,
    pub basepoints: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub plots: Option<bool>,
    pub seed: Option<u64>,
    pub rank_degrees: Option<Vec<usize>>,
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub genus: Option<i64>,
    pub k: Option<i64>,
    pub epsilons: Vec<String>,
    pub window: Option<usize>,
    pub basepoints: Vec<String>,
    pub out: Option<PathBuf>,
    pub formats: Option<String>,
    pub no_plots: bool,
    pub seed: Option<u64>,
}

/// Validated run parameters.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub schema: u32,
    pub genus: i64,
    pub k: i64,
    #[serde(serialize_with = "ser_rationals")]
    pub epsilons: Vec<Rational>,
    pub profile: String,
    pub window: usize,
    /// Empty means `y_+` only.
    #[serde(serialize_with = "ser_basepoints")]
    pub basepoints: Vec<Basepoint>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub plots: bool,
    pub seed: u64,
    pub rank_degrees: Vec<usize>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_basepoints<S: serde::Serializer>(v: &[Basepoint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Basepoint::label))
}

impl RunConfig {
    pub fn load(path: Option<&Path>, o: &Overrides) -> Result<RunConfig> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                let file: ConfigFile = toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?;
                match file.schema {
                    Some(SCHEMA) => {}
                    Some(v) => bail!("unsupported config schema {v} (this build reads schema {SCHEMA})"),
                    None => bail!("config {} lacks the top-level `schema = {SCHEMA}`", p.display()),
                }
                file
            }
            None => ConfigFile::default(),
        };
        let eps_text = if o.epsilons.is_empty() {
            file.epsilons.unwrap_or_else(|| vec!["1/10".into()])
        } else {
            o.epsilons.clone()
        };
        let epsilons = eps_text
            .iter()
            .map(|s| {
                let e: Rational = s.trim().parse().map_err(|_| anyhow::anyhow!("bad epsilon {s:?}"))?;
                if e <= Rational::from(0) || e >= Rational::from(1) {
                    bail!("epsilon must lie in (0, 1), got {s}");
                }
                Ok(e)
            })
            .collect::<Result<Vec<_>>>()?;
        let bp_text = if o.basepoints.is_empty() { file.basepoints.unwrap_or_default() } else { o.basepoints.clone() };
        let formats = match &o.formats {
            Some(s) => s.split(',').map(Format::parse).collect::<Result<Vec<_>>>()?,
            None => match file.formats {
                Some(v) => v.iter().map(|s| Format::parse(s)).collect::<Result<Vec<_>>>()?,
                None => vec![Format::Json, Format::Csv],
            },
        };
        let cfg = RunConfig {
            schema: SCHEMA,
            genus: o.genus.or(file.genus).unwrap_or(0),
            k: o.k.or(file.k).unwrap_or(2),
            epsilons,
            profile: file.profile.unwrap_or_else(|| "standard".into()),
            window: o.window.or(file.window).unwrap_or(2),
            basepoints: Vec::new(),
            out: o.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("floerlab-out")),
            formats,
            plots: !o.no_plots && file.plots.unwrap_or(true),
            seed: o.seed.or(file.seed).unwrap_or(1),
            rank_degrees: file.rank_degrees.unwrap_or_else(|| vec![1, 2, 3]),
        };
        let model = cfg.model()?;
        let basepoints = bp_text
            .iter()
            .map(|s| match Basepoint::parse(s) {
                Some(b) if b.0.len() == model.d => Ok(b),
                Some(_) => bail!("basepoint {s:?} needs one symbol per circle (d={})", model.d),
                None => bail!("basepoint {s:?} may only use '+', '-' and 'm'"),
            })
            .collect::<Result<Vec<_>>>()?;
        if cfg.profile != "standard" {
            bail!("unknown profile {:?} (only \"standard\" is available)", cfg.profile);
        }
        if cfg.window == 0 {
            bail!("window must cover at least one period");
        }
        if cfg.rank_degrees.contains(&0) {
            bail!("rank_degrees entries must be positive");
        }
        Ok(RunConfig { basepoints, ..cfg })
    }

    /// The geometric model; rejects `k <= 1` and negative genus.
    pub fn model(&self) -> Result<RationalModel> {
        Ok(build_link_model(self.genus, self.k)?)
    }

    /// Configured basepoints, or `y_+` when none were given.
    pub fn basepoints_or_default(&self, d: usize) -> Vec<Basepoint> {
        if self.basepoints.is_empty() {
            vec![Basepoint::y_plus(d)]
        } else {
            self.basepoints.clone()
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// File-name friendly form of a rational, `1/10 -> 1-10`.
pub fn eps_tag(e: &Rational) -> String {
    format!("{}-{}", e.numer(), e.denom())
}
