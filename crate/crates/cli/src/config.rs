//! Run configuration: a JSON document, optionally combined with a figure
//! preset and global command-line flags.
//!
//! The schema lives in `docs/config.schema.json`. Unknown keys are rejected.
//! Every error carries the line of the offending key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use icdms_core::presets::FigurePreset;
use icdms_core::{ChannelParams, LambdaRange, ParamRange, RegionFamily, SweepGrid};
use serde::{Deserialize, Serialize};

use crate::error::{json_error, line_of_key, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub p1: f64,
    pub p2: f64,
    pub c12: f64,
    pub c21: f64,
}

/// Grid settings applied on top of each family's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ParamRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ParamRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<LambdaRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<LambdaRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dpc_anchors: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary_alpha_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_metadata")]
    pub metadata: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_csv() -> String {
    "frontier.csv".into()
}

fn default_metadata() -> String {
    "frontier.meta.json".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            csv: default_csv(),
            metadata: default_metadata(),
            svg: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `fig4` to `fig7`; supplies the channel and region list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Overrides the preset channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionFamily>,
    /// Steps for every sweep parameter, applied before `grid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_steps: Option<usize>,
    #[serde(default)]
    pub grid: GridOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1_step: Option<f64>,
    #[serde(default)]
    pub convex_hull: bool,
    #[serde(default)]
    pub paper_literal: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Global command-line flags; each one overrides the config file.
#[derive(Debug, Clone, Default)]
pub struct GlobalFlags {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub convex_hull: bool,
    pub paper_literal: bool,
    pub grid_steps: Option<usize>,
}

/// A validated run: every default filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub channel: ChannelParams,
    pub regions: Vec<RegionFamily>,
    pub grids: BTreeMap<String, SweepGrid>,
}

impl RunConfig {
    pub fn parse(src: &str, path: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| json_error(path, &e))
    }

    pub fn load(path: &Path) -> Result<(Self, String)> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok((Self::parse(&src, &path.display().to_string())?, src))
    }

    pub fn apply_flags(&mut self, flags: &GlobalFlags) {
        if let Some(dir) = &flags.out {
            self.output.dir = dir.clone();
        }
        if let Some(seed) = flags.seed {
            self.seed = seed;
        }
        self.convex_hull |= flags.convex_hull;
        self.paper_literal |= flags.paper_literal;
        if flags.grid_steps.is_some() {
            self.grid_steps = flags.grid_steps;
        }
    }

    /// Sweep grid of one family: defaults, then `grid_steps`, then the
    /// explicit overrides.
    pub fn grid_for(&self, family: RegionFamily) -> SweepGrid {
        let mut g = SweepGrid::default_for(family);
        if let Some(n) = self.grid_steps {
            g.alpha.steps = n;
            match family {
                RegionFamily::G => {
                    g.beta.steps = n;
                    g.lambda1 = LambdaRange::auto(n);
                    g.lambda2 = LambdaRange::auto(n);
                    g.corollary_alpha_steps = n;
                }
                RegionFamily::GSuc => g.beta.steps = n,
                RegionFamily::GSp1 | RegionFamily::GSp2 => {}
            }
        }
        let o = &self.grid;
        if let Some(a) = o.alpha {
            g.alpha = a;
        }
        if let Some(b) = o.beta {
            g.beta = b;
        }
        if let Some(l) = o.lambda1 {
            g.lambda1 = l;
        }
        if let Some(l) = o.lambda2 {
            g.lambda2 = l;
        }
        if let Some(d) = o.dpc_anchors {
            g.dpc_anchors = d;
        }
        if let Some(c) = o.corollary_alpha_steps {
            g.corollary_alpha_steps = c;
        }
        if let Some(s) = self.r1_step {
            g.r1_step = s;
        }
        g
    }

    /// Validates and fills defaults. `src` is the file text used to locate
    /// errors, `path` its display name.
    pub fn resolve(&self, src: &str, path: &str) -> Result<Resolved> {
        let at = |key: &str, message: String| CliError::Config {
            path: path.to_string(),
            line: line_of_key(src, key),
            message,
        };
        let preset = match &self.preset {
            Some(name) => Some(
                name.parse::<FigurePreset>()
                    .map_err(|e| at("preset", e.to_string()))?,
            ),
            None => None,
        };
        let channel = match (self.channel, preset) {
            (Some(c), _) => ChannelParams::new(c.p1, c.p2, c.c12, c.c21).map_err(|e| {
                let key = match &e {
                    icdms_core::Error::InvalidParameter { name, .. } => name.to_string(),
                    _ => "channel".into(),
                };
                at(&key, e.to_string())
            })?,
            (None, Some(p)) => p.channel,
            (None, None) => {
                return Err(at(
                    "channel",
                    "either `channel` or `preset` is required".into(),
                ))
            }
        };
        let regions = if !self.regions.is_empty() {
            self.regions.clone()
        } else if let Some(p) = preset {
            p.regions.to_vec()
        } else {
            return Err(at(
                "regions",
                "`regions` must list at least one region".into(),
            ));
        };
        if self.grid_steps == Some(0) {
            return Err(at("grid_steps", "grid_steps must be at least 1".into()));
        }
        let mut grids = BTreeMap::new();
        for &family in &regions {
            let g = self.grid_for(family);
            g.validate().map_err(|e| {
                let key = match &e {
                    icdms_core::Error::InvalidParameter { name, .. } => name.to_string(),
                    _ => "grid".into(),
                };
                at(&key, e.to_string())
            })?;
            grids.insert(family.name().to_string(), g);
        }
        Ok(Resolved {
            config: self.clone(),
            channel,
            regions,
            grids,
        })
    }
}
