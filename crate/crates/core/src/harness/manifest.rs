use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::samplers::Algorithm;

/// Run-length presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    /// 5,500 iterations with 500 burn-in.
    #[default]
    Desk,
    /// 11,000 iterations with 1,000 burn-in.
    Paper,
}

impl Profile {
    pub fn iterations(self) -> usize {
        match self {
            Profile::Desk => 5_500,
            Profile::Paper => 11_000,
        }
    }

    pub fn burn_in(self) -> usize {
        match self {
            Profile::Desk => 500,
            Profile::Paper => 1_000,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Desk => "desk",
            Profile::Paper => "paper",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            other => Err(Error::Usage(format!("unknown profile `{other}` (desk or paper)"))),
        }
    }
}

/// One experiment: a dataset, the algorithms to run on it and the
/// replicate structure. Replicate `r` (from 1) uses seed `seed + r - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentManifest {
    /// Registry name or inline specification.
    pub dataset: String,
    /// Events file; simulated from the dataset when absent.
    pub events: Option<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub replicates: usize,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Rows of the Blk chain used for shape estimates; defaults to the
    /// 1,000 rows after burn-in.
    pub shape_window: Option<(usize, usize)>,
    /// Directory holding earlier Blk runs, used when Blk is not in `algorithms`.
    pub shape_source: Option<PathBuf>,
    pub pilot_iterations: usize,
    pub tune_budget: usize,
}

impl ExperimentManifest {
    pub fn new(dataset: &str, algorithms: Vec<Algorithm>, out_dir: impl Into<PathBuf>) -> Self {
        let p = Profile::Desk;
        Self {
            dataset: dataset.to_string(),
            events: None,
            algorithms,
            replicates: 3,
            iterations: p.iterations(),
            burn_in: p.burn_in(),
            seed: 1,
            out_dir: out_dir.into(),
            shape_window: None,
            shape_source: None,
            pilot_iterations: 2_000,
            tune_budget: 10,
        }
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.iterations = profile.iterations();
        self.burn_in = profile.burn_in();
        self
    }

    pub fn replicate_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64 - 1)
    }

    pub fn shape_window(&self) -> (usize, usize) {
        self.shape_window.unwrap_or((self.burn_in, self.burn_in + 1000))
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(Error::Usage(m));
        if self.algorithms.is_empty() {
            return usage("manifest lists no algorithms".into());
        }
        if self.replicates == 0 {
            return usage("replicates must be at least 1".into());
        }
        if self.burn_in >= self.iterations {
            return usage(format!(
                "burn_in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            ));
        }
        let (a, b) = self.shape_window();
        if a >= b || b > self.iterations {
            return usage(format!("shape window {a}..{b} must lie inside the {} iterations", self.iterations));
        }
        if b - a < 10 {
            return usage("shape window needs at least 10 rows".into());
        }
        if self.pilot_iterations < 100 {
            return usage("pilot runs need at least 100 iterations".into());
        }
        Ok(())
    }

    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let base = origin.parent().unwrap_or(Path::new("."));
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut m = Self::new("", Vec::new(), "runs");
        let (mut iters, mut burn) = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(i + 1, format!("`{line}` is not key=value")))?;
            let int = |v: &str| v.parse::<usize>().map_err(|e| err(i + 1, format!("{k}: {e}")));
            let path = |v: &str| {
                let p = PathBuf::from(v);
                if p.is_absolute() {
                    p
                } else {
                    base.join(p)
                }
            };
            match k {
                "dataset" => m.dataset = v.to_string(),
                "events" => m.events = Some(path(v)),
                "algorithms" => {
                    m.algorithms = v
                        .split(',')
                        .map(|a| a.trim().parse::<Algorithm>().map_err(|e| err(i + 1, e.to_string())))
                        .collect::<Result<_>>()?
                }
                "replicates" => m.replicates = int(v)?,
                "iterations" => iters = Some(int(v)?),
                "burn_in" => burn = Some(int(v)?),
                "profile" => {
                    let p: Profile = v.parse().map_err(|e: Error| err(i + 1, e.to_string()))?;
                    m = m.with_profile(p);
                }
                "seed" => m.seed = v.parse().map_err(|e| err(i + 1, format!("seed: {e}")))?,
                "out" => m.out_dir = path(v),
                "shape_window" => {
                    let (a, b) = v
                        .split_once(',')
                        .ok_or_else(|| err(i + 1, "shape_window takes start,end".into()))?;
                    m.shape_window = Some((int(a.trim())?, int(b.trim())?));
                }
                "shape_source" => m.shape_source = Some(path(v)),
                "pilot_iterations" => m.pilot_iterations = int(v)?,
                "tune_budget" => m.tune_budget = int(v)?,
                other => return Err(err(i + 1, format!("unknown key `{other}`"))),
            }
        }
        if let Some(n) = iters {
            m.iterations = n;
        }
        if let Some(b) = burn {
            m.burn_in = b;
        }
        if m.dataset.is_empty() {
            return Err(err(0, "missing `dataset`".into()));
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn to_text(&self) -> String {
        let algs: Vec<String> = self.algorithms.iter().map(Algorithm::to_string).collect();
        let mut s = format!(
            "dataset={}\nalgorithms={}\nreplicates={}\niterations={}\nburn_in={}\nseed={}\nout={}\npilot_iterations={}\ntune_budget={}\n",
            self.dataset,
            algs.join(","),
            self.replicates,
            self.iterations,
            self.burn_in,
            self.seed,
            self.out_dir.display(),
            self.pilot_iterations,
            self.tune_budget,
        );
        if let Some(e) = &self.events {
            s.push_str(&format!("events={}\n", e.display()));
        }
        if let Some((a, b)) = self.shape_window {
            s.push_str(&format!("shape_window={a},{b}\n"));
        }
        if let Some(p) = &self.shape_source {
            s.push_str(&format!("shape_source={}\n", p.display()));
        }
        s
    }
}
