use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Event times observed on the window `(0, t_obs]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventData {
    t_obs: f64,
    events: Vec<f64>,
    gaps: Vec<f64>,
}

impl EventData {
    pub fn new(t_obs: f64, events: Vec<f64>) -> Result<Self> {
        if !(t_obs > 0.0 && t_obs.is_finite()) {
            return Err(Error::invalid(format!("observation time must be positive, got {t_obs}")));
        }
        let mut prev = 0.0;
        for &e in &events {
            if !(e > prev && e <= t_obs) {
                return Err(Error::invalid(format!(
                    "event times must be strictly increasing within (0, {t_obs}], found {e} after {prev}"
                )));
            }
            prev = e;
        }
        let mut gaps = Vec::with_capacity(events.len() + 1);
        let mut last = 0.0;
        for &e in &events {
            gaps.push(e - last);
            last = e;
        }
        gaps.push(t_obs - last);
        Ok(Self { t_obs, events, gaps })
    }

    pub fn t_obs(&self) -> f64 {
        self.t_obs
    }

    pub fn events(&self) -> &[f64] {
        &self.events
    }

    /// Inter-event times `t_1..t_{n+1}`, including the leading and trailing
    /// partial intervals.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn n_events(&self) -> usize {
        self.events.len()
    }

    /// Serializes to the plain-text events format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * (self.events.len() + 1));
        let _ = writeln!(s, "# t_obs={}", self.t_obs);
        for e in &self.events {
            let _ = writeln!(s, "{e}");
        }
        s
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let parse_err = |line: usize, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty events file".into()))?;
        let t_obs = header
            .trim()
            .strip_prefix("# t_obs=")
            .ok_or_else(|| parse_err(1, format!("expected `# t_obs=<value>` header, got `{header}`")))?
            .trim()
            .parse::<f64>()
            .map_err(|e| parse_err(1, e.to_string()))?;
        let mut events = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            events.push(line.parse::<f64>().map_err(|e| parse_err(i + 1, format!("`{line}`: {e}")))?);
        }
        Self::new(t_obs, events).map_err(|e| parse_err(0, e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// Jump times of the hidden chain; the first entry is the initial state at time 0.
/// States are 0-based in memory and written 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenTrajectory(pub Vec<(f64, usize)>);

impl HiddenTrajectory {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, state) in &self.0 {
            let _ = writeln!(s, "{t} {}", state + 1);
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
