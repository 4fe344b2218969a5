use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::math::stationary_dist;
use crate::mmpp::{MmppParams, PriorSpec};

/// Observation window of the registered datasets, in seconds.
pub const T_OBS: f64 = 100.0;

/// A simulated dataset: MMPP parameters, window and simulation seed.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub name: String,
    pub psi: Vec<f64>,
    /// Off-diagonal generator rates, row-major.
    pub q: Vec<f64>,
    pub t_obs: f64,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn d(&self) -> usize {
        self.psi.len()
    }

    pub fn params(&self) -> Result<MmppParams> {
        MmppParams::from_rates(self.psi.clone(), &self.q)
    }

    /// True parameter vector: intensities then off-diagonal rates.
    pub fn truth(&self) -> Vec<f64> {
        self.psi.iter().chain(&self.q).copied().collect()
    }

    /// Independent exponential priors with means at the true values.
    pub fn prior(&self) -> Result<PriorSpec> {
        PriorSpec::new(self.truth())
    }

    /// Stationary mean event intensity.
    pub fn mean_intensity(&self) -> Result<f64> {
        let p = self.params()?;
        let nu = stationary_dist(p.generator())?;
        Ok(nu.as_slice().iter().zip(&self.psi).map(|(n, s)| n * s).sum())
    }

    /// Inline form `psi=a,b;q=c,d;t_obs=t[;seed=s]`.
    pub fn to_inline(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut s = format!("psi={};q={};t_obs={}", join(&self.psi), join(&self.q), self.t_obs);
        let _ = write!(s, ";seed={}", self.seed);
        s
    }
}

/// Looks up `D1`, `D2` or `D3`, or parses an inline specification.
pub fn dataset(name: &str) -> Result<DatasetSpec> {
    let spec = |name: &str, psi: &[f64], q: &[f64]| DatasetSpec {
        name: name.to_string(),
        psi: psi.to_vec(),
        q: q.to_vec(),
        t_obs: T_OBS,
        seed: 1,
    };
    match name.to_ascii_uppercase().as_str() {
        "D1" => Ok(spec("D1", &[10.0, 30.0], &[1.0, 1.0])),
        "D2" => Ok(spec("D2", &[10.0, 17.0], &[1.0, 1.0])),
        "D3" => Ok(spec("D3", &[10.0, 17.0, 30.0], &[0.5; 6])),
        _ if name.contains('=') => parse_inline(name),
        _ => Err(Error::Usage(format!(
            "unknown dataset `{name}`; expected D1, D2, D3 or psi=..;q=..;t_obs=.."
        ))),
    }
}

fn parse_inline(text: &str) -> Result<DatasetSpec> {
    let usage = |msg: String| Error::Usage(format!("inline dataset `{text}`: {msg}"));
    let list = |v: &str| -> Result<Vec<f64>> {
        v.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| usage(format!("`{x}`: {e}"))))
            .collect()
    };
    let (mut psi, mut q, mut t_obs, mut seed) = (None, None, None, 1);
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| usage(format!("`{part}` is not key=value")))?;
        match k.trim() {
            "psi" => psi = Some(list(v)?),
            "q" => q = Some(list(v)?),
            "t_obs" => t_obs = Some(v.trim().parse::<f64>().map_err(|e| usage(format!("t_obs: {e}")))?),
            "seed" => seed = v.trim().parse().map_err(|e| usage(format!("seed: {e}")))?,
            other => return Err(usage(format!("unknown key `{other}`"))),
        }
    }
    let spec = DatasetSpec {
        name: "inline".into(),
        psi: psi.ok_or_else(|| usage("missing psi".into()))?,
        q: q.ok_or_else(|| usage("missing q".into()))?,
        t_obs: t_obs.unwrap_or(T_OBS),
        seed,
    };
    if !(spec.t_obs > 0.0 && spec.t_obs.is_finite()) {
        return Err(usage("t_obs must be positive".into()));
    }
    spec.params().map_err(|e| usage(e.to_string()))?;
    spec.prior().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}
