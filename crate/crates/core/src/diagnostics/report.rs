use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::SquareMatrix;
use crate::samplers::{ChainOutput, Transform};

use super::acf::{act_window, cpu_adjusted_act, ess};
use super::jumps::{msejd, msjd};
use super::qq::QqRow;

/// Efficiency summary for one parameter functional.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDiagnostics {
    pub param: String,
    pub act: f64,
    pub act_cpu: f64,
    pub ess: f64,
    pub accept_rate: f64,
    pub trunc_lag: usize,
    pub truncated: bool,
}

/// Efficiency summary of the post-burn-in part of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub params: Vec<ParamDiagnostics>,
    pub msejd: f64,
    pub msjd: Option<f64>,
    pub evals_per_iteration: f64,
    pub n_kept: usize,
}

fn functional_name(name: &str, f: Transform) -> String {
    match f {
        Transform::Identity => name.to_string(),
        Transform::Log => format!("log({name})"),
        Transform::SignedLog => format!("slog({name})"),
    }
}

impl DiagnosticsReport {
    /// Report on the raw parameters.
    pub fn from_chain(chain: &ChainOutput, shape: Option<&SquareMatrix>) -> Result<Self> {
        Self::from_chain_with(chain, &vec![Transform::Identity; chain.dim], shape)
    }

    /// Report with ACT computed on `functionals[j]` of parameter `j`, for
    /// instance the log of a rate. Jump distances use the raw parameters.
    pub fn from_chain_with(chain: &ChainOutput, functionals: &[Transform], shape: Option<&SquareMatrix>) -> Result<Self> {
        if functionals.len() != chain.dim {
            return Err(Error::invalid("one functional per parameter is required"));
        }
        let kept = chain.kept_rows();
        let n = kept.len();
        let epi = chain.evals_per_iteration().max(1.0);
        let accept = chain.parameter_acceptance();
        let params = (0..chain.dim)
            .map(|j| {
                let f = functionals[j];
                let series = kept
                    .iter()
                    .map(|r| f.forward(r[j]))
                    .collect::<Option<Vec<f64>>>()
                    .ok_or_else(|| Error::invalid(format!("{} outside the {f} domain", chain.names[j])))?;
                let a = act_window(&series)?;
                Ok(ParamDiagnostics {
                    param: functional_name(&chain.names[j], f),
                    act: a.act,
                    act_cpu: cpu_adjusted_act(a.act, epi)?,
                    ess: ess(n, a.act),
                    accept_rate: accept[j],
                    trunc_lag: a.lag,
                    truncated: a.truncated,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            msejd: msejd(&kept)?,
            msjd: shape.map(|s| msjd(&kept, s)).transpose()?,
            evals_per_iteration: epi,
            n_kept: n,
        })
    }

    /// CSV text `param,act,act_cpu,ess,accept_rate,trunc_lag`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,act,act_cpu,ess,accept_rate,trunc_lag\n");
        for p in &self.params {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                p.param, p.act, p.act_cpu, p.ess, p.accept_rate, p.trunc_lag
            );
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Reads the per-parameter rows of a report CSV. The truncation flag is not
/// stored and reads back as `false`.
pub fn read_report_csv(path: &Path) -> Result<Vec<ParamDiagnostics>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "param,act,act_cpu,ess,accept_rate,trunc_lag")) => {}
        _ => return Err(err(1, "expected header param,act,act_cpu,ess,accept_rate,trunc_lag".into())),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(err(i + 1, format!("expected 6 fields, found {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| err(i + 1, format!("`{s}`: {e}")));
            Ok(ParamDiagnostics {
                param: f[0].to_string(),
                act: num(f[1])?,
                act_cpu: num(f[2])?,
                ess: num(f[3])?,
                accept_rate: num(f[4])?,
                trunc_lag: f[5].parse().map_err(|e| err(i + 1, format!("trunc_lag: {e}")))?,
                truncated: false,
            })
        })
        .collect()
}

/// QQ table CSV text `param,quantile,sample_q,ref_q,band_lo,band_hi`.
pub fn qq_csv(tables: &[(String, Vec<QqRow>)]) -> String {
    let mut s = String::from("param,quantile,sample_q,ref_q,band_lo,band_hi\n");
    for (param, rows) in tables {
        for r in rows {
            let _ = writeln!(
                s,
                "{param},{},{},{},{},{}",
                r.quantile, r.sample_q, r.ref_q, r.band_lo, r.band_hi
            );
        }
    }
    s
}
