use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::chain::ChainOutput;

/// Chain CSV text: `iter,<names>,logpost,accepted_blocks`, iterations
/// numbered from 1. Floats use the shortest round-trip representation.
pub fn chain_csv(out: &ChainOutput) -> String {
    let mut s = String::with_capacity(out.n_rows() * 16 * (out.dim + 3));
    s.push_str("iter,");
    for name in &out.names {
        s.push_str(name);
        s.push(',');
    }
    s.push_str("logpost,accepted_blocks\n");
    for (i, row) in out.rows().enumerate() {
        let _ = write!(s, "{}", i + 1);
        for v in row {
            let _ = write!(s, ",{v}");
        }
        let _ = writeln!(s, ",{},{}", out.logpost[i], out.accepted_blocks[i]);
    }
    s
}

pub fn write_chain_csv(out: &ChainOutput, path: &Path) -> Result<()> {
    fs::write(path, chain_csv(out)).map_err(|e| Error::io(path, e))
}

/// Adaptation sidecar: `iter,m,sigma_snapshot_id`, with an empty id before
/// the first snapshot. Covariance snapshots go to a second file when
/// `snapshot_path` is given, as `snapshot_id,iter,row,col,value`.
pub fn write_adapt_csv(out: &ChainOutput, path: &Path, snapshot_path: Option<&Path>) -> Result<()> {
    let trace = out
        .adaptation
        .as_ref()
        .ok_or_else(|| Error::invalid("chain has no adaptation trace"))?;
    let mut s = String::from("iter,m,sigma_snapshot_id\n");
    for (i, m) in trace.m.iter().enumerate() {
        let id = trace.snapshot_id(i + 1).map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{m},{id}", i + 1);
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))?;
    if let Some(sp) = snapshot_path {
        let mut s = String::from("snapshot_id,iter,row,col,value\n");
        for (k, (iter, cov)) in trace.snapshots.iter().enumerate() {
            for r in 0..cov.dim() {
                for c in 0..cov.dim() {
                    let _ = writeln!(s, "{k},{iter},{},{},{}", r + 1, c + 1, cov.get(r, c));
                }
            }
        }
        fs::write(sp, s).map_err(|e| Error::io(sp, e))?;
    }
    Ok(())
}

/// Contents of a chain CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTable {
    pub names: Vec<String>,
    pub iters: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
    pub logpost: Vec<f64>,
    pub accepted_blocks: Vec<u32>,
}

impl ChainTable {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

pub fn read_chain_csv(path: &Path) -> Result<ChainTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let n = cols.len();
    if n < 4 || cols[0] != "iter" || cols[n - 2] != "logpost" || cols[n - 1] != "accepted_blocks" {
        return Err(parse_err(1, "expected header iter,<names>,logpost,accepted_blocks".into()));
    }
    let names: Vec<String> = cols[1..n - 2].iter().map(|s| s.to_string()).collect();
    let mut table = ChainTable {
        names,
        iters: Vec::new(),
        rows: Vec::new(),
        logpost: Vec::new(),
        accepted_blocks: Vec::new(),
    };
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n {
            return Err(parse_err(idx + 1, format!("expected {n} fields, found {}", fields.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(idx + 1, format!("`{s}`: {e}")));
        table
            .iters
            .push(fields[0].parse().map_err(|e| parse_err(idx + 1, format!("iteration: {e}")))?);
        table
            .rows
            .push(fields[1..n - 2].iter().map(|s| num(s)).collect::<Result<_>>()?);
        table.logpost.push(num(fields[n - 2])?);
        table.accepted_blocks.push(
            fields[n - 1]
                .parse()
                .map_err(|e| parse_err(idx + 1, format!("accepted_blocks: {e}")))?,
        );
    }
    if table.rows.is_empty() {
        return Err(parse_err(2, "no samples".into()));
    }
    Ok(table)
}
