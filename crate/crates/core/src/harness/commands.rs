use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagnostics::{qq_compare, qq_csv, read_report_csv, ParamDiagnostics};
use crate::error::{Error, Result};
use crate::math::diffusion_curve;
use crate::mmpp::simulate;
use crate::samplers::{read_chain_csv, Algorithm};

use super::datasets::dataset;

/// What `simulate` wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSummary {
    pub n_events: usize,
    /// Stationary mean event intensity of the generating model.
    pub mean_intensity: f64,
    pub t_obs: f64,
}

/// Simulates a registered or inline dataset into an events file. `seed`
/// overrides the dataset's own seed.
pub fn cmd_simulate(name: &str, seed: Option<u64>, out: &Path) -> Result<SimulateSummary> {
    let mut spec = dataset(name)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    let sim = simulate(&spec.params()?, spec.t_obs, spec.seed)?;
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    sim.data.write(out)?;
    Ok(SimulateSummary {
        n_events: sim.data.n_events(),
        mean_intensity: spec.mean_intensity()?,
        t_obs: spec.t_obs,
    })
}

/// Splits `<Alg>_rep<r>` into its parts.
fn parse_run_dir(name: &str) -> Option<(Algorithm, usize)> {
    let (alg, rep) = name.rsplit_once("_rep")?;
    Some((alg.parse().ok()?, rep.parse().ok()?))
}

/// Reports of one directory, keyed by algorithm then replicate.
type Reports = BTreeMap<Algorithm, BTreeMap<usize, Vec<ParamDiagnostics>>>;

fn collect_reports(dir: &Path) -> Result<Reports> {
    let mut reports: Reports = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let Some((alg, r)) = entry.file_name().to_str().and_then(parse_run_dir) else {
            continue;
        };
        let path = entry.path().join("report.csv");
        if path.is_file() {
            reports.entry(alg).or_default().insert(r, read_report_csv(&path)?);
        }
    }
    Ok(reports)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "absent".to_string(), |x| format!("{x:.1}"))
}

/// Aggregates `report.csv` files under `dir` into a text table of mean
/// CPU-adjusted ACT per algorithm and parameter, followed by the raw ACT of
/// every replicate. Missing replicates or parameters show as `absent`.
/// The table is also written to `dir/table.txt`.
pub fn cmd_table(dir: &Path) -> Result<String> {
    let reports = collect_reports(dir)?;
    if reports.is_empty() {
        return Err(Error::Orchestration(format!(
            "no <algorithm>_rep<r>/report.csv under {}: run an experiment first",
            dir.display()
        )));
    }
    let mut params: Vec<String> = vec![];
    for p in reports.values().flat_map(|reps| reps.values()).flatten() {
        if !params.contains(&p.param) {
            params.push(p.param.clone());
        }
    }
    let max_rep = reports.values().filter_map(|reps| reps.keys().max()).max().copied().unwrap_or(1);
    let width = params.iter().map(String::len).max().unwrap_or(0).max(10) + 2;
    let header = |first: &str| {
        let mut s = format!("{first:<14}");
        for p in &params {
            let _ = write!(s, "{p:>width$}");
        }
        s
    };

    let mut s = String::from("Mean CPU-adjusted ACT\n");
    let _ = writeln!(s, "{}", header("algorithm"));
    let mut notes: Vec<String> = vec![];
    for (alg, reps) in &reports {
        let factors: Vec<f64> = reps.values().flatten().filter(|p| p.act > 0.0).map(|p| p.act_cpu / p.act).collect();
        let factor = factors.iter().copied().fold(1.0, f64::max);
        let mut label = alg.to_string();
        if factor > 1.0 + 1e-9 {
            let note = format!("ACT multiplied by {factor:.0}, the likelihood evaluations per iteration");
            let k = notes.iter().position(|n| n == &note).unwrap_or_else(|| {
                notes.push(note);
                notes.len() - 1
            });
            label.push_str(&"*".repeat(k + 1));
        }
        let _ = write!(s, "{label:<14}");
        for p in &params {
            let vals: Vec<f64> = reps
                .values()
                .filter_map(|rows| rows.iter().find(|d| &d.param == p).map(|d| d.act_cpu))
                .collect();
            let mean = (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64);
            let _ = write!(s, "{:>width$}", cell(mean));
        }
        s.push('\n');
    }
    for (k, note) in notes.iter().enumerate() {
        let _ = writeln!(s, "{} {note}", "*".repeat(k + 1));
    }

    let _ = writeln!(s, "\nACT per replicate");
    let _ = writeln!(s, "{}", header("algorithm rep"));
    for (alg, reps) in &reports {
        for r in 1..=max_rep {
            let _ = write!(s, "{:<14}", format!("{alg} {r}"));
            for p in &params {
                let v = reps.get(&r).and_then(|rows| rows.iter().find(|d| &d.param == p)).map(|d| d.act);
                let _ = write!(s, "{:>width$}", cell(v));
            }
            s.push('\n');
        }
    }
    let path = dir.join("table.txt");
    fs::write(&path, &s).map_err(|e| Error::io(&path, e))?;
    Ok(s)
}

/// CSV `mu,speed,acceptance` of the limiting efficiency curve.
pub fn cmd_curves(j: f64, mu_min: f64, mu_max: f64, points: usize) -> Result<String> {
    let curve = diffusion_curve(j, mu_min, mu_max, points).map_err(|e| Error::Usage(e.to_string()))?;
    let mut s = String::from("mu,speed,acceptance\n");
    for p in curve {
        let _ = writeln!(s, "{},{},{}", p.mu, p.speed, p.acceptance);
    }
    Ok(s)
}

/// Settings of a QQ comparison between two chain files.
#[derive(Debug, Clone, PartialEq)]
pub struct QqSettings {
    /// Leading rows dropped from both chains.
    pub burn_in: usize,
    pub n_quantiles: usize,
    pub n_resamples: usize,
    pub seed: u64,
}

impl Default for QqSettings {
    fn default() -> Self {
        Self {
            burn_in: 0,
            n_quantiles: 99,
            n_resamples: 200,
            seed: 1,
        }
    }
}

/// QQ table CSV comparing every parameter of `sample` with `reference`.
pub fn cmd_qq(sample: &Path, reference: &Path, settings: &QqSettings) -> Result<String> {
    let a = read_chain_csv(sample)?;
    let b = read_chain_csv(reference)?;
    if a.names != b.names {
        return Err(Error::Usage(format!(
            "parameter sets differ: {:?} in {} and {:?} in {}",
            a.names,
            sample.display(),
            b.names,
            reference.display()
        )));
    }
    for (t, path) in [(&a, sample), (&b, reference)] {
        if t.rows.len() <= settings.burn_in {
            return Err(Error::Usage(format!(
                "{} has {} rows, not more than the burn-in {}",
                path.display(),
                t.rows.len(),
                settings.burn_in
            )));
        }
    }
    let tables = a
        .names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let rows = qq_compare(
                &a.column(j)[settings.burn_in..],
                &b.column(j)[settings.burn_in..],
                settings.n_quantiles,
                settings.n_resamples,
                settings.seed.wrapping_add(j as u64),
            )?;
            Ok((name.clone(), rows))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(qq_csv(&tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_report(dir: &Path, alg: &str, r: usize, rows: &[(&str, f64, f64)]) {
        let d = dir.join(format!("{alg}_rep{r}"));
        fs::create_dir_all(&d).unwrap();
        let mut s = String::from("param,act,act_cpu,ess,accept_rate,trunc_lag\n");
        for (p, act, cpu) in rows {
            s.push_str(&format!("{p},{act},{cpu},100,0.3,5\n"));
        }
        fs::write(d.join("report.csv"), s).unwrap();
    }

    #[test]
    fn table_means_footnotes_and_absent_cells() {
        let tmp = tempfile::tempdir().unwrap();
        for (r, act) in [(1, 10.0), (2, 12.0), (3, 14.0)] {
            write_report(tmp.path(), "Blk", r, &[("psi1", act, act), ("log(q12)", 3.0, 3.0)]);
        }
        write_report(tmp.path(), "MwG", 1, &[("psi1", 5.0, 20.0), ("log(q12)", 2.0, 8.0)]);
        write_report(tmp.path(), "MwG", 3, &[("psi1", 7.0, 28.0)]);
        let t = cmd_table(tmp.path()).unwrap();
        let blk = t.lines().find(|l| l.starts_with("Blk ")).unwrap();
        assert!(blk.contains("12.0"), "{t}");
        let mwg = t.lines().find(|l| l.starts_with("MwG*")).unwrap();
        assert!(mwg.contains("24.0") && mwg.contains("8.0"), "{t}");
        assert!(t.contains("multiplied by 4"));
        let rep2 = t.lines().find(|l| l.starts_with("MwG 2")).unwrap();
        assert_eq!(rep2.matches("absent").count(), 2);
        let rep3 = t.lines().find(|l| l.starts_with("MwG 3")).unwrap();
        assert_eq!(rep3.matches("absent").count(), 1);
        assert_eq!(fs::read_to_string(tmp.path().join("table.txt")).unwrap(), t);
    }

    #[test]
    fn table_without_reports_errors() {
        let tmp = tempfile::tempdir().unwrap();
        assert!(matches!(cmd_table(tmp.path()), Err(Error::Orchestration(_))));
    }

    #[test]
    fn curves_csv() {
        let csv = cmd_curves(1.0, 0.5, 6.0, 12).unwrap();
        let acc: Vec<f64> = csv
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(acc.len(), 12);
        assert!(acc.windows(2).all(|w| w[1] < w[0]));
        assert!(matches!(cmd_curves(1.0, 0.0, 1.0, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn simulate_writes_events() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("sub/d1.txt");
        let s = cmd_simulate("D1", Some(1), &path).unwrap();
        assert!((s.mean_intensity - 20.0).abs() < 1e-12);
        assert!(path.is_file());
        assert!((1500..2500).contains(&s.n_events), "{s:?}");
        assert!(matches!(cmd_simulate("D9", None, &path), Err(Error::Usage(_))));
    }
}
