use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostics::DiagnosticsReport;
use crate::error::{Error, Result};
use crate::mmpp::{canonicalize, simulate, to_reparam, EventData, ParamVector};
use crate::samplers::{
    adaptive_multiplicative_run, independence_sampler_run, mwg_reparam_run, mwg_sweep, read_chain_csv, rwm_block,
    tune_cauchy_component, tune_component_scales, tune_scale, write_adapt_csv, write_chain_csv, Algorithm, BetaFamily,
    ChainOutput, MmppPosterior, ProposalSpec, ReparamTarget, RunConfig, ShapeEstimate, Target, Transform, TuneKind,
    TuneMode, REPARAM_TRANSFORMS,
};

use super::datasets::{dataset, DatasetSpec};
use super::manifest::ExperimentManifest;

/// Acceptance window for block random walks.
const BLOCK_WINDOW: (f64, f64) = (0.25, 0.35);
/// Acceptance window for one-at-a-time updates.
const COMPONENT_WINDOW: (f64, f64) = (0.40, 0.45);

/// One finished chain of an experiment.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub replicate: usize,
    pub seed: u64,
    pub dir: PathBuf,
    pub report: DiagnosticsReport,
}

/// Scales chosen by pilot runs.
#[derive(Debug, Clone, PartialEq)]
struct Tuning {
    scales: Vec<f64>,
    acceptance: Vec<f64>,
    pilots: usize,
    converged: bool,
}

impl Tuning {
    fn single(scale: f64, acceptance: f64, pilots: usize, converged: bool) -> Self {
        Self {
            scales: vec![scale],
            acceptance: vec![acceptance],
            pilots,
            converged,
        }
    }
}

/// Output directory of one chain: `<out>/<algorithm>_rep<r>`.
pub fn run_dir(out_dir: &Path, algorithm: Algorithm, replicate: usize) -> PathBuf {
    out_dir.join(format!("{algorithm}_rep{replicate}"))
}

/// Functionals reported for a `d`-state model: raw intensities, log rates.
pub fn report_functionals(d: usize) -> Vec<Transform> {
    let mut f = vec![Transform::Identity; d];
    f.resize(d * d, Transform::Log);
    f
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Events named by the manifest, or the dataset simulated into
/// `<out>/events.txt`.
fn load_events(m: &ExperimentManifest, spec: &DatasetSpec) -> Result<EventData> {
    match &m.events {
        Some(path) => EventData::read(path),
        None => {
            let data = simulate(&spec.params()?, spec.t_obs, spec.seed)?.data;
            data.write(&m.out_dir.join("events.txt"))?;
            Ok(data)
        }
    }
}

/// Runs every algorithm of the manifest on every replicate, writing one
/// directory per chain with `chain.csv`, `report.csv` and `summary.csv`
/// (plus `adapt.csv` and `sigma.csv` for adaptive samplers). Algorithms
/// that need a shape matrix take it from the replicate's Blk chain.
pub fn cmd_run(m: &ExperimentManifest) -> Result<Vec<RunRecord>> {
    m.validate()?;
    let spec = dataset(&m.dataset)?;
    let needs_shape = m.algorithms.iter().any(|a| a.needs_shape());
    let has_blk = m.algorithms.contains(&Algorithm::Blk);
    if needs_shape && !has_blk && m.shape_source.is_none() {
        return Err(Error::Orchestration(
            "shape-based algorithms need a Blk chain: run Blk first (add it to `algorithms`) \
             or point `shape_source` at the output directory of an earlier Blk run"
                .into(),
        ));
    }
    fs::create_dir_all(&m.out_dir).map_err(|e| Error::io(&m.out_dir, e))?;
    write_text(&m.out_dir.join("manifest.txt"), &m.to_text())?;
    let data = load_events(m, &spec)?;
    let posterior = MmppPosterior::new(data, spec.prior()?)?;

    let mut order = vec![];
    if has_blk {
        order.push(Algorithm::Blk);
    }
    for &a in &m.algorithms {
        if !order.contains(&a) {
            order.push(a);
        }
    }
    let per_replicate: Vec<Result<Vec<RunRecord>>> = (1..=m.replicates)
        .into_par_iter()
        .map(|r| run_replicate(m, &spec, &posterior, &order, r))
        .collect();
    let mut records = vec![];
    for r in per_replicate {
        records.extend(r?);
    }
    records.sort_by_key(|rec| (order.iter().position(|&a| a == rec.algorithm), rec.replicate));
    Ok(records)
}

fn run_replicate(
    m: &ExperimentManifest,
    spec: &DatasetSpec,
    posterior: &MmppPosterior,
    order: &[Algorithm],
    r: usize,
) -> Result<Vec<RunRecord>> {
    let seed = m.replicate_seed(r);
    let (a, b) = m.shape_window();
    let mut window: Option<Vec<Vec<f64>>> = None;
    if order[0] != Algorithm::Blk {
        if let Some(src) = &m.shape_source {
            window = Some(source_window(&run_dir(src, Algorithm::Blk, r), posterior, a, b)?);
        }
    }
    let mut records = vec![];
    for &alg in order {
        let raw_shape = match &window {
            Some(w) => Some(ShapeEstimate::from_rows(w, Transform::Identity)?.covariance),
            None => None,
        };
        let (out, tuning) = run_algorithm(alg, posterior, &spec.truth(), m, seed, window.as_deref())?;
        if alg == Algorithm::Blk {
            window = Some((a..b).map(|i| out.row(i).to_vec()).collect());
        }
        let report = DiagnosticsReport::from_chain_with(&out, &report_functionals(spec.d()), raw_shape.as_ref())?;
        let dir = run_dir(&m.out_dir, alg, r);
        write_outputs(&dir, &out, &report, &tuning, r, seed)?;
        records.push(RunRecord {
            algorithm: alg,
            replicate: r,
            seed,
            dir,
            report,
        });
    }
    Ok(records)
}

/// Rows `a..b` of an earlier Blk chain.
fn source_window(dir: &Path, posterior: &MmppPosterior, a: usize, b: usize) -> Result<Vec<Vec<f64>>> {
    let path = dir.join("chain.csv");
    if !path.exists() {
        return Err(Error::Orchestration(format!(
            "no Blk chain at {}: run Blk first or fix `shape_source`",
            path.display()
        )));
    }
    let table = read_chain_csv(&path)?;
    if table.names != posterior.names() {
        return Err(Error::Orchestration(format!(
            "Blk chain at {} has parameters {:?}, expected {:?}",
            path.display(),
            table.names,
            posterior.names()
        )));
    }
    if table.rows.len() < b {
        return Err(Error::Orchestration(format!(
            "Blk chain at {} has {} rows; the shape window needs {b}",
            path.display(),
            table.rows.len()
        )));
    }
    Ok(table.rows[a..b].to_vec())
}

fn run_algorithm(
    alg: Algorithm,
    post: &MmppPosterior,
    truth: &[f64],
    m: &ExperimentManifest,
    seed: u64,
    window: Option<&[Vec<f64>]>,
) -> Result<(ChainOutput, Tuning)> {
    let d = post.dim();
    let base = RunConfig::new(alg, m.iterations, m.burn_in, seed, truth.to_vec())?;
    let (pilots, budget) = (m.pilot_iterations, m.tune_budget);
    let accept = TuneMode::Acceptance {
        lo: BLOCK_WINDOW.0,
        hi: BLOCK_WINDOW.1,
    };
    let shape = |t: Transform| -> Result<ShapeEstimate> {
        let w = window.ok_or_else(|| Error::Orchestration(format!("{alg} needs a Blk shape window: run Blk first")))?;
        ShapeEstimate::from_rows(w, t)
    };
    let optimal = 2.38 / (d as f64).sqrt();
    match alg {
        Algorithm::Blk => {
            let kind = TuneKind::Block(ProposalSpec::spherical(0.5)?);
            let t = tune_scale(post, &kind, &accept, &base, pilots, budget)?;
            let out = rwm_block(post, &ProposalSpec::spherical(t.scale)?, &base)?;
            Ok((out, Tuning::single(t.scale, t.acceptance, t.pilots, t.converged)))
        }
        Algorithm::MwG => {
            let start: Vec<f64> = truth.iter().map(|x| 0.1 * x).collect();
            let t = tune_component_scales(
                post,
                &vec![Transform::Identity; d],
                &start,
                COMPONENT_WINDOW,
                &base,
                pilots,
                budget,
            )?;
            let out = mwg_sweep(post, &t.scales, &base)?;
            Ok((
                out,
                Tuning {
                    scales: t.scales,
                    acceptance: t.acceptance,
                    pilots: t.pilots,
                    converged: t.converged,
                },
            ))
        }
        Algorithm::BlkShp | Algorithm::BlkShpMul => {
            let s = shape(base.transform)?;
            let spec = ProposalSpec::shaped(optimal, s.factor)?;
            let t = tune_scale(post, &TuneKind::Block(spec.clone()), &accept, &base, pilots, budget)?;
            let out = rwm_block(post, &spec.with_scale(t.scale)?, &base)?;
            Ok((out, Tuning::single(t.scale, t.acceptance, t.pilots, t.converged)))
        }
        Algorithm::BlkShpCau => {
            let s = shape(Transform::Identity)?;
            let grid: Vec<f64> = [0.15, 0.25, 0.35, 0.5, 0.7, 1.0].iter().map(|f| f * optimal).collect();
            let spec = ProposalSpec::shaped_cauchy(optimal, s.factor)?;
            let t = tune_scale(post, &TuneKind::Block(spec.clone()), &TuneMode::ActGrid(grid), &base, pilots, budget)?;
            let out = rwm_block(post, &spec.with_scale(t.scale)?, &base)?;
            Ok((out, Tuning::single(t.scale, t.acceptance, t.pilots, t.converged)))
        }
        Algorithm::BlkAdpMul | Algorithm::BlkAdpMulB => {
            let kind = TuneKind::Block(ProposalSpec::spherical(0.1)?);
            let t = tune_scale(post, &kind, &accept, &base, pilots, budget)?;
            let mut adapt = base.adapt.clone();
            adapt.lambda0 = t.scale * (d as f64).sqrt();
            let out = adaptive_multiplicative_run(post, &base.clone().with_adapt(adapt))?;
            Ok((out, Tuning::single(t.scale, t.acceptance, t.pilots, t.converged)))
        }
        Algorithm::MwGRep | Algorithm::MwGRepCau => {
            if d != 4 {
                return Err(Error::Usage(format!("{alg} is defined for two-state datasets only")));
            }
            let wrapped = ReparamTarget::new(post)?;
            let mut pilot = base.clone();
            pilot.initial = to_reparam(&canonicalize(&ParamVector(truth.to_vec()))?)?.to_array().to_vec();
            let t = tune_component_scales(
                &wrapped,
                &REPARAM_TRANSFORMS,
                &[0.05, 0.2, 0.2, 0.2],
                COMPONENT_WINDOW,
                &pilot,
                pilots,
                budget,
            )?;
            let mut tuning = Tuning {
                scales: t.scales,
                acceptance: t.acceptance,
                pilots: t.pilots,
                converged: t.converged,
            };
            let family = if alg == Algorithm::MwGRepCau {
                let g = tuning.scales[3];
                let grid = [g / 3.0, g / 2.0, 2.0 * g / 3.0, g];
                let c = tune_cauchy_component(&wrapped, &REPARAM_TRANSFORMS, &tuning.scales, 3, &grid, &pilot, pilots)?;
                tuning.scales[3] = c.scale;
                tuning.acceptance[3] = c.acceptance;
                tuning.pilots += c.pilots;
                BetaFamily::Cauchy
            } else {
                BetaFamily::Gaussian
            };
            let out = mwg_reparam_run(post, &tuning.scales, family, &base)?;
            Ok((out, tuning))
        }
        Algorithm::IndShp => {
            let s = shape(Transform::Identity)?;
            let grid = TuneMode::ActGrid(vec![0.8, 1.0, 1.25, 1.5, 2.0]);
            let t = tune_scale(post, &TuneKind::Independence(s.clone()), &grid, &base, pilots, budget)?;
            let out = independence_sampler_run(post, &s, t.scale, &base)?;
            Ok((out, Tuning::single(t.scale, t.acceptance, t.pilots, t.converged)))
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn write_outputs(
    dir: &Path,
    out: &ChainOutput,
    report: &DiagnosticsReport,
    tuning: &Tuning,
    replicate: usize,
    seed: u64,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_chain_csv(out, &dir.join("chain.csv"))?;
    report.write(&dir.join("report.csv"))?;
    let mut s = String::from("key,value\n");
    let _ = writeln!(s, "algorithm,{}", out.algorithm);
    let _ = writeln!(s, "replicate,{replicate}");
    let _ = writeln!(s, "seed,{seed}");
    let _ = writeln!(s, "iterations,{}", out.n_rows());
    let _ = writeln!(s, "burn_in,{}", out.burn_in);
    let _ = writeln!(s, "scales,{}", join(&tuning.scales));
    let _ = writeln!(s, "pilot_acceptance,{}", join(&tuning.acceptance));
    let _ = writeln!(s, "pilots,{}", tuning.pilots);
    let _ = writeln!(s, "tuned,{}", tuning.converged);
    let _ = writeln!(s, "acceptance,{}", out.acceptance_rate());
    let _ = writeln!(s, "evals_per_iteration,{}", report.evals_per_iteration);
    let _ = writeln!(s, "msejd,{}", report.msejd);
    let _ = writeln!(s, "msjd,{}", report.msjd.map_or(String::new(), |v| v.to_string()));
    if let Some(trace) = &out.adaptation {
        let _ = writeln!(s, "final_m,{}", trace.m.last().copied().unwrap_or(f64::NAN));
        let rate = trace.adaptive_acceptance(&out.accepted_blocks, out.burn_in);
        let _ = writeln!(s, "adaptive_acceptance,{}", rate.map_or(String::new(), |v| v.to_string()));
        write_adapt_csv(out, &dir.join("adapt.csv"), Some(&dir.join("sigma.csv")))?;
    }
    write_text(&dir.join("summary.csv"), &s)
}

/// Reads `key,value` lines of a run summary.
pub fn read_summary(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(','))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}
