use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mmpp_rwm::harness::{cmd_curves, cmd_qq, cmd_run, cmd_simulate, cmd_table, ExperimentManifest, Profile, QqSettings};
use mmpp_rwm::samplers::Algorithm;
use mmpp_rwm::{Error, Result};

#[derive(Parser)]
#[command(name = "mmpp-rwm", version, about = "Random walk Metropolis experiments on MMPP data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Iterations per chain (overrides --profile and the manifest).
    #[arg(long, global = true)]
    iters: Option<usize>,
    /// Burn-in iterations (overrides --profile and the manifest).
    #[arg(long, global = true)]
    burnin: Option<usize>,
    /// Run-length preset: desk (5500/500) or paper (11000/1000).
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Output directory or file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a dataset (D1, D2, D3 or `psi=..;q=..;t_obs=..`) into an events file.
    Simulate { dataset: String },
    /// Run the chains of an experiment manifest.
    Run {
        /// Manifest file of key=value lines.
        manifest: Option<PathBuf>,
        /// Dataset, when no manifest is given.
        #[arg(long)]
        dataset: Option<String>,
        /// Comma-separated algorithm ids, when no manifest is given.
        #[arg(long)]
        algorithms: Option<String>,
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Aggregate the reports of an output directory into an ACT table.
    Table { dir: PathBuf },
    /// Compare the marginals of two chain files.
    Qq {
        sample: PathBuf,
        reference: PathBuf,
        #[arg(long, default_value_t = 99)]
        quantiles: usize,
        #[arg(long, default_value_t = 200)]
        resamples: usize,
    },
    /// Limiting speed and acceptance against the rescaled proposal scale.
    Curves {
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 0.1)]
        mu_min: f64,
        #[arg(long, default_value_t = 10.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let profile: Option<Profile> = cli.profile.as_deref().map(str::parse).transpose()?;
    match cli.command {
        Command::Simulate { dataset } => {
            let out = cli.out.unwrap_or_else(|| PathBuf::from(format!("{dataset}_events.txt")));
            let s = cmd_simulate(&dataset, cli.seed, &out)?;
            println!("wrote {} events to {}", s.n_events, out.display());
            println!(
                "stationary mean intensity {} (expected {} events over {} s)",
                s.mean_intensity,
                s.mean_intensity * s.t_obs,
                s.t_obs
            );
        }
        Command::Run {
            manifest,
            dataset,
            algorithms,
            replicates,
        } => {
            let mut m = match (manifest, dataset) {
                (Some(path), None) => ExperimentManifest::read(&path).map_err(|e| match e {
                    Error::Parse { .. } => Error::Usage(e.to_string()),
                    other => other,
                })?,
                (None, Some(d)) => {
                    let algs = algorithms
                        .as_deref()
                        .unwrap_or("Blk")
                        .split(',')
                        .map(|a| a.trim().parse::<Algorithm>().map_err(|e| Error::Usage(e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    ExperimentManifest::new(&d, algs, "runs")
                }
                _ => return Err(Error::Usage("give either a manifest file or --dataset".into())),
            };
            if let Some(p) = profile {
                m = m.with_profile(p);
            }
            if let Some(n) = cli.iters {
                m.iterations = n;
            }
            if let Some(b) = cli.burnin {
                m.burn_in = b;
            }
            if let Some(s) = cli.seed {
                m.seed = s;
            }
            if let Some(r) = replicates {
                m.replicates = r;
            }
            if let Some(o) = cli.out {
                m.out_dir = o;
            }
            for rec in cmd_run(&m)? {
                let acts: Vec<String> = rec
                    .report
                    .params
                    .iter()
                    .map(|p| format!("{}={:.1}", p.param, p.act_cpu))
                    .collect();
                println!("{} rep {} -> {} [{}]", rec.algorithm, rec.replicate, rec.dir.display(), acts.join(" "));
            }
        }
        Command::Table { dir } => {
            let text = cmd_table(&dir)?;
            emit(&text, cli.out.as_deref())?;
        }
        Command::Qq {
            sample,
            reference,
            quantiles,
            resamples,
        } => {
            let burn_in = cli.burnin.unwrap_or(profile.unwrap_or_default().burn_in());
            let settings = QqSettings {
                burn_in,
                n_quantiles: quantiles,
                n_resamples: resamples,
                seed: cli.seed.unwrap_or(1),
            };
            let csv = cmd_qq(&sample, &reference, &settings)?;
            emit(&csv, cli.out.as_deref())?;
        }
        Command::Curves { j, mu_min, mu_max, points } => {
            let csv = cmd_curves(j, mu_min, mu_max, points)?;
            emit(&csv, cli.out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Usage(_)) { 2 } else { 1 })
        }
    }
}
