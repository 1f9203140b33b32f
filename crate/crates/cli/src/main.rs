//! `rankga`: run GA benchmark campaigns from the command line.

mod spec;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use rankga_core::experiment::{
    emit_plots, median_trial, render_trace_svg, write_campaign, write_summary_csv, SummaryRow,
};
use rankga_core::{run_campaign, CampaignConfig, Problem};

use spec::{Mode, Overrides, RunSpec};

#[derive(Parser)]
#[command(name = "rankga", version, about = "Constant, fitness-adaptive and rank-adaptive mutation GA campaigns")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one campaign: one policy at one population size.
    Run(Overrides),
    /// Run every policy at every population size for a problem.
    Suite(Overrides),
    /// Re-render an SVG plot from a trace CSV.
    Plot {
        /// Trace CSV written next to a campaign's plots.
        trace: PathBuf,
        /// Output file [default: the CSV path with an .svg extension].
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn file_label(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

fn execute(mode: Mode, flags: Overrides) -> Result<()> {
    let spec = RunSpec::resolve(mode, flags)?;
    let problem = spec.benchmark()?;
    let out = &spec.out;
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let label = match mode {
        Mode::Run => CampaignConfig::new(
            spec.ga_config(spec.policies()[0], spec.pop[0]),
            spec.trials,
            spec.seed,
        )
        .campaign_id(&problem),
        Mode::Suite => format!("{}_suite", file_label(problem.name())),
    };
    let spec_path = out.join(format!("{label}_runspec.toml"));
    std::fs::write(&spec_path, spec.to_toml()?)
        .with_context(|| format!("cannot write {}", spec_path.display()))?;

    let mut rows = Vec::new();
    for &pop in &spec.pop {
        for policy in spec.policies() {
            let cfg = CampaignConfig::new(spec.ga_config(policy, pop), spec.trials, spec.seed);
            rows.push(run_one(&spec, &cfg, &problem, out)?);
        }
    }
    if mode == Mode::Suite {
        let path = out.join(format!("{label}_summary.csv"));
        write_summary_csv(&path, &rows)?;
    }
    print!("{}", table::render(&rows));
    Ok(())
}

fn run_one(spec: &RunSpec, cfg: &CampaignConfig, problem: &dyn Problem, out: &Path) -> Result<SummaryRow> {
    let id = cfg.campaign_id(problem);
    let done = AtomicUsize::new(0);
    let step = (cfg.trials / 10).max(1);
    let progress = |_: &rankga_core::TrialResult| {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        if n % step == 0 || n == cfg.trials {
            eprint!("\r{id}: {n}/{} trials", cfg.trials);
        }
    };
    let (stats, trials) = run_campaign(cfg, problem, spec.workers, &progress)?;
    eprintln!();

    let row = SummaryRow::new(&id, problem, cfg, &stats);
    write_campaign(out, &row, &trials)?;
    if spec.plots {
        let index = spec
            .plot_trial
            .or_else(|| median_trial(&trials))
            .expect("campaign has trials");
        emit_plots(&trials[index], out.join(format!("{id}_trial{index}")))?;
    }
    Ok(row)
}

fn plot(trace: &Path, out: Option<PathBuf>) -> Result<()> {
    let out = out.unwrap_or_else(|| trace.with_extension("svg"));
    render_trace_svg(trace, &out)?;
    println!("{}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(flags) => execute(Mode::Run, flags),
        Command::Suite(flags) => execute(Mode::Suite, flags),
        Command::Plot { trace, out } => plot(&trace, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
