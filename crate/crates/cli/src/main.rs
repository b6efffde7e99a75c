//! `su2-toric`: runs the verification experiments and writes their reports.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use su2_toric::lattice::TorusLattice;
use su2_toric::repkernel::{cg, HalfInt};
use su2_toric_cli::suites::{algebra, braid, excite, ground};
use su2_toric_cli::{consolidate, Lab, RunConfig, VerificationReport};

#[derive(Parser)]
#[command(name = "su2-toric", version, about = "Numerical checks for the SU(2) toric code on a small torus")]
struct Cli {
    /// Config file (`key = value` lines, TOML syntax).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set jmaxTwice=1`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Directory for reports and CSV files.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Link, Gauss-law and Hamiltonian algebra.
    VerifyAlgebra,
    /// Spin-network basis, sector states and the amplitude CSV.
    GroundState,
    /// Electric pairs, vortices, dyons and the gap term.
    Excite,
    /// Wilson-'t Hooft algebra, braiding overlap and Dirac-string checks.
    Braid,
    /// Consolidate the latest report of every experiment.
    Report,
    /// Print Clebsch-Gordan coefficients up to the cutoff as CSV.
    CgTable,
    /// Print the lattice layout and the vortex strip as JSON.
    LatticeDump,
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_env();
    for assignment in &cli.overrides {
        cfg.set(assignment)?;
    }
    if let Some(dir) = &cli.output_dir {
        cfg.output_dir = dir.clone();
    }
    Ok(cfg)
}

fn finish(report: &VerificationReport, cfg: &RunConfig) -> anyhow::Result<bool> {
    let path = report.write(&cfg.output_dir)?;
    print!("{}", report.summary());
    for note in &report.notes {
        println!("note: {note}");
    }
    let failed = report.failures().count();
    println!("{}: {} checks, {failed} failed, {:.1} s -> {}", report.experiment, report.checks.len(), report.runtime_seconds, path.display());
    Ok(failed == 0)
}

fn cg_table(cfg: &RunConfig) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["j1", "m1", "j2", "m2", "j", "m", "coefficient"])?;
    let jmax = cfg.jmax();
    for j1 in jmax.spins_up_to() {
        for j2 in jmax.spins_up_to() {
            for j in (0..=2 * jmax.twice()).map(HalfInt::from_twice) {
                if !su2_toric::repkernel::triangle(j1, j2, j) {
                    continue;
                }
                for m1 in j1.projections() {
                    for m2 in j2.projections() {
                        let m = HalfInt::from_twice(m1.twice() + m2.twice());
                        if !j.admits(m) {
                            continue;
                        }
                        let c = cg(j1, m1, j2, m2, j, m);
                        w.write_record([j1, m1, j2, m2, j, m].iter().map(|x| x.to_string()).chain([format!("{c:.17e}")]))?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Command::Report = cli.command {
        // only the output directory matters here; a broken config must not hide reports
        let dir = match &cli.output_dir {
            Some(d) => d.clone(),
            None => load_config(cli)?.output_dir,
        };
        let merged = consolidate(&dir).with_context(|| format!("consolidating {}", dir.display()))?;
        print!("{}", merged.summary());
        return Ok(merged.passed());
    }
    let cfg = load_config(cli)?;
    match cli.command {
        Command::VerifyAlgebra => finish(&algebra::verify_algebra(&cfg), &cfg),
        Command::GroundState => {
            let mut lab = Lab::new(cfg.clone());
            finish(&ground::ground_state(&mut lab, Some(&cfg.output_dir)), &cfg)
        }
        Command::Excite => finish(&excite::excite(&mut Lab::new(cfg.clone())), &cfg),
        Command::Braid => finish(&braid::braid(&mut Lab::new(cfg.clone())), &cfg),
        Command::CgTable => cg_table(&cfg).map(|_| true),
        Command::LatticeDump => {
            let lat = TorusLattice::new(cfg.l)?;
            let strip = lat.ladder_strip(lat.plaquette(0, 0), lat.plaquette(1, 0))?;
            println!("{}", serde_json::to_string_pretty(&lat.layout(Some(&strip)))?);
            Ok(true)
        }
        Command::Report => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
