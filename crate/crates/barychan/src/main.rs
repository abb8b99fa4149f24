//! Thin command-line front end; all computation lives in the library.

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

use barychan::analytic::{cum_absorbed_sito, SisoChannel, SitoConfig};
use barychan::barycenter::{compose_barycenters, gamma, GammaInputs};
use barychan::harness::{
    self, compare_scenario, emit_csv, run_sweep, write_csv, SweepParameter, SweepSpec,
};
use barychan::model::{PbsParams, Scenario, ValidatedScenario};
use barychan::pbs::run_ensemble;
use barychan::solver::{solve_centered, solve_simo};

/// Desk-scale default PBS step; the paper-fidelity step is 1e-7 s.
const DT_PBS_DESK: f64 = 1e-5;
const DT_PBS_PAPER: f64 = 1e-7;

#[derive(Parser)]
#[command(name = "barychan", about = "Diffusive MC channels with multiple fully absorbing receivers")]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the PBS random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of PBS trials.
    #[arg(long, global = true)]
    trials: Option<u32>,
    /// Override the PBS step time in seconds.
    #[arg(long, global = true)]
    dt_pbs: Option<f64>,
    /// Override the solver step time in seconds.
    #[arg(long, global = true)]
    dt_solver: Option<f64>,
    /// Use the reference PBS step time of 1e-7 s (slow).
    #[arg(long, global = true)]
    paper_fidelity: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the analytic gamma over distances and times.
    Gamma {
        /// Receiver radius in µm.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Diffusion coefficient in µm²/s.
        #[arg(long, default_value_t = 79.4)]
        diffusion: f64,
        /// Source distances in µm.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,6,8,10,12")]
        distances: Vec<f64>,
        /// Observation times in s.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        times: Vec<f64>,
    },
    /// Closed-form single-receiver response at the scenario output times.
    Siso,
    /// Closed-form coupled two-receiver response (series solution).
    Sito,
    /// Numerical multi-receiver solve: barycenter model and centered baseline.
    Simo,
    /// Particle-based simulation ensemble; --out dumps raw absorption events.
    Pbs,
    /// Sweep the position of the second receiver and emit comparison rows.
    Sweep {
        /// Swept parameter: omega | distance | alpha.
        #[arg(long)]
        param: String,
        /// Fixed companion value: d(C1,C2) µm for omega, Ω degrees for
        /// distance, transmitter distance µm for alpha.
        #[arg(long)]
        fixed: f64,
        /// Sweep values (degrees or µm).
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
    /// Compare analytic, centered, and PBS results for one scenario.
    Compare,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();

    let scenario = || -> anyhow::Result<ValidatedScenario> {
        let path = cli.scenario.as_ref().context("--scenario is required for this command")?;
        let mut raw = harness::load_scenario(path)?.into_scenario();
        apply_overrides(&mut raw, &cli);
        Ok(raw.validate()?)
    };

    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };

    match &cli.command {
        Command::Gamma { radius, diffusion, distances, times } => {
            writeln!(out, "d_um,t_s,gamma")?;
            for &d in distances {
                for &t in times {
                    let g = gamma(&GammaInputs::new(d, *radius, *diffusion, t)?)?;
                    writeln!(out, "{d},{t},{g}")?;
                }
            }
        }
        Command::Siso => {
            let s = scenario()?;
            if s.receivers().is_empty() {
                bail!("siso needs a scenario with at least one receiver");
            }
            let n_t = s.transmitter().released_molecules as f64;
            let ch = SisoChannel::new(
                s.tx_distance(0),
                s.receivers()[0].radius_um,
                s.medium().diffusion_um2_per_s,
            )?;
            writeln!(out, "t_s,hitting_rate_per_s,N_absorbed")?;
            for &t in &s.time_grid().output_times_s {
                writeln!(out, "{t},{},{}", ch.hitting_rate(t), ch.cum_absorbed(t, n_t))?;
            }
        }
        Command::Sito => {
            let s = scenario()?;
            if s.receivers().len() != 2 {
                bail!("sito needs a scenario with exactly two receivers");
            }
            writeln!(out, "t_s,N1,N2")?;
            for &t in &s.time_grid().output_times_s {
                let bary = compose_barycenters(&s, t)?;
                let cfg = SitoConfig {
                    radius_1: s.receivers()[0].radius_um,
                    radius_2: s.receivers()[1].radius_um,
                    d_c1_tx: s.tx_distance(0),
                    d_c2_tx: s.tx_distance(1),
                    d_c1_b2: s.receivers()[0].center_um.distance(&bary.position(1)),
                    d_c2_b1: s.receivers()[1].center_um.distance(&bary.position(0)),
                    released_molecules: s.transmitter().released_molecules as f64,
                    diffusion: s.medium().diffusion_um2_per_s,
                };
                let (n1, n2) = cum_absorbed_sito(&cfg, t)?;
                writeln!(out, "{t},{n1},{n2}")?;
            }
        }
        Command::Simo => {
            let s = scenario()?;
            writeln!(out, "t_s,receiver_id,N_analytic,N_centered,bx,by,bz")?;
            for &t in &s.time_grid().output_times_s {
                let bary = compose_barycenters(&s, t)?;
                let analytic = solve_simo(&s, &bary)?;
                let centered = solve_centered(&s, t)?;
                for (i, rcv) in s.receivers().iter().enumerate() {
                    let b = bary.position(i);
                    writeln!(
                        out,
                        "{t},{},{},{},{},{},{}",
                        rcv.id,
                        analytic.final_cumulative(i),
                        centered.final_cumulative(i),
                        b.x,
                        b.y,
                        b.z
                    )?;
                }
            }
        }
        Command::Pbs => {
            let s = scenario()?;
            let ensemble = run_ensemble(&s)?;
            let stats = ensemble.stats(&s);
            let mut summary = std::io::stderr().lock();
            for (ti, &t) in stats.output_times.iter().enumerate() {
                for r in &stats.receivers {
                    writeln!(summary, "t={t} s  {}: mean={} std={}", r.receiver_id, r.mean[ti], r.std[ti])?;
                }
            }
            writeln!(out, "trial,receiver_id,time_s,x_um,y_um,z_um")?;
            for log in &ensemble.logs {
                for e in &log.events {
                    let id = &s.receivers()[e.receiver_index].id;
                    writeln!(
                        out,
                        "{},{id},{},{},{},{}",
                        log.trial, e.time, e.position.x, e.position.y, e.position.z
                    )?;
                }
            }
        }
        Command::Sweep { param, fixed, values } => {
            let s = scenario()?;
            let parameter = match param.as_str() {
                "omega" => SweepParameter::OmegaDeg { center_distance_um: *fixed },
                "distance" => SweepParameter::CenterDistanceUm { omega_deg: *fixed },
                "alpha" => SweepParameter::AlphaDeg { tx_distance_um: *fixed },
                other => bail!("unknown sweep parameter `{other}` (expected omega|distance|alpha)"),
            };
            let spec = SweepSpec { base: s.into_scenario(), parameter, values: values.clone() };
            let rows = run_sweep(&spec)?;
            match &cli.out {
                Some(path) => emit_csv(&rows, path)?,
                None => write_csv(&rows, &mut out)?,
            }
        }
        Command::Compare => {
            let s = scenario()?;
            let t_eval = *s.time_grid().output_times_s.last().context("no output times")?;
            let rows = compare_scenario(&s, t_eval)?;
            write_csv(&rows, &mut out)?;
        }
    }
    Ok(())
}

fn apply_overrides(scenario: &mut Scenario, cli: &Cli) {
    let pbs = scenario.pbs.get_or_insert(PbsParams { dt_s: DT_PBS_DESK, trials: 20, seed: 1 });
    if let Some(seed) = cli.seed {
        pbs.seed = seed;
    }
    if let Some(trials) = cli.trials {
        pbs.trials = trials;
    }
    if let Some(dt) = cli.dt_pbs {
        pbs.dt_s = dt;
    }
    if cli.paper_fidelity {
        pbs.dt_s = DT_PBS_PAPER;
        eprintln!(
            "warning: paper-fidelity PBS step ({DT_PBS_PAPER} s) is ~100x slower than the desk-scale default ({DT_PBS_DESK} s)"
        );
    }
    if let Some(dt) = cli.dt_solver {
        scenario.time_grid.dt_solver_s = dt;
    }
}
