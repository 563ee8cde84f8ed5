//! `subolink`: minimum transmit-power ceiling for a suborbital downlink,
//! swept over receiver steering and link distance.
//!
//! Exit codes: 0 success, 1 at least one sweep row failed to converge,
//! 2 config parse/validation error, 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use subolink::scenario::Scenario;
use subolink::sweep::{emit_overlap_table, run_sweep, write_csv, SweepSpec};
use subolink::Error;

#[derive(Parser, Debug)]
#[command(name = "subolink", version, about = "Suborbital downlink power-ceiling solver")]
struct Cli {
    /// Key-value scenario file; omitted keys take the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Receiver steering sweep in direction cosine, as start:stop:n.
    #[arg(long, value_name = "START:STOP:N")]
    sweep_u: Option<String>,

    /// Link distance sweep in meters, as start:stop:n.
    #[arg(long, value_name = "START:STOP:N")]
    sweep_dk: Option<String>,

    /// Cross-check the interference expectation with n Monte Carlo
    /// realizations per row.
    #[arg(long, value_name = "N")]
    mc_check: Option<usize>,

    /// Seed for all stochastic cross-checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Emit the per-shell overlap-gain table instead of a sweep.
    #[arg(long)]
    overlap_table: bool,

    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(spec: &str, flag: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let err = |msg: String| Error::Validation(format!("{flag}: {msg}"));
    if parts.len() != 3 {
        return Err(err(format!("expected start:stop:n, got {spec:?}")));
    }
    let start: f64 = parts[0].parse().map_err(|_| err(format!("bad start {:?}", parts[0])))?;
    let stop: f64 = parts[1].parse().map_err(|_| err(format!("bad stop {:?}", parts[1])))?;
    let n: usize = parts[2].parse().map_err(|_| err(format!("bad count {:?}", parts[2])))?;
    if n == 0 {
        return Err(err("count must be >= 1".into()));
    }
    if n == 1 {
        if stop != start {
            return Err(err("count 1 requires start == stop".into()));
        }
        return Ok(vec![start]);
    }
    if stop <= start {
        return Err(err("need stop > start".into()));
    }
    let step = (stop - start) / (n - 1) as f64;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let scenario = match &cli.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default_scenario(),
    };

    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    };

    if cli.overlap_table {
        emit_overlap_table(&mut out, &scenario, cli.seed)?;
        out.flush()?;
        return Ok(true);
    }

    let steer_grid = match &cli.sweep_u {
        Some(s) => parse_grid(s, "--sweep-u")?,
        None => vec![scenario.rx_steer_u],
    };
    let distance_grid = match &cli.sweep_dk {
        Some(s) => parse_grid(s, "--sweep-dk")?,
        None => vec![scenario.params.sn_distance],
    };
    let spec = SweepSpec {
        scenario,
        steer_grid,
        distance_grid,
        mc_check: cli.mc_check,
        seed: cli.seed,
    };
    let rows = run_sweep(&spec)?;
    write_csv(&mut out, &spec, &rows)?;
    out.flush()?;
    Ok(rows.iter().all(|r| r.converged))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
