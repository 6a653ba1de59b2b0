mod config;
mod output;
mod pipeline;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use config::{Overrides, RunConfig};
use output::write_json;
use verify::Check;

#[derive(Parser)]
#[command(name = "floerlab", version, about = "Filtered Floer complexes of Morse models on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the PFH and HF complexes and write them as JSON.
    Build(Common),
    /// Run the invariant suite and write verify.json.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Also validate this complex document.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Write spectral and rank tables from an existing build.
    Report(Common),
    /// Check the branched-cover index bookkeeping and discriminant windings.
    Symprod {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = floerlab::symprod::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = floerlab::symprod::DEFAULT_RADIUS)]
        radius: f64,
    },
}

#[derive(Args)]
struct Common {
    /// TOML config with a top-level `schema = 1`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Novikov periods to materialise.
    #[arg(long)]
    window: Option<usize>,
    /// Comma separated subset of json,csv.
    #[arg(long)]
    formats: Option<String>,
    #[arg(long)]
    no_plots: bool,
    #[arg(long)]
    genus: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    /// Repeatable; rationals such as 1/10.
    #[arg(long = "eps")]
    epsilons: Vec<String>,
    /// Repeatable; one of '+', '-', 'm' per circle.
    #[arg(long = "basepoint")]
    basepoints: Vec<String>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let o = Overrides {
            genus: self.genus,
            k: self.k,
            epsilons: self.epsilons.clone(),
            window: self.window,
            basepoints: self.basepoints.clone(),
            out: self.out.clone(),
            formats: self.formats.clone(),
            no_plots: self.no_plots,
            seed: self.seed,
        };
        RunConfig::load(self.config.as_deref(), &o)
    }
}

fn summarize(checks: &[Check]) -> bool {
    for c in checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {} ({} checked)", c.name, c.detail, c.checked);
        for w in &c.witnesses {
            println!("       witness: {}", w.join(" -> "));
        }
    }
    checks.iter().all(|c| c.pass)
}

fn write_report(cfg: &RunConfig, name: &str, checks: &[Check], pass: bool) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)?;
    let doc = json!({"pass": pass, "seed": cfg.seed, "checks": serde_json::to_value(checks)?});
    write_json(&cfg.out.join(name), &doc)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build(c) => {
            let cfg = c.load()?;
            for p in pipeline::cmd_build(&cfg)? {
                println!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Report(c) => {
            let cfg = c.load()?;
            for p in pipeline::cmd_report(&cfg)? {
                println!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Verify { common, complex } => {
            let cfg = common.load()?;
            let checks = verify::cmd_verify(&cfg, complex.as_deref())?;
            let pass = summarize(&checks);
            write_report(&cfg, "verify.json", &checks, pass)?;
            Ok(pass)
        }
        Command::Symprod { common, samples, radius } => {
            let cfg = common.load()?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let checks = vec![verify::index_comparison()?, verify::winding(samples, radius, &mut rng)?];
            let pass = summarize(&checks);
            write_report(&cfg, "symprod.json", &checks, pass)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FLOERLAB_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
