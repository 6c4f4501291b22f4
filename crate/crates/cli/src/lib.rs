//! Command-line front end: JSON run configurations in, CSV tables out.
//!
//! Every subcommand is a [`Scenario`] looked up by name in a
//! [`ScenarioRegistry`].

pub mod config;
pub mod error;
pub mod scenario;
pub mod scenarios;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{value_parser, Arg, ArgMatches, Command};

pub use config::{emit_config, load_config, parse_config, RunConfig, ScenarioKind};
pub use error::CliError;
pub use scenario::{NamedTable, Scenario, ScenarioRegistry};
pub use table::{Cell, OutputTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Command-line overrides applied on top of a loaded configuration.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

pub fn build_command(registry: &ScenarioRegistry) -> Command {
    let mut cmd = Command::new("mpjc")
        .version(VERSION)
        .about("Driven nondegenerate multiphoton Jaynes-Cummings simulations")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for s in registry.iter() {
        cmd = cmd.subcommand(
            Command::new(s.name())
                .about(s.about())
                .arg(
                    Arg::new("config")
                        .long("config")
                        .value_name("FILE")
                        .required(true)
                        .value_parser(value_parser!(PathBuf))
                        .help("JSON run configuration"),
                )
                .arg(
                    Arg::new("out")
                        .long("out")
                        .value_name("DIR")
                        .value_parser(value_parser!(PathBuf))
                        .help("Output directory (defaults to output_dir in the config)"),
                )
                .arg(
                    Arg::new("jobs")
                        .long("jobs")
                        .value_name("N")
                        .value_parser(value_parser!(usize))
                        .help("Worker threads (default: logical cores)"),
                )
                .arg(
                    Arg::new("seed")
                        .long("seed")
                        .value_name("S")
                        .value_parser(value_parser!(u64))
                        .help("Base seed, overriding ensemble.base_seed"),
                ),
        );
    }
    cmd
}

fn overrides_from(m: &ArgMatches) -> Overrides {
    Overrides {
        out: m.get_one::<PathBuf>("out").cloned(),
        jobs: m.get_one::<usize>("jobs").copied(),
        seed: m.get_one::<u64>("seed").copied(),
    }
}

/// Parses `argv`, runs the selected scenario and returns the written files.
pub fn execute<I, T>(registry: &ScenarioRegistry, argv: I) -> anyhow::Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = build_command(registry).try_get_matches_from(argv)?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let scenario = registry.get(name).expect("subcommands come from the registry");
    let path = sub.get_one::<PathBuf>("config").expect("required");
    let cfg = load_config(path)?;
    Ok(run_scenario(scenario, cfg, &overrides_from(sub))?)
}

/// Runs `scenario` on `cfg` and writes one CSV per output table.
pub fn run_scenario(scenario: &dyn Scenario, mut cfg: RunConfig, ov: &Overrides) -> Result<Vec<PathBuf>, CliError> {
    if cfg.scenario != scenario.kind() {
        return Err(CliError::Config(format!(
            "config is for scenario {}, not {}",
            cfg.scenario.name(),
            scenario.name()
        )));
    }
    if let (Some(seed), Some(ens)) = (ov.seed, cfg.ensemble.as_mut()) {
        ens.base_seed = seed;
    }
    let out_dir = ov
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set output_dir".into()))?;
    cfg.output_dir = None;
    cfg.validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ov.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let tables = pool.install(|| scenario.run(&cfg))?;
    write_tables(&out_dir, &cfg, scenario, tables)
}

pub fn write_tables(
    dir: &Path,
    cfg: &RunConfig,
    scenario: &dyn Scenario,
    tables: Vec<NamedTable>,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let echo = serde_json::to_string(cfg).expect("run config serializes");
    let seed = match (&cfg.ensemble, scenario.stochastic()) {
        (Some(e), true) => e.base_seed.to_string(),
        _ => "none".to_string(),
    };
    let mut written = Vec::new();
    for NamedTable { stem, mut table } in tables {
        table.prepend_metadata([
            ("program".to_string(), format!("mpjc {VERSION}")),
            ("scenario".to_string(), scenario.name().to_string()),
            ("seed".to_string(), seed.clone()),
            ("config".to_string(), echo.clone()),
        ]);
        let path = dir.join(format!("{stem}.csv"));
        fs::write(&path, table.to_csv())?;
        written.push(path);
    }
    Ok(written)
}
