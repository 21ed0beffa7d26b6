use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use steane_grid::code::CodeDefinition;
use steane_grid::noise::SwapNoise;
use steane_grid::sweep::{self, Format, SweepConfig};
use steane_grid::verify::{enumerate_faults, Target};
use steane_grid::{circuit_file, Error, Result};

#[derive(Parser)]
#[command(name = "ftqec-grid-sim", version, about = "Fault-tolerant [[7,1,3]] encoding and error-correction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep over physical error rates.
    Run(Box<RunArgs>),
    /// Exhaustive single-fault check of a circuit file; exit status 0 iff fault-tolerant.
    Ftverify(VerifyArgs),
}

/// Every flag may also come from `--config` as `key=value`; flags win.
#[derive(Args, Default)]
struct RunArgs {
    /// key=value file using the long flag names as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// enc-fb, enc-gotorl-fb, enc-gotorl-steane, bare-fb, bare-gotorl, hybrid-fb or hybrid-steane.
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long)]
    pmin: Option<String>,
    #[arg(long)]
    pmax: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Comma-separated p values; replaces the log grid.
    #[arg(long)]
    plist: Option<String>,
    #[arg(long)]
    shots: Option<String>,
    /// trivial, set1, set2, f1s2, s0z or none.
    #[arg(long)]
    policy: Option<String>,
    /// s2 or f1s2.
    #[arg(long)]
    decoder: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Verified 8-qubit preparation replacing the shipped one.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// decomposed or atomic.
    #[arg(long = "swap-noise")]
    swap_noise: Option<String>,
    /// frame (default) or tableau.
    #[arg(long)]
    engine: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit in the plain-text format.
    circuit: PathBuf,
    #[arg(long, default_value = "steane")]
    code: String,
    /// zero, plus or ec.
    #[arg(long, default_value = "zero")]
    state: String,
    /// List every fault, not only the harmful ones.
    #[arg(long)]
    all: bool,
    #[arg(long = "swap-noise", default_value = "decomposed")]
    swap_noise: String,
}

fn merged(args: &RunArgs) -> Result<BTreeMap<String, String>> {
    let mut map = match &args.config {
        Some(path) => sweep::parse_key_values(&std::fs::read_to_string(path)?)?,
        None => BTreeMap::new(),
    };
    let cli: [(&str, Option<String>); 14] = [
        ("protocol", args.protocol.clone()),
        ("pmin", args.pmin.clone()),
        ("pmax", args.pmax.clone()),
        ("points", args.points.clone()),
        ("plist", args.plist.clone()),
        ("shots", args.shots.clone()),
        ("policy", args.policy.clone()),
        ("decoder", args.decoder.clone()),
        ("seed", args.seed.clone()),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
        ("format", args.format.clone()),
        ("circuit", args.circuit.as_ref().map(|p| p.display().to_string())),
        ("swap-noise", args.swap_noise.clone()),
        ("engine", args.engine.clone()),
    ];
    // a grid on the command line replaces a list from the file and vice versa
    if args.plist.is_some() {
        map.remove("pmin");
        map.remove("pmax");
        map.remove("points");
    } else if args.pmin.is_some() || args.pmax.is_some() || args.points.is_some() {
        map.remove("plist");
    }
    for (k, v) in cli {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    }
    let known = ["protocol", "pmin", "pmax", "points", "plist", "shots", "policy", "decoder", "seed", "out", "format", "circuit", "swap-noise", "engine"];
    if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown key {k:?}")));
    }
    Ok(map)
}

fn sweep_config(map: &BTreeMap<String, String>) -> Result<SweepConfig> {
    let need = |k: &str| map.get(k).ok_or_else(|| Error::Config(format!("missing --{k}")));
    let num = |k: &str| -> Result<u64> { need(k)?.parse().map_err(|_| Error::Config(format!("--{k} must be a non-negative integer"))) };
    let real = |k: &str| -> Result<f64> { need(k)?.parse().map_err(|_| Error::Config(format!("--{k} must be a number"))) };
    let ps = match map.get("plist") {
        Some(list) => sweep::parse_plist(list)?,
        None => sweep::log_grid(real("pmin")?, real("pmax")?, num("points")? as usize)?,
    };
    let policy = match map.get("policy") {
        Some(p) => p.parse()?,
        None => steane_grid::protocol::Policy::Trivial,
    };
    let seed = if map.contains_key("seed") { num("seed")? } else { 0 };
    let mut c = SweepConfig::new(need("protocol")?.parse()?, policy, ps, num("shots")?, seed);
    if let Some(d) = map.get("decoder") {
        c.decoder = d.parse()?;
    }
    if let Some(s) = map.get("swap-noise") {
        c.swap_noise = s.parse()?;
    }
    if let Some(e) = map.get("engine") {
        c.engine = e.parse()?;
    }
    if let Some(f) = map.get("format") {
        c.format = f.parse()?;
    }
    c.circuit = map.get("circuit").map(PathBuf::from);
    c.out = map.get("out").map(PathBuf::from);
    if map.get("format").is_none() && c.out.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "json") {
        c.format = Format::Json;
    }
    Ok(c)
}

fn run(args: &RunArgs) -> Result<ExitCode> {
    let config = sweep_config(&merged(args)?)?;
    let result = sweep::run_sweep(&config)?;
    let text = result.render(config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn ftverify(args: &VerifyArgs) -> Result<ExitCode> {
    let code = CodeDefinition::by_name(&args.code)?;
    let target: Target = args.state.parse()?;
    let swap: SwapNoise = args.swap_noise.parse()?;
    let circuit = circuit_file::load(&args.circuit)?;
    let data = circuit.data_qubits();
    if data.len() != code.n {
        return Err(Error::CircuitCheck(format!("{} data qubits declared, the code has {}", data.len(), code.n)));
    }
    let report = enumerate_faults(&circuit, &code, &data, target, swap)?;
    print!("{}", report.to_tsv(args.all, circuit.num_qubits()));
    let ft = report.is_fault_tolerant();
    eprintln!(
        "{} fault cases, {} harmful, {} unflagged: {}",
        report.records.len(),
        report.harmful().count(),
        report.violations().count(),
        if ft { "fault-tolerant" } else { "NOT fault-tolerant" }
    );
    Ok(if ft { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run(a),
        Command::Ftverify(a) => ftverify(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
