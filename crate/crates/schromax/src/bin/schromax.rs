use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use schromax::counterexample::{witness_series, default_schedule, growth_exponent, BlowupParams, WitnessOptions};
use schromax::harness::{lookup, run_experiment, ExperimentConfig, EXPERIMENTS};
use schromax::output::{num, Table};
use schromax::sequences::{lr_partial_sum, weak_lr_classify, TimeSequence};
use schromax::special::{bessel_j, remainder_kernel, BesselOrder};
use schromax::Result;

#[derive(Parser)]
#[command(name = "schromax", version, about = "Fractional Schrödinger maximal function experiments")]
struct Cli {
    /// List the registered experiments.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a time sequence against ℓ^r or weak ℓ^r.
    ClassifySeq(SeqArgs),
    /// Build blow-up witnesses and fit their growth exponent.
    Counterexample(BlowupArgs),
    /// Tabulate J_ν and the remainder kernel K_ν.
    BesselTable(BesselArgs),
    #[command(external_subcommand)]
    Experiment(Vec<String>),
}

#[derive(Clone, Copy, ValueEnum)]
enum Gen {
    Power,
    Geometric,
    Log,
}

#[derive(Args)]
struct SeqArgs {
    #[arg(long, value_enum)]
    gen: Gen,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    shift: f64,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long)]
    r: f64,
    /// Weak-ℓ^r constants instead of ℓ^r partial sums.
    #[arg(long)]
    weak: bool,
    #[arg(long, default_value_t = 16)]
    depth: u32,
    #[arg(long, default_value_t = 4096)]
    terms: usize,
}

#[derive(Args)]
struct BlowupArgs {
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0.02)]
    eps: f64,
    #[arg(long, default_value_t = 6)]
    octaves: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, default_value_t = 20.0)]
    r_max: f64,
    #[arg(long, default_value_t = 0.25)]
    step: f64,
}

#[derive(Parser)]
#[command(name = "schromax <experiment>")]
struct RunArgs {
    name: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
    #[arg(long)]
    workers: Option<usize>,
}

fn classify(args: &SeqArgs) -> Result<serde_json::Value> {
    let seq = match args.gen {
        Gen::Power => TimeSequence::power_shifted(args.alpha, args.shift)?,
        Gen::Geometric => TimeSequence::geometric(args.ratio)?,
        Gen::Log => TimeSequence::logarithmic()?,
    };
    if args.weak {
        let v = weak_lr_classify(&seq, args.r, args.depth)?;
        Ok(json!({ "r": args.r, "depths": v.depths, "constants": v.constants, "stable": v.stable }))
    } else {
        let s = lr_partial_sum(&seq, args.r, args.terms);
        Ok(json!({ "r": args.r, "partial_sums": [s.sum, s.sum_double, s.sum_quadruple], "divergent": s.divergent }))
    }
}

fn counterexample(args: &BlowupArgs) -> Result<bool> {
    if args.out.exists() && !args.force && fs::read_dir(&args.out)?.next().is_some() {
        return Err(schromax::Error::OutputExists(args.out.display().to_string()));
    }
    let p = BlowupParams::new(args.a, args.s, args.n, args.eps)?;
    let series = witness_series(&default_schedule(args.octaves), &p, &WitnessOptions::default())?;
    let fit = growth_exponent(&series)?;
    fs::create_dir_all(&args.out)?;
    let mut t = Table::new("witnesses", &["j", "M", "b", "lambda", "rho", "hs_norm", "max_norm", "ratio"]);
    for w in &series {
        t.push(vec![w.j.to_string(), num(w.m), num(w.b), num(w.lambda), num(w.rho), num(w.hs_norm), num(w.max_norm), num(w.ratio)]);
    }
    t.write(&args.out)?;
    let summary = json!({ "fit": fit, "expected_slope": p.expected_slope() });
    fs::write(args.out.join("fit.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(true)
}

fn bessel_table(args: &BesselArgs) -> Result<()> {
    let nu = BesselOrder::from_f64(args.nu)?;
    if !(args.step > 0.0 && args.r_max > 0.0) {
        return Err(schromax::Error::InvalidParameter("step and r-max must be positive".into()));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(std::io::stdout());
    w.write_record(["r", "j_nu", "k_nu"])?;
    let count = (args.r_max / args.step).floor() as usize;
    for i in 1..=count {
        let r = i as f64 * args.step;
        w.write_record([num(r), num(bessel_j(nu, r)?), num(remainder_kernel(nu, r)?)])?;
    }
    w.flush()?;
    Ok(())
}

fn experiment(argv: Vec<String>) -> Result<bool> {
    let args = match RunArgs::try_parse_from(std::iter::once("schromax".to_string()).chain(argv)) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return Err(schromax::Error::InvalidParameter("bad arguments".into()));
        }
    };
    lookup(&args.name)?;
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json(&fs::read_to_string(path)?)?,
        None => ExperimentConfig::new(&args.name),
    };
    cfg.experiment = args.name.clone();
    let manifest = run_experiment(&cfg, &args.out, args.force, args.workers)?;
    println!("{} {} ({:.1} s)", manifest.experiment, if manifest.pass { "PASS" } else { "FAIL" }, manifest.seconds);
    Ok(manifest.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for e in EXPERIMENTS {
            println!("{:<24} criterion {:>2}  {}", e.name, e.criterion, e.description);
        }
        return ExitCode::SUCCESS;
    }
    let result = match cli.command {
        None => {
            eprintln!("no command given; see --help or --list");
            return ExitCode::from(1);
        }
        Some(Command::ClassifySeq(args)) => classify(&args).map(|v| {
            println!("{v}");
            true
        }),
        Some(Command::Counterexample(args)) => counterexample(&args),
        Some(Command::BesselTable(args)) => bessel_table(&args).map(|_| true),
        Some(Command::Experiment(argv)) => experiment(argv),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
