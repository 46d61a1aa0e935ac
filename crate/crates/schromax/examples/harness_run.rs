//! Run a registered experiment through the harness into a temporary directory.

use schromax::harness::{run_experiment, ExperimentConfig, EXPERIMENTS};

fn main() -> schromax::Result<()> {
    for e in EXPERIMENTS {
        println!("{:<24} {}", e.name, e.description);
    }
    let out = std::env::temp_dir().join(format!("schromax-example-{}", std::process::id()));
    let cfg = ExperimentConfig::new("convergence-probe");
    let manifest = run_experiment(&cfg, &out, true, Some(2))?;
    println!("\n{} pass = {} in {:.2} s", manifest.experiment, manifest.pass, manifest.seconds);
    for (name, hash) in &manifest.files {
        println!("  {name:<20} {}", &hash[..16]);
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}
