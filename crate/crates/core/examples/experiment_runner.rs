//! Running registry experiments from config text, as `cdh run` does.

use cdh::cli::{config, execute, ExperimentConfig, REGISTRY};

fn main() -> cdh::Result<()> {
    for e in &REGISTRY {
        println!("{:<22} {}", e.name, e.description);
    }

    let text = "\
experiment=counterexample_gap
times=1,5,25
";
    let cfg = ExperimentConfig::parse(text)?;
    print!("\neffective config:\n{}", cfg.serialize());

    let dir = std::env::temp_dir().join("cdh-example");
    let artifacts = execute(&cfg, &dir)?;
    for row in &artifacts.summary {
        println!("{} = {} ({})", row.metric, row.value, if row.pass { "pass" } else { "fail" });
    }
    println!("wrote {}", dir.join(&cfg.experiment).display());

    let bad = config::parse_lines("experiment=hotspot\ndim three\n").unwrap_err();
    println!("\n{bad}");
    Ok(())
}
