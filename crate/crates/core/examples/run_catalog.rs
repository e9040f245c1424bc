//! Runs the built-in scenario files whose name contains the first argument
//! and prints one summary line per scenario.
//!
//! `cargo run --release --example run_catalog -- atom`

use bergzyg::harness::{catalog, exit_code, run_config};

fn main() -> bergzyg::Result<()> {
    let filter = std::env::args().nth(1);
    let out = std::env::temp_dir().join("bergzyg-catalog");
    let mut all = Vec::new();
    for entry in catalog(filter.as_deref()) {
        println!("# {} ({})", entry.name, entry.description);
        let cfg = entry.parse()?;
        let summaries = run_config(&cfg, &out.join(entry.name))?;
        for s in &summaries {
            println!("{}", s.to_line());
        }
        all.extend(summaries);
    }
    println!("# {} scenarios, exit code {}, outputs under {}", all.len(), exit_code(&all), out.display());
    Ok(())
}
