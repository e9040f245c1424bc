//! Parses a scenario file from a string and runs each scenario in-process.

use std::path::Path;

use bergzyg::config::parse_config;
use bergzyg::harness::run_scenario;

const CONFIG: &str = "
seed = 11

# (1-|z|)^2 dA against the power weight alpha = 1 with p < q: the
# characteristic grows like (1-|a|)^{-2}.
[scenario.growing]
weight = power alpha=1
measure.component = area weight=power:alpha=2
p = 1
q = 2
levels = 12
expect.bounded = false

[scenario.point-mass]
weight = power alpha=0
measure.component = atom re=0.5 im=0.25 mass=2
p = 2
levels = 10
expect.vanishing = true

[scenario.zoo]
weight = loginvsq-regularized
scale = logpow beta=-1
theorem = class-checks
";

fn main() -> bergzyg::Result<()> {
    let cfg = parse_config(CONFIG, Path::new("."))?;
    for s in &cfg.scenarios {
        let out = run_scenario(s);
        println!("{}", out.summary.to_line());
        if let Some(csv) = out.csv {
            println!("  csv: {} rows", csv.lines().count() - 1);
        }
    }
    Ok(())
}
