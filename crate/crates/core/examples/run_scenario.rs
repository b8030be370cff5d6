//! Runs a bundled scenario programmatically and lists the files it wrote.

use hjlab::scenario::{bundled, run_scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "burgers-shock".into());
    let text = bundled(&name).ok_or_else(|| format!("no bundled scenario {name:?}"))?;
    let cfg = ScenarioConfig::from_toml(text)?;
    let out = std::env::temp_dir().join(format!("hjlab-{name}"));
    let outcome = run_scenario(&cfg, std::path::Path::new("."), Some(&out))?;
    for r in &outcome.ordering {
        println!(
            "t = {}: ordering pass {} (max violation {:.2e})",
            r.t, r.pass, r.max_violation
        );
    }
    for s in &outcome.entropy {
        println!(
            "t = {}: entropy {} of {} kinks fail",
            s.t,
            s.failures,
            s.reports.len()
        );
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
