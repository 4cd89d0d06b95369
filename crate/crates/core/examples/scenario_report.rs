//! Runs a named scenario through the library entry point instead of the
//! binary, with a configuration written inline.

use fracphase::scenario::{run, Scenario, ScenarioName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("fracphase-scenario-example");
    let mut scenario = Scenario::new(ScenarioName::Fig2b);
    scenario.apply_config("cycles = 3\nsamples = 801\n# output directory\n")?;
    scenario.set("out", out.to_str().unwrap_or("out"))?;
    let report = run(&scenario)?;
    print!("{}", report.render());
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
