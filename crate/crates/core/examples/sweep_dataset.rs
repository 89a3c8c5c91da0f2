//! Build a synthetic dataset from the published widget levels (aligned
//! design, five configurations) and write it next to its manifest.
//!
//!     cargo run --release --example sweep_dataset -- /tmp/sweep.csv

use wormbench::abm::WidgetConfig;
use wormbench::sweep::{published_widget_factors, run_sweep, DesignKind, ExperimentDesign};

fn main() -> wormbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sweep.csv".to_string());
    let mut design = ExperimentDesign::new(
        WidgetConfig::default(),
        published_widget_factors(),
        DesignKind::Aligned,
    );
    design.replicates = 2;
    design.master_seed = 42;

    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = run_sweep(&design, threads)?;
    result.dataset.save(&out)?;
    let manifest = std::path::Path::new(&out).with_extension("manifest.json");
    std::fs::write(&manifest, result.manifest.to_json())
        .map_err(|e| wormbench::Error::io(&manifest, e))?;

    println!(
        "{} rows x {} columns -> {out}",
        result.dataset.n_rows(),
        result.dataset.n_cols()
    );
    for run in &result.manifest.runs {
        println!(
            "run {:>2} config {} seed {:>20} {:?}",
            run.run_id, run.config_id, run.seed, run.factor_values
        );
    }
    Ok(())
}
