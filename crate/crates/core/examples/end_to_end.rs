//! Sweep, prepare, benchmark and report in one process. Writes the
//! comparison table and both charts into the given directory.
//!
//!     cargo run --release --example end_to_end -- /tmp/wormbench-demo

use std::path::PathBuf;

use wormbench::abm::WidgetConfig;
use wormbench::dataprep::{prepare, PrepConfig};
use wormbench::regress::{benchmark, BenchConfig};
use wormbench::report::{render, to_markdown, Format};
use wormbench::sweep::{published_widget_factors, run_sweep, DesignKind, ExperimentDesign};

fn main() -> wormbench::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "wormbench-demo".to_string()),
    );
    std::fs::create_dir_all(&dir).map_err(|e| wormbench::Error::io(&dir, e))?;

    let base = WidgetConfig {
        n_nodes: 200,
        ..WidgetConfig::default()
    };
    let factors = published_widget_factors()
        .into_iter()
        .filter(|f| f.name != "n_nodes")
        .map(|mut f| {
            f.levels.truncate(3);
            f
        })
        .collect();
    let design = ExperimentDesign::new(base, factors, DesignKind::Aligned);
    let raw = run_sweep(&design, 4)?.dataset;
    println!("sweep: {} rows", raw.n_rows());

    let prepared = prepare(&[raw], &PrepConfig::default())?.dataset;
    println!("features after prep: {:?}", prepared.columns());

    let reports = benchmark(&prepared, &BenchConfig::new("recovered"))?;
    println!("{}", to_markdown(&reports));

    render(&reports, Format::Csv, &dir.join("results.csv"))?;
    render(&reports, Format::Svg, &dir.join("results"))?;
    println!(
        "wrote results.csv, results_r2.svg, results_time.svg to {}",
        dir.display()
    );
    Ok(())
}
