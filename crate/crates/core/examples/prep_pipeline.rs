//! Profile a sweep dataset, drop the redundant columns it flags, then reduce
//! skew with Yeo-Johnson and standardize.
//!
//!     cargo run --release --example prep_pipeline

use wormbench::abm::WidgetConfig;
use wormbench::dataprep::{prepare, skewness, PrepConfig};
use wormbench::sweep::{published_widget_factors, run_sweep, DesignKind, ExperimentDesign};

fn main() -> wormbench::Result<()> {
    let design = ExperimentDesign::new(
        WidgetConfig::default(),
        published_widget_factors(),
        DesignKind::Aligned,
    );
    let raw = run_sweep(&design, 4)?.dataset;

    let config = PrepConfig {
        ops: None,
        yeo_johnson: vec!["dead".into()],
        standardize: vec!["tick".into(), "susceptible".into()],
        ..PrepConfig::default()
    };
    let out = prepare(std::slice::from_ref(&raw), &config)?;

    println!(
        "high-correlation alerts (|r| >= {}):",
        out.profile.corr_threshold
    );
    for a in out.profile.high_correlation.iter().take(8) {
        println!("  {} ~ {}: {:.3}", a.a, a.b, a.correlation);
    }
    println!(
        "most correlated columns: {:?}",
        out.profile.most_correlated()
    );
    println!("kept columns: {:?}", out.dataset.columns());
    let before = skewness(&raw.column("dead")?);
    let after = skewness(&out.dataset.column("dead")?);
    println!("skewness of `dead`: {before:.3} -> {after:.3}");
    if let Some(pt) = &out.transforms.power {
        println!("fitted lambda {:?}", pt.lambdas);
    }
    Ok(())
}
