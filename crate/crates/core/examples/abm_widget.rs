//! One widget-mode run: fixed sensors on the small grid, worm seeded on ten
//! nodes, then a short mobility comparison.
//!
//!     cargo run --example abm_widget

use wormbench::abm::{self, WidgetConfig};

fn main() -> wormbench::Result<()> {
    let config = WidgetConfig {
        infectiousness_pct: 40.0,
        seed: 7,
        ..WidgetConfig::default()
    };
    let trace = abm::run(config.clone(), 150)?;
    println!("tick   S   E   I   R   V dead");
    for row in trace.rows.iter().step_by(15) {
        println!(
            "{:>4} {:>3} {:>3} {:>3} {:>3} {:>3} {:>4}",
            row.tick, row.s, row.e, row.i, row.r, row.v, row.dead
        );
    }
    println!("peak infected (static): {}", trace.peak_infected());

    let mobile = abm::run(
        WidgetConfig {
            mobility: true,
            ..config
        },
        150,
    )?;
    println!("peak infected (mobile): {}", mobile.peak_infected());
    Ok(())
}
