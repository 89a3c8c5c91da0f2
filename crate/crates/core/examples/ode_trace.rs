//! Integrate the SEIRV equations and print a coarse view of the trace.
//!
//!     cargo run --example ode_trace

use wormbench::ode::{integrate_rk4, OdeRun};
use wormbench::{CompartmentState, EpidemicParams};

fn main() -> wormbench::Result<()> {
    let params = EpidemicParams {
        lambda_recruit: 0.5,
        beta_contact: 0.002,
        tau_fail: 0.005,
        omega_kill: 0.01,
        theta_incubate: 0.2,
        nu_recover: 0.1,
        phi_wane: 0.02,
        rho_vaccinate: 0.01,
        xi_vax_wane: 0.01,
        sigma_density: 0.5,
        r0_range: 2.0,
    };
    println!(
        "effective contact rate {:.6}",
        params.effective_contact_rate()
    );

    let init = CompartmentState::new(190.0, 0.0, 10.0, 0.0, 0.0);
    let trace = integrate_rk4(&OdeRun::new(params, init, 0.01, 20_000))?;

    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "t", "S", "E", "I", "R", "V"
    );
    for row in trace.rows.iter().step_by(2_000) {
        println!(
            "{:>8.1} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}",
            row.t, row.s, row.e, row.i, row.r, row.v
        );
    }
    let last = trace.last().expect("trace has rows");
    println!("final population {:.3}", last.total());
    Ok(())
}
