//! Rate-mode agents driven by the same eleven rates as the ODE, stepped one
//! tick at a time.
//!
//!     cargo run --example abm_rate

use wormbench::abm::{RateConfig, World};
use wormbench::EpidemicParams;

fn main() -> wormbench::Result<()> {
    let params = EpidemicParams {
        lambda_recruit: 1.0,
        beta_contact: 0.002,
        tau_fail: 0.002,
        omega_kill: 0.01,
        theta_incubate: 0.2,
        nu_recover: 0.08,
        phi_wane: 0.01,
        rho_vaccinate: 0.005,
        xi_vax_wane: 0.01,
        sigma_density: 0.5,
        r0_range: 2.0,
    };
    let config = RateConfig {
        params,
        n_nodes: 400,
        initial_infected: 20,
        bounds: Default::default(),
        seed: 11,
    };
    let mut world = World::setup(config)?;
    for _ in 0..100 {
        let c = world.step();
        if c.tick % 10 == 0 {
            println!(
                "tick {:>3}: S {:>3} E {:>3} I {:>3} R {:>3} V {:>3} dead {:>3}",
                c.tick, c.s, c.e, c.i, c.r, c.v, c.dead
            );
        }
    }
    let c = world.counts();
    println!(
        "{} initial + {} recruits = {} nodes accounted for",
        world.initial_nodes(),
        c.recruits,
        c.compartments().iter().sum::<u64>()
    );
    Ok(())
}
