use std::f64::consts::TAU;
use std::io::Write;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use super::{BinnedIndex, GridBounds, RateConfig, SimConfig, WidgetConfig};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "tick,susceptible,exposed,infected,recovered,vaccinated,dead";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Compartment {
    S,
    E,
    I,
    R,
    V,
    Dead,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeAgent {
    pub id: usize,
    pub position: (f64, f64),
    pub compartment: Compartment,
    /// Ticks left in the current compartment (widget mode only).
    pub timer: u32,
    /// Tick at which the agent entered its current compartment.
    pub entered: u64,
}

impl NodeAgent {
    pub fn new(id: usize, position: (f64, f64), compartment: Compartment, timer: u32) -> Self {
        Self {
            id,
            position,
            compartment,
            timer,
            entered: 0,
        }
    }

    fn enter(&mut self, c: Compartment, timer: u32, tick: u64) {
        self.compartment = c;
        self.timer = timer;
        self.entered = tick;
    }
}

/// Compartment counts after one tick. `dead` and `recruits` are cumulative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TickCounts {
    pub tick: u64,
    pub s: u64,
    pub e: u64,
    pub i: u64,
    pub r: u64,
    pub v: u64,
    pub dead: u64,
    pub recruits: u64,
}

impl TickCounts {
    pub fn alive(&self) -> u64 {
        self.s + self.e + self.i + self.r + self.v
    }

    /// The six values written after `tick` in CSV output.
    pub fn compartments(&self) -> [u64; 6] {
        [self.s, self.e, self.i, self.r, self.v, self.dead]
    }
}

/// One row per simulated tick (tick 1 onwards).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub initial_nodes: u64,
    pub rows: Vec<TickCounts>,
}

impl Trace {
    pub fn peak_infected(&self) -> u64 {
        self.rows.iter().map(|r| r.i).max().unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.tick, r.s, r.e, r.i, r.r, r.v, r.dead
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

#[derive(Debug, Clone)]
pub struct World {
    config: SimConfig,
    agents: Vec<NodeAgent>,
    rng: ChaCha8Rng,
    tick: u64,
    initial_nodes: u64,
    dead: u64,
    recruits: u64,
}

fn random_position(rng: &mut ChaCha8Rng, b: &GridBounds) -> (f64, f64) {
    let x = rng.random_range(b.x_min as f64..=b.x_max as f64);
    let y = rng.random_range(b.y_min as f64..=b.y_max as f64);
    (x, y)
}

fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    let v = if v > hi {
        2.0 * hi - v
    } else if v < lo {
        2.0 * lo - v
    } else {
        v
    };
    v.clamp(lo, hi)
}

impl World {
    /// Seeded placement and initial compartment assignment.
    pub fn setup(config: impl Into<SimConfig>) -> Result<Self> {
        let config = config.into();
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
        let (n, initial_infected, bounds) = match &config {
            SimConfig::Widget(c) => (c.n_nodes, c.initial_infected, c.bounds),
            SimConfig::Rate(c) => (c.n_nodes, c.initial_infected, c.bounds),
        };
        let mut agents: Vec<NodeAgent> = (0..n)
            .map(|id| NodeAgent::new(id, random_position(&mut rng, &bounds), Compartment::S, 0))
            .collect();
        let mut infected = sample(&mut rng, n, initial_infected).into_vec();
        infected.sort_unstable();
        let worm_duration = match &config {
            SimConfig::Widget(c) => c.worm_duration_ticks,
            SimConfig::Rate(_) => 0,
        };
        for &id in &infected {
            agents[id].enter(Compartment::I, worm_duration, 0);
        }
        if let SimConfig::Widget(c) = &config {
            let p = c.chance_vaccinate_pct / 100.0;
            for a in agents
                .iter_mut()
                .filter(|a| a.compartment == Compartment::S)
            {
                if rng.random::<f64>() < p {
                    a.enter(Compartment::V, 0, 0);
                }
            }
        }
        Ok(Self {
            config,
            agents,
            rng,
            tick: 0,
            initial_nodes: n as u64,
            dead: 0,
            recruits: 0,
        })
    }

    /// A world with hand-placed agents. Agent ids are reassigned to their
    /// positions in `agents`; each agent's `entered` tick is reset to 0.
    pub fn from_agents(config: impl Into<SimConfig>, agents: Vec<NodeAgent>) -> Result<Self> {
        let config = config.into();
        let bounds = match &config {
            SimConfig::Widget(c) => c.bounds,
            SimConfig::Rate(c) => c.bounds,
        };
        bounds.validate()?;
        let mut agents = agents;
        let mut dead = 0;
        for (id, a) in agents.iter_mut().enumerate() {
            if !bounds.contains(a.position) {
                return Err(Error::config(
                    "position",
                    format!("agent {id} lies outside the bounds"),
                ));
            }
            a.id = id;
            a.entered = 0;
            if a.compartment == Compartment::Dead {
                dead += 1;
            }
        }
        let rng = ChaCha8Rng::seed_from_u64(config.seed());
        Ok(Self {
            initial_nodes: agents.len() as u64,
            config,
            agents,
            rng,
            tick: 0,
            dead,
            recruits: 0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn agents(&self) -> &[NodeAgent] {
        &self.agents
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn initial_nodes(&self) -> u64 {
        self.initial_nodes
    }

    pub fn counts(&self) -> TickCounts {
        let mut c = TickCounts {
            tick: self.tick,
            dead: self.dead,
            recruits: self.recruits,
            ..Default::default()
        };
        for a in &self.agents {
            match a.compartment {
                Compartment::S => c.s += 1,
                Compartment::E => c.e += 1,
                Compartment::I => c.i += 1,
                Compartment::R => c.r += 1,
                Compartment::V => c.v += 1,
                Compartment::Dead => {}
            }
        }
        c
    }

    /// Advance one tick with the update rule matching the configured mode.
    pub fn step(&mut self) -> TickCounts {
        match self.config.clone() {
            SimConfig::Widget(c) => self.step_widget(&c),
            SimConfig::Rate(c) => self.step_rate(&c),
        }
    }

    /// Widget-mode tick. Phases run in this order:
    /// movement, infection, E → I progression, I resolution, R → S waning.
    ///
    /// Infection uses the infected set after movement; each infected neighbor
    /// within the transmission radius gets an independent trial. Agents that
    /// entered a compartment during this tick are not advanced again until the
    /// next one.
    fn step_widget(&mut self, c: &WidgetConfig) -> TickCounts {
        self.tick += 1;
        let tick = self.tick;

        if c.mobility {
            let (x0, x1) = (c.bounds.x_min as f64, c.bounds.x_max as f64);
            let (y0, y1) = (c.bounds.y_min as f64, c.bounds.y_max as f64);
            for a in self
                .agents
                .iter_mut()
                .filter(|a| a.compartment != Compartment::Dead)
            {
                let heading = self.rng.random_range(0.0..TAU);
                a.position.0 = reflect(a.position.0 + heading.cos(), x0, x1);
                a.position.1 = reflect(a.position.1 + heading.sin(), y0, y1);
            }
        }

        let infected: Vec<usize> = self
            .agents
            .iter()
            .filter(|a| a.compartment == Compartment::I)
            .map(|a| a.id)
            .collect();
        let p_transmit = c.infectiousness_pct / 100.0;
        if !infected.is_empty() && p_transmit > 0.0 {
            let points: Vec<_> = infected
                .iter()
                .map(|&id| self.agents[id].position)
                .collect();
            let index = BinnedIndex::build(&points, c.transmission_radius);
            for a in self
                .agents
                .iter_mut()
                .filter(|a| a.compartment == Compartment::S)
            {
                let contacts = index.within(a.position, c.transmission_radius).len();
                if (0..contacts).any(|_| self.rng.random::<f64>() < p_transmit) {
                    a.enter(Compartment::E, c.exposure_duration_ticks, tick);
                }
            }
        }

        for a in self.agents.iter_mut() {
            if a.compartment == Compartment::E && a.entered < tick {
                a.timer = a.timer.saturating_sub(1);
                if a.timer == 0 {
                    a.enter(Compartment::I, c.worm_duration_ticks, tick);
                }
            }
        }

        let p_recover = c.chance_recover_pct / 100.0;
        for a in self.agents.iter_mut() {
            if a.compartment == Compartment::I && a.entered < tick {
                a.timer = a.timer.saturating_sub(1);
                if a.timer == 0 {
                    if self.rng.random::<f64>() < p_recover {
                        a.enter(Compartment::R, c.immunity_duration_ticks.unwrap_or(0), tick);
                    } else {
                        a.enter(Compartment::Dead, 0, tick);
                        self.dead += 1;
                    }
                }
            }
        }

        if c.immunity_duration_ticks.is_some() {
            for a in self.agents.iter_mut() {
                if a.compartment == Compartment::R && a.entered < tick {
                    a.timer = a.timer.saturating_sub(1);
                    if a.timer == 0 {
                        a.enter(Compartment::S, 0, tick);
                    }
                }
            }
        }

        self.counts()
    }

    /// Rate-mode tick (Δt = 1). Hazards use the infected count at the start
    /// of the tick; recruits arrive after all transitions.
    fn step_rate(&mut self, c: &RateConfig) -> TickCounts {
        use Compartment::*;
        self.tick += 1;
        let tick = self.tick;
        let p = &c.params;
        let infected_now = self.agents.iter().filter(|a| a.compartment == I).count() as f64;
        let force = p.effective_contact_rate() * infected_now;

        for idx in 0..self.agents.len() {
            let a = &self.agents[idx];
            let outflows: [(f64, Compartment); 3] = match a.compartment {
                S => [(force, E), (p.tau_fail, Dead), (p.rho_vaccinate, V)],
                E => [(p.theta_incubate, I), (p.tau_fail, Dead), (0.0, Dead)],
                I => [(p.nu_recover, R), (p.tau_fail, Dead), (p.omega_kill, Dead)],
                R => [(p.phi_wane, S), (p.tau_fail, Dead), (0.0, Dead)],
                V => [(p.xi_vax_wane, S), (p.tau_fail, Dead), (0.0, Dead)],
                Dead => continue,
            };
            let hazard: f64 = outflows.iter().map(|(rate, _)| rate).sum();
            if hazard <= 0.0 {
                continue;
            }
            let p_exit = -(-hazard).exp_m1();
            if self.rng.random::<f64>() >= p_exit {
                continue;
            }
            let mut pick = self.rng.random::<f64>() * hazard;
            let mut dest = outflows[0].1;
            for &(rate, to) in &outflows {
                if rate <= 0.0 {
                    continue;
                }
                dest = to;
                if pick < rate {
                    break;
                }
                pick -= rate;
            }
            self.agents[idx].enter(dest, 0, tick);
            if dest == Dead {
                self.dead += 1;
            }
        }

        if p.lambda_recruit > 0.0 {
            let arrivals = Poisson::new(p.lambda_recruit)
                .expect("validated lambda is finite and positive")
                .sample(&mut self.rng) as usize;
            for _ in 0..arrivals {
                let id = self.agents.len();
                let pos = random_position(&mut self.rng, &c.bounds);
                let mut a = NodeAgent::new(id, pos, S, 0);
                a.entered = tick;
                self.agents.push(a);
            }
            self.recruits += arrivals as u64;
        }

        self.counts()
    }
}

/// Set up `config` and advance it `ticks` times, recording every tick.
pub fn run(config: impl Into<SimConfig>, ticks: u64) -> Result<Trace> {
    if ticks == 0 {
        return Err(Error::config("ticks", "must be >= 1"));
    }
    let mut world = World::setup(config)?;
    let rows = (0..ticks).map(|_| world.step()).collect();
    Ok(Trace {
        initial_nodes: world.initial_nodes(),
        rows,
    })
}
