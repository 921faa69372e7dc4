//! One parameter point: build the state for a target and evaluate its phases.
//!
//! Both the `single`/`pair` commands and every sweep row go through
//! [`evaluate`], so a sweep row and the matching point command agree field
//! for field.

use geophase::analytic::{single_overlap, single_phases};
use geophase::{wrap_principal, Analytic, CoherentParam, EntangledSpec, ModePair, PhaseError, Result};

use crate::args::{StateArgs, Target};

/// Flat parameter bindings shared by every target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bindings {
    pub rho_alpha: f64,
    pub phi_alpha: f64,
    pub rho_beta: f64,
    pub phi_beta: f64,
    pub rho_mu: f64,
    pub phi_mu: f64,
    pub rho_nu: f64,
    pub phi_nu: f64,
    pub theta: f64,
    pub varphi: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub tau: f64,
}

impl Bindings {
    pub fn from_state(state: &StateArgs, omega1: f64, omega2: f64, tau: f64) -> Self {
        Self {
            rho_alpha: state.rho_alpha,
            phi_alpha: state.phi_alpha,
            rho_beta: state.rho_beta,
            phi_beta: state.phi_beta,
            rho_mu: state.rho_mu,
            phi_mu: state.phi_mu,
            rho_nu: state.rho_nu,
            phi_nu: state.phi_nu,
            theta: state.theta,
            varphi: state.varphi,
            omega1,
            omega2,
            tau,
        }
    }

    fn alpha(&self) -> Result<CoherentParam> {
        CoherentParam::new(self.rho_alpha, self.phi_alpha)
    }

    fn mu(&self) -> Result<CoherentParam> {
        CoherentParam::new(self.rho_mu, self.phi_mu)
    }

    /// The entangled spec; `antipodal` replaces β, ν by −α, −μ.
    pub fn spec(&self, antipodal: bool) -> Result<EntangledSpec> {
        if antipodal {
            self.antipodal_spec()
        } else {
            self.general_spec()
        }
    }

    pub fn modes(&self) -> Result<ModePair> {
        ModePair::new(self.omega1, self.omega2, self.tau)
    }

    fn general_spec(&self) -> Result<EntangledSpec> {
        EntangledSpec::new(
            self.alpha()?,
            CoherentParam::new(self.rho_beta, self.phi_beta)?,
            self.mu()?,
            CoherentParam::new(self.rho_nu, self.phi_nu)?,
            self.theta,
            self.varphi,
        )
    }

    fn antipodal_spec(&self) -> Result<EntangledSpec> {
        EntangledSpec::antipodal(self.alpha()?, self.mu()?, self.theta, self.varphi)
    }
}

/// A validated evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Single { alpha: CoherentParam, omega: f64, tau: f64 },
    Pair { spec: EntangledSpec, modes: ModePair },
    Antipodal { spec: EntangledSpec, modes: ModePair },
    OneParticle { spec: EntangledSpec, omega1: f64, tau: f64 },
}

impl Point {
    /// Validate `bindings` for `target`; only invalid arguments fail here.
    pub fn build(target: Target, b: &Bindings) -> Result<Self> {
        Ok(match target {
            Target::Single => {
                // reuse ModePair validation for omega and tau
                let modes = ModePair::new(b.omega1, 0.0, b.tau)?;
                Point::Single {
                    alpha: b.alpha()?,
                    omega: modes.omega1(),
                    tau: modes.tau(),
                }
            }
            Target::Pair => Point::Pair {
                spec: b.general_spec()?,
                modes: ModePair::new(b.omega1, b.omega2, b.tau)?,
            },
            Target::Antipodal => Point::Antipodal {
                spec: b.antipodal_spec()?,
                modes: ModePair::new(b.omega1, b.omega2, b.tau)?,
            },
            Target::OneParticle => {
                let modes = ModePair::new(b.omega1, 0.0, b.tau)?;
                Point::OneParticle {
                    spec: b.antipodal_spec()?,
                    omega1: modes.omega1(),
                    tau: modes.tau(),
                }
            }
        })
    }
}

/// Output fields of one point; `None` where the quantity is undefined.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Row {
    pub chi: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_mod_2pi: Option<f64>,
    pub overlap_abs: Option<f64>,
}

/// Evaluate `point`. On failure the fields computed before the failing step
/// are kept (e.g. `delta` and `overlap_abs` survive an undefined total phase).
pub fn evaluate(analytic: &Analytic, point: &Point) -> (Row, Option<PhaseError>) {
    let mut row = Row::default();
    let err = fill(analytic, point, &mut row).err();
    (row, err)
}

fn fill(analytic: &Analytic, point: &Point, row: &mut Row) -> Result<()> {
    let (delta, overlap, chi) = match *point {
        Point::Single { alpha, omega, tau } => {
            let triple = single_phases(alpha, omega, tau)?;
            (triple.delta, single_overlap(alpha, omega, tau)?, triple.chi)
        }
        Point::Pair { spec, modes } => {
            let delta = analytic.pair_dynamical_phase(&spec, &modes)?;
            row.delta = Some(delta);
            let overlap = analytic.pair_overlap(&spec, &modes)?;
            row.overlap_abs = Some(overlap.norm());
            (delta, overlap, analytic.pair_total_phase(&spec, &modes)?)
        }
        Point::Antipodal { spec, modes } => {
            let delta = analytic.antipodal_dynamical_phase(&spec, &modes)?.delta;
            row.delta = Some(delta);
            let overlap = analytic.antipodal_overlap(&spec, &modes)?;
            row.overlap_abs = Some(overlap.norm());
            (delta, overlap, analytic.antipodal_total_phase(&spec, &modes)?)
        }
        Point::OneParticle { spec, omega1, tau } => {
            let delta = analytic.one_particle_dynamical_phase(&spec, omega1, tau)?;
            row.delta = Some(delta);
            let overlap = analytic.one_particle_overlap(&spec, omega1, tau)?;
            row.overlap_abs = Some(overlap.norm());
            (delta, overlap, analytic.one_particle_total_phase(&spec, omega1, tau)?)
        }
    };
    let gamma = chi - delta;
    *row = Row {
        chi: Some(chi),
        delta: Some(delta),
        gamma: Some(gamma),
        gamma_mod_2pi: Some(wrap_principal(gamma)?),
        overlap_abs: Some(overlap.norm()),
    };
    Ok(())
}
