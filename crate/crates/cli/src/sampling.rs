//! Seeded parameter draws for the verification harness.
//!
//! Generator: SplitMix64 (Steele, Lea & Flood 2014) with state initialised
//! to the seed and the published constants `0x9E3779B97F4A7C15`,
//! `0xBF58476D1CE4E5B9`, `0x94D049BB133111EB`. A uniform draw on the open
//! interval `(0, 1)` is `((x >> 11) + 0.5) · 2⁻⁵³`.
//!
//! Each sample consumes, in order: ρ_α, φ_α, ρ_β, φ_β, ρ_μ, φ_μ, ρ_ν, φ_ν,
//! θ, φ, ω₁τ, ω₂τ (one uniform each), then `l₁ = 1 + x mod 3` and
//! `l₂ = x mod 4` (one raw 64-bit word each). Amplitudes are uniform on
//! `[0, 1.5]`, phases on `[0, 2π)`, θ on `[0, π]`, mode angles on `[0, 4π]`.
//! The evolution time is fixed to τ = 1, so the frequencies equal the angles.

use std::f64::consts::{PI, TAU};

use geophase::{CoherentParam, EntangledSpec, ModePair, Result};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub const GENERATOR_NAME: &str = "splitmix64";

pub const RHO_MAX: f64 = 1.5;
pub const ANGLE_MAX: f64 = 4.0 * PI;

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn label(&mut self) -> Result<CoherentParam> {
        let rho = self.uniform(0.0, RHO_MAX);
        let phi = self.uniform(0.0, TAU);
        CoherentParam::new(rho, phi)
    }

    pub fn draw(&mut self) -> Result<Sample> {
        let alpha = self.label()?;
        let beta = self.label()?;
        let mu = self.label()?;
        let nu = self.label()?;
        let theta = self.uniform(0.0, PI);
        let varphi = self.uniform(0.0, TAU);
        let angle1 = self.uniform(0.0, ANGLE_MAX);
        let angle2 = self.uniform(0.0, ANGLE_MAX);
        let l1 = 1 + (self.next_u64() % 3) as u32;
        let l2 = (self.next_u64() % 4) as u32;
        Ok(Sample {
            spec: EntangledSpec::new(alpha, beta, mu, nu, theta, varphi)?,
            modes: ModePair::new(angle1, angle2, 1.0)?,
            l1,
            l2,
        })
    }
}

/// One randomized draw: a general spec, its mode angles, and cycle counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub spec: EntangledSpec,
    pub modes: ModePair,
    pub l1: u32,
    pub l2: u32,
}

impl Sample {
    /// The antipodal spec sharing `α`, `μ`, `θ`, `φ` with this sample.
    pub fn antipodal(&self) -> Result<EntangledSpec> {
        EntangledSpec::antipodal(self.spec.alpha(), self.spec.mu(), self.spec.theta(), self.spec.varphi())
    }
}
