//! Randomized analytic-vs-oracle verification.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use geophase::analytic::single_phases;
use geophase::{
    circle_distance, Analytic, CoherentParam, EntangledSpec, ModePair, Oracle, OracleConfig, OracleReport,
    PhaseError, Result,
};

use crate::format::fmt_num;
use crate::sampling::{Sample, Sampler, GENERATOR_NAME};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub oracle: OracleConfig,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(PhaseError::InvalidArgument("samples must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(PhaseError::InvalidArgument(format!(
                "tolerance must be positive and finite, got {}",
                self.tolerance
            )));
        }
        self.oracle.validate()
    }
}

/// Formula families checked against the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Single-mode χ, δ and γ.
    Single,
    PairTotal,
    PairDynamical,
    PairGeometric,
    AntipodalGeometric,
    AntipodalDynamical,
    /// γ and δ₁ with only particle 1 in a potential.
    OneParticle,
    /// One-particle γ after `l₁` full periods.
    CyclicSingle,
    /// Antipodal γ after `l₁`, `l₂` full periods.
    CyclicPair,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Single,
        Family::PairTotal,
        Family::PairDynamical,
        Family::PairGeometric,
        Family::AntipodalGeometric,
        Family::AntipodalDynamical,
        Family::OneParticle,
        Family::CyclicSingle,
        Family::CyclicPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Single => "single",
            Family::PairTotal => "pair_total",
            Family::PairDynamical => "pair_dynamical",
            Family::PairGeometric => "pair_geometric",
            Family::AntipodalGeometric => "antipodal_geometric",
            Family::AntipodalDynamical => "antipodal_dynamical",
            Family::OneParticle => "one_particle",
            Family::CyclicSingle => "cyclic_single",
            Family::CyclicPair => "cyclic_pair",
        }
    }
}

/// Exact bindings of one comparison, printable as a CLI invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binding {
    Single { alpha: CoherentParam, omega: f64, tau: f64 },
    Pair { spec: EntangledSpec, modes: ModePair },
}

impl fmt::Display for Binding {
    // `{}` on f64 is the shortest round-tripping representation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Single { alpha, omega, tau } => write!(
                f,
                "geophase single --rho {} --phi {} --omega {} --tau {}",
                alpha.rho(),
                alpha.phi(),
                omega,
                tau
            ),
            Binding::Pair { spec, modes } => {
                let (a, b, m, n) = (spec.alpha(), spec.beta(), spec.mu(), spec.nu());
                write!(
                    f,
                    "geophase pair --rho-alpha {} --phi-alpha {} --rho-beta {} --phi-beta {} \
                     --rho-mu {} --phi-mu {} --rho-nu {} --phi-nu {} --theta {} --varphi {} \
                     --omega1 {} --omega2 {} --tau {}",
                    a.rho(),
                    a.phi(),
                    b.rho(),
                    b.phi(),
                    m.rho(),
                    m.phi(),
                    n.rho(),
                    n.phi(),
                    spec.theta(),
                    spec.varphi(),
                    modes.omega1(),
                    modes.omega2(),
                    modes.tau()
                )
            }
        }
    }
}

/// One analytic-vs-oracle comparison; `error = None` means skipped because
/// both sides agree the quantity is undefined.
#[derive(Debug, Clone, PartialEq)]
struct Check {
    family: Family,
    error: Option<f64>,
    binding: Binding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyStat {
    pub family: Family,
    pub max_error: f64,
    pub worst: Option<(usize, Binding)>,
    pub compared: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub stats: Vec<FamilyStat>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.stats.iter().all(|s| s.max_error <= self.tolerance)
    }

    /// Family with the largest error relative to the tolerance.
    pub fn worst(&self) -> Option<&FamilyStat> {
        self.stats
            .iter()
            .filter(|s| s.max_error > self.tolerance)
            .max_by(|a, b| a.max_error.total_cmp(&b.max_error))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "generator = {GENERATOR_NAME}");
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "tolerance = {}", fmt_num(self.tolerance));
        for s in &self.stats {
            let status = if s.max_error <= self.tolerance { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<20} max_error = {:<20} compared = {:<4} skipped = {:<4} {status}",
                s.family.name(),
                fmt_num(s.max_error),
                s.compared,
                s.skipped
            );
        }
        match self.worst() {
            None => {
                let _ = writeln!(out, "result = PASS");
            }
            Some(s) => {
                let _ = writeln!(out, "result = FAIL");
                let _ = writeln!(out, "worst family = {}", s.family.name());
                if let Some((index, binding)) = &s.worst {
                    let _ = writeln!(out, "worst sample = {index}");
                    let _ = writeln!(out, "reproduce: {binding}");
                }
            }
        }
        out
    }
}

fn same_undefined(a: &PhaseError, b: &PhaseError) -> bool {
    matches!(
        (a, b),
        (PhaseError::UndefinedTotalPhase { .. }, PhaseError::UndefinedTotalPhase { .. })
            | (PhaseError::DegenerateState { .. }, PhaseError::DegenerateState { .. })
    )
}

fn angular(a: f64, b: f64) -> f64 {
    circle_distance(a, b).unwrap_or(f64::INFINITY)
}

fn absolute(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

type Distance = fn(f64, f64) -> f64;

/// Compare one or more analytic/oracle pairs; the error is the largest of them.
fn compare(pairs: &[(Result<f64>, Result<f64>, Distance)]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for (analytic, oracle, dist) in pairs {
        let e = match (analytic, oracle) {
            (Ok(a), Ok(o)) => dist(*a, *o),
            (Err(a), Err(o)) if same_undefined(a, o) => continue,
            _ => f64::INFINITY,
        };
        worst = Some(worst.map_or(e, |w| w.max(e)));
    }
    worst
}

fn field<T>(report: &Result<OracleReport>, pick: impl Fn(&OracleReport) -> T) -> Result<T> {
    report.as_ref().map(pick).map_err(Clone::clone)
}

fn check_sample(analytic: &Analytic, oracle: &Oracle, sample: &Sample) -> Result<Vec<Check>> {
    let mut checks = Vec::with_capacity(Family::ALL.len());
    let spec = sample.spec;
    let modes = sample.modes;
    let tau = modes.tau();

    // single mode
    let alpha = spec.alpha();
    let omega = modes.omega1();
    let a = single_phases(alpha, omega, tau);
    let o = oracle.single(alpha, omega, tau);
    checks.push(Check {
        family: Family::Single,
        error: compare(&[
            (a.clone().map(|t| t.chi), field(&o, |r| r.chi), angular),
            (a.clone().map(|t| t.delta), field(&o, |r| r.delta.spectral), absolute),
            (a.map(|t| t.gamma), field(&o, |r| r.gamma), angular),
        ]),
        binding: Binding::Single { alpha, omega, tau },
    });

    // general pair
    let o = oracle.pair(&spec, &modes);
    let binding = Binding::Pair { spec, modes };
    for (family, a, pick, dist) in [
        (
            Family::PairTotal,
            analytic.pair_total_phase(&spec, &modes),
            (|r: &OracleReport| r.chi) as fn(&OracleReport) -> f64,
            angular as Distance,
        ),
        (
            Family::PairDynamical,
            analytic.pair_dynamical_phase(&spec, &modes),
            |r| r.delta.spectral,
            absolute,
        ),
        (
            Family::PairGeometric,
            analytic.pair_geometric_phase(&spec, &modes),
            |r| r.gamma,
            angular,
        ),
    ] {
        checks.push(Check {
            family,
            error: compare(&[(a, field(&o, pick), dist)]),
            binding,
        });
    }

    // antipodal family built from the same α, μ, θ, φ
    let anti = sample.antipodal()?;
    let o = oracle.pair(&anti, &modes);
    let binding = Binding::Pair { spec: anti, modes };
    checks.push(Check {
        family: Family::AntipodalGeometric,
        error: compare(&[(
            analytic.antipodal_geometric_phase(&anti, &modes),
            field(&o, |r| r.gamma),
            angular,
        )]),
        binding,
    });
    checks.push(Check {
        family: Family::AntipodalDynamical,
        error: compare(&[(
            analytic.antipodal_dynamical_phase(&anti, &modes).map(|d| d.delta),
            field(&o, |r| r.delta.spectral),
            absolute,
        )]),
        binding,
    });

    // particle 2 free
    let one = modes.with_omega2(0.0)?;
    let o = oracle.pair(&anti, &one);
    checks.push(Check {
        family: Family::OneParticle,
        error: compare(&[
            (
                analytic.one_particle_geometric_phase(&anti, one.omega1(), tau),
                field(&o, |r| r.gamma),
                angular,
            ),
            (
                analytic.one_particle_dynamical_phase(&anti, one.omega1(), tau),
                field(&o, |r| r.delta.spectral),
                absolute,
            ),
        ]),
        binding: Binding::Pair { spec: anti, modes: one },
    });

    // cyclic evolutions: ω τ = 2π l with τ = 1
    let cyc1 = ModePair::new(TAU * f64::from(sample.l1), 0.0, 1.0)?;
    let o = oracle.pair(&anti, &cyc1);
    checks.push(Check {
        family: Family::CyclicSingle,
        error: compare(&[(
            analytic.cyclic_single_phase(&anti, sample.l1),
            field(&o, |r| r.gamma),
            angular,
        )]),
        binding: Binding::Pair { spec: anti, modes: cyc1 },
    });

    let cyc2 = ModePair::new(TAU * f64::from(sample.l1), TAU * f64::from(sample.l2), 1.0)?;
    let o = oracle.pair(&anti, &cyc2);
    checks.push(Check {
        family: Family::CyclicPair,
        error: compare(&[(
            analytic.cyclic_pair_phase(&anti, sample.l1, sample.l2).map(|c| c.gamma),
            field(&o, |r| r.gamma),
            angular,
        )]),
        binding: Binding::Pair { spec: anti, modes: cyc2 },
    });

    Ok(checks)
}

/// Draw `config.samples` specs and compare every family; samples are
/// evaluated in parallel but reduced in draw order.
pub fn run_verify(analytic: &Analytic, config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let oracle = Oracle::new(config.oracle)?;
    let mut sampler = Sampler::new(config.seed);
    let samples = (0..config.samples)
        .map(|_| sampler.draw())
        .collect::<Result<Vec<_>>>()?;

    let per_sample = samples
        .par_iter()
        .map(|s| check_sample(analytic, &oracle, s))
        .collect::<Result<Vec<_>>>()?;

    let mut stats: Vec<FamilyStat> = Family::ALL
        .iter()
        .map(|&family| FamilyStat {
            family,
            max_error: 0.0,
            worst: None,
            compared: 0,
            skipped: 0,
        })
        .collect();
    for (index, checks) in per_sample.into_iter().enumerate() {
        for check in checks {
            let stat = stats
                .iter_mut()
                .find(|s| s.family == check.family)
                .expect("every family has a stat");
            match check.error {
                None => stat.skipped += 1,
                Some(e) => {
                    stat.compared += 1;
                    if stat.worst.is_none() || e > stat.max_error {
                        stat.max_error = e;
                        stat.worst = Some((index, check.binding));
                    }
                }
            }
        }
    }
    Ok(VerifyReport {
        seed: config.seed,
        samples: config.samples,
        tolerance: config.tolerance,
        stats,
    })
}
