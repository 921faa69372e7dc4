//! Closed-form phases for coherent and entangled coherent states.
//!
//! Notation follows the physics: for a label `λ = ρ_λ e^{iφ_λ}` and the two
//! mode angles `x₁ = ω₁τ`, `x₂ = ω₂τ`,
//!
//! ```text
//! f(α;μ)     = exp[−ρ_α²(1 − cos x₁) − ρ_μ²(1 − cos x₂)]
//! g(α,β;μ,ν) = exp[−½(ρ_α² + ρ_β²) − ½(ρ_μ² + ρ_ν²)
//!                  + ρ_αρ_β cos(φ_α − φ_β + x₁) + ρ_μρ_ν cos(φ_μ − φ_ν + x₂)]
//! χ(α;μ)     = −(ρ_α² sin x₁ + x₁/2) − (ρ_μ² sin x₂ + x₂/2)
//! h(α,β;μ,ν) = −[ρ_αρ_β sin(φ_α − φ_β + x₁) + x₁/2] − [ρ_μρ_ν sin(φ_μ − φ_ν + x₂) + x₂/2]
//! ```
//!
//! so that `⟨α,0|β,τ⟩⟨μ,0|ν,τ⟩ = g(α,β;μ,ν) e^{i h(α,β;μ,ν)}`.
//!
//! Two conventions matter and are easy to get wrong. The second
//! cross term of the two-mode overlap is `⟨β,0|α,τ⟩⟨ν,0|μ,τ⟩`, i.e. the
//! `(β,α;ν,μ)` ordering, and the derivative overlap carries `+α*β` in its
//! exponent. For the antipodal family (`β = −α`, `ν = −μ`) every closed form
//! divides by the true normalization `N² = 1 + sinθ cosφ e^{−2(ρ_α² + ρ_μ²)}`.
//!
//! Formulas that are unbounded reals (dynamical phases, the single-mode and
//! cyclic geometric phases) are returned unwrapped. Arguments of complex
//! overlaps use the two-argument arctangent and land in `(−π, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, PhaseError, Result};
use crate::phase::{principal_arg, CoherentParam, EntangledSpec, ModePair, PhaseTriple, Thresholds};

fn validate_single(omega: f64, tau: f64) -> Result<()> {
    ensure_finite("omega", omega)?;
    ensure_finite("tau", tau)?;
    if omega <= 0.0 {
        return Err(PhaseError::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    if tau < 0.0 {
        return Err(PhaseError::InvalidArgument(format!("tau must be nonnegative, got {tau}")));
    }
    Ok(())
}

/// `⟨α,0|α,τ⟩ = e^{−ρ²(1 − cos ωτ)} e^{−i(ρ² sin ωτ + ωτ/2)}`
pub fn single_overlap(alpha: CoherentParam, omega: f64, tau: f64) -> Result<Complex64> {
    validate_single(omega, tau)?;
    let x = omega * tau;
    let n = alpha.intensity();
    Ok(Complex64::from_polar(
        (-n * (1.0 - x.cos())).exp(),
        -(n * x.sin() + 0.5 * x),
    ))
}

/// Single-mode phases with `χ` unwrapped.
pub fn single_phases(alpha: CoherentParam, omega: f64, tau: f64) -> Result<PhaseTriple> {
    validate_single(omega, tau)?;
    let x = omega * tau;
    let n = alpha.intensity();
    let chi = -(n * x.sin() + 0.5 * x);
    let delta = -x * (0.5 + n);
    Ok(PhaseTriple::new(chi, delta))
}

/// `⟨a,0|b,τ⟩ = exp[−½(|a|² + |b|²) + a*b e^{−iωτ} − iωτ/2]` for one mode.
pub fn coherent_overlap(a: CoherentParam, b: CoherentParam, omega: f64, tau: f64) -> Complex64 {
    let x = omega * tau;
    let cross = a.to_complex().conj() * b.to_complex() * Complex64::from_polar(1.0, -x);
    (Complex64::new(-0.5 * (a.intensity() + b.intensity()), -0.5 * x) + cross).exp()
}

/// `⟨a,t|d/dt|b,t⟩ = −iω exp[−½(|a|² + |b|²) + a*b] (½ + a*b)`, independent of `t`.
pub fn derivative_overlap(a: CoherentParam, b: CoherentParam, omega: f64) -> Complex64 {
    let ab = a.to_complex().conj() * b.to_complex();
    let weight = (ab - 0.5 * (a.intensity() + b.intensity())).exp();
    Complex64::new(0.0, -omega) * weight * (0.5 + ab)
}

/// `f(a;m)`
pub fn f_factor(a: CoherentParam, m: CoherentParam, modes: &ModePair) -> f64 {
    (-a.intensity() * (1.0 - modes.angle1().cos()) - m.intensity() * (1.0 - modes.angle2().cos())).exp()
}

/// `g(a,b;m,n)`
pub fn g_factor(
    a: CoherentParam,
    b: CoherentParam,
    m: CoherentParam,
    n: CoherentParam,
    modes: &ModePair,
) -> f64 {
    (-0.5 * (a.intensity() + b.intensity()) - 0.5 * (m.intensity() + n.intensity())
        + a.rho() * b.rho() * (a.phi() - b.phi() + modes.angle1()).cos()
        + m.rho() * n.rho() * (m.phi() - n.phi() + modes.angle2()).cos())
    .exp()
}

/// `χ(a;m)`, the phase of a diagonal term.
pub fn diagonal_phase(a: CoherentParam, m: CoherentParam, modes: &ModePair) -> f64 {
    let (x1, x2) = (modes.angle1(), modes.angle2());
    -(a.intensity() * x1.sin() + 0.5 * x1) - (m.intensity() * x2.sin() + 0.5 * x2)
}

/// `h(a,b;m,n)`, the phase of a cross term.
pub fn cross_phase(
    a: CoherentParam,
    b: CoherentParam,
    m: CoherentParam,
    n: CoherentParam,
    modes: &ModePair,
) -> f64 {
    let (x1, x2) = (modes.angle1(), modes.angle2());
    -(a.rho() * b.rho() * (a.phi() - b.phi() + x1).sin() + 0.5 * x1)
        - (m.rho() * n.rho() * (m.phi() - n.phi() + x2).sin() + 0.5 * x2)
}

/// The pieces of `2N²⟨ψ(0)|ψ(τ)⟩ = B + iA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapDecomposition {
    /// `f(α;μ)`
    pub f_diag_1: f64,
    /// `f(β;ν)`
    pub f_diag_2: f64,
    /// `g(α,β;μ,ν)`
    pub g_fwd: f64,
    /// `g(β,α;ν,μ)`
    pub g_rev: f64,
    /// `χ(α;μ)`
    pub chi_diag_1: f64,
    /// `χ(β;ν)`
    pub chi_diag_2: f64,
    /// `h(α,β;μ,ν)`
    pub h_fwd: f64,
    /// `h(β,α;ν,μ)`
    pub h_rev: f64,
    /// Imaginary part of `2N²⟨ψ(0)|ψ(τ)⟩`.
    pub a: f64,
    /// Real part of `2N²⟨ψ(0)|ψ(τ)⟩`.
    pub b: f64,
    pub norm_squared: f64,
}

impl OverlapDecomposition {
    /// `(B + iA) / 2N²`. Meaningless when `norm_squared` is degenerate.
    pub fn overlap(&self) -> Complex64 {
        Complex64::new(self.b, self.a) / (2.0 * self.norm_squared)
    }
}

/// `δ = δ₁ + δ₂` for the antipodal family; `delta` is evaluated from the
/// combined expression, not by summing the parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicalSplit {
    pub delta: f64,
    pub delta_1: f64,
    pub delta_2: f64,
}

/// `γᶜ = γ₁ᶜ + γ₂ᶜ` at `ω₁τ = 2πl₁`, `ω₂τ = 2πl₂`; `gamma` is evaluated
/// from the combined expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicSplit {
    pub gamma: f64,
    pub gamma_1: f64,
    pub gamma_2: f64,
}

/// Closed-form evaluator. Holds the numerical floors used to reject
/// degenerate normalizations and orthogonal endpoints.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Analytic {
    pub thresholds: Thresholds,
}

impl Analytic {
    pub fn new(thresholds: Thresholds) -> Self {
        Self { thresholds }
    }

    fn check_norm(&self, norm_squared: f64) -> Result<f64> {
        if norm_squared <= self.thresholds.norm {
            Err(PhaseError::DegenerateState {
                norm_squared,
                threshold: self.thresholds.norm,
            })
        } else {
            Ok(norm_squared)
        }
    }

    fn checked_arg(&self, overlap: Complex64) -> Result<f64> {
        let magnitude = overlap.norm();
        if magnitude < self.thresholds.overlap {
            return Err(PhaseError::UndefinedTotalPhase {
                magnitude,
                threshold: self.thresholds.overlap,
            });
        }
        Ok(principal_arg(overlap))
    }

    fn require_antipodal(spec: &EntangledSpec) -> Result<()> {
        if spec.is_antipodal() {
            Ok(())
        } else {
            Err(PhaseError::InvalidArgument(
                "formula requires an antipodal spec (beta = -alpha, nu = -mu)".into(),
            ))
        }
    }

    /// `N² = 1 + sinθ Re[exp(iφ − ½(ρ_α² + ρ_β²) − ½(ρ_μ² + ρ_ν²) + α*β + μ*ν)]`
    fn raw_norm_squared(spec: &EntangledSpec) -> f64 {
        let (a, b, m, n) = (spec.alpha(), spec.beta(), spec.mu(), spec.nu());
        let exponent = Complex64::new(
            -0.5 * (a.intensity() + b.intensity()) - 0.5 * (m.intensity() + n.intensity()),
            spec.varphi(),
        ) + a.to_complex().conj() * b.to_complex()
            + m.to_complex().conj() * n.to_complex();
        1.0 + spec.theta().sin() * exponent.exp().re
    }

    /// Time-independent normalization of the entangled state.
    pub fn norm_squared(&self, spec: &EntangledSpec) -> Result<f64> {
        self.check_norm(Self::raw_norm_squared(spec))
    }

    pub fn overlap_decomposition(&self, spec: &EntangledSpec, modes: &ModePair) -> OverlapDecomposition {
        let (a, b, m, n) = (spec.alpha(), spec.beta(), spec.mu(), spec.nu());
        let (sin_t, cos_t) = spec.theta().sin_cos();
        let varphi = spec.varphi();

        let f_diag_1 = f_factor(a, m, modes);
        let f_diag_2 = f_factor(b, n, modes);
        let g_fwd = g_factor(a, b, m, n, modes);
        let g_rev = g_factor(b, a, n, m, modes);
        let chi_diag_1 = diagonal_phase(a, m, modes);
        let chi_diag_2 = diagonal_phase(b, n, modes);
        let h_fwd = cross_phase(a, b, m, n, modes);
        let h_rev = cross_phase(b, a, n, m, modes);

        let a_im = (1.0 + cos_t) * f_diag_1 * chi_diag_1.sin()
            + (1.0 - cos_t) * f_diag_2 * chi_diag_2.sin()
            + sin_t * g_fwd * (h_fwd + varphi).sin()
            + sin_t * g_rev * (h_rev - varphi).sin();
        let b_re = (1.0 + cos_t) * f_diag_1 * chi_diag_1.cos()
            + (1.0 - cos_t) * f_diag_2 * chi_diag_2.cos()
            + sin_t * g_fwd * (h_fwd + varphi).cos()
            + sin_t * g_rev * (h_rev - varphi).cos();

        OverlapDecomposition {
            f_diag_1,
            f_diag_2,
            g_fwd,
            g_rev,
            chi_diag_1,
            chi_diag_2,
            h_fwd,
            h_rev,
            a: a_im,
            b: b_re,
            norm_squared: Self::raw_norm_squared(spec),
        }
    }

    /// `⟨ψ(0)|ψ(τ)⟩` assembled from the f/g/χ/h decomposition.
    pub fn pair_overlap(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<Complex64> {
        let d = self.overlap_decomposition(spec, modes);
        self.check_norm(d.norm_squared)?;
        Ok(d.overlap())
    }

    /// `⟨ψ(0)|ψ(τ)⟩` assembled term by term from four single-mode overlaps.
    pub fn pair_overlap_direct(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<Complex64> {
        let norm_squared = self.norm_squared(spec)?;
        let (a, b, m, n) = (spec.alpha(), spec.beta(), spec.mu(), spec.nu());
        let (w1, w2, tau) = (modes.omega1(), modes.omega2(), modes.tau());
        let half = 0.5 * spec.theta();
        let (c2, s2) = (half.cos().powi(2), half.sin().powi(2));
        let cs = half.cos() * half.sin();
        let phase = Complex64::from_polar(1.0, spec.varphi());
        let sum = c2 * coherent_overlap(a, a, w1, tau) * coherent_overlap(m, m, w2, tau)
            + s2 * coherent_overlap(b, b, w1, tau) * coherent_overlap(n, n, w2, tau)
            + cs * phase * coherent_overlap(a, b, w1, tau) * coherent_overlap(m, n, w2, tau)
            + cs * phase.conj() * coherent_overlap(b, a, w1, tau) * coherent_overlap(n, m, w2, tau);
        Ok(sum / norm_squared)
    }

    /// Principal total phase `arg(B + iA)`.
    pub fn pair_total_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<f64> {
        let overlap = self.pair_overlap(spec, modes)?;
        if modes.tau() == 0.0 {
            // ⟨ψ(0)|ψ(0)⟩ = 1; the summed cross terms only cancel to rounding
            return Ok(0.0);
        }
        self.checked_arg(overlap)
    }

    /// Unwrapped dynamical phase of the general entangled state.
    pub fn pair_dynamical_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<f64> {
        let norm_squared = self.norm_squared(spec)?;
        let (a, b, m, n) = (spec.alpha(), spec.beta(), spec.mu(), spec.nu());
        let (x1, x2) = (modes.angle1(), modes.angle2());
        let (sin_t, cos_t) = spec.theta().sin_cos();

        let diag_1 = x1 * (0.5 + a.intensity()) + x2 * (0.5 + m.intensity());
        let diag_2 = x1 * (0.5 + b.intensity()) + x2 * (0.5 + n.intensity());

        let ab = a.to_complex().conj() * b.to_complex();
        let mn = m.to_complex().conj() * n.to_complex();
        let weight = (Complex64::new(
            -0.5 * (a.intensity() + b.intensity()) - 0.5 * (m.intensity() + n.intensity()),
            spec.varphi(),
        ) + ab
            + mn)
            .exp();
        let cross = (sin_t * weight * (x1 * (0.5 + ab) + x2 * (0.5 + mn))).re;

        Ok(-(0.5 * (1.0 + cos_t) * diag_1 + 0.5 * (1.0 - cos_t) * diag_2 + cross) / norm_squared)
    }

    /// `χ` (principal) and `δ` (unwrapped) for the general entangled state.
    pub fn pair_phases(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<PhaseTriple> {
        let delta = self.pair_dynamical_phase(spec, modes)?;
        let chi = self.pair_total_phase(spec, modes)?;
        Ok(PhaseTriple::new(chi, delta))
    }

    pub fn pair_geometric_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<f64> {
        Ok(self.pair_phases(spec, modes)?.gamma)
    }

    /// `N²` of the antipodal family, `1 + sinθ cosφ e^{−2(ρ_α² + ρ_μ²)}`.
    fn antipodal_norm_squared(&self, spec: &EntangledSpec) -> Result<(f64, f64)> {
        let weight = spec.theta().sin()
            * spec.varphi().cos()
            * (-2.0 * (spec.alpha().intensity() + spec.mu().intensity())).exp();
        Ok((self.check_norm(1.0 + weight)?, weight))
    }

    /// `⟨ψ(0)|ψ(τ)⟩ = [f e^{iχ} + sinθ cosφ g e^{ih}] / N²` for `β = −α`, `ν = −μ`.
    pub fn antipodal_overlap(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<Complex64> {
        Self::require_antipodal(spec)?;
        let (norm_squared, _) = self.antipodal_norm_squared(spec)?;
        let (a, m) = (spec.alpha(), spec.mu());
        let (b, n) = (a.negated(), m.negated());
        let mix = spec.theta().sin() * spec.varphi().cos();
        let f = f_factor(a, m, modes);
        let chi = diagonal_phase(a, m, modes);
        let g = g_factor(a, b, m, n, modes);
        let h = cross_phase(a, b, m, n, modes);
        let im = f * chi.sin() + mix * g * h.sin();
        let re = f * chi.cos() + mix * g * h.cos();
        Ok(Complex64::new(re, im) / norm_squared)
    }

    /// The arctangent (total-phase) term of the antipodal geometric phase.
    pub fn antipodal_total_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<f64> {
        let overlap = self.antipodal_overlap(spec, modes)?;
        if modes.tau() == 0.0 {
            return Ok(0.0);
        }
        self.checked_arg(overlap)
    }

    pub fn antipodal_dynamical_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<DynamicalSplit> {
        Self::require_antipodal(spec)?;
        let (norm_squared, weight) = self.antipodal_norm_squared(spec)?;
        let (na, nm) = (spec.alpha().intensity(), spec.mu().intensity());
        let (x1, x2) = (modes.angle1(), modes.angle2());
        let delta = -(x1 * (0.5 + na)
            + x2 * (0.5 + nm)
            + weight * (x1 * (0.5 - na) + x2 * (0.5 - nm)))
            / norm_squared;
        let delta_1 = -(x1 * (0.5 + na) + weight * x1 * (0.5 - na)) / norm_squared;
        let delta_2 = -(x2 * (0.5 + nm) + weight * x2 * (0.5 - nm)) / norm_squared;
        Ok(DynamicalSplit {
            delta,
            delta_1,
            delta_2,
        })
    }

    pub fn antipodal_phases(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<PhaseTriple> {
        let delta = self.antipodal_dynamical_phase(spec, modes)?.delta;
        let chi = self.antipodal_total_phase(spec, modes)?;
        Ok(PhaseTriple::new(chi, delta))
    }

    pub fn antipodal_geometric_phase(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<f64> {
        Ok(self.antipodal_phases(spec, modes)?.gamma)
    }

    /// Overlap when only particle 1 sits in a potential (`ω₂ = 0`), written
    /// out in terms of `ρ_α`, `ρ_μ` and `ω₁τ` alone.
    pub fn one_particle_overlap(&self, spec: &EntangledSpec, omega1: f64, tau: f64) -> Result<Complex64> {
        Self::require_antipodal(spec)?;
        let modes = ModePair::new(omega1, 0.0, tau)?;
        let (norm_squared, _) = self.antipodal_norm_squared(spec)?;
        let (na, nm) = (spec.alpha().intensity(), spec.mu().intensity());
        let mix = spec.theta().sin() * spec.varphi().cos();
        let x = modes.angle1();
        let (sx, cx) = x.sin_cos();

        let diag_mag = (-na * (1.0 - cx)).exp();
        let diag_arg = -(na * sx + 0.5 * x);
        let cross_mag = mix * (-na * (1.0 + cx) - 2.0 * nm).exp();
        let cross_arg = na * sx - 0.5 * x;

        let im = diag_mag * diag_arg.sin() + cross_mag * cross_arg.sin();
        let re = diag_mag * diag_arg.cos() + cross_mag * cross_arg.cos();
        Ok(Complex64::new(re, im) / norm_squared)
    }

    /// `δ₁`, the dynamical phase when only particle 1 is in a potential.
    pub fn one_particle_dynamical_phase(&self, spec: &EntangledSpec, omega1: f64, tau: f64) -> Result<f64> {
        Self::require_antipodal(spec)?;
        let x = ModePair::new(omega1, 0.0, tau)?.angle1();
        let (norm_squared, weight) = self.antipodal_norm_squared(spec)?;
        let na = spec.alpha().intensity();
        Ok(-(x * (0.5 + na) + weight * x * (0.5 - na)) / norm_squared)
    }

    /// The arctangent term of the one-particle geometric phase.
    pub fn one_particle_total_phase(&self, spec: &EntangledSpec, omega1: f64, tau: f64) -> Result<f64> {
        let overlap = self.one_particle_overlap(spec, omega1, tau)?;
        if tau == 0.0 {
            return Ok(0.0);
        }
        self.checked_arg(overlap)
    }

    pub fn one_particle_phases(&self, spec: &EntangledSpec, omega1: f64, tau: f64) -> Result<PhaseTriple> {
        let delta = self.one_particle_dynamical_phase(spec, omega1, tau)?;
        let chi = self.one_particle_total_phase(spec, omega1, tau)?;
        Ok(PhaseTriple::new(chi, delta))
    }

    pub fn one_particle_geometric_phase(&self, spec: &EntangledSpec, omega1: f64, tau: f64) -> Result<f64> {
        Ok(self.one_particle_phases(spec, omega1, tau)?.gamma)
    }

    fn cyclic_mode_phase(&self, spec: &EntangledSpec, intensity: f64, turns: u32) -> Result<f64> {
        Self::require_antipodal(spec)?;
        let (norm_squared, weight) = self.antipodal_norm_squared(spec)?;
        let l = f64::from(turns);
        Ok(-PI * l + 2.0 * PI * (l * (0.5 + intensity) + l * (0.5 - intensity) * weight) / norm_squared)
    }

    /// `γ₁ᶜ` after `l₁` full periods of mode 1 with mode 2 free.
    pub fn cyclic_single_phase(&self, spec: &EntangledSpec, l1: u32) -> Result<f64> {
        self.cyclic_mode_phase(spec, spec.alpha().intensity(), l1)
    }

    /// `γ₂ᶜ`, the mode-2 analogue of [`Analytic::cyclic_single_phase`].
    pub fn cyclic_single_phase_mode2(&self, spec: &EntangledSpec, l2: u32) -> Result<f64> {
        self.cyclic_mode_phase(spec, spec.mu().intensity(), l2)
    }

    /// Unwrapped cyclic geometric phase of the antipodal family.
    pub fn cyclic_pair_phase(&self, spec: &EntangledSpec, l1: u32, l2: u32) -> Result<CyclicSplit> {
        Self::require_antipodal(spec)?;
        let (norm_squared, weight) = self.antipodal_norm_squared(spec)?;
        let (na, nm) = (spec.alpha().intensity(), spec.mu().intensity());
        let (l1f, l2f) = (f64::from(l1), f64::from(l2));
        let gamma = -PI * (l1f + l2f)
            + 2.0 * PI
                * (l1f * (0.5 + na)
                    + l2f * (0.5 + nm)
                    + weight * (l1f * (0.5 - na) + l2f * (0.5 - nm)))
                / norm_squared;
        Ok(CyclicSplit {
            gamma,
            gamma_1: self.cyclic_single_phase(spec, l1)?,
            gamma_2: self.cyclic_single_phase_mode2(spec, l2)?,
        })
    }
}
