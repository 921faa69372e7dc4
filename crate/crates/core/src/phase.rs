//! Shared domain types and circle arithmetic.
//!
//! Every phase in this crate is an unbounded real number of radians. Closed
//! forms that are naturally unwrapped (e.g. `γ = ρ²(ωτ − sin ωτ)`) keep their
//! full value; anything obtained as the argument of a complex number lives in
//! the principal range `(−π, π]`. Comparing the two kinds always goes through
//! [`circle_distance`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{ensure_finite, PhaseError, Result};

/// Default floor below which `|⟨ψ(0)|ψ(τ)⟩|` is treated as zero.
pub const DEFAULT_EPS_OVERLAP: f64 = 1e-10;
/// Default floor below which a normalization `N²` is treated as zero.
pub const DEFAULT_EPS_NORM: f64 = 1e-14;

/// Tolerance used when checking `β = −α`, `ν = −μ`.
const ANTIPODAL_TOL: f64 = 1e-12;

/// Numerical floors for the two degenerate situations the formulas can hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub overlap: f64,
    pub norm: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            overlap: DEFAULT_EPS_OVERLAP,
            norm: DEFAULT_EPS_NORM,
        }
    }
}

/// A coherent-state label `λ = ρ e^{iφ}` stored in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParam {
    rho: f64,
    phi: f64,
}

impl CoherentParam {
    pub fn new(rho: f64, phi: f64) -> Result<Self> {
        ensure_finite("rho", rho)?;
        ensure_finite("phi", phi)?;
        if rho < 0.0 {
            return Err(PhaseError::InvalidArgument(format!(
                "rho must be nonnegative, got {rho}"
            )));
        }
        Ok(Self { rho, phi })
    }

    pub const fn vacuum() -> Self {
        Self { rho: 0.0, phi: 0.0 }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `|λ|²`
    pub fn intensity(&self) -> f64 {
        self.rho * self.rho
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.phi)
    }

    pub fn re(&self) -> f64 {
        self.rho * self.phi.cos()
    }

    pub fn im(&self) -> f64 {
        self.rho * self.phi.sin()
    }

    /// The label `−λ`, i.e. the same amplitude rotated by π.
    pub fn negated(&self) -> Self {
        Self {
            rho: self.rho,
            phi: self.phi + PI,
        }
    }

    /// True when `other = −self` up to a 1e-12 tolerance.
    pub fn is_negation_of(&self, other: &CoherentParam) -> bool {
        let scale = self.rho.max(other.rho).max(1.0);
        if (self.rho - other.rho).abs() > ANTIPODAL_TOL * scale {
            return false;
        }
        if self.rho <= ANTIPODAL_TOL && other.rho <= ANTIPODAL_TOL {
            return true;
        }
        circle_distance_unchecked(self.phi, other.phi + PI) <= ANTIPODAL_TOL
    }
}

/// Two oscillator frequencies and the evolution time (ħ = 1).
///
/// `omega2 = 0` is allowed and means particle 2 feels no potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair {
    omega1: f64,
    omega2: f64,
    tau: f64,
}

impl ModePair {
    pub fn new(omega1: f64, omega2: f64, tau: f64) -> Result<Self> {
        ensure_finite("omega1", omega1)?;
        ensure_finite("omega2", omega2)?;
        ensure_finite("tau", tau)?;
        if omega1 <= 0.0 {
            return Err(PhaseError::InvalidArgument(format!(
                "omega1 must be positive, got {omega1}"
            )));
        }
        if omega2 < 0.0 {
            return Err(PhaseError::InvalidArgument(format!(
                "omega2 must be nonnegative, got {omega2}"
            )));
        }
        if tau < 0.0 {
            return Err(PhaseError::InvalidArgument(format!(
                "tau must be nonnegative, got {tau}"
            )));
        }
        Ok(Self { omega1, omega2, tau })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `ω₁τ`
    pub fn angle1(&self) -> f64 {
        self.omega1 * self.tau
    }

    /// `ω₂τ`
    pub fn angle2(&self) -> f64 {
        self.omega2 * self.tau
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, tau)
    }

    pub fn with_omega2(&self, omega2: f64) -> Result<Self> {
        Self::new(self.omega1, omega2, self.tau)
    }
}

/// The unnormalized two-mode state
/// `e^{−iφ/2} cos(θ/2) |α⟩|μ⟩ + e^{iφ/2} sin(θ/2) |β⟩|ν⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledSpec {
    alpha: CoherentParam,
    beta: CoherentParam,
    mu: CoherentParam,
    nu: CoherentParam,
    theta: f64,
    varphi: f64,
}

impl EntangledSpec {
    pub fn new(
        alpha: CoherentParam,
        beta: CoherentParam,
        mu: CoherentParam,
        nu: CoherentParam,
        theta: f64,
        varphi: f64,
    ) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("varphi", varphi)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(PhaseError::InvalidArgument(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            mu,
            nu,
            theta,
            varphi,
        })
    }

    /// The `β = −α`, `ν = −μ` family.
    pub fn antipodal(alpha: CoherentParam, mu: CoherentParam, theta: f64, varphi: f64) -> Result<Self> {
        Self::new(alpha, alpha.negated(), mu, mu.negated(), theta, varphi)
    }

    /// A product state `|α⟩|μ⟩` (θ = 0).
    pub fn product(alpha: CoherentParam, mu: CoherentParam) -> Self {
        Self {
            alpha,
            beta: alpha,
            mu,
            nu: mu,
            theta: 0.0,
            varphi: 0.0,
        }
    }

    pub fn alpha(&self) -> CoherentParam {
        self.alpha
    }

    pub fn beta(&self) -> CoherentParam {
        self.beta
    }

    pub fn mu(&self) -> CoherentParam {
        self.mu
    }

    pub fn nu(&self) -> CoherentParam {
        self.nu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    pub fn is_antipodal(&self) -> bool {
        self.beta.is_negation_of(&self.alpha) && self.nu.is_negation_of(&self.mu)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.mu, self.nu, theta, self.varphi)
    }

    pub fn with_varphi(&self, varphi: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.mu, self.nu, self.theta, varphi)
    }
}

/// Total, dynamical and geometric phase of one evolution.
///
/// `gamma` is always `chi - delta` as computed by [`PhaseTriple::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTriple {
    pub chi: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl PhaseTriple {
    pub fn new(chi: f64, delta: f64) -> Self {
        Self {
            chi,
            delta,
            gamma: chi - delta,
        }
    }
}

fn wrap_unchecked(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    // fmod is exact, and the single ±2π correction below is exact too
    // because both operands lie within a factor of two of each other.
    let r = angle % TAU;
    if r > PI {
        r - TAU
    } else if r <= -PI {
        r + TAU
    } else {
        r
    }
}

fn circle_distance_unchecked(a: f64, b: f64) -> f64 {
    wrap_unchecked(a - b).abs()
}

/// `arg z` in `(−π, π]`; `atan2` alone can return −π for a negative-zero imaginary part.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -PI {
        PI
    } else {
        a
    }
}

/// Reduce an angle to its representative in `(−π, π]`.
///
/// Values already in range are returned bit-for-bit, so the map is idempotent.
pub fn wrap_principal(angle: f64) -> Result<f64> {
    ensure_finite("angle", angle)?;
    Ok(wrap_unchecked(angle))
}

/// Distance between two angles on the unit circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> Result<f64> {
    ensure_finite("a", a)?;
    ensure_finite("b", b)?;
    Ok(circle_distance_unchecked(a, b))
}

/// Relative slack, in turns, for treating an increment as an exact half turn.
pub const HALF_TURN_TOL: f64 = 1e-12;

/// Pick, for every sample, the branch `x + 2πk` closest to the previous output.
///
/// The first element is kept as given. The caller is responsible for sampling
/// densely enough that true increments stay below π. An increment of exactly
/// ±π (to within [`HALF_TURN_TOL`] turns) is ambiguous and keeps the current branch.
pub fn unwrap_sequence(angles: &[f64]) -> Result<Vec<f64>> {
    let (&first, rest) = angles
        .split_first()
        .ok_or_else(|| PhaseError::InvalidArgument("cannot unwrap an empty sequence".into()))?;
    ensure_finite("angle", first)?;
    let mut out = Vec::with_capacity(angles.len());
    out.push(first);
    let mut prev = first;
    for &x in rest {
        ensure_finite("angle", x)?;
        let r = (prev - x) / TAU;
        let turns = if ((r - r.trunc()).abs() - 0.5).abs() <= HALF_TURN_TOL {
            r.trunc()
        } else {
            r.round()
        };
        let y = if turns == 0.0 { x } else { x + TAU * turns };
        out.push(y);
        prev = y;
    }
    Ok(out)
}
