//! Brute-force phases in a truncated number basis.
//!
//! States are explicit coefficient vectors, evolution multiplies each Fock
//! component by `e^{−iω(n+½)t}`, and the three phases are computed straight
//! from their definitions: `χ = arg⟨ψ(0)|ψ(τ)⟩`,
//! `δ = −i∫⟨ψ|d/dt|ψ⟩dt`, `γ = χ − δ`. Nothing here touches the closed forms
//! in [`crate::analytic`].

use num_complex::Complex64;

use crate::error::{ensure_finite, PhaseError, Result};
use crate::phase::{principal_arg, CoherentParam, EntangledSpec, ModePair, Thresholds};

/// Smallest per-mode truncation chosen automatically.
pub const N_MAX_FLOOR: usize = 32;
/// Default hard cap on the per-mode truncation.
pub const DEFAULT_N_MAX_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Fixed per-mode truncation instead of the automatic choice.
    pub n_max_override: Option<usize>,
    /// Upper bound on the Poisson tail mass dropped per label.
    pub trunc_tol: f64,
    /// Grid points for the trapezoid evaluation of the dynamical phase.
    pub time_steps: usize,
    pub n_max_cap: usize,
    pub thresholds: Thresholds,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_max_override: None,
            trunc_tol: 1e-12,
            time_steps: 4096,
            n_max_cap: DEFAULT_N_MAX_CAP,
            thresholds: Thresholds::default(),
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.trunc_tol > 0.0 && self.trunc_tol < 1.0) {
            return Err(PhaseError::InvalidArgument(format!(
                "trunc_tol must lie in (0, 1), got {}",
                self.trunc_tol
            )));
        }
        if self.time_steps < 2 {
            return Err(PhaseError::InvalidArgument(format!(
                "time_steps must be at least 2, got {}",
                self.time_steps
            )));
        }
        if self.n_max_override == Some(0) {
            return Err(PhaseError::InvalidArgument("n_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Shape of the truncated basis: one mode, or a dense two-mode grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Single { n_max: usize },
    Pair { n_max_1: usize, n_max_2: usize },
}

impl Basis {
    pub fn modes(&self) -> usize {
        match self {
            Basis::Single { .. } => 1,
            Basis::Pair { .. } => 2,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Basis::Single { n_max } => n_max + 1,
            Basis::Pair { n_max_1, n_max_2 } => (n_max_1 + 1) * (n_max_2 + 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Complex coefficients over a truncated Fock basis. Two-mode states are
/// stored row-major: index `n₁ (N₂ + 1) + n₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    basis: Basis,
    coeffs: Vec<Complex64>,
}

impl TruncatedState {
    pub fn from_coeffs(basis: Basis, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(PhaseError::InvalidArgument(format!(
                "basis {:?} needs {} coefficients, got {}",
                basis,
                basis.len(),
                coeffs.len()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &TruncatedState) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(PhaseError::InvalidArgument(format!(
                "basis mismatch: {:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        Ok(inner_unchecked(&self.coeffs, &other.coeffs))
    }

    pub fn scaled(&self, factor: Complex64) -> TruncatedState {
        TruncatedState {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `|a⟩ ⊗ |b⟩` for two single-mode states.
    pub fn tensor(a: &TruncatedState, b: &TruncatedState) -> Result<TruncatedState> {
        match (a.basis, b.basis) {
            (Basis::Single { n_max: n1 }, Basis::Single { n_max: n2 }) => {
                let coeffs = a
                    .coeffs
                    .iter()
                    .flat_map(|&x| b.coeffs.iter().map(move |&y| x * y))
                    .collect();
                Ok(TruncatedState {
                    basis: Basis::Pair {
                        n_max_1: n1,
                        n_max_2: n2,
                    },
                    coeffs,
                })
            }
            _ => Err(PhaseError::InvalidArgument(
                "tensor product needs two single-mode states".into(),
            )),
        }
    }
}

fn inner_unchecked(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `ln n!` for `n = 0..=len-1`, accumulated exactly term by term.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    out.push(0.0);
    for n in 1..len {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

/// Poisson weights `e^{−ρ²} ρ^{2n} / n!` for `n = 0..len`.
fn poisson_weights(rho: f64, len: usize) -> Vec<f64> {
    let mean = rho * rho;
    if mean == 0.0 {
        let mut w = vec![0.0; len];
        w[0] = 1.0;
        return w;
    }
    let ln_mean = mean.ln();
    ln_factorials(len)
        .into_iter()
        .enumerate()
        .map(|(n, lf)| (-mean + n as f64 * ln_mean - lf).exp())
        .collect()
}

/// Index past which every Poisson weight is far below `f64::MIN_POSITIVE`
/// relative to the bulk.
fn poisson_support_end(rho: f64) -> usize {
    let mean = rho * rho;
    (mean + 40.0 * mean.sqrt() + 100.0).ceil() as usize
}

/// Tail mass `Σ_{n > n_max} e^{−ρ²} ρ^{2n} / n!` dropped by truncating at `n_max`.
pub fn poisson_tail(rho: f64, n_max: usize) -> f64 {
    let end = poisson_support_end(rho);
    if n_max >= end {
        return 0.0;
    }
    let w = poisson_weights(rho, end + 1);
    // sum smallest terms first
    w[n_max + 1..].iter().rev().sum()
}

/// Per-label truncation: the override (checked against `trunc_tol`), or the
/// smallest `n` with tail below `trunc_tol`, floored at [`N_MAX_FLOOR`].
pub fn choose_n_max(rho: f64, config: &OracleConfig) -> Result<usize> {
    ensure_finite("rho", rho)?;
    config.validate()?;
    let mean = rho * rho;
    if mean > config.n_max_cap as f64 {
        return Err(PhaseError::Capacity {
            rho,
            cap: config.n_max_cap,
        });
    }
    let end = poisson_support_end(rho);
    let w = poisson_weights(rho, end + 1);
    // tails[n] = Σ_{k > n} w[k]
    let mut tails = vec![0.0; end + 1];
    let mut acc = 0.0;
    for n in (0..end).rev() {
        acc += w[n + 1];
        tails[n] = acc;
    }
    let tail_at = |n: usize| if n >= end { 0.0 } else { tails[n] };

    if let Some(n_max) = config.n_max_override {
        if n_max > config.n_max_cap {
            return Err(PhaseError::Capacity {
                rho,
                cap: config.n_max_cap,
            });
        }
        let tail = tail_at(n_max);
        if tail >= config.trunc_tol {
            return Err(PhaseError::Truncation {
                n_max,
                tail,
                tolerance: config.trunc_tol,
            });
        }
        return Ok(n_max);
    }

    let needed = (0..=end)
        .find(|&n| tail_at(n) < config.trunc_tol)
        .unwrap_or(end);
    if needed > config.n_max_cap {
        return Err(PhaseError::Capacity {
            rho,
            cap: config.n_max_cap,
        });
    }
    Ok(needed.max(N_MAX_FLOOR).min(config.n_max_cap.max(1)))
}

/// Coherent-state coefficients `e^{−ρ²/2} (ρe^{iφ})ⁿ / √(n!)` for `n ≤ n_max`.
pub fn coherent_coefficients(alpha: CoherentParam, n_max: usize) -> Vec<Complex64> {
    let rho = alpha.rho();
    if rho == 0.0 {
        let mut c = vec![Complex64::new(0.0, 0.0); n_max + 1];
        c[0] = Complex64::new(1.0, 0.0);
        return c;
    }
    let ln_rho = rho.ln();
    let half_mean = 0.5 * rho * rho;
    ln_factorials(n_max + 1)
        .into_iter()
        .enumerate()
        .map(|(n, lf)| {
            let nf = n as f64;
            Complex64::from_polar((-half_mean + nf * ln_rho - 0.5 * lf).exp(), nf * alpha.phi())
        })
        .collect()
}

/// Coherent state `|α⟩` at t = 0 with automatically chosen truncation.
pub fn build_coherent(alpha: CoherentParam, config: &OracleConfig) -> Result<TruncatedState> {
    let n_max = choose_n_max(alpha.rho(), config)?;
    Ok(TruncatedState {
        basis: Basis::Single { n_max },
        coeffs: coherent_coefficients(alpha, n_max),
    })
}

/// Normalized entangled state and the squared norm of the vector before
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledState {
    pub state: TruncatedState,
    pub norm_squared: f64,
}

pub fn build_entangled(spec: &EntangledSpec, config: &OracleConfig) -> Result<EntangledState> {
    let n1 = choose_n_max(spec.alpha().rho(), config)?.max(choose_n_max(spec.beta().rho(), config)?);
    let n2 = choose_n_max(spec.mu().rho(), config)?.max(choose_n_max(spec.nu().rho(), config)?);

    let a = coherent_coefficients(spec.alpha(), n1);
    let b = coherent_coefficients(spec.beta(), n1);
    let m = coherent_coefficients(spec.mu(), n2);
    let n = coherent_coefficients(spec.nu(), n2);

    let half = 0.5 * spec.theta();
    let w_first = Complex64::from_polar(half.cos(), -0.5 * spec.varphi());
    let w_second = Complex64::from_polar(half.sin(), 0.5 * spec.varphi());

    let mut coeffs = Vec::with_capacity((n1 + 1) * (n2 + 1));
    for i in 0..=n1 {
        let (ai, bi) = (w_first * a[i], w_second * b[i]);
        for j in 0..=n2 {
            coeffs.push(ai * m[j] + bi * n[j]);
        }
    }
    let norm_squared: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if norm_squared <= config.thresholds.norm {
        return Err(PhaseError::DegenerateState {
            norm_squared,
            threshold: config.thresholds.norm,
        });
    }
    let scale = norm_squared.sqrt().recip();
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(EntangledState {
        state: TruncatedState {
            basis: Basis::Pair {
                n_max_1: n1,
                n_max_2: n2,
            },
            coeffs,
        },
        norm_squared,
    })
}

fn check_omegas(basis: Basis, omegas: &[f64]) -> Result<()> {
    if omegas.len() != basis.modes() {
        return Err(PhaseError::InvalidArgument(format!(
            "{} frequencies given for a {}-mode state",
            omegas.len(),
            basis.modes()
        )));
    }
    for &w in omegas {
        ensure_finite("omega", w)?;
        if w < 0.0 {
            return Err(PhaseError::InvalidArgument(format!("omega must be nonnegative, got {w}")));
        }
    }
    Ok(())
}

/// `E_n = ω(n + ½)` for each level of one mode.
fn level_energies(omega: f64, n_max: usize) -> Vec<f64> {
    (0..=n_max).map(|n| omega * (n as f64 + 0.5)).collect()
}

/// Energies of every basis element, in storage order.
fn basis_energies(basis: Basis, omegas: &[f64]) -> Vec<f64> {
    match basis {
        Basis::Single { n_max } => level_energies(omegas[0], n_max),
        Basis::Pair { n_max_1, n_max_2 } => {
            let e1 = level_energies(omegas[0], n_max_1);
            let e2 = level_energies(omegas[1], n_max_2);
            e1.iter().flat_map(|&x| e2.iter().map(move |&y| x + y)).collect()
        }
    }
}

/// `e^{−iE_n t}` in storage order; the two-mode grid is built as an outer
/// product of per-mode factors.
fn propagator(basis: Basis, omegas: &[f64], t: f64) -> Vec<Complex64> {
    let mode = |omega: f64, n_max: usize| -> Vec<Complex64> {
        (0..=n_max)
            .map(|n| Complex64::from_polar(1.0, -omega * (n as f64 + 0.5) * t))
            .collect()
    };
    match basis {
        Basis::Single { n_max } => mode(omegas[0], n_max),
        Basis::Pair { n_max_1, n_max_2 } => {
            let u1 = mode(omegas[0], n_max_1);
            let u2 = mode(omegas[1], n_max_2);
            u1.iter().flat_map(|&x| u2.iter().map(move |&y| x * y)).collect()
        }
    }
}

/// Free evolution for time `t` under the uncoupled oscillator Hamiltonian.
pub fn evolve(state: &TruncatedState, omegas: &[f64], t: f64) -> Result<TruncatedState> {
    check_omegas(state.basis, omegas)?;
    ensure_finite("t", t)?;
    let u = propagator(state.basis, omegas, t);
    Ok(TruncatedState {
        basis: state.basis,
        coeffs: state.coeffs.iter().zip(&u).map(|(c, p)| c * p).collect(),
    })
}

/// `⟨H⟩ = Σ |c_n|² E_n`.
pub fn energy_expectation(state: &TruncatedState, omegas: &[f64]) -> Result<f64> {
    check_omegas(state.basis, omegas)?;
    let e = basis_energies(state.basis, omegas);
    Ok(state.coeffs.iter().zip(&e).map(|(c, en)| c.norm_sqr() * en).sum())
}

/// `arg⟨initial|final⟩` in `(−π, π]`.
pub fn oracle_total_phase(initial: &TruncatedState, final_state: &TruncatedState, eps_overlap: f64) -> Result<f64> {
    let overlap = initial.inner(final_state)?;
    let magnitude = overlap.norm();
    if magnitude < eps_overlap {
        return Err(PhaseError::UndefinedTotalPhase {
            magnitude,
            threshold: eps_overlap,
        });
    }
    Ok(principal_arg(overlap))
}

/// A smooth curve `s ↦ |ψ(s)⟩` together with its tangent `d|ψ⟩/ds`.
pub trait Trajectory {
    fn state_at(&self, s: f64) -> TruncatedState;

    fn velocity_at(&self, s: f64) -> TruncatedState;

    fn sample(&self, s: f64) -> (TruncatedState, TruncatedState) {
        (self.state_at(s), self.velocity_at(s))
    }

    /// `Im⟨ψ(s)|dψ/ds⟩`, the dynamical-phase integrand.
    fn phase_rate(&self, s: f64) -> f64 {
        let (psi, dpsi) = self.sample(s);
        inner_unchecked(&psi.coeffs, &dpsi.coeffs).im
    }
}

/// `|ψ(t)⟩ = e^{−iHt}|ψ(0)⟩` for the diagonal oscillator Hamiltonian.
#[derive(Debug, Clone)]
pub struct FreeEvolution {
    initial: TruncatedState,
    omegas: Vec<f64>,
    energies: Vec<f64>,
}

impl FreeEvolution {
    pub fn new(initial: TruncatedState, omegas: &[f64]) -> Result<Self> {
        check_omegas(initial.basis, omegas)?;
        let energies = basis_energies(initial.basis, omegas);
        Ok(Self {
            initial,
            omegas: omegas.to_vec(),
            energies,
        })
    }

    pub fn initial(&self) -> &TruncatedState {
        &self.initial
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Conserved `⟨H⟩` of the initial state.
    pub fn energy(&self) -> f64 {
        self.initial
            .coeffs
            .iter()
            .zip(&self.energies)
            .map(|(c, e)| c.norm_sqr() * e)
            .sum()
    }

    fn tangent(&self, state: &TruncatedState) -> TruncatedState {
        TruncatedState {
            basis: state.basis,
            coeffs: state
                .coeffs
                .iter()
                .zip(&self.energies)
                .map(|(c, &e)| Complex64::new(0.0, -e) * c)
                .collect(),
        }
    }
}

impl Trajectory for FreeEvolution {
    fn state_at(&self, t: f64) -> TruncatedState {
        let u = propagator(self.initial.basis, &self.omegas, t);
        TruncatedState {
            basis: self.initial.basis,
            coeffs: self.initial.coeffs.iter().zip(&u).map(|(c, p)| c * p).collect(),
        }
    }

    fn velocity_at(&self, t: f64) -> TruncatedState {
        self.tangent(&self.state_at(t))
    }

    fn sample(&self, t: f64) -> (TruncatedState, TruncatedState) {
        let state = self.state_at(t);
        let velocity = self.tangent(&state);
        (state, velocity)
    }

    // Same evaluation as `sample`, fused so the quadrature loop does not allocate.
    fn phase_rate(&self, t: f64) -> f64 {
        let u = propagator(self.initial.basis, &self.omegas, t);
        self.initial
            .coeffs
            .iter()
            .zip(&u)
            .zip(&self.energies)
            .map(|((c, p), &e)| {
                let psi = c * p;
                (psi.conj() * (Complex64::new(0.0, -e) * psi)).im
            })
            .sum()
    }
}

/// `e^{iκ(s)} |ψ(s)⟩`: same ray-space curve, different gauge.
pub struct GaugeTransformed<T, K, D> {
    pub inner: T,
    pub kappa: K,
    pub kappa_dot: D,
}

impl<T, K, D> Trajectory for GaugeTransformed<T, K, D>
where
    T: Trajectory,
    K: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn state_at(&self, s: f64) -> TruncatedState {
        self.inner.state_at(s).scaled(Complex64::from_polar(1.0, (self.kappa)(s)))
    }

    fn velocity_at(&self, s: f64) -> TruncatedState {
        self.sample(s).1
    }

    fn sample(&self, s: f64) -> (TruncatedState, TruncatedState) {
        let (psi, dpsi) = self.inner.sample(s);
        let phase = Complex64::from_polar(1.0, (self.kappa)(s));
        let rate = Complex64::new(0.0, (self.kappa_dot)(s));
        let velocity = TruncatedState {
            basis: psi.basis,
            coeffs: psi
                .coeffs
                .iter()
                .zip(&dpsi.coeffs)
                .map(|(p, d)| phase * (rate * p + d))
                .collect(),
        };
        (psi.scaled(phase), velocity)
    }
}

/// `|ψ(t(s))⟩` for a monotone reparametrization `t(s)`.
pub struct Reparametrized<T, M, D> {
    pub inner: T,
    pub map: M,
    pub map_dot: D,
}

impl<T, M, D> Trajectory for Reparametrized<T, M, D>
where
    T: Trajectory,
    M: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn state_at(&self, s: f64) -> TruncatedState {
        self.inner.state_at((self.map)(s))
    }

    fn velocity_at(&self, s: f64) -> TruncatedState {
        self.sample(s).1
    }

    fn sample(&self, s: f64) -> (TruncatedState, TruncatedState) {
        let (psi, dpsi) = self.inner.sample((self.map)(s));
        let rate = Complex64::new((self.map_dot)(s), 0.0);
        (psi, dpsi.scaled(rate))
    }
}

/// `δ = −i∫⟨ψ|dψ/ds⟩ds` over `[start, end]` by the composite trapezoid rule
/// on `points` equally spaced grid points.
pub fn quadrature_dynamical_phase<T: Trajectory + ?Sized>(
    trajectory: &T,
    start: f64,
    end: f64,
    points: usize,
) -> Result<f64> {
    ensure_finite("start", start)?;
    ensure_finite("end", end)?;
    if points < 2 {
        return Err(PhaseError::InvalidArgument(format!(
            "quadrature needs at least 2 points, got {points}"
        )));
    }
    let h = (end - start) / (points - 1) as f64;
    let integrand = |k: usize| {
        let s = if k == points - 1 { end } else { start + h * k as f64 };
        // Re(−i z) = Im z
        trajectory.phase_rate(s)
    };
    let interior: f64 = (1..points - 1).map(integrand).sum();
    Ok(h * (0.5 * (integrand(0) + integrand(points - 1)) + interior))
}

/// `arg⟨ψ(start)|ψ(end)⟩`.
pub fn trajectory_total_phase<T: Trajectory + ?Sized>(
    trajectory: &T,
    start: f64,
    end: f64,
    eps_overlap: f64,
) -> Result<f64> {
    oracle_total_phase(&trajectory.state_at(start), &trajectory.state_at(end), eps_overlap)
}

/// `χ − δ` along an arbitrary trajectory, with `δ` from quadrature.
pub fn trajectory_geometric_phase<T: Trajectory + ?Sized>(
    trajectory: &T,
    start: f64,
    end: f64,
    points: usize,
    eps_overlap: f64,
) -> Result<f64> {
    let chi = trajectory_total_phase(trajectory, start, end, eps_overlap)?;
    let delta = quadrature_dynamical_phase(trajectory, start, end, points)?;
    Ok(chi - delta)
}

/// The two independent evaluations of the dynamical phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicalEstimate {
    /// `−⟨H⟩τ`
    pub spectral: f64,
    /// Trapezoid rule on `−i⟨ψ|ψ̇⟩`.
    pub quadrature: f64,
}

/// Spectral and quadrature dynamical phase over `[0, tau]`; fails if they
/// disagree by more than `max(1e-10, 10 / time_steps²)`.
pub fn oracle_dynamical_phase(evolution: &FreeEvolution, tau: f64, time_steps: usize) -> Result<DynamicalEstimate> {
    ensure_finite("tau", tau)?;
    let spectral = -evolution.energy() * tau;
    let quadrature = quadrature_dynamical_phase(evolution, 0.0, tau, time_steps)?;
    let bound = 1e-10_f64.max(10.0 / (time_steps as f64).powi(2));
    let difference = (spectral - quadrature).abs();
    if difference > bound {
        return Err(PhaseError::OracleInconsistency {
            what: "spectral and quadrature dynamical phases",
            difference,
            bound,
        });
    }
    Ok(DynamicalEstimate { spectral, quadrature })
}

/// Everything the oracle knows about one evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub overlap: Complex64,
    /// Principal value.
    pub chi: f64,
    pub delta: DynamicalEstimate,
    /// `chi − delta.spectral`
    pub gamma: f64,
    pub basis: Basis,
}

/// Oracle evaluation driver.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Oracle {
    pub config: OracleConfig,
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    fn run(&self, evolution: &FreeEvolution, tau: f64) -> Result<OracleReport> {
        let initial = evolution.initial();
        let final_state = evolution.state_at(tau);
        let overlap = initial.inner(&final_state)?;
        let chi = oracle_total_phase(initial, &final_state, self.config.thresholds.overlap)?;
        let delta = oracle_dynamical_phase(evolution, tau, self.config.time_steps)?;
        Ok(OracleReport {
            overlap,
            chi,
            delta,
            gamma: chi - delta.spectral,
            basis: initial.basis(),
        })
    }

    /// Single-mode coherent state `|α⟩` evolved for `tau` at frequency `omega`.
    pub fn single(&self, alpha: CoherentParam, omega: f64, tau: f64) -> Result<OracleReport> {
        ensure_finite("tau", tau)?;
        let evolution = FreeEvolution::new(build_coherent(alpha, &self.config)?, &[omega])?;
        self.run(&evolution, tau)
    }

    /// Normalized entangled coherent state evolved under both oscillators.
    pub fn pair(&self, spec: &EntangledSpec, modes: &ModePair) -> Result<OracleReport> {
        let prepared = build_entangled(spec, &self.config)?;
        let evolution = FreeEvolution::new(prepared.state, &[modes.omega1(), modes.omega2()])?;
        self.run(&evolution, modes.tau())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::circle_distance;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn cp(rho: f64, phi: f64) -> CoherentParam {
        CoherentParam::new(rho, phi).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn vacuum_coefficients() {
        let s = build_coherent(CoherentParam::vacuum(), &cfg()).unwrap();
        assert_eq!(s.basis(), Basis::Single { n_max: N_MAX_FLOOR });
        assert_eq!(s.coeffs()[0], Complex64::new(1.0, 0.0));
        assert!(s.coeffs()[1..].iter().all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn unit_coherent_coefficients() {
        let s = build_coherent(cp(1.0, 0.0), &cfg()).unwrap();
        let c = s.coeffs();
        let e = (-0.5f64).exp();
        assert_abs_diff_eq!(c[0].re, 0.606530659712633, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1].re, e, epsilon = 1e-14);
        assert_abs_diff_eq!(c[2].re, 0.428881942480353, epsilon = 1e-14);
        assert_abs_diff_eq!(c[2].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn label_phase_rotates_coefficients() {
        let a = build_coherent(cp(1.0, 0.0), &cfg()).unwrap();
        let b = build_coherent(cp(1.0, FRAC_PI_2), &cfg()).unwrap();
        let mut i_pow = Complex64::new(1.0, 0.0);
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert_abs_diff_eq!((x * i_pow - y).norm(), 0.0, epsilon = 1e-15);
            i_pow *= Complex64::i();
        }
    }

    #[test]
    fn truncation_meets_tolerance() {
        for rho in [0.0, 0.5, 1.5, 3.0, 10.0] {
            let s = build_coherent(cp(rho, 0.3), &cfg()).unwrap();
            assert!(1.0 - s.norm_squared() < 1e-12, "rho = {rho}");
            let Basis::Single { n_max } = s.basis() else { unreachable!() };
            assert!(poisson_tail(rho, n_max) < 1e-12);
        }
    }

    #[test]
    fn auto_n_max_is_smallest_above_floor() {
        let n = choose_n_max(10.0, &cfg()).unwrap();
        assert!(n > N_MAX_FLOOR);
        assert!(poisson_tail(10.0, n) < 1e-12);
        assert!(poisson_tail(10.0, n - 1) >= 1e-12);
    }

    #[test]
    fn poisson_tail_small_cases() {
        // ρ = 1: tail past n = 0 is 1 − e^{−1}
        assert_abs_diff_eq!(poisson_tail(1.0, 0), 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        assert_eq!(poisson_tail(0.0, 0), 0.0);
    }

    #[test]
    fn override_too_small_is_truncation_error() {
        let config = OracleConfig {
            n_max_override: Some(3),
            ..cfg()
        };
        assert!(matches!(
            build_coherent(cp(2.0, 0.0), &config),
            Err(PhaseError::Truncation { n_max: 3, .. })
        ));
        let config = OracleConfig {
            n_max_override: Some(40),
            ..cfg()
        };
        let s = build_coherent(cp(1.0, 0.0), &config).unwrap();
        assert_eq!(s.basis(), Basis::Single { n_max: 40 });
    }

    #[test]
    fn huge_amplitude_is_capacity_error() {
        assert!(matches!(
            build_coherent(cp(100.0, 0.0), &cfg()),
            Err(PhaseError::Capacity { .. })
        ));
        let config = OracleConfig {
            n_max_cap: 64,
            ..cfg()
        };
        assert!(matches!(
            build_coherent(cp(7.0, 0.0), &config),
            Err(PhaseError::Capacity { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(Oracle::new(OracleConfig { trunc_tol: 0.0, ..cfg() }).is_err());
        assert!(Oracle::new(OracleConfig { trunc_tol: 1.0, ..cfg() }).is_err());
        assert!(Oracle::new(OracleConfig { time_steps: 1, ..cfg() }).is_err());
        assert!(Oracle::new(OracleConfig { n_max_override: Some(0), ..cfg() }).is_err());
    }

    #[test]
    fn evolve_examples() {
        let s = build_coherent(cp(1.0, 0.4), &cfg()).unwrap();
        assert_eq!(evolve(&s, &[1.0], 0.0).unwrap(), s);

        let v = build_coherent(CoherentParam::vacuum(), &cfg()).unwrap();
        let e = evolve(&v, &[1.0], PI).unwrap();
        assert_abs_diff_eq!((e.coeffs()[0] - Complex64::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);

        let e = evolve(&s, &[1.0], TAU).unwrap();
        for (x, y) in s.coeffs().iter().zip(e.coeffs()) {
            assert_abs_diff_eq!((-x - y).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn evolve_rejects_mode_mismatch() {
        let s = build_coherent(cp(1.0, 0.0), &cfg()).unwrap();
        assert!(evolve(&s, &[1.0, 2.0], 1.0).is_err());
        let p = TruncatedState::tensor(&s, &s).unwrap();
        assert!(evolve(&p, &[1.0], 1.0).is_err());
        assert!(s.inner(&p).is_err());
    }

    #[test]
    fn evolve_preserves_norm() {
        let spec = EntangledSpec::new(cp(0.8, 0.3), cp(0.6, 1.7), cp(0.7, -0.4), cp(0.9, 2.2), 1.1, 0.6).unwrap();
        let s = build_entangled(&spec, &cfg()).unwrap().state;
        let n0 = s.norm_squared();
        for t in [0.1, 1.0, 17.0, 250.0] {
            let n = evolve(&s, &[1.3, 0.7], t).unwrap().norm_squared();
            assert!((n - n0).abs() < 1e-14);
        }
    }

    #[test]
    fn entangled_construction() {
        let (a, m) = (cp(0.8, 0.2), cp(1.1, -0.7));
        let spec = EntangledSpec::new(a, cp(0.3, 1.0), m, cp(0.5, 0.0), 0.0, 0.9).unwrap();
        let e = build_entangled(&spec, &cfg()).unwrap();
        let product = TruncatedState::tensor(&build_coherent(a, &cfg()).unwrap(), &build_coherent(m, &cfg()).unwrap()).unwrap();
        // θ = 0 differs from |α⟩|μ⟩ by the global phase e^{−iφ/2}
        let overlap = product.inner(&e.state).unwrap();
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap.arg(), -0.45, epsilon = 1e-12);

        let spec = EntangledSpec::new(a, a, m, m, FRAC_PI_2, 0.0).unwrap();
        let e = build_entangled(&spec, &cfg()).unwrap();
        assert_abs_diff_eq!(product.inner(&e.state).unwrap().re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.norm_squared, 2.0, epsilon = 1e-12);

        let spec = EntangledSpec::antipodal(cp(1.0, 0.0), cp(1.0, 0.0), FRAC_PI_2, 0.0).unwrap();
        let e = build_entangled(&spec, &cfg()).unwrap();
        assert_abs_diff_eq!(e.norm_squared, 1.0 + (-4.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.state.norm_squared(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn entangled_degenerate() {
        let a = cp(0.5, 0.1);
        let spec = EntangledSpec::new(a, a, a, a, FRAC_PI_2, PI).unwrap();
        assert!(matches!(
            build_entangled(&spec, &cfg()),
            Err(PhaseError::DegenerateState { .. })
        ));
    }

    #[test]
    fn total_phase_examples() {
        let s = build_coherent(cp(1.2, 0.5), &cfg()).unwrap();
        assert_eq!(oracle_total_phase(&s, &s, 1e-10).unwrap(), 0.0);
        let rotated = s.scaled(Complex64::from_polar(1.0, PI / 3.0));
        assert_abs_diff_eq!(oracle_total_phase(&s, &rotated, 1e-10).unwrap(), PI / 3.0, epsilon = 1e-14);

        let r = Oracle::default().single(cp(1.0, 0.0), 1.0, PI).unwrap();
        assert_abs_diff_eq!(r.chi, -FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(r.overlap.norm(), (-2.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_endpoints() {
        let r = Oracle::default().single(cp(6.0, 0.0), 1.0, PI);
        assert!(matches!(r, Err(PhaseError::UndefinedTotalPhase { .. })));
    }

    #[test]
    fn dynamical_phase_examples() {
        let o = Oracle::default();
        let r = o.single(CoherentParam::vacuum(), 1.0, PI).unwrap();
        assert_abs_diff_eq!(r.delta.spectral, -FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(r.delta.quadrature, -FRAC_PI_2, epsilon = 1e-12);

        let r = o.single(cp(1.0, 0.0), 1.0, PI).unwrap();
        assert_abs_diff_eq!(r.delta.spectral, -1.5 * PI, epsilon = 1e-11);
        assert_abs_diff_eq!(r.gamma, PI, epsilon = 1e-11);

        let r = o.single(cp(1.0, 0.0), 1.0, TAU).unwrap();
        assert!(circle_distance(r.gamma, 0.0).unwrap() < 1e-10);
    }

    #[test]
    fn product_pair_is_sum_of_singles() {
        let o = Oracle::default();
        let (a, m) = (cp(0.9, 0.3), cp(1.2, 2.0));
        let modes = ModePair::new(1.7, 0.6, 2.3).unwrap();
        let pair = o.pair(&EntangledSpec::product(a, m), &modes).unwrap();
        let s1 = o.single(a, 1.7, 2.3).unwrap();
        let s2 = o.single(m, 0.6, 2.3).unwrap();
        assert!(circle_distance(pair.gamma, s1.gamma + s2.gamma).unwrap() < 1e-10);
    }

    #[test]
    fn golden_pair_values() {
        // independent numpy truncated-Fock computation, N = 60 per mode
        let o = Oracle::default();
        let spec = EntangledSpec::antipodal(cp(0.5, 0.0), cp(0.5, 0.0), FRAC_PI_2, 0.0).unwrap();
        let r = o.pair(&spec, &ModePair::new(FRAC_PI_2, PI / 3.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.chi, -1.3715367798962057, epsilon = 1e-12);
        assert_abs_diff_eq!(r.delta.spectral, -1.611451911151131, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gamma, 0.23991513125492525, epsilon = 1e-12);

        let spec = EntangledSpec::new(cp(0.8, 0.3), cp(0.6, 1.7), cp(0.7, -0.4), cp(0.9, 2.2), 1.1, 0.6).unwrap();
        let r = o.pair(&spec, &ModePair::new(1.3, 0.7, 1.9).unwrap()).unwrap();
        assert_abs_diff_eq!(r.gamma, 1.7313460914840904, epsilon = 1e-11);
    }

    #[test]
    fn larger_truncation_changes_little() {
        let spec = EntangledSpec::new(cp(1.4, 0.3), cp(0.6, 1.7), cp(0.7, -0.4), cp(1.5, 2.2), 1.1, 0.6).unwrap();
        let modes = ModePair::new(1.3, 0.7, 1.9).unwrap();
        let base = Oracle::default().pair(&spec, &modes).unwrap();
        let big = Oracle::new(OracleConfig {
            n_max_override: Some(80),
            ..cfg()
        })
        .unwrap()
        .pair(&spec, &modes)
        .unwrap();
        assert!((base.gamma - big.gamma).abs() < 10.0 * 1e-12);
        assert!((base.delta.spectral - big.delta.spectral).abs() < 10.0 * 1e-12);
    }

    #[test]
    fn quadrature_needs_two_points() {
        let ev = FreeEvolution::new(build_coherent(cp(1.0, 0.0), &cfg()).unwrap(), &[1.0]).unwrap();
        assert!(quadrature_dynamical_phase(&ev, 0.0, 1.0, 1).is_err());
    }
}
