//! The three stabilizing feedback laws and the gain condition.
//!
//! With z = B*y and s = ∥z∥:
//!
//!   finite-time:        u = −λ_lin z − ρ z/s
//!   fixed-time:         u = −λ_lin z − ρ z/s − s^ζ z
//!   nonlinear f.t.:     u = −(ν + s^{−μ} + s^{μ}) z,  ν = κ + ω/β²
//!
//! all with the selection u = 0 at y = 0 (the set-valued sign admits it, and
//! it is the selection the prox discretization realizes). The evaluators are
//! diagnostic: the integrator never applies the discontinuous law pointwise,
//! it applies the corresponding resolvent.
//!
//! The switching gain must clear Eq.-(10)-type threshold
//! ρ > max{ M/β, M·√∥(BB*)⁻¹∥ }: the first operand dominates the continuous
//! Lyapunov decay, the second keeps the discrete dead zone invariant under
//! the matched perturbation.

use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, StateField};
use crate::operators::InputOperator;
use crate::scalar::{as_f64, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct FiniteTimeLaw<T> {
    pub rho: T,
    pub lambda_lin: T,
}

impl<T: Scalar> FiniteTimeLaw<T> {
    /// λ_lin = ω/β² compensates quasi-contractivity; zero for contraction
    /// semigroups.
    pub fn new(rho: T, omega: T, beta: T) -> Result<Self> {
        if !(rho > T::zero()) {
            return Err(Error::invalid(format!("rho must be positive, got {rho}")));
        }
        if !(beta > T::zero()) {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        let lambda_lin = omega.max(T::zero()) / (beta * beta);
        Ok(FiniteTimeLaw { rho, lambda_lin })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedTimeLaw<T> {
    pub rho: T,
    pub lambda_lin: T,
    pub zeta: T,
}

impl<T: Scalar> FixedTimeLaw<T> {
    pub fn new(rho: T, omega: T, beta: T, zeta: T) -> Result<Self> {
        if !(zeta > T::zero()) {
            return Err(Error::invalid(format!("zeta must be positive, got {zeta}")));
        }
        let base = FiniteTimeLaw::new(rho, omega, beta)?;
        Ok(FixedTimeLaw {
            rho: base.rho,
            lambda_lin: base.lambda_lin,
            zeta,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NonlinearFixedTimeLaw<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Scalar> NonlinearFixedTimeLaw<T> {
    /// ν = κ + ω/β² absorbs both the one-sided nonlinearity bound and the
    /// semigroup type.
    pub fn new(mu: T, kappa: T, omega: T, beta: T) -> Result<Self> {
        if !(mu > T::zero() && mu < T::one()) {
            return Err(Error::invalid(format!("mu must lie in (0,1), got {mu}")));
        }
        if !(beta > T::zero()) {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        if kappa < T::zero() {
            return Err(Error::invalid(format!(
                "kappa must be nonnegative, got {kappa}"
            )));
        }
        let nu = kappa + omega.max(T::zero()) / (beta * beta);
        Ok(NonlinearFixedTimeLaw { mu, nu })
    }
}

#[derive(Debug, Clone)]
pub enum FeedbackLaw<T> {
    FiniteTime(FiniteTimeLaw<T>),
    FixedTime(FixedTimeLaw<T>),
    NonlinearFixedTime(NonlinearFixedTimeLaw<T>),
}

impl<T: Scalar> FeedbackLaw<T> {
    /// Coefficient of the implicit pointwise-linear sub-step; zero for the
    /// nonlinear law (its ν lives inside the prox).
    pub fn lambda_lin(&self) -> T {
        match self {
            FeedbackLaw::FiniteTime(l) => l.lambda_lin,
            FeedbackLaw::FixedTime(l) => l.lambda_lin,
            FeedbackLaw::NonlinearFixedTime(_) => T::zero(),
        }
    }

    /// Diagnostic evaluation of the selected control value at `y`.
    pub fn control(
        &self,
        y: &StateField<T>,
        input: &InputOperator<T>,
        grid: &SpatialGrid<T>,
    ) -> Result<StateField<T>> {
        match self {
            FeedbackLaw::FiniteTime(l) => eval_finite_time_control(y, l, input, grid),
            FeedbackLaw::FixedTime(l) => eval_fixed_time_control(y, l, input, grid),
            FeedbackLaw::NonlinearFixedTime(l) => eval_nonlinear_control(y, l, input, grid),
        }
    }
}

/// Result of the gain condition ρ > max{M/β, M√∥(BB*)⁻¹∥}.
#[derive(Debug, Clone, Copy)]
pub struct GainCheck<T> {
    pub rho: T,
    pub threshold: T,
    pub passes: bool,
}

pub fn validate_gain<T: Scalar>(
    rho: T,
    m_bound: T,
    beta: T,
    inv_norm_bbstar: T,
) -> Result<GainCheck<T>> {
    if !(beta > T::zero()) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    if !(inv_norm_bbstar > T::zero()) {
        return Err(Error::invalid(format!(
            "inv_norm_bbstar must be positive, got {inv_norm_bbstar}"
        )));
    }
    if m_bound < T::zero() {
        return Err(Error::invalid(format!(
            "perturbation bound must be nonnegative, got {m_bound}"
        )));
    }
    let threshold = (m_bound / beta).max(m_bound * inv_norm_bbstar.sqrt());
    Ok(GainCheck {
        rho,
        threshold,
        passes: rho > threshold,
    })
}

impl<T: Scalar> GainCheck<T> {
    /// Upgrade a failed check into the hard error used by the canonical
    /// perturbed scenarios.
    pub fn require(self) -> Result<Self> {
        if self.passes {
            Ok(self)
        } else {
            Err(Error::GainCondition {
                rho: as_f64(self.rho),
                threshold: as_f64(self.threshold),
            })
        }
    }
}

/// Shared kernel: u = −coef(s)·z evaluated as −(coef(s)·s)·(z/s), which stays
/// finite for subnormal s even when coef(s) alone would overflow.
fn directional_control<T: Scalar>(
    y: &StateField<T>,
    input: &InputOperator<T>,
    grid: &SpatialGrid<T>,
    magnitude: impl Fn(T) -> T,
) -> Result<StateField<T>> {
    let z = input.apply_bstar(y)?;
    let s = crate::grid::l2_norm(&z, grid)?;
    if s == T::zero() {
        return Ok(StateField::zeros(grid.len()));
    }
    let mag = magnitude(s);
    Ok(StateField::new(
        z.values().iter().map(|&zi| -mag * (zi / s)).collect(),
    ))
}

/// u = −λ_lin B*y − ρ B*y/∥B*y∥, selection 0 at y = 0.
pub fn eval_finite_time_control<T: Scalar>(
    y: &StateField<T>,
    law: &FiniteTimeLaw<T>,
    input: &InputOperator<T>,
    grid: &SpatialGrid<T>,
) -> Result<StateField<T>> {
    let (rho, lam) = (law.rho, law.lambda_lin);
    directional_control(y, input, grid, |s| lam * s + rho)
}

/// Adds the homogeneity-raising term −∥B*y∥^ζ B*y.
pub fn eval_fixed_time_control<T: Scalar>(
    y: &StateField<T>,
    law: &FixedTimeLaw<T>,
    input: &InputOperator<T>,
    grid: &SpatialGrid<T>,
) -> Result<StateField<T>> {
    let (rho, lam, zeta) = (law.rho, law.lambda_lin, law.zeta);
    directional_control(y, input, grid, |s| lam * s + rho + s.powf(zeta + T::one()))
}

/// u = −(ν + s^{−μ} + s^{μ}) B*y; ∥u∥ = νs + s^{1−μ} + s^{1+μ} → 0 as y → 0,
/// so the law is non-singular at the origin despite the negative power.
pub fn eval_nonlinear_control<T: Scalar>(
    y: &StateField<T>,
    law: &NonlinearFixedTimeLaw<T>,
    input: &InputOperator<T>,
    grid: &SpatialGrid<T>,
) -> Result<StateField<T>> {
    let (mu, nu) = (law.mu, law.nu);
    directional_control(y, input, grid, |s| {
        nu * s + s.powf(T::one() - mu) + s.powf(T::one() + mu)
    })
}
