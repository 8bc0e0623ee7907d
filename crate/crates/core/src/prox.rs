//! Resolvents (proximal maps) of the three control functionals.
//!
//! All three functionals are radial in the weighted image z = m·y, so each
//! prox reduces to one scalar "scale equation" for s = ∥m·y*∥ plus a
//! pointwise diagonal solve. With the quadrature weight w (= grid spacing)
//! and s evaluated in the w-weighted norm:
//!
//!   g(y) = τ∥m·y∥            y_i = s·v_i/(s + τ m_i²),
//!                            s solves ∥m·v/(s + τm²)∥ = 1,
//!                            dead zone: ∥v/m∥ ≤ τ  ⇒  y = 0 exactly;
//!
//!   g(y) = τ∥m·y∥^{2+ζ}/(2+ζ)   y_i = v_i/(1 + τ s^ζ m_i²),
//!                            s solves ∥m·v/(1 + τ s^ζ m²)∥ = s;
//!
//!   g(y) = τΦ(y), Φ = ∥m·y∥^{2−μ}/(2−μ) + ∥m·y∥^{2+μ}/(2+μ) + ν∥m·y∥²/2
//!                            y_i = v_i/(1 + τ(ν + s^{−μ} + s^{μ}) m_i²),
//!                            s solves the matching scale equation.
//!
//! Each scale function is positive below its unique root and nonpositive
//! above it (uniqueness is inherited from strict convexity of the
//! objectives), so a sign-based bracket always works. Bisection runs on
//! geometric midpoints: during terminal collapse the root sits many decades
//! below the bracket top (for the Φ-prox, s* ≈ (∥v/m∥/τ)^{1/(1−μ)}), where
//! arithmetic midpoints would need hundreds of iterations; log-space
//! bisection reaches machine-precision relative width in ≲60 regardless of
//! scale. The same small-s asymptote seeds the left bracket. A bracket that
//! collapses below the normal floating-point range certifies that the exact
//! output would round to zero, and zero is returned; this underflow is the
//! mechanism behind exact-zero settling of the nonlinear law.

use crate::error::{Error, Result};
use crate::grid::norm_weighted;
use crate::grid::StateField;
use crate::operators::weighted_field_norm;
use crate::scalar::{as_f64, cst, Scalar};

/// Root-find controls shared by every prox evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ProxOptions<T> {
    /// Relative bracket width at which bisection stops.
    pub tol: T,
    /// Hard iteration cap; exceeding it is a numerical error.
    pub max_iter: usize,
}

impl<T: Scalar> Default for ProxOptions<T> {
    fn default() -> Self {
        // 8 ulps relative: resolvent error must stay far below the 1e-12
        // nonexpansiveness budget the tests hold the maps to.
        ProxOptions {
            tol: T::epsilon() * cst::<T>(8.0),
            max_iter: 200,
        }
    }
}

fn validate_common<T: Scalar>(
    v: &StateField<T>,
    tau: T,
    m: &StateField<T>,
    weight: T,
) -> Result<()> {
    if m.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: m.len(),
        });
    }
    if v.is_empty() {
        return Err(Error::invalid("prox input must be nonempty"));
    }
    if !(weight > T::zero()) {
        return Err(Error::invalid(format!(
            "quadrature weight must be positive, got {weight}"
        )));
    }
    if !(tau >= T::zero()) {
        return Err(Error::invalid(format!(
            "prox step tau must be nonnegative, got {tau}"
        )));
    }
    if m.values().iter().any(|&mi| !(mi > T::zero())) {
        return Err(Error::invalid("control multiplier m must be positive"));
    }
    if !v.is_finite() {
        return Err(Error::numerical("prox input is not finite"));
    }
    Ok(())
}

/// Geometric bisection for a scale function that is positive strictly below
/// its unique root and nonpositive at/above it. `Ok(None)` means the bracket
/// collapsed beneath the normal floating range: the root underflows and the
/// prox output is exactly zero.
fn bracketed_scale_root<T: Scalar>(
    f: impl Fn(T) -> T,
    hi0: T,
    seed_lo: T,
    opts: &ProxOptions<T>,
) -> Result<Option<T>> {
    debug_assert!(hi0 > T::zero());
    if f(hi0) >= T::zero() {
        // root at (or rounding-indistinguishable from) the bracket top
        return Ok(Some(hi0));
    }
    let mut hi = hi0;
    let mut lo = seed_lo;
    if !(lo > T::zero()) || !lo.is_finite() {
        lo = hi * cst::<T>(1e-6);
    }
    lo = lo.min(hi * cst::<T>(0.5));
    if !(lo > T::zero()) {
        return Ok(None);
    }
    let shrink = cst::<T>(1e-6);
    let floor = T::min_positive_value();
    while !(f(lo) > T::zero()) {
        hi = lo;
        lo = lo * shrink;
        if lo < floor {
            return Ok(None);
        }
    }
    let mut iter = 0usize;
    while hi - lo > opts.tol * hi {
        let mid = lo.sqrt() * hi.sqrt();
        if !(mid > lo && mid < hi) {
            break; // bracket at floating-point resolution
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
        if iter >= opts.max_iter {
            return Err(Error::ProxNoConvergence {
                iterations: iter,
                lo: as_f64(lo),
                hi: as_f64(hi),
                width: as_f64(hi - lo),
            });
        }
    }
    Ok(Some((lo + hi) * cst::<T>(0.5)))
}

/// Resolvent of τ∥m·y∥: soft shrinkage toward the dead zone.
///
/// `weight` is the quadrature weight of the underlying inner product (grid
/// spacing for PDE states, 1 for plain Euclidean vectors).
pub fn prox_weighted_norm<T: Scalar>(
    v: &StateField<T>,
    tau: T,
    m: &StateField<T>,
    weight: T,
    opts: &ProxOptions<T>,
) -> Result<StateField<T>> {
    validate_common(v, tau, m, weight)?;
    if tau == T::zero() {
        return Ok(v.clone());
    }
    // dead zone: v/m has norm ≤ τ exactly when 0 is optimal
    let over_m: Vec<T> = v
        .values()
        .iter()
        .zip(m.values())
        .map(|(&vi, &mi)| vi / mi)
        .collect();
    if norm_weighted(&over_m, weight) <= tau {
        return Ok(StateField::zeros(v.len()));
    }
    let hi = weighted_field_norm(v.values(), m.values(), weight);
    // g(s) − 1 with g(s) = ∥m·v/(s + τm²)∥; decreasing, g(0) > 1 off the
    // dead zone.
    let f = |s: T| {
        let scaled: Vec<T> = v
            .values()
            .iter()
            .zip(m.values())
            .map(|(&vi, &mi)| mi * vi / (s + tau * mi * mi))
            .collect();
        norm_weighted(&scaled, weight) - T::one()
    };
    match bracketed_scale_root(f, hi, hi * cst::<T>(1e-6), opts)? {
        None => Ok(StateField::zeros(v.len())),
        Some(s) => Ok(StateField::new(
            v.values()
                .iter()
                .zip(m.values())
                .map(|(&vi, &mi)| s * vi / (s + tau * mi * mi))
                .collect(),
        )),
    }
}

/// Resolvent of τ∥m·y∥^{2+ζ}/(2+ζ).
pub fn prox_power_functional<T: Scalar>(
    v: &StateField<T>,
    tau: T,
    m: &StateField<T>,
    zeta: T,
    weight: T,
    opts: &ProxOptions<T>,
) -> Result<StateField<T>> {
    validate_common(v, tau, m, weight)?;
    if !(zeta > T::zero()) {
        return Err(Error::invalid(format!("zeta must be positive, got {zeta}")));
    }
    if tau == T::zero() {
        return Ok(v.clone());
    }
    let hi = weighted_field_norm(v.values(), m.values(), weight);
    if hi == T::zero() {
        return Ok(StateField::zeros(v.len()));
    }
    let f = |s: T| {
        let c = tau * s.powf(zeta);
        let scaled: Vec<T> = v
            .values()
            .iter()
            .zip(m.values())
            .map(|(&vi, &mi)| mi * vi / (T::one() + c * mi * mi))
            .collect();
        norm_weighted(&scaled, weight) - s
    };
    match bracketed_scale_root(f, hi, hi * cst::<T>(1e-6), opts)? {
        None => Ok(StateField::zeros(v.len())),
        Some(s) => {
            let c = tau * s.powf(zeta);
            Ok(StateField::new(
                v.values()
                    .iter()
                    .zip(m.values())
                    .map(|(&vi, &mi)| vi / (T::one() + c * mi * mi))
                    .collect(),
            ))
        }
    }
}

/// Resolvent of τΦ with Φ = ∥m·y∥^{2−μ}/(2−μ) + ∥m·y∥^{2+μ}/(2+μ) + ν∥m·y∥²/2.
pub fn prox_phi<T: Scalar>(
    v: &StateField<T>,
    tau: T,
    m: &StateField<T>,
    mu: T,
    nu: T,
    weight: T,
    opts: &ProxOptions<T>,
) -> Result<StateField<T>> {
    validate_common(v, tau, m, weight)?;
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::invalid(format!("mu must lie in (0,1), got {mu}")));
    }
    if nu < T::zero() {
        return Err(Error::invalid(format!("nu must be nonnegative, got {nu}")));
    }
    if tau == T::zero() {
        return Ok(v.clone());
    }
    let hi = weighted_field_norm(v.values(), m.values(), weight);
    if hi == T::zero() {
        return Ok(StateField::zeros(v.len()));
    }
    let denom_coef = |s: T| nu + s.powf(-mu) + s.powf(mu);
    let f = |s: T| {
        let c = tau * denom_coef(s);
        let scaled: Vec<T> = v
            .values()
            .iter()
            .zip(m.values())
            .map(|(&vi, &mi)| mi * vi / (T::one() + c * mi * mi))
            .collect();
        norm_weighted(&scaled, weight) - s
    };
    // Small-s asymptote of the scale equation: s^{1−μ} ≈ ∥v/m∥/τ. Seeding the
    // left bracket two decades under it keeps the shrink loop short even in
    // the doubly-exponential terminal collapse.
    let over_m: Vec<T> = v
        .values()
        .iter()
        .zip(m.values())
        .map(|(&vi, &mi)| vi / mi)
        .collect();
    let asym =
        (norm_weighted(&over_m, weight) / tau).powf(T::one() / (T::one() - mu)) * cst::<T>(1e-2);
    match bracketed_scale_root(f, hi, asym, opts)? {
        None => Ok(StateField::zeros(v.len())),
        Some(s) => {
            let c = tau * denom_coef(s);
            Ok(StateField::new(
                v.values()
                    .iter()
                    .zip(m.values())
                    .map(|(&vi, &mi)| vi / (T::one() + c * mi * mi))
                    .collect(),
            ))
        }
    }
}
