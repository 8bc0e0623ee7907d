//! Post-run verification: settling detection, settling-time bounds, and the
//! discrete Lyapunov differential inequalities.
//!
//! Bounds implemented (V = ∥y∥², s = ∥y∥):
//!
//!   finite-time:   T ≤ ∥y₀∥/(ρβ − M)                      (needs ρβ > M)
//!   fixed-time:    T ≤ 1/(ρβ − M) + 1/(ζ β^{ζ+2})          (uniform in y₀)
//!   nonlinear:     T ≤ π/(2β²μ)                            (uniform in y₀)
//!                  T ≤ arctan(β^μ∥y₀∥^μ)/(β²μ)             (state-dependent)
//!
//! The inequality checker differences the discrete Lyapunov sequence
//! centrally and tests V̇ + c₁V^θ + c₂V^α ≤ tol sample-wise. Samples whose
//! stencil touches the settled region (V at or below `floor`) are excluded:
//! the final step into exact zero is a kink, not a differentiable point.

use crate::error::{Error, Result};
use crate::feedback::FeedbackLaw;
use crate::integrator::Trajectory;
use crate::scalar::{cst, Scalar};

/// V_k = ∥y_k∥², recomputed from the recorded norms.
pub fn lyapunov_series<T: Scalar>(traj: &Trajectory<T>) -> Vec<T> {
    traj.norms.iter().map(|&n| n * n).collect()
}

/// First recorded time from which ∥y∥ stays ≤ tol through the end of the
/// horizon. `None` when the trajectory never enters (or leaves) the band.
pub fn detect_settling<T: Scalar>(traj: &Trajectory<T>, tol: T) -> Option<T> {
    let last_above = traj.norms.iter().rposition(|&n| n > tol);
    match last_above {
        None => traj.times.first().copied(),
        Some(k) if k + 1 < traj.times.len() => Some(traj.times[k + 1]),
        Some(_) => None,
    }
}

/// ∥y₀∥/(ρβ − M); defined only under the decay margin ρβ > M.
pub fn finite_time_bound<T: Scalar>(norm_y0: T, rho: T, beta: T, m_bound: T) -> Result<T> {
    let margin = rho * beta - m_bound;
    if !(margin > T::zero()) {
        return Err(Error::model(format!(
            "finite-time bound undefined: rho*beta = {} does not exceed M = {m_bound}",
            rho * beta
        )));
    }
    if norm_y0 < T::zero() {
        return Err(Error::invalid("norm_y0 must be nonnegative"));
    }
    Ok(norm_y0 / margin)
}

/// 1/(ρβ − M) + 1/(ζ β^{ζ+2}), uniform over initial states.
pub fn fixed_time_bound<T: Scalar>(rho: T, beta: T, m_bound: T, zeta: T) -> Result<T> {
    let margin = rho * beta - m_bound;
    if !(margin > T::zero()) {
        return Err(Error::model(format!(
            "fixed-time bound undefined: rho*beta = {} does not exceed M = {m_bound}",
            rho * beta
        )));
    }
    if !(zeta > T::zero()) || !(beta > T::zero()) {
        return Err(Error::invalid(
            "fixed-time bound needs zeta > 0 and beta > 0",
        ));
    }
    Ok(T::one() / margin + T::one() / (zeta * beta.powf(zeta + cst::<T>(2.0))))
}

/// π/(2β²μ), uniform over initial states.
pub fn nonlinear_fixed_time_bound<T: Scalar>(beta: T, mu: T) -> Result<T> {
    if !(beta > T::zero()) || !(mu > T::zero() && mu < T::one()) {
        return Err(Error::invalid(
            "nonlinear bound needs beta > 0 and mu in (0,1)",
        ));
    }
    Ok(T::PI() / (cst::<T>(2.0) * beta * beta * mu))
}

/// arctan(β^μ ∥y₀∥^μ)/(β²μ): the sharper state-dependent settling estimate
/// behind the uniform π/(2β²μ) bound.
pub fn arctan_settling_estimate<T: Scalar>(norm_y0: T, beta: T, mu: T) -> Result<T> {
    if !(beta > T::zero()) || !(mu > T::zero() && mu < T::one()) {
        return Err(Error::invalid(
            "arctan estimate needs beta > 0 and mu in (0,1)",
        ));
    }
    if norm_y0 < T::zero() {
        return Err(Error::invalid("norm_y0 must be nonnegative"));
    }
    Ok((beta.powf(mu) * norm_y0.powf(mu)).atan() / (beta * beta * mu))
}

/// Parameters of the differential inequality V̇ + c₁V^θ + c₂V^α ≤ 0.
#[derive(Debug, Clone, Copy)]
pub struct InequalityCheck<T> {
    pub c1: T,
    pub theta: T,
    pub c2: Option<T>,
    pub alpha: Option<T>,
    /// Sample-wise slack granted to the discrete check (typically 10h).
    pub tol: T,
    /// Samples whose stencil dips to V ≤ floor are excluded.
    pub floor: T,
}

impl<T: Scalar> InequalityCheck<T> {
    /// Single-term check V̇ + c·V^θ ≤ tol.
    pub fn single(c1: T, theta: T, tol: T) -> Self {
        InequalityCheck {
            c1,
            theta,
            c2: None,
            alpha: None,
            tol,
            floor: cst::<T>(1e-12),
        }
    }

    /// Two-term check V̇ + c₁V^θ + c₂V^α ≤ tol.
    pub fn two_term(c1: T, theta: T, c2: T, alpha: T, tol: T) -> Self {
        InequalityCheck {
            c1,
            theta,
            c2: Some(c2),
            alpha: Some(alpha),
            tol,
            floor: cst::<T>(1e-12),
        }
    }

    /// Finite-time Lyapunov inequality V̇ ≤ −2(ρβ − M)√V.
    pub fn finite_time(rho: T, beta: T, m_bound: T, tol: T) -> Self {
        Self::single(cst::<T>(2.0) * (rho * beta - m_bound), cst::<T>(0.5), tol)
    }

    /// Fixed-time inequality V̇ ≤ −2(ρβ − M)√V − 2β^{ζ+2}V^{(ζ+2)/2}.
    pub fn fixed_time(rho: T, beta: T, m_bound: T, zeta: T, tol: T) -> Self {
        let two = cst::<T>(2.0);
        Self::two_term(
            two * (rho * beta - m_bound),
            cst::<T>(0.5),
            two * beta.powf(zeta + two),
            (zeta + two) / two,
            tol,
        )
    }

    /// Nonlinear inequality V̇ ≤ −2β^{2−μ}V^{1−μ/2} − 2β^{2+μ}V^{1+μ/2}.
    pub fn nonlinear(beta: T, mu: T, tol: T) -> Self {
        let two = cst::<T>(2.0);
        let half = cst::<T>(0.5);
        Self::two_term(
            two * beta.powf(two - mu),
            T::one() - half * mu,
            two * beta.powf(two + mu),
            T::one() + half * mu,
            tol,
        )
    }
}

/// Outcome of a differential-inequality check over one trajectory.
#[derive(Debug, Clone)]
pub struct InequalityReport<T> {
    /// Largest sample-wise value of V̇ + c₁V^θ + c₂V^α over eligible samples;
    /// `None` when no sample was eligible.
    pub worst_violation: Option<T>,
    /// Times where the violation exceeded tol.
    pub violation_times: Vec<T>,
    pub samples_checked: usize,
    pub passes: bool,
}

pub fn check_differential_inequality<T: Scalar>(
    traj: &Trajectory<T>,
    chk: &InequalityCheck<T>,
) -> Result<InequalityReport<T>> {
    if traj.len() < 3 {
        return Err(Error::invalid(
            "inequality check needs at least 3 samples for central differences",
        ));
    }
    let h = traj.step_size();
    if !(h > T::zero()) {
        return Err(Error::invalid("trajectory has no positive step size"));
    }
    let v = lyapunov_series(traj);
    let two_h = cst::<T>(2.0) * h;
    let mut worst: Option<T> = None;
    let mut violation_times = Vec::new();
    let mut samples = 0usize;
    for k in 1..v.len() - 1 {
        if !(v[k - 1] > chk.floor && v[k] > chk.floor && v[k + 1] > chk.floor) {
            continue;
        }
        let vdot = (v[k + 1] - v[k - 1]) / two_h;
        let mut lhs = vdot + chk.c1 * v[k].powf(chk.theta);
        if let (Some(c2), Some(alpha)) = (chk.c2, chk.alpha) {
            lhs = lhs + c2 * v[k].powf(alpha);
        }
        samples += 1;
        if worst.is_none_or(|w| lhs > w) {
            worst = Some(lhs);
        }
        if lhs > chk.tol {
            violation_times.push(traj.times[k]);
        }
    }
    let passes = worst.is_none_or(|w| w <= chk.tol);
    Ok(InequalityReport {
        worst_violation: worst,
        violation_times,
        samples_checked: samples,
        passes,
    })
}

/// One settling bound with its verdict against the measured settling time.
#[derive(Debug, Clone)]
pub struct BoundCheck<T> {
    pub name: &'static str,
    pub value: T,
    /// value + slack − t_settle; positive margins are good. `None` when the
    /// run never settled.
    pub margin: Option<T>,
    /// `None`: horizon too short to decide.
    pub satisfied: Option<bool>,
}

/// Settling time plus every bound the law's theorem provides.
#[derive(Debug, Clone)]
pub struct SettlingReport<T> {
    pub t_settle: Option<T>,
    pub bounds: Vec<BoundCheck<T>>,
}

/// Assemble the settling report for `traj` under `law`.
///
/// `slack` is the measurement allowance added to every bound (2h by
/// convention: one step of detection latency plus one of comparison).
/// Bounds whose preconditions fail (e.g. ρβ ≤ M) are skipped rather than
/// reported: a run without a valid decay margin has no theorem to check.
pub fn settling_report<T: Scalar>(
    traj: &Trajectory<T>,
    law: &FeedbackLaw<T>,
    beta: T,
    m_bound: T,
    settle_tol: T,
    slack: T,
) -> Result<SettlingReport<T>> {
    let norm_y0 = traj.norms.first().copied().unwrap_or_else(T::zero);
    let t_settle = detect_settling(traj, settle_tol);
    let horizon = traj.times.last().copied().unwrap_or_else(T::zero);

    let mut bounds = Vec::new();
    let mut push = |name: &'static str, value: T| {
        let margin = t_settle.map(|t| value + slack - t);
        let satisfied = match t_settle {
            Some(t) => Some(t <= value + slack),
            None if value + slack < horizon => Some(false),
            None => None,
        };
        bounds.push(BoundCheck {
            name,
            value,
            margin,
            satisfied,
        });
    };

    match law {
        FeedbackLaw::FiniteTime(l) => {
            if let Ok(b) = finite_time_bound(norm_y0, l.rho, beta, m_bound) {
                push("finite_time", b);
            }
        }
        FeedbackLaw::FixedTime(l) => {
            if let Ok(b) = fixed_time_bound(l.rho, beta, m_bound, l.zeta) {
                push("fixed_time_uniform", b);
            }
            if let Ok(b) = finite_time_bound(norm_y0, l.rho, beta, m_bound) {
                push("finite_time", b);
            }
        }
        FeedbackLaw::NonlinearFixedTime(l) => {
            if let Ok(b) = nonlinear_fixed_time_bound(beta, l.mu) {
                push("nonlinear_uniform", b);
            }
            if let Ok(b) = arctan_settling_estimate(norm_y0, beta, l.mu) {
                push("arctan_estimate", b);
            }
        }
    }

    Ok(SettlingReport { t_settle, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedback::{FiniteTimeLaw, NonlinearFixedTimeLaw};
    use crate::grid::StateField;
    use std::f64::consts::PI;

    fn traj_from_norms(h: f64, norms: Vec<f64>) -> Trajectory<f64> {
        let times = (0..norms.len()).map(|k| k as f64 * h).collect();
        let lyapunov = norms.iter().map(|n| n * n).collect();
        let control_norms = vec![0.0; norms.len()];
        Trajectory {
            times,
            norms,
            lyapunov,
            control_norms,
            snapshots: vec![(0.0, StateField::zeros(3))],
        }
    }

    #[test]
    fn settling_detection_cases() {
        let t = traj_from_norms(1.0, vec![1.0, 0.5, 0.0, 0.0, 0.0]);
        assert_eq!(detect_settling(&t, 0.0), Some(2.0));
        assert_eq!(detect_settling(&t, 0.6), Some(1.0));

        let t = traj_from_norms(1.0, vec![1.0, 0.0, 0.0, 0.1]);
        assert_eq!(detect_settling(&t, 0.0), None);

        let t = traj_from_norms(1.0, vec![0.0, 0.0]);
        assert_eq!(detect_settling(&t, 0.0), Some(0.0));
    }

    #[test]
    fn finite_time_bound_value() {
        // 0.70711/0.14716 with the canonical Case 1 constants
        let b = finite_time_bound(0.5f64.sqrt(), 10.0, 0.1, 0.85284).unwrap();
        assert!((b - 4.805_020_258_130_931).abs() < 1e-12);
        assert!((b - 4.8052).abs() < 1e-3);
        assert!(finite_time_bound(1.0, 1.0, 0.1, 0.85284).is_err());
        assert_eq!(finite_time_bound(0.0, 10.0, 0.1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn fixed_time_bound_value() {
        let b = fixed_time_bound::<f64>(2.0, 1.0, 0.85284, 1.0).unwrap();
        assert!((b - 1.871_717_981_798_528_6).abs() < 1e-12);
        assert!((b - 1.8717).abs() < 1e-3);
        assert!(fixed_time_bound(0.5, 1.0, 0.85284, 1.0).is_err());
    }

    #[test]
    fn nonlinear_bounds_values() {
        assert!((nonlinear_fixed_time_bound(1.0, 0.5).unwrap() - PI).abs() < 1e-14);
        assert!((nonlinear_fixed_time_bound(0.1, 0.5).unwrap() - PI / 0.01).abs() < 1e-10);
        let est = arctan_settling_estimate(0.5f64.sqrt(), 1.0, 0.5).unwrap();
        assert!((est - 1.398_370_329_082_047_7).abs() < 1e-12);
        // spec prints the rounded operand form arctan(0.84090)/0.5 ≈ 1.3983745
        assert!((est - (0.84090f64).atan() / 0.5).abs() < 1e-5);
        assert!(est < nonlinear_fixed_time_bound(1.0, 0.5).unwrap());
        assert_eq!(arctan_settling_estimate(0.0, 1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn inequality_check_passes_on_analytic_decay() {
        // V(t) = (1 − t)² satisfies V̇ = −2√V exactly.
        let h = 1e-3;
        let norms: Vec<f64> = (0..800).map(|k| 1.0 - k as f64 * h).collect();
        let t = traj_from_norms(h, norms);
        let chk = InequalityCheck::single(2.0, 0.5, 10.0 * h);
        let rep = check_differential_inequality(&t, &chk).unwrap();
        assert!(rep.passes, "worst = {:?}", rep.worst_violation);
        assert!(rep.violation_times.is_empty());
        assert!(rep.samples_checked > 700);
    }

    #[test]
    fn inequality_check_flags_stagnation() {
        let t = traj_from_norms(1e-3, vec![1.0; 100]);
        let chk = InequalityCheck::single(2.0, 0.5, 1e-2);
        let rep = check_differential_inequality(&t, &chk).unwrap();
        assert!(!rep.passes);
        assert!((rep.worst_violation.unwrap() - 2.0).abs() < 1e-12);
        assert!(!rep.violation_times.is_empty());
    }

    #[test]
    fn inequality_check_excludes_settled_kink() {
        // steep analytic decay into exact zero: the kink at settling must
        // not be sampled.
        let h = 1e-2;
        let mut norms: Vec<f64> = (0..50).map(|k| 0.5 - k as f64 * h).collect();
        norms.extend(std::iter::repeat_n(0.0, 20));
        let t = traj_from_norms(h, norms);
        let chk = InequalityCheck::single(2.0, 0.5, 10.0 * h);
        let rep = check_differential_inequality(&t, &chk).unwrap();
        assert!(rep.passes, "worst = {:?}", rep.worst_violation);
    }

    #[test]
    fn inequality_check_needs_enough_samples() {
        let t = traj_from_norms(1e-3, vec![1.0, 0.9]);
        let chk = InequalityCheck::single(1.0, 0.5, 1e-2);
        assert!(check_differential_inequality(&t, &chk).is_err());
    }

    #[test]
    fn two_term_check_uses_both_exponents() {
        let t = traj_from_norms(1e-3, vec![1.0; 10]);
        let chk = InequalityCheck::two_term(1.0, 0.5, 3.0, 1.5, 1e-3);
        let rep = check_differential_inequality(&t, &chk).unwrap();
        assert!((rep.worst_violation.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn settling_report_finite_time() {
        let law = FeedbackLaw::FiniteTime(FiniteTimeLaw::new(2.0, 0.0, 1.0).unwrap());
        let mut norms: Vec<f64> = (0..=500).map(|k| 1.0 - k as f64 * 2e-3).collect();
        norms.extend(std::iter::repeat_n(0.0, 100));
        let t = traj_from_norms(1e-3, norms);
        let rep = settling_report(&t, &law, 1.0, 0.0, 0.0, 2e-3).unwrap();
        // ∥y₀∥/(ρβ) = 0.5; the ramp reaches zero exactly at t = 0.5
        assert!((rep.t_settle.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(rep.bounds.len(), 1);
        assert_eq!(rep.bounds[0].name, "finite_time");
        assert_eq!(rep.bounds[0].satisfied, Some(true));
    }

    #[test]
    fn settling_report_skips_undefined_bounds() {
        // ρβ ≤ M: no theorem applies, report carries no bounds.
        let law = FeedbackLaw::FiniteTime(FiniteTimeLaw::new(1.0, 0.0, 0.1).unwrap());
        let t = traj_from_norms(1e-3, vec![1.0; 10]);
        let rep = settling_report(&t, &law, 0.1, 0.85284, 0.0, 2e-3).unwrap();
        assert!(rep.bounds.is_empty());
        assert_eq!(rep.t_settle, None);
    }

    #[test]
    fn settling_report_nonlinear_two_bounds() {
        let law = FeedbackLaw::NonlinearFixedTime(
            NonlinearFixedTimeLaw::new(0.5, 0.0, 0.0, 1.0).unwrap(),
        );
        let mut norms: Vec<f64> = (0..=100).map(|k| 1.0 - k as f64 * 1e-2).collect();
        norms.extend(std::iter::repeat_n(0.0, 50));
        let t = traj_from_norms(1e-2, norms);
        let rep = settling_report(&t, &law, 1.0, 0.0, 0.0, 2e-2).unwrap();
        assert_eq!(rep.bounds.len(), 2);
        assert_eq!(rep.bounds[0].name, "nonlinear_uniform");
        assert_eq!(rep.bounds[1].name, "arctan_estimate");
        assert_eq!(rep.bounds[0].satisfied, Some(true));
        // arctan(1)/0.5 = π/4·2 ≈ 1.5708 > 1.01 = t_settle
        assert_eq!(rep.bounds[1].satisfied, Some(true));
    }

    #[test]
    fn unsettled_run_against_short_bound_is_violation() {
        let law = FeedbackLaw::FiniteTime(FiniteTimeLaw::new(10.0, 0.0, 1.0).unwrap());
        // bound = 0.1/(10·1) = 0.01 but norms never reach zero over t ≤ 1
        let t = traj_from_norms(1e-2, vec![0.1; 101]);
        let rep = settling_report(&t, &law, 1.0, 0.0, 0.0, 2e-2).unwrap();
        assert_eq!(rep.t_settle, None);
        assert_eq!(rep.bounds[0].satisfied, Some(false));
        assert_eq!(rep.bounds[0].margin, None);
    }
}
