//! Scenario configuration, the two canonical cases, execution, and file
//! output.
//!
//! Configs are JSON. `case` selects a template:
//!
//!   case1_perturbed   a(x) = x²+0.01, matched perturbation sin(t)cos(x),
//!                     finite- or fixed-time law, hard gain gate
//!   case2_nonlinear   same profile, unperturbed, nonlinear f with one μ
//!                     shared by the f term and the law
//!   custom            every piece taken verbatim, no gate (the gain margin
//!                     is still computed and reported)
//!
//! Analytic constants (β, M, ∥(BB*)⁻¹∥) resolve from the chosen coefficient
//! profile unless declared under `constants`; declared values are
//! cross-checked against the discretized model at instantiation.
//!
//! This layer is deliberately `f64`-only; genericity lives in the math
//! modules underneath.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    arctan_settling_estimate, check_differential_inequality, detect_settling, fixed_time_bound,
    nonlinear_fixed_time_bound, settling_report, InequalityCheck,
};
use crate::error::{Error, Result};
use crate::feedback::{
    validate_gain, FeedbackLaw, FiniteTimeLaw, FixedTimeLaw, GainCheck, NonlinearFixedTimeLaw,
};
use crate::grid::{SineBasis, SpatialGrid, SpectralCoeffs, StateField};
use crate::integrator::{run, ClosedLoop, Scheme, SchemeConfig, Trajectory};
use crate::operators::{
    perturbation_bound, profile_unit, profile_x2_plus_001, DiffusionOperator, InputOperator,
    Nonlinearity, NonlinearityKind, OperatorSet, Perturbation, PerturbationKind,
};

/// Declared L∞-in-time L²-in-space bound of sin(t)cos(x); rounds the exact
/// sup ∥cos∥ = 0.85283313... upward.
pub const CASE1_M_BOUND: f64 = 0.85284;
const CASE1_BETA: f64 = 0.1;
const CASE1_INV_NORM: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Case1Perturbed,
    Case2Nonlinear,
    Custom,
}

impl CaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseKind::Case1Perturbed => "case1_perturbed",
            CaseKind::Case2Nonlinear => "case2_nonlinear",
            CaseKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSpec {
    Unit,
    #[serde(rename = "x2_plus_001")]
    X2Plus001,
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationSpec {
    Zero,
    SinTCosX,
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearitySpec {
    Zero,
    #[serde(rename = "case2_f")]
    Case2F {
        mu: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InitialSpec {
    #[serde(rename = "sin_pi_x")]
    SinPiX {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    #[serde(rename = "sin_2pi_x")]
    Sin2PiX {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    #[serde(rename = "x_times_1mx")]
    XTimes1mX {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    #[serde(rename = "gauss_bump")]
    GaussBump {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// Coefficients in the sine basis, lowest mode first.
    #[serde(rename = "custom")]
    Custom {
        coeffs: Vec<f64>,
        #[serde(default = "default_scale")]
        scale: f64,
    },
}

fn default_scale() -> f64 {
    1.0
}

impl InitialSpec {
    pub fn sin_pi_x(scale: f64) -> Self {
        InitialSpec::SinPiX { scale }
    }

    pub fn sample(&self, grid: &SpatialGrid<f64>) -> Result<StateField<f64>> {
        use std::f64::consts::PI;
        Ok(match self {
            InitialSpec::SinPiX { scale } => StateField::from_fn(grid, |x| scale * (PI * x).sin()),
            InitialSpec::Sin2PiX { scale } => {
                StateField::from_fn(grid, |x| scale * (2.0 * PI * x).sin())
            }
            InitialSpec::XTimes1mX { scale } => {
                StateField::from_fn(grid, |x| scale * x * (1.0 - x))
            }
            InitialSpec::GaussBump { scale } => {
                StateField::from_fn(grid, |x| scale * (-5.0 * (x - 0.5).powi(2)).exp())
            }
            InitialSpec::Custom { coeffs, scale } => {
                if coeffs.is_empty() {
                    StateField::zeros(grid.len())
                } else {
                    let basis = SineBasis::new(grid, coeffs.len())?;
                    basis
                        .synthesize(&SpectralCoeffs::new(coeffs.clone()))?
                        .scaled(*scale)
                }
            }
        })
    }

    pub fn describe(&self) -> String {
        match self {
            InitialSpec::SinPiX { scale } => format!("sin_pi_x(scale={scale})"),
            InitialSpec::Sin2PiX { scale } => format!("sin_2pi_x(scale={scale})"),
            InitialSpec::XTimes1mX { scale } => format!("x_times_1mx(scale={scale})"),
            InitialSpec::GaussBump { scale } => format!("gauss_bump(scale={scale})"),
            InitialSpec::Custom { coeffs, scale } => {
                format!("custom({} coeffs, scale={scale})", coeffs.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawSpec {
    FiniteTime { rho: f64 },
    FixedTime { rho: f64, zeta: f64 },
    NonlinearFixedTime { mu: f64 },
}

/// Declared model constants; anything left out resolves analytically from
/// the coefficient profile (and the perturbation kind for `m_bound`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsSpec {
    pub beta: Option<f64>,
    pub m_bound: Option<f64>,
    pub inv_norm_bbstar: Option<f64>,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeSpec {
    #[default]
    ProxSplitting,
    ExplicitRegularized,
}

impl From<SchemeSpec> for Scheme {
    fn from(s: SchemeSpec) -> Scheme {
        match s {
            SchemeSpec::ProxSplitting => Scheme::ProxSplitting,
            SchemeSpec::ExplicitRegularized => Scheme::ExplicitRegularized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub case: CaseKind,
    #[serde(default)]
    pub a: Option<CoefficientSpec>,
    #[serde(default = "default_y0")]
    pub y0: InitialSpec,
    #[serde(default)]
    pub law: Option<LawSpec>,
    #[serde(default)]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default)]
    pub nonlinearity: Option<NonlinearitySpec>,
    #[serde(default)]
    pub constants: ConstantsSpec,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default)]
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub eps_reg: Option<f64>,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub settle_tol: Option<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_y0() -> InitialSpec {
    InitialSpec::SinPiX { scale: 1.0 }
}
fn default_n() -> usize {
    201
}
fn default_modes() -> usize {
    100
}
fn default_h() -> f64 {
    1e-3
}
fn default_t_max() -> f64 {
    10.0
}
fn default_stride() -> usize {
    100
}

impl ScenarioConfig {
    /// All defaults for `case`; law left unset.
    pub fn new(case: CaseKind) -> Self {
        ScenarioConfig {
            case,
            a: None,
            y0: default_y0(),
            law: None,
            perturbation: None,
            nonlinearity: None,
            constants: ConstantsSpec::default(),
            n: default_n(),
            modes: default_modes(),
            h: default_h(),
            t_max: default_t_max(),
            scheme: SchemeSpec::default(),
            eps_reg: None,
            snapshot_stride: default_stride(),
            settle_tol: None,
            out_dir: None,
        }
    }

    /// Apply the case template and fill every constant.
    pub fn resolve(&self) -> Result<ResolvedScenario> {
        let (a, perturbation, nonlinearity, law, enforce_gain) = match self.case {
            CaseKind::Case1Perturbed => {
                let a = self.a.clone().unwrap_or(CoefficientSpec::X2Plus001);
                let p = self
                    .perturbation
                    .clone()
                    .unwrap_or(PerturbationSpec::SinTCosX);
                if let Some(nl) = &self.nonlinearity {
                    if !matches!(nl, NonlinearitySpec::Zero) {
                        return Err(Error::config(
                            "case1_perturbed has no nonlinear term; use case2_nonlinear or custom",
                        ));
                    }
                }
                let law = match &self.law {
                    Some(l @ (LawSpec::FiniteTime { .. } | LawSpec::FixedTime { .. })) => l.clone(),
                    Some(LawSpec::NonlinearFixedTime { .. }) => {
                        return Err(Error::config(
                            "case1_perturbed takes the finite_time or fixed_time law",
                        ))
                    }
                    None => {
                        return Err(Error::config(
                            "case1_perturbed needs a law: finite_time or fixed_time",
                        ))
                    }
                };
                (a, p, NonlinearitySpec::Zero, law, true)
            }
            CaseKind::Case2Nonlinear => {
                let a = self.a.clone().unwrap_or(CoefficientSpec::X2Plus001);
                if let Some(p) = &self.perturbation {
                    if !matches!(p, PerturbationSpec::Zero) {
                        return Err(Error::config(
                            "case2_nonlinear is unperturbed; use custom to mix f with a perturbation",
                        ));
                    }
                }
                let law_mu = match &self.law {
                    Some(LawSpec::NonlinearFixedTime { mu }) => Some(*mu),
                    Some(_) => {
                        return Err(Error::config(
                            "case2_nonlinear takes the nonlinear_fixed_time law",
                        ))
                    }
                    None => None,
                };
                let nl_mu = match &self.nonlinearity {
                    Some(NonlinearitySpec::Case2F { mu }) => Some(*mu),
                    Some(NonlinearitySpec::Zero) => {
                        return Err(Error::config(
                            "case2_nonlinear needs the case2_f nonlinearity",
                        ))
                    }
                    None => None,
                };
                // one mu drives both the f term and the law
                let mu = match (law_mu, nl_mu) {
                    (Some(a), Some(b)) if a == b => a,
                    (Some(a), Some(b)) => {
                        return Err(Error::config(format!(
                            "case2_nonlinear uses one mu for both f and the law, got {a} and {b}"
                        )))
                    }
                    (Some(m), None) | (None, Some(m)) => m,
                    (None, None) => {
                        return Err(Error::config(
                            "case2_nonlinear needs mu, via the law or the nonlinearity",
                        ))
                    }
                };
                (
                    a,
                    PerturbationSpec::Zero,
                    NonlinearitySpec::Case2F { mu },
                    LawSpec::NonlinearFixedTime { mu },
                    false,
                )
            }
            CaseKind::Custom => {
                let a = self.a.clone().unwrap_or(CoefficientSpec::Unit);
                let p = self.perturbation.clone().unwrap_or(PerturbationSpec::Zero);
                let nl = self.nonlinearity.clone().unwrap_or(NonlinearitySpec::Zero);
                let law = self
                    .law
                    .clone()
                    .ok_or_else(|| Error::config("custom scenario needs an explicit law"))?;
                (a, p, nl, law, false)
            }
        };

        let (beta_a, inv_a) = analytic_constants(&a)?;
        Ok(ResolvedScenario {
            case: self.case,
            a,
            y0: self.y0.clone(),
            law,
            beta: self.constants.beta.unwrap_or(beta_a),
            m_bound: self
                .constants
                .m_bound
                .unwrap_or_else(|| default_m_bound(&perturbation)),
            inv_norm_bbstar: self.constants.inv_norm_bbstar.unwrap_or(inv_a),
            kappa: self.constants.kappa.unwrap_or(0.0),
            perturbation,
            nonlinearity,
            n: self.n,
            modes: self.modes,
            h: self.h,
            t_max: self.t_max,
            scheme: self.scheme.into(),
            eps_reg: self.eps_reg,
            snapshot_stride: self.snapshot_stride,
            settle_tol: self.settle_tol,
            enforce_gain,
        })
    }

    pub fn instantiate(&self) -> Result<Instance> {
        self.resolve()?.instantiate()
    }
}

/// Exact β = inf √a and ∥(BB*)⁻¹∥ = 1/inf a of the built-in profiles.
fn analytic_constants(a: &CoefficientSpec) -> Result<(f64, f64)> {
    match a {
        CoefficientSpec::Unit => Ok((1.0, 1.0)),
        CoefficientSpec::X2Plus001 => Ok((CASE1_BETA, CASE1_INV_NORM)),
        CoefficientSpec::Constant { value } => {
            if !(*value > 0.0) {
                return Err(Error::model(format!(
                    "constant coefficient must be positive, got {value}"
                )));
            }
            Ok((value.sqrt(), 1.0 / value))
        }
    }
}

/// Analytic sup over time of ∥η(t,·)∥ for the built-in kinds.
fn default_m_bound(p: &PerturbationSpec) -> f64 {
    match p {
        PerturbationSpec::Zero => 0.0,
        PerturbationSpec::SinTCosX => CASE1_M_BOUND,
        PerturbationSpec::Constant { value } => value.abs(),
    }
}

/// Config after template application: every constant concrete.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub case: CaseKind,
    pub a: CoefficientSpec,
    pub y0: InitialSpec,
    pub law: LawSpec,
    pub perturbation: PerturbationSpec,
    pub nonlinearity: NonlinearitySpec,
    pub beta: f64,
    pub m_bound: f64,
    pub inv_norm_bbstar: f64,
    pub kappa: f64,
    pub n: usize,
    pub modes: usize,
    pub h: f64,
    pub t_max: f64,
    pub scheme: Scheme,
    pub eps_reg: Option<f64>,
    pub snapshot_stride: usize,
    pub settle_tol: Option<f64>,
    pub enforce_gain: bool,
}

impl ResolvedScenario {
    /// Build the discrete model and validate every declared constant
    /// against it. The gain gate is enforced here for case 1.
    pub fn instantiate(&self) -> Result<Instance> {
        let grid = SpatialGrid::new(self.n)?;
        let a_field = coefficient_field(&self.a, &grid);
        let input = InputOperator::from_profile(&a_field, &grid)?
            .with_declared(Some(self.beta), Some(self.inv_norm_bbstar))?;

        let kind = match &self.perturbation {
            PerturbationSpec::Zero => PerturbationKind::Zero,
            PerturbationSpec::SinTCosX => PerturbationKind::SinTCosX,
            PerturbationSpec::Constant { value } => PerturbationKind::Constant(*value),
        };
        let perturbation = Perturbation::new(kind, self.m_bound)?;
        if !perturbation.is_zero() {
            let measured = perturbation_bound(&perturbation, self.t_max, 10_001, &grid)?;
            if self.m_bound < measured * (1.0 - 1e-9) {
                return Err(Error::model(format!(
                    "declared perturbation bound {} is below the measured sup {measured}",
                    self.m_bound
                )));
            }
        }

        let nonlinearity = match &self.nonlinearity {
            NonlinearitySpec::Zero => Nonlinearity::new(NonlinearityKind::Zero, self.kappa)?,
            NonlinearitySpec::Case2F { mu } => {
                Nonlinearity::new(NonlinearityKind::Case2F { mu: *mu }, self.kappa)?
            }
        };

        let diffusion = DiffusionOperator::heat(self.modes);
        let omega = diffusion.semigroup_type();
        let law = match &self.law {
            LawSpec::FiniteTime { rho } => {
                FeedbackLaw::FiniteTime(FiniteTimeLaw::new(*rho, omega, self.beta)?)
            }
            LawSpec::FixedTime { rho, zeta } => {
                FeedbackLaw::FixedTime(FixedTimeLaw::new(*rho, omega, self.beta, *zeta)?)
            }
            LawSpec::NonlinearFixedTime { mu } => FeedbackLaw::NonlinearFixedTime(
                NonlinearFixedTimeLaw::new(*mu, self.kappa, omega, self.beta)?,
            ),
        };

        let gain = match &self.law {
            LawSpec::FiniteTime { rho } | LawSpec::FixedTime { rho, .. } => {
                let check = validate_gain(*rho, self.m_bound, self.beta, self.inv_norm_bbstar)?;
                Some(if self.enforce_gain {
                    check.require()?
                } else {
                    check
                })
            }
            LawSpec::NonlinearFixedTime { .. } => None,
        };

        let y0 = self.y0.sample(&grid)?;
        if !y0.is_finite() {
            return Err(Error::numerical("initial state is not finite"));
        }

        let mut scheme_cfg = SchemeConfig::new(self.h, self.t_max, self.scheme);
        if let Some(e) = self.eps_reg {
            scheme_cfg.eps_reg = e;
        }
        if let Some(s) = self.settle_tol {
            scheme_cfg.settle_tol = s;
        }
        scheme_cfg.snapshot_stride = self.snapshot_stride;
        scheme_cfg.validate()?;

        Ok(Instance {
            case: self.case,
            grid,
            ops: OperatorSet {
                diffusion,
                input,
                perturbation,
                nonlinearity,
            },
            law,
            y0,
            scheme_cfg,
            gain,
        })
    }
}

fn coefficient_field(a: &CoefficientSpec, grid: &SpatialGrid<f64>) -> StateField<f64> {
    match a {
        CoefficientSpec::Unit => profile_unit(grid),
        CoefficientSpec::X2Plus001 => profile_x2_plus_001(grid),
        CoefficientSpec::Constant { value } => StateField::from_fn(grid, |_| *value),
    }
}

/// A fully assembled closed loop ready to integrate.
#[derive(Debug)]
pub struct Instance {
    pub case: CaseKind,
    pub grid: SpatialGrid<f64>,
    pub ops: OperatorSet<f64>,
    pub law: FeedbackLaw<f64>,
    pub y0: StateField<f64>,
    pub scheme_cfg: SchemeConfig<f64>,
    /// Present for laws with a gain parameter; for case 1 it has already
    /// passed.
    pub gain: Option<GainCheck<f64>>,
}

impl Instance {
    pub fn run(&self) -> Result<Trajectory<f64>> {
        let lp = ClosedLoop::new(&self.grid, &self.ops, &self.law)?;
        run(&lp, &self.y0, &self.scheme_cfg)
    }
}

/// The analytic scalar test problem ẏ = −ρ·sign(y), ρ = 2, y(0) = 1, posed
/// on the solver's own stack: no diffusion, unit profile, first sine mode.
/// Its settling time is exactly 0.5.
pub fn scalar_sign_oracle(h: f64) -> Result<Instance> {
    let grid = SpatialGrid::new(33)?;
    let a = profile_unit(&grid);
    let input = InputOperator::from_profile(&a, &grid)?;
    let diffusion = DiffusionOperator::none(33);
    let law = FeedbackLaw::FiniteTime(FiniteTimeLaw::new(2.0, 0.0, 1.0)?);
    let y0 = SineBasis::new(&grid, 1)?.synthesize(&SpectralCoeffs::new(vec![1.0]))?;
    let scheme_cfg = SchemeConfig::new(h, 1.0, Scheme::ProxSplitting);
    scheme_cfg.validate()?;
    Ok(Instance {
        case: CaseKind::Custom,
        grid,
        ops: OperatorSet {
            diffusion,
            input,
            perturbation: Perturbation::zero(),
            nonlinearity: Nonlinearity::zero(),
        },
        law,
        y0,
        scheme_cfg,
        gain: None,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GainSummary {
    pub rho: f64,
    pub threshold: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSummary {
    pub name: String,
    pub value: f64,
    pub margin: Option<f64>,
    pub satisfied: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalitySummary {
    pub c1: f64,
    pub theta: f64,
    pub c2: Option<f64>,
    pub alpha: Option<f64>,
    pub tol: f64,
    pub worst_violation: Option<f64>,
    pub samples_checked: usize,
    pub violation_count: usize,
    pub passes: bool,
}

/// Everything report.json carries.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisSummary {
    pub case: &'static str,
    pub law: String,
    pub scheme: &'static str,
    pub n: usize,
    pub modes: usize,
    pub h: f64,
    pub t_max: f64,
    pub beta: f64,
    pub m_bound: f64,
    pub inv_norm_bbstar: f64,
    pub kappa: f64,
    pub gain: Option<GainSummary>,
    pub norm_y0: f64,
    pub final_norm: f64,
    pub t_settle: Option<f64>,
    pub bounds: Vec<BoundSummary>,
    pub inequality: Option<InequalitySummary>,
    /// `None` when no bound applies or the horizon is too short to decide.
    pub all_bounds_satisfied: Option<bool>,
}

fn law_string(law: &FeedbackLaw<f64>) -> String {
    match law {
        FeedbackLaw::FiniteTime(l) => format!("finite_time(rho={})", l.rho),
        FeedbackLaw::FixedTime(l) => format!("fixed_time(rho={}, zeta={})", l.rho, l.zeta),
        FeedbackLaw::NonlinearFixedTime(l) => format!("nonlinear_fixed_time(mu={})", l.mu),
    }
}

/// Settling report, bound margins, and the law's Lyapunov inequality,
/// checked at tolerance 10h with measurement slack 2h on the bounds.
pub fn analyze_run(inst: &Instance, traj: &Trajectory<f64>) -> Result<AnalysisSummary> {
    let h = inst.scheme_cfg.h;
    let beta = inst.ops.input.beta();
    let m = inst.ops.perturbation.bound();
    let slack = 2.0 * h;
    let tol = 10.0 * h;

    let rep = settling_report(traj, &inst.law, beta, m, inst.scheme_cfg.settle_tol, slack)?;

    let chk = match &inst.law {
        FeedbackLaw::FiniteTime(l) => {
            (l.rho * beta > m).then(|| InequalityCheck::finite_time(l.rho, beta, m, tol))
        }
        FeedbackLaw::FixedTime(l) => {
            (l.rho * beta > m).then(|| InequalityCheck::fixed_time(l.rho, beta, m, l.zeta, tol))
        }
        FeedbackLaw::NonlinearFixedTime(l) => Some(InequalityCheck::nonlinear(beta, l.mu, tol)),
    };
    let inequality = match chk {
        Some(c) if traj.len() >= 3 => {
            let r = check_differential_inequality(traj, &c)?;
            Some(InequalitySummary {
                c1: c.c1,
                theta: c.theta,
                c2: c.c2,
                alpha: c.alpha,
                tol: c.tol,
                worst_violation: r.worst_violation,
                samples_checked: r.samples_checked,
                violation_count: r.violation_times.len(),
                passes: r.passes,
            })
        }
        _ => None,
    };

    let bounds: Vec<BoundSummary> = rep
        .bounds
        .iter()
        .map(|b| BoundSummary {
            name: b.name.to_string(),
            value: b.value,
            margin: b.margin,
            satisfied: b.satisfied,
        })
        .collect();
    let all_bounds_satisfied = if bounds.is_empty() {
        None
    } else if bounds.iter().any(|b| b.satisfied == Some(false)) {
        Some(false)
    } else if bounds.iter().all(|b| b.satisfied == Some(true)) {
        Some(true)
    } else {
        None
    };

    Ok(AnalysisSummary {
        case: inst.case.as_str(),
        law: law_string(&inst.law),
        scheme: match inst.scheme_cfg.scheme {
            Scheme::ProxSplitting => "prox_splitting",
            Scheme::ExplicitRegularized => "explicit_regularized",
        },
        n: inst.grid.len(),
        modes: inst.ops.diffusion.modes(),
        h,
        t_max: inst.scheme_cfg.t_max,
        beta,
        m_bound: m,
        inv_norm_bbstar: inst.ops.input.inv_norm_bbstar(),
        kappa: inst.ops.nonlinearity.kappa(),
        gain: inst.gain.map(|g| GainSummary {
            rho: g.rho,
            threshold: g.threshold,
            passes: g.passes,
        }),
        norm_y0: traj.norms.first().copied().unwrap_or(0.0),
        final_norm: traj.final_norm(),
        t_settle: rep.t_settle,
        bounds,
        inequality,
        all_bounds_satisfied,
    })
}

/// Paths and results of one executed scenario.
#[derive(Debug)]
pub struct RunArtifacts {
    pub trajectory: Trajectory<f64>,
    pub summary: AnalysisSummary,
    pub timeseries_path: PathBuf,
    pub snapshots_path: PathBuf,
    pub report_path: PathBuf,
}

/// Run `cfg` and write timeseries.csv, snapshots.csv, and report.json.
/// `out_dir` overrides the config's own `out_dir`; the fallback is ./out.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunArtifacts> {
    let inst = cfg.instantiate()?;
    let traj = inst.run()?;
    let summary = analyze_run(&inst, &traj)?;

    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;

    let timeseries_path = dir.join("timeseries.csv");
    write_timeseries(&timeseries_path, &traj, summary.t_settle)?;
    let snapshots_path = dir.join("snapshots.csv");
    write_snapshots(&snapshots_path, &traj)?;
    let report_path = dir.join("report.json");
    write_report(&report_path, &summary)?;

    Ok(RunArtifacts {
        trajectory: traj,
        summary,
        timeseries_path,
        snapshots_path,
        report_path,
    })
}

fn write_timeseries(path: &Path, traj: &Trajectory<f64>, t_settle: Option<f64>) -> Result<()> {
    let mut s = String::with_capacity(64 * (traj.len() + 1));
    s.push_str("t,norm,lyapunov,control_norm,settled\n");
    for k in 0..traj.len() {
        let settled = t_settle.is_some_and(|ts| traj.times[k] >= ts);
        writeln!(
            s,
            "{:.9},{:.12e},{:.12e},{:.12e},{}",
            traj.times[k],
            traj.norms[k],
            traj.lyapunov[k],
            traj.control_norms[k],
            u8::from(settled)
        )
        .expect("write to string");
    }
    fs::write(path, s)?;
    Ok(())
}

fn write_snapshots(path: &Path, traj: &Trajectory<f64>) -> Result<()> {
    let mut s = String::new();
    s.push_str("t,x,y\n");
    for (t, field) in &traj.snapshots {
        let n = field.len();
        for (i, &y) in field.values().iter().enumerate() {
            let x = (i + 1) as f64 / (n + 1) as f64;
            writeln!(s, "{t:.9},{x:.9},{y:.12e}").expect("write to string");
        }
    }
    fs::write(path, s)?;
    Ok(())
}

fn write_report(path: &Path, summary: &AnalysisSummary) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::config(format!("report serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// One sweep member; `error` rows keep the table rectangular with an
/// unset settling time and a failed pass flag.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub y0: String,
    pub norm_y0: Option<f64>,
    pub t_settle: Option<f64>,
    pub uniform_bound: Option<f64>,
    pub arctan_estimate: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub all_pass: bool,
}

/// Run the template once per initial condition (rows in parallel) and check
/// each settling time against the law's uniform bound. Only fixed-time and
/// nonlinear laws carry one.
pub fn sweep_initial_conditions(
    cfg: &ScenarioConfig,
    y0_list: &[InitialSpec],
) -> Result<SweepTable> {
    let resolved = cfg.resolve()?;
    if matches!(resolved.law, LawSpec::FiniteTime { .. }) {
        return Err(Error::config(
            "sweep needs a uniform settling bound; use a fixed_time or nonlinear_fixed_time law",
        ));
    }

    let rows: Vec<SweepRow> = y0_list
        .par_iter()
        .map(|y0| {
            let mut member = cfg.clone();
            member.y0 = y0.clone();
            match sweep_row(&member) {
                Ok(row) => row,
                Err(e) => SweepRow {
                    y0: y0.describe(),
                    norm_y0: None,
                    t_settle: None,
                    uniform_bound: None,
                    arctan_estimate: None,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let all_pass = rows.iter().all(|r| r.pass);
    Ok(SweepTable { rows, all_pass })
}

fn sweep_row(cfg: &ScenarioConfig) -> Result<SweepRow> {
    let inst = cfg.instantiate()?;
    let traj = inst.run()?;
    let h = inst.scheme_cfg.h;
    let beta = inst.ops.input.beta();
    let m = inst.ops.perturbation.bound();
    let norm_y0 = traj.norms.first().copied().unwrap_or(0.0);
    let t_settle = detect_settling(&traj, inst.scheme_cfg.settle_tol);
    let (uniform, arctan) = match &inst.law {
        FeedbackLaw::FixedTime(l) => (fixed_time_bound(l.rho, beta, m, l.zeta)?, None),
        FeedbackLaw::NonlinearFixedTime(l) => (
            nonlinear_fixed_time_bound(beta, l.mu)?,
            Some(arctan_settling_estimate(norm_y0, beta, l.mu)?),
        ),
        FeedbackLaw::FiniteTime(_) => return Err(Error::config(
            "sweep needs a uniform settling bound; use a fixed_time or nonlinear_fixed_time law",
        )),
    };
    let pass = t_settle.is_some_and(|t| t <= uniform + 2.0 * h);
    Ok(SweepRow {
        y0: cfg.y0.describe(),
        norm_y0: Some(norm_y0),
        t_settle,
        uniform_bound: Some(uniform),
        arctan_estimate: arctan,
        pass,
        error: None,
    })
}

/// Write the sweep comparison table; one row per initial condition.
pub fn write_sweep_csv(path: &Path, table: &SweepTable) -> Result<()> {
    let mut s = String::new();
    s.push_str("y0,norm_y0,t_settle,uniform_bound,arctan_estimate,pass\n");
    for r in &table.rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.y0,
            fmt_opt_e(r.norm_y0),
            fmt_opt_t(r.t_settle),
            fmt_opt_e(r.uniform_bound),
            fmt_opt_e(r.arctan_estimate),
            u8::from(r.pass)
        )
        .expect("write to string");
    }
    fs::write(path, s)?;
    Ok(())
}

fn fmt_opt_e(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.12e}"))
}

fn fmt_opt_t(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.9}"))
}

/// Read and deserialize a config file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::ConfigIo {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::ConfigParse {
        path: path.to_path_buf(),
        source,
    })
}

/// Canonical Case 1 scenario (defaults; gain gate evaluated eagerly so a bad
/// rho fails at build time, not at run time).
pub fn build_case1(y0: InitialSpec, rho: f64, zeta: Option<f64>) -> Result<ScenarioConfig> {
    validate_gain(rho, CASE1_M_BOUND, CASE1_BETA, CASE1_INV_NORM)?.require()?;
    let mut cfg = ScenarioConfig::new(CaseKind::Case1Perturbed);
    cfg.y0 = y0;
    cfg.law = Some(match zeta {
        None => LawSpec::FiniteTime { rho },
        Some(zeta) => LawSpec::FixedTime { rho, zeta },
    });
    Ok(cfg)
}

/// Canonical Case 2 scenario.
pub fn build_case2(y0: InitialSpec, mu: f64) -> Result<ScenarioConfig> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::config(format!("mu must lie in (0,1), got {mu}")));
    }
    let mut cfg = ScenarioConfig::new(CaseKind::Case2Nonlinear);
    cfg.y0 = y0;
    cfg.law = Some(LawSpec::NonlinearFixedTime { mu });
    Ok(cfg)
}
