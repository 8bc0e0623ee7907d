//! Command-line front end: single runs, initial-condition sweeps, config
//! validation, and the analytic scalar oracle.
//!
//! Exit codes are scripting-stable: 0 all checked bounds hold, 2 a bound or
//! oracle tolerance is violated, 3 configuration or gain error, 4 numerical
//! failure during integration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use proxstab::analysis::detect_settling;
use proxstab::scenario::{
    parse_config, run_scenario, scalar_sign_oracle, sweep_initial_conditions, write_sweep_csv,
    InitialSpec, LawSpec, ScenarioConfig, SchemeSpec,
};
use proxstab::{Error, Result};

/// Overrides every other output-directory source when set.
const OUT_DIR_ENV: &str = "PROXSTAB_OUT_DIR";

const EXIT_BOUND_VIOLATED: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "proxstab",
    version,
    about = "Finite- and fixed-time stabilization runs for perturbed parabolic systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one scenario; writes timeseries.csv, snapshots.csv, report.json
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Integrate the scenario once per initial condition; writes sweep.csv
    Sweep {
        config: PathBuf,
        /// Initial condition, repeatable: sin_pi_x, sin_2pi_x, x_times_1mx or
        /// gauss_bump, optionally scaled like sin_pi_x*10. Defaults to all
        /// four shapes unscaled.
        #[arg(long = "y0", value_name = "SPEC", value_parser = parse_y0)]
        y0: Vec<InitialSpec>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check the configuration, resolved constants, and gain condition
    /// without integrating
    Validate { config: PathBuf },
    /// Integrate the analytic scalar problem y' = -2 sign(y), y(0) = 1 and
    /// compare the measured settling time against the exact value 0.5
    Oracle {
        /// Step sizes to test
        #[arg(long = "h", value_name = "H", default_values_t = [1e-3, 1e-4])]
        h: Vec<f64>,
    },
}

#[derive(Args)]
struct Overrides {
    /// Step size
    #[arg(long)]
    h: Option<f64>,
    /// Interior grid points
    #[arg(long)]
    n: Option<usize>,
    /// Time horizon
    #[arg(long)]
    tmax: Option<f64>,
    /// Integration scheme
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Output directory; PROXSTAB_OUT_DIR wins over this flag, the config's
    /// own out_dir is the fallback, then ./out
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SchemeArg {
    /// Resolvent splitting with exact dead-zone capture
    ProxSplitting,
    /// Explicit baseline with regularized sign
    ExplicitRegularized,
}

impl From<SchemeArg> for SchemeSpec {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::ProxSplitting => SchemeSpec::ProxSplitting,
            SchemeArg::ExplicitRegularized => SchemeSpec::ExplicitRegularized,
        }
    }
}

fn parse_y0(s: &str) -> std::result::Result<InitialSpec, String> {
    let (name, scale) = match s.split_once('*') {
        Some((n, sc)) => (
            n.trim(),
            sc.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad scale in {s:?}: {e}"))?,
        ),
        None => (s.trim(), 1.0),
    };
    Ok(match name {
        "sin_pi_x" => InitialSpec::SinPiX { scale },
        "sin_2pi_x" => InitialSpec::Sin2PiX { scale },
        "x_times_1mx" => InitialSpec::XTimes1mX { scale },
        "gauss_bump" => InitialSpec::GaussBump { scale },
        other => {
            return Err(format!(
                "unknown initial condition {other:?}; expected sin_pi_x, sin_2pi_x, \
                 x_times_1mx or gauss_bump, optionally scaled like sin_pi_x*10"
            ))
        }
    })
}

fn apply_overrides(cfg: &mut ScenarioConfig, ov: &Overrides) {
    if let Some(h) = ov.h {
        cfg.h = h;
    }
    if let Some(n) = ov.n {
        cfg.n = n;
    }
    if let Some(t) = ov.tmax {
        cfg.t_max = t;
    }
    if let Some(s) = ov.scheme {
        cfg.scheme = s.into();
    }
}

fn out_dir(ov: &Overrides, cfg: &ScenarioConfig) -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .or_else(|| ov.out_dir.clone())
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version land on stdout with a success code; real
            // usage mistakes are configuration errors
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Run { config, overrides } => cmd_run(&config, &overrides),
        Cmd::Sweep {
            config,
            y0,
            overrides,
        } => cmd_sweep(&config, &y0, &overrides),
        Cmd::Validate { config } => cmd_validate(&config),
        Cmd::Oracle { h } => cmd_oracle(&h),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_CONFIG
            })
        }
    }
}

fn cmd_run(config: &Path, ov: &Overrides) -> Result<ExitCode> {
    let mut cfg = parse_config(config)?;
    apply_overrides(&mut cfg, ov);
    let dir = out_dir(ov, &cfg);
    let art = run_scenario(&cfg, Some(&dir))?;
    let s = &art.summary;

    println!("case {}  law {}  scheme {}", s.case, s.law, s.scheme);
    println!(
        "n {}  modes {}  h {}  t_max {}  beta {}  m_bound {}",
        s.n, s.modes, s.h, s.t_max, s.beta, s.m_bound
    );
    if let Some(g) = &s.gain {
        println!(
            "gain rho {} vs threshold {:.4}: {}",
            g.rho,
            g.threshold,
            if g.passes { "ok" } else { "below threshold" }
        );
    }
    println!("norm_y0 {:.9}  final_norm {:.3e}", s.norm_y0, s.final_norm);
    match s.t_settle {
        Some(t) => println!("t_settle {t:.9}"),
        None => println!("t_settle none (not settled within t_max)"),
    }
    for b in &s.bounds {
        let verdict = match b.satisfied {
            Some(true) => "ok",
            Some(false) => "violated",
            None => "undecided",
        };
        println!("bound {}: {:.6} -> {verdict}", b.name, b.value);
    }
    if let Some(iq) = &s.inequality {
        println!(
            "inequality: worst violation {:.3e} over {} samples (tol {:.0e}) -> {}",
            iq.worst_violation.unwrap_or(f64::NEG_INFINITY),
            iq.samples_checked,
            iq.tol,
            if iq.passes { "ok" } else { "violated" }
        );
    }
    println!(
        "wrote {}, {}, {}",
        art.timeseries_path.display(),
        art.snapshots_path.display(),
        art.report_path.display()
    );

    Ok(match s.all_bounds_satisfied {
        Some(false) => ExitCode::from(EXIT_BOUND_VIOLATED),
        _ => ExitCode::SUCCESS,
    })
}

fn cmd_sweep(config: &Path, y0: &[InitialSpec], ov: &Overrides) -> Result<ExitCode> {
    let mut cfg = parse_config(config)?;
    apply_overrides(&mut cfg, ov);
    let list: Vec<InitialSpec> = if y0.is_empty() {
        vec![
            InitialSpec::SinPiX { scale: 1.0 },
            InitialSpec::Sin2PiX { scale: 1.0 },
            InitialSpec::XTimes1mX { scale: 1.0 },
            InitialSpec::GaussBump { scale: 1.0 },
        ]
    } else {
        y0.to_vec()
    };
    let table = sweep_initial_conditions(&cfg, &list)?;

    let dir = out_dir(ov, &cfg);
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sweep.csv");
    write_sweep_csv(&path, &table)?;

    for r in &table.rows {
        match (&r.error, r.t_settle) {
            (Some(e), _) => println!("{}: error: {e}", r.y0),
            (None, Some(t)) => println!(
                "{}: ||y0|| {:.4}, t_settle {:.6}, uniform bound {:.6} -> {}",
                r.y0,
                r.norm_y0.unwrap_or(f64::NAN),
                t,
                r.uniform_bound.unwrap_or(f64::NAN),
                if r.pass { "ok" } else { "violated" }
            ),
            (None, None) => println!("{}: did not settle -> violated", r.y0),
        }
    }
    println!("wrote {}", path.display());

    Ok(if table.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BOUND_VIOLATED)
    })
}

fn cmd_validate(config: &Path) -> Result<ExitCode> {
    let cfg = parse_config(config)?;
    let rs = cfg.resolve()?;
    let inst = rs.instantiate()?;

    let law = match &rs.law {
        LawSpec::FiniteTime { rho } => format!("finite_time(rho={rho})"),
        LawSpec::FixedTime { rho, zeta } => format!("fixed_time(rho={rho}, zeta={zeta})"),
        LawSpec::NonlinearFixedTime { mu } => format!("nonlinear_fixed_time(mu={mu})"),
    };
    println!("case {}  law {law}", rs.case.as_str());
    println!(
        "n {}  modes {}  h {}  t_max {}",
        rs.n, rs.modes, rs.h, rs.t_max
    );
    println!(
        "beta {}  m_bound {}  inv_norm_bbstar {}  kappa {}",
        rs.beta, rs.m_bound, rs.inv_norm_bbstar, rs.kappa
    );
    match inst.gain {
        Some(g) if g.passes => {
            println!("gain: rho {} > threshold {:.4} -> ok", g.rho, g.threshold);
        }
        Some(g) => {
            println!(
                "gain: rho {} does not exceed threshold {:.4}",
                g.rho, g.threshold
            );
            return Ok(ExitCode::from(EXIT_CONFIG));
        }
        None => println!("gain: not applicable to the nonlinear law"),
    }
    println!("configuration ok");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(hs: &[f64]) -> Result<ExitCode> {
    let mut all_ok = true;
    for &h in hs {
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::config(format!(
                "step size must be positive, got {h}"
            )));
        }
        let inst = scalar_sign_oracle(h)?;
        let traj = inst.run()?;
        match detect_settling(&traj, 0.0) {
            Some(t) => {
                let err = (t - 0.5).abs();
                let ok = err <= 2.0 * h;
                all_ok &= ok;
                println!(
                    "h {h:e}: T* {t:.9}, |T* - 0.5| {err:.3e}, tolerance {:.3e} -> {}",
                    2.0 * h,
                    if ok { "ok" } else { "violated" }
                );
            }
            None => {
                all_ok = false;
                println!("h {h:e}: did not settle within the horizon -> violated");
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BOUND_VIOLATED)
    })
}
