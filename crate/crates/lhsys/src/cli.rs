//! Subcommand dispatch and file output.
//!
//! Every trajectory CSV carries both charts plus the epidemic observables,
//! with the fixed header `t,x,y,q,p,mean_rho,variance`; a row is emitted
//! only when the state is regular in both charts, otherwise the run aborts
//! at the first offending time.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::algebra::AlgebraId;
use crate::config::{parse_config, RunConfig};
use crate::dynamics::{
    constants_from_initial, exact_trajectory, integrate, sample_times, Trajectory,
};
use crate::error::{Error, Result};
use crate::report::RunReport;
use crate::superposition::{
    extract_constants, resolve_branch_h4, signed_k_h6, superpose_h4, superpose_h6,
    MotionConstants, ProlongedState,
};
use crate::transform::{observables, ChartId, PhaseState};
use crate::verify;

pub const CSV_HEADER: &str = "t,x,y,q,p,mean_rho,variance";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Exact,
    Superpose,
    Constants,
    Verify,
    Convert,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Exact => "exact",
            Command::Superpose => "superpose",
            Command::Constants => "constants",
            Command::Verify => "verify",
            Command::Convert => "convert",
        }
    }
}

/// Options resolved from the command line; `None` means "use the config".
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config_path: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub cross_check: bool,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

/// Load the config, dispatch the command, return the process exit code.
pub fn run(inv: &Invocation) -> Result<i32> {
    let text = fs::read_to_string(&inv.config_path).map_err(|e| Error::Io {
        path: inv.config_path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = &inv.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(seed) = inv.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = inv.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Config {
                path: "--tol".into(),
                message: "tolerance must be positive".into(),
            });
        }
        cfg.tol = tol;
    }
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::Io {
        path: cfg.out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    match inv.command {
        Command::Simulate => cmd_simulate(&cfg),
        Command::Exact => cmd_exact(&cfg, inv.cross_check),
        Command::Superpose => cmd_superpose(&cfg),
        Command::Constants => cmd_constants(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Convert => cmd_convert(&cfg),
    }
}

fn require_initial(cfg: &RunConfig, n: usize, why: &str) -> Result<Vec<PhaseState>> {
    if cfg.initial.len() < n {
        return Err(Error::Config {
            path: "initial".into(),
            message: format!("{why}: need at least {n} initial state(s), got {}", cfg.initial.len()),
        });
    }
    cfg.initial
        .iter()
        .map(|s| s.to_chart(cfg.chart()))
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// CSV row in both charts. Fails when the state cannot be expressed
/// regularly in both.
fn csv_row(t: f64, state: PhaseState) -> Result<String> {
    let both = |s: PhaseState| -> Result<((f64, f64), (f64, f64))> {
        let cart = s.to_chart(ChartId::Cartesian)?;
        let epi = s.to_chart(ChartId::Epidemic)?;
        Ok((cart.coords(), epi.coords()))
    };
    let ((x, y), (q, p)) = both(state).map_err(|e| {
        Error::Unsupported(format!("trajectory leaves the regular domain at t = {t}: {e}"))
    })?;
    let obs = observables(q, p)?;
    Ok(format!(
        "{t},{x},{y},{q},{p},{},{}",
        obs.mean_density, obs.variance
    ))
}

fn trajectory_csv(traj: &Trajectory) -> Result<String> {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (t, s) in traj.iter() {
        out.push_str(&csv_row(t, s)?);
        out.push('\n');
    }
    Ok(out)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<i32> {
    let initial = require_initial(cfg, 1, "simulate integrates each initial state")?;
    for (i, s0) in initial.iter().enumerate() {
        let traj = integrate(&cfg.spec, *s0, cfg.t0, cfg.t1, cfg.tol, cfg.samples)?;
        let name = if i == 0 {
            "simulate.csv".to_string()
        } else {
            format!("simulate_{}.csv", i + 1)
        };
        let path = cfg.out_dir.join(name);
        write_file(&path, &trajectory_csv(&traj)?)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_exact(cfg: &RunConfig, cross_check: bool) -> Result<i32> {
    if cfg.algebra() == AlgebraId::H6 {
        return Err(Error::Unsupported(
            "`exact` applies to the b2 and h4 systems only; the two-photon system admits \
             no closed form here, use `simulate`"
                .into(),
        ));
    }
    let constants = match cfg.constants {
        Some(c) => c,
        None => {
            let initial = require_initial(cfg, 1, "exact needs [constants] or an initial state")?;
            constants_from_initial(&cfg.spec, initial[0], cfg.t0)?
        }
    };
    let times = sample_times(cfg.t0, cfg.t1, cfg.samples);
    let traj = exact_trajectory(&cfg.spec, constants, &times)?;
    let path = cfg.out_dir.join("exact.csv");
    write_file(&path, &trajectory_csv(&traj)?)?;
    println!("wrote {}", path.display());
    if cross_check {
        let oracle = integrate(&cfg.spec, traj.states()[0], cfg.t0, cfg.t1, cfg.tol, cfg.samples)?;
        let mut max_dev = 0.0f64;
        for (a, b) in traj.states().iter().zip(oracle.states()) {
            let (a1, a2) = a.coords();
            let (b1, b2) = b.coords();
            max_dev = max_dev.max((a1 - b1).abs().max((a2 - b2).abs()));
        }
        println!("cross-check max deviation vs integrator: {max_dev:e}");
    }
    Ok(0)
}

fn cmd_superpose(cfg: &RunConfig) -> Result<i32> {
    let (rule, needed) = match cfg.algebra() {
        // the book system is covered by the oscillator rule with b1 = 0
        AlgebraId::B2 | AlgebraId::H4 => (AlgebraId::H4, 3),
        AlgebraId::H6 => (AlgebraId::H6, 4),
    };
    let states = require_initial(cfg, needed, "superpose takes the anchor first, then the particulars")?;
    if states.len() != needed {
        return Err(Error::Config {
            path: "initial".into(),
            message: format!("superpose for {} needs exactly {needed} states", cfg.algebra().name()),
        });
    }
    let chart = cfg.chart();
    let times = sample_times(cfg.t0, cfg.t1, cfg.samples);
    let trajs: Vec<Trajectory> = states
        .iter()
        .map(|s| integrate(&cfg.spec, *s, cfg.t0, cfg.t1, cfg.tol, cfg.samples))
        .collect::<Result<_>>()?;
    let anchor = &trajs[0];
    let particulars = &trajs[1..];
    let at = |tr: &Trajectory, i: usize| tr.states()[i].coords();

    let p0: Vec<(f64, f64)> = particulars.iter().map(|tr| at(tr, 0)).collect();
    let constants = extract_constants(rule, at(anchor, 0), &p0, chart)?;
    let branch = match rule {
        AlgebraId::H4 => Some(resolve_branch_h4(
            at(anchor, 0),
            p0[0],
            p0[1],
            constants.k1,
            constants.k,
            chart,
        )?),
        _ => None,
    };

    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push_str(",reconstruction_error\n");
    for (i, &t) in times.iter().enumerate() {
        let reconstructed = match rule {
            AlgebraId::H4 => superpose_h4(
                at(&particulars[0], i),
                at(&particulars[1], i),
                constants.k1,
                constants.k,
                branch.expect("branch resolved"),
                chart,
            )?,
            AlgebraId::H6 => superpose_h6(
                at(&particulars[0], i),
                at(&particulars[1], i),
                at(&particulars[2], i),
                constants.k1,
                constants.k2,
                chart,
            )?,
            AlgebraId::B2 => unreachable!(),
        };
        let truth = at(anchor, i);
        let err = (reconstructed.0 - truth.0)
            .abs()
            .max((reconstructed.1 - truth.1).abs());
        let state = PhaseState::from_coords(chart, reconstructed.0, reconstructed.1);
        out.push_str(&csv_row(t, state)?);
        let _ = writeln!(out, ",{err}");
    }
    let path = cfg.out_dir.join("superpose.csv");
    write_file(&path, &out)?;
    println!("wrote {}", path.display());
    Ok(0)
}

#[derive(Serialize)]
struct ConstantSeries {
    name: String,
    initial: f64,
    values: Vec<f64>,
    max_drift: f64,
    relative_drift: f64,
}

#[derive(Serialize)]
struct ConstantsReport {
    schema_version: u32,
    algebra: String,
    chart: String,
    times: Vec<f64>,
    constants: Vec<ConstantSeries>,
    extracted: MotionConstantsJson,
}

#[derive(Serialize)]
struct MotionConstantsJson {
    k1: f64,
    k2: f64,
    k3: f64,
    k4: f64,
    k: f64,
    b: f64,
    usable: bool,
}

impl From<MotionConstants> for MotionConstantsJson {
    fn from(c: MotionConstants) -> Self {
        MotionConstantsJson {
            k1: c.k1,
            k2: c.k2,
            k3: c.k3,
            k4: c.k4,
            k: c.k,
            b: c.b,
            usable: c.usable,
        }
    }
}

fn cmd_constants(cfg: &RunConfig) -> Result<i32> {
    let (rule, copies) = match cfg.algebra() {
        AlgebraId::B2 | AlgebraId::H4 => (AlgebraId::H4, 3),
        AlgebraId::H6 => (AlgebraId::H6, 4),
    };
    let states = require_initial(cfg, copies, "constants tracks the invariants of simultaneous copies")?;
    let states = &states[..copies];
    let times = sample_times(cfg.t0, cfg.t1, cfg.samples);
    let trajs: Vec<Trajectory> = states
        .iter()
        .map(|s| integrate(&cfg.spec, *s, cfg.t0, cfg.t1, cfg.tol, cfg.samples))
        .collect::<Result<_>>()?;

    let prolonged = |i: usize| -> Result<ProlongedState> {
        let snapshot: Vec<PhaseState> = trajs.iter().map(|tr| tr.states()[i]).collect();
        ProlongedState::from_states(&snapshot)
    };
    type Invariant = Box<dyn Fn(&ProlongedState) -> Result<f64>>;
    let series_defs: Vec<(String, Invariant)> = match rule {
        AlgebraId::H4 => vec![
            (
                "F2".to_string(),
                Box::new(|s: &ProlongedState| crate::superposition::motion_constant(AlgebraId::H4, 2, s))
                    as Invariant,
            ),
            (
                "F3".to_string(),
                Box::new(|s: &ProlongedState| crate::superposition::motion_constant(AlgebraId::H4, 3, s)),
            ),
        ],
        AlgebraId::H6 => {
            let pick = |a: usize, b: usize, c: usize| {
                move |s: &ProlongedState| {
                    let copies = s.copies();
                    signed_k_h6(&ProlongedState::new(
                        s.chart(),
                        vec![copies[a], copies[b], copies[c]],
                    )?)
                }
            };
            vec![
                ("k123".to_string(), Box::new(pick(0, 1, 2)) as Invariant),
                ("k124".to_string(), Box::new(pick(0, 1, 3))),
                ("k134".to_string(), Box::new(pick(0, 2, 3))),
                ("k234".to_string(), Box::new(pick(1, 2, 3))),
            ]
        }
        AlgebraId::B2 => unreachable!(),
    };

    let mut constants = Vec::new();
    for (name, f) in &series_defs {
        let mut values = Vec::with_capacity(times.len());
        for i in 0..times.len() {
            values.push(f(&prolonged(i)?)?);
        }
        let initial = values[0];
        let max_drift = values
            .iter()
            .map(|v| (v - initial).abs())
            .fold(0.0f64, f64::max);
        constants.push(ConstantSeries {
            name: name.clone(),
            initial,
            max_drift,
            relative_drift: max_drift / initial.abs().max(1.0),
            values,
        });
    }
    let extracted = extract_constants(
        rule,
        trajs[0].states()[0].coords(),
        &trajs[1..]
            .iter()
            .map(|tr| tr.states()[0].coords())
            .collect::<Vec<_>>(),
        cfg.chart(),
    )?;
    let report = ConstantsReport {
        schema_version: 1,
        algebra: cfg.algebra().name().to_string(),
        chart: cfg.chart().name().to_string(),
        times,
        constants,
        extracted: extracted.into(),
    };
    let path = cfg.out_dir.join("constants.json");
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_file(&path, &json)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let report: RunReport = verify::run_full_suite(cfg.seed);
    let path = cfg.out_dir.join("verify.json");
    write_file(&path, &report.to_json())?;
    for c in &report.checks {
        println!(
            "{:<34} {}  measured {:.3e}  tolerance {:.0e}",
            c.name, c.status, c.measured, c.tolerance
        );
    }
    println!("wrote {}", path.display());
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_convert(cfg: &RunConfig) -> Result<i32> {
    let states = require_initial(cfg, 1, "convert maps the initial states between charts")?;
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &states {
        out.push_str(&csv_row(cfg.t0, *s)?);
        out.push('\n');
    }
    let path = cfg.out_dir.join("convert.csv");
    write_file(&path, &out)?;
    println!("wrote {}", path.display());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_contains_both_charts_and_observables() {
        let row = csv_row(0.5, PhaseState::epidemic(2.0, 1.0)).unwrap();
        assert_eq!(row, "0.5,3,0.6666666666666666,2,1,2,1");
    }

    #[test]
    fn csv_row_rejects_states_without_a_cartesian_inverse() {
        // x = 0 has no epidemic image
        assert!(csv_row(1.0, PhaseState::cartesian(0.0, 2.0)).is_err());
    }
}
