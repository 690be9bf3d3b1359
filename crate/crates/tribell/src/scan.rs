//! Point evaluation, 2-D decay-angle scans and initial-spin sweeps with CSV
//! or JSON output. Rows are independent work items computed in parallel and
//! written in grid order, so output is reproducible for a fixed seed
//! regardless of thread schedule.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bell::{
    optimize_b442, optimize_b442_sym, optimize_mermin, optimize_svetlichny, OptimizerSettings,
};
use crate::entanglement::{report, EntanglementReport};
use crate::kinematics::{physical_region, solve_momenta, DecayAngles, KinematicsError};
use crate::states::{
    scalar_state, tensor_state, vector_state, RotAxis, ScalarCouplings, SpinDirection, SpinState,
    StateError, TensorCouplings, VectorCouplings,
};

/// Momenta with p_A below this threshold are flagged in scan output; the
/// boundary theta_B + theta_C = pi is treated as physical.
pub const PA_ZERO_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Which four-fermion interaction produces the decay state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interaction {
    Scalar,
    Vector,
    Tensor,
}

impl FromStr for Interaction {
    type Err = ScanError;
    fn from_str(s: &str) -> Result<Self, ScanError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scalar" => Ok(Interaction::Scalar),
            "vector" => Ok(Interaction::Vector),
            "tensor" => Ok(Interaction::Tensor),
            other => Err(ScanError::Config(format!("unknown interaction `{other}`"))),
        }
    }
}

/// Interaction type plus its four real couplings, in the order
/// (c_S, c_A, d_S, d_A), (c_L, c_R, d_L, d_R) or (c_M, c_E, d_M, d_E).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateRecipe {
    pub interaction: Interaction,
    pub couplings: [f64; 4],
}

impl StateRecipe {
    pub fn validate(&self) -> Result<(), StateError> {
        let c = self.couplings;
        match self.interaction {
            Interaction::Scalar => ScalarCouplings::new(c[0], c[1], c[2], c[3]).map(|_| ()),
            Interaction::Vector => VectorCouplings::new(c[0], c[1], c[2], c[3]).map(|_| ()),
            Interaction::Tensor => TensorCouplings::new(c[0], c[1], c[2], c[3]).map(|_| ()),
        }
    }

    /// Builds the normalized decay state at one phase-space / spin point.
    pub fn build(
        &self,
        angles: &DecayAngles,
        spin: &SpinDirection,
    ) -> Result<SpinState, StateError> {
        let c = self.couplings;
        match self.interaction {
            Interaction::Scalar => Ok(scalar_state(
                &ScalarCouplings::new(c[0], c[1], c[2], c[3])?,
                spin,
            )),
            Interaction::Vector => {
                vector_state(&VectorCouplings::new(c[0], c[1], c[2], c[3])?, angles, spin)
            }
            Interaction::Tensor => {
                tensor_state(&TensorCouplings::new(c[0], c[1], c[2], c[3])?, angles, spin)
            }
        }
    }
}

/// Initial spin: either a fixed direction or a rotation sweep about x or y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpinSpec {
    Direction(SpinDirection),
    Rotation {
        axis: RotAxis,
        start: f64,
        end: f64,
        steps: usize,
    },
}

/// Which output columns to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObservableSelection {
    pub measures: bool,
    pub mermin: bool,
    pub svetlichny: bool,
    pub b442: bool,
    pub b442sym: bool,
}

impl ObservableSelection {
    pub fn all() -> Self {
        Self {
            measures: true,
            mermin: true,
            svetlichny: true,
            b442: true,
            b442sym: true,
        }
    }

    pub fn none() -> Self {
        Self {
            measures: false,
            mermin: false,
            svetlichny: false,
            b442: false,
            b442sym: false,
        }
    }

    pub fn needs_tensor(&self) -> bool {
        self.mermin || self.svetlichny || self.b442 || self.b442sym
    }
}

impl FromStr for ObservableSelection {
    type Err = ScanError;
    fn from_str(s: &str) -> Result<Self, ScanError> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all());
        }
        let mut sel = Self::none();
        for item in s.split(',') {
            match item.trim().to_ascii_lowercase().as_str() {
                "" => {}
                "measures" => sel.measures = true,
                "mermin" => sel.mermin = true,
                "svetlichny" => sel.svetlichny = true,
                "b442" => sel.b442 = true,
                "b442sym" => sel.b442sym = true,
                other => return Err(ScanError::Config(format!("unknown observable `{other}`"))),
            }
        }
        Ok(sel)
    }
}

/// Row-level outcome of a scan point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Computed normally.
    Ok,
    /// Outside the physical region; no fields computed.
    Skipped,
    /// Momentum solution underdetermined; the spin state is still well
    /// defined and all fields are computed.
    DegenerateKinematics,
    /// The amplitude vector vanished at this point; no fields computed.
    AmplitudesVanish,
    /// p_A = 0 (boundary theta_B + theta_C = pi); fields computed.
    PaZero,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RowStatus::Ok => "ok",
            RowStatus::Skipped => "skipped",
            RowStatus::DegenerateKinematics => "degenerate_kinematics",
            RowStatus::AmplitudesVanish => "amplitudes_vanish",
            RowStatus::PaZero => "pa_zero",
        };
        f.write_str(s)
    }
}

/// One scan result row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub theta_b: f64,
    pub theta_c: f64,
    pub spin_theta: f64,
    pub spin_phi: f64,
    pub status: RowStatus,
    pub measures: Option<EntanglementReport>,
    pub mermin: Option<f64>,
    pub svetlichny: Option<f64>,
    pub b442: Option<f64>,
    pub b442sym: Option<f64>,
}

/// Full scan setup shared by `run_scan2d` and `run_spin_sweep`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub recipe: StateRecipe,
    pub spin: SpinSpec,
    /// Fixed decay angles; required for spin sweeps and point commands.
    pub angles: Option<DecayAngles>,
    /// (theta_B steps, theta_C steps) of the 2-D grid.
    pub grid: (usize, usize),
    pub observables: ObservableSelection,
    pub optimizer: OptimizerSettings,
    /// Evaluate grid endpoints (0 and pi) instead of half-cell insets.
    pub include_boundary: bool,
    /// Worker threads; 0 uses the global default.
    pub threads: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), ScanError> {
        self.recipe.validate()?;
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return Err(ScanError::Config("grid steps must be >= 2".into()));
        }
        if let SpinSpec::Rotation { steps, .. } = self.spin {
            if steps < 2 {
                return Err(ScanError::Config("rotation steps must be >= 2".into()));
            }
        }
        if !(self.optimizer.tol > 0.0 && self.optimizer.tol <= 1e-2) {
            return Err(ScanError::Config("tolerance must lie in (0, 1e-2]".into()));
        }
        if self.optimizer.restarts == 0 {
            return Err(ScanError::Config("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Evaluates one (angles, spin) point. Kinematic degeneracy and vanishing
/// amplitudes become status flags on the row rather than errors; the
/// couplings must already be validated.
pub fn run_point(
    recipe: &StateRecipe,
    angles: &DecayAngles,
    spin: &SpinDirection,
    observables: &ObservableSelection,
    optimizer: &OptimizerSettings,
) -> ScanRow {
    let mut row = ScanRow {
        theta_b: angles.theta_b,
        theta_c: angles.theta_c,
        spin_theta: spin.theta,
        spin_phi: spin.phi,
        status: RowStatus::Ok,
        measures: None,
        mermin: None,
        svetlichny: None,
        b442: None,
        b442sym: None,
    };
    if !physical_region(angles) {
        row.status = RowStatus::Skipped;
        return row;
    }
    match solve_momenta(angles) {
        Err(KinematicsError::DegenerateKinematics) => {
            row.status = RowStatus::DegenerateKinematics;
        }
        Ok(p) if p.p_a < PA_ZERO_EPS => row.status = RowStatus::PaZero,
        Ok(_) => {}
    }
    let state = match recipe.build(angles, spin) {
        Ok(s) => s,
        Err(StateError::AllAmplitudesVanish) => {
            row.status = RowStatus::AmplitudesVanish;
            return row;
        }
        Err(e) => panic!("state construction failed on validated couplings: {e}"),
    };
    if observables.measures {
        row.measures = Some(report(&state));
    }
    if observables.needs_tensor() {
        let t = state.correlation_tensor();
        if observables.mermin {
            row.mermin = Some(optimize_mermin(&t, optimizer).value);
        }
        if observables.svetlichny {
            row.svetlichny = Some(optimize_svetlichny(&t, optimizer).value);
        }
        if observables.b442 {
            row.b442 = Some(optimize_b442(&t, optimizer).value);
        }
        if observables.b442sym {
            row.b442sym = Some(optimize_b442_sym(&t, optimizer).value);
        }
    }
    row
}

/// Grid coordinates over [0, pi]: half-cell insets by default, endpoints
/// included with `include_boundary`.
pub fn grid_axis(steps: usize, include_boundary: bool) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    if include_boundary {
        (0..steps)
            .map(|i| i as f64 * pi / (steps - 1) as f64)
            .collect()
    } else {
        (0..steps)
            .map(|i| (i as f64 + 0.5) * pi / steps as f64)
            .collect()
    }
}

fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, ScanError> {
    if threads == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| ScanError::Config(e.to_string()))?;
        Ok(pool.install(f))
    }
}

/// 2-D scan over the decay angles at fixed initial spin. Rows are ordered
/// theta_B-major; unphysical cells are emitted with `skipped` status.
pub fn run_scan2d(cfg: &ScanConfig) -> Result<Vec<ScanRow>, ScanError> {
    cfg.validate()?;
    let spin = match cfg.spin {
        SpinSpec::Direction(d) => d,
        SpinSpec::Rotation { .. } => {
            return Err(ScanError::Config(
                "scan2d requires a fixed spin direction".into(),
            ))
        }
    };
    let bs = grid_axis(cfg.grid.0, cfg.include_boundary);
    let cs = grid_axis(cfg.grid.1, cfg.include_boundary);
    let points: Vec<DecayAngles> = bs
        .iter()
        .flat_map(|&tb| cs.iter().map(move |&tc| DecayAngles::new(tb, tc)))
        .collect();
    with_pool(cfg.threads, || {
        points
            .par_iter()
            .map(|angles| run_point(&cfg.recipe, angles, &spin, &cfg.observables, &cfg.optimizer))
            .collect()
    })
}

/// Initial-spin rotation sweep at fixed decay angles.
pub fn run_spin_sweep(cfg: &ScanConfig) -> Result<Vec<ScanRow>, ScanError> {
    cfg.validate()?;
    let angles = cfg
        .angles
        .ok_or_else(|| ScanError::Config("spin sweep requires fixed decay angles".into()))?;
    let (axis, start, end, steps) = match cfg.spin {
        SpinSpec::Rotation {
            axis,
            start,
            end,
            steps,
        } => (axis, start, end, steps),
        SpinSpec::Direction(_) => {
            return Err(ScanError::Config(
                "spin sweep requires a rotation spec".into(),
            ))
        }
    };
    let omegas: Vec<f64> = (0..steps)
        .map(|i| start + i as f64 * (end - start) / (steps - 1) as f64)
        .collect();
    with_pool(cfg.threads, || {
        omegas
            .par_iter()
            .map(|&w| {
                let spin = SpinDirection::from_rotation(axis, w);
                run_point(
                    &cfg.recipe,
                    &angles,
                    &spin,
                    &cfg.observables,
                    &cfg.optimizer,
                )
            })
            .collect()
    })
}

pub const CSV_HEADER: &str = "theta_B,theta_C,spin_theta,spin_phi,status,C_AB,C_AC,C_BC,\
C_A_BC,C_B_AC,C_C_AB,tau,F3,mermin,svetlichny,b442,b442sym,mermin_norm,svetlichny_norm,b442_norm";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows in the fixed CSV schema. Normalized Bell columns divide by
/// the classical bound of each observable (2, 4 and 4).
pub fn write_csv<W: Write + ?Sized>(rows: &[ScanRow], w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let m = r.measures;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.theta_b,
            r.theta_c,
            r.spin_theta,
            r.spin_phi,
            r.status,
            fmt_opt(m.map(|m| m.c_ab)),
            fmt_opt(m.map(|m| m.c_ac)),
            fmt_opt(m.map(|m| m.c_bc)),
            fmt_opt(m.map(|m| m.c_a_bc)),
            fmt_opt(m.map(|m| m.c_b_ac)),
            fmt_opt(m.map(|m| m.c_c_ab)),
            fmt_opt(m.map(|m| m.tau)),
            fmt_opt(m.map(|m| m.f3)),
            fmt_opt(r.mermin),
            fmt_opt(r.svetlichny),
            fmt_opt(r.b442),
            fmt_opt(r.b442sym),
            fmt_opt(r.mermin.map(|v| v / 2.0)),
            fmt_opt(r.svetlichny.map(|v| v / 4.0)),
            fmt_opt(r.b442.map(|v| v / 4.0)),
        )?;
    }
    Ok(())
}

/// Writes rows as a JSON array with the same field names as the CSV schema.
pub fn write_json<W: Write + ?Sized>(rows: &[ScanRow], w: &mut W) -> std::io::Result<()> {
    let arr: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let m = r.measures;
            json!({
                "theta_B": r.theta_b,
                "theta_C": r.theta_c,
                "spin_theta": r.spin_theta,
                "spin_phi": r.spin_phi,
                "status": r.status.to_string(),
                "C_AB": m.map(|m| m.c_ab),
                "C_AC": m.map(|m| m.c_ac),
                "C_BC": m.map(|m| m.c_bc),
                "C_A_BC": m.map(|m| m.c_a_bc),
                "C_B_AC": m.map(|m| m.c_b_ac),
                "C_C_AB": m.map(|m| m.c_c_ab),
                "tau": m.map(|m| m.tau),
                "F3": m.map(|m| m.f3),
                "mermin": r.mermin,
                "svetlichny": r.svetlichny,
                "b442": r.b442,
                "b442sym": r.b442sym,
                "mermin_norm": r.mermin.map(|v| v / 2.0),
                "svetlichny_norm": r.svetlichny.map(|v| v / 4.0),
                "b442_norm": r.b442.map(|v| v / 4.0),
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut *w, &arr)?;
    writeln!(w)
}

/// Parses a flat `key = value` configuration file. Lines starting with `#`
/// and blank lines are ignored; keys use the same names as the CLI flags.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, ScanError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ScanError::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
