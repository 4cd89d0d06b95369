//! Local unitary paths and the total, dynamical and geometric phases they
//! impart on a two-qudit state.
//!
//! For `α(t) = e^{i(φ_A+φ_B)} Ū_A α(0) Ū_Bᵀ`:
//!
//! * total phase `arg Tr[α†(0) Ū_A α(0) Ū_Bᵀ] + φ_A + φ_B`,
//! * dynamical phase `φ_A + φ_B + ∫ (Tr[ρ_B(0) H_A] + Tr[ρ_A(0) H_B]) dt`
//!   with `H_j = −i Ū_j† dŪ_j/dt`,
//! * geometric phase, their difference.

mod closed_form;
mod path;
mod trace;

use std::collections::BTreeMap;

use thiserror::Error;

pub use closed_form::{
    qubit_geometric_phase_closed_form, qubit_overlap_closed_form, solid_angle, tracked_arg, vn_dynamical_term,
    vn_geometric_phase_aligned, vn_geometric_phase_corrected, vn_geometric_phase_printed, vn_overlap_closed_form,
    wrap_angle, VnCoefficients,
};
pub use path::{
    euler_um, qubit_euler_path, qutrit_piecewise_path, random_geodesic_path, v3, vn_path, zeta_is_cyclic, Generators,
    Linear, PathWarning, Schedule, UnitaryPath, DEFAULT_SAMPLES, MIN_SAMPLES,
};
pub use trace::{fmt_sig, PhaseTrace, TraceSample, CSV_HEADER, ORTHOGONALITY_TOL};

use crate::matcore::{ComplexMatrix, MatError, C64};
use crate::qstate::{concurrence, reduced_density, StateError, Subsystem, TwoQuditState};
use crate::quadrature::cumulative_simpson_segmented;
use crate::sud::SudError;
use crate::topology::{unwrap_phase_trace, TopologyError};

/// Below this `|overlap|` the total phase is reported as undefined.
pub const PHASE_UNDEFINED_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("grid of {samples} samples is too coarse (need an odd count >= 101)")]
    GridTooCoarse { samples: usize },
    #[error("path duration must be positive and finite, got {0}")]
    BadDuration(f64),
    #[error("inconsistent grid: {0}")]
    BadGrid(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sample {index} is not in SU(d) (unitarity defect {unitarity:e}, det defect {det:e})")]
    NotSpecialUnitary { index: usize, unitarity: f64, det: f64 },
    #[error("angle out of range: {0}")]
    BadAngleRange(String),
    #[error("sample index {index} outside a path of {len} samples")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("evolved state is orthogonal to the initial state at t = {t}")]
    OrthogonalState { t: f64 },
    #[error("angle path is not closed (endpoint defect {defect:e})")]
    OpenPath { defect: f64 },
    #[error("trace parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Sud(#[from] SudError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

fn check(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<(), EvolutionError> {
    if state0.dim() != path.dim() {
        return Err(EvolutionError::DimensionMismatch { expected: path.dim(), found: state0.dim() });
    }
    if k >= path.len() {
        return Err(EvolutionError::IndexOutOfRange { index: k, len: path.len() });
    }
    Ok(())
}

fn su_alpha(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> ComplexMatrix {
    &(path.su_a(k) * state0.alpha()) * &path.su_b(k).transpose()
}

/// `α(t_k)` including the U(1) phases.
pub fn evolve(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<TwoQuditState, EvolutionError> {
    check(state0, path, k)?;
    if k == 0 && path.starts_at_identity() {
        return Ok(state0.clone());
    }
    let alpha = su_alpha(state0, path, k).scale(C64::from_polar(1.0, path.u1_phase(k)));
    Ok(TwoQuditState::from_alpha_unchecked(alpha))
}

/// `Tr[α†(0) Ū_A α(0) Ū_Bᵀ]`, the overlap without the U(1) factor.
pub fn su_overlap(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<C64, EvolutionError> {
    check(state0, path, k)?;
    Ok(state0.alpha().inner(&su_alpha(state0, path, k)))
}

/// `⟨ψ(0)|ψ(t_k)⟩`.
pub fn full_overlap(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<C64, EvolutionError> {
    Ok(su_overlap(state0, path, k)? * C64::from_polar(1.0, path.u1_phase(k)))
}

/// Principal argument of the SU(d) overlap plus `φ_A + φ_B`.
pub fn total_phase(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<f64, EvolutionError> {
    let ov = su_overlap(state0, path, k)?;
    if ov.norm() <= PHASE_UNDEFINED_TOL {
        return Err(EvolutionError::OrthogonalState { t: path.time(k) });
    }
    Ok(ov.arg() + path.u1_phase(k))
}

fn integrand_at(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix, ha: &ComplexMatrix, hb: &ComplexMatrix) -> f64 {
    (rho_b.trace_product(ha) + rho_a.trace_product(hb)).re
}

/// `Tr[ρ_B(0) H_A(t_k)] + Tr[ρ_A(0) H_B(t_k)]` (right limit at breakpoints).
pub fn dyn_term_integrand(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<f64, EvolutionError> {
    check(state0, path, k)?;
    let g = path.generators()?;
    let rho_a = reduced_density(state0, Subsystem::A);
    let rho_b = reduced_density(state0, Subsystem::B);
    Ok(integrand_at(&rho_a, &rho_b, &g.a[k], &g.b[k]))
}

/// Integrand at every node, with left limits at breakpoints.
pub fn dyn_integrand_series(
    state0: &TwoQuditState,
    path: &UnitaryPath,
) -> Result<(Vec<f64>, BTreeMap<usize, f64>), EvolutionError> {
    check(state0, path, 0)?;
    let g = path.generators()?;
    let rho_a = reduced_density(state0, Subsystem::A);
    let rho_b = reduced_density(state0, Subsystem::B);
    let values = g.a.iter().zip(&g.b).map(|(ha, hb)| integrand_at(&rho_a, &rho_b, ha, hb)).collect();
    let left = g.left.iter().map(|(&b, (ha, hb))| (b, integrand_at(&rho_a, &rho_b, ha, hb))).collect();
    Ok((values, left))
}

/// Dynamical phase at every node.
pub fn dynamical_phases(state0: &TwoQuditState, path: &UnitaryPath) -> Result<Vec<f64>, EvolutionError> {
    let (values, left) = dyn_integrand_series(state0, path)?;
    let integral = cumulative_simpson_segmented(&values, path.step(), path.breakpoints(), |b| left.get(&b).copied());
    Ok(integral.into_iter().enumerate().map(|(k, v)| v + path.u1_phase(k)).collect())
}

pub fn dynamical_phase(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<f64, EvolutionError> {
    check(state0, path, k)?;
    Ok(dynamical_phases(state0, path)?[k])
}

/// `φ_tot − φ_dyn`, wrapped into (−π, π].
pub fn geometric_phase(state0: &TwoQuditState, path: &UnitaryPath, k: usize) -> Result<f64, EvolutionError> {
    let tot = total_phase(state0, path, k)?;
    Ok(wrap_angle(tot - dynamical_phase(state0, path, k)?))
}

/// Gauge-invariant estimator `arg⟨ψ₀|ψ_k⟩ − Σ_{j<k} arg⟨ψ_j|ψ_{j+1}⟩`,
/// wrapped into (−π, π]. `None` where the endpoint overlap or any link
/// overlap so far is below [`ORTHOGONALITY_TOL`].
pub fn discrete_geometric_phases(
    state0: &TwoQuditState,
    path: &UnitaryPath,
) -> Result<Vec<Option<f64>>, EvolutionError> {
    check(state0, path, 0)?;
    let states: Vec<ComplexMatrix> =
        (0..path.len()).map(|k| su_alpha(state0, path, k).scale(C64::from_polar(1.0, path.u1_phase(k)))).collect();
    let mut out = Vec::with_capacity(states.len());
    let mut links = 0.0;
    let mut broken = false;
    for k in 0..states.len() {
        if k > 0 {
            let link = states[k - 1].inner(&states[k]);
            broken |= link.norm() < ORTHOGONALITY_TOL;
            links += link.arg();
        }
        let ov = state0.alpha().inner(&states[k]);
        out.push((!broken && ov.norm() >= ORTHOGONALITY_TOL).then(|| wrap_angle(ov.arg() - links)));
    }
    Ok(out)
}

/// Full phase record along the path, unwrapped across orthogonality
/// crossings. At orthogonal samples `φ_g` holds its previous value and
/// `φ_tot` is set to `φ_g + φ_dyn`.
pub fn phase_trace(state0: &TwoQuditState, path: &UnitaryPath) -> Result<PhaseTrace, EvolutionError> {
    let dyn_phases = dynamical_phases(state0, path)?;
    let mut samples = Vec::with_capacity(path.len());
    let mut held = 0.0;
    for (k, &phi_dyn) in dyn_phases.iter().enumerate() {
        let alpha = su_alpha(state0, path, k);
        let overlap = state0.alpha().inner(&alpha);
        let conc = concurrence(&TwoQuditState::from_alpha_unchecked(alpha));
        let mut s = TraceSample {
            t: path.time(k),
            chi: path.chi(k),
            overlap,
            phi_tot: overlap.arg() + path.u1_phase(k),
            phi_dyn,
            phi_g: 0.0,
            phi_g_unwrapped: 0.0,
            concurrence: conc,
        };
        if s.is_orthogonal() {
            s.phi_g = held;
            s.phi_tot = held + phi_dyn;
        } else {
            s.phi_g = wrap_angle(s.phi_tot - phi_dyn);
            held = s.phi_g;
        }
        samples.push(s);
    }
    let (trace, _jumps) = unwrap_phase_trace(&PhaseTrace { samples })?;
    Ok(trace)
}
