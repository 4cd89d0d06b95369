//! Cyclicity, `Z_d` homotopy classes of cyclic evolutions, and phase-trace
//! unwrapping across orthogonality crossings.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::evolution::{fmt_sig, wrap_angle, PhaseTrace};
use crate::matcore::C64;
use crate::qstate::{det_invariant, overlap, TwoQuditState, SINGULAR_DET_TOL};

/// Default Frobenius tolerance for `α(τ) = e^{iΔφ} α(0)`.
pub const CYCLIC_TOL: f64 = 1e-8;
/// Tolerance on `dist(dΔφ, 2πZ)` for [`homotopy_class`].
pub const QUANTIZATION_TOL: f64 = 1e-6;
/// Default `|overlap|` threshold for [`orthogonality_crossings`].
pub const CROSSING_TOL: f64 = 1e-6;
/// Largest phase change per grid step on a smooth stretch.
pub const MAX_SMOOTH_STEP: f64 = PI / 2.0;
/// A step larger than [`MAX_SMOOTH_STEP`] counts as a jump, rather than
/// undersampling, when an adjacent `|overlap|` is below this.
pub const NEAR_ORTHOGONAL: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("d*delta_phi is {defect:e} away from a multiple of 2pi (delta_phi = {delta_phi}, d = {d})")]
    NotQuantized { delta_phi: f64, d: usize, defect: f64 },
    #[error("phase changes by {step} between samples near t = {t}; trace is undersampled")]
    UndersampledTrace { t: f64, step: f64 },
    #[error("bad cycle report: {0}")]
    Parse(String),
}

/// `|x − 2πn|` for the nearest integer `n`.
pub fn lattice_distance(x: f64) -> f64 {
    (x - TAU * (x / TAU).round()).abs()
}

/// Status of the `e^{idΔφ} = 1` claim for one evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quantization {
    /// Cyclic, invertible, `dist(dΔφ, 2πZ) ≤ d·tol`.
    Holds { defect: f64 },
    /// Cyclic and invertible but `dΔφ` is off the lattice.
    Violated { defect: f64 },
    /// `𝒟 ≤ 1e-12`: the determinant argument does not apply.
    Withheld { det_abs: f64 },
    /// The evolution is not cyclic.
    NotCyclic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleReport {
    pub cyclic: bool,
    /// `arg Tr[α†(0) α(τ)]` in (−π, π].
    pub delta_phi: f64,
    pub class_n: Option<usize>,
    /// `‖α(τ) − e^{iΔφ} α(0)‖_F`.
    pub residual: f64,
    pub quantization: Quantization,
}

impl CycleReport {
    pub fn quantization_defect(&self) -> Option<f64> {
        match self.quantization {
            Quantization::Holds { defect } | Quantization::Violated { defect } => Some(defect),
            _ => None,
        }
    }
}

/// `cyclic=<0|1> delta_phi=<rad> class_n=<int|na> residual=<val>`.
impl fmt::Display for CycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = self.class_n.map_or_else(|| "na".to_string(), |n| n.to_string());
        write!(
            f,
            "cyclic={} delta_phi={} class_n={} residual={}",
            u8::from(self.cyclic),
            fmt_sig(self.delta_phi),
            class,
            fmt_sig(self.residual)
        )
    }
}

/// Parses the single-line record. The quantization status is not part of
/// the record and comes back as `Holds` when a class is present.
impl FromStr for CycleReport {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TopologyError::Parse(s.to_string());
        let mut cyclic = None;
        let mut delta_phi = None;
        let mut class_n = None;
        let mut residual = None;
        for field in s.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "cyclic" => cyclic = Some(matches!(value, "1")),
                "delta_phi" => delta_phi = Some(value.parse::<f64>().map_err(|_| bad())?),
                "class_n" => class_n = Some(if value == "na" { None } else { Some(value.parse().map_err(|_| bad())?) }),
                "residual" => residual = Some(value.parse::<f64>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let (cyclic, delta_phi, class_n, residual) =
            (cyclic.ok_or_else(bad)?, delta_phi.ok_or_else(bad)?, class_n.ok_or_else(bad)?, residual.ok_or_else(bad)?);
        let quantization = match (cyclic, class_n) {
            (false, _) => Quantization::NotCyclic,
            (true, Some(_)) => Quantization::Holds { defect: f64::NAN },
            (true, None) => Quantization::Withheld { det_abs: f64::NAN },
        };
        Ok(Self { cyclic, delta_phi, class_n, residual, quantization })
    }
}

/// Compares `α(τ)` with `e^{iΔφ} α(0)` and, for cyclic evolutions of
/// invertible states, measures how close `dΔφ` is to `2πZ`.
///
/// Singular states are reported with [`Quantization::Withheld`] and no
/// class rather than as an error.
pub fn check_cyclic(state0: &TwoQuditState, state_tau: &TwoQuditState, tol: f64) -> Result<CycleReport, TopologyError> {
    let d = state0.dim();
    if state_tau.dim() != d {
        return Err(TopologyError::DimensionMismatch(d, state_tau.dim()));
    }
    let ov = overlap(state0, state_tau).expect("dimensions checked");
    let delta_phi = wrap_angle(ov.arg());
    let rotated = state0.alpha().scale(C64::from_polar(1.0, delta_phi));
    let residual = state_tau.alpha().distance(&rotated);
    let cyclic = residual <= tol;

    let det_abs = det_invariant(state0);
    let (quantization, class_n) = if !cyclic {
        (Quantization::NotCyclic, None)
    } else if det_abs <= SINGULAR_DET_TOL {
        (Quantization::Withheld { det_abs }, None)
    } else {
        let defect = lattice_distance(d as f64 * delta_phi);
        if defect <= d as f64 * tol {
            (Quantization::Holds { defect }, Some(class_index(delta_phi, d)))
        } else {
            (Quantization::Violated { defect }, None)
        }
    };
    Ok(CycleReport { cyclic, delta_phi, class_n, residual, quantization })
}

fn class_index(delta_phi: f64, d: usize) -> usize {
    ((d as f64 * delta_phi / TAU).round() as i64).rem_euclid(d as i64) as usize
}

/// `n = round(dΔφ/2π) mod d`.
pub fn homotopy_class(delta_phi: f64, d: usize) -> Result<usize, TopologyError> {
    let defect = lattice_distance(d as f64 * delta_phi);
    if defect > QUANTIZATION_TOL {
        return Err(TopologyError::NotQuantized { delta_phi, d, defect });
    }
    Ok(class_index(delta_phi, d))
}

/// A discontinuity of the geometric phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    /// First grid index of the interval or orthogonal run holding the jump.
    pub index: usize,
    pub t: f64,
    /// Signed size in (−π, π]; half turns are reported as `+π`.
    pub size: f64,
}

fn jump_size(step: f64) -> f64 {
    let s = wrap_angle(step);
    if (s + PI).abs() <= 1e-6 {
        s + TAU
    } else {
        s
    }
}

/// Continues the principal `φ_g` column across samples, choosing the
/// `2π` shift that minimizes each step. Runs of orthogonal samples hold
/// the last value and produce a [`Jump`] sized by the change across the
/// run; so does a step above π/2 next to a near-orthogonal sample. Any
/// other step above π/2 is an error.
///
/// Only `phi_g` and the overlaps are read, so unwrapping is idempotent.
pub fn unwrap_phase_trace(trace: &PhaseTrace) -> Result<(PhaseTrace, Vec<Jump>), TopologyError> {
    let mut out = trace.clone();
    let mut jumps = Vec::new();
    let mut last: Option<(usize, f64, f64)> = None; // (index, principal, unwrapped)
    let mut run_start: Option<usize> = None;
    for k in 0..out.samples.len() {
        let s = out.samples[k];
        if s.is_orthogonal() {
            run_start.get_or_insert(k);
            out.samples[k].phi_g_unwrapped = last.map_or(0.0, |(_, _, u)| u);
            continue;
        }
        let unwrapped = match last {
            None => s.phi_g,
            Some((j, p, u)) => {
                let step = wrap_angle(s.phi_g - p);
                if let Some(start) = run_start {
                    let size = jump_size(step);
                    jumps.push(Jump { index: start, t: out.samples[start].t, size });
                    u + size
                } else if step.abs() > MAX_SMOOTH_STEP {
                    let near = out.samples[j].overlap.norm().min(s.overlap.norm());
                    if near >= NEAR_ORTHOGONAL {
                        return Err(TopologyError::UndersampledTrace { t: out.samples[j].t, step });
                    }
                    let size = jump_size(step);
                    jumps.push(Jump { index: j, t: out.samples[j].t, size });
                    u + size
                } else {
                    u + step
                }
            }
        };
        out.samples[k].phi_g_unwrapped = unwrapped;
        last = Some((k, s.phi_g, unwrapped));
        run_start = None;
    }
    Ok((out, jumps))
}

/// Times where `|overlap| < tol`, one per run of such samples, refined by
/// the vertex of a parabola through `|overlap|²` around the run minimum.
pub fn orthogonality_crossings(trace: &PhaseTrace, tol: f64) -> Vec<f64> {
    let s = &trace.samples;
    let y = |k: usize| s[k].overlap.norm_sqr();
    let mut out = Vec::new();
    let mut k = 0;
    while k < s.len() {
        if s[k].overlap.norm() >= tol {
            k += 1;
            continue;
        }
        let start = k;
        while k < s.len() && s[k].overlap.norm() < tol {
            k += 1;
        }
        let m = (start..k).min_by(|&a, &b| y(a).total_cmp(&y(b))).expect("non-empty run");
        let mut t = s[m].t;
        if m > 0 && m + 1 < s.len() {
            let (ym, y0, yp) = (y(m - 1), y(m), y(m + 1));
            let curv = ym - 2.0 * y0 + yp;
            if curv > 0.0 {
                let h = s[m + 1].t - s[m].t;
                t += (0.5 * (ym - yp) / curv).clamp(-1.0, 1.0) * h;
            }
        }
        out.push(t);
    }
    out
}
