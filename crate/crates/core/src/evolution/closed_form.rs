//! Closed-form overlaps and phases for the qubit Euler path and the qudit
//! `V_N` path, and the frame integral `Φ = ∫ m̂₁·dm̂₂/dt`.

use std::f64::consts::PI;

use super::path::{check_grid, euler_um, grid_time, Schedule};
use super::EvolutionError;
use crate::matcore::C64;
use crate::qstate::StateError;
use crate::quadrature::{fd_step, simpson};
use crate::sud::{adjoint_rep, generators, max_concurrence, GeneratorBasis};

/// Wraps an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    x + 2.0 * PI * ((PI - x) / (2.0 * PI)).floor()
}

/// Continuous argument of `cos(χ/2) + i·m·sin(χ/2)` for `m ≥ 0`, starting
/// at 0 for `χ = 0` and following χ without branch resets. At `m = 0` it
/// is a step function that jumps by π at each zero of `cos(χ/2)`.
pub fn tracked_arg(chi: f64, m: f64) -> f64 {
    let (s, c) = (0.5 * chi).sin_cos();
    0.5 * chi + wrap_angle((m * s).atan2(c) - 0.5 * chi)
}

fn check_qubit_concurrence(c: f64) -> Result<f64, EvolutionError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(StateError::InadmissibleConcurrence { concurrence: c, d: 2 }.into());
    }
    Ok((1.0 - c * c).max(0.0).sqrt())
}

/// `e^{iφ_A} cos(θ/2) [cos(χ/2) + i√(1−𝒞²) sin(χ/2)]`.
pub fn qubit_overlap_closed_form(c: f64, theta: f64, chi: f64, phi_a: f64) -> Result<C64, EvolutionError> {
    let m = check_qubit_concurrence(c)?;
    let (s, co) = (0.5 * chi).sin_cos();
    Ok(C64::from_polar((0.5 * theta).cos(), phi_a) * C64::new(co, m * s))
}

/// `arg[cos(χ/2) + i√(1−𝒞²) sin(χ/2)] − √(1−𝒞²) χ/2 + √(1−𝒞²) Φ/2` with
/// the first term tracked continuously in χ.
pub fn qubit_geometric_phase_closed_form(c: f64, chi: f64, big_phi: f64) -> Result<f64, EvolutionError> {
    let m = check_qubit_concurrence(c)?;
    Ok(tracked_arg(chi, m) - 0.5 * m * chi + 0.5 * m * big_phi)
}

/// Weights of the two frequencies in the `V_N` overlap
/// `𝒜 e^{iχ/d} + ℬ e^{i(1−d)χ/d}`, with `𝒜 + ℬ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VnCoefficients {
    pub a: f64,
    pub b: f64,
}

/// `√(1 − (𝒞/𝒞_m)²)` after checking that the aligned state
/// `Q² = I/d + w E` is positive.
fn aligned_weight(d: usize, c: f64) -> Result<f64, EvolutionError> {
    let cm = max_concurrence(d);
    let w = (1.0 - (c / cm).powi(2)).max(0.0).sqrt();
    if !(-1e-12..=cm + 1e-12).contains(&c) || w > 1.0 / (d - 1) as f64 + 1e-12 {
        return Err(StateError::InadmissibleConcurrence { concurrence: c, d }.into());
    }
    Ok(w)
}

impl VnCoefficients {
    /// `𝒜 = (d−1)/d + ½√(𝒞_m² − 𝒞²)`.
    pub fn printed(d: usize, c: f64) -> Result<Self, EvolutionError> {
        crate::sud::check_dim(d)?;
        aligned_weight(d, c)?;
        let cm = max_concurrence(d);
        let a = (d - 1) as f64 / d as f64 + 0.5 * (cm * cm - c * c).max(0.0).sqrt();
        Ok(Self { a, b: 1.0 - a })
    }

    /// Weights of the aligned state `Q² = I/d + √(1−(𝒞/𝒞_m)²) E` itself:
    /// `𝒜 = (d−1)(1+w)/d`.
    pub fn aligned(d: usize, c: f64) -> Result<Self, EvolutionError> {
        crate::sud::check_dim(d)?;
        let w = aligned_weight(d, c)?;
        let a = (d - 1) as f64 * (1.0 + w) / d as f64;
        Ok(Self { a, b: 1.0 - a })
    }

    pub fn overlap(&self, d: usize, chi: f64) -> C64 {
        let df = d as f64;
        C64::from_polar(self.a, chi / df) + C64::from_polar(self.b, (1.0 - df) * chi / df)
    }

    /// Argument of [`Self::overlap`] tracked continuously in χ. Factoring
    /// out `e^{iχ(2−d)/2d}` leaves `cos(χ/2) + i(𝒜−ℬ) sin(χ/2)`.
    pub fn tracked_arg(&self, d: usize, chi: f64) -> f64 {
        chi * (1.0 / d as f64 - 0.5) + tracked_arg(chi, self.a - self.b)
    }
}

/// `V_N` overlap with the printed coefficients.
pub fn vn_overlap_closed_form(d: usize, c: f64, chi: f64) -> Result<C64, EvolutionError> {
    Ok(VnCoefficients::printed(d, c)?.overlap(d, chi))
}

/// `∫ Tr[Q² χ̇E] = 𝒞_m √(𝒞_m² − 𝒞²) χ/2` for the aligned state.
pub fn vn_dynamical_term(d: usize, c: f64, chi: f64) -> f64 {
    let cm = max_concurrence(d);
    0.5 * cm * (cm * cm - c * c).max(0.0).sqrt() * chi
}

/// Printed qudit formula: tracked arg of the printed overlap minus
/// `√(𝒞_m² − 𝒞²) χ/2`.
pub fn vn_geometric_phase_printed(d: usize, c: f64, chi: f64) -> Result<f64, EvolutionError> {
    let cm = max_concurrence(d);
    Ok(VnCoefficients::printed(d, c)?.tracked_arg(d, chi) - 0.5 * (cm * cm - c * c).max(0.0).sqrt() * chi)
}

/// Tracked arg of the printed overlap minus [`vn_dynamical_term`].
pub fn vn_geometric_phase_corrected(d: usize, c: f64, chi: f64) -> Result<f64, EvolutionError> {
    Ok(VnCoefficients::printed(d, c)?.tracked_arg(d, chi) - vn_dynamical_term(d, c, chi))
}

/// Tracked arg of the aligned-state overlap minus [`vn_dynamical_term`].
pub fn vn_geometric_phase_aligned(d: usize, c: f64, chi: f64) -> Result<f64, EvolutionError> {
    Ok(VnCoefficients::aligned(d, c)?.tracked_arg(d, chi) - vn_dynamical_term(d, c, chi))
}

fn frame(basis: &GeneratorBasis, theta: f64, phi: f64) -> [f64; 6] {
    let r = adjoint_rep(&euler_um(theta, phi), basis).expect("Euler rotation is unitary");
    [r[(0, 0)], r[(1, 0)], r[(2, 0)], r[(0, 1)], r[(1, 1)], r[(2, 1)]]
}

/// `Φ = ∫ m̂₁·dm̂₂/dt` over the frame `m̂_a = R(U_m) ê_a` of a closed
/// `(θ(t), φ(t))` loop.
pub fn solid_angle(theta: impl Schedule, phi: impl Schedule, tau: f64, samples: usize) -> Result<f64, EvolutionError> {
    check_grid(samples, tau)?;
    let defect = euler_um(theta.value(tau), phi.value(tau)).distance(&euler_um(theta.value(0.0), phi.value(0.0)));
    if defect > 1e-10 {
        return Err(EvolutionError::OpenPath { defect });
    }
    let basis = generators(2)?;
    let h = fd_step(tau);
    let m2 = |t: f64| {
        let f = frame(&basis, theta.value(t), phi.value(t));
        [f[3], f[4], f[5]]
    };
    let integrand: Vec<f64> = (0..samples)
        .map(|k| {
            let t = grid_time(k, samples, tau);
            let f = frame(&basis, theta.value(t), phi.value(t));
            let (a, b, c, e) = (m2(t - 2.0 * h), m2(t - h), m2(t + h), m2(t + 2.0 * h));
            (0..3).map(|i| f[i] * (a[i] - 8.0 * b[i] + 8.0 * c[i] - e[i]) / (12.0 * h)).sum()
        })
        .collect();
    Ok(simpson(&integrand, tau / (samples - 1) as f64))
}
