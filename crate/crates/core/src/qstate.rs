//! Two-qudit pure states as `d×d` coefficient matrices.
//!
//! `|ψ⟩ = Σ α_ij |ij⟩` is stored as the matrix `α`. Local unitaries act as
//! `α → U_A α U_Bᵀ`. The reduced densities follow the convention
//! `ρ_A = αᵀα*` and `ρ_B = αα†`, so `ρ_B` is the matrix conjugated by `U_A`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::matcore::{herm_eig, psd_sqrt, ComplexMatrix, MatError, C64};
use crate::sud::{self, max_concurrence, GeneratorBasis, SudError};

/// Normalization tolerance for `Tr(α†α) = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// States with `|det α|` at or below this have no polar sector split.
pub const SINGULAR_DET_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("state is not normalized (Tr(alpha^dagger alpha) = {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invariant exponent p = {p} outside 1..={d}")]
    BadExponent { p: usize, d: usize },
    #[error("bad Schmidt spectrum: {0}")]
    BadSpectrum(String),
    #[error("concurrence {target} exceeds the maximum {max} for this dimension")]
    UnreachableConcurrence { target: f64, max: f64 },
    #[error("concurrence {concurrence} is not admissible for a state aligned with the last generator (d = {d})")]
    InadmissibleConcurrence { concurrence: f64, d: usize },
    #[error("state is singular (|det alpha| = {det_abs:e}); polar sectors undefined")]
    SingularState { det_abs: f64, q: Box<ComplexMatrix> },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Sud(#[from] SudError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Normalized two-qudit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQuditState {
    alpha: ComplexMatrix,
}

impl TwoQuditState {
    pub fn new(alpha: ComplexMatrix) -> Result<Self, StateError> {
        let norm = alpha.frobenius_norm().powi(2);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(Self { alpha })
    }

    /// Rescales `alpha` to unit norm.
    pub fn normalized(alpha: ComplexMatrix) -> Result<Self, StateError> {
        let n = alpha.frobenius_norm();
        if n == 0.0 {
            return Err(StateError::NotNormalized(0.0));
        }
        Ok(Self { alpha: alpha.scale_real(1.0 / n) })
    }

    pub(crate) fn from_alpha_unchecked(alpha: ComplexMatrix) -> Self {
        Self { alpha }
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &ComplexMatrix {
        &self.alpha
    }

    /// `U_A α U_Bᵀ`.
    pub fn apply_local(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self, StateError> {
        let d = self.dim();
        for u in [ua, ub] {
            if u.dim() != d {
                return Err(StateError::DimensionMismatch(d, u.dim()));
            }
        }
        Ok(Self { alpha: &(ua * &self.alpha) * &ub.transpose() })
    }

    pub fn to_text(&self) -> String {
        let d = self.dim();
        let mut out = format!("d={d}\n");
        for i in 0..d {
            let row: Vec<String> = (0..d).map(|j| format_entry(self.alpha[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses the `d=<dim>` header followed by `d` rows of `re+imj` entries.
    pub fn from_text(text: &str) -> Result<Self, StateError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| StateError::Parse("empty input".into()))?;
        let d: usize = header
            .strip_prefix("d=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| StateError::Parse(format!("bad header {header:?}")))?;
        sud::check_dim(d)?;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            let line = lines.next().ok_or_else(|| StateError::Parse(format!("missing row {i}")))?;
            let row: Vec<C64> = line.split_whitespace().map(parse_entry).collect::<Result<_, _>>()?;
            if row.len() != d {
                return Err(StateError::Parse(format!("row {i} has {} entries, expected {d}", row.len())));
            }
            data.extend(row);
        }
        if lines.next().is_some() {
            return Err(StateError::Parse("trailing rows".into()));
        }
        Self::new(ComplexMatrix::new(d, data)?)
    }
}

fn format_entry(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

fn parse_entry(tok: &str) -> Result<C64, StateError> {
    let bad = || StateError::Parse(format!("bad entry {tok:?}"));
    let body = tok.strip_suffix('j').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    // the real/imaginary split is the last sign that is not a leading sign
    // and not part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

/// `⟨φ|ψ⟩ = Tr(β†α)`.
pub fn overlap(phi: &TwoQuditState, psi: &TwoQuditState) -> Result<C64, StateError> {
    if phi.dim() != psi.dim() {
        return Err(StateError::DimensionMismatch(phi.dim(), psi.dim()));
    }
    Ok(phi.alpha.inner(&psi.alpha))
}

/// `ρ_A = αᵀα*`, `ρ_B = αα†`.
pub fn reduced_density(state: &TwoQuditState, subsystem: Subsystem) -> ComplexMatrix {
    let a = &state.alpha;
    match subsystem {
        Subsystem::A => &a.transpose() * &a.conj(),
        Subsystem::B => a * &a.adjoint(),
    }
}

/// `Tr[ρ^p]`, identical for both subsystems.
pub fn invariant(state: &TwoQuditState, p: usize) -> Result<f64, StateError> {
    let d = state.dim();
    if p == 0 || p > d {
        return Err(StateError::BadExponent { p, d });
    }
    Ok(trace_power(&reduced_density(state, Subsystem::B), p))
}

/// `Tr[ρ_j^p]` for an explicit subsystem.
pub fn invariant_of(state: &TwoQuditState, subsystem: Subsystem, p: usize) -> Result<f64, StateError> {
    let d = state.dim();
    if p == 0 || p > d {
        return Err(StateError::BadExponent { p, d });
    }
    Ok(trace_power(&reduced_density(state, subsystem), p))
}

fn trace_power(rho: &ComplexMatrix, p: usize) -> f64 {
    let mut acc = rho.clone();
    for _ in 1..p {
        acc = &acc * rho;
    }
    acc.trace().re
}

/// I-concurrence `√(2(1 − Tr ρ²))`, evaluated as `2√(Σ|m|²)` over the
/// 2×2 minors `m` of `α` (Cauchy–Binet), which avoids the cancellation in
/// `1 − Tr ρ²` near product states.
pub fn concurrence(state: &TwoQuditState) -> f64 {
    let a = &state.alpha;
    let d = a.dim();
    let mut minors = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                for l in k + 1..d {
                    minors += (a[(i, k)] * a[(j, l)] - a[(i, l)] * a[(j, k)]).norm_sqr();
                }
            }
        }
    }
    let norm2 = a.frobenius_norm().powi(2);
    2.0 * minors.sqrt() / norm2
}

/// `𝒟 = |det α|`.
pub fn det_invariant(state: &TwoQuditState) -> f64 {
    state.alpha.det().norm()
}

/// Factorization `α = 𝒟^{1/d} e^{iφ} e^M S̄`.
#[derive(Clone, Debug)]
pub struct PolarSectors {
    /// `𝒟 = |det α|`.
    pub det_abs: f64,
    /// Global-phase sector `φ`.
    pub phi: f64,
    /// Positive factor `Q = √(αα†)`.
    pub q: ComplexMatrix,
    /// Traceless Hermitian `M` with `Q = 𝒟^{1/d} e^M`.
    pub m: ComplexMatrix,
    /// `S̄ ∈ SU(d)`.
    pub sbar: ComplexMatrix,
}

impl PolarSectors {
    pub fn reconstruct(&self) -> Result<ComplexMatrix, MatError> {
        let d = self.q.dim();
        let em = crate::matcore::expm_herm(&self.m, 1.0)?;
        let pref = C64::from_polar(self.det_abs.powf(1.0 / d as f64), self.phi);
        Ok((&em * &self.sbar).scale(pref))
    }
}

/// Polar sectors with `φ` on the canonical branch `[0, 2π/d)`.
pub fn polar_sectors(state: &TwoQuditState) -> Result<PolarSectors, StateError> {
    polar_sectors_impl(state, None)
}

/// Polar sectors with `φ` on the branch closest to `previous_phi`, for
/// following a continuous evolution without re-canonicalizing.
pub fn polar_sectors_tracked(state: &TwoQuditState, previous_phi: f64) -> Result<PolarSectors, StateError> {
    polar_sectors_impl(state, Some(previous_phi))
}

fn polar_sectors_impl(state: &TwoQuditState, previous: Option<f64>) -> Result<PolarSectors, StateError> {
    let d = state.dim();
    let alpha = &state.alpha;
    let rho_b = reduced_density(state, Subsystem::B);
    let (eig, q) = psd_sqrt(&rho_b)?;
    let det = alpha.det();
    let det_abs = det.norm();
    if det_abs <= SINGULAR_DET_TOL {
        return Err(StateError::SingularState { det_abs, q: Box::new(q) });
    }
    let step = 2.0 * PI / d as f64;
    let canonical = (det.arg().rem_euclid(2.0 * PI) / d as f64).min(step.next_down());
    let phi = match previous {
        None => canonical,
        Some(prev) => canonical + step * ((prev - canonical) / step).round(),
    };
    let log_scale = det_abs.ln() / d as f64;
    let m = eig.map_real(|x| 0.5 * x.ln() - log_scale);
    let q_inv = eig.map_real(|x| 1.0 / x.sqrt());
    let sbar = (&q_inv * alpha).scale(C64::from_polar(1.0, -phi));
    Ok(PolarSectors { det_abs, phi, q, m, sbar })
}

/// Magnitude and direction of the traceless part of `Q²`:
/// `Q² = I/d + magnitude · (q̂·T)`.
#[derive(Clone, Debug)]
pub struct QHat {
    pub magnitude: f64,
    /// `None` when `magnitude ≤ 1e−10` (maximally entangled).
    pub direction: Option<Vec<f64>>,
}

pub fn qhat(state: &TwoQuditState, basis: &GeneratorBasis) -> Result<QHat, StateError> {
    if basis.dim() != state.dim() {
        return Err(StateError::DimensionMismatch(state.dim(), basis.dim()));
    }
    let q2 = reduced_density(state, Subsystem::B);
    let (_, coeffs) = sud::decompose_hermitian(&q2, basis)?;
    let magnitude = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let direction = (magnitude > 1e-10).then(|| coeffs.iter().map(|c| c / magnitude).collect());
    Ok(QHat { magnitude, direction })
}

/// Families of states with prescribed entanglement.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    /// `|11⟩`.
    Product,
    /// `α = I/√d`.
    MaxEntangled,
    /// `α = diag(√λ)`.
    Schmidt(Vec<f64>),
    /// Schmidt spectrum `(a, (1−a)/(d−1), …)` with `a ∈ [1/d, 1]` chosen
    /// to hit the target I-concurrence.
    ConcurrenceTarget(f64),
}

pub fn make_state(d: usize, kind: &StateKind) -> Result<TwoQuditState, StateError> {
    sud::check_dim(d)?;
    match kind {
        StateKind::Product => {
            let mut spec = vec![0.0; d];
            spec[0] = 1.0;
            schmidt_state(&spec)
        }
        StateKind::MaxEntangled => schmidt_state(&vec![1.0 / d as f64; d]),
        StateKind::Schmidt(spec) => {
            if spec.len() != d {
                return Err(StateError::BadSpectrum(format!("{} coefficients for d = {d}", spec.len())));
            }
            schmidt_state(spec)
        }
        StateKind::ConcurrenceTarget(c) => schmidt_state(&concurrence_spectrum(d, *c)?),
    }
}

fn schmidt_state(spec: &[f64]) -> Result<TwoQuditState, StateError> {
    if spec.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(StateError::BadSpectrum("negative or NaN coefficient".into()));
    }
    let total: f64 = spec.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(StateError::BadSpectrum(format!("coefficients sum to {total}")));
    }
    let diag: Vec<f64> = spec.iter().map(|x| x.sqrt()).collect();
    Ok(TwoQuditState::from_alpha_unchecked(ComplexMatrix::from_real_diag(&diag)))
}

/// Schmidt spectrum of the `(a, (1−a)/(d−1), …)` family with concurrence `c`:
/// `a = (1 + (d−1)√(1 − (𝒞/𝒞_m)²))/d`.
pub fn concurrence_spectrum(d: usize, c: f64) -> Result<Vec<f64>, StateError> {
    let cmax = max_concurrence(d);
    if c.is_nan() || c < 0.0 {
        return Err(StateError::BadSpectrum(format!("negative concurrence {c}")));
    }
    if c > cmax + 1e-12 {
        return Err(StateError::UnreachableConcurrence { target: c, max: cmax });
    }
    let w = (1.0 - (c / cmax).powi(2)).max(0.0).sqrt();
    let a = (1.0 + (d as f64 - 1.0) * w) / d as f64;
    let rest = (1.0 - a) / (d as f64 - 1.0);
    let mut spec = vec![rest; d];
    spec[0] = a;
    Ok(spec)
}

/// State with `q̂ = ê_N`: `Q² = I/d + √(1 − (𝒞/𝒞_m)²) E`. Requires the
/// resulting `Q²` to be positive, i.e. `√(1 − (𝒞/𝒞_m)²) ≤ 1/(d−1)`.
pub fn vn_aligned_state(d: usize, c: f64) -> Result<TwoQuditState, StateError> {
    let cmax = max_concurrence(d);
    if !(0.0..=cmax + 1e-12).contains(&c) {
        return Err(StateError::UnreachableConcurrence { target: c, max: cmax });
    }
    let weight = (1.0 - (c / cmax).powi(2)).max(0.0).sqrt();
    if weight > 1.0 / (d as f64 - 1.0) + 1e-12 {
        return Err(StateError::InadmissibleConcurrence { concurrence: c, d });
    }
    let e = sud::vn_generator(d)?;
    let inv_d = 1.0 / d as f64;
    let spec: Vec<f64> = e.diag().iter().map(|z| (inv_d + weight * z.re).max(0.0)).collect();
    schmidt_state(&spec)
}

/// Smallest concurrence admissible for [`vn_aligned_state`].
pub fn vn_min_concurrence(d: usize) -> f64 {
    let w = 1.0 / (d as f64 - 1.0);
    max_concurrence(d) * (1.0 - w * w).max(0.0).sqrt()
}

/// Spectrum of `Q`, ascending.
pub fn q_spectrum(state: &TwoQuditState) -> Result<Vec<f64>, StateError> {
    let eig = herm_eig(&reduced_density(state, Subsystem::B))?;
    Ok(eig.values.iter().map(|x| x.max(0.0).sqrt()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_state, random_su};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn self_overlap_and_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_state(&mut rng, 3);
        assert!((overlap(&s, &s).unwrap() - 1.0).norm() < 1e-14);
        let bad = ComplexMatrix::identity(2);
        assert!(matches!(TwoQuditState::new(bad), Err(StateError::NotNormalized(_))));
    }

    #[test]
    fn overlap_matches_entrywise_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_state(&mut rng, 4);
        let b = random_state(&mut rng, 4);
        let mut want = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (a.alpha()[(i, j)], b.alpha()[(i, j)]);
                want += C64::new(x.re * y.re + x.im * y.im, x.re * y.im - x.im * y.re);
            }
        }
        assert!((overlap(&a, &b).unwrap() - want).norm() < 1e-14);
        assert!(overlap(&a, &b).unwrap().norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn maximally_entangled_qubit_phase_rotation_overlap() {
        let s0 = make_state(2, &StateKind::MaxEntangled).unwrap();
        let t3 = ComplexMatrix::from_real_diag(&[0.5, -0.5]);
        for chi in [0.0, 0.4, 1.7, 3.0] {
            let u = crate::matcore::expm_iherm(&t3, chi).unwrap();
            let s = s0.apply_local(&u, &ComplexMatrix::identity(2)).unwrap();
            assert!((overlap(&s0, &s).unwrap() - C64::new((chi / 2.0).cos(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = make_state(2, &StateKind::Product).unwrap();
        let b = make_state(3, &StateKind::Product).unwrap();
        assert_eq!(overlap(&a, &b), Err(StateError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn reduced_densities() {
        let p = make_state(3, &StateKind::Product).unwrap();
        let want = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0]);
        assert!(reduced_density(&p, Subsystem::A).distance(&want) < 1e-15);
        assert!(reduced_density(&p, Subsystem::B).distance(&want) < 1e-15);
        let m = make_state(3, &StateKind::MaxEntangled).unwrap();
        let want = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        assert!(reduced_density(&m, Subsystem::A).distance(&want) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in 2..=6 {
            let s = random_state(&mut rng, d);
            for sub in [Subsystem::A, Subsystem::B] {
                let rho = reduced_density(&s, sub);
                assert!((rho.trace().re - 1.0).abs() < 1e-12);
                assert!(rho.hermiticity_defect() < 1e-15);
                assert!(herm_eig(&rho).unwrap().values[0] > -1e-14);
            }
        }
    }

    #[test]
    fn invariants_known_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_state(&mut rng, 3);
        assert!((invariant(&s, 1).unwrap() - 1.0).abs() < 1e-12);
        let m = make_state(4, &StateKind::MaxEntangled).unwrap();
        assert!((invariant(&m, 2).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(invariant(&s, 0), Err(StateError::BadExponent { p: 0, d: 3 }));
        assert_eq!(invariant(&s, 4), Err(StateError::BadExponent { p: 4, d: 3 }));
    }

    #[test]
    fn invariants_unchanged_by_local_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for trial in 0..100 {
            let d = 2 + trial % 3;
            let s = random_state(&mut rng, d);
            let t = s.apply_local(&random_su(&mut rng, d), &random_su(&mut rng, d)).unwrap();
            for p in 1..=d {
                let a = invariant(&s, p).unwrap();
                assert!((a - invariant(&t, p).unwrap()).abs() < 1e-10);
                let rho_a = invariant_of(&s, Subsystem::A, p).unwrap();
                assert!((rho_a - a).abs() < 1e-10);
            }
            assert!((concurrence(&s) - concurrence(&t)).abs() < 1e-10);
            assert!((det_invariant(&s) - det_invariant(&t)).abs() < 1e-10);
        }
    }

    #[test]
    fn concurrence_extremes() {
        assert!(concurrence(&make_state(3, &StateKind::Product).unwrap()).abs() < 1e-15);
        let c2 = concurrence(&make_state(2, &StateKind::MaxEntangled).unwrap());
        assert!((c2 - 1.0).abs() < 1e-15);
        let c3 = concurrence(&make_state(3, &StateKind::MaxEntangled).unwrap());
        assert!((c3 - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=8 {
            let c = concurrence(&random_state(&mut rng, d));
            assert!((0.0..=max_concurrence(d) + 1e-10).contains(&c));
        }
    }

    #[test]
    fn qubit_concurrence_is_twice_determinant() {
        let m = make_state(2, &StateKind::MaxEntangled).unwrap();
        assert!((det_invariant(&m) - 0.5).abs() < 1e-15);
        assert!(det_invariant(&make_state(2, &StateKind::Product).unwrap()) == 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let s = random_state(&mut rng, 2);
            assert!((concurrence(&s) - 2.0 * det_invariant(&s)).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_sectors_of_maximally_entangled() {
        for d in 2..=5 {
            let s = make_state(d, &StateKind::MaxEntangled).unwrap();
            let p = polar_sectors(&s).unwrap();
            assert!((p.det_abs - (d as f64).powf(-(d as f64) / 2.0)).abs() < 1e-15);
            assert!(p.m.frobenius_norm() < 1e-14);
            assert!(p.sbar.distance(&ComplexMatrix::identity(d)) < 1e-14);
            assert!(p.phi.abs() < 1e-15);
        }
    }

    #[test]
    fn polar_sectors_global_phase_branch() {
        let d = 4;
        let alpha = ComplexMatrix::identity(d).scale(C64::from_polar(0.5, PI / 4.0));
        let p = polar_sectors(&TwoQuditState::new(alpha).unwrap()).unwrap();
        assert!((p.phi - PI / 4.0).abs() < 1e-14);
        assert!(p.sbar.distance(&ComplexMatrix::identity(d)) < 1e-14);
    }

    #[test]
    fn polar_sectors_random_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..200 {
            let d = 2 + trial % 5;
            let s = random_state(&mut rng, d);
            let p = polar_sectors(&s).unwrap();
            assert!((0.0..2.0 * PI / d as f64).contains(&p.phi));
            assert!((p.sbar.det() - 1.0).norm() < 1e-9);
            assert!(p.m.trace().norm() < 1e-10);
            assert!(p.reconstruct().unwrap().distance(s.alpha()) < 1e-9);
        }
    }

    #[test]
    fn tracked_branch_follows_previous() {
        let d = 3;
        let step = 2.0 * PI / 3.0;
        let alpha = ComplexMatrix::identity(d).scale(C64::from_polar(1.0 / 3f64.sqrt(), 0.1));
        let s = TwoQuditState::new(alpha).unwrap();
        let p = polar_sectors_tracked(&s, 0.1 + step + 0.05).unwrap();
        assert!((p.phi - (0.1 + step)).abs() < 1e-13);
        assert!((p.sbar.det() - 1.0).norm() < 1e-9);
        assert!(p.reconstruct().unwrap().distance(s.alpha()) < 1e-12);
    }

    #[test]
    fn polar_sectors_singular() {
        let s = make_state(3, &StateKind::Product).unwrap();
        assert!(matches!(polar_sectors(&s), Err(StateError::SingularState { .. })));
    }

    #[test]
    fn qhat_cases() {
        let basis = sud::generators(3).unwrap();
        let m = make_state(3, &StateKind::MaxEntangled).unwrap();
        let q = qhat(&m, &basis).unwrap();
        assert!(q.magnitude < 1e-14 && q.direction.is_none());

        let basis2 = sud::generators(2).unwrap();
        let s = make_state(2, &StateKind::Schmidt(vec![0.9, 0.1])).unwrap();
        let q = qhat(&s, &basis2).unwrap();
        assert!((q.magnitude - 0.8).abs() < 1e-14);
        let dir = q.direction.unwrap();
        assert!(dir[0].abs() < 1e-14 && dir[1].abs() < 1e-14 && (dir[2] - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in 2..=5 {
            let basis = sud::generators(d).unwrap();
            let s = random_state(&mut rng, d);
            let q = qhat(&s, &basis).unwrap();
            let cm = max_concurrence(d);
            let c = concurrence(&s);
            assert!((q.magnitude - (cm * cm - c * c).sqrt()).abs() < 1e-8);
            let coeffs: Vec<f64> = q.direction.unwrap().iter().map(|x| x * q.magnitude).collect();
            let back = &ComplexMatrix::identity(d).scale_real(1.0 / d as f64) + &basis.combine(&coeffs);
            assert!(back.distance(&reduced_density(&s, Subsystem::B)) < 1e-10);
        }
    }

    #[test]
    fn concurrence_targets() {
        for d in 2..=6 {
            let m = make_state(d, &StateKind::ConcurrenceTarget(max_concurrence(d))).unwrap();
            assert!(m.alpha().distance(&ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt())) < 1e-15);
            let p = make_state(d, &StateKind::ConcurrenceTarget(0.0)).unwrap();
            assert_eq!(p, make_state(d, &StateKind::Product).unwrap());
            for frac in [0.1, 0.5, 0.9, 0.999] {
                let target = frac * max_concurrence(d);
                let s = make_state(d, &StateKind::ConcurrenceTarget(target)).unwrap();
                assert!((concurrence(&s) - target).abs() < 1e-8);
            }
        }
        let spec = concurrence_spectrum(2, 0.6).unwrap();
        assert!((spec[0] - 0.9).abs() < 1e-11 && (spec[1] - 0.1).abs() < 1e-11);
        assert!(matches!(
            make_state(2, &StateKind::ConcurrenceTarget(1.2)),
            Err(StateError::UnreachableConcurrence { .. })
        ));
        assert!(matches!(make_state(2, &StateKind::Schmidt(vec![0.5, 0.6])), Err(StateError::BadSpectrum(_))));
        assert!(matches!(make_state(2, &StateKind::Schmidt(vec![1.5, -0.5])), Err(StateError::BadSpectrum(_))));
    }

    #[test]
    fn vn_aligned_state_positivity_window() {
        let d = 3;
        let cm = max_concurrence(d);
        let s = vn_aligned_state(d, cm).unwrap();
        assert_eq!(s, make_state(d, &StateKind::MaxEntangled).unwrap());
        let cmin = vn_min_concurrence(d);
        assert!((cmin - 1.0).abs() < 1e-14);
        let s = vn_aligned_state(d, 1.05).unwrap();
        assert!((concurrence(&s) - 1.05).abs() < 1e-12);
        let q = qhat(&s, &sud::generators(d).unwrap()).unwrap();
        assert!((q.direction.unwrap()[7] - 1.0).abs() < 1e-12);
        assert!(matches!(vn_aligned_state(d, 0.5), Err(StateError::InadmissibleConcurrence { .. })));
        // every concurrence is admissible for qubits
        assert!(vn_aligned_state(2, 0.0).is_ok());
    }

    #[test]
    fn q_spectrum_constant_under_local_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_state(&mut rng, 4);
        let t = s.apply_local(&random_su(&mut rng, 4), &random_su(&mut rng, 4)).unwrap();
        let a = q_spectrum(&s).unwrap();
        let b = q_spectrum(&t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = random_state(&mut rng, 3);
        let text = s.to_text();
        assert!(text.starts_with("d=3\n"));
        assert_eq!(TwoQuditState::from_text(&text).unwrap(), s);
        let t = TwoQuditState::from_text("d=2\n0.6+0j 0-0j\n0+0j 0+0.8j\n").unwrap();
        assert_eq!(t.alpha()[(1, 1)], C64::new(0.0, 0.8));
        assert_eq!(parse_entry("1e-3-2.5E+2j").unwrap(), C64::new(1e-3, -250.0));
        assert!(TwoQuditState::from_text("d=2\n1+0j\n").is_err());
        assert!(TwoQuditState::from_text("dim=2\n").is_err());
    }
}
