use std::borrow::Cow;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::EvolutionError;
use crate::matcore::{expm_iherm, ComplexMatrix, C64};
use crate::quadrature::{derivative, fd_step, matrix_derivative, tabulated_matrix_derivative};
use crate::random::random_traceless;
use crate::sud::{check_dim, vn_generator};

/// Smallest admissible grid.
pub const MIN_SAMPLES: usize = 101;
pub const DEFAULT_SAMPLES: usize = 2001;
pub const UNITARITY_TOL: f64 = 1e-10;
pub const DET_TOL: f64 = 1e-9;

/// A real function of time with a derivative.
///
/// Every `Fn(f64) -> f64` is a schedule whose rate comes from a central
/// difference; [`Linear`] has an exact rate.
pub trait Schedule {
    fn value(&self, t: f64) -> f64;

    fn rate(&self, t: f64, h: f64) -> f64 {
        derivative(|s| self.value(s), t, h)
    }
}

impl<F: Fn(f64) -> f64> Schedule for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// `from + (to − from)·t/τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Linear {
    pub from: f64,
    pub to: f64,
    pub tau: f64,
}

impl Linear {
    pub fn new(from: f64, to: f64, tau: f64) -> Self {
        Self { from, to, tau }
    }

    pub fn constant(value: f64) -> Self {
        Self { from: value, to: value, tau: 1.0 }
    }
}

impl Schedule for Linear {
    fn value(&self, t: f64) -> f64 {
        self.from + (self.to - self.from) * (t / self.tau)
    }

    fn rate(&self, _t: f64, _h: f64) -> f64 {
        (self.to - self.from) / self.tau
    }
}

/// Generators `H_j = −i Ū_j† dŪ_j/dt` at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators {
    pub a: Vec<ComplexMatrix>,
    pub b: Vec<ComplexMatrix>,
    /// Left limits at breakpoint nodes where the generator jumps; the
    /// tabulated value is the right limit.
    pub left: BTreeMap<usize, (ComplexMatrix, ComplexMatrix)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathWarning {
    /// The qutrit piecewise path does not close on the centre for this ζ.
    NonCyclicZeta { zeta: f64 },
}

/// Local unitaries `U_j(t) = e^{iφ_j(t)} Ū_j(t)` sampled on a uniform grid
/// over `[0, τ]`, with the SU(d) parts and the U(1) phases stored apart.
#[derive(Clone, Debug)]
pub struct UnitaryPath {
    dim: usize,
    tau: f64,
    chi: Vec<f64>,
    su_a: Vec<ComplexMatrix>,
    su_b: Vec<ComplexMatrix>,
    phase_a: Vec<f64>,
    phase_b: Vec<f64>,
    generators: Option<Generators>,
    breakpoints: Vec<usize>,
    warnings: Vec<PathWarning>,
}

pub(crate) fn check_grid(samples: usize, tau: f64) -> Result<(), EvolutionError> {
    if samples < MIN_SAMPLES || samples.is_multiple_of(2) {
        return Err(EvolutionError::GridTooCoarse { samples });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(EvolutionError::BadDuration(tau));
    }
    Ok(())
}

pub(crate) fn grid_time(k: usize, samples: usize, tau: f64) -> f64 {
    tau * (k as f64 / (samples - 1) as f64)
}

fn hermitian_generator(u: &ComplexMatrix, du: &ComplexMatrix) -> ComplexMatrix {
    (&u.adjoint() * du).scale(C64::new(0.0, -1.0)).hermitian_part()
}

impl UnitaryPath {
    /// Path from tabulated SU(d) samples. Generators, when given, must be
    /// Hermitian; otherwise they are differentiated from the table.
    pub fn from_samples(
        tau: f64,
        chi: Vec<f64>,
        su_a: Vec<ComplexMatrix>,
        su_b: Vec<ComplexMatrix>,
        generators: Option<Generators>,
        mut breakpoints: Vec<usize>,
    ) -> Result<Self, EvolutionError> {
        let n = su_a.len();
        check_grid(n, tau)?;
        if su_b.len() != n || chi.len() != n {
            return Err(EvolutionError::BadGrid("sample arrays differ in length".into()));
        }
        let dim = su_a[0].dim();
        for (k, (a, b)) in su_a.iter().zip(&su_b).enumerate() {
            for u in [a, b] {
                if u.dim() != dim {
                    return Err(EvolutionError::DimensionMismatch { expected: dim, found: u.dim() });
                }
                let unitarity = u.unitarity_defect();
                let det = (u.det() - C64::new(1.0, 0.0)).norm();
                if unitarity > UNITARITY_TOL || det > DET_TOL {
                    return Err(EvolutionError::NotSpecialUnitary { index: k, unitarity, det });
                }
            }
        }
        if let Some(g) = &generators {
            if g.a.len() != n || g.b.len() != n {
                return Err(EvolutionError::BadGrid("generator table length".into()));
            }
        }
        breakpoints.retain(|&b| b > 0 && b + 1 < n);
        breakpoints.sort_unstable();
        breakpoints.dedup();
        Ok(Self {
            dim,
            tau,
            chi,
            su_a,
            su_b,
            phase_a: vec![0.0; n],
            phase_b: vec![0.0; n],
            generators,
            breakpoints,
            warnings: Vec::new(),
        })
    }

    /// Tabulates smooth SU(d)-valued closures and differentiates them off
    /// the grid with a fourth-order central difference.
    pub fn from_fns(
        tau: f64,
        samples: usize,
        chi: impl Schedule,
        ua: impl Fn(f64) -> ComplexMatrix,
        ub: impl Fn(f64) -> ComplexMatrix,
    ) -> Result<Self, EvolutionError> {
        check_grid(samples, tau)?;
        let h = fd_step(tau);
        let mut su_a = Vec::with_capacity(samples);
        let mut su_b = Vec::with_capacity(samples);
        let mut gen =
            Generators { a: Vec::with_capacity(samples), b: Vec::with_capacity(samples), left: BTreeMap::new() };
        let mut chis = Vec::with_capacity(samples);
        for k in 0..samples {
            let t = grid_time(k, samples, tau);
            let a = ua(t);
            let b = ub(t);
            gen.a.push(hermitian_generator(&a, &matrix_derivative(&ua, t, h)));
            gen.b.push(hermitian_generator(&b, &matrix_derivative(&ub, t, h)));
            su_a.push(a);
            su_b.push(b);
            chis.push(chi.value(t));
        }
        Self::from_samples(tau, chis, su_a, su_b, Some(gen), Vec::new())
    }

    /// Constant identity path.
    pub fn identity(d: usize, tau: f64, samples: usize) -> Result<Self, EvolutionError> {
        check_dim(d)?;
        check_grid(samples, tau)?;
        let id = ComplexMatrix::identity(d);
        let zero = ComplexMatrix::zeros(d);
        let gen = Generators { a: vec![zero.clone(); samples], b: vec![zero; samples], left: BTreeMap::new() };
        Self::from_samples(tau, vec![0.0; samples], vec![id.clone(); samples], vec![id; samples], Some(gen), Vec::new())
    }

    /// Attaches U(1) phases, shifted so that both vanish at `t = 0`.
    pub fn with_u1_phases(mut self, phase_a: impl Fn(f64) -> f64, phase_b: impl Fn(f64) -> f64) -> Self {
        let n = self.len();
        let (a0, b0) = (phase_a(0.0), phase_b(0.0));
        for k in 0..n {
            let t = self.time(k);
            self.phase_a[k] = phase_a(t) - a0;
            self.phase_b[k] = phase_b(t) - b0;
        }
        self
    }

    /// `self` followed by `other`, the second leg left-multiplied by the
    /// endpoint of the first. The junction becomes a breakpoint.
    pub fn concat(&self, other: &UnitaryPath) -> Result<Self, EvolutionError> {
        if self.dim != other.dim {
            return Err(EvolutionError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let (h1, h2) = (self.step(), other.step());
        if (h1 - h2).abs() > 1e-12 * h1.max(h2) {
            return Err(EvolutionError::BadGrid("grid spacings differ".into()));
        }
        let n1 = self.len();
        let (wa, wb) = (&self.su_a[n1 - 1], &self.su_b[n1 - 1]);
        let (ca, cb, cchi) = (self.phase_a[n1 - 1], self.phase_b[n1 - 1], self.chi[n1 - 1]);

        let mut out = self.clone();
        out.tau = self.tau + other.tau;
        for k in 1..other.len() {
            out.su_a.push(wa * &other.su_a[k]);
            out.su_b.push(wb * &other.su_b[k]);
            out.phase_a.push(ca + other.phase_a[k]);
            out.phase_b.push(cb + other.phase_b[k]);
            out.chi.push(cchi + other.chi[k]);
        }
        let junction = n1 - 1;
        out.generators = match (&self.generators, &other.generators) {
            (Some(g1), Some(g2)) => {
                let mut g = g1.clone();
                g.a[junction] = g2.a[0].clone();
                g.b[junction] = g2.b[0].clone();
                g.a.extend(g2.a[1..].iter().cloned());
                g.b.extend(g2.b[1..].iter().cloned());
                g.left.insert(junction, (g1.a[junction].clone(), g1.b[junction].clone()));
                for (b, v) in &g2.left {
                    g.left.insert(b + junction, v.clone());
                }
                Some(g)
            }
            _ => None,
        };
        out.breakpoints.push(junction);
        out.breakpoints.extend(other.breakpoints.iter().map(|b| b + junction));
        out.warnings.extend(other.warnings.iter().cloned());
        out.warnings.dedup();
        Ok(out)
    }

    /// `k`-fold repetition of a path.
    pub fn repeat(&self, k: usize) -> Result<Self, EvolutionError> {
        if k == 0 {
            return Err(EvolutionError::BadGrid("zero repetitions".into()));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.concat(self)?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.su_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.su_a.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.tau / (self.len() - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        grid_time(k, self.len(), self.tau)
    }

    /// Path parameter χ at node `k`.
    pub fn chi(&self, k: usize) -> f64 {
        self.chi[k]
    }

    pub fn su_a(&self, k: usize) -> &ComplexMatrix {
        &self.su_a[k]
    }

    pub fn su_b(&self, k: usize) -> &ComplexMatrix {
        &self.su_b[k]
    }

    pub fn phase_a(&self, k: usize) -> f64 {
        self.phase_a[k]
    }

    pub fn phase_b(&self, k: usize) -> f64 {
        self.phase_b[k]
    }

    /// `φ_A + φ_B` at node `k`.
    pub fn u1_phase(&self, k: usize) -> f64 {
        self.phase_a[k] + self.phase_b[k]
    }

    /// Full local unitaries `(U_A, U_B)` at node `k`.
    pub fn unitaries(&self, k: usize) -> (ComplexMatrix, ComplexMatrix) {
        (
            self.su_a[k].scale(C64::from_polar(1.0, self.phase_a[k])),
            self.su_b[k].scale(C64::from_polar(1.0, self.phase_b[k])),
        )
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn warnings(&self) -> &[PathWarning] {
        &self.warnings
    }

    /// Whether `Ū_A(0) = Ū_B(0) = I` to 1e-12.
    pub fn starts_at_identity(&self) -> bool {
        let id = ComplexMatrix::identity(self.dim);
        self.su_a[0].distance(&id) <= 1e-12 && self.su_b[0].distance(&id) <= 1e-12
    }

    pub fn stored_generators(&self) -> Option<&Generators> {
        self.generators.as_ref()
    }

    /// Stored generators, or a fourth-order differentiation of the table
    /// carried out segment by segment.
    pub fn generators(&self) -> Result<Cow<'_, Generators>, EvolutionError> {
        if let Some(g) = &self.generators {
            return Ok(Cow::Borrowed(g));
        }
        let n = self.len();
        let h = self.step();
        let mut bounds = vec![0];
        bounds.extend(&self.breakpoints);
        bounds.push(n - 1);
        let mut g = Generators {
            a: vec![ComplexMatrix::zeros(self.dim); n],
            b: vec![ComplexMatrix::zeros(self.dim); n],
            left: BTreeMap::new(),
        };
        for w in bounds.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo + 1 < 5 {
                return Err(EvolutionError::GridTooCoarse { samples: hi - lo + 1 });
            }
            let seg_a = &self.su_a[lo..=hi];
            let seg_b = &self.su_b[lo..=hi];
            for i in 0..=(hi - lo) {
                let ha = hermitian_generator(&seg_a[i], &tabulated_matrix_derivative(seg_a, i, h));
                let hb = hermitian_generator(&seg_b[i], &tabulated_matrix_derivative(seg_b, i, h));
                if i == hi - lo && hi + 1 < n {
                    g.left.insert(hi, (ha, hb));
                } else {
                    g.a[lo + i] = ha;
                    g.b[lo + i] = hb;
                }
            }
        }
        Ok(Cow::Owned(g))
    }
}

/// `U_m = e^{−iφT₃} e^{iθT₂} e^{iφT₃}` in closed form.
pub fn euler_um(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) | (1, 1) => C64::new(c, 0.0),
        (0, 1) => C64::from_polar(s, -phi),
        _ => C64::from_polar(-s, phi),
    })
}

/// `V₃ = e^{iχT₃}`.
pub fn v3(chi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[C64::from_polar(1.0, 0.5 * chi), C64::from_polar(1.0, -0.5 * chi)])
}

/// Qubit path `Ū_A = U_m(θ, φ) V₃(χ)` with the B side at rest.
pub fn qubit_euler_path(
    theta: impl Schedule,
    phi: impl Schedule,
    chi: impl Schedule,
    tau: f64,
    samples: usize,
) -> Result<UnitaryPath, EvolutionError> {
    check_grid(samples, tau)?;
    if chi.value(0.0).abs() > 1e-12 {
        return Err(EvolutionError::BadAngleRange(format!("chi(0) = {}", chi.value(0.0))));
    }
    for k in 0..samples {
        let t = grid_time(k, samples, tau);
        let (th, ph) = (theta.value(t), phi.value(t));
        if !(0.0..PI).contains(&th) {
            return Err(EvolutionError::BadAngleRange(format!("theta = {th} at t = {t}")));
        }
        if !(0.0..=2.0 * PI).contains(&ph) {
            return Err(EvolutionError::BadAngleRange(format!("phi = {ph} at t = {t}")));
        }
    }
    let id = ComplexMatrix::identity(2);
    UnitaryPath::from_fns(
        tau,
        samples,
        |t: f64| chi.value(t),
        |t| &euler_um(theta.value(t), phi.value(t)) * &v3(chi.value(t)),
        |_| id.clone(),
    )
}

/// `V_N(t) = e^{iχ(t)E}` on the A side, with the exact generator `χ̇E`.
pub fn vn_path(d: usize, chi: impl Schedule, tau: f64, samples: usize) -> Result<UnitaryPath, EvolutionError> {
    let e = vn_generator(d)?;
    check_grid(samples, tau)?;
    let h = fd_step(tau);
    let ediag: Vec<f64> = e.diag().iter().map(|z| z.re).collect();
    diagonal_path(d, tau, samples, &chi, |x| ediag.iter().map(|&w| w * x).collect(), |t| e.scale_real(chi.rate(t, h)))
}

fn diagonal_path(
    d: usize,
    tau: f64,
    samples: usize,
    chi: &impl Schedule,
    phases: impl Fn(f64) -> Vec<f64>,
    generator: impl Fn(f64) -> ComplexMatrix,
) -> Result<UnitaryPath, EvolutionError> {
    let id = ComplexMatrix::identity(d);
    let zero = ComplexMatrix::zeros(d);
    let mut su_a = Vec::with_capacity(samples);
    let mut ga = Vec::with_capacity(samples);
    let mut chis = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = grid_time(k, samples, tau);
        let x = chi.value(t);
        let diag: Vec<C64> = phases(x).into_iter().map(|p| C64::from_polar(1.0, p)).collect();
        su_a.push(ComplexMatrix::from_diag(&diag));
        ga.push(generator(t));
        chis.push(x);
    }
    let gen = Generators { a: ga, b: vec![zero; samples], left: BTreeMap::new() };
    UnitaryPath::from_samples(tau, chis, su_a, vec![id; samples], Some(gen), Vec::new())
}

/// Whether ζ closes the qutrit piecewise path on `e^{i2π/3} I`, i.e.
/// `ζ ≡ 2π (mod 3π)`.
pub fn zeta_is_cyclic(zeta: f64) -> bool {
    let r = (zeta - 2.0 * PI) / (3.0 * PI);
    (r - r.round()).abs() <= 1e-9
}

/// Qutrit path `diag(e^{iφ₁}, e^{iφ₂}, e^{iφ₃})` with
/// `φ₁ = 2χ/3 + [2(π−ζ)/3]Θ(χ−π)`, `φ₂ = −2χ/3`, `φ₃ = −(φ₁+φ₂)`.
///
/// `Θ(0) = 0`, so a node at `χ = π` (to within 1e-12) belongs to the first
/// branch. The generator is `χ̇ diag(2/3, −2/3, 0)` on both branches.
pub fn qutrit_piecewise_path(
    zeta: f64,
    chi: impl Schedule,
    tau: f64,
    samples: usize,
) -> Result<UnitaryPath, EvolutionError> {
    check_grid(samples, tau)?;
    let h = fd_step(tau);
    let step = |x: f64| if x - PI > 1e-12 { 1.0 } else { 0.0 };
    let phases = |x: f64| {
        let p1 = 2.0 * x / 3.0 + 2.0 * (PI - zeta) / 3.0 * step(x);
        let p2 = -2.0 * x / 3.0;
        vec![p1, p2, -(p1 + p2)]
    };
    let g = ComplexMatrix::from_real_diag(&[2.0 / 3.0, -2.0 / 3.0, 0.0]);
    let mut path = diagonal_path(3, tau, samples, &chi, phases, |t| g.scale_real(chi.rate(t, h)))?;
    let branch_end = (0..samples - 1).find(|&k| step(path.chi[k]) != step(path.chi[k + 1]));
    if let Some(b) = branch_end.filter(|&b| b > 0) {
        path.breakpoints.push(b);
    }
    if !zeta_is_cyclic(zeta) {
        path.warnings.push(PathWarning::NonCyclicZeta { zeta });
    }
    Ok(path)
}

/// Random piecewise-geodesic path on both sides:
/// `Ū(t) = Ū(t_k) e^{i(t−t_k)H_k}` on segment `k`, with `H_k` traceless
/// Gaussian generators scaled by `rate`. Segment joins are breakpoints.
pub fn random_geodesic_path<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    segments: usize,
    rate: f64,
    tau: f64,
    samples: usize,
) -> Result<UnitaryPath, EvolutionError> {
    check_dim(d)?;
    check_grid(samples, tau)?;
    let segments = segments.clamp(1, (samples - 1) / 4);
    let bounds: Vec<usize> = (0..=segments).map(|j| j * (samples - 1) / segments).collect();
    let hs_a: Vec<ComplexMatrix> = (0..segments).map(|_| random_traceless(rng, d).scale_real(rate)).collect();
    let hs_b: Vec<ComplexMatrix> = (0..segments).map(|_| random_traceless(rng, d).scale_real(rate)).collect();

    let mut su_a = vec![ComplexMatrix::identity(d); samples];
    let mut su_b = su_a.clone();
    let mut gen = Generators { a: Vec::with_capacity(samples), b: Vec::with_capacity(samples), left: BTreeMap::new() };
    for (j, w) in bounds.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let t0 = grid_time(lo, samples, tau);
        let (start_a, start_b) = (su_a[lo].clone(), su_b[lo].clone());
        for k in lo..=hi {
            let s = grid_time(k, samples, tau) - t0;
            if k > lo {
                su_a[k] = &start_a * &expm_iherm(&hs_a[j], s)?;
                su_b[k] = &start_b * &expm_iherm(&hs_b[j], s)?;
            }
        }
        let first = if j == 0 { lo } else { lo + 1 };
        for _ in first..=hi {
            gen.a.push(hs_a[j].clone());
            gen.b.push(hs_b[j].clone());
        }
        if j > 0 {
            gen.a[lo] = hs_a[j].clone();
            gen.b[lo] = hs_b[j].clone();
            gen.left.insert(lo, (hs_a[j - 1].clone(), hs_b[j - 1].clone()));
        }
    }
    let chi = (0..samples).map(|k| grid_time(k, samples, tau)).collect();
    let breaks = bounds[1..segments].to_vec();
    UnitaryPath::from_samples(tau, chi, su_a, su_b, Some(gen), breaks)
}
