//! `SU(d)` structure: the generalized Gell-Mann basis, its structure
//! constants and the adjoint map `S̄ ↦ R(S̄)`.
//!
//! Generator ordering is fixed: the symmetric off-diagonal generators for
//! `j < k` in row-major order, then the antisymmetric ones in the same order,
//! then the `d − 1` diagonal generators by increasing rank. The last
//! generator is therefore `diag(1, …, 1, −(d−1)) / √(2d(d−1))`, the one
//! proportional to [`vn_generator`]. Normalization is `Tr(T_a T_b) = δ_ab/2`.

use thiserror::Error;

use crate::matcore::{ComplexMatrix, RealMatrix, C64};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SudError {
    #[error("dimension {0} outside the supported range 2..=8")]
    UnsupportedDimension(usize),
    #[error("basis dimension {basis} does not match matrix dimension {matrix}")]
    DimensionMismatch { basis: usize, matrix: usize },
    #[error("matrix is not unitary (||U^dagger U - I||_F = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("matrix is not Hermitian (||H - H^dagger||_F = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("generator basis inconsistent: {0}")]
    BasisInconsistent(String),
}

pub fn check_dim(d: usize) -> Result<(), SudError> {
    if (MIN_DIM..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(SudError::UnsupportedDimension(d))
    }
}

/// Maximal I-concurrence `√(2(d−1)/d)`.
pub fn max_concurrence(d: usize) -> f64 {
    (2.0 * (d as f64 - 1.0) / d as f64).sqrt()
}

/// The `d² − 1` Hermitian traceless generators of `SU(d)`.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `d² − 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn get(&self, a: usize) -> &ComplexMatrix {
        &self.generators[a]
    }

    /// The last (rank `d − 1`) diagonal generator, `T_N` with `N = d² − 1`.
    pub fn last(&self) -> &ComplexMatrix {
        self.generators.last().expect("basis is never empty")
    }

    /// `Σ_a c_a T_a`.
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.len(), "coefficient count");
        let mut out = ComplexMatrix::zeros(self.dim);
        for (t, &c) in self.generators.iter().zip(coeffs) {
            if c != 0.0 {
                out = &out + &t.scale_real(c);
            }
        }
        out
    }
}

/// Generalized Gell-Mann generators of `SU(d)`.
pub fn generators(d: usize) -> Result<GeneratorBasis, SudError> {
    check_dim(d)?;
    let mut gens = Vec::with_capacity(d * d - 1);
    let half = C64::new(0.5, 0.0);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = half;
            m[(k, j)] = half;
            gens.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = C64::new(0.0, -0.5);
            m[(k, j)] = C64::new(0.0, 0.5);
            gens.push(m);
        }
    }
    for l in 1..d {
        let norm = 1.0 / (2.0 * (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        gens.push(ComplexMatrix::from_real_diag(&diag));
    }
    Ok(GeneratorBasis { dim: d, generators: gens })
}

/// The diagonal traceless generator of the `V_N` path:
/// `E = diag(1/d, …, 1/d, 1/d − 1)`.
pub fn vn_generator(d: usize) -> Result<ComplexMatrix, SudError> {
    check_dim(d)?;
    let inv = 1.0 / d as f64;
    let diag: Vec<f64> = (0..d).map(|i| if i + 1 < d { inv } else { inv - 1.0 }).collect();
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// Totally antisymmetric real structure constants `f_abc`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: usize,
    f: Vec<f64>,
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[(a * self.n + b) * self.n + c]
    }
}

/// `f_abc = −2i Tr([T_a, T_b] T_c)`.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants, SudError> {
    let n = basis.len();
    let mut f = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let comm = basis.get(a).commutator(basis.get(b));
            for c in 0..n {
                let v = comm.trace_product(basis.get(c)) * C64::new(0.0, -2.0);
                if v.im.abs() > 1e-12 {
                    return Err(SudError::BasisInconsistent(format!("f[{a}][{b}][{c}] has imaginary part {:e}", v.im)));
                }
                f[(a * n + b) * n + c] = v.re;
            }
        }
    }
    Ok(StructureConstants { n, f })
}

/// Adjoint image `R_ba = 2 Tr(T_b S̄ T_a S̄†)`; column `a` is the frame
/// vector `n̂_a` with `S̄ T_a S̄† = n̂_a · T`.
pub fn adjoint_rep(sbar: &ComplexMatrix, basis: &GeneratorBasis) -> Result<RealMatrix, SudError> {
    if sbar.dim() != basis.dim() {
        return Err(SudError::DimensionMismatch { basis: basis.dim(), matrix: sbar.dim() });
    }
    let defect = sbar.unitarity_defect();
    if defect > 1e-10 {
        return Err(SudError::NotUnitary { defect });
    }
    let n = basis.len();
    let s_dag = sbar.adjoint();
    let conjugated: Vec<ComplexMatrix> = basis.generators().iter().map(|t| &(sbar * t) * &s_dag).collect();
    Ok(RealMatrix::from_fn(n, |b, a| 2.0 * conjugated[a].trace_product(basis.get(b)).re))
}

/// Expansion `H = c0·I + Σ_a c_a T_a` of a Hermitian matrix.
pub fn decompose_hermitian(h: &ComplexMatrix, basis: &GeneratorBasis) -> Result<(f64, Vec<f64>), SudError> {
    if h.dim() != basis.dim() {
        return Err(SudError::DimensionMismatch { basis: basis.dim(), matrix: h.dim() });
    }
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * h.frobenius_norm().max(1.0) {
        return Err(SudError::NotHermitian { defect });
    }
    let c0 = h.trace().re / h.dim() as f64;
    let c = basis.generators().iter().map(|t| 2.0 * h.trace_product(t).re).collect();
    Ok((c0, c))
}
