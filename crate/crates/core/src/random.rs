//! Seeded random states, generators and unitaries.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matcore::{expm_iherm, ComplexMatrix, C64};
use crate::qstate::TwoQuditState;

/// Independent stream for `trial` derived from `seed`; results do not
/// depend on the order in which trials run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized state with i.i.d. complex Gaussian coefficients.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> TwoQuditState {
    let alpha = ComplexMatrix::from_fn(d, |_, _| gaussian(rng));
    TwoQuditState::normalized(alpha).expect("Gaussian matrix is nonzero")
}

/// Hermitian matrix from the Gaussian unitary ensemble.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| gaussian(rng)).hermitian_part()
}

/// Hermitian traceless matrix, the trace removed exactly on the diagonal.
pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut h = random_hermitian(rng, d);
    let shift = h.trace().re / d as f64;
    for i in 0..d {
        h[(i, i)] = C64::new(h[(i, i)].re - shift, 0.0);
    }
    h
}

pub fn random_su<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let h = random_traceless(rng, d);
    expm_iherm(&h, 1.0).expect("Hermitian by construction")
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, d);
    expm_iherm(&h, 1.0).expect("Hermitian by construction")
}

/// `α = U/√d` for a random unitary `U`.
pub fn random_max_entangled<R: Rng + ?Sized>(rng: &mut R, d: usize) -> TwoQuditState {
    let u = random_unitary(rng, d);
    TwoQuditState::new(u.scale_real(1.0 / (d as f64).sqrt())).expect("unitary/√d is normalized")
}

/// Random state with `|det α| > min_det`, resampling as needed.
pub fn random_invertible_state<R: Rng + ?Sized>(rng: &mut R, d: usize, min_det: f64) -> TwoQuditState {
    loop {
        let s = random_state(rng, d);
        if s.alpha().det().norm() > min_det {
            return s;
        }
    }
}
