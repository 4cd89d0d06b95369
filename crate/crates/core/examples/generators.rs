//! The orthonormal SU(d) basis, its structure constants, and the adjoint
//! representation of a random group element.

use fracphase::matcore::ComplexMatrix;
use fracphase::random::{random_su, trial_rng};
use fracphase::sud::{adjoint_rep, generators, structure_constants, vn_generator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2, 3] {
        let basis = generators(d)?;
        let f = structure_constants(&basis)?;
        let mut worst = 0.0f64;
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let want = if a == b { 0.5 } else { 0.0 };
                worst = worst.max((basis.get(a).inner(basis.get(b)).re - want).abs());
            }
        }
        println!("d = {d}: {} generators, max |Tr T_a T_b - delta/2| = {worst:.2e}", basis.len());
        println!("  f_012 = {:.6}", f.get(0, 1, 2));

        let s = random_su(&mut trial_rng(5, d as u64), d);
        let r = adjoint_rep(&s, &basis)?;
        let n = basis.len();
        let mut orth = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| r[(k, i)] * r[(k, j)]).sum();
                orth = orth.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        println!("  adjoint image orthogonal to {orth:.2e}");
        let e = vn_generator(d)?;
        let centre = ComplexMatrix::identity(d)
            .scale(fracphase::matcore::C64::from_polar(1.0, std::f64::consts::TAU / d as f64));
        let ends = fracphase::matcore::expm_iherm(&e, std::f64::consts::TAU)?;
        println!("  exp(2 pi i E) reaches the centre to {:.2e}", ends.distance(&centre));
    }
    Ok(())
}
