//! The dynamical phase of a maximally entangled state vanishes on any
//! local SU(d) x SU(d) path; a product state on the same path does not.

use fracphase::evolution::{dynamical_phase, random_geodesic_path};
use fracphase::qstate::{make_state, StateKind};
use fracphase::random::{random_max_entangled, trial_rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in 2..=4 {
        let mut rng = trial_rng(11, d as u64);
        let entangled = random_max_entangled(&mut rng, d);
        let product = make_state(d, &StateKind::Product)?;
        let path = random_geodesic_path(&mut rng, d, 4, 2.5, 1.0, 801)?;
        let end = path.len() - 1;
        println!(
            "d={d}: phi_dyn(max entangled) = {:+.3e}   phi_dyn(product) = {:+.6}",
            dynamical_phase(&entangled, &path, end)?,
            dynamical_phase(&product, &path, end)?
        );
    }
    Ok(())
}
