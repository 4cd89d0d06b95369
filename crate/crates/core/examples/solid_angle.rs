//! Cone loops of the qubit frame: the frame functional `Φ` equals the cap
//! solid angle `2π(1 − cos θ)`, and a product state acquires `−Φ/2`.

use std::f64::consts::{PI, TAU};

use fracphase::evolution::{geometric_phase, qubit_euler_path, solid_angle, Linear};
use fracphase::qstate::{make_state, StateKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let product = make_state(2, &StateKind::Product)?;
    for theta in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let phi = Linear::new(0.0, TAU, 1.0);
        let omega = solid_angle(Linear::constant(theta), phi, 1.0, 2001)?;
        let path = qubit_euler_path(Linear::constant(theta), phi, Linear::constant(0.0), 1.0, 2001)?;
        let g = geometric_phase(&product, &path, path.len() - 1)?;
        println!("theta = {:.4}: Phi = {omega:.9} (cap {:.9}), phi_g = {g:+.9}", theta, TAU * (1.0 - theta.cos()));
    }
    Ok(())
}
