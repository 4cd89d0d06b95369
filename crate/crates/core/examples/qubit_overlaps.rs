//! Overlap trajectories of two entangled qubits under `U_m(θ, φ) ⊗ V₃(χ)`.
//!
//! Prints a coarse table per concurrence and compares each point with the
//! closed-form overlap. Run with `cargo run --example qubit_overlaps`.

use std::f64::consts::TAU;

use fracphase::evolution::{phase_trace, qubit_euler_path, qubit_overlap_closed_form, Linear};
use fracphase::qstate::{make_state, StateKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = 0.0;
    let path = qubit_euler_path(Linear::constant(theta), Linear::constant(0.0), Linear::new(0.0, TAU, 1.0), 1.0, 2001)?;
    for c in [0.0, 0.4, 0.8, 0.95, 1.0] {
        let state = make_state(2, &StateKind::ConcurrenceTarget(c))?;
        let trace = phase_trace(&state, &path)?;
        println!("C = {c}");
        println!("  {:>7} {:>10} {:>10} {:>10}", "chi", "Re", "Im", "phi_g");
        for s in trace.samples.iter().step_by(250) {
            let exact = qubit_overlap_closed_form(c, theta, s.chi, 0.0)?;
            assert!((exact - s.overlap).norm() < 1e-10);
            println!("  {:7.4} {:10.6} {:10.6} {:10.6}", s.chi, s.overlap.re, s.overlap.im, s.phi_g);
        }
        println!("  min |overlap| = {:.3e}", trace.min_abs_overlap());
    }
    Ok(())
}
