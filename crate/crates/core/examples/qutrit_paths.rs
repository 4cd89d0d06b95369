//! Maximally entangled qutrits along the smooth `V_N` path and the
//! piecewise path: the first never reaches the origin, the second jumps
//! by `2π/3` there. Two cycles show the plateau ladder.

use std::f64::consts::{PI, TAU};

use fracphase::evolution::{phase_trace, qutrit_piecewise_path, vn_path, Linear};
use fracphase::qstate::{make_state, StateKind};
use fracphase::topology::{orthogonality_crossings, unwrap_phase_trace, CROSSING_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = make_state(3, &StateKind::MaxEntangled)?;
    let chi = Linear::new(0.0, TAU, 1.0);
    let smooth = vn_path(3, chi, 1.0, 2001)?.repeat(2)?;
    let piecewise = qutrit_piecewise_path(TAU, chi, 1.0, 2001)?.repeat(2)?;

    for (label, path) in [("V_N", &smooth), ("piecewise", &piecewise)] {
        let trace = phase_trace(&state, path)?;
        let (_, jumps) = unwrap_phase_trace(&trace)?;
        println!("{label}: min |overlap| = {:.6}", trace.min_abs_overlap());
        for k in 0..=8 {
            let s = &trace.samples[k * (trace.len() - 1) / 8];
            println!("  chi = {:5.2} pi  phi_g(unwrapped) = {:5.3} pi", s.chi / PI, s.phi_g_unwrapped / PI);
        }
        for j in &jumps {
            println!("  jump at t = {:.3}: {:+.6} pi", j.t, j.size / PI);
        }
        for t in orthogonality_crossings(&trace, CROSSING_TOL) {
            println!("  orthogonal at t = {t:.4}");
        }
    }
    Ok(())
}
