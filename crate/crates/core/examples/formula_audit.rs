//! Compares the qudit geometric-phase expressions against the numerical
//! pipeline on the aligned state over one `V_N` cycle.
//!
//! Three candidates are evaluated:
//! - `printed`: tabulated overlap weights with the half-rate dynamical term
//! - `corrected`: tabulated overlap weights with the full dynamical term
//! - `aligned`: weights computed from the aligned state with the full term

use std::f64::consts::TAU;

use fracphase::evolution::{
    phase_trace, vn_geometric_phase_aligned, vn_geometric_phase_corrected, vn_geometric_phase_printed, vn_path,
    wrap_angle, Linear,
};
use fracphase::qstate::{vn_aligned_state, vn_min_concurrence};
use fracphase::sud::max_concurrence;

type Formula = fn(usize, f64, f64) -> Result<f64, fracphase::evolution::EvolutionError>;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let candidates: [(&str, Formula); 3] = [
        ("printed", vn_geometric_phase_printed),
        ("corrected", vn_geometric_phase_corrected),
        ("aligned", vn_geometric_phase_aligned),
    ];
    for d in [2usize, 3] {
        let cm = max_concurrence(d);
        let lo = vn_min_concurrence(d);
        let path = vn_path(d, Linear::new(0.0, TAU, 1.0), 1.0, 2001)?;
        for frac in [0.0, 0.5, 1.0] {
            let c = lo + frac * (cm - lo);
            let state = vn_aligned_state(d, c)?;
            let trace = phase_trace(&state, &path)?;
            print!("d={d} C={c:.4}:");
            for (name, f) in candidates {
                let mut err = 0.0f64;
                for s in trace.samples.iter().filter(|s| !s.is_orthogonal()) {
                    err = err.max(wrap_angle(f(d, c, s.chi)? - s.phi_g).abs());
                }
                print!("  {name} {err:.2e}");
            }
            println!();
        }
    }
    Ok(())
}
