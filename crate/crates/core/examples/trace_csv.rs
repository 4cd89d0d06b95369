//! Writes a phase trace as CSV, reads it back, and re-derives the unwrapped
//! geometric phase and its jumps from the parsed rows.

use std::f64::consts::TAU;

use fracphase::evolution::{phase_trace, qutrit_piecewise_path, Linear, PhaseTrace};
use fracphase::qstate::{make_state, StateKind};
use fracphase::topology::unwrap_phase_trace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = make_state(3, &StateKind::MaxEntangled)?;
    let path = qutrit_piecewise_path(TAU, Linear::new(0.0, TAU, 1.0), 1.0, 201)?;
    let csv = phase_trace(&state, &path)?.to_csv();
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    let parsed = PhaseTrace::from_csv(&csv)?;
    let (unwrapped, jumps) = unwrap_phase_trace(&parsed)?;
    println!("{} rows, {} jump(s)", parsed.len(), jumps.len());
    for j in jumps {
        println!("  t = {:.3}  size = {:.9}", j.t, j.size);
    }
    println!("final unwrapped phi_g = {:.9}", unwrapped.last().map_or(f64::NAN, |s| s.phi_g_unwrapped));
    Ok(())
}
