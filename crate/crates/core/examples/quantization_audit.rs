//! Random invertible states through cyclic local evolutions: `d·Δφ` lands
//! on `2πℤ`, and composing cycles adds homotopy classes mod `d`.

use fracphase::evolution::{evolve, vn_path, Linear};
use fracphase::random::{random_invertible_state, trial_rng};
use fracphase::topology::{check_cyclic, CYCLIC_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2usize, 3, 5] {
        let cycle = vn_path(d, Linear::new(0.0, std::f64::consts::TAU, 1.0), 1.0, 201)?;
        for trial in 0..3u64 {
            let mut rng = trial_rng(7, trial);
            let state = random_invertible_state(&mut rng, d, 1e-3);
            for k in 1..=d {
                let path = cycle.repeat(k)?;
                let end = evolve(&state, &path, path.len() - 1)?;
                let report = check_cyclic(&state, &end, CYCLIC_TOL)?;
                println!("d={d} trial={trial} cycles={k}: {report}");
            }
        }
    }
    Ok(())
}
