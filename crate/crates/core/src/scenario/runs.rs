use std::f64::consts::{PI, TAU};
use std::path::Path;

use super::{write_file, PathKind, RunReport, Scenario, ScenarioError, ScenarioName};
use crate::evolution::{
    dyn_integrand_series, dynamical_phases, evolve, fmt_sig, phase_trace, qubit_euler_path,
    qubit_geometric_phase_closed_form, qubit_overlap_closed_form, qutrit_piecewise_path, random_geodesic_path, vn_path,
    wrap_angle, zeta_is_cyclic, Linear, PhaseTrace, UnitaryPath,
};
use crate::matcore::{ComplexMatrix, C64};
use crate::qstate::{concurrence, make_state, StateKind};
use crate::random::{random_invertible_state, random_max_entangled, random_su, trial_rng};
use crate::sud::vn_generator;
use crate::topology::{check_cyclic, unwrap_phase_trace, Quantization, CYCLIC_TOL};

/// Validates the scenario, runs it, and writes `<name>_report.txt` next
/// to its other outputs.
pub fn run(s: &Scenario) -> Result<RunReport, ScenarioError> {
    s.validate()?;
    let mut report = match s.name {
        ScenarioName::Fig1 => run_fig1(&s.concurrences, s.theta, s.phi, s.chi_end, s.samples, &s.out)?,
        ScenarioName::Fig2a => run_fig2(Fig2Variant::A, s.zeta, s.chi_end, s.samples, 1, &s.out)?,
        ScenarioName::Fig2b => run_fig2(Fig2Variant::B, s.zeta, s.chi_end, s.samples, s.cycles, &s.out)?,
        ScenarioName::AuditQuantization => run_audit_quantization(&s.dims, s.trials, s.seed, s.samples, &s.out)?,
        ScenarioName::DynVanishing => run_dyn_vanishing(&s.dims, s.trials, s.seed, s.samples, &s.out)?,
        ScenarioName::Evolve => run_evolve(s)?,
    };
    let body = report.render();
    write_file(&mut report, &s.out, &format!("{}_report.txt", s.name), &body)?;
    Ok(report)
}

fn max_by(trace: &PhaseTrace, f: impl Fn(&crate::evolution::TraceSample) -> f64) -> f64 {
    trace.samples.iter().map(f).fold(0.0, f64::max)
}

/// Qubit overlaps along `U_m(θ, φ) V₃(χ)`, `χ: 0 → chi_end`, one CSV per
/// concurrence.
pub fn run_fig1(
    concurrences: &[f64],
    theta: f64,
    phi: f64,
    chi_end: f64,
    samples: usize,
    out: &Path,
) -> Result<RunReport, ScenarioError> {
    let mut report = RunReport::default();
    let path =
        qubit_euler_path(Linear::constant(theta), Linear::constant(phi), Linear::new(0.0, chi_end, 1.0), 1.0, samples)?;
    for &c in concurrences {
        if !(0.0..=1.0).contains(&c) {
            return Err(ScenarioError::BadConcurrence { concurrence: c, d: 2, max: 1.0 });
        }
        let state = make_state(2, &StateKind::ConcurrenceTarget(c))?;
        let trace = phase_trace(&state, &path)?;
        write_file(&mut report, out, &format!("fig1_c{}.csv", fmt_sig(c)), &trace.to_csv())?;

        let mut ov_err = 0.0f64;
        let mut phase_err = 0.0f64;
        for s in &trace.samples {
            let z = qubit_overlap_closed_form(c, theta, s.chi, 0.0)?;
            ov_err = ov_err.max((z - s.overlap).norm());
            if !s.is_orthogonal() {
                let g = qubit_geometric_phase_closed_form(c, s.chi, 0.0)?;
                phase_err = phase_err.max(wrap_angle(g - s.phi_g).abs());
            }
        }
        let max_im = max_by(&trace, |s| s.overlap.im.abs());
        let modulus_dev = max_by(&trace, |s| (s.overlap.norm() - 1.0).abs());
        report.lines.push(format!(
            "c={} min_abs_overlap={} max_abs_im={} overlap_err={} phase_err={}",
            fmt_sig(c),
            fmt_sig(trace.min_abs_overlap()),
            fmt_sig(max_im),
            fmt_sig(ov_err),
            fmt_sig(phase_err)
        ));
        report.check(format!("c={} overlap closed form", fmt_sig(c)), ov_err <= 1e-10, format!("max error {ov_err:e}"));
        report.check(
            format!("c={} phase closed form", fmt_sig(c)),
            phase_err <= 1e-6,
            format!("max error {phase_err:e}"),
        );
        if c == 1.0 {
            report.check("c=1 real-axis segment", max_im <= 1e-10, format!("max |Im| {max_im:e}"));
        }
        if c == 0.0 && theta == 0.0 {
            report.check("c=0 unit circle", modulus_dev <= 1e-10, format!("max ||z|-1| {modulus_dev:e}"));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig2Variant {
    /// Overlap trajectories over one cycle.
    A,
    /// Geometric phase over accumulated cycles.
    B,
}

/// The two qutrit paths at maximal entanglement: `V_N` and the piecewise
/// path, each over `cycles` sweeps of `χ: 0 → chi_end`.
pub fn run_fig2(
    variant: Fig2Variant,
    zeta: f64,
    chi_end: f64,
    samples: usize,
    cycles: usize,
    out: &Path,
) -> Result<RunReport, ScenarioError> {
    let mut report = RunReport::default();
    let state = make_state(3, &StateKind::MaxEntangled)?;
    let chi = Linear::new(0.0, chi_end, 1.0);
    let vn = vn_path(3, chi, 1.0, samples)?.repeat(cycles)?;
    let pw = qutrit_piecewise_path(zeta, chi, 1.0, samples)?.repeat(cycles)?;
    let vn_trace = phase_trace(&state, &vn)?;
    let pw_trace = phase_trace(&state, &pw)?;
    let tag = if variant == Fig2Variant::A { "fig2a" } else { "fig2b" };
    write_file(&mut report, out, &format!("{tag}_vn.csv"), &vn_trace.to_csv())?;
    write_file(&mut report, out, &format!("{tag}_piecewise.csv"), &pw_trace.to_csv())?;
    let cyclic_zeta = zeta_is_cyclic(zeta);
    if !cyclic_zeta {
        report.lines.push(format!("warning: zeta={} does not close the piecewise cycle", fmt_sig(zeta)));
    }
    let (_, vn_jumps) = unwrap_phase_trace(&vn_trace)?;
    let (_, pw_jumps) = unwrap_phase_trace(&pw_trace)?;
    for (label, trace, jumps) in [("vn", &vn_trace, &vn_jumps), ("piecewise", &pw_trace, &pw_jumps)] {
        let last = trace.last().expect("non-empty trace");
        report.lines.push(format!(
            "{label}: cycles={cycles} min_abs_overlap={} final_phi_tot={} final_phi_g_unwrapped={} jumps={}",
            fmt_sig(trace.min_abs_overlap()),
            fmt_sig(last.phi_tot),
            fmt_sig(last.phi_g_unwrapped),
            jumps.len()
        ));
        for j in jumps.iter() {
            report.lines.push(format!("{label}: jump t={} size={}", fmt_sig(j.t), fmt_sig(j.size)));
        }
    }

    let third = 1.0 / 3.0;
    let vn_min = vn_trace.min_abs_overlap();
    report.check("vn never orthogonal, min |overlap| = 1/3", (vn_min - third).abs() <= 1e-9, format!("{vn_min}"));
    report.check("vn smooth (no jumps)", vn_jumps.is_empty(), format!("{} jumps", vn_jumps.len()));
    let pw_min = pw_trace.min_abs_overlap();
    report.check("piecewise reaches the origin", pw_min <= 1e-9, format!("min |overlap| {pw_min:e}"));

    match variant {
        Fig2Variant::A => {
            let end = vn_trace.last().expect("non-empty").phi_tot;
            let err = wrap_angle(end - TAU / 3.0).abs();
            report.check("vn endpoint phi_tot = 2pi/3", err <= 1e-8, format!("error {err:e}"));
            if cyclic_zeta {
                let mut formula_err = 0.0f64;
                let mut plateau_err = 0.0f64;
                for s in &pw_trace.samples {
                    let x = s.chi;
                    let z = if x <= PI {
                        C64::new(third * (1.0 + 2.0 * (2.0 * x / 3.0).cos()), 0.0)
                    } else {
                        C64::from_polar(third * (1.0 + 2.0 * (2.0 * (x + PI) / 3.0).cos()), TAU / 3.0)
                    };
                    formula_err = formula_err.max((z - s.overlap).norm());
                    if !s.is_orthogonal() {
                        let want = if x < PI { 0.0 } else { TAU / 3.0 };
                        plateau_err = plateau_err.max(wrap_angle(s.phi_g - want).abs());
                    }
                }
                report.check(
                    "piecewise overlap matches the branch formula",
                    formula_err <= 1e-9,
                    format!("{formula_err:e}"),
                );
                report.check("piecewise phi_g = 0 then 2pi/3", plateau_err <= 1e-6, format!("{plateau_err:e}"));
            }
        }
        Fig2Variant::B => {
            let step = TAU / 3.0;
            let cycle_len = samples - 1;
            let mut end_err = 0.0f64;
            for k in 1..=cycles {
                let s = &vn_trace.samples[k * cycle_len];
                end_err = end_err.max((s.phi_g_unwrapped - k as f64 * step).abs());
            }
            report.check("vn cycle ends at n*2pi/3", end_err <= 1e-6, format!("{end_err:e}"));
            if cyclic_zeta {
                let mut plateau_err = 0.0f64;
                let mut levels = std::collections::BTreeSet::new();
                for s in pw_trace.samples.iter().filter(|s| !s.is_orthogonal()) {
                    let n = (s.phi_g_unwrapped / step).round();
                    plateau_err = plateau_err.max((s.phi_g_unwrapped - n * step).abs());
                    levels.insert((n as i64).rem_euclid(3));
                }
                report.lines.push(format!("piecewise plateau classes: {levels:?}"));
                let jumps_ok = pw_jumps.len() == cycles && pw_jumps.iter().all(|j| (j.size - step).abs() <= 1e-6);
                report.check(
                    "piecewise plateaus at multiples of 2pi/3",
                    plateau_err <= 1e-6,
                    format!("{plateau_err:e}"),
                );
                report.check("piecewise jumps of +2pi/3, one per cycle", jumps_ok, format!("{} jumps", pw_jumps.len()));
                if cycles >= 2 {
                    report.check("plateaus visit 0, 2pi/3, 4pi/3", levels.len() == 3, format!("{levels:?}"));
                }
            }
        }
    }
    Ok(report)
}

fn framed_vn_cycle(
    d: usize,
    frame: &ComplexMatrix,
    side_a: bool,
    samples: usize,
) -> Result<UnitaryPath, ScenarioError> {
    let e: Vec<f64> = vn_generator(d)?.diag().iter().map(|z| z.re).collect();
    let frame_adj = frame.adjoint();
    let u = move |t: f64| {
        let diag: Vec<C64> = e.iter().map(|&w| C64::from_polar(1.0, w * TAU * t)).collect();
        &(frame * &ComplexMatrix::from_diag(&diag)) * &frame_adj
    };
    let id = ComplexMatrix::identity(d);
    let chi = Linear::new(0.0, TAU, 1.0);
    Ok(if side_a {
        UnitaryPath::from_fns(1.0, samples, chi, u, |_| id.clone())?
    } else {
        UnitaryPath::from_fns(1.0, samples, chi, |_| id.clone(), u)?
    })
}

fn stream(d: usize, trial: usize) -> u64 {
    ((d as u64) << 32) | trial as u64
}

/// Random invertible states through `V_N` cycles in random frames, alone
/// and composed on both sides; `Δφ` must sit on the `2π/d` lattice.
pub fn run_audit_quantization(
    dims: &[usize],
    trials: usize,
    seed: u64,
    samples: usize,
    out: &Path,
) -> Result<RunReport, ScenarioError> {
    let mut report = RunReport::default();
    let mut max_defect = 0.0f64;
    let mut class_failures = 0usize;
    let mut quant_failures = 0usize;
    for &d in dims {
        let mut vn_err = 0.0f64;
        let mut qubit_values_ok = true;
        for trial in 0..trials {
            let mut rng = trial_rng(seed, stream(d, trial));
            let state = random_invertible_state(&mut rng, d, 1e-6);
            let wa = random_su(&mut rng, d);
            let wb = random_su(&mut rng, d);
            let cycle_a = framed_vn_cycle(d, &wa, true, samples)?;
            let cycle_b = framed_vn_cycle(d, &wb, false, samples)?;
            let (ka, kb) = (1 + trial % d, trial % 3);
            let mut composed = cycle_a.repeat(ka)?;
            for _ in 0..kb {
                composed = composed.concat(&cycle_b)?;
            }
            for (label, path, expected) in [("vn", &cycle_a, 1 % d), ("composed", &composed, (ka + kb) % d)] {
                let end = evolve(&state, path, path.len() - 1)?;
                let r = check_cyclic(&state, &end, CYCLIC_TOL)?;
                report.lines.push(format!("d={d} trial={trial} path={label} ka={ka} kb={kb} expected={expected} {r}"));
                match r.quantization {
                    Quantization::Holds { defect } => max_defect = max_defect.max(defect),
                    _ => quant_failures += 1,
                }
                if r.class_n != Some(expected) {
                    class_failures += 1;
                }
                if label == "vn" {
                    vn_err = vn_err.max(wrap_angle(r.delta_phi - TAU / d as f64).abs());
                }
                if d == 2 {
                    qubit_values_ok &= r.delta_phi.abs() <= 1e-8 || (r.delta_phi.abs() - PI).abs() <= 1e-8;
                }
            }
        }
        report.check(format!("d={d} single cycle gives 2pi/d"), vn_err <= 1e-9, format!("max error {vn_err:e}"));
        if d == 2 {
            report.check("d=2 phases are 0 or pi", qubit_values_ok, "all trials");
        }
        let product = make_state(d, &StateKind::Product)?;
        let cycle = vn_path(d, Linear::new(0.0, TAU, 1.0), 1.0, samples)?;
        let end = evolve(&product, &cycle, cycle.len() - 1)?;
        let r = check_cyclic(&product, &end, CYCLIC_TOL)?;
        report.lines.push(format!("d={d} control=product {r}"));
        report.check(
            format!("d={d} singular control withheld"),
            matches!(r.quantization, Quantization::Withheld { .. }),
            format!("{:?}", r.quantization),
        );
    }
    report.lines.push(format!("summary trials={trials} max_defect={}", fmt_sig(max_defect)));
    report.check(
        "quantization dist(d*dphi, 2piZ) <= 1e-8",
        quant_failures == 0 && max_defect <= 1e-8,
        format!("max {max_defect:e}, {quant_failures} failures"),
    );
    report.check("classes match composition", class_failures == 0, format!("{class_failures} mismatches"));
    let body = report.lines.join("\n") + "\n";
    write_file(&mut report, out, "audit_quantization.txt", &body)?;
    Ok(report)
}

/// Maximally entangled states through random SU(d) x SU(d) paths; the
/// dynamical phase must vanish. Product states on the same paths serve as
/// the negative control.
pub fn run_dyn_vanishing(
    dims: &[usize],
    trials: usize,
    seed: u64,
    samples: usize,
    out: &Path,
) -> Result<RunReport, ScenarioError> {
    let mut report = RunReport::default();
    let mut worst_integrand = 0.0f64;
    let mut worst_dyn = 0.0f64;
    let mut weakest_control = f64::INFINITY;
    for &d in dims {
        let product = make_state(d, &StateKind::Product)?;
        for trial in 0..trials {
            let mut rng = trial_rng(seed, stream(d, trial));
            let state = random_max_entangled(&mut rng, d);
            let path = random_geodesic_path(&mut rng, d, 4, 2.5, 1.0, samples)?;
            let (values, left) = dyn_integrand_series(&state, &path)?;
            let integrand = values.iter().chain(left.values()).fold(0.0f64, |m, v| m.max(v.abs()));
            let phases = dynamical_phases(&state, &path)?;
            let dyn_max = phases.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let control = dynamical_phases(&product, &path)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            report.lines.push(format!(
                "d={d} trial={trial} max_integrand={} max_phi_dyn={} control_max_phi_dyn={}",
                fmt_sig(integrand),
                fmt_sig(dyn_max),
                fmt_sig(control)
            ));
            worst_integrand = worst_integrand.max(integrand);
            worst_dyn = worst_dyn.max(dyn_max);
            weakest_control = weakest_control.min(control);
        }
        let id = UnitaryPath::identity(d, 1.0, samples)?;
        let still = dynamical_phases(&product, &id)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        report.check(format!("d={d} constant path"), still == 0.0, format!("max |phi_dyn| {still:e}"));
    }
    report.lines.push(format!(
        "summary max_integrand={} max_phi_dyn={} min_control={}",
        fmt_sig(worst_integrand),
        fmt_sig(worst_dyn),
        fmt_sig(weakest_control)
    ));
    report.check("integrand vanishes (<= 1e-12)", worst_integrand <= 1e-12, format!("{worst_integrand:e}"));
    report.check("dynamical phase vanishes (<= 1e-9)", worst_dyn <= 1e-9, format!("{worst_dyn:e}"));
    report.check("product-state control is nonzero (> 1e-3)", weakest_control > 1e-3, format!("{weakest_control:e}"));
    let body = report.lines.join("\n") + "\n";
    write_file(&mut report, out, "dyn_vanishing.txt", &body)?;
    Ok(report)
}

/// One state through one path: trace CSV, final state, cycle report.
pub fn run_evolve(s: &Scenario) -> Result<RunReport, ScenarioError> {
    let mut report = RunReport::default();
    let d = s.dims[0];
    let c = s.concurrences[0];
    let state = make_state(d, &StateKind::ConcurrenceTarget(c))?;
    let chi = Linear::new(s.chi_start, s.chi_end, 1.0);
    let path = match s.path {
        PathKind::Vn => vn_path(d, chi, 1.0, s.samples)?,
        PathKind::Euler => qubit_euler_path(Linear::constant(s.theta), Linear::constant(s.phi), chi, 1.0, s.samples)?,
        PathKind::Piecewise => qutrit_piecewise_path(s.zeta, chi, 1.0, s.samples)?,
        PathKind::Random => random_geodesic_path(&mut trial_rng(s.seed, 0), d, 4, 2.0, 1.0, s.samples)?,
    }
    .repeat(s.cycles.max(1))?;
    for w in path.warnings() {
        report.lines.push(format!("warning: {w:?}"));
    }
    let trace = phase_trace(&state, &path)?;
    write_file(&mut report, &s.out, "evolve.csv", &trace.to_csv())?;
    let end = evolve(&state, &path, path.len() - 1)?;
    write_file(&mut report, &s.out, "evolve_state.txt", &end.to_text())?;
    let (_, jumps) = unwrap_phase_trace(&trace)?;
    let last = trace.last().expect("non-empty");
    report.lines.push(format!(
        "d={d} c={} path={} cycles={} phi_tot={} phi_dyn={} phi_g={} phi_g_unwrapped={} jumps={}",
        fmt_sig(c),
        s.path,
        s.cycles,
        fmt_sig(last.phi_tot),
        fmt_sig(last.phi_dyn),
        fmt_sig(last.phi_g),
        fmt_sig(last.phi_g_unwrapped),
        jumps.len()
    ));
    report.lines.push(check_cyclic(&state, &end, CYCLIC_TOL)?.to_string());
    let drift = trace.samples.iter().map(|x| (x.concurrence - concurrence(&state)).abs()).fold(0.0, f64::max);
    report.check("concurrence conserved", drift <= 1e-10, format!("max drift {drift:e}"));
    let norm = (end.alpha().frobenius_norm() - 1.0).abs();
    report.check("norm conserved", norm <= 1e-10, format!("{norm:e}"));
    Ok(report)
}
