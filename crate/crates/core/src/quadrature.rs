//! Composite Simpson quadrature on uniform grids and fourth-order finite
//! differences.

use crate::matcore::ComplexMatrix;

/// Composite Simpson rule over an odd number of uniformly spaced samples.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd sample count >= 3");
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Running integral `I_k = ∫_{t_0}^{t_k} f`. Even nodes use composite
/// Simpson; odd nodes add a three-point half-panel that is exact for
/// quadratics, so every node is fourth-order accurate.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    for j in 1..n {
        out[j] = if j % 2 == 0 {
            out[j - 2] + h / 3.0 * (values[j - 2] + 4.0 * values[j - 1] + values[j])
        } else if j + 1 < n {
            out[j - 1] + h / 12.0 * (5.0 * values[j - 1] + 8.0 * values[j] - values[j + 1])
        } else {
            out[j - 1] + h / 12.0 * (-values[j - 2] + 8.0 * values[j - 1] + 5.0 * values[j])
        };
    }
    out
}

/// Running integral over a grid split at `breaks` (sorted interior node
/// indices). Each segment is integrated independently. `left_value(b)`
/// supplies the integrand's left limit at a breakpoint when it differs
/// from the tabulated (right) value.
pub fn cumulative_simpson_segmented(
    values: &[f64],
    h: f64,
    breaks: &[usize],
    left_value: impl Fn(usize) -> Option<f64>,
) -> Vec<f64> {
    let n = values.len();
    let mut bounds = vec![0];
    bounds.extend(breaks.iter().copied().filter(|&b| b > 0 && b + 1 < n));
    bounds.push(n - 1);
    bounds.dedup();

    let mut out = vec![0.0; n];
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut seg: Vec<f64> = values[lo..=hi].to_vec();
        if hi + 1 < n {
            if let Some(v) = left_value(hi) {
                *seg.last_mut().expect("segment has two nodes") = v;
            }
        }
        let base = out[lo];
        for (i, v) in cumulative_simpson(&seg, h).into_iter().enumerate() {
            out[lo + i] = base + v;
        }
    }
    out
}

/// Finite-difference step used for analytic closures over `[0, tau]`.
pub fn fd_step(tau: f64) -> f64 {
    tau / 4096.0
}

/// Fourth-order central difference of a scalar function.
pub fn derivative(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central difference of a matrix-valued function.
pub fn matrix_derivative(f: impl Fn(f64) -> ComplexMatrix, t: f64, h: f64) -> ComplexMatrix {
    let m2 = f(t - 2.0 * h);
    let m1 = f(t - h);
    let p1 = f(t + h);
    let p2 = f(t + 2.0 * h);
    let num = &(&(&m2 - &p2) + &p1.scale_real(8.0)) - &m1.scale_real(8.0);
    num.scale_real(1.0 / (12.0 * h))
}

/// Fourth-order derivative of tabulated matrices at node `k`, one-sided
/// near the ends of `samples`. Needs at least five samples.
pub fn tabulated_matrix_derivative(samples: &[ComplexMatrix], k: usize, h: f64) -> ComplexMatrix {
    let n = samples.len();
    assert!(n >= 5, "need five samples for a fourth-order stencil");
    let (base, weights): (usize, [f64; 5]) = if k >= 2 && k + 2 < n {
        (k - 2, [1.0, -8.0, 0.0, 8.0, -1.0])
    } else if k == 0 {
        (0, [-25.0, 48.0, -36.0, 16.0, -3.0])
    } else if k == 1 {
        (0, [-3.0, -10.0, 18.0, -6.0, 1.0])
    } else if k == n - 1 {
        (n - 5, [3.0, -16.0, 36.0, -48.0, 25.0])
    } else {
        (n - 5, [-1.0, 6.0, -18.0, 10.0, 3.0])
    };
    let mut acc = ComplexMatrix::zeros(samples[0].dim());
    for (i, w) in weights.iter().enumerate() {
        if *w != 0.0 {
            acc = &acc + &samples[base + i].scale_real(*w);
        }
    }
    acc.scale_real(1.0 / (12.0 * h))
}
