use std::fmt::Write as _;

use super::EvolutionError;
use crate::matcore::C64;

/// Samples with `|overlap|` below this are treated as orthogonal to the
/// initial state; their phase is undefined.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

pub const CSV_HEADER: &str =
    "t,chi,re_overlap,im_overlap,abs_overlap,phi_tot,phi_dyn,phi_g,phi_g_unwrapped,concurrence";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub chi: f64,
    /// SU(d)-sector overlap `Tr[α†(0) Ū_A α(0) Ū_Bᵀ]`; the full overlap
    /// carries the extra factor `e^{i(φ_A+φ_B)}`.
    pub overlap: C64,
    pub phi_tot: f64,
    pub phi_dyn: f64,
    /// Principal value in (−π, π].
    pub phi_g: f64,
    pub phi_g_unwrapped: f64,
    pub concurrence: f64,
}

impl TraceSample {
    pub fn is_orthogonal(&self) -> bool {
        self.overlap.norm() < ORTHOGONALITY_TOL
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseTrace {
    pub samples: Vec<TraceSample>,
}

impl PhaseTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&TraceSample> {
        self.samples.last()
    }

    pub fn min_abs_overlap(&self) -> f64 {
        self.samples.iter().map(|s| s.overlap.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(160 * (self.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let fields = [
                s.t,
                s.chi,
                s.overlap.re,
                s.overlap.im,
                s.overlap.norm(),
                s.phi_tot,
                s.phi_dyn,
                s.phi_g,
                s.phi_g_unwrapped,
                s.concurrence,
            ];
            for (i, x) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_sig(*x));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, EvolutionError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == CSV_HEADER => {}
            _ => return Err(EvolutionError::Parse { line: 1, message: "missing or wrong header".into() }),
        }
        let mut samples = Vec::new();
        for (i, line) in lines {
            let parse_err = |message: String| EvolutionError::Parse { line: i + 1, message };
            let vals = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if vals.len() != 10 {
                return Err(parse_err(format!("expected 10 fields, found {}", vals.len())));
            }
            samples.push(TraceSample {
                t: vals[0],
                chi: vals[1],
                overlap: C64::new(vals[2], vals[3]),
                phi_tot: vals[5],
                phi_dyn: vals[6],
                phi_g: vals[7],
                phi_g_unwrapped: vals[8],
                concurrence: vals[9],
            });
        }
        Ok(Self { samples })
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros
/// dropped, exponent form outside `[1e-4, 1e12)`, negative zero as `0`.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mut out = String::new();
    if !(-4..DIGITS).contains(&exp) {
        out.push_str(trim_zeros(mantissa));
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        out.push_str(trim_zeros(&format!("{x:.decimals$}")));
    }
    if out == "-0" {
        out = "0".into();
    }
    out
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_format() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_sig(2.0 * std::f64::consts::PI / 3.0), "2.09439510239");
        assert_eq!(fmt_sig(1e-7), "1e-07");
        assert_eq!(fmt_sig(-1.234e-10), "-1.234e-10");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(123456789012.0), "123456789012");
        assert_eq!(fmt_sig(1.5e13), "1.5e+13");
        assert_eq!(fmt_sig(9.9999999999999e-6), "1e-05");
        assert_eq!(fmt_sig(-1e-300), "-1e-300");
    }

    #[test]
    fn csv_round_trip() {
        let s = TraceSample {
            t: 0.25,
            chi: 1.0 / 3.0,
            overlap: C64::new(0.5, -1e-17),
            phi_tot: 0.1,
            phi_dyn: -0.2,
            phi_g: 0.3,
            phi_g_unwrapped: 6.5,
            concurrence: 0.6,
        };
        let trace = PhaseTrace { samples: vec![s; 3] };
        let text = trace.to_csv();
        assert!(text.starts_with(CSV_HEADER));
        let back = PhaseTrace::from_csv(&text).unwrap();
        assert_eq!(back.len(), 3);
        assert!((back.samples[0].chi - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(back.to_csv(), text);
        assert!(PhaseTrace::from_csv("t,chi\n1,2\n").is_err());
        assert!(PhaseTrace::from_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
    }
}
