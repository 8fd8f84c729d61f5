//! Pass/fail checkers for copying gates and the controlled-NOT truth table.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{format_real, BasisState, Operator};
use crate::synthesis::subspace_indices;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Outcome of one check. `passed` holds exactly when every residual is within
/// `tolerance`; phases are reported for inspection only.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    pub tolerance: f64,
    pub residuals: Vec<(String, f64)>,
    pub phases: Vec<(String, Complex64)>,
    pub diagnostic: Option<String>,
}

impl VerificationReport {
    fn new(check: &str, tolerance: f64) -> Self {
        VerificationReport {
            check: check.to_string(),
            passed: true,
            tolerance,
            residuals: Vec::new(),
            phases: Vec::new(),
            diagnostic: None,
        }
    }

    fn residual(&mut self, label: impl Into<String>, value: f64) {
        // NaN never passes
        if value.is_nan() || value > self.tolerance {
            self.passed = false;
        }
        self.residuals.push((label.into(), value));
    }

    fn phase(&mut self, label: impl Into<String>, value: Complex64) {
        self.phases.push((label.into(), value));
    }

    pub fn residual_value(&self, label: &str) -> Option<f64> {
        self.residuals.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn phase_value(&self, label: &str) -> Option<Complex64> {
        self.phases.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    /// `{"check", "passed", "tolerance", "residuals", "phases"}` plus `"diagnostic"` when set.
    pub fn to_json(&self) -> Result<String> {
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut out = format!(
            "{{\"check\":{},\"passed\":{},\"tolerance\":{},\"residuals\":{{",
            quote(&self.check),
            self.passed,
            format_real(self.tolerance)?
        );
        for (k, (label, v)) in self.residuals.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}:{}", quote(label), format_real(*v)?));
        }
        out.push_str("},\"phases\":{");
        for (k, (label, v)) in self.phases.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{}:[{},{}]",
                quote(label),
                format_real(v.re)?,
                format_real(v.im)?
            ));
        }
        out.push('}');
        if let Some(d) = &self.diagnostic {
            out.push_str(&format!(",\"diagnostic\":{}", quote(d)));
        }
        out.push('}');
        Ok(out)
    }
}

fn transition(from: &BasisState, to: &BasisState) -> String {
    format!("{from}->{to}")
}

/// Checks `|10..0> -> |11..1>` and `|00..0> -> |00..0>` up to phase, and that every
/// basis state outside `{|11..1>, |10..0>, |00..0>}` is fixed up to phase.
///
/// With `strict_phases` the recorded copy phases and the fixed diagonal must also equal 1.
pub fn verify_copying(u: &Operator, n: usize, tol: f64, strict_phases: bool) -> Result<VerificationReport> {
    let qubits = n + 1;
    if n < 1 || u.dim() != 1 << qubits {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: 1usize.checked_shl(qubits as u32).unwrap_or(0),
        });
    }
    let residual = u.unitarity_residual();
    if residual > tol {
        return Err(Error::NotUnitary { residual, limit: tol });
    }

    let [up, ctrl, down] = subspace_indices(n);
    let (s_up, s_ctrl, s_down) = (
        BasisState::all_up(qubits),
        BasisState::control_up(qubits),
        BasisState::all_down(qubits),
    );
    let copy_up = u.get(up, ctrl);
    let reverse = u.get(ctrl, up);
    let copy_down = u.get(down, down);

    let mut report = VerificationReport::new("copy", tol);
    report.residual(
        format!("copy {}", transition(&s_ctrl, &s_up)),
        (1.0 - copy_up.norm()).abs(),
    );
    report.residual(
        format!("copy {}", transition(&s_down, &s_down)),
        (1.0 - copy_down.norm()).abs(),
    );
    let others = (0..u.dim()).filter(|&b| b != up && b != ctrl && b != down);
    let worst_other = others
        .clone()
        .map(|b| (1.0 - u.get(b, b).norm()).abs())
        .fold(0.0, f64::max);
    report.residual("other basis states fixed", worst_other);

    report.phase(transition(&s_ctrl, &s_up), copy_up);
    report.phase(transition(&s_up, &s_ctrl), reverse);
    report.phase(transition(&s_down, &s_down), copy_down);

    if strict_phases {
        report.residual(format!("phase {}", transition(&s_ctrl, &s_up)), (copy_up - 1.0).norm());
        report.residual(format!("phase {}", transition(&s_up, &s_ctrl)), (reverse - 1.0).norm());
        report.residual(
            format!("phase {}", transition(&s_down, &s_down)),
            (copy_down - 1.0).norm(),
        );
        let worst = others.map(|b| (u.get(b, b) - 1.0).norm()).fold(0.0, f64::max);
        report.residual("phase other basis states", worst);
    }
    Ok(report)
}

/// Checks the classical controlled-NOT table `|11>->|10>`, `|10>->|11>`, `|01>->|01>`,
/// `|00>->|00>` on modulus, plus leakage into entries that must vanish. Strict mode
/// additionally requires each of the four amplitudes to be 1.
pub fn verify_cnot_truth_table(u: &Operator, tol: f64, strict_phases: bool) -> Result<VerificationReport> {
    if u.dim() != 4 {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: 4,
        });
    }
    let table = [("11", "10"), ("10", "11"), ("01", "01"), ("00", "00")];
    let mut report = VerificationReport::new("cnot", tol);
    let mut allowed = [[false; 4]; 4];
    let mut amplitudes = Vec::with_capacity(4);
    for (from, to) in table {
        let (f, t) = (from.parse::<BasisState>()?.index(), to.parse::<BasisState>()?.index());
        allowed[t][f] = true;
        let amp = u.get(t, f);
        report.residual(format!("{from}->{to}"), (1.0 - amp.norm()).abs());
        amplitudes.push((format!("{from}->{to}"), amp));
    }
    let leakage = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .filter(|&(r, c)| !allowed[r][c])
        .map(|(r, c)| u.get(r, c).norm())
        .fold(0.0, f64::max);
    report.residual("leakage", leakage);
    if strict_phases {
        for (label, amp) in &amplitudes {
            report.residual(format!("phase {label}"), (amp - 1.0).norm());
        }
    }
    for (label, amp) in amplitudes {
        report.phase(label, amp);
    }
    Ok(report)
}

/// Minimizes `||a - phi b||_F` over unit-modulus `phi`; the optimum is
/// `phi = tr(b^dagger a) / |tr(b^dagger a)|` with squared residual
/// `||a||^2 + ||b||^2 - 2 |tr(b^dagger a)|`.
pub fn equal_up_to_global_phase(a: &Operator, b: &Operator, tol: f64) -> Result<VerificationReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let overlap: Complex64 = a.entries().iter().zip(b.entries()).map(|(x, y)| y.conj() * x).sum();
    let mut report = VerificationReport::new("phase-equal", tol);
    let magnitude = overlap.norm();
    let phi = if magnitude > 0.0 {
        overlap / magnitude
    } else {
        report.diagnostic = Some("tr(b^dagger a) = 0: operators are not related by a global phase".into());
        Complex64::new(1.0, 0.0)
    };
    let distance = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - phi * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    report.residual("distance", distance);
    report.phase("global phase", phi);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{target_copy_unitary, GateSpec};

    #[test]
    fn identity_fails_copying() {
        let report = verify_copying(&Operator::identity(4), 1, 1e-10, false).unwrap();
        assert!(!report.passed);
        assert_eq!(report.residual_value("copy 10->11"), Some(1.0));
        assert_eq!(report.residual_value("copy 00->00"), Some(0.0));
    }

    #[test]
    fn target_passes_with_its_phases() {
        let spec = GateSpec::new(2, 1.0).unwrap().with_phases(0.3, 0.5, 0.2);
        let report = verify_copying(&target_copy_unitary(&spec), 2, 1e-12, false).unwrap();
        assert!(report.passed, "{report:?}");
        let close = |label: &str, angle: f64| {
            (report.phase_value(label).unwrap() - Complex64::from_polar(1.0, angle)).norm() < 1e-15
        };
        assert!(close("100->111", 0.5));
        assert!(close("111->100", 0.3));
        assert!(close("000->000", 0.2));
    }

    #[test]
    fn copying_rejects_bad_shapes() {
        assert!(matches!(
            verify_copying(&Operator::identity(4), 2, 1e-10, false),
            Err(Error::DimMismatch { .. })
        ));
        let mut skew = Operator::identity(4);
        skew.set(0, 0, Complex64::new(2.0, 0.0));
        assert!(matches!(
            verify_copying(&skew, 1, 1e-10, false),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn identity_fails_truth_table() {
        let report = verify_cnot_truth_table(&Operator::identity(4), 1e-10, false).unwrap();
        assert!(!report.passed);
        assert_eq!(report.residual_value("11->10"), Some(1.0));
        assert_eq!(report.residual_value("10->11"), Some(1.0));
        assert_eq!(report.residual_value("01->01"), Some(0.0));
        assert!(verify_cnot_truth_table(&Operator::identity(2), 1e-10, false).is_err());
    }

    #[test]
    fn global_phase_recovery() {
        let u = target_copy_unitary(&GateSpec::new(1, 1.0).unwrap().with_phases(0.1, 0.9, -0.4));
        let report = equal_up_to_global_phase(&u, &u, 1e-12).unwrap();
        assert!(report.passed);
        assert!((report.phase_value("global phase").unwrap() - 1.0).norm() < 1e-15);

        let rotated = u.scale(Complex64::from_polar(1.0, 0.4));
        let report = equal_up_to_global_phase(&u, &rotated, 1e-12).unwrap();
        assert!(report.passed);
        let phi = report.phase_value("global phase").unwrap();
        assert!((phi * Complex64::from_polar(1.0, 0.4) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn zero_overlap_is_a_failed_report() {
        let mut swap = Operator::zeros(2);
        swap.set(0, 1, Complex64::new(1.0, 0.0));
        swap.set(1, 0, Complex64::new(1.0, 0.0));
        let report = equal_up_to_global_phase(&Operator::identity(2), &swap, 1e-10).unwrap();
        assert!(!report.passed);
        assert!(report.diagnostic.is_some());
        assert!((report.residual_value("distance").unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn report_json_shape() {
        let report = verify_cnot_truth_table(&Operator::identity(4), 1e-10, false).unwrap();
        let text = report.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["check"], "cnot");
        assert_eq!(value["passed"], false);
        assert_eq!(value["residuals"]["11->10"], 1.0);
        assert_eq!(value["phases"]["00->00"][0], 1.0);
        assert_eq!(text, report.to_json().unwrap());
    }
}
