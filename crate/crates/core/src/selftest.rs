//! Built-in acceptance checks behind `qcopy selftest`.
//!
//! Each criterion reports one line with its worst residual and tolerance. Random
//! samples come from a fixed seed, so output is reproducible.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evolution::{pulse_evolve, staged_copy, PulseProfile, StagePlan};
use crate::operator::{frobenius_distance, normal_eigenvalues, propagator, BasisState, Ket, Operator};
use crate::pauli::{decompose, materialize, recompose, PauliLetter, PauliTerm};
use crate::synthesis::{
    cnot_hamiltonian, copy_hamiltonian_pauli, copy_hamiltonian_projector, exact_synthesis, subspace_block,
    subspace_eigenphases, subspace_indices, target_copy_unitary, GateSpec, Sign,
};
use crate::verify::{verify_cnot_truth_table, verify_copying};

const SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{:>2}] {:<28} {}", self.id, self.name, self.detail)
    }
}

/// Accumulates the worst value of a residual against its bound.
struct Gauge {
    label: &'static str,
    worst: f64,
    bound: f64,
}

impl Gauge {
    fn new(label: &'static str, bound: f64) -> Self {
        Gauge {
            label,
            worst: 0.0,
            bound,
        }
    }

    fn record(&mut self, value: f64) {
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
    }

    fn ok(&self) -> bool {
        self.worst <= self.bound
    }

    fn describe(&self) -> String {
        format!("{} {:.2e} <= {:.0e}", self.label, self.worst, self.bound)
    }
}

fn outcome(id: u8, name: &'static str, gauges: &[Gauge], flags: &[(&str, bool)]) -> CriterionOutcome {
    let mut parts: Vec<String> = gauges.iter().map(Gauge::describe).collect();
    parts.extend(
        flags
            .iter()
            .map(|(l, ok)| format!("{l}: {}", if *ok { "ok" } else { "FAILED" })),
    );
    CriterionOutcome {
        id,
        name,
        passed: gauges.iter().all(Gauge::ok) && flags.iter().all(|(_, ok)| *ok),
        detail: parts.join("; "),
    }
}

fn failed(id: u8, name: &'static str, error: impl fmt::Display) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed: false,
        detail: format!("error: {error}"),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two-qubit unitary realized by the single-copy Hamiltonian, written out by hand.
pub fn single_copy_golden(gamma: f64) -> Operator {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let minus_i = c(0.0, -1.0);
    Operator::from_rows([
        [z, minus_i * Complex64::from_polar(1.0, -gamma), z, z],
        [minus_i * Complex64::from_polar(1.0, gamma), z, z, z],
        [z, z, one, z],
        [z, z, z, one],
    ])
}

/// Smallest worst-case deviation over the pairings of two 3-element multisets.
fn multiset_distance(a: &[Complex64], b: &[Complex64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| (0..3).map(|k| (a[k] - b[p[k]]).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

pub fn run_all(tol: f64) -> Vec<CriterionOutcome> {
    vec![
        eigenphases(),
        form_equivalence(),
        golden_propagator(),
        copying_conditions(tol),
        cnot_family(),
        exact_synthesis_fidelity(),
        pauli_decomposition(),
        pulse_independence(),
        staged_copying(tol),
        cli_round_trip(),
    ]
}

fn eigenphases() -> CriterionOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut g = Gauge::new("max multiset deviation", 1e-12);
    for _ in 0..50 {
        let (a, b, r) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let spec = GateSpec::new(1, 1.0).unwrap().with_phases(a, b, r);
        match normal_eigenvalues(&subspace_block(&spec)) {
            Ok(vals) => g.record(multiset_distance(&vals, &subspace_eigenphases(&spec))),
            Err(e) => return failed(1, "eigenphases of 3x3 block", e),
        }
    }
    outcome(1, "eigenphases of 3x3 block", &[g], &[])
}

fn form_equivalence() -> CriterionOutcome {
    let mut forms = Gauge::new("projector vs pauli", 1e-12);
    let mut spin = Gauge::new("pauli vs spin components (n=1)", 1e-13);
    for n in 1..=8 {
        for gamma in [0.0, 0.7, FRAC_PI_2, 2.3] {
            for dt in [0.5, 1.0, 2.0] {
                let (p, q) = match (
                    copy_hamiltonian_projector(n, gamma, 1, dt),
                    copy_hamiltonian_pauli(n, gamma, dt),
                ) {
                    (Ok(p), Ok(q)) => (p, q),
                    (Err(e), _) | (_, Err(e)) => return failed(2, "projector/pauli forms", e),
                };
                forms.record(frobenius_distance(&p, &q).unwrap());
                if n == 1 {
                    let field = &materialize(&PauliTerm::real(gamma.cos(), "IX"))
                        + &materialize(&PauliTerm::real(gamma.sin(), "IY"));
                    let ctrl = &Operator::identity(4) + &materialize(&PauliTerm::real(1.0, "ZI"));
                    let h14 = (&ctrl * &field).scale(c(PI / (4.0 * dt), 0.0));
                    spin.record(frobenius_distance(&q, &h14).unwrap());
                }
            }
        }
    }
    outcome(2, "projector/pauli forms", &[forms, spin], &[])
}

fn golden_propagator() -> CriterionOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut g = Gauge::new("max entry deviation", 1e-11);
    for k in 0..20 {
        let gamma = rng.gen_range(-PI..PI);
        let dt = [0.5, 1.0, 2.0][k % 3];
        let u = copy_hamiltonian_projector(1, gamma, 1, dt).and_then(|h| propagator(&h, dt));
        match u {
            Ok(u) => g.record(u.max_abs_diff(&single_copy_golden(gamma)).unwrap()),
            Err(e) => return failed(3, "single-copy golden propagator", e),
        }
    }
    outcome(3, "single-copy golden propagator", &[g], &[])
}

fn copying_conditions(tol: f64) -> CriterionOutcome {
    let mut res = Gauge::new("copy residual", tol);
    let mut phase = Gauge::new("phase deviation", 1e-10);
    let mut all_passed = true;
    for n in 1..=8 {
        let gamma = 0.37 * n as f64;
        let u = copy_hamiltonian_projector(n, gamma, 1, 1.0).and_then(|h| propagator(&h, 1.0));
        let report = match u.and_then(|u| verify_copying(&u, n, tol, false)) {
            Ok(r) => r,
            Err(e) => return failed(4, "copying conditions n=1..8", e),
        };
        all_passed &= report.passed;
        res.record(report.max_residual());
        let q = n + 1;
        let label = |from: BasisState, to: BasisState| format!("{from}->{to}");
        let expected = [
            (
                label(BasisState::control_up(q), BasisState::all_up(q)),
                Complex64::from_polar(1.0, -gamma) * c(0.0, -1.0),
            ),
            (
                label(BasisState::all_up(q), BasisState::control_up(q)),
                Complex64::from_polar(1.0, gamma) * c(0.0, -1.0),
            ),
            (label(BasisState::all_down(q), BasisState::all_down(q)), c(1.0, 0.0)),
        ];
        for (l, want) in expected {
            phase.record(report.phase_value(&l).map_or(f64::INFINITY, |p| (p - want).norm()));
        }
    }
    outcome(
        4,
        "copying conditions n=1..8",
        &[res, phase],
        &[("reports passed", all_passed)],
    )
}

fn cnot_family() -> CriterionOutcome {
    let mut entries = Gauge::new("nonzero entry vs 1", 1e-11);
    let mut signs = Gauge::new("sign difference", 1e-11);
    let mut strict = true;
    for dt in [0.5, 1.0, 2.0] {
        let mut us = Vec::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let u = match cnot_hamiltonian(sign, dt).and_then(|h| propagator(&h, dt)) {
                Ok(u) => u,
                Err(e) => return failed(5, "controlled-NOT family", e),
            };
            for (r, col) in [(1, 0), (0, 1), (2, 2), (3, 3)] {
                entries.record((u.get(r, col) - 1.0).norm());
            }
            strict &= verify_cnot_truth_table(&u, 1e-11, true).is_ok_and(|r| r.passed);
            us.push(u);
        }
        signs.record(frobenius_distance(&us[0], &us[1]).unwrap());
    }
    outcome(
        5,
        "controlled-NOT family",
        &[entries, signs],
        &[("strict truth table", strict)],
    )
}

fn random_spec(rng: &mut ChaCha8Rng) -> GateSpec {
    let n = rng.gen_range(1..=4);
    let dt = rng.gen_range(0.25..3.0);
    GateSpec::new(n, dt)
        .unwrap()
        .with_phases(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI))
        .with_branches(rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3))
}

fn exact_synthesis_fidelity() -> CriterionOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut fidelity = Gauge::new("||U - target||_F", 1e-10);
    let mut shift = Gauge::new("branch shift change", 1e-10);
    for _ in 0..20 {
        let spec = random_spec(&mut rng);
        let realize = |s: &GateSpec| exact_synthesis(s).and_then(|h| propagator(&h, s.dt));
        let u = match realize(&spec) {
            Ok(u) => u,
            Err(e) => return failed(6, "exact synthesis fidelity", e),
        };
        fidelity.record(frobenius_distance(&u, &target_copy_unitary(&spec)).unwrap());
        for shifted in [
            spec.with_branches(spec.n1 + 1, spec.n2, spec.n3),
            spec.with_branches(spec.n1, spec.n2 + 1, spec.n3),
            spec.with_branches(spec.n1, spec.n2, spec.n3 + 1),
        ] {
            match realize(&shifted) {
                Ok(v) => shift.record(frobenius_distance(&u, &v).unwrap()),
                Err(e) => return failed(6, "exact synthesis fidelity", e),
            }
        }
    }
    outcome(6, "exact synthesis fidelity", &[fidelity, shift], &[])
}

fn pauli_decomposition() -> CriterionOutcome {
    let mut recompose_gauge = Gauge::new("recomposition", 1e-11);
    let mut imag = Gauge::new("imaginary parts", 1e-13);
    let mut counts = true;
    for n in 1..=6 {
        let h = copy_hamiltonian_pauli(n, 0.7, 1.0).unwrap();
        let terms = decompose(&h).unwrap();
        counts &= terms.len() == 1 << (n + 1);
        recompose_gauge.record(frobenius_distance(&recompose(&terms, n + 1), &h).unwrap());
        for t in &terms {
            imag.record(t.coefficient.im.abs());
        }
    }
    let h = copy_hamiltonian_pauli(1, 0.0, 1.0).unwrap();
    let terms = decompose(&h).unwrap();
    let q = std::f64::consts::FRAC_PI_4;
    let single = terms.len() == 2
        && terms[0].letters == [PauliLetter::I, PauliLetter::X]
        && terms[1].letters == [PauliLetter::Z, PauliLetter::X]
        && terms.iter().all(|t| (t.coefficient - c(q, 0.0)).norm() <= 1e-13);
    outcome(
        7,
        "Pauli decomposition",
        &[recompose_gauge, imag],
        &[("2^(n+1) terms", counts), ("n=1 gamma=0 is pi/4 (IX + ZX)", single)],
    )
}

fn pulse_independence() -> CriterionOutcome {
    let mut endpoint = Gauge::new("endpoint vs exact", 1e-7);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let states = |q: &str| Ket::basis(&q.parse::<BasisState>().unwrap());
    let superposed = Ket::new(vec![c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
    let inputs = [states("10"), states("11"), superposed];
    for gamma in [0.0, 0.9] {
        let h = copy_hamiltonian_pauli(1, gamma, 1.0).unwrap();
        let u = propagator(&h, 1.0).unwrap();
        for psi in &inputs {
            let exact = u.apply(psi).unwrap();
            for profile in PulseProfile::ALL {
                match pulse_evolve(&h, profile, 1.0, psi, 4000) {
                    Ok(k) => endpoint.record(k.distance(&exact).unwrap()),
                    Err(e) => return failed(8, "pulse profiles and RK4 order", e),
                }
            }
        }
    }
    let h = copy_hamiltonian_pauli(1, 0.0, 1.0).unwrap();
    let psi = states("10");
    let exact = propagator(&h, 1.0).unwrap().apply(&psi).unwrap();
    let errors: Vec<f64> = [250, 500, 1000]
        .iter()
        .map(|&steps| {
            pulse_evolve(&h, PulseProfile::Constant, 1.0, &psi, steps)
                .and_then(|k| k.distance(&exact))
                .unwrap_or(f64::NAN)
        })
        .collect();
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    let order_ok = ratios.iter().all(|r| (12.0..=20.0).contains(r));
    let mut out = outcome(
        8,
        "pulse profiles and RK4 order",
        &[endpoint],
        &[("error ratios in [12, 20]", order_ok)],
    );
    out.detail
        .push_str(&format!(" (ratios {:.2}, {:.2})", ratios[0], ratios[1]));
    out
}

fn staged_copying(tol: f64) -> CriterionOutcome {
    let mut res = Gauge::new("copy residual", tol);
    let mut phase = Gauge::new("up-copy phase deviation", 1e-10);
    let mut all_passed = true;
    for n in 2..=6 {
        let gamma = 0.45 * n as f64 - 0.3;
        let staged = match StagePlan::new(n, gamma, 1.0).and_then(|p| staged_copy(&p)) {
            Ok(s) => s,
            Err(e) => return failed(9, "staged copying", e),
        };
        let u = &staged.composed;
        let [up, ctrl, down] = subspace_indices(n);
        res.record((1.0 - u.get(up, ctrl).norm()).abs());
        res.record((1.0 - u.get(down, down).norm()).abs());
        let want = (Complex64::from_polar(1.0, -gamma) * c(0.0, -1.0)).powu(n as u32);
        phase.record((u.get(up, ctrl) - want).norm());
        all_passed &= u.unitarity_residual() <= 1e-11;
    }
    let staged = staged_copy(&StagePlan::new(2, 0.6, 1.0).unwrap()).unwrap();
    let from = "110".parse::<BasisState>().unwrap().index();
    let to = "101".parse::<BasisState>().unwrap().index();
    let counter = (staged.composed.get(to, from).norm() - 1.0).abs() <= 1e-10;
    outcome(
        9,
        "staged copying n=2..6",
        &[res, phase],
        &[("unitary", all_passed), ("110 maps onto 101", counter)],
    )
}

struct Scratch(PathBuf);

impl Scratch {
    fn new() -> std::io::Result<Self> {
        let dir = std::env::temp_dir().join(format!("qcopy-selftest-{}", std::process::id()));
        std::fs::create_dir_all(&dir)?;
        Ok(Scratch(dir))
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn cli_round_trip() -> CriterionOutcome {
    let scratch = match Scratch::new() {
        Ok(s) => s,
        Err(e) => return failed(10, "CLI round trip", e),
    };
    let call = |args: &[String]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qcopy".to_string()).chain(args.iter().cloned());
        let code = crate::cli::run(argv, &mut out, &mut err);
        (code, out)
    };
    let h_path = scratch.0.join("h.json");
    let u_path = scratch.0.join("u.json");
    let (mut pipelines, mut exit_ok, mut identical) = (0, true, true);
    for n in 1..=6 {
        for gamma_pi in ["0", "0.7", "0.5"] {
            let gamma_flag = if gamma_pi == "0.7" { "--gamma" } else { "--gamma-pi" };
            for branch in [0, 1, 2] {
                let mut first = None;
                for _ in 0..2 {
                    let synth: Vec<String> = [
                        "synth",
                        "--n",
                        &n.to_string(),
                        gamma_flag,
                        gamma_pi,
                        "--branch",
                        &branch.to_string(),
                        "--dt",
                        "1",
                        "--form",
                        "projector",
                        "--out",
                        h_path.to_str().unwrap(),
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                    let prop: Vec<String> = [
                        "propagate",
                        "--h",
                        h_path.to_str().unwrap(),
                        "--dt",
                        "1",
                        "--out",
                        u_path.to_str().unwrap(),
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                    let verify: Vec<String> = [
                        "verify",
                        "copy",
                        "--u",
                        u_path.to_str().unwrap(),
                        "--n",
                        &n.to_string(),
                        "--tol",
                        "1e-10",
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                    let (c1, _) = call(&synth);
                    let h_text = std::fs::read(&h_path).unwrap_or_default();
                    let (c2, _) = call(&prop);
                    let u_text = std::fs::read(&u_path).unwrap_or_default();
                    let (c3, report) = call(&verify);
                    exit_ok &= c1 == 0 && c2 == 0 && c3 == 0;
                    let bytes = (h_text, u_text, report);
                    match &first {
                        None => first = Some(bytes),
                        Some(prev) => identical &= *prev == bytes,
                    }
                }
                pipelines += 1;
            }
        }
    }
    let mut out = outcome(
        10,
        "CLI synth->propagate->verify",
        &[],
        &[("exit 0", exit_ok), ("byte-identical reruns", identical)],
    );
    out.detail.push_str(&format!(" ({pipelines} pipelines)"));
    out
}
