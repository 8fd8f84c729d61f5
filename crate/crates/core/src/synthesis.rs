//! Copying gates and the Hamiltonians that generate them.
//!
//! The copying unitary acts nontrivially only on three basis states:
//! `|11...1>` (index 0), `|10...0>` (index `2^n - 1`) and `|00...0>` (last index).
//! Every Hamiltonian here vanishes outside that subspace.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{tensor_all, BasisState, Operator, ONE, ZERO};
use crate::pauli::{sigma_minus, sigma_plus, PauliLetter, PauliTerm};

/// Target phases, branch integers, duration and copy count of a copying gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
    pub dt: f64,
}

impl GateSpec {
    /// Zero phases and branch integers.
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        let spec = GateSpec {
            n,
            alpha: 0.0,
            beta: 0.0,
            rho: 0.0,
            n1: 0,
            n2: 0,
            n3: 0,
            dt,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_phases(mut self, alpha: f64, beta: f64, rho: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self.rho = rho;
        self
    }

    pub fn with_branches(mut self, n1: i64, n2: i64, n3: i64) -> Self {
        self.n1 = n1;
        self.n2 = n2;
        self.n3 = n3;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidSpec(format!(
                "copy count must be at least 1, got {}",
                self.n
            )));
        }
        validate_dt(self.dt)?;
        if ![self.alpha, self.beta, self.rho].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidSpec("phases must be finite".into()));
        }
        Ok(())
    }

    /// `(alpha + beta) / 2`.
    pub fn gamma(&self) -> f64 {
        (self.alpha + self.beta) / 2.0
    }

    /// `N1 - N2`.
    pub fn branch(&self) -> i64 {
        self.n1 - self.n2
    }

    pub fn qubits(&self) -> usize {
        self.n + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }
}

fn validate_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("duration must be positive, got {dt}")))
    }
}

/// Indices of `|11...1>`, `|10...0>`, `|00...0>` for `n` copies.
pub fn subspace_indices(n: usize) -> [usize; 3] {
    let qubits = n + 1;
    [
        BasisState::all_up(qubits).index(),
        BasisState::control_up(qubits).index(),
        BasisState::all_down(qubits).index(),
    ]
}

/// Eigenenergies in the three-state subspace, units of `1 / dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTriple {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl EnergyTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }
}

/// The copying unitary: `|10...0> -> e^{i beta}|11...1>`, `|11...1> -> e^{i alpha}|10...0>`,
/// `|00...0> -> e^{i rho}|00...0>`, every other basis state fixed.
pub fn target_copy_unitary(spec: &GateSpec) -> Operator {
    let [up, ctrl, down] = subspace_indices(spec.n);
    let mut u = Operator::identity(spec.dim());
    u.set(up, up, ZERO);
    u.set(ctrl, ctrl, ZERO);
    u.set(up, ctrl, Complex64::from_polar(1.0, spec.beta));
    u.set(ctrl, up, Complex64::from_polar(1.0, spec.alpha));
    u.set(down, down, Complex64::from_polar(1.0, spec.rho));
    u
}

/// The target unitary restricted to `(|11...1>, |10...0>, |00...0>)`.
pub fn subspace_block(spec: &GateSpec) -> Operator {
    let mut block = Operator::zeros(3);
    block.set(0, 1, Complex64::from_polar(1.0, spec.beta));
    block.set(1, 0, Complex64::from_polar(1.0, spec.alpha));
    block.set(2, 2, Complex64::from_polar(1.0, spec.rho));
    block
}

/// `(e^{i gamma}, -e^{i gamma}, e^{i rho})`.
pub fn subspace_eigenphases(spec: &GateSpec) -> [Complex64; 3] {
    let g = Complex64::from_polar(1.0, spec.gamma());
    [g, -g, Complex64::from_polar(1.0, spec.rho)]
}

/// Real energies whose phases `e^{-i E dt}` match [`subspace_eigenphases`] on the
/// branches selected by `N1, N2, N3`.
pub fn branch_energies(spec: &GateSpec) -> EnergyTriple {
    let dt = spec.dt;
    let sum = spec.alpha + spec.beta;
    EnergyTriple {
        e1: -sum / (2.0 * dt) + 2.0 * PI * spec.n1 as f64 / dt,
        e2: -sum / (2.0 * dt) + 2.0 * PI * (spec.n2 as f64 + 0.5) / dt,
        e3: -spec.rho / dt + 2.0 * PI * spec.n3 as f64 / dt,
    }
}

fn coupling(n_branch: i64, dt: f64) -> f64 {
    PI / dt * (n_branch as f64 - 0.5)
}

/// Symmetric-spectrum Hamiltonian block on the three-state subspace:
/// `(pi/dt)(N - 1/2) [[0, e^{-i gamma}, 0], [e^{i gamma}, 0, 0], [0, 0, 0]]`.
pub fn subspace_hamiltonian_block(gamma: f64, n_branch: i64, dt: f64) -> Result<Operator> {
    validate_dt(dt)?;
    let g = coupling(n_branch, dt);
    let mut h = Operator::zeros(3);
    h.set(0, 1, Complex64::from_polar(g, -gamma));
    h.set(1, 0, Complex64::from_polar(g, gamma));
    Ok(h)
}

/// Full-space copying Hamiltonian in projector form:
/// `(pi/dt)(N - 1/2)(e^{-i gamma}|1..1><10..0| + e^{i gamma}|10..0><1..1|)`.
pub fn copy_hamiltonian_projector(n: usize, gamma: f64, n_branch: i64, dt: f64) -> Result<Operator> {
    GateSpec::new(n, dt)?;
    let [up, ctrl, _] = subspace_indices(n);
    let g = coupling(n_branch, dt);
    let mut h = Operator::zeros(1 << (n + 1));
    h.set(up, ctrl, Complex64::from_polar(g, -gamma));
    h.set(ctrl, up, Complex64::from_polar(g, gamma));
    Ok(h)
}

/// The same Hamiltonian (branch `N = 1`) assembled from spin operators:
/// `pi/(2^(n+2) dt) (1 + Z_1)(e^{-i gamma} sigma_+^{⊗n} + e^{i gamma} sigma_-^{⊗n})`.
pub fn copy_hamiltonian_pauli(n: usize, gamma: f64, dt: f64) -> Result<Operator> {
    GateSpec::new(n, dt)?;
    let control = &PauliLetter::I.matrix() + &PauliLetter::Z.matrix();
    let chain = |ladder: Operator| {
        let factors: Vec<Operator> = std::iter::once(control.clone())
            .chain(std::iter::repeat_n(ladder, n))
            .collect();
        tensor_all(&factors).expect("at least two factors")
    };
    let raising = chain(sigma_plus()).scale(Complex64::from_polar(1.0, -gamma));
    let lowering = chain(sigma_minus()).scale(Complex64::from_polar(1.0, gamma));
    let prefactor = PI / ((1u64 << (n + 2)) as f64 * dt);
    Ok((&raising + &lowering).scale(Complex64::new(prefactor, 0.0)))
}

/// Symbolic expansion of [`copy_hamiltonian_pauli`] into Pauli strings.
///
/// `sigma_±^{⊗n}` expands over `{X, Y}^n` with weight `(±i)^k` for `k` letters `Y`;
/// combining both ladders gives the real weight `2 cos(k pi/2 - gamma)`.
pub fn copy_hamiltonian_terms(n: usize, gamma: f64, dt: f64) -> Result<Vec<PauliTerm>> {
    GateSpec::new(n, dt)?;
    let prefactor = PI / ((1u64 << (n + 2)) as f64 * dt);
    let mut terms = Vec::new();
    for first in [PauliLetter::I, PauliLetter::Z] {
        for mask in 0..(1usize << n) {
            let letters: Vec<PauliLetter> = std::iter::once(first)
                .chain((0..n).map(|j| {
                    if (mask >> (n - 1 - j)) & 1 == 1 {
                        PauliLetter::Y
                    } else {
                        PauliLetter::X
                    }
                }))
                .collect();
            let ys = mask.count_ones() as f64;
            let weight = 2.0 * (ys * PI / 2.0 - gamma).cos();
            terms.push(PauliTerm::new(Complex64::new(prefactor * weight, 0.0), letters));
        }
    }
    Ok(terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            _ => Err(Error::InvalidSpec(format!("sign must be +1 or -1, got {s:?}"))),
        }
    }
}

/// `±(pi/(4 dt))(1 + Z_1)(1 - X_2)`, whose propagator over `dt` is the plain CNOT.
pub fn cnot_hamiltonian(sign: Sign, dt: f64) -> Result<Operator> {
    validate_dt(dt)?;
    let i = PauliLetter::I.matrix();
    let control = &i + &PauliLetter::Z.matrix();
    let target = &i - &PauliLetter::X.matrix();
    Ok(control
        .tensor(&target)
        .scale(Complex64::new(sign.value() * PI / (4.0 * dt), 0.0)))
}

/// Hamiltonian reproducing `target_copy_unitary(spec)` exactly, on the branches
/// chosen by `N1, N2, N3`.
///
/// The 2x2 block `[[0, e^{i beta}], [e^{i alpha}, 0]]` has eigenvectors
/// `(1, ±e^{i(alpha-beta)/2})/sqrt(2)` for eigenvalues `±e^{i gamma}`; `|00...0>` is
/// already an eigenvector. `H = sum_k E_k v_k v_k^dagger`.
pub fn exact_synthesis(spec: &GateSpec) -> Result<Operator> {
    spec.validate()?;
    let energies = branch_energies(spec);
    let half = Complex64::from_polar(1.0, (spec.alpha - spec.beta) / 2.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let vectors = [
        [Complex64::new(r, 0.0), half * r, ZERO],
        [Complex64::new(r, 0.0), -half * r, ZERO],
        [ZERO, ZERO, ONE],
    ];
    let mut block = Operator::zeros(3);
    for (v, e) in vectors.iter().zip(energies.as_array()) {
        for a in 0..3 {
            for b in 0..3 {
                let add = v[a] * v[b].conj() * e;
                block.set(a, b, block.get(a, b) + add);
            }
        }
    }
    // Exact Hermitian symmetry.
    for a in 0..3 {
        block.set(a, a, Complex64::new(block.get(a, a).re, 0.0));
        for b in a + 1..3 {
            block.set(b, a, block.get(a, b).conj());
        }
    }
    let idx = subspace_indices(spec.n);
    let mut h = Operator::zeros(spec.dim());
    for a in 0..3 {
        for b in 0..3 {
            h.set(idx[a], idx[b], block.get(a, b));
        }
    }
    Ok(h)
}
