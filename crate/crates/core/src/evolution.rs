//! Pulse-shaped Schrödinger integration and staged (one copy at a time) copying.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{embed_two_qubit, propagator, Ket, Operator, HERMITIAN_TOL};
use crate::synthesis::copy_hamiltonian_projector;

pub const MIN_STEPS: usize = 100;

/// Time modulation `f(t)` on `[0, dt]` with unit average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseProfile {
    Constant,
    /// `(pi/2) sin(pi t / dt)`
    Sine,
    /// `2` on `[dt/4, 3dt/4]`, `0` elsewhere
    Square,
}

impl PulseProfile {
    pub const ALL: [PulseProfile; 3] = [PulseProfile::Constant, PulseProfile::Sine, PulseProfile::Square];

    pub fn value(self, t: f64, dt: f64) -> f64 {
        match self {
            PulseProfile::Constant => 1.0,
            PulseProfile::Sine => PI / 2.0 * (PI * t / dt).sin(),
            PulseProfile::Square => {
                if (dt / 4.0..=3.0 * dt / 4.0).contains(&t) {
                    2.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `∫_0^t f`, in closed form.
    pub fn integral(self, t: f64, dt: f64) -> f64 {
        match self {
            PulseProfile::Constant => t,
            PulseProfile::Sine => dt / 2.0 * (1.0 - (PI * t / dt).cos()),
            PulseProfile::Square => 2.0 * (t.clamp(dt / 4.0, 3.0 * dt / 4.0) - dt / 4.0),
        }
    }

    pub fn average(self, dt: f64) -> f64 {
        self.integral(dt, dt) / dt
    }

    pub fn name(self) -> &'static str {
        match self {
            PulseProfile::Constant => "constant",
            PulseProfile::Sine => "sine",
            PulseProfile::Square => "square",
        }
    }
}

impl std::str::FromStr for PulseProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PulseProfile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown pulse profile {s:?}")))
    }
}

/// Integrates `i d(psi)/dt = f(t) H psi` over `[0, dt]` with fixed-step RK4.
///
/// The square profile needs `steps` divisible by 4 so its jumps sit on grid points.
pub fn pulse_evolve(h: &Operator, profile: PulseProfile, dt: f64, psi0: &Ket, steps: usize) -> Result<Ket> {
    let residual = h.hermiticity_residual();
    let limit = HERMITIAN_TOL * h.frobenius_norm();
    if residual > limit {
        return Err(Error::NotHermitian { residual, limit });
    }
    if !psi0.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: psi0.norm_sqr(),
        });
    }
    if h.dim() != psi0.dim() {
        return Err(Error::DimMismatch {
            left: h.dim(),
            right: psi0.dim(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidSpec(format!("duration must be positive, got {dt}")));
    }
    if steps < MIN_STEPS {
        return Err(Error::InvalidSteps {
            steps,
            reason: "at least 100 steps required",
        });
    }
    if profile == PulseProfile::Square && !steps.is_multiple_of(4) {
        return Err(Error::InvalidSteps {
            steps,
            reason: "square profile needs a multiple of 4",
        });
    }

    let n = h.dim();
    let step = dt / steps as f64;
    // -i f(t) H psi. The square profile is constant on each step; sample it at the step midpoint so
    // a stage evaluated exactly on a jump sees the value of its own step.
    let rhs = |t: f64, mid: f64, psi: &[Complex64], out: &mut [Complex64]| {
        let f = match profile {
            PulseProfile::Square => profile.value(mid, dt),
            _ => profile.value(t, dt),
        };
        for (r, o) in out.iter_mut().enumerate() {
            let row = &h.entries()[r * n..(r + 1) * n];
            let acc: Complex64 = row.iter().zip(psi).map(|(a, b)| a * b).sum();
            *o = Complex64::new(acc.im, -acc.re) * f;
        }
    };

    let mut psi = psi0.amplitudes().to_vec();
    let zero = vec![Complex64::new(0.0, 0.0); n];
    let (mut k1, mut k2, mut k3, mut k4) = (zero.clone(), zero.clone(), zero.clone(), zero);
    let mut tmp = psi.clone();
    for s in 0..steps {
        let t = s as f64 * step;
        let mid = t + step / 2.0;
        rhs(t, mid, &psi, &mut k1);
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (step / 2.0);
        }
        rhs(t + step / 2.0, mid, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (step / 2.0);
        }
        rhs(t + step / 2.0, mid, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * step;
        }
        rhs(t + step, mid, &tmp, &mut k4);
        for i in 0..n {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (step / 6.0);
        }
    }
    Ok(Ket::from_raw(psi))
}

/// Copies made one at a time: stage `j` couples control qubit 1 to copy qubit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StagePlan {
    pub n: usize,
    pub gamma: f64,
    pub dt_per_stage: f64,
    stages: Vec<(usize, usize)>,
}

impl StagePlan {
    /// Targets in ascending order `2, 3, ..., n+1`.
    pub fn new(n: usize, gamma: f64, dt_per_stage: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSpec(format!("copy count must be at least 1, got {n}")));
        }
        if !(dt_per_stage > 0.0 && dt_per_stage.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "duration must be positive, got {dt_per_stage}"
            )));
        }
        Ok(StagePlan {
            n,
            gamma,
            dt_per_stage,
            stages: (2..=n + 1).map(|j| (1, j)).collect(),
        })
    }

    /// `(control, target)` pairs in application order.
    pub fn stages(&self) -> &[(usize, usize)] {
        &self.stages
    }
}

#[derive(Debug, Clone)]
pub struct StagedCopy {
    pub gates: Vec<Operator>,
    pub composed: Operator,
}

/// Embeds the single-copy propagator once per stage and multiplies them, first
/// stage applied first.
pub fn staged_copy(plan: &StagePlan) -> Result<StagedCopy> {
    let single = propagator(
        &copy_hamiltonian_projector(1, plan.gamma, 1, plan.dt_per_stage)?,
        plan.dt_per_stage,
    )?;
    let qubits = plan.n + 1;
    let gates: Vec<Operator> = plan
        .stages()
        .iter()
        .map(|&(control, target)| embed_two_qubit(&single, control, target, qubits))
        .collect();
    let composed = gates.iter().fold(Operator::identity(1 << qubits), |acc, g| g * &acc);
    Ok(StagedCopy { gates, composed })
}
