//! Cyclic Jacobi eigensolver for Hermitian operators, and the propagator built on it.

use num_complex::Complex64;

use super::{Operator, ZERO};
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance applied by [`propagator`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Spectrum of a Hermitian operator: `h = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Operator,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> Operator {
        let diag: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.vectors.apply_function(&diag)
    }
}

impl Operator {
    /// `V diag(f) V^dagger` for `self = V`.
    pub(crate) fn apply_function(&self, diag: &[Complex64]) -> Operator {
        let n = self.dim;
        let mut scaled = self.clone();
        for row in scaled.entries.chunks_mut(n) {
            for (x, d) in row.iter_mut().zip(diag) {
                *x *= d;
            }
        }
        &scaled * &self.adjoint()
    }
}

/// Diagonalizes a Hermitian operator with cyclic complex Jacobi rotations.
///
/// `tol` bounds the relative Hermiticity residual `||h - h^dagger||_F / ||h||_F`.
/// Only the upper triangle is read once the check passes.
pub fn hermitian_eig(h: &Operator, tol: f64) -> Result<HermitianEigen> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    let residual = h.hermiticity_residual();
    if residual > tol * norm {
        return Err(Error::NotHermitian {
            residual,
            limit: tol * norm,
        });
    }

    // Symmetrize so rounding in the input cannot break the rotation invariants.
    let mut a = Operator::from_fn(n, |r, c| {
        if r == c {
            Complex64::new(h.get(r, r).re, 0.0)
        } else if r < c {
            (h.get(r, c) + h.get(c, r).conj()) * 0.5
        } else {
            (h.get(c, r) + h.get(r, c).conj()).conj() * 0.5
        }
    });
    // Rows of `vt` are the eigenvectors, kept transposed so updates are contiguous.
    let mut vt = Operator::identity(n);
    let threshold = OFF_DIAGONAL_TOL * norm;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut vt, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Operator::from_fn(n, |r, c| vt.get(order[c], r));
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_mass(a: &Operator) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for r in 0..n {
        for c in r + 1..n {
            sum += 2.0 * a.get(r, c).norm_sqr();
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with `a <- G^dagger a G`, accumulating `v <- v G` on the
/// transposed eigenvector store `vt`.
///
/// `G = diag(1, e^{-i phi}) R(theta)` restricted to rows/cols `p, q`, where
/// `a[p][q] = |b| e^{i phi}`. The phase step makes the 2x2 block real symmetric.
/// Outside the `p, q` block only rows change directly; columns follow by Hermitian symmetry.
fn rotate(a: &mut Operator, vt: &mut Operator, p: usize, q: usize) {
    let n = a.dim();
    let b = a.get(p, q);
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase_conj = (b / mag).conj();

    // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let g_qp = -phase_conj * s;
    let g_qq = phase_conj * c;
    let (gc_qp, gc_qq) = (g_qp.conj(), g_qq.conj());

    let (row_p, row_q) = two_rows(&mut a.entries, n, p, q);
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (apk, aqk) = (*x, *y);
        *x = apk * c + aqk * gc_qp;
        *y = apk * s + aqk * gc_qq;
    }
    for k in 0..n {
        if k != p && k != q {
            a.entries[k * n + p] = a.entries[p * n + k].conj();
            a.entries[k * n + q] = a.entries[q * n + k].conj();
        }
    }
    a.entries[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a.entries[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    a.entries[p * n + q] = ZERO;
    a.entries[q * n + p] = ZERO;

    let (vp, vq) = two_rows(&mut vt.entries, n, p, q);
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (vkp, vkq) = (*x, *y);
        *x = vkp * c + vkq * g_qp;
        *y = vkp * s + vkq * g_qq;
    }
}

/// Mutable views of rows `p < q` of a row-major `n x n` buffer.
fn two_rows(entries: &mut [Complex64], n: usize, p: usize, q: usize) -> (&mut [Complex64], &mut [Complex64]) {
    let (head, tail) = entries.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

/// `exp(-i h dt)` with hbar = 1, through the eigendecomposition of `h`.
pub fn propagator(h: &Operator, dt: f64) -> Result<Operator> {
    let eig = hermitian_eig(h, HERMITIAN_TOL)?;
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * dt))
        .collect();
    Ok(eig.vectors.apply_function(&phases))
}

/// Eigenvalues of a normal operator (unitaries included), in no particular order.
///
/// The Hermitian and anti-Hermitian parts commute, so a generic real combination
/// of them shares the operator's eigenvectors; Rayleigh quotients recover the
/// complex eigenvalues. A few mixing weights are tried in case one of them makes
/// distinct eigenvalues collide.
pub fn normal_eigenvalues(u: &Operator) -> Result<Vec<Complex64>> {
    let n = u.dim();
    let ud = u.adjoint();
    let herm = (u + &ud).scale(Complex64::new(0.5, 0.0));
    let anti = (u - &ud).scale(Complex64::new(0.0, -0.5));
    let scale = u.frobenius_norm().max(1.0);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for weight in [
        0.618_033_988_749_894_9,
        std::f64::consts::SQRT_2,
        -0.347_296_355_333_860_7,
    ] {
        let mix = &herm + &anti.scale(Complex64::new(weight, 0.0));
        let eig = hermitian_eig(&mix, HERMITIAN_TOL)?;
        let mut worst = 0.0f64;
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let col: Vec<Complex64> = (0..n).map(|r| eig.vectors.get(r, k)).collect();
            let uv: Vec<Complex64> = (0..n).map(|r| (0..n).map(|c| u.get(r, c) * col[c]).sum()).collect();
            let lambda: Complex64 = col.iter().zip(&uv).map(|(x, y)| x.conj() * y).sum();
            let res = uv
                .iter()
                .zip(&col)
                .map(|(y, x)| (y - lambda * x).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(res);
            values.push(lambda);
        }
        if worst <= 1e-12 * scale {
            return Ok(values);
        }
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, values));
        }
    }
    Ok(best.expect("at least one mixing weight tried").1)
}
