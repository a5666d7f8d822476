//! Small-scale dense complex linear algebra: a row-major matrix type and a
//! cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! The solver targets desk-scale problems (dimension up to a few hundred). It
//! is dependency-free and delivers eigenvectors with excellent orthogonality,
//! which the spectral-norm computations and the exact-solution reference rely
//! on.

use crate::{OscintError, Result, C64};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from an entry function `f(row, col)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(OscintError::DimensionMismatch {
                    expected: n,
                    actual: r.len(),
                });
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    /// `out = self * v`.
    pub fn matvec_into(&self, v: &[C64], out: &mut [C64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (row, out_i) in self.data.chunks_exact(self.n).zip(out.iter_mut()) {
            let mut acc = C64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v.iter()) {
                acc += a * x;
            }
            *out_i = acc;
        }
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.n {
            return Err(OscintError::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        self.matvec_into(v, &mut out);
        Ok(out)
    }

    /// Matrix product, for verification code.
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        CMatrix::from_fn(n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitized(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| {
            0.5 * (self.get(i, j) + self.get(j, i).conj())
        })
    }

    pub fn scaled(&self, s: f64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

/// Eigendecomposition of a Hermitian matrix: `M V = V diag(λ)` with unitary
/// `V` (eigenvectors as columns) and real eigenvalues sorted ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Relative asymmetry tolerated on input before refusing to diagonalize.
pub const HERMITICITY_INPUT_TOL: f64 = 1e-12;

const OFF_DIAGONAL_STOP: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Rejects inputs whose asymmetry exceeds `1e-12 * max|M|`; below that the
/// Hermitian part is diagonalized. Iteration stops once the strict upper
/// off-diagonal Frobenius norm falls under `1e-14 * ||M||_F`, with a hard cap
/// of 100 sweeps.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    let n = m.dim();
    let scale = m.max_abs();
    let defect = m.hermitian_defect();
    if defect > HERMITICITY_INPUT_TOL * scale && scale > 0.0 {
        return Err(OscintError::NotHermitian {
            asymmetry: defect,
            tolerance: HERMITICITY_INPUT_TOL * scale,
        });
    }

    let mut a = m.hermitized();
    let mut v = CMatrix::identity(n);
    let frob = a.frobenius_norm();
    if n <= 1 || frob == 0.0 {
        let eigenvalues = (0..n).map(|i| a.get(i, i).re).collect();
        return Ok(HermitianEig {
            eigenvalues,
            eigenvectors: v,
        });
    }
    let stop = OFF_DIAGONAL_STOP * frob;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= stop {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(OscintError::EigenNoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, |i, j| v.get(i, order[j]));

    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            sum += a.get(p, q).norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

/// One two-sided Jacobi rotation zeroing the (p, q) entry.
///
/// The complex pivot is reduced to a real one by absorbing its phase into the
/// rotation, after which the classical real formulas apply.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let u = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau.abs() > 1e150 {
        // avoid overflow in tau^2; asymptotically t = 1/(2 tau)
        1.0 / (2.0 * tau)
    } else if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let cu = u * c;
    let su = u * s;
    let n = a.dim();

    // Columns p and q of A, rows mirrored through Hermitian symmetry.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        let new_kp = akp * cu - akq * s;
        let new_kq = akp * su + akq * c;
        a.set(k, p, new_kp);
        a.set(k, q, new_kq);
        a.set(p, k, new_kp.conj());
        a.set(q, k, new_kq.conj());
    }
    a.set(p, p, C64::new(app - t * r, 0.0));
    a.set(q, q, C64::new(aqq + t * r, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));

    // Accumulate V <- V G.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * cu - vkq * s);
        v.set(k, q, vkp * su + vkq * c);
    }
}

/// Spectral norm `max |λ|` of a Hermitian matrix via the eigensolver.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    let eig = hermitian_eig(m)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reconstruction_residual(m: &CMatrix, eig: &HermitianEig) -> f64 {
        let n = m.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            let col = eig.eigenvectors.column(j);
            let mv = m.matvec(&col).unwrap();
            let mut res = 0.0;
            for i in 0..n {
                res += (mv[i] - col[i] * eig.eigenvalues[j]).norm_sqr();
            }
            worst = worst.max(res.sqrt());
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let m = CMatrix::from_fn(2, |i, j| {
            if i == j {
                c(if i == 0 { 3.0 } else { -1.0 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let eig = hermitian_eig(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 3.0]);
        // eigenvectors are a signed permutation of the identity
        for j in 0..2 {
            let col = eig.eigenvectors.column(j);
            let big: Vec<f64> = col.iter().map(|z| z.norm()).collect();
            assert!(big.iter().any(|&x| (x - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = CMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let eig = hermitian_eig(&m).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..5 {
            let n = 8;
            let raw = CMatrix::from_fn(n, |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let m = raw.hermitized();
            let eig = hermitian_eig(&m).unwrap();
            let norm = spectral_norm(&m).unwrap();
            assert!(
                reconstruction_residual(&m, &eig) <= 1e-10 * norm.max(1.0),
                "trial {trial}: residual too large"
            );
            // V*V = I
            let vtv = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
            let id = CMatrix::identity(n);
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((vtv.get(i, j) - id.get(i, j)).norm());
                }
            }
            assert!(worst <= 1e-10, "orthogonality defect {worst}");
            // ascending order
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_fn(2, |i, j| {
            if i == 0 && j == 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        match hermitian_eig(&m) {
            Err(OscintError::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn hermitized_is_exact_fixed_point() {
        let m = CMatrix::from_fn(3, |i, j| c((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let h = m.hermitized();
        assert_eq!(h.hermitian_defect(), 0.0);
        assert_eq!(h.hermitized(), h);
    }
}
