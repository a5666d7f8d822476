//! Independent reference solutions, used only for verification.
//!
//! Nothing here is part of the integration runtime: the exact propagator
//! costs an O(d³) eigendecomposition and the brute-force integrator is a
//! plain fourth-order one-step method on the first-order form. Tests, the
//! audit command and the examples use them as the second route against which
//! the trigonometric integrator is checked.

use crate::cvec;
use crate::linalg::{hermitian_eig, CMatrix};
use crate::system::{Forcing, OscillatorSystem, State};
use crate::{OscintError, Result, C64};

/// Exact propagator for the linear system `q̈ = -(Ω² + A) q`, built from the
/// eigendecomposition of the Hermitian matrix `M = Ω² + A`.
///
/// Negative eigenvalues of `M` are admissible (A is only self-adjoint); the
/// propagator goes through even power series in `λ t²`, so no square root of
/// a negative number ever appears.
pub struct ExactPropagator {
    eigenvalues: Vec<f64>,
    vectors: CMatrix,
    vectors_adjoint: CMatrix,
}

impl ExactPropagator {
    pub fn new(sys: &OscillatorSystem) -> Result<Self> {
        let d = sys.dim();
        let m = CMatrix::from_fn(d, |i, j| {
            let mut v = sys.coupling().get(i, j);
            if i == j {
                v += sys.omegas()[i] * sys.omegas()[i];
            }
            v
        });
        let eig = hermitian_eig(&m)?;
        let vectors_adjoint = eig.eigenvectors.adjoint();
        Ok(ExactPropagator {
            eigenvalues: eig.eigenvalues,
            vectors: eig.eigenvectors,
            vectors_adjoint,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Solution of the linear system at elapsed time `t` from `s0`.
    pub fn evolve(&self, s0: &State, t: f64) -> Result<State> {
        let d = self.dim();
        if s0.dim() != d {
            return Err(OscintError::DimensionMismatch {
                expected: d,
                actual: s0.dim(),
            });
        }
        if t == 0.0 {
            return Ok(s0.clone());
        }
        let y0 = self.vectors_adjoint.matvec(&s0.q)?;
        let yd0 = self.vectors_adjoint.matvec(&s0.qdot)?;
        let mut y = vec![C64::new(0.0, 0.0); d];
        let mut yd = vec![C64::new(0.0, 0.0); d];
        for j in 0..d {
            let lambda = self.eigenvalues[j];
            let z = lambda * t * t;
            let c = cos_series(z);
            let s = sinc_series_z(z);
            y[j] = y0[j] * c + yd0[j] * (t * s);
            yd[j] = y0[j] * (-lambda * t * s) + yd0[j] * c;
        }
        let q = self.vectors.matvec(&y)?;
        let qdot = self.vectors.matvec(&yd)?;
        Ok(State {
            q,
            qdot,
            t: s0.t + t,
        })
    }
}

/// `cos(√z)` continued to negative arguments (`cosh(√-z)`), as an entire
/// function of `z`.
fn cos_series(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z / 2.0 + z * z / 24.0
    } else if z >= 0.0 {
        z.sqrt().cos()
    } else {
        (-z).sqrt().cosh()
    }
}

/// `sin(√z)/√z` continued to negative arguments (`sinh(√-z)/√-z`).
fn sinc_series_z(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z / 6.0 + z * z / 120.0
    } else if z >= 0.0 {
        let r = z.sqrt();
        r.sin() / r
    } else {
        let r = (-z).sqrt();
        r.sinh() / r
    }
}

/// One-call convenience around [`ExactPropagator`].
pub fn exact_solution(sys: &OscillatorSystem, s0: &State, t: f64) -> Result<State> {
    ExactPropagator::new(sys)?.evolve(s0, t)
}

/// Result of a brute-force reference integration.
pub struct BruteForceResult {
    pub state: State,
    /// Richardson estimate from step halving of the returned state's error.
    pub error_estimate: f64,
}

/// Classical fourth-order one-step reference on the first-order form
/// `(q, q̇)' = (q̇, -Ω²q + g(q))`.
///
/// Runs with `n_substeps` and `2 n_substeps` sub-steps; the fine result is
/// returned together with the step-halving error estimate. The estimate is
/// reported even when it exceeds the caller's hopes; nothing is retried.
pub fn brute_force(
    sys: &OscillatorSystem,
    g: &Forcing,
    s0: &State,
    t: f64,
    n_substeps: usize,
) -> Result<BruteForceResult> {
    if n_substeps == 0 {
        return Err(OscintError::InvalidInput(
            "brute_force needs at least one substep".into(),
        ));
    }
    let coarse = rk4_run(sys, g, s0, t, n_substeps)?;
    let fine = rk4_run(sys, g, s0, t, 2 * n_substeps)?;
    let mut dist_sq = 0.0;
    for i in 0..s0.dim() {
        dist_sq += (coarse.q[i] - fine.q[i]).norm_sqr();
        dist_sq += (coarse.qdot[i] - fine.qdot[i]).norm_sqr();
    }
    // order-4 Richardson factor 2^4 - 1
    let error_estimate = dist_sq.sqrt() / 15.0;
    Ok(BruteForceResult {
        state: fine,
        error_estimate,
    })
}

fn rk4_run(sys: &OscillatorSystem, g: &Forcing, s0: &State, t: f64, n: usize) -> Result<State> {
    let d = s0.dim();
    if d != sys.dim() {
        return Err(OscintError::DimensionMismatch {
            expected: sys.dim(),
            actual: d,
        });
    }
    let dt = t / n as f64;
    let mut q = s0.q.clone();
    let mut qdot = s0.qdot.clone();

    let accel = |q: &[C64]| -> Vec<C64> { sys.acceleration(g, q) };

    for step in 0..n {
        let k1q: Vec<C64> = qdot.clone();
        let k1v = accel(&q);

        let q2: Vec<C64> = (0..d).map(|i| q[i] + k1q[i] * (0.5 * dt)).collect();
        let v2: Vec<C64> = (0..d).map(|i| qdot[i] + k1v[i] * (0.5 * dt)).collect();
        let k2q = v2.clone();
        let k2v = accel(&q2);

        let q3: Vec<C64> = (0..d).map(|i| q[i] + k2q[i] * (0.5 * dt)).collect();
        let v3: Vec<C64> = (0..d).map(|i| qdot[i] + k2v[i] * (0.5 * dt)).collect();
        let k3q = v3.clone();
        let k3v = accel(&q3);

        let q4: Vec<C64> = (0..d).map(|i| q[i] + k3q[i] * dt).collect();
        let v4: Vec<C64> = (0..d).map(|i| qdot[i] + k3v[i] * dt).collect();
        let k4q = v4;
        let k4v = accel(&q4);

        for i in 0..d {
            q[i] += (k1q[i] + (k2q[i] + k3q[i]) * 2.0 + k4q[i]) * (dt / 6.0);
            qdot[i] += (k1v[i] + (k2v[i] + k3v[i]) * 2.0 + k4v[i]) * (dt / 6.0);
        }
        if !(cvec::all_finite(&q) && cvec::all_finite(&qdot)) {
            return Err(OscintError::NonFiniteState { step });
        }
    }
    Ok(State {
        q,
        qdot,
        t: s0.t + t,
    })
}

/// Power-iteration estimate of the spectral norm of a Hermitian matrix,
/// independent of the Jacobi eigensolver.
///
/// Iterates with `M²` so that sign-tied extremal eigenvalues cannot stall the
/// iteration.
pub fn spectral_norm_power_estimate(m: &CMatrix, max_iters: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let n = m.dim();
    if n == 0 {
        return 0.0;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let nx = cvec::norm(&x);
    if nx == 0.0 {
        return 0.0;
    }
    for z in x.iter_mut() {
        *z /= nx;
    }
    let mut estimate = 0.0f64;
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    let mut mmx = vec![C64::new(0.0, 0.0); n];
    for _ in 0..max_iters {
        m.matvec_into(&x, &mut tmp);
        m.matvec_into(&tmp, &mut mmx);
        // Rayleigh quotient of M^2 at the unit vector x
        let rho: f64 = x
            .iter()
            .zip(mmx.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let new_estimate = rho.max(0.0).sqrt();
        let nr = cvec::norm(&mmx);
        if nr == 0.0 {
            return 0.0;
        }
        for (xi, yi) in x.iter_mut().zip(mmx.iter()) {
            *xi = yi / nr;
        }
        if (new_estimate - estimate).abs() <= 1e-13 * new_estimate.max(1e-300) {
            return new_estimate;
        }
        estimate = new_estimate;
    }
    estimate
}

pub mod dd {
    //! Double-double arithmetic for the extended-precision scalar oracles.
    //!
    //! About 31 significant digits; enough to adjudicate series-vs-direct
    //! questions that sit far below f64 resolution.

    /// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
    #[derive(Clone, Copy, Debug)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s, err)
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let err = b - (s - a);
        (s, err)
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let err = f64::mul_add(a, b, -p);
        (p, err)
    }

    impl std::ops::Add for Dd {
        type Output = Dd;
        fn add(self, other: Dd) -> Dd {
            let (s1, e1) = two_sum(self.hi, other.hi);
            let (s2, e2) = two_sum(self.lo, other.lo);
            let (s1, e1) = quick_two_sum(s1, e1 + s2);
            let (hi, lo) = quick_two_sum(s1, e1 + e2);
            Dd { hi, lo }
        }
    }

    impl std::ops::Neg for Dd {
        type Output = Dd;
        fn neg(self) -> Dd {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        }
    }

    impl std::ops::Sub for Dd {
        type Output = Dd;
        fn sub(self, other: Dd) -> Dd {
            self + (-other)
        }
    }

    impl std::ops::Mul for Dd {
        type Output = Dd;
        fn mul(self, other: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, other.hi);
            let e = e + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }
    }

    impl Dd {
        pub fn from_f64(x: f64) -> Dd {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn div_f64(self, d: f64) -> Dd {
            let q1 = self.hi / d;
            let (p, e) = two_prod(q1, d);
            let r = self - Dd { hi: p, lo: e };
            let q2 = (r.hi + r.lo) / d;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }
        }

        pub fn abs(self) -> Dd {
            if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
                -self
            } else {
                self
            }
        }

        /// The degree-4 even polynomial `1 - x²/6 + x⁴/120` in double-double.
        pub fn sinc_poly_deg4(x: f64) -> Dd {
            let z = Dd::from_f64(x) * Dd::from_f64(x);
            Dd::from_f64(1.0) - z.div_f64(6.0) + (z * z).div_f64(120.0)
        }

        /// `sin(x)/x` by its Taylor series in double-double; accurate for
        /// |x| <= 1 (terms are generated recursively, 24 of them).
        pub fn sinc_series(x: f64) -> Dd {
            let z = Dd::from_f64(x) * Dd::from_f64(x);
            let mut sum = Dd::from_f64(1.0);
            let mut term = Dd::from_f64(1.0);
            for k in 1..24u32 {
                let denom = (2 * k) as f64 * (2 * k + 1) as f64;
                term = -(term * z).div_f64(denom);
                sum = sum + term;
            }
            sum
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn random_system(d: usize, seed: u64) -> (OscillatorSystem, State) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let omegas: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..8.0)).collect();
        let raw = CMatrix::from_fn(d, |_, _| {
            C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
        });
        let sys = OscillatorSystem::new(omegas, raw.hermitized()).unwrap();
        let q: Vec<C64> = (0..d)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let qdot: Vec<C64> = (0..d)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        (sys, State::new(q, qdot))
    }

    #[test]
    fn exact_solution_at_zero_is_identity() {
        let (sys, s0) = random_system(5, 1);
        let s = exact_solution(&sys, &s0, 0.0).unwrap();
        assert_eq!(s.q, s0.q);
        assert_eq!(s.qdot, s0.qdot);
    }

    #[test]
    fn cosine_solution_for_single_oscillator() {
        let sys = OscillatorSystem::uncoupled(vec![PI]);
        let s0 = State::new(vec![C64::new(1.0, 0.0)], vec![C64::new(0.0, 0.0)]);
        let s = exact_solution(&sys, &s0, 1.0).unwrap();
        assert!((s.q[0].re + 1.0).abs() < 1e-12);
        assert!(s.qdot[0].norm() < 1e-12);
    }

    #[test]
    fn oracle_conserves_energy() {
        use crate::system::energy;
        let (sys, s0) = random_system(5, 2);
        let h0 = energy(&sys, &s0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let prop = ExactPropagator::new(&sys).unwrap();
        for _ in 0..100 {
            let t = rng.random_range(-10.0..10.0);
            let s = prop.evolve(&s0, t).unwrap();
            let h = energy(&sys, &s).unwrap();
            assert!(
                (h - h0).abs() <= 1e-11 * h0.abs().max(1.0),
                "energy drift {} at t={}",
                (h - h0).abs(),
                t
            );
        }
    }

    #[test]
    fn oracle_semigroup_property() {
        let (sys, s0) = random_system(6, 4);
        let prop = ExactPropagator::new(&sys).unwrap();
        let t1 = 0.37;
        let t2 = 1.21;
        let a = prop.evolve(&s0, t1 + t2).unwrap();
        let b = prop.evolve(&prop.evolve(&s0, t1).unwrap(), t2).unwrap();
        let scale = cvec::norm(&a.q) + cvec::norm(&a.qdot);
        let diff = cvec::max_abs_diff(&a.q, &b.q).max(cvec::max_abs_diff(&a.qdot, &b.qdot));
        assert!(diff <= 1e-11 * scale, "semigroup defect {diff}");
    }

    #[test]
    fn negative_spectrum_paths_agree_with_brute_force() {
        // Omega = 0 with A indefinite: M has a negative eigenvalue, so the
        // cosh/sinh branch is exercised.
        let a = CMatrix::from_fn(2, |i, j| {
            if i == j {
                C64::new(if i == 0 { -1.0 } else { 2.0 }, 0.0)
            } else {
                C64::new(0.3, 0.0)
            }
        });
        let sys = OscillatorSystem::new(vec![0.0, 0.0], a).unwrap();
        let s0 = State::new(
            vec![C64::new(0.4, 0.1), C64::new(-0.2, 0.3)],
            vec![C64::new(0.0, 0.0), C64::new(0.1, 0.0)],
        );
        let exact = exact_solution(&sys, &s0, 1.5).unwrap();
        let bf = brute_force(&sys, &Forcing::Linear, &s0, 1.5, 4000).unwrap();
        let diff = cvec::max_abs_diff(&exact.q, &bf.state.q);
        assert!(
            diff <= (1e-10f64).max(10.0 * bf.error_estimate),
            "disagreement {diff} vs estimate {}",
            bf.error_estimate
        );
    }

    #[test]
    fn brute_force_matches_exact_and_reports_estimate() {
        let (sys, s0) = random_system(4, 5);
        let exact = exact_solution(&sys, &s0, 1.0).unwrap();
        let bf = brute_force(&sys, &Forcing::Linear, &s0, 1.0, 2000).unwrap();
        let diff = cvec::max_abs_diff(&exact.q, &bf.state.q)
            .max(cvec::max_abs_diff(&exact.qdot, &bf.state.qdot));
        assert!(diff <= (1e-10f64).max(10.0 * bf.error_estimate));
        assert_eq!(bf.state.t, 1.0);

        let at_zero = brute_force(&sys, &Forcing::Linear, &s0, 0.0, 10).unwrap();
        assert_eq!(at_zero.state.q, s0.q);
    }

    #[test]
    fn brute_force_order_four() {
        let (sys, s0) = random_system(4, 6);
        let reference = exact_solution(&sys, &s0, 1.0).unwrap();
        let err = |n: usize| {
            let s = rk4_run(&sys, &Forcing::Linear, &s0, 1.0, n).unwrap();
            cvec::max_abs_diff(&s.q, &reference.q) + cvec::max_abs_diff(&s.qdot, &reference.qdot)
        };
        let e1 = err(40);
        let e2 = err(80);
        let ratio = e1 / e2;
        assert!(
            (12.0..=20.0).contains(&ratio),
            "step-halving ratio {ratio} outside order-4 window"
        );
    }

    #[test]
    fn power_estimate_agrees_with_eigensolver() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let m = CMatrix::from_fn(8, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .hermitized();
        let exact = spectral_norm(&m).unwrap();
        let est = spectral_norm_power_estimate(&m, 100_000, 1);
        assert!(
            (est - exact).abs() <= 1e-8 * exact,
            "power {est} vs jacobi {exact}"
        );
    }
}
