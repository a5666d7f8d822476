//! The oscillatory system `q̈ = -Ω²q + g(q)`, its states and forces, the
//! total and modified energies, and the quantitative bound checks built from
//! the certified filter constants.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cvec;
use crate::filters::FilterPair;
use crate::linalg::{spectral_norm, CMatrix};
use crate::series::EnergySeries;
use crate::{OscintError, Result, C64};

pub use crate::linalg::{hermitian_eig, HermitianEig};

/// Relative asymmetry above which construction flags the coupling matrix as
/// significantly non-Hermitian (it is symmetrized either way).
pub const ASYMMETRY_WARN_TOL: f64 = 1e-10;

/// An oscillatory system: nonnegative frequencies `ω_j` (the diagonal of `Ω`)
/// and a self-adjoint coupling matrix `A` for the linear force `g(q) = -Aq`.
///
/// The coupling is Hermitian-symmetrized at construction, `(A + A*)/2`;
/// conservation statements need exact self-adjointness and silent asymmetry
/// would show up as spurious linear energy drift. The observed asymmetry is
/// recorded so front ends can warn about it.
#[derive(Debug, Clone)]
pub struct OscillatorSystem {
    omegas: Vec<f64>,
    coupling: CMatrix,
    symmetrization_defect: f64,
    a_norm: OnceLock<f64>,
}

impl OscillatorSystem {
    pub fn new(omegas: Vec<f64>, coupling: CMatrix) -> Result<Self> {
        if coupling.dim() != omegas.len() {
            return Err(OscintError::DimensionMismatch {
                expected: omegas.len(),
                actual: coupling.dim(),
            });
        }
        if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(OscintError::InvalidInput(
                "frequencies must be finite and nonnegative".into(),
            ));
        }
        let symmetrization_defect = coupling.hermitian_defect();
        Ok(OscillatorSystem {
            omegas,
            coupling: coupling.hermitized(),
            symmetrization_defect,
            a_norm: OnceLock::new(),
        })
    }

    /// System with `A = 0` (decoupled oscillators).
    pub fn uncoupled(omegas: Vec<f64>) -> Self {
        let d = omegas.len();
        Self::new(omegas, CMatrix::zeros(d)).expect("zero coupling is always valid")
    }

    pub fn dim(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    /// Asymmetry of the coupling matrix as supplied, before symmetrization.
    pub fn symmetrization_defect(&self) -> f64 {
        self.symmetrization_defect
    }

    /// Whether the supplied coupling was asymmetric beyond the warn tolerance.
    pub fn asymmetry_significant(&self) -> bool {
        let scale = self.coupling.max_abs();
        scale > 0.0 && self.symmetrization_defect > ASYMMETRY_WARN_TOL * scale
    }

    /// Smallest nonzero frequency; `+∞` when all frequencies vanish, which
    /// makes `min(h, ω⁻¹) = 0` without branching.
    pub fn omega_min_nonzero(&self) -> f64 {
        self.omegas
            .iter()
            .copied()
            .filter(|w| *w > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Spectral norm of the coupling, computed once by the Hermitian
    /// eigensolver and cached.
    pub fn coupling_spectral_norm(&self) -> Result<f64> {
        if let Some(v) = self.a_norm.get() {
            return Ok(*v);
        }
        let v = spectral_norm(&self.coupling)?;
        let _ = self.a_norm.set(v);
        Ok(v)
    }

    /// `‖Ω q‖`.
    pub fn omega_weighted_norm(&self, q: &[C64]) -> f64 {
        self.omegas
            .iter()
            .zip(q.iter())
            .map(|(&w, z)| w * w * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Acceleration `-Ω²q + g(q)`.
    pub fn acceleration(&self, g: &Forcing, q: &[C64]) -> Vec<C64> {
        let mut out = g.eval(self, q);
        for i in 0..self.dim() {
            out[i] -= q[i] * (self.omegas[i] * self.omegas[i]);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let d = self.dim();
        let sj = SystemJson {
            omegas: self.omegas.clone(),
            coupling_re: (0..d)
                .map(|i| (0..d).map(|j| self.coupling.get(i, j).re).collect())
                .collect(),
            coupling_im: Some(
                (0..d)
                    .map(|i| (0..d).map(|j| self.coupling.get(i, j).im).collect())
                    .collect(),
            ),
            q0_re: None,
            q0_im: None,
            v0_re: None,
            v0_im: None,
        };
        serde_json::to_string_pretty(&sj).expect("system serialization cannot fail")
    }

    /// Parse the JSON fixture format. Returns the system and, when present,
    /// the embedded initial state.
    pub fn from_json(text: &str) -> Result<(Self, Option<State>)> {
        let sj: SystemJson = serde_json::from_str(text)?;
        let d = sj.omegas.len();
        let re = &sj.coupling_re;
        if re.len() != d || re.iter().any(|r| r.len() != d) {
            return Err(OscintError::InvalidInput(
                "coupling_re must be a d x d matrix".into(),
            ));
        }
        if let Some(im) = &sj.coupling_im {
            if im.len() != d || im.iter().any(|r| r.len() != d) {
                return Err(OscintError::InvalidInput(
                    "coupling_im must be a d x d matrix".into(),
                ));
            }
        }
        let coupling = CMatrix::from_fn(d, |i, j| {
            C64::new(
                sj.coupling_re[i][j],
                sj.coupling_im.as_ref().map_or(0.0, |im| im[i][j]),
            )
        });
        let sys = Self::new(sj.omegas.clone(), coupling)?;
        let state = match (&sj.q0_re, &sj.v0_re) {
            (Some(q0re), Some(v0re)) => {
                let zeros = vec![0.0; d];
                let q0im = sj.q0_im.as_deref().unwrap_or(&zeros);
                let v0im = sj.v0_im.as_deref().unwrap_or(&zeros);
                if q0re.len() != d || v0re.len() != d || q0im.len() != d || v0im.len() != d {
                    return Err(OscintError::InvalidInput(
                        "initial state vectors must have length d".into(),
                    ));
                }
                Some(State::new(
                    (0..d).map(|i| C64::new(q0re[i], q0im[i])).collect(),
                    (0..d).map(|i| C64::new(v0re[i], v0im[i])).collect(),
                ))
            }
            _ => None,
        };
        Ok((sys, state))
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    omegas: Vec<f64>,
    coupling_re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coupling_im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q0_re: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q0_im: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v0_re: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v0_im: Option<Vec<f64>>,
}

/// Position/velocity pair at a time point. `t` is bookkeeping only.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub q: Vec<C64>,
    pub qdot: Vec<C64>,
    pub t: f64,
}

impl State {
    pub fn new(q: Vec<C64>, qdot: Vec<C64>) -> Self {
        assert_eq!(q.len(), qdot.len(), "position/velocity length mismatch");
        State { q, qdot, t: 0.0 }
    }

    pub fn zero(d: usize) -> Self {
        State::new(vec![C64::new(0.0, 0.0); d], vec![C64::new(0.0, 0.0); d])
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q_norm(&self) -> f64 {
        cvec::norm(&self.q)
    }

    pub fn qdot_norm(&self) -> f64 {
        cvec::norm(&self.qdot)
    }

    pub fn is_finite(&self) -> bool {
        cvec::all_finite(&self.q) && cvec::all_finite(&self.qdot)
    }
}

type GFn = Box<dyn Fn(&[C64]) -> Vec<C64> + Send + Sync>;
type UFn = Box<dyn Fn(&[C64]) -> f64 + Send + Sync>;

/// A general force `g` with an optional potential `U` such that `g = -∇U`
/// (complex gradient `∇ = ∇_x + i∇_y`).
pub struct Nonlinearity {
    g: GFn,
    potential: Option<UFn>,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Nonlinearity(potential: {})",
            if self.potential.is_some() {
                "yes"
            } else {
                "no"
            }
        )
    }
}

impl Nonlinearity {
    pub fn new(g: impl Fn(&[C64]) -> Vec<C64> + Send + Sync + 'static) -> Self {
        Nonlinearity {
            g: Box::new(g),
            potential: None,
        }
    }

    pub fn with_potential(
        g: impl Fn(&[C64]) -> Vec<C64> + Send + Sync + 'static,
        u: impl Fn(&[C64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Nonlinearity {
            g: Box::new(g),
            potential: Some(Box::new(u)),
        }
    }

    /// The componentwise cubic force `g_j = -|q_j|² q_j` with its potential
    /// `U = ¼ Σ |q_j|⁴`, the standard smooth test nonlinearity.
    pub fn cubic() -> Self {
        Self::with_potential(
            |q| q.iter().map(|z| -z * z.norm_sqr()).collect(),
            |q| 0.25 * q.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum::<f64>(),
        )
    }

    pub fn eval(&self, q: &[C64]) -> Vec<C64> {
        (self.g)(q)
    }

    pub fn potential(&self, q: &[C64]) -> Option<f64> {
        self.potential.as_ref().map(|u| u(q))
    }

    /// Central-difference consistency defect between the supplied potential
    /// and force: `|(U(q+εv) - U(q-εv))/(2ε) + Re(v* g(q))|`, which decays as
    /// O(ε²) when `g = -∇U`. `None` when no potential was supplied.
    pub fn gradient_consistency_defect(&self, q: &[C64], v: &[C64], eps: f64) -> Option<f64> {
        let u = self.potential.as_ref()?;
        let plus: Vec<C64> = q.iter().zip(v).map(|(a, b)| a + b * eps).collect();
        let minus: Vec<C64> = q.iter().zip(v).map(|(a, b)| a - b * eps).collect();
        let fd = (u(&plus) - u(&minus)) / (2.0 * eps);
        let directional = cvec::inner(v, &self.eval(q)).re;
        Some((fd + directional).abs())
    }
}

/// The force seen by the integrator.
#[derive(Debug)]
pub enum Forcing {
    /// `g ≡ 0`: pure rotation.
    None,
    /// The system's linear force `g(q) = -A q`.
    Linear,
    /// A user-supplied force.
    Nonlinear(Nonlinearity),
}

impl Forcing {
    pub fn eval(&self, sys: &OscillatorSystem, q: &[C64]) -> Vec<C64> {
        match self {
            Forcing::None => vec![C64::new(0.0, 0.0); q.len()],
            Forcing::Linear => {
                let mut out = vec![C64::new(0.0, 0.0); q.len()];
                sys.coupling().matvec_into(q, &mut out);
                for z in out.iter_mut() {
                    *z = -*z;
                }
                out
            }
            Forcing::Nonlinear(nl) => nl.eval(q),
        }
    }

    /// Potential value `U(q)`, when known (`None` for a potential-free
    /// nonlinear force).
    pub fn potential_value(&self, sys: &OscillatorSystem, q: &[C64]) -> Option<f64> {
        match self {
            Forcing::None => Some(0.0),
            Forcing::Linear => {
                let aq = sys.coupling().matvec(q).ok()?;
                Some(0.5 * cvec::inner(q, &aq).re)
            }
            Forcing::Nonlinear(nl) => nl.potential(q),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Forcing::Linear)
    }
}

/// Total energy `H(q, q̇) = ½‖Ωq‖² + ½‖q̇‖² + ½ Re(q* A q)` of the linear
/// system.
pub fn energy(sys: &OscillatorSystem, s: &State) -> Result<f64> {
    check_dims(sys, s)?;
    let aq = sys.coupling().matvec(&s.q)?;
    let potential = 0.5 * cvec::inner(&s.q, &aq).re;
    Ok(oscillatory_part(sys, s) + potential)
}

/// `½‖Ωq‖² + ½‖q̇‖²`.
fn oscillatory_part(sys: &OscillatorSystem, s: &State) -> f64 {
    let wq = sys.omega_weighted_norm(&s.q);
    0.5 * wq * wq + 0.5 * cvec::norm_sqr(&s.qdot)
}

fn check_dims(sys: &OscillatorSystem, s: &State) -> Result<()> {
    if s.dim() != sys.dim() {
        return Err(OscintError::DimensionMismatch {
            expected: sys.dim(),
            actual: s.dim(),
        });
    }
    Ok(())
}

/// Modified energy for a general force:
/// `½‖Ωq‖² + ½‖q̇‖² - ½ Re((cos(hΩ)Φq)* g(Φq)) - ⅛ h² ‖Ψ₁ g(Φq)‖²`.
pub fn modified_energy_general(
    sys: &OscillatorSystem,
    g: &Forcing,
    fp: &FilterPair,
    h: f64,
    s: &State,
) -> Result<f64> {
    check_dims(sys, s)?;
    if h.is_nan() || h <= 0.0 || h.is_infinite() {
        return Err(OscintError::InvalidStepSize { h });
    }
    let d = sys.dim();
    let phi_q: Vec<C64> = (0..d)
        .map(|j| s.q[j] * fp.phi.eval(h * sys.omegas()[j]))
        .collect();
    let gval = g.eval(sys, &phi_q);
    let mut cos_term = 0.0;
    let mut psi_sq = 0.0;
    for j in 0..d {
        let xi = h * sys.omegas()[j];
        let cos_phi_q = phi_q[j] * xi.cos();
        cos_term += (cos_phi_q.conj() * gval[j]).re;
        let psi_g = gval[j] * fp.psi1.eval(xi);
        psi_sq += psi_g.norm_sqr();
    }
    Ok(oscillatory_part(sys, s) - 0.5 * cos_term - 0.125 * h * h * psi_sq)
}

/// Modified energy of the linear case,
/// `½‖Ωq‖² + ½‖q̇‖² + ½ Re((cos(hΩ)Φq)* A Φq) - ⅛ h² ‖Ψ₁ A Φq‖²`,
/// the quantity conserved exactly by compliant integrators.
pub fn modified_energy(sys: &OscillatorSystem, fp: &FilterPair, h: f64, s: &State) -> Result<f64> {
    modified_energy_general(sys, &Forcing::Linear, fp, h, s)
}

/// Two-sided evaluation of the per-step exchange identity.
#[derive(Clone, Copy, Debug)]
pub struct ExchangeCheck {
    /// `|lhs - rhs|` where lhs/rhs are the two sides of the identity.
    pub defect: f64,
    /// `max(|lhs|, |rhs|)`.
    pub scale: f64,
}

/// Defect of the two-step identity
/// `𝓗(q_{n+1}) + ½Re((Φq_n)* g(Φq_{n+1})) = 𝓗(q_n) + ½Re((Φq_{n+1})* g(Φq_n))`
/// where `s_next` must be the integrator output from `s_n` with the same
/// `(fp, h)`. For compliant filters and one integrator step the defect is at
/// roundoff level for any smooth `g`.
pub fn exchange_defect(
    sys: &OscillatorSystem,
    g: &Forcing,
    fp: &FilterPair,
    h: f64,
    s_n: &State,
    s_next: &State,
) -> Result<ExchangeCheck> {
    check_dims(sys, s_n)?;
    check_dims(sys, s_next)?;
    let d = sys.dim();
    let phi_at = |s: &State| -> Vec<C64> {
        (0..d)
            .map(|j| s.q[j] * fp.phi.eval(h * sys.omegas()[j]))
            .collect()
    };
    let phi_n = phi_at(s_n);
    let phi_next = phi_at(s_next);
    let g_n = g.eval(sys, &phi_n);
    let g_next = g.eval(sys, &phi_next);
    let h_n = modified_energy_general(sys, g, fp, h, s_n)?;
    let h_next = modified_energy_general(sys, g, fp, h, s_next)?;
    let lhs = h_next + 0.5 * cvec::inner(&phi_n, &g_next).re;
    let rhs = h_n + 0.5 * cvec::inner(&phi_next, &g_n).re;
    Ok(ExchangeCheck {
        defect: (lhs - rhs).abs(),
        scale: lhs.abs().max(rhs.abs()),
    })
}

/// The explicit constants of the closeness bounds:
/// `C̆ = ½c₀²‖A‖`, `Ĉ = ⅛c₀⁴‖A‖²`,
/// `C̃ = ½(2c₀² + (c₀+1)·max(c₀+1, c₁))‖A‖`.
#[derive(Clone, Copy, Debug)]
pub struct BoundConstants {
    pub c_breve: f64,
    pub c_hat: f64,
    pub c_tilde: f64,
    pub omega_min_nonzero: f64,
    pub a_norm: f64,
}

pub fn bound_constants(sys: &OscillatorSystem, fp: &FilterPair) -> Result<BoundConstants> {
    let a_norm = sys.coupling_spectral_norm()?;
    let c0 = fp.c0;
    let c1 = fp.c1;
    Ok(BoundConstants {
        c_breve: 0.5 * c0 * c0 * a_norm,
        c_hat: 0.125 * c0.powi(4) * a_norm * a_norm,
        c_tilde: 0.5 * (2.0 * c0 * c0 + (c0 + 1.0) * (c0 + 1.0).max(c1)) * a_norm,
        omega_min_nonzero: sys.omega_min_nonzero(),
        a_norm,
    })
}

/// One audited inequality: `lhs ≤ rhs` with `slack = rhs - lhs`.
#[derive(Clone, Copy, Debug)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub scale: f64,
    pub satisfied: bool,
}

impl InequalityCheck {
    fn evaluate(lhs: f64, rhs: f64, rel_tol: f64, extra_scale: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(extra_scale);
        let slack = rhs - lhs;
        InequalityCheck {
            lhs,
            rhs,
            slack,
            scale,
            satisfied: slack >= -rel_tol * scale,
        }
    }
}

/// Report of the two closeness inequalities between the modified and the
/// original energy.
#[derive(Clone, Copy, Debug)]
pub struct ClosenessReport {
    /// `|𝓗 - ½‖Ωq‖² - ½‖q̇‖²| ≤ (C̆ + Ĉh²)‖q‖²`
    pub oscillatory: InequalityCheck,
    /// `|𝓗 - H| ≤ C̃ min(h, ω⁻¹)‖q‖‖Ωq‖ + Ĉh²‖q‖²`
    pub total: InequalityCheck,
    /// Set when `h > 1`; the bounds are stated under `h ≤ 1`, the check still
    /// runs but its verdict is advisory.
    pub advisory_large_step: bool,
}

pub const CLOSENESS_REL_TOL: f64 = 1e-12;

pub fn closeness_check(
    sys: &OscillatorSystem,
    fp: &FilterPair,
    h: f64,
    s: &State,
) -> Result<ClosenessReport> {
    let constants = bound_constants(sys, fp)?;
    let h_mod = modified_energy(sys, fp, h, s)?;
    let h_total = energy(sys, s)?;
    let osc = oscillatory_part(sys, s);
    let q_norm = s.q_norm();
    let wq_norm = sys.omega_weighted_norm(&s.q);

    let lhs1 = (h_mod - osc).abs();
    let rhs1 = (constants.c_breve + constants.c_hat * h * h) * q_norm * q_norm;
    let oscillatory = InequalityCheck::evaluate(lhs1, rhs1, CLOSENESS_REL_TOL, osc.abs());

    let min_factor = h.min(1.0 / constants.omega_min_nonzero);
    let lhs2 = (h_mod - h_total).abs();
    let rhs2 = constants.c_tilde * min_factor * q_norm * wq_norm
        + constants.c_hat * h * h * q_norm * q_norm;
    let total = InequalityCheck::evaluate(lhs2, rhs2, CLOSENESS_REL_TOL, h_total.abs());

    Ok(ClosenessReport {
        oscillatory,
        total,
        advisory_large_step: h > 1.0,
    })
}

/// Explicit a-priori bound on the oscillatory part of the trajectory:
/// `√(‖Ωq₀‖² + ‖q̇₀‖² + 2(C̆ + Ĉh²)(‖q₀‖² + qn_norm²))` dominates
/// `√(‖Ωq_n‖² + ‖q̇_n‖²)` along any compliant linear trajectory whose
/// position norm stays within `qn_norm`.
pub fn regularity_bound(
    sys: &OscillatorSystem,
    fp: &FilterPair,
    h: f64,
    s0: &State,
    qn_norm: f64,
) -> Result<f64> {
    if !fp.hl_compliant {
        return Err(OscintError::HypothesisUnmet(format!(
            "filter pair '{}' is not compliant; the regularity bound requires ψ₁ = sinc·φ",
            fp.name
        )));
    }
    check_dims(sys, s0)?;
    let constants = bound_constants(sys, fp)?;
    let wq0 = sys.omega_weighted_norm(&s0.q);
    let q0 = s0.q_norm();
    let v0 = s0.qdot_norm();
    let c = constants.c_breve + constants.c_hat * h * h;
    Ok((wq0 * wq0 + v0 * v0 + 2.0 * c * (q0 * q0 + qn_norm * qn_norm)).sqrt())
}

/// Worst-case audit of the explicit drift bound along a recorded trajectory.
#[derive(Clone, Copy, Debug)]
pub struct DriftBoundReport {
    pub worst_slack: f64,
    pub worst_scale: f64,
    pub worst_step: u64,
    pub satisfied: bool,
    pub advisory_large_step: bool,
}

pub const DRIFT_BOUND_REL_TOL: f64 = 1e-10;

/// Checks `|H_n - H_0| ≤ C̃ min(h, ω⁻¹)(‖q_n‖‖Ωq_n‖ + ‖q₀‖‖Ωq₀‖)
/// + Ĉh²(‖q_n‖² + ‖q₀‖²)` at every recorded step of a compliant linear run.
pub fn drift_bound_check(
    sys: &OscillatorSystem,
    fp: &FilterPair,
    h: f64,
    series: &EnergySeries,
) -> Result<DriftBoundReport> {
    if !fp.hl_compliant {
        return Err(OscintError::HypothesisUnmet(format!(
            "filter pair '{}' is not compliant; the drift bound requires ψ₁ = sinc·φ",
            fp.name
        )));
    }
    let rows = &series.rows;
    if rows.is_empty() {
        return Err(OscintError::InvalidInput(
            "drift bound audit needs a non-empty series".into(),
        ));
    }
    if rows.iter().any(|r| !r.energy.is_finite()) {
        return Err(OscintError::InvalidInput(
            "drift bound audit needs total-energy values in the series".into(),
        ));
    }
    let constants = bound_constants(sys, fp)?;
    let min_factor = h.min(1.0 / constants.omega_min_nonzero);
    let first = &rows[0];
    let mut worst_slack = f64::INFINITY;
    let mut worst_scale = 1.0;
    let mut worst_step = 0;
    let mut worst_rel = f64::INFINITY;
    for row in rows.iter() {
        let lhs = (row.energy - first.energy).abs();
        let rhs = constants.c_tilde
            * min_factor
            * (row.q_norm * row.omega_q_norm + first.q_norm * first.omega_q_norm)
            + constants.c_hat * h * h * (row.q_norm * row.q_norm + first.q_norm * first.q_norm);
        let scale = rhs.abs().max(row.energy.abs()).max(first.energy.abs());
        let slack = rhs - lhs;
        let rel = if scale > 0.0 { slack / scale } else { slack };
        if rel < worst_rel {
            worst_rel = rel;
            worst_slack = slack;
            worst_scale = scale;
            worst_step = row.n;
        }
    }
    Ok(DriftBoundReport {
        worst_slack,
        worst_scale,
        worst_step,
        satisfied: worst_slack >= -DRIFT_BOUND_REL_TOL * worst_scale,
        advisory_large_step: h > 1.0,
    })
}

/// Certificate of the unconditional regime (all frequencies nonzero and
/// large enough relative to the coupling).
#[derive(Clone, Copy, Debug)]
pub struct UnconditionalReport {
    /// Frequency threshold `½c₀²‖A‖ + 1`.
    pub threshold: f64,
    pub omega_min: f64,
    /// `|𝓗(q₀, q̇₀)|`, the a-priori bound on `½‖q_n‖² + ½‖q̇_n‖²`.
    pub state_energy_bound: f64,
    /// Worst slack of that bound over the whole run.
    pub worst_state_slack: f64,
    pub state_scale: f64,
    pub state_bound_satisfied: bool,
    /// A-priori trajectory-independent ceiling on `|H_n - H_0|`.
    pub drift_ceiling: f64,
    pub max_abs_drift_energy: f64,
    pub drift_within_ceiling: bool,
    pub advisory_large_step: bool,
}

pub const UNCONDITIONAL_REL_TOL: f64 = 1e-10;

/// Certifies the unconditional-regime chain along a compliant linear run:
/// `½‖q_n‖² + ½‖q̇_n‖² ≤ |𝓗(q₀, q̇₀)|` at every step (via exact conservation
/// of the modified energy), and the resulting a-priori drift ceiling.
///
/// Refuses when a frequency vanishes or the smallest frequency sits below
/// the threshold, naming the offender.
pub fn unconditional_bound_check(
    sys: &OscillatorSystem,
    fp: &FilterPair,
    h: f64,
    s0: &State,
    series: &EnergySeries,
) -> Result<UnconditionalReport> {
    if !fp.hl_compliant {
        return Err(OscintError::HypothesisUnmet(format!(
            "filter pair '{}' is not compliant; the unconditional bound requires ψ₁ = sinc·φ",
            fp.name
        )));
    }
    check_dims(sys, s0)?;
    if let Some(j) = sys.omegas().iter().position(|&w| w == 0.0) {
        return Err(OscintError::FrequencyCondition(format!(
            "ω_{j} = 0: the unconditional bound needs all frequencies nonzero"
        )));
    }
    let constants = bound_constants(sys, fp)?;
    let threshold = 0.5 * fp.c0 * fp.c0 * constants.a_norm + 1.0;
    let omega_min = sys.omega_min_nonzero();
    if omega_min < threshold {
        return Err(OscintError::FrequencyCondition(format!(
            "smallest frequency ω = {omega_min:.6} is below the threshold ½c₀²‖A‖+1 = {threshold:.6}"
        )));
    }
    let c_h = constants.c_breve + constants.c_hat * h * h;
    if 2.0 * c_h > omega_min * omega_min - 1.0 {
        return Err(OscintError::FrequencyCondition(format!(
            "2(C̆ + Ĉh²) = {:.6} exceeds ω² - 1 = {:.6} at this step size",
            2.0 * c_h,
            omega_min * omega_min - 1.0
        )));
    }

    let h0_mod = modified_energy(sys, fp, h, s0)?.abs();
    // a-priori trajectory bounds derived from conservation of the modified energy
    let q_bound_sq = 2.0 * h0_mod;
    let wq_bound_sq = 2.0 * h0_mod * (1.0 + 2.0 * c_h);
    let wq0 = sys.omega_weighted_norm(&s0.q);
    let q0_bound = wq0 / omega_min;
    let min_factor = h.min(1.0 / omega_min);
    let drift_ceiling =
        constants.c_tilde * min_factor * (q_bound_sq.sqrt() * wq_bound_sq.sqrt() + q0_bound * wq0)
            + constants.c_hat * h * h * (q_bound_sq + q0_bound * q0_bound);

    let worst_half_state = series.summary.max_half_state_sq;
    let state_scale = h0_mod.max(worst_half_state);
    let worst_state_slack = h0_mod - worst_half_state;

    let mut max_drift = 0.0f64;
    for row in &series.rows {
        if row.drift_energy.is_finite() {
            max_drift = max_drift.max(row.drift_energy.abs());
        }
    }

    Ok(UnconditionalReport {
        threshold,
        omega_min,
        state_energy_bound: h0_mod,
        worst_state_slack,
        state_scale,
        state_bound_satisfied: worst_state_slack >= -UNCONDITIONAL_REL_TOL * state_scale,
        drift_ceiling,
        max_abs_drift_energy: max_drift,
        drift_within_ceiling: max_drift <= drift_ceiling + UNCONDITIONAL_REL_TOL * state_scale,
        advisory_large_step: h > 1.0,
    })
}
