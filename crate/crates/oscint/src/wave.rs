//! Fourier-collocation semi-discretization of the linear Klein-Gordon
//! equation `∂²_t u = ∂²_x u - ρu - Vu` on the 2π-periodic line.
//!
//! With a trigonometric-polynomial ansatz of degree `K` collocated at
//! `x_k = kπ/K`, the coefficients solve `q̈ = -Ω²q - Aq` with
//! `ω_j = √(j² + ρ)` and the aliased potential matrix
//! `a_{jl} = Σ_m V_{j-l+2Km}`, which is exactly the oscillatory-system shape
//! the integrator and its conservation results apply to.
//!
//! # Conventions
//!
//! Mode indices `j = -K..K-1` are stored in standard DFT order
//! `0, 1, …, K-1, -K, …, -1`; all operations here use that order. The L²
//! norm is the coefficient ℓ² norm (`‖u‖² = Σ|q_j|²`, i.e. the 1/(2π)-weighted
//! integral norm), which makes Parseval factor-free; users expecting the
//! physical ∫|u|²dx convention must scale by √(2π).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::filters::FilterPair;
use crate::linalg::{spectral_norm, CMatrix};
use crate::system::{OscillatorSystem, State};
use crate::{OscintError, Result, C64};

/// Mode index of a storage slot (standard DFT order).
pub fn mode_index(slot: usize, big_k: usize) -> i64 {
    if slot < big_k {
        slot as i64
    } else {
        slot as i64 - 2 * big_k as i64
    }
}

/// Storage slot of a mode index `-K ≤ j < K`.
pub fn storage_index(j: i64, big_k: usize) -> usize {
    if j >= 0 {
        j as usize
    } else {
        (j + 2 * big_k as i64) as usize
    }
}

/// Real-valued 2π-periodic potential with finitely many Fourier modes.
///
/// Conjugate symmetry `V_{-j} = conj(V_j)` is enforced exactly: a supplied
/// mirror coefficient must match bit-for-bit, a missing one is filled in.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    coeffs: BTreeMap<i64, C64>,
    support_radius: i64,
}

impl PotentialSpec {
    pub fn new(entries: &[(i64, C64)]) -> Result<Self> {
        let mut coeffs: BTreeMap<i64, C64> = BTreeMap::new();
        for &(j, v) in entries {
            if coeffs.insert(j, v).is_some() {
                return Err(OscintError::InvalidInput(format!(
                    "duplicate potential coefficient for mode {j}"
                )));
            }
        }
        if let Some(v0) = coeffs.get(&0) {
            if v0.im != 0.0 {
                return Err(OscintError::InvalidInput(
                    "V_0 must be real for a real-valued potential".into(),
                ));
            }
        }
        let keys: Vec<i64> = coeffs.keys().copied().collect();
        for j in keys {
            if j == 0 {
                continue;
            }
            let v = coeffs[&j];
            match coeffs.get(&-j) {
                Some(&mirror) => {
                    if mirror != v.conj() {
                        return Err(OscintError::InvalidInput(format!(
                            "conjugate symmetry violated: V_{} != conj(V_{})",
                            -j, j
                        )));
                    }
                }
                None => {
                    coeffs.insert(-j, v.conj());
                }
            }
        }
        coeffs.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        let support_radius = coeffs.keys().map(|j| j.abs()).max().unwrap_or(0);
        Ok(PotentialSpec {
            coeffs,
            support_radius,
        })
    }

    pub fn zero() -> Self {
        PotentialSpec {
            coeffs: BTreeMap::new(),
            support_radius: 0,
        }
    }

    /// Convert collocation samples of a real potential into a coefficient
    /// spec. The interpolant's coefficients are symmetrized to enforce
    /// `V_{-j} = conj(V_j)` exactly and the Nyquist mode `j = -K` (which has
    /// no mirror in the resolved range) is dropped; the returned defect is
    /// the largest magnitude discarded this way, reported so callers can see
    /// how much the sample data deviated from a real degree-(K-1) potential.
    pub fn from_samples(grid: &GridFunction) -> Result<(Self, f64)> {
        let coeffs = trig_interpolate(grid);
        let big_k = grid.big_k();
        let mut entries = Vec::new();
        let mut defect = 0.0f64;
        let c0 = coeffs[storage_index(0, big_k)];
        defect = defect.max(c0.im.abs());
        entries.push((0i64, C64::new(c0.re, 0.0)));
        for j in 1..big_k as i64 {
            let plus = coeffs[storage_index(j, big_k)];
            let minus = coeffs[storage_index(-j, big_k)];
            let sym = 0.5 * (plus + minus.conj());
            defect = defect.max((plus - minus.conj()).norm());
            entries.push((j, sym));
        }
        defect = defect.max(coeffs[storage_index(-(big_k as i64), big_k)].norm());
        let spec = Self::new(&entries)?;
        Ok((spec, defect))
    }

    pub fn coefficient(&self, j: i64) -> C64 {
        self.coeffs.get(&j).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn support_radius(&self) -> i64 {
        self.support_radius
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&j, &v)| (j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `‖V‖_{H¹} = √(Σ (1+j²)|V_j|²)`.
    pub fn h1_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&j, v)| (1.0 + (j * j) as f64) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise value `V(x) = Σ V_j e^{ijx}`; the imaginary part is roundoff.
    pub fn sample(&self, x: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&j, &v) in &self.coeffs {
            acc += v * C64::from_polar(1.0, j as f64 * x);
        }
        acc
    }
}

/// Frequencies `ω_j = √(j² + ρ)` for `j = -K..K-1` in storage order.
pub fn frequencies(big_k: usize, rho: f64) -> Result<Vec<f64>> {
    if big_k == 0 {
        return Err(OscintError::InvalidInput("K must be at least 1".into()));
    }
    if rho.is_nan() || rho < 0.0 {
        return Err(OscintError::InvalidInput(
            "the mass parameter rho must be nonnegative".into(),
        ));
    }
    Ok((0..2 * big_k)
        .map(|slot| {
            let j = mode_index(slot, big_k) as f64;
            (j * j + rho).sqrt()
        })
        .collect())
}

/// The aliased potential matrix `a_{jl} = Σ_m V_{j-l+2Km}` (finite sum over
/// the potential's support). Hermitian exactly by construction.
pub fn potential_matrix(big_k: usize, potential: &PotentialSpec) -> CMatrix {
    let n = 2 * big_k;
    let radius = potential.support_radius();
    let period = 2 * big_k as i64;
    let mut a = CMatrix::zeros(n);
    let alias_sum = |delta: i64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        // m range with |delta + period m| <= radius
        let lo = (-radius - delta).div_euclid(period);
        let hi = (radius - delta).div_euclid(period);
        for m in lo..=hi {
            acc += potential.coefficient(delta + period * m);
        }
        acc
    };
    for row in 0..n {
        let j = mode_index(row, big_k);
        // real diagonal: V_0 plus conjugate pairs V_{±2Km}
        let mut diag = potential.coefficient(0).re;
        let mut m = 1i64;
        while period * m <= radius {
            diag += 2.0 * potential.coefficient(period * m).re;
            m += 1;
        }
        a.set(row, row, C64::new(diag, 0.0));
        for col in row + 1..n {
            let l = mode_index(col, big_k);
            let v = alias_sum(j - l);
            a.set(row, col, v);
            a.set(col, row, v.conj());
        }
    }
    a
}

/// Samples of a 2π-periodic function at the collocation points `x_k = kπ/K`,
/// stored in the same standard order as mode indices (`k = 0..K-1, -K..-1`).
#[derive(Clone, Debug)]
pub struct GridFunction {
    big_k: usize,
    samples: Vec<C64>,
}

impl GridFunction {
    pub fn from_samples(samples: Vec<C64>) -> Result<Self> {
        let n = samples.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(OscintError::InvalidInput(format!(
                "grid length {n} is not an even number of collocation points"
            )));
        }
        Ok(GridFunction {
            big_k: n / 2,
            samples,
        })
    }

    pub fn from_fn(big_k: usize, f: impl Fn(f64) -> C64) -> Self {
        let samples = (0..2 * big_k)
            .map(|slot| f(Self::collocation_point(big_k, slot)))
            .collect();
        GridFunction { big_k, samples }
    }

    /// `x_k = kπ/K` for the mode-ordered slot.
    pub fn collocation_point(big_k: usize, slot: usize) -> f64 {
        let k = mode_index(slot, big_k);
        k as f64 * std::f64::consts::PI / big_k as f64
    }

    pub fn big_k(&self) -> usize {
        self.big_k
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }
}

mod dft {
    //! Unnormalized discrete Fourier transforms: direct O(N²) evaluation for
    //! small sizes, radix-2 FFT for larger powers of two.

    use crate::C64;

    const DIRECT_LIMIT: usize = 128;

    /// `out_j = Σ_k x_k e^{sign · 2πi jk / N}`.
    fn direct(x: &[C64], sign: f64) -> Vec<C64> {
        let n = x.len();
        let mut twiddle = Vec::with_capacity(n);
        for m in 0..n {
            twiddle.push(C64::from_polar(
                1.0,
                sign * 2.0 * std::f64::consts::PI * m as f64 / n as f64,
            ));
        }
        (0..n)
            .map(|j| {
                let mut acc = C64::new(0.0, 0.0);
                for (k, xk) in x.iter().enumerate() {
                    acc += xk * twiddle[(j * k) % n];
                }
                acc
            })
            .collect()
    }

    fn fft_radix2(x: &mut [C64], sign: f64) {
        let n = x.len();
        debug_assert!(n.is_power_of_two());
        // bit reversal
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = (i.reverse_bits() >> (usize::BITS - bits)) & (n - 1);
            if j > i {
                x.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let ang = sign * 2.0 * std::f64::consts::PI / len as f64;
            let wlen = C64::from_polar(1.0, ang);
            let mut start = 0;
            while start < n {
                let mut w = C64::new(1.0, 0.0);
                for k in 0..len / 2 {
                    let a = x[start + k];
                    let b = x[start + k + len / 2] * w;
                    x[start + k] = a + b;
                    x[start + k + len / 2] = a - b;
                    w *= wlen;
                }
                start += len;
            }
            len <<= 1;
        }
    }

    /// Forward (`sign = -1`) or synthesis (`sign = +1`) transform, both
    /// unnormalized.
    pub fn transform(x: &[C64], forward: bool) -> Vec<C64> {
        let sign = if forward { -1.0 } else { 1.0 };
        let n = x.len();
        if n > DIRECT_LIMIT && n.is_power_of_two() {
            let mut data = x.to_vec();
            fft_radix2(&mut data, sign);
            data
        } else {
            direct(x, sign)
        }
    }

    /// Direct path regardless of size, for cross-checking the FFT.
    #[cfg(test)]
    pub fn transform_direct(x: &[C64], forward: bool) -> Vec<C64> {
        direct(x, if forward { -1.0 } else { 1.0 })
    }
}

#[cfg(test)]
use dft::transform_direct;

/// Coefficients `q_j` of the degree-K trigonometric interpolant through the
/// samples: `Σ_j q_j e^{ijx_k}` reproduces every sample. DFT pair of size 2K.
pub fn trig_interpolate(grid: &GridFunction) -> Vec<C64> {
    let n = grid.samples.len();
    let mut coeffs = dft::transform(&grid.samples, true);
    let scale = 1.0 / n as f64;
    for c in coeffs.iter_mut() {
        *c *= scale;
    }
    coeffs
}

/// Evaluate coefficients back to collocation samples (inverse of
/// [`trig_interpolate`]).
pub fn synthesize(coeffs: &[C64]) -> Result<GridFunction> {
    let n = coeffs.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(OscintError::InvalidInput(format!(
            "coefficient length {n} is not an even number of modes"
        )));
    }
    GridFunction::from_samples(dft::transform(coeffs, false))
}

/// A Klein-Gordon problem: spectral degree, mass parameter, potential and
/// initial data as coefficient vectors of length 2K.
#[derive(Clone, Debug)]
pub struct WaveProblem {
    pub big_k: usize,
    pub rho: f64,
    pub potential: PotentialSpec,
    pub u0: Vec<C64>,
    pub v0: Vec<C64>,
}

impl WaveProblem {
    pub fn new(
        big_k: usize,
        rho: f64,
        potential: PotentialSpec,
        u0: Vec<C64>,
        v0: Vec<C64>,
    ) -> Result<Self> {
        if big_k == 0 {
            return Err(OscintError::InvalidInput("K must be at least 1".into()));
        }
        if rho.is_nan() || rho < 0.0 {
            return Err(OscintError::InvalidInput(
                "the mass parameter rho must be nonnegative".into(),
            ));
        }
        let n = 2 * big_k;
        if u0.len() != n || v0.len() != n {
            return Err(OscintError::DimensionMismatch {
                expected: n,
                actual: u0.len().min(v0.len()),
            });
        }
        Ok(WaveProblem {
            big_k,
            rho,
            potential,
            u0,
            v0,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pj: ProblemJson = serde_json::from_str(text)?;
        let big_k = pj.k;
        if big_k == 0 {
            return Err(OscintError::InvalidInput("K must be at least 1".into()));
        }
        let entries: Vec<(i64, C64)> = pj
            .potential
            .iter()
            .map(|e| (e.j, C64::new(e.re, e.im)))
            .collect();
        let potential = PotentialSpec::new(&entries)?;
        let dense = |sparse: &[CoeffJson]| -> Result<Vec<C64>> {
            let mut v = vec![C64::new(0.0, 0.0); 2 * big_k];
            for e in sparse {
                if e.j < -(big_k as i64) || e.j >= big_k as i64 {
                    return Err(OscintError::InvalidInput(format!(
                        "mode {} outside the resolved range [-K, K)",
                        e.j
                    )));
                }
                v[storage_index(e.j, big_k)] = C64::new(e.re, e.im);
            }
            Ok(v)
        };
        WaveProblem::new(big_k, pj.rho, potential, dense(&pj.u0)?, dense(&pj.v0)?)
    }

    pub fn to_json(&self) -> String {
        let sparse = |v: &[C64]| -> Vec<CoeffJson> {
            v.iter()
                .enumerate()
                .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                .map(|(slot, z)| CoeffJson {
                    j: mode_index(slot, self.big_k),
                    re: z.re,
                    im: z.im,
                })
                .collect()
        };
        let pj = ProblemJson {
            k: self.big_k,
            rho: self.rho,
            potential: self
                .potential
                .entries()
                .map(|(j, v)| CoeffJson {
                    j,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
            u0: sparse(&self.u0),
            v0: sparse(&self.v0),
        };
        serde_json::to_string_pretty(&pj).expect("problem serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    j: i64,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    #[serde(rename = "K")]
    k: usize,
    rho: f64,
    #[serde(default)]
    potential: Vec<CoeffJson>,
    #[serde(default)]
    u0: Vec<CoeffJson>,
    #[serde(default)]
    v0: Vec<CoeffJson>,
}

/// Assemble the oscillatory system `q̈ = -Ω²q - Aq` and the initial state
/// from a wave problem.
pub fn build_system(problem: &WaveProblem) -> Result<(OscillatorSystem, State)> {
    let omegas = frequencies(problem.big_k, problem.rho)?;
    let a = potential_matrix(problem.big_k, &problem.potential);
    let sys = OscillatorSystem::new(omegas, a)?;
    let state = State::new(problem.u0.clone(), problem.v0.clone());
    Ok((sys, state))
}

/// Sobolev norms of a coefficient vector.
#[derive(Clone, Copy, Debug)]
pub struct SobolevNorms {
    /// `√(Σ|q_j|²)` — the L² norm in the coefficient convention.
    pub l2: f64,
    /// `√(Σ(1+j²)|q_j|²)`.
    pub h1: f64,
    /// `√(Σ(j²+ρ)|q_j|²) = ‖Ωq‖`.
    pub omega_weighted: f64,
}

pub fn sobolev_norms(coeffs: &[C64], rho: f64) -> Result<SobolevNorms> {
    let n = coeffs.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(OscintError::InvalidInput(format!(
            "coefficient length {n} is not an even number of modes"
        )));
    }
    let big_k = n / 2;
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    let mut ww = 0.0;
    for (slot, z) in coeffs.iter().enumerate() {
        let j = mode_index(slot, big_k) as f64;
        let p = z.norm_sqr();
        l2 += p;
        h1 += (1.0 + j * j) * p;
        ww += (j * j + rho) * p;
    }
    Ok(SobolevNorms {
        l2: l2.sqrt(),
        h1: h1.sqrt(),
        omega_weighted: ww.sqrt(),
    })
}

/// `‖A‖ / ‖V‖_{H¹}`: the quantity whose boundedness across `(K, V)` sweeps
/// estimates the absolute constant in the operator bound `‖A‖ ≤ c₂‖V‖_{H¹}`.
pub fn operator_norm_ratio(big_k: usize, potential: &PotentialSpec) -> Result<f64> {
    let h1 = potential.h1_norm();
    if h1 == 0.0 {
        return Err(OscintError::InvalidInput(
            "operator norm ratio is undefined for a zero potential".into(),
        ));
    }
    let a = potential_matrix(big_k, potential);
    Ok(spectral_norm(&a)? / h1)
}

/// Verdict of one certificate condition.
#[derive(Clone, Debug)]
pub enum Verdict {
    Certified { margin: f64 },
    NotCertified { margin: f64 },
    Refused { reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    fn from_margin(margin: f64) -> Self {
        if margin >= 0.0 {
            Verdict::Certified { margin }
        } else {
            Verdict::NotCertified { margin }
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Certified { margin } => write!(f, "certified (margin {margin:.3e})"),
            Verdict::NotCertified { margin } => write!(f, "not certified (margin {margin:.3e})"),
            Verdict::Refused { reason } => write!(f, "refused: {reason}"),
        }
    }
}

/// Certificate for the mass-parameter threshold of the wave problem.
#[derive(Clone, Debug)]
pub struct RhoCertificate {
    pub rho: f64,
    pub omega_min: f64,
    pub a_norm: f64,
    pub v_h1: f64,
    pub c2_estimate: f64,
    /// `ρ ≥ ½c₀²c₂‖V‖_{H¹} + 1` with the supplied empirical `c₂`.
    pub estimate_condition: Verdict,
    /// The sharper condition `ω = √ρ ≥ ½c₀²‖A‖ + 1` with the computed `‖A‖`
    /// — what the unconditional conservation result actually needs.
    pub direct_condition: Verdict,
}

impl RhoCertificate {
    /// Implied long-time behavior when the direct condition holds: the
    /// total-energy drift stays bounded by a constant times `h`, uniformly
    /// in the number of steps.
    pub fn drift_regime(&self) -> &'static str {
        if self.direct_condition.is_certified() {
            "drift bounded by C·h uniformly in n (unconditional regime)"
        } else {
            "drift bounded only while the position norm stays bounded (conditional regime)"
        }
    }
}

/// Evaluate both threshold conditions for a wave problem. Report-only: a
/// failed or inapplicable condition is a verdict, not an error.
pub fn rho_certificate(
    problem: &WaveProblem,
    fp: &FilterPair,
    c2_estimate: f64,
) -> Result<RhoCertificate> {
    let omegas = frequencies(problem.big_k, problem.rho)?;
    let omega_min = omegas.iter().copied().fold(f64::INFINITY, f64::min);
    let a = potential_matrix(problem.big_k, &problem.potential);
    let a_norm = spectral_norm(&a)?;
    let v_h1 = problem.potential.h1_norm();
    let c0 = fp.c0;

    let refused: Option<String> = if !fp.hl_compliant {
        Some(format!(
            "filter pair '{}' is not compliant; the conservation theorem does not apply",
            fp.name
        ))
    } else if problem.rho == 0.0 {
        Some("rho = 0 leaves a zero frequency (mode j = 0), violating the nonzero-frequency requirement".into())
    } else {
        None
    };

    let (estimate_condition, direct_condition) = match refused {
        Some(reason) => (
            Verdict::Refused {
                reason: reason.clone(),
            },
            Verdict::Refused { reason },
        ),
        None => (
            Verdict::from_margin(problem.rho - (0.5 * c0 * c0 * c2_estimate * v_h1 + 1.0)),
            Verdict::from_margin(omega_min - (0.5 * c0 * c0 * a_norm + 1.0)),
        ),
    };

    Ok(RhoCertificate {
        rho: problem.rho,
        omega_min,
        a_norm,
        v_h1,
        c2_estimate,
        estimate_condition,
        direct_condition,
    })
}
