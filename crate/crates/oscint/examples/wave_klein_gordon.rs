//! Full Klein-Gordon pipeline: build the Fourier-collocation
//! semi-discretization, certify the mass-parameter threshold, and integrate
//! with step sizes that hit interior resonances — the drift stays O(h),
//! uniformly in the number of steps.
//!
//! ```bash
//! cargo run --release --example wave_klein_gordon [OUTPUT_DIR]
//! ```
//!
//! With an output directory, one CSV series per step size is written there.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use oscint::filters::by_name;
use oscint::integrator::{integrate, IntegratorConfig, RecordOptions};
use oscint::runner::emit_series;
use oscint::system::Forcing;
use oscint::wave::{build_system, rho_certificate, sobolev_norms, PotentialSpec, WaveProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let out_dir = std::env::args().nth(1).map(std::path::PathBuf::from);
    let big_k = 32usize;
    // h = 0.1 puts the interior modes j = ±31 exactly at h·ω = π
    let rho = 100.0 * PI * PI - 961.0;
    let potential = PotentialSpec::new(&[
        (0, C64::new(0.5, 0.0)),
        (1, C64::new(0.2, 0.1)),
        (2, C64::new(0.1, -0.05)),
    ])
    .unwrap();

    let n = 2 * big_k;
    let mut u0 = vec![C64::new(0.0, 0.0); n];
    let mut v0 = vec![C64::new(0.0, 0.0); n];
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for j in -6i64..=6 {
        let slot = oscint::wave::storage_index(j, big_k);
        let decay = 1.0 / (1.0 + (j * j) as f64);
        u0[slot] = C64::new(
            decay * rng.random_range(-0.3..0.3),
            decay * rng.random_range(-0.3..0.3),
        );
        v0[slot] = C64::new(
            decay * rng.random_range(-0.3..0.3),
            decay * rng.random_range(-0.3..0.3),
        );
    }
    let problem = WaveProblem::new(big_k, rho, potential, u0, v0).unwrap();

    let norms = sobolev_norms(&problem.u0, rho).unwrap();
    println!(
        "K = {big_k}, ρ = {rho:.4}, ‖V‖_H¹ = {:.4}",
        problem.potential.h1_norm()
    );
    println!(
        "initial data: ‖u‖_L² = {:.4}, ‖u‖_H¹ = {:.4}, ‖Ωq₀‖ = {:.4}\n",
        norms.l2, norms.h1, norms.omega_weighted
    );

    let fp = by_name("hairer-lubich").unwrap();
    let cert = rho_certificate(&problem, &fp, 1.1).unwrap();
    println!(
        "threshold with empirical c₂ = {}: {}",
        cert.c2_estimate, cert.estimate_condition
    );
    println!(
        "threshold with computed ‖A‖ = {:.4}: {}",
        cert.a_norm, cert.direct_condition
    );
    println!("regime: {}\n", cert.drift_regime());

    let (sys, s0) = build_system(&problem).unwrap();
    let steps = 100_000;
    println!(
        "{:<8} {:>14} {:>18} {:>10}",
        "h", "max |H drift|", "rel drift H_mod", "drift/h"
    );
    for (idx, &h) in [0.1, 0.05, 0.025].iter().enumerate() {
        let cfg = IntegratorConfig::new(h, fp.clone()).unwrap();
        let run = integrate(
            &sys,
            &Forcing::Linear,
            &cfg,
            &s0,
            steps,
            &RecordOptions::with_stride(100),
        )
        .unwrap();
        let drift = run.series.max_abs_drift_energy();
        println!(
            "{:<8} {:>14.4e} {:>18.3e} {:>10.4e}",
            h,
            drift,
            run.series.summary.max_abs_drift_modified / run.series.summary.modified_scale,
            drift / h
        );
        if let Some(dir) = &out_dir {
            let path = dir.join(format!("wave_h{idx}.csv"));
            emit_series(&run.series, Some(&path), oscint::runner::OutputFormat::Csv).unwrap();
            eprintln!("  wrote {}", path.display());
        }
    }
    println!("\ndrift/h stays bounded: no step-size restriction, no resonance exclusion.");
}
