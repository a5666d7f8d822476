//! The quantitative side: explicit constants relating the modified energy to
//! the total energy, audited along a real trajectory.
//!
//! Shows the bound constants, the two closeness inequalities on random
//! states, the regularity bound along a run, and the per-row drift bound.
//!
//! ```bash
//! cargo run --release --example closeness_and_drift_bounds
//! ```

use oscint::filters::by_name;
use oscint::integrator::{integrate, IntegratorConfig, RecordOptions};
use oscint::runner::{random_psd_coupling, random_state};
use oscint::system::{
    bound_constants, closeness_check, drift_bound_check, regularity_bound, Forcing,
    OscillatorSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = 6;
    let omegas: Vec<f64> = (0..d)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                rng.random_range(0.5..300.0)
            }
        })
        .collect();
    let coupling = random_psd_coupling(d, 2.0, &mut rng).unwrap();
    let sys = OscillatorSystem::new(omegas, coupling).unwrap();
    let fp = by_name("deuflhard").unwrap();
    let h = 0.5;

    let constants = bound_constants(&sys, &fp).unwrap();
    println!("bound constants for this system/filter:");
    println!("  ‖A‖        = {:.6}", constants.a_norm);
    println!("  C-breve    = {:.6}", constants.c_breve);
    println!("  C-hat      = {:.6}", constants.c_hat);
    println!("  C-tilde    = {:.6}", constants.c_tilde);
    println!("  ω (min ≠0) = {:.6}\n", constants.omega_min_nonzero);

    println!("closeness inequalities on 5 random states (slack = bound - observed):");
    for i in 0..5 {
        let s = random_state(d, &mut rng);
        let rep = closeness_check(&sys, &fp, h, &s).unwrap();
        println!(
            "  state {i}: oscillatory slack {:>10.3e}   total slack {:>10.3e}",
            rep.oscillatory.slack, rep.total.slack
        );
        assert!(rep.oscillatory.satisfied && rep.total.satisfied);
    }

    let s0 = random_state(d, &mut rng);
    let cfg = IntegratorConfig::new(h, fp.clone()).unwrap();
    let steps = 50_000;
    let run = integrate(
        &sys,
        &Forcing::Linear,
        &cfg,
        &s0,
        steps,
        &RecordOptions::with_stride(100),
    )
    .unwrap();

    let bound = regularity_bound(&sys, &fp, h, &s0, run.series.summary.max_q_norm).unwrap();
    let observed = run.series.summary.max_oscillatory_sq.sqrt();
    println!("\nregularity along {steps} steps:");
    println!("  max √(‖Ωq‖² + ‖q̇‖²) observed = {observed:.6}");
    println!("  a-priori bound               = {bound:.6}");
    assert!(observed <= bound * (1.0 + 1e-10));

    let drift = drift_bound_check(&sys, &fp, h, &run.series).unwrap();
    println!(
        "\ndrift bound |H_n - H_0| ≤ C̃ min(h,ω⁻¹)(‖q_n‖‖Ωq_n‖+‖q₀‖‖Ωq₀‖) + Ĉh²(‖q_n‖²+‖q₀‖²):"
    );
    println!(
        "  worst slack {:.6e} (scale {:.3e}) at step {} — satisfied: {}",
        drift.worst_slack, drift.worst_scale, drift.worst_step, drift.satisfied
    );
}
