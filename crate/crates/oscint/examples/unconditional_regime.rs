//! The unconditional regime: when every frequency clears the threshold
//! ½c₀²‖A‖ + 1, exact conservation of the modified energy yields an a-priori
//! bound on the state itself and a trajectory-independent drift ceiling.
//!
//! ```bash
//! cargo run --release --example unconditional_regime
//! ```

use oscint::filters::by_name;
use oscint::integrator::{integrate, IntegratorConfig, RecordOptions};
use oscint::runner::{random_psd_coupling, random_state};
use oscint::system::{unconditional_bound_check, Forcing, OscillatorSystem, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    // wave-like spectrum ω_j = sqrt(j² + ρ) with ρ = 9
    let omegas: Vec<f64> = (1..=6).map(|j| ((j * j) as f64 + 9.0).sqrt()).collect();
    let coupling = random_psd_coupling(6, 1.0, &mut rng).unwrap();
    let sys = OscillatorSystem::new(omegas, coupling).unwrap();
    let s0 = random_state(6, &mut rng);
    let fp = by_name("deuflhard").unwrap();
    let h = 0.5;
    let steps = 100_000;

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
    let rep = unconditional_bound_check(&sys, &fp, h, &s0, &run.series).unwrap();

    println!(
        "frequencies clear the threshold: ω_min = {:.4} ≥ {:.4}",
        rep.omega_min, rep.threshold
    );
    println!(
        "state ceiling |H_mod(q₀,q̇₀)| = {:.6e}",
        rep.state_energy_bound
    );
    println!(
        "max over {steps} steps of ½‖q‖²+½‖q̇‖² stayed below it (worst slack {:.3e})",
        rep.worst_state_slack
    );
    println!("a-priori drift ceiling = {:.6e}", rep.drift_ceiling);
    println!("observed max |H drift| = {:.6e}", rep.max_abs_drift_energy);
    assert!(rep.state_bound_satisfied && rep.drift_within_ceiling);

    // and the gate: a slow system with a strong coupling is refused
    let slow = OscillatorSystem::new(
        vec![1.0, 1.0],
        random_psd_coupling(2, 4.0, &mut rng).unwrap(),
    )
    .unwrap();
    match unconditional_bound_check(&slow, &fp, h, &State::zero(2), &run.series) {
        Err(e) => println!("\nslow system refused as expected:\n  {e}"),
        Ok(_) => panic!("expected the threshold gate to refuse"),
    }
}
