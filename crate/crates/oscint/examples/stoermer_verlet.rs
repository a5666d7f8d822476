//! The Ω = 0 reduction: with φ ≡ 1 and ψ₁ = sinc the integrator collapses to
//! the classical leapfrog scheme, and its known discrete energy
//! ½‖(q_{n+1}-q_n)/h‖² + ½Re(q_{n+1}* A q_n) is a constant of motion that
//! coincides with the modified energy after the velocity substitution.
//!
//! ```bash
//! cargo run --release --example stoermer_verlet
//! ```

use num_complex::Complex64 as C64;
use oscint::filters::by_name;
use oscint::integrator::{
    step_splitting, stoermer_verlet_discrete_energy, IntegratorConfig, StepWorkspace,
};
use oscint::linalg::CMatrix;
use oscint::runner::{random_psd_coupling, random_state};
use oscint::system::{modified_energy, Forcing, OscillatorSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let d = 3;
    let base = random_psd_coupling(d, 1.0, &mut rng).unwrap();
    let coupling = CMatrix::from_fn(d, |i, j| {
        base.get(i, j)
            + if i == j {
                C64::new(0.5, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
    });
    let sys = OscillatorSystem::new(vec![0.0; d], coupling).unwrap();
    let fp = by_name("deuflhard").unwrap();
    let h = 0.1;
    let cfg = IntegratorConfig::new(h, fp.clone()).unwrap();
    let ws = StepWorkspace::new(&sys, &cfg);

    let mut s = random_state(d, &mut rng);
    let h_mod = modified_energy(&sys, &fp, h, &s).unwrap();
    println!("modified energy at start:        {h_mod:.15}");

    let mut discrete0: Option<f64> = None;
    let mut worst = 0.0f64;
    for n in 0..10_000 {
        let next = step_splitting(&sys, &Forcing::Linear, &cfg, &ws, &s).unwrap();
        let e = stoermer_verlet_discrete_energy(&sys, h, &s.q, &next.q).unwrap();
        match discrete0 {
            None => {
                println!("leapfrog discrete energy (n=0):  {e:.15}");
                println!(
                    "agreement with modified energy:  {:.3e} relative\n",
                    (e - h_mod).abs() / h_mod.abs()
                );
                discrete0 = Some(e);
            }
            Some(e0) => worst = worst.max((e - e0).abs() / e0.abs()),
        }
        if n % 2000 == 1999 {
            println!(
                "after {:>5} steps: worst relative wobble {worst:.3e}",
                n + 1
            );
        }
        s = next;
    }

    // the reduction refuses systems with genuine oscillatory frequencies
    let oscillatory = OscillatorSystem::uncoupled(vec![0.0, 3.0]);
    let q = vec![C64::new(1.0, 0.0); 2];
    match stoermer_verlet_discrete_energy(&oscillatory, h, &q, &q) {
        Err(e) => println!("\nnonzero frequency refused as expected: {e}"),
        Ok(_) => panic!("expected refusal"),
    }
}
