//! Second-order convergence of the integrator against the exact propagator
//! built from the Hermitian eigendecomposition.
//!
//! ```bash
//! cargo run --release --example convergence_order
//! ```

use oscint::cvec;
use oscint::filters::by_name;
use oscint::integrator::{integrate, IntegratorConfig, RecordOptions};
use oscint::oracle::{brute_force, exact_solution};
use oscint::runner::{random_psd_coupling, random_state};
use oscint::system::{Forcing, OscillatorSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let omegas = vec![0.0, 1.0, 2.5, 5.0, 7.5, 10.0];
    let coupling = random_psd_coupling(6, 1.0, &mut rng).unwrap();
    let sys = OscillatorSystem::new(omegas, coupling).unwrap();
    let s0 = random_state(6, &mut rng);
    let t_end = 1.0;

    let exact = exact_solution(&sys, &s0, t_end).unwrap();
    // cross-check the oracle against a fourth-order reference
    let bf = brute_force(&sys, &Forcing::Linear, &s0, t_end, 2000).unwrap();
    let oracle_cross = cvec::max_abs_diff(&exact.q, &bf.state.q);
    println!(
        "oracle vs brute-force reference: {:.3e} (estimate {:.3e})\n",
        oracle_cross, bf.error_estimate
    );

    for filter in ["deuflhard", "hairer-lubich"] {
        let fp = by_name(filter).unwrap();
        println!("{filter}:");
        println!("  {:<10} {:>14} {:>8}", "h", "error at T=1", "order");
        let mut prev: Option<f64> = None;
        for &h in &[0.1, 0.05, 0.025, 0.0125] {
            let steps = (t_end / h).round() as usize;
            let cfg = IntegratorConfig::new(h, fp.clone()).unwrap();
            let run = integrate(
                &sys,
                &Forcing::Linear,
                &cfg,
                &s0,
                steps,
                &RecordOptions::default(),
            )
            .unwrap();
            let err = cvec::max_abs_diff(&run.final_state.q, &exact.q)
                .max(cvec::max_abs_diff(&run.final_state.qdot, &exact.qdot));
            match prev {
                Some(p) => println!("  {h:<10} {err:>14.6e} {:>8.3}", (p / err).log2()),
                None => println!("  {h:<10} {err:>14.6e} {:>8}", "-"),
            }
            prev = Some(err);
        }
        println!();
    }
}
