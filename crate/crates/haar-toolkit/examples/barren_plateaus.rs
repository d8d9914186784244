//! Barren plateaus: variances of a random-circuit cost function and its
//! gradient, exactly and by sampling, shrinking as 1/d with qubit count.
//!
//! The cost is `C = Tr(U ρ₀ U† O)` with `U` Haar-distributed (the limit
//! the 2-design assumption buys); the gradient statistic splits `U` into
//! independent halves around a generator `H`. Means vanish, variances
//! carry the closed forms — and decay exponentially in the qubit count.
//!
//! Run with: `cargo run --release --example barren_plateaus`

use haar_toolkit::applications::{barren_plateau_experiment, BarrenConfig};
use haar_toolkit::core_linalg::{c64, kron, CMat};
use haar_toolkit::ensembles::{pauli_matrices_1q, RandomStream};
use haar_toolkit::Result;

/// `Z ⊗ I^{⊗(n−1)}` — a single-qubit observable embedded in n qubits.
fn z0(n: usize) -> CMat {
    let z = pauli_matrices_1q()[3].clone();
    if n == 1 {
        z
    } else {
        kron(&z, &CMat::identity(1 << (n - 1)))
    }
}

fn main() -> Result<()> {
    let stream = RandomStream::new(127);

    println!("cost C = Tr(UρU†Z₀), gradient via generator H = Z₀, ρ = |0…0⟩⟨0…0|\n");
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "n", "Var C (MC)", "Var C exact", "Var ∂C (MC)", "Var ∂C exact", "mean C (MC)"
    );
    let mut previous: Option<f64> = None;
    for n in 1..=4usize {
        let d = 1usize << n;
        let mut rho0 = CMat::zeros(d, d);
        rho0.set(0, 0, c64(1.0, 0.0));
        let config = BarrenConfig {
            n_qubits: n,
            observable: z0(n),
            generator: z0(n),
            initial_state: rho0,
            samples: 20000,
        };
        let report = barren_plateau_experiment(&config, stream.with_stream((n as u64) << 32))?;
        println!(
            "{:>3} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            n, report.var_c, report.exact_var_c, report.var_dc, report.exact_var_dc, report.mean_c
        );
        if let Some(prev) = previous {
            println!(
                "      gradient variance ratio vs n−1: {:.4} (Θ(1/d) decay)",
                report.exact_var_dc / prev
            );
        }
        previous = Some(report.exact_var_dc);
    }

    println!("\nclosed forms at n = 1: Var C = 1/3, Var ∂C = 8/9; every MC column");
    println!("above sits within a few standard errors of its exact value.");
    Ok(())
}
