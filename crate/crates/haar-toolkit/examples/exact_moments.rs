//! Exact Haar moments of observables, three ways: the Weingarten route,
//! the k ≤ 2 closed forms, and a Monte-Carlo average — all agreeing.
//!
//! The k-th moment operator `M(O) = E[U^{⊗k} O U^{†⊗k}]` projects `O`
//! onto the span of permutation operators; for k = 1 that is `Tr(O)/d·I`
//! and for k = 2 a two-term combination of the identity and the flip.
//!
//! Run with: `cargo run --release --example exact_moments`

use haar_toolkit::core_linalg::{c64, kron_power, CMat};
use haar_toolkit::ensembles::{sample_haar_unitary, RandomStream};
use haar_toolkit::weingarten::{
    entry_moment, first_moment_closed_form, moment_apply_exact, second_moment_closed_form,
};
use haar_toolkit::Result;

fn main() -> Result<()> {
    let d = 3;

    // A fixed non-Hermitian observable on one copy.
    let o1 = CMat::from_fn(d, d, |i, j| c64((i + 1) as f64, (j as f64) - 1.0));
    let m1 = moment_apply_exact(&o1, 1, d)?;
    let closed1 = first_moment_closed_form(&o1, d)?;
    println!("k = 1: ‖Weingarten − closed form‖_max = {:.3e}", m1.max_abs_diff(&closed1));
    println!("       M(O) = Tr(O)/d · I, here Tr(O)/d = {}", o1.trace() / d as f64);

    // Second moment on two copies: O = A ⊗ B for fixed A, B.
    let a = CMat::from_fn(d, d, |i, j| c64((i * d + j) as f64 / 4.0, 0.5 - i as f64));
    let b = CMat::from_fn(d, d, |i, j| c64(if i == j { 2.0 } else { -0.3 }, j as f64 / 2.0));
    let o2 = haar_toolkit::core_linalg::kron(&a, &b);
    let m2 = moment_apply_exact(&o2, 2, d)?;
    let closed2 = second_moment_closed_form(&o2, d)?;
    println!("k = 2: ‖Weingarten − closed form‖_max = {:.3e}", m2.max_abs_diff(&closed2));

    // Monte-Carlo cross-check of the second moment at d = 2.
    let d = 2;
    let o = CMat::from_fn(d * d, d * d, |i, j| c64(1.0 / (1 + i + j) as f64, (i as f64) - (j as f64)));
    let exact = moment_apply_exact(&o, 2, d)?;
    let n = 20000u64;
    let stream = RandomStream::new(11);
    let mut mean = CMat::zeros(d * d, d * d);
    for i in 0..n {
        let u2 = kron_power(&sample_haar_unitary(d, stream.with_stream(i)), 2);
        mean = mean.add(&u2.mul(&o).mul(&u2.dagger()));
    }
    mean = mean.scale_re(1.0 / n as f64);
    println!(
        "k = 2 Monte-Carlo over {n} Haar samples: ‖mean − exact‖_max = {:.3e} (≈ N^(-1/2))",
        mean.max_abs_diff(&exact)
    );

    // Matrix-entry moments: E[u_00 ū_00] = 1/d and E[|u_00|⁴] = 2/(d(d+1)).
    let d = 4;
    let second = entry_moment(&[0], &[0], &[0], &[0], d)?;
    let fourth = entry_moment(&[0, 0], &[0, 0], &[0, 0], &[0, 0], d)?;
    println!("\nentry moments at d = {d}:");
    println!("  E|u00|² = {:+.12}   expected {:+.12}", second.re, 1.0 / d as f64);
    println!(
        "  E|u00|⁴ = {:+.12}   expected {:+.12}",
        fourth.re,
        2.0 / (d as f64 * (d as f64 + 1.0))
    );
    // Unbalanced index patterns vanish identically.
    let unbalanced = entry_moment(&[0], &[0], &[], &[], d)?;
    println!("  E[u00] = {:+.3e} (vanishes: no conjugate factor to balance)", unbalanced.re);
    Ok(())
}
