//! Polynomial averages over Haar-random states, and the U ⊗ Ū twirl of a
//! bipartite state — both exact, via cycle counting and second-moment
//! machinery rather than brute-force integration.
//!
//! `E⟨ψ|O|ψ⟩^k` expands into permutation cycle products of power traces
//! of `O`, divided by the symmetric-subspace dimension; the conjugate
//! twirl collapses any bipartite state onto the two-dimensional family
//! spanned by the identity and the maximally entangled projector.
//!
//! Run with: `cargo run --release --example state_polynomials`

use haar_toolkit::applications::{
    conjugate_twirl_state, expectation_moment, expectation_second_moment_closed_form,
};
use haar_toolkit::core_linalg::{c64, kron, CMat};
use haar_toolkit::ensembles::{pauli_matrices_1q, sample_haar_state, RandomStream};
use haar_toolkit::Result;

fn main() -> Result<()> {
    // Moments of ⟨ψ|Z|ψ⟩ for a Haar qubit state: odd moments vanish,
    // E⟨Z⟩² = 1/3 (the qubit Bloch vector is uniform on the sphere).
    let z = pauli_matrices_1q()[3].clone();
    println!("moments of ⟨ψ|Z|ψ⟩ for Haar-random qubit states:");
    for k in 1..=4 {
        println!("  E⟨Z⟩^{k} = {:+.9}", expectation_moment(&z, k)?);
    }
    println!(
        "  (closed form at k = 2: (Tr(Z)² + Tr(Z²))/(d(d+1)) = {:.9})",
        expectation_second_moment_closed_form(&z)?
    );

    // Monte-Carlo check of the third moment for a non-trivial observable.
    let o = CMat::from_fn(3, 3, |i, j| {
        if i == j {
            c64(i as f64 - 1.0, 0.0)
        } else {
            c64(0.2, if i < j { 0.1 } else { -0.1 })
        }
    });
    let exact = expectation_moment(&o, 3)?;
    let stream = RandomStream::new(99);
    let n = 200_000u64;
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for i in 0..n {
        let psi = sample_haar_state(3, stream.with_stream(i));
        let cubed = psi.dagger().mul(&o).mul(&psi).get(0, 0).re.powi(3);
        acc += cubed;
        acc_sq += cubed * cubed;
    }
    let mean = acc / n as f64;
    let se = ((acc_sq / n as f64 - mean * mean) / (n as f64 - 1.0)).sqrt();
    println!(
        "\nE⟨O⟩³ for a 3×3 Hermitian O: exact {exact:.9}, MC over {n} states {mean:.9} ± {se:.9}",
    );

    // Conjugate twirl: E[(U ⊗ Ū) ρ (U ⊗ Ū)†] lands on the family
    // p·I/d² + (1 − p)·|Ω⟩⟨Ω|/d for every input ρ.
    let d = 2usize;
    let ee = {
        // |01⟩⟨01| — a product basis state of the two qubits.
        let mut m = CMat::zeros(d * d, d * d);
        m.set(1, 1, c64(1.0, 0.0));
        m
    };
    let (p, twirled) = conjugate_twirl_state(&ee)?;
    println!("\nconjugate twirl of |01⟩⟨01|: p = {p:.9}");
    let omega = {
        let mut v = CMat::zeros(d * d, 1);
        v.set(0, 0, c64(1.0, 0.0));
        v.set(3, 0, c64(1.0, 0.0));
        v
    };
    let family = CMat::identity(d * d)
        .scale_re(p / (d * d) as f64)
        .add(&omega.mul(&omega.dagger()).scale_re((1.0 - p) / d as f64));
    println!("distance to the I/|Ω⟩⟨Ω| family: {:.3e}", twirled.max_abs_diff(&family));

    // Fixed points: the maximally entangled state has p = 0, the
    // maximally mixed state p = 1.
    let (p_omega, _) = conjugate_twirl_state(&omega.mul(&omega.dagger()).scale_re(1.0 / d as f64))?;
    let (p_mixed, _) = conjugate_twirl_state(&CMat::identity(d * d).scale_re(1.0 / (d * d) as f64))?;
    println!("p for |Ω⟩⟨Ω|/d: {p_omega:.3e}   p for I/d²: {p_mixed:.9}");

    // Entanglement witness flavor: the twirl of an entangled state keeps
    // weight on |Ω⟩⟨Ω|, a separable one does not go below p = ... — show
    // the p values side by side.
    let x = pauli_matrices_1q()[1].clone();
    let entangled = {
        // (|00⟩ + |11⟩)/√2 rotated by X on the second qubit.
        let rot = kron(&CMat::identity(2), &x);
        let v = rot.mul(&omega).scale_re(1.0 / (d as f64).sqrt());
        v.mul(&v.dagger())
    };
    let (p_ent, _) = conjugate_twirl_state(&entangled)?;
    println!("p for an X-rotated Bell state: {p_ent:.9} (entanglement moved it off 0)");
    Ok(())
}
