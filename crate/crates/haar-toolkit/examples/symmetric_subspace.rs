//! The symmetric subspace: projector identities, dimension counting, and
//! the Haar average over pure states.
//!
//! `P_sym = (1/k!) Σ_π V(π)` projects onto the symmetric subspace of
//! dimension `binom(d+k−1, k)`, and the k-th moment of a Haar-random
//! pure state is the normalized symmetric projector
//! `E[(|ψ⟩⟨ψ|)^{⊗k}] = P_sym / dim Sym_k`.
//!
//! Run with: `cargo run --release --example symmetric_subspace`

use haar_toolkit::applications::overlap_moment;
use haar_toolkit::core_linalg::CMat;
use haar_toolkit::subspaces::{asym_dim, haar_state_moment, p_asym, p_sym, sym_dim};
use haar_toolkit::Result;

fn main() -> Result<()> {
    println!("dimensions of Sym_k and Asym_k inside (C^d)^{{⊗k}}:");
    println!("{:>4} {:>4} {:>10} {:>10} {:>10}", "d", "k", "sym", "asym", "d^k");
    for (d, k) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (5, 3)] {
        println!(
            "{:>4} {:>4} {:>10} {:>10} {:>10}",
            d,
            k,
            sym_dim(d, k),
            asym_dim(d, k),
            (d as u64).pow(k as u32)
        );
    }

    // Projector identities at (d, k) = (3, 2): idempotent, orthogonal,
    // traces equal to the dimensions.
    let (d, k) = (3usize, 2usize);
    let ps = p_sym(d, k)?;
    let pa = p_asym(d, k)?;
    let ps: &CMat = &ps;
    let pa: &CMat = &pa;
    println!("\nprojector identities at (d, k) = ({d}, {k}):");
    println!("  ‖P_sym² − P_sym‖_max   = {:.3e}", ps.mul(ps).max_abs_diff(ps));
    println!("  ‖P_sym · P_asym‖_max   = {:.3e}", ps.mul(pa).max_abs());
    println!("  Tr P_sym  = {:.12}  (dim = {})", ps.trace().re, sym_dim(d, k));
    println!("  Tr P_asym = {:.12}  (dim = {})", pa.trace().re, asym_dim(d, k));
    // At k = 2 the two projectors resolve the identity.
    let sum = ps.add(pa);
    println!(
        "  ‖P_sym + P_asym − I‖_max = {:.3e}  (k = 2 only)",
        sum.max_abs_diff(&CMat::identity(d * d))
    );

    // Haar state moment = P_sym / dim Sym_k.
    let moment = haar_state_moment(d, k)?;
    let uniform = ps.scale_re(1.0 / sym_dim(d, k) as f64);
    println!(
        "\nE[(|ψ⟩⟨ψ|)^⊗{k}] vs P_sym/dim: ‖Δ‖_max = {:.3e}",
        moment.max_abs_diff(&uniform)
    );

    // Overlap moments E|⟨ψ|φ⟩|^{2k} = 1/binom(d+k−1, k) follow directly.
    println!("\noverlap moments E|⟨ψ|φ⟩|^(2k) = 1/dim Sym_k:");
    for (d, k) in [(2usize, 1usize), (2, 2), (3, 2), (4, 3)] {
        println!(
            "  d = {d}, k = {k}:  {:.12}  = 1/{}",
            overlap_moment(k, d)?,
            sym_dim(d, k)
        );
    }
    Ok(())
}
