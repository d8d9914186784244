//! Weingarten tables: the coefficient data behind every exact Haar moment.
//!
//! For each moment order `k` the table holds one coefficient per
//! permutation in `S_k`, obtained by pseudo-inverting the Gram matrix
//! `G[π, σ] = d^{#cycles(π⁻¹σ)}`. Coefficients depend only on the cycle
//! type, and for `k > d` the Gram matrix becomes singular — the
//! pseudo-inverse keeps working and the rank drops to the commutant
//! dimension.
//!
//! Run with: `cargo run --release --example weingarten_tables`

use haar_toolkit::weingarten::weingarten_table;
use haar_toolkit::Result;

fn main() -> Result<()> {
    for (k, d) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let table = weingarten_table(k, d)?;
        println!(
            "Wg(k = {k}, d = {d})   Gram rank {} / {} permutations",
            table.rank(),
            table.perms().len()
        );
        for (perm, w) in table.coefficients() {
            println!(
                "  π = {:?}   cycle type {:?}   Wg = {:+.12}",
                perm.mapping(),
                perm.cycle_type(),
                w
            );
        }
        println!();
    }

    // The k = 2 closed form everyone quotes: Wg(e) = 1/(d²−1),
    // Wg(swap) = −1/(d(d²−1)). At d = 2 that is 1/3 and −1/6.
    let table = weingarten_table(2, 2)?;
    let perms = table.perms().to_vec();
    let identity = perms.iter().find(|p| p.is_identity()).unwrap();
    let swap = perms.iter().find(|p| !p.is_identity()).unwrap();
    println!("closed-form check at (k, d) = (2, 2):");
    println!(
        "  Wg(e)    = {:+.12}   expected {:+.12}",
        table.coefficient(identity).unwrap(),
        1.0 / 3.0
    );
    println!(
        "  Wg(swap) = {:+.12}   expected {:+.12}",
        table.coefficient(swap).unwrap(),
        -1.0 / 6.0
    );

    // k > d: the permutation operators become linearly dependent. At
    // (k, d) = (3, 2) the rank falls from 3! = 6 to the commutant
    // dimension 5 — exactly the Haar frame potential of that regime.
    let singular = weingarten_table(3, 2)?;
    println!(
        "\nsingular regime (k, d) = (3, 2): rank {} < {} = 3!",
        singular.rank(),
        singular.perms().len()
    );
    Ok(())
}
