//! Average entanglement of Haar-random bipartite pure states: the exact
//! expected subsystem purity `(d_A + d_B)/(d_A·d_B + 1)` and the Page
//! entropy, cross-checked by sampling.
//!
//! Run with: `cargo run --release --example purity_page`

use haar_toolkit::applications::{expected_purity, page_entropy};
use haar_toolkit::core_linalg::{partial_trace, SubsystemDims};
use haar_toolkit::ensembles::{sample_haar_state, RandomStream};
use haar_toolkit::Result;

fn main() -> Result<()> {
    println!("expected subsystem purity and Page entropy of Haar bipartite states:\n");
    println!(
        "{:>4} {:>4} {:>16} {:>18} {:>16}",
        "dA", "dB", "E Tr(ρ_A²)", "Page entropy/bits", "log2(dA)"
    );
    for (da, db) in [(2usize, 2usize), (2, 4), (2, 8), (3, 9), (4, 16), (8, 8)] {
        println!(
            "{:>4} {:>4} {:>16.9} {:>18.9} {:>16.4}",
            da,
            db,
            expected_purity(da, db)?,
            page_entropy(da, db)?,
            (da as f64).log2()
        );
    }
    println!("\n(the subsystem looks nearly maximally mixed once dB ≫ dA — its");
    println!("entropy sits within dA/(2·dB·ln2) bits of the log2(dA) maximum)");

    // Monte-Carlo check at (2, 2): the classic 4/5.
    let (da, db) = (2usize, 2usize);
    let dims = SubsystemDims::new(vec![da, db])?;
    let stream = RandomStream::new(23);
    let n = 50_000u64;
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for i in 0..n {
        let psi = sample_haar_state(da * db, stream.with_stream(i));
        let rho = psi.mul(&psi.dagger());
        let reduced = partial_trace(&rho, &dims, &[0])?;
        let purity = reduced.mul(&reduced).trace().re;
        acc += purity;
        acc_sq += purity * purity;
    }
    let mean = acc / n as f64;
    let se = ((acc_sq / n as f64 - mean * mean) / (n as f64 - 1.0)).sqrt();
    println!(
        "\nMC purity at (2, 2) over {n} states: {mean:.6} ± {se:.6}  (exact (dA+dB)/(dA·dB+1) = {})",
        expected_purity(2, 2)?
    );
    Ok(())
}
