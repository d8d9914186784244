//! Classical shadows end-to-end: collect Clifford snapshots of a state,
//! persist the log, reload it, and estimate several observables by
//! median of means — with variance bounds and the (ε, δ) sample budget.
//!
//! Run with: `cargo run --release --example classical_shadows`

use haar_toolkit::core_linalg::{c64, kron, CMat};
use haar_toolkit::ensembles::{pauli_matrices_1q, RandomStream};
use haar_toolkit::shadows::{
    collect_snapshots, estimate_from_log, sample_complexity, shadow_variance, SnapshotLog,
    VarianceMode,
};
use haar_toolkit::Result;

fn main() -> Result<()> {
    // Two qubits in the state (|00⟩ + |11⟩)/√2 — a Bell pair.
    let n = 2usize;
    let d = 1usize << n;
    let bell = {
        let mut v = CMat::zeros(d, 1);
        v.set(0, 0, c64(1.0 / 2.0f64.sqrt(), 0.0));
        v.set(3, 0, c64(1.0 / 2.0f64.sqrt(), 0.0));
        v.mul(&v.dagger())
    };

    // Observables: the stabilizers XX, ZZ (expectation +1), YY (−1),
    // and a single-qubit Z (0).
    let [_, x, y, z] = pauli_matrices_1q();
    let observables = vec![
        kron(&x, &x),
        kron(&y, &y),
        kron(&z, &z),
        kron(&z, &CMat::identity(2)),
    ];
    let names = ["XX", "YY", "ZZ", "Z⊗I"];

    // Sample budget for M = 4 observables at ε = 0.1, δ = 0.01, using the
    // worst variance bound 3·Tr(O²) = 12.
    let max_var = observables
        .iter()
        .map(|o| shadow_variance(&bell, o, VarianceMode::Bound).unwrap())
        .fold(0.0f64, f64::max);
    let (n_snapshots, k_batches) = sample_complexity(4, 0.1, 0.01, max_var)?;
    println!("sample budget for 4 observables at (ε, δ) = (0.1, 0.01), maxVar = {max_var}:");
    println!("  N = {n_snapshots} snapshots in K = {k_batches} batches\n");

    // Collect snapshots (each: a random Clifford circuit + measured
    // outcome), save the log, and reload it — estimation replays from the
    // file bit-identically.
    let log = collect_snapshots(&bell, n_snapshots, RandomStream::new(2718))?;
    let dir = std::env::temp_dir().join("haar-toolkit-shadows-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("bell_snapshots.json");
    log.save(&path)?;
    let reloaded = SnapshotLog::load(&path)?;
    println!(
        "snapshot log: {} records on {} qubits, saved to {}",
        reloaded.records.len(),
        reloaded.n_qubits,
        path.display()
    );

    // Median-of-means estimates with exact references.
    println!("\n{:>5} {:>10} {:>10} {:>12} {:>12}", "O", "estimate", "exact", "exact var", "bound");
    let estimates = estimate_from_log(&reloaded, &observables, k_batches)?;
    for (est, name) in estimates.iter().zip(names) {
        let o = &observables[est.observable_index];
        let exact = o.mul(&bell).trace().re;
        let var = shadow_variance(&bell, o, VarianceMode::Exact)?;
        let bound = shadow_variance(&bell, o, VarianceMode::Bound)?;
        println!("{:>5} {:>10.4} {:>10.1} {:>12.4} {:>12.1}", name, est.estimate, exact, var, bound);
    }

    // The empirical single-shot variance also respects the bound.
    let empirical = shadow_variance(
        &bell,
        &observables[2],
        VarianceMode::Empirical { snapshots: 20000, stream: RandomStream::new(3141) },
    )?;
    println!(
        "\nempirical single-shot variance of ZZ over 20000 fresh snapshots: {empirical:.4}"
    );
    println!(
        "exact: {:.4}, bound 3·Tr(O²): {:.1}",
        shadow_variance(&bell, &observables[2], VarianceMode::Exact)?,
        shadow_variance(&bell, &observables[2], VarianceMode::Bound)?
    );
    Ok(())
}
