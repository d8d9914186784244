//! Clifford sampling: the 24-element single-qubit group by enumeration,
//! uniform tableau-based sampling for more qubits, and the defining
//! property that Cliffords conjugate Paulis to signed Paulis.
//!
//! Run with: `cargo run --release --example clifford_sampling`

use std::collections::BTreeMap;

use haar_toolkit::core_linalg::TOL_STRUCTURAL;
use haar_toolkit::ensembles::{clifford_group_1q, sample_clifford, RandomStream};
use haar_toolkit::Result;

fn main() -> Result<()> {
    // The full single-qubit Clifford group, modulo global phase.
    let group = clifford_group_1q();
    println!("single-qubit Clifford group: {} elements", group.len());
    let circuit_lengths: BTreeMap<usize, usize> =
        group.iter().fold(BTreeMap::new(), |mut acc, e| {
            *acc.entry(e.circuit().len()).or_default() += 1;
            acc
        });
    println!("elements by {{H, S}}-circuit length: {circuit_lengths:?}");

    // Uniformity of the sampler at n = 1: match samples to group elements
    // and count hits per class.
    let stream = RandomStream::new(5);
    let n_samples = 24_000u64;
    let mut counts = vec![0usize; group.len()];
    for i in 0..n_samples {
        let sample = sample_clifford(1, stream.with_stream(i))?;
        let idx = group
            .iter()
            .position(|e| e.matrix().max_abs_diff(sample.matrix()) < 1e-9)
            .expect("every sample is a group element");
        counts[idx] += 1;
    }
    let expected = n_samples as f64 / group.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    println!(
        "\nuniformity over {n_samples} samples: χ² = {chi2:.1} with {} classes (mean {expected:.0}/class)",
        group.len()
    );

    // Membership: every sampled Clifford maps each Pauli generator to a
    // signed Pauli string under conjugation.
    for n in 1..=3usize {
        let mut all_ok = true;
        for i in 0..200u64 {
            let c = sample_clifford(n, stream.with_stream(1_000_000 + 100 * n as u64 + i))?;
            all_ok &= c.conjugates_paulis_to_paulis(TOL_STRUCTURAL)?;
        }
        println!("n = {n}: 200/200 samples conjugate Paulis to signed Paulis: {all_ok}");
    }

    // Circuits are the ground truth: rebuilding from the recorded gate
    // list reproduces the matrix bit-for-bit.
    let c = sample_clifford(2, stream.with_stream(99))?;
    let rebuilt = haar_toolkit::ensembles::CliffordElement::from_circuit(
        c.n_qubits(),
        c.circuit().to_vec(),
    )?;
    println!(
        "\nsampled 2-qubit Clifford: {} gates, rebuild from circuit is bit-identical: {}",
        c.circuit().len(),
        rebuilt.matrix().max_abs_diff(c.matrix()) == 0.0
    );
    Ok(())
}
