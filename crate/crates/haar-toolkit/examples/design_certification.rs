//! Unitary k-design certification via frame potentials.
//!
//! The frame potential `F^(k) = E|Tr(UV†)|^{2k}` is minimized exactly by
//! k-designs at the Haar value (the commutant dimension). This example
//! certifies the textbook facts: the Pauli basis is a 1-design but not a
//! 2-design, and the Clifford group is a 3-design but not a 4-design.
//!
//! Run with: `cargo run --release --example design_certification`

use haar_toolkit::designs::{
    certify_design, design_cardinality_lower_bound, frame_potential_mc, haar_frame_potential,
    CertifyMode, DesignVerdict,
};
use haar_toolkit::ensembles::{RandomStream, UnitaryEnsemble};
use haar_toolkit::Result;

fn describe(verdict: &DesignVerdict) -> String {
    match verdict {
        DesignVerdict::Exact => "exact design".into(),
        DesignVerdict::Approximate { epsilons } => format!(
            "approximate (l2 ε = {:.3e})",
            epsilons.get("l2_deviation").copied().unwrap_or(f64::NAN)
        ),
        DesignVerdict::NotADesign { frame_gap, std_error } => {
            format!("not a design (gap = {frame_gap:.3} ± {std_error:.3})")
        }
    }
}

fn main() -> Result<()> {
    println!("exact certification (finite ensembles, exact frame potentials):\n");
    println!(
        "{:<22} {:>3} {:>14} {:>12}   verdict",
        "ensemble", "k", "frame potential", "Haar floor"
    );
    for (ensemble, name, k) in [
        (UnitaryEnsemble::PauliBasis(1), "PauliBasis(1)", 1),
        (UnitaryEnsemble::PauliBasis(1), "PauliBasis(1)", 2),
        (UnitaryEnsemble::Clifford(1), "Clifford(1)", 3),
        (UnitaryEnsemble::Clifford(1), "Clifford(1)", 4),
    ] {
        let report = certify_design(&ensemble, k, CertifyMode::Exact)?;
        println!(
            "{:<22} {:>3} {:>14.6} {:>12.1}   {}",
            name,
            k,
            report.frame_potential,
            report.haar_frame_potential,
            describe(&report.verdict)
        );
    }

    // The Clifford(1) k = 4 gap is the famous "3-design but not 4-design":
    // the frame potential strictly exceeds the d = 2 Haar floor of 14.
    let report = certify_design(&UnitaryEnsemble::Clifford(1), 4, CertifyMode::Exact)?;
    println!(
        "\nClifford(1) at k = 4: F = {:.6}, exceeds the Haar floor {} by {:.6}",
        report.frame_potential,
        report.haar_frame_potential,
        report.frame_potential - report.haar_frame_potential
    );

    // Monte-Carlo certification of the 2-qubit Clifford group at k = 3.
    let stream = RandomStream::new(31);
    let mc = certify_design(
        &UnitaryEnsemble::Clifford(2),
        3,
        CertifyMode::MonteCarlo { pairs: 20000, stream },
    )?;
    println!(
        "\nClifford(2), k = 3, MC over {} pairs: F = {:.3} ± {:.3} (Haar floor {})",
        mc.pairs.unwrap(),
        mc.frame_potential,
        mc.frame_std_error.unwrap(),
        mc.haar_frame_potential
    );
    println!("verdict: {}", describe(&mc.verdict));

    // Haar itself, estimated: F^(2) of Haar(4) must approach 2 = 2!.
    let est = frame_potential_mc(&UnitaryEnsemble::Haar(4), 2, 40000, stream.with_stream(1 << 40))?;
    println!(
        "\nHaar(4) frame potential at k = 2: {:.4} ± {:.4} (exact: {})",
        est.estimate,
        est.std_error,
        haar_frame_potential(2, 4)?
    );

    // Any exact k-design needs at least d^{2k}/k! elements.
    println!("\ncardinality lower bounds d^(2k)/k!:");
    for (k, d) in [(2usize, 2usize), (3, 2), (2, 4), (3, 4)] {
        println!("  k = {k}, d = {d}: ≥ {:.1} elements", design_cardinality_lower_bound(k, d));
    }
    Ok(())
}
