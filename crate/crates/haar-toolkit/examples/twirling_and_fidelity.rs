//! Twirling a channel over the Haar measure collapses it to a
//! depolarizing channel with the same entanglement fidelity — computed
//! here exactly (no sampling) via second-moment machinery, then verified
//! against a Monte-Carlo twirl and the fidelity closed forms.
//!
//! Run with: `cargo run --release --example twirling_and_fidelity`

use haar_toolkit::applications::{
    average_gate_fidelity, entanglement_fidelity, twirl_apply_exact,
    twirl_depolarizing_parameter, ChannelKraus,
};
use haar_toolkit::core_linalg::{c64, CMat};
use haar_toolkit::ensembles::{sample_haar_unitary, RandomStream};
use haar_toolkit::Result;

fn main() -> Result<()> {
    let d = 2;
    let stream = RandomStream::new(17);

    // A random channel from a Stinespring dilation, and its twirl data.
    let channel = ChannelKraus::random(d, d, stream)?;
    let fe = entanglement_fidelity(&channel);
    let p = twirl_depolarizing_parameter(&channel)?;
    println!("random qubit channel with {} Kraus operators", channel.kraus().len());
    println!("  entanglement fidelity  F_e = {fe:.9}");
    println!("  depolarizing parameter p_Φ = (d²F_e − 1)/(d² − 1) = {p:.9}");

    // Exact twirl: E_U[U† Φ(U ρ U†) U] applied to a test state equals the
    // depolarizing action p·ρ + (1 − p)·I/d.
    let rho = {
        let mut m = CMat::zeros(d, d);
        m.set(0, 0, c64(0.7, 0.0));
        m.set(1, 1, c64(0.3, 0.0));
        m.set(0, 1, c64(0.2, 0.1));
        m.set(1, 0, c64(0.2, -0.1));
        m
    };
    let twirled = twirl_apply_exact(&channel, &rho)?;
    let depolarized = rho.scale_re(p).add(&CMat::identity(d).scale_re((1.0 - p) / d as f64));
    println!(
        "  exact twirl vs depolarizing action: ‖Δ‖_max = {:.3e}",
        twirled.max_abs_diff(&depolarized)
    );

    // Monte-Carlo twirl over Haar samples converges to the same output.
    let n = 20000u64;
    let mut mean = CMat::zeros(d, d);
    for i in 0..n {
        let u = sample_haar_unitary(d, stream.with_stream(1000 + i));
        let pushed = channel.apply(&u.mul(&rho).mul(&u.dagger()))?;
        mean = mean.add(&u.dagger().mul(&pushed).mul(&u));
    }
    mean = mean.scale_re(1.0 / n as f64);
    println!(
        "  Monte-Carlo twirl over {n} samples: ‖mean − exact‖_max = {:.3e}",
        mean.max_abs_diff(&twirled)
    );

    // Twirling preserves the entanglement fidelity: F_e(D_pΦ) = F_e(Φ).
    // (Our Kraus depolarizing constructor needs p ∈ [0, 1]; random
    // Stinespring channels can have slightly negative p_Φ, so build the
    // comparison from a unitary-biased channel with a solidly positive p.)
    let biased = {
        let v = sample_haar_unitary(d, stream.with_stream(500_000));
        let mut kraus = vec![v.scale_re(0.85f64.sqrt())];
        for k in ChannelKraus::fully_depolarizing(d)?.kraus() {
            kraus.push(k.scale_re(0.15f64.sqrt()));
        }
        ChannelKraus::new(kraus)?
    };
    let p_biased = twirl_depolarizing_parameter(&biased)?;
    let depol = ChannelKraus::depolarizing(d, p_biased)?;
    println!(
        "\nfidelity is twirl-invariant: F_e(Φ) = {:.9}, F_e(D_pΦ) = {:.9}",
        entanglement_fidelity(&biased),
        entanglement_fidelity(&depol)
    );

    // Average gate fidelity and its relation F_avg = (d·F_e + 1)/(d + 1).
    let favg = average_gate_fidelity(&biased, &CMat::identity(d))?;
    let fe_b = entanglement_fidelity(&biased);
    println!("\naverage gate fidelity vs identity: {favg:.9}");
    println!("(d·F_e + 1)/(d + 1)              = {:.9}", (d as f64 * fe_b + 1.0) / (d as f64 + 1.0));
    let fully = ChannelKraus::fully_depolarizing(2)?;
    println!(
        "fully depolarizing qubit channel:  {:.9} (exactly 1/2)",
        average_gate_fidelity(&fully, &CMat::identity(2))?
    );
    Ok(())
}
