//! Seeded samplers and enumerators for every unitary/state distribution in
//! the toolkit: Haar, finite uniform sets, the Pauli basis, random Cliffords,
//! and product-of-samples ensembles.
//!
//! * **Haar unitaries** are drawn by QR-factorizing a complex Ginibre matrix
//!   and rescaling each column of `Q` by the phase of the matching diagonal
//!   entry of `R`, so the effective `R` has positive diagonal. Plain QR is
//!   *not* Haar-distributed — the phase fix is what removes the dependence on
//!   the factorization's sign conventions (Mezzadri, arXiv:math-ph/0609050).
//! * **Haar states** are normalized complex Gaussian vectors.
//! * **Reproducibility** comes from counter-based substreams: every sampler
//!   takes a [`RandomStream`] `(seed, stream_id)`, and parallel Monte-Carlo
//!   loops assign `stream_id = sample index`, so results are bit-identical
//!   for any thread count.
//! * **Random Cliffords** are sampled exactly uniformly (modulo global
//!   phase) via a stabilizer-tableau sweep; see the [`clifford`] submodule.
//!
//! Finite ensembles with explicit members load and save as manifest files:
//! a JSON document listing per-member matrix files (repo matrix format) and
//! weights.

pub mod clifford;

pub use clifford::{clifford_group_1q, sample_clifford, CliffordElement, CliffordGate};

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::core_linalg::{c64, kron, CMat, TOL_STRUCTURAL};
use crate::error::{Error, Result};

/// Cap on `n` for the dense Pauli basis (`4^6 = 4096` matrices).
pub const MAX_PAULI_QUBITS: usize = 6;

/// A reproducible randomness source: a 64-bit seed plus a 64-bit substream
/// selector. The same `(seed, stream_id)` reproduces the identical sample
/// sequence bit-for-bit; distinct stream ids give statistically independent
/// streams, which is what makes parallel Monte Carlo deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomStream {
    /// Base seed shared by a whole experiment.
    pub seed: u64,
    /// Substream selector (sample index in Monte-Carlo loops).
    pub stream_id: u64,
}

impl RandomStream {
    /// Stream 0 of a seed.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    /// The same seed on a different substream.
    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One standard normal via Box–Muller (consumes two uniforms per call; the
/// transform is pinned here so sequences never depend on an external
/// library's sampling internals).
pub(crate) fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]: log is finite
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A complex standard normal entry (independent real and imaginary parts).
pub(crate) fn complex_normal(rng: &mut ChaCha12Rng) -> Complex64 {
    c64(standard_normal(rng), standard_normal(rng))
}

/// Draws a Haar-distributed unitary on `U(d)`: Ginibre → QR → column phase
/// fix `U = Q · diag(R_jj/|R_jj|)`.
pub fn sample_haar_unitary(d: usize, stream: RandomStream) -> CMat {
    let mut rng = stream.rng();
    let g = CMat::from_fn(d, d, |_, _| complex_normal(&mut rng));
    let (q, r) = crate::core_linalg::qr(&g);
    CMat::from_fn(d, d, |i, j| {
        let rjj = r.get(j, j);
        let phase = if rjj.norm() <= f64::MIN_POSITIVE {
            c64(1.0, 0.0)
        } else {
            rjj / rjj.norm()
        };
        q.get(i, j) * phase
    })
}

/// Draws a Haar-distributed pure state on `ℂ^d` (unit column vector).
pub fn sample_haar_state(d: usize, stream: RandomStream) -> CMat {
    let mut rng = stream.rng();
    loop {
        let v = CMat::from_fn(d, 1, |_, _| complex_normal(&mut rng));
        let norm = v.vector_norm();
        if norm > 1e-150 {
            return v.scale_re(1.0 / norm);
        }
    }
}

/// The single-qubit Pauli matrices `[I, X, Y, Z]`.
pub fn pauli_matrices_1q() -> [CMat; 4] {
    let i = CMat::identity(2);
    let x = CMat::new(2, 2, vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
        .expect("static shape");
    let y = CMat::new(2, 2, vec![c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)])
        .expect("static shape");
    let z = CMat::new(2, 2, vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)])
        .expect("static shape");
    [i, x, y, z]
}

/// The `4^n` Pauli strings on `n` qubits in lexicographic `[I, X, Y, Z]`
/// digit order (identity first). Pairwise Hilbert–Schmidt orthogonal with
/// `Tr(P_i†P_j) = 2^n δ_{ij}`.
pub fn pauli_basis(n: usize) -> Result<Vec<CMat>> {
    if n == 0 || n > MAX_PAULI_QUBITS {
        return Err(Error::ResourceCap(format!(
            "Pauli basis supports 1..={MAX_PAULI_QUBITS} qubits, got {n}"
        )));
    }
    let singles = pauli_matrices_1q();
    let count = 4usize.pow(n as u32);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut m: Option<CMat> = None;
        for q in 0..n {
            // Most significant digit = qubit 0 (first tensor factor).
            let digit = (idx >> (2 * (n - 1 - q))) & 0b11;
            m = Some(match m {
                None => singles[digit].clone(),
                Some(acc) => kron(&acc, &singles[digit]),
            });
        }
        out.push(m.expect("n >= 1"));
    }
    Ok(out)
}

/// A finite ensemble: explicit unitary members with probability weights.
#[derive(Debug, Clone)]
pub struct FiniteEnsemble {
    members: Vec<CMat>,
    weights: Vec<f64>,
}

impl FiniteEnsemble {
    /// Uniform weights over the given unitaries.
    pub fn uniform(members: Vec<CMat>) -> Result<Self> {
        let n = members.len();
        if n == 0 {
            return Err(Error::Invalid("ensemble needs at least one member".into()));
        }
        Self::weighted(members, vec![1.0 / n as f64; n])
    }

    /// Explicit weights: nonnegative, summing to 1 within `1e-12`; members
    /// unitary within structural tolerance.
    pub fn weighted(members: Vec<CMat>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() || members.len() != weights.len() {
            return Err(Error::Invalid(
                "weights and members must be non-empty and of equal length".into(),
            ));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "weights must sum to 1 within 1e-12, got {total}"
            )));
        }
        let d = members[0].rows();
        for (i, m) in members.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Dimension(format!(
                    "member {i} has shape {}x{}, expected {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_unitary(TOL_STRUCTURAL) {
                return Err(Error::Invalid(format!("member {i} is not unitary")));
            }
        }
        Ok(Self { members, weights })
    }

    /// The member unitaries.
    pub fn members(&self) -> &[CMat] {
        &self.members
    }

    /// The probability weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Common dimension of all members.
    pub fn dim(&self) -> usize {
        self.members[0].rows()
    }

    /// Draws one member by inverse-CDF over the weights.
    pub fn sample(&self, stream: RandomStream) -> CMat {
        let mut rng = stream.rng();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (m, &w) in self.members.iter().zip(&self.weights) {
            acc += w;
            if u < acc {
                return m.clone();
            }
        }
        self.members.last().expect("non-empty").clone()
    }

    /// Writes a manifest (JSON) plus one matrix file per member next to it.
    /// Matrix files are named `<stem>_member_<i>.json` and referenced
    /// relative to the manifest's directory.
    pub fn save_manifest(&self, manifest_path: impl AsRef<Path>) -> Result<()> {
        let manifest_path = manifest_path.as_ref();
        let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        let stem = manifest_path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("ensemble");
        let mut entries = Vec::with_capacity(self.members.len());
        for (i, (m, &w)) in self.members.iter().zip(&self.weights).enumerate() {
            let file = format!("{stem}_member_{i}.json");
            m.save(dir.join(&file))?;
            entries.push(ManifestEntry { path: file, weight: w });
        }
        let manifest = Manifest {
            schema_version: 1,
            kind: "finite_uniform".into(),
            members: entries,
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Parse(format!("manifest serialization: {e}")))?;
        std::fs::write(manifest_path, text)?;
        Ok(())
    }

    /// Loads a manifest written by [`FiniteEnsemble::save_manifest`]
    /// (member paths resolved relative to the manifest's directory).
    pub fn load_manifest(manifest_path: impl AsRef<Path>) -> Result<Self> {
        let manifest_path = manifest_path.as_ref();
        let text = std::fs::read_to_string(manifest_path)?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        if manifest.kind != "finite_uniform" {
            return Err(Error::Parse(format!(
                "unsupported ensemble kind '{}'",
                manifest.kind
            )));
        }
        let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        let mut members = Vec::with_capacity(manifest.members.len());
        let mut weights = Vec::with_capacity(manifest.members.len());
        for entry in &manifest.members {
            members.push(CMat::load(dir.join(&entry.path))?);
            weights.push(entry.weight);
        }
        Self::weighted(members, weights)
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    kind: String,
    members: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    path: String,
    weight: f64,
}

/// A distribution over unitaries.
#[derive(Debug, Clone)]
pub enum UnitaryEnsemble {
    /// The Haar measure on `U(d)`.
    Haar(usize),
    /// A finite weighted set of explicit unitaries.
    FiniteUniform(FiniteEnsemble),
    /// The uniform distribution over the `4^n` Pauli strings.
    PauliBasis(usize),
    /// The uniform distribution over the `n`-qubit Clifford group
    /// (modulo global phase).
    Clifford(usize),
    /// Products of `P` independent samples from the inner ensemble
    /// (the amplification construction: the moment operator is the `P`-th
    /// power of the inner one).
    ProductPower(Box<UnitaryEnsemble>, usize),
}

impl UnitaryEnsemble {
    /// Hilbert-space dimension of the sampled unitaries.
    pub fn dim(&self) -> usize {
        match self {
            Self::Haar(d) => *d,
            Self::FiniteUniform(f) => f.dim(),
            Self::PauliBasis(n) => 1 << n,
            Self::Clifford(n) => 1 << n,
            Self::ProductPower(inner, _) => inner.dim(),
        }
    }

    /// A short human-readable tag for reports.
    pub fn describe(&self) -> String {
        match self {
            Self::Haar(d) => format!("haar(d={d})"),
            Self::FiniteUniform(f) => format!("finite({} members, d={})", f.members().len(), f.dim()),
            Self::PauliBasis(n) => format!("pauli_basis(n={n})"),
            Self::Clifford(n) => format!("clifford(n={n})"),
            Self::ProductPower(inner, p) => format!("product_power({}, P={p})", inner.describe()),
        }
    }

    /// Explicit `(member, weight)` enumeration, where finitely possible:
    /// finite sets, Pauli bases, and the 1-qubit Clifford group.
    pub fn enumerate_weighted(&self) -> Result<Vec<(CMat, f64)>> {
        match self {
            Self::FiniteUniform(f) => Ok(f
                .members()
                .iter()
                .cloned()
                .zip(f.weights().iter().copied())
                .collect()),
            Self::PauliBasis(n) => {
                let basis = pauli_basis(*n)?;
                let w = 1.0 / basis.len() as f64;
                Ok(basis.into_iter().map(|p| (p, w)).collect())
            }
            Self::Clifford(1) => {
                let group = clifford_group_1q();
                let w = 1.0 / group.len() as f64;
                Ok(group.into_iter().map(|c| (c.into_matrix(), w)).collect())
            }
            other => Err(Error::Invalid(format!(
                "{} is not finitely enumerable",
                other.describe()
            ))),
        }
    }
}

/// Draws one unitary from an ensemble. `ProductPower` multiplies `P`
/// sequential independent inner samples (first-drawn applied first).
pub fn sample_from(e: &UnitaryEnsemble, stream: RandomStream) -> Result<CMat> {
    match e {
        UnitaryEnsemble::Haar(d) => Ok(sample_haar_unitary(*d, stream)),
        UnitaryEnsemble::FiniteUniform(f) => Ok(f.sample(stream)),
        UnitaryEnsemble::PauliBasis(n) => {
            let basis = pauli_basis(*n)?;
            let mut rng = stream.rng();
            let idx = rng.gen_range(0..basis.len());
            Ok(basis[idx].clone())
        }
        UnitaryEnsemble::Clifford(n) => Ok(sample_clifford(*n, stream)?.into_matrix()),
        UnitaryEnsemble::ProductPower(inner, p) => {
            if *p == 0 {
                return Err(Error::Domain("product power requires P >= 1".into()));
            }
            // Sequential draws from one stream: sub-draws must consume the
            // same generator so distinct P give distinct sequences.
            let mut acc: Option<CMat> = None;
            for i in 0..*p {
                // Derive one substream per factor deterministically.
                let factor_stream = RandomStream {
                    seed: stream.seed,
                    stream_id: stream
                        .stream_id
                        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                        .wrapping_add(i as u64),
                };
                let u = sample_from(inner, factor_stream)?;
                acc = Some(match acc {
                    None => u,
                    Some(prev) => u.mul(&prev), // apply first-drawn first
                });
            }
            Ok(acc.expect("P >= 1"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_linalg::flip;

    fn mc_mean_se(samples: &[f64]) -> (f64, f64) {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let s = RandomStream::new(7);
        let a = sample_haar_unitary(3, s);
        let b = sample_haar_unitary(3, s);
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let c = sample_haar_unitary(3, s.with_stream(1));
        assert!(a.max_abs_diff(&c) > 1e-3);
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        for d in 2..=8usize {
            for i in 0..100u64 {
                let u = sample_haar_unitary(d, RandomStream::new(11).with_stream(i));
                assert!(u.is_unitary(1e-12), "d={d}, i={i}");
            }
        }
    }

    #[test]
    fn haar_first_moment_and_trace_statistics() {
        // E[UOU†] = Tr(O)/d·I, E|Tr U|² = 1, and both survive left
        // multiplication by a fixed V (left invariance) and the U ↦ U†
        // symmetry of the Haar measure.
        let d = 2usize;
        let n = 20000u64;
        let o = CMat::from_fn(d, d, |i, j| c64((i + 1) as f64, (j as f64) - 0.5));
        let o = o.add(&o.dagger()).scale_re(0.5);
        let v = sample_haar_unitary(d, RandomStream::new(999));

        let mut entry_sums = vec![c64(0.0, 0.0); d * d];
        let mut entry_sums_dag = vec![c64(0.0, 0.0); d * d];
        let mut entry_sums_left = vec![c64(0.0, 0.0); d * d];
        let mut entry_sq = vec![0.0f64; d * d];
        let mut traces = Vec::with_capacity(n as usize);
        for i in 0..n {
            let u = sample_haar_unitary(d, RandomStream::new(12).with_stream(i));
            let m = u.mul(&o).mul(&u.dagger());
            let mdag = u.dagger().mul(&o).mul(&u);
            let vu = v.mul(&u);
            let mleft = vu.mul(&o).mul(&vu.dagger());
            for r in 0..d {
                for c in 0..d {
                    let idx = r * d + c;
                    entry_sums[idx] += m.get(r, c);
                    entry_sums_dag[idx] += mdag.get(r, c);
                    entry_sums_left[idx] += mleft.get(r, c);
                    entry_sq[idx] += m.get(r, c).norm_sqr();
                }
            }
            let t = u.trace();
            traces.push(t.norm_sqr());
        }
        let expected = CMat::identity(d).scale(o.trace() / d as f64);
        for r in 0..d {
            for c in 0..d {
                let idx = r * d + c;
                let mean = entry_sums[idx] / n as f64;
                let var = (entry_sq[idx] / n as f64 - mean.norm_sqr()).max(0.0);
                let se = (var / n as f64).sqrt().max(1e-12);
                assert!(
                    (mean - expected.get(r, c)).norm() <= 5.0 * se,
                    "first moment entry ({r},{c})"
                );
                let mean_dag = entry_sums_dag[idx] / n as f64;
                assert!((mean_dag - expected.get(r, c)).norm() <= 5.0 * se);
                let mean_left = entry_sums_left[idx] / n as f64;
                assert!((mean_left - expected.get(r, c)).norm() <= 5.0 * se);
            }
        }
        let (mean_t, se_t) = mc_mean_se(&traces);
        assert!((mean_t - 1.0).abs() <= 5.0 * se_t, "E|Tr U|² = {mean_t} ± {se_t}");
    }

    #[test]
    fn haar_states_are_normalized_with_correct_overlaps() {
        for d in [2usize, 3] {
            let n = 20000u64;
            let mut overlaps2 = Vec::with_capacity(n as usize);
            let mut overlaps4 = Vec::with_capacity(n as usize);
            for i in 0..n {
                let psi = sample_haar_state(d, RandomStream::new(13).with_stream(i));
                assert!((psi.vector_norm() - 1.0).abs() <= 1e-12);
                let a = psi.get(0, 0).norm_sqr();
                overlaps2.push(a);
                overlaps4.push(a * a);
            }
            let (m2, se2) = mc_mean_se(&overlaps2);
            assert!((m2 - 1.0 / d as f64).abs() <= 5.0 * se2, "d={d}: {m2} ± {se2}");
            let (m4, se4) = mc_mean_se(&overlaps4);
            let expected4 = 2.0 / (d as f64 * (d + 1) as f64); // 1/binom(d+1, 2)
            assert!((m4 - expected4).abs() <= 5.0 * se4, "d={d}: {m4} ± {se4}");
        }
    }

    #[test]
    fn pauli_basis_structure() {
        let p1 = pauli_basis(1).unwrap();
        assert_eq!(p1.len(), 4);
        assert!(p1[0].approx_eq(&CMat::identity(2), 0.0));
        for (i, a) in p1.iter().enumerate() {
            for (j, b) in p1.iter().enumerate() {
                let overlap = a.hs_inner(b);
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((overlap - c64(expected, 0.0)).norm() <= 1e-14);
            }
        }
        let p2 = pauli_basis(2).unwrap();
        assert_eq!(p2.len(), 16);
        assert!(p2[0].approx_eq(&CMat::identity(4), 0.0));
        for (i, a) in p2.iter().enumerate() {
            for (j, b) in p2.iter().enumerate() {
                let overlap = a.hs_inner(b);
                let expected = if i == j { 4.0 } else { 0.0 };
                assert!((overlap - c64(expected, 0.0)).norm() <= 1e-13);
            }
        }
        assert!(pauli_basis(7).is_err());
    }

    #[test]
    fn pauli_expansion_of_flip() {
        // Σ_P P⊗P/d = 𝔽 for n = 1 and n = 2.
        for n in 1..=2usize {
            let d = 1usize << n;
            let basis = pauli_basis(n).unwrap();
            let mut sum = CMat::zeros(d * d, d * d);
            for p in &basis {
                sum = sum.add(&kron(p, p));
            }
            assert!(sum.scale_re(1.0 / d as f64).approx_eq(&flip(d), 1e-13));
        }
    }

    #[test]
    fn finite_ensemble_validation() {
        let id = CMat::identity(2);
        assert!(FiniteEnsemble::uniform(vec![]).is_err());
        assert!(FiniteEnsemble::weighted(vec![id.clone()], vec![0.5]).is_err());
        assert!(FiniteEnsemble::weighted(vec![id.clone()], vec![-1.0]).is_err());
        let not_unitary = CMat::identity(2).scale_re(2.0);
        assert!(FiniteEnsemble::uniform(vec![not_unitary]).is_err());
        assert!(FiniteEnsemble::uniform(vec![id]).is_ok());
    }

    #[test]
    fn trivial_and_weighted_sampling() {
        let id = CMat::identity(3);
        let e = UnitaryEnsemble::FiniteUniform(FiniteEnsemble::uniform(vec![id.clone()]).unwrap());
        for i in 0..10u64 {
            let u = sample_from(&e, RandomStream::new(5).with_stream(i)).unwrap();
            assert!(u.approx_eq(&id, 0.0));
        }

        // PauliBasis(1): χ² over 4 classes at p > 0.001 (df 3, crit 16.27).
        let basis = pauli_basis(1).unwrap();
        let e = UnitaryEnsemble::PauliBasis(1);
        let mut counts = [0usize; 4];
        let n = 20000u64;
        for i in 0..n {
            let u = sample_from(&e, RandomStream::new(17).with_stream(i)).unwrap();
            let idx = basis.iter().position(|p| p.approx_eq(&u, 1e-9)).unwrap();
            counts[idx] += 1;
        }
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 16.27, "χ² = {chi2}, counts {counts:?}");
    }

    #[test]
    fn product_power_samples_are_unitary() {
        let inner = UnitaryEnsemble::PauliBasis(1);
        let e = UnitaryEnsemble::ProductPower(Box::new(inner), 3);
        assert_eq!(e.dim(), 2);
        for i in 0..20u64 {
            let u = sample_from(&e, RandomStream::new(21).with_stream(i)).unwrap();
            assert!(u.is_unitary(1e-10));
        }
        let haar2 = UnitaryEnsemble::ProductPower(Box::new(UnitaryEnsemble::Haar(3)), 2);
        let u = sample_from(&haar2, RandomStream::new(22)).unwrap();
        assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn manifest_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let u0 = sample_haar_unitary(2, RandomStream::new(30));
        let u1 = sample_haar_unitary(2, RandomStream::new(31));
        let e = FiniteEnsemble::weighted(vec![u0, u1], vec![0.25, 0.75]).unwrap();
        let path = dir.path().join("pair.json");
        e.save_manifest(&path).unwrap();
        let back = FiniteEnsemble::load_manifest(&path).unwrap();
        assert_eq!(back.weights(), e.weights());
        for (a, b) in e.members().iter().zip(back.members()) {
            for (x, y) in a.entries().iter().zip(b.entries()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn enumerate_weighted_dispatch() {
        let e = UnitaryEnsemble::PauliBasis(1);
        let list = e.enumerate_weighted().unwrap();
        assert_eq!(list.len(), 4);
        assert!((list.iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs() <= 1e-12);

        assert_eq!(UnitaryEnsemble::Clifford(1).enumerate_weighted().unwrap().len(), 24);
        assert!(UnitaryEnsemble::Haar(2).enumerate_weighted().is_err());
        assert!(UnitaryEnsemble::Clifford(2).enumerate_weighted().is_err());
    }
}
