//! Worked applications of the Haar-moment machinery: channel twirling,
//! entanglement and average gate fidelities, subsystem purity and Page
//! entropy, state expectation moments, concentration-tail checks, and
//! barren-plateau variance experiments.
//!
//! Everything here reduces to first and second Haar moments (plus the
//! symmetric-subspace formulas for state moments), so each closed form is
//! cross-checkable against the exact moment machinery and against Monte
//! Carlo sampling.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_linalg::{c64, kron, CMat, TOL_STRUCTURAL};
use crate::ensembles::{sample_haar_state, sample_haar_unitary, RandomStream};
use crate::error::{Error, Result};
use crate::perm_algebra::enumerate_sk;
use crate::stats::{mean_and_std_error, variance_and_std_error};
use crate::weingarten::second_moment_closed_form;

/// Largest qubit count accepted by [`barren_plateau_experiment`].
pub const MAX_BARREN_QUBITS: usize = 5;
/// Largest qubit count accepted by the `markov_pauli` tail check.
pub const MAX_TAIL_QUBITS: usize = 10;
/// Largest dimension accepted by the `levy` and `exp_overlap` tail checks.
pub const MAX_TAIL_DIM: usize = 4096;

// ---------------------------------------------------------------------------
// Quantum channels in Kraus form
// ---------------------------------------------------------------------------

/// A quantum channel `ρ ↦ Σ_i K_i ρ K_i†` in Kraus form.
///
/// Construction validates the trace-preservation condition
/// `Σ_i K_i† K_i = I` (complete positivity is automatic for any Kraus set).
#[derive(Debug, Clone)]
pub struct ChannelKraus {
    kraus: Vec<CMat>,
    dim: usize,
}

impl ChannelKraus {
    /// Builds a channel from Kraus operators, validating shape and closure.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Invalid("a channel needs at least one Kraus operator".into()));
        }
        let d = kraus[0].rows();
        if d == 0 {
            return Err(Error::Dimension("Kraus operators must be non-empty".into()));
        }
        for k in &kraus {
            if k.rows() != d || k.cols() != d {
                return Err(Error::Dimension(format!(
                    "all Kraus operators must be {d}×{d}, found {}×{}",
                    k.rows(),
                    k.cols()
                )));
            }
        }
        let mut closure = CMat::zeros(d, d);
        for k in &kraus {
            closure = closure.add(&k.dagger().mul(k));
        }
        if closure.max_abs_diff(&CMat::identity(d)) > TOL_STRUCTURAL {
            return Err(Error::Invalid(format!(
                "Kraus closure Σ K†K deviates from identity by {:.3e}",
                closure.max_abs_diff(&CMat::identity(d))
            )));
        }
        Ok(Self { kraus, dim: d })
    }

    /// The identity channel on dimension `d`.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(vec![CMat::identity(d)])
    }

    /// The channel `ρ ↦ VρV†` for a unitary `V`.
    pub fn unitary(v: &CMat) -> Result<Self> {
        if !v.is_unitary(TOL_STRUCTURAL) {
            return Err(Error::Invalid("unitary channel needs a unitary matrix".into()));
        }
        Self::new(vec![v.clone()])
    }

    /// The fully depolarizing channel `ρ ↦ I/d`, with Kraus set
    /// `{ |i⟩⟨j| / √d }` over all `d²` index pairs.
    pub fn fully_depolarizing(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be >= 1".into()));
        }
        let scale = 1.0 / (d as f64).sqrt();
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = CMat::zeros(d, d);
                k.set(i, j, c64(scale, 0.0));
                kraus.push(k);
            }
        }
        Self::new(kraus)
    }

    /// The depolarizing channel `ρ ↦ p·ρ + (1−p)·I/d` for `p ∈ [0, 1]`,
    /// realized with the Kraus set `{√p·I} ∪ {√(1−p)/d · W_ab}` over the
    /// Heisenberg–Weyl (clock/shift) unitaries `W_ab = X^a Z^b`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "this Kraus realization needs p in [0, 1], got {p}"
            )));
        }
        let mut kraus = vec![CMat::identity(d).scale_re(p.sqrt())];
        let w_scale = (1.0 - p).sqrt() / d as f64;
        for w in weyl_operators(d) {
            kraus.push(w.scale_re(w_scale));
        }
        Self::new(kraus)
    }

    /// A Haar-random channel obtained from the Stinespring dilation: sample a
    /// Haar unitary on `d·env_dim` and read off the Kraus blocks
    /// `K_i = (I ⊗ ⟨i|) U (I ⊗ |0⟩)`.
    pub fn random(d: usize, env_dim: usize, stream: RandomStream) -> Result<Self> {
        if d == 0 || env_dim == 0 {
            return Err(Error::Dimension("dimensions must be >= 1".into()));
        }
        let u = sample_haar_unitary(d * env_dim, stream);
        // System index varies over the outer blocks, environment inner:
        // row (r, e) of U is r*env_dim + e.
        let kraus = (0..env_dim)
            .map(|i| {
                CMat::from_fn(d, d, |r, c| u.get(r * env_dim + i, c * env_dim))
            })
            .collect();
        Self::new(kraus)
    }

    /// System dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The Kraus operators.
    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// Applies the channel to a `d×d` input.
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "input must be {0}×{0}",
                self.dim
            )));
        }
        let mut out = CMat::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out = out.add(&k.mul(rho).mul(&k.dagger()));
        }
        Ok(out)
    }

    /// The Choi matrix `Σ_i (K_i ⊗ I)|Ω⟩⟨Ω|(K_i ⊗ I)†` with the unnormalized
    /// maximally entangled vector `|Ω⟩ = Σ_j |jj⟩`. Trace preservation is
    /// equivalent to the second marginal being the identity.
    pub fn choi(&self) -> CMat {
        let d = self.dim;
        let mut choi = CMat::zeros(d * d, d * d);
        for k in &self.kraus {
            // (K ⊗ I)|Ω⟩ has entries [(r, e)] = K[r, e].
            let v = CMat::from_fn(d * d, 1, |row, _| k.get(row / d, row % d));
            choi = choi.add(&v.mul(&v.dagger()));
        }
        choi
    }
}

/// The Heisenberg–Weyl unitaries `W_ab = X^a Z^b` for `a, b ∈ {0..d−1}`,
/// where `X|j⟩ = |j+1 mod d⟩` and `Z|j⟩ = ω^j |j⟩`, `ω = e^{2πi/d}`. They
/// form a unitary operator basis; all but `W_00 = I` are traceless.
fn weyl_operators(d: usize) -> Vec<CMat> {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut ops = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut w = CMat::zeros(d, d);
            for j in 0..d {
                let phase = omega * (b * j) as f64;
                w.set((j + a) % d, j, Complex64::from_polar(1.0, phase));
            }
            ops.push(w);
        }
    }
    ops
}

// ---------------------------------------------------------------------------
// Row-major vectorization helpers (local convention: vec(ρ)[i·d+j] = ρ[i,j],
// so (A ⊗ conj(A))·vec(ρ) = vec(A ρ A†))
// ---------------------------------------------------------------------------

fn vec_row(m: &CMat) -> CMat {
    CMat::column(m.entries())
}

fn unvec_row(v: &CMat, d: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| v.get(i * d + j, 0))
}

/// Partial transpose on the second tensor factor of a `d²×d²` matrix.
fn partial_transpose_second(m: &CMat, d: usize) -> CMat {
    CMat::from_fn(d * d, d * d, |row, col| {
        let (r1, r2) = (row / d, row % d);
        let (c1, c2) = (col / d, col % d);
        m.get(r1 * d + c2, c1 * d + r2)
    })
}

/// The mixed second moment `E_U[(U ⊗ Ū) X (U ⊗ Ū)†]`, computed exactly by
/// reducing to the plain second moment through the partial-transpose
/// identity `[(U⊗Ū) X (U⊗Ū)†]^{Γ₂} = (U⊗U) X^{Γ₂} (U⊗U)†`.
fn mixed_second_moment(x: &CMat, d: usize) -> Result<CMat> {
    let inner = second_moment_closed_form(&partial_transpose_second(x, d), d)?;
    Ok(partial_transpose_second(&inner, d))
}

// ---------------------------------------------------------------------------
// Fidelities and twirling
// ---------------------------------------------------------------------------

/// Entanglement fidelity `F_e(Φ) = Σ_i |Tr K_i|² / d²`.
pub fn entanglement_fidelity(ch: &ChannelKraus) -> f64 {
    let d2 = (ch.dim * ch.dim) as f64;
    ch.kraus.iter().map(|k| k.trace().norm_sqr()).sum::<f64>() / d2
}

/// Depolarizing parameter of the twirled channel,
/// `p_Φ = (d² F_e − 1)/(d² − 1)`: averaging `U† Φ(U · U†) U` over the Haar
/// measure (or any 2-design) collapses any channel to
/// `ρ ↦ p_Φ ρ + (1 − p_Φ) I/d`.
pub fn twirl_depolarizing_parameter(ch: &ChannelKraus) -> Result<f64> {
    let d = ch.dim;
    if d < 2 {
        return Err(Error::Domain("twirling needs dimension d >= 2".into()));
    }
    let d2 = (d * d) as f64;
    Ok((d2 * entanglement_fidelity(ch) - 1.0) / (d2 - 1.0))
}

/// Applies the exactly twirled channel `E_U[U† Φ(U ρ U†) U]` to `rho`,
/// via the mixed second moment of `Σ_i K_i ⊗ K̄_i` (no sampling involved).
pub fn twirl_apply_exact(ch: &ChannelKraus, rho: &CMat) -> Result<CMat> {
    let d = ch.dim;
    if d < 2 {
        return Err(Error::Domain("twirling needs dimension d >= 2".into()));
    }
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::Dimension(format!("state must be {d}×{d}")));
    }
    // With V = U† (also Haar), the twirl is ρ ↦ Σ_i E_V[(V K_i V†) ρ (V K_i V†)†],
    // whose row-major superoperator is E_V[(V⊗V̄)(Σ_i K_i⊗K̄_i)(V⊗V̄)†].
    let mut kk = CMat::zeros(d * d, d * d);
    for k in &ch.kraus {
        kk = kk.add(&kron(k, &k.conj()));
    }
    let superop = mixed_second_moment(&kk, d)?;
    Ok(unvec_row(&superop.mul(&vec_row(rho)), d))
}

/// Average gate fidelity `F_avg(Φ, U) = (d·F_e(U†∘Φ) + 1)/(d + 1)`, the Haar
/// average of `⟨ψ|U† Φ(|ψ⟩⟨ψ|) U|ψ⟩` over pure states.
pub fn average_gate_fidelity(ch: &ChannelKraus, target: &CMat) -> Result<f64> {
    let d = ch.dim;
    if target.rows() != d || target.cols() != d {
        return Err(Error::Dimension(format!("target must be {d}×{d}")));
    }
    if !target.is_unitary(TOL_STRUCTURAL) {
        return Err(Error::Invalid("target must be unitary".into()));
    }
    let composed = ChannelKraus::new(
        ch.kraus.iter().map(|k| target.dagger().mul(k)).collect(),
    )?;
    let fe = entanglement_fidelity(&composed);
    Ok((d as f64 * fe + 1.0) / (d as f64 + 1.0))
}

/// Conjugate twirl of a bipartite state: the exact average
/// `E_U[(U ⊗ Ū) ρ (U ⊗ Ū)†]`, which always lands on the two-parameter family
/// `p_ρ·I/d² + (1 − p_ρ)·|Ω⟩⟨Ω|/d` with `p_ρ = d²(1 − ⟨Ω|ρ|Ω⟩/d)/(d² − 1)`
/// (here `|Ω⟩ = Σ_i |ii⟩`, unnormalized). Returns `(p_ρ, output)`.
pub fn conjugate_twirl_state(rho: &CMat) -> Result<(f64, CMat)> {
    if !rho.is_square() {
        return Err(Error::Dimension("state must be square".into()));
    }
    let dd = rho.rows();
    let d = (dd as f64).sqrt().round() as usize;
    if d < 2 || d * d != dd {
        return Err(Error::Dimension(format!(
            "state must live on d² with d >= 2, got dimension {dd}"
        )));
    }
    if !rho.is_density(TOL_STRUCTURAL) {
        return Err(Error::Invalid("input must be a density matrix".into()));
    }
    let mut omega_overlap = c64(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            omega_overlap += rho.get(i * d + i, j * d + j);
        }
    }
    let p = (d * d) as f64 * (1.0 - omega_overlap.re / d as f64) / ((d * d) as f64 - 1.0);
    let out = mixed_second_moment(rho, d)?;
    Ok((p, out))
}

// ---------------------------------------------------------------------------
// Purity, Page entropy, and state expectation moments
// ---------------------------------------------------------------------------

/// Haar-expected purity of the reduced state of a random bipartite pure
/// state: `E[Tr ρ_A²] = (d_A + d_B)/(d_A d_B + 1)`.
pub fn expected_purity(d_a: usize, d_b: usize) -> Result<f64> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::Dimension("subsystem dimensions must be >= 1".into()));
    }
    Ok((d_a + d_b) as f64 / ((d_a * d_b) as f64 + 1.0))
}

/// Page entropy in bits: the exact Haar average of the entanglement entropy
/// of the reduced state,
/// `S = (Σ_{k=n+1}^{mn} 1/k − (m − 1)/(2n)) / ln 2` with
/// `m = min(d_A, d_B)`, `n = max(d_A, d_B)`.
pub fn page_entropy(d_a: usize, d_b: usize) -> Result<f64> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::Dimension("subsystem dimensions must be >= 1".into()));
    }
    let m = d_a.min(d_b);
    let n = d_a.max(d_b);
    let harmonic: f64 = (n + 1..=m * n).map(|k| 1.0 / k as f64).sum();
    Ok((harmonic - (m as f64 - 1.0) / (2.0 * n as f64)) / std::f64::consts::LN_2)
}

/// `binom(d + k − 1, k)` in floating point (the symmetric-subspace dimension),
/// computed multiplicatively to avoid integer overflow.
fn sym_dim_f64(d: usize, k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (d - 1 + i) as f64 / i as f64)
}

/// Exact Haar state moment `E_ψ[⟨ψ|O|ψ⟩^k]` for Hermitian `O`, via
/// `Tr(O^{⊗k} P_sym)/binom(d+k−1, k)` evaluated with the cycle-product
/// identity `Tr(O^{⊗k} V_π) = Π_{cycles c of π} Tr(O^{|c|})` — so the cost is
/// `k!` cycle products plus `k` matrix powers, never a dense `d^k` object.
pub fn expectation_moment(o: &CMat, k: usize) -> Result<f64> {
    if !o.is_square() {
        return Err(Error::Dimension("observable must be square".into()));
    }
    if !o.is_hermitian(TOL_STRUCTURAL) {
        return Err(Error::Invalid("observable must be Hermitian".into()));
    }
    if k == 0 {
        return Err(Error::Domain("moment order k must be >= 1".into()));
    }
    let d = o.rows();
    // Power traces t[m] = Tr(O^m), m = 1..k.
    let mut power_traces = vec![0.0f64; k + 1];
    let mut power = o.clone();
    power_traces[1] = power.trace().re;
    for m in 2..=k {
        power = power.mul(o);
        power_traces[m] = power.trace().re;
    }
    let perms = enumerate_sk(k)?;
    let total: f64 = perms
        .iter()
        .map(|p| p.cycle_type().iter().map(|&len| power_traces[len]).product::<f64>())
        .sum();
    let k_factorial = (1..=k).fold(1.0, |acc, i| acc * i as f64);
    Ok(total / (k_factorial * sym_dim_f64(d, k)))
}

/// The `k = 2` closed form `E_ψ[⟨ψ|O|ψ⟩²] = (Tr(O)² + Tr(O²))/(d(d+1))`.
pub fn expectation_second_moment_closed_form(o: &CMat) -> Result<f64> {
    if !o.is_square() {
        return Err(Error::Dimension("observable must be square".into()));
    }
    if !o.is_hermitian(TOL_STRUCTURAL) {
        return Err(Error::Invalid("observable must be Hermitian".into()));
    }
    let d = o.rows() as f64;
    let tr = o.trace().re;
    let tr2 = o.mul(o).trace().re;
    Ok((tr * tr + tr2) / (d * (d + 1.0)))
}

/// Haar overlap moment `E_{ψ}[|⟨ψ|φ⟩|^{2k}] = 1/binom(d+k−1, k)` for any
/// fixed `φ`.
pub fn overlap_moment(k: usize, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::Dimension("dimension must be >= 1".into()));
    }
    Ok(1.0 / sym_dim_f64(d, k))
}

// ---------------------------------------------------------------------------
// Concentration-tail checks
// ---------------------------------------------------------------------------

/// Which concentration inequality a [`tail_check`] exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    /// Markov bound `P(|⟨P⟩_ψ| ≥ ε) ≤ 1/((2^n + 1)ε²)` for a fixed
    /// non-identity Pauli `P` on `n` qubits; the size parameter is `n`.
    MarkovPauli,
    /// Levy's lemma `P(|⟨O⟩_ψ − E⟨O⟩| ≥ ε) ≤ 2·exp(−dε²/(18π³‖O‖∞²))`
    /// with Lipschitz constant `2‖O‖∞`; the size parameter is `d`.
    Levy,
    /// Overlap tail `P(|⟨ψ|φ⟩|² ≥ ε) ≤ 2·exp(−dε/2)`; the size parameter
    /// is `d`.
    ExpOverlap,
}

impl TailKind {
    /// The stable name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            TailKind::MarkovPauli => "markov_pauli",
            TailKind::Levy => "levy",
            TailKind::ExpOverlap => "exp_overlap",
        }
    }
}

impl std::str::FromStr for TailKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markov_pauli" => Ok(TailKind::MarkovPauli),
            "levy" => Ok(TailKind::Levy),
            "exp_overlap" => Ok(TailKind::ExpOverlap),
            other => Err(Error::Parse(format!(
                "unknown tail kind {other:?} (expected markov_pauli, levy, or exp_overlap)"
            ))),
        }
    }
}

/// Outcome of an empirical concentration-tail check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCheckReport {
    /// Which bound was checked (`markov_pauli`, `levy`, `exp_overlap`).
    pub bound_name: String,
    /// Deviation threshold ε.
    pub epsilon: f64,
    /// Empirical tail frequency over the sampled states.
    pub empirical_tail: f64,
    /// Analytic bound, clamped to the trivial bound 1 (probabilities never
    /// exceed 1, and the Markov bound diverges at ε = 0).
    pub bound_value: f64,
    /// Number of Haar states sampled.
    pub samples: usize,
    /// Binomial standard error `√(p̂(1−p̂)/N)` of the empirical frequency.
    pub std_error: f64,
    /// Whether `empirical ≤ bound + 3·std_error`.
    pub passes: bool,
}

/// Samples `n_samples` Haar-random states and compares the empirical tail
/// frequency of the chosen deviation event against its analytic bound.
///
/// `size` is the qubit count `n` for `markov_pauli` and the dimension `d`
/// for `levy` and `exp_overlap`. Sampling is deterministic in the stream and
/// independent of thread count.
pub fn tail_check(
    kind: TailKind,
    size: usize,
    epsilon: f64,
    n_samples: usize,
    stream: RandomStream,
) -> Result<TailCheckReport> {
    if epsilon < 0.0 {
        return Err(Error::Domain("epsilon must be >= 0".into()));
    }
    if n_samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let (d, bound_raw) = match kind {
        TailKind::MarkovPauli => {
            if size == 0 || size > MAX_TAIL_QUBITS {
                return Err(Error::ResourceCap(format!(
                    "markov_pauli supports 1..={MAX_TAIL_QUBITS} qubits, got {size}"
                )));
            }
            let d = 1usize << size;
            (d, 1.0 / ((d as f64 + 1.0) * epsilon * epsilon))
        }
        TailKind::Levy => {
            if size < 2 || size > MAX_TAIL_DIM {
                return Err(Error::ResourceCap(format!(
                    "levy supports dimensions 2..={MAX_TAIL_DIM}, got {size}"
                )));
            }
            let denom = 18.0 * std::f64::consts::PI.powi(3);
            (size, 2.0 * (-(size as f64) * epsilon * epsilon / denom).exp())
        }
        TailKind::ExpOverlap => {
            if size < 2 || size > MAX_TAIL_DIM {
                return Err(Error::ResourceCap(format!(
                    "exp_overlap supports dimensions 2..={MAX_TAIL_DIM}, got {size}"
                )));
            }
            (size, 2.0 * (-(size as f64) * epsilon / 2.0).exp())
        }
    };

    let hits: usize = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let psi = sample_haar_state(d, stream.with_stream(stream.stream_id.wrapping_add(i)));
            let deviation = match kind {
                TailKind::MarkovPauli => {
                    // ⟨ψ|Z₀|ψ⟩ with Z on the first qubit: sign from the top bit.
                    (0..d)
                        .map(|j| {
                            let sign = if j < d / 2 { 1.0 } else { -1.0 };
                            sign * psi.get(j, 0).norm_sqr()
                        })
                        .sum::<f64>()
                        .abs()
                }
                TailKind::Levy => {
                    // O = diag(+1, −1, …) padded with a 0 for odd d: traceless
                    // with ‖O‖∞ = 1, so the mean of ⟨O⟩ is 0.
                    (0..d)
                        .map(|j| {
                            let sign = if d % 2 == 1 && j == d - 1 {
                                0.0
                            } else if j % 2 == 0 {
                                1.0
                            } else {
                                -1.0
                            };
                            sign * psi.get(j, 0).norm_sqr()
                        })
                        .sum::<f64>()
                        .abs()
                }
                TailKind::ExpOverlap => psi.get(0, 0).norm_sqr(),
            };
            usize::from(deviation >= epsilon)
        })
        .sum();

    let empirical = hits as f64 / n_samples as f64;
    let std_error = (empirical * (1.0 - empirical) / n_samples as f64).sqrt();
    let bound_value = bound_raw.min(1.0);
    Ok(TailCheckReport {
        bound_name: kind.name().to_string(),
        epsilon,
        empirical_tail: empirical,
        bound_value,
        samples: n_samples,
        std_error,
        passes: empirical <= bound_value + 3.0 * std_error,
    })
}

// ---------------------------------------------------------------------------
// Barren plateaus
// ---------------------------------------------------------------------------

/// Configuration of a barren-plateau variance experiment on `n` qubits.
///
/// The cost function is `C = Tr(U ρ₀ U† O)` with `U` Haar; the gradient
/// statistic is `∂C = i·Tr(U_B ρ₀ U_B† [H, U_A† O U_A])` over independent
/// Haar pairs `(U_A, U_B)` — the distribution induced by 2-design circuit
/// halves, with the circuit parameterization itself abstracted away.
#[derive(Debug, Clone)]
pub struct BarrenConfig {
    /// Number of qubits (`d = 2^n`).
    pub n_qubits: usize,
    /// Observable `O`: Hermitian and traceless.
    pub observable: CMat,
    /// Gradient generator `H`: Hermitian and traceless.
    pub generator: CMat,
    /// Initial state `ρ₀` (density matrix).
    pub initial_state: CMat,
    /// Monte-Carlo sample count for each statistic.
    pub samples: usize,
}

impl BarrenConfig {
    fn validate(&self) -> Result<usize> {
        if self.n_qubits == 0 || self.n_qubits > MAX_BARREN_QUBITS {
            return Err(Error::ResourceCap(format!(
                "barren-plateau experiments support 1..={MAX_BARREN_QUBITS} qubits, got {}",
                self.n_qubits
            )));
        }
        let d = 1usize << self.n_qubits;
        for (name, m) in [("observable", &self.observable), ("generator", &self.generator)] {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Dimension(format!("{name} must be {d}×{d}")));
            }
            if !m.is_hermitian(TOL_STRUCTURAL) {
                return Err(Error::Invalid(format!("{name} must be Hermitian")));
            }
            if m.trace().norm() > TOL_STRUCTURAL {
                return Err(Error::Invalid(format!(
                    "{name} must be traceless (|Tr| = {:.3e})",
                    m.trace().norm()
                )));
            }
        }
        if self.initial_state.rows() != d || self.initial_state.cols() != d {
            return Err(Error::Dimension(format!("initial state must be {d}×{d}")));
        }
        if !self.initial_state.is_density(TOL_STRUCTURAL) {
            return Err(Error::Invalid("initial state must be a density matrix".into()));
        }
        if self.samples < 2 {
            return Err(Error::Domain("variance estimation needs at least 2 samples".into()));
        }
        Ok(d)
    }
}

/// Results of a barren-plateau experiment: Monte-Carlo statistics with their
/// standard errors, next to the exact second-moment closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrenReport {
    /// Qubit count.
    pub n_qubits: usize,
    /// Samples per statistic.
    pub samples: usize,
    /// Sample mean of the cost `C` (exactly 0 in expectation).
    pub mean_c: f64,
    /// Standard error of `mean_c`.
    pub mean_c_std_error: f64,
    /// Sample variance of `C`.
    pub var_c: f64,
    /// Standard error of `var_c` (from the spread of squared deviations).
    pub var_c_std_error: f64,
    /// Sample variance of the gradient statistic `∂C`.
    pub var_dc: f64,
    /// Standard error of `var_dc`.
    pub var_dc_std_error: f64,
    /// Closed form `Var[C] = (Tr ρ₀² − 1/d)/(d² − 1) · Tr(O²)`.
    pub exact_var_c: f64,
    /// Closed form `Var[∂C] = 2d · c_{F,ρ} · c_{F,O} · Tr(H²)`.
    pub exact_var_dc: f64,
}

/// Exact Haar variance of the cost `C = Tr(Uρ₀U†O)` for traceless `O`:
/// `(Tr ρ₀² − 1/d)/(d² − 1) · Tr(O²)`.
pub fn exact_cost_variance(rho0: &CMat, observable: &CMat) -> Result<f64> {
    let d = rho0.rows();
    if !rho0.is_square() || observable.rows() != d || observable.cols() != d {
        return Err(Error::Dimension("state and observable must share a square shape".into()));
    }
    let purity = rho0.mul(rho0).trace().re;
    let tr_o2 = observable.mul(observable).trace().re;
    Ok((purity - 1.0 / d as f64) / ((d * d) as f64 - 1.0) * tr_o2)
}

/// Exact Haar variance of the gradient statistic for traceless `O`, `H`:
/// `2d · c_{F,ρ₀} · c_{F,O} · Tr(H²)` with
/// `c_{F,X} = (Tr X² − (Tr X)²/d)/(d² − 1)` the flip coefficient of the
/// second moment of `X^{⊗2}`.
pub fn exact_gradient_variance(rho0: &CMat, observable: &CMat, generator: &CMat) -> Result<f64> {
    let d = rho0.rows();
    if !rho0.is_square()
        || observable.rows() != d
        || observable.cols() != d
        || generator.rows() != d
        || generator.cols() != d
    {
        return Err(Error::Dimension("all inputs must share a square shape".into()));
    }
    let flip_coeff = |x: &CMat| -> f64 {
        let tr = x.trace().re;
        let tr2 = x.mul(x).trace().re;
        (tr2 - tr * tr / d as f64) / ((d * d) as f64 - 1.0)
    };
    let tr_h2 = generator.mul(generator).trace().re;
    Ok(2.0 * d as f64 * flip_coeff(rho0) * flip_coeff(observable) * tr_h2)
}

/// Runs the barren-plateau experiment: Monte-Carlo estimates of the mean and
/// variance of the cost and of the gradient statistic, against their exact
/// closed forms. Deterministic in the stream, independent of thread count.
pub fn barren_plateau_experiment(cfg: &BarrenConfig, stream: RandomStream) -> Result<BarrenReport> {
    let d = cfg.validate()?;
    let n = cfg.samples;

    // Cost samples C_i = Tr(U ρ₀ U† O), substreams [0, N).
    let cost_samples: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let u = sample_haar_unitary(d, stream.with_stream(stream.stream_id.wrapping_add(i)));
            u.mul(&cfg.initial_state).mul(&u.dagger()).mul(&cfg.observable).trace().re
        })
        .collect();
    let (mean_c, mean_c_std_error) = mean_and_std_error(&cost_samples);
    let (var_c, var_c_std_error) = variance_and_std_error(&cost_samples, mean_c);

    // Gradient samples over independent pairs, substreams [N, 3N).
    let grad_samples: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let base = stream.stream_id.wrapping_add(n as u64);
            let ua = sample_haar_unitary(d, stream.with_stream(base.wrapping_add(2 * i)));
            let ub = sample_haar_unitary(d, stream.with_stream(base.wrapping_add(2 * i + 1)));
            let rho_b = ub.mul(&cfg.initial_state).mul(&ub.dagger());
            let o_a = ua.dagger().mul(&cfg.observable).mul(&ua);
            let commutator = cfg.generator.mul(&o_a).sub(&o_a.mul(&cfg.generator));
            // i·Tr(ρ_B [H, O_A]) is real for Hermitian inputs.
            (c64(0.0, 1.0) * rho_b.mul(&commutator).trace()).re
        })
        .collect();
    let (mean_dc, _) = mean_and_std_error(&grad_samples);
    let (var_dc, var_dc_std_error) = variance_and_std_error(&grad_samples, mean_dc);

    Ok(BarrenReport {
        n_qubits: cfg.n_qubits,
        samples: n,
        mean_c,
        mean_c_std_error,
        var_c,
        var_c_std_error,
        var_dc,
        var_dc_std_error,
        exact_var_c: exact_cost_variance(&cfg.initial_state, &cfg.observable)?,
        exact_var_dc: exact_gradient_variance(
            &cfg.initial_state,
            &cfg.observable,
            &cfg.generator,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_linalg::{flip, partial_trace, SubsystemDims, TOL_ALGEBRAIC};
    use crate::ensembles::pauli_matrices_1q;

    fn pauli_z() -> CMat {
        pauli_matrices_1q()[3].clone()
    }

    fn random_density(d: usize, stream: RandomStream) -> CMat {
        let mut rng = stream.rng();
        let g = CMat::from_fn(d, d, |_, _| crate::ensembles::complex_normal(&mut rng));
        let gg = g.mul(&g.dagger());
        gg.scale_re(1.0 / gg.trace().re)
    }

    fn biased_random_channel(d: usize, stream: RandomStream) -> ChannelKraus {
        // 0.7·identity + 0.3·Haar unitary: keeps F_e > 1/d² so the twirl
        // parameter stays in [0, 1] where the Kraus depolarizing form exists.
        let v = sample_haar_unitary(d, stream);
        ChannelKraus::new(vec![
            CMat::identity(d).scale_re(0.7f64.sqrt()),
            v.scale_re(0.3f64.sqrt()),
        ])
        .unwrap()
    }

    #[test]
    fn entanglement_fidelity_oracles() {
        assert!((entanglement_fidelity(&ChannelKraus::identity(2).unwrap()) - 1.0).abs() < 1e-15);
        for d in [2usize, 3] {
            let full = ChannelKraus::fully_depolarizing(d).unwrap();
            assert!(
                (entanglement_fidelity(&full) - 1.0 / (d * d) as f64).abs() < 1e-12,
                "d = {d}"
            );
        }
        let v = sample_haar_unitary(3, RandomStream::new(11));
        let ch = ChannelKraus::unitary(&v).unwrap();
        let expected = v.trace().norm_sqr() / 9.0;
        assert!((entanglement_fidelity(&ch) - expected).abs() < 1e-12);
    }

    #[test]
    fn channel_validation_and_choi() {
        // Non-closing Kraus set is rejected.
        let bad = vec![CMat::identity(2).scale_re(0.5)];
        assert!(matches!(ChannelKraus::new(bad), Err(Error::Invalid(_))));
        // Mixed shapes are rejected.
        let mixed = vec![CMat::identity(2), CMat::identity(3)];
        assert!(matches!(ChannelKraus::new(mixed), Err(Error::Dimension(_))));

        // Trace preservation = identity second marginal of the Choi matrix.
        let ch = ChannelKraus::random(3, 2, RandomStream::new(5)).unwrap();
        let choi = ch.choi();
        let dims = SubsystemDims::new(vec![3, 3]).unwrap();
        let marginal = partial_trace(&choi, &dims, &[1]).unwrap();
        assert!(marginal.max_abs_diff(&CMat::identity(3)) < 1e-10);

        // Identity channel's Choi is |Ω⟩⟨Ω| (unnormalized), trace d.
        let id_choi = ChannelKraus::identity(2).unwrap().choi();
        assert!((id_choi.trace().re - 2.0).abs() < 1e-12);

        // The depolarizing constructor interpolates correctly.
        let dep = ChannelKraus::depolarizing(2, 0.25).unwrap();
        let rho = random_density(2, RandomStream::new(17));
        let expected = rho.scale_re(0.25).add(&CMat::identity(2).scale_re(0.75 / 2.0));
        assert!(dep.apply(&rho).unwrap().max_abs_diff(&expected) < 1e-12);
        assert!(matches!(
            ChannelKraus::depolarizing(2, 1.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn twirl_parameter_oracles() {
        let id = ChannelKraus::identity(2).unwrap();
        assert!((twirl_depolarizing_parameter(&id).unwrap() - 1.0).abs() < 1e-14);
        for d in [2usize, 3] {
            let full = ChannelKraus::fully_depolarizing(d).unwrap();
            assert!(twirl_depolarizing_parameter(&full).unwrap().abs() < 1e-12);
        }
        let one = ChannelKraus::identity(1).unwrap();
        assert!(matches!(twirl_depolarizing_parameter(&one), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_twirl_is_depolarizing() {
        let ch = ChannelKraus::random(2, 3, RandomStream::new(23)).unwrap();
        let p = twirl_depolarizing_parameter(&ch).unwrap();
        for trial in 0..5u64 {
            let rho = random_density(2, RandomStream::new(100 + trial));
            let twirled = twirl_apply_exact(&ch, &rho).unwrap();
            let expected = rho.scale_re(p).add(&CMat::identity(2).scale_re((1.0 - p) / 2.0));
            assert!(
                twirled.max_abs_diff(&expected) < 1e-10,
                "trial {trial}: {:.3e}",
                twirled.max_abs_diff(&expected)
            );
            assert!(twirled.is_density(1e-8));
        }
        // Also at d = 3.
        let ch3 = ChannelKraus::random(3, 2, RandomStream::new(29)).unwrap();
        let p3 = twirl_depolarizing_parameter(&ch3).unwrap();
        let rho3 = random_density(3, RandomStream::new(31));
        let twirled3 = twirl_apply_exact(&ch3, &rho3).unwrap();
        let expected3 = rho3.scale_re(p3).add(&CMat::identity(3).scale_re((1.0 - p3) / 3.0));
        assert!(twirled3.max_abs_diff(&expected3) < 1e-10);
    }

    #[test]
    fn mc_twirl_matches_exact() {
        let ch = ChannelKraus::random(2, 3, RandomStream::new(37)).unwrap();
        let rho = random_density(2, RandomStream::new(41));
        let exact = twirl_apply_exact(&ch, &rho).unwrap();

        let n = 20000u64;
        let stream = RandomStream::new(43);
        let sampled: Vec<CMat> = (0..n)
            .into_par_iter()
            .map(|i| {
                let u = sample_haar_unitary(2, stream.with_stream(i));
                let inner = ch.apply(&u.mul(&rho).mul(&u.dagger())).unwrap();
                u.dagger().mul(&inner).mul(&u)
            })
            .collect();
        // Entrywise mean and SE over real and imaginary parts.
        for r in 0..2 {
            for c in 0..2 {
                let re: Vec<f64> = sampled.iter().map(|m| m.get(r, c).re).collect();
                let im: Vec<f64> = sampled.iter().map(|m| m.get(r, c).im).collect();
                let (mre, sre) = mean_and_std_error(&re);
                let (mim, sim) = mean_and_std_error(&im);
                assert!(
                    (mre - exact.get(r, c).re).abs() <= 5.0 * sre.max(1e-12),
                    "entry ({r},{c}) real"
                );
                assert!(
                    (mim - exact.get(r, c).im).abs() <= 5.0 * sim.max(1e-12),
                    "entry ({r},{c}) imag"
                );
            }
        }
    }

    #[test]
    fn average_gate_fidelity_oracles() {
        let v = sample_haar_unitary(2, RandomStream::new(47));
        let ch = ChannelKraus::unitary(&v).unwrap();
        assert!((average_gate_fidelity(&ch, &v).unwrap() - 1.0).abs() < 1e-12);

        let full = ChannelKraus::fully_depolarizing(2).unwrap();
        let fid = average_gate_fidelity(&full, &CMat::identity(2)).unwrap();
        assert!((fid - 0.5).abs() < 1e-12);

        // Non-unitary target is rejected.
        let not_unitary = CMat::identity(2).scale_re(0.5);
        assert!(matches!(
            average_gate_fidelity(&full, &not_unitary),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn average_gate_fidelity_matches_state_average() {
        let ch = ChannelKraus::random(2, 2, RandomStream::new(53)).unwrap();
        let target = sample_haar_unitary(2, RandomStream::new(59));
        let formula = average_gate_fidelity(&ch, &target).unwrap();

        let n = 20000u64;
        let stream = RandomStream::new(61);
        let samples: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let psi = sample_haar_state(2, stream.with_stream(i));
                let rho = psi.mul(&psi.dagger());
                let out = ch.apply(&rho).unwrap();
                let rotated = target.dagger().mul(&out).mul(&target);
                psi.dagger().mul(&rotated).mul(&psi).get(0, 0).re
            })
            .collect();
        let (mean, se) = mean_and_std_error(&samples);
        assert!((mean - formula).abs() <= 5.0 * se, "{mean} vs {formula} (se {se})");
    }

    #[test]
    fn entanglement_fidelity_survives_twirling() {
        // F_e of the twirled (depolarizing) channel equals F_e of the
        // original: p_Φ(d²−1)/d² + 1/d² = F_e.
        for (d, seed) in [(2usize, 67u64), (3, 71)] {
            let ch = biased_random_channel(d, RandomStream::new(seed));
            let fe = entanglement_fidelity(&ch);
            let p = twirl_depolarizing_parameter(&ch).unwrap();
            assert!((0.0..=1.0).contains(&p));
            let twirled = ChannelKraus::depolarizing(d, p).unwrap();
            assert!(
                (entanglement_fidelity(&twirled) - fe).abs() < 1e-10,
                "d = {d}"
            );
        }
    }

    #[test]
    fn conjugate_twirl_oracles() {
        let d = 2usize;
        // Fixed point |Ω⟩⟨Ω|/d (unnormalized Ω).
        let omega = CMat::from_fn(d * d, 1, |row, _| {
            if row / d == row % d { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        let omega_state = omega.mul(&omega.dagger()).scale_re(1.0 / d as f64);
        let (p, out) = conjugate_twirl_state(&omega_state).unwrap();
        assert!(p.abs() < 1e-12);
        assert!(out.max_abs_diff(&omega_state) < 1e-12);

        // Fixed point I/d².
        let max_mixed = CMat::identity(d * d).scale_re(1.0 / (d * d) as f64);
        let (p, out) = conjugate_twirl_state(&max_mixed).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!(out.max_abs_diff(&max_mixed) < 1e-12);

        // Random state: output equals the closed-form family member.
        for trial in 0..5u64 {
            let rho = random_density(d * d, RandomStream::new(300 + trial));
            let (p, out) = conjugate_twirl_state(&rho).unwrap();
            assert!((0.0..=(d * d) as f64 / ((d * d) as f64 - 1.0) + 1e-12).contains(&p));
            let expected = CMat::identity(d * d)
                .scale_re(p / (d * d) as f64)
                .add(&omega.mul(&omega.dagger()).scale_re((1.0 - p) / d as f64));
            assert!(out.max_abs_diff(&expected) < 1e-10, "trial {trial}");
            assert!(out.is_density(1e-8));
        }

        // Invalid inputs.
        assert!(conjugate_twirl_state(&CMat::identity(3)).is_err()); // not d² with d ≥ 2
        assert!(conjugate_twirl_state(&CMat::identity(4)).is_err()); // trace 4, not a state
    }

    #[test]
    fn conjugate_twirl_matches_sampling() {
        let d = 2usize;
        let rho = random_density(d * d, RandomStream::new(73));
        let (_, exact) = conjugate_twirl_state(&rho).unwrap();

        let n = 20000u64;
        let stream = RandomStream::new(79);
        let sampled: Vec<CMat> = (0..n)
            .into_par_iter()
            .map(|i| {
                let u = sample_haar_unitary(d, stream.with_stream(i));
                let uu = kron(&u, &u.conj());
                uu.mul(&rho).mul(&uu.dagger())
            })
            .collect();
        for r in 0..d * d {
            for c in 0..d * d {
                let re: Vec<f64> = sampled.iter().map(|m| m.get(r, c).re).collect();
                let (mre, sre) = mean_and_std_error(&re);
                assert!(
                    (mre - exact.get(r, c).re).abs() <= 5.0 * sre.max(1e-12),
                    "entry ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn purity_and_page_oracles() {
        assert!((expected_purity(2, 2).unwrap() - 0.8).abs() < 1e-15);
        assert!((expected_purity(1, 1).unwrap() - 1.0).abs() < 1e-15);

        // Page entropy at (2,2): (1/ln2)(1/3 + 1/4 − 1/4) = 1/(3 ln 2).
        let page22 = page_entropy(2, 2).unwrap();
        assert!((page22 - 1.0 / (3.0 * std::f64::consts::LN_2)).abs() < 1e-12);
        // Symmetry in the arguments.
        assert!((page_entropy(2, 8).unwrap() - page_entropy(8, 2).unwrap()).abs() < 1e-15);
        // Paper's lower bound S > log2(dA) − dA/(2 dB ln 2) for dA ≤ dB.
        for (da, db) in [(2usize, 4usize), (2, 8), (3, 9), (4, 4)] {
            let s = page_entropy(da, db).unwrap();
            let lower = (da as f64).log2() - da as f64 / (2.0 * db as f64 * std::f64::consts::LN_2);
            assert!(s > lower, "({da},{db}): {s} vs {lower}");
        }
        assert!(page_entropy(0, 2).is_err());
    }

    #[test]
    fn purity_matches_sampling() {
        let n = 20000u64;
        let stream = RandomStream::new(83);
        let dims = SubsystemDims::new(vec![2, 2]).unwrap();
        let purities: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let psi = sample_haar_state(4, stream.with_stream(i));
                let rho = psi.mul(&psi.dagger());
                let rho_a = partial_trace(&rho, &dims, &[0]).unwrap();
                rho_a.mul(&rho_a).trace().re
            })
            .collect();
        let (mean, se) = mean_and_std_error(&purities);
        assert!((mean - 0.8).abs() <= 5.0 * se, "{mean} (se {se})");
    }

    #[test]
    fn expectation_moment_oracles() {
        // O = Z, d = 2, k = 2 → 1/3 by both routes.
        let z = pauli_z();
        let general = expectation_moment(&z, 2).unwrap();
        let closed = expectation_second_moment_closed_form(&z).unwrap();
        assert!((general - 1.0 / 3.0).abs() < 1e-14);
        assert!((closed - 1.0 / 3.0).abs() < 1e-14);

        // Identity: every moment is 1.
        for d in [2usize, 3] {
            for k in 1..=4 {
                assert!(
                    (expectation_moment(&CMat::identity(d), k).unwrap() - 1.0).abs() < 1e-12,
                    "d={d} k={k}"
                );
            }
        }

        // k = 1 is Tr(O)/d; k = 2 closed form agrees with the general path.
        let mut rng = RandomStream::new(89).rng();
        let g = CMat::from_fn(3, 3, |_, _| crate::ensembles::complex_normal(&mut rng));
        let o = g.add(&g.dagger()).scale_re(0.5);
        assert!(
            (expectation_moment(&o, 1).unwrap() - o.trace().re / 3.0).abs() < 1e-12
        );
        assert!(
            (expectation_moment(&o, 2).unwrap()
                - expectation_second_moment_closed_form(&o).unwrap())
            .abs()
                < 1e-12
        );

        // Non-Hermitian input is rejected; k = 0 is rejected.
        assert!(expectation_moment(&g, 2).is_err());
        assert!(expectation_moment(&o, 0).is_err());
    }

    #[test]
    fn expectation_moment_matches_sampling_k3() {
        let z = pauli_z();
        let exact = expectation_moment(&z, 3).unwrap();
        let n = 20000u64;
        let stream = RandomStream::new(97);
        let samples: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let psi = sample_haar_state(2, stream.with_stream(i));
                psi.dagger().mul(&z).mul(&psi).get(0, 0).re.powi(3)
            })
            .collect();
        let (mean, se) = mean_and_std_error(&samples);
        assert!((mean - exact).abs() <= 5.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn overlap_moment_oracles() {
        assert!((overlap_moment(2, 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for d in [2usize, 3, 5] {
            assert!((overlap_moment(1, d).unwrap() - 1.0 / d as f64).abs() < 1e-15);
        }
        assert!((overlap_moment(4, 1).unwrap() - 1.0).abs() < 1e-15);
        // Consistency with the flip-trick value E|⟨ψ|φ⟩|⁴ = 2/(d(d+1)).
        let d = 4usize;
        assert!(
            (overlap_moment(2, d).unwrap() - 2.0 / (d as f64 * (d as f64 + 1.0))).abs() < 1e-15
        );
    }

    #[test]
    fn tail_check_oracles() {
        // Markov/Pauli at n = 3, ε = 0.5: bound 1/(9·0.25) ≈ 0.444.
        let report = tail_check(
            TailKind::MarkovPauli,
            3,
            0.5,
            20000,
            RandomStream::new(101),
        )
        .unwrap();
        assert!((report.bound_value - 1.0 / (9.0 * 0.25)).abs() < 1e-12);
        assert!(report.passes, "{report:?}");
        assert!(report.empirical_tail <= report.bound_value + 3.0 * report.std_error);

        // Exponential overlap decay at d = 8, ε = 0.9: bound 2e^{−3.6}.
        let report = tail_check(TailKind::ExpOverlap, 8, 0.9, 20000, RandomStream::new(103)).unwrap();
        assert!((report.bound_value - 2.0 * (-3.6f64).exp()).abs() < 1e-12);
        assert!(report.passes);
        // The exact tail is (1−ε)^{d−1} = 1e-7: essentially never observed.
        assert!(report.empirical_tail < 1e-3);

        // Levy at d = 8: the bound is nearly vacuous (clamped to 1).
        let report = tail_check(TailKind::Levy, 8, 0.9, 2000, RandomStream::new(107)).unwrap();
        assert!(report.bound_value <= 1.0);
        assert!(report.passes);

        // ε = 0: every sample deviates, bound clamps to 1, trivially passes.
        let report = tail_check(TailKind::MarkovPauli, 2, 0.0, 500, RandomStream::new(109)).unwrap();
        assert!((report.empirical_tail - 1.0).abs() < 1e-15);
        assert!((report.bound_value - 1.0).abs() < 1e-15);
        assert!(report.passes);

        // Determinism.
        let a = tail_check(TailKind::Levy, 4, 0.3, 1000, RandomStream::new(113)).unwrap();
        let b = tail_check(TailKind::Levy, 4, 0.3, 1000, RandomStream::new(113)).unwrap();
        assert_eq!(a, b);

        // Caps and domain errors.
        assert!(tail_check(TailKind::MarkovPauli, 11, 0.5, 10, RandomStream::new(1)).is_err());
        assert!(tail_check(TailKind::Levy, 1, 0.5, 10, RandomStream::new(1)).is_err());
        assert!(tail_check(TailKind::Levy, 4, -0.1, 10, RandomStream::new(1)).is_err());
        assert!("markov_pauli".parse::<TailKind>().unwrap() == TailKind::MarkovPauli);
        assert!("bogus".parse::<TailKind>().is_err());
    }

    fn z_on_first_qubit(n: usize) -> CMat {
        let d = 1usize << n;
        CMat::from_fn(d, d, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else if i < d / 2 {
                c64(1.0, 0.0)
            } else {
                c64(-1.0, 0.0)
            }
        })
    }

    #[test]
    fn barren_exact_oracles_and_mc() {
        let z = pauli_z();
        let rho0 = CMat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        let cfg = BarrenConfig {
            n_qubits: 1,
            observable: z.clone(),
            generator: z.clone(),
            initial_state: rho0,
            samples: 40000,
        };
        let report = barren_plateau_experiment(&cfg, RandomStream::new(127)).unwrap();

        assert!((report.exact_var_c - 1.0 / 3.0).abs() < 1e-14);
        assert!((report.exact_var_dc - 8.0 / 9.0).abs() < 1e-14);
        assert!(
            report.mean_c.abs() <= 5.0 * report.mean_c_std_error,
            "mean_c = {} (se {})",
            report.mean_c,
            report.mean_c_std_error
        );
        assert!(
            (report.var_c - report.exact_var_c).abs() <= 5.0 * report.var_c_std_error,
            "var_c = {} vs {}",
            report.var_c,
            report.exact_var_c
        );
        assert!(
            (report.var_dc - report.exact_var_dc).abs() <= 5.0 * report.var_dc_std_error,
            "var_dc = {} vs {}",
            report.var_dc,
            report.exact_var_dc
        );
    }

    #[test]
    fn barren_gradient_variance_scaling() {
        // On the Z⊗I… family with pure ρ₀, the closed form gives
        // Var[∂C] = 2d²(d−1)/(d²−1)², which decays as Θ(1/d).
        let mut previous = f64::NAN;
        for n in 1..=4usize {
            let d = 1usize << n;
            let z = z_on_first_qubit(n);
            let rho0 = CMat::from_fn(d, d, |i, j| {
                if i == 0 && j == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
            });
            let v = exact_gradient_variance(&rho0, &z, &z).unwrap();
            let df = d as f64;
            let formula = 2.0 * df * df * (df - 1.0) / ((df * df - 1.0) * (df * df - 1.0));
            assert!((v - formula).abs() < 1e-14, "n = {n}");
            if n > 1 {
                let ratio = v / previous;
                assert!(ratio < 0.7, "variance must decay: ratio {ratio} at n = {n}");
            }
            previous = v;
        }
    }

    #[test]
    fn barren_validation_errors() {
        let z = pauli_z();
        let rho0 = CMat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        let base = BarrenConfig {
            n_qubits: 1,
            observable: z.clone(),
            generator: z.clone(),
            initial_state: rho0.clone(),
            samples: 10,
        };

        let mut traceful = base.clone();
        traceful.observable = CMat::identity(2);
        assert!(matches!(
            barren_plateau_experiment(&traceful, RandomStream::new(1)),
            Err(Error::Invalid(_))
        ));

        let mut non_hermitian = base.clone();
        non_hermitian.generator = CMat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 1 { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        assert!(barren_plateau_experiment(&non_hermitian, RandomStream::new(1)).is_err());

        let mut wrong_dim = base.clone();
        wrong_dim.observable = CMat::zeros(4, 4);
        assert!(matches!(
            barren_plateau_experiment(&wrong_dim, RandomStream::new(1)),
            Err(Error::Dimension(_))
        ));

        let mut capped = base.clone();
        capped.n_qubits = 6;
        assert!(matches!(
            barren_plateau_experiment(&capped, RandomStream::new(1)),
            Err(Error::ResourceCap(_))
        ));

        let mut no_samples = base;
        no_samples.samples = 1;
        assert!(matches!(
            barren_plateau_experiment(&no_samples, RandomStream::new(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn barren_experiment_is_deterministic() {
        let z = pauli_z();
        let rho0 = CMat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        let cfg = BarrenConfig {
            n_qubits: 1,
            observable: z.clone(),
            generator: z,
            initial_state: rho0,
            samples: 200,
        };
        let a = barren_plateau_experiment(&cfg, RandomStream::new(131)).unwrap();
        let b = barren_plateau_experiment(&cfg, RandomStream::new(131)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_moment_reduces_to_flip_identity() {
        // E[(U⊗Ū)X(U⊗Ū)†] must fix both I and |Ω⟩⟨Ω| — the commutant of the
        // U⊗Ū representation.
        let d = 3usize;
        let eye = CMat::identity(d * d);
        assert!(mixed_second_moment(&eye, d).unwrap().max_abs_diff(&eye) < 1e-12);
        let omega = CMat::from_fn(d * d, 1, |row, _| {
            if row / d == row % d { c64(1.0, 0.0) } else { c64(0.0, 0.0) }
        });
        let proj = omega.mul(&omega.dagger());
        assert!(mixed_second_moment(&proj, d).unwrap().max_abs_diff(&proj) < 1e-12);
        // And the partial transpose of |Ω⟩⟨Ω| is the flip operator.
        assert!(partial_transpose_second(&proj, d).max_abs_diff(&flip(d)) < TOL_ALGEBRAIC);
    }
}
