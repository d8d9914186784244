//! Classical-shadow tomography over the global Clifford ensemble: snapshot
//! generation, measurement-channel inversion, median-of-means estimation,
//! and variance bounds.
//!
//! The protocol: apply a uniformly random Clifford `U` to `ρ`, measure in
//! the computational basis to get outcome `b`, and record the pair. Because
//! the Clifford group is a 3-design, the measurement channel
//! `M(ρ) = E[U†|b⟩⟨b|U]` and the estimator variance have the same closed
//! forms as for Haar: `M(x) = (Tr(x)·I + x)/(d + 1)`, inverted by
//! `M⁻¹(x) = (d + 1)·x − Tr(x)·I`, giving the single-shot estimator
//! `ô = (d + 1)·⟨b|U O U†|b⟩ − Tr(O)` with `E[ô] = Tr(Oρ)`.
//!
//! Simulation is dense and capped at [`MAX_SHADOW_QUBITS`] qubits so that
//! every quantity stays oracle-checkable by exact enumeration.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_linalg::{CMat, TOL_STRUCTURAL};
use crate::ensembles::{sample_clifford, CliffordElement, CliffordGate, RandomStream};
use crate::error::{Error, Result};
use crate::stats::{mean_and_std_error, median, variance_and_std_error};

/// Largest qubit count for dense shadow simulation.
pub const MAX_SHADOW_QUBITS: usize = 3;

/// One recorded shadow measurement: the Clifford circuit that was applied
/// and the computational-basis outcome observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Gate sequence of the sampled Clifford (first gate acts first).
    pub circuit: Vec<CliffordGate>,
    /// Measured basis index `b ∈ [0, 2^n)`.
    pub outcome: usize,
}

/// An ordered, replayable log of shadow snapshots. Estimation is a
/// deterministic fold over this log, so saving and reloading it reproduces
/// every estimate bit-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotLog {
    /// Format version of the log file.
    pub schema_version: u32,
    /// Qubit count of every snapshot in the log.
    pub n_qubits: usize,
    /// The snapshots, in sampling order.
    pub records: Vec<Snapshot>,
}

impl SnapshotLog {
    /// Serializes the log to a JSON file.
    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("snapshot log serialization failed: {e}")))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Reads a log previously written by [`SnapshotLog::save`].
    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let log: SnapshotLog = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("snapshot log parse failed: {e}")))?;
        if log.n_qubits == 0 || log.n_qubits > MAX_SHADOW_QUBITS {
            return Err(Error::ResourceCap(format!(
                "snapshot log declares {} qubits, supported range is 1..={MAX_SHADOW_QUBITS}",
                log.n_qubits
            )));
        }
        Ok(log)
    }
}

/// A median-of-means estimate of one observable's expectation value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowEstimate {
    /// Index of the observable in the input list.
    pub observable_index: usize,
    /// Median of the batch means.
    pub estimate: f64,
    /// The `K` batch means the median was taken over.
    pub batch_means: Vec<f64>,
    /// Total number of snapshots used.
    pub n_snapshots: usize,
    /// Number of batches `K`.
    pub k_batches: usize,
}

/// The trace of a square matrix, as a real number (callers pass Hermitian
/// inputs; the imaginary part is round-off).
fn real_trace(m: &CMat) -> f64 {
    m.trace().re
}

/// Simulates one computational-basis measurement of `UρU†`: returns `b`
/// with the Born probability `⟨b|UρU†|b⟩`.
pub fn simulate_measurement(rho: &CMat, u: &CMat, rng: &mut ChaCha12Rng) -> Result<usize> {
    if !rho.is_density(TOL_STRUCTURAL) {
        return Err(Error::Invalid("measurement input must be a density matrix".into()));
    }
    if !u.is_unitary(TOL_STRUCTURAL) || u.rows() != rho.rows() {
        return Err(Error::Invalid("rotation must be a unitary of matching dimension".into()));
    }
    let rotated = u.mul(rho).mul(&u.dagger());
    let probs: Vec<f64> = (0..rho.rows()).map(|b| rotated.get(b, b).re).collect();
    born_sample(&probs, rng)
}

/// Inverse-CDF sampling from a Born distribution, validating the invariant
/// that the probabilities are nonnegative and sum to 1.
fn born_sample(probs: &[f64], rng: &mut ChaCha12Rng) -> Result<usize> {
    let mut total = 0.0;
    for &p in probs {
        if p < -TOL_STRUCTURAL {
            return Err(Error::Numerical(format!("negative Born probability {p:.3e}")));
        }
        total += p;
    }
    if (total - 1.0).abs() > TOL_STRUCTURAL {
        return Err(Error::Numerical(format!(
            "Born probabilities sum to {total}, expected 1"
        )));
    }
    let x: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (b, &p) in probs.iter().enumerate() {
        acc += p.max(0.0);
        if x < acc {
            return Ok(b);
        }
    }
    Ok(probs.len() - 1)
}

/// The global-Clifford measurement channel `M(x) = (Tr(x)·I + x)/(d + 1)`.
pub fn measurement_channel(x: &CMat) -> Result<CMat> {
    if !x.is_square() {
        return Err(Error::Dimension("measurement channel needs a square input".into()));
    }
    let d = x.rows();
    let tr = x.trace();
    Ok(CMat::identity(d).scale(tr).add(x).scale_re(1.0 / (d as f64 + 1.0)))
}

/// The inverse of the measurement channel, `M⁻¹(x) = (d + 1)·x − Tr(x)·I`.
pub fn inverse_channel(x: &CMat) -> Result<CMat> {
    if !x.is_square() {
        return Err(Error::Dimension("inverse channel needs a square input".into()));
    }
    let d = x.rows();
    let tr = x.trace();
    Ok(x.scale_re(d as f64 + 1.0).sub(&CMat::identity(d).scale(tr)))
}

fn qubit_count(d: usize) -> Result<usize> {
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::Dimension(format!(
            "shadow states live on 2^n with n >= 1, got dimension {d}"
        )));
    }
    let n = d.trailing_zeros() as usize;
    if n > MAX_SHADOW_QUBITS {
        return Err(Error::ResourceCap(format!(
            "dense shadow simulation supports 1..={MAX_SHADOW_QUBITS} qubits, got {n}"
        )));
    }
    Ok(n)
}

/// Samples `n_snapshots` classical shadows of `rho`: snapshot `i` draws its
/// Clifford from substream `2i` and its measurement outcome from substream
/// `2i + 1`, so the log is deterministic in the stream and independent of
/// thread count.
pub fn collect_snapshots(
    rho: &CMat,
    n_snapshots: usize,
    stream: RandomStream,
) -> Result<SnapshotLog> {
    if !rho.is_density(TOL_STRUCTURAL) {
        return Err(Error::Invalid("shadow input must be a density matrix".into()));
    }
    let n = qubit_count(rho.rows())?;
    if n_snapshots == 0 {
        return Err(Error::Domain("need at least one snapshot".into()));
    }
    let records: Vec<Snapshot> = (0..n_snapshots as u64)
        .into_par_iter()
        .map(|i| {
            let clifford = sample_clifford(
                n,
                stream.with_stream(stream.stream_id.wrapping_add(2 * i)),
            )?;
            let u = clifford.matrix();
            let rotated = u.mul(rho).mul(&u.dagger());
            let probs: Vec<f64> = (0..rho.rows()).map(|b| rotated.get(b, b).re).collect();
            let mut rng = stream
                .with_stream(stream.stream_id.wrapping_add(2 * i + 1))
                .rng();
            let outcome = born_sample(&probs, &mut rng)?;
            Ok(Snapshot { circuit: clifford.circuit().to_vec(), outcome })
        })
        .collect::<Result<Vec<Snapshot>>>()?;
    Ok(SnapshotLog { schema_version: 1, n_qubits: n, records })
}

/// Replays a snapshot log against one observable, returning the single-shot
/// estimates `ô_i = (d + 1)·⟨b_i|U_i O U_i†|b_i⟩ − Tr(O)` in log order.
pub fn single_shot_estimates(log: &SnapshotLog, observable: &CMat) -> Result<Vec<f64>> {
    let n = log.n_qubits;
    if n == 0 || n > MAX_SHADOW_QUBITS {
        return Err(Error::ResourceCap(format!(
            "snapshot log declares {n} qubits, supported range is 1..={MAX_SHADOW_QUBITS}"
        )));
    }
    let d = 1usize << n;
    if observable.rows() != d || observable.cols() != d {
        return Err(Error::Dimension(format!("observable must be {d}×{d}")));
    }
    if !observable.is_hermitian(TOL_STRUCTURAL) {
        return Err(Error::Invalid("observable must be Hermitian".into()));
    }
    let tr_o = real_trace(observable);
    log.records
        .par_iter()
        .map(|snap| {
            if snap.outcome >= d {
                return Err(Error::Invalid(format!(
                    "snapshot outcome {} out of range for {d} basis states",
                    snap.outcome
                )));
            }
            let u = CliffordElement::from_circuit(n, snap.circuit.clone())?;
            let rotated = u.matrix().mul(observable).mul(&u.matrix().dagger());
            Ok((d as f64 + 1.0) * rotated.get(snap.outcome, snap.outcome).re - tr_o)
        })
        .collect()
}

/// Median-of-means estimation of `Tr(O_i ρ)` for each observable, from a
/// recorded snapshot log: the `N` single-shot estimates are split into `K`
/// contiguous batches and the estimate is the median of the batch means.
pub fn estimate_from_log(
    log: &SnapshotLog,
    observables: &[CMat],
    k_batches: usize,
) -> Result<Vec<ShadowEstimate>> {
    let n_snapshots = log.records.len();
    if observables.is_empty() {
        return Err(Error::Invalid("need at least one observable".into()));
    }
    if k_batches == 0 {
        return Err(Error::Domain("need at least one batch".into()));
    }
    if n_snapshots / k_batches < 10 {
        return Err(Error::Domain(format!(
            "median-of-means needs at least 10 snapshots per batch, got {n_snapshots} snapshots in {k_batches} batches"
        )));
    }
    observables
        .iter()
        .enumerate()
        .map(|(idx, o)| {
            let shots = single_shot_estimates(log, o)?;
            let batch_means: Vec<f64> = (0..k_batches)
                .map(|j| {
                    let lo = j * n_snapshots / k_batches;
                    let hi = (j + 1) * n_snapshots / k_batches;
                    shots[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
                })
                .collect();
            Ok(ShadowEstimate {
                observable_index: idx,
                estimate: median(&batch_means),
                batch_means,
                n_snapshots,
                k_batches: k_batches,
            })
        })
        .collect()
}

/// Convenience composition: collect a fresh snapshot log of `rho` and run
/// median-of-means estimation for every observable.
pub fn estimate_observables(
    rho: &CMat,
    observables: &[CMat],
    n_snapshots: usize,
    k_batches: usize,
    stream: RandomStream,
) -> Result<Vec<ShadowEstimate>> {
    let log = collect_snapshots(rho, n_snapshots, stream)?;
    estimate_from_log(&log, observables, k_batches)
}

/// How [`shadow_variance`] should be computed.
#[derive(Debug, Clone, Copy)]
pub enum VarianceMode {
    /// The dimension-free bound `3·Tr(O²)`.
    Bound,
    /// The exact single-shot variance for a 3-design ensemble, in terms of
    /// the traceless part `O⁰ = O − Tr(O)·I/d`:
    /// `(d+1)/(d+2) · (Tr(O⁰²) + 2·Tr(ρO⁰²)) − Tr(O⁰ρ)²`.
    Exact,
    /// Bessel-corrected sample variance of freshly sampled single-shot
    /// estimates.
    Empirical { snapshots: usize, stream: RandomStream },
}

/// Variance of the single-shot shadow estimator of `O` on `rho`, by bound,
/// exact closed form, or empirical sampling.
pub fn shadow_variance(rho: &CMat, observable: &CMat, mode: VarianceMode) -> Result<f64> {
    let d = rho.rows();
    if !rho.is_density(TOL_STRUCTURAL) {
        return Err(Error::Invalid("state must be a density matrix".into()));
    }
    if observable.rows() != d || observable.cols() != d {
        return Err(Error::Dimension(format!("observable must be {d}×{d}")));
    }
    if !observable.is_hermitian(TOL_STRUCTURAL) {
        return Err(Error::Invalid("observable must be Hermitian".into()));
    }
    match mode {
        VarianceMode::Bound => Ok(3.0 * real_trace(&observable.mul(observable))),
        VarianceMode::Exact => {
            let traceless = observable.sub(
                &CMat::identity(d).scale_re(real_trace(observable) / d as f64),
            );
            let t2 = traceless.mul(&traceless);
            let first = real_trace(&t2) + 2.0 * real_trace(&rho.mul(&t2));
            let mean = real_trace(&traceless.mul(rho));
            Ok((d as f64 + 1.0) / (d as f64 + 2.0) * first - mean * mean)
        }
        VarianceMode::Empirical { snapshots, stream } => {
            if snapshots < 2 {
                return Err(Error::Domain("empirical variance needs at least 2 snapshots".into()));
            }
            let log = collect_snapshots(rho, snapshots, stream)?;
            let shots = single_shot_estimates(&log, observable)?;
            let (mean, _) = mean_and_std_error(&shots);
            Ok(variance_and_std_error(&shots, mean).0)
        }
    }
}

/// Snapshot budget for estimating `m` observables to accuracy `ε` with
/// failure probability `δ`, given a variance ceiling: returns
/// `(N, K) = (⌈4·ln(2m/δ)·max_variance/ε²⌉, ⌈2·ln(2m/δ)⌉)`.
///
/// The paper-level analysis fixes only the asymptotic form
/// `N = O(log(2m/δ)·max Var/ε²)`; these explicit constants are validated
/// empirically by the median-of-means failure-rate test.
pub fn sample_complexity(
    m: usize,
    epsilon: f64,
    delta: f64,
    max_variance: f64,
) -> Result<(usize, usize)> {
    if m == 0 {
        return Err(Error::Domain("need at least one observable".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain("epsilon and delta must lie in (0, 1)".into()));
    }
    if !(max_variance > 0.0) {
        return Err(Error::Domain("max_variance must be positive".into()));
    }
    let log_term = (2.0 * m as f64 / delta).ln();
    let n_raw = (4.0 * log_term * max_variance / (epsilon * epsilon)).ceil();
    let k_raw = (2.0 * log_term).ceil();
    if !n_raw.is_finite() || n_raw > 1e15 {
        return Err(Error::ResourceCap(format!("snapshot budget {n_raw:.3e} is not tractable")));
    }
    Ok((n_raw as usize, k_raw as usize))
}
