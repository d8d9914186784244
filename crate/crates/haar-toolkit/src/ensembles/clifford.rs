//! Clifford-group machinery: gate circuits over `{H, S, CNOT}`, the full
//! 24-element single-qubit group, and exact uniform sampling of `n`-qubit
//! Cliffords (modulo global phase) via a stabilizer-tableau sweep.
//!
//! The sampler follows the reduction of van den Berg (arXiv:2008.06011):
//! for each level `l` it draws a uniformly random signed non-identity Pauli
//! `a` and a random anticommuting partner `b` on qubits `l..n`, then applies
//! a deterministic gate sweep conjugating `(a, b) → (X_l, Z_l)`. The
//! accumulated sweep circuit `C` therefore satisfies `C a_l C† = X_l`, and
//! the returned unitary is `U = C†`, whose tableau realizes the sampled
//! pairs. Counting valid pairs per level gives
//! `∏_{j=1..n} 2·4^j·(4^j − 1)` distinct outcomes — exactly the order of
//! the Clifford group modulo phase — so the distribution is uniform.
//!
//! Global phases are fixed cosmetically: every returned matrix is scaled so
//! its first nonzero entry (row-major) is real and positive.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::{pauli_basis, pauli_matrices_1q, RandomStream};
use crate::core_linalg::{c64, kron, CMat};
use crate::error::{Error, Result};

/// Cap on qubit count for dense Clifford sampling (`2^5 = 32`-dimensional
/// matrices; the tableau itself would scale much further, but every sample
/// here materializes its dense matrix).
pub const MAX_CLIFFORD_QUBITS: usize = 5;

/// One generator gate in a Clifford circuit. Qubit 0 is the first (most
/// significant) tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliffordGate {
    /// Hadamard on one qubit.
    H(usize),
    /// Phase gate `diag(1, i)` on one qubit.
    S(usize),
    /// Controlled-NOT.
    Cnot {
        /// Control qubit.
        control: usize,
        /// Target qubit.
        target: usize,
    },
}

/// A Clifford unitary carried as both a generator circuit and its dense
/// matrix. The circuit `[g_1, …, g_m]` is in temporal order (`g_1` acts
/// first), so the matrix is `G_m ⋯ G_1` up to the canonical global phase.
#[derive(Debug, Clone)]
pub struct CliffordElement {
    n: usize,
    circuit: Vec<CliffordGate>,
    matrix: CMat,
}

impl CliffordElement {
    /// Builds the element for a circuit, validating qubit indices.
    pub fn from_circuit(n: usize, circuit: Vec<CliffordGate>) -> Result<Self> {
        if n == 0 || n > MAX_CLIFFORD_QUBITS {
            return Err(Error::ResourceCap(format!(
                "dense Clifford circuits support 1..={MAX_CLIFFORD_QUBITS} qubits, got {n}"
            )));
        }
        for g in &circuit {
            match *g {
                CliffordGate::H(q) | CliffordGate::S(q) => {
                    if q >= n {
                        return Err(Error::Invalid(format!("gate qubit {q} out of range for n={n}")));
                    }
                }
                CliffordGate::Cnot { control, target } => {
                    if control >= n || target >= n || control == target {
                        return Err(Error::Invalid(format!(
                            "invalid CNOT control={control} target={target} for n={n}"
                        )));
                    }
                }
            }
        }
        let mut matrix = CMat::identity(1 << n);
        for g in &circuit {
            matrix = gate_matrix(n, *g).mul(&matrix);
        }
        Ok(Self { n, circuit, matrix: canonical_phase(matrix) })
    }

    /// Qubit count.
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// The generator circuit in temporal order.
    pub fn circuit(&self) -> &[CliffordGate] {
        &self.circuit
    }

    /// The dense matrix (canonical global phase).
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Consumes the element, returning its matrix.
    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    /// Clifford membership check: conjugating every generator `X_j`, `Z_j`
    /// must land on a signed Pauli string — exactly one Pauli coefficient of
    /// magnitude 1 (and real sign), all others zero, within `tol`.
    pub fn conjugates_paulis_to_paulis(&self, tol: f64) -> Result<bool> {
        let basis = pauli_basis(self.n)?;
        let d = 1usize << self.n;
        let singles = pauli_matrices_1q();
        for q in 0..self.n {
            for letter in [1usize, 3] {
                // X_q and Z_q embedded in the full register.
                let mut p: Option<CMat> = None;
                for j in 0..self.n {
                    let factor = if j == q { singles[letter].clone() } else { CMat::identity(2) };
                    p = Some(match p {
                        None => factor,
                        Some(acc) => kron(&acc, &factor),
                    });
                }
                let conj = self.matrix.mul(&p.expect("n >= 1")).mul(&self.matrix.dagger());
                let mut big = 0usize;
                for pauli in &basis {
                    let coeff = pauli.hs_inner(&conj) / d as f64;
                    if (coeff.norm() - 1.0).abs() <= tol {
                        if coeff.im.abs() > tol {
                            return Ok(false);
                        }
                        big += 1;
                    } else if coeff.norm() > tol {
                        return Ok(false);
                    }
                }
                if big != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Dense matrix of one generator gate embedded on `n` qubits.
pub fn gate_matrix(n: usize, gate: CliffordGate) -> CMat {
    let dim = 1usize << n;
    match gate {
        CliffordGate::H(q) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let h = CMat::new(2, 2, vec![c64(s, 0.), c64(s, 0.), c64(s, 0.), c64(-s, 0.)])
                .expect("static shape");
            embed_1q(n, q, &h)
        }
        CliffordGate::S(q) => {
            let s = CMat::new(2, 2, vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 1.)])
                .expect("static shape");
            embed_1q(n, q, &s)
        }
        CliffordGate::Cnot { control, target } => CMat::from_fn(dim, dim, |i, j| {
            let control_bit = (j >> (n - 1 - control)) & 1;
            let image = if control_bit == 1 { j ^ (1 << (n - 1 - target)) } else { j };
            if i == image { c64(1., 0.) } else { c64(0., 0.) }
        }),
    }
}

fn embed_1q(n: usize, q: usize, g: &CMat) -> CMat {
    let mut m: Option<CMat> = None;
    for j in 0..n {
        let factor = if j == q { g.clone() } else { CMat::identity(2) };
        m = Some(match m {
            None => factor,
            Some(acc) => kron(&acc, &factor),
        });
    }
    m.expect("n >= 1")
}

/// Scales a matrix so its first nonzero entry (row-major scan) is real and
/// positive. Clifford matrices have nonzero entries of magnitude at least
/// `2^{-n/2}`, far above the `1e-12` dust threshold.
fn canonical_phase(m: CMat) -> CMat {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let w = m.get(i, j);
            if w.norm() > 1e-12 {
                return m.scale(w.conj() / w.norm());
            }
        }
    }
    m
}

/// The full 24-element single-qubit Clifford group (modulo phase), built as
/// the breadth-first closure of `{H, S}` starting from the identity. Each
/// element carries a shortest generator word as its circuit.
pub fn clifford_group_1q() -> Vec<CliffordElement> {
    let mut found: Vec<CliffordElement> = vec![CliffordElement {
        n: 1,
        circuit: vec![],
        matrix: canonical_phase(CMat::identity(2)),
    }];
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        for gate in [CliffordGate::H(0), CliffordGate::S(0)] {
            let parent = &found[idx];
            let matrix = canonical_phase(gate_matrix(1, gate).mul(&parent.matrix));
            if found.iter().all(|e| e.matrix.max_abs_diff(&matrix) > 1e-9) {
                let mut circuit = parent.circuit.clone();
                circuit.push(gate);
                found.push(CliffordElement { n: 1, circuit, matrix });
                frontier.push(found.len() - 1);
            }
        }
    }
    debug_assert_eq!(found.len(), 24);
    found
}

/// A signed Pauli string `(−1)^neg · ⊗_j letter_j` with per-qubit letters
/// `I/X/Y/Z` encoded as `(x_j, z_j)` bits (`Y = (1,1)`).
#[derive(Debug, Clone, PartialEq, Eq)]
struct SignedPauli {
    x: Vec<bool>,
    z: Vec<bool>,
    neg: bool,
}

impl SignedPauli {
    fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n], neg: false }
    }

    fn is_identity_pattern(&self) -> bool {
        !self.x.iter().any(|&v| v) && !self.z.iter().any(|&v| v)
    }

    fn anticommutes(&self, other: &Self) -> bool {
        let mut parity = false;
        for j in 0..self.x.len() {
            parity ^= (self.x[j] & other.z[j]) ^ (self.z[j] & other.x[j]);
        }
        parity
    }

    /// Conjugation `P ↦ g P g†` on the letter representation.
    fn apply_gate(&mut self, gate: CliffordGate) {
        match gate {
            CliffordGate::H(q) => {
                // X ↔ Z, Y ↦ −Y.
                if self.x[q] && self.z[q] {
                    self.neg = !self.neg;
                }
                let tmp = self.x[q];
                self.x[q] = self.z[q];
                self.z[q] = tmp;
            }
            CliffordGate::S(q) => {
                // X ↦ Y, Y ↦ −X, Z ↦ Z.
                if self.x[q] && self.z[q] {
                    self.neg = !self.neg;
                }
                self.z[q] ^= self.x[q];
            }
            CliffordGate::Cnot { control: c, target: t } => {
                // X_c ↦ X_cX_t, Z_t ↦ Z_cZ_t; sign flips iff
                // x_c ∧ z_t ∧ (x_t = z_c).
                if self.x[c] && self.z[t] && (self.x[t] == self.z[c]) {
                    self.neg = !self.neg;
                }
                self.x[t] ^= self.x[c];
                self.z[c] ^= self.z[t];
            }
        }
    }

    /// Dense matrix (tests and cross-checks only).
    #[cfg(test)]
    fn dense(&self) -> CMat {
        let singles = pauli_matrices_1q();
        let mut m: Option<CMat> = None;
        for j in 0..self.x.len() {
            let letter = match (self.x[j], self.z[j]) {
                (false, false) => 0usize,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            };
            let factor = singles[letter].clone();
            m = Some(match m {
                None => factor,
                Some(acc) => kron(&acc, &factor),
            });
        }
        let m = m.expect("n >= 1");
        if self.neg {
            m.scale_re(-1.0)
        } else {
            m
        }
    }
}

/// Uniform signed Pauli supported on qubits `l..n` (identity elsewhere);
/// optionally rejects the identity pattern.
fn random_signed_pauli(
    rng: &mut ChaCha12Rng,
    n: usize,
    l: usize,
    require_non_identity: bool,
) -> SignedPauli {
    use rand::Rng;
    loop {
        let mut p = SignedPauli::identity(n);
        for j in l..n {
            p.x[j] = rng.gen();
            p.z[j] = rng.gen();
        }
        p.neg = rng.gen();
        if !require_non_identity || !p.is_identity_pattern() {
            return p;
        }
    }
}

/// Appends a gate to the sweep circuit and conjugates both tracked Paulis.
fn push_gate(gate: CliffordGate, a: &mut SignedPauli, b: &mut SignedPauli, gates: &mut Vec<CliffordGate>) {
    a.apply_gate(gate);
    b.apply_gate(gate);
    gates.push(gate);
}

/// Conjugates the pattern of `p` to `±X_l` using gates on qubits `l..n`,
/// applying every gate to both `p` and `other`. Precondition: `p` is
/// non-identity on `l..n`.
fn reduce_pattern_to_x(
    p_is_a: bool,
    a: &mut SignedPauli,
    b: &mut SignedPauli,
    l: usize,
    gates: &mut Vec<CliffordGate>,
) {
    let n = a.x.len();
    // Step 1: clear z-components (Y → X via S, Z → X via H).
    for j in l..n {
        let (x, z) = if p_is_a { (a.x[j], a.z[j]) } else { (b.x[j], b.z[j]) };
        if z {
            let gate = if x { CliffordGate::S(j) } else { CliffordGate::H(j) };
            push_gate(gate, a, b, gates);
        }
    }
    // Step 2: merge the X-support pairwise with CNOTs, then swap to slot l.
    loop {
        let support: Vec<usize> = (l..n)
            .filter(|&j| if p_is_a { a.x[j] } else { b.x[j] })
            .collect();
        debug_assert!(!support.is_empty(), "pattern lost its support");
        if support.len() == 1 {
            let j = support[0];
            if j != l {
                push_gate(CliffordGate::Cnot { control: l, target: j }, a, b, gates);
                push_gate(CliffordGate::Cnot { control: j, target: l }, a, b, gates);
                push_gate(CliffordGate::Cnot { control: l, target: j }, a, b, gates);
            }
            break;
        }
        for pair in support.chunks(2) {
            if pair.len() == 2 {
                push_gate(CliffordGate::Cnot { control: pair[0], target: pair[1] }, a, b, gates);
            }
        }
    }
}

/// One sweep level: conjugates `(a, b) → (+X_l, +Z_l)` with gates on qubits
/// `l..n`. Precondition: `a` non-identity on `l..n`, `b` anticommutes with
/// `a`, both identity below `l`.
fn sweep_pair(a: &mut SignedPauli, b: &mut SignedPauli, l: usize, gates: &mut Vec<CliffordGate>) {
    let n = a.x.len();
    reduce_pattern_to_x(true, a, b, l, gates);
    // b anticommutes with a = ±X_l. If b is not already ±Z_l, rotate a to
    // the Z axis, reduce b the same way, and rotate back. During the inner
    // reduction b has x[l] = 1 (it anticommutes with Z_l), so qubit l only
    // ever sees S or CNOT-control operations — both fix Z_l.
    let b_is_zl = b.z[l]
        && !b.x[l..n].iter().any(|&v| v)
        && !b.z[l + 1..n].iter().any(|&v| v);
    if !b_is_zl {
        push_gate(CliffordGate::H(l), a, b, gates);
        debug_assert!(b.x[l], "anticommutation must force x at the pivot");
        reduce_pattern_to_x(false, a, b, l, gates);
        push_gate(CliffordGate::H(l), a, b, gates);
    }
    // Step 4: clear the signs with a Pauli correction on qubit l
    // (Z = SS flips X's sign, X = HSSH flips Z's sign, both = X then Z).
    let z_word = [CliffordGate::S(l), CliffordGate::S(l)];
    let x_word = [
        CliffordGate::H(l),
        CliffordGate::S(l),
        CliffordGate::S(l),
        CliffordGate::H(l),
    ];
    match (a.neg, b.neg) {
        (false, false) => {}
        (true, false) => {
            for g in z_word {
                push_gate(g, a, b, gates);
            }
        }
        (false, true) => {
            for g in x_word {
                push_gate(g, a, b, gates);
            }
        }
        (true, true) => {
            for g in x_word.into_iter().chain(z_word) {
                push_gate(g, a, b, gates);
            }
        }
    }
    debug_assert!(a.x[l] && !a.z[l] && !a.neg);
    debug_assert!(!b.x[l] && b.z[l] && !b.neg);
}

/// Draws a uniformly random `n`-qubit Clifford (modulo global phase),
/// returned with an explicit `{H, S, CNOT}` circuit realizing it.
pub fn sample_clifford(n: usize, stream: RandomStream) -> Result<CliffordElement> {
    if n == 0 || n > MAX_CLIFFORD_QUBITS {
        return Err(Error::ResourceCap(format!(
            "dense Clifford sampling supports 1..={MAX_CLIFFORD_QUBITS} qubits, got {n}"
        )));
    }
    let mut rng = stream.rng();
    let mut gates: Vec<CliffordGate> = Vec::new();
    for l in 0..n {
        let mut a = random_signed_pauli(&mut rng, n, l, true);
        let mut b = loop {
            let cand = random_signed_pauli(&mut rng, n, l, false);
            if cand.anticommutes(&a) {
                break cand;
            }
        };
        sweep_pair(&mut a, &mut b, l, &mut gates);
    }
    // gates as recorded satisfy C a_l C† = X_l; the sampled element is C†:
    // reverse the word and invert each gate (H and CNOT are involutions,
    // S† = S³).
    let mut circuit = Vec::with_capacity(gates.len() * 2);
    for g in gates.into_iter().rev() {
        match g {
            CliffordGate::S(q) => {
                circuit.extend([CliffordGate::S(q); 3]);
            }
            other => circuit.push(other),
        }
    }
    CliffordElement::from_circuit(n, circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_linalg::TOL_ALGEBRAIC;

    fn all_letter_paulis(n: usize) -> Vec<SignedPauli> {
        let mut out = Vec::new();
        for pattern in 0..(1usize << (2 * n)) {
            for neg in [false, true] {
                let mut p = SignedPauli::identity(n);
                for j in 0..n {
                    p.x[j] = (pattern >> (2 * j)) & 1 == 1;
                    p.z[j] = (pattern >> (2 * j + 1)) & 1 == 1;
                }
                p.neg = neg;
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn gate_conjugation_rules_match_dense_conjugation() {
        let n = 2;
        let gates = [
            CliffordGate::H(0),
            CliffordGate::H(1),
            CliffordGate::S(0),
            CliffordGate::S(1),
            CliffordGate::Cnot { control: 0, target: 1 },
            CliffordGate::Cnot { control: 1, target: 0 },
        ];
        for p in all_letter_paulis(n) {
            for gate in gates {
                let mut q = p.clone();
                q.apply_gate(gate);
                let g = gate_matrix(n, gate);
                let expected = g.mul(&p.dense()).mul(&g.dagger());
                assert!(
                    q.dense().approx_eq(&expected, 1e-13),
                    "rule mismatch for {gate:?} on {p:?}"
                );
            }
        }
    }

    #[test]
    fn sweep_reduces_random_pairs() {
        let n = 3;
        let stream = RandomStream::new(42);
        let mut rng = stream.rng();
        for l in 0..n {
            for _ in 0..200 {
                let a0 = random_signed_pauli(&mut rng, n, l, true);
                let b0 = loop {
                    let cand = random_signed_pauli(&mut rng, n, l, false);
                    if cand.anticommutes(&a0) {
                        break cand;
                    }
                };
                let (mut a, mut b) = (a0.clone(), b0.clone());
                let mut gates = Vec::new();
                sweep_pair(&mut a, &mut b, l, &mut gates);
                let mut x_l = SignedPauli::identity(n);
                x_l.x[l] = true;
                let mut z_l = SignedPauli::identity(n);
                z_l.z[l] = true;
                assert_eq!(a, x_l, "a not reduced from {a0:?}");
                assert_eq!(b, z_l, "b not reduced from {b0:?}");
                // Gates must act on qubits >= l only.
                for g in &gates {
                    let min_qubit = match *g {
                        CliffordGate::H(q) | CliffordGate::S(q) => q,
                        CliffordGate::Cnot { control, target } => control.min(target),
                    };
                    assert!(min_qubit >= l);
                }
            }
        }
    }

    #[test]
    fn clifford_group_1q_has_24_canonical_elements() {
        let group = clifford_group_1q();
        assert_eq!(group.len(), 24);
        // Identity is a member; all are unitary, phase-canonical, and the
        // set is closed under multiplication modulo phase.
        assert!(group.iter().any(|e| e.matrix().approx_eq(&CMat::identity(2), 1e-12)));
        for e in &group {
            assert!(e.matrix().is_unitary(TOL_ALGEBRAIC));
            let first = e
                .matrix()
                .entries()
                .iter()
                .find(|w| w.norm() > 1e-12)
                .copied()
                .unwrap();
            assert!(first.im.abs() <= 1e-12 && first.re > 0.0);
            assert!(e.conjugates_paulis_to_paulis(1e-9).unwrap());
            // Circuit reproduces the matrix.
            let rebuilt = CliffordElement::from_circuit(1, e.circuit().to_vec()).unwrap();
            assert_eq!(rebuilt.matrix().max_abs_diff(e.matrix()), 0.0);
        }
        for x in &group {
            for y in &group {
                let prod = canonical_phase(x.matrix().mul(y.matrix()));
                assert!(
                    group.iter().any(|e| e.matrix().max_abs_diff(&prod) <= 1e-9),
                    "group not closed"
                );
            }
        }
    }

    #[test]
    fn sampled_cliffords_are_clifford() {
        for n in 1..=3usize {
            for i in 0..30u64 {
                let e = sample_clifford(n, RandomStream::new(77).with_stream(i)).unwrap();
                assert!(e.matrix().is_unitary(1e-12));
                assert!(
                    e.conjugates_paulis_to_paulis(1e-9).unwrap(),
                    "sample n={n} i={i} failed membership"
                );
                let rebuilt = CliffordElement::from_circuit(n, e.circuit().to_vec()).unwrap();
                assert_eq!(rebuilt.matrix().max_abs_diff(e.matrix()), 0.0);
            }
        }
        assert!(sample_clifford(0, RandomStream::new(1)).is_err());
        assert!(sample_clifford(6, RandomStream::new(1)).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_clifford(3, RandomStream::new(5).with_stream(9)).unwrap();
        let b = sample_clifford(3, RandomStream::new(5).with_stream(9)).unwrap();
        assert_eq!(a.circuit(), b.circuit());
        assert_eq!(a.matrix().max_abs_diff(b.matrix()), 0.0);
    }

    #[test]
    fn single_qubit_sampling_is_uniform_over_24_classes() {
        // χ² over the 24 canonical classes: df = 23, critical value 49.73
        // at p = 0.001.
        let group = clifford_group_1q();
        let mut counts = vec![0usize; 24];
        let n = 24000u64;
        for i in 0..n {
            let e = sample_clifford(1, RandomStream::new(31).with_stream(i)).unwrap();
            let idx = group
                .iter()
                .position(|g| g.matrix().max_abs_diff(e.matrix()) <= 1e-9)
                .expect("sample must match a class");
            counts[idx] += 1;
        }
        let expected = n as f64 / 24.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 49.73, "χ² = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn two_qubit_tableau_first_column_is_uniform() {
        // U X_0 U† must be uniform over the 30 signed non-identity Paulis:
        // χ² with df = 29, critical value 58.30 at p = 0.001.
        let n_samples = 24000u64;
        let basis = pauli_basis(2).unwrap();
        let x0 = {
            let singles = pauli_matrices_1q();
            kron(&singles[1], &CMat::identity(2))
        };
        let mut counts = std::collections::HashMap::<(usize, bool), usize>::new();
        for i in 0..n_samples {
            let e = sample_clifford(2, RandomStream::new(63).with_stream(i)).unwrap();
            let conj = e.matrix().mul(&x0).mul(&e.matrix().dagger());
            let mut found = None;
            for (idx, p) in basis.iter().enumerate() {
                let coeff = p.hs_inner(&conj) / 4.0;
                if (coeff.re - 1.0).abs() <= 1e-9 {
                    found = Some((idx, false));
                    break;
                }
                if (coeff.re + 1.0).abs() <= 1e-9 {
                    found = Some((idx, true));
                    break;
                }
            }
            let key = found.expect("conjugate must be a signed Pauli");
            assert_ne!(key.0, 0, "X_0 cannot conjugate to identity");
            *counts.entry(key).or_insert(0) += 1;
        }
        assert!(counts.len() <= 30);
        let expected = n_samples as f64 / 30.0;
        let mut chi2 = 0.0;
        for idx in 1..16 {
            for neg in [false, true] {
                let c = counts.get(&(idx, neg)).copied().unwrap_or(0);
                chi2 += (c as f64 - expected).powi(2) / expected;
            }
        }
        assert!(chi2 < 58.30, "χ² = {chi2}");
    }

    #[test]
    fn product_order_convention() {
        // Circuit [H(0), S(0)] applies H first: matrix ∝ S·H.
        let e = CliffordElement::from_circuit(1, vec![CliffordGate::H(0), CliffordGate::S(0)]).unwrap();
        let expected = canonical_phase(
            gate_matrix(1, CliffordGate::S(0)).mul(&gate_matrix(1, CliffordGate::H(0))),
        );
        assert!(e.matrix().approx_eq(&expected, 1e-15));
    }
}
