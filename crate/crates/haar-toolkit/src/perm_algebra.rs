//! The symmetric group `S_k` and its action on `(ℂ^d)^{⊗k}` by permutation
//! operators `V_d(π)`, plus the Gram matrix of permutation-operator overlaps.
//!
//! Schur–Weyl duality makes these operators the backbone of every Haar-moment
//! computation: the commutant of `{U^{⊗k}}` is exactly their span, so the
//! `k`-th moment of anything reduces to linear algebra over at most `k!`
//! coefficients. The conventions are pinned here once and used everywhere:
//!
//! * One-line notation: a [`Permutation`] stores `mapping` with
//!   `π(i) = mapping[i]`, indices `0..k`.
//! * Composition is function composition: `compose(σ, π)(i) = σ(π(i))`.
//! * The operator `V_d(π)` moves the ket in slot `i` to slot `π(i)`:
//!   `V_d(π)|ψ_1…ψ_k⟩ = |ψ_{π⁻¹(1)}…ψ_{π⁻¹(k)}⟩`, which gives the
//!   representation property `V_d(σ)·V_d(π) = V_d(σπ)`.
//! * `Tr V_d(π) = d^{#cycles(π)}`, hence the Gram matrix
//!   `G_{π,σ} = Tr(V_d(π)†V_d(σ)) = d^{#cycles(π⁻¹σ)}` is computed
//!   combinatorially, never from dense matrices.
//!
//! Permutation operators are kept as index maps of length `d^k` (applying one
//! to a vector is `O(d^k)`); the dense `CMat` form is materialized on demand.

use crate::core_linalg::{c64, CMat, RealMat};
use crate::error::{Error, Result};

/// Soft cap on `k` for full `S_k` enumeration (`8! = 40320` elements).
pub const MAX_ENUM_K: usize = 8;
/// Soft cap on `k` for Gram/Weingarten tables (`6!² = 518400` entries).
pub const MAX_GRAM_K: usize = 6;
/// Soft cap on `d^k` for dense permutation-operator expansion.
pub const MAX_DENSE_DIM: usize = 65536;

/// `d^k` with the dense-expansion resource cap enforced.
pub fn checked_dense_dim(d: usize, k: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..k {
        dim = dim.checked_mul(d).unwrap_or(usize::MAX);
        if dim > MAX_DENSE_DIM {
            return Err(Error::ResourceCap(format!(
                "dense dimension d^k = {d}^{k} exceeds the cap of {MAX_DENSE_DIM}"
            )));
        }
    }
    Ok(dim)
}

/// Element of the symmetric group `S_k` in one-line notation:
/// `π(i) = mapping[i]` with indices in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// Validates that `mapping` is a bijection on `{0, …, k−1}`.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let k = mapping.len();
        if k == 0 {
            return Err(Error::Domain("permutation degree must be at least 1".into()));
        }
        let mut seen = vec![false; k];
        for &image in &mapping {
            if image >= k || seen[image] {
                return Err(Error::Domain(format!(
                    "mapping {mapping:?} is not a bijection on 0..{k}"
                )));
            }
            seen[image] = true;
        }
        Ok(Self { mapping })
    }

    /// The identity of `S_k`.
    pub fn identity(k: usize) -> Self {
        Self { mapping: (0..k).collect() }
    }

    /// The transposition swapping `a` and `b` in `S_k`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        if a >= k || b >= k || a == b {
            return Err(Error::Domain(format!(
                "transposition ({a} {b}) is not valid in S_{k}"
            )));
        }
        let mut mapping: Vec<usize> = (0..k).collect();
        mapping.swap(a, b);
        Ok(Self { mapping })
    }

    /// The degree `k`.
    pub fn degree(&self) -> usize {
        self.mapping.len()
    }

    /// Applies the permutation: `π(i)`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// One-line notation (the image list).
    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Function composition `self ∘ other`: `(self∘other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::Domain(format!(
                "cannot compose permutations of degrees {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        let mapping = other.mapping.iter().map(|&i| self.mapping[i]).collect();
        Ok(Self { mapping })
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.degree()];
        for (i, &image) in self.mapping.iter().enumerate() {
            mapping[image] = i;
        }
        Self { mapping }
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &image)| i == image)
    }

    /// Disjoint cycles (each starting at its smallest element, ordered by
    /// that element; fixed points included as 1-cycles).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.degree();
        let mut visited = vec![false; k];
        let mut cycles = Vec::new();
        for start in 0..k {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut next = self.mapping[start];
            while next != start {
                visited[next] = true;
                cycle.push(next);
                next = self.mapping[next];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Number of disjoint cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths sorted descending (the conjugacy-class label).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// The sign `(−1)^{k − #cycles}`; a group homomorphism to `{±1}`.
    pub fn sign(&self) -> i32 {
        if (self.degree() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// All of `S_k` in lexicographic one-line order, identity first.
pub fn enumerate_sk(k: usize) -> Result<Vec<Permutation>> {
    if k == 0 {
        return Err(Error::Domain("S_k requires k >= 1".into()));
    }
    if k > MAX_ENUM_K {
        return Err(Error::ResourceCap(format!(
            "enumerating S_{k} exceeds the cap of k <= {MAX_ENUM_K}"
        )));
    }
    let mut out = Vec::with_capacity((1..=k).product());
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(Permutation { mapping: current.clone() });
        // Next lexicographic permutation (classic next_permutation step).
        let Some(i) = (0..k - 1).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).expect("exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    Ok(out)
}

/// The permutation operator `V_d(π)` on `(ℂ^d)^{⊗k}`, stored implicitly.
///
/// Composite basis indices are mixed-radix over the `k` tensor slots, most
/// significant slot first (matching `kron`).
#[derive(Debug, Clone, PartialEq)]
pub struct PermOperator {
    perm: Permutation,
    local_dim: usize,
}

impl PermOperator {
    /// Pairs a permutation with a local dimension `d ≥ 1`.
    pub fn new(perm: Permutation, local_dim: usize) -> Result<Self> {
        if local_dim == 0 {
            return Err(Error::Dimension("local dimension must be positive".into()));
        }
        Ok(Self { perm, local_dim })
    }

    /// The underlying permutation.
    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// The local dimension `d`.
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Total dimension `d^k` (resource-capped).
    pub fn dim(&self) -> Result<usize> {
        checked_dense_dim(self.local_dim, self.perm.degree())
    }

    /// The index map `src` with `(V_d(π)ψ)[J] = ψ[src[J]]`: the source index
    /// `I` for output index `J` has digit `i_l = j_{π(l)}` in each slot `l`
    /// (slot `l`'s ket moves to slot `π(l)`).
    pub fn index_map(&self) -> Result<Vec<usize>> {
        let d = self.local_dim;
        let k = self.perm.degree();
        let dim = self.dim()?;
        // Strides: slot l (most significant first) has stride d^{k−1−l}.
        let mut strides = vec![1usize; k];
        for l in (0..k.saturating_sub(1)).rev() {
            strides[l] = strides[l + 1] * d;
        }
        let mut map = vec![0usize; dim];
        for (out_index, entry) in map.iter_mut().enumerate() {
            let mut src = 0usize;
            for l in 0..k {
                let digit = (out_index / strides[self.perm.apply(l)]) % d;
                src += digit * strides[l];
            }
            *entry = src;
        }
        Ok(map)
    }

    /// Dense matrix form: a 0/1 matrix with exactly one unit per row and
    /// column, `V[J, src[J]] = 1`.
    pub fn matrix(&self) -> Result<CMat> {
        let dim = self.dim()?;
        let map = self.index_map()?;
        let mut m = CMat::zeros(dim, dim);
        for (row, &col) in map.iter().enumerate() {
            m.set(row, col, c64(1.0, 0.0));
        }
        Ok(m)
    }

    /// `Tr V_d(π) = d^{#cycles(π)}`, computed combinatorially.
    pub fn trace(&self) -> f64 {
        (self.local_dim as f64).powi(self.perm.cycle_count() as i32)
    }
}

/// The `k!×k!` Gram matrix `G_{π,σ} = Tr(V_d(π)†V_d(σ)) = d^{#cycles(π⁻¹σ)}`,
/// rows/columns indexed by [`enumerate_sk`] order. Symmetric and positive
/// semidefinite; entries are computed combinatorially.
pub fn gram_matrix(k: usize, d: usize) -> Result<RealMat> {
    if k > MAX_GRAM_K {
        return Err(Error::ResourceCap(format!(
            "Gram matrix for S_{k} exceeds the cap of k <= {MAX_GRAM_K}"
        )));
    }
    if d == 0 {
        return Err(Error::Dimension("local dimension must be positive".into()));
    }
    let perms = enumerate_sk(k)?;
    let n = perms.len();
    let mut g = RealMat::zeros(n, n);
    for (r, pi) in perms.iter().enumerate() {
        let pi_inv = pi.inverse();
        for (c, sigma) in perms.iter().enumerate() {
            let rel = pi_inv.compose(sigma).expect("same degree");
            g.set(r, c, (d as f64).powi(rel.cycle_count() as i32));
        }
    }
    Ok(g)
}
