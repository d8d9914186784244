//! Symmetric and antisymmetric subspace projectors on `(ℂ^d)^{⊗k}`, their
//! dimensions, and the Haar moment of pure states.
//!
//! The projectors are uniform (anti-)symmetrizations over `S_k`:
//!
//! * `P_sym = (1/k!) Σ_π V_d(π)`, rank `binom(k+d−1, k)`;
//! * `P_asym = (1/k!) Σ_π sgn(π) V_d(π)`, rank `binom(d, k)` for `d ≥ k`
//!   and identically zero otherwise (antisymmetrizing more factors than the
//!   local dimension supports kills every vector);
//! * for `k = 2` they resolve the identity: `P_sym + P_asym = 𝕀`.
//!
//! The `k`-th Haar moment of pure states is the normalized symmetric
//! projector: `E_ψ[|ψ⟩⟨ψ|^{⊗k}] = P_sym / Tr(P_sym)` — pure-state designs
//! live inside the symmetric subspace.
//!
//! Projectors are assembled by scattering permutation index maps
//! (`O(k!·d^k)` work) and cached per `(d, k)`; construction is guarded so
//! concurrent first requests build once.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::core_linalg::CMat;
use crate::error::Result;
use crate::perm_algebra::{checked_dense_dim, enumerate_sk, PermOperator};

type ProjectorCache = Mutex<HashMap<(usize, usize, bool), Arc<CMat>>>;

static CACHE: OnceLock<ProjectorCache> = OnceLock::new();

fn build_projector(d: usize, k: usize, antisym: bool) -> Result<CMat> {
    let dim = checked_dense_dim(d, k)?;
    let mut m = CMat::zeros(dim, dim);
    let norm = 1.0 / (1..=k).product::<usize>() as f64;
    for p in enumerate_sk(k)? {
        let weight = if antisym { p.sign() as f64 * norm } else { norm };
        let map = PermOperator::new(p, d)?.index_map()?;
        for (row, &col) in map.iter().enumerate() {
            let cur = m.get(row, col);
            m.set(row, col, cur + crate::core_linalg::c64(weight, 0.0));
        }
    }
    Ok(m)
}

fn cached_projector(d: usize, k: usize, antisym: bool) -> Result<Arc<CMat>> {
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("projector cache poisoned");
    if let Some(hit) = guard.get(&(d, k, antisym)) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_projector(d, k, antisym)?);
    guard.insert((d, k, antisym), built.clone());
    Ok(built)
}

/// The orthogonal projector onto the symmetric subspace of `(ℂ^d)^{⊗k}`.
pub fn p_sym(d: usize, k: usize) -> Result<Arc<CMat>> {
    cached_projector(d, k, false)
}

/// The orthogonal projector onto the antisymmetric subspace of `(ℂ^d)^{⊗k}`
/// (the zero matrix when `d < k`).
pub fn p_asym(d: usize, k: usize) -> Result<Arc<CMat>> {
    cached_projector(d, k, true)
}

/// `dim Sym_k(ℂ^d) = binom(k+d−1, k)` (saturating at `u64::MAX`).
pub fn sym_dim(d: usize, k: usize) -> u64 {
    binom((k + d - 1) as u128, k as u128)
}

/// `dim ASym_k(ℂ^d) = binom(d, k)` for `d ≥ k`, else 0.
pub fn asym_dim(d: usize, k: usize) -> u64 {
    if d >= k {
        binom(d as u128, k as u128)
    } else {
        0
    }
}

fn binom(n: u128, k: u128) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc.try_into().unwrap_or(u64::MAX)
}

/// The `k`-th Haar moment of pure states:
/// `E[|ψ⟩⟨ψ|^{⊗k}] = P_sym / Tr(P_sym)` — positive semidefinite, trace 1,
/// supported on the symmetric subspace.
pub fn haar_state_moment(d: usize, k: usize) -> Result<CMat> {
    let p = p_sym(d, k)?;
    Ok(p.scale_re(1.0 / sym_dim(d, k) as f64))
}
