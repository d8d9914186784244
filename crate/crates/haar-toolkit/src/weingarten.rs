//! Exact Haar moments on `U(d)` via the Weingarten calculus.
//!
//! The `k`-th moment operator `M^{(k)}(O) = E_U[U^{⊗k} O U^{†⊗k}]` is the
//! orthogonal projector onto the commutant of `{U^{⊗k}}`, which Schur–Weyl
//! duality identifies with the span of the permutation operators `V_d(π)`.
//! Everything here follows from one linear system over that span:
//!
//! * **Gram solve.** `M(O) = Σ_π c_π(O) V_d(π)` where the coefficient vector
//!   solves `G c = t` with `G_{π,σ} = d^{#cycles(π⁻¹σ)}` and
//!   `t_σ = Tr(V_d(σ)†O)`. The system is solved with the Moore–Penrose
//!   pseudo-inverse of `G` (eigenvalues below `1e-10 × λ_max` are treated as
//!   zero), because `G` is exactly rank-deficient whenever `k > d`.
//! * **Weingarten table.** `Wg(π⁻¹σ, d) = (G⁺)_{π,σ}`; the table is the
//!   identity row of the pseudo-inverse and is a class function (it depends
//!   only on cycle type). For `k ≤ d`, `G⁺ = G⁻¹` exactly.
//! * **Closed forms.** `k = 1`: `M(O) = Tr(O)/d·I`. `k = 2`:
//!   `M(O) = c_𝕀 𝕀 + c_𝔽 𝔽` with
//!   `c_𝕀 = (Tr O − d⁻¹Tr(𝔽O))/(d²−1)` and
//!   `c_𝔽 = (Tr(𝔽O) − d⁻¹Tr O)/(d²−1)`.
//! * **Vectorized form.** `M^{(k)} = E[U^{⊗k} ⊗ U^{*⊗k}]
//!   = Σ_{π,σ} Wg(π⁻¹σ)|V_π⟩⟩⟨⟨V_σ|` is an orthogonal projector of rank
//!   `dim Comm = rank(G)`; its entries are the mixed moments
//!   `E[Π_l U_{i_l j_l} Π_l U*_{m_l n_l}]`, exposed by [`entry_moment`].
//!
//! Unbalanced products (unequal counts of `U` and `U*`) integrate to zero by
//! the global-phase invariance of the Haar measure.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::core_linalg::{c64, flip, sym_pinv, sym_rank, CMat, RealMat};
use crate::error::{Error, Result};
use crate::perm_algebra::{
    checked_dense_dim, enumerate_sk, gram_matrix, PermOperator, Permutation,
};

/// Relative eigenvalue cutoff for the Gram pseudo-inverse. Gram matrices are
/// exactly rank-deficient for `k > d`: the cutoff sits far above
/// double-precision noise and far below the smallest true eigenvalue at desk
/// scale.
pub const PINV_REL_CUTOFF: f64 = 1e-10;
/// Cap on `k` for dense moment-operator expansion (coefficients remain
/// available up to the Gram cap).
pub const MAX_MOMENT_K: usize = 4;
/// Cap on `d^{2k}` for the vectorized moment operator.
pub const MAX_VECTORIZED_DIM: usize = 4096;

/// The Weingarten coefficients `Wg(·, d)` on `S_k`, together with the Gram
/// matrix and its pseudo-inverse in [`enumerate_sk`] order.
#[derive(Debug, Clone)]
pub struct WeingartenTable {
    k: usize,
    d: usize,
    perms: Vec<Permutation>,
    gram: RealMat,
    pinv: RealMat,
    rank: usize,
    coefficients: BTreeMap<Permutation, f64>,
}

impl WeingartenTable {
    /// Tensor order `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Local dimension `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The elements of `S_k` in table order.
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// The Gram matrix `G_{π,σ} = d^{#cycles(π⁻¹σ)}`.
    pub fn gram(&self) -> &RealMat {
        &self.gram
    }

    /// The pseudo-inverse `G⁺` (the matrix of `Wg(π⁻¹σ, d)`).
    pub fn pinv_matrix(&self) -> &RealMat {
        &self.pinv
    }

    /// `rank(G) = dim Comm(U(d), k)`; equals `k!` iff `k ≤ d`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The map `π ↦ Wg(π, d)`.
    pub fn coefficients(&self) -> &BTreeMap<Permutation, f64> {
        &self.coefficients
    }

    /// `Wg(π, d)` for a single permutation.
    pub fn coefficient(&self, p: &Permutation) -> Option<f64> {
        self.coefficients.get(p).copied()
    }
}

/// Builds the Weingarten table for `(k, d)` from the Gram pseudo-inverse.
pub fn weingarten_table(k: usize, d: usize) -> Result<WeingartenTable> {
    let gram = gram_matrix(k, d)?;
    let pinv = sym_pinv(&gram, PINV_REL_CUTOFF)?;
    let rank = sym_rank(&gram, PINV_REL_CUTOFF)?;
    let perms = enumerate_sk(k)?;
    // Wg(π) = (G⁺)_{e,π}; the identity is first in enumeration order.
    let coefficients = perms
        .iter()
        .enumerate()
        .map(|(j, p)| (p.clone(), pinv.get(0, j)))
        .collect();
    Ok(WeingartenTable { k, d, perms, gram, pinv, rank, coefficients })
}

/// The expansion coefficients `c_π(O)` of a Haar moment in the permutation
/// basis: `E[U^{⊗k} O U^{†⊗k}] = Σ_π c_π(O) V_d(π)`.
#[derive(Debug, Clone)]
pub struct MomentCoefficients {
    k: usize,
    d: usize,
    c: BTreeMap<Permutation, Complex64>,
}

impl MomentCoefficients {
    /// Tensor order `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Local dimension `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The map `π ↦ c_π(O)`.
    pub fn coefficients(&self) -> &BTreeMap<Permutation, Complex64> {
        &self.c
    }

    /// Materializes `Σ_π c_π V_d(π)` densely.
    pub fn assemble(&self) -> Result<CMat> {
        assemble_permutation_combination(&self.c, self.d)
    }
}

/// Dense `Σ_π c_π V_d(π)` from a coefficient map (scatter per index map;
/// `O(k!·d^k)` work, no dense matrix per permutation).
fn assemble_permutation_combination(
    c: &BTreeMap<Permutation, Complex64>,
    d: usize,
) -> Result<CMat> {
    let k = c
        .keys()
        .next()
        .ok_or_else(|| Error::Invalid("empty coefficient map".into()))?
        .degree();
    let dim = checked_dense_dim(d, k)?;
    let mut m = CMat::zeros(dim, dim);
    for (p, &coeff) in c {
        if p.degree() != k {
            return Err(Error::Dimension("mixed degrees in coefficient map".into()));
        }
        let map = PermOperator::new(p.clone(), d)?.index_map()?;
        for (row, &col) in map.iter().enumerate() {
            let cur = m.get(row, col);
            m.set(row, col, cur + coeff);
        }
    }
    Ok(m)
}

/// Solves the Gram system `G c = t`, `t_σ = Tr(V_d(σ)†O)`, for the moment
/// coefficients of `O` (a `d^k × d^k` matrix). The residual `‖Gc − t‖_∞` is
/// verified to be below `1e-9` (a solution always exists because the
/// right-hand side lies in the range of `G`).
pub fn moment_coefficients(o: &CMat, k: usize, d: usize) -> Result<MomentCoefficients> {
    let dim = checked_dense_dim(d, k)?;
    if o.rows() != dim || o.cols() != dim {
        return Err(Error::Dimension(format!(
            "observable must be {dim}x{dim} for d = {d}, k = {k}; got {}x{}",
            o.rows(),
            o.cols()
        )));
    }
    let table = weingarten_table(k, d)?;
    let n = table.perms.len();

    // t_σ = Tr(V(σ)†O) = Σ_J O[J, src_σ(J)].
    let mut t = vec![c64(0.0, 0.0); n];
    let mut maps = Vec::with_capacity(n);
    for (idx, p) in table.perms.iter().enumerate() {
        let map = PermOperator::new(p.clone(), d)?.index_map()?;
        t[idx] = map
            .iter()
            .enumerate()
            .map(|(row, &col)| o.get(row, col))
            .sum();
        maps.push(map);
    }

    // c = G⁺ t (G⁺ is real; apply to real and imaginary parts).
    let c: Vec<Complex64> = (0..n)
        .map(|r| {
            (0..n)
                .map(|j| t[j] * table.pinv.get(r, j))
                .sum()
        })
        .collect();

    // Residual check ‖Gc − t‖_∞.
    let mut residual: f64 = 0.0;
    for r in 0..n {
        let gc: Complex64 = (0..n).map(|j| c[j] * table.gram.get(r, j)).sum();
        residual = residual.max((gc - t[r]).norm());
    }
    let scale = t.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if residual > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "Gram solve residual {residual:.3e} exceeds tolerance"
        )));
    }

    let map = table
        .perms
        .iter()
        .cloned()
        .zip(c)
        .collect::<BTreeMap<_, _>>();
    Ok(MomentCoefficients { k, d, c: map })
}

/// Dense `E[U^{⊗k} O U^{†⊗k}]` via the Gram solve; trace-preserving and
/// idempotent. Capped at `k ≤ 4` and `d^k ≤ 65536` (use
/// [`moment_coefficients`] alone beyond that).
pub fn moment_apply_exact(o: &CMat, k: usize, d: usize) -> Result<CMat> {
    if k > MAX_MOMENT_K {
        return Err(Error::ResourceCap(format!(
            "dense moment expansion capped at k <= {MAX_MOMENT_K}, got {k}"
        )));
    }
    moment_coefficients(o, k, d)?.assemble()
}

/// Closed form for `k = 1`: `E[U O U†] = Tr(O)/d · I`.
pub fn first_moment_closed_form(o: &CMat, d: usize) -> Result<CMat> {
    if o.rows() != d || o.cols() != d {
        return Err(Error::Dimension(format!(
            "first moment expects a {d}x{d} matrix, got {}x{}",
            o.rows(),
            o.cols()
        )));
    }
    Ok(CMat::identity(d).scale(o.trace() / (d as f64)))
}

/// Closed form for `k = 2`: `E[U^{⊗2} O U^{†⊗2}] = c_𝕀 𝕀 + c_𝔽 𝔽` with
/// `c_𝕀 = (Tr O − d⁻¹Tr(𝔽O))/(d²−1)`, `c_𝔽 = (Tr(𝔽O) − d⁻¹Tr O)/(d²−1)`.
pub fn second_moment_closed_form(o: &CMat, d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::Domain(
            "second moment closed form requires d >= 2".into(),
        ));
    }
    let dim = d * d;
    if o.rows() != dim || o.cols() != dim {
        return Err(Error::Dimension(format!(
            "second moment expects a {dim}x{dim} matrix, got {}x{}",
            o.rows(),
            o.cols()
        )));
    }
    let f = flip(d);
    let tr_o = o.trace();
    let tr_fo = f.mul(o).trace();
    let denom = (d * d - 1) as f64;
    let dinv = 1.0 / d as f64;
    let c_id = (tr_o - tr_fo * dinv) / denom;
    let c_flip = (tr_fo - tr_o * dinv) / denom;
    Ok(CMat::identity(dim).scale(c_id).add(&f.scale(c_flip)))
}

/// The vectorized moment operator `M^{(k)} = E[U^{⊗k} ⊗ U^{*⊗k}]
/// = Σ_{π,σ} Wg(π⁻¹σ, d) |V_π⟩⟩⟨⟨V_σ|` as a dense `d^{2k} × d^{2k}` matrix.
/// An orthogonal projector with `Tr M^{(k)} = rank(G) = dim Comm`.
pub fn vectorized_moment_operator(k: usize, d: usize) -> Result<CMat> {
    let dim_k = checked_dense_dim(d, k)?;
    let dim = match dim_k.checked_mul(dim_k) {
        Some(v) if v <= MAX_VECTORIZED_DIM => v,
        _ => {
            return Err(Error::ResourceCap(format!(
                "vectorized moment operator needs d^2k = {dim_k}² entries per side, cap is {MAX_VECTORIZED_DIM}"
            )))
        }
    };
    let table = weingarten_table(k, d)?;
    let maps: Vec<Vec<usize>> = table
        .perms
        .iter()
        .map(|p| PermOperator::new(p.clone(), d).and_then(|op| op.index_map()))
        .collect::<Result<_>>()?;

    // vec(V_π) is supported on indices J·d^k + src_π(J), all entries 1.
    let mut m = CMat::zeros(dim, dim);
    for (a, map_a) in maps.iter().enumerate() {
        for (b, map_b) in maps.iter().enumerate() {
            let w = table.pinv.get(a, b);
            if w == 0.0 {
                continue;
            }
            for (ja, &sa) in map_a.iter().enumerate() {
                let row = ja * dim_k + sa;
                for (jb, &sb) in map_b.iter().enumerate() {
                    let col = jb * dim_k + sb;
                    let cur = m.get(row, col);
                    m.set(row, col, cur + c64(w, 0.0));
                }
            }
        }
    }
    Ok(m)
}

/// Mixed matrix-entry moment
/// `E[U_{r_1 c_1}⋯U_{r_p c_p} · U*_{m_1 n_1}⋯U*_{m_q n_q}]`.
///
/// Returns 0 when `p ≠ q` (unbalanced products vanish under the Haar
/// measure). For balanced products of order `k = p` this is
/// `Σ_{π,σ} [∀l: m_l = r_{π(l)}] [∀l: n_l = c_{σ(l)}] (G⁺)_{π,σ}` — one
/// entry of the vectorized moment operator.
pub fn entry_moment(
    rows: &[usize],
    cols: &[usize],
    conj_rows: &[usize],
    conj_cols: &[usize],
    d: usize,
) -> Result<Complex64> {
    if rows.len() != cols.len() || conj_rows.len() != conj_cols.len() {
        return Err(Error::Dimension(
            "each factor needs one row and one column index".into(),
        ));
    }
    if d == 0 {
        return Err(Error::Dimension("local dimension must be positive".into()));
    }
    if [rows, cols, conj_rows, conj_cols]
        .iter()
        .any(|ix| ix.iter().any(|&i| i >= d))
    {
        return Err(Error::Domain(format!("matrix index out of range for d = {d}")));
    }
    if rows.len() != conj_rows.len() {
        return Ok(c64(0.0, 0.0)); // unbalanced: vanishes by phase invariance
    }
    let k = rows.len();
    if k == 0 {
        return Ok(c64(1.0, 0.0)); // empty product
    }
    let table = weingarten_table(k, d)?;
    let row_valid: Vec<usize> = table
        .perms
        .iter()
        .enumerate()
        .filter(|(_, p)| (0..k).all(|l| conj_rows[l] == rows[p.apply(l)]))
        .map(|(i, _)| i)
        .collect();
    let col_valid: Vec<usize> = table
        .perms
        .iter()
        .enumerate()
        .filter(|(_, p)| (0..k).all(|l| conj_cols[l] == cols[p.apply(l)]))
        .map(|(i, _)| i)
        .collect();
    let mut sum = 0.0;
    for &a in &row_valid {
        for &b in &col_valid {
            sum += table.pinv.get(a, b);
        }
    }
    Ok(c64(sum, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_linalg::{identity2, kron_power, qr, vec_mat};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_cmat(dim: usize, rng: &mut ChaCha12Rng) -> CMat {
        CMat::from_fn(dim, dim, |_, _| {
            c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    fn some_unitary(d: usize, seed: u64) -> CMat {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let (q, _) = qr(&random_cmat(d, &mut rng));
        q
    }

    #[test]
    fn table_k1_and_k2() {
        for d in 1..=5usize {
            let t = weingarten_table(1, d).unwrap();
            let e = Permutation::identity(1);
            assert!((t.coefficient(&e).unwrap() - 1.0 / d as f64).abs() <= 1e-14);
        }

        let t = weingarten_table(2, 2).unwrap();
        let e = Permutation::identity(2);
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        assert!((t.coefficient(&e).unwrap() - 1.0 / 3.0).abs() <= 1e-13);
        assert!((t.coefficient(&swap).unwrap() + 1.0 / 6.0).abs() <= 1e-13);

        // Wg(e) = 1/(d²−1), Wg(swap) = −1/(d(d²−1)) for d = 3..6.
        for d in 3..=6usize {
            let t = weingarten_table(2, d).unwrap();
            let denom = (d * d - 1) as f64;
            assert!((t.coefficient(&e).unwrap() - 1.0 / denom).abs() <= 1e-13);
            assert!((t.coefficient(&swap).unwrap() + 1.0 / (d as f64 * denom)).abs() <= 1e-13);
        }
    }

    #[test]
    fn table_is_class_function_and_pinv_property() {
        for k in 1..=4usize {
            for d in 2..=4usize {
                let t = weingarten_table(k, d).unwrap();
                // Same cycle type ⇒ same coefficient.
                let mut by_type: std::collections::BTreeMap<Vec<usize>, Vec<f64>> =
                    Default::default();
                for (p, &w) in t.coefficients() {
                    by_type.entry(p.cycle_type()).or_default().push(w);
                }
                for values in by_type.values() {
                    let spread = values.iter().fold(0.0f64, |m, &v| m.max((v - values[0]).abs()));
                    assert!(spread <= 1e-12, "spread {spread} at k={k}, d={d}");
                }
                // G·G⁺·G = G (Moore–Penrose defining property).
                let g = t.gram();
                let back = g.mul(t.pinv_matrix()).mul(g);
                assert!(back.max_abs_diff(g) <= 1e-9 * g.frobenius_norm());
            }
        }
    }

    #[test]
    fn rank_equals_commutant_dimension() {
        assert_eq!(weingarten_table(2, 17).unwrap().rank(), 2);
        assert_eq!(weingarten_table(3, 2).unwrap().rank(), 5);
        assert_eq!(weingarten_table(4, 2).unwrap().rank(), 14);
        assert_eq!(weingarten_table(3, 3).unwrap().rank(), 6);
    }

    #[test]
    fn coefficients_reproduce_commutant_fixed_points() {
        // O = V_d(π) must come back unchanged from the moment projector.
        for (k, d) in [(2usize, 3usize), (2, 2), (3, 2)] {
            for p in enumerate_sk(k).unwrap() {
                let v = PermOperator::new(p, d).unwrap().matrix().unwrap();
                let m = moment_apply_exact(&v, k, d).unwrap();
                assert!(m.approx_eq(&v, 1e-10), "k={k}, d={d}");
            }
        }
    }

    #[test]
    fn coefficients_for_basis_projector() {
        // O = |0,0⟩⟨0,0| at d = k = 2: M(O) = P_sym/3 ⇒ c_e = c_swap = 1/6.
        let mut o = CMat::zeros(4, 4);
        o.set(0, 0, c64(1.0, 0.0));
        let mc = moment_coefficients(&o, 2, 2).unwrap();
        for coeff in mc.coefficients().values() {
            assert!((coeff - c64(1.0 / 6.0, 0.0)).norm() <= 1e-13);
        }
        let expected = identity2(2).add(&flip(2)).scale_re(1.0 / 6.0);
        assert!(mc.assemble().unwrap().approx_eq(&expected, 1e-13));
    }

    #[test]
    fn traceless_flip_orthogonal_input_has_zero_moment() {
        // O = Z⊗I: Tr O = 0 and Tr(𝔽O) = Tr(Z) = 0 ⇒ c ≡ 0.
        let z = CMat::new(2, 2, vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)]).unwrap();
        let o = crate::core_linalg::kron(&z, &CMat::identity(2));
        let mc = moment_coefficients(&o, 2, 2).unwrap();
        for coeff in mc.coefficients().values() {
            assert!(coeff.norm() <= 1e-13);
        }
        assert!(moment_apply_exact(&o, 2, 2).unwrap().max_abs() <= 1e-13);
    }

    #[test]
    fn moment_apply_known_values() {
        // k=1: O = |0⟩⟨0| → I/2.
        let mut o = CMat::zeros(2, 2);
        o.set(0, 0, c64(1.0, 0.0));
        let m = moment_apply_exact(&o, 1, 2).unwrap();
        assert!(m.approx_eq(&CMat::identity(2).scale_re(0.5), 1e-14));

        // k=2: O = 𝔽 → 𝔽 (commutant element).
        let f = flip(2);
        assert!(moment_apply_exact(&f, 2, 2).unwrap().approx_eq(&f, 1e-12));

        // k=2: O = |0,0⟩⟨0,0| → (𝕀+𝔽)/6.
        let mut o = CMat::zeros(4, 4);
        o.set(0, 0, c64(1.0, 0.0));
        let m = moment_apply_exact(&o, 2, 2).unwrap();
        let expected = identity2(2).add(&flip(2)).scale_re(1.0 / 6.0);
        assert!(m.approx_eq(&expected, 1e-13));
    }

    #[test]
    fn projector_laws_on_random_inputs() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for (k, d) in [(2usize, 2usize), (3, 2), (2, 3)] {
            let dim = d.pow(k as u32);
            let o = random_cmat(dim, &mut rng);
            let m1 = moment_apply_exact(&o, k, d).unwrap();
            // Trace preservation.
            assert!((m1.trace() - o.trace()).norm() <= 1e-11);
            // Idempotence.
            let m2 = moment_apply_exact(&m1, k, d).unwrap();
            assert!(m2.approx_eq(&m1, 1e-11));
            // Commutant membership.
            let u = some_unitary(d, 100 + k as u64);
            let uk = kron_power(&u, k);
            let comm = m1.mul(&uk).sub(&uk.mul(&m1));
            assert!(comm.max_abs() <= 1e-9);
        }
    }

    #[test]
    fn moment_is_self_adjoint() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let a = random_cmat(4, &mut rng);
        let b = random_cmat(4, &mut rng);
        let ma = moment_apply_exact(&a, 2, 2).unwrap();
        let mb = moment_apply_exact(&b, 2, 2).unwrap();
        let lhs = ma.hs_inner(&b);
        let rhs = a.hs_inner(&mb);
        assert!((lhs - rhs).norm() <= 1e-11);
    }

    #[test]
    fn closed_forms_match_gram_route() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        for d in 2..=4usize {
            let o1 = random_cmat(d, &mut rng);
            let first = first_moment_closed_form(&o1, d).unwrap();
            assert!(first.approx_eq(&moment_apply_exact(&o1, 1, d).unwrap(), 1e-12));

            let o2 = random_cmat(d * d, &mut rng);
            let second = second_moment_closed_form(&o2, d).unwrap();
            assert!(second.approx_eq(&moment_apply_exact(&o2, 2, d).unwrap(), 1e-12));
        }
        // Degenerate and identity cases.
        assert!(second_moment_closed_form(&CMat::identity(1), 1).is_err());
        let id4 = identity2(2);
        assert!(second_moment_closed_form(&id4, 2).unwrap().approx_eq(&id4, 1e-13));
        let i3 = CMat::identity(3);
        assert!(first_moment_closed_form(&i3, 3).unwrap().approx_eq(&i3, 1e-14));
    }

    #[test]
    fn vectorized_operator_is_projector_with_commutant_rank() {
        // k=1: M = |I⟩⟩⟨⟨I|/d.
        for d in [2usize, 3] {
            let m = vectorized_moment_operator(1, d).unwrap();
            let v = vec_mat(&CMat::identity(d));
            let expected = v.mul(&v.dagger()).scale_re(1.0 / d as f64);
            assert!(m.approx_eq(&expected, 1e-13));
        }
        for (k, d, rank) in [(2usize, 2usize, 2.0), (3, 2, 5.0), (2, 3, 2.0)] {
            let m = vectorized_moment_operator(k, d).unwrap();
            assert!(m.is_hermitian(1e-10));
            assert!(m.mul(&m).approx_eq(&m, 1e-10));
            assert!((m.trace().re - rank).abs() <= 1e-9);
        }
        assert!(vectorized_moment_operator(4, 4).is_err());
    }

    #[test]
    fn entry_moments_known_values() {
        // E[U_{00}U*_{00}] = 1/d.
        for d in 2..=4usize {
            let v = entry_moment(&[0], &[0], &[0], &[0], d).unwrap();
            assert!((v - c64(1.0 / d as f64, 0.0)).norm() <= 1e-13);
        }
        // Unbalanced vanishes.
        assert_eq!(entry_moment(&[0], &[0], &[], &[], 2).unwrap(), c64(0.0, 0.0));

        // E[|U_{00}|⁴] = 2/(d(d+1)).
        for d in 2..=3usize {
            let v = entry_moment(&[0, 0], &[0, 0], &[0, 0], &[0, 0], d).unwrap();
            let expected = 2.0 / (d as f64 * (d as f64 + 1.0));
            assert!((v.re - expected).abs() <= 1e-13);
        }

        // E[U_{00}U_{11}U*_{00}U*_{11}] at d = 2: only the identity pairing
        // survives on both sides (row and column indices are distinct), so
        // the value is Wg(e, 2) = 1/3. Cross-check: |U_{00}|² ~ Uniform[0,1]
        // and |U_{11}| = |U_{00}| at d = 2, so this is E[t²] = 1/3.
        let v = entry_moment(&[0, 1], &[0, 1], &[0, 1], &[0, 1], 2).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() <= 1e-13);

        // E[|U_{00}|²|U_{10}|²] at d = 2: both column pairings survive,
        // Wg(e) + Wg(swap) = 1/3 − 1/6 = 1/6 (= E[t(1−t)]).
        let v = entry_moment(&[0, 1], &[0, 0], &[0, 1], &[0, 0], 2).unwrap();
        assert!((v.re - 1.0 / 6.0).abs() <= 1e-13);
    }

    #[test]
    fn entry_moments_are_vectorized_operator_entries() {
        // M^{(k)}[(I,M̄),(J,N̄)] = E[Π U_{i j} Π U*_{m n}] with composite
        // indices (first k slots carry U, last k carry U*).
        let d = 2usize;
        let k = 2usize;
        let m = vectorized_moment_operator(k, d).unwrap();
        let dim_k = d.pow(k as u32);
        let digits = |x: usize| [(x / d) % d, x % d];
        for i_comp in 0..dim_k {
            for m_comp in 0..dim_k {
                for j_comp in 0..dim_k {
                    for n_comp in 0..dim_k {
                        let got = entry_moment(
                            &digits(i_comp),
                            &digits(j_comp),
                            &digits(m_comp),
                            &digits(n_comp),
                            d,
                        )
                        .unwrap();
                        let expected = m.get(i_comp * dim_k + m_comp, j_comp * dim_k + n_comp);
                        assert!((got - expected).norm() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn entry_moment_rejects_malformed_input() {
        assert!(entry_moment(&[0, 1], &[0], &[0], &[0], 2).is_err());
        assert!(entry_moment(&[2], &[0], &[0], &[0], 2).is_err());
    }
}
