//! Dense complex linear algebra: tensor products, partial traces,
//! vectorization, Schatten norms, and the two-copy Identity/Flip operators
//! everything else in this crate is built on.
//!
//! The carrier type is [`CMat`], a row-major dense complex matrix. All
//! decompositions (singular values, Hermitian eigensystems, QR) are
//! self-contained Jacobi/Householder routines with fixed sweep orders and
//! tolerances, so every result is deterministic — there is no BLAS/LAPACK
//! backend whose threading or kernel choice could perturb low-order bits.
//!
//! Conventions used throughout the crate:
//!
//! * `vec` is row-vectorization: `vec(|i⟩⟨j|) = |i⟩⊗|j⟩`, so
//!   `vec(ABC) = (A ⊗ Cᵀ) vec(B)` (the ABC-rule) and
//!   `⟨⟨A|B⟩⟩ = Tr(A†B)` is the Hilbert–Schmidt inner product.
//! * The flip operator `𝔽 = flip(d)` acts as `𝔽(|ψ⟩⊗|φ⟩) = |φ⟩⊗|ψ⟩` and
//!   satisfies the swap-trick `Tr((A⊗B)𝔽) = Tr(AB)`.
//! * Composite indices over tensor factors are mixed-radix, most significant
//!   factor first, matching the Kronecker product layout of [`kron`].

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Default absolute tolerance for structural flags (unitarity, density).
pub const TOL_STRUCTURAL: f64 = 1e-10;
/// Default absolute tolerance for algebraic identities.
pub const TOL_ALGEBRAIC: f64 = 1e-12;

/// Dense complex matrix with explicit shape, row-major storage.
///
/// The universal carrier for operators, states, unitaries, and vectorized
/// operators. Invariants: `data.len() == rows * cols` and all entries finite;
/// both are enforced by [`CMat::new`] and by the file loader.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Serde helper mirroring the repo-wide matrix file format.
#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CMat {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "entry count {} does not match shape {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Internal constructor for entries already known to be consistent.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// The all-zeros matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
    }

    /// The identity matrix of dimension `d`.
    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.data[i * d + i] = c64(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Column vector with a single 1 at `index` (computational basis state).
    pub fn basis_column(dim: usize, index: usize) -> Self {
        let mut m = Self::zeros(dim, 1);
        m.data[index] = c64(1.0, 0.0);
        m
    }

    /// Column vector from a complex slice.
    pub fn column(entries: &[Complex64]) -> Self {
        Self::from_raw(entries.len(), 1, entries.to_vec())
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Entry at (`i`, `j`).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// Sets the entry at (`i`, `j`).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix sum; shapes must agree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix addition requires equal shapes"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_raw(self.rows, self.cols, data)
    }

    /// Matrix difference; shapes must agree.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix subtraction requires equal shapes"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_raw(self.rows, self.cols, data)
    }

    /// Scalar multiple.
    pub fn scale(&self, z: Complex64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|a| a * z).collect())
    }

    /// Real scalar multiple.
    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(c64(x, 0.0))
    }

    /// Matrix product; inner dimensions must agree.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product requires inner dimensions to agree"
        );
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![c64(0.0, 0.0); m * n];
        for i in 0..m {
            for p in 0..k {
                let a = self.data[i * k + p];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[p * n..(p + 1) * n];
                let acc = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    acc[j] += a * row[j];
                }
            }
        }
        Self::from_raw(m, n, out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    /// Trace (square matrices).
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Hilbert–Schmidt inner product `Tr(self† · other)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "Hilbert-Schmidt inner product requires equal shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Frobenius (Schatten-2) norm, computed entrywise.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "difference requires equal shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Whether every entry of `self − other` is within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    /// Whether `‖self†·self − I‖` (entrywise max) is within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        self.dagger()
            .mul(self)
            .approx_eq(&Self::identity(self.rows), tol)
    }

    /// Whether `self` is Hermitian within `tol` (entrywise max).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), tol)
    }

    /// Whether `self` is a density matrix: Hermitian within `tol`,
    /// unit trace within `tol`, and minimum eigenvalue ≥ −`tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        if (self.trace() - c64(1.0, 0.0)).norm() > tol {
            return false;
        }
        match eigh_values(self) {
            Ok(vals) => vals.first().map(|&lo| lo >= -tol).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// 2-norm of a column/row vector.
    pub fn vector_norm(&self) -> f64 {
        assert!(
            self.cols == 1 || self.rows == 1,
            "vector norm requires a vector shape"
        );
        self.frobenius_norm()
    }

    /// Serializes to the repo-wide matrix file format: a JSON document with
    /// `rows`, `cols`, and `data` as a flat array of alternating
    /// real/imaginary parts in row-major order. Floats are printed with 18
    /// significant digits so the decimal round-trip is bit-exact.
    pub fn to_matrix_json(&self) -> String {
        let mut s = String::with_capacity(32 + 52 * self.data.len());
        s.push_str("{\n");
        s.push_str(&format!("  \"rows\": {},\n", self.rows));
        s.push_str(&format!("  \"cols\": {},\n", self.cols));
        s.push_str("  \"data\": [");
        for (idx, z) in self.data.iter().enumerate() {
            if idx > 0 {
                s.push(',');
            }
            s.push_str(&format!("{:.17e},{:.17e}", z.re, z.im));
        }
        s.push_str("]\n}\n");
        s
    }

    /// Writes the matrix file format produced by [`CMat::to_matrix_json`].
    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_matrix_json())?;
        Ok(())
    }

    /// Parses the matrix file format (inverse of [`CMat::to_matrix_json`]).
    pub fn from_matrix_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
        if file.data.len() != 2 * file.rows * file.cols {
            return Err(Error::Parse(format!(
                "matrix file data length {} does not match 2*{}*{}",
                file.data.len(),
                file.rows,
                file.cols
            )));
        }
        let entries = file
            .data
            .chunks_exact(2)
            .map(|p| c64(p[0], p[1]))
            .collect();
        Self::new(file.rows, file.cols, entries)
    }

    /// Reads a matrix file from disk.
    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_matrix_json(&text)
    }
}

/// Ordered local dimensions of tensor factors; mixed-radix index plumbing
/// for operators on `(ℂ^{d_1}) ⊗ … ⊗ (ℂ^{d_m})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims {
    dims: Vec<usize>,
}

impl SubsystemDims {
    /// Validates that all local dimensions are positive.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::Dimension(
                "subsystem dimensions must be a non-empty list of positive integers".into(),
            ));
        }
        Ok(Self { dims })
    }

    /// `k` copies of local dimension `d`.
    pub fn uniform(d: usize, k: usize) -> Result<Self> {
        Self::new(vec![d; k])
    }

    /// The local dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total (product) dimension.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    /// Whether there are no factors (never true for validated values).
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Kronecker (tensor) product. Entry `((i1,i2),(j1,j2)) = a[i1,j1]·b[i2,j2]`,
/// with composite indices laid out most-significant-factor-first.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut data = vec![c64(0.0, 0.0); rows * cols];
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let x = a.get(i1, j1);
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    data[(i1 * b.rows() + i2) * cols + (j1 * b.cols() + j2)] = x * b.get(i2, j2);
                }
            }
        }
    }
    CMat::from_raw(rows, cols, data)
}

/// Kronecker power `a^{⊗k}` (with `k ≥ 1`).
pub fn kron_power(a: &CMat, k: usize) -> CMat {
    assert!(k >= 1, "kron_power requires k >= 1");
    let mut out = a.clone();
    for _ in 1..k {
        out = kron(&out, a);
    }
    out
}

/// Partial trace over the factors *not* listed in `keep`.
///
/// `a` must be square with total dimension `dims.total()`; `keep` lists the
/// factor positions to retain, in increasing order. The result dimension is
/// the product of the kept local dimensions, and `Tr(result) = Tr(a)`.
pub fn partial_trace(a: &CMat, dims: &SubsystemDims, keep: &[usize]) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::Dimension("partial trace requires a square matrix".into()));
    }
    if dims.total() != a.rows() {
        return Err(Error::Dimension(format!(
            "subsystem dims product {} does not match matrix dimension {}",
            dims.total(),
            a.rows()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Dimension("keep set must be strictly increasing".into()));
    }
    if keep.iter().any(|&p| p >= dims.len()) {
        return Err(Error::Dimension("keep index out of range".into()));
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|p| !keep.contains(p)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&p| dims.dims()[p]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&p| dims.dims()[p]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Stride of each factor position in the full composite index.
    let mut strides = vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims.dims()[p + 1];
    }

    // Offset contributed by a block index expressed over a subset of factors.
    let offset = |positions: &[usize], local_dims: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for (pos, &dim) in positions.iter().zip(local_dims).rev() {
            off += (idx % dim) * strides[*pos];
            idx /= dim;
        }
        off
    };

    let mut out = CMat::zeros(dk.max(1), dk.max(1));
    for ik in 0..dk.max(1) {
        let row_k = offset(keep, &kept_dims, ik);
        for jk in 0..dk.max(1) {
            let col_k = offset(keep, &kept_dims, jk);
            let mut sum = c64(0.0, 0.0);
            for t in 0..dt.max(1) {
                let off_t = offset(&traced, &traced_dims, t);
                sum += a.get(row_k + off_t, col_k + off_t);
            }
            out.set(ik, jk, sum);
        }
    }
    Ok(out)
}

/// Row-vectorization: `vec(|i⟩⟨j|) = |i⟩⊗|j⟩` as a column of length
/// `rows·cols`. Satisfies the ABC-rule `vec(ABC) = (A⊗Cᵀ)vec(B)`.
pub fn vec_mat(a: &CMat) -> CMat {
    CMat::from_raw(a.rows() * a.cols(), 1, a.entries().to_vec())
}

/// Inverse of [`vec_mat`] for the given target shape.
pub fn unvec(v: &CMat, rows: usize, cols: usize) -> Result<CMat> {
    if v.cols() != 1 {
        return Err(Error::Dimension("unvec expects a column vector".into()));
    }
    if rows * cols != v.rows() {
        return Err(Error::Dimension(format!(
            "cannot reshape a length-{} vector into {}x{}",
            v.rows(),
            rows,
            cols
        )));
    }
    CMat::new(rows, cols, v.entries().to_vec())
}

/// Schatten `p`-norm: the `p`-norm of the singular-value vector.
/// `p = f64::INFINITY` returns the largest singular value.
pub fn schatten_norm(a: &CMat, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("Schatten norm requires p >= 1, got {p}")));
    }
    let sv = singular_values(a)?;
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    if p == 2.0 {
        return Ok(sv.iter().map(|s| s * s).sum::<f64>().sqrt());
    }
    Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Flip (swap) operator `𝔽` on `ℂ^d ⊗ ℂ^d`: `𝔽(|ψ⟩⊗|φ⟩) = |φ⟩⊗|ψ⟩`.
/// Hermitian, `𝔽² = 𝕀`, `Tr 𝔽 = d`.
pub fn flip(d: usize) -> CMat {
    let mut f = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            // 𝔽|j,i⟩ = |i,j⟩  ⇒  F[(i,j),(j,i)] = 1
            f.set(i * d + j, j * d + i, c64(1.0, 0.0));
        }
    }
    f
}

/// Two-copy identity `𝕀` on `ℂ^d ⊗ ℂ^d` (`Tr 𝕀 = d²`).
pub fn identity2(d: usize) -> CMat {
    CMat::identity(d * d)
}

// ---------------------------------------------------------------------------
// Self-contained decompositions (deterministic fixed-order Jacobi sweeps).
// ---------------------------------------------------------------------------

/// Relative threshold below which a Jacobi rotation is skipped.
const JACOBI_REL_TOL: f64 = 1e-14;
/// Hard cap on Jacobi sweeps (convergence is typically < 15 sweeps).
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dimension-aware relative tolerance for Jacobi convergence: inner products
/// accumulated over `n` terms carry round-off of order `ε·n`, so a fixed
/// threshold would sit below the attainable noise floor for larger matrices
/// (and for "dust" inputs that are pure round-off, like the difference of an
/// exact design's moment operator from the Haar projector).
fn jacobi_tol(n: usize) -> f64 {
    JACOBI_REL_TOL.max(8.0 * f64::EPSILON * n as f64)
}

/// Singular values in descending order, by one-sided Jacobi orthogonalization
/// of the columns (applied to the adjoint when the matrix is wide).
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    // Column-major working copy of the tall orientation.
    let (m, n) = if a.rows() >= a.cols() {
        (a.rows(), a.cols())
    } else {
        (a.cols(), a.rows())
    };
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..m)
                .map(|i| {
                    if a.rows() >= a.cols() {
                        a.get(i, j)
                    } else {
                        a.get(j, i).conj()
                    }
                })
                .collect()
        })
        .collect();

    // Columns whose norm falls below ε·‖A‖_F are numerical zeros: they arise
    // when a rotation merges two (near-)parallel columns, leaving round-off
    // dust that can stay *parallel* to the surviving column. For such a pair
    // the relative cosine never shrinks while the required rotation angle
    // underflows to zero, so a purely relative criterion would spin forever.
    // ‖A‖_F² = Σ‖col‖² is exactly invariant under the rotations, making it a
    // stable reference scale; a column this small contributes at most
    // ε·‖A‖_F to any singular value, far below what the sweep can resolve.
    let frob_sq: f64 = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    let col_floor_sq = frob_sq * (f64::EPSILON * f64::EPSILON);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = c64(0.0, 0.0);
                for i in 0..m {
                    let x = cols[p][i];
                    let y = cols[q][i];
                    app += x.norm_sqr();
                    aqq += y.norm_sqr();
                    apq += x.conj() * y;
                }
                if app <= col_floor_sq || aqq <= col_floor_sq {
                    continue;
                }
                let scale = (app * aqq).sqrt();
                if apq.norm() <= jacobi_tol(m) * scale {
                    continue;
                }
                rotated = true;
                let (cs, sn, phase) = jacobi_rotation(app, aqq, apq);
                for i in 0..m {
                    let x = cols[p][i];
                    let y = cols[q][i];
                    cols[p][i] = x * cs - y * (phase * sn);
                    cols[q][i] = x * sn + y * (phase * cs);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "one-sided Jacobi SVD did not converge".into(),
        ));
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    Ok(sv)
}

/// The 2×2 complex Jacobi rotation diagonalizing the Hermitian Gram block
/// `[[app, apq], [conj(apq), aqq]]`. Returns `(cos, sin, e^{-i·arg(apq)})`;
/// the rotation applied to column pairs is
/// `p' = cs·p − e^{-iφ}·sn·q`, `q' = sn·p + e^{-iφ}·cs·q`.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, f64, Complex64) {
    let abs = apq.norm();
    let phase = apq.conj() / abs; // e^{-iφ}
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    (cs, sn, phase)
}

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic Jacobi).
pub fn eigh_values(a: &CMat) -> Result<Vec<f64>> {
    Ok(eigh(a)?.0)
}

/// Full Hermitian eigensystem `(eigenvalues ascending, eigenvector columns)`
/// by cyclic two-sided Jacobi. `a` must be Hermitian within structural
/// tolerance; the strictly-lower triangle is mirrored from the upper.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !a.is_square() {
        return Err(Error::Dimension("eigh requires a square matrix".into()));
    }
    if !a.is_hermitian(1e-8) {
        return Err(Error::Invalid("eigh requires a Hermitian matrix".into()));
    }
    let n = a.rows();
    // Hermitize exactly so rotations preserve symmetry to machine precision.
    let mut h = CMat::from_fn(n, n, |i, j| {
        let z = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
        if i == j {
            c64(z.re, 0.0)
        } else {
            z
        }
    });
    let mut vecs = CMat::identity(n);
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                off += h.get(p, q).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= jacobi_tol(n) * norm {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = h.get(p, q);
                if apq.norm() <= jacobi_tol(n) * norm / (n as f64) {
                    continue;
                }
                let app = h.get(p, p).re;
                let aqq = h.get(q, q).re;
                let (cs, sn, phase) = jacobi_rotation(app, aqq, apq);
                // Right action on columns p,q: H ← H·V.
                for i in 0..n {
                    let x = h.get(i, p);
                    let y = h.get(i, q);
                    h.set(i, p, x * cs - y * (phase * sn));
                    h.set(i, q, x * sn + y * (phase * cs));
                }
                // Left action on rows p,q: H ← V†·H.
                for j in 0..n {
                    let x = h.get(p, j);
                    let y = h.get(q, j);
                    h.set(p, j, x * cs - y * (phase.conj() * sn));
                    h.set(q, j, x * sn + y * (phase.conj() * cs));
                }
                // Accumulate eigenvectors: W ← W·V.
                for i in 0..n {
                    let x = vecs.get(i, p);
                    let y = vecs.get(i, q);
                    vecs.set(i, p, x * cs - y * (phase * sn));
                    vecs.set(i, q, x * sn + y * (phase * cs));
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical("Hermitian Jacobi did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite").then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| vecs.get(i, order[j]));
    Ok((values, vectors))
}

/// Householder QR factorization `a = Q·R` with `Q` unitary (`m×m`) and `R`
/// upper triangular (`m×n`).
pub fn qr(a: &CMat) -> (CMat, CMat) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = CMat::identity(m);

    for k in 0..n.min(m.saturating_sub(1)) {
        // Householder vector for column k below the diagonal.
        let mut norm_x = 0.0;
        for i in k..m {
            norm_x += r.get(i, k).norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r.get(k, k);
        let alpha = if x0.norm() == 0.0 {
            c64(-norm_x, 0.0)
        } else {
            -(x0 / x0.norm()) * norm_x
        };
        let mut v: Vec<Complex64> = (k..m).map(|i| r.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= f64::MIN_POSITIVE {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // R ← (I − 2vv†) R on rows k.., columns k..
        for j in k..n {
            let dot: Complex64 = (0..m - k).map(|i| v[i].conj() * r.get(k + i, j)).sum();
            for i in 0..m - k {
                let cur = r.get(k + i, j);
                r.set(k + i, j, cur - 2.0 * v[i] * dot);
            }
        }
        // Q ← Q (I − 2vv†) on columns k..
        for i in 0..m {
            let dot: Complex64 = (0..m - k).map(|j| q.get(i, k + j) * v[j]).sum();
            for j in 0..m - k {
                let cur = q.get(i, k + j);
                q.set(i, k + j, cur - 2.0 * dot * v[j].conj());
            }
        }
    }
    // Zero out the strictly-lower dust so R is exactly triangular.
    for i in 0..m {
        for j in 0..n.min(i) {
            r.set(i, j, c64(0.0, 0.0));
        }
    }
    (q, r)
}

// ---------------------------------------------------------------------------
// Real symmetric matrices (Gram/Weingarten tables are real; a dedicated type
// keeps that pipeline at half the arithmetic of the complex path).
// ---------------------------------------------------------------------------

/// Dense real matrix, row-major. Used for Gram matrices of permutation
/// operators and their pseudo-inverses (Weingarten tables).
#[derive(Debug, Clone, PartialEq)]
pub struct RealMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMat {
    /// Builds a real matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "entry count {} does not match shape {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// The all-zeros matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.data[i * d + i] = 1.0;
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at (`i`, `j`).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Sets the entry at (`i`, `j`).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[p * n..(p + 1) * n];
                let acc = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    acc[j] += a * row[j];
                }
            }
        }
        Self { rows: m, cols: n, data: out }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Largest entry magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Whether `self` is symmetric within `tol` (entrywise).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Eigensystem of a real symmetric matrix by cyclic Jacobi:
/// `(eigenvalues ascending, orthogonal eigenvector columns)`.
pub fn sym_eigen(a: &RealMat) -> Result<(Vec<f64>, RealMat)> {
    if !a.is_symmetric(1e-8) {
        return Err(Error::Invalid("sym_eigen requires a symmetric matrix".into()));
    }
    let n = a.rows();
    let mut h = a.clone();
    // Symmetrize exactly.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (h.get(i, j) + h.get(j, i));
            h.set(i, j, v);
            h.set(j, i, v);
        }
    }
    let mut vecs = RealMat::identity(n);
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                off += h.get(p, q) * h.get(p, q);
            }
        }
        if (2.0 * off).sqrt() <= jacobi_tol(n) * norm {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = h.get(p, q);
                if apq.abs() <= jacobi_tol(n) * norm / (n as f64) {
                    continue;
                }
                let app = h.get(p, p);
                let aqq = h.get(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // Columns p,q: H ← H·R.
                for i in 0..n {
                    let x = h.get(i, p);
                    let y = h.get(i, q);
                    h.set(i, p, x * cs - y * sn);
                    h.set(i, q, x * sn + y * cs);
                }
                // Rows p,q: H ← Rᵀ·H.
                for j in 0..n {
                    let x = h.get(p, j);
                    let y = h.get(q, j);
                    h.set(p, j, x * cs - y * sn);
                    h.set(q, j, x * sn + y * cs);
                }
                // Eigenvectors: W ← W·R.
                for i in 0..n {
                    let x = vecs.get(i, p);
                    let y = vecs.get(i, q);
                    vecs.set(i, p, x * cs - y * sn);
                    vecs.set(i, q, x * sn + y * cs);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical("real Jacobi did not converge".into()));
    }

    let diag: Vec<f64> = (0..n).map(|i| h.get(i, i)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite").then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = RealMat::zeros(n, n);
    for (jnew, &jold) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, jnew, vecs.get(i, jold));
        }
    }
    Ok((values, vectors))
}

/// Moore–Penrose pseudo-inverse of a real symmetric matrix: eigenvalues with
/// `|λ| ≤ rel_cutoff · max|λ|` are treated as exactly zero.
pub fn sym_pinv(a: &RealMat, rel_cutoff: f64) -> Result<RealMat> {
    let (vals, vecs) = sym_eigen(a)?;
    let n = a.rows();
    let lmax = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut out = RealMat::zeros(n, n);
    for (j, &lambda) in vals.iter().enumerate() {
        if lambda.abs() <= rel_cutoff * lmax || lambda == 0.0 {
            continue;
        }
        let inv = 1.0 / lambda;
        for r in 0..n {
            let vr = vecs.get(r, j) * inv;
            if vr == 0.0 {
                continue;
            }
            for c in 0..n {
                let cur = out.get(r, c);
                out.set(r, c, cur + vr * vecs.get(c, j));
            }
        }
    }
    Ok(out)
}

/// Numerical rank of a real symmetric matrix at a relative eigenvalue cutoff.
pub fn sym_rank(a: &RealMat, rel_cutoff: f64) -> Result<usize> {
    let (vals, _) = sym_eigen(a)?;
    let lmax = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(vals.iter().filter(|v| v.abs() > rel_cutoff * lmax && v.abs() > 0.0).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn test_rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn random_cmat(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMat {
        CMat::from_fn(rows, cols, |_, _| {
            c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    fn random_hermitian(d: usize, rng: &mut ChaCha12Rng) -> CMat {
        let a = random_cmat(d, d, rng);
        a.add(&a.dagger()).scale_re(0.5)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = CMat::identity(2);
        assert!(kron(&i2, &i2).approx_eq(&CMat::identity(4), 0.0));
    }

    #[test]
    fn kron_basis_projector() {
        // |0⟩⟨0| ⊗ |1⟩⟨1| = |01⟩⟨01|: single unit entry at (1,1).
        let p0 = CMat::from_fn(2, 2, |i, j| if (i, j) == (0, 0) { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let p1 = CMat::from_fn(2, 2, |i, j| if (i, j) == (1, 1) { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let k = kron(&p0, &p1);
        let mut expected = CMat::zeros(4, 4);
        expected.set(1, 1, c64(1.0, 0.0));
        assert!(k.approx_eq(&expected, 0.0));
    }

    #[test]
    fn kron_is_multiplicative_in_frobenius_norm() {
        let mut rng = test_rng(11);
        let a = random_cmat(3, 3, &mut rng);
        let b = random_cmat(3, 3, &mut rng);
        let lhs = kron(&a, &b).frobenius_norm();
        let rhs = a.frobenius_norm() * b.frobenius_norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn partial_trace_factorizes_products() {
        let mut rng = test_rng(12);
        for d in [2usize, 3] {
            let a = random_cmat(d, d, &mut rng);
            let b = random_cmat(d, d, &mut rng);
            let dims = SubsystemDims::uniform(d, 2).unwrap();
            let got = partial_trace(&kron(&a, &b), &dims, &[0]).unwrap();
            let expected = a.scale(b.trace());
            assert!(got.approx_eq(&expected, 1e-12));
        }
    }

    #[test]
    fn partial_trace_of_flip_is_identity() {
        for d in [2usize, 3] {
            let dims = SubsystemDims::uniform(d, 2).unwrap();
            let got = partial_trace(&flip(d), &dims, &[0]).unwrap();
            assert!(got.approx_eq(&CMat::identity(d), 0.0));
        }
    }

    #[test]
    fn partial_swap_trick_recovers_state() {
        // Tr_2((I⊗ρ)𝔽) = ρ for a random 2×2 density-like matrix.
        let mut rng = test_rng(13);
        let a = random_cmat(2, 2, &mut rng);
        let rho = {
            let h = a.mul(&a.dagger());
            let t = h.trace();
            h.scale(c64(1.0, 0.0) / t)
        };
        let dims = SubsystemDims::uniform(2, 2).unwrap();
        let prod = kron(&CMat::identity(2), &rho).mul(&flip(2));
        let got = partial_trace(&prod, &dims, &[0]).unwrap();
        assert!(got.approx_eq(&rho, 1e-12));
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = test_rng(14);
        let a = random_cmat(12, 12, &mut rng);
        let dims = SubsystemDims::new(vec![2, 3, 2]).unwrap();
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![0, 1, 2]] {
            let pt = partial_trace(&a, &dims, &keep).unwrap();
            assert!((pt.trace() - a.trace()).norm() <= 1e-12);
        }
    }

    #[test]
    fn vec_of_identity_is_omega() {
        let v = vec_mat(&CMat::identity(2));
        let omega = CMat::column(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(v.approx_eq(&omega, 0.0));
    }

    #[test]
    fn abc_rule() {
        let mut rng = test_rng(15);
        let a = random_cmat(2, 2, &mut rng);
        let b = random_cmat(2, 2, &mut rng);
        let c = random_cmat(2, 2, &mut rng);
        let lhs = vec_mat(&a.mul(&b).mul(&c));
        let rhs = kron(&a, &c.transpose()).mul(&vec_mat(&b));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn vec_unvec_round_trip_and_hs_norm() {
        let mut rng = test_rng(16);
        let a = random_cmat(3, 4, &mut rng);
        let v = vec_mat(&a);
        let back = unvec(&v, 3, 4).unwrap();
        assert!(back.approx_eq(&a, 0.0));
        let hs = v.hs_inner(&v).re;
        let fro = a.frobenius_norm();
        assert!((hs - fro * fro).abs() <= 1e-12 * hs.max(1.0));
    }

    #[test]
    fn schatten_norms_on_known_matrices() {
        for d in [2usize, 3, 5] {
            let id = CMat::identity(d);
            assert!((schatten_norm(&id, 1.0).unwrap() - d as f64).abs() <= 1e-12);
            assert!((schatten_norm(&id, f64::INFINITY).unwrap() - 1.0).abs() <= 1e-12);
        }
        // Hadamard is unitary: all singular values 1.
        let h = CMat::from_fn(2, 2, |i, j| {
            let s = if (i, j) == (1, 1) { -1.0 } else { 1.0 };
            c64(s / 2f64.sqrt(), 0.0)
        });
        assert!((schatten_norm(&h, f64::INFINITY).unwrap() - 1.0).abs() <= 1e-12);
        assert!(schatten_norm(&h, 0.5).is_err());
    }

    #[test]
    fn schatten_norm_ordering() {
        let mut rng = test_rng(17);
        let a = random_cmat(4, 4, &mut rng);
        let n_inf = schatten_norm(&a, f64::INFINITY).unwrap();
        let n2 = schatten_norm(&a, 2.0).unwrap();
        let n1 = schatten_norm(&a, 1.0).unwrap();
        assert!(n_inf <= n2 + 1e-12 && n2 <= n1 + 1e-12);
        // Schatten-2 agrees with the entrywise Frobenius norm.
        assert!((n2 - a.frobenius_norm()).abs() <= 1e-10);
    }

    #[test]
    fn flip_swaps_basis_states() {
        // 𝔽|01⟩ = |10⟩ (composite indices 1 → 2 for d = 2).
        let f = flip(2);
        let v = f.mul(&CMat::basis_column(4, 1));
        assert!(v.approx_eq(&CMat::basis_column(4, 2), 0.0));
        // Structure: Hermitian, involutive, trace d.
        assert!(f.is_hermitian(0.0));
        assert!(f.mul(&f).approx_eq(&identity2(2), 0.0));
        assert!((f.trace().re - 2.0).abs() <= 1e-15);
        assert!((identity2(2).trace().re - 4.0).abs() <= 1e-15);
    }

    #[test]
    fn swap_trick() {
        let mut rng = test_rng(18);
        for d in [2usize, 3] {
            let a = random_cmat(d, d, &mut rng);
            let b = random_cmat(d, d, &mut rng);
            let lhs = kron(&a, &b).mul(&flip(d)).trace();
            let rhs = a.mul(&b).trace();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn flip_equals_pauli_expansion_d2() {
        // 𝔽 = Σ_P P⊗P / d over {I,X,Y,Z} at d = 2.
        let i = CMat::identity(2);
        let x = CMat::new(2, 2, vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]).unwrap();
        let y = CMat::new(2, 2, vec![c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)]).unwrap();
        let z = CMat::new(2, 2, vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)]).unwrap();
        let mut sum = CMat::zeros(4, 4);
        for p in [&i, &x, &y, &z] {
            sum = sum.add(&kron(p, p));
        }
        assert!(sum.scale_re(0.5).approx_eq(&flip(2), 1e-15));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = CMat::new(
            2,
            2,
            vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-2.0, 0.0)],
        )
        .unwrap();
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 2.0).abs() <= 1e-12 && (sv[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn singular_values_square_sum_is_frobenius() {
        let mut rng = test_rng(19);
        for (r, c) in [(4usize, 4usize), (5, 3), (3, 5)] {
            let a = random_cmat(r, c, &mut rng);
            let sv = singular_values(&a).unwrap();
            let sum: f64 = sv.iter().map(|s| s * s).sum();
            let fro = a.frobenius_norm();
            assert!((sum - fro * fro).abs() <= 1e-10 * (fro * fro).max(1.0));
            assert_eq!(sv.len(), r.min(c));
        }
    }

    #[test]
    fn eigh_known_and_random() {
        // σ_x has eigenvalues {−1, +1}.
        let x = CMat::new(2, 2, vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]).unwrap();
        let vals = eigh_values(&x).unwrap();
        assert!((vals[0] + 1.0).abs() <= 1e-12 && (vals[1] - 1.0).abs() <= 1e-12);

        let mut rng = test_rng(20);
        let h = random_hermitian(5, &mut rng);
        let (vals, vecs) = eigh(&h).unwrap();
        assert!(vecs.is_unitary(1e-10));
        // Residual ‖H·v − λ·v‖ per eigenpair.
        for (j, &lambda) in vals.iter().enumerate() {
            let v = CMat::from_fn(5, 1, |i, _| vecs.get(i, j));
            let res = h.mul(&v).sub(&v.scale_re(lambda));
            assert!(res.frobenius_norm() <= 1e-10);
        }
        // Trace equals eigenvalue sum.
        let sum: f64 = vals.iter().sum();
        assert!((sum - h.trace().re).abs() <= 1e-10);
    }

    #[test]
    fn qr_reconstructs_and_q_is_unitary() {
        let mut rng = test_rng(21);
        for d in [2usize, 3, 6] {
            let a = random_cmat(d, d, &mut rng);
            let (q, r) = qr(&a);
            assert!(q.is_unitary(1e-12));
            assert!(q.mul(&r).approx_eq(&a, 1e-12));
            for i in 0..d {
                for j in 0..i {
                    assert_eq!(r.get(i, j), c64(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn matrix_file_round_trip_is_bit_exact() {
        let mut rng = test_rng(22);
        let a = random_cmat(3, 4, &mut rng);
        let text = a.to_matrix_json();
        let b = CMat::from_matrix_json(&text).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.cols(), b.cols());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn structural_flags() {
        let h = CMat::from_fn(2, 2, |i, j| {
            let s = if (i, j) == (1, 1) { -1.0 } else { 1.0 };
            c64(s / 2f64.sqrt(), 0.0)
        });
        assert!(h.is_unitary(1e-12));
        let rho = CMat::new(
            2,
            2,
            vec![c64(0.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.5, 0.0)],
        )
        .unwrap();
        assert!(rho.is_density(1e-10));
        let not_rho = CMat::new(
            2,
            2,
            vec![c64(1.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-0.5, 0.0)],
        )
        .unwrap();
        assert!(!not_rho.is_density(1e-10));
    }

    #[test]
    fn sym_eigen_known_and_cross_checked() {
        // [[0,1],[1,0]] has eigenvalues {−1, 1} with eigenvectors (1,∓1)/√2.
        let a = RealMat::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let (vals, vecs) = sym_eigen(&a).unwrap();
        assert!((vals[0] + 1.0).abs() <= 1e-13 && (vals[1] - 1.0).abs() <= 1e-13);
        // Orthogonality and reconstruction A = V Λ Vᵀ.
        let mut recon = RealMat::zeros(2, 2);
        for j in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    let cur = recon.get(r, c);
                    recon.set(r, c, cur + vals[j] * vecs.get(r, j) * vecs.get(c, j));
                }
            }
        }
        assert!(recon.max_abs_diff(&a) <= 1e-12);

        // Random symmetric: cross-check eigenvalues against the complex path.
        let mut rng = test_rng(23);
        let n = 6;
        let mut sym = RealMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen::<f64>() - 0.5;
                sym.set(i, j, v);
                sym.set(j, i, v);
            }
        }
        let (vals, vecs) = sym_eigen(&sym).unwrap();
        let as_cmat = CMat::from_fn(n, n, |i, j| c64(sym.get(i, j), 0.0));
        let complex_vals = eigh_values(&as_cmat).unwrap();
        for (a, b) in vals.iter().zip(&complex_vals) {
            assert!((a - b).abs() <= 1e-10);
        }
        // Vᵀ V = I.
        let mut gram = RealMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|r| vecs.get(r, i) * vecs.get(r, j)).sum();
                gram.set(i, j, dot);
            }
        }
        assert!(gram.max_abs_diff(&RealMat::identity(n)) <= 1e-12);
    }

    #[test]
    fn sym_pinv_of_invertible_and_singular() {
        // Invertible: pinv = inverse.
        let a = RealMat::new(2, 2, vec![4.0, 2.0, 2.0, 4.0]).unwrap();
        let p = sym_pinv(&a, 1e-10).unwrap();
        let expected = RealMat::new(
            2,
            2,
            // [[4,2],[2,4]]⁻¹ = 1/12·[[4,−2],[−2,4]]
            vec![1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0],
        )
        .unwrap();
        assert!(p.max_abs_diff(&expected) <= 1e-12);

        // Rank-1 projector-like matrix: A·A⁺·A = A.
        let b = RealMat::new(2, 2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let bp = sym_pinv(&b, 1e-10).unwrap();
        let back = b.mul(&bp).mul(&b);
        assert!(back.max_abs_diff(&b) <= 1e-12);
        assert_eq!(sym_rank(&b, 1e-10).unwrap(), 1);
        assert_eq!(sym_rank(&a, 1e-10).unwrap(), 2);
    }

    #[test]
    fn dimension_errors() {
        assert!(CMat::new(2, 2, vec![c64(0.0, 0.0); 3]).is_err());
        let v = CMat::column(&[c64(1.0, 0.0); 6]);
        assert!(unvec(&v, 2, 2).is_err());
        let dims = SubsystemDims::uniform(2, 2).unwrap();
        let a = CMat::zeros(5, 5);
        assert!(partial_trace(&a, &dims, &[0]).is_err());
    }
}
