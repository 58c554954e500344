//! Exact linear algebra over any [`FieldDescriptor`]: matrices with
//! fraction-free-exact entries, reduced row echelon form, canonical
//! subspaces, Grassmannian enumeration over finite fields, and the Λ³ wedge
//! machinery used by the Plücker cross-check.
//!
//! Subspaces are identified with their unique reduced-row-echelon-form basis
//! matrix: two [`Subspace`] values are equal iff their matrices agree
//! entry-by-entry, and [`Subspace::canonical_string`] of that matrix doubles
//! as a hash key for de-duplicating the ~10⁵ blocks the design module
//! generates.
//!
//! Enumeration of all `k`-dimensional subspaces of `F_q^m` walks pivot-column
//! patterns in lexicographic order and fills the free entries in odometer
//! order, producing each subspace exactly once, already in RREF. The pattern
//! decomposition is public ([`pivot_patterns`] + [`subspaces_with_pivots`])
//! so callers can partition the stream for parallel map-reduce.

use crate::field::{enumerate_field, FieldDescriptor, FieldScalar};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

/// Errors from matrix and subspace operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    /// Operands have incompatible shapes or ambient dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// An argument has the wrong dimension for the operation.
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    /// Inversion of a singular matrix.
    #[error("matrix is singular")]
    Singular,
    /// Grassmannian enumeration needs a finite field.
    #[error("cannot enumerate subspaces over an infinite field")]
    InfiniteField,
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// A dense `rows × cols` matrix of exact field scalars, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<FieldScalar>,
}

impl Matrix {
    /// The zero matrix.
    pub fn zero(field: FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![FieldScalar::zero(field); rows * cols],
        }
    }

    /// The `n × n` identity.
    pub fn identity(field: FieldDescriptor, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldScalar::one(field));
        }
        m
    }

    /// Build from explicit rows; validates rectangularity and that every
    /// entry lives in `field`.
    pub fn from_rows(
        field: FieldDescriptor,
        rows: &[Vec<FieldScalar>],
    ) -> Result<Self, LinalgError> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for v in row {
                if v.descriptor() != field {
                    return Err(LinalgError::DimensionMismatch(format!(
                        "row {i} contains a scalar from {}, expected {field}",
                        v.descriptor()
                    )));
                }
                data.push(v.clone());
            }
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Entry at `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }

    /// Overwrite entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: FieldScalar) {
        debug_assert_eq!(v.descriptor(), self.field);
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All rows, cloned into vectors.
    pub fn to_row_vecs(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &FieldScalar) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            if !self.data[idx].is_zero() {
                self.data[idx] = self.data[idx].mul(f);
            }
        }
    }

    /// `row_i -= f · row_j`.
    fn row_sub_scaled(&mut self, i: usize, j: usize, f: &FieldScalar) {
        for c in 0..self.cols {
            let src = self.data[j * self.cols + c].clone();
            if src.is_zero() {
                continue;
            }
            let idx = i * self.cols + c;
            self.data[idx] = self.data[idx].sub(&src.mul(f));
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows || self.field != other.field {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}×{} · {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Row-vector product `v · self`.
    pub fn mul_vec_left(&self, v: &[FieldScalar]) -> Result<Vec<FieldScalar>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector length {} vs {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![FieldScalar::zero(self.field); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let a = self.at(i, j);
                if !a.is_zero() {
                    *slot = slot.add(&vi.mul(a));
                }
            }
        }
        Ok(out)
    }

    /// Transpose.
    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form via Gauss–Jordan with exact first-nonzero
    /// pivoting (no magnitude heuristics — every nonzero scalar is a valid
    /// pivot). Returns the unique RREF and the rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let hit = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(r) = hit else { continue };
            m.swap_rows(pivot_row, r);
            let inv = m
                .at(pivot_row, col)
                .inv()
                .expect("nonzero pivot is invertible");
            if !m.at(pivot_row, col).is_one() {
                m.scale_row(pivot_row, &inv);
            }
            for r2 in 0..m.rows {
                if r2 != pivot_row && !m.at(r2, col).is_zero() {
                    let f = m.at(r2, col).clone();
                    m.row_sub_scaled(r2, pivot_row, &f);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    /// Pivot columns of a matrix already in RREF with `rank` nonzero rows.
    fn rref_pivot_cols(&self, rank: usize) -> Vec<usize> {
        (0..rank)
            .map(|i| {
                (0..self.cols)
                    .find(|&j| !self.at(i, j).is_zero())
                    .expect("nonzero row has a pivot")
            })
            .collect()
    }

    /// A basis of the right null space `{v : self · vᵀ = 0}`, one row per
    /// free column of the RREF, in free-column order. Not itself in RREF.
    pub fn kernel(&self) -> Matrix {
        let (r, rank) = self.rref();
        let pivots = r.rref_pivot_cols(rank);
        let mut rows = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = vec![FieldScalar::zero(self.field); self.cols];
            v[f] = FieldScalar::one(self.field);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.at(i, f).neg();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            return Matrix::zero(self.field, 0, self.cols);
        }
        Matrix::from_rows(self.field, &rows).expect("kernel rows are rectangular")
    }

    /// Inverse of a square matrix, by row-reducing `[self | I]`.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::WrongDimension(format!(
                "inverse of a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, FieldScalar::one(self.field));
        }
        let (r, _) = aug.rref();
        // The identity block keeps the augmented matrix at full row rank, so
        // singularity shows up as pivots escaping into the right half: the
        // left block reduces to the identity exactly when `self` is
        // invertible.
        for i in 0..n {
            for j in 0..n {
                let expect_one = i == j;
                let e = r.at(i, j);
                if (expect_one && !e.is_one()) || (!expect_one && !e.is_zero()) {
                    return Err(LinalgError::Singular);
                }
            }
        }
        let mut out = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.at(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

/// A linear subspace of `F^m`, stored as its unique RREF basis matrix.
///
/// Equality is entrywise equality of the canonical matrices, so `Subspace`
/// values can be compared, hashed via [`Subspace::canonical_string`], and
/// de-duplicated without any further normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// The span of a list of vectors in `F^ambient`.
    pub fn span(
        field: FieldDescriptor,
        ambient: usize,
        vectors: &[Vec<FieldScalar>],
    ) -> Result<Subspace, LinalgError> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch(format!(
                    "vector {i} has length {}, ambient dimension is {ambient}",
                    v.len()
                )));
            }
        }
        let m = Matrix::from_rows(field, vectors)?;
        Ok(Subspace::from_matrix_rows(ambient, m))
    }

    /// The span of a matrix's rows.
    fn from_matrix_rows(ambient: usize, m: Matrix) -> Subspace {
        let field = m.field();
        let (r, rank) = m.rref();
        if rank == 0 {
            return Subspace::zero(field, ambient);
        }
        let rows: Vec<Vec<FieldScalar>> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        let basis = Matrix::from_rows(field, &rows).expect("RREF rows are rectangular");
        Subspace { ambient, basis }
    }

    /// Internal fast path for rows constructed directly in RREF shape by the
    /// Grassmannian enumerator.
    fn from_rref_rows(ambient: usize, basis: Matrix) -> Subspace {
        Subspace { ambient, basis }
    }

    /// The zero subspace of `F^ambient`.
    pub fn zero(field: FieldDescriptor, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    /// Dimension (number of basis rows).
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldDescriptor {
        self.basis.field()
    }

    /// The canonical RREF basis matrix (`dim × ambient`).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Basis row `i`.
    pub fn basis_row(&self, i: usize) -> &[FieldScalar] {
        self.basis.row(i)
    }

    /// Membership test: reduce `v` against the RREF basis and check that
    /// nothing survives.
    pub fn contains(&self, v: &[FieldScalar]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector length {} vs ambient {}",
                v.len(),
                self.ambient
            )));
        }
        let mut rest = v.to_vec();
        for i in 0..self.dim() {
            let p = (0..self.ambient)
                .find(|&j| !self.basis.at(i, j).is_zero())
                .expect("basis rows are nonzero");
            if !rest[p].is_zero() {
                let f = rest[p].clone();
                for (j, slot) in rest.iter_mut().enumerate().skip(p) {
                    let b = self.basis.at(i, j);
                    if !b.is_zero() {
                        *slot = slot.sub(&f.mul(b));
                    }
                }
            }
        }
        Ok(rest.iter().all(|x| x.is_zero()))
    }

    /// True iff every basis vector of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        for i in 0..other.dim() {
            if !self.contains(other.basis_row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sum of subspaces (span of the union of bases).
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let mut rows = self.basis.to_row_vecs();
        rows.extend(other.basis.to_row_vecs());
        Subspace::span(self.field(), self.ambient, &rows)
    }

    /// Intersection, via the left kernel of the stacked system: a vector of
    /// `S ∩ T` is `x·A` where `A`, `B` are the basis matrices and
    /// `(x, y)` ranges over `{(x, y) : x·A − y·B = 0}`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let k1 = self.dim();
        let k2 = other.dim();
        if k1 == 0 || k2 == 0 {
            return Ok(Subspace::zero(self.field(), self.ambient));
        }
        let mut rows = self.basis.to_row_vecs();
        for i in 0..k2 {
            rows.push(other.basis_row(i).iter().map(|x| x.neg()).collect());
        }
        let stacked = Matrix::from_rows(self.field(), &rows)?;
        // Left kernel of `stacked` = right kernel of its transpose.
        let lk = stacked.transpose().kernel();
        let mut vectors = Vec::with_capacity(lk.rows());
        for i in 0..lk.rows() {
            let x = &lk.row(i)[..k1];
            vectors.push(self.basis.mul_vec_left(x)?);
        }
        Subspace::span(self.field(), self.ambient, &vectors)
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient || self.field() != other.field() {
            return Err(LinalgError::DimensionMismatch(format!(
                "subspaces of {}^{} and {}^{}",
                self.field(),
                self.ambient,
                other.field(),
                other.ambient
            )));
        }
        Ok(())
    }

    /// A canonical text key: the RREF entries in row-major order.
    ///
    /// Over `F_p` and `Q` scalar strings are canonical, so two subspaces are
    /// equal iff their keys coincide — the de-duplication workhorse.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("{}x{}:", self.dim(), self.ambient);
        for i in 0..self.dim() {
            if i > 0 {
                s.push(';');
            }
            for (j, v) in self.basis.row(i).iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&v.canonical_string());
            }
        }
        s
    }

    /// Basis entries as strings, for JSON reports.
    pub fn rows_of_strings(&self) -> Vec<Vec<String>> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Grassmannian enumeration over finite fields
// ---------------------------------------------------------------------------

/// All `k`-element subsets of `0..m` (candidate pivot-column patterns) in
/// lexicographic order.
pub fn pivot_patterns(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance the lexicographically next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Iterator over all RREF matrices with the given pivot columns, free
/// entries cycling in odometer order (last free slot fastest) through the
/// field elements in enumeration order.
pub struct PatternSubspaces {
    field: FieldDescriptor,
    ambient: usize,
    pattern: Vec<usize>,
    /// Free coordinate slots as (row, col), row-major.
    slots: Vec<(usize, usize)>,
    elements: Vec<FieldScalar>,
    counters: Vec<usize>,
    done: bool,
}

impl Iterator for PatternSubspaces {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let k = self.pattern.len();
        let mut m = Matrix::zero(self.field, k, self.ambient);
        for (i, &p) in self.pattern.iter().enumerate() {
            m.set(i, p, FieldScalar::one(self.field));
        }
        for (s, &(r, c)) in self.slots.iter().enumerate() {
            m.set(r, c, self.elements[self.counters[s]].clone());
        }
        // Odometer increment, last slot fastest.
        let mut i = self.slots.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counters[i] += 1;
            if self.counters[i] < self.elements.len() {
                break;
            }
            self.counters[i] = 0;
        }
        Some(Subspace::from_rref_rows(self.ambient, m))
    }
}

/// The subspaces of `F^m` whose RREF basis has exactly the given pivot
/// columns.
pub fn subspaces_with_pivots(
    m: usize,
    pattern: &[usize],
    field: FieldDescriptor,
) -> Result<PatternSubspaces, LinalgError> {
    let elements = enumerate_field(field).map_err(|_| LinalgError::InfiniteField)?;
    assert!(
        pattern.windows(2).all(|w| w[0] < w[1]) && pattern.iter().all(|&p| p < m),
        "pivot pattern must be a strictly increasing subset of 0..m"
    );
    // Entry (i, j) is free iff j lies right of pivot i and is not itself a
    // pivot column; everything else is forced by the RREF shape.
    let mut slots = Vec::new();
    for (i, &p) in pattern.iter().enumerate() {
        for j in p + 1..m {
            if !pattern.contains(&j) {
                slots.push((i, j));
            }
        }
    }
    let counters = vec![0usize; slots.len()];
    Ok(PatternSubspaces {
        field,
        ambient: m,
        pattern: pattern.to_vec(),
        slots,
        elements,
        counters,
        done: false,
    })
}

/// Every `k`-dimensional subspace of `F^m` exactly once, in RREF, ordered by
/// pivot pattern (lexicographic) then free entries (odometer).
///
/// The stream length equals the Gaussian binomial `[m choose k]_q`.
pub fn enumerate_subspaces(
    m: usize,
    k: usize,
    field: FieldDescriptor,
) -> Result<impl Iterator<Item = Subspace>, LinalgError> {
    if !field.is_finite() {
        return Err(LinalgError::InfiniteField);
    }
    let patterns = pivot_patterns(m, k);
    Ok(patterns.into_iter().flat_map(move |p| {
        subspaces_with_pivots(m, &p, field).expect("field checked finite above")
    }))
}

/// Exact Gaussian binomial `[n choose k]_q`: the number of `k`-dimensional
/// subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    debug_assert!((&num % &den) == BigUint::zero());
    num / den
}

// ---------------------------------------------------------------------------
// Λ³ of the 7-dimensional coordinate space
// ---------------------------------------------------------------------------

/// Dimension of Λ³ of a 7-dimensional space.
pub const WEDGE_DIM: usize = 35;

/// The 35 index triples `(i, j, k)` with `i < j < k` in `0..7`, in the
/// lexicographic order that fixes coordinate positions for serialization.
pub fn wedge_triples() -> &'static [(usize, usize, usize); 35] {
    static TRIPLES: OnceLock<[(usize, usize, usize); 35]> = OnceLock::new();
    TRIPLES.get_or_init(|| {
        let mut out = [(0usize, 0usize, 0usize); 35];
        let mut n = 0;
        for i in 0..7 {
            for j in i + 1..7 {
                for k in j + 1..7 {
                    out[n] = (i, j, k);
                    n += 1;
                }
            }
        }
        debug_assert_eq!(n, 35);
        out
    })
}

/// Coordinate position of the sorted triple `i < j < k`.
pub fn triple_index(i: usize, j: usize, k: usize) -> usize {
    static LOOKUP: OnceLock<[[[usize; 7]; 7]; 7]> = OnceLock::new();
    let table = LOOKUP.get_or_init(|| {
        let mut t = [[[usize::MAX; 7]; 7]; 7];
        for (n, &(i, j, k)) in wedge_triples().iter().enumerate() {
            t[i][j][k] = n;
        }
        t
    });
    let idx = table[i][j][k];
    assert_ne!(idx, usize::MAX, "triple must satisfy i < j < k in 0..7");
    idx
}

/// An element of Λ³ of the 7-dimensional coordinate space: 35 coordinates in
/// the fixed [`wedge_triples`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeVector {
    field: FieldDescriptor,
    coords: Vec<FieldScalar>,
}

impl WedgeVector {
    /// The zero wedge.
    pub fn zero(field: FieldDescriptor) -> Self {
        WedgeVector {
            field,
            coords: vec![FieldScalar::zero(field); WEDGE_DIM],
        }
    }

    /// The coefficient field.
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Coordinate at position `idx` in triple order.
    pub fn at(&self, idx: usize) -> &FieldScalar {
        &self.coords[idx]
    }

    /// Overwrite coordinate `idx`.
    pub fn set(&mut self, idx: usize, v: FieldScalar) {
        debug_assert_eq!(v.descriptor(), self.field);
        self.coords[idx] = v;
    }

    /// True iff all 35 coordinates vanish.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &WedgeVector) -> WedgeVector {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect();
        WedgeVector {
            field: self.field,
            coords,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, f: &FieldScalar) -> WedgeVector {
        let coords = self.coords.iter().map(|c| c.mul(f)).collect();
        WedgeVector {
            field: self.field,
            coords,
        }
    }

    /// Additive inverse.
    pub fn neg(&self) -> WedgeVector {
        let coords = self.coords.iter().map(|c| c.neg()).collect();
        WedgeVector {
            field: self.field,
            coords,
        }
    }

    /// Projective representative: scale so the first nonzero coordinate is 1
    /// (identity on the zero wedge). Two wedges span the same line iff their
    /// normalized forms are equal.
    pub fn normalized(&self) -> WedgeVector {
        match self.coords.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(first) => self.scale(&first.inv().expect("nonzero scalar")),
        }
    }

    /// The 35 coordinates as strings in serialization order.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    /// Canonical text key (coordinates joined by commas); canonical over
    /// `F_p` and `Q` like [`Subspace::canonical_string`].
    pub fn canonical_string(&self) -> String {
        self.to_strings().join(",")
    }
}

/// The alternating trilinear wedge `a ∧ b ∧ c` of three 7-vectors, expanded
/// into 35 coordinates as the 3×3 minors of the stacked matrix.
pub fn wedge3(a: &[FieldScalar], b: &[FieldScalar], c: &[FieldScalar]) -> WedgeVector {
    assert!(
        a.len() == 7 && b.len() == 7 && c.len() == 7,
        "wedge3 expects three 7-dimensional vectors"
    );
    let field = a[0].descriptor();
    let mut out = WedgeVector::zero(field);
    for (n, &(i, j, k)) in wedge_triples().iter().enumerate() {
        // det of the minor on columns (i, j, k).
        let m1 = b[j].mul(&c[k]).sub(&b[k].mul(&c[j]));
        let m2 = b[i].mul(&c[k]).sub(&b[k].mul(&c[i]));
        let m3 = b[i].mul(&c[j]).sub(&b[j].mul(&c[i]));
        let det = a[i].mul(&m1).sub(&a[j].mul(&m2)).add(&a[k].mul(&m3));
        out.set(n, det);
    }
    out
}

/// The canonical Plücker representative of a 3-dimensional subspace of the
/// 7-dimensional coordinate space: the wedge of its RREF basis rows. The
/// coordinate at the pivot triple is 1, so the output needs no further
/// normalization and distinct subspaces give distinct wedges.
pub fn plucker(s: &Subspace) -> Result<WedgeVector, LinalgError> {
    if s.ambient_dim() != 7 || s.dim() != 3 {
        return Err(LinalgError::WrongDimension(format!(
            "plucker embedding needs a 3-dimensional subspace of a 7-dimensional space, got dim {} in dim {}",
            s.dim(),
            s.ambient_dim()
        )));
    }
    Ok(wedge3(s.basis_row(0), s.basis_row(1), s.basis_row(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SquareStatus;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn f3() -> FieldDescriptor {
        FieldDescriptor::prime(3).unwrap()
    }

    fn f5() -> FieldDescriptor {
        FieldDescriptor::prime(5).unwrap()
    }

    fn q() -> FieldDescriptor {
        FieldDescriptor::rational()
    }

    fn sc(d: FieldDescriptor, t: &str) -> FieldScalar {
        FieldScalar::parse(d, t).unwrap()
    }

    fn vecs(d: FieldDescriptor, rows: &[&[i64]]) -> Vec<Vec<FieldScalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| FieldScalar::from_i64(d, x)).collect())
            .collect()
    }

    fn unit(d: FieldDescriptor, n: usize, i: usize) -> Vec<FieldScalar> {
        let mut v = vec![FieldScalar::zero(d); n];
        v[i] = FieldScalar::one(d);
        v
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Matrix::identity(q(), 3);
        let (r, rank) = m.rref();
        assert_eq!(r, m);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let m = Matrix::from_rows(q(), &vecs(q(), &[&[1, 2], &[2, 4]])).unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        let expected =
            Matrix::from_rows(q(), &vecs(q(), &[&[1, 2], &[0, 0]])).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn rref_inverts_indeterminate_diagonal() {
        let d = FieldDescriptor::function_over_prime(5).unwrap();
        let zero = FieldScalar::zero(d);
        let m = Matrix::from_rows(
            d,
            &[
                vec![sc(d, "a"), zero.clone()],
                vec![zero.clone(), sc(d, "b")],
            ],
        )
        .unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(r, Matrix::identity(d, 2));
    }

    #[test]
    fn rref_is_idempotent_and_basis_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11bea7);
        for _ in 0..200 {
            let rows = 3 + (rng.next_u64() % 3) as usize;
            let cols = 3 + (rng.next_u64() % 4) as usize;
            let mut m = Matrix::zero(f5(), rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, FieldScalar::from_i64(f5(), (rng.next_u64() % 5) as i64));
                }
            }
            let (r1, rank1) = m.rref();
            let (r2, rank2) = r1.rref();
            assert_eq!(r1, r2);
            assert_eq!(rank1, rank2);
            // A row-equivalent matrix (random invertible row operations)
            // reduces to the same RREF.
            let mut m2 = m.clone();
            for _ in 0..6 {
                let i = (rng.next_u64() % rows as u64) as usize;
                let j = (rng.next_u64() % rows as u64) as usize;
                if i != j {
                    let f = FieldScalar::from_i64(f5(), (rng.next_u64() % 5) as i64);
                    m2.row_sub_scaled(i, j, &f);
                }
                let k = (rng.next_u64() % rows as u64) as usize;
                let nz = FieldScalar::from_i64(f5(), 1 + (rng.next_u64() % 4) as i64);
                m2.scale_row(k, &nz);
            }
            let (r3, rank3) = m2.rref();
            assert_eq!(r1, r3);
            assert_eq!(rank1, rank3);
        }
    }

    #[test]
    fn span_and_membership() {
        let e0 = unit(f3(), 8, 1);
        let e1 = unit(f3(), 8, 2);
        let s = Subspace::span(f3(), 8, &[e0.clone(), e1.clone()]).unwrap();
        assert_eq!(s.dim(), 2);
        let mut sum = e0.clone();
        for (i, v) in e1.iter().enumerate() {
            sum[i] = sum[i].add(v);
        }
        assert!(s.contains(&sum).unwrap());
        assert!(!s.contains(&unit(f3(), 8, 3)).unwrap());
    }

    #[test]
    fn intersect_of_coordinate_planes() {
        let d = q();
        let e0 = unit(d, 7, 0);
        let e1 = unit(d, 7, 1);
        let e2 = unit(d, 7, 2);
        let s = Subspace::span(d, 7, &[e0, e1.clone()]).unwrap();
        let t = Subspace::span(d, 7, &[e1.clone(), e2]).unwrap();
        let meet = s.intersect(&t).unwrap();
        assert_eq!(meet, Subspace::span(d, 7, &[e1]).unwrap());
        assert_eq!(meet.dim(), 1);
    }

    #[test]
    fn grassmann_dimension_formula_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x97a55);
        for _ in 0..150 {
            let ambient = 5 + (rng.next_u64() % 3) as usize;
            let rand_space = |rng: &mut ChaCha8Rng| {
                let k = 1 + (rng.next_u64() % 3) as usize;
                let rows: Vec<Vec<FieldScalar>> = (0..k)
                    .map(|_| {
                        (0..ambient)
                            .map(|_| FieldScalar::from_i64(f3(), (rng.next_u64() % 3) as i64))
                            .collect()
                    })
                    .collect();
                Subspace::span(f3(), ambient, &rows).unwrap()
            };
            let s = rand_space(&mut rng);
            let t = rand_space(&mut rng);
            let meet = s.intersect(&t).unwrap();
            let join = s.sum(&t).unwrap();
            assert_eq!(join.dim() + meet.dim(), s.dim() + t.dim());
            assert!(s.contains_subspace(&meet).unwrap());
            assert!(t.contains_subspace(&meet).unwrap());
            assert!(join.contains_subspace(&s).unwrap());
            assert!(join.contains_subspace(&t).unwrap());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1731);
        let d = FieldDescriptor::prime(7).unwrap();
        let mut found = 0;
        while found < 50 {
            let mut m = Matrix::zero(d, 4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    m.set(i, j, FieldScalar::from_i64(d, (rng.next_u64() % 7) as i64));
                }
            }
            match m.inverse() {
                Err(LinalgError::Singular) => continue,
                Err(e) => panic!("unexpected error {e}"),
                Ok(inv) => {
                    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(d, 4));
                    assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(d, 4));
                    found += 1;
                }
            }
        }
    }

    #[test]
    fn kernel_annihilates() {
        let m = Matrix::from_rows(q(), &vecs(q(), &[&[1, 2, 3], &[0, 1, 1]])).unwrap();
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        // v with m · vᵀ = 0 means each row dotted with v vanishes.
        for i in 0..m.rows() {
            let mut acc = FieldScalar::zero(q());
            for j in 0..m.cols() {
                acc = acc.add(&m.at(i, j).mul(k.at(0, j)));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn enumerate_projective_line_q3() {
        let subs: Vec<Subspace> = enumerate_subspaces(2, 1, f3()).unwrap().collect();
        assert_eq!(subs.len(), 4);
        let distinct: HashSet<String> = subs.iter().map(|s| s.canonical_string()).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for (m, k, d) in [
            (4usize, 2usize, f3()),
            (7, 2, f3()),
            (7, 3, f3()),
            (7, 2, f5()),
        ] {
            let q = d.prime_modulus().unwrap();
            let expected = gaussian_binomial(m as u64, k as u64, q);
            let count = enumerate_subspaces(m, k, d).unwrap().count();
            assert_eq!(BigUint::from(count), expected, "m={m} k={k} q={q}");
        }
        assert_eq!(
            enumerate_subspaces(7, 2, f3()).unwrap().count(),
            99463
        );
    }

    #[test]
    fn enumeration_yields_rref_without_duplicates() {
        let mut seen = HashSet::new();
        for s in enumerate_subspaces(4, 2, f3()).unwrap() {
            assert_eq!(s.dim(), 2);
            let (r, rank) = s.basis().rref();
            assert_eq!(rank, 2);
            assert_eq!(&r, s.basis(), "already canonical");
            assert!(seen.insert(s.canonical_string()), "duplicate subspace");
        }
        assert_eq!(seen.len(), 130);
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(6, 2, 3), BigUint::from(11011u32));
        assert_eq!(gaussian_binomial(9, 0, 3), BigUint::one());
        assert_eq!(gaussian_binomial(3, 2, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(7, 2, 5), BigUint::from(12714681u64));
        assert_eq!(gaussian_binomial(2, 1, 3), BigUint::from(4u32));
    }

    #[test]
    fn wedge_of_coordinate_vectors() {
        let d = q();
        let e0 = unit(d, 7, 0);
        let e1 = unit(d, 7, 1);
        let e2 = unit(d, 7, 2);
        let w = wedge3(&e0, &e1, &e2);
        for (n, &(i, j, k)) in wedge_triples().iter().enumerate() {
            let expect = if (i, j, k) == (0, 1, 2) { 1 } else { 0 };
            assert_eq!(w.at(n), &FieldScalar::from_i64(d, expect));
        }
        // Alternating: repeated vector kills the wedge.
        assert!(wedge3(&e0, &e0, &e1).is_zero());
        // Odd permutation flips the sign.
        let w_swapped = wedge3(&e1, &e0, &e2);
        assert_eq!(w_swapped, w.neg());
    }

    #[test]
    fn plucker_of_coordinate_subspace() {
        let d = f3();
        let s = Subspace::span(d, 7, &[unit(d, 7, 0), unit(d, 7, 1), unit(d, 7, 3)]).unwrap();
        let w = plucker(&s).unwrap();
        assert!(w.at(triple_index(0, 1, 3)).is_one());
        let nonzero = (0..WEDGE_DIM).filter(|&n| !w.at(n).is_zero()).count();
        assert_eq!(nonzero, 1);
        // Wrong dimensions are rejected.
        let line = Subspace::span(d, 7, &[unit(d, 7, 0)]).unwrap();
        assert!(matches!(
            plucker(&line),
            Err(LinalgError::WrongDimension(_))
        ));
    }

    #[test]
    fn plucker_is_projective_across_bases() {
        let d = q();
        let a = unit(d, 7, 0);
        let b = unit(d, 7, 2);
        let c = unit(d, 7, 5);
        // Same subspace, messier basis: a+b, b, 3c − a.
        let add = |x: &[FieldScalar], y: &[FieldScalar]| -> Vec<FieldScalar> {
            x.iter().zip(y).map(|(u, v)| u.add(v)).collect()
        };
        let scale = |x: &[FieldScalar], f: i64| -> Vec<FieldScalar> {
            x.iter()
                .map(|u| u.mul(&FieldScalar::from_i64(d, f)))
                .collect()
        };
        let w1 = wedge3(&a, &b, &c);
        let w2 = wedge3(&add(&a, &b), &b, &add(&scale(&c, 3), &scale(&a, -1)));
        assert_eq!(w1.normalized(), w2.normalized());
        assert_ne!(w1, WedgeVector::zero(d));
    }

    #[test]
    fn plucker_injective_across_grassmannian_q3() {
        // Distinct 3-subspaces of F_3^7 must produce distinct canonical
        // Plücker vectors; pack the 35 residues two bits each into a u128.
        let mut seen: HashSet<u128> = HashSet::new();
        let mut count = 0u64;
        for s in enumerate_subspaces(7, 3, f3()).unwrap() {
            let w = plucker(&s).unwrap();
            let mut key: u128 = 0;
            for n in 0..WEDGE_DIM {
                key |= (w.at(n).residue().unwrap() as u128) << (2 * n);
            }
            assert!(seen.insert(key), "Plücker collision at {}", s.canonical_string());
            count += 1;
        }
        assert_eq!(BigUint::from(count), gaussian_binomial(7, 3, 3));
    }

    #[test]
    fn subspace_keys_are_field_aware() {
        // Same residues over different fields must not collide in key space.
        let s3 = Subspace::span(f3(), 4, &vecs(f3(), &[&[1, 2, 0, 1]])).unwrap();
        let s5 = Subspace::span(f5(), 4, &vecs(f5(), &[&[1, 2, 0, 1]])).unwrap();
        assert_eq!(s3.canonical_string(), s5.canonical_string());
        // Keys are only meaningful within a single enumeration, which always
        // fixes one field; equality still distinguishes them.
        assert_ne!(s3, s5);
        // And squareness of scalars stays field-specific, not key-specific.
        assert_eq!(sc(f5(), "2").is_square(), SquareStatus::No);
    }
}
