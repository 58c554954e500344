//! Cayley–Dickson algebras of dimension 1, 2, 4 and 8 over an exact field,
//! with two independent multiplication engines.
//!
//! The doubling construction turns an algebra-with-involution `A` and a
//! nonzero parameter `γ` into `A ⊕ iA` with `i² = γ` and product
//!
//! ```text
//! (a + ib)(c + id) = (ac + γ·d·b*) + i(a*·d + c·b).
//! ```
//!
//! Starting from the base field and doubling three times with parameters
//! `α, β, γ` yields the 8-dimensional general Cayley algebra on the basis
//! `1, e₀, …, e₆` with `e₀² = α`, `e₁² = β`, `e₂² = γ` and
//! `e₃ = e₀e₁`, `e₄ = e₁e₂`, `e₅ = e₀(e₁e₂)`, `e₆ = e₀e₂`.
//!
//! [`make_general_cayley`] builds the multiplication table programmatically
//! through those three doubling steps and then *verifies every cell* against
//! an independently hard-coded table in the parameters, so the cached
//! structure constants and the doubling formula can never silently drift
//! apart. [`double_mul`] exposes the raw formula as a second engine for
//! cross-checking individual products.
//!
//! [`make_split_cayley`] builds the split Cayley algebra directly in its
//! natural basis `p₁, p₂, q₁, q₂, q₃, r₁, r₂, r₃` (two idempotents and six
//! nilpotents) and carries an exact change of basis to a unital form, so
//! trace and imaginary parts work uniformly across both presentations.
//!
//! Every element knows its algebra; arithmetic between elements of different
//! algebras is a programming error and panics, with `checked_` variants that
//! report [`AlgebraError::Mismatch`] instead.

use crate::field::{FieldDescriptor, FieldScalar};
use crate::linalg::Matrix;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Errors from algebra construction and element operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Operands belong to different algebras.
    #[error("elements belong to different algebras")]
    Mismatch,
    /// A doubling parameter was zero.
    #[error("doubling parameters must be nonzero")]
    ZeroParameter,
    /// The operation needs an algebra built by doubling.
    #[error("algebra carries no doubling decomposition")]
    NotDoubled,
    /// Malformed element text.
    #[error("element parse error: {0}")]
    Parse(String),
    /// Coefficient vector of the wrong length or field.
    #[error("bad coefficients: {0}")]
    BadCoefficients(String),
}

/// Which basis the structure constants are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `1, e₀, …` — unital basis with the identity first and imaginary
    /// units after (dimensions 1, 2, 4, 8).
    GeneralE,
    /// `p₁, p₂, q₁, q₂, q₃, r₁, r₂, r₃` — the split algebra's idempotent
    /// basis (dimension 8 only; the identity is `p₁ + p₂`).
    SplitPqr,
}

/// Decomposition of a doubled algebra as `half ⊕ i·half`.
#[derive(Debug)]
pub struct DoublingInfo {
    /// The half-dimension algebra `A` with `self = A ⊕ iA`.
    pub half: Algebra,
    /// The square of the adjoined unit: `i² = gamma`.
    pub gamma: FieldScalar,
    /// Row `k` = coordinates, in the descriptor's own basis, of the `k`-th
    /// natural doubled basis vector (`u₀…u_{n−1}, i·u₀…i·u_{n−1}`).
    pairs_to_self: Matrix,
    /// Inverse of `pairs_to_self`.
    self_to_pairs: Matrix,
}

/// Shared, immutable algebra descriptor.
pub type Algebra = Arc<AlgebraDescriptor>;

/// An algebra of dimension 1, 2, 4 or 8: coefficient field, doubling
/// parameters, basis labels, and the cached structure-constant table.
#[derive(Debug)]
pub struct AlgebraDescriptor {
    field: FieldDescriptor,
    dim: usize,
    params: Vec<FieldScalar>,
    basis_kind: BasisKind,
    basis_names: Vec<&'static str>,
    /// `table[i][j]` = coefficient row of (basis i)·(basis j).
    table: Vec<Vec<Vec<FieldScalar>>>,
    /// Nonzero entries of each table cell, for the sparse product loop.
    sparse: Vec<Vec<Vec<(usize, FieldScalar)>>>,
    /// Coordinates of the identity element.
    one_coeffs: Vec<FieldScalar>,
    /// `tau_weights[k]` = trace of the `k`-th basis vector, so
    /// `τ(x) = Σ coeffs[k]·tau_weights[k]`.
    tau_weights: Vec<FieldScalar>,
    /// Split basis only: row `k` = unital coordinates of basis vector `k`.
    to_unital: Option<Matrix>,
    /// Split basis only: row `k` = native coordinates of the `k`-th unital
    /// basis vector (`1, p₁−p₂, q₁, q₂, q₃, r₁, r₂, r₃`).
    from_unital: Option<Matrix>,
    doubling: Option<DoublingInfo>,
}

impl PartialEq for AlgebraDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.basis_kind == other.basis_kind
            && self.params == other.params
    }
}

impl Eq for AlgebraDescriptor {}

// ---------------------------------------------------------------------------
// Hard-coded reference tables
// ---------------------------------------------------------------------------

/// One product cell `sign · α^a β^b γ^c · (basis k)`, with `k = 0` meaning
/// the identity slot of the e-basis.
type GeneralCell = (usize, i8, u8, u8, u8);

/// The imaginary 7×7 block of the general Cayley table: entry `(i, j)` is
/// the product `e_i e_j` as a signed parameter monomial times a basis
/// element. Kept independent of the doubling code on purpose — construction
/// is checked against this cell by cell.
const GENERAL_TABLE: [[GeneralCell; 7]; 7] = [
    // e₀ row: α, e₃, e₆, αe₁, e₅, αe₄, αe₂
    [
        (0, 1, 1, 0, 0),
        (4, 1, 0, 0, 0),
        (7, 1, 0, 0, 0),
        (2, 1, 1, 0, 0),
        (6, 1, 0, 0, 0),
        (5, 1, 1, 0, 0),
        (3, 1, 1, 0, 0),
    ],
    // e₁ row: −e₃, β, e₄, −βe₀, βe₂, −βe₆, −e₅
    [
        (4, -1, 0, 0, 0),
        (0, 1, 0, 1, 0),
        (5, 1, 0, 0, 0),
        (1, -1, 0, 1, 0),
        (3, 1, 0, 1, 0),
        (7, -1, 0, 1, 0),
        (6, -1, 0, 0, 0),
    ],
    // e₂ row: −e₆, −e₄, γ, e₅, −γe₁, γe₃, −γe₀
    [
        (7, -1, 0, 0, 0),
        (5, -1, 0, 0, 0),
        (0, 1, 0, 0, 1),
        (6, 1, 0, 0, 0),
        (2, -1, 0, 0, 1),
        (4, 1, 0, 0, 1),
        (1, -1, 0, 0, 1),
    ],
    // e₃ row: −αe₁, βe₀, −e₅, −αβ, −βe₆, αβe₂, αe₄
    [
        (2, -1, 1, 0, 0),
        (1, 1, 0, 1, 0),
        (6, -1, 0, 0, 0),
        (0, -1, 1, 1, 0),
        (7, -1, 0, 1, 0),
        (3, 1, 1, 1, 0),
        (5, 1, 1, 0, 0),
    ],
    // e₄ row: −e₅, −βe₂, γe₁, βe₆, −βγ, βγe₀, −γe₃
    [
        (6, -1, 0, 0, 0),
        (3, -1, 0, 1, 0),
        (2, 1, 0, 0, 1),
        (7, 1, 0, 1, 0),
        (0, -1, 0, 1, 1),
        (1, 1, 0, 1, 1),
        (4, -1, 0, 0, 1),
    ],
    // e₅ row: −αe₄, βe₆, −γe₃, −αβe₂, −βγe₀, αβγ, αγe₁
    [
        (5, -1, 1, 0, 0),
        (7, 1, 0, 1, 0),
        (4, -1, 0, 0, 1),
        (3, -1, 1, 1, 0),
        (1, -1, 0, 1, 1),
        (0, 1, 1, 1, 1),
        (2, 1, 1, 0, 1),
    ],
    // e₆ row: −αe₂, e₅, γe₀, −αe₄, γe₃, −αγe₁, −αγ
    [
        (3, -1, 1, 0, 0),
        (6, 1, 0, 0, 0),
        (1, 1, 0, 0, 1),
        (5, -1, 1, 0, 0),
        (4, 1, 0, 0, 1),
        (2, -1, 1, 0, 1),
        (0, -1, 1, 0, 1),
    ],
];

/// The classical octonion table (`α = β = γ = −1`) exactly as printed in the
/// source it was transcribed from, imaginary block only: entry `(i, j)` is
/// `sign · (basis k)` with `k = 0` the identity slot. Three of its 49 cells
/// are typos — see `classical_table_discrepancies` in the tests.
#[cfg(test)]
const CLASSICAL_TABLE: [[(usize, i8); 7]; 7] = [
    [(0, -1), (4, 1), (7, 1), (2, -1), (6, 1), (5, -1), (3, -1)],
    [(4, -1), (0, -1), (5, 1), (1, 1), (3, 1), (7, 1), (6, -1)],
    [(7, -1), (5, -1), (0, -1), (6, 1), (2, 1), (4, -1), (1, 1)],
    [(2, 1), (1, -1), (6, -1), (0, -1), (7, 1), (3, 1), (5, -1)],
    [(6, -1), (3, 1), (2, -1), (7, -1), (0, -1), (1, 1), (4, 1)],
    [(5, 1), (7, -1), (4, 1), (3, 1), (1, -1), (0, -1), (2, 1)],
    [(3, 1), (6, 1), (7, -1), (5, 1), (4, -1), (2, -1), (0, -1)],
];

/// The split Cayley table on `p₁,p₂,q₁,q₂,q₃,r₁,r₂,r₃` (indices 0..8):
/// entry `(i, j)` is `sign · (basis k)` or `None` for a zero product.
const SPLIT_TABLE: [[Option<(usize, i8)>; 8]; 8] = [
    // p₁ row
    [
        Some((0, 1)),
        None,
        Some((2, 1)),
        Some((3, 1)),
        Some((4, 1)),
        None,
        None,
        None,
    ],
    // p₂ row
    [
        None,
        Some((1, 1)),
        None,
        None,
        None,
        Some((5, 1)),
        Some((6, 1)),
        Some((7, 1)),
    ],
    // q₁ row
    [
        None,
        Some((2, 1)),
        None,
        Some((7, 1)),
        Some((6, -1)),
        Some((0, -1)),
        None,
        None,
    ],
    // q₂ row
    [
        None,
        Some((3, 1)),
        Some((7, -1)),
        None,
        Some((5, 1)),
        None,
        Some((0, -1)),
        None,
    ],
    // q₃ row
    [
        None,
        Some((4, 1)),
        Some((6, 1)),
        Some((5, -1)),
        None,
        None,
        None,
        Some((0, -1)),
    ],
    // r₁ row
    [
        Some((5, 1)),
        None,
        Some((1, -1)),
        None,
        None,
        None,
        Some((4, 1)),
        Some((3, -1)),
    ],
    // r₂ row
    [
        Some((6, 1)),
        None,
        None,
        Some((1, -1)),
        None,
        Some((4, -1)),
        None,
        Some((2, 1)),
    ],
    // r₃ row
    [
        Some((7, 1)),
        None,
        None,
        None,
        Some((1, -1)),
        Some((3, 1)),
        Some((2, -1)),
        None,
    ],
];

/// Evaluate a [`GeneralCell`] at concrete parameters into a coefficient row.
fn general_cell_row(
    field: FieldDescriptor,
    cell: GeneralCell,
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
) -> Vec<FieldScalar> {
    let (k, sign, ap, bp, cp) = cell;
    let mut coeff = FieldScalar::from_i64(field, sign as i64);
    for _ in 0..ap {
        coeff = coeff.mul(alpha);
    }
    for _ in 0..bp {
        coeff = coeff.mul(beta);
    }
    for _ in 0..cp {
        coeff = coeff.mul(gamma);
    }
    let mut row = vec![FieldScalar::zero(field); 8];
    row[k] = coeff;
    row
}

// ---------------------------------------------------------------------------
// Descriptor construction
// ---------------------------------------------------------------------------

fn sparse_of(table: &[Vec<Vec<FieldScalar>>]) -> Vec<Vec<Vec<(usize, FieldScalar)>>> {
    table
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    cell.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect()
}

impl AlgebraDescriptor {
    /// The base field itself, as the one-dimensional algebra `F·1`.
    fn base(field: FieldDescriptor) -> Algebra {
        let one = FieldScalar::one(field);
        let table = vec![vec![vec![one.clone()]]];
        let sparse = sparse_of(&table);
        Arc::new(AlgebraDescriptor {
            field,
            dim: 1,
            params: Vec::new(),
            basis_kind: BasisKind::GeneralE,
            basis_names: vec!["1"],
            table,
            sparse,
            one_coeffs: vec![one.clone()],
            tau_weights: vec![one],
            to_unital: None,
            from_unital: None,
            doubling: None,
        })
    }

    /// Double `half` by `gamma`, presenting the result in the basis whose
    /// vectors are given (rows of `pairs_to_self`) in terms of the natural
    /// doubled basis `u₀…u_{n−1}, i·u₀…i·u_{n−1}`.
    fn double(
        half: Algebra,
        gamma: FieldScalar,
        basis_names: Vec<&'static str>,
        pairs_to_self: Matrix,
        params: Vec<FieldScalar>,
    ) -> Result<Algebra, AlgebraError> {
        if gamma.is_zero() {
            return Err(AlgebraError::ZeroParameter);
        }
        let field = half.field;
        let n = half.dim;
        let dim = 2 * n;
        assert_eq!(pairs_to_self.rows(), dim);
        assert_eq!(pairs_to_self.cols(), dim);
        let self_to_pairs = pairs_to_self
            .inverse()
            .expect("basis change must be invertible");

        // Identity: natural coordinates (1_half, 0).
        let mut one_nat = vec![FieldScalar::zero(field); dim];
        one_nat[..n].clone_from_slice(&half.one_coeffs);
        let one_coeffs = pairs_to_self
            .mul_vec_left(&one_nat)
            .map_err(|e| AlgebraError::BadCoefficients(e.to_string()))?;

        // τ is linear; τ(a + ib) = τ(a) since i·half is trace-free, so the
        // k-th weight is τ of the a-part of basis vector k.
        let mut tau_weights = Vec::with_capacity(dim);
        for k in 0..dim {
            let nat = self_to_pairs.row(k);
            let mut t = FieldScalar::zero(field);
            for (s, w) in nat[..n].iter().zip(&half.tau_weights) {
                t = t.add(&s.mul(w));
            }
            tau_weights.push(t);
        }

        // Build the table by the doubling formula on natural coordinates.
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (i, table_row) in table.iter_mut().enumerate() {
            for (j, cell) in table_row.iter_mut().enumerate() {
                let x = self_to_pairs.row(i);
                let y = self_to_pairs.row(j);
                let prod_nat = doubled_product(&half, &gamma, x, y);
                *cell = pairs_to_self
                    .mul_vec_left(&prod_nat)
                    .map_err(|e| AlgebraError::BadCoefficients(e.to_string()))?;
            }
        }
        let sparse = sparse_of(&table);
        Ok(Arc::new(AlgebraDescriptor {
            field,
            dim,
            params,
            basis_kind: BasisKind::GeneralE,
            basis_names,
            table,
            sparse,
            one_coeffs,
            tau_weights,
            to_unital: None,
            from_unital: None,
            doubling: Some(DoublingInfo {
                half,
                gamma,
                pairs_to_self: pairs_to_self.clone(),
                self_to_pairs,
            }),
        }))
    }

    /// Build a dimension-8 algebra directly from a structure table in the
    /// e-basis coordinate layout: slot 0 is the identity and slots 1..8 are
    /// trace-free vectors that conjugation negates. `table[i][j]` is the
    /// coefficient row of (basis i)·(basis j); the rows and columns touching
    /// slot 0 must encode the identity action.
    pub(crate) fn from_unit_table(
        field: FieldDescriptor,
        params: Vec<FieldScalar>,
        basis_names: Vec<&'static str>,
        table: Vec<Vec<Vec<FieldScalar>>>,
    ) -> Algebra {
        let dim = basis_names.len();
        assert_eq!(dim, 8, "unit-table construction is dimension-8 only");
        assert_eq!(table.len(), dim, "table must be {dim}x{dim}");
        let one = FieldScalar::one(field);
        let zero = FieldScalar::zero(field);
        for (i, row) in table.iter().enumerate() {
            assert_eq!(row.len(), dim, "table must be {dim}x{dim}");
            for (j, cell) in row.iter().enumerate() {
                assert_eq!(cell.len(), dim, "table cells must have {dim} entries");
                if i == 0 || j == 0 {
                    let unit = if i == 0 { j } else { i };
                    for (k, c) in cell.iter().enumerate() {
                        assert!(
                            if k == unit { c.is_one() } else { c.is_zero() },
                            "slot 0 must act as the identity"
                        );
                    }
                }
            }
        }
        let mut one_coeffs = vec![zero.clone(); dim];
        one_coeffs[0] = one.clone();
        let mut tau_weights = vec![zero; dim];
        tau_weights[0] = one;
        let sparse = sparse_of(&table);
        Arc::new(AlgebraDescriptor {
            field,
            dim,
            params,
            basis_kind: BasisKind::GeneralE,
            basis_names,
            table,
            sparse,
            one_coeffs,
            tau_weights,
            to_unital: None,
            from_unital: None,
            doubling: None,
        })
    }

    // -- accessors ----------------------------------------------------------

    /// Coefficient field.
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Dimension over the field (1, 2, 4 or 8).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Doubling parameters (empty, `[α]`, `[α, β]` or `[α, β, γ]`).
    pub fn params(&self) -> &[FieldScalar] {
        &self.params
    }

    /// Which basis the structure constants use.
    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    /// Labels of the basis vectors, in coefficient order.
    pub fn basis_names(&self) -> &[&'static str] {
        &self.basis_names
    }

    /// The coefficient row of (basis `i`)·(basis `j`).
    pub fn table_entry(&self, i: usize, j: usize) -> &[FieldScalar] {
        &self.table[i][j]
    }

    /// The doubling decomposition, for algebras built by doubling.
    pub fn doubling(&self) -> Option<&DoublingInfo> {
        self.doubling.as_ref()
    }

    // -- element constructors ------------------------------------------------

    /// The zero element.
    pub fn zero(self: &Algebra) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coeffs: vec![FieldScalar::zero(self.field); self.dim],
        }
    }

    /// The identity element.
    pub fn one(self: &Algebra) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coeffs: self.one_coeffs.clone(),
        }
    }

    /// Basis vector `k`.
    pub fn basis_element(self: &Algebra, k: usize) -> AlgebraElement {
        let mut coeffs = vec![FieldScalar::zero(self.field); self.dim];
        coeffs[k] = FieldScalar::one(self.field);
        AlgebraElement {
            algebra: self.clone(),
            coeffs,
        }
    }

    /// An element from explicit coefficients.
    pub fn from_coeffs(
        self: &Algebra,
        coeffs: Vec<FieldScalar>,
    ) -> Result<AlgebraElement, AlgebraError> {
        if coeffs.len() != self.dim {
            return Err(AlgebraError::BadCoefficients(format!(
                "{} coefficients for a dimension-{} algebra",
                coeffs.len(),
                self.dim
            )));
        }
        for c in &coeffs {
            if c.descriptor() != self.field {
                return Err(AlgebraError::BadCoefficients(format!(
                    "coefficient from {}, algebra over {}",
                    c.descriptor(),
                    self.field
                )));
            }
        }
        Ok(AlgebraElement {
            algebra: self.clone(),
            coeffs,
        })
    }

    /// The scalar `λ·1`.
    pub fn scalar(self: &Algebra, lambda: &FieldScalar) -> AlgebraElement {
        let coeffs = self.one_coeffs.iter().map(|c| c.mul(lambda)).collect();
        AlgebraElement {
            algebra: self.clone(),
            coeffs,
        }
    }

    /// Basis of the imaginary space `im(O) = {x : x* = −x}` for a
    /// dimension-8 algebra: 7 elements in the coordinate order used by every
    /// subspace computation downstream (`e₀…e₆`, or `p₁−p₂, q₁, q₂, q₃, r₁,
    /// r₂, r₃` for the split basis).
    pub fn imaginary_basis(self: &Algebra) -> Vec<AlgebraElement> {
        assert_eq!(self.dim, 8, "imaginary coordinates live in dimension 8");
        match self.basis_kind {
            BasisKind::GeneralE => (1..8).map(|k| self.basis_element(k)).collect(),
            BasisKind::SplitPqr => {
                let fu = self.from_unital.as_ref().expect("split carries unital maps");
                (1..8)
                    .map(|k| {
                        self.from_coeffs(fu.row(k).to_vec())
                            .expect("rows are valid coefficients")
                    })
                    .collect()
            }
        }
    }

    /// The element with the given 7 imaginary coordinates (and zero trace).
    pub fn from_im_coords(
        self: &Algebra,
        xi: &[FieldScalar],
    ) -> Result<AlgebraElement, AlgebraError> {
        if xi.len() != 7 || self.dim != 8 {
            return Err(AlgebraError::BadCoefficients(format!(
                "{} imaginary coordinates for a dimension-{} algebra",
                xi.len(),
                self.dim
            )));
        }
        match self.basis_kind {
            BasisKind::GeneralE => {
                let mut coeffs = Vec::with_capacity(8);
                coeffs.push(FieldScalar::zero(self.field));
                coeffs.extend(xi.iter().cloned());
                self.from_coeffs(coeffs)
            }
            BasisKind::SplitPqr => {
                let fu = self.from_unital.as_ref().expect("split carries unital maps");
                let mut unital = Vec::with_capacity(8);
                unital.push(FieldScalar::zero(self.field));
                unital.extend(xi.iter().cloned());
                let coeffs = fu
                    .mul_vec_left(&unital)
                    .map_err(|e| AlgebraError::BadCoefficients(e.to_string()))?;
                self.from_coeffs(coeffs)
            }
        }
    }

    /// Parse the element text format produced by `Display`:
    /// `c0 + c1*e0 + …` for the e-basis or `c1*p1 + … + c8*r3` for the
    /// split basis, with parenthesized coefficients where needed.
    pub fn parse_element(self: &Algebra, text: &str) -> Result<AlgebraElement, AlgebraError> {
        if text.trim() == "0" {
            return Ok(self.zero());
        }
        let mut coeffs = vec![FieldScalar::zero(self.field); self.dim];
        for (sign, term) in split_terms(text)? {
            let term = term.trim();
            if term.is_empty() {
                return Err(AlgebraError::Parse("empty term".into()));
            }
            // Match a basis-name suffix, longest name first so `e1` does not
            // shadow a hypothetical longer label.
            let mut slot = None;
            for (k, name) in self.basis_names.iter().enumerate() {
                if *name == "1" {
                    continue;
                }
                if let Some(prefix) = term.strip_suffix(name) {
                    let prefix = prefix.trim_end();
                    let coeff_text = match prefix.strip_suffix('*') {
                        Some(rest) => rest.trim_end(),
                        None if prefix.is_empty() => "1",
                        // A nonempty prefix without `*` (e.g. `2e0`) is not
                        // part of the format.
                        None => continue,
                    };
                    slot = Some((k, coeff_text.to_string()));
                    break;
                }
            }
            let (k, coeff_text) = match slot {
                Some(hit) => hit,
                None => {
                    // Plain scalar term: only meaningful when the basis has
                    // an identity slot.
                    if self.basis_names[0] != "1" {
                        return Err(AlgebraError::Parse(format!(
                            "term {term:?} names no basis vector of this algebra"
                        )));
                    }
                    (0, term.to_string())
                }
            };
            let mut c = FieldScalar::parse(self.field, &coeff_text)
                .map_err(|e| AlgebraError::Parse(format!("coefficient {coeff_text:?}: {e}")))?;
            if sign < 0 {
                c = c.neg();
            }
            coeffs[k] = coeffs[k].add(&c);
        }
        Ok(AlgebraElement {
            algebra: self.clone(),
            coeffs,
        })
    }
}

/// Split `text` into `(sign, term)` pieces at top-level `+`/`-` separators
/// (depth 0 with respect to parentheses, not in operator position).
fn split_terms(text: &str) -> Result<Vec<(i8, String)>, AlgebraError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut sign: i8 = 1;
    let mut expect_operand = true; // at start or right after an operator
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
                expect_operand = true;
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(AlgebraError::Parse("unbalanced parentheses".into()));
                }
                cur.push(ch);
                expect_operand = false;
            }
            '+' | '-' if depth == 0 && !expect_operand => {
                out.push((sign, cur.trim().to_string()));
                cur = String::new();
                sign = if ch == '-' { -1 } else { 1 };
                expect_operand = true;
            }
            '-' if depth == 0 && expect_operand && cur.trim().is_empty() => {
                // Leading minus of the whole expression or of a term.
                sign = -sign;
            }
            '*' | '/' | '^' => {
                cur.push(ch);
                expect_operand = true;
            }
            c if c.is_whitespace() => {
                cur.push(c);
            }
            _ => {
                cur.push(ch);
                expect_operand = false;
            }
        }
    }
    if depth != 0 {
        return Err(AlgebraError::Parse("unbalanced parentheses".into()));
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    if out.is_empty() {
        return Err(AlgebraError::Parse("no terms".into()));
    }
    Ok(out)
}

/// The doubling-formula product on natural coordinates
/// `(a, b) · (c, d) = (ac + γ·d·b*, a*·d + c·b)` over the half algebra.
fn doubled_product(
    half: &Algebra,
    gamma: &FieldScalar,
    x: &[FieldScalar],
    y: &[FieldScalar],
) -> Vec<FieldScalar> {
    let n = half.dim;
    let (a, b) = x.split_at(n);
    let (c, d) = y.split_at(n);
    let ac = mul_coords(half, a, c);
    let b_star = conj_coords(half, b);
    let dbs = mul_coords(half, d, &b_star);
    let a_star = conj_coords(half, a);
    let asd = mul_coords(half, &a_star, d);
    let cb = mul_coords(half, c, b);
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        out.push(ac[k].add(&gamma.mul(&dbs[k])));
    }
    for k in 0..n {
        out.push(asd[k].add(&cb[k]));
    }
    out
}

/// Raw bilinear product on coefficient slices via the cached sparse table.
fn mul_coords(alg: &AlgebraDescriptor, x: &[FieldScalar], y: &[FieldScalar]) -> Vec<FieldScalar> {
    let mut out = vec![FieldScalar::zero(alg.field); alg.dim];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let f = xi.mul(yj);
            for (k, c) in &alg.sparse[i][j] {
                out[*k] = out[*k].add(&f.mul(c));
            }
        }
    }
    out
}

/// Conjugation on raw coefficients: `x* = 2τ(x)·1 − x`.
fn conj_coords(alg: &AlgebraDescriptor, x: &[FieldScalar]) -> Vec<FieldScalar> {
    let tau = tau_coords(alg, x);
    let two_tau = tau.add(&tau);
    alg.one_coeffs
        .iter()
        .zip(x)
        .map(|(o, xi)| two_tau.mul(o).sub(xi))
        .collect()
}

/// Trace on raw coefficients.
fn tau_coords(alg: &AlgebraDescriptor, x: &[FieldScalar]) -> FieldScalar {
    let mut t = FieldScalar::zero(alg.field);
    for (xi, w) in x.iter().zip(&alg.tau_weights) {
        if !xi.is_zero() && !w.is_zero() {
            t = t.add(&xi.mul(w));
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Public constructors
// ---------------------------------------------------------------------------

/// The general Cayley algebra `D_γ(D_β(D_α(F)))` on the basis
/// `1, e₀, …, e₆`: built by three doubling steps and verified cell-by-cell
/// against the hard-coded general table in `α, β, γ`.
pub fn make_general_cayley(
    field: FieldDescriptor,
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
) -> Result<Algebra, AlgebraError> {
    for p in [alpha, beta, gamma] {
        if p.is_zero() {
            return Err(AlgebraError::ZeroParameter);
        }
        assert_eq!(p.descriptor(), field, "parameters must live in the field");
    }
    let one = FieldScalar::one(field);
    let base = AlgebraDescriptor::base(field);

    // F → F ⊕ Fe₀ on basis (1, e₀): natural order already.
    let two = AlgebraDescriptor::double(
        base,
        alpha.clone(),
        vec!["1", "e0"],
        Matrix::identity(field, 2),
        vec![alpha.clone()],
    )?;

    // → quaternions on (1, e₀, e₁, e₃) with e₁ the adjoined unit; the
    // natural vector i·e₀ = e₁e₀ equals −e₃.
    let mut m4 = Matrix::identity(field, 4);
    m4.set(3, 3, one.neg());
    let four = AlgebraDescriptor::double(
        two,
        beta.clone(),
        vec!["1", "e0", "e1", "e3"],
        m4,
        vec![alpha.clone(), beta.clone()],
    )?;

    // → octonions on (1, e₀, …, e₆) with e₂ the adjoined unit. Natural
    // doubled order is (1, e₀, e₁, e₃, e₂, e₂e₀, e₂e₁, e₂e₃) and
    // e₂e₀ = −e₆, e₂e₁ = −e₄, e₂e₃ = e₅.
    let mut m8 = Matrix::zero(field, 8, 8);
    let assign: [(usize, usize, i64); 8] = [
        (0, 0, 1),
        (1, 1, 1),
        (2, 2, 1),
        (3, 4, 1),
        (4, 3, 1),
        (5, 7, -1),
        (6, 5, -1),
        (7, 6, 1),
    ];
    for (row, col, s) in assign {
        m8.set(row, col, FieldScalar::from_i64(field, s));
    }
    let eight = AlgebraDescriptor::double(
        four,
        gamma.clone(),
        vec!["1", "e0", "e1", "e2", "e3", "e4", "e5", "e6"],
        m8,
        vec![alpha.clone(), beta.clone(), gamma.clone()],
    )?;

    // Verify the doubled table against the independent hard-coded one.
    let zero = FieldScalar::zero(field);
    for i in 0..8 {
        for j in 0..8 {
            let expected: Vec<FieldScalar> = if i == 0 {
                let mut r = vec![zero.clone(); 8];
                r[j] = one.clone();
                r
            } else if j == 0 {
                let mut r = vec![zero.clone(); 8];
                r[i] = one.clone();
                r
            } else {
                general_cell_row(field, GENERAL_TABLE[i - 1][j - 1], alpha, beta, gamma)
            };
            assert_eq!(
                eight.table[i][j], expected,
                "doubling construction disagrees with the reference table at ({i},{j})"
            );
        }
    }
    Ok(eight)
}

/// The split Cayley algebra on its idempotent basis
/// `p₁, p₂, q₁, q₂, q₃, r₁, r₂, r₃`, with the identity `p₁ + p₂` and exact
/// change of basis to the unital presentation
/// `(1, p₁−p₂, q₁, q₂, q₃, r₁, r₂, r₃)`.
pub fn make_split_cayley(field: FieldDescriptor) -> Algebra {
    let zero = FieldScalar::zero(field);
    let one = FieldScalar::one(field);
    let mut table = vec![vec![vec![zero.clone(); 8]; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            if let Some((k, sign)) = SPLIT_TABLE[i][j] {
                table[i][j][k] = FieldScalar::from_i64(field, sign as i64);
            }
        }
    }
    let sparse = sparse_of(&table);

    // Unital basis in native coordinates.
    let mut from_unital = Matrix::identity(field, 8);
    from_unital.set(0, 0, one.clone()); // 1 = p₁ + p₂
    from_unital.set(0, 1, one.clone());
    from_unital.set(1, 0, one.clone()); // m₀ = p₁ − p₂
    from_unital.set(1, 1, one.neg());
    let to_unital = from_unital.inverse().expect("unital basis change invertible");

    let mut one_coeffs = vec![zero.clone(); 8];
    one_coeffs[0] = one.clone();
    one_coeffs[1] = one.clone();

    // τ(x) = unital coordinate 0 = Σ coeffs[k]·to_unital[k][0]; for the
    // idempotent basis that is (coeff p₁ + coeff p₂)/2.
    let tau_weights: Vec<FieldScalar> = (0..8).map(|k| to_unital.at(k, 0).clone()).collect();

    let alg = Arc::new(AlgebraDescriptor {
        field,
        dim: 8,
        params: Vec::new(),
        basis_kind: BasisKind::SplitPqr,
        basis_names: vec!["p1", "p2", "q1", "q2", "q3", "r1", "r2", "r3"],
        table,
        sparse,
        one_coeffs,
        tau_weights,
        to_unital: Some(to_unital),
        from_unital: Some(from_unital),
        doubling: None,
    });

    // The identity must act as a two-sided identity cell-by-cell.
    let one_el = alg.one();
    for k in 0..8 {
        let e = alg.basis_element(k);
        assert_eq!(one_el.mul(&e), e, "1·basis {k}");
        assert_eq!(e.mul(&one_el), e, "basis {k}·1");
    }
    alg
}

/// Product via the raw doubling formula `(a+ib)(c+id) = (ac + γdb*) +
/// i(a*d + cb)` on the top-level decomposition — the independent oracle for
/// the table engine. Errors on elements of different algebras or an algebra
/// with no doubling decomposition (the split basis).
pub fn double_mul(
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    if !x.same_algebra(y) {
        return Err(AlgebraError::Mismatch);
    }
    let alg = &x.algebra;
    let info = alg.doubling.as_ref().ok_or(AlgebraError::NotDoubled)?;
    let xp = info
        .self_to_pairs
        .mul_vec_left(&x.coeffs)
        .expect("square change of basis");
    let yp = info
        .self_to_pairs
        .mul_vec_left(&y.coeffs)
        .expect("square change of basis");
    let prod = doubled_product(&info.half, &info.gamma, &xp, &yp);
    let coeffs = info
        .pairs_to_self
        .mul_vec_left(&prod)
        .expect("square change of basis");
    Ok(AlgebraElement {
        algebra: alg.clone(),
        coeffs,
    })
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An element of an [`AlgebraDescriptor`], as a coefficient vector over the
/// descriptor's basis.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: Algebra,
    coeffs: Vec<FieldScalar>,
}

impl AlgebraElement {
    /// The algebra this element belongs to.
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Coefficients in basis order.
    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    /// Coefficient `k`.
    pub fn coeff(&self, k: usize) -> &FieldScalar {
        &self.coeffs[k]
    }

    /// True iff all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_algebra(&self, other: &AlgebraElement) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    fn assert_same(&self, other: &AlgebraElement) {
        assert!(
            self.same_algebra(other),
            "elements belong to different algebras"
        );
    }

    /// Sum. Panics on algebra mismatch.
    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        self.assert_same(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }

    /// Difference. Panics on algebra mismatch.
    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.assert_same(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }

    /// Additive inverse.
    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, f: &FieldScalar) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Product via the cached structure constants (sparse bilinear loop).
    /// Panics on algebra mismatch; see [`AlgebraElement::checked_mul`].
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.assert_same(other);
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: mul_coords(&self.algebra, &self.coeffs, &other.coeffs),
        }
    }

    /// Product, reporting [`AlgebraError::Mismatch`] instead of panicking.
    pub fn checked_mul(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !self.same_algebra(other) {
            return Err(AlgebraError::Mismatch);
        }
        Ok(self.mul(other))
    }

    /// Conjugate: fixes the trace part, negates the imaginary part.
    pub fn conj(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: conj_coords(&self.algebra, &self.coeffs),
        }
    }

    /// Trace `τ(x)`: the coefficient of 1 in the decomposition
    /// `x = τ(x)·1 + im(x)`.
    pub fn tau(&self) -> FieldScalar {
        tau_coords(&self.algebra, &self.coeffs)
    }

    /// Imaginary part `x − τ(x)·1`.
    pub fn im_part(&self) -> AlgebraElement {
        let tau = self.tau();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&self.algebra.one_coeffs)
            .map(|(c, o)| c.sub(&tau.mul(o)))
            .collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }

    /// Imaginary coordinates of a dimension-8 element: the 7 coordinates of
    /// `im(x)` in the order of [`AlgebraDescriptor::imaginary_basis`].
    pub fn im_coords(&self) -> Vec<FieldScalar> {
        assert_eq!(self.algebra.dim, 8);
        match self.algebra.basis_kind {
            BasisKind::GeneralE => self.im_part().coeffs[1..].to_vec(),
            BasisKind::SplitPqr => {
                let tu = self
                    .algebra
                    .to_unital
                    .as_ref()
                    .expect("split carries unital maps");
                let unital = tu
                    .mul_vec_left(&self.coeffs)
                    .expect("square change of basis");
                unital[1..].to_vec()
            }
        }
    }

    /// Norm `n(x) = x*·x`, asserted to be a scalar multiple of 1.
    pub fn norm(&self) -> FieldScalar {
        let p = self.conj().mul(self);
        let t = p.tau();
        assert!(
            p.im_part().is_zero(),
            "x*·x must land in F·1 — algebra tables are inconsistent"
        );
        t
    }

    /// Associator `(ab)c − a(bc)`. Panics on algebra mismatch.
    pub fn associator(&self, b: &AlgebraElement, c: &AlgebraElement) -> AlgebraElement {
        self.assert_same(b);
        self.assert_same(c);
        self.mul(b).mul(c).sub(&self.mul(&b.mul(c)))
    }

    /// True iff `x ≠ 0` and `x² = 0` (the zero element does not count).
    pub fn is_nilpotent(&self) -> bool {
        !self.is_zero() && self.mul(self).is_zero()
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = c.to_string();
            let needs_parens = s.starts_with('-')
                || s.contains(['+', '*', '/', '^', ' ', '(']);
            let name = self.algebra.basis_names[k];
            if name == "1" {
                if needs_parens {
                    write!(f, "({s})")?;
                } else {
                    write!(f, "{s}")?;
                }
            } else if needs_parens {
                write!(f, "({s})*{name}")?;
            } else {
                write!(f, "{s}*{name}")?;
            }
        }
        Ok(())
    }
}
