//! A Fano plane decorated with scalars, seven linear functionals on the
//! exterior cube of the imaginary space, and an independent Plücker-space
//! route to the block set.
//!
//! Starting from three nonzero parameters `(α, β, γ)` — the same parameters
//! that drive the doubled algebra of [`crate::algebra::make_general_cayley`]
//! — this module builds:
//!
//! * a labeled Fano plane on points `v₀ … v₆` whose lines
//!   `lₙ = {vₙ, vₙ₊₁, vₙ₊₃}` carry a cyclic order compatible with the
//!   order-7 automorphism `vₙ ↦ vₙ₊₁` ([`FanoStructure`]);
//! * three scalar tables: `h` on lines, `s` on points and `r` on point
//!   pairs ([`HSRData`]), tied together by exact product identities;
//! * a multiplication on `F·1 ⊕ F⁷` with `v² = s(v)·1` and, along each
//!   oriented line `(x, y, z)`, `xy = r(x,y)·z` and `yx = −r(x,y)·z` — an
//!   algebra isomorphic to the doubled one via `eₙ ↦ ±vₙ`
//!   ([`fano_multiplication`]);
//! * the seven wedge vectors `w_l = h(l)·u₁∧u₂∧u₃` ([`line_wedges`]) and
//!   the seven functionals `η_v` on `Λ³` defined by
//!   `v ∧ (Σ_l w_l) ∧ w = η_v(w)·Δ` with `Δ = v₀∧…∧v₆`
//!   ([`eta_functional`]);
//! * the associator map `Λ³ → im(O)` as a 7×35 matrix ([`ass_matrix`]);
//! * over a finite field, the set of 3-dimensional subspaces whose Plücker
//!   coordinates annihilate all seven functionals
//!   ([`blocks_via_plucker`]).
//!
//! The headline facts, asserted in constructors or covered by tests: the
//! common kernel of the seven `η_v` has dimension 28 and equals the kernel
//! of the associator map, and the subspaces singled out by that kernel are
//! exactly the blocks that [`crate::design::enumerate_blocks`] finds by
//! closing multiplication. At `(α, β, γ) = (−1, −1, −1)` every decoration
//! collapses to `±1` and the construction reproduces the classical picture.

use crate::algebra::{make_general_cayley, Algebra, AlgebraDescriptor, AlgebraError};
use crate::design::BlockSet;
use crate::field::{FieldDescriptor, FieldError, FieldScalar};
use crate::linalg::{
    pivot_patterns, plucker, subspaces_with_pivots, triple_index, wedge3, wedge_triples,
    LinalgError, Matrix, Subspace, WedgeVector, WEDGE_DIM,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Number of points (and lines) of the Fano plane.
pub const POINT_COUNT: usize = 7;

/// Errors from the decorated Fano plane and the maps built on it.
#[derive(Debug, Error)]
pub enum WedgeError {
    /// A construction parameter was zero.
    #[error("parameters must be nonzero")]
    ZeroParameter,
    /// The propagated point scalars violated a product identity.
    #[error("point-scalar propagation hit an inconsistent line product")]
    InconsistentPropagation,
    /// The sign map to the doubled algebra failed to preserve products.
    #[error("sign map to the doubled algebra is not an isomorphism")]
    IsomorphismCheckFailed,
    /// An associator of imaginary basis vectors had a nonzero trace part.
    #[error("associator of imaginary elements left the imaginary space")]
    NonImaginaryAssociator,
    /// The 7 line wedges plus 28 normalized complements failed to span Λ³.
    #[error("line wedges plus normalized complements do not form a basis")]
    BasisAssertionFailed,
    /// Block enumeration needs a finite field.
    #[error("block enumeration requires a finite field")]
    InfiniteField,
    /// Underlying linear algebra failed.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Underlying algebra construction failed.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// Underlying field arithmetic failed.
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The two labeling conventions for the cyclic order on lines. Both are
/// compatible with the automorphism `vₙ ↦ vₙ₊₁`; they differ in whether the
/// order on line `n` reads `(vₙ, vₙ₊₁, vₙ₊₃)` or `(vₙ, vₙ₊₃, vₙ₊₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Line `n` is ordered `(vₙ, vₙ₊₁, vₙ₊₃)`.
    #[default]
    Forward,
    /// Line `n` is ordered `(vₙ, vₙ₊₃, vₙ₊₁)`.
    Reversed,
}

impl Orientation {
    /// Lower-case name, used in serialized reports.
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Forward => "forward",
            Orientation::Reversed => "reversed",
        }
    }
}

/// The classical Fano plane on seven points labeled `v₀ … v₆` (residues mod
/// 7), with lines `lₙ = {vₙ, vₙ₊₁, vₙ₊₃}` carrying a cyclic order and the
/// order-7 automorphism `vₙ ↦ vₙ₊₁`.
///
/// The constructor checks the Steiner property (every pair of points on
/// exactly one line, every pair of lines meeting in exactly one point) and
/// that the automorphism maps ordered lines to ordered lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoStructure {
    orientation: Orientation,
    /// `lines[n]` = the cyclically ordered point labels of line `n`.
    lines: [[usize; 3]; 7],
    /// `line_through[a][b]` = index of the unique line through `a ≠ b`.
    line_through: [[usize; 7]; 7],
    /// `third[a][b]` = the third point on that line.
    third: [[usize; 7]; 7],
}

impl FanoStructure {
    /// Build the labeled plane under the given orientation convention.
    pub fn new(orientation: Orientation) -> FanoStructure {
        let mut lines = [[0usize; 3]; 7];
        for (n, line) in lines.iter_mut().enumerate() {
            let (x, y, z) = (n, (n + 1) % 7, (n + 3) % 7);
            *line = match orientation {
                Orientation::Forward => [x, y, z],
                Orientation::Reversed => [x, z, y],
            };
        }
        let mut line_through = [[usize::MAX; 7]; 7];
        let mut third = [[usize::MAX; 7]; 7];
        for (n, line) in lines.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let (a, b, c) = (line[i], line[j], line[3 - i - j]);
                    assert!(
                        line_through[a][b] == usize::MAX || line_through[a][b] == n,
                        "two points must lie on at most one line"
                    );
                    line_through[a][b] = n;
                    third[a][b] = c;
                }
            }
        }
        for a in 0..7 {
            for b in 0..7 {
                if a != b {
                    assert_ne!(
                        line_through[a][b],
                        usize::MAX,
                        "two points must lie on at least one line"
                    );
                }
            }
        }
        for m in 0..7 {
            for n in m + 1..7 {
                let met = lines[m].iter().filter(|p| lines[n].contains(p)).count();
                assert_eq!(met, 1, "two lines must meet in exactly one point");
            }
        }
        let fano = FanoStructure {
            orientation,
            lines,
            line_through,
            third,
        };
        // The point shift must send the ordered line lₙ to the ordered line
        // lₙ₊₁ up to cyclic rotation.
        for n in 0..7 {
            let image: Vec<usize> = fano.lines[n].iter().map(|&p| (p + 1) % 7).collect();
            let target = fano.lines[(n + 1) % 7];
            let rotated = (0..3).any(|r| (0..3).all(|i| image[(i + r) % 3] == target[i]));
            assert!(
                rotated,
                "the automorphism must map ordered lines to ordered lines"
            );
        }
        fano
    }

    /// Which labeling convention the line orders follow.
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The cyclically ordered points of line `n`.
    pub fn line(&self, n: usize) -> [usize; 3] {
        self.lines[n]
    }

    /// All seven ordered lines, indexed by line label.
    pub fn lines(&self) -> &[[usize; 3]; 7] {
        &self.lines
    }

    /// Index of the unique line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> usize {
        assert!(a < 7 && b < 7 && a != b, "need two distinct points");
        self.line_through[a][b]
    }

    /// The third point on the line through two distinct points.
    pub fn third_point(&self, a: usize, b: usize) -> usize {
        assert!(a < 7 && b < 7 && a != b, "need two distinct points");
        self.third[a][b]
    }

    /// The order-7 automorphism on point labels.
    pub fn automorphism(&self, p: usize) -> usize {
        assert!(p < 7, "point label out of range");
        (p + 1) % 7
    }

    /// Whether the unordered triple `{a, b, c}` is a line.
    pub fn is_line(&self, a: usize, b: usize, c: usize) -> bool {
        a != b && b != c && a != c && self.third[a][b] == c
    }

    /// Whether `b` immediately follows `a` in the cyclic order of line `n`.
    pub fn cyclic_follows(&self, n: usize, a: usize, b: usize) -> bool {
        let l = self.lines[n];
        (l[0] == a && l[1] == b) || (l[1] == a && l[2] == b) || (l[2] == a && l[0] == b)
    }
}

/// The three scalar tables decorating a [`FanoStructure`], built from
/// parameters `(α, β, γ)`:
///
/// * `h` on lines: `h(l₁) = −α`, `h(l₆) = −β`, `h(l₀) = −γ`, and `1` on the
///   other four lines;
/// * `s` on points: seeded by `s(v₀) = α`, `s(v₁) = β`, `s(v₂) = γ` and
///   propagated so that every line satisfies
///   `∏_{v∈l} s(v) = −(αβγ)²/h(l)²`;
/// * `r` on unordered point pairs: `r(a,b) = αβγ/(h(l)·s(c))` with `l` the
///   line through `a, b` and `c` its third point.
///
/// Construction verifies the line products, the dual point identity
/// `∏_{l∋p} h(l) = αβγ/s(p)` and the square identity
/// `r(a,b)² = −s(a)s(b)/s(c)` for every pair.
#[derive(Debug, Clone)]
pub struct HSRData {
    field: FieldDescriptor,
    params: [FieldScalar; 3],
    h: Vec<FieldScalar>,
    s: Vec<FieldScalar>,
    /// `r[a][b]` for `a ≠ b`; the diagonal is unused and holds zeros.
    r: Vec<Vec<FieldScalar>>,
}

impl HSRData {
    /// The coefficient field.
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// The parameters `(α, β, γ)` the tables were built from.
    pub fn params(&self) -> &[FieldScalar; 3] {
        &self.params
    }

    /// The product `αβγ`.
    pub fn abc(&self) -> FieldScalar {
        self.params[0].mul(&self.params[1]).mul(&self.params[2])
    }

    /// The line scalar `h(lₙ)`.
    pub fn h(&self, n: usize) -> &FieldScalar {
        &self.h[n]
    }

    /// The point scalar `s(vₚ)`.
    pub fn s(&self, p: usize) -> &FieldScalar {
        &self.s[p]
    }

    /// The pair scalar `r(a, b) = r(b, a)` for distinct points.
    pub fn r(&self, a: usize, b: usize) -> &FieldScalar {
        assert!(a < 7 && b < 7 && a != b, "need two distinct points");
        &self.r[a][b]
    }
}

/// Build the labeled Fano plane and its scalar decorations under the default
/// `forward` orientation. Fails on zero parameters; the product identities
/// tying `h`, `s` and `r` together are verified before returning.
pub fn build_fano(
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
) -> Result<(FanoStructure, HSRData), WedgeError> {
    build_fano_oriented(alpha, beta, gamma, Orientation::Forward)
}

/// [`build_fano`] with an explicit orientation convention. The scalar tables
/// do not depend on the orientation — only the cyclic line orders (and hence
/// wedge signs and products) do.
pub fn build_fano_oriented(
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
    orientation: Orientation,
) -> Result<(FanoStructure, HSRData), WedgeError> {
    let field = alpha.descriptor();
    for p in [alpha, beta, gamma] {
        if p.is_zero() {
            return Err(WedgeError::ZeroParameter);
        }
        assert_eq!(p.descriptor(), field, "parameters must share one field");
    }
    let fano = FanoStructure::new(orientation);
    let one = FieldScalar::one(field);

    // Line scalars: the three lines through the pairwise intersections
    // v₀ = l₆∩l₀, v₁ = l₀∩l₁, v₂ = l₁∩l₆ carry −α, −β, −γ.
    let mut h = vec![one.clone(); 7];
    h[1] = alpha.neg();
    h[6] = beta.neg();
    h[0] = gamma.neg();

    // Point scalars: seed the three special points, then walk lines with two
    // known values until all seven are determined.
    let abc = alpha.mul(beta).mul(gamma);
    let abc_sq = abc.mul(&abc);
    let line_target = |n: usize| -> Result<FieldScalar, WedgeError> {
        let hh = h[n].mul(&h[n]);
        Ok(abc_sq.div(&hh)?.neg())
    };
    let mut s: Vec<Option<FieldScalar>> = vec![None; 7];
    s[0] = Some(alpha.clone());
    s[1] = Some(beta.clone());
    s[2] = Some(gamma.clone());
    while s.iter().any(|x| x.is_none()) {
        let mut progress = false;
        for n in 0..7 {
            let pts = fano.line(n);
            let unknown: Vec<usize> = pts.iter().copied().filter(|&p| s[p].is_none()).collect();
            if unknown.len() != 1 {
                continue;
            }
            let known: Vec<&FieldScalar> = pts
                .iter()
                .filter(|&&p| p != unknown[0])
                .map(|&p| s[p].as_ref().expect("filtered to known"))
                .collect();
            let value = line_target(n)?.div(&known[0].mul(known[1]))?;
            s[unknown[0]] = Some(value);
            progress = true;
        }
        if !progress {
            return Err(WedgeError::InconsistentPropagation);
        }
    }
    let s: Vec<FieldScalar> = s.into_iter().map(|x| x.expect("all determined")).collect();

    // Every line product and the dual point identity must now hold exactly.
    for n in 0..7 {
        let pts = fano.line(n);
        let prod = s[pts[0]].mul(&s[pts[1]]).mul(&s[pts[2]]);
        if prod != line_target(n)? {
            return Err(WedgeError::InconsistentPropagation);
        }
    }
    for p in 0..7 {
        let mut prod = one.clone();
        for (n, line) in fano.lines().iter().enumerate() {
            if line.contains(&p) {
                prod = prod.mul(&h[n]);
            }
        }
        if prod != abc.div(&s[p])? {
            return Err(WedgeError::InconsistentPropagation);
        }
    }

    // Pair scalars, with their square identity verified.
    let zero = FieldScalar::zero(field);
    let mut r = vec![vec![zero; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            if a == b {
                continue;
            }
            let n = fano.line_through(a, b);
            let c = fano.third_point(a, b);
            let value = abc.div(&h[n].mul(&s[c]))?;
            let square = value.mul(&value);
            if square != s[a].mul(&s[b]).div(&s[c])?.neg() {
                return Err(WedgeError::InconsistentPropagation);
            }
            r[a][b] = value;
        }
    }

    Ok((
        fano,
        HSRData {
            field,
            params: [alpha.clone(), beta.clone(), gamma.clone()],
            h,
            s,
            r,
        },
    ))
}

/// Build the 8-dimensional algebra on basis `{1, v₀ … v₆}` with `v² = s(v)·1`
/// and `xy = r(x,y)·z`, `yx = −r(x,y)·z` along each oriented line `(x, y, z)`,
/// under the default `forward` orientation.
///
/// Before returning, the construction asserts that `eₙ ↦ vₙ` (or `eₙ ↦ −vₙ`
/// in the reversed case) is an isomorphism from the doubled algebra of
/// [`make_general_cayley`] at the same parameters.
pub fn fano_multiplication(
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
) -> Result<Algebra, WedgeError> {
    fano_multiplication_oriented(alpha, beta, gamma, Orientation::Forward)
}

/// [`fano_multiplication`] with an explicit orientation convention.
pub fn fano_multiplication_oriented(
    alpha: &FieldScalar,
    beta: &FieldScalar,
    gamma: &FieldScalar,
    orientation: Orientation,
) -> Result<Algebra, WedgeError> {
    let (fano, hsr) = build_fano_oriented(alpha, beta, gamma, orientation)?;
    let field = hsr.field();
    let zero = FieldScalar::zero(field);
    let one = FieldScalar::one(field);
    let unit = |k: usize| -> Vec<FieldScalar> {
        let mut v = vec![zero.clone(); 8];
        v[k] = one.clone();
        v
    };

    // Structure table on {1, v₀ … v₆}: slot 0 is the identity, slot 1+p is vₚ.
    let mut table = vec![vec![vec![zero.clone(); 8]; 8]; 8];
    for (j, cell) in table[0].iter_mut().enumerate() {
        *cell = unit(j);
    }
    for (i, row) in table.iter_mut().enumerate().skip(1) {
        row[0] = unit(i);
    }
    for p in 0..7 {
        let mut cell = vec![zero.clone(); 8];
        cell[0] = hsr.s(p).clone();
        table[1 + p][1 + p] = cell;
    }
    for a in 0..7 {
        for b in 0..7 {
            if a == b {
                continue;
            }
            let n = fano.line_through(a, b);
            let c = fano.third_point(a, b);
            let coeff = if fano.cyclic_follows(n, a, b) {
                hsr.r(a, b).clone()
            } else {
                hsr.r(a, b).neg()
            };
            let mut cell = vec![zero.clone(); 8];
            cell[1 + c] = coeff;
            table[1 + a][1 + b] = cell;
        }
    }
    let names = vec!["1", "v0", "v1", "v2", "v3", "v4", "v5", "v6"];
    let alg = AlgebraDescriptor::from_unit_table(
        field,
        vec![alpha.clone(), beta.clone(), gamma.clone()],
        names,
        table,
    );

    // The sign map φ(1) = 1, φ(eₙ) = ±vₙ must carry the doubled structure
    // constants to the table above, cell by cell.
    let reference = make_general_cayley(field, alpha, beta, gamma)?;
    let flip = orientation == Orientation::Reversed;
    let phi = |k: usize| {
        let e = alg.basis_element(k);
        if flip && k >= 1 {
            e.neg()
        } else {
            e
        }
    };
    for i in 0..8 {
        for j in 0..8 {
            let lhs = phi(i).mul(&phi(j));
            let mut rhs = alg.zero();
            for (k, c) in reference.table_entry(i, j).iter().enumerate() {
                if !c.is_zero() {
                    rhs = rhs.add(&phi(k).scale(c));
                }
            }
            if !lhs.sub(&rhs).is_zero() {
                return Err(WedgeError::IsomorphismCheckFailed);
            }
        }
    }
    Ok(alg)
}

/// The seven wedge vectors `w_l = h(l)·u₁∧u₂∧u₃`, indexed by line label,
/// where `(u₁, u₂, u₃)` is the cyclic order of line `l`. Cyclic rotations of
/// the order give the same vector because a 3-cycle is an even permutation.
pub fn line_wedges(fano: &FanoStructure, hsr: &HSRData) -> Vec<WedgeVector> {
    let field = hsr.field();
    let unit = |p: usize| -> Vec<FieldScalar> {
        let mut v = vec![FieldScalar::zero(field); 7];
        v[p] = FieldScalar::one(field);
        v
    };
    (0..7)
        .map(|n| {
            let [a, b, c] = fano.line(n);
            wedge3(&unit(a), &unit(b), &unit(c)).scale(hsr.h(n))
        })
        .collect()
}

/// Determinant of a square matrix by Gaussian elimination with partial
/// pivoting; exact over every backend field.
fn determinant(m: &Matrix) -> FieldScalar {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant needs a square matrix");
    let field = m.field();
    let mut rows = m.to_row_vecs();
    let mut det = FieldScalar::one(field);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return FieldScalar::zero(field);
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = det.neg();
        }
        let pv = rows[col][col].clone();
        let inv = pv.inv().expect("pivot is nonzero");
        det = det.mul(&pv);
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].mul(&inv);
            for c in col..n {
                let t = rows[col][c].mul(&f);
                rows[r][c] = rows[r][c].sub(&t);
            }
        }
    }
    det
}

/// The Λ⁷ coefficient of `v_{i₀} ∧ … ∧ v_{i₆}` against `Δ = v₀∧…∧v₆`: the
/// determinant of the 7×7 matrix whose rows are the corresponding unit
/// vectors (zero when an index repeats, `±1` otherwise).
fn top_wedge_coefficient(field: FieldDescriptor, indices: [usize; 7]) -> FieldScalar {
    let zero = FieldScalar::zero(field);
    let one = FieldScalar::one(field);
    let rows: Vec<Vec<FieldScalar>> = indices
        .iter()
        .map(|&p| {
            let mut row = vec![zero.clone(); 7];
            row[p] = one.clone();
            row
        })
        .collect();
    let m = Matrix::from_rows(field, &rows).expect("rows are rectangular");
    determinant(&m)
}

/// The functional `η_v` on `Λ³`, defined by `v ∧ (Σ_l w_l) ∧ w = η_v(w)·Δ`
/// with `Δ = v₀∧…∧v₆`, returned as its 35 values on the basis wedges in
/// [`wedge_triples`] order.
pub fn eta_functional(fano: &FanoStructure, hsr: &HSRData, v: usize) -> Vec<FieldScalar> {
    assert!(v < 7, "point label out of range");
    let field = hsr.field();
    let mut sum = WedgeVector::zero(field);
    for w in line_wedges(fano, hsr) {
        sum = sum.add(&w);
    }
    let triples = wedge_triples();
    let mut out = Vec::with_capacity(WEDGE_DIM);
    for &(i, j, k) in triples {
        let mut acc = FieldScalar::zero(field);
        for (m, &(p, q, r)) in triples.iter().enumerate() {
            let c = sum.at(m);
            if c.is_zero() {
                continue;
            }
            let coeff = top_wedge_coefficient(field, [v, p, q, r, i, j, k]);
            if !coeff.is_zero() {
                acc = acc.add(&c.mul(&coeff));
            }
        }
        out.push(acc);
    }
    out
}

/// The seven functionals `η_{v₀} … η_{v₆}` stacked as the rows of a 7×35
/// matrix.
pub fn eta_matrix(fano: &FanoStructure, hsr: &HSRData) -> Result<Matrix, WedgeError> {
    let rows: Vec<Vec<FieldScalar>> = (0..7).map(|v| eta_functional(fano, hsr, v)).collect();
    Ok(Matrix::from_rows(hsr.field(), &rows)?)
}

/// Value of a 35-coefficient functional on a wedge vector.
pub fn functional_value(row: &[FieldScalar], w: &WedgeVector) -> FieldScalar {
    assert_eq!(row.len(), WEDGE_DIM, "functional must have 35 coefficients");
    let mut acc = FieldScalar::zero(w.field());
    for (n, c) in row.iter().enumerate() {
        if !c.is_zero() && !w.at(n).is_zero() {
            acc = acc.add(&c.mul(w.at(n)));
        }
    }
    acc
}

/// Apply a `k×35` matrix to a wedge vector, returning the `k` row values.
pub fn apply_to_wedge(m: &Matrix, w: &WedgeVector) -> Vec<FieldScalar> {
    assert_eq!(m.cols(), WEDGE_DIM, "matrix must act on 35 coordinates");
    (0..m.rows()).map(|r| functional_value(m.row(r), w)).collect()
}

/// The 35 coordinates of a wedge vector as a plain vector, in
/// [`wedge_triples`] order.
fn wedge_coords(w: &WedgeVector) -> Vec<FieldScalar> {
    (0..WEDGE_DIM).map(|n| w.at(n).clone()).collect()
}

/// The common kernel `⋂_v ker η_v` of the seven functionals, as a canonical
/// subspace of the 35-dimensional wedge space. Its dimension is always 28,
/// which is asserted.
pub fn kernel_eta(fano: &FanoStructure, hsr: &HSRData) -> Result<Subspace, WedgeError> {
    let m = eta_matrix(fano, hsr)?;
    let null = m.kernel();
    let sub = Subspace::span(hsr.field(), WEDGE_DIM, &null.to_row_vecs())?;
    assert_eq!(
        sub.dim(),
        28,
        "the common kernel of the seven functionals must have dimension 28"
    );
    Ok(sub)
}

/// The associator map `Λ³(im O) → im O` of a dimension-8 algebra as a 7×35
/// matrix: the column for the basis wedge `(i, j, k)` holds the imaginary
/// coordinates of `(bᵢbⱼ)bₖ − bᵢ(bⱼbₖ)` over the imaginary basis `b₀ … b₆`.
/// The associator of imaginary elements is itself imaginary; a nonzero trace
/// part is reported as [`WedgeError::NonImaginaryAssociator`].
pub fn ass_matrix(alg: &Algebra) -> Result<Matrix, WedgeError> {
    assert_eq!(alg.dim(), 8, "the associator map needs a dimension-8 algebra");
    let field = alg.field();
    let basis = alg.imaginary_basis();
    let mut m = Matrix::zero(field, 7, WEDGE_DIM);
    for (n, &(i, j, k)) in wedge_triples().iter().enumerate() {
        let a = basis[i].associator(&basis[j], &basis[k]);
        if !a.tau().is_zero() {
            return Err(WedgeError::NonImaginaryAssociator);
        }
        for (r, c) in a.im_coords().into_iter().enumerate() {
            m.set(r, n, c);
        }
    }
    Ok(m)
}

/// For each point `v`, the four wedge vectors `w_{v,1} … w_{v,4}`: scalar
/// multiples of basis wedges `a∧b∧c` with `{a, b, c, v}` line-free,
/// normalized so that `η_v(w_{v,i}) = 1`. The four come from the four lines
/// avoiding `v` (each contributes the complement `{a,b,c}` of `l ∪ {v}`),
/// ordered by line label.
///
/// Also asserts that the 7 line wedges together with these 28 vectors span
/// the whole 35-dimensional wedge space.
pub fn wvi_basis(fano: &FanoStructure, hsr: &HSRData) -> Result<Vec<Vec<WedgeVector>>, WedgeError> {
    let field = hsr.field();
    let mut per_point = Vec::with_capacity(7);
    for v in 0..7 {
        let eta = eta_functional(fano, hsr, v);
        let mut four = Vec::with_capacity(4);
        for n in 0..7 {
            let line = fano.line(n);
            if line.contains(&v) {
                continue;
            }
            let rest: Vec<usize> = (0..7).filter(|p| *p != v && !line.contains(p)).collect();
            debug_assert_eq!(rest.len(), 3);
            let idx = triple_index(rest[0], rest[1], rest[2]);
            let value = &eta[idx];
            if value.is_zero() {
                return Err(WedgeError::BasisAssertionFailed);
            }
            let mut w = WedgeVector::zero(field);
            w.set(idx, value.inv()?);
            four.push(w);
        }
        assert_eq!(four.len(), 4, "each point avoids exactly four lines");
        per_point.push(four);
    }
    let mut rows: Vec<Vec<FieldScalar>> = line_wedges(fano, hsr)
        .iter()
        .map(wedge_coords)
        .collect();
    for four in &per_point {
        for w in four {
            rows.push(wedge_coords(w));
        }
    }
    let span = Subspace::span(field, WEDGE_DIM, &rows)?;
    if span.dim() != WEDGE_DIM {
        return Err(WedgeError::BasisAssertionFailed);
    }
    Ok(per_point)
}

/// Over a finite field, the set of 3-dimensional subspaces of the imaginary
/// space whose Plücker coordinates are annihilated by all seven functionals
/// — the block set obtained geometrically, keyed by canonical form.
///
/// The decoration and the algebra must share field and parameters; the set
/// equals the one produced by [`crate::design::enumerate_blocks`] on the
/// doubled algebra at the same parameters.
pub fn blocks_via_plucker(
    fano: &FanoStructure,
    hsr: &HSRData,
    alg: &Algebra,
) -> Result<BlockSet, WedgeError> {
    let field = alg.field();
    if !field.is_finite() {
        return Err(WedgeError::InfiniteField);
    }
    assert_eq!(field, hsr.field(), "decoration and algebra must share a field");
    assert_eq!(
        alg.params(),
        &hsr.params()[..],
        "decoration and algebra must share parameters"
    );
    let etas: Vec<Vec<FieldScalar>> = (0..7).map(|v| eta_functional(fano, hsr, v)).collect();
    let patterns = pivot_patterns(7, 3);
    patterns
        .par_iter()
        .map(|pattern| -> Result<BlockSet, WedgeError> {
            let mut out = BlockSet::new();
            for space in subspaces_with_pivots(7, pattern, field)? {
                let p = plucker(&space)?;
                if etas.iter().all(|row| functional_value(row, &p).is_zero()) {
                    out.insert(space.canonical_string(), space);
                }
            }
            Ok(out)
        })
        .try_reduce(BlockSet::new, |mut a, b| {
            a.extend(b);
            Ok(a)
        })
}

/// Serializable dump of the seven functionals and their common kernel, for
/// inspection outside the crate.
#[derive(Debug, Clone, Serialize)]
pub struct EtaReport {
    /// Report format version.
    pub schema: u32,
    /// The coefficient field, rendered as text.
    pub field: String,
    /// The parameters `(α, β, γ)`, canonically rendered.
    pub params: [String; 3],
    /// Labeling convention of the line orders.
    pub orientation: String,
    /// The seven functionals in point order, 35 canonical scalars each, in
    /// [`wedge_triples`] coordinate order.
    pub eta: Vec<Vec<String>>,
    /// Dimension of the common kernel (always 28).
    pub kernel_dim: usize,
    /// Canonical basis rows of the common kernel, 35 scalars each.
    pub kernel_basis: Vec<Vec<String>>,
}

/// Build the [`EtaReport`] for a decorated plane.
pub fn eta_report(fano: &FanoStructure, hsr: &HSRData) -> Result<EtaReport, WedgeError> {
    let m = eta_matrix(fano, hsr)?;
    let kernel = kernel_eta(fano, hsr)?;
    let eta = (0..7)
        .map(|r| m.row(r).iter().map(|c| c.canonical_string()).collect())
        .collect();
    Ok(EtaReport {
        schema: 1,
        field: hsr.field().to_string(),
        params: [
            hsr.params()[0].canonical_string(),
            hsr.params()[1].canonical_string(),
            hsr.params()[2].canonical_string(),
        ],
        orientation: fano.orientation().name().to_string(),
        eta,
        kernel_dim: kernel.dim(),
        kernel_basis: kernel.rows_of_strings(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rational()
    }

    fn fp(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn c(d: FieldDescriptor, n: i64) -> FieldScalar {
        FieldScalar::from_i64(d, n)
    }

    /// The symbolic field F₅(a, b, c) with its three generators.
    fn symbolic() -> (FieldDescriptor, [FieldScalar; 3]) {
        let d = FieldDescriptor::function_over_prime(5).unwrap();
        (
            d,
            [
                FieldScalar::var(d, 0).unwrap(),
                FieldScalar::var(d, 1).unwrap(),
                FieldScalar::var(d, 2).unwrap(),
            ],
        )
    }

    fn neg_ones(d: FieldDescriptor) -> [FieldScalar; 3] {
        [c(d, -1), c(d, -1), c(d, -1)]
    }

    fn random_nonzero(rng: &mut ChaCha8Rng, d: FieldDescriptor) -> FieldScalar {
        loop {
            let n = (rng.next_u64() % 19) as i64 - 9;
            let x = c(d, n);
            if !x.is_zero() {
                return x;
            }
        }
    }

    #[test]
    fn fano_structure_satisfies_steiner_and_automorphism_invariants() {
        let fwd = FanoStructure::new(Orientation::Forward);
        let rev = FanoStructure::new(Orientation::Reversed);
        assert_eq!(fwd.orientation(), Orientation::Forward);
        assert_eq!(fwd.line(0), [0, 1, 3]);
        assert_eq!(rev.line(0), [0, 3, 1]);
        for n in 0..7 {
            let mut a = fwd.line(n);
            let mut b = rev.line(n);
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "both orientations carry the same unordered lines");
        }
        assert_eq!(fwd.line_through(0, 1), 0);
        assert_eq!(fwd.third_point(0, 1), 3);
        assert_eq!(fwd.third_point(1, 2), 4);
        assert_eq!(fwd.third_point(0, 2), 6);
        assert!(fwd.is_line(3, 0, 1));
        assert!(!fwd.is_line(0, 1, 2));
        assert_eq!(fwd.automorphism(6), 0);
        // The point shift sends each ordered line to the next, up to rotation.
        for fano in [&fwd, &rev] {
            for n in 0..7 {
                let image: Vec<usize> =
                    fano.line(n).iter().map(|&p| fano.automorphism(p)).collect();
                let target = fano.line((n + 1) % 7);
                let rotated =
                    (0..3).any(|r| (0..3).all(|i| image[(i + r) % 3] == target[i]));
                assert!(rotated);
            }
        }
        // Cyclic successor checks on line 0, forward order (0, 1, 3).
        assert!(fwd.cyclic_follows(0, 0, 1));
        assert!(fwd.cyclic_follows(0, 1, 3));
        assert!(fwd.cyclic_follows(0, 3, 0));
        assert!(!fwd.cyclic_follows(0, 1, 0));
    }

    #[test]
    fn hsr_tables_propagate_seeds_and_satisfy_product_identities() {
        // Symbolic parameters give the exact generic tables.
        let (_, [a, b, g]) = symbolic();
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        assert_eq!(hsr.h(1), &a.neg());
        assert_eq!(hsr.h(6), &b.neg());
        assert_eq!(hsr.h(0), &g.neg());
        for n in [2, 3, 4, 5] {
            assert!(hsr.h(n).is_one());
        }
        let abg = hsr.abc();
        let expected_s = [
            a.clone(),
            b.clone(),
            g.clone(),
            a.mul(&b).neg(),
            b.mul(&g).neg(),
            abg.clone(),
            a.mul(&g).neg(),
        ];
        for (p, want) in expected_s.iter().enumerate() {
            assert_eq!(hsr.s(p), want, "point scalar at v{p}");
        }
        // r(v₀,v₁) = αβγ/(h(l₀)·s(v₃)) — and that quotient is 1.
        let l = fano.line_through(0, 1);
        let third = fano.third_point(0, 1);
        let want = abg.div(&hsr.h(l).mul(hsr.s(third))).unwrap();
        assert_eq!(hsr.r(0, 1), &want);
        assert!(hsr.r(0, 1).is_one());

        // At (−1, −1, −1) every decoration collapses.
        let d = q();
        let [a, b, g] = neg_ones(d);
        let (_, hsr) = build_fano(&a, &b, &g).unwrap();
        for p in 0..7 {
            assert_eq!(hsr.s(p), &c(d, -1));
        }
        for n in 0..7 {
            assert!(hsr.h(n).is_one());
        }
        for x in 0..7 {
            for y in 0..7 {
                if x != y {
                    assert!(hsr.r(x, y).is_one());
                }
            }
        }

        // Product identities at random parameters over Q and F₇.
        let mut rng = ChaCha8Rng::seed_from_u64(0xFA30);
        for d in [q(), fp(7)] {
            for _ in 0..6 {
                let a = random_nonzero(&mut rng, d);
                let b = random_nonzero(&mut rng, d);
                let g = random_nonzero(&mut rng, d);
                let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
                let abg = hsr.abc();
                let abg_sq = abg.mul(&abg);
                for n in 0..7 {
                    let pts = fano.line(n);
                    let prod = hsr.s(pts[0]).mul(hsr.s(pts[1])).mul(hsr.s(pts[2]));
                    let hh = hsr.h(n).mul(hsr.h(n));
                    assert_eq!(prod, abg_sq.div(&hh).unwrap().neg(), "line product");
                }
                for p in 0..7 {
                    let mut prod = FieldScalar::one(d);
                    for (n, line) in fano.lines().iter().enumerate() {
                        if line.contains(&p) {
                            prod = prod.mul(hsr.h(n));
                        }
                    }
                    assert_eq!(prod, abg.div(hsr.s(p)).unwrap(), "point product");
                }
                for x in 0..7 {
                    for y in x + 1..7 {
                        let z = fano.third_point(x, y);
                        let r = hsr.r(x, y);
                        let want = hsr.s(x).mul(hsr.s(y)).div(hsr.s(z)).unwrap().neg();
                        assert_eq!(r.mul(r), want, "pair square identity");
                        assert_eq!(hsr.r(x, y), hsr.r(y, x), "pair symmetry");
                    }
                }
            }
        }
    }

    #[test]
    fn fano_multiplication_agrees_with_doubled_algebra() {
        // Symbolic parameters, forward: worked basis products.
        let (d, [a, b, g]) = symbolic();
        let alg = fano_multiplication(&a, &b, &g).unwrap();
        assert_eq!(alg.basis_names()[1], "v0");
        let (_, hsr) = build_fano(&a, &b, &g).unwrap();
        let v0 = alg.basis_element(1);
        let v1 = alg.basis_element(2);
        let v3 = alg.basis_element(4);
        // v₀² = α·1.
        assert!(v0.mul(&v0).sub(&alg.scalar(&a)).is_zero());
        // v₀v₁ = r(v₀,v₁)·v₃ and v₁v₀ = −r(v₀,v₁)·v₃.
        let r01 = hsr.r(0, 1);
        assert!(v0.mul(&v1).sub(&v3.scale(r01)).is_zero());
        assert!(v1.mul(&v0).add(&v3.scale(r01)).is_zero());

        // At (−1,−1,−1) the identification is eₙ = vₙ, so the two structure
        // tables agree cell by cell.
        let dq = q();
        let [a1, b1, g1] = neg_ones(dq);
        let fano_alg = fano_multiplication(&a1, &b1, &g1).unwrap();
        let reference = make_general_cayley(dq, &a1, &b1, &g1).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(
                    fano_alg.table_entry(i, j),
                    reference.table_entry(i, j),
                    "table cell ({i}, {j})"
                );
            }
        }

        // The built-in isomorphism assertion passes in both orientations,
        // over numeric and symbolic fields.
        fano_multiplication_oriented(&a, &b, &g, Orientation::Reversed).unwrap();
        let d3 = fp(3);
        let [a3, b3, g3] = neg_ones(d3);
        fano_multiplication_oriented(&a3, &b3, &g3, Orientation::Reversed).unwrap();
        let d5 = fp(5);
        fano_multiplication_oriented(&c(d5, 1), &c(d5, 2), &c(d5, 1), Orientation::Forward)
            .unwrap();
        let _ = d;
    }

    #[test]
    fn line_wedges_respect_cyclic_order_and_scaling() {
        let (d, [a, b, g]) = symbolic();
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        let ws = line_wedges(&fano, &hsr);
        // w_{l₀} = −γ · v₀∧v₁∧v₃: one nonzero coordinate.
        let idx013 = triple_index(0, 1, 3);
        for (n, coord) in wedge_coords(&ws[0]).iter().enumerate() {
            if n == idx013 {
                assert_eq!(coord, &g.neg());
            } else {
                assert!(coord.is_zero());
            }
        }
        // A cyclic rotation of the order gives the same vector.
        let unit = |p: usize| -> Vec<FieldScalar> {
            let mut v = vec![FieldScalar::zero(d); 7];
            v[p] = FieldScalar::one(d);
            v
        };
        let rotated = wedge3(&unit(1), &unit(3), &unit(0)).scale(hsr.h(0));
        assert_eq!(ws[0], rotated);
        // Reversed orientation flips the wedge sign on each line.
        let (rev, hsr_rev) = build_fano_oriented(&a, &b, &g, Orientation::Reversed).unwrap();
        let ws_rev = line_wedges(&rev, &hsr_rev);
        assert_eq!(ws_rev[0], ws[0].neg());

        // At (−1,−1,−1), w_{l₂} is the plain unit wedge at (2, 3, 5).
        let dq = q();
        let [a1, b1, g1] = neg_ones(dq);
        let (fano1, hsr1) = build_fano(&a1, &b1, &g1).unwrap();
        let ws1 = line_wedges(&fano1, &hsr1);
        let idx235 = triple_index(2, 3, 5);
        for (n, coord) in wedge_coords(&ws1[2]).iter().enumerate() {
            if n == idx235 {
                assert!(coord.is_one());
            } else {
                assert!(coord.is_zero());
            }
        }
    }

    #[test]
    fn eta_values_follow_line_geometry() {
        let (_, [a, b, g]) = symbolic();
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        for v in 0..7 {
            let eta = eta_functional(&fano, &hsr, v);
            let mut nonzero = 0usize;
            for (n, &(i, j, k)) in wedge_triples().iter().enumerate() {
                let touches = v == i || v == j || v == k;
                let lined = fano.is_line(i, j, k)
                    || (!touches
                        && (fano.is_line(v, j, k)
                            || fano.is_line(i, v, k)
                            || fano.is_line(i, j, v)));
                if touches || lined {
                    assert!(eta[n].is_zero(), "η_v{v} must vanish at ({i},{j},{k})");
                    continue;
                }
                // Line-free 4-set: the value is ±h of the complement line.
                nonzero += 1;
                let rest: Vec<usize> = (0..7)
                    .filter(|p| *p != v && *p != i && *p != j && *p != k)
                    .collect();
                assert!(fano.is_line(rest[0], rest[1], rest[2]));
                let l = fano.line_through(rest[0], rest[1]);
                let h = hsr.h(l);
                assert_eq!(eta[n].mul(&eta[n]), h.mul(h), "η_v{v}(({i},{j},{k}))² = h²");
            }
            assert_eq!(nonzero, 4, "four line-free complements per point");
            // Every line wedge is annihilated.
            for w in line_wedges(&fano, &hsr) {
                assert!(functional_value(&eta, &w).is_zero());
            }
        }
    }

    #[test]
    fn eta_kernel_has_dimension_28_and_reports_cleanly() {
        let dq = q();
        let [a, b, g] = neg_ones(dq);
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        let kernel = kernel_eta(&fano, &hsr).unwrap();
        assert_eq!(kernel.dim(), 28);
        for w in line_wedges(&fano, &hsr) {
            assert!(kernel.contains(&wedge_coords(&w)).unwrap());
        }

        let d5 = fp(5);
        let (fano5, hsr5) = build_fano(&c(d5, 1), &c(d5, 2), &c(d5, 1)).unwrap();
        assert_eq!(kernel_eta(&fano5, &hsr5).unwrap().dim(), 28);

        // The serialized report carries the full functionals and kernel.
        let report = eta_report(&fano, &hsr).unwrap();
        assert_eq!(report.schema, 1);
        assert_eq!(report.orientation, "forward");
        assert_eq!(report.eta.len(), 7);
        assert!(report.eta.iter().all(|row| row.len() == 35));
        assert_eq!(report.kernel_dim, 28);
        assert_eq!(report.kernel_basis.len(), 28);
        assert!(report.kernel_basis.iter().all(|row| row.len() == 35));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"schema\":1"));
        assert!(json.contains("\"kernel_dim\":28"));
    }

    #[test]
    fn eta_kernel_equals_associator_kernel_everywhere() {
        let dq = q();
        let d3 = fp(3);
        let d5 = fp(5);
        let (dsym, [sa, sb, sg]) = symbolic();
        let cases: Vec<(FieldDescriptor, [FieldScalar; 3])> = vec![
            (dq, neg_ones(dq)),
            (d3, neg_ones(d3)),
            (d3, [c(d3, 1), c(d3, 1), c(d3, 1)]),
            (d3, [c(d3, 1), c(d3, 2), c(d3, 2)]),
            (d5, [c(d5, 1), c(d5, 2), c(d5, 1)]),
            (d5, neg_ones(d5)),
            (d5, [c(d5, 2), c(d5, 3), c(d5, 1)]),
            (dsym, [sa, sb, sg]),
        ];
        for (d, [a, b, g]) in cases {
            let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
            let alg = fano_multiplication(&a, &b, &g).unwrap();
            let eta_kernel = kernel_eta(&fano, &hsr).unwrap();
            let ass = ass_matrix(&alg).unwrap();
            let ass_kernel =
                Subspace::span(d, WEDGE_DIM, &ass.kernel().to_row_vecs()).unwrap();
            assert_eq!(ass_kernel.dim(), 28, "associator kernel dimension over {d}");
            assert_eq!(eta_kernel, ass_kernel, "kernel equality over {d}");
        }
    }

    #[test]
    fn associator_map_scales_point_wedges_uniformly() {
        let dq = q();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1A3B);
        let (dsym, [sa, sb, sg]) = symbolic();
        let mut cases: Vec<(FieldDescriptor, [FieldScalar; 3])> = vec![
            (dsym, [sa, sb, sg]),
            (dq, neg_ones(dq)),
        ];
        for _ in 0..2 {
            cases.push((
                dq,
                [
                    random_nonzero(&mut rng, dq),
                    random_nonzero(&mut rng, dq),
                    random_nonzero(&mut rng, dq),
                ],
            ));
        }
        for (_, [a, b, g]) in cases {
            for orientation in [Orientation::Forward, Orientation::Reversed] {
                let (fano, hsr) = build_fano_oriented(&a, &b, &g, orientation).unwrap();
                let alg = fano_multiplication_oriented(&a, &b, &g, orientation).unwrap();
                let ass = ass_matrix(&alg).unwrap();
                // Line wedges are annihilated.
                for w in line_wedges(&fano, &hsr) {
                    assert!(apply_to_wedge(&ass, &w).iter().all(|x| x.is_zero()));
                }
                // Each normalized complement maps to the same multiple of its
                // point: ∓2αβγ/s(v), sign by orientation.
                let two = FieldScalar::from_i64(hsr.field(), 2);
                let wvi = wvi_basis(&fano, &hsr).unwrap();
                for (v, four) in wvi.iter().enumerate() {
                    let magnitude = two.mul(&hsr.abc()).div(hsr.s(v)).unwrap();
                    let lambda = match orientation {
                        Orientation::Forward => magnitude.neg(),
                        Orientation::Reversed => magnitude,
                    };
                    for w in four {
                        let image = apply_to_wedge(&ass, w);
                        for (u, x) in image.iter().enumerate() {
                            if u == v {
                                assert_eq!(x, &lambda, "scale at point v{v}");
                            } else {
                                assert!(x.is_zero(), "image must lie on v{v}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_wedges_are_dual_to_the_functionals() {
        let (_, [a, b, g]) = symbolic();
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        let wvi = wvi_basis(&fano, &hsr).unwrap();
        assert_eq!(wvi.len(), 7);
        assert!(wvi.iter().all(|four| four.len() == 4));
        let etas: Vec<Vec<FieldScalar>> =
            (0..7).map(|v| eta_functional(&fano, &hsr, v)).collect();
        for (v, four) in wvi.iter().enumerate() {
            for w in four {
                for (u, eta) in etas.iter().enumerate() {
                    let value = functional_value(eta, w);
                    if u == v {
                        assert!(value.is_one(), "η_v{v} must be 1 on its own wedges");
                    } else {
                        assert!(value.is_zero(), "η_v{u} must vanish on wedges of v{v}");
                    }
                }
            }
        }
        // The 7 + 28 vectors span all of Λ³ (also asserted internally).
        let mut rows: Vec<Vec<FieldScalar>> = line_wedges(&fano, &hsr)
            .iter()
            .map(wedge_coords)
            .collect();
        for four in &wvi {
            for w in four {
                rows.push(wedge_coords(w));
            }
        }
        let span = Subspace::span(hsr.field(), WEDGE_DIM, &rows).unwrap();
        assert_eq!(span.dim(), WEDGE_DIM);
    }

    #[test]
    fn plucker_scan_matches_closure_blocks_at_q3() {
        let d3 = fp(3);
        let [a, b, g] = neg_ones(d3);
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        let alg = fano_multiplication(&a, &b, &g).unwrap();
        let geometric = blocks_via_plucker(&fano, &hsr, &alg).unwrap();
        assert_eq!(geometric.len(), 11011);

        // The closure route on the doubled algebra finds the same set.
        let reference = make_general_cayley(d3, &a, &b, &g).unwrap();
        let closed = design::enumerate_blocks(&reference).unwrap();
        assert_eq!(geometric, closed);

        // The span of a line's points is a block.
        let unit = |p: usize| -> Vec<FieldScalar> {
            let mut v = vec![FieldScalar::zero(d3); 7];
            v[p] = FieldScalar::one(d3);
            v
        };
        let line_block =
            Subspace::span(d3, 7, &[unit(0), unit(1), unit(3)]).unwrap();
        assert!(geometric.contains_key(&line_block.canonical_string()));

        // The reversed labeling produces the same block set.
        let (rev, hsr_rev) =
            build_fano_oriented(&a, &b, &g, Orientation::Reversed).unwrap();
        let alg_rev =
            fano_multiplication_oriented(&a, &b, &g, Orientation::Reversed).unwrap();
        let geometric_rev = blocks_via_plucker(&rev, &hsr_rev, &alg_rev).unwrap();
        assert_eq!(geometric_rev, geometric);
    }

    #[test]
    fn infinite_fields_are_rejected_for_the_scan() {
        let dq = q();
        let [a, b, g] = neg_ones(dq);
        let (fano, hsr) = build_fano(&a, &b, &g).unwrap();
        let alg = fano_multiplication(&a, &b, &g).unwrap();
        assert!(matches!(
            blocks_via_plucker(&fano, &hsr, &alg),
            Err(WedgeError::InfiniteField)
        ));
        // Zero parameters are rejected up front.
        let zero = FieldScalar::zero(dq);
        assert!(matches!(
            build_fano(&zero, &b, &g),
            Err(WedgeError::ZeroParameter)
        ));
    }
}
