//! Classification of 2-dimensional imaginary planes and of the subalgebras
//! they generate.
//!
//! A plane `U ⊆ im(O)` (given in the 7 imaginary coordinates) is typed by
//! its nilpotent lines — the projective roots of the binary quadratic
//!
//! ```text
//! (λu + μv)² = λ²·σ_u + λμ·2τ(uv) + μ²·σ_v      (σ_x = the scalar x²)
//! ```
//!
//! no roots → `Q`; exactly two → `M`; identically zero → `Z` when all
//! products inside `U` vanish, else `J`; exactly one → `U` when `uv ∈ F·u`
//! for `u` spanning the nilpotent line, else `Dn`/`Ds` according to whether
//! a complement's square is a square in the field.
//!
//! Over finite fields the quadratic is settled by scanning the `q + 1`
//! projective points. Over the rationals the discriminant and an exact
//! square root decide it. Over function fields square roots are
//! unavailable, so the discriminant is handled by sound certificates only:
//! decidable monomial cases, parity of the graded-lex leading/trailing
//! exponents of `num·den` (a square polynomial has both even with square
//! base coefficients), and evaluation probing (a square specializes to a
//! square at every point where the stored denominator survives — the
//! denominator of a square contains the square of the reduced denominator,
//! so surviving implies the reduced form is defined there too). When no
//! certificate fires the classification reports an honest error instead of
//! guessing.
//!
//! Subalgebras are generated by closing a span under products; their
//! Jacobson radical comes from the linear strongly-imaginary criterion
//! (`x ∈ J(H)` iff `τ(x·b) = 0` for all `b ∈ H`), which turns the radical
//! into one kernel computation; and 4-dimensional subalgebras fall into the
//! four types `M4` (simple, radical 0), `F2J2`/`S2J2` (radical 2, split by
//! the square class of a non-nilpotent imaginary vector), and `F1J3`
//! (radical 3).

use crate::algebra::{Algebra, AlgebraElement, AlgebraError};
use crate::field::{FieldDescriptor, FieldError, FieldScalar, SquareStatus};
use crate::linalg::{LinalgError, Matrix, Subspace};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

/// Errors from plane and subalgebra classification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    /// Input subspace of the wrong shape.
    #[error("bad input dimensions: {0}")]
    Dimension(String),
    /// The nilpotent-line count could not be decided over a function field:
    /// the discriminant resisted every sound squareness certificate.
    #[error("unresolved squareness over the function field: {0}")]
    UnresolvedSquare(String),
    /// Propagated algebra error.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// Propagated linear-algebra error.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Propagated field error.
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Type of a 2-dimensional plane in `im(O)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneType {
    /// No nilpotent lines: the generated subalgebra is a quaternion algebra.
    Q,
    /// One nilpotent line `F·u` with `uv ∈ F·u`: generates a 3-dimensional
    /// algebra with 1-dimensional radical.
    U,
    /// One nilpotent line, complement square a non-square.
    Dn,
    /// One nilpotent line, complement square a square.
    Ds,
    /// One nilpotent line, but the square class is undecidable (function
    /// fields only).
    DUnresolved,
    /// Two nilpotent lines: generates `Mat(2, F)` ⊕ complement, type M4.
    M,
    /// Every line nilpotent, some product nonzero.
    J,
    /// Every line nilpotent and all products vanish.
    Z,
}

impl PlaneType {
    /// Serialization tag (“Q”, “U”, “Dn”, “Ds”, “M”, “J”, “Z”; “D?” for the
    /// unresolved case).
    pub fn tag(&self) -> &'static str {
        match self {
            PlaneType::Q => "Q",
            PlaneType::U => "U",
            PlaneType::Dn => "Dn",
            PlaneType::Ds => "Ds",
            PlaneType::DUnresolved => "D?",
            PlaneType::M => "M",
            PlaneType::J => "J",
            PlaneType::Z => "Z",
        }
    }
}

impl fmt::Display for PlaneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How many projective roots the nilpotency quadratic has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpotentCount {
    /// No nilpotent lines.
    Zero,
    /// Exactly one (a double root).
    One,
    /// Exactly two distinct lines.
    Two,
    /// The quadratic vanishes identically: every line is nilpotent.
    All,
}

/// Result of [`nilpotent_lines`]: the count together with the lines
/// themselves (1-dimensional subspaces in imaginary coordinates). For
/// [`NilpotentCount::All`] the list is empty — every line of the plane
/// qualifies and no enumeration is attempted.
#[derive(Debug, Clone)]
pub struct NilpotentLines {
    /// Root count of the quadratic.
    pub count: NilpotentCount,
    /// The nilpotent lines found (empty for `All`).
    pub lines: Vec<Subspace>,
}

/// Type of a generated subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubalgebraKind {
    /// 4-dimensional with zero radical (simple; isomorphic to `Mat(2, F)`
    /// whenever the ambient Cayley algebra is split).
    M4,
    /// `F ⊕ F` plus a 2-dimensional radical, non-square case.
    F2J2,
    /// `F ⊕ F` plus a 2-dimensional radical, square case.
    S2J2,
    /// Radical 2 but the square class is undecidable (function fields).
    F2J2OrS2J2,
    /// `F·1` plus a 3-dimensional radical.
    F1J3,
    /// 3-dimensional with 1-dimensional radical (from a type-U plane).
    Dim3U,
    /// 3-dimensional with 2-dimensional radical (from a type-Z plane).
    Dim3Z,
    /// 2-dimensional.
    Dim2,
    /// The scalars alone.
    Dim1,
    /// Dimension 5 or more (never generated by an imaginary plane).
    Other(usize),
}

impl SubalgebraKind {
    /// Serialization tag.
    pub fn tag(&self) -> &'static str {
        match self {
            SubalgebraKind::M4 => "M4",
            SubalgebraKind::F2J2 => "F2J2",
            SubalgebraKind::S2J2 => "S2J2",
            SubalgebraKind::F2J2OrS2J2 => "F2J2-or-S2J2",
            SubalgebraKind::F1J3 => "F1J3",
            SubalgebraKind::Dim3U => "DIM3_U",
            SubalgebraKind::Dim3Z => "DIM3_Z",
            SubalgebraKind::Dim2 => "DIM2",
            SubalgebraKind::Dim1 => "DIM1",
            SubalgebraKind::Other(_) => "OTHER",
        }
    }
}

impl fmt::Display for SubalgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A subalgebra: its coordinate space (containing the 1-direction), its
/// Jacobson radical, and its classification.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    algebra: Algebra,
    space: Subspace,
    radical: Subspace,
    kind: SubalgebraKind,
}

impl Subalgebra {
    /// The ambient algebra.
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// The subalgebra as a subspace of the algebra's coordinate space.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// Dimension over the field.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The Jacobson radical as a subspace.
    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    /// The classification tag.
    pub fn kind(&self) -> SubalgebraKind {
        self.kind
    }

    /// Basis vectors as algebra elements.
    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        space_elements(&self.algebra, &self.space)
    }

    /// The imaginary part `im(H) = H ∩ im(O)` in the 7 imaginary
    /// coordinates. Each basis vector is projected along the 1-direction
    /// (`x ↦ x − τ(x)·1`, which stays inside `H` because `1 ∈ H`), so the
    /// result has dimension `dim(H) − 1`.
    pub fn imaginary_block(&self) -> Result<Subspace, ClassifyError> {
        let field = self.algebra.field();
        let mut rows = Vec::with_capacity(self.space.dim());
        for x in self.basis_elements() {
            let proj = x.sub(&self.algebra.scalar(&x.tau()));
            rows.push(proj.im_coords());
        }
        let block = Subspace::span(field, 7, &rows)?;
        debug_assert_eq!(block.dim() + 1, self.space.dim());
        Ok(block)
    }
}

// ---------------------------------------------------------------------------
// Plane classification
// ---------------------------------------------------------------------------

/// The scalar `σ` with `x² = σ·1`, for imaginary `x`.
fn scalar_square(x: &AlgebraElement) -> FieldScalar {
    let sq = x.mul(x);
    let tau = sq.tau();
    debug_assert!(sq.im_part().is_zero(), "imaginary squares are scalars");
    tau
}

fn check_plane(alg: &Algebra, u_space: &Subspace) -> Result<(), ClassifyError> {
    if alg.dim() != 8 {
        return Err(ClassifyError::Dimension(format!(
            "planes live in a dimension-8 algebra, got {}",
            alg.dim()
        )));
    }
    if u_space.ambient_dim() != 7 || u_space.dim() != 2 {
        return Err(ClassifyError::Dimension(format!(
            "expected a 2-dimensional subspace of the 7 imaginary coordinates, got {}×{}",
            u_space.dim(),
            u_space.ambient_dim()
        )));
    }
    Ok(())
}

/// The nilpotent lines of a plane `U ⊆ im(O)`: projective roots of
/// `(λu + μv)²`, as 1-dimensional subspaces in imaginary coordinates.
///
/// Over function fields an undecidable discriminant surfaces as
/// [`ClassifyError::UnresolvedSquare`] rather than a guessed count.
pub fn nilpotent_lines(
    alg: &Algebra,
    u_space: &Subspace,
) -> Result<NilpotentLines, ClassifyError> {
    check_plane(alg, u_space)?;
    let field = alg.field();
    let r0 = u_space.basis_row(0).to_vec();
    let r1 = u_space.basis_row(1).to_vec();
    let u = alg.from_im_coords(&r0)?;
    let v = alg.from_im_coords(&r1)?;

    // q(λ, μ) = Aλ² + Bλμ + Cμ².
    let a = scalar_square(&u);
    let c = scalar_square(&v);
    let tau_uv = u.mul(&v).tau();
    let b = tau_uv.add(&tau_uv);

    let line = |lambda: &FieldScalar, mu: &FieldScalar| -> Result<Subspace, ClassifyError> {
        let coords: Vec<FieldScalar> = r0
            .iter()
            .zip(&r1)
            .map(|(x, y)| lambda.mul(x).add(&mu.mul(y)))
            .collect();
        Ok(Subspace::span(field, 7, &[coords])?)
    };

    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(NilpotentLines {
            count: NilpotentCount::All,
            lines: Vec::new(),
        });
    }

    if field.is_finite() {
        // Scan the q + 1 projective points (1, 0) and (t, 1).
        let one = FieldScalar::one(field);
        let zero = FieldScalar::zero(field);
        let mut roots: Vec<(FieldScalar, FieldScalar)> = Vec::new();
        if a.is_zero() {
            roots.push((one.clone(), zero));
        }
        for t in crate::field::enumerate_field(field)? {
            // q(t, 1) = A t² + B t + C.
            let val = a.mul(&t).mul(&t).add(&b.mul(&t)).add(&c);
            if val.is_zero() {
                roots.push((t, one.clone()));
            }
        }
        let count = match roots.len() {
            0 => NilpotentCount::Zero,
            1 => NilpotentCount::One,
            2 => NilpotentCount::Two,
            n => unreachable!("a nonzero binary quadratic has at most 2 roots, found {n}"),
        };
        let lines = roots
            .iter()
            .map(|(l, m)| line(l, m))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(NilpotentLines { count, lines });
    }

    // Infinite fields: handle the degenerate shapes rationally, then the
    // discriminant.
    let one = FieldScalar::one(field);
    let zero = FieldScalar::zero(field);
    if a.is_zero() && c.is_zero() {
        // q = Bλμ with B ≠ 0: roots (1,0) and (0,1).
        return Ok(NilpotentLines {
            count: NilpotentCount::Two,
            lines: vec![line(&one, &zero)?, line(&zero, &one)?],
        });
    }
    if a.is_zero() {
        // q = μ(Bλ + Cμ): root (1,0), plus (−C, B) when B ≠ 0.
        if b.is_zero() {
            return Ok(NilpotentLines {
                count: NilpotentCount::One,
                lines: vec![line(&one, &zero)?],
            });
        }
        return Ok(NilpotentLines {
            count: NilpotentCount::Two,
            lines: vec![line(&one, &zero)?, line(&c.neg(), &b)?],
        });
    }
    if c.is_zero() {
        // q = λ(Aλ + Bμ): root (0,1), plus (−B, A) when B ≠ 0.
        if b.is_zero() {
            return Ok(NilpotentLines {
                count: NilpotentCount::One,
                lines: vec![line(&zero, &one)?],
            });
        }
        return Ok(NilpotentLines {
            count: NilpotentCount::Two,
            lines: vec![line(&zero, &one)?, line(&b.neg(), &a)?],
        });
    }

    // A, C ≠ 0: discriminant D = B² − 4AC; roots λ/μ = (−B ± √D) / 2A.
    let four = FieldScalar::from_i64(field, 4);
    let two_a = a.add(&a);
    let disc = b.mul(&b).sub(&four.mul(&a).mul(&c));
    if disc.is_zero() {
        return Ok(NilpotentLines {
            count: NilpotentCount::One,
            lines: vec![line(&b.neg(), &two_a)?],
        });
    }
    match disc.is_square() {
        SquareStatus::No => Ok(NilpotentLines {
            count: NilpotentCount::Zero,
            lines: Vec::new(),
        }),
        SquareStatus::Yes => {
            let s = disc.sqrt()?;
            Ok(NilpotentLines {
                count: NilpotentCount::Two,
                lines: vec![line(&s.sub(&b), &two_a)?, line(&s.neg().sub(&b), &two_a)?],
            })
        }
        SquareStatus::Unsupported => {
            if proven_nonsquare(&disc) {
                Ok(NilpotentLines {
                    count: NilpotentCount::Zero,
                    lines: Vec::new(),
                })
            } else {
                Err(ClassifyError::UnresolvedSquare(format!(
                    "discriminant {disc} of the nilpotency quadratic"
                )))
            }
        }
    }
}

/// Sound non-squareness certificates for a function-field scalar, used when
/// [`FieldScalar::is_square`] is undecided. Returns `true` only with a
/// proof; `false` means “no certificate found”, not “square”.
fn proven_nonsquare(x: &FieldScalar) -> bool {
    let f = x.function_parts().expect("only called on function fields");
    // x = P/Q is a square iff the polynomial P·Q is (clear denominators by
    // Q²). The graded-lex leading (resp. trailing) term of P·Q is the
    // product of the leading (trailing) terms of P and Q; for a square
    // polynomial both must have even exponents and a square coefficient.
    let num = f.numerator();
    let den = f.denominator();
    let ends = [
        (num.leading_term(), den.leading_term()),
        (num.trailing_term(), den.trailing_term()),
    ];
    for (n_term, d_term) in ends {
        let (ne, nc) = n_term.expect("nonzero by construction");
        let (de, dc) = d_term.expect("denominators are nonzero");
        let even = ne.iter().zip(de.iter()).all(|(p, q)| (p + q) % 2 == 0);
        if !even || nc.mul(dc).is_square() == SquareStatus::No {
            return true;
        }
    }
    // Evaluation probing: if x = E² then x(pt) = E(pt)² at every point where
    // the *stored* denominator is nonzero (den ⊇ the reduced denominator
    // squared, so den(pt) ≠ 0 forces E to be defined at pt). A defined value
    // that is a non-square in the base field is therefore a proof.
    let base = match x.descriptor() {
        FieldDescriptor::Function(b) => b.descriptor(),
        _ => unreachable!("function_parts succeeded"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C);
    for _ in 0..64 {
        let pt: [FieldScalar; 3] = std::array::from_fn(|_| match base.prime_modulus() {
            Some(p) => FieldScalar::from_i64(base, (rng.next_u64() % p) as i64),
            None => FieldScalar::from_i64(base, (rng.next_u64() % 17) as i64 - 8),
        });
        if let Ok(value) = x.eval_at(&pt) {
            if value.is_square() == SquareStatus::No {
                return true;
            }
        }
    }
    false
}

/// Classify a plane `U ⊆ im(O)` by its nilpotent lines.
pub fn classify_plane(alg: &Algebra, u_space: &Subspace) -> Result<PlaneType, ClassifyError> {
    let nil = nilpotent_lines(alg, u_space)?;
    let u = alg.from_im_coords(u_space.basis_row(0))?;
    let v = alg.from_im_coords(u_space.basis_row(1))?;
    match nil.count {
        NilpotentCount::Zero => Ok(PlaneType::Q),
        NilpotentCount::Two => Ok(PlaneType::M),
        NilpotentCount::All => {
            // Everything squares to zero, so uv = −vu and U·U = F·uv.
            if u.mul(&v).is_zero() {
                Ok(PlaneType::Z)
            } else {
                Ok(PlaneType::J)
            }
        }
        NilpotentCount::One => {
            let l = &nil.lines[0];
            let u_nil = alg.from_im_coords(l.basis_row(0))?;
            // A complement: a basis row of U off the nilpotent line.
            let w = if l.contains(u_space.basis_row(0))? { &v } else { &u };
            let prod = u_nil.mul(w);
            let in_line = prod.tau().is_zero() && l.contains(&prod.im_coords())?;
            if in_line {
                return Ok(PlaneType::U);
            }
            match scalar_square(w).is_square() {
                SquareStatus::Yes => Ok(PlaneType::Ds),
                SquareStatus::No => Ok(PlaneType::Dn),
                SquareStatus::Unsupported => Ok(PlaneType::DUnresolved),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Subalgebra generation and classification
// ---------------------------------------------------------------------------

/// Basis vectors of a coordinate subspace as algebra elements.
fn space_elements(alg: &Algebra, space: &Subspace) -> Vec<AlgebraElement> {
    (0..space.dim())
        .map(|i| {
            alg.from_coeffs(space.basis_row(i).to_vec())
                .expect("subspace rows are valid coefficient vectors")
        })
        .collect()
}

/// Generate the unital subalgebra ⟨S⟩: close `span(1 ∪ S)` under products.
/// The radical and classification are computed on the result.
pub fn generate_subalgebra(elements: &[AlgebraElement]) -> Result<Subalgebra, ClassifyError> {
    assert!(!elements.is_empty(), "need at least one generator");
    let alg = elements[0].algebra().clone();
    let field = alg.field();
    let dim = alg.dim();
    let mut rows: Vec<Vec<FieldScalar>> = vec![alg.one().coeffs().to_vec()];
    for e in elements {
        assert!(
            e.algebra() == &alg,
            "generators must come from a single algebra"
        );
        rows.push(e.coeffs().to_vec());
    }
    let mut space = Subspace::span(field, dim, &rows)?;
    // Each round either grows the dimension or stabilizes; the ambient
    // dimension is at most 8, so more than 8 rounds means a bug.
    let mut rounds = 0usize;
    loop {
        let basis = space_elements(&alg, &space);
        let mut rows: Vec<Vec<FieldScalar>> =
            (0..space.dim()).map(|i| space.basis_row(i).to_vec()).collect();
        for x in &basis {
            for y in &basis {
                rows.push(x.mul(y).coeffs().to_vec());
            }
        }
        let closed = Subspace::span(field, dim, &rows)?;
        if closed.dim() == space.dim() {
            break;
        }
        space = closed;
        rounds += 1;
        assert!(rounds <= 8, "closure failed to stabilize within 8 rounds");
    }
    let radical = jacobson_radical(&alg, &space)?;
    let kind = classify_subalgebra(&alg, &space, &radical)?;
    Ok(Subalgebra {
        algebra: alg,
        space,
        radical,
        kind,
    })
}

/// The subalgebra generated by a plane in imaginary coordinates.
pub fn subalgebra_of_plane(
    alg: &Algebra,
    u_space: &Subspace,
) -> Result<Subalgebra, ClassifyError> {
    check_plane(alg, u_space)?;
    let u = alg.from_im_coords(u_space.basis_row(0))?;
    let v = alg.from_im_coords(u_space.basis_row(1))?;
    generate_subalgebra(&[u, v])
}

/// The Jacobson radical of a multiplication-closed subspace `H`, by the
/// strongly-imaginary criterion: `J(H) = {x ∈ H : τ(x·b) = 0 ∀ b ∈ H}`,
/// one linear solve on the trace form's Gram matrix.
pub fn jacobson_radical(alg: &Algebra, space: &Subspace) -> Result<Subspace, ClassifyError> {
    let field = alg.field();
    let h = space.dim();
    let basis = space_elements(alg, space);
    // gram[i][j] = τ(c_j · c_i): kernel rows y then satisfy
    // Σ_j τ(c_j · c_i) y_j = 0 for all i.
    let mut gram_rows = Vec::with_capacity(h);
    for i in 0..h {
        let mut row = Vec::with_capacity(h);
        for j in 0..h {
            row.push(basis[j].mul(&basis[i]).tau());
        }
        gram_rows.push(row);
    }
    let gram = Matrix::from_rows(field, &gram_rows)?;
    let kernel = gram.kernel();
    let mut rad_rows = Vec::with_capacity(kernel.rows());
    for i in 0..kernel.rows() {
        let y = kernel.row(i);
        let coords = space.basis().mul_vec_left(y)?;
        rad_rows.push(coords);
    }
    Ok(Subspace::span(field, space.ambient_dim(), &rad_rows)?)
}

/// Classify a multiplication-closed subspace by dimension and radical.
///
/// Dimension 4 is the main case (`M4`/`F2J2`/`S2J2`/`F1J3`); dimension 3
/// dispatches on the radical (`Dim3U`/`Dim3Z`); dimensions 1 and 2 get their
/// own tags; dimension ≥ 5 is [`SubalgebraKind::Other`]. The `F2J2`/`S2J2`
/// split tests the square class of the first RREF basis vector of `im(H)`
/// with nonzero square; when that is undecidable (function fields) the
/// joint tag [`SubalgebraKind::F2J2OrS2J2`] is returned.
pub fn classify_subalgebra(
    alg: &Algebra,
    space: &Subspace,
    radical: &Subspace,
) -> Result<SubalgebraKind, ClassifyError> {
    match space.dim() {
        1 => Ok(SubalgebraKind::Dim1),
        2 => Ok(SubalgebraKind::Dim2),
        3 => match radical.dim() {
            1 => Ok(SubalgebraKind::Dim3U),
            2 => Ok(SubalgebraKind::Dim3Z),
            r => unreachable!(
                "a 3-dimensional subalgebra has radical 1 or 2 (every element \
                 is quadratic over F, which rules out étale rank 3), got {r}"
            ),
        },
        4 => match radical.dim() {
            0 => Ok(SubalgebraKind::M4),
            3 => Ok(SubalgebraKind::F1J3),
            2 => {
                let im_h = imaginary_part_of(alg, space)?;
                for i in 0..im_h.dim() {
                    let v = alg.from_coeffs(im_h.basis_row(i).to_vec())?;
                    let sq = scalar_square(&v);
                    if sq.is_zero() {
                        continue;
                    }
                    return Ok(match sq.is_square() {
                        SquareStatus::Yes => SubalgebraKind::S2J2,
                        SquareStatus::No => SubalgebraKind::F2J2,
                        SquareStatus::Unsupported => SubalgebraKind::F2J2OrS2J2,
                    });
                }
                unreachable!("radical dimension 2 leaves a non-nilpotent imaginary vector")
            }
            r => unreachable!("no 4-dimensional subalgebra has radical dimension {r}"),
        },
        d => Ok(SubalgebraKind::Other(d)),
    }
}

/// The trace-free part `im(H) = {x ∈ H : τ(x) = 0}` of a subspace, in the
/// algebra's coordinate space.
fn imaginary_part_of(alg: &Algebra, space: &Subspace) -> Result<Subspace, ClassifyError> {
    let field = alg.field();
    let basis = space_elements(alg, space);
    let traces: Vec<FieldScalar> = basis.iter().map(|b| b.tau()).collect();
    let t = Matrix::from_rows(field, &[traces])?;
    let kernel = t.kernel();
    let mut rows = Vec::with_capacity(kernel.rows());
    for i in 0..kernel.rows() {
        let coords = space.basis().mul_vec_left(kernel.row(i))?;
        rows.push(coords);
    }
    Ok(Subspace::span(field, space.ambient_dim(), &rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_general_cayley, make_split_cayley};
    use crate::linalg::enumerate_subspaces;
    use std::collections::HashMap;

    fn f3() -> FieldDescriptor {
        FieldDescriptor::prime(3).unwrap()
    }

    fn sc(d: FieldDescriptor, t: &str) -> FieldScalar {
        FieldScalar::parse(d, t).unwrap()
    }

    /// Imaginary coordinate vector with the given (slot, value) entries.
    fn im_vec(d: FieldDescriptor, entries: &[(usize, i64)]) -> Vec<FieldScalar> {
        let mut v = vec![FieldScalar::zero(d); 7];
        for (k, val) in entries {
            v[*k] = FieldScalar::from_i64(d, *val);
        }
        v
    }

    /// Plane spanned by two imaginary coordinate vectors.
    fn plane(d: FieldDescriptor, a: &[(usize, i64)], b: &[(usize, i64)]) -> Subspace {
        Subspace::span(d, 7, &[im_vec(d, a), im_vec(d, b)]).unwrap()
    }

    // Imaginary coordinate slots for the split basis:
    // 0 = p₁−p₂, 1..=3 = q₁,q₂,q₃, 4..=6 = r₁,r₂,r₃.
    const M0: usize = 0;
    const Q1: usize = 1;
    const Q2: usize = 2;
    const R1: usize = 4;
    const R2: usize = 5;

    #[test]
    fn nilpotent_line_examples() {
        let alg = make_split_cayley(f3());
        let d = f3();
        // span(q₁, r₂): every line nilpotent.
        let nil = nilpotent_lines(&alg, &plane(d, &[(Q1, 1)], &[(R2, 1)])).unwrap();
        assert_eq!(nil.count, NilpotentCount::All);
        assert!(nil.lines.is_empty());
        // span(p₁−p₂, q₁): exactly the line F·q₁.
        let nil = nilpotent_lines(&alg, &plane(d, &[(M0, 1)], &[(Q1, 1)])).unwrap();
        assert_eq!(nil.count, NilpotentCount::One);
        let expected = Subspace::span(d, 7, &[im_vec(d, &[(Q1, 1)])]).unwrap();
        assert_eq!(nil.lines, vec![expected]);
        // Division algebra over Q: no nilpotents in span(e₀, e₁).
        let dq = FieldDescriptor::rational();
        let m1 = FieldScalar::from_i64(dq, -1);
        let oct = make_general_cayley(dq, &m1, &m1, &m1).unwrap();
        let nil = nilpotent_lines(&oct, &plane(dq, &[(0, 1)], &[(1, 1)])).unwrap();
        assert_eq!(nil.count, NilpotentCount::Zero);
        // Two lines over Q: span(q₁, r₁)-analogue via the rational branch.
        let split_q = make_split_cayley(dq);
        let nil = nilpotent_lines(&split_q, &plane(dq, &[(Q1, 1)], &[(R1, 1)])).unwrap();
        assert_eq!(nil.count, NilpotentCount::Two);
        assert_eq!(nil.lines.len(), 2);
        for l in &nil.lines {
            let x = split_q.from_im_coords(l.basis_row(0)).unwrap();
            assert!(x.is_nilpotent());
        }
    }

    #[test]
    fn plane_type_examples() {
        let d = f3();
        let alg = make_split_cayley(d);
        // u = q₁, v = q₂ − r₂: one nilpotent line, v² = 1 square → Ds.
        let u = plane(d, &[(Q1, 1)], &[(Q2, 1), (R2, -1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::Ds);
        // span(q₁, q₂): all lines nilpotent, q₁q₂ = r₃ ≠ 0 → J.
        let u = plane(d, &[(Q1, 1)], &[(Q2, 1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::J);
        // span(q₁, r₂): products vanish → Z.
        let u = plane(d, &[(Q1, 1)], &[(R2, 1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::Z);
        // span(q₁, r₁): two nilpotent lines → M.
        let u = plane(d, &[(Q1, 1)], &[(R1, 1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::M);
        // span(p₁−p₂, q₁): type U.
        let u = plane(d, &[(M0, 1)], &[(Q1, 1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::U);
        // span(p₁−p₂, q₁−r₁): λ² + μ² is irreducible mod 3 → Q.
        let u = plane(d, &[(M0, 1)], &[(Q1, 1), (R1, -1)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::Q);
        // u = q₁, v = q₂ − 2r₂: v² = 2 is a non-square mod 3 → Dn.
        let u = plane(d, &[(Q1, 1)], &[(Q2, 1), (R2, -2)]);
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::Dn);
    }

    #[test]
    fn function_field_planes_resolve_by_certificates() {
        // Generic parameters: D = −4ab is a decidable non-square monomial.
        let d = FieldDescriptor::function_over_prime(5).unwrap();
        let alg = make_general_cayley(d, &sc(d, "a"), &sc(d, "b"), &sc(d, "c")).unwrap();
        let u = plane(d, &[(0, 1)], &[(1, 1)]); // span(e₀, e₁)
        assert_eq!(classify_plane(&alg, &u).unwrap(), PlaneType::Q);
        let sub = subalgebra_of_plane(&alg, &u).unwrap();
        assert_eq!(sub.dim(), 4);
        assert_eq!(sub.kind(), SubalgebraKind::M4);

        // α = (a+b)², β = a²+ab+b²: the discriminant −4αβ has even leading
        // and trailing exponents with square coefficients, so only the
        // evaluation probe can refute squareness (a=b=1 gives 2·(2)², and 2
        // is a non-square mod 5).
        let alpha = sc(d, "(a + b)^2");
        let beta = sc(d, "a^2 + a*b + b^2");
        let alg2 = make_general_cayley(d, &alpha, &beta, &sc(d, "c")).unwrap();
        let u = plane(d, &[(0, 1)], &[(1, 1)]);
        assert_eq!(classify_plane(&alg2, &u).unwrap(), PlaneType::Q);

        // α = a, β = −a: the discriminant 4a² is a decidable monomial square,
        // so the two nilpotent lines (e₀ ± e₁) come out exactly.
        let alg3 = make_general_cayley(d, &sc(d, "a"), &sc(d, "-a"), &sc(d, "c")).unwrap();
        let u = plane(d, &[(0, 1)], &[(1, 1)]);
        let nil = nilpotent_lines(&alg3, &u).unwrap();
        assert_eq!(nil.count, NilpotentCount::Two);
        for l in &nil.lines {
            let x = alg3.from_im_coords(l.basis_row(0)).unwrap();
            assert!(x.is_nilpotent());
        }
        assert_eq!(classify_plane(&alg3, &u).unwrap(), PlaneType::M);

        // α = a + b, β = −(a + b): the discriminant 4(a+b)² genuinely is a
        // square but is not a monomial, every refutation certificate fails
        // (probes only ever see squares), and the count surfaces as an
        // honest error.
        let ab = sc(d, "a + b");
        let alg4 = make_general_cayley(d, &ab, &ab.neg(), &sc(d, "c")).unwrap();
        let u = plane(d, &[(0, 1)], &[(1, 1)]);
        match nilpotent_lines(&alg4, &u) {
            Err(ClassifyError::UnresolvedSquare(_)) => {}
            other => panic!("expected UnresolvedSquare, got {other:?}"),
        }
        assert!(matches!(
            classify_plane(&alg4, &u),
            Err(ClassifyError::UnresolvedSquare(_))
        ));
    }

    #[test]
    fn subalgebra_generation_examples() {
        let d = f3();
        let dq = FieldDescriptor::rational();
        let m1 = FieldScalar::from_i64(dq, -1);
        let oct = make_general_cayley(dq, &m1, &m1, &m1).unwrap();
        // ⟨e₀, e₁⟩ = span(1, e₀, e₁, e₃).
        let sub = generate_subalgebra(&[oct.basis_element(1), oct.basis_element(2)]).unwrap();
        assert_eq!(sub.dim(), 4);
        let expected = Subspace::span(
            dq,
            8,
            &[
                oct.basis_element(0).coeffs().to_vec(),
                oct.basis_element(1).coeffs().to_vec(),
                oct.basis_element(2).coeffs().to_vec(),
                oct.basis_element(4).coeffs().to_vec(),
            ],
        )
        .unwrap();
        assert_eq!(sub.space(), &expected);
        // Over Q with α = β = −1 this quaternion algebra is division, but
        // the M4 tag only records “4-dimensional with zero radical”.
        assert_eq!(sub.kind(), SubalgebraKind::M4);

        let alg = make_split_cayley(d);
        // ⟨q₁, p₁−p₂⟩ = span(p₁, p₂, q₁), dimension 3.
        let m0 = alg.basis_element(0).sub(&alg.basis_element(1));
        let sub = generate_subalgebra(&[alg.basis_element(2), m0]).unwrap();
        assert_eq!(sub.dim(), 3);
        let expected = Subspace::span(
            d,
            8,
            &[
                alg.basis_element(0).coeffs().to_vec(),
                alg.basis_element(1).coeffs().to_vec(),
                alg.basis_element(2).coeffs().to_vec(),
            ],
        )
        .unwrap();
        assert_eq!(sub.space(), &expected);
        assert_eq!(sub.kind(), SubalgebraKind::Dim3U);
        // ⟨q₁, r₂⟩ = span(1, q₁, r₂), dimension 3 with 2-dim radical.
        let sub = generate_subalgebra(&[alg.basis_element(2), alg.basis_element(6)]).unwrap();
        assert_eq!(sub.dim(), 3);
        assert_eq!(sub.kind(), SubalgebraKind::Dim3Z);
        assert_eq!(sub.radical().dim(), 2);
        // The subalgebra always contains 1.
        assert!(sub.space().contains(alg.one().coeffs()).unwrap());
    }

    #[test]
    fn jacobson_radical_examples() {
        let d = f3();
        let alg = make_split_cayley(d);
        let b = |k: usize| alg.basis_element(k);
        // ⟨q₁, r₁⟩ is simple: radical 0.
        let sub = generate_subalgebra(&[b(2), b(5)]).unwrap();
        assert_eq!(sub.radical().dim(), 0);
        assert_eq!(sub.kind(), SubalgebraKind::M4);
        // ⟨q₁, q₂⟩: radical = span(q₁, q₂, r₃), dimension 3.
        let sub = generate_subalgebra(&[b(2), b(3)]).unwrap();
        assert_eq!(sub.radical().dim(), 3);
        let expected = Subspace::span(
            d,
            8,
            &[
                b(2).coeffs().to_vec(),
                b(3).coeffs().to_vec(),
                b(7).coeffs().to_vec(),
            ],
        )
        .unwrap();
        assert_eq!(sub.radical(), &expected);
        assert_eq!(sub.kind(), SubalgebraKind::F1J3);
        // ⟨q₁, q₂ − r₂⟩: radical dimension 2.
        let sub = generate_subalgebra(&[b(2), b(3).sub(&b(6))]).unwrap();
        assert_eq!(sub.radical().dim(), 2);
        assert_eq!(sub.kind(), SubalgebraKind::S2J2);
        // ⟨q₁, q₂ − 2r₂⟩ over F₃: complement square 2, non-square → F2J2.
        let two = FieldScalar::from_i64(d, 2);
        let sub = generate_subalgebra(&[b(2), b(3).sub(&b(6).scale(&two))]).unwrap();
        assert_eq!(sub.kind(), SubalgebraKind::F2J2);
    }

    /// Exhaustive plane-type ↔ subalgebra-type dictionary at q = 3, plus the
    /// structural invariants: 4-dimensional subalgebras associate, radicals
    /// are two-sided ideals in the imaginary hyperplane, and type-M planes
    /// produce matrix-unit pairs.
    fn dictionary_census(alg: &Algebra) -> HashMap<&'static str, usize> {
        let field = alg.field();
        let mut counts: HashMap<&'static str, usize> = HashMap::new();
        for u_space in enumerate_subspaces(7, 2, field).unwrap() {
            let t = classify_plane(alg, &u_space).unwrap();
            *counts.entry(t.tag()).or_insert(0) += 1;
            let sub = subalgebra_of_plane(alg, &u_space).unwrap();
            match t {
                PlaneType::Q | PlaneType::M => {
                    assert_eq!(sub.kind(), SubalgebraKind::M4);
                    assert_eq!(sub.dim(), 4);
                }
                PlaneType::J => {
                    assert_eq!(sub.kind(), SubalgebraKind::F1J3);
                    assert_eq!(sub.dim(), 4);
                }
                PlaneType::Dn => assert_eq!(sub.kind(), SubalgebraKind::F2J2),
                PlaneType::Ds => assert_eq!(sub.kind(), SubalgebraKind::S2J2),
                PlaneType::U => {
                    assert_eq!(sub.dim(), 3);
                    assert_eq!(sub.radical().dim(), 1);
                }
                PlaneType::Z => {
                    assert_eq!(sub.dim(), 3);
                    assert_eq!(sub.radical().dim(), 2);
                }
                PlaneType::DUnresolved => {
                    panic!("D planes must resolve over finite fields")
                }
            }
            let basis = sub.basis_elements();
            // The subalgebra contains 1 and is closed under multiplication.
            assert!(sub.space().contains(alg.one().coeffs()).unwrap());
            // 4-dimensional subalgebras associate (alternating ⇒ checking
            // strictly increasing basis triples suffices).
            if sub.dim() == 4 {
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        for k in (j + 1)..4 {
                            assert!(basis[i].associator(&basis[j], &basis[k]).is_zero());
                        }
                    }
                }
            }
            // The radical is a two-sided ideal inside the imaginary part.
            let rad = sub.radical();
            for r in 0..rad.dim() {
                let j = alg.from_coeffs(rad.basis_row(r).to_vec()).unwrap();
                assert!(j.tau().is_zero(), "radical elements are imaginary");
                for x in &basis {
                    assert!(rad.contains(x.mul(&j).coeffs()).unwrap());
                    assert!(rad.contains(j.mul(x).coeffs()).unwrap());
                }
            }
            // Type-M planes contain a matrix-unit pair.
            if t == PlaneType::M {
                let nil = nilpotent_lines(alg, &u_space).unwrap();
                let q = alg.from_im_coords(nil.lines[0].basis_row(0)).unwrap();
                let r0 = alg.from_im_coords(nil.lines[1].basis_row(0)).unwrap();
                let c = q.mul(&r0).tau().add(&q.mul(&r0).tau());
                let r = r0.scale(&c.inv().unwrap());
                assert!(q.mul(&q).is_zero());
                assert!(r.mul(&r).is_zero());
                assert_eq!(q.mul(&r).add(&r.mul(&q)), alg.one());
                assert_eq!(q.mul(&r).mul(&q), q);
                assert_eq!(r.mul(&q).mul(&r), r);
            }
        }
        counts
    }

    #[test]
    fn dictionary_exhaustive_q3() {
        let d = f3();
        let split = make_split_cayley(d);
        let m1 = FieldScalar::from_i64(d, -1);
        let general = make_general_cayley(d, &m1, &m1, &m1).unwrap();
        let split_counts = dictionary_census(&split);
        let general_counts = dictionary_census(&general);
        // Both presentations are the split Cayley algebra over F₃ (the norm
        // form is isotropic), so the censuses must agree exactly.
        assert_eq!(split_counts, general_counts);
        let expected: HashMap<&'static str, usize> = [
            ("Q", 22113),
            ("U", 3276),
            ("Dn", 13104),
            ("Ds", 13104),
            ("M", 44226),
            ("J", 3276),
            ("Z", 364),
        ]
        .into_iter()
        .collect();
        assert_eq!(split_counts, expected);
        let total: usize = split_counts.values().sum();
        assert_eq!(total, 99463, "(7 choose 2)_3 planes");
        eprintln!("plane census at q=3: {split_counts:?}");
    }

    #[test]
    fn no_totally_null_4_space_at_q3() {
        // Scan all 4-dimensional subspaces of im(O) over F₃ for one with all
        // pairwise products zero; none exists.
        let d = f3();
        let alg = make_split_cayley(d);
        let mut checked = 0usize;
        'outer: for s in enumerate_subspaces(7, 4, d).unwrap() {
            checked += 1;
            let elems: Vec<AlgebraElement> = (0..4)
                .map(|i| alg.from_im_coords(s.basis_row(i)).unwrap())
                .collect();
            for x in &elems {
                for y in &elems {
                    if !x.mul(y).is_zero() {
                        continue 'outer;
                    }
                }
            }
            panic!("totally null 4-space found: {}", s.canonical_string());
        }
        assert_eq!(checked, 925_771, "(7 choose 4)_3 = (7 choose 3)_3");
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let d = f3();
        let alg = make_split_cayley(d);
        let line = Subspace::span(d, 7, &[im_vec(d, &[(Q1, 1)])]).unwrap();
        assert!(matches!(
            nilpotent_lines(&alg, &line),
            Err(ClassifyError::Dimension(_))
        ));
        let wrong_ambient = Subspace::span(
            d,
            8,
            &[vec![FieldScalar::one(d); 8], {
                let mut v = vec![FieldScalar::zero(d); 8];
                v[1] = FieldScalar::one(d);
                v
            }],
        )
        .unwrap();
        assert!(matches!(
            classify_plane(&alg, &wrong_ambient),
            Err(ClassifyError::Dimension(_))
        ));
    }
}
