//! Block-set construction and audit over finite fields.
//!
//! The block set `B` consists of the imaginary parts `im(H)` of all
//! 4-dimensional associative subalgebras `H` — 3-dimensional subspaces of
//! the 7-dimensional imaginary space. Two independent routes produce it:
//!
//! * [`enumerate_blocks`] classifies every plane and closes the planes of
//!   types Q/Dn/Ds/M/J (every block contains one, so this reaches all of
//!   `B`);
//! * [`enumerate_blocks_bruteforce`] scans all 3-dimensional subspaces of
//!   the imaginary space and keeps those whose basis triple has a vanishing
//!   associator (alternating trilinearity makes one basis triple decisive,
//!   and such a subspace plus the scalars is automatically
//!   multiplication-closed).
//!
//! [`coverage_audit`] verifies that every plane lies in at least one block
//! (a (7,3,2) q-covering design), that the cover is inclusion-minimal, and
//! whether it is perfect (the q-Fano property — never over a finite field).
//! [`counting_tables`] reproduces the full census: plane counts by type,
//! block counts by type, the per-plane block-incidence table H and the
//! per-block plane census T, the double-counting identity
//! `Θ_X · H[X,Y] = T[X,Y] · N_Y`, nilpotent-element and special-pair
//! counts. [`sample_division_check`] probes conjectured division algebras
//! over infinite fields with random planes, and
//! [`check_norm_zero_solutions`] scans for isotropic vectors of the norm
//! form.

use crate::algebra::{Algebra, AlgebraElement, AlgebraError};
use crate::classify::{
    classify_plane, subalgebra_of_plane, ClassifyError, NilpotentCount, PlaneType, SubalgebraKind,
};
use crate::field::{enumerate_field, FieldError, FieldScalar};
use crate::linalg::{
    enumerate_subspaces, gaussian_binomial, pivot_patterns, subspaces_with_pivots, LinalgError,
    Subspace,
};
use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Errors from block enumeration and audits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    /// Exhaustive enumeration requires a finite field.
    #[error("exhaustive enumeration requires a finite field")]
    InfiniteField,
    /// Some plane is contained in no block — impossible for the true block
    /// set, so this signals a corrupted or truncated input set.
    #[error("covering gap: {0}")]
    CoverageGap(String),
    /// A sampled plane falsified the division hypothesis (a nilpotent line
    /// or a closure of the wrong shape).
    #[error("division hypothesis violated: {0}")]
    DivisionViolation(String),
    /// Propagated classification error.
    #[error(transparent)]
    Classify(#[from] ClassifyError),
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

/// Report row order for plane types.
pub const PLANE_ORDER: [PlaneType; 7] = [
    PlaneType::Q,
    PlaneType::U,
    PlaneType::Dn,
    PlaneType::Ds,
    PlaneType::M,
    PlaneType::J,
    PlaneType::Z,
];

/// Report column order for block (4-dimensional subalgebra) types.
pub const BLOCK_ORDER: [SubalgebraKind; 4] = [
    SubalgebraKind::M4,
    SubalgebraKind::F2J2,
    SubalgebraKind::S2J2,
    SubalgebraKind::F1J3,
];

fn plane_idx(t: PlaneType) -> usize {
    match t {
        PlaneType::Q => 0,
        PlaneType::U => 1,
        PlaneType::Dn => 2,
        PlaneType::Ds => 3,
        PlaneType::M => 4,
        PlaneType::J => 5,
        PlaneType::Z => 6,
        PlaneType::DUnresolved => unreachable!("finite fields resolve every D plane"),
    }
}

fn block_idx(k: SubalgebraKind) -> usize {
    match k {
        SubalgebraKind::M4 => 0,
        SubalgebraKind::F2J2 => 1,
        SubalgebraKind::S2J2 => 2,
        SubalgebraKind::F1J3 => 3,
        other => unreachable!("a 4-dimensional subalgebra cannot be tagged {other}"),
    }
}

/// A deduplicated block set, keyed by the blocks' canonical basis strings
/// (so iteration order and set comparison are deterministic).
pub type BlockSet = BTreeMap<String, Subspace>;

/// Coverage audit results: the multiplicity histogram plus the minimality
/// and perfection flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageAudit {
    /// multiplicity → number of planes contained in exactly that many blocks.
    pub histogram: BTreeMap<u64, u64>,
    /// Every block contains a multiplicity-1 plane, so no proper
    /// subcollection still covers.
    pub minimal: bool,
    /// Every plane lies in exactly one block (the q-Fano property).
    pub fano: bool,
}

/// The full finite-field census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    /// Field size.
    pub q: u64,
    /// Plane counts by type tag.
    pub theta: BTreeMap<String, u64>,
    /// Block counts by type tag.
    pub n_blocks: BTreeMap<String, u64>,
    /// `h_table[X][Y]`: number of blocks of type Y containing a fixed plane
    /// of type X (independent of the representative; verified).
    pub h_table: BTreeMap<String, BTreeMap<String, u64>>,
    /// `t_table[X][Y]`: number of planes of type X inside a fixed block of
    /// type Y (independent of the representative; verified).
    pub t_table: BTreeMap<String, BTreeMap<String, u64>>,
    /// Plane-coverage multiplicity histogram.
    pub cover_histogram: BTreeMap<u64, u64>,
    /// Inclusion-minimality of the cover.
    pub minimal: bool,
    /// Whether the cover is a q-Fano plane (false over finite fields).
    pub fano: bool,
    /// Nonzero nilpotent elements in the imaginary space.
    pub nilpotent_count: u64,
    /// Ordered pairs (e₊, e₋) of imaginary elements with e₊² = 1,
    /// e₋² = −1 and τ(e₊e₋) = 0.
    pub special_pairs: u64,
}

impl DesignReport {
    /// Plane count for one type.
    pub fn theta_of(&self, t: PlaneType) -> u64 {
        self.theta.get(t.tag()).copied().unwrap_or(0)
    }

    /// Block count for one type.
    pub fn blocks_of(&self, k: SubalgebraKind) -> u64 {
        self.n_blocks.get(k.tag()).copied().unwrap_or(0)
    }

    /// H-table entry.
    pub fn h(&self, x: PlaneType, y: SubalgebraKind) -> u64 {
        self.h_table
            .get(x.tag())
            .and_then(|row| row.get(y.tag()))
            .copied()
            .unwrap_or(0)
    }

    /// T-table entry.
    pub fn t(&self, x: PlaneType, y: SubalgebraKind) -> u64 {
        self.t_table
            .get(x.tag())
            .and_then(|row| row.get(y.tag()))
            .copied()
            .unwrap_or(0)
    }

    /// Total number of planes.
    pub fn total_planes(&self) -> u64 {
        self.theta.values().sum()
    }

    /// Total number of blocks.
    pub fn total_blocks(&self) -> u64 {
        self.n_blocks.values().sum()
    }

    /// The four census tables as `(file name, CSV contents)` pairs, rows in
    /// [`PLANE_ORDER`] and columns in [`BLOCK_ORDER`].
    pub fn csv_tables(&self) -> Vec<(String, String)> {
        let mut theta = String::from("plane_type,count\n");
        for t in PLANE_ORDER {
            theta.push_str(&format!("{},{}\n", t.tag(), self.theta_of(t)));
        }
        let mut nb = String::from("block_type,count\n");
        for k in BLOCK_ORDER {
            nb.push_str(&format!("{},{}\n", k.tag(), self.blocks_of(k)));
        }
        let header = format!(
            "plane_type,{}\n",
            BLOCK_ORDER.map(|k| k.tag()).join(",")
        );
        let mut h = header.clone();
        let mut t_csv = header;
        for x in PLANE_ORDER {
            let hrow: Vec<String> = BLOCK_ORDER.iter().map(|&y| self.h(x, y).to_string()).collect();
            let trow: Vec<String> = BLOCK_ORDER.iter().map(|&y| self.t(x, y).to_string()).collect();
            h.push_str(&format!("{},{}\n", x.tag(), hrow.join(",")));
            t_csv.push_str(&format!("{},{}\n", x.tag(), trow.join(",")));
        }
        vec![
            ("theta.csv".to_string(), theta),
            ("n_blocks.csv".to_string(), nb),
            ("h_table.csv".to_string(), h),
            ("t_table.csv".to_string(), t_csv),
        ]
    }
}

/// Report of a random-plane division probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisionSampleReport {
    /// Number of independent planes drawn and checked.
    pub samples: u64,
    /// The PRNG seed (ChaCha8, counter-based), recorded for reproducibility.
    pub seed: u64,
    /// Planes whose no-nilpotent-line status rested on the structural
    /// checks alone because the discriminant's square class was undecidable
    /// (function fields only).
    pub undecided_square: u64,
    /// Uniqueness of the covering block is certified structurally — any
    /// block containing the plane contains its closure, which is already
    /// 4-dimensional — rather than re-searched.
    pub uniqueness_structural: bool,
}

// ---------------------------------------------------------------------------
// Block enumeration
// ---------------------------------------------------------------------------

fn require_finite(alg: &Algebra) -> Result<u64, DesignError> {
    alg.field()
        .prime_modulus()
        .filter(|_| alg.field().is_finite())
        .ok_or(DesignError::InfiniteField)
}

#[derive(Default)]
struct PassOne {
    theta: [u64; 7],
    blocks: BTreeMap<String, (Subspace, usize)>,
}

impl PassOne {
    fn merge(mut self, other: PassOne) -> PassOne {
        for (a, b) in self.theta.iter_mut().zip(other.theta) {
            *a += b;
        }
        self.blocks.extend(other.blocks);
        self
    }
}

/// Classify every plane, and close the Q/Dn/Ds/M/J ones into blocks. Every
/// block contains a plane of one of those five types, so the sweep reaches
/// all of them.
fn classified_blocks(alg: &Algebra) -> Result<PassOne, DesignError> {
    require_finite(alg)?;
    let field = alg.field();
    let patterns = pivot_patterns(7, 2);
    patterns
        .par_iter()
        .map(|pattern| -> Result<PassOne, DesignError> {
            let mut out = PassOne::default();
            for plane in subspaces_with_pivots(7, pattern, field)? {
                let t = classify_plane(alg, &plane)?;
                out.theta[plane_idx(t)] += 1;
                match t {
                    PlaneType::Q
                    | PlaneType::Dn
                    | PlaneType::Ds
                    | PlaneType::M
                    | PlaneType::J => {
                        let sub = subalgebra_of_plane(alg, &plane)?;
                        debug_assert_eq!(sub.dim(), 4);
                        let block = sub.imaginary_block()?;
                        out.blocks
                            .insert(block.canonical_string(), (block, block_idx(sub.kind())));
                    }
                    PlaneType::U | PlaneType::Z => {}
                    PlaneType::DUnresolved => unreachable!("finite fields resolve D planes"),
                }
            }
            Ok(out)
        })
        .try_reduce(PassOne::default, |a, b| Ok(a.merge(b)))
}

/// All blocks `im(H)` over a finite field, via plane classification and
/// closure.
pub fn enumerate_blocks(alg: &Algebra) -> Result<BlockSet, DesignError> {
    let pass = classified_blocks(alg)?;
    Ok(pass
        .blocks
        .into_iter()
        .map(|(k, (s, _))| (k, s))
        .collect())
}

/// Independent oracle: scan every 3-dimensional subspace of the imaginary
/// space and keep those whose RREF basis `(a, b, c)` has a vanishing
/// associator. The associator is alternating and trilinear, so one basis
/// triple decides the whole subspace, and such subspaces (plus scalars) are
/// exactly the 4-dimensional associative subalgebras' imaginary parts.
pub fn enumerate_blocks_bruteforce(alg: &Algebra) -> Result<BlockSet, DesignError> {
    require_finite(alg)?;
    let field = alg.field();
    let patterns = pivot_patterns(7, 3);
    patterns
        .par_iter()
        .map(|pattern| -> Result<BlockSet, DesignError> {
            let mut out = BlockSet::new();
            for space in subspaces_with_pivots(7, pattern, field)? {
                let a = alg.from_im_coords(space.basis_row(0))?;
                let b = alg.from_im_coords(space.basis_row(1))?;
                let c = alg.from_im_coords(space.basis_row(2))?;
                if a.associator(&b, &c).is_zero() {
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

/// The 13-at-q-3 (generally `[3 choose 2]_q`) planes inside a 3-dimensional
/// block, as subspaces of the ambient 7-dimensional imaginary space.
fn planes_inside(block: &Subspace) -> Result<Vec<Subspace>, DesignError> {
    let field = block.field();
    let mut out = Vec::new();
    for small in enumerate_subspaces(3, 2, field)? {
        let lifted = small.basis().mul(block.basis())?;
        out.push(Subspace::span(field, 7, &lifted.to_row_vecs())?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coverage audit
// ---------------------------------------------------------------------------

/// Per-plane block incidence: canonical plane key → number of containing
/// blocks, split by block-type column when types are supplied.
fn incidence_map(
    blocks: &BTreeMap<String, (Subspace, usize)>,
) -> Result<HashMap<String, [u32; 4]>, DesignError> {
    let mut incidence: HashMap<String, [u32; 4]> = HashMap::new();
    for (block, kind_idx) in blocks.values() {
        for plane in planes_inside(block)? {
            incidence.entry(plane.canonical_string()).or_default()[*kind_idx] += 1;
        }
    }
    Ok(incidence)
}

fn audit_from_incidence(
    alg: &Algebra,
    blocks: &BTreeMap<String, (Subspace, usize)>,
    incidence: &HashMap<String, [u32; 4]>,
) -> Result<CoverageAudit, DesignError> {
    let field = alg.field();
    // Histogram over every plane of the imaginary space; a plane missing
    // from the incidence map is a covering gap.
    let patterns = pivot_patterns(7, 2);
    let histogram = patterns
        .par_iter()
        .map(|pattern| -> Result<BTreeMap<u64, u64>, DesignError> {
            let mut hist = BTreeMap::new();
            for plane in subspaces_with_pivots(7, pattern, field)? {
                let key = plane.canonical_string();
                let mult = incidence
                    .get(&key)
                    .map(|row| row.iter().map(|&c| c as u64).sum::<u64>())
                    .ok_or_else(|| {
                        DesignError::CoverageGap(format!("plane {key} lies in no block"))
                    })?;
                *hist.entry(mult).or_insert(0) += 1;
            }
            Ok(hist)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })?;
    let fano = histogram.keys().all(|&m| m == 1);
    // Minimal iff every block contains a multiplicity-1 plane (removing the
    // block would leave that plane uncovered).
    let mut minimal = true;
    for (block, _) in blocks.values() {
        let mut has_private_plane = false;
        for plane in planes_inside(block)? {
            let row = incidence
                .get(&plane.canonical_string())
                .expect("block-internal planes were inserted above");
            if row.iter().map(|&c| c as u64).sum::<u64>() == 1 {
                has_private_plane = true;
                break;
            }
        }
        if !has_private_plane {
            minimal = false;
            break;
        }
    }
    Ok(CoverageAudit {
        histogram,
        minimal,
        fano,
    })
}

/// Audit a block set: multiplicity histogram over all planes, the q-Fano
/// flag (all multiplicities 1), and inclusion-minimality (every block owns
/// a multiplicity-1 plane). A plane in zero blocks is a
/// [`DesignError::CoverageGap`].
pub fn coverage_audit(blocks: &BlockSet, alg: &Algebra) -> Result<CoverageAudit, DesignError> {
    require_finite(alg)?;
    // Block types are irrelevant for coverage; park everything in column 0.
    let typed: BTreeMap<String, (Subspace, usize)> = blocks
        .iter()
        .map(|(k, s)| (k.clone(), (s.clone(), 0)))
        .collect();
    let incidence = incidence_map(&typed)?;
    audit_from_incidence(alg, &typed, &incidence)
}

// ---------------------------------------------------------------------------
// Counting tables
// ---------------------------------------------------------------------------

#[derive(Default)]
struct PassTwo {
    hist_check: BTreeMap<u64, u64>,
    h_profiles: [Option<[u64; 4]>; 7],
}

impl PassTwo {
    fn merge(mut self, other: PassTwo) -> PassTwo {
        for (k, v) in other.hist_check {
            *self.hist_check.entry(k).or_insert(0) += v;
        }
        for (mine, theirs) in self.h_profiles.iter_mut().zip(other.h_profiles) {
            if let Some(p) = theirs {
                match mine {
                    None => *mine = Some(p),
                    Some(a) => {
                        assert_eq!(*a, p, "H-table profile must not depend on the plane")
                    }
                }
            }
        }
        self
    }
}

/// Every vector of `F^len` (including zero), streamed in odometer order.
fn all_vectors(
    field: crate::field::FieldDescriptor,
    len: usize,
) -> Result<impl Iterator<Item = Vec<FieldScalar>>, DesignError> {
    let elems = enumerate_field(field)?;
    let mut counters = vec![0usize; len];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let v: Vec<FieldScalar> = counters.iter().map(|&i| elems[i].clone()).collect();
        let mut carry = true;
        for c in counters.iter_mut() {
            *c += 1;
            if *c < elems.len() {
                carry = false;
                break;
            }
            *c = 0;
        }
        if carry {
            done = true;
        }
        Some(v)
    }))
}

/// The complete census over a finite field. Internally re-verifies the
/// structural identities: H- and T-profiles are representative-independent,
/// `Σ theta = [7 choose 2]_q`, `Σ n = [6 choose 2]_q`, and the
/// double-counting identity `Θ_X · H[X,Y] = T[X,Y] · N_Y` for all 28 pairs.
pub fn counting_tables(alg: &Algebra) -> Result<DesignReport, DesignError> {
    let q = require_finite(alg)?;
    let field = alg.field();
    let pass1 = classified_blocks(alg)?;
    let mut n = [0u64; 4];
    for (_, kind_idx) in pass1.blocks.values() {
        n[*kind_idx] += 1;
    }

    // Incidence and the T table in one sweep over blocks.
    let incidence = incidence_map(&pass1.blocks)?;
    let mut t_profiles: [Option<[u64; 7]>; 4] = [None; 4];
    for (block, kind_idx) in pass1.blocks.values() {
        let mut trow = [0u64; 7];
        for plane in planes_inside(block)? {
            trow[plane_idx(classify_plane(alg, &plane)?)] += 1;
        }
        match &t_profiles[*kind_idx] {
            None => t_profiles[*kind_idx] = Some(trow),
            Some(prev) => {
                assert_eq!(*prev, trow, "T-table profile must not depend on the block")
            }
        }
    }

    // Second full plane sweep: histogram plus the H table.
    let patterns = pivot_patterns(7, 2);
    let pass2 = patterns
        .par_iter()
        .map(|pattern| -> Result<PassTwo, DesignError> {
            let mut out = PassTwo::default();
            for plane in subspaces_with_pivots(7, pattern, field)? {
                let t = classify_plane(alg, &plane)?;
                let key = plane.canonical_string();
                let row = incidence.get(&key).ok_or_else(|| {
                    DesignError::CoverageGap(format!("plane {key} lies in no block"))
                })?;
                let row64 = [
                    row[0] as u64,
                    row[1] as u64,
                    row[2] as u64,
                    row[3] as u64,
                ];
                *out.hist_check.entry(row64.iter().sum()).or_insert(0) += 1;
                match &out.h_profiles[plane_idx(t)] {
                    None => out.h_profiles[plane_idx(t)] = Some(row64),
                    Some(prev) => {
                        assert_eq!(*prev, row64, "H-table profile must not depend on the plane")
                    }
                }
            }
            Ok(out)
        })
        .try_reduce(PassTwo::default, |a, b| Ok(a.merge(b)))?;
    let audit = audit_from_incidence(alg, &pass1.blocks, &incidence)?;
    assert_eq!(audit.histogram, pass2.hist_check);

    // Nilpotent elements and special pairs by direct scan of the imaginary
    // space (q⁷ vectors).
    let mut nilpotent_count = 0u64;
    let mut plus_count = 0u64;
    let mut first_plus: Option<AlgebraElement> = None;
    let one = alg.one();
    let minus_one = alg.scalar(&FieldScalar::from_i64(field, -1));
    for v in all_vectors(field, 7)? {
        let x = alg.from_im_coords(&v)?;
        if x.is_nilpotent() {
            nilpotent_count += 1;
        }
        if x.mul(&x) == one {
            plus_count += 1;
            if first_plus.is_none() {
                first_plus = Some(x);
            }
        }
    }
    // Transitivity lets one representative e₊ stand for all: the pair count
    // is #\{e₊\} × #\{e₋ : e₋² = −1, τ(e₊e₋) = 0\} for any fixed e₊.
    let e_plus = first_plus.expect("finite Cayley algebras contain square roots of 1 in im(O)");
    let mut minus_count = 0u64;
    for v in all_vectors(field, 7)? {
        let x = alg.from_im_coords(&v)?;
        if x.mul(&x) == minus_one && e_plus.mul(&x).tau().is_zero() {
            minus_count += 1;
        }
    }
    let special_pairs = plus_count * minus_count;

    // Assemble and cross-verify the report.
    let theta_total: u64 = pass1.theta.iter().sum();
    assert_eq!(
        BigUint::from(theta_total),
        gaussian_binomial(7, 2, q),
        "plane total must be [7 choose 2]_q"
    );
    let n_total: u64 = n.iter().sum();
    assert_eq!(
        BigUint::from(n_total),
        gaussian_binomial(6, 2, q),
        "block total must be [6 choose 2]_q"
    );

    let mut theta = BTreeMap::new();
    let mut h_table = BTreeMap::new();
    let mut t_table = BTreeMap::new();
    for (i, x) in PLANE_ORDER.into_iter().enumerate() {
        theta.insert(x.tag().to_string(), pass1.theta[i]);
        let hrow = pass2.h_profiles[i].expect("every plane type occurs over a finite field");
        let mut h_entry = BTreeMap::new();
        let mut t_entry = BTreeMap::new();
        for (j, y) in BLOCK_ORDER.into_iter().enumerate() {
            h_entry.insert(y.tag().to_string(), hrow[j]);
            let t_xy = t_profiles[j].expect("every block type occurs")[i];
            t_entry.insert(y.tag().to_string(), t_xy);
            // Incidences (plane of type X, containing block of type Y),
            // counted from both sides.
            assert_eq!(
                pass1.theta[i] * hrow[j],
                t_xy * n[j],
                "double counting failed at ({}, {})",
                x.tag(),
                y.tag()
            );
        }
        h_table.insert(x.tag().to_string(), h_entry);
        t_table.insert(x.tag().to_string(), t_entry);
    }
    let mut n_blocks = BTreeMap::new();
    for (j, y) in BLOCK_ORDER.into_iter().enumerate() {
        n_blocks.insert(y.tag().to_string(), n[j]);
    }

    Ok(DesignReport {
        q,
        theta,
        n_blocks,
        h_table,
        t_table,
        cover_histogram: audit.histogram,
        minimal: audit.minimal,
        fano: audit.fano,
        nilpotent_count,
        special_pairs,
    })
}

// ---------------------------------------------------------------------------
// Division sampling and isotropy
// ---------------------------------------------------------------------------

/// Draw `samples` random planes in the imaginary space (coefficients from a
/// bounded pool: all residues over `F_p`, the integers −2..=2 over `Q` and
/// function fields) and check the division-algebra signature on each: no
/// nilpotent lines where decidable, a 4-dimensional closure with zero
/// radical, and a vanishing associator on the closure's imaginary basis.
///
/// Any failure is a [`DesignError::DivisionViolation`] carrying the
/// witness. Planes whose discriminant square class is undecidable over a
/// function field are counted in `undecided_square` and still pass the
/// structural checks.
pub fn sample_division_check(
    alg: &Algebra,
    samples: u64,
    seed: u64,
) -> Result<DivisionSampleReport, DesignError> {
    let field = alg.field();
    let pool: Vec<FieldScalar> = if let Some(p) = field.prime_modulus() {
        (0..p as i64).map(|r| FieldScalar::from_i64(field, r)).collect()
    } else {
        (-2..=2).map(|r| FieldScalar::from_i64(field, r)).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<FieldScalar> {
        (0..7)
            .map(|_| pool[(rng.next_u64() % pool.len() as u64) as usize].clone())
            .collect()
    };
    let mut undecided_square = 0u64;
    let mut drawn = 0u64;
    while drawn < samples {
        let plane = Subspace::span(field, 7, &[draw(&mut rng), draw(&mut rng)])?;
        if plane.dim() != 2 {
            continue; // dependent pair; redraw
        }
        drawn += 1;
        let describe = || plane.canonical_string();
        match crate::classify::nilpotent_lines(alg, &plane) {
            Ok(nil) => {
                if nil.count != NilpotentCount::Zero {
                    return Err(DesignError::DivisionViolation(format!(
                        "plane {} has a nilpotent line",
                        describe()
                    )));
                }
            }
            Err(ClassifyError::UnresolvedSquare(_)) => undecided_square += 1,
            Err(e) => return Err(e.into()),
        }
        let sub = subalgebra_of_plane(alg, &plane)?;
        if sub.dim() != 4 {
            return Err(DesignError::DivisionViolation(format!(
                "plane {} closes at dimension {}, not 4",
                describe(),
                sub.dim()
            )));
        }
        if sub.radical().dim() != 0 {
            return Err(DesignError::DivisionViolation(format!(
                "closure of plane {} has radical dimension {}",
                describe(),
                sub.radical().dim()
            )));
        }
        let block = sub.imaginary_block()?;
        let a = alg.from_im_coords(block.basis_row(0))?;
        let b = alg.from_im_coords(block.basis_row(1))?;
        let c = alg.from_im_coords(block.basis_row(2))?;
        if !a.associator(&b, &c).is_zero() {
            return Err(DesignError::DivisionViolation(format!(
                "closure of plane {} has a non-vanishing associator",
                describe()
            )));
        }
    }
    Ok(DivisionSampleReport {
        samples: drawn,
        seed,
        undecided_square,
        uniqueness_structural: true,
    })
}

/// Whether the norm form has a nonzero isotropic vector, by direct scan of
/// the q⁸ coefficient vectors (with early exit). True for every finite
/// field, where all Cayley algebras are split.
pub fn check_norm_zero_solutions(alg: &Algebra) -> Result<bool, DesignError> {
    require_finite(alg)?;
    let field = alg.field();
    for v in all_vectors(field, 8)? {
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        let x = alg.from_coeffs(v)?;
        if x.norm().is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_general_cayley, make_split_cayley};
    use crate::field::FieldDescriptor;

    fn f(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn general(p: u64, a: i64, b: i64, c: i64) -> Algebra {
        let d = f(p);
        make_general_cayley(
            d,
            &FieldScalar::from_i64(d, a),
            &FieldScalar::from_i64(d, b),
            &FieldScalar::from_i64(d, c),
        )
        .unwrap()
    }

    fn coordinate_block(d: FieldDescriptor, slots: [usize; 3]) -> Subspace {
        let rows: Vec<Vec<FieldScalar>> = slots
            .iter()
            .map(|&k| {
                let mut v = vec![FieldScalar::zero(d); 7];
                v[k] = FieldScalar::one(d);
                v
            })
            .collect();
        Subspace::span(d, 7, &rows).unwrap()
    }

    #[test]
    fn both_block_routes_agree_at_q3() {
        let d = f(3);
        for alg in [make_split_cayley(d), general(3, -1, -1, -1)] {
            let closed = enumerate_blocks(&alg).unwrap();
            let brute = enumerate_blocks_bruteforce(&alg).unwrap();
            assert_eq!(closed.len(), 11011);
            assert_eq!(closed, brute);
        }
        // span(e₀, e₁, e₃) is a block for any parameters; span(e₀, e₁, e₂)
        // is not one at (−1, −1, −1).
        for alg in [general(3, -1, -1, -1), general(3, 1, 2, 1)] {
            let blocks = enumerate_blocks(&alg).unwrap();
            let quaternion_block = coordinate_block(d, [0, 1, 3]);
            assert!(blocks.contains_key(&quaternion_block.canonical_string()));
            let non_block = coordinate_block(d, [0, 1, 2]);
            assert!(!blocks.contains_key(&non_block.canonical_string()));
        }
    }

    #[test]
    fn counting_tables_reproduce_expected_census_at_q3() {
        let alg = make_split_cayley(f(3));
        let report = counting_tables(&alg).unwrap();
        assert_eq!(report.q, 3);

        let expected_theta = [22113u64, 3276, 13104, 13104, 44226, 3276, 364];
        for (t, want) in PLANE_ORDER.into_iter().zip(expected_theta) {
            assert_eq!(report.theta_of(t), want, "theta[{}]", t.tag());
        }
        assert_eq!(report.total_planes(), 99463);

        let expected_n = [7371u64, 1092, 2184, 364];
        for (k, want) in BLOCK_ORDER.into_iter().zip(expected_n) {
            assert_eq!(report.blocks_of(k), want, "n[{}]", k.tag());
        }
        assert_eq!(report.total_blocks(), 11011);

        let expected_h: [[u64; 4]; 7] = [
            [1, 0, 0, 0],
            [9, 0, 4, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 3, 6, 4],
        ];
        let expected_t: [[u64; 4]; 7] = [
            [3, 0, 0, 0],
            [4, 0, 6, 0],
            [0, 12, 0, 0],
            [0, 0, 6, 0],
            [6, 0, 0, 0],
            [0, 0, 0, 9],
            [0, 1, 1, 4],
        ];
        for (i, x) in PLANE_ORDER.into_iter().enumerate() {
            for (j, y) in BLOCK_ORDER.into_iter().enumerate() {
                assert_eq!(report.h(x, y), expected_h[i][j], "H[{},{}]", x.tag(), y.tag());
                assert_eq!(report.t(x, y), expected_t[i][j], "T[{},{}]", x.tag(), y.tag());
            }
        }
        // Each block type sees [3 choose 2]_3 = 13 planes in total.
        for (j, y) in BLOCK_ORDER.into_iter().enumerate() {
            let col: u64 = (0..7).map(|i| expected_t[i][j]).sum();
            assert_eq!(col, 13, "T column sum for {}", y.tag());
        }

        let mut expected_hist = BTreeMap::new();
        expected_hist.insert(1u64, 95823u64);
        expected_hist.insert(13u64, 3640u64);
        assert_eq!(report.cover_histogram, expected_hist);
        assert!(report.minimal);
        assert!(!report.fano);
        assert_eq!(report.nilpotent_count, 728);
        assert_eq!(report.special_pairs, 176904);

        // Serialization surfaces: JSON carries the counts, the CSVs carry
        // the table layout.
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"special_pairs\":176904"));
        let csvs = report.csv_tables();
        assert_eq!(csvs.len(), 4);
        let h_csv = &csvs[2].1;
        assert!(h_csv.starts_with("plane_type,M4,F2J2,S2J2,F1J3\n"));
        assert!(h_csv.contains("Z,0,3,6,4\n"));
        let t_csv = &csvs[3].1;
        assert!(t_csv.contains("Dn,0,12,0,0\n"));
    }

    #[test]
    fn empty_block_set_is_a_coverage_gap() {
        let alg = make_split_cayley(f(3));
        match coverage_audit(&BlockSet::new(), &alg) {
            Err(DesignError::CoverageGap(_)) => {}
            other => panic!("expected CoverageGap, got {other:?}"),
        }
    }

    #[test]
    fn division_sampling_passes_on_division_algebras() {
        // The classical octonions over Q are division: quick sample.
        let d = FieldDescriptor::rational();
        let m1 = FieldScalar::from_i64(d, -1);
        let alg = make_general_cayley(d, &m1, &m1, &m1).unwrap();
        let report = sample_division_check(&alg, 60, 42).unwrap();
        assert_eq!(report.samples, 60);
        assert_eq!(report.seed, 42);
        assert_eq!(report.undecided_square, 0, "Q decides every square class");
        assert!(report.uniqueness_structural);

        // The generic-parameter algebra over F₅(a,b,c) is division.
        let dq = FieldDescriptor::function_over_prime(5).unwrap();
        let alg = make_general_cayley(
            dq,
            &FieldScalar::parse(dq, "a").unwrap(),
            &FieldScalar::parse(dq, "b").unwrap(),
            &FieldScalar::parse(dq, "c").unwrap(),
        )
        .unwrap();
        let report = sample_division_check(&alg, 12, 7).unwrap();
        assert_eq!(report.samples, 12);
    }

    #[test]
    fn division_sampling_rejects_split_algebras() {
        let alg = make_split_cayley(f(3));
        match sample_division_check(&alg, 50, 1) {
            Err(DesignError::DivisionViolation(_)) => {}
            other => panic!("expected DivisionViolation, got {other:?}"),
        }
    }

    #[test]
    fn norm_zero_solutions_exist_over_finite_fields() {
        assert!(check_norm_zero_solutions(&make_split_cayley(f(3))).unwrap());
        assert!(check_norm_zero_solutions(&general(3, -1, -1, -1)).unwrap());
        assert!(check_norm_zero_solutions(&general(5, 1, 1, 1)).unwrap());
        assert!(check_norm_zero_solutions(&general(7, -1, -1, -1)).unwrap());
        let d = FieldDescriptor::rational();
        let m1 = FieldScalar::from_i64(d, -1);
        let alg = make_general_cayley(d, &m1, &m1, &m1).unwrap();
        assert!(matches!(
            check_norm_zero_solutions(&alg),
            Err(DesignError::InfiniteField)
        ));
    }
}
