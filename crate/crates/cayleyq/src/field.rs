//! Exact arithmetic over the three coefficient fields.
//!
//! Every computation in this crate happens over one of:
//!
//! * the **prime field** `F_p` for an odd prime `p`, represented by residues
//!   in `0..p`;
//! * the **rationals** `Q`, represented by arbitrary-precision fractions that
//!   are always fully reduced with a positive denominator;
//! * the **rational function field** `K(a, b, c)` over a base field `K`
//!   (itself `F_p` or `Q`), represented by fractions of sparse trivariate
//!   polynomials.
//!
//! The three indeterminates are always written `a`, `b`, `c`; they stand for
//! the three doubling parameters of a Cayley–Dickson tower, so a generic
//! 8-dimensional algebra lives over `F_p(a, b, c)`.
//!
//! Function-field fractions are kept in lowest terms: the multivariate gcd
//! of numerator and denominator (recursive primitive pseudo-remainder
//! sequences) is cancelled on every construction, and the denominator is
//! scaled to a canonical head (monic over `F_p`, content-free with positive
//! leading coefficient over `Q`), so each value has a unique representation.
//! Equality is nevertheless decided by cross-multiplication — `a/b = c/d`
//! iff `ad − cb` is the zero polynomial — which stays correct whatever the
//! representations are.
//!
//! Keeping fractions reduced is not a luxury: chained row reductions over
//! `K(a, b, c)` (subalgebra closures, kernel computations) otherwise stack
//! denominators multiplicatively and the term counts grow beyond any budget
//! after a handful of elimination steps.
//!
//! Square-root support is asymmetric on purpose: `F_p` gets a full
//! Tonelli–Shanks, `Q` gets a perfect-square test, and the function field
//! reports [`SquareStatus::Unsupported`] (callers that genuinely need the
//! answer there use evaluation certificates instead; see the `classify`
//! module).
//!
//! ```
//! use cayleyq::field::{FieldDescriptor, FieldScalar};
//!
//! let f5abc = FieldDescriptor::function_over_prime(5).unwrap();
//! let x = FieldScalar::parse(f5abc, "(a^2*b - 1)/(c)").unwrap();
//! let y = FieldScalar::parse(f5abc, "c").unwrap();
//! let p = x.mul(&y);
//! assert_eq!(p, FieldScalar::parse(f5abc, "a^2*b - 1").unwrap());
//! ```

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors produced by field construction, arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// Division or inversion of zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Two operands belong to different fields.
    #[error("operands belong to different fields")]
    DescriptorMismatch,
    /// A prime-field modulus that is not an odd prime.
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    /// `sqrt` of an element that is not a square.
    #[error("element is not a square")]
    NotASquare,
    /// `sqrt`/`is_square` capability absent (function fields).
    #[error("square roots are not supported over this field")]
    SqrtUnsupported,
    /// Enumeration of a field with infinitely many elements.
    #[error("cannot enumerate an infinite field")]
    InfiniteField,
    /// The three indeterminates exist only over a function field.
    #[error("field has no indeterminates")]
    NoIndeterminates,
    /// Malformed scalar text.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Base field of a function field: the coefficients of the polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseField {
    /// `F_p`, `p` an odd prime.
    Prime(u64),
    /// The rationals.
    Rational,
}

impl BaseField {
    /// The plain field descriptor for this base.
    pub fn descriptor(self) -> FieldDescriptor {
        match self {
            BaseField::Prime(p) => FieldDescriptor::Prime(p),
            BaseField::Rational => FieldDescriptor::Rational,
        }
    }
}

/// Identifies one of the three supported fields.
///
/// Descriptors are small copyable values; every [`FieldScalar`] knows its own
/// descriptor and all binary operations insist that the descriptors agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    /// The prime field `F_p` for an odd prime `p`.
    Prime(u64),
    /// The rationals `Q` in arbitrary precision.
    Rational,
    /// The rational function field `base(a, b, c)`.
    Function(BaseField),
}

impl FieldDescriptor {
    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p.is_multiple_of(2) || !is_prime_u64(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    /// The rationals.
    pub fn rational() -> Self {
        FieldDescriptor::Rational
    }

    /// `F_p(a, b, c)` for an odd prime `p`.
    pub fn function_over_prime(p: u64) -> Result<Self, FieldError> {
        match Self::prime(p)? {
            FieldDescriptor::Prime(p) => Ok(FieldDescriptor::Function(BaseField::Prime(p))),
            _ => unreachable!(),
        }
    }

    /// `Q(a, b, c)`.
    pub fn function_over_rationals() -> Self {
        FieldDescriptor::Function(BaseField::Rational)
    }

    /// The modulus when this is a prime field.
    pub fn prime_modulus(self) -> Option<u64> {
        match self {
            FieldDescriptor::Prime(p) => Some(p),
            _ => None,
        }
    }

    /// Number of elements for finite fields, `None` for infinite ones.
    pub fn size(self) -> Option<u64> {
        self.prime_modulus()
    }

    /// True for `F_p`.
    pub fn is_finite(self) -> bool {
        matches!(self, FieldDescriptor::Prime(_))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "F_{p}"),
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Function(BaseField::Prime(p)) => write!(f, "F_{p}(a,b,c)"),
            FieldDescriptor::Function(BaseField::Rational) => write!(f, "Q(a,b,c)"),
        }
    }
}

/// Three-valued answer of [`FieldScalar::is_square`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareStatus {
    /// Certainly a square.
    Yes,
    /// Certainly not a square.
    No,
    /// The field backend cannot decide (function fields).
    Unsupported,
}

// ---------------------------------------------------------------------------
// u64 modular arithmetic and primality
// ---------------------------------------------------------------------------

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for `u64` (the listed bases cover the full
/// 64-bit range).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Tonelli–Shanks square root mod an odd prime; returns the smaller of the
/// two roots (deterministic representative), or `None` for non-residues.
fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        // Write p − 1 = t·2^s with t odd.
        let mut t = p - 1;
        let mut s = 0u32;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        // Smallest quadratic non-residue; a deterministic scan is fine since
        // half of all residues qualify.
        let mut z = 2;
        while powmod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = powmod(z, t, p);
        let mut u = powmod(a, t, p);
        let mut r = powmod(a, t.div_ceil(2), p);
        while u != 1 {
            let mut i = 0u32;
            let mut probe = u;
            while probe != 1 {
                probe = mulmod(probe, probe, p);
                i += 1;
            }
            let b = powmod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mulmod(b, b, p);
            u = mulmod(u, c, p);
            r = mulmod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

// ---------------------------------------------------------------------------
// Sparse trivariate polynomials
// ---------------------------------------------------------------------------

/// Exponent triple of a monomial `a^e0 · b^e1 · c^e2`, ordered graded-lex:
/// first by total degree, then lexicographically with `a` strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Mono {
    e: [u16; 3],
}

impl Mono {
    const ONE: Mono = Mono { e: [0, 0, 0] };

    fn total(self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    fn mul(self, other: Mono) -> Mono {
        Mono {
            e: std::array::from_fn(|i| {
                self.e[i]
                    .checked_add(other.e[i])
                    .expect("monomial degree overflow")
            }),
        }
    }

    fn div(self, other: Mono) -> Mono {
        Mono {
            e: std::array::from_fn(|i| {
                debug_assert!(self.e[i] >= other.e[i]);
                self.e[i] - other.e[i]
            }),
        }
    }

    fn try_div(self, other: Mono) -> Option<Mono> {
        let mut e = [0u16; 3];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.e[i].checked_sub(other.e[i])?;
        }
        Some(Mono { e })
    }

    fn gcd(self, other: Mono) -> Mono {
        Mono {
            e: std::array::from_fn(|i| self.e[i].min(other.e[i])),
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.e.cmp(&other.e))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in `a, b, c` with coefficients in a [`BaseField`].
///
/// Zero coefficients are pruned eagerly, so the term map of a nonzero
/// polynomial contains only nonzero entries and the zero polynomial is the
/// empty map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    base: BaseField,
    terms: BTreeMap<Mono, FieldScalar>,
}

impl Poly {
    fn zero(base: BaseField) -> Self {
        Poly {
            base,
            terms: BTreeMap::new(),
        }
    }

    fn one(base: BaseField) -> Self {
        Poly::constant(FieldScalar::one(base.descriptor()))
    }

    fn constant(c: FieldScalar) -> Self {
        let base = match c.descriptor() {
            FieldDescriptor::Prime(p) => BaseField::Prime(p),
            FieldDescriptor::Rational => BaseField::Rational,
            FieldDescriptor::Function(_) => panic!("polynomial coefficients must be base scalars"),
        };
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::ONE, c);
        }
        Poly { base, terms }
    }

    fn var(base: BaseField, idx: usize) -> Self {
        assert!(idx < 3, "only three indeterminates exist");
        let mut e = [0u16; 3];
        e[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Mono { e }, FieldScalar::one(base.descriptor()));
        Poly { base, terms }
    }

    /// Coefficient field of this polynomial.
    pub fn base(&self) -> BaseField {
        self.base
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the polynomial has no `a`, `b`, `c` dependence.
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Mono::ONE))
    }

    /// Number of (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.total())
    }

    /// Graded-lex leading term as `(exponents, coefficient)`.
    pub fn leading_term(&self) -> Option<([u16; 3], &FieldScalar)> {
        self.terms.iter().next_back().map(|(m, c)| (m.e, c))
    }

    /// Graded-lex trailing (smallest) term as `(exponents, coefficient)`.
    pub fn trailing_term(&self) -> Option<([u16; 3], &FieldScalar)> {
        self.terms.iter().next().map(|(m, c)| (m.e, c))
    }

    fn insert_add(&mut self, m: Mono, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.base, other.base, "polynomial base fields differ");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.base, other.base, "polynomial base fields differ");
        let mut out = Poly::zero(self.base);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.mul(*m2), c1.mul(c2));
            }
        }
        out
    }

    fn scale(&self, c: &FieldScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.base);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    /// Componentwise-minimum exponent vector over all terms (the monomial gcd
    /// of the terms); `ONE` for the zero polynomial.
    fn mono_gcd(&self) -> Mono {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => *m,
            None => return Mono::ONE,
        };
        it.fold(first, |acc, m| acc.gcd(*m))
    }

    fn div_mono(&self, m: Mono) -> Poly {
        if m == Mono::ONE {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.div(m), v.clone());
        }
        Poly {
            base: self.base,
            terms,
        }
    }

    fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Largest exponent of variable `v` over all terms (0 for the zero
    /// polynomial).
    fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.e[v]).max().unwrap_or(0)
    }

    /// Coefficient of `v^k` viewed as a polynomial in the other variables.
    fn coeff_wrt(&self, v: usize, k: u16) -> Poly {
        let mut out = Poly::zero(self.base);
        for (m, c) in &self.terms {
            if m.e[v] == k {
                let mut e = m.e;
                e[v] = 0;
                out.insert_add(Mono { e }, c.clone());
            }
        }
        out
    }

    /// Multiply by `v^k`.
    fn mul_var_pow(&self, v: usize, k: u16) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.e;
            e[v] = e[v].checked_add(k).expect("monomial degree overflow");
            terms.insert(Mono { e }, c.clone());
        }
        Poly {
            base: self.base,
            terms,
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Graded-lex long division by the leading term of `d`. This decides
    /// divisibility: graded-lex is multiplicative, so whenever `self = q·d`
    /// the leading term of the running remainder is the leading term of
    /// `(q − partial)·d` and is always divisible by the leading term of `d`.
    fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.base, d.base, "polynomial base fields differ");
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (dm, dc) = {
            let (e, c) = d.leading_term().expect("nonzero divisor");
            (Mono { e }, c.clone())
        };
        let dc_inv = dc.inv().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.base);
        while !rem.is_zero() {
            let (rm, rc) = {
                let (e, c) = rem.leading_term().expect("nonzero remainder");
                (Mono { e }, c.clone())
            };
            let qm = rm.try_div(dm)?;
            let qc = rc.mul(&dc_inv);
            quot.insert_add(qm, qc.clone());
            // rem −= (qc·v^qm)·d; the leading terms cancel, so the leading
            // monomial strictly decreases and the loop terminates.
            for (m, c) in &d.terms {
                rem.insert_add(m.mul(qm), c.mul(&qc).neg());
            }
        }
        Some(quot)
    }

    /// Content with respect to `v`: the gcd of the coefficient polynomials of
    /// the powers of `v`. Zero for the zero polynomial.
    fn content_wrt(&self, v: usize) -> Poly {
        let exps: std::collections::BTreeSet<u16> = self.terms.keys().map(|m| m.e[v]).collect();
        let mut content = Poly::zero(self.base);
        for k in exps {
            content = content.gcd(&self.coeff_wrt(v, k));
            if !content.is_zero() && content.is_constant() {
                break; // gcd is already a unit
            }
        }
        content
    }

    /// `self` divided by its content with respect to `v`.
    fn primitive_wrt(&self, v: usize) -> Poly {
        let c = self.content_wrt(v);
        self.exact_div(&c)
            .expect("content divides every coefficient")
    }

    /// Substitute `vals[i]` for every variable except `v`, leaving a
    /// univariate polynomial in `v`.
    fn specialize_except(&self, v: usize, vals: &[FieldScalar; 3]) -> Poly {
        let mut out = Poly::zero(self.base);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, val) in vals.iter().enumerate() {
                if i != v && m.e[i] > 0 {
                    coeff = coeff.mul(&val.pow(m.e[i] as u64));
                }
            }
            let mut e = [0u16; 3];
            e[v] = m.e[v];
            out.insert_add(Mono { e }, coeff);
        }
        out
    }

    /// Sound certificate that `gcd(self, other)` is constant, via univariate
    /// specializations.
    ///
    /// A variable absent from either side cannot occur in the gcd (a divisor
    /// of a nonzero `v`-free polynomial is `v`-free). For a variable `v`
    /// present in both, substitute values for the other two variables that
    /// preserve the `v`-degree of at least one side: leading `v`-coefficients
    /// of factors divide those of products, so the specialization of any
    /// common divisor also keeps its `v`-degree, and a constant univariate
    /// gcd at such a point forces the true gcd to have `v`-degree 0. When
    /// every variable is ruled out the gcd is constant. Anything
    /// inconclusive returns `false` and the caller runs the full
    /// pseudo-remainder computation.
    fn coprime_by_specialization(&self, other: &Poly) -> bool {
        const POINTS: [i64; 8] = [1, 2, 3, 5, 7, 11, 13, 17];
        let d = self.base.descriptor();
        'vars: for v in 0..3 {
            let (df, dg) = (self.degree_in(v), other.degree_in(v));
            if df == 0 || dg == 0 {
                continue;
            }
            for attempt in 0..4 {
                let vals = std::array::from_fn(|i| {
                    FieldScalar::from_i64(d, POINTS[(2 * v + attempt + 3 * i) % POINTS.len()])
                });
                let pf = self.specialize_except(v, &vals);
                let pg = other.specialize_except(v, &vals);
                if pf.is_zero() || pg.is_zero() {
                    continue;
                }
                if pf.degree_in(v) != df && pg.degree_in(v) != dg {
                    continue; // both leading coefficients vanished here
                }
                if pf.gcd(&pg).is_constant() {
                    continue 'vars;
                }
                // A nonconstant univariate gcd here may still be an
                // accidental common root (small base fields have few
                // points); another point can clear it.
            }
            return false; // no point certified v
        }
        true
    }

    /// Canonical associate: monic over a prime base; coprime integer
    /// coefficients with positive leading coefficient over `Q`.
    fn normalized_assoc(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        match self.base {
            BaseField::Prime(_) => {
                let lead = self.leading_term().expect("nonzero").1.clone();
                self.scale(&lead.inv().expect("nonzero leading coefficient"))
            }
            BaseField::Rational => {
                let content = self.signed_content_rational();
                self.scale(&FieldScalar::Rational(Box::new(content.recip())))
            }
        }
    }

    /// Greatest common divisor, canonically scaled (see
    /// [`Poly::normalized_assoc`]).
    ///
    /// Recursive primitive pseudo-remainder sequences: the main variable is
    /// the highest one present (so coefficients live in strictly lower
    /// variables and the recursion depth is at most three), contents are
    /// split off first, and every pseudo-remainder is replaced by its
    /// primitive part to keep coefficient growth in check. Over the fraction
    /// field of the coefficient ring a pseudo-remainder sequence is the
    /// Euclidean algorithm up to nonzero scalars, so the last nonzero entry
    /// is an associate of the gcd; by Gauss's lemma its primitive part is the
    /// gcd of the primitive parts.
    fn gcd(&self, other: &Poly) -> Poly {
        assert_eq!(self.base, other.base, "polynomial base fields differ");
        if self.is_zero() {
            return other.normalized_assoc();
        }
        if other.is_zero() {
            return self.normalized_assoc();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one(self.base);
        }
        // A variable on one side only cannot occur in the gcd (a divisor of
        // a nonzero `v`-free polynomial is `v`-free), so that side
        // contributes only its content.
        for v in 0..3 {
            let (df, dg) = (self.degree_in(v), other.degree_in(v));
            if df > 0 && dg == 0 {
                return other.gcd(&self.content_wrt(v));
            }
            if df == 0 && dg > 0 {
                return self.gcd(&other.content_wrt(v));
            }
        }
        // Both sides now involve exactly the same variables. Chained
        // arithmetic mostly builds coprime pairs, and a full pseudo-remainder
        // proof of coprimality is by far the most expensive path — try the
        // cheap specialization certificate first. Restricted to genuinely
        // multivariate pairs: the certificate itself takes univariate gcds,
        // which must not re-enter it.
        let shared_vars = (0..3).filter(|&i| self.degree_in(i) > 0).count();
        if shared_vars >= 2 && self.coprime_by_specialization(other) {
            return Poly::one(self.base);
        }
        // Run the pseudo-remainder sequence on the variable with the
        // smallest degrees: both the sequence length and the coefficient
        // inflation scale with them.
        let v = (0..3)
            .filter(|&i| self.degree_in(i) > 0)
            .min_by_key(|&i| {
                let (df, dg) = (self.degree_in(i), other.degree_in(i));
                (df.min(dg), df.max(dg))
            })
            .expect("non-constant polynomial has a variable");
        let ca = self.content_wrt(v);
        let cb = other.content_wrt(v);
        let cont = ca.gcd(&cb);
        let mut big = self.exact_div(&ca).expect("content divides");
        let mut small = other.exact_div(&cb).expect("content divides");
        if big.degree_in(v) < small.degree_in(v) {
            std::mem::swap(&mut big, &mut small);
        }
        loop {
            if small.is_zero() {
                return cont.mul(&big).normalized_assoc();
            }
            if small.degree_in(v) == 0 {
                // A nonzero remainder free of `v`: the primitive parts are
                // coprime, and only the contents contribute.
                return cont.normalized_assoc();
            }
            let r = Poly::prem(&big, &small, v);
            big = small;
            small = if r.is_zero() { r } else { r.primitive_wrt(v) };
        }
    }

    /// Pseudo-remainder of `a` by `b` with respect to `v` (`deg_v b ≥ 1`):
    /// repeatedly cancels the leading `v`-coefficient by cross-multiplying,
    /// producing `lc_v(b)^k · a mod b` for some `k ≥ 0` without leaving the
    /// polynomial ring.
    fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        debug_assert!(db > 0, "pseudo-division needs a positive degree in v");
        let lb = b.coeff_wrt(v, db);
        let mut r = a.clone();
        while !r.is_zero() {
            let dr = r.degree_in(v);
            if dr < db {
                break;
            }
            let lr = r.coeff_wrt(v, dr);
            // The v^dr coefficients of lb·r and lr·v^(dr−db)·b are both
            // lb·lr, so the degree in v strictly drops each round.
            r = r.mul(&lb).sub(&lr.mul_var_pow(v, dr - db).mul(b));
        }
        r
    }

    /// Evaluate at a point of the base field.
    pub fn eval(&self, point: &[FieldScalar; 3]) -> FieldScalar {
        let d = self.base.descriptor();
        for coord in point {
            assert_eq!(coord.descriptor(), d, "evaluation point must be in the base field");
        }
        let mut acc = FieldScalar::zero(d);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (coord, &exp) in point.iter().zip(&m.e) {
                if exp > 0 {
                    term = term.mul(&coord.pow(exp as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Positive rational content of a `Q`-coefficient polynomial, signed so
    /// that dividing by it leaves coprime integer coefficients and a positive
    /// leading coefficient.
    fn signed_content_rational(&self) -> BigRational {
        debug_assert_eq!(self.base, BaseField::Rational);
        debug_assert!(!self.is_zero());
        let mut num_gcd = BigUint::zero();
        let mut den_lcm = BigUint::one();
        for c in self.terms.values() {
            let r = match c {
                FieldScalar::Rational(r) => r,
                _ => unreachable!("rational base holds rational coefficients"),
            };
            num_gcd = num_gcd.gcd(r.numer().magnitude());
            den_lcm = den_lcm.lcm(r.denom().magnitude());
        }
        let mut content = BigRational::new(
            BigInt::from_biguint(Sign::Plus, num_gcd),
            BigInt::from_biguint(Sign::Plus, den_lcm),
        );
        let lead = match self.leading_term() {
            Some((_, FieldScalar::Rational(r))) => r.clone(),
            _ => unreachable!(),
        };
        if lead.is_negative() {
            content = -content;
        }
        content
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["a", "b", "c"];
        let mut first = true;
        // Descending graded-lex, leading term first.
        for (m, c) in self.terms.iter().rev() {
            // Pull the sign out of rational coefficients so `x - 1` prints as
            // such; prime residues carry no canonical sign and always join
            // with `+`.
            let (joiner, coeff_str) = match c {
                FieldScalar::Rational(r) if r.is_negative() => {
                    ("-", FieldScalar::Rational(Box::new(-r.as_ref().clone())).to_string())
                }
                _ => ("+", c.to_string()),
            };
            if first {
                if joiner == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {joiner} ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if *m == Mono::ONE || coeff_str != "1" {
                parts.push(coeff_str);
            }
            for (name, &exp) in names.iter().zip(&m.e) {
                match exp {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A quotient of two trivariate polynomials with nonzero denominator.
///
/// Kept fully reduced: the polynomial gcd of numerator and denominator is
/// cancelled and the denominator is scaled to a canonical head, so every
/// value has a unique representation; see the module docs.
#[derive(Debug, Clone)]
pub struct Fraction {
    num: Poly,
    den: Poly,
}

impl Fraction {
    fn new(num: Poly, den: Poly) -> Fraction {
        assert!(!den.is_zero(), "fraction denominator must be nonzero");
        assert_eq!(num.base, den.base, "fraction parts share a base field");
        if num.is_zero() {
            let base = num.base;
            return Fraction {
                num,
                den: Poly::one(base),
            };
        }
        let g = num.mono_gcd().gcd(den.mono_gcd());
        let mut num = num.div_mono(g);
        let mut den = den.div_mono(g);
        // Cancel the full polynomial gcd. Single-term sides need no further
        // work: their only divisors are monomials, and the common monomial
        // factor is already gone.
        if num.term_count() > 1 && den.term_count() > 1 {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.exact_div(&g).expect("gcd divides the numerator");
                den = den.exact_div(&g).expect("gcd divides the denominator");
            }
        }
        Fraction::head_normalized(num, den)
    }

    /// Construct from a pair already known to be in lowest terms (arithmetic
    /// on reduced fractions can guarantee this structurally), skipping the
    /// gcd.
    fn from_reduced(num: Poly, den: Poly) -> Fraction {
        assert!(!den.is_zero(), "fraction denominator must be nonzero");
        assert_eq!(num.base, den.base, "fraction parts share a base field");
        if num.is_zero() {
            let base = num.base;
            return Fraction {
                num,
                den: Poly::one(base),
            };
        }
        debug_assert!(
            num.mono_gcd().gcd(den.mono_gcd()) == Mono::ONE,
            "a reduced pair shares no monomial factor"
        );
        Fraction::head_normalized(num, den)
    }

    /// Scale a nonzero reduced pair to the canonical denominator head.
    fn head_normalized(mut num: Poly, mut den: Poly) -> Fraction {
        match num.base {
            BaseField::Prime(_) => {
                // Monic denominator.
                let lead = den.leading_term().expect("den nonzero").1.clone();
                let inv = lead.inv().expect("leading coefficient invertible");
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
            BaseField::Rational => {
                // Content-free integer denominator with positive head.
                let content = den.signed_content_rational();
                let inv = FieldScalar::Rational(Box::new(content.recip()));
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        Fraction { num, den }
    }

    /// Numerator polynomial.
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator polynomial (nonzero).
    pub fn denominator(&self) -> &Poly {
        &self.den
    }
}

// ---------------------------------------------------------------------------
// Field scalars
// ---------------------------------------------------------------------------

/// An element of one of the three supported fields.
///
/// Binary operations require both operands to carry the same
/// [`FieldDescriptor`] and panic otherwise (that is a programming error, not
/// an input error; the checked front door [`field_arith`] reports it as
/// [`FieldError::DescriptorMismatch`] instead).
#[derive(Debug, Clone)]
pub enum FieldScalar {
    /// Residue `r` modulo the odd prime `p`, `0 ≤ r < p`.
    Prime {
        /// The modulus.
        p: u64,
        /// The residue.
        r: u64,
    },
    /// A reduced big rational.
    Rational(Box<BigRational>),
    /// A normalized fraction of trivariate polynomials.
    Function(Box<Fraction>),
}

impl FieldScalar {
    /// The field this scalar lives in.
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldScalar::Prime { p, .. } => FieldDescriptor::Prime(*p),
            FieldScalar::Rational(_) => FieldDescriptor::Rational,
            FieldScalar::Function(f) => FieldDescriptor::Function(f.num.base),
        }
    }

    /// Additive identity of `d`.
    pub fn zero(d: FieldDescriptor) -> Self {
        match d {
            FieldDescriptor::Prime(p) => FieldScalar::Prime { p, r: 0 },
            FieldDescriptor::Rational => FieldScalar::Rational(Box::new(BigRational::zero())),
            FieldDescriptor::Function(base) => FieldScalar::Function(Box::new(Fraction {
                num: Poly::zero(base),
                den: Poly::one(base),
            })),
        }
    }

    /// Multiplicative identity of `d`.
    pub fn one(d: FieldDescriptor) -> Self {
        FieldScalar::from_i64(d, 1)
    }

    /// The integer `n` mapped into `d`.
    pub fn from_i64(d: FieldDescriptor, n: i64) -> Self {
        match d {
            FieldDescriptor::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                FieldScalar::Prime { p, r }
            }
            FieldDescriptor::Rational => {
                FieldScalar::Rational(Box::new(BigRational::from(BigInt::from(n))))
            }
            FieldDescriptor::Function(base) => {
                let c = FieldScalar::from_i64(base.descriptor(), n);
                FieldScalar::Function(Box::new(Fraction {
                    num: Poly::constant(c),
                    den: Poly::one(base),
                }))
            }
        }
    }

    /// The indeterminate `a`, `b` or `c` (`idx` 0, 1, 2) of a function field.
    pub fn var(d: FieldDescriptor, idx: usize) -> Result<Self, FieldError> {
        match d {
            FieldDescriptor::Function(base) if idx < 3 => {
                Ok(FieldScalar::Function(Box::new(Fraction {
                    num: Poly::var(base, idx),
                    den: Poly::one(base),
                })))
            }
            FieldDescriptor::Function(_) => Err(FieldError::Parse(format!(
                "indeterminate index {idx} out of range 0..3"
            ))),
            _ => Err(FieldError::NoIndeterminates),
        }
    }

    /// True iff this is the additive identity.
    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Prime { r, .. } => *r == 0,
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Function(f) => f.num.is_zero(),
        }
    }

    /// True iff this is the multiplicative identity.
    pub fn is_one(&self) -> bool {
        self == &FieldScalar::one(self.descriptor())
    }

    /// The residue when this is a prime-field scalar.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldScalar::Prime { r, .. } => Some(*r),
            _ => None,
        }
    }

    /// The fraction when this is a function-field scalar.
    pub fn function_parts(&self) -> Option<&Fraction> {
        match self {
            FieldScalar::Function(f) => Some(f),
            _ => None,
        }
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.descriptor(),
            other.descriptor(),
            "field scalars from different fields"
        );
    }

    /// Sum. Panics on descriptor mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        match (self, other) {
            (FieldScalar::Prime { p, r: r1 }, FieldScalar::Prime { r: r2, .. }) => {
                let mut s = r1 + r2; // p < 2^63 keeps this overflow-free
                if s >= *p {
                    s -= *p;
                }
                FieldScalar::Prime { p: *p, r: s }
            }
            (FieldScalar::Rational(x), FieldScalar::Rational(y)) => {
                FieldScalar::Rational(Box::new(x.as_ref() + y.as_ref()))
            }
            (FieldScalar::Function(x), FieldScalar::Function(y)) => {
                let g = x.den.gcd(&y.den);
                if g.is_constant() {
                    // Coprime denominators: the sum is already reduced — a
                    // common prime factor would divide one denominator and
                    // then the other operand's (reduced) numerator.
                    let num = x.num.mul(&y.den).add(&y.num.mul(&x.den));
                    let den = x.den.mul(&y.den);
                    FieldScalar::Function(Box::new(Fraction::from_reduced(num, den)))
                } else {
                    // Put both over the least common denominator; whatever
                    // common factor remains divides `g`, so the final
                    // reduction works on small inputs.
                    let xd = x.den.exact_div(&g).expect("gcd divides");
                    let yd = y.den.exact_div(&g).expect("gcd divides");
                    let num = x.num.mul(&yd).add(&y.num.mul(&xd));
                    let den = x.den.mul(&yd);
                    FieldScalar::Function(Box::new(Fraction::new(num, den)))
                }
            }
            _ => unreachable!(),
        }
    }

    /// Difference. Panics on descriptor mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Prime { p, r } => FieldScalar::Prime {
                p: *p,
                r: if *r == 0 { 0 } else { p - r },
            },
            FieldScalar::Rational(r) => FieldScalar::Rational(Box::new(-r.as_ref().clone())),
            FieldScalar::Function(f) => FieldScalar::Function(Box::new(Fraction {
                num: f.num.neg(),
                den: f.den.clone(),
            })),
        }
    }

    /// Product. Panics on descriptor mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        match (self, other) {
            (FieldScalar::Prime { p, r: r1 }, FieldScalar::Prime { r: r2, .. }) => {
                FieldScalar::Prime {
                    p: *p,
                    r: mulmod(*r1, *r2, *p),
                }
            }
            (FieldScalar::Rational(x), FieldScalar::Rational(y)) => {
                FieldScalar::Rational(Box::new(x.as_ref() * y.as_ref()))
            }
            (FieldScalar::Function(x), FieldScalar::Function(y)) => {
                // Cross-cancel before multiplying: for reduced operands the
                // cross-cancelled product is reduced again (a common prime
                // factor of it would have to divide an operand's own
                // numerator and denominator), and the intermediate
                // polynomials stay as small as possible.
                let g1 = x.num.gcd(&y.den);
                let g2 = y.num.gcd(&x.den);
                let (xn, yd) = if g1.is_constant() {
                    (x.num.clone(), y.den.clone())
                } else {
                    (
                        x.num.exact_div(&g1).expect("gcd divides"),
                        y.den.exact_div(&g1).expect("gcd divides"),
                    )
                };
                let (yn, xd) = if g2.is_constant() {
                    (y.num.clone(), x.den.clone())
                } else {
                    (
                        y.num.exact_div(&g2).expect("gcd divides"),
                        x.den.exact_div(&g2).expect("gcd divides"),
                    )
                };
                FieldScalar::Function(Box::new(Fraction::from_reduced(
                    xn.mul(&yn),
                    xd.mul(&yd),
                )))
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Prime { p, r } => FieldScalar::Prime {
                p: *p,
                // Fermat: r^(p−2) ≡ r^(−1) for r ≢ 0.
                r: powmod(*r, p - 2, *p),
            },
            FieldScalar::Rational(r) => FieldScalar::Rational(Box::new(r.recip())),
            // Swapping a reduced pair keeps it reduced.
            FieldScalar::Function(f) => FieldScalar::Function(Box::new(Fraction::from_reduced(
                f.den.clone(),
                f.num.clone(),
            ))),
        })
    }

    /// Quotient. Panics on descriptor mismatch; errors on zero divisor.
    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.assert_same(other);
        Ok(self.mul(&other.inv()?))
    }

    /// `self` raised to a nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = FieldScalar::one(self.descriptor());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Decide squareness where the backend supports it.
    ///
    /// * `F_p`: Euler's criterion `x^((p−1)/2)`.
    /// * `Q`: sign test plus perfect-square tests on the reduced numerator
    ///   and denominator.
    /// * Function fields: decidable exactly when both the numerator and the
    ///   denominator are single terms — `c·α^iβ^jγ^k / c'·α^lβ^mγ^n` is a
    ///   square iff `c/c'` is a square in the base field and the combined
    ///   exponents `i+l, j+m, k+n` are all even (clear denominators by the
    ///   square `den²`). Anything with more terms is
    ///   [`SquareStatus::Unsupported`].
    pub fn is_square(&self) -> SquareStatus {
        match self {
            FieldScalar::Prime { p, r } => {
                if *r == 0 || powmod(*r, (p - 1) / 2, *p) == 1 {
                    SquareStatus::Yes
                } else {
                    SquareStatus::No
                }
            }
            FieldScalar::Rational(x) => {
                if x.is_negative() {
                    return SquareStatus::No;
                }
                let n = x.numer().magnitude();
                let d = x.denom().magnitude();
                if n.sqrt().pow(2) == *n && d.sqrt().pow(2) == *d {
                    SquareStatus::Yes
                } else {
                    SquareStatus::No
                }
            }
            FieldScalar::Function(f) => {
                if self.is_zero() {
                    return SquareStatus::Yes;
                }
                if f.num.term_count() != 1 || f.den.term_count() != 1 {
                    return SquareStatus::Unsupported;
                }
                let (ne, nc) = f.num.leading_term().expect("nonzero");
                let (de, dc) = f.den.leading_term().expect("nonzero");
                let exponents_even = ne
                    .iter()
                    .zip(de.iter())
                    .all(|(a, b)| (a + b) % 2 == 0);
                match nc.div(dc).expect("denominator term nonzero").is_square() {
                    SquareStatus::Yes if exponents_even => SquareStatus::Yes,
                    SquareStatus::Unsupported => SquareStatus::Unsupported,
                    _ => SquareStatus::No,
                }
            }
        }
    }

    /// A square root with a deterministic representative: the smaller residue
    /// over `F_p`, the positive root over `Q`. Over function fields the root
    /// exists exactly where [`FieldScalar::is_square`] is decidably `Yes`
    /// (monomial fractions), with representative `√(num·den)/den`; everything
    /// undecidable is [`FieldError::SqrtUnsupported`].
    pub fn sqrt(&self) -> Result<Self, FieldError> {
        match self {
            FieldScalar::Prime { p, r } => match sqrt_mod_p(*r, *p) {
                Some(root) => Ok(FieldScalar::Prime { p: *p, r: root }),
                None => Err(FieldError::NotASquare),
            },
            FieldScalar::Rational(x) => {
                if self.is_square() != SquareStatus::Yes {
                    return Err(FieldError::NotASquare);
                }
                let n = BigInt::from_biguint(Sign::Plus, x.numer().magnitude().sqrt());
                let d = BigInt::from_biguint(Sign::Plus, x.denom().magnitude().sqrt());
                Ok(FieldScalar::Rational(Box::new(BigRational::new(n, d))))
            }
            FieldScalar::Function(f) => match self.is_square() {
                SquareStatus::Unsupported => Err(FieldError::SqrtUnsupported),
                SquareStatus::No => Err(FieldError::NotASquare),
                SquareStatus::Yes => {
                    if self.is_zero() {
                        return Ok(self.clone());
                    }
                    // num and den are single terms whose combined exponents
                    // are even and whose combined coefficient is a base-field
                    // square, so √(num/den) = √(num·den)/den is again a
                    // monomial fraction.
                    let (ne, nc) = f.num.leading_term().expect("nonzero");
                    let (de, dc) = f.den.leading_term().expect("denominator nonzero");
                    let base = f.num.base;
                    let mono = Mono {
                        e: [
                            (ne[0] + de[0]) / 2,
                            (ne[1] + de[1]) / 2,
                            (ne[2] + de[2]) / 2,
                        ],
                    };
                    let coeff = nc.mul(dc).sqrt()?;
                    let mut root = Poly::zero(base);
                    root.terms.insert(mono, coeff);
                    Ok(FieldScalar::Function(Box::new(Fraction::new(
                        root,
                        f.den.clone(),
                    ))))
                }
            },
        }
    }

    /// Evaluate a function-field scalar at a point of its base field.
    ///
    /// Errors with [`FieldError::DivisionByZero`] when the denominator
    /// vanishes at the point, and [`FieldError::NoIndeterminates`] when the
    /// scalar is not a function-field element.
    pub fn eval_at(&self, point: &[FieldScalar; 3]) -> Result<FieldScalar, FieldError> {
        let f = self.function_parts().ok_or(FieldError::NoIndeterminates)?;
        let den = f.den.eval(point);
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        f.num.eval(point).div(&den)
    }

    /// A string form stable under round-tripping through [`FieldScalar::parse`].
    ///
    /// The representation is canonical over every backend — function-field
    /// fractions are kept in lowest terms with a canonical denominator head —
    /// so equal scalars produce equal strings and the string is usable as a
    /// hash key.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    /// Parse the text format: integers, fractions like `9/4`, and polynomial
    /// expressions in `a`, `b`, `c` such as `(a^2*b - 1)/(c)`.
    ///
    /// The grammar has `+`/`-` below `*`/`/` below `^`, all left-associative,
    /// with unary minus and parentheses; it is evaluated directly in `d`, so
    /// any syntactically valid expression whose divisions succeed parses.
    pub fn parse(d: FieldDescriptor, text: &str) -> Result<Self, FieldError> {
        let toks = tokenize(text)?;
        let mut parser = Parser {
            toks: &toks,
            pos: 0,
            field: d,
        };
        let v = parser.expr()?;
        if parser.pos != parser.toks.len() {
            return Err(FieldError::Parse(format!(
                "unexpected trailing input at token {}",
                parser.pos
            )));
        }
        Ok(v)
    }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.descriptor() != other.descriptor() {
            return false;
        }
        match (self, other) {
            (FieldScalar::Prime { r: r1, .. }, FieldScalar::Prime { r: r2, .. }) => r1 == r2,
            (FieldScalar::Rational(x), FieldScalar::Rational(y)) => x == y,
            (FieldScalar::Function(x), FieldScalar::Function(y)) => {
                // Cross-multiplication: correct independently of whether the
                // two sides happen to share a representation.
                x.num.mul(&y.den) == y.num.mul(&x.den)
            }
            _ => unreachable!(),
        }
    }
}

impl Eq for FieldScalar {}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Prime { r, .. } => write!(f, "{r}"),
            FieldScalar::Rational(x) => write!(f, "{x}"),
            FieldScalar::Function(fr) => {
                if fr.den.is_one() {
                    write!(f, "{}", fr.num)
                } else {
                    write!(f, "({})/({})", fr.num, fr.den)
                }
            }
        }
    }
}

impl Poly {
    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }
}

// ---------------------------------------------------------------------------
// The checked arithmetic front door
// ---------------------------------------------------------------------------

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    /// Binary sum.
    Add,
    /// Binary difference.
    Sub,
    /// Binary product.
    Mul,
    /// Binary quotient.
    Div,
    /// Unary additive inverse.
    Neg,
    /// Unary multiplicative inverse.
    Inv,
}

/// Checked field arithmetic: validates descriptors and divisor before
/// delegating to the scalar methods.
///
/// Binary operations need `y`; `Neg`/`Inv` ignore it.
pub fn field_arith(
    op: ArithOp,
    x: &FieldScalar,
    y: Option<&FieldScalar>,
) -> Result<FieldScalar, FieldError> {
    match op {
        ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Div => {
            let y = y.ok_or_else(|| {
                FieldError::Parse("binary operation needs a second operand".into())
            })?;
            if x.descriptor() != y.descriptor() {
                return Err(FieldError::DescriptorMismatch);
            }
            match op {
                ArithOp::Add => Ok(x.add(y)),
                ArithOp::Sub => Ok(x.sub(y)),
                ArithOp::Mul => Ok(x.mul(y)),
                ArithOp::Div => x.div(y),
                _ => unreachable!(),
            }
        }
        ArithOp::Neg => Ok(x.neg()),
        ArithOp::Inv => x.inv(),
    }
}

/// All elements of a finite field in residue order `0, 1, …, p−1`.
pub fn enumerate_field(d: FieldDescriptor) -> Result<Vec<FieldScalar>, FieldError> {
    match d {
        FieldDescriptor::Prime(p) => Ok((0..p).map(|r| FieldScalar::Prime { p, r }).collect()),
        _ => Err(FieldError::InfiniteField),
    }
}

// ---------------------------------------------------------------------------
// Tokenizer and recursive-descent parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, FieldError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let n = digits
                    .parse::<BigUint>()
                    .map_err(|e| FieldError::Parse(format!("bad integer {digits:?}: {e}")))?;
                toks.push(Tok::Int(n));
            }
            'a' => {
                toks.push(Tok::Var(0));
                i += 1;
            }
            'b' => {
                toks.push(Tok::Var(1));
                i += 1;
            }
            'c' => {
                toks.push(Tok::Var(2));
                i += 1;
            }
            other => {
                return Err(FieldError::Parse(format!(
                    "unexpected character {other:?} at byte {i}"
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    field: FieldDescriptor,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<FieldScalar, FieldError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldScalar, FieldError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<FieldScalar, FieldError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            match self.bump().cloned() {
                Some(Tok::Int(n)) => {
                    let e = n.to_u64().filter(|&e| e <= 10_000).ok_or_else(|| {
                        FieldError::Parse("exponent out of supported range".into())
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(FieldError::Parse("expected integer exponent after ^".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<FieldScalar, FieldError> {
        match self.bump().cloned() {
            Some(Tok::Int(n)) => Ok(scalar_from_biguint(self.field, &n)),
            Some(Tok::Var(i)) => FieldScalar::var(self.field, i).map_err(|e| match e {
                FieldError::NoIndeterminates => FieldError::Parse(format!(
                    "indeterminate {:?} is only meaningful over a function field",
                    ["a", "b", "c"][i]
                )),
                other => other,
            }),
            Some(Tok::Minus) => {
                // Unary minus inside a term, e.g. `2*-3` is rejected but
                // `(-3)` arrives here via the parenthesized expression path.
                Err(FieldError::Parse("unexpected '-'".into()))
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(FieldError::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(FieldError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn scalar_from_biguint(d: FieldDescriptor, n: &BigUint) -> FieldScalar {
    match d {
        FieldDescriptor::Prime(p) => FieldScalar::Prime {
            p,
            r: (n % BigUint::from(p)).to_u64().expect("residue fits"),
        },
        FieldDescriptor::Rational => FieldScalar::Rational(Box::new(BigRational::from(
            BigInt::from_biguint(Sign::Plus, n.clone()),
        ))),
        FieldDescriptor::Function(base) => {
            let c = scalar_from_biguint(base.descriptor(), n);
            FieldScalar::Function(Box::new(Fraction {
                num: Poly::constant(c),
                den: Poly::one(base),
            }))
        }
    }
}
