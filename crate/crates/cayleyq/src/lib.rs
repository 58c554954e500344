//! Exact Cayley–Dickson algebras and the subspace designs they carry.
//!
//! This crate builds the 1-, 2-, 4- and 8-dimensional algebras produced by
//! iterated Cayley–Dickson doubling over a pluggable exact field — an odd
//! prime field `F_p`, the rationals `Q`, or the rational function field
//! `K(a, b, c)` in three indeterminates — and studies the configuration of
//! their 4-dimensional associative subalgebras.
//!
//! Writing `O` for the 8-dimensional algebra and `im(O)` for its 7-dimensional
//! space of imaginary elements, the central object is the block set
//!
//! ```text
//! B = { im(H) : H a 4-dimensional associative subalgebra of O },
//! ```
//!
//! a family of 3-dimensional subspaces of `im(O)`. Over any base field of odd
//! characteristic this family is an inclusion-minimal q-analog of a covering
//! design with parameters (7, 3, 2): every 2-dimensional subspace of `im(O)`
//! lies in at least one block, and no proper subfamily still covers. When `O`
//! is a division algebra the cover is perfect — every 2-dimensional subspace
//! lies in *exactly one* block — which is the defining property of a q-analog
//! of the Fano plane.
//!
//! The crate provides three independent routes to `B` and checks them against
//! each other:
//!
//! 1. **Closure enumeration** ([`design::enumerate_blocks`]): classify every
//!    2-dimensional subspace of `im(O)` by its nilpotent lines and close the
//!    generating ones under multiplication.
//! 2. **Brute force** ([`design::enumerate_blocks_bruteforce`]): test every
//!    3-dimensional subspace of `im(O)` for a vanishing associator.
//! 3. **Plücker geometry** ([`wedge::blocks_via_plucker`]): embed 3-spaces
//!    into the 35-dimensional exterior cube and intersect with the common
//!    kernel of seven explicit linear functionals built from a classical Fano
//!    plane decorated with scalars.
//!
//! Everything is exact: no floating point appears anywhere in the crate.
//!
//! # Modules
//!
//! * [`field`] — the three coefficient fields, square roots, parsing.
//! * [`linalg`] — matrices, reduced row echelon form, canonical subspaces,
//!   Grassmannian enumeration over finite fields, wedge cubes and Plücker
//!   coordinates.
//! * [`algebra`] — Cayley–Dickson doubling, multiplication tables, involution,
//!   trace, norm, associator, and the split algebra in its idempotent basis.
//! * [`classify`] — the six types of 2-dimensional imaginary subspaces and
//!   the four types of 4-dimensional subalgebras; Jacobson radicals.
//! * [`design`] — block enumeration, covering/minimality audit, and the full
//!   set of incidence counting tables over `F_q`.
//! * [`wedge`] — the decorated Fano plane, the functionals `eta_v`, the
//!   associator map on the exterior cube, and the Plücker route to `B`.
//! * [`run`] — report types and the command entry points behind the `cayleyq`
//!   binary.
//!
//! # Runnable examples
//!
//! Each major capability has a self-contained example under `examples/`:
//!
//! ```text
//! cargo run --release --example field_tour          # the three exact fields
//! cargo run --release --example multiplication_tables
//! cargo run --release --example classify_planes     # Q/U/Dn/Ds/M/J/Z types
//! cargo run --release --example enumerate_blocks    # 11011 blocks at q = 3
//! cargo run --release --example counting_tables     # all incidence tables
//! cargo run --release --example plucker_crosscheck  # three routes, one set
//! cargo run --release --example division_sampling   # q-Fano planes over Q
//! cargo run --release --example fano_scaffold       # h/s/r decorations
//! ```

#![warn(missing_docs)]

pub mod algebra;
pub mod classify;
pub mod design;
pub mod field;
pub mod linalg;
pub mod run;
pub mod wedge;
