//! Classify 2-dimensional subspaces of the imaginary part of a Cayley
//! algebra into the seven types (Q, U, Dn, Ds, M, J, Z) and inspect the
//! subalgebra each plane generates.
//!
//! The scan finds one representative plane of each type over `F_3`, then
//! shows the split-basis showcase pairs and a function-field plane whose
//! square class the crate honestly refuses to guess.
//!
//! Run with: `cargo run --release --example classify_planes`

use cayleyq::algebra::make_general_cayley;
use cayleyq::classify::{classify_plane, subalgebra_of_plane};
use cayleyq::design::PLANE_ORDER;
use cayleyq::field::{FieldDescriptor, FieldScalar};
use cayleyq::linalg::{pivot_patterns, subspaces_with_pivots, Subspace};
use cayleyq::run::{classify_detail, Command, RunConfig};
use std::collections::BTreeMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldDescriptor::prime(3)?;
    let m1 = FieldScalar::from_i64(f3, -1);
    let alg = make_general_cayley(f3, &m1, &m1, &m1)?;

    // Scan the Grassmannian of planes until every type has a representative.
    let mut examples: BTreeMap<&'static str, Subspace> = BTreeMap::new();
    'scan: for pattern in pivot_patterns(7, 2) {
        for plane in subspaces_with_pivots(7, &pattern, f3)? {
            let t = classify_plane(&alg, &plane)?;
            examples.entry(t.tag()).or_insert(plane);
            if examples.len() == PLANE_ORDER.len() {
                break 'scan;
            }
        }
    }

    println!("one representative plane of each type over F_3, parameters (-1, -1, -1):\n");
    println!(
        "{:<5} {:<26} {:>11} {:>12} {:>12}",
        "type", "basis of U (im coords)", "dim <U>", "kind", "radical dim"
    );
    for t in PLANE_ORDER {
        let plane = &examples[t.tag()];
        let sub = subalgebra_of_plane(&alg, plane)?;
        let basis: Vec<String> = (0..plane.dim())
            .map(|i| {
                let row: Vec<String> =
                    plane.basis_row(i).iter().map(|c| c.to_string()).collect();
                format!("({})", row.join(","))
            })
            .collect();
        println!(
            "{:<5} {:<26} {:>11} {:>12} {:>12}",
            t.tag(),
            basis.join(" "),
            sub.dim(),
            sub.kind().tag(),
            sub.radical().dim()
        );
    }

    // The split-basis showcase pairs, via the same entry point the CLI uses.
    println!("\nsplit-basis showcase pairs (split Cayley algebra over Q):");
    for (u, v) in [("q1", "r2"), ("q1", "q2")] {
        let mut cfg = RunConfig::new(Command::Classify);
        cfg.split = true;
        cfg.u = Some(u.into());
        cfg.v = Some(v.into());
        let d = classify_detail(&cfg)?;
        println!("  span({u}, {v}) -> {}", d.summary);
    }

    // Over a function field, squareness of a multi-term discriminant is
    // undecidable; the classifier refuses to guess rather than misreport.
    let ff = FieldDescriptor::function_over_prime(5)?;
    let a = FieldScalar::var(ff, 0)?;
    let b = FieldScalar::var(ff, 1)?;
    let c = FieldScalar::var(ff, 2)?;
    let sym = make_general_cayley(ff, &a, &b, &c)?;

    let decidable = Subspace::span(
        ff,
        7,
        &[
            sym.basis_element(1).im_coords(), // e0, square a
            sym.basis_element(2).im_coords(), // e1, square b
        ],
    )?;
    println!("\nover F_5(a, b, c) with parameters (a, b, c):");
    println!(
        "  span(e0, e1): type {}   (nilpotency needs -b/a a square; a monomial, decidably not)",
        classify_plane(&sym, &decidable)?.tag()
    );

    let undecidable = Subspace::span(
        ff,
        7,
        &[
            sym.basis_element(1).add(&sym.basis_element(2)).im_coords(), // e0 + e1
            sym.basis_element(3).im_coords(),                            // e2
        ],
    )?;
    match classify_plane(&sym, &undecidable) {
        Ok(t) => println!("  span(e0 + e1, e2): type {}", t.tag()),
        Err(e) => println!("  span(e0 + e1, e2): refused — {e}"),
    }
    Ok(())
}
