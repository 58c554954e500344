//! Enumerate the blocks at q = 3: the 3-dimensional imaginary parts of the
//! 4-dimensional associative subalgebras of the Cayley algebra over `F_3`.
//!
//! Every 2-dimensional subspace of the 7-dimensional imaginary space lies in
//! at least one block (the family is a q-analog of a (7, 3, 2) covering
//! design), no block can be removed, and — because a Cayley algebra over a
//! finite field always has zero divisors — the cover is never perfect.
//!
//! Run with: `cargo run --release --example enumerate_blocks`

use cayleyq::algebra::make_general_cayley;
use cayleyq::design::{coverage_audit, enumerate_blocks};
use cayleyq::field::{FieldDescriptor, FieldScalar};
use std::time::Instant;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldDescriptor::prime(3)?;
    let m1 = FieldScalar::from_i64(f3, -1);
    let alg = make_general_cayley(f3, &m1, &m1, &m1)?;

    let start = Instant::now();
    let blocks = enumerate_blocks(&alg)?;
    println!(
        "{} blocks over F_3 with parameters (-1, -1, -1)   [{} ms]",
        blocks.len(),
        start.elapsed().as_millis()
    );

    println!("\nfirst three blocks in canonical order (rows span im(H)):");
    for (key, _space) in blocks.iter().take(3) {
        println!("  {key}");
    }

    let start = Instant::now();
    let audit = coverage_audit(&blocks, &alg)?;
    println!("\ncoverage audit   [{} ms]", start.elapsed().as_millis());
    for (multiplicity, planes) in &audit.histogram {
        println!("  {planes} planes lie in exactly {multiplicity} block(s)");
    }
    println!("  inclusion-minimal: {}", audit.minimal);
    println!("  perfect cover (every plane in exactly one block): {}", audit.fano);
    Ok(())
}
