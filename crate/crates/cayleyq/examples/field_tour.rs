//! Tour of the exact coefficient fields: an odd prime field `F_p`, the big
//! rationals `Q`, and the trivariate rational-function fields `F_p(a, b, c)`
//! and `Q(a, b, c)`.
//!
//! Everything is exact — fractions of multivariate polynomials are kept fully
//! reduced, square-ness is decided only where it is genuinely decidable, and
//! parsing round-trips through the canonical string form.
//!
//! Run with: `cargo run --release --example field_tour`

use cayleyq::field::{FieldDescriptor, FieldScalar, SquareStatus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // --- F_7 ----------------------------------------------------------------
    let f7 = FieldDescriptor::prime(7)?;
    let two = FieldScalar::from_i64(f7, 2);
    let five = FieldScalar::from_i64(f7, 5);
    println!("F_7:");
    println!("  2 + 5       = {}", two.add(&five));
    println!("  2 / 5       = {}   (5 * 6 = 30 = 2 mod 7)", two.div(&five)?);
    println!("  2 square?     {:?}, sqrt = {}", two.is_square(), two.sqrt()?);
    println!("  3 square?     {:?}", FieldScalar::from_i64(f7, 3).is_square());
    println!("  2^(-1)      = {}", two.inv()?);

    // --- Q -------------------------------------------------------------------
    let q = FieldDescriptor::rational();
    let third = FieldScalar::parse(q, "1/3")?;
    println!("\nQ (arbitrary-precision rationals):");
    println!("  (1/3)^2 - 2/9 = {}", third.mul(&third).sub(&FieldScalar::parse(q, "2/9")?));
    let big = FieldScalar::parse(q, "10000000000000000000000000000001/7")?;
    println!("  big * 7       = {}", big.mul(&FieldScalar::from_i64(q, 7)));
    let sq = FieldScalar::parse(q, "289/1156")?;
    println!("  289/1156 square? {:?}, sqrt = {}", sq.is_square(), sq.sqrt()?);
    println!("  2 square?        {:?}", FieldScalar::from_i64(q, 2).is_square());

    // --- F_5(a, b, c) ----------------------------------------------------------
    let ff = FieldDescriptor::function_over_prime(5)?;
    let a = FieldScalar::var(ff, 0)?;
    let b = FieldScalar::var(ff, 1)?;
    println!("\nF_5(a, b, c) (rational functions, always fully reduced):");
    let ratio = a.mul(&a).sub(&b.mul(&b)).div(&a.sub(&b))?;
    println!("  (a^2 - b^2)/(a - b) = {}", ratio);
    let parsed = FieldScalar::parse(ff, "(a^2*b - 1)/(c)")?;
    println!("  parse/print round-trip: {}", parsed);
    let mono = a.mul(&a).mul(&b).mul(&b);
    println!("  a^2*b^2 square? {:?}, sqrt = {}", mono.is_square(), mono.sqrt()?);
    let multi = a.add(&b);
    println!(
        "  a + b square?   {:?}   (multi-term: honestly undecided, never guessed)",
        multi.is_square()
    );
    assert_eq!(multi.is_square(), SquareStatus::Unsupported);

    // --- Q(a, b, c) -------------------------------------------------------------
    let qf = FieldDescriptor::function_over_rationals();
    let a = FieldScalar::var(qf, 0)?;
    let half = FieldScalar::parse(qf, "1/2")?;
    let s = a.add(&half);
    println!("\nQ(a, b, c):");
    println!("  (a + 1/2)^2 = {}", s.mul(&s));
    let point = [
        FieldScalar::parse(q, "3/2")?,
        FieldScalar::one(q),
        FieldScalar::one(q),
    ];
    println!("  evaluated at (a, b, c) = (3/2, 1, 1): {}", s.mul(&s).eval_at(&point)?);
    Ok(())
}
