//! Build an 8-dimensional Cayley algebra two ways and print its
//! multiplication table: once from structure parameters via iterated
//! doubling (basis `1, e0..e6`), and once as the split algebra in its
//! idempotent basis (`p1, p2, q1..q3, r1..r3`).
//!
//! Also demonstrates the involution, trace, norm, and the failure of
//! associativity that makes the 8-dimensional stage special.
//!
//! Run with: `cargo run --release --example multiplication_tables`

use cayleyq::algebra::{make_general_cayley, make_split_cayley, Algebra};
use cayleyq::field::{FieldDescriptor, FieldScalar};

fn print_table(alg: &Algebra) {
    let names = alg.basis_names();
    let width = names.iter().map(|n| n.len()).max().unwrap_or(2).max(6);
    print!("{:>w$} |", "*", w = width);
    for n in names {
        print!(" {n:>w$}", w = width);
    }
    println!();
    println!("{}", "-".repeat((width + 1) * (names.len() + 1) + 2));
    for i in 0..alg.dim() {
        print!("{:>w$} |", names[i], w = width);
        for j in 0..alg.dim() {
            let prod = alg.basis_element(i).mul(&alg.basis_element(j));
            print!(" {:>w$}", prod.to_string(), w = width);
        }
        println!();
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldDescriptor::prime(3)?;
    let m1 = FieldScalar::from_i64(f3, -1);
    let alg = make_general_cayley(f3, &m1, &m1, &m1)?;
    println!("Cayley algebra over F_3 with parameters (-1, -1, -1):");
    println!("(e0^2 = a, e1^2 = b, e2^2 = c; e3 = e0e1, e4 = e1e2, e5 = e0(e1e2), e6 = e0e2)\n");
    print_table(&alg);

    // The involution is an anti-automorphism fixing 1 and negating e0..e6.
    let x = alg.parse_element("e0 + 2*e3")?;
    let y = alg.parse_element("e1 - e4")?;
    println!("\nx = {x},  y = {y}");
    println!("conj(x)      = {}", x.conj());
    println!("tau(x)       = {}   (scalar part of x)", x.tau());
    println!("n(x) = x*x   = {}   (the norm, a scalar)", x.norm());
    println!("conj(xy)     = {}", x.mul(&y).conj());
    println!("conj(y)conj(x) = {}", y.conj().mul(&x.conj()));

    // Associativity fails in dimension 8: the associator (xy)z - x(yz).
    let e0 = alg.basis_element(1);
    let e1 = alg.basis_element(2);
    let e2 = alg.basis_element(3);
    println!("\nassociator(e0, e1, e2) = {}   (nonzero: the algebra is not associative)",
        e0.associator(&e1, &e2));

    // The split algebra over the rationals, in the idempotent basis.
    let split = make_split_cayley(FieldDescriptor::rational());
    println!("\nSplit Cayley algebra over Q, idempotent basis (p1 + p2 = 1):\n");
    print_table(&split);

    let p1 = split.parse_element("p1")?;
    let q1 = split.parse_element("q1")?;
    println!("\np1 * p1 = {}   (idempotent)", p1.mul(&p1));
    println!("q1 * q1 = {}   (q1 is nilpotent)", q1.mul(&q1));
    println!("n(q1)   = {}   (isotropic: the split algebra has zero divisors)", q1.norm());
    Ok(())
}
