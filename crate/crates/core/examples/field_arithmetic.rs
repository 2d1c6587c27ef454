// Arithmetic in F_{p^2} and root finding with multiplicities.

use supersingular_hecke::arith::{make_fp2, roots_with_multiplicity, FiniteField, PolyRing};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_fp2(11)?;
    let u = f.gen();
    println!("F_121 = F_11[u]/(u^2 - {})", f.nonresidue());
    println!("u * u = {}", f.mul(&u, &u));
    println!("frobenius(u) = {}", f.frobenius(&u));
    println!("1 / (3 + u) = {}", f.inv(&f.elem(3, 1))?);

    let ring = PolyRing::new(&f);
    // (Y - 3)^2 (Y - u) (Y^2 - 2 u)
    let y2_minus_2u = ring.from_coeffs(vec![f.neg(&f.mul(&f.from_u64(2), &u)), f.zero(), f.one()]);
    let poly = ring.mul(&ring.from_roots(&[f.from_u64(3), f.from_u64(3), u]), &y2_minus_2u);
    for (root, mult) in roots_with_multiplicity(&f, &poly)? {
        println!("root {root} with multiplicity {mult}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("field arithmetic example");
}
