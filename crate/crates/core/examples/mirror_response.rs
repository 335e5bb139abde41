// Reflection and transmission of a single point scatterer, and the
// transfer-matrix invariants that hold for every polarizability.
//
//     cargo run --example mirror_response

use cavity_cascade::scattering::{mirror_matrix, reflectivity, solve_boundary, transmissivity, BoundaryDrive, OpticalStack, StackElement};
use cavity_cascade::Result;

pub fn run() -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    println!("{:>6} {:>12} {:>12} {:>10}", "zeta", "|r|^2", "|t|^2", "det M");
    for zeta in [0.5, 1.0, 2.0, 5.0, 20.0] {
        let r = reflectivity(zeta)?;
        let t = transmissivity(zeta)?;
        let det = mirror_matrix(zeta)?.determinant();
        println!("{zeta:>6} {:>12.9} {:>12.9} {:>10.3}", r.norm_sqr(), t.norm_sqr(), det.re);
        rows.push((zeta, r.norm_sqr()));
    }

    // Driving a bare mirror from the left.
    let mirror = OpticalStack::new(vec![StackElement::Mirror { zeta: 1.0 }])?;
    let sol = solve_boundary(&mirror, &BoundaryDrive::from_left(1.0)?)?;
    println!("zeta = 1: reflected {}, transmitted {}", sol.b_out, sol.c_out);
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
