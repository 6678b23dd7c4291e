//! Normalized Hermite polynomials: point values, and a Monte-Carlo check that
//! products over a small grid of Gaussian cells are orthonormal.
//!
//! cargo run --release --example hermite_basis

use mslr::lowdeg::{hermite_eval, hermite_orthonormality_check, hermite_orthonormality_grid};

fn main() {
    for order in 0..5 {
        let vals: Vec<String> = [-1.0, 0.0, 0.5, 2.0].iter().map(|x| format!("{:+.4}", hermite_eval(order, *x))).collect();
        println!("H_{order} at (-1, 0, 0.5, 2): {}", vals.join(" "));
    }
    let one = hermite_orthonormality_check(4, 200_000, 1);
    println!("1x1 grid, orders <= 4: max |E - delta| = {:.4}, max z = {:.2}", one.max_abs_deviation, one.max_z);
    let grid = hermite_orthonormality_grid(2, 1, 2, 200_000, 2);
    println!("{} multi-indices on a 2x(1+1) grid: max z = {:.2}, within 5 SE: {}", grid.indices.len(), grid.max_z, grid.within(5.0));
}
