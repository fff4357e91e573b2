//! Heat polynomials v_n, their associated functions w_n, and the derivative
//! and ratio identities relating consecutive degrees.

use burgers_fpt::heat_polynomials::{assoc_w, check_poly_identities, heat_poly_v};

fn main() {
    let (x, t) = (1.3, 0.7);
    println!("{:>3} {:>16} {:>16}", "n", "v_n(x,t)", "w_n(x,t)");
    for n in 0..=8 {
        println!(
            "{n:>3} {:>16.8} {:>16.8}",
            heat_poly_v(n, x, t).unwrap(),
            assoc_w(n, x, t).unwrap()
        );
    }

    let points: Vec<(f64, f64)> = (0..40)
        .map(|i| (0.2 + 0.06 * i as f64, 0.3 + 0.05 * i as f64))
        .collect();
    let report = check_poly_identities(12, &points).unwrap();
    println!("\nidentity checks up to degree 12 on {} points:", points.len());
    println!("  d/dx v_n  = n v_(n-1)      : {:.3e}", report.max_v_derivative);
    println!("  d/dx w_n  = -w_(n+1)/2     : {:.3e}", report.max_w_derivative);
    println!("  ratio chain (v side)       : {:.3e}", report.max_hi_chain);
    println!("  ratio chain (w side)       : {:.3e}", report.max_hj_chain);
    assert!(report.max_violation() <= 1e-7);
}
