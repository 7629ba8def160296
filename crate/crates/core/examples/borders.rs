//! Border curves of the essential spectrum and the spatial Morse indices.

use degenerate_fronts::operators::{consistent_splitting_bound, dispersion_curve, k_grid, morse_index_report, Side};
use degenerate_fronts::{Complex64, Model};

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let c = 1.0;
    let k = k_grid(3.0, 7);
    for (a, eps) in [(0.0, 0.0), (1.309, 0.0), (1.309, 1e-2)] {
        println!(
            "a = {a}, eps = {eps}: rightmost Re = {:.5}",
            consistent_splitting_bound(&m, c, eps, a)
        );
        for side in [Side::Plus, Side::Minus] {
            let curve = dispersion_curve(&m, c, eps, a, side, &k);
            let pts: Vec<String> = curve.iter().map(|z| format!("{:.3}{:+.3}i", z.re, z.im)).collect();
            println!("  {:>5}: {}", side.as_str(), pts.join(" "));
        }
    }
    let r = morse_index_report(&m, c, 1e-2, 1.309, Complex64::new(0.5, 0.0))?;
    println!(
        "Morse indices at lambda = 0.5: {} unstable at +inf, {} stable at -inf",
        r.dim_u_plus, r.dim_s_minus
    );
    Ok(())
}
