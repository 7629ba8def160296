//! Discrete spectrum with and without the exponential weight.

use degenerate_fronts::operators::weight_plan;
use degenerate_fronts::profile::{compute_profile, GridSpec, ProfileOpts, ShootOpts};
use degenerate_fronts::spectra::{spectrum_report, TOL_STAB};
use degenerate_fronts::Model;

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let c = 1.0;
    let grid = GridSpec::new(0.08, 40.0, 24.0)?;
    let p = compute_profile(&m, c, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
    let a_rec = weight_plan(&m, c, 1.0 / 2f64.sqrt())?.recommended_a.unwrap_or(0.0);
    for a in [0.0, a_rec] {
        let r = spectrum_report(&p, &m, 0.0, a, TOL_STAB)?;
        println!("a = {a:.4}: N = {}, verdict {:?}", r.n, r.verdict);
        println!("  border bound       {:.6}", r.border_bound);
        if let Some(z) = r.rightmost_any {
            println!("  rightmost          {z:.6}");
        }
        if let Some(z) = r.rightmost_delocalized {
            println!("  rightmost extended {z:.6}");
        }
        println!("  localized          {}", r.localized().count());
    }
    Ok(())
}
