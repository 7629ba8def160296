//! Regularisation sweep on a coarse grid.

use degenerate_fronts::profile::{compute_profile, GridSpec, ProfileOpts, ShootOpts};
use degenerate_fronts::spectra::regularization_sweep;
use degenerate_fronts::Model;

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let grid = GridSpec::new(0.1, 30.0, 20.0)?;
    let p = compute_profile(&m, 1.0, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
    let t = regularization_sweep(&p, &m, 0.0, &[1e-1, 1e-2, 1e-3, 1e-4], 10)?;
    for r in &t.rows {
        println!(
            "eps {:7.0e}: drift {:.3e}, translation drift {:.3e}",
            r.eps, r.drift, r.translation_drift
        );
    }
    println!("slope {:?}", t.slope);
    Ok(())
}
