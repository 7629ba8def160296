//! Front profile on a uniform grid, its residual and tail rates.

use degenerate_fronts::profile::{compute_profile, profile_residual, sup_norm, GridSpec, ProfileOpts, ShootOpts};
use degenerate_fronts::Model;

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let c = 1.0;
    for h in [0.02, 0.01] {
        let grid = GridSpec::auto(&m, c, h)?;
        let p = compute_profile(&m, c, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
        let res = sup_norm(&profile_residual(&p, &m));
        println!(
            "h = {h}: N = {}, [{:.0}, {:.0}], residual {res:.3e}, rates ({:.6}, {:.6})",
            p.len(),
            -p.x_minus(),
            p.x_plus(),
            p.rate_minus,
            p.rate_plus
        );
    }
    let grid = GridSpec::auto(&m, c, 0.5)?;
    let p = compute_profile(&m, c, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
    for i in (0..p.len()).step_by(8) {
        println!("{:8.2} {:.6e} {:.6e}", p.x(i), p.phi[i], p.phi_x[i]);
    }
    Ok(())
}
