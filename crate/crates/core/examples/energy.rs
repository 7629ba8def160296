//! Energy identity, the potential `H` and the kernel check.

use degenerate_fronts::energy::{compute_h, energy_identity, kernel_simplicity, theta};
use degenerate_fronts::profile::{compute_profile, GridSpec, ProfileOpts, ShootOpts};
use degenerate_fronts::{Complex64, Model};

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let grid = GridSpec::new(0.02, 40.0, 24.0)?;
    let p = compute_profile(&m, 1.0, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
    let u: Vec<Complex64> = p.phi_x.iter().map(|&v| v.into()).collect();
    let r = energy_identity(&u, Complex64::new(0.0, 0.0), &p, &m, (-20.0, 20.0), 0.0)?;
    println!(
        "window {:?} (shrunk: {}), residual {:.2e}",
        r.window, r.shrunk, r.relative_residual
    );
    println!("kernel variation {:.2e}", kernel_simplicity(&u, &p)?);
    let th = theta(&p, &m, 0.0)?;
    let hh = compute_h(&p, &m);
    for x in [-20.0, -5.0, 0.0, 2.0, 4.0, 6.0] {
        let i = p.index_of(x);
        println!("x = {x:5.1}: theta = {:12.4e}, H = {:12.4e}", th[i], hh[i]);
    }
    Ok(())
}
