//! Decay of the right tail against the two candidate regimes, plus the
//! integrability checks on the transformed potential.

use degenerate_fronts::asymptotics::{coppel_check, f_potential, right_window, tail_audit};
use degenerate_fronts::profile::{compute_profile, GridSpec, ProfileOpts, ShootOpts};
use degenerate_fronts::{Complex64, Model};

fn main() -> degenerate_fronts::Result<()> {
    let m = Model::linear_quadratic(1.0, 0.0);
    let grid = GridSpec::new(0.01, 40.0, 40.0)?;
    let p = compute_profile(&m, 1.0, &grid, &ShootOpts::default(), &ProfileOpts::default())?;
    let audit = tail_audit(&p, &m, 0.0, None)?;
    println!("left tail rate {:.6}", audit.left.fitted_rate);
    for s in &audit.right {
        println!(
            "{:>6}: rate {:.5}, r2 {:.6}, envelope r2 {:.3}, regime {:?}",
            s.name, s.report.fitted_rate, s.report.r_squared, s.envelope_r2, s.regime
        );
    }
    let f: Vec<f64> = f_potential(&p, &m, Complex64::new(0.0, 0.0))?
        .iter()
        .map(|z| z.re)
        .collect();
    let (_, r1) = right_window(&p);
    let (i0, i1) = (p.index_of(5.0), r1.max(p.index_of(5.0) + 10));
    let xs: Vec<f64> = (i0..=i1).map(|i| p.x(i)).collect();
    let rep = coppel_check(&xs, &f[i0..=i1], 2.0)?;
    println!(
        "integral of 1/sqrt(F) from 5: {:.6} (tail bound {:.2e})",
        rep.total, rep.tail_bound
    );
    Ok(())
}
