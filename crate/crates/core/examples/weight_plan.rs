//! Which exponential weights move the essential spectrum to the left.

use degenerate_fronts::operators::weight_plan;
use degenerate_fronts::profile::{estimate_c_star, ShootOpts};
use degenerate_fronts::Model;

fn main() -> degenerate_fronts::Result<()> {
    for (alpha, beta, c) in [(1.0, 0.0, 1.0), (1.0, 0.0, 0.72), (1.0, 0.1, 0.73), (1.0, 0.1, 2.0)] {
        let m = Model::linear_quadratic(alpha, beta);
        let c_star = estimate_c_star(&m, (0.1, 3.0), 1e-6, &ShootOpts::default())?;
        let plan = weight_plan(&m, c, c_star)?;
        match plan.recommended_a {
            Some(a) => println!(
                "alpha {alpha} beta {beta} c {c}: a in ({:.4}, {:.4}), use {a:.4}",
                plan.a_lower, plan.a_upper
            ),
            None => println!(
                "alpha {alpha} beta {beta} c {c}: no admissible weight (threshold {:.4})",
                plan.threshold
            ),
        }
    }
    Ok(())
}
