//! Minimal speed by shooting, compared with the closed forms where known.

use degenerate_fronts::profile::{estimate_c_star, ShootOpts};
use degenerate_fronts::Model;

fn main() -> degenerate_fronts::Result<()> {
    for (alpha, beta) in [(1.0, 0.0), (2.0, 0.0), (1.0, 0.1), (1.0, 1.0)] {
        let m = Model::linear_quadratic(alpha, beta);
        let est = estimate_c_star(&m, (0.1, 3.0), 1e-5, &ShootOpts::default())?;
        let known = m.known_c_star().map_or("-".to_string(), |k| format!("{:.6}", k.value));
        println!("alpha = {alpha}, beta = {beta}: c* = {est:.6}  (closed form {known})");
    }
    Ok(())
}
