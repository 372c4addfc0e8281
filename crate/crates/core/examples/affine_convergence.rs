//! BFoRB and BRFoB on seeded affine instances at 90% of their stepsize bounds.
//!
//! ```bash
//! cargo run --release --example affine_convergence
//! ```

use splitkit::problems::{make_affine_instance, solve_affine_direct};
use splitkit::solvers::max_stepsize;
use splitkit::{Method, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    println!("{:>4} {:>8} {:>10} {:>10}", "seed", "method", "lambda", "iters");
    for seed in 1..=5 {
        let inst = make_affine_instance(50, seed, 0.8)?;
        let x_star = solve_affine_direct(&inst)?;
        let problem = inst.problem()?;
        let target = 1e-6 * (1.0 + x_star.norm());
        for method in [Method::Bforb, Method::Brfob] {
            let bound = max_stepsize(method, problem.lipschitz(), None)?.value().unwrap();
            let cfg = SolverConfig::new(method, 0.9 * bound, Vector::zeros(50)).max_iters(200_000);
            let trace = splitkit::solvers::run(&problem, cfg)?;
            let hit = trace.first_within(target).map(|k| k + 1);
            println!(
                "{seed:>4} {:>8} {:>10.4e} {:>10}",
                method.name(),
                trace.lambda,
                hit.map_or("-".to_string(), |k| k.to_string())
            );
        }
    }
    Ok(())
}
