//! Sweep the stepsize as a multiple of each method's guaranteed bound.
//!
//! The bounds are sufficient, not necessary: on these instances both methods
//! keep converging well past 1.0, and the point where they break down is
//! instance dependent. Runs are independent, so the grid executes in parallel.
//!
//! ```bash
//! cargo run --release --example stepsize_sweep
//! ```

use rayon::prelude::*;
use splitkit::problems::make_affine_instance;
use splitkit::solvers::{max_stepsize, run};
use splitkit::{Method, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let problem = make_affine_instance(30, 4, 0.8)?.problem()?;
    let l = problem.lipschitz();
    let fractions = [0.25, 0.5, 0.9, 2.0, 4.0, 8.0, 16.0, 32.0];
    let jobs: Vec<(Method, f64)> = [Method::Bforb, Method::Brfob]
        .into_iter()
        .flat_map(|m| fractions.iter().map(move |&f| (m, f)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(method, f)| {
            let bound = max_stepsize(method, l, None)?.value().unwrap();
            let cfg = SolverConfig::new(method, f * bound, Vector::zeros(30)).max_iters(20_000).enforce_bound(false);
            Ok((method, f, run(&problem, cfg)?))
        })
        .collect::<splitkit::Result<Vec<_>>>()?;

    println!("{:>6} {:>9} {:>10} {:>6}", "method", "fraction", "status", "iters");
    for (method, f, t) in rows {
        println!("{:>6} {f:>9.2} {:>10} {:>6}", method.name(), t.status, t.iterations());
    }
    Ok(())
}
