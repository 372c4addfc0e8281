//! Plugging user-defined operators into the solvers.
//!
//! `A = ∂(0.1‖·‖₁)`, `C` is the normal cone of the unit Euclidean ball
//! (resolvent: projection), and `B(x) = Rx + tanh(x) − b` mixes a rotation
//! with a monotone nonlinearity. `B` is 2-Lipschitz and is not cocoercive.
//!
//! ```bash
//! cargo run --release --example custom_operator
//! ```

use std::sync::Arc;

use nalgebra::dvector;
use splitkit::operator::{lipschitz_check, CustomOracles};
use splitkit::solvers::run;
use splitkit::{Method, MonotoneOperator, ProblemTriple, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let ball = MonotoneOperator::custom(
        2,
        CustomOracles {
            name: "unit-ball-cone".into(),
            forward: None,
            resolvent: Some(Arc::new(|_lambda, v: &Vector| v / v.norm().max(1.0))),
        },
        None,
    );
    let b = dvector![2.0, 1.0];
    let field = MonotoneOperator::custom(
        2,
        CustomOracles {
            name: "rotation-tanh".into(),
            forward: Some(Arc::new(move |x: &Vector| dvector![-x[1], x[0]] + x.map(f64::tanh) - &b)),
            resolvent: None,
        },
        Some(2.0),
    );
    println!("empirical Lipschitz ratio of B: {:.4} (declared 2)", lipschitz_check(&field, 2000, 1)?);

    let problem = ProblemTriple::new(MonotoneOperator::l1(2, 0.1)?, field, ball)?;
    let lambda = 0.9 / (8.0 * problem.lipschitz());
    for method in [Method::Bforb, Method::Brfob, Method::DavisYin] {
        let lam = if method == Method::Brfob { lambda * 8.0 / 22.0 } else { lambda };
        let t = run(&problem, SolverConfig::new(method, lam, Vector::zeros(2)).max_iters(100_000).enforce_bound(false))?;
        println!(
            "{method:>9}: {} after {:>5} iterations, x = ({:+.6}, {:+.6}), omega = {:.1e}",
            t.status,
            t.iterations(),
            t.solution[0],
            t.solution[1],
            t.final_residual().unwrap()
        );
    }
    Ok(())
}
