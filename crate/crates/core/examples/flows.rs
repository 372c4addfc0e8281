//! Continuous-time flows behind the splitting methods.
//!
//! For `B = I` the proximal point flow `ẋ = J_{λB}(x) − x` with `λ = 1` is
//! `ẋ = −x/2`, so explicit Euler should track `e^{−t/2}` with first-order
//! error. The Douglas–Rachford flow is then integrated on an affine instance
//! and compared against the FoRB iterates it discretises.
//!
//! ```bash
//! cargo run --release --example flows
//! ```

use nalgebra::dvector;
use splitkit::certificates::omega_residual;
use splitkit::dynamics::{discretization_gap, simulate_dr_flow, simulate_ppa, FlowParams};
use splitkit::problems::make_affine_instance;
use splitkit::solvers::run;
use splitkit::{Method, MonotoneOperator, ProblemTriple, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let scalar = ProblemTriple::new(MonotoneOperator::zero(1), MonotoneOperator::identity(1), MonotoneOperator::zero(1))?;
    let exact = (-2.5_f64).exp();
    let mut last = None;
    for h in [4e-3, 2e-3, 1e-3, 5e-4] {
        let flow = simulate_ppa(&scalar, &FlowParams::new(1.0, h, 5.0), &dvector![1.0])?;
        let err = (flow.terminal()[0] - exact).abs();
        let ratio = last.map_or(String::new(), |e: f64| format!("  ratio {:.3}", err / e));
        println!("ppa h = {h:.0e}: |x(5) - e^(-5/2)| = {err:.3e}{ratio}");
        last = Some(err);
    }

    let problem = make_affine_instance(10, 7, 0.8)?.problem()?;
    let flow = simulate_dr_flow(&problem, &FlowParams::new(0.1, 1e-2, 200.0), &Vector::zeros(10))?;
    println!(
        "dr flow on affine d=10: omega(z(200)) = {:.3e}",
        omega_residual(&problem, 0.1, flow.terminal())?
    );

    // FoRB with stepsize λ against the proximal point flow sampled at t = kλ.
    let lambda = 0.4;
    let flow = simulate_ppa(&scalar, &FlowParams::new(lambda, 0.01, 20.0), &dvector![1.0])?;
    let t = run(&scalar, SolverConfig::new(Method::Forb, lambda, dvector![1.0]).max_iters(50).tol(1e-300).record(true))?;
    for (k, gap) in discretization_gap(&flow, t.history.as_ref().unwrap(), 10)? {
        println!("k = {k:>2}: |x_k - x(k·lambda)| = {gap:.3e}");
    }
    Ok(())
}
