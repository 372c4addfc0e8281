//! Forward-reflected-Douglas–Rachford uses different resolvent parameters for
//! `A` (λ) and `C` (γ). With `γ = 4λ` the largest admissible `λ` is
//! `0.9·γ/(1 + 2Lγ)`, which is much longer than BFoRB's `1/(8L)`.
//!
//! ```bash
//! cargo run --release --example frdr
//! ```

use splitkit::problems::make_affine_instance;
use splitkit::solvers::{max_stepsize, run};
use splitkit::{Method, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let inst = make_affine_instance(50, 1, 0.8)?;
    let problem = inst.problem()?;
    let l = problem.lipschitz();

    // λ = 0.9·γ/(1 + 2Lγ) with γ = 4λ.
    let lambda = 2.6 / (8.0 * l);
    let gamma = 4.0 * lambda;
    let bound = max_stepsize(Method::Frdr, l, Some(gamma))?.value().unwrap();
    println!("L = {l:.4}, gamma = {gamma:.4}, lambda = {lambda:.4} (bound {bound:.4})");

    let frdr = run(
        &problem,
        SolverConfig::new(Method::Frdr, lambda, Vector::zeros(50)).gamma(gamma).max_iters(100_000).tol(1e-12),
    )?;
    let bforb = run(
        &problem,
        SolverConfig::new(Method::Bforb, 0.9 / (8.0 * l), Vector::zeros(50)).max_iters(100_000).tol(1e-12),
    )?;
    for t in [&frdr, &bforb] {
        println!(
            "{:>6}: {} after {} iterations, |x - x*| = {:.2e}",
            t.method.name(),
            t.status,
            t.iterations(),
            t.final_distance().unwrap()
        );
    }
    println!("|x_frdr - x_bforb| = {:.2e}", (&frdr.solution - &bforb.solution).norm());
    Ok(())
}
