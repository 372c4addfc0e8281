//! A regularised bilinear saddle point
//!
//! ```text
//! min_{‖x‖∞ ≤ R} max_{‖y‖∞ ≤ 1}  α‖x‖₁ + ⟨Kx, y⟩ − ⟨c, y⟩
//! ```
//!
//! split as `A = ∂(α‖·‖₁) × N_box`, `B = (Kᵀy, c − Kx)` and `C = N_{‖x‖∞≤R} × 0`.
//! `B` is skew, so it is Lipschitz but not cocoercive: BFoRB and BRFoB converge
//! while plain forward-backward stalls on the purely bilinear variant.
//!
//! ```bash
//! cargo run --release --example saddle_point
//! ```

use splitkit::certificates::omega_residual;
use splitkit::problems::make_saddle_instance;
use splitkit::solvers::run;
use splitkit::{Method, SolverConfig, Vector};

fn main() -> splitkit::Result<()> {
    let inst = make_saddle_instance(20, 30, 11, 0.5, 1.0)?;
    let problem = inst.problem();
    let l = inst.lipschitz();
    let budget = 1_000_000;
    println!("m = {}, n = {}, L = {l:.4}", inst.m(), inst.n());

    let mut blocks = Vec::new();
    for (method, lambda) in [(Method::Bforb, 0.9 / (8.0 * l)), (Method::Brfob, 0.9 / (22.0 * l))] {
        let t = run(problem, SolverConfig::new(method, lambda, Vector::zeros(inst.dim())).max_iters(budget).tol(1e-11))?;
        let z = t.final_state.z.clone();
        println!(
            "{method}: {} after {} iterations, omega = {:.2e}",
            t.status,
            t.iterations(),
            omega_residual(problem, lambda, &z)?
        );
        blocks.push(inst.x_block(&t.solution));
    }
    println!("x-block gap = {:.2e}", (&blocks[0] - &blocks[1]).norm());

    let bilinear = inst.bilinear_variant()?;
    let lambda = 0.9 / (8.0 * l);
    let fb = run(
        bilinear.problem(),
        SolverConfig::new(Method::Fb, lambda, Vector::zeros(inst.dim())).max_iters(budget).enforce_bound(false),
    )?;
    println!(
        "fb on the bilinear variant: {} after {} iterations, omega = {:.2e}",
        fb.status,
        fb.iterations(),
        fb.final_residual().unwrap()
    );
    Ok(())
}
