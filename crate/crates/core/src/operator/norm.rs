use super::{Matrix, MonotoneOperator, Vector};
use crate::error::{Capability, Error, Result};
use crate::rng;

/// Largest singular value via a dense SVD.
pub fn spectral_norm(matrix: &Matrix) -> f64 {
    if matrix.is_empty() {
        return 0.0;
    }
    matrix.clone().svd(false, false).singular_values.max()
}

/// Largest singular value of `k` by power iteration on `KᵀK`.
///
/// Iterates until both the last change of the estimate and the geometric
/// extrapolation of the remaining error are below `tol` relative to the
/// estimate.
pub fn operator_norm(k: &Matrix, tol: f64, max_iters: usize) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if k.is_empty() || k.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidParameter("operator_norm needs a nonzero matrix".into()));
    }
    let mut v = rng::uniform_vector(&mut rng::stream(0x5eed_0f_4e5e, 0), k.ncols());
    v /= v.norm();
    let mut sigma = (k * &v).norm();
    let mut prev_delta: Option<f64> = None;
    for _ in 0..max_iters {
        let w = k.tr_mul(&(k * &v));
        let nrm = w.norm();
        if nrm == 0.0 {
            // Start vector in the null space; nudge it.
            v = Vector::from_fn(k.ncols(), |i, _| 1.0 + i as f64);
            v /= v.norm();
            continue;
        }
        v = w / nrm;
        let next = (k * &v).norm();
        let delta = (next - sigma).abs();
        sigma = next;
        if delta == 0.0 {
            return Ok(sigma);
        }
        if delta <= tol * sigma {
            if let Some(prev) = prev_delta {
                let q = delta / prev;
                if q < 1.0 && delta * q / (1.0 - q) <= tol * sigma {
                    return Ok(sigma);
                }
            }
        }
        prev_delta = Some(delta);
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        estimate: sigma,
    })
}

/// Largest observed `‖F(u) − F(v)‖ / ‖u − v‖` over `trials` random pairs drawn
/// from `uniform(-1, 1)^dim`.
pub fn lipschitz_check(op: &MonotoneOperator, trials: usize, seed: u64) -> Result<f64> {
    if !op.has_forward() {
        return Err(Error::MissingCapability {
            operator: op.kind_name().to_string(),
            capability: Capability::Forward,
        });
    }
    let mut rng = rng::stream(seed, 0x11b5);
    let mut worst = 0.0_f64;
    for _ in 0..trials.max(1) {
        let u = rng::uniform_vector(&mut rng, op.dim());
        let v = rng::uniform_vector(&mut rng, op.dim());
        let gap = (&u - &v).norm();
        if gap == 0.0 {
            continue;
        }
        let diff = (op.forward(&u)? - op.forward(&v)?).norm();
        worst = worst.max(diff / gap);
    }
    Ok(worst)
}
