use std::sync::Arc;

use nalgebra::{Dyn, LU};

use super::{check_dim, require_finite, MonotoneOperator, OperatorKind, Vector};
use crate::error::{Capability, Error, Result};

/// Componentwise `sign(v_i) · max(|v_i| − λw, 0)`, the resolvent of `λ ∂(w‖·‖₁)`.
pub fn soft_threshold(weight: f64, lambda: f64, v: &Vector) -> Result<Vector> {
    if !(weight >= 0.0) || !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "soft threshold needs weight >= 0 and lambda > 0, got {weight}, {lambda}"
        )));
    }
    require_finite(v, "soft_threshold input")?;
    Ok(shrink(v, lambda * weight))
}

fn shrink(v: &Vector, threshold: f64) -> Vector {
    v.map(|x| x.signum() * (x.abs() - threshold).max(0.0))
}

/// Componentwise clamp onto `[lo, hi]`, the resolvent of the box normal cone.
pub fn box_project(lo: &Vector, hi: &Vector, v: &Vector) -> Result<Vector> {
    check_dim(lo.len(), hi)?;
    check_dim(lo.len(), v)?;
    if let Some(index) = (0..lo.len()).find(|&i| !(lo[i] <= hi[i])) {
        return Err(Error::InvalidBox { index });
    }
    require_finite(v, "box_project input")?;
    Ok(clamp(lo, hi, v))
}

fn clamp(lo: &Vector, hi: &Vector, v: &Vector) -> Vector {
    Vector::from_fn(v.len(), |i, _| v[i].max(lo[i]).min(hi[i]))
}

enum Kernel {
    Identity,
    /// `(I + λM)` factored once; `shift = λ b`.
    Affine { lu: LU<f64, Dyn, Dyn>, shift: Vector },
    Shrink { threshold: f64 },
    Clamp { lo: Vector, hi: Vector },
    Blocks(Vec<(usize, Resolvent)>),
    Custom(Arc<dyn Fn(f64, &Vector) -> Vector + Send + Sync>),
}

/// The resolvent `J_{λT} = (I + λT)^{-1}` of an operator for a fixed `λ`.
///
/// Construction does all the one-off work (LU factorisation for affine
/// operators), so the returned map is immutable and cheap to apply.
pub struct Resolvent {
    lambda: f64,
    dim: usize,
    kernel: Kernel,
}

impl Resolvent {
    pub fn new(op: &MonotoneOperator, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "resolvent parameter must be positive, got {lambda}"
            )));
        }
        if !op.has_resolvent() {
            return Err(Error::MissingCapability {
                operator: op.kind_name().to_string(),
                capability: Capability::Resolvent,
            });
        }
        let kernel = match op.kind() {
            OperatorKind::Zero => Kernel::Identity,
            OperatorKind::Affine { matrix, offset } => {
                let shifted = matrix * lambda + super::Matrix::identity(op.dim(), op.dim());
                let lu = shifted.lu();
                if !lu.is_invertible() {
                    return Err(Error::Singular(format!(
                        "I + {lambda}·M is not invertible; the affine operator is not monotone"
                    )));
                }
                Kernel::Affine {
                    lu,
                    shift: offset * lambda,
                }
            }
            OperatorKind::L1 { weight } => Kernel::Shrink {
                threshold: lambda * weight,
            },
            OperatorKind::BoxNormalCone { lo, hi } => Kernel::Clamp {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            OperatorKind::Blocks(parts) => Kernel::Blocks(
                parts
                    .iter()
                    .map(|p| Ok((p.dim(), Resolvent::new(p, lambda)?)))
                    .collect::<Result<_>>()?,
            ),
            OperatorKind::Custom(c) => Kernel::Custom(c.resolvent.clone().expect("checked")),
            OperatorKind::Bilinear { .. } => unreachable!("bilinear coupling has no resolvent"),
        };
        Ok(Resolvent {
            lambda,
            dim: op.dim(),
            kernel,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the resolvent after checking dimension and finiteness.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        check_dim(self.dim, v)?;
        require_finite(v, "resolvent input")?;
        self.apply_unchecked(v)
    }

    /// Hot-path application; non-finite input propagates instead of erroring.
    pub(crate) fn apply_unchecked(&self, v: &Vector) -> Result<Vector> {
        Ok(match &self.kernel {
            Kernel::Identity => v.clone(),
            Kernel::Affine { lu, shift } => lu
                .solve(&(v - shift))
                .ok_or_else(|| Error::Singular("LU solve failed".into()))?,
            Kernel::Shrink { threshold } => shrink(v, *threshold),
            Kernel::Clamp { lo, hi } => clamp(lo, hi, v),
            Kernel::Blocks(parts) => {
                let mut out = Vector::zeros(self.dim);
                let mut start = 0;
                for (len, r) in parts {
                    let piece = v.rows(start, *len).into_owned();
                    out.rows_mut(start, *len).copy_from(&r.apply_unchecked(&piece)?);
                    start += len;
                }
                out
            }
            Kernel::Custom(f) => f(self.lambda, v),
        })
    }
}

/// One-off `J_{λT}(v)`. Repeated calls with the same `λ` should go through
/// [`MonotoneOperator::resolvent_map`] instead.
pub fn resolvent(op: &MonotoneOperator, lambda: f64, v: &Vector) -> Result<Vector> {
    Resolvent::new(op, lambda)?.apply(v)
}
