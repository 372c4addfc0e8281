use super::{check_dim, MonotoneOperator, Vector};
use crate::error::{Capability, Error, Result};

/// A point `z` with `J_{λA}(z) = x_star`, stored with the `λ` it belongs to.
#[derive(Debug, Clone)]
pub struct ShadowPoint {
    pub z: Vector,
    pub lambda: f64,
}

/// The inclusion `0 ∈ (A + B + C)(x)`.
///
/// `A` and `C` must expose resolvents; `B` must be single-valued with a
/// declared Lipschitz constant.
#[derive(Debug, Clone)]
pub struct ProblemTriple {
    pub a: MonotoneOperator,
    pub b: MonotoneOperator,
    pub c: MonotoneOperator,
    x_star: Option<Vector>,
    z_star: Option<ShadowPoint>,
}

impl ProblemTriple {
    pub fn new(a: MonotoneOperator, b: MonotoneOperator, c: MonotoneOperator) -> Result<Self> {
        let dim = a.dim();
        for op in [&b, &c] {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.dim(),
                });
            }
        }
        let missing = |op: &MonotoneOperator, capability| Error::MissingCapability {
            operator: op.kind_name().to_string(),
            capability,
        };
        if !a.has_resolvent() {
            return Err(missing(&a, Capability::Resolvent));
        }
        if !c.has_resolvent() {
            return Err(missing(&c, Capability::Resolvent));
        }
        if !b.has_forward() {
            return Err(missing(&b, Capability::Forward));
        }
        if b.lipschitz().is_none() {
            return Err(missing(&b, Capability::Lipschitz));
        }
        Ok(ProblemTriple {
            a,
            b,
            c,
            x_star: None,
            z_star: None,
        })
    }

    /// All three operators zero on `R^dim`.
    pub fn zero(dim: usize) -> Self {
        Self::new(
            MonotoneOperator::zero(dim),
            MonotoneOperator::zero(dim),
            MonotoneOperator::zero(dim),
        )
        .expect("zero operators are valid")
    }

    /// Attaches a known solution. When all three operators are affine the
    /// residual `‖(A+B+C)(x)‖` must be at most `1e-8·(1+‖x‖)`.
    pub fn with_solution(mut self, x_star: Vector) -> Result<Self> {
        check_dim(self.dim(), &x_star)?;
        if let Some(res) = self.affine_residual(&x_star) {
            if res > 1e-8 * (1.0 + x_star.norm()) {
                return Err(Error::InvalidParameter(format!(
                    "x_star is not a zero of A+B+C (residual {res:e})"
                )));
            }
        }
        self.x_star = Some(x_star);
        Ok(self)
    }

    /// Attaches a shadow point; requires a solution and checks
    /// `x_star = J_{λA}(z)`.
    pub fn with_shadow(mut self, z: Vector, lambda: f64) -> Result<Self> {
        check_dim(self.dim(), &z)?;
        let x_star = self.x_star.as_ref().ok_or(Error::UnavailableGroundTruth)?;
        let x = self.a.resolvent_map(lambda)?.apply(&z)?;
        if (&x - x_star).norm() > 1e-10 * (1.0 + x_star.norm()) {
            return Err(Error::InvalidParameter(
                "z_star does not map to x_star under the resolvent of A".into(),
            ));
        }
        self.z_star = Some(ShadowPoint { z, lambda });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn x_star(&self) -> Option<&Vector> {
        self.x_star.as_ref()
    }

    pub fn z_star(&self) -> Option<&ShadowPoint> {
        self.z_star.as_ref()
    }

    /// Lipschitz constant of `B`.
    pub fn lipschitz(&self) -> f64 {
        self.b.lipschitz().unwrap_or(0.0)
    }

    /// `‖(A+B+C)(x)‖` when every operator is affine.
    pub fn affine_residual(&self, x: &Vector) -> Option<f64> {
        let (ma, ba) = self.a.as_affine()?;
        let (mb, bb) = self.b.as_affine()?;
        let (mc, bc) = self.c.as_affine()?;
        Some(((ma + mb + mc) * x + ba + bb + bc).norm())
    }
}
