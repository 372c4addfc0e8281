//! Maximal monotone operators with forward oracles and exact resolvents.

mod norm;
mod problem;
mod resolvent;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Capability, Error, Result};

pub use norm::{lipschitz_check, operator_norm, spectral_norm};
pub use problem::{ProblemTriple, ShadowPoint};
pub use resolvent::{box_project, resolvent, soft_threshold, Resolvent};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Tolerance used when validating monotonicity of affine operators.
pub const MONOTONE_TOL: f64 = 1e-10;

/// Tolerance of the power iteration that computes the Lipschitz constant of a
/// bilinear coupling.
pub const COUPLING_NORM_TOL: f64 = 1e-8;

pub type ForwardFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;
pub type ResolventFn = Arc<dyn Fn(f64, &Vector) -> Vector + Send + Sync>;

/// User-supplied oracles.
#[derive(Clone)]
pub struct CustomOracles {
    pub name: String,
    pub forward: Option<ForwardFn>,
    /// `resolvent(lambda, v)` must return `(I + lambda T)^{-1} v`.
    pub resolvent: Option<ResolventFn>,
}

#[derive(Clone)]
pub enum OperatorKind {
    Zero,
    /// `x ↦ M x + b`.
    Affine { matrix: Matrix, offset: Vector },
    /// Subdifferential of `weight · ‖x‖₁`.
    L1 { weight: f64 },
    /// Normal cone of the box `[lo, hi]`.
    BoxNormalCone { lo: Vector, hi: Vector },
    /// Saddle operator of `Φ(x, y) = ⟨K x − c, y⟩` on `(x, y) ∈ Rⁿ × Rᵐ`:
    /// `(x, y) ↦ (Kᵀ y, c − K x)`.
    Bilinear { coupling: Matrix, offset: Vector },
    /// Block-diagonal stacking acting on consecutive coordinate ranges.
    Blocks(Vec<MonotoneOperator>),
    Custom(CustomOracles),
}

#[derive(Clone)]
pub struct MonotoneOperator {
    kind: OperatorKind,
    dim: usize,
    lipschitz: Option<f64>,
    single_valued: bool,
}

impl fmt::Debug for MonotoneOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneOperator")
            .field("kind", &self.kind_name())
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

fn require_finite(v: &Vector, what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// Smallest eigenvalue of the symmetric part `(M + Mᵀ)/2`.
pub fn min_symmetric_eigenvalue(matrix: &Matrix) -> f64 {
    if matrix.is_empty() {
        return 0.0;
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

impl MonotoneOperator {
    pub fn zero(dim: usize) -> Self {
        MonotoneOperator {
            kind: OperatorKind::Zero,
            dim,
            lipschitz: Some(0.0),
            single_valued: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        MonotoneOperator {
            kind: OperatorKind::Affine {
                matrix: Matrix::identity(dim, dim),
                offset: Vector::zeros(dim),
            },
            dim,
            lipschitz: Some(1.0),
            single_valued: true,
        }
    }

    /// Affine operator `M x + b`. Rejects `M` whose symmetric part has an
    /// eigenvalue below `-1e-10`.
    pub fn affine(matrix: Matrix, offset: Vector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter(format!(
                "affine operator needs a square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let dim = matrix.nrows();
        check_dim(dim, &offset)?;
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("affine matrix"));
        }
        require_finite(&offset, "affine offset")?;
        let min_eig = min_symmetric_eigenvalue(&matrix);
        if min_eig < -MONOTONE_TOL {
            return Err(Error::NotMonotone {
                min_eigenvalue: min_eig,
            });
        }
        let lipschitz = spectral_norm(&matrix);
        Ok(MonotoneOperator {
            kind: OperatorKind::Affine { matrix, offset },
            dim,
            lipschitz: Some(lipschitz),
            single_valued: true,
        })
    }

    pub fn l1(dim: usize, weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "l1 weight must be finite and nonnegative, got {weight}"
            )));
        }
        Ok(MonotoneOperator {
            kind: OperatorKind::L1 { weight },
            dim,
            lipschitz: None,
            single_valued: false,
        })
    }

    pub fn box_normal_cone(lo: Vector, hi: Vector) -> Result<Self> {
        check_dim(lo.len(), &hi)?;
        if let Some(index) = (0..lo.len()).find(|&i| !(lo[i] <= hi[i])) {
            return Err(Error::InvalidBox { index });
        }
        Ok(MonotoneOperator {
            dim: lo.len(),
            kind: OperatorKind::BoxNormalCone { lo, hi },
            lipschitz: None,
            single_valued: false,
        })
    }

    /// Symmetric box `[-radius, radius]^dim`.
    pub fn box_symmetric(dim: usize, radius: f64) -> Result<Self> {
        Self::box_normal_cone(Vector::from_element(dim, -radius), Vector::from_element(dim, radius))
    }

    /// Saddle operator of `⟨K x − c, y⟩` for `K` of shape `m × n`; acts on
    /// `(x, y)` of dimension `n + m`. The Lipschitz constant `‖K‖` is computed by
    /// power iteration.
    pub fn bilinear(coupling: Matrix, offset: Vector) -> Result<Self> {
        let (m, n) = coupling.shape();
        check_dim(m, &offset)?;
        let lipschitz = if coupling.iter().all(|&v| v == 0.0) {
            0.0
        } else {
            operator_norm(&coupling, COUPLING_NORM_TOL, 100_000)?
        };
        Ok(MonotoneOperator {
            kind: OperatorKind::Bilinear { coupling, offset },
            dim: n + m,
            lipschitz: Some(lipschitz),
            single_valued: true,
        })
    }

    pub fn blocks(parts: Vec<MonotoneOperator>) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let lipschitz = parts
            .iter()
            .map(|p| p.lipschitz)
            .try_fold(0.0_f64, |acc, l| l.map(|l| acc.max(l)));
        let single_valued = parts.iter().all(|p| p.single_valued);
        MonotoneOperator {
            kind: OperatorKind::Blocks(parts),
            dim,
            lipschitz,
            single_valued,
        }
    }

    /// Operator defined by user oracles. A forward oracle implies the operator
    /// is single-valued.
    pub fn custom(dim: usize, oracles: CustomOracles, lipschitz: Option<f64>) -> Self {
        let single_valued = oracles.forward.is_some();
        MonotoneOperator {
            kind: OperatorKind::Custom(oracles),
            dim,
            lipschitz,
            single_valued,
        }
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &str {
        match &self.kind {
            OperatorKind::Zero => "zero",
            OperatorKind::Affine { .. } => "affine",
            OperatorKind::L1 { .. } => "l1",
            OperatorKind::BoxNormalCone { .. } => "box_normal_cone",
            OperatorKind::Bilinear { .. } => "bilinear",
            OperatorKind::Blocks(_) => "blocks",
            OperatorKind::Custom(c) => &c.name,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn is_single_valued(&self) -> bool {
        self.single_valued
    }

    /// True for the zero operator, including affine, bilinear and block
    /// operators whose data is identically zero.
    pub fn is_zero(&self) -> bool {
        let zero = |v: &Matrix| v.iter().all(|&e| e == 0.0);
        let zero_v = |v: &Vector| v.iter().all(|&e| e == 0.0);
        match &self.kind {
            OperatorKind::Zero => true,
            OperatorKind::Affine { matrix, offset } | OperatorKind::Bilinear { coupling: matrix, offset } => {
                zero(matrix) && zero_v(offset)
            }
            OperatorKind::Blocks(parts) => parts.iter().all(|p| p.is_zero()),
            _ => false,
        }
    }

    pub fn has_forward(&self) -> bool {
        match &self.kind {
            OperatorKind::Zero | OperatorKind::Affine { .. } | OperatorKind::Bilinear { .. } => true,
            OperatorKind::L1 { .. } | OperatorKind::BoxNormalCone { .. } => false,
            OperatorKind::Blocks(parts) => parts.iter().all(|p| p.has_forward()),
            OperatorKind::Custom(c) => c.forward.is_some(),
        }
    }

    pub fn has_resolvent(&self) -> bool {
        match &self.kind {
            OperatorKind::Zero
            | OperatorKind::Affine { .. }
            | OperatorKind::L1 { .. }
            | OperatorKind::BoxNormalCone { .. } => true,
            OperatorKind::Bilinear { .. } => false,
            OperatorKind::Blocks(parts) => parts.iter().all(|p| p.has_resolvent()),
            OperatorKind::Custom(c) => c.resolvent.is_some(),
        }
    }

    fn missing(&self, capability: Capability) -> Error {
        Error::MissingCapability {
            operator: self.kind_name().to_string(),
            capability,
        }
    }

    /// Forward evaluation `F(v)`.
    pub fn forward(&self, v: &Vector) -> Result<Vector> {
        if !self.has_forward() {
            return Err(self.missing(Capability::Forward));
        }
        check_dim(self.dim, v)?;
        Ok(self.forward_unchecked(v))
    }

    /// Forward evaluation without capability or dimension checks; callers
    /// validate once up front.
    pub(crate) fn forward_unchecked(&self, v: &Vector) -> Vector {
        match &self.kind {
            OperatorKind::Zero => Vector::zeros(self.dim),
            OperatorKind::Affine { matrix, offset } => matrix * v + offset,
            OperatorKind::Bilinear { coupling, offset } => {
                let n = coupling.ncols();
                let m = coupling.nrows();
                let x = v.rows(0, n);
                let y = v.rows(n, m);
                let mut out = Vector::zeros(n + m);
                out.rows_mut(0, n).copy_from(&coupling.tr_mul(&y));
                out.rows_mut(n, m).copy_from(&(offset - coupling * x));
                out
            }
            OperatorKind::Blocks(parts) => {
                let mut out = Vector::zeros(self.dim);
                let mut start = 0;
                for p in parts {
                    let piece = v.rows(start, p.dim).into_owned();
                    out.rows_mut(start, p.dim).copy_from(&p.forward_unchecked(&piece));
                    start += p.dim;
                }
                out
            }
            OperatorKind::Custom(c) => (c.forward.as_ref().expect("checked"))(v),
            OperatorKind::L1 { .. } | OperatorKind::BoxNormalCone { .. } => {
                unreachable!("set-valued operator has no forward oracle")
            }
        }
    }

    /// Pre-factored resolvent `J_{λT}` for a fixed `lambda > 0`.
    pub fn resolvent_map(&self, lambda: f64) -> Result<Resolvent> {
        Resolvent::new(self, lambda)
    }

    /// Linear part and offset when the operator is affine (zero, affine,
    /// bilinear, or blocks of those).
    pub fn as_affine(&self) -> Option<(Matrix, Vector)> {
        match &self.kind {
            OperatorKind::Zero => Some((Matrix::zeros(self.dim, self.dim), Vector::zeros(self.dim))),
            OperatorKind::Affine { matrix, offset } => Some((matrix.clone(), offset.clone())),
            OperatorKind::Bilinear { coupling, offset } => {
                let (m, n) = coupling.shape();
                let mut lin = Matrix::zeros(n + m, n + m);
                lin.view_mut((0, n), (n, m)).copy_from(&coupling.transpose());
                lin.view_mut((n, 0), (m, n)).copy_from(&(-coupling));
                let mut off = Vector::zeros(n + m);
                off.rows_mut(n, m).copy_from(offset);
                Some((lin, off))
            }
            OperatorKind::Blocks(parts) => {
                let mut lin = Matrix::zeros(self.dim, self.dim);
                let mut off = Vector::zeros(self.dim);
                let mut start = 0;
                for p in parts {
                    let (m, b) = p.as_affine()?;
                    lin.view_mut((start, start), (p.dim, p.dim)).copy_from(&m);
                    off.rows_mut(start, p.dim).copy_from(&b);
                    start += p.dim;
                }
                Some((lin, off))
            }
            _ => None,
        }
    }
}

/// `F(v)` for a forward-capable operator.
pub fn forward_eval(op: &MonotoneOperator, v: &Vector) -> Result<Vector> {
    op.forward(v)
}
