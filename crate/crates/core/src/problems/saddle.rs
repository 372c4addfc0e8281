use crate::error::{Error, Result};
use crate::operator::{Matrix, MonotoneOperator, ProblemTriple, Vector};
use crate::rng::{stream, uniform_matrix, uniform_vector};

/// `min_x α‖x‖₁ + ι_{[−R,R]ⁿ}(x) + max_{‖y‖∞ ≤ 1} ⟨Kx − c, y⟩` posed as
/// `0 ∈ (A + B + C)(x, y)` on `Rⁿ × Rᵐ` with
///
/// - `A = (∂(α‖·‖₁), N_{[−1,1]ᵐ})`,
/// - `B(x, y) = (Kᵀy, c − Kx)`,
/// - `C = (N_{[−R,R]ⁿ}, 0)`.
#[derive(Debug, Clone)]
pub struct SaddleInstance {
    /// `m × n`.
    pub k: Matrix,
    pub c: Vector,
    pub alpha: f64,
    pub radius: f64,
    pub seed: u64,
    problem: ProblemTriple,
}

impl SaddleInstance {
    pub fn from_parts(k: Matrix, c: Vector, alpha: f64, radius: f64) -> Result<Self> {
        let (m, n) = k.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("coupling matrix must be nonempty".into()));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        let a = MonotoneOperator::blocks(vec![
            MonotoneOperator::l1(n, alpha)?,
            MonotoneOperator::box_symmetric(m, 1.0)?,
        ]);
        let b = MonotoneOperator::bilinear(k.clone(), c.clone())?;
        let cc = MonotoneOperator::blocks(vec![
            MonotoneOperator::box_symmetric(n, radius)?,
            MonotoneOperator::zero(m),
        ]);
        Ok(SaddleInstance {
            problem: ProblemTriple::new(a, b, cc)?,
            k,
            c,
            alpha,
            radius,
            seed: 0,
        })
    }

    /// Number of dual variables `m`.
    pub fn m(&self) -> usize {
        self.k.nrows()
    }

    /// Number of primal variables `n`.
    pub fn n(&self) -> usize {
        self.k.ncols()
    }

    pub fn dim(&self) -> usize {
        self.m() + self.n()
    }

    pub fn lipschitz(&self) -> f64 {
        self.problem.lipschitz()
    }

    pub fn problem(&self) -> &ProblemTriple {
        &self.problem
    }

    /// Primal block of a stacked point `(x, y)`.
    pub fn x_block(&self, v: &Vector) -> Vector {
        v.rows(0, self.n()).into_owned()
    }

    pub fn y_block(&self, v: &Vector) -> Vector {
        v.rows(self.n(), self.m()).into_owned()
    }

    /// Same coupling and offset with `α = 0`, leaving the purely bilinear game
    /// under box constraints.
    pub fn bilinear_variant(&self) -> Result<Self> {
        let mut inst = SaddleInstance::from_parts(self.k.clone(), self.c.clone(), 0.0, self.radius)?;
        inst.seed = self.seed;
        Ok(inst)
    }
}

/// Seeded saddle instance with `K` entries uniform in `[−1, 1]/√(m+n)` and `c`
/// uniform in `[−1, 1]ᵐ`.
pub fn make_saddle_instance(m: usize, n: usize, seed: u64, alpha: f64, radius: f64) -> Result<SaddleInstance> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be at least 1".into()));
    }
    let k = uniform_matrix(&mut stream(seed, 1), m, n) / ((m + n) as f64).sqrt();
    let c = uniform_vector(&mut stream(seed, 2), m);
    let mut inst = SaddleInstance::from_parts(k, c, alpha, radius)?;
    inst.seed = seed;
    Ok(inst)
}
