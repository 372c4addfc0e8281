use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::operator::{min_symmetric_eigenvalue, spectral_norm, Matrix, MonotoneOperator, ProblemTriple, Vector, MONOTONE_TOL};
use crate::rng::{stream, uniform_matrix, uniform_vector};

/// Weight of the skew part added to the randomly generated `M_A` and `M_C`.
const OUTER_SKEW: f64 = 0.1;

/// Multiple of the identity added to `M_A` and `M_C`. Without it the summed
/// matrix routinely has singular values near 0.05 and the flows and small-step
/// methods crawl.
const OUTER_FLOOR: f64 = 0.2;

/// `0 ∈ (M_A + M_B + M_C)x + b_A + b_B + b_C`, split as three affine monotone
/// operators.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineInstance {
    pub m_a: Matrix,
    pub m_b: Matrix,
    pub m_c: Matrix,
    pub b_a: Vector,
    pub b_b: Vector,
    pub b_c: Vector,
    /// `‖M_B‖`.
    pub lipschitz: f64,
    pub x_star: Vector,
    pub seed: u64,
    pub skew_fraction: f64,
}

impl AffineInstance {
    /// Validates monotonicity and solves for `x_star`.
    pub fn from_parts(
        m_a: Matrix,
        m_b: Matrix,
        m_c: Matrix,
        b_a: Vector,
        b_b: Vector,
        b_c: Vector,
    ) -> Result<Self> {
        let dim = m_a.nrows();
        for m in [&m_a, &m_b, &m_c] {
            if m.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if m.nrows() != dim { m.nrows() } else { m.ncols() },
                });
            }
            let e = min_symmetric_eigenvalue(m);
            if e < -MONOTONE_TOL {
                return Err(Error::NotMonotone { min_eigenvalue: e });
            }
        }
        for b in [&b_a, &b_b, &b_c] {
            crate::operator::check_dim(dim, b)?;
        }
        let mut inst = AffineInstance {
            lipschitz: spectral_norm(&m_b),
            m_a,
            m_b,
            m_c,
            b_a,
            b_b,
            b_c,
            x_star: Vector::zeros(dim),
            seed: 0,
            skew_fraction: 0.0,
        };
        inst.x_star = solve_affine_direct(&inst)?;
        Ok(inst)
    }

    pub fn dim(&self) -> usize {
        self.m_a.nrows()
    }

    pub fn total_matrix(&self) -> Matrix {
        &self.m_a + &self.m_b + &self.m_c
    }

    pub fn total_offset(&self) -> Vector {
        &self.b_a + &self.b_b + &self.b_c
    }

    /// `‖(M_A + M_B + M_C)x + b‖`.
    pub fn residual(&self, x: &Vector) -> f64 {
        (self.total_matrix() * x + self.total_offset()).norm()
    }

    /// The operator triple, with `x_star` attached.
    pub fn problem(&self) -> Result<ProblemTriple> {
        ProblemTriple::new(
            MonotoneOperator::affine(self.m_a.clone(), self.b_a.clone())?,
            MonotoneOperator::affine(self.m_b.clone(), self.b_b.clone())?,
            MonotoneOperator::affine(self.m_c.clone(), self.b_c.clone())?,
        )?
        .with_solution(self.x_star.clone())
    }
}

/// Solves `(M_A + M_B + M_C)x = −(b_A + b_B + b_C)` by LU with one round of
/// iterative refinement. A zero right-hand side gives `x = 0` even when the
/// matrix is singular.
pub fn solve_affine_direct(inst: &AffineInstance) -> Result<Vector> {
    let m = inst.total_matrix();
    let rhs = -inst.total_offset();
    if rhs.iter().all(|&v| v == 0.0) {
        return Ok(Vector::zeros(rhs.len()));
    }
    if is_singular(&m) {
        return Err(Error::Singular("M_A + M_B + M_C is singular".into()));
    }
    let lu = m.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("M_A + M_B + M_C is singular".into()))?;
    if let Some(correction) = lu.solve(&(&rhs - &m * &x)) {
        x += correction;
    }
    Ok(x)
}

fn is_singular(m: &Matrix) -> bool {
    let sv = m.singular_values();
    let max = sv.max();
    max == 0.0 || sv.min() <= 1e-10 * max.max(1.0)
}

/// Projection of a symmetric matrix onto the PSD cone.
fn psd_part(sym: Matrix) -> Matrix {
    let eig = SymmetricEigen::new(sym);
    let clipped = eig.eigenvalues.map(|e| e.max(0.0));
    let q = &eig.eigenvectors;
    let p = q * Matrix::from_diagonal(&clipped) * q.transpose();
    (&p + p.transpose()) * 0.5
}

/// `(skew part, PSD projection of symmetric part)` of a seeded random matrix.
fn random_parts(seed: u64, id: u64, dim: usize) -> (Matrix, Matrix) {
    let g = uniform_matrix(&mut stream(seed, id), dim, dim) / (dim as f64).sqrt();
    let gt = g.transpose();
    ((&g - &gt) * 0.5, psd_part((&g + &gt) * 0.5))
}

/// Seeded affine instance of dimension `dim`.
///
/// `M_B = s·S + (1 − s)·P` with `S` skew and `P` PSD, so `skew_fraction = 1`
/// gives a purely rotational, non-cocoercive `B`. `M_A` and `M_C` are `0.2·I`
/// plus a PSD matrix plus a small skew part, so the symmetric part of the
/// summed matrix is at least `0.4·I` and the system is always solvable.
/// Offsets are uniform in `[-1, 1]`.
pub fn make_affine_instance(dim: usize, seed: u64, skew_fraction: f64) -> Result<AffineInstance> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&skew_fraction) {
        return Err(Error::InvalidParameter(format!(
            "skew_fraction must lie in [0, 1], got {skew_fraction}"
        )));
    }
    let (sa, pa) = random_parts(seed, 1, dim);
    let (sb, pb) = random_parts(seed, 2, dim);
    let (sc, pc) = random_parts(seed, 3, dim);
    let mut offsets = stream(seed, 4);
    let b_a = uniform_vector(&mut offsets, dim);
    let b_b = uniform_vector(&mut offsets, dim);
    let b_c = uniform_vector(&mut offsets, dim);

    let m_b = sb * skew_fraction + pb * (1.0 - skew_fraction);
    let floor = Matrix::identity(dim, dim) * OUTER_FLOOR;
    let m_a = pa + sa * OUTER_SKEW + &floor;
    let m_c = pc + sc * OUTER_SKEW + floor;

    let mut inst = AffineInstance::from_parts(m_a, m_b, m_c, b_a, b_b, b_c)?;
    inst.seed = seed;
    inst.skew_fraction = skew_fraction;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn scalar_instance_closed_form() {
        for seed in 0..20 {
            let inst = make_affine_instance(1, seed, 0.5).unwrap();
            let (a, b, c) = (inst.m_a[(0, 0)], inst.m_b[(0, 0)], inst.m_c[(0, 0)]);
            assert!(a >= 0.0 && b >= 0.0 && c >= 0.0);
            let expected = -(inst.b_a[0] + inst.b_b[0] + inst.b_c[0]) / (a + b + c);
            assert!((inst.x_star[0] - expected).abs() <= 1e-14 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn rotation_instance_against_cramer() {
        let z = Matrix::zeros(2, 2);
        let inst = AffineInstance::from_parts(
            z.clone(),
            dmatrix![0.0, -1.0; 1.0, 0.0],
            z,
            Vector::zeros(2),
            dvector![1.0, 0.0],
            Vector::zeros(2),
        )
        .unwrap();
        // Cramer's rule on [[0,-1],[1,0]] x = (-1, 0).
        let (a, b, c, d) = (0.0, -1.0, 1.0, 0.0);
        let (r1, r2) = (-1.0, 0.0);
        let det = a * d - b * c;
        let oracle = dvector![(r1 * d - b * r2) / det, (a * r2 - r1 * c) / det];
        assert_eq!(inst.x_star, oracle);
        assert_eq!(oracle, dvector![0.0, 1.0]);
    }

    #[test]
    fn direct_solve_conventions() {
        let z = Matrix::zeros(2, 2);
        let zv = Vector::zeros(2);
        let inst = AffineInstance::from_parts(z.clone(), z.clone(), z, zv.clone(), zv.clone(), zv).unwrap();
        assert_eq!(inst.x_star, Vector::zeros(2));

        let one = Matrix::identity(1, 1);
        let inst = AffineInstance::from_parts(
            one.clone(),
            one.clone(),
            one,
            dvector![1.0],
            dvector![1.0],
            dvector![1.0],
        )
        .unwrap();
        assert_eq!(inst.x_star[0], -1.0);

        let z = Matrix::zeros(1, 1);
        assert!(matches!(
            AffineInstance::from_parts(z.clone(), z.clone(), z, dvector![1.0], dvector![0.0], dvector![0.0]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn direct_solve_residual_dim_50() {
        let inst = make_affine_instance(50, 1, 0.8).unwrap();
        let b = inst.total_offset().norm();
        assert!(inst.residual(&inst.x_star) <= 1e-12 * (1.0 + b));
    }

    #[test]
    fn deterministic_in_seed() {
        let a = make_affine_instance(12, 9, 0.8).unwrap();
        let b = make_affine_instance(12, 9, 0.8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, make_affine_instance(12, 10, 0.8).unwrap());
    }

    #[test]
    fn generated_parts_are_monotone() {
        for seed in 0..5 {
            let inst = make_affine_instance(15, seed, 0.8).unwrap();
            for m in [&inst.m_a, &inst.m_b, &inst.m_c] {
                assert!(min_symmetric_eigenvalue(m) >= -MONOTONE_TOL);
            }
            let full_skew = make_affine_instance(15, seed, 1.0).unwrap();
            assert!((&full_skew.m_b + full_skew.m_b.transpose()).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_affine_instance(0, 1, 0.5).is_err());
        assert!(make_affine_instance(3, 1, 1.5).is_err());
        let neg = dmatrix![-1.0];
        let z = Matrix::zeros(1, 1);
        assert!(matches!(
            AffineInstance::from_parts(neg, z.clone(), z, dvector![0.0], dvector![0.0], dvector![0.0]),
            Err(Error::NotMonotone { .. })
        ));
    }
}
