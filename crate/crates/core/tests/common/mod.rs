//! Operator fixtures and property checks shared by the property suites and
//! the acceptance report.
#![allow(dead_code)]

use nalgebra::{dmatrix, DMatrix, DVector};
use splitkit::{MonotoneOperator, Vector};

pub const DIM: usize = 6;

/// A monotone matrix `GGᵀ/d + (G − Gᵀ)` built from `d²` entries in `[−1, 1]`.
pub fn monotone_matrix(entries: &[f64], d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_row_slice(d, d, &entries[..d * d]);
    &g * g.transpose() / d as f64 + (&g - g.transpose())
}

pub fn fixed_matrix(d: usize) -> DMatrix<f64> {
    let entries: Vec<f64> = (0..d * d).map(|i| ((i * 7 + 3) as f64).sin()).collect();
    monotone_matrix(&entries, d)
}

/// Every built-in operator kind that exposes a resolvent, on `R^DIM`.
pub fn resolvent_zoo() -> Vec<(&'static str, MonotoneOperator)> {
    let d = DIM;
    let offset = DVector::from_fn(d, |i, _| 0.3 * i as f64 - 0.5);
    let mut rotation = DMatrix::zeros(d, d);
    for i in 0..d / 2 {
        rotation[(2 * i, 2 * i + 1)] = -1.0;
        rotation[(2 * i + 1, 2 * i)] = 1.0;
    }
    vec![
        ("zero", MonotoneOperator::zero(d)),
        ("identity", MonotoneOperator::identity(d)),
        ("affine", MonotoneOperator::affine(fixed_matrix(d), offset).unwrap()),
        ("skew", MonotoneOperator::affine(rotation, Vector::zeros(d)).unwrap()),
        ("l1", MonotoneOperator::l1(d, 0.7).unwrap()),
        (
            "box",
            MonotoneOperator::box_normal_cone(
                DVector::from_fn(d, |i, _| -1.0 - i as f64 * 0.1),
                DVector::from_fn(d, |i, _| 0.5 + i as f64 * 0.2),
            )
            .unwrap(),
        ),
        (
            "blocks",
            MonotoneOperator::blocks(vec![
                MonotoneOperator::l1(2, 1.5).unwrap(),
                MonotoneOperator::box_symmetric(2, 0.8).unwrap(),
                MonotoneOperator::affine(dmatrix![1.0, -2.0; 2.0, 0.5], Vector::zeros(2)).unwrap(),
            ]),
        ),
    ]
}

/// Every built-in operator kind with a forward map, on `R^DIM`.
pub fn forward_zoo() -> Vec<(&'static str, MonotoneOperator)> {
    let d = DIM;
    let coupling = DMatrix::from_fn(2, 4, |i, j| ((i * 4 + j) as f64).cos());
    vec![
        ("zero", MonotoneOperator::zero(d)),
        ("identity", MonotoneOperator::identity(d)),
        ("affine", MonotoneOperator::affine(fixed_matrix(d), Vector::from_element(d, 0.2)).unwrap()),
        ("bilinear", MonotoneOperator::bilinear(coupling, DVector::from_vec(vec![0.5, -1.0])).unwrap()),
        (
            "blocks",
            MonotoneOperator::blocks(vec![
                MonotoneOperator::identity(2),
                MonotoneOperator::affine(fixed_matrix(4), Vector::zeros(4)).unwrap(),
            ]),
        ),
    ]
}

/// `‖Jv − Jw‖² + ‖(v − Jv) − (w − Jw)‖² − ‖v − w‖²`, at most `0` for a firmly
/// nonexpansive map.
pub fn firm_nonexpansive_excess(op: &MonotoneOperator, lambda: f64, v: &Vector, w: &Vector) -> f64 {
    let j = op.resolvent_map(lambda).unwrap();
    let (jv, jw) = (j.apply(v).unwrap(), j.apply(w).unwrap());
    let a = (&jv - &jw).norm_squared();
    let b = ((v - &jv) - (w - &jw)).norm_squared();
    a + b - (v - w).norm_squared()
}

/// `⟨F(u) − F(v), u − v⟩`.
pub fn monotonicity_gap(op: &MonotoneOperator, u: &Vector, v: &Vector) -> f64 {
    (op.forward(u).unwrap() - op.forward(v).unwrap()).dot(&(u - v))
}
