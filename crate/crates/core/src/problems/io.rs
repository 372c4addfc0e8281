//! Instance files: a `[metadata]` header followed by `[data]` with matrices
//! stored row-major as arrays of rows. Floats are written in shortest
//! round-trip form, so save/load is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AffineInstance, SaddleInstance};
use crate::error::{Error, Result};
use crate::operator::{Matrix, ProblemTriple, Vector};

#[derive(Debug, Clone)]
pub enum Instance {
    Affine(AffineInstance),
    Saddle(SaddleInstance),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    metadata: Metadata,
    data: toml::Table,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Metadata {
    kind: String,
    dim: usize,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    skew_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineData {
    m_a: Vec<Vec<f64>>,
    m_b: Vec<Vec<f64>>,
    m_c: Vec<Vec<f64>>,
    b_a: Vec<f64>,
    b_b: Vec<f64>,
    b_c: Vec<f64>,
    lipschitz: f64,
    x_star: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SaddleData {
    k: Vec<Vec<f64>>,
    c: Vec<f64>,
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix(name: &str, rows: &[Vec<f64>], shape: (usize, usize)) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::InstanceFormat(format!(
            "`{name}` must be {}x{}",
            shape.0, shape.1
        )));
    }
    Ok(Matrix::from_fn(shape.0, shape.1, |i, j| rows[i][j]))
}

fn vector(name: &str, v: &[f64], len: usize) -> Result<Vector> {
    if v.len() != len {
        return Err(Error::InstanceFormat(format!("`{name}` must have length {len}")));
    }
    Ok(Vector::from_column_slice(v))
}

fn to_table<T: Serialize>(v: &T) -> Result<toml::Table> {
    toml::Table::try_from(v).map_err(|e| Error::InstanceFormat(e.to_string()))
}

fn from_table<T: for<'de> Deserialize<'de>>(t: toml::Table) -> Result<T> {
    t.try_into().map_err(|e: toml::de::Error| Error::InstanceFormat(e.to_string()))
}

impl Instance {
    pub fn problem(&self) -> Result<ProblemTriple> {
        match self {
            Instance::Affine(a) => a.problem(),
            Instance::Saddle(s) => Ok(s.problem().clone()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Affine(_) => "affine",
            Instance::Saddle(_) => "saddle",
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        let file = match self {
            Instance::Affine(a) => File {
                metadata: Metadata {
                    kind: "affine".into(),
                    dim: a.dim(),
                    seed: a.seed,
                    skew_fraction: Some(a.skew_fraction),
                    alpha: None,
                    radius: None,
                },
                data: to_table(&AffineData {
                    m_a: rows(&a.m_a),
                    m_b: rows(&a.m_b),
                    m_c: rows(&a.m_c),
                    b_a: a.b_a.iter().copied().collect(),
                    b_b: a.b_b.iter().copied().collect(),
                    b_c: a.b_c.iter().copied().collect(),
                    lipschitz: a.lipschitz,
                    x_star: a.x_star.iter().copied().collect(),
                })?,
            },
            Instance::Saddle(s) => File {
                metadata: Metadata {
                    kind: "saddle".into(),
                    dim: s.dim(),
                    seed: s.seed,
                    skew_fraction: None,
                    alpha: Some(s.alpha),
                    radius: Some(s.radius),
                },
                data: to_table(&SaddleData {
                    k: rows(&s.k),
                    c: s.c.iter().copied().collect(),
                })?,
            },
        };
        toml::to_string(&file).map_err(|e| Error::InstanceFormat(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: File = toml::from_str(text).map_err(|e| Error::InstanceFormat(e.to_string()))?;
        let meta = file.metadata;
        let missing = |key: &str| Error::InstanceFormat(format!("metadata is missing `{key}`"));
        match meta.kind.as_str() {
            "affine" => {
                let d: AffineData = from_table(file.data)?;
                let n = meta.dim;
                let inst = AffineInstance {
                    m_a: matrix("m_a", &d.m_a, (n, n))?,
                    m_b: matrix("m_b", &d.m_b, (n, n))?,
                    m_c: matrix("m_c", &d.m_c, (n, n))?,
                    b_a: vector("b_a", &d.b_a, n)?,
                    b_b: vector("b_b", &d.b_b, n)?,
                    b_c: vector("b_c", &d.b_c, n)?,
                    lipschitz: d.lipschitz,
                    x_star: vector("x_star", &d.x_star, n)?,
                    seed: meta.seed,
                    skew_fraction: meta.skew_fraction.ok_or_else(|| missing("skew_fraction"))?,
                };
                // Validates monotonicity and the stored solution.
                inst.problem()?;
                Ok(Instance::Affine(inst))
            }
            "saddle" => {
                let d: SaddleData = from_table(file.data)?;
                let m = d.c.len();
                if m == 0 || m >= meta.dim {
                    return Err(Error::InstanceFormat(format!(
                        "offset length {m} inconsistent with dim {}",
                        meta.dim
                    )));
                }
                let k = matrix("k", &d.k, (m, meta.dim - m))?;
                let mut inst = SaddleInstance::from_parts(
                    k,
                    Vector::from_vec(d.c),
                    meta.alpha.ok_or_else(|| missing("alpha"))?,
                    meta.radius.ok_or_else(|| missing("radius"))?,
                )?;
                inst.seed = meta.seed;
                Ok(Instance::Saddle(inst))
            }
            other => Err(Error::InstanceFormat(format!("unknown instance kind `{other}`"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_affine_instance, make_saddle_instance};
    use proptest::prelude::*;

    fn bits(v: impl IntoIterator<Item = f64>) -> Vec<u64> {
        v.into_iter().map(f64::to_bits).collect()
    }

    #[test]
    fn saddle_round_trip() {
        let inst = make_saddle_instance(4, 6, 3, 0.5, 2.0).unwrap();
        let text = Instance::Saddle(inst.clone()).to_toml().unwrap();
        let Instance::Saddle(back) = Instance::from_toml(&text).unwrap() else {
            panic!("wrong kind")
        };
        assert_eq!(bits(back.k.iter().copied()), bits(inst.k.iter().copied()));
        assert_eq!(back.c, inst.c);
        assert_eq!((back.alpha, back.radius, back.seed), (0.5, 2.0, 3));
        assert_eq!(back.lipschitz(), inst.lipschitz());
    }

    #[test]
    fn header_comes_first_and_rows_are_rows() {
        let inst = make_affine_instance(3, 2, 0.8).unwrap();
        let text = Instance::Affine(inst.clone()).to_toml().unwrap();
        assert!(text.starts_with("[metadata]"));
        let table: toml::Table = text.parse().unwrap();
        let first_row = table["data"]["m_b"][0].as_array().unwrap();
        assert_eq!(first_row.len(), 3);
        assert_eq!(first_row[1].as_float().unwrap(), inst.m_b[(0, 1)]);
    }

    #[test]
    fn rejects_malformed_files() {
        let inst = make_affine_instance(2, 2, 0.8).unwrap();
        let text = Instance::Affine(inst).to_toml().unwrap();
        assert!(Instance::from_toml(&text.replace("kind = \"affine\"", "kind = \"sparse\"")).is_err());
        assert!(Instance::from_toml(&text.replace("dim = 2", "dim = 3")).is_err());
        assert!(Instance::from_toml(&format!("{text}\nextra = 1\n")).is_err());
        assert!(Instance::from_toml("not toml [").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn affine_round_trip_is_bit_exact(dim in 1usize..8, seed in any::<u64>(), skew in 0.0f64..=1.0) {
            let inst = make_affine_instance(dim, seed, skew).unwrap();
            let text = Instance::Affine(inst.clone()).to_toml().unwrap();
            let Instance::Affine(back) = Instance::from_toml(&text).unwrap() else {
                panic!("wrong kind")
            };
            for (a, b) in [(&inst.m_a, &back.m_a), (&inst.m_b, &back.m_b), (&inst.m_c, &back.m_c)] {
                prop_assert_eq!(bits(a.iter().copied()), bits(b.iter().copied()));
            }
            for (a, b) in [(&inst.b_a, &back.b_a), (&inst.b_b, &back.b_b), (&inst.b_c, &back.b_c), (&inst.x_star, &back.x_star)] {
                prop_assert_eq!(bits(a.iter().copied()), bits(b.iter().copied()));
            }
            prop_assert_eq!(inst.lipschitz.to_bits(), back.lipschitz.to_bits());
            prop_assert_eq!(inst.skew_fraction.to_bits(), back.skew_fraction.to_bits());
            prop_assert_eq!(back.seed, seed);
        }
    }
}
