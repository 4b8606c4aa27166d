use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::sorted_symmetric_eigen;
use crate::error::{Error, Result};
use crate::vecmath::dot;

/// How many principal components to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcaTarget {
    ComponentCount(usize),
    /// Smallest k whose cumulative explained-variance ratio reaches this value.
    VarianceRetained(f64),
}

/// Mean-centred PCA. Features are not standardized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Kept principal directions, orthonormal, strongest first.
    pub components: Vec<Vec<f64>>,
    /// Sample variance along each kept direction.
    pub explained_variance: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// Ratios for every direction, kept or not.
    pub full_variance_ratio: Vec<f64>,
    pub target: PcaTarget,
    pub n_samples: usize,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: row.len(),
            });
        }
        let centred: Vec<f64> = row.iter().zip(&self.mean).map(|(x, m)| x - m).collect();
        Ok(self.components.iter().map(|c| dot(c, &centred)).collect())
    }

    /// Maps projected coordinates back into feature space.
    pub fn inverse_transform_row(&self, projected: &[f64]) -> Result<Vec<f64>> {
        if projected.len() != self.n_components() {
            return Err(Error::DimensionMismatch {
                expected: self.n_components(),
                found: projected.len(),
            });
        }
        let mut out = self.mean.clone();
        for (coef, component) in projected.iter().zip(&self.components) {
            for (o, c) in out.iter_mut().zip(component) {
                *o += coef * c;
            }
        }
        Ok(out)
    }
}

pub fn pca_fit<R: AsRef<[f64]>>(rows: &[R], target: PcaTarget) -> Result<PcaModel> {
    if rows.len() < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            found: rows.len(),
        });
    }
    let dim = rows[0].as_ref().len();
    if dim == 0 {
        return Err(Error::InvalidVector("rows have no features".into()));
    }
    for row in rows {
        let row = row.as_ref();
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector("non-finite feature value".into()));
        }
    }
    match target {
        PcaTarget::ComponentCount(k) if k == 0 || k > dim => {
            return Err(Error::Config(format!(
                "component count must be in 1..={dim}, got {k}"
            )))
        }
        PcaTarget::VarianceRetained(q) if !(q > 0.0 && q <= 1.0) => {
            return Err(Error::Config(format!(
                "variance to retain must be in (0, 1], got {q}"
            )))
        }
        _ => {}
    }

    let n = rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row.as_ref()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for row in rows {
        let centred: Vec<f64> = row.as_ref().iter().zip(&mean).map(|(x, m)| x - m).collect();
        for i in 0..dim {
            for j in i..dim {
                cov[(i, j)] += centred[i] * centred[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let v = cov[(i, j)] / (n - 1.0);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }

    let total: f64 = (0..dim).map(|i| cov[(i, i)]).sum();
    if total <= 0.0 {
        return Err(Error::ZeroVariance("all rows are identical".into()));
    }
    let (values, vectors) = sorted_symmetric_eigen(cov);
    let variances: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let ratios: Vec<f64> = variances.iter().map(|v| v / total).collect();

    let keep = match target {
        PcaTarget::ComponentCount(k) => k,
        PcaTarget::VarianceRetained(q) => {
            let mut cumulative = 0.0;
            let mut k = dim;
            for (i, r) in ratios.iter().enumerate() {
                cumulative += r;
                // Relative slack absorbs round-off when q is exactly attainable.
                if cumulative >= q - 1e-12 {
                    k = i + 1;
                    break;
                }
            }
            k
        }
    };

    Ok(PcaModel {
        mean,
        components: vectors[..keep].to_vec(),
        explained_variance: variances[..keep].to_vec(),
        explained_variance_ratio: ratios[..keep].to_vec(),
        full_variance_ratio: ratios,
        target,
        n_samples: rows.len(),
    })
}

pub fn pca_transform<R: AsRef<[f64]>>(model: &PcaModel, rows: &[R]) -> Result<Vec<Vec<f64>>> {
    rows.iter()
        .map(|r| model.transform_row(r.as_ref()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                (0..dim)
                    .map(|j| rng.gen_range(-1.0..1.0) * (j + 1) as f64)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn collinear_rows_keep_one_component() {
        let dir = [1.0, -2.0, 0.5, 3.0, 1.0];
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| dir.iter().map(|d| 0.1 + d * (i as f64 - 4.0)).collect())
            .collect();
        let model = pca_fit(&rows, PcaTarget::VarianceRetained(0.95)).unwrap();
        assert_eq!(model.n_components(), 1);
        assert!((model.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_square_splits_variance_evenly() {
        let rows = vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        let model = pca_fit(&rows, PcaTarget::ComponentCount(2)).unwrap();
        assert!((model.explained_variance_ratio[0] - 0.5).abs() < 1e-12);
        assert!((model.explained_variance_ratio[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mean_row_maps_to_origin() {
        let rows = random_rows(30, 4, 3);
        let model = pca_fit(&rows, PcaTarget::ComponentCount(3)).unwrap();
        let z = model.transform_row(&model.mean).unwrap();
        assert!(z.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn full_rank_reconstruction() {
        let rows = random_rows(25, 5, 11);
        let model = pca_fit(&rows, PcaTarget::ComponentCount(5)).unwrap();
        for row in &rows {
            let back = model
                .inverse_transform_row(&model.transform_row(row).unwrap())
                .unwrap();
            for (a, b) in back.iter().zip(row) {
                assert!((a - b).abs() < 1e-8);
            }
        }
        let total: f64 = model.explained_variance_ratio.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn offset_along_first_component() {
        let rows = random_rows(40, 3, 5);
        let model = pca_fit(&rows, PcaTarget::ComponentCount(3)).unwrap();
        let row: Vec<f64> = model
            .mean
            .iter()
            .zip(&model.components[0])
            .map(|(m, c)| m + 2.5 * c)
            .collect();
        let z = model.transform_row(&row).unwrap();
        assert!((z[0] - 2.5).abs() < 1e-12);
        assert!(z[1].abs() < 1e-12 && z[2].abs() < 1e-12);
    }

    #[test]
    fn components_orthonormal_and_ratios_sorted() {
        for seed in 0..20 {
            let rows = random_rows(50, 5, seed);
            let model = pca_fit(&rows, PcaTarget::ComponentCount(5)).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (dot(&model.components[i], &model.components[j]) - expect).abs() < 1e-8
                    );
                }
            }
            for w in model.explained_variance_ratio.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn refitting_transformed_data_keeps_the_spectrum() {
        let rows = random_rows(60, 4, 8);
        let model = pca_fit(&rows, PcaTarget::ComponentCount(4)).unwrap();
        let projected = pca_transform(&model, &rows).unwrap();
        let again = pca_fit(&projected, PcaTarget::ComponentCount(4)).unwrap();
        for (a, b) in model
            .explained_variance_ratio
            .iter()
            .zip(&again.explained_variance_ratio)
        {
            assert!((a - b).abs() < 1e-10);
        }
        for row in &projected {
            let back = again
                .inverse_transform_row(&again.transform_row(row).unwrap())
                .unwrap();
            for (x, y) in back.iter().zip(row) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            pca_fit(&[vec![1.0, 2.0]], PcaTarget::ComponentCount(1)),
            Err(Error::TooFewItems { .. })
        ));
        assert!(matches!(
            pca_fit(
                &[vec![1.0, 2.0], vec![1.0, 2.0]],
                PcaTarget::ComponentCount(1)
            ),
            Err(Error::ZeroVariance(_))
        ));
        let model = pca_fit(&random_rows(5, 3, 1), PcaTarget::ComponentCount(2)).unwrap();
        assert!(matches!(
            model.transform_row(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(pca_fit(&random_rows(5, 3, 1), PcaTarget::ComponentCount(4)).is_err());
        assert!(pca_fit(&random_rows(5, 3, 1), PcaTarget::VarianceRetained(1.5)).is_err());
    }
}
