//! Projection of embeddings onto the span of the axes, and k-means over the
//! resulting coefficients.
//!
//! The axes are generally not orthogonal, so coefficients come from the Gram
//! system `G c = b` with `b_i = axis_i . t`.

use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axes::AxisSet;
use crate::error::{Error, Result};
use crate::ml::sorted_symmetric_eigen;
use crate::vecmath::{dot, norm, RealVector};

/// Eigenvalues at or below this fraction of the largest count as zero.
pub const RANK_EPSILON: f64 = 1e-10;
/// Above this condition number the solve switches to a truncated pseudo-inverse.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Tikhonov shift as a fraction of the mean Gram diagonal.
pub const RIDGE_FRACTION: f64 = 1e-10;

pub const MAX_KMEANS_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Regularized,
    PseudoInverse,
}

#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    names: Vec<String>,
    vectors: Vec<RealVector>,
    gram: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
    effective_rank: usize,
    condition_number: f64,
    ridge: f64,
    mode: SolveMode,
}

impl SubspaceBasis {
    pub fn new(names: Vec<String>, vectors: Vec<RealVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::TooFewItems {
                needed: 1,
                found: 0,
            });
        }
        if names.len() != vectors.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: vectors.len(),
            });
        }
        let dim = vectors[0].dimension();
        if let Some(v) = vectors.iter().find(|v| v.dimension() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dimension(),
            });
        }
        let n = vectors.len();
        let mut gram = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let g = dot(vectors[i].as_slice(), vectors[j].as_slice());
                gram[i][j] = g;
                gram[j][i] = g;
            }
        }
        let (eigenvalues, eigenvectors) =
            sorted_symmetric_eigen(DMatrix::from_fn(n, n, |i, j| gram[i][j]));
        let max = eigenvalues[0].max(0.0);
        let min = eigenvalues[n - 1];
        let effective_rank = eigenvalues
            .iter()
            .filter(|&&l| l > RANK_EPSILON * max)
            .count();
        let condition_number = if min > 0.0 { max / min } else { f64::INFINITY };
        let trace: f64 = (0..n).map(|i| gram[i][i]).sum();
        let mode = if condition_number > CONDITION_LIMIT {
            SolveMode::PseudoInverse
        } else {
            SolveMode::Regularized
        };
        Ok(Self {
            names,
            vectors,
            gram,
            eigenvalues,
            eigenvectors,
            effective_rank,
            condition_number,
            ridge: RIDGE_FRACTION * trace / n as f64,
            mode,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.vectors[0].dimension()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vectors(&self) -> &[RealVector] {
        &self.vectors
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    /// Gram eigenvalues, largest first.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn effective_rank(&self) -> usize {
        self.effective_rank
    }

    /// Ratio of extreme Gram eigenvalues; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    pub fn solve_mode(&self) -> SolveMode {
        self.mode
    }

    /// Coefficients `c` for right-hand side `b`, through the cached
    /// eigendecomposition.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let max = self.eigenvalues[0].max(0.0);
        let mut c = vec![0.0; n];
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let inverse = match self.mode {
                SolveMode::Regularized => 1.0 / (lambda + self.ridge),
                SolveMode::PseudoInverse if *lambda > RANK_EPSILON * max => 1.0 / lambda,
                SolveMode::PseudoInverse => continue,
            };
            let weight = dot(v, b) * inverse;
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += weight * vi;
            }
        }
        c
    }

    fn combine(&self, coefficients: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension()];
        for (c, v) in coefficients.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }
}

/// Conditioning facts about a basis, for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisSummary {
    pub names: Vec<String>,
    pub norms: Vec<f64>,
    pub gram: Vec<Vec<f64>>,
    /// Pairwise cosines between basis vectors.
    pub cosines: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub effective_rank: usize,
    pub condition_number: Option<f64>,
    pub solve_mode: SolveMode,
}

impl SubspaceBasis {
    pub fn summary(&self) -> BasisSummary {
        let norms: Vec<f64> = self.vectors.iter().map(RealVector::norm).collect();
        let cosines = self
            .gram
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, g)| (g / (norms[i] * norms[j])).clamp(-1.0, 1.0))
                    .collect()
            })
            .collect();
        BasisSummary {
            names: self.names.clone(),
            norms,
            gram: self.gram.clone(),
            cosines,
            eigenvalues: self.eigenvalues.clone(),
            effective_rank: self.effective_rank,
            condition_number: self
                .condition_number
                .is_finite()
                .then_some(self.condition_number),
            solve_mode: self.mode,
        }
    }
}

pub fn build_basis(axes: &AxisSet) -> Result<SubspaceBasis> {
    SubspaceBasis::new(
        axes.names().into_iter().map(String::from).collect(),
        axes.vectors().cloned().collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    /// Component inside the span.
    pub projected: RealVector,
    /// `t - projected`.
    pub residual: RealVector,
    pub residual_norm: f64,
}

pub fn project(basis: &SubspaceBasis, t: &RealVector) -> Result<Projection> {
    if t.dimension() != basis.dimension() {
        return Err(Error::DimensionMismatch {
            expected: basis.dimension(),
            found: t.dimension(),
        });
    }
    let b: Vec<f64> = basis
        .vectors
        .iter()
        .map(|v| dot(v.as_slice(), t.as_slice()))
        .collect();
    let mut coefficients = basis.solve(&b);
    if basis.mode == SolveMode::Regularized {
        // One refinement step against the unshifted system tightens the
        // orthogonality of the residual.
        let gc: Vec<f64> = basis
            .gram
            .iter()
            .map(|row| dot(row, &coefficients))
            .collect();
        let r: Vec<f64> = b.iter().zip(&gc).map(|(x, y)| x - y).collect();
        for (c, d) in coefficients.iter_mut().zip(basis.solve(&r)) {
            *c += d;
        }
    }
    let projected = basis.combine(&coefficients);
    let residual: Vec<f64> = t.iter().zip(&projected).map(|(x, p)| x - p).collect();
    let residual_norm = norm(&residual);
    Ok(Projection {
        coefficients,
        projected: RealVector::new(projected)?,
        residual: RealVector::new(residual)?,
        residual_norm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Within-cluster sum of squares after each assignment step.
    pub inertia_history: Vec<f64>,
}

impl Clustering {
    pub fn inertia(&self) -> f64 {
        self.inertia_history.last().copied().unwrap_or(0.0)
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid, lowest index on ties.
fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Lloyd's k-means. The first centroid is a seeded random point; each further
/// centroid is the point farthest from those already chosen (lowest index on
/// ties). Stops when assignments repeat or after 100 iterations; an emptied
/// cluster keeps its previous centroid.
pub fn cluster_projections<P: AsRef<[f64]>>(
    points: &[P],
    k: usize,
    seed: u64,
) -> Result<Clustering> {
    if k == 0 {
        return Err(Error::Config("cluster count must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::TooFewItems {
            needed: k,
            found: points.len(),
        });
    }
    let dim = points[0].as_ref().len();
    for p in points {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector("non-finite coordinate".into()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..points.len());
    let mut centroids = vec![points[first].as_ref().to_vec()];
    while centroids.len() < k {
        let mut far = (0, -1.0);
        for (i, p) in points.iter().enumerate() {
            let d = nearest(p.as_ref(), &centroids).1;
            if d > far.1 {
                far = (i, d);
            }
        }
        centroids.push(points[far.0].as_ref().to_vec());
    }

    let mut assignments: Vec<usize> = Vec::new();
    let mut inertia_history = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_KMEANS_ITERATIONS {
        iterations += 1;
        let mut inertia = 0.0;
        let next: Vec<usize> = points
            .iter()
            .map(|p| {
                let (j, d) = nearest(p.as_ref(), &centroids);
                inertia += d;
                j
            })
            .collect();
        inertia_history.push(inertia);
        if next == assignments {
            break;
        }
        assignments = next;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &j) in points.iter().zip(&assignments) {
            counts[j] += 1;
            for (s, x) in sums[j].iter_mut().zip(p.as_ref()) {
                *s += x;
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            }
        }
    }
    Ok(Clustering {
        assignments,
        centroids,
        iterations,
        inertia_history,
    })
}

/// CSV `text,c1..cn,residual_norm[,cluster]`.
pub fn write_projections_csv<W: Write>(
    texts: &[String],
    projections: &[Projection],
    clusters: Option<&[usize]>,
    sink: W,
) -> Result<()> {
    if texts.len() != projections.len() {
        return Err(Error::LengthMismatch {
            left: texts.len(),
            right: projections.len(),
        });
    }
    if let Some(c) = clusters {
        if c.len() != texts.len() {
            return Err(Error::LengthMismatch {
                left: texts.len(),
                right: c.len(),
            });
        }
    }
    let width = projections.first().map_or(0, |p| p.coefficients.len());
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["text".to_string()];
    header.extend((1..=width).map(|i| format!("c{i}")));
    header.push("residual_norm".into());
    if clusters.is_some() {
        header.push("cluster".into());
    }
    w.write_record(&header)?;
    for (i, (text, p)) in texts.iter().zip(projections).enumerate() {
        let mut record = vec![text.clone()];
        record.extend(p.coefficients.iter().map(|c| c.to_string()));
        record.push(p.residual_norm.to_string());
        if let Some(c) = clusters {
            record.push(c[i].to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
