//! Dimensionality reduction, the logistic-regression classifier and seeded
//! train/test splitting.

mod logreg;
mod pca;
mod split;

pub use logreg::{
    logreg_fit, logreg_predict, loss_and_gradient, LogRegConfig, LogRegModel, Prediction,
    TrainingMeta,
};
pub use pca::{pca_fit, pca_transform, PcaModel, PcaTarget};
pub use split::{stratified_split, Split, SplitSpec};

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue. Each
/// eigenvector is signed so its largest-magnitude component is positive.
pub(crate) fn sorted_symmetric_eigen(matrix: DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.nrows();
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            let pivot = v.iter().copied().fold(
                0.0f64,
                |best, x| if x.abs() > best.abs() { x } else { best },
            );
            if pivot < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    (values, vectors)
}
