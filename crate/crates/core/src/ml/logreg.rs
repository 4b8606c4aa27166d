use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::vecmath::{dot, norm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    /// Initial step size for each iteration; halved until the loss does not increase.
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop once the gradient norm drops below this.
    pub tolerance: f64,
    /// Coefficient of `0.5 * ||w||^2`. The bias is not penalized.
    pub l2_penalty: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 5000,
            tolerance: 1e-6,
            l2_penalty: 1e-4,
        }
    }
}

impl LogRegConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if self.tolerance.is_nan()
            || self.tolerance < 0.0
            || self.l2_penalty.is_nan()
            || self.l2_penalty < 0.0
        {
            return Err(Error::Config(
                "tolerance and l2_penalty must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub iterations: usize,
    pub final_loss: f64,
    pub final_gradient_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: LogRegConfig,
    pub training: TrainingMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub probability_fair: f64,
    pub label: Label,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Mean negative log-likelihood plus `l2/2 * ||w||^2`, and its gradient with
/// respect to `(weights, bias)`. Fair is the positive class.
pub fn loss_and_gradient(
    weights: &[f64],
    bias: f64,
    x: &[Vec<f64>],
    y: &[Label],
    l2_penalty: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (row, label) in x.iter().zip(y) {
        let target = if label.is_fair() { 1.0 } else { 0.0 };
        let z = dot(weights, row) + bias;
        loss += softplus(z) - target * z;
        let residual = sigmoid(z) - target;
        for (g, v) in grad_w.iter_mut().zip(row) {
            *g += residual * v;
        }
        grad_b += residual;
    }
    loss /= n;
    grad_b /= n;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2_penalty * w;
    }
    loss += 0.5 * l2_penalty * dot(weights, weights);
    (loss, grad_w, grad_b)
}

fn gradient_norm(grad_w: &[f64], grad_b: f64) -> f64 {
    (norm(grad_w).powi(2) + grad_b * grad_b).sqrt()
}

/// Full-batch gradient descent with step halving, starting from zero weights.
pub fn logreg_fit(x: &[Vec<f64>], y: &[Label], config: &LogRegConfig) -> Result<LogRegModel> {
    config.validate()?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            found: x.len(),
        });
    }
    let dim = x[0].len();
    for row in x {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector("non-finite training feature".into()));
        }
    }
    if !y.contains(&Label::Fair) || !y.contains(&Label::Unfair) {
        return Err(Error::SingleClass("training labels".into()));
    }

    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    let (mut loss, mut grad_w, mut grad_b) =
        loss_and_gradient(&weights, bias, x, y, config.l2_penalty);
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss { iteration: 0 });
    }

    let mut iterations = 0;
    let mut converged = gradient_norm(&grad_w, grad_b) < config.tolerance;
    while !converged && iterations < config.max_iterations {
        let mut step = config.learning_rate;
        let mut accepted = None;
        for _ in 0..60 {
            let trial_w: Vec<f64> = weights
                .iter()
                .zip(&grad_w)
                .map(|(w, g)| w - step * g)
                .collect();
            let trial_b = bias - step * grad_b;
            let trial = loss_and_gradient(&trial_w, trial_b, x, y, config.l2_penalty);
            if trial.0.is_finite() && trial.0 <= loss {
                accepted = Some((trial_w, trial_b, trial));
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((w, b, (l, gw, gb))) => {
                weights = w;
                bias = b;
                loss = l;
                grad_w = gw;
                grad_b = gb;
            }
            // No step size reduces the loss any further: numerical optimum.
            None => break,
        }
        converged = gradient_norm(&grad_w, grad_b) < config.tolerance;
    }
    if !loss.is_finite() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFiniteLoss {
            iteration: iterations,
        });
    }

    Ok(LogRegModel {
        weights,
        bias,
        config: *config,
        training: TrainingMeta {
            iterations,
            final_loss: loss,
            final_gradient_norm: gradient_norm(&grad_w, grad_b),
            converged,
        },
    })
}

/// Probability of Fair and the label (Fair iff probability > 0.5).
pub fn logreg_predict(model: &LogRegModel, x: &[Vec<f64>]) -> Result<Vec<Prediction>> {
    x.iter()
        .map(|row| {
            if row.len() != model.weights.len() {
                return Err(Error::DimensionMismatch {
                    expected: model.weights.len(),
                    found: row.len(),
                });
            }
            let p = sigmoid(dot(&model.weights, row) + model.bias);
            Ok(Prediction {
                probability_fair: p,
                label: Label::from_bool(p > 0.5),
            })
        })
        .collect()
}
