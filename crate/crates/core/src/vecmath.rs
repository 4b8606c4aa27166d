//! Real-vector arithmetic and the similarity kernels every other module uses.
//!
//! All accumulation happens in `f64`.

use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidVector("vector has no components".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidVector(format!(
                "component {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    /// Widens single-precision values.
    pub fn from_f32(values: &[f32]) -> Result<Self> {
        Self::new(values.iter().map(|&v| f64::from(v)).collect())
    }

    pub fn zeros(dimension: usize) -> Result<Self> {
        Self::new(vec![0.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RealVector) -> Result<f64> {
        check_dims(self.dimension(), other.dimension())?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scaled(&self, factor: f64) -> Result<RealVector> {
        RealVector::new(self.0.iter().map(|v| v * factor).collect())
    }

    /// Returns the vector divided by its norm.
    pub fn normalized(&self) -> Result<RealVector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm("cannot normalize a zero vector".into()));
        }
        self.scaled(1.0 / n)
    }

    pub fn checked_add(&self, other: &RealVector) -> Result<RealVector> {
        check_dims(self.dimension(), other.dimension())?;
        RealVector::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &RealVector) -> Result<RealVector> {
        check_dims(self.dimension(), other.dimension())?;
        RealVector::new(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl<'de> Deserialize<'de> for RealVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        RealVector::new(values).map_err(serde::de::Error::custom)
    }
}

impl Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for RealVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        RealVector::new(values)
    }
}

// Panicking operators for callers that already know the dimensions agree.
impl Add for &RealVector {
    type Output = RealVector;

    fn add(self, rhs: &RealVector) -> RealVector {
        self.checked_add(rhs).expect("vector addition")
    }
}

impl Sub for &RealVector {
    type Output = RealVector;

    fn sub(self, rhs: &RealVector) -> RealVector {
        self.checked_sub(rhs).expect("vector subtraction")
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine of the angle between `u` and `v`, clamped to `[-1, 1]`.
///
/// Zero-norm operands are an error rather than a similarity of zero: a zero
/// axis means a misconfigured pole pair.
pub fn cosine_similarity(u: &RealVector, v: &RealVector) -> Result<f64> {
    cosine_slices(u.as_slice(), v.as_slice())
}

pub(crate) fn cosine_slices(u: &[f64], v: &[f64]) -> Result<f64> {
    check_dims(u.len(), v.len())?;
    let uu = dot(u, u);
    let vv = dot(v, v);
    if uu == 0.0 || vv == 0.0 {
        return Err(Error::ZeroNorm(
            "cosine similarity with a zero-norm operand".into(),
        ));
    }
    // A single square root keeps cos(u, u) exactly 1.
    let denom = match (uu * vv).sqrt() {
        d if d.is_finite() && d > 0.0 => d,
        _ => norm(u) * norm(v),
    };
    Ok((dot(u, v) / denom).clamp(-1.0, 1.0))
}

/// `1 - arccos(cos(u, v)) / pi`, in `[0, 1]`.
pub fn angular_similarity(u: &RealVector, v: &RealVector) -> Result<f64> {
    let cos = cosine_similarity(u, v)?;
    Ok(1.0 - cos.acos() / std::f64::consts::PI)
}

/// Sample Pearson correlation coefficient.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
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
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidVector(
            "non-finite value in correlation input".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // Summation round-off can leave a constant sequence with a tiny variance.
    if sxx == 0.0 || x.iter().all(|v| *v == x[0]) {
        return Err(Error::ZeroVariance("first sequence is constant".into()));
    }
    if syy == 0.0 || y.iter().all(|v| *v == y[0]) {
        return Err(Error::ZeroVariance("second sequence is constant".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
