//! Seeded train/test partitioning.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`, and
//! shuffling is `rand` 0.8's Fisher-Yates `SliceRandom::shuffle`; both are
//! pinned by the lockfile so partitions reproduce across platforms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    /// One test item for every seven training items.
    pub const DEFAULT_TEST_FRACTION: f64 = 1.0 / 8.0;

    pub fn new(test_fraction: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            test_fraction,
            seed,
            stratified: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config(format!(
                "test fraction must be in (0, 1), got {}",
                self.test_fraction
            )));
        }
        Ok(())
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: Self::DEFAULT_TEST_FRACTION,
            seed: 0,
            stratified: true,
        }
    }
}

/// Row indices of each partition, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Partitions `labels.len()` rows so the test side holds
/// `round(test_fraction * n)` rows, with each class represented in
/// proportion (largest-remainder apportionment, ties to Fair).
pub fn stratified_split(labels: &[Label], spec: &SplitSpec) -> Result<Split> {
    spec.validate()?;
    let n = labels.len();
    let n_test = (spec.test_fraction * n as f64).round() as usize;
    if n_test == 0 || n_test >= n {
        return Err(Error::DegenerateSplit(format!(
            "test fraction {} of {n} rows leaves an empty partition",
            spec.test_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut test = Vec::with_capacity(n_test);
    if spec.stratified {
        let groups: Vec<Vec<usize>> = Label::ALL
            .iter()
            .map(|&l| (0..n).filter(|&i| labels[i] == l).collect())
            .collect();
        if let Some(pos) = groups.iter().position(|g| g.is_empty()) {
            return Err(Error::EmptyClass(Label::ALL[pos].to_string()));
        }
        let quotas = apportion(n_test, &groups.iter().map(Vec::len).collect::<Vec<_>>());
        for (mut group, quota) in groups.into_iter().zip(quotas) {
            group.shuffle(&mut rng);
            test.extend_from_slice(&group[..quota]);
        }
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut rng);
        test.extend_from_slice(&all[..n_test]);
    }
    test.sort_unstable();
    let mut in_test = vec![false; n];
    for &i in &test {
        in_test[i] = true;
    }
    let train = (0..n).filter(|&i| !in_test[i]).collect();
    Ok(Split { train, test })
}

fn apportion(total: usize, sizes: &[usize]) -> Vec<usize> {
    let n: usize = sizes.iter().sum();
    let ideal: Vec<f64> = sizes
        .iter()
        .map(|&s| total as f64 * s as f64 / n as f64)
        .collect();
    let mut quotas: Vec<usize> = ideal.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - ideal[a].floor();
        let rb = ideal[b] - ideal[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut remaining = total - quotas.iter().sum::<usize>();
    for &i in order.iter().cycle().take(sizes.len() * 2) {
        if remaining == 0 {
            break;
        }
        if quotas[i] < sizes[i] {
            quotas[i] += 1;
            remaining -= 1;
        }
    }
    quotas
}
