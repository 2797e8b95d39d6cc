//! Agreement and accuracy measures for validating annotations.

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("rating matrix has no items")]
    NoItems,
    #[error("rating matrix has no categories")]
    NoCategories,
    #[error("row {row} has {got} categories, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("row {row} sums to {got} ratings, expected {expected}")]
    RaterCountMismatch { row: usize, got: u64, expected: u64 },
    #[error("need at least 2 raters, got {0}")]
    TooFewRaters(u64),
    #[error("expected agreement is 1; every rating falls in one category")]
    DegenerateAgreement,
    #[error("empty prediction set")]
    EmptyPrediction,
}

/// Items × categories counts; every row sums to the same rater count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct RatingMatrix {
    rows: Vec<Vec<u64>>,
    raters: u64,
}

impl RatingMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, MetricError> {
        let first = rows.first().ok_or(MetricError::NoItems)?;
        let k = first.len();
        if k == 0 {
            return Err(MetricError::NoCategories);
        }
        let raters: u64 = first.iter().sum();
        if raters < 2 {
            return Err(MetricError::TooFewRaters(raters));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(MetricError::RaggedRow { row: i, got: r.len(), expected: k });
            }
            let sum: u64 = r.iter().sum();
            if sum != raters {
                return Err(MetricError::RaterCountMismatch { row: i, got: sum, expected: raters });
            }
        }
        Ok(Self { rows, raters })
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn raters(&self) -> u64 {
        self.raters
    }

    pub fn categories(&self) -> usize {
        self.rows[0].len()
    }
}

impl TryFrom<Vec<Vec<u64>>> for RatingMatrix {
    type Error = MetricError;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self, Self::Error> {
        Self::new(rows)
    }
}

impl From<RatingMatrix> for Vec<Vec<u64>> {
    fn from(m: RatingMatrix) -> Self {
        m.rows
    }
}

/// Fleiss' kappa: `(P̄ − P̄e) / (1 − P̄e)` with mean per-item agreement `P̄`
/// and expected agreement `P̄e` from the category marginals.
pub fn fleiss_kappa(m: &RatingMatrix) -> Result<f64, MetricError> {
    let n = m.raters as f64;
    let items = m.rows.len() as f64;
    let total = items * n;
    let mut p_bar = 0.0;
    let mut marginals = vec![0u64; m.categories()];
    for row in &m.rows {
        let agree: f64 = row.iter().map(|&c| (c * c.saturating_sub(1)) as f64).sum();
        p_bar += agree / (n * (n - 1.0));
        for (j, &c) in row.iter().enumerate() {
            marginals[j] += c;
        }
    }
    p_bar /= items;
    if marginals.iter().any(|&c| c as f64 == total) {
        return Err(MetricError::DegenerateAgreement);
    }
    let p_e: f64 = marginals.iter().map(|&c| (c as f64 / total).powi(2)).sum();
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// `|predicted ∩ gold| / |predicted|` over sets of labeled items.
pub fn precision<T: Eq + Hash>(predicted: &HashSet<T>, gold: &HashSet<T>) -> Result<f64, MetricError> {
    if predicted.is_empty() {
        return Err(MetricError::EmptyPrediction);
    }
    Ok(predicted.intersection(gold).count() as f64 / predicted.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> RatingMatrix {
        RatingMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn perfect_agreement() {
        assert_eq!(fleiss_kappa(&m(&[&[3, 0], &[0, 3], &[3, 0]])).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_case() {
        // P̄ = (1 + 1/3)/2 = 2/3, P̄e = (5/6)² + (1/6)² = 13/18
        let k = fleiss_kappa(&m(&[&[3, 0], &[2, 1]])).unwrap();
        assert!((k - (-0.2)).abs() < 1e-12, "{k}");
    }

    #[test]
    fn degenerate() {
        assert_eq!(fleiss_kappa(&m(&[&[3, 0], &[3, 0]])), Err(MetricError::DegenerateAgreement));
    }

    #[test]
    fn matrix_invariants() {
        assert!(matches!(RatingMatrix::new(vec![vec![3, 0], vec![1, 1]]), Err(MetricError::RaterCountMismatch { .. })));
        assert!(matches!(RatingMatrix::new(vec![vec![1, 0]]), Err(MetricError::TooFewRaters(1))));
        assert!(serde_json::from_str::<RatingMatrix>("[[2,1],[3,0]]").is_ok());
        assert!(serde_json::from_str::<RatingMatrix>("[[2,1],[3,1]]").is_err());
    }

    #[test]
    fn precision_examples() {
        let set = |xs: &[&'static str]| xs.iter().copied().collect::<HashSet<_>>();
        assert_eq!(precision(&set(&["a", "b", "c"]), &set(&["a", "b", "c"])).unwrap(), 1.0);
        assert_eq!(precision(&set(&["a", "b", "c", "d"]), &set(&["a", "b", "c"])).unwrap(), 0.75);
        assert_eq!(precision(&set(&[]), &set(&["a"])), Err(MetricError::EmptyPrediction));
    }
}
