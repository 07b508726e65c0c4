use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A batch of finite real observations in input order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sample is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("a sample (non-finite observation)", *bad));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sorted(&self) -> SortedSample {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        SortedSample { values: v }
    }

    pub fn mean(&self) -> f64 {
        crate::numeric::neumaier_sum(self.values.iter().copied()) / self.len() as f64
    }

    /// Variance with divisor `n`.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        crate::numeric::neumaier_sum(self.values.iter().map(|x| (x - m) * (x - m))) / self.len() as f64
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Order statistics `X(1) <= ... <= X(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Wraps values that are already ascending.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        Sample::new(values.clone())?;
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("order statistics are not ascending".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

impl From<SortedSample> for Sample {
    fn from(s: SortedSample) -> Self {
        Sample { values: s.values }
    }
}
