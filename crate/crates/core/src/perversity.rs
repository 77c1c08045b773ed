//! Perversities and generalized incidence bounds.
//!
//! A [`Perversity`] of depth `d` is a sequence `p_1, ..., p_d` with `p_1 = 0`
//! and unit or zero steps. It ranges from [`Perversity::zero`] to
//! [`Perversity::top`] (`p_i = i - 1`).
//!
//! Sums of perversities and the pushforward composite `p * c` are only used
//! as upper bounds on excess intersection, so they are returned as
//! [`GeneralizedBound`]s: nondecreasing, nonnegative, and free of the
//! unit-step rule.
//!
//! Indices in the public API are 1-based, matching the stratum indices of a
//! [`Stratification`](crate::strata::Stratification).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerversityError {
    #[error("a perversity needs at least one entry")]
    Empty,
    #[error("p_1 must be 0, got {0}")]
    FirstNotZero(i64),
    #[error("step p_{next} - p_{index} = {step} is not 0 or 1")]
    BadStep { index: usize, next: usize, step: i64 },
    #[error("bound entry b_{index} = {value} is negative")]
    Negative { index: usize, value: i64 },
    #[error("bound decreases at index {index}: {prev} > {value}")]
    Decreasing { index: usize, prev: i64, value: i64 },
    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },
}

/// A validated perversity `p_1, ..., p_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Perversity(Vec<u32>);

/// A nondecreasing sequence of nonnegative excess bounds `b_1, ..., b_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct GeneralizedBound(Vec<u32>);

impl Perversity {
    /// Validates `entries` as a perversity.
    ///
    /// ```
    /// use pervchow::perversity::Perversity;
    ///
    /// assert!(Perversity::new([0, 0, 1]).is_ok());
    /// assert!(Perversity::new([0, 2, 2]).is_err());
    /// assert_eq!(Perversity::new([0, 1, 2]).unwrap(), Perversity::top(3).unwrap());
    /// ```
    pub fn new(entries: impl IntoIterator<Item = i64>) -> Result<Self, PerversityError> {
        let entries: Vec<i64> = entries.into_iter().collect();
        let first = *entries.first().ok_or(PerversityError::Empty)?;
        if first != 0 {
            return Err(PerversityError::FirstNotZero(first));
        }
        for (k, pair) in entries.windows(2).enumerate() {
            let step = pair[1] - pair[0];
            if step != 0 && step != 1 {
                return Err(PerversityError::BadStep { index: k + 1, next: k + 2, step });
            }
        }
        // p_1 = 0 with unit steps already forces 0 <= p_i <= i - 1.
        Ok(Perversity(entries.into_iter().map(|v| v as u32).collect()))
    }

    pub fn zero(depth: usize) -> Result<Self, PerversityError> {
        if depth == 0 {
            return Err(PerversityError::Empty);
        }
        Ok(Perversity(vec![0; depth]))
    }

    pub fn top(depth: usize) -> Result<Self, PerversityError> {
        if depth == 0 {
            return Err(PerversityError::Empty);
        }
        Ok(Perversity((0..depth as u32).collect()))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// `p_i` for a 1-based index.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// The perversity viewed as a plain bound.
    pub fn as_bound(&self) -> GeneralizedBound {
        GeneralizedBound(self.0.clone())
    }

    /// Entrywise sum `p + q`. The result may step by more than one.
    pub fn add(&self, other: &Perversity) -> Result<GeneralizedBound, PerversityError> {
        check_depth(self.depth(), other.depth())?;
        Ok(GeneralizedBound(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// The pushforward composite with entries `p_{i - c_i} + c_i`.
    ///
    /// ```
    /// use pervchow::perversity::Perversity;
    ///
    /// let p = Perversity::new([0, 1, 1]).unwrap();
    /// let c = Perversity::new([0, 0, 1]).unwrap();
    /// assert_eq!(p.star_compose(&c).unwrap().entries(), &[0, 1, 2]);
    /// ```
    pub fn star_compose(&self, c: &Perversity) -> Result<GeneralizedBound, PerversityError> {
        check_depth(self.depth(), c.depth())?;
        let entries = (1..=self.depth())
            .map(|i| {
                let ci = c.get(i) as usize;
                // c_i <= i - 1, so i - c_i >= 1
                self.get(i - ci) + c.get(i)
            })
            .collect();
        Ok(GeneralizedBound(entries))
    }
}

impl GeneralizedBound {
    pub fn new(entries: impl IntoIterator<Item = i64>) -> Result<Self, PerversityError> {
        let entries: Vec<i64> = entries.into_iter().collect();
        if entries.is_empty() {
            return Err(PerversityError::Empty);
        }
        for (k, &v) in entries.iter().enumerate() {
            if v < 0 {
                return Err(PerversityError::Negative { index: k + 1, value: v });
            }
            if k > 0 && entries[k - 1] > v {
                return Err(PerversityError::Decreasing { index: k + 1, prev: entries[k - 1], value: v });
            }
        }
        Ok(GeneralizedBound(entries.into_iter().map(|v| v as u32).collect()))
    }

    pub fn zero(depth: usize) -> Result<Self, PerversityError> {
        Perversity::zero(depth).map(|p| p.as_bound())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &GeneralizedBound) -> Result<GeneralizedBound, PerversityError> {
        check_depth(self.depth(), other.depth())?;
        Ok(GeneralizedBound(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Entrywise comparison `a_i <= b_i`.
    pub fn leq(&self, other: &GeneralizedBound) -> Result<bool, PerversityError> {
        check_depth(self.depth(), other.depth())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// Returns the bound as a perversity when it satisfies the unit-step rule.
    pub fn to_perversity(&self) -> Option<Perversity> {
        Perversity::new(self.0.iter().map(|&v| v as i64)).ok()
    }
}

impl From<Perversity> for GeneralizedBound {
    fn from(p: Perversity) -> Self {
        GeneralizedBound(p.0)
    }
}

impl From<&Perversity> for GeneralizedBound {
    fn from(p: &Perversity) -> Self {
        p.as_bound()
    }
}

impl TryFrom<Vec<i64>> for Perversity {
    type Error = PerversityError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Perversity::new(v)
    }
}

impl From<Perversity> for Vec<i64> {
    fn from(p: Perversity) -> Self {
        p.0.into_iter().map(i64::from).collect()
    }
}

impl TryFrom<Vec<i64>> for GeneralizedBound {
    type Error = PerversityError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        GeneralizedBound::new(v)
    }
}

impl From<GeneralizedBound> for Vec<i64> {
    fn from(b: GeneralizedBound) -> Self {
        b.0.into_iter().map(i64::from).collect()
    }
}

fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[u32]) -> fmt::Result {
    write!(f, "[")?;
    for (k, v) in entries.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.0)
    }
}

impl fmt::Display for GeneralizedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.0)
    }
}

fn check_depth(left: usize, right: usize) -> Result<(), PerversityError> {
    if left != right {
        return Err(PerversityError::DepthMismatch { left, right });
    }
    Ok(())
}

/// Every perversity of the given depth, in lexicographic order.
pub fn all_perversities(depth: usize) -> Vec<Perversity> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(1 << (depth - 1));
    for mask in 0u32..(1 << (depth - 1)) {
        let mut entries = vec![0u32; depth];
        for i in 1..depth {
            entries[i] = entries[i - 1] + ((mask >> (depth - 1 - i)) & 1);
        }
        out.push(Perversity(entries));
    }
    out
}
