//! Incidence calculus for generalized cocycles.
//!
//! A [`CocyclePattern`] describes a cycle on `X × Y` that is generically
//! equidimensional over `X`: over `X − X¹` its fibers have dimension `n − t`,
//! and over `X^i − X^{i+1}` they grow by at most `excess(i)`. A pattern has
//! perversity `p̄` when `excess(i) ≤ p_i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{from_index_map, to_index_map, CycleError, CyclePattern, Incidence};
use crate::perversity::{GeneralizedBound, PerversityError};
use crate::strata::Stratification;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("pattern has {got} excess entries, stratification has depth {depth}")]
    Length { got: usize, depth: usize },
    #[error("bound has depth {bound}, stratification has depth {depth}")]
    DepthMismatch { bound: usize, depth: usize },
    #[error("codimension {t} exceeds target dimension {n}")]
    CodimTooLarge { t: u32, n: u32 },
    #[error("fiber over X^{index} would have dimension {fiber} > target dimension {n}")]
    FiberTooLarge { index: usize, fiber: u32, n: u32 },
    #[error("patterns live on different stratifications")]
    StratificationMismatch,
    #[error("{what}: expected {expected}, got {got}")]
    Count { what: &'static str, expected: u32, got: u32 },
    #[error("source dimension {n} is below target dimension {d}, so the map is not dominant")]
    NotDominant { n: u32, d: u32 },
    #[error("fiber dimension {got} over X^{index} is below the generic fiber dimension {generic}")]
    FiberBelowGeneric { index: usize, got: u32, generic: u32 },
    #[error("rank {got} at stratum {index} is below the generic rank {generic}")]
    RankBelowGeneric { index: usize, got: u32, generic: u32 },
    #[error("rank drops from {prev} to {got} at stratum {index}")]
    RankDecreasing { index: usize, prev: u32, got: u32 },
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Perversity(#[from] PerversityError),
}

/// Fiber-dimension profile of a correspondence from `X` to a `Y` of dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CocyclePattern {
    strata: Stratification,
    t: u32,
    target_dim: u32,
    excess: Vec<u32>,
}

/// Wire form: `{"t": 1, "targetDim": 1, "excess": {"1": 0, "2": 1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CocycleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub t: u32,
    pub target_dim: u32,
    pub excess: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Stratification>,
}

impl CocyclePattern {
    pub fn new(strata: &Stratification, t: u32, target_dim: u32, excess: Vec<u32>) -> Result<Self, CocycleError> {
        if excess.len() != strata.depth() {
            return Err(CocycleError::Length { got: excess.len(), depth: strata.depth() });
        }
        if t > target_dim {
            return Err(CocycleError::CodimTooLarge { t, n: target_dim });
        }
        for (k, &e) in excess.iter().enumerate() {
            let fiber = target_dim - t + e;
            if fiber > target_dim {
                return Err(CocycleError::FiberTooLarge { index: k + 1, fiber, n: target_dim });
            }
        }
        Ok(CocyclePattern { strata: strata.clone(), t, target_dim, excess })
    }

    /// A cocycle with no excess anywhere, such as the graph of a flat map.
    pub fn proper(strata: &Stratification, t: u32, target_dim: u32) -> Result<Self, CocycleError> {
        CocyclePattern::new(strata, t, target_dim, vec![0; strata.depth()])
    }

    pub fn from_doc(doc: CocycleDoc, strata: &Stratification) -> Result<Self, CocycleError> {
        let strata = doc.strata.as_ref().unwrap_or(strata);
        let excess = from_index_map(&doc.excess, strata.depth())?;
        CocyclePattern::new(strata, doc.t, doc.target_dim, excess)
    }

    pub fn to_doc(&self) -> CocycleDoc {
        CocycleDoc {
            schema: None,
            t: self.t,
            target_dim: self.target_dim,
            excess: to_index_map(&self.excess),
            strata: None,
        }
    }

    pub fn strata(&self) -> &Stratification {
        &self.strata
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn target_dim(&self) -> u32 {
        self.target_dim
    }

    pub fn excess(&self) -> &[u32] {
        &self.excess
    }

    /// Fiber dimension over `X^i − X^{i+1}`.
    pub fn fiber_dim(&self, i: usize) -> u32 {
        self.target_dim - self.t + self.excess[i - 1]
    }

    /// The excess profile as a bound; the smallest bound this pattern passes
    /// when it happens to be nondecreasing.
    pub fn excess_bound(&self) -> Option<GeneralizedBound> {
        GeneralizedBound::new(self.excess.iter().map(|&e| i64::from(e))).ok()
    }

    pub fn explain_cocycle(&self, p: &GeneralizedBound) -> Result<Verdict, CocycleError> {
        if p.depth() != self.strata.depth() {
            return Err(CocycleError::DepthMismatch { bound: p.depth(), depth: self.strata.depth() });
        }
        let (n, t) = (self.target_dim, self.t);
        let failures = self
            .cocycle_failures(p)
            .map(|i| {
                format!(
                    "X^{i}: fiber dim {} ≤ n-t+p_i = {n}-{t}+{} = {} fails",
                    self.fiber_dim(i),
                    p.get(i),
                    i64::from(n) - i64::from(t) + i64::from(p.get(i))
                )
            })
            .collect();
        Ok(Verdict::from_failures("cocycle", &format!("fiber dim ≤ n-t+p_i for p = {p}"), failures))
    }

    /// Whether `excess(i) ≤ p_i` for every `i`.
    ///
    /// ```
    /// use pervchow::cocycles::CocyclePattern;
    /// use pervchow::perversity::GeneralizedBound;
    /// use pervchow::strata::Stratification;
    ///
    /// let cone = Stratification::isolated_vertex(3).unwrap();
    /// // a resolution with a curve over the vertex
    /// let res = CocyclePattern::new(&cone, 3, 3, vec![1, 1, 1]).unwrap();
    /// assert!(!res.check_cocycle(&GeneralizedBound::new([0, 1, 1]).unwrap()).unwrap());
    /// // every stratum is the vertex, so only a bound with p_1 = 1 admits it
    /// assert!(res.check_cocycle(&GeneralizedBound::new([1, 1, 1]).unwrap()).unwrap());
    /// ```
    pub fn check_cocycle(&self, p: &GeneralizedBound) -> Result<bool, CocycleError> {
        if p.depth() != self.strata.depth() {
            return Err(CocycleError::DepthMismatch { bound: p.depth(), depth: self.strata.depth() });
        }
        Ok(self.cocycle_failures(p).next().is_none())
    }

    fn cocycle_failures<'a>(&'a self, p: &'a GeneralizedBound) -> impl Iterator<Item = usize> + 'a {
        (1..=self.excess.len()).filter(move |&i| self.excess[i - 1] > p.get(i))
    }

    /// Fiberwise join of cocycles valued in `ℙ^s` and `ℙ^t`, valued in `ℙ^{s+t+1}`.
    pub fn join(&self, other: &CocyclePattern) -> Result<CocyclePattern, CocycleError> {
        if self.strata != other.strata {
            return Err(CocycleError::StratificationMismatch);
        }
        for c in [self, other] {
            if c.target_dim != c.t {
                return Err(CocycleError::Count { what: "join input target dimension", expected: c.t, got: c.target_dim });
            }
        }
        let t = self.t + other.t;
        let excess = self.excess.iter().zip(&other.excess).map(|(a, b)| a + b).collect();
        CocyclePattern::new(&self.strata, t, t + 1, excess)
    }

    /// Pushforward along a closed immersion `Y ↪ Y′` of codimension `c`.
    pub fn push_closed_immersion(&self, c: u32) -> CocyclePattern {
        CocyclePattern {
            strata: self.strata.clone(),
            t: self.t + c,
            target_dim: self.target_dim + c,
            excess: self.excess.clone(),
        }
    }

    fn check_sliceable(&self, count: u32) -> Result<(), CocycleError> {
        if self.target_dim != self.t {
            return Err(CocycleError::Count { what: "slicing needs target ℙ^t, target dimension", expected: self.t, got: self.target_dim });
        }
        if count != self.t {
            return Err(CocycleError::Count { what: "hyperplane count", expected: self.t, got: count });
        }
        Ok(())
    }

    /// Slices a cocycle valued in `ℙ^t` with `t` generic hyperplanes, giving a
    /// `(d − t)`-cycle on `X` with `dim ≤ d − t − i + excess(i)` on `X^i`.
    ///
    /// ```
    /// use pervchow::cocycles::CocyclePattern;
    /// use pervchow::cycles::Incidence;
    /// use pervchow::strata::Stratification;
    ///
    /// let cone = Stratification::isolated_vertex(3).unwrap();
    /// let a = CocyclePattern::new(&cone, 1, 1, vec![0, 0, 1]).unwrap();
    /// let cycle = a.slice_with_hyperplanes(1).unwrap();
    /// assert_eq!(cycle.dim(), 2);
    /// assert_eq!(cycle.incidence(), &[Incidence::Dim(1), Incidence::Dim(0), Incidence::Dim(0)]);
    /// ```
    pub fn slice_with_hyperplanes(&self, count: u32) -> Result<CyclePattern, CocycleError> {
        self.check_sliceable(count)?;
        let d = self.strata.dim() as i64;
        let t = i64::from(self.t);
        let r = d - t;
        if r < 0 {
            return Err(CocycleError::Count { what: "hyperplane count against dim X", expected: d as u32, got: count });
        }
        let incidence = (1..=self.excess.len())
            .map(|i| Incidence::from_signed((d - i as i64 + i64::from(self.excess[i - 1]) - t).min(r)))
            .collect();
        Ok(CyclePattern::new(&self.strata, r as u32, incidence)?)
    }

    /// Dimensions of the sliced cycle meeting given closed sets `C_i` in each
    /// stratum: `dim C_i + excess(i) − t`, so codimension `t − excess(i)` in `C_i`.
    pub fn slice_meeting(&self, count: u32, sets: &[Incidence]) -> Result<Vec<Incidence>, CocycleError> {
        self.check_sliceable(count)?;
        if sets.len() != self.excess.len() {
            return Err(CocycleError::Length { got: sets.len(), depth: self.excess.len() });
        }
        Ok(sets
            .iter()
            .zip(&self.excess)
            .map(|(c, &e)| match c {
                Incidence::Empty => Incidence::Empty,
                Incidence::Dim(c) => Incidence::from_signed(i64::from(*c) + i64::from(e) - i64::from(self.t)),
            })
            .collect())
    }

    /// Cap product with an `r`-cycle: the cycle's piece in each stratum is cut
    /// by the `t` hyperplane slices of the cocycle, giving dimension
    /// `incidence(i) + excess(i) − t` there.
    ///
    /// A cocycle of perversity `p̄` against a cycle of perversity `q̄` gives an
    /// `(r − t)`-cycle of perversity `p̄ + q̄`.
    pub fn cap(&self, cycle: &CyclePattern) -> Result<CyclePattern, CocycleError> {
        if &self.strata != cycle.strata() {
            return Err(CocycleError::StratificationMismatch);
        }
        if cycle.dim() < self.t {
            return Err(CocycleError::Count { what: "cycle dimension for cap", expected: self.t, got: cycle.dim() });
        }
        let r = i64::from(cycle.dim() - self.t);
        let incidence = cycle
            .incidence()
            .iter()
            .zip(&self.excess)
            .map(|(b, &e)| match b {
                Incidence::Empty => Incidence::Empty,
                Incidence::Dim(b) => Incidence::from_signed((i64::from(*b) + i64::from(e) - i64::from(self.t)).min(r)),
            })
            .collect();
        Ok(CyclePattern::new(&self.strata, r as u32, incidence)?)
    }
}

/// Cocycle of a dominant morphism `f: Y → X` from its fiber dimensions over
/// each stratum: `t = d`, `excess(i) = fiber_dims(i) − (n − d)`.
///
/// ```
/// use pervchow::cocycles::morphism_fiber_pattern;
/// use pervchow::strata::Stratification;
///
/// // small resolution of a threefold node, a ℙ¹ over the vertex
/// let cone = Stratification::isolated_vertex(3).unwrap();
/// let c = morphism_fiber_pattern(&cone, &[1, 1, 1], 3).unwrap();
/// assert_eq!(c.excess(), &[1, 1, 1]);
/// ```
pub fn morphism_fiber_pattern(strata: &Stratification, fiber_dims: &[u32], n: u32) -> Result<CocyclePattern, CocycleError> {
    let d = strata.dim() as u32;
    if n < d {
        return Err(CocycleError::NotDominant { n, d });
    }
    if fiber_dims.len() != strata.depth() {
        return Err(CocycleError::Length { got: fiber_dims.len(), depth: strata.depth() });
    }
    let generic = n - d;
    let excess = fiber_dims
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            f.checked_sub(generic).ok_or(CocycleError::FiberBelowGeneric { index: k + 1, got: f, generic })
        })
        .collect::<Result<_, _>>()?;
    CocyclePattern::new(strata, d, n, excess)
}

/// Ranks of a coherent sheaf: generic rank and the rank at each stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankProfile {
    pub generic: u32,
    #[serde(with = "index_map")]
    pub strata: Vec<u32>,
}

mod index_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u32], s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(v.iter().enumerate().map(|(k, r)| ((k + 1).to_string(), *r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u32>, D::Error> {
        let map = BTreeMap::<String, u32>::deserialize(d)?;
        let depth = map.len();
        crate::cycles::from_index_map(&map, depth).map_err(serde::de::Error::custom)
    }
}

/// Perversity determined by a sheaf's rank jumps: `p_i = rank_i − generic`.
///
/// ```
/// use pervchow::cocycles::{rank_to_incidence, RankProfile};
///
/// let sheaf = RankProfile { generic: 2, strata: vec![2, 2, 3] };
/// let (indices, p) = rank_to_incidence(&sheaf).unwrap();
/// assert_eq!(indices, vec![1, 2, 3]);
/// assert_eq!(p.entries(), &[0, 0, 1]);
/// ```
pub fn rank_to_incidence(profile: &RankProfile) -> Result<(Vec<usize>, GeneralizedBound), CocycleError> {
    let mut prev = profile.generic;
    let mut out = Vec::with_capacity(profile.strata.len());
    for (k, &r) in profile.strata.iter().enumerate() {
        if r < profile.generic {
            return Err(CocycleError::RankBelowGeneric { index: k + 1, got: r, generic: profile.generic });
        }
        if r < prev {
            return Err(CocycleError::RankDecreasing { index: k + 1, prev, got: r });
        }
        prev = r;
        out.push(i64::from(r - profile.generic));
    }
    let indices = (1..=out.len()).collect();
    Ok((indices, GeneralizedBound::new(out)?))
}
