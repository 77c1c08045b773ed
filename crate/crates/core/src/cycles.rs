//! Incidence patterns of algebraic cycles on stratified varieties.
//!
//! A [`CyclePattern`] records, for an `r`-cycle `α`, the declared dimension of
//! `|α| ∩ X^i` for every stratum index `i`. All checks here are dimension
//! inequalities on those declarations: an `r`-cycle has perversity `p̄` when
//! `dim(|α| ∩ X^i) ≤ r - i + p_i` for every `i`.
//!
//! Dimensions are declared by the caller and are not verified against any
//! geometry. [`Incidence::Empty`] marks an empty intersection and passes
//! every inequality.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perversity::{GeneralizedBound, Perversity, PerversityError};
use crate::strata::Stratification;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("pattern has {got} incidence entries, stratification has depth {depth}")]
    Length { got: usize, depth: usize },
    #[error("bound has depth {bound}, stratification has depth {depth}")]
    DepthMismatch { bound: usize, depth: usize },
    #[error("incidence with X^{index} has dimension {dim} > cycle dimension {r}")]
    IncidenceTooLarge { index: usize, dim: u32, r: u32 },
    #[error("no stratum is labeled {0:?}")]
    UnknownLabel(String),
    #[error("patterns live on different stratifications")]
    StratificationMismatch,
    #[error("joint incidence at X^{index} exceeds {what}")]
    JointTooLarge { index: usize, what: &'static str },
    #[error("fiber {label:?} has dimension {got}, family has fiber dimension {expected}")]
    FiberDimension { label: String, got: u32, expected: u32 },
    #[error("certificate has no fiber at parameter {0:?}")]
    MissingEndpoint(&'static str),
    #[error("missing incidence entry for stratum {0}")]
    MissingEntry(usize),
    #[error("bad incidence key {0:?}")]
    BadKey(String),
    #[error(transparent)]
    Perversity(#[from] PerversityError),
}

/// Dimension of an intersection, or [`Incidence::Empty`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Incidence {
    Empty,
    Dim(u32),
}

impl Incidence {
    pub fn is_empty(self) -> bool {
        self == Incidence::Empty
    }

    /// Shifts a nonempty dimension by `delta`; empty stays empty.
    pub fn shift(self, delta: u32) -> Incidence {
        match self {
            Incidence::Empty => Incidence::Empty,
            Incidence::Dim(d) => Incidence::Dim(d + delta),
        }
    }

    /// A signed dimension, `Empty` when negative.
    pub fn from_signed(v: i64) -> Incidence {
        if v < 0 {
            Incidence::Empty
        } else {
            Incidence::Dim(v as u32)
        }
    }

    /// `self ≤ bound`, with `Empty` below everything.
    pub fn within(self, bound: i64) -> bool {
        match self {
            Incidence::Empty => true,
            Incidence::Dim(d) => i64::from(d) <= bound,
        }
    }
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incidence::Empty => write!(f, "empty"),
            Incidence::Dim(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Incidence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Incidence::Empty => serializer.serialize_str("empty"),
            Incidence::Dim(d) => serializer.serialize_u32(*d),
        }
    }
}

impl<'de> Deserialize<'de> for Incidence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Dim(u32),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Dim(d) => Ok(Incidence::Dim(d)),
            Raw::Word(w) if w == "empty" => Ok(Incidence::Empty),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected a dimension or \"empty\", got {w:?}"))),
        }
    }
}

/// Per-stratum values keyed by the stratum index as a string, `{"1": .., "2": ..}`.
pub(crate) fn from_index_map<T: Clone>(map: &BTreeMap<String, T>, depth: usize) -> Result<Vec<T>, CycleError> {
    for key in map.keys() {
        match key.parse::<usize>() {
            Ok(i) if (1..=depth).contains(&i) => {}
            _ => return Err(CycleError::BadKey(key.clone())),
        }
    }
    (1..=depth)
        .map(|i| map.get(&i.to_string()).cloned().ok_or(CycleError::MissingEntry(i)))
        .collect()
}

pub(crate) fn to_index_map<T: Clone>(values: &[T]) -> BTreeMap<String, T> {
    values.iter().enumerate().map(|(k, v)| ((k + 1).to_string(), v.clone())).collect()
}

/// Incidence profile of an `r`-cycle against a stratification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclePattern {
    strata: Stratification,
    dim: u32,
    incidence: Vec<Incidence>,
    label: Option<String>,
}

/// Wire form: `{"dim": r, "incidence": {"1": 0, "2": "empty"}, "label": "L"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub dim: u32,
    pub incidence: BTreeMap<String, Incidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Stratification>,
}

impl CyclePattern {
    pub fn new(strata: &Stratification, dim: u32, incidence: Vec<Incidence>) -> Result<Self, CycleError> {
        if incidence.len() != strata.depth() {
            return Err(CycleError::Length { got: incidence.len(), depth: strata.depth() });
        }
        for (k, inc) in incidence.iter().enumerate() {
            if let Incidence::Dim(d) = *inc {
                if d > dim {
                    return Err(CycleError::IncidenceTooLarge { index: k + 1, dim: d, r: dim });
                }
            }
        }
        Ok(CyclePattern { strata: strata.clone(), dim, incidence, label: None })
    }

    /// A cycle missing every stratum.
    pub fn avoiding(strata: &Stratification, dim: u32) -> Self {
        CyclePattern { strata: strata.clone(), dim, incidence: vec![Incidence::Empty; strata.depth()], label: None }
    }

    /// The fundamental class `[X]`: `r = d` and `dim(X ∩ X^i) = d - i`.
    pub fn fundamental(strata: &Stratification) -> Self {
        let d = strata.dim() as u32;
        let incidence = (1..=strata.depth() as u32).map(|i| Incidence::Dim(d - i)).collect();
        CyclePattern { strata: strata.clone(), dim: d, incidence, label: Some("[X]".into()) }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn from_doc(doc: PatternDoc, strata: &Stratification) -> Result<Self, CycleError> {
        let strata = doc.strata.as_ref().unwrap_or(strata);
        let incidence = from_index_map(&doc.incidence, strata.depth())?;
        let mut p = CyclePattern::new(strata, doc.dim, incidence)?;
        p.label = doc.label;
        Ok(p)
    }

    pub fn to_doc(&self) -> PatternDoc {
        PatternDoc {
            schema: None,
            dim: self.dim,
            incidence: to_index_map(&self.incidence),
            label: self.label.clone(),
            strata: None,
        }
    }

    pub fn strata(&self) -> &Stratification {
        &self.strata
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn incidence(&self) -> &[Incidence] {
        &self.incidence
    }

    /// `dim(|α| ∩ X^i)` for a 1-based index.
    pub fn at(&self, i: usize) -> Incidence {
        self.incidence[i - 1]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn check_depth(&self, depth: usize) -> Result<(), CycleError> {
        if depth != self.strata.depth() {
            return Err(CycleError::DepthMismatch { bound: depth, depth: self.strata.depth() });
        }
        Ok(())
    }

    /// Perversity membership with the instantiated inequality for each failing stratum.
    pub fn explain_perversity(&self, p: &GeneralizedBound) -> Result<Verdict, CycleError> {
        self.check_depth(p.depth())?;
        let r = i64::from(self.dim);
        let failures = self
            .perversity_failures(p)
            .map(|i| format!("X^{i}: dim {} ≤ r-i+p_i = {r}-{i}+{} = {} fails", self.at(i), p.get(i), self.bound_at(i, p)))
            .collect();
        Ok(Verdict::from_failures("perversity", &format!("dim(|α| ∩ X^i) ≤ r-i+p_i for p = {p}"), failures))
    }

    /// Whether `dim(|α| ∩ X^i) ≤ r - i + p_i` for every `i`.
    ///
    /// ```
    /// use pervchow::cycles::{CyclePattern, Incidence};
    /// use pervchow::perversity::Perversity;
    /// use pervchow::strata::Stratification;
    ///
    /// let cone = Stratification::isolated_vertex(3).unwrap();
    /// // a line through the vertex of a threefold cone
    /// let n = CyclePattern::new(&cone, 1, vec![Incidence::Dim(0); 3]).unwrap();
    /// assert!(!n.check_perversity(&Perversity::zero(3).unwrap().into()).unwrap());
    /// assert!(n.check_perversity(&Perversity::top(3).unwrap().into()).unwrap());
    /// ```
    pub fn check_perversity(&self, p: &GeneralizedBound) -> Result<bool, CycleError> {
        self.check_depth(p.depth())?;
        Ok(self.perversity_failures(p).next().is_none())
    }

    fn bound_at(&self, i: usize, p: &GeneralizedBound) -> i64 {
        i64::from(self.dim) - i as i64 + i64::from(p.get(i))
    }

    fn perversity_failures<'a>(&'a self, p: &'a GeneralizedBound) -> impl Iterator<Item = usize> + 'a {
        (1..=self.strata.depth()).filter(move |&i| !self.at(i).within(self.bound_at(i, p)))
    }

    /// Checks an incidence datum: the excess `dim(|α| ∩ X^i) - (r - i)` with
    /// every stratum carrying a listed label is at most its bound. Strata
    /// whose label is not listed are unconstrained.
    pub fn explain_incidence_datum(&self, bounds: &BTreeMap<String, u32>) -> Result<Verdict, CycleError> {
        let r = i64::from(self.dim);
        let mut failures = Vec::new();
        for (label, &b) in bounds {
            let indices: Vec<usize> = self.strata.indices_with_label(label).collect();
            if indices.is_empty() {
                return Err(CycleError::UnknownLabel(label.clone()));
            }
            for i in indices {
                let inc = self.at(i);
                let bound = r - i as i64 + i64::from(b);
                if !inc.within(bound) {
                    failures.push(format!("{label} (X^{i}): dim {inc} ≤ r-i+b = {r}-{i}+{b} = {bound} fails"));
                }
            }
        }
        Ok(Verdict::from_failures("incidence-datum", "excess ≤ bound on every listed stratum", failures))
    }

    pub fn check_incidence_datum(&self, bounds: &BTreeMap<String, u32>) -> Result<bool, CycleError> {
        Ok(self.explain_incidence_datum(bounds)?.ok)
    }

    /// Pullback along a flat stratified morphism of relative dimension `e`:
    /// every nonempty incidence grows by `e`.
    pub fn flat_pullback(&self, e: u32) -> CyclePattern {
        CyclePattern {
            strata: self.strata.product_with_fiber(e as usize),
            dim: self.dim + e,
            incidence: self.incidence.iter().map(|inc| inc.shift(e)).collect(),
            label: self.label.clone(),
        }
    }

    /// Pushforward along a proper map with `W^{i - c_i} = f^{-1}(X^i)`, onto a
    /// target with the same stratification descriptor.
    pub fn proper_pushforward(&self, c: &Perversity) -> Result<CyclePattern, CycleError> {
        self.proper_pushforward_to(c, &self.strata)
    }

    /// As [`proper_pushforward`](Self::proper_pushforward), onto an explicit target.
    ///
    /// The image meets `X^i` in the image of `|α| ∩ W^{i - c_i}`, so the new
    /// incidence at `i` is the old incidence at `i - c_i`.
    pub fn proper_pushforward_to(&self, c: &Perversity, target: &Stratification) -> Result<CyclePattern, CycleError> {
        self.check_depth(c.depth())?;
        if target.depth() != self.strata.depth() {
            return Err(CycleError::DepthMismatch { bound: target.depth(), depth: self.strata.depth() });
        }
        let incidence = (1..=self.strata.depth()).map(|i| self.at(i - c.get(i) as usize)).collect();
        Ok(CyclePattern { strata: target.clone(), dim: self.dim, incidence, label: self.label.clone() })
    }

    /// Fiberwise suspension: one more dimension for the cycle and for every
    /// nonempty incidence.
    pub fn suspend(&self) -> CyclePattern {
        CyclePattern {
            strata: self.strata.suspend(),
            dim: self.dim + 1,
            incidence: self.incidence.iter().map(|inc| inc.shift(1)).collect(),
            label: self.label.clone(),
        }
    }

    /// Pattern of the sum `α + β`: the support is the union.
    pub fn union(&self, other: &CyclePattern) -> Result<CyclePattern, CycleError> {
        if self.strata != other.strata {
            return Err(CycleError::StratificationMismatch);
        }
        if self.dim != other.dim {
            return Err(CycleError::FiberDimension {
                label: other.label.clone().unwrap_or_default(),
                got: other.dim,
                expected: self.dim,
            });
        }
        let incidence = self.incidence.iter().zip(&other.incidence).map(|(a, b)| (*a).max(*b)).collect();
        Ok(CyclePattern { strata: self.strata.clone(), dim: self.dim, incidence, label: None })
    }

    /// Same support data, ignoring labels.
    pub fn same_support(&self, other: &CyclePattern) -> bool {
        self.strata == other.strata && self.dim == other.dim && self.incidence == other.incidence
    }
}

/// Two cycles together with the declared dimensions of their common support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointPattern {
    a: CyclePattern,
    b: CyclePattern,
    joint: Vec<Incidence>,
    total: Incidence,
}

/// Wire form: `{"a": <pattern>, "b": <pattern>, "joint": {"1": ..}, "total": int|"empty"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub a: PatternDoc,
    pub b: PatternDoc,
    pub joint: BTreeMap<String, Incidence>,
    pub total: Incidence,
}

impl JointPattern {
    pub fn new(a: CyclePattern, b: CyclePattern, joint: Vec<Incidence>, total: Incidence) -> Result<Self, CycleError> {
        if a.strata != b.strata {
            return Err(CycleError::StratificationMismatch);
        }
        if joint.len() != a.strata.depth() {
            return Err(CycleError::Length { got: joint.len(), depth: a.strata.depth() });
        }
        if total > Incidence::Dim(a.dim.min(b.dim)) {
            return Err(CycleError::JointTooLarge { index: 0, what: "the smaller cycle dimension" });
        }
        for (k, &j) in joint.iter().enumerate() {
            if j > a.incidence[k].min(b.incidence[k]) {
                return Err(CycleError::JointTooLarge { index: k + 1, what: "one of the single incidences" });
            }
            if j > total {
                return Err(CycleError::JointTooLarge { index: k + 1, what: "the total intersection" });
            }
        }
        Ok(JointPattern { a, b, joint, total })
    }

    pub fn from_doc(doc: JointDoc, strata: &Stratification) -> Result<Self, CycleError> {
        let a = CyclePattern::from_doc(doc.a, strata)?;
        let b = CyclePattern::from_doc(doc.b, strata)?;
        let joint = from_index_map(&doc.joint, a.strata.depth())?;
        JointPattern::new(a, b, joint, doc.total)
    }

    pub fn to_doc(&self) -> JointDoc {
        JointDoc {
            schema: None,
            a: self.a.to_doc(),
            b: self.b.to_doc(),
            joint: to_index_map(&self.joint),
            total: self.total,
        }
    }

    pub fn a(&self) -> &CyclePattern {
        &self.a
    }

    pub fn b(&self) -> &CyclePattern {
        &self.b
    }

    pub fn joint(&self) -> &[Incidence] {
        &self.joint
    }

    pub fn total(&self) -> Incidence {
        self.total
    }

    pub fn swapped(&self) -> JointPattern {
        JointPattern { a: self.b.clone(), b: self.a.clone(), joint: self.joint.clone(), total: self.total }
    }

    /// Condition `(*, c̄)`: `dim(|α| ∩ |β|) ≤ r + s - d` and
    /// `dim(|α| ∩ |β| ∩ X^i) ≤ r + s - d - (i - c_i)` for every `i`.
    pub fn explain_star(&self, c: &GeneralizedBound) -> Result<Verdict, CycleError> {
        self.a.check_depth(c.depth())?;
        let (r, s) = (i64::from(self.a.dim), i64::from(self.b.dim));
        let d = self.a.strata.dim() as i64;
        let expected = self.expected();
        let mut failures = Vec::new();
        if !self.total.within(expected) {
            failures.push(format!("total: dim {} ≤ r+s-d = {r}+{s}-{d} = {expected} fails", self.total));
        }
        for i in self.joint_failures(c) {
            let ci = c.get(i);
            failures.push(format!(
                "X^{i}: dim {} ≤ r+s-d-(i-c_i) = {r}+{s}-{d}-({i}-{ci}) = {} fails",
                self.joint[i - 1],
                expected - (i as i64 - i64::from(ci))
            ));
        }
        Ok(Verdict::from_failures("star", &format!("condition (*, c) for c = {c}"), failures))
    }

    pub fn check_star(&self, c: &GeneralizedBound) -> Result<bool, CycleError> {
        self.a.check_depth(c.depth())?;
        Ok(self.total.within(self.expected()) && self.joint_failures(c).next().is_none())
    }

    fn expected(&self) -> i64 {
        i64::from(self.a.dim) + i64::from(self.b.dim) - self.a.strata.dim() as i64
    }

    fn joint_failures<'a>(&'a self, c: &'a GeneralizedBound) -> impl Iterator<Item = usize> + 'a {
        let expected = self.expected();
        (1..=self.joint.len()).filter(move |&i| !self.joint[i - 1].within(expected - (i as i64 - i64::from(c.get(i)))))
    }
}

/// A family `𝒲 ⊂ X × A^1` presented by its fiber patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub generic_fiber: CyclePattern,
    pub special_fibers: Vec<(String, CyclePattern)>,
    pub endpoints: (CyclePattern, CyclePattern),
    pub flat_over_line: bool,
    pub effective_variant: Option<CyclePattern>,
}

/// Wire form of a [`FamilyCertificate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub generic: PatternDoc,
    pub fibers: Vec<FiberDoc>,
    pub endpoints: [PatternDoc; 2],
    pub flat_over_line: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excess: Option<PatternDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub t: String,
    pub pattern: PatternDoc,
}

impl FamilyCertificate {
    pub fn from_doc(doc: FamilyDoc, strata: &Stratification) -> Result<Self, CycleError> {
        let special_fibers = doc
            .fibers
            .into_iter()
            .map(|f| Ok((f.t, CyclePattern::from_doc(f.pattern, strata)?)))
            .collect::<Result<_, CycleError>>()?;
        let [w0, w1] = doc.endpoints;
        Ok(FamilyCertificate {
            generic_fiber: CyclePattern::from_doc(doc.generic, strata)?,
            special_fibers,
            endpoints: (CyclePattern::from_doc(w0, strata)?, CyclePattern::from_doc(w1, strata)?),
            flat_over_line: doc.flat_over_line,
            effective_variant: doc.excess.map(|e| CyclePattern::from_doc(e, strata)).transpose()?,
        })
    }

    fn fiber(&self, t: &str) -> Option<&CyclePattern> {
        self.special_fibers.iter().find(|(label, _)| label == t).map(|(_, p)| p)
    }

    fn all_patterns(&self) -> impl Iterator<Item = (String, &CyclePattern)> {
        std::iter::once(("generic".to_string(), &self.generic_fiber))
            .chain(self.special_fibers.iter().map(|(t, p)| (format!("t={t}"), p)))
            .chain([("W0".to_string(), &self.endpoints.0), ("W1".to_string(), &self.endpoints.1)])
            .chain(self.effective_variant.iter().map(|e| ("E".to_string(), e)))
    }

    /// Structural check of a perversity-`p̄` rational equivalence between the
    /// endpoints: flatness flag set, every listed fiber of perversity `p̄`, and
    /// the fibers over `0` and `1` equal to `W_0`, `W_1` (or `W_0 + E`,
    /// `W_1 + E` for the effective form).
    ///
    /// This validates a declared family; it cannot decide whether such a
    /// family exists geometrically.
    pub fn explain(&self, p: &Perversity) -> Result<Verdict, CycleError> {
        let r = self.generic_fiber.dim;
        for (label, pattern) in self.all_patterns() {
            if pattern.strata != self.generic_fiber.strata {
                return Err(CycleError::StratificationMismatch);
            }
            if pattern.dim != r {
                return Err(CycleError::FiberDimension { label, got: pattern.dim, expected: r });
            }
        }
        let f0 = self.fiber("0").ok_or(CycleError::MissingEndpoint("0"))?;
        let f1 = self.fiber("1").ok_or(CycleError::MissingEndpoint("1"))?;

        let mut failures = Vec::new();
        if !self.flat_over_line {
            failures.push("family is not flat over the line".to_string());
        }
        let bound = p.as_bound();
        for (label, pattern) in self.all_patterns() {
            let v = pattern.explain_perversity(&bound)?;
            if !v.ok {
                failures.push(format!("{label}: {}", v.explanation));
            }
        }
        let (w0, w1) = match &self.effective_variant {
            Some(e) => (self.endpoints.0.union(e)?, self.endpoints.1.union(e)?),
            None => (self.endpoints.0.clone(), self.endpoints.1.clone()),
        };
        let suffix = if self.effective_variant.is_some() { " + E" } else { "" };
        if !f0.same_support(&w0) {
            failures.push(format!("fiber over 0 does not match W0{suffix}"));
        }
        if !f1.same_support(&w1) {
            failures.push(format!("fiber over 1 does not match W1{suffix}"));
        }
        Ok(Verdict::from_failures("family", &format!("rational equivalence of perversity {p}"), failures))
    }

    pub fn check(&self, p: &Perversity) -> Result<bool, CycleError> {
        Ok(self.explain(p)?.ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perversity::all_perversities;
    use crate::strata::{ModelTag, Stratum};
    use Incidence::{Dim, Empty};

    fn vertex3() -> Stratification {
        Stratification::isolated_vertex(3).unwrap()
    }

    fn bound(v: &[i64]) -> GeneralizedBound {
        GeneralizedBound::new(v.iter().copied()).unwrap()
    }

    fn perv(p3: u32) -> GeneralizedBound {
        // any perversity with p_3 = p3 on the cone; take the smallest
        bound(&[0, p3.saturating_sub(1) as i64, p3 as i64])
    }

    #[test]
    fn zobel_lines() {
        let s = vertex3();
        let l = CyclePattern::avoiding(&s, 1).with_label("L");
        assert!(l.check_perversity(&perv(0)).unwrap());
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        assert!(!n.check_perversity(&perv(0)).unwrap());
        assert!(!n.check_perversity(&perv(1)).unwrap());
        assert!(n.check_perversity(&perv(2)).unwrap());
        let v = n.explain_perversity(&perv(0)).unwrap();
        assert!(v.explanation.contains("X^3: dim 0 ≤ r-i+p_i = 1-3+0 = -2 fails"), "{}", v.explanation);
    }

    #[test]
    fn empty_cycle_passes_everything() {
        let s = vertex3();
        let e = CyclePattern::avoiding(&s, 0);
        for p in all_perversities(3) {
            assert!(e.check_perversity(&p.as_bound()).unwrap());
        }
    }

    #[test]
    fn depth_mismatch() {
        let e = CyclePattern::avoiding(&vertex3(), 1);
        assert!(matches!(
            e.check_perversity(&GeneralizedBound::zero(2).unwrap()),
            Err(CycleError::DepthMismatch { .. })
        ));
    }

    #[test]
    fn construction_invariants() {
        let s = vertex3();
        assert!(matches!(CyclePattern::new(&s, 1, vec![Dim(2), Empty, Empty]), Err(CycleError::IncidenceTooLarge { .. })));
        assert!(matches!(CyclePattern::new(&s, 1, vec![Empty; 2]), Err(CycleError::Length { .. })));
    }

    #[test]
    fn incidence_datum_generalizes_perversity() {
        let strata: Vec<Stratum> = (1..=3)
            .map(|i| Stratum { index: i, codim_lower_bound: i, label: format!("S{i}") })
            .collect();
        let s = Stratification::new(4, strata, ModelTag::Generic).unwrap();
        let a = CyclePattern::new(&s, 2, vec![Dim(1), Dim(1), Dim(0)]).unwrap();
        for p in all_perversities(3) {
            let datum: BTreeMap<String, u32> = (1..=3).map(|i| (format!("S{i}"), p.get(i))).collect();
            assert_eq!(a.check_incidence_datum(&datum).unwrap(), a.check_perversity(&p.as_bound()).unwrap());
        }
        // a single stratum with bound 0 and an excess intersection
        let datum = BTreeMap::from([("S2".to_string(), 0)]);
        assert!(!a.check_incidence_datum(&datum).unwrap());
        let datum = BTreeMap::from([("nowhere".to_string(), 0)]);
        assert_eq!(a.check_incidence_datum(&datum), Err(CycleError::UnknownLabel("nowhere".into())));
    }

    #[test]
    fn incidence_datum_monotone() {
        let strata: Vec<Stratum> = (1..=3)
            .map(|i| Stratum { index: i, codim_lower_bound: i, label: format!("S{i}") })
            .collect();
        let s = Stratification::new(3, strata, ModelTag::Generic).unwrap();
        let values = [Empty, Dim(0), Dim(1), Dim(2)];
        let mut all_bounds = Vec::new();
        for b1 in 0..=2u32 {
            for b2 in 0..=2u32 {
                for b3 in 0..=2u32 {
                    all_bounds.push([b1, b2, b3]);
                }
            }
        }
        for &x in &values {
            for &y in &values {
                for &z in &values {
                    let Ok(a) = CyclePattern::new(&s, 2, vec![x, y, z]) else { continue };
                    for strict in &all_bounds {
                        let ds: BTreeMap<String, u32> = (0..3).map(|k| (format!("S{}", k + 1), strict[k])).collect();
                        if !a.check_incidence_datum(&ds).unwrap() {
                            continue;
                        }
                        for loose in &all_bounds {
                            if (0..3).all(|k| loose[k] >= strict[k]) {
                                let dl: BTreeMap<String, u32> =
                                    (0..3).map(|k| (format!("S{}", k + 1), loose[k])).collect();
                                assert!(a.check_incidence_datum(&dl).unwrap());
                                // dropping a stratum only loosens
                                let mut fewer = dl.clone();
                                fewer.remove("S2");
                                assert!(a.check_incidence_datum(&fewer).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zobel_star_pairs() {
        let s = vertex3();
        let zero = GeneralizedBound::zero(3).unwrap();
        // D = C(P^1 × q') passes through the vertex; L, M avoid it
        let d = CyclePattern::new(&s, 2, vec![Dim(0); 3]).unwrap();
        let l = CyclePattern::avoiding(&s, 1);
        let m = CyclePattern::avoiding(&s, 1);
        let dl = JointPattern::new(d.clone(), l, vec![Empty; 3], Empty).unwrap();
        assert!(dl.check_star(&zero).unwrap());
        let dm = JointPattern::new(d, m, vec![Empty; 3], Dim(0)).unwrap();
        assert!(dm.check_star(&zero).unwrap());
    }

    #[test]
    fn star_fails_at_vertex() {
        let s = vertex3();
        // two cones through the vertex: r = s = 2, joint(3) = 0 needs c_3 >= 2d - r - s = 2
        let a = CyclePattern::new(&s, 2, vec![Dim(0); 3]).unwrap();
        let j = JointPattern::new(a.clone(), a, vec![Dim(0); 3], Dim(1)).unwrap();
        assert!(!j.check_star(&bound(&[0, 1, 1])).unwrap());
        assert!(j.check_star(&bound(&[0, 1, 2])).unwrap());
        let v = j.explain_star(&bound(&[0, 0, 1])).unwrap();
        assert!(v.explanation.contains("X^3: dim 0 ≤ r+s-d-(i-c_i) = 2+2-3-(3-1) = -1 fails"), "{}", v.explanation);
    }

    #[test]
    fn joint_invariants() {
        let s = vertex3();
        let a = CyclePattern::avoiding(&s, 1);
        let b = CyclePattern::new(&s, 2, vec![Dim(0); 3]).unwrap();
        assert!(JointPattern::new(a.clone(), b.clone(), vec![Dim(0), Empty, Empty], Dim(0)).is_err());
        assert!(JointPattern::new(b.clone(), b.clone(), vec![Dim(0); 3], Empty).is_err());
        assert!(JointPattern::new(a, b, vec![Empty; 3], Dim(2)).is_err());
    }

    #[test]
    fn pullback_examples() {
        let s = vertex3();
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        assert!(n.flat_pullback(0).same_support(&n));
        let up = n.flat_pullback(1);
        assert_eq!(up.dim(), 2);
        assert_eq!(up.incidence(), &[Dim(1); 3]);
        assert_eq!(up.strata().dim(), 4);
        for p in all_perversities(3) {
            assert_eq!(up.check_perversity(&p.as_bound()).unwrap(), n.check_perversity(&p.as_bound()).unwrap());
        }
        assert!(n.flat_pullback(2).flat_pullback(3).same_support(&n.flat_pullback(5)));
    }

    #[test]
    fn pushforward_examples() {
        let s = vertex3();
        let a = CyclePattern::new(&s, 2, vec![Dim(1), Dim(0), Empty]).unwrap();
        let zero = Perversity::zero(3).unwrap();
        assert!(a.proper_pushforward(&zero).unwrap().same_support(&a));
        let c = Perversity::new([0, 1, 1]).unwrap();
        let pushed = a.proper_pushforward(&c).unwrap();
        assert_eq!(pushed.incidence(), &[Dim(1), Dim(1), Dim(0)]);
        let e = CyclePattern::avoiding(&s, 2);
        assert!(e.proper_pushforward(&c).unwrap().incidence().iter().all(|i| i.is_empty()));
        assert!(a.proper_pushforward(&Perversity::zero(2).unwrap()).is_err());
    }

    #[test]
    fn suspension_examples() {
        let s = vertex3();
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        let sn = n.suspend();
        assert_eq!((sn.dim(), sn.strata().dim()), (2, 4));
        for p in all_perversities(3) {
            assert_eq!(sn.check_perversity(&p.as_bound()).unwrap(), n.check_perversity(&p.as_bound()).unwrap());
        }
        assert!(CyclePattern::avoiding(&s, 1).suspend().incidence().iter().all(|i| i.is_empty()));
        assert!(n.suspend().suspend().same_support(&n.suspend().suspend()));
    }

    fn certificate(w: &CyclePattern) -> FamilyCertificate {
        FamilyCertificate {
            generic_fiber: w.clone(),
            special_fibers: vec![("0".into(), w.clone()), ("1".into(), w.clone())],
            endpoints: (w.clone(), w.clone()),
            flat_over_line: true,
            effective_variant: None,
        }
    }

    #[test]
    fn constant_family() {
        let s = vertex3();
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        let cert = certificate(&n);
        for p in all_perversities(3) {
            assert_eq!(cert.check(&p).unwrap(), n.check_perversity(&p.as_bound()).unwrap());
        }
    }

    #[test]
    fn family_failures() {
        let s = vertex3();
        let l = CyclePattern::avoiding(&s, 1);
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        let zero = Perversity::zero(3).unwrap();

        let mut cert = certificate(&l);
        cert.special_fibers.push(("1/2".into(), n.clone()));
        let v = cert.explain(&zero).unwrap();
        assert!(!v.ok);
        assert!(v.explanation.contains("t=1/2"));

        let mut cert = certificate(&l);
        cert.flat_over_line = false;
        assert!(!cert.check(&zero).unwrap());

        let mut cert = certificate(&l);
        cert.special_fibers.retain(|(t, _)| t != "1");
        assert_eq!(cert.check(&zero), Err(CycleError::MissingEndpoint("1")));

        let mut cert = certificate(&l);
        cert.endpoints.1 = n;
        assert!(!cert.check(&Perversity::top(3).unwrap()).unwrap());
    }

    #[test]
    fn effective_variant() {
        let s = vertex3();
        let l = CyclePattern::avoiding(&s, 1);
        let n = CyclePattern::new(&s, 1, vec![Dim(0); 3]).unwrap();
        // W_0 = W_1 = L, excess cycle E through the vertex: fibers over 0, 1 are L + E
        let cert = FamilyCertificate {
            generic_fiber: n.clone(),
            special_fibers: vec![("0".into(), n.clone()), ("1".into(), n.clone())],
            endpoints: (l.clone(), l.clone()),
            flat_over_line: true,
            effective_variant: Some(n.clone()),
        };
        assert!(cert.check(&Perversity::top(3).unwrap()).unwrap());
        assert!(!cert.check(&Perversity::zero(3).unwrap()).unwrap());
        let mut plain = cert.clone();
        plain.effective_variant = None;
        assert!(!plain.check(&Perversity::top(3).unwrap()).unwrap());
    }

    #[test]
    fn zobel_vertex_free_equivalence_is_only_structural() {
        // A certificate L ~ M whose fibers all avoid the vertex is accepted as a
        // structure even though no such family exists on the quadric cone.
        let s = vertex3();
        let l = CyclePattern::avoiding(&s, 1).with_label("L");
        let m = CyclePattern::avoiding(&s, 1).with_label("M");
        let cert = FamilyCertificate {
            generic_fiber: l.clone(),
            special_fibers: vec![("0".into(), l.clone()), ("1".into(), m.clone())],
            endpoints: (l, m),
            flat_over_line: true,
            effective_variant: None,
        };
        assert!(cert.check(&Perversity::zero(3).unwrap()).unwrap());
    }

    #[test]
    fn pattern_json() {
        let s = vertex3();
        let doc: PatternDoc = serde_json::from_str(r#"{"dim":1,"incidence":{"1":0,"2":0,"3":"empty"}}"#).unwrap();
        let p = CyclePattern::from_doc(doc, &s).unwrap();
        assert_eq!(p.incidence(), &[Dim(0), Dim(0), Empty]);
        let text = serde_json::to_string(&p.to_doc()).unwrap();
        assert_eq!(text, r#"{"dim":1,"incidence":{"1":0,"2":0,"3":"empty"}}"#);
        let missing: PatternDoc = serde_json::from_str(r#"{"dim":1,"incidence":{"1":0}}"#).unwrap();
        assert_eq!(CyclePattern::from_doc(missing, &s), Err(CycleError::MissingEntry(2)));
        let bad: PatternDoc = serde_json::from_str(r#"{"dim":1,"incidence":{"1":0,"2":0,"3":0,"4":0}}"#).unwrap();
        assert!(matches!(CyclePattern::from_doc(bad, &s), Err(CycleError::BadKey(_))));
        assert!(serde_json::from_str::<PatternDoc>(r#"{"dim":1,"incidence":{"1":"none"}}"#).is_err());
    }
}
