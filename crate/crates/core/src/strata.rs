//! Stratification descriptors.
//!
//! A [`Stratification`] records the dimension bookkeeping of a filtration
//! `X = X^0 ⊇ X^1 ⊇ ... ⊇ X^depth` by closed subsets, where `X^i` has
//! codimension at least `i`. Strata are descriptors only; nothing here knows
//! about equations.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("ambient dimension must be at least 1, got {0}")]
    ZeroDimension(usize),
    #[error("stratum {position} has index {index}, expected {expected} (indices run 1..=depth)")]
    BadIndex { position: usize, index: usize, expected: usize },
    #[error("stratum X^{index} has codimension bound {codim} < {index}")]
    CodimTooSmall { index: usize, codim: usize },
    #[error("stratum X^{index} has codimension bound {codim} > ambient dimension {dim}")]
    CodimTooLarge { index: usize, codim: usize, dim: usize },
    #[error("depth {depth} exceeds ambient dimension {dim}")]
    TooDeep { depth: usize, dim: usize },
    #[error("unknown model tag {0:?}")]
    UnknownModel(String),
}

/// What kind of space a stratification describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Generic,
    IsolatedVertex,
    /// `base × F` with `dim F = fiber_dim > 0`.
    Product { base: BaseModel, fiber_dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseModel {
    Generic,
    #[serde(rename = "vertex")]
    IsolatedVertex,
}

impl ModelTag {
    fn base(self) -> BaseModel {
        match self {
            ModelTag::Generic => BaseModel::Generic,
            ModelTag::IsolatedVertex => BaseModel::IsolatedVertex,
            ModelTag::Product { base, .. } => base,
        }
    }

    fn fiber_dim(self) -> usize {
        match self {
            ModelTag::Product { fiber_dim, .. } => fiber_dim,
            _ => 0,
        }
    }

    fn with_fiber(self, extra: usize) -> ModelTag {
        let fiber_dim = self.fiber_dim() + extra;
        match (self.base(), fiber_dim) {
            (BaseModel::Generic, 0) => ModelTag::Generic,
            (BaseModel::IsolatedVertex, 0) => ModelTag::IsolatedVertex,
            (base, fiber_dim) => ModelTag::Product { base, fiber_dim },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "i")]
    pub index: usize,
    #[serde(rename = "codim")]
    pub codim_lower_bound: usize,
    pub label: String,
}

/// A validated stratification descriptor.
///
/// Strata carry the indices `1..=depth` in order; `X^i` is recorded with a
/// lower bound on its codimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StratificationDoc", into = "StratificationDoc")]
pub struct Stratification {
    dim: usize,
    strata: Vec<Stratum>,
    model: ModelTag,
}

impl Stratification {
    pub fn new(dim: usize, strata: Vec<Stratum>, model: ModelTag) -> Result<Self, StrataError> {
        if strata.len() > dim {
            return Err(StrataError::TooDeep { depth: strata.len(), dim });
        }
        for (k, s) in strata.iter().enumerate() {
            if s.index != k + 1 {
                return Err(StrataError::BadIndex { position: k, index: s.index, expected: k + 1 });
            }
            if s.codim_lower_bound < s.index {
                return Err(StrataError::CodimTooSmall { index: s.index, codim: s.codim_lower_bound });
            }
            if s.codim_lower_bound > dim {
                return Err(StrataError::CodimTooLarge { index: s.index, codim: s.codim_lower_bound, dim });
            }
        }
        Ok(Stratification { dim, strata, model })
    }

    /// A smooth variety of dimension `dim`: no strata at all.
    pub fn smooth(dim: usize) -> Self {
        Stratification { dim, strata: Vec::new(), model: ModelTag::Generic }
    }

    /// The cone-style stratification `v = X^d = ... = X^1` of a `d`-dimensional
    /// variety with a single singular point.
    ///
    /// ```
    /// use pervchow::strata::Stratification;
    ///
    /// let s = Stratification::isolated_vertex(3).unwrap();
    /// assert_eq!(s.depth(), 3);
    /// assert!(s.strata().iter().all(|t| t.label == "vertex" && t.codim_lower_bound == 3));
    /// ```
    pub fn isolated_vertex(dim: usize) -> Result<Self, StrataError> {
        if dim == 0 {
            return Err(StrataError::ZeroDimension(dim));
        }
        let strata = (1..=dim)
            .map(|i| Stratum { index: i, codim_lower_bound: dim, label: "vertex".to_string() })
            .collect();
        Ok(Stratification { dim, strata, model: ModelTag::IsolatedVertex })
    }

    /// `X × Y` with `dim Y = fiber_dim`, stratified by `X^i × Y`.
    pub fn product_with_fiber(&self, fiber_dim: usize) -> Self {
        Stratification {
            dim: self.dim + fiber_dim,
            strata: self.strata.clone(),
            model: self.model.with_fiber(fiber_dim),
        }
    }

    /// The suspension, stratified by the suspensions of the strata.
    ///
    /// Each stratum gains one dimension together with the ambient space, so
    /// codimensions are unchanged; the bookkeeping is that of a product with a
    /// one-dimensional fiber.
    pub fn suspend(&self) -> Self {
        self.product_with_fiber(1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.strata.len()
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i - 1]
    }

    /// Indices of the strata carrying `label`.
    pub fn indices_with_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.strata.iter().filter(move |s| s.label == label).map(|s| s.index)
    }
}

impl fmt::Display for Stratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {} depth {} ({:?})", self.dim, self.depth(), self.model)
    }
}

/// Wire form: `{"dim": d, "strata": [{"i":1,"codim":c,"label":"..."}], "model": "generic"|"vertex"|"product"}`.
/// Product models add `"base"` and `"fiberDim"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StratificationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub dim: usize,
    #[serde(default)]
    pub strata: Vec<Stratum>,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_dim: Option<usize>,
}

fn default_model() -> String {
    "generic".to_string()
}

impl TryFrom<StratificationDoc> for Stratification {
    type Error = StrataError;
    fn try_from(doc: StratificationDoc) -> Result<Self, Self::Error> {
        let model = match doc.model.as_str() {
            "generic" => ModelTag::Generic,
            "vertex" => ModelTag::IsolatedVertex,
            "product" => {
                let base = doc.base.unwrap_or(BaseModel::Generic);
                let fiber_dim = doc.fiber_dim.unwrap_or(0);
                match base {
                    BaseModel::Generic => ModelTag::Generic,
                    BaseModel::IsolatedVertex => ModelTag::IsolatedVertex,
                }
                .with_fiber(fiber_dim)
            }
            other => return Err(StrataError::UnknownModel(other.to_string())),
        };
        Stratification::new(doc.dim, doc.strata, model)
    }
}

impl From<Stratification> for StratificationDoc {
    fn from(s: Stratification) -> Self {
        let (model, base, fiber_dim) = match s.model {
            ModelTag::Generic => ("generic", None, None),
            ModelTag::IsolatedVertex => ("vertex", None, None),
            ModelTag::Product { base, fiber_dim } => ("product", Some(base), Some(fiber_dim)),
        };
        StratificationDoc {
            schema: None,
            dim: s.dim,
            strata: s.strata,
            model: model.to_string(),
            base,
            fiber_dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(dim: usize, codims: &[usize]) -> Stratification {
        let strata = codims
            .iter()
            .enumerate()
            .map(|(k, &c)| Stratum { index: k + 1, codim_lower_bound: c, label: format!("S{}", k + 1) })
            .collect();
        Stratification::new(dim, strata, ModelTag::Generic).unwrap()
    }

    #[test]
    fn isolated_vertex_shapes() {
        let s = Stratification::isolated_vertex(1).unwrap();
        assert_eq!(s.depth(), 1);
        assert_eq!(s.stratum(1).codim_lower_bound, 1);
        let s = Stratification::isolated_vertex(4).unwrap();
        assert_eq!(s.depth(), 4);
        assert!(s.strata().iter().all(|t| t.codim_lower_bound == 4 && t.label == "vertex"));
        assert_eq!(Stratification::isolated_vertex(0), Err(StrataError::ZeroDimension(0)));
    }

    #[test]
    fn products() {
        let s = Stratification::isolated_vertex(3).unwrap();
        let p = s.product_with_fiber(1);
        assert_eq!(p.dim(), 4);
        assert_eq!(p.depth(), 3);
        assert!(p.strata().iter().all(|t| t.codim_lower_bound == 3));
        assert_eq!(p.model(), ModelTag::Product { base: BaseModel::IsolatedVertex, fiber_dim: 1 });
        assert_eq!(s.product_with_fiber(0), s);

        let g = generic(4, &[1, 2, 4]);
        let gp = g.product_with_fiber(3);
        assert_eq!(gp.dim(), 7);
        let bounds: Vec<_> = gp.strata().iter().map(|t| t.codim_lower_bound).collect();
        assert_eq!(bounds, vec![1, 2, 4]);
    }

    #[test]
    fn suspension() {
        let s = Stratification::isolated_vertex(2).unwrap().suspend();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.depth(), 2);
        assert!(s.strata().iter().all(|t| t.codim_lower_bound == 2));

        let mut t = generic(3, &[2]);
        for _ in 0..5 {
            t = t.suspend();
        }
        assert_eq!(t.dim(), 8);

        let smooth = Stratification::smooth(2).suspend();
        assert_eq!(smooth.depth(), 0);
        assert_eq!(smooth.dim(), 3);
    }

    #[test]
    fn suspension_commutes_with_products() {
        let s = generic(3, &[1, 3]);
        for n in 0..4 {
            assert_eq!(s.product_with_fiber(n).suspend(), s.suspend().product_with_fiber(n));
        }
    }

    #[test]
    fn rejects_bad_filtrations() {
        let bad = vec![Stratum { index: 1, codim_lower_bound: 0, label: "x".into() }];
        assert!(matches!(
            Stratification::new(2, bad, ModelTag::Generic),
            Err(StrataError::CodimTooSmall { .. })
        ));
        let skipped = vec![Stratum { index: 2, codim_lower_bound: 2, label: "x".into() }];
        assert!(matches!(
            Stratification::new(2, skipped, ModelTag::Generic),
            Err(StrataError::BadIndex { .. })
        ));
        let deep = (1..=3).map(|i| Stratum { index: i, codim_lower_bound: 2, label: "x".into() }).collect();
        assert!(matches!(Stratification::new(2, deep, ModelTag::Generic), Err(StrataError::TooDeep { .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = Stratification::isolated_vertex(3).unwrap().product_with_fiber(2);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"model\":\"product\""));
        let back: Stratification = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);

        let doc = r#"{"dim":2,"strata":[{"i":1,"codim":2,"label":"p"},{"i":2,"codim":2,"label":"p"}],"model":"vertex"}"#;
        let s: Stratification = serde_json::from_str(doc).unwrap();
        assert_eq!(s, Stratification::isolated_vertex(2).unwrap().with_label("p"));
        assert!(serde_json::from_str::<Stratification>(r#"{"dim":2,"model":"weird"}"#).is_err());
    }

    impl Stratification {
        fn with_label(mut self, label: &str) -> Self {
            for s in &mut self.strata {
                s.label = label.to_string();
            }
            self
        }
    }
}
