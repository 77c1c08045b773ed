//! Perversity Chow groups and intersection pairings of a cone `Y = C(X)` over
//! a smooth projective base `X` of dimension `n`, stratified by its vertex.
//!
//! Only the vertex value `p = p_d` of a perversity matters here. A class of
//! dimension `r` may meet the vertex when `r > 0` and `r − d + p ≥ 0`
//! ([`Mode::Allowed`]); it is then the cone over a class in `A_{r−1}(X)`.
//! Otherwise it avoids the vertex ([`Mode::Disallowed`]) and is a class in
//! `A_r(X)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::{AbGroupError, FpAbelianGroup, GroupMap, IntMatrix};
use crate::chow::{builtin, quadric_surface, ChowClass, ChowError, ChowRingPresentation, PresentationDoc, Ring};
use crate::cycles::{CycleError, CyclePattern, Incidence, JointPattern};
use crate::perversity::{GeneralizedBound, PerversityError};
use crate::strata::Stratification;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("dimension {r} is outside 0..={d}")]
    DimensionOutOfRange { r: i64, d: usize },
    #[error("payload has codimension {got} in the base, expected {expected} for a {mode} class")]
    PayloadCodim { expected: usize, got: usize, mode: Mode },
    #[error("classes live on different cones")]
    ConeMismatch,
    #[error("comparison goes from p = {from} down to p = {to}")]
    ComparisonBackwards { from: u32, to: u32 },
    #[error("both classes meet the vertex and r + s − d = {0}; the product needs r + s − d ≥ 1")]
    AllowedProductUndefined(i64),
    #[error("{0} is not a disallowed class")]
    NotDisallowed(&'static str),
    #[error("product has dimension {0} and its payload is not a zero-cycle on the base")]
    NotZeroDimensional(u32),
    #[error("the base must have dimension at least 1")]
    PointBase,
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Group(#[from] AbGroupError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Perversity(#[from] PerversityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Allowed,
    Disallowed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Allowed => "allowed",
            Mode::Disallowed => "disallowed",
        })
    }
}

/// The cone over a base presentation, with `d = n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeVariety {
    base: Ring,
    strata: Stratification,
}

/// `{"base": "quadric_surface"}` or `{"base": <presentation>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub base: BaseDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseDoc {
    Name(String),
    Presentation(PresentationDoc),
}

impl ConeVariety {
    pub fn new(base: ChowRingPresentation) -> Result<Self, ConeError> {
        if base.dim() == 0 {
            return Err(ConeError::PointBase);
        }
        let strata = Stratification::isolated_vertex(base.dim() + 1).expect("cone dimension is positive");
        Ok(ConeVariety { base: Arc::new(base), strata })
    }

    pub fn from_doc(doc: ConeDoc) -> Result<Self, ConeError> {
        let base = match doc.base {
            BaseDoc::Name(name) => builtin(&name)?,
            BaseDoc::Presentation(p) => ChowRingPresentation::from_doc(p)?,
        };
        ConeVariety::new(base)
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// `d = dim Y`.
    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    pub fn strata(&self) -> &Stratification {
        &self.strata
    }

    fn check_r(&self, r: i64) -> Result<u32, ConeError> {
        if r < 0 || r > self.dim() as i64 {
            return Err(ConeError::DimensionOutOfRange { r, d: self.dim() });
        }
        Ok(r as u32)
    }

    /// Whether an `r`-cycle may meet the vertex at vertex bound `p`.
    pub fn mode(&self, r: u32, p: u32) -> Mode {
        if r > 0 && i64::from(r) + i64::from(p) >= self.dim() as i64 {
            Mode::Allowed
        } else {
            Mode::Disallowed
        }
    }

    /// Codimension in the base of the payload of an `r`-class in the given mode.
    pub fn payload_codim(&self, r: u32, mode: Mode) -> usize {
        let n = self.base.dim();
        match mode {
            Mode::Allowed => n + 1 - r as usize,
            Mode::Disallowed => n - r as usize,
        }
    }

    /// `A_{r,p̄}(Y)`: `A_{r−1}(X)` when the vertex is allowed, else `A_r(X)`.
    ///
    /// ```
    /// use pervchow::cone::zobel;
    ///
    /// let y = zobel().cone;
    /// assert_eq!(y.chow_group(2, 0).unwrap().invariant_factors().unwrap().to_string(), "Z");
    /// assert_eq!(y.chow_group(2, 1).unwrap().invariant_factors().unwrap().to_string(), "Z + Z");
    /// assert_eq!(y.chow_group(1, 0).unwrap().invariant_factors().unwrap().to_string(), "Z + Z");
    /// assert_eq!(y.chow_group(1, 2).unwrap().invariant_factors().unwrap().to_string(), "Z");
    /// ```
    pub fn chow_group(&self, r: i64, p: u32) -> Result<FpAbelianGroup, ConeError> {
        let r = self.check_r(r)?;
        Ok(self.base.group(self.payload_codim(r, self.mode(r, p))))
    }

    /// The canonical map `A_{r,p̄}(Y) → A_{r,q̄}(Y)` for `p ≤ q`: the identity
    /// when both bounds give the same mode, multiplication by the hyperplane
    /// class when the vertex becomes allowed.
    ///
    /// ```
    /// use pervchow::cone::zobel;
    ///
    /// let y = zobel().cone;
    /// assert_eq!(y.comparison_map(2, 0, 1).unwrap().apply(&[1]).unwrap(), vec![1, 1]);
    /// let m = y.comparison_map(1, 0, 2).unwrap();
    /// assert_eq!((m.apply(&[1, 0]).unwrap(), m.apply(&[0, 1]).unwrap()), (vec![1], vec![1]));
    /// ```
    pub fn comparison_map(&self, r: i64, p_from: u32, p_to: u32) -> Result<GroupMap, ConeError> {
        let r = self.check_r(r)?;
        if p_from > p_to {
            return Err(ConeError::ComparisonBackwards { from: p_from, to: p_to });
        }
        let source = self.chow_group(r.into(), p_from)?;
        if self.mode(r, p_from) == self.mode(r, p_to) {
            return Ok(GroupMap::identity(&source));
        }
        let target = self.chow_group(r.into(), p_to)?;
        let k = self.payload_codim(r, Mode::Disallowed);
        let h = ChowClass::hyperplane(&self.base);
        let matrix = self.base.multiplication_matrix(&h, k)?;
        Ok(GroupMap::new(source, target, matrix)?)
    }

    /// The maximal perversity with vertex value `p`: `p_i = min(i − 1, p)`.
    ///
    /// Every stratum of the cone is the vertex, so this is the loosest bound
    /// a class with vertex value `p` satisfies.
    pub fn lift(&self, p: u32) -> GeneralizedBound {
        GeneralizedBound::new((1..=self.dim() as u32).map(|i| i64::from((i - 1).min(p))))
            .expect("capped sequence is nondecreasing")
    }

    pub fn class(&self, r: i64, p: u32, payload: Vec<i64>) -> Result<ConeClass, ConeError> {
        let r = self.check_r(r)?;
        let mode = self.mode(r, p);
        let codim = self.payload_codim(r, mode);
        ConeClass::new(self, r, p, ChowClass::new(&self.base, codim, payload)?)
    }

    pub fn class_from_doc(&self, doc: ClassDoc) -> Result<ConeClass, ConeError> {
        self.class(doc.r, doc.p, doc.payload)
    }
}

/// `{"r": 1, "p": 0, "payload": [1, 0]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub r: i64,
    pub p: u32,
    pub payload: Vec<i64>,
}

/// An element of `A_{r,p̄}(Y)` given by its payload class on the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeClass {
    cone: ConeVariety,
    r: u32,
    p: u32,
    mode: Mode,
    payload: ChowClass,
}

impl ConeClass {
    pub fn new(cone: &ConeVariety, r: u32, p: u32, payload: ChowClass) -> Result<Self, ConeError> {
        cone.check_r(r.into())?;
        if !crate::chow::same_ring(payload.ring(), &cone.base) {
            return Err(ConeError::ConeMismatch);
        }
        let mode = cone.mode(r, p);
        let expected = cone.payload_codim(r, mode);
        if payload.codim() != expected {
            return Err(ConeError::PayloadCodim { expected, got: payload.codim(), mode });
        }
        Ok(ConeClass { cone: cone.clone(), r, p, mode, payload })
    }

    pub fn to_doc(&self) -> ClassDoc {
        ClassDoc { r: self.r.into(), p: self.p, payload: self.payload.coeffs().to_vec() }
    }

    pub fn cone(&self) -> &ConeVariety {
        &self.cone
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn payload(&self) -> &ChowClass {
        &self.payload
    }

    /// Pushes the class along the comparison map to vertex bound `p_to`.
    pub fn compare_to(&self, p_to: u32) -> Result<ConeClass, ConeError> {
        if p_to < self.p {
            return Err(ConeError::ComparisonBackwards { from: self.p, to: p_to });
        }
        let mode = self.cone.mode(self.r, p_to);
        let payload = if mode == self.mode {
            self.payload.clone()
        } else {
            self.payload.mul(&ChowClass::hyperplane(&self.cone.base))?
        };
        ConeClass::new(&self.cone, self.r, p_to, payload)
    }

    /// The product `A_{r,p̄}(Y) × A_{s,q̄}(Y) → A_{r+s−d,p̄+q̄}(Y)`.
    ///
    /// * both allowed: the base product of the payloads, needing `r + s − d ≥ 1`;
    /// * one allowed: the base product, a disallowed class, then compared up to `p + q`;
    /// * neither allowed: the base product, then cut by the hyperplane section.
    ///
    /// ```
    /// use pervchow::cone::zobel;
    ///
    /// let z = zobel();
    /// let y = &z.cone;
    /// let a = y.class(2, 1, vec![2, 3]).unwrap();
    /// let b = y.class(2, 1, vec![5, 7]).unwrap();
    /// let ab = a.intersect(&b).unwrap();
    /// assert_eq!((ab.r(), ab.p()), (1, 2));
    /// assert_eq!(ab.payload().coeffs(), &[2 * 7 + 3 * 5]);
    /// ```
    pub fn intersect(&self, other: &ConeClass) -> Result<ConeClass, ConeError> {
        if self.cone != other.cone {
            return Err(ConeError::ConeMismatch);
        }
        let d = self.cone.dim() as i64;
        let dim = i64::from(self.r) + i64::from(other.r) - d;
        if dim < 0 {
            return Err(ConeError::DimensionOutOfRange { r: dim, d: self.cone.dim() });
        }
        let p = self.p + other.p;
        let product = self.payload.mul(&other.payload)?;
        match (self.mode, other.mode) {
            (Mode::Allowed, Mode::Allowed) => {
                if dim < 1 {
                    return Err(ConeError::AllowedProductUndefined(dim));
                }
                ConeClass::new(&self.cone, dim as u32, p, product)
            }
            (Mode::Allowed, Mode::Disallowed) | (Mode::Disallowed, Mode::Allowed) => {
                ConeClass::new(&self.cone, dim as u32, 0, product)?.compare_to(p)
            }
            (Mode::Disallowed, Mode::Disallowed) => {
                let sliced = product.mul(&ChowClass::hyperplane(&self.cone.base))?;
                ConeClass::new(&self.cone, dim as u32, p, sliced)
            }
        }
    }

    /// Degree of the product when its payload is a zero-cycle on the base:
    /// a point class (`r + s = d`) or the cone over points.
    pub fn degree_pairing(&self, other: &ConeClass) -> Result<i64, ConeError> {
        let product = self.intersect(other)?;
        if product.payload.dimension() != Some(0) {
            return Err(ConeError::NotZeroDimensional(product.r));
        }
        Ok(product.payload.degree()?)
    }

    /// For two disallowed classes, whether the product agrees with the two
    /// other evaluation orders `(a·h)·b` and `a·(b·h)` of slicing by the
    /// Cartier divisor and multiplying.
    pub fn cartier_coherence_check(&self, other: &ConeClass) -> Result<bool, ConeError> {
        if self.mode != Mode::Disallowed {
            return Err(ConeError::NotDisallowed("first"));
        }
        if other.mode != Mode::Disallowed {
            return Err(ConeError::NotDisallowed("second"));
        }
        let h = ChowClass::hyperplane(&self.cone.base);
        let product = self.intersect(other)?;
        let left = self.payload.mul(&h)?.mul(&other.payload)?;
        let right = self.payload.mul(&other.payload.mul(&h)?)?;
        Ok(product.payload.equivalent(&left)? && product.payload.equivalent(&right)?)
    }

    /// The incidence pattern on the vertex stratification: the cone over a
    /// nonzero payload meets the vertex in a point, anything else misses it.
    pub fn to_pattern(&self) -> CyclePattern {
        let strata = &self.cone.strata;
        if self.meets_vertex() {
            CyclePattern::new(strata, self.r, vec![Incidence::Dim(0); strata.depth()])
                .expect("an allowed class has positive dimension")
        } else {
            CyclePattern::avoiding(strata, self.r)
        }
    }

    fn meets_vertex(&self) -> bool {
        self.mode == Mode::Allowed && !self.payload.is_zero()
    }

    /// The joint pattern of two classes: they share the vertex when both are
    /// cones through it, and meet in dimension `r + s − d`.
    pub fn joint_pattern(&self, other: &ConeClass) -> Result<JointPattern, ConeError> {
        let both = self.meets_vertex() && other.meets_vertex();
        let depth = self.cone.strata.depth();
        let joint = vec![if both { Incidence::Dim(0) } else { Incidence::Empty }; depth];
        let total = Incidence::from_signed(i64::from(self.r) + i64::from(other.r) - self.cone.dim() as i64);
        Ok(JointPattern::new(self.to_pattern(), other.to_pattern(), joint, total)?)
    }
}

/// The cone over the quadric surface with its named classes.
#[derive(Debug, Clone)]
pub struct ZobelCatalog {
    pub cone: ConeVariety,
    /// The line `P^1 × q` on the base, avoiding the vertex.
    pub l: ConeClass,
    /// The line `p × P^1` on the base, avoiding the vertex.
    pub m: ConeClass,
    /// The cone `C(p × q)` over a point.
    pub n: ConeClass,
    /// The cone `C(P^1 × q')` over a line of the first ruling.
    pub d: ConeClass,
    /// The base `Q` itself as a divisor avoiding the vertex.
    pub q: ConeClass,
}

/// The cone over `P^1 × P^1 ⊂ P^3`.
///
/// ```
/// use pervchow::cone::zobel;
///
/// let z = zobel();
/// assert_eq!(z.d.degree_pairing(&z.l).unwrap(), 0);
/// assert_eq!(z.d.degree_pairing(&z.m).unwrap(), 1);
/// ```
pub fn zobel() -> ZobelCatalog {
    let cone = ConeVariety::new(quadric_surface()).expect("quadric has dimension 2");
    let class = |r, p, payload| cone.class(r, p, payload).expect("catalog class is valid");
    ZobelCatalog {
        l: class(1, 0, vec![1, 0]),
        m: class(1, 0, vec![0, 1]),
        n: class(1, 2, vec![1]),
        d: class(2, 1, vec![1, 0]),
        q: class(2, 0, vec![1]),
        cone,
    }
}

/// The group table of a cone: `A_{r,p̄}` for every `r` and `p ≤ d − 1`.
pub fn group_table(cone: &ConeVariety) -> Result<Vec<(u32, u32, FpAbelianGroup)>, ConeError> {
    let d = cone.dim() as u32;
    let mut out = Vec::new();
    for r in 0..=d {
        for p in 0..d {
            out.push((r, p, cone.chow_group(r.into(), p)?));
        }
    }
    Ok(out)
}

/// Matrix of a pairing into `Z` on generator coordinates: entry `(i, j)`
/// is the degree of the product of the `i`-th and `j`-th generators.
pub fn pairing_matrix(cone: &ConeVariety, (r, p): (u32, u32), (s, q): (u32, u32)) -> Result<IntMatrix, ConeError> {
    let ga = cone.chow_group(r.into(), p)?;
    let gb = cone.chow_group(s.into(), q)?;
    let unit = |n, i| -> Vec<i64> { (0..n).map(|k| i64::from(k == i)).collect() };
    let mut m = IntMatrix::zeros(ga.rank(), gb.rank());
    for i in 0..ga.rank() {
        let a = cone.class(r.into(), p, unit(ga.rank(), i))?;
        for j in 0..gb.rank() {
            let b = cone.class(s.into(), q, unit(gb.rank(), j))?;
            m[(i, j)] = a.degree_pairing(&b)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::projective_space;

    fn factors(g: &FpAbelianGroup) -> String {
        g.invariant_factors().unwrap().to_string()
    }

    #[test]
    fn zobel_groups() {
        let y = zobel().cone;
        assert_eq!(y.dim(), 3);
        for p in 0..=2 {
            assert_eq!(factors(&y.chow_group(3, p).unwrap()), "Z");
            assert_eq!(factors(&y.chow_group(0, p).unwrap()), "Z");
        }
        assert_eq!(factors(&y.chow_group(2, 0).unwrap()), "Z");
        assert_eq!(factors(&y.chow_group(2, 1).unwrap()), "Z + Z");
        assert_eq!(factors(&y.chow_group(2, 2).unwrap()), "Z + Z");
        assert_eq!(factors(&y.chow_group(1, 0).unwrap()), "Z + Z");
        assert_eq!(factors(&y.chow_group(1, 1).unwrap()), "Z + Z");
        assert_eq!(factors(&y.chow_group(1, 2).unwrap()), "Z");
        assert!(matches!(y.chow_group(4, 0), Err(ConeError::DimensionOutOfRange { .. })));
        assert!(matches!(y.chow_group(-1, 0), Err(ConeError::DimensionOutOfRange { .. })));
    }

    #[test]
    fn zobel_comparisons() {
        let y = zobel().cone;
        let m = y.comparison_map(2, 0, 1).unwrap();
        assert_eq!(m.matrix().to_rows(), vec![vec![1], vec![1]]);
        let m = y.comparison_map(1, 0, 2).unwrap();
        assert_eq!(m.matrix().to_rows(), vec![vec![1, 1]]);
        assert_eq!(y.comparison_map(1, 0, 1).unwrap().matrix(), &IntMatrix::identity(2));
        assert_eq!(y.comparison_map(2, 1, 1).unwrap().matrix(), &IntMatrix::identity(2));
        assert!(matches!(y.comparison_map(1, 2, 0), Err(ConeError::ComparisonBackwards { .. })));
    }

    #[test]
    fn zobel_named_classes() {
        let z = zobel();
        assert_eq!(z.l.mode(), Mode::Disallowed);
        assert_eq!(z.n.mode(), Mode::Allowed);
        assert_eq!(z.l.compare_to(2).unwrap(), z.n);
        assert_eq!(z.m.compare_to(2).unwrap(), z.n);
        assert_ne!(z.l, z.m);
        assert_eq!(z.d.degree_pairing(&z.l).unwrap(), 0);
        assert_eq!(z.d.degree_pairing(&z.m).unwrap(), 1);
        assert_eq!(z.m.degree_pairing(&z.d).unwrap(), 1);
        // no pairing of the top-perversity groups A_2 × A_1
        let top_d = z.d.compare_to(2).unwrap();
        assert_eq!(top_d.degree_pairing(&z.n), Err(ConeError::AllowedProductUndefined(0)));
    }

    #[test]
    fn zobel_case_three() {
        let z = zobel();
        let qq = z.q.intersect(&z.q).unwrap();
        assert_eq!((qq.r(), qq.p(), qq.mode()), (1, 0, Mode::Disallowed));
        assert_eq!(qq.payload().coeffs(), &[1, 1]);
        assert!(z.q.cartier_coherence_check(&z.q).unwrap());
        let ql = z.q.intersect(&z.l).unwrap();
        assert_eq!((ql.r(), ql.payload().coeffs()), (0, &[1][..]));
        assert_eq!(z.l.degree_pairing(&z.q).unwrap(), 1);
        assert_eq!(z.d.cartier_coherence_check(&z.q), Err(ConeError::NotDisallowed("first")));
        assert_eq!(z.q.degree_pairing(&z.q), Err(ConeError::NotZeroDimensional(1)));
    }

    #[test]
    fn zobel_pairings_in_coordinates() {
        let y = zobel().cone;
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for e in -3..=3 {
                        let x = y.class(2, 1, vec![a, b]).unwrap();
                        let w = y.class(1, 0, vec![c, e]).unwrap();
                        assert_eq!(x.degree_pairing(&w).unwrap(), a * e + b * c);
                        let v = y.class(2, 1, vec![c, e]).unwrap();
                        assert_eq!(x.intersect(&v).unwrap().payload().coeffs(), &[a * e + b * c]);
                        assert_eq!(x.degree_pairing(&v).unwrap(), a * e + b * c);
                    }
                }
            }
        }
        assert_eq!(
            pairing_matrix(&y, (2, 1), (1, 0)).unwrap().to_rows(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(pairing_matrix(&y, (2, 0), (1, 2)).unwrap().to_rows(), vec![vec![1]]);
    }

    #[test]
    fn divisor_pairings() {
        let y = zobel().cone;
        // A_{2,0} × A_{2,0} → A_{1,0}, A_{2,0} × A_{2,1} → A_{1,1}, A_{2,1} × A_{2,1} → A_{1,2}
        let o = y.class(2, 0, vec![1]).unwrap();
        let oo = o.intersect(&o).unwrap();
        assert_eq!((oo.r(), oo.p(), oo.payload().coeffs()), (1, 0, &[1, 1][..]));
        let d = y.class(2, 1, vec![1, 0]).unwrap();
        let od = o.intersect(&d).unwrap();
        assert_eq!((od.r(), od.p(), od.mode(), od.payload().coeffs()), (1, 1, Mode::Disallowed, &[1, 0][..]));
        let dd = d.intersect(&y.class(2, 1, vec![0, 1]).unwrap()).unwrap();
        assert_eq!((dd.r(), dd.p(), dd.payload().coeffs()), (1, 2, &[1][..]));
    }

    #[test]
    fn cone_over_plane() {
        let y = ConeVariety::new(projective_space(2)).unwrap();
        assert_eq!(y.dim(), 3);
        // hyperplane classes avoiding the vertex: h·h·h = 1
        let h = y.class(1, 0, vec![1]).unwrap();
        assert_eq!(h.payload().dimension(), Some(1));
        let plane = y.class(2, 0, vec![1]).unwrap();
        let hh = plane.intersect(&plane).unwrap();
        assert_eq!((hh.r(), hh.payload().codim(), hh.payload().coeffs()), (1, 1, &[1][..]));
        assert_eq!(plane.degree_pairing(&h).unwrap(), 1);
        let cone_line = y.class(2, 1, vec![1]).unwrap();
        assert_eq!(cone_line.degree_pairing(&h).unwrap(), 1);
        let cone_pt = y.class(1, 2, vec![1]).unwrap();
        assert_eq!(plane.degree_pairing(&cone_pt).unwrap(), 1);
        assert_eq!(y.comparison_map(1, 0, 2).unwrap().matrix().to_rows(), vec![vec![1]]);
    }

    #[test]
    fn class_validation() {
        let y = zobel().cone;
        assert!(matches!(y.class(1, 0, vec![1]), Err(ConeError::Chow(ChowError::Length { .. }))));
        let payload = ChowClass::new(y.base(), 2, vec![1]).unwrap();
        assert!(matches!(ConeClass::new(&y, 1, 0, payload), Err(ConeError::PayloadCodim { .. })));
        let other = ConeVariety::new(projective_space(2)).unwrap();
        let a = other.class(2, 0, vec![1]).unwrap();
        assert_eq!(zobel().q.intersect(&a), Err(ConeError::ConeMismatch));
        assert!(matches!(zobel().l.intersect(&zobel().l), Err(ConeError::DimensionOutOfRange { .. })));
        assert_eq!(ConeVariety::new(crate::chow::point()), Err(ConeError::PointBase));
    }

    #[test]
    fn patterns() {
        let z = zobel();
        assert_eq!(z.n.to_pattern().incidence(), &[Incidence::Dim(0); 3]);
        assert!(z.l.to_pattern().incidence().iter().all(|i| i.is_empty()));
        let zero = z.cone.class(1, 2, vec![0]).unwrap();
        assert!(zero.to_pattern().incidence().iter().all(|i| i.is_empty()));
        for p in 0..=2u32 {
            let b = z.cone.lift(p);
            assert_eq!(z.n.to_pattern().check_perversity(&b).unwrap(), p >= 2);
            assert!(z.l.to_pattern().check_perversity(&b).unwrap());
        }
    }

    #[test]
    fn json_forms() {
        let doc: ConeDoc = serde_json::from_str(r#"{"base":"quadric_surface"}"#).unwrap();
        let y = ConeVariety::from_doc(doc).unwrap();
        assert_eq!(y, zobel().cone);
        let c: ClassDoc = serde_json::from_str(r#"{"r":1,"p":0,"payload":[1,0]}"#).unwrap();
        assert_eq!(y.class_from_doc(c.clone()).unwrap().to_doc(), c);
        let doc: ConeDoc = serde_json::from_str(
            r#"{"base":{"dim":1,"basis":[["1"],["pt"]],"hyperplane":[1],"degree":[1]}}"#,
        )
        .unwrap();
        assert_eq!(ConeVariety::from_doc(doc).unwrap().dim(), 2);
    }
}
