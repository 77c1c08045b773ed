//! Graded Chow rings of smooth projective bases, given by explicit integer
//! bases and structure constants.
//!
//! Grading is by codimension throughout: `A^k` holds classes of dimension
//! `n - k`. Multiplying past codimension `n` yields the zero class of an
//! empty graded piece.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::{AbGroupError, FpAbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("classes live in different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("degree needs a class of codimension {expected}, got {got}")]
    WrongCodim { expected: usize, got: usize },
    #[error("A^{codim} has {expected} basis elements, got {got} coefficients")]
    Length { codim: usize, expected: usize, got: usize },
    #[error("unknown ring {0:?}")]
    UnknownRing(String),
    #[error("A^0 must have exactly one generator, found {0}")]
    UnitRank(usize),
    #[error("basis must list codimensions 0..={dim}, found {found} pieces")]
    BasisShape { dim: usize, found: usize },
    #[error("unknown basis symbol {0:?}")]
    UnknownSymbol(String),
    #[error("product key {0:?} is not of the form \"a*b\"")]
    BadProductKey(String),
    #[error("{a}*{b} and {b}*{a} disagree")]
    NotCommutative { a: String, b: String },
    #[error("({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("products with the unit must be the identity ({0})")]
    UnitViolated(String),
    #[error("relation {index} in A^{codim}: {reason}")]
    Relation { codim: usize, index: usize, reason: &'static str },
    #[error("products of presentations with relations are not supported")]
    TorsionProduct,
    #[error("integer overflow")]
    Overflow,
    #[error(transparent)]
    Group(#[from] AbGroupError),
}

/// A graded ring `A^0 ⊕ ... ⊕ A^n` on a fixed integer basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowRingPresentation {
    name: String,
    dim: usize,
    basis: Vec<Vec<String>>,
    /// `table[k1][k2][i][j]`: coefficients of `b^{k1}_i · b^{k2}_j` over `A^{k1+k2}`.
    table: Vec<Vec<Vec<Vec<Vec<i64>>>>>,
    hyperplane: Vec<i64>,
    degree: Vec<i64>,
    relations: Vec<IntMatrix>,
}

/// Wire form of a presentation.
///
/// ```json
/// {"name": "quadric", "dim": 2, "basis": [["1"], ["e", "f"], ["pt"]],
///  "products": {"e*f": [1]}, "hyperplane": [1, 1], "degree": [1]}
/// ```
///
/// Unlisted products are zero, products with the unit are implied, and a
/// product listed in one order fills in the other.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
    #[serde(default)]
    pub products: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub hyperplane: Vec<i64>,
    pub degree: Vec<i64>,
    /// Optional torsion: relation rows over the basis of `A^k`, keyed by `k`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relations: BTreeMap<String, Vec<Vec<i64>>>,
}

fn ck(v: Option<i64>) -> Result<i64, ChowError> {
    v.ok_or(ChowError::Overflow)
}

impl ChowRingPresentation {
    /// Builds and validates a presentation from its wire form.
    pub fn from_doc(doc: PresentationDoc) -> Result<Self, ChowError> {
        let dim = doc.dim;
        if doc.basis.len() != dim + 1 {
            return Err(ChowError::BasisShape { dim, found: doc.basis.len() });
        }
        if doc.basis[0].len() != 1 {
            return Err(ChowError::UnitRank(doc.basis[0].len()));
        }
        let mut lookup = BTreeMap::new();
        for (k, piece) in doc.basis.iter().enumerate() {
            for (i, sym) in piece.iter().enumerate() {
                if lookup.insert(sym.clone(), (k, i)).is_some() {
                    return Err(ChowError::UnknownSymbol(format!("{sym} (duplicate)")));
                }
            }
        }
        let sizes: Vec<usize> = doc.basis.iter().map(Vec::len).collect();
        let size = |k: usize| sizes.get(k).copied().unwrap_or(0);

        let mut given: BTreeMap<((usize, usize), (usize, usize)), Vec<i64>> = BTreeMap::new();
        for (key, coeffs) in &doc.products {
            let (a, b) = key.split_once('*').ok_or_else(|| ChowError::BadProductKey(key.clone()))?;
            let ia = *lookup.get(a.trim()).ok_or_else(|| ChowError::UnknownSymbol(a.trim().to_string()))?;
            let ib = *lookup.get(b.trim()).ok_or_else(|| ChowError::UnknownSymbol(b.trim().to_string()))?;
            let target = ia.0 + ib.0;
            if coeffs.len() != size(target) {
                return Err(ChowError::Length { codim: target, expected: size(target), got: coeffs.len() });
            }
            given.insert((ia, ib), coeffs.clone());
        }
        for (&(ia, ib), coeffs) in &given {
            if let Some(other) = given.get(&(ib, ia)) {
                if other != coeffs {
                    return Err(ChowError::NotCommutative {
                        a: doc.basis[ia.0][ia.1].clone(),
                        b: doc.basis[ib.0][ib.1].clone(),
                    });
                }
            }
        }

        let mut table = vec![vec![Vec::new(); dim + 1]; dim + 1];
        for k1 in 0..=dim {
            for k2 in 0..=dim {
                let target = size(k1 + k2);
                let mut block = vec![vec![vec![0i64; target]; size(k2)]; size(k1)];
                for (i, row) in block.iter_mut().enumerate() {
                    for (j, entry) in row.iter_mut().enumerate() {
                        if let Some(c) = given.get(&((k1, i), (k2, j))).or_else(|| given.get(&((k2, j), (k1, i)))) {
                            entry.clone_from(c);
                        } else if k1 == 0 {
                            entry[j] = 1;
                        } else if k2 == 0 {
                            entry[i] = 1;
                        }
                    }
                }
                table[k1][k2] = block;
            }
        }

        if dim >= 1 && doc.hyperplane.len() != size(1) {
            return Err(ChowError::Length { codim: 1, expected: size(1), got: doc.hyperplane.len() });
        }
        if doc.degree.len() != size(dim) {
            return Err(ChowError::Length { codim: dim, expected: size(dim), got: doc.degree.len() });
        }

        let mut relations: Vec<IntMatrix> = (0..=dim).map(|k| IntMatrix::zeros(0, size(k))).collect();
        for (key, rows) in doc.relations {
            let k: usize = key.parse().map_err(|_| ChowError::UnknownSymbol(format!("relation degree {key}")))?;
            if k > dim {
                return Err(ChowError::Relation { codim: k, index: 0, reason: "codimension exceeds dimension" });
            }
            relations[k] = IntMatrix::from_rows(rows, size(k))?;
        }

        let ring = ChowRingPresentation {
            name: doc.name.unwrap_or_else(|| "custom".to_string()),
            dim,
            basis: doc.basis,
            table,
            hyperplane: if dim >= 1 { doc.hyperplane } else { Vec::new() },
            degree: doc.degree,
            relations,
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        let mut products = BTreeMap::new();
        for k1 in 1..=self.dim {
            for k2 in k1..=self.dim {
                for i in 0..self.rank(k1) {
                    for j in 0..self.rank(k2) {
                        if k1 == k2 && j < i {
                            continue;
                        }
                        let c = &self.table[k1][k2][i][j];
                        if c.iter().any(|&v| v != 0) {
                            products.insert(format!("{}*{}", self.basis[k1][i], self.basis[k2][j]), c.clone());
                        }
                    }
                }
            }
        }
        let relations = self
            .relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.nrows() > 0)
            .map(|(k, r)| (k.to_string(), r.to_rows()))
            .collect();
        PresentationDoc {
            name: Some(self.name.clone()),
            dim: self.dim,
            basis: self.basis.clone(),
            products,
            hyperplane: self.hyperplane.clone(),
            degree: self.degree.clone(),
            relations,
        }
    }

    fn validate(&self) -> Result<(), ChowError> {
        let unit = self.unit();
        for k in 0..=self.dim {
            for i in 0..self.rank(k) {
                let b = self.basis_class(k, i);
                if self.mul(&unit, &b)? != b || self.mul(&b, &unit)? != b {
                    return Err(ChowError::UnitViolated(self.basis[k][i].clone()));
                }
            }
        }
        // Commutativity and associativity on every basis triple.
        let all: Vec<(usize, usize)> =
            (0..=self.dim).flat_map(|k| (0..self.rank(k)).map(move |i| (k, i))).collect();
        for &(ka, ia) in &all {
            let a = self.basis_class(ka, ia);
            for &(kb, ib) in &all {
                let b = self.basis_class(kb, ib);
                let ab = self.mul(&a, &b)?;
                if ab != self.mul(&b, &a)? {
                    return Err(ChowError::NotCommutative {
                        a: self.basis[ka][ia].clone(),
                        b: self.basis[kb][ib].clone(),
                    });
                }
                if ka + kb > self.dim {
                    continue;
                }
                for &(kc, ic) in &all {
                    if ka + kb + kc > self.dim {
                        continue;
                    }
                    let c = self.basis_class(kc, ic);
                    if self.mul(&ab, &c)? != self.mul(&a, &self.mul(&b, &c)?)? {
                        return Err(ChowError::NotAssociative {
                            a: self.basis[ka][ia].clone(),
                            b: self.basis[kb][ib].clone(),
                            c: self.basis[kc][ic].clone(),
                        });
                    }
                }
            }
        }
        // Relations must be an ideal, and the degree must kill them.
        for k in 0..=self.dim {
            let rel = &self.relations[k];
            for r in 0..rel.nrows() {
                let class = self.class_unchecked(k, rel.row(r).to_vec());
                if k == self.dim && self.degree_raw(&class.coeffs)? != 0 {
                    return Err(ChowError::Relation { codim: k, index: r, reason: "degree does not vanish" });
                }
                for &(kb, ib) in &all {
                    let prod = self.mul(&class, &self.basis_class(kb, ib))?;
                    if prod.codim <= self.dim && !self.group(prod.codim).is_zero_element(&prod.coeffs)? {
                        return Err(ChowError::Relation { codim: k, index: r, reason: "not closed under products" });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension `n` of the base.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements of `A^k` (zero past the top).
    pub fn rank(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: usize) -> &[String] {
        self.basis.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn hyperplane_coeffs(&self) -> &[i64] {
        &self.hyperplane
    }

    pub fn degree_coeffs(&self) -> &[i64] {
        &self.degree
    }

    /// `A^k` as an abelian group.
    pub fn group(&self, k: usize) -> FpAbelianGroup {
        let rel = self.relations.get(k).cloned().unwrap_or_else(|| IntMatrix::zeros(0, 0));
        FpAbelianGroup::new(self.rank(k), rel).expect("relations validated against basis size")
    }

    pub fn has_relations(&self) -> bool {
        self.relations.iter().any(|r| r.nrows() > 0)
    }

    fn class_unchecked(&self, codim: usize, coeffs: Vec<i64>) -> ChowClass {
        ChowClass { ring: Arc::new(self.clone()), codim, coeffs }
    }

    fn basis_class(&self, k: usize, i: usize) -> ChowClass {
        let mut coeffs = vec![0; self.rank(k)];
        coeffs[i] = 1;
        self.class_unchecked(k, coeffs)
    }

    fn unit(&self) -> ChowClass {
        self.class_unchecked(0, vec![1])
    }

    fn mul_raw(&self, k1: usize, x: &[i64], k2: usize, y: &[i64]) -> Result<Vec<i64>, ChowError> {
        let target = k1 + k2;
        let mut out = vec![0i64; self.rank(target)];
        if target > self.dim {
            return Ok(out);
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let w = ck(xi.checked_mul(yj))?;
                for (o, &c) in out.iter_mut().zip(&self.table[k1][k2][i][j]) {
                    *o = ck(o.checked_add(ck(w.checked_mul(c))?))?;
                }
            }
        }
        Ok(out)
    }

    fn degree_raw(&self, x: &[i64]) -> Result<i64, ChowError> {
        x.iter().zip(&self.degree).try_fold(0i64, |acc, (&a, &b)| ck(acc.checked_add(ck(a.checked_mul(b))?)))
    }

    /// Bilinear product from the structure constants (needs no `Arc`).
    fn mul(&self, x: &ChowClass, y: &ChowClass) -> Result<ChowClass, ChowError> {
        let coeffs = self.mul_raw(x.codim, &x.coeffs, y.codim, &y.coeffs)?;
        Ok(ChowClass { ring: x.ring.clone(), codim: x.codim + y.codim, coeffs })
    }

    /// Matrix of `z ↦ z·x` from `A^k` to `A^{k + codim x}`, in column convention.
    pub fn multiplication_matrix(&self, x: &ChowClass, k: usize) -> Result<IntMatrix, ChowError> {
        let target = k + x.codim;
        let mut m = IntMatrix::zeros(self.rank(target), self.rank(k));
        for j in 0..self.rank(k) {
            let mut e = vec![0; self.rank(k)];
            e[j] = 1;
            let col = self.mul_raw(k, &e, x.codim, &x.coeffs)?;
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}

/// Handle to a validated presentation, shared between classes.
pub type Ring = Arc<ChowRingPresentation>;

/// A class in `A^codim` of a presentation, as coefficients over its basis.
#[derive(Debug, Clone)]
pub struct ChowClass {
    ring: Ring,
    codim: usize,
    coeffs: Vec<i64>,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.codim == other.codim && self.coeffs == other.coeffs
    }
}

impl Eq for ChowClass {}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ChowClass {
    pub fn new(ring: &Ring, codim: usize, coeffs: Vec<i64>) -> Result<Self, ChowError> {
        if coeffs.len() != ring.rank(codim) {
            return Err(ChowError::Length { codim, expected: ring.rank(codim), got: coeffs.len() });
        }
        Ok(ChowClass { ring: ring.clone(), codim, coeffs })
    }

    /// A class given by its dimension rather than codimension.
    pub fn of_dimension(ring: &Ring, dim: usize, coeffs: Vec<i64>) -> Result<Self, ChowError> {
        let codim = ring.dim().checked_sub(dim).ok_or(ChowError::Length { codim: 0, expected: 0, got: coeffs.len() })?;
        Self::new(ring, codim, coeffs)
    }

    pub fn zero(ring: &Ring, codim: usize) -> Self {
        ChowClass { ring: ring.clone(), codim, coeffs: vec![0; ring.rank(codim)] }
    }

    pub fn unit(ring: &Ring) -> Self {
        ChowClass { ring: ring.clone(), codim: 0, coeffs: vec![1] }
    }

    /// The hyperplane class `h ∈ A^1`.
    pub fn hyperplane(ring: &Ring) -> Self {
        ChowClass { ring: ring.clone(), codim: 1, coeffs: ring.hyperplane.clone() }
    }

    /// The `i`-th basis element of `A^k`.
    pub fn basis_element(ring: &Ring, k: usize, i: usize) -> Self {
        let mut coeffs = vec![0; ring.rank(k)];
        coeffs[i] = 1;
        ChowClass { ring: ring.clone(), codim: k, coeffs }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    /// Dimension `n - codim`; `None` past the top degree.
    pub fn dimension(&self) -> Option<usize> {
        self.ring.dim().checked_sub(self.codim)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Product in the ring; codimensions add.
    ///
    /// ```
    /// use std::sync::Arc;
    /// use pervchow::chow::{builtin, ChowClass};
    ///
    /// let q = Arc::new(builtin("quadric_surface").unwrap());
    /// let x = ChowClass::new(&q, 1, vec![2, 3]).unwrap();
    /// let y = ChowClass::new(&q, 1, vec![5, 7]).unwrap();
    /// assert_eq!(x.mul(&y).unwrap().degree().unwrap(), 2 * 7 + 3 * 5);
    /// ```
    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_ring(other)?;
        self.ring.mul(self, other)
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_ring(other)?;
        if self.codim != other.codim {
            return Err(ChowError::WrongCodim { expected: self.codim, got: other.codim });
        }
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ck(a.checked_add(*b))).collect::<Result<_, _>>()?;
        Ok(ChowClass { ring: self.ring.clone(), codim: self.codim, coeffs })
    }

    pub fn scale(&self, k: i64) -> Result<ChowClass, ChowError> {
        let coeffs = self.coeffs.iter().map(|a| ck(a.checked_mul(k))).collect::<Result<_, _>>()?;
        Ok(ChowClass { ring: self.ring.clone(), codim: self.codim, coeffs })
    }

    /// Degree of a zero-dimensional class.
    pub fn degree(&self) -> Result<i64, ChowError> {
        if self.codim != self.ring.dim() {
            return Err(ChowError::WrongCodim { expected: self.ring.dim(), got: self.codim });
        }
        self.ring.degree_raw(&self.coeffs)
    }

    /// Whether two classes agree modulo the relations of their graded piece.
    pub fn equivalent(&self, other: &ChowClass) -> Result<bool, ChowError> {
        self.check_ring(other)?;
        if self.codim != other.codim {
            return Ok(false);
        }
        if self.codim > self.ring.dim() {
            return Ok(true);
        }
        let diff: Vec<i64> =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ck(a.checked_sub(*b))).collect::<Result<_, _>>()?;
        Ok(self.ring.group(self.codim).is_zero_element(&diff)?)
    }

    fn check_ring(&self, other: &ChowClass) -> Result<(), ChowError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(ChowError::RingMismatch(self.ring.name.clone(), other.ring.name.clone()));
        }
        Ok(())
    }
}

/// The point `Spec k`.
pub fn point() -> ChowRingPresentation {
    ChowRingPresentation::from_doc(PresentationDoc {
        name: Some("point".into()),
        dim: 0,
        basis: vec![vec!["pt".into()]],
        products: BTreeMap::new(),
        hyperplane: Vec::new(),
        degree: vec![1],
        relations: BTreeMap::new(),
    })
    .expect("point presentation is valid")
}

/// `Z[h]/h^{n+1}` with basis `1, h, h^2, ..., h^n`.
pub fn projective_space(n: usize) -> ChowRingPresentation {
    let sym = |k: usize| match k {
        0 => "1".to_string(),
        1 => "h".to_string(),
        k => format!("h^{k}"),
    };
    let mut products = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n - a {
            products.insert(format!("{}*{}", sym(a), sym(b)), vec![1]);
        }
    }
    ChowRingPresentation::from_doc(PresentationDoc {
        name: Some(format!("P{n}")),
        dim: n,
        basis: (0..=n).map(|k| vec![sym(k)]).collect(),
        products,
        hyperplane: if n >= 1 { vec![1] } else { Vec::new() },
        degree: vec![1],
        relations: BTreeMap::new(),
    })
    .expect("projective space presentation is valid")
}

/// The smooth quadric `P^1 × P^1 ⊂ P^3`.
///
/// `e` is the class of a line `P^1 × q`, `f` of a line `p × P^1`; `e² = f² = 0`,
/// `e·f = [pt]` and the hyperplane section is `e + f`.
pub fn quadric_surface() -> ChowRingPresentation {
    ChowRingPresentation::from_doc(PresentationDoc {
        name: Some("quadric_surface".into()),
        dim: 2,
        basis: vec![vec!["1".into()], vec!["e".into(), "f".into()], vec!["pt".into()]],
        products: BTreeMap::from([("e*f".to_string(), vec![1])]),
        hyperplane: vec![1, 1],
        degree: vec![1],
        relations: BTreeMap::new(),
    })
    .expect("quadric presentation is valid")
}

/// Künneth product `A^*(X) ⊗ A^*(Y)`, embedded by Segre: `h = h_X ⊗ 1 + 1 ⊗ h_Y`.
pub fn product(x: &ChowRingPresentation, y: &ChowRingPresentation) -> Result<ChowRingPresentation, ChowError> {
    if x.has_relations() || y.has_relations() {
        return Err(ChowError::TorsionProduct);
    }
    let dim = x.dim + y.dim;
    // Basis of A^k: pairs (i, a, b) with a ∈ A^i(X), b ∈ A^{k-i}(Y), in that order.
    let pieces: Vec<Vec<(usize, usize, usize)>> = (0..=dim)
        .map(|k| {
            (0..=k)
                .filter(|&i| i <= x.dim && k - i <= y.dim)
                .flat_map(|i| (0..x.rank(i)).flat_map(move |a| (0..y.rank(k - i)).map(move |b| (i, a, b))))
                .collect()
        })
        .collect();
    let name_of = |k: usize, &(i, a, b): &(usize, usize, usize)| format!("{}⊗{}", x.basis[i][a], y.basis[k - i][b]);
    let basis: Vec<Vec<String>> =
        pieces.iter().enumerate().map(|(k, p)| p.iter().map(|e| name_of(k, e)).collect()).collect();

    let mut products = BTreeMap::new();
    for k1 in 1..=dim {
        for k2 in k1..=dim {
            let target = k1 + k2;
            if target > dim {
                continue;
            }
            for (p1, e1) in pieces[k1].iter().enumerate() {
                for (p2, e2) in pieces[k2].iter().enumerate() {
                    let (i1, a1, b1) = *e1;
                    let (i2, a2, b2) = *e2;
                    let xa = x.mul_raw(i1, &unit_vec(x.rank(i1), a1), i2, &unit_vec(x.rank(i2), a2))?;
                    let yb = y.mul_raw(k1 - i1, &unit_vec(y.rank(k1 - i1), b1), k2 - i2, &unit_vec(y.rank(k2 - i2), b2))?;
                    let mut coeffs = vec![0i64; pieces[target].len()];
                    for (t, &(it, at, bt)) in pieces[target].iter().enumerate() {
                        if it == i1 + i2 && it <= x.dim && target - it <= y.dim {
                            coeffs[t] = ck(xa[at].checked_mul(yb[bt]))?;
                        }
                    }
                    if coeffs.iter().any(|&c| c != 0) {
                        products.insert(format!("{}*{}", basis[k1][p1], basis[k2][p2]), coeffs);
                    }
                }
            }
        }
    }

    let hyperplane = if dim >= 1 {
        pieces[1]
            .iter()
            .map(|&(i, a, b)| if i == 1 { x.hyperplane[a] } else { y.hyperplane[b] })
            .collect()
    } else {
        Vec::new()
    };
    let degree = pieces[dim].iter().map(|&(_, a, b)| x.degree[a] * y.degree[b]).collect();

    ChowRingPresentation::from_doc(PresentationDoc {
        name: Some(format!("product({},{})", x.name, y.name)),
        dim,
        basis,
        products,
        hyperplane,
        degree,
        relations: BTreeMap::new(),
    })
}

fn unit_vec(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Looks up a built-in presentation.
///
/// Accepted names: `point`, `P<n>` (or `P^<n>`, `projective_space(<n>)`),
/// `quadric_surface` (or `quadric`), and `product(<a>,<b>)`.
pub fn builtin(name: &str) -> Result<ChowRingPresentation, ChowError> {
    let name = name.trim();
    let unknown = || ChowError::UnknownRing(name.to_string());
    if name == "point" {
        return Ok(point());
    }
    if name == "quadric_surface" || name == "quadric" {
        return Ok(quadric_surface());
    }
    if let Some(inner) = name.strip_prefix("projective_space(").and_then(|s| s.strip_suffix(')')) {
        return inner.trim().parse().map(projective_space).map_err(|_| unknown());
    }
    if let Some(rest) = name.strip_prefix("P^").or_else(|| name.strip_prefix('P')) {
        if let Ok(n) = rest.parse() {
            return Ok(projective_space(n));
        }
    }
    if let Some(inner) = name.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let split = top_level_comma(inner).ok_or_else(unknown)?;
        let a = builtin(&inner[..split])?;
        let b = builtin(&inner[split + 1..])?;
        return product(&a, &b);
    }
    Err(unknown())
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(r: ChowRingPresentation) -> Ring {
        Arc::new(r)
    }

    #[test]
    fn quadric_products() {
        let q = ring(quadric_surface());
        let h = ChowClass::hyperplane(&q);
        let hh = h.mul(&h).unwrap();
        assert_eq!(hh.coeffs(), &[2]);
        assert_eq!(hh.degree().unwrap(), 2);
        let e = ChowClass::basis_element(&q, 1, 0);
        let f = ChowClass::basis_element(&q, 1, 1);
        assert_eq!(e.mul(&f).unwrap().degree().unwrap(), 1);
        assert!(e.mul(&e).unwrap().is_zero());
        // a·h = a + b after degree
        for a in -3..=3 {
            for b in -3..=3 {
                let x = ChowClass::new(&q, 1, vec![a, b]).unwrap();
                assert_eq!(x.mul(&h).unwrap().degree().unwrap(), a + b);
            }
        }
    }

    #[test]
    fn zobel_coordinate_pairing() {
        let q = ring(quadric_surface());
        for (a, b, c, d) in [(1, 0, 0, 1), (2, -1, 3, 4), (0, 0, 5, 5)] {
            let x = ChowClass::new(&q, 1, vec![a, b]).unwrap();
            let y = ChowClass::new(&q, 1, vec![c, d]).unwrap();
            assert_eq!(x.mul(&y).unwrap().degree().unwrap(), a * d + b * c);
        }
    }

    #[test]
    fn projective_powers() {
        for n in 0..=5 {
            let p = ring(projective_space(n));
            for a in 0..=n {
                for b in 0..=n {
                    let x = ChowClass::basis_element(&p, a, 0);
                    let y = ChowClass::basis_element(&p, b, 0);
                    let xy = x.mul(&y).unwrap();
                    assert_eq!(xy.codim(), a + b);
                    if a + b <= n {
                        assert_eq!(xy.coeffs(), &[1]);
                    } else {
                        assert!(xy.is_zero());
                        assert!(xy.dimension().is_none());
                    }
                }
            }
        }
        let p2 = ring(projective_space(2));
        let h = ChowClass::hyperplane(&p2);
        assert_eq!(h.mul(&h).unwrap().degree().unwrap(), 1);
    }

    #[test]
    fn unit_and_degree() {
        let q = ring(quadric_surface());
        let one = ChowClass::unit(&q);
        let x = ChowClass::new(&q, 1, vec![4, -2]).unwrap();
        assert_eq!(one.mul(&x).unwrap(), x);
        let pt = ChowClass::new(&q, 2, vec![3]).unwrap();
        assert_eq!(pt.degree().unwrap(), 3);
        assert_eq!(x.degree(), Err(ChowError::WrongCodim { expected: 2, got: 1 }));
    }

    #[test]
    fn ring_mismatch() {
        let q = ring(quadric_surface());
        let p = ring(projective_space(2));
        let a = ChowClass::unit(&q);
        let b = ChowClass::unit(&p);
        assert!(matches!(a.mul(&b), Err(ChowError::RingMismatch(..))));
        // structurally equal rings in different allocations are the same ring
        let q2 = ring(quadric_surface());
        assert!(a.mul(&ChowClass::unit(&q2)).is_ok());
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("P2").unwrap(), projective_space(2));
        assert_eq!(builtin("P^3").unwrap(), projective_space(3));
        assert_eq!(builtin("projective_space(4)").unwrap(), projective_space(4));
        assert_eq!(builtin("quadric").unwrap(), quadric_surface());
        assert_eq!(builtin("product(P1,product(P1,point))").unwrap().dim(), 2);
        assert!(matches!(builtin("grassmannian(2,4)"), Err(ChowError::UnknownRing(_))));
    }

    #[test]
    fn rejects_bad_presentations() {
        let mut doc = quadric_surface().to_doc();
        doc.products.insert("e*e".into(), vec![1]);
        doc.products.insert("f*f".into(), vec![0]);
        // still commutative and associative: e² = pt is a valid (different) ring
        assert!(ChowRingPresentation::from_doc(doc.clone()).is_ok());
        doc.products.insert("f*e".into(), vec![2]);
        assert!(matches!(ChowRingPresentation::from_doc(doc), Err(ChowError::NotCommutative { .. })));

        // h·h lands past the top of a curve, so it has no coefficients
        let bad = PresentationDoc {
            name: None,
            dim: 1,
            basis: vec![vec!["1".into()], vec!["h".into()]],
            products: BTreeMap::from([("h*h".to_string(), vec![1])]),
            hyperplane: vec![1],
            degree: vec![1],
            relations: BTreeMap::new(),
        };
        assert!(matches!(ChowRingPresentation::from_doc(bad), Err(ChowError::Length { .. })));

        let two_units = PresentationDoc {
            name: None,
            dim: 0,
            basis: vec![vec!["a".into(), "b".into()]],
            products: BTreeMap::new(),
            hyperplane: vec![],
            degree: vec![1, 1],
            relations: BTreeMap::new(),
        };
        assert_eq!(ChowRingPresentation::from_doc(two_units), Err(ChowError::UnitRank(2)));
    }

    #[test]
    fn non_associative_table_rejected() {
        // A^1 = <a, b>, A^2 = <p>, A^3 = <q>: a·a = p, p·b = q, but a·b = 0, so (a·a)·b != a·(a·b).
        let doc = PresentationDoc {
            name: None,
            dim: 3,
            basis: vec![vec!["1".into()], vec!["a".into(), "b".into()], vec!["p".into()], vec!["q".into()]],
            products: BTreeMap::from([("a*a".to_string(), vec![1]), ("p*b".to_string(), vec![1])]),
            hyperplane: vec![1, 0],
            degree: vec![1],
            relations: BTreeMap::new(),
        };
        assert!(matches!(ChowRingPresentation::from_doc(doc), Err(ChowError::NotAssociative { .. })));
    }

    #[test]
    fn torsion_relations() {
        // P^1 with A^1 = Z/2 would make the degree ill defined
        let mut doc = projective_space(1).to_doc();
        doc.relations.insert("1".into(), vec![vec![2]]);
        assert!(matches!(ChowRingPresentation::from_doc(doc), Err(ChowError::Relation { .. })));

        // a Z/2 in A^1 of a surface that dies in A^2
        let doc = PresentationDoc {
            name: Some("torsion".into()),
            dim: 2,
            basis: vec![vec!["1".into()], vec!["h".into(), "t".into()], vec!["pt".into()]],
            products: BTreeMap::from([("h*h".to_string(), vec![1])]),
            hyperplane: vec![1, 0],
            degree: vec![1],
            relations: BTreeMap::from([("1".to_string(), vec![vec![0, 2]])]),
        };
        let r = ring(ChowRingPresentation::from_doc(doc).unwrap());
        let g = r.group(1).invariant_factors().unwrap();
        assert_eq!((g.free_rank, g.torsion), (1, vec![2]));
        let t = ChowClass::new(&r, 1, vec![0, 2]).unwrap();
        assert!(t.equivalent(&ChowClass::zero(&r, 1)).unwrap());
    }

    #[test]
    fn doc_round_trip() {
        for r in [quadric_surface(), projective_space(3), point()] {
            let back = ChowRingPresentation::from_doc(r.to_doc()).unwrap();
            assert_eq!(back, r);
        }
    }
}
