//! Finitely presented abelian groups and their homomorphisms.
//!
//! A group is `Z^rank / (row span of relations)`. A [`GroupMap`] acts on
//! generator coordinates as a column-vector matrix of shape
//! `target.rank × source.rank`. Subgroup questions are answered through
//! [`smith_normal_form`].

mod matrix;
mod snf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbGroupError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("relation {relation} of the source is not sent into the target's relations")]
    NotWellDefined { relation: usize },
    #[error("maps are not composable: middle groups differ")]
    MiddleMismatch,
}

/// `Z^rank` modulo the row span of `relations`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupDoc", into = "GroupDoc")]
pub struct FpAbelianGroup {
    rank: usize,
    relations: IntMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub rank: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

impl TryFrom<GroupDoc> for FpAbelianGroup {
    type Error = AbGroupError;
    fn try_from(doc: GroupDoc) -> Result<Self, Self::Error> {
        FpAbelianGroup::new(doc.rank, IntMatrix::from_rows(doc.relations, doc.rank)?)
    }
}

impl From<FpAbelianGroup> for GroupDoc {
    fn from(g: FpAbelianGroup) -> Self {
        GroupDoc { rank: g.rank, relations: g.relations.to_rows() }
    }
}

/// `Z^free_rank ⊕ Z/n_1 ⊕ ... ⊕ Z/n_k` with `n_j | n_{j+1}` and `n_j > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantFactors {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl std::fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|n| format!("Z/{n}")).collect();
        parts.splice(0..0, std::iter::repeat("Z".to_string()).take(self.free_rank));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FpAbelianGroup {
    pub fn new(rank: usize, relations: IntMatrix) -> Result<Self, AbGroupError> {
        if relations.nrows() > 0 && relations.ncols() != rank {
            return Err(AbGroupError::Shape {
                op: "relations",
                left: (relations.nrows(), relations.ncols()),
                right: (relations.nrows(), rank),
            });
        }
        let relations = if relations.nrows() == 0 { IntMatrix::zeros(0, rank) } else { relations };
        Ok(FpAbelianGroup { rank, relations })
    }

    /// `Z^rank`.
    pub fn free(rank: usize) -> Self {
        FpAbelianGroup { rank, relations: IntMatrix::zeros(0, rank) }
    }

    /// `Z/n_1 ⊕ ... ⊕ Z/n_k`; an order of `0` gives a free summand.
    pub fn cyclic_sum(orders: &[i64]) -> Self {
        let rank = orders.len();
        let rows = orders
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(k, &n)| {
                let mut r = vec![0; rank];
                r[k] = n;
                r
            })
            .collect();
        FpAbelianGroup { rank, relations: IntMatrix::from_rows(rows, rank).expect("rows built with rank entries") }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Structure of the group from the Smith form of its relation matrix.
    ///
    /// ```
    /// use pervchow::abgroup::{FpAbelianGroup, IntMatrix};
    ///
    /// let g = FpAbelianGroup::new(2, IntMatrix::from_nested(vec![vec![2, 0], vec![0, 0]]).unwrap()).unwrap();
    /// let f = g.invariant_factors().unwrap();
    /// assert_eq!((f.free_rank, f.torsion), (1, vec![2]));
    /// ```
    pub fn invariant_factors(&self) -> Result<InvariantFactors, AbGroupError> {
        let snf = smith_normal_form(&self.relations)?;
        let diag = snf.diagonal();
        let nonzero = diag.iter().filter(|&&d| d != 0).count();
        Ok(InvariantFactors {
            free_rank: self.rank - nonzero,
            torsion: diag.into_iter().filter(|&d| d > 1).collect(),
        })
    }

    /// The relation lattice inside `Z^rank`.
    pub fn relation_lattice(&self) -> Result<Lattice, AbGroupError> {
        Lattice::from_generators(self.relations.clone())
    }

    /// Whether the coordinate vector `x` represents zero.
    pub fn is_zero_element(&self, x: &[i64]) -> Result<bool, AbGroupError> {
        self.relation_lattice()?.contains(x)
    }
}

/// A sublattice of `Z^n` spanned by the rows of a generator matrix, with its
/// Smith form cached for membership tests.
#[derive(Debug, Clone)]
pub struct Lattice {
    generators: IntMatrix,
    snf: SmithForm,
}

impl Lattice {
    pub fn from_generators(generators: IntMatrix) -> Result<Self, AbGroupError> {
        let snf = smith_normal_form(&generators)?;
        Ok(Lattice { generators, snf })
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.ncols()
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// `x` lies in the lattice iff `x·V` is divisible entrywise by the
    /// diagonal of `S = U·G·V` and vanishes past its rank.
    pub fn contains(&self, x: &[i64]) -> Result<bool, AbGroupError> {
        if x.len() != self.ambient_dim() {
            return Err(AbGroupError::Shape { op: "contains", left: (1, x.len()), right: (1, self.ambient_dim()) });
        }
        let row = IntMatrix::from_rows(vec![x.to_vec()], x.len())?;
        let xv = row.mul(&self.snf.v)?;
        let diag = self.snf.diagonal();
        for j in 0..x.len() {
            let value = xv[(0, j)];
            match diag.get(j) {
                Some(&d) if d != 0 => {
                    if value % d != 0 {
                        return Ok(false);
                    }
                }
                _ => {
                    if value != 0 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool, AbGroupError> {
        for i in 0..other.generators.nrows() {
            if !self.contains(other.generators.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Lattice) -> Result<bool, AbGroupError> {
        Ok(self.contains_lattice(other)? && other.contains_lattice(self)?)
    }
}

/// Integer basis of `{x : m·x = 0}`, one basis vector per row.
pub fn integer_kernel(m: &IntMatrix) -> Result<IntMatrix, AbGroupError> {
    let snf = smith_normal_form(m)?;
    let rank = snf.rank();
    let rows = (rank..m.ncols()).map(|j| snf.v.col(j)).collect();
    IntMatrix::from_rows(rows, m.ncols())
}

/// A homomorphism of finitely presented groups, checked to be well defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapDoc", into = "MapDoc")]
pub struct GroupMap {
    source: FpAbelianGroup,
    target: FpAbelianGroup,
    matrix: IntMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: FpAbelianGroup,
    pub target: FpAbelianGroup,
    pub matrix: Vec<Vec<i64>>,
}

impl TryFrom<MapDoc> for GroupMap {
    type Error = AbGroupError;
    fn try_from(doc: MapDoc) -> Result<Self, Self::Error> {
        let cols = doc.source.rank();
        GroupMap::new(doc.source, doc.target, IntMatrix::from_rows(doc.matrix, cols)?)
    }
}

impl From<GroupMap> for MapDoc {
    fn from(m: GroupMap) -> Self {
        MapDoc { source: m.source, target: m.target, matrix: m.matrix.to_rows() }
    }
}

impl GroupMap {
    pub fn new(source: FpAbelianGroup, target: FpAbelianGroup, matrix: IntMatrix) -> Result<Self, AbGroupError> {
        // A zero-row matrix carries no column count; normalize it.
        let matrix = if matrix.nrows() == 0 { IntMatrix::zeros(0, source.rank()) } else { matrix };
        if matrix.nrows() != target.rank() || matrix.ncols() != source.rank() {
            return Err(AbGroupError::Shape {
                op: "map",
                left: (matrix.nrows(), matrix.ncols()),
                right: (target.rank(), source.rank()),
            });
        }
        let lattice = target.relation_lattice()?;
        for k in 0..source.relations().nrows() {
            let image = matrix.apply(source.relations().row(k))?;
            if !lattice.contains(&image)? {
                return Err(AbGroupError::NotWellDefined { relation: k });
            }
        }
        Ok(GroupMap { source, target, matrix })
    }

    pub fn identity(group: &FpAbelianGroup) -> Self {
        GroupMap { source: group.clone(), target: group.clone(), matrix: IntMatrix::identity(group.rank()) }
    }

    pub fn zero(source: &FpAbelianGroup, target: &FpAbelianGroup) -> Self {
        GroupMap {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.rank(), source.rank()),
        }
    }

    pub fn source(&self) -> &FpAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FpAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Result<Vec<i64>, AbGroupError> {
        self.matrix.apply(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupMap) -> Result<GroupMap, AbGroupError> {
        if inner.target != self.source {
            return Err(AbGroupError::MiddleMismatch);
        }
        Ok(GroupMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    /// Whether the map is zero as a homomorphism (every generator lands in the relations).
    pub fn is_zero(&self) -> Result<bool, AbGroupError> {
        let lattice = self.target.relation_lattice()?;
        for j in 0..self.matrix.ncols() {
            if !lattice.contains(&self.matrix.col(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Preimage in `Z^source.rank` of the target's relations: the lifted kernel.
    pub fn kernel_lattice(&self) -> Result<Lattice, AbGroupError> {
        let b = self.source.rank();
        let neg_rel_t = self.target.relations().transpose().neg()?;
        let system = self.matrix.hstack(&neg_rel_t)?;
        let kernel = integer_kernel(&system)?;
        let rows = kernel.to_rows().into_iter().map(|r| r[..b].to_vec()).collect();
        Lattice::from_generators(IntMatrix::from_rows(rows, b)?)
    }

    /// Image generators plus target relations: the lifted image in `Z^target.rank`.
    pub fn image_lattice(&self) -> Result<Lattice, AbGroupError> {
        let gens = self.matrix.transpose().vstack(self.target.relations())?;
        Lattice::from_generators(gens)
    }
}

/// Whether `A --f--> B --g--> C` is exact at `B`: `g∘f = 0` and `im f = ker g`.
///
/// ```
/// use pervchow::abgroup::{is_exact_at_middle, FpAbelianGroup, GroupMap, IntMatrix};
///
/// let z = FpAbelianGroup::free(1);
/// let z2 = FpAbelianGroup::cyclic_sum(&[2]);
/// let double = GroupMap::new(z.clone(), z.clone(), IntMatrix::diagonal(&[2])).unwrap();
/// let quotient = GroupMap::new(z.clone(), z2, IntMatrix::identity(1)).unwrap();
/// assert!(is_exact_at_middle(&double, &quotient).unwrap());
/// ```
pub fn is_exact_at_middle(f: &GroupMap, g: &GroupMap) -> Result<bool, AbGroupError> {
    if f.target != g.source {
        return Err(AbGroupError::MiddleMismatch);
    }
    if !g.compose(f)?.is_zero()? {
        return Ok(false);
    }
    f.image_lattice()?.same_as(&g.kernel_lattice()?)
}
