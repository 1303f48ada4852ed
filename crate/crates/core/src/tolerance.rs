//! Reflexive symmetric relations on a lattice: compatibility, blocks,
//! 2-uniformity, relational products and the search for 2-uniform tolerances.

use std::fmt;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{BoundKind, Error, Result};
use crate::lattice::{inverse_permutation, ElementId, Lattice};

/// Reflexive and symmetric relation on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryRelation {
    bits: BitMatrix,
}

impl BinaryRelation {
    /// The equality relation.
    pub fn identity(n: usize) -> Self {
        BinaryRelation { bits: BitMatrix::identity(n) }
    }

    /// Diagonal plus the given pairs in both directions.
    pub fn from_pairs(n: usize, pairs: &[(ElementId, ElementId)]) -> Result<Self> {
        let mut bits = BitMatrix::identity(n);
        for &(x, y) in pairs {
            for index in [x, y] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            bits.set(x, y, true);
            bits.set(y, x, true);
        }
        Ok(BinaryRelation { bits })
    }

    /// Accepts a matrix only if it is already reflexive and symmetric.
    pub fn from_matrix(bits: BitMatrix) -> Result<Self> {
        let n = bits.size();
        for x in 0..n {
            if !bits.get(x, x) {
                return Err(Error::NotReflexive(x));
            }
            for y in bits.row(x).iter() {
                if !bits.get(y, x) {
                    return Err(Error::NotSymmetric(x, y));
                }
            }
        }
        Ok(BinaryRelation { bits })
    }

    /// Kernel of a map: `x` and `y` are related iff `f(x) == f(y)`.
    pub fn kernel<K: PartialEq>(n: usize, f: impl Fn(ElementId) -> K) -> Self {
        let images: Vec<K> = (0..n).map(f).collect();
        let mut bits = BitMatrix::new(n);
        for x in 0..n {
            for y in 0..n {
                bits.set(x, y, images[x] == images[y]);
            }
        }
        BinaryRelation { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.size()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.size() == 0
    }

    #[inline]
    pub fn contains(&self, x: ElementId, y: ElementId) -> bool {
        self.bits.get(x, y)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn related(&self, x: ElementId) -> &BitSet {
        self.bits.row(x)
    }

    /// Off-diagonal pairs `(x, y)` with `x < y`, sorted.
    pub fn edges(&self) -> Vec<(ElementId, ElementId)> {
        self.bits.pairs().filter(|&(x, y)| x < y).collect()
    }

    /// Transport along a relabeling where new element `k` is old `order[k]`.
    pub fn relabel(&self, order: &[ElementId]) -> BinaryRelation {
        let pos = inverse_permutation(order);
        let mut bits = BitMatrix::new(self.len());
        for (x, y) in self.bits.pairs() {
            bits.set(pos[x], pos[y], true);
        }
        BinaryRelation { bits }
    }

    /// `self ∘ other`: `(x, z)` whenever `(x, y) ∈ self` and `(y, z) ∈ other`.
    pub fn compose(&self, other: &BinaryRelation) -> Result<RelationImage> {
        check_len(self.len(), other.len())?;
        Ok(RelationImage { bits: self.bits.compose(&other.bits) })
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryRelation(n={}, {:?})", self.len(), self.edges())
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|(x, y)| format!("{x}-{y}")).collect();
        if edges.is_empty() {
            f.write_str("Δ")
        } else {
            f.write_str(&edges.join(" "))
        }
    }
}

/// Arbitrary relation, as produced by relational products.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelationImage {
    bits: BitMatrix,
}

impl RelationImage {
    pub fn len(&self) -> usize {
        self.bits.size()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.size() == 0
    }

    pub fn contains(&self, x: ElementId, y: ElementId) -> bool {
        self.bits.get(x, y)
    }

    pub fn transpose(&self) -> RelationImage {
        RelationImage { bits: self.bits.transpose() }
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.bits.pairs()
    }

    /// Pairs of `self` missing from `other`, sorted.
    pub fn difference(&self, other: &RelationImage) -> Vec<(ElementId, ElementId)> {
        self.pairs().filter(|&(x, y)| !other.contains(x, y)).collect()
    }

    pub fn contains_relation(&self, rel: &BinaryRelation) -> bool {
        rel.matrix().pairs().all(|(x, y)| self.contains(x, y))
    }
}

impl fmt::Debug for RelationImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelationImage(n={})\n{:?}", self.len(), self.bits)
    }
}

/// Two related pairs whose meet or join lands outside the relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompatibilityFailure {
    pub first: (ElementId, ElementId),
    pub second: (ElementId, ElementId),
    pub missing: (ElementId, ElementId),
    pub kind: BoundKind,
}

impl fmt::Display for CompatibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) and ({},{}) force ({},{}) under {}, which is absent",
            self.first.0,
            self.first.1,
            self.second.0,
            self.second.1,
            self.missing.0,
            self.missing.1,
            self.kind
        )
    }
}

/// A maximal set `X` with `X × X` inside a tolerance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    elements: Vec<ElementId>,
}

impl Block {
    pub fn new(mut elements: Vec<ElementId>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Block { elements }
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Closed under meet and join, and under every interval between members.
    pub fn is_convex_sublattice(&self, lattice: &Lattice) -> bool {
        self.elements.iter().all(|&x| {
            self.elements.iter().all(|&y| {
                self.contains(lattice.meet(x, y))
                    && self.contains(lattice.join(x, y))
                    && (!lattice.leq(x, y) || lattice.interval(x, y).iter().all(|z| self.contains(z)))
            })
        })
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, found })
    }
}

/// First pair of related pairs violating compatibility, scanning every pair of
/// related pairs (diagonal included) in index order.
pub fn compatibility_failure(
    lattice: &Lattice,
    rel: &BinaryRelation,
) -> Result<Option<CompatibilityFailure>> {
    check_len(lattice.len(), rel.len())?;
    let pairs: Vec<(ElementId, ElementId)> = rel.matrix().pairs().collect();
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            let lo = (lattice.meet(a, c), lattice.meet(b, d));
            let hi = (lattice.join(a, c), lattice.join(b, d));
            for (missing, kind) in [(lo, BoundKind::Meet), (hi, BoundKind::Join)] {
                if !rel.contains(missing.0, missing.1) {
                    return Ok(Some(CompatibilityFailure { first: (a, b), second: (c, d), missing, kind }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_tolerance(lattice: &Lattice, rel: &BinaryRelation) -> Result<bool> {
    Ok(compatibility_failure(lattice, rel)?.is_none())
}

/// A transitive tolerance.
pub fn is_congruence(lattice: &Lattice, rel: &BinaryRelation) -> Result<bool> {
    if !is_tolerance(lattice, rel)? {
        return Ok(false);
    }
    let square = rel.compose(rel)?;
    Ok(square.matrix() == rel.matrix())
}

fn require_tolerance(lattice: &Lattice, rel: &BinaryRelation) -> Result<()> {
    match compatibility_failure(lattice, rel)? {
        Some(failure) => Err(Error::NotATolerance(failure)),
        None => Ok(()),
    }
}

/// All blocks of a tolerance, i.e. the maximal cliques of the graph `(L; T)`, sorted.
pub fn blocks(lattice: &Lattice, rel: &BinaryRelation) -> Result<Vec<Block>> {
    require_tolerance(lattice, rel)?;
    Ok(maximal_cliques(rel))
}

/// Maximal cliques of a reflexive symmetric relation (Bron–Kerbosch with pivoting).
pub fn maximal_cliques(rel: &BinaryRelation) -> Vec<Block> {
    let n = rel.len();
    let neighbours: Vec<BitSet> = (0..n)
        .map(|x| {
            let mut row = rel.related(x).clone();
            row.remove(x);
            row
        })
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(&neighbours, Vec::new(), BitSet::full(n), BitSet::new(n), &mut out);
    let mut blocks: Vec<Block> = out.into_iter().map(Block::new).collect();
    blocks.sort();
    blocks
}

fn bron_kerbosch(
    neighbours: &[BitSet],
    clique: Vec<ElementId>,
    mut candidates: BitSet,
    mut excluded: BitSet,
    out: &mut Vec<Vec<ElementId>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(clique);
        }
        return;
    }
    // pivot with the most neighbours among the candidates
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&p| neighbours[p].intersection(&candidates).count())
        .expect("candidates nonempty");
    let todo: Vec<ElementId> = candidates.difference(&neighbours[pivot]).iter().collect();
    for v in todo {
        let mut next = clique.clone();
        next.push(v);
        bron_kerbosch(
            neighbours,
            next,
            candidates.intersection(&neighbours[v]),
            excluded.intersection(&neighbours[v]),
            out,
        );
        candidates.remove(v);
        excluded.insert(v);
    }
}

/// Every block has exactly two elements.
pub fn is_two_uniform(lattice: &Lattice, rel: &BinaryRelation) -> Result<bool> {
    Ok(blocks(lattice, rel)?.iter().all(|b| b.len() == 2))
}

/// Errors unless `rel` is a 2-uniform tolerance on `lattice`.
pub fn require_two_uniform(lattice: &Lattice, rel: &BinaryRelation) -> Result<()> {
    match blocks(lattice, rel)?.into_iter().find(|b| b.len() != 2) {
        Some(bad) => Err(Error::NotTwoUniform(bad.elements().to_vec())),
        None => Ok(()),
    }
}

/// Blocks of a relation already known to be a 2-uniform tolerance: each
/// off-diagonal pair is a block on its own.
pub fn two_uniform_blocks(rel: &BinaryRelation) -> Vec<Block> {
    rel.edges().into_iter().map(|(x, y)| Block::new(vec![x, y])).collect()
}

pub fn permutes(t: &BinaryRelation, s: &BinaryRelation) -> Result<bool> {
    Ok(t.compose(s)? == s.compose(t)?)
}

/// All 2-uniform tolerances on `lattice`, sorted by edge list.
///
/// Related distinct elements of a 2-uniform tolerance always form a cover
/// pair, each element has at most one lower and one upper partner, and no
/// element is left alone. The search runs over cover-edge sets with those
/// shapes and keeps the ones that pass the full tolerance and block checks.
pub fn enumerate_two_uniform(lattice: &Lattice) -> Vec<BinaryRelation> {
    let edges = lattice.cover_pairs();
    let n = lattice.len();
    let mut last_edge = vec![None; n];
    for (i, &(lo, hi)) in edges.iter().enumerate() {
        last_edge[lo] = Some(i);
        last_edge[hi] = Some(i);
    }
    if last_edge.iter().any(Option::is_none) {
        return Vec::new();
    }
    let mut state = EdgeSearch {
        edges,
        last_edge: last_edge.into_iter().map(|e| e.expect("checked")).collect(),
        has_lower: vec![false; n],
        has_upper: vec![false; n],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    state.run(0);
    let mut out: Vec<BinaryRelation> = state
        .found
        .into_iter()
        .filter_map(|pairs| BinaryRelation::from_pairs(n, &pairs).ok())
        .filter(|rel| is_two_uniform(lattice, rel).unwrap_or(false))
        .collect();
    out.sort_by_key(BinaryRelation::edges);
    out
}

struct EdgeSearch<'a> {
    edges: &'a [(ElementId, ElementId)],
    last_edge: Vec<usize>,
    has_lower: Vec<bool>,
    has_upper: Vec<bool>,
    chosen: Vec<(ElementId, ElementId)>,
    found: Vec<Vec<(ElementId, ElementId)>>,
}

impl EdgeSearch<'_> {
    fn covered(&self, x: ElementId) -> bool {
        self.has_lower[x] || self.has_upper[x]
    }

    fn run(&mut self, i: usize) {
        if i == self.edges.len() {
            self.found.push(self.chosen.clone());
            return;
        }
        let (lo, hi) = self.edges[i];
        let settled = |s: &Self, x: ElementId| s.last_edge[x] != i || s.covered(x);

        if !self.has_upper[lo] && !self.has_lower[hi] {
            self.has_upper[lo] = true;
            self.has_lower[hi] = true;
            self.chosen.push((lo, hi));
            self.run(i + 1);
            self.chosen.pop();
            self.has_upper[lo] = false;
            self.has_lower[hi] = false;
        }
        if settled(self, lo) && settled(self, hi) {
            self.run(i + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Lattice {
        Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BinaryRelation {
        BinaryRelation::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn projection_kernel_is_tolerance_and_congruence() {
        let sq = square();
        let alpha = rel(4, &[(0, 1), (2, 3)]);
        assert!(is_tolerance(&sq, &alpha).unwrap());
        assert!(is_congruence(&sq, &alpha).unwrap());
        assert_eq!(blocks(&sq, &alpha).unwrap(), vec![Block::new(vec![0, 1]), Block::new(vec![2, 3])]);
    }

    #[test]
    fn diagonal_pair_of_atoms_is_not_compatible() {
        let sq = square();
        let bad = rel(4, &[(1, 2)]);
        assert!(!is_tolerance(&sq, &bad).unwrap());
        let failure = compatibility_failure(&sq, &bad).unwrap().unwrap();
        assert!(!bad.contains(failure.missing.0, failure.missing.1));
        assert!(matches!(blocks(&sq, &bad), Err(Error::NotATolerance(_))));
    }

    #[test]
    fn identity_is_a_congruence_with_singleton_blocks() {
        let c2 = Lattice::chain(2).unwrap();
        let id = BinaryRelation::identity(2);
        assert!(is_tolerance(&c2, &id).unwrap());
        assert!(is_congruence(&c2, &id).unwrap());
        assert_eq!(blocks(&c2, &id).unwrap(), vec![Block::new(vec![0]), Block::new(vec![1])]);
        assert!(!is_two_uniform(&c2, &id).unwrap());
    }

    #[test]
    fn path_tolerance_on_c3() {
        let c3 = Lattice::chain(3).unwrap();
        let t = rel(3, &[(0, 1), (1, 2)]);
        assert!(is_tolerance(&c3, &t).unwrap());
        assert!(!is_congruence(&c3, &t).unwrap());
        assert_eq!(blocks(&c3, &t).unwrap(), vec![Block::new(vec![0, 1]), Block::new(vec![1, 2])]);
        assert!(is_two_uniform(&c3, &t).unwrap());
        assert_eq!(two_uniform_blocks(&t), blocks(&c3, &t).unwrap());
    }

    #[test]
    fn lonely_elements_break_two_uniformity() {
        let c4 = Lattice::chain(4).unwrap();
        let t = rel(4, &[(0, 1)]);
        assert!(is_tolerance(&c4, &t).unwrap());
        assert!(!is_two_uniform(&c4, &t).unwrap());
        assert_eq!(require_two_uniform(&c4, &t).unwrap_err(), Error::NotTwoUniform(vec![2]));
    }

    #[test]
    fn products() {
        let sq = square();
        let alpha = rel(4, &[(0, 1), (2, 3)]);
        let beta = rel(4, &[(0, 2), (1, 3)]);
        let ab = alpha.compose(&beta).unwrap();
        assert_eq!(ab.matrix().count(), 16);
        assert!(permutes(&alpha, &beta).unwrap());
        assert_eq!(alpha.compose(&BinaryRelation::identity(4)).unwrap().matrix(), alpha.matrix());
        let _ = sq;

        let t = rel(4, &[(0, 1), (2, 3)]);
        let s = rel(4, &[(0, 1), (1, 2), (2, 3)]);
        let ts = t.compose(&s).unwrap();
        let st = s.compose(&t).unwrap();
        assert!(ts.contains(0, 2));
        assert!(!st.contains(0, 2));
        assert!(!permutes(&t, &s).unwrap());
        assert!(permutes(&s, &s).unwrap());
        assert_eq!(
            t.compose(&BinaryRelation::identity(3)).unwrap_err(),
            Error::SizeMismatch { expected: 4, found: 3 }
        );
    }

    #[test]
    fn enumerate_small() {
        let c2 = Lattice::chain(2).unwrap();
        assert_eq!(enumerate_two_uniform(&c2), vec![rel(2, &[(0, 1)])]);
        let c4 = Lattice::chain(4).unwrap();
        let found: Vec<_> = enumerate_two_uniform(&c4).iter().map(BinaryRelation::edges).collect();
        assert_eq!(found, vec![vec![(0, 1), (1, 2), (2, 3)], vec![(0, 1), (2, 3)]]);
        assert!(enumerate_two_uniform(&Lattice::chain(1).unwrap()).is_empty());
    }

    #[test]
    fn kernel_of_product_projection() {
        let c2 = Lattice::chain(2).unwrap();
        let sq = Lattice::product(&c2, &c2);
        let first = BinaryRelation::kernel(4, |x| Lattice::split_product_index(x, 2).0);
        assert_eq!(first, rel(4, &[(0, 1), (2, 3)]));
        assert!(is_congruence(&sq, &first).unwrap());
    }
}
