//! Finite lattices given by their cover relation.
//!
//! A [`Lattice`] is built from its Hasse diagram (the pairs `(lower, upper)` with
//! `lower ≺ upper`). Construction derives the full order and the meet and join
//! tables once and rejects anything that is not the transitive reduction of a
//! lattice order. After construction the value is immutable.

use crate::bits::{BitMatrix, BitSet};
use crate::error::{BoundKind, Error, Result};

pub type ElementId = usize;

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    cover_pairs: Vec<(ElementId, ElementId)>,
    cover: BitMatrix,
    leq: BitMatrix,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
    lower_covers: Vec<Vec<ElementId>>,
    upper_covers: Vec<Vec<ElementId>>,
    rank: Vec<usize>,
    depth: Vec<usize>,
    bottom: ElementId,
    top: ElementId,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice").field("n", &self.n).field("covers", &self.cover_pairs).finish()
    }
}

impl Lattice {
    pub fn from_covers(n: usize, covers: &[(ElementId, ElementId)]) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for &(lo, hi) in covers {
            for index in [lo, hi] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if lo == hi {
                return Err(Error::SelfCover(lo));
            }
            pairs.push((lo, hi));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut cover = BitMatrix::new(n);
        for &(lo, hi) in &pairs {
            cover.set(lo, hi, true);
        }
        let leq = cover.reflexive_transitive_closure();
        for i in 0..n {
            for j in i + 1..n {
                if leq.get(i, j) && leq.get(j, i) {
                    return Err(Error::NotAPoset(i, j));
                }
            }
        }
        for &(lo, hi) in &pairs {
            if let Some(via) = (0..n).find(|&k| k != lo && k != hi && leq.get(lo, k) && leq.get(k, hi)) {
                return Err(Error::NotTransitiveReduction { lower: lo, upper: hi, via });
            }
        }

        let geq = leq.transpose();
        let meet = bound_table(n, &geq, BoundKind::Meet)?;
        let join = bound_table(n, &leq, BoundKind::Join)?;

        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for &(lo, hi) in &pairs {
            upper_covers[lo].push(hi);
            lower_covers[hi].push(lo);
        }

        // Sorting by the size of the principal down-set gives a linear extension.
        let mut order: Vec<ElementId> = (0..n).collect();
        order.sort_by_key(|&x| geq.row(x).count());
        let mut rank = vec![0; n];
        for &x in &order {
            rank[x] = lower_covers[x].iter().map(|&y| rank[y] + 1).max().unwrap_or(0);
        }
        let mut depth = vec![0; n];
        for &x in order.iter().rev() {
            depth[x] = upper_covers[x].iter().map(|&y| depth[y] + 1).max().unwrap_or(0);
        }

        let bottom = order[0];
        let top = order[n - 1];
        Ok(Lattice {
            n,
            cover_pairs: pairs,
            cover,
            leq,
            meet,
            join,
            lower_covers,
            upper_covers,
            rank,
            depth,
            bottom,
            top,
        })
    }

    /// The `k`-element chain `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> Result<Lattice> {
        let covers: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Lattice::from_covers(k, &covers)
    }

    /// Direct product with componentwise order. Element `(x, y)` gets index
    /// `x * right.len() + y`; see [`Lattice::split_product_index`].
    pub fn product(left: &Lattice, right: &Lattice) -> Lattice {
        let m = right.n;
        let mut covers = Vec::new();
        for x in 0..left.n {
            for &(lo, hi) in &right.cover_pairs {
                covers.push((x * m + lo, x * m + hi));
            }
        }
        for &(lo, hi) in &left.cover_pairs {
            for y in 0..m {
                covers.push((lo * m + y, hi * m + y));
            }
        }
        Lattice::from_covers(left.n * m, &covers).expect("product of lattices is a lattice")
    }

    /// Inverse of the product indexing: returns `(left, right)` coordinates.
    pub fn split_product_index(id: ElementId, right_len: usize) -> (ElementId, ElementId) {
        (id / right_len, id % right_len)
    }

    /// Chains of the given lengths with their bottoms glued into one bottom and
    /// their tops glued into one top. Index 0 is the bottom, the last index the
    /// top, and the inner elements of each chain follow in order.
    pub fn glued_chain_sum(lengths: &[usize]) -> Result<Lattice> {
        if lengths.is_empty() {
            return Err(Error::EmptyGluing);
        }
        if let Some(&len) = lengths.iter().find(|&&len| len < 3) {
            return Err(Error::ChainTooShort(len));
        }
        let n = lengths.iter().map(|len| len - 2).sum::<usize>() + 2;
        let top = n - 1;
        let mut covers = Vec::new();
        let mut next = 1;
        for &len in lengths {
            let mut prev = 0;
            for _ in 0..len - 2 {
                covers.push((prev, next));
                prev = next;
                next += 1;
            }
            covers.push((prev, top));
        }
        Lattice::from_covers(n, &covers)
    }

    /// Order dual on the same element indices.
    pub fn dual(&self) -> Lattice {
        let mut cover_pairs: Vec<_> = self.cover_pairs.iter().map(|&(lo, hi)| (hi, lo)).collect();
        cover_pairs.sort_unstable();
        Lattice {
            n: self.n,
            cover_pairs,
            cover: self.cover.transpose(),
            leq: self.leq.transpose(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            lower_covers: self.upper_covers.clone(),
            upper_covers: self.lower_covers.clone(),
            rank: self.depth.clone(),
            depth: self.rank.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Relabels the lattice so that new element `k` is old element `order[k]`.
    pub fn relabel(&self, order: &[ElementId]) -> Lattice {
        assert_eq!(order.len(), self.n, "relabeling must be a permutation");
        let pos = inverse_permutation(order);
        let covers: Vec<_> = self.cover_pairs.iter().map(|&(lo, hi)| (pos[lo], pos[hi])).collect();
        Lattice::from_covers(self.n, &covers).expect("relabeling preserves the lattice axioms")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    #[inline]
    pub fn meet(&self, x: ElementId, y: ElementId) -> ElementId {
        self.meet[x * self.n + y]
    }

    #[inline]
    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        self.join[x * self.n + y]
    }

    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq.get(x, y)
    }

    #[inline]
    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq.get(x, y)
    }

    /// `x ≺ y`: `x < y` with nothing strictly between.
    #[inline]
    pub fn covers(&self, x: ElementId, y: ElementId) -> bool {
        self.cover.get(x, y)
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn cover_pairs(&self) -> &[(ElementId, ElementId)] {
        &self.cover_pairs
    }

    pub fn lower_covers(&self, x: ElementId) -> &[ElementId] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: ElementId) -> &[ElementId] {
        &self.upper_covers[x]
    }

    /// Length of the longest chain from the bottom up to `x`.
    pub fn rank(&self, x: ElementId) -> usize {
        self.rank[x]
    }

    /// Length of the longest chain from `x` up to the top.
    pub fn depth(&self, x: ElementId) -> usize {
        self.depth[x]
    }

    /// Length of the longest chain in the lattice.
    pub fn height(&self) -> usize {
        self.rank[self.top]
    }

    pub fn order_matrix(&self) -> &BitMatrix {
        &self.leq
    }

    /// Elements `z` with `x ≤ z ≤ y`.
    pub fn interval(&self, x: ElementId, y: ElementId) -> BitSet {
        let mut set = BitSet::new(self.n);
        for z in self.elements() {
            if self.leq(x, z) && self.leq(z, y) {
                set.insert(z);
            }
        }
        set
    }
}

pub(crate) fn inverse_permutation(order: &[ElementId]) -> Vec<ElementId> {
    let mut pos = vec![usize::MAX; order.len()];
    for (k, &old) in order.iter().enumerate() {
        assert!(old < order.len() && pos[old] == usize::MAX, "not a permutation");
        pos[old] = k;
    }
    pos
}

/// Greatest common element of `rel.row(x) ∩ rel.row(y)` for every pair, where
/// `rel.row(x)` lists the elements on the bounded side of `x`.
fn bound_table(n: usize, rel: &BitMatrix, kind: BoundKind) -> Result<Vec<ElementId>> {
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let common = rel.row(x).intersection(rel.row(y));
            let best = common.iter().find(|&m| common.is_subset(rel.row(m))).ok_or(Error::NotALattice {
                x,
                y,
                kind,
            })?;
            table[x * n + y] = best;
            table[y * n + x] = best;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Lattice {
        Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn two_element_chain() {
        let c2 = Lattice::from_covers(2, &[(0, 1)]).unwrap();
        assert_eq!(c2.meet(0, 1), 0);
        assert_eq!(c2.join(0, 1), 1);
        assert_eq!((c2.bottom(), c2.top()), (0, 1));
    }

    #[test]
    fn square_bounds() {
        let sq = square();
        assert_eq!(sq.meet(1, 2), 0);
        assert_eq!(sq.join(1, 2), 3);
        assert!(!sq.covers(0, 3));
        assert!(sq.covers(0, 1));
        assert!(sq.lt(0, 3));
        assert_eq!(sq.height(), 2);
    }

    #[test]
    fn chain_join_of_comparables() {
        let c3 = Lattice::chain(3).unwrap();
        assert_eq!(c3.join(0, 2), 2);
        assert_eq!(c3.cover_pairs(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_missing_join() {
        // 1 and 2 have no upper bound; the isolated 3 fails even earlier.
        let err = Lattice::from_covers(4, &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }), "{err}");
        let err = Lattice::from_covers(3, &[(0, 1), (0, 2)]).unwrap_err();
        assert_eq!(err, Error::NotALattice { x: 1, y: 2, kind: BoundKind::Join });
    }

    #[test]
    fn rejects_cycle_and_redundant_cover() {
        assert_eq!(Lattice::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err(), Error::NotAPoset(0, 1));
        assert_eq!(
            Lattice::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap_err(),
            Error::NotTransitiveReduction { lower: 0, upper: 2, via: 1 }
        );
        assert_eq!(Lattice::from_covers(2, &[(1, 1)]).unwrap_err(), Error::SelfCover(1));
        assert_eq!(
            Lattice::from_covers(2, &[(0, 2)]).unwrap_err(),
            Error::IndexOutOfRange { index: 2, n: 2 }
        );
        assert_eq!(Lattice::from_covers(0, &[]).unwrap_err(), Error::Empty);
    }

    #[test]
    fn rejects_two_minimal_elements() {
        // 0 and 1 both below 2: no meet of 0 and 1.
        let err = Lattice::from_covers(3, &[(0, 2), (1, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice { kind: BoundKind::Meet, .. }));
    }

    #[test]
    fn dual_is_involution_and_reverses_covers() {
        let sq = square();
        let d = sq.dual();
        assert_eq!(d.bottom(), 3);
        assert_eq!(d.top(), 0);
        assert_eq!(d.meet(1, 2), 3);
        for &(lo, hi) in sq.cover_pairs() {
            assert!(d.covers(hi, lo));
        }
        assert_eq!(d.dual(), sq);
        // dual(C3) is C3 read backwards
        let c3 = Lattice::chain(3).unwrap();
        assert_eq!(c3.dual().relabel(&[2, 1, 0]), c3);
    }

    #[test]
    fn product_of_two_chains_is_square() {
        let c2 = Lattice::chain(2).unwrap();
        assert_eq!(Lattice::product(&c2, &c2), square());
    }

    #[test]
    fn glued_three_chains_is_m3() {
        let m3 = Lattice::glued_chain_sum(&[3, 3, 3]).unwrap();
        assert_eq!(m3.len(), 5);
        assert_eq!(m3.upper_covers(0), &[1, 2, 3]);
        for a in 1..4 {
            assert_eq!(m3.upper_covers(a), &[4]);
            for b in 1..4 {
                if a != b {
                    assert_eq!(m3.meet(a, b), 0);
                    assert_eq!(m3.join(a, b), 4);
                }
            }
        }
        let k = Lattice::glued_chain_sum(&[3, 4, 5]).unwrap();
        assert_eq!(k.len(), 8);
        assert_eq!(k.height(), 4);
        assert_eq!(Lattice::glued_chain_sum(&[]).unwrap_err(), Error::EmptyGluing);
        assert_eq!(Lattice::glued_chain_sum(&[3, 2]).unwrap_err(), Error::ChainTooShort(2));
    }

    #[test]
    fn relabel_round_trip() {
        let sq = square();
        let r = sq.relabel(&[3, 1, 0, 2]);
        assert_eq!(r.bottom(), 2);
        assert_eq!(r.top(), 0);
        assert_eq!(r.relabel(&inverse_permutation(&[3, 1, 0, 2])), sq);
    }
}
