//! Canonical forms and isomorphism tests for small lattices.
//!
//! Elements are first split into classes by an isomorphism-invariant colouring
//! (rank and depth, refined by the colours of lower and upper covers). The
//! canonical form is the lexicographically least order-matrix encoding over all
//! labelings that list the colour classes in sorted order. Only permutations
//! inside a class are searched, with prefix pruning, which is fast at the sizes
//! the enumeration works with.

use std::cmp::Ordering;

use crate::lattice::{ElementId, Lattice};

/// Canonical byte string: equal for two lattices iff they are isomorphic.
pub fn canonical_form(lattice: &Lattice) -> Vec<u8> {
    canonical_labeling(lattice).0
}

pub fn canonical_hex(lattice: &Lattice) -> String {
    hex::encode(canonical_form(lattice))
}

/// The canonical representative: the lattice relabeled by its canonical labeling.
/// Its bottom is element 0 and its top is the last element.
pub fn canonical_lattice(lattice: &Lattice) -> Lattice {
    lattice.relabel(&canonical_labeling(lattice).1)
}

/// Returns the canonical form and the labeling (new index -> old element) that realises it.
pub fn canonical_labeling(lattice: &Lattice) -> (Vec<u8>, Vec<ElementId>) {
    let n = lattice.len();
    let colors = refined_colors(lattice);
    let mut sorted: Vec<ElementId> = lattice.elements().collect();
    sorted.sort_by_key(|&x| (colors[x], x));
    let slot_color: Vec<usize> = sorted.iter().map(|&x| colors[x]).collect();

    let mut search = Search {
        lattice,
        colors: &colors,
        slot_color: &slot_color,
        used: vec![false; n],
        order: Vec::with_capacity(n),
        bits: Vec::with_capacity(n * n),
        best_bits: None,
        best_order: Vec::new(),
    };
    search.run(Ordering::Less);

    let bits = search.best_bits.expect("at least one labeling exists");
    let mut form = Vec::with_capacity(4 + bits.len() / 8 + 1);
    form.extend_from_slice(&(n as u32).to_be_bytes());
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &bit) in chunk.iter().enumerate() {
            if bit {
                byte |= 0x80 >> i;
            }
        }
        form.push(byte);
    }
    (form, search.best_order)
}

struct Search<'a> {
    lattice: &'a Lattice,
    colors: &'a [usize],
    slot_color: &'a [usize],
    used: Vec<bool>,
    order: Vec<ElementId>,
    bits: Vec<bool>,
    best_bits: Option<Vec<bool>>,
    best_order: Vec<ElementId>,
}

impl Search<'_> {
    /// `state` compares the current prefix with the same prefix of the best
    /// encoding. Returns true if the best encoding was replaced in this subtree.
    fn run(&mut self, mut state: Ordering) -> bool {
        let k = self.order.len();
        if k == self.lattice.len() {
            if state == Ordering::Less {
                self.best_bits = Some(self.bits.clone());
                self.best_order = self.order.clone();
                return true;
            }
            return false;
        }
        let mut improved = false;
        for x in self.lattice.elements() {
            if self.used[x] || self.colors[x] != self.slot_color[k] {
                continue;
            }
            let start = self.bits.len();
            for &y in &self.order {
                self.bits.push(self.lattice.leq(y, x));
                self.bits.push(self.lattice.leq(x, y));
            }
            let next = match (&self.best_bits, state) {
                (Some(best), Ordering::Equal) => self.bits[start..].cmp(&best[start..self.bits.len()]),
                _ => state,
            };
            if next != Ordering::Greater {
                self.used[x] = true;
                self.order.push(x);
                if self.run(next) {
                    improved = true;
                    // The new best extends the current prefix.
                    state = Ordering::Equal;
                }
                self.order.pop();
                self.used[x] = false;
            }
            self.bits.truncate(start);
        }
        improved
    }
}

/// Colour refinement seeded with `(rank, depth)`; colours are dense and their
/// numeric order depends only on the isomorphism type.
fn refined_colors(lattice: &Lattice) -> Vec<usize> {
    let seed: Vec<(usize, usize)> = lattice.elements().map(|x| (lattice.rank(x), lattice.depth(x))).collect();
    let mut colors = dense_ranks(&seed);
    loop {
        let signatures: Vec<(usize, Vec<usize>, Vec<usize>)> = lattice
            .elements()
            .map(|x| {
                let mut down: Vec<usize> = lattice.lower_covers(x).iter().map(|&y| colors[y]).collect();
                let mut up: Vec<usize> = lattice.upper_covers(x).iter().map(|&y| colors[y]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (colors[x], down, up)
            })
            .collect();
        let refined = dense_ranks(&signatures);
        let before = colors.iter().max().copied().unwrap_or(0);
        let after = refined.iter().max().copied().unwrap_or(0);
        colors = refined;
        if after == before {
            return colors;
        }
    }
}

fn dense_ranks<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter().map(|k| distinct.binary_search(k).expect("key present")).collect()
}

/// Decides isomorphism by backtracking over order-preserving bijections,
/// independently of the canonical form.
pub fn is_isomorphic(a: &Lattice, b: &Lattice) -> bool {
    if a.len() != b.len() || a.cover_pairs().len() != b.cover_pairs().len() {
        return false;
    }
    let profile =
        |l: &Lattice, x: ElementId| (l.rank(x), l.depth(x), l.lower_covers(x).len(), l.upper_covers(x).len());
    let mut pa: Vec<_> = a.elements().map(|x| profile(a, x)).collect();
    let mut pb: Vec<_> = b.elements().map(|x| profile(b, x)).collect();
    let order: Vec<ElementId> = {
        let mut o: Vec<_> = a.elements().collect();
        o.sort_by_key(|&x| (a.rank(x), x));
        o
    };
    let ta = pa.clone();
    let tb = pb.clone();
    pa.sort_unstable();
    pb.sort_unstable();
    if pa != pb {
        return false;
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        a: &Lattice,
        b: &Lattice,
        order: &[ElementId],
        ta: &[(usize, usize, usize, usize)],
        tb: &[(usize, usize, usize, usize)],
        image: &mut Vec<Option<ElementId>>,
        taken: &mut Vec<bool>,
        k: usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in b.elements() {
            if taken[y] || ta[x] != tb[y] {
                continue;
            }
            let consistent = order[..k].iter().all(|&p| {
                let q = image[p].expect("mapped");
                a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
            });
            if !consistent {
                continue;
            }
            image[x] = Some(y);
            taken[y] = true;
            if extend(a, b, order, ta, tb, image, taken, k + 1) {
                return true;
            }
            image[x] = None;
            taken[y] = false;
        }
        false
    }

    let mut image = vec![None; a.len()];
    let mut taken = vec![false; b.len()];
    extend(a, b, &order, &ta, &tb, &mut image, &mut taken, 0)
}
