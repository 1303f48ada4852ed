//! Brute-force oracles shared by the integration tests. None of them call the
//! library's enumeration, canonical form, clique or compatibility code.
#![allow(dead_code)]

use latol_core::{BinaryRelation, Lattice};

pub type Order = Vec<Vec<bool>>;

fn is_lattice_order(leq: &Order) -> bool {
    let n = leq.len();
    for x in 0..n {
        for y in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
            let upper: Vec<usize> = (0..n).filter(|&z| leq[x][z] && leq[y][z]).collect();
            let has_meet = lower.iter().any(|&m| lower.iter().all(|&z| leq[z][m]));
            let has_join = upper.iter().any(|&j| upper.iter().all(|&z| leq[j][z]));
            if !has_meet || !has_join {
                return false;
            }
        }
    }
    true
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// True iff some bijection maps one order matrix onto the other.
pub fn orders_isomorphic(a: &Order, b: &Order) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let all: Vec<usize> = (0..n).collect();
    permutations(&all).iter().any(|p| (0..n).all(|i| (0..n).all(|j| a[i][j] == b[p[i]][p[j]])))
}

/// All `n`-element lattices up to isomorphism, as order matrices.
///
/// Every finite lattice has a labeling that extends its order, with the bottom
/// at 0 and the top at `n - 1`, so it suffices to scan strict orders on the
/// inner elements that respect index order, add the bounds, keep the lattices
/// and deduplicate by bijection search.
pub fn lattice_orders(n: usize) -> Vec<Order> {
    assert!(n >= 1);
    if n == 1 {
        return vec![vec![vec![true]]];
    }
    let inner: Vec<usize> = (1..n - 1).collect();
    let slots: Vec<(usize, usize)> =
        inner.iter().flat_map(|&i| inner.iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect();
    let mut classes: Vec<Order> = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
            row[n - 1] = true;
        }
        leq[0].fill(true);
        for (k, &(i, j)) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive =
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(leq[x][y] && leq[y][z]) || leq[x][z])));
        if !transitive || !is_lattice_order(&leq) {
            continue;
        }
        // inner elements may be permuted freely; bounds are fixed
        let known = classes.iter().any(|c| {
            permutations(&inner).iter().any(|p| {
                let map = |x: usize| if x == 0 || x == n - 1 { x } else { p[x - 1] };
                (0..n).all(|i| (0..n).all(|j| leq[i][j] == c[map(i)][map(j)]))
            })
        });
        if !known {
            classes.push(leq);
        }
    }
    classes
}

pub fn order_of(l: &Lattice) -> Order {
    l.elements().map(|x| l.elements().map(|y| l.leq(x, y)).collect()).collect()
}

pub fn lattice_from_order(leq: &Order) -> Lattice {
    let n = leq.len();
    let mut covers = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                covers.push((x, y));
            }
        }
    }
    Lattice::from_covers(n, &covers).expect("oracle produced a lattice")
}

/// Compatibility checked straight from the definition.
pub fn compatible(l: &Lattice, r: &[Vec<bool>]) -> bool {
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            if !r[a][b] {
                continue;
            }
            for c in 0..n {
                for d in 0..n {
                    if r[c][d] && (!r[l.meet(a, c)][l.meet(b, d)] || !r[l.join(a, c)][l.join(b, d)]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Maximal subsets `X` with `X × X ⊆ r`, by scanning every subset.
pub fn subset_blocks(r: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = r.len();
    let cliques: Vec<u32> = (1u32..(1 << n))
        .filter(|&m| (0..n).all(|x| m >> x & 1 == 0 || (0..n).all(|y| m >> y & 1 == 0 || r[x][y])))
        .collect();
    cliques
        .iter()
        .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|&x| m >> x & 1 == 1).collect())
        .collect()
}

/// Every 2-uniform tolerance on `l`, found by scanning all reflexive symmetric relations.
pub fn two_uniform_by_scan(l: &Lattice) -> Vec<BinaryRelation> {
    let n = l.len();
    assert!(n <= 6, "scan is exponential in n^2");
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut pairs = Vec::new();
        for (k, &(i, j)) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                r[i][j] = true;
                r[j][i] = true;
                pairs.push((i, j));
            }
        }
        if compatible(l, &r) && subset_blocks(&r).iter().all(|b| b.len() == 2) {
            out.push(BinaryRelation::from_pairs(n, &pairs).unwrap());
        }
    }
    out.sort_by_key(BinaryRelation::edges);
    out
}

/// Small deterministic catalog built from the oracle, for sizes `2..=max_n`.
pub fn oracle_catalog(max_n: usize) -> Vec<Lattice> {
    (2..=max_n).flat_map(|n| lattice_orders(n).iter().map(lattice_from_order).collect::<Vec<_>>()).collect()
}
