//! Exhaustive enumeration of finite lattices up to isomorphism.
//!
//! Removing a coatom from a lattice with at least three elements leaves a
//! lattice, so every `n`-element lattice arises from an `(n-1)`-element one by
//! inserting a new coatom `c` whose lower covers form a nonempty antichain `A`
//! of the old lattice minus its top. Each level is generated from the previous
//! one this way, validated, and deduplicated by canonical form.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::canonical_labeling;
use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice};

pub const DEFAULT_CEILING: usize = 8;

/// One representative per isomorphism class of `n`-element lattices, sorted by
/// canonical form. Representatives are canonically labeled.
pub fn enumerate_lattices(n: usize) -> Result<Vec<Lattice>> {
    enumerate_lattices_with_ceiling(n, DEFAULT_CEILING)
}

pub fn enumerate_lattices_with_ceiling(n: usize, ceiling: usize) -> Result<Vec<Lattice>> {
    let mut levels = catalog_with_ceiling(n, ceiling)?;
    Ok(levels.pop().unwrap_or_default())
}

/// All levels `1..=max_n`; entry `k - 1` holds the `k`-element lattices.
pub fn catalog(max_n: usize) -> Result<Vec<Vec<Lattice>>> {
    catalog_with_ceiling(max_n, DEFAULT_CEILING)
}

pub fn catalog_with_ceiling(max_n: usize, ceiling: usize) -> Result<Vec<Vec<Lattice>>> {
    if max_n == 0 || max_n > ceiling {
        return Err(Error::EnumerationRange { n: max_n, ceiling });
    }
    let mut levels = vec![vec![Lattice::chain(1)?]];
    if max_n >= 2 {
        levels.push(vec![Lattice::chain(2)?]);
    }
    while levels.len() < max_n {
        let next = extend_level(levels.last().expect("nonempty"));
        levels.push(next);
    }
    Ok(levels)
}

fn extend_level(level: &[Lattice]) -> Vec<Lattice> {
    let candidates: Vec<(Vec<u8>, Lattice)> = level
        .par_iter()
        .flat_map_iter(|base| {
            coatom_extensions(base).into_iter().map(|l| {
                let (form, labeling) = canonical_labeling(&l);
                (form, l.relabel(&labeling))
            })
        })
        .collect();
    let mut classes = BTreeMap::new();
    for (form, lattice) in candidates {
        classes.entry(form).or_insert(lattice);
    }
    classes.into_values().collect()
}

fn coatom_extensions(base: &Lattice) -> Vec<Lattice> {
    let n = base.len();
    let top = base.top();
    let below_top: Vec<ElementId> = base.elements().filter(|&x| x != top).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1 << below_top.len()) {
        let chosen: Vec<ElementId> =
            below_top.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        let antichain = chosen.iter().all(|&x| chosen.iter().all(|&y| x == y || !base.leq(x, y)));
        if !antichain {
            continue;
        }
        let coatom = n;
        let mut covers: Vec<(ElementId, ElementId)> = base
            .cover_pairs()
            .iter()
            .copied()
            .filter(|&(lo, hi)| !(hi == top && chosen.contains(&lo)))
            .collect();
        covers.extend(chosen.iter().map(|&a| (a, coatom)));
        covers.push((coatom, top));
        if let Ok(l) = Lattice::from_covers(n + 1, &covers) {
            out.push(l);
        }
    }
    out
}
