mod common;

use latol_core::canon::{canonical_form, canonical_hex, is_isomorphic};
use latol_core::enumerate::{catalog, enumerate_lattices};
use latol_core::format::{parse_lattice, write_lattice};
use latol_core::Lattice;
use proptest::prelude::*;

fn catalog_up_to(max_n: usize) -> Vec<Lattice> {
    catalog(max_n).unwrap().into_iter().flatten().collect()
}

#[test]
fn lattice_laws_hold_on_every_catalog_lattice() {
    for l in catalog_up_to(6) {
        for x in l.elements() {
            assert_eq!(l.meet(x, x), x);
            assert_eq!(l.join(x, x), x);
            assert!(l.leq(l.bottom(), x) && l.leq(x, l.top()));
            for y in l.elements() {
                assert_eq!(l.meet(x, y), l.meet(y, x));
                assert_eq!(l.join(x, y), l.join(y, x));
                assert_eq!(l.meet(x, l.join(x, y)), x, "absorption");
                assert_eq!(l.join(x, l.meet(x, y)), x, "absorption");
                assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                for z in l.elements() {
                    assert_eq!(l.meet(x, l.meet(y, z)), l.meet(l.meet(x, y), z));
                    assert_eq!(l.join(x, l.join(y, z)), l.join(l.join(x, y), z));
                    assert!(!(l.leq(x, y) && l.leq(y, z)) || l.leq(x, z));
                }
            }
        }
    }
}

#[test]
fn covers_are_the_transitive_reduction() {
    for l in catalog_up_to(6) {
        for x in l.elements() {
            for y in l.elements() {
                let reduced = l.lt(x, y) && !l.elements().any(|z| l.lt(x, z) && l.lt(z, y));
                assert_eq!(l.covers(x, y), reduced);
                assert_eq!(l.cover_pairs().contains(&(x, y)), reduced);
            }
        }
    }
}

#[test]
fn dual_is_an_involution_reversing_covers() {
    for l in catalog_up_to(6) {
        let d = l.dual();
        assert_eq!(d.dual(), l);
        for x in l.elements() {
            for y in l.elements() {
                assert_eq!(l.covers(x, y), d.covers(y, x));
                assert_eq!(l.meet(x, y), d.join(x, y));
            }
        }
    }
}

#[test]
fn product_operations_are_componentwise() {
    let k = Lattice::glued_chain_sum(&[3, 4]).unwrap();
    let m3 = Lattice::glued_chain_sum(&[3, 3, 3]).unwrap();
    let p = Lattice::product(&k, &m3);
    assert_eq!(p.len(), k.len() * m3.len());
    let w = m3.len();
    for x in p.elements() {
        for y in p.elements() {
            let (x1, x2) = Lattice::split_product_index(x, w);
            let (y1, y2) = Lattice::split_product_index(y, w);
            assert_eq!(Lattice::split_product_index(p.meet(x, y), w), (k.meet(x1, y1), m3.meet(x2, y2)));
            assert_eq!(Lattice::split_product_index(p.join(x, y), w), (k.join(x1, y1), m3.join(x2, y2)));
        }
    }
}

#[test]
fn enumeration_matches_labeled_poset_oracle() {
    for n in 1..=6 {
        let ours = enumerate_lattices(n).unwrap();
        let oracle = common::lattice_orders(n);
        assert_eq!(ours.len(), oracle.len(), "n={n}");
        // each oracle class is hit by exactly one representative
        for leq in &oracle {
            let hits = ours.iter().filter(|l| common::orders_isomorphic(&common::order_of(l), leq)).count();
            assert_eq!(hits, 1, "n={n}");
        }
    }
}

#[test]
fn canonical_form_agrees_with_isomorphism_search() {
    let all = catalog_up_to(6);
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let same_form = canonical_form(a) == canonical_form(b);
            assert_eq!(same_form, is_isomorphic(a, b));
            assert_eq!(same_form, i == j);
        }
    }
    for a in catalog_up_to(5) {
        for b in catalog_up_to(5) {
            assert_eq!(
                is_isomorphic(&a, &b),
                common::orders_isomorphic(&common::order_of(&a), &common::order_of(&b))
            );
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let a: Vec<String> = enumerate_lattices(6).unwrap().iter().map(canonical_hex).collect();
    let b: Vec<String> = enumerate_lattices(6).unwrap().iter().map(canonical_hex).collect();
    assert_eq!(a, b);
    let mut sorted = a.clone();
    sorted.sort();
    assert_eq!(a, sorted);
}

fn relabeled_catalog_lattice() -> impl Strategy<Value = (Lattice, Lattice)> {
    let all = catalog_up_to(6);
    (0..all.len()).prop_flat_map(move |i| {
        let l = all[i].clone();
        let order: Vec<usize> = l.elements().collect();
        Just(order).prop_shuffle().prop_map(move |order| (l.clone(), l.relabel(&order)))
    })
}

proptest! {
    #[test]
    fn relabeling_preserves_canonical_form((l, r) in relabeled_catalog_lattice()) {
        prop_assert_eq!(canonical_form(&l), canonical_form(&r));
        prop_assert!(is_isomorphic(&l, &r));
    }

    #[test]
    fn file_round_trip_is_index_identical((_l, r) in relabeled_catalog_lattice()) {
        prop_assert_eq!(parse_lattice(&write_lattice(&r)).unwrap(), r);
    }
}
