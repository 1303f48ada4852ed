//! Constructive permutability witnesses for amicable 2-uniform tolerances.
//!
//! Given `(a, b) ∈ T∘S` (so `(a, u) ∈ T` and `(u, b) ∈ S` for some `u`), the
//! construction produces `d` with `(a, d) ∈ S` and `(d, b) ∈ T`, i.e. a proof
//! that `(a, b) ∈ S∘T`:
//!
//! * `(a, b) ∈ T ∪ S`: `d = a` or `d = b`.
//! * `a ≺ u ≻ b`: `d = a ∧ b`, which is the lower `S`-neighbour of `a` and the
//!   lower `T`-neighbour of `b`. Dually `a ≻ u ≺ b` gives `d = a ∨ b`.
//! * `a ≺ u ≺ b`: climb `x0 = a, x1 = u, x2 = b, …`, stepping from `x_i` to its
//!   upper `T`-neighbour for even `i` and its upper `S`-neighbour for odd `i`,
//!   until the step is undefined. The last element `x_n` is a two-fold top,
//!   `x_{n-2}` is then a two-fold bottom, and (A2) carries that down to `a`.
//!   If `a` is a split bottom, `d` is its upper `S`-neighbour and `u ∨ d = b`;
//!   if adherent, `d = u`.
//! * `a ≻ u ≻ b`: the climb in the dual lattice.
//!
//! Every intermediate claim is checked as the construction runs. Steps that
//! rely on amicability report [`Error::NotAmicable`]; the others report
//! [`Error::ProofStep`].

use std::collections::BTreeSet;
use std::fmt;

use crate::amicability::{combine_roles, ClassifiedTolerance, FoldKind, TwoFoldRole};
use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::tolerance::BinaryRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessCase {
    /// `(a, b)` already in `T ∪ S`.
    Trivial,
    /// `a ≺ u ≻ b`.
    Meet,
    /// `a ≻ u ≺ b`.
    Join,
    /// `a ≺ u ≺ b`.
    Climb,
    /// `a ≻ u ≻ b`, handled as a climb in the dual lattice.
    DualClimb,
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessCase::Trivial => "trivial",
            WitnessCase::Meet => "meet",
            WitnessCase::Join => "join",
            WitnessCase::Climb => "climb",
            WitnessCase::DualClimb => "dual-climb",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTrace {
    pub a: ElementId,
    pub b: ElementId,
    pub u: ElementId,
    pub case: WitnessCase,
    /// `x0 … xn` for the climb cases, empty otherwise.
    pub chain: Vec<ElementId>,
    /// Split/adherent kind of the two-fold top `xn`.
    pub end_kind: Option<FoldKind>,
    /// Split/adherent kind of the two-fold bottom `a`.
    pub start_kind: Option<FoldKind>,
    pub d: ElementId,
}

impl WitnessTrace {
    /// Index of the last chain element.
    pub fn n(&self) -> Option<usize> {
        self.chain.len().checked_sub(1)
    }
}

impl fmt::Display for WitnessTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b={} u={} case={}", self.a, self.b, self.u, self.case)?;
        if !self.chain.is_empty() {
            let chain: Vec<String> = self.chain.iter().map(ToString::to_string).collect();
            write!(f, " chain={}", chain.join(","))?;
        }
        if let Some(k) = self.end_kind {
            write!(f, " end={k}")?;
        }
        if let Some(k) = self.start_kind {
            write!(f, " start={k}")?;
        }
        write!(f, " d={}", self.d)
    }
}

/// All `d` with `(a, d) ∈ S` and `(d, b) ∈ T`.
pub fn brute_force_witnesses(
    t: &BinaryRelation,
    s: &BinaryRelation,
    a: ElementId,
    b: ElementId,
) -> BTreeSet<ElementId> {
    (0..t.len()).filter(|&d| s.contains(a, d) && t.contains(d, b)).collect()
}

/// Valid middle elements `u` with `(a, u) ∈ T` and `(u, b) ∈ S`, ascending.
pub fn middle_elements(t: &BinaryRelation, s: &BinaryRelation, a: ElementId, b: ElementId) -> Vec<ElementId> {
    (0..t.len()).filter(|&u| t.contains(a, u) && s.contains(u, b)).collect()
}

pub fn construct_witness(
    lattice: &Lattice,
    t: &BinaryRelation,
    s: &BinaryRelation,
    a: ElementId,
    b: ElementId,
) -> Result<WitnessTrace> {
    let ct = ClassifiedTolerance::new(lattice, t)?;
    let cs = ClassifiedTolerance::new(lattice, s)?;
    WitnessBuilder::new(lattice, &ct, &cs).construct(a, b)
}

/// Runs the construction once for every valid middle element.
pub fn construct_witness_all_u(
    lattice: &Lattice,
    t: &BinaryRelation,
    s: &BinaryRelation,
    a: ElementId,
    b: ElementId,
) -> Result<Vec<WitnessTrace>> {
    let ct = ClassifiedTolerance::new(lattice, t)?;
    let cs = ClassifiedTolerance::new(lattice, s)?;
    WitnessBuilder::new(lattice, &ct, &cs).construct_all(a, b)
}

/// Reusable construction context for one `(L, T, S)`.
pub struct WitnessBuilder<'a> {
    lattice: &'a Lattice,
    t: &'a ClassifiedTolerance,
    s: &'a ClassifiedTolerance,
    dual: Option<(Lattice, ClassifiedTolerance, ClassifiedTolerance)>,
}

impl<'a> WitnessBuilder<'a> {
    pub fn new(lattice: &'a Lattice, t: &'a ClassifiedTolerance, s: &'a ClassifiedTolerance) -> Self {
        WitnessBuilder { lattice, t, s, dual: None }
    }

    fn check_range(&self, x: ElementId) -> Result<()> {
        let n = self.lattice.len();
        if x < n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x, n })
        }
    }

    /// Uses the least-index middle element.
    pub fn construct(&mut self, a: ElementId, b: ElementId) -> Result<WitnessTrace> {
        self.check_range(a)?;
        self.check_range(b)?;
        let u = *middle_elements(self.t.relation(), self.s.relation(), a, b)
            .first()
            .ok_or(Error::NotInProduct(a, b))?;
        self.construct_via(a, b, u)
    }

    pub fn construct_all(&mut self, a: ElementId, b: ElementId) -> Result<Vec<WitnessTrace>> {
        self.check_range(a)?;
        self.check_range(b)?;
        let middles = middle_elements(self.t.relation(), self.s.relation(), a, b);
        if middles.is_empty() {
            return Err(Error::NotInProduct(a, b));
        }
        middles.into_iter().map(|u| self.construct_via(a, b, u)).collect()
    }

    pub fn construct_via(&mut self, a: ElementId, b: ElementId, u: ElementId) -> Result<WitnessTrace> {
        for x in [a, b, u] {
            self.check_range(x)?;
        }
        let (t, s) = (self.t.relation(), self.s.relation());
        if !(t.contains(a, u) && s.contains(u, b)) {
            return Err(Error::NotInProduct(a, b));
        }
        let l = self.lattice;
        let mut trace = WitnessTrace {
            a,
            b,
            u,
            case: WitnessCase::Trivial,
            chain: Vec::new(),
            end_kind: None,
            start_kind: None,
            d: a,
        };

        if t.contains(a, b) {
            trace.d = a;
        } else if s.contains(a, b) {
            trace.d = b;
        } else if l.covers(a, u) && l.covers(b, u) {
            trace.case = WitnessCase::Meet;
            trace.d = l.meet(a, b);
            if self.s.lower(a) != Some(trace.d) || self.t.lower(b) != Some(trace.d) {
                return Err(Error::ProofStep(format!(
                    "{} is not the lower S-neighbour of {a} and lower T-neighbour of {b}",
                    trace.d
                )));
            }
        } else if l.covers(u, a) && l.covers(u, b) {
            trace.case = WitnessCase::Join;
            trace.d = l.join(a, b);
            if self.s.upper(a) != Some(trace.d) || self.t.upper(b) != Some(trace.d) {
                return Err(Error::ProofStep(format!(
                    "{} is not the upper S-neighbour of {a} and upper T-neighbour of {b}",
                    trace.d
                )));
            }
        } else if l.covers(a, u) && l.covers(u, b) {
            trace.case = WitnessCase::Climb;
            climb(l, self.t, self.s, &mut trace)?;
        } else if l.covers(u, a) && l.covers(b, u) {
            trace.case = WitnessCase::DualClimb;
            let (dl, dt, ds) = self.dual.get_or_insert_with(|| (l.dual(), self.t.dual(), self.s.dual()));
            climb(dl, dt, ds, &mut trace)?;
        } else {
            return Err(Error::ProofStep(format!("({a},{u}) and ({u},{b}) are not both cover pairs")));
        }

        if !(s.contains(a, trace.d) && t.contains(trace.d, b)) {
            return Err(Error::ProofStep(format!("d={} fails ({a},d) ∈ S and (d,{b}) ∈ T", trace.d)));
        }
        Ok(trace)
    }
}

/// The ascending case `a ≺ u ≺ b` on `l`; fills chain, kinds and `d`.
fn climb(
    l: &Lattice,
    t: &ClassifiedTolerance,
    s: &ClassifiedTolerance,
    trace: &mut WitnessTrace,
) -> Result<()> {
    let (a, u, b) = (trace.a, trace.u, trace.b);
    let roles: Vec<TwoFoldRole> = combine_roles(t.roles(), s.roles());
    let via = |i: usize| if i & 1 == 0 { t } else { s };

    let mut x = vec![a, u, b];
    loop {
        let i = x.len() - 1;
        match via(i).upper(x[i]) {
            Some(next) => {
                if x.len() > l.height() + 1 {
                    return Err(Error::NotAmicable(format!(
                        "climb from {b} exceeded the lattice height {}",
                        l.height()
                    )));
                }
                x.push(next)
            }
            None => break,
        }
    }
    let n = x.len() - 1;
    trace.chain = x.clone();

    let end = roles[x[n]].top;
    if !end.is_two_fold() {
        return Err(Error::ProofStep(format!("chain end {} is not a two-fold top", x[n])));
    }
    trace.end_kind = Some(end);

    // x[n-2] is a two-fold bottom.
    match end {
        FoldKind::Adherent => {
            if roles[x[n - 1]].bottom != FoldKind::Adherent {
                return Err(Error::ProofStep(format!("{} is not an adherent two-fold bottom", x[n - 1])));
            }
            if !roles[x[n - 2]].bottom.is_two_fold() {
                return Err(Error::NotAmicable(format!("(A2) fails at u={} v={}", x[n - 1], x[n - 2])));
            }
        }
        FoldKind::Split => {
            // x[n-1] is the lower neighbour of x[n] in the tolerance used for
            // the last step; c is its lower neighbour in the other one.
            let other = if n % 2 == 0 { t } else { s };
            let c = other.lower(x[n]).expect("two-fold top has both neighbours");
            let m = l.meet(x[n - 1], c);
            if m != x[n - 2] || !roles[m].bottom.is_two_fold() {
                return Err(Error::ProofStep(format!(
                    "{} ∧ {c} = {m} differs from x{} = {} or is not a two-fold bottom",
                    x[n - 1],
                    n - 2,
                    x[n - 2]
                )));
            }
        }
        FoldKind::None => unreachable!(),
    }

    // Carry the two-fold bottom down the chain with (A2).
    for j in (1..=n - 2).rev() {
        if !roles[x[j - 1]].bottom.is_two_fold() {
            return Err(Error::NotAmicable(format!("(A2) fails at u={} v={}", x[j], x[j - 1])));
        }
    }

    let start = roles[a].bottom;
    trace.start_kind = Some(start);
    match start {
        FoldKind::Split => {
            let d = s.upper(a).expect("two-fold bottom has both neighbours");
            if l.join(u, d) != b {
                return Err(Error::ProofStep(format!("{u} ∨ {d} differs from {b}")));
            }
            trace.d = d;
        }
        FoldKind::Adherent => {
            if !roles[b].top.is_two_fold() {
                return Err(Error::NotAmicable(format!("(A1) fails at u={u} v={b}")));
            }
            let e = t.lower(b).expect("two-fold top has both neighbours");
            if e != u {
                return Err(Error::ProofStep(format!("lower T-neighbour {e} of {b} differs from {u}")));
            }
            trace.d = u;
        }
        FoldKind::None => {
            return Err(Error::ProofStep(format!("{a} is not a two-fold bottom")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BinaryRelation {
        BinaryRelation::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn square_join_case() {
        let sq = Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let alpha = rel(4, &[(0, 1), (2, 3)]);
        let beta = rel(4, &[(0, 2), (1, 3)]);
        let w = construct_witness(&sq, &alpha, &beta, 1, 2).unwrap();
        assert_eq!((w.u, w.case, w.d), (0, WitnessCase::Join, 3));
        assert!(brute_force_witnesses(&alpha, &beta, 1, 2).contains(&3));
    }

    #[test]
    fn trivial_case_uses_reflexivity() {
        let c3 = Lattice::chain(3).unwrap();
        let t = rel(3, &[(0, 1), (1, 2)]);
        let w = construct_witness(&c3, &t, &t, 0, 1).unwrap();
        assert_eq!((w.case, w.d), (WitnessCase::Trivial, 0));
        let w = construct_witness(&c3, &t, &t, 2, 2).unwrap();
        assert_eq!(w.d, 2);
    }

    #[test]
    fn c3_adherent_climb() {
        let c3 = Lattice::chain(3).unwrap();
        let t = rel(3, &[(0, 1), (1, 2)]);
        let w = construct_witness(&c3, &t, &t, 0, 2).unwrap();
        assert_eq!(w.case, WitnessCase::Climb);
        assert_eq!(w.chain, vec![0, 1, 2]);
        assert_eq!(w.n(), Some(2));
        assert_eq!(w.end_kind, Some(FoldKind::Adherent));
        assert_eq!(w.start_kind, Some(FoldKind::Adherent));
        assert_eq!(w.d, 1);
        assert_eq!(brute_force_witnesses(&t, &t, 0, 2), BTreeSet::from([1]));

        let w = construct_witness(&c3, &t, &t, 2, 0).unwrap();
        assert_eq!(w.case, WitnessCase::DualClimb);
        assert_eq!(w.d, 1);
    }

    #[test]
    fn counterexample_is_reported_not_looped() {
        let c4 = Lattice::chain(4).unwrap();
        let t = rel(4, &[(0, 1), (2, 3)]);
        let s = rel(4, &[(0, 1), (1, 2), (2, 3)]);
        let err = construct_witness(&c4, &t, &s, 0, 2).unwrap_err();
        assert!(matches!(err, Error::NotAmicable(_)), "{err}");
        assert!(brute_force_witnesses(&t, &s, 0, 2).is_empty());
    }

    #[test]
    fn pairs_outside_the_product() {
        let c4 = Lattice::chain(4).unwrap();
        let t = rel(4, &[(0, 1), (2, 3)]);
        assert_eq!(construct_witness(&c4, &t, &t, 0, 3).unwrap_err(), Error::NotInProduct(0, 3));
        assert!(matches!(construct_witness(&c4, &t, &t, 0, 9), Err(Error::IndexOutOfRange { .. })));
    }
}
