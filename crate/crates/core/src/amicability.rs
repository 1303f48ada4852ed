//! Element roles under 2-uniform tolerances and the amicability test.
//!
//! Under a 2-uniform tolerance `R` every element `u` is an `R`-top (it has a
//! lower cover `v` with `{v, u}` an `R`-block), an `R`-bottom (dually), or
//! both. For a pair `(T, S)`, an element that is a top (bottom) for both is a
//! two-fold top (bottom); it is split when the two neighbours differ and
//! adherent when they coincide.
//!
//! `T` and `S` are amicable when
//! * (A1) every upper cover `v` of a two-fold top `u` with `(u, v) ∈ T ∪ S` is a two-fold top, and
//! * (A2) every lower cover `v` of a two-fold bottom `u` with `(v, u) ∈ T ∪ S` is a two-fold bottom.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::tolerance::{require_two_uniform, two_uniform_blocks, BinaryRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementRole {
    pub element: ElementId,
    /// Present iff the element is an `R`-top.
    pub lower_neighbour: Option<ElementId>,
    /// Present iff the element is an `R`-bottom.
    pub upper_neighbour: Option<ElementId>,
}

impl ElementRole {
    pub fn is_top(&self) -> bool {
        self.lower_neighbour.is_some()
    }

    pub fn is_bottom(&self) -> bool {
        self.upper_neighbour.is_some()
    }
}

impl fmt::Display for ElementRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: Option<ElementId>| o.map_or_else(|| "-".to_string(), |x| x.to_string());
        write!(
            f,
            "u={} lower={} upper={}",
            self.element,
            show(self.lower_neighbour),
            show(self.upper_neighbour)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoldKind {
    None,
    Split,
    Adherent,
}

impl FoldKind {
    fn of(t: Option<ElementId>, s: Option<ElementId>) -> FoldKind {
        match (t, s) {
            (Some(a), Some(b)) if a == b => FoldKind::Adherent,
            (Some(_), Some(_)) => FoldKind::Split,
            _ => FoldKind::None,
        }
    }

    pub fn is_two_fold(self) -> bool {
        self != FoldKind::None
    }
}

impl fmt::Display for FoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldKind::None => "none",
            FoldKind::Split => "split",
            FoldKind::Adherent => "adherent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoFoldRole {
    pub element: ElementId,
    pub top: FoldKind,
    pub bottom: FoldKind,
}

impl fmt::Display for TwoFoldRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={} top={} bottom={}", self.element, self.top, self.bottom)
    }
}

/// A 2-uniform tolerance together with its role table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedTolerance {
    relation: BinaryRelation,
    roles: Vec<ElementRole>,
}

impl ClassifiedTolerance {
    pub fn new(lattice: &Lattice, relation: &BinaryRelation) -> Result<Self> {
        Ok(ClassifiedTolerance { relation: relation.clone(), roles: classify(lattice, relation)? })
    }

    pub fn relation(&self) -> &BinaryRelation {
        &self.relation
    }

    pub fn roles(&self) -> &[ElementRole] {
        &self.roles
    }

    pub fn lower(&self, x: ElementId) -> Option<ElementId> {
        self.roles[x].lower_neighbour
    }

    pub fn upper(&self, x: ElementId) -> Option<ElementId> {
        self.roles[x].upper_neighbour
    }

    /// Roles read in the dual lattice (same indices, neighbours swapped).
    pub fn dual(&self) -> ClassifiedTolerance {
        ClassifiedTolerance {
            relation: self.relation.clone(),
            roles: self
                .roles
                .iter()
                .map(|r| ElementRole {
                    element: r.element,
                    lower_neighbour: r.upper_neighbour,
                    upper_neighbour: r.lower_neighbour,
                })
                .collect(),
        }
    }
}

/// Per-element top/bottom classification under a 2-uniform tolerance.
pub fn classify(lattice: &Lattice, rel: &BinaryRelation) -> Result<Vec<ElementRole>> {
    require_two_uniform(lattice, rel)?;
    let mut roles: Vec<ElementRole> = lattice
        .elements()
        .map(|element| ElementRole { element, lower_neighbour: None, upper_neighbour: None })
        .collect();
    for block in two_uniform_blocks(rel) {
        let (p, q) = (block.elements()[0], block.elements()[1]);
        let (lo, hi) = if lattice.covers(p, q) {
            (p, q)
        } else if lattice.covers(q, p) {
            (q, p)
        } else {
            continue;
        };
        set_once(&mut roles[hi].lower_neighbour, lo, hi, "lower")?;
        set_once(&mut roles[lo].upper_neighbour, hi, lo, "upper")?;
    }
    Ok(roles)
}

fn set_once(
    slot: &mut Option<ElementId>,
    value: ElementId,
    element: ElementId,
    side: &'static str,
) -> Result<()> {
    match *slot {
        Some(first) if first != value => {
            Err(Error::AmbiguousNeighbour { element, side, first, second: value })
        }
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

pub fn combine_roles(t: &[ElementRole], s: &[ElementRole]) -> Vec<TwoFoldRole> {
    t.iter()
        .zip(s)
        .map(|(rt, rs)| TwoFoldRole {
            element: rt.element,
            top: FoldKind::of(rt.lower_neighbour, rs.lower_neighbour),
            bottom: FoldKind::of(rt.upper_neighbour, rs.upper_neighbour),
        })
        .collect()
}

pub fn two_fold_roles(lattice: &Lattice, t: &BinaryRelation, s: &BinaryRelation) -> Result<Vec<TwoFoldRole>> {
    Ok(combine_roles(&classify(lattice, t)?, &classify(lattice, s)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    A1,
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Via {
    T,
    S,
}

/// A cover `v` of `u` that breaks (A1) or (A2). `via` names the tolerance
/// relating them (T when both do).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmicabilityViolation {
    pub condition: Condition,
    pub u: ElementId,
    pub v: ElementId,
    pub via: Via,
}

impl fmt::Display for AmicabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = match self.condition {
            Condition::A1 => "A1",
            Condition::A2 => "A2",
        };
        let via = match self.via {
            Via::T => "T",
            Via::S => "S",
        };
        write!(f, "{cond}-violation u={} v={} via={via}", self.u, self.v)
    }
}

pub fn violations_between(
    lattice: &Lattice,
    t: &ClassifiedTolerance,
    s: &ClassifiedTolerance,
) -> Vec<AmicabilityViolation> {
    let roles = combine_roles(t.roles(), s.roles());
    let via = |x: ElementId, y: ElementId| {
        if t.relation().contains(x, y) {
            Some(Via::T)
        } else if s.relation().contains(x, y) {
            Some(Via::S)
        } else {
            None
        }
    };
    let mut out = Vec::new();
    for u in lattice.elements() {
        if roles[u].top.is_two_fold() {
            for &v in lattice.upper_covers(u) {
                if let Some(via) = via(u, v) {
                    if !roles[v].top.is_two_fold() {
                        out.push(AmicabilityViolation { condition: Condition::A1, u, v, via });
                    }
                }
            }
        }
        if roles[u].bottom.is_two_fold() {
            for &v in lattice.lower_covers(u) {
                if let Some(via) = via(v, u) {
                    if !roles[v].bottom.is_two_fold() {
                        out.push(AmicabilityViolation { condition: Condition::A2, u, v, via });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

pub fn amicability_violations(
    lattice: &Lattice,
    t: &BinaryRelation,
    s: &BinaryRelation,
) -> Result<Vec<AmicabilityViolation>> {
    let t = ClassifiedTolerance::new(lattice, t)?;
    let s = ClassifiedTolerance::new(lattice, s)?;
    Ok(violations_between(lattice, &t, &s))
}

pub fn is_amicable(lattice: &Lattice, t: &BinaryRelation, s: &BinaryRelation) -> Result<bool> {
    Ok(amicability_violations(lattice, t, s)?.is_empty())
}
