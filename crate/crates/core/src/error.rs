use thiserror::Error;

use crate::lattice::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::Meet => "meet",
            BoundKind::Join => "join",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("element {0} cannot cover itself")]
    SelfCover(ElementId),
    #[error("not a poset: cover relation has a cycle through {0} and {1}")]
    NotAPoset(ElementId, ElementId),
    #[error("not a lattice: elements {x} and {y} have no unique {kind}")]
    NotALattice { x: ElementId, y: ElementId, kind: BoundKind },
    #[error("cover ({lower},{upper}) is implied via {via}")]
    NotTransitiveReduction { lower: ElementId, upper: ElementId, via: ElementId },
    #[error("glued chain sum needs at least one chain")]
    EmptyGluing,
    #[error("chain of length {0} collapses when glued (need at least 3)")]
    ChainTooShort(usize),
    #[error("size mismatch: expected {expected} elements, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(ElementId),
    #[error("relation is not symmetric at ({0},{1})")]
    NotSymmetric(ElementId, ElementId),
    #[error("not a tolerance: {0}")]
    NotATolerance(crate::tolerance::CompatibilityFailure),
    #[error("tolerance is not 2-uniform: block {0:?} has {} elements", .0.len())]
    NotTwoUniform(Vec<ElementId>),
    #[error("element {element} has two {side} neighbours, {first} and {second}")]
    AmbiguousNeighbour { element: ElementId, side: &'static str, first: ElementId, second: ElementId },
    #[error("({0},{1}) is not in the product T∘S")]
    NotInProduct(ElementId, ElementId),
    #[error("tolerances are not amicable: {0}")]
    NotAmicable(String),
    #[error("witness construction failed: {0}")]
    ProofStep(String),
    #[error("lattice size {n} outside the enumeration range 1..={ceiling}")]
    EnumerationRange { n: usize, ceiling: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
