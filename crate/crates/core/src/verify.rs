//! Exhaustive checks of the permutability characterisation and its lemmas on
//! individual lattices and on whole catalogs.

use std::fmt;

use rayon::prelude::*;

use crate::amicability::{combine_roles, violations_between, ClassifiedTolerance, FoldKind};
use crate::canon::canonical_hex;
use crate::enumerate::catalog;
use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::tolerance::{enumerate_two_uniform, is_congruence, maximal_cliques, RelationImage};
use crate::witness::{brute_force_witnesses, middle_elements, WitnessBuilder};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Run the witness construction for every valid middle element, not just the least.
    pub all_u: bool,
}

/// A failed check of the characterisation itself. `t` and `s` index the
/// lattice's 2-uniform tolerances in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TheoremViolation {
    Equivalence { t: usize, s: usize, permutes: bool, amicable: bool },
    Witness { t: usize, s: usize, a: ElementId, b: ElementId, detail: String },
}

impl fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremViolation::Equivalence { t, s, permutes, amicable } => {
                write!(f, "equivalence T=#{t} S=#{s} permutes={permutes} amicable={amicable}")
            }
            TheoremViolation::Witness { t, s, a, b, detail } => {
                write!(f, "witness T=#{t} S=#{s} a={a} b={b}: {detail}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LemmaFailure {
    /// More than one lower (or upper) neighbour.
    UniqueNeighbour {
        r: usize,
        element: ElementId,
        side: &'static str,
    },
    /// Related distinct elements that are not a cover pair.
    NonCoverPair {
        r: usize,
        x: ElementId,
        y: ElementId,
    },
    BlockNotConvex {
        r: usize,
        block: Vec<ElementId>,
    },
    /// Distinct lower neighbours `a`, `b` of `u` whose meet is not the expected neighbour.
    MeetNeighbour {
        t: usize,
        s: usize,
        u: ElementId,
    },
    JoinNeighbour {
        t: usize,
        s: usize,
        u: ElementId,
    },
    /// A split/adherent role that does not propagate along a cover of a permuting pair.
    Propagation {
        t: usize,
        s: usize,
        u: ElementId,
        v: ElementId,
        statement: &'static str,
    },
    /// Two 2-uniform congruences that do not permute.
    Congruences {
        t: usize,
        s: usize,
    },
}

impl fmt::Display for LemmaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaFailure::UniqueNeighbour { r, element, side } => {
                write!(f, "unique-neighbour R=#{r} u={element} side={side}")
            }
            LemmaFailure::NonCoverPair { r, x, y } => write!(f, "non-cover-pair R=#{r} ({x},{y})"),
            LemmaFailure::BlockNotConvex { r, block } => write!(f, "non-convex-block R=#{r} {block:?}"),
            LemmaFailure::MeetNeighbour { t, s, u } => write!(f, "meet-neighbour T=#{t} S=#{s} u={u}"),
            LemmaFailure::JoinNeighbour { t, s, u } => write!(f, "join-neighbour T=#{t} S=#{s} u={u}"),
            LemmaFailure::Propagation { t, s, u, v, statement } => {
                write!(f, "propagation-{statement} T=#{t} S=#{s} u={u} v={v}")
            }
            LemmaFailure::Congruences { t, s } => write!(f, "congruences-do-not-permute T=#{t} S=#{s}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    /// Canonical form of the lattice, lowercase hex.
    pub lattice: String,
    pub size: usize,
    pub tolerances: usize,
    pub pairs: usize,
    pub amicable: usize,
    pub permuting: usize,
    pub congruence_pairs: usize,
    pub witnesses_checked: usize,
    pub violations: Vec<TheoremViolation>,
    pub lemma_failures: Vec<LemmaFailure>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.lemma_failures.is_empty()
    }

    pub fn failure_count(&self) -> usize {
        self.violations.len() + self.lemma_failures.len()
    }
}

struct Context<'a> {
    lattice: &'a Lattice,
    tolerances: Vec<ClassifiedTolerance>,
}

impl<'a> Context<'a> {
    fn new(lattice: &'a Lattice) -> Result<Self> {
        let tolerances = enumerate_two_uniform(lattice)
            .iter()
            .map(|r| ClassifiedTolerance::new(lattice, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context { lattice, tolerances })
    }

    fn report(&self) -> VerificationReport {
        VerificationReport {
            lattice: canonical_hex(self.lattice),
            size: self.lattice.len(),
            tolerances: self.tolerances.len(),
            ..Default::default()
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.tolerances.len();
        (0..k).flat_map(move |i| (0..k).map(move |j| (i, j)))
    }

    fn product(&self, i: usize, j: usize) -> RelationImage {
        self.tolerances[i].relation().compose(self.tolerances[j].relation()).expect("same lattice")
    }
}

/// Checks `permutes(T, S) ⇔ amicable(T, S)` for every ordered pair of 2-uniform
/// tolerances, and the witness construction on every amicable pair.
pub fn verify_theorem_on(lattice: &Lattice) -> Result<VerificationReport> {
    verify_theorem_with(lattice, VerifyOptions::default())
}

pub fn verify_theorem_with(lattice: &Lattice, opts: VerifyOptions) -> Result<VerificationReport> {
    let ctx = Context::new(lattice)?;
    Ok(theorem_checks(&ctx, opts))
}

fn theorem_checks(ctx: &Context<'_>, opts: VerifyOptions) -> VerificationReport {
    let mut report = ctx.report();
    let l = ctx.lattice;
    for (i, j) in ctx.pairs() {
        let (t, s) = (&ctx.tolerances[i], &ctx.tolerances[j]);
        let ts = ctx.product(i, j);
        let st = ctx.product(j, i);
        let permutes = ts == st;
        let amicable = violations_between(l, t, s).is_empty();
        report.pairs += 1;
        report.permuting += usize::from(permutes);
        report.amicable += usize::from(amicable);
        if permutes != amicable {
            report.violations.push(TheoremViolation::Equivalence { t: i, s: j, permutes, amicable });
        }
        if !amicable {
            continue;
        }

        let mut builder = WitnessBuilder::new(l, t, s);
        let fail = |a, b, detail: String| TheoremViolation::Witness { t: i, s: j, a, b, detail };
        for a in l.elements() {
            for b in l.elements() {
                if !ts.contains(a, b) {
                    match builder.construct(a, b) {
                        Err(Error::NotInProduct(..)) => {}
                        other => report.violations.push(fail(
                            a,
                            b,
                            format!("expected NotInProduct, got {other:?}"),
                        )),
                    }
                    continue;
                }
                let middles = if opts.all_u {
                    middle_elements(t.relation(), s.relation(), a, b)
                } else {
                    middle_elements(t.relation(), s.relation(), a, b).into_iter().take(1).collect()
                };
                let oracle = brute_force_witnesses(t.relation(), s.relation(), a, b);
                for u in middles {
                    report.witnesses_checked += 1;
                    match builder.construct_via(a, b, u) {
                        Ok(trace) => {
                            let d = trace.d;
                            let sound = s.relation().contains(a, d) && t.relation().contains(d, b);
                            if !sound || !oracle.contains(&d) {
                                report.violations.push(fail(a, b, format!("u={u} returned invalid d={d}")));
                            }
                        }
                        Err(e) => report.violations.push(fail(a, b, format!("u={u}: {e}"))),
                    }
                }
            }
        }
    }
    report
}

/// Checks the neighbour lemmas for every 2-uniform tolerance, the split/adherent
/// propagation statements for every permuting pair, and permutability of every
/// pair of 2-uniform congruences.
pub fn verify_lemmas_on(lattice: &Lattice) -> Result<VerificationReport> {
    let ctx = Context::new(lattice)?;
    Ok(lemma_checks(&ctx))
}

fn lemma_checks(ctx: &Context<'_>) -> VerificationReport {
    let mut report = ctx.report();
    let l = ctx.lattice;
    let failures = &mut report.lemma_failures;

    for (r, tol) in ctx.tolerances.iter().enumerate() {
        let rel = tol.relation();
        let blocks = maximal_cliques(rel);
        for block in &blocks {
            if !block.is_convex_sublattice(l) {
                failures.push(LemmaFailure::BlockNotConvex { r, block: block.elements().to_vec() });
            }
        }
        for z in l.elements() {
            let is_block = |x: ElementId| blocks.iter().any(|b| b.elements() == [x.min(z), x.max(z)]);
            let lower = l.lower_covers(z).iter().filter(|&&x| is_block(x)).count();
            let upper = l.upper_covers(z).iter().filter(|&&x| is_block(x)).count();
            if lower > 1 {
                failures.push(LemmaFailure::UniqueNeighbour { r, element: z, side: "lower" });
            }
            if upper > 1 {
                failures.push(LemmaFailure::UniqueNeighbour { r, element: z, side: "upper" });
            }
        }
        for (x, y) in rel.edges() {
            if !l.covers(x, y) && !l.covers(y, x) {
                failures.push(LemmaFailure::NonCoverPair { r, x, y });
            }
        }
    }

    let congruence: Vec<bool> =
        ctx.tolerances.iter().map(|t| is_congruence(l, t.relation()).expect("same lattice")).collect();

    for (i, j) in ctx.pairs() {
        let (t, s) = (&ctx.tolerances[i], &ctx.tolerances[j]);
        let (tr, sr) = (t.relation(), s.relation());

        for u in l.elements() {
            if let (Some(a), Some(b)) = (t.lower(u), s.lower(u)) {
                if a != b {
                    let m = l.meet(a, b);
                    let ok = l.covers(m, a) && sr.contains(m, a) && l.covers(m, b) && tr.contains(m, b);
                    if !ok {
                        failures.push(LemmaFailure::MeetNeighbour { t: i, s: j, u });
                    }
                }
            }
            if let (Some(a), Some(b)) = (t.upper(u), s.upper(u)) {
                if a != b {
                    let m = l.join(a, b);
                    let ok = l.covers(a, m) && sr.contains(a, m) && l.covers(b, m) && tr.contains(b, m);
                    if !ok {
                        failures.push(LemmaFailure::JoinNeighbour { t: i, s: j, u });
                    }
                }
            }
        }

        let permutes = ctx.product(i, j) == ctx.product(j, i);
        if congruence[i] && congruence[j] {
            report.congruence_pairs += 1;
            if !permutes {
                failures.push(LemmaFailure::Congruences { t: i, s: j });
            }
        }
        if !permutes {
            continue;
        }
        let roles = combine_roles(t.roles(), s.roles());
        let related = |x: ElementId, y: ElementId| tr.contains(x, y) || sr.contains(x, y);
        for u in l.elements() {
            for &v in l.upper_covers(u) {
                if !related(u, v) {
                    continue;
                }
                let statement = match roles[u].top {
                    FoldKind::Split if roles[v].top != FoldKind::Split => Some("split-top"),
                    FoldKind::Adherent if roles[v].top != FoldKind::Adherent => Some("adherent-top"),
                    _ => None,
                };
                if let Some(statement) = statement {
                    failures.push(LemmaFailure::Propagation { t: i, s: j, u, v, statement });
                }
            }
            for &v in l.lower_covers(u) {
                if !related(v, u) {
                    continue;
                }
                let statement = match roles[u].bottom {
                    FoldKind::Split if roles[v].bottom != FoldKind::Split => Some("split-bottom"),
                    FoldKind::Adherent if roles[v].bottom != FoldKind::Adherent => Some("adherent-bottom"),
                    _ => None,
                };
                if let Some(statement) = statement {
                    failures.push(LemmaFailure::Propagation { t: i, s: j, u, v, statement });
                }
            }
        }
    }
    report
}

/// Theorem and lemma checks on one lattice, merged into a single report.
pub fn verify_lattice(lattice: &Lattice, opts: VerifyOptions) -> Result<VerificationReport> {
    let ctx = Context::new(lattice)?;
    let mut report = theorem_checks(&ctx, opts);
    let lemmas = lemma_checks(&ctx);
    report.congruence_pairs = lemmas.congruence_pairs;
    report.lemma_failures = lemmas.lemma_failures;
    Ok(report)
}

/// Aggregate over all lattices of one size.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelSummary {
    pub n: usize,
    pub lattices: usize,
    pub tolerances: usize,
    pub pairs: usize,
    pub amicable: usize,
    pub permuting: usize,
    pub congruence_pairs: usize,
    pub witnesses_checked: usize,
    /// Reports of lattices with at least one failure.
    pub failing: Vec<VerificationReport>,
}

impl LevelSummary {
    pub fn violations(&self) -> usize {
        self.failing.iter().map(VerificationReport::failure_count).sum()
    }
}

impl fmt::Display for LevelSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} lattices={} pairs={} amicable={} permuting={} violations={}",
            self.n,
            self.lattices,
            self.pairs,
            self.amicable,
            self.permuting,
            self.violations()
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogReport {
    pub levels: Vec<LevelSummary>,
}

impl CatalogReport {
    pub fn is_clean(&self) -> bool {
        self.levels.iter().all(|l| l.failing.is_empty())
    }

    pub fn lattices(&self) -> usize {
        self.levels.iter().map(|l| l.lattices).sum()
    }
}

impl fmt::Display for CatalogReport {
    /// One summary line per size, then one line per failure.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for level in &self.levels {
            writeln!(f, "{level}")?;
        }
        for level in &self.levels {
            for report in &level.failing {
                for v in &report.violations {
                    writeln!(f, "  n={} lattice={} {v}", level.n, report.lattice)?;
                }
                for v in &report.lemma_failures {
                    writeln!(f, "  n={} lattice={} {v}", level.n, report.lattice)?;
                }
            }
        }
        Ok(())
    }
}

/// Verifies every lattice with `2..=max_n` elements, in parallel; output order
/// is the catalog order.
pub fn run_catalog(max_n: usize, opts: VerifyOptions) -> Result<CatalogReport> {
    if max_n < 2 {
        return Err(Error::EnumerationRange { n: max_n, ceiling: crate::enumerate::DEFAULT_CEILING });
    }
    let levels = catalog(max_n)?;
    let mut report = CatalogReport::default();
    for (k, level) in levels.iter().enumerate().skip(1) {
        let reports = level.par_iter().map(|l| verify_lattice(l, opts)).collect::<Result<Vec<_>>>()?;
        let mut summary = LevelSummary { n: k + 1, lattices: level.len(), ..Default::default() };
        for r in reports {
            summary.tolerances += r.tolerances;
            summary.pairs += r.pairs;
            summary.amicable += r.amicable;
            summary.permuting += r.permuting;
            summary.congruence_pairs += r.congruence_pairs;
            summary.witnesses_checked += r.witnesses_checked;
            if !r.is_clean() {
                summary.failing.push(r);
            }
        }
        report.levels.push(summary);
    }
    Ok(report)
}
