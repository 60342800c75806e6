//! Entourage families on finite carriers.
//!
//! An upward-closed family of relations is represented by the antichain of
//! its minimal members; the family itself is everything above some basis
//! member. All axioms are decided on the basis through reductions whose
//! one-line proofs sit next to the code. The classes checked here:
//!
//! * plain: diagonal in every member (U1), closed under inverses (U2),
//!   every member admits a composition below it (U3), upward closure (U4,
//!   free by representation), intersection equal to the diagonal (U5);
//! * symmetric: a symmetric member below every member (U2');
//! * strong: a self-composing member below every member (U3');
//! * almost uniform: symmetric and strong;
//! * uniform: almost uniform and closed under binary intersections (U6).
//!
//! The module also carries the induced pre-topology, neighborhood and
//! entourage pre-bases, covers and their star calculus, the generation
//! routes (pre-base, cover family, pseudometric family), coreflection,
//! binary products, total boundedness, and a bounded search for the finest
//! compatible family on a given pre-topology.

use std::collections::BTreeSet;

use num::Signed;
use thiserror::Error;

use crate::metrics::Pseudometric;
use crate::pretop::{self, PreTopology, PretopError};
use crate::relcore::{preorders, PointMap, Relation, Subset, MAX_POINTS, MAX_RELATION_POINTS};

#[derive(Debug, Error, PartialEq)]
pub enum PreunifError {
    #[error("basis must be non-empty")]
    EmptyBasis,
    #[error("carrier size mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("carrier would need {0} points; at most {1} are supported")]
    CarrierTooLarge(usize, usize),
    #[error("not a pre-uniformity: {} fails", failed.join(", "))]
    NotPreUniformity { failed: Vec<String>, report: Box<AxiomReport> },
    #[error("family member {index} does not cover the carrier")]
    NotACover { index: usize },
    #[error("cover family is empty")]
    EmptyCoverFamily,
    #[error("cover condition {which} fails")]
    CoverConditionFails { which: String, report: Box<UcReport> },
    #[error("pseudometrics do not separate points {0} and {1}")]
    NotSeparating(usize, usize),
    #[error("sup of an empty family")]
    EmptyInput,
    #[error(transparent)]
    Pretop(#[from] PretopError),
}

/// The antichain of minimal members of an upward-closed relation family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntourageBasis {
    n: usize,
    rels: Vec<Relation>,
}

/// Keeps only members with nothing strictly below them; the upward closure
/// is unchanged, so every axiom verdict is too.
fn minimal_antichain(members: &[Relation]) -> Vec<Relation> {
    let mut keep: Vec<Relation> = Vec::new();
    for &r in members {
        if members.iter().any(|&s| s != r && s.is_subset_of(&r)) {
            continue;
        }
        if !keep.contains(&r) {
            keep.push(r);
        }
    }
    keep.sort();
    keep
}

impl EntourageBasis {
    pub fn new(n: usize, members: &[Relation]) -> Result<Self, PreunifError> {
        if members.is_empty() {
            return Err(PreunifError::EmptyBasis);
        }
        for r in members {
            if r.n() != n {
                return Err(PreunifError::CarrierMismatch(r.n(), n));
            }
        }
        Ok(EntourageBasis { n, rels: minimal_antichain(members) })
    }

    pub fn discrete(n: usize) -> Self {
        EntourageBasis { n, rels: vec![Relation::diagonal(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Relation] {
        &self.rels
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    /// Intersection of the whole upward closure; equals the intersection of
    /// the basis because every member contains a basis member.
    pub fn intersection(&self) -> Relation {
        let mut acc = Relation::full(self.n);
        for r in &self.rels {
            acc = acc.inter(r);
        }
        acc
    }

    /// Membership in the upward closure.
    pub fn member(&self, v: &Relation) -> bool {
        v.n() == self.n && self.rels.iter().any(|b| b.is_subset_of(v))
    }

    /// `{G : every x in G keeps some basis section inside G}`. Total for
    /// any basis: sections of minimal members suffice because sections grow
    /// with the member.
    pub fn induced_pretopology(&self) -> PreTopology {
        let n = self.n;
        let sections: Vec<Vec<Subset>> = (0..n)
            .map(|x| self.rels.iter().map(|b| b.section(x)).collect())
            .collect();
        let mut opens = Vec::new();
        'subsets: for g in 0..1u128 << n {
            let gs = Subset::from_bits(n, g);
            for x in gs.points() {
                if !sections[x].iter().any(|s| s.is_subset_of(&gs)) {
                    continue 'subsets;
                }
            }
            opens.push(g);
        }
        PreTopology::from_masks_unchecked(n, opens)
    }
}

/// One axiom outcome; a failure always carries a witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub witness: Option<AxiomWitness>,
}

impl AxiomVerdict {
    fn pass() -> Self {
        AxiomVerdict { holds: true, witness: None }
    }

    fn fail(w: AxiomWitness) -> Self {
        AxiomVerdict { holds: false, witness: Some(w) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AxiomWitness {
    /// A member missing the diagonal pair `(at, at)`.
    MissingDiagonal { member: Relation, at: usize },
    /// No member fits below the inverse of this one.
    NoInverseBelow { member: Relation },
    /// No pair of members composes into this one; all basis-pair
    /// compositions are listed.
    NoCompositionBelow { member: Relation, compositions: Vec<Relation> },
    /// An off-diagonal pair surviving the basis intersection.
    IntersectionTooBig { pair: (usize, usize) },
    /// No member fits below this binary intersection.
    NoIntersectionBelow { left: Relation, right: Relation },
    /// No symmetric relation can be squeezed between a member and this one.
    NoSymmetricBelow { member: Relation },
    /// No member self-composes into this one.
    NoSquareBelow { member: Relation },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub preuniformity: bool,
    pub symmetric: bool,
    pub strong: bool,
    pub almost_uniform: bool,
    pub uniform: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomReport {
    pub u1: AxiomVerdict,
    pub u2: AxiomVerdict,
    pub u3: AxiomVerdict,
    pub u4: AxiomVerdict,
    pub u5: AxiomVerdict,
    pub u6: AxiomVerdict,
    pub u2_prime: AxiomVerdict,
    pub u3_prime: AxiomVerdict,
    pub classification: Classification,
}

impl AxiomReport {
    pub fn failed_core_axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("U1", &self.u1),
            ("U2", &self.u2),
            ("U3", &self.u3),
            ("U4", &self.u4),
            ("U5", &self.u5),
        ] {
            if !v.holds {
                out.push(name.to_string());
            }
        }
        out
    }
}

/// Decides every axiom of the upward closure on the basis antichain.
pub fn check_axioms(basis: &EntourageBasis) -> AxiomReport {
    let rels = basis.members();
    let n = basis.n();

    // U1 on the closure == U1 on the basis: members above a
    // diagonal-containing member contain the diagonal, and basis members
    // are members themselves.
    let u1 = match rels
        .iter()
        .find(|b| !b.contains_diagonal())
    {
        None => AxiomVerdict::pass(),
        Some(b) => {
            let at = (0..n).find(|&x| !b.contains(x, x)).unwrap();
            AxiomVerdict::fail(AxiomWitness::MissingDiagonal { member: *b, at })
        }
    };

    // U2 on the closure == for every basis b some b' sits below b^{-1}:
    // the inverse of a general member V >= b contains b^{-1} >= b', and the
    // worst case V = b is exactly the basis condition.
    let u2 = match rels
        .iter()
        .find(|b| !rels.iter().any(|c| c.is_subset_of(&b.inverse())))
    {
        None => AxiomVerdict::pass(),
        Some(b) => AxiomVerdict::fail(AxiomWitness::NoInverseBelow { member: *b }),
    };

    // U3 on the closure == some basis pair composes below each basis
    // member: composition is monotone in both arguments, so witnesses can
    // always be pushed down to the basis, and V = b is the worst target.
    let u3 = match rels.iter().find(|b| {
        !rels
            .iter()
            .any(|v| rels.iter().any(|w| v.compose(w).is_subset_of(b)))
    }) {
        None => AxiomVerdict::pass(),
        Some(b) => {
            let comps =
                rels.iter().flat_map(|v| rels.iter().map(|w| v.compose(w))).collect();
            AxiomVerdict::fail(AxiomWitness::NoCompositionBelow {
                member: *b,
                compositions: comps,
            })
        }
    };

    // U4 is the representation itself.
    let u4 = AxiomVerdict::pass();

    // The closure and the basis have the same intersection.
    let inter = basis.intersection();
    let u5 = if inter == Relation::diagonal(n) {
        AxiomVerdict::pass()
    } else {
        let pair = inter.pairs().find(|(x, y)| x != y).unwrap();
        AxiomVerdict::fail(AxiomWitness::IntersectionTooBig { pair })
    };

    // U6 on the closure == every binary basis intersection has a basis
    // member below it (the general case only shrinks to this one).
    let mut u6 = AxiomVerdict::pass();
    'u6: for a in rels {
        for b in rels {
            let i = a.inter(b);
            if !rels.iter().any(|c| c.is_subset_of(&i)) {
                u6 = AxiomVerdict::fail(AxiomWitness::NoIntersectionBelow { left: *a, right: *b });
                break 'u6;
            }
        }
    }

    // U2' asks for a symmetric member of the closure inside each member.
    // Such a V with b' <= V <= b exists iff b' u b'^{-1} <= b for some
    // basis b', since a symmetric V above b' must contain b' u b'^{-1},
    // which is itself symmetric and a member.
    let u2_prime = match rels
        .iter()
        .find(|b| !rels.iter().any(|c| c.symmetric_closure().is_subset_of(b)))
    {
        None => AxiomVerdict::pass(),
        Some(b) => AxiomVerdict::fail(AxiomWitness::NoSymmetricBelow { member: *b }),
    };

    // U3' reduces to a basis self-composition below each member: if
    // V >= b' and V o V <= b then b' o b' <= b, and b' itself is a member.
    let u3_prime = match rels
        .iter()
        .find(|b| !rels.iter().any(|c| c.compose(c).is_subset_of(b)))
    {
        None => AxiomVerdict::pass(),
        Some(b) => AxiomVerdict::fail(AxiomWitness::NoSquareBelow { member: *b }),
    };

    let preuniformity = u1.holds && u2.holds && u3.holds && u4.holds && u5.holds;
    let symmetric = preuniformity && u2_prime.holds;
    let strong = preuniformity && u3_prime.holds;
    let almost_uniform = symmetric && strong;
    let uniform = almost_uniform && u6.holds;

    AxiomReport {
        u1,
        u2,
        u3,
        u4,
        u5,
        u6,
        u2_prime,
        u3_prime,
        classification: Classification { preuniformity, symmetric, strong, almost_uniform, uniform },
    }
}

/// A validated entourage family (axioms U1 through U5 hold).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreUniformity {
    basis: EntourageBasis,
    report: AxiomReport,
}

impl PreUniformity {
    pub fn new(basis: EntourageBasis) -> Result<Self, PreunifError> {
        let report = check_axioms(&basis);
        if !report.classification.preuniformity {
            return Err(PreunifError::NotPreUniformity {
                failed: report.failed_core_axioms(),
                report: Box::new(report),
            });
        }
        Ok(PreUniformity { basis, report })
    }

    pub fn from_members(n: usize, members: &[Relation]) -> Result<Self, PreunifError> {
        PreUniformity::new(EntourageBasis::new(n, members)?)
    }

    pub fn discrete(n: usize) -> Self {
        PreUniformity::new(EntourageBasis::discrete(n)).expect("diagonal basis is uniform")
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn basis(&self) -> &EntourageBasis {
        &self.basis
    }

    pub fn report(&self) -> &AxiomReport {
        &self.report
    }

    pub fn classification(&self) -> Classification {
        self.report.classification
    }

    pub fn member(&self, v: &Relation) -> bool {
        self.basis.member(v)
    }

    pub fn induced_pretopology(&self) -> PreTopology {
        self.basis.induced_pretopology()
    }

    /// Size of the least pre-base. The minimal antichain is contained in
    /// every pre-base (a pre-base element below a minimal member must equal
    /// it) and is itself one, so the least size is exactly the antichain's.
    pub fn weight(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Comparison {
    Equal,
    /// The first family contains the second.
    Finer,
    /// The second family contains the first.
    Coarser,
    Incomparable,
}

/// Set comparison of the upward closures through the bases.
pub fn compare(mu1: &PreUniformity, mu2: &PreUniformity) -> Result<Comparison, PreunifError> {
    if mu1.n() != mu2.n() {
        return Err(PreunifError::CarrierMismatch(mu1.n(), mu2.n()));
    }
    let contains_2 = mu2.basis().members().iter().all(|b| mu1.member(b));
    let contains_1 = mu1.basis().members().iter().all(|b| mu2.member(b));
    Ok(match (contains_2, contains_1) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Finer,
        (false, true) => Comparison::Coarser,
        (false, false) => Comparison::Incomparable,
    })
}

/// Union of the families: the least upper bound. The union is upward
/// closed, and each axiom witness for a member comes from its own
/// contributing family, so validity is inherited memberwise.
pub fn sup(mus: &[PreUniformity]) -> Result<PreUniformity, PreunifError> {
    let Some(first) = mus.first() else {
        return Err(PreunifError::EmptyInput);
    };
    let n = first.n();
    let mut members = Vec::new();
    for mu in mus {
        if mu.n() != n {
            return Err(PreunifError::CarrierMismatch(mu.n(), n));
        }
        members.extend_from_slice(mu.basis().members());
    }
    PreUniformity::from_members(n, &members)
}

/// The two sides of the T0 criterion for a family assumed to satisfy only
/// U1 through U4: whether the induced pre-topology is T0, and whether the
/// basis intersection is the diagonal.
pub fn t0_criterion(basis: &EntourageBasis) -> (bool, bool) {
    let t0 = basis.induced_pretopology().separation_profile().t0;
    let diag = basis.intersection() == Relation::diagonal(basis.n());
    (t0, diag)
}

/// Interiors of the basis sections at `x`: an open neighborhood pre-base.
pub fn neighborhood_prebase(mu: &PreUniformity, x: usize) -> Vec<Subset> {
    let tau = mu.induced_pretopology();
    let mut out: Vec<Subset> = Vec::new();
    for b in mu.basis().members() {
        let s = tau.interior(&b.section(x));
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Closed and open members of the family in the induced product
/// pre-topology, with pre-base verdicts for both. Materializes every
/// relation above the basis, so it is for small carriers; the verdicts
/// alone are available through `entourage_prebase_verdicts`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntouragePrebases {
    pub closed_members: Vec<Relation>,
    pub open_members: Vec<Relation>,
    pub closed_is_prebase: bool,
    pub open_is_prebase: bool,
}

fn product_with_self(tau: &PreTopology) -> Result<PreTopology, PreunifError> {
    Ok(pretop::product_pretopology(tau, tau)?)
}

pub fn entourage_prebases(mu: &PreUniformity) -> Result<EntouragePrebases, PreunifError> {
    let n = mu.n();
    let tt = product_with_self(&mu.induced_pretopology())?;
    let mut closed_members = Vec::new();
    let mut open_members = Vec::new();
    for bits in 0..1u128 << (n * n) {
        let r = Relation::from_bits(n, bits);
        if !mu.member(&r) {
            continue;
        }
        let s = r.as_product_subset();
        if tt.is_closed(&s) {
            closed_members.push(r);
        }
        if tt.is_open(&s) {
            open_members.push(r);
        }
    }
    // pre-base test reduced to the basis: a member below every general
    // member exists iff one sits below every basis member
    let closed_is_prebase = mu
        .basis()
        .members()
        .iter()
        .all(|b| closed_members.iter().any(|c| c.is_subset_of(b)));
    let open_is_prebase = mu
        .basis()
        .members()
        .iter()
        .all(|b| open_members.iter().any(|c| c.is_subset_of(b)));
    Ok(EntouragePrebases { closed_members, open_members, closed_is_prebase, open_is_prebase })
}

/// The two pre-base verdicts without materializing the family. A closed
/// member below b exists iff the product closure of some basis member stays
/// inside b (closed sets shrink to the closure); an open member above some
/// basis member inside b exists iff the product interior of b contains a
/// basis member. Product opens are unions of open boxes, so interiors and
/// closures come straight from the boxes: interior(S) joins the boxes
/// inside S, closure(S) is the complement of the join of boxes missing S.
pub fn entourage_prebase_verdicts(mu: &PreUniformity) -> Result<(bool, bool), PreunifError> {
    let n = mu.n();
    if n * n > MAX_POINTS {
        return Err(PreunifError::CarrierTooLarge(n * n, MAX_POINTS));
    }
    let tau = mu.induced_pretopology();
    let mut boxes = Vec::with_capacity(tau.open_count() * tau.open_count());
    for &u in tau.open_masks() {
        for &v in tau.open_masks() {
            let mut b = 0u128;
            for i in 0..n {
                if u >> i & 1 == 1 {
                    b |= v << (i * n);
                }
            }
            boxes.push(b);
        }
    }
    let full = if n * n == 128 { u128::MAX } else { (1u128 << (n * n)) - 1 };
    let interior = |s: u128| boxes.iter().filter(|&&b| b & !s == 0).fold(0u128, |a, &b| a | b);
    let closure =
        |s: u128| full & !boxes.iter().filter(|&&b| b & s == 0).fold(0u128, |a, &b| a | b);

    let rels = mu.basis().members();
    let closed_ok = rels.iter().all(|b| {
        let target = b.as_product_subset().bits();
        rels.iter().any(|c| closure(c.as_product_subset().bits()) & !target == 0)
    });
    let open_ok = rels.iter().all(|b| {
        let int = interior(b.as_product_subset().bits());
        let int_rel = Relation::from_product_subset(n, &Subset::from_bits(n * n, int));
        rels.iter().any(|c| c.is_subset_of(&int_rel))
    });
    Ok((closed_ok, open_ok))
}

/// Compatibility clauses of the pre-base generation route against a given
/// pre-topology: openness of the members in the product, the section
/// clause, and whether the construction induces the given family.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct PrebaseCompatibility {
    pub members_open_in_product: bool,
    pub section_clause: bool,
    pub induces_given: bool,
}

/// Upward closure of a family checked against the pre-base conditions;
/// the error carries the axiom report with witnesses.
pub fn generate_from_prebase(
    n: usize,
    family: &[Relation],
    tau: Option<&PreTopology>,
) -> Result<(PreUniformity, Option<PrebaseCompatibility>), PreunifError> {
    let basis = EntourageBasis::new(n, family)?;
    let mu = PreUniformity::new(basis)?;
    let compat = match tau {
        None => None,
        Some(t) => {
            if t.n() != n {
                return Err(PreunifError::CarrierMismatch(t.n(), n));
            }
            let tt = pretop::product_pretopology(t, t)?;
            let members_open_in_product = mu
                .basis()
                .members()
                .iter()
                .all(|b| tt.is_open(&b.as_product_subset()));
            let section_clause = (0..n).all(|x| {
                t.opens().filter(|g| g.contains(x)).all(|g| {
                    mu.basis().members().iter().any(|v| v.section(x).is_subset_of(&g))
                })
            });
            let induces_given = mu.induced_pretopology() == *t;
            Some(PrebaseCompatibility { members_open_in_product, section_clause, induces_given })
        }
    };
    Ok((mu, compat))
}

// ---- covers and their star calculus ----

/// The section cover `{V[x]}` as a deduplicated family.
pub fn cover_of(v: &Relation) -> Vec<Subset> {
    let mut blocks: Vec<Subset> = (0..v.n()).map(|x| v.section(x)).collect();
    blocks.sort();
    blocks.dedup();
    blocks
}

pub fn is_cover(n: usize, blocks: &[Subset]) -> bool {
    blocks.iter().all(|b| b.n() == n)
        && blocks.iter().fold(Subset::empty(n), |a, b| a.union(b)) == Subset::full(n)
}

/// Union of the blocks meeting `a`.
pub fn star(a: &Subset, cover: &[Subset]) -> Subset {
    let mut out = Subset::empty(a.n());
    for b in cover {
        if b.meets(a) {
            out = out.union(b);
        }
    }
    out
}

/// Every block of `fine` fits in some block of `coarse`.
pub fn refines(fine: &[Subset], coarse: &[Subset]) -> bool {
    fine.iter().all(|b| coarse.iter().any(|a| b.is_subset_of(a)))
}

/// Stars of the fine blocks refine the coarse cover.
pub fn is_star_refinement(
    n: usize,
    fine: &[Subset],
    coarse: &[Subset],
) -> Result<bool, PreunifError> {
    if !is_cover(n, fine) {
        return Err(PreunifError::NotACover { index: 0 });
    }
    if !is_cover(n, coarse) {
        return Err(PreunifError::NotACover { index: 1 });
    }
    Ok(fine
        .iter()
        .all(|b| coarse.iter().any(|a| star(b, fine).is_subset_of(a))))
}

/// A family of covers of one carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverFamily {
    n: usize,
    covers: Vec<Vec<Subset>>,
}

impl CoverFamily {
    pub fn new(n: usize, covers: Vec<Vec<Subset>>) -> Result<Self, PreunifError> {
        if covers.is_empty() {
            return Err(PreunifError::EmptyCoverFamily);
        }
        for (i, c) in covers.iter().enumerate() {
            if !is_cover(n, c) {
                return Err(PreunifError::NotACover { index: i });
            }
        }
        Ok(CoverFamily { n, covers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[Vec<Subset>] {
        &self.covers
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UcReport {
    /// Coarsening closure holds by the membership reading (a cover belongs
    /// when some listed cover refines it), so this is structural.
    pub uc1: bool,
    /// Index of a cover with no star refiner in the family, if any.
    pub uc2: Result<(), usize>,
    /// A point pair no listed cover separates, if any.
    pub uc3: Result<(), (usize, usize)>,
}

impl UcReport {
    pub fn all_hold(&self) -> bool {
        self.uc1 && self.uc2.is_ok() && self.uc3.is_ok()
    }
}

pub fn uc_check(family: &CoverFamily) -> UcReport {
    let n = family.n();
    let covers = family.covers();
    let uc2 = match (0..covers.len()).find(|&i| {
        !covers
            .iter()
            .any(|b| is_star_refinement(n, b, &covers[i]).unwrap_or(false))
    }) {
        None => Ok(()),
        Some(i) => Err(i),
    };
    let mut uc3 = Ok(());
    'pairs: for x in 0..n {
        for y in x + 1..n {
            let separated = covers.iter().any(|c| {
                c.iter().all(|block| !(block.contains(x) && block.contains(y)))
            });
            if !separated {
                uc3 = Err((x, y));
                break 'pairs;
            }
        }
    }
    UcReport { uc1: true, uc2, uc3 }
}

/// The block-square relation of a cover: the union of `A x A`.
pub fn cover_relation(n: usize, cover: &[Subset]) -> Relation {
    let mut r = Relation::empty(n);
    for a in cover {
        r = r.union(&Relation::rect(a, a));
    }
    r
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct CoverCompatibility {
    pub all_blocks_open: bool,
    pub star_clause: bool,
    pub induces_given: bool,
}

/// Family generated by the block-square relations of the covers. Validity
/// rides on the cover conditions: block squares are symmetric, a star
/// refiner squares into the refined cover's relation, and the separating
/// covers pin the intersection to the diagonal.
pub fn generate_from_covers(
    family: &CoverFamily,
    tau: Option<&PreTopology>,
) -> Result<(PreUniformity, Option<CoverCompatibility>), PreunifError> {
    let report = uc_check(family);
    if !report.all_hold() {
        let which = if report.uc2.is_err() { "UC2" } else { "UC3" };
        return Err(PreunifError::CoverConditionFails {
            which: which.to_string(),
            report: Box::new(report),
        });
    }
    let n = family.n();
    let rels: Vec<Relation> =
        family.covers().iter().map(|c| cover_relation(n, c)).collect();
    let mu = PreUniformity::from_members(n, &rels)?;
    debug_assert!(mu.classification().strong);
    let compat = match tau {
        None => None,
        Some(t) => {
            if t.n() != n {
                return Err(PreunifError::CarrierMismatch(t.n(), n));
            }
            let all_blocks_open = family
                .covers()
                .iter()
                .all(|c| c.iter().all(|b| t.is_open(b)));
            let star_clause = (0..n).all(|x| {
                t.opens().filter(|g| g.contains(x)).all(|g| {
                    family
                        .covers()
                        .iter()
                        .any(|c| star(&Subset::singleton(n, x), c).is_subset_of(&g))
                })
            });
            let induces_given = mu.induced_pretopology() == *t;
            Some(CoverCompatibility { all_blocks_open, star_clause, induces_given })
        }
    };
    Ok((mu, compat))
}

// ---- pseudometric generation route ----

/// Half-radius relations `{(x, y) : rho(x, y) < 2^{-i}}` of all the
/// pseudometrics, one per distinct value down to the zero set. The family
/// must separate distinct points somewhere.
pub fn generate_from_pseudometrics(
    metrics: &[Pseudometric],
) -> Result<PreUniformity, PreunifError> {
    let Some(first) = metrics.first() else {
        return Err(PreunifError::EmptyBasis);
    };
    let n = first.n();
    for m in metrics {
        if m.n() != n {
            return Err(PreunifError::CarrierMismatch(m.n(), n));
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if !metrics.iter().any(|m| m.dist(x, y).is_positive()) {
                return Err(PreunifError::NotSeparating(x, y));
            }
        }
    }
    let mut rels = Vec::new();
    for m in metrics {
        rels.extend(m.halving_relations());
    }
    PreUniformity::from_members(n, &rels)
}

/// Partitions of the carrier into open blocks. Kernels of pre-continuous
/// real functions are exactly these: a block is the preimage of a small
/// interval around its value, and any union of open blocks is open.
pub fn open_partitions(tau: &PreTopology) -> Vec<Vec<Subset>> {
    let n = tau.n();
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    fn go(
        tau: &PreTopology,
        remaining: Subset,
        blocks: &mut Vec<Subset>,
        out: &mut Vec<Vec<Subset>>,
    ) {
        if remaining.is_empty() {
            out.push(blocks.clone());
            return;
        }
        let anchor = remaining.points().next().unwrap();
        for bits in 0..1u128 << remaining.n() {
            let b = Subset::from_bits(remaining.n(), bits);
            if b.contains(anchor) && b.is_subset_of(&remaining) && tau.is_open(&b) {
                blocks.push(b);
                go(tau, remaining.minus(&b), blocks, out);
                blocks.pop();
            }
        }
    }
    go(tau, Subset::full(n), &mut blocks, &mut out);
    out
}

/// Family generated by the kernels of all pre-continuous real functions,
/// via their quotient pseudometrics. Distinct points must be split by some
/// open partition, or the pseudometric route's separation check fails.
pub fn function_generated_preuniformity(
    tau: &PreTopology,
) -> Result<PreUniformity, PreunifError> {
    let metrics: Vec<Pseudometric> = open_partitions(tau)
        .iter()
        .map(|p| Pseudometric::from_partition(tau.n(), p).expect("blocks form a partition"))
        .collect();
    generate_from_pseudometrics(&metrics)
}

// ---- pre-uniform continuity ----

/// `(f x f)` pushes some member inside every target member, decided on the
/// bases: images are monotone, so basis witnesses and basis targets cover
/// the general case.
pub fn is_preuniformly_continuous(
    f: &PointMap,
    mu: &PreUniformity,
    nu: &PreUniformity,
) -> Result<bool, PreunifError> {
    if f.src_n() != mu.n() {
        return Err(PreunifError::CarrierMismatch(f.src_n(), mu.n()));
    }
    if f.dst_n() != nu.n() {
        return Err(PreunifError::CarrierMismatch(f.dst_n(), nu.n()));
    }
    Ok(nu.basis().members().iter().all(|target| {
        mu.basis()
            .members()
            .iter()
            .any(|m| f.image_relation(m).is_subset_of(target))
    }))
}

/// A cover of the target carrier belongs to the pre-uniform covers of `nu`
/// iff some basis section cover refines it (smaller members refine more).
pub fn is_preuniform_cover(cover: &[Subset], nu: &PreUniformity) -> bool {
    nu.basis()
        .members()
        .iter()
        .any(|v| refines(&cover_of(v), cover))
}

/// Cover formulation of pre-uniform continuity: preimages of pre-uniform
/// covers are pre-uniform. Quantifies over every cover of the target
/// carrier, so it is for small targets.
pub fn preimage_covers_preuniform(
    f: &PointMap,
    mu: &PreUniformity,
    nu: &PreUniformity,
) -> Result<bool, PreunifError> {
    if f.src_n() != mu.n() {
        return Err(PreunifError::CarrierMismatch(f.src_n(), mu.n()));
    }
    if f.dst_n() != nu.n() {
        return Err(PreunifError::CarrierMismatch(f.dst_n(), nu.n()));
    }
    let m = nu.n();
    let nonempty: Vec<Subset> = (1..1u128 << m).map(|b| Subset::from_bits(m, b)).collect();
    let k = nonempty.len();
    for pick in 1..1u64 << k {
        let cover: Vec<Subset> =
            (0..k).filter(|i| pick >> i & 1 == 1).map(|i| nonempty[i]).collect();
        if !is_cover(m, &cover) || !is_preuniform_cover(&cover, nu) {
            continue;
        }
        let pre: Vec<Subset> = cover.iter().map(|a| f.preimage(a)).collect();
        if !is_preuniform_cover(&pre, mu) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---- coreflection ----

/// Upward closure of all finite intersections: the least family above this
/// one closed under binary intersections. Every axiom witness intersects
/// memberwise, so validity carries over; the intersection of the whole
/// family is unchanged.
pub fn coreflection(mu: &PreUniformity) -> PreUniformity {
    let mut set: BTreeSet<Relation> = mu.basis().members().iter().copied().collect();
    loop {
        let mut grew = false;
        let snapshot: Vec<Relation> = set.iter().copied().collect();
        for a in &snapshot {
            for b in &snapshot {
                if set.insert(a.inter(b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let members: Vec<Relation> = set.into_iter().collect();
    PreUniformity::from_members(mu.n(), &members)
        .expect("finite intersections preserve the axioms")
}

// ---- products ----

/// Pulls a relation on a factor up to the product carrier along one
/// coordinate; the product point `(x, y)` has index `x * n2 + y`.
pub fn lift(r: &Relation, coordinate: usize, n1: usize, n2: usize) -> Relation {
    let m = n1 * n2;
    debug_assert!(m <= MAX_RELATION_POINTS);
    let mut out = Relation::empty(m);
    for p in 0..m {
        for q in 0..m {
            let (x1, y1) = (p / n2, p % n2);
            let (x2, y2) = (q / n2, q % n2);
            let related = match coordinate {
                0 => r.contains(x1, x2),
                _ => r.contains(y1, y2),
            };
            if related {
                out = out.with_pair(p, q);
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductResult {
    pub product: PreUniformity,
    pub projections_continuous: (bool, bool),
    /// Coreflection of the product equals the intersection-closed family
    /// generated by lifted coreflection members.
    pub coreflection_matches: bool,
}

/// Coarsest family making both projections pre-uniformly continuous: the
/// upward closure of single-coordinate cylinders. Any family with
/// continuous projections contains some member inside each cylinder, hence
/// the cylinder itself, hence everything here.
pub fn product(mu1: &PreUniformity, mu2: &PreUniformity) -> Result<ProductResult, PreunifError> {
    let (n1, n2) = (mu1.n(), mu2.n());
    let m = n1 * n2;
    if m > MAX_RELATION_POINTS {
        return Err(PreunifError::CarrierTooLarge(m, MAX_RELATION_POINTS));
    }
    let mut members = Vec::new();
    for b in mu1.basis().members() {
        members.push(lift(b, 0, n1, n2));
    }
    for b in mu2.basis().members() {
        members.push(lift(b, 1, n1, n2));
    }
    let product = PreUniformity::from_members(m, &members)?;

    let (p1, p2) = pretop::projections(n1, n2);
    let projections_continuous = (
        is_preuniformly_continuous(&p1, &product, mu1)?,
        is_preuniformly_continuous(&p2, &product, mu2)?,
    );

    let mut lifted_star = Vec::new();
    for b in coreflection(mu1).basis().members() {
        lifted_star.push(lift(b, 0, n1, n2));
    }
    for b in coreflection(mu2).basis().members() {
        lifted_star.push(lift(b, 1, n1, n2));
    }
    let star_of_product = coreflection(&product);
    let product_of_stars = coreflection(&PreUniformity::from_members(m, &lifted_star)?);
    let coreflection_matches = star_of_product == product_of_stars;

    Ok(ProductResult { product, projections_continuous, coreflection_matches })
}

// ---- total boundedness and square covers ----

/// Smallest set meeting every row of `u`: `a` works when each `u[x]`
/// meets it. On a finite carrier the whole carrier always works.
pub fn min_dense_set(u: &Relation) -> Subset {
    let n = u.n();
    let mut best = Subset::full(n);
    for bits in 0..1u128 << n {
        let a = Subset::from_bits(n, bits);
        if a.card() < best.card() && (0..n).all(|x| u.section(x).meets(&a)) {
            best = a;
        }
    }
    best
}

/// Every finite family is totally bounded; the content is the minimum
/// witness per basis member.
pub fn totally_bounded(mu: &PreUniformity) -> (bool, Vec<(Relation, Subset)>) {
    let witnesses: Vec<(Relation, Subset)> = mu
        .basis()
        .members()
        .iter()
        .map(|&u| (u, min_dense_set(&u)))
        .collect();
    (true, witnesses)
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SquareCoverRoute {
    /// Blocks are two-sided sections of a member whose square fits in the
    /// target.
    SelfComposingWitness,
    /// Singleton blocks; always enough on a finite carrier by U1.
    Singletons,
}

/// A finite cover whose block squares sit inside `u`. With a member W
/// squaring into `u`, the blocks `(W n W^{-1})[x]` work: two points of a
/// block pass through x. Otherwise singletons do, so none is never
/// returned for a valid family; the route records which argument applied.
pub fn square_cover(
    mu: &PreUniformity,
    u: &Relation,
) -> Option<(Vec<Subset>, SquareCoverRoute)> {
    let n = mu.n();
    if u.n() != n || !mu.member(u) {
        return None;
    }
    if let Some(w) = mu
        .basis()
        .members()
        .iter()
        .find(|w| w.compose(w).is_subset_of(u))
    {
        let sym = w.inter(&w.inverse());
        let blocks = cover_of(&sym);
        if is_cover(n, &blocks) && blocks.iter().all(|a| Relation::rect(a, a).is_subset_of(u)) {
            return Some((blocks, SquareCoverRoute::SelfComposingWitness));
        }
    }
    let singles: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
    debug_assert!(singles.iter().all(|a| Relation::rect(a, a).is_subset_of(u)));
    Some((singles, SquareCoverRoute::Singletons))
}

// ---- exhaustive enumeration ----

/// Every valid family on `n` points, each exactly once (by its basis).
/// Minimal members of a valid family are transitive (a composition witness
/// below a minimal member collapses onto it) and contain the diagonal, so
/// bases are exactly the antichains of diagonal-preserving transitive
/// relations that pass the axioms.
pub fn enumerate_valid(n: usize) -> Vec<PreUniformity> {
    let pool = preorders(n);
    let mut out = Vec::new();
    let mut chain = Vec::new();
    fn go(
        pool: &[Relation],
        start: usize,
        chain: &mut Vec<Relation>,
        n: usize,
        out: &mut Vec<PreUniformity>,
    ) {
        if !chain.is_empty() {
            if let Ok(mu) = PreUniformity::from_members(n, chain) {
                out.push(mu);
            }
        }
        for i in start..pool.len() {
            let cand = pool[i];
            if chain
                .iter()
                .any(|c| c.is_subset_of(&cand) || cand.is_subset_of(c))
            {
                continue;
            }
            chain.push(cand);
            go(pool, i + 1, chain, n, out);
            chain.pop();
        }
    }
    go(&pool, 0, &mut chain, n, &mut out);
    out
}

// ---- the finest compatible family on a pre-topology ----

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UniversalOutcome {
    /// No compatible family can exist on a non-T0 pre-topology.
    NotT0,
    /// No enumerated basis induced the given pre-topology.
    NoneFound { complete: bool },
    /// Least upper bound of every compatible family found.
    Found { mu: PreUniformity, complete: bool },
}

/// Bounded exhaustive sweep for the finest compatible family. Valid bases
/// are antichains of diagonal-preserving transitive members (a minimal
/// member composes below itself only if transitive, and the composition
/// axiom collapses on an antichain), so candidates are preorder antichains;
/// `complete` reports whether the size bound covered them all.
pub fn universal_preuniformity(tau: &PreTopology, basis_size_bound: usize) -> UniversalOutcome {
    let n = tau.n();
    if !tau.separation_profile().t0 {
        return UniversalOutcome::NotT0;
    }
    let pool = preorders(n);
    let mut compatibles: Vec<PreUniformity> = Vec::new();
    let mut complete = true;

    // depth-first over antichains in sorted order
    fn extend(
        pool: &[Relation],
        start: usize,
        chain: &mut Vec<Relation>,
        bound: usize,
        complete: &mut bool,
        tau: &PreTopology,
        out: &mut Vec<PreUniformity>,
    ) {
        if !chain.is_empty() {
            if let Ok(mu) = PreUniformity::from_members(tau.n(), chain) {
                if mu.basis().len() == chain.len() && mu.induced_pretopology() == *tau {
                    out.push(mu);
                }
            }
        }
        if chain.len() == bound {
            // would any antichain extension exist past the bound?
            let extendable = (start..pool.len()).any(|i| {
                chain
                    .iter()
                    .all(|c| !c.is_subset_of(&pool[i]) && !pool[i].is_subset_of(c))
            });
            if extendable {
                *complete = false;
            }
            return;
        }
        for i in start..pool.len() {
            let cand = pool[i];
            if chain
                .iter()
                .any(|c| c.is_subset_of(&cand) || cand.is_subset_of(c))
            {
                continue;
            }
            chain.push(cand);
            extend(pool, i + 1, chain, bound, complete, tau, out);
            chain.pop();
        }
    }
    let mut chain = Vec::new();
    extend(&pool, 0, &mut chain, basis_size_bound, &mut complete, tau, &mut compatibles);

    if compatibles.is_empty() {
        return UniversalOutcome::NoneFound { complete };
    }
    let mu = sup(&compatibles).expect("non-empty compatible family");
    assert_eq!(
        mu.induced_pretopology(),
        *tau,
        "sup of compatible families stays compatible"
    );
    UniversalOutcome::Found { mu, complete }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    fn diag_plus(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::diagonal(n).union(&rel(n, pairs))
    }

    /// Mutually inverse three-point members whose compositions blow up.
    fn cyclic_basis() -> EntourageBasis {
        let u1 = diag_plus(3, &[(0, 1), (1, 2), (2, 0)]);
        let u2 = diag_plus(3, &[(0, 2), (1, 0), (2, 1)]);
        EntourageBasis::new(3, &[u1, u2]).unwrap()
    }

    /// The two-point strong family with one-way members.
    fn two_point_strong() -> PreUniformity {
        let b1 = diag_plus(2, &[(0, 1)]);
        let b2 = diag_plus(2, &[(1, 0)]);
        PreUniformity::from_members(2, &[b1, b2]).unwrap()
    }

    /// Two crossing equivalence relations on three points; the recurring
    /// valid non-discrete family.
    fn crossing_equivalences() -> PreUniformity {
        let p = diag_plus(3, &[(0, 1), (1, 0)]);
        let r = diag_plus(3, &[(0, 2), (2, 0)]);
        PreUniformity::from_members(3, &[p, r]).unwrap()
    }

    /// Every valid family on two points, by brute force over the
    /// diagonal-containing relations.
    fn all_valid_n2() -> Vec<PreUniformity> {
        let pool: Vec<Relation> = (0..16u128)
            .map(|b| Relation::from_bits(2, b))
            .filter(|r| r.contains_diagonal())
            .collect();
        let mut out: Vec<PreUniformity> = Vec::new();
        for pick in 1..1u32 << pool.len() {
            let members: Vec<Relation> = (0..pool.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| pool[i])
                .collect();
            if let Ok(mu) = PreUniformity::from_members(2, &members) {
                if !out.contains(&mu) {
                    out.push(mu);
                }
            }
        }
        out
    }

    #[test]
    fn diagonal_basis_is_uniform() {
        let mu = PreUniformity::discrete(3);
        let c = mu.classification();
        assert!(c.preuniformity && c.symmetric && c.strong && c.almost_uniform && c.uniform);
        assert!(mu.report().u6.holds);
    }

    #[test]
    fn cyclic_basis_fails_composition_with_full_square_witness() {
        let report = check_axioms(&cyclic_basis());
        assert!(report.u1.holds);
        assert!(report.u2.holds);
        assert!(report.u5.holds);
        assert!(!report.u3.holds);
        assert!(!report.classification.preuniformity);
        match report.u3.witness.as_ref().unwrap() {
            AxiomWitness::NoCompositionBelow { compositions, .. } => {
                assert_eq!(compositions.as_slice(), &[Relation::full(3); 4]);
            }
            w => panic!("wrong witness {w:?}"),
        }
    }

    #[test]
    fn two_point_strong_classification() {
        let mu = two_point_strong();
        let c = mu.classification();
        assert!(c.preuniformity && c.strong);
        assert!(!c.symmetric && !c.almost_uniform && !c.uniform);
        assert!(matches!(
            mu.report().u2_prime.witness,
            Some(AxiomWitness::NoSymmetricBelow { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let full = Relation::full(3);
        assert!(cyclic_basis().member(&full));
        assert!(PreUniformity::discrete(3).member(&Relation::diagonal(3)));
        assert!(!cyclic_basis().member(&Relation::diagonal(3)));
    }

    #[test]
    fn induced_pretopology_of_cyclic_basis() {
        let tau = cyclic_basis().induced_pretopology();
        assert_eq!(tau.open_masks(), &[0b000, 0b011, 0b101, 0b110, 0b111]);
        assert!(!tau.is_discrete());
        let p = tau.separation_profile();
        assert!(p.t1 && !p.t2);
    }

    #[test]
    fn induced_pretopology_trivial_cases() {
        assert!(PreUniformity::discrete(3).induced_pretopology().is_discrete());
        let coarse = EntourageBasis::new(2, &[Relation::full(2)]).unwrap();
        assert_eq!(coarse.induced_pretopology(), PreTopology::indiscrete(2));
    }

    #[test]
    fn induced_pretopology_of_crossing_equivalences() {
        let tau = crossing_equivalences().induced_pretopology();
        assert_eq!(
            tau.open_masks(),
            &[0b000, 0b010, 0b011, 0b100, 0b101, 0b110, 0b111]
        );
        let p = tau.separation_profile();
        assert!(p.t1 && p.t2 && p.regular && p.completely_regular);
        assert!(!tau.is_discrete());
    }

    #[test]
    fn t0_criterion_cases() {
        let coarse = EntourageBasis::new(2, &[Relation::full(2)]).unwrap();
        assert_eq!(t0_criterion(&coarse), (false, false));
        assert_eq!(t0_criterion(&EntourageBasis::discrete(2)), (true, true));
    }

    #[test]
    fn t0_criterion_sides_agree_on_u1_to_u4_families_n2() {
        let pool: Vec<Relation> = (0..16u128)
            .map(|b| Relation::from_bits(2, b))
            .filter(|r| r.contains_diagonal())
            .collect();
        for pick in 1..1u32 << pool.len() {
            let members: Vec<Relation> = (0..pool.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| pool[i])
                .collect();
            let basis = EntourageBasis::new(2, &members).unwrap();
            let report = check_axioms(&basis);
            if report.u1.holds && report.u2.holds && report.u3.holds {
                let (t0, diag) = t0_criterion(&basis);
                assert_eq!(t0, diag, "criterion split on {:?}", basis.members());
            }
        }
    }

    #[test]
    fn neighborhood_prebase_values() {
        assert_eq!(
            neighborhood_prebase(&PreUniformity::discrete(2), 0),
            vec![Subset::from_points(2, [0]).unwrap()]
        );
        let mu = two_point_strong();
        assert_eq!(
            neighborhood_prebase(&mu, 0),
            vec![
                Subset::from_points(2, [0]).unwrap(),
                Subset::from_points(2, [0, 1]).unwrap(),
            ]
        );
    }

    #[test]
    fn neighborhood_prebase_is_an_open_prebase_everywhere_n2() {
        for mu in all_valid_n2() {
            let tau = mu.induced_pretopology();
            for x in 0..2 {
                let fam = neighborhood_prebase(&mu, x);
                for s in &fam {
                    assert!(tau.is_open(s));
                    assert!(s.contains(x));
                }
                for g in tau.opens().filter(|g| g.contains(x)) {
                    assert!(fam.iter().any(|s| s.is_subset_of(&g)));
                }
            }
        }
    }

    #[test]
    fn entourage_prebases_on_discrete_and_invalid() {
        let ep = entourage_prebases(&PreUniformity::discrete(2)).unwrap();
        assert!(ep.closed_is_prebase && ep.open_is_prebase);
        assert!(PreUniformity::new(cyclic_basis()).is_err());
    }

    #[test]
    fn entourage_prebase_verdicts_match_materialized_n2() {
        for mu in all_valid_n2() {
            let ep = entourage_prebases(&mu).unwrap();
            let (c, o) = entourage_prebase_verdicts(&mu).unwrap();
            assert_eq!(ep.closed_is_prebase, c);
            assert_eq!(ep.open_is_prebase, o);
            assert!(c && o);
        }
    }

    #[test]
    fn weight_values() {
        assert_eq!(PreUniformity::discrete(4).weight(), 1);
        let mu = two_point_strong();
        assert_eq!(mu.weight(), 2);
        let s = sup(&[mu.clone(), mu.clone()]).unwrap();
        assert_eq!(s.weight(), mu.weight());
    }

    #[test]
    fn comparison_cases() {
        let d = PreUniformity::discrete(2);
        let m = two_point_strong();
        assert_eq!(compare(&d, &m), Ok(Comparison::Finer));
        assert_eq!(compare(&m, &d), Ok(Comparison::Coarser));
        assert_eq!(compare(&m, &m), Ok(Comparison::Equal));

        let p = diag_plus(3, &[(0, 1), (1, 0)]);
        let q = diag_plus(3, &[(1, 2), (2, 1)]);
        let r = diag_plus(3, &[(0, 2), (2, 0)]);
        let mu_pr = PreUniformity::from_members(3, &[p, r]).unwrap();
        let mu_pq = PreUniformity::from_members(3, &[p, q]).unwrap();
        assert_eq!(compare(&mu_pr, &mu_pq), Ok(Comparison::Incomparable));
    }

    #[test]
    fn finer_family_induces_finer_pretopology_n2() {
        let all = all_valid_n2();
        for a in &all {
            for b in &all {
                if compare(a, b) == Ok(Comparison::Finer) {
                    let ta = a.induced_pretopology();
                    let tb = b.induced_pretopology();
                    for m in tb.open_masks() {
                        assert!(ta.open_masks().contains(m));
                    }
                }
            }
        }
    }

    #[test]
    fn sup_is_least_upper_bound_n2() {
        let all = all_valid_n2();
        for a in &all {
            assert_eq!(&sup(&[a.clone()]).unwrap(), a);
            for b in &all {
                let s = sup(&[a.clone(), b.clone()]).unwrap();
                assert!(matches!(
                    compare(&s, a).unwrap(),
                    Comparison::Finer | Comparison::Equal
                ));
                assert!(matches!(
                    compare(&s, b).unwrap(),
                    Comparison::Finer | Comparison::Equal
                ));
                for c in &all {
                    let above_both = matches!(
                        compare(c, a).unwrap(),
                        Comparison::Finer | Comparison::Equal
                    ) && matches!(
                        compare(c, b).unwrap(),
                        Comparison::Finer | Comparison::Equal
                    );
                    if above_both {
                        assert!(matches!(
                            compare(c, &s).unwrap(),
                            Comparison::Finer | Comparison::Equal
                        ));
                    }
                }
            }
        }
        assert_eq!(sup(&[]).unwrap_err(), PreunifError::EmptyInput);
    }

    #[test]
    fn sup_with_discrete_absorbs() {
        let d = PreUniformity::discrete(2);
        let m = two_point_strong();
        assert_eq!(sup(&[d.clone(), m]).unwrap(), d);
    }

    #[test]
    fn sup_induces_join_pretopology() {
        // the induced family of the sup is the union closure of the factors
        let p = diag_plus(3, &[(0, 1), (1, 0)]);
        let q = diag_plus(3, &[(1, 2), (2, 1)]);
        let r = diag_plus(3, &[(0, 2), (2, 0)]);
        let mu_pr = PreUniformity::from_members(3, &[p, r]).unwrap();
        let mu_pq = PreUniformity::from_members(3, &[p, q]).unwrap();
        let s = sup(&[mu_pr.clone(), mu_pq.clone()]).unwrap();
        let joined: Vec<Subset> = mu_pr
            .induced_pretopology()
            .opens()
            .chain(mu_pq.induced_pretopology().opens())
            .collect();
        let lub = pretop::generate(3, &joined).unwrap();
        assert_eq!(s.induced_pretopology(), lub);
    }

    #[test]
    fn generate_from_prebase_examples() {
        let (mu, _) = generate_from_prebase(2, &[Relation::diagonal(2)], None).unwrap();
        assert_eq!(mu, PreUniformity::discrete(2));

        let err = generate_from_prebase(3, cyclic_basis().members(), None).unwrap_err();
        match err {
            PreunifError::NotPreUniformity { failed, report } => {
                assert_eq!(failed, vec!["U3".to_string()]);
                assert!(matches!(
                    report.u3.witness,
                    Some(AxiomWitness::NoCompositionBelow { .. })
                ));
            }
            e => panic!("wrong error {e}"),
        }

        let b1 = diag_plus(2, &[(0, 1)]);
        let b2 = diag_plus(2, &[(1, 0)]);
        let (mu, _) = generate_from_prebase(2, &[b1, b2], None).unwrap();
        assert!(mu.classification().strong);
    }

    #[test]
    fn prebase_compatibility_of_crossing_equivalences() {
        let mu = crossing_equivalences();
        let tau = mu.induced_pretopology();
        let (_, compat) = generate_from_prebase(3, mu.basis().members(), Some(&tau)).unwrap();
        let compat = compat.unwrap();
        assert!(compat.section_clause);
        assert!(compat.induces_given);
        assert!(compat.members_open_in_product);
    }

    #[test]
    fn cover_calculus_basics() {
        let singles = cover_of(&Relation::diagonal(3));
        assert_eq!(
            singles,
            (0..3).map(|x| Subset::singleton(3, x)).collect::<Vec<_>>()
        );
        let s0 = Subset::singleton(3, 0);
        assert_eq!(star(&s0, &singles), s0);
        assert!(is_cover(3, &singles));
        assert!(is_star_refinement(3, &singles, &singles).unwrap());
        assert!(is_star_refinement(3, &[s0], &singles).is_err());
    }

    #[test]
    fn star_refinement_from_symmetric_cube() {
        // whenever a symmetric member cubes into another, the section
        // covers star-refine
        let mu = crossing_equivalences();
        for v in mu.basis().members() {
            for w in mu.basis().members() {
                if w.is_symmetric() && w.compose(w).compose(w).is_subset_of(v) {
                    assert!(is_star_refinement(3, &cover_of(w), &cover_of(v)).unwrap());
                }
            }
        }
    }

    #[test]
    fn uc_check_and_generation() {
        let n = 3;
        let singles: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
        let fam = CoverFamily::new(n, vec![singles]).unwrap();
        assert!(uc_check(&fam).all_hold());
        let (mu, _) = generate_from_covers(&fam, None).unwrap();
        assert_eq!(mu, PreUniformity::discrete(n));

        let whole = CoverFamily::new(2, vec![vec![Subset::full(2)]]).unwrap();
        let report = uc_check(&whole);
        assert_eq!(report.uc3, Err((0, 1)));
        assert!(matches!(
            generate_from_covers(&whole, None),
            Err(PreunifError::CoverConditionFails { which, .. }) if which == "UC3"
        ));
    }

    #[test]
    fn cover_relations_are_symmetric() {
        let n = 3;
        let nonempty: Vec<Subset> = (1..1u128 << n).map(|b| Subset::from_bits(n, b)).collect();
        for pick in 1..1u32 << nonempty.len() {
            let blocks: Vec<Subset> = (0..nonempty.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| nonempty[i])
                .collect();
            if is_cover(n, &blocks) {
                assert!(cover_relation(n, &blocks).is_symmetric());
            }
        }
    }

    #[test]
    fn cover_generation_from_partition_covers() {
        // the two crossing two-block partitions generate the crossing
        // equivalence family
        let n = 3;
        let part_p = vec![
            Subset::from_points(n, [0, 1]).unwrap(),
            Subset::from_points(n, [2]).unwrap(),
        ];
        let part_r = vec![
            Subset::from_points(n, [0, 2]).unwrap(),
            Subset::from_points(n, [1]).unwrap(),
        ];
        let fam = CoverFamily::new(n, vec![part_p, part_r]).unwrap();
        let (mu, compat) =
            generate_from_covers(&fam, Some(&crossing_equivalences().induced_pretopology()))
                .unwrap();
        assert_eq!(mu, crossing_equivalences());
        let compat = compat.unwrap();
        assert!(compat.all_blocks_open && compat.star_clause && compat.induces_given);
    }

    #[test]
    fn preuniform_continuity_examples() {
        let mu = crossing_equivalences();
        let id = PointMap::identity(3);
        assert_eq!(is_preuniformly_continuous(&id, &mu, &mu), Ok(true));

        // one-way strong family into the diagonal family: pre-continuous
        // between the (discrete) induced pre-topologies, but the diagonal
        // has no member below it on the source side
        let m = two_point_strong();
        let d = PreUniformity::discrete(2);
        let id2 = PointMap::identity(2);
        assert!(m.induced_pretopology().is_discrete());
        assert_eq!(is_preuniformly_continuous(&id2, &m, &d), Ok(false));

        let konst = PointMap::new(3, 1, vec![0, 0, 0]).unwrap();
        assert_eq!(
            is_preuniformly_continuous(&konst, &mu, &PreUniformity::discrete(1)),
            Ok(true)
        );
    }

    #[test]
    fn preuniform_continuity_implies_precontinuity_n2() {
        let all = all_valid_n2();
        for a in &all {
            for b in &all {
                for f in PointMap::all(2, 2) {
                    if is_preuniformly_continuous(&f, a, b).unwrap() {
                        assert!(pretop::is_precontinuous(
                            &f,
                            &a.induced_pretopology(),
                            &b.induced_pretopology()
                        )
                        .unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cover_route_matches_direct_route_n2() {
        let all = all_valid_n2();
        for a in &all {
            for b in &all {
                for f in PointMap::all(2, 2) {
                    assert_eq!(
                        is_preuniformly_continuous(&f, a, b).unwrap(),
                        preimage_covers_preuniform(&f, a, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn coreflection_values() {
        let d = PreUniformity::discrete(2);
        assert_eq!(coreflection(&d), d);
        assert_eq!(coreflection(&two_point_strong()), PreUniformity::discrete(2));
        assert_eq!(coreflection(&crossing_equivalences()), PreUniformity::discrete(3));
    }

    #[test]
    fn coreflection_is_finer_uniform_and_keeps_the_intersection() {
        for mu in all_valid_n2() {
            let star = coreflection(&mu);
            assert!(star.classification().uniform);
            assert!(matches!(
                compare(&star, &mu).unwrap(),
                Comparison::Finer | Comparison::Equal
            ));
            assert_eq!(star.basis().intersection(), mu.basis().intersection());
        }
    }

    #[test]
    fn product_of_two_point_families() {
        let m = two_point_strong();
        let res = product(&m, &m).unwrap();
        assert_eq!(res.projections_continuous, (true, true));
        assert!(res.coreflection_matches);
        assert_eq!(res.product.n(), 4);
        assert_eq!(res.product.weight(), 4);

        let d = PreUniformity::discrete(2);
        let dd = product(&d, &d).unwrap();
        assert!(coreflection(&dd.product).induced_pretopology().is_discrete());
    }

    #[test]
    fn product_is_coarsest_with_continuous_projections_n2() {
        let all = all_valid_n2();
        let (p1, p2) = pretop::projections(2, 2);
        for a in &all {
            for b in &all {
                let pr = product(a, b).unwrap().product;
                // any four-point family with continuous projections is finer
                let four = vec![
                    PreUniformity::discrete(4),
                    pr.clone(),
                    sup(&[pr.clone(), PreUniformity::discrete(4)]).unwrap(),
                ];
                for nu in four {
                    if is_preuniformly_continuous(&p1, &nu, a).unwrap()
                        && is_preuniformly_continuous(&p2, &nu, b).unwrap()
                    {
                        assert!(matches!(
                            compare(&nu, &pr).unwrap(),
                            Comparison::Finer | Comparison::Equal
                        ));
                    }
                }
            }
        }
    }

    #[test]
    fn dense_sets_and_square_covers() {
        let d = PreUniformity::discrete(3);
        let (tb, wit) = totally_bounded(&d);
        assert!(tb);
        assert_eq!(wit[0].1, Subset::full(3));

        let (cover, route) = square_cover(&d, &Relation::diagonal(3)).unwrap();
        assert_eq!(route, SquareCoverRoute::SelfComposingWitness);
        assert_eq!(cover, cover_of(&Relation::diagonal(3)));

        let mu = crossing_equivalences();
        let p = mu.basis().members()[0];
        let (_, wit) = totally_bounded(&mu);
        let min_p = wit.iter().find(|(u, _)| *u == p).unwrap().1;
        assert_eq!(min_p.card(), 2);

        let (cover, route) = square_cover(&mu, &p).unwrap();
        assert_eq!(route, SquareCoverRoute::SelfComposingWitness);
        assert!(is_cover(3, &cover));
        for a in &cover {
            assert!(Relation::rect(a, a).is_subset_of(&p));
        }
    }

    #[test]
    fn square_cover_always_exists_for_members_n2() {
        for mu in all_valid_n2() {
            for b in mu.basis().members() {
                assert!(square_cover(&mu, b).is_some());
            }
        }
    }

    #[test]
    fn universal_family_on_two_points() {
        match universal_preuniformity(&PreTopology::discrete(2), 4) {
            UniversalOutcome::Found { mu, complete } => {
                assert!(complete);
                assert_eq!(mu, PreUniformity::discrete(2));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
        assert_eq!(
            universal_preuniformity(&PreTopology::indiscrete(2), 4),
            UniversalOutcome::NotT0
        );
        // T0 but not inducible: the one-sided two-point family
        let sier = PreTopology::from_masks(2, vec![0b00, 0b01, 0b11]).unwrap();
        assert!(matches!(
            universal_preuniformity(&sier, 4),
            UniversalOutcome::NoneFound { complete: true }
        ));
    }

    #[test]
    fn universal_family_is_the_sup_of_compatibles_n2() {
        // on the discrete two-point family, every valid family inducing it
        // sits below the reported universal one
        let tau = PreTopology::discrete(2);
        let UniversalOutcome::Found { mu: uni, .. } = universal_preuniformity(&tau, 4) else {
            panic!("expected a universal family");
        };
        for mu in all_valid_n2() {
            if mu.induced_pretopology() == tau {
                assert!(matches!(
                    compare(&uni, &mu).unwrap(),
                    Comparison::Finer | Comparison::Equal
                ));
            }
        }
    }

    #[test]
    fn antichain_enumeration_matches_brute_force_n2() {
        let listed = enumerate_valid(2);
        let brute = all_valid_n2();
        assert_eq!(listed.len(), brute.len());
        for mu in &listed {
            assert!(brute.contains(mu));
        }
    }

    #[test]
    fn universal_family_on_crossing_topology() {
        let tau = crossing_equivalences().induced_pretopology();
        match universal_preuniformity(&tau, 29) {
            UniversalOutcome::Found { mu, complete } => {
                assert!(complete);
                assert_eq!(mu.induced_pretopology(), tau);
                assert!(matches!(
                    compare(&mu, &crossing_equivalences()).unwrap(),
                    Comparison::Finer | Comparison::Equal
                ));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
    }

    #[test]
    fn valid_two_point_families_are_exactly_two() {
        let all = all_valid_n2();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&PreUniformity::discrete(2)));
        assert!(all.contains(&two_point_strong()));
    }

    #[test]
    fn pseudometric_generation_examples() {
        let mu = generate_from_pseudometrics(&[Pseudometric::discrete(3)]).unwrap();
        assert_eq!(mu, PreUniformity::discrete(3));
        assert!(mu.classification().uniform);

        assert_eq!(
            generate_from_pseudometrics(&[Pseudometric::zero(2)]).unwrap_err(),
            PreunifError::NotSeparating(0, 1)
        );

        // the two crossing block metrics rebuild the crossing family
        let p_blocks = vec![
            Subset::from_points(3, [0, 1]).unwrap(),
            Subset::from_points(3, [2]).unwrap(),
        ];
        let r_blocks = vec![
            Subset::from_points(3, [0, 2]).unwrap(),
            Subset::from_points(3, [1]).unwrap(),
        ];
        let mu = generate_from_pseudometrics(&[
            Pseudometric::from_partition(3, &p_blocks).unwrap(),
            Pseudometric::from_partition(3, &r_blocks).unwrap(),
        ])
        .unwrap();
        assert_eq!(mu, crossing_equivalences());
    }

    #[test]
    fn open_partition_counts() {
        assert_eq!(open_partitions(&PreTopology::indiscrete(2)).len(), 1);
        assert_eq!(open_partitions(&PreTopology::discrete(2)).len(), 2);
        let tau = crossing_equivalences().induced_pretopology();
        assert_eq!(open_partitions(&tau).len(), 3);
    }

    #[test]
    fn function_generated_family_examples() {
        let crossing = crossing_equivalences();
        let tau = crossing.induced_pretopology();
        let mu = function_generated_preuniformity(&tau).unwrap();
        assert_eq!(mu, crossing);
        assert_eq!(mu.induced_pretopology(), tau);

        assert_eq!(
            function_generated_preuniformity(&PreTopology::discrete(2)).unwrap(),
            PreUniformity::discrete(2)
        );

        let sierpinski = PreTopology::from_masks(2, vec![0b00, 0b01, 0b11]).unwrap();
        assert_eq!(
            function_generated_preuniformity(&sierpinski).unwrap_err(),
            PreunifError::NotSeparating(0, 1)
        );
    }
}
