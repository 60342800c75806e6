//! Nearness structures on the power set of a finite carrier.
//!
//! A near-structure stores one bit per ordered pair of subsets: `A` near
//! `B` or `A` far from `B`. The type enforces only the two structural
//! rules (symmetry, and nearness growing with either side); the full
//! axiom sweep PP1 through PP6 lives in [`check_pp_axioms`], so candidate
//! structures that break an axiom can still be built and inspected.
//!
//! The module carries the induced closure operator and pre-topology, the
//! translations to and from entourage families and the neighborhood
//! relation `A ≪ B`, the coarse totally bounded family built from far
//! pairs, sups, the finest structure compatible with a normal Hausdorff
//! pre-topology, nearness-respecting covers, subspaces, and an exhaustive
//! enumeration for small carriers.

use thiserror::Error;

use crate::pretop::{PreTopology, PretopError};
use crate::preunif::{self, EntourageBasis, PreUniformity, PreunifError};
use crate::relcore::{Relation, Subset};

/// Largest carrier for near-structures; the table is square in the number
/// of subsets, so it is kept deliberately small.
pub const MAX_PREPROX_POINTS: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum PreproxError {
    #[error("carrier would need {0} points; at most {1} are supported")]
    CarrierTooLarge(usize, usize),
    #[error("carrier size mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("nearness is not symmetric at ({0:?}, {1:?})")]
    Asymmetric(Subset, Subset),
    #[error("nearness of ({0:?}, {1:?}) is lost at the larger ({0:?}, {2:?})")]
    NotUpwardClosed(Subset, Subset, Subset),
    #[error("not a pre-proximity: {} fails", failed.join(", "))]
    NotPreProximity { failed: Vec<String>, report: Box<PpReport> },
    #[error("not a neighborhood relation: {} fails", failed.join(", "))]
    NotANbhdRelation { failed: Vec<String>, report: Box<PsiReport> },
    #[error("sup of an empty family")]
    EmptyFamily,
    #[error("points {0} and {1} admit no disjoint open sets")]
    NotHausdorff(usize, usize),
    #[error("closed sets {0:?} and {1:?} admit no disjoint open supersets")]
    NotNormal(Subset, Subset),
    #[error("the blocks do not cover the carrier; {missing} is left out")]
    DoesNotCover { missing: usize },
    #[error("a subspace needs a non-empty point set")]
    EmptySubspace,
    #[error(transparent)]
    Preunif(#[from] PreunifError),
    #[error(transparent)]
    Pretop(#[from] PretopError),
}

/// A symmetric nearness predicate on subsets, upward closed in both
/// arguments. Row `a` holds one bit per partner mask `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreProximity {
    n: usize,
    rows: Vec<u128>,
}

impl PreProximity {
    /// Builds the table from a predicate and validates the structural
    /// rules: symmetry, and preservation of nearness when the second
    /// argument grows (with symmetry that covers the first as well).
    pub fn from_fn<F>(n: usize, mut near: F) -> Result<Self, PreproxError>
    where
        F: FnMut(&Subset, &Subset) -> bool,
    {
        if n > MAX_PREPROX_POINTS {
            return Err(PreproxError::CarrierTooLarge(n, MAX_PREPROX_POINTS));
        }
        let s = 1usize << n;
        let mut rows = vec![0u128; s];
        for a in 0..s {
            let sa = Subset::from_bits(n, a as u128);
            for b in 0..s {
                if near(&sa, &Subset::from_bits(n, b as u128)) {
                    rows[a] |= 1 << b;
                }
            }
        }
        for a in 0..s {
            for b in 0..s {
                if rows[a] >> b & 1 != rows[b] >> a & 1 {
                    return Err(PreproxError::Asymmetric(
                        Subset::from_bits(n, a as u128),
                        Subset::from_bits(n, b as u128),
                    ));
                }
            }
        }
        for a in 0..s {
            for b in 0..s {
                if rows[a] >> b & 1 == 0 {
                    continue;
                }
                for p in 0..n {
                    let c = b | 1 << p;
                    if rows[a] >> c & 1 == 0 {
                        return Err(PreproxError::NotUpwardClosed(
                            Subset::from_bits(n, a as u128),
                            Subset::from_bits(n, b as u128),
                            Subset::from_bits(n, c as u128),
                        ));
                    }
                }
            }
        }
        Ok(PreProximity { n, rows })
    }

    /// Overlap nearness: `A` near `B` exactly when they intersect. The
    /// finest structure on the carrier.
    pub fn discrete(n: usize) -> Self {
        PreProximity::from_fn(n, |a, b| a.meets(b)).expect("overlap is symmetric and monotone")
    }

    /// The would-be coarsest structure: near exactly when both sides are
    /// non-empty. Structurally fine but fails the singleton axiom on two
    /// or more points, which [`check_pp_axioms`] reports.
    pub fn nonempty_pairs(n: usize) -> Self {
        PreProximity::from_fn(n, |a, b| !a.is_empty() && !b.is_empty())
            .expect("non-emptiness is symmetric and monotone")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of subsets of the carrier, the side length of the table.
    pub fn subset_count(&self) -> usize {
        1 << self.n
    }

    pub fn near(&self, a: &Subset, b: &Subset) -> bool {
        self.near_masks(a.bits(), b.bits())
    }

    pub fn far(&self, a: &Subset, b: &Subset) -> bool {
        !self.near(a, b)
    }

    pub fn near_masks(&self, a: u128, b: u128) -> bool {
        self.rows[a as usize] >> b & 1 == 1
    }

    /// Fewer near pairs means finer; equal carriers assumed.
    pub fn is_finer_than(&self, other: &PreProximity) -> bool {
        assert_eq!(self.n, other.n, "carriers must match");
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// `{x : {x} near A}`, the closure operator of the structure.
    pub fn closure_of(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.n);
        for x in 0..self.n {
            if self.near(&Subset::singleton(self.n, x), a) {
                out = out.with(x);
            }
        }
        out
    }

    /// The family whose closed sets are the fixed points of the closure
    /// operator. Total structures may fail to generate one; the validated
    /// route for genuine pre-proximities is [`closure_operator`].
    pub fn induced_pretopology(&self) -> Result<PreTopology, PretopError> {
        let s = self.subset_count();
        let full = (s - 1) as u128;
        let mut opens = Vec::new();
        for m in 0..s as u128 {
            let complement = Subset::from_bits(self.n, full & !m);
            if self.closure_of(&complement) == complement {
                opens.push(m);
            }
        }
        PreTopology::from_masks(self.n, opens)
    }
}

/// Axiom verdicts for a near-structure; every failure carries the first
/// witness in scan order. `pp1` through `pp5` make a pre-proximity and
/// `pp6` upgrades it to a proximity; the last three fields are
/// consequences rechecked independently.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PpReport {
    /// Symmetry; witness: a near pair whose mirror is far.
    pub pp1: Result<(), (Subset, Subset)>,
    /// Upward closure in the second argument; witness `(a, b, c)` with
    /// `a` near `b`, `b ⊆ c`, `a` far from `c`.
    pub pp2: Result<(), (Subset, Subset, Subset)>,
    /// Singletons are near exactly themselves; witness the point pair.
    pub pp3: Result<(), (usize, usize)>,
    /// The empty set is far from the carrier.
    pub pp4: bool,
    /// Every far pair `(a, b)` splits: some `c` has `a` far from `c` and
    /// `b` far from the complement of `c`. Witness: a pair with no split.
    pub pp5: Result<(), (Subset, Subset)>,
    /// Nearness to a union requires nearness to one part; witness
    /// `(a, b, c)` with `a` near `b ∪ c` but far from both.
    pub pp6: Result<(), (Subset, Subset, Subset)>,
    /// Consequence: overlapping sets are near.
    pub overlap_near: Result<(), (Subset, Subset)>,
    /// Consequence: the empty set is far from everything.
    pub empty_far: Result<(), Subset>,
    /// Consequence: enlarging both sides keeps nearness; witness
    /// `(a, b, a2, b2)`.
    pub enlargement: Result<(), (Subset, Subset, Subset, Subset)>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct PpClassification {
    pub preproximity: bool,
    pub proximity: bool,
}

impl PpReport {
    pub fn classification(&self) -> PpClassification {
        let preproximity = self.pp1.is_ok()
            && self.pp2.is_ok()
            && self.pp3.is_ok()
            && self.pp4
            && self.pp5.is_ok();
        PpClassification { preproximity, proximity: preproximity && self.pp6.is_ok() }
    }

    pub fn failed_core_axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.pp1.is_err() {
            out.push("PP1".to_string());
        }
        if self.pp2.is_err() {
            out.push("PP2".to_string());
        }
        if self.pp3.is_err() {
            out.push("PP3".to_string());
        }
        if !self.pp4 {
            out.push("PP4".to_string());
        }
        if self.pp5.is_err() {
            out.push("PP5".to_string());
        }
        out
    }
}

/// Full axiom sweep over the subset table.
pub fn check_pp_axioms(delta: &PreProximity) -> PpReport {
    let n = delta.n();
    let s = delta.subset_count() as u128;
    let full = s - 1;
    let sub = |m: u128| Subset::from_bits(n, m);

    let mut pp1 = Ok(());
    'pp1: for a in 0..s {
        for b in 0..s {
            if delta.near_masks(a, b) != delta.near_masks(b, a) {
                pp1 = Err((sub(a), sub(b)));
                break 'pp1;
            }
        }
    }

    let mut pp2 = Ok(());
    'pp2: for a in 0..s {
        for b in 0..s {
            if !delta.near_masks(a, b) {
                continue;
            }
            for c in 0..s {
                if b & !c == 0 && !delta.near_masks(a, c) {
                    pp2 = Err((sub(a), sub(b), sub(c)));
                    break 'pp2;
                }
            }
        }
    }

    let mut pp3 = Ok(());
    'pp3: for x in 0..n {
        for y in 0..n {
            let near = delta.near_masks(1 << x, 1 << y);
            if near != (x == y) {
                pp3 = Err((x, y));
                break 'pp3;
            }
        }
    }

    let pp4 = !delta.near_masks(0, full);

    let mut pp5 = Ok(());
    'pp5: for a in 0..s {
        for b in 0..s {
            if delta.near_masks(a, b) {
                continue;
            }
            let split = (0..s)
                .any(|c| !delta.near_masks(a, c) && !delta.near_masks(b, full & !c));
            if !split {
                pp5 = Err((sub(a), sub(b)));
                break 'pp5;
            }
        }
    }

    let mut pp6 = Ok(());
    'pp6: for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                if delta.near_masks(a, b | c)
                    && !delta.near_masks(a, b)
                    && !delta.near_masks(a, c)
                {
                    pp6 = Err((sub(a), sub(b), sub(c)));
                    break 'pp6;
                }
            }
        }
    }

    let mut overlap_near = Ok(());
    'overlap: for a in 0..s {
        for b in 0..s {
            if a & b != 0 && !delta.near_masks(a, b) {
                overlap_near = Err((sub(a), sub(b)));
                break 'overlap;
            }
        }
    }

    let empty_far = match (0..s).find(|&b| delta.near_masks(0, b)) {
        Some(b) => Err(sub(b)),
        None => Ok(()),
    };

    let mut enlargement = Ok(());
    'grow: for a in 0..s {
        for b in 0..s {
            if !delta.near_masks(a, b) {
                continue;
            }
            for a2 in 0..s {
                if a & !a2 != 0 {
                    continue;
                }
                for b2 in 0..s {
                    if b & !b2 == 0 && !delta.near_masks(a2, b2) {
                        enlargement = Err((sub(a), sub(b), sub(a2), sub(b2)));
                        break 'grow;
                    }
                }
            }
        }
    }

    PpReport { pp1, pp2, pp3, pp4, pp5, pp6, overlap_near, empty_far, enlargement }
}

/// The pre-topology of a genuine pre-proximity. The closure operator is
/// certified on the way: grounded, extensive, idempotent, monotone, far
/// pairs stay far from closures, and the result is T1.
pub fn closure_operator(delta: &PreProximity) -> Result<PreTopology, PreproxError> {
    let report = check_pp_axioms(delta);
    if !report.classification().preproximity {
        return Err(PreproxError::NotPreProximity {
            failed: report.failed_core_axioms(),
            report: Box::new(report),
        });
    }
    let n = delta.n();
    let s = delta.subset_count() as u128;
    let sub = |m: u128| Subset::from_bits(n, m);

    assert!(delta.closure_of(&sub(0)).is_empty(), "closure must ground the empty set");
    for m in 0..s {
        let a = sub(m);
        let ca = delta.closure_of(&a);
        assert!(a.is_subset_of(&ca), "closure must be extensive");
        assert_eq!(delta.closure_of(&ca), ca, "closure must be idempotent");
        for m2 in 0..s {
            let b = sub(m2);
            if a.is_subset_of(&b) {
                assert!(
                    ca.is_subset_of(&delta.closure_of(&b)),
                    "closure must be monotone"
                );
            }
            if delta.far(&b, &a) {
                assert!(delta.far(&b, &ca), "far sets must stay far from the closure");
            }
        }
    }

    let tau = delta
        .induced_pretopology()
        .expect("fixed points of a certified closure operator form a pre-topology");
    assert!(
        tau.separation_profile().t1,
        "singletons are closed under the singleton axiom"
    );
    Ok(tau)
}

/// Nearness induced by an entourage family: near exactly when every
/// member meets the product rectangle. The basis decides membership:
/// every family member contains a basis member, and meeting a rectangle
/// survives enlargement.
pub fn delta_from_entourages(basis: &EntourageBasis) -> Result<PreProximity, PreproxError> {
    PreProximity::from_fn(basis.n(), |a, b| {
        let rect = Relation::rect(a, b);
        basis.members().iter().all(|v| v.meets(&rect))
    })
}

/// Nearness induced by a validated family, certified on the way: the
/// axioms PP1 through PP5 hold (inverses below members give symmetry,
/// the diagonal intersection gives the singleton axiom, and composition
/// witnesses split far pairs through complements of neighborhoods), and
/// the induced pre-topologies agree.
pub fn delta_from_preuniformity(mu: &PreUniformity) -> Result<PreProximity, PreproxError> {
    let delta = delta_from_entourages(mu.basis())?;
    let report = check_pp_axioms(&delta);
    assert!(
        report.classification().preproximity,
        "a validated entourage family always induces a pre-proximity"
    );
    let tau = delta
        .induced_pretopology()
        .expect("certified structures generate a pre-topology");
    assert_eq!(
        tau,
        mu.induced_pretopology(),
        "the nearness route and the section route induce the same opens"
    );
    Ok(delta)
}

/// The relation `A ≪ B`: `B` absorbs `A` so strongly that `A` stays far
/// from the complement of `B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NbhdRelation {
    n: usize,
    rows: Vec<u128>,
}

impl NbhdRelation {
    pub fn from_fn<F>(n: usize, mut holds: F) -> Result<Self, PreproxError>
    where
        F: FnMut(&Subset, &Subset) -> bool,
    {
        if n > MAX_PREPROX_POINTS {
            return Err(PreproxError::CarrierTooLarge(n, MAX_PREPROX_POINTS));
        }
        let s = 1usize << n;
        let mut rows = vec![0u128; s];
        for a in 0..s {
            let sa = Subset::from_bits(n, a as u128);
            for b in 0..s {
                if holds(&sa, &Subset::from_bits(n, b as u128)) {
                    rows[a] |= 1 << b;
                }
            }
        }
        Ok(NbhdRelation { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holds(&self, a: &Subset, b: &Subset) -> bool {
        self.holds_masks(a.bits(), b.bits())
    }

    pub fn holds_masks(&self, a: u128, b: u128) -> bool {
        self.rows[a as usize] >> b & 1 == 1
    }
}

/// Translation `A ≪ B  iff  A far from X∖B`; an involution together with
/// [`delta_from_ll`].
pub fn nbhd_relation(delta: &PreProximity) -> NbhdRelation {
    let full = (delta.subset_count() - 1) as u128;
    NbhdRelation::from_fn(delta.n(), |a, b| {
        !delta.near_masks(a.bits(), full & !b.bits())
    })
    .expect("carrier already fit the nearness table")
}

/// Axiom verdicts for a neighborhood relation; failures carry the first
/// witness in scan order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiReport {
    /// Complementation swaps the sides; witness `(a, b)` with `a ≪ b`
    /// but not `X∖b ≪ X∖a`.
    pub psi1: Result<(), (Subset, Subset)>,
    /// `a ≪ b` forces `a ⊆ b`.
    pub psi2: Result<(), (Subset, Subset)>,
    /// Shrinking the left and growing the right preserves the relation;
    /// witness `(a, b, c, d)` with `a ⊆ b ≪ c ⊆ d` but not `a ≪ d`.
    pub psi3: Result<(), (Subset, Subset, Subset, Subset)>,
    /// The empty set and the carrier relate to themselves; witness the
    /// offender.
    pub psi4: Result<(), Subset>,
    /// Every `a ≪ b` passes through an open set and its closure; witness
    /// a pair with no interpolant.
    pub psi5: Result<(), (Subset, Subset)>,
    /// Points relate to each of their neighborhoods; witness `(x, a)`.
    pub psi6: Result<(), (usize, Subset)>,
}

impl PsiReport {
    pub fn all_hold(&self) -> bool {
        self.psi1.is_ok()
            && self.psi2.is_ok()
            && self.psi3.is_ok()
            && self.psi4.is_ok()
            && self.psi5.is_ok()
            && self.psi6.is_ok()
    }
}

fn eval_psi1(ll: &NbhdRelation) -> Result<(), (Subset, Subset)> {
    let n = ll.n();
    let s = 1u128 << n;
    let full = s - 1;
    for a in 0..s {
        for b in 0..s {
            if ll.holds_masks(a, b) && !ll.holds_masks(full & !b, full & !a) {
                return Err((Subset::from_bits(n, a), Subset::from_bits(n, b)));
            }
        }
    }
    Ok(())
}

fn eval_psi2(ll: &NbhdRelation) -> Result<(), (Subset, Subset)> {
    let n = ll.n();
    let s = 1u128 << n;
    for a in 0..s {
        for b in 0..s {
            if ll.holds_masks(a, b) && a & !b != 0 {
                return Err((Subset::from_bits(n, a), Subset::from_bits(n, b)));
            }
        }
    }
    Ok(())
}

fn eval_psi3(ll: &NbhdRelation) -> Result<(), (Subset, Subset, Subset, Subset)> {
    let n = ll.n();
    let s = 1u128 << n;
    let sub = |m: u128| Subset::from_bits(n, m);
    for b in 0..s {
        for c in 0..s {
            if !ll.holds_masks(b, c) {
                continue;
            }
            for a in 0..s {
                if a & !b != 0 {
                    continue;
                }
                for d in 0..s {
                    if c & !d == 0 && !ll.holds_masks(a, d) {
                        return Err((sub(a), sub(b), sub(c), sub(d)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn eval_psi4(ll: &NbhdRelation) -> Result<(), Subset> {
    let n = ll.n();
    let full = (1u128 << n) - 1;
    if !ll.holds_masks(0, 0) {
        return Err(Subset::empty(n));
    }
    if !ll.holds_masks(full, full) {
        return Err(Subset::full(n));
    }
    Ok(())
}

fn eval_psi5(ll: &NbhdRelation, tau: &PreTopology) -> Result<(), (Subset, Subset)> {
    let n = ll.n();
    let s = 1u128 << n;
    for a in 0..s {
        for b in 0..s {
            if !ll.holds_masks(a, b) {
                continue;
            }
            let sa = Subset::from_bits(n, a);
            let sb = Subset::from_bits(n, b);
            let interpolates = tau.opens().any(|u| {
                ll.holds(&sa, &u) && ll.holds(&tau.closure(&u), &sb)
            });
            if !interpolates {
                return Err((sa, sb));
            }
        }
    }
    Ok(())
}

fn eval_psi6(ll: &NbhdRelation, tau: &PreTopology) -> Result<(), (usize, Subset)> {
    let n = ll.n();
    let s = 1u128 << n;
    for x in 0..n {
        for a in 0..s {
            let sa = Subset::from_bits(n, a);
            if tau.interior(&sa).contains(x) && !ll.holds_masks(1 << x, a) {
                return Err((x, sa));
            }
        }
    }
    Ok(())
}

/// Full sweep against a given pre-topology (used for the last two
/// axioms, which mention open sets and closures).
pub fn check_psi_axioms(ll: &NbhdRelation, tau: &PreTopology) -> PsiReport {
    PsiReport {
        psi1: eval_psi1(ll),
        psi2: eval_psi2(ll),
        psi3: eval_psi3(ll),
        psi4: eval_psi4(ll),
        psi5: eval_psi5(ll, tau),
        psi6: eval_psi6(ll, tau),
    }
}

/// The inverse translation `A far from B  iff  A ≪ X∖B`, gated on the
/// first five axioms. The first four are structural; the fifth is
/// checked against the pre-topology of the candidate itself. The
/// translation is involutive regardless, and the returned structure is
/// symmetric and monotone, but the singleton axiom is not implied: run
/// [`check_pp_axioms`] on the result before relying on it.
pub fn delta_from_ll(ll: &NbhdRelation) -> Result<PreProximity, PreproxError> {
    let structural = PsiReport {
        psi1: eval_psi1(ll),
        psi2: eval_psi2(ll),
        psi3: eval_psi3(ll),
        psi4: eval_psi4(ll),
        // Evaluated after the structural four hold; vacuous here.
        psi5: Ok(()),
        psi6: Ok(()),
    };
    let mut failed = Vec::new();
    if structural.psi1.is_err() {
        failed.push("PSI1".to_string());
    }
    if structural.psi2.is_err() {
        failed.push("PSI2".to_string());
    }
    if structural.psi3.is_err() {
        failed.push("PSI3".to_string());
    }
    if structural.psi4.is_err() {
        failed.push("PSI4".to_string());
    }
    if !failed.is_empty() {
        return Err(PreproxError::NotANbhdRelation {
            failed,
            report: Box::new(structural),
        });
    }

    let full = (1u128 << ll.n()) - 1;
    let delta = PreProximity::from_fn(ll.n(), |a, b| {
        !ll.holds_masks(a.bits(), full & !b.bits())
    })
    .expect("swap and monotone axioms make the translation symmetric and monotone");
    let tau = delta
        .induced_pretopology()
        .expect("the first four axioms make the closure fixed points a pre-topology");
    let report = check_psi_axioms(ll, &tau);
    if report.psi5.is_err() {
        return Err(PreproxError::NotANbhdRelation {
            failed: vec!["PSI5".to_string()],
            report: Box::new(report),
        });
    }
    Ok(delta)
}

/// The coarse family generated by far pairs: one entourage per far pair
/// `(A, B)`, the complement of the rectangle `A × B`. Certified: the
/// family is valid, totally bounded, and induces the input back.
/// Far pairs with an empty side contribute the full relation, which the
/// antichain reduction drops whenever anything else is present.
pub fn mu_delta(delta: &PreProximity) -> Result<PreUniformity, PreproxError> {
    let report = check_pp_axioms(delta);
    if !report.classification().preproximity {
        return Err(PreproxError::NotPreProximity {
            failed: report.failed_core_axioms(),
            report: Box::new(report),
        });
    }
    let n = delta.n();
    let s = delta.subset_count() as u128;
    let mut members = Vec::new();
    for a in 0..s {
        for b in 0..s {
            if !delta.near_masks(a, b) {
                let rect = Relation::rect(
                    &Subset::from_bits(n, a),
                    &Subset::from_bits(n, b),
                );
                members.push(rect.complement());
            }
        }
    }
    let mu = PreUniformity::from_members(n, &members)?;
    let (bounded, _) = preunif::totally_bounded(&mu);
    assert!(bounded, "rectangle complements are totally bounded");
    assert_eq!(
        delta_from_preuniformity(&mu)?,
        *delta,
        "the far-pair family induces the input nearness back"
    );
    Ok(mu)
}

/// The coarse family of the nearness induced by `mu`, together with the
/// verdict whether it already equals `mu`.
#[derive(Clone, PartialEq, Debug)]
pub struct ReflectionOutcome {
    pub reflection: PreUniformity,
    pub equals_original: bool,
}

/// Composition of the two certified translations; every finite family is
/// totally bounded, so the interesting content is the equality verdict.
pub fn totally_bounded_reflection(mu: &PreUniformity) -> Result<ReflectionOutcome, PreproxError> {
    let delta = delta_from_preuniformity(mu)?;
    let reflection = mu_delta(&delta)?;
    let equals_original = reflection == *mu;
    Ok(ReflectionOutcome { reflection, equals_original })
}

/// Families of distinct non-empty submasks of `a` whose union is exactly
/// `a`, with no removable block.
fn irredundant_covers(a: u128) -> Vec<Vec<u128>> {
    let subs: Vec<u128> = (1..=a).filter(|m| m & !a == 0).collect();
    let mut out = Vec::new();
    for family_bits in 0..1u64 << subs.len() {
        let blocks: Vec<u128> = subs
            .iter()
            .enumerate()
            .filter(|(i, _)| family_bits >> i & 1 == 1)
            .map(|(_, &m)| m)
            .collect();
        if blocks.iter().fold(0, |u, &m| u | m) != a {
            continue;
        }
        let irredundant = (0..blocks.len()).all(|skip| {
            blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .fold(0, |u, (_, &m)| u | m)
                != a
        });
        if irredundant {
            out.push(blocks);
        }
    }
    out
}

/// Least upper bound in the finer-than order: near exactly when every
/// pair of irredundant covers of the two sides contains blocks near in
/// every family member. Redundant covers add nothing, since dropping a
/// removable block only removes candidate near pairs from a family that
/// already failed. The empty set has exactly the empty cover, so it ends
/// up far from everything.
pub fn sup_preproximities(family: &[PreProximity]) -> Result<PreProximity, PreproxError> {
    let Some(first) = family.first() else {
        return Err(PreproxError::EmptyFamily);
    };
    let n = first.n();
    for d in family {
        if d.n() != n {
            return Err(PreproxError::CarrierMismatch(d.n(), n));
        }
    }
    let s = 1u128 << n;
    let covers: Vec<Vec<Vec<u128>>> = (0..s).map(irredundant_covers).collect();
    let mut rows = vec![0u128; s as usize];
    for a in 0..s {
        for b in a..s {
            let near = covers[a as usize].iter().all(|ca| {
                covers[b as usize].iter().all(|cb| {
                    ca.iter().any(|&x| {
                        cb.iter().any(|&y| family.iter().all(|d| d.near_masks(x, y)))
                    })
                })
            });
            if near {
                rows[a as usize] |= 1 << b;
                rows[b as usize] |= 1 << a;
            }
        }
    }
    PreProximity::from_fn(n, |a, b| rows[a.bits() as usize] >> b.bits() & 1 == 1)
}

/// The closure-overlap nearness of a normal Hausdorff pre-topology:
/// near exactly when the closures intersect. Certified compatible: its
/// closure operator is the closure of `tau` because points are closed.
pub fn finest_compatible(tau: &PreTopology) -> Result<PreProximity, PreproxError> {
    let n = tau.n();
    let closed = tau.closed_masks();
    for (i, &a) in closed.iter().enumerate() {
        for &b in &closed[i..] {
            if a & b != 0 {
                continue;
            }
            let separated = tau.open_masks().iter().any(|&u| {
                a & !u == 0
                    && tau
                        .open_masks()
                        .iter()
                        .any(|&v| b & !v == 0 && u & v == 0)
            });
            if !separated {
                return Err(PreproxError::NotNormal(
                    Subset::from_bits(n, a),
                    Subset::from_bits(n, b),
                ));
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let separated = tau.open_masks().iter().any(|&u| {
                u >> x & 1 == 1
                    && tau
                        .open_masks()
                        .iter()
                        .any(|&v| v >> y & 1 == 1 && u & v == 0)
            });
            if !separated {
                return Err(PreproxError::NotHausdorff(x, y));
            }
        }
    }

    let delta = PreProximity::from_fn(n, |a, b| tau.closure(a).meets(&tau.closure(b)))?;
    let induced = delta
        .induced_pretopology()
        .expect("closure overlap generates a pre-topology on separated carriers");
    assert_eq!(induced, *tau, "closure overlap is compatible with its source");
    Ok(delta)
}

/// Whether the given blocks cover the carrier and admit an inner cover
/// related blockwise by `≪`. The admissible inner blocks for a given
/// outer block are downward closed, so maximal ones suffice.
pub fn is_delta_preuniform_cover(
    cover: &[Subset],
    delta: &PreProximity,
) -> Result<bool, PreproxError> {
    let n = delta.n();
    let s = 1u128 << n;
    let full = s - 1;
    let mut union = 0u128;
    for block in cover {
        if block.n() != n {
            return Err(PreproxError::CarrierMismatch(block.n(), n));
        }
        union |= block.bits();
    }
    if union != full {
        let missing = (0..n).find(|&x| union >> x & 1 == 0).unwrap_or(0);
        return Err(PreproxError::DoesNotCover { missing });
    }

    let tops: Vec<Vec<u128>> = cover
        .iter()
        .map(|block| {
            let outside = full & !block.bits();
            let admissible: Vec<u128> =
                (0..s).filter(|&b| !delta.near_masks(b, outside)).collect();
            admissible
                .iter()
                .copied()
                .filter(|&b| !admissible.iter().any(|&c| c != b && b & !c == 0))
                .collect()
        })
        .collect();

    let suffix_reach: Vec<u128> = {
        let mut reach = vec![0u128; tops.len() + 1];
        for i in (0..tops.len()).rev() {
            reach[i] = reach[i + 1] | tops[i].iter().fold(0, |u, &m| u | m);
        }
        reach
    };

    fn search(tops: &[Vec<u128>], reach: &[u128], i: usize, acc: u128, full: u128) -> bool {
        if acc | reach[i] != full {
            return false;
        }
        if i == tops.len() {
            return acc == full;
        }
        tops[i].iter().any(|&b| search(tops, reach, i + 1, acc | b, full))
    }
    Ok(search(&tops, &suffix_reach, 0, 0, full))
}

/// Whether every nearness-respecting cover keeps a block meeting both
/// sets. Covers are quantified with repeated blocks allowed; a block
/// repeated once per maximal admissible inner set shows that a support
/// admits such a cover exactly when the unions of admissible inner sets
/// cover the carrier, so only supports need enumeration.
pub fn far_pair_criterion(
    delta: &PreProximity,
    a: &Subset,
    b: &Subset,
) -> Result<bool, PreproxError> {
    let n = delta.n();
    if a.n() != n {
        return Err(PreproxError::CarrierMismatch(a.n(), n));
    }
    if b.n() != n {
        return Err(PreproxError::CarrierMismatch(b.n(), n));
    }
    let s = 1u128 << n;
    let full = s - 1;
    let reach: Vec<u128> = (0..s)
        .map(|block| {
            let outside = full & !block;
            (0..s).filter(|&m| !delta.near_masks(m, outside)).fold(0, |u, m| u | m)
        })
        .collect();

    let blocks: Vec<u128> = (1..s).collect();
    for family_bits in 1..1u64 << blocks.len() {
        let mut union = 0u128;
        let mut inner = 0u128;
        let mut meets_both = false;
        for (i, &block) in blocks.iter().enumerate() {
            if family_bits >> i & 1 == 0 {
                continue;
            }
            union |= block;
            inner |= reach[block as usize];
            meets_both |= block & a.bits() != 0 && block & b.bits() != 0;
        }
        if union == full && inner == full && !meets_both {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Opens of `tau` cut down to `e` and renumbered along the points of `e`
/// in increasing order.
pub fn relative_pretopology(tau: &PreTopology, e: &Subset) -> PreTopology {
    let points: Vec<usize> = e.points().collect();
    let mut masks: Vec<u128> = tau
        .open_masks()
        .iter()
        .map(|&m| {
            points
                .iter()
                .enumerate()
                .filter(|(_, &p)| m >> p & 1 == 1)
                .fold(0u128, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    masks.sort_unstable();
    masks.dedup();
    PreTopology::from_masks(points.len(), masks)
        .expect("cutting opens down to a subset keeps unions and the bounds")
}

/// Restriction of the nearness table to subsets of `e`, renumbered along
/// the points of `e`. When the input passes the axioms, the restriction
/// is certified to induce the relative pre-topology.
pub fn subspace(delta: &PreProximity, e: &Subset) -> Result<PreProximity, PreproxError> {
    if e.n() != delta.n() {
        return Err(PreproxError::CarrierMismatch(e.n(), delta.n()));
    }
    if e.is_empty() {
        return Err(PreproxError::EmptySubspace);
    }
    let points: Vec<usize> = e.points().collect();
    let lift = |m: u128| -> u128 {
        points
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .fold(0u128, |acc, (_, &p)| acc | 1 << p)
    };
    let restricted = PreProximity::from_fn(points.len(), |a, b| {
        delta.near_masks(lift(a.bits()), lift(b.bits()))
    })
    .expect("restriction keeps symmetry and monotonicity");

    if check_pp_axioms(delta).classification().preproximity {
        let whole = delta
            .induced_pretopology()
            .expect("certified structures generate a pre-topology");
        let part = restricted
            .induced_pretopology()
            .expect("restrictions of certified structures generate a pre-topology");
        assert_eq!(
            part,
            relative_pretopology(&whole, e),
            "restriction commutes with the induced pre-topology"
        );
    }
    Ok(restricted)
}

/// Every structure passing PP1 through PP5 on `n` points, smallest
/// carrier representation first.
///
/// Overlapping pairs are forced near, pairs with an empty side forced
/// far, and distinct singleton pairs forced far, so the only free
/// choices sit on disjoint non-empty pairs with a side of two or more
/// points. On up to three points those free pairs never contain one
/// another, so every assignment is monotone, and the axiom sweep keeps
/// exactly the structures that also split their far pairs.
pub fn enumerate(n: usize) -> Vec<PreProximity> {
    assert!(n <= 3, "enumeration is exhaustive only up to three points");
    let s = 1u128 << n;
    let mut free: Vec<(u128, u128)> = Vec::new();
    for a in 1..s {
        for b in a + 1..s {
            if a & b == 0 && (a.count_ones() > 1 || b.count_ones() > 1) {
                free.push((a, b));
            }
        }
    }
    let mut out = Vec::new();
    for bits in 0..1u64 << free.len() {
        let delta = PreProximity::from_fn(n, |x, y| {
            let (p, q) = (x.bits(), y.bits());
            p & q != 0
                || free.iter().enumerate().any(|(i, &(fa, fb))| {
                    bits >> i & 1 == 1 && ((p, q) == (fa, fb) || (p, q) == (fb, fa))
                })
        })
        .expect("free-pair assignments are symmetric and monotone on small carriers");
        if check_pp_axioms(&delta).classification().preproximity {
            out.push(delta);
        }
    }
    out
}
