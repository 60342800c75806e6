//! Canonical-form enumeration of small structures and a property-driven
//! counterexample hunter.
//!
//! Structures are enumerated one representative per isomorphism class:
//! the canonical form is the lexicographically least encoding over all
//! `n!` carrier relabelings, and enumeration lists canonical encodings in
//! ascending order, so any index range is an independent shard and every
//! run is deterministic. Targets are conjunctions and negations over
//! named checkers from the registry; a successful hunt returns a replayable
//! certificate (structure, per-atom trace, canonical id) and an exhausted
//! hunt returns the exact bounds it searched.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::groups::{self, GroupTable};
use crate::interchange::{self, Envelope, InterchangeError, TraceEntry};
use crate::preprox::{self, PreProximity};
use crate::pretop::{self, PreTopology};
use crate::preunif::{self, Comparison, PreUniformity};
use crate::relcore::{permutations, Relation, Subset};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("bounds must be at least 1")]
    BadBounds,
    #[error("carrier bound {requested} exceeds the {kind} ceiling {ceiling}")]
    CeilingExceeded { kind: &'static str, requested: usize, ceiling: usize },
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("property {name:?} is not defined for {kind} structures")]
    WrongKindProperty { name: String, kind: &'static str },
    #[error("cannot parse target expression: {0}")]
    BadExpression(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    Interchange(#[from] InterchangeError),
}

/// What the enumerator and hunter range over.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SearchKind {
    Pretopology,
    PreuniformityBasis,
    Preproximity,
    Pretopgroup,
}

impl SearchKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchKind::Pretopology => "pretopology",
            SearchKind::PreuniformityBasis => "preuniformity-basis",
            SearchKind::Preproximity => "preproximity",
            SearchKind::Pretopgroup => "pretopgroup",
        }
    }

    pub fn from_str(text: &str) -> Option<SearchKind> {
        match text {
            "pretopology" => Some(SearchKind::Pretopology),
            "preuniformity-basis" => Some(SearchKind::PreuniformityBasis),
            "preproximity" => Some(SearchKind::Preproximity),
            "pretopgroup" => Some(SearchKind::Pretopgroup),
            _ => None,
        }
    }

    /// Hard enumeration ceiling per kind. Pre-topologies and groups go to
    /// four points. Valid entourage families stop at three: their count
    /// explodes past any useful bound on four points (two hundred classes
    /// on three points already), and four-point coverage is handled by
    /// seeded sampling instead. Nearness structures store a full
    /// subset-pair table and stop at three.
    pub fn ceiling(&self) -> usize {
        match self {
            SearchKind::Pretopology => 4,
            SearchKind::PreuniformityBasis => 3,
            SearchKind::Preproximity => 3,
            SearchKind::Pretopgroup => 4,
        }
    }

    /// Ceiling after the `PRETOP_CEILING` environment override, which can
    /// only lower the hard ceiling, never raise it.
    pub fn effective_ceiling(&self) -> usize {
        let hard = self.ceiling();
        match std::env::var("PRETOP_CEILING") {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(c) if c >= 1 => c.min(hard),
                _ => hard,
            },
            Err(_) => hard,
        }
    }
}

/// One enumerated structure, always stored in canonical form.
#[derive(Clone, PartialEq, Debug)]
pub enum SearchStructure {
    Pretopology(PreTopology),
    Preuniformity(PreUniformity),
    Preproximity(PreProximity),
    Pretopgroup(GroupTable, PreTopology),
}

fn perm_mask(mask: u128, n: usize, perm: &[usize]) -> u128 {
    Subset::from_bits(n, mask).apply_perm(perm).bits()
}

fn proximity_rows(delta: &PreProximity) -> Vec<u128> {
    let s = delta.subset_count() as u128;
    (0..s)
        .map(|a| {
            let mut row = 0u128;
            for b in 0..s {
                if delta.near_masks(a, b) {
                    row |= 1 << b;
                }
            }
            row
        })
        .collect()
}

impl SearchStructure {
    pub fn kind(&self) -> SearchKind {
        match self {
            SearchStructure::Pretopology(_) => SearchKind::Pretopology,
            SearchStructure::Preuniformity(_) => SearchKind::PreuniformityBasis,
            SearchStructure::Preproximity(_) => SearchKind::Preproximity,
            SearchStructure::Pretopgroup(..) => SearchKind::Pretopgroup,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SearchStructure::Pretopology(t) => t.n(),
            SearchStructure::Preuniformity(m) => m.n(),
            SearchStructure::Preproximity(d) => d.n(),
            SearchStructure::Pretopgroup(g, _) => g.n(),
        }
    }

    /// The integer encoding whose lexicographic order defines canonical
    /// order. Relabeling-equivariant: encoding of the permuted structure
    /// equals the permuted encoding.
    pub fn encoding(&self) -> Vec<u128> {
        match self {
            SearchStructure::Pretopology(t) => t.open_masks().to_vec(),
            SearchStructure::Preuniformity(m) => {
                m.basis().members().iter().map(|r| r.bits()).collect()
            }
            SearchStructure::Preproximity(d) => proximity_rows(d),
            SearchStructure::Pretopgroup(g, t) => {
                let n = g.n();
                let mut out: Vec<u128> = (0..n * n)
                    .map(|p| g.op(p / n, p % n) as u128)
                    .collect();
                out.push(u128::MAX);
                out.extend_from_slice(t.open_masks());
                out
            }
        }
    }

    fn permuted(&self, perm: &[usize]) -> SearchStructure {
        match self {
            SearchStructure::Pretopology(t) => {
                let n = t.n();
                let mut masks: Vec<u128> =
                    t.open_masks().iter().map(|&m| perm_mask(m, n, perm)).collect();
                masks.sort_unstable();
                SearchStructure::Pretopology(
                    PreTopology::from_masks(n, masks).expect("relabeling preserves the axioms"),
                )
            }
            SearchStructure::Preuniformity(m) => {
                let members: Vec<Relation> =
                    m.basis().members().iter().map(|r| r.apply_perm(perm)).collect();
                SearchStructure::Preuniformity(
                    PreUniformity::from_members(m.n(), &members)
                        .expect("relabeling preserves the axioms"),
                )
            }
            SearchStructure::Preproximity(d) => {
                let n = d.n();
                // invert the relabeling to pull nearness back
                let mut inv = vec![0usize; n];
                for (x, &y) in perm.iter().enumerate() {
                    inv[y] = x;
                }
                SearchStructure::Preproximity(
                    PreProximity::from_fn(n, |a: &Subset, b: &Subset| {
                        d.near(&a.apply_perm(&inv), &b.apply_perm(&inv))
                    })
                    .expect("relabeling preserves symmetry and monotonicity"),
                )
            }
            SearchStructure::Pretopgroup(g, t) => {
                let n = g.n();
                let mut inv = vec![0usize; n];
                for (x, &y) in perm.iter().enumerate() {
                    inv[y] = x;
                }
                let rows: Vec<Vec<usize>> = (0..n)
                    .map(|x| (0..n).map(|y| perm[g.op(inv[x], inv[y])]).collect())
                    .collect();
                let group = GroupTable::new(rows).expect("relabeling preserves the group axioms");
                let mut masks: Vec<u128> =
                    t.open_masks().iter().map(|&m| perm_mask(m, t.n(), perm)).collect();
                masks.sort_unstable();
                let tau =
                    PreTopology::from_masks(t.n(), masks).expect("relabeling preserves the axioms");
                SearchStructure::Pretopgroup(group, tau)
            }
        }
    }

    /// The least-encoding representative of the relabeling orbit.
    pub fn canonical(&self) -> SearchStructure {
        let mut best = self.clone();
        let mut best_enc = self.encoding();
        for perm in permutations(self.n()) {
            let cand = self.permuted(&perm);
            let enc = cand.encoding();
            if enc < best_enc {
                best_enc = enc;
                best = cand;
            }
        }
        best
    }

    /// Stable identifier of the isomorphism class.
    pub fn canonical_id(&self) -> String {
        let enc = self.canonical().encoding();
        let parts: Vec<String> = enc.iter().map(|v| v.to_string()).collect();
        format!("{}:n={}:[{}]", self.kind().as_str(), self.n(), parts.join(","))
    }

    pub fn to_envelope(&self) -> Envelope {
        let labels = interchange::default_labels(self.n());
        match self {
            SearchStructure::Pretopology(t) => interchange::pretopology_doc(t, &labels),
            SearchStructure::Preuniformity(m) => interchange::basis_doc(m.basis(), &labels),
            SearchStructure::Preproximity(d) => interchange::preproximity_doc(d, &labels),
            SearchStructure::Pretopgroup(g, t) => interchange::group_doc(g, t, None, &labels),
        }
    }

    /// Rebuilds a hunt structure from a decoded document; entourage bases
    /// must pass the validity axioms here, since every checker in the
    /// registry speaks about valid families.
    pub fn from_loaded(structure: &interchange::Structure) -> Result<SearchStructure, SearchError> {
        match structure {
            interchange::Structure::Pretopology(t) => {
                Ok(SearchStructure::Pretopology(t.clone()))
            }
            interchange::Structure::PreuniformityBasis(b) => {
                let mu = PreUniformity::new(b.clone()).map_err(InterchangeError::from)?;
                Ok(SearchStructure::Preuniformity(mu))
            }
            interchange::Structure::Preproximity(d) => {
                Ok(SearchStructure::Preproximity(d.clone()))
            }
            interchange::Structure::Pretopgroup { group, tau, .. } => {
                Ok(SearchStructure::Pretopgroup(group.clone(), tau.clone()))
            }
            other => Err(SearchError::MalformedCertificate(format!(
                "{} structures cannot carry hunt properties",
                other.kind_name()
            ))),
        }
    }
}

// ---- the property registry ----

/// A named checker: one registered verdict usable in target expressions.
pub struct PropertyDef {
    pub name: &'static str,
    pub kind: SearchKind,
    pub doc: &'static str,
    eval: fn(&SearchStructure) -> bool,
}

macro_rules! props {
    ($($name:literal, $kind:ident, $doc:literal, $eval:expr;)*) => {
        &[$(PropertyDef {
            name: $name,
            kind: SearchKind::$kind,
            doc: $doc,
            eval: $eval,
        }),*]
    };
}

fn tau_of(s: &SearchStructure) -> PreTopology {
    match s {
        SearchStructure::Pretopology(t) => t.clone(),
        SearchStructure::Preuniformity(m) => m.induced_pretopology(),
        SearchStructure::Preproximity(d) => d
            .induced_pretopology()
            .expect("registered separation checkers run on certified structures"),
        SearchStructure::Pretopgroup(_, t) => t.clone(),
    }
}

fn the_mu(s: &SearchStructure) -> &PreUniformity {
    match s {
        SearchStructure::Preuniformity(m) => m,
        _ => unreachable!("checker dispatched on kind"),
    }
}

fn the_delta(s: &SearchStructure) -> &PreProximity {
    match s {
        SearchStructure::Preproximity(d) => d,
        _ => unreachable!("checker dispatched on kind"),
    }
}

fn the_group(s: &SearchStructure) -> (&GroupTable, &PreTopology) {
    match s {
        SearchStructure::Pretopgroup(g, t) => (g, t),
        _ => unreachable!("checker dispatched on kind"),
    }
}

fn neighborhood_prebase_at_each_point(mu: &PreUniformity) -> bool {
    let tau = mu.induced_pretopology();
    let n = mu.n();
    (0..n).all(|x| {
        let interiors: Vec<Subset> = mu
            .basis()
            .members()
            .iter()
            .map(|v| tau.interior(&v.section(x)))
            .collect();
        interiors.iter().all(|s| s.contains(x))
            && tau
                .opens()
                .filter(|g| g.contains(x))
                .all(|g| interiors.iter().any(|s| s.is_subset_of(&g)))
    })
}

fn coreflection_separation_transfer(mu: &PreUniformity) -> bool {
    let star = preunif::coreflection(mu);
    let diag = Relation::diagonal(mu.n());
    let sep = mu.basis().intersection() == diag;
    let star_sep = star.basis().intersection() == diag;
    let t0 = mu.induced_pretopology().separation_profile().t0;
    let star_cr = star.induced_pretopology().separation_profile().completely_regular;
    sep == star_sep && (!t0 || star_cr)
}

fn coreflection_is_uniformity_above(mu: &PreUniformity) -> bool {
    let star = preunif::coreflection(mu);
    let above = matches!(
        preunif::compare(&star, mu).expect("same carrier"),
        Comparison::Finer | Comparison::Equal
    );
    star.classification().uniform && above
}

fn reflection_compatible_and_coarser(mu: &PreUniformity) -> bool {
    match preprox::totally_bounded_reflection(mu) {
        Err(_) => false,
        Ok(out) => {
            let coarser = matches!(
                preunif::compare(&out.reflection, mu).expect("same carrier"),
                Comparison::Coarser | Comparison::Equal
            );
            coarser && out.reflection.induced_pretopology() == mu.induced_pretopology()
        }
    }
}

fn nbhd_roundtrip(delta: &PreProximity) -> bool {
    let ll = preprox::nbhd_relation(delta);
    let tau = match delta.induced_pretopology() {
        Ok(t) => t,
        Err(_) => return false,
    };
    let psi = preprox::check_psi_axioms(&ll, &tau);
    psi.all_hold() && preprox::delta_from_ll(&ll).ok().as_ref() == Some(delta)
}

fn cover_criterion_implies_near(delta: &PreProximity) -> bool {
    let n = delta.n();
    let full = (1u128 << n) - 1;
    for a in 0..=full {
        for b in 0..=full {
            let sa = Subset::from_bits(n, a);
            let sb = Subset::from_bits(n, b);
            let criterion =
                preprox::far_pair_criterion(delta, &sa, &sb).expect("same carrier");
            if criterion && !delta.near_masks(a, b) {
                return false;
            }
        }
    }
    true
}

fn near_pair_without_cover_criterion(delta: &PreProximity) -> bool {
    let n = delta.n();
    let full = (1u128 << n) - 1;
    for a in 0..=full {
        for b in 0..=full {
            let sa = Subset::from_bits(n, a);
            let sb = Subset::from_bits(n, b);
            if delta.near_masks(a, b)
                && !preprox::far_pair_criterion(delta, &sa, &sb).expect("same carrier")
            {
                return true;
            }
        }
    }
    false
}

fn strong_prebases_pipeline_complete(g: &GroupTable, tau: &PreTopology) -> bool {
    groups::candidate_prebases(g, tau).iter().all(|b_e| {
        !groups::is_strongly_pretopological_group(g, tau, b_e).expect("validated candidates")
            || groups::group_preuniformity(g, tau, b_e).is_ok()
    })
}

/// Every registered checker. Expression atoms resolve here by name,
/// scoped to the structure kind being hunted.
pub fn registry() -> &'static [PropertyDef] {
    props![
        // pre-topologies
        "t0", Pretopology, "points are told apart by opens",
            |s| tau_of(s).separation_profile().t0;
        "t1", Pretopology, "singletons are closed",
            |s| tau_of(s).separation_profile().t1;
        "t2", Pretopology, "distinct points have disjoint opens",
            |s| tau_of(s).separation_profile().t2;
        "hausdorff", Pretopology, "alias of t2",
            |s| tau_of(s).separation_profile().t2;
        "regular", Pretopology, "points and closed sets separate by opens",
            |s| tau_of(s).separation_profile().regular;
        "completely_regular", Pretopology, "T1 plus the complementary open-pair criterion",
            |s| tau_of(s).separation_profile().completely_regular;
        "normal", Pretopology, "disjoint closed sets separate by opens",
            |s| tau_of(s).separation_profile().normal;
        "discrete", Pretopology, "every subset is open",
            |s| match s { SearchStructure::Pretopology(t) => t.is_discrete(), _ => false };

        // valid entourage families
        "preuniformity", PreuniformityBasis, "the validity axioms hold",
            |s| the_mu(s).classification().preuniformity;
        "symmetric", PreuniformityBasis, "every member holds a symmetric member",
            |s| the_mu(s).classification().symmetric;
        "strong", PreuniformityBasis, "every member holds a self-composing member",
            |s| the_mu(s).classification().strong;
        "almost_uniform", PreuniformityBasis, "symmetric and strong",
            |s| the_mu(s).classification().almost_uniform;
        "uniform", PreuniformityBasis, "almost uniform and intersection-closed",
            |s| the_mu(s).classification().uniform;
        "intersection_closed", PreuniformityBasis, "binary intersections stay inside",
            |s| the_mu(s).report().u6.holds;
        "totally_bounded", PreuniformityBasis, "every member has a finite dense set",
            |s| preunif::totally_bounded(the_mu(s)).0;
        "reflection_identity", PreuniformityBasis,
            "the far-pair family of the induced nearness is the family itself",
            |s| preprox::totally_bounded_reflection(the_mu(s))
                .expect("valid families certify").equals_original;
        "t0", PreuniformityBasis, "induced opens tell points apart",
            |s| tau_of(s).separation_profile().t0;
        "t1", PreuniformityBasis, "induced opens close singletons",
            |s| tau_of(s).separation_profile().t1;
        "t2", PreuniformityBasis, "induced opens separate points",
            |s| tau_of(s).separation_profile().t2;
        "hausdorff", PreuniformityBasis, "alias of t2",
            |s| tau_of(s).separation_profile().t2;
        "regular", PreuniformityBasis, "induced opens are regular",
            |s| tau_of(s).separation_profile().regular;
        "completely_regular", PreuniformityBasis, "induced opens are completely regular",
            |s| tau_of(s).separation_profile().completely_regular;
        "normal", PreuniformityBasis, "induced opens are normal",
            |s| tau_of(s).separation_profile().normal;
        "induced_opens_regular", PreuniformityBasis,
            "theorem shape: the induced pre-topology of a valid family is regular",
            |s| tau_of(s).separation_profile().regular;
        "t0_matches_diagonal_criterion", PreuniformityBasis,
            "theorem shape: induced T0 iff the basis intersection is the diagonal",
            |s| { let (t0, diag) = preunif::t0_criterion(the_mu(s).basis()); t0 == diag };
        "closed_members_form_prebase", PreuniformityBasis,
            "theorem shape: product-closed members sit below every member",
            |s| preunif::entourage_prebase_verdicts(the_mu(s)).expect("small carrier").0;
        "open_members_form_prebase", PreuniformityBasis,
            "theorem shape: product-open members sit below every member",
            |s| preunif::entourage_prebase_verdicts(the_mu(s)).expect("small carrier").1;
        "neighborhood_prebase_at_each_point", PreuniformityBasis,
            "theorem shape: section interiors form an open neighborhood pre-base",
            |s| neighborhood_prebase_at_each_point(the_mu(s));
        "strong_implies_completely_regular", PreuniformityBasis,
            "theorem shape: a strong family induces completely regular opens",
            |s| !the_mu(s).classification().strong
                || tau_of(s).separation_profile().completely_regular;
        "coreflection_separation_transfer", PreuniformityBasis,
            "theorem shape: intersection separation carries to the coreflection",
            |s| coreflection_separation_transfer(the_mu(s));
        "coreflection_is_uniformity_above", PreuniformityBasis,
            "theorem shape: the coreflection is a uniformity containing the family",
            |s| coreflection_is_uniformity_above(the_mu(s));
        "nearness_from_entourages", PreuniformityBasis,
            "theorem shape: the induced nearness passes the axioms and agrees on opens",
            |s| preprox::delta_from_preuniformity(the_mu(s)).is_ok();
        "reflection_compatible_and_coarser", PreuniformityBasis,
            "theorem shape: the far-pair family is compatible and no finer",
            |s| reflection_compatible_and_coarser(the_mu(s));

        // nearness structures
        "pp1", Preproximity, "symmetry",
            |s| preprox::check_pp_axioms(the_delta(s)).pp1.is_ok();
        "pp2", Preproximity, "upward closure",
            |s| preprox::check_pp_axioms(the_delta(s)).pp2.is_ok();
        "pp3", Preproximity, "singletons near exactly themselves",
            |s| preprox::check_pp_axioms(the_delta(s)).pp3.is_ok();
        "pp4", Preproximity, "the empty set is far from the carrier",
            |s| preprox::check_pp_axioms(the_delta(s)).pp4;
        "pp5", Preproximity, "far pairs split through a third set",
            |s| preprox::check_pp_axioms(the_delta(s)).pp5.is_ok();
        "pp6", Preproximity, "near a union means near a part",
            |s| preprox::check_pp_axioms(the_delta(s)).pp6.is_ok();
        "preproximity", Preproximity, "the five nearness axioms hold",
            |s| preprox::check_pp_axioms(the_delta(s)).classification().preproximity;
        "proximity", Preproximity, "the five axioms plus the union axiom",
            |s| preprox::check_pp_axioms(the_delta(s)).classification().proximity;
        "t0", Preproximity, "induced opens tell points apart",
            |s| tau_of(s).separation_profile().t0;
        "t1", Preproximity, "induced opens close singletons",
            |s| tau_of(s).separation_profile().t1;
        "t2", Preproximity, "induced opens separate points",
            |s| tau_of(s).separation_profile().t2;
        "completely_regular", Preproximity, "induced opens are completely regular",
            |s| tau_of(s).separation_profile().completely_regular;
        "normal", Preproximity, "induced opens are normal",
            |s| tau_of(s).separation_profile().normal;
        "closure_operator_laws", Preproximity,
            "theorem shape: nearness closure satisfies the closure laws",
            |s| preprox::closure_operator(the_delta(s)).is_ok();
        "nbhd_roundtrip", Preproximity,
            "theorem shape: the absorption relation round-trips the nearness",
            |s| nbhd_roundtrip(the_delta(s));
        "cover_criterion_implies_near", Preproximity,
            "theorem shape: the all-covers criterion only holds for near pairs",
            |s| cover_criterion_implies_near(the_delta(s));
        "near_pair_without_cover_criterion", Preproximity,
            "converse probe: some near pair fails the all-covers criterion",
            |s| near_pair_without_cover_criterion(the_delta(s));
        "sup_singleton_identity", Preproximity,
            "converse probe: the one-member supremum returns the member",
            |s| preprox::sup_preproximities(std::slice::from_ref(the_delta(s))).ok().as_ref()
                == Some(the_delta(s));
        "farpair_family_exists", Preproximity,
            "theorem shape: the far-pair entourage family passes the axioms",
            |s| preprox::mu_delta(the_delta(s)).is_ok();

        // groups with opens
        "pretopological_group", Pretopgroup,
            "multiplication and inversion are pre-continuous",
            |s| { let (g, t) = the_group(s); groups::is_pretopological_group(g, t)
                .expect("same carrier") };
        "abelian", Pretopgroup, "multiplication commutes",
            |s| { let (g, _) = the_group(s);
                (0..g.n()).all(|x| (0..g.n()).all(|y| g.op(x, y) == g.op(y, x))) };
        "t1", Pretopgroup, "the opens close singletons",
            |s| tau_of(s).separation_profile().t1;
        "completely_regular", Pretopgroup, "the opens are completely regular",
            |s| tau_of(s).separation_profile().completely_regular;
        "has_strong_prebase", Pretopgroup,
            "some symmetric squaring identity pre-base exists",
            |s| { let (g, t) = the_group(s); groups::candidate_prebases(g, t).iter().any(|b|
                groups::is_strongly_pretopological_group(g, t, b).expect("validated")) };
        "strong_prebases_pipeline_complete", Pretopgroup,
            "theorem shape: every strong pre-base yields a compatible family",
            |s| { let (g, t) = the_group(s); strong_prebases_pipeline_complete(g, t) };
    ]
}

fn normalize_atom(name: &str, kind: SearchKind) -> String {
    let tight: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if kind == SearchKind::PreuniformityBasis {
        for suffix in ["(τ(μ))", "(tau(mu))"] {
            if let Some(stripped) = tight.strip_suffix(suffix) {
                return stripped.to_string();
            }
        }
    }
    tight
}

/// Finds the checker for an atom under a kind; reports whether the name is
/// unknown everywhere or merely attached to another kind.
pub fn resolve(name: &str, kind: SearchKind) -> Result<&'static PropertyDef, SearchError> {
    let wanted = normalize_atom(name, kind);
    if let Some(def) = registry().iter().find(|d| d.kind == kind && d.name == wanted) {
        return Ok(def);
    }
    if registry().iter().any(|d| d.name == wanted) {
        return Err(SearchError::WrongKindProperty { name: wanted, kind: kind.as_str() });
    }
    Err(SearchError::UnknownProperty(wanted))
}

// ---- target expressions ----

/// Conjunctions and negations over named checkers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Atom(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    And,
    Not,
    Open,
    Close,
    Atom(String),
}

fn atom_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '\u{2032}'
}

fn lex(text: &str) -> Result<Vec<Tok>, SearchError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '\u{2227}' || c == '&' {
            if c == '&' && i + 1 < chars.len() && chars[i + 1] == '&' {
                i += 1;
            }
            toks.push(Tok::And);
            i += 1;
        } else if c == '\u{ac}' || c == '!' {
            toks.push(Tok::Not);
            i += 1;
        } else if c == '(' {
            toks.push(Tok::Open);
            i += 1;
        } else if c == ')' {
            toks.push(Tok::Close);
            i += 1;
        } else if atom_char(c) {
            let start = i;
            while i < chars.len() && atom_char(chars[i]) {
                i += 1;
            }
            // an immediately following parenthesis is part of the name,
            // as in completely_regular(τ(μ))
            if i < chars.len() && chars[i] == '(' {
                let mut depth = 0usize;
                while i < chars.len() {
                    if chars[i] == '(' {
                        depth += 1;
                    } else if chars[i] == ')' {
                        depth -= 1;
                        if depth == 0 {
                            i += 1;
                            break;
                        }
                    }
                    i += 1;
                }
                if depth != 0 {
                    return Err(SearchError::BadExpression(
                        "unbalanced parentheses in atom".to_string(),
                    ));
                }
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "and" => toks.push(Tok::And),
                "not" => toks.push(Tok::Not),
                _ => toks.push(Tok::Atom(word)),
            }
        } else {
            return Err(SearchError::BadExpression(format!("unexpected character {c:?}")));
        }
    }
    Ok(toks)
}

fn parse_unary(toks: &[Tok], pos: &mut usize) -> Result<Expr, SearchError> {
    match toks.get(*pos) {
        Some(Tok::Not) => {
            *pos += 1;
            Ok(Expr::Not(Box::new(parse_unary(toks, pos)?)))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let inner = parse_expr(toks, pos)?;
            match toks.get(*pos) {
                Some(Tok::Close) => {
                    *pos += 1;
                    Ok(inner)
                }
                _ => Err(SearchError::BadExpression("expected closing parenthesis".to_string())),
            }
        }
        Some(Tok::Atom(a)) => {
            *pos += 1;
            Ok(Expr::Atom(a.clone()))
        }
        _ => Err(SearchError::BadExpression("expected an atom".to_string())),
    }
}

fn parse_expr(toks: &[Tok], pos: &mut usize) -> Result<Expr, SearchError> {
    let mut left = parse_unary(toks, pos)?;
    while matches!(toks.get(*pos), Some(Tok::And)) {
        *pos += 1;
        let right = parse_unary(toks, pos)?;
        left = Expr::And(Box::new(left), Box::new(right));
    }
    Ok(left)
}

/// Parses a target expression: atoms, `∧`/`&`/`and`, `¬`/`!`/`not`, and
/// grouping parentheses.
pub fn parse_target(text: &str) -> Result<Expr, SearchError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(SearchError::BadExpression("empty expression".to_string()));
    }
    let mut pos = 0;
    let expr = parse_expr(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(SearchError::BadExpression("trailing tokens".to_string()));
    }
    Ok(expr)
}

impl Expr {
    /// Atom names in order of first appearance.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                Expr::Not(inner) => walk(inner, out),
                Expr::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    fn value(&self, lookup: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Expr::Atom(a) => lookup(a),
            Expr::Not(inner) => !inner.value(lookup),
            Expr::And(l, r) => l.value(lookup) && r.value(lookup),
        }
    }
}

// ---- enumeration ----

/// Canonical structures of one kind and carrier size, ascending by
/// encoding. The size bound caps the entourage basis length and the open
/// family size; nearness tables have no free size parameter.
pub fn enumerate(
    kind: SearchKind,
    n: usize,
    size_bound: usize,
) -> Result<Vec<SearchStructure>, SearchError> {
    if n < 1 || size_bound < 1 {
        return Err(SearchError::BadBounds);
    }
    let ceiling = kind.effective_ceiling();
    if n > ceiling {
        return Err(SearchError::CeilingExceeded { kind: kind.as_str(), requested: n, ceiling });
    }
    let mut classes: BTreeMap<Vec<u128>, SearchStructure> = BTreeMap::new();
    let mut put = |s: SearchStructure| {
        let c = s.canonical();
        classes.entry(c.encoding()).or_insert(c);
    };
    match kind {
        SearchKind::Pretopology => {
            for tau in pretop::enumerate(n) {
                if tau.open_count() <= size_bound {
                    put(SearchStructure::Pretopology(tau));
                }
            }
        }
        SearchKind::PreuniformityBasis => {
            for mu in preunif::enumerate_valid(n) {
                if mu.basis().len() <= size_bound {
                    put(SearchStructure::Preuniformity(mu));
                }
            }
        }
        SearchKind::Preproximity => {
            for delta in preprox::enumerate(n) {
                put(SearchStructure::Preproximity(delta));
            }
        }
        SearchKind::Pretopgroup => {
            for g in GroupTable::all_of_order(n) {
                for tau in pretop::enumerate(n) {
                    if tau.open_count() <= size_bound {
                        put(SearchStructure::Pretopgroup(g.clone(), tau));
                    }
                }
            }
        }
    }
    Ok(classes.into_values().collect())
}

// ---- hunting ----

/// What to hunt: a structure kind, carrier and size bounds, and the
/// target expression over registered checker names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchSpec {
    pub kind: SearchKind,
    pub carrier_bound: usize,
    pub size_bound: usize,
    pub target: String,
}

impl SearchSpec {
    /// Checks bounds, ceiling, grammar, and name resolution.
    pub fn validate(&self) -> Result<Expr, SearchError> {
        if self.carrier_bound < 1 || self.size_bound < 1 {
            return Err(SearchError::BadBounds);
        }
        let ceiling = self.kind.effective_ceiling();
        if self.carrier_bound > ceiling {
            return Err(SearchError::CeilingExceeded {
                kind: self.kind.as_str(),
                requested: self.carrier_bound,
                ceiling,
            });
        }
        let expr = parse_target(&self.target)?;
        for atom in expr.atoms() {
            resolve(&atom, self.kind)?;
        }
        Ok(expr)
    }
}

/// A found witness: the structure, its trace, and its class id.
#[derive(Clone, PartialEq, Debug)]
pub struct CertificateData {
    pub target: String,
    pub canonical_id: String,
    pub structure: SearchStructure,
    pub trace: Vec<TraceEntry>,
}

impl CertificateData {
    pub fn to_envelope(&self) -> Envelope {
        Envelope::new(interchange::Body::Certificate {
            target: self.target.clone(),
            canonical_id: self.canonical_id.clone(),
            structure: Box::new(self.structure.to_envelope()),
            trace: self.trace.clone(),
        })
    }
}

/// A completed sweep with nothing found: the exact bounds searched.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExhaustionData {
    pub target: String,
    pub kind: SearchKind,
    pub carrier_bound: usize,
    pub size_bound: usize,
    pub examined: usize,
}

impl ExhaustionData {
    pub fn to_envelope(&self) -> Envelope {
        Envelope::new(interchange::Body::Exhaustion {
            target: self.target.clone(),
            structure_kind: self.kind.as_str().to_string(),
            carrier_bound: self.carrier_bound,
            size_bound: self.size_bound,
            examined: self.examined,
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum HuntOutcome {
    Found(CertificateData),
    Exhausted(ExhaustionData),
}

impl HuntOutcome {
    pub fn to_envelope(&self) -> Envelope {
        match self {
            HuntOutcome::Found(c) => c.to_envelope(),
            HuntOutcome::Exhausted(e) => e.to_envelope(),
        }
    }
}

fn evaluate(expr: &Expr, spec: &SearchSpec, s: &SearchStructure) -> (bool, Vec<TraceEntry>) {
    let atoms = expr.atoms();
    let mut trace = Vec::with_capacity(atoms.len());
    let mut values: BTreeMap<String, bool> = BTreeMap::new();
    for atom in &atoms {
        let def = resolve(atom, spec.kind).expect("validated spec");
        let value = (def.eval)(s);
        values.insert(atom.clone(), value);
        trace.push(TraceEntry { atom: atom.clone(), value });
    }
    (expr.value(&|a: &str| values[a]), trace)
}

fn all_structures(spec: &SearchSpec) -> Result<Vec<SearchStructure>, SearchError> {
    let mut out = Vec::new();
    for n in 1..=spec.carrier_bound {
        out.extend(enumerate(spec.kind, n, spec.size_bound)?);
    }
    Ok(out)
}

fn hunt_over(
    spec: &SearchSpec,
    expr: &Expr,
    structures: &[SearchStructure],
    examined_total: usize,
) -> HuntOutcome {
    for s in structures {
        let (hit, trace) = evaluate(expr, spec, s);
        if hit {
            return HuntOutcome::Found(CertificateData {
                target: spec.target.clone(),
                canonical_id: s.canonical_id(),
                structure: s.clone(),
                trace,
            });
        }
    }
    HuntOutcome::Exhausted(ExhaustionData {
        target: spec.target.clone(),
        kind: spec.kind,
        carrier_bound: spec.carrier_bound,
        size_bound: spec.size_bound,
        examined: examined_total,
    })
}

/// First certificate in canonical order, or exhaustion with the exact
/// bounds. Deterministic: same spec, same outcome, byte for byte.
pub fn hunt(spec: &SearchSpec) -> Result<HuntOutcome, SearchError> {
    let expr = spec.validate()?;
    let structures = all_structures(spec)?;
    Ok(hunt_over(spec, &expr, &structures, structures.len()))
}

/// The shard's slice of the same canonical order: contiguous chunk
/// `index` of `count`. Merging shard outcomes in index order reproduces
/// the unsharded outcome.
pub fn hunt_shard(spec: &SearchSpec, index: usize, count: usize) -> Result<HuntOutcome, SearchError> {
    if count < 1 || index >= count {
        return Err(SearchError::BadBounds);
    }
    let expr = spec.validate()?;
    let structures = all_structures(spec)?;
    let chunk = structures.len().div_ceil(count);
    let lo = (index * chunk).min(structures.len());
    let hi = ((index + 1) * chunk).min(structures.len());
    Ok(hunt_over(spec, &expr, &structures[lo..hi], hi - lo))
}

/// Combines shard outcomes in shard order: the first certificate wins,
/// otherwise one exhaustion with the summed examination count.
pub fn merge_outcomes(outcomes: &[HuntOutcome]) -> Option<HuntOutcome> {
    let mut examined = 0usize;
    let mut last: Option<&ExhaustionData> = None;
    for o in outcomes {
        match o {
            HuntOutcome::Found(c) => {
                return Some(HuntOutcome::Found(c.clone()));
            }
            HuntOutcome::Exhausted(e) => {
                examined += e.examined;
                last = Some(e);
            }
        }
    }
    last.map(|e| {
        HuntOutcome::Exhausted(ExhaustionData { examined, ..e.clone() })
    })
}

/// Replays a certificate from its document alone: rebuilds the structure,
/// re-runs every trace atom, and checks the canonical id, the recorded
/// verdicts, and the target against the fresh verdicts.
pub fn verify_certificate(env: &Envelope) -> Result<bool, SearchError> {
    let (target, canonical_id, structure_env, trace) = match &env.body {
        interchange::Body::Certificate { target, canonical_id, structure, trace } => {
            (target, canonical_id, structure, trace)
        }
        other => {
            return Err(SearchError::MalformedCertificate(format!(
                "expected a certificate document, found {}",
                other.kind_name()
            )))
        }
    };
    let loaded = interchange::load(structure_env)?;
    let structure = SearchStructure::from_loaded(&loaded.structure)?;
    let kind = structure.kind();
    let expr = parse_target(target)?;
    let expr_atoms = expr.atoms();
    let trace_atoms: Vec<String> = trace.iter().map(|t| t.atom.clone()).collect();
    if expr_atoms != trace_atoms {
        return Ok(false);
    }
    let mut values: BTreeMap<String, bool> = BTreeMap::new();
    for entry in trace {
        let def = resolve(&entry.atom, kind)?;
        let fresh = (def.eval)(&structure);
        if fresh != entry.value {
            return Ok(false);
        }
        values.insert(entry.atom.clone(), fresh);
    }
    if !expr.value(&|a: &str| values[a]) {
        return Ok(false);
    }
    Ok(structure.canonical_id() == *canonical_id)
}

// ---- seeded sampling past the enumeration ceiling ----

fn transitive_closure(r: &Relation) -> Relation {
    let mut cur = *r;
    loop {
        let next = cur.union(&cur.compose(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Deterministic stream of valid families on a carrier too large to
/// enumerate: random reflexive-transitive members together with their
/// inverses, rejected until the axioms pass.
pub fn sample_valid_preuniformities(n: usize, count: usize, seed: u64) -> Vec<PreUniformity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let groups = rng.gen_range(1..=2);
        let mut members = Vec::new();
        for _ in 0..groups {
            let mut r = Relation::diagonal(n);
            for x in 0..n {
                for y in 0..n {
                    if x != y && rng.gen_bool(1.0 / (n as f64 + 1.0)) {
                        r = r.with_pair(x, y);
                    }
                }
            }
            let p = transitive_closure(&r);
            members.push(p);
            members.push(p.inverse());
        }
        if let Ok(mu) = PreUniformity::from_members(n, &members) {
            out.push(mu);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interchange::Body;

    fn spec(kind: SearchKind, bound: usize, target: &str) -> SearchSpec {
        SearchSpec {
            kind,
            carrier_bound: bound,
            size_bound: usize::MAX >> 1,
            target: target.to_string(),
        }
    }

    #[test]
    fn registry_names_resolve_per_kind() {
        assert!(resolve("strong", SearchKind::PreuniformityBasis).is_ok());
        assert!(matches!(
            resolve("strong", SearchKind::Pretopology),
            Err(SearchError::WrongKindProperty { .. })
        ));
        assert!(matches!(
            resolve("no_such_thing", SearchKind::Pretopology),
            Err(SearchError::UnknownProperty(_))
        ));
        // the decorated form used in write-ups normalizes for families
        assert!(resolve("completely_regular(τ(μ))", SearchKind::PreuniformityBasis).is_ok());
        assert!(resolve("completely_regular(tau(mu))", SearchKind::PreuniformityBasis).is_ok());
    }

    #[test]
    fn expression_grammar_accepts_all_spellings() {
        let a = parse_target("strong ∧ ¬symmetric").unwrap();
        let b = parse_target("strong & !symmetric").unwrap();
        let c = parse_target("strong and not symmetric").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.atoms(), vec!["strong".to_string(), "symmetric".to_string()]);
        let grouped = parse_target("!(t0 && t1) && regular").unwrap();
        assert_eq!(
            grouped.atoms(),
            vec!["t0".to_string(), "t1".to_string(), "regular".to_string()]
        );
        assert!(parse_target("").is_err());
        assert!(parse_target("a ∧").is_err());
        assert!(parse_target("(a").is_err());
    }

    #[test]
    fn pretopology_classes_match_the_orbit_count() {
        // Burnside: classes = average number of families fixed by a
        // relabeling.
        for n in 1..=3usize {
            let all = pretop::enumerate(n);
            let mut fixed_total = 0usize;
            let perms = permutations(n);
            for p in &perms {
                fixed_total += all
                    .iter()
                    .filter(|t| {
                        let s = SearchStructure::Pretopology((*t).clone());
                        s.permuted(p) == s
                    })
                    .count();
            }
            let classes = enumerate(SearchKind::Pretopology, n, usize::MAX >> 1).unwrap();
            assert_eq!(classes.len(), fixed_total / perms.len());
        }
    }

    #[test]
    fn known_class_counts() {
        let count = |kind, n| enumerate(kind, n, usize::MAX >> 1).unwrap().len();
        assert_eq!(count(SearchKind::Pretopology, 1), 1);
        assert_eq!(count(SearchKind::Pretopology, 2), 3);
        assert_eq!(count(SearchKind::PreuniformityBasis, 1), 1);
        // exactly the discrete family and the two-preorder crossing
        assert_eq!(count(SearchKind::PreuniformityBasis, 2), 2);
        assert_eq!(count(SearchKind::Preproximity, 1), 1);
        assert_eq!(count(SearchKind::Preproximity, 2), 1);
        assert_eq!(count(SearchKind::Preproximity, 3), 2);
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        for kind in [
            SearchKind::Pretopology,
            SearchKind::PreuniformityBasis,
            SearchKind::Preproximity,
        ] {
            let structures = enumerate(kind, 3, usize::MAX >> 1).unwrap();
            let encodings: Vec<Vec<u128>> = structures.iter().map(|s| s.encoding()).collect();
            let mut sorted = encodings.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(encodings, sorted);
            for s in &structures {
                assert_eq!(s.canonical().encoding(), s.encoding());
            }
        }
    }

    #[test]
    fn ceilings_are_enforced() {
        assert!(matches!(
            enumerate(SearchKind::Preproximity, 4, 8),
            Err(SearchError::CeilingExceeded { .. })
        ));
        let spec = SearchSpec {
            kind: SearchKind::PreuniformityBasis,
            carrier_bound: 4,
            size_bound: 4,
            target: "strong".to_string(),
        };
        assert!(matches!(spec.validate(), Err(SearchError::CeilingExceeded { .. })));
    }

    #[test]
    fn strong_not_symmetric_hunt_finds_the_two_point_crossing() {
        let outcome = hunt(&spec(SearchKind::PreuniformityBasis, 2, "strong ∧ ¬symmetric"))
            .unwrap();
        match outcome {
            HuntOutcome::Found(cert) => {
                let expected = PreUniformity::from_members(
                    2,
                    &[
                        Relation::diagonal(2).with_pair(0, 1),
                        Relation::diagonal(2).with_pair(1, 0),
                    ],
                )
                .unwrap();
                assert_eq!(
                    cert.structure,
                    SearchStructure::Preuniformity(expected)
                );
                assert_eq!(
                    cert.trace,
                    vec![
                        TraceEntry { atom: "strong".to_string(), value: true },
                        TraceEntry { atom: "symmetric".to_string(), value: false },
                    ]
                );
                assert!(verify_certificate(&cert.to_envelope()).unwrap());
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_not_strong_hunt_exhausts_two_points() {
        let outcome = hunt(&spec(SearchKind::PreuniformityBasis, 2, "symmetric ∧ ¬strong"))
            .unwrap();
        match outcome {
            HuntOutcome::Exhausted(e) => {
                assert_eq!(e.carrier_bound, 2);
                assert_eq!(e.examined, 3);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn hunts_are_deterministic_and_shardable() {
        let s = spec(SearchKind::PreuniformityBasis, 2, "strong ∧ ¬symmetric");
        let once = hunt(&s).unwrap().to_envelope();
        let twice = hunt(&s).unwrap().to_envelope();
        assert_eq!(interchange::save(&once), interchange::save(&twice));
        let sharded: Vec<HuntOutcome> = (0..2)
            .map(|i| hunt_shard(&s, i, 2).unwrap())
            .collect();
        let merged = merge_outcomes(&sharded).unwrap();
        assert_eq!(interchange::save(&merged.to_envelope()), interchange::save(&once));

        let e = spec(SearchKind::PreuniformityBasis, 2, "symmetric ∧ ¬strong");
        let whole = hunt(&e).unwrap();
        let sharded: Vec<HuntOutcome> = (0..3)
            .map(|i| hunt_shard(&e, i, 3).unwrap())
            .collect();
        assert_eq!(merge_outcomes(&sharded).unwrap(), whole);
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let outcome = hunt(&spec(SearchKind::PreuniformityBasis, 2, "strong ∧ ¬symmetric"))
            .unwrap();
        let HuntOutcome::Found(cert) = outcome else {
            panic!("expected a certificate")
        };
        let env = cert.to_envelope();
        assert!(verify_certificate(&env).unwrap());

        // flip one trace bit
        let mut tampered = env.clone();
        if let Body::Certificate { trace, .. } = &mut tampered.body {
            trace[1].value = true;
        }
        assert!(!verify_certificate(&tampered).unwrap());

        // swap in a different structure of the same kind
        let mut swapped = env.clone();
        if let Body::Certificate { structure, .. } = &mut swapped.body {
            *structure =
                Box::new(SearchStructure::Preuniformity(PreUniformity::discrete(2)).to_envelope());
        }
        assert!(!verify_certificate(&swapped).unwrap());

        // non-certificate documents are malformed input
        let plain = SearchStructure::Preuniformity(PreUniformity::discrete(2)).to_envelope();
        assert!(matches!(
            verify_certificate(&plain),
            Err(SearchError::MalformedCertificate(_))
        ));
    }

    #[test]
    fn certificates_replay_from_bytes_alone() {
        let outcome = hunt(&spec(SearchKind::PreuniformityBasis, 2, "strong ∧ ¬symmetric"))
            .unwrap();
        let text = interchange::save(&outcome.to_envelope());
        let env: Envelope = serde_json::from_str(&text).unwrap();
        assert!(verify_certificate(&env).unwrap());
    }

    #[test]
    fn group_hunt_finds_an_unseparated_pretopological_group() {
        // The paper asks whether every pre-topological group is
        // completely regular; the indiscrete two-element group answers no
        // at two points.
        let outcome = hunt(&spec(
            SearchKind::Pretopgroup,
            4,
            "pretopological_group ∧ ¬completely_regular",
        ))
        .unwrap();
        match outcome {
            HuntOutcome::Found(cert) => {
                let SearchStructure::Pretopgroup(g, tau) = &cert.structure else {
                    panic!("wrong structure kind")
                };
                assert_eq!(g.n(), 2);
                assert_eq!(*tau, PreTopology::indiscrete(2));
                assert!(verify_certificate(&cert.to_envelope()).unwrap());
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn nearness_hunt_finds_the_sup_counterexample() {
        // sup of a one-member family can be strictly finer than the
        // member: the anchor nearness on three points.
        let outcome = hunt(&spec(
            SearchKind::Preproximity,
            3,
            "preproximity ∧ ¬sup_singleton_identity",
        ))
        .unwrap();
        match outcome {
            HuntOutcome::Found(cert) => {
                let SearchStructure::Preproximity(d) = &cert.structure else {
                    panic!("wrong structure kind")
                };
                assert_eq!(d.n(), 3);
                assert!(verify_certificate(&cert.to_envelope()).unwrap());
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn theorem_shaped_checkers_pass_on_small_valid_families() {
        for n in 1..=2usize {
            for s in enumerate(SearchKind::PreuniformityBasis, n, 8).unwrap() {
                for name in [
                    "induced_opens_regular",
                    "t0_matches_diagonal_criterion",
                    "closed_members_form_prebase",
                    "open_members_form_prebase",
                    "neighborhood_prebase_at_each_point",
                    "strong_implies_completely_regular",
                    "coreflection_separation_transfer",
                    "coreflection_is_uniformity_above",
                    "nearness_from_entourages",
                    "reflection_compatible_and_coarser",
                ] {
                    let def = resolve(name, SearchKind::PreuniformityBasis).unwrap();
                    assert!((def.eval)(&s), "{name} fails on {:?}", s);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let a = sample_valid_preuniformities(4, 25, 7);
        let b = sample_valid_preuniformities(4, 25, 7);
        assert_eq!(a, b);
        for mu in &a {
            assert!(mu.classification().preuniformity);
            assert_eq!(mu.n(), 4);
        }
        let c = sample_valid_preuniformities(4, 25, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn canonical_ids_are_relabeling_invariant() {
        let mu = PreUniformity::from_members(
            3,
            &[
                Relation::diagonal(3).with_pair(0, 1).with_pair(1, 0),
                Relation::diagonal(3).with_pair(0, 2).with_pair(2, 0),
            ],
        )
        .unwrap();
        let s = SearchStructure::Preuniformity(mu);
        let id = s.canonical_id();
        for p in permutations(3) {
            assert_eq!(s.permuted(&p).canonical_id(), id);
        }
    }
}
