//! Finite groups carrying a pre-topology: the group-axiom checked Cayley
//! table, pre-continuity of multiplication and inversion, symmetric
//! neighborhood pre-bases at the identity, and the translate-cover
//! pipeline that turns such a pre-base into a strong entourage family.
//!
//! The pipeline builds one cover of translates per pre-base member,
//! verifies the cover conditions, generates the entourage family from
//! block squares, and checks that the family induces the given opens and
//! that the space is completely regular. Each stage failure is reported
//! by name. The separating-cover condition holds exactly when the opens
//! are T1, so non-T1 carriers stop there; see the enumeration tests.

use thiserror::Error;

use crate::pretop::{PreTopology, PretopError, SeparationProfile};
use crate::preunif::{
    self, CoverCompatibility, CoverFamily, PreUniformity, PreunifError, UcReport,
};
use crate::relcore::{PointMap, Subset};

#[derive(Debug, Error, PartialEq)]
pub enum GroupsError {
    #[error("empty multiplication table")]
    EmptyTable,
    #[error("row {0} has {1} entries, expected {2}")]
    RaggedRow(usize, usize, usize),
    #[error("table entry {2} at ({0}, {1}) is outside the carrier")]
    EntryOutOfRange(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("carrier size mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("pre-base member {0:?} is not open")]
    BlockNotOpen(Subset),
    #[error("pre-base member {0:?} does not contain the identity")]
    BlockMissingIdentity(Subset),
    #[error("the pre-base does not make the group strongly pre-topological")]
    NotStronglyPretopological,
    #[error("the generated family induces different opens than given")]
    IncompatibleTopology,
    #[error("the opens are not completely regular")]
    NotCompletelyRegular,
    #[error(transparent)]
    Preunif(#[from] PreunifError),
    #[error(transparent)]
    Pretop(#[from] PretopError),
}

/// A finite group as a fully validated Cayley table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    e: usize,
}

impl GroupTable {
    /// Validates the group axioms exhaustively: squareness and range,
    /// a two-sided identity, two-sided inverses, and associativity.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, GroupsError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupsError::EmptyTable);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupsError::RaggedRow(x, row.len(), n));
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupsError::EntryOutOfRange(x, y, v));
                }
                mul.push(v);
            }
        }
        let op = |x: usize, y: usize| mul[x * n + y];
        let e = (0..n)
            .find(|&c| (0..n).all(|x| op(c, x) == x && op(x, c) == x))
            .ok_or(GroupsError::NoIdentity)?;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let i = (0..n)
                .find(|&y| op(x, y) == e && op(y, x) == e)
                .ok_or(GroupsError::NoInverse(x))?;
            inv.push(i);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if op(op(x, y), z) != op(x, op(y, z)) {
                        return Err(GroupsError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        Ok(GroupTable { n, mul, inv, e })
    }

    /// Addition modulo `n`.
    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        GroupTable::new(rows).expect("modular addition is a group")
    }

    /// The non-cyclic group of order four: every element squares to the
    /// identity, realized as bitwise xor on two bits.
    pub fn klein_four() -> Self {
        let rows = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        GroupTable::new(rows).expect("xor on two bits is a group")
    }

    /// All six permutations of three points, indexed in lexicographic
    /// order of their one-line notation, under composition
    /// `(g * h)(x) = g(h(x))`.
    pub fn symmetric_3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let rows = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index([g[h[0]], g[h[1]], g[h[2]]]))
                    .collect()
            })
            .collect();
        GroupTable::new(rows).expect("permutation composition is a group")
    }

    /// One group per isomorphism class of the given order, up to four.
    pub fn all_of_order(k: usize) -> Vec<GroupTable> {
        assert!((1..=4).contains(&k), "catalog covers orders one to four");
        match k {
            4 => vec![GroupTable::cyclic(4), GroupTable::klein_four()],
            _ => vec![GroupTable::cyclic(k)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.e
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// The translate `g · A`.
    pub fn translate(&self, g: usize, a: &Subset) -> Subset {
        assert_eq!(a.n(), self.n, "carrier mismatch");
        let mut out = Subset::empty(self.n);
        for x in a.points() {
            out = out.with(self.op(g, x));
        }
        out
    }

    /// Elementwise product `A · B`.
    pub fn set_product(&self, a: &Subset, b: &Subset) -> Subset {
        assert_eq!(a.n(), self.n, "carrier mismatch");
        assert_eq!(b.n(), self.n, "carrier mismatch");
        let mut out = Subset::empty(self.n);
        for x in a.points() {
            for y in b.points() {
                out = out.with(self.op(x, y));
            }
        }
        out
    }

    /// Elementwise inverse `A⁻¹`.
    pub fn set_inverse(&self, a: &Subset) -> Subset {
        assert_eq!(a.n(), self.n, "carrier mismatch");
        let mut out = Subset::empty(self.n);
        for x in a.points() {
            out = out.with(self.inv(x));
        }
        out
    }

    /// The map `x ↦ g · x` on the carrier.
    pub fn left_translation(&self, g: usize) -> PointMap {
        PointMap::new(self.n, self.n, (0..self.n).map(|x| self.op(g, x)).collect())
            .expect("translation stays in the carrier")
    }
}

/// Whether multiplication is pre-continuous from the product of the opens
/// with themselves and inversion is pre-continuous on the opens.
///
/// Multiplication is checked without materializing the product family:
/// its preimage of an open `W` is product-open exactly when every pair in
/// it sits in an open box inside it, and for a fixed left open `U` the
/// admissible right sets are the opens inside `⋂_{u∈U} u⁻¹W`.
pub fn is_pretopological_group(
    g: &GroupTable,
    tau: &PreTopology,
) -> Result<bool, GroupsError> {
    let n = g.n();
    if tau.n() != n {
        return Err(GroupsError::CarrierMismatch(tau.n(), n));
    }
    for w in tau.opens() {
        let inv_preimage = {
            let mut s = Subset::empty(n);
            for x in 0..n {
                if w.contains(g.inv(x)) {
                    s = s.with(x);
                }
            }
            s
        };
        if !tau.is_open(&inv_preimage) {
            return Ok(false);
        }

        let row: Vec<Subset> = (0..n).map(|x| g.translate(g.inv(x), &w)).collect();
        let mut reachable = vec![Subset::empty(n); n];
        for u in tau.opens() {
            let mut meet = Subset::full(n);
            for x in u.points() {
                meet = meet.inter(&row[x]);
            }
            let open_part = tau.interior(&meet);
            for x in u.points() {
                reachable[x] = reachable[x].union(&open_part);
            }
        }
        if (0..n).any(|x| !row[x].is_subset_of(&reachable[x])) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn validate_prebase(
    g: &GroupTable,
    tau: &PreTopology,
    b_e: &[Subset],
) -> Result<(), GroupsError> {
    if tau.n() != g.n() {
        return Err(GroupsError::CarrierMismatch(tau.n(), g.n()));
    }
    for v in b_e {
        if v.n() != g.n() {
            return Err(GroupsError::CarrierMismatch(v.n(), g.n()));
        }
        if !tau.is_open(v) {
            return Err(GroupsError::BlockNotOpen(*v));
        }
        if !v.contains(g.identity()) {
            return Err(GroupsError::BlockMissingIdentity(*v));
        }
    }
    Ok(())
}

/// Whether `b_e` is a symmetric neighborhood pre-base at the identity
/// whose members square into each other: every open containing the
/// identity contains a member, each member equals its elementwise
/// inverse, and each member contains the square of some member.
pub fn is_strongly_pretopological_group(
    g: &GroupTable,
    tau: &PreTopology,
    b_e: &[Subset],
) -> Result<bool, GroupsError> {
    validate_prebase(g, tau, b_e)?;
    let e = g.identity();
    let prebase = tau
        .opens()
        .filter(|o| o.contains(e))
        .all(|o| b_e.iter().any(|v| v.is_subset_of(&o)));
    let symmetric = b_e.iter().all(|v| g.set_inverse(v) == *v);
    let squares = b_e
        .iter()
        .all(|u| b_e.iter().any(|v| g.set_product(v, v).is_subset_of(u)));
    Ok(prebase && symmetric && squares)
}

/// Everything the translate-cover pipeline measured on the way to the
/// entourage family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPipelineReport {
    /// One cover of translates per pre-base member, deduplicated.
    pub covers: Vec<Vec<Subset>>,
    /// Cover-condition verdicts for the translate covers.
    pub uc: UcReport,
    /// Open blocks, the star clause, and agreement of the induced opens.
    pub compatibility: CoverCompatibility,
    /// Separation verdicts of the given opens.
    pub profile: SeparationProfile,
}

/// Runs the translate-cover pipeline: one cover `{x·U}` per pre-base
/// member `U`, the cover conditions, generation of the entourage family
/// from block squares, agreement of the induced opens with the given
/// ones, and complete regularity. The first failing stage is returned by
/// name; cover-condition failures carry their witnesses.
pub fn group_preuniformity(
    g: &GroupTable,
    tau: &PreTopology,
    b_e: &[Subset],
) -> Result<(PreUniformity, GroupPipelineReport), GroupsError> {
    if !is_strongly_pretopological_group(g, tau, b_e)? {
        return Err(GroupsError::NotStronglyPretopological);
    }
    let n = g.n();
    let covers: Vec<Vec<Subset>> = b_e
        .iter()
        .map(|u| {
            let mut blocks: Vec<Subset> = (0..n).map(|x| g.translate(x, u)).collect();
            blocks.sort();
            blocks.dedup();
            blocks
        })
        .collect();
    let family = CoverFamily::new(n, covers)?;
    let uc = preunif::uc_check(&family);
    let (mu, compat) = preunif::generate_from_covers(&family, Some(tau))?;
    let compatibility = compat.expect("a pre-topology was supplied");
    if !compatibility.induces_given {
        return Err(GroupsError::IncompatibleTopology);
    }
    let profile = tau.separation_profile();
    if !profile.completely_regular {
        return Err(GroupsError::NotCompletelyRegular);
    }
    let report =
        GroupPipelineReport { covers: family.covers().to_vec(), uc, compatibility, profile };
    Ok((mu, report))
}

/// Every non-empty family over the opens containing the identity; the
/// raw candidate pool for pre-bases at the identity.
pub fn candidate_prebases(g: &GroupTable, tau: &PreTopology) -> Vec<Vec<Subset>> {
    let around_e: Vec<Subset> =
        tau.opens().filter(|o| o.contains(g.identity())).collect();
    let mut out = Vec::new();
    for pick in 1..1u64 << around_e.len() {
        out.push(
            around_e
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> i & 1 == 1)
                .map(|(_, s)| *s)
                .collect(),
        );
    }
    out
}
