//! Pre-topologies on finite carriers.
//!
//! A pre-topology is a family of subsets that covers the carrier and is
//! closed under arbitrary unions; nothing is demanded of intersections, so
//! there need not be a smallest neighborhood of a point. On a finite carrier
//! union-closure is equivalent to containing the empty set (the empty union)
//! and being closed under binary unions.
//!
//! Closed sets are complements of opens; they are closed under arbitrary
//! intersections, which makes the closure operator (smallest closed
//! superset) well defined even though interiors and closures no longer
//! satisfy all the usual topological identities.

use std::collections::HashSet;

use thiserror::Error;

pub use crate::relcore::PointMap;
use crate::relcore::{Subset, MAX_POINTS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PretopError {
    #[error("prebase does not cover carrier")]
    PrebaseDoesNotCover,
    #[error("family does not contain the empty set")]
    MissingEmptySet,
    #[error("family is not closed under binary unions")]
    NotUnionClosed,
    #[error("family does not cover the carrier")]
    DoesNotCover,
    #[error("carrier size mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("carrier would need {0} points; at most {1} are supported")]
    CarrierTooLarge(usize, usize),
}

/// A pre-topology, stored as the sorted list of open-set bitmasks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreTopology {
    n: usize,
    opens: Vec<u128>,
}

fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// All unions of subfamilies of the generators, the empty union included.
fn union_closure(gens: &[u128]) -> Vec<u128> {
    let mut set: HashSet<u128> = HashSet::new();
    set.insert(0);
    for &g in gens {
        let snapshot: Vec<u128> = set.iter().copied().collect();
        for s in snapshot {
            set.insert(s | g);
        }
    }
    let mut v: Vec<u128> = set.into_iter().collect();
    v.sort_unstable();
    v
}

impl PreTopology {
    /// Validates cover and union-closure and builds the pre-topology.
    pub fn new(n: usize, opens: &[Subset]) -> Result<Self, PretopError> {
        for s in opens {
            if s.n() != n {
                return Err(PretopError::CarrierMismatch(s.n(), n));
            }
        }
        let mut masks: Vec<u128> = opens.iter().map(|s| s.bits()).collect();
        masks.sort_unstable();
        masks.dedup();
        Self::from_masks(n, masks)
    }

    /// Same as `new` for masks already extracted.
    pub fn from_masks(n: usize, mut masks: Vec<u128>) -> Result<Self, PretopError> {
        masks.sort_unstable();
        masks.dedup();
        if masks.first() != Some(&0) {
            return Err(PretopError::MissingEmptySet);
        }
        if masks.iter().fold(0u128, |a, m| a | m) != full_mask(n) {
            return Err(PretopError::DoesNotCover);
        }
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                let u = masks[i] | masks[j];
                if masks.binary_search(&u).is_err() {
                    return Err(PretopError::NotUnionClosed);
                }
            }
        }
        Ok(PreTopology { n, opens: masks })
    }

    /// Caller guarantees the family is a pre-topology (used by generators
    /// that are union-closed by construction).
    pub(crate) fn from_masks_unchecked(n: usize, masks: Vec<u128>) -> Self {
        debug_assert!(PreTopology::from_masks(n, masks.clone()).is_ok());
        let mut masks = masks;
        masks.sort_unstable();
        masks.dedup();
        PreTopology { n, opens: masks }
    }

    pub fn discrete(n: usize) -> Self {
        debug_assert!(n <= 20, "discrete pre-topology would not fit in memory");
        PreTopology { n, opens: (0..1u128 << n).collect() }
    }

    pub fn indiscrete(n: usize) -> Self {
        if n == 0 {
            return PreTopology { n, opens: vec![0] };
        }
        PreTopology { n, opens: vec![0, full_mask(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn open_masks(&self) -> &[u128] {
        &self.opens
    }

    pub fn opens(&self) -> impl Iterator<Item = Subset> + '_ {
        self.opens.iter().map(move |&m| Subset::from_bits(self.n, m))
    }

    pub fn is_open(&self, s: &Subset) -> bool {
        s.n() == self.n && self.opens.binary_search(&s.bits()).is_ok()
    }

    pub fn is_closed(&self, s: &Subset) -> bool {
        self.is_open(&s.complement())
    }

    pub fn closed_masks(&self) -> Vec<u128> {
        let full = full_mask(self.n);
        let mut v: Vec<u128> = self.opens.iter().map(|&m| full & !m).collect();
        v.sort_unstable();
        v
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1usize << self.n
    }

    /// Smallest closed superset: the complement of the union of all opens
    /// missing `f`.
    pub fn closure(&self, f: &Subset) -> Subset {
        assert_eq!(f.n(), self.n, "carrier mismatch");
        let mut away = 0u128;
        for &m in &self.opens {
            if m & f.bits() == 0 {
                away |= m;
            }
        }
        Subset::from_bits(self.n, full_mask(self.n) & !away)
    }

    /// Largest open subset: the union of all opens inside `b`.
    pub fn interior(&self, b: &Subset) -> Subset {
        assert_eq!(b.n(), self.n, "carrier mismatch");
        let mut inside = 0u128;
        for &m in &self.opens {
            if m & !b.bits() == 0 {
                inside |= m;
            }
        }
        Subset::from_bits(self.n, inside)
    }

    pub fn separation_profile(&self) -> SeparationProfile {
        let n = self.n;
        let opens = &self.opens;

        let mut t0 = true;
        let mut t1 = true;
        let mut t2 = true;
        for y in 0..n {
            for z in y + 1..n {
                let pair = (1u128 << y) | (1u128 << z);
                t0 &= opens.iter().any(|&w| {
                    let hit = w & pair;
                    hit != 0 && hit != pair
                });
                t1 &= opens.iter().any(|&v| v & pair == 1 << y)
                    && opens.iter().any(|&w| w & pair == 1 << z);
                t2 &= opens.iter().any(|&v| {
                    v >> y & 1 == 1 && opens.iter().any(|&w| w >> z & 1 == 1 && v & w == 0)
                });
            }
        }

        let closeds = self.closed_masks();
        let mut point_sep = true; // every point splits from every closed set it avoids
        let mut clopen_sep = true; // ... by a complementary open pair
        let full = full_mask(n);
        for z in 0..n {
            for &c in &closeds {
                if c >> z & 1 == 1 {
                    continue;
                }
                point_sep &= opens.iter().any(|&v| {
                    v >> z & 1 == 1 && opens.iter().any(|&o| c & !o == 0 && v & o == 0)
                });
                clopen_sep &= opens.iter().any(|&a| {
                    a >> z & 1 == 1 && a & c == 0 && opens.binary_search(&(full & !a)).is_ok()
                });
            }
        }

        let mut normal = true;
        for &a in &closeds {
            for &b in &closeds {
                if a & b != 0 {
                    continue;
                }
                normal &= opens.iter().any(|&u| {
                    a & !u == 0 && opens.iter().any(|&v| b & !v == 0 && u & v == 0)
                });
            }
        }

        SeparationProfile {
            t0,
            t1,
            t2,
            regular: t1 && point_sep,
            completely_regular: t1 && clopen_sep,
            normal,
        }
    }
}

/// Verdicts for the separation axioms. `regular` and `completely_regular`
/// include the T1 conjunct; `normal` is bare disjoint-closed separation.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct SeparationProfile {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    pub regular: bool,
    pub completely_regular: bool,
    pub normal: bool,
}

/// The family of all unions of subfamilies of the pre-base. Errors out when
/// the pre-base fails to cover the carrier rather than adjoining X.
pub fn generate(n: usize, prebase: &[Subset]) -> Result<PreTopology, PretopError> {
    for s in prebase {
        if s.n() != n {
            return Err(PretopError::CarrierMismatch(s.n(), n));
        }
    }
    let masks: Vec<u128> = prebase.iter().map(|s| s.bits()).collect();
    if masks.iter().fold(0u128, |a, m| a | m) != full_mask(n) {
        return Err(PretopError::PrebaseDoesNotCover);
    }
    Ok(PreTopology { n, opens: union_closure(&masks) })
}

/// Cover plus union-closure, the defining conditions.
pub fn is_pretopology(n: usize, family: &[Subset]) -> bool {
    family.iter().all(|s| s.n() == n) && PreTopology::new(n, family).is_ok()
}

/// Preimage of every open of the target is open in the source.
pub fn is_precontinuous(
    h: &PointMap,
    src: &PreTopology,
    dst: &PreTopology,
) -> Result<bool, PretopError> {
    if h.src_n() != src.n() {
        return Err(PretopError::CarrierMismatch(h.src_n(), src.n()));
    }
    if h.dst_n() != dst.n() {
        return Err(PretopError::CarrierMismatch(h.dst_n(), dst.n()));
    }
    Ok(dst.opens().all(|w| src.is_open(&h.preimage(&w))))
}

/// Union-closure of the open boxes `U x V`; the product carrier indexes the
/// pair `(i, j)` as `i * n2 + j`.
pub fn product_pretopology(
    t1: &PreTopology,
    t2: &PreTopology,
) -> Result<PreTopology, PretopError> {
    let (n1, n2) = (t1.n(), t2.n());
    let m = n1 * n2;
    if m > MAX_POINTS {
        return Err(PretopError::CarrierTooLarge(m, MAX_POINTS));
    }
    let mut boxes = Vec::with_capacity(t1.open_count() * t2.open_count());
    for &u in t1.open_masks() {
        for &v in t2.open_masks() {
            let mut b = 0u128;
            for i in 0..n1 {
                if u >> i & 1 == 1 {
                    b |= v << (i * n2);
                }
            }
            boxes.push(b);
        }
    }
    Ok(PreTopology { n: m, opens: union_closure(&boxes) })
}

/// Every pre-topology on `n` points, by brute force over family bitmasks:
/// a family qualifies when it holds the empty set and the carrier and is
/// closed under binary unions. Ascending family-mask order.
pub fn enumerate(n: usize) -> Vec<PreTopology> {
    assert!(n <= 4, "exhaustive enumeration is limited to four points");
    let s = 1usize << n;
    let mut out = Vec::new();
    for fam in 0..1u64 << s {
        if fam & 1 == 0 || fam >> (s - 1) & 1 == 0 {
            continue;
        }
        let closed = (0..s).all(|a| {
            fam >> a & 1 == 0
                || (a + 1..s).all(|b| fam >> b & 1 == 0 || fam >> (a | b) & 1 == 1)
        });
        if closed {
            let masks: Vec<u128> =
                (0..s).filter(|&m| fam >> m & 1 == 1).map(|m| m as u128).collect();
            out.push(PreTopology::from_masks_unchecked(n, masks));
        }
    }
    out
}

/// Projections of the product carrier back onto the factors.
pub fn projections(n1: usize, n2: usize) -> (PointMap, PointMap) {
    let mut p1 = Vec::with_capacity(n1 * n2);
    let mut p2 = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            p1.push(i);
            p2.push(j);
        }
    }
    (
        PointMap::new(n1 * n2, n1, p1).expect("projection in range"),
        PointMap::new(n1 * n2, n2, p2).expect("projection in range"),
    )
}
