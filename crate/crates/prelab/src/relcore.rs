//! Binary relations on a finite carrier, packed into bitmasks.
//!
//! A carrier is an ordered list of point labels; subsets and relations on it
//! are value types backed by a `u128`, so a relation needs `n * n <= 128`
//! bits. Everything downstream (entourage families, induced topologies,
//! proximities) reduces to the algebra in this module: inverse, composition,
//! sections and the diagonal.

use std::fmt;

use thiserror::Error;

/// Largest carrier a `Subset` can live on (bits of the backing mask).
pub const MAX_POINTS: usize = 128;

/// Largest carrier a `Relation` can live on (`n * n` bits must fit).
pub const MAX_RELATION_POINTS: usize = 11;

/// Errors raised by carrier, subset and relation construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelError {
    #[error("carrier must have at least one point")]
    EmptyCarrier,
    #[error("carrier has {0} points; at most {1} are supported here")]
    TooManyPoints(usize, usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("point {0} out of range for a carrier of {1} points")]
    PointOutOfRange(usize, usize),
    #[error("carrier size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// An ordered, duplicate-free list of point labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Carrier {
    labels: Vec<String>,
}

impl Carrier {
    pub fn new<I, S>(labels: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(RelError::EmptyCarrier);
        }
        if labels.len() > MAX_POINTS {
            return Err(RelError::TooManyPoints(labels.len(), MAX_POINTS));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(RelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Carrier { labels })
    }

    /// Carrier `x0, x1, ...` of the given size.
    pub fn of_size(n: usize) -> Result<Self, RelError> {
        Carrier::new((0..n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty carriers
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, RelError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RelError::UnknownLabel(label.to_string()))
    }

    /// Product carrier with pair labels, point `(i, j)` at index `i * other.len() + j`.
    pub fn product(&self, other: &Carrier) -> Result<Carrier, RelError> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}.{b}"));
            }
        }
        Carrier::new(labels)
    }
}

/// A subset of an `n`-point carrier as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    n: u8,
    bits: u128,
}

fn low_mask(k: usize) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        Subset { n: n as u8, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        Subset { n: n as u8, bits: low_mask(n) }
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        debug_assert!(x < n);
        Subset { n: n as u8, bits: 1u128 << x }
    }

    pub fn from_bits(n: usize, bits: u128) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        Subset { n: n as u8, bits }
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(n: usize, points: I) -> Result<Self, RelError> {
        let mut bits = 0u128;
        for p in points {
            if p >= n {
                return Err(RelError::PointOutOfRange(p, n));
            }
            bits |= 1 << p;
        }
        Ok(Subset { n: n as u8, bits })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn card(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n() && self.bits >> x & 1 == 1
    }

    pub fn with(&self, x: usize) -> Self {
        debug_assert!(x < self.n());
        Subset { n: self.n, bits: self.bits | 1 << x }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.n, other.n, "subset carrier mismatch");
        Subset { n: self.n, bits: self.bits | other.bits }
    }

    pub fn inter(&self, other: &Subset) -> Subset {
        assert_eq!(self.n, other.n, "subset carrier mismatch");
        Subset { n: self.n, bits: self.bits & other.bits }
    }

    pub fn minus(&self, other: &Subset) -> Subset {
        assert_eq!(self.n, other.n, "subset carrier mismatch");
        Subset { n: self.n, bits: self.bits & !other.bits }
    }

    pub fn complement(&self) -> Subset {
        Subset { n: self.n, bits: !self.bits & low_mask(self.n()) }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n, "subset carrier mismatch");
        self.bits & !other.bits == 0
    }

    pub fn meets(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n, "subset carrier mismatch");
        self.bits & other.bits != 0
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        (0..n).filter(move |&x| self.contains(x))
    }

    /// Image of the subset under a relabeling of the carrier points.
    pub fn apply_perm(&self, perm: &[usize]) -> Subset {
        debug_assert_eq!(perm.len(), self.n());
        let mut bits = 0u128;
        for x in self.points() {
            bits |= 1 << perm[x];
        }
        Subset { n: self.n, bits }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.points().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A binary relation on an `n`-point carrier, row-major: bit `x * n + y`
/// holds the pair `(x, y)`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    n: u8,
    bits: u128,
}

impl Relation {
    pub fn check_size(n: usize) -> Result<(), RelError> {
        if n == 0 {
            return Err(RelError::EmptyCarrier);
        }
        if n > MAX_RELATION_POINTS {
            return Err(RelError::TooManyPoints(n, MAX_RELATION_POINTS));
        }
        Ok(())
    }

    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_RELATION_POINTS);
        Relation { n: n as u8, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_RELATION_POINTS);
        Relation { n: n as u8, bits: low_mask(n * n) }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut bits = 0u128;
        for x in 0..n {
            bits |= 1 << (x * n + x);
        }
        Relation { n: n as u8, bits }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self, RelError> {
        Relation::check_size(n)?;
        let mut bits = 0u128;
        for (x, y) in pairs {
            if x >= n {
                return Err(RelError::PointOutOfRange(x, n));
            }
            if y >= n {
                return Err(RelError::PointOutOfRange(y, n));
            }
            bits |= 1 << (x * n + y);
        }
        Ok(Relation { n: n as u8, bits })
    }

    pub fn from_bits(n: usize, bits: u128) -> Self {
        debug_assert!(bits & !low_mask(n * n) == 0);
        Relation { n: n as u8, bits }
    }

    /// The rectangle `A x B`.
    pub fn rect(a: &Subset, b: &Subset) -> Relation {
        assert_eq!(a.n(), b.n(), "subset carrier mismatch");
        let n = a.n();
        debug_assert!(n <= MAX_RELATION_POINTS);
        let mut bits = 0u128;
        for x in a.points() {
            bits |= (b.bits() as u128) << (x * n);
        }
        Relation { n: n as u8, bits }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn card(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        let n = self.n();
        x < n && y < n && self.bits >> (x * n + y) & 1 == 1
    }

    pub fn with_pair(&self, x: usize, y: usize) -> Relation {
        let n = self.n();
        debug_assert!(x < n && y < n);
        Relation { n: self.n, bits: self.bits | 1 << (x * n + y) }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        Relation { n: self.n, bits: self.bits | other.bits }
    }

    pub fn inter(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        Relation { n: self.n, bits: self.bits & other.bits }
    }

    pub fn minus(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        Relation { n: self.n, bits: self.bits & !other.bits }
    }

    pub fn complement(&self) -> Relation {
        let n = self.n();
        Relation { n: self.n, bits: !self.bits & low_mask(n * n) }
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        self.bits & !other.bits == 0
    }

    pub fn meets(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        self.bits & other.bits != 0
    }

    /// The inverse relation: `(x, y)` iff `(y, x)` in `self`.
    pub fn inverse(&self) -> Relation {
        let n = self.n();
        let mut bits = 0u128;
        for x in 0..n {
            for y in 0..n {
                if self.contains(x, y) {
                    bits |= 1 << (y * n + x);
                }
            }
        }
        Relation { n: self.n, bits }
    }

    /// Relational composition: `(x, y)` iff some `z` has `(x, z)` in `self`
    /// and `(z, y)` in `other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "relation carrier mismatch");
        let n = self.n();
        let mut bits = 0u128;
        for x in 0..n {
            let row_x = self.row_bits(x);
            let mut out = 0u128;
            for z in 0..n {
                if row_x >> z & 1 == 1 {
                    out |= other.row_bits(z);
                }
            }
            bits |= out << (x * n);
        }
        Relation { n: self.n, bits }
    }

    fn row_bits(&self, x: usize) -> u128 {
        let n = self.n();
        (self.bits >> (x * n)) & low_mask(n)
    }

    /// The section `R[x] = { y : (x, y) in R }`.
    pub fn section(&self, x: usize) -> Subset {
        debug_assert!(x < self.n());
        Subset::from_bits(self.n(), self.row_bits(x))
    }

    /// The column `{ y : (y, x) in R }`, i.e. the section of the inverse.
    pub fn column(&self, x: usize) -> Subset {
        let n = self.n();
        debug_assert!(x < n);
        let mut bits = 0u128;
        for y in 0..n {
            if self.contains(y, x) {
                bits |= 1 << y;
            }
        }
        Subset::from_bits(n, bits)
    }

    pub fn contains_diagonal(&self) -> bool {
        let d = Relation::diagonal(self.n());
        d.is_subset_of(self)
    }

    pub fn is_symmetric(&self) -> bool {
        self.inverse() == *self
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset_of(self)
    }

    pub fn symmetric_closure(&self) -> Relation {
        self.union(&self.inverse())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n * n).filter(move |i| self.bits >> i & 1 == 1).map(move |i| (i / n, i % n))
    }

    /// Image under a relabeling of the carrier points.
    pub fn apply_perm(&self, perm: &[usize]) -> Relation {
        let n = self.n();
        debug_assert_eq!(perm.len(), n);
        let mut bits = 0u128;
        for (x, y) in self.pairs() {
            bits |= 1 << (perm[x] * n + perm[y]);
        }
        Relation { n: self.n, bits }
    }

    /// Trace of the relation on a sub-carrier, reindexed along the kept
    /// points in increasing order.
    pub fn restrict_to(&self, keep: &Subset) -> Relation {
        assert_eq!(keep.n(), self.n(), "subset carrier mismatch");
        let kept: Vec<usize> = keep.points().collect();
        let m = kept.len();
        let mut bits = 0u128;
        for (i, &x) in kept.iter().enumerate() {
            for (j, &y) in kept.iter().enumerate() {
                if self.contains(x, y) {
                    bits |= 1 << (i * m + j);
                }
            }
        }
        Relation { n: m as u8, bits }
    }

    /// Relation as a point set of the product carrier `X x X`
    /// (pair `(x, y)` at product index `x * n + y`).
    pub fn as_product_subset(&self) -> Subset {
        let n = self.n();
        Subset::from_bits(n * n, self.bits)
    }

    pub fn from_product_subset(n: usize, s: &Subset) -> Relation {
        assert_eq!(s.n(), n * n, "product carrier mismatch");
        Relation { n: n as u8, bits: s.bits() }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

/// Every permutation of `0..n` in lexicographic order. Carriers stay small
/// (`n <= 8` in every enumeration), so the full factorial scan is cheap.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// All reflexive transitive relations on an `n`-point carrier, sorted by
/// mask. Brute filter over the off-diagonal bits; practical for `n <= 5`.
pub fn preorders(n: usize) -> Vec<Relation> {
    assert!(n <= 5, "preorder enumeration is a brute filter, n <= 5 only");
    let free = n * n - n;
    let diag = Relation::diagonal(n);
    let mut out = Vec::new();
    let off: Vec<usize> = (0..n * n)
        .filter(|i| i / n != i % n)
        .collect();
    for pick in 0..1u64 << free {
        let mut r = diag;
        for (k, &i) in off.iter().enumerate() {
            if pick >> k & 1 == 1 {
                r = r.with_pair(i / n, i % n);
            }
        }
        if r.is_transitive() {
            out.push(r);
        }
    }
    out.sort();
    out
}

/// All equivalence relations on an `n`-point carrier, sorted by mask.
pub fn equivalences(n: usize) -> Vec<Relation> {
    preorders(n).into_iter().filter(|r| r.is_symmetric()).collect()
}

/// A map between carriers, given pointwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointMap {
    src_n: usize,
    dst_n: usize,
    map: Vec<usize>,
}

impl PointMap {
    pub fn new(src_n: usize, dst_n: usize, map: Vec<usize>) -> Result<Self, RelError> {
        if map.len() != src_n {
            return Err(RelError::SizeMismatch(map.len(), src_n));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= dst_n) {
            return Err(RelError::PointOutOfRange(bad, dst_n));
        }
        Ok(PointMap { src_n, dst_n, map })
    }

    pub fn identity(n: usize) -> Self {
        PointMap { src_n: n, dst_n: n, map: (0..n).collect() }
    }

    pub fn src_n(&self) -> usize {
        self.src_n
    }

    pub fn dst_n(&self) -> usize {
        self.dst_n
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn preimage(&self, s: &Subset) -> Subset {
        assert_eq!(s.n(), self.dst_n, "target carrier mismatch");
        let mut bits = 0u128;
        for x in 0..self.src_n {
            if s.contains(self.map[x]) {
                bits |= 1 << x;
            }
        }
        Subset::from_bits(self.src_n, bits)
    }

    pub fn image(&self, s: &Subset) -> Subset {
        assert_eq!(s.n(), self.src_n, "source carrier mismatch");
        let mut bits = 0u128;
        for x in s.points() {
            bits |= 1 << self.map[x];
        }
        Subset::from_bits(self.dst_n, bits)
    }

    /// Pairwise preimage `(f x f)^{-1}(R)`.
    pub fn preimage_relation(&self, r: &Relation) -> Relation {
        assert_eq!(r.n(), self.dst_n, "target carrier mismatch");
        let n = self.src_n;
        let mut bits = 0u128;
        for x in 0..n {
            for y in 0..n {
                if r.contains(self.map[x], self.map[y]) {
                    bits |= 1 << (x * n + y);
                }
            }
        }
        Relation::from_bits(n, bits)
    }

    /// Pairwise image `(f x f)(R)`.
    pub fn image_relation(&self, r: &Relation) -> Relation {
        assert_eq!(r.n(), self.src_n, "source carrier mismatch");
        let m = self.dst_n;
        let mut bits = 0u128;
        for (x, y) in r.pairs() {
            bits |= 1 << (self.map[x] * m + self.map[y]);
        }
        Relation::from_bits(m, bits)
    }

    /// All maps from an `src_n`-point carrier to a `dst_n`-point carrier.
    pub fn all(src_n: usize, dst_n: usize) -> Vec<PointMap> {
        let total = (dst_n as u64).pow(src_n as u32);
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut c = code;
            let mut map = Vec::with_capacity(src_n);
            for _ in 0..src_n {
                map.push((c % dst_n as u64) as usize);
                c /= dst_n as u64;
            }
            out.push(PointMap { src_n, dst_n, map });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composition by the definition, quantifying over middle points.
    fn compose_oracle(a: &Relation, b: &Relation) -> Relation {
        let n = a.n();
        let mut out = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if (0..n).any(|z| a.contains(x, z) && b.contains(z, y)) {
                    out = out.with_pair(x, y);
                }
            }
        }
        out
    }

    fn inverse_oracle(a: &Relation) -> Relation {
        let n = a.n();
        let mut out = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if a.contains(y, x) {
                    out = out.with_pair(x, y);
                }
            }
        }
        out
    }

    fn all_relations(n: usize) -> impl Iterator<Item = Relation> {
        (0..1u128 << (n * n)).map(move |bits| Relation::from_bits(n, bits))
    }

    /// The three-point cyclic pair: mutually inverse entourage candidates
    /// whose pairwise compositions all blow up to the full square.
    fn cyclic_pair() -> (Relation, Relation) {
        let u1 = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)]).unwrap();
        let u2 = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 2), (1, 0), (2, 1)]).unwrap();
        (u1, u2)
    }

    #[test]
    fn inverse_of_a_single_pair() {
        let r = Relation::from_pairs(2, [(0, 1)]).unwrap();
        assert_eq!(r.inverse(), Relation::from_pairs(2, [(1, 0)]).unwrap());
    }

    #[test]
    fn cyclic_pair_are_mutual_inverses() {
        let (u1, u2) = cyclic_pair();
        assert_eq!(u1.inverse(), u2);
        assert_eq!(u2.inverse(), u1);
    }

    #[test]
    fn cyclic_pair_compositions_fill_the_square() {
        let (u1, u2) = cyclic_pair();
        let full = Relation::full(3);
        for a in [&u1, &u2] {
            for b in [&u1, &u2] {
                assert_eq!(a.compose(b), full);
                assert_eq!(compose_oracle(a, b), full);
            }
        }
    }

    #[test]
    fn sections_of_the_cyclic_pair() {
        let (u1, u2) = cyclic_pair();
        assert_eq!(u1.section(0), Subset::from_points(3, [0, 1]).unwrap());
        assert_eq!(u1.section(1), Subset::from_points(3, [1, 2]).unwrap());
        assert_eq!(u1.section(2), Subset::from_points(3, [0, 2]).unwrap());
        assert_eq!(u2.section(0), Subset::from_points(3, [0, 2]).unwrap());
    }

    #[test]
    fn compose_matches_oracle_exhaustively_n2() {
        for a in all_relations(2) {
            for b in all_relations(2) {
                assert_eq!(a.compose(&b), compose_oracle(&a, &b));
            }
        }
    }

    #[test]
    fn inverse_matches_oracle_exhaustively_n3() {
        for a in all_relations(3) {
            assert_eq!(a.inverse(), inverse_oracle(&a));
            assert_eq!(a.inverse().inverse(), a);
        }
    }

    #[test]
    fn diagonal_is_two_sided_identity_n3() {
        let d = Relation::diagonal(3);
        for a in all_relations(3) {
            assert_eq!(d.compose(&a), a);
            assert_eq!(a.compose(&d), a);
        }
    }

    #[test]
    fn associativity_exhaustive_n2() {
        let rels: Vec<Relation> = all_relations(2).collect();
        for a in &rels {
            for b in &rels {
                let ab = a.compose(b);
                for c in &rels {
                    assert_eq!(ab.compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn composition_anti_distributes_over_inverse_n2() {
        for a in all_relations(2) {
            for b in all_relations(2) {
                assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
            }
        }
    }

    #[test]
    fn rect_and_sections() {
        let a = Subset::from_points(3, [0, 2]).unwrap();
        let b = Subset::from_points(3, [1]).unwrap();
        let r = Relation::rect(&a, &b);
        assert_eq!(r, Relation::from_pairs(3, [(0, 1), (2, 1)]).unwrap());
        assert_eq!(r.section(0), b);
        assert_eq!(r.section(1), Subset::empty(3));
        assert_eq!(r.column(1), a);
    }

    #[test]
    fn restrict_reindexes() {
        let r = Relation::from_pairs(3, [(0, 2), (2, 0), (2, 2)]).unwrap();
        let keep = Subset::from_points(3, [0, 2]).unwrap();
        let t = r.restrict_to(&keep);
        assert_eq!(t, Relation::from_pairs(2, [(0, 1), (1, 0), (1, 1)]).unwrap());
    }

    #[test]
    fn carrier_labels_and_errors() {
        let c = Carrier::new(["a", "b", "c"]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.index_of("b"), Ok(1));
        assert_eq!(c.index_of("z"), Err(RelError::UnknownLabel("z".into())));
        assert_eq!(
            Carrier::new(["a", "a"]).unwrap_err(),
            RelError::DuplicateLabel("a".into())
        );
        assert_eq!(Carrier::new(Vec::<String>::new()).unwrap_err(), RelError::EmptyCarrier);
        assert_eq!(
            Relation::from_pairs(3, [(5, 0)]).unwrap_err(),
            RelError::PointOutOfRange(5, 3)
        );
        assert!(Relation::check_size(12).is_err());
    }

    #[test]
    fn permutations_cover_the_symmetric_group() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        let perms = permutations(3);
        let mut sorted = perms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn apply_perm_respects_composition() {
        let (u1, u2) = cyclic_pair();
        for p in permutations(3) {
            let lhs = u1.compose(&u2).apply_perm(&p);
            let rhs = u1.apply_perm(&p).compose(&u2.apply_perm(&p));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn preorder_and_equivalence_counts() {
        assert_eq!(preorders(1).len(), 1);
        assert_eq!(preorders(2).len(), 4);
        assert_eq!(preorders(3).len(), 29);
        assert_eq!(preorders(4).len(), 355);
        assert_eq!(equivalences(3).len(), 5);
        assert_eq!(equivalences(4).len(), 15);
        for r in preorders(3) {
            assert!(r.contains_diagonal() && r.is_transitive());
        }
    }

    #[test]
    fn point_map_preimage_image() {
        let f = PointMap::new(3, 2, vec![0, 1, 1]).unwrap();
        let s = Subset::from_points(2, [1]).unwrap();
        assert_eq!(f.preimage(&s), Subset::from_points(3, [1, 2]).unwrap());
        let r = Relation::from_pairs(2, [(0, 1)]).unwrap();
        assert_eq!(
            f.preimage_relation(&r),
            Relation::from_pairs(3, [(0, 1), (0, 2)]).unwrap()
        );
        let t = Relation::from_pairs(3, [(1, 2), (0, 1)]).unwrap();
        assert_eq!(
            f.image_relation(&t),
            Relation::from_pairs(2, [(1, 1), (0, 1)]).unwrap()
        );
        assert_eq!(PointMap::all(2, 3).len(), 9);
    }
}
