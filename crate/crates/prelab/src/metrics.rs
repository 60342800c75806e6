//! Rational pseudometrics and chain metrization.
//!
//! Distances are exact rationals so that every certified set inclusion is
//! exact: the chain construction's sandwich, the unit-ball bound, and the
//! point/closed-set separators all come back as checkable relations, never
//! as approximations.
//!
//! The central construction turns a nested chain of symmetric relations
//! into a pseudometric by all-pairs shortest path over dyadic edge weights,
//! then certifies `{rho < 2^-i} <= V_i <= {rho <= 2^-i}` for every index.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::pretop;
use crate::preunif::{self, PreUniformity, PreunifError};
use crate::relcore::{PointMap, Relation, Subset, MAX_RELATION_POINTS};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{expected} entries needed for {n} points, got {got}")]
    EntryCountMismatch { n: usize, expected: usize, got: usize },
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("nonzero distance on the diagonal at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetric distances at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails at ({0}, {1}, {2})")]
    TriangleViolation(usize, usize, usize),
    #[error("blocks do not partition the carrier")]
    NotAPartition,
    #[error("chain has no links")]
    EmptyChain,
    #[error("chain must start with the full relation")]
    ChainStartNotFull,
    #[error("chain link {0} is not symmetric")]
    ChainLinkNotSymmetric(usize),
    #[error("chain link {0} is missing a diagonal pair")]
    ChainLinkMissingDiagonal(usize),
    #[error("cube of chain link {0} escapes the previous link")]
    ChainCubeEscapes(usize),
    #[error("cube of the final chain link escapes the link itself")]
    ChainTailEscapes,
    #[error("carrier size mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("point {point} out of range for {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("family is not strong")]
    NotStrong,
    #[error("relation is not a member of the family")]
    NotMember,
    #[error("point {0} lies inside the set it must avoid")]
    PointInsideSet(usize),
    #[error("set is not closed in the induced pre-topology")]
    NotClosed,
    #[error("pseudometric is not pre-uniform for the family")]
    NotPreuniformMetric,
    #[error("no open separator exists for point {0}")]
    CannotSeparate(usize),
}

fn two_pow_neg(i: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << i)
}

/// A symmetric, triangle-satisfying distance table with zero diagonal.
/// Distinct points may sit at distance zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pseudometric {
    n: usize,
    d: Vec<BigRational>,
}

impl Pseudometric {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self, MetricsError> {
        if entries.len() != n * n {
            return Err(MetricsError::EntryCountMismatch {
                n,
                expected: n * n,
                got: entries.len(),
            });
        }
        let at = |x: usize, y: usize| &entries[x * n + y];
        for x in 0..n {
            if !at(x, x).is_zero() {
                return Err(MetricsError::NonzeroDiagonal(x));
            }
            for y in 0..n {
                if at(x, y).is_negative() {
                    return Err(MetricsError::NegativeDistance(x, y));
                }
                if at(x, y) != at(y, x) {
                    return Err(MetricsError::Asymmetric(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if *at(x, z) > at(x, y) + at(y, z) {
                        return Err(MetricsError::TriangleViolation(x, y, z));
                    }
                }
            }
        }
        Ok(Pseudometric { n, d: entries })
    }

    pub fn zero(n: usize) -> Self {
        Pseudometric { n, d: vec![BigRational::zero(); n * n] }
    }

    /// Distance one between distinct points.
    pub fn discrete(n: usize) -> Self {
        let mut d = vec![BigRational::one(); n * n];
        for x in 0..n {
            d[x * n + x] = BigRational::zero();
        }
        Pseudometric { n, d }
    }

    /// Distance zero inside a block, one across blocks.
    pub fn from_partition(n: usize, blocks: &[Subset]) -> Result<Self, MetricsError> {
        let mut owner = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for x in b.points() {
                if x >= n || owner[x] != usize::MAX {
                    return Err(MetricsError::NotAPartition);
                }
                owner[x] = i;
            }
        }
        if owner.iter().any(|&o| o == usize::MAX) {
            return Err(MetricsError::NotAPartition);
        }
        let mut d = vec![BigRational::zero(); n * n];
        for x in 0..n {
            for y in 0..n {
                if owner[x] != owner[y] {
                    d[x * n + y] = BigRational::one();
                }
            }
        }
        Ok(Pseudometric { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, x: usize, y: usize) -> &BigRational {
        &self.d[x * self.n + y]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.d
    }

    /// Sorted distinct values.
    pub fn values(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self.d.to_vec();
        v.sort();
        v.dedup();
        v
    }

    pub fn scaled(&self, factor: &BigRational) -> Pseudometric {
        assert!(!factor.is_negative());
        Pseudometric { n: self.n, d: self.d.iter().map(|v| v * factor).collect() }
    }

    /// `{(x, y) : dist < radius}` as a relation.
    pub fn ball_relation(&self, radius: &BigRational) -> Relation {
        assert!(self.n <= MAX_RELATION_POINTS);
        let mut r = Relation::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.dist(x, y) < radius {
                    r = r.with_pair(x, y);
                }
            }
        }
        r
    }

    pub fn zeroset(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.dist(x, y).is_zero() {
                    r = r.with_pair(x, y);
                }
            }
        }
        r
    }

    /// Distinct balls of radius `2^-i` for `i = 0, 1, ...`, down to the
    /// zero set where the sequence stabilizes.
    pub fn halving_relations(&self) -> Vec<Relation> {
        let zeroset = self.zeroset();
        let mut out: Vec<Relation> = Vec::new();
        let mut i = 0;
        loop {
            let r = self.ball_relation(&two_pow_neg(i));
            if out.last() != Some(&r) {
                out.push(r);
            }
            if *out.last().unwrap() == zeroset {
                return out;
            }
            i += 1;
        }
    }
}

/// `sigma(f(x), f(y))` on the source carrier.
pub fn pullback(sigma: &Pseudometric, f: &PointMap) -> Result<Pseudometric, MetricsError> {
    if f.dst_n() != sigma.n() {
        return Err(MetricsError::CarrierMismatch(f.dst_n(), sigma.n()));
    }
    let n = f.src_n();
    let mut d = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            d.push(sigma.dist(f.apply(x), f.apply(y)).clone());
        }
    }
    Ok(Pseudometric { n, d })
}

/// A nested sequence: full relation first, then symmetric
/// diagonal-containing links whose cubes stay inside their predecessors.
/// The diagonal requirement makes the links entourages and is what lets
/// the induced distance vanish on the diagonal. A finite list stands for
/// the infinite sequence that repeats its final link forever, so that link
/// must cube into itself; otherwise zero-weight steps inside it could
/// bridge pairs outside it and the sandwich below would break.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntourageChain {
    n: usize,
    links: Vec<Relation>,
}

impl EntourageChain {
    pub fn new(n: usize, links: Vec<Relation>) -> Result<Self, MetricsError> {
        if links.is_empty() {
            return Err(MetricsError::EmptyChain);
        }
        for (i, l) in links.iter().enumerate() {
            if l.n() != n {
                return Err(MetricsError::CarrierMismatch(l.n(), n));
            }
            if !l.contains_diagonal() {
                return Err(MetricsError::ChainLinkMissingDiagonal(i));
            }
            if i >= 1 && !l.is_symmetric() {
                return Err(MetricsError::ChainLinkNotSymmetric(i));
            }
        }
        if links[0] != Relation::full(n) {
            return Err(MetricsError::ChainStartNotFull);
        }
        for i in 1..links.len() {
            let cube = links[i].compose(&links[i]).compose(&links[i]);
            if !cube.is_subset_of(&links[i - 1]) {
                return Err(MetricsError::ChainCubeEscapes(i));
            }
        }
        let last = links.last().unwrap();
        if !last.compose(last).compose(last).is_subset_of(last) {
            return Err(MetricsError::ChainTailEscapes);
        }
        Ok(EntourageChain { n, links })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn links(&self) -> &[Relation] {
        &self.links
    }
}

/// Edge weight, then all-pairs shortest path. Pairs inside the last link
/// (hence, by nesting, inside every link) weigh zero; otherwise the weight
/// is `2^-i` for the deepest link `i` still holding the pair. On a finite
/// carrier the infimum over point chains is attained by a simple path, so
/// the shortest-path table is the exact chain pseudometric.
pub fn chain_pseudometric(chain: &EntourageChain) -> Pseudometric {
    let n = chain.n();
    let links = chain.links();
    let mut dist: Vec<Vec<BigRational>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    // reflexive links nest: l[i+1] <= l[i+1]^3 <= l[i]
                    let deepest = links.iter().rposition(|l| l.contains(x, y)).unwrap();
                    if deepest == links.len() - 1 {
                        BigRational::zero()
                    } else {
                        two_pow_neg(deepest)
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &dist[i][k] + &dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    let flat: Vec<BigRational> = dist.into_iter().flatten().collect();
    Pseudometric::new(n, flat).expect("shortest-path closure satisfies the axioms")
}

/// Both inclusions `{rho < 2^-i} <= V_i` and `V_i <= {rho <= 2^-i}` at
/// every index from 1 up.
pub fn sandwich_holds(chain: &EntourageChain, rho: &Pseudometric) -> bool {
    let n = chain.n();
    if rho.n() != n {
        return false;
    }
    for (i, link) in chain.links().iter().enumerate().skip(1) {
        let thr = two_pow_neg(i);
        for x in 0..n {
            for y in 0..n {
                let d = rho.dist(x, y);
                if *d < thr && !link.contains(x, y) {
                    return false;
                }
                if link.contains(x, y) && *d > thr {
                    return false;
                }
            }
        }
    }
    true
}

/// For every threshold between consecutive distance values there must be a
/// member on which the metric stays below it. The condition is monotone in
/// the threshold, so it collapses to the smallest one: the zero set of the
/// metric must itself be a member. The literal sweep is kept as written.
pub fn is_preuniform_pseudometric(rho: &Pseudometric, mu: &PreUniformity) -> bool {
    assert_eq!(rho.n(), mu.n());
    let vals = rho.values();
    let mut thresholds: Vec<BigRational> = vals
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / BigRational::from_integer(2.into()))
        .collect();
    thresholds.push(vals.last().unwrap() + BigRational::one());
    thresholds
        .iter()
        .all(|eps| mu.basis().members().iter().any(|v| v.is_subset_of(&rho.ball_relation(eps))))
}

/// Preimages of open value intervals are open in the product
/// pre-topology. Distinct preimages correspond to runs of consecutive
/// values, so the check is finite.
pub fn pseudometric_precontinuity(
    rho: &Pseudometric,
    mu: &PreUniformity,
) -> Result<bool, MetricsError> {
    if rho.n() != mu.n() {
        return Err(MetricsError::CarrierMismatch(rho.n(), mu.n()));
    }
    if !is_preuniform_pseudometric(rho, mu) {
        return Err(MetricsError::NotPreuniformMetric);
    }
    let n = rho.n();
    let tau = mu.induced_pretopology();
    let tt = pretop::product_pretopology(&tau, &tau).expect("small product carrier");
    let vals = rho.values();
    for lo in 0..vals.len() {
        for hi in lo..vals.len() {
            let mut pre = Relation::empty(n);
            for x in 0..n {
                for y in 0..n {
                    let d = rho.dist(x, y);
                    if *d >= vals[lo] && *d <= vals[hi] {
                        pre = pre.with_pair(x, y);
                    }
                }
            }
            if !tt.is_open(&pre.as_product_subset()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The chain behind a unit-ball certificate, kept for replay.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitBall {
    pub metric: Pseudometric,
    pub chain: EntourageChain,
}

/// A pseudometric whose open unit ball sits inside `v`. The chain starts
/// with a symmetrized self-composition witness below `v`; later links use
/// two witness steps at a time, since `B o B <= A` and `A o A <= M` give
/// `(B n B^-1)^3 <= B^3 <= M`, and the cube of a symmetric relation is
/// symmetric, so it lands in `M n M^-1` as the chain needs. Doubling the
/// chain metric turns the sandwich at index 1 into the unit-ball bound.
pub fn unit_ball_pseudometric(
    mu: &PreUniformity,
    v: &Relation,
) -> Result<UnitBall, MetricsError> {
    if !mu.classification().strong {
        return Err(MetricsError::NotStrong);
    }
    if v.n() != mu.n() || !mu.member(v) {
        return Err(MetricsError::NotMember);
    }
    let n = mu.n();
    let rels = mu.basis().members();
    let below = |target: &Relation| rels.iter().find(|w| w.compose(w).is_subset_of(target));
    let b = rels.iter().find(|b| b.is_subset_of(v)).expect("membership gave a basis member");
    let mut m = *below(b).expect("strong family self-composes below each member");
    let mut links = vec![Relation::full(n), m.inter(&m.inverse())];
    loop {
        let a = *below(&m).expect("strong family self-composes below each member");
        let b2 = *below(&a).expect("strong family self-composes below each member");
        let next = b2.inter(&b2.inverse());
        if next == *links.last().unwrap() {
            break;
        }
        links.push(next);
        m = b2;
    }
    let chain = EntourageChain::new(n, links).expect("constructed links satisfy the chain rules");
    let metric = chain_pseudometric(&chain).scaled(&BigRational::from_integer(2.into()));
    debug_assert!(metric.ball_relation(&BigRational::one()).is_subset_of(v));
    Ok(UnitBall { metric, chain })
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SeparatingRoute {
    /// Clipped unit-ball distance from the point.
    UnitBallMetric,
    /// Indicator of the complement of a clopen set around the point.
    ClopenIndicator,
}

/// A value table separating a point from a closed set it avoids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparatingFunction {
    pub values: Vec<BigRational>,
    pub route: SeparatingRoute,
}

/// `f(x) = 0`, `f = 1` on the closed set, every fiber open. The primary
/// route clips the unit-ball metric of a basis section avoiding the set;
/// if some fiber fails to be open, a clopen block around the point is used
/// as an indicator instead.
pub fn separating_function(
    mu: &PreUniformity,
    x: usize,
    closed_set: &Subset,
) -> Result<SeparatingFunction, MetricsError> {
    let n = mu.n();
    if closed_set.n() != n {
        return Err(MetricsError::CarrierMismatch(closed_set.n(), n));
    }
    if x >= n {
        return Err(MetricsError::PointOutOfRange { point: x, n });
    }
    if !mu.classification().strong {
        return Err(MetricsError::NotStrong);
    }
    if closed_set.contains(x) {
        return Err(MetricsError::PointInsideSet(x));
    }
    let tau = mu.induced_pretopology();
    if !tau.is_closed(closed_set) {
        return Err(MetricsError::NotClosed);
    }

    let complement = closed_set.complement();
    let u = mu
        .basis()
        .members()
        .iter()
        .find(|u| u.section(x).is_subset_of(&complement))
        .expect("an open complement contains a basis section at each of its points");
    let ball = unit_ball_pseudometric(mu, u)?;
    let one = BigRational::one();
    let values: Vec<BigRational> = (0..n)
        .map(|y| {
            let d = ball.metric.dist(x, y);
            if *d > one {
                one.clone()
            } else {
                d.clone()
            }
        })
        .collect();
    debug_assert!(values[x].is_zero());
    debug_assert!(closed_set.points().all(|y| values[y] == one));
    let fibers_open = {
        let mut vals = values.clone();
        vals.sort();
        vals.dedup();
        vals.iter().all(|v| {
            let fiber = Subset::from_points(n, (0..n).filter(|&y| values[y] == *v))
                .expect("fiber points are in range");
            tau.is_open(&fiber)
        })
    };
    if fibers_open {
        return Ok(SeparatingFunction { values, route: SeparatingRoute::UnitBallMetric });
    }

    for bits in 0..1u128 << n {
        let a = Subset::from_bits(n, bits);
        if a.contains(x)
            && !a.meets(closed_set)
            && tau.is_open(&a)
            && tau.is_open(&a.complement())
        {
            let values = (0..n)
                .map(|y| if a.contains(y) { BigRational::zero() } else { BigRational::one() })
                .collect();
            return Ok(SeparatingFunction { values, route: SeparatingRoute::ClopenIndicator });
        }
    }
    Err(MetricsError::CannotSeparate(x))
}

/// Single-metric generation; the halving balls form a nested chain, so the
/// result is closed under binary intersections.
pub fn induced_from_pseudometric(rho: &Pseudometric) -> Result<PreUniformity, PreunifError> {
    let mu = preunif::generate_from_pseudometrics(std::slice::from_ref(rho))?;
    debug_assert!(mu.classification().uniform);
    Ok(mu)
}

/// Random distance table: integer seeds, shortest-path closure for the
/// triangle inequality, then a random dyadic scale.
pub fn random_pseudometric<R: Rng>(n: usize, rng: &mut R) -> Pseudometric {
    let mut d: Vec<Vec<BigRational>> = (0..n)
        .map(|_| (0..n).map(|_| BigRational::zero()).collect())
        .collect();
    for x in 0..n {
        for y in x + 1..n {
            let v = BigRational::from_integer(rng.gen_range(0..=4).into());
            d[x][y] = v.clone();
            d[y][x] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let scale = two_pow_neg(rng.gen_range(0..3));
    let flat: Vec<BigRational> = d.into_iter().flatten().map(|v| v * &scale).collect();
    Pseudometric::new(n, flat).expect("closure satisfies the axioms")
}

/// Random valid chain, built bottom-up: a random equivalence as the
/// stable final link, then each earlier link holds the cube of the later
/// one plus random symmetric noise, ending at the full relation.
pub fn random_entourage_chain<R: Rng>(n: usize, rng: &mut R) -> EntourageChain {
    let full = Relation::full(n);
    let random_symmetric = |rng: &mut R| {
        let mut r = Relation::diagonal(n);
        for x in 0..n {
            for y in x + 1..n {
                if rng.gen_bool(0.3) {
                    r = r.with_pair(x, y).with_pair(y, x);
                }
            }
        }
        r
    };
    let random_equivalence = |rng: &mut R| {
        let classes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut r = Relation::diagonal(n);
        for x in 0..n {
            for y in 0..n {
                if classes[x] == classes[y] {
                    r = r.with_pair(x, y);
                }
            }
        }
        r
    };
    let mut upward = vec![random_equivalence(rng)];
    for _ in 0..5 {
        let last = *upward.last().unwrap();
        if last == full {
            break;
        }
        let cube = last.compose(&last).compose(&last);
        let next = cube.union(&random_symmetric(rng));
        if next == last {
            break;
        }
        upward.push(next);
    }
    if *upward.last().unwrap() != full {
        upward.push(full);
    }
    upward.reverse();
    EntourageChain::new(n, upward).expect("construction satisfies the chain rules")
}
