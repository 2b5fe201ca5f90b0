//! Exclude distributions of graphs of APN functions.
//!
//! For an APN function F the graph G = {(x, F(x))} is a Sidon set of size
//! 2^n in F_2^{2n}. For (a, b) off the graph, 6 d_G(a, b) is the number of
//! ordered triples (x, y, z) with x + y + z = a and F(x) + F(y) + F(z) = b.
//! Two independent routes compute it:
//!
//! - brute force over ordered pairs (x, y), with z = x + y + a;
//! - the cubed Walsh spectrum: the triple count at (a, b) equals
//!   2^{-2n} sum_{u,v} (-1)^{u.a + v.b} W_F(u, v)^3, evaluated for every
//!   (a, b) at once by one FWHT of length 2^{2n}.
//!
//! On the graph itself the triple count is always 3 * 2^n - 2 (only the
//! degenerate triples with a repeated entry contribute).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::sidon::{
    choose3, uniform_on, ExcludeDistribution, Histogram, PointSet,
};
use crate::vbf::{fwht, graph_of, is_apn, walsh_full, TruthTable, WalshTable};

/// Largest n for which the O(2^{4n}) hyperplane form of the Walsh bound runs.
pub const HYPERPLANE_MAX_N: u32 = 5;

#[inline]
fn point(n: u32, a: Elem, b: Elem) -> usize {
    ((a as usize) << n) | b as usize
}

fn require_apn(f: &TruthTable) -> Result<()> {
    if is_apn(f) {
        Ok(())
    } else {
        Err(Error::validation(
            "function is not APN, so its graph is not a Sidon set",
        ))
    }
}

/// Ordered-triple counts T(a, b) for every point, indexed `(a << n) | b`,
/// by direct enumeration of ordered pairs. O(2^{3n}).
pub fn triple_counts_bruteforce(f: &TruthTable) -> Vec<u32> {
    let n = f.n();
    let size = 1usize << n;
    let values = f.values();
    let mut counts = vec![0u32; size * size];
    counts.par_chunks_mut(size).enumerate().for_each(|(a, row)| {
        for (x, &fx) in values.iter().enumerate() {
            let shifted = x ^ a;
            for (y, &fy) in values.iter().enumerate() {
                row[(fx ^ fy ^ values[shifted ^ y]) as usize] += 1;
            }
        }
    });
    counts
}

/// Ordered-triple counts from the cubed Walsh spectrum, indexed `(a << n) | b`.
/// Every division is checked to be exact.
pub fn triple_counts_walsh(w: &WalshTable) -> Result<Vec<u32>> {
    let n = w.n();
    let size = 1usize << n;
    let mut cubes: Vec<i128> = w.values().iter().map(|&c| (c as i128).pow(3)).collect();
    // index (v << n) | u in, (b << n) | a out
    fwht(&mut cubes);
    let scale = 1i128 << (2 * n);
    let mut counts = vec![0u32; size * size];
    for b in 0..size {
        for a in 0..size {
            let sum = cubes[(b << n) | a];
            if sum % scale != 0 || sum < 0 {
                return Err(Error::invariant(format!(
                    "Walsh cube sum {sum} at (a, b) = ({a:#x}, {b:#x}) is not a nonnegative multiple of 2^{}",
                    2 * n
                )));
            }
            counts[(a << n) | b] = u32::try_from(sum / scale)
                .map_err(|_| Error::invariant("triple count overflow"))?;
        }
    }
    Ok(counts)
}

/// Turns triple counts into the exclude distribution of the graph, checking
/// the graph points carry exactly the degenerate count and every other count
/// is divisible by 6.
pub fn distribution_from_triples(f: &TruthTable, counts: Vec<u32>) -> Result<ExcludeDistribution> {
    let n = f.n();
    let degenerate = 3 * (1u32 << n) - 2;
    let mut mult = counts;
    for (a, &fa) in f.values().iter().enumerate() {
        let idx = point(n, a as Elem, fa);
        if mult[idx] != degenerate {
            return Err(Error::invariant(format!(
                "graph point ({a:#x}, {fa:#x}) has {} triples, expected {degenerate}",
                mult[idx]
            )));
        }
    }
    let graph = graph_of(f);
    for (idx, slot) in mult.iter_mut().enumerate() {
        if graph.contains(idx as u32) {
            continue;
        }
        if *slot % 6 != 0 {
            return Err(Error::invariant(format!(
                "triple count {} at point {idx:#x} is not divisible by 6",
                *slot
            )));
        }
        *slot /= 6;
    }
    ExcludeDistribution::from_mult(graph, mult)
}

/// d_graph(F) by brute-force enumeration. O(2^{3n}); the test oracle.
pub fn exclude_dist_bruteforce(f: &TruthTable) -> Result<ExcludeDistribution> {
    require_apn(f)?;
    distribution_from_triples(f, triple_counts_bruteforce(f))
}

/// d_graph(F) through the cubed Walsh spectrum. O(n 2^{2n}).
pub fn exclude_dist_walsh(f: &TruthTable) -> Result<ExcludeDistribution> {
    require_apn(f)?;
    let w = walsh_full(f);
    distribution_from_triples(f, triple_counts_walsh(&w)?)
}

/// First point where two distributions over the same graph disagree.
pub fn first_disagreement(
    d1: &ExcludeDistribution,
    d2: &ExcludeDistribution,
) -> Option<(u32, u32, u32)> {
    d1.mult_array()
        .iter()
        .zip(d2.mult_array())
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(i, (&x, &y))| (i as u32, x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PartitionKind {
    /// Q_a(F) for every a
    Q,
    /// Q_a(F) for a != 0
    QStar,
}

/// The blocks Q_a(F) = {(a, b) : b != F(a)}.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    pub n: u32,
    pub kind: PartitionKind,
    /// `(a, Q_a(F))` pairs
    pub blocks: Vec<(Elem, PointSet)>,
}

impl CosetPartition {
    pub fn point_sets(&self) -> Vec<PointSet> {
        self.blocks.iter().map(|(_, b)| b.clone()).collect()
    }
}

pub fn coset_block(f: &TruthTable, a: Elem) -> PointSet {
    let n = f.n();
    let fa = f.eval(a);
    let points = (0..1u32 << n)
        .filter(|&b| b != fa)
        .map(|b| point(n, a, b) as u32)
        .collect();
    PointSet::new(2 * n, points).expect("coset points are distinct")
}

pub fn coset_partition(f: &TruthTable, kind: PartitionKind) -> CosetPartition {
    let start = match kind {
        PartitionKind::Q => 0,
        PartitionKind::QStar => 1,
    };
    let blocks = (start..1u32 << f.n())
        .map(|a| (a, coset_block(f, a)))
        .collect();
    CosetPartition {
        n: f.n(),
        kind,
        blocks,
    }
}

pub fn uniform_on_partition(dist: &ExcludeDistribution, partition: &CosetPartition) -> Result<bool> {
    uniform_on(dist, &partition.point_sets())
}

/// (uniform on Q(F), uniform on Q*(F)) for a precomputed distribution.
pub fn uniformity(f: &TruthTable, dist: &ExcludeDistribution) -> Result<(bool, bool)> {
    Ok((
        uniform_on_partition(dist, &coset_partition(f, PartitionKind::Q))?,
        uniform_on_partition(dist, &coset_partition(f, PartitionKind::QStar))?,
    ))
}

pub fn uniform_on_q(f: &TruthTable) -> Result<bool> {
    let dist = exclude_dist_walsh(f)?;
    uniform_on_partition(&dist, &coset_partition(f, PartitionKind::Q))
}

pub fn uniform_on_qstar(f: &TruthTable) -> Result<bool> {
    let dist = exclude_dist_walsh(f)?;
    uniform_on_partition(&dist, &coset_partition(f, PartitionKind::QStar))
}

/// Histogram of d over Q_a(F).
pub fn coset_histogram(f: &TruthTable, dist: &ExcludeDistribution, a: Elem) -> Histogram {
    let n = f.n();
    let fa = f.eval(a);
    let mut hist = Histogram::new();
    for b in (0..1u32 << n).filter(|&b| b != fa) {
        let k = dist.get(point(n, a, b) as u32).expect("off-graph point");
        *hist.entry(k).or_default() += 1;
    }
    hist
}

/// d(a, b) = d(alpha, b + F(a) + F(alpha)) for every b != F(a).
pub fn permutation_local_equiv(f: &TruthTable, dist: &ExcludeDistribution, a: Elem, alpha: Elem) -> bool {
    permutation_local_equiv_witness(f, dist, a, alpha).is_none()
}

/// A `b` breaking [`permutation_local_equiv`], if any.
pub fn permutation_local_equiv_witness(
    f: &TruthTable,
    dist: &ExcludeDistribution,
    a: Elem,
    alpha: Elem,
) -> Option<Elem> {
    let n = f.n();
    let shift = f.eval(a) ^ f.eval(alpha);
    (0..1u32 << n).filter(|&b| b != f.eval(a)).find(|&b| {
        dist.get(point(n, a, b) as u32) != dist.get(point(n, alpha, b ^ shift) as u32)
    })
}

/// Checks the translation permutations from Q_0 to every Q_alpha; since
/// these compose to the map between any two cosets, this decides all pairs.
/// Returns a failing `(alpha, b)` if there is one.
pub fn permutation_local_equiv_all(f: &TruthTable, dist: &ExcludeDistribution) -> Option<(Elem, Elem)> {
    (0..1u32 << f.n())
        .find_map(|alpha| permutation_local_equiv_witness(f, dist, 0, alpha).map(|b| (alpha, b)))
}

/// For every b: #{(x, y) : F(x) + F(y) + F(x + y) = b}. O(2^{2n}).
pub fn carlet_counts(f: &TruthTable) -> Vec<u64> {
    let size = f.len();
    let values = f.values();
    let mut counts = vec![0u64; size];
    for x in 0..size {
        for y in 0..size {
            counts[(values[x] ^ values[y] ^ values[x ^ y]) as usize] += 1;
        }
    }
    counts
}

pub fn carlet_count(f: &TruthTable, b: Elem) -> u64 {
    let values = f.values();
    let size = f.len();
    (0..size)
        .flat_map(|x| (0..size).map(move |y| (x, y)))
        .filter(|&(x, y)| values[x] ^ values[y] ^ values[x ^ y] == b)
        .count() as u64
}

/// Outcome of comparing the solution counts of F(x) + F(y) + F(x + y) = b
/// with the case split on b = 0 / cube / non-cube.
#[derive(Clone, Debug, Serialize)]
pub struct CarletReport {
    pub n: u32,
    pub zero_count: u64,
    pub zero_expected: u64,
    /// count value -> number of nonzero cubes b realising it
    pub cube_counts: BTreeMap<u64, u64>,
    /// count value -> number of non-cubes b realising it
    pub noncube_counts: BTreeMap<u64, u64>,
    /// +1 if cubes give 2^n + 2^{n/2+1} - 2, -1 if 2^n - 2^{n/2+1} - 2
    pub realized_sign: Option<i8>,
    /// the sign for which (count)/6 is an integer: +1 iff n = 2 mod 4
    pub lemma_sign: i8,
    pub integral: bool,
    pub mass_ok: bool,
    pub ok: bool,
}

pub fn verify_carlet_cases(f: &TruthTable, field: &FieldSpec) -> Result<CarletReport> {
    let n = f.n();
    if n % 2 == 1 {
        return Err(Error::domain("Carlet's counts are stated for even n"));
    }
    if field.n() != n {
        return Err(Error::domain("field degree differs from the function's"));
    }
    let counts = carlet_counts(f);
    let big = 1i64 << n;
    let half = 1i64 << (n / 2);
    let mut cube_counts = BTreeMap::new();
    let mut noncube_counts = BTreeMap::new();
    for b in 1..f.len() as Elem {
        let target = if field.is_cube(b)? {
            &mut cube_counts
        } else {
            &mut noncube_counts
        };
        *target.entry(counts[b as usize]).or_insert(0u64) += 1;
    }
    let third = (big as u64 - 1) / 3;
    let realized_sign = [1i8, -1].into_iter().find(|&s| {
        let s = s as i64;
        let cube = (big + s * 2 * half - 2) as u64;
        let noncube = (big - s * half - 2) as u64;
        cube_counts == BTreeMap::from([(cube, third)])
            && noncube_counts == BTreeMap::from([(noncube, 2 * third)])
    });
    let lemma_sign = if n % 4 == 2 { 1 } else { -1 };
    let integral = cube_counts
        .keys()
        .chain(noncube_counts.keys())
        .all(|c| c % 6 == 0);
    let zero_expected = 3 * big as u64 - 2;
    // uniform spread of Q_0 over all 2^n cosets must carry C(2^n, 3)
    let nonzero_mass: u64 = counts[1..].iter().sum();
    let mass_ok = (nonzero_mass as u128 * big as u128) == 6 * choose3(big as u64);
    let zero_count = counts[0];
    Ok(CarletReport {
        n,
        zero_count,
        zero_expected,
        cube_counts,
        noncube_counts,
        realized_sign,
        lemma_sign,
        integral,
        mass_ok,
        ok: zero_count == zero_expected
            && realized_sign == Some(lemma_sign)
            && integral
            && mass_ok,
    })
}

/// The two multiplicities taken by the graphs of Gold and Kasami functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaBeta {
    pub n: u32,
    pub alpha: u64,
    pub beta: u64,
}

/// alpha(n) = (2^n + (-2)^{n/2+1} - 2)/6, beta(n) = (2^n + (-2)^{n/2} - 2)/6.
pub fn alpha_beta(n: u32) -> Result<AlphaBeta> {
    if n % 2 == 1 || !(4..=62).contains(&n) {
        return Err(Error::domain(format!(
            "alpha/beta are defined for even 4 <= n <= 62, got {n}"
        )));
    }
    let big = 1i128 << n;
    let alpha_num = big + (-2i128).pow(n / 2 + 1) - 2;
    let beta_num = big + (-2i128).pow(n / 2) - 2;
    if alpha_num % 6 != 0 || beta_num % 6 != 0 || alpha_num < 0 || beta_num < 0 {
        return Err(Error::invariant(format!(
            "alpha/beta numerators {alpha_num}, {beta_num} not divisible by 6"
        )));
    }
    Ok(AlphaBeta {
        n,
        alpha: (alpha_num / 6) as u64,
        beta: (beta_num / 6) as u64,
    })
}

/// Integrality of ((2^n + 2^{n/2} - 2)/6, (2^n + 2^{n/2+1} - 2)/6) for even n.
pub fn integrality(n: u32) -> Result<(bool, bool)> {
    if n % 2 == 1 || n == 0 || n > 62 {
        return Err(Error::domain("integrality pattern is stated for even n"));
    }
    let big = 1u64 << n;
    let half = 1u64 << (n / 2);
    Ok(((big + half - 2).is_multiple_of(6), (big + 2 * half - 2).is_multiple_of(6)))
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldKasamiReport {
    pub n: u32,
    pub alpha: u64,
    pub beta: u64,
    pub count_alpha: u64,
    pub count_beta: u64,
    pub expected_count_alpha: u64,
    pub expected_count_beta: u64,
    pub image: Vec<u32>,
    pub maximal: bool,
    /// off-graph points whose multiplicity is neither alpha nor beta, as (a, b, d)
    pub witnesses: Vec<(Elem, Elem, u32)>,
    pub ok: bool,
}

/// Checks image(d) = {alpha, beta} with 2^n (2^n - 1)/3 and 2^{n+1} (2^n - 1)/3
/// points respectively, and maximality.
pub fn verify_gold_kasami(f: &TruthTable, dist: &ExcludeDistribution) -> Result<GoldKasamiReport> {
    let n = f.n();
    let ab = alpha_beta(n)?;
    let big = 1u64 << n;
    let expected_count_alpha = big * (big - 1) / 3;
    let expected_count_beta = 2 * big * (big - 1) / 3;
    let hist = dist.histogram();
    let count = |k: u64| u32::try_from(k).ok().and_then(|k| hist.get(&k)).copied().unwrap_or(0);
    let witnesses: Vec<_> = dist
        .mult_array()
        .iter()
        .enumerate()
        .filter(|(_, &k)| {
            k != crate::sidon::IN_SET && k as u64 != ab.alpha && k as u64 != ab.beta
        })
        .take(8)
        .map(|(i, &k)| ((i >> n) as Elem, (i & ((1 << n) - 1)) as Elem, k))
        .collect();
    let image: Vec<u32> = hist.keys().copied().collect();
    let count_alpha = count(ab.alpha);
    let count_beta = count(ab.beta);
    let ok = witnesses.is_empty()
        && count_alpha == expected_count_alpha
        && count_beta == expected_count_beta
        && dist.is_maximal();
    Ok(GoldKasamiReport {
        n,
        alpha: ab.alpha,
        beta: ab.beta,
        count_alpha,
        count_beta,
        expected_count_alpha,
        expected_count_beta,
        image,
        maximal: dist.is_maximal(),
        witnesses,
        ok,
    })
}

/// Whether F(x) + F(y) + F(z) + F(x + y + z) = c has a solution for every
/// c != 0, by direct enumeration (stops as soon as every c has been hit).
pub fn dillon_dproperty(f: &TruthTable) -> bool {
    let size = f.len();
    let values = f.values();
    let mut hit = vec![false; size];
    hit[0] = true;
    let mut missing = size - 1;
    for x in 0..size {
        for y in x..size {
            let xy = values[x] ^ values[y];
            for z in 0..size {
                let c = (xy ^ values[z] ^ values[x ^ y ^ z]) as usize;
                if !hit[c] {
                    hit[c] = true;
                    missing -= 1;
                    if missing == 0 {
                        return true;
                    }
                }
            }
        }
    }
    missing == 0
}

/// The same property read off a graph distribution: c != 0 is reachable iff
/// some point (a, F(a) + c) has positive multiplicity.
pub fn dproperty_from_distribution(f: &TruthTable, dist: &ExcludeDistribution) -> bool {
    let n = f.n();
    (1..1u32 << n).all(|c| {
        (0..1u32 << n).any(|a| dist.get(point(n, a, f.eval(a) ^ c) as u32).unwrap_or(0) > 0)
    })
}

/// For every t: #{(x, y) : F(x) + F(y) = t}.
pub fn pair_sum_counts(f: &TruthTable) -> Vec<u64> {
    let size = f.len();
    let mut image = vec![0u64; size];
    for &y in f.values() {
        image[y as usize] += 1;
    }
    (0..size)
        .map(|t| (0..size).map(|y| image[y] * image[y ^ t]).sum())
        .collect()
}

/// 6 d(a, b) = #{(x, y) : F(x) + F(y) + F(a) = b}, which holds for APN
/// plateaued F with all components unbalanced.
pub fn plateaued_identity_check(
    f: &TruthTable,
    dist: &ExcludeDistribution,
    pair_sums: &[u64],
    a: Elem,
    b: Elem,
) -> Result<bool> {
    let n = f.n();
    let d = dist
        .get(point(n, a, b) as u32)
        .ok_or_else(|| Error::domain(format!("({a:#x}, {b:#x}) lies on the graph")))?;
    Ok(6 * d as u64 == pair_sums[(b ^ f.eval(a)) as usize])
}

/// First off-graph point where [`plateaued_identity_check`] fails.
pub fn plateaued_identity_witness(f: &TruthTable, dist: &ExcludeDistribution) -> Option<(Elem, Elem)> {
    let pair_sums = pair_sum_counts(f);
    let n = f.n();
    (0..1u32 << n)
        .flat_map(|a| (0..1u32 << n).map(move |b| (a, b)))
        .filter(|&(a, b)| b != f.eval(a))
        .find(|&(a, b)| !plateaued_identity_check(f, dist, &pair_sums, a, b).unwrap_or(false))
}

/// Walsh-sum maximality criterion in hyperplane form: for every nonzero
/// w = (a + c, b + d) of (F_2^n)^2 and every off-graph (a, b) with (c, d) also
/// off the graph,
/// |sum_{(u,v).w = 1} (-1)^{u.a + v.b} W^3(u, v)| <= 2^{3n-1} - 2^{2n}.
///
/// One FWHT per hyperplane, O(n 2^{4n}); gated to n <= 5.
pub fn walsh_bound_criterion(f: &TruthTable) -> Result<bool> {
    let n = f.n();
    if n > HYPERPLANE_MAX_N {
        return Err(Error::Capability(format!(
            "hyperplane form needs n <= {HYPERPLANE_MAX_N}; use the e_max - e_min form for n = {n}"
        )));
    }
    require_apn(f)?;
    let w = walsh_full(f);
    let cubes: Vec<i128> = w.values().iter().map(|&c| (c as i128).pow(3)).collect();
    let bound = (1i128 << (3 * n - 1)) - (1i128 << (2 * n));
    let len = cubes.len();
    let mask = (1usize << n) - 1;
    // off-graph test in transform coordinates j = (b << n) | a
    let on_graph = |j: usize| f.eval((j & mask) as Elem) as usize == j >> n;
    let holds = (1..len).into_par_iter().all(|hyper| {
        let mut masked: Vec<i128> = cubes
            .iter()
            .enumerate()
            .map(|(i, &c)| if (i & hyper).count_ones() % 2 == 1 { c } else { 0 })
            .collect();
        fwht(&mut masked);
        masked.iter().enumerate().all(|(j, &s)| {
            on_graph(j) || on_graph(j ^ hyper) || s.abs() <= bound
        })
    });
    Ok(holds)
}

/// The equivalent spread form: 6 (e_max - e_min) <= 2^n - 2.
pub fn spread_criterion(f: &TruthTable, dist: &ExcludeDistribution) -> Result<bool> {
    crate::sidon::maximality_bound_check(dist, f.n())
}

/// d(a, 0) = d(0, b) = (2^n - 2)/6 at every off-graph point of those two
/// lines (b != 0). Stated for APN power functions with n odd.
pub fn conjecture_zero_flat_check(f: &TruthTable, dist: &ExcludeDistribution) -> Result<bool> {
    Ok(zero_flat_witness(f, dist)?.is_none())
}

/// A point of the form (a, 0) or (0, b) violating the zero-flat pattern.
pub fn zero_flat_witness(f: &TruthTable, dist: &ExcludeDistribution) -> Result<Option<(Elem, Elem, u32)>> {
    let n = f.n();
    if n.is_multiple_of(2) {
        return Err(Error::domain("zero-flat pattern is stated for odd n"));
    }
    let target = ((1u32 << n) - 2) / 6;
    let lines = (0..1u32 << n)
        .map(|a| (a, 0))
        .chain((1..1u32 << n).map(|b| (0, b)));
    for (a, b) in lines {
        if let Some(k) = dist.get(point(n, a, b) as u32) {
            if k != target {
                return Ok(Some((a, b, k)));
            }
        }
    }
    Ok(None)
}

/// Uniform on Q(F) implies maximal (vacuously true when not uniform).
pub fn conjecture_uniform_implies_maximal(f: &TruthTable, dist: &ExcludeDistribution) -> Result<bool> {
    let uniform = uniform_on_partition(dist, &coset_partition(f, PartitionKind::Q))?;
    Ok(!uniform || dist.is_maximal())
}
