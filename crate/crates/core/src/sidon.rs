//! Sidon sets in F_2^m and their exclude distributions.
//!
//! A point x outside a Sidon set S has exclude multiplicity equal to the
//! number of 3-subsets of S summing to x. The dense multiplicity array stores
//! [`IN_SET`] at the points of S so that "in S" and "multiplicity 0" stay
//! distinguishable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::dot;

/// Largest ambient dimension for which dense arrays over F_2^m are built.
pub const MAX_AMBIENT: u32 = 24;

/// Marker stored in the multiplicity array at points of the set itself.
pub const IN_SET: u32 = u32::MAX;

/// Multiplicity value -> number of complement points taking it.
pub type Histogram = BTreeMap<u32, u64>;

/// A sorted, duplicate-free set of points of F_2^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    m: u32,
    points: Vec<u32>,
}

impl PointSet {
    pub fn new(m: u32, mut points: Vec<u32>) -> Result<Self> {
        if m > MAX_AMBIENT {
            return Err(Error::domain(format!(
                "ambient dimension {m} exceeds {MAX_AMBIENT}"
            )));
        }
        if let Some(p) = points.iter().find(|&&p| (p as u64) >> m != 0) {
            return Err(Error::validation(format!(
                "point {p:#x} does not lie in F_2^{m}"
            )));
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::validation(format!("duplicate point {:#x}", w[0])));
        }
        Ok(PointSet { m, points })
    }

    pub fn empty(m: u32) -> Self {
        PointSet {
            m,
            points: Vec::new(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// Size of the ambient space, 2^m.
    pub fn space_size(&self) -> usize {
        1usize << self.m
    }

    /// Parses the text format: a `m=<int>` line followed by one hex mask per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty point-set file".into()))?;
        let m = header
            .strip_prefix("m=")
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `m=<int>`, found `{header}`")))?;
        let points = lines.map(parse_hex).collect::<Result<Vec<_>>>()?;
        PointSet::new(m, points)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("m={}\n", self.m);
        for p in &self.points {
            writeln!(out, "{p:#x}").unwrap();
        }
        out
    }
}

pub(crate) fn parse_hex(s: &str) -> Result<u32> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("bad hex value `{s}`: {e}")))
}

/// Bitset over F_2^m.
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    fn get(&self, i: u32) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    fn set(&mut self, i: u32) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }
}

/// All pairwise sums of distinct points are distinct.
///
/// Two distinct pairs with a common sum in F_2^m are necessarily disjoint, so
/// this is exactly the absence of a + b = c + d with a, b, c, d pairwise distinct.
pub fn is_sidon(s: &PointSet) -> bool {
    let mut sums = BitSet::new(s.space_size());
    let pts = s.points();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let sum = a ^ b;
            if sums.get(sum) {
                return false;
            }
            sums.set(sum);
        }
    }
    true
}

/// The exclude distribution d_S of a Sidon set with its histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcludeDistribution {
    set: PointSet,
    mult: Vec<u32>,
    histogram: Histogram,
}

impl ExcludeDistribution {
    /// Wraps a dense multiplicity array. Entries at points of `set` are
    /// replaced by [`IN_SET`]; the conservation law sum = C(|S|, 3) is checked.
    pub fn from_mult(set: PointSet, mut mult: Vec<u32>) -> Result<Self> {
        if mult.len() != set.space_size() {
            return Err(Error::invariant(format!(
                "multiplicity array has {} entries for F_2^{}",
                mult.len(),
                set.m()
            )));
        }
        for &p in set.points() {
            mult[p as usize] = IN_SET;
        }
        let mut histogram = Histogram::new();
        let mut total: u128 = 0;
        for &k in mult.iter().filter(|&&k| k != IN_SET) {
            *histogram.entry(k).or_default() += 1;
            total += k as u128;
        }
        let expected = choose3(set.len() as u64);
        if total != expected {
            return Err(Error::invariant(format!(
                "multiplicities sum to {total}, expected C({}, 3) = {expected}",
                set.len()
            )));
        }
        Ok(ExcludeDistribution {
            set,
            mult,
            histogram,
        })
    }

    pub fn m(&self) -> u32 {
        self.set.m()
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    /// Dense array indexed by point; [`IN_SET`] at points of the set.
    pub fn mult_array(&self) -> &[u32] {
        &self.mult
    }

    /// d_S(x), or `None` for x in S.
    pub fn get(&self, x: u32) -> Option<u32> {
        match self.mult[x as usize] {
            IN_SET => None,
            k => Some(k),
        }
    }

    pub fn histogram(&self) -> &Histogram {
        &self.histogram
    }

    /// Number of points outside the set.
    pub fn complement_size(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// Smallest multiplicity on the complement (0 when the complement is empty).
    pub fn e_min(&self) -> u32 {
        self.histogram.keys().next().copied().unwrap_or(0)
    }

    pub fn e_max(&self) -> u32 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of complement points with multiplicity zero.
    pub fn zero_count(&self) -> u64 {
        self.histogram.get(&0).copied().unwrap_or(0)
    }

    /// No complement point can be added: every multiplicity is positive.
    pub fn is_maximal(&self) -> bool {
        self.zero_count() == 0
    }

    /// `Some(k)` iff d_S is constant with value k.
    pub fn k_cover_value(&self) -> Option<u32> {
        (self.histogram.len() == 1).then(|| self.e_min())
    }

    /// (2^m - s) e_min <= C(s, 3) <= (2^m - s - z) e_max.
    pub fn inequality_chain_holds(&self) -> bool {
        let s = self.set.len() as u128;
        let space = self.set.space_size() as u128;
        let z = self.zero_count() as u128;
        let total = choose3(s as u64);
        (space - s) * self.e_min() as u128 <= total
            && total <= (space - s - z) * self.e_max() as u128
    }

    /// Multiplicities of the given points, sorted (a multiset).
    fn multiset(&self, xs: &PointSet) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(xs.len());
        for &x in xs.points() {
            if xs.m() != self.m() {
                return Err(Error::domain("point set lives in a different space"));
            }
            out.push(self.get(x).ok_or_else(|| {
                Error::domain(format!("point {x:#x} belongs to the Sidon set"))
            })?);
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn to_json(&self, include_mult: bool) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            m: u32,
            set: Vec<String>,
            histogram: &'a Histogram,
            #[serde(skip_serializing_if = "Option::is_none")]
            mult: Option<Vec<Option<u32>>>,
        }
        let export = Export {
            m: self.m(),
            set: self.set.points().iter().map(|p| format!("{p:#x}")).collect(),
            histogram: &self.histogram,
            mult: include_mult.then(|| {
                self.mult
                    .iter()
                    .map(|&k| (k != IN_SET).then_some(k))
                    .collect()
            }),
        };
        serde_json::to_value(export).expect("serialisable")
    }

    /// `point,multiplicity` rows for every complement point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,multiplicity\n");
        for (x, &k) in self.mult.iter().enumerate() {
            if k != IN_SET {
                writeln!(out, "{x:#x},{k}").unwrap();
            }
        }
        out
    }
}

pub fn choose3(s: u64) -> u128 {
    let s = s as u128;
    if s < 3 {
        0
    } else {
        s * (s - 1) * (s - 2) / 6
    }
}

/// Exclude distribution by enumerating unordered triples, O(|S|^3).
pub fn exclude_distribution(s: &PointSet) -> Result<ExcludeDistribution> {
    if !is_sidon(s) {
        return Err(Error::validation("point set is not a Sidon set"));
    }
    let pts = s.points();
    let size = s.space_size();
    let accumulate = |mut acc: Vec<u32>, i: usize| {
        for j in i + 1..pts.len() {
            let ab = pts[i] ^ pts[j];
            for &c in &pts[j + 1..] {
                acc[(ab ^ c) as usize] += 1;
            }
        }
        acc
    };
    let mult = if pts.len() < 128 {
        (0..pts.len()).fold(vec![0u32; size], accumulate)
    } else {
        (0..pts.len())
            .into_par_iter()
            .fold(|| vec![0u32; size], accumulate)
            .reduce(
                || vec![0u32; size],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    // a triple of a Sidon set never sums to a point of the set
    if let Some(&p) = pts.iter().find(|&&p| mult[p as usize] != 0) {
        return Err(Error::invariant(format!(
            "triple of a Sidon set sums to its own point {p:#x}"
        )));
    }
    ExcludeDistribution::from_mult(s.clone(), mult)
}

/// For a Sidon set of size 2^n in F_2^{2n}: whether e_max - e_min <= (2^n - 2)/6.
///
/// When the bound holds the set is necessarily maximal; a bound that holds on
/// a non-maximal set is reported as an invariant violation.
pub fn maximality_bound_check(dist: &ExcludeDistribution, n: u32) -> Result<bool> {
    if dist.m() != 2 * n || dist.set().len() != 1usize << n {
        return Err(Error::domain(format!(
            "bound needs |S| = 2^{n} in F_2^{}, got |S| = {} in F_2^{}",
            2 * n,
            dist.set().len(),
            dist.m()
        )));
    }
    let spread = (dist.e_max() - dist.e_min()) as u64;
    let holds = 6 * spread <= (1u64 << n) - 2;
    if holds && n > 1 && !dist.is_maximal() {
        return Err(Error::invariant(
            "spread bound holds but the set is not maximal",
        ));
    }
    Ok(holds)
}

/// Identical multiplicity histograms (equivalently a bijection of complements
/// carrying one distribution to the other).
pub fn ed_equivalent(d1: &ExcludeDistribution, d2: &ExcludeDistribution) -> Result<bool> {
    if d1.m() != d2.m() || d1.set().len() != d2.set().len() {
        return Err(Error::domain(
            "ED-equivalence compares sets of equal size in the same space",
        ));
    }
    Ok(d1.histogram() == d2.histogram())
}

/// d_S restricted to X and to Y agree up to a bijection X -> Y, i.e. the two
/// multisets of multiplicities coincide. X and Y may overlap.
pub fn locally_equivalent(dist: &ExcludeDistribution, x: &PointSet, y: &PointSet) -> Result<bool> {
    let mx = dist.multiset(x)?;
    let my = dist.multiset(y)?;
    if mx.len() != my.len() {
        return Err(Error::domain("local equivalence compares sets of equal size"));
    }
    Ok(mx == my)
}

/// Every block of the partition carries the same multiset of multiplicities.
pub fn uniform_on(dist: &ExcludeDistribution, partition: &[PointSet]) -> Result<bool> {
    let Some(first) = partition.first() else {
        return Ok(true);
    };
    if partition.iter().any(|b| b.len() != first.len()) {
        return Err(Error::validation("partition blocks differ in size"));
    }
    let mut seen = BitSet::new(dist.set().space_size());
    for block in partition {
        for &p in block.points() {
            if seen.get(p) {
                return Err(Error::validation(format!(
                    "partition blocks overlap at {p:#x}"
                )));
            }
            seen.set(p);
        }
    }
    let reference = dist.multiset(first)?;
    for block in &partition[1..] {
        if dist.multiset(block)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// x -> Lx + c on F_2^m. Row i of L is a mask whose inner product with x gives
/// output bit i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    rows: Vec<u32>,
    shift: u32,
}

impl AffineMap {
    pub fn new(rows: Vec<u32>, shift: u32) -> Result<Self> {
        let m = rows.len() as u32;
        if m > MAX_AMBIENT {
            return Err(Error::domain(format!("affine map on F_2^{m} is too large")));
        }
        if rows.iter().chain([&shift]).any(|&r| (r as u64) >> m != 0) {
            return Err(Error::validation("affine map entries exceed the dimension"));
        }
        if rank(&rows) != m as usize {
            return Err(Error::validation("linear part is singular"));
        }
        Ok(AffineMap { rows, shift })
    }

    pub fn identity(m: u32) -> Self {
        AffineMap {
            rows: (0..m).map(|i| 1 << i).collect(),
            shift: 0,
        }
    }

    pub fn translation(m: u32, c: u32) -> Result<Self> {
        AffineMap::new((0..m).map(|i| 1 << i).collect(), c)
    }

    pub fn m(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn apply(&self, x: u32) -> u32 {
        let linear = self
            .rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | dot(r, x) << i);
        linear ^ self.shift
    }
}

/// Rank over F_2 of a list of row masks.
fn rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let reduced = basis.iter().fold(r, |acc, &b| acc.min(acc ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn apply_affine(s: &PointSet, a: &AffineMap) -> Result<PointSet> {
    if s.m() != a.m() {
        return Err(Error::domain("affine map and point set dimensions differ"));
    }
    PointSet::new(s.m(), s.points().iter().map(|&p| a.apply(p)).collect())
}

/// A uniformly drawn invertible affine map, reproducible from `seed`.
pub fn random_affine(m: u32, seed: u64) -> AffineMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    loop {
        let rows: Vec<u32> = (0..m).map(|_| rng.gen::<u32>() & mask).collect();
        if let Ok(map) = AffineMap::new(rows, rng.gen::<u32>() & mask) {
            return map;
        }
    }
}

/// A maximal Sidon set grown greedily over a seeded random ordering of F_2^m.
pub fn random_sidon(m: u32, seed: u64) -> Result<PointSet> {
    random_sidon_capped(m, usize::MAX, seed)
}

/// Like [`random_sidon`] but stops once `cap` points have been accepted.
pub fn random_sidon_capped(m: u32, cap: usize, seed: u64) -> Result<PointSet> {
    if m > MAX_AMBIENT {
        return Err(Error::domain(format!("ambient dimension {m} too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..1u32 << m).collect();
    order.shuffle(&mut rng);
    let mut sums = BitSet::new(1 << m);
    let mut chosen: Vec<u32> = Vec::new();
    for x in order {
        if chosen.len() >= cap {
            break;
        }
        // x joins iff it is new and x + s is not already a pairwise sum
        if chosen.iter().all(|&s| s != x && !sums.get(x ^ s)) {
            for &s in &chosen {
                sums.set(x ^ s);
            }
            chosen.push(x);
        }
    }
    PointSet::new(m, chosen)
}
