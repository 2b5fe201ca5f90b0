//! Vectorial Boolean functions F: F_2^n -> F_2^n stored as truth tables.
//!
//! Index conventions used across the crate:
//! - Walsh coefficients W_F(u, v) live at index `(v << n) | u`.
//! - Graph points (x, F(x)) are the 2n-bit masks `(x << n) | F(x)`.

use std::collections::BTreeSet;
use std::ops::{Add, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{dot, gcd, mod_inverse, Elem, FieldSpec};
use crate::sidon::PointSet;

/// Largest n for which truth tables are accepted (graphs live in F_2^{2n}).
pub const MAX_VARS: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    values: Vec<Elem>,
}

impl TruthTable {
    pub fn new(n: u32, values: Vec<Elem>) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&n) {
            return Err(Error::domain(format!(
                "truth tables need 1 <= n <= {MAX_VARS}, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::validation(format!(
                "truth table for n = {n} needs {} entries, got {}",
                1u64 << n,
                values.len()
            )));
        }
        if let Some((x, y)) = values.iter().enumerate().find(|(_, &y)| y >> n != 0) {
            return Err(Error::validation(format!(
                "F({x:#x}) = {y:#x} does not fit in {n} bits"
            )));
        }
        Ok(TruthTable { n, values })
    }

    /// Tabulates `f` on every input of F_2^n.
    pub fn from_fn(n: u32, f: impl Fn(Elem) -> Elem) -> Result<Self> {
        let values = (0..1u32 << n).map(f).collect();
        Self::new(n, values)
    }

    /// The power map x -> x^d over `field`.
    pub fn from_power(field: &FieldSpec, d: u64) -> Self {
        let values = (0..field.size() as Elem).map(|x| field.pow(x, d)).collect();
        TruthTable {
            n: field.n(),
            values,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        self.values[x as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.len()];
        self.values
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    /// Pointwise sum (XOR) with another table of the same dimension.
    pub fn add(&self, other: &TruthTable) -> Result<TruthTable> {
        if self.n != other.n {
            return Err(Error::domain("adding truth tables of different dimension"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(TruthTable { n: self.n, values })
    }
}

/// The graph {(x, F(x))} as a point set of F_2^{2n}, encoded `(x << n) | F(x)`.
pub fn graph_of(f: &TruthTable) -> PointSet {
    let n = f.n;
    let points = f
        .values
        .iter()
        .enumerate()
        .map(|(x, &y)| ((x as u32) << n) | y)
        .collect();
    PointSet::new(2 * n, points).expect("graph points are distinct and in range")
}

/// In-place fast Walsh–Hadamard transform (unnormalised):
/// `out[j] = sum_i (-1)^{popcount(i & j)} in[i]`.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "FWHT length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// All Walsh coefficients W_F(u, v) of a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshTable {
    n: u32,
    values: Vec<i64>,
}

impl WalshTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn get(&self, u: Elem, v: Elem) -> i64 {
        self.values[((v as usize) << self.n) | u as usize]
    }

    /// Coefficients W_F(., v) for one component v.
    pub fn column(&self, v: Elem) -> &[i64] {
        let size = 1usize << self.n;
        &self.values[v as usize * size..(v as usize + 1) * size]
    }

    /// Raw storage in `(v << n) | u` order.
    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Walsh transform by one FWHT of the sign vector x -> (-1)^{v.F(x)} per v.
pub fn walsh_full(f: &TruthTable) -> WalshTable {
    let n = f.n;
    let size = 1usize << n;
    let mut values = vec![0i64; size * size];
    values
        .par_chunks_mut(size)
        .enumerate()
        .for_each(|(v, column)| {
            for (x, slot) in column.iter_mut().enumerate() {
                *slot = if dot(v as u32, f.values[x]) == 0 { 1 } else { -1 };
            }
            fwht(column);
        });
    WalshTable { n, values }
}

/// One row of the difference distribution table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdtRow {
    pub a: Elem,
    pub counts: Vec<u32>,
}

pub fn ddt_row(f: &TruthTable, a: Elem) -> DdtRow {
    let mut counts = vec![0u32; f.len()];
    for x in 0..f.len() as Elem {
        counts[(f.eval(x ^ a) ^ f.eval(x)) as usize] += 1;
    }
    DdtRow { a, counts }
}

/// Every nonzero derivative is 2-to-1 (DDT entries in {0, 2}).
pub fn is_apn(f: &TruthTable) -> bool {
    (1..f.len() as Elem).into_par_iter().all(|a| {
        let mut seen = vec![0u8; f.len()];
        (0..f.len() as Elem).all(|x| {
            let b = (f.eval(x ^ a) ^ f.eval(x)) as usize;
            seen[b] += 1;
            seen[b] <= 2
        })
    })
}

/// Almost bent: every W_F(u, v) with (u, v) != (0, 0) lies in {0, ±2^{(n+1)/2}}.
pub fn is_ab(f: &TruthTable) -> bool {
    if f.n.is_multiple_of(2) {
        return false;
    }
    is_ab_walsh(&walsh_full(f))
}

pub fn is_ab_walsh(w: &WalshTable) -> bool {
    if w.n.is_multiple_of(2) {
        return false;
    }
    let level = 1i64 << w.n.div_ceil(2);
    // column v = 0 is 2^n at u = 0 and 0 elsewhere for every function
    (1..1u32 << w.n).all(|v| {
        w.column(v)
            .iter()
            .all(|&c| c == 0 || c.abs() == level)
    })
}

/// Distinct nonzero magnitudes |W_F(u, v)| of component v.
pub fn walsh_levels(w: &WalshTable, v: Elem) -> BTreeSet<u64> {
    w.column(v)
        .iter()
        .filter(|&&c| c != 0)
        .map(|c| c.unsigned_abs())
        .collect()
}

/// Each component v != 0 has Walsh values in {0, ±λ_v}.
pub fn is_plateaued(f: &TruthTable) -> bool {
    is_plateaued_walsh(&walsh_full(f))
}

pub fn is_plateaued_walsh(w: &WalshTable) -> bool {
    (1..1u32 << w.n).all(|v| walsh_levels(w, v).len() <= 1)
}

/// Every component v.F with v != 0 is unbalanced, i.e. W_F(0, v) != 0.
pub fn components_all_unbalanced(f: &TruthTable) -> bool {
    components_all_unbalanced_walsh(&walsh_full(f))
}

pub fn components_all_unbalanced_walsh(w: &WalshTable) -> bool {
    (1..1u32 << w.n).all(|v| w.get(0, v) != 0)
}

/// Binary Möbius transform in place: truth table of a Boolean function to ANF coefficients.
pub fn moebius(bits: &mut [u8]) {
    let len = bits.len();
    let mut h = 1;
    while h < len {
        for block in bits.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        h *= 2;
    }
}

/// Maximum ANF degree over the n coordinate functions.
pub fn algebraic_degree(f: &TruthTable) -> u32 {
    (0..f.n)
        .map(|bit| {
            let mut coord: Vec<u8> = f.values.iter().map(|&y| (y >> bit & 1) as u8).collect();
            moebius(&mut coord);
            coord
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == 1)
                .map(|(mono, _)| mono.count_ones())
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Cyclotomic equivalence of the power maps x^d and x^{d2} over GF(2^n):
/// d ≡ 2^i d2, or d ≡ 2^i d2^{-1} when d2 is a unit, modulo 2^n - 1.
pub fn cyclotomic_equivalent(n: u32, d: u64, d2: u64) -> bool {
    cyclotomic_residues(n, d2)
        .into_iter()
        .any(|r| r == d % ((1u64 << n) - 1))
}

/// The residues d is compared against: the 2-cyclotomic coset of `d2`, plus the
/// coset of its inverse when the inverse exists.
pub fn cyclotomic_residues(n: u32, d2: u64) -> Vec<u64> {
    let modulus = (1u64 << n) - 1;
    let coset = |base: u64| (0..n).map(move |i| ((base << i) % modulus) % modulus);
    let mut out: Vec<u64> = coset(d2 % modulus).collect();
    if gcd(d2, modulus) == 1 {
        let inv = mod_inverse(d2 as i64, modulus as i64).expect("coprime") as u64;
        out.extend(coset(inv));
    }
    out
}

/// The inverse-side coset 2^i * d2^{-1} mod 2^n - 1, for reporting.
pub fn inverse_coset(n: u32, d2: u64) -> Option<Vec<u64>> {
    let modulus = (1u64 << n) - 1;
    let inv = mod_inverse(d2 as i64, modulus as i64).ok()? as u64;
    Some((0..n).map(|i| (inv << i) % modulus).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(n: u32, d: u64) -> TruthTable {
        TruthTable::from_power(&FieldSpec::new(n).unwrap(), d)
    }

    #[test]
    fn power_tables() {
        let id = power(4, 1);
        assert!(id.values().iter().enumerate().all(|(x, &y)| x as u32 == y));
        let one = power(4, 0);
        assert!(one.values().iter().all(|&y| y == 1));
        let f = TruthTable::from_power(&FieldSpec::with_modulus(3, 0b1011).unwrap(), 3);
        assert_eq!(f.eval(0b010), 0b011);
    }

    #[test]
    fn graph_encoding() {
        let id = power(2, 1);
        let g = graph_of(&id);
        assert_eq!(g.points(), &[0b0000, 0b0101, 0b1010, 0b1111]);
        assert_eq!(graph_of(&power(5, 3)).len(), 32);
    }

    #[test]
    fn table_validation() {
        assert!(TruthTable::new(2, vec![0, 1, 2]).is_err());
        assert!(TruthTable::new(2, vec![0, 1, 2, 4]).is_err());
        assert!(TruthTable::new(0, vec![0]).is_err());
    }

    #[test]
    fn walsh_basics() {
        for n in 2..=6 {
            let f = power(n, 3);
            let w = walsh_full(&f);
            assert_eq!(w.get(0, 0), 1 << n);
            for v in 0..1u32 << n {
                let energy: i64 = w.column(v).iter().map(|c| c * c).sum();
                assert_eq!(energy, 1 << (2 * n));
                assert!(w.column(v).iter().all(|c| c % 2 == 0));
            }
        }
        let w3 = walsh_full(&power(3, 3));
        for v in 0..8 {
            for u in 0..8 {
                if (u, v) != (0, 0) {
                    assert!([0, 4, -4].contains(&w3.get(u, v)));
                }
            }
        }
    }

    #[test]
    fn apn_flags() {
        assert!(is_apn(&power(4, 3)));
        assert!(!is_apn(&power(4, 1)));
        assert!(is_apn(&power(5, 15)));
        let row = ddt_row(&power(5, 3), 7);
        assert_eq!(row.counts.iter().sum::<u32>(), 32);
        assert!(row.counts.iter().all(|c| *c == 0 || *c == 2));
    }

    #[test]
    fn ab_flags() {
        assert!(is_ab(&power(5, 3)));
        assert!(!is_ab(&power(4, 3)));
        assert!(!is_ab(&power(5, 29)));
        // Dobbertin at n = 5 has a Walsh value outside {0, ±8}
        let w = walsh_full(&power(5, 29));
        assert!(w
            .values()
            .iter()
            .enumerate()
            .skip(1)
            .any(|(_, &c)| c != 0 && c.abs() != 8));
    }

    #[test]
    fn plateaued_flags() {
        for n in 3..=7 {
            assert!(is_plateaued(&power(n, 3)));
        }
        assert!(components_all_unbalanced(&power(4, 3)));
        assert!(!components_all_unbalanced(&power(5, 3)));
        let inv = walsh_full(&power(5, 15));
        assert!(!is_plateaued_walsh(&inv));
        assert!((1..32).any(|v| walsh_levels(&inv, v).len() >= 3));
    }

    #[test]
    fn degrees() {
        assert_eq!(algebraic_degree(&TruthTable::new(2, vec![3; 4]).unwrap()), 0);
        assert_eq!(algebraic_degree(&power(6, 3)), 2);
        assert_eq!(algebraic_degree(&power(5, 15)), 4);
        assert_eq!(algebraic_degree(&power(5, 1)), 1);
    }

    #[test]
    fn cyclotomic() {
        assert!(!cyclotomic_equivalent(5, 3, 7));
        assert_eq!(inverse_coset(5, 7).unwrap(), vec![9, 18, 5, 10, 20]);
        assert!(cyclotomic_equivalent(5, 3, 3));
        assert!(cyclotomic_equivalent(5, 3, 6));
        assert!(cyclotomic_equivalent(5, 6, 3));
        // Inverse: 15 = 2^{-1}... x^15 and x^{30} = x^{-1} are equivalent at n = 5
        assert!(cyclotomic_equivalent(5, 15, 30));
    }

    #[test]
    fn permutation_detection() {
        assert!(power(5, 3).is_permutation());
        assert!(!power(4, 3).is_permutation());
    }
}
