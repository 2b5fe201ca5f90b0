//! Arithmetic in GF(2^n) with a polynomial basis, plus the few integer and
//! vector-space helpers the rest of the crate needs.
//!
//! Elements are plain `u32` bitmasks. Whether a mask is read as a field
//! element or as a vector of F_2^n depends only on which operation is applied
//! to it: `FieldSpec::mul` treats it as a polynomial, [`dot`] as a vector.

use crate::error::{Error, Result};

/// A field element or a vector of F_2^n, as a coefficient bitmask.
pub type Elem = u32;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Default moduli: for each n the primitive polynomial of least weight,
/// ties broken by the smallest integer mask. Index `n - 1`.
pub const DEFAULT_MODULI: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x402b,
    0x8003, 0x1002d,
];

/// A concrete finite field GF(2^n).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
    generator: Elem,
}

impl FieldSpec {
    /// The field of degree `n` built on the default modulus.
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::domain(format!(
                "field degree must be in 1..={MAX_DEGREE}, got {n}"
            )));
        }
        Self::with_modulus(n, DEFAULT_MODULI[n as usize - 1])
    }

    /// The field of degree `n` modulo the given polynomial mask.
    ///
    /// The modulus must have bit `n` set and be irreducible; the generator is
    /// the smallest element of full multiplicative order.
    pub fn with_modulus(n: u32, modulus: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::domain(format!(
                "field degree must be in 1..={MAX_DEGREE}, got {n}"
            )));
        }
        if poly_degree(modulus) != Some(n) {
            return Err(Error::validation(format!(
                "modulus {modulus:#x} does not have degree {n}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::validation(format!(
                "modulus {modulus:#x} is reducible over F_2"
            )));
        }
        let mut spec = FieldSpec {
            n,
            modulus,
            generator: 1,
        };
        spec.generator = (1..spec.size() as Elem)
            .find(|&g| spec.has_full_order(g))
            .ok_or_else(|| Error::invariant("irreducible modulus without a primitive element"))?;
        Ok(spec)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a as u64) < (1u64 << self.n)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut product = clmul(a, b);
        let n = self.n;
        // reduce from the top down; the product has degree at most 2n - 2
        let mut bit = 2 * n - 1;
        while bit >= n {
            if product >> bit & 1 == 1 {
                product ^= (self.modulus as u64) << (bit - n);
            }
            bit -= 1;
        }
        product as Elem
    }

    /// Square-and-multiply; `0^0` is 1.
    pub fn pow(&self, a: Elem, mut d: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while d > 0 {
            if d & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            d >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// `alpha^e` for the fixed generator.
    pub fn gen_pow(&self, e: u64) -> Elem {
        self.pow(self.generator, e)
    }

    /// Absolute trace x + x^2 + x^4 + ... + x^(2^(n-1)), returned as 0 or 1.
    pub fn trace_abs(&self, a: Elem) -> u32 {
        let mut sum = 0;
        let mut term = a;
        for _ in 0..self.n {
            sum ^= term;
            term = self.mul(term, term);
        }
        debug_assert!(sum <= 1, "absolute trace left the prime field");
        sum
    }

    /// Relative trace onto GF(2^3): x + x^8 + ... + x^(8^(n/3 - 1)).
    pub fn trace_rel3(&self, a: Elem) -> Result<Elem> {
        if !self.n.is_multiple_of(3) {
            return Err(Error::domain(format!(
                "relative trace onto GF(8) needs 3 | n, got n = {}",
                self.n
            )));
        }
        let mut sum = 0;
        let mut term = a;
        for _ in 0..self.n / 3 {
            sum ^= term;
            term = self.pow(term, 8);
        }
        Ok(sum)
    }

    /// Whether a nonzero `b` is a cube, for even n (for odd n every element is).
    pub fn is_cube(&self, b: Elem) -> Result<bool> {
        if self.n % 2 == 1 {
            return Err(Error::domain(
                "cube classification is only meaningful for even n",
            ));
        }
        if b == 0 {
            return Err(Error::domain("cube classification of zero"));
        }
        Ok(self.pow(b, self.group_order() / 3) == 1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::domain("zero has no multiplicative order"));
        }
        let mut order = self.group_order();
        for p in prime_factors(order) {
            while order.is_multiple_of(p) && self.pow(a, order / p) == 1 {
                order /= p;
            }
        }
        Ok(order)
    }

    /// All elements of full multiplicative order, in increasing mask order.
    pub fn primitive_elements(&self) -> Vec<Elem> {
        (1..self.size() as Elem)
            .filter(|&g| self.has_full_order(g))
            .collect()
    }

    fn has_full_order(&self, g: Elem) -> bool {
        let order = self.group_order();
        self.pow(g, order) == 1
            && prime_factors(order)
                .into_iter()
                .all(|p| self.pow(g, order / p) != 1)
    }
}

/// Carry-less product of two masks.
fn clmul(a: Elem, b: Elem) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Irreducibility over F_2 by trial division with every polynomial of degree
/// at most half the degree of `p`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    (2u32..1 << (deg / 2 + 1))
        .filter(|d| poly_degree(*d).is_some_and(|k| k >= 1 && k <= deg / 2))
        .all(|d| poly_rem(p, d) != 0)
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            out.push(p);
            while x.is_multiple_of(p) {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Standard inner product on F_2^m: parity of the bitwise AND.
#[inline]
pub fn dot(u: u32, v: u32) -> u32 {
    (u & v).count_ones() & 1
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `d` modulo `m`, in `1..m`.
pub fn mod_inverse(d: i64, m: i64) -> Result<i64> {
    if m <= 1 {
        return Err(Error::domain(format!("modulus must exceed 1, got {m}")));
    }
    let (mut old_r, mut r) = (d.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::domain(format!("{d} is not invertible modulo {m}")));
    }
    Ok(old_s.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::with_modulus(3, 0b1011).unwrap()
    }

    /// Discrete-log oracle: exp table from the generator, multiply by adding logs.
    fn log_mul(f: &FieldSpec, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let mut exp = vec![1u32];
        for _ in 1..f.group_order() {
            let last = *exp.last().unwrap();
            // multiply by x via shift-and-reduce, independent of FieldSpec::mul
            let mut next = last << 1;
            if next >> f.n() & 1 == 1 {
                next ^= f.modulus();
            }
            exp.push(next);
        }
        let log = |e: Elem| exp.iter().position(|&x| x == e).unwrap() as u64;
        exp[((log(a) + log(b)) % f.group_order()) as usize]
    }

    #[test]
    fn small_field_products() {
        let f = gf8();
        assert_eq!(f.mul(0b010, 0b100), 0b011);
        assert_eq!(log_mul(&f, 0b010, 0b100), 0b011);
        for a in 0..8 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
            for b in 0..8 {
                assert_eq!(f.mul(a, b), log_mul(&f, a, b));
            }
        }
    }

    #[test]
    fn log_oracle_agrees_for_n5() {
        let f = FieldSpec::new(5).unwrap();
        for a in 0..32 {
            for b in 0..32 {
                assert_eq!(f.mul(a, b), log_mul(&f, a, b));
            }
        }
    }

    #[test]
    fn inverses() {
        let f = gf8();
        assert_eq!(f.inv(1).unwrap(), 1);
        // exhaustive search over the 7 nonzero elements
        let brute = (1..8).find(|&b| f.mul(0b010, b) == 1).unwrap();
        assert_eq!(brute, 0b101);
        assert_eq!(f.inv(0b010).unwrap(), 0b101);
        assert!(matches!(f.inv(0), Err(Error::Domain(_))));
        for n in 1..=8 {
            let f = FieldSpec::new(n).unwrap();
            for a in 1..f.size() as Elem {
                let i = f.inv(a).unwrap();
                assert_eq!(f.mul(a, i), 1);
                assert_eq!(f.inv(i).unwrap(), a);
            }
        }
    }

    #[test]
    fn powers() {
        let f = gf8();
        assert_eq!(f.pow(0b010, 3), f.mul(0b010, f.mul(0b010, 0b010)));
        assert_eq!(f.pow(0b010, 3), 0b011);
        assert_eq!(f.pow(0, 0), 1);
        assert_eq!(f.pow(5, 0), 1);
        for n in [2, 4, 7, 10] {
            let f = FieldSpec::new(n).unwrap();
            for a in 1..f.size() as Elem {
                assert_eq!(f.pow(a, f.group_order()), 1);
            }
        }
    }

    #[test]
    fn traces() {
        let f1 = FieldSpec::new(1).unwrap();
        assert_eq!(f1.trace_abs(1), 1);
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(f2.trace_abs(1), 0);
        for n in 1..=8 {
            let f = FieldSpec::new(n).unwrap();
            let zeros = (0..f.size() as Elem).filter(|&a| f.trace_abs(a) == 0).count();
            assert_eq!(zeros, f.size() / 2);
            for a in 0..f.size() as Elem {
                for b in 0..f.size() as Elem {
                    assert_eq!(f.trace_abs(a ^ b), f.trace_abs(a) ^ f.trace_abs(b));
                }
            }
        }
    }

    #[test]
    fn relative_trace() {
        let f3 = FieldSpec::new(3).unwrap();
        for a in 0..8 {
            assert_eq!(f3.trace_rel3(a).unwrap(), a);
        }
        let f6 = FieldSpec::new(6).unwrap();
        for a in 0..64 {
            let r = f6.trace_rel3(a).unwrap();
            assert_eq!(f6.pow(r, 8), r);
            for b in 0..64 {
                assert_eq!(
                    f6.trace_rel3(a ^ b).unwrap(),
                    r ^ f6.trace_rel3(b).unwrap()
                );
            }
        }
        assert!(FieldSpec::new(4).unwrap().trace_rel3(1).is_err());
    }

    #[test]
    fn cubes() {
        let f4 = FieldSpec::new(4).unwrap();
        assert!(f4.is_cube(1).unwrap());
        assert!(!f4.is_cube(f4.generator()).unwrap());
        for n in (2..=10).step_by(2) {
            let f = FieldSpec::new(n).unwrap();
            let cubes = (1..f.size() as Elem)
                .filter(|&b| f.is_cube(b).unwrap())
                .count() as u64;
            assert_eq!(cubes, f.group_order() / 3);
            // the set of cubes is exactly the image of x -> x^3
            let image: std::collections::BTreeSet<_> =
                (1..f.size() as Elem).map(|x| f.pow(x, 3)).collect();
            assert_eq!(image.len() as u64, cubes);
            assert!(image.iter().all(|&b| f.is_cube(b).unwrap()));
        }
        assert!(FieldSpec::new(5).unwrap().is_cube(1).is_err());
        assert!(f4.is_cube(0).is_err());
    }

    #[test]
    fn dots() {
        assert_eq!(dot(0b1011, 0), 0);
        assert_eq!(dot(0b101, 0b111), 0);
        assert_eq!(dot(0b101, 0b001), 1);
        assert_eq!(dot(0b110, 0b011), dot(0b011, 0b110));
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(mod_inverse(7, 31).unwrap(), 9);
        assert_eq!(mod_inverse(3, 31).unwrap(), 21);
        assert_eq!(mod_inverse(1, 17).unwrap(), 1);
        assert!(mod_inverse(6, 9).is_err());
    }

    #[test]
    fn default_moduli_are_least_weight_primitive() {
        for n in 1..=MAX_DEGREE {
            let f = FieldSpec::new(n).unwrap();
            let expected = (1u32 << n..1u32 << (n + 1))
                .filter(|&m| m & 1 == 1 && is_irreducible(m))
                .filter(|&m| {
                    let g = FieldSpec::with_modulus(n, m).unwrap();
                    // x itself generates the group iff the polynomial is primitive
                    let x = if n == 1 { 1 } else { 0b10 };
                    g.order_of(x).unwrap() == g.group_order()
                })
                .min_by_key(|&m| (m.count_ones(), m))
                .unwrap();
            assert_eq!(f.modulus(), expected, "n = {n}");
            assert_eq!(f.order_of(f.generator()).unwrap(), f.group_order());
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FieldSpec::with_modulus(4, 0b10101).is_err()); // (x^2+x+1)^2
        assert!(FieldSpec::with_modulus(4, 0b1011).is_err()); // wrong degree
        assert!(FieldSpec::new(0).is_err());
        assert!(FieldSpec::new(17).is_err());
        // irreducible but not primitive: x^4+x^3+x^2+x+1, generator found by search
        let f = FieldSpec::with_modulus(4, 0b11111).unwrap();
        assert_ne!(f.generator(), 0b10);
        assert_eq!(f.order_of(f.generator()).unwrap(), 15);
    }

    #[test]
    fn primitive_element_count() {
        // phi(63) = 36
        assert_eq!(FieldSpec::new(6).unwrap().primitive_elements().len(), 36);
    }
}
