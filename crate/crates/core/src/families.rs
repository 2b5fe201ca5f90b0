//! Constructors for the named APN functions: the infinite power families,
//! the two trace-augmented quadratics and the APN permutation of GF(2^6).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{gcd, Elem, FieldSpec};
use crate::vbf::{is_apn, TruthTable};

/// Coefficients of the GF(2^6) APN permutation as `alpha_exp x_exp` lines.
pub const DILLON6_COEFFS: &str = include_str!("../data/dillon6.coeffs");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// x^{2^k + 1}
    Gold { k: u32 },
    /// x^{2^{2k} - 2^k + 1}
    Kasami { k: u32 },
    /// x^{2^t + 3}, n = 2t + 1
    Welch,
    /// n = 2t + 1, exponent split on the parity of t
    Niho,
    /// x^{2^{2t} - 1}, n = 2t + 1
    Inverse,
    /// x^{2^{4t} + 2^{3t} + 2^{2t} + 2^t - 1}, n = 5t
    Dobbertin,
    /// x^3 + a^{-1} tr(a^3 x^9); `None` selects the field generator
    TraceQuad1 { a: Option<Elem> },
    /// x^3 + a^{-1} Tr_3^n(a^3 x^9 + a^6 x^18), 3 | n
    TraceQuad2 { a: Option<Elem> },
    /// The APN permutation of GF(2^6)
    Dillon6,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gold { .. } => "Gold",
            Family::Kasami { .. } => "Kasami",
            Family::Welch => "Welch",
            Family::Niho => "Niho",
            Family::Inverse => "Inverse",
            Family::Dobbertin => "Dobbertin",
            Family::TraceQuad1 { .. } => "TraceQuad1",
            Family::TraceQuad2 { .. } => "TraceQuad2",
            Family::Dillon6 => "Dillon6",
        }
    }

    pub fn is_power(&self) -> bool {
        !matches!(
            self,
            Family::TraceQuad1 { .. } | Family::TraceQuad2 { .. } | Family::Dillon6
        )
    }
}

/// A family together with a dimension whose side conditions have been checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    family: Family,
    n: u32,
}

impl FamilySpec {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        let fail = |cond: &str| {
            Err(Error::validation(format!(
                "{} at n = {n} requires {cond}",
                family.name()
            )))
        };
        if n == 0 || n > crate::field::MAX_DEGREE {
            return fail("1 <= n <= 16");
        }
        match family {
            Family::Gold { k } | Family::Kasami { k } => {
                if k == 0 || k > 15 {
                    return fail("1 <= k <= 15");
                }
                if gcd(k as u64, n as u64) != 1 {
                    return fail(&format!("gcd(k, n) = 1 (k = {k})"));
                }
            }
            Family::Welch | Family::Niho | Family::Inverse => {
                if n.is_multiple_of(2) || n < 3 {
                    return fail("n = 2t + 1 with t >= 1");
                }
            }
            Family::Dobbertin => {
                if !n.is_multiple_of(5) {
                    return fail("n = 5t");
                }
            }
            Family::TraceQuad1 { a } => {
                if a == Some(0) {
                    return fail("a != 0");
                }
            }
            Family::TraceQuad2 { a } => {
                if a == Some(0) {
                    return fail("a != 0");
                }
                if !n.is_multiple_of(3) {
                    return fail("3 | n");
                }
            }
            Family::Dillon6 => {
                if n != 6 {
                    return fail("n = 6");
                }
            }
        }
        if let Family::TraceQuad1 { a: Some(a) } | Family::TraceQuad2 { a: Some(a) } = family {
            if a >> n != 0 {
                return fail(&format!("a < 2^n (a = {a:#x})"));
            }
        }
        Ok(FamilySpec { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The exponent d of a power family.
    pub fn exponent(&self) -> Result<u64> {
        let n = self.n as u64;
        let t = (n - 1) / 2;
        let d = match self.family {
            Family::Gold { k } => (1u64 << k) + 1,
            Family::Kasami { k } => (1u64 << (2 * k)) - (1u64 << k) + 1,
            Family::Welch => (1u64 << t) + 3,
            Family::Niho if t.is_multiple_of(2) => (1u64 << t) + (1u64 << (t / 2)) - 1,
            Family::Niho => (1u64 << t) + (1u64 << (3 * t).div_ceil(2)) - 1,
            Family::Inverse => (1u64 << (2 * t)) - 1,
            Family::Dobbertin => {
                let t = n / 5;
                (1u64 << (4 * t)) + (1u64 << (3 * t)) + (1u64 << (2 * t)) + (1u64 << t) - 1
            }
            other => {
                return Err(Error::domain(format!(
                    "{} is not a power family",
                    other.name()
                )))
            }
        };
        Ok(d)
    }

    /// The parameter `a` of the trace-augmented families, with the default applied.
    pub fn trace_param(&self, field: &FieldSpec) -> Option<Elem> {
        match self.family {
            Family::TraceQuad1 { a } | Family::TraceQuad2 { a } => {
                Some(a.unwrap_or(field.generator()))
            }
            _ => None,
        }
    }

    /// Truth table of the function over `field`; the result is checked to be APN.
    pub fn build(&self, field: &FieldSpec) -> Result<TruthTable> {
        Ok(self.build_with_info(field)?.0)
    }

    /// As [`FamilySpec::build`], also returning the field element used as a
    /// parameter (`a` for the trace families, the primitive element for Dillon6).
    pub fn build_with_info(&self, field: &FieldSpec) -> Result<(TruthTable, Option<Elem>)> {
        if field.n() != self.n {
            return Err(Error::domain(format!(
                "family built for n = {} over a field of degree {}",
                self.n,
                field.n()
            )));
        }
        let (table, param) = match self.family {
            Family::TraceQuad1 { .. } => {
                let a = self.trace_param(field).expect("trace family");
                (trace_quad1(field, a)?, Some(a))
            }
            Family::TraceQuad2 { .. } => {
                let a = self.trace_param(field).expect("trace family");
                (trace_quad2(field, a)?, Some(a))
            }
            Family::Dillon6 => {
                let (table, alpha) = build_dillon6(field)?;
                (table, Some(alpha))
            }
            _ => (TruthTable::from_power(field, self.exponent()?), None),
        };
        if !is_apn(&table) {
            return Err(Error::invariant(format!("{self} over modulus {:#x} is not APN", field.modulus())));
        }
        Ok((table, param))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Gold { k } => write!(f, "gold:k={k}"),
            Family::Kasami { k } => write!(f, "kasami:k={k}"),
            Family::Welch => write!(f, "welch"),
            Family::Niho => write!(f, "niho"),
            Family::Inverse => write!(f, "inverse"),
            Family::Dobbertin => write!(f, "dobbertin"),
            Family::TraceQuad1 { a: None } => write!(f, "tracequad1"),
            Family::TraceQuad1 { a: Some(a) } => write!(f, "tracequad1:a={a:#x}"),
            Family::TraceQuad2 { a: None } => write!(f, "tracequad2"),
            Family::TraceQuad2 { a: Some(a) } => write!(f, "tracequad2:a={a:#x}"),
            Family::Dillon6 => write!(f, "dillon6"),
        }?;
        write!(f, " (n={})", self.n)
    }
}

fn trace_quad1(field: &FieldSpec, a: Elem) -> Result<TruthTable> {
    let a_inv = field.inv(a)?;
    let a3 = field.pow(a, 3);
    TruthTable::from_fn(field.n(), |x| {
        let cube = field.pow(x, 3);
        if field.trace_abs(field.mul(a3, field.pow(x, 9))) == 1 {
            cube ^ a_inv
        } else {
            cube
        }
    })
}

fn trace_quad2(field: &FieldSpec, a: Elem) -> Result<TruthTable> {
    let a_inv = field.inv(a)?;
    let a3 = field.pow(a, 3);
    let a6 = field.pow(a, 6);
    let mut values = Vec::with_capacity(field.size());
    for x in 0..field.size() as Elem {
        let inner = field.mul(a3, field.pow(x, 9)) ^ field.mul(a6, field.pow(x, 18));
        values.push(field.pow(x, 3) ^ field.mul(a_inv, field.trace_rel3(inner)?));
    }
    TruthTable::new(field.n(), values)
}

/// Parses the `alpha_exp x_exp` coefficient list.
pub fn parse_coeffs(text: &str) -> Result<Vec<(u64, u64)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut parts = line.split_whitespace().map(str::parse::<u64>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(a)), Some(Ok(e)), None) => Ok((a, e)),
                _ => Err(Error::Parse(format!("bad coefficient line `{line}`"))),
            }
        })
        .collect()
}

/// Evaluates sum alpha^a x^e over the field.
pub fn eval_polynomial(field: &FieldSpec, alpha: Elem, coeffs: &[(u64, u64)]) -> TruthTable {
    let weights: Vec<(Elem, u64)> = coeffs
        .iter()
        .map(|&(a, e)| (field.pow(alpha, a), e))
        .collect();
    let values = (0..field.size() as Elem)
        .map(|x| {
            weights
                .iter()
                .fold(0, |acc, &(c, e)| acc ^ field.mul(c, field.pow(x, e)))
        })
        .collect();
    TruthTable::new(field.n(), values).expect("polynomial values lie in the field")
}

/// The GF(2^6) APN permutation. The listed coefficients assume a particular
/// primitive element; the field generator is tried first, then every other
/// primitive element in increasing order until the result is an APN
/// permutation. Returns the table and the primitive element used.
pub fn build_dillon6(field: &FieldSpec) -> Result<(TruthTable, Elem)> {
    if field.n() != 6 {
        return Err(Error::domain("Dillon6 lives in GF(2^6)"));
    }
    let coeffs = parse_coeffs(DILLON6_COEFFS)?;
    let candidates = std::iter::once(field.generator()).chain(
        field
            .primitive_elements()
            .into_iter()
            .filter(|&g| g != field.generator()),
    );
    for alpha in candidates {
        let table = eval_polynomial(field, alpha, &coeffs);
        if table.is_permutation() && is_apn(&table) {
            return Ok((table, alpha));
        }
    }
    Err(Error::invariant(format!(
        "no primitive element of GF(2^6) mod {:#x} turns the coefficient list into an APN permutation",
        field.modulus()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbf::algebraic_degree;

    fn spec(family: Family, n: u32) -> FamilySpec {
        FamilySpec::new(family, n).unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(spec(Family::Gold { k: 1 }, 4).exponent().unwrap(), 3);
        assert_eq!(spec(Family::Kasami { k: 1 }, 6).exponent().unwrap(), 3);
        assert_eq!(spec(Family::Kasami { k: 3 }, 8).exponent().unwrap(), 57);
        assert_eq!(spec(Family::Welch, 5).exponent().unwrap(), 7);
        assert_eq!(spec(Family::Niho, 5).exponent().unwrap(), 5);
        assert_eq!(spec(Family::Niho, 7).exponent().unwrap(), 39);
        assert_eq!(spec(Family::Inverse, 5).exponent().unwrap(), 15);
        assert_eq!(spec(Family::Dobbertin, 5).exponent().unwrap(), 29);
        assert_eq!(spec(Family::Dobbertin, 10).exponent().unwrap(), 339);
        assert!(spec(Family::Dillon6, 6).exponent().is_err());
    }

    #[test]
    fn side_conditions() {
        let err = FamilySpec::new(Family::Gold { k: 2 }, 4).unwrap_err();
        assert!(err.to_string().contains("gcd(k, n) = 1"));
        assert!(FamilySpec::new(Family::Welch, 6).is_err());
        assert!(FamilySpec::new(Family::Dobbertin, 6).is_err());
        assert!(FamilySpec::new(Family::TraceQuad2 { a: None }, 4).is_err());
        assert!(FamilySpec::new(Family::TraceQuad1 { a: Some(0) }, 4).is_err());
        assert!(FamilySpec::new(Family::TraceQuad1 { a: Some(16) }, 4).is_err());
        assert!(FamilySpec::new(Family::Dillon6, 5).is_err());
    }

    #[test]
    fn coefficient_file() {
        let coeffs = parse_coeffs(DILLON6_COEFFS).unwrap();
        assert_eq!(coeffs.len(), 36);
        assert_eq!(coeffs[0], (25, 57));
        assert_eq!(coeffs[35], (13, 1));
    }

    #[test]
    fn dillon6_is_apn_permutation() {
        let field = FieldSpec::new(6).unwrap();
        let (table, alpha) = build_dillon6(&field).unwrap();
        assert!(table.is_permutation());
        assert!(is_apn(&table));
        assert_eq!(field.order_of(alpha).unwrap(), 63);
    }

    #[test]
    fn trace_families_are_quadratic_apn() {
        for n in [3, 4, 5, 6, 7, 8] {
            let field = FieldSpec::new(n).unwrap();
            let f = spec(Family::TraceQuad1 { a: None }, n).build(&field).unwrap();
            assert_eq!(algebraic_degree(&f), 2);
        }
        for n in [3, 6, 9] {
            let field = FieldSpec::new(n).unwrap();
            let f = spec(Family::TraceQuad2 { a: None }, n).build(&field).unwrap();
            assert_eq!(algebraic_degree(&f), 2);
        }
    }

    #[test]
    fn display_names() {
        assert_eq!(spec(Family::Gold { k: 1 }, 4).to_string(), "gold:k=1 (n=4)");
        assert_eq!(
            spec(Family::TraceQuad1 { a: Some(3) }, 4).to_string(),
            "tracequad1:a=0x3 (n=4)"
        );
    }
}
