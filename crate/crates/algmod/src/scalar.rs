//! Exact scalar arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every matrix in this crate is defined over one of these fields. Rationals
//! are kept in lowest terms with positive denominator (the `num` crate
//! guarantees this on construction), prime-field values in `[0, p)`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Which field a matrix or model lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The rationals, arbitrary precision.
    Q,
    /// The prime field `F_p`, `p` a prime below `2^31`.
    Fp(u32),
}

impl FieldSpec {
    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Q => Scalar::Rat(BigRational::zero()),
            FieldSpec::Fp(p) => Scalar::Fp(0, p),
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            FieldSpec::Q => Scalar::Rat(BigRational::one()),
            FieldSpec::Fp(p) => Scalar::Fp(1, p),
        }
    }

    /// Embed an integer.
    pub fn from_int(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Q => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Fp(p) => {
                let p64 = p as i64;
                Scalar::Fp(n.rem_euclid(p64) as u64, p)
            }
        }
    }

    /// Parse the textual form used in fixture files and reports:
    /// `"3"`, `"-2/5"` over Q, a decimal residue over `F_p`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, ScalarParseError> {
        let s = s.trim();
        match *self {
            FieldSpec::Q => {
                let (num_str, den_str) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num_str
                    .trim()
                    .parse()
                    .map_err(|_| ScalarParseError(s.to_string()))?;
                let d: BigInt = den_str
                    .trim()
                    .parse()
                    .map_err(|_| ScalarParseError(s.to_string()))?;
                if d.is_zero() {
                    return Err(ScalarParseError(s.to_string()));
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            FieldSpec::Fp(p) => {
                let n: i64 = s.parse().map_err(|_| ScalarParseError(s.to_string()))?;
                Ok(self.from_int(n))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FieldSpec {
    /// Parse `"Q"` or `"Fp:<p>"`.
    pub fn parse(s: &str) -> Result<FieldSpec, ScalarParseError> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(FieldSpec::Q);
        }
        let rest = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("fp:"))
            .or_else(|| s.strip_prefix("FP:"))
            .ok_or_else(|| ScalarParseError(s.to_string()))?;
        let p: u32 = rest.parse().map_err(|_| ScalarParseError(s.to_string()))?;
        if p < 2 || !is_prime(p) {
            return Err(ScalarParseError(format!("{s} (modulus must be prime)")));
        }
        Ok(FieldSpec::Fp(p))
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. The `Fp` variant carries its modulus so values
/// are self-contained; mixing moduli is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarParseError(pub String);

impl fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse scalar: {}", self.0)
    }
}

impl std::error::Error for ScalarParseError {}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Q,
            Scalar::Fp(_, p) => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp((a + b) % (*p as u64), *p)
            }
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp(a, p) => {
                let p64 = *p as u64;
                Scalar::Fp((p64 - a % p64) % p64, *p)
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                let prod = (*a as u128 * *b as u128) % (*p as u128);
                Scalar::Fp(prod as u64, *p)
            }
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Fp(a, p) => {
                assert!(*a != 0, "inverse of zero");
                // Fermat: a^(p-2) mod p
                let mut base = *a as u128;
                let modulus = *p as u128;
                let mut exp = (*p - 2) as u64;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % modulus;
                    }
                    base = base * base % modulus;
                    exp >>= 1;
                }
                Scalar::Fp(acc as u64, *p)
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Textual form for fixture files and reports.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(v, _) => v.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normal_form() {
        let f = FieldSpec::Q;
        let a = f.parse_scalar("4/-6").unwrap();
        assert_eq!(a.render(), "-2/3");
        let b = f.parse_scalar("-2/3").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::Fp(5);
        let a = f.from_int(3);
        let b = f.from_int(4);
        assert_eq!(a.mul(&b), f.from_int(2));
        assert_eq!(a.add(&b), f.from_int(2));
        assert_eq!(a.inv().mul(&a), f.one());
        assert_eq!(f.from_int(-1), f.from_int(4));
    }

    #[test]
    fn field_spec_parse() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Q);
        assert_eq!(FieldSpec::parse("Fp:7").unwrap(), FieldSpec::Fp(7));
        assert!(FieldSpec::parse("Fp:6").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }

    #[test]
    fn inverse_roundtrip_q() {
        let f = FieldSpec::Q;
        let a = f.parse_scalar("-7/13").unwrap();
        assert!(a.mul(&a.inv()).is_one());
    }
}
