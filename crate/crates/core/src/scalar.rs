//! Exact coefficients: residues modulo a prime below 2^31, or rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p >= 1 << 31 {
            return Err(Error::Malformed(format!("prime {p} exceeds 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::Malformed(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rational => write!(f, "QQ"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { residue: u32, modulus: u32 },
    Q(Box<BigRational>),
}

impl Scalar {
    pub fn rational(q: BigRational) -> Scalar {
        Scalar::Q(Box::new(q))
    }

    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Prime(p) => Scalar::Fp {
                residue: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
            Field::Rational => Scalar::rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Scalar {
        match field {
            Field::Prime(p) => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Scalar::Fp {
                    residue: u32::try_from(&r).expect("residue fits"),
                    modulus: p,
                }
            }
            Field::Rational => Scalar::rational(BigRational::from_integer(v.clone())),
        }
    }

    /// Image of a rational in `F_p`; `None` when `p` divides the denominator.
    pub fn reduce_mod(&self, p: u32) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                let f = Field::Prime(p);
                Scalar::from_bigint(f, q.denom())
                    .inv()
                    .map(|d| Scalar::from_bigint(f, q.numer()).mul(&d))
            }
            Scalar::Fp { .. } => panic!("reduce_mod on a finite field element"),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { residue, .. } => *residue == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { residue, .. } => *residue == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { residue: a, modulus }, Scalar::Fp { residue: b, modulus: m2 }) => {
                debug_assert_eq!(modulus, m2);
                Scalar::Fp {
                    residue: ((*a as u64 + *b as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::rational(&**a + &**b),
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { residue: a, modulus }, Scalar::Fp { residue: b, modulus: m2 }) => {
                debug_assert_eq!(modulus, m2);
                Scalar::Fp {
                    residue: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::rational(&**a * &**b),
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { residue, modulus } => Scalar::Fp {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
            Scalar::Q(q) => Scalar::rational(-&**q),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Fp { residue, modulus } => Some(Scalar::Fp {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            }),
            Scalar::Q(q) => Some(Scalar::rational(q.recip())),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Fp { .. } => false,
            Scalar::Q(q) => q.is_negative(),
        }
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { residue, .. } => write!(f, "{residue}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_plus_two_mod_three() {
        let f = Field::Prime(3);
        let two = Scalar::from_i64(f, 2);
        assert_eq!(two.add(&two), Scalar::one(f));
    }

    #[test]
    fn inverses() {
        let f = Field::prime(101).unwrap();
        for v in 1..101 {
            let a = Scalar::from_i64(f, v);
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        let q = Scalar::rational(BigRational::new(BigInt::from(6), BigInt::from(-4)));
        assert_eq!(q.to_string(), "-3/2");
        assert!(q.mul(&q.inv().unwrap()).is_one());
    }

    #[test]
    fn rejects_composite_and_large() {
        assert!(Field::prime(91).is_err());
        assert!(Field::prime(2_147_483_659).is_err());
        assert!(Field::prime(2).is_ok());
    }
}
