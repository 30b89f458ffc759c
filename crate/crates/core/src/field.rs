//! Scalar fields used for word values, fractions and continued fraction elements.
//!
//! `BigRational` gives exact results. `Residues` reduces modulo four large primes and is
//! used once exact sizes become impractical: equal residues under all four primes are
//! taken as equality of the underlying integers.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_u64(n: u64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn inv(&self) -> Option<Self>;

    /// `base^exp` for `exp >= 0`.
    fn pow_int(base: u64, exp: &BigInt) -> Self;

    /// `b^eb * a^ea`.
    fn monomial(b: u64, eb: &BigInt, a: u64, ea: &BigInt) -> Self {
        Self::pow_int(b, eb) * Self::pow_int(a, ea)
    }
}

impl Field for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn pow_int(base: u64, exp: &BigInt) -> Self {
        assert!(!exp.is_negative(), "negative exponent");
        if base.is_power_of_two() {
            let shift = exp * BigInt::from(base.trailing_zeros());
            let shift = shift.to_usize().expect("exponent fits in memory");
            return BigRational::from_integer(BigInt::one() << shift);
        }
        let e: BigUint = exp.magnitude().clone();
        BigRational::from_integer(Pow::pow(BigInt::from(base), e))
    }
}

/// The four largest safe primes below `2^64`. With `(m - 1) / 2` prime, every base other
/// than `0, 1, -1` has order at least `(m - 1) / 2`, so no power `b^q` with `0 < q < 2^62`
/// is `1`; the moduli of `2^61 - 1` style would make `1 - 2^61` vanish.
pub const MODULI: [u64; 4] = [
    18_446_744_073_709_550_147,
    18_446_744_073_709_549_019,
    18_446_744_073_709_543_127,
    18_446_744_073_709_538_123,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residues(pub [u64; 4]);

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

impl Residues {
    fn map2(self, o: Residues, f: impl Fn(u64, u64, u64) -> u64) -> Residues {
        let mut out = [0u64; 4];
        for i in 0..4 {
            out[i] = f(self.0[i], o.0[i], MODULI[i]);
        }
        Residues(out)
    }
}

impl Add for Residues {
    type Output = Residues;
    fn add(self, o: Residues) -> Residues {
        self.map2(o, |a, b, m| ((a as u128 + b as u128) % m as u128) as u64)
    }
}

impl Sub for Residues {
    type Output = Residues;
    fn sub(self, o: Residues) -> Residues {
        self.map2(o, |a, b, m| ((a as u128 + m as u128 - b as u128) % m as u128) as u64)
    }
}

impl Mul for Residues {
    type Output = Residues;
    fn mul(self, o: Residues) -> Residues {
        self.map2(o, mulmod)
    }
}

impl Neg for Residues {
    type Output = Residues;
    fn neg(self) -> Residues {
        Residues::zero() - self
    }
}

impl Zero for Residues {
    fn zero() -> Self {
        Residues([0; 4])
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl One for Residues {
    fn one() -> Self {
        Residues([1; 4])
    }
}

impl Field for Residues {
    fn from_bigint(n: &BigInt) -> Self {
        let mut out = [0u64; 4];
        for (i, &m) in MODULI.iter().enumerate() {
            out[i] = n.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        }
        Residues(out)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.contains(&0) {
            return None;
        }
        let mut out = [0u64; 4];
        for (i, &m) in MODULI.iter().enumerate() {
            out[i] = powmod(self.0[i], m - 2, m);
        }
        Some(Residues(out))
    }

    fn pow_int(base: u64, exp: &BigInt) -> Self {
        assert!(!exp.is_negative(), "negative exponent");
        let mut out = [0u64; 4];
        for (i, &m) in MODULI.iter().enumerate() {
            let b = base % m;
            out[i] = if b == 0 {
                if exp.is_zero() {
                    1
                } else {
                    0
                }
            } else {
                // Fermat: exponents reduce modulo m - 1
                let e = exp.mod_floor(&BigInt::from(m - 1)).to_u64().unwrap();
                powmod(b, e, m)
            };
        }
        Residues(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_track_integer_arithmetic() {
        let x = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let y = BigInt::from(-987654321i64);
        let rx = Residues::from_bigint(&x);
        let ry = Residues::from_bigint(&y);
        assert_eq!(rx * ry, Residues::from_bigint(&(&x * &y)));
        assert_eq!(rx - ry, Residues::from_bigint(&(&x - &y)));
        assert_eq!(rx * rx.inv().unwrap(), Residues::one());
    }

    #[test]
    fn pow_int_agrees_across_fields() {
        for (base, e) in [(2u64, 77u64), (3, 50), (6, 0), (10, 19)] {
            let e = BigInt::from(e);
            let exact = BigRational::pow_int(base, &e).to_integer();
            assert_eq!(Residues::pow_int(base, &e), Residues::from_bigint(&exact));
        }
    }

    #[test]
    fn huge_exponent_residue_is_consistent() {
        // 2^(e1+e2) = 2^e1 * 2^e2 with exponents far beyond exact reach
        let e1 = BigInt::from(10u64).pow(15u32);
        let e2 = BigInt::from(7u64).pow(17u32);
        let lhs = Residues::pow_int(2, &(&e1 + &e2));
        assert_eq!(lhs, Residues::pow_int(2, &e1) * Residues::pow_int(2, &e2));
    }
}
