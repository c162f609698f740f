//! Arithmetic modulo a word-sized prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The default modulus for randomized rank checks: the Mersenne prime 2^61 - 1.
pub const DEFAULT_MODULUS: u64 = (1u64 << 61) - 1;

/// Lower bound every modulus used for randomized checks must exceed.
pub const MIN_MODULUS: u64 = 1u64 << 60;

/// A prime field `Z/pZ` with `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, rejecting composite moduli.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1u64 << 63 || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    /// Builds the field for a randomized check; the modulus must exceed 2^60.
    pub fn for_checks(p: u64) -> Result<Self> {
        if p <= MIN_MODULUS {
            return Err(Error::ModulusTooSmall(p));
        }
        Self::new(p)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Signed power; `base` must be nonzero when `exp < 0`.
    pub fn pow_signed(&self, base: u64, exp: i64) -> Result<u64> {
        if exp >= 0 {
            Ok(self.pow(base, exp as u64))
        } else {
            let inv = self.inv(base)?;
            Ok(self.pow(inv, exp.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::NotInvertibleMod { modulus: self.p });
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        x.mod_floor(&m).to_u64().expect("reduced residue fits in u64")
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Reduces a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, x: &BigRational) -> Result<u64> {
        if x.is_zero() {
            return Ok(0);
        }
        let num = self.from_bigint(x.numer());
        let den = self.from_bigint(x.denom());
        Ok(self.mul(num, self.inv(den)?))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mersenne_61_is_prime() {
        assert!(is_prime(DEFAULT_MODULUS));
        assert!(!is_prime(DEFAULT_MODULUS - 2));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
    }

    #[test]
    fn small_modulus_rejected_for_checks() {
        assert!(matches!(
            PrimeField::for_checks(1_000_000_007),
            Err(Error::ModulusTooSmall(_))
        ));
        assert!(PrimeField::for_checks(DEFAULT_MODULUS).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(DEFAULT_MODULUS).unwrap();
        for a in [1u64, 2, 12345, DEFAULT_MODULUS - 1] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert!(f.inv(0).is_err());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.mul(f.from_rational(&half).unwrap(), 2), 1);
    }
}
