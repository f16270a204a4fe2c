//! Exact p-adic scalars: rationals with a valuation at a fixed odd prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Scalars are exact rationals. Units of `Z_(p)` such as `1/2` are allowed.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An odd prime together with the arithmetic of its residue field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prime {
    p: u64,
    generator: u64,
    dlog: Vec<u64>,
}

impl Prime {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 3 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        if p > 1_000 {
            return Err(Error::BadPrime(p));
        }
        let generator = (2..p)
            .find(|&g| {
                let mut x = 1u64;
                (1..p - 1).all(|_| {
                    x = x * g % p;
                    x != 1
                })
            })
            .expect("every prime has a primitive root");
        let mut dlog = vec![0; p as usize];
        let mut x = 1u64;
        for e in 0..p - 1 {
            dlog[x as usize] = e;
            x = x * generator % p;
        }
        Ok(Prime { p, generator, dlog })
    }

    pub fn get(&self) -> u64 {
        self.p
    }

    pub fn as_scalar(&self) -> Scalar {
        int(self.p as i64)
    }

    /// Smallest primitive root modulo p.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Discrete logarithm to the base `generator()` of a nonzero residue.
    pub fn dlog(&self, u: u64) -> u64 {
        debug_assert!(!u.is_multiple_of(self.p));
        self.dlog[(u % self.p) as usize]
    }

    /// `p^k` as an exact scalar, `k` may be negative.
    pub fn pow(&self, k: i64) -> Scalar {
        let base = BigInt::from(self.p).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }

    /// p-adic valuation, `None` for zero.
    pub fn valuation(&self, x: &Scalar) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(self.val_int(x.numer()) - self.val_int(x.denom()))
    }

    fn val_int(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    /// `valuation(x) >= k`, treating zero as having infinite valuation.
    pub fn val_at_least(&self, x: &Scalar, k: i64) -> bool {
        self.valuation(x).is_none_or(|v| v >= k)
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        self.valuation(x) == Some(0)
    }

    /// Image of `x` in `Z / p^e`, as an integer in `[0, p^e)`. Requires `valuation(x) >= 0`.
    pub fn reduce(&self, x: &Scalar, e: u32) -> Result<u64, Error> {
        if !self.val_at_least(x, 0) {
            return Err(Error::NegativeValuation);
        }
        let m = BigInt::from(self.p).pow(e);
        let num = x.numer().mod_floor(&m);
        let den = x.denom().mod_floor(&m);
        let inv = mod_inverse(&den, &m).ok_or(Error::NegativeValuation)?;
        Ok((num * inv).mod_floor(&m).to_u64().expect("residue fits"))
    }

    /// Residue of `x` in `F_p`.
    pub fn residue(&self, x: &Scalar) -> Result<u64, Error> {
        self.reduce(x, 1)
    }

    /// Canonical representative of `x` modulo `p^k Z_p`: the rational `r / p^s` with
    /// `0 <= r < p^(k+s)` where `s` clears the negative part of the valuation.
    pub fn canonical_mod(&self, x: &Scalar, k: i64) -> Scalar {
        let v = match self.valuation(x) {
            None => return Scalar::zero(),
            Some(v) => v,
        };
        if v >= k {
            return Scalar::zero();
        }
        let s = (-v).max(0).max(-k);
        let shifted = x * self.pow(s);
        let e = (k + s) as u32;
        let r = self.reduce(&shifted, e).expect("shifted value is integral");
        int(r as i64) / self.pow(s)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}
