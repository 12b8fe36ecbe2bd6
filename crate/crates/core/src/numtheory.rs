//! Integer toolkit: prime bases, smoothness, and modular arithmetic on
//! arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The first `k` primes in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBasis {
    primes: Vec<u64>,
}

impl PrimeBasis {
    pub fn first(k: usize) -> Self {
        first_primes(k)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }
}

/// Exponent map `prime -> exponent` (zero exponents are never stored).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization {
    exponents: BTreeMap<u64, u32>,
}

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, u32)>>(pairs: I) -> Self {
        let mut f = Self::new();
        for (p, e) in pairs {
            f.add(p, e);
        }
        f
    }

    pub fn add(&mut self, p: u64, e: u32) {
        if e > 0 {
            *self.exponents.entry(p).or_insert(0) += e;
        }
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.exponents.get(&p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.exponents.iter().map(|(&p, &e)| (p, e))
    }

    pub fn product(&self) -> BigInt {
        self.exponents
            .iter()
            .fold(BigInt::one(), |acc, (&p, &e)| acc * BigInt::from(p).pow(e))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn first_primes(k: usize) -> PrimeBasis {
    let mut primes = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if is_prime_u64(candidate) {
            primes.push(candidate);
        }
        candidate += if candidate == 2 { 1 } else { 2 };
    }
    PrimeBasis { primes }
}

// First 13 primes: a deterministic witness set for every n < 3.3e24.
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// Miller–Rabin with the fixed witness set above. Deterministic below
/// 3.3e24; a strong probable-prime test beyond that.
pub fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2u32);
    if n < &two {
        return false;
    }
    for &p in WITNESSES.iter() {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in WITNESSES.iter() {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `x` over `basis`; `None` when a cofactor outside the basis remains.
pub fn smooth_factor(x: &BigInt, basis: &PrimeBasis) -> Result<Option<Factorization>> {
    if x.sign() != Sign::Plus {
        return Err(Error::Domain(format!("smooth_factor requires x >= 1, got {x}")));
    }
    let mut rest = x.clone();
    let mut f = Factorization::new();
    for p in basis.iter() {
        if rest.is_one() {
            break;
        }
        let bp = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        f.add(p, e);
    }
    Ok(rest.is_one().then_some(f))
}

/// Non-negative gcd.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

fn check_modulus(m: &BigInt) -> Result<()> {
    if m < &BigInt::from(2u32) {
        return Err(Error::Domain(format!("modulus must be >= 2, got {m}")));
    }
    Ok(())
}

/// `a mod m` in `[0, m)`.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// `b^e mod m` for `e >= 0`, result in `[0, m)`.
pub fn mod_pow(b: &BigInt, e: &BigInt, m: &BigInt) -> Result<BigInt> {
    check_modulus(m)?;
    if e.is_negative() {
        let inv = mod_inv(b, m)?;
        return Ok(inv.modpow(&-e, m));
    }
    Ok(b.mod_floor(m).modpow(e, m))
}

/// Inverse of `a` modulo `m`. Non-invertibility is reported with the gcd,
/// which is itself a divisor of `m`.
pub fn mod_inv(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    check_modulus(m)?;
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: a,
            modulus: m.clone(),
            factor: ext.gcd,
        });
    }
    Ok(ext.x.mod_floor(m))
}

/// Integer k-th root (floor) of a non-negative integer.
pub fn integer_root(n: &BigInt, k: u32) -> BigInt {
    n.nth_root(k)
}

/// Returns `(base, k)` with `base^k = n` and `k >= 2` maximal, if `n` is a perfect power.
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n < &BigInt::from(4u32) {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = integer_root(n, k);
        if r > BigInt::one() && r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Lossy conversion used only for display and float-side formulas.
pub fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `log2(x)` for a positive integer, accurate for values beyond f64 range.
pub fn log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return to_f64(x).log2();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    to_f64(&top).log2() + shift as f64
}
