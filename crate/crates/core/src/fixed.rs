//! Fixed-point natural logarithm and exponential on big integers.
//!
//! The prime lattice needs `round(10^c * ln x)` for precisions up to c ~ 15,
//! where a double no longer resolves the rounding boundary. Values here carry
//! `FRAC_BITS` fractional bits, far more than any lattice entry needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const FRAC_BITS: u64 = 256;

fn one() -> BigInt {
    BigInt::one() << FRAC_BITS
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS
}

fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << FRAC_BITS) / b
}

// atanh(z) = z + z^3/3 + z^5/5 + ... for |z| <= 1/3.
fn atanh(z: &BigInt) -> BigInt {
    let z2 = mul(z, z);
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term / k;
        term = mul(&term, &z2);
        k += 2;
    }
    sum
}

fn ln2() -> BigInt {
    atanh(&(one() / 3)) * 2
}

/// `ln(x)` in fixed point for a positive integer `x`.
pub fn ln_int(x: &BigInt) -> BigInt {
    assert!(x.is_positive(), "ln of a non-positive integer");
    let k = x.bits() - 1;
    // m = x / 2^k in [1, 2)
    let m = (x << FRAC_BITS) >> k;
    let z = div(&(&m - one()), &(&m + one()));
    ln2() * BigInt::from(k) + atanh(&z) * 2
}

/// `exp(y)` in fixed point for `y >= 0`.
pub fn exp_fixed(y: &BigInt) -> BigInt {
    assert!(!y.is_negative(), "exp of a negative argument");
    let l2 = ln2();
    let q = y / &l2;
    let r = y - &q * &l2;
    let mut term = one();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term;
        term = mul(&term, &r) / k;
        k += 1;
    }
    let shift: u64 = q.try_into().expect("exponent out of range");
    sum << shift
}

/// `10^c` in fixed point; exact when `c` is a non-negative integer.
pub fn pow10(c: &BigRational) -> BigInt {
    assert!(!c.is_negative(), "negative precision");
    if c.is_integer() {
        let e: u32 = c.to_integer().try_into().expect("precision out of range");
        return BigInt::from(10u32).pow(e) << FRAC_BITS;
    }
    let y = (ln_int(&BigInt::from(10u32)) * c.numer()) / c.denom();
    exp_fixed(&y)
}

/// `round(10^c * ln x)` with halves rounded away from zero.
pub fn scaled_log_round(c: &BigRational, x: &BigInt) -> BigInt {
    let v = mul(&pow10(c), &ln_int(x));
    let half = BigInt::one() << (FRAC_BITS - 1);
    (v + half) >> FRAC_BITS
}

/// Fixed-point value as a double.
pub fn to_f64(v: &BigInt) -> f64 {
    let shifted: BigInt = v >> (FRAC_BITS - 64);
    crate::numtheory::to_f64(&shifted) / 2f64.powi(64)
}
