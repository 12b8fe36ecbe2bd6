//! Prime-lattice CVP instances: dimension selection, basis construction and
//! randomized diagonal weights.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fixed;
use crate::lattice::ExactMatrix;
use crate::numtheory::{self, PrimeBasis};

/// Exact precision exponent `c` of the `10^c` weight, written as a decimal
/// (`"1.5"`) or a fraction (`"3/2"`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(BigRational);

impl Precision {
    pub fn new(value: BigRational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::Domain(format!("precision must be positive, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn integer(c: u32) -> Self {
        Self(BigRational::from_integer(c.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid precision {s:?}"));
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if int.is_empty() && frac.is_empty() {
                return Err(bad());
            }
            if !frac.chars().all(|c| c.is_ascii_digit()) || int.starts_with('+') {
                return Err(bad());
            }
            let digits = format!("{int}{frac}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            BigRational::new(n, BigInt::from(10u32).pow(frac.len() as u32))
        };
        Precision::new(value)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        // Finite decimal iff the reduced denominator is 2^a 5^b.
        let mut d = self.0.denom().clone();
        let (two, five) = (BigInt::from(2u32), BigInt::from(5u32));
        let mut places = 0u32;
        let (mut a, mut b) = (0u32, 0u32);
        while (&d % &two).is_zero() {
            d /= &two;
            a += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            b += 1;
        }
        if d.is_one() {
            places = a.max(b);
        }
        if places == 0 {
            return write!(f, "{}/{}", self.0.numer(), self.0.denom());
        }
        let scaled = (&self.0 * BigRational::from_integer(BigInt::from(10u32).pow(places))).to_integer();
        let s = scaled.abs().to_string();
        let s = format!("{:0>width$}", s, width = places as usize + 1);
        let (i, fr) = s.split_at(s.len() - places as usize);
        let sign = if scaled.is_negative() { "-" } else { "" };
        write!(f, "{sign}{i}.{fr}")
    }
}

impl Serialize for Precision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Precision {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Repr::deserialize(d)? {
            Repr::Text(s) => s,
            Repr::Number(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Dimension selection rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    /// `round(x / log2 x)` with `x = log2 N`.
    Experiment,
    /// `round(2c · x / log2 x)` with `x = log2 N`.
    Sublinear(f64),
    /// `round(2m / log2 m)` with `m` the bit length of `N`.
    Resource,
}

pub fn select_dimension(n_value: &BigInt, scheme: Scheme) -> Result<usize> {
    if n_value < &BigInt::from(4u32) {
        return Err(Error::Domain(format!("N must be at least 4, got {n_value}")));
    }
    let dim = match scheme {
        Scheme::Experiment => {
            let x = numtheory::log2(n_value);
            x / x.log2()
        }
        Scheme::Sublinear(c) => {
            if !(c > 0.0) {
                return Err(Error::Domain(format!("precision must be positive, got {c}")));
            }
            let x = numtheory::log2(n_value);
            2.0 * c * x / x.log2()
        }
        Scheme::Resource => resource_dimension(n_value.bits()),
    };
    Ok((dim.round() as usize).max(1))
}

/// `2m / log2 m` before rounding.
pub fn resource_dimension(bits: u64) -> f64 {
    let m = bits as f64;
    2.0 * m / m.log2()
}

/// The prime lattice `B` (column `i` carries `diag[i]` and the scaled log of
/// the `i`-th prime) and target `t` for a modulus `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvpInstance {
    pub modulus: BigInt,
    pub dim: usize,
    pub precision: Precision,
    pub diag: Vec<u64>,
    pub basis: PrimeBasis,
    /// Columns of `B`, each of length `dim + 1`.
    pub columns: Vec<Vec<BigInt>>,
    pub target: Vec<BigInt>,
}

impl CvpInstance {
    pub fn matrix(&self) -> ExactMatrix {
        ExactMatrix::from_integer_columns(&self.columns).expect("instance columns are well formed")
    }

    /// Last row of `B`.
    pub fn log_row(&self) -> Vec<BigInt> {
        self.columns.iter().map(|c| c[self.dim].clone()).collect()
    }

    pub fn log_target(&self) -> &BigInt {
        &self.target[self.dim]
    }

    /// Row-major entries of `B`.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..=self.dim)
            .map(|i| self.columns.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// On-disk instance layout: `B` row-major, big integers as decimal strings.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    #[serde(rename = "N")]
    modulus: String,
    n: usize,
    c: Precision,
    diag: Vec<u64>,
    primes: Vec<u64>,
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
    t: Vec<String>,
}

impl From<&CvpInstance> for InstanceFile {
    fn from(inst: &CvpInstance) -> Self {
        let strs = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>();
        Self {
            modulus: inst.modulus.to_string(),
            n: inst.dim,
            c: inst.precision.clone(),
            diag: inst.diag.clone(),
            primes: inst.basis.primes().to_vec(),
            b: inst.rows().iter().map(|r| strs(r)).collect(),
            t: strs(&inst.target),
        }
    }
}

impl TryFrom<InstanceFile> for CvpInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let parse = |s: &str| -> Result<BigInt> {
            s.parse().map_err(|_| Error::Parse(format!("invalid integer {s:?}")))
        };
        let modulus = parse(&f.modulus)?;
        let built = build_instance(&modulus, f.n, &f.c, &f.diag)?;
        let rows: Vec<Vec<BigInt>> = f
            .b
            .iter()
            .map(|r| r.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let t: Vec<BigInt> = f.t.iter().map(|s| parse(s)).collect::<Result<_>>()?;
        if rows != built.rows() || t != built.target || f.primes != built.basis.primes() {
            return Err(Error::Corrupt(
                "instance file entries disagree with the construction from (N, n, c, diag)".into(),
            ));
        }
        Ok(built)
    }
}

pub fn build_instance(
    modulus: &BigInt,
    dim: usize,
    precision: &Precision,
    diag: &[u64],
) -> Result<CvpInstance> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if diag.len() != dim {
        return Err(Error::Shape(format!("diag has {} entries, expected {dim}", diag.len())));
    }
    if diag.contains(&0) {
        return Err(Error::Domain("diagonal entries must be positive".into()));
    }
    if modulus < &BigInt::from(2u32) {
        return Err(Error::Domain(format!("N must be at least 2, got {modulus}")));
    }
    let basis = PrimeBasis::first(dim);
    let c = precision.value();
    let columns = basis
        .iter()
        .zip(diag)
        .enumerate()
        .map(|(i, (p, &w))| {
            let mut col = vec![BigInt::zero(); dim + 1];
            col[i] = BigInt::from(w);
            col[dim] = fixed::scaled_log_round(c, &BigInt::from(p));
            col
        })
        .collect();
    let mut target = vec![BigInt::zero(); dim + 1];
    target[dim] = fixed::scaled_log_round(c, modulus);
    Ok(CvpInstance {
        modulus: modulus.clone(),
        dim,
        precision: precision.clone(),
        diag: diag.to_vec(),
        basis,
        columns,
        target,
    })
}

/// The default weight multiset `{round(i/2) : i = 1..n}` (halves rounded up).
pub fn default_diag(n: usize) -> Vec<u64> {
    (1..=n as u64).map(|i| i.div_ceil(2)).collect()
}

/// A seeded permutation of [`default_diag`].
pub fn random_diag(n: usize, seed: u64) -> Vec<u64> {
    let mut d = default_diag(n);
    d.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    d
}
