//! Ising encoding of the local refinement around a Babai point, with exact
//! energies and exhaustive spectra.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{BabaiResult, Direction, ExactMatrix, Rational};

/// Largest register size for exhaustive enumeration.
pub const MAX_ENUM_QUBITS: usize = 24;

/// Basis-state label; character `i` is qubit `i + 1`, which is the most
/// significant bit of the state index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    bits: Vec<bool>,
}

impl Bitstring {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_index(index: u64, n: usize) -> Self {
        Self {
            bits: (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Spin value `z = 1 - 2b` of qubit `i`.
    pub fn z(&self, i: usize) -> i32 {
        if self.bits[i] {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { bits })
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `constant + Σ h_i z_i + Σ_{i<j} J_ij z_i z_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsingModel {
    pub constant: Rational,
    pub h: Vec<Rational>,
    /// Upper-triangular couplings, `couplings[i][j - i - 1]` is `J_ij`.
    couplings: Vec<Vec<Rational>>,
    pub directions: Vec<Direction>,
}

impl IsingModel {
    pub fn new(
        constant: Rational,
        h: Vec<Rational>,
        couplings: Vec<Vec<Rational>>,
        directions: Vec<Direction>,
    ) -> Result<Self> {
        let n = h.len();
        if directions.len() != n {
            return Err(Error::Shape("directions and fields differ in length".into()));
        }
        if couplings.len() != n || couplings.iter().enumerate().any(|(i, r)| r.len() != n - i - 1) {
            return Err(Error::Shape("couplings must be upper triangular".into()));
        }
        Ok(Self { constant, h, couplings, directions })
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// `J_ij` for `i != j` (symmetric access).
    pub fn coupling(&self, i: usize, j: usize) -> &Rational {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        assert!(a != b, "no self coupling");
        &self.couplings[a][b - a - 1]
    }

    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.couplings
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(k, v)| (i, i + k + 1, v)))
    }

    /// Largest absolute linear or quadratic coefficient.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.h
            .iter()
            .chain(self.couplings().map(|(_, _, v)| v))
            .map(|v| v.to_f64().unwrap_or(0.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn energy(&self, bits: &Bitstring) -> Result<Rational> {
        let n = self.n();
        if bits.len() != n {
            return Err(Error::Shape(format!("bitstring has {} bits, model has {n}", bits.len())));
        }
        let mut e = self.constant.clone();
        for i in 0..n {
            let zi = BigInt::from(bits.z(i));
            e += &self.h[i] * &zi;
        }
        for (i, j, v) in self.couplings() {
            e += v * BigInt::from(bits.z(i) * bits.z(j));
        }
        Ok(e)
    }

    /// Integer form of the model over a common denominator, for fast enumeration.
    pub fn scaled(&self) -> Result<ScaledModel> {
        let den = self
            .h
            .iter()
            .chain(self.couplings().map(|(_, _, v)| v))
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let conv = |v: &Rational| -> Result<i128> {
            (v * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .filter(|x| x.unsigned_abs() < (1u128 << 100))
                .ok_or_else(|| Error::TooLarge {
                    what: "scaled Ising coefficient",
                    size: 128,
                    limit: 100,
                })
        };
        let n = self.n();
        let mut j = vec![0i128; n * n];
        for (a, b, v) in self.couplings() {
            let x = conv(v)?;
            j[a * n + b] = x;
            j[b * n + a] = x;
        }
        let constant = conv(&self.constant)?;
        let h = self.h.iter().map(conv).collect::<Result<_>>()?;
        Ok(ScaledModel { n, denominator: den, constant, h, j })
    }
}

/// `IsingModel` multiplied through by `denominator` so every coefficient is an integer.
#[derive(Clone, Debug)]
pub struct ScaledModel {
    pub n: usize,
    pub denominator: BigInt,
    pub constant: i128,
    pub h: Vec<i128>,
    /// Dense symmetric coupling matrix with zero diagonal.
    pub j: Vec<i128>,
}

impl ScaledModel {
    pub fn energy_index(&self, index: u64) -> i128 {
        let n = self.n;
        let z: Vec<i128> = (0..n).map(|i| 1 - 2 * ((index >> (n - 1 - i)) & 1) as i128).collect();
        let mut e = self.constant;
        for i in 0..n {
            e += self.h[i] * z[i];
            for k in i + 1..n {
                e += self.j[i * n + k] * z[i] * z[k];
            }
        }
        e
    }

    pub fn to_rational(&self, scaled: i128) -> Rational {
        Rational::new(BigInt::from(scaled), self.denominator.clone())
    }

    /// Visits every index in `[start, start + 2^m)` (with `start` a multiple
    /// of `2^m`) in Gray-code order, passing `(index, scaled energy)`.
    pub fn gray_walk<F: FnMut(u64, i128)>(&self, start: u64, m: usize, mut f: F) {
        let n = self.n;
        let mut z: Vec<i128> = (0..n).map(|i| 1 - 2 * ((start >> (n - 1 - i)) & 1) as i128).collect();
        let mut field: Vec<i128> = (0..n)
            .map(|i| self.h[i] + (0..n).map(|k| self.j[i * n + k] * z[k]).sum::<i128>())
            .collect();
        let mut e = self.energy_index(start);
        let mut index = start;
        f(index, e);
        for step in 1u64..(1u64 << m) {
            // Flip bit position `b` (0 = least significant), i.e. qubit `n - 1 - b`.
            let b = step.trailing_zeros() as usize;
            let q = n - 1 - b;
            e -= 2 * z[q] * field[q];
            let zq = z[q];
            for k in 0..n {
                field[k] -= 2 * self.j[k * n + q] * zq;
            }
            z[q] = -zq;
            index ^= 1 << b;
            f(index, e);
        }
    }
}

/// Expands `‖(b_op − t) + Σ x_i d_i‖²` with `x_i = s_i·b_i`, `b_i = (1 − z_i)/2`
/// and `s_i = ±1` the rounding direction of column `i`.
pub fn encode_hamiltonian(d: &ExactMatrix, babai: &BabaiResult, t: &[BigInt]) -> Result<IsingModel> {
    let n = d.cols();
    if babai.directions.len() != n || t.len() != d.rows() || babai.b_op.len() != d.rows() {
        return Err(Error::Shape("reduced basis, Babai result and target disagree".into()));
    }
    let cols = d
        .integer_columns()
        .ok_or_else(|| Error::Domain("Hamiltonian encoding requires an integer basis".into()))?;
    // Doubled vectors: A_i = 2 a_i, W = 2 w.
    let a: Vec<Vec<BigInt>> = cols
        .iter()
        .zip(&babai.directions)
        .map(|(c, dir)| if dir.sign() > 0 { c.clone() } else { c.iter().map(|x| -x).collect() })
        .collect();
    let mut w: Vec<BigInt> = babai.b_op.iter().zip(t).map(|(b, ti)| (b - ti) * 2).collect();
    for ai in &a {
        for (wk, x) in w.iter_mut().zip(ai) {
            *wk += x;
        }
    }
    let dot = crate::lattice::dot_int;
    let frac = |num: BigInt, den: i64| Rational::new(num, BigInt::from(den));
    let constant = frac(a.iter().fold(dot(&w, &w), |acc, ai| acc + dot(ai, ai)), 4);
    let h = a.iter().map(|ai| frac(-dot(&w, ai), 2)).collect();
    let couplings = (0..n)
        .map(|i| (i + 1..n).map(|j| frac(dot(&a[i], &a[j]), 2)).collect())
        .collect();
    IsingModel::new(constant, h, couplings, babai.directions.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    #[serde(serialize_with = "ser_rational")]
    pub energy: Rational,
    pub bits: Bitstring,
}

fn ser_rational<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_integer() {
        s.serialize_str(&v.numer().to_string())
    } else {
        s.serialize_str(&v.to_string())
    }
}

/// The `k` lowest levels in ascending energy, ties broken by state index.
pub fn spectrum(model: &IsingModel, k: usize) -> Result<Vec<Level>> {
    spectrum_with(Execution::default(), model, k)
}

pub fn spectrum_with(exec: Execution, model: &IsingModel, k: usize) -> Result<Vec<Level>> {
    let n = model.n();
    if n > MAX_ENUM_QUBITS {
        return Err(Error::TooLarge { what: "spectrum register", size: n, limit: MAX_ENUM_QUBITS });
    }
    let total = 1u64 << n;
    let k = (k as u64).min(total) as usize;
    if k == 0 {
        return Ok(Vec::new());
    }
    let scaled = model.scaled()?;
    let m = n.min(14);
    let blocks = (total >> m) as usize;
    let partial: Vec<Vec<(i128, u64)>> = exec.map(blocks, |blk| {
        let mut heap: BinaryHeap<(i128, u64)> = BinaryHeap::with_capacity(k + 1);
        scaled.gray_walk((blk as u64) << m, m, |idx, e| {
            if heap.len() < k {
                heap.push((e, idx));
            } else if let Some(&top) = heap.peek() {
                if (e, idx) < top {
                    heap.pop();
                    heap.push((e, idx));
                }
            }
        });
        heap.into_vec()
    });
    let mut merged: BinaryHeap<Reverse<(i128, u64)>> =
        partial.into_iter().flatten().map(Reverse).collect();
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let Some(Reverse((e, idx))) = merged.pop() else { break };
        out.push(Level { energy: scaled.to_rational(e), bits: Bitstring::from_index(idx, n) });
    }
    Ok(out)
}

/// Every energy as a double, indexed by state; exact for integral energies below 2^53.
pub fn diagonal(model: &IsingModel) -> Result<Vec<f64>> {
    diagonal_with(Execution::default(), model)
}

pub fn diagonal_with(exec: Execution, model: &IsingModel) -> Result<Vec<f64>> {
    let n = model.n();
    if n > MAX_ENUM_QUBITS {
        return Err(Error::TooLarge { what: "diagonal register", size: n, limit: MAX_ENUM_QUBITS });
    }
    let scaled = model.scaled()?;
    let den = scaled.denominator.to_f64().unwrap_or(f64::INFINITY);
    let m = n.min(12);
    let mut out = vec![0f64; 1usize << n];
    exec.for_each_chunk(&mut out, 1 << m, |blk, chunk| {
        let start = (blk as u64) << m;
        scaled.gray_walk(start, m, |idx, e| chunk[(idx - start) as usize] = e as f64 / den);
    });
    Ok(out)
}
