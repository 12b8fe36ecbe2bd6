//! Turning low-energy states into smooth relations `u − vN` over a prime
//! basis, and collecting them across randomized instances.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::instance::{build_instance, default_diag, Precision};
use crate::ising::{spectrum_with, Bitstring};
use crate::lattice::Rational;
use crate::mgd::{minimize, MgdHyper};
use crate::numtheory::{smooth_factor, Factorization, PrimeBasis};
use crate::pipeline::{prepare, Prepared};
use crate::qsim::QaoaObjective;

/// A measured state mapped back to a lattice vector and prime exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedState {
    pub bits: Bitstring,
    /// Step `x_i ∈ {−1, 0, 1}` applied to reduced column `i`.
    pub steps: Vec<i32>,
    pub vector: Vec<BigInt>,
    /// `e_j = vector_j / diag_j`.
    pub exponents: Vec<BigInt>,
    pub residual_sq: BigInt,
}

pub fn decode_state(prep: &Prepared, bits: &Bitstring) -> Result<DecodedState> {
    let n = prep.n();
    if bits.len() != n {
        return Err(Error::Shape(format!("{}-bit state for a {n}-qubit instance", bits.len())));
    }
    let steps: Vec<i32> = (0..n)
        .map(|i| if bits.bit(i) { prep.babai.directions[i].sign() } else { 0 })
        .collect();
    let mut vector = prep.babai.b_op.clone();
    for (i, &x) in steps.iter().enumerate() {
        if x != 0 {
            let col = prep.reduced.column(i);
            for (v, d) in vector.iter_mut().zip(col) {
                let d = d.to_integer();
                if x > 0 {
                    *v += d;
                } else {
                    *v -= d;
                }
            }
        }
    }
    let exponents = vector[..n]
        .iter()
        .zip(&prep.instance.diag)
        .map(|(v, &w)| {
            let (q, r) = v.div_rem(&BigInt::from(w));
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::Corrupt(format!("coordinate {v} is not a multiple of weight {w}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let residual_sq = vector.iter().zip(&prep.instance.target).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(DecodedState { bits: bits.clone(), steps, vector, exponents, residual_sq })
}

/// Splits an exponent vector into `u = Π_{e>0} p^e` and `v = Π_{e<0} p^{−e}`.
pub fn exponents_to_uv(exponents: &[BigInt], basis: &PrimeBasis) -> Result<(BigInt, BigInt)> {
    if exponents.len() != basis.len() {
        return Err(Error::Shape(format!(
            "{} exponents for {} primes",
            exponents.len(),
            basis.len()
        )));
    }
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    for (e, p) in exponents.iter().zip(basis.iter()) {
        let k: u32 = e
            .abs()
            .try_into()
            .map_err(|_| Error::Domain(format!("exponent {e} out of range")))?;
        let pk = BigInt::from(p).pow(k);
        match e.sign() {
            Sign::Plus => u *= pk,
            Sign::Minus => v *= pk,
            Sign::NoSign => {}
        }
    }
    Ok((u, v))
}

/// A pair with `u` smooth over the small basis and `|u − vN|` smooth over the large one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    #[serde(with = "decimal")]
    pub u: BigInt,
    #[serde(with = "decimal")]
    pub v: BigInt,
    /// `true` when `u − vN < 0`.
    #[serde(with = "bit")]
    pub sign: bool,
    pub e_u: Factorization,
    pub e_v: Factorization,
    pub e_diff: Factorization,
}

impl Relation {
    /// `u − vN`.
    pub fn difference(&self, modulus: &BigInt) -> BigInt {
        &self.u - &self.v * modulus
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            k => Err(serde::de::Error::custom(format!("sign must be 0 or 1, got {k}"))),
        }
    }
}

/// Small basis `B1` (the lattice primes) and large basis `B2 ⊇ B1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub small: PrimeBasis,
    pub large: PrimeBasis,
}

impl Bounds {
    pub fn new(dim: usize, large_dim: usize) -> Result<Self> {
        if large_dim < dim {
            return Err(Error::Domain(format!("large basis ({large_dim}) smaller than lattice dimension {dim}")));
        }
        Ok(Self { small: PrimeBasis::first(dim), large: PrimeBasis::first(large_dim) })
    }

    pub fn for_dim(dim: usize) -> Self {
        Self::new(dim, default_large_dim(dim)).expect("default large basis covers the small one")
    }
}

/// `2n²` primes, except 15 for three dimensions.
pub fn default_large_dim(n: usize) -> usize {
    if n == 3 {
        15
    } else {
        (2 * n * n).max(n)
    }
}

/// Tests one pair; `None` unless both sides are smooth.
pub fn try_relation(u: &BigInt, v: &BigInt, modulus: &BigInt, bounds: &Bounds) -> Result<Option<Relation>> {
    if !u.is_positive() || !v.is_positive() {
        return Err(Error::Domain(format!("relation needs u, v >= 1, got ({u}, {v})")));
    }
    let diff = u - v * modulus;
    if diff.is_zero() {
        return Err(Error::Domain(format!("u = vN for ({u}, {v})")));
    }
    let Some(e_u) = smooth_factor(u, &bounds.small)? else { return Ok(None) };
    let Some(e_v) = smooth_factor(v, &bounds.small)? else { return Ok(None) };
    let Some(e_diff) = smooth_factor(&diff.abs(), &bounds.large)? else { return Ok(None) };
    Ok(Some(Relation { u: u.clone(), v: v.clone(), sign: diff.is_negative(), e_u, e_v, e_diff }))
}

/// Relations deduplicated by `(u, v)`, iterated in key order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationStore {
    map: BTreeMap<(BigInt, BigInt), Relation>,
}

impl RelationStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// `true` when the pair was new.
    pub fn insert(&mut self, r: Relation) -> bool {
        let key = (r.u.clone(), r.v.clone());
        if self.map.contains_key(&key) {
            return false;
        }
        self.map.insert(key, r);
        true
    }

    pub fn extend<I: IntoIterator<Item = Relation>>(&mut self, it: I) -> usize {
        it.into_iter().filter(|r| self.insert(r.clone())).count()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.map.values()
    }

    pub fn to_vec(&self) -> Vec<Relation> {
        self.map.values().cloned().collect()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in self.iter() {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads and re-verifies every line against `modulus` and `bounds`.
    pub fn read_jsonl<R: BufRead>(r: R, modulus: &BigInt, bounds: &Bounds) -> Result<Self> {
        let mut store = Self::new();
        for (no, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rel: Relation = serde_json::from_str(&line)?;
            let check = try_relation(&rel.u, &rel.v, modulus, bounds)?;
            if check.as_ref() != Some(&rel) {
                return Err(Error::Corrupt(format!("line {}: relation ({}, {}) does not verify", no + 1, rel.u, rel.v)));
            }
            store.insert(rel);
        }
        Ok(store)
    }
}

/// How candidate states are drawn from each instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// The `k` lowest levels of the exact spectrum.
    SpectrumTopK(usize),
    /// Optimize p-layer QAOA with model gradient descent, then sample.
    QaoaSample { layers: usize, shots: u64 },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::SpectrumTopK(10)
    }
}

/// How the weights of instances after the first are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagFamily {
    /// Random permutations of the configured weights.
    Permute,
    /// Independent uniform weights in `1..=w`.
    Uniform(u64),
    /// Independent weights `round(w^U)` with `U` uniform on `[0, 1]`.
    LogUniform(u64),
}

/// Instance family: instance 0 uses `precision` and `diag` as given; later
/// instances redraw the weights from `family` and, when `precision_jitter > 0`,
/// move `c` uniformly within `±precision_jitter` in steps of 1/100.
#[derive(Clone, Debug, PartialEq)]
pub struct CollectConfig {
    pub dim: usize,
    pub precision: Precision,
    pub diag: Vec<u64>,
    pub family: DiagFamily,
    pub precision_jitter: f64,
    pub large_dim: usize,
    pub strategy: Strategy,
    pub delta: Rational,
    pub seed: u64,
    pub exec: Execution,
}

impl CollectConfig {
    pub fn new(dim: usize, precision: Precision) -> Self {
        Self {
            dim,
            precision,
            diag: default_diag(dim),
            family: DiagFamily::Permute,
            precision_jitter: 0.0,
            large_dim: default_large_dim(dim),
            strategy: Strategy::default(),
            delta: crate::lattice::default_delta(),
            seed: 0,
            exec: Execution::default(),
        }
    }

    /// The widened family used for end-to-end factoring: weights uniform in
    /// `1..=1000`, `c` jittered by up to `min(c/2, 2)`, 32 levels per instance.
    pub fn widened(dim: usize, precision: Precision) -> Self {
        let jitter = (precision.to_f64() / 2.0).min(2.0);
        Self {
            family: DiagFamily::Uniform(1000),
            precision_jitter: jitter,
            strategy: Strategy::SpectrumTopK(32),
            ..Self::new(dim, precision)
        }
    }

    pub fn bounds(&self) -> Result<Bounds> {
        Bounds::new(self.dim, self.large_dim)
    }

    /// Parameters `(c, diag)` of instance `k`.
    pub fn instance_params(&self, k: u64) -> Result<(Precision, Vec<u64>)> {
        if k == 0 {
            return Ok((self.precision.clone(), self.diag.clone()));
        }
        let mut rng = instance_rng(self.seed, k);
        let diag = match self.family {
            DiagFamily::Permute => {
                let mut d = self.diag.clone();
                d.shuffle(&mut rng);
                d
            }
            DiagFamily::Uniform(w) => (0..self.dim).map(|_| rng.random_range(1..=w.max(1))).collect(),
            DiagFamily::LogUniform(w) => (0..self.dim)
                .map(|_| ((w.max(1) as f64).powf(rng.random::<f64>()).round() as u64).max(1))
                .collect(),
        };
        let mut c = self.precision.clone();
        if self.precision_jitter > 0.0 {
            let steps = (self.precision_jitter * 100.0).round() as i64;
            let off = rng.random_range(-steps..=steps);
            let value = self.precision.value() + BigRational::new(BigInt::from(off), BigInt::from(100));
            if value.is_positive() {
                c = Precision::new(value)?;
            }
        }
        Ok((c, diag))
    }
}

fn instance_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Candidate states drawn from one prepared instance, lowest first.
pub fn candidate_states(prep: &Prepared, strategy: &Strategy, seed: u64) -> Result<Vec<Bitstring>> {
    match *strategy {
        Strategy::SpectrumTopK(k) => {
            Ok(spectrum_with(Execution::Sequential, &prep.model, k)?.into_iter().map(|l| l.bits).collect())
        }
        Strategy::QaoaSample { layers, shots } => {
            let mut obj = QaoaObjective::new(&prep.model)?;
            obj.sim = obj.sim.sequential();
            let dim = 2 * layers;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let res = minimize(|x| obj.eval(x), &x0, &MgdHyper::defaults(dim), seed)?;
            let counts = obj.sim.state(&obj.params(&res.best)).sample(shots, seed)?;
            let mut ranked: Vec<(Bitstring, u64)> = counts.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.index().cmp(&b.0.index())));
            let zero = Bitstring::zeros(prep.n());
            let mut out: Vec<Bitstring> = ranked.into_iter().map(|(b, _)| b).collect();
            if !out.contains(&zero) {
                out.push(zero);
            }
            Ok(out)
        }
    }
}

/// Relations found among the candidate states of one instance.
pub fn instance_relations(prep: &Prepared, states: &[Bitstring], bounds: &Bounds) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for bits in states {
        let dec = decode_state(prep, bits)?;
        let (u, v) = exponents_to_uv(&dec.exponents, &prep.instance.basis)?;
        if u == &v * &prep.instance.modulus {
            continue;
        }
        if let Some(r) = try_relation(&u, &v, &prep.instance.modulus, bounds)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Result of a collection run over instances `first..first + count`.
#[derive(Clone, Debug)]
pub struct Collected {
    pub store: RelationStore,
    pub instances: u64,
    pub candidates: usize,
}

/// Collects over `count` instances starting at index `first`; instances are
/// processed in parallel and merged in index order.
pub fn collect(modulus: &BigInt, cfg: &CollectConfig, first: u64, count: u64) -> Result<Collected> {
    let bounds = cfg.bounds()?;
    let per = cfg.exec.map(count as usize, |j| -> Result<(Vec<Relation>, usize)> {
        let k = first + j as u64;
        let (c, diag) = cfg.instance_params(k)?;
        let inst = build_instance(modulus, cfg.dim, &c, &diag)?;
        let prep = prepare(&inst, &cfg.delta)?;
        let seed = instance_rng(cfg.seed ^ 0x5eed, k).random::<u64>();
        let states = candidate_states(&prep, &cfg.strategy, seed)?;
        Ok((instance_relations(&prep, &states, &bounds)?, states.len()))
    });
    let mut store = RelationStore::new();
    let mut candidates = 0;
    for r in per {
        let (rels, n) = r?;
        candidates += n;
        store.extend(rels);
    }
    Ok(Collected { store, instances: count, candidates })
}

/// Outcome of [`collect_until`]; `sufficient` is false when the instance
/// budget ran out before `target_count` relations were found.
#[derive(Clone, Debug)]
pub struct Harvest {
    pub store: RelationStore,
    pub instances: u64,
    pub sufficient: bool,
}

/// Collects in batches of `batch` instances until `target_count` distinct
/// relations are stored or `max_instances` is reached.
pub fn collect_until(
    modulus: &BigInt,
    cfg: &CollectConfig,
    target_count: usize,
    max_instances: u64,
    batch: u64,
) -> Result<Harvest> {
    let bounds = cfg.bounds()?;
    if target_count < bounds.large.len() + 2 {
        return Err(Error::Domain(format!(
            "target count {target_count} below B2 size + 2 = {}",
            bounds.large.len() + 2
        )));
    }
    let batch = batch.max(1);
    let mut store = RelationStore::new();
    let mut done = 0;
    while store.len() < target_count && done < max_instances {
        let count = batch.min(max_instances - done);
        store.extend(collect(modulus, cfg, done, count)?.store.to_vec());
        done += count;
    }
    let sufficient = store.len() >= target_count;
    Ok(Harvest { store, instances: done, sufficient })
}
