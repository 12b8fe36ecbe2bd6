//! Brute-force CVP oracle over small coefficient alphabets and the
//! encoded-space versus Babai comparison on random instances.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::instance::{build_instance, default_diag, CvpInstance, Precision};
use crate::ising::spectrum_with;
use crate::lattice::{default_delta, determinant, BabaiResult, ExactMatrix};
use crate::numtheory::{is_prime, log2};
use crate::pipeline::{prepare, Prepared};
use crate::qsim::fmt_sig;
use crate::relations::{candidate_states, decode_state, Strategy};

pub const MAX_ORACLE_DIM: usize = 16;

/// Coefficient choices per reduced column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// `x_i ∈ {−1, 0, +1}`.
    Ternary,
    /// `x_i ∈ {0, s_i}` with `s_i` the Babai rounding direction.
    Rounding,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::TooLarge { what: "lattice entry", size: x.bits() as usize, limit: 127 })
}

/// Exact minimizer of `‖b_op + Σ x_i d_i − t‖²` over the alphabet; ties keep
/// the first point of the reflected Gray order.
pub fn brute_force_best(
    d: &ExactMatrix,
    babai: &BabaiResult,
    t: &[BigInt],
    alphabet: Alphabet,
) -> Result<(Vec<i32>, BigInt)> {
    let n = d.cols();
    if n > MAX_ORACLE_DIM {
        return Err(Error::TooLarge { what: "oracle dimension", size: n, limit: MAX_ORACLE_DIM });
    }
    let cols: Vec<Vec<i128>> = d
        .integer_columns()
        .ok_or_else(|| Error::Domain("oracle requires an integer basis".into()))?
        .iter()
        .map(|c| c.iter().map(to_i128).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let (lo, hi): (Vec<i32>, Vec<i32>) = (0..n)
        .map(|i| match alphabet {
            Alphabet::Ternary => (-1, 1),
            Alphabet::Rounding => {
                let s = babai.directions[i].sign();
                (s.min(0), s.max(0))
            }
        })
        .unzip();
    let mut x = lo.clone();
    let mut dir = vec![1i32; n];
    let mut v: Vec<i128> = babai.b_op.iter().zip(t).map(|(b, ti)| to_i128(&(b - ti))).collect::<Result<_>>()?;
    for (i, &xi) in x.iter().enumerate() {
        for (vk, ck) in v.iter_mut().zip(&cols[i]) {
            *vk += xi as i128 * ck;
        }
    }
    let norm = |v: &[i128]| -> Result<i128> {
        v.iter().try_fold(0i128, |acc, &a| a.checked_mul(a).and_then(|s| acc.checked_add(s))).ok_or(
            Error::TooLarge { what: "squared norm", size: 128, limit: 127 },
        )
    };
    let mut best = (x.clone(), norm(&v)?);
    loop {
        let Some(i) = (0..n).find(|&i| {
            let next = x[i] + dir[i];
            next >= lo[i] && next <= hi[i]
        }) else {
            break;
        };
        for dj in dir.iter_mut().take(i) {
            *dj = -*dj;
        }
        x[i] += dir[i];
        let step = dir[i] as i128;
        for (vk, ck) in v.iter_mut().zip(&cols[i]) {
            *vk += step * ck;
        }
        let e = norm(&v)?;
        if e < best.1 {
            best = (x.clone(), e);
        }
    }
    Ok((best.0, BigInt::from(best.1)))
}

/// `|det [B | t]|` of the square extended basis.
pub fn extended_determinant(instance: &CvpInstance) -> Result<BigInt> {
    let mut cols = instance.columns.clone();
    cols.push(instance.target.clone());
    let det = determinant(&cols)?;
    if det.is_zero() {
        return Err(Error::Domain("extended basis [B | t] is singular".into()));
    }
    Ok(det.abs())
}

/// `r = norm² / |det [B | t]|^{2/n}`.
pub fn relative_distance(instance: &CvpInstance, norm_sq: &BigInt) -> Result<f64> {
    if norm_sq.sign() == Sign::Minus {
        return Err(Error::Domain("squared norm must be non-negative".into()));
    }
    let det = extended_determinant(instance)?;
    if norm_sq.is_zero() {
        return Ok(0.0);
    }
    let n = instance.dim as f64;
    Ok((log2(norm_sq) - 2.0 / n * log2(&det)).exp2())
}

/// How the "quantum" sample is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refinement {
    /// Exact ground state of the encoded Hamiltonian.
    Ideal,
    /// Lowest energy among states sampled from MGD-optimized QAOA.
    Sampled { layers: usize, shots: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub dim: usize,
    pub precision: Precision,
    pub samples: usize,
    pub seed: u64,
    /// Bit length of each random modulus.
    pub bits: u64,
    pub refinement: Refinement,
    pub exec: Execution,
}

impl CompareConfig {
    pub fn new(dim: usize, precision: Precision, samples: usize, seed: u64) -> Self {
        Self {
            dim,
            precision,
            samples,
            seed,
            bits: default_bits(dim),
            refinement: Refinement::Ideal,
            exec: Execution::default(),
        }
    }
}

/// Smallest `m` with `round(m / log2 m) ≥ n`, the modulus size the
/// experiment dimension rule maps to `n`.
pub fn default_bits(n: usize) -> u64 {
    (8u64..).find(|&m| (m as f64 / (m as f64).log2()).round() as usize >= n).expect("unbounded search")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStats {
    pub samples: usize,
    pub r_babai: Vec<f64>,
    pub r_quantum: Vec<f64>,
    pub advantage_ratio: f64,
}

impl ComparisonStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample_id,r_babai,r_quantum\n");
        for (i, (b, q)) in self.r_babai.iter().zip(&self.r_quantum).enumerate() {
            let _ = writeln!(out, "{i},{},{}", fmt_sig(*b), fmt_sig(*q));
        }
        out
    }

    pub fn summary(&self, cfg: &CompareConfig) -> serde_json::Value {
        serde_json::json!({
            "n": cfg.dim,
            "c": cfg.precision.to_string(),
            "bits": cfg.bits,
            "seed": cfg.seed,
            "samples": self.samples,
            "advantage_ratio": self.advantage_ratio,
        })
    }
}

fn random_bits(rng: &mut ChaCha8Rng, bits: u64) -> BigInt {
    let words = bits.div_ceil(64) as usize;
    let mut x = BigInt::zero();
    for _ in 0..words {
        x = (x << 64) + BigInt::from(rng.random::<u64>());
    }
    let excess = words as u64 * 64 - bits;
    let mut x = x >> excess;
    x |= BigInt::from(1) << (bits - 1);
    x | BigInt::from(1)
}

/// A random prime with exactly `bits` bits.
pub fn random_prime(rng: &mut ChaCha8Rng, bits: u64) -> BigInt {
    loop {
        let mut p = random_bits(rng, bits);
        while p.bits() == bits {
            if is_prime(&p) {
                return p;
            }
            p += 2;
        }
    }
}

/// Product of two distinct random primes of `ceil(bits/2)` bits.
pub fn random_semiprime(rng: &mut ChaCha8Rng, bits: u64) -> Result<BigInt> {
    if bits < 6 {
        return Err(Error::Domain(format!("modulus needs at least 6 bits, got {bits}")));
    }
    let half = bits.div_ceil(2);
    let p = random_prime(rng, half);
    loop {
        let q = random_prime(rng, half);
        if q != p {
            return Ok(p * q);
        }
    }
}

fn sample_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Squared distance of the refined vector for one prepared instance.
pub fn refined_residual(prep: &Prepared, refinement: &Refinement, seed: u64) -> Result<BigInt> {
    match *refinement {
        Refinement::Ideal => {
            let ground = spectrum_with(Execution::Sequential, &prep.model, 1)?;
            Ok(decode_state(prep, &ground[0].bits)?.residual_sq)
        }
        Refinement::Sampled { layers, shots } => {
            let states = candidate_states(prep, &Strategy::QaoaSample { layers, shots }, seed)?;
            let residuals =
                states.iter().map(|b| decode_state(prep, b).map(|d| d.residual_sq)).collect::<Result<Vec<_>>>()?;
            residuals
                .into_iter()
                .min()
                .ok_or_else(|| Error::Domain("no sampled states".into()))
        }
    }
}

/// One sample: `(r_babai, r_quantum)`.
pub fn compare_sample(cfg: &CompareConfig, k: u64) -> Result<(f64, f64)> {
    let mut rng = sample_rng(cfg.seed, k);
    let modulus = random_semiprime(&mut rng, cfg.bits)?;
    let mut diag = default_diag(cfg.dim);
    diag.shuffle(&mut rng);
    let inst = build_instance(&modulus, cfg.dim, &cfg.precision, &diag)?;
    let prep = prepare(&inst, &default_delta())?;
    let babai = prep.babai.residual_sq(&inst.target);
    let refined = refined_residual(&prep, &cfg.refinement, rng.random())?;
    Ok((relative_distance(&inst, &babai)?, relative_distance(&inst, &refined)?))
}

pub fn compare(cfg: &CompareConfig) -> Result<ComparisonStats> {
    if cfg.samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let pairs = cfg
        .exec
        .map(cfg.samples, |k| compare_sample(cfg, k as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (r_babai, r_quantum): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let wins = r_babai.iter().zip(&r_quantum).filter(|(b, q)| q < b).count();
    Ok(ComparisonStats {
        samples: cfg.samples,
        advantage_ratio: wins as f64 / cfg.samples as f64,
        r_babai,
        r_quantum,
    })
}
