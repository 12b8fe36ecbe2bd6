//! GF(2) elimination over relation parity rows and congruence-of-squares
//! factor extraction.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{gcd, is_prime, mod_floor, mod_pow, perfect_power, PrimeBasis};
use crate::relations::{collect, CollectConfig, Relation, RelationStore};

/// Dense bit rows of fixed width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    width: usize,
    rows: Vec<Vec<u64>>,
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl Gf2Matrix {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn from_bools(width: usize, rows: &[Vec<bool>]) -> Result<Self> {
        let mut m = Self::new(width);
        for r in rows {
            m.push_bools(r)?;
        }
        Ok(m)
    }

    pub fn push_bools(&mut self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.width {
            return Err(Error::Shape(format!("row of width {} in a width-{} matrix", bits.len(), self.width)));
        }
        let mut row = vec![0u64; words(self.width)];
        for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            row[i / 64] |= 1 << (i % 64);
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row][col / 64] >> (col % 64) & 1 == 1
    }

    pub fn row_bools(&self, row: usize) -> Vec<bool> {
        (0..self.width).map(|c| self.get(row, c)).collect()
    }
}

/// Row selection `t` with `Σ t_j row_j = 0` over GF(2), as sorted row indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dependency(pub Vec<usize>);

impl Dependency {
    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    /// Symmetric difference of two selections.
    pub fn combine(&self, other: &Dependency) -> Dependency {
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        let mut out = Vec::new();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x == y => {
                    a.next();
                    b.next();
                }
                (Some(&&x), Some(&&y)) if x < y => {
                    out.push(x);
                    a.next();
                }
                (Some(_), Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Dependency(out)
    }
}

/// Bit 0 is the sign of `u − vN`; bit `1 + i` is the parity of
/// `e'_i − e_i` on the `i`-th prime of `large`.
pub fn relation_row(rel: &Relation, large: &PrimeBasis) -> Result<Vec<bool>> {
    let mut bits = vec![false; 1 + large.len()];
    bits[0] = rel.sign;
    for (p, e) in rel.e_diff.iter().chain(rel.e_u.iter()) {
        let i = large
            .index_of(p)
            .ok_or_else(|| Error::Shape(format!("prime {p} outside the large basis")))?;
        bits[1 + i] ^= e % 2 == 1;
    }
    Ok(bits)
}

pub fn relation_matrix(rels: &[Relation], large: &PrimeBasis) -> Result<Gf2Matrix> {
    let mut m = Gf2Matrix::new(1 + large.len());
    for r in rels {
        m.push_bools(&relation_row(r, large)?)?;
    }
    Ok(m)
}

/// Basis of the left kernel by Gaussian elimination on `[M | I]`.
pub fn nullspace(m: &Gf2Matrix) -> Vec<Dependency> {
    let n = m.len();
    let w = words(m.width);
    let tw = words(n);
    let mut rows: Vec<(Vec<u64>, Vec<u64>)> = (0..n)
        .map(|i| {
            let mut t = vec![0u64; tw];
            t[i / 64] |= 1 << (i % 64);
            (m.rows[i].clone(), t)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..m.width {
        let (wi, bi) = (col / 64, col % 64);
        let Some(p) = (pivot_row..n).find(|&r| rows[r].0[wi] >> bi & 1 == 1) else { continue };
        rows.swap(pivot_row, p);
        let (head, tail) = rows.split_at_mut(pivot_row + 1);
        let pivot = &head[pivot_row];
        for r in tail.iter_mut().filter(|r| r.0[wi] >> bi & 1 == 1) {
            for k in 0..w {
                r.0[k] ^= pivot.0[k];
            }
            for k in 0..tw {
                r.1[k] ^= pivot.1[k];
            }
        }
        pivot_row += 1;
    }
    rows[pivot_row..]
        .iter()
        .map(|(_, t)| Dependency((0..n).filter(|&i| t[i / 64] >> (i % 64) & 1 == 1).collect()))
        .collect()
}

/// Kernel basis vectors, then pairwise combinations, at most `limit` in total.
pub fn candidate_dependencies(basis: &[Dependency], limit: usize) -> Vec<Dependency> {
    let mut out: Vec<Dependency> = basis.iter().take(limit).cloned().collect();
    'pairs: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if out.len() >= limit {
                break 'pairs;
            }
            out.push(basis[i].combine(&basis[j]));
        }
    }
    out
}

/// Half-exponents `a_p` and the sign exponent of a dependency.
pub fn square_root_exponents(dep: &Dependency, rels: &[Relation]) -> Result<(BTreeMap<u64, BigInt>, u64)> {
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut signs = 0u64;
    for &j in dep.rows() {
        let r = rels
            .get(j)
            .ok_or_else(|| Error::Shape(format!("dependency row {j} outside {} relations", rels.len())))?;
        signs += u64::from(r.sign);
        for (p, e) in r.e_diff.iter() {
            *acc.entry(p).or_default() += e;
        }
        for (p, e) in r.e_u.iter() {
            *acc.entry(p).or_default() -= e;
        }
    }
    if signs % 2 == 1 || acc.values().any(|e| e.is_odd()) {
        return Err(Error::Domain("selection is not a GF(2) dependency".into()));
    }
    let halves = acc
        .into_iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(p, e)| (p, e / 2))
        .collect();
    Ok((halves, signs / 2))
}

/// `X mod N` with `X² ≡ Π_j ((u_j − v_j N) / u_j)^{t_j}`.
pub fn square_root(dep: &Dependency, rels: &[Relation], modulus: &BigInt) -> Result<BigInt> {
    let (halves, sign_half) = square_root_exponents(dep, rels)?;
    let mut x = if sign_half % 2 == 1 { modulus - BigInt::one() } else { BigInt::one() };
    for (p, a) in &halves {
        x = x * mod_pow(&BigInt::from(*p), a, modulus)? % modulus;
    }
    Ok(x)
}

fn ordered(a: BigInt, modulus: &BigInt) -> (BigInt, BigInt) {
    let b = modulus / &a;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn proper(g: &BigInt, modulus: &BigInt) -> bool {
    g > &BigInt::one() && g < modulus
}

/// `gcd(X ± 1, N)` for the dependency, or `None` when `X ≡ ±1`.
pub fn extract_factors(dep: &Dependency, rels: &[Relation], modulus: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    let x = match square_root(dep, rels, modulus) {
        Ok(x) => x,
        Err(Error::NotInvertible { factor, .. }) if proper(&factor, modulus) => {
            return Ok(Some(ordered(factor, modulus)));
        }
        Err(e) => return Err(e),
    };
    for y in [&x - 1, &x + 1] {
        let g = gcd(&y, modulus);
        if proper(&g, modulus) {
            return Ok(Some(ordered(g, modulus)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorConfig {
    pub collect: CollectConfig,
    /// Instances collected between elimination attempts.
    pub batch: u64,
    pub max_instances: u64,
    pub dependency_limit: usize,
}

impl FactorConfig {
    pub fn new(collect: CollectConfig) -> Self {
        Self { collect, batch: 64, max_instances: 100_000, dependency_limit: 256 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    #[serde(rename = "N")]
    pub modulus: String,
    pub p: String,
    pub q: String,
    pub relations_used: usize,
    pub dependencies_tried: usize,
    pub instances_tried: u64,
    pub wall_time_ms: u64,
}

impl FactorReport {
    fn new(modulus: &BigInt, (p, q): (BigInt, BigInt), rels: usize, deps: usize, inst: u64, t: Instant) -> Self {
        Self {
            modulus: modulus.to_string(),
            p: p.to_string(),
            q: q.to_string(),
            relations_used: rels,
            dependencies_tried: deps,
            instances_tried: inst,
            wall_time_ms: t.elapsed().as_millis() as u64,
        }
    }
}

/// Splits that need no lattice: even `N` and perfect powers.
pub fn trivial_split(modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    if modulus.is_even() {
        return Some(ordered(BigInt::from(2), modulus));
    }
    perfect_power(modulus).map(|(base, _)| ordered(base, modulus))
}

/// Collects relations in batches until some dependency splits `N`.
pub fn factor(modulus: &BigInt, cfg: &FactorConfig) -> Result<FactorReport> {
    factor_with_relations(modulus, cfg).map(|(report, _)| report)
}

/// [`factor`], also returning the relations collected on the way.
pub fn factor_with_relations(modulus: &BigInt, cfg: &FactorConfig) -> Result<(FactorReport, RelationStore)> {
    let start = Instant::now();
    if modulus < &BigInt::from(4) || is_prime(modulus) {
        return Err(Error::Domain(format!("{modulus} is not a composite >= 4")));
    }
    let bounds = cfg.collect.bounds()?;
    if let Some(split) = trivial_split(modulus) {
        return Ok((FactorReport::new(modulus, split, 0, 0, 0, start), RelationStore::new()));
    }
    if cfg.batch == 0 {
        return Err(Error::Domain("batch must be at least 1".into()));
    }
    let mut store = RelationStore::new();
    let mut tried = 0u64;
    let mut deps_tried = 0usize;
    let mut last_len = 0;
    while tried < cfg.max_instances {
        let batch = cfg.batch.min(cfg.max_instances - tried);
        let got = collect(modulus, &cfg.collect, tried, batch)?;
        tried += batch;
        store.extend(got.store.to_vec());
        if store.len() == last_len {
            continue;
        }
        last_len = store.len();
        let rels = store.to_vec();
        let basis = nullspace(&relation_matrix(&rels, &bounds.large)?);
        for dep in candidate_dependencies(&basis, cfg.dependency_limit) {
            deps_tried += 1;
            if let Some(split) = extract_factors(&dep, &rels, modulus)? {
                return Ok((FactorReport::new(modulus, split, rels.len(), deps_tried, tried, start), store));
            }
        }
    }
    let diag = serde_json::json!({
        "N": modulus.to_string(),
        "relations": store.len(),
        "dependencies_tried": deps_tried,
        "instances_tried": tried,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    });
    Err(Error::Budget(diag.to_string()))
}

/// `Π_j ((u_j − v_j N) / u_j)^{t_j} mod N`, for checking square roots.
pub fn dependency_product(dep: &Dependency, rels: &[Relation], modulus: &BigInt) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for &j in dep.rows() {
        let r = &rels[j];
        let inv = crate::numtheory::mod_inv(&r.u, modulus)?;
        acc = mod_floor(&(acc * r.difference(modulus) * inv), modulus);
    }
    Ok(acc)
}
