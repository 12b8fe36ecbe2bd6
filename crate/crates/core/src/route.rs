//! Swap-network schedules and depth/qubit estimates for complete-graph,
//! linear-chain and square-lattice devices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// All-to-all connectivity.
    Kn,
    /// Two-dimensional square lattice.
    Dsl,
    /// One-dimensional chain.
    Lnn,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Kn, Topology::Dsl, Topology::Lnn];
}

impl FromStr for Topology {
    type Err = Error;

    /// Accepts `kn`, `dsl`/`2dsl`, `lnn`, and `others` (mapped to `lnn`).
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kn" => Ok(Topology::Kn),
            "dsl" | "2dsl" => Ok(Topology::Dsl),
            "lnn" | "others" => Ok(Topology::Lnn),
            _ => Err(Error::Parse(format!("unknown topology {s:?} (kn, 2dsl, lnn, others)"))),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Kn => "kn",
            Topology::Dsl => "2dsl",
            Topology::Lnn => "lnn",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// Rounds of disjoint interaction pairs between logical qubits.
    Matching,
    /// Rounds of swaps between adjacent chain positions.
    AdjacentSwap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub n: usize,
    pub kind: ScheduleKind,
    pub rounds: Vec<Vec<(usize, usize)>>,
}

impl Schedule {
    pub fn pair_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    /// No index appears twice within any round.
    pub fn rounds_disjoint(&self) -> bool {
        self.rounds.iter().all(|r| {
            let mut seen = vec![false; self.n];
            r.iter().all(|&(a, b)| {
                let fresh = a < self.n && b < self.n && !seen[a] && !seen[b] && a != b;
                if fresh {
                    seen[a] = true;
                    seen[b] = true;
                }
                fresh
            })
        })
    }

    /// Logical pairs `(min, max)` that interact, in schedule order. For a swap
    /// network these are the qubits occupying each swapped pair of positions.
    pub fn interactions(&self) -> Vec<(usize, usize)> {
        let ordered = |a: usize, b: usize| (a.min(b), a.max(b));
        match self.kind {
            ScheduleKind::Matching => self.rounds.iter().flatten().map(|&(a, b)| ordered(a, b)).collect(),
            ScheduleKind::AdjacentSwap => {
                let mut at: Vec<usize> = (0..self.n).collect();
                let mut out = Vec::with_capacity(self.pair_count());
                for round in &self.rounds {
                    for &(i, j) in round {
                        out.push(ordered(at[i], at[j]));
                        at.swap(i, j);
                    }
                }
                out
            }
        }
    }

    /// Applies every swap to `order` (position `i` holds `order[i]`).
    pub fn apply<T: Clone>(&self, order: &[T]) -> Vec<T> {
        let mut v = order.to_vec();
        if self.kind == ScheduleKind::AdjacentSwap {
            for &(i, j) in self.rounds.iter().flatten() {
                v.swap(i, j);
            }
        }
        v
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("schedules need at least 2 qubits, got {n}")));
    }
    Ok(())
}

/// Round-robin perfect matchings of the complete graph (circle method): `n − 1`
/// rounds for even `n`, `n` rounds of `(n − 1)/2` pairs for odd `n`.
pub fn kn_schedule(n: usize) -> Result<Schedule> {
    check_size(n)?;
    let m = if n % 2 == 0 { n } else { n + 1 };
    let ring = m - 1;
    let rounds = (0..ring)
        .map(|r| {
            let mut pairs = Vec::with_capacity(m / 2);
            if r < n && ring < n {
                pairs.push((r.min(ring), r.max(ring)));
            }
            for k in 1..m / 2 {
                let a = (r + k) % ring;
                let b = (r + ring - k) % ring;
                pairs.push((a.min(b), a.max(b)));
            }
            pairs
        })
        .collect();
    Ok(Schedule { n, kind: ScheduleKind::Matching, rounds })
}

/// Parallel bubble sort: `n` rounds alternating even phases `(0,1), (2,3), ...`
/// and odd phases `(1,2), (3,4), ...`; reverses the chain.
pub fn lnn_schedule(n: usize) -> Result<Schedule> {
    check_size(n)?;
    let rounds = (0..n)
        .map(|r| {
            let flag = r % 2;
            (0..)
                .map(|j| (2 * j + flag, 2 * j + 1 + flag))
                .take_while(|&(_, b)| b < n)
                .collect()
        })
        .collect();
    Ok(Schedule { n, kind: ScheduleKind::AdjacentSwap, rounds })
}

/// Single-layer QAOA depth: `3n + 2` (Kn), `4n + 2` (LNN) and
/// `3n + round(√n) + 4` (2DSL), counting the Rz and Rx layers.
pub fn depth_estimate(topology: Topology, n: usize) -> Result<u64> {
    check_size(n)?;
    let n = n as u64;
    Ok(match topology {
        Topology::Kn => 3 * n + 2,
        Topology::Lnn => 4 * n + 2,
        Topology::Dsl => 3 * n + (n as f64).sqrt().round() as u64 + 4,
    })
}

/// Qubits for an `m`-bit modulus: `round(2m / log2 m)`.
pub fn qubits_for_bits(m: u64) -> u64 {
    let m = m as f64;
    (2.0 * m / m.log2()).round() as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub bits: u64,
    pub qubits: u64,
    pub kn: u64,
    pub dsl: u64,
    pub lnn: u64,
}

pub fn rsa_resources(bits: u64) -> Result<ResourceEstimate> {
    if bits < 8 {
        return Err(Error::Domain(format!("bit length must be at least 8, got {bits}")));
    }
    let qubits = qubits_for_bits(bits);
    let n = qubits as usize;
    Ok(ResourceEstimate {
        bits,
        qubits,
        kn: depth_estimate(Topology::Kn, n)?,
        dsl: depth_estimate(Topology::Dsl, n)?,
        lnn: depth_estimate(Topology::Lnn, n)?,
    })
}

pub const RSA_TABLE_BITS: [u64; 5] = [128, 256, 512, 1024, 2048];

/// The RSA resource table as CSV.
pub fn rsa_table_csv() -> String {
    let mut out = String::from("RSA number,Qubits,Kn-depth,2DSL-depth,LNN-depth\n");
    for bits in RSA_TABLE_BITS {
        let r = rsa_resources(bits).expect("table bit lengths are valid");
        out.push_str(&format!("RSA-{},{},{},{},{}\n", r.bits, r.qubits, r.kn, r.dsl, r.lnn));
    }
    out
}

/// Slack subtracted from the device size when inverting `2m / log2 m`.
pub const TOUCH_MARGIN: f64 = 0.275;

/// Largest bit length `m` with `2m / log2 m ≤ qubits − TOUCH_MARGIN`, and the
/// single-layer depth on the device topology.
pub fn touch_size(qubits: u64, topology: Topology) -> Result<(u64, u64)> {
    if qubits < 4 {
        return Err(Error::Domain(format!("device needs at least 4 qubits, got {qubits}")));
    }
    let budget = qubits as f64 - TOUCH_MARGIN;
    let fits = |m: u64| 2.0 * m as f64 / (m as f64).log2() <= budget;
    // 2m/log2 m is increasing for m ≥ 3.
    let (mut lo, mut hi) = (4u64, 8u64);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, depth_estimate(topology, qubits as usize)?))
}
