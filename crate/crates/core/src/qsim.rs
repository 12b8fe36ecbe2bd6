//! Dense statevector simulation of p-layer QAOA for a diagonal cost
//! Hamiltonian with a transverse-field mixer.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ising::{self, Bitstring, IsingModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::Shape(format!(
                "{} gammas but {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        Ok(Self { gammas, betas })
    }

    pub fn layers(&self) -> usize {
        self.gammas.len()
    }

    /// Interleaved `(γ_1, β_1, γ_2, β_2, ...)`.
    pub fn to_point(&self) -> Vec<f64> {
        self.gammas.iter().zip(&self.betas).flat_map(|(&g, &b)| [g, b]).collect()
    }

    pub fn from_point(point: &[f64]) -> Result<Self> {
        if point.len() % 2 != 0 {
            return Err(Error::Shape("parameter point must have even length".into()));
        }
        let gammas = point.iter().step_by(2).copied().collect();
        let betas = point.iter().skip(1).step_by(2).copied().collect();
        Ok(Self { gammas, betas })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn uniform(n: usize) -> Self {
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Self { n, amps: vec![a; 1 << n] }
    }

    pub fn basis(n: usize, index: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn probability(&self, bits: &Bitstring) -> f64 {
        self.amps[bits.index() as usize].norm_sqr()
    }

    /// Multiplies amplitude `k` by `exp(−iγ E_k)`.
    pub fn apply_phase(&mut self, diag: &[f64], gamma: f64, exec: Execution) {
        let chunk = 1 << 12;
        exec.for_each_chunk(&mut self.amps, chunk, |c, amps| {
            let base = c * chunk;
            for (k, a) in amps.iter_mut().enumerate() {
                *a *= Complex64::from_polar(1.0, -gamma * diag[base + k]);
            }
        });
    }

    /// Applies `exp(−iβσx)` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64, exec: Execution) {
        let (c, s) = (beta.cos(), beta.sin());
        let ms = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            let block = (stride * 2).max(1 << 12.min(self.n));
            exec.for_each_chunk(&mut self.amps, block, |_, amps| {
                for pair in amps.chunks_mut(stride * 2) {
                    let (lo, hi) = pair.split_at_mut(stride);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = x * c + y * ms;
                        *b = x * ms + y * c;
                    }
                }
            });
        }
    }

    /// Seeded multinomial draw of `shots` measurements in the computational basis.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<Bitstring, u64>> {
        if shots == 0 {
            return Err(Error::Domain("shots must be at least 1".into()));
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| Error::Domain(format!("cannot sample state: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(dist.sample(&mut rng) as u64).or_insert(0) += 1;
        }
        Ok(counts
            .into_iter()
            .map(|(k, v)| (Bitstring::from_index(k, self.n), v))
            .collect())
    }
}

/// Simulator bound to one cost diagonal.
#[derive(Clone, Debug)]
pub struct QaoaSimulator {
    n: usize,
    diag: Vec<f64>,
    exec: Execution,
}

impl QaoaSimulator {
    pub fn new(model: &IsingModel) -> Result<Self> {
        Self::with_execution(model, Execution::default())
    }

    pub fn with_execution(model: &IsingModel, exec: Execution) -> Result<Self> {
        Ok(Self { n: model.n(), diag: ising::diagonal_with(exec, model)?, exec })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.diag
    }

    pub fn state(&self, params: &QaoaParams) -> StateVector {
        let mut psi = StateVector::uniform(self.n);
        for (&g, &b) in params.gammas.iter().zip(&params.betas) {
            psi.apply_phase(&self.diag, g, self.exec);
            psi.apply_mixer(b, self.exec);
        }
        psi
    }

    pub fn energy_of(&self, state: &StateVector) -> f64 {
        state.amps.iter().zip(&self.diag).map(|(a, e)| a.norm_sqr() * e).sum()
    }

    pub fn expectation(&self, params: &QaoaParams) -> f64 {
        self.energy_of(&self.state(params))
    }

    /// Same simulator evaluated without inner parallelism (for use inside parallel loops).
    pub fn sequential(&self) -> QaoaSimulator {
        Self { n: self.n, diag: self.diag.clone(), exec: Execution::Sequential }
    }
}

/// Diagonal of the cost Hamiltonian, one entry per basis state.
pub fn diagonal_energies(model: &IsingModel) -> Result<Vec<f64>> {
    ising::diagonal(model)
}

pub fn qaoa_state(model: &IsingModel, params: &QaoaParams) -> Result<StateVector> {
    Ok(QaoaSimulator::new(model)?.state(params))
}

pub fn expectation(model: &IsingModel, params: &QaoaParams) -> Result<f64> {
    Ok(QaoaSimulator::new(model)?.expectation(params))
}

/// Standard deviation of the cost diagonal over all basis states,
/// `sqrt(Σ h_i² + Σ J_ij²)`.
pub fn energy_std(model: &IsingModel) -> f64 {
    let sq = |v: &crate::lattice::Rational| v.to_f64().unwrap_or(0.0).powi(2);
    (model.h.iter().map(sq).sum::<f64>() + model.couplings().map(|(_, _, v)| sq(v)).sum::<f64>()).sqrt()
}

/// Default γ window `[0, π / (2σ)]` with `σ` the energy standard deviation.
pub fn default_gamma_range(model: &IsingModel) -> (f64, f64) {
    let s = energy_std(model);
    let top = if s > 0.0 { PI / (2.0 * s) } else { PI };
    (0.0, top)
}

/// The half mixer period `[π/2, π]`, which contains the descent basin for
/// the `exp(−iγH)`, `exp(−iβΣσx)` sign convention.
pub fn default_beta_range() -> (f64, f64) {
    (FRAC_PI_2, PI)
}

/// p-layer QAOA expectation on the unit cube: coordinate `2l` maps to `γ_l`
/// over `gamma_range` and `2l + 1` to `β_l` over `beta_range`; values are
/// divided by `scale`.
#[derive(Clone, Debug)]
pub struct QaoaObjective {
    pub sim: QaoaSimulator,
    pub gamma_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub scale: f64,
}

impl QaoaObjective {
    pub fn new(model: &IsingModel) -> Result<Self> {
        let s = energy_std(model);
        Ok(Self {
            sim: QaoaSimulator::new(model)?,
            gamma_range: default_gamma_range(model),
            beta_range: default_beta_range(),
            scale: if s > 0.0 { s } else { 1.0 },
        })
    }

    pub fn params(&self, unit: &[f64]) -> QaoaParams {
        let lerp = |r: (f64, f64), u: f64| r.0 + u * (r.1 - r.0);
        QaoaParams {
            gammas: unit.iter().step_by(2).map(|&u| lerp(self.gamma_range, u)).collect(),
            betas: unit.iter().skip(1).step_by(2).map(|&u| lerp(self.beta_range, u)).collect(),
        }
    }

    /// Expectation in energy units.
    pub fn energy(&self, unit: &[f64]) -> f64 {
        self.sim.expectation(&self.params(unit))
    }

    pub fn eval(&self, unit: &[f64]) -> f64 {
        self.energy(unit) / self.scale
    }
}

/// Evenly spaced points including both ends; a single step yields the lower end.
pub fn linspace(range: (f64, f64), steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![range.0];
    }
    (0..steps)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// p = 1 expectation over a `(γ, β)` grid, γ-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Landscape {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub energies: Vec<f64>,
}

impl Landscape {
    pub fn get(&self, gi: usize, bi: usize) -> f64 {
        self.energies[gi * self.betas.len() + bi]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)))
    }

    /// `(E − E_min)/(E_max − E_min)`, all zeros on a grid flat to within rounding.
    pub fn normalized(&self) -> Vec<f64> {
        let (lo, hi) = self.min_max();
        if hi - lo <= 1e-12 * hi.abs().max(1.0) {
            return vec![0.0; self.energies.len()];
        }
        self.energies.iter().map(|e| (e - lo) / (hi - lo)).collect()
    }

    /// `(γ, β, E)` at the grid minimum (first occurrence).
    pub fn argmin(&self) -> (f64, f64, f64) {
        let (idx, e) = self
            .energies
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, be), (i, &e)| if e < be { (i, e) } else { (bi, be) });
        let nb = self.betas.len();
        (self.gammas[idx / nb], self.betas[idx % nb], e)
    }

    pub fn to_csv(&self) -> String {
        let norm = self.normalized();
        let mut out = String::from("gamma,beta,E,Estar\n");
        for (gi, &g) in self.gammas.iter().enumerate() {
            for (bi, &b) in self.betas.iter().enumerate() {
                let k = gi * self.betas.len() + bi;
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_sig(g),
                    fmt_sig(b),
                    fmt_sig(self.energies[k]),
                    fmt_sig(norm[k])
                );
            }
        }
        out
    }
}

pub fn landscape(
    model: &IsingModel,
    gamma_range: (f64, f64),
    beta_range: (f64, f64),
    steps: usize,
) -> Result<Landscape> {
    landscape_with(Execution::default(), model, gamma_range, beta_range, steps)
}

pub fn landscape_with(
    exec: Execution,
    model: &IsingModel,
    gamma_range: (f64, f64),
    beta_range: (f64, f64),
    steps: usize,
) -> Result<Landscape> {
    if steps < 2 {
        return Err(Error::Domain("landscape needs at least 2 steps per axis".into()));
    }
    for (name, r) in [("gamma", gamma_range), ("beta", beta_range)] {
        if !(r.0.is_finite() && r.1.is_finite()) || r.0 >= r.1 {
            return Err(Error::Domain(format!("degenerate {name} range {r:?}")));
        }
    }
    let sim = QaoaSimulator::with_execution(model, exec)?.sequential();
    let gammas = linspace(gamma_range, steps);
    let betas = linspace(beta_range, steps);
    let energies = exec.map(steps * steps, |k| {
        let params = QaoaParams { gammas: vec![gammas[k / steps]], betas: vec![betas[k % steps]] };
        sim.expectation(&params)
    });
    Ok(Landscape { gammas, betas, energies })
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..P).contains(&exp) {
        trim(&format!("{:.*}", (P - 1 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mant), sign, exp.abs())
    }
}
