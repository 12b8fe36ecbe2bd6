//! Model gradient descent: a derivative-free optimizer that fits a local
//! quadratic surrogate by least squares and follows its gradient.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MgdHyper {
    pub learning_rate: f64,
    pub sample_radius: f64,
    pub sample_count: usize,
    pub rate_decay: f64,
    pub stability: f64,
    pub radius_decay: f64,
    pub tolerance: f64,
    pub max_evals: usize,
}

impl MgdHyper {
    /// Defaults for a `dim`-dimensional point (`dim = 2p` for p-layer QAOA),
    /// on coordinates of unit scale.
    pub fn defaults(dim: usize) -> Self {
        let sample_radius = 0.1;
        Self {
            learning_rate: 3.0 * sample_radius,
            sample_radius,
            sample_count: 2 * dim + 6,
            rate_decay: 0.6,
            stability: 3.0,
            radius_decay: 0.6,
            tolerance: 1e-6,
            max_evals: 2000,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.sample_radius > 0.0) {
            return Err(Error::Domain("sample radius must be positive".into()));
        }
        if self.sample_count < dim + 2 {
            return Err(Error::Domain(format!(
                "sample count {} below dim + 2 = {}",
                self.sample_count,
                dim + 2
            )));
        }
        if self.max_evals < self.sample_count + 1 {
            return Err(Error::Domain("max_evals must be at least sample_count + 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub iter: usize,
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MgdResult {
    /// Final iterate.
    pub x: Vec<f64>,
    /// Best evaluated point and its value.
    pub best: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<Evaluation>,
}

impl MgdResult {
    /// Iterates `x_m` in order, with their objective values.
    pub fn iterates(&self) -> impl Iterator<Item = &Evaluation> + '_ {
        let mut last = usize::MAX;
        self.trace.iter().filter(move |e| {
            let first = e.iter != last;
            last = e.iter;
            first
        })
    }

    /// Lowest objective value seen at iterates `x_0..x_m` after `m` outer iterations.
    pub fn best_iterate_within(&self, m: usize) -> f64 {
        self.iterates()
            .filter(|e| e.iter <= m)
            .map(|e| e.value)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn write_trace_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.trace {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn quadratic_features(x: &[f64], center: &[f64]) -> Vec<f64> {
    let d = x.len();
    let dx: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
    let mut f = Vec::with_capacity(1 + d + d * (d + 1) / 2);
    f.push(1.0);
    f.extend_from_slice(&dx);
    for i in 0..d {
        for j in i..d {
            f.push(dx[i] * dx[j]);
        }
    }
    f
}

/// Gradient at `center` of the least-squares quadratic through `points`.
/// Features are centred, so the gradient is the linear coefficient block.
pub fn fit_quadratic_gradient(points: &[(Vec<f64>, f64)], center: &[f64]) -> Result<Vec<f64>> {
    let d = center.len();
    let rows: Vec<Vec<f64>> = points.iter().map(|(x, _)| quadratic_features(x, center)).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let a = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let b = DVector::from_iterator(points.len(), points.iter().map(|(_, y)| *y));
    let svd = a.svd(true, true);
    let coef = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    Ok((1..=d).map(|i| coef[i]).collect())
}

fn sample_ball(rng: &mut ChaCha8Rng, center: &[f64], radius: f64) -> Vec<f64> {
    let d = center.len();
    let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    center.iter().zip(&dir).map(|(c, v)| c + r * v / len).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Runs model gradient descent from `x0`. The evaluation budget is checked
/// before each iteration, which costs `sample_count + 1` evaluations.
pub fn minimize<F>(mut objective: F, x0: &[f64], hyper: &MgdHyper, seed: u64) -> Result<MgdResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    hyper.validate(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut trace = Vec::new();
    let mut x = x0.to_vec();
    let mut m = 0usize;
    let mut converged = false;
    let mut evals = 0usize;
    let mut record = |iter: usize, p: Vec<f64>, v: f64, history: &mut Vec<(Vec<f64>, f64)>| {
        trace.push(Evaluation { iter, point: p.clone(), value: v });
        history.push((p, v));
    };
    while evals + hyper.sample_count + 1 <= hyper.max_evals {
        let fx = objective(&x);
        evals += 1;
        record(m, x.clone(), fx, &mut history);
        let radius = hyper.sample_radius / ((m + 1) as f64).powf(hyper.radius_decay);
        for _ in 0..hyper.sample_count {
            let p = sample_ball(&mut rng, &x, radius);
            let v = objective(&p);
            evals += 1;
            record(m, p, v, &mut history);
        }
        let local: Vec<(Vec<f64>, f64)> =
            history.iter().filter(|(p, _)| dist(p, &x) < radius).cloned().collect();
        let g = fit_quadratic_gradient(&local, &x)?;
        let rate = hyper.learning_rate / ((m + 1) as f64 + hyper.stability).powf(hyper.rate_decay);
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rate * gnorm < hyper.tolerance {
            converged = true;
            break;
        }
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= rate * gi;
        }
        m += 1;
    }
    let (best, best_value) = history
        .iter()
        .fold((x0.to_vec(), f64::INFINITY), |(bp, bv), (p, v)| if *v < bv { (p.clone(), *v) } else { (bp, bv) });
    Ok(MgdResult { x, best, best_value, iterations: m, converged, trace })
}

/// Exhaustive minimum over a regular grid with `steps` points per axis
/// (a single step evaluates the lower corner only).
pub fn grid_search<F>(mut objective: F, ranges: &[(f64, f64)], steps: usize) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let axes: Vec<Vec<f64>> = ranges.iter().map(|&r| crate::qsim::linspace(r, steps)).collect();
    let total: usize = axes.iter().map(Vec::len).product();
    let mut best = (Vec::new(), f64::INFINITY);
    for k in 0..total {
        let mut rem = k;
        let mut p = vec![0.0; axes.len()];
        for (i, axis) in axes.iter().enumerate().rev() {
            p[i] = axis[rem % axis.len()];
            rem /= axis.len();
        }
        let v = objective(&p);
        if v < best.1 {
            best = (p, v);
        }
    }
    best
}
