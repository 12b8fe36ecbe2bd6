//! Exact lattice algebra: Gram–Schmidt, LLL reduction and Babai's nearest-plane
//! algorithm. Bases are stored column-wise (each column is a basis vector).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Lovász parameter used throughout the pipeline.
pub fn default_delta() -> Rational {
    Rational::new(BigInt::from(99), BigInt::from(100))
}

/// Dense matrix of exact rationals stored as a list of columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    columns: Vec<Vec<Rational>>,
}

impl ExactMatrix {
    pub fn from_columns(rows: usize, columns: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(c) = columns.iter().position(|c| c.len() != rows) {
            return Err(Error::Shape(format!("column {c} does not have {rows} entries")));
        }
        if columns.len() > rows {
            return Err(Error::Shape(format!(
                "{} columns exceed {rows} rows",
                columns.len()
            )));
        }
        Ok(Self { rows, columns })
    }

    pub fn from_integer_columns(columns: &[Vec<BigInt>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        let cols = columns
            .iter()
            .map(|c| c.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        Self::from_columns(rows, cols)
    }

    /// Builds from row-major integer data, the usual layout for written matrices.
    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let cols = (0..n)
            .map(|j| rows.iter().map(|r| Rational::from_integer(r[j].into())).collect())
            .collect();
        Self::from_columns(m, cols)
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { rows: n, columns: cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[Rational] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<Rational>] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.columns[j][i]
    }

    pub fn integer_columns(&self) -> Option<Vec<Vec<BigInt>>> {
        self.columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect()
            })
            .collect()
    }

    pub fn integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        let cols = self.integer_columns()?;
        Some(
            (0..self.rows)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect(),
        )
    }

    /// Flip the sign of every column whose first nonzero entry is negative.
    pub fn sign_normalized(&self) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let neg = c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
                if neg {
                    c.iter().map(|x| -x).collect()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self { rows: self.rows, columns }
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Nearest integer, halves rounded toward +infinity.
pub fn round_half_up(x: &Rational) -> BigInt {
    (x + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSchmidt {
    /// Orthogonal vectors b̃_i, column-wise.
    pub ortho: Vec<Vec<Rational>>,
    /// `mu[i][j]` for `j < i`; `mu[i][i] = 1`, entries above the diagonal zero.
    pub mu: Vec<Vec<Rational>>,
    /// ⟨b̃_i, b̃_i⟩.
    pub norms_sq: Vec<Rational>,
}

pub fn gram_schmidt(b: &ExactMatrix) -> Result<GramSchmidt> {
    let n = b.cols();
    let mut ortho: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut norms_sq: Vec<Rational> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let bi = b.column(i);
        let mut v = bi.to_vec();
        for j in 0..i {
            let m = dot(bi, &ortho[j]) / &norms_sq[j];
            for (vk, ok) in v.iter_mut().zip(&ortho[j]) {
                *vk -= &m * ok;
            }
            mu[i][j] = m;
        }
        mu[i][i] = Rational::one();
        let nsq = dot(&v, &v);
        if nsq.is_zero() {
            return Err(Error::RankDeficient(i));
        }
        ortho.push(v);
        norms_sq.push(nsq);
    }
    Ok(GramSchmidt { ortho, mu, norms_sq })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LllResult {
    pub reduced: ExactMatrix,
    /// Unimodular `U` (column-wise) with `reduced = B · U`.
    pub transform: Vec<Vec<BigInt>>,
}

impl LllResult {
    pub fn reduced_columns(&self) -> Vec<Vec<BigInt>> {
        self.reduced
            .integer_columns()
            .expect("LLL output of an integer basis is integral")
    }
}

/// LLL reduction of an integer basis using integral Gram–Schmidt data
/// (`d_i` and `λ_{i,j}`), so every decision is exact.
///
/// Each new vector is fully size-reduced against all previous vectors
/// before the Lovász test, with ties rounded toward +∞.
pub fn lll_reduce(b: &ExactMatrix, delta: &Rational) -> Result<LllResult> {
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta > &Rational::one() {
        return Err(Error::Domain(format!("delta must lie in (1/4, 1], got {delta}")));
    }
    let mut basis = b
        .integer_columns()
        .ok_or_else(|| Error::Domain("lll_reduce requires an integer basis".into()))?;
    let n = basis.len();
    let rows = b.rows();
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| BigInt::from((i == j) as u8)).collect())
        .collect();
    if n == 0 {
        return Ok(LllResult { reduced: b.clone(), transform: h });
    }

    // d[0] = 1, d[i+1] = prod_{j<=i} |b*_j|^2 ; lambda[i][j] = d[j+1] * mu_{i,j}.
    let mut d = vec![BigInt::one(); n + 1];
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    for k in 0..n {
        for j in 0..=k {
            let mut u = dot_int(&basis[k], &basis[j]);
            for i in 0..j {
                u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
            }
            if j < k {
                lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::RankDeficient(k));
                }
                d[k + 1] = u;
            }
        }
    }

    let (dn, dd) = (delta.numer().clone(), delta.denom().clone());
    let mut k = 1usize;
    while k < n {
        for l in (0..k).rev() {
            reduce(k, l, &mut basis, &mut h, &mut lambda, &d);
        }
        // Lovász: dd * (d_{k+1} d_{k-1} + λ²) >= dn * d_k²
        let lam = &lambda[k][k - 1];
        let lhs = &dd * (&d[k + 1] * &d[k - 1] + lam * lam);
        let rhs = &dn * &d[k] * &d[k];
        if lhs >= rhs {
            k += 1;
        } else {
            swap(k, &mut basis, &mut h, &mut lambda, &mut d);
            k = (k - 1).max(1);
        }
    }

    let reduced = ExactMatrix::from_integer_columns(&basis)?;
    debug_assert_eq!(reduced.rows(), rows);
    Ok(LllResult { reduced, transform: h })
}

fn reduce(
    k: usize,
    l: usize,
    basis: &mut [Vec<BigInt>],
    h: &mut [Vec<BigInt>],
    lambda: &mut [Vec<BigInt>],
    d: &[BigInt],
) {
    let dl = &d[l + 1];
    // q = floor((2λ + d) / 2d) = round-half-up(λ / d)
    let num: BigInt = &lambda[k][l] * 2 + dl;
    let q = num.div_floor(&(dl * 2));
    if q.is_zero() {
        return;
    }
    let (bl, hl) = (basis[l].clone(), h[l].clone());
    for (x, y) in basis[k].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    for (x, y) in h[k].iter_mut().zip(&hl) {
        *x -= &q * y;
    }
    lambda[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &lambda[l][i];
        lambda[k][i] -= t;
    }
}

fn swap(
    k: usize,
    basis: &mut [Vec<BigInt>],
    h: &mut [Vec<BigInt>],
    lambda: &mut [Vec<BigInt>],
    d: &mut [BigInt],
) {
    let n = basis.len();
    basis.swap(k, k - 1);
    h.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let t = lambda[k][j].clone();
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], t);
    }
    let lam = lambda[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for i in k + 1..n {
        let t = lambda[i][k].clone();
        lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
        lambda[i][k - 1] = (&b * &t + &lam * &lambda[i][k]) / &d[k + 1];
    }
    d[k] = b;
}

/// Size-reduction and Lovász conditions, checked exactly.
pub fn is_lll_reduced(d: &ExactMatrix, delta: &Rational) -> bool {
    let Ok(gs) = gram_schmidt(d) else {
        return false;
    };
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n = d.cols();
    for i in 0..n {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (0..n.saturating_sub(1)).all(|i| {
        let m = &gs.mu[i + 1][i];
        delta * &gs.norms_sq[i] <= &gs.norms_sq[i + 1] + m * m * &gs.norms_sq[i]
    })
}

/// Babai rounding direction for one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Rounded down (`c ≤ μ`): the refinement may add one more copy of the column.
    Up,
    /// Rounded up (`c > μ`): the refinement may remove one copy.
    Down,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BabaiResult {
    /// Approximate closest lattice vector.
    pub b_op: Vec<BigInt>,
    /// `coeffs[j]` multiplies reduced column `j`.
    pub coeffs: Vec<BigInt>,
    /// Rounded values `μ_j`, indexed by column.
    pub mus: Vec<Rational>,
    pub directions: Vec<Direction>,
}

impl BabaiResult {
    /// ‖b_op − t‖².
    pub fn residual_sq(&self, t: &[BigInt]) -> BigInt {
        self.b_op
            .iter()
            .zip(t)
            .map(|(a, b)| {
                let diff = a - b;
                &diff * &diff
            })
            .sum()
    }

    /// Column indices in the order the algorithm visits them (last column first).
    pub fn step_order(&self) -> impl Iterator<Item = usize> {
        (0..self.coeffs.len()).rev()
    }
}

/// Integral Gram–Schmidt data of integer columns: `d[i]` is the Gram
/// determinant of the first `i` columns and `lambda[i][j] = d[j + 1]·μ_ij`.
pub fn integral_gram_schmidt(cols: &[Vec<BigInt>]) -> Result<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let n = cols.len();
    let mut d = vec![BigInt::one()];
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot_int(&cols[i], &cols[j]);
            for k in 0..j {
                u = (&d[k + 1] * u - &lambda[i][k] * &lambda[j][k]) / &d[k];
            }
            if j < i {
                lambda[i][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::RankDeficient(i));
                }
                d.push(u);
            }
        }
    }
    Ok((d, lambda))
}

/// Babai's nearest-plane algorithm: columns are processed from the last to
/// the first, recording every rounding step.
pub fn babai_nearest_plane(d: &ExactMatrix, t: &[BigInt]) -> Result<BabaiResult> {
    if t.len() != d.rows() {
        return Err(Error::Shape(format!(
            "target has {} entries, basis has {} rows",
            t.len(),
            d.rows()
        )));
    }
    let cols = d
        .integer_columns()
        .ok_or_else(|| Error::Domain("Babai requires an integer basis".into()))?;
    let n = d.cols();
    let (dd, lambda) = integral_gram_schmidt(&cols)?;
    let mut lt: Vec<BigInt> = Vec::with_capacity(n);
    for j in 0..n {
        let mut u = dot_int(t, &cols[j]);
        for k in 0..j {
            u = (&dd[k + 1] * u - &lt[k] * &lambda[j][k]) / &dd[k];
        }
        lt.push(u);
    }
    let mut b: Vec<BigInt> = t.to_vec();
    let mut coeffs = vec![BigInt::zero(); n];
    let mut mus = vec![Rational::zero(); n];
    let mut directions = vec![Direction::Up; n];
    for j in (0..n).rev() {
        let mu = Rational::new(lt[j].clone(), dd[j + 1].clone());
        let c = round_half_up(&mu);
        for (x, y) in b.iter_mut().zip(&cols[j]) {
            *x -= &c * y;
        }
        for i in 0..j {
            lt[i] -= &c * &lambda[j][i];
        }
        directions[j] = if Rational::from_integer(c.clone()) <= mu {
            Direction::Up
        } else {
            Direction::Down
        };
        coeffs[j] = c;
        mus[j] = mu;
    }
    let b_op = t
        .iter()
        .zip(&b)
        .map(|(ti, bi)| ti - bi)
        .collect();
    Ok(BabaiResult { b_op, coeffs, mus, directions })
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(columns: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = columns.len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = columns.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Matrix product `B · U` for column-stored integer matrices.
pub fn mul_columns(b: &[Vec<BigInt>], u: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = b.first().map_or(0, Vec::len);
    u.iter()
        .map(|ucol| {
            (0..rows)
                .map(|i| ucol.iter().zip(b).map(|(c, bc)| c * &bc[i]).sum())
                .collect()
        })
        .collect()
}
