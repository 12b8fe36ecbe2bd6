#![allow(dead_code)]

pub mod lists;

use latfactor::instance::{build_instance, CvpInstance, Precision};
use num_bigint::BigInt;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| big(x)).collect()
}

pub struct Case {
    pub name: &'static str,
    pub instance: CvpInstance,
    /// Reference reduced basis, row-major.
    pub reduced_rows: Vec<Vec<i64>>,
    pub b_op: Vec<i64>,
    pub residual: i64,
}

pub fn three_qubit() -> Case {
    Case {
        name: "3-qubit",
        instance: build_instance(&big(1961), 3, &"1.5".parse().unwrap(), &[1, 1, 2]).unwrap(),
        reduced_rows: vec![vec![1, -4, -3], vec![-2, 1, 2], vec![2, 2, 0], vec![3, -2, 4]],
        b_op: vec![0, 4, 4, 242],
        residual: 36,
    }
}

pub fn five_qubit() -> Case {
    Case {
        name: "5-qubit",
        instance: build_instance(&big(48567227), 5, &Precision::integer(4), &[2, 1, 3, 2, 1]).unwrap(),
        reduced_rows: vec![
            vec![6, -8, 2, -4, -4],
            vec![-4, -3, 11, -5, -3],
            vec![6, 6, 3, 0, -3],
            vec![4, -2, 0, 12, 4],
            vec![-2, 2, -6, -2, 1],
            vec![-3, 5, -3, 4, -17],
        ],
        b_op: vec![2, 4, 9, 8, 0, 176993],
        residual: 229,
    }
}

pub fn ten_qubit() -> Case {
    Case {
        name: "10-qubit",
        instance: build_instance(
            &big(261980999226229),
            10,
            &Precision::integer(4),
            &[3, 2, 3, 1, 1, 3, 1, 1, 2, 2],
        )
        .unwrap(),
        reduced_rows: vec![
            vec![0, 0, 3, 0, 0, 0, 3, 0, -3, -3],
            vec![0, 0, 2, 0, 4, -4, 0, 4, -2, 4],
            vec![-3, 0, 0, 0, 0, 0, -3, 0, 0, 0],
            vec![1, 2, 1, 4, -4, -2, -2, 0, -1, 0],
            vec![2, 0, 2, -2, 0, 0, 1, -1, 0, 4],
            // Last entry listed as 3, which is not a lattice vector; -3 is.
            vec![0, 0, -3, -3, 0, 0, 0, 0, -3, -3],
            vec![-3, 3, -1, 0, 1, 2, 1, 2, -2, -1],
            vec![0, -2, 0, 1, 2, -1, 1, -3, 3, -3],
            vec![0, -2, -2, 0, -2, 0, 0, 0, 2, 2],
            vec![2, -2, 0, -2, 0, 2, -2, 2, 0, 0],
            vec![0, -2, -2, 0, 1, 3, 1, -2, -2, -1],
        ],
        b_op: vec![3, 4, 0, 1, 2, 3, 2, 3, 2, 2, 331993],
        residual: 60,
    }
}

pub fn all_cases() -> Vec<Case> {
    vec![three_qubit(), five_qubit(), ten_qubit()]
}

/// Columns of a row-major integer matrix.
pub fn columns_of(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = rows[0].len();
    (0..n).map(|j| rows.iter().map(|r| big(r[j])).collect()).collect()
}

/// Step-order (last column first) Babai data: (mu to 4 d.p. as listed, c).
pub fn three_qubit_coding() -> Vec<(f64, i64)> {
    vec![(33.5812, 34), (-20.4974, -20), (21.6667, 22)]
}

pub fn five_qubit_coding() -> Vec<(f64, i64)> {
    vec![
        (-8731.5607, -8732),
        (3882.5019, 3883),
        (-1837.4760, -1837),
        (-354.467, -354),
        (-3092.4957, -3092),
    ]
}

/// The 10-qubit coding table has three decimals.
pub fn ten_qubit_coding() -> Vec<(f64, i64)> {
    vec![
        (21514.149, 21514),
        (-45688.541, -45689),
        (-29225.45, -29225),
        (-5953.325, -5953),
        (29891.446, 29891),
        (23868.721, 23869),
        (42395.337, 42395),
        (-18221.276, -18221),
        (-29823.805, -29824),
        (5952.889, 5953),
    ]
}

/// Quadruled 10-qubit Hamiltonian: (constant, h, upper-triangular J rows).
pub fn ten_qubit_hamiltonian_x4() -> (i64, Vec<i64>, Vec<Vec<i64>>) {
    (
        708,
        vec![-46, -16, -78, -72, -116, -12, -84, -36, -74, -24],
        vec![
            vec![22, 16, 8, -14, 8, 4, -8, -10, -22],
            vec![-14, 20, 14, -12, 2, -24, -28, 2],
            vec![-18, 10, 36, 12, 16, 6, -30],
            vec![28, -26, 10, 10, 16, -4],
            vec![10, 24, 20, 12, -8],
            vec![-8, 22, -6, -36],
            vec![-16, 16, 20],
            vec![34, -42],
            vec![18],
            vec![],
        ],
    )
}

pub fn prepared(case: &Case) -> latfactor::pipeline::Prepared {
    latfactor::pipeline::prepare(&case.instance, &latfactor::lattice::default_delta()).unwrap()
}

/// Evaluates a factorization string such as `"2^3 * 3^2 * 5^2"`.
pub fn product(text: &str) -> BigInt {
    text.split('*').fold(BigInt::from(1), |acc, term| {
        let term = term.trim();
        match term.split_once('^') {
            Some((p, e)) => acc * BigInt::from(p.trim().parse::<u64>().unwrap()).pow(e.trim().parse().unwrap()),
            None => acc * BigInt::from(term.parse::<u64>().unwrap()),
        }
    })
}
