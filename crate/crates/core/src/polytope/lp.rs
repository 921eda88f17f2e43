//! Phase-one simplex over an ordered field, with Bland's rule.

use std::cmp::Ordering;

use crate::numbers::AlgebraicNumber;

/// Arithmetic needed by the simplex. `f64` uses an absolute tolerance.
pub trait LpScalar: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn sign(&self) -> Ordering;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    /// Sign of a/b − c/d for positive b and d.
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        a.div(b).sub(&c.div(d)).sign()
    }

    /// The row and its right-hand side divided by the pivot entry.
    fn divide_row(row: &[Self], rhs: &Self, piv: &Self) -> (Vec<Self>, Self) {
        (row.iter().map(|x| if x.is_zero() { x.zero_like() } else { x.div(piv) }).collect(), rhs.div(piv))
    }
}

pub const FLOAT_EPS: f64 = 1e-10;

impl LpScalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_EPS {
            Ordering::Greater
        } else if *self < -FLOAT_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl LpScalar for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self * &o.inv()
    }
    fn sign(&self) -> Ordering {
        self.signum()
    }
    fn is_zero(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
    // inversions dominate exact pivots, so avoid them where possible
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Ordering {
        (a * d).compare(&(c * b))
    }
    fn divide_row(row: &[Self], rhs: &Self, piv: &Self) -> (Vec<Self>, Self) {
        let inv = piv.inv();
        (row.iter().map(|x| if x.is_zero() { x.clone() } else { x * &inv }).collect(), rhs * &inv)
    }
}

/// Result of phase one on `A x = b, x ≥ 0` (with `b ≥ 0`).
#[derive(Debug, Clone)]
pub struct PhaseOne<T> {
    pub feasible: bool,
    /// Values of the structural variables.
    pub x: Vec<T>,
    /// Basic variable of each row; indices ≥ n denote artificial variables.
    pub basis: Vec<usize>,
    /// Row multipliers π with π·A_j ≤ 0 for every column; π·b > 0 when infeasible.
    pub duals: Vec<T>,
}

/// Minimizes the sum of artificial variables. Artificial columns never
/// re-enter once they leave. Returns `None` when `max_pivots` is exceeded.
pub fn phase_one<T: LpScalar>(a: &[Vec<T>], b: &[T], one: &T, max_pivots: usize) -> Option<PhaseOne<T>> {
    let r = a.len();
    let n = a.first().map_or(0, |row| row.len());
    let zero = one.zero_like();
    let width = n + r;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(r);
    let mut rhs: Vec<T> = b.to_vec();
    for (i, row) in a.iter().enumerate() {
        let mut full = row.clone();
        full.extend((0..r).map(|k| if k == i { one.clone() } else { zero.clone() }));
        t.push(full);
    }
    // reduced costs d_j = c_j − Σ_i t_ij, artificial costs are 1
    let mut d: Vec<T> = (0..width)
        .map(|j| {
            if j >= n {
                zero.clone()
            } else {
                t.iter().fold(zero.clone(), |acc, row| acc.sub(&row[j]))
            }
        })
        .collect();
    let mut obj = rhs.iter().fold(zero.clone(), |acc, x| acc.sub(x));
    let mut basis: Vec<usize> = (n..n + r).collect();
    let mut pivots = 0;
    while let Some(e) = (0..n).find(|&j| d[j].sign() == Ordering::Less) {
        let mut leave: Option<usize> = None;
        for i in 0..r {
            if t[i][e].sign() != Ordering::Greater {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(li) => match T::cmp_ratio(&rhs[i], &t[i][e], &rhs[li], &t[li][e]) {
                    Ordering::Less => Some(i),
                    Ordering::Equal if basis[i] < basis[li] => Some(i),
                    _ => Some(li),
                },
            };
        }
        // phase one is bounded below, so an entering column always has a positive entry
        let p = leave?;
        pivots += 1;
        if pivots > max_pivots {
            return None;
        }
        let piv = t[p][e].clone();
        let (prow, prhs) = T::divide_row(&t[p], &rhs[p], &piv);
        for i in 0..r {
            if i == p || t[i][e].is_zero() {
                continue;
            }
            let f = t[i][e].clone();
            for j in 0..width {
                if !prow[j].is_zero() {
                    t[i][j] = t[i][j].sub(&f.mul(&prow[j]));
                }
            }
            rhs[i] = rhs[i].sub(&f.mul(&prhs));
        }
        if !d[e].is_zero() {
            let f = d[e].clone();
            for j in 0..width {
                if !prow[j].is_zero() {
                    d[j] = d[j].sub(&f.mul(&prow[j]));
                }
            }
            obj = obj.sub(&f.mul(&prhs));
        }
        t[p] = prow;
        rhs[p] = prhs;
        basis[p] = e;
    }
    let mut x = vec![zero.clone(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rhs[i].clone();
        }
    }
    let duals = (0..r).map(|i| one.sub(&d[n + i])).collect();
    Some(PhaseOne { feasible: obj.sign() != Ordering::Less, x, basis, duals })
}
