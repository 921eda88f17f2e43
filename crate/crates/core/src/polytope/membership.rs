//! Exact membership in conv_≤(X) = { y ≥ 0 : y ≤ z for some z ∈ conv(X) }.
//!
//! A floating-point simplex proposes rational weights (inside, with slack), a
//! basis (inside, on the boundary) or a separating direction (outside); each
//! is then confirmed in exact arithmetic. When the confirmation fails the
//! exact simplex decides, generating columns from the ones the float LP
//! points at.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::lp::{phase_one, LpScalar};
use super::Point;
use crate::numbers::AlgebraicNumber;

const MAX_PIVOTS: usize = 100_000;
/// Relative slack asked of the float solution before rounding it.
const RAISE: f64 = 1e-7;
/// Denominator used when rounding float weights.
const DENOM: f64 = (1u64 << 40) as f64;

/// How membership queries were settled: single dominator, rounded weights,
/// exact basis re-solve, rounded separating direction, exact simplex.
static PATHS: [AtomicUsize; 5] = [const { AtomicUsize::new(0) }; 5];

pub fn path_counts() -> [usize; 5] {
    std::array::from_fn(|i| PATHS[i].load(Ordering::Relaxed))
}

fn count(path: usize) {
    PATHS[path].fetch_add(1, Ordering::Relaxed);
}

#[derive(Debug, Clone)]
pub enum Membership {
    /// Convex coefficients `(index, λ)` with Σλ = 1 and Σ λ_j X_j ≥ y.
    Inside(Vec<(usize, AlgebraicNumber)>),
    Outside,
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

/// Decides whether `y ∈ conv_≤(points)`.
pub fn member_conv_le(points: &[Point], y: &Point) -> Membership {
    let refs: Vec<&Point> = points.iter().collect();
    member_refs(&refs, y)
}

pub(crate) fn member_refs(points: &[&Point], y: &Point) -> Membership {
    if points.is_empty() {
        return Membership::Outside;
    }
    let one = y.coords[0].field().one();
    if let Some(j) = single_dominator(points, y) {
        count(0);
        return Membership::Inside(vec![(j, one)]);
    }
    let hint = match float_guided(points, y) {
        Ok(answer) => return answer,
        Err(hint) => hint,
    };
    count(4);
    column_generation(points, y, hint)
}

/// Checks a claimed witness exactly: λ ≥ 0, Σλ = 1, Σ λ_j X_j ≥ y.
pub fn check_witness(points: &[&Point], y: &Point, lambda: &[(usize, AlgebraicNumber)]) -> bool {
    let field = y.coords[0].field();
    let mut total = field.zero();
    let mut acc = vec![field.zero(); y.dim()];
    for (j, l) in lambda {
        if *j >= points.len() || l.is_negative() {
            return false;
        }
        if l.is_zero() {
            continue;
        }
        total = &total + l;
        for (a, x) in acc.iter_mut().zip(&points[*j].coords) {
            if !x.is_zero() {
                *a = &*a + &(l * x);
            }
        }
    }
    total.is_one() && acc.iter().zip(&y.coords).all(|(a, b)| !(a - b).is_negative())
}

fn single_dominator(points: &[&Point], y: &Point) -> Option<usize> {
    points.iter().position(|p| {
        p.approx.iter().zip(&y.approx).all(|(a, b)| *b <= a + 1e-9 * (1.0 + a.abs()))
            && p.coords.iter().zip(&y.coords).all(|(a, b)| !(a - b).is_negative())
    })
}

/// Settles membership from a float LP when its answer confirms exactly.
/// Otherwise returns the columns an exact search should try first.
fn float_guided(points: &[&Point], y: &Point) -> Result<Membership, Vec<usize>> {
    let n = points.len();
    let m = y.dim();
    let scale: Vec<f64> = (0..m)
        .map(|i| {
            let s = points.iter().map(|p| p.approx[i].abs()).fold(y.approx[i].abs(), f64::max);
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let mut a = vec![vec![0.0f64; n + m]; m + 1];
    let mut b = vec![0.0f64; m + 1];
    for i in 0..m {
        for (j, p) in points.iter().enumerate() {
            a[i][j] = p.approx[i] / scale[i];
        }
        a[i][n + i] = -1.0;
        b[i] = y.approx[i] / scale[i];
    }
    a[m][..n].fill(1.0);
    b[m] = 1.0;
    // with every positive coordinate of y raised slightly, a feasible λ has
    // slack everywhere and survives rounding to rationals
    let raised: Vec<f64> =
        (0..=m).map(|i| if i < m && b[i] > 0.0 { b[i] * (1.0 + RAISE) + RAISE } else { b[i] }).collect();
    if let Some(res) = phase_one(&a, &raised, &1.0, MAX_PIVOTS) {
        if res.feasible {
            if let Some(lambda) = rational_witness(points, y, &res.x[..n]) {
                count(1);
                return Ok(Membership::Inside(lambda));
            }
        }
    }
    let Some(res) = phase_one(&a, &b, &1.0, MAX_PIVOTS) else {
        return separate(points, y, &scale);
    };
    if res.feasible {
        match confirm_inside(points, y, &res.basis, n, m) {
            Some(l) => {
                count(2);
                Ok(Membership::Inside(l))
            }
            None => Err(res.basis.iter().copied().filter(|&j| j < n).collect()),
        }
    } else {
        let w: Vec<f64> = (0..m).map(|i| (res.duals[i] / scale[i]).max(0.0)).collect();
        if confirm_outside(points, y, &w) {
            count(3);
            return Ok(Membership::Outside);
        }
        Err(tight_columns(points, y, &w))
    }
}

/// Fallback when the tableau simplex breaks down: maximizes the margin t of a
/// direction w ≥ 0, Σw = 1, with w·(y − X_j) ≥ t for all j, using an LU-based
/// solver. A positive margin is confirmed exactly; otherwise the points tight
/// for w are handed to the exact search.
fn separate(points: &[&Point], y: &Point, scale: &[f64]) -> Result<Membership, Vec<usize>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let m = y.dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let w: Vec<_> = (0..m).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for p in points {
        let mut row: Vec<_> = (0..m).map(|i| (w[i], (y.approx[i] - p.approx[i]) / scale[i])).collect();
        row.push((t, -1.0));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let ones: Vec<_> = w.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(ones.as_slice(), ComparisonOp::Eq, 1.0);
    let Some(sol) = lp.solve().ok().and_then(|o| o.into_solution().ok()) else {
        return Err(Vec::new());
    };
    let dir: Vec<f64> = (0..m).map(|i| sol.var_value(w[i]).max(0.0) / scale[i]).collect();
    if sol.objective() > 0.0 && confirm_outside(points, y, &dir) {
        count(3);
        return Ok(Membership::Outside);
    }
    Err(tight_columns(points, y, &dir))
}

/// Points that are nearly tight for a direction w ≥ 0 that weakly separates y.
/// When w·y ≥ w·X_j for all j, any witness Σλ_j X_j ≥ y uses only points with
/// w·X_j = w·y, so the exact search may start from these.
fn tight_columns(points: &[&Point], y: &Point, w: &[f64]) -> Vec<usize> {
    let dot = |v: &[f64]| w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let wy = dot(&y.approx);
    let tol = 1e-7 * (1.0 + wy.abs());
    (0..points.len()).filter(|&j| dot(&points[j].approx) >= wy - tol).collect()
}

/// Rounds float weights to rationals summing to 1 and checks them exactly.
fn rational_witness(points: &[&Point], y: &Point, x: &[f64]) -> Option<Vec<(usize, AlgebraicNumber)>> {
    let field = y.coords[0].field();
    let units: Vec<(usize, BigInt)> = x
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite() && **v > 0.0)
        .map(|(j, v)| (j, BigInt::from((v * DENOM).round() as i64)))
        .filter(|(_, r)| !r.is_zero())
        .collect();
    let total: BigInt = units.iter().map(|(_, r)| r).sum();
    if total.is_zero() {
        return None;
    }
    let lambda: Vec<(usize, AlgebraicNumber)> = units
        .into_iter()
        .map(|(j, r)| (j, field.from_rational(&BigRational::new(r, total.clone()))))
        .collect();
    check_witness(points, y, &lambda).then_some(lambda)
}

/// Re-solves the float basis exactly. Rows whose basic variable is their own
/// slack or artificial drop out, leaving a square system in the basic λ.
fn confirm_inside(points: &[&Point], y: &Point, basis: &[usize], n: usize, m: usize) -> Option<Vec<(usize, AlgebraicNumber)>> {
    let field = y.coords[0].field().clone();
    let mut dropped = vec![false; m + 1];
    let mut cols = Vec::new();
    for &bv in basis {
        if bv < n {
            cols.push(bv);
        } else if bv < n + m {
            dropped[bv - n] = true;
        } else {
            dropped[bv - n - m] = true;
        }
    }
    let rows: Vec<usize> = (0..=m).filter(|&i| !dropped[i]).collect();
    if rows.len() != cols.len() {
        return None;
    }
    let entry = |i: usize, j: usize| if i == m { field.one() } else { points[j].coords[i].clone() };
    let mat: Vec<Vec<AlgebraicNumber>> = rows.iter().map(|&i| cols.iter().map(|&j| entry(i, j)).collect()).collect();
    let rhs: Vec<AlgebraicNumber> = rows.iter().map(|&i| if i == m { field.one() } else { y.coords[i].clone() }).collect();
    let sol = solve_exact(mat, rhs)?;
    let lambda: Vec<(usize, AlgebraicNumber)> =
        cols.into_iter().zip(sol).filter(|(_, l)| !l.is_zero()).collect();
    check_witness(points, y, &lambda).then_some(lambda)
}

/// Rounds the direction to integers and checks w·y > max_j w·X_j exactly.
fn confirm_outside(points: &[&Point], y: &Point, w: &[f64]) -> bool {
    let top = w.iter().cloned().fold(0.0, f64::max);
    if top <= 0.0 || !top.is_finite() {
        return false;
    }
    let wi: Vec<BigInt> = w.iter().map(|x| BigInt::from((x / top * (1u64 << 40) as f64).round() as i64)).collect();
    let wy = dot(&wi, &y.coords);
    points.iter().all(|p| (&wy - &dot(&wi, &p.coords)).is_positive())
}

fn dot(w: &[BigInt], x: &[AlgebraicNumber]) -> AlgebraicNumber {
    let field = x[0].field();
    let mut acc = field.zero();
    for (wi, xi) in w.iter().zip(x) {
        if !wi.is_zero() && !xi.is_zero() {
            acc = &acc + &xi.scale(&BigRational::from_integer(wi.clone()));
        }
    }
    acc
}

/// Gaussian elimination over the field; `None` if singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_exact(mut a: Vec<Vec<AlgebraicNumber>>, mut b: Vec<AlgebraicNumber>) -> Option<Vec<AlgebraicNumber>> {
    let n = b.len();
    for c in 0..n {
        // prefer rational pivots, whose inverses are cheap
        let candidates: Vec<usize> = (c..n).filter(|&r| !a[r][c].is_zero()).collect();
        let p = *candidates.iter().find(|&&r| a[r][c].as_rational().is_some()).or(candidates.first())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].inv();
        for j in c..n {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in c..n {
                if !a[c][j].is_zero() {
                    a[r][j] = &a[r][j] - &(&f * &a[c][j]);
                }
            }
            b[r] = &b[r] - &(&f * &b[c]);
        }
    }
    Some(b)
}

/// Most columns to add per round of column generation.
const BATCH: usize = 8;

/// Exact simplex over a growing set of columns. When the restricted problem
/// is infeasible its Farkas multipliers π are checked against every point:
/// if none has π·(X_j, 1) > 0, y is outside; otherwise the most violating
/// columns join and the problem is solved again.
fn column_generation(points: &[&Point], y: &Point, start: Vec<usize>) -> Membership {
    let mut cols = start;
    if cols.is_empty() {
        cols.push(0);
    }
    let mut active = vec![false; points.len()];
    for &j in &cols {
        active[j] = true;
    }
    loop {
        let sub: Vec<&Point> = cols.iter().map(|&j| points[j]).collect();
        let pi = match exact_simplex(&sub, y) {
            Ok(lambda) => return Membership::Inside(lambda.into_iter().map(|(k, l)| (cols[k], l)).collect()),
            Err(pi) => pi,
        };
        let m = y.dim();
        let approx: Vec<f64> = pi.iter().map(|v| v.to_f64()).collect();
        let mut violated: Vec<(f64, usize)> = (0..points.len())
            .filter(|&j| !active[j])
            .filter_map(|j| {
                let mut v = pi[m].clone();
                for (p, x) in pi[..m].iter().zip(&points[j].coords) {
                    if !p.is_zero() && !x.is_zero() {
                        v = &v + &(p * x);
                    }
                }
                v.is_positive().then(|| {
                    let score = approx[m] + approx[..m].iter().zip(&points[j].approx).map(|(a, b)| a * b).sum::<f64>();
                    (score, j)
                })
            })
            .collect();
        if violated.is_empty() {
            return Membership::Outside;
        }
        violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, j) in violated.iter().take(BATCH) {
            active[j] = true;
            cols.push(j);
        }
    }
}

/// Exact phase one on the given columns: convex weights, or the Farkas
/// multipliers (one per coordinate row, then the Σλ row) when infeasible.
fn exact_simplex(points: &[&Point], y: &Point) -> Result<Vec<(usize, AlgebraicNumber)>, Vec<AlgebraicNumber>> {
    let n = points.len();
    let m = y.dim();
    let field = y.coords[0].field().clone();
    let zero = field.zero();
    let one = field.one();
    let mut a = vec![vec![zero.clone(); n + m]; m + 1];
    for i in 0..m {
        for (j, p) in points.iter().enumerate() {
            a[i][j] = p.coords[i].clone();
        }
        a[i][n + i] = -&one;
    }
    a[m][..n].fill(one.clone());
    let mut b: Vec<AlgebraicNumber> = y.coords.clone();
    b.push(one.clone());
    let res = phase_one(&a, &b, &one, usize::MAX).expect("exact phase one terminates under Bland's rule");
    if !res.feasible {
        return Err(res.duals);
    }
    let lambda: Vec<(usize, AlgebraicNumber)> =
        res.x.into_iter().take(n).enumerate().filter(|(_, l)| !LpScalar::is_zero(l)).collect();
    debug_assert!(check_witness(points, y, &lambda));
    Ok(lambda)
}

/// Removes, in insertion order, every point lying in conv_≤ of the others.
/// Returns the indices of the retained points.
pub fn hull_le_indices(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    // a point outside conv_≤ of all the others stays outside for any subset
    let candidate: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let others: Vec<&Point> = points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
            member_refs(&others, &points[i]).is_inside()
        })
        .collect();
    let mut alive = vec![true; n];
    for i in 0..n {
        if !candidate[i] {
            continue;
        }
        let others: Vec<&Point> = (0..n).filter(|&j| j != i && alive[j]).map(|j| &points[j]).collect();
        if member_refs(&others, &points[i]).is_inside() {
            alive[i] = false;
        }
    }
    (0..n).filter(|&i| alive[i]).collect()
}

pub fn hull_le(points: &[Point]) -> Vec<Point> {
    hull_le_indices(points).into_iter().map(|i| points[i].clone()).collect()
}
