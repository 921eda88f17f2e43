//! Numeric lower bounds on the growth rate from spectral radii of products.
//!
//! For a product W of L operators each adding one vertex, ρ(W)^{1/L} is a
//! lower bound on the joint spectral radius. ρ(W) itself is bounded below by
//! the Collatz–Wielandt ratio min_i (W v)_i / v_i of a positive integer vector
//! v on the support of an approximate Perron vector, computed exactly.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::BoundSystem;
use crate::pathwidth::OperatorSystem;
use crate::tree::{TreeScript, TreeSystem};

#[derive(Debug, Clone)]
pub struct LowerBound {
    /// Not certified: exact ratio, then rounded down in floating point.
    pub value: f64,
    /// Operator word (pathwidth) or script (trees) achieving the value.
    pub witness: String,
}

pub fn lower_bound(sys: &BoundSystem, depth: usize) -> LowerBound {
    match sys {
        BoundSystem::Path(s) => lower_bound_pathwidth(s, depth),
        BoundSystem::Tree(s) => lower_bound_tree(s, depth),
    }
}

type Dense = Vec<Vec<BigUint>>;

fn to_dense(rows: Vec<Vec<u64>>) -> Dense {
    rows.into_iter().map(|r| r.into_iter().map(BigUint::from).collect()).collect()
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Rigorous lower bound on the spectral radius of a nonnegative matrix.
pub fn spectral_lower(m: &Dense) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::zero();
    }
    let top = m.iter().flatten().map(|x| x.to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max);
    if top == 0.0 {
        return BigRational::zero();
    }
    let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::MAX) / top).collect()).collect();
    // power iteration on M + I, which shares the Perron vector and is aperiodic
    let mut v = vec![1.0f64; n];
    for _ in 0..2000 {
        let mut w: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|j| mf[i][j] * v[j]).sum::<f64>()).collect();
        let s = w.iter().cloned().fold(0.0, f64::max);
        w.iter_mut().for_each(|x| *x /= s);
        v = w;
    }
    let vmax = v.iter().cloned().fold(0.0, f64::max);
    let support: Vec<usize> = (0..n).filter(|&i| v[i] > 1e-9 * vmax).collect();
    let vi: Vec<BigUint> = support.iter().map(|&i| BigUint::from((v[i] / vmax * 1e15).round() as u64).max(BigUint::from(1u32))).collect();
    support
        .iter()
        .enumerate()
        .map(|(a, &i)| {
            let mv: BigUint = support.iter().enumerate().map(|(b, &j)| &m[i][j] * &vi[b]).sum();
            BigRational::new(mv.into(), vi[a].clone().into())
        })
        .min()
        .unwrap_or_else(BigRational::zero)
}

fn root_down(r: &BigRational, len: usize) -> f64 {
    let f = r.to_f64().unwrap_or(0.0);
    if f <= 0.0 {
        return 0.0;
    }
    (f * (1.0 - 1e-15)).powf(1.0 / len as f64) * (1.0 - 1e-15)
}

/// Best ρ(W)^{1/|W|} over all words W of at most `depth` matrices.
pub fn lower_bound_pathwidth(sys: &OperatorSystem, depth: usize) -> LowerBound {
    let mats: Vec<Dense> = sys.matrices.iter().map(|m| to_dense(m.rows())).collect();
    let mut best = LowerBound { value: 0.0, witness: String::new() };
    let mut frontier: Vec<(Vec<usize>, Dense)> = vec![(Vec::new(), Vec::new())];
    for len in 1..=depth.max(1) {
        let mut next = Vec::new();
        for (word, prod) in &frontier {
            for (k, m) in mats.iter().enumerate() {
                let p = if word.is_empty() { m.clone() } else { mul(m, prod) };
                let mut w = word.clone();
                w.push(k);
                let value = root_down(&spectral_lower(&p), len);
                if value > best.value {
                    let names: Vec<String> = w.iter().map(|&i| sys.labels[i].to_string()).collect();
                    best = LowerBound { value, witness: names.join(" ; ") };
                }
                next.push((w, p));
            }
        }
        frontier = next;
    }
    best
}

fn scripts_up_to(leaves: usize, unions: bool) -> Vec<Vec<TreeScript>> {
    let mut by_size: Vec<Vec<TreeScript>> = vec![Vec::new(), vec![TreeScript::Leaf]];
    for n in 2..=leaves {
        let mut out = Vec::new();
        for a in 1..n {
            for x in &by_size[a] {
                for y in &by_size[n - a] {
                    out.push(TreeScript::compose(x.clone(), y.clone()));
                    if unions {
                        out.push(TreeScript::union(x.clone(), y.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size
}

/// Best ρ(R)^{1/|w|}, where R is composition (or union) with a fixed small
/// tree w on either side, over trees w with at most `depth` vertices.
pub fn lower_bound_tree(sys: &TreeSystem, depth: usize) -> LowerBound {
    let dim = sys.dim();
    let mut best = LowerBound { value: 0.0, witness: String::new() };
    let unions = sys.delta.is_some();
    for (size, scripts) in scripts_up_to(depth.max(1), unions).into_iter().enumerate().skip(1) {
        let mut seen = std::collections::HashSet::new();
        for s in scripts {
            let Ok(psi) = sys.psi(&s) else { continue };
            let Some(psi) = psi.iter().map(|x| x.to_u64()).collect::<Option<Vec<u64>>>() else { continue };
            if !seen.insert(psi.clone()) {
                continue;
            }
            for (name, map) in [("compose", &sys.phi)].into_iter().chain(sys.delta.as_ref().map(|d| ("union", d))) {
                for (side, m) in [("right", map.right_fixed(dim, &psi)), ("left", map.left_fixed(dim, &psi))] {
                    let value = root_down(&spectral_lower(&to_dense(m)), size);
                    if value > best.value {
                        best = LowerBound { value, witness: format!("repeated {name} ({side}) with {s}") };
                    }
                }
            }
        }
    }
    best
}
