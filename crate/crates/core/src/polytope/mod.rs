//! Invariant polytopes: exact conv_≤ membership, Hull_≤, the saturation
//! algorithms for pathwidth and tree classes, certificates and numeric lower
//! bounds.

pub mod certificate;
pub mod lower;
pub mod lp;
pub mod membership;
pub mod saturate;

use std::hash::{Hash, Hasher};

use crate::error::Error;
use crate::numbers::AlgebraicNumber;
use crate::pathwidth::{build_system, Matrix, OperatorSystem};
use crate::sigma_rho::{GraphClass, Problem};
use crate::tree::{build_tree_system, Bilinear, TreeSystem};

pub use certificate::{verify_certificate, Certificate, Verdict};
pub use lower::{lower_bound, LowerBound};
pub use membership::{hull_le, member_conv_le, Membership};
pub use saturate::{saturate, saturate_pathwidth, saturate_tree, Failure, Limits, Stats};

/// A nonnegative vector over the field with a cached floating-point shadow.
#[derive(Clone, Debug)]
pub struct Point {
    pub coords: Vec<AlgebraicNumber>,
    pub approx: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<AlgebraicNumber>) -> Self {
        let approx = coords.iter().map(|c| c.to_f64()).collect();
        Point { coords, approx }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// The reduced operator system a bound is computed for.
#[derive(Debug, Clone)]
pub enum BoundSystem {
    Path(OperatorSystem),
    Tree(TreeSystem),
}

impl BoundSystem {
    pub fn dim(&self) -> usize {
        match self {
            BoundSystem::Path(s) => s.dim(),
            BoundSystem::Tree(s) => s.dim(),
        }
    }

    pub fn initial(&self) -> &[u64] {
        match self {
            BoundSystem::Path(s) => &s.initial,
            BoundSystem::Tree(s) => &s.initial,
        }
    }

    pub fn fingerprint(&self) -> String {
        match self {
            BoundSystem::Path(s) => s.fingerprint(),
            BoundSystem::Tree(s) => s.fingerprint(),
        }
    }

    pub fn index_map(&self) -> &[usize] {
        match self {
            BoundSystem::Path(s) => &s.index_map,
            BoundSystem::Tree(s) => &s.index_map,
        }
    }
}

/// A problem on a graph class together with its reduced system.
#[derive(Debug, Clone)]
pub struct BoundProblem {
    pub problem: Problem,
    pub class: GraphClass,
    /// Dimension before pruning, for seeds given in raw coordinates.
    pub raw_dim: usize,
    pub system: BoundSystem,
}

impl BoundProblem {
    /// Builds and reduces the system: accessible/co-accessible projection,
    /// plus removal of dominated matrices for pathwidth classes.
    pub fn new(problem: &Problem, class: GraphClass) -> Result<Self, Error> {
        problem.check_class(class)?;
        let (raw_dim, system) = match class {
            GraphClass::Pathwidth(k) => {
                let raw = build_system(problem, k)?;
                (raw.dim(), BoundSystem::Path(raw.prune(true)))
            }
            GraphClass::Tree | GraphClass::Forest => {
                let raw = build_tree_system(problem, class)?;
                (raw.dim(), BoundSystem::Tree(raw.prune()))
            }
        };
        Ok(BoundProblem { problem: problem.clone(), class, raw_dim, system })
    }

    /// Accepts a seed in reduced coordinates, or in raw coordinates (projected).
    pub fn project_seed(&self, seed: Vec<AlgebraicNumber>) -> Result<Vec<AlgebraicNumber>, Error> {
        let dim = self.system.dim();
        if seed.len() == dim {
            return Ok(seed);
        }
        if seed.len() == self.raw_dim {
            return Ok(self.system.index_map().iter().map(|&i| seed[i].clone()).collect());
        }
        Err(Error::Dimension(format!(
            "seed has {} coordinates; expected {dim} (reduced) or {} (raw)",
            seed.len(),
            self.raw_dim
        )))
    }
}

pub(crate) fn apply_matrix(m: &Matrix, x: &[AlgebraicNumber], scale: &AlgebraicNumber) -> Vec<AlgebraicNumber> {
    let field = scale.field();
    let mut out = vec![field.zero(); m.dim()];
    for (r, c, v) in m.entries() {
        if x[c].is_zero() {
            continue;
        }
        let t = if v == 1 { x[c].clone() } else { x[c].scale_int(v as i64) };
        out[r] = &out[r] + &t;
    }
    out.iter().map(|o| if scale.is_one() { o.clone() } else { o * scale }).collect()
}

pub(crate) fn apply_bilinear(b: &Bilinear, u: &[AlgebraicNumber], w: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    let field = u[0].field();
    let mut out = vec![field.zero(); u.len()];
    for &(i, a, c) in &b.entries {
        if u[a].is_zero() || w[c].is_zero() {
            continue;
        }
        out[i] = &out[i] + &(&u[a] * &w[c]);
    }
    out
}

#[cfg(test)]
mod tests;
