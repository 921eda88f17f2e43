//! Saturation: grow X from the initial vector until every image lies in
//! conv_≤(X), pruning with Hull_≤ after each round.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::certificate::Certificate;
use super::membership::{hull_le_indices, member_conv_le};
use super::{apply_bilinear, apply_matrix, BoundProblem, BoundSystem, Point};
use crate::error::Error;
use crate::numbers::AlgebraicNumber;
use crate::pathwidth::OperatorSystem;
use crate::tree::TreeSystem;

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_points: usize,
    pub max_rounds: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_points: 5000, max_rounds: 200, time_limit: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub rounds: usize,
    /// Images tested for membership over the whole run.
    pub images: usize,
    /// Largest |X| seen after a round.
    pub peak: usize,
    pub elapsed: Duration,
}

/// Saturation stopped before closure; `points` is the working set.
#[derive(Debug, Clone)]
pub struct Failure {
    pub reason: String,
    pub points: Vec<Point>,
    pub stats: Stats,
}

fn check_inputs(dim: usize, alpha: &AlgebraicNumber, seeds: &[Vec<AlgebraicNumber>]) -> Result<(), Error> {
    if !alpha.is_positive() {
        return Err(Error::Invalid(format!("α must be positive, got {alpha}")));
    }
    for s in seeds {
        if s.len() != dim {
            return Err(Error::Dimension(format!("seed has {} coordinates, system has {dim}", s.len())));
        }
        if s.iter().any(|c| c.is_negative()) {
            return Err(Error::Invalid("seed vectors must be nonnegative".into()));
        }
        if s.iter().any(|c| !c.field().same_as(alpha.field())) {
            return Err(Error::Invalid("seed coordinates must lie in the field of α".into()));
        }
    }
    Ok(())
}

fn lift(alpha: &AlgebraicNumber, v: &[u64]) -> Vec<AlgebraicNumber> {
    v.iter().map(|&x| alpha.field().from_i64(x as i64)).collect()
}

/// Algorithm for pathwidth systems: X starts as {v} ∪ seeds and must absorb
/// (1/α)·M·x for every matrix M and x ∈ X.
pub fn saturate_pathwidth(
    sys: &OperatorSystem,
    alpha: &AlgebraicNumber,
    seeds: &[Vec<AlgebraicNumber>],
    limits: Limits,
) -> Result<Result<(Vec<Point>, Stats), Failure>, Error> {
    check_inputs(sys.dim(), alpha, seeds)?;
    let inv = alpha.inv();
    let start: Vec<Vec<AlgebraicNumber>> = std::iter::once(lift(alpha, &sys.initial)).chain(seeds.iter().cloned()).collect();
    let images = |x: &[Point], fresh: &[bool]| -> Vec<Vec<AlgebraicNumber>> {
        let jobs: Vec<(usize, usize)> =
            (0..x.len()).filter(|&i| fresh[i]).flat_map(|i| (0..sys.matrices.len()).map(move |k| (i, k))).collect();
        jobs.par_iter().map(|&(i, k)| apply_matrix(&sys.matrices[k], &x[i].coords, &inv)).collect()
    };
    Ok(run(start, images, limits))
}

/// Algorithm for tree and forest systems: X starts as {v/α} ∪ seeds and
/// must absorb Φ(x, x′) (and Δ(x, x′) for forests) for all x, x′ ∈ X.
pub fn saturate_tree(
    sys: &TreeSystem,
    alpha: &AlgebraicNumber,
    seeds: &[Vec<AlgebraicNumber>],
    limits: Limits,
) -> Result<Result<(Vec<Point>, Stats), Failure>, Error> {
    check_inputs(sys.dim(), alpha, seeds)?;
    let inv = alpha.inv();
    let v: Vec<AlgebraicNumber> = lift(alpha, &sys.initial).iter().map(|c| c * &inv).collect();
    let start: Vec<Vec<AlgebraicNumber>> = std::iter::once(v).chain(seeds.iter().cloned()).collect();
    let maps = sys.maps();
    let images = |x: &[Point], fresh: &[bool]| -> Vec<Vec<AlgebraicNumber>> {
        let n = x.len();
        let mut jobs = Vec::new();
        for t in 0..maps.len() {
            for i in 0..n {
                for j in 0..n {
                    if fresh[i] || fresh[j] {
                        jobs.push((t, i, j));
                    }
                }
            }
        }
        jobs.par_iter().map(|&(t, i, j)| apply_bilinear(maps[t], &x[i].coords, &x[j].coords)).collect()
    };
    Ok(run(start, images, limits))
}

// points hash by coordinates only; the field's refinement cache is not part of the key
#[allow(clippy::mutable_key_type)]
fn run<F>(start: Vec<Vec<AlgebraicNumber>>, images: F, limits: Limits) -> Result<(Vec<Point>, Stats), Failure>
where
    F: Fn(&[Point], &[bool]) -> Vec<Vec<AlgebraicNumber>>,
{
    let clock = Instant::now();
    let mut stats = Stats::default();
    let mut seen = HashSet::new();
    let mut x: Vec<Point> = Vec::new();
    for c in start {
        let p = Point::new(c);
        if seen.insert(p.clone()) {
            x.push(p);
        }
    }
    let mut fresh = vec![true; x.len()];
    loop {
        stats.peak = stats.peak.max(x.len());
        stats.elapsed = clock.elapsed();
        let fail = |reason: String, x: &[Point], stats: &Stats| Failure { reason, points: x.to_vec(), stats: stats.clone() };
        if stats.rounds >= limits.max_rounds {
            return Err(fail(format!("round limit {} reached with |X| = {}", limits.max_rounds, x.len()), &x, &stats));
        }
        if x.len() > limits.max_points {
            return Err(fail(format!("|X| = {} exceeds the limit {}", x.len(), limits.max_points), &x, &stats));
        }
        if limits.time_limit.is_some_and(|t| stats.elapsed > t) {
            return Err(fail(format!("time limit reached after {} rounds", stats.rounds), &x, &stats));
        }
        stats.rounds += 1;
        let mut candidates = Vec::new();
        let mut local = HashSet::new();
        for c in images(&x, &fresh) {
            let p = Point::new(c);
            if !seen.contains(&p) && local.insert(p.clone()) {
                candidates.push(p);
            }
        }
        stats.images += candidates.len();
        let tested = candidates.len();
        let phase = Instant::now();
        let outside: Vec<Point> = candidates
            .into_par_iter()
            .filter(|p| !member_conv_le(&x, p).is_inside())
            .collect();
        log::info!("round {}: |X| = {}, {} new images outside", stats.rounds, x.len(), outside.len());
        log::debug!(
            "membership of {} images took {:.1?}; paths so far (dominated, rounded, basis, separated, exact): {:?}",
            tested,
            phase.elapsed(),
            super::membership::path_counts()
        );
        if outside.is_empty() {
            stats.elapsed = clock.elapsed();
            return Ok((x, stats));
        }
        let old = x.len();
        for p in &outside {
            seen.insert(p.clone());
        }
        let mut all = x;
        all.extend(outside);
        let phase = Instant::now();
        let keep = hull_le_indices(&all);
        log::debug!(
            "hull of {} points in dimension {} took {:.1?}; paths so far: {:?}",
            all.len(),
            all[0].dim(),
            phase.elapsed(),
            super::membership::path_counts()
        );
        fresh = keep.iter().map(|&i| i >= old).collect();
        x = keep.into_iter().map(|i| all[i].clone()).collect();
    }
}

/// Runs the algorithm that matches the problem's class and packages the
/// result as a certificate.
pub fn saturate(
    bp: &BoundProblem,
    alpha: &AlgebraicNumber,
    seeds: &[Vec<AlgebraicNumber>],
    limits: Limits,
) -> Result<Result<(Certificate, Stats), Failure>, Error> {
    let outcome = match &bp.system {
        BoundSystem::Path(s) => saturate_pathwidth(s, alpha, seeds, limits)?,
        BoundSystem::Tree(s) => saturate_tree(s, alpha, seeds, limits)?,
    };
    Ok(outcome.map(|(points, stats)| {
        let cert = Certificate {
            alpha: alpha.clone(),
            problem: bp.problem.clone(),
            class: bp.class,
            system_hash: bp.system.fingerprint(),
            dim: bp.system.dim(),
            seeds: seeds.to_vec(),
            points: points.into_iter().map(|p| p.coords).collect(),
            witnesses: None,
        };
        (cert, stats)
    }))
}
