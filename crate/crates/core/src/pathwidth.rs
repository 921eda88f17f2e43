//! Operator systems for graphs of pathwidth at most k: one nonnegative integer
//! matrix per extension descriptor, the initial vector Ψ(g₀), and one
//! acceptance vector per completion.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::sigma_rho::Problem;
use crate::states::{completion_pairs, enumerate_extensions, separator_automaton, ExtensionDescriptor, SeparatorAutomaton};

/// Default cap on the number of separator states.
pub const DEFAULT_STATE_CAP: usize = 50_000;

/// Square matrix with small nonnegative integer entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.dim + col]
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: u64) {
        self.data[row * self.dim + col] += v;
    }

    /// Nonzero entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.data.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(i, &v)| (i / self.dim, i % self.dim, v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Entry-wise `self ≤ other`.
    pub fn dominated_by(&self, other: &Matrix) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let dim = rows.len();
        let mut m = Matrix::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim, "matrix must be square");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * dim + j] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.dim.max(1)).map(|c| c.to_vec()).collect()
    }

    fn project(&self, keep: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(keep.len());
        for (i, &r) in keep.iter().enumerate() {
            for (j, &c) in keep.iter().enumerate() {
                m.data[i * keep.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn apply_big(&self, x: &[BigUint]) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.dim];
        for (r, c, v) in self.entries() {
            if !x[c].is_zero() {
                out[r] += &x[c] * v;
            }
        }
        out
    }
}

/// The operator system (A, v, P) of a problem on pathwidth-k graphs.
#[derive(Debug, Clone)]
pub struct OperatorSystem {
    pub k: usize,
    pub matrices: Vec<Matrix>,
    /// Descriptor of each matrix (several after domination pruning may be gone).
    pub labels: Vec<ExtensionDescriptor>,
    pub initial: Vec<u64>,
    pub completions: Vec<Vec<u64>>,
    /// Completion edge mask of each acceptance vector.
    pub completion_labels: Vec<u32>,
    /// Raw separator state of each coordinate.
    pub index_map: Vec<usize>,
    pub legends: Vec<String>,
}

impl OperatorSystem {
    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    /// Exact p·(M_last ⋯ M_first)·v for matrix indices `seq` and completion index `completion`.
    pub fn evaluate_count(&self, seq: &[usize], completion: usize) -> BigUint {
        let psi = self.psi(seq);
        self.completions[completion].iter().zip(&psi).map(|(&p, x)| x * p).sum()
    }

    /// Ψ after applying the matrices of `seq` in order.
    pub fn psi(&self, seq: &[usize]) -> Vec<BigUint> {
        let mut x: Vec<BigUint> = self.initial.iter().map(|&v| BigUint::from(v)).collect();
        for &i in seq {
            x = self.matrices[i].apply_big(&x);
        }
        x
    }

    /// Index of the matrix built for `desc`, if it survived pruning.
    pub fn matrix_index(&self, desc: &ExtensionDescriptor) -> Option<usize> {
        self.labels.iter().position(|l| l == desc)
    }

    /// Index of the acceptance vector for a completion edge mask.
    pub fn completion_index(&self, edges: u32) -> Option<usize> {
        self.completion_labels.iter().position(|&l| l == edges)
    }

    /// Deterministic text description used for fingerprints.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("pathwidth {}\ndim {}\n", self.k, self.dim());
        s.push_str(&format!("v {:?}\n", self.initial));
        for (m, l) in self.matrices.iter().zip(&self.labels) {
            s.push_str(&format!("M {l} {:?}\n", m.data));
        }
        for (p, l) in self.completions.iter().zip(&self.completion_labels) {
            s.push_str(&format!("P {l} {p:?}\n"));
        }
        s
    }

    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// Projects on the accessible and co-accessible coordinates; with
    /// `domination`, also drops every matrix entry-wise below another one
    /// (repeating until nothing changes).
    pub fn prune(&self, domination: bool) -> OperatorSystem {
        let mut sys = self.clone();
        loop {
            let keep = sys.useful_coordinates();
            let mut next = sys.project(&keep);
            if domination {
                next.remove_dominated();
            }
            if next.dim() == sys.dim() && next.matrices.len() == sys.matrices.len() {
                return next;
            }
            sys = next;
        }
    }

    fn useful_coordinates(&self) -> Vec<usize> {
        let m = self.dim();
        let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut bwd: Vec<Vec<usize>> = vec![Vec::new(); m];
        for mat in &self.matrices {
            for (r, c, _) in mat.entries() {
                fwd[c].push(r);
                bwd[r].push(c);
            }
        }
        let reach = |starts: Vec<usize>, adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; m];
            let mut queue: VecDeque<usize> = VecDeque::new();
            for s in starts {
                if !seen[s] {
                    seen[s] = true;
                    queue.push_back(s);
                }
            }
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let acc = reach((0..m).filter(|&i| self.initial[i] != 0).collect(), &fwd);
        let coacc = reach((0..m).filter(|&i| self.completions.iter().any(|p| p[i] != 0)).collect(), &bwd);
        (0..m).filter(|&i| acc[i] && coacc[i]).collect()
    }

    fn project(&self, keep: &[usize]) -> OperatorSystem {
        OperatorSystem {
            k: self.k,
            matrices: self.matrices.iter().map(|mat| mat.project(keep)).collect(),
            labels: self.labels.clone(),
            initial: keep.iter().map(|&i| self.initial[i]).collect(),
            completions: self.completions.iter().map(|p| keep.iter().map(|&i| p[i]).collect()).collect(),
            completion_labels: self.completion_labels.clone(),
            index_map: keep.iter().map(|&i| self.index_map[i]).collect(),
            legends: keep.iter().map(|&i| self.legends[i].clone()).collect(),
        }
    }

    fn remove_dominated(&mut self) {
        let n = self.matrices.len();
        let mut removed = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || removed[j] {
                    continue;
                }
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                // equal matrices: keep the first copy
                if a.dominated_by(b) && (a != b || j < i) {
                    removed[i] = true;
                    break;
                }
            }
        }
        let mut k = 0;
        self.matrices.retain(|_| {
            k += 1;
            !removed[k - 1]
        });
        let mut k = 0;
        self.labels.retain(|_| {
            k += 1;
            !removed[k - 1]
        });
    }
}

/// Builds the raw (unpruned) operator system.
pub fn build_system(problem: &Problem, k: usize) -> Result<OperatorSystem, Error> {
    build_system_capped(problem, k, DEFAULT_STATE_CAP)
}

pub fn build_system_capped(problem: &Problem, k: usize, cap: usize) -> Result<OperatorSystem, Error> {
    let sep = separator_automaton(problem, k)?;
    build_from_automaton(sep.as_ref(), cap)
}

pub fn build_from_automaton(sep: &dyn SeparatorAutomaton, cap: usize) -> Result<OperatorSystem, Error> {
    let k = sep.k();
    let dim = sep.dim();
    if dim > cap {
        return Err(Error::StateSpace(dim, cap));
    }
    let descs = enumerate_extensions(k)?;
    let matrices: Vec<Matrix> = descs
        .par_iter()
        .map(|d| {
            let mut m = Matrix::zeros(dim);
            let mut out = Vec::new();
            for s in 0..dim {
                out.clear();
                sep.successors(s, d, &mut out);
                for &t in &out {
                    m.add_to(t, s, 1);
                }
            }
            m
        })
        .collect();
    let mut initial = vec![0u64; dim];
    for (s, c) in sep.initial() {
        initial[s] += c;
    }
    let npairs = completion_pairs(k).len();
    let completion_labels: Vec<u32> = (0..1u32 << npairs).collect();
    let completions = completion_labels
        .iter()
        .map(|&e| (0..dim).map(|s| u64::from(sep.completion_accepts(s, e))).collect())
        .collect();
    Ok(OperatorSystem {
        k,
        matrices,
        labels: descs,
        initial,
        completions,
        completion_labels,
        index_map: (0..dim).collect(),
        legends: (0..dim).map(|s| sep.legend(s)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im() -> Problem {
        Problem::parse("{1}", "N", "all").unwrap()
    }

    #[test]
    fn induced_matching_matrices() {
        let sys = build_system(&im(), 1).unwrap();
        let expected = [
            vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 1, 2, 0], vec![0, 0, 0, 1]],
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            vec![vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 1, 0, 1]],
            vec![vec![0, 1, 0, 1], vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 1, 0, 1]],
        ];
        for (m, e) in sys.matrices.iter().zip(expected.iter()) {
            assert_eq!(&m.rows(), e);
        }
        assert_eq!(sys.initial, vec![1, 0, 0, 1]);
        assert_eq!(sys.completions, vec![vec![0, 1, 0, 1]]);
    }

    #[test]
    fn induced_matching_pruned() {
        let sys = build_system(&im(), 1).unwrap().prune(false);
        assert_eq!(sys.dim(), 3);
        assert_eq!(sys.matrices.len(), 4);
        assert_eq!(sys.initial, vec![1, 0, 1]);
        assert_eq!(sys.index_map, vec![0, 1, 3]);
    }

    #[test]
    fn perfect_total_dominating_pruned() {
        let p = Problem::parse("{1}", "{1}", "all").unwrap();
        let sys = build_system(&p, 1).unwrap().prune(true);
        assert_eq!(sys.matrices.len(), 3);
        assert_eq!(sys.initial, vec![1, 0, 1, 0]);
    }

    #[test]
    fn path_counts_for_induced_matchings() {
        let sys = build_system(&im(), 1).unwrap();
        // keep-new/edge repeatedly builds a path
        let keep_new_edge = 2;
        let counts: Vec<u64> = (0..5)
            .map(|len| {
                let seq = vec![keep_new_edge; len];
                sys.evaluate_count(&seq, 0).try_into().unwrap()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn all_subsets() {
        let p = Problem::parse("N", "N", "all").unwrap();
        let sys = build_system(&p, 2).unwrap();
        for c in 0..2 {
            assert_eq!(sys.evaluate_count(&[0, 5, 7], c), BigUint::from(32u32));
        }
    }
}
