//! Vertex-state automata for the separator dynamic programs.
//!
//! A [`VertexAutomaton`] describes what is remembered about one distinguished
//! vertex; [`TupleAutomaton`] lifts it to k-tuples and implements the
//! extension/completion semantics shared by every per-vertex automaton.
//! [`mindom::MinDomPw2`] is a separator automaton that is not a tuple product.

mod counting;
pub mod mindom;
mod mim;

use std::fmt;

pub use counting::{CertificateAutomaton, CountingAutomaton};
pub use mim::MimAutomaton;

use crate::error::Error;
use crate::sigma_rho::{Mode, Problem};

/// What is tracked about a single distinguished vertex.
pub trait VertexAutomaton: Send + Sync {
    fn state_count(&self) -> usize;

    /// States a brand-new isolated vertex may take.
    fn fresh(&self) -> Vec<usize>;

    /// New states of both endpoints after adding the edge a–b, or `None` when
    /// no solution can survive the edge.
    fn add_edge(&self, a: usize, b: usize) -> Option<(usize, usize)>;

    /// Whether a vertex may leave the separator in this state (its
    /// neighborhood is final from now on).
    fn accept(&self, s: usize) -> bool;

    /// State of a separator vertex after its neighbor left in state `departed`.
    fn after_leave(&self, _departed: usize, neighbor: usize) -> usize {
        neighbor
    }

    fn legend(&self, s: usize) -> String;
}

/// Which vertex of S ∪ {n} leaves the separator during an extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Departing {
    /// The distinguished vertex at this position; the new vertex takes its place.
    Position(usize),
    /// The new vertex itself.
    New,
}

/// One way of extending a k-distinguished graph: the departing vertex o and
/// the positions of S' that o becomes adjacent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtensionDescriptor {
    pub departing: Departing,
    /// Bit i set: o is joined to the vertex at position i of S'.
    pub edges: u32,
}

impl ExtensionDescriptor {
    /// Working-set index (0..k for S, k for n) of the vertex at position `pos` of S'.
    pub fn position_vertex(&self, k: usize, pos: usize) -> usize {
        match self.departing {
            Departing::Position(j) if j == pos => k,
            _ => pos,
        }
    }

    pub fn departing_vertex(&self, k: usize) -> usize {
        match self.departing {
            Departing::Position(j) => j,
            Departing::New => k,
        }
    }
}

impl fmt::Display for ExtensionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.departing {
            Departing::New => write!(f, "drop=new edges={}", self.edges),
            Departing::Position(j) => write!(f, "drop={j} edges={}", self.edges),
        }
    }
}

/// All (k+1)·2^k descriptors: departing vertex in the order new, 0, 1, …, and
/// for each one the edge sets from the full set down to the empty set.
///
/// For k = 1 this gives keep-old/edge, keep-old/no-edge, keep-new/edge,
/// keep-new/no-edge.
pub fn enumerate_extensions(k: usize) -> Result<Vec<ExtensionDescriptor>, Error> {
    if k == 0 || k > 2 {
        return Err(Error::Unsupported(format!("pathwidth {k}")));
    }
    let departures = std::iter::once(Departing::New).chain((0..k).map(Departing::Position));
    Ok(departures
        .flat_map(|d| (0..1u32 << k).rev().map(move |edges| ExtensionDescriptor { departing: d, edges }))
        .collect())
}

/// Pairs (i, j), i < j, of separator positions in completion-bit order.
pub fn completion_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..k {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

/// State machine over whole separators (tuple states).
pub trait SeparatorAutomaton: Send + Sync {
    fn k(&self) -> usize;

    /// Number of separator states (coordinates of Ψ).
    fn dim(&self) -> usize;

    /// Ψ of the edgeless graph on k distinguished vertices, as (state, count) pairs.
    fn initial(&self) -> Vec<(usize, u64)>;

    /// Appends to `out` the resulting state for every fresh-vertex choice that
    /// survives the extension (one entry per choice).
    fn successors(&self, state: usize, desc: &ExtensionDescriptor, out: &mut Vec<usize>);

    /// Whether a separator in `state` completes to a solution when the
    /// completion adds the edges in `edges` (bit index from [`completion_pairs`]).
    fn completion_accepts(&self, state: usize, edges: u32) -> bool;

    fn legend(&self, state: usize) -> String;
}

/// Lexicographic product of a per-vertex automaton over k positions.
pub struct TupleAutomaton<A> {
    pub vertex: A,
    k: usize,
    n: usize,
}

impl<A: VertexAutomaton> TupleAutomaton<A> {
    pub fn new(vertex: A, k: usize) -> Self {
        let n = vertex.state_count();
        TupleAutomaton { vertex, k, n }
    }

    /// Rank of a tuple; position 0 is the most significant digit.
    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &s| acc * self.n + s)
    }

    pub fn decode(&self, mut rank: usize) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for slot in out.iter_mut().rev() {
            *slot = rank % self.n;
            rank /= self.n;
        }
        out
    }

    /// Lets `working[o]` leave after joining it to every index in `targets`.
    fn depart(&self, working: &mut [usize], o: usize, targets: &[usize]) -> bool {
        for &t in targets {
            match self.vertex.add_edge(working[o], working[t]) {
                Some((a, b)) => {
                    working[o] = a;
                    working[t] = b;
                }
                None => return false,
            }
        }
        if !self.vertex.accept(working[o]) {
            return false;
        }
        for &t in targets {
            working[t] = self.vertex.after_leave(working[o], working[t]);
        }
        true
    }

    /// The tuple after one extension with a fixed fresh state, or `None` on rejection.
    pub fn extend_tuple(&self, tuple: &[usize], desc: &ExtensionDescriptor, fresh: usize) -> Option<Vec<usize>> {
        let k = self.k;
        let mut working: Vec<usize> = tuple.to_vec();
        working.push(fresh);
        let o = desc.departing_vertex(k);
        let targets: Vec<usize> =
            (0..k).filter(|i| desc.edges >> i & 1 == 1).map(|i| desc.position_vertex(k, i)).collect();
        if !self.depart(&mut working, o, &targets) {
            return None;
        }
        Some((0..k).map(|i| working[desc.position_vertex(k, i)]).collect())
    }

    pub fn completion_accepts_tuple(&self, tuple: &[usize], edges: u32) -> bool {
        let mut working = tuple.to_vec();
        let pairs = completion_pairs(self.k);
        for o in 0..self.k {
            let targets: Vec<usize> = pairs
                .iter()
                .enumerate()
                .filter(|(bit, (i, _))| edges >> bit & 1 == 1 && *i == o)
                .map(|(_, &(_, j))| j)
                .collect();
            if !self.depart(&mut working, o, &targets) {
                return false;
            }
        }
        true
    }
}

impl<A: VertexAutomaton> SeparatorAutomaton for TupleAutomaton<A> {
    fn k(&self) -> usize {
        self.k
    }

    fn dim(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    fn initial(&self) -> Vec<(usize, u64)> {
        let fresh = self.vertex.fresh();
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.k {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    fresh.iter().map(move |&s| {
                        let mut t = t.clone();
                        t.push(s);
                        t
                    })
                })
                .collect();
        }
        let mut out: Vec<(usize, u64)> = tuples.iter().map(|t| (self.encode(t), 1)).collect();
        out.sort();
        out
    }

    fn successors(&self, state: usize, desc: &ExtensionDescriptor, out: &mut Vec<usize>) {
        let tuple = self.decode(state);
        for f in self.vertex.fresh() {
            if let Some(t) = self.extend_tuple(&tuple, desc, f) {
                out.push(self.encode(&t));
            }
        }
    }

    fn completion_accepts(&self, state: usize, edges: u32) -> bool {
        self.completion_accepts_tuple(&self.decode(state), edges)
    }

    fn legend(&self, state: usize) -> String {
        let parts: Vec<String> = self.decode(state).into_iter().map(|s| self.vertex.legend(s)).collect();
        format!("({})", parts.join(", "))
    }
}

/// The per-vertex automaton of a problem; `None` for the separator-only automaton.
pub fn vertex_automaton(problem: &Problem) -> Option<Box<dyn VertexAutomaton>> {
    match problem.mode {
        Mode::All => Some(Box::new(CountingAutomaton::new(problem))),
        Mode::Min | Mode::Max => Some(Box::new(CertificateAutomaton::new(problem))),
        Mode::MaxInducedMatching => Some(Box::new(MimAutomaton)),
        Mode::MinDomPw2 => None,
    }
}

impl VertexAutomaton for Box<dyn VertexAutomaton> {
    fn state_count(&self) -> usize {
        (**self).state_count()
    }
    fn fresh(&self) -> Vec<usize> {
        (**self).fresh()
    }
    fn add_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        (**self).add_edge(a, b)
    }
    fn accept(&self, s: usize) -> bool {
        (**self).accept(s)
    }
    fn after_leave(&self, departed: usize, neighbor: usize) -> usize {
        (**self).after_leave(departed, neighbor)
    }
    fn legend(&self, s: usize) -> String {
        (**self).legend(s)
    }
}

/// The separator automaton for a problem on pathwidth-k graphs.
pub fn separator_automaton(problem: &Problem, k: usize) -> Result<Box<dyn SeparatorAutomaton>, Error> {
    problem.check_class(crate::sigma_rho::GraphClass::Pathwidth(k))?;
    Ok(match vertex_automaton(problem) {
        Some(v) => Box::new(TupleAutomaton::new(v, k)),
        None => Box::new(mindom::MinDomPw2),
    })
}

/// Per-vertex state count of a problem (37 pair states for the pathwidth-2
/// minimal dominating automaton).
pub fn state_count(problem: &Problem) -> usize {
    match vertex_automaton(problem) {
        Some(v) => v.state_count(),
        None => mindom::STATE_COUNT,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_counts() {
        assert_eq!(enumerate_extensions(1).unwrap().len(), 4);
        assert_eq!(enumerate_extensions(2).unwrap().len(), 12);
        assert!(enumerate_extensions(3).is_err());
        let d = enumerate_extensions(1).unwrap();
        assert_eq!(d[0], ExtensionDescriptor { departing: Departing::New, edges: 1 });
        assert_eq!(d[1], ExtensionDescriptor { departing: Departing::New, edges: 0 });
        assert_eq!(d[2], ExtensionDescriptor { departing: Departing::Position(0), edges: 1 });
        assert_eq!(d[3], ExtensionDescriptor { departing: Departing::Position(0), edges: 0 });
        assert_eq!(completion_pairs(1).len(), 0);
        assert_eq!(completion_pairs(2), vec![(0, 1)]);
    }

    #[test]
    fn state_counts() {
        let im = Problem::parse("{1}", "N", "all").unwrap();
        assert_eq!(state_count(&im), 4);
        let tpd = Problem::parse("{1}", "{1}", "all").unwrap();
        assert_eq!(state_count(&tpd), 6);
        let mim = Problem::parse("{1}", "N", "mim").unwrap();
        assert_eq!(state_count(&mim), 5);
        let md = Problem::parse("N", "N+", "mindom-pw2").unwrap();
        assert_eq!(state_count(&md), 37);
    }

    #[test]
    fn tuple_rank_roundtrip() {
        let im = Problem::parse("{1}", "N", "all").unwrap();
        let t = TupleAutomaton::new(CountingAutomaton::new(&im), 2);
        for r in 0..16 {
            assert_eq!(t.encode(&t.decode(r)), r);
        }
        assert_eq!(t.encode(&[1, 2]), 6);
    }

    #[test]
    fn induced_matching_transitions() {
        let im = Problem::parse("{1}", "N", "all").unwrap();
        let t = TupleAutomaton::new(CountingAutomaton::new(&im), 1);
        let keep_old_edge = ExtensionDescriptor { departing: Departing::New, edges: 1 };
        // old in D with no D-neighbor, new vertex in D: both reach state 1
        assert_eq!(t.extend_tuple(&[0], &keep_old_edge, 0), Some(vec![1]));
        // old outside D and new in D joined to it: new vertex leaves with count 0
        assert_eq!(t.extend_tuple(&[3], &keep_old_edge, 0), None);
        let keep_old = ExtensionDescriptor { departing: Departing::New, edges: 0 };
        for s in 0..4 {
            assert_eq!(t.extend_tuple(&[s], &keep_old, 3), Some(vec![s]));
        }
        let acc: Vec<bool> = (0..4).map(|s| t.completion_accepts(s, 0)).collect();
        assert_eq!(acc, vec![false, true, false, true]);
    }

    #[test]
    fn everything_accepted_for_all_subsets() {
        let p = Problem::parse("N", "N", "all").unwrap();
        let t = TupleAutomaton::new(CountingAutomaton::new(&p), 2);
        for s in 0..t.dim() {
            assert!(t.completion_accepts(s, 0));
            assert!(t.completion_accepts(s, 1));
        }
    }
}
