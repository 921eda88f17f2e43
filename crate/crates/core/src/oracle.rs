//! Ground truth by exhaustive enumeration, plus explicit graph construction
//! from build scripts and cross-validation of the operator pipelines.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::pathwidth::{build_system, OperatorSystem};
use crate::sigma_rho::{GraphClass, Mode, Problem, RecognizableSet};
use crate::states::mindom::{self, CERT, DOM, FREE, LINKED, PRIVATE, SELF};
use crate::states::{
    completion_pairs, enumerate_extensions, CertificateAutomaton, CountingAutomaton, Departing, ExtensionDescriptor,
    MimAutomaton, TupleAutomaton,
};
use crate::tree::{build_tree_system, TreeScript, TreeSystem};

/// Largest order accepted by the exhaustive enumerators.
pub const MAX_ORDER: usize = 24;

/// Simple undirected graph on at most 64 vertices with an ordered list of
/// distinguished vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<u64>,
    pub distinguished: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "graphs are limited to 64 vertices");
        Graph { adj: vec![0; n], distinguished: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        assert!(self.adj.len() < 64, "graphs are limited to 64 vertices");
        self.adj.push(0);
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.order() {
            for b in a + 1..self.order() {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    /// Star with one center (vertex 0) and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(0, i);
        }
        g
    }

    /// Edge-list text: `n m` header followed by m lines `a b`.
    pub fn parse_edge_list(text: &str) -> Result<Self, Error> {
        let mut nums = text
            .split_whitespace()
            .filter(|t| !t.starts_with('#'))
            .map(|t| t.parse::<usize>().map_err(|_| Error::Syntax(format!("bad integer `{t}` in edge list"))));
        let n = nums.next().ok_or_else(|| Error::Syntax("empty edge list".into()))??;
        let m = nums.next().ok_or_else(|| Error::Syntax("edge list header needs `n m`".into()))??;
        if n > 64 {
            return Err(Error::GraphTooLarge(n, 64));
        }
        let mut g = Graph::new(n);
        for _ in 0..m {
            let a = nums.next().ok_or_else(|| Error::Syntax("missing edge endpoint".into()))??;
            let b = nums.next().ok_or_else(|| Error::Syntax("missing edge endpoint".into()))??;
            if a >= n || b >= n || a == b {
                return Err(Error::Syntax(format!("bad edge {a} {b}")));
            }
            g.add_edge(a, b);
        }
        if nums.next().is_some() {
            return Err(Error::Syntax("more edges than announced".into()));
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.order(), edges.len());
        for (a, b) in edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

/// A pathwidth build script: k, extension steps, and the final completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathScript {
    pub k: usize,
    pub steps: Vec<ExtensionDescriptor>,
    pub completion: u32,
}

impl PathScript {
    pub fn order(&self) -> usize {
        self.k + self.steps.len()
    }

    /// Parses lines `drop=<pos|new> edges=<mask>` (or `keep=old|new` for k = 1),
    /// then `complete edges=<mask>`. An optional first line `pathwidth <k>`
    /// selects k (default 1). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut k = 1;
        let mut steps = Vec::new();
        let mut completion = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if completion.is_some() {
                return Err(Error::Syntax(format!("line after completion: `{line}`")));
            }
            if let Some(rest) = line.strip_prefix("pathwidth") {
                if !steps.is_empty() {
                    return Err(Error::Syntax("`pathwidth` must come first".into()));
                }
                k = rest.trim().parse().map_err(|_| Error::Syntax(format!("bad pathwidth line `{line}`")))?;
                if !(1..=2).contains(&k) {
                    return Err(Error::Unsupported(format!("pathwidth {k}")));
                }
                continue;
            }
            let mut departing = None;
            let mut edges = 0u32;
            let mut complete = false;
            for tok in line.split_whitespace() {
                if tok == "complete" {
                    complete = true;
                } else if let Some(v) = tok.strip_prefix("drop=") {
                    departing = Some(match v {
                        "new" => Departing::New,
                        pos => Departing::Position(
                            pos.parse().map_err(|_| Error::Syntax(format!("bad position `{pos}`")))?,
                        ),
                    });
                } else if let Some(v) = tok.strip_prefix("keep=") {
                    if k != 1 {
                        return Err(Error::Syntax("`keep=` is only meaningful for pathwidth 1; use `drop=`".into()));
                    }
                    departing = Some(match v {
                        "old" | "0" => Departing::New,
                        "new" => Departing::Position(0),
                        other => return Err(Error::Syntax(format!("bad keep value `{other}`"))),
                    });
                } else if let Some(v) = tok.strip_prefix("edges=") {
                    edges = parse_mask(v)?;
                } else {
                    return Err(Error::Syntax(format!("unknown token `{tok}`")));
                }
            }
            if complete {
                if edges >= 1 << completion_pairs(k).len() {
                    return Err(Error::Syntax(format!("completion mask {edges} out of range")));
                }
                completion = Some(edges);
                continue;
            }
            let departing = departing.ok_or_else(|| Error::Syntax(format!("step without drop/keep: `{line}`")))?;
            if let Departing::Position(j) = departing {
                if j >= k {
                    return Err(Error::Syntax(format!("position {j} out of range for pathwidth {k}")));
                }
            }
            if edges >= 1 << k {
                return Err(Error::Syntax(format!("edge mask {edges} out of range")));
            }
            steps.push(ExtensionDescriptor { departing, edges });
        }
        Ok(PathScript { k, steps, completion: completion.unwrap_or(0) })
    }
}

fn parse_mask(v: &str) -> Result<u32, Error> {
    let r = match v.strip_prefix("0b") {
        Some(bits) => u32::from_str_radix(bits, 2),
        None => v.parse(),
    };
    r.map_err(|_| Error::Syntax(format!("bad edge mask `{v}`")))
}

impl fmt::Display for PathScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k != 1 {
            writeln!(f, "pathwidth {}", self.k)?;
        }
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "complete edges={}", self.completion)
    }
}

/// The graph built by a pathwidth script, before completion, with its
/// distinguished vertices in position order.
pub fn build_path_graph(script: &PathScript) -> Graph {
    let k = script.k;
    let mut g = Graph::new(k);
    let mut sep: Vec<usize> = (0..k).collect();
    for step in &script.steps {
        let n = g.add_vertex();
        let o = match step.departing {
            Departing::New => n,
            Departing::Position(j) => sep[j],
        };
        if let Departing::Position(j) = step.departing {
            sep[j] = n;
        }
        for (i, &w) in sep.iter().enumerate() {
            if step.edges >> i & 1 == 1 {
                g.add_edge(o, w);
            }
        }
    }
    g.distinguished = sep;
    g
}

/// The completed graph of a pathwidth script.
pub fn build_completed_graph(script: &PathScript) -> Graph {
    let mut g = build_path_graph(script);
    for (bit, (i, j)) in completion_pairs(script.k).into_iter().enumerate() {
        if script.completion >> bit & 1 == 1 {
            g.add_edge(g.distinguished[i], g.distinguished[j]);
        }
    }
    g
}

/// The graph of a tree/forest script, with the root distinguished.
pub fn build_tree_graph(script: &TreeScript) -> Graph {
    fn go(s: &TreeScript, g: &mut Graph) -> usize {
        match s {
            TreeScript::Leaf => g.add_vertex(),
            TreeScript::Compose(a, b) => {
                let ra = go(a, g);
                let rb = go(b, g);
                g.add_edge(ra, rb);
                ra
            }
            TreeScript::Union(a, b) => {
                let ra = go(a, g);
                go(b, g);
                ra
            }
        }
    }
    let mut g = Graph::new(0);
    let root = go(script, &mut g);
    g.distinguished = vec![root];
    g
}

struct Checker<'a> {
    g: &'a Graph,
    sigma: Vec<bool>,
    rho: Vec<bool>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a Graph, sigma: &RecognizableSet, rho: &RecognizableSet) -> Self {
        let n = g.order() + 2;
        Checker { g, sigma: (0..n).map(|i| sigma.contains(i)).collect(), rho: (0..n).map(|i| rho.contains(i)).collect() }
    }

    fn count(&self, v: usize, d: u64) -> usize {
        (self.g.adj[v] & d).count_ones() as usize
    }

    fn ok_vertex(&self, v: usize, d: u64) -> bool {
        let c = self.count(v, d);
        if d >> v & 1 == 1 {
            self.sigma[c]
        } else {
            self.rho[c]
        }
    }

    fn ok_except(&self, d: u64, skip: u64) -> bool {
        (0..self.g.order()).all(|v| skip >> v & 1 == 1 || self.ok_vertex(v, d))
    }

    fn ok(&self, d: u64) -> bool {
        self.ok_except(d, 0)
    }

    fn minimal(&self, d: u64) -> bool {
        self.ok(d) && (0..self.g.order()).all(|x| d >> x & 1 == 0 || !self.ok(d & !(1 << x)))
    }

    fn maximal(&self, d: u64) -> bool {
        self.ok(d) && (0..self.g.order()).all(|x| d >> x & 1 == 1 || !self.ok(d | 1 << x))
    }

    /// D is the vertex set of an induced matching that no edge can extend.
    fn maximal_induced_matching(&self, d: u64) -> bool {
        if !self.ok(d) {
            return false;
        }
        for (a, b) in self.g.edges() {
            if d >> a & 1 == 0 && d >> b & 1 == 0 && self.ok(d | 1 << a | 1 << b) {
                return false;
            }
        }
        true
    }
}

fn sets_for(problem: &Problem) -> (RecognizableSet, RecognizableSet) {
    (problem.sigma.clone(), problem.rho.clone())
}

fn check_order(g: &Graph) -> Result<(), Error> {
    if g.order() > MAX_ORDER {
        return Err(Error::GraphTooLarge(g.order(), MAX_ORDER));
    }
    Ok(())
}

/// Counts the (all / 1-minimal / 1-maximal / maximal-induced-matching /
/// minimal-dominating) solutions of the whole graph by trying every subset.
pub fn count_bruteforce(g: &Graph, problem: &Problem) -> Result<u64, Error> {
    check_order(g)?;
    let (sigma, rho) = sets_for(problem);
    let chk = Checker::new(g, &sigma, &rho);
    let n = g.order();
    let total: u64 = 1 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let count = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|blk| {
            let lo = blk * chunk;
            let hi = (lo + chunk).min(total);
            (lo..hi)
                .filter(|&d| match problem.mode {
                    Mode::All => chk.ok(d),
                    Mode::Min | Mode::MinDomPw2 => chk.minimal(d),
                    Mode::Max => chk.maximal(d),
                    Mode::MaxInducedMatching => chk.maximal_induced_matching(d),
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}

/// Ψ of a distinguished graph computed from the definitions: for every
/// relaxed solution (and certificate prediction, where relevant) the state
/// tuple of the distinguished vertices is tallied. The coordinates are those
/// of the raw operator system.
pub fn psi_bruteforce(g: &Graph, problem: &Problem) -> Result<Vec<u64>, Error> {
    check_order(g)?;
    let k = g.distinguished.len();
    let s_mask: u64 = g.distinguished.iter().fold(0, |m, &v| m | 1 << v);
    let (sigma, rho) = sets_for(problem);
    let chk = Checker::new(g, &sigma, &rho);
    let n = g.order();
    let dim;
    let mut psi;
    match problem.mode {
        Mode::All => {
            let va = CountingAutomaton::new(problem);
            let tuple = TupleAutomaton::new(va.clone(), k);
            dim = crate::states::SeparatorAutomaton::dim(&tuple);
            psi = vec![0u64; dim];
            for d in 0..1u64 << n {
                if !chk.ok_except(d, s_mask) {
                    continue;
                }
                let t: Vec<usize> =
                    g.distinguished.iter().map(|&v| va.encode(d >> v & 1 == 1, chk.count(v, d))).collect();
                psi[tuple.encode(&t)] += 1;
            }
        }
        Mode::Min | Mode::Max => {
            let va = CertificateAutomaton::new(problem);
            let tuple = TupleAutomaton::new(va.clone(), k);
            dim = crate::states::SeparatorAutomaton::dim(&tuple);
            psi = vec![0u64; dim];
            let maximal = problem.mode == Mode::Max;
            for d in 0..1u64 << n {
                if !chk.ok_except(d, s_mask) {
                    continue;
                }
                // certificates outside S are forced by their final counts
                let mut forced = 0u64;
                for v in 0..n {
                    if s_mask >> v & 1 == 0 {
                        let c = chk.count(v, d);
                        let in_d = d >> v & 1 == 1;
                        let set = if in_d { &chk.sigma } else { &chk.rho };
                        let cert = if maximal { !set[c + 1] } else { c == 0 || !set[c - 1] };
                        if cert {
                            forced |= 1 << v;
                        }
                    }
                }
                for sub in 0..1u64 << k {
                    let mut c_set = forced;
                    for (i, &v) in g.distinguished.iter().enumerate() {
                        if sub >> i & 1 == 1 {
                            c_set |= 1 << v;
                        }
                    }
                    let tracked = |v: usize| (d >> v & 1 == 1) != maximal;
                    let good = (0..n).all(|v| {
                        if s_mask >> v & 1 == 1 || !tracked(v) {
                            return true;
                        }
                        let c = chk.count(v, d);
                        let self_cert = if maximal { !chk.sigma[c] } else { !chk.rho[c] };
                        self_cert || g.adj[v] & c_set != 0
                    });
                    if !good {
                        continue;
                    }
                    let t: Vec<usize> = g
                        .distinguished
                        .iter()
                        .map(|&v| {
                            let flag = if tracked(v) { 1 + usize::from(g.adj[v] & c_set != 0) } else { 0 };
                            va.encode(flag, c_set >> v & 1 == 1, chk.count(v, d))
                        })
                        .collect();
                    psi[tuple.encode(&t)] += 1;
                }
            }
        }
        Mode::MaxInducedMatching => {
            let tuple = TupleAutomaton::new(MimAutomaton, k);
            dim = crate::states::SeparatorAutomaton::dim(&tuple);
            psi = vec![0u64; dim];
            'sets: for d in 0..1u64 << n {
                if !chk.ok_except(d, s_mask) {
                    continue;
                }
                // edges between two vertices outside D and outside S need a D-neighbor
                for (a, b) in g.edges() {
                    let outside = |v: usize| d >> v & 1 == 0;
                    if outside(a) && outside(b) && s_mask >> a & 1 == 0 && s_mask >> b & 1 == 0 && (g.adj[a] | g.adj[b]) & d == 0 {
                        continue 'sets;
                    }
                }
                let mut t = Vec::with_capacity(k);
                for &v in &g.distinguished {
                    let c = chk.count(v, d);
                    let s = if d >> v & 1 == 1 {
                        match c {
                            0 => 0,
                            1 => 1,
                            _ => continue 'sets,
                        }
                    } else if c >= 1 {
                        4
                    } else {
                        let owes = (0..n)
                            .any(|u| s_mask >> u & 1 == 0 && g.has_edge(v, u) && d >> u & 1 == 0 && g.adj[u] & d == 0);
                        if owes {
                            3
                        } else {
                            2
                        }
                    };
                    t.push(s);
                }
                psi[tuple.encode(&t)] += 1;
            }
        }
        Mode::MinDomPw2 => {
            if k != 2 {
                return Err(Error::Unsupported("the minimal dominating pair automaton needs two distinguished vertices".into()));
            }
            dim = mindom::STATE_COUNT;
            psi = vec![0u64; dim];
            let outside_s = |v: usize| s_mask >> v & 1 == 0;
            for d in 0..1u64 << n {
                let in_d = |v: usize| d >> v & 1 == 1;
                let cnt = |v: usize| chk.count(v, d);
                // departed vertices outside D are dominated
                if (0..n).any(|v| outside_s(v) && !in_d(v) && cnt(v) == 0) {
                    continue;
                }
                let private_of = |u: usize, x: usize| !in_d(u) && g.has_edge(u, x) && g.adj[u] & d == 1 << x;
                let own_private = |x: usize| cnt(x) == 0 || (0..n).any(|u| outside_s(u) && private_of(u, x));
                // a departed vertex of D needs a private neighbor, possibly still in S
                let valid = (0..n).all(|x| {
                    !outside_s(x) || !in_d(x) || own_private(x) || g.distinguished.iter().any(|&z| private_of(z, x))
                });
                if !valid {
                    continue;
                }
                let letter = |v: usize| -> (u8, Option<usize>) {
                    if in_d(v) {
                        if (0..n).any(|u| outside_s(u) && private_of(u, v)) {
                            (CERT, None)
                        } else if cnt(v) == 0 {
                            (SELF, None)
                        } else {
                            (LINKED, None)
                        }
                    } else if cnt(v) == 0 {
                        (FREE, None)
                    } else if cnt(v) == 1 {
                        let x = (g.adj[v] & d).trailing_zeros() as usize;
                        if outside_s(x) && !own_private(x) {
                            (PRIVATE, Some(x))
                        } else {
                            (DOM, None)
                        }
                    } else {
                        (DOM, None)
                    }
                };
                let (a, xa) = letter(g.distinguished[0]);
                let (b, xb) = letter(g.distinguished[1]);
                let shared = a == PRIVATE && b == PRIVATE && xa == xb;
                psi[mindom::encode_pair(a, b, shared)] += 1;
            }
        }
    }
    debug_assert_eq!(psi.len(), dim);
    Ok(psi)
}

/// Outcome of a cross-validation run.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "{} builds checked, all agree", self.checked)
        } else {
            write!(f, "{} builds checked, {} mismatches; first: {}", self.checked, self.mismatches.len(), self.mismatches[0])
        }
    }
}

/// Every descriptor sequence of length at most `max_len` for pathwidth k.
pub fn all_sequences(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let a = (k + 1) << k;
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for i in 0..a {
                let mut t: Vec<usize> = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A random tree (or forest, when `unions`) script with exactly `leaves` leaves.
pub fn random_tree_script(rng: &mut impl Rng, leaves: usize, unions: bool) -> TreeScript {
    if leaves <= 1 {
        return TreeScript::Leaf;
    }
    let left = rng.gen_range(1..leaves);
    let a = random_tree_script(rng, left, unions);
    let b = random_tree_script(rng, leaves - left, unions);
    if unions && rng.gen_bool(0.3) {
        TreeScript::union(a, b)
    } else {
        TreeScript::compose(a, b)
    }
}

/// Limits for [`cross_validate`].
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    /// Exhaustive sequence length for pathwidth 1; random sequence length for pathwidth 2.
    pub max_steps: usize,
    /// Number of random builds (pathwidth 2, trees, forests).
    pub samples: usize,
    pub max_leaves: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_steps: 5, samples: 500, max_leaves: 8, seed: 0x5eed }
    }
}

fn path_script_from(sys_labels: &[ExtensionDescriptor], k: usize, seq: &[usize], completion: u32) -> PathScript {
    PathScript { k, steps: seq.iter().map(|&i| sys_labels[i]).collect(), completion }
}

/// Compares operator counts with brute force on enumerated or random builds.
pub fn cross_validate(problem: &Problem, class: GraphClass, bounds: Bounds) -> Result<Report, Error> {
    problem.check_class(class)?;
    let mut report = Report::default();
    match class {
        GraphClass::Pathwidth(k) => {
            let sys = build_system(problem, k)?;
            let seqs: Vec<Vec<usize>> = if k == 1 {
                all_sequences(1, bounds.max_steps)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
                let a = sys.matrices.len();
                (0..bounds.samples)
                    .map(|_| {
                        let len = rng.gen_range(0..=bounds.max_steps);
                        (0..len).map(|_| rng.gen_range(0..a)).collect()
                    })
                    .collect()
            };
            let results: Vec<(usize, Vec<String>)> =
                seqs.par_iter().map(|seq| check_path_sequence(&sys, problem, seq)).collect::<Result<_, Error>>()?;
            for (n, m) in results {
                report.checked += n;
                report.mismatches.extend(m);
            }
        }
        GraphClass::Tree | GraphClass::Forest => {
            let sys = build_tree_system(problem, class)?;
            let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
            let scripts: Vec<TreeScript> = (0..bounds.samples)
                .map(|_| {
                    let leaves = rng.gen_range(1..=bounds.max_leaves);
                    random_tree_script(&mut rng, leaves, class == GraphClass::Forest)
                })
                .collect();
            let results: Vec<Option<String>> =
                scripts.par_iter().map(|s| check_tree_script(&sys, problem, s)).collect::<Result<_, Error>>()?;
            report.checked += results.len();
            report.mismatches.extend(results.into_iter().flatten());
        }
    }
    Ok(report)
}

fn check_path_sequence(sys: &OperatorSystem, problem: &Problem, seq: &[usize]) -> Result<(usize, Vec<String>), Error> {
    let mut bad = Vec::new();
    let mut n = 0;
    let open = build_path_graph(&path_script_from(&sys.labels, sys.k, seq, 0));
    let expected_psi: Vec<BigUint> = psi_bruteforce(&open, problem)?.into_iter().map(BigUint::from).collect();
    if sys.psi(seq) != expected_psi {
        bad.push(format!("{problem}: Ψ mismatch for sequence {seq:?}"));
    }
    for (ci, &mask) in sys.completion_labels.iter().enumerate() {
        let script = path_script_from(&sys.labels, sys.k, seq, mask);
        let g = build_completed_graph(&script);
        let expected = count_bruteforce(&g, problem)?;
        let got = sys.evaluate_count(seq, ci);
        n += 1;
        if got != BigUint::from(expected) {
            bad.push(format!("{problem}: script [{}] operator {got} oracle {expected}", script.to_string().trim().replace('\n', "; ")));
        }
    }
    Ok((n, bad))
}

fn check_tree_script(sys: &TreeSystem, problem: &Problem, script: &TreeScript) -> Result<Option<String>, Error> {
    let g = build_tree_graph(script);
    let expected = count_bruteforce(&g, problem)?;
    let got = sys.evaluate_count(script)?;
    let expected_psi: Vec<BigUint> = psi_bruteforce(&g, problem)?.into_iter().map(BigUint::from).collect();
    if sys.psi(script)? != expected_psi {
        return Ok(Some(format!("{problem}: Ψ mismatch for {script}")));
    }
    Ok((got != BigUint::from(expected)).then(|| format!("{problem}: {script} operator {got} oracle {expected}")))
}

/// Every extension descriptor of pathwidth k, in system order.
pub fn descriptors(k: usize) -> Vec<ExtensionDescriptor> {
    enumerate_extensions(k).unwrap_or_default()
}

/// Tree with root s and n pendant paths s – a_i – b_i, as a script rooted at s.
pub fn spider_script(legs: usize) -> TreeScript {
    let leg = TreeScript::compose(TreeScript::Leaf, TreeScript::Leaf);
    (0..legs).fold(TreeScript::Leaf, |acc, _| TreeScript::compose(acc, leg.clone()))
}

/// Root s joined to s_1..s_l, each s_i joined to k_i, each k_i carrying four
/// leaves. Order 6l + 1.
pub fn tpd_gadget_script(l: usize) -> TreeScript {
    let branch = TreeScript::compose(TreeScript::Leaf, TreeScript::star(4));
    (0..l).fold(TreeScript::Leaf, |acc, _| TreeScript::compose(acc, branch.clone()))
}

/// The spider with n legs of length 2: it has 2n + 1 vertices and at least
/// 2^n independent dominating sets.
pub fn ids_family(n: usize) -> Graph {
    build_tree_graph(&spider_script(n))
}

/// Three legs of length 2 around s: 7 vertices, exactly 3 perfect codes,
/// none of which contain s.
pub fn perfect_code_gadget() -> Graph {
    build_tree_graph(&spider_script(3))
}

/// Chains `copies` perfect-code gadgets by joining consecutive centers.
pub fn perfect_code_chain(copies: usize) -> TreeScript {
    let g = spider_script(3);
    (1..copies).fold(g.clone(), |acc, _| TreeScript::compose(acc, g.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, r: &str, m: &str) -> Problem {
        Problem::parse(s, r, m).unwrap()
    }

    #[test]
    fn named_counts() {
        assert_eq!(count_bruteforce(&Graph::complete(3), &p("{1}", "N", "all")).unwrap(), 4);
        assert_eq!(count_bruteforce(&Graph::path(2), &p("{0}", "{1}", "all")).unwrap(), 2);
        assert_eq!(count_bruteforce(&Graph::path(3), &p("{0}", "{0,1}", "max")).unwrap(), 3);
        assert_eq!(count_bruteforce(&Graph::path(3), &p("{0}", "{0,1}", "min")).unwrap(), 1);
        assert_eq!(count_bruteforce(&Graph::path(2), &p("{0}", "N+", "all")).unwrap(), 2);
        assert_eq!(count_bruteforce(&Graph::star(5), &p("{1}", "{1}", "all")).unwrap(), 4);
        assert_eq!(count_bruteforce(&Graph::cycle(4), &p("N", "N+", "min")).unwrap(), 6);
        assert_eq!(count_bruteforce(&Graph::complete(3), &p("{0}", "{1}", "all")).unwrap(), 3);
    }

    #[test]
    fn path_induced_matchings() {
        let im = p("{1}", "N", "all");
        let counts: Vec<u64> = (1..=5).map(|n| count_bruteforce(&Graph::path(n), &im).unwrap()).collect();
        assert_eq!(counts, vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::cycle(5);
        let text = g.to_edge_list();
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        assert!(Graph::parse_edge_list("3 1\n0 3\n").is_err());
    }

    #[test]
    fn tree_graph_from_script() {
        let s = TreeScript::parse("(compose (compose (leaf)(leaf)) (compose (leaf)(leaf)))").unwrap();
        let g = build_tree_graph(&s);
        assert_eq!(g.order(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(g.distinguished[0]).count_ones(), 2);
        let u = build_tree_graph(&TreeScript::union(TreeScript::Leaf, TreeScript::Leaf));
        assert_eq!((u.order(), u.edge_count()), (2, 0));
    }

    #[test]
    fn path_script_builds_path() {
        let s = PathScript::parse("keep=new edges=1\nkeep=new edges=1\ncomplete edges=0\n").unwrap();
        let g = build_completed_graph(&s);
        assert_eq!(g, {
            let mut h = Graph::path(3);
            h.distinguished = vec![2];
            h
        });
        let again = PathScript::parse(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn psi_examples() {
        let im = p("{1}", "N", "all");
        let mut single = Graph::new(1);
        single.distinguished = vec![0];
        assert_eq!(psi_bruteforce(&single, &im).unwrap(), vec![1, 0, 0, 1]);
        let mut p2 = Graph::path(2);
        p2.distinguished = vec![0];
        assert_eq!(psi_bruteforce(&p2, &im).unwrap(), vec![1, 1, 0, 1]);
        let mut two = Graph::new(2);
        two.distinguished = vec![0, 1];
        let all = p("N", "N", "all");
        let psi = psi_bruteforce(&two, &all).unwrap();
        assert_eq!(psi.iter().filter(|&&x| x == 1).count(), 4);
        assert_eq!(psi.iter().sum::<u64>(), 4);
    }

    #[test]
    fn ids_family_lower_bound() {
        let ids = p("{0}", "N+", "all");
        for n in 1..=5 {
            let g = ids_family(n);
            assert_eq!(g.order(), 2 * n + 1);
            assert!(count_bruteforce(&g, &ids).unwrap() >= 1 << n);
        }
    }

    #[test]
    fn tpd_gadget_counts() {
        let tpd = p("{1}", "{1}", "all");
        for l in 1..=3 {
            let g = build_tree_graph(&tpd_gadget_script(l));
            assert_eq!(g.order(), 6 * l + 1);
            assert_eq!(count_bruteforce(&g, &tpd).unwrap(), (l as u64) << (2 * (l - 1)));
        }
    }

    #[test]
    fn perfect_code_gadget_counts() {
        let pc = p("{0}", "{1}", "all");
        let g = perfect_code_gadget();
        assert_eq!(g.order(), 7);
        assert_eq!(count_bruteforce(&g, &pc).unwrap(), 3);
        let s = g.distinguished[0];
        let chk = Checker::new(&g, &pc.sigma, &pc.rho);
        assert!((0..1u64 << 7).filter(|&d| chk.ok(d)).all(|d| d >> s & 1 == 0));
        let chain = build_tree_graph(&perfect_code_chain(3));
        assert_eq!(count_bruteforce(&chain, &pc).unwrap(), 27);
    }
}
