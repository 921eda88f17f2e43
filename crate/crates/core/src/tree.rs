//! Bilinear systems for trees and forests built from 1-distinguished graphs.
//!
//! Composition joins the roots a₁ (kept) and a₂ (which leaves); union puts two
//! graphs side by side and keeps a₁. Each map is stored as the list of
//! triples (out, s₁, s₂) meaning Φ(e_{s₁}, e_{s₂}) has a 1 at `out`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::sigma_rho::{GraphClass, Mode, Problem};
use crate::states::{vertex_automaton, VertexAutomaton};

/// Sparse 0/1 tensor of a bilinear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bilinear {
    pub entries: Vec<(usize, usize, usize)>,
}

impl Bilinear {
    pub fn apply_big(&self, dim: usize, u: &[BigUint], w: &[BigUint]) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); dim];
        for &(i, a, b) in &self.entries {
            if !u[a].is_zero() && !w[b].is_zero() {
                out[i] += &u[a] * &w[b];
            }
        }
        out
    }

    pub fn apply_u64(&self, dim: usize, u: &[u64], w: &[u64]) -> Vec<u64> {
        let mut out = vec![0; dim];
        for &(i, a, b) in &self.entries {
            out[i] += u[a] * w[b];
        }
        out
    }

    /// The matrix of w ↦ Φ(u, w) for a fixed u, row-major.
    pub fn left_fixed(&self, dim: usize, u: &[u64]) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; dim]; dim];
        for &(i, a, b) in &self.entries {
            m[i][b] += u[a];
        }
        m
    }

    /// The matrix of u ↦ Φ(u, w) for a fixed w, row-major.
    pub fn right_fixed(&self, dim: usize, w: &[u64]) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; dim]; dim];
        for &(i, a, b) in &self.entries {
            m[i][a] += w[b];
        }
        m
    }

    fn project(&self, keep: &[usize], old_dim: usize) -> Bilinear {
        let mut pos = vec![usize::MAX; old_dim];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let mut entries: Vec<(usize, usize, usize)> = self
            .entries
            .iter()
            .filter(|&&(i, a, b)| pos[i] != usize::MAX && pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(i, a, b)| (pos[i], pos[a], pos[b]))
            .collect();
        entries.sort_unstable();
        Bilinear { entries }
    }
}

#[derive(Debug, Clone)]
pub struct TreeSystem {
    pub class: GraphClass,
    pub phi: Bilinear,
    /// Present for forests.
    pub delta: Option<Bilinear>,
    pub initial: Vec<u64>,
    pub accept: Vec<u64>,
    pub index_map: Vec<usize>,
    pub legends: Vec<String>,
}

impl TreeSystem {
    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    /// The maps that generate the class: Φ, plus Δ for forests.
    pub fn maps(&self) -> Vec<&Bilinear> {
        std::iter::once(&self.phi).chain(self.delta.as_ref()).collect()
    }

    pub fn canonical_text(&self) -> String {
        let mut s = format!("{}\ndim {}\nv {:?}\np {:?}\n", self.class, self.dim(), self.initial, self.accept);
        s.push_str(&format!("phi {:?}\n", self.phi.entries));
        if let Some(d) = &self.delta {
            s.push_str(&format!("delta {:?}\n", d.entries));
        }
        s
    }

    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// Ψ of the graph built by `script`.
    pub fn psi(&self, script: &TreeScript) -> Result<Vec<BigUint>, Error> {
        Ok(match script {
            TreeScript::Leaf => self.initial.iter().map(|&v| BigUint::from(v)).collect(),
            TreeScript::Compose(a, b) => {
                let (u, w) = (self.psi(a)?, self.psi(b)?);
                self.phi.apply_big(self.dim(), &u, &w)
            }
            TreeScript::Union(a, b) => {
                let delta = self
                    .delta
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("union is not available in a tree system".into()))?;
                let (u, w) = (self.psi(a)?, self.psi(b)?);
                delta.apply_big(self.dim(), &u, &w)
            }
        })
    }

    pub fn evaluate_count(&self, script: &TreeScript) -> Result<BigUint, Error> {
        let psi = self.psi(script)?;
        Ok(psi.iter().zip(&self.accept).map(|(x, &p)| x * p).sum())
    }

    /// Projects on coordinates that are both accessible and co-accessible.
    pub fn prune(&self) -> TreeSystem {
        let m = self.dim();
        let maps = self.maps();
        let mut acc: Vec<bool> = self.initial.iter().map(|&v| v != 0).collect();
        loop {
            let mut changed = false;
            for map in &maps {
                for &(i, a, b) in &map.entries {
                    if acc[a] && acc[b] && !acc[i] {
                        acc[i] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut co: Vec<bool> = self.accept.iter().map(|&p| p != 0).collect();
        loop {
            let mut changed = false;
            for map in &maps {
                for &(i, a, b) in &map.entries {
                    if !co[i] {
                        continue;
                    }
                    if acc[b] && !co[a] {
                        co[a] = true;
                        changed = true;
                    }
                    if acc[a] && !co[b] {
                        co[b] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..m).filter(|&i| acc[i] && co[i]).collect();
        TreeSystem {
            class: self.class,
            phi: self.phi.project(&keep, m),
            delta: self.delta.as_ref().map(|d| d.project(&keep, m)),
            initial: keep.iter().map(|&i| self.initial[i]).collect(),
            accept: keep.iter().map(|&i| self.accept[i]).collect(),
            index_map: keep.iter().map(|&i| self.index_map[i]).collect(),
            legends: keep.iter().map(|&i| self.legends[i].clone()).collect(),
        }
    }
}

/// Builds the raw tree (Φ only) or forest (Φ and Δ) system.
pub fn build_tree_system(problem: &Problem, class: GraphClass) -> Result<TreeSystem, Error> {
    if !matches!(class, GraphClass::Tree | GraphClass::Forest) {
        return Err(Error::Invalid(format!("{class} is not a tree class")));
    }
    if matches!(problem.mode, Mode::MaxInducedMatching | Mode::MinDomPw2) {
        return Err(Error::Unsupported(format!("mode {} has no tree automaton", problem.mode)));
    }
    let va = vertex_automaton(problem).expect("per-vertex automaton");
    Ok(build_from_vertex_automaton(va.as_ref(), class))
}

pub fn build_from_vertex_automaton(va: &dyn VertexAutomaton, class: GraphClass) -> TreeSystem {
    let n = va.state_count();
    let mut phi = Vec::new();
    let mut delta = Vec::new();
    for s1 in 0..n {
        for s2 in 0..n {
            if let Some((a1, a2)) = va.add_edge(s1, s2) {
                if va.accept(a2) {
                    phi.push((va.after_leave(a2, a1), s1, s2));
                }
            }
            if va.accept(s2) {
                delta.push((s1, s1, s2));
            }
        }
    }
    phi.sort_unstable();
    delta.sort_unstable();
    let mut initial = vec![0; n];
    for s in va.fresh() {
        initial[s] += 1;
    }
    TreeSystem {
        class,
        phi: Bilinear { entries: phi },
        delta: (class == GraphClass::Forest).then_some(Bilinear { entries: delta }),
        initial,
        accept: (0..n).map(|s| u64::from(va.accept(s))).collect(),
        index_map: (0..n).collect(),
        legends: (0..n).map(|s| va.legend(s)).collect(),
    }
}

/// A tree or forest build script: `(leaf)`, `(compose A B)`, `(union A B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeScript {
    Leaf,
    Compose(Box<TreeScript>, Box<TreeScript>),
    Union(Box<TreeScript>, Box<TreeScript>),
}

impl TreeScript {
    pub fn compose(a: TreeScript, b: TreeScript) -> Self {
        TreeScript::Compose(Box::new(a), Box::new(b))
    }

    pub fn union(a: TreeScript, b: TreeScript) -> Self {
        TreeScript::Union(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeScript::Leaf => 1,
            TreeScript::Compose(a, b) | TreeScript::Union(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn uses_union(&self) -> bool {
        match self {
            TreeScript::Leaf => false,
            TreeScript::Compose(a, b) => a.uses_union() || b.uses_union(),
            TreeScript::Union(..) => true,
        }
    }

    /// A star: the root composed with `leaves` pendant vertices.
    pub fn star(leaves: usize) -> Self {
        (0..leaves).fold(TreeScript::Leaf, |acc, _| TreeScript::compose(acc, TreeScript::Leaf))
    }

    /// A path on `n ≥ 1` vertices rooted at an end.
    pub fn path(n: usize) -> Self {
        let mut s = TreeScript::Leaf;
        for _ in 1..n {
            s = TreeScript::compose(TreeScript::Leaf, s);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let tokens: Vec<String> = text
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut pos = 0;
        let s = parse_sexpr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Syntax("trailing tokens after tree script".into()));
        }
        Ok(s)
    }
}

fn parse_sexpr(tokens: &[String], pos: &mut usize) -> Result<TreeScript, Error> {
    let expect = |pos: &mut usize, t: &str| -> Result<(), Error> {
        if tokens.get(*pos).map(String::as_str) != Some(t) {
            return Err(Error::Syntax(format!("expected `{t}` in tree script at token {}", *pos)));
        }
        *pos += 1;
        Ok(())
    };
    expect(pos, "(")?;
    let head = tokens.get(*pos).cloned().ok_or_else(|| Error::Syntax("unexpected end of tree script".into()))?;
    *pos += 1;
    let node = match head.as_str() {
        "leaf" => TreeScript::Leaf,
        "compose" | "union" => {
            let a = parse_sexpr(tokens, pos)?;
            let b = parse_sexpr(tokens, pos)?;
            if head == "compose" {
                TreeScript::compose(a, b)
            } else {
                TreeScript::union(a, b)
            }
        }
        other => return Err(Error::Syntax(format!("unknown tree operation `{other}`"))),
    };
    expect(pos, ")")?;
    Ok(node)
}

impl fmt::Display for TreeScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeScript::Leaf => f.write_str("(leaf)"),
            TreeScript::Compose(a, b) => write!(f, "(compose {a} {b})"),
            TreeScript::Union(a, b) => write!(f, "(union {a} {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids() -> Problem {
        Problem::parse("{0}", "N+", "all").unwrap()
    }

    #[test]
    fn independent_dominating_reduced_maps() {
        let sys = build_tree_system(&ids(), GraphClass::Forest).unwrap().prune();
        assert_eq!(sys.dim(), 3);
        assert_eq!(sys.initial, vec![1, 1, 0]);
        // Φ(u,v) = (u0(v1+v2), u1 v2, u1 v0 + u2(v0+v2))
        let mut expected = vec![(0, 0, 1), (0, 0, 2), (1, 1, 2), (2, 1, 0), (2, 2, 0), (2, 2, 2)];
        expected.sort();
        assert_eq!(sys.phi.entries, expected);
        // Δ(u,v) = (u0(v0+v2), u1(v0+v2), u2(v0+v2))
        let mut expected = vec![(0, 0, 0), (0, 0, 2), (1, 1, 0), (1, 1, 2), (2, 2, 0), (2, 2, 2)];
        expected.sort();
        assert_eq!(sys.delta.unwrap().entries, expected);
    }

    #[test]
    fn p2_block_matrix() {
        let sys = build_tree_system(&ids(), GraphClass::Tree).unwrap().prune();
        let p2 = sys.psi(&TreeScript::path(2)).unwrap();
        let p2: Vec<u64> = p2.iter().map(|x| x.try_into().unwrap()).collect();
        let m = sys.phi.right_fixed(sys.dim(), &p2);
        assert_eq!(m, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 2]]);
    }

    #[test]
    fn small_counts() {
        let sys = build_tree_system(&ids(), GraphClass::Forest).unwrap();
        assert_eq!(sys.evaluate_count(&TreeScript::path(2)).unwrap(), BigUint::from(2u32));
        let two = TreeScript::union(TreeScript::Leaf, TreeScript::Leaf);
        assert_eq!(sys.evaluate_count(&two).unwrap(), BigUint::from(1u32));
        let tree_only = build_tree_system(&ids(), GraphClass::Tree).unwrap();
        assert!(tree_only.evaluate_count(&two).is_err());
    }

    #[test]
    fn composition_is_not_commutative() {
        let sys = build_tree_system(&ids(), GraphClass::Tree).unwrap().prune();
        let u = vec![1, 0, 0];
        let w = vec![0, 1, 0];
        assert_ne!(sys.phi.apply_u64(3, &u, &w), sys.phi.apply_u64(3, &w, &u));
    }

    #[test]
    fn script_parse_roundtrip() {
        let text = "(compose (compose (leaf)(leaf)) (compose (leaf)(leaf)))";
        let s = TreeScript::parse(text).unwrap();
        assert_eq!(s.leaves(), 4);
        assert_eq!(TreeScript::parse(&s.to_string()).unwrap(), s);
        assert!(TreeScript::parse("(leaf").is_err());
        assert!(TreeScript::parse("(graft (leaf) (leaf))").is_err());
    }
}
