//! The pathwidth-2 automaton for minimal dominating sets (σ = ℕ, ρ = ℕ+).
//!
//! A vertex of D needs a private neighbor: itself when it has no neighbor in
//! D, or a vertex outside D whose only D-neighbor it is. Each separator vertex
//! carries one of six letters:
//!
//! - `D`: in D, already has a departed private neighbor
//! - `S`: in D, no private neighbor yet, no neighbor in D
//! - `L`: in D, no private neighbor yet, has a neighbor in D
//! - `P`: not in D, exactly one D-neighbor, which departed without a private
//!   neighbor and relies on this vertex keeping that count
//! - `d`: not in D, dominated, no obligation
//! - `F`: not in D, no D-neighbor yet
//!
//! A pair state is `6·i + j`; state 36 (π) is the pair (P, P) where both
//! vertices are candidates for the same departed vertex, at least one of
//! which must stay private.

use super::{Departing, ExtensionDescriptor, SeparatorAutomaton};

pub const STATE_COUNT: usize = 37;
pub const PI: usize = 36;
pub const LETTERS: [char; 6] = ['D', 'S', 'L', 'P', 'd', 'F'];

pub const CERT: u8 = 0;
pub const SELF: u8 = 1;
pub const LINKED: u8 = 2;
pub const PRIVATE: u8 = 3;
pub const DOM: u8 = 4;
pub const FREE: u8 = 5;

fn in_d(l: u8) -> bool {
    l <= LINKED
}

/// Pair index of two letters, with `shared` marking the π case.
pub fn encode_pair(a: u8, b: u8, shared: bool) -> usize {
    if shared {
        debug_assert!(a == PRIVATE && b == PRIVATE);
        PI
    } else {
        6 * a as usize + b as usize
    }
}

/// Working set of up to three vertices with their pending obligation groups:
/// each group is a bitmask of `P` vertices at least one of which must end
/// with exactly one D-neighbor.
#[derive(Debug, Clone)]
struct Work {
    letters: [u8; 3],
    groups: Vec<u8>,
}

impl Work {
    fn from_state(state: usize, third: u8) -> Self {
        let (a, b) = if state == PI { (PRIVATE, PRIVATE) } else { ((state / 6) as u8, (state % 6) as u8) };
        let mut groups = Vec::new();
        if state == PI {
            groups.push(0b11);
        } else {
            for (i, l) in [a, b].into_iter().enumerate() {
                if l == PRIVATE {
                    groups.push(1 << i);
                }
            }
        }
        Work { letters: [a, b, third], groups }
    }

    fn encode(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.letters[i], self.letters[j]);
        let both = (1u8 << i) | (1 << j);
        let shared = a == PRIVATE && b == PRIVATE && self.groups.iter().any(|g| g & both == both);
        encode_pair(a, b, shared)
    }

    /// Removes `z` from its group; false if that leaves the group empty.
    fn drop_member(&mut self, z: usize) -> bool {
        let bit = 1u8 << z;
        if let Some(pos) = self.groups.iter().position(|g| g & bit != 0) {
            self.groups[pos] &= !bit;
            if self.groups[pos] == 0 {
                return false;
            }
        }
        true
    }

    fn depart(&mut self, o: usize, targets: &[usize]) -> bool {
        let lo = self.letters[o];
        if in_d(lo) {
            let mut d_edge = false;
            let mut candidates = 0u8;
            for &z in targets {
                match self.letters[z] {
                    CERT | LINKED => d_edge = true,
                    SELF => {
                        d_edge = true;
                        self.letters[z] = LINKED;
                    }
                    FREE => {
                        candidates |= 1 << z;
                        self.letters[z] = DOM;
                    }
                    PRIVATE => {
                        self.letters[z] = DOM;
                        if !self.drop_member(z) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            let satisfied = lo == CERT || (lo == SELF && !d_edge);
            if !satisfied {
                if candidates == 0 {
                    return false;
                }
                for z in 0..3 {
                    if candidates >> z & 1 == 1 {
                        self.letters[z] = PRIVATE;
                    }
                }
                self.groups.push(candidates);
            }
        } else {
            let d_nbrs: Vec<usize> = targets.iter().copied().filter(|&z| in_d(self.letters[z])).collect();
            match lo {
                FREE => {
                    if d_nbrs.is_empty() {
                        return false;
                    }
                    if let [z] = d_nbrs[..] {
                        self.letters[z] = CERT;
                    }
                }
                PRIVATE => {
                    if !d_nbrs.is_empty() {
                        if !self.drop_member(o) {
                            return false;
                        }
                    } else {
                        let bit = 1u8 << o;
                        let pos = self.groups.iter().position(|g| g & bit != 0).expect("P vertex without group");
                        let g = self.groups.remove(pos);
                        for m in 0..3 {
                            if m != o && g >> m & 1 == 1 {
                                self.letters[m] = DOM;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        let bit = 1u8 << o;
        for g in self.groups.iter_mut() {
            *g &= !bit;
        }
        self.groups.retain(|&g| g != 0);
        true
    }
}

/// Separator automaton for minimal dominating sets on pathwidth-2 graphs.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinDomPw2;

impl MinDomPw2 {
    pub fn fresh_letters() -> [u8; 2] {
        [SELF, FREE]
    }
}

impl SeparatorAutomaton for MinDomPw2 {
    fn k(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        STATE_COUNT
    }

    fn initial(&self) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for a in Self::fresh_letters() {
            for b in Self::fresh_letters() {
                out.push((encode_pair(a, b, false), 1));
            }
        }
        out.sort();
        out
    }

    fn successors(&self, state: usize, desc: &ExtensionDescriptor, out: &mut Vec<usize>) {
        for fresh in Self::fresh_letters() {
            let mut w = Work::from_state(state, fresh);
            let o = desc.departing_vertex(2);
            let targets: Vec<usize> =
                (0..2).filter(|i| desc.edges >> i & 1 == 1).map(|i| desc.position_vertex(2, i)).collect();
            if !w.depart(o, &targets) {
                continue;
            }
            // a departing old vertex is replaced in place; drop the third slot's groups
            let (i, j) = (desc.position_vertex(2, 0), desc.position_vertex(2, 1));
            debug_assert!(desc.departing != Departing::New || (i, j) == (0, 1));
            out.push(w.encode(i, j));
        }
    }

    fn completion_accepts(&self, state: usize, edges: u32) -> bool {
        let mut w = Work::from_state(state, DOM);
        let first: Vec<usize> = if edges & 1 == 1 { vec![1] } else { Vec::new() };
        w.depart(0, &first) && w.depart(1, &[])
    }

    fn legend(&self, state: usize) -> String {
        if state == PI {
            "π".to_string()
        } else {
            format!("({},{})", LETTERS[state / 6], LETTERS[state % 6])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::enumerate_extensions;

    #[test]
    fn initial_states() {
        let init: Vec<usize> = MinDomPw2.initial().into_iter().map(|(s, _)| s).collect();
        assert_eq!(init, vec![7, 11, 31, 35]);
    }

    #[test]
    fn completion_of_two_isolated_vertices() {
        // two isolated vertices: both must be in D
        let acc: Vec<usize> = MinDomPw2.initial().into_iter().map(|(s, _)| s).filter(|&s| MinDomPw2.completion_accepts(s, 0)).collect();
        assert_eq!(acc, vec![7]);
        // an edge: exactly one endpoint in D
        let acc: Vec<usize> = MinDomPw2.initial().into_iter().map(|(s, _)| s).filter(|&s| MinDomPw2.completion_accepts(s, 1)).collect();
        assert_eq!(acc, vec![11, 31]);
    }

    #[test]
    fn pi_is_reachable() {
        // (L, F) with the L vertex leaving towards both F vertices → π
        let state = encode_pair(LINKED, FREE, false);
        let descs = enumerate_extensions(2).unwrap();
        let d = descs.iter().find(|d| d.departing == Departing::Position(0) && d.edges == 0b11).unwrap();
        let mut out = Vec::new();
        MinDomPw2.successors(state, d, &mut out);
        assert!(out.contains(&PI));
    }
}
