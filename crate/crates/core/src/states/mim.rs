use super::VertexAutomaton;

/// Maximal induced matchings, with D the set of matched vertices.
///
/// States:
/// - 0: in D, no neighbor in D
/// - 1: in D, exactly one neighbor in D
/// - 2: not in D, no neighbor in D, every edge to an unmatched-and-undominated
///   vertex outside S is still fine
/// - 3: not in D, no neighbor in D, adjacent to a departed vertex that is also
///   outside D with no neighbor in D (so this vertex must gain a D-neighbor)
/// - 4: not in D, at least one neighbor in D
#[derive(Debug, Clone, Copy, Default)]
pub struct MimAutomaton;

impl MimAutomaton {
    pub fn in_d(s: usize) -> bool {
        s < 2
    }

    fn gain_d_neighbor(s: usize) -> Option<usize> {
        match s {
            0 => Some(1),
            1 => None,
            _ => Some(4),
        }
    }
}

impl VertexAutomaton for MimAutomaton {
    fn state_count(&self) -> usize {
        5
    }

    fn fresh(&self) -> Vec<usize> {
        vec![0, 2]
    }

    fn add_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let a2 = if Self::in_d(b) { Self::gain_d_neighbor(a)? } else { a };
        let b2 = if Self::in_d(a) { Self::gain_d_neighbor(b)? } else { b };
        Some((a2, b2))
    }

    fn accept(&self, s: usize) -> bool {
        matches!(s, 1 | 2 | 4)
    }

    fn after_leave(&self, departed: usize, neighbor: usize) -> usize {
        if departed == 2 && matches!(neighbor, 2 | 3) {
            3
        } else {
            neighbor
        }
    }

    fn legend(&self, s: usize) -> String {
        ["D0", "D1", "free", "owes", "dom"][s].to_string()
    }
}
