use super::VertexAutomaton;
use crate::sigma_rho::{joint_period, tau, Mode, Problem, RecognizableSet};

/// States for counting all (σ,ρ)-dominating sets: the τ-class of |N(v) ∩ D|,
/// on the σ track for v ∈ D and on the ρ track (offset by p_σ+q_σ) otherwise.
#[derive(Debug, Clone)]
pub struct CountingAutomaton {
    sigma: RecognizableSet,
    rho: RecognizableSet,
    split: usize,
}

impl CountingAutomaton {
    pub fn new(problem: &Problem) -> Self {
        CountingAutomaton { sigma: problem.sigma.clone(), rho: problem.rho.clone(), split: problem.sigma.width() }
    }

    pub fn encode(&self, in_d: bool, count: usize) -> usize {
        if in_d {
            tau(self.sigma.preperiod(), self.sigma.period(), count)
        } else {
            self.split + tau(self.rho.preperiod(), self.rho.period(), count)
        }
    }

    pub fn in_d(&self, s: usize) -> bool {
        s < self.split
    }

    fn increment(&self, s: usize) -> usize {
        if s < self.split {
            tau(self.sigma.preperiod(), self.sigma.period(), s + 1)
        } else {
            self.split + tau(self.rho.preperiod(), self.rho.period(), s - self.split + 1)
        }
    }
}

impl VertexAutomaton for CountingAutomaton {
    fn state_count(&self) -> usize {
        self.split + self.rho.width()
    }

    fn fresh(&self) -> Vec<usize> {
        vec![0, self.split]
    }

    fn add_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let a2 = if self.in_d(b) { self.increment(a) } else { a };
        let b2 = if self.in_d(a) { self.increment(b) } else { b };
        Some((a2, b2))
    }

    fn accept(&self, s: usize) -> bool {
        if s < self.split {
            self.sigma.table()[s]
        } else {
            self.rho.table()[s - self.split]
        }
    }

    fn legend(&self, s: usize) -> String {
        if s < self.split {
            format!("D:{s}")
        } else {
            format!("out:{}", s - self.split)
        }
    }
}

/// States for 1-minimal (or, dually, 1-maximal) sets: the triple
/// (flag, certificate bit, τ-class of |N(v) ∩ D|) under the joint period.
///
/// The flag is 0 for untracked vertices and 1 or 2 for tracked ones, 2 meaning
/// a neighbor is a certificate. Tracked vertices are those of D (minimal) or
/// of V ∖ D (maximal).
#[derive(Debug, Clone)]
pub struct CertificateAutomaton {
    sigma: RecognizableSet,
    rho: RecognizableSet,
    p: usize,
    q: usize,
    maximal: bool,
}

impl CertificateAutomaton {
    pub fn new(problem: &Problem) -> Self {
        let (p, q) = joint_period(&problem.sigma, &problem.rho);
        CertificateAutomaton {
            sigma: problem.sigma.clone(),
            rho: problem.rho.clone(),
            p,
            q,
            maximal: problem.mode == Mode::Max,
        }
    }

    fn width(&self) -> usize {
        self.p + self.q
    }

    pub fn encode(&self, flag: usize, cert: bool, count: usize) -> usize {
        (flag * 2 + cert as usize) * self.width() + tau(self.p, self.q, count)
    }

    pub fn decode(&self, s: usize) -> (usize, bool, usize) {
        let w = self.width();
        let t = s % w;
        let fc = s / w;
        (fc / 2, fc % 2 == 1, t)
    }

    pub fn is_tracked_member(&self, in_d: bool) -> bool {
        in_d != self.maximal
    }

    pub fn in_d(&self, s: usize) -> bool {
        let (f, _, _) = self.decode(s);
        (f > 0) != self.maximal
    }

    /// Whether a vertex with count class `t` belongs to the certificate set.
    pub fn certificate(&self, in_d: bool, t: usize) -> bool {
        let set = if in_d { &self.sigma } else { &self.rho };
        if self.maximal {
            !set.contains(t + 1)
        } else {
            t == 0 || !set.contains(t - 1)
        }
    }

    /// Whether a tracked vertex with count class `t` certifies itself.
    pub fn self_certified(&self, t: usize) -> bool {
        if self.maximal {
            !self.sigma.contains(t)
        } else {
            !self.rho.contains(t)
        }
    }
}

impl VertexAutomaton for CertificateAutomaton {
    fn state_count(&self) -> usize {
        6 * self.width()
    }

    fn fresh(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for in_d in [true, false] {
            let flag = usize::from(self.is_tracked_member(in_d));
            for cert in [false, true] {
                out.push(self.encode(flag, cert, 0));
            }
        }
        out.sort_unstable();
        out
    }

    fn add_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (fa, ca, ta) = self.decode(a);
        let (fb, cb, tb) = self.decode(b);
        let update = |f: usize, c: bool, t: usize, other_in_d: bool, other_cert: bool| {
            let t = if other_in_d { tau(self.p, self.q, t + 1) } else { t };
            let f = if f == 1 && other_cert { 2 } else { f };
            self.encode(f, c, t)
        };
        Some((update(fa, ca, ta, self.in_d(b), cb), update(fb, cb, tb, self.in_d(a), ca)))
    }

    fn accept(&self, s: usize) -> bool {
        let (f, c, t) = self.decode(s);
        let in_d = self.in_d(s);
        let set = if in_d { &self.sigma } else { &self.rho };
        set.contains(t) && c == self.certificate(in_d, t) && (f != 1 || self.self_certified(t))
    }

    fn legend(&self, s: usize) -> String {
        let (f, c, t) = self.decode(s);
        format!("({f},{},{t})", c as u8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_fresh_vector() {
        let p = Problem::parse("{1}", "N", "all").unwrap();
        let a = CountingAutomaton::new(&p);
        assert_eq!(a.state_count(), 4);
        assert_eq!(a.fresh(), vec![0, 3]);
        let p = Problem::parse("{1}", "{1}", "all").unwrap();
        let a = CountingAutomaton::new(&p);
        assert_eq!(a.state_count(), 6);
        assert_eq!(a.fresh(), vec![0, 3]);
    }

    #[test]
    fn certificate_encoding_roundtrip() {
        let p = Problem::parse("N", "N+", "min").unwrap();
        let a = CertificateAutomaton::new(&p);
        for s in 0..a.state_count() {
            let (f, c, t) = a.decode(s);
            assert_eq!(a.encode(f, c, t), s);
        }
        assert_eq!(a.fresh().len(), 4);
    }

    #[test]
    fn minimal_dominating_single_vertex() {
        // a lone vertex must be in D, is self-certified, and its certificate bit is set
        let p = Problem::parse("N", "N+", "min").unwrap();
        let a = CertificateAutomaton::new(&p);
        let accepted: Vec<usize> = a.fresh().into_iter().filter(|&s| a.accept(s)).collect();
        assert_eq!(accepted, vec![a.encode(1, true, 0)]);
    }
}
