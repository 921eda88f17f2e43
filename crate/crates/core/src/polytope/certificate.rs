//! Certificate files and their independent verification.
//!
//! ```text
//! FIELD
//! minpoly: [-1, 0, -1, 1]; interval: 7/5 3/2
//! ALPHA
//! a
//! PROBLEM
//! sigma {1}
//! rho N
//! mode all
//! class pw1
//! k 1
//! SYSTEM-HASH
//! dim 3
//! sha256 <hex>
//! SEEDS
//! X
//! <coordinate>, <coordinate>, <coordinate>
//! WITNESSES
//! <obligation>: <index>=<λ> | <index>=<λ>
//! END
//! ```
//!
//! Obligation 0 is the initial vector (v for pathwidth, v/α for trees and
//! forests). Pathwidth obligation 1 + i·|A| + k is (1/α)·M_k·x_i; tree
//! obligation 1 + (t·|X| + i)·|X| + j is map t applied to (x_i, x_j).

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::membership::{check_witness, member_refs, Membership};
use super::{apply_bilinear, apply_matrix, BoundProblem, BoundSystem, Point};
use crate::error::Error;
use crate::numbers::{format_field_header, parse_field_header, AlgebraicField, AlgebraicNumber};
use crate::sigma_rho::{parse_set, GraphClass, Mode, Problem};

#[derive(Debug, Clone)]
pub struct Witness {
    pub obligation: usize,
    pub lambda: Vec<(usize, AlgebraicNumber)>,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub alpha: AlgebraicNumber,
    pub problem: Problem,
    pub class: GraphClass,
    pub system_hash: String,
    pub dim: usize,
    pub seeds: Vec<Vec<AlgebraicNumber>>,
    pub points: Vec<Vec<AlgebraicNumber>>,
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// Every count on order-n graphs of the class is at most constant·αⁿ.
    Verified { constant: AlgebraicNumber, obligations: usize },
    Refuted(String),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

fn format_vector(v: &[AlgebraicNumber]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

/// Parses a comma-separated vector of field elements.
pub fn parse_vector(field: &Arc<AlgebraicField>, line: &str) -> Result<Vec<AlgebraicNumber>, Error> {
    line.split(',').map(|c| field.parse_element(c.trim()).map_err(Error::from)).collect()
}

/// Parses a seed file: one vector per line, `#` comments.
pub fn parse_seeds(field: &Arc<AlgebraicField>, text: &str) -> Result<Vec<Vec<AlgebraicNumber>>, Error> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_vector(field, l))
        .collect()
}

const SECTIONS: [&str; 8] = ["FIELD", "ALPHA", "PROBLEM", "SYSTEM-HASH", "SEEDS", "X", "WITNESSES", "END"];

impl Certificate {
    pub fn field(&self) -> &Arc<AlgebraicField> {
        self.alpha.field()
    }

    pub fn k(&self) -> usize {
        match self.class {
            GraphClass::Pathwidth(k) => k,
            _ => 1,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "FIELD\n{}", format_field_header(self.field()));
        let _ = writeln!(s, "ALPHA\n{}", self.alpha);
        let _ = writeln!(
            s,
            "PROBLEM\nsigma {}\nrho {}\nmode {}\nclass {}\nk {}",
            self.problem.sigma,
            self.problem.rho,
            self.problem.mode,
            self.class,
            self.k()
        );
        let _ = writeln!(s, "SYSTEM-HASH\ndim {}\nsha256 {}", self.dim, self.system_hash);
        s.push_str("SEEDS\n");
        for v in &self.seeds {
            let _ = writeln!(s, "{}", format_vector(v));
        }
        s.push_str("X\n");
        for v in &self.points {
            let _ = writeln!(s, "{}", format_vector(v));
        }
        if let Some(ws) = &self.witnesses {
            s.push_str("WITNESSES\n");
            for w in ws {
                let parts: Vec<String> = w.lambda.iter().map(|(j, l)| format!("{j}={l}")).collect();
                let _ = writeln!(s, "{}: {}", w.obligation, parts.join(" | "));
            }
        }
        s.push_str("END\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let bad = |m: String| Error::Certificate(m);
        let mut sections: Vec<(&str, Vec<&str>)> = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if SECTIONS.contains(&line) {
                sections.push((line, Vec::new()));
            } else if let Some(last) = sections.last_mut() {
                last.1.push(line);
            } else {
                return Err(bad(format!("content before the first section: `{line}`")));
            }
        }
        let order: Vec<&str> = sections.iter().map(|(h, _)| *h).collect();
        let expected: &[&str] = if order.contains(&"WITNESSES") { &SECTIONS } else { &["FIELD", "ALPHA", "PROBLEM", "SYSTEM-HASH", "SEEDS", "X", "END"] };
        if order != expected {
            return Err(bad(format!("sections must be {}", expected.join(", "))));
        }
        let body = |name: &str| sections.iter().find(|(h, _)| *h == name).map(|(_, b)| b.clone()).unwrap_or_default();
        let single = |name: &str| -> Result<&str, Error> {
            let b = body(name);
            match b.as_slice() {
                [one] => Ok(*one),
                _ => Err(Error::Certificate(format!("section {name} needs exactly one line"))),
            }
        };
        let field = parse_field_header(single("FIELD")?)?;
        let alpha = field.parse_element(single("ALPHA")?)?;
        let kv = |name: &str| -> Result<Vec<(String, String)>, Error> {
            body(name)
                .iter()
                .map(|l| {
                    l.split_once(' ')
                        .map(|(k, v)| (k.to_string(), v.trim().to_string()))
                        .ok_or_else(|| Error::Certificate(format!("expected `key value` in {name}: `{l}`")))
                })
                .collect()
        };
        let get = |pairs: &[(String, String)], key: &str| -> Result<String, Error> {
            pairs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Certificate(format!("missing `{key}`")))
        };
        let prob = kv("PROBLEM")?;
        let mode: Mode = get(&prob, "mode")?.parse()?;
        let problem = Problem::new(parse_set(&get(&prob, "sigma")?)?, parse_set(&get(&prob, "rho")?)?, mode)?;
        let class: GraphClass = get(&prob, "class")?.parse()?;
        let hash = kv("SYSTEM-HASH")?;
        let dim: usize = get(&hash, "dim")?.parse().map_err(|_| bad("bad dim".into()))?;
        let system_hash = get(&hash, "sha256")?;
        let seeds = body("SEEDS").iter().map(|l| parse_vector(&field, l)).collect::<Result<Vec<_>, _>>()?;
        let points = body("X").iter().map(|l| parse_vector(&field, l)).collect::<Result<Vec<_>, _>>()?;
        let witnesses = if order.contains(&"WITNESSES") {
            let mut ws = Vec::new();
            for l in body("WITNESSES") {
                let (o, rest) = l.split_once(':').ok_or_else(|| bad(format!("bad witness line `{l}`")))?;
                let obligation = o.trim().parse().map_err(|_| bad(format!("bad obligation index `{o}`")))?;
                let mut lambda = Vec::new();
                for part in rest.split('|') {
                    let (j, v) = part.split_once('=').ok_or_else(|| bad(format!("bad witness term `{part}`")))?;
                    let j = j.trim().parse().map_err(|_| bad(format!("bad point index `{j}`")))?;
                    lambda.push((j, field.parse_element(v.trim())?));
                }
                ws.push(Witness { obligation, lambda });
            }
            Some(ws)
        } else {
            None
        };
        for v in seeds.iter().chain(&points) {
            if v.len() != dim {
                return Err(bad(format!("vector of length {} in a dimension-{dim} certificate", v.len())));
            }
        }
        Ok(Certificate { alpha, problem, class, system_hash, dim, seeds, points, witnesses })
    }

    /// Computes and stores a membership witness for every obligation.
    pub fn attach_witnesses(&mut self) -> Result<(), Error> {
        let bp = BoundProblem::new(&self.problem, self.class)?;
        let points: Vec<Point> = self.points.iter().cloned().map(Point::new).collect();
        let refs: Vec<&Point> = points.iter().collect();
        let obligations = obligations(&bp, &self.alpha, &points);
        let found: Vec<Option<Witness>> = obligations
            .par_iter()
            .enumerate()
            .map(|(i, y)| match member_refs(&refs, y) {
                Membership::Inside(lambda) => Some(Witness { obligation: i, lambda }),
                Membership::Outside => None,
            })
            .collect();
        let ws: Option<Vec<Witness>> = found.into_iter().collect();
        self.witnesses = Some(ws.ok_or_else(|| Error::Invalid("some obligation has no witness".into()))?);
        Ok(())
    }
}

/// Every closure obligation, in the documented order.
pub fn obligations(bp: &BoundProblem, alpha: &AlgebraicNumber, x: &[Point]) -> Vec<Point> {
    let field = alpha.field();
    let inv = alpha.inv();
    let v: Vec<AlgebraicNumber> = bp.system.initial().iter().map(|&c| field.from_i64(c as i64)).collect();
    let mut out = Vec::new();
    match &bp.system {
        BoundSystem::Path(sys) => {
            out.push(Point::new(v));
            let rest: Vec<Point> = x
                .par_iter()
                .flat_map_iter(|p| sys.matrices.iter().map(|m| Point::new(apply_matrix(m, &p.coords, &inv))).collect::<Vec<_>>())
                .collect();
            out.extend(rest);
        }
        BoundSystem::Tree(sys) => {
            out.push(Point::new(v.iter().map(|c| c * &inv).collect()));
            let maps = sys.maps();
            let n = x.len();
            let jobs: Vec<(usize, usize, usize)> =
                (0..maps.len()).flat_map(|t| (0..n).flat_map(move |i| (0..n).map(move |j| (t, i, j)))).collect();
            let rest: Vec<Point> =
                jobs.par_iter().map(|&(t, i, j)| Point::new(apply_bilinear(maps[t], &x[i].coords, &x[j].coords))).collect();
            out.extend(rest);
        }
    }
    out
}

/// Re-derives the system from the problem statement and re-checks every
/// hypothesis exactly; stored witnesses are only cross-checked.
pub fn verify_certificate(cert: &Certificate) -> Result<Verdict, Error> {
    let refute = |m: String| Ok(Verdict::Refuted(m));
    if !cert.alpha.is_positive() {
        return refute("α is not positive".into());
    }
    let bp = BoundProblem::new(&cert.problem, cert.class)?;
    if bp.system.dim() != cert.dim {
        return refute(format!("system dimension is {}, certificate says {}", bp.system.dim(), cert.dim));
    }
    if bp.system.fingerprint() != cert.system_hash {
        return refute("system fingerprint does not match the regenerated operators".into());
    }
    if cert.points.is_empty() {
        return refute("X is empty".into());
    }
    let points: Vec<Point> = cert.points.iter().cloned().map(Point::new).collect();
    if let Some(i) = points.iter().position(|p| p.dim() != cert.dim || !p.is_nonnegative()) {
        return refute(format!("point {i} is not a nonnegative vector of dimension {}", cert.dim));
    }
    let refs: Vec<&Point> = points.iter().collect();
    let obligations = obligations(&bp, &cert.alpha, &points);
    if let Some(ws) = &cert.witnesses {
        for w in ws {
            let Some(y) = obligations.get(w.obligation) else {
                return refute(format!("witness for unknown obligation {}", w.obligation));
            };
            if !check_witness(&refs, y, &w.lambda) {
                return refute(format!("stored witness for obligation {} is invalid", w.obligation));
            }
        }
    }
    let failed = obligations.par_iter().position_first(|y| !member_refs(&refs, y).is_inside());
    if let Some(i) = failed {
        let what = if i == 0 { "the initial vector".to_string() } else { format!("obligation {i}") };
        return refute(format!("{what} lies outside conv_≤(X)"));
    }
    let constant = match &bp.system {
        BoundSystem::Tree(sys) if cert.class == GraphClass::Tree => points
            .iter()
            .map(|p| {
                p.coords
                    .iter()
                    .zip(&sys.accept)
                    .filter(|(_, &w)| w != 0)
                    .fold(cert.field().zero(), |acc, (c, &w)| &acc + &c.scale_int(w as i64))
            })
            .max()
            .expect("X is nonempty"),
        _ => cert.field().one(),
    };
    Ok(Verdict::Verified { constant, obligations: obligations.len() })
}
