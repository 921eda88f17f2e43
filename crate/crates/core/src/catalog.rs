//! Named problems, growth rates and seed sets with known invariant polytopes.

use std::sync::Arc;

use crate::error::Error;
use crate::numbers::{parse_alpha_spec, AlgebraicField, AlgebraicNumber};
use crate::polytope::certificate::{verify_certificate, Certificate, Verdict};
use crate::polytope::{saturate, Limits};
use crate::polytope::BoundProblem;
use crate::sigma_rho::{GraphClass, Problem};

/// (name, σ, ρ, mode) of the problems used throughout.
pub const PROBLEMS: &[(&str, &str, &str, &str)] = &[
    ("induced-matching", "{1}", "N", "all"),
    ("independent-dominating", "{0}", "N+", "all"),
    ("perfect-code", "{0}", "{1}", "all"),
    ("total-perfect-dominating", "{1}", "{1}", "all"),
    ("minimal-dominating", "N", "N+", "min"),
    ("minimal-perfect-dominating", "N", "{1}", "min"),
    ("minimal-total-dominating", "N+", "N+", "min"),
    ("maximal-strong-stable", "{0}", "{0,1}", "max"),
    ("maximal-induced-matching", "{1}", "N", "mim"),
    ("minimal-dominating-pw2", "N", "N+", "mindom-pw2"),
];

pub fn problem(name: &str) -> Result<Problem, Error> {
    let (_, s, r, m) = PROBLEMS
        .iter()
        .find(|(n, ..)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("unknown catalog problem `{name}`")))?;
    Problem::parse(s, r, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Quick,
    Standard,
    Long,
}

/// Initial points added to X besides the initial vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeds {
    None,
    /// Explicit vectors, one per line in field syntax.
    Text(&'static str),
    /// 4·e_i for each listed raw coordinate.
    ScaledUnits(u32, &'static [usize]),
}

#[derive(Debug, Clone, Copy)]
pub struct BoundCase {
    pub problem: &'static str,
    pub class: &'static str,
    pub alpha: &'static str,
    pub seeds: Seeds,
    /// Expected |X| for this case, when known.
    pub expected_size: Option<usize>,
    /// Largest |X| accepted.
    pub max_size: Option<usize>,
    pub tier: Tier,
}

pub const PLASTIC: &str = "root(3, poly x^3-x-1 in [1.3,1.4])";
pub const IM_ROOT: &str = "root(3, poly x^3-x^2-1 in [1.4,1.5])";

/// Raw coordinates of the 23 seed vectors for minimal dominating sets on
/// pathwidth 2, as pair indices 6·i + j over the letters D, S, L, P, d, F.
pub const MINDOM_PW2_SEEDS: &[usize] = &[0, 3, 4, 9, 14, 15, 16, 17, 18, 19, 21, 22, 23, 24, 25, 26, 27, 28, 29, 32, 33, 34, 35];

const fn case(problem: &'static str, class: &'static str, alpha: &'static str, tier: Tier) -> BoundCase {
    BoundCase { problem, class, alpha, seeds: Seeds::None, expected_size: None, max_size: None, tier }
}

pub const BOUND_CASES: &[BoundCase] = &[
    BoundCase { expected_size: Some(5), ..case("induced-matching", "pw1", IM_ROOT, Tier::Quick) },
    case("independent-dominating", "pw1", "nthroot(2, 2)", Tier::Quick),
    case("perfect-code", "pw1", "nthroot(2, 2)", Tier::Quick),
    case("minimal-dominating", "pw1", "nthroot(2, 2)", Tier::Quick),
    case("total-perfect-dominating", "pw1", "nthroot(4, 5)", Tier::Quick),
    case("maximal-strong-stable", "pw1", "nthroot(3, 3)", Tier::Quick),
    case("minimal-perfect-dominating", "pw1", IM_ROOT, Tier::Quick),
    // 2 on the states (0,1,0) and (2,1,0); any larger value works as well
    BoundCase {
        seeds: Seeds::Text("0, 2, 0, 0, 0, 0, 0, 2, 0"),
        expected_size: Some(23),
        ..case("minimal-total-dominating", "pw1", PLASTIC, Tier::Quick)
    },
    BoundCase { expected_size: Some(25), max_size: Some(40), ..case("maximal-induced-matching", "pw1", "nthroot(13, 9)", Tier::Quick) },
    case("independent-dominating", "pw2", "nthroot(3, 3)", Tier::Standard),
    case("total-perfect-dominating", "pw2", "nthroot(3, 3)", Tier::Standard),
    case("perfect-code", "pw2", "nthroot(3, 3)", Tier::Standard),
    case("induced-matching", "pw2", "nthroot(4, 3)", Tier::Standard),
    BoundCase {
        seeds: Seeds::ScaledUnits(4, MINDOM_PW2_SEEDS),
        expected_size: Some(131),
        max_size: Some(200),
        ..case("minimal-dominating-pw2", "pw2", "nthroot(6, 4)", Tier::Standard)
    },
    BoundCase {
        seeds: Seeds::Text("0, 0, a/2\n1/2, 0, 1/2\na/2, a/2, 0"),
        ..case("independent-dominating", "forest", "nthroot(2, 2)", Tier::Standard)
    },
    case("induced-matching", "forest", IM_ROOT, Tier::Standard),
    case("total-perfect-dominating", "forest", "nthroot(4, 5)", Tier::Standard),
    case("perfect-code", "forest", "nthroot(2, 2)", Tier::Standard),
    case("perfect-code", "tree", "nthroot(3, 7)", Tier::Standard),
    BoundCase { expected_size: Some(386), ..case("maximal-induced-matching", "pw2", "nthroot(5, 4)", Tier::Long) },
    case("minimal-dominating", "tree", "nthroot(95, 13)", Tier::Long),
];

impl BoundCase {
    pub fn name(&self) -> String {
        format!("{} {} α={}", self.problem, self.class, self.alpha)
    }

    pub fn bound_problem(&self) -> Result<BoundProblem, Error> {
        BoundProblem::new(&problem(self.problem)?, self.class.parse::<GraphClass>()?)
    }

    pub fn field(&self) -> Result<Arc<AlgebraicField>, Error> {
        Ok(parse_alpha_spec(self.alpha)?)
    }

    /// Seed vectors in reduced coordinates.
    pub fn seed_vectors(&self, bp: &BoundProblem, field: &Arc<AlgebraicField>) -> Result<Vec<Vec<AlgebraicNumber>>, Error> {
        let raw: Vec<Vec<AlgebraicNumber>> = match self.seeds {
            Seeds::None => Vec::new(),
            Seeds::Text(t) => crate::polytope::certificate::parse_seeds(field, t)?,
            Seeds::ScaledUnits(scale, coords) => coords
                .iter()
                .map(|&i| {
                    (0..bp.raw_dim).map(|j| if j == i { field.from_i64(scale as i64) } else { field.zero() }).collect()
                })
                .collect(),
        };
        raw.into_iter().map(|s| bp.project_seed(s)).collect()
    }
}

/// The 21-point polytope for total perfect dominating sets in trees at
/// α = (2^27·7)^{1/85}, as (coefficient, power of α) per coordinate.
const TPD_TREE_X: &[[(&str, u32); 4]] = &[
    [("0", 0), ("0", 0), ("2/7", 0), ("1", 0)],
    [("0", 0), ("0", 0), ("1/14", 6), ("13/56", 6)],
    [("0", 0), ("0", 0), ("1/56", 12), ("3/56", 12)],
    [("0", 0), ("0", 0), ("1/224", 18), ("11/896", 18)],
    [("0", 0), ("0", 0), ("1/896", 24), ("5/1792", 24)],
    [("0", 0), ("0", 0), ("1/3584", 30), ("9/14336", 30)],
    [("0", 0), ("0", 0), ("1/14336", 36), ("1/7168", 36)],
    [("0", 0), ("0", 0), ("1/57344", 42), ("1/32768", 42)],
    [("0", 0), ("0", 0), ("1/229376", 48), ("3/458752", 48)],
    [("0", 0), ("0", 0), ("1/917504", 54), ("5/3670016", 54)],
    [("0", 0), ("0", 0), ("1/3670016", 60), ("1/3670016", 60)],
    [("0", 0), ("0", 0), ("1/14680064", 66), ("3/58720256", 66)],
    [("0", 0), ("0", 0), ("1/58720256", 72), ("1/117440512", 72)],
    [("0", 0), ("0", 0), ("1/234881024", 78), ("1/939524096", 78)],
    [("0", 0), ("1/939524096", 79), ("0", 0), ("1/234881024", 79)],
    [("0", 0), ("1/939524096", 80), ("0", 0), ("3/939524096", 80)],
    [("1/939524096", 80), ("1/234881024", 80), ("0", 0), ("0", 0)],
    [("1/939524096", 81), ("3/939524096", 81), ("0", 0), ("0", 0)],
    [("1/939524096", 82), ("1/469762048", 82), ("0", 0), ("0", 0)],
    [("1/939524096", 83), ("1/939524096", 83), ("0", 0), ("0", 0)],
    [("1/939524096", 84), ("0", 0), ("1/939524096", 84), ("0", 0)],
];

pub const TPD_TREE_ALPHA: &str = "nthroot(939524096, 85)";

/// Builds the certificate for total perfect dominating sets in trees from
/// the explicit polytope.
pub fn tpd_tree_certificate() -> Result<Certificate, Error> {
    let field = parse_alpha_spec(TPD_TREE_ALPHA)?;
    let alpha = field.generator();
    let bp = BoundProblem::new(&problem("total-perfect-dominating")?, GraphClass::Tree)?;
    let points = TPD_TREE_X
        .iter()
        .map(|row| {
            row.iter()
                .map(|(c, e)| {
                    let q = crate::numbers::parse_rational(c)?;
                    Ok(alpha.pow(*e as u64).scale(&q))
                })
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Certificate {
        alpha,
        problem: bp.problem.clone(),
        class: GraphClass::Tree,
        system_hash: bp.system.fingerprint(),
        dim: bp.system.dim(),
        seeds: Vec::new(),
        points,
        witnesses: None,
    })
}

/// Result of running one catalog case.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub size: Option<usize>,
    pub detail: String,
    pub certificate: Option<Certificate>,
    pub elapsed: std::time::Duration,
}

/// Saturates, verifies the resulting certificate independently and checks
/// |X| against the accepted maximum.
pub fn run_case(case: &BoundCase, limits: Limits) -> Result<CaseOutcome, Error> {
    let clock = std::time::Instant::now();
    let bp = case.bound_problem()?;
    let field = case.field()?;
    let seeds = case.seed_vectors(&bp, &field)?;
    let name = case.name();
    let outcome = match saturate(&bp, &field.generator(), &seeds, limits)? {
        Err(f) => CaseOutcome {
            name,
            passed: false,
            size: None,
            detail: format!("saturation failed: {} (peak |X| = {})", f.reason, f.stats.peak),
            certificate: None,
            elapsed: clock.elapsed(),
        },
        Ok((cert, stats)) => {
            let verdict = verify_certificate(&cert)?;
            let size = cert.points.len();
            let within = case.max_size.is_none_or(|m| size <= m);
            let mut detail = format!("|X| = {size}, {} rounds", stats.rounds);
            if let Some(r) = case.expected_size {
                detail.push_str(&format!(", expected {r}"));
            }
            if let Verdict::Refuted(why) = &verdict {
                detail.push_str(&format!(", refuted: {why}"));
            }
            if !within {
                detail.push_str(&format!(", above the accepted {}", case.max_size.unwrap_or(0)));
            }
            CaseOutcome {
                name,
                passed: verdict.is_verified() && within,
                size: Some(size),
                detail,
                certificate: Some(cert),
                elapsed: clock.elapsed(),
            }
        }
    };
    Ok(outcome)
}

/// Verifies the explicit tree polytope for total perfect dominating sets.
pub fn run_tpd_tree() -> Result<CaseOutcome, Error> {
    let clock = std::time::Instant::now();
    let cert = tpd_tree_certificate()?;
    let verdict = verify_certificate(&cert)?;
    let detail = match &verdict {
        Verdict::Verified { constant, obligations } => {
            format!("|X| = {}, {obligations} obligations, C = {:.6}", cert.points.len(), constant.to_f64())
        }
        Verdict::Refuted(why) => format!("refuted: {why}"),
    };
    Ok(CaseOutcome {
        name: format!("total-perfect-dominating tree α={TPD_TREE_ALPHA} (explicit X)"),
        passed: verdict.is_verified(),
        size: Some(cert.points.len()),
        detail,
        certificate: Some(cert),
        elapsed: clock.elapsed(),
    })
}
