//! Ultimately periodic subsets of ℕ and the problem descriptor built from them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::Error;

/// τ(p, q, n): n below the preperiod, otherwise folded into one period.
pub fn tau(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(q >= 1);
    if n < p {
        n
    } else {
        (n - p) % q + p
    }
}

/// A recognizable set in canonical form: least preperiod and least period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecognizableSet {
    p: usize,
    q: usize,
    table: Vec<bool>,
}

impl RecognizableSet {
    /// Builds a set from any (p, q, table) description and canonicalizes it.
    pub fn from_table(p: usize, q: usize, table: Vec<bool>) -> Result<Self, Error> {
        if q == 0 || table.len() != p + q {
            return Err(Error::Syntax(format!("table length must be p+q with q ≥ 1 (p={p}, q={q}, len={})", table.len())));
        }
        let mut s = RecognizableSet { p, q, table };
        s.canonicalize();
        Ok(s)
    }

    pub fn naturals() -> Self {
        RecognizableSet { p: 0, q: 1, table: vec![true] }
    }

    pub fn positive() -> Self {
        RecognizableSet { p: 1, q: 1, table: vec![false, true] }
    }

    /// A finite set.
    pub fn finite(items: &[usize]) -> Self {
        let p = items.iter().max().map_or(0, |m| m + 1);
        let table = (0..=p).map(|n| items.contains(&n)).collect();
        Self::from_table(p, 1, table).expect("well-formed table")
    }

    fn canonicalize(&mut self) {
        let (p, q) = (self.p, self.q);
        let tail: Vec<bool> = self.table[p..p + q].to_vec();
        let period = (1..=q)
            .filter(|d| q % d == 0)
            .find(|&d| (0..q).all(|i| tail[i] == tail[i % d]))
            .unwrap_or(q);
        let mut table: Vec<bool> = self.table[..p].to_vec();
        table.extend_from_slice(&tail[..period]);
        let mut p = p;
        while p > 0 && table[p - 1] == table[p - 1 + period] {
            // shift the periodic part one step to the left
            table.pop();
            p -= 1;
        }
        self.p = p;
        self.q = period;
        self.table = table;
    }

    pub fn preperiod(&self) -> usize {
        self.p
    }

    pub fn period(&self) -> usize {
        self.q
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn contains(&self, n: usize) -> bool {
        self.table[tau(self.p, self.q, n)]
    }

    pub fn is_empty(&self) -> bool {
        self.table.iter().all(|b| !b)
    }

    /// Number of per-vertex states this set contributes in counting mode.
    pub fn width(&self) -> usize {
        self.p + self.q
    }
}

/// 1_S(n).
pub fn indicator(s: &RecognizableSet, n: usize) -> bool {
    s.contains(n)
}

/// Joint (p, q) valid for both sets at once.
///
/// p = max(p_σ, p_ρ) + 1 and q = lcm(q_σ, q_ρ); both conditions are checked and
/// q is grown by multiples in the (unexpected) case the check fails.
pub fn joint_period(sigma: &RecognizableSet, rho: &RecognizableSet) -> (usize, usize) {
    let p = sigma.p.max(rho.p) + 1;
    let base = sigma.q.lcm(&rho.q);
    let mut q = base;
    while !joint_period_holds(sigma, rho, p, q) {
        q += base;
    }
    (p, q)
}

pub fn joint_period_holds(sigma: &RecognizableSet, rho: &RecognizableSet, p: usize, q: usize) -> bool {
    let pair = |n: usize| (sigma.contains(n), rho.contains(n));
    let folded = (0..p + 3 * q).all(|n| pair(n) == pair(tau(p, q, n)));
    folded && p >= 1 && pair(p - 1) == pair(p + q - 1)
}

impl fmt::Display for RecognizableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::naturals() {
            return f.write_str("N");
        }
        if *self == Self::positive() {
            return f.write_str("N+");
        }
        let mut items = Vec::new();
        for n in 0..self.p {
            if self.table[n] {
                items.push(n.to_string());
            }
        }
        for n in self.p..self.p + self.q {
            if self.table[n] {
                items.push(format!("{n}+{}*k", self.q));
            }
        }
        write!(f, "{{{}}}", items.join(","))
    }
}

enum Item {
    Single(usize),
    Progression(usize, usize),
}

fn parse_item(s: &str) -> Result<Item, Error> {
    let bad = || Error::Syntax(format!("bad set item `{s}`"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((a, rest)) = compact.split_once('+') {
        let a: usize = a.parse().map_err(|_| bad())?;
        let q = rest.strip_suffix('k').ok_or_else(bad)?;
        let q = q.strip_suffix('*').unwrap_or(q);
        let q: usize = if q.is_empty() { 1 } else { q.parse().map_err(|_| bad())? };
        if q == 0 {
            return Ok(Item::Single(a));
        }
        Ok(Item::Progression(a, q))
    } else {
        Ok(Item::Single(compact.parse().map_err(|_| bad())?))
    }
}

/// Parses `N`, `N+`, `{a,b,...}` or a bare comma list; items are `a` or `a+q*k`.
pub fn parse_set(spec: &str) -> Result<RecognizableSet, Error> {
    let s = spec.trim();
    match s {
        "N" => return Ok(RecognizableSet::naturals()),
        "N+" => return Ok(RecognizableSet::positive()),
        _ => {}
    }
    let body = match s.strip_prefix('{') {
        Some(rest) => rest.strip_suffix('}').ok_or_else(|| Error::Syntax(format!("unbalanced braces in `{s}`")))?,
        None => s,
    };
    let items: Vec<Item> = body
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(parse_item)
        .collect::<Result<_, _>>()?;
    if items.is_empty() && !s.starts_with('{') {
        return Err(Error::Syntax(format!("empty set spec `{s}` (write {{}} for ∅)")));
    }
    let mut p = 0;
    let mut q = 1;
    for it in &items {
        match *it {
            Item::Single(a) => p = p.max(a + 1),
            Item::Progression(a, step) => {
                p = p.max(a + 1);
                q = q.lcm(&step);
            }
        }
    }
    let table = (0..p + q)
        .map(|n| {
            items.iter().any(|it| match *it {
                Item::Single(a) => n == a,
                Item::Progression(a, step) => n >= a && (n - a) % step == 0,
            })
        })
        .collect();
    RecognizableSet::from_table(p, q, table)
}

impl FromStr for RecognizableSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_set(s)
    }
}

/// Counting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    All,
    /// 1-minimal sets.
    Min,
    /// 1-maximal sets.
    Max,
    /// Maximal induced matchings (σ = {1}, ρ = ℕ) with the dedicated 5-state automaton.
    MaxInducedMatching,
    /// Minimal dominating sets (σ = ℕ, ρ = ℕ+) with the dedicated pathwidth-2 automaton.
    MinDomPw2,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::All => "all",
            Mode::Min => "min",
            Mode::Max => "max",
            Mode::MaxInducedMatching => "mim",
            Mode::MinDomPw2 => "mindom-pw2",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "all" => Mode::All,
            "min" | "minimal" => Mode::Min,
            "max" | "maximal" => Mode::Max,
            "mim" | "max-induced-matching" => Mode::MaxInducedMatching,
            "mindom-pw2" | "min-dom-pw2" => Mode::MinDomPw2,
            other => return Err(Error::Syntax(format!("unknown mode `{other}`"))),
        })
    }
}

/// Graph class targeted by an operator system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Pathwidth(usize),
    Tree,
    Forest,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::Pathwidth(k) => write!(f, "pw{k}"),
            GraphClass::Tree => f.write_str("tree"),
            GraphClass::Forest => f.write_str("forest"),
        }
    }
}

impl FromStr for GraphClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "pw1" => GraphClass::Pathwidth(1),
            "pw2" => GraphClass::Pathwidth(2),
            "tree" | "trees" => GraphClass::Tree,
            "forest" | "forests" => GraphClass::Forest,
            other => return Err(Error::Syntax(format!("unknown graph class `{other}` (pw1, pw2, tree, forest)"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Problem {
    pub sigma: RecognizableSet,
    pub rho: RecognizableSet,
    pub mode: Mode,
}

impl Problem {
    pub fn new(sigma: RecognizableSet, rho: RecognizableSet, mode: Mode) -> Result<Self, Error> {
        match mode {
            Mode::MaxInducedMatching if sigma != RecognizableSet::finite(&[1]) || rho != RecognizableSet::naturals() => {
                Err(Error::Unsupported("the maximal induced matching automaton requires σ={1}, ρ=N".into()))
            }
            Mode::MinDomPw2 if sigma != RecognizableSet::naturals() || rho != RecognizableSet::positive() => {
                Err(Error::Unsupported("the minimal dominating automaton requires σ=N, ρ=N+".into()))
            }
            _ => Ok(Problem { sigma, rho, mode }),
        }
    }

    /// Parses set specs and a mode name.
    pub fn parse(sigma: &str, rho: &str, mode: &str) -> Result<Self, Error> {
        Self::new(parse_set(sigma)?, parse_set(rho)?, mode.parse()?)
    }

    /// Checks that this problem has an automaton for the graph class.
    pub fn check_class(&self, class: GraphClass) -> Result<(), Error> {
        match (self.mode, class) {
            (_, GraphClass::Pathwidth(k)) if k == 0 || k > 2 => {
                Err(Error::Unsupported(format!("pathwidth {k} is not supported (1 or 2)")))
            }
            (Mode::MinDomPw2, GraphClass::Pathwidth(2)) => Ok(()),
            (Mode::MinDomPw2, _) => Err(Error::Unsupported("mindom-pw2 is only defined for pathwidth 2".into())),
            (Mode::MaxInducedMatching, GraphClass::Pathwidth(_)) => Ok(()),
            (Mode::MaxInducedMatching, _) => {
                Err(Error::Unsupported("the maximal induced matching automaton is defined for pathwidth classes".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={} rho={} mode={}", self.sigma, self.rho, self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(2, 1, 5), 2);
        assert_eq!(tau(3, 2, 1), 1);
        assert_eq!(tau(1, 3, 7), 1);
    }

    #[test]
    fn parse_examples() {
        let one = parse_set("{1}").unwrap();
        assert_eq!((one.preperiod(), one.period(), one.table()), (2, 1, &[false, true, false][..]));
        let n = parse_set("N").unwrap();
        assert_eq!((n.preperiod(), n.period(), n.table()), (0, 1, &[true][..]));
        let s = parse_set("{0,1}").unwrap();
        assert_eq!((s.preperiod(), s.period(), s.table()), (2, 1, &[true, true, false][..]));
        let np = parse_set("N+").unwrap();
        assert_eq!((np.preperiod(), np.period()), (1, 1));
        let empty = parse_set("{}").unwrap();
        assert!(empty.is_empty());
        assert_eq!((empty.preperiod(), empty.period()), (0, 1));
    }

    #[test]
    fn progressions() {
        let s = parse_set("0, 3+2*k").unwrap();
        assert!(indicator(&s, 7));
        assert!(!indicator(&s, 2));
        assert!(indicator(&s, 0));
        let evens = parse_set("{0+2k}").unwrap();
        assert_eq!((evens.preperiod(), evens.period()), (0, 2));
        // {1+1*k} is N+
        assert_eq!(parse_set("{1+1*k}").unwrap(), RecognizableSet::positive());
        assert_eq!(parse_set("{0+1*k}").unwrap(), RecognizableSet::naturals());
    }

    #[test]
    fn display_roundtrip() {
        for spec in ["N", "N+", "{1}", "{0,1}", "{}", "{0+2*k}", "{0,3+2*k}", "{2,5,7+3*k,8+3*k}", "{1+1*k,0}"] {
            let s = parse_set(spec).unwrap();
            let printed = s.to_string();
            let again = parse_set(&printed).unwrap();
            assert_eq!(again, s, "{spec} -> {printed}");
            assert_eq!(again.to_string(), printed);
        }
    }

    #[test]
    fn joint_periods() {
        let one = parse_set("{1}").unwrap();
        assert_eq!(joint_period(&one, &one), (3, 1));
        let n = RecognizableSet::naturals();
        assert_eq!(joint_period(&n, &n), (1, 1));
        let evens = parse_set("{0+2*k}").unwrap();
        let (_, q) = joint_period(&evens, &one);
        assert_eq!(q, 2);
        // gcd-based period fails for this pair
        assert!(!joint_period_holds(&evens, &one, 3, 1));
    }

    #[test]
    fn problem_validation() {
        assert!(Problem::parse("{1}", "N", "mim").is_ok());
        assert!(Problem::parse("{0}", "N", "mim").is_err());
        assert!(Problem::parse("N", "N+", "mindom-pw2").is_ok());
        let p = Problem::parse("N", "N+", "mindom-pw2").unwrap();
        assert!(p.check_class(GraphClass::Pathwidth(1)).is_err());
        assert!(p.check_class(GraphClass::Pathwidth(2)).is_ok());
    }
}
