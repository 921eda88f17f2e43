//! Text forms: elements as polynomials in `a`, rationals, and α specifications.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraicField, AlgebraicNumber, NumberError};

fn perr(msg: impl Into<String>) -> NumberError {
    NumberError::Parse(msg.into())
}

/// Parses `3`, `-7/2`, `1.25`, `-0.5e-3` is not supported (no exponents).
pub fn parse_rational(s: &str) -> Result<BigRational, NumberError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(perr("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s.strip_prefix('+').unwrap_or(s).trim_start()),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(perr(format!("bad number `{s}`")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(perr(format!("bad number `{s}`")));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits.parse().map_err(|_| perr(format!("bad number `{s}`")))?;
    let d = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(n, d);
    Ok(if neg { -q } else { q })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str, var: char) -> Result<Vec<Tok>, NumberError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            c if c == var => out.push(Tok::Var),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(parse_rational(&lit)?));
            }
            other => return Err(perr(format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

/// Recursive-descent evaluator generic over the value domain.
trait Domain {
    type V: Clone;
    fn constant(&self, q: BigRational) -> Self::V;
    fn var(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, NumberError>;
    fn pow(&self, a: &Self::V, e: u64) -> Self::V;
}

struct Parser<'a, D: Domain> {
    toks: &'a [Tok],
    pos: usize,
    dom: &'a D,
}

impl<D: Domain> Parser<'_, D> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<D::V, NumberError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.dom.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.dom.add(&acc, &self.dom.neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<D::V, NumberError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.dom.mul(&acc, &t);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.dom.div(&acc, &t)?;
                }
                // implicit product such as `3a` or `2(a+1)`
                Some(Tok::Var) | Some(Tok::LParen) => {
                    let t = self.power()?;
                    acc = self.dom.mul(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<D::V, NumberError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(self.dom.neg(&v))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<D::V, NumberError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(q)) if q.is_integer() && !q.is_negative() => q.to_integer(),
                _ => return Err(perr("exponent must be a nonnegative integer")),
            };
            self.pos += 1;
            let e: u64 = e.try_into().map_err(|_| perr("exponent too large"))?;
            return Ok(self.dom.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<D::V, NumberError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(self.dom.constant(q))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(self.dom.var())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(perr("missing `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(perr(format!("unexpected token {other:?}"))),
        }
    }
}

fn run<D: Domain>(dom: &D, s: &str, var: char) -> Result<D::V, NumberError> {
    let toks = lex(s, var)?;
    if toks.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, dom };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(perr(format!("trailing input in `{s}`")));
    }
    Ok(v)
}

struct FieldDomain<'a>(&'a Arc<AlgebraicField>);

impl Domain for FieldDomain<'_> {
    type V = AlgebraicNumber;
    fn constant(&self, q: BigRational) -> AlgebraicNumber {
        self.0.from_rational(&q)
    }
    fn var(&self) -> AlgebraicNumber {
        self.0.generator()
    }
    fn add(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        a + b
    }
    fn neg(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        -a
    }
    fn mul(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        a * b
    }
    fn div(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber, NumberError> {
        a.checked_div(b)
    }
    fn pow(&self, a: &AlgebraicNumber, e: u64) -> AlgebraicNumber {
        a.pow(e)
    }
}

/// Polynomials over Q, used for `poly x^3 - x - 1` style inputs.
struct PolyDomain;

fn padd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) + b.get(i).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    super::poly::trim(&mut out);
    out
}

fn pmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    super::poly::trim(&mut out);
    out
}

impl Domain for PolyDomain {
    type V = Vec<BigRational>;
    fn constant(&self, q: BigRational) -> Self::V {
        let mut v = vec![q];
        super::poly::trim(&mut v);
        v
    }
    fn var(&self) -> Self::V {
        vec![BigRational::zero(), BigRational::one()]
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        padd(a, b)
    }
    fn neg(&self, a: &Self::V) -> Self::V {
        a.iter().map(|c| -c).collect()
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        pmul(a, b)
    }
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, NumberError> {
        match b.as_slice() {
            [c] => Ok(a.iter().map(|x| x / c).collect()),
            [] => Err(NumberError::DivisionByZero),
            _ => Err(perr("division by a non-constant polynomial")),
        }
    }
    fn pow(&self, a: &Self::V, e: u64) -> Self::V {
        let mut acc = vec![BigRational::one()];
        for _ in 0..e {
            acc = pmul(&acc, a);
        }
        acc
    }
}

pub(super) fn parse_element(field: &Arc<AlgebraicField>, s: &str) -> Result<AlgebraicNumber, NumberError> {
    run(&FieldDomain(field), s, 'a')
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(super) fn format_element(x: &AlgebraicNumber) -> String {
    let coeffs = x.coeffs();
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match k {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{k}"),
        };
        if var.is_empty() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format_rational(&mag));
            out.push('*');
            out.push_str(&var);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `minpoly: [c0, c1, ..., cd]; interval: lo hi`
pub fn format_field_header(field: &AlgebraicField) -> String {
    let (lo, hi) = field.initial_interval();
    format!(
        "minpoly: [{}]; interval: {} {}",
        field.modulus_strings().join(", "),
        format_rational(&lo),
        format_rational(&hi)
    )
}

pub fn parse_field_header(s: &str) -> Result<Arc<AlgebraicField>, NumberError> {
    let s = s.trim();
    let rest = s.strip_prefix("minpoly:").ok_or_else(|| perr("field header must start with `minpoly:`"))?;
    let (poly_part, interval_part) = rest.split_once(';').ok_or_else(|| perr("missing `;` in field header"))?;
    let poly_part = poly_part.trim();
    let inner = poly_part
        .strip_prefix('[')
        .and_then(|p| p.strip_suffix(']'))
        .ok_or_else(|| perr("minpoly must be a bracketed list"))?;
    let coeffs: Vec<BigInt> = inner
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| perr(format!("bad coefficient `{c}`"))))
        .collect::<Result<_, _>>()?;
    let iv = interval_part
        .trim()
        .strip_prefix("interval:")
        .ok_or_else(|| perr("missing `interval:`"))?;
    let parts: Vec<&str> = iv.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(perr("interval needs two endpoints"));
    }
    AlgebraicField::new(&coeffs, parse_rational(parts[0])?, parse_rational(parts[1])?)
}

/// Parses an α specification and returns the field it generates.
///
/// Accepted forms:
/// - `root(n, r)`: positive real root of x^n − r
/// - `nthroot(r, n)`: the same number, argument order swapped
/// - `root(n, poly <P(x)> in [lo, hi])`: the root of P isolated in [lo, hi] (n is ignored)
/// - `poly <P(x)> in [lo, hi]`
/// - a field header `minpoly: [...]; interval: lo hi`
/// - a plain positive rational
pub fn parse_alpha_spec(s: &str) -> Result<Arc<AlgebraicField>, NumberError> {
    let s = s.trim();
    if s.starts_with("minpoly:") {
        return parse_field_header(s);
    }
    if let Some(body) = s.strip_prefix("poly") {
        return parse_poly_in(body);
    }
    if let Some(args) = call_args(s, "nthroot") {
        let (r, n) = args.split_once(',').ok_or_else(|| perr("nthroot needs two arguments"))?;
        let n: usize = n.trim().parse().map_err(|_| perr("nthroot index must be a positive integer"))?;
        return AlgebraicField::nth_root(&parse_rational(r)?, n);
    }
    if let Some(args) = call_args(s, "root") {
        let (n, rest) = args.split_once(',').ok_or_else(|| perr("root needs two arguments"))?;
        let rest = rest.trim();
        if let Some(body) = rest.strip_prefix("poly") {
            return parse_poly_in(body);
        }
        let n: usize = n.trim().parse().map_err(|_| perr("root index must be a positive integer"))?;
        return AlgebraicField::nth_root(&parse_rational(rest)?, n);
    }
    let q = parse_rational(s)?;
    let num = q.numer().clone();
    let den = q.denom().clone();
    AlgebraicField::new(&[-num, den], q.clone(), q)
}

fn call_args<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.trim_start().strip_prefix('(')?.trim_end().strip_suffix(')')
}

fn parse_poly_in(body: &str) -> Result<Arc<AlgebraicField>, NumberError> {
    let (p, iv) = body.rsplit_once(" in ").ok_or_else(|| perr("expected `poly <P> in [lo, hi]`"))?;
    let coeffs = run(&PolyDomain, p.trim(), 'x')?;
    let iv = iv
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr("interval must be `[lo, hi]`"))?;
    let (lo, hi) = iv.split_once(',').ok_or_else(|| perr("interval must be `[lo, hi]`"))?;
    let ints = super::poly::primitive_integer(&coeffs);
    AlgebraicField::new(&ints, parse_rational(lo)?, parse_rational(hi)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(parse_rational("-7/2").unwrap(), BigRational::new((-7).into(), 2.into()));
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn element_roundtrip() {
        let f = parse_alpha_spec("root(3, poly x^3-x^2-1 in [1.4,1.5])").unwrap();
        let x = f.parse_element("1/2*a^2 - 3*a + 1").unwrap();
        assert_eq!(format_element(&x), "1/2*a^2 - 3*a + 1");
        assert_eq!(f.parse_element(&format_element(&x)).unwrap(), x);
        let y = f.parse_element("a^3").unwrap();
        assert_eq!(format_element(&y), "a^2 + 1");
        let z = f.parse_element("1/a").unwrap();
        assert_eq!(format_element(&z), "a^2 - a");
        assert_eq!(format_element(&f.zero()), "0");
        assert_eq!(format_element(&f.parse_element("-a").unwrap()), "-a");
        assert_eq!(f.parse_element("2a(a+1)").unwrap(), f.parse_element("2*a^2+2*a").unwrap());
    }

    #[test]
    fn alpha_specs() {
        let f = parse_alpha_spec("nthroot(4, 5)").unwrap();
        assert!((f.approx() - 1.319508).abs() < 1e-6);
        let g = parse_alpha_spec("root(5, 4)").unwrap();
        assert_eq!(f.modulus(), g.modulus());
        let h = parse_alpha_spec("2").unwrap();
        assert_eq!(h.degree(), 1);
        assert!(parse_alpha_spec("root(3, poly x^3-x^2-1 in [2,3])").is_err());
    }

    #[test]
    fn header_roundtrip() {
        let f = parse_alpha_spec("poly x^3 - x - 1 in [1.3, 1.4]").unwrap();
        let h = format_field_header(&f);
        assert_eq!(h, "minpoly: [-1, -1, 0, 1]; interval: 13/10 7/5");
        let g = parse_field_header(&h).unwrap();
        assert!(f.same_as(&g));
    }
}
