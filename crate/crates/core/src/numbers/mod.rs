//! Exact arithmetic in Q[x]/(P) for a designated real root α of P.
//!
//! Elements are stored as an integer coefficient vector over a common positive
//! denominator, reduced modulo P. Ordering questions are answered by a
//! floating-point evaluation with a rigorous error bound; when that bound does
//! not separate the value from zero, the isolating interval of α is bisected
//! and the representative is evaluated with rational interval arithmetic.

mod poly;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::RwLock;
use thiserror::Error;

pub use text::{format_field_header, parse_alpha_spec, parse_field_header, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("no root isolated in the given interval")]
    NoRootIsolated,
    #[error("invalid modulus: polynomial must be non-constant")]
    InvalidModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("reducible modulus: the polynomial is not the minimal polynomial of its root")]
    ReducibleModulus,
    #[error("parse error: {0}")]
    Parse(String),
}

/// The field Q(α) ≅ Q[x]/(P) together with an isolating interval for α.
pub struct AlgebraicField {
    /// Primitive integer coefficients of P, little-endian, positive leading coefficient.
    modulus: Vec<BigInt>,
    degree: usize,
    initial: (BigRational, BigRational),
    interval: RwLock<Refinement>,
    /// α as an f64, accurate to within one ulp.
    approx: f64,
    approx_powers: Vec<f64>,
    /// Known sign of α (`None` only when an isolating interval straddles 0).
    alpha_sign: Option<Ordering>,
}

struct Refinement {
    lo: BigRational,
    hi: BigRational,
    /// number of bisections requested on the next refinement round
    next_steps: u32,
}

impl fmt::Debug for AlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraicField")
            .field("modulus", &self.modulus_strings())
            .field("approx", &self.approx)
            .finish()
    }
}

impl AlgebraicField {
    /// Builds Q(α) where α is the unique root of `minpoly` inside `[lo, hi]`.
    ///
    /// The polynomial is trusted to be irreducible; a violation surfaces lazily
    /// as [`NumberError::ReducibleModulus`] when a division hits a zero divisor.
    pub fn new(minpoly: &[BigInt], lo: BigRational, hi: BigRational) -> Result<Arc<Self>, NumberError> {
        let q: Vec<BigRational> = poly::from_ints(minpoly);
        if q.len() < 2 {
            return Err(NumberError::InvalidModulus);
        }
        let modulus = poly::primitive_integer(&q);
        let degree = modulus.len() - 1;
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let plo = poly::eval_int(&modulus, &lo);
        let phi = poly::eval_int(&modulus, &hi);
        let (lo, hi) = if plo.is_zero() || phi.is_zero() {
            let root = if plo.is_zero() { lo } else { hi };
            if degree > 1 {
                return Err(NumberError::ReducibleModulus);
            }
            (root.clone(), root)
        } else if plo.signum() != phi.signum() {
            let qp: Vec<BigRational> = modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            if poly::sturm_count(&qp, &lo, &hi) != 1 {
                return Err(NumberError::NoRootIsolated);
            }
            (lo, hi)
        } else {
            return Err(NumberError::NoRootIsolated);
        };
        let mut field = AlgebraicField {
            modulus,
            degree,
            initial: (lo.clone(), hi.clone()),
            interval: RwLock::new(Refinement { lo, hi, next_steps: 32 }),
            approx: 0.0,
            approx_powers: Vec::new(),
            alpha_sign: None,
        };
        field.refine_to_bits(80);
        let (lo, hi) = {
            let r = field.interval.read();
            (r.lo.clone(), r.hi.clone())
        };
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        field.approx = rational_to_f64(&mid);
        field.approx_powers = (0..degree).scan(1.0f64, |acc, _| {
            let cur = *acc;
            *acc *= field.approx;
            Some(cur)
        }).collect();
        field.alpha_sign = if lo.is_positive() {
            Some(Ordering::Greater)
        } else if hi.is_negative() {
            Some(Ordering::Less)
        } else if lo.is_zero() && hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        };
        Ok(Arc::new(field))
    }

    /// Q(α) with α = r^{1/n}, the positive real n-th root of a positive rational r.
    pub fn nth_root(r: &BigRational, n: usize) -> Result<Arc<Self>, NumberError> {
        if n == 0 || !r.is_positive() {
            return Err(NumberError::InvalidModulus);
        }
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[0] = -r.clone();
        coeffs[n] = BigRational::one();
        let ints = poly::primitive_integer(&coeffs);
        let hi = if r > &BigRational::one() { r.clone() } else { BigRational::one() };
        Self::new(&ints, BigRational::zero(), hi)
    }

    /// A degree-one field: plain rational arithmetic.
    pub fn rational() -> Arc<Self> {
        Self::new(&[BigInt::zero(), BigInt::one()], BigRational::zero(), BigRational::zero())
            .expect("x has the root 0")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Primitive integer coefficients of the minimal polynomial, constant term first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn modulus_strings(&self) -> Vec<String> {
        self.modulus.iter().map(|c| c.to_string()).collect()
    }

    /// The interval the field was created with (after exact-root collapse).
    pub fn initial_interval(&self) -> (BigRational, BigRational) {
        self.initial.clone()
    }

    /// The current (refined) isolating interval of α.
    pub fn current_interval(&self) -> (BigRational, BigRational) {
        let r = self.interval.read();
        (r.lo.clone(), r.hi.clone())
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn same_as(&self, other: &AlgebraicField) -> bool {
        std::ptr::eq(self, other) || (self.modulus == other.modulus && self.initial == other.initial)
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraicNumber {
        AlgebraicNumber { field: self.clone(), num: Vec::new(), den: BigInt::one() }
    }

    pub fn one(self: &Arc<Self>) -> AlgebraicNumber {
        self.from_integer(BigInt::one())
    }

    pub fn from_integer(self: &Arc<Self>, n: BigInt) -> AlgebraicNumber {
        AlgebraicNumber::from_parts(self.clone(), vec![n], BigInt::one())
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> AlgebraicNumber {
        self.from_integer(BigInt::from(n))
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> AlgebraicNumber {
        AlgebraicNumber::from_parts(self.clone(), vec![q.numer().clone()], q.denom().clone())
    }

    /// The generator α.
    pub fn generator(self: &Arc<Self>) -> AlgebraicNumber {
        if self.degree == 1 {
            // α = -c0 / c1
            let q = BigRational::new(-self.modulus[0].clone(), self.modulus[1].clone());
            return self.from_rational(&q);
        }
        AlgebraicNumber::from_parts(self.clone(), vec![BigInt::zero(), BigInt::one()], BigInt::one())
    }

    /// Builds an element from rational coefficients of a polynomial in α of any degree.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[BigRational]) -> AlgebraicNumber {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        AlgebraicNumber::from_parts(self.clone(), num, den)
    }

    /// Parses a polynomial in `a` (see the crate README for the grammar).
    pub fn parse_element(self: &Arc<Self>, s: &str) -> Result<AlgebraicNumber, NumberError> {
        text::parse_element(self, s)
    }

    fn refine_to_bits(&self, bits: u64) {
        let mut r = self.interval.write();
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        while r.lo != r.hi && (&r.hi - &r.lo) > target {
            bisect(&self.modulus, &mut r);
        }
    }

    /// Shrinks the isolating interval; each call doubles the work of the previous one.
    fn refine(&self, seen_lo: &BigRational, seen_hi: &BigRational) {
        let mut r = self.interval.write();
        if &r.lo != seen_lo || &r.hi != seen_hi {
            // another caller already refined
            return;
        }
        let steps = r.next_steps;
        for _ in 0..steps {
            if r.lo == r.hi {
                break;
            }
            bisect(&self.modulus, &mut r);
        }
        r.next_steps = steps.saturating_mul(2);
    }
}

fn bisect(modulus: &[BigInt], r: &mut Refinement) {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (&r.lo + &r.hi) / two;
    let pm = poly::eval_int(modulus, &mid);
    if pm.is_zero() {
        r.lo = mid.clone();
        r.hi = mid;
        return;
    }
    let plo = poly::eval_int(modulus, &r.lo);
    if plo.signum() == pm.signum() {
        r.lo = mid;
    } else {
        r.hi = mid;
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = big_to_scaled_f64(q.numer());
    let d = big_to_scaled_f64(q.denom());
    n.0 / d.0 * 2f64.powi((n.1 - d.1) as i32)
}

/// (mantissa, exponent) with value ≈ mantissa · 2^exponent and |mantissa| < 2^1000.
fn big_to_scaled_f64(x: &BigInt) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 1000 {
        (x.to_f64().unwrap_or(0.0), 0)
    } else {
        let shift = bits - 1000;
        ((x >> shift).to_f64().unwrap_or(0.0), shift as i64)
    }
}

/// An element of Q(α), kept in canonical reduced form.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<AlgebraicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl AlgebraicNumber {
    fn from_parts(field: Arc<AlgebraicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = AlgebraicNumber { field, num, den };
        x.reduce();
        x.normalize();
        x
    }

    fn reduce(&mut self) {
        let d = self.field.degree;
        let lead = &self.field.modulus[d];
        let monic = lead.is_one();
        while self.num.len() > d {
            let top = self.num.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = self.num.len() - d;
            if !monic {
                for c in self.num.iter_mut() {
                    *c *= lead;
                }
                self.den *= lead;
            }
            for (i, m) in self.field.modulus[..d].iter().enumerate() {
                if !m.is_zero() {
                    self.num[shift + i] -= &top * m;
                }
            }
        }
    }

    fn normalize(&mut self) {
        while self.num.last().is_some_and(|c| c.is_zero()) {
            self.num.pop();
        }
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn field(&self) -> &Arc<AlgebraicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0] == self.den
    }

    /// Rational coefficients of the reduced representative, constant term first,
    /// padded to the field degree.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.field.degree)
            .map(|i| match self.num.get(i) {
                Some(c) => BigRational::new(c.clone(), self.den.clone()),
                None => BigRational::zero(),
            })
            .collect()
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    fn check_field(&self, other: &Self) {
        debug_assert!(self.field.same_as(&other.field), "elements from different fields");
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() || self.is_zero() {
            return self.field.zero();
        }
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        AlgebraicNumber::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn checked_inv(&self) -> Result<Self, NumberError> {
        if self.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        let d = self.field.degree;
        if self.num.len() == 1 {
            let q = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(self.field.from_rational(&q));
        }
        // monomial c·α^k with P = L·x^d - c0: (c α^k)^{-1} = α^{d-k} · L / (c · c0')
        let m = &self.field.modulus;
        let binomial = m[1..d].iter().all(|c| c.is_zero());
        let nonzero: Vec<usize> = (0..self.num.len()).filter(|&i| !self.num[i].is_zero()).collect();
        if binomial && nonzero.len() == 1 {
            let k = nonzero[0];
            // α^d = -m0 / L
            let r = BigRational::new(-m[0].clone(), m[d].clone());
            if r.is_zero() {
                return Err(NumberError::ReducibleModulus);
            }
            let c = BigRational::new(self.num[k].clone(), self.den.clone());
            let mut coeffs = vec![BigRational::zero(); d];
            coeffs[d - k] = BigRational::one() / (c * r);
            return Ok(self.field.from_coeffs(&coeffs));
        }
        let rep: Vec<BigRational> = self.coeffs();
        let modq: Vec<BigRational> = m.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (g, s) = poly::gcd_with_cofactor(&rep, &modq);
        if g.len() != 1 {
            return Err(NumberError::ReducibleModulus);
        }
        Ok(self.field.from_coeffs(&s))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumberError> {
        self.check_field(other);
        if let Some(q) = other.as_rational() {
            if q.is_zero() {
                return Err(NumberError::DivisionByZero);
            }
            return Ok(self.scale(&(BigRational::one() / q)));
        }
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Approximate value; not used for any decision.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (m, e) = self.numerator_sum_f64();
        let (dm, de) = big_to_scaled_f64(&self.den);
        m.0 / dm * 2f64.powi((e - de) as i32)
    }

    /// Σ num_i α^i evaluated in f64 after a common power-of-two scaling,
    /// together with a rigorous bound on the absolute error of that sum.
    fn numerator_sum_f64(&self) -> ((f64, f64), i64) {
        let maxbits = self.num.iter().map(|c| c.bits()).max().unwrap_or(0);
        let shift = maxbits.saturating_sub(900);
        let mut sum = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut trunc = 0.0f64;
        for (c, p) in self.num.iter().zip(&self.field.approx_powers) {
            if c.is_zero() {
                continue;
            }
            let cf = if shift == 0 { c.to_f64().unwrap_or(f64::NAN) } else { (c >> shift).to_f64().unwrap_or(f64::NAN) };
            let t = cf * p;
            sum += t;
            abs_sum += t.abs();
            if shift > 0 {
                trunc += p.abs();
            }
        }
        let d = self.field.degree as f64;
        let err = abs_sum * (d + 4.0) * 2.3e-16 + trunc * 1.000001 + f64::MIN_POSITIVE;
        ((sum, err), shift as i64)
    }

    /// Exact sign of the element as a real number.
    pub fn signum(&self) -> Ordering {
        if self.num.is_empty() {
            return Ordering::Equal;
        }
        let nz: Vec<usize> = (0..self.num.len()).filter(|&i| !self.num[i].is_zero()).collect();
        if nz.len() == 1 {
            let c = self.num[nz[0]].sign();
            let cs = if c == Sign::Minus { Ordering::Less } else { Ordering::Greater };
            let k = nz[0];
            match (k, self.field.alpha_sign) {
                (0, _) | (_, Some(Ordering::Greater)) => return cs,
                (_, Some(Ordering::Less)) => return if k.is_multiple_of(2) { cs } else { cs.reverse() },
                _ => {}
            }
        }
        let ((sum, err), _) = self.numerator_sum_f64();
        if sum.is_finite() && err.is_finite() && sum.abs() > 2.0 * err {
            return if sum > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        self.signum_exact()
    }

    fn signum_exact(&self) -> Ordering {
        loop {
            let (lo, hi) = self.field.current_interval();
            if lo == hi {
                let v = poly::eval_int(&self.num, &lo);
                return v.numer().sign().into_ordering();
            }
            let (a, b) = interval_horner(&self.num, &lo, &hi);
            if a.is_positive() {
                return Ordering::Greater;
            }
            if b.is_negative() {
                return Ordering::Less;
            }
            self.field.refine(&lo, &hi);
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Total order on elements of the same field.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.check_field(other);
        if self.num == other.num && self.den == other.den {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

trait IntoOrdering {
    fn into_ordering(self) -> Ordering;
}

impl IntoOrdering for Sign {
    fn into_ordering(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn interval_horner(coeffs: &[BigInt], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in coeffs.iter().rev() {
        let p = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mut mn = p[0].clone();
        let mut mx = p[0].clone();
        for v in &p[1..] {
            if v < &mn {
                mn = v.clone();
            }
            if v > &mx {
                mx = v.clone();
            }
        }
        let c = BigRational::from_integer(c.clone());
        a = mn + &c;
        b = mx + c;
    }
    (a, b)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl std::hash::Hash for AlgebraicNumber {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl<'a> Add<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self.check_field(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let n = self.num.len().max(rhs.num.len());
        let zero = BigInt::zero();
        let num: Vec<BigInt> = if self.den == rhs.den {
            (0..n)
                .map(|i| self.num.get(i).unwrap_or(&zero) + rhs.num.get(i).unwrap_or(&zero))
                .collect()
        } else {
            (0..n)
                .map(|i| self.num.get(i).unwrap_or(&zero) * &rhs.den + rhs.num.get(i).unwrap_or(&zero) * &self.den)
                .collect()
        };
        let den = if self.den == rhs.den { self.den.clone() } else { &self.den * &rhs.den };
        let mut out = AlgebraicNumber { field: self.field.clone(), num, den };
        out.normalize();
        out
    }
}

impl<'a> Sub<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.num.iter().enumerate() {
                if !y.is_zero() {
                    num[i + j] += x * y;
                }
            }
        }
        AlgebraicNumber::from_parts(self.field.clone(), num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, rhs: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_element(self))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (≈{:.6})", self, self.to_f64())
    }
}

/// Binary field operation selector, mirroring the textual interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &AlgebraicNumber, b: &AlgebraicNumber, op: FieldOp) -> Result<AlgebraicNumber, NumberError> {
    if !a.field.same_as(&b.field) {
        return Err(NumberError::Parse("operands belong to different fields".into()));
    }
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.checked_div(b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cubic() -> Arc<AlgebraicField> {
        AlgebraicField::new(&ints(&[-1, 0, -1, 1]), q(14, 10), q(15, 10)).unwrap()
    }

    #[test]
    fn cubic_field_root_value() {
        let f = cubic();
        assert!((f.approx() - 1.465571).abs() < 1e-6);
    }

    #[test]
    fn fifth_root_of_four() {
        let f = AlgebraicField::new(&ints(&[-4, 0, 0, 0, 0, 1]), q(13, 10), q(14, 10)).unwrap();
        assert!((f.approx() - 1.319508).abs() < 1e-6);
        assert_eq!(f.degree(), 5);
    }

    #[test]
    fn rational_field_degree_one() {
        let f = AlgebraicField::new(&ints(&[-2, 1]), q(2, 1), q(2, 1)).unwrap();
        assert_eq!(f.degree(), 1);
        let a = f.generator();
        assert_eq!(a.as_rational(), Some(q(2, 1)));
        assert_eq!(a.signum(), Ordering::Greater);
    }

    #[test]
    fn field_errors() {
        assert_eq!(AlgebraicField::new(&ints(&[3]), q(0, 1), q(1, 1)).unwrap_err(), NumberError::InvalidModulus);
        assert_eq!(
            AlgebraicField::new(&ints(&[-1, 0, -1, 1]), q(2, 1), q(3, 1)).unwrap_err(),
            NumberError::NoRootIsolated
        );
        // two roots of x^2 - 2 in [-2, 2]: no sign change
        assert_eq!(
            AlgebraicField::new(&ints(&[-2, 0, 1]), q(-2, 1), q(2, 1)).unwrap_err(),
            NumberError::NoRootIsolated
        );
    }

    #[test]
    fn modulus_relation_reduces() {
        let f = cubic();
        let a = f.generator();
        let a2 = &a * &a;
        // x · x^2 = x^2 + 1
        assert_eq!(&a * &a2, &a2 + &f.one());
        assert_eq!(a.pow(3).compare(&(&a2 + &f.one())), Ordering::Equal);
    }

    #[test]
    fn inverse_by_euclid() {
        let f = cubic();
        let a = f.generator();
        let inv = a.inv();
        let expected = &(&a * &a) - &a;
        assert_eq!(inv, expected);
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn reducible_modulus_detected() {
        // x^2 - 3x + 2 = (x-1)(x-2); root 2 isolated in [1.5, 3]
        let f = AlgebraicField::new(&ints(&[2, -3, 1]), q(3, 2), q(3, 1)).unwrap();
        let a = f.generator();
        let z = &a - &f.one();
        // a - 1 is a zero divisor... its inverse exists mod (x-1)(x-2)? gcd(x-1, P) = x-1
        assert_eq!(z.checked_inv().unwrap_err(), NumberError::ReducibleModulus);
        assert_eq!(f.zero().checked_inv().unwrap_err(), NumberError::DivisionByZero);
    }

    #[test]
    fn compare_against_rational() {
        let f = cubic();
        let a = f.generator();
        assert_eq!(a.compare(&f.from_rational(&q(1465, 1000))), Ordering::Greater);
        assert_eq!(a.compare(&f.from_rational(&q(1466, 1000))), Ordering::Less);
        assert_eq!(a.compare(&a), Ordering::Equal);
    }

    #[test]
    fn exact_fallback_decides_tiny_differences() {
        let f = cubic();
        let a = f.generator();
        // α - r with r a rational extremely close to α
        let (lo, _) = f.current_interval();
        let d = &a - &f.from_rational(&lo);
        assert_eq!(d.signum(), Ordering::Greater);
        assert_eq!(d.signum_exact(), Ordering::Greater);
    }

    #[test]
    fn nth_root_constructor() {
        let f = AlgebraicField::nth_root(&q(6, 1), 4).unwrap();
        assert!((f.approx() - 6f64.powf(0.25)).abs() < 1e-12);
        let a = f.generator();
        assert_eq!(a.pow(4), f.from_i64(6));
        let inv = a.inv();
        assert!((&a * &inv).is_one());
    }
}
