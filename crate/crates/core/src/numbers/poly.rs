//! Dense univariate polynomials over Q, little-endian coefficient order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn from_ints(coeffs: &[BigInt]) -> QPoly {
    let mut p: QPoly = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    trim(&mut p);
    p
}

pub(crate) fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn eval_int(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

pub(crate) fn derivative(p: &[BigRational]) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

fn sub_scaled_shifted(a: &mut QPoly, b: &[BigRational], factor: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (i, c) in b.iter().enumerate() {
        if !c.is_zero() {
            a[i + shift] -= factor * c;
        }
    }
    trim(a);
}

/// Euclidean division; `b` must be nonzero.
pub(crate) fn div_rem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        q[shift] = factor.clone();
        sub_scaled_shifted(&mut r, b, &factor, shift);
    }
    trim(&mut q);
    (q, r)
}

fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)` made monic.
pub(crate) fn gcd_with_cofactor(a: &[BigRational], m: &[BigRational]) -> (QPoly, QPoly) {
    let mut r0: QPoly = m.to_vec();
    let mut r1: QPoly = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: QPoly = Vec::new();
    let mut s1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let lead = r0.last().cloned().unwrap_or_else(BigRational::one);
    let g = r0.iter().map(|c| c / &lead).collect();
    let s = s0.iter().map(|c| c / &lead).collect();
    (g, s)
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign_of(&eval(p, x))).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the half-open interval (lo, hi].
pub(crate) fn sturm_count(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let mut seq: Vec<QPoly> = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    sign_changes(&seq, lo).saturating_sub(sign_changes(&seq, hi))
}

/// Integer primitive form with a positive leading coefficient.
pub(crate) fn primitive_integer(p: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return ints;
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    for c in ints.iter_mut() {
        *c /= &g;
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn sturm_counts_roots_of_cubic() {
        // x^3 - x^2 - 1 has a single real root near 1.4656
        let p = vec![q(-1), q(0), q(-1), q(1)];
        assert_eq!(sturm_count(&p, &q(1), &q(2)), 1);
        assert_eq!(sturm_count(&p, &q(-5), &q(5)), 1);
        // x^2 - 2 has two roots in (-2, 2]
        let p2 = vec![q(-2), q(0), q(1)];
        assert_eq!(sturm_count(&p2, &q(-2), &q(2)), 2);
        assert_eq!(sturm_count(&p2, &q(0), &q(2)), 1);
    }

    #[test]
    fn cofactor_inverts_modulo() {
        let m = vec![q(-1), q(0), q(-1), q(1)];
        let a = vec![q(0), q(1)];
        let (g, s) = gcd_with_cofactor(&a, &m);
        assert_eq!(g, vec![q(1)]);
        // 1/x = x^2 - x
        let mut s = s;
        trim(&mut s);
        let (_, r) = div_rem(&s, &m);
        assert_eq!(r, vec![q(0), q(-1), q(1)]);
    }
}
