//! Dense polynomials over Q as coefficient vectors, lowest degree first.
//!
//! These are the workhorses behind field arithmetic; the vectors are kept
//! trimmed (no trailing zeros, the zero polynomial is empty).

use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(x + y);
    }
    trim(&mut out);
    out
}

pub fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    add(a, &neg(b))
}

pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Integer numerators over a common denominator.
pub fn to_integer(a: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let nums = a.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// Integer convolution; the workhorse of every product.
pub fn mul_integer(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
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
    out
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (na, da) = to_integer(a);
    let (nb, db) = to_integer(b);
    let den = da * db;
    let mut out: Vec<Rational> =
        mul_integer(&na, &nb).into_iter().map(|n| Rational::new(n, den.clone())).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics if `b` is zero.
pub fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = b[db].recip();
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = &r[dr] * &lc_inv;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    div_rem(a, b).1
}

pub fn monic(a: &[Rational]) -> Vec<Rational> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(a, &lc.recip()),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = monic(&r);
    }
    monic(&x)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd(
    a: &[Rational],
    b: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last().cloned() {
        None => (Vec::new(), Vec::new(), Vec::new()),
        Some(lc) => {
            let inv = lc.recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

pub fn derivative(a: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn is_squarefree(a: &[Rational]) -> bool {
    degree(&gcd(a, &derivative(a))) == Some(0)
}
