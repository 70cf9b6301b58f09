//! Factorization over Q by the Berlekamp-Zassenhaus route: factor modulo a
//! small prime with Cantor-Zassenhaus, lift with quadratic Hensel steps on a
//! factor tree, then recombine by trial division over Z.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::{qpoly, Rational};

const CANDIDATE_PRIMES: usize = 6;

/// Factors a polynomial with rational coefficients. Returns the leading
/// coefficient and the monic irreducible factors with multiplicities,
/// ordered by degree and then coefficients.
pub fn factor_rational(p: &[Rational]) -> Result<(Rational, Vec<(Vec<Rational>, usize)>)> {
    let mut p = p.to_vec();
    qpoly::trim(&mut p);
    let unit = p.last().cloned().ok_or(AlgebraError::Unsupported(
        "cannot factor the zero polynomial".into(),
    ))?;
    let mut out = Vec::new();
    for (part, mult) in squarefree_q(&qpoly::monic(&p)) {
        for f in factor_squarefree_z(&primitive_integer(&part))? {
            out.push((qpoly::monic(&to_rational(&f)), mult));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    Ok((unit, out))
}

fn squarefree_q(f: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let mut parts = Vec::new();
    if f.len() <= 1 {
        return parts;
    }
    let df = qpoly::derivative(f);
    let mut a = qpoly::gcd(f, &df);
    let mut b = qpoly::div_rem(f, &a).0;
    let mut c = qpoly::div_rem(&df, &a).0;
    let mut d = qpoly::sub(&c, &qpoly::derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        a = qpoly::gcd(&b, &d);
        if a.len() > 1 {
            parts.push((a.clone(), i));
        }
        b = qpoly::div_rem(&b, &a).0;
        c = qpoly::div_rem(&d, &a).0;
        d = qpoly::sub(&c, &qpoly::derivative(&b));
        i += 1;
    }
    parts
}

type ZPoly = Vec<BigInt>;

fn ztrim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Scales to integer coefficients with content 1 and positive leading term.
fn primitive_integer(p: &[Rational]) -> ZPoly {
    let mut l = BigInt::one();
    for c in p {
        l = l.lcm(c.denom());
    }
    let mut z: ZPoly = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    ztrim(&mut z);
    primitive_part(&z)
}

fn primitive_part(z: &ZPoly) -> ZPoly {
    let mut g = BigInt::zero();
    for c in z {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return z.clone();
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    z.iter().map(|c| c / &g).collect()
}

fn to_rational(z: &ZPoly) -> Vec<Rational> {
    z.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(&mut out);
    out
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    ztrim(&mut out);
    out
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    ztrim(&mut out);
    out
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut out);
    out
}

fn zsymmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut out);
    out
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for top in (db..r.len()).rev() {
        let c = r[top].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        let shift = top - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = (&r[shift + j] - &c * bj).mod_floor(m);
        }
        q[shift] = c;
    }
    r.truncate(db);
    ztrim(&mut r);
    ztrim(&mut q);
    (q, r)
}

/// Exact division over Z, or `None`.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for top in (db..r.len()).rev() {
        if r[top].is_zero() {
            continue;
        }
        let (c, rem) = r[top].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = top - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    ztrim(&mut q);
    Some(q)
}

// Polynomials over F_p with p < 2^31, lowest degree first.
pub(crate) type FPoly = Vec<u64>;

pub(crate) fn ftrim(a: &mut FPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn fsub(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let n = a.len().max(b.len());
    let mut out: FPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    ftrim(&mut out);
    out
}

pub(crate) fn fmul(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ftrim(&mut out);
    out
}

pub(crate) fn finv(a: u64, p: u64) -> u64 {
    fpow_scalar(a, p - 2, p)
}

pub(crate) fn fpow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

pub(crate) fn fdivrem(a: &FPoly, b: &FPoly, p: u64) -> (FPoly, FPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    ftrim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = finv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for top in (db..r.len()).rev() {
        if r[top] == 0 {
            continue;
        }
        let c = r[top] * inv % p;
        let shift = top - db;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
        }
        q[shift] = c;
    }
    r.truncate(db);
    ftrim(&mut r);
    ftrim(&mut q);
    (q, r)
}

pub(crate) fn fmonic(a: &FPoly, p: u64) -> FPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = finv(lc, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

pub(crate) fn fgcd(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    ftrim(&mut x);
    ftrim(&mut y);
    while !y.is_empty() {
        let r = fdivrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fmonic(&x, p)
}

/// `(g, s, t)` with `s*a + t*b = g` monic.
fn fext_gcd(a: &FPoly, b: &FPoly, p: u64) -> (FPoly, FPoly, FPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (FPoly, FPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FPoly, FPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fdivrem(&r0, &r1, p);
        let s2 = fsub(&s0, &fmul(&q, &s1, p), p);
        let t2 = fsub(&t0, &fmul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = finv(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &FPoly| -> FPoly { v.iter().map(|&c| c * inv % p).collect() };
    (sc(&r0), sc(&s0), sc(&t0))
}

pub(crate) fn fpowmod(base: &FPoly, e: &BigUint, m: &FPoly, p: u64) -> FPoly {
    let mut result: FPoly = vec![1];
    let mut b = fdivrem(base, m, p).1;
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = fdivrem(&fmul(&result, &b, p), m, p).1;
        }
        if i + 1 < bits {
            b = fdivrem(&fmul(&b, &b, p), m, p).1;
        }
    }
    result
}

fn fderivative(a: &FPoly, p: u64) -> FPoly {
    let mut out: FPoly = a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    ftrim(&mut out);
    out
}

fn reduce_mod_p(z: &ZPoly, p: u64) -> FPoly {
    let pb = BigInt::from(p);
    let mut out: FPoly = z.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    ftrim(&mut out);
    out
}

fn lift_to_z(a: &FPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Monic irreducible factors of a squarefree monic polynomial over F_p.
fn factor_mod_p(f: &FPoly, p: u64, rng: &mut ChaCha8Rng) -> Vec<FPoly> {
    let mut out = Vec::new();
    let x: FPoly = vec![0, 1];
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    let pbig = BigUint::from(p);
    while rest.len() > 1 && 2 * d < rest.len() {
        h = fpowmod(&h, &pbig, &rest, p);
        let g = fgcd(&fsub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, rng, &mut out);
            rest = fdivrem(&rest, &g, p).0;
            h = fdivrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(fmonic(&rest, p));
    }
    out
}

pub(crate) fn equal_degree(g: &FPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<FPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.clone());
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: FPoly = (0..n).map(|_| rng.random_range(0..p)).collect();
        ftrim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = fsub(&fpowmod(&a, &e, g, p), &vec![1], p);
        let h = fgcd(&b, g, p);
        if h.len() > 1 && h.len() < g.len() {
            equal_degree(&h, d, p, rng, out);
            equal_degree(&fdivrem(g, &h, p).0, d, p, rng, out);
            return;
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Factors a squarefree primitive integer polynomial with positive leading
/// coefficient into irreducible primitive factors.
fn factor_squarefree_z(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    if f[0].is_zero() {
        let rest = primitive_part(&f[1..].to_vec());
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_z(&rest)?);
        return Ok(out);
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d776c);
    let mut best: Option<(u64, Vec<FPoly>)> = None;
    let mut tried = 0;
    for p in small_primes().take(400) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fmonic(&reduce_mod_p(f, p), p);
        if fgcd(&fp, &fderivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p, &mut rng);
        if facs.len() == 1 {
            return Ok(vec![f.clone()]);
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= CANDIDATE_PRIMES {
            break;
        }
    }
    let (p, modular) = best.ok_or_else(|| AlgebraError::FactorizationFailure {
        reason: "no suitable prime found".into(),
        partial: Vec::new(),
    })?;

    // Coefficients of lc * (monic factor) are bounded by |lc| 2^n ||f||_2.
    let max = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = lc.abs() * (BigInt::one() << n) * BigInt::from(n as u64 + 1) * max;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift_tree(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

/// Lifts `f = lc * prod(factors) mod p` to the same shape modulo
/// `modulus`, a power of `p` of the form p^(2^k).
fn hensel_lift_tree(f: &ZPoly, factors: &[FPoly], p: u64, modulus: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let lc = f.last().unwrap();
        let inv = lc.mod_floor(modulus).modinv(modulus).expect("lc is a unit");
        return vec![zmod(&f.iter().map(|c| c * &inv).collect(), modulus)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let prod = |fs: &[FPoly]| fs.iter().fold(vec![1u64], |acc, g| fmul(&acc, g, p));
    let a = prod(left);
    let b = prod(right);
    let lc_p = reduce_mod_p(&vec![f.last().unwrap().clone()], p)[0];
    let g0: FPoly = a.iter().map(|&c| c * lc_p % p).collect();
    let (_, s0, t0) = fext_gcd(&g0, &b, p);
    let (g, h) = hensel_pair(f, &lift_to_z(&g0), &lift_to_z(&b), &lift_to_z(&s0), &lift_to_z(&t0), p, modulus);
    let mut out = hensel_lift_tree(&g, left, p, modulus);
    out.extend(hensel_lift_tree(&h, right, p, modulus));
    out
}

/// Repeated quadratic Hensel steps: `f = g h` with `h` monic.
fn hensel_pair(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    p: u64,
    modulus: &BigInt,
) -> (ZPoly, ZPoly) {
    let (mut g, mut h, mut s, mut t) = (g.clone(), h.clone(), s.clone(), t.clone());
    let mut m = BigInt::from(p);
    while &m < modulus {
        let m2 = &m * &m;
        let e = zmod(&zsub(f, &zmul(&g, &h)), &m2);
        let (q, r) = zdivrem_monic(&zmul(&s, &e), &h, &m2);
        let g_new = zmod(&zadd(&zadd(&g, &zmul(&t, &e)), &zmul(&q, &g)), &m2);
        let h_new = zmod(&zadd(&h, &r), &m2);
        let b = zmod(&zsub(&zadd(&zmul(&s, &g_new), &zmul(&t, &h_new)), &vec![BigInt::one()]), &m2);
        let (c, d) = zdivrem_monic(&zmul(&s, &b), &h_new, &m2);
        s = zmod(&zsub(&s, &d), &m2);
        t = zmod(&zsub(&zsub(&t, &zmul(&t, &b)), &zmul(&c, &g_new)), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g, h)
}

fn recombine(f: &ZPoly, lifted: Vec<ZPoly>, modulus: &BigInt) -> Result<Vec<ZPoly>> {
    let mut remaining: Vec<ZPoly> = lifted;
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = zmod(&zmul(&g, &remaining[i]), modulus);
            }
            let g = primitive_part(&zsymmetric(&g, modulus));
            if !f[0].is_zero() && (g[0].is_zero() || !(&f[0] % &g[0]).is_zero()) {
                continue;
            }
            if let Some(q) = zdiv_exact(&f, &g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                f = primitive_part(&q);
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => size += 1,
        }
    }
    found.push(f);
    Ok(found)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| crate::rat(c)).collect()
    }

    #[test]
    fn swinnerton_dyer_like_quartic_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime into degree <= 2 pieces.
        let (_, f) = factor_rational(&q(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn product_of_cyclotomics() {
        // (x^2+x+1)(x^2+1)(x-3)^2
        let a = qpoly::mul(&q(&[1, 1, 1]), &q(&[1, 0, 1]));
        let b = qpoly::mul(&q(&[-3, 1]), &q(&[-3, 1]));
        let (u, f) = factor_rational(&qpoly::scale(&qpoly::mul(&a, &b), &crate::rat(5))).unwrap();
        assert_eq!(u, crate::rat(5));
        assert_eq!(f, vec![(q(&[-3, 1]), 2), (q(&[1, 0, 1]), 1), (q(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn non_monic_integer_factors() {
        // (2x - 1)(3x^2 + 5)
        let p = qpoly::mul(&q(&[-1, 2]), &q(&[5, 0, 3]));
        let (_, f) = factor_rational(&p).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0, vec![Rational::new((-1).into(), 2.into()), crate::rat(1)]);
    }
}
