//! Multimodular gcd and exact division in `K[t]` for a number field
//! `K = Q(a)`.
//!
//! For a prime `p` where the minimal polynomial `m` splits into distinct
//! linear factors, `K` reduces to `F_p^d`, one copy per root of `m`. The
//! gcd (or quotient) is taken in each copy, interpolated back to a
//! polynomial in `a`, combined over several primes by CRT and recovered by
//! rational reconstruction. Candidates are accepted only after an exact
//! check, so results never depend on the choice of primes.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::UniPoly;
use crate::zfactor::{equal_degree, fdivrem, fgcd, finv, fmul, fpow_scalar, fpowmod, fsub, ftrim, FPoly};
use crate::{FieldElem, Rational};

const MAX_PRIMES: usize = 400;

fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(n * finv(d, p) % p)
}

/// Deterministic Miller-Rabin for `n < 2^32`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = fpow_scalar(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `d` distinct roots of `m` mod `p`, when `m` splits that way.
fn split_roots(m: &[Rational], p: u64, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let mut f: FPoly = m.iter().map(|c| rational_mod(c, p)).collect::<Option<_>>()?;
    ftrim(&mut f);
    let d = m.len() - 1;
    if f.len() != d + 1 {
        return None;
    }
    if d == 1 {
        return Some(vec![(p - f[0]) % p]);
    }
    // x^p = x mod f exactly when f divides x^p - x, that is, f splits
    // into distinct linear factors.
    let x: FPoly = vec![0, 1];
    let xp = fpowmod(&x, &BigUint::from(p), &f, p);
    if !fsub(&xp, &x, p).is_empty() {
        return None;
    }
    let mut factors = Vec::new();
    equal_degree(&f, 1, p, rng, &mut factors);
    let mut roots: Vec<u64> = factors.iter().map(|g| (p - g[0] * finv(g[1], p) % p) % p).collect();
    roots.sort_unstable();
    roots.dedup();
    (roots.len() == d).then_some(roots)
}

/// Primes where `m` splits, with their roots, found once per field.
type SplitPrimes = Vec<(u64, Vec<u64>)>;

struct PrimeSearch {
    found: SplitPrimes,
    next: u64,
}

static SPLIT_PRIMES: LazyLock<Mutex<HashMap<Vec<Rational>, PrimeSearch>>> = LazyLock::new(Default::default);

/// The `idx`-th prime (downwards from 2^31) where `m` splits completely.
fn split_prime(m: &[Rational], idx: usize) -> Option<(u64, Vec<u64>)> {
    let mut cache = SPLIT_PRIMES.lock().unwrap_or_else(|e| e.into_inner());
    let entry = cache.entry(m.to_vec()).or_insert_with(|| PrimeSearch { found: Vec::new(), next: (1 << 31) - 1 });
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f64);
    while entry.found.len() <= idx {
        if entry.next < 1 << 20 {
            return None;
        }
        let p = entry.next;
        entry.next -= 2;
        if is_prime(p) {
            if let Some(roots) = split_roots(m, p, &mut rng) {
                entry.found.push((p, roots));
            }
        }
    }
    Some(entry.found[idx].clone())
}

/// Images of the coefficients of `a` under `alpha -> root`, or `None`
/// when a denominator vanishes mod `p`.
fn reduce(a: &UniPoly, powers: &[u64], p: u64) -> Option<FPoly> {
    let mut out = Vec::with_capacity(a.coefficients().len());
    for c in a.coefficients() {
        let mut v = 0u64;
        for (q, &pw) in c.coefficients().iter().zip(powers) {
            v = (v + rational_mod(q, p)? * pw) % p;
        }
        out.push(v);
    }
    Some(out)
}

/// Inverse Vandermonde data: values at the roots to power-basis coordinates.
fn interpolation_matrix(roots: &[u64], p: u64) -> Vec<Vec<u64>> {
    let d = roots.len();
    // Lagrange basis L_j(a) = prod_{k != j} (a - r_k) / (r_j - r_k).
    let mut cols = Vec::with_capacity(d);
    for (j, &rj) in roots.iter().enumerate() {
        let mut num: FPoly = vec![1];
        let mut den = 1u64;
        for (k, &rk) in roots.iter().enumerate() {
            if k != j {
                num = fmul(&num, &vec![(p - rk) % p, 1], p);
                den = den * ((rj + p - rk) % p) % p;
            }
        }
        let inv = finv(den, p);
        let mut col: Vec<u64> = num.iter().map(|c| c * inv % p).collect();
        col.resize(d, 0);
        cols.push(col);
    }
    cols
}

fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !(&r1 - &t1 * u).mod_floor(m).is_zero() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Monic gcd of two nonzero polynomials, or `None` when no candidate was
/// certified within the prime budget.
pub(crate) fn modular_gcd(a: &UniPoly, b: &UniPoly) -> Option<UniPoly> {
    let field = a.field().clone();
    let m = field.minimal_polynomial().to_vec();
    let d = field.degree();
    // Residues per coefficient of the monic gcd, d coordinates each.
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut best_deg = usize::MAX;
    let mut last: Option<Vec<Rational>> = None;
    for idx in 0..MAX_PRIMES {
        let Some((p, roots)) = split_prime(&m, idx) else { break };
        let mut images = Vec::with_capacity(d);
        let mut ok = true;
        for &r in &roots {
            let mut powers = vec![1u64; d];
            for i in 1..d {
                powers[i] = powers[i - 1] * r % p;
            }
            match (reduce(a, &powers, p), reduce(b, &powers, p)) {
                (Some(ra), Some(rb)) if ra.last() != Some(&0) && rb.last() != Some(&0) => {
                    images.push(fgcd(&ra, &rb, p));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let deg = images[0].len() - 1;
        if images.iter().any(|g| g.len() - 1 != deg) || deg > best_deg {
            continue;
        }
        if deg == 0 {
            return Some(UniPoly::one(&field, a.var()));
        }
        // The image has full degree, so the gcd is the smaller input when it
        // divides the larger one; one exact division settles that.
        if best_deg == usize::MAX {
            let (small, large) = if a.degree() <= b.degree() { (a, b) } else { (b, a) };
            if Some(deg) == small.degree() && small.divides(large) {
                return Some(small.monic());
            }
        }
        if deg < best_deg {
            best_deg = deg;
            acc = vec![BigInt::zero(); (deg + 1) * d];
            modulus = BigInt::one();
            last = None;
        }
        // Power-basis coordinates mod p of every coefficient.
        let Some(g) = accumulate(&mut acc, &mut modulus, &mut last, &images, &roots, p, a) else { continue };
        if g.divides(a) && g.divides(b) {
            return Some(g);
        }
    }
    None
}

/// Adds the images at one prime to the CRT accumulator and returns the
/// reconstructed polynomial once two consecutive reconstructions agree.
fn accumulate(
    acc: &mut [BigInt],
    modulus: &mut BigInt,
    last: &mut Option<Vec<Rational>>,
    images: &[FPoly],
    roots: &[u64],
    p: u64,
    like: &UniPoly,
) -> Option<UniPoly> {
    let d = roots.len();
    let interp = interpolation_matrix(roots, p);
    let pb = BigInt::from(p);
    let inv_m = BigInt::from(finv((&*modulus % &pb).to_u64().unwrap(), p));
    let coeff = |g: &FPoly, k: usize| g.get(k).copied().unwrap_or(0);
    for k in 0..acc.len() / d {
        for i in 0..d {
            let v = images.iter().zip(&interp).fold(0u64, |s, (g, col)| (s + coeff(g, k) * col[i]) % p);
            let u = &acc[k * d + i];
            let delta = ((BigInt::from(v) - u) * &inv_m).mod_floor(&pb);
            acc[k * d + i] = u + &*modulus * delta;
        }
    }
    *modulus *= &pb;
    let candidate: Vec<Rational> = acc.iter().map(|u| rational_reconstruct(u, modulus)).collect::<Option<_>>()?;
    if last.as_ref() != Some(&candidate) {
        *last = Some(candidate);
        return None;
    }
    let field = like.field();
    let coeffs: Vec<FieldElem> = candidate.chunks(d).map(|c| field.from_coeffs(c.to_vec())).collect();
    Some(UniPoly::from_coeffs_in(field, like.var(), coeffs))
}

/// `Some(Some(q))` with `a = q b`, `Some(None)` when `b` does not divide `a`,
/// and `None` when the prime budget ran out.
///
/// A nonzero remainder at a good prime proves non-divisibility: the
/// reduction is a ring map on the `p`-integral elements, and the quotient
/// stays `p`-integral because the leading coefficient of `b` is a unit
/// there.
pub(crate) fn modular_exact_div(a: &UniPoly, b: &UniPoly) -> Option<Option<UniPoly>> {
    let field = a.field().clone();
    let m = field.minimal_polynomial().to_vec();
    let d = field.degree();
    let (da, db) = (a.degree()?, b.degree()?);
    if da < db {
        return Some(None);
    }
    let mut acc = vec![BigInt::zero(); (da - db + 1) * d];
    let mut modulus = BigInt::one();
    let mut last = None;
    for idx in 0..MAX_PRIMES {
        let Some((p, roots)) = split_prime(&m, idx) else { break };
        let mut images = Vec::with_capacity(d);
        for &r in &roots {
            let mut powers = vec![1u64; d];
            for i in 1..d {
                powers[i] = powers[i - 1] * r % p;
            }
            match (reduce(a, &powers, p), reduce(b, &powers, p)) {
                (Some(ra), Some(rb)) if rb.last() != Some(&0) => {
                    let (q, r) = fdivrem(&ra, &rb, p);
                    if !r.is_empty() {
                        return Some(None);
                    }
                    images.push(q);
                }
                _ => break,
            }
        }
        if images.len() != d {
            continue;
        }
        let Some(q) = accumulate(&mut acc, &mut modulus, &mut last, &images, &roots, p, a) else { continue };
        if &q * b == *a {
            return Some(Some(q));
        }
    }
    None
}
