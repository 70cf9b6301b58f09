//! Membership of `sum a_i C_i` in `[p] MW` for a verified presentation of
//! the Mordell-Weil group, with independent re-verification of every
//! verdict.

use mwl_algebra::{linalg, rational_to_string, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::heights::EllipticSurface;
use crate::sections::Section;
use crate::snf::{smith_normal_form, IntMatrix};

/// A claimed decomposition `MW = free part + torsion`.
#[derive(Clone, Debug)]
pub struct MWPresentation {
    pub basis: Vec<(String, Section)>,
    /// Generators of the torsion subgroup with their orders; they must
    /// generate a direct product `Z/n_1 x ... x Z/n_k`.
    pub torsion: Vec<(String, Section, u64)>,
    pub claimed_lattice: Option<String>,
}

impl MWPresentation {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().map(|t| t.2).product()
    }

    fn basis_sections(&self) -> Vec<Section> {
        self.basis.iter().map(|b| b.1.clone()).collect()
    }

    /// `sum c_j tau_j`.
    pub fn torsion_element(&self, surface: &EllipticSurface, coeffs: &[u64]) -> Result<Section> {
        let m = surface.model();
        let mut acc = Section::Zero;
        for ((_, g, _), &c) in self.torsion.iter().zip(coeffs) {
            acc = m.add(&acc, &m.smul(c as i64, g)?)?;
        }
        Ok(acc)
    }

    /// All coefficient vectors `0 <= c_j < n_j`.
    fn torsion_coefficients(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for (_, _, n) in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..*n).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    pub gram: linalg::Matrix,
    pub gram_det: Rational,
    /// `|tors|^2 / prod det(-A_v)`, the determinant of the full lattice.
    pub predicted_det: Rational,
    /// `det(gram) / predicted`; the squared index when the basis spans a
    /// sublattice.
    pub ratio: Option<Rational>,
    pub expected_rank: Option<usize>,
    pub checks: Vec<Check>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn is_positive_definite(g: &linalg::Matrix) -> bool {
    // Sylvester: every leading principal minor is positive.
    (1..=g.len()).all(|k| {
        let minor: linalg::Matrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        linalg::det(&minor).is_positive()
    })
}

/// Checks the Gram matrix, the torsion data and the discriminant identity
/// `det(gram) = |tors|^2 / prod_v det(-A_v)`.
pub fn verify_presentation(surface: &EllipticSurface, pres: &MWPresentation) -> Result<PresentationReport> {
    let m = surface.model();
    let mut checks = Vec::new();
    let gram = surface.gram(&pres.basis_sections())?;
    let gram_det = if gram.is_empty() { Rational::one() } else { linalg::det(&gram) };
    let pd = is_positive_definite(&gram);
    checks.push(Check::new("gram positive definite", pd, format!("det = {}", rational_to_string(&gram_det))));

    let mut orders_ok = true;
    let mut detail = Vec::new();
    for (label, g, n) in &pres.torsion {
        let actual = crate::torsion::order_of(m, g, *n)?;
        let ok = actual == Some(*n);
        orders_ok &= ok;
        detail.push(format!("{label}: claimed {n}, found {}", actual.map_or("none".into(), |o| o.to_string())));
    }
    checks.push(Check::new("torsion orders", orders_ok, detail.join("; ")));

    let elements: Vec<Section> = pres
        .torsion_coefficients()
        .iter()
        .map(|c| pres.torsion_element(surface, c))
        .collect::<Result<_>>()?;
    let mut distinct = elements.clone();
    distinct.sort_by(|a, b| a.canonical_cmp(b));
    distinct.dedup();
    let independent = distinct.len() as u64 == pres.torsion_order();
    checks.push(Check::new(
        "torsion generators independent",
        independent,
        format!("{} distinct elements, product of orders {}", distinct.len(), pres.torsion_order()),
    ));

    let full = surface.torsion()?;
    let complete = full.order() == pres.torsion_order() && independent;
    checks.push(Check::new(
        "torsion complete",
        complete,
        format!("torsion subgroup {} of order {}", full.structure(), full.order()),
    ));

    let mut orth = true;
    for (_, b) in &pres.basis {
        for (_, t, _) in &pres.torsion {
            orth &= surface.pairing(b, t)?.is_zero();
        }
    }
    checks.push(Check::new("basis orthogonal to torsion", orth, ""));

    let comp = Rational::from_integer(BigInt::from(surface.component_group_product()));
    let tors = Rational::from_integer(BigInt::from(pres.torsion_order()));
    let predicted_det = &tors * &tors / comp;
    let ratio = (!gram_det.is_zero()).then(|| &gram_det / &predicted_det);
    let det_ok = pd && ratio.as_ref().is_some_and(|r| r.is_one());
    checks.push(Check::new(
        "discriminant identity",
        det_ok,
        format!(
            "det(gram) = {}, |tors|^2 / prod det(-A_v) = {}, ratio = {}",
            rational_to_string(&gram_det),
            rational_to_string(&predicted_det),
            ratio.as_ref().map_or("undefined".into(), rational_to_string)
        ),
    ));

    // Shioda-Tate for rational elliptic surfaces: rank = 8 - sum (m_v - 1).
    let expected_rank = (surface.chi() == 1).then(|| {
        let t: usize = surface.configuration().reducible().map(|f| (f.components - 1) * f.place.degree()).sum();
        8 - t
    });
    if let Some(er) = expected_rank {
        checks.push(Check::new(
            "rank",
            er == pres.rank(),
            format!("basis has {} elements, Shioda-Tate rank {er}", pres.rank()),
        ));
    }
    Ok(PresentationReport { gram, gram_det, predicted_det, ratio, expected_rank, checks })
}

/// Coordinates of a section in a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    pub free: Vec<BigInt>,
    /// Coefficients of the torsion generators, reduced mod their orders.
    pub torsion: Vec<u64>,
}

/// Solves `gram x = (<P, b_i>)` for integral `x`, then finds the torsion
/// part by exhaustion and verifies the reconstruction exactly.
pub fn coordinates_of(surface: &EllipticSurface, pres: &MWPresentation, p: &Section) -> Result<Coordinates> {
    let m = surface.model();
    let basis = pres.basis_sections();
    let gram = surface.gram(&basis)?;
    let rhs: Vec<Rational> = basis.iter().map(|b| surface.pairing(p, b)).collect::<Result<_>>()?;
    let x = if basis.is_empty() {
        Vec::new()
    } else {
        linalg::solve(&gram, &rhs).ok_or_else(|| CoreError::NotInSpan("Gram matrix is singular".into()))?
    };
    let mut free = Vec::new();
    for v in &x {
        if !v.is_integer() {
            return Err(CoreError::NotInSpan(format!("{p} has non-integral coordinate {}", rational_to_string(v))));
        }
        free.push(v.to_integer());
    }
    let mut rest = p.clone();
    for (c, b) in free.iter().zip(&basis) {
        let c = c.to_i64().ok_or_else(|| CoreError::Unsupported("coordinate too large".into()))?;
        rest = m.add(&rest, &m.smul(-c, b)?)?;
    }
    for coeffs in pres.torsion_coefficients() {
        if pres.torsion_element(surface, &coeffs)? == rest {
            return Ok(Coordinates { free, torsion: coeffs });
        }
    }
    Err(CoreError::NotInSpan(format!("{p} minus its free part is not in the declared torsion group")))
}

fn combine(coords: &[Coordinates], a: &[u64], pres: &MWPresentation) -> Coordinates {
    let r = coords.first().map_or(0, |c| c.free.len());
    let mut free = vec![BigInt::zero(); r];
    let mut torsion = vec![0u64; pres.torsion.len()];
    for (c, &ai) in coords.iter().zip(a) {
        for (f, v) in free.iter_mut().zip(&c.free) {
            *f += v * BigInt::from(ai);
        }
        for ((t, v), (_, _, n)) in torsion.iter_mut().zip(&c.torsion).zip(&pres.torsion) {
            *t = (*t + (*v % n) * (ai % n)) % n;
        }
    }
    Coordinates { free, torsion }
}

/// `p`-divisibility of an element given by coordinates.
pub fn coordinates_p_divisible(c: &Coordinates, pres: &MWPresentation, p: u64) -> bool {
    let pb = BigInt::from(p);
    c.free.iter().all(|v| v.mod_floor(&pb).is_zero())
        && c.torsion.iter().zip(&pres.torsion).all(|(&t, (_, _, n))| t % p.gcd(n) == 0)
}

pub fn p_divisible(surface: &EllipticSurface, pres: &MWPresentation, s: &Section, p: u64) -> Result<bool> {
    Ok(coordinates_p_divisible(&coordinates_of(surface, pres, s)?, pres, p))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(CoreError::Precondition(format!("{p} is not a prime")));
    }
    Ok(())
}

fn check_no_opposites(surface: &EllipticSurface, cs: &[Section]) -> Result<()> {
    if cs.is_empty() {
        return Err(CoreError::Precondition("no sections given".into()));
    }
    let m = surface.model();
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i..] {
            if &m.neg(a) == b && !a.is_zero() {
                return Err(CoreError::Precondition(format!("{a} and {b} are inverse to each other")));
            }
        }
    }
    Ok(())
}

/// Rank over `F_p` of integer vectors.
fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = mod_inverse(m[rank][c], p);
        for v in m[rank].iter_mut() {
            *v = (*v * inv).rem_euclid(p);
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                let pivot_row = m[rank].clone();
                for (v, w) in m[i].iter_mut().zip(&pivot_row) {
                    *v = (*v - f * w).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let e = a.extended_gcd(&p);
    e.x.rem_euclid(p)
}

/// Whether `target` is in the `F_p`-span of `vecs`.
fn in_span_mod_p(vecs: &[Vec<i64>], target: &[i64], p: i64) -> bool {
    let base = rank_mod_p(vecs, p);
    let mut with = vecs.to_vec();
    with.push(target.to_vec());
    rank_mod_p(&with, p) == base
}

fn small_coords(coords: &[Coordinates], p: u64) -> Result<Vec<Vec<i64>>> {
    let pb = BigInt::from(p);
    coords
        .iter()
        .map(|c| {
            c.free
                .iter()
                .map(|v| v.mod_floor(&pb).to_i64().ok_or_else(|| CoreError::Unsupported("prime too large".into())))
                .collect()
        })
        .collect()
}

/// Lexicographically least `(a_i)` with `1 <= a_i < p` and
/// `sum a_i C_i` in `[p] MW`, searched depth first with mod-`p` span
/// pruning on the free coordinates.
pub fn search_multipliers(coords: &[Coordinates], pres: &MWPresentation, p: u64) -> Result<Option<Vec<u64>>> {
    let vecs = small_coords(coords, p)?;
    let r = vecs.first().map_or(0, |v| v.len());
    let mut a = Vec::with_capacity(vecs.len());
    let mut partial = vec![0i64; r];
    fn dfs(
        i: usize,
        vecs: &[Vec<i64>],
        coords: &[Coordinates],
        pres: &MWPresentation,
        p: u64,
        a: &mut Vec<u64>,
        partial: &mut Vec<i64>,
    ) -> Option<Vec<u64>> {
        let pi = p as i64;
        if i == vecs.len() {
            if partial.iter().all(|v| *v == 0) && coordinates_p_divisible(&combine(coords, a, pres), pres, p) {
                return Some(a.clone());
            }
            return None;
        }
        let neg: Vec<i64> = partial.iter().map(|v| (-v).rem_euclid(pi)).collect();
        if !in_span_mod_p(&vecs[i..], &neg, pi) {
            return None;
        }
        for ai in 1..p {
            let saved = partial.clone();
            for (s, v) in partial.iter_mut().zip(&vecs[i]) {
                *s = (*s + ai as i64 * v).rem_euclid(pi);
            }
            a.push(ai);
            if let Some(w) = dfs(i + 1, vecs, coords, pres, p, a, partial) {
                return Some(w);
            }
            a.pop();
            *partial = saved;
        }
        None
    }
    Ok(dfs(0, &vecs, coords, pres, p, &mut a, &mut partial))
}

/// The divisor section `s0` with `[p] s0 = sum a_i C_i`, built from
/// coordinates; the caller re-checks it by section arithmetic.
pub fn divisor_section(
    surface: &EllipticSurface,
    pres: &MWPresentation,
    combined: &Coordinates,
    p: u64,
) -> Result<Section> {
    let m = surface.model();
    let pb = BigInt::from(p);
    let mut s0 = Section::Zero;
    for (c, (_, b)) in combined.free.iter().zip(&pres.basis) {
        let q = (c / &pb).to_i64().ok_or_else(|| CoreError::Unsupported("coordinate too large".into()))?;
        s0 = m.add(&s0, &m.smul(q, b)?)?;
    }
    let target = pres.torsion_element(surface, &combined.torsion)?;
    for coeffs in pres.torsion_coefficients() {
        let u = pres.torsion_element(surface, &coeffs)?;
        if m.smul(p as i64, &u)? == target {
            return m.add(&s0, &u);
        }
    }
    Err(CoreError::InternalInconsistency("torsion part is not p-divisible".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exists { multipliers: Vec<u64>, divisor: Section, divisor_coordinates: Coordinates },
    NotExists,
}

/// Result of a query for one prime, with its re-verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeResult {
    pub p: u64,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

/// Limit for the exhaustive re-check of negative verdicts.
pub const EXHAUSTIVE_MAX_SECTIONS: usize = 3;
pub const EXHAUSTIVE_MAX_PRIME: u64 = 7;

/// `exists_cover_multipliers` with independent re-verification.
pub fn exists_cover_multipliers(
    surface: &EllipticSurface,
    pres: &MWPresentation,
    cs: &[Section],
    p: u64,
) -> Result<PrimeResult> {
    check_prime(p)?;
    check_no_opposites(surface, cs)?;
    let coords: Vec<Coordinates> = cs.iter().map(|c| coordinates_of(surface, pres, c)).collect::<Result<_>>()?;
    decide_with_coordinates(surface, pres, cs, &coords, p)
}

fn decide_with_coordinates(
    surface: &EllipticSurface,
    pres: &MWPresentation,
    cs: &[Section],
    coords: &[Coordinates],
    p: u64,
) -> Result<PrimeResult> {
    let m = surface.model();
    let mut checks = Vec::new();
    match search_multipliers(coords, pres, p)? {
        Some(a) => {
            let combined = combine(coords, &a, pres);
            let divisor = divisor_section(surface, pres, &combined, p)?;
            let mut lhs = Section::Zero;
            for (c, &ai) in cs.iter().zip(&a) {
                lhs = m.add(&lhs, &m.smul(ai as i64, c)?)?;
            }
            let ok = m.smul(p as i64, &divisor)? == lhs;
            checks.push(Check::new(
                "divisor reconstruction",
                ok,
                format!("[{p}] s0 equals the combination with multipliers {a:?}"),
            ));
            if !ok {
                return Err(CoreError::InternalInconsistency("divisor section does not reproduce the combination".into()));
            }
            let divisor_coordinates = coordinates_of(surface, pres, &divisor)?;
            Ok(PrimeResult { p, verdict: Verdict::Exists { multipliers: a, divisor, divisor_coordinates }, checks })
        }
        None => {
            if cs.len() <= EXHAUSTIVE_MAX_SECTIONS && p <= EXHAUSTIVE_MAX_PRIME {
                let mut a = vec![1u64; cs.len()];
                let mut count = 0u64;
                let mut found = false;
                loop {
                    count += 1;
                    if coordinates_p_divisible(&combine(coords, &a, pres), pres, p) {
                        found = true;
                        break;
                    }
                    let mut i = 0;
                    while i < a.len() {
                        a[i] += 1;
                        if a[i] < p {
                            break;
                        }
                        a[i] = 1;
                        i += 1;
                    }
                    if i == a.len() {
                        break;
                    }
                }
                checks.push(Check::new(
                    "exhaustive search",
                    !found,
                    format!("{count} multiplier vectors in [1, {}]^{} tried", p - 1, cs.len()),
                ));
                if found {
                    return Err(CoreError::InternalInconsistency("exhaustive search contradicts the pruned search".into()));
                }
            } else {
                checks.push(Check::new("exhaustive search", true, "skipped: search space too large"));
            }
            Ok(PrimeResult { p, verdict: Verdict::NotExists, checks })
        }
    }
}

/// Verdict for all odd primes at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPrimeAnalysis {
    /// Integer basis of the left kernel of the coordinate matrix.
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub invariant_factors: Vec<BigInt>,
    /// Verdict for every odd prime outside `exceptional`.
    pub generic_exists: bool,
    /// Primes where the generic argument does not apply, each decided by
    /// a direct search.
    pub exceptional: Vec<PrimeResult>,
}

impl OddPrimeAnalysis {
    pub fn summary(&self) -> String {
        let differing: Vec<u64> = self
            .exceptional
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Exists { .. }) != self.generic_exists)
            .map(|r| r.p)
            .collect();
        match (self.generic_exists, differing.is_empty()) {
            (true, true) => "exists for all odd p".into(),
            (false, true) => "exists for no odd p".into(),
            (true, false) => format!("exists for all odd p except {differing:?}"),
            (false, false) => format!("exists only for p in {differing:?}"),
        }
    }
}

fn odd_primes_dividing(n: &BigInt, out: &mut Vec<u64>) {
    let mut n = n.abs();
    if n.is_zero() {
        return;
    }
    let mut d = BigInt::from(3);
    while n.is_even() {
        n /= 2;
    }
    while &d * &d <= n {
        while (&n % &d).is_zero() {
            if let Some(v) = d.to_u64() {
                out.push(v);
            }
            n /= &d;
        }
        d += 2;
    }
    if n > BigInt::one() {
        if let Some(v) = n.to_u64() {
            out.push(v);
        }
    }
}

/// Decides the question for every odd prime using the Smith normal form
/// of the coordinate matrix. For `p` not dividing an invariant factor,
/// the left kernel mod `p` is the reduction of the integer left kernel,
/// and a solution with all `a_i` nonzero exists as soon as no kernel
/// column vanishes mod `p` and `p` exceeds the number of sections.
pub fn all_odd_p_analysis(surface: &EllipticSurface, pres: &MWPresentation, cs: &[Section]) -> Result<OddPrimeAnalysis> {
    check_no_opposites(surface, cs)?;
    let coords: Vec<Coordinates> = cs.iter().map(|c| coordinates_of(surface, pres, c)).collect::<Result<_>>()?;
    let n = cs.len();
    let r = pres.rank();
    let mat: IntMatrix = if r == 0 {
        vec![Vec::new(); n]
    } else {
        coords.iter().map(|c| c.free.clone()).collect()
    };
    let snf = smith_normal_form(&mat);
    let rank = snf.rank();
    let kernel_basis: Vec<Vec<BigInt>> = snf.left[rank..].to_vec();
    let column_gcds: Vec<BigInt> = (0..n)
        .map(|i| kernel_basis.iter().fold(BigInt::zero(), |g, row| g.gcd(&row[i])))
        .collect();
    let generic_exists = !kernel_basis.is_empty() && column_gcds.iter().all(|g| !g.is_zero());
    let mut bad = Vec::new();
    for d in &snf.invariants {
        odd_primes_dividing(d, &mut bad);
    }
    for g in &column_gcds {
        odd_primes_dividing(g, &mut bad);
    }
    odd_primes_dividing(&BigInt::from(pres.torsion_order()), &mut bad);
    let mut p = 3;
    while (p as usize) < n {
        bad.push(p);
        p += 2;
    }
    bad.retain(|&p| check_prime(p).is_ok());
    bad.sort_unstable();
    bad.dedup();
    let mut exceptional = Vec::new();
    for p in bad {
        exceptional.push(decide_with_coordinates(surface, pres, cs, &coords, p)?);
    }
    Ok(OddPrimeAnalysis { kernel_basis, invariant_factors: snf.invariants, generic_exists, exceptional })
}
