//! Division polynomials and the torsion subgroup of `E(k(t))`.
//!
//! Torsion sections are disjoint from the zero section, so their `x` is a
//! polynomial of degree at most `2 chi`. That makes them recoverable from
//! specializations of a division polynomial by interpolation.

use std::collections::BTreeSet;

use mwl_algebra::{roots, BiPoly, FieldElem, UniPoly, Var};

use crate::error::{CoreError, Result};
use crate::sections::{interpolate, Section};
use crate::weierstrass::WeierstrassModel;

/// Largest number of interpolation candidates tried before giving up.
const MAX_COMBINATIONS: usize = 200_000;

/// `psi_n = g` for odd `n` and `psi_n = 2y * g` for even `n`.
#[derive(Clone, Debug)]
struct DivPoly {
    g: BiPoly,
    has_y: bool,
}

/// Exact division in `k[t][x]` by a polynomial whose leading `x`
/// coefficient is a nonzero constant.
fn div_exact_x(a: &BiPoly, d: &BiPoly) -> BiPoly {
    let f = a.field();
    let dd = d.x_degree().expect("nonzero divisor");
    let lc_inv = d.x_leading().coeff(0).inverse().expect("constant leading coefficient");
    let mut rem = a.x_coeffs().to_vec();
    let mut quot = Vec::new();
    while rem.len() > dd {
        let top = rem.len() - 1;
        let c = rem[top].scale(&lc_inv);
        let shift = top - dd;
        for (i, di) in d.x_coeffs().iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &(&c * di);
        }
        rem.pop();
        if quot.len() <= shift {
            quot.resize(shift + 1, UniPoly::zero(f, Var::T));
        }
        quot[shift] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    BiPoly::from_x_coeffs(f, quot)
}

struct DivisionPolynomials {
    /// `4 f(x) = (2y)^2`.
    four_f: BiPoly,
    psi: Vec<DivPoly>,
}

impl DivisionPolynomials {
    fn new(model: &WeierstrassModel) -> Self {
        let f = model.field();
        let inv = model.invariants();
        let x = BiPoly::x(f);
        let c = |p: &UniPoly| BiPoly::from_t_poly(p.clone());
        let k = |n: i64| BiPoly::constant(f.from_int(n));
        let xp = |e: u32| x.pow(e);
        let (b2, b4, b6, b8) = (c(&inv.b2), c(&inv.b4), c(&inv.b6), c(&inv.b8));
        let four_f = model.cubic().scale(&f.from_int(4));
        let psi3 = &(&(&(&(&k(3) * &xp(4)) + &(&b2 * &xp(3))) + &(&(&k(3) * &b4) * &xp(2)))
            + &(&(&k(3) * &b6) * &x))
            + &b8;
        let g4 = &(&(&(&(&(&(&k(2) * &xp(6)) + &(&b2 * &xp(5))) + &(&(&k(5) * &b4) * &xp(4)))
            + &(&(&k(10) * &b6) * &xp(3)))
            + &(&(&k(10) * &b8) * &xp(2)))
            + &(&(&(&b2 * &b8) - &(&b4 * &b6)) * &x))
            + &(&(&b4 * &b8) - &(&b6 * &b6));
        let psi = vec![
            DivPoly { g: BiPoly::zero(f), has_y: false },
            DivPoly { g: BiPoly::one(f), has_y: false },
            DivPoly { g: BiPoly::one(f), has_y: true },
            DivPoly { g: psi3, has_y: false },
            DivPoly { g: g4, has_y: true },
        ];
        DivisionPolynomials { four_f, psi }
    }

    fn mul(&self, a: &DivPoly, b: &DivPoly) -> DivPoly {
        let g = &a.g * &b.g;
        if a.has_y && b.has_y {
            DivPoly { g: &g * &self.four_f, has_y: false }
        } else {
            DivPoly { g, has_y: a.has_y || b.has_y }
        }
    }

    fn sub(a: &DivPoly, b: &DivPoly) -> DivPoly {
        debug_assert_eq!(a.has_y, b.has_y);
        DivPoly { g: &a.g - &b.g, has_y: a.has_y }
    }

    fn get(&mut self, n: usize) -> DivPoly {
        while self.psi.len() <= n {
            let idx = self.psi.len();
            let m = idx / 2;
            let p = |i: usize| self.psi[i].clone();
            let next = if idx % 2 == 1 {
                // psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3
                let a = self.mul(&p(m + 2), &self.mul(&p(m), &self.mul(&p(m), &p(m))));
                let b = self.mul(&p(m - 1), &self.mul(&p(m + 1), &self.mul(&p(m + 1), &p(m + 1))));
                Self::sub(&a, &b)
            } else {
                // psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / psi_2
                let a = self.mul(&p(m + 2), &self.mul(&p(m - 1), &p(m - 1)));
                let b = self.mul(&p(m - 2), &self.mul(&p(m + 1), &p(m + 1)));
                let inner = Self::sub(&a, &b);
                if inner.has_y {
                    let inner = DivPoly { g: inner.g, has_y: false };
                    self.mul(&p(m), &inner)
                } else {
                    let prod = self.mul(&p(m), &inner);
                    DivPoly { g: div_exact_x(&prod.g, &self.four_f), has_y: true }
                }
            };
            self.psi.push(next);
        }
        self.psi[n].clone()
    }

    /// `psi_n^2` as a polynomial in `x`.
    fn squared(&mut self, n: usize) -> BiPoly {
        let p = self.get(n);
        self.mul(&p, &p).g
    }

    /// `phi_n = x psi_n^2 - psi_{n-1} psi_{n+1}`.
    fn phi(&mut self, n: usize) -> BiPoly {
        let x = BiPoly::x(self.four_f.field());
        let sq = self.squared(n);
        let (a, b) = (self.get(n - 1), self.get(n + 1));
        &(&x * &sq) - &self.mul(&a, &b).g
    }
}

/// `(phi_n, psi_n^2)`: `x([n] P) = phi_n(x) / psi_n(x)^2`.
pub fn multiplication_by_n_x(model: &WeierstrassModel, n: usize) -> (BiPoly, BiPoly) {
    assert!(n >= 1);
    let mut d = DivisionPolynomials::new(model);
    (d.phi(n), d.squared(n))
}

/// The odd division polynomial `psi_n` (`n` odd), whose roots are the
/// `x`-coordinates of the nonzero points killed by `n`.
pub fn odd_division_polynomial(model: &WeierstrassModel, n: usize) -> BiPoly {
    assert!(n % 2 == 1);
    DivisionPolynomials::new(model).get(n).g
}

/// All `r(t)` in `k[t]` of degree at most `bound` with `P(t, r(t)) = 0`.
pub fn roots_in_kt(p: &BiPoly, bound: usize) -> Result<Vec<UniPoly>> {
    if p.is_zero() {
        return Err(CoreError::Precondition("cannot take roots of the zero polynomial".into()));
    }
    let f = p.field();
    if p.x_degree() == Some(0) {
        return Ok(Vec::new());
    }
    let need = bound + 1;
    let lc = p.x_leading();
    let mut samples: Vec<(FieldElem, Vec<FieldElem>)> = Vec::new();
    let mut n = 0i64;
    while samples.len() < 3 * need {
        let t0 = f.from_int(if n % 2 == 0 { n / 2 } else { -(n + 1) / 2 });
        n += 1;
        if n > 400 {
            break;
        }
        if lc.eval(&t0).is_zero() {
            continue;
        }
        let rs: Vec<FieldElem> = roots(&p.eval_t(&t0))?.into_iter().map(|(r, _)| r).collect();
        if rs.is_empty() {
            return Ok(Vec::new());
        }
        samples.push((t0, rs));
    }
    if samples.len() < need {
        return Err(CoreError::InternalInconsistency("too few usable specializations".into()));
    }
    // Fewest roots first keeps the search small.
    samples.sort_by_key(|s| s.1.len());
    samples.truncate(need);
    let combos = samples.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.1.len()));
    if combos.is_none_or(|c| c > MAX_COMBINATIONS) {
        return Err(CoreError::Unsupported("root interpolation search is too large".into()));
    }
    let mut found: Vec<UniPoly> = Vec::new();
    let mut idx = vec![0usize; need];
    'outer: loop {
        let pts: Vec<(FieldElem, FieldElem)> =
            samples.iter().zip(&idx).map(|(s, &i)| (s.0.clone(), s.1[i].clone())).collect();
        let r = interpolate(&pts, Var::T);
        if !found.contains(&r) && p.eval_x(&r).is_zero() {
            found.push(r);
        }
        for (i, s) in idx.iter_mut().zip(&samples) {
            *i += 1;
            if *i < s.1.len() {
                continue 'outer;
            }
            *i = 0;
        }
        break;
    }
    found.sort_by(|a, b| a.canonical_cmp(b));
    Ok(found)
}

/// Sections over the base field with `x = r(t)` and `y` in `k[t]`.
fn sections_over(model: &WeierstrassModel, r: &UniPoly) -> Result<Vec<Section>> {
    let f = model.field();
    let g = model.cubic().eval_x(r);
    if g.is_zero() {
        return Ok(vec![Section::from_polys(r.clone(), UniPoly::zero(f, Var::T))]);
    }
    let Some((h, unit)) = g.square_root() else {
        return Ok(Vec::new());
    };
    let Some(s) = unit.sqrt()? else {
        return Ok(Vec::new());
    };
    let plus = Section::from_polys(r.clone(), h.scale(&s)).canonical_sign();
    let minus = model.neg(&plus);
    Ok(vec![plus, minus])
}

/// Integral sections `Q` with `[n] Q = target` and `deg x(Q) <= 2 chi`.
pub fn integral_division_points(model: &WeierstrassModel, n: usize, target: &Section) -> Result<Vec<Section>> {
    let bound = 2 * model.chi() as usize;
    let eq = match target {
        Section::Zero if n == 2 => model.cubic(),
        Section::Zero if n % 2 == 1 => odd_division_polynomial(model, n),
        Section::Zero => multiplication_by_n_x(model, n).1,
        Section::Affine { x, .. } => {
            let Some(xt) = x.as_polynomial() else {
                return Ok(Vec::new());
            };
            let (phi, sq) = multiplication_by_n_x(model, n);
            &phi - &sq.scale_poly(&xt)
        }
    };
    let mut out = Vec::new();
    for r in roots_in_kt(&eq, bound)? {
        for s in sections_over(model, &r)? {
            if &model.smul(n as i64, &s)? == target && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// The torsion subgroup with a cyclic decomposition `Z/n1 x Z/n2`.
#[derive(Clone, Debug)]
pub struct TorsionGroup {
    /// All elements, zero first, then in canonical order.
    pub elements: Vec<Section>,
    /// Nontrivial invariant factors, each dividing the next.
    pub invariants: Vec<u64>,
    /// One generator per invariant factor.
    pub generators: Vec<Section>,
}

impl TorsionGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn structure(&self) -> String {
        if self.invariants.is_empty() {
            return "0".into();
        }
        self.invariants.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join(" x ")
    }

    /// `sum c_j g_j`.
    pub fn combination(&self, model: &WeierstrassModel, coeffs: &[i64]) -> Result<Section> {
        let mut acc = Section::Zero;
        for (g, &c) in self.generators.iter().zip(coeffs) {
            acc = model.add(&acc, &model.smul(c, g)?)?;
        }
        Ok(acc)
    }

    /// Coordinates of an element in terms of the generators.
    pub fn coordinates(&self, model: &WeierstrassModel, p: &Section) -> Result<Option<Vec<i64>>> {
        let mut c = vec![0i64; self.generators.len()];
        loop {
            if &self.combination(model, &c)? == p {
                return Ok(Some(c));
            }
            let mut i = 0;
            loop {
                if i == c.len() {
                    return Ok(None);
                }
                c[i] += 1;
                if (c[i] as u64) < self.invariants[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
}

/// Order of a section, if it is at most `limit`.
pub fn order_of(model: &WeierstrassModel, p: &Section, limit: u64) -> Result<Option<u64>> {
    let mut acc = p.clone();
    for m in 1..=limit {
        if acc.is_zero() {
            return Ok(Some(m));
        }
        acc = model.add(&acc, p)?;
    }
    Ok(None)
}

fn close_group(model: &WeierstrassModel, elems: &mut Vec<Section>) -> Result<()> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    loop {
        let n = elems.len();
        let mut added = false;
        for i in 0..n {
            for j in i..n {
                if seen.contains(&(i * 10_000 + j)) {
                    continue;
                }
                seen.insert(i * 10_000 + j);
                let s = model.add(&elems[i], &elems[j])?;
                if !elems.contains(&s) {
                    elems.push(s);
                    added = true;
                }
            }
        }
        if !added {
            return Ok(());
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The torsion subgroup, given a multiple `bound` of its squared order
/// (the product of the component group orders works).
pub fn torsion_subgroup(model: &WeierstrassModel, bound: u64) -> Result<TorsionGroup> {
    let mut all = vec![Section::Zero];
    for (p, e) in prime_factors(bound) {
        // |tors_p|^2 divides p^e.
        let max_size = p.pow(e / 2);
        if max_size == 1 {
            continue;
        }
        let mut group = vec![Section::Zero];
        for s in integral_division_points(model, p as usize, &Section::Zero)? {
            if !group.contains(&s) {
                group.push(s);
            }
        }
        close_group(model, &mut group)?;
        let mut tried: Vec<Section> = vec![Section::Zero];
        loop {
            let pending: Vec<Section> = group.iter().filter(|s| !tried.contains(s)).cloned().collect();
            if pending.is_empty() || (group.len() as u64) * p > max_size {
                break;
            }
            let mut grew = false;
            for t in pending {
                tried.push(t.clone());
                for q in integral_division_points(model, p as usize, &t)? {
                    if !group.contains(&q) {
                        group.push(q);
                        grew = true;
                    }
                }
                if grew {
                    break;
                }
            }
            if grew {
                close_group(model, &mut group)?;
            }
        }
        if group.len() as u64 > max_size {
            return Err(CoreError::InternalInconsistency(format!(
                "{p}-primary torsion of order {} exceeds the bound {max_size}",
                group.len()
            )));
        }
        let mut merged = Vec::new();
        for a in &all {
            for b in &group {
                merged.push(model.add(a, b)?);
            }
        }
        all = merged;
    }
    let mut rest: Vec<Section> = all.into_iter().filter(|s| !s.is_zero()).collect();
    rest.sort_by(|a, b| a.canonical_cmp(b));
    rest.dedup();
    let mut elements = vec![Section::Zero];
    elements.extend(rest);
    let total = elements.len() as u64;
    let mut orders = Vec::new();
    for s in &elements {
        orders.push(order_of(model, s, total)?.ok_or_else(|| {
            CoreError::InternalInconsistency("torsion element of unexpected order".into())
        })?);
    }
    let n2 = *orders.iter().max().unwrap();
    let n1 = total / n2;
    let (invariants, generators) = if n2 == 1 {
        (Vec::new(), Vec::new())
    } else if n1 == 1 {
        let i = orders.iter().position(|&o| o == n2).unwrap();
        (vec![n2], vec![elements[i].clone()])
    } else {
        let i2 = orders.iter().position(|&o| o == n2).unwrap();
        let g2 = elements[i2].clone();
        let mut span2 = Vec::new();
        for k in 0..n2 {
            span2.push(model.smul(k as i64, &g2)?);
        }
        let mut g1 = None;
        'search: for (s, &o) in elements.iter().zip(&orders) {
            if o != n1 {
                continue;
            }
            for k in 1..n1 {
                if span2.contains(&model.smul(k as i64, s)?) {
                    continue 'search;
                }
            }
            g1 = Some(s.clone());
            break;
        }
        let g1 = g1.ok_or_else(|| CoreError::InternalInconsistency("torsion group is not a product".into()))?;
        (vec![n1, n2], vec![g1, g2])
    };
    Ok(TorsionGroup { elements, invariants, generators })
}
