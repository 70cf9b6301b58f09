//! The height pairing on `E(K)` and the orthogonal projection `phi`.
//!
//! For a section `P`,
//! `h(P) = 2 chi + 2 (P.O) - sum_v contr_v(P)`, and the pairing is
//! obtained by polarization, so no component labels enter it.

use mwl_algebra::{linalg, Embedding, Rational, RationalFunction, UniPoly, Var};
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::kodaira::{fiber_configuration, inverse_negative_matrix, FiberConfiguration, FiberData, KodairaType};
use crate::local::{ord_rf, residue};
use crate::sections::Section;
use crate::torsion::{torsion_subgroup, TorsionGroup};
use crate::weierstrass::{Place, WeierstrassModel};

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Where a section meets one singular fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalIntersection {
    /// Component index (`0` is the identity component). `None` when the
    /// component is determined only up to a symmetry of the fiber.
    pub component: Option<usize>,
    /// `contr_v(P)` for one geometric fiber over the place.
    pub contribution: Rational,
}

impl LocalIntersection {
    fn identity() -> Self {
        LocalIntersection { component: Some(0), contribution: Rational::zero() }
    }
}

/// One line of a height computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionEntry {
    pub place: String,
    pub kind: KodairaType,
    /// Number of geometric fibers over the place.
    pub multiplicity: usize,
    pub local: LocalIntersection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub chi: u32,
    pub intersection_with_zero: i64,
    pub contributions: Vec<ContributionEntry>,
    pub height: Rational,
}

/// Coefficients of `phi(P) = P - O - (P.O + chi) F + sum c_{v,i} Theta_{v,i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiDecomposition {
    pub zero_coefficient: Rational,
    pub fiber_coefficient: Rational,
    /// Per reducible fiber (conjugate fibers share coefficients):
    /// `((-A_v)^{-1} e)_i` for `i = 1 .. m_v - 1`.
    pub components: Vec<(String, Vec<Rational>)>,
}

/// A Weierstrass model together with its fiber configuration.
#[derive(Clone, Debug)]
pub struct EllipticSurface {
    model: WeierstrassModel,
    config: FiberConfiguration,
}

impl EllipticSurface {
    pub fn new(model: WeierstrassModel) -> Result<Self> {
        let config = fiber_configuration(&model)?;
        Ok(EllipticSurface { model, config })
    }

    pub fn model(&self) -> &WeierstrassModel {
        &self.model
    }

    pub fn configuration(&self) -> &FiberConfiguration {
        &self.config
    }

    pub fn chi(&self) -> u32 {
        self.model.chi()
    }

    /// The same surface over a larger constant field. Places are
    /// re-factored since they may split.
    pub fn map_field(&self, e: &Embedding) -> Result<Self> {
        Self::new(self.model.map_field(e))
    }

    fn check(&self, p: &Section) -> Result<()> {
        if let Some(x) = p.x() {
            if x.field() != self.model.field() {
                return Err(CoreError::ModelMismatch);
            }
        }
        if !self.model.contains(p) {
            return Err(CoreError::Precondition(format!("{p} is not a section of {}", self.model)));
        }
        Ok(())
    }

    /// The intersection number `(P.O)`.
    pub fn intersection_with_zero(&self, p: &Section) -> Result<i64> {
        self.check(p)?;
        self.pole_count(p)
    }

    fn pole_count(&self, p: &Section) -> Result<i64> {
        let Some(x) = p.x() else {
            return Err(CoreError::Precondition("(O.O) is not an intersection with a different section".into()));
        };
        let den = x.denominator();
        let finite = if den.is_constant() {
            0
        } else {
            match den.square_root() {
                Some((h, _)) => h.degree().unwrap_or(0) as i64,
                None => {
                    return Err(CoreError::InternalInconsistency(format!(
                        "denominator {den} of x is not a square"
                    )))
                }
            }
        };
        let deg = x.degree().unwrap_or(i64::MIN);
        let excess = deg - 2 * self.chi() as i64;
        let at_inf = if excess > 0 {
            if excess % 2 != 0 {
                return Err(CoreError::InternalInconsistency(format!("x has odd pole order {excess} at infinity")));
            }
            excess / 2
        } else {
            0
        };
        Ok(finite + at_inf)
    }

    /// `(x, y)` in the local coordinates of the model used at the fiber.
    fn local_coordinates(&self, p: &Section, fiber: &FiberData) -> Option<(RationalFunction, RationalFunction)> {
        let (x, y) = (p.x()?, p.y()?);
        Some(match fiber.place {
            Place::Finite(_) => (x.clone(), y.clone()),
            Place::Infinity => {
                let chi = self.chi() as i64;
                (x.reciprocal_substitution(2 * chi, Var::U), y.reciprocal_substitution(3 * chi, Var::U))
            }
        })
    }

    /// Which component of `fiber` the section meets, and its correction.
    pub fn local_intersection(&self, p: &Section, fiber: &FiberData) -> Result<LocalIntersection> {
        self.check(p)?;
        self.locate(p, fiber)
    }

    fn locate(&self, p: &Section, fiber: &FiberData) -> Result<LocalIntersection> {
        let Some((x, y)) = self.local_coordinates(p, fiber) else {
            return Ok(LocalIntersection::identity());
        };
        let pi = &fiber.local_pi;
        let ox = ord_rf(&x, pi).unwrap_or(i64::MAX);
        if ox < 0 || !fiber.kind.is_reducible() {
            return Ok(LocalIntersection::identity());
        }
        let oy = ord_rf(&y, pi).unwrap_or(i64::MAX);
        let kind = fiber.kind;
        if let KodairaType::I(n) = kind {
            let x0 = fiber.singular_x.as_ref().expect("multiplicative fibers record the node");
            if oy < 1 || &residue(&x, pi)? != x0 {
                return Ok(LocalIntersection::identity());
            }
            let a = oy.min(n as i64 / 2);
            let n = n as i64;
            return Ok(LocalIntersection {
                component: Some(a as usize),
                contribution: Rational::new((a * (n - a)).into(), n.into()),
            });
        }
        let shift = fiber.short_shift.as_ref().expect("additive fibers record the shift");
        let xs = &x - &RationalFunction::from_poly(shift.clone());
        let oxs = ord_rf(&xs, pi).unwrap_or(i64::MAX);
        if oxs < 1 || oy < 1 {
            return Ok(LocalIntersection::identity());
        }
        Ok(match kind {
            KodairaType::III => LocalIntersection { component: Some(1), contribution: Rational::new(1.into(), 2.into()) },
            KodairaType::IV => {
                let yr = residue(&crate::local::divide_by_power(&y, pi, 1), pi)?;
                let positive = yr.leading_coefficient().is_some_and(|c| c.is_canonically_positive());
                LocalIntersection {
                    component: Some(if positive { 1 } else { 2 }),
                    contribution: Rational::new(2.into(), 3.into()),
                }
            }
            KodairaType::IStar(0) => {
                let component = match &fiber.residual_roots {
                    Some(rs) => {
                        let rho = residue(&crate::local::divide_by_power(&xs, pi, 1), pi)?;
                        let rho = rho.coeff(0);
                        let pos = rs.iter().position(|r| r == &rho).ok_or_else(|| {
                            CoreError::InternalInconsistency(format!(
                                "section meets the I0* fiber at {} off the residual roots",
                                fiber.place
                            ))
                        })?;
                        Some(pos + 1)
                    }
                    None => None,
                };
                LocalIntersection { component, contribution: rat(1) }
            }
            KodairaType::II | KodairaType::IIStar => LocalIntersection::identity(),
            _ => {
                let contribution = self.additive_contribution(&xs, &y, fiber)?;
                let component = match kind {
                    KodairaType::IIIStar => Some(7),
                    KodairaType::IStar(_) if contribution == rat(1) => Some(1),
                    _ => None,
                };
                LocalIntersection { component, contribution }
            }
        })
    }

    /// Correction at an additive fiber from the valuations of `psi_2 = 2y`
    /// and `psi_3` in short form.
    pub fn additive_contribution(&self, xs: &RationalFunction, y: &RationalFunction, fiber: &FiberData) -> Result<Rational> {
        let pi = &fiber.local_pi;
        let (local, _) = crate::kodaira::local_model(&self.model, &fiber.place)?;
        let (short, _) = local.short_form();
        let f = local.field();
        let c = |p: &UniPoly| RationalFunction::from_poly(p.clone());
        let k = |n: i64| RationalFunction::constant(f.from_int(n), xs.var());
        let (a, b) = (c(short.a4()), c(short.a6()));
        let x2 = xs * xs;
        let psi3 = &(&(&(&k(3) * &(&x2 * &x2)) + &(&k(6) * &(&a * &x2))) + &(&k(12) * &(&b * xs)))
            - &(&a * &a);
        let v2 = ord_rf(y, pi).unwrap_or(i64::MAX);
        let v3 = ord_rf(&psi3, pi).unwrap_or(i64::MAX);
        if v2 == i64::MAX || v3 == i64::MAX {
            return Err(CoreError::InternalInconsistency("torsion-like valuations in a height computation".into()));
        }
        let lambda = if v3 >= 3 * v2 { Rational::new(v2.into(), 3.into()) } else { Rational::new(v3.into(), 8.into()) };
        Ok(lambda * rat(2))
    }

    pub fn height_report(&self, p: &Section) -> Result<HeightReport> {
        self.check(p)?;
        let chi = self.chi();
        if p.is_zero() {
            return Ok(HeightReport { chi, intersection_with_zero: 0, contributions: Vec::new(), height: Rational::zero() });
        }
        let so = self.pole_count(p)?;
        let mut contributions = Vec::new();
        let mut total = Rational::zero();
        for fiber in self.config.reducible() {
            let local = self.locate(p, fiber)?;
            let mult = fiber.place.degree();
            total += &local.contribution * rat(mult as i64);
            contributions.push(ContributionEntry {
                place: fiber.place.label(),
                kind: fiber.kind,
                multiplicity: mult,
                local,
            });
        }
        let height = rat(2 * chi as i64 + 2 * so) - total;
        if height.is_negative() {
            return Err(CoreError::InternalInconsistency(format!("negative height {height} for {p}")));
        }
        Ok(HeightReport { chi, intersection_with_zero: so, contributions, height })
    }

    pub fn height(&self, p: &Section) -> Result<Rational> {
        Ok(self.height_report(p)?.height)
    }

    /// `<P, Q> = (h(P + Q) - h(P) - h(Q)) / 2`.
    pub fn pairing(&self, p: &Section, q: &Section) -> Result<Rational> {
        if p == q {
            return self.height(p);
        }
        let s = self.model.add(p, q)?;
        Ok((self.height(&s)? - self.height(p)? - self.height(q)?) / rat(2))
    }

    pub fn gram(&self, sections: &[Section]) -> Result<linalg::Matrix> {
        let n = sections.len();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pairing(&sections[i], &sections[j])?;
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        Ok(g)
    }

    pub fn phi(&self, p: &Section) -> Result<PhiDecomposition> {
        self.check(p)?;
        let so = self.pole_count(p)?;
        let mut components = Vec::new();
        for fiber in self.config.reducible() {
            let local = self.locate(p, fiber)?;
            let idx = local.component.ok_or_else(|| CoreError::UnsupportedFiberType {
                kind: fiber.kind.to_string(),
                place: fiber.place.label(),
            })?;
            let m = fiber.matrix.len();
            let coeffs = if idx == 0 {
                vec![Rational::zero(); m]
            } else {
                let inv = inverse_negative_matrix(&fiber.matrix);
                (0..m).map(|i| inv[i][idx - 1].clone()).collect()
            };
            components.push((fiber.place.label(), coeffs));
        }
        Ok(PhiDecomposition {
            zero_coefficient: rat(-1),
            fiber_coefficient: -rat(so + self.chi() as i64),
            components,
        })
    }

    /// `phi(P)^2` from the formal intersection numbers
    /// `P^2 = O^2 = -chi`, `PF = OF = 1`, `F^2 = 0`, `F Theta = O Theta = 0`,
    /// `P Theta_i = [i hit]`, `Theta Theta = A`. Equals `-h(P)`.
    pub fn phi_self_intersection(&self, p: &Section) -> Result<Rational> {
        let phi = self.phi(p)?;
        let chi = rat(self.chi() as i64);
        let so = rat(self.pole_count(p)?);
        let z = &phi.zero_coefficient;
        let fc = &phi.fiber_coefficient;
        // (P + z O + fc F)^2
        let mut total = -chi.clone() + z * z * -chi.clone() + rat(2) * z * so + rat(2) * fc + rat(2) * z * fc;
        for (fiber, (_, c)) in self.config.reducible().zip(&phi.components) {
            let mult = rat(fiber.place.degree() as i64);
            let idx = self.locate(p, fiber)?.component.unwrap_or(0);
            let mut local = Rational::zero();
            if idx > 0 {
                local += rat(2) * &c[idx - 1];
            }
            for (i, row) in fiber.matrix.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    local += &c[i] * &c[j] * rat(*a);
                }
            }
            total += mult * local;
        }
        Ok(total)
    }

    /// Least `n <= 12` with `[n]P = O` when `P` has height zero, else `None`.
    pub fn torsion_order(&self, p: &Section) -> Result<Option<u64>> {
        if p.is_zero() {
            return Ok(Some(1));
        }
        if !self.height(p)?.is_zero() {
            return Ok(None);
        }
        crate::torsion::order_of(&self.model, p, 12)
    }

    /// Product of the component group orders over all geometric fibers.
    pub fn component_group_product(&self) -> u64 {
        self.config
            .reducible()
            .map(|f| (f.kind.component_group_order() as u64).pow(f.place.degree() as u32))
            .product()
    }

    pub fn torsion(&self) -> Result<TorsionGroup> {
        torsion_subgroup(&self.model, self.component_group_product())
    }
}
