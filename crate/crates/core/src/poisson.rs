//! Evaluation, shifted and unshifted Poisson pairings, and their structural
//! checks: antisymmetry, causality, naturality, and the two-route agreement of
//! the unshifted bulk pairing (via the Green's kernels and via the base
//! formula).

use crate::forms::{Form, FormError};
use crate::geometry::{Geometry, SpaceId};
use crate::greens::{GreensHomotopy, flow_pushforward};
use crate::regions::{Region, is_disjoint, region_contains_support};
use crate::scalar::{Cx, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairingKind {
    /// Evaluation of a linear observable on a field.
    Ev,
    /// The degree `+1` pairing of observables: plain wedge-then-integrate.
    TauShifted,
    /// Unshifted bulk pairing through the causal combination of Green's
    /// kernels (equivalently the base formula).
    TauZero,
    /// Unshifted pairing of base observables.
    SigmaZero,
    /// Chiral boson pairing `-(integral of a d b)` on the base boundary.
    UpsilonZero,
}

#[derive(Clone)]
pub struct Pairing {
    pub kind: PairingKind,
    pub geom: Geometry,
    /// Region the paired observables must be supported in, when localized.
    pub region: Option<Region>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum PoissonError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("support violation: {0}")]
    Support(String),
    #[error("regions are not flow-disjoint")]
    NotDisjoint,
    #[error("{0}")]
    Other(String),
}

fn sign_pow<S: Scalar>(n: i64) -> Cx<S> {
    if n.rem_euclid(2) == 0 {
        Cx::one()
    } else {
        -Cx::one()
    }
}

impl Pairing {
    pub fn new(kind: PairingKind, geom: Geometry) -> Self {
        Pairing { kind, geom, region: None }
    }

    pub fn localized(kind: PairingKind, geom: Geometry, region: Region) -> Self {
        Pairing { kind, geom, region: Some(region) }
    }

    fn check_region<S: Scalar>(&self, forms: &[&Form<S>]) -> Result<(), PoissonError> {
        if let Some(r) = &self.region {
            for f in forms {
                if !region_contains_support(r, &f.support) {
                    return Err(PoissonError::Support(
                        "observable support leaves the pairing region".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The pairing value. Degree-inadmissible pairs integrate to zero by the
    /// graded integration convention, making the pairing total.
    pub fn pair<S: Scalar>(&self, a: &Form<S>, b: &Form<S>) -> Result<Cx<S>, PoissonError> {
        match self.kind {
            PairingKind::Ev => {
                self.check_region(&[a])?;
                let w = a.wedge(b)?;
                let v = w.integrate()?;
                Ok(sign_pow::<S>(a.coh_degree() + 1) * v)
            }
            PairingKind::TauShifted => {
                self.check_region(&[a, b])?;
                let v = a.wedge(b)?.integrate()?;
                Ok(v)
            }
            // the base formula: cheaper than the kernel route and equal to it
            // (the agreement is itself a verified identity)
            PairingKind::TauZero => Ok(self.tau_zero_both_inner(a, b, false)?.1),
            PairingKind::SigmaZero => {
                self.check_region(&[a, b])?;
                if !matches!(a.spec.space, SpaceId::Base | SpaceId::Tubular) {
                    return Err(PoissonError::Other(
                        "the base pairing lives on base-style charts".into(),
                    ));
                }
                let v = a.wedge(b)?.integrate()?;
                Ok(sign_pow::<S>(a.coh_degree()) * v)
            }
            PairingKind::UpsilonZero => {
                self.check_region(&[a, b])?;
                if a.spec.space != SpaceId::BaseBoundary {
                    return Err(PoissonError::Other(
                        "the chiral boson pairing lives on the base boundary".into(),
                    ));
                }
                let v = a.wedge(&b.d())?.integrate()?;
                Ok(-v)
            }
        }
    }

    /// Both routes to the unshifted bulk pairing: through the causal
    /// combination of the Green's kernels, and through the base formula.
    pub fn tau_zero_both<S: Scalar>(
        &self,
        a: &Form<S>,
        b: &Form<S>,
    ) -> Result<(Cx<S>, Cx<S>), PoissonError> {
        self.tau_zero_both_inner(a, b, true)
    }

    fn tau_zero_both_inner<S: Scalar>(
        &self,
        a: &Form<S>,
        b: &Form<S>,
        with_kernel_route: bool,
    ) -> Result<(Cx<S>, Cx<S>), PoissonError> {
        self.check_region(&[a, b])?;
        if a.spec.space != SpaceId::Bulk && a.spec.space != SpaceId::Boundary {
            return Err(PoissonError::Other(
                "the unshifted pairing lives on the flow charts".into(),
            ));
        }
        if !a.has_compact_support() || !b.has_compact_support() {
            return Err(PoissonError::Support("pairing needs compact supports".into()));
        }
        // defining route: ev(a (x) G_[1] b), with G_[1] = -(G_up - G_down)
        // on the underlying unshifted data
        let via_g = if with_kernel_route {
            let b0 = Form { shift: 0, ..b.clone() };
            let up = GreensHomotopy::forward(b.spec.space).apply(&b0)?;
            let down = GreensHomotopy::backward(b.spec.space).apply(&b0)?;
            let g = up.sub(&down)?;
            let g_field = Form { shift: b.shift - 1, ..g };
            let w = a.wedge(&g_field)?;
            let ev_sign = sign_pow::<S>(a.coh_degree() + 1);
            ev_sign * (-w.integrate()?)
        } else {
            Cx::zero()
        };
        // base route
        let pa = flow_pushforward(&self.geom, a)?;
        let pb = flow_pushforward(&self.geom, b)?;
        let base = pa.wedge(&pb)?.integrate()?;
        let via_base = sign_pow::<S>(a.coh_degree()) * base;
        Ok((if with_kernel_route { via_g } else { via_base.clone() }, via_base))
    }

    /// Cohomological degree of a form in this pairing's source complex.
    fn obs_degree<S: Scalar>(&self, f: &Form<S>) -> i64 {
        f.coh_degree()
    }

    /// Full pairing matrix over a family, sharing the per-form pushforwards
    /// and differentials across the quadratic loop.
    pub fn pairing_matrix<S: Scalar>(
        &self,
        forms: &[&Form<S>],
    ) -> Result<Vec<Vec<Cx<S>>>, PoissonError> {
        let n = forms.len();
        let mut out = vec![vec![Cx::zero(); n]; n];
        match self.kind {
            PairingKind::TauZero => {
                self.check_region(&forms.to_vec())?;
                let pushed: Vec<Form<S>> = forms
                    .iter()
                    .map(|f| flow_pushforward(&self.geom, f))
                    .collect::<Result<_, _>>()?;
                for i in 0..n {
                    for j in 0..n {
                        let v = pushed[i].wedge(&pushed[j])?.integrate()?;
                        out[i][j] = sign_pow::<S>(forms[i].coh_degree()) * v;
                    }
                }
            }
            PairingKind::UpsilonZero => {
                self.check_region(&forms.to_vec())?;
                let diffs: Vec<Form<S>> = forms.iter().map(|f| f.d()).collect();
                for i in 0..n {
                    for j in 0..n {
                        out[i][j] = -(forms[i].wedge(&diffs[j])?.integrate()?);
                    }
                }
            }
            _ => {
                for i in 0..n {
                    for j in 0..n {
                        out[i][j] = self.pair(forms[i], forms[j])?;
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub label: String,
    pub residual: f64,
    pub exact_zero: bool,
}

/// Graded antisymmetry residual `p(a,b) + (-1)^{|a||b|} p(b,a)`.
pub fn antisymmetry_residual<S: Scalar>(
    p: &Pairing,
    a: &Form<S>,
    b: &Form<S>,
) -> Result<Cx<S>, PoissonError> {
    let ab = p.pair(a, b)?;
    let ba = p.pair(b, a)?;
    let s = sign_pow::<S>(p.obs_degree(a) * p.obs_degree(b));
    Ok(ab + s * ba)
}

/// Classical causality: the pairing of observables supported in flow-disjoint
/// regions vanishes. Errors when the regions are not disjoint.
pub fn causality_check<S: Scalar>(
    p: &Pairing,
    r1: &Region,
    r2: &Region,
    samples: &[(Form<S>, Form<S>)],
) -> Result<Vec<Cx<S>>, PoissonError> {
    if !is_disjoint(r1, r2).map_err(|e| PoissonError::Other(e.to_string()))? {
        return Err(PoissonError::NotDisjoint);
    }
    let mut out = Vec::with_capacity(samples.len());
    for (a, b) in samples {
        if !region_contains_support(r1, &a.support) {
            return Err(PoissonError::Support("first sample leaves its region".into()));
        }
        if !region_contains_support(r2, &b.support) {
            return Err(PoissonError::Support("second sample leaves its region".into()));
        }
        out.push(p.pair(a, b)?);
    }
    Ok(out)
}

/// Naturality under extension by zero along a region inclusion: the localized
/// pairing agrees with the ambient one on every sampled pair.
pub fn naturality_residual<S: Scalar>(
    geom: &Geometry,
    kind: PairingKind,
    small: &Region,
    big: &Region,
    a: &Form<S>,
    b: &Form<S>,
) -> Result<Cx<S>, PoissonError> {
    if !small
        .subset(big)
        .map_err(|e| PoissonError::Other(e.to_string()))?
    {
        return Err(PoissonError::Other("regions are not nested".into()));
    }
    let inner = Pairing::localized(kind, geom.clone(), small.clone());
    let outer = Pairing::localized(kind, geom.clone(), big.clone());
    let v1 = inner.pair(a, b)?;
    let v2 = outer.pair(a, b)?;
    Ok(v1 - v2)
}

/// Residual of the cochain-map property of evaluation,
/// `ev(d a (x) b) + (-1)^{|a|} ev(a (x) d b)`, which vanishes on
/// boundary-conditioned inputs by the isotropy of the boundary condition.
pub fn ev_cochain_residual<S: Scalar>(
    p: &Pairing,
    a: &Form<S>,
    b: &Form<S>,
) -> Result<Cx<S>, PoissonError> {
    let first = p.pair(&a.d(), b)?;
    let second = p.pair(a, &b.d())?;
    Ok(first + sign_pow::<S>(a.coh_degree()) * second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AxisDesc, CoeffField, Factor1D};
    use crate::fourier::FourierPoly;
    use crate::geometry::Chirality;
    use crate::scalar::{Exact, Q, q_i64, q_ratio};
    use crate::spline::unit_bump;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    fn geoms() -> Vec<Geometry> {
        vec![
            Geometry::half_space(Chirality::Plus),
            Geometry::half_space(Chirality::Minus),
            Geometry::cylinder(Chirality::Plus),
            Geometry::cylinder(Chirality::Minus),
        ]
    }

    fn obs(geom: &Geometry, mask: u8, dr: usize, windows: [(i64, i64); 2]) -> Form<Exact> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let factors: Vec<Factor1D<Exact>> = spec
            .dirs
            .iter()
            .enumerate()
            .map(|(i, d)| match &d.domain {
                AxisDesc::Line { lo: Some(l), hi: Some(h), .. } => {
                    let w = (h - l) / q_i64(4);
                    Factor1D::Spline(unit_bump(&(l + &w), &(h - &w)))
                }
                AxisDesc::Line { lo: Some(l), .. } => {
                    Factor1D::Spline(unit_bump(&(l + q_ratio(1, 4)), &(l + q_i64(2))))
                }
                AxisDesc::Line { .. } => {
                    let (a, b) = windows[i.min(1)];
                    Factor1D::Spline(unit_bump(&q_i64(a), &q_i64(b)))
                }
                AxisDesc::Circle { .. } => Factor1D::Fourier(
                    FourierPoly::cosine(1).add(&FourierPoly::constant(Exact::one())),
                ),
            })
            .collect();
        let c = CoeffField::tensor(&domains, &factors);
        let mut comps = BTreeMap::new();
        comps.insert(mask, c);
        Form::from_components(spec, dr, 2, comps)
    }

    #[test]
    fn tau_zero_two_routes_agree() {
        for geom in geoms() {
            // (1,3) and (2,2) de Rham pairs
            let a1 = obs(&geom, 0b001, 1, [(-2, 1), (-1, 2)]);
            let b3 = obs(&geom, 0b111, 3, [(-1, 2), (0, 3)]);
            let p = Pairing::new(PairingKind::TauZero, geom.clone());
            let (v1, v2) = p.tau_zero_both(&a1, &b3).unwrap();
            assert_eq!(v1, v2, "(1,3) routes disagree for {:?}", geom.kind);
            let a2 = obs(&geom, 0b011, 2, [(-2, 1), (-1, 2)]);
            let b2 = obs(&geom, 0b101, 2, [(-1, 2), (0, 3)]);
            let (w1, w2) = p.tau_zero_both(&a2, &b2).unwrap();
            assert_eq!(w1, w2, "(2,2) routes disagree for {:?}", geom.kind);
            assert!(!(w1.is_zero() && v1.is_zero()), "vacuous test for {:?}", geom.kind);
        }
    }

    #[test]
    fn tau_zero_graded_antisymmetric() {
        for geom in geoms() {
            let p = Pairing::new(PairingKind::TauZero, geom.clone());
            let a = obs(&geom, 0b011, 2, [(-2, 1), (-1, 2)]);
            let b = obs(&geom, 0b101, 2, [(-1, 2), (0, 3)]);
            let r = antisymmetry_residual(&p, &a, &b).unwrap();
            assert!(r.is_zero());
            let c = obs(&geom, 0b001, 1, [(-2, 1), (-1, 2)]);
            let d = obs(&geom, 0b111, 3, [(-1, 2), (0, 3)]);
            let r2 = antisymmetry_residual(&p, &c, &d).unwrap();
            assert!(r2.is_zero());
        }
    }

    #[test]
    fn upsilon_on_circle_modes_matches_fourier_oracle() {
        // independent oracle: -int_0^1 sin(2 pi x) d cos(2 pi x)
        //   = 2 pi int_0^1 sin^2 = pi, frozen here
        let geom = Geometry::cylinder(Chirality::Plus);
        let spec = geom.space(SpaceId::BaseBoundary);
        let domains = spec.domains();
        let mk = |f: FourierPoly<Exact>| {
            let c = CoeffField::tensor(&domains, &[Factor1D::Fourier(f)]);
            let mut comps = BTreeMap::new();
            comps.insert(0u8, c);
            Form::from_components(spec.clone(), 0, 0, comps)
        };
        let p = Pairing::new(PairingKind::UpsilonZero, geom);
        let s = mk(FourierPoly::sine(1));
        let c = mk(FourierPoly::cosine(1));
        let v = p.pair(&s, &c).unwrap();
        assert_eq!(v, Cx::real(Exact::pi()));
        // constant against anything is zero: the integrand is exact
        let one = mk(FourierPoly::constant(Exact::one()));
        assert!(p.pair(&one, &c).unwrap().is_zero());
        // antisymmetry through integration by parts on the circle
        let r = antisymmetry_residual(&p, &s, &c).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn tau_shifted_is_plain_wedge_integral() {
        let geom = Geometry::half_space(Chirality::Plus);
        let a = obs(&geom, 0b001, 1, [(-2, 1), (-1, 2)]);
        let b = obs(&geom, 0b110, 2, [(-1, 2), (0, 3)]);
        let p = Pairing::new(PairingKind::TauShifted, geom);
        let direct = a.wedge(&b).unwrap().integrate().unwrap();
        assert_eq!(p.pair(&a, &b).unwrap(), direct);
        assert!(!direct.is_zero());
    }

    #[test]
    fn causality_vanishes_on_disjoint_regions() {
        use crate::regions::{AxisExtent, Region};
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let mk_region = |u: (i64, i64)| {
            Region::new(
                spec.clone(),
                vec![vec![
                    AxisExtent::Interval { lo: None, hi: None },
                    AxisExtent::Interval { lo: Some(q_i64(u.0)), hi: Some(q_i64(u.1)) },
                    AxisExtent::Interval { lo: Some(Q::zero()), hi: None },
                ]],
            )
        };
        let r1 = mk_region((-3, 0));
        let r2 = mk_region((1, 4));
        let a = obs(&geom, 0b011, 2, [(-5, 5), (-2, -1)]);
        let b = obs(&geom, 0b101, 2, [(-5, 5), (2, 3)]);
        let p = Pairing::new(PairingKind::TauZero, geom.clone());
        let vals = causality_check(&p, &r1, &r2, &[(a.clone(), b)]).unwrap();
        assert!(vals[0].is_zero());
        // overlapping regions trip the precondition
        let r3 = mk_region((-1, 2));
        let b2 = obs(&geom, 0b101, 2, [(-5, 5), (0, 1)]);
        assert!(matches!(
            causality_check(&p, &r1, &r3, &[(a, b2)]),
            Err(PoissonError::NotDisjoint)
        ));
    }

    #[test]
    fn ev_is_a_cochain_map_on_conditioned_samples() {
        for geom in geoms() {
            // compactly supported in the interior: boundary terms vanish
            let a = obs(&geom, 0b010, 1, [(-2, 1), (-1, 2)]);
            let mut b = obs(&geom, 0b001, 1, [(-1, 2), (0, 3)]);
            b.shift = 1; // view the second as a field
            let p = Pairing::new(PairingKind::Ev, geom.clone());
            let r = ev_cochain_residual(&p, &a, &b).unwrap();
            assert!(r.is_zero(), "failed for {:?}", geom.kind);
        }
    }
}
