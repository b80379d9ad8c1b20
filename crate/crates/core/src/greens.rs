//! Directed Green's homotopies from restricted fiber integration.
//!
//! In adapted coordinates the flow is a `tau`-translation, so the forward
//! kernel is the cumulative integral of the `dtau`-leg from minus infinity and
//! the backward one is minus the integral to plus infinity. Components without
//! a `tau` leg map to zero. On a `k`-shifted complex the kernel carries the
//! extra sign `(-1)^k`, which keeps `boundary(G) = j` with the shifted
//! differential. Outputs are eventually constant along `tau` and leave the
//! compactly supported subcomplex without leaving the representation.

use crate::complexes::HomCochain;
use crate::forms::{FiberKind, Form, FormError};
use crate::geometry::{Geometry, SpaceId, SpaceSpec};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlowDirection {
    Forward,
    Backward,
}

/// A forward or backward Green's homotopy on the bulk or boundary chart.
#[derive(Clone)]
pub struct GreensHomotopy {
    pub direction: FlowDirection,
    pub space: SpaceId,
}

impl GreensHomotopy {
    pub fn forward(space: SpaceId) -> Self {
        GreensHomotopy { direction: FlowDirection::Forward, space }
    }

    pub fn backward(space: SpaceId) -> Self {
        GreensHomotopy { direction: FlowDirection::Backward, space }
    }

    /// Apply to a compactly supported form of the matching chart. The shift
    /// sign `(-1)^shift` is read off the form.
    pub fn apply<S: Scalar>(&self, form: &Form<S>) -> Result<Form<S>, FormError> {
        if form.spec.space != self.space {
            return Err(FormError::SpaceMismatch);
        }
        let tau = form
            .spec
            .tau_axis()
            .ok_or_else(|| FormError::NoSuchDirection("tau".into()))?;
        if !form.has_compact_support() {
            return Err(FormError::NonCompact(
                "Green's homotopies act on compactly supported forms".into(),
            ));
        }
        let kind = match self.direction {
            FlowDirection::Forward => FiberKind::CumulativeFromBelow,
            FlowDirection::Backward => FiberKind::CumulativeToAbove,
        };
        let raw = form.fiber_integrate(tau, kind, None)?;
        // backward kernel is minus the integral to the future
        let mut sign = match self.direction {
            FlowDirection::Forward => 1i64,
            FlowDirection::Backward => -1,
        };
        if form.shift.rem_euclid(2) == 1 {
            sign = -sign;
        }
        Ok(if sign < 0 { raw.neg() } else { raw })
    }

    /// As an evaluable operator of degree `-1`.
    pub fn as_hom<S: Scalar>(&self) -> HomCochain<S> {
        let me = self.clone();
        let name = match self.direction {
            FlowDirection::Forward => "G_up",
            FlowDirection::Backward => "G_down",
        };
        HomCochain::new(name, -1, move |f: &Form<S>| me.apply(f))
    }
}

/// Full fiber integration along the flow (the quotient pushforward), landing
/// on the base chart with the shift lowered by one.
pub fn flow_pushforward<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let tau = form
        .spec
        .tau_axis()
        .ok_or_else(|| FormError::NoSuchDirection("tau".into()))?;
    let target = match form.spec.space {
        SpaceId::Bulk => geom.space(SpaceId::Base),
        SpaceId::Boundary => geom.space(SpaceId::BaseBoundary),
        _ => return Err(FormError::SpaceMismatch),
    };
    form.fiber_integrate(tau, FiberKind::Full, Some(target))
}

/// Pullback along the quotient map: constant extension in `tau`, raising the
/// shift back.
pub fn flow_pullback<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let target: SpaceSpec = match form.spec.space {
        SpaceId::Base => geom.space(SpaceId::Bulk),
        SpaceId::BaseBoundary => geom.space(SpaceId::Boundary),
        _ => return Err(FormError::SpaceMismatch),
    };
    Ok(form.pullback_insert(target, 0, true))
}

/// `G_up - G_down` compared against the pullback of the pushforward; the two
/// agree identically, which is the causal-propagator presentation.
pub fn difference_residual<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let up = GreensHomotopy::forward(form.spec.space).apply(form)?;
    let down = GreensHomotopy::backward(form.spec.space).apply(form)?;
    let lhs = up.sub(&down)?;
    let through_base = flow_pullback(geom, &flow_pushforward(geom, form)?)?;
    // on a k-shifted complex both sides carry (-1)^k
    let rhs = if form.shift.rem_euclid(2) == 1 {
        through_base.neg()
    } else {
        through_base
    };
    lhs.sub(&rhs)
}

/// Residual of the defining identity `boundary(G) - j` on one sample.
pub fn homotopy_residual<S: Scalar>(
    g: &GreensHomotopy,
    sample: &Form<S>,
) -> Result<Form<S>, FormError> {
    let hom = g.as_hom::<S>();
    hom.boundary_on(sample)?.sub(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AxisDesc, CoeffField, Factor1D};
    use crate::fourier::FourierPoly;
    use crate::forms::AxisSupport;
    use crate::geometry::Chirality;
    use crate::regions::{j_of_support, support_box_subset};
    use crate::scalar::{Cx, Exact, Q, q_i64, q_ratio};
    use crate::spline::{Side, unit_bump};
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

    fn tau_leg_form(geom: &Geometry, shift: i64) -> Form<Exact> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let factors: Vec<Factor1D<Exact>> = spec
            .dirs
            .iter()
            .map(|d| match &d.domain {
                AxisDesc::Line { lo: Some(l), hi: Some(h), .. } => {
                    let q = (h - l) / q_i64(4);
                    Factor1D::Spline(unit_bump(&(l + &q), &(h - &q)))
                }
                AxisDesc::Line { lo: Some(l), .. } => {
                    Factor1D::Spline(unit_bump(&(l + q_ratio(1, 4)), &(l + q_i64(2))))
                }
                AxisDesc::Line { .. } => Factor1D::Spline(unit_bump(&q_i64(-1), &q_i64(1))),
                AxisDesc::Circle { .. } => Factor1D::Fourier(FourierPoly::cosine(1)),
            })
            .collect();
        let c = CoeffField::tensor(&domains, &factors);
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, c);
        Form::from_components(spec, 1, shift, comps)
    }

    #[test]
    fn forward_kernel_is_the_cumulative_integral() {
        // G_up(bump dtau) far to the future of the support equals the full
        // integral of the bump (independent closed-form oracle: one)
        let geom = Geometry::half_space(Chirality::Plus);
        let f = tau_leg_form(&geom, 0);
        let g = GreensHomotopy::forward(SpaceId::Bulk).apply(&f).unwrap();
        assert_eq!(g.dr_degree, 0);
        let c = g.component(0).unwrap();
        let far = c.eval_axis(0, &q_i64(10), Side::Below).unwrap();
        // remaining dependence: bump(u) * bump(r) at full height
        let expect = {
            let spec = geom.space(SpaceId::Bulk);
            let domains = spec.domains();
            let full = CoeffField::<Exact>::tensor(
                &domains,
                &[
                    Factor1D::Spline(crate::spline::PiecewisePoly::constant(Exact::one())),
                    Factor1D::Spline(unit_bump(&q_i64(-1), &q_i64(1))),
                    Factor1D::Spline(unit_bump(&q_ratio(1, 4), &q_i64(2))),
                ],
            );
            full.eval_axis(0, &q_i64(10), Side::Below).unwrap()
        };
        assert_eq!(far, expect);
    }

    #[test]
    fn zero_on_forms_without_tau_leg() {
        for geom in geoms() {
            let spec = geom.space(SpaceId::Bulk);
            let domains = spec.domains();
            let factors: Vec<Factor1D<Exact>> = spec
                .dirs
                .iter()
                .map(|d| match &d.domain {
                    AxisDesc::Line { lo: Some(l), hi: Some(h), .. } => {
                        let q = (h - l) / q_i64(4);
                        Factor1D::Spline(unit_bump(&(l + &q), &(h - &q)))
                    }
                    AxisDesc::Line { lo: Some(l), .. } => {
                        Factor1D::Spline(unit_bump(&(l + q_ratio(1, 8)), &(l + q_i64(1))))
                    }
                    AxisDesc::Line { .. } => Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(2))),
                    AxisDesc::Circle { .. } => Factor1D::Fourier(FourierPoly::sine(2)),
                })
                .collect();
            let c = CoeffField::tensor(&domains, &factors);
            let mut comps = BTreeMap::new();
            comps.insert(0b010u8, c); // leg along the base direction only
            let psi = Form::from_components(spec, 1, 1, comps);
            for dir in [FlowDirection::Forward, FlowDirection::Backward] {
                let g = GreensHomotopy { direction: dir, space: SpaceId::Bulk };
                assert!(g.apply(&psi).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn defining_identity_on_both_charts() {
        for geom in geoms() {
            for shift in [0i64, 1, 2] {
                let f = tau_leg_form(&geom, shift);
                for dir in [FlowDirection::Forward, FlowDirection::Backward] {
                    let g = GreensHomotopy { direction: dir, space: SpaceId::Bulk };
                    let res = homotopy_residual(&g, &f).unwrap();
                    assert!(res.is_zero(), "geometry {:?} shift {shift}", geom.kind);
                }
            }
        }
    }

    #[test]
    fn difference_identity_exact() {
        for geom in geoms() {
            for shift in [0i64, 1, 2] {
                let f = tau_leg_form(&geom, shift);
                let res = difference_residual(&geom, &f).unwrap();
                assert!(res.is_zero());
            }
        }
    }

    #[test]
    fn support_stays_in_the_future() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let f = tau_leg_form(&geom, 1);
        let g = GreensHomotopy::forward(SpaceId::Bulk).apply(&f).unwrap();
        let j_up = j_of_support(&f.spec, &f.support, true);
        assert!(support_box_subset(&g.support, &j_up));
        // and the forward output genuinely sticks out to future infinity
        match &g.support[0] {
            AxisSupport::Interval { lo: Some(_), hi: None } => {}
            other => panic!("unexpected tau support {other:?}"),
        }
        let gd = GreensHomotopy::backward(SpaceId::Bulk).apply(&f).unwrap();
        let j_down = j_of_support(&f.spec, &f.support, false);
        assert!(support_box_subset(&gd.support, &j_down));
    }

    #[test]
    fn shift_sign_coherence() {
        // applying the kernel to the same data viewed in the once-shifted
        // complex flips the sign
        let geom = Geometry::half_space(Chirality::Minus);
        let f0 = tau_leg_form(&geom, 0);
        let f1 = tau_leg_form(&geom, 1);
        let g0 = GreensHomotopy::forward(SpaceId::Bulk).apply(&f0).unwrap();
        let g1 = GreensHomotopy::forward(SpaceId::Bulk).apply(&f1).unwrap();
        let flipped = Form { shift: 0, ..g1 };
        assert!(g0.add(&flipped).unwrap().is_zero());
    }

    #[test]
    fn boundary_chart_kernels_commute_with_restriction() {
        for geom in geoms() {
            let f = tau_leg_form(&geom, 1);
            let restricted = crate::forms::boundary_restrict(&geom, &f).unwrap();
            let lhs = crate::forms::boundary_restrict(
                &geom,
                &GreensHomotopy::forward(SpaceId::Bulk).apply(&f).unwrap(),
            )
            .unwrap();
            let rhs = GreensHomotopy::forward(SpaceId::Boundary)
                .apply(&restricted)
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().is_zero());
        }
    }

    #[test]
    fn non_compact_input_rejected() {
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let c = CoeffField::<Exact>::constant_on(&domains, Cx::one());
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, c);
        let f = Form::from_components(spec, 1, 1, comps);
        assert!(matches!(
            GreensHomotopy::forward(SpaceId::Bulk).apply(&f),
            Err(FormError::NonCompact(_))
        ));
        let _ = Q::zero();
    }
}
