//! Dimensional reduction and the boundary zig-zag, with explicit homotopies.
//!
//! The quotient pushforward has the wedge-with-a-unit-bump quasi-inverse and
//! the cumulative-integral homotopy `K(x) = int_-inf^tau x - (int_-inf^tau
//! omega) wedge pushforward(x)`. On the collar chart, `kappa` embeds chiral
//! boson observables, `lambda` integrates the collar leg, and the collar
//! homotopy witnesses `id - kappa lambda`. The holonomy demo runs the zig-zag
//! end to end on the cylinder.

use crate::coeff::{AxisDesc, CoeffField, Factor1D};
use crate::forms::{FiberKind, Form, FormError};
use crate::geometry::{Geometry, GeometryKind, SpaceId};
use crate::greens::{flow_pushforward, flow_pullback};
use crate::scalar::{Cx, Q, Scalar, q_i64, q_ratio, q_to_string};
use crate::spline::{PiecewisePoly, unit_bump};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("the holonomy example runs on the cylinder")]
    NotCylinder,
    #[error("bump must integrate to one on its interval")]
    BadBump,
}

/// A compactly supported unit-integral one-form coefficient on a line
/// direction, with its cumulative integral.
#[derive(Clone, Debug)]
pub struct UnitBump<S: Scalar> {
    pub support: (Q, Q),
    pub profile: PiecewisePoly<S>,
    pub cumulative: PiecewisePoly<S>,
}

impl<S: Scalar> UnitBump<S> {
    pub fn new(a: &Q, b: &Q) -> Self {
        let profile = unit_bump::<S>(a, b);
        let cumulative = profile.cumulative_from_left(None).expect("compact support");
        UnitBump { support: (a.clone(), b.clone()), profile, cumulative }
    }

    /// Bump as a one-form with a leg along `axis` of the given chart,
    /// constant along the other directions.
    pub fn as_one_form(&self, geom: &Geometry, space: SpaceId, axis: usize, shift: i64) -> Form<S> {
        let spec = geom.space(space);
        let domains = spec.domains();
        let factors: Vec<Factor1D<S>> = spec
            .dirs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if i == axis {
                    Factor1D::Spline(self.profile.clone())
                } else {
                    match d.domain {
                        AxisDesc::Circle { .. } =>

                            Factor1D::Fourier(crate::fourier::FourierPoly::constant(S::one())),
                        AxisDesc::Line { .. } => {
                            Factor1D::Spline(PiecewisePoly::constant(S::one()))
                        }
                    }
                }
            })
            .collect();
        let c = CoeffField::tensor(&domains, &factors);
        let mut comps = BTreeMap::new();
        comps.insert(1u8 << axis, c);
        Form::from_components(spec, 1, shift, comps)
    }
}

/// Corestricted quotient pushforward of a bulk observable.
pub fn pi_star<S: Scalar>(geom: &Geometry, form: &Form<S>) -> Result<Form<S>, FormError> {
    flow_pushforward(geom, form)
}

/// Quasi-inverse of the pushforward: wedge the flow bump onto the pullback.
pub fn omega_star<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    // omega as a bulk dtau one-form of shift zero
    let omega = bump.as_one_form(geom, SpaceId::Bulk, 0, 0);
    let lifted = flow_pullback(geom, form)?;
    omega.wedge(&lifted)
}

/// The reduction homotopy: cumulative integral minus the cumulative bump
/// wedge the pushforward. Degree `-1`, stays in the observables complex.
pub fn reduction_homotopy<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let tau = form
        .spec
        .tau_axis()
        .ok_or_else(|| FormError::NoSuchDirection("tau".into()))?;
    let first = form.fiber_integrate(tau, FiberKind::CumulativeFromBelow, None)?;
    // (int_-inf^tau omega) as a bulk zero-form
    let spec = form.spec.clone();
    let domains = spec.domains();
    let factors: Vec<Factor1D<S>> = spec
        .dirs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if i == tau {
                Factor1D::Spline(bump.cumulative.clone())
            } else {
                match d.domain {
                    AxisDesc::Circle { .. } => {
                        Factor1D::Fourier(crate::fourier::FourierPoly::constant(S::one()))
                    }
                    AxisDesc::Line { .. } => Factor1D::Spline(PiecewisePoly::constant(S::one())),
                }
            }
        })
        .collect();
    let cum_omega = Form::from_components(spec, 0, 0, {
        let mut m = BTreeMap::new();
        m.insert(0u8, CoeffField::tensor(&domains, &factors));
        m
    });
    let pushed = flow_pullback(geom, &pi_star(geom, form)?)?;
    let second = cum_omega.wedge(&pushed)?;
    first.sub(&second)
}

/// Residual of `id - omega_star pi_star - boundary(K)` on one sample.
pub fn reduction_sdr_residual<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let round_trip = omega_star(geom, bump, &pi_star(geom, form)?)?;
    let lhs = form.sub(&round_trip)?;
    // boundary(K) = d K + K d on the (+d)-shifted observables; the shifted
    // signs cancel in pairs, so evaluate with the forms' own differentials
    let k = HomK { geom: geom.clone(), bump: bump.clone() };
    let dk = k.apply(form)?.d();
    let kd = k.apply(&form.d())?;
    let boundary = dk.add(&kd)?;
    lhs.sub(&boundary)
}

struct HomK<S: Scalar> {
    geom: Geometry,
    bump: UnitBump<S>,
}

impl<S: Scalar> HomK<S> {
    fn apply(&self, f: &Form<S>) -> Result<Form<S>, FormError> {
        reduction_homotopy(&self.geom, &self.bump, f)
    }
}

/// Chiral boson embedding into the collar chart:
/// `kappa(phi) = omega wedge phi - (int_rho^1 omega) wedge d phi`.
pub fn kappa<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    phi: &Form<S>,
) -> Result<Form<S>, FormError> {
    if phi.spec.space != SpaceId::BaseBoundary || phi.dr_degree != 0 {
        return Err(FormError::Degree(
            "kappa embeds compactly supported boundary functions".into(),
        ));
    }
    let spec = geom.space(SpaceId::Tubular);
    let rho = 1usize; // collar axis position in (p, rho)
    let omega = bump.as_one_form(geom, SpaceId::Tubular, rho, 0);
    let lift = |g: &Form<S>| g.pullback_insert(spec.clone(), rho, false);
    let first = omega.wedge(&lift(phi))?;
    // remaining bump mass int_rho^1 omega as a collar zero-form
    let tail = bump
        .profile
        .cumulative_to_right(Some(&q_i64(1)))
        .map_err(|e| FormError::Other(e))?;
    let domains = spec.domains();
    let factors: Vec<Factor1D<S>> = spec
        .dirs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if i == rho {
                Factor1D::Spline(tail.clone())
            } else {
                match d.domain {
                    AxisDesc::Circle { .. } => {
                        Factor1D::Fourier(crate::fourier::FourierPoly::constant(S::one()))
                    }
                    AxisDesc::Line { .. } => Factor1D::Spline(PiecewisePoly::constant(S::one())),
                }
            }
        })
        .collect();
    let tail_form = Form::from_components(spec.clone(), 0, 0, {
        let mut m = BTreeMap::new();
        m.insert(0u8, CoeffField::tensor(&domains, &factors));
        m
    });
    // d phi on the unshifted boundary functions, lifted to the collar
    let dphi = Form { shift: 0, ..phi.clone() }.d();
    let second = tail_form.wedge(&lift(&dphi))?;
    let out = first.sub(&second)?;
    // lands in the once-shifted collar observables
    Ok(Form { shift: 1, ..out })
}

/// Quasi-inverse of `kappa`: integrate the collar leg of the degree-zero part.
pub fn lambda<S: Scalar>(geom: &Geometry, form: &Form<S>) -> Result<Form<S>, FormError> {
    if form.spec.space != SpaceId::Tubular {
        return Err(FormError::SpaceMismatch);
    }
    let target = geom.space(SpaceId::BaseBoundary);
    if form.dr_degree != 1 {
        return Ok(Form::zero(target, 0, 0));
    }
    let out = form.fiber_integrate(1, FiberKind::Full, Some(target))?;
    Ok(Form { shift: 0, ..out })
}

/// The collar homotopy of the boundary simplification: degree-dependent
/// cumulative collar integrals.
pub fn boundary_homotopy<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    if form.spec.space != SpaceId::Tubular {
        return Err(FormError::SpaceMismatch);
    }
    if form.is_zero() {
        return Ok(Form::zero(form.spec.clone(), form.dr_degree.saturating_sub(1), form.shift));
    }
    let rho = 1usize;
    match form.dr_degree {
        0 => Ok(Form::zero(form.spec.clone(), 0, form.shift)),
        1 => {
            let first = form.fiber_integrate(rho, FiberKind::CumulativeToAbove, None)?;
            // (int_rho^1 omega) wedge (int_0^1 form)
            let lam = lambda(geom, form)?;
            let lifted = Form {
                shift: form.shift - 1,
                ..lam.pullback_insert(form.spec.clone(), rho, false)
            };
            let tail = bump
                .profile
                .cumulative_to_right(Some(&q_i64(1)))
                .map_err(FormError::Other)?;
            let spec = form.spec.clone();
            let domains = spec.domains();
            let factors: Vec<Factor1D<S>> = spec
                .dirs
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    if i == rho {
                        Factor1D::Spline(tail.clone())
                    } else {
                        match d.domain {
                            AxisDesc::Circle { .. } => Factor1D::Fourier(
                                crate::fourier::FourierPoly::constant(S::one()),
                            ),
                            AxisDesc::Line { .. } => {
                                Factor1D::Spline(PiecewisePoly::constant(S::one()))
                            }
                        }
                    }
                })
                .collect();
            let tail_form = Form::from_components(spec, 0, 1, {
                let mut m = BTreeMap::new();
                m.insert(0u8, CoeffField::tensor(&domains, &factors));
                m
            });
            let second = tail_form.wedge(&lifted)?;
            // both terms are zero-forms in the shifted chart; match shifts
            let first = Form { shift: form.shift, ..first };
            let second = Form { shift: form.shift, ..second };
            first.sub(&second)
        }
        2 => {
            let out = form.fiber_integrate(rho, FiberKind::CumulativeToAbove, None)?;
            Ok(Form { shift: form.shift, ..out })
        }
        _ => Err(FormError::Degree("collar chart has de Rham degrees 0..2".into())),
    }
}

/// Residual of `id - kappa lambda - boundary(K)` on a collar observable.
pub fn boundary_sdr_residual<S: Scalar>(
    geom: &Geometry,
    bump: &UnitBump<S>,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    let kl = kappa(geom, bump, &lambda(geom, form)?)?;
    let kl = Form { shift: form.shift, dr_degree: form.dr_degree, ..kl };
    let lhs = form.sub(&kl)?;
    // boundary(K) = -(d K + K d) on the once-shifted collar complex: the
    // chart differential is -d and K has degree -1
    let dk = boundary_homotopy(geom, bump, form)?.d();
    let kd = boundary_homotopy(geom, bump, &form.d())?;
    let boundary = dk.add(&kd)?;
    lhs.sub(&boundary)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HolonomyReport {
    pub alpha: String,
    pub pairing: String,
    pub lambda_value: String,
    pub zigzag_residual: f64,
    pub pass: bool,
}

/// End-to-end holonomy demo on the cylinder: the radial unit-bump observable
/// pairs with the flat connection `alpha dchi` to `-alpha`, reduces to the
/// zero-mode observable `1`, and the zig-zag closes up to an exact term.
pub fn holonomy_demo<S: Scalar>(
    geom: &Geometry,
    bump_support: (&Q, &Q),
    alpha: &Q,
    tol: f64,
) -> Result<HolonomyReport, ReductionError> {
    if geom.kind != GeometryKind::Cylinder {
        return Err(ReductionError::NotCylinder);
    }
    let bump = UnitBump::<S>::new(bump_support.0, bump_support.1);
    let spec = geom.space(SpaceId::Tubular);
    // the holonomy observable: collar bump one-form in the interior window
    let omega = bump.as_one_form(geom, SpaceId::Tubular, 1, 1);
    // flat connection alpha dchi as a field on the collar chart
    let domains = spec.domains();
    let a_coeff = CoeffField::<S>::constant_on(&domains, Cx::real(S::from_q(alpha)));
    let mut comps = BTreeMap::new();
    comps.insert(0b01u8, a_coeff);
    let connection = Form::from_components(spec.clone(), 1, 1, comps);
    // evaluation pairing of the observable on the field
    let p = crate::poisson::Pairing::new(crate::poisson::PairingKind::Ev, geom.clone());
    let pairing = p
        .pair(&omega, &connection)
        .map_err(|e| ReductionError::Form(FormError::Other(e.to_string())))?;
    // lambda lands on the zero-mode observable
    let lam = lambda(geom, &omega)?;
    let lam_value = lam
        .component(0)
        .map(|c| c.eval_f64(&[Q::zero()]).0)
        .unwrap_or(0.0);
    // zig-zag: omega - kappa lambda omega + d K omega = 0
    let res = boundary_sdr_residual(geom, &bump, &omega)?;
    let residual = res.residual_norm();
    let exact_ok = if S::EXACT { res.is_zero() } else { residual <= tol };
    let expect_pairing = Cx::real(S::from_q(&-alpha.clone()));
    let pass = exact_ok
        && (pairing == expect_pairing || (pairing.clone() - expect_pairing).abs_f64() <= tol)
        && (lam_value - 1.0).abs() <= tol.max(1e-12);
    Ok(HolonomyReport {
        alpha: q_to_string(alpha),
        pairing: format!("{}", if pairing.re.to_f64() == 0.0 { 0.0 } else { pairing.re.to_f64() }),
        lambda_value: format!("{lam_value}"),
        zigzag_residual: residual,
        pass,
    })
}

/// Default collar window of the holonomy observable.
pub fn default_holonomy_window() -> (Q, Q) {
    (q_ratio(1, 2), q_i64(1))
}
