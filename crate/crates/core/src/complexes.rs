//! Cochain-complex descriptors, membership predicates, evaluation-based
//! operator calculus and exact cohomology of finite subcomplexes.
//!
//! Quasi-isomorphisms in this crate are certified by explicit homotopy
//! identities on samples, never by cohomology of the ambient complexes;
//! [`cohomology_small`] exists for finite sanity fixtures only.

use crate::forms::{Form, FormError, boundary_restrict, sd_projectors};
use crate::geometry::{Geometry, SpaceId};
use crate::linalg;
use crate::regions::{Region, region_contains_support};
use crate::scalar::{Cx, Scalar};
use num_traits::Zero;
use crate::spline::Side;
use std::sync::Arc;

/// The complexes of the bulk/boundary system that forms can be tested against.
#[derive(Clone, Debug)]
pub enum ComplexId {
    /// Once-shifted bulk de Rham complex (fields: ghost, gauge field,
    /// antifields).
    FieldsBulk,
    /// Once-shifted boundary de Rham complex.
    FieldsBoundary,
    /// The (anti-)self-dual boundary condition subcomplex.
    BoundaryCondition,
    /// Bulk fields satisfying the boundary condition.
    ConditionedFields,
    /// Twice-shifted compactly supported conditioned fields: the linear
    /// observables, optionally localized to a region.
    LinearObservables(Option<Region>),
    /// Base observables with vanishing zero-form boundary values.
    BaseObservables(Option<Region>),
    /// Collar-chart observables with the same boundary condition at the
    /// collar end.
    TubularObservables(Option<Region>),
    /// Compactly supported functions on the base boundary.
    ChiralBoson(Option<Region>),
}

#[derive(Clone, Debug)]
pub struct MemberReport {
    pub ok: bool,
    pub residual: f64,
    pub reason: Option<String>,
}

impl MemberReport {
    fn pass() -> Self {
        MemberReport { ok: true, residual: 0.0, reason: None }
    }

    fn fail(residual: f64, reason: impl Into<String>) -> Self {
        MemberReport { ok: false, residual, reason: Some(reason.into()) }
    }
}

fn expect_space<S: Scalar>(form: &Form<S>, space: SpaceId) -> Result<(), FormError> {
    if form.spec.space != space {
        return Err(FormError::SpaceMismatch);
    }
    Ok(())
}

fn check_residual_form<S: Scalar>(f: &Form<S>, tol: f64, what: &str) -> MemberReport {
    if f.is_zero() {
        return MemberReport::pass();
    }
    let r = f.residual_norm();
    if r <= tol {
        MemberReport::pass()
    } else {
        MemberReport::fail(r, format!("{what} violated (residual {r:.3e})"))
    }
}

fn check_support<S: Scalar>(form: &Form<S>, region: &Option<Region>) -> Option<String> {
    if !form.has_compact_support() {
        return Some("support is not compact".into());
    }
    if let Some(r) = region {
        if !region_contains_support(r, &form.support) {
            return Some("support leaves the region".into());
        }
    }
    None
}

/// Membership in a complex: degree range, shift, support condition and the
/// boundary condition of the tag, with `tol` the float-mode max-norm bound.
pub fn member<S: Scalar>(
    geom: &Geometry,
    id: &ComplexId,
    form: &Form<S>,
    tol: f64,
) -> Result<MemberReport, FormError> {
    let tol = if S::EXACT { 0.0 } else { tol };
    match id {
        ComplexId::FieldsBulk => {
            expect_space(form, SpaceId::Bulk)?;
            if form.shift != 1 {
                return Ok(MemberReport::fail(0.0, "fields carry shift one"));
            }
            Ok(MemberReport::pass())
        }
        ComplexId::FieldsBoundary => {
            expect_space(form, SpaceId::Boundary)?;
            if form.shift != 1 {
                return Ok(MemberReport::fail(0.0, "fields carry shift one"));
            }
            Ok(MemberReport::pass())
        }
        ComplexId::BoundaryCondition => {
            expect_space(form, SpaceId::Boundary)?;
            if form.shift != 1 {
                return Ok(MemberReport::fail(0.0, "boundary condition sits in shift one"));
            }
            match form.dr_degree {
                0 => Ok(check_residual_form(form, tol, "vanishing of the degree -1 part")),
                1 => {
                    let (_, wrong) = chirality_split(geom, form)?;
                    Ok(check_residual_form(&wrong, tol, "(anti-)self-duality"))
                }
                2 => Ok(MemberReport::pass()),
                _ => Ok(MemberReport::fail(0.0, "de Rham degree out of range")),
            }
        }
        ComplexId::ConditionedFields | ComplexId::LinearObservables(_) => {
            expect_space(form, SpaceId::Bulk)?;
            let (want_shift, compact) = match id {
                ComplexId::ConditionedFields => (1, false),
                _ => (2, true),
            };
            if form.shift != want_shift {
                return Ok(MemberReport::fail(0.0, "wrong shift for this complex"));
            }
            if compact {
                let region = match id {
                    ComplexId::LinearObservables(r) => r,
                    _ => &None,
                };
                if let Some(reason) = check_support(form, region) {
                    return Ok(MemberReport::fail(0.0, reason));
                }
            }
            let restricted = boundary_restrict(geom, form)?;
            match form.dr_degree {
                0 => Ok(check_residual_form(
                    &restricted,
                    tol,
                    "ghost boundary values vanish",
                )),
                1 => {
                    let (_, wrong) = chirality_split(geom, &restricted)?;
                    Ok(check_residual_form(&wrong, tol, "gauge field boundary chirality"))
                }
                // antifields are unrestricted
                2 | 3 => Ok(MemberReport::pass()),
                _ => Ok(MemberReport::fail(0.0, "de Rham degree out of range")),
            }
        }
        ComplexId::BaseObservables(region) => {
            expect_space(form, SpaceId::Base)?;
            base_style_membership(geom, form, region, tol, SpaceId::Base)
        }
        ComplexId::TubularObservables(region) => {
            expect_space(form, SpaceId::Tubular)?;
            base_style_membership(geom, form, region, tol, SpaceId::Tubular)
        }
        ComplexId::ChiralBoson(region) => {
            expect_space(form, SpaceId::BaseBoundary)?;
            if form.shift != 0 || form.dr_degree != 0 {
                return Ok(MemberReport::fail(0.0, "chiral boson observables are plain functions"));
            }
            if let Some(reason) = check_support(form, region) {
                return Ok(MemberReport::fail(0.0, reason));
            }
            Ok(MemberReport::pass())
        }
    }
}

/// Shared degree/boundary logic of the once-shifted base-style complexes:
/// zero-forms must vanish on the boundary of the chart.
fn base_style_membership<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
    region: &Option<Region>,
    tol: f64,
    space: SpaceId,
) -> Result<MemberReport, FormError> {
    if form.shift != 1 {
        return Ok(MemberReport::fail(0.0, "base observables sit in shift one"));
    }
    if form.dr_degree > 2 {
        return Ok(MemberReport::fail(0.0, "de Rham degree out of range"));
    }
    if let Some(reason) = check_support(form, region) {
        return Ok(MemberReport::fail(0.0, reason));
    }
    if form.dr_degree == 0 {
        let axis = form.spec.radial_axis().expect("radial direction");
        let ends: Vec<(crate::scalar::Q, Side)> = match space {
            SpaceId::Tubular => vec![(crate::scalar::Q::zero(), Side::Above)],
            _ => match geom.kind {
                crate::geometry::GeometryKind::HalfSpace => {
                    vec![(crate::scalar::Q::zero(), Side::Above)]
                }
                crate::geometry::GeometryKind::Cylinder => vec![
                    (geom.inner_radius.clone(), Side::Above),
                    (crate::scalar::q_i64(1), Side::Below),
                ],
            },
        };
        let target = geom.space(SpaceId::BaseBoundary);
        for (value, side) in ends {
            let restricted = form.restrict_radial_at(target.clone(), axis, &value, side)?;
            let rep = check_residual_form(&restricted, tol, "boundary values of the zero-form");
            if !rep.ok {
                return Ok(rep);
            }
        }
    }
    Ok(MemberReport::pass())
}

/// Wrong-chirality component of a boundary one-form: the eigenprojection that
/// must vanish under the chosen boundary condition.
pub fn chirality_split<S: Scalar>(
    geom: &Geometry,
    boundary_one_form: &Form<S>,
) -> Result<(Form<S>, Form<S>), FormError> {
    let (sd, asd) = sd_projectors(geom, boundary_one_form)?;
    Ok(match geom.chirality {
        crate::geometry::Chirality::Plus => (sd, asd),
        crate::geometry::Chirality::Minus => (asd, sd),
    })
}

type OpFn<S> = dyn Fn(&Form<S>) -> Result<Form<S>, FormError> + Send + Sync;

/// A degree-carrying evaluable operator between complexes.
#[derive(Clone)]
pub struct HomCochain<S: Scalar> {
    pub name: String,
    pub degree: i64,
    op: Arc<OpFn<S>>,
}

impl<S: Scalar> HomCochain<S> {
    pub fn new(
        name: impl Into<String>,
        degree: i64,
        op: impl Fn(&Form<S>) -> Result<Form<S>, FormError> + Send + Sync + 'static,
    ) -> Self {
        HomCochain { name: name.into(), degree, op: Arc::new(op) }
    }

    pub fn identity() -> Self {
        HomCochain::new("id", 0, |f: &Form<S>| Ok(f.clone()))
    }

    pub fn apply(&self, form: &Form<S>) -> Result<Form<S>, FormError> {
        (self.op)(form)
    }

    /// Composite `self after other`; degrees add.
    pub fn compose(&self, other: &HomCochain<S>) -> HomCochain<S> {
        let f = self.op.clone();
        let g = other.op.clone();
        HomCochain {
            name: format!("{} . {}", self.name, other.name),
            degree: self.degree + other.degree,
            op: Arc::new(move |x: &Form<S>| f(&g(x)?)),
        }
    }

    pub fn scaled(&self, c: Cx<S>) -> HomCochain<S> {
        let f = self.op.clone();
        HomCochain {
            name: format!("scaled {}", self.name),
            degree: self.degree,
            op: Arc::new(move |x: &Form<S>| Ok(f(x)?.scale(&c))),
        }
    }

    /// The internal-hom differential evaluated on one sample:
    /// `d(h x) - (-1)^{|h|} h(d x)`, each `d` the shifted differential of the
    /// complex the form lives in.
    pub fn boundary_on(&self, sample: &Form<S>) -> Result<Form<S>, FormError> {
        let first = self.apply(sample)?.d();
        let second = self.apply(&sample.d())?;
        let sign = if self.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        if sign > 0 { first.sub(&second) } else { first.add(&second) }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ComplexError {
    #[error("not a subcomplex: {0}")]
    NotClosed(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A finite basis-presented subcomplex spanning consecutive cohomological
/// degrees.
pub struct FiniteComplex<S: Scalar> {
    pub start_degree: i64,
    pub bases: Vec<Vec<Form<S>>>,
}

/// Flatten forms onto one common grid, so linear algebra sees conforming
/// coordinate vectors.
pub fn flatten_forms<S: Scalar>(forms: &[&Form<S>]) -> Vec<Vec<Cx<S>>> {
    use std::collections::BTreeMap;
    if forms.is_empty() {
        return vec![];
    }
    // unify grids per component mask by summing zero-scaled copies
    let mut masks: Vec<u8> = forms
        .iter()
        .flat_map(|f| f.comps.keys().copied())
        .collect();
    masks.sort();
    masks.dedup();
    // for every mask, a reference grid: fold all fields together
    let mut reference: BTreeMap<u8, crate::coeff::CoeffField<S>> = BTreeMap::new();
    for f in forms {
        for (m, c) in &f.comps {
            let entry = reference.get(m).cloned();
            let merged = match entry {
                None => c.scale(&Cx::zero()),
                Some(r) => r.add(&c.scale(&Cx::zero())).expect("same layout"),
            };
            reference.insert(*m, merged);
        }
    }
    // enumerate the union of refined coordinates of the actual forms
    let mut coords: BTreeMap<(u8, crate::coeff::CellKey, crate::poly::Exps), usize> =
        BTreeMap::new();
    let mut refined: Vec<BTreeMap<u8, crate::coeff::CoeffField<S>>> = Vec::new();
    for f in forms {
        let mut per_mask = BTreeMap::new();
        for (m, c) in &f.comps {
            // refine to the union grid by adding the zero of the union layout
            let zero_union = reference
                .get(m)
                .cloned()
                .unwrap_or_else(|| c.scale(&Cx::zero()));
            let refined_c = c.add(&zero_union).expect("same layout");
            for (key, poly) in refined_c.cells.iter() {
                for e in poly.terms.keys() {
                    let k = (*m, key.clone(), *e);
                    let next = coords.len();
                    coords.entry(k).or_insert(next);
                }
            }
            per_mask.insert(*m, refined_c);
        }
        refined.push(per_mask);
    }
    let dim = coords.len();
    let mut out = Vec::with_capacity(forms.len());
    for per_mask in refined {
        let mut v = vec![Cx::zero(); dim];
        for (m, c) in per_mask {
            for (key, poly) in c.cells.iter() {
                for (e, coeff) in &poly.terms {
                    let idx = coords[&(m, key.clone(), *e)];
                    v[idx] = coeff.clone();
                }
            }
        }
        out.push(v);
    }
    out
}

/// Betti numbers of a finite basis-closed subcomplex by exact rank
/// computation. Fails when a differential leaves the declared span.
pub fn cohomology_small<S: Scalar>(
    cx: &FiniteComplex<S>,
) -> Result<Vec<(i64, usize)>, ComplexError> {
    let n = cx.bases.len();
    // rank of d_i : level i -> level i+1 expressed on the joint flattening
    let mut ranks = vec![0usize; n];
    for i in 0..n {
        let imgs: Vec<Form<S>> = cx.bases[i].iter().map(|f| f.d()).collect();
        let next: Vec<&Form<S>> = if i + 1 < n {
            cx.bases[i + 1].iter().collect()
        } else {
            vec![]
        };
        // closure check: every image lies in the span of the next level
        let mut all: Vec<&Form<S>> = next.clone();
        all.extend(imgs.iter());
        let flat = flatten_forms(&all);
        let basis_rows = &flat[..next.len()];
        for (j, img) in imgs.iter().enumerate() {
            let row = &flat[next.len() + j];
            if img.is_zero() || row.iter().all(|c| c.is_zero()) {
                continue;
            }
            if linalg::express_in_span(basis_rows, row).is_none() {
                return Err(ComplexError::NotClosed(format!(
                    "differential of basis vector {j} at level {i} leaves the span"
                )));
            }
        }
        let img_rows: Vec<Vec<Cx<S>>> = flat[next.len()..].to_vec();
        ranks[i] = linalg::rank(&img_rows);
    }
    let mut betti = Vec::with_capacity(n);
    for i in 0..n {
        let dim = cx.bases[i].len();
        let rank_out = ranks[i];
        let rank_in = if i == 0 { 0 } else { ranks[i - 1] };
        betti.push((cx.start_degree + i as i64, dim - rank_out - rank_in));
    }
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AxisDesc, CoeffField, Factor1D};
    use crate::fourier::FourierPoly;
    use crate::geometry::Chirality;
    use crate::scalar::{Exact, q_i64, q_ratio};
    use crate::spline::unit_bump;
    use std::collections::BTreeMap;

    fn circle_fn(geom: &Geometry, f: FourierPoly<Exact>, dr: usize, shift: i64) -> Form<Exact> {
        let spec = geom.space(SpaceId::BaseBoundary);
        let domains = spec.domains();
        let c = CoeffField::tensor(&domains, &[Factor1D::Fourier(f)]);
        let mut comps = BTreeMap::new();
        comps.insert(if dr == 0 { 0u8 } else { 1u8 }, c);
        Form::from_components(spec, dr, shift, comps)
    }

    #[test]
    fn circle_de_rham_truncation_has_two_classes() {
        // modes |k| <= 5 of functions and one-forms on the circle
        let geom = Geometry::cylinder(Chirality::Plus);
        let mut fns = Vec::new();
        let mut one_forms = Vec::new();
        fns.push(circle_fn(&geom, FourierPoly::constant(Exact::one()), 0, 0));
        one_forms.push(circle_fn(&geom, FourierPoly::constant(Exact::one()), 1, 0));
        for k in 1..=5 {
            fns.push(circle_fn(&geom, FourierPoly::cosine(k), 0, 0));
            fns.push(circle_fn(&geom, FourierPoly::sine(k), 0, 0));
            one_forms.push(circle_fn(&geom, FourierPoly::cosine(k), 1, 0));
            one_forms.push(circle_fn(&geom, FourierPoly::sine(k), 1, 0));
        }
        let cx = FiniteComplex { start_degree: 0, bases: vec![fns, one_forms] };
        let betti = cohomology_small(&cx).unwrap();
        assert_eq!(betti, vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn acyclic_two_term_identity_complex() {
        // the interval complex 0-forms -> 1-forms with compact support:
        // d is injective and misses the unit-integral class
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::BaseBoundary);
        let domains = spec.domains();
        let mut zero_forms = Vec::new();
        let mut one_forms = Vec::new();
        for i in 0..3 {
            let b = unit_bump::<Exact>(&q_i64(i), &q_i64(i + 2));
            let c = CoeffField::tensor(&domains, &[Factor1D::Spline(b.clone())]);
            let mut comps = BTreeMap::new();
            comps.insert(0u8, c.clone());
            zero_forms.push(Form::from_components(spec.clone(), 0, 0, comps));
            let mut comps1 = BTreeMap::new();
            comps1.insert(1u8, c);
            one_forms.push(Form::from_components(spec.clone(), 1, 0, comps1));
            let db = b.deriv();
            let dc = CoeffField::tensor(&domains, &[Factor1D::Spline(db)]);
            let mut comps2 = BTreeMap::new();
            comps2.insert(1u8, dc);
            one_forms.push(Form::from_components(spec.clone(), 1, 0, comps2));
        }
        let cx = FiniteComplex { start_degree: 0, bases: vec![zero_forms, one_forms] };
        let betti = cohomology_small(&cx).unwrap();
        // compactly supported interval cohomology: H^0 = 0, H^1 = 1 per
        // independent unit-integral class; here three bumps with distinct
        // supports give three integral classes
        assert_eq!(betti[0], (0, 0));
        assert_eq!(betti[1].1, 3);
    }

    #[test]
    fn closure_violation_detected() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let f = circle_fn(&geom, FourierPoly::sine(1), 0, 0);
        // next level only contains an unrelated mode
        let g = circle_fn(&geom, FourierPoly::cosine(2), 1, 0);
        let cx = FiniteComplex { start_degree: 0, bases: vec![vec![f], vec![g]] };
        assert!(matches!(cohomology_small(&cx), Err(ComplexError::NotClosed(_))));
    }

    #[test]
    fn conditioned_membership_examples() {
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        // gauge field whose boundary pullback is along the coframe: member
        let base_profile = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(-1), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(2))),
                Factor1D::Spline(unit_bump(&q_ratio(1, 2), &q_i64(2))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b010u8, base_profile.clone()); // du component only
        let good = Form::from_components(spec.clone(), 1, 1, comps);
        assert!(member(&geom, &ComplexId::ConditionedFields, &good, 0.0).unwrap().ok);
        // dtau component with nonzero boundary values: not a member
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, base_profile.clone());
        let bad = Form::from_components(spec.clone(), 1, 1, comps);
        // support reaches r = 0? the bump sits in (1/2, 2), away from the
        // boundary, so this one is fine after all
        assert!(member(&geom, &ComplexId::ConditionedFields, &bad, 0.0).unwrap().ok);
        // move the radial support onto the boundary to see the failure
        let touching = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(-1), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(2))),
                Factor1D::Spline(radial_profile_touching_zero()),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, touching.clone());
        let bad2 = Form::from_components(spec.clone(), 1, 1, comps);
        let rep = member(&geom, &ComplexId::ConditionedFields, &bad2, 0.0).unwrap();
        assert!(!rep.ok);
        // ghost with nonzero boundary values: rejected
        let mut comps = BTreeMap::new();
        comps.insert(0u8, touching);
        let ghost = Form::from_components(spec, 0, 1, comps);
        assert!(!member(&geom, &ComplexId::ConditionedFields, &ghost, 0.0).unwrap().ok);
    }

    // a compactly supported radial profile that is nonzero at r = 0
    fn radial_profile_touching_zero() -> crate::spline::PiecewisePoly<Exact> {
        use crate::poly::Poly1;
        crate::spline::PiecewisePoly::new(
            vec![q_i64(0), q_i64(1)],
            vec![
                Poly1::zero(),
                Poly1::from_coeffs(vec![Exact::one(), -Exact::one()]), // 1 - r
                Poly1::zero(),
            ],
        )
    }

    #[test]
    fn antifields_are_unrestricted() {
        let geom = Geometry::cylinder(Chirality::Minus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let c = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Fourier(FourierPoly::cosine(1)),
                Factor1D::Spline(unit_bump(&q_ratio(1, 3), &q_i64(1))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b111u8, c);
        let top = Form::from_components(spec, 3, 2, comps);
        assert!(member(&geom, &ComplexId::LinearObservables(None), &top, 0.0).unwrap().ok);
    }

    #[test]
    fn operator_boundary_of_identity_vanishes() {
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let c = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_i64(1), &q_i64(2))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, c);
        let f = Form::from_components(spec, 1, 1, comps);
        let id = HomCochain::<Exact>::identity();
        assert!(id.boundary_on(&f).unwrap().is_zero());
    }
}
