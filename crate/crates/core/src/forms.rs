//! Graded differential forms on the product charts.
//!
//! A form is homogeneous in de Rham degree, carries a cohomological shift
//! (complex degree = de Rham degree - shift, with the shifted differential
//! `(-1)^shift d`), stores one exact coefficient per multi-index of chart
//! directions, and tracks a closed support box. Components use bitmask
//! multi-indices in the chart's direction order; all reordering signs are
//! inversion counts on those masks.

use crate::coeff::{AxisDesc, CoeffError, CoeffField};
use crate::geometry::{Geometry, SpaceId, SpaceSpec};
use crate::scalar::{Cx, Q, Scalar, q_i64};
use crate::spline::Side;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum FormError {
    #[error("forms live on different spaces")]
    SpaceMismatch,
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("shift mismatch: {0} vs {1}")]
    Shift(i64, i64),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("non-compact support: {0}")]
    NonCompact(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("direction absent from space: {0}")]
    NoSuchDirection(String),
    #[error("{0}")]
    Other(String),
}

/// Closed per-axis support bound. `None` on a side means unbounded.
#[derive(Clone, PartialEq, Debug)]
pub enum AxisSupport {
    Interval { lo: Option<Q>, hi: Option<Q> },
    CircleFull,
}

pub type SupportBox = Vec<AxisSupport>;

/// Variant of restricted fiber integration along one direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FiberKind {
    /// Integrate the whole fiber, dropping the direction (degree -1 map onto
    /// the reduced chart; shift decreases by one).
    Full,
    /// Cumulative integral from the lower end (the forward Green's kernel).
    CumulativeFromBelow,
    /// Cumulative integral to the upper end (`int_x^top`).
    CumulativeToAbove,
}

#[derive(Clone, Debug)]
pub struct Form<S: Scalar> {
    pub spec: SpaceSpec,
    pub dr_degree: usize,
    pub shift: i64,
    /// Component coefficients keyed by direction bitmask with
    /// `popcount == dr_degree`.
    pub comps: BTreeMap<u8, CoeffField<S>>,
    pub support: SupportBox,
}

/// Sign of sorting `dx_j` into an already sorted product `dx_I`.
fn insert_sign(mask: u8, j: usize) -> i64 {
    let below = (mask & ((1u8 << j) - 1)).count_ones();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of concatenating sorted products `dx_A wedge dx_B` into sorted order.
fn merge_sign(a: u8, b: u8) -> i64 {
    let mut inversions = 0u32;
    for j in 0..8 {
        if b & (1 << j) != 0 {
            inversions += (a & !((1u8 << (j + 1)).wrapping_sub(1))).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero(spec: SpaceSpec, dr_degree: usize, shift: i64) -> Self {
        let support = spec
            .dirs
            .iter()
            .map(|d| match d.domain {
                AxisDesc::Circle { .. } => AxisSupport::CircleFull,
                AxisDesc::Line { .. } => AxisSupport::Interval {
                    lo: Some(Q::zero()),
                    hi: Some(Q::zero()),
                },
            })
            .collect();
        Form { spec, dr_degree, shift, comps: BTreeMap::new(), support }
    }

    pub fn from_components(
        spec: SpaceSpec,
        dr_degree: usize,
        shift: i64,
        comps: BTreeMap<u8, CoeffField<S>>,
    ) -> Self {
        let mut f = Form::zero(spec, dr_degree, shift);
        for (mask, c) in comps {
            assert_eq!(
                mask.count_ones() as usize,
                dr_degree,
                "component mask does not match the de Rham degree"
            );
            if !c.is_zero() {
                f.comps.insert(mask, c);
            }
        }
        f.recompute_support();
        f
    }

    /// Tight support box of the stored components.
    pub fn recompute_support(&mut self) {
        let dim = self.spec.dim();
        let mut support: SupportBox = Vec::with_capacity(dim);
        for axis in 0..dim {
            match self.spec.dirs[axis].domain {
                AxisDesc::Circle { .. } => support.push(AxisSupport::CircleFull),
                AxisDesc::Line { .. } => {
                    let mut lo: Option<Q> = None;
                    let mut hi: Option<Q> = None;
                    let mut any = false;
                    let mut unbounded_lo = false;
                    let mut unbounded_hi = false;
                    for c in self.comps.values() {
                        if let Some((l, h)) = c.line_support(axis) {
                            any = true;
                            match l {
                                None => unbounded_lo = true,
                                Some(v) => lo = Some(lo.map_or(v.clone(), |x: Q| x.min(v))),
                            }
                            match h {
                                None => unbounded_hi = true,
                                Some(v) => hi = Some(hi.map_or(v.clone(), |x: Q| x.max(v))),
                            }
                        }
                    }
                    let lo = if !any {
                        Some(Q::zero())
                    } else if unbounded_lo {
                        None
                    } else {
                        lo
                    };
                    let hi = if !any {
                        Some(Q::zero())
                    } else if unbounded_hi {
                        None
                    } else {
                        hi
                    };
                    support.push(AxisSupport::Interval { lo, hi });
                }
            }
        }
        self.support = support;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Cohomological degree in the shifted complex.
    pub fn coh_degree(&self) -> i64 {
        self.dr_degree as i64 - self.shift
    }

    pub fn component(&self, mask: u8) -> Option<&CoeffField<S>> {
        self.comps.get(&mask)
    }

    fn compatible(&self, rhs: &Self) -> Result<(), FormError> {
        if self.spec != rhs.spec {
            return Err(FormError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FormError> {
        self.compatible(rhs)?;
        if self.dr_degree != rhs.dr_degree && !self.is_zero() && !rhs.is_zero() {
            return Err(FormError::Degree(format!(
                "{} vs {}",
                self.dr_degree, rhs.dr_degree
            )));
        }
        if self.shift != rhs.shift {
            return Err(FormError::Shift(self.shift, rhs.shift));
        }
        let mut comps = self.comps.clone();
        for (mask, c) in &rhs.comps {
            let entry = match comps.get(mask) {
                Some(existing) => existing.add(c)?,
                None => c.clone(),
            };
            comps.insert(*mask, entry);
        }
        comps.retain(|_, c| !c.is_zero());
        let dr = if self.is_zero() { rhs.dr_degree } else { self.dr_degree };
        Ok(Form::from_components(self.spec.clone(), dr, self.shift, comps))
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(m, c)| (*m, c.neg())).collect();
        Form::from_components(self.spec.clone(), self.dr_degree, self.shift, comps)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FormError> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Cx<S>) -> Self {
        let comps = self.comps.iter().map(|(m, c)| (*m, c.scale(s))).collect();
        Form::from_components(self.spec.clone(), self.dr_degree, self.shift, comps)
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        self.scale(&Cx::from_q(q))
    }

    /// Shifted de Rham differential `(-1)^shift d`. Top degree maps to the
    /// zero form.
    pub fn d(&self) -> Self {
        let dim = self.dim();
        let mut out = Form::zero(self.spec.clone(), self.dr_degree + 1, self.shift);
        if self.dr_degree >= dim {
            return out;
        }
        let shift_sign = if self.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        for (mask, c) in &self.comps {
            for j in 0..dim {
                let bit = 1u8 << j;
                if mask & bit != 0 {
                    continue;
                }
                let sign = insert_sign(*mask, j) * shift_sign;
                let dc = c.deriv(j);
                if dc.is_zero() {
                    continue;
                }
                let dc = if sign < 0 { dc.neg() } else { dc };
                let key = mask | bit;
                let entry = match comps.get(&key) {
                    Some(existing) => existing.add(&dc).expect("same layout"),
                    None => dc,
                };
                comps.insert(key, entry);
            }
        }
        comps.retain(|_, c| !c.is_zero());
        out.comps = comps;
        out.recompute_support();
        out
    }

    /// Plain de Rham differential without the shift sign (raw Stokes data).
    pub fn d_de_rham(&self) -> Self {
        let unshifted = Form { shift: 0, ..self.clone() };
        Form { shift: self.shift, ..unshifted.d() }
    }

    /// Exterior product with exact coefficient arithmetic. Degree overflow
    /// past the chart dimension gives the zero form. Shifts add, matching the
    /// pairing into the doubly shifted de Rham complex.
    pub fn wedge(&self, rhs: &Self) -> Result<Self, FormError> {
        self.compatible(rhs)?;
        let dr = self.dr_degree + rhs.dr_degree;
        let shift = self.shift + rhs.shift;
        if dr > self.dim() {
            return Ok(Form::zero(self.spec.clone(), self.dim(), shift));
        }
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        for (ma, ca) in &self.comps {
            for (mb, cb) in &rhs.comps {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma, *mb);
                let prod = ca.mul(cb)?;
                if prod.is_zero() {
                    continue;
                }
                let prod = if sign < 0 { prod.neg() } else { prod };
                let key = ma | mb;
                let entry = match comps.get(&key) {
                    Some(existing) => existing.add(&prod)?,
                    None => prod,
                };
                comps.insert(key, entry);
            }
        }
        comps.retain(|_, c| !c.is_zero());
        Ok(Form::from_components(self.spec.clone(), dr, shift, comps))
    }

    /// Signed pairing `(a, b) = (-1)^{|a|} a wedge b` on shifted complexes.
    pub fn signed_pair(&self, rhs: &Self) -> Result<Self, FormError> {
        let w = self.wedge(rhs)?;
        Ok(if self.coh_degree().rem_euclid(2) == 1 { w.neg() } else { w })
    }

    /// Integral over the chart in its fixed orientation. Returns zero for
    /// non-top degree (graded convention); errors on genuinely non-compact
    /// support.
    pub fn integrate(&self) -> Result<Cx<S>, FormError> {
        if self.dr_degree != self.dim() {
            return Ok(Cx::zero());
        }
        let full: u8 = (1u8 << self.dim()) - 1;
        let mut total = Cx::zero();
        if let Some(c) = self.comps.get(&full) {
            let mut cur = c.clone();
            for _ in 0..self.dim() {
                cur = cur.integrate_axis(0).map_err(|e| match e {
                    CoeffError::NonCompact(m) => FormError::NonCompact(m),
                    other => FormError::Coeff(other),
                })?;
            }
            total = cur
                .cells
                .values()
                .next()
                .map(|p| p.terms.get(&[0, 0, 0]).cloned().unwrap_or_else(Cx::zero))
                .unwrap_or_else(Cx::zero);
        }
        if self.spec.orientation_sign < 0 {
            total = -total;
        }
        Ok(total)
    }

    /// Restricted fiber integration along `axis`. `Full` drops the direction
    /// and lands on `target_spec` (the reduced chart) with the shift lowered
    /// by one; the cumulative variants keep the chart and shift. Components
    /// without a leg along the direction map to zero. Fiber-first orientation:
    /// the sign moves the fiber leg to the front of the multi-index.
    pub fn fiber_integrate(
        &self,
        axis: usize,
        kind: FiberKind,
        target_spec: Option<SpaceSpec>,
    ) -> Result<Self, FormError> {
        let dim = self.dim();
        if axis >= dim {
            return Err(FormError::NoSuchDirection(format!("axis {axis}")));
        }
        let bit = 1u8 << axis;
        let (out_spec, out_shift) = match kind {
            FiberKind::Full => (
                target_spec.ok_or_else(|| FormError::Other("missing target chart".into()))?,
                self.shift - 1,
            ),
            _ => (self.spec.clone(), self.shift),
        };
        let out_dr = self.dr_degree.saturating_sub(1);
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        for (mask, c) in &self.comps {
            if mask & bit == 0 {
                continue;
            }
            let sign = insert_sign(*mask & !bit, axis); // move fiber leg to front
            let integrated = match kind {
                FiberKind::Full => c.integrate_axis(axis).map_err(|e| match e {
                    CoeffError::NonCompact(m) => FormError::NonCompact(m),
                    other => FormError::Coeff(other),
                })?,
                FiberKind::CumulativeFromBelow => c.cumulative_from_left(axis).map_err(|e| {
                    match e {
                        CoeffError::NonCompact(m) => FormError::NonCompact(m),
                        other => FormError::Coeff(other),
                    }
                })?,
                FiberKind::CumulativeToAbove => c.cumulative_to_right(axis).map_err(|e| {
                    match e {
                        CoeffError::NonCompact(m) => FormError::NonCompact(m),
                        other => FormError::Coeff(other),
                    }
                })?,
            };
            if integrated.is_zero() {
                continue;
            }
            let integrated = if sign < 0 { integrated.neg() } else { integrated };
            let key = match kind {
                FiberKind::Full => {
                    // re-pack mask without the removed axis
                    let mut m2 = 0u8;
                    let mut j = 0;
                    for i in 0..dim {
                        if i == axis {
                            continue;
                        }
                        if mask & (1 << i) != 0 {
                            m2 |= 1 << j;
                        }
                        j += 1;
                    }
                    m2
                }
                _ => mask & !bit,
            };
            let entry = match comps.get(&key) {
                Some(existing) => existing.add(&integrated)?,
                None => integrated,
            };
            comps.insert(key, entry);
        }
        comps.retain(|_, c| !c.is_zero());
        Ok(Form::from_components(out_spec, out_dr, out_shift, comps))
    }

    /// Pullback along the projection that forgets a direction: inserts the
    /// direction at `axis` with constant dependence, raising the shift by one
    /// when `raise_shift` (quotient-map pullback) or keeping it (plain
    /// projection pullback, e.g. collar bumps).
    pub fn pullback_insert(
        &self,
        target_spec: SpaceSpec,
        axis: usize,
        raise_shift: bool,
    ) -> Self {
        let domain = target_spec.dirs[axis].domain.clone();
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        let dim = self.dim();
        for (mask, c) in &self.comps {
            let mut m2 = 0u8;
            for i in 0..dim {
                if mask & (1 << i) != 0 {
                    let target = if i < axis { i } else { i + 1 };
                    m2 |= 1 << target;
                }
            }
            comps.insert(m2, c.insert_axis(axis, &domain));
        }
        let shift = if raise_shift { self.shift + 1 } else { self.shift };
        Form::from_components(target_spec, self.dr_degree, shift, comps)
    }

    /// Evaluate the radial/collar direction at a boundary value, landing on
    /// the reduced chart. Components with a leg along the direction drop.
    pub fn restrict_radial_at(
        &self,
        target_spec: SpaceSpec,
        axis: usize,
        value: &Q,
        side: Side,
    ) -> Result<Self, FormError> {
        let dim = self.dim();
        let bit = 1u8 << axis;
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        for (mask, c) in &self.comps {
            if mask & bit != 0 {
                continue; // normal leg drops under pullback to the boundary
            }
            let restricted = c.eval_axis(axis, value, side)?;
            if restricted.is_zero() {
                continue;
            }
            let mut m2 = 0u8;
            let mut j = 0;
            for i in 0..dim {
                if i == axis {
                    continue;
                }
                if mask & (1 << i) != 0 {
                    m2 |= 1 << j;
                }
                j += 1;
            }
            comps.insert(m2, restricted);
        }
        Ok(Form::from_components(
            target_spec,
            self.dr_degree,
            self.shift,
            comps,
        ))
    }

    /// Substitute `tau -> tau + s` (the flow pullback in adapted coordinates).
    pub fn translate_tau(&self, s: &Q) -> Result<Self, FormError> {
        let axis = self
            .spec
            .tau_axis()
            .ok_or_else(|| FormError::NoSuchDirection("tau".into()))?;
        let mut comps = BTreeMap::new();
        for (mask, c) in &self.comps {
            comps.insert(*mask, translate_axis(c, axis, s));
        }
        Ok(Form::from_components(
            self.spec.clone(),
            self.dr_degree,
            self.shift,
            comps,
        ))
    }

    /// Max sampled coefficient magnitude, the reported residual size.
    pub fn residual_norm(&self) -> f64 {
        self.comps
            .values()
            .map(|c| c.residual_norm())
            .fold(0.0, f64::max)
    }

    /// Whether all components define real-valued functions.
    pub fn is_real(&self) -> bool {
        self.comps.values().all(|c| c.is_real())
    }

    /// Compact support along every unbounded line direction.
    pub fn has_compact_support(&self) -> bool {
        self.support.iter().zip(self.spec.dirs.iter()).all(|(s, d)| {
            match (s, &d.domain) {
                (AxisSupport::Interval { lo, hi }, AxisDesc::Line { lo: dlo, hi: dhi, .. }) => {
                    (lo.is_some() || dlo.is_some()) && (hi.is_some() || dhi.is_some())
                }
                _ => true,
            }
        })
    }
}

/// Substitute `x -> x + s` along a line axis of a coefficient field.
fn translate_axis<S: Scalar>(c: &CoeffField<S>, axis: usize, s: &Q) -> CoeffField<S> {
    let var = c.axes[..axis].iter().filter(|a| a.is_line()).count();
    let mut out = c.clone();
    if let AxisDesc::Line { knots, .. } = &mut out.axes[axis] {
        for k in knots.iter_mut() {
            *k = &*k - s;
        }
    } else {
        panic!("translate along a circle axis");
    }
    let mut cells = BTreeMap::new();
    for (key, p) in &out.cells {
        cells.insert(key.clone(), shift_poly_var(p, var, s));
    }
    out.cells = cells;
    out
}

/// Polynomial substitution `x_var -> x_var + s` via binomial expansion.
fn shift_poly_var<S: Scalar>(
    p: &crate::poly::MPoly<S>,
    var: usize,
    s: &Q,
) -> crate::poly::MPoly<S> {
    let mut out = crate::poly::MPoly::zero();
    for (e, c) in &p.terms {
        let n = e[var] as usize;
        // (x+s)^n = sum_k C(n,k) s^(n-k) x^k
        let mut binom = Q::from_integer(1.into());
        // iterate k from n downto 0, maintaining C(n,k) incrementally
        let mut coeffs: Vec<Q> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            if k > 0 {
                binom = binom * q_i64((n - k + 1) as i64) / q_i64(k as i64);
            }
            let pow = num_traits::pow::pow(s.clone(), n - k);
            coeffs.push(&binom * pow);
        }
        for (k, coeff) in coeffs.iter().enumerate() {
            let mut e2 = *e;
            e2[var] = k as u8;
            let add = c.scale_q(coeff);
            let entry = out.terms.entry(e2).or_insert_with(Cx::zero);
            *entry = entry.clone() + add;
        }
    }
    out.terms.retain(|_, c| !c.is_zero());
    out
}

/// Pullback of a bulk form to the chiral boundary (drops the radial leg and
/// evaluates the radial coordinate at the boundary).
pub fn boundary_restrict<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    if form.spec.space != SpaceId::Bulk {
        return Err(FormError::Degree("boundary restriction needs a bulk form".into()));
    }
    let (value, side) = geom.boundary_radial_value();
    let axis = form.spec.radial_axis().unwrap();
    form.restrict_radial_at(geom.space(SpaceId::Boundary), axis, &value, side)
}

/// Extension by zero into a larger region: representation unchanged, support
/// must already sit inside the source region.
pub fn ext<S: Scalar>(
    form: &Form<S>,
    source: &crate::regions::Region,
    target: &crate::regions::Region,
) -> Result<Form<S>, FormError> {
    if !crate::regions::region_contains_support(source, &form.support) {
        return Err(FormError::SupportViolation(
            "form support not contained in the source region".into(),
        ));
    }
    if !crate::regions::region_subset(source, target) {
        return Err(FormError::SupportViolation(
            "source region not contained in the target region".into(),
        ));
    }
    Ok(form.clone())
}

/// Boundary Hodge star on one-forms of the chiral boundary.
pub fn hodge_star_boundary<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<Form<S>, FormError> {
    if form.spec.space != SpaceId::Boundary || form.dr_degree != 1 {
        return Err(FormError::Degree(
            "the boundary star is defined on boundary one-forms".into(),
        ));
    }
    let m = geom.boundary_hodge_matrix();
    let a = form.component(0b01).cloned();
    let b = form.component(0b10).cloned();
    let domains = form.spec.domains();
    let zero = CoeffField::zero_on(&domains);
    let a = a.unwrap_or_else(|| zero.clone());
    let b = b.unwrap_or_else(|| zero.clone());
    // star(a dtau + b dp) = (a m00 + b m10) dtau + (a m01 + b m11) dp
    let new_a = a
        .scale(&Cx::from_q(&m[0][0]))
        .add(&b.scale(&Cx::from_q(&m[1][0])))?;
    let new_b = a
        .scale(&Cx::from_q(&m[0][1]))
        .add(&b.scale(&Cx::from_q(&m[1][1])))?;
    let mut comps = BTreeMap::new();
    if !new_a.is_zero() {
        comps.insert(0b01u8, new_a);
    }
    if !new_b.is_zero() {
        comps.insert(0b10u8, new_b);
    }
    Ok(Form::from_components(form.spec.clone(), 1, form.shift, comps))
}

/// Eigenprojections `(self-dual part, anti-self-dual part)` of a boundary
/// one-form under the Hodge star.
pub fn sd_projectors<S: Scalar>(
    geom: &Geometry,
    form: &Form<S>,
) -> Result<(Form<S>, Form<S>), FormError> {
    let star = hodge_star_boundary(geom, form)?;
    let half = crate::scalar::q_ratio(1, 2);
    let plus = form.add(&star)?.scale_q(&half);
    let minus = form.sub(&star)?.scale_q(&half);
    Ok((plus, minus))
}

/// The nowhere-vanishing flow-invariant (anti-)self-dual coframe: the base
/// coordinate differential in adapted coordinates, for either chirality.
pub fn invariant_chiral_coframe<S: Scalar>(geom: &Geometry) -> Form<S> {
    let spec = geom.space(SpaceId::Boundary);
    let domains = spec.domains();
    let one = CoeffField::constant_on(&domains, Cx::one());
    let mut comps = BTreeMap::new();
    comps.insert(0b10u8, one);
    Form::from_components(spec, 1, 1, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Factor1D;
    use crate::fourier::FourierPoly;
    use crate::geometry::Chirality;
    use crate::scalar::{Exact, q_ratio};
    use crate::spline::unit_bump;

    fn bulk_bump(geom: &Geometry, shift: i64) -> Form<Exact> {
        // f(tau) bump as a dtau one-form on the bulk
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let factors: Vec<Factor1D<Exact>> = spec
            .dirs
            .iter()
            .enumerate()
            .map(|(i, d)| match &d.domain {
                AxisDesc::Line { lo, hi, .. } => {
                    let (a, b) = match (lo, hi) {
                        (Some(l), Some(h)) => {
                            let third = (h - l) / q_i64(4);
                            (l + &third, h - &third)
                        }
                        (Some(l), None) => (l + q_ratio(1, 4), l + q_i64(2)),
                        _ => (q_i64(-1 - i as i64), q_i64(1 + i as i64)),
                    };
                    Factor1D::Spline(unit_bump(&a, &b))
                }
                AxisDesc::Circle { .. } => Factor1D::Fourier(FourierPoly::cosine(1)),
            })
            .collect();
        let coeff = CoeffField::tensor(&domains, &factors);
        let mut comps = BTreeMap::new();
        comps.insert(0b001u8, coeff);
        Form::from_components(spec, 1, shift, comps)
    }

    #[test]
    fn d_squares_to_zero() {
        for geom in [
            Geometry::half_space(Chirality::Plus),
            Geometry::cylinder(Chirality::Minus),
        ] {
            let f = bulk_bump(&geom, 1);
            assert!(f.d().d().is_zero());
        }
    }

    #[test]
    fn ghost_differential_carries_the_shift_sign() {
        // on the once-shifted complex a zero-form c maps to -dc
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let coeff = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Spline(unit_bump(&q_ratio(1, 4), &q_i64(1))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0u8, coeff.clone());
        let c1 = Form::from_components(spec.clone(), 0, 1, comps.clone());
        let c0 = Form::from_components(spec, 0, 0, comps);
        let with_shift = c1.d();
        let without = c0.d();
        // same components, opposite sign
        assert!(with_shift.add(&Form {
            shift: 1,
            ..without.clone()
        }).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let a = bulk_bump(&geom, 0);
        let b = {
            // a (0,1)-component one-form in chi
            let spec = geom.space(SpaceId::Bulk);
            let domains = spec.domains();
            let coeff = CoeffField::<Exact>::tensor(
                &domains,
                &[
                    Factor1D::Spline(unit_bump(&q_i64(-2), &q_i64(0))),
                    Factor1D::Fourier(FourierPoly::sine(1)),
                    Factor1D::Spline(unit_bump(&q_ratio(1, 3), &q_ratio(2, 3))),
                ],
            );
            let mut comps = BTreeMap::new();
            comps.insert(0b010u8, coeff);
            Form::from_components(spec, 1, 0, comps)
        };
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        // odd times odd: ab = -ba
        assert!(ab.add(&ba).unwrap().is_zero());
        // odd square vanishes
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule_exact() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let a = bulk_bump(&geom, 0);
        let b = bulk_bump(&geom, 0);
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = a.d().wedge(&b).unwrap().add(
            &a.wedge(&b.d()).unwrap().neg(), // (-1)^{|a|_dR} with |a|_dR = 1
        ).unwrap();
        assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn boundary_restriction_commutes_with_d() {
        for geom in [
            Geometry::half_space(Chirality::Minus),
            Geometry::cylinder(Chirality::Plus),
        ] {
            let f = bulk_bump(&geom, 1);
            let lhs = boundary_restrict(&geom, &f.d()).unwrap();
            let rhs = boundary_restrict(&geom, &f).unwrap().d();
            assert!(lhs.sub(&rhs).unwrap().is_zero());
        }
    }

    #[test]
    fn restriction_drops_radial_legs() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let coeff = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Fourier(FourierPoly::constant(Exact::one())),
                Factor1D::Spline(unit_bump(&q_ratio(1, 3), &q_ratio(2, 3))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b100u8, coeff); // dr leg
        let f = Form::from_components(spec, 1, 1, comps);
        assert!(boundary_restrict(&geom, &f).unwrap().is_zero());
    }

    #[test]
    fn hodge_star_matches_the_minkowski_table() {
        // dt = (dtau + du)/2 maps to -dx = (-dtau + du)/2 at chirality +
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Boundary);
        let domains = spec.domains();
        let half = CoeffField::<Exact>::constant_on(&domains, Cx::from_q(&q_ratio(1, 2)));
        let mut comps = BTreeMap::new();
        comps.insert(0b01u8, half.clone());
        comps.insert(0b10u8, half);
        let dt = Form::from_components(spec.clone(), 1, 1, comps);
        let star = hodge_star_boundary(&geom, &dt).unwrap();
        let mut expect_comps = BTreeMap::new();
        expect_comps.insert(
            0b01u8,
            CoeffField::<Exact>::constant_on(&domains, Cx::from_q(&q_ratio(-1, 2))),
        );
        expect_comps.insert(
            0b10u8,
            CoeffField::<Exact>::constant_on(&domains, Cx::from_q(&q_ratio(1, 2))),
        );
        let expect = Form::from_components(spec, 1, 1, expect_comps);
        assert!(star.sub(&expect).unwrap().is_zero());
    }

    #[test]
    fn coframe_is_self_dual_and_flow_invariant() {
        for geom in [
            Geometry::half_space(Chirality::Plus),
            Geometry::half_space(Chirality::Minus),
            Geometry::cylinder(Chirality::Plus),
            Geometry::cylinder(Chirality::Minus),
        ] {
            let beta: Form<Exact> = invariant_chiral_coframe(&geom);
            let star = hodge_star_boundary(&geom, &beta).unwrap();
            let eps = geom.epsilon();
            let expect = beta.scale_q(&q_i64(eps));
            assert!(star.sub(&expect).unwrap().is_zero());
            let translated = beta.translate_tau(&q_ratio(7, 5)).unwrap();
            assert!(translated.sub(&beta).unwrap().is_zero());
        }
    }

    #[test]
    fn projectors_are_complete_and_orthogonal() {
        let geom = Geometry::half_space(Chirality::Plus);
        let spec = geom.space(SpaceId::Boundary);
        let domains = spec.domains();
        let f1 = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(2))),
                Factor1D::Spline(unit_bump(&q_i64(-1), &q_i64(1))),
            ],
        );
        let mut comps = BTreeMap::new();
        comps.insert(0b01u8, f1.clone());
        comps.insert(0b10u8, f1.scale(&Cx::from_q(&q_ratio(3, 7))));
        let alpha = Form::from_components(spec, 1, 1, comps);
        let (sd, asd) = sd_projectors(&geom, &alpha).unwrap();
        assert!(sd.add(&asd).unwrap().sub(&alpha).unwrap().is_zero());
        // each part is an exact eigenvector
        let star_sd = hodge_star_boundary(&geom, &sd).unwrap();
        assert!(star_sd.sub(&sd).unwrap().is_zero());
        let star_asd = hodge_star_boundary(&geom, &asd).unwrap();
        assert!(star_asd.add(&asd).unwrap().is_zero());
    }

    #[test]
    fn top_degree_differential_vanishes() {
        let geom = Geometry::half_space(Chirality::Plus);
        let f = bulk_bump(&geom, 1);
        let top = f.wedge(&bulk_bump(&geom, 0).d()).unwrap().d();
        assert!(top.is_zero());
    }
}
