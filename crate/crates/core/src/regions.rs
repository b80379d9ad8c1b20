//! Box-union regions in adapted coordinates and the orbit-category predicates.
//!
//! Regions are finite unions of open coordinate boxes (arcs on circle
//! directions). Because the flow is a `tau`-translation in adapted
//! coordinates, future/past sets, convexity, disjointness and the Cauchy
//! predicate are exact interval computations. Point-set comparisons are
//! decided by sampling one rational witness in every atomic piece of the
//! common breakpoint refinement, which is complete for unions of open boxes.

use crate::coeff::AxisDesc;
use crate::forms::{AxisSupport, SupportBox};
use crate::geometry::{Geometry, SpaceId, SpaceSpec};
use crate::scalar::{Q, q_i64, q_ratio};
use num_traits::Zero;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum RegionError {
    #[error("regions live on different spaces")]
    SpaceMismatch,
    #[error("not an inclusion: the smaller region is not contained in the larger")]
    NotIncluded,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Open extent along one axis.
#[derive(Clone, PartialEq, Debug)]
pub enum AxisExtent {
    /// Open interval clipped to the axis domain; `None` = unbounded side.
    Interval { lo: Option<Q>, hi: Option<Q> },
    /// Open arc on the unit circle: `lo` in `[0,1)`, `lo < hi <= lo + 1`;
    /// length one means the full circle.
    Arc { lo: Q, hi: Q },
}

pub type BoxExtent = Vec<AxisExtent>;

#[derive(Clone, PartialEq, Debug)]
pub struct Region {
    pub spec: SpaceSpec,
    pub boxes: Vec<BoxExtent>,
}

fn q_min(a: Option<&Q>, b: Option<&Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        _ => None,
    }
}

fn q_max(a: Option<&Q>, b: Option<&Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y).clone()),
        _ => None,
    }
}

fn interval_nonempty(lo: &Option<Q>, hi: &Option<Q>) -> bool {
    match (lo, hi) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    }
}

impl AxisExtent {
    fn full(domain: &AxisDesc) -> AxisExtent {
        match domain {
            AxisDesc::Line { lo, hi, .. } => AxisExtent::Interval { lo: lo.clone(), hi: hi.clone() },
            AxisDesc::Circle { .. } => AxisExtent::Arc { lo: Q::zero(), hi: q_i64(1) },
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            AxisExtent::Interval { lo, hi } => !interval_nonempty(lo, hi),
            AxisExtent::Arc { lo, hi } => hi <= lo,
        }
    }

    fn is_full_circle(&self) -> bool {
        matches!(self, AxisExtent::Arc { lo, hi } if hi - lo >= q_i64(1))
    }

    fn contains(&self, x: &Q) -> bool {
        match self {
            AxisExtent::Interval { lo, hi } => {
                lo.as_ref().map_or(true, |l| x > l) && hi.as_ref().map_or(true, |h| x < h)
            }
            AxisExtent::Arc { lo, hi } => {
                if self.is_full_circle() {
                    return true;
                }
                let x = crate::geometry::wrap_unit(x);
                // lift into [lo, lo+1)
                let lifted = if &x <= lo { &x + q_i64(1) } else { x.clone() };
                (&lifted > lo && &lifted < hi) || (&x > lo && &x < hi)
            }
        }
    }

    /// Intersection; arcs may split into two pieces.
    fn intersect(&self, other: &AxisExtent) -> Vec<AxisExtent> {
        match (self, other) {
            (AxisExtent::Interval { lo: a, hi: b }, AxisExtent::Interval { lo: c, hi: d }) => {
                let lo = q_max(a.as_ref(), c.as_ref()).or_else(|| a.clone().or_else(|| c.clone()));
                let hi = q_min(b.as_ref(), d.as_ref()).or_else(|| b.clone().or_else(|| d.clone()));
                let ext = AxisExtent::Interval { lo, hi };
                if ext.is_empty() { vec![] } else { vec![ext] }
            }
            (AxisExtent::Arc { .. }, AxisExtent::Arc { .. }) => {
                if self.is_full_circle() {
                    return vec![other.clone()];
                }
                if other.is_full_circle() {
                    return vec![self.clone()];
                }
                let (a, b) = match self {
                    AxisExtent::Arc { lo, hi } => (lo.clone(), hi.clone()),
                    _ => unreachable!(),
                };
                let (c, d) = match other {
                    AxisExtent::Arc { lo, hi } => (lo.clone(), hi.clone()),
                    _ => unreachable!(),
                };
                // compare on the double cover: shift the second arc by -1, 0, +1
                let mut out = Vec::new();
                for k in [-1i64, 0, 1] {
                    let c2 = &c + q_i64(k);
                    let d2 = &d + q_i64(k);
                    let lo = a.clone().max(c2);
                    let hi = b.clone().min(d2);
                    if lo < hi {
                        // normalize start into [0,1)
                        let w = crate::geometry::wrap_unit(&lo);
                        let len = &hi - &lo;
                        out.push(AxisExtent::Arc { lo: w.clone(), hi: w + len });
                    }
                }
                out
            }
            _ => panic!("axis kind mismatch"),
        }
    }
}

impl Region {
    pub fn new(spec: SpaceSpec, boxes: Vec<BoxExtent>) -> Region {
        let mut r = Region { spec, boxes };
        r.normalize();
        r
    }

    pub fn whole_space(spec: SpaceSpec) -> Region {
        let full: BoxExtent = spec.dirs.iter().map(|d| AxisExtent::full(&d.domain)).collect();
        Region::new(spec, vec![full])
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Clip to the domain, drop empty boxes, absorb contained boxes, merge
    /// boxes whose union is again a box, canonicalize full arcs.
    pub fn normalize(&mut self) {
        let domains: Vec<AxisDesc> = self.spec.domains();
        for b in self.boxes.iter_mut() {
            for (ext, dom) in b.iter_mut().zip(domains.iter()) {
                match (ext, dom) {
                    (AxisExtent::Interval { lo, hi }, AxisDesc::Line { lo: dlo, hi: dhi, .. }) => {
                        *lo = q_max(lo.as_ref(), dlo.as_ref()).or_else(|| lo.clone().or_else(|| dlo.clone()));
                        *hi = q_min(hi.as_ref(), dhi.as_ref()).or_else(|| hi.clone().or_else(|| dhi.clone()));
                    }
                    (AxisExtent::Arc { lo, hi }, AxisDesc::Circle { .. }) => {
                        if &*hi - &*lo >= q_i64(1) {
                            *lo = Q::zero();
                            *hi = q_i64(1);
                        } else {
                            let w = crate::geometry::wrap_unit(lo);
                            let len = &*hi - &*lo;
                            *lo = w.clone();
                            *hi = w + len;
                        }
                    }
                    _ => panic!("axis kind mismatch in region"),
                }
            }
        }
        self.boxes.retain(|b| !b.iter().any(|e| e.is_empty()));
        // absorb & merge until stable
        loop {
            let mut changed = false;
            'outer: for i in 0..self.boxes.len() {
                for j in 0..self.boxes.len() {
                    if i == j {
                        continue;
                    }
                    if box_subset(&self.boxes[i], &self.boxes[j]) {
                        self.boxes.remove(i);
                        changed = true;
                        break 'outer;
                    }
                    if let Some(merged) = try_merge(&self.boxes[i], &self.boxes[j]) {
                        let (a, b) = if i < j { (j, i) } else { (i, j) };
                        self.boxes.remove(a);
                        self.boxes.remove(b);
                        self.boxes.push(merged);
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.boxes.sort_by_key(|b| format!("{b:?}"));
    }

    pub fn contains_point(&self, p: &[Q]) -> bool {
        self.boxes
            .iter()
            .any(|b| b.iter().zip(p.iter()).all(|(e, x)| e.contains(x)))
    }

    pub fn intersect(&self, other: &Region) -> Result<Region, RegionError> {
        if self.spec != other.spec {
            return Err(RegionError::SpaceMismatch);
        }
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                let mut partial: Vec<BoxExtent> = vec![vec![]];
                let mut dead = false;
                for (ea, eb) in a.iter().zip(b.iter()) {
                    let pieces = ea.intersect(eb);
                    if pieces.is_empty() {
                        dead = true;
                        break;
                    }
                    let mut next = Vec::new();
                    for stem in &partial {
                        for p in &pieces {
                            let mut s = stem.clone();
                            s.push(p.clone());
                            next.push(s);
                        }
                    }
                    partial = next;
                }
                if !dead {
                    boxes.extend(partial);
                }
            }
        }
        Ok(Region::new(self.spec.clone(), boxes))
    }

    pub fn union(&self, other: &Region) -> Result<Region, RegionError> {
        if self.spec != other.spec {
            return Err(RegionError::SpaceMismatch);
        }
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.clone());
        Ok(Region::new(self.spec.clone(), boxes))
    }

    /// Sample coordinates hitting every atomic piece of the refinement of the
    /// listed regions along `axis`.
    fn probe_coords(regions: &[&Region], axis: usize) -> Vec<Q> {
        let domain = &regions[0].spec.dirs[axis].domain;
        let mut brk: Vec<Q> = Vec::new();
        for r in regions {
            for b in &r.boxes {
                match &b[axis] {
                    AxisExtent::Interval { lo, hi } => {
                        if let Some(l) = lo {
                            brk.push(l.clone());
                        }
                        if let Some(h) = hi {
                            brk.push(h.clone());
                        }
                    }
                    AxisExtent::Arc { lo, hi } => {
                        brk.push(crate::geometry::wrap_unit(lo));
                        brk.push(crate::geometry::wrap_unit(hi));
                    }
                }
            }
        }
        match domain {
            AxisDesc::Line { lo, hi, .. } => {
                if let Some(l) = lo {
                    brk.push(l.clone());
                }
                if let Some(h) = hi {
                    brk.push(h.clone());
                }
            }
            AxisDesc::Circle { .. } => {}
        }
        brk.sort();
        brk.dedup();
        let mut pts = Vec::new();
        if brk.is_empty() {
            pts.push(q_ratio(1, 3));
            return pts;
        }
        match domain {
            AxisDesc::Line { .. } => {
                pts.push(&brk[0] - q_i64(1));
                for i in 0..brk.len() {
                    pts.push(brk[i].clone());
                    if i + 1 < brk.len() {
                        pts.push((&brk[i] + &brk[i + 1]) / q_i64(2));
                    }
                }
                pts.push(brk.last().unwrap() + q_i64(1));
            }
            AxisDesc::Circle { .. } => {
                for i in 0..brk.len() {
                    pts.push(brk[i].clone());
                    let next = if i + 1 < brk.len() {
                        brk[i + 1].clone()
                    } else {
                        &brk[0] + q_i64(1)
                    };
                    pts.push(crate::geometry::wrap_unit(&((&brk[i] + next) / q_i64(2))));
                }
            }
        }
        pts
    }

    fn probe_points(regions: &[&Region]) -> Vec<Vec<Q>> {
        let dim = regions[0].spec.dim();
        let mut pts: Vec<Vec<Q>> = vec![vec![]];
        for axis in 0..dim {
            let coords = Region::probe_coords(regions, axis);
            let mut next = Vec::new();
            for stem in &pts {
                for c in &coords {
                    let mut s = stem.clone();
                    s.push(c.clone());
                    next.push(s);
                }
            }
            pts = next;
        }
        pts
    }

    /// Exact point-set inclusion.
    pub fn subset(&self, other: &Region) -> Result<bool, RegionError> {
        if self.spec != other.spec {
            return Err(RegionError::SpaceMismatch);
        }
        for p in Region::probe_points(&[self, other]) {
            if self.contains_point(&p) && !other.contains_point(&p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact point-set equality.
    pub fn same_set(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.subset(other)? && other.subset(self)?)
    }
}

fn box_subset(inner: &BoxExtent, outer: &BoxExtent) -> bool {
    inner.iter().zip(outer.iter()).all(|(a, b)| match (a, b) {
        (AxisExtent::Interval { lo: a1, hi: b1 }, AxisExtent::Interval { lo: a2, hi: b2 }) => {
            let lo_ok = match (a1, a2) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x >= y,
            };
            let hi_ok = match (b1, b2) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x <= y,
            };
            lo_ok && hi_ok
        }
        (AxisExtent::Arc { .. }, b2 @ AxisExtent::Arc { .. }) => {
            if b2.is_full_circle() {
                return true;
            }
            if a.is_full_circle() {
                return false;
            }
            let (a1, b1) = match a {
                AxisExtent::Arc { lo, hi } => (lo, hi),
                _ => unreachable!(),
            };
            let (a2c, b2c) = match b2 {
                AxisExtent::Arc { lo, hi } => (lo, hi),
                _ => unreachable!(),
            };
            for k in [-1i64, 0, 1] {
                let lo2 = a2c + q_i64(k);
                let hi2 = b2c + q_i64(k);
                if *a1 >= lo2 && *b1 <= hi2 {
                    return true;
                }
            }
            false
        }
        _ => false,
    })
}

/// Union of two boxes is a box when they agree on all axes but one and the
/// exceptional open intervals strictly overlap.
fn try_merge(a: &BoxExtent, b: &BoxExtent) -> Option<BoxExtent> {
    let mut diff_axis = None;
    for (i, (ea, eb)) in a.iter().zip(b.iter()).enumerate() {
        if ea != eb {
            if diff_axis.is_some() {
                return None;
            }
            diff_axis = Some(i);
        }
    }
    let i = diff_axis?;
    match (&a[i], &b[i]) {
        (AxisExtent::Interval { lo: a1, hi: b1 }, AxisExtent::Interval { lo: a2, hi: b2 }) => {
            // strict overlap so no wall is missed
            let overlap = match (b1, a2) {
                (None, _) | (_, None) => true,
                (Some(x), Some(y)) => y < x,
            } && match (b2, a1) {
                (None, _) | (_, None) => true,
                (Some(x), Some(y)) => y < x,
            };
            if !overlap {
                return None;
            }
            let lo = match (a1, a2) {
                (None, _) | (_, None) => None,
                (Some(x), Some(y)) => Some(x.min(y).clone()),
            };
            let hi = match (b1, b2) {
                (None, _) | (_, None) => None,
                (Some(x), Some(y)) => Some(x.max(y).clone()),
            };
            let mut merged = a.clone();
            merged[i] = AxisExtent::Interval { lo, hi };
            Some(merged)
        }
        (AxisExtent::Arc { lo: a1, hi: b1 }, AxisExtent::Arc { lo: a2, hi: b2 }) => {
            for k in [-1i64, 0, 1] {
                let lo2 = a2 + q_i64(k);
                let hi2 = b2 + q_i64(k);
                if lo2 < *b1 && *a1 < hi2 {
                    let lo = a1.clone().min(lo2);
                    let hi = b1.clone().max(hi2);
                    let mut merged = a.clone();
                    merged[i] = if &hi - &lo >= q_i64(1) {
                        AxisExtent::Arc { lo: Q::zero(), hi: q_i64(1) }
                    } else {
                        let w = crate::geometry::wrap_unit(&lo);
                        let len = &hi - &lo;
                        AxisExtent::Arc { lo: w.clone(), hi: w + len }
                    };
                    return Some(merged);
                }
            }
            None
        }
        _ => None,
    }
}

/// Future and past of a region under the tau-translation flow.
pub fn j_sets(region: &Region) -> (Region, Region) {
    let tau = region
        .spec
        .tau_axis()
        .expect("future/past sets need a flow direction");
    let mut up = region.clone();
    let mut down = region.clone();
    for b in up.boxes.iter_mut() {
        if let AxisExtent::Interval { hi, .. } = &mut b[tau] {
            *hi = None;
        }
    }
    for b in down.boxes.iter_mut() {
        if let AxisExtent::Interval { lo, .. } = &mut b[tau] {
            *lo = None;
        }
    }
    up.normalize();
    down.normalize();
    (up, down)
}

/// Future/past of a closed support box, at the representation level.
pub fn j_of_support(spec: &SpaceSpec, support: &SupportBox, up: bool) -> SupportBox {
    let tau = spec.tau_axis().expect("flow direction required");
    let mut out = support.clone();
    if let AxisSupport::Interval { lo, hi } = &mut out[tau] {
        if up {
            *hi = None;
        } else {
            *lo = None;
        }
    }
    out
}

/// Convexity under the flow: the orbit of no point exits and re-enters.
pub fn is_convex(region: &Region) -> bool {
    let (up, down) = j_sets(region);
    let inter = up.intersect(&down).expect("same space");
    inter.subset(region).expect("same space")
}

/// Flow-disjointness: the orbit of the first region misses the second.
pub fn is_disjoint(r1: &Region, r2: &Region) -> Result<bool, RegionError> {
    if r1.spec != r2.spec {
        return Err(RegionError::SpaceMismatch);
    }
    if r1.spec.tau_axis().is_some() {
        let (up, down) = j_sets(r1);
        let orbit = up.union(&down)?;
        Ok(orbit.intersect(r2)?.is_empty())
    } else {
        // base spaces: plain disjointness
        Ok(r1.intersect(r2)?.is_empty())
    }
}

/// Base projection (the image functor of the localization adjunction).
pub fn base_projection(geom: &Geometry, region: &Region) -> Region {
    let tau = region.spec.tau_axis().expect("projection needs the flow direction");
    let target = match region.spec.space {
        SpaceId::Bulk => geom.space(SpaceId::Base),
        SpaceId::Boundary => geom.space(SpaceId::BaseBoundary),
        _ => panic!("projection from a base space"),
    };
    let boxes = region
        .boxes
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .filter(|(i, _)| *i != tau)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    Region::new(target, boxes)
}

/// Preimage of a base region (the reflector of the localization adjunction):
/// the full-orbit cylinder over it.
pub fn preimage(geom: &Geometry, region: &Region) -> Region {
    let target = match region.spec.space {
        SpaceId::Base => geom.space(SpaceId::Bulk),
        SpaceId::BaseBoundary => geom.space(SpaceId::Boundary),
        _ => panic!("preimage of a non-base region"),
    };
    let boxes = region
        .boxes
        .iter()
        .map(|b| {
            let mut v: BoxExtent = vec![AxisExtent::Interval { lo: None, hi: None }];
            v.extend(b.iter().cloned());
            v
        })
        .collect();
    Region::new(target, boxes)
}

/// Cauchy predicate for an inclusion: base projections coincide.
pub fn is_cauchy(geom: &Geometry, u: &Region, uprime: &Region) -> Result<bool, RegionError> {
    if u.spec != uprime.spec {
        return Err(RegionError::SpaceMismatch);
    }
    if !u.subset(uprime)? {
        return Err(RegionError::NotIncluded);
    }
    if !is_convex(u) || !is_convex(uprime) {
        return Err(RegionError::Precondition("both regions must be flow-convex".into()));
    }
    base_projection(geom, u).same_set(&base_projection(geom, uprime))
}

/// Closed support box contained in the open region, decided exactly on the
/// common refinement.
pub fn region_contains_support(region: &Region, support: &SupportBox) -> bool {
    let dim = region.spec.dim();
    let mut samples: Vec<Vec<Q>> = vec![vec![]];
    for axis in 0..dim {
        let coords: Vec<Q> = match &support[axis] {
            AxisSupport::CircleFull => {
                let mut c = Region::probe_coords(&[region], axis);
                c.push(Q::zero());
                c
            }
            AxisSupport::Interval { lo, hi } => {
                let (lo, hi) = match (lo, hi) {
                    (Some(l), Some(h)) => (l.clone(), h.clone()),
                    // unbounded support can never sit inside a finite box list,
                    // except when the region is unbounded there; probe wide
                    (l, h) => {
                        let brk = Region::probe_coords(&[region], axis);
                        let wide_lo = l.clone().unwrap_or_else(|| {
                            brk.iter().min().cloned().unwrap_or_else(Q::zero) - q_i64(10)
                        });
                        let wide_hi = h.clone().unwrap_or_else(|| {
                            brk.iter().max().cloned().unwrap_or_else(Q::zero) + q_i64(10)
                        });
                        (wide_lo, wide_hi)
                    }
                };
                let mut brk: Vec<Q> = Region::probe_coords(&[region], axis)
                    .into_iter()
                    .filter(|x| *x > lo && *x < hi)
                    .collect();
                brk.push(lo.clone());
                brk.push(hi.clone());
                brk.sort();
                brk.dedup();
                let mut out = Vec::new();
                for i in 0..brk.len() {
                    out.push(brk[i].clone());
                    if i + 1 < brk.len() {
                        out.push((&brk[i] + &brk[i + 1]) / q_i64(2));
                    }
                }
                out
            }
        };
        let mut next = Vec::new();
        for stem in &samples {
            for c in &coords {
                let mut s = stem.clone();
                s.push(c.clone());
                next.push(s);
            }
        }
        samples = next;
    }
    // unbounded-support sanity: if the support is unbounded along a line axis
    // the region must be unbounded there too; the wide probes above cover the
    // practical cases, and the box test below is authoritative for them.
    samples.iter().all(|p| region.contains_point(p))
}

/// Support box inside a support box (closed interval containment).
pub fn support_box_subset(inner: &SupportBox, outer: &SupportBox) -> bool {
    inner.iter().zip(outer.iter()).all(|(a, b)| match (a, b) {
        (AxisSupport::CircleFull, AxisSupport::CircleFull) => true,
        (
            AxisSupport::Interval { lo: a1, hi: b1 },
            AxisSupport::Interval { lo: a2, hi: b2 },
        ) => {
            let lo_ok = match (a1, a2) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x >= y,
            };
            let hi_ok = match (b1, b2) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x <= y,
            };
            lo_ok && hi_ok
        }
        _ => false,
    })
}

/// Open-region inclusion used by extension by zero.
pub fn region_subset(a: &Region, b: &Region) -> bool {
    a.subset(b).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chirality;

    fn bulk_box(geom: &Geometry, tau: (i64, i64), p: (i64, i64), r: (&Q, &Q)) -> Region {
        let spec = geom.space(SpaceId::Bulk);
        let pext = match &spec.dirs[1].domain {
            AxisDesc::Circle { .. } => AxisExtent::Arc {
                lo: q_ratio(p.0, 8),
                hi: q_ratio(p.1, 8),
            },
            AxisDesc::Line { .. } => AxisExtent::Interval {
                lo: Some(q_i64(p.0)),
                hi: Some(q_i64(p.1)),
            },
        };
        Region::new(
            spec,
            vec![vec![
                AxisExtent::Interval { lo: Some(q_i64(tau.0)), hi: Some(q_i64(tau.1)) },
                pext,
                AxisExtent::Interval { lo: Some(r.0.clone()), hi: Some(r.1.clone()) },
            ]],
        )
    }

    #[test]
    fn j_sets_extend_tau() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let r = bulk_box(&geom, (0, 1), (0, 2), (&q_ratio(1, 2), &q_i64(1)));
        let (up, down) = j_sets(&r);
        assert!(matches!(
            &up.boxes[0][0],
            AxisExtent::Interval { lo: Some(l), hi: None } if *l == q_i64(0)
        ));
        assert!(matches!(
            &down.boxes[0][0],
            AxisExtent::Interval { lo: None, hi: Some(h) } if *h == q_i64(1)
        ));
    }

    #[test]
    fn single_box_is_convex_stacked_gap_is_not() {
        let geom = Geometry::half_space(Chirality::Plus);
        let a = bulk_box(&geom, (0, 1), (0, 1), (&q_i64(0), &q_i64(1)));
        assert!(is_convex(&a));
        let b = bulk_box(&geom, (2, 3), (0, 1), (&q_i64(0), &q_i64(1)));
        let stacked = a.union(&b).unwrap();
        assert!(!is_convex(&stacked));
        // touching open intervals also leave the wall outside
        let c = bulk_box(&geom, (1, 2), (0, 1), (&q_i64(0), &q_i64(1)));
        let touching = a.union(&c).unwrap();
        assert!(!is_convex(&touching));
        // genuine overlap merges into one interval
        let d = bulk_box(&geom, (0, 3), (0, 1), (&q_i64(0), &q_i64(1)));
        let overlapping = a.union(&d).unwrap();
        assert!(is_convex(&overlapping));
    }

    #[test]
    fn disjointness_is_base_disjointness() {
        let geom = Geometry::half_space(Chirality::Plus);
        let a = bulk_box(&geom, (0, 1), (0, 1), (&q_i64(0), &q_i64(1)));
        // same base cell, different tau: orbit still meets it
        let b = bulk_box(&geom, (5, 6), (0, 1), (&q_i64(0), &q_i64(1)));
        assert!(!is_disjoint(&a, &b).unwrap());
        // disjoint base interval
        let c = bulk_box(&geom, (0, 1), (2, 3), (&q_i64(0), &q_i64(1)));
        assert!(is_disjoint(&a, &c).unwrap());
    }

    #[test]
    fn cauchy_detects_base_projection_equality() {
        let geom = Geometry::cylinder(Chirality::Minus);
        let big = bulk_box(&geom, (-10, 10), (0, 8), (&q_ratio(1, 2), &q_i64(1)));
        let slab = bulk_box(&geom, (0, 1), (0, 8), (&q_ratio(1, 2), &q_i64(1)));
        assert!(is_cauchy(&geom, &slab, &big).unwrap());
        let half = bulk_box(&geom, (0, 1), (0, 4), (&q_ratio(1, 2), &q_i64(1)));
        assert!(!is_cauchy(&geom, &half, &big).unwrap());
        // non-inclusion errors
        let outside = bulk_box(&geom, (20, 21), (0, 8), (&q_ratio(1, 2), &q_i64(1)));
        assert_eq!(
            is_cauchy(&geom, &outside, &slab),
            Err(RegionError::NotIncluded)
        );
    }

    #[test]
    fn localization_unit_and_counit() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let u = bulk_box(&geom, (0, 2), (1, 5), (&q_ratio(1, 3), &q_ratio(2, 3)));
        let v = base_projection(&geom, &u);
        let back = preimage(&geom, &v);
        // unit: U subset of preimage(image(U))
        assert!(u.subset(&back).unwrap());
        // counit: image(preimage(V)) = V
        assert!(base_projection(&geom, &back).same_set(&v).unwrap());
        // preimages are always convex
        assert!(is_convex(&back));
    }

    #[test]
    fn arc_wraparound_intersection() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let spec = geom.space(SpaceId::BaseBoundary);
        let a = Region::new(
            spec.clone(),
            vec![vec![AxisExtent::Arc { lo: q_ratio(3, 4), hi: q_ratio(5, 4) }]],
        );
        let b = Region::new(
            spec,
            vec![vec![AxisExtent::Arc { lo: Q::zero(), hi: q_ratio(1, 2) }]],
        );
        let inter = a.intersect(&b).unwrap();
        assert!(!inter.is_empty());
        assert!(inter.contains_point(&[q_ratio(1, 8)]));
        assert!(!inter.contains_point(&[q_ratio(3, 8)]));
        assert!(!inter.contains_point(&[q_ratio(7, 8)]));
    }
}
