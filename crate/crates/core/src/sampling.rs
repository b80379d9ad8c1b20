//! Deterministic randomized sample streams for the verification suites.
//!
//! Every suite derives its own stream from the master seed and the suite name,
//! so adding or reordering suites never perturbs another suite's samples. All
//! random data is drawn as small rationals and lifted into the active scalar
//! backend, which makes exact-mode reports bit-reproducible and float-mode
//! runs structurally identical to exact ones.

use crate::ccr::GeneratorSet;
use crate::coeff::{AxisDesc, CoeffField, Factor1D};
use crate::forms::Form;
use crate::fourier::FourierPoly;
use crate::geometry::{Geometry, GeometryKind, SpaceId};
use crate::poisson::{Pairing, PairingKind};
use crate::regions::{AxisExtent, BoxExtent, Region};
use crate::scalar::{Cx, Q, Scalar, q_i64, q_ratio};
use crate::spline::PiecewisePoly;
use crate::spline::unit_bump;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Independent stream for one suite of one run.
    pub fn for_suite(master_seed: u64, suite: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(master_seed.to_le_bytes());
        hasher.update(suite.as_bytes());
        let digest = hasher.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        Sampler { rng: ChaCha8Rng::from_seed(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Random rational with denominator up to 4 in `[lo, hi]`.
    pub fn q(&mut self, lo: i64, hi: i64) -> Q {
        let den = self.rng.gen_range(1..=4i64);
        let num = self.rng.gen_range(lo * den..=hi * den);
        Q::new(num.into(), den.into())
    }

    /// Random nonzero small rational coefficient.
    pub fn coeff_q(&mut self) -> Q {
        loop {
            let c = self.q(-1, 1);
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Random subwindow of positive length inside `(lo, hi)`.
    fn window(&mut self, lo: &Q, hi: &Q) -> (Q, Q) {
        let span = hi - lo;
        let den = q_i64(16);
        let a = self.rng.gen_range(0..6i64);
        let b = self.rng.gen_range((a + 10)..=16i64);
        (
            lo + &span * Q::new(a.into(), 1.into()) / &den,
            lo + &span * Q::new(b.into(), 1.into()) / &den,
        )
    }

    /// Compactly supported random spline: one or two unit bumps with random
    /// rational weights inside the window.
    pub fn spline<S: Scalar>(&mut self, lo: &Q, hi: &Q) -> PiecewisePoly<S> {
        loop {
            let n = if self.rng.gen_bool(0.7) { 1usize } else { 2 };
            let mut out = PiecewisePoly::zero();
            for _ in 0..n {
                let (a, b) = self.window(lo, hi);
                let c = self.coeff_q();
                out = out.add(&unit_bump::<S>(&a, &b).scale(&S::from_q(&c)));
            }
            // two opposite bumps on the same window can cancel exactly
            if !out.is_zero() {
                return out;
            }
        }
    }

    /// Real random Fourier sum with modes up to `kmax` (always nonzero).
    pub fn fourier<S: Scalar>(&mut self, kmax: i64) -> FourierPoly<S> {
        let mut out = FourierPoly::constant(S::from_q(&self.q(-1, 1)));
        for k in 1..=kmax {
            if self.rng.gen_bool(0.7) {
                out = out.add(
                    &FourierPoly::cosine(k).scale(&Cx::real(S::from_q(&self.q(-1, 1)))),
                );
            }
            if self.rng.gen_bool(0.7) {
                out = out.add(
                    &FourierPoly::sine(k).scale(&Cx::real(S::from_q(&self.q(-1, 1)))),
                );
            }
        }
        if out.is_zero() {
            out = out.add(&FourierPoly::constant(S::one()));
        }
        out
    }

    /// Interior sampling window of a line axis: strictly inside bounded
    /// domains, a fixed band for unbounded ones.
    fn axis_window(&mut self, domain: &AxisDesc) -> (Q, Q) {
        match domain {
            AxisDesc::Line { lo: Some(l), hi: Some(h), .. } => {
                let pad = (h - l) / q_i64(8);
                (l + &pad, h - &pad)
            }
            AxisDesc::Line { lo: Some(l), hi: None, .. } => {
                (l + q_ratio(1, 8), l + q_ratio(9, 8))
            }
            AxisDesc::Line { lo: None, hi: Some(h), .. } => {
                (h - q_ratio(9, 8), h - q_ratio(1, 8))
            }
            AxisDesc::Line { lo: None, hi: None, .. } => (q_i64(-1), q_i64(1)),
            AxisDesc::Circle { .. } => (Q::zero(), q_i64(1)),
        }
    }

    /// Random tensor coefficient supported strictly inside the chart.
    pub fn coeff<S: Scalar>(&mut self, domains: &[AxisDesc]) -> CoeffField<S> {
        loop {
            let terms = self.rng.gen_range(1..=2usize);
            let mut out = CoeffField::zero_on(domains);
            for _ in 0..terms {
                let factors: Vec<Factor1D<S>> = domains
                    .iter()
                    .map(|d| match d {
                        AxisDesc::Circle { .. } => Factor1D::Fourier(self.fourier(2)),
                        line => {
                            let (a, b) = self.axis_window(line);
                            Factor1D::Spline(self.spline(&a, &b))
                        }
                    })
                    .collect();
                out = out.add(&CoeffField::tensor(domains, &factors)).expect("layout");
            }
            if !out.is_zero() {
                return out;
            }
        }
    }

    /// Random homogeneous form with interior compact support.
    pub fn form<S: Scalar>(
        &mut self,
        geom: &Geometry,
        space: SpaceId,
        dr: usize,
        shift: i64,
    ) -> Form<S> {
        let spec = geom.space(space);
        let dim = spec.dim();
        let masks: Vec<u8> = (0u8..(1 << dim))
            .filter(|m| m.count_ones() as usize == dr)
            .collect();
        let mut comps = BTreeMap::new();
        // fill a random nonempty subset of the component slots
        let count = self.rng.gen_range(1..=masks.len());
        let mut chosen = masks.clone();
        for _ in 0..(masks.len() - count) {
            let k = self.rng.gen_range(0..chosen.len());
            chosen.remove(k);
        }
        for m in chosen {
            comps.insert(m, self.coeff::<S>(&spec.domains()));
        }
        Form::from_components(spec, dr, shift, comps)
    }

    /// Random linear observable: interior support keeps the boundary
    /// condition vacuous, so every degree is admissible.
    pub fn observable<S: Scalar>(&mut self, geom: &Geometry, dr: usize) -> Form<S> {
        self.form(geom, SpaceId::Bulk, dr, 2)
    }

    /// Spline that is nonzero at `edge` and joins zero C^1-smoothly at
    /// `inner`.
    fn edge_spline<S: Scalar>(&mut self, edge: &Q, inner: &Q) -> PiecewisePoly<S> {
        use crate::poly::Poly1;
        let c = self.coeff_q();
        let span = inner - edge;
        let x = Poly1::from_coeffs(vec![S::zero(), S::one()]);
        let shift = Poly1::constant(S::from_q(inner));
        let lin = x.add(&shift.neg());
        let quad = lin.mul(&lin);
        let scaled = Poly1::from_coeffs(
            quad.coeffs
                .iter()
                .map(|cf| cf.div_q(&(&span * &span)).clone() * S::from_q(&c))
                .collect(),
        );
        if edge < inner {
            PiecewisePoly::new(vec![inner.clone()], vec![scaled, Poly1::zero()])
        } else {
            PiecewisePoly::new(vec![inner.clone()], vec![Poly1::zero(), scaled])
        }
    }

    /// Radial factor touching the chiral boundary with nonzero value there.
    fn radial_touching<S: Scalar>(&mut self, geom: &Geometry) -> PiecewisePoly<S> {
        let (edge, _) = geom.boundary_radial_value();
        let inner = match geom.kind {
            GeometryKind::HalfSpace => &edge + self.q(1, 2),
            GeometryKind::Cylinder => {
                let lo = &geom.inner_radius;
                &edge - (&edge - lo) * q_ratio(3, 4)
            }
        };
        self.edge_spline(&edge, &inner)
    }

    /// Boundary-conditioned bulk sample whose support touches the chiral
    /// boundary: base-leg components may be nonzero there, flow-leg and
    /// ghost data vanish there, antifield legs are free.
    pub fn conditioned_sample<S: Scalar>(&mut self, geom: &Geometry, dr: usize) -> Form<S> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let r_axis = 2usize;
        let mut comps: BTreeMap<u8, CoeffField<S>> = BTreeMap::new();
        let dim = 3usize;
        let masks: Vec<u8> = (0u8..(1 << dim))
            .filter(|m| m.count_ones() as usize == dr)
            .collect();
        for m in masks {
            if self.rng.gen_bool(0.3) {
                continue;
            }
            let touching_allowed = match dr {
                0 => false,                      // ghost values vanish on the boundary
                1 => m & 0b001 == 0,             // no flow leg in the touching part
                _ => true,                       // antifields unrestricted
            };
            let radial: Factor1D<S> = if touching_allowed && self.rng.gen_bool(0.7) {
                Factor1D::Spline(self.radial_touching(geom))
            } else {
                let (a, b) = self.axis_window(&domains[r_axis]);
                Factor1D::Spline(self.spline(&a, &b))
            };
            let factors: Vec<Factor1D<S>> = domains
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    if i == r_axis {
                        radial.clone()
                    } else {
                        match d {
                            AxisDesc::Circle { .. } => Factor1D::Fourier(self.fourier(2)),
                            line => {
                                let (a, b) = self.axis_window(line);
                                Factor1D::Spline(self.spline(&a, &b))
                            }
                        }
                    }
                })
                .collect();
            comps.insert(m, CoeffField::tensor(&domains, &factors));
        }
        if comps.is_empty() {
            return self.conditioned_sample(geom, dr);
        }
        Form::from_components(spec, dr, 2, comps)
    }

    /// Compactly supported member of the boundary condition complex.
    pub fn boundary_condition_sample<S: Scalar>(
        &mut self,
        geom: &Geometry,
        dr: usize,
    ) -> Form<S> {
        let spec = geom.space(SpaceId::Boundary);
        let domains = spec.domains();
        let mut comps = BTreeMap::new();
        match dr {
            1 => {
                comps.insert(0b10u8, self.coeff::<S>(&domains));
            }
            2 => {
                comps.insert(0b11u8, self.coeff::<S>(&domains));
            }
            _ => {}
        }
        Form::from_components(spec, dr, 1, comps)
    }

    /// Random base observable (interior support).
    pub fn base_observable<S: Scalar>(&mut self, geom: &Geometry, dr: usize) -> Form<S> {
        self.form(geom, SpaceId::Base, dr, 1)
    }

    /// Random collar observable: zero-forms vanish at the collar end.
    pub fn tubular_observable<S: Scalar>(&mut self, geom: &Geometry, dr: usize) -> Form<S> {
        self.form(geom, SpaceId::Tubular, dr, 1)
    }

    /// Random chiral boson observable on the base boundary.
    pub fn boson<S: Scalar>(&mut self, geom: &Geometry) -> Form<S> {
        self.form(geom, SpaceId::BaseBoundary, 0, 0)
    }

    fn arc(&mut self) -> AxisExtent {
        let lo = self.q(0, 1).min(q_ratio(7, 8));
        let lo = crate::geometry::wrap_unit(&lo);
        let len = self.q(1, 4) / q_i64(4) + q_ratio(1, 16);
        let len = len.min(q_i64(1));
        AxisExtent::Arc { lo: lo.clone(), hi: lo + len }
    }

    fn interval(&mut self, domain: &AxisDesc) -> AxisExtent {
        let (lo, hi) = self.axis_window(domain);
        let (a, b) = self.window(&lo, &hi);
        AxisExtent::Interval { lo: Some(a), hi: Some(b) }
    }

    /// Random box union in the bulk chart.
    pub fn bulk_region(&mut self, geom: &Geometry, max_boxes: usize) -> Region {
        let spec = geom.space(SpaceId::Bulk);
        let n = self.rng.gen_range(1..=max_boxes);
        let mut boxes: Vec<BoxExtent> = Vec::new();
        for _ in 0..n {
            let b: BoxExtent = spec
                .dirs
                .iter()
                .map(|d| match &d.domain {
                    AxisDesc::Circle { .. } => self.arc(),
                    line => self.interval(line),
                })
                .collect();
            boxes.push(b);
        }
        Region::new(spec, boxes)
    }

    /// Pair of flow-disjoint bulk regions with full flow extent, disjoint
    /// through their radial windows (so coefficient representations can fill
    /// them on both geometries).
    pub fn disjoint_region_pair(&mut self, geom: &Geometry) -> (Region, Region) {
        let spec = geom.space(SpaceId::Bulk);
        let (rlo, rhi) = self.axis_window(&spec.dirs[2].domain);
        let span = &rhi - &rlo;
        let cut1 = &rlo + &span * q_ratio(3, 8);
        let cut2 = &rlo + &span * q_ratio(4, 8);
        let gap = self.q(0, 1) * &span / q_i64(8);
        let full_p = match &spec.dirs[1].domain {
            AxisDesc::Circle { .. } => AxisExtent::Arc { lo: Q::zero(), hi: q_i64(1) },
            AxisDesc::Line { .. } => AxisExtent::Interval { lo: None, hi: None },
        };
        let mk = |lo: Option<Q>, hi: Option<Q>| -> BoxExtent {
            vec![
                AxisExtent::Interval { lo: None, hi: None },
                full_p.clone(),
                AxisExtent::Interval { lo, hi },
            ]
        };
        let r1 = Region::new(spec.clone(), vec![mk(Some(rlo.clone()), Some(cut1.clone()))]);
        let r2 = Region::new(spec, vec![mk(Some(&cut2 + &gap), Some(rhi.clone()))]);
        (r1, r2)
    }

    /// Observable supported inside the radial window of a region (for the
    /// causality suites; the flow/base extent is already full there).
    pub fn observable_in_radial_window<S: Scalar>(
        &mut self,
        geom: &Geometry,
        region: &Region,
        dr: usize,
    ) -> Form<S> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let (rlo, rhi) = match &region.boxes[0][2] {
            AxisExtent::Interval { lo: Some(a), hi: Some(b) } => (a.clone(), b.clone()),
            _ => panic!("radial window must be bounded"),
        };
        let width = &rhi - &rlo;
        let pad = &width / q_i64(8);
        let masks: Vec<u8> = (0u8..8).filter(|m| m.count_ones() as usize == dr).collect();
        let mask = masks[self.rng.gen_range(0..masks.len())];
        let factors: Vec<Factor1D<S>> = domains
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if i == 2 {
                    Factor1D::Spline(self.spline(&(&rlo + &pad), &(&rhi - &pad)))
                } else {
                    match d {
                        AxisDesc::Circle { .. } => Factor1D::Fourier(self.fourier(2)),
                        line => {
                            let (a, b) = self.axis_window(line);
                            Factor1D::Spline(self.spline(&a, &b))
                        }
                    }
                }
            })
            .collect();
        let mut comps = BTreeMap::new();
        comps.insert(mask, CoeffField::tensor(&domains, &factors));
        // normalize by the window width so float magnitudes stay tame when
        // the radial window is narrow
        Form::from_components(spec, dr, 2, comps).scale_q(&width)
    }

    /// The standard mixed-degree d-closed generator window used by the CCR
    /// suites: `pairs` one-form/differential pairs plus `pairs` top forms,
    /// all with overlapping interior supports.
    pub fn standard_window<S: Scalar>(
        &mut self,
        geom: &Geometry,
        pairs: usize,
    ) -> Result<(Pairing, GeneratorSet<S>), crate::ccr::CcrError> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let mut gens: Vec<(String, Form<S>)> = Vec::new();
        for idx in 0..pairs {
            let factors: Vec<Factor1D<S>> = domains
                .iter()
                .map(|d| match d {
                    AxisDesc::Circle { .. } => Factor1D::Fourier(self.fourier(1)),
                    line => {
                        let (a, b) = self.axis_window(line);
                        Factor1D::Spline(self.spline(&a, &b))
                    }
                })
                .collect();
            let c = CoeffField::tensor(&domains, &factors);
            let mut comps = BTreeMap::new();
            comps.insert(0b001u8, c);
            let a = Form::from_components(spec.clone(), 1, 2, comps);
            gens.push((format!("a{idx}"), a.clone()));
            gens.push((format!("da{idx}"), a.d()));
        }
        for idx in 0..pairs {
            let factors: Vec<Factor1D<S>> = domains
                .iter()
                .map(|d| match d {
                    AxisDesc::Circle { .. } => Factor1D::Fourier(self.fourier(1)),
                    line => {
                        let (a, b) = self.axis_window(line);
                        Factor1D::Spline(self.spline(&a, &b))
                    }
                })
                .collect();
            let c = CoeffField::tensor(&domains, &factors);
            let mut comps = BTreeMap::new();
            comps.insert(0b111u8, c);
            gens.push((format!("t{idx}"), Form::from_components(spec.clone(), 3, 2, comps)));
        }
        let pairing = Pairing::new(PairingKind::TauZero, geom.clone());
        let set = GeneratorSet::new(&pairing, gens, 1e-9)?;
        Ok((pairing, set))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{ComplexId, member};
    use crate::scalar::Exact;

    #[test]
    fn streams_are_reproducible_and_suite_independent() {
        let mut s1 = Sampler::for_suite(42, "alpha");
        let mut s2 = Sampler::for_suite(42, "alpha");
        let mut s3 = Sampler::for_suite(42, "beta");
        let a: Vec<i64> = (0..10).map(|_| s1.int(-100, 100)).collect();
        let b: Vec<i64> = (0..10).map(|_| s2.int(-100, 100)).collect();
        let c: Vec<i64> = (0..10).map(|_| s3.int(-100, 100)).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_observables_are_members() {
        for geom in [
            Geometry::half_space(crate::geometry::Chirality::Plus),
            Geometry::cylinder(crate::geometry::Chirality::Minus),
        ] {
            let mut s = Sampler::for_suite(7, "members");
            for dr in 0..=3usize {
                let f: Form<Exact> = s.observable(&geom, dr);
                let rep = member(&geom, &ComplexId::LinearObservables(None), &f, 0.0).unwrap();
                assert!(rep.ok, "degree {dr}: {:?}", rep.reason);
            }
            for dr in 0..=3usize {
                let f: Form<Exact> = s.conditioned_sample(&geom, dr);
                let rep = member(&geom, &ComplexId::LinearObservables(None), &f, 0.0).unwrap();
                assert!(rep.ok, "conditioned degree {dr}: {:?}", rep.reason);
            }
            for dr in 1..=2usize {
                let f: Form<Exact> = s.boundary_condition_sample(&geom, dr);
                let rep = member(&geom, &ComplexId::BoundaryCondition, &f, 0.0).unwrap();
                assert!(rep.ok, "boundary degree {dr}: {:?}", rep.reason);
            }
        }
    }

    #[test]
    fn conditioned_samples_touch_the_boundary() {
        let geom = Geometry::cylinder(crate::geometry::Chirality::Plus);
        let mut s = Sampler::for_suite(11, "touch");
        let mut touched = false;
        for _ in 0..20 {
            let f: Form<Exact> = s.conditioned_sample(&geom, 1);
            let restricted = crate::forms::boundary_restrict(&geom, &f).unwrap();
            if !restricted.is_zero() {
                touched = true;
            }
        }
        assert!(touched, "boundary-touching samples must occur");
    }

    #[test]
    fn disjoint_pairs_really_are_disjoint() {
        let mut s = Sampler::for_suite(3, "disjoint");
        for geom in [
            Geometry::half_space(crate::geometry::Chirality::Plus),
            Geometry::cylinder(crate::geometry::Chirality::Plus),
        ] {
            for _ in 0..10 {
                let (r1, r2) = s.disjoint_region_pair(&geom);
                assert!(crate::regions::is_disjoint(&r1, &r2).unwrap());
                let f: Form<Exact> = s.observable_in_radial_window(&geom, &r1, 2);
                assert!(crate::regions::region_contains_support(&r1, &f.support));
            }
        }
    }

    #[test]
    fn standard_window_has_nontrivial_relations() {
        let mut s = Sampler::for_suite(5, "window");
        let geom = Geometry::cylinder(crate::geometry::Chirality::Plus);
        let (_, set) = s.standard_window::<Exact>(&geom, 2).unwrap();
        assert_eq!(set.len(), 6);
        let nonzero = set
            .pairing
            .iter()
            .flatten()
            .filter(|c| !c.is_zero())
            .count();
        assert!(nonzero > 0);
    }
}
