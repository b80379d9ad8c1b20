//! The two worked product geometries and their chiral boundary structure.
//!
//! Both geometries come with flow-adapted coordinates in which the chosen
//! chiral flow is translation in the first coordinate `tau`:
//!
//! * half-space `R^2 x [0, inf)` with lightcone-adapted chart
//!   `(tau, u, r) = (t + eps x, t - eps x, r)`;
//! * cylinder `R x annulus(r0, 1)` with chart
//!   `(tau, chi, r) = (2t, phi - eps r t, r)`; the annular truncation at the
//!   configurable inner radius `r0` keeps the Fourier-in-chi calculus away
//!   from the polar singularity, and the outer circle `r = 1` carries the
//!   chiral boundary structure.
//!
//! All boundary metric data (flat Minkowski / flat cylinder) is baked in, and
//! every derived structure below is expressed in adapted coordinates where it
//! becomes exact rational data.

use crate::coeff::AxisDesc;
use crate::scalar::{Q, q_i64, q_ratio};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GeometryKind {
    HalfSpace,
    Cylinder,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    /// Flow parameter: `+1` for the self-dual condition, `-1` for anti-self-dual.
    pub fn epsilon(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }
}

/// Null-pointing classification of a boundary tangent vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pointing {
    NE,
    NW,
    SW,
    SE,
    NotNull,
}

impl Pointing {
    pub fn antipode(self) -> Pointing {
        match self {
            Pointing::NE => Pointing::SW,
            Pointing::SW => Pointing::NE,
            Pointing::NW => Pointing::SE,
            Pointing::SE => Pointing::NW,
            Pointing::NotNull => Pointing::NotNull,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceId {
    /// Three-dimensional bulk `M` in adapted coordinates.
    Bulk,
    /// Two-dimensional chiral boundary of `M` (the outer circle boundary for
    /// the cylinder).
    Boundary,
    /// Orbit space `B` of the bulk flow.
    Base,
    /// Boundary of the orbit space.
    BaseBoundary,
    /// Collar chart `(boundary of B) x [0,1)`; the collar coordinate vanishes
    /// on the boundary.
    Tubular,
}

#[derive(Clone, PartialEq, Debug)]
pub struct DirSpec {
    pub name: &'static str,
    pub domain: AxisDesc,
}

/// Chart data of one space: ordered directions and the sign of the fixed
/// orientation relative to the listed coordinate order.
#[derive(Clone, PartialEq, Debug)]
pub struct SpaceSpec {
    pub geometry: GeometrySig,
    pub space: SpaceId,
    pub dirs: Vec<DirSpec>,
    pub orientation_sign: i8,
}

impl SpaceSpec {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn domains(&self) -> Vec<AxisDesc> {
        self.dirs.iter().map(|d| d.domain.clone()).collect()
    }

    /// Index of the flow direction when this space carries the flow.
    pub fn tau_axis(&self) -> Option<usize> {
        match self.space {
            SpaceId::Bulk | SpaceId::Boundary => Some(0),
            _ => None,
        }
    }

    /// Index of the radial / collar direction if present.
    pub fn radial_axis(&self) -> Option<usize> {
        self.dirs.iter().position(|d| d.name == "r" || d.name == "rho")
    }
}

/// Value-comparable identity of a geometry configuration.
#[derive(Clone, PartialEq, Debug)]
pub struct GeometrySig {
    pub kind: GeometryKind,
    pub chirality: Chirality,
    pub inner_radius: Q,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    pub kind: GeometryKind,
    pub chirality: Chirality,
    /// Inner radius of the annular cylinder base; ignored for the half-space.
    pub inner_radius: Q,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate vector")]
    DegenerateVector,
    #[error("degree error: {0}")]
    Degree(String),
    #[error("inner radius must lie strictly between 0 and 1, got {0}")]
    BadInnerRadius(String),
}

impl Geometry {
    pub fn new(kind: GeometryKind, chirality: Chirality, inner_radius: Q) -> Result<Self, GeomError> {
        if kind == GeometryKind::Cylinder
            && (inner_radius <= Q::zero() || inner_radius >= q_i64(1))
        {
            return Err(GeomError::BadInnerRadius(crate::scalar::q_to_string(
                &inner_radius,
            )));
        }
        Ok(Geometry { kind, chirality, inner_radius })
    }

    pub fn half_space(chirality: Chirality) -> Self {
        Geometry::new(GeometryKind::HalfSpace, chirality, q_ratio(1, 4)).unwrap()
    }

    pub fn cylinder(chirality: Chirality) -> Self {
        Geometry::new(GeometryKind::Cylinder, chirality, q_ratio(1, 4)).unwrap()
    }

    pub fn epsilon(&self) -> i64 {
        self.chirality.epsilon()
    }

    pub fn sig(&self) -> GeometrySig {
        GeometrySig {
            kind: self.kind,
            chirality: self.chirality,
            inner_radius: self.inner_radius.clone(),
        }
    }

    fn base_dir(&self) -> DirSpec {
        match self.kind {
            GeometryKind::HalfSpace => DirSpec {
                name: "u",
                domain: AxisDesc::Line { lo: None, hi: None, knots: vec![] },
            },
            GeometryKind::Cylinder => DirSpec {
                name: "chi",
                domain: AxisDesc::Circle { modes: vec![] },
            },
        }
    }

    fn radial_dir(&self) -> DirSpec {
        match self.kind {
            GeometryKind::HalfSpace => DirSpec {
                name: "r",
                domain: AxisDesc::Line { lo: Some(Q::zero()), hi: None, knots: vec![] },
            },
            GeometryKind::Cylinder => DirSpec {
                name: "r",
                domain: AxisDesc::Line {
                    lo: Some(self.inner_radius.clone()),
                    hi: Some(q_i64(1)),
                    knots: vec![],
                },
            },
        }
    }

    fn tau_dir(&self) -> DirSpec {
        DirSpec {
            name: "tau",
            domain: AxisDesc::Line { lo: None, hi: None, knots: vec![] },
        }
    }

    /// Chart of a space. Orientation signs are fixed by the bulk orientations
    /// of the worked examples transported to adapted coordinates, fiber-first
    /// for the quotients, with the collar chart oriented collar-first.
    pub fn space(&self, space: SpaceId) -> SpaceSpec {
        let eps = self.epsilon() as i8;
        let (dirs, orientation_sign) = match (space, self.kind) {
            (SpaceId::Bulk, GeometryKind::HalfSpace) => {
                (vec![self.tau_dir(), self.base_dir(), self.radial_dir()], eps)
            }
            (SpaceId::Bulk, GeometryKind::Cylinder) => {
                (vec![self.tau_dir(), self.base_dir(), self.radial_dir()], 1)
            }
            (SpaceId::Boundary, GeometryKind::HalfSpace) => {
                (vec![self.tau_dir(), self.base_dir()], -eps)
            }
            (SpaceId::Boundary, GeometryKind::Cylinder) => {
                (vec![self.tau_dir(), self.base_dir()], 1)
            }
            (SpaceId::Base, GeometryKind::HalfSpace) => {
                (vec![self.base_dir(), self.radial_dir()], eps)
            }
            (SpaceId::Base, GeometryKind::Cylinder) => {
                (vec![self.base_dir(), self.radial_dir()], 1)
            }
            (SpaceId::BaseBoundary, _) => (vec![self.base_dir()], 1),
            (SpaceId::Tubular, _) => (
                vec![
                    self.base_dir(),
                    DirSpec {
                        name: "rho",
                        domain: AxisDesc::Line {
                            lo: Some(Q::zero()),
                            hi: Some(q_i64(1)),
                            knots: vec![],
                        },
                    },
                ],
                -1,
            ),
        };
        SpaceSpec { geometry: self.sig(), space, dirs, orientation_sign }
    }

    /// Radial value and approach side at which bulk forms restrict to the
    /// chiral boundary.
    pub fn boundary_radial_value(&self) -> (Q, crate::spline::Side) {
        match self.kind {
            GeometryKind::HalfSpace => (Q::zero(), crate::spline::Side::Above),
            GeometryKind::Cylinder => (q_i64(1), crate::spline::Side::Below),
        }
    }

    /// Physical-chart coordinates of an adapted bulk point.
    pub fn adapted_to_physical(&self, p: &[Q; 3]) -> [Q; 3] {
        let eps = q_i64(self.epsilon());
        match self.kind {
            GeometryKind::HalfSpace => {
                let t = (&p[0] + &p[1]) / q_i64(2);
                let x = &eps * (&p[0] - &p[1]) / q_i64(2);
                [t, x, p[2].clone()]
            }
            GeometryKind::Cylinder => {
                let t = &p[0] / q_i64(2);
                let phi = wrap_unit(&(&p[1] + &eps * &p[2] * &p[0] / q_i64(2)));
                [t, phi, p[2].clone()]
            }
        }
    }

    pub fn physical_to_adapted(&self, p: &[Q; 3]) -> [Q; 3] {
        let eps = q_i64(self.epsilon());
        match self.kind {
            GeometryKind::HalfSpace => {
                let tau = &p[0] + &eps * &p[1];
                let u = &p[0] - &eps * &p[1];
                [tau, u, p[2].clone()]
            }
            GeometryKind::Cylinder => {
                let tau = &p[0] * q_i64(2);
                let chi = wrap_unit(&(&p[1] - &eps * &p[2] * &p[0]));
                [tau, chi, p[2].clone()]
            }
        }
    }

    /// The flow in the physical chart, as printed in the worked examples.
    pub fn flow_physical(&self, s: &Q, p: &[Q; 3]) -> [Q; 3] {
        let eps = q_i64(self.epsilon());
        let half_s = s / q_i64(2);
        match self.kind {
            GeometryKind::HalfSpace => {
                [&p[0] + &half_s, &p[1] + &eps * &half_s, p[2].clone()]
            }
            GeometryKind::Cylinder => [
                &p[0] + &half_s,
                wrap_unit(&(&p[1] + &eps * &p[2] * &half_s)),
                p[2].clone(),
            ],
        }
    }

    /// The flow in adapted coordinates: translation of `tau`.
    pub fn flow_adapted(&self, s: &Q, p: &[Q; 3]) -> [Q; 3] {
        let mut q = p.clone();
        q[0] = &q[0] + s;
        if self.kind == GeometryKind::Cylinder {
            q[1] = wrap_unit(&q[1]);
        }
        q
    }

    /// Boundary metric on tangent vectors in adapted coordinates.
    pub fn boundary_metric(&self, v: &[Q; 2], w: &[Q; 2]) -> Q {
        let eps = q_i64(self.epsilon());
        match self.kind {
            // g = -dtau du (symmetrized)
            GeometryKind::HalfSpace => -(&v[0] * &w[1] + &v[1] * &w[0]) / q_i64(2),
            // g = dchi^2 + eps dtau dchi (symmetrized)
            GeometryKind::Cylinder => {
                &v[1] * &w[1] + eps * (&v[0] * &w[1] + &v[1] * &w[0]) / q_i64(2)
            }
        }
    }

    /// Time-orientation field (the physical `d/dt`) in adapted components.
    pub fn time_orientation(&self) -> [Q; 2] {
        match self.kind {
            GeometryKind::HalfSpace => [q_i64(1), q_i64(1)],
            GeometryKind::Cylinder => [q_i64(2), q_i64(-self.epsilon())],
        }
    }

    /// Boundary orientation two-form evaluated on a pair of vectors.
    pub fn boundary_orientation_form(&self, v: &[Q; 2], w: &[Q; 2]) -> Q {
        let det = &v[0] * &w[1] - &v[1] * &w[0];
        match self.kind {
            GeometryKind::HalfSpace => -q_i64(self.epsilon()) * det,
            GeometryKind::Cylinder => det,
        }
    }

    /// Matrix of the boundary Hodge star on one-forms `a dtau + b dp`,
    /// returned as rows `(star dtau, star dp)` in adapted components.
    pub fn boundary_hodge_matrix(&self) -> [[Q; 2]; 2] {
        let eps = q_i64(self.epsilon());
        match self.kind {
            GeometryKind::HalfSpace => [[-eps.clone(), Q::zero()], [Q::zero(), eps]],
            GeometryKind::Cylinder => [[-eps.clone(), q_i64(-2)], [Q::zero(), eps]],
        }
    }
}

/// Reduce a circle coordinate to `[0, 1)`.
pub fn wrap_unit(x: &Q) -> Q {
    let f = x.floor();
    x - f
}

/// Null-pointing classification of a nonzero boundary tangent vector. The
/// point argument is kept for the contract (flat metrics make the answer
/// point-independent).
pub fn classify_pointing(
    geom: &Geometry,
    _point: &[Q; 2],
    v: &[Q; 2],
) -> Result<Pointing, GeomError> {
    if v[0].is_zero() && v[1].is_zero() {
        return Err(GeomError::DegenerateVector);
    }
    if !geom.boundary_metric(v, v).is_zero() {
        return Ok(Pointing::NotNull);
    }
    let t = geom.time_orientation();
    let g = geom.boundary_metric(&t, v);
    let w = geom.boundary_orientation_form(&t, v);
    debug_assert!(!g.is_zero() && !w.is_zero(), "null vector degenerate against frame");
    Ok(match (g < Q::zero(), w > Q::zero()) {
        (true, true) => Pointing::NE,
        (true, false) => Pointing::NW,
        (false, false) => Pointing::SW,
        (false, true) => Pointing::SE,
    })
}
