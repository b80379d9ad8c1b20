//! Bit-exact JSON serialization of forms, regions and generator windows.
//!
//! Rationals travel as `"p/q"` strings, exact scalars as `[pi-power, "p/q"]`
//! term lists, floats as shortest-round-trip JSON numbers. Deserializing a
//! form revalidates it against the geometry's chart for the declared space.

use crate::coeff::{AxisDesc, CellKey, CoeffField};
use crate::forms::Form;
use crate::geometry::{Chirality, Geometry, GeometryKind, SpaceId};
use crate::poly::MPoly;
use crate::regions::{AxisExtent, BoxExtent, Region};
use crate::scalar::{Cx, Q, Scalar, q_from_str, q_to_string};
use serde_json::{Value, json};
use std::collections::BTreeMap;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SerialError {
    #[error("malformed document: {0}")]
    Malformed(String),
}

fn bad(msg: impl Into<String>) -> SerialError {
    SerialError::Malformed(msg.into())
}

pub fn space_tag(space: SpaceId) -> &'static str {
    match space {
        SpaceId::Bulk => "bulk",
        SpaceId::Boundary => "boundary",
        SpaceId::Base => "base",
        SpaceId::BaseBoundary => "base_boundary",
        SpaceId::Tubular => "tubular",
    }
}

pub fn space_from_tag(tag: &str) -> Result<SpaceId, SerialError> {
    Ok(match tag {
        "bulk" => SpaceId::Bulk,
        "boundary" => SpaceId::Boundary,
        "base" => SpaceId::Base,
        "base_boundary" => SpaceId::BaseBoundary,
        "tubular" => SpaceId::Tubular,
        other => return Err(bad(format!("unknown space tag {other:?}"))),
    })
}

pub fn geometry_to_json(geom: &Geometry) -> Value {
    json!({
        "kind": match geom.kind { GeometryKind::HalfSpace => "half_space", GeometryKind::Cylinder => "cylinder" },
        "chirality": match geom.chirality { Chirality::Plus => "+", Chirality::Minus => "-" },
        "inner_radius": q_to_string(&geom.inner_radius),
    })
}

pub fn geometry_from_json(v: &Value) -> Result<Geometry, SerialError> {
    let kind = match v.get("kind").and_then(Value::as_str) {
        Some("half_space") => GeometryKind::HalfSpace,
        Some("cylinder") => GeometryKind::Cylinder,
        other => return Err(bad(format!("unknown geometry kind {other:?}"))),
    };
    let chirality = match v.get("chirality").and_then(Value::as_str) {
        Some("+") => Chirality::Plus,
        Some("-") => Chirality::Minus,
        other => return Err(bad(format!("unknown chirality {other:?}"))),
    };
    let inner_radius = match v.get("inner_radius").and_then(Value::as_str) {
        Some(s) => q_from_str(s).map_err(bad)?,
        None => crate::scalar::q_ratio(1, 4),
    };
    Geometry::new(kind, chirality, inner_radius).map_err(|e| bad(e.to_string()))
}

fn coeff_to_json<S: Scalar>(c: &CoeffField<S>) -> Value {
    let axes: Vec<Value> = c
        .axes
        .iter()
        .map(|a| match a {
            AxisDesc::Line { knots, .. } => json!({
                "knots": knots.iter().map(q_to_string).collect::<Vec<_>>(),
            }),
            AxisDesc::Circle { modes } => json!({ "modes": modes }),
        })
        .collect();
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|(key, poly)| {
            let terms: Vec<Value> = poly
                .terms
                .iter()
                .map(|(e, cx)| {
                    json!({
                        "exps": [e[0], e[1], e[2]],
                        "re": cx.re.to_json(),
                        "im": cx.im.to_json(),
                    })
                })
                .collect();
            json!({ "cell": key, "poly": terms })
        })
        .collect();
    json!({ "axes": axes, "cells": cells })
}

fn coeff_from_json<S: Scalar>(
    domains: &[AxisDesc],
    v: &Value,
) -> Result<CoeffField<S>, SerialError> {
    let axes_json = v
        .get("axes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing axes"))?;
    if axes_json.len() != domains.len() {
        return Err(bad("axis count does not match the chart"));
    }
    let mut axes = Vec::with_capacity(domains.len());
    for (a, d) in axes_json.iter().zip(domains.iter()) {
        match d {
            AxisDesc::Line { lo, hi, .. } => {
                let knots = a
                    .get("knots")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("line axis needs knots"))?
                    .iter()
                    .map(|k| {
                        k.as_str()
                            .ok_or_else(|| bad("knot must be a string"))
                            .and_then(|s| q_from_str(s).map_err(bad))
                    })
                    .collect::<Result<Vec<Q>, _>>()?;
                axes.push(AxisDesc::Line { lo: lo.clone(), hi: hi.clone(), knots });
            }
            AxisDesc::Circle { .. } => {
                let modes = a
                    .get("modes")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("circle axis needs modes"))?
                    .iter()
                    .map(|m| m.as_i64().ok_or_else(|| bad("mode must be an integer")))
                    .collect::<Result<Vec<i64>, _>>()?;
                axes.push(AxisDesc::Circle { modes });
            }
        }
    }
    let mut cells = BTreeMap::new();
    for cell in v
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing cells"))?
    {
        let key: CellKey = cell
            .get("cell")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing cell key"))?
            .iter()
            .map(|k| k.as_u64().map(|x| x as u16).ok_or_else(|| bad("bad cell index")))
            .collect::<Result<_, _>>()?;
        let mut poly = MPoly::zero();
        for term in cell
            .get("poly")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing poly"))?
        {
            let exps = term
                .get("exps")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 3)
                .ok_or_else(|| bad("bad exps"))?;
            let e = [
                exps[0].as_u64().ok_or_else(|| bad("bad exp"))? as u8,
                exps[1].as_u64().ok_or_else(|| bad("bad exp"))? as u8,
                exps[2].as_u64().ok_or_else(|| bad("bad exp"))? as u8,
            ];
            let re = S::from_json(term.get("re").ok_or_else(|| bad("missing re"))?)
                .map_err(bad)?;
            let im = S::from_json(term.get("im").ok_or_else(|| bad("missing im"))?)
                .map_err(bad)?;
            poly.terms.insert(e, Cx::new(re, im));
        }
        cells.insert(key, poly);
    }
    Ok(CoeffField { axes, cells })
}

pub fn form_to_json<S: Scalar>(form: &Form<S>) -> Value {
    let comps: Vec<Value> = form
        .comps
        .iter()
        .map(|(mask, c)| {
            let index: Vec<&str> = form
                .spec
                .dirs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, d)| d.name)
                .collect();
            json!({ "index": index, "coeff": coeff_to_json(c) })
        })
        .collect();
    json!({
        "space": space_tag(form.spec.space),
        "geometry": geometry_to_json(&Geometry::new(
            form.spec.geometry.kind,
            form.spec.geometry.chirality,
            form.spec.geometry.inner_radius.clone(),
        ).expect("valid geometry")),
        "dr_degree": form.dr_degree,
        "shift": form.shift,
        "components": comps,
    })
}

pub fn form_from_json<S: Scalar>(v: &Value) -> Result<Form<S>, SerialError> {
    let geom = geometry_from_json(v.get("geometry").ok_or_else(|| bad("missing geometry"))?)?;
    let space = space_from_tag(
        v.get("space")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing space"))?,
    )?;
    let spec = geom.space(space);
    let dr = v
        .get("dr_degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing dr_degree"))? as usize;
    let shift = v
        .get("shift")
        .and_then(Value::as_i64)
        .ok_or_else(|| bad("missing shift"))?;
    let mut comps = BTreeMap::new();
    for comp in v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing components"))?
    {
        let names: Vec<&str> = comp
            .get("index")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing index"))?
            .iter()
            .map(|n| n.as_str().ok_or_else(|| bad("index entries are names")))
            .collect::<Result<_, _>>()?;
        let mut mask = 0u8;
        for n in names {
            let i = spec
                .dirs
                .iter()
                .position(|d| d.name == n)
                .ok_or_else(|| bad(format!("unknown direction {n:?}")))?;
            mask |= 1 << i;
        }
        let coeff = coeff_from_json::<S>(
            &spec.domains(),
            comp.get("coeff").ok_or_else(|| bad("missing coeff"))?,
        )?;
        comps.insert(mask, coeff);
    }
    Ok(Form::from_components(spec, dr, shift, comps))
}

fn extent_to_json(e: &AxisExtent) -> Value {
    match e {
        AxisExtent::Interval { lo, hi } => {
            let l = lo.as_ref().map_or("-inf".to_string(), q_to_string);
            let h = hi.as_ref().map_or("inf".to_string(), q_to_string);
            json!([l, h])
        }
        AxisExtent::Arc { lo, hi } => json!([q_to_string(lo), q_to_string(hi)]),
    }
}

fn parse_bound(s: &str) -> Result<Option<Q>, SerialError> {
    match s {
        "-inf" | "inf" => Ok(None),
        other => Ok(Some(q_from_str(other).map_err(bad)?)),
    }
}

pub fn region_to_json(region: &Region) -> Value {
    let boxes: Vec<Value> = region
        .boxes
        .iter()
        .map(|b| {
            let mut m = serde_json::Map::new();
            for (e, d) in b.iter().zip(region.spec.dirs.iter()) {
                m.insert(d.name.to_string(), extent_to_json(e));
            }
            Value::Object(m)
        })
        .collect();
    json!({ "space": space_tag(region.spec.space), "boxes": boxes })
}

pub fn region_from_json(geom: &Geometry, v: &Value) -> Result<Region, SerialError> {
    let space = space_from_tag(
        v.get("space")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing region space"))?,
    )?;
    let spec = geom.space(space);
    let mut boxes: Vec<BoxExtent> = Vec::new();
    for b in v
        .get("boxes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing boxes"))?
    {
        let obj = b.as_object().ok_or_else(|| bad("box must be an object"))?;
        let mut ext: BoxExtent = Vec::with_capacity(spec.dirs.len());
        for d in &spec.dirs {
            let pair = obj
                .get(d.name)
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(format!("box needs a [lo, hi] entry for {:?}", d.name)))?;
            let lo = pair[0].as_str().ok_or_else(|| bad("bounds are strings"))?;
            let hi = pair[1].as_str().ok_or_else(|| bad("bounds are strings"))?;
            match &d.domain {
                AxisDesc::Circle { .. } => {
                    let lo = q_from_str(lo).map_err(bad)?;
                    let hi = q_from_str(hi).map_err(bad)?;
                    ext.push(AxisExtent::Arc { lo, hi });
                }
                AxisDesc::Line { .. } => {
                    ext.push(AxisExtent::Interval {
                        lo: parse_bound(lo)?,
                        hi: parse_bound(hi)?,
                    });
                }
            }
        }
        boxes.push(ext);
    }
    Ok(Region::new(spec, boxes))
}

/// Serialize a generator window: labels, degrees, pairing matrix and the
/// word-coefficient maps of elements are all reproducible from this.
pub fn generator_set_to_json<S: Scalar>(set: &crate::ccr::GeneratorSet<S>) -> Value {
    json!({
        "generators": set.gens.iter().map(|g| json!({
            "label": g.label,
            "degree": g.degree,
            "form": form_to_json(&g.form),
        })).collect::<Vec<_>>(),
        "pairing": set.pairing.iter().map(|row| row.iter().map(|c| json!({
            "re": c.re.to_json(), "im": c.im.to_json()
        })).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn ccr_element_to_json<S: Scalar>(e: &crate::ccr::CcrElement<S>) -> Value {
    json!({
        "terms": e.terms.iter().map(|(w, c)| json!({
            "word": w,
            "re": c.re.to_json(),
            "im": c.im.to_json(),
        })).collect::<Vec<_>>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Factor1D;
    use crate::fourier::FourierPoly;
    use crate::scalar::{Exact, q_i64, q_ratio};
    use crate::spline::unit_bump;

    fn sample_form(geom: &Geometry) -> Form<Exact> {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let factors: Vec<Factor1D<Exact>> = spec
            .dirs
            .iter()
            .map(|d| match &d.domain {
                AxisDesc::Line { lo: Some(l), hi: Some(h), .. } => {
                    let w = (h - l) / q_i64(4);
                    Factor1D::Spline(unit_bump(&(l + &w), &(h - &w)))
                }
                AxisDesc::Line { lo: Some(l), .. } => {
                    Factor1D::Spline(unit_bump(&(l + q_ratio(1, 3)), &(l + q_i64(2))))
                }
                AxisDesc::Line { .. } => Factor1D::Spline(unit_bump(&q_ratio(-5, 3), &q_i64(1))),
                AxisDesc::Circle { .. } => Factor1D::Fourier(
                    FourierPoly::sine(2).add(&FourierPoly::constant(Exact::from_q(&q_ratio(3, 7)))),
                ),
            })
            .collect();
        let c = crate::coeff::CoeffField::tensor(&domains, &factors);
        let mut comps = std::collections::BTreeMap::new();
        comps.insert(0b011u8, c.deriv(0));
        comps.insert(0b101u8, c);
        Form::from_components(spec, 2, 2, comps)
    }

    #[test]
    fn form_round_trip_is_bit_exact() {
        for geom in [
            Geometry::half_space(Chirality::Plus),
            Geometry::cylinder(Chirality::Minus),
        ] {
            let f = sample_form(&geom);
            let doc = form_to_json(&f);
            let text = serde_json::to_string(&doc).unwrap();
            let back: Form<Exact> =
                form_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back.comps, f.comps);
            assert_eq!(back.spec, f.spec);
            assert_eq!(back.support, f.support);
            // serializing again gives the identical document
            let doc2 = form_to_json(&back);
            assert_eq!(
                serde_json::to_string(&doc).unwrap(),
                serde_json::to_string(&doc2).unwrap()
            );
        }
    }

    #[test]
    fn float_form_round_trip() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let spec = geom.space(SpaceId::BaseBoundary);
        let domains = spec.domains();
        let c = crate::coeff::CoeffField::<f64>::tensor(
            &domains,
            &[Factor1D::Fourier(FourierPoly::sine(1).scale(&Cx::real(0.1234567891234)))],
        );
        let mut comps = std::collections::BTreeMap::new();
        comps.insert(0u8, c);
        let f = Form::from_components(spec, 0, 0, comps);
        let doc = form_to_json(&f);
        let back: Form<f64> = form_from_json(&doc).unwrap();
        assert_eq!(back.comps, f.comps);
    }

    #[test]
    fn region_round_trip() {
        let geom = Geometry::cylinder(Chirality::Plus);
        let spec = geom.space(SpaceId::Bulk);
        let region = Region::new(
            spec,
            vec![vec![
                AxisExtent::Interval { lo: Some(q_i64(-1)), hi: None },
                AxisExtent::Arc { lo: q_ratio(3, 4), hi: q_ratio(9, 8) },
                AxisExtent::Interval { lo: Some(q_ratio(1, 2)), hi: Some(q_i64(1)) },
            ]],
        );
        let doc = region_to_json(&region);
        let back = region_from_json(&geom, &doc).unwrap();
        assert!(back.same_set(&region).unwrap());
    }
}
