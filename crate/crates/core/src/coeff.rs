//! Exact coefficient functions on a product chart.
//!
//! A coefficient is stored on the canonical grid spanned by its rational
//! breakpoints: for each line direction a knot sequence, for each circle
//! direction a finite set of Fourier modes, and for every grid cell a
//! polynomial in the line coordinates. This is the closure of tensor products
//! of splines and Fourier sums under sums, products, derivatives, restricted
//! fiber integrals and point evaluation, with a decidable zero test: a field is
//! zero exactly when no cell survives pruning.

use crate::fourier::FourierPoly;
use crate::poly::MPoly;
use crate::scalar::{Cx, Q, Scalar, q_i64};
use crate::spline::{PiecewisePoly, Side};
use std::collections::BTreeMap;

/// Per-direction grid data. Line axes carry the (in)finite domain of the
/// coordinate; circle axes have unit circumference.
#[derive(Clone, PartialEq, Debug)]
pub enum AxisDesc {
    Line {
        lo: Option<Q>,
        hi: Option<Q>,
        knots: Vec<Q>,
    },
    Circle {
        modes: Vec<i64>,
    },
}

impl AxisDesc {
    pub fn is_line(&self) -> bool {
        matches!(self, AxisDesc::Line { .. })
    }
}

/// 1D building block accepted by [`CoeffField::tensor`].
#[derive(Clone, Debug)]
pub enum Factor1D<S: Scalar> {
    Spline(PiecewisePoly<S>),
    Fourier(FourierPoly<S>),
}

pub type CellKey = Vec<u16>;

#[derive(Clone, PartialEq, Debug)]
pub struct CoeffField<S: Scalar> {
    pub axes: Vec<AxisDesc>,
    pub cells: BTreeMap<CellKey, MPoly<S>>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CoeffError {
    #[error("axis layouts differ: {0}")]
    AxisMismatch(String),
    #[error("non-compact support: {0}")]
    NonCompact(String),
    #[error("operation not defined on a circle axis: {0}")]
    CircleAxis(String),
}

impl<S: Scalar> CoeffField<S> {
    /// Variable slot of a line axis inside cell polynomials.
    fn var_slot(&self, axis: usize) -> usize {
        self.axes[..axis].iter().filter(|a| a.is_line()).count()
    }

    pub fn zero_on(domains: &[AxisDesc]) -> Self {
        let axes = domains
            .iter()
            .map(|d| match d {
                AxisDesc::Line { lo, hi, .. } => AxisDesc::Line {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    knots: vec![],
                },
                AxisDesc::Circle { .. } => AxisDesc::Circle { modes: vec![] },
            })
            .collect();
        CoeffField { axes, cells: BTreeMap::new() }
    }

    /// Constant value on the whole chart.
    pub fn constant_on(domains: &[AxisDesc], value: Cx<S>) -> Self {
        let mut f = Self::zero_on(domains);
        if value.is_zero() {
            return f;
        }
        let mut key = Vec::new();
        for a in f.axes.iter_mut() {
            match a {
                AxisDesc::Line { .. } => key.push(0),
                AxisDesc::Circle { modes } => {
                    modes.push(0);
                    key.push(0);
                }
            }
        }
        f.cells.insert(key, MPoly::constant(value));
        f
    }

    /// Tensor product of one factor per axis.
    pub fn tensor(domains: &[AxisDesc], factors: &[Factor1D<S>]) -> Self {
        assert_eq!(domains.len(), factors.len(), "one factor per axis");
        let mut f = Self::zero_on(domains);
        // collect per-axis (cell index, contribution) lists
        let mut per_axis: Vec<Vec<(u16, MPoly<S>)>> = Vec::new();
        for (i, (axis, factor)) in f.axes.iter_mut().zip(factors.iter()).enumerate() {
            let _ = i;
            match (axis, factor) {
                (AxisDesc::Line { knots, .. }, Factor1D::Spline(sp)) => {
                    *knots = sp.knots.clone();
                    let mut list = Vec::new();
                    for (j, piece) in sp.pieces.iter().enumerate() {
                        if !piece.is_zero() {
                            list.push((j as u16, MPoly::from_poly1(0, piece)));
                        }
                    }
                    per_axis.push(list);
                }
                (AxisDesc::Circle { modes }, Factor1D::Fourier(fp)) => {
                    *modes = fp.modes.keys().cloned().collect();
                    let mut list = Vec::new();
                    for (j, (_, c)) in fp.modes.iter().enumerate() {
                        list.push((j as u16, MPoly::constant(c.clone())));
                    }
                    per_axis.push(list);
                }
                _ => panic!("factor kind does not match axis kind"),
            }
        }
        // cartesian product, multiplying lifted polynomials
        let mut var = 0usize;
        let mut shifted: Vec<Vec<(u16, MPoly<S>)>> = Vec::new();
        for (axis, list) in f.axes.iter().zip(per_axis.into_iter()) {
            if axis.is_line() {
                let lifted = list
                    .into_iter()
                    .map(|(j, p)| (j, shift_vars(&p, var)))
                    .collect();
                shifted.push(lifted);
                var += 1;
            } else {
                shifted.push(list);
            }
        }
        let mut cells: BTreeMap<CellKey, MPoly<S>> = BTreeMap::new();
        let mut stack: Vec<(CellKey, MPoly<S>)> =
            vec![(Vec::new(), MPoly::constant(Cx::one()))];
        for list in &shifted {
            let mut next = Vec::new();
            for (key, poly) in &stack {
                for (j, p) in list {
                    let mut k2 = key.clone();
                    k2.push(*j);
                    next.push((k2, poly.mul(p)));
                }
            }
            stack = next;
        }
        for (k, p) in stack {
            if !p.is_zero() {
                cells.insert(k, p);
            }
        }
        f.cells = cells;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    fn prune(&mut self) {
        self.cells.retain(|_, p| !p.is_zero());
    }

    fn domains(&self) -> Vec<AxisDesc> {
        self.axes
            .iter()
            .map(|a| match a {
                AxisDesc::Line { lo, hi, .. } => AxisDesc::Line {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    knots: vec![],
                },
                AxisDesc::Circle { .. } => AxisDesc::Circle { modes: vec![] },
            })
            .collect()
    }

    fn same_layout(&self, rhs: &Self) -> Result<(), CoeffError> {
        if self.domains() != rhs.domains() {
            return Err(CoeffError::AxisMismatch(format!(
                "{:?} vs {:?}",
                self.domains(),
                rhs.domains()
            )));
        }
        Ok(())
    }

    /// Re-key onto a refined grid (knot supersets, mode supersets).
    fn refine(&self, axes: &[AxisDesc]) -> Self {
        let mut out = CoeffField { axes: axes.to_vec(), cells: BTreeMap::new() };
        if self.cells.is_empty() {
            return out;
        }
        // per axis, map old cell index -> list of new cell indices
        let mut maps: Vec<Vec<Vec<u16>>> = Vec::new();
        for (old, new) in self.axes.iter().zip(axes.iter()) {
            match (old, new) {
                (AxisDesc::Line { knots: ko, .. }, AxisDesc::Line { knots: kn, .. }) => {
                    let mut m: Vec<Vec<u16>> = vec![Vec::new(); ko.len() + 1];
                    for j in 0..=kn.len() {
                        // new cell j = (kn[j-1], kn[j]); locate in old grid
                        let old_idx = if ko.is_empty() {
                            0
                        } else if j == 0 {
                            0
                        } else {
                            // count old knots <= kn[j-1]
                            ko.iter().filter(|k| **k <= kn[j - 1]).count()
                        };
                        m[old_idx].push(j as u16);
                    }
                    maps.push(m);
                }
                (AxisDesc::Circle { modes: mo }, AxisDesc::Circle { modes: mn }) => {
                    let mut m: Vec<Vec<u16>> = vec![Vec::new(); mo.len()];
                    for (i, mode) in mo.iter().enumerate() {
                        let j = mn.binary_search(mode).expect("mode superset");
                        m[i].push(j as u16);
                    }
                    maps.push(m);
                }
                _ => panic!("axis kind mismatch in refine"),
            }
        }
        for (key, poly) in &self.cells {
            let mut stack: Vec<CellKey> = vec![Vec::new()];
            for (axis, idx) in key.iter().enumerate() {
                let targets = &maps[axis][*idx as usize];
                let mut next = Vec::new();
                for k in &stack {
                    for t in targets {
                        let mut k2 = k.clone();
                        k2.push(*t);
                        next.push(k2);
                    }
                }
                stack = next;
            }
            for k in stack {
                out.cells.insert(k, poly.clone());
            }
        }
        out
    }

    fn unified_axes(&self, rhs: &Self) -> Vec<AxisDesc> {
        self.axes
            .iter()
            .zip(rhs.axes.iter())
            .map(|(a, b)| match (a, b) {
                (
                    AxisDesc::Line { lo, hi, knots: ka },
                    AxisDesc::Line { knots: kb, .. },
                ) => {
                    let mut knots: Vec<Q> = ka.iter().chain(kb.iter()).cloned().collect();
                    knots.sort();
                    knots.dedup();
                    AxisDesc::Line { lo: lo.clone(), hi: hi.clone(), knots }
                }
                (AxisDesc::Circle { modes: ma }, AxisDesc::Circle { modes: mb }) => {
                    let mut modes: Vec<i64> = ma.iter().chain(mb.iter()).cloned().collect();
                    modes.sort();
                    modes.dedup();
                    AxisDesc::Circle { modes }
                }
                _ => panic!("axis kind mismatch"),
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, CoeffError> {
        self.same_layout(rhs)?;
        let axes = self.unified_axes(rhs);
        let a = self.refine(&axes);
        let b = rhs.refine(&axes);
        let mut out = a;
        for (k, p) in b.cells {
            match out.cells.get_mut(&k) {
                Some(q) => *q = q.add(&p),
                None => {
                    out.cells.insert(k, p);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        CoeffField {
            axes: self.axes.clone(),
            cells: self.cells.iter().map(|(k, p)| (k.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, CoeffError> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Cx<S>) -> Self {
        let mut out = CoeffField {
            axes: self.axes.clone(),
            cells: self
                .cells
                .iter()
                .map(|(k, p)| (k.clone(), p.scale(s)))
                .collect(),
        };
        out.prune();
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, CoeffError> {
        self.same_layout(rhs)?;
        let line_axes = self.unified_axes(rhs);
        let a = self.refine(&line_axes);
        let b = rhs.refine(&line_axes);
        // product mode sets per circle axis
        let axes: Vec<AxisDesc> = line_axes
            .iter()
            .enumerate()
            .map(|(i, ax)| match ax {
                AxisDesc::Line { .. } => ax.clone(),
                AxisDesc::Circle { .. } => {
                    let ma = mode_list(&a.axes[i]);
                    let mb = mode_list(&b.axes[i]);
                    let mut sums: Vec<i64> = ma
                        .iter()
                        .flat_map(|x| mb.iter().map(move |y| x + y))
                        .collect();
                    sums.sort();
                    sums.dedup();
                    AxisDesc::Circle { modes: sums }
                }
            })
            .collect();
        let mut out = CoeffField { axes: axes.clone(), cells: BTreeMap::new() };
        for (k1, p1) in &a.cells {
            for (k2, p2) in &b.cells {
                let mut key = Vec::with_capacity(k1.len());
                let mut ok = true;
                for (i, ax) in axes.iter().enumerate() {
                    match ax {
                        AxisDesc::Line { .. } => {
                            if k1[i] != k2[i] {
                                ok = false;
                                break;
                            }
                            key.push(k1[i]);
                        }
                        AxisDesc::Circle { modes } => {
                            let m = mode_list(&a.axes[i])[k1[i] as usize]
                                + mode_list(&b.axes[i])[k2[i] as usize];
                            let j = modes.binary_search(&m).expect("sum in mode set");
                            key.push(j as u16);
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let prod = p1.mul(p2);
                match out.cells.get_mut(&key) {
                    Some(q) => *q = q.add(&prod),
                    None => {
                        out.cells.insert(key, prod);
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn deriv(&self, axis: usize) -> Self {
        let mut out = CoeffField { axes: self.axes.clone(), cells: BTreeMap::new() };
        match &self.axes[axis] {
            AxisDesc::Line { .. } => {
                let var = self.var_slot(axis);
                for (k, p) in &self.cells {
                    out.cells.insert(k.clone(), p.deriv(var));
                }
            }
            AxisDesc::Circle { modes } => {
                for (k, p) in &self.cells {
                    let m = modes[k[axis] as usize];
                    if m == 0 {
                        continue;
                    }
                    let factor = Cx::new(S::zero(), S::pi() * S::from_i64(2 * m));
                    out.cells.insert(k.clone(), p.scale(&factor));
                }
            }
        }
        out.prune();
        out
    }

    /// Definite integral over the full axis domain, removing the axis.
    pub fn integrate_axis(&self, axis: usize) -> Result<Self, CoeffError> {
        let mut out_axes = self.axes.clone();
        out_axes.remove(axis);
        let mut out = CoeffField { axes: out_axes, cells: BTreeMap::new() };
        match &self.axes[axis] {
            AxisDesc::Circle { modes } => {
                for (k, p) in &self.cells {
                    if modes[k[axis] as usize] != 0 {
                        continue; // nonzero modes integrate to zero
                    }
                    let mut key = k.clone();
                    key.remove(axis);
                    match out.cells.get_mut(&key) {
                        Some(q) => *q = q.add(p),
                        None => {
                            out.cells.insert(key, p.clone());
                        }
                    }
                }
            }
            AxisDesc::Line { lo, hi, knots } => {
                let var = self.var_slot(axis);
                for (k, p) in &self.cells {
                    let i = k[axis] as usize;
                    let a = if i == 0 { lo.clone() } else { Some(knots[i - 1].clone()) };
                    let b = if i == knots.len() { hi.clone() } else { Some(knots[i].clone()) };
                    let (a, b) = match (a, b) {
                        (Some(a), Some(b)) => (a, b),
                        _ => {
                            return Err(CoeffError::NonCompact(
                                "nonzero coefficient on an unbounded cell".into(),
                            ))
                        }
                    };
                    if b <= a {
                        continue;
                    }
                    let integ = remove_var(&p.integral_var(var, &a, &b), var);
                    let mut key = k.clone();
                    key.remove(axis);
                    match out.cells.get_mut(&key) {
                        Some(q) => *q = q.add(&integ),
                        None => {
                            out.cells.insert(key, integ);
                        }
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Cumulative integral from the lower end of a line axis, keeping the axis.
    pub fn cumulative_from_left(&self, axis: usize) -> Result<Self, CoeffError> {
        self.cumulative(axis, true)
    }

    /// Cumulative integral `x -> int_x^(upper end)`, keeping the axis.
    pub fn cumulative_to_right(&self, axis: usize) -> Result<Self, CoeffError> {
        self.cumulative(axis, false)
    }

    fn cumulative(&self, axis: usize, from_left: bool) -> Result<Self, CoeffError> {
        let (lo, hi, knots) = match &self.axes[axis] {
            AxisDesc::Line { lo, hi, knots } => (lo.clone(), hi.clone(), knots.clone()),
            AxisDesc::Circle { .. } => {
                return Err(CoeffError::CircleAxis("cumulative integral".into()))
            }
        };
        let var = self.var_slot(axis);
        // group cells into lanes sharing all other indices
        let mut lanes: BTreeMap<CellKey, Vec<MPoly<S>>> = BTreeMap::new();
        let ncells = knots.len() + 1;
        for (k, p) in &self.cells {
            let mut rest = k.clone();
            let idx = rest.remove(axis) as usize;
            let lane = lanes
                .entry(rest)
                .or_insert_with(|| vec![MPoly::zero(); ncells]);
            lane[idx] = p.clone();
        }
        let mut out = CoeffField { axes: self.axes.clone(), cells: BTreeMap::new() };
        for (rest, lane) in lanes {
            let mut results = vec![MPoly::zero(); ncells];
            if from_left {
                let mut acc = MPoly::zero();
                let mut start = lo.clone();
                if start.is_none() && !lane[0].is_zero() {
                    return Err(CoeffError::NonCompact(
                        "cumulative integral with a nonzero unbounded left cell".into(),
                    ));
                }
                for i in 0..ncells {
                    let anti = lane[i].antideriv(var);
                    results[i] = match &start {
                        None => acc.clone(),
                        Some(s) => anti.sub(&anti.eval_var_q(var, s)).add(&acc),
                    };
                    if i < knots.len() {
                        let k = &knots[i];
                        acc = results[i].eval_var_q(var, k);
                        start = Some(k.clone());
                    }
                }
            } else {
                let mut acc = MPoly::zero();
                let mut end = hi.clone();
                if end.is_none() && !lane[ncells - 1].is_zero() {
                    return Err(CoeffError::NonCompact(
                        "cumulative integral with a nonzero unbounded right cell".into(),
                    ));
                }
                for i in (0..ncells).rev() {
                    let anti = lane[i].antideriv(var);
                    results[i] = match &end {
                        None => acc.clone(),
                        Some(e) => anti.eval_var_q(var, e).sub(&anti).add(&acc),
                    };
                    if i > 0 {
                        let k = &knots[i - 1];
                        acc = results[i].eval_var_q(var, k);
                        end = Some(k.clone());
                    }
                }
            }
            for (i, p) in results.into_iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let mut key = rest.clone();
                key.insert(axis, i as u16);
                out.cells.insert(key, p);
            }
        }
        Ok(out)
    }

    /// Evaluate a line axis at a rational point, removing the axis. `side`
    /// selects the one-sided limit when the point is a knot.
    pub fn eval_axis(&self, axis: usize, x: &Q, side: Side) -> Result<Self, CoeffError> {
        let knots = match &self.axes[axis] {
            AxisDesc::Line { knots, .. } => knots,
            AxisDesc::Circle { .. } => {
                return Err(CoeffError::CircleAxis("exact point evaluation".into()))
            }
        };
        let mut idx = 0usize;
        for k in knots {
            let go_right = match side {
                Side::Above => x >= k,
                Side::Below => x > k,
            };
            if go_right {
                idx += 1;
            } else {
                break;
            }
        }
        let var = self.var_slot(axis);
        let mut out_axes = self.axes.clone();
        out_axes.remove(axis);
        let mut out = CoeffField { axes: out_axes, cells: BTreeMap::new() };
        for (k, p) in &self.cells {
            if k[axis] as usize != idx {
                continue;
            }
            let v = remove_var(&p.eval_var_q(var, x), var);
            let mut key = k.clone();
            key.remove(axis);
            match out.cells.get_mut(&key) {
                Some(q) => *q = q.add(&v),
                None => {
                    out.cells.insert(key, v);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Insert a new axis at `pos` on which the function is constant.
    pub fn insert_axis(&self, pos: usize, domain: &AxisDesc) -> Self {
        let mut axes = self.axes.clone();
        let new_axis = match domain {
            AxisDesc::Line { lo, hi, .. } => AxisDesc::Line {
                lo: lo.clone(),
                hi: hi.clone(),
                knots: vec![],
            },
            AxisDesc::Circle { .. } => AxisDesc::Circle { modes: vec![0] },
        };
        axes.insert(pos, new_axis.clone());
        let var_insert = if new_axis.is_line() {
            Some(self.axes[..pos].iter().filter(|a| a.is_line()).count())
        } else {
            None
        };
        let mut cells = BTreeMap::new();
        for (k, p) in &self.cells {
            let mut key = k.clone();
            key.insert(pos, 0);
            let poly = match var_insert {
                Some(v) => insert_var(p, v),
                None => p.clone(),
            };
            cells.insert(key, poly);
        }
        CoeffField { axes, cells }
    }

    /// Closed support interval per line axis (`None` end = unbounded), or
    /// `None` when the field vanishes along every cell touching the axis.
    pub fn line_support(&self, axis: usize) -> Option<(Option<Q>, Option<Q>)> {
        let knots = match &self.axes[axis] {
            AxisDesc::Line { knots, .. } => knots,
            AxisDesc::Circle { .. } => return None,
        };
        let idxs: Vec<usize> = self.cells.keys().map(|k| k[axis] as usize).collect();
        let (min, max) = match (idxs.iter().min(), idxs.iter().max()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return None,
        };
        let lo = if min == 0 { None } else { Some(knots[min - 1].clone()) };
        let hi = if max == knots.len() { None } else { Some(knots[max].clone()) };
        Some((lo, hi))
    }

    /// Evaluate numerically at a chart point (line coordinates by axis order;
    /// circle coordinates in [0,1)). Returns `(re, im)`.
    pub fn eval_f64(&self, point: &[Q]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, p) in &self.cells {
            let mut phase = 0.0f64;
            let mut line_ok = true;
            let mut coords = [Q::from_integer(0.into()), Q::from_integer(0.into()), Q::from_integer(0.into())];
            let mut var = 0usize;
            for (axis, desc) in self.axes.iter().enumerate() {
                match desc {
                    AxisDesc::Line { knots, .. } => {
                        let x = &point[axis];
                        // locate containing cell (from above at knots)
                        let mut idx = 0usize;
                        for kn in knots {
                            if x >= kn {
                                idx += 1;
                            } else {
                                break;
                            }
                        }
                        if idx != k[axis] as usize {
                            line_ok = false;
                            break;
                        }
                        coords[var] = x.clone();
                        var += 1;
                    }
                    AxisDesc::Circle { modes } => {
                        let m = modes[k[axis] as usize];
                        phase += 2.0
                            * std::f64::consts::PI
                            * (m as f64)
                            * crate::scalar::q_to_f64(&point[axis]);
                    }
                }
            }
            if !line_ok {
                continue;
            }
            let v = p.eval_point(&coords);
            let (s, c) = phase.sin_cos();
            let vr = v.re.to_f64();
            let vi = v.im.to_f64();
            re += vr * c - vi * s;
            im += vr * s + vi * c;
        }
        (re, im)
    }

    /// Sup-norm surrogate: max coefficient magnitude over per-cell sample
    /// grids dense enough to pin the cell polynomial. Zero iff `is_zero` in
    /// the exact backend; the float-mode residual in reports.
    pub fn residual_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for (key, p) in &self.cells {
            let mut pts: Vec<Vec<Q>> = vec![vec![]];
            let mut var = 0usize;
            for (axis, desc) in self.axes.iter().enumerate() {
                if let AxisDesc::Line { lo, hi, knots } = desc {
                    let i = key[axis] as usize;
                    let a = if i == 0 { lo.clone() } else { Some(knots[i - 1].clone()) };
                    let b = if i == knots.len() { hi.clone() } else { Some(knots[i].clone()) };
                    let (a, b) = match (a, b) {
                        (Some(a), Some(b)) => (a, b),
                        (None, Some(b)) => (&b - q_i64(1), b),
                        (Some(a), None) => (a.clone(), &a + q_i64(1)),
                        (None, None) => (-q_i64(1), q_i64(1)),
                    };
                    let n = p.degree(var) as i64 + 1;
                    let mut next = Vec::new();
                    for base in &pts {
                        for j in 1..=n {
                            let t = &a + (&b - &a) * Q::new(j.into(), (n + 1).into());
                            let mut v = base.clone();
                            v.push(t);
                            next.push(v);
                        }
                    }
                    pts = next;
                    var += 1;
                }
            }
            for xs in pts {
                let mut coords = [
                    Q::from_integer(0.into()),
                    Q::from_integer(0.into()),
                    Q::from_integer(0.into()),
                ];
                for (v, x) in xs.iter().enumerate() {
                    coords[v] = x.clone();
                }
                worst = worst.max(p.eval_point(&coords).abs_f64());
            }
        }
        worst
    }

    /// All mode coefficients conjugated with modes negated; realness check.
    pub fn is_real(&self) -> bool {
        // conj(f) has cell polys conjugated and circle modes negated
        let mut conj = CoeffField {
            axes: self.axes.clone(),
            cells: BTreeMap::new(),
        };
        // negated mode lists must be re-sorted
        let mut axes = self.axes.clone();
        let mut mode_maps: Vec<Option<(Vec<i64>, Vec<i64>)>> = Vec::new();
        for a in axes.iter_mut() {
            match a {
                AxisDesc::Circle { modes } => {
                    let old = modes.clone();
                    let mut neg: Vec<i64> = old.iter().map(|m| -m).collect();
                    neg.sort();
                    mode_maps.push(Some((old, neg.clone())));
                    *modes = neg;
                }
                AxisDesc::Line { .. } => mode_maps.push(None),
            }
        }
        conj.axes = axes;
        for (k, p) in &self.cells {
            let mut key = k.clone();
            for (axis, mm) in mode_maps.iter().enumerate() {
                if let Some((old, new)) = mm {
                    let m = -old[k[axis] as usize];
                    key[axis] = new.binary_search(&m).unwrap() as u16;
                }
            }
            let conj_poly = MPoly {
                terms: p.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
            };
            conj.cells.insert(key, conj_poly);
        }
        match self.sub(&conj) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}

fn mode_list(a: &AxisDesc) -> &[i64] {
    match a {
        AxisDesc::Circle { modes } => modes,
        AxisDesc::Line { .. } => panic!("expected circle axis"),
    }
}

/// Shift all variable slots up by `by` (used when lifting 1D pieces).
fn shift_vars<S: Scalar>(p: &MPoly<S>, by: usize) -> MPoly<S> {
    if by == 0 {
        return p.clone();
    }
    MPoly {
        terms: p
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = [0u8; 3];
                for v in 0..3 - by {
                    e2[v + by] = e[v];
                }
                (e2, c.clone())
            })
            .collect(),
    }
}

/// Remove variable slot `var` (its exponent must already be zero).
fn remove_var<S: Scalar>(p: &MPoly<S>, var: usize) -> MPoly<S> {
    MPoly {
        terms: p
            .terms
            .iter()
            .map(|(e, c)| {
                debug_assert_eq!(e[var], 0);
                let mut e2 = [0u8; 3];
                let mut j = 0;
                for v in 0..3 {
                    if v != var {
                        e2[j] = e[v];
                        j += 1;
                    }
                }
                (e2, c.clone())
            })
            .collect(),
    }
}

/// Open a fresh variable slot at `var`, shifting later slots up.
fn insert_var<S: Scalar>(p: &MPoly<S>, var: usize) -> MPoly<S> {
    MPoly {
        terms: p
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = [0u8; 3];
                for v in 0..3 {
                    if e[v] != 0 {
                        let target = if v < var { v } else { v + 1 };
                        assert!(target < 3, "variable slots exhausted");
                        e2[target] = e[v];
                    }
                }
                (e2, c.clone())
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, q_ratio};
    use crate::spline::unit_bump;

    fn line(lo: Option<i64>, hi: Option<i64>) -> AxisDesc {
        AxisDesc::Line {
            lo: lo.map(q_i64),
            hi: hi.map(q_i64),
            knots: vec![],
        }
    }

    fn bump_field(a: i64, b: i64) -> CoeffField<Exact> {
        CoeffField::tensor(
            &[line(None, None)],
            &[Factor1D::Spline(unit_bump(&q_i64(a), &q_i64(b)))],
        )
    }

    #[test]
    fn tensor_product_integrates_separately() {
        // bump(tau) * bump(r) over both axes = 1 * 1
        let domains = [line(None, None), line(Some(0), Some(1))];
        let f = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(-2), &q_i64(2))),
                Factor1D::Spline(unit_bump(&q_ratio(1, 4), &q_ratio(3, 4))),
            ],
        );
        let g = f.integrate_axis(0).unwrap().integrate_axis(0).unwrap();
        assert_eq!(g.axes.len(), 0);
        let total = g.cells.values().next().unwrap().clone();
        assert_eq!(total, MPoly::constant(Cx::one()));
    }

    #[test]
    fn sum_of_opposite_bumps_is_zero() {
        let f = bump_field(0, 3);
        let d = f.sub(&f).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn cumulative_left_matches_spline_level() {
        let f = bump_field(-1, 1);
        let cum = f.cumulative_from_left(0).unwrap();
        let at_two = cum.eval_axis(0, &q_i64(2), Side::Below).unwrap();
        let one = CoeffField::<Exact>::constant_on(&[], Cx::one());
        assert_eq!(at_two, one);
    }

    #[test]
    fn circle_derivative_and_integral() {
        let domains = [AxisDesc::Circle { modes: vec![] }];
        let f = CoeffField::<Exact>::tensor(
            &domains,
            &[Factor1D::Fourier(FourierPoly::sine(1))],
        );
        // int_circle sin = 0; int_circle sin * sin = 1/2
        assert!(f.integrate_axis(0).unwrap().is_zero());
        let sq = f.mul(&f).unwrap();
        let total = sq.integrate_axis(0).unwrap();
        let half = CoeffField::<Exact>::constant_on(&[], Cx::from_q(&q_ratio(1, 2)));
        assert_eq!(total, half);
        assert!(f.is_real());
        assert!(f.deriv(0).is_real());
    }

    #[test]
    fn mixed_line_circle_product() {
        let domains = [
            line(None, None),
            AxisDesc::Circle { modes: vec![] },
        ];
        let f = CoeffField::<Exact>::tensor(
            &domains,
            &[
                Factor1D::Spline(unit_bump(&q_i64(0), &q_i64(1))),
                Factor1D::Fourier(FourierPoly::cosine(2)),
            ],
        );
        let g = f.mul(&f).unwrap();
        // integral over circle of cos^2(2) = 1/2, times (int bump^2) over line
        let line_part = g.integrate_axis(1).unwrap();
        let bump = unit_bump::<Exact>(&q_i64(0), &q_i64(1));
        let expect_val = bump.mul(&bump).integral(None, None).unwrap();
        let total = line_part.integrate_axis(0).unwrap();
        let expect = CoeffField::<Exact>::constant_on(
            &[],
            Cx::real(expect_val.div_q(&q_i64(2))),
        );
        assert_eq!(total, expect);
    }

    #[test]
    fn insert_axis_is_constant_extension() {
        let f = bump_field(0, 2);
        let g = f.insert_axis(1, &line(Some(0), Some(1)));
        let back = g.integrate_axis(1).unwrap();
        assert_eq!(back, f);
    }
}
