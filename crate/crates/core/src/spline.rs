//! Exact piecewise polynomials on a line direction.
//!
//! Knots are rational and pieces are stored in the global coordinate basis, so
//! refinement never re-expands a polynomial. The two tail pieces extend beyond
//! the first and last knot; compact support means both tails vanish.
//! Cumulative integrals of compactly supported splines are eventually constant,
//! which is how Green's homotopy outputs leave the compactly supported
//! subcomplex without leaving the representation.

use crate::poly::Poly1;
use crate::scalar::{Q, Scalar, q_i64};


/// Side from which a knot value is approached when evaluating.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Below,
    Above,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PiecewisePoly<S: Scalar> {
    /// Strictly increasing breakpoints.
    pub knots: Vec<Q>,
    /// `pieces.len() == knots.len() + 1`; piece `i` is valid on
    /// `(knots[i-1], knots[i])`, with the missing ends at infinity.
    pub pieces: Vec<Poly1<S>>,
}

impl<S: Scalar> PiecewisePoly<S> {
    pub fn zero() -> Self {
        PiecewisePoly { knots: vec![], pieces: vec![Poly1::zero()] }
    }

    pub fn constant(c: S) -> Self {
        PiecewisePoly { knots: vec![], pieces: vec![Poly1::constant(c)] }
    }

    pub fn new(knots: Vec<Q>, pieces: Vec<Poly1<S>>) -> Self {
        assert_eq!(pieces.len(), knots.len() + 1, "piece/knot count mismatch");
        assert!(knots.windows(2).all(|w| w[0] < w[1]), "knots must increase");
        PiecewisePoly { knots, pieces }
    }

    pub fn left_tail(&self) -> &Poly1<S> {
        &self.pieces[0]
    }

    pub fn right_tail(&self) -> &Poly1<S> {
        self.pieces.last().unwrap()
    }

    pub fn has_compact_support(&self) -> bool {
        self.left_tail().is_zero() && self.right_tail().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.is_zero())
    }

    /// Piece index of the open cell containing `x`, approaching knots from `side`.
    fn piece_index(&self, x: &Q, side: Side) -> usize {
        let mut i = 0;
        for k in &self.knots {
            let go_right = match side {
                Side::Above => x >= k,
                Side::Below => x > k,
            };
            if go_right {
                i += 1;
            } else {
                break;
            }
        }
        i
    }

    pub fn eval(&self, x: &Q, side: Side) -> S {
        self.pieces[self.piece_index(x, side)].eval_q(x)
    }

    /// Largest `c` such that all derivatives up to order `c` match at every
    /// interior knot; `-1` if the function jumps, capped at `cap`.
    pub fn continuity_class(&self, cap: i32) -> i32 {
        let mut class = cap;
        for (i, k) in self.knots.iter().enumerate() {
            let mut left = self.pieces[i].clone();
            let mut right = self.pieces[i + 1].clone();
            let mut level = -1i32;
            while level < cap {
                if left.eval_q(k) != right.eval_q(k) {
                    break;
                }
                level += 1;
                left = left.deriv();
                right = right.deriv();
            }
            class = class.min(level);
        }
        class
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let mut knots: Vec<Q> = a.knots.iter().chain(b.knots.iter()).cloned().collect();
        knots.sort();
        knots.dedup();
        (a.refine(&knots), b.refine(&knots))
    }

    /// Re-express on a superset of the current knots (global basis: pieces copy).
    pub fn refine(&self, knots: &[Q]) -> Self {
        let mut pieces = Vec::with_capacity(knots.len() + 1);
        for i in 0..=knots.len() {
            // any interior point of the new cell selects the old piece
            let idx = if i == 0 {
                if knots.is_empty() {
                    return self.clone();
                }
                self.piece_index(&knots[0], Side::Below)
            } else {
                self.piece_index(&knots[i - 1], Side::Above)
            };
            pieces.push(self.pieces[idx].clone());
        }
        PiecewisePoly { knots: knots.to_vec(), pieces }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unify(self, rhs);
        let pieces = a
            .pieces
            .iter()
            .zip(b.pieces.iter())
            .map(|(p, q)| p.add(q))
            .collect();
        PiecewisePoly { knots: a.knots, pieces }.compress()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unify(self, rhs);
        let pieces = a
            .pieces
            .iter()
            .zip(b.pieces.iter())
            .map(|(p, q)| p.mul(q))
            .collect();
        PiecewisePoly { knots: a.knots, pieces }.compress()
    }

    pub fn neg(&self) -> Self {
        PiecewisePoly {
            knots: self.knots.clone(),
            pieces: self.pieces.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        PiecewisePoly {
            knots: self.knots.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn deriv(&self) -> Self {
        PiecewisePoly {
            knots: self.knots.clone(),
            pieces: self.pieces.iter().map(|p| p.deriv()).collect(),
        }
    }

    /// Drop knots where adjacent pieces are identical polynomials.
    pub fn compress(mut self) -> Self {
        let mut i = 0;
        while i < self.knots.len() {
            if self.pieces[i] == self.pieces[i + 1] {
                self.knots.remove(i);
                self.pieces.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }

    /// Cumulative integral from the left end, which must carry a zero tail
    /// (or start from `from` when the domain is bounded below).
    pub fn cumulative_from_left(&self, from: Option<&Q>) -> Result<Self, String> {
        let mut acc = S::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut start: Option<Q> = from.cloned();
        if start.is_none() && !self.left_tail().is_zero() {
            return Err("cumulative integral of a non-vanishing left tail".into());
        }
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antideriv();
            match &start {
                None => {
                    // unbounded left cell with zero integrand
                    pieces.push(Poly1::constant(acc.clone()));
                }
                Some(s) => {
                    let shift = acc.clone() - anti.eval_q(s);
                    pieces.push(anti.add(&Poly1::constant(shift)));
                }
            }
            if i < self.knots.len() {
                let k = &self.knots[i];
                acc = pieces[i].eval_q(k);
                start = Some(k.clone());
            }
        }
        Ok(PiecewisePoly { knots: self.knots.clone(), pieces }.compress())
    }

    /// Cumulative integral `x -> int_x^end`, with `end` the upper domain bound
    /// or infinity (then the right tail must vanish).
    pub fn cumulative_to_right(&self, to: Option<&Q>) -> Result<Self, String> {
        if to.is_none() && !self.right_tail().is_zero() {
            return Err("cumulative integral of a non-vanishing right tail".into());
        }
        let mut acc = S::zero();
        let n = self.pieces.len();
        let mut pieces = vec![Poly1::zero(); n];
        let mut end: Option<Q> = to.cloned();
        for i in (0..n).rev() {
            let anti = self.pieces[i].antideriv();
            match &end {
                None => {
                    pieces[i] = Poly1::constant(acc.clone());
                }
                Some(e) => {
                    // int_x^e = A(e) - A(x) plus what lies beyond e
                    let shift = acc.clone() + anti.eval_q(e);
                    pieces[i] = anti.neg().add(&Poly1::constant(shift));
                }
            }
            if i > 0 {
                let k = &self.knots[i - 1];
                acc = pieces[i].eval_q(k);
                end = Some(k.clone());
            }
        }
        Ok(PiecewisePoly { knots: self.knots.clone(), pieces }.compress())
    }

    /// Definite integral over the whole domain `(lo, hi)`, infinite ends
    /// requiring vanishing tails.
    pub fn integral(&self, lo: Option<&Q>, hi: Option<&Q>) -> Result<S, String> {
        if lo.is_none() && !self.left_tail().is_zero() {
            return Err("integral over an unbounded direction with nonzero left tail".into());
        }
        if hi.is_none() && !self.right_tail().is_zero() {
            return Err("integral over an unbounded direction with nonzero right tail".into());
        }
        let mut total = S::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let a = if i == 0 { lo.cloned() } else { Some(self.knots[i - 1].clone()) };
            let b = if i == self.knots.len() { hi.cloned() } else { Some(self.knots[i].clone()) };
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err("nonzero piece on an unbounded cell".into()),
            };
            if b > a {
                total = total + p.integral(&a, &b);
            }
        }
        Ok(total)
    }

    /// Closed support interval `[lo, hi]`, `None` meaning unbounded; `None`
    /// overall when identically zero.
    pub fn support(&self) -> Option<(Option<Q>, Option<Q>)> {
        let nz: Vec<usize> = (0..self.pieces.len())
            .filter(|&i| !self.pieces[i].is_zero())
            .collect();
        let (first, last) = match (nz.first(), nz.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return None,
        };
        let lo = if first == 0 { None } else { Some(self.knots[first - 1].clone()) };
        let hi = if last == self.knots.len() { None } else { Some(self.knots[last].clone()) };
        Some((lo, hi))
    }
}

/// C^1 quadratic B-spline bump supported exactly on `(a, b)`, scaled to unit
/// integral. Serves as the reference compactly supported one-form coefficient.
pub fn unit_bump<S: Scalar>(a: &Q, b: &Q) -> PiecewisePoly<S> {
    assert!(a < b, "bump needs a nonempty interval");
    let h = (b - a) / q_i64(3);
    let k1 = a + &h;
    let k2 = a + &h * q_i64(2);
    let x = Poly1::from_coeffs(vec![S::zero(), S::one()]);
    let c = |q: &Q| Poly1::constant(S::from_q(q));
    // normalized so the total integral is one: pieces of B(x)/h
    let h2 = &h * &h * q_i64(2); // 2 h^2
    let div_poly = |p: Poly1<S>, d: &Q| -> Poly1<S> {
        Poly1::from_coeffs(p.coeffs.iter().map(|cf| cf.div_q(d)).collect())
    };
    // (x-a)^2 / (2h^3)
    let xa = x.add(&c(a).neg());
    let p1 = div_poly(xa.mul(&xa), &(&h2 * &h));
    // (x-b)^2 / (2h^3)
    let xb = x.add(&c(b).neg());
    let p3 = div_poly(xb.mul(&xb), &(&h2 * &h));
    // middle: B(u) = (-2u^2 + 6u - 3)/2 with u = (x-a)/h, then /h
    let u = div_poly(xa.clone(), &h);
    let u2 = u.mul(&u);
    let mid = u2
        .scale(&S::from_i64(-2))
        .add(&u.scale(&S::from_i64(6)))
        .add(&Poly1::constant(S::from_i64(-3)));
    let p2 = div_poly(mid, &(q_i64(2) * &h));
    PiecewisePoly::new(
        vec![a.clone(), k1, k2, b.clone()],
        vec![Poly1::zero(), p1, p2, p3, Poly1::zero()],
    )
}
