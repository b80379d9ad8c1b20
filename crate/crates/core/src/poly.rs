//! Dense univariate and sparse trivariate polynomials over a complex scalar.
//!
//! Coefficient functions on a product chart reduce, on each cell of the knot
//! grid, to a polynomial in the line-direction coordinates. At most three line
//! directions occur in any chart, so exponents are fixed-size triples.

use crate::scalar::{Cx, Q, Scalar};
use std::collections::BTreeMap;

/// Dense univariate polynomial, `coeffs[j]` multiplying `x^j`.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly1<S: Scalar> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Poly1<S> {
    pub fn zero() -> Self {
        Poly1 { coeffs: vec![] }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Poly1 { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = Poly1 { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_q(&self, x: &Q) -> S {
        let xs = S::from_q(x);
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * xs.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let a = self.coeffs.get(j).cloned().unwrap_or_else(S::zero);
            let b = rhs.coeffs.get(j).cloned().unwrap_or_else(S::zero);
            out.push(a + b);
        }
        Poly1::from_coeffs(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly1::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly1::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        Poly1::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn deriv(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly1::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.clone() * S::from_i64(j as i64));
        }
        Poly1::from_coeffs(out)
    }

    /// Antiderivative with zero constant term.
    pub fn antideriv(&self) -> Self {
        let mut out = vec![S::zero()];
        for (j, c) in self.coeffs.iter().enumerate() {
            out.push(c.div_q(&crate::scalar::q_i64(j as i64 + 1)));
        }
        Poly1::from_coeffs(out)
    }

    /// Definite integral over `[a, b]`.
    pub fn integral(&self, a: &Q, b: &Q) -> S {
        let anti = self.antideriv();
        anti.eval_q(b) - anti.eval_q(a)
    }
}

/// Exponent triple for up to three line directions.
pub type Exps = [u8; 3];

/// Sparse polynomial in at most three variables with complex coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<S: Scalar> {
    pub terms: BTreeMap<Exps, Cx<S>>,
}

impl<S: Scalar> MPoly<S> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Cx<S>) -> Self {
        let mut m = MPoly::zero();
        if !c.is_zero() {
            m.terms.insert([0, 0, 0], c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Monomial `c * x_var^k`.
    pub fn monomial(var: usize, k: u8, c: Cx<S>) -> Self {
        let mut e = [0u8; 3];
        e[var] = k;
        let mut m = MPoly::zero();
        if !c.is_zero() {
            m.terms.insert(e, c);
        }
        m
    }

    /// Lift a univariate polynomial into variable slot `var`.
    pub fn from_poly1(var: usize, p: &Poly1<S>) -> Self {
        let mut out = MPoly::zero();
        for (j, c) in p.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0u8; 3];
                e[var] = j as u8;
                out.terms.insert(e, Cx::real(c.clone()));
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let entry = out.terms.entry(*e).or_insert_with(Cx::zero);
            *entry = entry.clone() + c.clone();
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = out.terms.entry(e).or_insert_with(Cx::zero);
                *entry = entry.clone() + c1.clone() * c2.clone();
            }
        }
        out.prune();
        out
    }

    pub fn scale(&self, s: &Cx<S>) -> Self {
        let mut out = MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.clone() * s.clone()))
                .collect(),
        };
        out.prune();
        out
    }

    pub fn deriv(&self, var: usize) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            let k = Cx::real(S::from_i64(e[var] as i64));
            let entry = out.terms.entry(e2).or_insert_with(Cx::zero);
            *entry = entry.clone() + c.clone() * k;
        }
        out.prune();
        out
    }

    /// Antiderivative in `var` with zero constant.
    pub fn antideriv(&self, var: usize) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[var] += 1;
            out.terms
                .insert(e2, c.div_q(&crate::scalar::q_i64(e[var] as i64 + 1)));
        }
        out.prune();
        out
    }

    /// Substitute `x_var = value`, collapsing that variable.
    pub fn eval_var_q(&self, var: usize, value: &Q) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[var] = 0;
            let pow = num_traits::pow::pow(value.clone(), e[var] as usize);
            let entry = out.terms.entry(e2).or_insert_with(Cx::zero);
            *entry = entry.clone() + c.scale_q(&pow);
        }
        out.prune();
        out
    }

    /// Definite integral of `var` over `[a, b]`, collapsing that variable.
    pub fn integral_var(&self, var: usize, a: &Q, b: &Q) -> Self {
        let anti = self.antideriv(var);
        anti.eval_var_q(var, b).sub(&anti.eval_var_q(var, a))
    }

    /// Total degree in `var`.
    pub fn degree(&self, var: usize) -> u8 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Evaluate at a full rational point (all three slots).
    pub fn eval_point(&self, x: &[Q; 3]) -> Cx<S> {
        let mut acc = Cx::zero();
        for (e, c) in &self.terms {
            let mut m = Q::from_integer(1.into());
            for v in 0..3 {
                m *= num_traits::pow::pow(x[v].clone(), e[v] as usize);
            }
            acc = acc + c.scale_q(&m);
        }
        acc
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_i64, q_ratio};

    #[test]
    fn poly1_calculus_round_trip() {
        // (3x^2 + 2x) integrated then differentiated is unchanged.
        let p: Poly1<f64> = Poly1::from_coeffs(vec![0.0, 2.0, 3.0]);
        assert_eq!(p.antideriv().deriv(), p);
        // integral of 3x^2 over [0,2] = 8, of 2x over [0,2] = 4
        assert_eq!(p.integral(&q_i64(0), &q_i64(2)), 12.0);
    }

    #[test]
    fn mpoly_mixed_partials_commute() {
        let x = MPoly::<f64>::monomial(0, 2, Cx::real(1.0));
        let y = MPoly::<f64>::monomial(1, 3, Cx::real(2.0));
        let p = x.mul(&y).add(&MPoly::monomial(2, 1, Cx::real(-1.0)));
        assert_eq!(p.deriv(0).deriv(1), p.deriv(1).deriv(0));
    }

    #[test]
    fn mpoly_integral_matches_by_hand() {
        // x*y over x in [0,1] gives y/2
        let p = MPoly::<f64>::monomial(0, 1, Cx::real(1.0))
            .mul(&MPoly::monomial(1, 1, Cx::real(1.0)));
        let i = p.integral_var(0, &q_i64(0), &q_i64(1));
        let expect = MPoly::monomial(1, 1, Cx::real(0.5));
        assert_eq!(i, expect);
        let _ = q_ratio(1, 2);
    }
}
