//! Finite Fourier sums on a circle direction of unit circumference.
//!
//! A function on the circle is a finite map from integer mode `k` to a complex
//! coefficient of `exp(2 pi i k x)`. Real functions satisfy the reality
//! condition `c[-k] = conj(c[k])`. Differentiation multiplies mode `k` by
//! `2 pi i k`, which is where the circle constant enters the exact scalar.

use crate::scalar::{Cx, Q, Scalar, q_i64, q_to_f64};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Debug)]
pub struct FourierPoly<S: Scalar> {
    pub modes: BTreeMap<i64, Cx<S>>,
}

impl<S: Scalar> FourierPoly<S> {
    pub fn zero() -> Self {
        FourierPoly { modes: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut m = BTreeMap::new();
        let c = Cx::real(c);
        if !c.is_zero() {
            m.insert(0, c);
        }
        FourierPoly { modes: m }
    }

    pub fn mode(k: i64, c: Cx<S>) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        FourierPoly { modes: m }
    }

    /// `cos(2 pi k x)` as the real combination of modes `k` and `-k`.
    pub fn cosine(k: i64) -> Self {
        let half = Cx::real(S::one().div_q(&q_i64(2)));
        let mut m = BTreeMap::new();
        m.insert(k, half.clone());
        m.insert(-k, half);
        FourierPoly { modes: m }
    }

    /// `sin(2 pi k x)`.
    pub fn sine(k: i64) -> Self {
        // (e_k - e_{-k}) / (2i) = -i/2 e_k + i/2 e_{-k}
        let half_i = Cx::new(S::zero(), S::one().div_q(&q_i64(2)));
        let mut m = BTreeMap::new();
        m.insert(k, -half_i.clone());
        m.insert(-k, half_i);
        FourierPoly { modes: m }
    }

    fn prune(&mut self) {
        self.modes.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Reality condition: the coefficient at `-k` conjugates the one at `k`.
    pub fn is_real(&self) -> bool {
        self.modes
            .iter()
            .all(|(k, c)| match self.modes.get(&-k) {
                Some(d) => *d == c.conj(),
                None => c.is_zero(),
            })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.modes {
            let e = out.modes.entry(*k).or_insert_with(Cx::zero);
            *e = e.clone() + c.clone();
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> Self {
        FourierPoly {
            modes: self.modes.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = FourierPoly::zero();
        for (k1, c1) in &self.modes {
            for (k2, c2) in &rhs.modes {
                let e = out.modes.entry(k1 + k2).or_insert_with(Cx::zero);
                *e = e.clone() + c1.clone() * c2.clone();
            }
        }
        out.prune();
        out
    }

    pub fn scale(&self, s: &Cx<S>) -> Self {
        let mut out = FourierPoly {
            modes: self
                .modes
                .iter()
                .map(|(k, c)| (*k, c.clone() * s.clone()))
                .collect(),
        };
        out.prune();
        out
    }

    /// Derivative: mode `k` picks up the factor `2 pi i k`.
    pub fn deriv(&self) -> Self {
        let mut out = FourierPoly::zero();
        for (k, c) in &self.modes {
            if *k == 0 {
                continue;
            }
            let factor = Cx::new(S::zero(), S::pi() * S::from_i64(2 * *k));
            out.modes.insert(*k, c.clone() * factor);
        }
        out.prune();
        out
    }

    /// Integral over the circle: the zero-mode coefficient (circumference one).
    pub fn integral(&self) -> Cx<S> {
        self.modes.get(&0).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn conj(&self) -> Self {
        FourierPoly {
            modes: self.modes.iter().map(|(k, c)| (-k, c.conj())).collect(),
        }
    }

    /// Numeric evaluation for plots and float-mode residuals.
    pub fn eval_f64(&self, x: &Q) -> (f64, f64) {
        let xf = q_to_f64(x);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in &self.modes {
            let phase = 2.0 * std::f64::consts::PI * (*k as f64) * xf;
            let (s, cph) = phase.sin_cos();
            let cr = c.re.to_f64();
            let ci = c.im.to_f64();
            re += cr * cph - ci * s;
            im += cr * s + ci * cph;
        }
        (re, im)
    }
}
