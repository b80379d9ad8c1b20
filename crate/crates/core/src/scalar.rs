//! Scalar backends for coefficient arithmetic.
//!
//! Two interchangeable backends drive the whole calculus: [`Exact`], a sparse
//! polynomial in the circle constant pi with arbitrary-precision rational
//! coefficients (pi enters only through circle-direction derivatives and
//! pairings, and is never divided by), and plain `f64` for speed. Spline knots
//! and region endpoints are always exact rationals regardless of backend; the
//! backend only governs coefficient values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational number used for knots, region endpoints and exact coefficients.
pub type Q = BigRational;

/// Parse a rational from a `"p/q"` or `"p"` string.
pub fn q_from_str(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let d: BigInt = den.parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Q::new(n, d))
}

/// Format a rational as `"p/q"` (or `"p"` when the denominator is one).
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn q_i64(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Coefficient scalar used throughout the form calculus.
///
/// Implementations must form a commutative ring containing the rationals and a
/// distinguished element [`Scalar::pi`]. Exact backends must make `is_zero`
/// decidable and exact.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(q: &Q) -> Self;
    fn from_i64(n: i64) -> Self;
    /// The circle constant, appearing via `d/dx exp(2 pi i k x)`.
    fn pi() -> Self;
    fn is_zero(&self) -> bool;
    /// Divide by a nonzero rational (always legal in both backends).
    fn div_q(&self, q: &Q) -> Self;
    /// Approximate magnitude, for residual reporting.
    fn abs_f64(&self) -> f64;
    /// Numeric value, for plotting and float-mode comparisons.
    fn to_f64(&self) -> f64;
    /// Exact ring division when the quotient exists (always for `f64`).
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    /// Reduce a complex fraction `(re + i im) / den` to a small normal form.
    fn frac_reduce(re: Self, im: Self, den: Self) -> (Self, Self, Self);
    /// Zero test with a fixed noise floor in the float backend.
    fn is_negligible(&self) -> bool;
    /// Bit-exact JSON image of the scalar.
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, String>;
    /// True for the exact backend: equality and `is_zero` are decidable.
    const EXACT: bool;
}

/// Sparse polynomial in pi with rational coefficients.
///
/// Since pi is transcendental, equality is coefficient-wise, which keeps every
/// identity check in the exact backend a finite exact computation.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Exact {
    /// Map from pi-power to nonzero rational coefficient.
    terms: BTreeMap<u32, Q>,
}

impl Exact {
    pub fn from_terms(terms: BTreeMap<u32, Q>) -> Self {
        let mut e = Exact { terms };
        e.prune();
        e
    }

    pub fn terms(&self) -> &BTreeMap<u32, Q> {
        &self.terms
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Rational part (pi-degree zero); `None` when a pi-power is present.
    pub fn as_q(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    fn leading(&self) -> Q {
        self.terms.values().next_back().cloned().unwrap_or_else(Q::zero)
    }

    /// Polynomial division with remainder by a nonzero divisor.
    pub fn div_rem(&self, rhs: &Exact) -> (Exact, Exact) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Exact::default();
        let ddeg = rhs.degree().unwrap();
        let dlead = rhs.leading();
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let c = rem.leading() / &dlead;
            let shift = rdeg - ddeg;
            let mut mono = BTreeMap::new();
            mono.insert(shift, c);
            let mono = Exact::from_terms(mono);
            quot = quot + mono.clone();
            rem = rem - mono * rhs.clone();
        }
        (quot, rem)
    }

    /// Monic gcd of two pi-polynomials.
    pub fn gcd(&self, rhs: &Exact) -> Exact {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.div_q(&lead)
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| match p {
                0 => q_to_string(c),
                1 => format!("{}*pi", q_to_string(c)),
                _ => format!("{}*pi^{}", q_to_string(c), p),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(mut self, rhs: Exact) -> Exact {
        for (p, c) in rhs.terms {
            let e = self.terms.entry(p).or_insert_with(Q::zero);
            *e += c;
        }
        self.prune();
        self
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        self + (-rhs)
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(mut self) -> Exact {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        let mut out: BTreeMap<u32, Q> = BTreeMap::new();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &rhs.terms {
                let e = out.entry(p1 + p2).or_insert_with(Q::zero);
                *e += c1 * c2;
            }
        }
        Exact::from_terms(out)
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Exact::default()
    }
    fn one() -> Self {
        Exact::from_q(&Q::one())
    }
    fn from_q(q: &Q) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q.clone());
        }
        Exact { terms }
    }
    fn from_i64(n: i64) -> Self {
        Exact::from_q(&q_i64(n))
    }
    fn pi() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(1, Q::one());
        Exact { terms }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn div_q(&self, q: &Q) -> Self {
        assert!(!q.is_zero(), "division by zero rational");
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c /= q.clone();
        }
        out
    }
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| q_to_f64(c) * std::f64::consts::PI.powi(*p as i32))
            .sum()
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        if r.is_zero() { Some(q) } else { None }
    }
    fn frac_reduce(re: Self, im: Self, den: Self) -> (Self, Self, Self) {
        let g = re.gcd(&im).gcd(&den);
        let (re, im, den) = if g.is_zero() {
            (re, im, den)
        } else {
            (
                re.div_exact(&g).unwrap(),
                im.div_exact(&g).unwrap(),
                den.div_exact(&g).unwrap(),
            )
        };
        // make the rational content of the denominator one
        let lead = den.leading();
        if lead.is_zero() || den.degree() != Some(0) {
            return (re, im, den);
        }
        (re.div_q(&lead), im.div_q(&lead), den.div_q(&lead))
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(p, c)| {
                    serde_json::json!([p, q_to_string(c)])
                })
                .collect(),
        )
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("expected a term array")?;
        let mut terms = BTreeMap::new();
        for t in arr {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or("expected [power, coeff]")?;
            let p = pair[0].as_u64().ok_or("bad pi power")? as u32;
            let c = q_from_str(pair[1].as_str().ok_or("coefficient must be a string")?)?;
            terms.insert(p, c);
        }
        Ok(Exact::from_terms(terms))
    }
    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn div_q(&self, q: &Q) -> Self {
        self / q_to_f64(q)
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 { None } else { Some(self / rhs) }
    }
    fn frac_reduce(re: Self, im: Self, den: Self) -> (Self, Self, Self) {
        if den == 0.0 {
            return (re, im, den);
        }
        (re / den, im / den, 1.0)
    }
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
    fn to_json(&self) -> serde_json::Value {
        // shortest-round-trip float formatting is bit-exact for finite values
        serde_json::json!(self)
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        v.as_f64().ok_or_else(|| "expected a number".into())
    }
    const EXACT: bool = false;
}

/// Complex number over a scalar backend.
#[derive(Clone, PartialEq, Debug)]
pub struct Cx<S: Scalar> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Cx<S> {
    pub fn new(re: S, im: S) -> Self {
        Cx { re, im }
    }
    pub fn zero() -> Self {
        Cx::new(S::zero(), S::zero())
    }
    pub fn one() -> Self {
        Cx::new(S::one(), S::zero())
    }
    pub fn i() -> Self {
        Cx::new(S::zero(), S::one())
    }
    pub fn real(s: S) -> Self {
        Cx::new(s, S::zero())
    }
    pub fn from_q(q: &Q) -> Self {
        Cx::real(S::from_q(q))
    }
    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn scale_q(&self, q: &Q) -> Self {
        Cx::new(
            self.re.clone() * S::from_q(q),
            self.im.clone() * S::from_q(q),
        )
    }
    pub fn div_q(&self, q: &Q) -> Self {
        Cx::new(self.re.div_q(q), self.im.div_q(q))
    }
    pub fn abs_f64(&self) -> f64 {
        self.re.abs_f64().max(self.im.abs_f64())
    }
}

impl<S: Scalar> Add for Cx<S> {
    type Output = Cx<S>;
    fn add(self, rhs: Cx<S>) -> Cx<S> {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<S: Scalar> Sub for Cx<S> {
    type Output = Cx<S>;
    fn sub(self, rhs: Cx<S>) -> Cx<S> {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<S: Scalar> Neg for Cx<S> {
    type Output = Cx<S>;
    fn neg(self) -> Cx<S> {
        Cx::new(-self.re, -self.im)
    }
}

impl<S: Scalar> Mul for Cx<S> {
    type Output = Cx<S>;
    fn mul(self, rhs: Cx<S>) -> Cx<S> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Cx::new(re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_arithmetic_is_exact() {
        let x = Exact::pi() * Exact::from_i64(2) + Exact::from_q(&q_ratio(1, 3));
        let y = x.clone() * x.clone();
        // (2 pi + 1/3)^2 = 4 pi^2 + 4/3 pi + 1/9
        let mut expect = BTreeMap::new();
        expect.insert(0, q_ratio(1, 9));
        expect.insert(1, q_ratio(4, 3));
        expect.insert(2, q_i64(4));
        assert_eq!(y, Exact::from_terms(expect));
    }

    #[test]
    fn rational_string_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12/36"] {
            let q = q_from_str(s).unwrap();
            let q2 = q_from_str(&q_to_string(&q)).unwrap();
            assert_eq!(q, q2);
        }
        assert!(q_from_str("1/0").is_err());
    }

    #[test]
    fn complex_multiplication() {
        let a: Cx<f64> = Cx::new(1.0, 2.0);
        let b: Cx<f64> = Cx::new(3.0, -1.0);
        let c = a * b;
        assert_eq!(c, Cx::new(5.0, 5.0));
    }
}
