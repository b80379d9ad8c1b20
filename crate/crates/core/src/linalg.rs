//! Exact linear algebra over the coefficient ring's fraction field.
//!
//! Vectors come from flattening forms on a common grid. Entries are complex
//! scalars; elimination runs on fractions with a real denominator (complex
//! division via the conjugate), reduced by a pi-polynomial gcd in the exact
//! backend so sizes stay small. Ranks and span expression are exact for the
//! rational backend and threshold-based for `f64`.

use crate::scalar::{Cx, Scalar};

/// Fraction with complex numerator and real nonzero denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct Frac<S: Scalar> {
    pub num: Cx<S>,
    pub den: S,
}

impl<S: Scalar> Frac<S> {
    pub fn from_cx(c: Cx<S>) -> Self {
        Frac { num: c, den: S::one() }
    }

    pub fn zero() -> Self {
        Frac { num: Cx::zero(), den: S::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.re.is_negligible() && self.num.im.is_negligible()
    }

    fn reduce(self) -> Self {
        let (re, im, den) = S::frac_reduce(self.num.re, self.num.im, self.den);
        Frac { num: Cx::new(re, im), den }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = Cx::new(
            self.num.re.clone() * rhs.den.clone() + rhs.num.re.clone() * self.den.clone(),
            self.num.im.clone() * rhs.den.clone() + rhs.num.im.clone() * self.den.clone(),
        );
        Frac { num, den: self.den.clone() * rhs.den.clone() }.reduce()
    }

    pub fn neg(&self) -> Self {
        Frac { num: -self.num.clone(), den: self.den.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Frac {
            num: self.num.clone() * rhs.num.clone(),
            den: self.den.clone() * rhs.den.clone(),
        }
        .reduce()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (n/d)^-1 = d conj(n) / |n|^2
        let norm2 = self.num.re.clone() * self.num.re.clone()
            + self.num.im.clone() * self.num.im.clone();
        let num = self.num.conj() * Cx::real(self.den.clone());
        Some(Frac { num, den: norm2 }.reduce())
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    /// Back to a ring element when the denominator divides out.
    pub fn to_cx(&self) -> Option<Cx<S>> {
        Some(Cx::new(
            self.num.re.div_exact(&self.den)?,
            self.num.im.div_exact(&self.den)?,
        ))
    }

    fn abs_f64(&self) -> f64 {
        let d = self.den.abs_f64();
        if d == 0.0 {
            return f64::INFINITY;
        }
        self.num.abs_f64() / d
    }
}

/// Rescale a float-backed system so the fixed negligibility thresholds act
/// relative to the data scale; exact systems pass through unchanged.
fn prescale<S: Scalar>(rows: &mut [Vec<Cx<S>>]) {
    if S::EXACT {
        return;
    }
    let scale = rows
        .iter()
        .flatten()
        .map(|c| c.abs_f64())
        .fold(0.0f64, f64::max);
    if scale <= 1.0 || !scale.is_finite() {
        return;
    }
    let q = crate::scalar::Q::from_float(scale).unwrap_or_else(|| crate::scalar::q_i64(1));
    for row in rows.iter_mut() {
        for c in row.iter_mut() {
            *c = c.div_q(&q);
        }
    }
}

/// Matrix rank by fraction-field Gaussian elimination.
pub fn rank<S: Scalar>(rows: &[Vec<Cx<S>>]) -> usize {
    let mut rows = rows.to_vec();
    prescale(&mut rows);
    let mut m: Vec<Vec<Frac<S>>> = rows
        .iter()
        .map(|r| r.iter().map(|c| Frac::from_cx(c.clone())).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        // best pivot by magnitude (stability in the float backend)
        let mut best: Option<(usize, f64)> = None;
        for r in row..nrows {
            if !m[r][col].is_zero() {
                let a = m[r][col].abs_f64();
                if best.map_or(true, |(_, b)| a > b) {
                    best = Some((r, a));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        for r in (row + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&inv);
            for c in col..ncols {
                let delta = factor.mul(&m[row][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// Express `target` in the span of `basis` vectors (rows). Returns the
/// coordinates as fractions, or `None` when the target leaves the span.
pub fn express_in_span<S: Scalar>(
    basis: &[Vec<Cx<S>>],
    target: &[Cx<S>],
) -> Option<Vec<Frac<S>>> {
    let n = basis.len();
    let dim = target.len();
    // solve basis^T x = target by eliminating the (dim x (n+1)) augmented
    // system; a global rescaling keeps float thresholds relative
    let mut aug: Vec<Vec<Cx<S>>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Cx<S>> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    prescale(&mut aug);
    let mut m: Vec<Vec<Frac<S>>> = aug
        .into_iter()
        .map(|row| row.into_iter().map(Frac::from_cx).collect())
        .collect();
    let ncols = n + 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for r in row..dim {
            if !m[r][col].is_zero() {
                let a = m[r][col].abs_f64();
                if best.map_or(true, |(_, b)| a > b) {
                    best = Some((r, a));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        for c in col..ncols {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..dim {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..ncols {
                let delta = factor.mul(&m[row][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == dim {
            break;
        }
    }
    // consistency: rows without pivots must have zero RHS
    for r in row..dim {
        if !m[r][n].is_zero() {
            return None;
        }
    }
    let mut coords = vec![Frac::zero(); n];
    for (r, c) in pivots {
        coords[c] = m[r][n].clone();
    }
    Some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, q_i64};

    fn cq(n: i64) -> Cx<Exact> {
        Cx::from_q(&q_i64(n))
    }

    #[test]
    fn rank_of_singular_matrix() {
        let rows = vec![
            vec![cq(1), cq(2), cq(3)],
            vec![cq(2), cq(4), cq(6)],
            vec![cq(0), cq(1), cq(1)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn rank_with_pi_entries() {
        let pi = Cx::real(Exact::pi());
        let rows = vec![
            vec![pi.clone(), cq(1)],
            vec![pi.clone() * pi.clone(), pi.clone()],
        ];
        // second row is pi times the first
        assert_eq!(rank(&rows), 1);
    }

    #[test]
    fn express_solves_exactly() {
        let basis = vec![vec![cq(1), cq(0), cq(1)], vec![cq(0), cq(1), cq(1)]];
        let target = vec![cq(2), cq(3), cq(5)];
        let coords = express_in_span(&basis, &target).unwrap();
        assert_eq!(coords[0].to_cx().unwrap(), cq(2));
        assert_eq!(coords[1].to_cx().unwrap(), cq(3));
        // outside the span
        let bad = vec![cq(1), cq(0), cq(0)];
        assert!(express_in_span(&basis, &bad).is_none());
    }

    #[test]
    fn complex_pi_fraction_inverse() {
        let f = Frac::from_cx(Cx::new(Exact::pi(), Exact::one()));
        let inv = f.inv().unwrap();
        let prod = f.mul(&inv);
        assert_eq!(prod.to_cx().unwrap(), Cx::one());
    }
}
