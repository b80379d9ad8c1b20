//! CCR dg-star-algebra on a finite declared set of linear observables.
//!
//! Elements are finite complex combinations of normal-ordered words over the
//! generator set; multiplying concatenates and rewrites out-of-order adjacent
//! pairs through the graded commutation relation, whose defect is `i` times
//! the unshifted Poisson pairing of the two generators. The ascending-index
//! words form a PBW-style basis, rewriting is confluent, and the differential
//! extends the de Rham differential through the graded Leibniz rule.

use crate::forms::Form;
use crate::linalg;
use crate::poisson::Pairing;
use crate::scalar::{Cx, Scalar, q_ratio};
use std::collections::BTreeMap;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CcrError {
    #[error("generator labels must be unique: {0}")]
    DuplicateLabel(String),
    #[error("generator set mismatch")]
    SetMismatch,
    #[error("generator set not d-closed: {0}")]
    NotDClosed(String),
    #[error("not a Poisson morphism: pairing mismatch at generators {0} and {1}")]
    NotPoisson(String, String),
    #[error("pairing matrix is not graded antisymmetric at {0}, {1}")]
    NotAntisymmetric(String, String),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug)]
pub struct Generator<S: Scalar> {
    pub label: String,
    pub form: Form<S>,
    pub degree: i64,
}

/// Finite generator window of a CCR algebra: observables, their cohomological
/// degrees, the pairing matrix driving the commutation relations, and the
/// matrix of the differential on the generator span.
pub struct GeneratorSet<S: Scalar> {
    pub gens: Vec<Generator<S>>,
    pub pairing: Vec<Vec<Cx<S>>>,
    /// Differential on the generator span; `None` for relation-only windows
    /// whose generators are not d-closed.
    pub d_matrix: Option<Vec<Vec<Cx<S>>>>,
    /// Identity token distinguishing algebras over different windows.
    token: u64,
}

static TOKEN: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(1);

impl<S: Scalar> GeneratorSet<S> {
    /// Build the window: unique labels, pairing matrix with graded
    /// antisymmetry, and the differential expressed inside the span.
    pub fn new(
        pairing: &Pairing,
        gens: Vec<(String, Form<S>)>,
        tol: f64,
    ) -> Result<Self, CcrError> {
        Self::build(pairing, gens, tol, true)
    }

    /// Window without a differential: product, star and commutators only.
    pub fn new_for_relations(
        pairing: &Pairing,
        gens: Vec<(String, Form<S>)>,
        tol: f64,
    ) -> Result<Self, CcrError> {
        Self::build(pairing, gens, tol, false)
    }

    /// Window over a complex concentrated in a single degree, where the
    /// complex differential vanishes identically.
    pub fn new_with_trivial_differential(
        pairing: &Pairing,
        gens: Vec<(String, Form<S>)>,
        tol: f64,
    ) -> Result<Self, CcrError> {
        let mut set = Self::build(pairing, gens, tol, false)?;
        let n = set.gens.len();
        set.d_matrix = Some(vec![vec![Cx::zero(); n]; n]);
        Ok(set)
    }

    fn build(
        pairing: &Pairing,
        gens: Vec<(String, Form<S>)>,
        tol: f64,
        with_differential: bool,
    ) -> Result<Self, CcrError> {
        let mut labels = std::collections::BTreeSet::new();
        for (l, _) in &gens {
            if !labels.insert(l.clone()) {
                return Err(CcrError::DuplicateLabel(l.clone()));
            }
        }
        let gens: Vec<Generator<S>> = gens
            .into_iter()
            .map(|(label, form)| {
                let degree = form.coh_degree();
                Generator { label, form, degree }
            })
            .collect();
        let n = gens.len();
        let forms: Vec<&Form<S>> = gens.iter().map(|g| &g.form).collect();
        let matrix = pairing
            .pairing_matrix(&forms)
            .map_err(|e| CcrError::Other(e.to_string()))?;
        for i in 0..n {
            for j in 0..n {
                let sign = if (gens[i].degree * gens[j].degree).rem_euclid(2) == 0 {
                    Cx::one()
                } else {
                    -Cx::one()
                };
                let defect = matrix[i][j].clone() + sign * matrix[j][i].clone();
                let ok = if S::EXACT { defect.is_zero() } else { defect.abs_f64() <= tol };
                if !ok {
                    return Err(CcrError::NotAntisymmetric(
                        gens[i].label.clone(),
                        gens[j].label.clone(),
                    ));
                }
            }
        }
        // differential on the span
        let d_matrix = if with_differential {
            let mut dm = vec![vec![Cx::zero(); n]; n];
            for i in 0..n {
                let image = gens[i].form.d();
                if image.is_zero() {
                    continue;
                }
                let mut all: Vec<&Form<S>> = forms.clone();
                all.push(&image);
                let flat = crate::complexes::flatten_forms(&all);
                let coords = linalg::express_in_span(&flat[..n], &flat[n])
                    .ok_or_else(|| CcrError::NotDClosed(gens[i].label.clone()))?;
                for (j, c) in coords.into_iter().enumerate() {
                    dm[i][j] = c
                        .to_cx()
                        .ok_or_else(|| CcrError::NotDClosed(gens[i].label.clone()))?;
                }
            }
            Some(dm)
        } else {
            None
        };
        let token = TOKEN.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        Ok(GeneratorSet { gens, pairing: matrix, d_matrix, token })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    fn degree_of(&self, i: u32) -> i64 {
        self.gens[i as usize].degree
    }

    fn word_degree(&self, w: &[u32]) -> i64 {
        w.iter().map(|i| self.degree_of(*i)).sum()
    }
}

/// Finite combination of normal-ordered words; the empty word is the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct CcrElement<S: Scalar> {
    pub terms: BTreeMap<Vec<u32>, Cx<S>>,
    token: u64,
}

impl<S: Scalar> CcrElement<S> {
    pub fn zero(set: &GeneratorSet<S>) -> Self {
        CcrElement { terms: BTreeMap::new(), token: set.token }
    }

    pub fn unit(set: &GeneratorSet<S>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![], Cx::one());
        CcrElement { terms, token: set.token }
    }

    pub fn generator(set: &GeneratorSet<S>, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![i as u32], Cx::one());
        CcrElement { terms, token: set.token }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Cx<S>) -> Self {
        let mut out = CcrElement {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x.clone() * c.clone()))
                .collect(),
            token: self.token,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, CcrError> {
        if self.token != rhs.token {
            return Err(CcrError::SetMismatch);
        }
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            let e = out.terms.entry(w.clone()).or_insert_with(Cx::zero);
            *e = e.clone() + c.clone();
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, CcrError> {
        self.add(&rhs.scale(&-Cx::<S>::one()))
    }

    pub fn residual_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }
}

/// Rewrite one raw word into normal order over the set.
fn normal_order<S: Scalar>(
    set: &GeneratorSet<S>,
    word: &[u32],
    coeff: Cx<S>,
) -> BTreeMap<Vec<u32>, Cx<S>> {
    let mut out: BTreeMap<Vec<u32>, Cx<S>> = BTreeMap::new();
    let mut stack: Vec<(Vec<u32>, Cx<S>)> = vec![(word.to_vec(), coeff)];
    'outer: while let Some((w, c)) = stack.pop() {
        for k in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[k], w[k + 1]);
            if a > b {
                // x_a x_b = (-1)^{|a||b|} x_b x_a + i tau(a, b) 1
                let sign = if (set.degree_of(a) * set.degree_of(b)).rem_euclid(2) == 0 {
                    Cx::one()
                } else {
                    -Cx::one()
                };
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                stack.push((swapped, c.clone() * sign));
                let tau = set.pairing[a as usize][b as usize].clone();
                if !tau.is_zero() {
                    let mut reduced = w.clone();
                    reduced.remove(k + 1);
                    reduced.remove(k);
                    stack.push((reduced, c.clone() * Cx::<S>::i() * tau));
                }
                continue 'outer;
            }
            if a == b && set.degree_of(a).rem_euclid(2) == 1 {
                // odd square: x x = (i/2) tau(x, x) 1
                let tau = set.pairing[a as usize][a as usize].clone();
                if !tau.is_zero() {
                    let mut reduced = w.clone();
                    reduced.remove(k + 1);
                    reduced.remove(k);
                    let half_i = Cx::<S>::i().scale_q(&q_ratio(1, 2));
                    stack.push((reduced, c * half_i * tau));
                }
                continue 'outer;
            }
        }
        let e = out.entry(w).or_insert_with(Cx::zero);
        *e = e.clone() + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Graded product by concatenation and confluent rewriting.
pub fn product<S: Scalar>(
    set: &GeneratorSet<S>,
    a: &CcrElement<S>,
    b: &CcrElement<S>,
) -> Result<CcrElement<S>, CcrError> {
    if a.token != set.token || b.token != set.token {
        return Err(CcrError::SetMismatch);
    }
    let mut out = CcrElement::zero(set);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            for (word, c) in normal_order(set, &w, ca.clone() * cb.clone()) {
                let e = out.terms.entry(word).or_insert_with(Cx::zero);
                *e = e.clone() + c;
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Graded commutator `a b - (-1)^{|a||b|} b a` for homogeneous arguments.
pub fn graded_commutator<S: Scalar>(
    set: &GeneratorSet<S>,
    a: &CcrElement<S>,
    b: &CcrElement<S>,
) -> Result<CcrElement<S>, CcrError> {
    let da: i64 = a
        .terms
        .keys()
        .next()
        .map(|w| set.word_degree(w))
        .unwrap_or(0);
    let db: i64 = b
        .terms
        .keys()
        .next()
        .map(|w| set.word_degree(w))
        .unwrap_or(0);
    let ab = product(set, a, b)?;
    let ba = product(set, b, a)?;
    let sign = if (da * db).rem_euclid(2) == 0 {
        -Cx::<S>::one()
    } else {
        Cx::<S>::one()
    };
    ab.add(&ba.scale(&sign))
}

/// Derivation extending the de Rham differential on generators through the
/// graded Leibniz rule.
pub fn differential<S: Scalar>(
    set: &GeneratorSet<S>,
    a: &CcrElement<S>,
) -> Result<CcrElement<S>, CcrError> {
    if a.token != set.token {
        return Err(CcrError::SetMismatch);
    }
    let d_matrix = set
        .d_matrix
        .as_ref()
        .ok_or_else(|| CcrError::NotDClosed("window built without a differential".into()))?;
    let mut out = CcrElement::zero(set);
    for (w, c) in &a.terms {
        let mut sign_acc = 0i64;
        for (k, gi) in w.iter().enumerate() {
            let row = &d_matrix[*gi as usize];
            for (j, coeff) in row.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut word = w.clone();
                word[k] = j as u32;
                let sign = if sign_acc.rem_euclid(2) == 0 {
                    Cx::one()
                } else {
                    -Cx::<S>::one()
                };
                for (nw, nc) in
                    normal_order(set, &word, c.clone() * coeff.clone() * sign)
                {
                    let e = out.terms.entry(nw).or_insert_with(Cx::zero);
                    *e = e.clone() + nc;
                }
            }
            sign_acc += set.degree_of(*gi);
        }
    }
    out.prune();
    Ok(out)
}

/// Conjugate-linear star: generators self-adjoint, words reversed with the
/// Koszul reversal sign `(-1)^(k(k-1)/2)` for `k` odd letters, coefficients
/// conjugated. The sign is forced: without it the commutation ideal is not
/// star-closed once odd generators pair nontrivially, so the plain reversal
/// does not descend to the quotient.
pub fn star<S: Scalar>(set: &GeneratorSet<S>, a: &CcrElement<S>) -> Result<CcrElement<S>, CcrError> {
    if a.token != set.token {
        return Err(CcrError::SetMismatch);
    }
    let mut out = CcrElement::zero(set);
    for (w, c) in &a.terms {
        let mut rev = w.clone();
        rev.reverse();
        let odd = w
            .iter()
            .filter(|i| set.degree_of(**i).rem_euclid(2) == 1)
            .count() as i64;
        let sign = if (odd * (odd - 1) / 2).rem_euclid(2) == 0 {
            Cx::one()
        } else {
            -Cx::<S>::one()
        };
        for (nw, nc) in normal_order(set, &rev, c.conj() * sign.clone()) {
            let e = out.terms.entry(nw).or_insert_with(Cx::zero);
            *e = e.clone() + nc;
        }
    }
    out.prune();
    Ok(out)
}

/// Algebra morphism induced by a cochain map on observables; construction
/// checks that generators map into the target span and that the pairings are
/// intertwined.
pub struct CcrMorphism<S: Scalar> {
    pub images: Vec<CcrElement<S>>,
    src_token: u64,
}

impl<S: Scalar> CcrMorphism<S> {
    pub fn new(
        map: impl Fn(&Form<S>) -> Result<Form<S>, crate::forms::FormError>,
        src: &GeneratorSet<S>,
        src_pairing: &Pairing,
        tgt: &GeneratorSet<S>,
        tgt_pairing: &Pairing,
        tol: f64,
    ) -> Result<Self, CcrError> {
        let n = src.len();
        let m = tgt.len();
        let tgt_forms: Vec<&Form<S>> = tgt.gens.iter().map(|g| &g.form).collect();
        let mut images = Vec::with_capacity(n);
        let mut image_coords: Vec<Vec<Cx<S>>> = Vec::with_capacity(n);
        for g in &src.gens {
            let img = map(&g.form).map_err(|e| CcrError::Other(e.to_string()))?;
            if img.is_zero() {
                images.push(CcrElement::zero(tgt));
                image_coords.push(vec![Cx::zero(); m]);
                continue;
            }
            let mut all = tgt_forms.clone();
            all.push(&img);
            let flat = crate::complexes::flatten_forms(&all);
            let coords = linalg::express_in_span(&flat[..m], &flat[m]).ok_or_else(|| {
                CcrError::Other(format!(
                    "image of generator {} leaves the target span",
                    g.label
                ))
            })?;
            let mut elem = CcrElement::zero(tgt);
            let mut cvec = Vec::with_capacity(m);
            for (j, c) in coords.into_iter().enumerate() {
                let c = c.to_cx().ok_or_else(|| {
                    CcrError::Other("image coefficient leaves the scalar ring".into())
                })?;
                if !c.is_zero() {
                    elem = elem
                        .add(&CcrElement::generator(tgt, j).scale(&c))
                        .expect("same token");
                }
                cvec.push(c);
            }
            images.push(elem);
            image_coords.push(cvec);
        }
        // pairing intertwining on generator pairs
        let src_forms: Vec<&Form<S>> = src.gens.iter().map(|g| &g.form).collect();
        let src_matrix = src_pairing
            .pairing_matrix(&src_forms)
            .map_err(|e| CcrError::Other(e.to_string()))?;
        let tgt_matrix = tgt_pairing
            .pairing_matrix(&tgt_forms)
            .map_err(|e| CcrError::Other(e.to_string()))?;
        for i in 0..n {
            for j in 0..n {
                let lhs = src_matrix[i][j].clone();
                let mut rhs = Cx::zero();
                for (k, ck) in image_coords[i].iter().enumerate() {
                    for (l, cl) in image_coords[j].iter().enumerate() {
                        if ck.is_zero() || cl.is_zero() {
                            continue;
                        }
                        rhs = rhs + ck.clone() * cl.clone() * tgt_matrix[k][l].clone();
                    }
                }
                let defect = lhs - rhs;
                let ok = if S::EXACT { defect.is_zero() } else { defect.abs_f64() <= tol };
                if !ok {
                    return Err(CcrError::NotPoisson(
                        src.gens[i].label.clone(),
                        src.gens[j].label.clone(),
                    ));
                }
            }
        }
        Ok(CcrMorphism { images, src_token: src.token })
    }

    /// Transport an element along the morphism.
    pub fn apply(
        &self,
        tgt: &GeneratorSet<S>,
        elem: &CcrElement<S>,
    ) -> Result<CcrElement<S>, CcrError> {
        if elem.token != self.src_token {
            return Err(CcrError::SetMismatch);
        }
        let mut out = CcrElement::zero(tgt);
        for (w, c) in &elem.terms {
            let mut acc = CcrElement::unit(tgt).scale(c);
            for gi in w {
                acc = product(tgt, &acc, &self.images[*gi as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{AxisDesc, CoeffField, Factor1D};
    use crate::fourier::FourierPoly;
    use crate::geometry::{Chirality, Geometry, SpaceId};
    use crate::poisson::PairingKind;
    use crate::scalar::{Exact, q_i64};
    use crate::spline::unit_bump;
    use rand::Rng;
    use rand::SeedableRng;

    /// A d-closed mixed-degree window of bulk observables on the half-space:
    /// pairs (one-form, its differential) plus top forms.
    fn window(geom: &Geometry) -> (Pairing, GeneratorSet<Exact>) {
        let spec = geom.space(SpaceId::Bulk);
        let domains = spec.domains();
        let mut gens: Vec<(String, Form<Exact>)> = Vec::new();
        for (idx, win) in [(-3i64, -1i64), (-1, 1), (1, 3)].iter().enumerate() {
            let c = CoeffField::tensor(
                &domains,
                &[
                    Factor1D::Spline(unit_bump(&q_i64(win.0), &q_i64(win.1))),
                    Factor1D::Spline(unit_bump(&q_i64(-2), &q_i64(2))),
                    Factor1D::Spline(unit_bump(&q_ratio(1, 4), &q_i64(2))),
                ],
            );
            let mut comps = std::collections::BTreeMap::new();
            comps.insert(0b001u8, c);
            let a = Form::from_components(spec.clone(), 1, 2, comps);
            gens.push((format!("a{idx}"), a.clone()));
            gens.push((format!("da{idx}"), a.d()));
        }
        for (idx, win) in [(-2i64, 0i64), (0, 2)].iter().enumerate() {
            let c = CoeffField::tensor(
                &domains,
                &[
                    Factor1D::Spline(unit_bump(&q_i64(win.0), &q_i64(win.1))),
                    Factor1D::Spline(unit_bump(&q_i64(win.0 - 1), &q_i64(win.1 + 1))),
                    Factor1D::Spline(unit_bump(&q_ratio(1, 2), &q_ratio(3, 2))),
                ],
            );
            let mut comps = std::collections::BTreeMap::new();
            comps.insert(0b111u8, c);
            gens.push((format!("t{idx}"), Form::from_components(spec.clone(), 3, 2, comps)));
        }
        let pairing = Pairing::new(PairingKind::TauZero, geom.clone());
        let set = GeneratorSet::new(&pairing, gens, 0.0).unwrap();
        (pairing, set)
    }

    use crate::scalar::q_ratio;

    #[test]
    fn commutation_relations_reproduce_the_pairing() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (_, set) = window(&geom);
        let mut nonzero = 0;
        for i in 0..set.len() {
            for j in 0..set.len() {
                let a = CcrElement::generator(&set, i);
                let b = CcrElement::generator(&set, j);
                let comm = graded_commutator(&set, &a, &b).unwrap();
                let expect = CcrElement::unit(&set)
                    .scale(&(Cx::<Exact>::i() * set.pairing[i][j].clone()));
                assert!(comm.sub(&expect).unwrap().is_zero(), "pair {i},{j}");
                if !set.pairing[i][j].is_zero() {
                    nonzero += 1;
                }
            }
        }
        assert!(nonzero > 0, "window must exercise nontrivial relations");
    }

    #[test]
    fn unit_is_neutral() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (_, set) = window(&geom);
        let a = CcrElement::generator(&set, 0);
        let one = CcrElement::unit(&set);
        assert_eq!(product(&set, &a, &one).unwrap(), a);
        assert_eq!(product(&set, &one, &a).unwrap(), a);
    }

    #[test]
    fn rewriting_is_confluent_and_associative() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (_, set) = window(&geom);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let len = rng.gen_range(2..5);
            let word: Vec<u32> = (0..len)
                .map(|_| rng.gen_range(0..set.len() as u32))
                .collect();
            // associativity through both association orders
            let factors: Vec<CcrElement<Exact>> = word
                .iter()
                .map(|i| CcrElement::generator(&set, *i as usize))
                .collect();
            let mut left = factors[0].clone();
            for f in &factors[1..] {
                left = product(&set, &left, f).unwrap();
            }
            let mut right = factors.last().unwrap().clone();
            for f in factors[..factors.len() - 1].iter().rev() {
                right = product(&set, f, &right).unwrap();
            }
            assert!(left.sub(&right).unwrap().is_zero(), "word {word:?}");
            // confluence: rewriting the raw word directly agrees
            let direct = normal_order(&set, &word, Cx::one());
            let mut direct_elem = CcrElement::zero(&set);
            direct_elem.terms = direct;
            assert!(left.sub(&direct_elem).unwrap().is_zero());
        }
    }

    #[test]
    fn differential_squares_to_zero_and_leibniz() {
        let geom = Geometry::half_space(Chirality::Minus);
        let (_, set) = window(&geom);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let len = rng.gen_range(1..4);
            let word: Vec<u32> = (0..len)
                .map(|_| rng.gen_range(0..set.len() as u32))
                .collect();
            let mut elem = CcrElement::unit(&set);
            for i in &word {
                elem = product(&set, &elem, &CcrElement::generator(&set, *i as usize)).unwrap();
            }
            let dd = differential(&set, &differential(&set, &elem).unwrap()).unwrap();
            assert!(dd.is_zero(), "word {word:?}");
        }
        // Leibniz on generator pairs
        for i in 0..set.len() {
            for j in 0..set.len() {
                let a = CcrElement::generator(&set, i);
                let b = CcrElement::generator(&set, j);
                let ab = product(&set, &a, &b).unwrap();
                let lhs = differential(&set, &ab).unwrap();
                let da_b = product(&set, &differential(&set, &a).unwrap(), &b).unwrap();
                let sign = if set.gens[i].degree.rem_euclid(2) == 0 {
                    Cx::<Exact>::one()
                } else {
                    -Cx::<Exact>::one()
                };
                let a_db = product(&set, &a, &differential(&set, &b).unwrap())
                    .unwrap()
                    .scale(&sign);
                let rhs = da_b.add(&a_db).unwrap();
                assert!(lhs.sub(&rhs).unwrap().is_zero(), "pair {i},{j}");
            }
        }
    }

    #[test]
    fn star_is_an_antihomomorphic_involution() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (_, set) = window(&geom);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        assert_eq!(star(&set, &CcrElement::unit(&set)).unwrap(), CcrElement::unit(&set));
        for _ in 0..40 {
            // homogeneous words so the graded antihomomorphism sign is sharp
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let len = rng.gen_range(1..4);
                let mut word = Vec::new();
                let mut e = CcrElement::unit(&set);
                for _ in 0..len {
                    let i = rng.gen_range(0..set.len());
                    word.push(i);
                    e = product(&set, &e, &CcrElement::generator(&set, i)).unwrap();
                }
                let deg: i64 = word.iter().map(|i| set.gens[*i].degree).sum();
                let e = e.scale(&Cx::new(
                    Exact::from_i64(rng.gen_range(-3..4)),
                    Exact::from_i64(rng.gen_range(1..4)),
                ));
                (e, deg)
            };
            let (a, da) = mk(&mut rng);
            let (b, db) = mk(&mut rng);
            // involution
            let ss = star(&set, &star(&set, &a).unwrap()).unwrap();
            assert!(ss.sub(&a).unwrap().is_zero());
            // graded antihomomorphism: (ab)* = (-1)^{|a||b|} b* a*
            let lhs = star(&set, &product(&set, &a, &b).unwrap()).unwrap();
            let sign = if (da * db).rem_euclid(2) == 0 {
                Cx::<Exact>::one()
            } else {
                -Cx::<Exact>::one()
            };
            let rhs = product(&set, &star(&set, &b).unwrap(), &star(&set, &a).unwrap())
                .unwrap()
                .scale(&sign);
            assert!(lhs.sub(&rhs).unwrap().is_zero());
        }
    }

    #[test]
    fn star_descends_to_the_quotient() {
        // star of a rewritten word equals the rewrite of the starred word;
        // this is exactly star-closure of the commutation ideal
        let geom = Geometry::half_space(Chirality::Plus);
        let (_, set) = window(&geom);
        for i in 0..set.len() {
            for j in 0..set.len() {
                let a = CcrElement::generator(&set, i);
                let b = CcrElement::generator(&set, j);
                let ab = product(&set, &a, &b).unwrap();
                let star_ab = star(&set, &ab).unwrap();
                let sign = if (set.gens[i].degree * set.gens[j].degree).rem_euclid(2) == 0 {
                    Cx::<Exact>::one()
                } else {
                    -Cx::<Exact>::one()
                };
                let ba = product(&set, &b, &a).unwrap().scale(&sign);
                assert!(star_ab.sub(&ba).unwrap().is_zero(), "pair {i},{j}");
            }
        }
    }

    #[test]
    fn transport_along_the_quotient_pushforward() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (src_pairing, src) = window(&geom);
        // target: pushforwards of the source generators
        let tgt_gens: Vec<(String, Form<Exact>)> = src
            .gens
            .iter()
            .filter(|g| !crate::reduction::pi_star(&geom, &g.form).unwrap().is_zero())
            .map(|g| {
                (
                    format!("p_{}", g.label),
                    crate::reduction::pi_star(&geom, &g.form).unwrap(),
                )
            })
            .collect();
        let tgt_pairing = Pairing::new(PairingKind::SigmaZero, geom.clone());
        let tgt = GeneratorSet::new(&tgt_pairing, tgt_gens, 0.0).unwrap();
        let morphism = CcrMorphism::new(
            |f| crate::reduction::pi_star(&geom, f),
            &src,
            &src_pairing,
            &tgt,
            &tgt_pairing,
            0.0,
        )
        .unwrap();
        // products are preserved on a sample pair with nonzero relation
        let a = CcrElement::generator(&src, 0);
        let b = CcrElement::generator(&src, src.len() - 1);
        let ab = product(&src, &a, &b).unwrap();
        let lhs = morphism.apply(&tgt, &ab).unwrap();
        let rhs = product(
            &tgt,
            &morphism.apply(&tgt, &a).unwrap(),
            &morphism.apply(&tgt, &b).unwrap(),
        )
        .unwrap();
        assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn identity_morphism_transports_identically() {
        let geom = Geometry::half_space(Chirality::Plus);
        let (pairing, set) = window(&geom);
        let id = CcrMorphism::new(
            |f| Ok(f.clone()),
            &set,
            &pairing,
            &set,
            &pairing,
            0.0,
        )
        .unwrap();
        let a = CcrElement::generator(&set, 1);
        let b = CcrElement::generator(&set, 4);
        let ab = product(&set, &a, &b).unwrap();
        let back = id.apply(&set, &ab).unwrap();
        assert!(back.sub(&ab).unwrap().is_zero());
    }
}
