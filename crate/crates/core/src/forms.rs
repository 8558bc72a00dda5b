//! Homogeneous forms in dense coefficient storage.
//!
//! Coefficients of a degree-t form in k variables are stored against the
//! monomials of [`monomial_basis`], which lists exponent tuples in
//! descending lexicographic order. That order is used everywhere a form is
//! stored or serialized, and it is also the coordinate order of
//! [`veronese`].

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, Matrix};

/// Exponent tuple `(d_1, ..., d_k)` of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(degrees: Vec<u32>) -> MultiIndex {
        MultiIndex(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(k + t - 1, t)`, the number of degree-t monomials in k variables.
pub fn monomial_count(k: usize, t: u32) -> usize {
    if k == 0 {
        return usize::from(t == 0);
    }
    binomial(k as u64 + t as u64 - 1, t as u64) as usize
}

/// All degree-t exponent tuples in k variables, descending lexicographic.
pub fn monomial_basis(k: usize, t: u32) -> Vec<MultiIndex> {
    fn fill(k: usize, t: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == k {
            prefix.push(t);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for d in (0..=t).rev() {
            prefix.push(d);
            fill(k, t - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(monomial_count(k, t));
    if k == 0 {
        if t == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    fill(k, t, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Monomial list with reverse lookup.
#[derive(Clone, Debug)]
pub struct Monomials {
    list: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl Monomials {
    pub fn new(k: usize, t: u32) -> Monomials {
        let list = monomial_basis(k, t);
        let position = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Monomials { list, position }
    }

    pub fn list(&self) -> &[MultiIndex] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.position.get(m).copied()
    }
}

fn check_len(x: &[Fe], k: usize) -> Result<()> {
    if x.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: x.len() });
    }
    Ok(())
}

/// `x^I` for every degree-t monomial, in canonical order. Accepts the zero vector.
fn monomial_values(field: &Field, x: &[Fe], t: u32) -> Vec<Fe> {
    let powers: Vec<Vec<Fe>> = x
        .iter()
        .map(|&xi| {
            let mut p = Vec::with_capacity(t as usize + 1);
            p.push(Fe::ONE);
            for d in 1..=t as usize {
                p.push(field.mul(p[d - 1], xi));
            }
            p
        })
        .collect();
    monomial_basis(x.len(), t)
        .iter()
        .map(|m| field.product(m.degrees().iter().enumerate().map(|(i, &d)| powers[i][d as usize])))
        .collect()
}

/// The degree-t Veronese image of a nonzero vector.
pub fn veronese(field: &Field, x: &[Fe], t: u32) -> Result<Vec<Fe>> {
    if x.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(monomial_values(field, x, t))
}

/// A form of degree `t` in `k` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    k: usize,
    t: u32,
    coeffs: Vec<Fe>,
}

/// A degree-1 [`HomogeneousForm`].
pub type LinearForm = HomogeneousForm;

impl HomogeneousForm {
    pub fn new(k: usize, t: u32, coeffs: Vec<Fe>) -> Result<HomogeneousForm> {
        check_len(&coeffs, monomial_count(k, t))?;
        Ok(HomogeneousForm { k, t, coeffs })
    }

    pub fn zero(k: usize, t: u32) -> HomogeneousForm {
        HomogeneousForm { k, t, coeffs: vec![Fe::ZERO; monomial_count(k, t)] }
    }

    /// The constant form 1 (degree 0).
    pub fn one(k: usize) -> HomogeneousForm {
        HomogeneousForm { k, t: 0, coeffs: vec![Fe::ONE] }
    }

    pub fn linear(coeffs: Vec<Fe>) -> LinearForm {
        HomogeneousForm { k: coeffs.len(), t: 1, coeffs }
    }

    /// The single variable `X_i` (0-based).
    pub fn variable(k: usize, i: usize) -> LinearForm {
        let mut c = vec![Fe::ZERO; k];
        c[i] = Fe::ONE;
        HomogeneousForm::linear(c)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Option<Fe> {
        Monomials::new(self.k, self.t).position(m).map(|i| self.coeffs[i])
    }

    pub fn evaluate(&self, field: &Field, x: &[Fe]) -> Result<Fe> {
        check_len(x, self.k)?;
        Ok(field.dot(&self.coeffs, &monomial_values(field, x, self.t)))
    }

    fn same_shape(&self, other: &HomogeneousForm) -> Result<()> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: other.k });
        }
        if self.t != other.t {
            return Err(Error::DimensionMismatch { expected: self.t as usize, got: other.t as usize });
        }
        Ok(())
    }

    pub fn add(&self, field: &Field, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.add(a, b)).collect();
        Ok(HomogeneousForm { k: self.k, t: self.t, coeffs })
    }

    pub fn sub(&self, field: &Field, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.sub(a, b)).collect();
        Ok(HomogeneousForm { k: self.k, t: self.t, coeffs })
    }

    pub fn scale(&self, field: &Field, c: Fe) -> HomogeneousForm {
        HomogeneousForm { k: self.k, t: self.t, coeffs: field.scale(c, &self.coeffs) }
    }

    pub fn mul(&self, field: &Field, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: other.k });
        }
        let left = monomial_basis(self.k, self.t);
        let right = monomial_basis(other.k, other.t);
        let target = Monomials::new(self.k, self.t + other.t);
        let mut coeffs = vec![Fe::ZERO; target.len()];
        for (a, ma) in self.coeffs.iter().zip(&left) {
            if a.is_zero() {
                continue;
            }
            for (b, mb) in other.coeffs.iter().zip(&right) {
                if b.is_zero() {
                    continue;
                }
                let sum = MultiIndex(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let pos = target.position(&sum).expect("degrees add up");
                coeffs[pos] = field.add(coeffs[pos], field.mul(*a, *b));
            }
        }
        Ok(HomogeneousForm { k: self.k, t: self.t + other.t, coeffs })
    }

    pub fn pow(&self, field: &Field, e: u32) -> HomogeneousForm {
        (0..e).fold(HomogeneousForm::one(self.k), |acc, _| acc.mul(field, self).expect("same k"))
    }

    /// Substitutes a linear form in `k'` variables for each of the `k` variables.
    pub fn compose_linear(&self, field: &Field, subs: &[LinearForm]) -> Result<HomogeneousForm> {
        if subs.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: subs.len() });
        }
        let inner_k = subs.first().map_or(0, |s| s.k);
        if subs.iter().any(|s| s.t != 1 || s.k != inner_k) {
            return Err(Error::Malformed("substitutions must be linear forms in a common set of variables".into()));
        }
        let powers: Vec<Vec<HomogeneousForm>> = subs
            .iter()
            .map(|s| {
                let mut p = vec![HomogeneousForm::one(inner_k)];
                for d in 1..=self.t as usize {
                    let next = p[d - 1].mul(field, s).expect("same k");
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = HomogeneousForm::zero(inner_k, self.t);
        for (c, m) in self.coeffs.iter().zip(monomial_basis(self.k, self.t)) {
            if c.is_zero() {
                continue;
            }
            let mut term = HomogeneousForm::one(inner_k).scale(field, *c);
            for (i, &d) in m.degrees().iter().enumerate() {
                term = term.mul(field, &powers[i][d as usize])?;
            }
            acc = acc.add(field, &term)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!({ "k": self.k, "t": self.t, "coeffs": field.vector_to_json(&self.coeffs) })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<HomogeneousForm> {
        let k = v["k"].as_u64().ok_or_else(|| Error::Malformed("form needs integer \"k\"".into()))? as usize;
        let t = v["t"].as_u64().ok_or_else(|| Error::Malformed("form needs integer \"t\"".into()))? as u32;
        let coeffs = field.vector_from_json(&v["coeffs"])?;
        HomogeneousForm::new(k, t, coeffs)
    }
}

/// Product of linear forms in `k` variables; the empty product is the constant 1.
pub fn product_linear_forms(field: &Field, k: usize, forms: &[LinearForm]) -> Result<HomogeneousForm> {
    forms.iter().try_fold(HomogeneousForm::one(k), |acc, f| {
        if f.t != 1 {
            return Err(Error::Malformed(format!("expected a linear form, got degree {}", f.t)));
        }
        acc.mul(field, f)
    })
}

/// Subspace of degree-t forms given by a canonical (reduced echelon) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSubspace {
    pub k: usize,
    pub t: u32,
    pub basis: Matrix,
}

impl FormSubspace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn forms(&self) -> Vec<HomogeneousForm> {
        self.basis.row_vecs().map(|r| HomogeneousForm { k: self.k, t: self.t, coeffs: r.to_vec() }).collect()
    }
}

/// Matrix whose rows are the degree-t Veronese images of `points`.
pub fn veronese_matrix<P: AsRef<[Fe]>>(field: &Field, k: usize, points: &[P], t: u32) -> Result<Matrix> {
    let rows = points
        .iter()
        .map(|p| {
            check_len(p.as_ref(), k)?;
            veronese(field, p.as_ref(), t)
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(monomial_count(k, t), &rows)
}

/// Φ_t: the degree-t forms vanishing on every point.
pub fn vanishing_subspace<P: AsRef<[Fe]>>(field: &Field, k: usize, points: &[P], t: u32) -> Result<FormSubspace> {
    let ns = veronese_matrix(field, k, points, t)?.nullspace(field);
    Ok(FormSubspace { k, t, basis: ns.basis })
}

pub fn vanishes_on<P: AsRef<[Fe]>>(field: &Field, f: &HomogeneousForm, points: &[P]) -> Result<bool> {
    for p in points {
        if !f.evaluate(field, p.as_ref())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn ints(f: &Field, v: &[i64]) -> Vec<Fe> {
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn monomial_order() {
        assert_eq!(
            monomial_basis(3, 2),
            vec![mi(&[2, 0, 0]), mi(&[1, 1, 0]), mi(&[1, 0, 1]), mi(&[0, 2, 0]), mi(&[0, 1, 1]), mi(&[0, 0, 2])]
        );
        assert_eq!(monomial_basis(2, 3), vec![mi(&[3, 0]), mi(&[2, 1]), mi(&[1, 2]), mi(&[0, 3])]);
        assert_eq!(monomial_basis(4, 0), vec![mi(&[0, 0, 0, 0])]);
        for k in 1..6 {
            for t in 0..5 {
                let b = monomial_basis(k, t);
                assert_eq!(b.len(), monomial_count(k, t));
                assert!(b.windows(2).all(|w| w[0] > w[1]));
                assert!(b.iter().all(|m| m.total() == t));
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let f7 = Field::new(7, 1, None).unwrap();
        // X1 X3 - X2^2 in order [X1^2, X1X2, X1X3, X2^2, X2X3, X3^2]
        let conic = HomogeneousForm::new(3, 2, ints(&f7, &[0, 0, 1, -1, 0, 0])).unwrap();
        assert_eq!(conic.evaluate(&f7, &ints(&f7, &[1, 2, 4])).unwrap(), Fe::ZERO);
        assert_eq!(conic.evaluate(&f7, &[Fe::ZERO; 3]).unwrap(), Fe::ZERO);
        assert!(matches!(conic.evaluate(&f7, &[Fe::ONE; 2]), Err(Error::DimensionMismatch { .. })));
        let f5 = Field::new(5, 1, None).unwrap();
        let sq = HomogeneousForm::new(3, 2, ints(&f5, &[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(sq.evaluate(&f5, &ints(&f5, &[3, 0, 0])).unwrap(), f5.from_int(4));
    }

    #[test]
    fn veronese_examples() {
        let f7 = Field::new(7, 1, None).unwrap();
        assert_eq!(veronese(&f7, &ints(&f7, &[1, 2, 3]), 2).unwrap(), ints(&f7, &[1, 2, 3, 4, 6, 2]));
        let x = ints(&f7, &[3, 0, 5, 1]);
        assert_eq!(veronese(&f7, &x, 1).unwrap(), x);
        for s in 0..7 {
            let v = veronese(&f7, &ints(&f7, &[1, s]), 3).unwrap();
            assert_eq!(v, ints(&f7, &[1, s, s * s, s * s * s]));
        }
        assert!(matches!(veronese(&f7, &[Fe::ZERO; 3], 2), Err(Error::ZeroVector)));
    }

    #[test]
    fn products_of_linear_forms() {
        let f5 = Field::new(5, 1, None).unwrap();
        let p =
            product_linear_forms(&f5, 3, &[HomogeneousForm::variable(3, 0), HomogeneousForm::variable(3, 2)]).unwrap();
        assert_eq!(p.coefficient(&mi(&[1, 0, 1])), Some(Fe::ONE));
        assert_eq!(p.coeffs().iter().filter(|c| !c.is_zero()).count(), 1);
        let a = HomogeneousForm::linear(ints(&f5, &[1, 1]));
        let b = HomogeneousForm::linear(ints(&f5, &[1, -1]));
        let p = product_linear_forms(&f5, 2, &[a, b]).unwrap();
        assert_eq!(p.coeffs(), ints(&f5, &[1, 0, -1]).as_slice());
        let empty = product_linear_forms(&f5, 3, &[]).unwrap();
        assert_eq!((empty.degree(), empty.coeffs()), (0, [Fe::ONE].as_slice()));
    }

    fn conic_points(f: &Field) -> Vec<Vec<Fe>> {
        let mut pts: Vec<Vec<Fe>> = f.elements().map(|s| vec![Fe::ONE, s, f.mul(s, s)]).collect();
        pts.push(vec![Fe::ZERO, Fe::ZERO, Fe::ONE]);
        pts
    }

    #[test]
    fn vanishing_subspace_dimensions() {
        let f5 = Field::new(5, 1, None).unwrap();
        let conic = conic_points(&f5);
        let phi = vanishing_subspace(&f5, 3, &conic, 2).unwrap();
        assert_eq!(phi.dim(), 1);
        // the single basis form is X1X3 - X2^2 normalised to a leading 1
        assert_eq!(phi.basis.row(0), ints(&f5, &[0, 0, 1, -1, 0, 0]).as_slice());
        let one = vanishing_subspace(&f5, 3, &[ints(&f5, &[1, 2, 3])], 1).unwrap();
        assert_eq!(one.dim(), 2);
        let f7 = Field::new(7, 1, None).unwrap();
        let mut cubic: Vec<Vec<Fe>> = f7.elements().map(|s| vec![Fe::ONE, s, f7.pow(s, 2), f7.pow(s, 3)]).collect();
        cubic.push(ints(&f7, &[0, 0, 0, 1]));
        let phi = vanishing_subspace(&f7, 4, &cubic, 2).unwrap();
        assert_eq!(phi.dim(), 3);
        for f in phi.forms() {
            assert!(vanishes_on(&f7, &f, &cubic).unwrap());
        }
    }

    #[test]
    fn vanishing_predicate() {
        let f5 = Field::new(5, 1, None).unwrap();
        let conic = conic_points(&f5);
        let form = HomogeneousForm::new(3, 2, ints(&f5, &[0, 0, 1, -1, 0, 0])).unwrap();
        assert!(vanishes_on(&f5, &form, &conic).unwrap());
        assert!(!vanishes_on(&f5, &HomogeneousForm::variable(3, 0), &conic).unwrap());
        assert!(vanishes_on(&f5, &HomogeneousForm::zero(3, 3), &conic).unwrap());
    }

    #[test]
    fn compose_linear_matches_evaluation() {
        let f = Field::new(7, 1, None).unwrap();
        let form = HomogeneousForm::new(3, 2, ints(&f, &[1, 2, 3, 4, 5, 6])).unwrap();
        let subs = vec![
            HomogeneousForm::linear(ints(&f, &[1, 2])),
            HomogeneousForm::linear(ints(&f, &[0, 3])),
            HomogeneousForm::linear(ints(&f, &[5, 5])),
        ];
        let composed = form.compose_linear(&f, &subs).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let y = ints(&f, &[a, b]);
                let inner: Vec<Fe> = subs.iter().map(|s| s.evaluate(&f, &y).unwrap()).collect();
                assert_eq!(composed.evaluate(&f, &y).unwrap(), form.evaluate(&f, &inner).unwrap());
            }
        }
    }

    #[test]
    fn veronese_is_homogeneous_for_every_scalar() {
        for q in [4u64, 5, 9] {
            let f = Field::with_order(q).unwrap();
            let x: Vec<Fe> = (1..=3).map(|i| f.element(i % f.q()).unwrap()).collect();
            for t in 0..4 {
                let v = veronese(&f, &x, t).unwrap();
                for lambda in f.elements().skip(1) {
                    let scaled: Vec<Fe> = x.iter().map(|&c| f.mul(lambda, c)).collect();
                    assert_eq!(veronese(&f, &scaled, t).unwrap(), f.scale(f.pow(lambda, t as u64), &v));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn evaluation_is_inner_product_with_veronese(
            coeffs in prop::collection::vec(0u32..9, 10),
            x in prop::collection::vec(0u32..9, 4),
        ) {
            let f = Field::with_order(9).unwrap();
            let form = HomogeneousForm::new(4, 2, coeffs.iter().map(|&c| f.element(c).unwrap()).collect()).unwrap();
            let x: Vec<Fe> = x.iter().map(|&c| f.element(c).unwrap()).collect();
            prop_assume!(x.iter().any(|c| !c.is_zero()));
            let v = veronese(&f, &x, 2).unwrap();
            prop_assert_eq!(form.evaluate(&f, &x).unwrap(), f.dot(form.coeffs(), &v));
        }

        #[test]
        fn product_evaluation_is_multiplicative(
            lin in prop::collection::vec(prop::collection::vec(0u32..7, 3), 0..4),
            x in prop::collection::vec(0u32..7, 3),
        ) {
            let f = Field::new(7, 1, None).unwrap();
            let forms: Vec<LinearForm> = lin
                .iter()
                .map(|c| HomogeneousForm::linear(c.iter().map(|&v| f.element(v).unwrap()).collect()))
                .collect();
            let x: Vec<Fe> = x.iter().map(|&c| f.element(c).unwrap()).collect();
            let prod = product_linear_forms(&f, 3, &forms).unwrap();
            let expected = f.product(forms.iter().map(|a| a.evaluate(&f, &x).unwrap()));
            prop_assert_eq!(prod.evaluate(&f, &x).unwrap(), expected);
        }

        #[test]
        fn vanishing_subspace_rank_nullity(
            pts in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..8),
            t in 1u32..4,
        ) {
            let f = Field::new(5, 1, None).unwrap();
            let pts: Vec<Vec<Fe>> = pts
                .into_iter()
                .map(|p| p.into_iter().map(|c| f.element(c).unwrap()).collect())
                .filter(|p: &Vec<Fe>| p.iter().any(|c| !c.is_zero()))
                .collect();
            prop_assume!(!pts.is_empty());
            let phi = vanishing_subspace(&f, 3, &pts, t).unwrap();
            let rank = veronese_matrix(&f, 3, &pts, t).unwrap().rank(&f);
            prop_assert_eq!(phi.dim() + rank, monomial_count(3, t));
            for form in phi.forms() {
                prop_assert!(vanishes_on(&f, &form, &pts).unwrap());
            }
        }
    }
}
