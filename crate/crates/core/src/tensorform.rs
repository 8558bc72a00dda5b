//! The tensor form F: a form of degree t in each of k-1 blocks of k
//! variables whose values on arc tuples are the values of g.
//!
//! F is assembled from a socle (arc points whose Veronese images span the
//! Veronese image of the arc) and a completion of that socle to a basis of
//! the degree-t forms by unit vectors. The multilinear functional defined by
//! g on the socle is extended by zero on the completion.
//!
//! Congruence modulo the block subspaces Φ_t[Y_1], ..., Φ_t[Y_{k-1}] is
//! tested by evaluating on every (k-1)-tuple of arc points. The quotient of
//! the tensor space by the block subspaces is the space of multilinear
//! functionals on ⟨ν(A)⟩^{⊗(k-1)}, and ⟨ν(A)⟩ is spanned by arc images, so a
//! tensor is congruent to zero exactly when it vanishes on all arc tuples.

use std::collections::HashMap;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, Matrix};
use crate::forms::{
    binomial, monomial_basis, monomial_count, vanishes_on, vanishing_subspace, veronese, veronese_matrix,
    HomogeneousForm, MultiIndex,
};
use crate::geometry::Arc;
use crate::report::{Check, Report};
use crate::tangents::{Parity, TangentSystem};

/// Largest dense linear system the exact-correction search will set up.
const SEARCH_LIMIT: usize = 4_000_000;

/// Contracts mode `mode` of a row-major tensor with `mat` (`dims[mode]` x new extent).
fn contract_mode(field: &Field, data: &[Fe], dims: &mut [usize], mode: usize, mat: &Matrix) -> Vec<Fe> {
    let outer: usize = dims[..mode].iter().product();
    let mid = dims[mode];
    let inner: usize = dims[mode + 1..].iter().product();
    let cols = mat.cols();
    let mut out = vec![Fe::ZERO; outer * cols * inner];
    for o in 0..outer {
        for m in 0..mid {
            let base = (o * mid + m) * inner;
            let slice = &data[base..base + inner];
            if slice.iter().all(|v| v.is_zero()) {
                continue;
            }
            for j in 0..cols {
                let c = mat.get(m, j);
                if c.is_zero() {
                    continue;
                }
                let dst = &mut out[(o * cols + j) * inner..(o * cols + j + 1) * inner];
                for (d, &s) in dst.iter_mut().zip(slice) {
                    *d = field.add(*d, field.mul(c, s));
                }
            }
        }
    }
    dims[mode] = cols;
    out
}

fn column(v: &[Fe]) -> Matrix {
    Matrix::new(v.len(), 1, v.to_vec()).expect("shape")
}

/// A form of degree `t` in each of `blocks` groups of `k` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiForm {
    k: usize,
    blocks: usize,
    t: u32,
    coeffs: Vec<Fe>,
}

impl MultiForm {
    pub fn new(k: usize, blocks: usize, t: u32, coeffs: Vec<Fe>) -> Result<MultiForm> {
        let expected = monomial_count(k, t).pow(blocks as u32);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: coeffs.len() });
        }
        Ok(MultiForm { k, blocks, t, coeffs })
    }

    pub fn zero(k: usize, blocks: usize, t: u32) -> MultiForm {
        MultiForm { k, blocks, t, coeffs: vec![Fe::ZERO; monomial_count(k, t).pow(blocks as u32)] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    /// Extent N of every mode.
    pub fn extent(&self) -> usize {
        monomial_count(self.k, self.t)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn offset(&self, index: &[usize]) -> usize {
        let n = self.extent();
        index.iter().fold(0, |acc, &j| acc * n + j)
    }

    /// Coefficient at one monomial position per block.
    pub fn get(&self, index: &[usize]) -> Fe {
        self.coeffs[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], v: Fe) {
        let o = self.offset(index);
        self.coeffs[o] = v;
    }

    fn check_same_shape(&self, other: &MultiForm) -> Result<()> {
        if (self.k, self.blocks, self.t) != (other.k, other.blocks, other.t) {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: other.coeffs.len() });
        }
        Ok(())
    }

    pub fn sub(&self, field: &Field, other: &MultiForm) -> Result<MultiForm> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.sub(a, b)).collect();
        Ok(MultiForm { coeffs, ..*self })
    }

    pub fn scale(&self, field: &Field, c: Fe) -> MultiForm {
        MultiForm { coeffs: field.scale(c, &self.coeffs), ..*self }
    }

    /// The form `G(Y_1, ..., Y_b) = F(Y_{σ(1)}, ..., Y_{σ(b)})`.
    pub fn permute_blocks(&self, sigma: &[usize]) -> Result<MultiForm> {
        let b = self.blocks;
        if sigma.len() != b || !sigma.iter().all_unique() || sigma.iter().any(|&s| s >= b) {
            return Err(Error::Malformed(format!("{sigma:?} is not a permutation of {b} blocks")));
        }
        let n = self.extent();
        let mut out = MultiForm::zero(self.k, b, self.t);
        for (pos, index) in (0..b).map(|_| 0..n).multi_cartesian_product().enumerate() {
            let source: Vec<usize> = sigma.iter().map(|&s| index[s]).collect();
            out.coeffs[pos] = self.get(&source);
        }
        Ok(out)
    }

    /// Contracts the first `prefix.len()` blocks with the Veronese images of `prefix`.
    pub fn partial_evaluate<P: AsRef<[Fe]>>(&self, field: &Field, prefix: &[P]) -> Result<HomogeneousForm> {
        if prefix.len() + 1 != self.blocks {
            return Err(Error::DimensionMismatch { expected: self.blocks.saturating_sub(1), got: prefix.len() });
        }
        let rest = self.contract_prefix(field, prefix)?;
        HomogeneousForm::new(self.k, self.t, rest)
    }

    fn contract_prefix<P: AsRef<[Fe]>>(&self, field: &Field, prefix: &[P]) -> Result<Vec<Fe>> {
        let mut dims = vec![self.extent(); self.blocks];
        let mut data = self.coeffs.clone();
        for p in prefix {
            let p = p.as_ref();
            if p.len() != self.k {
                return Err(Error::DimensionMismatch { expected: self.k, got: p.len() });
            }
            // after each step the contracted mode has extent 1, so the next is always mode 0 of the rest
            data = contract_mode(field, &data, &mut dims, 0, &column(&veronese(field, p, self.t)?));
            dims.remove(0);
        }
        Ok(data)
    }

    /// Value at one point per block.
    pub fn evaluate<P: AsRef<[Fe]>>(&self, field: &Field, points: &[P]) -> Result<Fe> {
        if points.len() != self.blocks {
            return Err(Error::DimensionMismatch { expected: self.blocks, got: points.len() });
        }
        Ok(self.contract_prefix(field, points)?[0])
    }

    /// Values on all `n^blocks` tuples of `points`, row-major by tuple.
    pub fn evaluate_on_points<P: AsRef<[Fe]>>(&self, field: &Field, points: &[P]) -> Result<Vec<Fe>> {
        let vt = veronese_matrix(field, self.k, points, self.t)?.transpose();
        let mut dims = vec![self.extent(); self.blocks];
        let mut data = self.coeffs.clone();
        for mode in 0..self.blocks {
            data = contract_mode(field, &data, &mut dims, mode, &vt);
        }
        Ok(data)
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!({ "k": self.k, "blocks": self.blocks, "t": self.t, "coeffs": field.vector_to_json(&self.coeffs) })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<MultiForm> {
        let int =
            |key: &str| v[key].as_u64().ok_or_else(|| Error::Malformed(format!("multiform needs integer \"{key}\"")));
        let (k, blocks, t) = (int("k")? as usize, int("blocks")? as usize, int("t")? as u32);
        MultiForm::new(k, blocks, t, field.vector_from_json(&v["coeffs"])?)
    }
}

/// Arc indices whose degree-t Veronese images are a basis of the span of the arc's image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Socle {
    pub indices: Vec<usize>,
    pub w: usize,
}

/// Greedy pass over the arc (in order, or reversed) keeping points that raise the rank.
pub fn socle_with(arc: &Arc, t: u32, reverse: bool) -> Result<Socle> {
    let field = arc.field();
    let n_mon = monomial_count(arc.k(), t);
    let mut order: Vec<usize> = (0..arc.len()).collect();
    if reverse {
        order.reverse();
    }
    let mut indices = Vec::new();
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for i in order {
        if rows.len() == n_mon {
            break;
        }
        rows.push(veronese(field, arc.rep(i), t)?);
        if Matrix::from_rows(n_mon, &rows)?.rank(field) == rows.len() {
            indices.push(i);
        } else {
            rows.pop();
        }
    }
    Ok(Socle { w: indices.len(), indices })
}

pub fn socle(arc: &Arc, t: u32) -> Result<Socle> {
    socle_with(arc, t, false)
}

/// `B` has the socle images as its first `w` columns, then unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExtension {
    pub b: Matrix,
    pub binv: Matrix,
    /// Positions of the unit vectors appended after the socle columns.
    pub complement: Vec<usize>,
}

pub fn basis_extension(arc: &Arc, t: u32, socle: &Socle, descending: bool) -> Result<BasisExtension> {
    let field = arc.field();
    let n_mon = monomial_count(arc.k(), t);
    let mut cols: Vec<Vec<Fe>> =
        socle.indices.iter().map(|&i| veronese(field, arc.rep(i), t)).collect::<Result<_>>()?;
    let candidates: Vec<usize> = if descending { (0..n_mon).rev().collect() } else { (0..n_mon).collect() };
    let mut complement = Vec::new();
    for j in candidates {
        if cols.len() == n_mon {
            break;
        }
        let mut e = vec![Fe::ZERO; n_mon];
        e[j] = Fe::ONE;
        cols.push(e);
        if Matrix::from_rows(n_mon, &cols)?.rank(field) == cols.len() {
            complement.push(j);
        } else {
            cols.pop();
        }
    }
    let b = Matrix::from_rows(n_mon, &cols)?.transpose();
    let binv = b.inverse(field)?;
    Ok(BasisExtension { b, binv, complement })
}

/// Which socle and completion the build uses. Any choice gives a form
/// congruent to the default one modulo the block subspaces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub reverse_socle: bool,
    pub descending_complement: bool,
}

impl BuildOptions {
    pub const ALTERNATE: BuildOptions = BuildOptions { reverse_socle: true, descending_complement: true };
}

pub fn build_tensor_form(arc: &Arc, ts: &TangentSystem) -> Result<MultiForm> {
    build_tensor_form_with(arc, ts, BuildOptions::default())
}

pub fn build_tensor_form_with(arc: &Arc, ts: &TangentSystem, options: BuildOptions) -> Result<MultiForm> {
    let t = arc.t();
    if t == 0 {
        return Err(Error::DegenerateT);
    }
    if ts.arc() != arc {
        return Err(Error::PreconditionFailed("tangent system belongs to a different arc".into()));
    }
    let field = arc.field();
    let b = arc.k() - 1;
    let soc = socle_with(arc, t, options.reverse_socle)?;
    let ext = basis_extension(arc, t, &soc, options.descending_complement)?;
    let w = soc.w;
    let mut data = Vec::with_capacity(w.pow(b as u32));
    for pos in (0..b).map(|_| 0..w).multi_cartesian_product() {
        let tuple: Vec<usize> = pos.iter().map(|&i| soc.indices[i]).collect();
        data.push(ts.g_value(&tuple)?);
    }
    let n_mon = ext.binv.cols();
    let rows: Vec<&[Fe]> = (0..w).map(|i| ext.binv.row(i)).collect();
    let top = Matrix::from_rows(n_mon, &rows)?;
    let mut dims = vec![w; b];
    for mode in 0..b {
        data = contract_mode(field, &data, &mut dims, mode, &top);
    }
    MultiForm::new(arc.k(), b, t, data)
}

/// Whether `d` vanishes on every tuple of arc points, repeats allowed.
pub fn is_block_congruent(d: &MultiForm, arc: &Arc) -> Result<bool> {
    Ok(first_nonzero_tuple(d, arc)?.is_none())
}

fn first_nonzero_tuple(d: &MultiForm, arc: &Arc) -> Result<Option<Vec<usize>>> {
    if d.k() != arc.k() || d.blocks() + 1 != arc.k() {
        return Err(Error::DimensionMismatch { expected: arc.k() - 1, got: d.blocks() });
    }
    let values = d.evaluate_on_points(arc.field(), arc.points())?;
    Ok(values.iter().position(|v| !v.is_zero()).map(|pos| unflatten(pos, arc.len(), d.blocks())))
}

fn unflatten(mut pos: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = pos % n;
        pos /= n;
    }
    out
}

/// All tuples in `0..n` of length `len`, lexicographic.
fn tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(len as u32)).map(move |pos| unflatten(pos, n, len))
}

/// Defining contract and properties (i)-(iv).
pub fn verify_tensor_form(arc: &Arc, ts: &TangentSystem, f: &MultiForm) -> Result<Report> {
    let field = arc.field();
    let t = arc.t();
    let b = arc.k() - 1;
    let n = arc.len();
    let mut report = Report::new("tensor verify", json!({ "q": field.q(), "k": arc.k(), "n": n, "t": t }));
    let el = |v: Fe| field.element_to_json(v);

    let values = f.evaluate_on_points(field, arc.points())?;
    let mut contract = Check::new("defining_contract");
    for (pos, tuple) in tuples(n, b).enumerate() {
        let g = ts.g_value(&tuple)?;
        contract.record(values[pos] == g, || json!({ "tuple": tuple, "F": el(values[pos]), "g": el(g) }));
    }
    report.push(contract);

    let mut prop_i = Check::new("property_i");
    for s in (0..n).combinations(b - 1) {
        let fs = ts.form(&s)?;
        for order in s.iter().copied().permutations(b - 1) {
            let prefix: Vec<&[Fe]> = order.iter().map(|&i| arc.rep(i)).collect();
            let expected = fs.scale(field, Parity::of(&order).sign(field, t));
            let diff = f.partial_evaluate(field, &prefix)?.sub(field, &expected)?;
            let ok = vanishes_on(field, &diff, arc.points())?;
            prop_i.record(ok, || json!({ "S": order }));
        }
    }
    report.push(prop_i);

    let mut prop_ii = Check::new("property_ii");
    for prefix in tuples(n, b - 1).filter(|p| !p.iter().all_unique()) {
        let pts: Vec<&[Fe]> = prefix.iter().map(|&i| arc.rep(i)).collect();
        let ok = vanishes_on(field, &f.partial_evaluate(field, &pts)?, arc.points())?;
        prop_ii.record(ok, || json!({ "prefix": prefix }));
    }
    for (pos, tuple) in tuples(n, b).enumerate() {
        if !tuple.iter().all_unique() {
            prop_ii.record(values[pos].is_zero(), || json!({ "tuple": tuple, "F": el(values[pos]) }));
        }
    }
    report.push(prop_ii);

    let mut prop_iii = Check::new("property_iii");
    for sigma in (0..b).permutations(b) {
        let sign = Parity::of(&sigma).sign(field, t);
        let d = f.permute_blocks(&sigma)?.sub(field, &f.scale(field, sign))?;
        let bad = first_nonzero_tuple(&d, arc)?;
        prop_iii.record(bad.is_none(), || json!({ "sigma": sigma, "tuple": bad }));
    }
    report.push(prop_iii);

    let alternate = build_tensor_form_with(arc, ts, BuildOptions::ALTERNATE)?;
    let mut prop_iv = Check::new("property_iv");
    let bad = first_nonzero_tuple(&alternate.sub(field, f)?, arc)?;
    prop_iv.record(bad.is_none(), || json!({ "tuple": bad }));
    report.push(prop_iv);
    report.observe("alternate_build_differs", json!(alternate != *f));
    report.observe("socle", json!(socle(arc, t)?.indices));
    report.observe("alternate_socle", json!(socle_with(arc, t, true)?.indices));
    report.observe("dim_phi_t", json!(vanishing_subspace(field, arc.k(), arc.points(), t)?.dim()));
    Ok(report)
}

/// Coefficient of `Y_1^{i_1} ... Y_{b-1}^{i_{b-1}}` in
/// `F(Y_1 + X, ..., Y_{b-1} + X, X) - F(Y_1, ..., Y_{b-1}, X)`, a form in X.
pub fn shift_extract(field: &Field, f: &MultiForm, exponents: &[MultiIndex]) -> Result<HomogeneousForm> {
    let (k, b, t) = (f.k(), f.blocks(), f.degree());
    if exponents.len() + 1 != b {
        return Err(Error::DimensionMismatch { expected: b.saturating_sub(1), got: exponents.len() });
    }
    for i in exponents {
        if i.degrees().len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: i.degrees().len() });
        }
        if i.total() > t {
            return Err(Error::ExponentTooLarge { total: i.total(), t });
        }
    }
    let shift: u32 = exponents.iter().map(MultiIndex::total).sum();
    let degree = b as u32 * t - shift;
    let basis = monomial_basis(k, t);
    let out_basis = monomial_basis(k, degree);
    let position: HashMap<&MultiIndex, usize> = out_basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let p = field.p() as u64;
    // per block, the admissible monomials J >= i with their binomial weight mod p
    let admissible: Vec<Vec<(usize, u64)>> = exponents
        .iter()
        .map(|i| {
            basis
                .iter()
                .enumerate()
                .filter(|(_, j)| j.dominates(i))
                .map(|(pos, j)| {
                    let w = j
                        .degrees()
                        .iter()
                        .zip(i.degrees())
                        .fold(1u64, |acc, (&jd, &id)| acc * (binomial(jd as u64, id as u64) % p) % p);
                    (pos, w)
                })
                .filter(|&(_, w)| w != 0)
                .collect()
        })
        .collect();
    // the excluded term J = i only exists when every exponent has full degree t
    let exact: Option<Vec<usize>> = exponents.iter().map(|i| basis.iter().position(|j| j == i)).collect();
    let mut coeffs = vec![Fe::ZERO; out_basis.len()];
    for choice in admissible.iter().map(|a| a.iter()).multi_cartesian_product() {
        let head: Vec<usize> = choice.iter().map(|(pos, _)| *pos).collect();
        if exact.as_ref() == Some(&head) {
            continue;
        }
        let weight = choice.iter().fold(1u64, |acc, (_, w)| acc * w % p);
        let mut x_exp = vec![0u32; k];
        for ((pos, _), i) in choice.iter().zip(exponents) {
            for (e, (&jd, &id)) in x_exp.iter_mut().zip(basis[*pos].degrees().iter().zip(i.degrees())) {
                *e += jd - id;
            }
        }
        let mut index = head.clone();
        index.push(0);
        for (last, j) in basis.iter().enumerate() {
            index[b - 1] = last;
            let c = f.get(&index);
            if c.is_zero() {
                continue;
            }
            let mono: Vec<u32> = x_exp.iter().zip(j.degrees()).map(|(a, b)| a + b).collect();
            let slot = position[&MultiIndex::new(mono)];
            coeffs[slot] = field.add(coeffs[slot], field.mul(field.from_int(weight as i64), c));
        }
    }
    HomogeneousForm::new(k, degree, coeffs)
}

/// Every tuple of exponent multi-indices with each total at most `t`.
pub fn admissible_exponents(k: usize, t: u32, count: usize) -> Vec<Vec<MultiIndex>> {
    let singles: Vec<MultiIndex> = (0..=t).flat_map(|d| monomial_basis(k, d)).collect();
    (0..count).map(|_| singles.iter().cloned()).multi_cartesian_product().collect()
}

/// Extracts every admissible coefficient form and tests vanishing on the arc.
///
/// The vanishing is only guaranteed when Φ_t = 0. Otherwise the sweep still
/// runs and its tallies are reported as observations.
pub fn verify_coefficient_forms(arc: &Arc, f: &MultiForm) -> Result<Report> {
    let field = arc.field();
    let t = f.degree();
    let dim = vanishing_subspace(field, arc.k(), arc.points(), t)?.dim();
    let mut report = Report::new("tensor extract", json!({ "q": field.q(), "k": arc.k(), "t": t }));
    let mut check = Check::new("coefficient_forms_vanish");
    for exps in admissible_exponents(arc.k(), t, f.blocks() - 1) {
        let form = shift_extract(field, f, &exps)?;
        let ok = vanishes_on(field, &form, arc.points())?;
        check.record(ok, || json!({ "exponents": exps.iter().map(|i| i.degrees().to_vec()).collect::<Vec<_>>() }));
    }
    report.observe("dim_phi_t", json!(dim));
    if dim == 0 {
        report.push(check);
    } else {
        report.observe("coefficient_forms_unasserted", json!({ "forms": check.total, "not_vanishing": check.failed }));
    }
    Ok(report)
}

/// Result of looking for a quadric through an arc of PG(3, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricCheck {
    pub dim: usize,
    /// First canonical basis form of Φ_2; `None` means no quadric contains the arc.
    pub form: Option<HomogeneousForm>,
}

pub fn quadric_check(arc: &Arc) -> Result<QuadricCheck> {
    let q = arc.field().q() as usize;
    if arc.k() != 4 || arc.len() != q + 1 || arc.field().is_even() {
        return Err(Error::PreconditionFailed(format!(
            "needs an arc of size q+1 in PG(3, q) with q odd; got k = {}, n = {}, q = {q}",
            arc.k(),
            arc.len()
        )));
    }
    let phi = vanishing_subspace(arc.field(), 4, arc.points(), 2)?;
    Ok(QuadricCheck { dim: phi.dim(), form: phi.forms().into_iter().next() })
}

/// Outcome of the search for a block correction making property (i) exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionSearch {
    pub dim_phi: usize,
    pub equations: usize,
    pub unknowns: usize,
    /// Rank of the interpolation matrix. When it equals `equations` every
    /// right-hand side is solvable and the outcome says nothing specific.
    pub rank: usize,
    /// One entry per basis form of Φ_t: whether its coefficient is interpolable.
    pub solvable: Vec<bool>,
}

impl CorrectionSearch {
    pub fn exact_correction_exists(&self) -> bool {
        self.solvable.iter().all(|&s| s)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim_phi_t": self.dim_phi,
            "equations": self.equations,
            "unknowns": self.unknowns,
            "rank": self.rank,
            "solvable_per_basis_form": self.solvable,
            "exact_correction_exists": self.exact_correction_exists(),
        })
    }
}

/// Looks for D congruent to 0 with `(F + D)(a_1, ..., a_{k-2}, X)` equal to
/// the signed `f_S(X)` exactly, for every ordered (k-2)-tuple of distinct arc points.
///
/// Block components of D outside the last block vanish at arc points, so
/// only `D = Σ_i W_i(Y_1, ..., Y_{k-2}) φ_i(X)` matters, with φ_i the basis
/// of Φ_t. The residual on each tuple lies in Φ_t; its φ_i-coordinates must
/// be interpolated by a form W_i of degree t in each of the first k-2 blocks.
pub fn search_exact_correction(arc: &Arc, ts: &TangentSystem, f: &MultiForm) -> Result<CorrectionSearch> {
    let field = arc.field();
    let t = arc.t();
    let b = arc.k() - 1;
    let phi = vanishing_subspace(field, arc.k(), arc.points(), t)?;
    let pivots: Vec<usize> =
        phi.basis.row_vecs().map(|r| r.iter().position(|c| !c.is_zero()).expect("basis rows are nonzero")).collect();
    let n_mon = f.extent();
    let unknowns = n_mon.pow(b as u32 - 1);
    let prefixes: Vec<Vec<usize>> = (0..arc.len()).permutations(b - 1).collect();
    if prefixes.len().saturating_mul(unknowns + 1) > SEARCH_LIMIT {
        return Err(Error::PreconditionFailed(format!(
            "correction system with {} equations and {unknowns} unknowns is too large",
            prefixes.len()
        )));
    }
    let mut rows = Vec::with_capacity(prefixes.len());
    let mut targets: Vec<Vec<Fe>> = vec![Vec::with_capacity(prefixes.len()); phi.dim()];
    for prefix in &prefixes {
        let pts: Vec<&[Fe]> = prefix.iter().map(|&i| arc.rep(i)).collect();
        let mut row = vec![Fe::ONE];
        for p in &pts {
            let v = veronese(field, p, t)?;
            row = row.iter().flat_map(|&a| v.iter().map(move |&c| (a, c))).map(|(a, c)| field.mul(a, c)).collect();
        }
        rows.push(row);
        let signed = ts.form(prefix)?.scale(field, Parity::of(prefix).sign(field, t));
        let residual = signed.sub(field, &f.partial_evaluate(field, &pts)?)?;
        for (target, &piv) in targets.iter_mut().zip(&pivots) {
            target.push(residual.coeffs()[piv]);
        }
    }
    let m = Matrix::from_rows(unknowns, &rows)?;
    let rank = m.rank(field);
    let solvable = targets
        .iter()
        .map(|c| {
            let aug: Vec<Vec<Fe>> = rows.iter().zip(c).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
            Ok(Matrix::from_rows(unknowns + 1, &aug)?.rank(field) == rank)
        })
        .collect::<Result<_>>()?;
    Ok(CorrectionSearch { dim_phi: phi.dim(), equations: prefixes.len(), unknowns, rank, solvable })
}
