//! The dual hypersurface φ of degree mt and the form G it induces under
//! `Z_j = det_j(X_1, ..., X_{k-1})`.
//!
//! Columns are indexed from 0 here, so the Laplace expansion of
//! `det(X_1, ..., X_{k-1}, u)` along its last row reads
//! `Σ_j (-1)^{k-1+j} u_j det_j(X)`. The hyperplane spanned by the rows `X`
//! therefore has dual coordinates `c_j = (-1)^{k-1+j} Z_j`, and a hyperplane
//! with dual `c` is evaluated at `Z_j = (-1)^{k-1+j} c_j`.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, Matrix};
use crate::forms::{product_linear_forms, HomogeneousForm, LinearForm};
use crate::geometry::{projective_points, Arc};
use crate::report::{Check, Report};
use crate::tangents::TangentSystem;

/// Determinant of the (k-1) x (k-1) matrix left after deleting column `j` (zero-based).
pub fn det_minor<P: AsRef<[Fe]>>(field: &Field, rows: &[P], j: usize) -> Result<Fe> {
    let k = rows.len() + 1;
    if j >= k {
        return Err(Error::IndexOutOfRange { index: j, len: k });
    }
    let minor: Vec<Vec<Fe>> = rows
        .iter()
        .map(|r| {
            let r = r.as_ref();
            if r.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: r.len() });
            }
            Ok(r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
        })
        .collect::<Result<_>>()?;
    Matrix::from_rows(k - 1, &minor)?.det(field)
}

fn laplace_sign(field: &Field, k: usize, j: usize) -> Fe {
    field.sign((k - 1 + j) % 2 == 1)
}

/// `u ↦ det(X_1, ..., X_{k-1}, u)` written as a linear form in Z.
fn det_as_linear_form(field: &Field, u: &[Fe]) -> LinearForm {
    let k = u.len();
    HomogeneousForm::linear((0..k).map(|j| field.mul(laplace_sign(field, k, j), u[j])).collect())
}

/// Z-coordinates of the hyperplane with dual coordinates `c`.
pub fn dual_to_z(field: &Field, c: &[Fe]) -> Vec<Fe> {
    let k = c.len();
    (0..k).map(|j| field.mul(laplace_sign(field, k, j), c[j])).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbbtForm {
    pub m: u32,
    /// Arc indices of the interpolation set.
    pub base: Vec<usize>,
    pub phi: HomogeneousForm,
}

impl SbbtForm {
    /// `G(rows) = φ(det_1(rows), ..., det_k(rows))`.
    pub fn evaluate_g<P: AsRef<[Fe]>>(&self, field: &Field, rows: &[P]) -> Result<Fe> {
        let k = self.phi.k();
        if rows.len() + 1 != k {
            return Err(Error::DimensionMismatch { expected: k - 1, got: rows.len() });
        }
        let z: Vec<Fe> = (0..k).map(|j| det_minor(field, rows, j)).collect::<Result<_>>()?;
        self.phi.evaluate(field, &z)
    }

    /// `X ↦ G(y_1, ..., y_{k-2}, X)` as a form of degree mt in X.
    pub fn residual<P: AsRef<[Fe]>>(&self, field: &Field, prefix: &[P]) -> Result<HomogeneousForm> {
        let k = self.phi.k();
        if prefix.len() + 2 != k {
            return Err(Error::DimensionMismatch { expected: k - 2, got: prefix.len() });
        }
        // each det_j is linear in the last row; read its coefficients off unit vectors
        let mut rows: Vec<Vec<Fe>> = prefix.iter().map(|p| p.as_ref().to_vec()).collect();
        rows.push(vec![Fe::ZERO; k]);
        let mut subs = Vec::with_capacity(k);
        for j in 0..k {
            let mut coeffs = Vec::with_capacity(k);
            for l in 0..k {
                rows[k - 2] = (0..k).map(|c| if c == l { Fe::ONE } else { Fe::ZERO }).collect();
                coeffs.push(det_minor(field, &rows, j)?);
            }
            subs.push(HomogeneousForm::linear(coeffs));
        }
        self.phi.compose_linear(field, &subs)
    }

    /// φ at the hyperplane with dual coordinates `c`.
    pub fn phi_at_dual(&self, field: &Field, c: &[Fe]) -> Result<Fe> {
        self.phi.evaluate(field, &dual_to_z(field, c))
    }

    pub fn to_json(&self, field: &Field) -> Value {
        json!({ "m": self.m, "E": self.base, "phi": self.phi.to_json(field) })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<SbbtForm> {
        let m = v["m"].as_u64().ok_or_else(|| Error::Malformed("missing integer \"m\"".into()))? as u32;
        let base = v["E"]
            .as_array()
            .ok_or_else(|| Error::Malformed("missing \"E\" array".into()))?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| Error::Malformed("bad index in \"E\"".into())))
            .collect::<Result<_>>()?;
        let phi = HomogeneousForm::from_json(field, &v["phi"])?;
        Ok(SbbtForm { m, base, phi })
    }
}

pub fn multiplicity(field: &Field) -> u32 {
    if field.is_even() {
        1
    } else {
        2
    }
}

/// Interpolates φ from the first mt+k-1 arc points.
pub fn build_sbbt(arc: &Arc, ts: &TangentSystem) -> Result<SbbtForm> {
    let t = arc.t();
    if t == 0 {
        return Err(Error::DegenerateT);
    }
    if ts.arc() != arc {
        return Err(Error::PreconditionFailed("tangent system belongs to a different arc".into()));
    }
    let field = arc.field();
    let k = arc.k();
    let m = multiplicity(field);
    let needed = (m * t) as usize + k - 1;
    if arc.len() < needed {
        return Err(Error::SizeTooSmall { n: arc.len(), needed });
    }
    let base: Vec<usize> = (0..needed).collect();
    let mut phi = HomogeneousForm::zero(k, m * t);
    for tuple in base.iter().copied().combinations(k - 1) {
        let (s, last) = tuple.split_at(k - 2);
        let numerator = field.pow(ts.form(s)?.evaluate(field, arc.rep(last[0]))?, m as u64);
        let rest: Vec<usize> = base.iter().copied().filter(|u| !tuple.contains(u)).collect();
        let mut denominator = field.one();
        let mut rows: Vec<&[Fe]> = tuple.iter().map(|&i| arc.rep(i)).collect();
        for &u in &rest {
            rows.push(arc.rep(u));
            let d = Matrix::from_rows(k, &rows)?.det(field)?;
            rows.pop();
            if d.is_zero() {
                return Err(Error::NotAnArc(tuple.iter().copied().chain([u]).collect()));
            }
            denominator = field.mul(denominator, d);
        }
        let factors: Vec<LinearForm> = rest.iter().map(|&u| det_as_linear_form(field, arc.rep(u))).collect();
        let term = product_linear_forms(field, k, &factors)?;
        phi = phi.add(field, &term.scale(field, field.div(numerator, denominator)?))?;
    }
    Ok(SbbtForm { m, base, phi })
}

/// One hyperplane of the exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneClass {
    pub dual: Vec<Fe>,
    pub arc_points_on: usize,
    pub phi_value: Fe,
}

impl HyperplaneClass {
    pub fn to_json(&self, field: &Field) -> Value {
        json!({
            "dual": field.vector_to_json(&self.dual),
            "arc_points_on": self.arc_points_on,
            "phi_value": field.element_to_json(self.phi_value),
        })
    }
}

/// Every hyperplane of PG(k-1, q) with its arc incidence count and φ-value.
pub fn classify_hyperplanes(arc: &Arc, sbbt: &SbbtForm) -> Result<Vec<HyperplaneClass>> {
    let field = arc.field();
    projective_points(field, arc.k())
        .into_iter()
        .map(|dual| {
            let arc_points_on = arc.points().iter().filter(|p| field.dot(&dual, p.rep()).is_zero()).count();
            let phi_value = sbbt.phi_at_dual(field, &dual)?;
            Ok(HyperplaneClass { dual, arc_points_on, phi_value })
        })
        .collect()
}

/// The identity G(y_S, X) = f_S^m, the hyperplane sweep, symmetry of G and
/// agreement with g^m on arc tuples.
pub fn verify_sbbt(arc: &Arc, ts: &TangentSystem, sbbt: &SbbtForm, seed: u64) -> Result<Report> {
    let field = arc.field();
    let k = arc.k();
    let el = |v: Fe| field.element_to_json(v);
    let mut report = Report::new(
        "sbbt verify",
        json!({ "q": field.q(), "k": k, "n": arc.len(), "t": arc.t(), "m": sbbt.m, "seed": seed }),
    );

    let mut residual = Check::new("residual_identity");
    for (s, fs) in ts.forms() {
        let prefix: Vec<&[Fe]> = s.iter().map(|&i| arc.rep(i)).collect();
        let ok = sbbt.residual(field, &prefix)? == fs.pow(field, sbbt.m);
        residual.record(ok, || json!({ "S": s }));
    }
    report.push(residual);

    let classes = classify_hyperplanes(arc, sbbt)?;
    let mut tangent = Check::new("vanish_on_k_minus_2");
    let mut secant = Check::new("nonzero_on_k_minus_1");
    let (mut low_zero, mut low_nonzero) = (0u64, 0u64);
    for c in &classes {
        let zero = c.phi_value.is_zero();
        if c.arc_points_on + 2 == k {
            tangent.record(zero, || c.to_json(field));
        } else if c.arc_points_on + 1 == k {
            secant.record(!zero, || c.to_json(field));
        } else if c.arc_points_on + 2 < k {
            if zero {
                low_zero += 1;
            } else {
                low_nonzero += 1;
            }
        }
    }
    report.push(tangent);
    report.push(secant);
    report.observe("fewer_than_k_minus_2", json!({ "phi_zero": low_zero, "phi_nonzero": low_nonzero }));
    report.observe("classification", Value::Array(classes.iter().map(|c| c.to_json(field)).collect()));

    let mut symmetric = Check::new("symmetry");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let rows: Vec<Vec<Fe>> = (0..k - 1)
            .map(|_| (0..k).map(|_| field.element(rng.gen_range(0..field.q())).expect("in range")).collect())
            .collect();
        let mut sigma: Vec<usize> = (0..k - 1).collect();
        sigma.shuffle(&mut rng);
        let permuted: Vec<&Vec<Fe>> = sigma.iter().map(|&i| &rows[i]).collect();
        let (a, b) = (sbbt.evaluate_g(field, &rows)?, sbbt.evaluate_g(field, &permuted)?);
        symmetric.record(
            a == b,
            || json!({ "rows": rows.iter().map(|r| field.vector_to_json(r)).collect::<Vec<_>>(), "sigma": sigma }),
        );
    }
    report.push(symmetric);

    let mut agree = Check::new("agrees_with_g");
    let n = arc.len();
    for tuple in (0..k - 1).map(|_| 0..n).multi_cartesian_product() {
        let rows: Vec<&[Fe]> = tuple.iter().map(|&i| arc.rep(i)).collect();
        let gv = sbbt.evaluate_g(field, &rows)?;
        let expected = field.pow(ts.g_value(&tuple)?, sbbt.m as u64);
        agree.record(gv == expected, || json!({ "tuple": tuple, "G": el(gv), "g_m": el(expected) }));
    }
    report.push(agree);
    Ok(report)
}
