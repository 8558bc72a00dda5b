//! Points, hyperplanes and arcs of PG(k-1, q).

use std::hash::{Hash, Hasher};

use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, Matrix};

/// Scales `v` so its first nonzero coordinate is 1. `None` for the zero vector.
pub fn normalize(field: &Field, v: &[Fe]) -> Option<Vec<Fe>> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    let inv = field.inv(lead).expect("nonzero");
    Some(field.scale(inv, v))
}

/// A point of projective space with a frozen vector representative.
///
/// Equality and hashing use the normalized copy, so two representatives
/// of the same point compare equal while `rep` keeps the caller's scaling.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    rep: Vec<Fe>,
    canonical: Vec<Fe>,
}

impl ProjectivePoint {
    pub fn new(field: &Field, rep: Vec<Fe>) -> Result<ProjectivePoint> {
        let canonical = normalize(field, &rep).ok_or(Error::ZeroVector)?;
        Ok(ProjectivePoint { rep, canonical })
    }

    pub fn rep(&self) -> &[Fe] {
        &self.rep
    }

    pub fn canonical(&self) -> &[Fe] {
        &self.canonical
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for ProjectivePoint {}

impl Hash for ProjectivePoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl AsRef<[Fe]> for ProjectivePoint {
    fn as_ref(&self) -> &[Fe] {
        &self.rep
    }
}

/// The hyperplane `{x : rep . x = 0}`, stored normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualPoint(ProjectivePoint);

impl DualPoint {
    pub fn new(field: &Field, rep: Vec<Fe>) -> Result<DualPoint> {
        let p = ProjectivePoint::new(field, rep)?;
        let canonical = p.canonical.clone();
        Ok(DualPoint(ProjectivePoint { rep: canonical.clone(), canonical }))
    }

    pub fn coords(&self) -> &[Fe] {
        &self.0.rep
    }

    pub fn contains(&self, field: &Field, x: &[Fe]) -> bool {
        field.dot(&self.0.rep, x).is_zero()
    }
}

impl AsRef<[Fe]> for DualPoint {
    fn as_ref(&self) -> &[Fe] {
        &self.0.rep
    }
}

/// Outcome of an arc test; `witness` is the first dependent k-subset in
/// lexicographic order (or a repeated pair when there are fewer than k points).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCheck {
    pub is_arc: bool,
    pub witness: Option<Vec<usize>>,
}

fn check_points<P: AsRef<[Fe]>>(k: usize, points: &[P]) -> Result<()> {
    for p in points {
        let p = p.as_ref();
        if p.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: p.len() });
        }
        if p.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
    }
    Ok(())
}

/// Whether no `k` of the points lie in a hyperplane of PG(k-1, q).
pub fn is_arc<P: AsRef<[Fe]>>(field: &Field, k: usize, points: &[P]) -> Result<ArcCheck> {
    check_points(k, points)?;
    if points.len() < k {
        let canon: Vec<Vec<Fe>> = points.iter().map(|p| normalize(field, p.as_ref()).unwrap()).collect();
        let repeat = (0..points.len()).tuple_combinations().find(|&(i, j)| canon[i] == canon[j]);
        return Ok(ArcCheck { is_arc: repeat.is_none(), witness: repeat.map(|(i, j)| vec![i, j]) });
    }
    for subset in (0..points.len()).combinations(k) {
        let rows: Vec<&[Fe]> = subset.iter().map(|&i| points[i].as_ref()).collect();
        if Matrix::from_rows(k, &rows)?.det(field)?.is_zero() {
            return Ok(ArcCheck { is_arc: false, witness: Some(subset) });
        }
    }
    Ok(ArcCheck { is_arc: true, witness: None })
}

/// An ordered arc of PG(k-1, q) with frozen representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    field: Field,
    k: usize,
    points: Vec<ProjectivePoint>,
}

impl Arc {
    /// Validates that the points form an arc of at least `k` points.
    pub fn new(field: Field, k: usize, reps: Vec<Vec<Fe>>) -> Result<Arc> {
        if k < 2 {
            return Err(Error::PreconditionFailed(format!("k = {k}; arcs need k >= 2")));
        }
        if reps.len() < k {
            return Err(Error::PreconditionFailed(format!(
                "an arc in PG({}, q) needs at least {k} points, got {}",
                k - 1,
                reps.len()
            )));
        }
        let check = is_arc(&field, k, &reps)?;
        if !check.is_arc {
            return Err(Error::NotAnArc(check.witness.unwrap_or_default()));
        }
        Arc::new_unchecked(field, k, reps)
    }

    /// Skips the hyperplane test. For loading data that is about to be
    /// verified, or for building deliberately corrupted inputs.
    pub fn new_unchecked(field: Field, k: usize, reps: Vec<Vec<Fe>>) -> Result<Arc> {
        check_points(k, &reps)?;
        let points = reps.into_iter().map(|r| ProjectivePoint::new(&field, r)).collect::<Result<_>>()?;
        Ok(Arc { field, k, points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `t = q + k - 1 - n`.
    pub fn t(&self) -> u32 {
        (self.field.q() as usize + self.k - 1).saturating_sub(self.points.len()) as u32
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn rep(&self, i: usize) -> &[Fe] {
        self.points[i].rep()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.points.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.points.len() });
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<ArcCheck> {
        is_arc(&self.field, self.k, &self.points)
    }

    /// The same points listed in the order `order[0], order[1], ...`.
    pub fn reordered(&self, order: &[usize]) -> Result<Arc> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            self.check_index(i)?;
            seen[i] = true;
        }
        if order.len() != self.len() || seen.iter().any(|s| !s) {
            return Err(Error::Malformed("reordering must be a permutation of the arc".into()));
        }
        let points = order.iter().map(|&i| self.points[i].clone()).collect();
        Ok(Arc { field: self.field.clone(), k: self.k, points })
    }

    /// Replaces the representative of point `i` by `lambda` times itself.
    pub fn rescaled(&self, i: usize, lambda: Fe) -> Result<Arc> {
        self.check_index(i)?;
        if lambda.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut out = self.clone();
        out.points[i] = ProjectivePoint::new(&self.field, self.field.scale(lambda, self.rep(i)))?;
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self.points.iter().map(|p| self.field.vector_to_json(p.rep())).collect();
        json!({ "field": self.field, "k": self.k, "points": pts })
    }

    /// Reads the arc file format without testing the arc property.
    pub fn from_json_unchecked(v: &Value) -> Result<Arc> {
        let field: Field = serde_json::from_value(v["field"].clone())?;
        let k = v["k"].as_u64().ok_or_else(|| Error::Malformed("arc needs integer \"k\"".into()))? as usize;
        let reps = v["points"]
            .as_array()
            .ok_or_else(|| Error::Malformed("arc needs a \"points\" array".into()))?
            .iter()
            .map(|p| field.vector_from_json(p))
            .collect::<Result<Vec<_>>>()?;
        Arc::new_unchecked(field, k, reps)
    }

    pub fn from_json(v: &Value) -> Result<Arc> {
        let arc = Arc::from_json_unchecked(v)?;
        let reps = arc.points.iter().map(|p| p.rep.clone()).collect();
        Arc::new(arc.field, arc.k, reps)
    }
}

/// Every point of PG(k-1, q), normalized, ordered by the position of the
/// leading 1 and then by field-element counting in the remaining slots.
pub fn projective_points(field: &Field, k: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::new();
    let q = field.q() as usize;
    for lead in 0..k {
        let free = (k - lead - 1) as u32;
        for mut code in 0..q.pow(free) {
            let mut v = vec![Fe::ZERO; k];
            v[lead] = Fe::ONE;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = field.element((code % q) as u32).expect("in range");
                code /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Normal rational curve `{(1, s, ..., s^{k-1}) : s in GF(q)} ∪ {(0, ..., 0, 1)}`.
pub fn normal_rational_curve(field: &Field, k: usize) -> Result<Arc> {
    let q = field.q() as usize;
    if k > q + 1 {
        return Err(Error::KTooLarge { k, max: q + 1 });
    }
    let mut reps: Vec<Vec<Fe>> = field.elements().map(|s| (0..k).map(|e| field.pow(s, e as u64)).collect()).collect();
    let mut inf = vec![Fe::ZERO; k];
    inf[k - 1] = Fe::ONE;
    reps.push(inf);
    Arc::new(field.clone(), k, reps)
}

/// The conic `X1 X3 = X2^2` as an arc of PG(2, q).
pub fn conic(field: &Field) -> Result<Arc> {
    normal_rational_curve(field, 3)
}

/// The conic plus its nucleus `(0, 1, 0)`; a hyperoval of PG(2, q), q even.
pub fn hyperoval(field: &Field) -> Result<Arc> {
    if !field.is_even() {
        return Err(Error::PreconditionFailed(format!("hyperovals need q even, got q = {}", field.q())));
    }
    let c = conic(field)?;
    let mut reps: Vec<Vec<Fe>> = c.points().iter().map(|p| p.rep().to_vec()).collect();
    reps.push(vec![Fe::ZERO, Fe::ONE, Fe::ZERO]);
    Arc::new(field.clone(), 3, reps)
}

/// The q + 1 hyperplanes through the span of `k - 2` independent points.
///
/// With `{u, v}` the reduced-echelon basis of the orthogonal complement,
/// the pencil is listed as `u`, then `v + λu` for λ in field order.
pub fn hyperplanes_through<P: AsRef<[Fe]>>(field: &Field, k: usize, s: &[P]) -> Result<Vec<DualPoint>> {
    if k < 2 || s.len() + 2 != k {
        return Err(Error::DimensionMismatch { expected: k.saturating_sub(2), got: s.len() });
    }
    check_points(k, s)?;
    let ns = Matrix::from_rows(k, s)?.nullspace(field);
    if ns.nullity() != 2 {
        return Err(Error::DependentPoints);
    }
    let (u, v) = (ns.basis.row(0), ns.basis.row(1));
    let mut out = Vec::with_capacity(field.q() as usize + 1);
    out.push(DualPoint::new(field, u.to_vec())?);
    for lambda in field.elements() {
        let w: Vec<Fe> = v.iter().zip(u).map(|(&vi, &ui)| field.add(vi, field.mul(lambda, ui))).collect();
        out.push(DualPoint::new(field, w)?);
    }
    Ok(out)
}

/// Projection of the arc from its point `idx` into PG(k-2, q).
///
/// Uses the first coordinate `j` with `x_j != 0` and sends `a` to
/// `(a_i x_j - a_j x_i)_{i != j}`.
pub fn project(arc: &Arc, idx: usize) -> Result<Arc> {
    arc.check_index(idx)?;
    if arc.k() < 3 {
        return Err(Error::PreconditionFailed("projection needs k >= 3".into()));
    }
    let field = arc.field();
    let x = arc.rep(idx);
    let j = x.iter().position(|c| !c.is_zero()).expect("points are nonzero");
    let reps: Vec<Vec<Fe>> = arc
        .points()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, a)| {
            let a = a.rep();
            (0..arc.k()).filter(|&i| i != j).map(|i| field.sub(field.mul(a[i], x[j]), field.mul(a[j], x[i]))).collect()
        })
        .collect();
    Arc::new(field.clone(), arc.k() - 1, reps)
}

/// The k x n generator matrix of the code of an arc and its MDS status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsCheck {
    pub is_mds: bool,
    pub generator: Matrix,
    /// Column indices of the first vanishing maximal minor.
    pub witness: Option<Vec<usize>>,
}

pub fn mds_check(arc: &Arc) -> MdsCheck {
    let field = arc.field();
    let (k, n) = (arc.k(), arc.len());
    let mut generator = Matrix::zeros(k, n);
    for (c, p) in arc.points().iter().enumerate() {
        for (r, &v) in p.rep().iter().enumerate() {
            generator.set(r, c, v);
        }
    }
    let witness = (0..n).combinations(k).find(|cols| {
        let mut minor = Matrix::zeros(k, k);
        for (c, &col) in cols.iter().enumerate() {
            for r in 0..k {
                minor.set(r, c, generator.get(r, col));
            }
        }
        minor.det(field).expect("square").is_zero()
    });
    MdsCheck { is_mds: witness.is_none(), generator, witness }
}

/// The bundled test arcs: conics over q in {4, 5, 7, 8, 9} and twisted
/// cubics over q in {5, 7, 8}, labelled like `conic-q5` and `cubic-q7`.
pub fn reference_corpus() -> Vec<(String, Arc)> {
    let mut out = Vec::new();
    for q in [4u64, 5, 7, 8, 9] {
        let f = Field::with_order(q).expect("built-in field");
        out.push((format!("conic-q{q}"), conic(&f).expect("conic")));
    }
    for q in [5u64, 7, 8] {
        let f = Field::with_order(q).expect("built-in field");
        out.push((format!("cubic-q{q}"), normal_rational_curve(&f, 4).expect("twisted cubic")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Field, v: &[i64]) -> Vec<Fe> {
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn arc_examples() {
        let f3 = Field::new(3, 1, None).unwrap();
        let mut pts: Vec<Vec<Fe>> = (0..3).map(|s| ints(&f3, &[1, s, s * s])).collect();
        pts.push(ints(&f3, &[0, 0, 1]));
        assert!(is_arc(&f3, 3, &pts).unwrap().is_arc);
        pts.push(ints(&f3, &[2, 2, 2]));
        let chk = is_arc(&f3, 3, &pts).unwrap();
        assert!(!chk.is_arc);

        let f5 = Field::new(5, 1, None).unwrap();
        let frame = vec![
            ints(&f5, &[1, 0, 0]),
            ints(&f5, &[0, 1, 0]),
            ints(&f5, &[0, 0, 1]),
            ints(&f5, &[1, 1, 1]),
            ints(&f5, &[1, 1, 0]),
        ];
        let chk = is_arc(&f5, 3, &frame).unwrap();
        assert_eq!(chk, ArcCheck { is_arc: false, witness: Some(vec![0, 1, 4]) });
        assert!(matches!(is_arc(&f5, 3, &[ints(&f5, &[1, 0])]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(Arc::new(f5.clone(), 3, frame), Err(Error::NotAnArc(w)) if w == vec![0, 1, 4]));
    }

    #[test]
    fn few_points_report_repeats() {
        let f5 = Field::new(5, 1, None).unwrap();
        let pts = vec![ints(&f5, &[1, 2, 0]), ints(&f5, &[2, 4, 0])];
        assert_eq!(is_arc(&f5, 3, &pts).unwrap().witness, Some(vec![0, 1]));
    }

    #[test]
    fn normal_rational_curves() {
        for (q, k, t) in [(5u64, 3usize, 1u32), (7, 4, 2), (4, 3, 1), (8, 4, 2), (9, 3, 1)] {
            let f = Field::with_order(q).unwrap();
            let arc = normal_rational_curve(&f, k).unwrap();
            assert_eq!(arc.len(), q as usize + 1);
            assert_eq!(arc.t(), t);
            assert!(arc.verify().unwrap().is_arc);
        }
        let f3 = Field::new(3, 1, None).unwrap();
        assert!(matches!(normal_rational_curve(&f3, 5), Err(Error::KTooLarge { k: 5, max: 4 })));
        let f4 = Field::with_order(4).unwrap();
        let h = hyperoval(&f4).unwrap();
        assert_eq!((h.len(), h.t()), (6, 0));
        assert!(hyperoval(&Field::with_order(5).unwrap()).is_err());
    }

    #[test]
    fn pencils() {
        let f5 = Field::new(5, 1, None).unwrap();
        let s = [ints(&f5, &[1, 0, 0])];
        let lines = hyperplanes_through(&f5, 3, &s).unwrap();
        assert_eq!(lines.len(), 6);
        assert!(lines.iter().all(|l| l.contains(&f5, &s[0])));
        assert!(lines.iter().all_unique());

        let f3 = Field::new(3, 1, None).unwrap();
        let s = [ints(&f3, &[1, 0, 0, 0]), ints(&f3, &[0, 1, 0, 0])];
        let planes = hyperplanes_through(&f3, 4, &s).unwrap();
        assert_eq!(planes.len(), 4);
        assert!(planes.iter().all(|h| s.iter().all(|x| h.contains(&f3, x))));
        let dep = [ints(&f3, &[1, 0, 0, 0]), ints(&f3, &[2, 0, 0, 0])];
        assert!(matches!(hyperplanes_through(&f3, 4, &dep), Err(Error::DependentPoints)));
    }

    #[test]
    fn all_points_enumerated() {
        for (q, k) in [(2u64, 3usize), (3, 3), (4, 4), (5, 2)] {
            let f = Field::with_order(q).unwrap();
            let pts = projective_points(&f, k);
            let expected = ((q.pow(k as u32) - 1) / (q - 1)) as usize;
            assert_eq!(pts.len(), expected);
            assert!(pts.iter().all(|p| normalize(&f, p).as_ref() == Some(p)));
            assert!(pts.iter().all_unique());
        }
    }

    #[test]
    fn projection_examples() {
        let f5 = Field::new(5, 1, None).unwrap();
        let cubic = normal_rational_curve(&f5, 4).unwrap();
        let proj = project(&cubic, 5).unwrap();
        assert_eq!((proj.k(), proj.len(), proj.t()), (3, 5, cubic.t()));
        // from (0,0,0,1): j = 3, a -> (a_1, a_2, a_3) for a = (1, s, s^2, s^3)
        for (s, p) in proj.points().iter().enumerate() {
            let s = s as i64;
            assert_eq!(p.rep(), ints(&f5, &[1, s, s * s]).as_slice());
        }
        let conic5 = conic(&f5).unwrap();
        let line = project(&conic5, 0).unwrap();
        assert_eq!((line.k(), line.len()), (2, 5));
        assert!(line.points().iter().all_unique());
        assert!(matches!(project(&conic5, 6), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn projection_preserves_arcs_for_every_centre() {
        for (q, k) in [(5u64, 4usize), (7, 4), (8, 4), (4, 3), (9, 3), (7, 5)] {
            let f = Field::with_order(q).unwrap();
            let arc = normal_rational_curve(&f, k).unwrap();
            for idx in 0..arc.len() {
                let p = project(&arc, idx).unwrap();
                assert_eq!(p.t(), arc.t());
                assert!(p.verify().unwrap().is_arc);
            }
        }
    }

    #[test]
    fn mds_examples() {
        let f7 = Field::new(7, 1, None).unwrap();
        let nrc = normal_rational_curve(&f7, 4).unwrap();
        let chk = mds_check(&nrc);
        assert!(chk.is_mds);
        assert_eq!((chk.generator.rows(), chk.generator.cols()), (4, 8));

        let mut reps: Vec<Vec<Fe>> = nrc.points().iter().map(|p| p.rep().to_vec()).collect();
        // a point of the plane spanned by the first three
        reps[5] = (0..4).map(|i| f7.add(f7.add(reps[0][i], reps[1][i]), reps[2][i])).collect();
        let forged = Arc::new_unchecked(f7.clone(), 4, reps).unwrap();
        let chk = mds_check(&forged);
        assert!(!chk.is_mds);
        assert_eq!(chk.witness, Some(vec![0, 1, 2, 5]));

        let frame =
            Arc::new(f7.clone(), 3, vec![ints(&f7, &[1, 0, 0]), ints(&f7, &[0, 1, 0]), ints(&f7, &[0, 0, 1])]).unwrap();
        assert!(mds_check(&frame).is_mds);
    }

    #[test]
    fn rescaling_is_invisible_to_arc_tests() {
        let f = Field::with_order(9).unwrap();
        let arc = normal_rational_curve(&f, 3).unwrap();
        for lambda in f.elements().skip(1) {
            let r = arc.rescaled(4, lambda).unwrap();
            assert!(r.verify().unwrap().is_arc);
            assert!(mds_check(&r).is_mds);
            assert_eq!(r.points()[4], arc.points()[4]);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = Field::with_order(4).unwrap();
        let arc = conic(&f).unwrap();
        let v = arc.to_json();
        assert_eq!(v["points"][2][1], json!([0, 1]));
        assert_eq!(Arc::from_json(&v).unwrap(), arc);
        let text = serde_json::to_string(&v).unwrap();
        let again: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&Arc::from_json(&again).unwrap().to_json()).unwrap(), text);
    }
}
