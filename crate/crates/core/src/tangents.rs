//! Tangent hyperplanes, the scaled tangent forms f_S and the function g.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::forms::{product_linear_forms, HomogeneousForm, LinearForm};
use crate::geometry::{hyperplanes_through, Arc, DualPoint};
use crate::report::{Check, Report};

/// Parity of the permutation that sorts a tuple, by inversion count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Parity(u8);

impl Parity {
    pub const EVEN: Parity = Parity(0);
    pub const ODD: Parity = Parity(1);

    pub fn of(tuple: &[usize]) -> Parity {
        let inversions = tuple.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        Parity((inversions % 2) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 == 1
    }

    /// `(-1)^{s(t+1)}` for this parity `s`.
    pub fn sign(self, field: &Field, t: u32) -> Fe {
        field.sign(self.is_odd() && t.is_multiple_of(2))
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    // Addition in Z/2.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, other: Parity) -> Parity {
        Parity(self.0 ^ other.0)
    }
}

fn check_subset(arc: &Arc, s: &[usize], size: usize) -> Result<Vec<usize>> {
    if s.len() != size {
        return Err(Error::DimensionMismatch { expected: size, got: s.len() });
    }
    for &i in s {
        arc.check_index(i)?;
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::PreconditionFailed(format!("index set {s:?} has a repeated entry")));
    }
    Ok(sorted)
}

fn require_t(arc: &Arc) -> Result<u32> {
    match arc.t() {
        0 => Err(Error::DegenerateT),
        t => Ok(t),
    }
}

/// The t hyperplanes meeting the arc exactly in the points indexed by `s`.
pub fn tangent_hyperplanes(arc: &Arc, s: &[usize]) -> Result<Vec<DualPoint>> {
    let t = require_t(arc)?;
    let sorted = check_subset(arc, s, arc.k() - 2)?;
    let field = arc.field();
    let span: Vec<&[Fe]> = sorted.iter().map(|&i| arc.rep(i)).collect();
    let tangents: Vec<DualPoint> = hyperplanes_through(field, arc.k(), &span)?
        .into_iter()
        .filter(|h| {
            arc.points()
                .iter()
                .enumerate()
                .all(|(i, p)| sorted.binary_search(&i).is_ok() || !h.contains(field, p.rep()))
        })
        .collect();
    if tangents.len() != t as usize {
        return Err(Error::TangentCountMismatch { subset: sorted, expected: t as usize, found: tangents.len() });
    }
    Ok(tangents)
}

/// All `size`-subsets of `0..n` as sorted tuples, grouped by how many
/// entries lie outside `0..size`, colexicographic within a group.
pub fn subset_order(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..n).combinations(size).collect();
    all.sort_by_key(|s| (s.iter().filter(|&&i| i >= size).count(), s.iter().rev().copied().collect::<Vec<_>>()));
    all
}

/// Data of one scaling step: `f_S(e) = sign * f_{S'}(a)`.
struct Step {
    e: usize,
    a: usize,
    prev: Vec<usize>,
    parity: Parity,
}

fn step_for(s: &[usize], base: &[usize]) -> Option<Step> {
    let e = *base.iter().find(|i| !s.contains(i))?;
    let a = *s.iter().rev().find(|i| !base.contains(i))?;
    let mut prev: Vec<usize> = s.iter().copied().filter(|&i| i != a).chain([e]).collect();
    prev.sort_unstable();
    // S is sorted, so the concatenation S, e has one inversion per element above e
    let parity = Parity((s.iter().filter(|&&x| x > e).count() % 2) as u8);
    Some(Step { e, a, prev, parity })
}

/// The scaled tangent forms of an arc, one per (k-2)-subset of indices.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSystem {
    arc: Arc,
    base: Vec<usize>,
    anchor: usize,
    forms: BTreeMap<Vec<usize>, HomogeneousForm>,
}

impl TangentSystem {
    pub fn build(arc: &Arc) -> Result<TangentSystem> {
        let t = require_t(arc)?;
        let field = arc.field();
        let k = arc.k();
        let base: Vec<usize> = (0..k - 2).collect();
        let anchor = k - 2;
        let mut forms = BTreeMap::new();
        for s in subset_order(arc.len(), k - 2) {
            let factors: Vec<LinearForm> = tangent_hyperplanes(arc, &s)?
                .into_iter()
                .map(|h| HomogeneousForm::linear(h.coords().to_vec()))
                .collect();
            let unscaled = product_linear_forms(field, k, &factors)?;
            let (target, point) = match step_for(&s, &base) {
                None => (field.one(), anchor),
                Some(step) => {
                    let prev: &HomogeneousForm = &forms[&step.prev];
                    let v = prev.evaluate(field, arc.rep(step.a))?;
                    (field.mul(step.parity.sign(field, t), v), step.e)
                }
            };
            let at = unscaled.evaluate(field, arc.rep(point))?;
            let lambda = field.div(target, at).map_err(|_| {
                Error::PreconditionFailed(format!("tangent form of {s:?} vanishes at arc point {point}"))
            })?;
            forms.insert(s, unscaled.scale(field, lambda));
        }
        Ok(TangentSystem { arc: arc.clone(), base, anchor, forms })
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn field(&self) -> &Field {
        self.arc.field()
    }

    pub fn t(&self) -> u32 {
        self.arc.t()
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// `f_S` for the set `s`, given in any order.
    pub fn form(&self, s: &[usize]) -> Result<&HomogeneousForm> {
        let sorted = check_subset(&self.arc, s, self.arc.k() - 2)?;
        Ok(&self.forms[&sorted])
    }

    pub fn forms(&self) -> impl Iterator<Item = (&[usize], &HomogeneousForm)> {
        self.forms.iter().map(|(s, f)| (s.as_slice(), f))
    }

    /// Overwrites one stored form without any consistency check.
    pub fn replace_form(&mut self, s: &[usize], form: HomogeneousForm) -> Result<()> {
        let sorted = check_subset(&self.arc, s, self.arc.k() - 2)?;
        if form.k() != self.arc.k() || form.degree() != self.t() {
            return Err(Error::DimensionMismatch { expected: self.t() as usize, got: form.degree() as usize });
        }
        self.forms.insert(sorted, form);
        Ok(())
    }

    /// `g(S, a) = (-1)^{s(t+1)} f_S(a)`, zero on tuples with repeats.
    pub fn g_value(&self, tuple: &[usize]) -> Result<Fe> {
        let k = self.arc.k();
        if tuple.len() != k - 1 {
            return Err(Error::DimensionMismatch { expected: k - 1, got: tuple.len() });
        }
        for &i in tuple {
            self.arc.check_index(i)?;
        }
        if !tuple.iter().all_unique() {
            return Ok(self.field().zero());
        }
        let (s, a) = tuple.split_at(k - 2);
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        let v = self.forms[&sorted].evaluate(self.field(), self.arc.rep(a[0]))?;
        Ok(self.field().mul(Parity::of(s).sign(self.field(), self.t()), v))
    }

    pub fn to_json(&self) -> Value {
        let field = self.field();
        let fs: Vec<Value> = self.forms.iter().map(|(s, f)| json!({ "S": s, "form": f.to_json(field) })).collect();
        json!({ "E": self.base, "anchor": self.anchor, "fS": fs })
    }

    /// Reloads a dump against its arc. Every subset must be present once.
    pub fn from_json(arc: &Arc, v: &Value) -> Result<TangentSystem> {
        require_t(arc)?;
        let field = arc.field();
        let k = arc.k();
        let indices = |v: &Value, what: &str| -> Result<Vec<usize>> {
            v.as_array()
                .ok_or_else(|| Error::Malformed(format!("\"{what}\" must be an index array")))?
                .iter()
                .map(|i| {
                    i.as_u64().map(|i| i as usize).ok_or_else(|| Error::Malformed(format!("bad index in \"{what}\"")))
                })
                .collect()
        };
        let base = indices(&v["E"], "E")?;
        let anchor = v["anchor"].as_u64().ok_or_else(|| Error::Malformed("missing \"anchor\"".into()))? as usize;
        if base != (0..k - 2).collect::<Vec<_>>() || anchor != k - 2 {
            return Err(Error::Malformed("\"E\" and \"anchor\" must be the first arc indices".into()));
        }
        let entries = v["fS"].as_array().ok_or_else(|| Error::Malformed("missing \"fS\" array".into()))?;
        let mut forms = BTreeMap::new();
        for entry in entries {
            let s = check_subset(arc, &indices(&entry["S"], "S")?, k - 2)?;
            let form = HomogeneousForm::from_json(field, &entry["form"])?;
            if form.k() != k || form.degree() != arc.t() {
                return Err(Error::Malformed(format!("form for {s:?} has the wrong shape")));
            }
            if forms.insert(s.clone(), form).is_some() {
                return Err(Error::Malformed(format!("subset {s:?} listed twice")));
            }
        }
        let expected = crate::forms::binomial(arc.len() as u64, (k - 2) as u64) as usize;
        if forms.len() != expected {
            return Err(Error::Malformed(format!("expected {expected} subsets, found {}", forms.len())));
        }
        Ok(TangentSystem { arc: arc.clone(), base, anchor, forms })
    }
}

/// Every (k-2)-subset has exactly t tangent hyperplanes.
pub fn verify_tangent_counts(arc: &Arc) -> Result<Check> {
    require_t(arc)?;
    let mut check = Check::new("tangent_counts");
    for s in (0..arc.len()).combinations(arc.k() - 2) {
        match tangent_hyperplanes(arc, &s) {
            Ok(_) => check.record(true, || Value::Null),
            Err(Error::TangentCountMismatch { found, .. }) => {
                check.record(false, || json!({ "S": s, "expected": arc.t(), "found": found }))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(check)
}

/// Replays the normalization and every scaling step.
pub fn verify_scaling(ts: &TangentSystem) -> Result<Check> {
    let field = ts.field();
    let arc = ts.arc();
    let mut check = Check::new("scaling");
    for (s, f) in ts.forms() {
        let (lhs, rhs, point) = match step_for(s, ts.base()) {
            None => (f.evaluate(field, arc.rep(ts.anchor()))?, field.one(), ts.anchor()),
            Some(step) => {
                let prev = ts.form(&step.prev)?.evaluate(field, arc.rep(step.a))?;
                (f.evaluate(field, arc.rep(step.e))?, field.mul(step.parity.sign(field, ts.t()), prev), step.e)
            }
        };
        check.record(lhs == rhs, || {
            json!({ "S": s, "at": point, "value": field.element_to_json(lhs), "expected": field.element_to_json(rhs) })
        });
    }
    Ok(check)
}

/// Each f_S vanishes on S and at no other arc point.
pub fn verify_tangency(ts: &TangentSystem) -> Result<Check> {
    let field = ts.field();
    let mut check = Check::new("exact_tangency");
    for (s, f) in ts.forms() {
        for (i, p) in ts.arc().points().iter().enumerate() {
            let zero = f.evaluate(field, p.rep())?.is_zero();
            check.record(zero == s.contains(&i), || json!({ "S": s, "x": i, "vanishes": zero }));
        }
    }
    Ok(check)
}

/// Swaps of neighbouring entries in every ordering of every (k-1)-subset,
/// then `samples` random (tuple, permutation) pairs drawn from `seed`.
pub fn verify_lemma(ts: &TangentSystem, seed: u64, samples: usize) -> Result<Vec<Check>> {
    let field = ts.field();
    let arc = ts.arc();
    let k = arc.k();
    let flip = field.sign(ts.t().is_multiple_of(2));
    let mut adjacent = Check::new("lemma_adjacent");
    for subset in (0..arc.len()).combinations(k - 1) {
        for tuple in subset.iter().copied().permutations(k - 1) {
            let g = ts.g_value(&tuple)?;
            for j in 0..k.saturating_sub(2) {
                let mut swapped = tuple.clone();
                swapped.swap(j, j + 1);
                let gs = ts.g_value(&swapped)?;
                adjacent.record(gs == field.mul(flip, g), || {
                    json!({ "T": tuple, "swap": [j, j + 1], "g": field.element_to_json(g), "g_swapped": field.element_to_json(gs) })
                });
            }
        }
    }
    let mut random = Check::new("lemma_random");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices: Vec<usize> = (0..arc.len()).collect();
    for _ in 0..samples {
        let tuple: Vec<usize> = indices.choose_multiple(&mut rng, k - 1).copied().collect();
        let mut sigma: Vec<usize> = (0..k - 1).collect();
        sigma.shuffle(&mut rng);
        let permuted: Vec<usize> = sigma.iter().map(|&i| tuple[i]).collect();
        let (g, gp) = (ts.g_value(&tuple)?, ts.g_value(&permuted)?);
        let expected = field.mul(Parity::of(&sigma).sign(field, ts.t()), g);
        random.record(gp == expected, || json!({ "T": tuple, "sigma": sigma, "g": field.element_to_json(g), "g_permuted": field.element_to_json(gp) }));
    }
    Ok(vec![adjacent, random])
}

/// Tangent counts, scaling replay, exact tangency and the permutation law for g.
pub fn verify_lemma_of_tangents(ts: &TangentSystem, seed: u64) -> Result<Report> {
    let mut report = Report::new("tangents lemma-check", json!({ "seed": seed }));
    report.push(verify_tangent_counts(ts.arc())?);
    report.push(verify_scaling(ts)?);
    report.push(verify_tangency(ts)?);
    report.extend(verify_lemma(ts, seed, 100)?);
    Ok(report)
}
