//! Runs every applicable verifier on one arc.

use serde_json::json;

use crate::error::{Error, Result};
use crate::forms::vanishing_subspace;
use crate::geometry::{mds_check, Arc};
use crate::report::{Check, Report};
use crate::sbbt::{build_sbbt, verify_sbbt};
use crate::tangents::{verify_lemma_of_tangents, TangentSystem};
use crate::tensorform::{build_tensor_form, quadric_check, verify_coefficient_forms, verify_tensor_form};

/// Verifiers that do not apply to the arc (t = 0, arc too small for φ,
/// wrong shape for the quadric check) are listed under `skipped`.
pub fn run_suite(arc: &Arc, seed: u64) -> Result<Report> {
    let field = arc.field();
    let mut report =
        Report::new("suite", json!({ "q": field.q(), "k": arc.k(), "n": arc.len(), "t": arc.t(), "seed": seed }));
    let mut skipped = Vec::new();

    let mut is_arc = Check::new("arc.is_arc");
    let chk = arc.verify()?;
    is_arc.record(chk.is_arc, || json!({ "witness": chk.witness }));
    report.push(is_arc);
    let mds = mds_check(arc);
    let mut c = Check::new("arc.mds");
    c.record(mds.is_mds, || json!({ "witness": mds.witness }));
    report.push(c);

    if arc.t() == 0 {
        skipped.push(json!({ "verifier": "tangents", "reason": "t = 0" }));
        report.observe("skipped", json!(skipped));
        return Ok(report);
    }
    let t = arc.t();
    report.observe("dim_phi_t", json!(vanishing_subspace(field, arc.k(), arc.points(), t)?.dim()));

    let ts = TangentSystem::build(arc)?;
    report.absorb("tangents", verify_lemma_of_tangents(&ts, seed)?);

    let f = build_tensor_form(arc, &ts)?;
    report.absorb("tensor", verify_tensor_form(arc, &ts, &f)?);
    report.absorb("tensor", verify_coefficient_forms(arc, &f)?);

    match quadric_check(arc) {
        Ok(qc) => {
            let mut c = Check::new("tensor.quadric");
            c.record(qc.form.is_some(), || json!({ "dim_phi_2": qc.dim }));
            report.push(c);
        }
        Err(Error::PreconditionFailed(reason)) => skipped.push(json!({ "verifier": "quadric", "reason": reason })),
        Err(e) => return Err(e),
    }

    match build_sbbt(arc, &ts) {
        Ok(sb) => {
            let mut sub = verify_sbbt(arc, &ts, &sb, seed)?;
            sub.observations.remove("classification");
            report.absorb("sbbt", sub);
        }
        Err(Error::SizeTooSmall { n, needed }) => {
            skipped.push(json!({ "verifier": "sbbt", "reason": format!("n = {n} < mt + k - 1 = {needed}") }))
        }
        Err(e) => return Err(e),
    }
    if !skipped.is_empty() {
        report.observe("skipped", json!(skipped));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::geometry::{hyperoval, reference_corpus};

    #[test]
    fn corpus_passes() {
        for (name, arc) in reference_corpus() {
            let r = run_suite(&arc, 0).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn hyperoval_stops_after_the_arc_checks() {
        let r = run_suite(&hyperoval(&Field::with_order(8).unwrap()).unwrap(), 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks.len(), 2);
        assert!(r.observations.contains_key("skipped"));
    }
}
