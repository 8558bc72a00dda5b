use arctensor::geometry::reference_corpus;
use arctensor::sbbt::{build_sbbt, verify_sbbt};
use arctensor::suite::run_suite;
use arctensor::tensorform::{build_tensor_form, verify_tensor_form};
use arctensor::{Arc, Error, MultiForm, SbbtForm, TangentSystem};

#[test]
fn artifacts_reload_and_verify_identically() {
    for (name, arc) in reference_corpus() {
        let field = arc.field();
        let arc_text = serde_json::to_string(&arc.to_json()).unwrap();
        let back = Arc::from_json(&serde_json::from_str(&arc_text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), arc_text, "{name}");

        let ts = TangentSystem::build(&arc).unwrap();
        let ts_back = TangentSystem::from_json(&back, &ts.to_json()).unwrap();
        assert_eq!(ts_back.to_json(), ts.to_json(), "{name}");

        let f = build_tensor_form(&arc, &ts).unwrap();
        let f_back = MultiForm::from_json(field, &f.to_json(field)).unwrap();
        assert_eq!(f_back, f);
        let (a, b) =
            (verify_tensor_form(&arc, &ts, &f).unwrap(), verify_tensor_form(&back, &ts_back, &f_back).unwrap());
        assert_eq!(a.checks, b.checks, "{name}");
        assert!(a.passed(), "{name}");

        let sb = match build_sbbt(&arc, &ts) {
            Err(Error::SizeTooSmall { .. }) => continue,
            other => other.unwrap(),
        };
        let sb_back = SbbtForm::from_json(field, &sb.to_json(field)).unwrap();
        assert_eq!(sb_back.to_json(field), sb.to_json(field));
        let r = verify_sbbt(&back, &ts_back, &sb_back, 1).unwrap();
        assert!(r.passed(), "{name}");
    }
}

#[test]
fn suite_passes_on_reversed_corpus() {
    for (name, arc) in reference_corpus() {
        let order: Vec<usize> = (0..arc.len()).rev().collect();
        let r = run_suite(&arc.reordered(&order).unwrap(), 3).unwrap();
        assert!(
            r.passed(),
            "{name}: {:?}",
            r.checks.iter().filter(|c| !c.passed()).map(|c| &c.name).collect::<Vec<_>>()
        );
    }
}
