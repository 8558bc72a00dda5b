//! Inputs shared by the benchmarks.

use arctensor::geometry::{conic, normal_rational_curve};
use arctensor::{Arc, Field};

/// Named arcs of increasing size: conics and twisted cubics.
pub fn workloads() -> Vec<(String, Arc)> {
    let mut out = Vec::new();
    for q in [5, 9, 13] {
        let f = Field::with_order(q).expect("prime power");
        out.push((format!("conic-q{q}"), conic(&f).expect("conic")));
    }
    for q in [5, 7, 9] {
        let f = Field::with_order(q).expect("prime power");
        out.push((format!("cubic-q{q}"), normal_rational_curve(&f, 4).expect("nrc")));
    }
    out
}

/// The first `n` points of the twisted cubic over GF(q), an arc with larger t.
pub fn truncated_cubic(q: u64, n: usize) -> Arc {
    let f = Field::with_order(q).expect("prime power");
    let full = normal_rational_curve(&f, 4).expect("nrc");
    Arc::new(f, 4, full.points()[..n].iter().map(|p| p.rep().to_vec()).collect()).expect("subset of an arc")
}
