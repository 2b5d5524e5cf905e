//! The shipped catalog loads, validates and produces certificates.

use tamenorm_core::catalog::{shipped_catalog_dir, Catalog};
use tamenorm_core::euler::{norm_relation_certificate, QMode};
use tamenorm_core::rootdata::{RootDatum, WeightOrbitRep};
use tamenorm_core::spherical::{extend_with_bundle, validate_datum, SphericalDatum};

fn catalog() -> Catalog {
    Catalog::load(&[shipped_catalog_dir()]).expect("shipped catalog loads")
}

#[test]
fn all_entries_and_bundles_validate() {
    let cat = catalog();
    let ids: Vec<&str> = cat.entries.iter().map(|e| e.id()).collect();
    assert_eq!(ids, ["ggp-1", "pgl2-group", "t-gl2", "t-pgl2"]);
    for e in &cat.entries {
        let r = e.validate();
        assert!(r.passed(), "{r}");
        let b = e.bundle.as_ref().expect("bundle block");
        let ext = extend_with_bundle(&e.datum, b).unwrap();
        let r = validate_datum(&ext);
        assert!(r.passed(), "{r}");
        for op in &e.operators {
            WeightOrbitRep::new(&e.datum.group, op.highest_weight.clone()).unwrap();
        }
    }
}

#[test]
fn group_entry_matches_constructor() {
    let cat = catalog();
    let e = cat.get("pgl2-group").unwrap();
    let built = SphericalDatum::group_case(&RootDatum::pgl2(), "pgl2-group").unwrap();
    let d = &e.datum;
    assert_eq!(d.proj, built.proj);
    assert_eq!(d.section, built.section);
    assert_eq!(d.height, built.height);
    assert_eq!(d.cone_ineqs, built.cone_ineqs);
    assert_eq!(d.half_sums, built.half_sums);
    assert_eq!(d.theta_plus, built.theta_plus);
    assert_eq!(d.spherical_roots, built.spherical_roots);
    assert_eq!(d.group.simple_roots, built.group.simple_roots);
    assert_eq!(d.group.simple_coroots, built.group.simple_coroots);
}

#[test]
fn symbolic_certificates_are_deterministic() {
    let cat = catalog();
    let mut invalid = Vec::new();
    for e in &cat.entries {
        let b = e.bundle.as_ref().unwrap();
        for op in &e.operators {
            let v = WeightOrbitRep::new(&e.datum.group, op.highest_weight.clone()).unwrap();
            let run = || {
                norm_relation_certificate(&e.datum, b, &op.name, &v, 6, QMode::Symbolic, None)
                    .unwrap()
                    .to_canonical()
            };
            let text = run();
            assert_eq!(text, run());
            if !text.ends_with("verdict VALID\n") {
                invalid.push(format!("{} {}:\n{text}", e.id(), op.name));
            }
        }
    }
    assert!(invalid.is_empty(), "{}", invalid.join("\n"));
}

#[test]
fn operator_outside_the_relation_is_rejected() {
    let cat = catalog();
    let e = cat.get("ggp-1").unwrap();
    let v = WeightOrbitRep::new(&e.datum.group, vec![0, 1, 0]).unwrap();
    let cert = norm_relation_certificate(
        &e.datum,
        e.bundle.as_ref().unwrap(),
        "gl2",
        &v,
        6,
        QMode::Symbolic,
        None,
    )
    .unwrap();
    assert!(!cert.divisibility.verdict);
    assert!(!cert.is_valid());
}
