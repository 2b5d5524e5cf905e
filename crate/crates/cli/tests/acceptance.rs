//! Acceptance suite: one PASS/FAIL line per criterion, with pinned tolerances.
//!
//! Every criterion is computed in full and reported as measured. Two outcomes
//! are pinned as known failures (literal per-coefficient wall divisibility,
//! and shear integrality of the GL3 standard Hecke polynomial); the process
//! exits non-zero only when some outcome differs from its pinned expectation.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

use tamenorm_core::catalog::{shipped_catalog_dir, Catalog, CatalogEntry};
use tamenorm_core::coeffs::{
    dot, geometric_expand, ConeSeries, GroupAlgebraElement, Lattice, Point, QLaurent, Window,
};
use tamenorm_core::euler::{
    check_wall_divisibility, combined_expansion, q1_antisymmetry_check, trace_preimage, verify_trace,
};
use tamenorm_core::rootdata::{hecke_polynomial, RootDatum, WeightOrbitRep};
use tamenorm_core::satake::{inverse_satake_expand, is_x_integral, HeckeOperator, IntegralityVerdict};
use tamenorm_core::spherical::{extend_with_bundle, type_t_walls, RootType, SphericalDatum};
use tamenorm_oracle::compare::{compare_with_symbolic, model_datum};
use tamenorm_oracle::RankOneModel;

const IDENTITY_WINDOW: i64 = 6;
const IDENTITY_BUDGET: Duration = Duration::from_secs(1);
const HOMOGENEOUS_WINDOW: i64 = 4;
const HOMOGENEOUS_PRECISION: i64 = 12;
const HOMOGENEOUS_BUDGET: Duration = Duration::from_secs(120);
const TEMPERED_WINDOW: i64 = 3;
const TEMPERED_PRIME: u64 = 3;
const TEMPERED_PRECISION: i64 = 14;
const TEMPERED_BUDGET: Duration = Duration::from_secs(300);
const DIVISIBILITY_WINDOW: i64 = 6;
const DIVISIBILITY_BUDGET: Duration = Duration::from_secs(10);
const SYMMETRY_WINDOW: i64 = 6;
const ORBIT_HEIGHT: i64 = 3;
const ORBIT_PRECISION: i64 = 12;
const ORBIT_BUDGET: Duration = Duration::from_secs(300);
const TRACE_WINDOW: i64 = 6;
const TRACE_PRECISION: i64 = 16;
const PROPERTY_CASES: u32 = 10_000;
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);

/// Outcome of one criterion, with the expectation pinned by the suite.
struct Verdict {
    number: u32,
    title: &'static str,
    passed: bool,
    expected: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn print(&self) {
        let status = if self.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {status} {}: {}", self.number, self.title, self.summary);
        for d in &self.details {
            println!("    {d}");
        }
    }
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn timing(elapsed: Duration, budget: Duration) -> String {
    format!("{:.2}s of {}s", elapsed.as_secs_f64(), budget.as_secs())
}

fn catalog() -> Catalog {
    Catalog::load(&[shipped_catalog_dir()]).expect("shipped catalog loads")
}

fn hecke(entry: &CatalogEntry, op: usize) -> (WeightOrbitRep, Vec<GroupAlgebraElement>) {
    let group = &entry.datum.group;
    let v = WeightOrbitRep::new(group, entry.operators[op].highest_weight.clone()).expect("minuscule weight");
    let hp = hecke_polynomial(group, &v).expect("hecke polynomial");
    (v, hp)
}

/// Cone points with height `>= -h` and every coordinate in `[-h, h]`.
fn cone_points(d: &SphericalDatum, h: i64) -> Vec<Point> {
    let rank = d.rank_x() as u32;
    let side = 2 * h + 1;
    (0..side.pow(rank))
        .map(|mut i| {
            (0..rank)
                .map(|_| {
                    let x = i % side - h;
                    i /= side;
                    x
                })
                .collect::<Point>()
        })
        .filter(|pt| d.in_cone(pt) && d.height_of(pt) >= -h)
        .collect()
}

fn basic_function_identity(cat: &Catalog) -> Verdict {
    let mut details = Vec::new();
    let mut passed = true;
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for e in &cat.entries {
        let mut data = vec![e.datum.clone()];
        if let Some(b) = &e.bundle {
            data.push(extend_with_bundle(&e.datum, b).expect("bundle extends"));
        }
        for d in data {
            let start = Instant::now();
            let one = GroupAlgebraElement::one(&d.lattice_x);
            let exp = inverse_satake_expand(&d, &one, IDENTITY_WINDOW).expect("expansion");
            let ok = exp.restricted.to_element() == one;
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            count += 1;
            if !ok || !within(elapsed, IDENTITY_BUDGET) {
                passed = false;
                details.push(format!("{} (rank {}): restricted series {}", d.id, d.rank_x(), exp.restricted.to_canonical()));
            }
        }
    }
    Verdict {
        number: 1,
        title: "basic-function identity",
        passed,
        expected: true,
        summary: format!(
            "{count} data (entries and bundle extensions), N={IDENTITY_WINDOW}, restricted series equals e^0 exactly, slowest {}",
            timing(slowest, IDENTITY_BUDGET)
        ),
        details,
    }
}

fn homogeneous_oracle(cat: &Catalog) -> Verdict {
    let e = cat.get("t-gl2").expect("t-gl2 shipped");
    let (_, hp) = hecke(e, 0);
    let c1 = hp[1].clone();
    let square = c1.mul(&c1).expect("same lattice");
    let start = Instant::now();
    let mut details = Vec::new();
    let mut points = 0;
    let mut mismatches = 0;
    for (name, op) in [("c1", c1), ("c1^2", square)] {
        for p in [2u64, 3, 5] {
            let r = compare_with_symbolic(e, &vec![(0, op.clone())], false, HOMOGENEOUS_WINDOW, p, HOMOGENEOUS_PRECISION)
                .expect("oracle comparison runs");
            points += r.rows.len();
            let bad = r.mismatches().count();
            mismatches += bad;
            if bad > 0 {
                details.push(format!("{name} p={p}: first mismatch {:?}", r.first_mismatch().map(|m| &m.point)));
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        number: 2,
        title: "oracle equivalence, homogeneous branch",
        passed: mismatches == 0 && within(elapsed, HOMOGENEOUS_BUDGET),
        expected: true,
        summary: format!(
            "t-gl2 c1 and c1^2, N={HOMOGENEOUS_WINDOW}, p in {{2,3,5}}, precision {HOMOGENEOUS_PRECISION}: {points} point values, {mismatches} mismatches, {}",
            timing(elapsed, HOMOGENEOUS_BUDGET)
        ),
        details,
    }
}

fn tempered_oracle(cat: &Catalog) -> Verdict {
    let e = cat.get("ggp-1").expect("ggp-1 shipped");
    let (_, hp) = hecke(e, 0);
    let start = Instant::now();
    let mut details = Vec::new();
    let mut points = 0;
    let mut mismatches = 0;
    for (k, c) in hp.iter().enumerate() {
        let r = compare_with_symbolic(e, &vec![(0, c.clone())], false, TEMPERED_WINDOW, TEMPERED_PRIME, TEMPERED_PRECISION)
            .expect("oracle comparison runs");
        points += r.rows.len();
        let bad = r.mismatches().count();
        mismatches += bad;
        if bad > 0 {
            details.push(format!("c{k}: first mismatch {:?}", r.first_mismatch().map(|m| &m.point)));
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        number: 3,
        title: "oracle equivalence, strongly tempered branch",
        passed: mismatches == 0 && within(elapsed, TEMPERED_BUDGET),
        expected: true,
        summary: format!(
            "ggp-1 std x std c0..c{}, N={TEMPERED_WINDOW}, p={TEMPERED_PRIME}, precision {TEMPERED_PRECISION}: {points} point values, {mismatches} mismatches, {}",
            hp.len() - 1,
            timing(elapsed, TEMPERED_BUDGET)
        ),
        details,
    }
}

fn wall_divisibility(cat: &Catalog) -> Verdict {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut info = Vec::new();
    let mut checked = 0;
    let mut failing = 0;
    let mut combined_ok = true;
    for e in cat.entries.iter().filter(|e| e.datum.type_t_roots().next().is_some()) {
        let (v, hp) = hecke(e, 0);
        for (k, c) in hp.iter().enumerate() {
            let lx = tamenorm_core::satake::restrict_to_x(&e.datum, c);
            let exp = inverse_satake_expand(&e.datum, &lx, DIVISIBILITY_WINDOW).expect("expansion");
            for (pt, coeff) in exp.full.terms() {
                if type_t_walls(&e.datum, pt).is_empty() {
                    continue;
                }
                checked += 1;
                if !coeff.divisible_by_qminus1().unwrap_or(false) {
                    failing += 1;
                    if failing <= 6 {
                        details.push(format!("{} c{k} at {pt:?}: {coeff}", e.id()));
                    }
                }
            }
        }
        let bundle = e.bundle.as_ref().expect("bundle shipped");
        let (ext, _, exp) = combined_expansion(&e.datum, bundle, &v, DIVISIBILITY_WINDOW).expect("combined expansion");
        let report = check_wall_divisibility(&ext, &exp.restricted);
        combined_ok &= report.verdict;
        info.push(format!(
            "info: {} whole Hecke polynomial on the bundle extension: {} restricted points, divisibility {}",
            e.id(),
            report.records.len(),
            if report.verdict { "holds" } else { "fails" }
        ));
    }
    let elapsed = start.elapsed();
    if failing > 6 {
        details.push(format!("... {} further failing points", failing - 6));
    }
    details.extend(info);
    details.push(
        "info: c0 = 1 expands to 1 at the origin, which lies on every type-T wall, so the per-coefficient statement cannot hold"
            .to_string(),
    );
    let passed = failing == 0 && within(elapsed, DIVISIBILITY_BUDGET);
    Verdict {
        number: 4,
        title: "wall divisibility per Hecke-polynomial coefficient",
        passed,
        // Pinned: the per-coefficient statement fails while the combined form holds.
        expected: !combined_ok,
        summary: format!(
            "t-gl2, t-pgl2, ggp-1, N={DIVISIBILITY_WINDOW}: {checked} wall coefficients checked, {failing} not in (q-1)Z[q^(+-1)], {}",
            timing(elapsed, DIVISIBILITY_BUDGET)
        ),
        details,
    }
}

fn antisymmetry(cat: &Catalog) -> Verdict {
    let mut details = Vec::new();
    let mut passed = true;
    let (mut pairs, mut roots) = (0, 0);
    for e in &cat.entries {
        let (v, _) = hecke(e, 0);
        let bundle = e.bundle.as_ref().expect("bundle shipped");
        let (ext, _, exp) = combined_expansion(&e.datum, bundle, &v, SYMMETRY_WINDOW).expect("combined expansion");
        for (i, root) in ext.spherical_roots.iter().enumerate() {
            let r = q1_antisymmetry_check(&ext, &exp.full, i).expect("window is non-negative");
            let want = if root.kind == RootType::T { -1 } else { 1 };
            roots += 1;
            pairs += r.pairs;
            if !r.passed() || r.sign != want {
                passed = false;
                details.push(format!("{} root {i}: {} failing pairs, first {:?}", e.id(), r.failures.len(), r.failures.first()));
            }
        }
        // The identity alone is not antisymmetric on type-T walls; shown for contrast.
        let one = GroupAlgebraElement::one(&e.datum.lattice_x);
        let identity = inverse_satake_expand(&e.datum, &one, SYMMETRY_WINDOW).expect("expansion");
        let broken: usize = (0..e.datum.spherical_roots.len())
            .map(|i| q1_antisymmetry_check(&e.datum, &identity.full, i).expect("window is non-negative").failures.len())
            .sum();
        details.push(format!("info: {} identity series on the base variety: {broken} failing pairs", e.id()));
    }
    Verdict {
        number: 5,
        title: "q=1 antisymmetry",
        passed,
        expected: true,
        summary: format!(
            "whole Hecke polynomial on each bundle extension, N={SYMMETRY_WINDOW}: {roots} roots, {pairs} reflection pairs, sign -1 on type T and +1 on type G"
        ),
        details,
    }
}

fn orbit_geometry(cat: &Catalog) -> Verdict {
    let start = Instant::now();
    let mut details = Vec::new();
    let (mut off_wall, mut deficient, mut bad) = (0, 0, 0);
    for e in &cat.entries {
        let Some(model_id) = e.oracle_model.as_deref() else { continue };
        let d = model_datum(e, true).expect("bundle datum");
        for p in [3u64, 5] {
            let m = RankOneModel::new(&format!("{model_id}-bundle"), p, ORBIT_PRECISION).expect("model");
            for pt in cone_points(&d, ORBIT_HEIGHT) {
                let n = m.k1_orbit_count(&pt).expect("orbit count");
                let on_wall = !type_t_walls(&d, &pt).is_empty();
                if !on_wall {
                    off_wall += 1;
                }
                if n != p - 1 {
                    deficient += 1;
                }
                if (!on_wall && n != p - 1) || (p - 1) % n != 0 {
                    bad += 1;
                    details.push(format!("{model_id}-bundle p={p} {pt:?}: {n} orbits, on wall {on_wall}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        number: 6,
        title: "orbit geometry",
        passed: bad == 0 && within(elapsed, ORBIT_BUDGET),
        expected: true,
        summary: format!(
            "bundle models, p in {{3,5}}, height <= {ORBIT_HEIGHT}: {off_wall} off-wall points with p-1 orbits, {deficient} deficient points all on walls, {}",
            timing(elapsed, ORBIT_BUDGET)
        ),
        details,
    }
}

fn certify_run(entry: &str) -> (Option<i32>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_tamenorm"))
        .args(["certify", "--entry", entry, "--operator", "std", "--window", "6", "--q", "3", "--oracle-primes", "3"])
        .output()
        .expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout);
    (out.status.code(), text.contains("verdict VALID"))
}

fn trace_round_trip(cat: &Catalog) -> Verdict {
    let mut details = Vec::new();
    let mut passed = true;
    let mut tables = 0;
    for e in &cat.entries {
        let (Some(model_id), Some(bundle)) = (e.oracle_model.as_deref(), e.bundle.as_ref()) else { continue };
        let (v, _) = hecke(e, 0);
        let (ext, _, exp) = combined_expansion(&e.datum, bundle, &v, TRACE_WINDOW).expect("combined expansion");
        for q in [3u64, 5, 7] {
            let model = RankOneModel::new(&format!("{model_id}-bundle"), q, TRACE_PRECISION).expect("model");
            let sizes: BTreeMap<Point, u64> = exp
                .restricted
                .terms()
                .filter(|(pt, _)| !type_t_walls(&ext, pt).is_empty())
                .map(|(pt, _)| (pt.clone(), model.k1_orbit_count(pt).expect("orbit count")))
                .collect();
            match trace_preimage(&ext, &exp.restricted, q, &sizes) {
                Ok(table) if verify_trace(&table, &exp.restricted, q) => tables += 1,
                Ok(_) => {
                    passed = false;
                    details.push(format!("{} q={q}: trace of the preimage differs from the series", e.id()));
                }
                Err(err) => {
                    passed = false;
                    details.push(format!("{} q={q}: {err}", e.id()));
                }
            }
        }
    }
    for entry in ["t-gl2", "ggp-1"] {
        let (code, valid) = certify_run(entry);
        if code != Some(0) || !valid {
            passed = false;
        }
        details.push(format!("certify {entry} with bundle, q=3: exit {code:?}, {}", if valid { "VALID" } else { "not VALID" }));
    }
    Verdict {
        number: 7,
        title: "trace round trip",
        passed,
        expected: true,
        summary: format!("{tables} preimage tables at q in {{3,5,7}}, N={TRACE_WINDOW}, each verified exactly; end-to-end certify runs below"),
        details,
    }
}

fn failing_coefficients(d: &SphericalDatum, hp: &[GroupAlgebraElement]) -> Vec<usize> {
    hp.iter()
        .enumerate()
        .filter(|(_, c)| {
            let op = HeckeOperator::new(&d.group, (*c).clone()).expect("coefficients are invariant");
            !is_x_integral(d, &op).is_pass()
        })
        .map(|(k, _)| k)
        .collect()
}

fn integrality(cat: &Catalog) -> Verdict {
    let mut details = Vec::new();
    let mut all_pass = true;
    for e in &cat.entries {
        for (i, op) in e.operators.iter().enumerate() {
            let (_, hp) = hecke(e, i);
            let bad = failing_coefficients(&e.datum, &hp);
            all_pass &= bad.is_empty();
            details.push(format!("{} {} ({} coefficients): failing {bad:?}", e.id(), op.name, hp.len()));
        }
    }
    let gl3 = RootDatum::gl(3);
    let d = SphericalDatum::group_case(&gl3, "gl3-group").expect("group case");
    // Standard representation on the first factor of GL3 x GL3.
    let v = WeightOrbitRep::new(&d.group, vec![1, 0, 0, 0, 0, 0]).expect("standard weight");
    let hp = hecke_polynomial(&d.group, &v).expect("hecke polynomial");
    let gl3_bad = failing_coefficients(&d, &hp);
    all_pass &= gl3_bad.is_empty();
    details.push(format!("gl3-group std ({} coefficients): failing {gl3_bad:?}", hp.len()));
    for k in &gl3_bad {
        let op = HeckeOperator::new(&d.group, hp[*k].clone()).expect("invariant");
        if let IntegralityVerdict::Indeterminate(points) = is_x_integral(&d, &op) {
            let (pt, c) = &points[0];
            details.push(format!("  c{k} at {pt:?}: sheared coefficient {c}"));
        }
    }
    // The same polynomial normalised by q^(-<mu_k, rho>) for the highest weight mu_k of the k-th exterior power.
    let two_rho = d.group.two_rho().expect("two rho");
    let renormalised: Vec<GroupAlgebraElement> = hp
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mu: Point = (0..two_rho.len()).map(|j| i64::from(j < k)).collect();
            let s = k as i64 - dot(&mu, &two_rho);
            c.map_coeffs(|x| x.shift(s))
        })
        .collect();
    details.push(format!(
        "info: gl3-group std normalised by q^(-<mu_k, rho>): failing {:?}",
        failing_coefficients(&d, &renormalised)
    ));
    Verdict {
        number: 8,
        title: "integrality of Hecke-polynomial coefficients",
        passed: all_pass,
        // Pinned: everything passes except GL3 std c1 and c3.
        expected: false,
        summary: "GL2 std, ggp-1 std x std and every shipped operator pass; GL3 std is checked on the GL3 group case".to_string(),
        details,
    }
}

fn property_suites() -> Verdict {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut passed = true;
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            passed = false;
            details.push(format!("{name}: {e}"));
        } else {
            details.push(format!("{name}: {PROPERTY_CASES} cases, no failures"));
        }
    };
    record("laurent ring axioms", properties::laurent_ring(0x5eed_a001));
    record("group algebra ring axioms", properties::group_algebra_ring(0x5eed_a002));
    record("geometric expansion identity", properties::geometric_identity(0x5eed_a003));
    record("reflection involutions", properties::reflections(0x5eed_a004));
    record("serialization round trips", properties::round_trips(0x5eed_a005));
    let elapsed = start.elapsed();
    Verdict {
        number: 9,
        title: "algebraic property suites",
        passed: passed && within(elapsed, PROPERTY_BUDGET),
        expected: true,
        summary: format!("5 suites of {PROPERTY_CASES} seeded cases, {}", timing(elapsed, PROPERTY_BUDGET)),
        details,
    }
}

mod properties {
    use super::*;

    fn runner(seed: u64) -> TestRunner {
        let config = Config {
            cases: PROPERTY_CASES,
            rng_seed: RngSeed::Fixed(seed),
            failure_persistence: None,
            ..Config::default()
        };
        TestRunner::new(config)
    }

    fn laurent() -> impl Strategy<Value = QLaurent> {
        prop::collection::vec((-6i64..=6, -5i64..=5), 0..5)
            .prop_map(|t| QLaurent::from_terms(t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    fn point(rank: usize, r: i64) -> impl Strategy<Value = Point> {
        prop::collection::vec(-r..=r, rank)
    }

    fn lattice2() -> Lattice {
        Lattice::new(2, "Z2")
    }

    fn element() -> impl Strategy<Value = GroupAlgebraElement> {
        prop::collection::vec((point(2, 2), laurent()), 0..4)
            .prop_map(|t| GroupAlgebraElement::from_terms(&lattice2(), t))
    }

    fn finish<E: std::fmt::Display>(r: Result<(), E>) -> Result<(), String> {
        r.map_err(|e| e.to_string())
    }

    pub fn laurent_ring(seed: u64) -> Result<(), String> {
        finish(runner(seed).run(&(laurent(), laurent(), laurent()), |(a, b, c)| {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), QLaurent::zero());
            prop_assert_eq!(&a * &QLaurent::one(), a.clone());
            Ok(())
        }))
    }

    pub fn group_algebra_ring(seed: u64) -> Result<(), String> {
        finish(runner(seed).run(&(element(), element(), element()), |(f, g, h)| {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap(),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
            );
            prop_assert!(f.add(&f.neg()).unwrap().is_zero());
            prop_assert_eq!(f.mul(&GroupAlgebraElement::one(&lattice2())).unwrap(), f.clone());
            Ok(())
        }))
    }

    pub fn geometric_identity(seed: u64) -> Result<(), String> {
        let theta = point(2, 3).prop_filter("nonzero", |t| t.iter().any(|x| *x != 0));
        finish(runner(seed).run(&(laurent(), theta, point(2, 1), 0i64..=8), |(c, theta, tilt, bound)| {
            // |θ|_1 <= |θ|^2 < h(θ) for h = 2θ + tilt, so θ has positive height.
            let height: Point = theta.iter().zip(&tilt).map(|(t, u)| 2 * t + u).collect();
            let w = Window::new(height, bound);
            let lat = lattice2();
            let g = geometric_expand(&c, &theta, &lat, &w).unwrap();
            let one_minus =
                GroupAlgebraElement::from_terms(&lat, [(lat.origin(), QLaurent::one()), (theta.clone(), -&c)]);
            prop_assert!(g.mul_element(&one_minus).unwrap().agrees_with(&ConeSeries::one(&lat, &w)));
            Ok(())
        }))
    }

    pub fn reflections(seed: u64) -> Result<(), String> {
        let cat = catalog();
        let gl3 = RootDatum::gl(3);
        finish(runner(seed).run(&(point(3, 50), point(2, 50), point(1, 50)), |(x, y, z)| {
            for i in 0..gl3.semisimple_rank() {
                prop_assert_eq!(gl3.reflect_coweight(i, &gl3.reflect_coweight(i, &x)), x.clone());
                prop_assert_eq!(gl3.reflect_weight(i, &gl3.reflect_weight(i, &x)), x.clone());
            }
            for e in &cat.entries {
                let pt = match e.datum.rank_x() {
                    1 => &z,
                    2 => &y,
                    _ => &x,
                };
                for r in &e.datum.spherical_roots {
                    prop_assert_eq!(&r.reflect(&r.reflect(pt)), pt);
                }
            }
            Ok(())
        }))
    }

    pub fn round_trips(seed: u64) -> Result<(), String> {
        finish(runner(seed).run(&(laurent(), element(), point(2, 2), -2i64..=6), |(a, f, height, bound)| {
            prop_assert_eq!(QLaurent::from_canonical(&a.to_canonical()).unwrap(), a.clone());
            let lat = lattice2();
            prop_assert_eq!(GroupAlgebraElement::from_canonical(&lat, &f.to_canonical()).unwrap(), f.clone());
            let s = ConeSeries::truncate(&f, &Window::new(height, bound));
            let back = ConeSeries::from_canonical(&lat, &s.to_canonical()).unwrap();
            prop_assert_eq!(back.to_canonical(), s.to_canonical());
            prop_assert!(back.agrees_with(&s));
            Ok(())
        }))
    }
}

fn main() -> ExitCode {
    // Accept and ignore libtest flags passed through by `cargo test`.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let cat = catalog();
    let verdicts = [
        basic_function_identity(&cat),
        homogeneous_oracle(&cat),
        tempered_oracle(&cat),
        wall_divisibility(&cat),
        antisymmetry(&cat),
        orbit_geometry(&cat),
        trace_round_trip(&cat),
        integrality(&cat),
        property_suites(),
    ];
    for v in &verdicts {
        v.print();
    }
    let unexpected: Vec<u32> = verdicts.iter().filter(|v| v.passed != v.expected).map(|v| v.number).collect();
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {} PASS, {failed} FAIL, unexpected outcomes {unexpected:?}", verdicts.len() - failed);
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
