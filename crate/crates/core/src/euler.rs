//! Divisibility on walls of type T, the `q = 1` antisymmetry, trace preimages
//! and the norm-relation certificate assembled from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeffs::{canonical_point, CoeffError, ConeSeries, GroupAlgebraElement, Lattice, Point, QLaurent};
use crate::rootdata::{hecke_polynomial, RootDataError, RootDatum, WeightOrbitRep};
use crate::satake::{
    inverse_satake_expand, is_x_integral, restrict_to_x, Expansion, HeckeOperator,
    IntegralityVerdict, SatakeError,
};
use crate::spherical::{
    extend_with_bundle, type_t_walls, validate_datum, BundleDatum, RootType, SphericalDatum,
    SphericalError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("window bound {0} leaves no testable pair")]
    WindowTooSmall(i64),
    #[error("Phi_1 at {point:?} is {value}, not in Z[1/{q}]")]
    NonIntegralPreimage { point: Point, value: String, q: u64 },
    #[error("orbit size at {0:?} is missing (the point lies on a wall of type T)")]
    MissingOrbitSize(Point),
    #[error("orbit size {size} at {point:?} is invalid: {reason}")]
    BadOrbitSize { point: Point, size: u64, reason: String },
    #[error("q = {0} must be at least 2")]
    BadQ(u64),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Satake(#[from] SatakeError),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub point: Point,
    /// Indices of the type-T roots whose wall contains the point.
    pub walls: Vec<usize>,
    pub coefficient: QLaurent,
    pub integral: bool,
    pub wall_divisible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub records: Vec<PointRecord>,
    pub verdict: bool,
}

impl DivisibilityReport {
    pub fn failures(&self) -> impl Iterator<Item = &PointRecord> {
        self.records.iter().filter(|r| !r.integral || !r.wall_divisible)
    }
}

fn wall_indices(d: &SphericalDatum, pt: &[i64]) -> Vec<usize> {
    let walls = type_t_walls(d, pt);
    d.spherical_roots
        .iter()
        .enumerate()
        .filter(|(_, r)| walls.iter().any(|w| std::ptr::eq(*w, *r)))
        .map(|(i, _)| i)
        .collect()
}

pub fn check_wall_divisibility(d: &SphericalDatum, s: &ConeSeries) -> DivisibilityReport {
    let records: Vec<PointRecord> = s
        .terms()
        .map(|(pt, c)| {
            let walls = wall_indices(d, pt);
            let integral = c.has_integer_exponents();
            let wall_divisible = walls.is_empty() || c.divisible_by_qminus1().unwrap_or(false);
            PointRecord { point: pt.clone(), walls, coefficient: c.clone(), integral, wall_divisible }
        })
        .collect();
    let verdict = records.iter().all(|r| r.integral && r.wall_divisible);
    DivisibilityReport { records, verdict }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryFailure {
    pub point: Point,
    pub image: Point,
    pub value: BigInt,
    pub image_value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub root: usize,
    pub kind: RootType,
    pub sign: i64,
    pub pairs: usize,
    pub fixed: usize,
    pub failures: Vec<SymmetryFailure>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `c_{s λ}(1) = ε c_λ(1)` on every pair inside the window, `ε = -1` for type
/// T and `+1` for type G.
pub fn q1_antisymmetry_check(
    d: &SphericalDatum,
    full: &ConeSeries,
    root: usize,
) -> Result<SymmetryReport, EulerError> {
    let window = full.window();
    if window.bound < 0 {
        return Err(EulerError::WindowTooSmall(window.bound));
    }
    let gamma = &d.spherical_roots[root];
    let sign = match gamma.kind {
        RootType::T => -1,
        RootType::G => 1,
    };
    let mut seen = BTreeSet::new();
    let (mut pairs, mut fixed) = (0, 0);
    let mut failures = Vec::new();
    for (pt, _) in full.terms() {
        let image = gamma.reflect(pt);
        if !window.contains(&image) {
            continue;
        }
        let key = if *pt <= image { (pt.clone(), image.clone()) } else { (image.clone(), pt.clone()) };
        if !seen.insert(key) {
            continue;
        }
        let value = full.coeff(pt).at_one();
        let image_value = full.coeff(&image).at_one();
        if image == *pt {
            fixed += 1;
        } else {
            pairs += 1;
        }
        if image_value != &value * sign {
            failures.push(SymmetryFailure { point: pt.clone(), image, value, image_value });
        }
    }
    Ok(SymmetryReport { root, kind: gamma.kind, sign, pairs, fixed, failures })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageRow {
    pub point: Point,
    pub value: BigRational,
    pub orbits: u64,
    pub phi1: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageTable {
    pub q: u64,
    pub rows: Vec<PreimageRow>,
}

/// True iff `x` lies in `Z[1/q]`.
pub fn in_z_inv_q(x: &BigRational, q: u64) -> bool {
    let q = BigInt::from(q);
    let mut d = x.denom().clone();
    loop {
        let g = d.gcd(&q);
        if g.is_one() {
            return d.is_one();
        }
        d /= g;
    }
}

/// `Φ_1(λ) = c_λ(q) · orbits(λ) / (q - 1)`.
///
/// `orbit_sizes` must cover every wall point of the series; off-wall points
/// default to `q - 1` and any supplied value there must equal it.
pub fn trace_preimage(
    d: &SphericalDatum,
    s: &ConeSeries,
    q: u64,
    orbit_sizes: &BTreeMap<Point, u64>,
) -> Result<PreimageTable, EulerError> {
    if q < 2 {
        return Err(EulerError::BadQ(q));
    }
    let qv = BigRational::from_integer(q.into());
    let qm1 = BigRational::from_integer((q - 1).into());
    let mut rows = Vec::new();
    for (pt, c) in s.terms() {
        let on_wall = !type_t_walls(d, pt).is_empty();
        let orbits = match (orbit_sizes.get(pt), on_wall) {
            (Some(&n), _) => n,
            (None, false) => q - 1,
            (None, true) => return Err(EulerError::MissingOrbitSize(pt.clone())),
        };
        if orbits == 0 || (q - 1) % orbits != 0 {
            return Err(EulerError::BadOrbitSize {
                point: pt.clone(),
                size: orbits,
                reason: format!("must divide {}", q - 1),
            });
        }
        if !on_wall && orbits != q - 1 {
            return Err(EulerError::BadOrbitSize {
                point: pt.clone(),
                size: orbits,
                reason: "off-wall points need q - 1 orbits".into(),
            });
        }
        let value = c.specialize(&qv)?;
        let phi1 = &value * BigRational::from_integer(orbits.into()) / &qm1;
        if !in_z_inv_q(&phi1, q) {
            return Err(EulerError::NonIntegralPreimage { point: pt.clone(), value: phi1.to_string(), q });
        }
        rows.push(PreimageRow { point: pt.clone(), value, orbits, phi1 });
    }
    Ok(PreimageTable { q, rows })
}

/// `Φ_1(λ) (q - 1) / orbits(λ) = c_λ(q)` at every point of table or series.
pub fn verify_trace(table: &PreimageTable, s: &ConeSeries, q: u64) -> bool {
    if table.q != q || q < 2 {
        return false;
    }
    let qv = BigRational::from_integer(q.into());
    let qm1 = BigRational::from_integer((q - 1).into());
    let rows: BTreeMap<&Point, &PreimageRow> = table.rows.iter().map(|r| (&r.point, r)).collect();
    for row in &table.rows {
        if row.orbits == 0 {
            return false;
        }
        let traced = &row.phi1 * &qm1 / BigRational::from_integer(row.orbits.into());
        match s.coeff(&row.point).specialize(&qv) {
            Ok(v) if v == traced => {}
            _ => return false,
        }
    }
    s.terms().all(|(pt, c)| {
        rows.contains_key(pt) || c.specialize(&qv).map_or(false, |v| v.is_zero())
    })
}

/// `Σ_k c_k ⊗ e^{k τ}` on `Λ ⊕ Z`.
pub fn augmented_hecke_polynomial(
    group: &RootDatum,
    v: &WeightOrbitRep,
    target: &Lattice,
) -> Result<GroupAlgebraElement, EulerError> {
    let coeffs = hecke_polynomial(group, v)?;
    let mut out = GroupAlgebraElement::zero(target);
    for (k, c) in coeffs.iter().enumerate() {
        for (pt, x) in c.terms() {
            let mut p = pt.clone();
            p.push(k as i64);
            out.add_term(p, x.clone());
        }
    }
    Ok(out)
}

/// The augmented datum together with the expansion of the augmented Hecke
/// polynomial on it.
pub fn combined_expansion(
    base: &SphericalDatum,
    bundle: &BundleDatum,
    v: &WeightOrbitRep,
    window: i64,
) -> Result<(SphericalDatum, GroupAlgebraElement, Expansion), EulerError> {
    let ext = extend_with_bundle(base, bundle)?;
    let upstairs = augmented_hecke_polynomial(&base.group, v, &ext.group.lattice)?;
    let lx = restrict_to_x(&ext, &upstairs);
    let expansion = inverse_satake_expand(&ext, &lx, window)?;
    Ok((ext, upstairs, expansion))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMode {
    Symbolic,
    Integer(u64),
}

impl std::fmt::Display for QMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QMode::Symbolic => write!(f, "symbolic"),
            QMode::Integer(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOutcome {
    Computed { table: PreimageTable, verified: bool },
    Failed(String),
    Skipped(String),
}

/// Lines contributed by an external cross-check, with its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub lines: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormRelationCertificate {
    pub datum_id: String,
    pub bundle_id: String,
    pub operator_id: String,
    pub window: i64,
    pub q_mode: QMode,
    pub validation: Vec<(String, bool, String)>,
    pub integrality: Vec<(String, IntegralityVerdict)>,
    pub restricted: ConeSeries,
    pub half_integer_points: Vec<Point>,
    pub divisibility: DivisibilityReport,
    pub antisymmetry: Vec<SymmetryReport>,
    pub trace: TraceOutcome,
    pub oracle: Option<CrossCheck>,
}

impl NormRelationCertificate {
    pub fn is_valid(&self) -> bool {
        self.validation.iter().all(|(_, ok, _)| *ok)
            && self.integrality.iter().all(|(_, v)| v.is_pass())
            && self.half_integer_points.is_empty()
            && self.divisibility.verdict
            && self.antisymmetry.iter().all(|r| r.passed())
            && !matches!(
                self.trace,
                TraceOutcome::Failed(_) | TraceOutcome::Computed { verified: false, .. }
            )
            && self.oracle.as_ref().map_or(true, |o| o.passed)
    }

    pub fn to_canonical(&self) -> String {
        let pass = |b: bool| if b { "PASS" } else { "FAIL" };
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "certificate tamenorm/1");
        let _ = writeln!(w, "datum {}", self.datum_id);
        let _ = writeln!(w, "bundle {}", self.bundle_id);
        let _ = writeln!(w, "operator {}", self.operator_id);
        let _ = writeln!(w, "window {}", self.window);
        let _ = writeln!(w, "q {}", self.q_mode);
        for (name, ok, detail) in &self.validation {
            let _ = write!(w, "validation {name} {}", pass(*ok));
            if !detail.is_empty() {
                let _ = write!(w, " {detail}");
            }
            let _ = writeln!(w);
        }
        for (name, v) in &self.integrality {
            match v {
                IntegralityVerdict::Pass => {
                    let _ = writeln!(w, "integrality {name} PASS");
                }
                IntegralityVerdict::Indeterminate(f) => {
                    let pts: Vec<String> = f
                        .iter()
                        .map(|(p, c)| format!("{}:{}", canonical_point(p), c.to_canonical()))
                        .collect();
                    let _ = writeln!(w, "integrality {name} INDETERMINATE {}", pts.join(" "));
                }
            }
        }
        let _ = writeln!(w, "series {}", self.restricted.to_canonical());
        let half: Vec<String> = self.half_integer_points.iter().map(|p| canonical_point(p)).collect();
        let _ = writeln!(
            w,
            "integral-powers {}{}",
            pass(half.is_empty()),
            if half.is_empty() { String::new() } else { format!(" {}", half.join(" ")) }
        );
        for r in &self.divisibility.records {
            let walls: Vec<String> = r.walls.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(
                w,
                "divisibility {} walls=[{}] coeff={} integral={} divisible={}",
                canonical_point(&r.point),
                walls.join(","),
                r.coefficient.to_canonical(),
                r.integral,
                r.wall_divisible
            );
        }
        let _ = writeln!(w, "divisibility verdict {}", pass(self.divisibility.verdict));
        for r in &self.antisymmetry {
            let _ = writeln!(
                w,
                "antisymmetry root={} type={} sign={} pairs={} fixed={} {}",
                r.root,
                r.kind,
                r.sign,
                r.pairs,
                r.fixed,
                pass(r.passed())
            );
            for f in &r.failures {
                let _ = writeln!(
                    w,
                    "antisymmetry-failure {} {} {} {}",
                    canonical_point(&f.point),
                    canonical_point(&f.image),
                    f.value,
                    f.image_value
                );
            }
        }
        match &self.trace {
            TraceOutcome::Computed { table, verified } => {
                for row in &table.rows {
                    let _ = writeln!(
                        w,
                        "trace q={} {} value={} orbits={} phi1={}",
                        table.q,
                        canonical_point(&row.point),
                        row.value,
                        row.orbits,
                        row.phi1
                    );
                }
                let _ = writeln!(w, "trace verify {}", pass(*verified));
            }
            TraceOutcome::Failed(msg) => {
                let _ = writeln!(w, "trace FAIL {msg}");
            }
            TraceOutcome::Skipped(msg) => {
                let _ = writeln!(w, "trace SKIPPED {msg}");
            }
        }
        if let Some(o) = &self.oracle {
            for line in &o.lines {
                let _ = writeln!(w, "oracle {line}");
            }
            let _ = writeln!(w, "oracle verdict {}", pass(o.passed));
        }
        let _ = writeln!(w, "verdict {}", if self.is_valid() { "VALID" } else { "INVALID" });
        out
    }
}

/// Run every check of the tame norm relation at one place.
///
/// In integer mode the trace preimage is built when `orbit_sizes` covers the
/// wall points of the series, and is recorded as skipped otherwise.
pub fn norm_relation_certificate(
    base: &SphericalDatum,
    bundle: &BundleDatum,
    operator_name: &str,
    v: &WeightOrbitRep,
    window: i64,
    q_mode: QMode,
    orbit_sizes: Option<&BTreeMap<Point, u64>>,
) -> Result<NormRelationCertificate, EulerError> {
    let coeffs = hecke_polynomial(&base.group, v)?;
    let (ext, upstairs, expansion) = combined_expansion(base, bundle, v, window)?;

    let summarize = |d: &SphericalDatum| {
        let r = validate_datum(d);
        let failed: Vec<&str> = r.failures().map(|c| c.name).collect();
        (r.passed(), failed.join(","))
    };
    let (base_ok, base_detail) = summarize(base);
    let (ext_ok, ext_detail) = summarize(&ext);
    let validation = vec![
        ("base".to_string(), base_ok, base_detail),
        ("extended".to_string(), ext_ok, ext_detail),
    ];

    let mut integrality = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        let verdict = match HeckeOperator::new(&base.group, c.clone()) {
            Ok(op) => is_x_integral(base, &op),
            Err(_) => IntegralityVerdict::Indeterminate(vec![]),
        };
        integrality.push((format!("c{k}"), verdict));
    }
    let combined = match HeckeOperator::new(&ext.group, upstairs) {
        Ok(op) => is_x_integral(&ext, &op),
        Err(_) => IntegralityVerdict::Indeterminate(vec![]),
    };
    integrality.push(("combined".to_string(), combined));

    let divisibility = check_wall_divisibility(&ext, &expansion.restricted);
    let antisymmetry = (0..ext.spherical_roots.len())
        .map(|i| q1_antisymmetry_check(&ext, &expansion.full, i))
        .collect::<Result<Vec<_>, _>>()?;

    let trace = match q_mode {
        QMode::Symbolic => TraceOutcome::Skipped("symbolic mode".into()),
        QMode::Integer(q) => {
            let empty = BTreeMap::new();
            match trace_preimage(&ext, &expansion.restricted, q, orbit_sizes.unwrap_or(&empty)) {
                Ok(table) => {
                    let verified = verify_trace(&table, &expansion.restricted, q);
                    TraceOutcome::Computed { table, verified }
                }
                Err(EulerError::MissingOrbitSize(p)) if orbit_sizes.is_none() => {
                    TraceOutcome::Skipped(format!("no orbit sizes for wall point {}", canonical_point(&p)))
                }
                Err(e) => TraceOutcome::Failed(e.to_string()),
            }
        }
    };

    Ok(NormRelationCertificate {
        datum_id: base.id.clone(),
        bundle_id: bundle.id.clone(),
        operator_id: format!("heckepoly({operator_name})"),
        window,
        q_mode,
        validation,
        integrality,
        half_integer_points: expansion.half_integer_points(),
        restricted: expansion.restricted,
        divisibility,
        antisymmetry,
        trace,
        oracle: None,
    })
}
