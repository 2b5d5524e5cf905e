//! Point-by-point comparison of symbolic expansions with brute-force counts.

use std::collections::{BTreeMap, BTreeSet};

use tamenorm_core::catalog::CatalogEntry;
use tamenorm_core::coeffs::{canonical_point, GroupAlgebraElement, Point, QuadraticSurd};
use tamenorm_core::satake::{inverse_satake_expand, restrict_to_x};
use tamenorm_core::spherical::{extend_with_bundle, SphericalDatum};

use crate::factor::FactorElem;
use crate::model::RankOneModel;
use crate::OracleError;

/// An operator graded by powers of the Hecke variable: `sum_k c_k T^k`.
pub type GradedOperator = Vec<(i64, GroupAlgebraElement)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub point: Point,
    pub symbolic: QuadraticSurd,
    pub oracle: QuadraticSurd,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.symbolic == self.oracle
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub model: String,
    pub p: u64,
    pub window: i64,
    pub precision: i64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| !r.matches())
    }

    pub fn first_mismatch(&self) -> Option<&ComparisonRow> {
        self.mismatches().next()
    }

    pub fn passed(&self) -> bool {
        self.first_mismatch().is_none()
    }

    /// Canonical lines, one per compared point, then a summary.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "model={} p={} {} symbolic={} oracle={} {}",
                    self.model,
                    self.p,
                    canonical_point(&r.point),
                    r.symbolic,
                    r.oracle,
                    if r.matches() { "OK" } else { "MISMATCH" }
                )
            })
            .collect();
        out.push(format!(
            "model={} p={} window={} precision={} points={} mismatches={}",
            self.model,
            self.p,
            self.window,
            self.precision,
            self.rows.len(),
            self.mismatches().count()
        ));
        out
    }
}

/// Default working precision for a window and operator height.
pub fn default_precision(window: i64, op_height: i64) -> i64 {
    2 * (window + op_height) + 8
}

/// The datum the model realizes: the entry itself or its bundle extension.
pub fn model_datum(entry: &CatalogEntry, bundle: bool) -> Result<SphericalDatum, OracleError> {
    if !bundle {
        return Ok(entry.datum.clone());
    }
    let b = entry
        .bundle
        .as_ref()
        .ok_or_else(|| OracleError::BadPoint(format!("entry {} has no bundle", entry.id())))?;
    extend_with_bundle(&entry.datum, b).map_err(|e| OracleError::Core(e.to_string()))
}

/// `sum_k c_k ⊗ e^{k τ}` on the augmented lattice, or `sum_k c_k` without a bundle.
pub fn upstairs_element(
    datum: &SphericalDatum,
    op: &GradedOperator,
    bundle: bool,
) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero(&datum.group.lattice);
    for (k, c) in op {
        for (pt, x) in c.terms() {
            let mut pt = pt.clone();
            if bundle {
                pt.push(*k);
            }
            out.add_term(pt, x.clone());
        }
    }
    out
}

/// Points compared: cone points of the window with every coordinate bounded
/// by `max(window, 2)`, together with the symbolic support.
fn test_points(datum: &SphericalDatum, window: i64, support: &BTreeSet<Point>) -> BTreeSet<Point> {
    let r = window.max(2);
    let w = datum.window(window);
    let mut pts: BTreeSet<Point> = support.clone();
    let rank = datum.rank_x();
    let mut cur = vec![-r; rank];
    loop {
        if datum.in_cone(&cur) && w.contains(&cur) {
            pts.insert(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == rank {
                return pts;
            }
            if cur[i] < r {
                cur[i] += 1;
                break;
            }
            cur[i] = -r;
            i += 1;
        }
    }
}

/// The brute-force value at `ν`: decompose each graded piece into indicators
/// and count representatives of the inverse double cosets moving `x_ν` into
/// `X(O)`.
pub struct NumericOperator {
    model: RankOneModel,
    pieces: Vec<(i64, Vec<(Vec<Vec<FactorElem>>, QuadraticSurd)>)>,
}

impl NumericOperator {
    pub fn new(model: &RankOneModel, op: &GradedOperator) -> Result<Self, OracleError> {
        let g = model.group();
        let (p, rel) = (model.p, model.precision);
        let mut pieces = Vec::new();
        for (k, c) in op {
            let image: BTreeMap<Point, QuadraticSurd> =
                c.terms().map(|(pt, x)| (pt.clone(), x.specialize_surd(p))).collect();
            let mut parts = Vec::new();
            for (mu, coef) in g.decompose(p, &image, rel)? {
                parts.push((g.coset_reps(p, &g.dual(&mu), rel)?, coef));
            }
            pieces.push((*k, parts));
        }
        Ok(Self { model: model.clone(), pieces })
    }

    pub fn value(&self, nu: &[i64]) -> Result<QuadraticSurd, OracleError> {
        let p = self.model.p;
        let x = self.model.point(nu)?;
        let mut total = QuadraticSurd::zero(p);
        for (k, parts) in &self.pieces {
            for (reps, coef) in parts {
                let mut count = 0;
                for g in reps {
                    if self.model.phi0(&self.model.act(&x, g, *k)?)? {
                        count += 1;
                    }
                }
                total = total.add(&coef.mul(&QuadraticSurd::from_int(p, count)));
            }
        }
        Ok(total)
    }
}

/// Compare the restricted expansion of `op` on the entry (or its bundle
/// extension) with brute-force values at `q = p`.
pub fn compare_with_symbolic(
    entry: &CatalogEntry,
    op: &GradedOperator,
    bundle: bool,
    window: i64,
    p: u64,
    precision: i64,
) -> Result<ComparisonReport, OracleError> {
    let model_id = entry
        .oracle_model
        .as_deref()
        .ok_or_else(|| OracleError::UnknownModel(format!("entry {} names no model", entry.id())))?;
    let model_id = if bundle { format!("{model_id}-bundle") } else { model_id.to_string() };
    let model = RankOneModel::new(&model_id, p, precision)?;
    let datum = model_datum(entry, bundle)?;
    if datum.rank_x() != model.rank() {
        return Err(OracleError::BadPoint(format!(
            "datum rank {} does not match model rank {}",
            datum.rank_x(),
            model.rank()
        )));
    }
    let upstairs = upstairs_element(&datum, op, bundle);
    let lx = restrict_to_x(&datum, &upstairs);
    let expansion =
        inverse_satake_expand(&datum, &lx, window).map_err(|e| OracleError::Core(e.to_string()))?;
    let support: BTreeSet<Point> = expansion.restricted.terms().map(|(pt, _)| pt.clone()).collect();
    let numeric = NumericOperator::new(&model, op)?;
    let mut rows = Vec::new();
    for pt in test_points(&datum, window, &support) {
        let symbolic = expansion.restricted.coeff(&pt).specialize_surd(p);
        let oracle = numeric.value(&pt)?;
        rows.push(ComparisonRow { point: pt, symbolic, oracle });
    }
    Ok(ComparisonReport { model: model.id(), p, window, precision, rows })
}
