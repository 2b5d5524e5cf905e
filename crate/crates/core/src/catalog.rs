//! Catalog files: one spherical datum per TOML file, with its operators and an
//! optional bundle block. The schema is documented in `catalog/README.md`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::coeffs::{Lattice, Point};
use crate::rootdata::{HalfSum, RootDataError, RootDatum};
use crate::spherical::{
    validate_datum, Branch, BundleDatum, RootType, SphericalDatum, SphericalRoot, ThetaWeight,
    ValidationReport,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("{file}: {msg}")]
    Invalid { file: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("duplicate entry id `{0}`")]
    Duplicate(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    id: String,
    branch: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    oracle_model: Option<String>,
    group: GroupBlock,
    variety: VarietyBlock,
    #[serde(default)]
    operators: Vec<OperatorBlock>,
    #[serde(default)]
    bundle: Option<BundleBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupBlock {
    label: String,
    rank: usize,
    simple_roots: Vec<Point>,
    simple_coroots: Vec<Point>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarietyBlock {
    rank: usize,
    proj: Vec<Point>,
    section: Vec<Point>,
    #[serde(default)]
    height: Option<Point>,
    cone: Vec<Point>,
    rho2: Point,
    rho_p2: Point,
    rho_l2: Point,
    #[serde(default)]
    roots: Vec<RootBlock>,
    #[serde(default)]
    theta: Vec<ThetaBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootBlock {
    gamma: Point,
    coroot: Point,
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    colors: Option<(Point, Point)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaBlock {
    coweight: Point,
    degree: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorBlock {
    name: String,
    highest_weight: Point,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleBlock {
    id: String,
    nu_on_ha: Vec<i64>,
    theta_fiber: Vec<i64>,
    #[serde(default)]
    color_fiber: Vec<(i64, i64)>,
}

/// A named minuscule representation of the dual group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDef {
    pub name: String,
    pub highest_weight: Point,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub path: PathBuf,
    pub description: String,
    pub oracle_model: Option<String>,
    pub datum: SphericalDatum,
    pub operators: Vec<OperatorDef>,
    pub bundle: Option<BundleDatum>,
}

impl CatalogEntry {
    pub fn id(&self) -> &str {
        &self.datum.id
    }

    pub fn operator(&self, name: &str) -> Option<&OperatorDef> {
        self.operators.iter().find(|o| o.name == name)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_datum(&self.datum)
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parse one catalog file. Structural problems are errors; the axioms are
/// checked separately by [`validate_datum`].
pub fn parse_entry(path: &Path, text: &str) -> Result<CatalogEntry, LoadError> {
    let file = path.display().to_string();
    let raw: EntryFile = toml::from_str(text).map_err(|e| LoadError::Parse {
        file: file.clone(),
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        msg: e.message().to_string(),
    })?;
    let invalid = |msg: String| LoadError::Invalid { file: file.clone(), msg };
    let group = RootDatum::new(
        &raw.group.label,
        raw.group.rank,
        raw.group.simple_roots,
        raw.group.simple_coroots,
    )
    .map_err(|e: RootDataError| invalid(e.to_string()))?;
    let branch = match raw.branch.as_str() {
        "homogeneous" => Branch::Homogeneous,
        "strongly_tempered" => Branch::StronglyTempered,
        other => return Err(invalid(format!("unknown branch `{other}`"))),
    };
    let v = raw.variety;
    let mut roots = Vec::new();
    for r in v.roots {
        let kind = match r.kind.as_str() {
            "T" => RootType::T,
            "G" => RootType::G,
            "N" => return Err(invalid("spherical roots of type N are not supported".into())),
            other => return Err(invalid(format!("unknown root type `{other}`"))),
        };
        roots.push(SphericalRoot { gamma: r.gamma, coroot: r.coroot, kind, colors: r.colors });
    }
    let height = v.height.unwrap_or_else(|| vec![1; v.rank]);
    let datum = SphericalDatum {
        id: raw.id.clone(),
        lattice_x: Lattice::new(v.rank, format!("Λ_{}", raw.id)),
        group,
        proj: v.proj,
        section: v.section,
        height,
        cone_ineqs: v.cone,
        spherical_roots: roots,
        theta_plus: v
            .theta
            .into_iter()
            .map(|t| ThetaWeight { coweight: t.coweight, degree: t.degree })
            .collect(),
        half_sums: HalfSum { rho2: v.rho2, rho_p2: v.rho_p2, rho_l2: v.rho_l2 },
        branch,
    };
    let operators = raw
        .operators
        .into_iter()
        .map(|o| OperatorDef { name: o.name, highest_weight: o.highest_weight })
        .collect();
    let bundle = raw.bundle.map(|b| BundleDatum {
        id: b.id,
        torus_rank: 1,
        nu_on_ha: b.nu_on_ha,
        theta_fiber: b.theta_fiber,
        color_fiber: b.color_fiber,
    });
    Ok(CatalogEntry {
        path: path.to_path_buf(),
        description: raw.description,
        oracle_model: raw.oracle_model,
        datum,
        operators,
        bundle,
    })
}

pub fn load_file(path: &Path) -> Result<CatalogEntry, LoadError> {
    let text = fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    parse_entry(path, &text)
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Load every `*.toml` file under the given files or directories, sorted
    /// by path.
    pub fn load(paths: &[PathBuf]) -> Result<Self, LoadError> {
        let mut files = Vec::new();
        for p in paths {
            if p.is_dir() {
                let rd = fs::read_dir(p)
                    .map_err(|source| LoadError::Io { path: p.display().to_string(), source })?;
                for e in rd {
                    let e = e.map_err(|source| LoadError::Io { path: p.display().to_string(), source })?;
                    let path = e.path();
                    if path.extension().is_some_and(|x| x == "toml") {
                        files.push(path);
                    }
                }
            } else {
                files.push(p.clone());
            }
        }
        files.sort();
        let mut entries: Vec<CatalogEntry> = Vec::new();
        for f in files {
            let entry = load_file(&f)?;
            if entries.iter().any(|e| e.id() == entry.id()) {
                return Err(LoadError::Duplicate(entry.id().to_string()));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id() == id)
    }
}

/// Directory of the catalog shipped with the repository.
pub fn shipped_catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}
