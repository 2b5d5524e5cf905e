//! Combinatorial data of a spherical variety: the lattice `Λ_X` with its
//! anti-dominant cone, spherical roots, the multiset `Θ_X^+`, bundles and
//! walls of type T.

use std::fmt;

use thiserror::Error;

use crate::coeffs::{dot, GroupAlgebraElement, Lattice, Point, Window};
use crate::rootdata::{bounded, reflection_closure, HalfSum, RootDataError, RootDatum};
use crate::satake;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SphericalError {
    #[error("bundle `{0}` is not combinatorially trivial: nu on H∩A is {1:?}")]
    NotCombinatoriallyTrivial(String, Vec<i64>),
    #[error("bundle `{0}`: {1}")]
    FiberMismatch(String, String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootType {
    T,
    G,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::T => "T",
            RootType::G => "G",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalRoot {
    /// Functional on `Λ_X`.
    pub gamma: Point,
    /// Point of `Λ_X`.
    pub coroot: Point,
    pub kind: RootType,
    /// The two virtual colours `(v_D, v_D')`, type T only.
    pub colors: Option<(Point, Point)>,
}

impl SphericalRoot {
    /// `s_γ(ν) = ν - <ν, γ> γ̌`.
    pub fn reflect(&self, nu: &[i64]) -> Point {
        let k = dot(nu, &self.gamma);
        nu.iter().zip(&self.coroot).map(|(a, c)| a.saturating_sub(k.saturating_mul(*c))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaWeight {
    pub coweight: Point,
    pub degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Homogeneous,
    StronglyTempered,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Homogeneous => "homogeneous",
            Branch::StronglyTempered => "strongly_tempered",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalDatum {
    pub id: String,
    pub group: RootDatum,
    pub lattice_x: Lattice,
    /// Rows are the coordinate functionals of `Λ → Λ_X`.
    pub proj: Vec<Point>,
    /// `section[j]` is the chosen lift in `Λ` of the `j`-th basis vector of `Λ_X`.
    pub section: Vec<Point>,
    /// Window height functional on `Λ_X`.
    pub height: Point,
    /// `Λ_X^+ = { ν : <ν, f> >= 0 for every f }`.
    pub cone_ineqs: Vec<Point>,
    pub spherical_roots: Vec<SphericalRoot>,
    pub theta_plus: Vec<ThetaWeight>,
    pub half_sums: HalfSum,
    pub branch: Branch,
}

impl SphericalDatum {
    pub fn rank_x(&self) -> usize {
        self.lattice_x.rank
    }

    pub fn project(&self, lambda: &[i64]) -> Point {
        self.proj.iter().map(|row| dot(row, lambda)).collect()
    }

    pub fn lift(&self, nu: &[i64]) -> Point {
        let mut out = vec![0; self.group.rank()];
        for (k, col) in nu.iter().zip(&self.section) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += k * c;
            }
        }
        out
    }

    pub fn in_cone(&self, nu: &[i64]) -> bool {
        self.cone_ineqs.iter().all(|f| dot(f, nu) >= 0)
    }

    pub fn height_of(&self, nu: &[i64]) -> i64 {
        dot(&self.height, nu)
    }

    pub fn window(&self, bound: i64) -> Window {
        Window::new(self.height.clone(), bound)
    }

    /// `2<lift(ν), ρ_P(X)>`, the doubled normalising exponent at `ν`.
    pub fn rho_p_weight2(&self, nu: &[i64]) -> i64 {
        dot(&self.lift(nu), &self.half_sums.rho_p2)
    }

    pub fn type_t_roots(&self) -> impl Iterator<Item = (usize, &SphericalRoot)> {
        self.spherical_roots.iter().enumerate().filter(|(_, r)| r.kind == RootType::T)
    }

    /// Positive coroots of the little root system, by reflection closure.
    pub fn positive_coroots(&self) -> Result<Vec<Point>, RootDataError> {
        let n = self.spherical_roots.len();
        let seeds = (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            (self.spherical_roots[i].coroot.clone(), e)
        });
        let all = reflection_closure(seeds, n, |j, (v, coords)| {
            let root = &self.spherical_roots[j];
            let k = dot(v, &root.gamma);
            let mut c = coords.clone();
            c[j] -= k;
            Some((bounded(root.reflect(v))?, c))
        })?;
        Ok(all
            .into_iter()
            .filter(|(_, c)| c.iter().all(|x| *x >= 0))
            .map(|(v, _)| v)
            .collect())
    }

    /// Generators of `ker(proj)`: the nonzero columns of `1 - section ∘ proj`.
    pub fn kernel_generators(&self) -> Vec<Point> {
        let r = self.group.rank();
        (0..r)
            .filter_map(|i| {
                let mut e = vec![0; r];
                e[i] = 1;
                let back = self.lift(&self.project(&e));
                let v: Point = e.iter().zip(&back).map(|(a, b)| a - b).collect();
                v.iter().any(|x| *x != 0).then_some(v)
            })
            .collect()
    }

    /// Programmatic group case `H\(H × H)` for a root datum `H`.
    ///
    /// `Λ = Λ_H ⊕ Λ_H`, `proj(λ, μ) = λ + μ`, spherical roots are the simple
    /// roots of `H` (type G) and `Θ^+` is the positive coroots of `H` with
    /// degree 2.
    pub fn group_case(h: &RootDatum, id: &str) -> Result<Self, RootDataError> {
        let r = h.rank();
        let group = h.product(h, &format!("{}x{}", h.lattice.label, h.lattice.label));
        let unit = |i: usize, len: usize| {
            let mut v = vec![0; len];
            v[i] = 1;
            v
        };
        let proj = (0..r)
            .map(|i| {
                let mut row = unit(i, 2 * r);
                row[r + i] = 1;
                row
            })
            .collect();
        let section = (0..r).map(|i| unit(i, 2 * r)).collect();
        let spherical_roots = h
            .simple_roots
            .iter()
            .zip(&h.simple_coroots)
            .map(|(a, c)| SphericalRoot {
                gamma: a.clone(),
                coroot: c.clone(),
                kind: RootType::G,
                colors: None,
            })
            .collect();
        let theta_plus = h
            .positive_coroots()?
            .into_iter()
            .map(|c| ThetaWeight { coweight: c, degree: 2 })
            .collect();
        let rho = h.two_rho()?;
        let mut rho2 = rho.clone();
        rho2.extend_from_slice(&rho);
        Ok(Self {
            id: id.to_string(),
            lattice_x: Lattice::new(r, format!("Λ_{id}")),
            proj,
            section,
            height: rho,
            cone_ineqs: h.simple_roots.iter().map(|a| a.iter().map(|x| -x).collect()).collect(),
            spherical_roots,
            theta_plus,
            half_sums: HalfSum { rho_p2: rho2.clone(), rho_l2: vec![0; 2 * r], rho2 },
            branch: Branch::Homogeneous,
            group,
        })
    }
}

/// An equivariant rank-one torus bundle over `X`, recorded by its effect on
/// the combinatorial data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleDatum {
    pub id: String,
    pub torus_rank: usize,
    /// `ν` on generators of the cocharacter image of `H ∩ A`.
    pub nu_on_ha: Vec<i64>,
    /// Fibre component of each entry of `Θ_X^+`, in catalog order.
    pub theta_fiber: Vec<i64>,
    /// Fibre components of `(v_D, v_D')` for each type-T root, in order.
    pub color_fiber: Vec<(i64, i64)>,
}

impl BundleDatum {
    pub fn is_combinatorially_trivial(&self) -> bool {
        self.nu_on_ha.iter().all(|x| *x == 0)
    }

    /// The trivial bundle `X × GL_1`.
    pub fn trivial(base: &SphericalDatum, id: &str) -> Self {
        Self {
            id: id.to_string(),
            torus_rank: 1,
            nu_on_ha: vec![],
            theta_fiber: vec![0; base.theta_plus.len()],
            color_fiber: vec![(0, 0); base.type_t_roots().count()],
        }
    }
}

/// The datum of `X̃`: `Λ_X̃ = Λ_X ⊕ Z` and `Λ̃ = Λ ⊕ Z`.
pub fn extend_with_bundle(
    base: &SphericalDatum,
    b: &BundleDatum,
) -> Result<SphericalDatum, SphericalError> {
    if !b.is_combinatorially_trivial() {
        return Err(SphericalError::NotCombinatoriallyTrivial(b.id.clone(), b.nu_on_ha.clone()));
    }
    if b.torus_rank != 1 {
        return Err(SphericalError::FiberMismatch(b.id.clone(), "torus rank must be 1".into()));
    }
    if b.theta_fiber.len() != base.theta_plus.len() {
        return Err(SphericalError::FiberMismatch(
            b.id.clone(),
            format!("{} theta fibers for {} theta weights", b.theta_fiber.len(), base.theta_plus.len()),
        ));
    }
    let type_t = base.type_t_roots().count();
    if b.color_fiber.len() != type_t {
        return Err(SphericalError::FiberMismatch(
            b.id.clone(),
            format!("{} color fibers for {type_t} type-T roots", b.color_fiber.len()),
        ));
    }
    if let Some((x, y)) = b.color_fiber.iter().find(|(x, y)| x + y != 0) {
        return Err(SphericalError::FiberMismatch(
            b.id.clone(),
            format!("color fibers ({x},{y}) must sum to zero"),
        ));
    }
    let ext = |v: &Point, last: i64| {
        let mut v = v.clone();
        v.push(last);
        v
    };
    let r = base.group.rank();
    let rx = base.rank_x();
    let mut proj: Vec<Point> = base.proj.iter().map(|row| ext(row, 0)).collect();
    let mut tau_row = vec![0; r + 1];
    tau_row[r] = 1;
    proj.push(tau_row.clone());
    let mut section: Vec<Point> = base.section.iter().map(|col| ext(col, 0)).collect();
    section.push(tau_row);
    let mut colors = b.color_fiber.iter();
    let spherical_roots = base
        .spherical_roots
        .iter()
        .map(|root| SphericalRoot {
            gamma: ext(&root.gamma, 0),
            coroot: ext(&root.coroot, 0),
            kind: root.kind,
            colors: root.colors.as_ref().map(|(d, d2)| {
                let (fd, fd2) = colors.next().copied().unwrap_or((0, 0));
                (ext(d, fd), ext(d2, fd2))
            }),
        })
        .collect();
    let theta_plus = base
        .theta_plus
        .iter()
        .zip(&b.theta_fiber)
        .map(|(t, f)| ThetaWeight { coweight: ext(&t.coweight, *f), degree: t.degree })
        .collect();
    let group = base.group.product(&RootDatum::torus(1), &format!("{}xGL1", base.group.lattice.label));
    Ok(SphericalDatum {
        id: b.id.clone(),
        group,
        lattice_x: Lattice::new(rx + 1, format!("Λ_{}", b.id)),
        proj,
        section,
        height: ext(&base.height, 0),
        cone_ineqs: base.cone_ineqs.iter().map(|f| ext(f, 0)).collect(),
        spherical_roots,
        theta_plus,
        half_sums: base.half_sums.extend_by_zero(1),
        branch: base.branch,
    })
}

/// The type-T roots whose wall contains `ν`.
pub fn type_t_walls<'a>(d: &'a SphericalDatum, nu: &[i64]) -> Vec<&'a SphericalRoot> {
    d.type_t_roots().filter(|(_, r)| dot(nu, &r.gamma) == 0).map(|(_, r)| r).collect()
}

/// Apply `s_γ` to every monomial of an element on `Λ_X`.
pub fn wx_reflect(
    d: &SphericalDatum,
    gamma: &SphericalRoot,
    f: &GroupAlgebraElement,
) -> GroupAlgebraElement {
    f.map_points(&d.lattice_x, |x| gamma.reflect(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub id: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status} {}", c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Integer points of the box `[-r, r]^n`.
pub(crate) fn box_points(n: usize, r: i64) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Point| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Window used by the basic-function check during validation.
pub const VALIDATION_WINDOW: i64 = 6;

pub fn validate_datum(d: &SphericalDatum) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(Check { name, passed, detail });
    };
    let r = d.group.rank();
    let rx = d.rank_x();

    let shapes_ok = d.proj.len() == rx
        && d.proj.iter().all(|row| row.len() == r)
        && d.section.len() == rx
        && d.section.iter().all(|c| c.len() == r)
        && d.height.len() == rx
        && d.cone_ineqs.iter().all(|f| f.len() == rx)
        && d.spherical_roots.iter().all(|s| {
            s.gamma.len() == rx
                && s.coroot.len() == rx
                && s.colors.as_ref().map_or(true, |(a, b)| a.len() == rx && b.len() == rx)
        })
        && d.theta_plus.iter().all(|t| t.coweight.len() == rx && t.degree > 0)
        && [&d.half_sums.rho2, &d.half_sums.rho_p2, &d.half_sums.rho_l2]
            .iter()
            .all(|v| v.len() == r);
    push("shapes", shapes_ok, String::new());
    if !shapes_ok {
        return ValidationReport { id: d.id.clone(), checks };
    }

    let bad_pairing: Vec<String> = d
        .spherical_roots
        .iter()
        .enumerate()
        .filter(|(_, s)| dot(&s.coroot, &s.gamma) != 2)
        .map(|(i, s)| format!("root {i}: <coroot, gamma> = {}", dot(&s.coroot, &s.gamma)))
        .collect();
    let pairing_ok = bad_pairing.is_empty();
    push("pairing", pairing_ok, bad_pairing.join("; "));
    if !pairing_ok {
        return ValidationReport { id: d.id.clone(), checks };
    }

    let mut color_issues = Vec::new();
    for (i, s) in d.spherical_roots.iter().enumerate() {
        match (s.kind, &s.colors) {
            (RootType::T, Some((a, b))) => {
                let sum: Point = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if sum != s.coroot {
                    color_issues.push(format!("root {i}: colors sum to {sum:?}"));
                }
            }
            (RootType::T, None) => color_issues.push(format!("root {i}: type T without colors")),
            (RootType::G, Some(_)) => color_issues.push(format!("root {i}: type G with colors")),
            (RootType::G, None) => {}
        }
    }
    push("colors", color_issues.is_empty(), color_issues.join("; "));

    match d.group.roots() {
        Ok(roots) => {
            let bad: Vec<String> = d
                .type_t_roots()
                .filter_map(|(i, s)| {
                    let pulled: Point = (0..r)
                        .map(|j| d.proj.iter().zip(&s.gamma).map(|(row, g)| row[j] * g).sum())
                        .collect();
                    (!roots.contains(&pulled)).then(|| format!("root {i} pulls back to {pulled:?}"))
                })
                .collect();
            push("type T roots are roots of G", bad.is_empty(), bad.join("; "));
        }
        Err(e) => push("type T roots are roots of G", false, e.to_string()),
    }

    let mut surj = true;
    for (j, col) in d.section.iter().enumerate() {
        let image = d.project(col);
        for (i, v) in image.iter().enumerate() {
            if *v != i64::from(i == j) {
                surj = false;
            }
        }
    }
    push("proj surjective (section is a right inverse)", surj, String::new());

    let mut nonpositive = Vec::new();
    for s in &d.spherical_roots {
        if d.height_of(&s.coroot) <= 0 {
            nonpositive.push(format!("coroot {:?}", s.coroot));
        }
    }
    for t in &d.theta_plus {
        if d.height_of(&t.coweight) <= 0 {
            nonpositive.push(format!("theta {:?}", t.coweight));
        }
    }
    push("positive heights", nonpositive.is_empty(), nonpositive.join("; "));

    let radius = if r <= 4 { 3 } else { 1 };
    let chamber_misses: Vec<Point> = box_points(r, radius)
        .into_iter()
        .filter(|l| d.group.simple_roots.iter().all(|a| dot(l, a) <= 0))
        .filter(|l| !d.in_cone(&d.project(l)))
        .take(3)
        .collect();
    push(
        "cone contains the negative chamber",
        chamber_misses.is_empty(),
        if chamber_misses.is_empty() { String::new() } else { format!("misses {chamber_misses:?}") },
    );

    let rx_radius = if rx <= 4 { 4 } else { 2 };
    let above: Vec<Point> = box_points(rx, rx_radius)
        .into_iter()
        .filter(|nu| d.in_cone(nu) && d.height_of(nu) > 0)
        .take(3)
        .collect();
    push(
        "cone lies in height <= 0",
        above.is_empty(),
        if above.is_empty() { String::new() } else { format!("e.g. {above:?}") },
    );

    let wx = d.positive_coroots();
    push(
        "little Weyl group finite",
        wx.is_ok(),
        wx.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
    );

    if d.branch == Branch::StronglyTempered {
        let iso = rx == r && d.proj.iter().zip(&d.section).all(|_| true) && {
            // section ∘ proj = 1 as well, so proj is invertible over Z.
            (0..r).all(|i| {
                let mut e = vec![0; r];
                e[i] = 1;
                d.lift(&d.project(&e)) == e
            })
        };
        push("strongly tempered: proj is an isomorphism", iso, String::new());
        let degrees = d.theta_plus.iter().all(|t| t.degree == 1);
        push("strongly tempered: all degrees 1", degrees, String::new());
        let minuscule = match d.group.roots() {
            Ok(roots) => d.theta_plus.iter().all(|t| {
                let up = d.lift(&t.coweight);
                roots.iter().all(|a| (-1..=1).contains(&dot(&up, a)))
            }),
            Err(_) => false,
        };
        push("strongly tempered: theta weights minuscule", minuscule, String::new());
    }

    let kernel_bad: Vec<Point> = d
        .kernel_generators()
        .into_iter()
        .filter(|k| dot(k, &d.half_sums.rho_p2) != 0)
        .collect();
    push(
        "ker(proj) orthogonal to rho_P",
        kernel_bad.is_empty(),
        if kernel_bad.is_empty() { String::new() } else { format!("{kernel_bad:?}") },
    );

    let rho_ok = d.half_sums.is_consistent()
        && d.group.two_rho().map_or(false, |r2| r2 == d.half_sums.rho2);
    push("half sums", rho_ok, String::new());

    let mut theta_issues = Vec::new();
    for (i, s) in d.type_t_roots() {
        let Some((vd, vd2)) = &s.colors else { continue };
        let mut rest: Vec<&ThetaWeight> = d.theta_plus.iter().collect();
        for v in [vd, vd2] {
            match rest.iter().position(|t| &t.coweight == v && t.degree == 1) {
                Some(k) => {
                    rest.remove(k);
                }
                None => theta_issues.push(format!("root {i}: color {v:?} missing from theta")),
            }
        }
        let mut before: Vec<(Point, u32)> = rest.iter().map(|t| (t.coweight.clone(), t.degree)).collect();
        let mut after: Vec<(Point, u32)> =
            rest.iter().map(|t| (s.reflect(&t.coweight), t.degree)).collect();
        before.sort();
        after.sort();
        if before != after {
            theta_issues.push(format!("root {i}: reflection does not permute the other thetas"));
        }
        if s.reflect(vd) != vd2.iter().map(|x| -x).collect::<Point>() {
            theta_issues.push(format!("root {i}: s(v_D) != -v_D'"));
        }
    }
    push("theta structure at type T roots", theta_issues.is_empty(), theta_issues.join("; "));

    let basic = satake::inverse_satake_expand(d, &GroupAlgebraElement::one(&d.lattice_x), VALIDATION_WINDOW);
    let (ok, detail) = match basic {
        Ok(e) => {
            let expected = GroupAlgebraElement::one(&d.lattice_x);
            let got = e.restricted.to_element();
            (got == expected, if got == expected { String::new() } else { got.to_canonical() })
        }
        Err(err) => (false, err.to_string()),
    };
    push("basic function identity", ok, detail);

    ValidationReport { id: d.id.clone(), checks }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    pub(crate) fn t_gl2() -> SphericalDatum {
        SphericalDatum {
            id: "t-gl2".into(),
            group: RootDatum::gl(2),
            lattice_x: Lattice::new(1, "Λ_X"),
            proj: vec![vec![1, -1]],
            section: vec![vec![1, 0]],
            height: vec![1],
            cone_ineqs: vec![vec![-1]],
            spherical_roots: vec![SphericalRoot {
                gamma: vec![1],
                coroot: vec![2],
                kind: RootType::T,
                colors: Some((vec![1], vec![1])),
            }],
            theta_plus: vec![
                ThetaWeight { coweight: vec![1], degree: 1 },
                ThetaWeight { coweight: vec![1], degree: 1 },
            ],
            half_sums: HalfSum { rho2: vec![1, -1], rho_p2: vec![1, -1], rho_l2: vec![0, 0] },
            branch: Branch::Homogeneous,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::t_gl2;
    use super::*;
    use crate::coeffs::QLaurent;

    fn t_gl2_bundle() -> BundleDatum {
        BundleDatum {
            id: "t-gl2/det".into(),
            torus_rank: 1,
            nu_on_ha: vec![0],
            theta_fiber: vec![1, -1],
            color_fiber: vec![(1, -1)],
        }
    }

    #[test]
    fn t_gl2_validates() {
        let report = validate_datum(&t_gl2());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn pgl2_group_case_validates_without_type_t() {
        let d = SphericalDatum::group_case(&RootDatum::pgl2(), "pgl2-group").unwrap();
        let report = validate_datum(&d);
        assert!(report.passed(), "{report}");
        assert_eq!(d.type_t_roots().count(), 0);
        assert!(type_t_walls(&d, &[0]).is_empty());
    }

    #[test]
    fn gl3_group_case_validates() {
        let d = SphericalDatum::group_case(&RootDatum::gl(3), "gl3-group").unwrap();
        let report = validate_datum(&d);
        assert!(report.passed(), "{report}");
        assert_eq!(d.positive_coroots().unwrap().len(), 3);
    }

    #[test]
    fn bad_pairing_fails() {
        let mut d = t_gl2();
        d.spherical_roots[0].coroot = vec![3];
        let report = validate_datum(&d);
        assert!(!report.check("pairing").unwrap().passed);
    }

    #[test]
    fn bundle_extension() {
        let base = t_gl2();
        let ext = extend_with_bundle(&base, &t_gl2_bundle()).unwrap();
        assert_eq!(ext.rank_x(), 2);
        assert_eq!(ext.spherical_roots.len(), 1);
        assert_eq!(ext.theta_plus[0].coweight, vec![1, 1]);
        assert_eq!(ext.theta_plus[1].coweight, vec![1, -1]);
        let report = validate_datum(&ext);
        assert!(report.passed(), "{report}");
        // Projecting the fibre away recovers the old theta multiset.
        let old: Vec<Point> = base.theta_plus.iter().map(|t| t.coweight.clone()).collect();
        let new: Vec<Point> = ext.theta_plus.iter().map(|t| t.coweight[..1].to_vec()).collect();
        assert_eq!(old, new);
        let mut bad = t_gl2_bundle();
        bad.nu_on_ha = vec![1];
        assert!(matches!(
            extend_with_bundle(&base, &bad),
            Err(SphericalError::NotCombinatoriallyTrivial(..))
        ));
    }

    #[test]
    fn trivial_bundle_on_group_case() {
        let d = SphericalDatum::group_case(&RootDatum::pgl2(), "pgl2-group").unwrap();
        let ext = extend_with_bundle(&d, &BundleDatum::trivial(&d, "pgl2-group/trivial")).unwrap();
        assert_eq!(ext.rank_x(), 2);
        assert_eq!(ext.spherical_roots[0].coroot, vec![2, 0]);
        assert!(validate_datum(&ext).passed());
    }

    #[test]
    fn walls() {
        let d = t_gl2();
        assert_eq!(type_t_walls(&d, &[0]).len(), 1);
        assert!(type_t_walls(&d, &[2]).is_empty());
    }

    #[test]
    fn reflection_of_coroot() {
        let d = t_gl2();
        let g = &d.spherical_roots[0];
        let f = GroupAlgebraElement::monomial(&d.lattice_x, vec![2], QLaurent::one());
        assert_eq!(
            wx_reflect(&d, g, &f),
            GroupAlgebraElement::monomial(&d.lattice_x, vec![-2], QLaurent::one())
        );
    }
}
