//! Restriction of Satake transforms to `X`, shear integrality and the inverse
//! relative Satake expansion.

use thiserror::Error;

use crate::coeffs::{
    dot, geometric_expand, CoeffError, ConeSeries, GroupAlgebraElement, Point, QLaurent,
};
use crate::rootdata::{w_invariance_check, RootDataError, RootDatum};
use crate::spherical::SphericalDatum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatakeError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("window bound {0} is too small")]
    WindowTooSmall(i64),
    #[error("Satake image is not Weyl invariant")]
    NotWInvariant,
}

/// A spherical Hecke operator, recorded by its Satake image on `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeOperator {
    pub satake_image: GroupAlgebraElement,
    pub invariant_checked: bool,
}

impl HeckeOperator {
    pub fn new(datum: &RootDatum, satake_image: GroupAlgebraElement) -> Result<Self, SatakeError> {
        datum.lattice.check(satake_image.lattice())?;
        if !w_invariance_check(datum, &satake_image) {
            return Err(SatakeError::NotWInvariant);
        }
        Ok(Self { satake_image, invariant_checked: true })
    }
}

/// `ℒ̂_(X)` together with its upstairs witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedOperator {
    pub element: GroupAlgebraElement,
    pub lift: GroupAlgebraElement,
}

/// `e^λ ↦ q^{-<λ, ρ_(X)>} e^{proj λ}`, paired upstairs.
pub fn restrict_to_x(d: &SphericalDatum, f: &GroupAlgebraElement) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero(&d.lattice_x);
    for (pt, c) in f.terms() {
        out.add_term(d.project(pt), c.shift(-dot(pt, &d.half_sums.rho_l2)));
    }
    out
}

pub fn restricted_operator(d: &SphericalDatum, op: &HeckeOperator) -> RestrictedOperator {
    RestrictedOperator {
        element: restrict_to_x(d, &op.satake_image),
        lift: op.satake_image.clone(),
    }
}

/// True iff `c_λ q^{-<λ, ρ>}` lies in `Z[q^{-1}]` for every `λ`.
pub fn shear_membership(rho2: &[i64], f: &GroupAlgebraElement) -> bool {
    shear_failures(rho2, f).is_empty()
}

fn shear_failures(rho2: &[i64], f: &GroupAlgebraElement) -> Vec<(Point, QLaurent)> {
    f.terms()
        .map(|(pt, c)| (pt.clone(), c.shift(-dot(pt, rho2))))
        .filter(|(_, sheared)| !sheared.in_z_qinv())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralityVerdict {
    Pass,
    /// The upstairs witness failed at these points (sheared coefficients).
    Indeterminate(Vec<(Point, QLaurent)>),
}

impl IntegralityVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, IntegralityVerdict::Pass)
    }
}

pub fn is_x_integral(d: &SphericalDatum, op: &HeckeOperator) -> IntegralityVerdict {
    let failures = shear_failures(&d.half_sums.rho2, &op.satake_image);
    if failures.is_empty() {
        IntegralityVerdict::Pass
    } else {
        IntegralityVerdict::Indeterminate(failures)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    /// Normalised series on all of `Λ_X`, exact for height `<= N`.
    pub full: ConeSeries,
    /// The points of `full` inside `Λ_X^+`.
    pub restricted: ConeSeries,
}

impl Expansion {
    /// Points of the restricted series with a half-integral power of `q`.
    pub fn half_integer_points(&self) -> Vec<Point> {
        self.restricted
            .terms()
            .filter(|(_, c)| !c.has_integer_exponents())
            .map(|(p, _)| p.clone())
            .collect()
    }
}

/// `Lx · ∏(1 - e^{γ̌}) / ∏(1 - q^{-d/2} e^{θ̌})`, normalised by
/// `q^{<lift λ, ρ_P(X)>}` and cut to height `<= bound`.
///
/// The cone sits in height `<= 0` while every expansion direction has positive
/// height, so the factor series are computed to height `bound - min(0, h(Lx))`
/// to keep the product exact up to `bound`.
pub fn inverse_satake_expand(
    d: &SphericalDatum,
    lx: &GroupAlgebraElement,
    bound: i64,
) -> Result<Expansion, SatakeError> {
    if bound < 0 {
        return Err(SatakeError::WindowTooSmall(bound));
    }
    d.lattice_x.check(lx.lattice())?;
    let window = d.window(bound);
    let lowest = lx.terms().map(|(p, _)| d.height_of(p)).min().unwrap_or(0).min(0);
    let wide = d.window(bound - lowest);
    let lat = &d.lattice_x;

    let mut factor = ConeSeries::one(lat, &wide);
    for coroot in d.positive_coroots()? {
        let h = d.height_of(&coroot);
        if h <= 0 {
            return Err(CoeffError::NonPositiveHeight(coroot, h).into());
        }
        let one_minus = GroupAlgebraElement::from_terms(
            lat,
            [(lat.origin(), QLaurent::one()), (coroot, QLaurent::constant(-1))],
        );
        factor = factor.mul_element(&one_minus)?;
    }
    for theta in &d.theta_plus {
        let c = QLaurent::q_half_pow(-(theta.degree as i64));
        factor = factor.mul(&geometric_expand(&c, &theta.coweight, lat, &wide)?)?;
    }
    let product = factor.to_element().mul(lx)?;
    let p = ConeSeries::truncate(&product, &window);
    let full = p.map_coeffs(|pt, c| c.shift(d.rho_p_weight2(pt)));
    let restricted = full.filter(|pt| d.in_cone(pt));
    Ok(Expansion { full, restricted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{hecke_polynomial, WeightOrbitRep};
    use crate::spherical::SphericalDatum;

    fn t_gl2() -> SphericalDatum {
        crate::spherical::tests_support::t_gl2()
    }

    #[test]
    fn identity_and_zero() {
        let d = t_gl2();
        let one = GroupAlgebraElement::one(&d.lattice_x);
        let e = inverse_satake_expand(&d, &one, 6).unwrap();
        assert_eq!(e.restricted.to_element(), one);
        let z = inverse_satake_expand(&d, &GroupAlgebraElement::zero(&d.lattice_x), 6).unwrap();
        assert!(z.full.is_zero() && z.restricted.is_zero());
    }

    #[test]
    fn t_gl2_c1_values() {
        let d = t_gl2();
        let v = WeightOrbitRep::new(&d.group, vec![1, 0]).unwrap();
        let h = hecke_polynomial(&d.group, &v).unwrap();
        let lx = restrict_to_x(&d, &h[1]);
        let e = inverse_satake_expand(&d, &lx, 4).unwrap();
        let terms: Vec<(Point, QLaurent)> =
            e.restricted.terms().map(|(p, c)| (p.clone(), c.clone())).collect();
        assert_eq!(
            terms,
            vec![
                (vec![-1], QLaurent::monomial(-2, -1)),
                (vec![0], QLaurent::monomial(-2, -2)),
            ]
        );
    }

    #[test]
    fn shear_examples() {
        let g = RootDatum::gl(2);
        let rho2 = g.two_rho().unwrap();
        assert!(shear_membership(&rho2, &GroupAlgebraElement::one(&g.lattice)));
        let bad = GroupAlgebraElement::monomial(&g.lattice, vec![0, 0], QLaurent::q_half_pow(2));
        assert!(!shear_membership(&rho2, &bad));
        let v = WeightOrbitRep::new(&g, vec![1, 0]).unwrap();
        for c in hecke_polynomial(&g, &v).unwrap() {
            assert!(shear_membership(&rho2, &c));
        }
    }

    #[test]
    fn integrality_verdicts() {
        let d = t_gl2();
        let id = HeckeOperator::new(&d.group, GroupAlgebraElement::one(&d.group.lattice)).unwrap();
        assert!(is_x_integral(&d, &id).is_pass());
        let big = GroupAlgebraElement::monomial(&d.group.lattice, vec![0, 0], QLaurent::q_half_pow(20));
        let op = HeckeOperator::new(&d.group, big).unwrap();
        match is_x_integral(&d, &op) {
            IntegralityVerdict::Indeterminate(f) => assert_eq!(f.len(), 1),
            IntegralityVerdict::Pass => panic!("expected indeterminate"),
        }
    }

    #[test]
    fn non_invariant_operator_rejected() {
        let g = RootDatum::gl(2);
        let f = GroupAlgebraElement::monomial(&g.lattice, vec![1, 0], QLaurent::one());
        assert_eq!(HeckeOperator::new(&g, f), Err(SatakeError::NotWInvariant));
    }

    #[test]
    fn strongly_tempered_restriction_is_identity() {
        let mut d = t_gl2();
        d.proj = vec![vec![1, 0], vec![0, 1]];
        d.section = vec![vec![1, 0], vec![0, 1]];
        d.lattice_x = crate::coeffs::Lattice::new(2, "Λ_X");
        let f = GroupAlgebraElement::monomial(&d.group.lattice, vec![1, 0], QLaurent::one());
        let r = restrict_to_x(&d, &f);
        assert_eq!(r.to_canonical(), f.to_canonical());
    }
}
