//! Concrete rank-one models of the shipped spherical varieties.
//!
//! Every model stores a point as a 2x2 matrix together with a fiber scalar
//! `u`, which is only consulted by bundle variants. With `P0 = [[1,0],[1,1]]`:
//!
//! - `t-gl2`, `t-pgl2`: the rows of `m` span two lines; `G` acts by `m ↦ m g`.
//!   With `r_i` the row minimum valuations, `d = v(det m) - r1 - r2` is the
//!   relative position of the lines and `v(u) - r1 + r2` the fiber coordinate.
//!   `x_ν = P0 diag(p^ν, 1)`.
//! - `pgl2-group`: `(g1, g2)` acts by `x ↦ g1^{-1} x g2` on `PGL_2`, and
//!   `x_ν = diag(p^{-ν}, 1) w0`.
//! - `ggp-1`: pairs `(s, g)` modulo the diagonal `GL_1`, stored as
//!   `y = diag(1/s, 1) g`; `(s1, g1)` acts by `y ↦ diag(1/s1, 1) y g1` and
//!   `u ↦ u / s1`. The point of `(s, a, b, τ)` is
//!   `diag(p^{-s}, 1) P0 diag(p^a, p^b)` with `u = p^{τ - s}`; the coordinates
//!   are recovered from the row minima and the determinant valuation.
//!
//! The Hecke variable `T` multiplies `u` by `p^{-1}`.

use crate::factor::{Factor, FactorElem, FactorGroup};
use crate::padic::{Mat2, Padic};
use crate::OracleError;
use tamenorm_core::coeffs::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Pgl2Group,
    TGl2,
    TPgl2,
    Ggp1,
}

impl ModelKind {
    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Pgl2Group => "pgl2-group",
            ModelKind::TGl2 => "t-gl2",
            ModelKind::TPgl2 => "t-pgl2",
            ModelKind::Ggp1 => "ggp-1",
        }
    }

    fn parse(id: &str) -> Option<Self> {
        [ModelKind::Pgl2Group, ModelKind::TGl2, ModelKind::TPgl2, ModelKind::Ggp1]
            .into_iter()
            .find(|k| k.id() == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPoint {
    pub m: Mat2,
    pub u: Padic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneModel {
    pub kind: ModelKind,
    pub bundle: bool,
    pub p: u64,
    /// Relative precision of every constructed entry.
    pub precision: i64,
}

fn p0(p: u64, rel: i64) -> Mat2 {
    Mat2::from_ints(p, [[1, 0], [1, 1]], rel)
}

fn e11(p: u64) -> Mat2 {
    Mat2::from_ints(p, [[1, 0], [0, 0]], crate::padic::EXACT)
}

impl RankOneModel {
    /// `id` is a model name, optionally suffixed with `-bundle`.
    pub fn new(id: &str, p: u64, precision: i64) -> Result<Self, OracleError> {
        let (base, bundle) = match id.strip_suffix("-bundle") {
            Some(b) => (b, true),
            None => (id, false),
        };
        let kind = ModelKind::parse(base).ok_or_else(|| OracleError::UnknownModel(id.to_string()))?;
        if ![2, 3, 5, 7].contains(&p) {
            return Err(OracleError::BadPrime(p));
        }
        Ok(Self { kind, bundle, p, precision })
    }

    pub fn id(&self) -> String {
        if self.bundle {
            format!("{}-bundle", self.kind.id())
        } else {
            self.kind.id().to_string()
        }
    }

    pub fn group(&self) -> FactorGroup {
        FactorGroup::new(match self.kind {
            ModelKind::Pgl2Group => vec![Factor::Pgl2, Factor::Pgl2],
            ModelKind::TGl2 => vec![Factor::Gl2],
            ModelKind::TPgl2 => vec![Factor::Pgl2],
            ModelKind::Ggp1 => vec![Factor::Gl1, Factor::Gl2],
        })
    }

    /// Rank of `Λ_X`, including the fiber coordinate for bundle variants.
    pub fn rank(&self) -> usize {
        let base = match self.kind {
            ModelKind::Ggp1 => 3,
            _ => 1,
        };
        base + usize::from(self.bundle)
    }

    fn base_rank(&self) -> usize {
        self.rank() - usize::from(self.bundle)
    }

    fn check_point(&self, nu: &[i64]) -> Result<(), OracleError> {
        if nu.len() != self.rank() {
            return Err(OracleError::BadPoint(format!("{nu:?} has rank {}, model {} needs {}", nu.len(), self.id(), self.rank())));
        }
        Ok(())
    }

    fn fiber(&self, nu: &[i64]) -> i64 {
        if self.bundle {
            nu[self.rank() - 1]
        } else {
            0
        }
    }

    /// The point `x_ν`.
    pub fn point(&self, nu: &[i64]) -> Result<ModelPoint, OracleError> {
        self.check_point(nu)?;
        let (p, rel) = (self.p, self.precision);
        let tau = self.fiber(nu);
        Ok(match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => ModelPoint {
                m: p0(p, rel).mul(&Mat2::diag_pi(p, nu[0], 0, rel)),
                u: Padic::pi_pow(p, tau, rel),
            },
            ModelKind::Pgl2Group => {
                let w0 = Mat2::from_ints(p, [[0, 1], [1, 0]], rel);
                ModelPoint { m: Mat2::diag_pi(p, -nu[0], 0, rel).mul(&w0), u: Padic::pi_pow(p, tau, rel) }
            }
            ModelKind::Ggp1 => {
                let (s, a, b) = (nu[0], nu[1], nu[2]);
                let m = Mat2::diag_pi(p, -s, 0, rel).mul(&p0(p, rel)).mul(&Mat2::diag_pi(p, a, b, rel));
                ModelPoint { m, u: Padic::pi_pow(p, tau - s, rel) }
            }
        })
    }

    pub fn base_point(&self) -> Result<ModelPoint, OracleError> {
        self.point(&vec![0; self.rank()])
    }

    /// Right action of a tuple of factor elements, followed by `T^k`.
    pub fn act(&self, x: &ModelPoint, g: &[FactorElem], k: i64) -> Result<ModelPoint, OracleError> {
        let p = self.p;
        let shift = Padic::pi_pow(p, -k, self.precision);
        Ok(match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => {
                ModelPoint { m: x.m.mul(g[0].matrix()), u: x.u.mul(&shift) }
            }
            ModelKind::Pgl2Group => ModelPoint {
                m: g[0].matrix().inverse()?.mul(&x.m).mul(g[1].matrix()),
                u: x.u.mul(&shift),
            },
            ModelKind::Ggp1 => {
                let s1 = g[0].scalar();
                let inv = s1.inverse()?;
                let left = Mat2::new(inv.clone(), Padic::exact_zero(p), Padic::exact_zero(p), Padic::one(p, crate::padic::EXACT));
                ModelPoint { m: left.mul(&x.m).mul(g[1].matrix()), u: x.u.mul(&inv).mul(&shift) }
            }
        })
    }

    /// Right action of a single matrix on every matrix factor, used for `K`-invariance checks.
    pub fn act_by_k(&self, x: &ModelPoint, k: &Mat2) -> Result<ModelPoint, OracleError> {
        let p = self.p;
        let one = Padic::one(p, crate::padic::EXACT);
        let g: Vec<FactorElem> = match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => vec![FactorElem::Matrix(k.clone())],
            ModelKind::Pgl2Group => vec![FactorElem::Matrix(k.clone()), FactorElem::Matrix(k.clone())],
            ModelKind::Ggp1 => vec![FactorElem::Scalar(one), FactorElem::Matrix(k.clone())],
        };
        self.act(x, &g, 0)
    }

    fn rows(&self, m: &Mat2) -> Result<(i64, i64, i64), OracleError> {
        Ok((m.row_minval(0)?, m.row_minval(1)?, m.det_valuation()?))
    }

    /// The indicator of `X(O)`.
    pub fn phi0(&self, x: &ModelPoint) -> Result<bool, OracleError> {
        let fiber_ok = |v: i64| !self.bundle || v == 0;
        Ok(match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => {
                let (r1, r2, dv) = self.rows(&x.m)?;
                dv - r1 - r2 == 0 && fiber_ok(x.u.valuation()? - r1 + r2)
            }
            ModelKind::Pgl2Group => x.m.in_pgl2_o()? && fiber_ok(x.u.valuation()?),
            ModelKind::Ggp1 => x.m.in_gl2_o()? && fiber_ok(x.u.valuation()?),
        })
    }

    /// The `λ ∈ Λ_X^+` with `x ∈ x_λ K`.
    pub fn cartan_coordinate(&self, x: &ModelPoint) -> Result<Point, OracleError> {
        if x.m.det().is_zero() {
            return Err(OracleError::BoundaryPoint(format!(
                "determinant vanishes modulo p^{}",
                x.m.det().precision()
            )));
        }
        let mut out = match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => {
                let (r1, r2, dv) = self.rows(&x.m)?;
                let mut c = vec![-(dv - r1 - r2)];
                if self.bundle {
                    c.push(x.u.valuation()? - r1 + r2);
                }
                c
            }
            ModelKind::Pgl2Group => {
                let mut c = vec![-(x.m.det_valuation()? - 2 * x.m.minval()?)];
                if self.bundle {
                    c.push(x.u.valuation()?);
                }
                c
            }
            ModelKind::Ggp1 => {
                let (r1, r2, dv) = self.rows(&x.m)?;
                let s = r2 - r1;
                let mut c = vec![s, r2, dv - r1];
                if self.bundle {
                    c.push(x.u.valuation()? + s);
                }
                c
            }
        };
        out.truncate(self.rank());
        Ok(out)
    }

    /// `sum_g Φ_0(x_ν g T^k)` over representatives `g` of `K p^mu K / K`.
    pub fn hecke_action_numeric(&self, mu: &[i64], k: i64, nu: &[i64]) -> Result<u64, OracleError> {
        let x = self.point(nu)?;
        let reps = self.group().coset_reps(self.p, mu, self.precision)?;
        let mut count = 0;
        for g in &reps {
            if self.phi0(&self.act(&x, g, k)?)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// The matrix `Q` such that `I + (a - 1) Q` stabilizes the point and acts on
    /// the fiber by `a`.
    fn stabilizer_direction(&self, x: &ModelPoint) -> Result<Option<Mat2>, OracleError> {
        Ok(match self.kind {
            ModelKind::TGl2 | ModelKind::TPgl2 => Some(x.m.inverse()?.mul(&e11(self.p)).mul(&x.m)),
            ModelKind::Ggp1 => Some(x.m.inverse()?.mul(&e11(self.p)).mul(&x.m)),
            ModelKind::Pgl2Group => None,
        })
    }

    /// Number of `K^1`-orbits on `x_λ K^0`: the index in `F_p^×` of the residues
    /// `a` for which `I + (a - 1) Q` lies in `K`.
    pub fn k1_orbit_count(&self, lambda: &[i64]) -> Result<u64, OracleError> {
        if !self.bundle {
            return Err(OracleError::BadPoint("orbit counts need a bundle model".into()));
        }
        let x = self.point(lambda)?;
        let Some(q) = self.stabilizer_direction(&x)? else {
            return Ok(self.p - 1);
        };
        let p = self.p;
        let lift_depth = (-q.minval()?).max(0);
        let lifts = (p as i64).pow(lift_depth as u32);
        let mut image = 0u64;
        for r in 1..p as i64 {
            let mut hit = false;
            for j in 0..lifts {
                let a = Padic::from_int(p, r + p as i64 * j - 1, self.precision);
                if q.scale(&a).minval().map_or(true, |v| v >= 0) {
                    hit = true;
                    break;
                }
            }
            if hit {
                image += 1;
            }
        }
        Ok((p - 1) / image.max(1))
    }

    pub fn base_part<'a>(&self, nu: &'a [i64]) -> &'a [i64] {
        &nu[..self.base_rank()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_point_is_integral() {
        for id in ["pgl2-group", "t-gl2", "t-pgl2", "ggp-1", "t-gl2-bundle", "ggp-1-bundle"] {
            let m = RankOneModel::new(id, 3, 12).unwrap();
            let x = m.base_point().unwrap();
            assert!(m.phi0(&x).unwrap(), "{id}");
            assert_eq!(m.cartan_coordinate(&x).unwrap(), vec![0; m.rank()], "{id}");
        }
    }

    #[test]
    fn tgl2_two_lines_example() {
        // Lines <e1> and <e1 + p^2 e2>.
        let m = RankOneModel::new("t-gl2", 3, 12).unwrap();
        let x = ModelPoint {
            m: Mat2::new(
                Padic::one(3, 12),
                Padic::exact_zero(3),
                Padic::one(3, 12),
                Padic::pi_pow(3, 2, 12),
            ),
            u: Padic::one(3, 12),
        };
        assert_eq!(m.cartan_coordinate(&x).unwrap(), vec![-2]);
    }

    #[test]
    fn orbit_counts_on_and_off_walls() {
        for p in [3, 5] {
            let m = RankOneModel::new("t-gl2-bundle", p, 12).unwrap();
            assert_eq!(m.k1_orbit_count(&[0, 0]).unwrap(), 1);
            assert_eq!(m.k1_orbit_count(&[-2, 1]).unwrap(), p - 1);
        }
        let m = RankOneModel::new("t-gl2-bundle", 2, 12).unwrap();
        assert_eq!(m.k1_orbit_count(&[-1, 0]).unwrap(), 1);
    }

    #[test]
    fn unknown_model_rejected() {
        assert!(matches!(RankOneModel::new("so5", 3, 12), Err(OracleError::UnknownModel(_))));
        assert!(matches!(RankOneModel::new("t-gl2", 11, 12), Err(OracleError::BadPrime(11))));
    }
}
