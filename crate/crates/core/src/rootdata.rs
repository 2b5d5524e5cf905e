//! Split root data, reflection closures and Hecke polynomials of minuscule
//! representations of the dual group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::coeffs::{add_points, dot, GroupAlgebraElement, Lattice, Point, QLaurent};

/// Upper bound on the size of any reflection closure.
pub const CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("simple root {index}: <coroot, root> = {value}, expected 2")]
    BadPairing { index: usize, value: i64 },
    #[error("vector {0:?} has the wrong length for rank {1}")]
    RankMismatch(Point, usize),
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("reflection closure exceeded {0} points")]
    OrbitCapExceeded(usize),
    #[error("highest weight {0:?} is not minuscule")]
    NotMinuscule(Point),
}

/// Coordinates beyond this magnitude are treated as divergence.
const MAGNITUDE_CAP: i64 = 1 << 40;

/// Breadth-first closure of `seeds` under `count` generators. `apply` returns
/// `None` when an image leaves the representable range.
pub fn reflection_closure<T, F>(
    seeds: impl IntoIterator<Item = T>,
    count: usize,
    apply: F,
) -> Result<BTreeSet<T>, RootDataError>
where
    T: Ord + Clone,
    F: Fn(usize, &T) -> Option<T>,
{
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..count {
            let y = apply(i, &x).ok_or(RootDataError::OrbitCapExceeded(CLOSURE_CAP))?;
            if !seen.contains(&y) {
                if seen.len() >= CLOSURE_CAP {
                    return Err(RootDataError::OrbitCapExceeded(CLOSURE_CAP));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

pub(crate) fn bounded(v: Point) -> Option<Point> {
    v.iter().all(|x| x.abs() < MAGNITUDE_CAP).then_some(v)
}

/// Root datum of a split group, given on the cocharacter lattice `Λ`.
///
/// Roots are integer functionals on `Λ` and the pairing is the dot product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub lattice: Lattice,
    pub char_lattice: Lattice,
    pub simple_roots: Vec<Point>,
    pub simple_coroots: Vec<Point>,
}

impl RootDatum {
    pub fn new(
        label: &str,
        rank: usize,
        simple_roots: Vec<Point>,
        simple_coroots: Vec<Point>,
    ) -> Result<Self, RootDataError> {
        let datum = Self {
            lattice: Lattice::new(rank, label),
            char_lattice: Lattice::new(rank, format!("X*({label})")),
            simple_roots,
            simple_coroots,
        };
        datum.validate()?;
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    fn validate(&self) -> Result<(), RootDataError> {
        let r = self.rank();
        if self.simple_roots.len() != self.simple_coroots.len() {
            return Err(RootDataError::NotFiniteType(
                "different numbers of simple roots and coroots".into(),
            ));
        }
        for v in self.simple_roots.iter().chain(&self.simple_coroots) {
            if v.len() != r {
                return Err(RootDataError::RankMismatch(v.clone(), r));
            }
        }
        let a = self.cartan_matrix();
        let n = a.len();
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(RootDataError::BadPairing { index: i, value: a[i][i] });
            }
            for j in 0..n {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return Err(RootDataError::NotFiniteType(format!(
                        "entries ({i},{j}) = {}, ({j},{i}) = {}",
                        a[i][j], a[j][i]
                    )));
                }
                if i != j && a[i][j] * a[j][i] > 3 {
                    return Err(RootDataError::NotFiniteType(format!(
                        "a_{i}{j} a_{j}{i} = {} exceeds 3",
                        a[i][j] * a[j][i]
                    )));
                }
            }
        }
        self.positive_roots()?;
        Ok(())
    }

    /// `a_ij = <coroot_i, root_j>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.simple_coroots
            .iter()
            .map(|c| self.simple_roots.iter().map(|r| dot(c, r)).collect())
            .collect()
    }

    /// `s_i(x) = x - <x, α_i> α̌_i` on cocharacters.
    pub fn reflect_coweight(&self, i: usize, x: &[i64]) -> Point {
        let k = dot(x, &self.simple_roots[i]);
        x.iter().zip(&self.simple_coroots[i]).map(|(a, c)| a - k * c).collect()
    }

    /// `s_i(β) = β - <α̌_i, β> α_i` on characters.
    pub fn reflect_weight(&self, i: usize, beta: &[i64]) -> Point {
        let k = dot(&self.simple_coroots[i], beta);
        beta.iter().zip(&self.simple_roots[i]).map(|(b, r)| b - k * r).collect()
    }

    pub fn weyl_orbit(&self, mu: &[i64]) -> Result<BTreeSet<Point>, RootDataError> {
        if mu.len() != self.rank() {
            return Err(RootDataError::RankMismatch(mu.to_vec(), self.rank()));
        }
        reflection_closure([mu.to_vec()], self.semisimple_rank(), |i, x| {
            bounded(self.reflect_coweight(i, x))
        })
    }

    /// Roots as pairs (functional, coordinates in the simple roots).
    fn root_system(&self) -> Result<BTreeMap<Point, Point>, RootDataError> {
        let n = self.semisimple_rank();
        let seeds = (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            (self.simple_roots[i].clone(), e)
        });
        let all = reflection_closure(seeds, n, |j, (beta, coords)| {
            let k = dot(&self.simple_coroots[j], beta);
            let mut c = coords.clone();
            c[j] -= k;
            Some((bounded(self.reflect_weight(j, beta))?, c))
        })?;
        Ok(all.into_iter().collect())
    }

    pub fn roots(&self) -> Result<Vec<Point>, RootDataError> {
        Ok(self.root_system()?.into_keys().collect())
    }

    pub fn positive_roots(&self) -> Result<Vec<Point>, RootDataError> {
        Ok(self
            .root_system()?
            .into_iter()
            .filter(|(_, c)| c.iter().all(|x| *x >= 0))
            .map(|(r, _)| r)
            .collect())
    }

    pub fn positive_coroots(&self) -> Result<Vec<Point>, RootDataError> {
        let dual = Self {
            lattice: self.char_lattice.clone(),
            char_lattice: self.lattice.clone(),
            simple_roots: self.simple_coroots.clone(),
            simple_coroots: self.simple_roots.clone(),
        };
        dual.positive_roots()
    }

    /// Twice the half-sum of positive roots, an integral functional.
    pub fn two_rho(&self) -> Result<Point, RootDataError> {
        Ok(self
            .positive_roots()?
            .iter()
            .fold(vec![0; self.rank()], |acc, r| add_points(&acc, r)))
    }

    /// Direct product, coordinates of `self` first.
    pub fn product(&self, other: &Self, label: &str) -> Self {
        let pad = |v: &Point, before: usize, after: usize| {
            let mut out = vec![0; before];
            out.extend_from_slice(v);
            out.extend(std::iter::repeat(0).take(after));
            out
        };
        let (r1, r2) = (self.rank(), other.rank());
        let roots = self
            .simple_roots
            .iter()
            .map(|v| pad(v, 0, r2))
            .chain(other.simple_roots.iter().map(|v| pad(v, r1, 0)))
            .collect();
        let coroots = self
            .simple_coroots
            .iter()
            .map(|v| pad(v, 0, r2))
            .chain(other.simple_coroots.iter().map(|v| pad(v, r1, 0)))
            .collect();
        Self {
            lattice: Lattice::new(r1 + r2, label),
            char_lattice: Lattice::new(r1 + r2, format!("X*({label})")),
            simple_roots: roots,
            simple_coroots: coroots,
        }
    }

    /// Split torus of rank `n`.
    pub fn torus(n: usize) -> Self {
        Self::new(&format!("GL1^{n}"), n, vec![], vec![]).expect("torus is valid")
    }

    /// `GL_n` with the standard diagonal coordinates.
    pub fn gl(n: usize) -> Self {
        let e = |i: usize, j: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            v
        };
        let simple: Vec<Point> = (0..n.saturating_sub(1)).map(|i| e(i, i + 1)).collect();
        Self::new(&format!("GL{n}"), n, simple.clone(), simple).expect("GL_n is valid")
    }

    /// `PGL_2` with cocharacter lattice `Z`: `α(m) = m`, `α̌ = 2`.
    pub fn pgl2() -> Self {
        Self::new("PGL2", 1, vec![vec![1]], vec![vec![2]]).expect("PGL2 is valid")
    }
}

/// Half-sums of positive roots for `G`, `P(X)` and `L(X)`, all doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSum {
    pub rho2: Point,
    pub rho_p2: Point,
    pub rho_l2: Point,
}

impl HalfSum {
    pub fn is_consistent(&self) -> bool {
        add_points(&self.rho_p2, &self.rho_l2) == self.rho2
    }

    pub fn extend_by_zero(&self, extra: usize) -> Self {
        let ext = |v: &Point| {
            let mut v = v.clone();
            v.extend(std::iter::repeat(0).take(extra));
            v
        };
        Self { rho2: ext(&self.rho2), rho_p2: ext(&self.rho_p2), rho_l2: ext(&self.rho_l2) }
    }
}

/// A representation of the dual group given by one Weyl orbit of weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightOrbitRep {
    pub highest_weight: Point,
    pub orbit: Vec<Point>,
    pub minuscule: bool,
}

impl WeightOrbitRep {
    pub fn new(datum: &RootDatum, highest_weight: Point) -> Result<Self, RootDataError> {
        let orbit: Vec<Point> = datum.weyl_orbit(&highest_weight)?.into_iter().collect();
        let minuscule = datum
            .roots()?
            .iter()
            .all(|a| (-1..=1).contains(&dot(&highest_weight, a)));
        Ok(Self { highest_weight, orbit, minuscule })
    }

    /// Sum of all weights.
    pub fn determinant_weight(&self) -> Point {
        let n = self.highest_weight.len();
        self.orbit.iter().fold(vec![0; n], |acc, w| add_points(&acc, w))
    }
}

/// Coefficients `c_0, ..., c_n` of `det(1 - q^{-1/2} t X | V)`.
pub fn hecke_polynomial(
    datum: &RootDatum,
    v: &WeightOrbitRep,
) -> Result<Vec<GroupAlgebraElement>, RootDataError> {
    if !v.minuscule {
        return Err(RootDataError::NotMinuscule(v.highest_weight.clone()));
    }
    let lat = &datum.lattice;
    let mut coeffs = vec![GroupAlgebraElement::one(lat)];
    for w in &v.orbit {
        let factor = GroupAlgebraElement::monomial(lat, w.clone(), QLaurent::monomial(-1, -1));
        let mut next = coeffs.clone();
        next.push(GroupAlgebraElement::zero(lat));
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(&c.mul(&factor).expect("same lattice")).expect("same lattice");
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// True iff every simple reflection fixes `f`.
pub fn w_invariance_check(datum: &RootDatum, f: &GroupAlgebraElement) -> bool {
    (0..datum.semisimple_rank())
        .all(|i| f.map_points(f.lattice(), |x| datum.reflect_coweight(i, x)) == *f)
}
