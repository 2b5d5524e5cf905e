//! Rank-one group factors: double-coset representatives, the forward Satake
//! transform by unipotent counting, and decomposition of specialized Satake
//! images into indicator functions.

use std::collections::BTreeMap;

use tamenorm_core::coeffs::{Point, QuadraticSurd};

use crate::padic::{Mat2, Padic};
use crate::OracleError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Gl1,
    Gl2,
    Pgl2,
}

/// An element of one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorElem {
    Scalar(Padic),
    Matrix(Mat2),
}

impl FactorElem {
    pub fn scalar(&self) -> &Padic {
        match self {
            FactorElem::Scalar(s) => s,
            FactorElem::Matrix(_) => panic!("expected a scalar factor"),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        match self {
            FactorElem::Matrix(m) => m,
            FactorElem::Scalar(_) => panic!("expected a matrix factor"),
        }
    }
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Gl1 | Factor::Pgl2 => 1,
            Factor::Gl2 => 2,
        }
    }

    pub fn dominant(self, mu: &[i64]) -> bool {
        match self {
            Factor::Gl1 => true,
            Factor::Gl2 => mu[0] >= mu[1],
            Factor::Pgl2 => mu[0] >= 0,
        }
    }

    pub fn height(self, mu: &[i64]) -> i64 {
        match self {
            Factor::Gl1 => 0,
            Factor::Gl2 => mu[0] - mu[1],
            Factor::Pgl2 => mu[0],
        }
    }

    /// The coweight of the inverse double coset.
    pub fn dual(self, mu: &[i64]) -> Point {
        match self {
            Factor::Gl1 => vec![-mu[0]],
            Factor::Gl2 => vec![-mu[1], -mu[0]],
            Factor::Pgl2 => vec![mu[0]],
        }
    }

    /// Representatives of `K p^mu K / K`.
    pub fn coset_reps(self, p: u64, mu: &[i64], rel: i64) -> Result<Vec<FactorElem>, OracleError> {
        if !self.dominant(mu) {
            return Err(OracleError::NotDominant(mu.to_vec()));
        }
        Ok(match self {
            Factor::Gl1 => vec![FactorElem::Scalar(Padic::pi_pow(p, mu[0], rel))],
            Factor::Gl2 => gl2_reps(p, mu[0], mu[1], rel)?.into_iter().map(FactorElem::Matrix).collect(),
            Factor::Pgl2 => gl2_reps(p, mu[0], 0, rel)?.into_iter().map(FactorElem::Matrix).collect(),
        })
    }

    /// Classical Satake image of the indicator of `K p^mu K` at `q = p`.
    pub fn satake(self, p: u64, mu: &[i64], rel: i64) -> Result<BTreeMap<Point, QuadraticSurd>, OracleError> {
        Ok(match self {
            Factor::Gl1 => BTreeMap::from([(mu.to_vec(), QuadraticSurd::from_int(p, 1))]),
            Factor::Gl2 => gl2_satake(p, mu[0], mu[1], rel)?,
            Factor::Pgl2 => gl2_satake(p, mu[0], 0, rel)?
                .into_iter()
                .map(|(l, c)| (vec![l[0] - l[1]], c))
                .collect(),
        })
    }
}

fn in_double_coset(m: &Mat2, m1: i64, m2: i64) -> Result<bool, OracleError> {
    Ok(m.minval()? == m2 && m.det_valuation()? == m1 + m2)
}

fn residues(p: u64, e: i64) -> impl Iterator<Item = i64> {
    0..(p as i64).pow(e as u32)
}

/// Upper-triangular representatives `[[p^a, c], [0, p^b]]` of
/// `K diag(p^m1, p^m2) K / K`, with `c` running over `p^m2 O / p^a O`.
fn gl2_reps(p: u64, m1: i64, m2: i64, rel: i64) -> Result<Vec<Mat2>, OracleError> {
    let mut out = Vec::new();
    for a in m2..=m1 {
        let b = m1 + m2 - a;
        for r in residues(p, a - m2) {
            let c = Padic::from_int(p, r, rel).mul(&Padic::pi_pow(p, m2, rel));
            let m = Mat2::new(Padic::pi_pow(p, a, rel), c, Padic::exact_zero(p), Padic::pi_pow(p, b, rel));
            if in_double_coset(&m, m1, m2)? {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// `q^{-(l1 - l2)/2} #{x in F/O : [[p^l1, p^l1 x], [0, p^l2]] in K p^mu K}`.
fn gl2_satake(p: u64, m1: i64, m2: i64, rel: i64) -> Result<BTreeMap<Point, QuadraticSurd>, OracleError> {
    let mut out = BTreeMap::new();
    for l1 in m2..=m1 {
        let l2 = m1 + m2 - l1;
        // Only v(x) >= m2 - l1 can reach minimum valuation m2.
        let e = m2 - l1;
        let mut count = 0i64;
        for r in residues(p, -e) {
            let x = Padic::from_int(p, r, rel).mul(&Padic::pi_pow(p, e, rel));
            let pl1 = Padic::pi_pow(p, l1, rel);
            let m = Mat2::new(pl1.clone(), pl1.mul(&x), Padic::exact_zero(p), Padic::pi_pow(p, l2, rel));
            if in_double_coset(&m, m1, m2)? {
                count += 1;
            }
        }
        if count > 0 {
            let weight = q_half_power(p, -(l1 - l2));
            out.insert(vec![l1, l2], QuadraticSurd::from_int(p, count).mul(&weight));
        }
    }
    Ok(out)
}

/// `p^{e2/2}` in `Q(sqrt p)`.
pub fn q_half_power(p: u64, e2: i64) -> QuadraticSurd {
    tamenorm_core::coeffs::QLaurent::q_half_pow(e2).specialize_surd(p)
}

/// A product of rank-one factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorGroup {
    pub factors: Vec<Factor>,
}

impl FactorGroup {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    fn split<'a>(&self, mu: &'a [i64]) -> Vec<&'a [i64]> {
        let mut out = Vec::new();
        let mut i = 0;
        for f in &self.factors {
            out.push(&mu[i..i + f.dim()]);
            i += f.dim();
        }
        out
    }

    pub fn dominant(&self, mu: &[i64]) -> bool {
        self.factors.iter().zip(self.split(mu)).all(|(f, m)| f.dominant(m))
    }

    pub fn height(&self, mu: &[i64]) -> i64 {
        self.factors.iter().zip(self.split(mu)).map(|(f, m)| f.height(m)).sum()
    }

    pub fn dual(&self, mu: &[i64]) -> Point {
        self.factors.iter().zip(self.split(mu)).flat_map(|(f, m)| f.dual(m)).collect()
    }

    /// Tuples of factor representatives for `K p^mu K / K`.
    pub fn coset_reps(&self, p: u64, mu: &[i64], rel: i64) -> Result<Vec<Vec<FactorElem>>, OracleError> {
        let mut out: Vec<Vec<FactorElem>> = vec![vec![]];
        for (f, m) in self.factors.iter().zip(self.split(mu)) {
            let reps = f.coset_reps(p, m, rel)?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    reps.iter().map(move |r| {
                        let mut t = prefix.clone();
                        t.push(r.clone());
                        t
                    })
                })
                .collect();
        }
        Ok(out)
    }

    pub fn satake(&self, p: u64, mu: &[i64], rel: i64) -> Result<BTreeMap<Point, QuadraticSurd>, OracleError> {
        let mut out = BTreeMap::from([(Point::new(), QuadraticSurd::from_int(p, 1))]);
        for (f, m) in self.factors.iter().zip(self.split(mu)) {
            let image = f.satake(p, m, rel)?;
            let mut next = BTreeMap::new();
            for (a, x) in &out {
                for (b, y) in &image {
                    let mut pt = a.clone();
                    pt.extend_from_slice(b);
                    next.insert(pt, x.mul(y));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Write a specialized Satake image as `sum coef_mu * Satake(1_{K p^mu K})`,
    /// peeling off the dominant point of largest height first.
    pub fn decompose(
        &self,
        p: u64,
        image: &BTreeMap<Point, QuadraticSurd>,
        rel: i64,
    ) -> Result<Vec<(Point, QuadraticSurd)>, OracleError> {
        let mut rest: BTreeMap<Point, QuadraticSurd> =
            image.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut out = Vec::new();
        while !rest.is_empty() {
            let mu = rest
                .keys()
                .filter(|k| self.dominant(k))
                .max_by_key(|k| self.height(k))
                .cloned()
                .ok_or(OracleError::NotInvariant)?;
            let s = self.satake(p, &mu, rel)?;
            let coef = rest[&mu].div(&s[&mu]).ok_or(OracleError::NotInvariant)?;
            for (k, x) in &s {
                let cur = rest.remove(k).unwrap_or_else(|| QuadraticSurd::zero(p));
                let next = cur.sub(&coef.mul(x));
                if !next.is_zero() {
                    rest.insert(k.clone(), next);
                }
            }
            if rest.contains_key(&mu) {
                return Err(OracleError::NotInvariant);
            }
            out.push((mu, coef));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REL: i64 = 16;

    #[test]
    fn representative_counts() {
        for p in [2, 3, 5] {
            assert_eq!(Factor::Gl2.coset_reps(p, &[1, 0], REL).unwrap().len() as u64, p + 1);
            assert_eq!(Factor::Gl2.coset_reps(p, &[0, 0], REL).unwrap().len(), 1);
            assert_eq!(Factor::Gl2.coset_reps(p, &[2, 0], REL).unwrap().len() as u64, p * p + p);
        }
        assert_eq!(Factor::Gl2.coset_reps(3, &[2, 0], REL).unwrap().len(), 12);
        assert!(Factor::Gl2.coset_reps(3, &[0, 1], REL).is_err());
    }

    #[test]
    fn gl2_satake_of_std() {
        let p = 3;
        let s = Factor::Gl2.satake(p, &[1, 0], REL).unwrap();
        let r = q_half_power(p, 1);
        assert_eq!(s.len(), 2);
        assert_eq!(s[&vec![1, 0]], r);
        assert_eq!(s[&vec![0, 1]], r);
    }

    #[test]
    fn decomposition_inverts_satake() {
        let g = FactorGroup::new(vec![Factor::Gl1, Factor::Gl2]);
        let p = 5;
        let a = g.satake(p, &[1, 2, 0], REL).unwrap();
        let b = g.satake(p, &[0, 1, 1], REL).unwrap();
        let mut sum = a.clone();
        for (k, x) in b {
            let cur = sum.remove(&k).unwrap_or_else(|| QuadraticSurd::zero(p));
            sum.insert(k, cur.add(&x.mul(&QuadraticSurd::from_int(p, 3))));
        }
        let d = g.decompose(p, &sum, REL).unwrap();
        assert_eq!(d, vec![
            (vec![1, 2, 0], QuadraticSurd::from_int(p, 1)),
            (vec![0, 1, 1], QuadraticSurd::from_int(p, 3)),
        ]);
    }
}
