//! Exact coefficient arithmetic.
//!
//! [`QLaurent`] is the ring of Laurent polynomials in `q^{1/2}` with integer
//! coefficients. Exponents are stored doubled so that all arithmetic stays in
//! the integers. [`GroupAlgebraElement`] is the group algebra of a lattice over
//! that ring, and [`ConeSeries`] is a formal series cut off by a linear height
//! functional.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// A point of a lattice, in the coordinates of its stated basis.
pub type Point = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("q = {0} has no rational square root but the value has half-integer exponents")]
    NonSquareValue(String),
    #[error("cannot specialize at q = 0")]
    ZeroValue,
    #[error("exponent q^({0}/2) is not integral")]
    HalfIntegerExponent(i64),
    #[error("lattice mismatch: `{0}` vs `{1}`")]
    LatticeMismatch(String, String),
    #[error("direction {0:?} has non-positive height {1}")]
    NonPositiveHeight(Point, i64),
    #[error("window mismatch: {0} vs {1}")]
    WindowMismatch(String, String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Element of `Z[q^{1/2}, q^{-1/2}]`, keyed by twice the exponent of `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c * q^{exp2/2}`.
    pub fn monomial(exp2: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp2, c);
        }
        Self { terms }
    }

    /// `q^{exp2/2}`.
    pub fn q_half_pow(exp2: i64) -> Self {
        Self::monomial(exp2, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, exp2: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp2).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp2);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp2: i64) -> BigInt {
        self.terms.get(&exp2).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply by `q^{exp2/2}`.
    pub fn shift(&self, exp2: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + exp2, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    pub fn first_half_integer_exponent(&self) -> Option<i64> {
        self.terms.keys().copied().find(|e| e % 2 != 0)
    }

    /// Value at `q = 1`, the sum of the coefficients.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact value at a rational `q`.
    pub fn specialize(&self, v: &BigRational) -> Result<BigRational, CoeffError> {
        if v.is_zero() {
            return Err(CoeffError::ZeroValue);
        }
        let base = if self.has_integer_exponents() {
            None
        } else {
            Some(rational_sqrt(v).ok_or_else(|| CoeffError::NonSquareValue(v.to_string()))?)
        };
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let power = match &base {
                Some(root) => pow_i64(root, *e),
                None => pow_i64(v, e / 2),
            };
            acc += power * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Value at `q = n` as an element of `Q(sqrt n)`.
    pub fn specialize_surd(&self, n: u64) -> QuadraticSurd {
        let q = BigRational::from_integer(BigInt::from(n));
        let mut acc = QuadraticSurd::zero(n);
        for (e, c) in &self.terms {
            let c = BigRational::from_integer(c.clone());
            let whole = pow_i64(&q, e.div_euclid(2));
            if e.rem_euclid(2) == 0 {
                acc.rational += whole * c;
            } else {
                acc.radical += whole * c;
            }
        }
        acc.normalize()
    }

    /// Membership in `(q - 1) Z[q, q^{-1}]`.
    pub fn divisible_by_qminus1(&self) -> Result<bool, CoeffError> {
        if let Some(e) = self.first_half_integer_exponent() {
            return Err(CoeffError::HalfIntegerExponent(e));
        }
        Ok(self.at_one().is_zero())
    }

    /// Membership in `Z[q^{-1}]`: integral exponents, none positive.
    pub fn in_z_qinv(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0 && *e <= 0)
    }

    /// Canonical text `[(e2,c),...]`, sorted by doubled exponent.
    pub fn to_canonical(&self) -> String {
        let body: Vec<String> = self.terms.iter().map(|(e, c)| format!("({e},{c})")).collect();
        format!("[{}]", body.join(","))
    }

    pub fn from_canonical(s: &str) -> Result<Self, CoeffError> {
        let mut p = Parser::new(s);
        let v = p.qlaurent()?;
        p.end()?;
        Ok(v)
    }
}

impl fmt::Display for QLaurent {
    /// Human form, e.g. `1 - q^-1` or `-2q^-1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let exp = if e % 2 == 0 { format!("{}", e / 2) } else { format!("{e}/2") };
            match (*e == 0, mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "q^{exp}")?,
                (false, false) => write!(f, "{mag}q^{exp}")?,
            }
        }
        Ok(())
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term(e + f, c * d);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(QLaurent, Add, add);
forward_owned!(QLaurent, Sub, sub);
forward_owned!(QLaurent, Mul, mul);

pub fn laurent_mul(a: &QLaurent, b: &QLaurent) -> QLaurent {
    a * b
}

pub fn specialize_q(a: &QLaurent, v: &BigRational) -> Result<BigRational, CoeffError> {
    a.specialize(v)
}

pub fn divisible_by_qminus1(a: &QLaurent) -> Result<bool, CoeffError> {
    a.divisible_by_qminus1()
}

pub fn in_z_qinv(a: &QLaurent) -> bool {
    a.in_z_qinv()
}

fn pow_i64(base: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| BigRational::new(n, d))
}

/// `rational + radical * sqrt(n)` for a fixed positive integer `n`.
///
/// When `n` is a perfect square the radical part is folded into the rational
/// part, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub n: u64,
    pub rational: BigRational,
    pub radical: BigRational,
}

impl QuadraticSurd {
    pub fn zero(n: u64) -> Self {
        Self::from_rational(n, BigRational::zero())
    }

    pub fn from_rational(n: u64, r: BigRational) -> Self {
        Self { n, rational: r, radical: BigRational::zero() }
    }

    pub fn from_int(n: u64, k: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(k.into()))
    }

    fn normalize(mut self) -> Self {
        let r = self.n.sqrt();
        if r * r == self.n && !self.radical.is_zero() {
            let root = BigRational::from_integer(BigInt::from(r));
            self.rational += &self.radical * root;
            self.radical = BigRational::zero();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        Self {
            n: self.n,
            rational: &self.rational + &o.rational,
            radical: &self.radical + &o.radical,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, rational: -&self.rational, radical: -&self.radical }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let n = BigRational::from_integer(BigInt::from(self.n));
        Self {
            n: self.n,
            rational: &self.rational * &o.rational + &self.radical * &o.radical * n,
            radical: &self.rational * &o.radical + &self.radical * &o.rational,
        }
        .normalize()
    }

    /// `None` on division by zero. Requires `n` to be a non-square or the
    /// surd to be normalized, which every constructor guarantees.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let n = BigRational::from_integer(BigInt::from(self.n));
        let norm = &o.rational * &o.rational - &o.radical * &o.radical * n;
        let conj = Self {
            n: self.n,
            rational: &o.rational / &norm,
            radical: -&o.radical / &norm,
        };
        Some(self.mul(&conj))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{}+{}*sqrt({})", self.rational, self.radical, self.n)
        }
    }
}

/// A free abelian group of finite rank with a human label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub rank: usize,
    pub label: String,
}

impl Lattice {
    pub fn new(rank: usize, label: impl Into<String>) -> Self {
        Self { rank, label: label.into() }
    }

    pub fn origin(&self) -> Point {
        vec![0; self.rank]
    }

    pub fn check(&self, other: &Lattice) -> Result<(), CoeffError> {
        if self == other {
            Ok(())
        } else {
            Err(CoeffError::LatticeMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(rank {})", self.label, self.rank)
    }
}

pub fn add_points(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_point(k: i64, a: &[i64]) -> Point {
    a.iter().map(|x| k * x).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Finite sums `sum c_lambda e^lambda` with `c_lambda` in [`QLaurent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    lattice: Lattice,
    terms: BTreeMap<Point, QLaurent>,
}

impl GroupAlgebraElement {
    pub fn zero(lattice: &Lattice) -> Self {
        Self { lattice: lattice.clone(), terms: BTreeMap::new() }
    }

    pub fn one(lattice: &Lattice) -> Self {
        Self::monomial(lattice, lattice.origin(), QLaurent::one())
    }

    /// `c * e^point`. Panics if the point has the wrong length.
    pub fn monomial(lattice: &Lattice, point: Point, c: QLaurent) -> Self {
        let mut out = Self::zero(lattice);
        out.add_term(point, c);
        out
    }

    pub fn from_terms<I>(lattice: &Lattice, terms: I) -> Self
    where
        I: IntoIterator<Item = (Point, QLaurent)>,
    {
        let mut out = Self::zero(lattice);
        for (pt, c) in terms {
            out.add_term(pt, c);
        }
        out
    }

    pub fn add_term(&mut self, point: Point, c: QLaurent) {
        assert_eq!(
            point.len(),
            self.lattice.rank,
            "point {point:?} does not lie in {}",
            self.lattice
        );
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&point) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&point);
                }
            }
            None => {
                self.terms.insert(point, c);
            }
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, point: &[i64]) -> QLaurent {
        self.terms.get(point).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.lattice.check(&other.lattice)?;
        let mut out = self.clone();
        for (pt, c) in &other.terms {
            out.add_term(pt.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.lattice.check(&other.lattice)?;
        let mut out = Self::zero(&self.lattice);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(add_points(a, b), c * d);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(&self.lattice);
        for (pt, x) in &self.terms {
            out.add_term(pt.clone(), x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&QLaurent) -> QLaurent) -> Self {
        let mut out = Self::zero(&self.lattice);
        for (pt, c) in &self.terms {
            out.add_term(pt.clone(), f(c));
        }
        out
    }

    /// Push every monomial forward along `f` into `target`, collecting terms.
    pub fn map_points(&self, target: &Lattice, f: impl Fn(&[i64]) -> Point) -> Self {
        let mut out = Self::zero(target);
        for (pt, c) in &self.terms {
            out.add_term(f(pt), c.clone());
        }
        out
    }

    /// Multiply each coefficient by `q^{weight(point)/2}`.
    pub fn twist(&self, weight: impl Fn(&[i64]) -> i64) -> Self {
        let mut out = Self::zero(&self.lattice);
        for (pt, c) in &self.terms {
            out.add_term(pt.clone(), c.shift(weight(pt)));
        }
        out
    }

    pub fn to_canonical(&self) -> String {
        canonical_terms(&self.terms)
    }

    pub fn from_canonical(lattice: &Lattice, s: &str) -> Result<Self, CoeffError> {
        let mut p = Parser::new(s);
        let terms = p.term_list(lattice.rank)?;
        p.end()?;
        Ok(Self::from_terms(lattice, terms))
    }
}

pub fn ga_mul(
    a: &GroupAlgebraElement,
    b: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement, CoeffError> {
    a.mul(b)
}

fn canonical_terms(terms: &BTreeMap<Point, QLaurent>) -> String {
    let body: Vec<String> = terms
        .iter()
        .map(|(pt, c)| format!("({},{})", canonical_point(pt), c.to_canonical()))
        .collect();
    format!("[{}]", body.join(","))
}

pub fn canonical_point(pt: &[i64]) -> String {
    let parts: Vec<String> = pt.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Truncation descriptor: keep points with `height(pt) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub height: Vec<i64>,
    pub bound: i64,
}

impl Window {
    pub fn new(height: Vec<i64>, bound: i64) -> Self {
        Self { height, bound }
    }

    pub fn height_of(&self, pt: &[i64]) -> i64 {
        dot(&self.height, pt)
    }

    pub fn contains(&self, pt: &[i64]) -> bool {
        self.height_of(pt) <= self.bound
    }

    pub fn with_bound(&self, bound: i64) -> Self {
        Self { height: self.height.clone(), bound }
    }

    pub fn to_canonical(&self) -> String {
        format!("window(h={},N={})", canonical_point(&self.height), self.bound)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

/// Formal series on a lattice, exact on `height <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSeries {
    lattice: Lattice,
    window: Window,
    terms: BTreeMap<Point, QLaurent>,
}

impl ConeSeries {
    pub fn zero(lattice: &Lattice, window: &Window) -> Self {
        Self { lattice: lattice.clone(), window: window.clone(), terms: BTreeMap::new() }
    }

    pub fn one(lattice: &Lattice, window: &Window) -> Self {
        Self::truncate(&GroupAlgebraElement::one(lattice), window)
    }

    /// Drop every monomial above the window.
    pub fn truncate(f: &GroupAlgebraElement, window: &Window) -> Self {
        let terms = f
            .terms()
            .filter(|(pt, _)| window.contains(pt))
            .map(|(pt, c)| (pt.clone(), c.clone()))
            .collect();
        Self { lattice: f.lattice().clone(), window: window.clone(), terms }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, pt: &[i64]) -> QLaurent {
        self.terms.get(pt).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The stored terms as a finite group-algebra element.
    pub fn to_element(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::from_terms(
            &self.lattice,
            self.terms.iter().map(|(p, c)| (p.clone(), c.clone())),
        )
    }

    fn compatible(&self, other: &Self) -> Result<(), CoeffError> {
        self.lattice.check(&other.lattice)?;
        if self.window.height != other.window.height {
            return Err(CoeffError::WindowMismatch(
                self.window.to_canonical(),
                other.window.to_canonical(),
            ));
        }
        Ok(())
    }

    /// Product truncated to the smaller of the two windows.
    pub fn mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.compatible(other)?;
        let window = self.window.with_bound(self.window.bound.min(other.window.bound));
        let product = self.to_element().mul(&other.to_element())?;
        Ok(Self::truncate(&product, &window))
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.compatible(other)?;
        let window = self.window.with_bound(self.window.bound.min(other.window.bound));
        Ok(Self::truncate(&self.to_element().add(&other.to_element())?, &window))
    }

    /// Multiply by a finite element, truncating to this window.
    pub fn mul_element(&self, f: &GroupAlgebraElement) -> Result<Self, CoeffError> {
        Ok(Self::truncate(&self.to_element().mul(f)?, &self.window))
    }

    /// Keep the terms whose point satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> Self {
        Self {
            lattice: self.lattice.clone(),
            window: self.window.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&[i64], &QLaurent) -> QLaurent) -> Self {
        let mut terms = BTreeMap::new();
        for (p, c) in &self.terms {
            let v = f(p, c);
            if !v.is_zero() {
                terms.insert(p.clone(), v);
            }
        }
        Self { lattice: self.lattice.clone(), window: self.window.clone(), terms }
    }

    /// Equality of all terms inside the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.compatible(other).is_err() {
            return false;
        }
        let bound = self.window.bound.min(other.window.bound);
        let a = self.terms.iter().filter(|(p, _)| self.window.height_of(p) <= bound);
        let b = other.terms.iter().filter(|(p, _)| other.window.height_of(p) <= bound);
        a.eq(b)
    }

    pub fn to_canonical(&self) -> String {
        format!("{}{}", self.window.to_canonical(), canonical_terms(&self.terms))
    }

    pub fn from_canonical(lattice: &Lattice, s: &str) -> Result<Self, CoeffError> {
        let mut p = Parser::new(s);
        p.expect("window(h=")?;
        let height = p.point(lattice.rank)?;
        p.expect(",N=")?;
        let bound = p.int()?;
        p.expect(")")?;
        let terms = p.term_list(lattice.rank)?;
        p.end()?;
        let window = Window::new(height, bound);
        let f = GroupAlgebraElement::from_terms(lattice, terms);
        Ok(Self::truncate(&f, &window))
    }
}

/// `sum_{k >= 0} c^k e^{k theta}` truncated to the window.
pub fn geometric_expand(
    c: &QLaurent,
    theta: &[i64],
    lattice: &Lattice,
    window: &Window,
) -> Result<ConeSeries, CoeffError> {
    let h = window.height_of(theta);
    if h <= 0 {
        return Err(CoeffError::NonPositiveHeight(theta.to_vec(), h));
    }
    let mut out = GroupAlgebraElement::one(lattice);
    let mut power = QLaurent::one();
    let mut k = 1;
    while !c.is_zero() && k * h <= window.bound {
        power = &power * c;
        out.add_term(scale_point(k, theta), power.clone());
        k += 1;
    }
    Ok(ConeSeries::truncate(&out, window))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self { s: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CoeffError> {
        Err(CoeffError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &str) -> Result<(), CoeffError> {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn end(&self) -> Result<(), CoeffError> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn digits(&mut self) -> Result<&'a str, CoeffError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let tok = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        if tok.is_empty() || tok == "-" {
            self.pos = start;
            return self.err("expected an integer");
        }
        Ok(tok)
    }

    fn int(&mut self) -> Result<i64, CoeffError> {
        let tok = self.digits()?;
        tok.parse().or_else(|_| self.err("integer out of range"))
    }

    fn bigint(&mut self) -> Result<BigInt, CoeffError> {
        let tok = self.digits()?;
        tok.parse().or_else(|_| self.err("bad integer"))
    }

    fn point(&mut self, rank: usize) -> Result<Point, CoeffError> {
        self.expect("(")?;
        let mut out = Vec::with_capacity(rank);
        while self.peek() != Some(b')') {
            if !out.is_empty() {
                self.expect(",")?;
            }
            out.push(self.int()?);
        }
        self.expect(")")?;
        if out.len() != rank {
            return self.err(format!("point of length {}, expected {rank}", out.len()));
        }
        Ok(out)
    }

    fn qlaurent(&mut self) -> Result<QLaurent, CoeffError> {
        self.expect("[")?;
        let mut out = QLaurent::zero();
        let mut last: Option<i64> = None;
        while self.peek() != Some(b']') {
            if last.is_some() {
                self.expect(",")?;
            }
            self.expect("(")?;
            let e = self.int()?;
            self.expect(",")?;
            let c = self.bigint()?;
            self.expect(")")?;
            if last.is_some_and(|l| l >= e) || c.is_zero() {
                return self.err("exponents must be strictly increasing with nonzero coefficients");
            }
            last = Some(e);
            out.add_term(e, c);
        }
        self.expect("]")?;
        Ok(out)
    }

    fn term_list(&mut self, rank: usize) -> Result<Vec<(Point, QLaurent)>, CoeffError> {
        self.expect("[")?;
        let mut out: Vec<(Point, QLaurent)> = Vec::new();
        while self.peek() != Some(b']') {
            if !out.is_empty() {
                self.expect(",")?;
            }
            self.expect("(")?;
            let pt = self.point(rank)?;
            self.expect(",")?;
            let c = self.qlaurent()?;
            self.expect(")")?;
            if out.last().is_some_and(|(l, _)| *l >= pt) || c.is_zero() {
                return self.err("points must be strictly increasing with nonzero coefficients");
            }
            out.push((pt, c));
        }
        self.expect("]")?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[(i64, i64)]) -> QLaurent {
        QLaurent::from_terms(terms.iter().copied())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn half_powers_multiply() {
        let h = QLaurent::q_half_pow(1);
        assert_eq!(&h * &h, QLaurent::q_half_pow(2));
        let a = q(&[(0, 1), (-1, -1)]);
        let b = q(&[(0, 1), (-1, 1)]);
        assert_eq!(&a * &b, q(&[(0, 1), (-2, -1)]));
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(q(&[(2, 1), (0, -1)]).specialize(&rat(1, 1)).unwrap(), rat(0, 1));
        assert_eq!(q(&[(1, 1), (-1, 1)]).specialize(&rat(4, 1)).unwrap(), rat(5, 2));
        assert_eq!(q(&[(0, 1), (2, 1), (4, 1)]).specialize(&rat(1, 1)).unwrap(), rat(3, 1));
        assert!(matches!(
            q(&[(1, 1)]).specialize(&rat(3, 1)),
            Err(CoeffError::NonSquareValue(_))
        ));
        assert_eq!(q(&[(2, 1)]).specialize(&rat(3, 1)).unwrap(), rat(3, 1));
        assert_eq!(q(&[(-1, 2)]).specialize(&rat(9, 4)).unwrap(), rat(4, 3));
    }

    #[test]
    fn divisibility_examples() {
        assert!(q(&[(4, 1), (2, -1)]).divisible_by_qminus1().unwrap());
        assert!(!q(&[(2, 1), (0, 1)]).divisible_by_qminus1().unwrap());
        assert!(QLaurent::zero().divisible_by_qminus1().unwrap());
        assert_eq!(
            q(&[(1, 1)]).divisible_by_qminus1(),
            Err(CoeffError::HalfIntegerExponent(1))
        );
    }

    #[test]
    fn z_qinv_examples() {
        assert!(q(&[(0, 1), (-6, 1)]).in_z_qinv());
        assert!(!q(&[(1, 1)]).in_z_qinv());
        assert!(!q(&[(2, 1)]).in_z_qinv());
    }

    #[test]
    fn surd_specialization() {
        let v = q(&[(1, 1), (-1, 1), (-2, 3)]).specialize_surd(3);
        assert_eq!(v.rational, rat(1, 1));
        assert_eq!(v.radical, rat(4, 3));
        let w = q(&[(1, 1)]).specialize_surd(4);
        assert!(w.is_rational());
        assert_eq!(w.rational, rat(2, 1));
    }

    #[test]
    fn surd_division_inverts_multiplication() {
        let a = q(&[(1, 2), (0, -1)]).specialize_surd(5);
        let b = q(&[(-1, 1), (2, 3)]).specialize_surd(5);
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        assert!(a.div(&QuadraticSurd::zero(5)).is_none());
    }

    #[test]
    fn monomials_add_exponents() {
        let l = Lattice::new(2, "L");
        let a = GroupAlgebraElement::monomial(&l, vec![1, 0], QLaurent::one());
        let b = GroupAlgebraElement::monomial(&l, vec![0, 1], QLaurent::one());
        assert_eq!(
            ga_mul(&a, &b).unwrap(),
            GroupAlgebraElement::monomial(&l, vec![1, 1], QLaurent::one())
        );
        let other = Lattice::new(2, "M");
        assert!(matches!(
            ga_mul(&a, &GroupAlgebraElement::one(&other)),
            Err(CoeffError::LatticeMismatch(..))
        ));
    }

    #[test]
    fn telescoping_product() {
        let l = Lattice::new(1, "L");
        let n = 5;
        let one_minus = GroupAlgebraElement::from_terms(
            &l,
            [(vec![0], QLaurent::one()), (vec![1], QLaurent::constant(-1))],
        );
        let sum = GroupAlgebraElement::from_terms(&l, (0..=n).map(|k| (vec![k], QLaurent::one())));
        let expected = GroupAlgebraElement::from_terms(
            &l,
            [(vec![0], QLaurent::one()), (vec![n + 1], QLaurent::constant(-1))],
        );
        assert_eq!(one_minus.mul(&sum).unwrap(), expected);
    }

    #[test]
    fn three_term_geometric_expansion() {
        let l = Lattice::new(1, "L");
        let w = Window::new(vec![1], 2);
        let s = geometric_expand(&QLaurent::q_half_pow(-1), &[1], &l, &w).unwrap();
        let expected = GroupAlgebraElement::from_terms(
            &l,
            [
                (vec![0], QLaurent::one()),
                (vec![1], QLaurent::q_half_pow(-1)),
                (vec![2], QLaurent::q_half_pow(-2)),
            ],
        );
        assert_eq!(s.to_element(), expected);
        let zero = geometric_expand(&QLaurent::zero(), &[1], &l, &w).unwrap();
        assert_eq!(zero.to_element(), GroupAlgebraElement::one(&l));
        assert!(matches!(
            geometric_expand(&QLaurent::one(), &[-1], &l, &w),
            Err(CoeffError::NonPositiveHeight(..))
        ));
    }

    #[test]
    fn canonical_forms() {
        let a = q(&[(-2, -1), (0, 1)]);
        assert_eq!(a.to_canonical(), "[(-2,-1),(0,1)]");
        assert_eq!(QLaurent::from_canonical("[]").unwrap(), QLaurent::zero());
        assert!(QLaurent::from_canonical("[(0,1),(0,2)]").is_err());
        assert!(QLaurent::from_canonical("[(0,0)]").is_err());
        let l = Lattice::new(2, "L");
        let f = GroupAlgebraElement::from_terms(&l, [(vec![1, -1], a.clone())]);
        assert_eq!(f.to_canonical(), "[((1,-1),[(-2,-1),(0,1)])]");
        let s = ConeSeries::truncate(&f, &Window::new(vec![1, 0], 3));
        assert_eq!(s.to_canonical(), "window(h=(1,0),N=3)[((1,-1),[(-2,-1),(0,1)])]");
        assert_eq!(ConeSeries::from_canonical(&l, &s.to_canonical()).unwrap(), s);
    }

    #[test]
    fn human_display() {
        assert_eq!(q(&[(0, 1), (-2, -1)]).to_string(), "1 - q^-1");
        assert_eq!(q(&[(-1, -2)]).to_string(), "-2q^-1/2");
        assert_eq!(QLaurent::zero().to_string(), "0");
    }
}
