//! p-adic numbers and 2x2 matrices with absolute precision tracking.
//!
//! A value is `p^val * unit` known modulo `p^prec`. The unit is stored as a
//! residue modulo `p^(prec - val)`, and relative precision is capped so that
//! products of two residues fit in a `u128`.

use crate::OracleError;

/// Precision of exact zeros. Sums of two such values still fit in an `i64`.
pub const EXACT: i64 = 1 << 40;

/// Largest relative precision `r` with `p^r < 2^62`.
pub fn relative_cap(p: u64) -> i64 {
    let mut r = 0;
    let mut x: u128 = 1;
    while x * (p as u128) < (1u128 << 62) {
        x *= p as u128;
        r += 1;
    }
    r
}

fn ppow(p: u64, e: i64) -> u128 {
    (p as u128).pow(e as u32)
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i128) as u128
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    prec: i64,
    val: i64,
    unit: u128,
}

impl Padic {
    /// An element of `p^prec O`.
    pub fn zero(p: u64, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        Self { p, prec, val: prec, unit: 0 }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    fn normalize(p: u64, val: i64, prec: i64, x: u128) -> Self {
        let prec = prec.min(EXACT);
        if val >= prec {
            return Self::zero(p, prec);
        }
        let rel = (prec - val).min(relative_cap(p));
        let prec = val + rel;
        let mut x = x % ppow(p, rel);
        if x == 0 {
            return Self::zero(p, prec);
        }
        let mut val = val;
        while x % p as u128 == 0 {
            x /= p as u128;
            val += 1;
        }
        Self { p, prec, val, unit: x }
    }

    /// The integer `n` with relative precision `rel`.
    pub fn from_int(p: u64, n: i64, rel: i64) -> Self {
        if n == 0 {
            return Self::exact_zero(p);
        }
        let mut m = n.unsigned_abs() as u128;
        let mut val = 0;
        while m % p as u128 == 0 {
            m /= p as u128;
            val += 1;
        }
        let rel = rel.min(relative_cap(p));
        let modulus = ppow(p, rel);
        let m = m % modulus;
        let unit = if n < 0 { (modulus - m) % modulus } else { m };
        Self::normalize(p, val, val + rel, unit)
    }

    pub fn one(p: u64, rel: i64) -> Self {
        Self::from_int(p, 1, rel)
    }

    /// `p^k` with relative precision `rel`.
    pub fn pi_pow(p: u64, k: i64, rel: i64) -> Self {
        Self::normalize(p, k, k + rel.min(relative_cap(p)), 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn valuation(&self) -> Result<i64, OracleError> {
        if self.is_zero() {
            Err(OracleError::PrecisionExhausted(format!(
                "valuation of a value zero modulo p^{}",
                self.prec
            )))
        } else {
            Ok(self.val)
        }
    }

    /// Residue of an integral unit modulo `p`.
    pub fn residue(&self) -> Option<u64> {
        (!self.is_zero() && self.val == 0).then(|| (self.unit % self.p as u128) as u64)
    }

    fn scaled(&self, v: i64, prec: i64) -> u128 {
        if self.is_zero() || self.val - v >= prec - v {
            return 0;
        }
        (self.unit * ppow(self.p, self.val - v)) % ppow(self.p, prec - v)
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let prec = self.prec.min(o.prec);
        let v = self.val.min(o.val);
        if v >= prec {
            return Self::zero(self.p, prec);
        }
        let m = ppow(self.p, prec - v);
        let x = (self.scaled(v, prec) + o.scaled(v, prec)) % m;
        Self::normalize(self.p, v, prec, x)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.prec - self.val);
        Self { unit: m - self.unit, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        let rel = (self.prec - self.val).min(o.prec - o.val);
        let x = (self.unit * o.unit) % ppow(self.p, rel);
        Self::normalize(self.p, self.val + o.val, prec, x)
    }

    pub fn inverse(&self) -> Result<Self, OracleError> {
        let v = self.valuation()?;
        let rel = self.prec - v;
        let unit = mod_inverse(self.unit, ppow(self.p, rel));
        Ok(Self::normalize(self.p, -v, -v + rel, unit))
    }
}

/// Minimum valuation of a family, failing when a value that is zero to its
/// precision could still be the minimum.
pub fn min_valuation<'a>(xs: impl IntoIterator<Item = &'a Padic>) -> Result<i64, OracleError> {
    let mut known: Option<i64> = None;
    let mut zero_floor: Option<i64> = None;
    for x in xs {
        if x.is_zero() {
            zero_floor = Some(zero_floor.map_or(x.prec, |z| z.min(x.prec)));
        } else {
            known = Some(known.map_or(x.val, |k| k.min(x.val)));
        }
    }
    match (known, zero_floor) {
        (Some(k), Some(z)) if z < k => Err(OracleError::PrecisionExhausted(format!(
            "minimum valuation undetermined below p^{z}"
        ))),
        (Some(k), _) => Ok(k),
        (None, _) => Err(OracleError::PrecisionExhausted("all entries vanish".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[Padic; 2]; 2],
}

impl Mat2 {
    pub fn new(a: Padic, b: Padic, c: Padic, d: Padic) -> Self {
        Self { e: [[a, b], [c, d]] }
    }

    pub fn identity(p: u64) -> Self {
        let (o, z) = (Padic::one(p, EXACT), Padic::exact_zero(p));
        Self::new(o.clone(), z.clone(), z, o)
    }

    /// `diag(p^a, p^b)`.
    pub fn diag_pi(p: u64, a: i64, b: i64, rel: i64) -> Self {
        let z = Padic::exact_zero(p);
        Self::new(Padic::pi_pow(p, a, rel), z.clone(), z, Padic::pi_pow(p, b, rel))
    }

    /// Integer matrix with relative precision `rel` on each entry.
    pub fn from_ints(p: u64, m: [[i64; 2]; 2], rel: i64) -> Self {
        let f = |x| Padic::from_int(p, x, rel);
        Self::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn prime(&self) -> u64 {
        self.e[0][0].prime()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let entry = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Self::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        let f = |x: &Padic| x.mul(c);
        Self::new(f(&self.e[0][0]), f(&self.e[0][1]), f(&self.e[1][0]), f(&self.e[1][1]))
    }

    pub fn det(&self) -> Padic {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn inverse(&self) -> Result<Self, OracleError> {
        let d = self.det().inverse()?;
        let adj = Self::new(
            self.e[1][1].clone(),
            self.e[0][1].neg(),
            self.e[1][0].neg(),
            self.e[0][0].clone(),
        );
        Ok(adj.scale(&d))
    }

    pub fn minval(&self) -> Result<i64, OracleError> {
        min_valuation(self.e.iter().flatten())
    }

    pub fn row_minval(&self, i: usize) -> Result<i64, OracleError> {
        min_valuation(self.e[i].iter())
    }

    pub fn det_valuation(&self) -> Result<i64, OracleError> {
        self.det().valuation()
    }

    /// Membership in `GL_2(O)`.
    pub fn in_gl2_o(&self) -> Result<bool, OracleError> {
        Ok(self.minval()? >= 0 && self.det_valuation()? == 0)
    }

    /// Membership in the image of `GL_2(O)` in `PGL_2`.
    pub fn in_pgl2_o(&self) -> Result<bool, OracleError> {
        Ok(self.det_valuation()? == 2 * self.minval()?)
    }
}
