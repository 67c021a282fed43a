//! Exact arithmetic in the cyclotomic fields Q(ζ_N) = Q[x]/Φ_N(x).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(N)−1}. Every value
//! carries its order N; values of compatible orders (one dividing the other,
//! or either side rational) are combined by embedding into the larger field.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the monic cyclotomic polynomial Φ_n.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_polynomial(d);
            p = exact_div_monic(&p, &q);
        }
    }
    let p = Arc::new(p);
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Euler totient via the degree of Φ_n.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

/// Reduce a polynomial (lowest degree first) modulo Φ_n in place and resize to φ(n).
fn reduce_mod_phi(mut p: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if p.len() > deg {
        for k in (deg..p.len()).rev() {
            if p[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[k], Rational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let t = &c * rat_int(pj);
                    p[k - deg + j] -= t;
                }
            }
        }
    }
    p.resize(deg, Rational::zero());
    p
}

/// An element of Q(ζ_N) in canonical power-basis form.
#[derive(Clone, Debug)]
pub struct CycScalar {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycScalar {
    pub fn zero_of(order: u32) -> Self {
        CycScalar { order, coeffs: vec![Rational::zero(); totient(order)] }
    }

    pub fn one_of(order: u32) -> Self {
        Self::from_rational_in(Rational::one(), order)
    }

    /// A rational number, living in Q = Q(ζ_1).
    pub fn from_rational(q: Rational) -> Self {
        CycScalar { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn from_rational_in(q: Rational, order: u32) -> Self {
        let mut s = Self::zero_of(order);
        s.coeffs[0] = q;
        s
    }

    /// ζ_N^k for any integer k (reduced modulo N first).
    pub fn zeta_power(k: i64, order: u32) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        CycScalar { order, coeffs: reduce_mod_phi(p, order) }
    }

    /// Build from arbitrary-length power coefficients, reducing modulo Φ_N.
    pub fn from_power_coeffs(coeffs: Vec<Rational>, order: u32) -> Self {
        CycScalar { order, coeffs: reduce_mod_phi(coeffs, order) }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Embed into Q(ζ_n). Succeeds when the element is rational or its order divides n.
    pub fn to_order(&self, n: u32) -> Result<CycScalar> {
        if n == self.order {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational_in(q.clone(), n));
        }
        if n % self.order != 0 {
            return Err(Error::OrderMismatch(self.order, n));
        }
        let scale = (n / self.order) as usize;
        let mut p = vec![Rational::zero(); (self.coeffs.len() - 1) * scale + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * scale] = c.clone();
        }
        Ok(CycScalar { order: n, coeffs: reduce_mod_phi(p, n) })
    }

    /// Power coefficients after embedding into Q(ζ_n); a hashable canonical key.
    pub fn key_in(&self, n: u32) -> Vec<Rational> {
        self.to_order(n).expect("incompatible cyclotomic order").coeffs
    }

    fn common_order(a: &Self, b: &Self) -> Result<u32> {
        let ar = a.as_rational().is_some();
        let br = b.as_rational().is_some();
        if a.order == b.order || br {
            Ok(a.order.max(if ar { b.order } else { a.order }))
        } else if ar || b.order % a.order == 0 {
            Ok(b.order)
        } else if a.order % b.order == 0 {
            Ok(a.order)
        } else {
            Err(Error::OrderMismatch(a.order, b.order))
        }
    }

    fn aligned(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let n = Self::common_order(a, b)?;
        Ok((a.to_order(n)?, b.to_order(n)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Ok(CycScalar { order: self.order, coeffs });
        }
        let (a, b) = Self::aligned(self, other)?;
        a.try_add(&b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            if self.coeffs.len() == 1 {
                return Ok(CycScalar { order: self.order, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] });
            }
            let n = self.coeffs.len();
            let mut p = vec![Rational::zero(); 2 * n - 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        p[i + j] += a * b;
                    }
                }
            }
            return Ok(CycScalar { order: self.order, coeffs: reduce_mod_phi(p, self.order) });
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        let (a, b) = Self::aligned(self, other)?;
        a.try_mul(&b)
    }

    /// Multiply by a rational number.
    pub fn scale(&self, q: &Rational) -> Self {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational_in(q.recip(), self.order));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order).iter().map(|&c| rat_int(c)).collect();
        let a = trim(self.coeffs.clone());
        // Invariant: s * a ≡ r (mod Φ). Run Euclid on (Φ, a).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (vec![], vec![Rational::one()]);
        while r1.len() != 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                unreachable!("Φ_N is irreducible, gcd must be a unit");
            }
        }
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(CycScalar::from_power_coeffs(s, self.order))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycScalar::one_of(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parse the scalar grammar: signed sums of `p/q`, `p`, `p/q*z^k`, `z^k`, `z`.
    pub fn parse(text: &str, order: u32) -> Result<Self> {
        Parser { s: text.as_bytes(), pos: 0, order }.parse()
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b[db].recip();
    let mut q = vec![Rational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] * &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    (trim(q), trim(rem))
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match Self::aligned(self, other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycScalar {}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar::from_rational(Rational::one())
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            /// Panics on incompatible orders; use the `try_` form to recover.
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_int(n)
    }
}

impl From<Rational> for CycScalar {
    fn from(q: Rational) -> Self {
        CycScalar::from_rational(q)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: ascending powers of `z`, lowest-terms rationals, e.g. `1/2 - z + 3*z^2`.
impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let body = match k {
                0 => fmt_rational(&mag),
                _ => {
                    let zp = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if mag.is_one() {
                        zp
                    } else {
                        format!("{}*{}", fmt_rational(&mag), zp)
                    }
                }
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    order: u32,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }

    fn zpart(&mut self) -> Result<CycScalar> {
        // caller has seen 'z'
        self.pos += 1;
        let mut k: i64 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.pos;
            let e = self.integer()?;
            let e = e
                .to_i64()
                .ok_or_else(|| Error::parse(at, "exponent too large"))?;
            k = if neg { -e } else { e };
        }
        Ok(CycScalar::zeta_power(k, self.order))
    }

    fn term(&mut self) -> Result<CycScalar> {
        match self.peek() {
            Some(b'z') => self.zpart(),
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::parse(at, "zero denominator"));
                    }
                    q /= Rational::from_integer(den);
                }
                let coef = CycScalar::from_rational_in(q, self.order);
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() != Some(b'z') {
                        return Err(Error::parse(self.pos, "expected 'z' after '*'"));
                    }
                    let z = self.zpart()?;
                    Ok(&coef * &z)
                } else {
                    Ok(coef)
                }
            }
            Some(_) => Err(Error::parse(self.pos, "expected a number or 'z'")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn parse(mut self) -> Result<CycScalar> {
        if self.order == 0 {
            return Err(Error::usage("cyclotomic order must be positive"));
        }
        let mut acc = CycScalar::zero_of(self.order);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => return Err(Error::parse(self.pos, "expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: u32) -> CycScalar {
        CycScalar::parse(s, n).unwrap()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(15), 8);
    }

    #[test]
    fn zeta_squared_mod_phi4() {
        let z = CycScalar::zeta_power(1, 4);
        assert_eq!(&z * &z, CycScalar::from_int(-1));
    }

    #[test]
    fn rational_addition() {
        assert_eq!(CycScalar::from_frac(1, 2) + CycScalar::from_frac(1, 3), CycScalar::from_frac(5, 6));
    }

    #[test]
    fn inverses() {
        assert_eq!(CycScalar::from_int(1).inv().unwrap(), CycScalar::from_int(1));
        let z = CycScalar::zeta_power(1, 4);
        assert_eq!(z.inv().unwrap(), -&z);
        assert_eq!(CycScalar::from_frac(2, 3).inv().unwrap(), CycScalar::from_frac(3, 2));
        assert!(matches!(CycScalar::zero_of(5).inv(), Err(Error::DivisionByZero)));
        let x = p("1 + 2*z - 1/3*z^3", 7);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn parsing() {
        assert_eq!(p("1/2", 1), CycScalar::from_frac(1, 2));
        assert_eq!(p("z^2", 4), CycScalar::from_int(-1));
        assert_eq!(p("2*z + 1 - z", 3), p("1 + z", 3));
        assert_eq!(p("z^3", 3), CycScalar::one_of(3));
        assert_eq!(p("z^-1", 6), p("1 - z", 6));
        assert_eq!(p("-3/6*z", 5).to_string(), "-1/2*z");
        let e = CycScalar::parse("1 + * z", 3).unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 4, .. }), "{e}");
        assert!(CycScalar::parse("1/0", 3).is_err());
        assert!(CycScalar::parse("", 3).is_err());
    }

    #[test]
    fn printing_is_ascending() {
        let x = p("z^2 - 1/2 + 3*z", 5);
        assert_eq!(x.to_string(), "-1/2 + 3*z + z^2");
        assert_eq!(CycScalar::zero_of(4).to_string(), "0");
    }

    #[test]
    fn embeddings_and_mismatch() {
        let z3 = CycScalar::zeta_power(1, 3);
        let z6sq = CycScalar::zeta_power(2, 6);
        assert_eq!(z3.to_order(6).unwrap(), z6sq);
        assert_eq!(z3, z6sq);
        let half = CycScalar::from_frac(1, 2);
        assert_eq!((&half + &z3).order(), 3);
        let z4 = CycScalar::zeta_power(1, 4);
        assert!(matches!(z3.try_add(&z4), Err(Error::OrderMismatch(3, 4))));
    }

    #[test]
    fn root_of_unity_relations() {
        for n in 1..=12u32 {
            let z = CycScalar::zeta_power(1, n);
            assert!(z.pow(n).is_one());
            let phi = cyclotomic_polynomial(n);
            let mut acc = CycScalar::zero_of(n);
            for (k, &c) in phi.iter().enumerate() {
                acc += &z.pow(k as u32).scale(&rat_int(c));
            }
            assert!(acc.is_zero(), "Φ_{n}(ζ) ≠ 0");
        }
    }
}
