//! Sparse commutative polynomials in `x1..xn` with `CycScalar` coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::linalg::Matrix;
use crate::scalars::CycScalar;

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exponent, CycScalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: CycScalar) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, CycScalar::from_int(1))
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, CycScalar::from_int(1))
    }

    pub fn monomial(exp: Exponent, c: CycScalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(exp, c);
        p
    }

    /// Linear form `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[CycScalar]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, CycScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, CycScalar> {
        self.terms
    }

    pub fn coeff(&self, exp: &[u32]) -> CycScalar {
        self.terms.get(exp).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &CycScalar, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), c * v);
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, m: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == m)
    }

    /// Partial derivative in `x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * &CycScalar::from_int(e[i] as i64));
            }
        }
        out
    }

    pub fn pow(&self, k: u32, n: usize) -> Poly {
        let mut acc = Poly::one(n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let n = images.len();
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(n), p.clone()]).collect();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Linear change of variables `x_i ↦ Σ_j m[j][i] x_j`, i.e. the images are
    /// the columns of `m`.
    pub fn substitute_columns(&self, m: &Matrix) -> Poly {
        let images: Vec<Poly> = (0..m.cols()).map(|i| Poly::linear(&m.column(i))).collect();
        self.substitute(&images)
    }
}

pub fn monomial_mul(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All exponent vectors of length `n` with total degree `m`, in lexicographic order.
pub fn monomials_of_degree(n: usize, m: u32) -> Vec<Exponent> {
    fn rec(n: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=m).rev() {
            prefix.push(k);
            rec(n, m - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if m == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(monomial_mul(a, b), x * y);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_coeff(c: &CycScalar) -> String {
    let s = c.to_string();
    if s.chars().all(|ch| ch.is_ascii_digit()) {
        s
    } else {
        format!("({s})")
    }
}

pub(crate) fn fmt_monomial(e: &[u32]) -> Vec<String> {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
        .collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut factors = fmt_monomial(e);
                if factors.is_empty() || !c.is_one() {
                    factors.insert(0, fmt_coeff(c));
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
