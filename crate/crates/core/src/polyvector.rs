//! Polyvector fields `S(V) ⊗ Λ•V*`: polynomial coefficients on strictly
//! increasing wedge keys `∂_I` (0-based internally, printed 1-based).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::linalg::Matrix;
use crate::poly::{fmt_coeff, fmt_monomial, Poly};
use crate::scalars::CycScalar;

pub type WedgeKey = Vec<usize>;

/// Sign and sorted form of an index sequence, or `None` if an index repeats.
pub fn sort_sign(seq: &[usize]) -> Option<(i64, WedgeKey)> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// `∂_I ∧ ∂_J = sign · ∂_K`.
pub fn wedge_keys(a: &[usize], b: &[usize]) -> Option<(i64, WedgeKey)> {
    let mut sign = 1;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((sign, out))
}

/// `(−1)^{k(k−1)/2}`, the sign reversing a list of `k` covectors.
pub fn orientation(k: usize) -> i64 {
    if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 }
}

pub fn strictly_increasing(key: &[usize]) -> bool {
    key.windows(2).all(|w| w[0] < w[1])
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polyvector {
    terms: BTreeMap<WedgeKey, Poly>,
}

impl Polyvector {
    pub fn zero() -> Self {
        Polyvector { terms: BTreeMap::new() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::term(vec![], p)
    }

    pub fn term(key: WedgeKey, p: Poly) -> Self {
        let mut x = Polyvector::zero();
        x.add_term(key, p);
        x
    }

    /// `∂_I` with constant coefficient 1.
    pub fn d(n: usize, key: &[usize]) -> Self {
        assert!(strictly_increasing(key), "wedge key must be strictly increasing");
        Self::term(key.to_vec(), Poly::one(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<WedgeKey, Poly> {
        &self.terms
    }

    pub fn add_term(&mut self, key: WedgeKey, p: Poly) {
        debug_assert!(strictly_increasing(&key));
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(q) => {
                *q = &*q + &p;
                if q.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &CycScalar, other: &Polyvector) {
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p.scale(c));
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Polyvector {
        if c.is_zero() {
            return Polyvector::zero();
        }
        Polyvector { terms: self.terms.iter().map(|(k, p)| (k.clone(), p.scale(c))).collect() }
    }

    pub fn mul_poly(&self, f: &Poly) -> Polyvector {
        let mut out = Polyvector::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), p * f);
        }
        out
    }

    /// Coefficient of `∂_I`.
    pub fn pair(&self, key: &[usize]) -> Poly {
        self.terms.get(key).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn exterior_degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|k| k.len()).collect()
    }

    /// The common exterior degree, if every term has the same one (zero counts as any).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.exterior_degrees();
        match d.len() {
            0 => None,
            1 => d.into_iter().next(),
            _ => None,
        }
    }

    pub fn is_homogeneous_of(&self, p: usize) -> bool {
        self.terms.keys().all(|k| k.len() == p)
    }

    pub fn poly_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|p| p.degree()).max()
    }

    /// Part of exterior degree `p`.
    pub fn graded_part(&self, p: usize) -> Polyvector {
        Polyvector {
            terms: self.terms.iter().filter(|(k, _)| k.len() == p).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn wedge(&self, other: &Polyvector) -> Polyvector {
        let mut out = Polyvector::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if let Some((s, k)) = wedge_keys(a, b) {
                    let prod = p * q;
                    out.add_term(k, if s < 0 { -prod } else { prod });
                }
            }
        }
        out
    }

    /// Apply a map on coefficients term by term.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Polyvector {
        let mut out = Polyvector::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), f(p));
        }
        out
    }

    /// Linear change on the exterior part: `∂_i ↦ Σ_j c[i][j] ∂_j`.
    pub fn map_covectors(&self, c: &Matrix) -> Polyvector {
        let n = c.rows();
        let images: Vec<Polyvector> = (0..n)
            .map(|i| {
                let mut v = Polyvector::zero();
                for j in 0..n {
                    let x = c.get(i, j);
                    if !x.is_zero() {
                        v.add_term(vec![j], Poly::constant(n, x.clone()));
                    }
                }
                v
            })
            .collect();
        let mut out = Polyvector::zero();
        for (k, p) in &self.terms {
            let mut w = Polyvector::from_poly(p.clone());
            for &i in k {
                w = w.wedge(&images[i]);
                if w.is_zero() {
                    break;
                }
            }
            out = &out + &w;
        }
        out
    }

    /// Right action by a group element with matrix `m` (columns are images of
    /// basis vectors) and inverse `minv`: coefficients become `^{h⁻¹}a`,
    /// covectors become `f∘h`.
    pub fn act(&self, m: &Matrix, minv: &Matrix) -> Polyvector {
        self.map_coeffs(|p| p.substitute_columns(minv)).map_covectors(m)
    }

    /// Contraction with `x_i` from the right: `f∂_J ↦ (−1)^{d−k} f∂_{J∖i}`
    /// where `i` sits at position `k` (1-based) of `J`, `d = |J|`.
    pub fn right_contract(&self, i: usize) -> Polyvector {
        let mut out = Polyvector::zero();
        for (k, p) in &self.terms {
            if let Some(pos) = k.iter().position(|&j| j == i) {
                let mut rest = k.clone();
                rest.remove(pos);
                let after = k.len() - pos - 1;
                out.add_term(rest, if after % 2 == 1 { -p } else { p.clone() });
            }
        }
        out
    }

    /// `Σ_i (X ← ∂_i) ∧ D_i(Y)`, where `D_i` acts on the coefficients of `Y`
    /// and leaves its exterior part in place.
    pub fn circle_with(&self, y: &Polyvector, n: usize, d: impl Fn(&Poly, usize) -> Poly) -> Polyvector {
        let mut out = Polyvector::zero();
        for i in 0..n {
            let xi = self.right_contract(i);
            if xi.is_zero() {
                continue;
            }
            let dy = y.map_coeffs(|p| d(p, i));
            out = &out + &xi.wedge(&dy);
        }
        out
    }

    /// Untwisted circle product `Σ_i (X ← ∂_i) ∧ ∂Y/∂x_i`.
    pub fn circle(&self, y: &Polyvector, n: usize) -> Polyvector {
        self.circle_with(y, n, |p, i| p.derivative(i))
    }
}

/// Graded commutator `X∘Y − (−1)^{(a−1)(b−1)} Y∘X`, extended bilinearly over
/// homogeneous parts.
pub fn graded_commutator(
    x: &Polyvector,
    y: &Polyvector,
    circ: impl Fn(&Polyvector, &Polyvector) -> Polyvector,
) -> Polyvector {
    let mut out = Polyvector::zero();
    for a in x.exterior_degrees() {
        let xa = x.graded_part(a);
        for b in y.exterior_degrees() {
            let yb = y.graded_part(b);
            let mut t = circ(&xa, &yb);
            let back = circ(&yb, &xa);
            let sign = if (a + 1) * (b + 1) % 2 == 0 { 1 } else { -1 };
            t = if sign > 0 { &t - &back } else { &t + &back };
            out = &out + &t;
        }
    }
    out
}

/// Schouten bracket on `S(V) ⊗ Λ•V*` with `dim V = n`.
pub fn schouten(x: &Polyvector, y: &Polyvector, n: usize) -> Polyvector {
    graded_commutator(x, y, |a, b| a.circle(b, n))
}

impl Add for &Polyvector {
    type Output = Polyvector;
    fn add(self, rhs: &Polyvector) -> Polyvector {
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.add_term(k.clone(), p.clone());
        }
        out
    }
}

impl Sub for &Polyvector {
    type Output = Polyvector;
    fn sub(self, rhs: &Polyvector) -> Polyvector {
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.add_term(k.clone(), -p);
        }
        out
    }
}

impl Neg for &Polyvector {
    type Output = Polyvector;
    fn neg(self) -> Polyvector {
        Polyvector { terms: self.terms.iter().map(|(k, p)| (k.clone(), -p)).collect() }
    }
}

impl Add for Polyvector {
    type Output = Polyvector;
    fn add(self, rhs: Polyvector) -> Polyvector {
        &self + &rhs
    }
}

impl Sub for Polyvector {
    type Output = Polyvector;
    fn sub(self, rhs: Polyvector) -> Polyvector {
        &self - &rhs
    }
}

impl Neg for Polyvector {
    type Output = Polyvector;
    fn neg(self) -> Polyvector {
        -&self
    }
}

/// e.g. `(1/2)*x1^2*d2^d3 + d1`
impl fmt::Display for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, p) in &self.terms {
            let wedge = k.iter().map(|i| format!("d{}", i + 1)).collect::<Vec<_>>().join("^");
            for (e, c) in p.terms() {
                let mut factors = fmt_monomial(e);
                if !c.is_one() || (factors.is_empty() && wedge.is_empty()) {
                    factors.insert(0, fmt_coeff(c));
                }
                if !wedge.is_empty() {
                    factors.push(wedge.clone());
                }
                parts.push(factors.join("*"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn wedge_signs() {
        let d1 = Polyvector::d(3, &[0]);
        let d2 = Polyvector::d(3, &[1]);
        assert_eq!(d1.wedge(&d2), Polyvector::d(3, &[0, 1]));
        assert_eq!(d2.wedge(&d1), -Polyvector::d(3, &[0, 1]));
        assert!(d1.wedge(&d1).is_zero());
        let a = Polyvector::term(vec![0], x(3, 0));
        let b = Polyvector::term(vec![2], x(3, 1));
        assert_eq!(a.wedge(&b), Polyvector::term(vec![0, 2], &x(3, 0) * &x(3, 1)));
    }

    #[test]
    fn sort_sign_cases() {
        assert_eq!(sort_sign(&[2, 0, 1]), Some((1, vec![0, 1, 2])));
        assert_eq!(sort_sign(&[1, 0]), Some((-1, vec![0, 1])));
        assert_eq!(sort_sign(&[1, 0, 1]), None);
        assert_eq!(wedge_keys(&[0, 2], &[1]), Some((-1, vec![0, 1, 2])));
    }

    #[test]
    fn action_examples() {
        let g = Matrix::diagonal(vec![int(-1)]);
        assert_eq!(Polyvector::d(1, &[0]).act(&g, &g), -Polyvector::d(1, &[0]));
        let g2 = Matrix::diagonal(vec![int(-1), int(1)]);
        let x1 = Polyvector::from_poly(x(2, 0));
        assert_eq!(x1.act(&g2, &g2), -x1.clone());
        let x2d2 = Polyvector::term(vec![1], x(2, 1));
        assert_eq!(x2d2.act(&g2, &g2), x2d2);
    }

    #[test]
    fn pairing() {
        let p = Polyvector::term(vec![0, 1], x(3, 0));
        assert_eq!(p.pair(&[0, 1]), x(3, 0));
        assert!(Polyvector::d(3, &[0]).pair(&[1]).is_zero());
        let q = &Polyvector::d(3, &[0, 2]).scale(&int(3)) + &Polyvector::term(vec![1, 2], x(3, 1));
        assert_eq!(q.pair(&[1, 2]), x(3, 1));
    }

    #[test]
    fn schouten_examples() {
        let a = Polyvector::term(vec![1], x(2, 0));
        let b = Polyvector::term(vec![0], x(2, 1));
        let expect = &Polyvector::term(vec![0], x(2, 0)) - &Polyvector::term(vec![1], x(2, 1));
        assert_eq!(schouten(&a, &b, 2), expect);
        let d1 = Polyvector::d(1, &[0]);
        assert_eq!(schouten(&d1, &Polyvector::from_poly(x(1, 0)), 1), Polyvector::from_poly(Poly::one(1)));
        let f = Polyvector::from_poly(&x(2, 0) * &x(2, 1));
        let g = Polyvector::from_poly(x(2, 1));
        assert!(schouten(&f, &g, 2).is_zero());
    }

    #[test]
    fn printing() {
        let p = Polyvector::term(vec![1, 2], Poly::monomial(vec![2, 0, 0], CycScalar::from_frac(1, 2)));
        assert_eq!(p.to_string(), "(1/2)*x1^2*d2^d3");
        assert_eq!(Polyvector::from_poly(Poly::one(2)).to_string(), "1");
        assert_eq!(Polyvector::zero().to_string(), "0");
    }
}
