//! Chain-level referee: the Koszul resolution `K` of `A = S(V)`, its
//! diagonal, the contracting homotopy `φ: K ⊗_A K → K`, and the twisted
//! circle product evaluated directly on Koszul basis elements.
//!
//! Cochains are paired with `K` by `⟨∂_I, o(x_I)⟩ = (−1)^{|I|(|I|−1)/2}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cochain::Cochain;
use crate::coeffs::{c_coeff, factorial, xi};
use crate::error::{Error, Result};
use crate::group::{subsets, Group};
use crate::linalg::Matrix;
use crate::poly::{monomial_mul, Exponent, Poly};
use crate::polyvector::{orientation, sort_sign, Polyvector, WedgeKey};
use crate::scalars::{CycScalar, Rational};

type Key1 = (Exponent, WedgeKey, Exponent);
type Key2 = (Exponent, WedgeKey, Exponent, WedgeKey, Exponent);

fn add_to<K: Ord>(map: &mut BTreeMap<K, CycScalar>, k: K, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

fn unit(n: usize, i: usize) -> Exponent {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn without(key: &[usize], j: usize) -> WedgeKey {
    let mut k = key.to_vec();
    k.remove(j);
    k
}

fn alt(j: usize) -> i64 {
    if j % 2 == 0 { 1 } else { -1 }
}

fn signed(c: &CycScalar, s: i64) -> CycScalar {
    if s < 0 { -c } else { c.clone() }
}

/// Element of `K = A ⊗ ΛV ⊗ A`: monomial terms `a ⊗ o(x_I) ⊗ b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KoszulElt {
    pub terms: BTreeMap<Key1, CycScalar>,
}

/// Element of `K ⊗_A K`: terms `a ⊗ o(u_S) ⊗ b ⊗ o(w_Z) ⊗ c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KoszulTensor2 {
    pub terms: BTreeMap<Key2, CycScalar>,
}

impl KoszulElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 ⊗ o(x_I) ⊗ 1`
    pub fn basis(n: usize, key: &[usize]) -> Self {
        let mut e = Self::zero();
        e.add(vec![0; n], key.to_vec(), vec![0; n], CycScalar::from_int(1));
        e
    }

    /// Adds `c · a ⊗ o(seq) ⊗ b`, normalizing the order of `seq`.
    pub fn add(&mut self, a: Exponent, seq: Vec<usize>, b: Exponent, c: CycScalar) {
        if let Some((s, key)) = sort_sign(&seq) {
            add_to(&mut self.terms, (a, key, b), signed(&c, s));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &KoszulElt) -> KoszulElt {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_to(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &KoszulElt) -> KoszulElt {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_to(&mut out.terms, k.clone(), -c);
        }
        out
    }

    /// Apply a group element: `g·(a ⊗ o(x_I) ⊗ b) = ^g a ⊗ o(g x_I) ⊗ ^g b`.
    pub fn act(&self, m: &Matrix) -> KoszulElt {
        let n = m.rows();
        let mut out = KoszulElt::zero();
        for ((a, key, b), c) in &self.terms {
            let pa = Poly::monomial(a.clone(), c.clone()).substitute_columns(m);
            let pb = Poly::monomial(b.clone(), CycScalar::from_int(1)).substitute_columns(m);
            let w = twist_wedge(key, m, n);
            for (ea, ca) in pa.terms() {
                for (k, cw) in w.terms() {
                    for (eb, cb) in pb.terms() {
                        let coef = ca * &(cw.coeff(&vec![0; n]) * cb);
                        out.add(ea.clone(), k.clone(), eb.clone(), coef);
                    }
                }
            }
        }
        out
    }
}

/// `o(h x_J) = Σ_K det(M[K, J]) o(x_K)`, returned as a constant polyvector.
fn twist_wedge(key: &[usize], m: &Matrix, n: usize) -> Polyvector {
    Polyvector::d(n, key).map_covectors(&m.transpose())
}

impl KoszulTensor2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 ⊗ o(u_S) ⊗ x^mid ⊗ o(w_Z) ⊗ 1`
    pub fn basis(n: usize, s: &[usize], mid: Exponent, z: &[usize]) -> Self {
        let mut e = Self::zero();
        e.add(vec![0; n], s.to_vec(), mid, z.to_vec(), vec![0; n], CycScalar::from_int(1));
        e
    }

    pub fn add(&mut self, a: Exponent, s: Vec<usize>, b: Exponent, z: Vec<usize>, c: Exponent, k: CycScalar) {
        let (Some((s1, sk)), Some((s2, zk))) = (sort_sign(&s), sort_sign(&z)) else {
            return;
        };
        add_to(&mut self.terms, (a, sk, b, zk, c), signed(&k, s1 * s2));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `d(a ⊗ o(x_S) ⊗ b) = Σ_j (−1)^{j−1} (a x_{s_j} ⊗ o(S∖s_j) ⊗ b − a ⊗ o(S∖s_j) ⊗ x_{s_j} b)`
pub fn koszul_diff(e: &KoszulElt) -> KoszulElt {
    let mut out = KoszulElt::zero();
    for ((a, key, b), c) in &e.terms {
        let n = a.len();
        for (j, &s) in key.iter().enumerate() {
            let rest = without(key, j);
            let sj = signed(c, alt(j));
            out.add(monomial_mul(a, &unit(n, s)), rest.clone(), b.clone(), sj.clone());
            out.add(a.clone(), rest, monomial_mul(b, &unit(n, s)), -sj);
        }
    }
    out
}

/// Total differential on `K ⊗_A K`: `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`.
pub fn koszul2_diff(e: &KoszulTensor2) -> KoszulTensor2 {
    let mut out = KoszulTensor2::zero();
    for ((a, s, b, z, c), k) in &e.terms {
        let n = a.len();
        for (j, &v) in s.iter().enumerate() {
            let rest = without(s, j);
            let kj = signed(k, alt(j));
            out.add(monomial_mul(a, &unit(n, v)), rest.clone(), b.clone(), z.clone(), c.clone(), kj.clone());
            out.add(a.clone(), rest, monomial_mul(b, &unit(n, v)), z.clone(), c.clone(), -kj);
        }
        let outer = alt(s.len());
        for (j, &v) in z.iter().enumerate() {
            let rest = without(z, j);
            let kj = signed(k, alt(j) * outer);
            out.add(a.clone(), s.clone(), monomial_mul(b, &unit(n, v)), rest.clone(), c.clone(), kj.clone());
            out.add(a.clone(), s.clone(), b.clone(), rest, monomial_mul(c, &unit(n, v)), -kj);
        }
    }
    out
}

/// All ordered partitions of `key` into `parts` blocks (each block keeps the
/// original order), with the sign of the concatenation relative to `key`.
pub fn ordered_partitions(key: &[usize], parts: usize) -> Vec<(i64, Vec<WedgeKey>)> {
    let total = parts.pow(key.len() as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut blocks = vec![Vec::new(); parts];
        let mut c = code;
        for &i in key {
            blocks[c % parts].push(i);
            c /= parts;
        }
        let concat: Vec<usize> = blocks.iter().flatten().copied().collect();
        let (s, _) = sort_sign(&concat).expect("distinct indices");
        out.push((s, blocks));
    }
    out
}

/// `Δ(a ⊗ o(x_I) ⊗ b) = Σ_{I₁ ⊔ I₂ = I} ± (a ⊗ o(x_{I₁}) ⊗ 1) ⊗ (1 ⊗ o(x_{I₂}) ⊗ b)`
pub fn diagonal(e: &KoszulElt) -> KoszulTensor2 {
    let mut out = KoszulTensor2::zero();
    for ((a, key, b), c) in &e.terms {
        let n = a.len();
        for (s, blocks) in ordered_partitions(key, 2) {
            out.add(a.clone(), blocks[0].clone(), vec![0; n], blocks[1].clone(), b.clone(), signed(c, s));
        }
    }
    out
}

/// Multiplicity-weighted splits of `x^α` as `x^β · x_i · x^γ` with `x_i` in
/// position `r` of an ordering of the `t` factors: yields `(r, β, i, γ, count)`.
fn monomial_splits(alpha: &[u32]) -> Vec<(u64, Exponent, usize, Exponent, Rational)> {
    let n = alpha.len();
    let t: u32 = alpha.iter().sum();
    let mut out = Vec::new();
    if t == 0 {
        return out;
    }
    // every β ≤ α
    let mut betas: Vec<Exponent> = vec![vec![]];
    for &a in alpha {
        betas = betas.into_iter().flat_map(|b| (0..=a).map(move |k| {
            let mut v = b.clone();
            v.push(k);
            v
        })).collect();
    }
    for beta in betas {
        let r = beta.iter().sum::<u32>() as u64 + 1;
        if r as u32 > t {
            continue;
        }
        let mut choose = num_bigint::BigInt::from(1);
        for j in 0..n {
            choose *= binomial(alpha[j], beta[j]);
        }
        for i in 0..n {
            let avail = alpha[i] - beta[i];
            if avail == 0 {
                continue;
            }
            let mut gamma: Exponent = (0..n).map(|j| alpha[j] - beta[j]).collect();
            gamma[i] -= 1;
            let count = factorial(r - 1) * factorial(t as u64 - r) * &choose * num_bigint::BigInt::from(avail);
            out.push((r, beta.clone(), i, gamma, Rational::from_integer(count)));
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The contracting homotopy on `K ⊗_A K`, extended `A`-bilinearly:
/// `φ(1 ⊗ o(u_S) ⊗ v₁⋯v_t ⊗ o(w_Z) ⊗ 1) = Σ_σ Σ_r c_r^{s,t,z} v_{σ(1)}⋯v_{σ(r−1)} ⊗ o(w_Z, v_{σ(r)}, u_S) ⊗ v_{σ(r+1)}⋯v_{σ(t)}`.
pub fn phi(e: &KoszulTensor2) -> KoszulElt {
    let mut out = KoszulElt::zero();
    for ((a, s, mid, z, c), k) in &e.terms {
        let t: u32 = mid.iter().sum();
        if t == 0 {
            continue;
        }
        for (r, beta, i, gamma, count) in monomial_splits(mid) {
            let coef = c_coeff(s.len() as u64, t as u64, z.len() as u64, r).expect("valid r") * count;
            let seq: Vec<usize> = z.iter().copied().chain(std::iter::once(i)).chain(s.iter().copied()).collect();
            out.add(monomial_mul(a, &beta), seq, monomial_mul(&gamma, c), k * &CycScalar::from_rational(coef));
        }
    }
    out
}

/// `F_K = μ ⊗ id − id ⊗ μ`, where `μ` multiplies out a degree-0 factor.
pub fn f_k(e: &KoszulTensor2) -> KoszulElt {
    let mut out = KoszulElt::zero();
    for ((a, s, b, z, c), k) in &e.terms {
        if s.is_empty() {
            out.add(monomial_mul(a, b), z.clone(), c.clone(), k.clone());
        }
        if z.is_empty() {
            out.add(a.clone(), s.clone(), monomial_mul(b, c), -k);
        }
    }
    out
}

/// `dφ(e) + φ(de) − F_K(e)`; zero for every `e` when `φ` is a contracting homotopy.
pub fn homotopy_residual(e: &KoszulTensor2) -> KoszulElt {
    koszul_diff(&phi(e)).plus(&phi(&koszul2_diff(e))).minus(&f_k(e))
}

/// `X_g g` applied to `a ⊗ o(x_I) ⊗ c`, as `a · X_g(I) · ^g c`.
fn evaluate_on(group: &Group, g: usize, x: &Polyvector, e: &KoszulElt, n: usize) -> Poly {
    let m = group.matrix(g);
    let mut out = Poly::zero();
    for ((a, key, c), k) in &e.terms {
        let xi_ = x.pair(key);
        if xi_.is_zero() {
            continue;
        }
        let left = Poly::monomial(a.clone(), signed(k, orientation(key.len())));
        let right = Poly::monomial(c.clone(), CycScalar::from_int(1)).substitute_columns(m);
        out = &out + &(&(&left * &xi_) * &right);
        let _ = n;
    }
    out
}

/// Chain-level twisted circle product `(X ∘ Y)(1 ⊗ o(x_I) ⊗ 1)`, one value per
/// group element `gh`.
pub fn phi_circle_on_basis(group: &Group, x: &Cochain, y: &Cochain, key: &[usize]) -> Result<BTreeMap<usize, Poly>> {
    let n = group.dim;
    let (a, b) = (x.degree, y.degree);
    if a + b == 0 || key.len() != a + b - 1 {
        return Err(Error::usage(format!(
            "basis element of degree {} does not match cochain degrees {a} and {b}",
            key.len()
        )));
    }
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    let parts = ordered_partitions(key, 3);
    for (&g, xg) in x.components() {
        for (&h, yh) in y.components() {
            let mh = group.matrix(h);
            let mut pre = KoszulTensor2::zero();
            for (s, blocks) in &parts {
                let (i1, i2, i3) = (&blocks[0], &blocks[1], &blocks[2]);
                if i2.len() != b {
                    continue;
                }
                let yv = yh.pair(i2);
                if yv.is_zero() {
                    continue;
                }
                let sign = s * orientation(b) * if (i1.len() * b) % 2 == 1 { -1 } else { 1 };
                let w3 = twist_wedge(i3, mh, n);
                for (k3, cw) in w3.terms() {
                    let cw = cw.coeff(&vec![0; n]);
                    for (e, cy) in yv.terms() {
                        pre.add(vec![0; n], i1.clone(), e.clone(), k3.clone(), vec![0; n], signed(&(cy * &cw), sign));
                    }
                }
            }
            let val = evaluate_on(group, g, xg, &phi(&pre), n);
            if !val.is_zero() {
                let slot = out.entry(group.mul(g, h)).or_default();
                *slot = &*slot + &val;
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// The chain-level circle product as a cochain of degree `|X| + |Y| − 1`.
pub fn phi_circle_cochain(group: &Group, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    let n = group.dim;
    let deg = (x.degree + y.degree).checked_sub(1).ok_or_else(|| Error::usage("both cochains have degree 0"))?;
    let mut out = Cochain::zero(deg);
    if x.is_zero() || y.is_zero() {
        return Ok(out);
    }
    for key in subsets(n, deg) {
        for (gh, v) in phi_circle_on_basis(group, x, y, &key)? {
            out.add_component(gh, Polyvector::term(key.clone(), v.scale(&CycScalar::from_int(orientation(deg)))));
        }
    }
    Ok(out)
}

/// `[X, Y]_φ = X ∘ Y − (−1)^{(|X|−1)(|Y|−1)} Y ∘ X` at chain level.
pub fn phi_bracket_cochain(group: &Group, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    let xy = phi_circle_cochain(group, x, y)?;
    let yx = phi_circle_cochain(group, y, x)?;
    let odd = (x.degree + 1) * (y.degree + 1) % 2 == 1;
    Ok(if odd { xy.add(&yx) } else { xy.sub(&yx) })
}

/// `κ_r = Σ_z C(d−1, z) ξ_r^{d−1−z, t, z}`: the total weight of all ways the
/// uncontracted factors of a degree-`d` polyvector split around the inserted
/// variable. Equals `1/t!`.
pub fn arrangement_weight(d: u64, t: u64, r: u64) -> Rational {
    let mut acc = Rational::zero();
    for z in 0..d {
        let c = Rational::from_integer(binomial((d - 1) as u32, z as u32));
        acc += c * xi(d - 1 - z, t, z, r).expect("valid r");
    }
    acc
}

/// Twisted derivative `D^g_i(x^α) = Σ_{splits} κ_r · count · x^β · ^g(x^γ)`.
fn twisted_derivative(p: &Poly, i: usize, d: u64, m: &Matrix) -> Poly {
    let mut out = Poly::zero();
    for (alpha, c) in p.terms() {
        let t: u64 = alpha.iter().map(|&k| k as u64).sum();
        for (r, beta, j, gamma, count) in monomial_splits(alpha) {
            if j != i {
                continue;
            }
            let w = arrangement_weight(d, t, r) * count;
            let left = Poly::monomial(beta, c * &CycScalar::from_rational(w));
            let right = Poly::monomial(gamma, CycScalar::from_int(1)).substitute_columns(m);
            out = &out + &(&left * &right);
        }
    }
    out
}

/// Closed form of the twisted circle product `X_g g ∘ Y_h h`:
/// `Σ_i (X_g ← ∂_i) ∧ D^g_i(Y_h)` placed at `gh`. Requires `ω_h` to divide
/// the exterior part of `Y_h`.
pub fn circle_closed(group: &Group, g: usize, x: &Polyvector, h: usize, y: &Polyvector) -> Result<Cochain> {
    let n = group.dim;
    if !group.geometry(h).omega_divides(y) {
        return Err(Error::usage("second argument is not divisible by the volume form of its group element"));
    }
    let Some(d) = x.homogeneous_degree() else {
        let deg = y.homogeneous_degree().unwrap_or(0);
        return Ok(Cochain::zero(deg.saturating_sub(1)));
    };
    let b = y.homogeneous_degree().unwrap_or(0);
    let m = group.matrix(g);
    let val = x.circle_with(y, n, |p, i| twisted_derivative(p, i, d as u64, m));
    Ok(Cochain::single((d + b).saturating_sub(1), group.mul(g, h), val))
}
