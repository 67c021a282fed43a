//! Cochains `Σ_g X_g g` in `⊕_g S(V) ⊗ Λ^p V* g`, the differential `E·−`,
//! the group action, Reynolds averaging, the projections `p_g`, and exact
//! bigraded cohomology computations.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{subsets, Group};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::poly::{monomials_of_degree, Exponent, Poly};
use crate::polyvector::{Polyvector, WedgeKey};
use crate::scalars::CycScalar;

pub type CochainKey = (usize, WedgeKey, Exponent);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    components: BTreeMap<usize, Polyvector>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, components: BTreeMap::new() }
    }

    pub fn single(degree: usize, g: usize, x: Polyvector) -> Self {
        let mut c = Cochain::zero(degree);
        c.add_component(g, x);
        c
    }

    pub fn components(&self) -> &BTreeMap<usize, Polyvector> {
        &self.components
    }

    pub fn component(&self, g: usize) -> Polyvector {
        self.components.get(&g).cloned().unwrap_or_else(Polyvector::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add_component(&mut self, g: usize, x: Polyvector) {
        if x.is_zero() {
            return;
        }
        let slot = self.components.entry(g).or_insert_with(Polyvector::zero);
        *slot = &*slot + &x;
        if slot.is_zero() {
            self.components.remove(&g);
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (&g, x) in &other.components {
            out.add_component(g, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &CycScalar) -> Cochain {
        let mut out = Cochain::zero(self.degree);
        for (&g, x) in &self.components {
            out.add_component(g, x.scale(c));
        }
        out
    }

    /// Every component has exterior degree `degree`.
    pub fn is_well_formed(&self) -> bool {
        self.components.values().all(|x| x.is_homogeneous_of(self.degree))
    }

    /// Common polynomial degree of all terms, if there is one.
    pub fn poly_degree(&self) -> Option<u32> {
        let mut degs = self
            .components
            .values()
            .flat_map(|x| x.terms().values().flat_map(|p| p.terms().keys().map(|e| e.iter().sum::<u32>())))
            .collect::<Vec<_>>();
        degs.sort_unstable();
        degs.dedup();
        if degs.len() == 1 { Some(degs[0]) } else { None }
    }

    pub fn to_sparse(&self) -> SparseVec<CochainKey> {
        let mut v = SparseVec::new();
        for (&g, x) in &self.components {
            for (k, p) in x.terms() {
                for (e, c) in p.terms() {
                    v.insert((g, k.clone(), e.clone()), c.clone());
                }
            }
        }
        v
    }

    pub fn from_sparse(degree: usize, v: &SparseVec<CochainKey>) -> Cochain {
        let mut out = Cochain::zero(degree);
        for ((g, k, e), c) in v {
            out.add_component(*g, Polyvector::term(k.clone(), Poly::monomial(e.clone(), c.clone())));
        }
        out
    }

    pub fn display(&self, group: &Group) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.components
            .iter()
            .map(|(&g, x)| format!("({x}) {}", group.word_string(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(|(g, x)| format!("({x})[{g}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `E_g = Σ_i (x_i − ^g x_i) ∂_i`.
pub fn euler(group: &Group, g: usize) -> Polyvector {
    let n = group.dim;
    let m = group.matrix(g);
    let mut e = Polyvector::zero();
    for i in 0..n {
        let mut coeffs: Vec<CycScalar> = (0..n).map(|j| -m.get(j, i)).collect();
        coeffs[i] += &CycScalar::from_int(1);
        e.add_term(vec![i], Poly::linear(&coeffs));
    }
    e
}

pub fn differential(group: &Group, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero(c.degree + 1);
    for (&g, x) in c.components() {
        out.add_component(g, euler(group, g).wedge(x));
    }
    out
}

/// Right action: the component at `g` moves to `h⁻¹gh` with `X ↦ X^h`.
pub fn act_cochain(group: &Group, c: &Cochain, h: usize) -> Cochain {
    let e = &group.elements[h];
    let mut out = Cochain::zero(c.degree);
    for (&g, x) in c.components() {
        out.add_component(group.conj_by(g, h), x.act(&e.matrix, &e.inverse_matrix));
    }
    out
}

pub fn reynolds(group: &Group, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero(c.degree);
    for h in 0..group.order() {
        out = out.add(&act_cochain(group, c, h));
    }
    out.scale(&CycScalar::from_frac(1, group.order() as i64))
}

pub fn is_invariant(group: &Group, c: &Cochain) -> bool {
    group.generator_elements().into_iter().all(|h| &act_cochain(group, c, h) == c)
}

pub fn project(group: &Group, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero(c.degree);
    for (&g, x) in c.components() {
        out.add_component(g, group.geometry(g).project(x));
    }
    out
}

pub fn is_reduced(group: &Group, c: &Cochain) -> bool {
    &project(group, c) == c
}

pub fn codim_decompose(group: &Group, c: &Cochain) -> BTreeMap<usize, Cochain> {
    let mut out: BTreeMap<usize, Cochain> = BTreeMap::new();
    for (&g, x) in c.components() {
        out.entry(group.geometry(g).codim)
            .or_insert_with(|| Cochain::zero(c.degree))
            .add_component(g, x.clone());
    }
    out
}

/// Codimensions of the supporting group elements.
pub fn codim_support(group: &Group, c: &Cochain) -> Vec<usize> {
    codim_decompose(group, c).into_keys().collect()
}

/// Ambient monomial basis of the `(p, m)` piece at `g`.
pub fn ambient_basis(group: &Group, g: usize, p: usize, m: u32) -> Vec<Cochain> {
    let n = group.dim;
    let mut out = Vec::new();
    for key in subsets(n, p) {
        for e in monomials_of_degree(n, m) {
            out.push(Cochain::single(p, g, Polyvector::term(key.clone(), Poly::monomial(e, CycScalar::from_int(1)))));
        }
    }
    out
}

/// Solve `E·b = c`. Returns a witness `b` if `c` is a coboundary; when `c` is
/// invariant the witness is averaged so that it is invariant too.
pub fn is_coboundary(group: &Group, c: &Cochain) -> Result<Option<Cochain>> {
    if !c.is_well_formed() {
        return Err(Error::usage("cochain is not homogeneous in exterior degree"));
    }
    if !differential(group, c).is_zero() {
        return Err(Error::usage("input is not a cocycle"));
    }
    if c.is_zero() {
        return Ok(Some(Cochain::zero(c.degree.saturating_sub(1))));
    }
    let Some(m) = c.poly_degree() else {
        return Err(Error::usage("cochain is not homogeneous in polynomial degree"));
    };
    if c.degree == 0 || m == 0 {
        return Ok(None);
    }
    let mut witness = Cochain::zero(c.degree - 1);
    for (&g, x) in c.components() {
        let basis = ambient_basis(group, g, c.degree - 1, m - 1);
        let mut ech = SparseEchelon::new();
        for b in &basis {
            ech.insert(differential(group, b).to_sparse());
        }
        let target = Cochain::single(c.degree, g, x.clone()).to_sparse();
        let Some(combo) = ech.solve(&target) else {
            return Ok(None);
        };
        for (i, coef) in combo {
            witness = witness.add(&basis[i].scale(&coef));
        }
    }
    if is_invariant(group, c) {
        witness = reynolds(group, &witness);
    }
    Ok(Some(witness))
}

/// Deterministic basis of the invariant reduced cochains in bidegree `(p, m)`.
/// Each class contributes the averages of the reduced monomials at its first
/// element that are independent of the ones already chosen.
pub fn cohomology_basis(group: &Group, p: usize, m: u32) -> Vec<Cochain> {
    let per_class: Vec<Vec<Cochain>> = group
        .classes
        .par_iter()
        .map(|class| {
            let rep = class[0];
            let mut ech = SparseEchelon::new();
            let mut chosen = Vec::new();
            for x in group.geometry(rep).reduced_basis(p, m) {
                let avg = reynolds(group, &Cochain::single(p, rep, x));
                if avg.is_zero() {
                    continue;
                }
                if ech.insert(avg.to_sparse()) {
                    chosen.push(avg);
                }
            }
            chosen
        })
        .collect();
    per_class.into_iter().flatten().collect()
}

fn invariant_span_rank_and_images(group: &Group, class: &[usize], p: usize, m: u32) -> (usize, usize) {
    let mut inv = SparseEchelon::new();
    let mut img = SparseEchelon::new();
    for &g in class {
        for b in ambient_basis(group, g, p, m) {
            let avg = reynolds(group, &b);
            if avg.is_zero() {
                continue;
            }
            if inv.insert(avg.to_sparse()) {
                img.insert(differential(group, &avg).to_sparse());
            }
        }
    }
    (inv.rank(), img.rank())
}

/// `dim (ker E / im E)^G` at `(p, m)` from the ambient complex alone.
pub fn cohomology_dim_direct(group: &Group, p: usize, m: u32) -> usize {
    group
        .classes
        .par_iter()
        .map(|class| {
            let (dim_inv, rank_out) = invariant_span_rank_and_images(group, class, p, m);
            let rank_in = if p == 0 || m == 0 { 0 } else { invariant_span_rank_and_images(group, class, p - 1, m - 1).1 };
            dim_inv - rank_out - rank_in
        })
        .sum()
}
