//! Finite matrix groups acting on `V = k^n`, with per-element fixed spaces,
//! moved spaces and the adapted bases used by the reduced complex.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{image_basis, kernel_basis, Matrix, Vector};
use crate::poly::Poly;
use crate::polyvector::Polyvector;
use crate::scalars::{lcm_u32, CycScalar, Rational};

/// Matrices act on column coordinates: column `i` holds `g·x_i`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub index: usize,
    pub matrix: Matrix,
    pub inverse_matrix: Matrix,
    /// Generator indices whose product (left to right) is this element.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GroupGeometry {
    pub element: usize,
    pub fixed_basis: Vec<Vector>,
    pub moved_basis: Vec<Vector>,
    pub codim: usize,
    /// Columns: fixed basis then moved basis.
    pub adapted: Matrix,
    pub adapted_inverse: Matrix,
    pub omega: Polyvector,
}

#[derive(Clone, Debug)]
pub struct Group {
    pub dim: usize,
    pub field_order: u32,
    pub generator_names: Vec<String>,
    pub generators: Vec<Matrix>,
    pub elements: Vec<GroupElement>,
    pub mult: Vec<Vec<usize>>,
    pub inverses: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub kernel: Vec<usize>,
    pub geometry: Vec<GroupGeometry>,
}

type MatKey = Vec<Vec<Rational>>;

impl Group {
    /// Breadth-first closure of the generators: identity first, then products
    /// `element·generator` in discovery order.
    pub fn enumerate(generators: Vec<Matrix>, names: Option<Vec<String>>, bound: usize) -> Result<Group> {
        if generators.is_empty() {
            return Err(Error::usage("at least one generator is required"));
        }
        let dim = generators[0].rows();
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::usage(format!("generator {} is not {dim}x{dim}", i + 1)));
            }
        }
        let field_order = generators
            .iter()
            .flat_map(|g| g.entries().iter().map(|x| x.order()))
            .fold(1, lcm_u32);
        let names = names.unwrap_or_else(|| (1..=generators.len()).map(|i| format!("g{i}")).collect());
        if names.len() != generators.len() {
            return Err(Error::usage("number of generator names differs from number of generators"));
        }
        let mut gen_inv = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            gen_inv.push(g.inverse().ok_or_else(|| Error::usage(format!("generator {} is not invertible", names[i])))?);
        }

        let mut elements = vec![GroupElement {
            index: 0,
            matrix: Matrix::identity(dim),
            inverse_matrix: Matrix::identity(dim),
            word: vec![],
        }];
        let mut lookup: HashMap<MatKey, usize> = HashMap::new();
        lookup.insert(Matrix::identity(dim).key_in(field_order), 0);
        let mut cursor = 0;
        while cursor < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let prod = elements[cursor].matrix.mul(g);
                let key = prod.key_in(field_order);
                if lookup.contains_key(&key) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(Error::GroupBound(bound));
                }
                let inv = gen_inv[gi].mul(&elements[cursor].inverse_matrix);
                let mut word = elements[cursor].word.clone();
                word.push(gi);
                let index = elements.len();
                lookup.insert(key, index);
                elements.push(GroupElement { index, matrix: prod, inverse_matrix: inv, word });
            }
            cursor += 1;
        }

        let n = elements.len();
        let find = |m: &Matrix| -> usize { lookup[&m.key_in(field_order)] };
        let mult: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| find(&elements[a].matrix.mul(&elements[b].matrix))).collect()).collect();
        let inverses: Vec<usize> = (0..n).map(|a| find(&elements[a].inverse_matrix)).collect();

        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n).map(|h| mult[mult[h][g]][inverses[h]]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &c in &orbit {
                class_of[c] = classes.len();
            }
            classes.push(orbit);
        }
        let kernel = (0..n).filter(|&i| elements[i].matrix.is_identity()).collect();
        let geometry = elements.iter().map(|e| element_geometry(e.index, &e.matrix)).collect();

        Ok(Group {
            dim,
            field_order,
            generator_names: names,
            generators,
            elements,
            mult,
            inverses,
            classes,
            class_of,
            kernel,
            geometry,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.elements[g].matrix
    }

    pub fn geometry(&self, g: usize) -> &GroupGeometry {
        &self.geometry[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    /// `h⁻¹ g h`
    pub fn conj_by(&self, g: usize, h: usize) -> usize {
        self.mult[self.mult[self.inverses[h]][g]][h]
    }

    /// Generator indices as group element indices.
    pub fn generator_elements(&self) -> Vec<usize> {
        let n = self.generators.len();
        (0..n)
            .map(|i| {
                self.elements
                    .iter()
                    .position(|e| e.matrix == self.generators[i] || e.matrix.key_in(self.field_order) == self.generators[i].key_in(self.field_order))
                    .expect("generator present")
            })
            .collect()
    }

    /// Word such as `g1*g2`, or `e` for the identity.
    pub fn word_string(&self, g: usize) -> String {
        let w = &self.elements[g].word;
        if w.is_empty() {
            return "e".into();
        }
        let mut parts: Vec<(usize, u32)> = Vec::new();
        for &i in w {
            match parts.last_mut() {
                Some((j, k)) if *j == i => *k += 1,
                _ => parts.push((i, 1)),
            }
        }
        parts
            .iter()
            .map(|&(i, k)| if k == 1 { self.generator_names[i].clone() } else { format!("{}^{k}", self.generator_names[i]) })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Resolve a word like `g1*g2^3` or `e` to an element index.
    pub fn resolve_word(&self, word: &str) -> Result<usize> {
        let word = word.trim();
        if word == "e" || word == "1" {
            return Ok(0);
        }
        let gens = self.generator_elements();
        let mut acc = 0;
        for factor in word.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((a, b)) => {
                    let e: i64 = b.trim().parse().map_err(|_| Error::usage(format!("bad exponent in word factor '{factor}'")))?;
                    (a.trim(), e)
                }
                None => (factor, 1),
            };
            let base = if name == "e" {
                0
            } else {
                let gi = self
                    .generator_names
                    .iter()
                    .position(|s| s == name)
                    .ok_or_else(|| Error::usage(format!("unknown generator '{name}' in word '{word}'")))?;
                gens[gi]
            };
            let step = if exp < 0 { self.inverses[base] } else { base };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul(acc, step);
            }
        }
        Ok(acc)
    }

    /// `h·span(V^g) = span(V^{hgh⁻¹})` and likewise for the moved spaces.
    pub fn conjugate_geometry_check(&self, g: usize, h: usize) -> bool {
        let k = self.mult[self.mult[h][g]][self.inverses[h]];
        let m = self.matrix(h);
        let moved = |vs: &[Vector]| -> Vec<Vector> { vs.iter().map(|v| m.mul_vec(v)).collect() };
        same_span(&moved(&self.geometry[g].fixed_basis), &self.geometry[k].fixed_basis, self.dim)
            && same_span(&moved(&self.geometry[g].moved_basis), &self.geometry[k].moved_basis, self.dim)
    }

    /// Basis of `(1−g)V ∩ (1−h)V`.
    pub fn moved_intersection(&self, g: usize, h: usize) -> Vec<Vector> {
        intersect(&self.geometry[g].moved_basis, &self.geometry[h].moved_basis, self.dim)
    }

    /// True iff `(V^g)^⊥ ∩ (V^h)^⊥` is nonzero and stable under every generator.
    pub fn perp_vanishing_applies(&self, g: usize, h: usize) -> bool {
        let w = self.moved_intersection(g, h);
        if w.is_empty() {
            return false;
        }
        self.generators.iter().all(|m| {
            let images: Vec<Vector> = w.iter().map(|v| m.mul_vec(v)).collect();
            same_span(&images, &w, self.dim)
        })
    }
}

fn span_rank(vs: &[Vector], n: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_columns(vs, n).rank()
}

pub fn same_span(a: &[Vector], b: &[Vector], n: usize) -> bool {
    let ra = span_rank(a, n);
    let rb = span_rank(b, n);
    let both: Vec<Vector> = a.iter().chain(b).cloned().collect();
    ra == rb && span_rank(&both, n) == ra
}

pub fn intersect(a: &[Vector], b: &[Vector], n: usize) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let cols: Vec<Vector> = a.iter().cloned().chain(b.iter().map(|v| v.iter().map(|x| -x).collect())).collect();
    let ker = kernel_basis(&Matrix::from_columns(&cols, n));
    let amat = Matrix::from_columns(a, n);
    let vs: Vec<Vector> = ker.iter().map(|k| amat.mul_vec(&k[..a.len()])).collect();
    // reduce to a basis
    image_basis(&Matrix::from_columns(&vs, n))
}

fn element_geometry(index: usize, m: &Matrix) -> GroupGeometry {
    let n = m.rows();
    let one_minus = Matrix::identity(n).sub(m);
    let fixed_basis = kernel_basis(&one_minus);
    let moved_basis = image_basis(&one_minus);
    let codim = moved_basis.len();
    let cols: Vec<Vector> = fixed_basis.iter().chain(&moved_basis).cloned().collect();
    let adapted = Matrix::from_columns(&cols, n);
    let adapted_inverse = adapted.inverse().expect("fixed and moved spaces are complementary");
    let l = n - codim;
    let mut omega = Polyvector::from_poly(Poly::one(n));
    for k in l..n {
        let beta: Vec<CycScalar> = (0..n).map(|i| adapted_inverse.get(k, i).clone()).collect();
        let mut b = Polyvector::zero();
        for (i, c) in beta.into_iter().enumerate() {
            b.add_term(vec![i], Poly::constant(n, c));
        }
        omega = omega.wedge(&b);
    }
    GroupGeometry { element: index, fixed_basis, moved_basis, codim, adapted, adapted_inverse, omega }
}

impl GroupGeometry {
    pub fn dim(&self) -> usize {
        self.adapted.rows()
    }

    pub fn fixed_dim(&self) -> usize {
        self.dim() - self.codim
    }

    /// Rewrite `X` in adapted coordinates `y_k`, `β_k`.
    pub fn to_adapted(&self, x: &Polyvector) -> Polyvector {
        x.map_coeffs(|p| p.substitute_columns(&self.adapted_inverse)).map_covectors(&self.adapted)
    }

    pub fn from_adapted(&self, x: &Polyvector) -> Polyvector {
        x.map_coeffs(|p| p.substitute_columns(&self.adapted)).map_covectors(&self.adapted_inverse)
    }

    /// The adapted covector `β_k` in original coordinates.
    pub fn beta(&self, k: usize) -> Polyvector {
        let n = self.dim();
        let mut b = Polyvector::zero();
        for i in 0..n {
            b.add_term(vec![i], Poly::constant(n, self.adapted_inverse.get(k, i).clone()));
        }
        b
    }

    /// The projection `p_g`: drop the ideal generated by moved variables and
    /// every wedge term not divisible by `ω_g`.
    pub fn project(&self, x: &Polyvector) -> Polyvector {
        if self.codim == 0 {
            return x.clone();
        }
        let l = self.fixed_dim();
        let n = self.dim();
        let a = self.to_adapted(x);
        let mut kept = Polyvector::zero();
        for (key, p) in a.terms() {
            if !(l..n).all(|k| key.contains(&k)) {
                continue;
            }
            let mut q = Poly::zero();
            for (e, c) in p.terms() {
                if e[l..].iter().all(|&k| k == 0) {
                    q.add_term(e.clone(), c.clone());
                }
            }
            kept.add_term(key.clone(), q);
        }
        self.from_adapted(&kept)
    }

    /// Whether `X` lies in `S(V^g) ⊗ Λ(V^g)* ω_g`.
    pub fn is_reduced(&self, x: &Polyvector) -> bool {
        &self.project(x) == x
    }

    /// `β_k ∧ X = 0` for every moved `k`, i.e. `ω_g` divides the exterior part.
    pub fn omega_divides(&self, x: &Polyvector) -> bool {
        (self.fixed_dim()..self.dim()).all(|k| self.beta(k).wedge(x).is_zero())
    }

    /// Basis of the reduced piece at exterior degree `p`, polynomial degree `m`:
    /// `y^α · β_J ∧ ω_g` with `α` on fixed variables and `J` fixed indices.
    pub fn reduced_basis(&self, p: usize, m: u32) -> Vec<Polyvector> {
        let n = self.dim();
        let l = self.fixed_dim();
        if p < self.codim || p - self.codim > l {
            return vec![];
        }
        let moved_key: Vec<usize> = (l..n).collect();
        let mut out = Vec::new();
        for alpha in crate::poly::monomials_of_degree(l, m) {
            let mut e = alpha.clone();
            e.resize(n, 0);
            for j in subsets(l, p - self.codim) {
                let key: Vec<usize> = j.iter().copied().chain(moved_key.iter().copied()).collect();
                let x = Polyvector::term(key, Poly::monomial(e.clone(), CycScalar::from_int(1)));
                out.push(self.from_adapted(&x));
            }
        }
        out
    }
}

/// All strictly increasing `k`-subsets of `0..n`, lexicographically.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    fn diag(xs: &[i64]) -> Matrix {
        Matrix::diagonal(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn klein_four_in_three_dims() {
        let g = Group::enumerate(vec![diag(&[-1, 1, 1]), diag(&[1, 1, -1])], None, 100).unwrap();
        assert_eq!(g.order(), 4);
        let codims: Vec<usize> = g.geometry.iter().map(|x| x.codim).collect();
        assert_eq!(codims, vec![0, 1, 1, 2]);
        assert_eq!(g.geometry(1).omega, Polyvector::d(3, &[0]));
        assert_eq!(g.geometry(2).omega, Polyvector::d(3, &[2]));
        assert_eq!(g.geometry(3).omega, Polyvector::d(3, &[0, 2]));
        assert_eq!(g.resolve_word("g1*g2").unwrap(), 3);
        assert_eq!(g.word_string(3), "g1*g2");
        assert_eq!(g.classes.len(), 4);
        assert_eq!(g.kernel, vec![0]);
    }

    #[test]
    fn trivial_and_bound() {
        let g = Group::enumerate(vec![Matrix::identity(2)], None, 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.geometry(0).omega == Polyvector::from_poly(Poly::one(2)));
        let big = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
        assert!(matches!(Group::enumerate(vec![big], None, 50), Err(Error::GroupBound(50))));
        let singular = diag(&[1, 0]);
        assert!(matches!(Group::enumerate(vec![singular], None, 50), Err(Error::Usage(_))));
    }

    #[test]
    fn order_three_rotation() {
        let z = CycScalar::zeta_power(1, 3);
        let zi = CycScalar::zeta_power(-1, 3);
        let m = Matrix::diagonal(vec![z, zi, int(1), int(1), int(1)]);
        let g = Group::enumerate(vec![m], None, 10).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.geometry(1).omega, Polyvector::d(5, &[0, 1]));
    }

    #[test]
    fn swap_geometry() {
        let s = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let g = Group::enumerate(vec![s], None, 10).unwrap();
        assert!(g.conjugate_geometry_check(1, 1));
        assert_eq!(g.geometry(1).codim, 1);
        // moved space spanned by x1 - x2
        assert_eq!(g.geometry(1).moved_basis, vec![vec![int(1), int(-1)]]);
        let x = g.geometry(1).omega.clone();
        assert!(g.geometry(1).is_reduced(&x));
    }

    #[test]
    fn perp_criterion() {
        let g = Group::enumerate(vec![diag(&[-1, 1])], None, 10).unwrap();
        assert!(g.perp_vanishing_applies(1, 1));
        assert!(!g.perp_vanishing_applies(0, 1));
    }

    #[test]
    fn projection_rules() {
        let g = Group::enumerate(vec![diag(&[-1])], None, 10).unwrap();
        let geo = g.geometry(1);
        let x1d1 = Polyvector::term(vec![0], Poly::var(1, 0));
        assert!(geo.project(&x1d1).is_zero());
        let d1 = Polyvector::d(1, &[0]);
        assert_eq!(geo.project(&d1), d1);
    }
}
