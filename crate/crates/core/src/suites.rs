//! Verification sweeps shared by the `verify` command and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bracket::{gerstenhaber, perp_vanishing_applies};
use crate::cochain::{reynolds, Cochain};
use crate::error::Result;
use crate::files::{load_class, load_group};
use crate::group::{subsets, Group};
use crate::koszul::{homotopy_residual, phi_bracket_cochain, KoszulTensor2};
use crate::poly::{monomials_of_degree, Poly};
use crate::polyvector::{schouten, Polyvector};
use crate::scalars::CycScalar;

pub mod fixtures {
    pub const REFLECT3_GROUP: &str = include_str!("../fixtures/reflect3_group.json");
    pub const REFLECT3_X: &str = include_str!("../fixtures/reflect3_x.json");
    pub const REFLECT3_Y: &str = include_str!("../fixtures/reflect3_y.json");
    pub const DIAG5_GROUP: &str = include_str!("../fixtures/diag5_group.json");
    pub const DIAG5_Z6_GROUP: &str = include_str!("../fixtures/diag5_z6_group.json");
    pub const DIAG5_X: &str = include_str!("../fixtures/diag5_x.json");
    pub const DIAG5_Y: &str = include_str!("../fixtures/diag5_y.json");
    pub const Z2_SIGN_K1: &str = include_str!("../fixtures/z2_sign_k1.json");
    pub const Z2_SIGN_K2: &str = include_str!("../fixtures/z2_sign_k2.json");
    pub const S2_PERM_K2: &str = include_str!("../fixtures/s2_perm_k2.json");
    pub const TRIVIAL_K2: &str = include_str!("../fixtures/trivial_k2.json");
    pub const TRIVIAL_K3: &str = include_str!("../fixtures/trivial_k3.json");
    pub const KLEIN_DIAG_K2: &str = include_str!("../fixtures/klein_diag_k2.json");
    pub const ROT4_K3: &str = include_str!("../fixtures/rot4_k3.json");

    /// Every fixture group, by name.
    pub const GROUPS: [(&str, &str); 10] = [
        ("reflect3", REFLECT3_GROUP),
        ("diag5", DIAG5_GROUP),
        ("diag5_z6", DIAG5_Z6_GROUP),
        ("z2_sign_k1", Z2_SIGN_K1),
        ("z2_sign_k2", Z2_SIGN_K2),
        ("s2_perm_k2", S2_PERM_K2),
        ("trivial_k2", TRIVIAL_K2),
        ("trivial_k3", TRIVIAL_K3),
        ("klein_diag_k2", KLEIN_DIAG_K2),
        ("rot4_k3", ROT4_K3),
    ];
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

/// Koszul basis inputs `1 ⊗ o(u_S) ⊗ x^α ⊗ o(w_Z) ⊗ 1` with `|S| ≤ max_s`,
/// `|Z| ≤ max_z`, `|S| + |Z| ≤ max_total` and `|α| ≤ max_t`.
pub fn homotopy_inputs(n: usize, max_s: usize, max_t: u32, max_z: usize, max_total: usize) -> Vec<KoszulTensor2> {
    let mut out = Vec::new();
    for s in 0..=max_s.min(n) {
        for z in 0..=max_z.min(n) {
            if s + z > max_total {
                continue;
            }
            for sk in subsets(n, s) {
                for zk in subsets(n, z) {
                    for t in 0..=max_t {
                        for mid in monomials_of_degree(n, t) {
                            out.push(KoszulTensor2::basis(n, &sk, mid, &zk));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn homotopy_sweep(n: usize, max_s: usize, max_t: u32, max_z: usize, max_total: usize) -> SweepReport {
    homotopy_inputs(n, max_s, max_t, max_z, max_total)
        .par_iter()
        .map(|e| {
            let r = homotopy_residual(e);
            SweepReport {
                checked: 1,
                failures: if r.is_zero() { vec![] } else { vec![format!("{:?}", e.terms.keys().next())] },
            }
        })
        .reduce(SweepReport::default, SweepReport::merge)
}

/// Lie bracket of vector fields `X = Σ f_i ∂_i`, `Y = Σ g_j ∂_j` computed
/// as the commutator of derivations: `Σ_j (X(g_j) − Y(f_j)) ∂_j`.
pub fn derivation_commutator(x: &Polyvector, y: &Polyvector, n: usize) -> Polyvector {
    let apply = |v: &Polyvector, f: &Poly| -> Poly {
        let mut out = Poly::zero();
        for i in 0..n {
            out = &out + &(&v.pair(&[i]) * &f.derivative(i));
        }
        out
    };
    let mut out = Polyvector::zero();
    for j in 0..n {
        let t = &apply(x, &y.pair(&[j])) - &apply(y, &x.pair(&[j]));
        out.add_term(vec![j], t);
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Poly {
    let mut p = Poly::zero();
    for d in 0..=max_deg {
        for e in monomials_of_degree(n, d) {
            if rng.gen_bool(0.4) {
                p.add_term(e, CycScalar::from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            }
        }
    }
    p
}

/// Random polyvector of exterior degree `p` with polynomial degree ≤ `max_deg`.
pub fn random_polyvector(rng: &mut ChaCha8Rng, n: usize, p: usize, max_deg: u32) -> Polyvector {
    let mut x = Polyvector::zero();
    for key in subsets(n, p) {
        x.add_term(key, random_poly(rng, n, max_deg));
    }
    x
}

/// Basis polyvectors `x^α ∂_I` with `|α| ≤ max_deg`, `|I| ≤ max_ext`.
pub fn monomial_polyvectors(n: usize, max_ext: usize, max_deg: u32) -> Vec<Polyvector> {
    let mut out = Vec::new();
    for p in 0..=max_ext.min(n) {
        for key in subsets(n, p) {
            for d in 0..=max_deg {
                for e in monomials_of_degree(n, d) {
                    out.push(Polyvector::term(key.clone(), Poly::monomial(e, CycScalar::from_int(1))));
                }
            }
        }
    }
    out
}

fn sign(k: usize) -> CycScalar {
    CycScalar::from_int(if k % 2 == 0 { 1 } else { -1 })
}

/// `(−1)^{(a−1)(c−1)}{X,{Y,Z}} + cyclic`, which vanishes for a graded Lie bracket.
pub fn jacobiator(x: &Polyvector, y: &Polyvector, z: &Polyvector, n: usize) -> Polyvector {
    let deg = |v: &Polyvector| v.homogeneous_degree().unwrap_or(0);
    let (a, b, c) = (deg(x), deg(y), deg(z));
    let t1 = schouten(x, &schouten(y, z, n), n).scale(&sign((a + 1) * (c + 1)));
    let t2 = schouten(y, &schouten(z, x, n), n).scale(&sign((b + 1) * (a + 1)));
    let t3 = schouten(z, &schouten(x, y, n), n).scale(&sign((c + 1) * (b + 1)));
    &(&t1 + &t2) + &t3
}

/// Random vector-field pairs against the derivation commutator, then graded
/// antisymmetry on all basis pairs and Jacobi on all basis triples.
pub fn schouten_sweep(max_dim: usize, pairs: usize, seed: u64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SweepReport::default();
    for k in 0..pairs {
        let n = 1 + k % max_dim;
        let x = random_polyvector(&mut rng, n, 1, 2);
        let y = random_polyvector(&mut rng, n, 1, 2);
        rep.checked += 1;
        if schouten(&x, &y, n) != derivation_commutator(&x, &y, n) {
            rep.failures.push(format!("vector fields {x} and {y}"));
        }
    }
    for n in 1..=max_dim {
        let basis = monomial_polyvectors(n, 2, 2);
        let anti = basis
            .par_iter()
            .map(|x| {
                let mut r = SweepReport::default();
                for y in &basis {
                    let (a, b) = (x.homogeneous_degree().unwrap(), y.homogeneous_degree().unwrap());
                    r.checked += 1;
                    let lhs = schouten(x, y, n);
                    let rhs = schouten(y, x, n).scale(&sign((a + 1) * (b + 1) + 1));
                    if lhs != rhs {
                        r.failures.push(format!("antisymmetry {x}, {y}"));
                    }
                }
                r
            })
            .reduce(SweepReport::default, SweepReport::merge);
        let jac = basis
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                let mut r = SweepReport::default();
                // the jacobiator is invariant under cyclic rotation, so x may be taken first in index order
                for (j, y) in basis.iter().enumerate() {
                    for (k, z) in basis.iter().enumerate() {
                        if j < i || k < i {
                            continue;
                        }
                        r.checked += 1;
                        if !jacobiator(x, y, z, n).is_zero() {
                            r.failures.push(format!("jacobi {x}, {y}, {z}"));
                        }
                    }
                }
                r
            })
            .reduce(SweepReport::default, SweepReport::merge);
        rep = rep.merge(anti).merge(jac);
    }
    rep
}

pub struct ReflectionPair {
    pub group: Group,
    pub x: Cochain,
    pub y: Cochain,
}

pub fn reflection_pair() -> Result<ReflectionPair> {
    let group = load_group(fixtures::REFLECT3_GROUP)?;
    let x = load_class(fixtures::REFLECT3_X, &group)?;
    let y = load_class(fixtures::REFLECT3_Y, &group)?;
    Ok(ReflectionPair { group, x, y })
}

/// Named checks reproducing the worked examples.
pub fn examples_suite() -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let ex = reflection_pair()?;
    let g = &ex.group;
    let gh = g.resolve_word("g*h")?;
    let chain = phi_bracket_cochain(g, &ex.x, &ex.y)?;
    // ∂1∂3∂2 gh
    let expect = Cochain::single(3, gh, -Polyvector::d(3, &[0, 1, 2]));
    out.push(("reflect3: chain-level bracket is d1^d3^d2 gh".into(), chain == expect));
    out.push(("reflect3: omega_gh = d1^d3".into(), g.geometry(gh).omega == Polyvector::d(3, &[0, 2])));
    out.push(("reflect3: X averages to 0".into(), reynolds(g, &ex.x).is_zero()));
    out.push(("reflect3: Y averages to 0".into(), reynolds(g, &ex.y).is_zero()));
    for (label, text) in [("N=M=2", fixtures::DIAG5_GROUP), ("N=3, M=2", fixtures::DIAG5_Z6_GROUP)] {
        let g = load_group(text)?;
        let x = load_class(fixtures::DIAG5_X, &g)?;
        let y = load_class(fixtures::DIAG5_Y, &g)?;
        let (s, t) = (g.resolve_word("s")?, g.resolve_word("t")?);
        let st = g.mul(s, t);
        let expect = Cochain::single(4, st, g.geometry(st).omega.clone());
        let ok = match gerstenhaber(&g, &x, &y) {
            Ok(r) => r.result == expect && !r.result.is_zero(),
            Err(_) => false,
        };
        out.push((format!("diag5 ({label}): bracket is omega_st st"), ok));
        out.push((format!("diag5 ({label}): omega_st = d1^d2^d4^d5"), g.geometry(st).omega == Polyvector::d(5, &[0, 1, 3, 4])));
        out.push((format!("diag5 ({label}): perp criterion does not apply"), !perp_vanishing_applies(&g, s, t)));
    }
    Ok(out)
}
