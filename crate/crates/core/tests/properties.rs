use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewhh::cochain::{act_cochain, differential, is_invariant, project, reynolds, Cochain};
use skewhh::files::{load_class, load_group, ClassFile};
use skewhh::group::Group;
use skewhh::koszul::{koszul_diff, KoszulElt};
use skewhh::linalg::{kernel_basis, Matrix};
use skewhh::poly::monomials_of_degree;
use skewhh::polyvector::{schouten, Polyvector};
use skewhh::scalars::rat;
use skewhh::suites::{fixtures, random_polyvector};
use skewhh::CycScalar;

const ORDERS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

fn scalar_in(order: u32) -> impl Strategy<Value = CycScalar> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 1..=8)
        .prop_map(move |v| CycScalar::from_power_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect(), order))
}

fn scalar_triple() -> impl Strategy<Value = (CycScalar, CycScalar, CycScalar)> {
    prop::sample::select(&ORDERS[..]).prop_flat_map(|n| (scalar_in(n), scalar_in(n), scalar_in(n)))
}

fn groups() -> Vec<Group> {
    fixtures::GROUPS.iter().map(|(_, t)| load_group(t).unwrap()).filter(|g| g.dim <= 3).collect()
}

fn random_cochain(rng: &mut ChaCha8Rng, g: &Group, p: usize) -> Cochain {
    let mut c = Cochain::zero(p);
    for _ in 0..rng.gen_range(1..=3) {
        let e = rng.gen_range(0..g.order());
        c.add_component(e, random_polyvector(rng, g.dim, p, 2));
    }
    c
}

fn degree(x: &Polyvector) -> usize {
    x.homogeneous_degree().unwrap_or(0)
}

fn sign(k: usize) -> CycScalar {
    CycScalar::from_int(if k % 2 == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms((a, b, c) in scalar_triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn scalar_print_parse_round_trip((a, _, _) in scalar_triple()) {
        let back = CycScalar::parse(&a.to_string(), a.order().max(1)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn zeta_has_its_order(i in 0usize..ORDERS.len(), k in -20i64..20) {
        let n = ORDERS[i];
        let z = CycScalar::zeta_power(1, n);
        prop_assert!(z.pow(n).is_one());
        prop_assert_eq!(z.pow(k.rem_euclid(n as i64) as u32), CycScalar::zeta_power(k, n));
    }

    #[test]
    fn dividing_orders_embed(a in scalar_in(3), b in scalar_in(6), c in scalar_in(4)) {
        let s = &a + &b;
        prop_assert_eq!(&s - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        // neither of 3 and 4 divides the other, so only rational values combine
        let rational = a.as_rational().is_some() || c.as_rational().is_some();
        prop_assert_eq!(a.try_add(&c).is_ok(), rational);
    }

    #[test]
    fn rank_nullity(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| CycScalar::from_int(rng.gen_range(-2..=2))).collect()).collect());
        let ker = kernel_basis(&m);
        prop_assert_eq!(m.rank() + ker.len(), cols);
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        if rows == cols && m.rank() == rows {
            prop_assert!(m.mul(&m.inverse().unwrap()).is_identity());
        }
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), p in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let c = random_cochain(&mut rng, &g, p.min(g.dim));
            prop_assert!(differential(&g, &differential(&g, &c)).is_zero());
        }
    }

    #[test]
    fn projection_is_idempotent_and_kills_coboundaries(seed in any::<u64>(), p in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let c = random_cochain(&mut rng, &g, p.min(g.dim));
            let pc = project(&g, &c);
            prop_assert_eq!(project(&g, &pc), pc);
            prop_assert!(project(&g, &differential(&g, &c)).is_zero());
        }
    }

    #[test]
    fn action_composes_and_commutes_with_projection(seed in any::<u64>(), p in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let c = random_cochain(&mut rng, &g, p.min(g.dim));
            let (a, b) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
            prop_assert_eq!(act_cochain(&g, &act_cochain(&g, &c, a), b), act_cochain(&g, &c, g.mul(a, b)));
            prop_assert_eq!(project(&g, &act_cochain(&g, &c, a)), act_cochain(&g, &project(&g, &c), a));
            prop_assert_eq!(differential(&g, &act_cochain(&g, &c, a)), act_cochain(&g, &differential(&g, &c), a));
            let r = reynolds(&g, &c);
            prop_assert!(is_invariant(&g, &r));
            prop_assert_eq!(reynolds(&g, &r), r);
        }
    }

    #[test]
    fn schouten_leibniz_rule(seed in any::<u64>(), a in 0usize..3, b in 0usize..3, c in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let x = random_polyvector(&mut rng, n, a, 2);
        let y = random_polyvector(&mut rng, n, b, 2);
        let z = random_polyvector(&mut rng, n, c, 2);
        // [X, Y∧Z] = [X, Y]∧Z + (−1)^{(|X|−1)|Y|} Y∧[X, Z]
        let lhs = schouten(&x, &y.wedge(&z), n);
        let rhs = &schouten(&x, &y, n).wedge(&z) + &y.wedge(&schouten(&x, &z, n)).scale(&sign((a + 1) * b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schouten_is_equivariant(seed in any::<u64>(), a in 0usize..3, b in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in groups() {
            let n = g.dim;
            let x = random_polyvector(&mut rng, n, a.min(n), 2);
            let y = random_polyvector(&mut rng, n, b.min(n), 2);
            let e = &g.elements[rng.gen_range(0..g.order())];
            let act = |v: &Polyvector| v.act(&e.matrix, &e.inverse_matrix);
            prop_assert_eq!(act(&schouten(&x, &y, n)), schouten(&act(&x), &act(&y), n));
        }
    }

    #[test]
    fn schouten_graded_antisymmetry(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_polyvector(&mut rng, 3, a, 2);
        let y = random_polyvector(&mut rng, 3, b, 2);
        let back = schouten(&y, &x, 3).scale(&sign((degree(&x) + 1) * (degree(&y) + 1) + 1));
        prop_assert_eq!(schouten(&x, &y, 3), back);
    }

    #[test]
    fn koszul_differential_is_equivariant_and_squares_to_zero(k in 0usize..4, deg in 0u32..3, i in 0usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let key: Vec<usize> = skewhh::group::subsets(n, k)[i % skewhh::group::subsets(n, k).len()].clone();
        let mons = monomials_of_degree(n, deg);
        let mut e = KoszulElt::zero();
        e.add(mons[rng.gen_range(0..mons.len())].clone(), key, mons[rng.gen_range(0..mons.len())].clone(), CycScalar::from_int(1));
        prop_assert!(koszul_diff(&koszul_diff(&e)).is_zero());
        for g in groups().into_iter().filter(|g| g.dim == n) {
            for el in &g.elements {
                prop_assert_eq!(koszul_diff(&e.act(&el.matrix)), koszul_diff(&e).act(&el.matrix));
            }
        }
    }
}

#[test]
fn conjugate_elements_have_conjugate_geometry() {
    for g in groups() {
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert!(g.conjugate_geometry_check(a, b));
            }
        }
    }
}

#[test]
fn group_tables_are_consistent() {
    for (name, text) in fixtures::GROUPS {
        let g = load_group(text).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inverses[a]), g.mul(0, 0), "{name}");
            assert!(g.matrix(a).mul(&g.elements[a].inverse_matrix).is_identity());
            for b in 0..g.order() {
                assert_eq!(g.matrix(g.mul(a, b)), &g.matrix(a).mul(g.matrix(b)), "{name}");
            }
            assert_eq!(g.resolve_word(&g.word_string(a)).unwrap(), a, "{name}");
        }
        let total: usize = g.classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, g.order());
    }
}

#[test]
fn class_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in groups() {
        for p in 0..=g.dim {
            let c = random_cochain(&mut rng, &g, p);
            let text = ClassFile::from_cochain(&c, &g).to_json();
            assert_eq!(load_class(&text, &g).unwrap(), c);
        }
    }
}
