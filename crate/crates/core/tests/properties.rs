use proptest::prelude::*;

use trialgebra::config::{Caps, SweepPolicy};
use trialgebra::free_malcev::{mono, FreeAnticommutative, Monomial};
use trialgebra::graded_lie::build_lp_algebra;
use trialgebra::groups::{check_commutator_bilinearity, check_hall_identity, FiniteGroup};
use trialgebra::io::{canonicalize, to_canonical, Descriptor, GroupSpec};
use trialgebra::linalg::{kernel, rank, rref, Fp, FpMatrix, Subspace};
use trialgebra::malcev::{symmetrized_product, MalcevAlgebra};
use trialgebra::moufang::{check_moufang, loop_exponent};
use trialgebra::triality::{abelian_doubling, check_sigma_inverts_u, moufang_from_triality};

const P: u32 = 5;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = FpMatrix> {
    proptest::collection::vec(0..P as i64, rows * cols).prop_map(move |v| {
        let rs: Vec<Vec<i64>> = v.chunks(cols).map(|c| c.to_vec()).collect();
        FpMatrix::from_rows(P, cols, &rs).unwrap()
    })
}

fn vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::vec(0..P, n), 0..=count)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in matrix(4, 6)) {
        let (r, k) = rref(&m);
        let (r2, k2) = rref(&r);
        prop_assert_eq!(r, r2);
        prop_assert_eq!(k, k2);
    }

    #[test]
    fn rank_plus_nullity(m in matrix(5, 7)) {
        prop_assert_eq!(rank(&m) + kernel(&m).dim(), 7);
        for v in kernel(&m).basis() {
            prop_assert!(m.apply(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_sum_and_intersection(a in vectors(5, 4), b in vectors(5, 4)) {
        let f = Fp::new(P).unwrap();
        let sa = Subspace::from_vectors(f, 5, a.iter().cloned());
        let sb = Subspace::from_vectors(f, 5, b.iter().cloned());
        let s = sa.sum(&sb).unwrap();
        let i = sa.intersect(&sb).unwrap();
        prop_assert!(sa.is_subspace_of(&s).unwrap() && sb.is_subspace_of(&s).unwrap());
        prop_assert!(i.is_subspace_of(&sa).unwrap() && i.is_subspace_of(&sb).unwrap());
        prop_assert_eq!(s.dim() + i.dim(), sa.dim() + sb.dim());
        for v in a.iter().chain(&b) {
            prop_assert!(s.contains(v).unwrap());
        }
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(4, 4)) {
        match m.inverse().unwrap() {
            Some(inv) => {
                prop_assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(P, 4).unwrap());
                prop_assert_eq!(inv.mul(&m).unwrap(), FpMatrix::identity(P, 4).unwrap());
            }
            None => prop_assert!(rank(&m) < 4),
        }
    }

    #[test]
    fn field_inverse(a in 1u32..P, e in 0u64..40) {
        let f = Fp::new(P).unwrap();
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.pow(a, e), f.pow(a, e % (P as u64 - 1)));
    }

    #[test]
    fn polarization_matches_permutation_sum(ms in proptest::collection::vec(matrix(3, 3), 1..=4)) {
        let n = ms.len();
        let mut direct = FpMatrix::zeros(P, 3, 3).unwrap();
        for perm in permutations(n) {
            let mut prod = FpMatrix::identity(P, 3).unwrap();
            for &i in &perm {
                prod = prod.mul(&ms[i]).unwrap();
            }
            direct = direct.add(&prod).unwrap();
        }
        prop_assert_eq!(symmetrized_product(&ms), direct);
    }

    #[test]
    fn cross_product_is_malcev(x in vectors(3, 1), y in vectors(3, 1), z in vectors(3, 1)) {
        let m = MalcevAlgebra::cross_product(P).unwrap();
        let f = Fp::new(P).unwrap();
        let pick = |v: &Vec<Vec<u32>>| v.first().cloned().unwrap_or(vec![0; 3]);
        let (x, y, z) = (pick(&x), pick(&y), pick(&z));
        // anticommutative, and the Malcev identity J(x,y,xz) = J(x,y,z)x
        prop_assert!(f.add_vec(&m.mul(&x, &y), &m.mul(&y, &x)).iter().all(|&c| c == 0));
        let j = |a: &[u32], b: &[u32], c: &[u32]| {
            let t1 = m.mul(&m.mul(a, b), c);
            let t2 = m.mul(&m.mul(b, c), a);
            let t3 = m.mul(&m.mul(c, a), b);
            f.add_vec(&f.add_vec(&t1, &t2), &t3)
        };
        let xz = m.mul(&x, &z);
        prop_assert_eq!(j(&x, &y, &xz), m.mul(&j(&x, &y, &z), &x));
    }

    #[test]
    fn free_product_is_anticommutative(i in 0usize..3, j in 0usize..3, k in 0usize..3) {
        let fa = FreeAnticommutative::new(3, P).unwrap();
        let x = mono(&Monomial::Gen(i));
        let y = fa.mul(&mono(&Monomial::Gen(j)), &mono(&Monomial::Gen(k)));
        let xy = fa.mul(&x, &y);
        let yx = fa.mul(&y, &x);
        prop_assert!(fa.add(&xy, &yx).is_empty());
    }

    #[test]
    fn descriptor_round_trip(p in prop::sample::select(vec![2usize, 3, 5, 7]), k in 1u32..3, sign in prop::sample::select(vec![1i64, -1])) {
        for d in [
            Descriptor::AbelianDoubling { base: GroupSpec::ElementaryAbelian { p, k } },
            Descriptor::GroupDoubling { base: GroupSpec::DirectProduct { factors: vec![GroupSpec::Cyclic { n: p }, GroupSpec::Heisenberg { p }] } },
            Descriptor::Example4 { p: p as u32, sigma_sign: sign },
        ] {
            let text = to_canonical(&d).unwrap();
            prop_assert_eq!(canonicalize(&text).unwrap(), text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hall_identity_on_small_p_groups(seed in any::<u64>(), which in 0usize..3) {
        let g = match which {
            0 => FiniteGroup::heisenberg(3).unwrap(),
            1 => FiniteGroup::modular(5).unwrap(),
            _ => FiniteGroup::direct_product(&FiniteGroup::cyclic(4).unwrap(), &FiniteGroup::heisenberg(3).unwrap()).unwrap(),
        };
        let policy = SweepPolicy::sampled(2_000, seed);
        prop_assert!(check_hall_identity(&g, &policy).passed());
    }

    #[test]
    fn lp_bracket_is_antisymmetric_and_graded(u in vectors(3, 1), v in vectors(3, 1)) {
        let l = build_lp_algebra(&FiniteGroup::heisenberg(5).unwrap(), 5, &Caps::default()).unwrap();
        let f = l.field();
        let pick = |w: &Vec<Vec<u32>>| w.first().cloned().unwrap_or(vec![0; 3]);
        let (u, v) = (pick(&u), pick(&v));
        let s = f.add_vec(&l.bracket(&u, &v), &l.bracket(&v, &u));
        prop_assert!(s.iter().all(|&c| c == 0));
        // degree 1 brackets land in degree 2
        let b = l.bracket(&[u[0], u[1], 0], &[v[0], v[1], 0]);
        prop_assert!(b[0] == 0 && b[1] == 0);
    }
}

/// Chein doubling of `S_3`: the smallest nonassociative Moufang loop, order 12.
fn chein_s3() -> trialgebra::moufang::Loop {
    let g = FiniteGroup::symmetric(3).unwrap();
    let n = g.order();
    let idx = |x: u32, half: usize| x as usize + half * n;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            table[idx(a, 0)][idx(b, 0)] = idx(g.mul(a, b), 0);
            table[idx(a, 0)][idx(b, 1)] = idx(g.mul(b, a), 1);
            table[idx(a, 1)][idx(b, 0)] = idx(g.mul(a, g.inv(b)), 1);
            table[idx(a, 1)][idx(b, 1)] = idx(g.mul(g.inv(b), a), 0);
        }
    }
    trialgebra::moufang::Loop::from_table(table).unwrap()
}

#[test]
fn chein_loop_is_moufang_and_nonassociative() {
    let l = chein_s3();
    assert!(check_moufang(&l, &SweepPolicy::exhaustive()).all_passed());
    assert!(!l.is_associative());
    assert_eq!(loop_exponent(&l).unwrap(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn moufang_power_towers_agree(x in 0u32..12, k in 1usize..=6) {
        let l = chein_s3();
        let mut left = 0;
        let mut right = 0;
        for _ in 0..k {
            left = l.mul(left, x);
            right = l.mul(x, right);
        }
        prop_assert_eq!(left, right);
    }

    #[test]
    fn element_orders_divide_group_order(x in 0usize..125, which in 0usize..2) {
        let g = if which == 0 { FiniteGroup::heisenberg(5).unwrap() } else { FiniteGroup::modular(5).unwrap() };
        let o = g.element_order(x as u32);
        prop_assert_eq!(125 % o, 0);
    }

    #[test]
    fn commutators_bilinear_mod_derived(seed in any::<u64>()) {
        for g in [FiniteGroup::heisenberg(3).unwrap(), FiniteGroup::symmetric(4).unwrap()] {
            prop_assert!(check_commutator_bilinearity(&g, 200, seed).passed());
        }
    }

    #[test]
    fn doubling_loop_has_base_order(n in 1usize..8, k in 1u32..3) {
        let q = FiniteGroup::elementary_abelian(2, k).unwrap();
        let base = FiniteGroup::direct_product(&FiniteGroup::cyclic(n).unwrap(), &q).unwrap();
        let t = abelian_doubling(&base).unwrap();
        let l = moufang_from_triality(&t).unwrap();
        prop_assert_eq!(l.loop_.order(), base.order());
        prop_assert!(l.loop_.order() <= t.group().order());
        prop_assert!(check_sigma_inverts_u(&t).passed());
    }
}
