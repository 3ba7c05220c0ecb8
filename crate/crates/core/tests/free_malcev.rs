use trialgebra::config::Caps;
use trialgebra::free_malcev::{
    dims_reversed, engel_quotient_dims, free_malcev_dims, left_engel_monomial, multidegrees, vanishes_in_quotient,
    witt, EngelSpec, FreeAnticommutative,
};

/// Two-generated Malcev algebras are Lie algebras, so `M(2)` is the free Lie
/// algebra on two generators and its dimensions are exactly Witt's numbers.
#[test]
fn two_generators_match_free_lie() {
    let t = free_malcev_dims(2, 5, 6, &Caps::default()).unwrap();
    for c in &t.cells {
        assert_eq!(c.dim as u64, c.witt, "multidegree {:?}", c.multidegree);
    }
    assert_eq!(t.totals, vec![2, 1, 2, 3, 6, 9]);
}

/// Below degree 4 nothing but anticommutativity applies; count those monomials directly.
#[test]
fn low_degrees_are_free_anticommutative() {
    let t = free_malcev_dims(3, 7, 3, &Caps::default()).unwrap();
    assert_eq!(t.totals[0], 3);
    // x_i x_j with i < j
    assert_eq!(t.totals[1], 3);
    // x_a (x_b x_c) with b < c and any a
    assert_eq!(t.totals[2], 9);
    let c = t.cell(&[1, 1, 1]).unwrap();
    assert_eq!((c.dim, c.witt), (3, 2));
}

#[test]
fn three_generators_dominate_witt() {
    let t = free_malcev_dims(3, 5, 5, &Caps::default()).unwrap();
    assert!(t.dominates_witt());
}

#[test]
fn engel_quotient_below_free() {
    let caps = Caps::default();
    let free = free_malcev_dims(2, 5, 6, &caps).unwrap();
    let q = engel_quotient_dims(2, 5, 1, 6, &caps).unwrap();
    assert!(q.bounded_by(&free));
    assert_eq!(&q.totals[..5], &free.totals[..5]);
    assert!(q.cell(&[5, 1]).unwrap().dim < free.cell(&[5, 1]).unwrap().dim);
    let (_, w) = left_engel_monomial(0, 1, 5).unwrap();
    assert_eq!(w.to_string(), "(x1 (x1 (x1 (x1 (x1 x2)))))");
    assert!(vanishes_in_quotient(2, 5, 1, &w).unwrap());
}

#[test]
fn row_order_does_not_change_dims() {
    let caps = Caps::default();
    let a = free_malcev_dims(2, 5, 6, &caps).unwrap();
    let b = dims_reversed(2, 5, 6, None, &caps).unwrap();
    assert_eq!(a.cells, b.cells);
    let e = Some(EngelSpec { p: 5, n: 1 });
    let a = engel_quotient_dims(2, 5, 1, 6, &caps).unwrap();
    let b = dims_reversed(2, 5, 6, e, &caps).unwrap();
    assert_eq!(a.cells, b.cells);
}

#[test]
fn caps_are_enforced() {
    let caps = Caps::default();
    assert!(free_malcev_dims(2, 5, 7, &caps).is_err());
    assert!(engel_quotient_dims(2, 5, 2, 6, &caps).is_err());
    assert!(free_malcev_dims(2, 3, 4, &caps).is_err());
}

#[test]
fn witt_totals() {
    // necklace counts for two letters
    let totals: Vec<u64> = (1..=6)
        .map(|d| multidegrees(2, d).iter().map(|g| witt(g)).sum())
        .collect();
    assert_eq!(totals, vec![2, 1, 2, 3, 6, 9]);
    let mut a = FreeAnticommutative::new(2, 5).unwrap();
    assert_eq!(a.monomials(&[1, 1]).len(), 1);
}
