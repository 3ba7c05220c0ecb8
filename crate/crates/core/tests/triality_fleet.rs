use trialgebra::config::SweepPolicy;
use trialgebra::groups::FiniteGroup;
use trialgebra::moufang::loop_exponent;
use trialgebra::triality::{full_report, group_doubling, loop_to_base};

#[test]
fn heisenberg_doubling_loop_is_the_base_group() {
    let q = FiniteGroup::heisenberg(5).unwrap();
    let t = group_doubling(&q).unwrap();
    assert_eq!(t.group().order(), 125 * 125);
    let (l, rep) = full_report(&t, &SweepPolicy::sampled(20_000, 11)).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.failed_checks());
    assert_eq!(l.loop_.order(), 125);
    let (base, map) = loop_to_base(&t, &l).unwrap();
    let relabeled = l.loop_.relabeled(&map).unwrap();
    assert!(relabeled.equals_group_table(&base));
    assert!(relabeled.is_associative());
}

#[test]
fn modular_doubling_loop_has_exponent_25() {
    let q = FiniteGroup::modular(5).unwrap();
    let t = group_doubling(&q).unwrap();
    let (l, rep) = full_report(&t, &SweepPolicy::sampled(20_000, 11)).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.failed_checks());
    assert_eq!(loop_exponent(&l.loop_).unwrap(), 25);
    let (base, map) = loop_to_base(&t, &l).unwrap();
    assert!(l.loop_.relabeled(&map).unwrap().equals_group_table(&base));
}
