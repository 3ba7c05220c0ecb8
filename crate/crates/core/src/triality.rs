//! Groups with triality and the Moufang loop on the set of sigma-commutators.
//!
//! Maps compose left to right: `rho sigma` means apply `rho`, then `sigma`.
//! For a group with triality, `U = {[x, sigma] = x^-1 sigma(x)}` carries the
//! product `a . b = rho(a^-1) b rho^2(a^-1)`.

use crate::config::{Caps, SweepPolicy};
use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, GroupMap};
use crate::moufang::{check_moufang, Loop};
use crate::report::{CheckReport, Report};

/// How a triality group was produced; used to map the loop back onto a base group.
#[derive(Clone, Debug)]
pub enum Construction {
    Given,
    /// `A x A` with `rho(x, y) = (y^-1, x y^-1)`, `sigma(x, y) = (y, x)`.
    AbelianDoubling(FiniteGroup),
    /// Central triples over `Q` (see [`FiniteGroup::central_triples`]) with
    /// `rho(x, y, z) = (z, x, y)` and `sigma(x, y, z) = (y, x, z)`.
    CentralTriples(FiniteGroup),
    /// `Q^3` with the same coordinate action.
    Cube(FiniteGroup),
}

#[derive(Clone, Debug)]
pub struct TrialityGroup {
    group: FiniteGroup,
    rho: GroupMap,
    sigma: GroupMap,
    construction: Construction,
}

impl TrialityGroup {
    /// Certifies `(rho, sigma)` with [`verify_triality`].
    pub fn new(group: FiniteGroup, rho: GroupMap, sigma: GroupMap) -> Result<Self> {
        Self::certified(group, rho, sigma, Construction::Given)
    }

    fn certified(group: FiniteGroup, rho: GroupMap, sigma: GroupMap, construction: Construction) -> Result<Self> {
        let rep = verify_triality(&group, &rho, &sigma);
        if !rep.all_passed() {
            return Err(Error::TrialityFailed(rep.failed_checks().join(", ")));
        }
        Ok(TrialityGroup {
            group,
            rho,
            sigma,
            construction,
        })
    }

    pub fn trivial() -> Self {
        let g = FiniteGroup::trivial();
        Self::new(g, GroupMap::identity(1), GroupMap::identity(1)).expect("trivial triality")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rho(&self) -> &GroupMap {
        &self.rho
    }

    pub fn sigma(&self) -> &GroupMap {
        &self.sigma
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.group = self.group.with_label(label);
        self
    }

    pub fn label(&self) -> &str {
        self.group.label()
    }

    /// `[x, sigma] = x^-1 sigma(x)`.
    #[inline]
    pub fn sigma_commutator(&self, x: Elem) -> Elem {
        self.group.mul(self.group.inv(x), self.sigma.apply(x))
    }

    /// The sorted set `U = {[x, sigma]}`.
    pub fn sigma_commutator_set(&self) -> Vec<Elem> {
        let mut seen = vec![false; self.group.order()];
        for x in 0..self.group.order() as Elem {
            seen[self.sigma_commutator(x) as usize] = true;
        }
        (0..self.group.order() as Elem).filter(|&x| seen[x as usize]).collect()
    }

    /// `a . b = rho(a^-1) b rho^2(a^-1)` on group elements.
    #[inline]
    pub fn loop_product(&self, a: Elem, b: Elem) -> Elem {
        let g = &self.group;
        let ai = g.inv(a);
        let r1 = self.rho.apply(ai);
        let r2 = self.rho.apply(r1);
        g.mul(g.mul(r1, b), r2)
    }
}

/// Automorphism, `S_3` relation and triality-identity clauses, each reported separately.
pub fn verify_triality(g: &FiniteGroup, rho: &GroupMap, sigma: &GroupMap) -> Report {
    let mut rep = Report::default();
    let n = g.order();
    let size_ok = rho.images().len() == n && sigma.images().len() == n;
    for (name, map) in [("rho", rho), ("sigma", sigma)] {
        let mut c = CheckReport::new(
            format!("triality.{name}_automorphism"),
            format!("{name}(xy) = {name}(x) {name}(y)"),
        );
        if !size_ok {
            c.fail(|| "map size does not match the group order".into());
        } else {
            c.cases = (n * g.generators().len()) as u64;
            if let Some((x, s)) = map.homomorphism_violation(g) {
                c.fail(|| format!("x={x} y={s}"));
            }
        }
        rep.push(c);
    }
    if !size_ok {
        return rep;
    }
    let rs = rho.then(sigma);
    for (name, stmt, map) in [
        ("triality.rho_cubed", "rho^3 = 1", rho.power(3)),
        ("triality.sigma_squared", "sigma^2 = 1", sigma.power(2)),
        ("triality.rho_sigma_squared", "(rho sigma)^2 = 1", rs.power(2)),
    ] {
        let mut c = CheckReport::new(name, stmt);
        c.cases = n as u64;
        if let Some(x) = (0..n).find(|&x| map.apply(x as Elem) != x as Elem) {
            c.fail(|| format!("x={x} maps to {}", map.apply(x as Elem)));
        }
        rep.push(c);
    }
    let mut c = CheckReport::new("triality.identity", "[x,sigma] rho([x,sigma]) rho^2([x,sigma]) = 1");
    for x in 0..n as Elem {
        let d = g.mul(g.inv(x), sigma.apply(x));
        let d1 = rho.apply(d);
        let d2 = rho.apply(d1);
        c.expect(g.mul(g.mul(d, d1), d2) == 0, || format!("x={x}"));
    }
    rep.push(c);
    rep
}

/// The loop on `U`, with the group element behind each loop index.
#[derive(Clone, Debug)]
pub struct ExtractedLoop {
    pub loop_: Loop,
    /// `elements[i]` is the group element for loop index `i`; index 0 is the identity.
    pub elements: Vec<Elem>,
}

pub fn moufang_from_triality(t: &TrialityGroup) -> Result<ExtractedLoop> {
    let elements = t.sigma_commutator_set();
    let mut index = vec![Elem::MAX; t.group.order()];
    for (i, &e) in elements.iter().enumerate() {
        index[e as usize] = i as Elem;
    }
    let m = elements.len();
    let mut flat = Vec::with_capacity(m * m);
    for &a in &elements {
        for &b in &elements {
            let c = t.loop_product(a, b);
            let i = index[c as usize];
            if i == Elem::MAX {
                return Err(Error::InvalidLoop(format!(
                    "U is not closed: {a} . {b} = {c} lies outside U"
                )));
            }
            flat.push(i);
        }
    }
    Ok(ExtractedLoop {
        loop_: Loop::from_flat(m, flat)?,
        elements,
    })
}

/// `sigma(a) = a^-1` for every `a` in `U`.
pub fn check_sigma_inverts_u(t: &TrialityGroup) -> CheckReport {
    let mut c = CheckReport::new("triality.sigma_inverts_u", "sigma(a) = a^-1 for a in U");
    for a in t.sigma_commutator_set() {
        c.expect(t.sigma.apply(a) == t.group.inv(a), || format!("a={a}"));
    }
    c
}

/// Triality clauses plus both Moufang identities on the extracted loop.
pub fn full_report(t: &TrialityGroup, policy: &SweepPolicy) -> Result<(ExtractedLoop, Report)> {
    let mut rep = verify_triality(&t.group, &t.rho, &t.sigma);
    let l = moufang_from_triality(t)?;
    rep.push(check_sigma_inverts_u(t));
    rep.extend(check_moufang(&l.loop_, policy));
    Ok((l, rep))
}

pub fn abelian_doubling(a: &FiniteGroup) -> Result<TrialityGroup> {
    if !a.is_abelian() {
        return Err(Error::Nonabelian);
    }
    let n = a.order() as Elem;
    let g = FiniteGroup::direct_product(a, a)?.with_label(format!("AD({})", a.label()));
    let split = |e: Elem| (e / n, e % n);
    let rho = GroupMap::from_fn(&g, |e| {
        let (x, y) = split(e);
        let yi = a.inv(y);
        yi * n + a.mul(x, yi)
    })?;
    let sigma = GroupMap::from_fn(&g, |e| {
        let (x, y) = split(e);
        y * n + x
    })?;
    TrialityGroup::certified(g, rho, sigma, Construction::AbelianDoubling(a.clone()))
}

/// A triality group whose loop is isomorphic to `q`.
///
/// Uses central triples when `Q'` is central and cubing is injective on it
/// (order `|Q|^2`), and `Q^3` otherwise when that fits the table cap.
pub fn group_doubling(q: &FiniteGroup) -> Result<TrialityGroup> {
    match FiniteGroup::central_triples(q) {
        Ok(g) => central_triple_doubling(q, g),
        Err(Error::OrderCap { .. }) | Err(Error::InvalidGroup(_)) => cube_doubling(q),
        Err(e) => Err(e),
    }
}

fn central_triple_doubling(q: &FiniteGroup, g: FiniteGroup) -> Result<TrialityGroup> {
    let g = g.with_label(format!("GD({})", q.label()));
    let n = q.order() as Elem;
    let rho = GroupMap::from_fn(&g, |e| {
        let (x, _, z) = g.triple_of(e).expect("structured group");
        z * n + x
    })?;
    let sigma = GroupMap::from_fn(&g, |e| {
        let (x, y, z) = g.triple_of(e).expect("structured group");
        g.from_triple(y, x, z).expect("swap stays in the central subgroup")
    })?;
    TrialityGroup::certified(g, rho, sigma, Construction::CentralTriples(q.clone()))
}

fn cube_doubling(q: &FiniteGroup) -> Result<TrialityGroup> {
    let n = q.order();
    let cap = Caps::from_env().max_group_order;
    if n * n * n > cap {
        return Err(Error::NoTriality(format!(
            "{} admits no central-triple doubling and |Q|^3 = {} exceeds the table cap {cap}",
            q.label(),
            n * n * n
        )));
    }
    let qq = FiniteGroup::direct_product(q, q)?;
    let g = FiniteGroup::direct_product(q, &qq)?.with_label(format!("GD({})", q.label()));
    let n = n as Elem;
    let split = |e: Elem| (e / (n * n), (e / n) % n, e % n);
    let join = |x: Elem, y: Elem, z: Elem| x * n * n + y * n + z;
    let rho = GroupMap::from_fn(&g, |e| {
        let (x, y, z) = split(e);
        join(z, x, y)
    })?;
    let sigma = GroupMap::from_fn(&g, |e| {
        let (x, y, z) = split(e);
        join(y, x, z)
    })?;
    TrialityGroup::certified(g, rho, sigma, Construction::Cube(q.clone()))
}

/// For doublings: the base group and, per loop index, the base element it maps to.
/// The loop relabeled by this map has exactly the base group's table.
pub fn loop_to_base(t: &TrialityGroup, l: &ExtractedLoop) -> Option<(FiniteGroup, Vec<Elem>)> {
    let g = &t.group;
    match &t.construction {
        Construction::Given => None,
        Construction::AbelianDoubling(a) => {
            let n = a.order() as Elem;
            Some((a.clone(), l.elements.iter().map(|&e| e / n).collect()))
        }
        Construction::CentralTriples(q) => {
            let map = l
                .elements
                .iter()
                .map(|&e| {
                    let (_, y, z) = g.triple_of(e).expect("structured group");
                    q.mul(y, q.inv(z))
                })
                .collect();
            Some((q.clone(), map))
        }
        Construction::Cube(q) => {
            let n = q.order() as Elem;
            let map = l.elements.iter().map(|&e| q.mul((e / n) % n, q.inv(e % n))).collect();
            Some((q.clone(), map))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moufang::loop_exponent;

    #[test]
    fn trivial_group() {
        let t = TrialityGroup::trivial();
        let l = moufang_from_triality(&t).unwrap();
        assert_eq!(l.loop_.order(), 1);
    }

    #[test]
    fn abelian_doubling_of_c5() {
        let a = FiniteGroup::cyclic(5).unwrap();
        let t = abelian_doubling(&a).unwrap();
        let (l, rep) = full_report(&t, &SweepPolicy::exhaustive()).unwrap();
        assert!(rep.all_passed());
        assert_eq!(l.loop_.order(), 5);
        let (base, map) = loop_to_base(&t, &l).unwrap();
        assert!(l.loop_.relabeled(&map).unwrap().equals_group_table(&base));
        assert_eq!(loop_exponent(&l.loop_).unwrap(), 5);
    }

    #[test]
    fn swap_with_identity_rho_fails_only_triality_identity() {
        let a = FiniteGroup::cyclic(5).unwrap();
        let g = FiniteGroup::direct_product(&a, &a).unwrap();
        let rho = GroupMap::identity(25);
        let sigma = GroupMap::from_fn(&g, |e| (e % 5) * 5 + e / 5).unwrap();
        let rep = verify_triality(&g, &rho, &sigma);
        assert_eq!(rep.failed_checks(), vec!["triality.identity"]);
        assert!(TrialityGroup::new(g, rho, sigma).is_err());
    }

    #[test]
    fn non_automorphism_is_named() {
        let g = FiniteGroup::cyclic(5).unwrap();
        let sigma = GroupMap::new(&g, vec![0, 2, 1, 3, 4]).unwrap();
        let rep = verify_triality(&g, &GroupMap::identity(5), &sigma);
        let c = rep.get("triality.sigma_automorphism").unwrap();
        assert!(c.failed());
        assert!(!c.witnesses.is_empty());
    }

    #[test]
    fn nonabelian_input_rejected() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(matches!(abelian_doubling(&s3), Err(Error::Nonabelian)));
    }

    #[test]
    fn group_doubling_abelian_agrees_with_abelian_doubling() {
        let a = FiniteGroup::cyclic(7).unwrap();
        for t in [abelian_doubling(&a).unwrap(), group_doubling(&a).unwrap()] {
            let l = moufang_from_triality(&t).unwrap();
            let (base, map) = loop_to_base(&t, &l).unwrap();
            assert!(l.loop_.relabeled(&map).unwrap().equals_group_table(&base));
        }
    }

    #[test]
    fn cube_fallback_for_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = group_doubling(&s3).unwrap();
        assert!(matches!(t.construction(), Construction::Cube(_)));
        assert_eq!(t.group().order(), 216);
        let (l, rep) = full_report(&t, &SweepPolicy::default()).unwrap();
        assert!(rep.all_passed());
        let (base, map) = loop_to_base(&t, &l).unwrap();
        assert!(l.loop_.relabeled(&map).unwrap().equals_group_table(&base));
    }
}
