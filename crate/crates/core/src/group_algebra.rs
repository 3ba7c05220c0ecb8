//! The modular group algebra F_pG, powers of its augmentation ideal, and the
//! dimension-subgroup filtration `G_i = {g : 1 - g in w^i}`.
//!
//! Two routes compute the filtration. Small groups use explicit powers of the
//! augmentation ideal `w` inside the `|G|`-dimensional algebra. Larger
//! p-groups use the recursion `D_n = [D_{n-1}, G] D_{ceil(n/p)}^p`, which
//! yields the same subgroups for p-groups. The tests cross-check the two.
//!
//! For a p-group with the filtration in hand, [`JenningsBasis`] writes every
//! element as an ordered product of coset representatives, and
//! [`GradedEnvelope`] uses the monomials `prod (r_j - 1)^{e_j}` to read off
//! the graded algebra `(+) w^i / w^{i+1}` without ever forming `w^i`.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, Subgroup};
use crate::linalg::{Fp, Subspace};
use crate::report::{CheckReport, Report};

/// F_pG with elements as dense coefficient vectors indexed by group elements.
pub struct GroupAlgebra<'g> {
    group: &'g FiniteGroup,
    field: Fp,
}

impl<'g> GroupAlgebra<'g> {
    pub fn new(group: &'g FiniteGroup, p: u32) -> Result<Self> {
        Ok(GroupAlgebra {
            group,
            field: Fp::new(p)?,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn basis_vector(&self, g: Elem) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[g as usize] = 1;
        v
    }

    /// `1 - g`.
    pub fn one_minus(&self, g: Elem) -> Vec<u32> {
        let f = self.field;
        let mut v = vec![0; self.dim()];
        v[0] = 1;
        v[g as usize] = f.sub(v[g as usize], 1);
        v
    }

    /// `v s` for a group element `s`.
    pub fn right_mul_elem(&self, v: &[u32], s: Elem) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        for (g, &c) in v.iter().enumerate() {
            if c != 0 {
                out[self.group.mul(g as Elem, s) as usize] = c;
            }
        }
        out
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (g, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (h, &b) in y.iter().enumerate() {
                if b != 0 {
                    let k = self.group.mul(g as Elem, h as Elem) as usize;
                    out[k] = f.add(out[k], f.mul(a, b));
                }
            }
        }
        out
    }

    /// The augmentation ideal, spanned by `1 - g`.
    pub fn augmentation_ideal(&self) -> Subspace {
        Subspace::from_vectors(
            self.field,
            self.dim(),
            (1..self.dim() as Elem).map(|g| self.one_minus(g)),
        )
    }

    /// `w^i = span{ b (1 - s) : b in w^{i-1}, s a generator }`.
    fn next_power(&self, prev: &Subspace) -> Subspace {
        let f = self.field;
        let mut next = Subspace::zero(f, self.dim());
        for b in prev.basis() {
            for &s in self.group.generators() {
                let bs = self.right_mul_elem(b, s);
                next.insert(f.sub_vec(b, &bs));
                if next.dim() == prev.dim() {
                    return next;
                }
            }
        }
        next
    }

    pub fn omega_power(&self, i: usize) -> Result<Subspace> {
        if i == 0 {
            return Err(Error::Format("augmentation ideal powers start at 1".into()));
        }
        let mut w = self.augmentation_ideal();
        for _ in 1..i {
            if w.is_zero() {
                break;
            }
            let next = self.next_power(&w);
            if next.dim() == w.dim() {
                break;
            }
            w = next;
        }
        Ok(w)
    }

    /// Filtration from explicit powers of `w`, stopping at the trivial
    /// subgroup or when `w^i = w^{i+1}`.
    pub fn zassenhaus_filtration(&self) -> Result<Filtration> {
        let g = self.group;
        let mut w = self.augmentation_ideal();
        let mut terms = vec![g.whole()];
        let mut omega_dims = vec![w.dim()];
        let mut stable = false;
        while !terms.last().unwrap().is_trivial() {
            if terms.len() > g.order() {
                return Err(Error::FiltrationUnstable(g.order()));
            }
            let next = self.next_power(&w);
            if next.dim() == w.dim() {
                stable = true;
                break;
            }
            w = next;
            omega_dims.push(w.dim());
            let prev = terms.last().unwrap();
            let members: Vec<Elem> = prev
                .elements()
                .iter()
                .copied()
                .filter(|&x| w.contains(&self.one_minus(x)).expect("ambient matches"))
                .collect();
            terms.push(g.subgroup_from_elements(&members)?);
        }
        let reaches_trivial = terms.last().unwrap().is_trivial();
        debug_assert!(reaches_trivial || stable);
        Ok(Filtration {
            p: self.field.p(),
            terms,
            omega_dims: Some(omega_dims),
            route: FiltrationRoute::OmegaPowers,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationRoute {
    OmegaPowers,
    CommutatorPowers,
}

/// `G = G_1 >= G_2 >= ... >= G_k`, where `G_k` is trivial or the chain has stabilized.
#[derive(Clone, Debug)]
pub struct Filtration {
    p: u32,
    terms: Vec<Subgroup>,
    omega_dims: Option<Vec<usize>>,
    route: FiltrationRoute,
}

impl Filtration {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn route(&self) -> FiltrationRoute {
        self.route
    }

    /// Number of stored terms `G_1..G_k`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `G_i` for `i >= 1`; indices past the stored chain return its last term.
    pub fn term(&self, i: usize) -> &Subgroup {
        assert!(i >= 1, "filtration indices start at 1");
        &self.terms[(i - 1).min(self.terms.len() - 1)]
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    pub fn reaches_trivial(&self) -> bool {
        self.terms.last().is_some_and(|t| t.is_trivial())
    }

    /// Largest `i` with `G_i / G_{i+1}` nontrivial, 0 for the trivial group.
    pub fn top_degree(&self) -> usize {
        (1..=self.terms.len())
            .filter(|&i| self.term(i).order() != self.term(i + 1).order())
            .max()
            .unwrap_or(0)
    }

    /// `dim_F_p G_i / G_{i+1}` for `i = 1..=top_degree`.
    pub fn quotient_dims(&self) -> Vec<usize> {
        (1..=self.top_degree())
            .map(|i| {
                let ratio = self.term(i).order() / self.term(i + 1).order();
                log_p(ratio as u64, self.p as u64).unwrap_or(0)
            })
            .collect()
    }

    pub fn omega_dims(&self) -> Option<&[usize]> {
        self.omega_dims.as_deref()
    }

    /// Smallest `i` with `g` outside `G_{i+1}`, i.e. the degree of `g`; `None` for the identity.
    pub fn degree_of(&self, g: Elem) -> Option<usize> {
        if g == 0 {
            return None;
        }
        (1..=self.terms.len() + 1).find(|&i| !self.term(i + 1).contains(g))
    }

    pub fn profile(&self) -> FiltrationProfile {
        FiltrationProfile {
            p: self.p,
            route: self.route,
            orders: self.terms.iter().map(|t| t.order()).collect(),
            quotient_dims: self.quotient_dims(),
            omega_dims: self.omega_dims.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationProfile {
    pub p: u32,
    pub route: FiltrationRoute,
    pub orders: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_dims: Option<Vec<usize>>,
}

fn log_p(mut n: u64, p: u64) -> Option<usize> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        k += 1;
    }
    Some(k)
}

/// `D_1 = G`, `D_n = [D_{n-1}, G] D_{ceil(n/p)}^p`; `G` must be a p-group.
pub fn jennings_filtration(g: &FiniteGroup, p: u32) -> Result<Filtration> {
    Fp::new(p)?;
    if !g.is_p_group(p) {
        return Err(Error::NotPGroup {
            p,
            reason: format!("order {} is not a power of {p}", g.order()),
        });
    }
    let whole = g.whole();
    let mut terms = vec![whole.clone()];
    while !terms.last().unwrap().is_trivial() {
        let n = terms.len() + 1;
        if n > g.order() + 1 {
            return Err(Error::FiltrationUnstable(g.order()));
        }
        let comm = g.commutator_subgroup(terms.last().unwrap(), &whole);
        let src = &terms[n.div_ceil(p as usize) - 1];
        let pow = g.power_subgroup(src, p as u64);
        terms.push(g.product(&comm, &pow));
    }
    Ok(Filtration {
        p,
        terms,
        omega_dims: None,
        route: FiltrationRoute::CommutatorPowers,
    })
}

/// Picks the route by group size: explicit augmentation powers up to the
/// configured limit, the commutator/power recursion above it.
pub fn zassenhaus_filtration(g: &FiniteGroup, p: u32, caps: &Caps) -> Result<Filtration> {
    if g.has_table() && g.order() <= caps.algebra_route_limit {
        GroupAlgebra::new(g, p)?.zassenhaus_filtration()
    } else {
        jennings_filtration(g, p)
    }
}

/// Descent, normality, `[G_i, G_j] <= G_{i+j}`, `g^p` in `G_{ip}`, and
/// elementary abelian quotients.
pub fn check_filtration(g: &FiniteGroup, filt: &Filtration) -> Report {
    let mut rep = Report::default();
    let k = filt.len();
    let p = filt.p() as u64;

    let mut c = CheckReport::new("filtration.descending", "G_{i+1} <= G_i and G_i normal");
    for i in 1..=k {
        let (a, b) = (filt.term(i), filt.term(i + 1));
        c.expect(b.is_subgroup_of(a) && g.is_normal(a), || format!("i={i}"));
    }
    rep.push(c);

    let mut c = CheckReport::new("filtration.commutator_containment", "[G_i, G_j] <= G_{i+j}");
    for i in 1..=k {
        for j in i..=k {
            let target = filt.term(i + j);
            for &x in filt.term(i).generators() {
                for &y in filt.term(j).generators() {
                    c.expect(target.contains(g.comm(x, y)), || format!("i={i} j={j} x={x} y={y}"));
                }
            }
        }
    }
    rep.push(c);

    let mut c = CheckReport::new("filtration.power_containment", "g in G_i implies g^p in G_{ip}");
    for i in 1..=k {
        let target = filt.term(i * p as usize);
        for &x in filt.term(i).elements() {
            c.expect(target.contains(g.pow(x, p)), || format!("i={i} g={x}"));
        }
    }
    rep.push(c);

    let mut c = CheckReport::new(
        "filtration.elementary_quotients",
        "G_i / G_{i+1} is elementary abelian of exponent p",
    );
    for i in 1..=k {
        let (a, b) = (filt.term(i), filt.term(i + 1));
        for (n, &x) in a.generators().iter().enumerate() {
            c.expect(b.contains(g.pow(x, p)), || format!("i={i} g={x}: g^p"));
            for &y in &a.generators()[n + 1..] {
                c.expect(b.contains(g.comm(x, y)), || format!("i={i} [{x},{y}]"));
            }
        }
    }
    rep.push(c);

    if g.is_p_group(filt.p()) {
        let mut c = CheckReport::new("filtration.reaches_trivial", "G_k = 1 for some k");
        c.expect(filt.reaches_trivial(), || "chain stabilized above 1".into());
        rep.push(c);
    }
    rep
}

/// Coset representatives of every `G_i / G_{i+1}` and the ordered normal form
/// `g = prod_j r_j^{f_j}` (lowest degree leftmost, `0 <= f_j < p`).
#[derive(Clone, Debug)]
pub struct JenningsBasis {
    p: u32,
    reps: Vec<Elem>,
    weights: Vec<usize>,
    /// `ranges[d]` is the index range of degree-`d` representatives.
    ranges: Vec<Range<usize>>,
    /// Packed normal-form index `sum_j f_j p^j` of each element.
    packed: Vec<u32>,
    /// Inverse of `packed`.
    element_at: Vec<Elem>,
}

impl JenningsBasis {
    /// Representatives are chosen greedily in element-index order.
    pub fn new(g: &FiniteGroup, filt: &Filtration) -> Result<Self> {
        let p = filt.p();
        if !filt.reaches_trivial() || !g.is_p_group(p) {
            return Err(Error::NotPGroup {
                p,
                reason: format!(
                    "{} (order {}) has a filtration that does not reach 1",
                    g.label(),
                    g.order()
                ),
            });
        }
        let top = filt.top_degree();
        let n = g.order();
        let mut reps = Vec::new();
        let mut weights = Vec::new();
        let mut ranges = vec![0..0];
        // per degree: coset label of each element of G_d, coordinates per label, products per combo
        let mut levels = Vec::new();
        for d in 1..=top {
            let (big, small) = (filt.term(d), filt.term(d + 1));
            let start = reps.len();
            let mut span = small.clone();
            for &x in big.elements() {
                if span.order() == big.order() {
                    break;
                }
                if !span.contains(x) {
                    reps.push(x);
                    weights.push(d);
                    span = g.extend_subgroup(&span, &[x]);
                }
            }
            ranges.push(start..reps.len());
            let k = reps.len() - start;
            if (p as usize).pow(k as u32) * small.order() != big.order() {
                return Err(Error::FiltrationViolation(format!(
                    "G_{d}/G_{} is not elementary abelian",
                    d + 1
                )));
            }
            let mut label = vec![u32::MAX; n];
            let mut next = 0;
            for &x in big.elements() {
                if label[x as usize] == u32::MAX {
                    for &s in small.elements() {
                        label[g.mul(x, s) as usize] = next;
                    }
                    next += 1;
                }
            }
            let combos = (p as usize).pow(k as u32);
            let mut coords_of_label = vec![usize::MAX; combos];
            let mut product = vec![0; combos];
            for (c, prod) in product.iter_mut().enumerate() {
                let mut e = 0;
                let mut rest = c;
                for j in 0..k {
                    let f = rest % p as usize;
                    rest /= p as usize;
                    e = g.mul(e, g.pow(reps[start + j], f as u64));
                }
                *prod = e;
                coords_of_label[label[e as usize] as usize] = c;
            }
            levels.push((label, coords_of_label, product, k));
        }
        let mut packed = vec![0u32; n];
        let mut element_at = vec![0 as Elem; n];
        for x in 0..n as Elem {
            let mut rest = x;
            let mut idx = 0u64;
            let mut place = 1u64;
            for (label, coords_of_label, product, k) in &levels {
                let c = coords_of_label[label[rest as usize] as usize];
                rest = g.mul(g.inv(product[c]), rest);
                idx += c as u64 * place;
                place *= (p as u64).pow(*k as u32);
            }
            debug_assert_eq!(rest, 0);
            packed[x as usize] = idx as u32;
            element_at[idx as usize] = x;
        }
        Ok(JenningsBasis {
            p,
            reps,
            weights,
            ranges,
            packed,
            element_at,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn top_degree(&self) -> usize {
        self.ranges.len() - 1
    }

    pub fn degree_range(&self, d: usize) -> Range<usize> {
        self.ranges.get(d).cloned().unwrap_or(0..0)
    }

    pub fn degree_dim(&self, d: usize) -> usize {
        self.degree_range(d).len()
    }

    /// Exponents `f_j` of the normal form of `g`.
    pub fn exponents(&self, g: Elem) -> Vec<u32> {
        unpack(self.packed[g as usize], self.p, self.rank())
    }

    pub fn element_with_exponents(&self, f: &[u32]) -> Elem {
        self.element_at[pack(f, self.p) as usize]
    }

    /// Coordinates of `g G_{d+1}` in `G_d / G_{d+1}`, for `g` in `G_d`.
    /// Returns `None` if `g` is not in `G_d`.
    pub fn coset_coordinates(&self, g: Elem, d: usize) -> Option<Vec<u32>> {
        let f = self.exponents(g);
        let below = self.degree_range(d).start;
        if f[..below].iter().any(|&x| x != 0) {
            return None;
        }
        Some(f[self.degree_range(d)].to_vec())
    }

    /// `prod_j r_j^{c_j}` over degree-`d` representatives.
    pub fn element_of_coordinates(&self, d: usize, coords: &[u32]) -> Elem {
        let mut f = vec![0; self.rank()];
        for (j, &c) in self.degree_range(d).zip(coords) {
            f[j] = c % self.p;
        }
        self.element_with_exponents(&f)
    }
}

fn pack(f: &[u32], p: u32) -> u64 {
    f.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64)
}

fn unpack(mut idx: u32, p: u32, r: usize) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let x = idx % p;
            idx /= p;
            x
        })
        .collect()
}

/// A sparse element of F_pG.
pub type GaElem = BTreeMap<Elem, u32>;

/// The graded algebra `(+) w^i / w^{i+1}` of a p-group, computed in the
/// monomial basis `prod_j (r_j - 1)^{e_j}`, whose members of weight
/// `sum e_j w_j >= k` span `w^k`.
pub struct GradedEnvelope<'a> {
    group: &'a FiniteGroup,
    basis: &'a JenningsBasis,
    field: Fp,
    /// `binom[f][e] = C(f, e) mod p`.
    binom: Vec<Vec<u32>>,
    monomial_weight: Vec<usize>,
}

impl<'a> GradedEnvelope<'a> {
    pub fn new(group: &'a FiniteGroup, basis: &'a JenningsBasis) -> Result<Self> {
        let field = Fp::new(basis.p())?;
        let p = basis.p() as usize;
        let mut binom = vec![vec![0u32; p]; p];
        for f in 0..p {
            binom[f][0] = 1;
            for e in 1..=f {
                binom[f][e] = field.add(binom[f - 1][e - 1], binom[f - 1][e]);
            }
        }
        let monomial_weight = (0..group.order() as u32)
            .map(|idx| {
                unpack(idx, basis.p(), basis.rank())
                    .iter()
                    .zip(basis.weights())
                    .map(|(&e, &w)| e as usize * w)
                    .sum()
            })
            .collect();
        Ok(GradedEnvelope {
            group,
            basis,
            field,
            binom,
            monomial_weight,
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Dimensions of the graded pieces in degrees `1..=max`.
    pub fn degree_dims(&self) -> Vec<usize> {
        let max = self.monomial_weight.iter().copied().max().unwrap_or(0);
        let mut dims = vec![0; max + 1];
        for &w in &self.monomial_weight {
            dims[w] += 1;
        }
        dims.remove(0);
        dims
    }

    /// `dim w^k`, read off the monomial weights.
    pub fn omega_dim(&self, k: usize) -> usize {
        self.monomial_weight.iter().filter(|&&w| w >= k).count()
    }

    pub fn monomial_weight(&self, idx: usize) -> usize {
        self.monomial_weight[idx]
    }

    pub fn group_element(&self, g: Elem) -> GaElem {
        BTreeMap::from([(g, 1)])
    }

    /// `g - 1`.
    pub fn minus_one(&self, g: Elem) -> GaElem {
        let mut x = GaElem::new();
        self.add_term(&mut x, g, 1);
        self.add_term(&mut x, 0, self.field.neg(1));
        x
    }

    fn add_term(&self, x: &mut GaElem, g: Elem, c: u32) {
        let e = x.entry(g).or_insert(0);
        *e = self.field.add(*e, c);
        if *e == 0 {
            x.remove(&g);
        }
    }

    pub fn add(&self, x: &GaElem, y: &GaElem) -> GaElem {
        let mut out = x.clone();
        for (&g, &c) in y {
            self.add_term(&mut out, g, c);
        }
        out
    }

    pub fn scale(&self, x: &GaElem, c: u32) -> GaElem {
        x.iter()
            .filter_map(|(&g, &a)| {
                let v = self.field.mul(a, c);
                (v != 0).then_some((g, v))
            })
            .collect()
    }

    pub fn sub(&self, x: &GaElem, y: &GaElem) -> GaElem {
        self.add(x, &self.scale(y, self.field.neg(1)))
    }

    pub fn mul(&self, x: &GaElem, y: &GaElem) -> GaElem {
        let mut out = GaElem::new();
        for (&g, &a) in x {
            for (&h, &b) in y {
                self.add_term(&mut out, self.group.mul(g, h), self.field.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, x: &GaElem, k: u32) -> GaElem {
        let mut acc = self.group_element(0);
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// `xy - yx`.
    pub fn commutator(&self, x: &GaElem, y: &GaElem) -> GaElem {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Coefficients on the monomial basis: `y[e] = sum_f x[f] prod_j C(f_j, e_j)`.
    pub fn monomial_coordinates(&self, x: &GaElem) -> Vec<u32> {
        let n = self.group.order();
        let p = self.basis.p() as usize;
        let mut v = vec![0u32; n];
        for (&g, &c) in x {
            v[self.basis.packed[g as usize] as usize] = c;
        }
        let mut stride = 1;
        for _ in 0..self.basis.rank() {
            let block = stride * p;
            let mut fiber = vec![0u32; p];
            for base in (0..n).step_by(block) {
                for off in 0..stride {
                    for (f, slot) in fiber.iter_mut().enumerate() {
                        *slot = v[base + off + f * stride];
                    }
                    for e in 0..p {
                        let mut s = 0u64;
                        for (f, &val) in fiber.iter().enumerate().skip(e) {
                            s += self.binom[f][e] as u64 * val as u64;
                        }
                        v[base + off + e * stride] = (s % p as u64) as u32;
                    }
                }
            }
            stride = block;
        }
        v
    }

    /// Largest `k` with `x` in `w^k`; `None` for `x = 0`.
    pub fn valuation(&self, x: &GaElem) -> Option<usize> {
        let y = self.monomial_coordinates(x);
        y.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| self.monomial_weight[i])
            .min()
    }

    /// Class of `x` in `w^k / w^{k+1}` as (monomial index, coefficient) pairs,
    /// or `None` if `x` is not in `w^k`.
    pub fn component(&self, x: &GaElem, k: usize) -> Option<Vec<(usize, u32)>> {
        let y = self.monomial_coordinates(x);
        let mut out = Vec::new();
        for (i, &c) in y.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = self.monomial_weight[i];
            if w < k {
                return None;
            }
            if w == k {
                out.push((i, c));
            }
        }
        Some(out)
    }

    /// Degree-`d` class of `sum_j c_j (r_j - 1)`, the image of a Lie element
    /// with coordinates `c` in `G_d / G_{d+1}`.
    pub fn lie_element(&self, d: usize, coords: &[u32]) -> GaElem {
        let mut x = GaElem::new();
        for (j, &c) in self.basis.degree_range(d).zip(coords) {
            if c != 0 {
                x = self.add(&x, &self.scale(&self.minus_one(self.basis.reps[j]), c));
            }
        }
        x
    }

    /// The linear monomials `(r_j - 1)` of degree `d` carrying `coords`.
    pub fn lie_component(&self, d: usize, coords: &[u32]) -> Vec<(usize, u32)> {
        let p = self.basis.p() as u64;
        let mut out: Vec<(usize, u32)> = self
            .basis
            .degree_range(d)
            .zip(coords)
            .filter(|(_, &c)| c % self.field.p() != 0)
            .map(|(j, &c)| (p.pow(j as u32) as usize, c % self.field.p()))
            .collect();
        out.sort_unstable();
        out
    }
}
