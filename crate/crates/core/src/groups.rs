//! Finite groups on element indices `0..n` with the identity at index 0.
//!
//! Small groups carry an explicit Cayley table. The doubling construction
//! used for triality produces groups of order `|Q|^2`, which are stored
//! structurally as pairs over a base table instead (see [`FiniteGroup::central_triples`]).
//!
//! The commutator convention is `[x, y] = x^-1 y^-1 x y` everywhere.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Caps, SweepPolicy, MAX_STRUCTURED_ORDER};
use crate::error::{Error, Result};
use crate::report::CheckReport;

pub type Elem = u32;

const NONE: Elem = Elem::MAX;

#[derive(Clone, Debug)]
enum Repr {
    Table(Vec<Elem>),
    CentralTriples(CentralTriples),
}

/// Triples `(x, y, z)` of a base group `Q` with `xyz` in a central subgroup
/// `N` that contains `Q'`, taken modulo the diagonal of `N`. Each class has a
/// unique member with `xyz = 1`, so elements are stored as pairs `(x, y)`.
#[derive(Clone, Debug)]
struct CentralTriples {
    base: Arc<FiniteGroup>,
    /// Cube root of each element of `N`, `NONE` outside `N`.
    cube_root: Vec<Elem>,
}

impl CentralTriples {
    #[inline]
    fn n(&self) -> usize {
        self.base.order()
    }

    #[inline]
    fn split(&self, e: Elem) -> (Elem, Elem) {
        let n = self.n() as Elem;
        (e / n, e % n)
    }

    #[inline]
    fn third(&self, x: Elem, y: Elem) -> Elem {
        self.base.inv(self.base.mul(x, y))
    }

    /// Canonical element for the class of `(a, b, c)`; `None` if `abc` is not in `N`.
    #[inline]
    fn normalize(&self, a: Elem, b: Elem, c: Elem) -> Option<Elem> {
        let q = &self.base;
        let s = q.mul(q.mul(a, b), c);
        let t = self.cube_root[s as usize];
        if t == NONE {
            return None;
        }
        let ti = q.inv(t);
        let x = q.mul(a, ti);
        let y = q.mul(b, ti);
        Some(x * self.n() as Elem + y)
    }

    #[inline]
    fn mul(&self, e: Elem, f: Elem) -> Elem {
        let q = &self.base;
        let (x, y) = self.split(e);
        let (u, v) = self.split(f);
        let z = self.third(x, y);
        let w = self.third(u, v);
        self.normalize(q.mul(x, u), q.mul(y, v), q.mul(z, w))
            .expect("product of normalized triples stays in the central subgroup")
    }
}

/// A finite group with elements `0..order`; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    repr: Repr,
    inverses: Vec<Elem>,
    generators: Vec<Elem>,
    label: String,
}

impl FiniteGroup {
    /// Validates a Cayley table: square Latin square, identity at 0, associative.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_caps(table, &Caps::from_env())
    }

    pub fn from_table_with_caps(table: Vec<Vec<usize>>, caps: &Caps) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > caps.max_group_order {
            return Err(Error::OrderCap {
                order: n,
                cap: caps.max_group_order,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {} but order is {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, order: n });
                }
                flat.push(x as Elem);
            }
        }
        Self::from_flat_table(n, flat, "table")
    }

    fn from_flat_table(n: usize, flat: Vec<Elem>, label: &str) -> Result<Self> {
        for i in 0..n {
            if flat[i] != i as Elem || flat[i * n] != i as Elem {
                return Err(Error::InvalidGroup("row and column 0 must be identity maps".into()));
            }
        }
        check_latin(n, &flat).map_err(Error::InvalidGroup)?;
        let mut inverses = vec![NONE; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| flat[a * n + b] == 0)
                .expect("latin rows contain the identity");
            inverses[a] = b as Elem;
        }
        let mut g = FiniteGroup {
            order: n,
            repr: Repr::Table(flat),
            inverses,
            generators: Vec::new(),
            label: label.to_string(),
        };
        g.generators = g.greedy_generators();
        g.check_associative_light()?;
        for a in 0..n as Elem {
            if g.mul(g.inverses[a as usize], a) != 0 {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        Ok(g)
    }

    /// Builds and validates a table from a multiplication rule.
    pub fn from_fn(n: usize, label: &str, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let caps = Caps::from_env();
        if n > caps.max_group_order {
            return Err(Error::OrderCap {
                order: n,
                cap: caps.max_group_order,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = f(a, b);
                if c >= n {
                    return Err(Error::IndexOutOfRange { index: c, order: n });
                }
                flat.push(c as Elem);
            }
        }
        Self::from_flat_table(n, flat, label)
    }

    /// Light's associativity test over a generating set.
    fn check_associative_light(&self) -> Result<()> {
        let n = self.order as Elem;
        for &s in &self.generators {
            for x in 0..n {
                let xs = self.mul(x, s);
                for y in 0..n {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative: ({x}*{s})*{y} != {x}*({s}*{y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::from_fn(1, "trivial", |_, _| 0).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        Self::from_fn(n, &format!("C{n}"), |a, b| (a + b) % n)
    }

    /// `(C_p)^k`, elements as base-p digit vectors.
    pub fn elementary_abelian(p: usize, k: u32) -> Result<Self> {
        let n = p.pow(k);
        Self::from_fn(n, &format!("C{p}^{k}"), |a, b| {
            let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
            for _ in 0..k {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        })
    }

    /// Upper unitriangular 3x3 matrices over F_p: `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
    /// Element `a + p b + p^2 c`; `x = 1`, `y = p`.
    pub fn heisenberg(p: usize) -> Result<Self> {
        let dec = move |e: usize| (e % p, (e / p) % p, e / (p * p));
        Self::from_fn(p * p * p, &format!("Heis({p})"), move |u, v| {
            let (a, b, c) = dec(u);
            let (a2, b2, c2) = dec(v);
            (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p)
        })
    }

    /// `<x, y | x^{p^2} = y^p = 1, y^-1 x y = x^{1+p}>`. Element `x^i y^j` is `i + p^2 j`;
    /// `x = 1`, `y = p^2`.
    pub fn modular(p: usize) -> Result<Self> {
        let q = p * p;
        Self::from_fn(p * q, &format!("Mod({})", p * q), move |u, v| {
            let (i, j) = (u % q, u / q);
            let (k, l) = (v % q, v / q);
            // y^j x^k = x^{k (1+p)^{-j}} y^j and (1+p)^{-j} = 1 - jp mod p^2.
            let twist = (q + 1 - (j * p) % q) % q;
            (i + k * twist) % q + q * ((j + l) % p)
        })
    }

    /// Symmetric group on `k` letters, identity first, permutations in lexicographic order.
    pub fn symmetric(k: usize) -> Result<Self> {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            perms.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        Self::from_fn(perms.len(), &format!("S{k}"), |a, b| {
            // apply a first, then b
            let c: Vec<usize> = (0..k).map(|i| perms[b][perms[a][i]]).collect();
            index(&c)
        })
    }

    /// `A x B`, element `(a, b)` at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let nb = b.order();
        Self::from_fn(a.order() * nb, &format!("{}x{}", a.label, b.label), |u, v| {
            let x = a.mul((u / nb) as Elem, (v / nb) as Elem) as usize;
            let y = b.mul((u % nb) as Elem, (v % nb) as Elem) as usize;
            x * nb + y
        })
    }

    /// The group of triples `(x, y, z)` of `Q` with `xyz` in `Q'`, modulo the
    /// diagonal of `Q'`. Requires `Q'` central with every element a cube.
    /// Order `|Q|^2`; element `(x, y)` stands for `(x, y, (xy)^-1)` at index `x |Q| + y`.
    pub fn central_triples(q: &FiniteGroup) -> Result<Self> {
        let n = q.order();
        if n * n > MAX_STRUCTURED_ORDER {
            return Err(Error::OrderCap {
                order: n * n,
                cap: MAX_STRUCTURED_ORDER,
            });
        }
        let derived = q.derived_subgroup();
        let center = q.center();
        if !derived.elements().iter().all(|&d| center.contains(d)) {
            return Err(Error::InvalidGroup(format!(
                "{} has noncentral derived subgroup",
                q.label
            )));
        }
        let mut cube_root = vec![NONE; n];
        for &t in derived.elements() {
            let c = q.pow(t, 3);
            if cube_root[c as usize] != NONE {
                return Err(Error::InvalidGroup(format!(
                    "cubing is not injective on the derived subgroup of {}",
                    q.label
                )));
            }
            cube_root[c as usize] = t;
        }
        let ct = CentralTriples {
            base: Arc::new(q.clone()),
            cube_root,
        };
        let order = n * n;
        let mut inverses = vec![0; order];
        for e in 0..order as Elem {
            let (x, y) = ct.split(e);
            let z = ct.third(x, y);
            inverses[e as usize] = ct
                .normalize(q.inv(x), q.inv(y), q.inv(z))
                .expect("inverse triple stays in the central subgroup");
        }
        let mut g = FiniteGroup {
            order,
            repr: Repr::CentralTriples(ct),
            inverses,
            generators: Vec::new(),
            label: format!("T({})", q.label),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// The triple `(x, y, z)` of base elements for a central-triple group element.
    pub fn triple_of(&self, e: Elem) -> Option<(Elem, Elem, Elem)> {
        match &self.repr {
            Repr::CentralTriples(ct) => {
                let (x, y) = ct.split(e);
                Some((x, y, ct.third(x, y)))
            }
            Repr::Table(_) => None,
        }
    }

    /// Element of a central-triple group for the class of `(a, b, c)`.
    pub fn from_triple(&self, a: Elem, b: Elem, c: Elem) -> Option<Elem> {
        match &self.repr {
            Repr::CentralTriples(ct) => ct.normalize(a, b, c),
            Repr::Table(_) => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn has_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    /// Full Cayley table (materialized on demand for structured groups).
    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.order as Elem;
        (0..n)
            .map(|a| (0..n).map(|b| self.mul(a, b) as usize).collect())
            .collect()
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table(t) => t[a as usize * self.order + b as usize],
            Repr::CentralTriples(ct) => ct.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    pub fn check_index(&self, a: usize) -> Result<Elem> {
        if a >= self.order {
            return Err(Error::IndexOutOfRange {
                index: a,
                order: self.order,
            });
        }
        Ok(a as Elem)
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let (mut base, mut e, mut acc) = (a, k, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    #[inline]
    pub fn comm(&self, x: Elem, y: Elem) -> Elem {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    /// Checked commutator on raw indices.
    pub fn commutator(&self, x: usize, y: usize) -> Result<Elem> {
        let (x, y) = (self.check_index(x)?, self.check_index(y)?);
        Ok(self.comm(x, y))
    }

    /// `g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.inv(g), self.mul(a, g))
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order as Elem).fold(1, |acc, a| lcm(acc, self.element_order(a)))
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        is_power_of(self.order as u64, p as u64)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, &a)| {
            self.generators[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut sub = Subgroup::trivial(self.order);
        let mut gens = Vec::new();
        for a in 1..self.order as Elem {
            if !sub.contains(a) {
                gens.push(a);
                sub = self.extend_subgroup(&sub, &[a]);
                if sub.order() == self.order {
                    break;
                }
            }
        }
        gens
    }

    pub fn whole(&self) -> Subgroup {
        let members = vec![true; self.order];
        Subgroup {
            elements: (0..self.order as Elem).collect(),
            members,
            generators: self.generators.clone(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::trivial(self.order)
    }

    /// `<gens>`, by closing under right multiplication.
    pub fn subgroup(&self, gens: &[Elem]) -> Subgroup {
        self.extend_subgroup(&Subgroup::trivial(self.order), gens)
    }

    /// `<H, extra>`.
    pub fn extend_subgroup(&self, h: &Subgroup, extra: &[Elem]) -> Subgroup {
        let mut gens = h.generators.clone();
        for &e in extra {
            if e != 0 && !gens.contains(&e) {
                gens.push(e);
            }
        }
        let mut members = h.members.clone();
        let mut elements = h.elements.clone();
        if extra.iter().all(|&e| h.contains(e)) {
            return Subgroup {
                members,
                elements,
                generators: gens,
            };
        }
        let mut i = 0;
        while i < elements.len() {
            let e = elements[i];
            for &s in &gens {
                let x = self.mul(e, s);
                if !members[x as usize] {
                    members[x as usize] = true;
                    elements.push(x);
                }
            }
            i += 1;
        }
        elements.sort_unstable();
        Subgroup {
            members,
            elements,
            generators: gens,
        }
    }

    /// Least normal subgroup containing `set`.
    pub fn normal_closure(&self, set: &[Elem]) -> Subgroup {
        let mut h = self.subgroup(set);
        loop {
            let mut extra = Vec::new();
            for &a in &h.generators {
                for &g in &self.generators {
                    let c = self.conj(a, g);
                    if !h.contains(c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return h;
            }
            h = self.extend_subgroup(&h, &extra);
        }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&g| h.contains(self.conj(a, g))))
    }

    /// Verifies that `elements` form a subgroup and wraps them.
    pub fn subgroup_from_elements(&self, elements: &[Elem]) -> Result<Subgroup> {
        let mut members = vec![false; self.order];
        for &e in elements {
            self.check_index(e as usize)?;
            members[e as usize] = true;
        }
        if !members[0] {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        let h = self.subgroup(elements);
        if h.order() != members.iter().filter(|&&m| m).count() {
            return Err(Error::NotSubgroup(format!(
                "set of size {} generates a subgroup of order {}",
                members.iter().filter(|&&m| m).count(),
                h.order()
            )));
        }
        Ok(h)
    }

    /// `[A, B]` for normal subgroups `A`, `B`: the normal closure of the
    /// commutators of their generators.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut set = Vec::new();
        for &x in &a.generators {
            for &y in &b.generators {
                let c = self.comm(x, y);
                if c != 0 && !set.contains(&c) {
                    set.push(c);
                }
            }
        }
        self.normal_closure(&set)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    pub fn center(&self) -> Subgroup {
        let elems: Vec<Elem> = (0..self.order as Elem)
            .filter(|&z| self.generators.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        self.subgroup(&elems)
    }

    /// `<a^p : a in A>`.
    pub fn power_subgroup(&self, a: &Subgroup, p: u64) -> Subgroup {
        let mut seen = vec![false; self.order];
        let mut powers = Vec::new();
        for &x in a.elements() {
            let y = self.pow(x, p);
            if y != 0 && !seen[y as usize] {
                seen[y as usize] = true;
                powers.push(y);
            }
        }
        // Generate incrementally so the generator list stays short.
        let mut h = Subgroup::trivial(self.order);
        for y in powers {
            if !h.contains(y) {
                h = self.extend_subgroup(&h, &[y]);
            }
        }
        h
    }

    /// `A B` for subgroups where one normalizes the other.
    pub fn product(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.extend_subgroup(a, &b.generators)
    }

    /// `N' = <[N, N], g^p : g in N>` for a normal subgroup `N`.
    pub fn n_prime(&self, n: &Subgroup, p: u64) -> Result<Subgroup> {
        if !self.is_normal(n) {
            return Err(Error::NotSubgroup("N must be normal".into()));
        }
        let comm = self.commutator_subgroup(n, n);
        let pow = self.power_subgroup(n, p);
        Ok(self.product(&comm, &pow))
    }

    pub fn relabeled(&self, label: &str) -> Self {
        self.clone().with_label(label)
    }
}

fn check_latin(n: usize, flat: &[Elem]) -> std::result::Result<(), String> {
    let mut seen = vec![0usize; n];
    for r in 0..n {
        for c in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == r + 1 {
                return Err(format!("row {r} repeats {v}"));
            }
            seen[v] = r + 1;
        }
    }
    let mut seen = vec![0usize; n];
    for c in 0..n {
        for r in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == c + 1 {
                return Err(format!("column {c} repeats {v}"));
            }
            seen[v] = c + 1;
        }
    }
    Ok(())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    if p < 2 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// A subgroup with membership bitmap, sorted element list and generators.
/// Equality compares elements only.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<bool>,
    elements: Vec<Elem>,
    generators: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(ambient: usize) -> Self {
        let mut members = vec![false; ambient];
        members[0] = true;
        Subgroup {
            members,
            elements: vec![0],
            generators: Vec::new(),
        }
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        self.members[a as usize]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.generators.iter().all(|&g| other.contains(g))
    }
}

/// A map `G -> G` given by the image of each element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    images: Vec<Elem>,
}

impl GroupMap {
    /// Wraps an image list; it must be a permutation of `0..|G|`.
    pub fn new(g: &FiniteGroup, images: Vec<Elem>) -> Result<Self> {
        if images.len() != g.order() {
            return Err(Error::Format(format!(
                "map has {} images but the group has order {}",
                images.len(),
                g.order()
            )));
        }
        let mut seen = vec![false; g.order()];
        for &x in &images {
            let x = g.check_index(x as usize)?;
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::Format(format!("map is not bijective: {x} hit twice")));
            }
        }
        Ok(GroupMap { images })
    }

    pub fn identity(n: usize) -> Self {
        GroupMap {
            images: (0..n as Elem).collect(),
        }
    }

    pub fn from_fn(g: &FiniteGroup, f: impl Fn(Elem) -> Elem) -> Result<Self> {
        Self::new(g, (0..g.order() as Elem).map(f).collect())
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    /// `x -> other(self(x))`: apply `self` first.
    pub fn then(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            images: self.images.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    pub fn power(&self, k: usize) -> GroupMap {
        let mut acc = GroupMap::identity(self.images.len());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i)
    }

    /// First pair `(x, s)` with `f(xs) != f(x) f(s)`, `s` running over generators.
    /// Checking against a generating set is complete for homomorphisms.
    pub fn homomorphism_violation(&self, g: &FiniteGroup) -> Option<(Elem, Elem)> {
        for x in 0..g.order() as Elem {
            for &s in g.generators() {
                if self.apply(g.mul(x, s)) != g.mul(self.apply(x), self.apply(s)) {
                    return Some((x, s));
                }
            }
        }
        None
    }
}

/// Runs `f` over all triples of `0..n`, or over seeded random triples when
/// `n^3` exceeds the policy limit. Returns `(cases, sampled)`.
pub fn for_each_triple(n: usize, policy: &SweepPolicy, mut f: impl FnMut(Elem, Elem, Elem)) -> (u64, bool) {
    let total = (n as u64).saturating_pow(3);
    if total <= policy.exhaustive_limit {
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                for c in 0..n as Elem {
                    f(a, b, c);
                }
            }
        }
        (total, false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        for _ in 0..policy.samples {
            let a = rng.random_range(0..n) as Elem;
            let b = rng.random_range(0..n) as Elem;
            let c = rng.random_range(0..n) as Elem;
            f(a, b, c);
        }
        (policy.samples, true)
    }
}

/// `[xy, z] = [y, [z, x]] [x, z] [y, z]` over all (or sampled) triples.
pub fn check_hall_identity(g: &FiniteGroup, policy: &SweepPolicy) -> CheckReport {
    let mut rep = CheckReport::new("groups.hall_identity", "[xy,z] = [y,[z,x]][x,z][y,z]");
    let (cases, sampled) = for_each_triple(g.order(), policy, |x, y, z| {
        let lhs = g.comm(g.mul(x, y), z);
        let rhs = g.mul(g.mul(g.comm(y, g.comm(z, x)), g.comm(x, z)), g.comm(y, z));
        if lhs != rhs {
            rep.fail(|| format!("x={x} y={y} z={z}"));
        }
    });
    rep.cases = cases;
    rep.with_sampling(sampled, policy.seed)
}

/// `[xy, z] = [x, z][y, z]` modulo the derived subgroup of `<x, y, z>`, on sampled triples.
pub fn check_commutator_bilinearity(g: &FiniteGroup, samples: u64, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("groups.commutator_bilinearity", "[xy,z] = [x,z][y,z] mod <x,y,z>'");
    let policy = SweepPolicy::sampled(samples, seed);
    let (cases, _) = for_each_triple(g.order(), &policy, |x, y, z| {
        let h = g.subgroup(&[x, y, z]);
        let mut set = Vec::new();
        for &a in h.generators() {
            for &b in h.generators() {
                set.push(g.comm(a, b));
            }
        }
        // derived subgroup of h: normal closure of generator commutators inside h
        let mut d = g.subgroup(&set);
        loop {
            let extra: Vec<Elem> = d
                .generators()
                .iter()
                .flat_map(|&a| h.generators().iter().map(move |&s| (a, s)))
                .map(|(a, s)| g.conj(a, s))
                .filter(|&c| !d.contains(c))
                .collect();
            if extra.is_empty() {
                break;
            }
            d = g.extend_subgroup(&d, &extra);
        }
        let lhs = g.comm(g.mul(x, y), z);
        let rhs = g.mul(g.comm(x, z), g.comm(y, z));
        if !d.contains(g.mul(lhs, g.inv(rhs))) {
            rep.fail(|| format!("x={x} y={y} z={z}"));
        }
    });
    rep.cases = cases;
    rep.with_sampling(true, seed)
}

/// Outcome of the power/commutator congruence check.
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub report: CheckReport,
    /// `[x, [x, ... [x, y]...]]` with `p^n` copies of `x`.
    pub nested: Elem,
    /// `[x^{p^n}, y]`.
    pub power: Elem,
    pub n_order: usize,
    pub n_prime_order: usize,
}

/// The `p^n`-fold nested commutator of `x` with `y` agrees with `[x^{p^n}, y]`
/// modulo `N'`, where `N` is the normal closure of `y`.
pub fn check_power_commutator_congruence(
    g: &FiniteGroup,
    x: Elem,
    y: Elem,
    p: u32,
    n: u32,
    bound: u64,
) -> Result<CongruenceReport> {
    g.check_index(x as usize)?;
    g.check_index(y as usize)?;
    let q = (p as u64).pow(n);
    let mut rep = CheckReport::new(
        "groups.power_commutator_congruence",
        "[x,[x,...[x,y]...]] (p^n copies) = [x^{p^n}, y] mod N'",
    );
    if q > bound {
        rep.outcome = crate::report::Outcome::Skipped;
        rep.reason = Some(format!("p^n = {q} exceeds the bound {bound}"));
        return Ok(CongruenceReport {
            report: rep,
            nested: 0,
            power: 0,
            n_order: 0,
            n_prime_order: 0,
        });
    }
    let big_n = g.normal_closure(&[y]);
    let np = g.n_prime(&big_n, p as u64)?;
    let mut nested = y;
    for _ in 0..q {
        nested = g.comm(x, nested);
    }
    let power = g.comm(g.pow(x, q), y);
    rep.expect(np.contains(g.mul(nested, g.inv(power))), || {
        format!(
            "nested={nested} power={power} not congruent mod N' (|N'|={})",
            np.order()
        )
    });
    Ok(CongruenceReport {
        report: rep,
        nested,
        power,
        n_order: big_n.order(),
        n_prime_order: np.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_commutator_is_central_of_order_p() {
        let g = FiniteGroup::heisenberg(5).unwrap();
        let c = g.commutator(1, 5).unwrap();
        assert_ne!(c, 0);
        assert_eq!(g.element_order(c), 5);
        assert!(g.center().contains(c));
        assert_eq!(g.center().order(), 5);
        assert_eq!(g.commutator(7, 7).unwrap(), 0);
    }

    #[test]
    fn abelian_commutators_vanish() {
        let g = FiniteGroup::elementary_abelian(5, 2).unwrap();
        for x in 0..25 {
            for y in 0..25 {
                assert_eq!(g.commutator(x, y).unwrap(), 0);
            }
        }
        assert!(g.commutator(25, 0).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(FiniteGroup::cyclic(5).unwrap().exponent(), 5);
        assert_eq!(FiniteGroup::heisenberg(5).unwrap().exponent(), 5);
        let m = FiniteGroup::modular(5).unwrap();
        assert_eq!(m.exponent(), 25);
        assert_eq!(m.element_order(1), 25);
        assert!(m.is_p_group(5));
        assert!(!FiniteGroup::symmetric(3).unwrap().is_p_group(3));
    }

    #[test]
    fn modular_relation() {
        let g = FiniteGroup::modular(5).unwrap();
        let (x, y) = (1, 25);
        assert_eq!(g.conj(x, y), g.pow(x, 6));
        assert_eq!(g.element_order(y), 5);
        assert_eq!(g.derived_subgroup().order(), 5);
    }

    #[test]
    fn lagrange_spot_check() {
        for g in [
            FiniteGroup::symmetric(3).unwrap(),
            FiniteGroup::modular(5).unwrap(),
            FiniteGroup::cyclic(12).unwrap(),
        ] {
            for a in 0..g.order() as Elem {
                assert_eq!(g.order() as u64 % g.element_order(a), 0);
            }
        }
    }

    #[test]
    fn hall_identity_s3_exhaustive() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let r = check_hall_identity(&g, &SweepPolicy::default());
        assert!(r.passed());
        assert_eq!(r.cases, 216);
        assert!(!r.sampled);
    }

    #[test]
    fn hall_identity_heisenberg_sampled() {
        let g = FiniteGroup::heisenberg(5).unwrap();
        let r = check_hall_identity(&g, &SweepPolicy::sampled(10_000, 7));
        assert!(r.passed());
        assert!(r.sampled);
        assert_eq!(r.seed, Some(7));
        assert_eq!(r.cases, 10_000);
    }

    #[test]
    fn bilinearity_surrogate() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert!(check_commutator_bilinearity(&g, 200, 3).passed());
        let g = FiniteGroup::modular(5).unwrap();
        assert!(check_commutator_bilinearity(&g, 200, 3).passed());
    }

    #[test]
    fn normal_closure_and_n_prime() {
        let h = FiniteGroup::heisenberg(5).unwrap();
        assert!(h.normal_closure(&[0]).is_trivial());
        let np = h.n_prime(&h.whole(), 5).unwrap();
        assert_eq!(np.order(), 5);
        assert_eq!(np.elements(), h.center().elements());
        let c5 = FiniteGroup::cyclic(5).unwrap();
        assert!(c5.n_prime(&c5.whole(), 5).unwrap().is_trivial());
        // <(0 1)> in S3 is not normal
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let sub = s3.subgroup(&[t]);
        assert!(s3.n_prime(&sub, 3).is_err());
        assert_eq!(s3.normal_closure(&[t]).order(), 6);
    }

    #[test]
    fn subgroup_from_elements_rejects_non_subgroups() {
        let g = FiniteGroup::cyclic(6).unwrap();
        assert!(g.subgroup_from_elements(&[0, 2, 4]).is_ok());
        assert!(g.subgroup_from_elements(&[0, 1]).is_err());
        assert!(g.subgroup_from_elements(&[2, 4]).is_err());
    }

    #[test]
    fn congruence_cases() {
        let c = FiniteGroup::elementary_abelian(5, 2).unwrap();
        let r = check_power_commutator_congruence(&c, 1, 5, 5, 1, 25).unwrap();
        assert!(r.report.passed());
        assert_eq!((r.nested, r.power), (0, 0));

        let h = FiniteGroup::heisenberg(5).unwrap();
        let r = check_power_commutator_congruence(&h, 1, 5, 5, 1, 25).unwrap();
        assert!(r.report.passed());
        assert_eq!((r.nested, r.power), (0, 0));

        // modular group with the roles swapped: x -> y, y -> x
        let m = FiniteGroup::modular(5).unwrap();
        let r = check_power_commutator_congruence(&m, 25, 1, 5, 1, 25).unwrap();
        assert!(r.report.passed());

        let r = check_power_commutator_congruence(&m, 25, 1, 5, 2, 5).unwrap();
        assert_eq!(r.report.outcome, crate::report::Outcome::Skipped);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        // Latin square with identity that is not associative (order 5 loop)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(t), Err(Error::InvalidGroup(_))));
        let caps = Caps {
            max_group_order: 4,
            ..Caps::default()
        };
        let c5 = FiniteGroup::cyclic(5).unwrap().table();
        assert!(matches!(
            FiniteGroup::from_table_with_caps(c5, &caps),
            Err(Error::OrderCap { order: 5, cap: 4 })
        ));
    }

    #[test]
    fn central_triples_of_heisenberg() {
        let q = FiniteGroup::heisenberg(5).unwrap();
        let g = FiniteGroup::central_triples(&q).unwrap();
        assert_eq!(g.order(), 15625);
        assert!(g.is_p_group(5));
        // associativity on sampled triples
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let (a, b, c) = (
                rng.random_range(0..15625u32),
                rng.random_range(0..15625u32),
                rng.random_range(0..15625u32),
            );
            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        assert_eq!(g.subgroup(g.generators()).order(), 15625);
        assert!(!g.has_table());
        // S3 has a noncentral derived subgroup
        assert!(FiniteGroup::central_triples(&FiniteGroup::symmetric(3).unwrap()).is_err());
    }

    #[test]
    fn group_map_checks() {
        let g = FiniteGroup::cyclic(5).unwrap();
        let double = GroupMap::from_fn(&g, |x| (2 * x) % 5).unwrap();
        assert!(double.homomorphism_violation(&g).is_none());
        assert_eq!(double.power(4), GroupMap::identity(5));
        let swap = GroupMap::new(&g, vec![0, 2, 1, 3, 4]).unwrap();
        assert!(swap.homomorphism_violation(&g).is_some());
        assert!(GroupMap::new(&g, vec![0, 0, 1, 2, 3]).is_err());
    }
}
