//! Truncated free Malcev algebras `M(m)` over F_p and their Engel quotients,
//! computed one multidegree at a time as (monomials) / (relations).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{rank, Fp, FpMatrix};

/// Nonassociative monomial on generators `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Monomial {
    Gen(usize),
    Prod(Box<Monomial>, Box<Monomial>),
}

impl Monomial {
    pub fn degree(&self) -> usize {
        match self {
            Monomial::Gen(_) => 1,
            Monomial::Prod(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn multidegree(&self, m: usize) -> Vec<usize> {
        let mut d = vec![0; m];
        self.add_multidegree(&mut d);
        d
    }

    fn add_multidegree(&self, d: &mut [usize]) {
        match self {
            Monomial::Gen(i) => d[*i] += 1,
            Monomial::Prod(a, b) => {
                a.add_multidegree(d);
                b.add_multidegree(d);
            }
        }
    }

    fn encode(&self, out: &mut Vec<u32>) {
        match self {
            Monomial::Gen(i) => out.push(*i as u32 + 2),
            Monomial::Prod(a, b) => {
                out.push(0);
                a.encode(out);
                b.encode(out);
                out.push(1);
            }
        }
    }

    fn key(&self) -> (usize, Vec<u32>) {
        let mut v = Vec::new();
        self.encode(&mut v);
        (self.degree(), v)
    }

    /// Canonical `u v`: the smaller factor first, with the sign of the swap;
    /// `None` when `u = v`.
    pub fn product(u: &Monomial, v: &Monomial) -> Option<(bool, Monomial)> {
        match u.key().cmp(&v.key()) {
            Ordering::Equal => None,
            Ordering::Less => Some((false, Monomial::Prod(Box::new(u.clone()), Box::new(v.clone())))),
            Ordering::Greater => Some((true, Monomial::Prod(Box::new(v.clone()), Box::new(u.clone())))),
        }
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Monomial::Gen(i) => write!(f, "x{}", i + 1),
            Monomial::Prod(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Sparse element of the free anticommutative algebra.
pub type Poly = BTreeMap<Monomial, u32>;

/// Monomial bases and multiplication of the free anticommutative algebra on `m` generators.
pub struct FreeAnticommutative {
    m: usize,
    field: Fp,
    bases: HashMap<Vec<usize>, Vec<Monomial>>,
}

/// Nonzero `alpha <= gamma` componentwise, excluding `gamma`.
fn proper_parts(gamma: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &g in gamma {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=g).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|a| a.iter().sum::<usize>() > 0 && a.as_slice() != gamma);
    out
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl FreeAnticommutative {
    pub fn new(m: usize, p: u32) -> Result<Self> {
        Ok(FreeAnticommutative {
            m,
            field: Fp::new(p)?,
            bases: HashMap::new(),
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn gens(&self) -> usize {
        self.m
    }

    /// Canonical monomials of multidegree `gamma`, sorted.
    pub fn monomials(&mut self, gamma: &[usize]) -> Vec<Monomial> {
        if let Some(b) = self.bases.get(gamma) {
            return b.clone();
        }
        let total: usize = gamma.iter().sum();
        let mut out: Vec<Monomial> = Vec::new();
        if total == 1 {
            out.push(Monomial::Gen(gamma.iter().position(|&g| g == 1).unwrap()));
        } else if total > 1 {
            for alpha in proper_parts(gamma) {
                let beta = minus(gamma, &alpha);
                let a = self.monomials(&alpha);
                let b = self.monomials(&beta);
                for u in &a {
                    for v in &b {
                        if let Some((_, w)) = Monomial::product(u, v) {
                            out.push(w);
                        }
                    }
                }
            }
            out.sort();
            out.dedup();
        }
        self.bases.insert(gamma.to_vec(), out.clone());
        out
    }

    pub fn mul(&self, u: &Poly, v: &Poly) -> Poly {
        let f = self.field;
        let mut out = Poly::new();
        for (a, &c) in u {
            for (b, &d) in v {
                if let Some((neg, w)) = Monomial::product(a, b) {
                    let k = f.mul(c, d);
                    let k = if neg { f.neg(k) } else { k };
                    let e = out.entry(w).or_insert(0);
                    *e = f.add(*e, k);
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn add(&self, u: &Poly, v: &Poly) -> Poly {
        let mut out = u.clone();
        for (w, &c) in v {
            let e = out.entry(w.clone()).or_insert(0);
            *e = self.field.add(*e, c);
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn sub(&self, u: &Poly, v: &Poly) -> Poly {
        let neg: Poly = v.iter().map(|(w, &c)| (w.clone(), self.field.neg(c))).collect();
        self.add(u, &neg)
    }

    /// Coordinates of a homogeneous element in the sorted monomial basis of `gamma`.
    pub fn coordinates(&mut self, gamma: &[usize], u: &Poly) -> Vec<u32> {
        let basis = self.monomials(gamma);
        let mut v = vec![0; basis.len()];
        for (w, &c) in u {
            let i = basis.binary_search(w).expect("monomial of the right multidegree");
            v[i] = c;
        }
        v
    }
}

pub fn mono(w: &Monomial) -> Poly {
    Poly::from([(w.clone(), 1)])
}

/// `(xy)(xz) - ((xy)z)x - ((yz)x)x - ((zx)x)y`.
fn malcev_poly(a: &FreeAnticommutative, x: &Poly, y: &Poly, z: &Poly) -> Poly {
    let xy = a.mul(x, y);
    let lhs = a.mul(&xy, &a.mul(x, z));
    let t1 = a.mul(&a.mul(&xy, z), x);
    let t2 = a.mul(&a.mul(&a.mul(y, z), x), x);
    let t3 = a.mul(&a.mul(&a.mul(z, x), x), y);
    a.sub(&a.sub(&a.sub(&lhs, &t1), &t2), &t3)
}

fn malcev_poly_linear(a: &FreeAnticommutative, x1: &Poly, x2: &Poly, y: &Poly, z: &Poly) -> Poly {
    let s = a.add(x1, x2);
    a.sub(
        &a.sub(&malcev_poly(a, &s, y, z), &malcev_poly(a, x1, y, z)),
        &malcev_poly(a, x2, y, z),
    )
}

/// Engel relations: `q` nested left multiplications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EngelSpec {
    pub p: u32,
    pub n: u32,
}

impl EngelSpec {
    pub fn length(&self) -> usize {
        (self.p as usize).pow(self.n)
    }
}

/// Relation spaces per multidegree, built bottom-up so that each one is
/// closed under multiplication by every monomial of complementary degree.
pub struct RelationEngine {
    alg: FreeAnticommutative,
    engel: Option<EngelSpec>,
    rows: HashMap<Vec<usize>, Vec<Vec<u32>>>,
    /// Reverse the order in which relation rows are generated (rank is unaffected).
    pub reverse_order: bool,
}

/// Ordered tuples of nonzero multidegrees summing to `gamma`.
fn compositions(gamma: &[usize], parts: usize) -> Vec<Vec<Vec<usize>>> {
    if parts == 1 {
        return if gamma.iter().sum::<usize>() > 0 {
            vec![vec![gamma.to_vec()]]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for a in proper_parts(gamma) {
        for mut rest in compositions(&minus(gamma, &a), parts - 1) {
            rest.insert(0, a.clone());
            out.push(rest);
        }
    }
    out
}

impl RelationEngine {
    pub fn new(m: usize, p: u32, engel: Option<EngelSpec>) -> Result<Self> {
        if p <= 3 {
            return Err(Error::Format(format!("characteristic {p} must exceed 3")));
        }
        if let Some(e) = engel {
            if e.p != p {
                return Err(Error::ModulusMismatch(e.p, p));
            }
        }
        Ok(RelationEngine {
            alg: FreeAnticommutative::new(m, p)?,
            engel,
            rows: HashMap::new(),
            reverse_order: false,
        })
    }

    pub fn algebra(&mut self) -> &mut FreeAnticommutative {
        &mut self.alg
    }

    /// Rows spanning the relations in multidegree `gamma`.
    pub fn relation_rows(&mut self, gamma: &[usize]) -> Vec<Vec<u32>> {
        if let Some(r) = self.rows.get(gamma) {
            return r.clone();
        }
        let total: usize = gamma.iter().sum();
        let mut polys: Vec<Poly> = Vec::new();
        if total >= 4 {
            // substitutions into the linearized and the plain identity
            for parts in compositions(gamma, 4) {
                let b: Vec<Vec<Monomial>> = parts.iter().map(|d| self.alg.monomials(d)).collect();
                for x1 in &b[0] {
                    for x2 in &b[1] {
                        for y in &b[2] {
                            for z in &b[3] {
                                polys.push(malcev_poly_linear(&self.alg, &mono(x1), &mono(x2), &mono(y), &mono(z)));
                            }
                        }
                    }
                }
            }
            for parts in compositions(gamma, 3) {
                let twice: Vec<usize> = parts[0].iter().map(|&c| 2 * c).collect();
                let Some(rest) = gamma
                    .iter()
                    .zip(&twice)
                    .map(|(g, t)| g.checked_sub(*t))
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                if parts[1].iter().zip(&parts[2]).map(|(a, b)| a + b).collect::<Vec<_>>() != rest {
                    continue;
                }
                let bx = self.alg.monomials(&parts[0]);
                let by = self.alg.monomials(&parts[1]);
                let bz = self.alg.monomials(&parts[2]);
                for x in &bx {
                    for y in &by {
                        for z in &bz {
                            polys.push(malcev_poly(&self.alg, &mono(x), &mono(y), &mono(z)));
                        }
                    }
                }
            }
        }
        if let Some(e) = self.engel {
            let q = e.length();
            self.engel_relations(gamma, q, &mut polys);
        }
        // ideal closure: lower relations times monomials
        let mut rows: Vec<Vec<u32>> = polys.iter().map(|u| self.alg.coordinates(gamma, u)).collect();
        for alpha in proper_parts(gamma) {
            let beta = minus(gamma, &alpha);
            let lower = self.relation_rows(&alpha);
            if lower.is_empty() {
                continue;
            }
            let ab = self.alg.monomials(&alpha);
            let mb = self.alg.monomials(&beta);
            for r in &lower {
                let u: Poly = ab
                    .iter()
                    .zip(r)
                    .filter(|(_, &c)| c != 0)
                    .map(|(w, &c)| (w.clone(), c))
                    .collect();
                for w in &mb {
                    let prod = self.alg.mul(&u, &mono(w));
                    rows.push(self.alg.coordinates(gamma, &prod));
                }
            }
        }
        rows.retain(|r| r.iter().any(|&c| c != 0));
        if self.reverse_order {
            rows.reverse();
        }
        // keep an echelon basis so that products at higher degrees stay small
        let width = self.alg.monomials(gamma).len();
        let reduced = echelon_rows(self.alg.field(), width, rows);
        self.rows.insert(gamma.to_vec(), reduced.clone());
        reduced
    }

    fn engel_relations(&mut self, gamma: &[usize], q: usize, polys: &mut Vec<Poly>) {
        // a(a(...(a b))) with the symmetrized form over monomial tuples
        for parts in compositions(gamma, 2) {
            let (b_deg, a_total) = (&parts[1], &parts[0]);
            // split a_total into q nonzero multidegrees, as a multiset
            for split in compositions(a_total, q) {
                let mut sorted = split.clone();
                sorted.sort();
                if sorted != split {
                    continue;
                }
                let bases: Vec<Vec<Monomial>> = split.iter().map(|d| self.alg.monomials(d)).collect();
                let bs = self.alg.monomials(b_deg);
                for choice in monomial_choices(&bases, &split) {
                    for b in &bs {
                        polys.push(self.symmetrized_left(&choice, b));
                    }
                }
            }
        }
    }

    /// `sum over orderings pi of a_pi1 (a_pi2 (... (a_piq b)))`.
    fn symmetrized_left(&self, a: &[Monomial], b: &Monomial) -> Poly {
        let mut acc = Poly::new();
        for perm in permutations(a.len()) {
            let mut cur = mono(b);
            for &i in perm.iter().rev() {
                cur = self.alg.mul(&mono(&a[i]), &cur);
            }
            acc = self.alg.add(&acc, &cur);
        }
        acc
    }

    /// Dimension of the quotient in multidegree `gamma`.
    pub fn quotient_dim(&mut self, gamma: &[usize]) -> (usize, usize) {
        let n = self.alg.monomials(gamma).len();
        let r = self.relation_rows(gamma).len();
        (n, n - r)
    }
}

/// Nondecreasing monomial choices for a sorted list of multidegrees, so that
/// each multiset of monomials appears once.
fn monomial_choices(bases: &[Vec<Monomial>], degs: &[Vec<usize>]) -> Vec<Vec<Monomial>> {
    let mut out = vec![(Vec::new(), 0usize)];
    for (k, b) in bases.iter().enumerate() {
        let mut next = Vec::new();
        for (pre, last) in out {
            let same = k > 0 && degs[k] == degs[k - 1];
            let start = if same { last } else { 0 };
            for (i, w) in b.iter().enumerate().skip(start) {
                let mut v: Vec<Monomial> = pre.clone();
                v.push(w.clone());
                next.push((v, i));
            }
        }
        out = next;
    }
    out.into_iter().map(|(v, _)| v).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in out {
            for at in 0..=p.len() {
                let mut q = p.clone();
                q.insert(at, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn echelon_rows(f: Fp, width: usize, rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let s = crate::linalg::Subspace::from_vectors(f, width, rows);
    s.basis().to_vec()
}

/// Matrix whose rows span the relations in multidegree `gamma`.
pub fn malcev_relation_matrix(m: usize, gamma: &[usize], p: u32) -> Result<FpMatrix> {
    if gamma.len() != m {
        return Err(Error::DimensionMismatch(gamma.len(), m));
    }
    let mut e = RelationEngine::new(m, p, None)?;
    let width = e.algebra().monomials(gamma).len();
    let rows = e.relation_rows(gamma);
    FpMatrix::from_residue_rows(Fp::new(p)?, width, &rows)
}

pub fn enumerate_monomials(m: usize, gamma: &[usize], caps: &Caps) -> Result<Vec<Monomial>> {
    if gamma.len() != m {
        return Err(Error::DimensionMismatch(gamma.len(), m));
    }
    caps.check_degree(gamma.iter().sum())?;
    Ok(FreeAnticommutative::new(m, 5)?.monomials(gamma))
}

fn mobius(mut n: usize) -> i64 {
    let mut r = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            r = -r;
        }
        d += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Dimension of the free Lie algebra in multidegree `gamma` (Witt's formula).
pub fn witt(gamma: &[usize]) -> u64 {
    let total: usize = gamma.iter().sum();
    if total == 0 {
        return 0;
    }
    let g = gamma.iter().fold(0, |a, &b| crate::groups::gcd(a, b as u64)) as usize;
    let mut sum: i128 = 0;
    for d in 1..=g {
        if !g.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let mut term = factorial(total / d);
        for &c in gamma {
            term /= factorial(c / d);
        }
        sum += mu as i128 * term as i128;
    }
    (sum / total as i128) as u64
}

/// Multidegrees of `m` variables with total degree `d`, lexicographically descending.
pub fn multidegrees(m: usize, d: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in multidegrees(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimCell {
    pub multidegree: Vec<usize>,
    pub monomials: usize,
    pub dim: usize,
    pub witt: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimTable {
    pub m: usize,
    pub p: u32,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engel: Option<EngelSpec>,
    pub cells: Vec<DimCell>,
    /// Total dimension in each degree `1..=max_degree`.
    pub totals: Vec<usize>,
}

impl DimTable {
    pub fn cell(&self, gamma: &[usize]) -> Option<&DimCell> {
        self.cells.iter().find(|c| c.multidegree == gamma)
    }

    /// Every component of the top computed degree is zero.
    pub fn top_degree_vanishes(&self) -> bool {
        self.totals.last() == Some(&0)
    }

    pub fn dominates_witt(&self) -> bool {
        self.cells.iter().all(|c| c.dim as u64 >= c.witt)
    }

    /// Cellwise `self <= other` over the common cells.
    pub fn bounded_by(&self, other: &DimTable) -> bool {
        self.cells
            .iter()
            .all(|c| other.cell(&c.multidegree).is_none_or(|o| c.dim <= o.dim))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let title = match self.engel {
            Some(e) => format!("M({}, {}^{}) over F_{}", self.m, e.p, e.n, self.p),
            None => format!("M({}) over F_{}", self.m, self.p),
        };
        s.push_str(&title);
        s.push('\n');
        s.push_str(&format!(
            "{:<14} {:>9} {:>6} {:>6}\n",
            "multidegree", "monomials", "dim", "witt"
        ));
        for c in &self.cells {
            let md = format!("{:?}", c.multidegree);
            s.push_str(&format!("{md:<14} {:>9} {:>6} {:>6}\n", c.monomials, c.dim, c.witt));
        }
        let totals: Vec<String> = self.totals.iter().map(usize::to_string).collect();
        s.push_str(&format!("totals by degree: {}\n", totals.join(", ")));
        s
    }
}

fn build_table(
    m: usize,
    p: u32,
    max_degree: usize,
    engel: Option<EngelSpec>,
    caps: &Caps,
    reverse: bool,
) -> Result<DimTable> {
    caps.check_degree(max_degree)?;
    if m == 0 {
        return Err(Error::Format("need at least one generator".into()));
    }
    if let Some(e) = engel {
        caps.check_perm(e.length())?;
    }
    let mut eng = RelationEngine::new(m, p, engel)?;
    eng.reverse_order = reverse;
    let mut cells = Vec::new();
    let mut totals = Vec::new();
    for d in 1..=max_degree {
        let mut total = 0;
        for gamma in multidegrees(m, d) {
            let (n, dim) = eng.quotient_dim(&gamma);
            total += dim;
            cells.push(DimCell {
                witt: witt(&gamma),
                multidegree: gamma,
                monomials: n,
                dim,
            });
        }
        totals.push(total);
    }
    Ok(DimTable {
        m,
        p,
        max_degree,
        engel,
        cells,
        totals,
    })
}

/// Graded dimensions of `M(m)` over F_p through `max_degree`.
pub fn free_malcev_dims(m: usize, p: u32, max_degree: usize, caps: &Caps) -> Result<DimTable> {
    build_table(m, p, max_degree, None, caps, false)
}

/// Graded dimensions of `M(m)/I` for the Engel ideal `I` of length `p^n`.
pub fn engel_quotient_dims(m: usize, p: u32, n: u32, max_degree: usize, caps: &Caps) -> Result<DimTable> {
    build_table(m, p, max_degree, Some(EngelSpec { p, n }), caps, false)
}

/// Same tables with relation rows generated in reverse order.
pub fn dims_reversed(m: usize, p: u32, max_degree: usize, engel: Option<EngelSpec>, caps: &Caps) -> Result<DimTable> {
    build_table(m, p, max_degree, engel, caps, true)
}

/// Whether `w` lies in the relation space of the Engel quotient.
pub fn vanishes_in_quotient(m: usize, p: u32, n: u32, w: &Monomial) -> Result<bool> {
    let mut eng = RelationEngine::new(m, p, Some(EngelSpec { p, n }))?;
    let gamma = w.multidegree(m);
    let width = eng.algebra().monomials(&gamma).len();
    let rows = eng.relation_rows(&gamma);
    let target = eng.algebra().coordinates(&gamma, &mono(w));
    let before = rows.len();
    let mut all = rows;
    all.push(target);
    let f = Fp::new(p)?;
    Ok(rank(&FpMatrix::from_residue_rows(f, width, &all)?) == before)
}

/// `x_a (x_a (... (x_a x_b)))` with `k` factors of `x_a`.
pub fn left_engel_monomial(a: usize, b: usize, k: usize) -> Option<(bool, Monomial)> {
    let mut cur = Monomial::Gen(b);
    let mut neg = false;
    for _ in 0..k {
        let (s, w) = Monomial::product(&Monomial::Gen(a), &cur)?;
        neg ^= s;
        cur = w;
    }
    Some((neg, cur))
}
