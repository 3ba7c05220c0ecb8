//! Malcev algebras by structure constants, the algebra `H = {x : sigma(x) = -x}`
//! of a Lie algebra with triality under `a * b = [a + 2 rho(a), b]`, and the
//! identity, Engel and series checks that live on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graded_lie::{LieAlgebra, LieTriality};
use crate::linalg::{is_zero, kernel, Fp, FpMatrix, Subspace};
use crate::report::{CheckReport, Report};

#[derive(Clone, Debug)]
pub struct MalcevAlgebra {
    field: Fp,
    dim: usize,
    /// `consts[(i * dim + j) * dim + k]` is the `e_k` coefficient of `e_i * e_j`.
    consts: Vec<u32>,
    degrees: Option<Vec<usize>>,
    /// Basis of `H` as vectors of the ambient Lie algebra.
    embedding: Option<Vec<Vec<u32>>>,
}

impl MalcevAlgebra {
    /// Anticommutative algebra with `e_i * e_j = v` for each listed `(i, j, v)`.
    pub fn from_products(p: u32, dim: usize, products: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        let lie = LieAlgebra::from_brackets(p, dim, products)?;
        Ok(Self::from_lie(&lie))
    }

    /// A Lie algebra read as a Malcev algebra.
    pub fn from_lie(l: &LieAlgebra) -> Self {
        let n = l.dim();
        let mut consts = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                consts.extend_from_slice(l.basis_bracket(i, j));
            }
        }
        MalcevAlgebra {
            field: l.field(),
            dim: n,
            consts,
            degrees: l.degrees().map(|d| d.to_vec()),
            embedding: None,
        }
    }

    /// Raw table, `table[i][j]` = coordinates of `e_i * e_j`; anticommutativity is not enforced.
    pub fn from_table(p: u32, table: &[Vec<Vec<i64>>]) -> Result<Self> {
        let field = Fp::new(p)?;
        let n = table.len();
        let mut consts = Vec::with_capacity(n * n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            for v in row {
                if v.len() != n {
                    return Err(Error::DimensionMismatch(v.len(), n));
                }
                consts.extend(v.iter().map(|&c| field.from_i64(c)));
            }
        }
        Ok(MalcevAlgebra {
            field,
            dim: n,
            consts,
            degrees: None,
            embedding: None,
        })
    }

    pub fn zero(p: u32) -> Result<Self> {
        Self::from_products(p, 0, &[])
    }

    /// `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2`: simple, not nilpotent.
    pub fn cross_product(p: u32) -> Result<Self> {
        Self::from_products(
            p,
            3,
            &[(0, 1, vec![0, 0, 1]), (1, 2, vec![1, 0, 0]), (2, 0, vec![0, 1, 0])],
        )
    }

    pub fn with_degrees(mut self, degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() != self.dim {
            return Err(Error::DimensionMismatch(degrees.len(), self.dim));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degrees(&self) -> Option<&[usize]> {
        self.degrees.as_deref()
    }

    pub fn embedding(&self) -> Option<&[Vec<u32>]> {
        self.embedding.as_deref()
    }

    /// `dim H_d` for `d = 1..=top`.
    pub fn degree_dims(&self) -> Vec<usize> {
        let Some(deg) = &self.degrees else {
            return Vec::new();
        };
        let top = deg.iter().copied().max().unwrap_or(0);
        (1..=top).map(|d| deg.iter().filter(|&&e| e == d).count()).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let at = (i * self.dim + j) * self.dim;
        &self.consts[at..at + self.dim]
    }

    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b != 0 {
                    f.axpy(&mut out, f.mul(a, b), self.basis_product(i, j));
                }
            }
        }
        out
    }

    /// Matrix of `h -> a * h`.
    pub fn star_operator(&self, a: &[u32]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p(), self.dim, self.dim).expect("prime");
        for j in 0..self.dim {
            for (i, c) in self.mul(a, &self.unit(j)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().all(|&c| c == 0)
    }

    /// `H` coordinates to ambient Lie coordinates.
    pub fn embed(&self, coords: &[u32]) -> Option<Vec<u32>> {
        let emb = self.embedding.as_ref()?;
        let n = emb.first().map_or(0, Vec::len);
        let mut v = vec![0; n];
        for (row, &c) in emb.iter().zip(coords) {
            self.field.axpy(&mut v, c, row);
        }
        Some(v)
    }

    /// Homogeneous basis vectors grouped with their degree; degree 1 throughout when ungraded.
    fn homogeneous_basis(&self) -> Vec<(usize, Vec<u32>)> {
        (0..self.dim)
            .map(|i| (self.degrees.as_ref().map_or(1, |d| d[i]), self.unit(i)))
            .collect()
    }

    fn full(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    /// `span{a * b : a in A, b in B}`.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.field, self.dim);
        for u in a.basis() {
            for v in b.basis() {
                s.insert(self.mul(u, v));
            }
        }
        s
    }
}

/// `{x : sigma(x) = -x}`, with a homogeneous basis when `t` is graded.
pub fn sigma_negated_subspace(t: &LieTriality) -> Subspace {
    let l = t.lie();
    let n = l.dim();
    let f = l.field();
    let id = FpMatrix::identity(l.p(), n).expect("prime");
    let s_plus = t.sigma().add(&id).expect("square");
    let Some(deg) = l.degrees() else {
        return kernel(&s_plus);
    };
    let preserves = (0..n).all(|j| {
        let v = t.sigma().apply(&l.unit(j));
        is_zero(&v) || l.degree_of(&v) == Some(deg[j])
    });
    if !preserves {
        return kernel(&s_plus);
    }
    let mut out = Subspace::zero(f, n);
    for d in 1..=l.top_degree() {
        let idx = l.degree_indices(d);
        if idx.is_empty() {
            continue;
        }
        let rows: Vec<Vec<u32>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| s_plus.get(r, c)).collect())
            .collect();
        let block = FpMatrix::from_residue_rows(f, idx.len(), &rows).expect("shape");
        for v in kernel(&block).basis() {
            let mut w = vec![0; n];
            for (k, &i) in idx.iter().enumerate() {
                w[i] = v[k];
            }
            out.insert(w);
        }
    }
    out
}

/// `H` with `a * b = [a + 2 rho(a), b]`; fails with [`Error::NotClosed`] if `H * H` leaves `H`.
pub fn extract_h(t: &LieTriality) -> Result<MalcevAlgebra> {
    let l = t.lie();
    let h = sigma_negated_subspace(t);
    let alpha = t.alpha();
    let basis = h.basis().to_vec();
    let k = basis.len();
    let mut consts = Vec::with_capacity(k * k * k);
    for (i, a) in basis.iter().enumerate() {
        let aa = alpha.apply(a);
        for (j, b) in basis.iter().enumerate() {
            let v = l.bracket(&aa, b);
            let c = h
                .coordinates(&v)
                .ok_or_else(|| Error::NotClosed(format!("h{i} * h{j} is not in H")))?;
            consts.extend(c);
        }
    }
    let degrees = l.degrees().map(|deg| {
        basis
            .iter()
            .map(|v| {
                l.degree_of(v)
                    .unwrap_or_else(|| deg[v.iter().position(|&c| c != 0).unwrap()])
            })
            .collect()
    });
    Ok(MalcevAlgebra {
        field: l.field(),
        dim: k,
        consts,
        degrees,
        embedding: Some(basis),
    })
}

/// `(xy)(xz) - ((xy)z)x - ((yz)x)x - ((zx)x)y`.
fn malcev_defect(m: &MalcevAlgebra, x: &[u32], y: &[u32], z: &[u32]) -> Vec<u32> {
    let f = m.field();
    let xy = m.mul(x, y);
    let lhs = m.mul(&xy, &m.mul(x, z));
    let t1 = m.mul(&m.mul(&xy, z), x);
    let t2 = m.mul(&m.mul(&m.mul(y, z), x), x);
    let t3 = m.mul(&m.mul(&m.mul(z, x), x), y);
    f.sub_vec(&f.sub_vec(&f.sub_vec(&lhs, &t1), &t2), &t3)
}

/// Part of the defect bilinear in the two copies of `x`.
fn malcev_defect_linear(m: &MalcevAlgebra, x1: &[u32], x2: &[u32], y: &[u32], z: &[u32]) -> Vec<u32> {
    let f = m.field();
    let s = f.add_vec(x1, x2);
    f.sub_vec(
        &f.sub_vec(&malcev_defect(m, &s, y, z), &malcev_defect(m, x1, y, z)),
        &malcev_defect(m, x2, y, z),
    )
}

/// Anticommutativity on basis pairs and the Malcev identity, both in its
/// linearized form on basis 4-tuples and as stated on basis triples.
pub fn check_malcev_identities(m: &MalcevAlgebra) -> Report {
    let f = m.field();
    let n = m.dim();
    let mut rep = Report::default();
    let mut c = CheckReport::new("malcev.anticommutative", "xy = -yx");
    for i in 0..n {
        c.expect(is_zero(m.basis_product(i, i)), || format!("e{i} e{i} != 0"));
        for j in i + 1..n {
            let s = f.add_vec(m.basis_product(i, j), m.basis_product(j, i));
            c.expect(is_zero(&s), || format!("i={i} j={j}"));
        }
    }
    rep.push(c);
    let mut c = CheckReport::new(
        "malcev.identity_linearized",
        "(xy)(xz) = ((xy)z)x + ((yz)x)x + ((zx)x)y, linearized in x",
    );
    for a in 0..n {
        for b in a..n {
            for y in 0..n {
                for z in 0..n {
                    let d = malcev_defect_linear(m, &m.unit(a), &m.unit(b), &m.unit(y), &m.unit(z));
                    c.expect(is_zero(&d), || format!("x1=e{a} x2=e{b} y=e{y} z=e{z}"));
                }
            }
        }
    }
    rep.push(c);
    let mut c = CheckReport::new("malcev.identity", "(xy)(xz) = ((xy)z)x + ((yz)x)x + ((zx)x)y");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let d = malcev_defect(m, &m.unit(x), &m.unit(y), &m.unit(z));
                c.expect(is_zero(&d), || format!("x=e{x} y=e{y} z=e{z}"));
            }
        }
    }
    rep.push(c);
    rep
}

fn embedding_of(h: &MalcevAlgebra) -> Result<&[Vec<u32>]> {
    h.embedding()
        .ok_or_else(|| Error::Format("H carries no embedding into a Lie algebra".into()))
}

/// The identities linking `*` to the Lie bracket, on all basis triples of `H`:
/// `3[[a,b],c] = 2(a*b)*c + (c*b)*a + (a*c)*b`,
/// `(x*y)*z = 2[[rho^2 x, rho y], z] + [[x,y],z]`,
/// `[rho x, y] = [x, rho y]`, and
/// `(x*y)*z + (y*z)*x + (z*x)*y = 6[[rho^2 x, rho y], z]`.
pub fn check_bridge_identities(t: &LieTriality, h: &MalcevAlgebra) -> Result<Report> {
    let emb = embedding_of(h)?;
    let l = t.lie();
    let f = l.field();
    let alpha = t.alpha();
    let r = t.rho();
    let r2 = t.rho_inverse();
    let star = |u: &[u32], v: &[u32]| l.bracket(&alpha.apply(u), v);
    let br = |u: &[u32], v: &[u32]| l.bracket(u, v);
    let n = emb.len();
    let mut c1 = CheckReport::new("bridge.bracket_from_star", "3[[a,b],c] = 2(a*b)*c + (c*b)*a + (a*c)*b");
    let mut c2 = CheckReport::new("bridge.star_square", "(x*y)*z = 2[[x^rho2, y^rho], z] + [[x,y],z]");
    let mut c3 = CheckReport::new("bridge.rho_transfer", "[x^rho, y] = [x, y^rho]");
    let mut c4 = CheckReport::new(
        "bridge.star_jacobian",
        "(x*y)*z + (y*z)*x + (z*x)*y = 6[[x^rho2, y^rho], z]",
    );
    let mut c5 = CheckReport::new("bridge.star_table", "a*h = [a + 2a^rho, h] matches the H table");
    for i in 0..n {
        let x = &emb[i];
        for j in 0..n {
            let y = &emb[j];
            let ok = br(&r.apply(x), y) == br(x, &r.apply(y));
            c3.expect(ok, || format!("x=h{i} y=h{j}"));
            let tab = h.embed(h.basis_product(i, j)).expect("embedded");
            c5.expect(tab == star(x, y), || format!("a=h{i} h=h{j}"));
            let twist = br(&r2.apply(x), &r.apply(y));
            for k in 0..n {
                let z = &emb[k];
                let lhs = f.scaled(&br(&br(x, y), z), 3);
                let a = f.scaled(&star(&star(x, y), z), 2);
                let b = star(&star(z, y), x);
                let cc = star(&star(x, z), y);
                let rhs = f.add_vec(&f.add_vec(&a, &b), &cc);
                c1.expect(lhs == rhs, || format!("a=h{i} b=h{j} c=h{k}"));

                let xyz = star(&star(x, y), z);
                let rhs = f.add_vec(&f.scaled(&br(&twist, z), 2), &br(&br(x, y), z));
                c2.expect(xyz == rhs, || format!("x=h{i} y=h{j} z=h{k}"));

                let jac = f.add_vec(&f.add_vec(&xyz, &star(&star(y, z), x)), &star(&star(z, x), y));
                c4.expect(jac == f.scaled(&br(&twist, z), 6), || format!("x=h{i} y=h{j} z=h{k}"));
            }
        }
    }
    let mut rep = Report::default();
    for c in [c1, c2, c3, c4, c5] {
        rep.push(c);
    }
    Ok(rep)
}

/// `[a, rho(a)] = 0` on a basis of `H`, and `[a_i, rho a_j] + [a_j, rho a_i] = 0` on basis pairs.
pub fn check_rho_commutation(t: &LieTriality) -> Report {
    let h = sigma_negated_subspace(t);
    let l = t.lie();
    let f = l.field();
    let b = h.basis();
    let ra: Vec<Vec<u32>> = b.iter().map(|v| t.rho().apply(v)).collect();
    let mut diag = CheckReport::new("rho_commutation.diagonal", "[a, a^rho] = 0 for a in H");
    let mut sym = CheckReport::new(
        "rho_commutation.symmetrized",
        "[a_i, a_j^rho] + [a_j, a_i^rho] = 0 for a_i, a_j in H",
    );
    for i in 0..b.len() {
        let v = l.bracket(&b[i], &ra[i]);
        diag.expect(is_zero(&v), || format!("a=h{i}: [a,a^rho] = {v:?}"));
        for j in i + 1..b.len() {
            let v = f.add_vec(&l.bracket(&b[i], &ra[j]), &l.bracket(&b[j], &ra[i]));
            sym.expect(is_zero(&v), || format!("i={i} j={j}: {v:?}"));
        }
    }
    let mut rep = Report::default();
    rep.push(diag);
    rep.push(sym);
    rep
}

/// Sum over all orderings of the product `A_1 ... A_n`, by polarization:
/// `sum_{T nonempty} (-1)^{n-|T|} (sum_{i in T} A_i)^n`.
pub fn symmetrized_product(ops: &[FpMatrix]) -> FpMatrix {
    let n = ops.len();
    let dim = ops.first().map_or(0, FpMatrix::rows);
    let p = ops.first().map_or(2, FpMatrix::p);
    let mut acc = FpMatrix::zeros(p, dim, dim).expect("prime");
    if n == 0 {
        return FpMatrix::identity(p, dim).expect("prime");
    }
    for mask in 1u32..(1 << n) {
        let mut s = FpMatrix::zeros(p, dim, dim).expect("prime");
        for (i, a) in ops.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = s.add(a).expect("square");
            }
        }
        let term = s.pow(n as u64).expect("square");
        let sign_negative = (n as u32 - mask.count_ones()) % 2 == 1;
        acc = if sign_negative { acc.sub(&term) } else { acc.add(&term) }.expect("square");
    }
    acc
}

/// Nondecreasing index tuples of length `k` from `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

fn random_homogeneous(f: Fp, basis: &[(usize, Vec<u32>)], samples: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let mut degrees: Vec<usize> = basis.iter().map(|(d, _)| *d).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Vec::new();
    for d in degrees {
        let same: Vec<&Vec<u32>> = basis.iter().filter(|(e, _)| *e == d).map(|(_, v)| v).collect();
        if same.len() < 2 {
            continue;
        }
        for _ in 0..samples {
            let mut v = vec![0; same[0].len()];
            for b in &same {
                f.axpy(&mut v, rng.random_range(0..f.p()), b);
            }
            out.push(v);
        }
    }
    out
}

/// `ad(a)^q = 0` on the ambient Lie algebra for homogeneous `a in H`, and the
/// symmetrized `q`-fold product of `ad` over basis tuples of `H` vanishes.
pub fn check_lie_engel(
    t: &LieTriality,
    h: &MalcevAlgebra,
    q: usize,
    caps: &Caps,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let emb = embedding_of(h)?;
    let l = t.lie();
    let basis: Vec<(usize, Vec<u32>)> = h
        .homogeneous_basis()
        .into_iter()
        .zip(emb)
        .map(|((d, _), v)| (d, v.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = CheckReport::new("lie_engel.nilpotent", format!("ad(a)^{q} = 0 for homogeneous a in H"));
    let mut probes: Vec<Vec<u32>> = basis.iter().map(|(_, v)| v.clone()).collect();
    let extra = random_homogeneous(l.field(), &basis, samples, &mut rng);
    let sampled = !extra.is_empty();
    probes.extend(extra);
    for a in &probes {
        c.expect(l.ad(a).pow(q as u64)?.is_zero(), || format!("a={a:?}"));
    }
    let mut rep = Report::default();
    rep.push(c.with_sampling(sampled, seed));
    let stmt = format!("sum over S_{q} of ad(a_pi1)...ad(a_pi{q}) = 0 on L");
    if caps.check_perm(q).is_err() {
        rep.push(CheckReport::skipped(
            "lie_engel.symmetrized",
            stmt,
            format!("length {q} exceeds the permutation budget {}", caps.perm_budget),
        ));
    } else {
        let ads: Vec<FpMatrix> = basis.iter().map(|(_, v)| l.ad(v)).collect();
        let mut c = CheckReport::new("lie_engel.symmetrized", stmt);
        for tuple in multisets(ads.len(), q) {
            let ops: Vec<FpMatrix> = tuple.iter().map(|&i| ads[i].clone()).collect();
            c.expect(symmetrized_product(&ops).is_zero(), || format!("tuple {tuple:?}"));
        }
        rep.push(c);
    }
    Ok(rep)
}

/// `ad(alpha a)^{p^k} = ad(a)^{p^k} + 2 rho ad(a)^{p^k} rho^{-1}` for `a in H`,
/// and its symmetrized form on basis tuples. Gated on `[a, rho a] = 0`.
pub fn check_alpha_power(t: &LieTriality, k: u32, caps: &Caps, samples: usize, seed: u64) -> Result<Report> {
    if k == 0 {
        return Err(Error::Format("k must be at least 1".into()));
    }
    let l = t.lie();
    let q = (l.p() as usize).checked_pow(k).unwrap_or(usize::MAX);
    let stmt1 = format!("ad(a + 2a^rho)^{q} = ad(a)^{q} + 2 rho ad(a)^{q} rho^-1");
    let stmt2 = format!("symmetrized {q}-fold form of the same identity");
    let mut rep = Report::default();
    let gate = check_rho_commutation(t);
    if !gate.all_passed() {
        let why = "precondition [a, a^rho] = 0 on H fails";
        rep.push(CheckReport::skipped("alpha_power.single", stmt1, why));
        rep.push(CheckReport::skipped("alpha_power.symmetrized", stmt2, why));
        return Ok(rep);
    }
    let h = sigma_negated_subspace(t);
    let alpha = t.alpha();
    let r = t.rho();
    let rinv = t.rho_inverse();
    let twisted = |m: &FpMatrix| r.mul(m).and_then(|x| x.mul(&rinv)).expect("square").scale(2);
    let mut c = CheckReport::new("alpha_power.single", stmt1);
    let basis: Vec<(usize, Vec<u32>)> = h
        .basis()
        .iter()
        .map(|v| (l.degree_of(v).unwrap_or(1), v.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<Vec<u32>> = basis.iter().map(|(_, v)| v.clone()).collect();
    let extra = random_homogeneous(l.field(), &basis, samples, &mut rng);
    let sampled = !extra.is_empty();
    probes.extend(extra);
    for a in &probes {
        let lhs = l.ad(&alpha.apply(a)).pow(q as u64)?;
        let adq = l.ad(a).pow(q as u64)?;
        let rhs = adq.add(&twisted(&adq))?;
        c.expect(lhs == rhs, || format!("a={a:?}"));
    }
    rep.push(c.with_sampling(sampled, seed));
    if caps.check_perm(q).is_err() {
        rep.push(CheckReport::skipped(
            "alpha_power.symmetrized",
            stmt2,
            format!("length {q} exceeds the permutation budget {}", caps.perm_budget),
        ));
        return Ok(rep);
    }
    let ads: Vec<FpMatrix> = basis.iter().map(|(_, v)| l.ad(v)).collect();
    let ads_alpha: Vec<FpMatrix> = basis.iter().map(|(_, v)| l.ad(&alpha.apply(v))).collect();
    let mut c = CheckReport::new("alpha_power.symmetrized", stmt2);
    for tuple in multisets(ads.len(), q) {
        let pick = |src: &[FpMatrix]| -> Vec<FpMatrix> { tuple.iter().map(|&i| src[i].clone()).collect() };
        let lhs = symmetrized_product(&pick(&ads_alpha));
        let s = symmetrized_product(&pick(&ads));
        let rhs = s.add(&twisted(&s))?;
        c.expect(lhs == rhs, || format!("tuple {tuple:?}"));
    }
    rep.push(c);
    Ok(rep)
}

/// Engel-type hypotheses on a graded Malcev algebra: `ad*(a)^q = 0` for
/// homogeneous `a`, and the symmetrized `q`-fold product of `ad*` vanishes.
pub fn check_engel_hypotheses(m: &MalcevAlgebra, q: usize, caps: &Caps, samples: usize, seed: u64) -> Result<Report> {
    if m.degrees().is_none() {
        return Err(Error::Format("Engel hypotheses need a graded algebra".into()));
    }
    let basis = m.homogeneous_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = CheckReport::new("engel.nilpotent", format!("ad*(a)^{q} = 0 for homogeneous a"));
    let mut probes: Vec<Vec<u32>> = basis.iter().map(|(_, v)| v.clone()).collect();
    let extra = random_homogeneous(m.field(), &basis, samples, &mut rng);
    let sampled = !extra.is_empty();
    probes.extend(extra);
    for a in &probes {
        c.expect(m.star_operator(a).pow(q as u64)?.is_zero(), || format!("a={a:?}"));
    }
    let mut rep = Report::default();
    rep.push(c.with_sampling(sampled, seed));
    let stmt = format!("sum over S_{q} of ad*(a_pi1)...ad*(a_pi{q}) = 0");
    if caps.check_perm(q).is_err() {
        rep.push(CheckReport::skipped(
            "engel.symmetrized",
            stmt,
            format!("length {q} exceeds the permutation budget {}", caps.perm_budget),
        ));
        return Ok(rep);
    }
    let ops: Vec<FpMatrix> = basis.iter().map(|(_, v)| m.star_operator(v)).collect();
    let mut c = CheckReport::new("engel.symmetrized", stmt);
    for tuple in multisets(ops.len(), q) {
        let pick: Vec<FpMatrix> = tuple.iter().map(|&i| ops[i].clone()).collect();
        c.expect(symmetrized_product(&pick).is_zero(), || format!("tuple {tuple:?}"));
    }
    rep.push(c);
    Ok(rep)
}

/// Smallest subspace containing `gens` and closed under `*`.
pub fn generated_subalgebra(m: &MalcevAlgebra, gens: &[Vec<u32>]) -> Subspace {
    let mut s = Subspace::from_vectors(m.field(), m.dim(), gens.iter().cloned());
    loop {
        let b = s.basis().to_vec();
        let mut grew = false;
        for u in &b {
            for v in &b {
                grew |= s.insert(m.mul(u, v));
            }
        }
        if !grew {
            return s;
        }
    }
}

/// Smallest Lie subalgebra of `l` containing `gens`.
pub fn lie_closure(l: &LieAlgebra, gens: &[Vec<u32>]) -> Subspace {
    let mut s = Subspace::from_vectors(l.field(), l.dim(), gens.iter().cloned());
    loop {
        let b = s.basis().to_vec();
        let mut grew = false;
        for (i, u) in b.iter().enumerate() {
            for v in &b[i + 1..] {
                grew |= s.insert(l.bracket(u, v));
            }
        }
        if !grew {
            return s;
        }
    }
}

/// If `L` is generated by `gens` and `alpha(gens)`, then `H` is generated by
/// `gens` under `*`. `gens` are in `H` coordinates.
pub fn check_generation(t: &LieTriality, h: &MalcevAlgebra, gens: &[Vec<u32>]) -> Result<CheckReport> {
    embedding_of(h)?;
    let stmt = "gens generate H under * when gens and alpha(gens) generate L";
    let l = t.lie();
    let alpha = t.alpha();
    let mut lie_gens = Vec::new();
    for g in gens {
        let v = h.embed(g).expect("embedded");
        lie_gens.push(alpha.apply(&v));
        lie_gens.push(v);
    }
    let closure = lie_closure(l, &lie_gens);
    if !closure.is_full() {
        return Ok(CheckReport::skipped(
            "generation.star_closure",
            stmt,
            format!(
                "gens and alpha(gens) span a Lie subalgebra of dim {} < {}",
                closure.dim(),
                l.dim()
            ),
        ));
    }
    let mut c = CheckReport::new("generation.star_closure", stmt);
    let s = generated_subalgebra(h, gens);
    c.expect(s.is_full(), || format!("closure has dim {} < {}", s.dim(), h.dim()));
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `M^1 = M`, `M^k = sum_{i+j=k} M^i M^j`.
    LowerPower,
    /// `M^[0] = M`, `M^[i+1] = I^2 + I^2 M` for `I = M^[i]`.
    SolvableBracket,
    /// `B^(0) = B`, `B^(i+1) = (B^(i))^2`.
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// Dimensions of the terms, starting with the whole algebra.
    pub dims: Vec<usize>,
    pub reaches_zero: bool,
    /// Nilpotency class for the lower power series, solvable length otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
}

fn tilde(m: &MalcevAlgebra, i: &Subspace) -> Subspace {
    let sq = m.product_space(i, i);
    let sqm = m.product_space(&sq, &m.full());
    sq.sum(&sqm).expect("same ambient")
}

/// Terms of the chain until it vanishes or stops shrinking.
pub fn series_terms(m: &MalcevAlgebra, kind: SeriesKind) -> Vec<Subspace> {
    let mut terms = vec![m.full()];
    loop {
        let last = terms.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = match kind {
            SeriesKind::LowerPower => {
                let k = terms.len() + 1;
                let mut s = Subspace::zero(m.field(), m.dim());
                for i in 1..k {
                    s = s
                        .sum(&m.product_space(&terms[i - 1], &terms[k - i - 1]))
                        .expect("ambient");
                }
                s
            }
            SeriesKind::SolvableBracket => tilde(m, last),
            SeriesKind::Derived => m.product_space(last, last),
        };
        let stalled = next.dim() == last.dim();
        terms.push(next);
        if stalled {
            break;
        }
    }
    terms
}

pub fn series(m: &MalcevAlgebra, kind: SeriesKind) -> SeriesReport {
    let terms = series_terms(m, kind);
    let dims: Vec<usize> = terms.iter().map(Subspace::dim).collect();
    let reaches_zero = dims.last() == Some(&0);
    let class = reaches_zero.then(|| {
        let first_zero = dims.iter().position(|&d| d == 0).unwrap();
        match kind {
            // terms[k] is M^{k+1}
            SeriesKind::LowerPower => first_zero.max(1),
            _ => first_zero,
        }
    });
    SeriesReport {
        kind,
        dims,
        reaches_zero,
        class,
    }
}

/// `M^[3] <= M^2 M^2`, and each `M^[i]` is an ideal.
pub fn check_series_properties(m: &MalcevAlgebra) -> Report {
    let mut rep = Report::default();
    let full = m.full();
    let mut terms = vec![full.clone()];
    for _ in 0..3 {
        let next = tilde(m, terms.last().unwrap());
        terms.push(next);
    }
    let sq = m.product_space(&full, &full);
    let sqsq = m.product_space(&sq, &sq);
    let mut c = CheckReport::new("series.kuzmin", "M^[3] <= M^2 M^2");
    let ok = terms[3].is_subspace_of(&sqsq).unwrap_or(false);
    c.expect(ok, || {
        format!("dim M^[3] = {}, dim M^2 M^2 = {}", terms[3].dim(), sqsq.dim())
    });
    rep.push(c);
    let mut c = CheckReport::new("series.tilde_ideal", "I^2 + I^2 M is an ideal of M");
    for (i, t) in series_terms(m, SeriesKind::SolvableBracket).iter().enumerate() {
        let ok = m.product_space(t, &full).is_subspace_of(t).unwrap_or(false);
        c.expect(ok, || format!("M^[{i}] is not an ideal"));
    }
    rep.push(c);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_lie::{example_4_algebra, induce_triality};
    use crate::groups::FiniteGroup;
    use crate::triality::{abelian_doubling, group_doubling};

    fn sym_oracle(ops: &[FpMatrix]) -> FpMatrix {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for at in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(at, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let d = ops[0].rows();
        let mut acc = FpMatrix::zeros(ops[0].p(), d, d).unwrap();
        for perm in perms(ops.len()) {
            let mut prod = FpMatrix::identity(ops[0].p(), d).unwrap();
            for &i in &perm {
                prod = prod.mul(&ops[i]).unwrap();
            }
            acc = acc.add(&prod).unwrap();
        }
        acc
    }

    #[test]
    fn polarization_matches_permutation_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            let ops: Vec<FpMatrix> = (0..n)
                .map(|_| {
                    let rows: Vec<Vec<i64>> = (0..3)
                        .map(|_| (0..3).map(|_| rng.random_range(0..7)).collect())
                        .collect();
                    FpMatrix::from_rows(7, 3, &rows).unwrap()
                })
                .collect();
            assert_eq!(symmetrized_product(&ops), sym_oracle(&ops), "n={n}");
        }
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 5).len(), 21);
        assert_eq!(multisets(0, 2).len(), 0);
        assert_eq!(multisets(4, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn cross_product_is_malcev_and_not_nilpotent() {
        let m = MalcevAlgebra::cross_product(5).unwrap();
        assert!(check_malcev_identities(&m).all_passed());
        let s = series(&m, SeriesKind::LowerPower);
        assert_eq!(s.dims, vec![3, 3]);
        assert!(!s.reaches_zero);
        assert!(check_series_properties(&m).all_passed());
    }

    #[test]
    fn zero_algebra() {
        let m = MalcevAlgebra::zero(5).unwrap();
        let s = series(&m, SeriesKind::LowerPower);
        assert!(s.reaches_zero);
        assert_eq!(s.class, Some(1));
        assert!(check_malcev_identities(&m).all_passed());
    }

    #[test]
    fn non_malcev_table_is_caught() {
        // anticommutative, but e0(e0 e1) = e2 with e2 feeding back
        let m = MalcevAlgebra::from_products(
            5,
            4,
            &[
                (0, 1, vec![0, 0, 1, 0]),
                (0, 2, vec![0, 0, 0, 1]),
                (1, 2, vec![0, 0, 0, 1]),
                (0, 3, vec![0, 1, 0, 0]),
            ],
        )
        .unwrap();
        assert!(check_malcev_identities(&m).any_failed());
    }

    #[test]
    fn abelian_doubling_h() {
        let t = abelian_doubling(&FiniteGroup::cyclic(5).unwrap()).unwrap();
        let lt = induce_triality(&t, 5, &Caps::default()).unwrap();
        let h = extract_h(&lt).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.is_abelian());
        assert!(check_bridge_identities(&lt, &h).unwrap().all_passed());
    }

    #[test]
    fn heisenberg_doubling_h() {
        let t = group_doubling(&FiniteGroup::heisenberg(5).unwrap()).unwrap();
        let caps = Caps::default();
        let lt = induce_triality(&t, 5, &caps).unwrap();
        let h = extract_h(&lt).unwrap();
        assert_eq!(h.degree_dims(), vec![2, 1]);
        assert!(check_malcev_identities(&h).all_passed());
        let b = check_bridge_identities(&lt, &h).unwrap();
        assert!(b.all_passed(), "{:?}", b.failed_checks());
        assert!(check_rho_commutation(&lt).all_passed());
        let a = check_alpha_power(&lt, 1, &caps, 4, 1).unwrap();
        assert!(a.all_passed(), "{:?}", a.failed_checks());
        assert!(check_engel_hypotheses(&h, 5, &caps, 4, 1).unwrap().all_passed());
        assert!(check_lie_engel(&lt, &h, 5, &caps, 4, 1).unwrap().all_passed());
        let s = series(&h, SeriesKind::LowerPower);
        assert!(s.reaches_zero);
        assert_eq!(s.class, Some(2));
        let gens: Vec<Vec<u32>> = (0..h.dim())
            .filter(|&i| h.degrees().unwrap()[i] == 1)
            .map(|i| h.unit(i))
            .collect();
        assert!(check_generation(&lt, &h, &gens).unwrap().passed());
    }

    #[test]
    fn example_fails_rho_commutation() {
        for sign in [1, -1] {
            let ex = example_4_algebra(5, sign).unwrap();
            let r = check_rho_commutation(&ex.triality);
            assert!(r.get("rho_commutation.diagonal").unwrap().failed());
            let a = check_alpha_power(&ex.triality, 1, &Caps::default(), 0, 0).unwrap();
            assert!(a.checks.iter().all(|c| c.outcome == crate::report::Outcome::Skipped));
        }
    }
}
