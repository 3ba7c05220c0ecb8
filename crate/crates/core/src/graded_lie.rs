//! Lie algebras over F_p given by structure constants, the graded restricted
//! Lie algebra `L_p(G) = (+) G_i / G_{i+1}` of a p-group, and Lie algebras
//! with triality.
//!
//! Linear maps act on column vectors: `rho(x) = R x`, and `rho sigma`
//! (apply `rho`, then `sigma`) has matrix `S R`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group_algebra::{zassenhaus_filtration, Filtration, FiltrationProfile, GradedEnvelope, JenningsBasis};
use crate::groups::FiniteGroup;
use crate::linalg::{is_zero, Fp, FpMatrix};
use crate::report::{CheckReport, Outcome, Report};
use crate::triality::TrialityGroup;

/// The group behind `L_p(G)`, used for the p-map of arbitrary homogeneous elements.
#[derive(Clone, Debug)]
pub struct GroupSource {
    pub group: Arc<FiniteGroup>,
    pub basis: Arc<JenningsBasis>,
    pub filtration: Arc<Filtration>,
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    field: Fp,
    dim: usize,
    /// `consts[(i * dim + j) * dim + k]` is the `e_k` coefficient of `[e_i, e_j]`.
    consts: Vec<u32>,
    /// Degree of each basis vector, nondecreasing.
    degrees: Option<Vec<usize>>,
    /// `e_i^[p]` for a p-map given on a basis.
    pmap_basis: Option<Vec<Vec<u32>>>,
    source: Option<GroupSource>,
}

impl LieAlgebra {
    /// Algebra with `[e_i, e_j] = v` for each listed `(i, j, v)`; the
    /// opposite brackets follow by antisymmetry, everything else is zero.
    pub fn from_brackets(p: u32, dim: usize, brackets: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        let field = Fp::new(p)?;
        let mut consts = vec![0; dim * dim * dim];
        for (i, j, v) in brackets {
            if *i >= dim || *j >= dim {
                return Err(Error::IndexOutOfRange {
                    index: (*i).max(*j),
                    order: dim,
                });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch(v.len(), dim));
            }
            for (k, &c) in v.iter().enumerate() {
                consts[(i * dim + j) * dim + k] = field.from_i64(c);
                consts[(j * dim + i) * dim + k] = field.from_i64(-c);
            }
        }
        Ok(LieAlgebra {
            field,
            dim,
            consts,
            degrees: None,
            pmap_basis: None,
            source: None,
        })
    }

    pub fn zero(p: u32) -> Result<Self> {
        Self::from_brackets(p, 0, &[])
    }

    pub fn abelian(p: u32, dim: usize) -> Result<Self> {
        Self::from_brackets(p, dim, &[])
    }

    pub fn with_degrees(mut self, degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() != self.dim {
            return Err(Error::DimensionMismatch(degrees.len(), self.dim));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) || degrees.contains(&0) {
            return Err(Error::Format("degrees must be positive and nondecreasing".into()));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn with_basis_pmap(mut self, images: Vec<Vec<i64>>) -> Result<Self> {
        if images.len() != self.dim || images.iter().any(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch(images.len(), self.dim));
        }
        let f = self.field;
        self.pmap_basis = Some(
            images
                .into_iter()
                .map(|v| v.into_iter().map(|c| f.from_i64(c)).collect())
                .collect(),
        );
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

    pub fn source(&self) -> Option<&GroupSource> {
        self.source.as_ref()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.as_ref().and_then(|d| d.last().copied()).unwrap_or(0)
    }

    /// Basis indices of degree `d`.
    pub fn degree_indices(&self, d: usize) -> Vec<usize> {
        match &self.degrees {
            Some(deg) => (0..self.dim).filter(|&i| deg[i] == d).collect(),
            None => Vec::new(),
        }
    }

    /// `dim L_d` for `d = 1..=top_degree`.
    pub fn degree_dims(&self) -> Vec<usize> {
        (1..=self.top_degree()).map(|d| self.degree_indices(d).len()).collect()
    }

    /// Degree of a nonzero homogeneous vector; `None` for zero or mixed vectors.
    pub fn degree_of(&self, v: &[u32]) -> Option<usize> {
        let deg = self.degrees.as_ref()?;
        let mut found = None;
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                match found {
                    None => found = Some(deg[i]),
                    Some(d) if d != deg[i] => return None,
                    _ => {}
                }
            }
        }
        found
    }

    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[u32] {
        let at = (i * self.dim + j) * self.dim;
        &self.consts[at..at + self.dim]
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn bracket(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b != 0 {
                    f.axpy(&mut out, f.mul(a, b), self.basis_bracket(i, j));
                }
            }
        }
        out
    }

    /// Matrix of `v -> [u, v]`.
    pub fn ad(&self, u: &[u32]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p(), self.dim, self.dim).expect("prime checked");
        for j in 0..self.dim {
            let col = self.bracket(u, &self.unit(j));
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().all(|&c| c == 0)
    }

    /// Group-derived p-map of a homogeneous element of degree `d`:
    /// `(g G_{d+1})^[p] = g^p G_{dp+1}`.
    pub fn group_pmap(&self, d: usize, v: &[u32]) -> Option<Vec<u32>> {
        let src = self.source.as_ref()?;
        let deg = self.degrees.as_ref()?;
        let coords: Vec<u32> = (0..self.dim).filter(|&i| deg[i] == d).map(|i| v[i]).collect();
        let g = src.basis.element_of_coordinates(d, &coords);
        let gp = src.group.pow(g, self.p() as u64);
        let dp = d * self.p() as usize;
        let mut out = vec![0; self.dim];
        if dp <= self.top_degree() {
            let c = src.basis.coset_coordinates(gp, dp)?;
            for (k, i) in src.basis.degree_range(dp).enumerate() {
                out[i] = c[k];
            }
        } else if gp != 0 {
            return None;
        }
        Some(out)
    }

    /// `e_i^[p]`, from the group or from explicitly supplied images.
    pub fn pmap_of_basis(&self, i: usize) -> Option<Vec<u32>> {
        if let Some(b) = &self.pmap_basis {
            return Some(b[i].clone());
        }
        let d = self.degrees.as_ref()?[i];
        self.group_pmap(d, &self.unit(i))
    }

    pub fn has_pmap(&self) -> bool {
        self.pmap_basis.is_some() || self.source.is_some()
    }

    /// Coefficient vectors `s_i(a, b)` summed: the Jacobson element `{a, b}`,
    /// with `i s_i` the coefficient of `t^{i-1}` in `ad(t a + b)^{p-1}(a)`.
    pub fn jacobson_element(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field;
        let p = self.p() as usize;
        // values at t = 0..p-1, then invert the Vandermonde system
        let values: Vec<Vec<u32>> = (0..p as u32)
            .map(|t| {
                let x = f.add_vec(&f.scaled(a, t), b);
                let mut v = a.to_vec();
                for _ in 0..p - 1 {
                    v = self.bracket(&x, &v);
                }
                v
            })
            .collect();
        let mut vand = FpMatrix::zeros(f.p(), p, p).expect("prime");
        for t in 0..p {
            for k in 0..p {
                vand.set(t, k, f.pow(t as u32, k as u64));
            }
        }
        let inv = vand.inverse().expect("square").expect("distinct nodes");
        let mut out = vec![0; self.dim];
        for i in 1..p {
            // coefficient of t^{i-1}
            let mut coef = vec![0; self.dim];
            for (t, val) in values.iter().enumerate() {
                f.axpy(&mut coef, inv.get(i - 1, t), val);
            }
            f.axpy(&mut out, f.inv(i as u32), &coef);
        }
        out
    }
}

/// Antisymmetry, Jacobi on all basis triples, and grading compatibility.
pub fn check_lie_axioms(l: &LieAlgebra) -> Report {
    let f = l.field();
    let n = l.dim();
    let mut rep = Report::default();
    let mut c = CheckReport::new("lie.antisymmetry", "[x,x] = 0 and [x,y] = -[y,x]");
    for i in 0..n {
        c.expect(is_zero(l.basis_bracket(i, i)), || format!("[e{i},e{i}] != 0"));
        for j in i + 1..n {
            let s = f.add_vec(l.basis_bracket(i, j), l.basis_bracket(j, i));
            c.expect(is_zero(&s), || format!("i={i} j={j}"));
        }
    }
    rep.push(c);
    let mut c = CheckReport::new("lie.jacobi", "[[x,y],z] + [[y,z],x] + [[z,x],y] = 0");
    for i in 0..n {
        for j in 0..n {
            let xy = l.basis_bracket(i, j).to_vec();
            for k in 0..n {
                let a = l.bracket(&xy, &l.unit(k));
                let b = l.bracket(l.basis_bracket(j, k), &l.unit(i));
                let cc = l.bracket(l.basis_bracket(k, i), &l.unit(j));
                let s = f.add_vec(&f.add_vec(&a, &b), &cc);
                c.expect(is_zero(&s), || format!("i={i} j={j} k={k}"));
            }
        }
    }
    rep.push(c);
    if let Some(deg) = l.degrees() {
        let mut c = CheckReport::new("lie.grading", "[L_i, L_j] <= L_{i+j} and L_i^[p] <= L_{ip}");
        for i in 0..n {
            for j in 0..n {
                let v = l.basis_bracket(i, j);
                let ok = is_zero(v) || l.degree_of(v) == Some(deg[i] + deg[j]);
                c.expect(ok, || format!("[e{i},e{j}] has the wrong degree"));
            }
            if let Some(v) = l.pmap_of_basis(i) {
                let ok = is_zero(&v) || l.degree_of(&v) == Some(deg[i] * l.p() as usize);
                c.expect(ok, || format!("e{i}^[p] has the wrong degree"));
            }
        }
        rep.push(c);
    }
    rep
}

/// `L_p(G)` from the dimension-subgroup filtration, with basis the greedy coset
/// representatives in element-index order.
pub fn build_lp_algebra(g: &FiniteGroup, p: u32, caps: &Caps) -> Result<LieAlgebra> {
    let filt = zassenhaus_filtration(g, p, caps)?;
    build_from_filtration(g, filt)
}

pub fn build_from_filtration(g: &FiniteGroup, filt: Filtration) -> Result<LieAlgebra> {
    let p = filt.p();
    let basis = JenningsBasis::new(g, &filt)?;
    let field = Fp::new(p)?;
    let dim = basis.rank();
    let top = basis.top_degree();
    let w = basis.weights().to_vec();
    let mut consts = vec![0; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let d = w[i] + w[j];
            if i == j || d > top {
                continue;
            }
            let c = g.comm(basis.reps()[i], basis.reps()[j]);
            let coords = basis
                .coset_coordinates(c, d)
                .ok_or_else(|| Error::FiltrationViolation(format!("[G_{}, G_{}] is not inside G_{d}", w[i], w[j])))?;
            for (k, idx) in basis.degree_range(d).enumerate() {
                consts[(i * dim + j) * dim + idx] = coords[k];
            }
        }
    }
    Ok(LieAlgebra {
        field,
        dim,
        consts,
        degrees: Some(w),
        pmap_basis: None,
        source: Some(GroupSource {
            group: Arc::new(g.clone()),
            basis: Arc::new(basis),
            filtration: Arc::new(filt),
        }),
    })
}

pub fn filtration_profile(l: &LieAlgebra) -> Option<FiltrationProfile> {
    l.source().map(|s| s.filtration.profile())
}

/// Scalar, sum and adjoint axioms of a restricted Lie algebra.
///
/// With a group source the sum axiom is checked twice: inside the graded
/// envelope, where `(x + y)^p - x^p - y^p` is an associative computation, and
/// against the Jacobson element computed from `ad`. Pairs of same-degree basis
/// vectors and their scalar combinations are covered.
pub fn verify_restricted_axioms(l: &LieAlgebra) -> Report {
    let mut rep = Report::default();
    let f = l.field();
    let p = l.p();
    let n = l.dim();
    let stmt_scalar = "(ka)^[p] = k^p a^[p]";
    let stmt_sum = "(a+b)^[p] = a^[p] + b^[p] + {a,b}";
    let stmt_adj = "[a^[p], b] = ad(a)^p b";
    if !l.has_pmap() {
        let why = "no p-map on this algebra";
        rep.push(CheckReport::skipped("restricted.scalar", stmt_scalar, why));
        rep.push(CheckReport::skipped("restricted.sum_envelope", stmt_sum, why));
        rep.push(CheckReport::skipped("restricted.adjoint", stmt_adj, why));
        return rep;
    }

    // elements a to test: basis vectors, plus same-degree combinations when graded
    let mut probes: Vec<(Option<usize>, Vec<u32>)> = (0..n).map(|i| (l.degrees().map(|d| d[i]), l.unit(i))).collect();
    let mut pairs: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
    if let Some(deg) = l.degrees() {
        for i in 0..n {
            for j in i..n {
                if deg[i] != deg[j] {
                    continue;
                }
                for k in 1..p {
                    let b = f.scaled(&l.unit(j), k);
                    pairs.push((deg[i], l.unit(i), b.clone()));
                    if i != j {
                        probes.push((Some(deg[i]), f.add_vec(&l.unit(i), &b)));
                    }
                }
            }
        }
    }
    let pmap = |d: Option<usize>, v: &[u32]| -> Option<Vec<u32>> {
        match (l.source(), d) {
            (Some(_), Some(d)) => l.group_pmap(d, v),
            _ => {
                // basis-given p-map on a basis vector
                let i = v.iter().position(|&c| c != 0)?;
                (v.iter().filter(|&&c| c != 0).count() == 1 && v[i] == 1)
                    .then(|| l.pmap_of_basis(i))
                    .flatten()
            }
        }
    };

    let mut c = CheckReport::new("restricted.scalar", stmt_scalar);
    for (d, a) in probes
        .iter()
        .filter(|(_, a)| a.iter().filter(|&&x| x != 0).count() == 1)
    {
        let Some(ap) = pmap(*d, a) else { continue };
        for k in 1..p {
            let ka = f.scaled(a, k);
            let lhs = if l.source().is_some() {
                pmap(*d, &ka)
            } else {
                // a basis-given p-map is extended p-semilinearly
                Some(f.scaled(&ap, f.pow(k, p as u64)))
            };
            let rhs = f.scaled(&ap, f.pow(k, p as u64));
            c.expect(lhs.as_deref() == Some(&rhs[..]), || format!("a={a:?} k={k}"));
        }
    }
    rep.push(c);

    if let Some(src) = l.source() {
        let env = GradedEnvelope::new(&src.group, &src.basis);
        let mut ce = CheckReport::new("restricted.sum_envelope", stmt_sum)
            .with_reason("(x+y)^p - x^p - y^p computed in the graded group-algebra envelope");
        let mut cj = CheckReport::new("restricted.sum_jacobson", stmt_sum)
            .with_reason("{a,b} from ad(ta+b)^{p-1}(a) by interpolation in t");
        let mut cb = CheckReport::new(
            "restricted.envelope_bracket",
            "image of [a,b] = xy - yx in the graded envelope",
        );
        match env {
            Err(e) => ce.fail(|| e.to_string()),
            Ok(env) => {
                for (d, a, b) in &pairs {
                    let dp = d * p as usize;
                    let ap = l.group_pmap(*d, a);
                    let bp = l.group_pmap(*d, b);
                    let sp = l.group_pmap(*d, &f.add_vec(a, b));
                    let (Some(ap), Some(bp), Some(sp)) = (ap, bp, sp) else {
                        ce.fail(|| format!("p-th power left the filtration: a={a:?} b={b:?}"));
                        continue;
                    };
                    let defect = f.sub_vec(&f.sub_vec(&sp, &ap), &bp);
                    let x = env.lie_element(*d, &restrict(l, *d, a));
                    let y = env.lie_element(*d, &restrict(l, *d, b));
                    let lhs = env.sub(
                        &env.sub(&env.pow(&env.add(&x, &y), p), &env.pow(&x, p)),
                        &env.pow(&y, p),
                    );
                    let rhs = env.lie_component(dp, &restrict(l, dp, &defect));
                    ce.expect(env.component(&lhs, dp).as_ref() == Some(&rhs), || {
                        format!("degree {d}: a={a:?} b={b:?}")
                    });
                    let jac = l.jacobson_element(a, b);
                    cj.expect(jac == defect, || format!("degree {d}: a={a:?} b={b:?}"));
                }
                let deg = l.degrees().expect("group algebras are graded");
                for i in 0..n {
                    for j in 0..n {
                        let d = deg[i] + deg[j];
                        let x = env.lie_element(deg[i], &restrict(l, deg[i], &l.unit(i)));
                        let y = env.lie_element(deg[j], &restrict(l, deg[j], &l.unit(j)));
                        let lhs = env.commutator(&x, &y);
                        let rhs = env.lie_component(d, &restrict(l, d, l.basis_bracket(i, j)));
                        cb.expect(env.component(&lhs, d).as_ref() == Some(&rhs), || format!("i={i} j={j}"));
                    }
                }
            }
        }
        rep.push(ce);
        rep.push(cj);
        rep.push(cb);
    } else if l.is_abelian() {
        rep.push(
            CheckReport::new("restricted.sum_envelope", stmt_sum)
                .with_reason("abelian: {a,b} = 0 and the basis p-map extends p-semilinearly"),
        );
    } else {
        rep.push(CheckReport::skipped(
            "restricted.sum_envelope",
            stmt_sum,
            "no group envelope for a hand-built algebra",
        ));
    }

    let mut c = CheckReport::new("restricted.adjoint", stmt_adj);
    for (d, a) in &probes {
        let Some(ap) = pmap(*d, a) else { continue };
        let adp = l.ad(a).pow(p as u64).expect("square");
        for j in 0..n {
            let lhs = l.bracket(&ap, &l.unit(j));
            let rhs = adp.apply(&l.unit(j));
            c.expect(lhs == rhs, || format!("a={a:?} b=e{j}"));
        }
    }
    rep.push(c);
    rep
}

/// Coordinates of the degree-`d` part of `v`.
fn restrict(l: &LieAlgebra, d: usize, v: &[u32]) -> Vec<u32> {
    l.degree_indices(d).into_iter().map(|i| v[i]).collect()
}

/// Lie algebra with automorphisms `rho`, `sigma` as matrices.
#[derive(Clone, Debug)]
pub struct LieTriality {
    lie: LieAlgebra,
    rho: FpMatrix,
    sigma: FpMatrix,
    group_derived: bool,
}

impl LieTriality {
    /// Shape checks only; run [`LieTriality::verify`] for the invariants.
    pub fn new(lie: LieAlgebra, rho: FpMatrix, sigma: FpMatrix) -> Result<Self> {
        for m in [&rho, &sigma] {
            if m.rows() != lie.dim() || m.cols() != lie.dim() {
                return Err(Error::DimensionMismatch(m.rows(), lie.dim()));
            }
            if m.p() != lie.p() {
                return Err(Error::ModulusMismatch(m.p(), lie.p()));
            }
        }
        Ok(LieTriality {
            lie,
            rho,
            sigma,
            group_derived: false,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn rho(&self) -> &FpMatrix {
        &self.rho
    }

    pub fn sigma(&self) -> &FpMatrix {
        &self.sigma
    }

    pub fn is_group_derived(&self) -> bool {
        self.group_derived
    }

    pub fn rho_inverse(&self) -> FpMatrix {
        // rho^3 = 1
        self.rho.mul(&self.rho).expect("square")
    }

    /// `alpha = 1 + 2 rho`.
    pub fn alpha(&self) -> FpMatrix {
        let n = self.lie.dim();
        FpMatrix::identity(self.lie.p(), n)
            .expect("prime")
            .add(&self.rho.scale(2))
            .expect("square")
    }

    pub fn verify(&self) -> Report {
        verify_lie_triality(self)
    }
}

pub fn verify_lie_triality(t: &LieTriality) -> Report {
    let l = &t.lie;
    let n = l.dim();
    let p = l.p();
    let id = FpMatrix::identity(p, n).expect("prime");
    let mut rep = Report::default();
    for (name, m) in [("rho", &t.rho), ("sigma", &t.sigma)] {
        let mut c = CheckReport::new(
            format!("lie_triality.{name}_automorphism"),
            format!("{name}[x,y] = [{name}x, {name}y]"),
        );
        let invertible = m.inverse().ok().flatten().is_some();
        c.expect(invertible, || "not invertible".into());
        for i in 0..n {
            for j in i + 1..n {
                let lhs = m.apply(l.basis_bracket(i, j));
                let rhs = l.bracket(&m.apply(&l.unit(i)), &m.apply(&l.unit(j)));
                c.expect(lhs == rhs, || format!("x=e{i} y=e{j}"));
            }
        }
        if let Some(deg) = l.degrees() {
            for i in 0..n {
                let v = m.apply(&l.unit(i));
                c.expect(is_zero(&v) || l.degree_of(&v) == Some(deg[i]), || {
                    format!("{name} moves e{i} out of its degree")
                });
            }
        }
        rep.push(c);
    }
    let rs = t.sigma.mul(&t.rho).expect("square");
    for (name, stmt, m) in [
        ("lie_triality.rho_cubed", "rho^3 = 1", t.rho.pow(3).expect("square")),
        (
            "lie_triality.sigma_squared",
            "sigma^2 = 1",
            t.sigma.pow(2).expect("square"),
        ),
        (
            "lie_triality.rho_sigma_squared",
            "(rho sigma)^2 = 1",
            rs.pow(2).expect("square"),
        ),
    ] {
        let mut c = CheckReport::new(name, stmt);
        for i in 0..n {
            c.expect(m.apply(&l.unit(i)) == l.unit(i), || format!("x=e{i}"));
        }
        rep.push(c);
    }
    // (1 + rho + rho^2)(sigma - 1)
    let orbit = id.add(&t.rho).and_then(|m| m.add(&t.rho.pow(2)?)).expect("square");
    let tri = orbit.mul(&t.sigma.sub(&id).expect("square")).expect("square");
    let mut c = CheckReport::new("lie_triality.identity", "(x^s - x) + (x^s - x)^r + (x^s - x)^{r^2} = 0");
    for i in 0..n {
        let v = tri.apply(&l.unit(i));
        c.expect(is_zero(&v), || format!("x=e{i} gives {v:?}"));
    }
    rep.push(c);
    rep
}

/// The automorphisms of `G` induced on `L_p(G)`, certified.
pub fn induce_triality(t: &TrialityGroup, p: u32, caps: &Caps) -> Result<LieTriality> {
    let lie = build_lp_algebra(t.group(), p, caps)?;
    let src = lie.source().expect("built from a group").clone();
    let n = lie.dim();
    let mut mats = Vec::new();
    for map in [t.rho(), t.sigma()] {
        let mut m = FpMatrix::zeros(p, n, n)?;
        for (j, &w) in src.basis.weights().iter().enumerate() {
            let img = map.apply(src.basis.reps()[j]);
            let coords = src
                .basis
                .coset_coordinates(img, w)
                .ok_or_else(|| Error::LieTriality(format!("automorphism moves G_{w} off itself")))?;
            for (k, i) in src.basis.degree_range(w).enumerate() {
                m.set(i, j, coords[k]);
            }
        }
        mats.push(m);
    }
    let sigma = mats.pop().unwrap();
    let rho = mats.pop().unwrap();
    let mut lt = LieTriality::new(lie, rho, sigma)?;
    lt.group_derived = true;
    let rep = lt.verify();
    if !rep.all_passed() {
        return Err(Error::LieTriality(rep.failed_checks().join(", ")));
    }
    Ok(lt)
}

/// Result of building the three-dimensional nilpotent example with triality.
#[derive(Clone, Debug)]
pub struct ExampleAlgebra {
    pub triality: LieTriality,
    pub report: Report,
    /// `[a, rho(a)]` in the basis `(a, b, c)`.
    pub a_rho_bracket: Vec<u32>,
}

/// Basis `a, b, c` with `[a,b] = c`; `rho: a -> b, b -> -a-b, c -> c`;
/// `sigma: a -> -a, b -> a+b, c -> sign c`.
pub fn example_4_algebra(p: u32, sigma_sign: i64) -> Result<ExampleAlgebra> {
    if p <= 2 {
        return Err(Error::NotPrime(p));
    }
    if sigma_sign != 1 && sigma_sign != -1 {
        return Err(Error::Format("sigma_sign must be 1 or -1".into()));
    }
    let lie = LieAlgebra::from_brackets(p, 3, &[(0, 1, vec![0, 0, 1])])?;
    // columns are images of a, b, c
    let rho = FpMatrix::from_rows(p, 3, &[vec![0, -1, 0], vec![1, -1, 0], vec![0, 0, 1]])?;
    let sigma = FpMatrix::from_rows(p, 3, &[vec![-1, 1, 0], vec![0, 1, 0], vec![0, 0, sigma_sign]])?;
    let t = LieTriality::new(lie, rho, sigma)?;
    let report = t.verify();
    let a = t.lie.unit(0);
    let a_rho_bracket = t.lie.bracket(&a, &t.rho.apply(&a));
    Ok(ExampleAlgebra {
        triality: t,
        report,
        a_rho_bracket,
    })
}

/// `ad(a)^{q} = 0` as a matrix, for every homogeneous basis vector and for
/// seeded random homogeneous combinations.
pub fn check_ad_nilpotent(
    l: &LieAlgebra,
    vectors: &[(usize, Vec<u32>)],
    q: u64,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let mut c = CheckReport::new("lie.ad_nilpotent", format!("ad(a)^{q} = 0 for homogeneous a"));
    let f = l.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<Vec<u32>> = vectors.iter().map(|(_, v)| v.clone()).collect();
    let mut degrees: Vec<usize> = vectors.iter().map(|(d, _)| *d).collect();
    degrees.dedup();
    for d in degrees {
        let same: Vec<&Vec<u32>> = vectors.iter().filter(|(e, _)| *e == d).map(|(_, v)| v).collect();
        for _ in 0..samples {
            let mut v = vec![0; l.dim()];
            for b in &same {
                f.axpy(&mut v, rng.random_range(0..f.p()), b);
            }
            probes.push(v);
        }
    }
    for a in probes {
        let ok = l.ad(&a).pow(q).expect("square").is_zero();
        c.expect(ok, || format!("a={a:?}"));
    }
    if samples > 0 {
        c = c.with_sampling(true, seed);
    }
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureDump {
    pub p: u32,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    /// Nonzero `[e_i, e_j]` for `i < j`.
    pub brackets: Vec<(usize, usize, Vec<u32>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmap: Option<Vec<Vec<u32>>>,
}

impl LieAlgebra {
    pub fn dump(&self) -> StructureDump {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.basis_bracket(i, j);
                if !is_zero(v) {
                    brackets.push((i, j, v.to_vec()));
                }
            }
        }
        let pmap = self.has_pmap().then(|| {
            (0..self.dim)
                .map(|i| self.pmap_of_basis(i).unwrap_or_default())
                .collect()
        });
        StructureDump {
            p: self.p(),
            dim: self.dim,
            degrees: self.degrees.clone(),
            brackets,
            pmap,
        }
    }
}

pub fn outcome_of(rep: &Report, check: &str) -> Outcome {
    rep.outcome(check).unwrap_or(Outcome::Skipped)
}
