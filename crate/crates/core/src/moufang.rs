//! Loops as Cayley tables and the Moufang identities.

use crate::config::SweepPolicy;
use crate::error::{Error, Result};
use crate::groups::{for_each_triple, lcm, Elem, FiniteGroup};
use crate::report::{CheckReport, Report};

/// A loop on `0..order` with two-sided identity 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    order: usize,
    table: Vec<Elem>,
}

impl Loop {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidLoop("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLoop(format!(
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
        Self::from_flat(n, flat)
    }

    /// `flat[a * n + b] = a b`.
    pub fn from_flat(n: usize, flat: Vec<Elem>) -> Result<Self> {
        if flat.len() != n * n {
            return Err(Error::InvalidLoop(format!(
                "table has {} entries, expected {}",
                flat.len(),
                n * n
            )));
        }
        for i in 0..n {
            if flat[i] != i as Elem || flat[i * n] != i as Elem {
                return Err(Error::InvalidLoop("index 0 is not a two-sided identity".into()));
            }
        }
        for r in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for c in 0..n {
                let a = flat[r * n + c] as usize;
                let b = flat[c * n + r] as usize;
                if a >= n || b >= n {
                    return Err(Error::IndexOutOfRange {
                        index: a.max(b),
                        order: n,
                    });
                }
                if std::mem::replace(&mut row[a], true) {
                    return Err(Error::InvalidLoop(format!("row {r} repeats {a}")));
                }
                if std::mem::replace(&mut col[b], true) {
                    return Err(Error::InvalidLoop(format!("column {r} repeats {b}")));
                }
            }
        }
        Ok(Loop { order: n, table: flat })
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                flat.push(g.mul(a, b));
            }
        }
        Loop { order: n, table: flat }
    }

    pub fn trivial() -> Self {
        Loop {
            order: 1,
            table: vec![0],
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    /// Table after renaming every element `x` to `map[x]`; `map` must be a bijection.
    pub fn relabeled(&self, map: &[Elem]) -> Result<Loop> {
        let n = self.order;
        if map.len() != n {
            return Err(Error::DimensionMismatch(map.len(), n));
        }
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[map[a] as usize * n + map[b] as usize] = map[self.table[a * n + b] as usize];
            }
        }
        Loop::from_flat(n, flat)
    }

    /// Same multiplication table as `g`.
    pub fn equals_group_table(&self, g: &FiniteGroup) -> bool {
        self.order == g.order()
            && (0..self.order as Elem).all(|a| (0..self.order as Elem).all(|b| self.mul(a, b) == g.mul(a, b)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order as Elem;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Smallest subloop containing `gens`, with its elements in the parent's labels.
    pub fn generated_subloop(&self, gens: &[Elem]) -> Result<Subloop> {
        let n = self.order;
        let mut member = vec![false; n];
        let mut elems: Vec<Elem> = vec![0];
        member[0] = true;
        for &g in gens {
            if g as usize >= n {
                return Err(Error::IndexOutOfRange {
                    index: g as usize,
                    order: n,
                });
            }
            if !std::mem::replace(&mut member[g as usize], true) {
                elems.push(g);
            }
        }
        // New elements are multiplied against everything found so far, on both sides.
        let mut done = 0;
        while done < elems.len() {
            let a = elems[done];
            let mut k = 0;
            while k <= done {
                let b = elems[k];
                for c in [self.mul(a, b), self.mul(b, a)] {
                    if !std::mem::replace(&mut member[c as usize], true) {
                        elems.push(c);
                    }
                }
                k += 1;
            }
            done += 1;
        }
        elems.sort_unstable();
        let mut index = vec![Elem::MAX; n];
        for (i, &e) in elems.iter().enumerate() {
            index[e as usize] = i as Elem;
        }
        let m = elems.len();
        let mut flat = Vec::with_capacity(m * m);
        for &a in &elems {
            for &b in &elems {
                flat.push(index[self.mul(a, b) as usize]);
            }
        }
        Ok(Subloop {
            loop_: Loop::from_flat(m, flat)?,
            elements: elems,
        })
    }
}

/// A subloop together with the parent labels of its elements.
#[derive(Clone, Debug)]
pub struct Subloop {
    pub loop_: Loop,
    pub elements: Vec<Elem>,
}

/// `((zx)y)x = z((xy)x)` and `x(y(xz)) = (x(yx))z`.
pub fn check_moufang(l: &Loop, policy: &SweepPolicy) -> Report {
    let mut right = CheckReport::new("moufang.right", "((zx)y)x = z((xy)x)");
    let mut left = CheckReport::new("moufang.left", "x(y(xz)) = (x(yx))z");
    let (cases, sampled) = for_each_triple(l.order(), policy, |x, y, z| {
        let lhs = l.mul(l.mul(l.mul(z, x), y), x);
        let rhs = l.mul(z, l.mul(l.mul(x, y), x));
        if lhs != rhs {
            right.fail(|| format!("x={x} y={y} z={z}"));
        }
        let lhs = l.mul(x, l.mul(y, l.mul(x, z)));
        let rhs = l.mul(l.mul(x, l.mul(y, x)), z);
        if lhs != rhs {
            left.fail(|| format!("x={x} y={y} z={z}"));
        }
    });
    let mut rep = Report::default();
    for mut c in [right, left] {
        c.cases = cases;
        rep.push(c.with_sampling(sampled, policy.seed));
    }
    rep
}

/// Order of `x`, after checking that left- and right-nested powers agree.
pub fn element_order(l: &Loop, x: Elem) -> Result<u64> {
    let (mut left, mut right) = (x, x);
    let mut k = 1u64;
    while left != 0 {
        left = l.mul(left, x);
        right = l.mul(x, right);
        k += 1;
        if left != right {
            return Err(Error::NotPowerAssociative(format!(
                "x={x}: left and right powers differ at exponent {k}"
            )));
        }
        if k > l.order() as u64 {
            return Err(Error::NotPowerAssociative(format!(
                "x={x}: powers do not return to the identity"
            )));
        }
    }
    Ok(k)
}

/// Least `e` with `x^e = 1` for every `x`.
pub fn loop_exponent(l: &Loop) -> Result<u64> {
    (0..l.order() as Elem).try_fold(1, |acc, x| Ok(lcm(acc, element_order(l, x)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift_quasigroup() -> Vec<Vec<usize>> {
        (0..5).map(|i| (0..5).map(|j| (j + 2 * i) % 5).collect()).collect()
    }

    #[test]
    fn group_tables_are_moufang() {
        for g in [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::cyclic(7).unwrap()] {
            let l = Loop::from_group(&g);
            assert!(check_moufang(&l, &SweepPolicy::default()).all_passed());
            assert!(l.is_associative());
            assert!(l.equals_group_table(&g));
        }
    }

    #[test]
    fn quasigroup_without_identity_is_rejected() {
        // row 0 is the identity map but column 0 is not
        assert!(matches!(
            Loop::from_table(shift_quasigroup()),
            Err(Error::InvalidLoop(_))
        ));
    }

    #[test]
    fn non_moufang_loop_is_caught() {
        // smallest nonassociative loop, order 5
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let l = Loop::from_table(t).unwrap();
        assert!(!l.is_associative());
        let r = check_moufang(&l, &SweepPolicy::default());
        assert!(r.any_failed());
        assert!(!r.get("moufang.left").unwrap().witnesses.is_empty());
    }

    #[test]
    fn exponents_and_subloops() {
        assert_eq!(loop_exponent(&Loop::trivial()).unwrap(), 1);
        let l = Loop::from_group(&FiniteGroup::elementary_abelian(5, 2).unwrap());
        assert_eq!(loop_exponent(&l).unwrap(), 5);
        let s = l.generated_subloop(&[0]).unwrap();
        assert_eq!(s.loop_.order(), 1);
        let s = l.generated_subloop(&[7]).unwrap();
        assert_eq!(s.loop_.order(), 5);
        assert_eq!(loop_exponent(&s.loop_).unwrap(), 5);
        let s = l.generated_subloop(&[1, 5]).unwrap();
        assert_eq!(s.loop_.order(), 25);
    }

    #[test]
    fn relabeling_round_trip() {
        let l = Loop::from_group(&FiniteGroup::cyclic(5).unwrap());
        let double: Vec<Elem> = (0..5).map(|x| (2 * x) % 5).collect();
        let r = l.relabeled(&double).unwrap();
        // doubling is an automorphism of C5
        assert_eq!(r, l);
    }
}
