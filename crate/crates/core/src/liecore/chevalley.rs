//! Split real forms from a Chevalley basis.
//!
//! Basis order: coroots `h_1..h_r`, then `e_beta` for the roots in
//! [`RootSystem::roots`] order. Signs are fixed by taking `N = +(p+1)` on
//! extraspecial pairs, where pairs are ordered by height then lexicographically.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::rootsys::{Kind, RootSystem};
use crate::scalar::{Field, Rational};

use super::algebra::LieAlgebra;

/// Version tag of the sign convention, used in cache keys.
pub const CONVENTION_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default)]
pub struct ChevalleyOptions {
    /// E6, E7 and E8 are refused unless this is set.
    pub allow_e_series: bool,
}

struct Structure<'a> {
    rs: &'a RootSystem,
    roots: Vec<Vec<i64>>,
    npos: usize,
    extraspecial: HashMap<usize, (usize, usize)>,
    memo: HashMap<(usize, usize), i64>,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<'a> Structure<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let roots = rs.roots();
        let npos = rs.num_positive();
        let mut extraspecial = HashMap::new();
        for xi in 0..npos {
            for a in 0..npos {
                let b = roots[xi].iter().zip(&roots[a]).map(|(x, y)| x - y).collect::<Vec<_>>();
                if let Some(bi) = rs.index_of(&b) {
                    if bi < npos {
                        extraspecial.insert(xi, (a, bi));
                        break;
                    }
                }
            }
        }
        Structure { rs, roots, npos, extraspecial, memo: HashMap::new() }
    }

    fn positive(&self, i: usize) -> bool {
        i < self.npos
    }

    fn negate(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    fn len2(&self, i: usize) -> i64 {
        self.rs.inner(&self.roots[i], &self.roots[i])
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.rs.index_of(&add(&self.roots[a], &self.roots[b]))
    }

    /// Largest `p` with `b - p a` a root.
    fn p(&self, a: usize, b: usize) -> i64 {
        let mut p = 0;
        let mut r = self.roots[b].clone();
        loop {
            r = r.iter().zip(&self.roots[a]).map(|(x, y)| x - y).collect();
            if !self.rs.is_root(&r) {
                return p;
            }
            p += 1;
        }
    }

    fn n(&mut self, a: usize, b: usize) -> i64 {
        if let Some(v) = self.memo.get(&(a, b)) {
            return *v;
        }
        let v = self.compute(a, b);
        self.memo.insert((a, b), v);
        v
    }

    fn compute(&mut self, a: usize, b: usize) -> i64 {
        let Some(s) = self.sum(a, b) else { return 0 };
        match (self.positive(a), self.positive(b)) {
            (true, true) => {
                let (al, be) = self.extraspecial[&s];
                if (a, b) == (al, be) {
                    return self.p(al, be) + 1;
                }
                if (b, a) == (al, be) {
                    return -(self.p(al, be) + 1);
                }
                if a > b {
                    return -self.n(b, a);
                }
                let (ga, de) = (a, b);
                let nab = self.n(al, be);
                let xi2 = self.len2(s) as i128;
                let (mga, mde) = (self.negate(ga), self.negate(de));
                let mut num: i128 = 0;
                let mut den: i128 = 1;
                let mut acc = |n: i128, d: i128| {
                    num = num * d + n * den;
                    den *= d;
                };
                if let Some(bg) = self.sum(be, mga) {
                    let t = self.n(be, mga) as i128 * self.n(al, mde) as i128;
                    acc(t, self.len2(bg) as i128);
                }
                if let Some(ag) = self.sum(al, mga) {
                    let t = self.n(mga, al) as i128 * self.n(be, mde) as i128;
                    acc(t, self.len2(ag) as i128);
                }
                let total_num = xi2 * num;
                let total_den = nab as i128 * den;
                assert!(total_num % total_den == 0, "non-integral structure constant");
                (total_num / total_den) as i64
            }
            (false, false) => -self.n(self.negate(a), self.negate(b)),
            _ => {
                let c = self.negate(s);
                if self.positive(c) == self.positive(b) {
                    // N_ab / (c,c) = N_bc / (a,a)
                    let v = self.len2(c) * self.n(b, c);
                    v / self.len2(a)
                } else {
                    // N_ab / (c,c) = N_ca / (b,b)
                    let v = self.len2(c) * self.n(c, a);
                    v / self.len2(b)
                }
            }
        }
    }
}

/// Split real form of the simple Lie algebra with root system `rs`.
pub fn chevalley_algebra(rs: &RootSystem, opts: ChevalleyOptions) -> Result<LieAlgebra<Rational>> {
    if rs.kind == Kind::E && !opts.allow_e_series {
        return Err(Error::Unsupported("E-series split forms are disabled".into()));
    }
    let r = rs.rank;
    let mut st = Structure::new(rs);
    let nroots = st.roots.len();
    let dim = r + nroots;
    let roots = st.roots.clone();
    let simple_len: Vec<i64> = (0..r).map(|i| rs.form[i][i]).collect();
    let mut table = vec![vec![Rational::zero(); dim]; dim * dim];
    let set = |t: &mut Vec<Vec<Rational>>, i: usize, j: usize, k: usize, v: Rational| {
        t[i * dim + j][k] = v.clone();
        t[j * dim + i][k] = -v;
    };
    for i in 0..r {
        for (bi, beta) in roots.iter().enumerate() {
            let c: i64 = (0..r).map(|j| beta[j] * rs.cartan[j][i]).sum();
            if c != 0 {
                set(&mut table, i, r + bi, r + bi, Rational::from_i64(c));
            }
        }
    }
    for a in 0..nroots {
        for b in a + 1..nroots {
            if st.negate(a) == b {
                let l = rs.inner(&roots[a], &roots[a]);
                for i in 0..r {
                    let v = roots[a][i] * simple_len[i];
                    if v % l != 0 {
                        return invalid("coroot is not integral");
                    }
                    if v != 0 {
                        set(&mut table, r + a, r + b, i, Rational::from_i64(v / l));
                    }
                }
                continue;
            }
            if let Some(s) = st.sum(a, b) {
                let n = st.n(a, b);
                set(&mut table, r + a, r + b, r + s, Rational::from_i64(n));
            }
        }
    }
    let name = format!("{}{}_split", rs.kind, rs.rank);
    let mut alg = LieAlgebra::from_fn(&name, dim, |i, j| table[i * dim + j].clone());
    alg.cartan = (0..r).map(|i| alg.unit(i)).collect();
    Ok(alg)
}

/// Index of `e_beta` in the Chevalley basis.
pub fn root_vector_index(rs: &RootSystem, beta: &[i64]) -> Option<usize> {
    rs.index_of(beta).map(|i| rs.rank + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(kind: Kind, n: usize) -> LieAlgebra<Rational> {
        let rs = RootSystem::new(kind, n).unwrap();
        chevalley_algebra(&rs, ChevalleyOptions::default()).unwrap()
    }

    #[test]
    fn small_split_forms_satisfy_jacobi() {
        for (k, n, d) in [
            (Kind::A, 1, 3),
            (Kind::A, 2, 8),
            (Kind::A, 3, 15),
            (Kind::B, 2, 10),
            (Kind::C, 2, 10),
            (Kind::C, 3, 21),
            (Kind::B, 3, 21),
            (Kind::D, 4, 28),
            (Kind::G, 2, 14),
        ] {
            let g = build(k, n);
            assert_eq!(g.dim, d);
            let rep = g.jacobi_audit();
            assert!(rep.ok, "{k}{n} fails Jacobi at {:?}", rep.witness);
        }
    }

    #[test]
    fn a1_killing() {
        let g = build(Kind::A, 1);
        let h = g.unit(0);
        assert_eq!(g.killing(&h, &h), Rational::from_i64(8));
    }

    #[test]
    fn e_series_is_gated() {
        let rs = RootSystem::new(Kind::E, 6).unwrap();
        assert!(matches!(chevalley_algebra(&rs, ChevalleyOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn fault_breaks_jacobi() {
        let g = build(Kind::G, 2);
        let bad = g.with_fault(2, 3, 4, Rational::from_i64(1));
        assert!(!bad.jacobi_audit().ok);
    }
}
