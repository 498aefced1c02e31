//! Kernels, ranks and subspaces over a [`Field`].
//!
//! Rows are stored sparsely. Exact fields pivot on the sparsest candidate row,
//! floating fields on the largest entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Field, Rational};

/// Dense matrix, row major.
pub type Mat<S> = Vec<Vec<S>>;

type Row<S> = Vec<(usize, S)>;

fn sparse<S: Field>(dense: &[S]) -> Row<S> {
    dense.iter().enumerate().filter(|(_, x)| !x.is_negligible()).map(|(i, x)| (i, x.clone())).collect()
}

fn entry<S: Field>(row: &Row<S>, col: usize) -> Option<&S> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// `a - f * b`, dropping entries that vanish.
fn axpy<S: Field>(a: &Row<S>, f: &S, b: &Row<S>) -> Row<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = -(f.clone() * b[j].1.clone());
            if !v.is_negligible() {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = a[i].1.clone() - f.clone() * b[j].1.clone();
            if !v.is_negligible() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub ncols: usize,
    rows: Vec<Row<S>>,
    pub pivots: Vec<usize>,
}

impl<S: Field> Rref<S> {
    pub fn new(m: &[Vec<S>], ncols: usize) -> Self {
        let rows: Vec<Row<S>> = m.iter().map(|r| sparse(r)).collect();
        Self::from_sparse(rows, ncols)
    }

    fn from_sparse(mut pending: Vec<Row<S>>, ncols: usize) -> Self {
        pending.retain(|r| !r.is_empty());
        let mut done: Vec<Row<S>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            let mut best: Option<usize> = None;
            for (k, r) in pending.iter().enumerate() {
                let Some(v) = entry(r, col) else { continue };
                best = match best {
                    None => Some(k),
                    Some(b) => {
                        let better = if S::EXACT {
                            r.len() < pending[b].len()
                        } else {
                            v.magnitude() > entry(&pending[b], col).unwrap().magnitude()
                        };
                        if better {
                            Some(k)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(b) = best else { continue };
            let mut prow = pending.swap_remove(b);
            let inv = S::one() / entry(&prow, col).unwrap().clone();
            for e in prow.iter_mut() {
                e.1 = e.1.clone() * inv.clone();
            }
            let fix = |r: &mut Row<S>| {
                if let Some(f) = entry(r, col).cloned() {
                    *r = axpy(r, &f, &prow);
                }
            };
            pending.iter_mut().for_each(fix);
            done.iter_mut().for_each(fix);
            pending.retain(|r| !r.is_empty());
            done.push(prow);
            pivots.push(col);
        }
        Rref { ncols, rows: done, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Row `k` of the reduced form as a dense vector.
    pub fn row(&self, k: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.ncols];
        for (c, x) in &self.rows[k] {
            v[*c] = x.clone();
        }
        v
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.rank()).map(|k| self.row(k)).collect()
    }

    /// Non-pivot columns, in order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let mut out = Vec::new();
        for f in self.free_columns() {
            let mut v = vec![S::zero(); self.ncols];
            v[f] = S::one();
            for (k, &p) in self.pivots.iter().enumerate() {
                if let Some(x) = entry(&self.rows[k], f) {
                    v[p] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// Reduces `v` against the rows; the remainder is zero iff `v` is in the row space.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut r = sparse(v);
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(f) = entry(&r, p).cloned() {
                r = axpy(&r, &f, &self.rows[k]);
            }
        }
        let mut out = vec![S::zero(); self.ncols];
        for (c, x) in r {
            out[c] = x;
        }
        out
    }
}

/// Null space basis of `m` (rows of length `ncols`).
pub fn kernel<S: Field>(m: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    Rref::new(m, ncols).kernel()
}

pub fn rank<S: Field>(m: &[Vec<S>]) -> usize {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    Rref::new(m, ncols).rank()
}

/// Some solution of `m x = b`, if one exists.
pub fn solve<S: Field>(m: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let aug: Vec<Vec<S>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let rr = Rref::new(&aug, ncols + 1);
    if rr.pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (k, &p) in rr.pivots.iter().enumerate() {
        if let Some(v) = entry(&rr.rows[k], ncols) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

/// Rank by fraction-free integer elimination with row-content reduction,
/// pivoting from the last column backwards. Independent of [`Rref`]; used as a cross-check.
pub fn rank_fraction_free(m: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in (0..ncols).rev() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        for i in rank + 1..rows.len() {
            let f = rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..ncols {
                rows[i][c] = &piv * &rows[i][c] - &f * &rows[rank][c];
            }
            let g = rows[i].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if g > BigInt::one() {
                for x in rows[i].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Subspace of `S^n` held in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    pub ambient: usize,
    rref: Rref<S>,
}

impl<S: Field> Subspace<S> {
    pub fn span(vectors: &[Vec<S>], ambient: usize) -> Self {
        Subspace { ambient, rref: Rref::new(vectors, ambient) }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::span(&[], ambient)
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    /// Echelon basis.
    pub fn basis(&self) -> Vec<Vec<S>> {
        self.rref.rows()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.rref.reduce(v).iter().all(|x| x.is_negligible())
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[S]) -> Option<Vec<S>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rref.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut b = self.basis();
        b.extend(other.basis());
        Self::span(&b, self.ambient)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        // x = sum a_i u_i = sum b_j w_j
        let (u, w) = (self.basis(), other.basis());
        let n = u.len() + w.len();
        let m: Vec<Vec<S>> = (0..self.ambient)
            .map(|c| u.iter().map(|v| v[c].clone()).chain(w.iter().map(|v| -v[c].clone())).collect())
            .collect();
        let ker = kernel(&m, n);
        let vecs: Vec<Vec<S>> = ker.iter().map(|k| lin_comb(&k[..u.len()], &u, self.ambient)).collect();
        Self::span(&vecs, self.ambient)
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.basis().iter().all(|v| self.contains(v))
    }
}

/// `sum c_i v_i`.
pub fn lin_comb<S: Field>(c: &[S], v: &[Vec<S>], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n];
    for (ci, vi) in c.iter().zip(v) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(vi) {
            *o = o.clone() + ci.clone() * x.clone();
        }
    }
    out
}

pub fn identity<S: Field>(n: usize) -> Mat<S> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

pub fn mat_mul<S: Field>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let (n, k) = (a.len(), b.len());
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![S::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].clone() + x.clone() * b[l][j].clone();
                }
            }
        }
    }
    out
}

pub fn mat_vec<S: Field>(a: &Mat<S>, v: &[S]) -> Vec<S> {
    a.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn transpose<S: Field>(a: &Mat<S>) -> Mat<S> {
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn trace<S: Field>(a: &Mat<S>) -> S {
    (0..a.len()).fold(S::zero(), |acc, i| acc + a[i][i].clone())
}

pub fn mat_sub<S: Field>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() - y.clone()).collect()).collect()
}

pub fn mat_add<S: Field>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect()).collect()
}

pub fn mat_scale<S: Field>(a: &Mat<S>, c: &S) -> Mat<S> {
    a.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect()
}

pub fn is_zero_mat<S: Field>(a: &Mat<S>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_negligible()))
}

/// Inverse of a square matrix.
pub fn inverse<S: Field>(a: &Mat<S>) -> Option<Mat<S>> {
    let n = a.len();
    let aug: Vec<Vec<S>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let rr = Rref::new(&aug, 2 * n);
    if rr.pivots.len() < n || rr.pivots[n - 1] != n - 1 {
        return None;
    }
    Some((0..n).map(|k| rr.row(k)[n..].to_vec()).collect())
}

/// Entrywise conversion between fields.
pub fn map_mat<S, T>(a: &Mat<S>, f: impl Fn(&S) -> T) -> Mat<T> {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank(&a), 1);
        assert_eq!(rank_fraction_free(&a), 1);
    }

    #[test]
    fn empty_and_zero_inputs() {
        let a: Mat<Rational> = vec![];
        assert_eq!(kernel(&a, 3).len(), 3);
        let z = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(rank(&z), 0);
        assert_eq!(rank_fraction_free(&z), 0);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let x = solve(&a, &[qi(3), qi(2)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[qi(1), qi(2)]).is_none());
    }

    #[test]
    fn subspace_ops() {
        let e = |i: usize| -> Vec<Rational> { (0..3).map(|j| if i == j { qi(1) } else { qi(0) }).collect() };
        let a = Subspace::span(&[e(0), e(1)], 3);
        let b = Subspace::span(&[e(1), e(2)], 3);
        assert_eq!(a.intersect(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a.contains(&[q(1, 2), qi(5), qi(0)]));
        assert_eq!(a.coords(&[q(1, 2), qi(5), qi(0)]).unwrap(), vec![q(1, 2), qi(5)]);
        assert!(a.coords(&e(2)).is_none());
    }

    #[test]
    fn float_rank_with_noise() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]];
        assert_eq!(rank(&a), 1);
    }
}
