use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{construction, invalid, Error, Result};
use crate::linalg::{inverse, kernel, lin_comb, map_mat, mat_vec, Mat, Rref};
use crate::scalar::{parse_rational, rational_string, Field, GaussianRational, Rational};

/// Sparse vector: sorted `(index, value)` pairs with nonzero values.
pub type SparseVec<S> = Vec<(usize, S)>;

/// Matrix realisation of a real Lie algebra.
///
/// Entries are Gaussian rationals so that unitary forms fit. Basis element `k`
/// is the unique basis matrix whose real or imaginary part at `positions[k]`
/// is 1 while it vanishes there for every other basis matrix.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub size: usize,
    pub mats: Vec<Mat<GaussianRational>>,
    /// `(row, col, imaginary)` read-off position for each coordinate.
    pub positions: Vec<(usize, usize, bool)>,
}

impl MatrixModel {
    /// Coordinates of a matrix that lies in the span of the basis.
    pub fn coords(&self, m: &Mat<GaussianRational>) -> Result<Vec<Rational>> {
        let c: Vec<Rational> =
            self.positions.iter().map(|&(r, s, im)| if im { m[r][s].im.clone() } else { m[r][s].re.clone() }).collect();
        let back = self.matrix(&c);
        if back != *m {
            return invalid("matrix does not lie in the algebra");
        }
        Ok(c)
    }

    pub fn matrix(&self, c: &[Rational]) -> Mat<GaussianRational> {
        let n = self.size;
        let mut out = vec![vec![GaussianRational::from_i64(0); n]; n];
        for (ck, mk) in c.iter().zip(&self.mats) {
            if num_traits::Zero::is_zero(ck) {
                continue;
            }
            let g = GaussianRational::from_rational(ck);
            for i in 0..n {
                for j in 0..n {
                    if !num_traits::Zero::is_zero(&mk[i][j]) {
                        out[i][j] = out[i][j].clone() + g.clone() * mk[i][j].clone();
                    }
                }
            }
        }
        out
    }
}

/// A Lie algebra given by structure constants in a fixed basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra<S> {
    pub name: String,
    pub dim: usize,
    table: Vec<SparseVec<S>>,
    /// Basis of a preferred Cartan subalgebra, possibly empty.
    pub cartan: Vec<Vec<S>>,
    pub model: Option<MatrixModel>,
}

/// Outcome of an exhaustive Jacobi check.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub ok: bool,
    pub witness: Option<(usize, usize, usize)>,
}

fn to_sparse<S: Field>(v: &[S]) -> SparseVec<S> {
    v.iter().enumerate().filter(|(_, x)| !x.is_negligible()).map(|(i, x)| (i, x.clone())).collect()
}

/// Coordinates with respect to a fixed independent family of vectors.
#[derive(Clone, Debug)]
pub struct Coordinates<S> {
    basis: Vec<Vec<S>>,
    cols: Vec<usize>,
    /// Inverse of the basis restricted to `cols`, transposed for `mat_vec`.
    inv_t: Mat<S>,
}

impl<S: Field> Coordinates<S> {
    pub fn new(basis: &[Vec<S>], ambient: usize) -> Result<Self> {
        let rr = Rref::new(basis, ambient);
        if rr.rank() != basis.len() {
            return invalid("basis vectors are linearly dependent");
        }
        let cols = rr.pivots.clone();
        let sq: Mat<S> = basis.iter().map(|b| cols.iter().map(|&c| b[c].clone()).collect()).collect();
        let inv = inverse(&sq).expect("pivot minor is invertible");
        let inv_t = crate::linalg::transpose(&inv);
        Ok(Coordinates { basis: basis.to_vec(), cols, inv_t })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn of(&self, v: &[S]) -> Option<Vec<S>> {
        let restricted: Vec<S> = self.cols.iter().map(|&c| v[c].clone()).collect();
        let c = mat_vec(&self.inv_t, &restricted);
        let back = lin_comb(&c, &self.basis, v.len());
        if back.iter().zip(v).all(|(a, b)| (a.clone() - b.clone()).is_negligible()) {
            Some(c)
        } else {
            None
        }
    }
}

impl<S: Field> LieAlgebra<S> {
    /// Builds from a closure returning `[e_i, e_j]` as a dense vector.
    pub fn from_fn(name: &str, dim: usize, mut f: impl FnMut(usize, usize) -> Vec<S>) -> Self {
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                table.push(to_sparse(&f(i, j)));
            }
        }
        LieAlgebra { name: name.to_string(), dim, table, cartan: Vec::new(), model: None }
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &SparseVec<S> {
        &self.table[i * self.dim + j]
    }

    pub fn unit(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (k, v) in self.basis_bracket(i, j) {
                    out[*k] = out[*k].clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)`; column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[S]) -> Mat<S> {
        let mut m = vec![vec![S::zero(); self.dim]; self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, v) in self.basis_bracket(i, j) {
                    m[*k][j] = m[*k][j].clone() + xi.clone() * v.clone();
                }
            }
        }
        m
    }

    /// Gram matrix of the Killing form, always `tr(ad e_i ad e_j)`.
    pub fn killing_matrix(&self) -> Mat<S> {
        let d = self.dim;
        // ad(e_i)[l][k] = c_{ik}^l
        let ads: Vec<Vec<(usize, usize, S)>> = (0..d)
            .map(|i| {
                let mut v = Vec::new();
                for k in 0..d {
                    for (l, c) in self.basis_bracket(i, k) {
                        v.push((*l, k, c.clone()));
                    }
                }
                v
            })
            .collect();
        let lookup = |j: usize, k: usize, l: usize| -> Option<S> {
            self.basis_bracket(j, l)
                .binary_search_by_key(&k, |e| e.0)
                .ok()
                .map(|p| self.basis_bracket(j, l)[p].1.clone())
        };
        (0..d)
            .into_par_iter()
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut s = S::zero();
                        for (l, k, c) in &ads[i] {
                            if let Some(x) = lookup(j, *k, *l) {
                                s = s + c.clone() * x;
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    pub fn killing(&self, x: &[S], y: &[S]) -> S {
        let ax = self.ad_matrix(x);
        let ay = self.ad_matrix(y);
        let mut s = S::zero();
        for i in 0..self.dim {
            for k in 0..self.dim {
                if !ax[i][k].is_zero() && !ay[k][i].is_zero() {
                    s = s + ax[i][k].clone() * ay[k][i].clone();
                }
            }
        }
        s
    }

    /// Checks antisymmetry and the Jacobi identity on all basis triples.
    pub fn jacobi_audit(&self) -> JacobiReport {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                let a = self.basis_bracket(i, j);
                let b = self.basis_bracket(j, i);
                let neg: SparseVec<S> = b.iter().map(|(k, v)| (*k, -v.clone())).collect();
                if *a != neg {
                    return JacobiReport { ok: false, witness: Some((i, j, j)) };
                }
            }
        }
        let witness = (0..d).into_par_iter().find_map_first(|i| {
            for j in i + 1..d {
                for k in j + 1..d {
                    let t1 = self.bracket(&self.unit(i), &self.sparse_to_dense(self.basis_bracket(j, k)));
                    let t2 = self.bracket(&self.unit(j), &self.sparse_to_dense(self.basis_bracket(k, i)));
                    let t3 = self.bracket(&self.unit(k), &self.sparse_to_dense(self.basis_bracket(i, j)));
                    let bad = (0..d).any(|m| !(t1[m].clone() + t2[m].clone() + t3[m].clone()).is_negligible());
                    if bad {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        JacobiReport { ok: witness.is_none(), witness }
    }

    fn sparse_to_dense(&self, v: &SparseVec<S>) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (k, x) in v {
            out[*k] = x.clone();
        }
        out
    }

    /// Kernel of `ad(a)`.
    pub fn centralizer(&self, a: &[S]) -> Vec<Vec<S>> {
        kernel(&self.ad_matrix(a), self.dim)
    }

    /// Copy with `[e_i, e_j]` shifted by `delta e_k` (and `[e_j, e_i]` by `-delta e_k`).
    pub fn with_fault(&self, i: usize, j: usize, k: usize, delta: S) -> Self {
        let mut out = self.clone();
        for (a, b, s) in [(i, j, delta.clone()), (j, i, -delta)] {
            let mut v = out.sparse_to_dense(out.basis_bracket(a, b));
            v[k] = v[k].clone() + s;
            out.table[a * self.dim + b] = to_sparse(&v);
        }
        out
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            table: self
                .table
                .iter()
                .map(|v| v.iter().map(|(k, x)| (*k, f(x))).filter(|(_, x)| !x.is_negligible()).collect())
                .collect(),
            cartan: self.cartan.iter().map(|v| v.iter().map(&f).collect()).collect(),
            model: self.model.clone(),
        }
    }

    /// Structure constants in the basis given by the rows of `basis`,
    /// which must span a subalgebra.
    pub fn restrict(&self, basis: &[Vec<S>], name: &str) -> Result<LieAlgebra<S>> {
        let m = basis.len();
        let coords = Coordinates::new(basis, self.dim)?;
        let mut table = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let br = self.bracket(&basis[i], &basis[j]);
                let c =
                    coords.of(&br).ok_or_else(|| Error::InvalidInput("span is not closed under the bracket".into()))?;
                table.push(to_sparse(&c));
            }
        }
        Ok(LieAlgebra { name: name.to_string(), dim: m, table, cartan: Vec::new(), model: None })
    }

    /// Structure constants after the change of basis `f_i = sum_j p[i][j] e_j`.
    pub fn change_basis(&self, p: &[Vec<S>]) -> Result<LieAlgebra<S>> {
        if p.len() != self.dim {
            return invalid("change of basis must be square");
        }
        let mut out = self.restrict(p, &self.name)?;
        let coords = Coordinates::new(p, self.dim)?;
        out.cartan = self.cartan.iter().map(|h| coords.of(h).expect("invertible")).collect();
        Ok(out)
    }

    /// Ratio `c` with `B_h = c B_g` on a simple subalgebra spanned by `basis`.
    pub fn killing_ratio(&self, basis: &[Vec<S>]) -> Result<S> {
        let sub = self.restrict(basis, "sub")?;
        let bh = sub.killing_matrix();
        let bg: Mat<S> = basis.iter().map(|x| basis.iter().map(|y| self.killing(x, y)).collect()).collect();
        let mut ratio: Option<S> = None;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if bg[i][j].is_negligible() {
                    if !bh[i][j].is_negligible() {
                        return construction("Killing forms are not proportional");
                    }
                    continue;
                }
                let r = bh[i][j].clone() / bg[i][j].clone();
                match &ratio {
                    None => ratio = Some(r),
                    Some(r0) => {
                        if !(r0.clone() - r).is_negligible() {
                            return construction("Killing forms are not proportional");
                        }
                    }
                }
            }
        }
        ratio.ok_or_else(|| Error::Construction("ambient Killing form vanishes on the span".into()))
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, c: &[S]) -> Vec<S> {
        let basis: Vec<Vec<S>> = (0..self.dim).map(|i| self.unit(i)).collect();
        lin_comb(c, &basis, self.dim)
    }
}

/// `(i, j, [(k, num, den), ...])`.
pub type BracketEntry = (usize, usize, Vec<(usize, String, String)>);

/// Serializable form of rational structure constants.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StructureJson {
    pub name: String,
    pub dim: usize,
    /// `[i, j, [[k, num, den], ...]]` for nonzero brackets with `i < j`.
    pub c: Vec<BracketEntry>,
    pub killing: Vec<Vec<String>>,
    pub cartan: Vec<Vec<String>>,
}

impl LieAlgebra<Rational> {
    pub fn to_json(&self) -> StructureJson {
        let mut c = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.basis_bracket(i, j);
                if v.is_empty() {
                    continue;
                }
                let terms = v.iter().map(|(k, x)| (*k, x.numer().to_string(), x.denom().to_string())).collect();
                c.push((i, j, terms));
            }
        }
        StructureJson {
            name: self.name.clone(),
            dim: self.dim,
            c,
            killing: map_mat(&self.killing_matrix(), rational_string),
            cartan: map_mat(&self.cartan, rational_string),
        }
    }

    /// Rebuilds from JSON and refuses tables that fail the Jacobi audit.
    pub fn from_json(j: &StructureJson) -> Result<Self> {
        let d = j.dim;
        let mut dense = vec![vec![Rational::from_i64(0); d]; d * d];
        for (i, jj, terms) in &j.c {
            if *i >= d || *jj >= d {
                return invalid("structure constant index out of range");
            }
            for (k, n, den) in terms {
                let x = parse_rational(&format!("{n}/{den}"))
                    .ok_or_else(|| Error::InvalidInput(format!("bad rational {n}/{den}")))?;
                dense[i * d + jj][*k] = x.clone();
                dense[jj * d + i][*k] = -x;
            }
        }
        let mut alg = LieAlgebra::from_fn(&j.name, d, |a, b| dense[a * d + b].clone());
        alg.cartan =
            j.cartan.iter().map(|r| r.iter().map(|s| parse_rational(s).unwrap_or_default()).collect()).collect();
        let audit = alg.jacobi_audit();
        if !audit.ok {
            return construction(format!("loaded table fails Jacobi at {:?}", audit.witness));
        }
        let k = map_mat(&alg.killing_matrix(), rational_string);
        if k != j.killing {
            return construction("loaded Killing form does not match the table");
        }
        Ok(alg)
    }
}
