//! Formal curvature spaces of special symplectic data.
//!
//! `K(h)` consists of antisymmetric `R: V x V -> h` with
//! `R(x,y)z + R(y,z)x + R(z,x)y = 0`. It splits as `R_h + W_h`, where
//! `R_h(x,y) = 2 omega(x,y) h + x o (hy) - y o (hx)` and `W_h` is the kernel of `Ric`.

use serde::Serialize;

use crate::error::{construction, Error, Result};
use crate::linalg::{inverse, kernel, lin_comb, rank, Mat, Subspace};
use crate::scalar::Field;
use crate::sympdata::{weights::exact_eigenvalues, Check, SymplecticData};

/// Ordered pairs `i < j`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Position of `(i, j)` among [`pairs`] and the sign relating `R(v_i, v_j)` to it.
pub fn pair_index(n: usize, i: usize, j: usize) -> Option<(usize, bool)> {
    if i == j {
        return None;
    }
    let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
    Some((a * n - a * (a + 1) / 2 + (b - a - 1), neg))
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Budget {
    pub max_v: usize,
    pub max_h: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_v: 8, max_h: 16 }
    }
}

impl Budget {
    pub fn check(&self, n: usize, m: usize) -> Result<()> {
        if n > self.max_v || m > self.max_h {
            return Err(Error::Budget(format!(
                "dim V = {n}, dim h = {m} exceeds budget ({}, {})",
                self.max_v, self.max_h
            )));
        }
        Ok(())
    }
}

/// `R: Lambda^2 V -> h`, one row of `h` coordinates per pair `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureElement<S> {
    pub n: usize,
    pub table: Vec<Vec<S>>,
}

impl<S: Field> CurvatureElement<S> {
    pub fn zero(n: usize, m: usize) -> Self {
        CurvatureElement { n, table: vec![vec![S::zero(); m]; n * n.saturating_sub(1) / 2] }
    }

    pub fn from_flat(n: usize, m: usize, flat: &[S]) -> Self {
        CurvatureElement { n, table: flat.chunks(m.max(1)).map(|c| c.to_vec()).collect() }
    }

    pub fn flat(&self) -> Vec<S> {
        self.table.concat()
    }

    /// `R(v_i, v_j)` in `h` coordinates.
    pub fn at(&self, i: usize, j: usize) -> Vec<S> {
        let m = self.table.first().map_or(0, |r| r.len());
        match pair_index(self.n, i, j) {
            None => vec![S::zero(); m],
            Some((k, false)) => self.table[k].clone(),
            Some((k, true)) => self.table[k].iter().map(|x| -x.clone()).collect(),
        }
    }

    /// `R(x, y)` for arbitrary vectors.
    pub fn eval(&self, x: &[S], y: &[S]) -> Vec<S> {
        let m = self.table.first().map_or(0, |r| r.len());
        let mut out = vec![S::zero(); m];
        for (k, &(i, j)) in pairs(self.n).iter().enumerate() {
            let c = x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.table[k]) {
                *o = o.clone() + c.clone() * r.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().flatten().all(|x| x.is_negligible())
    }
}

/// `R(x,y)z + R(y,z)x + R(z,x)y` on basis vectors.
pub fn bianchi_residual<S: Field>(
    d: &SymplecticData<S>,
    r: &CurvatureElement<S>,
    i: usize,
    j: usize,
    k: usize,
) -> Vec<S> {
    let e = |a| d.unit_v(a);
    let terms = [d.act(&r.at(i, j), &e(k)), d.act(&r.at(j, k), &e(i)), d.act(&r.at(k, i), &e(j))];
    (0..d.dim_v()).map(|a| terms.iter().fold(S::zero(), |s, t| s + t[a].clone())).collect()
}

pub fn satisfies_bianchi<S: Field>(d: &SymplecticData<S>, r: &CurvatureElement<S>) -> bool {
    let n = d.dim_v();
    (0..n).all(|i| {
        (i + 1..n).all(|j| (j + 1..n).all(|k| bianchi_residual(d, r, i, j, k).iter().all(|x| x.is_negligible())))
    })
}

/// Basis of `K(h)`.
pub fn bianchi_kernel<S: Field>(d: &SymplecticData<S>, budget: Budget) -> Result<Vec<CurvatureElement<S>>> {
    let (n, m) = (d.dim_v(), d.dim_h());
    budget.check(n, m)?;
    let ps = pairs(n);
    let ncols = ps.len() * m;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                // column (pair p, h_a) contributes h_a v_z with the sign of the pair
                let mut block = vec![vec![S::zero(); ncols]; n];
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let (p, neg) = pair_index(n, x, y).expect("distinct");
                    for a in 0..m {
                        for (out, row) in block.iter_mut().enumerate() {
                            let v = d.action[a][out][z].clone();
                            if v.is_zero() {
                                continue;
                            }
                            let c = p * m + a;
                            row[c] = if neg { row[c].clone() - v } else { row[c].clone() + v };
                        }
                    }
                }
                rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
            }
        }
    }
    Ok(kernel(&rows, ncols).iter().map(|v| CurvatureElement::from_flat(n, m, v)).collect())
}

/// `R_h(x, y) = 2 omega(x, y) h + x o (hy) - y o (hx)`.
pub fn embed_rh<S: Field>(d: &SymplecticData<S>, h: &[S]) -> CurvatureElement<S> {
    let n = d.dim_v();
    let two = S::from_i64(2);
    let hv: Vec<Vec<S>> = (0..n).map(|i| d.act(h, &d.unit_v(i))).collect();
    let table = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let a = d.circ(&d.unit_v(i), &hv[j]);
            let b = d.circ(&d.unit_v(j), &hv[i]);
            let w = two.clone() * d.omega[i][j].clone();
            (0..d.dim_h()).map(|k| w.clone() * h[k].clone() + a[k].clone() - b[k].clone()).collect()
        })
        .collect();
    CurvatureElement { n, table }
}

/// `Ric(R)(x, y) = tr(R(x, .) y)` as a matrix.
pub fn ricci_trace<S: Field>(d: &SymplecticData<S>, r: &CurvatureElement<S>) -> Mat<S> {
    let n = d.dim_v();
    let mut out = vec![vec![S::zero(); n]; n];
    for (x, row) in out.iter_mut().enumerate() {
        for z in 0..n {
            let mz = d.act_matrix(&r.at(x, z));
            for (y, o) in row.iter_mut().enumerate() {
                *o = o.clone() + mz[z][y].clone();
            }
        }
    }
    out
}

/// `R(omega^{-1}) = -sum_{i<j} (Omega^{-1})_{ij} R(v_i, v_j)`, the contraction with
/// the bivector dual to `omega`.
pub fn contraction<S: Field>(d: &SymplecticData<S>, r: &CurvatureElement<S>) -> Result<Vec<S>> {
    let inv = inverse(&d.omega).ok_or_else(|| Error::Construction("omega is degenerate".into()))?;
    let mut out = vec![S::zero(); d.dim_h()];
    for (k, (i, j)) in pairs(d.dim_v()).into_iter().enumerate() {
        let c = inv[i][j].clone();
        if c.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(&r.table[k]) {
            *o = o.clone() - c.clone() * v.clone();
        }
    }
    Ok(out)
}

/// `Ric(R)(x, y) = -omega(R(omega^{-1}) x, y)` as a matrix.
pub fn ricci_omega<S: Field>(d: &SymplecticData<S>, r: &CurvatureElement<S>) -> Result<Mat<S>> {
    let n = d.dim_v();
    let c = d.act_matrix(&contraction(d, r)?);
    Ok((0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let cx: Vec<S> = (0..n).map(|a| c[a][x].clone()).collect();
                    -d.omega(&cx, &d.unit_v(y))
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct Ricci<S> {
    pub trace_form: Mat<S>,
    pub omega_form: Mat<S>,
}

impl<S: Field> Ricci<S> {
    pub fn agree(&self) -> bool {
        mat_close(&self.trace_form, &self.omega_form)
    }

    pub fn symmetric(&self) -> bool {
        let n = self.trace_form.len();
        (0..n).all(|i| (0..n).all(|j| (self.trace_form[i][j].clone() - self.trace_form[j][i].clone()).is_negligible()))
    }

    pub fn is_zero(&self) -> bool {
        self.trace_form.iter().flatten().all(|x| x.is_negligible())
    }
}

fn mat_close<S: Field>(a: &Mat<S>, b: &Mat<S>) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x.clone() - y.clone()).is_negligible())
}

pub fn ricci<S: Field>(d: &SymplecticData<S>, r: &CurvatureElement<S>) -> Result<Ricci<S>> {
    Ok(Ricci { trace_form: ricci_trace(d, r), omega_form: ricci_omega(d, r)? })
}

#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    pub k_basis: Vec<CurvatureElement<S>>,
    pub r_basis: Vec<CurvatureElement<S>>,
    pub w_basis: Vec<CurvatureElement<S>>,
}

impl<S: Field> Decomposition<S> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.k_basis.len(), self.r_basis.len(), self.w_basis.len())
    }

    /// `R_h` and `W_h` are independent and together span `K`.
    pub fn is_direct_sum(&self) -> bool {
        let all: Vec<Vec<S>> = self.r_basis.iter().chain(&self.w_basis).map(|r| r.flat()).collect();
        let k: Vec<Vec<S>> = self.k_basis.iter().map(|r| r.flat()).collect();
        let dim = k.first().map_or(0, |v| v.len());
        rank(&all) == all.len() && all.len() == k.len() && Subspace::span(&all, dim).equals(&Subspace::span(&k, dim))
    }
}

/// Splits `K` into the image of `h -> R_h` and the kernel of `Ric`.
pub fn decompose<S: Field>(d: &SymplecticData<S>, k_basis: Vec<CurvatureElement<S>>) -> Result<Decomposition<S>> {
    let (n, m) = (d.dim_v(), d.dim_h());
    let r_basis: Vec<CurvatureElement<S>> = (0..m).map(|a| embed_rh(d, &d.unit_h(a))).collect();
    if let Some(a) = r_basis.iter().position(|r| !satisfies_bianchi(d, r)) {
        return construction(format!("R_h for basis element {a} violates Bianchi"));
    }
    // Ric(sum c_b K_b) = 0, one equation per matrix entry
    let rics: Vec<Mat<S>> = k_basis.iter().map(|r| ricci_trace(d, r)).collect();
    let eqs: Vec<Vec<S>> = (0..n * n).map(|e| rics.iter().map(|ric| ric[e / n][e % n].clone()).collect()).collect();
    let flat: Vec<Vec<S>> = k_basis.iter().map(|r| r.flat()).collect();
    let w_basis = kernel(&eqs, k_basis.len())
        .iter()
        .map(|c| CurvatureElement::from_flat(n, m, &lin_comb(c, &flat, pairs(n).len() * m)))
        .collect();
    Ok(Decomposition { k_basis, r_basis, w_basis })
}

/// Splitting `V = W + W*` into the eigenspaces of the centre of `h`.
#[derive(Clone, Debug)]
pub struct BiLagrangian<S> {
    pub w: Vec<Vec<S>>,
    pub w_dual: Vec<Vec<S>>,
}

/// Finds `W` and `W*` when `h` has a one-dimensional centre acting with two eigenvalues.
pub fn bilagrangian_split<S: Field>(d: &SymplecticData<S>) -> Result<BiLagrangian<S>> {
    let m = d.dim_h();
    let eqs: Vec<Vec<S>> = (0..m)
        .flat_map(|b| (0..m).map(move |k| (b, k)))
        .map(|(b, k)| (0..m).map(|a| d.bracket[a][b][k].clone()).collect())
        .collect();
    let centre = kernel(&eqs, m);
    if centre.len() != 1 {
        return Err(Error::InvalidInput(format!("centre of h has dimension {}", centre.len())));
    }
    let mut spaces = exact_eigenvalues(&d.act_matrix(&centre[0]))?;
    if spaces.len() != 2 {
        return Err(Error::InvalidInput("centre does not split V in two".into()));
    }
    spaces.sort_by(|a, b| a.0.real_f64().partial_cmp(&b.0.real_f64()).unwrap_or(std::cmp::Ordering::Equal));
    let (w_dual, w) = (spaces[0].1.clone(), spaces[1].1.clone());
    let lagrangian = |s: &[Vec<S>]| s.iter().all(|x| s.iter().all(|y| d.omega(x, y).is_negligible()));
    if w.len() != w_dual.len() || !lagrangian(&w) || !lagrangian(&w_dual) {
        return Err(Error::InvalidInput("eigenspaces are not complementary Lagrangians".into()));
    }
    Ok(BiLagrangian { w, w_dual })
}

/// `sigma_R(x, y, z, w) = omega(w, R(z, x) y)` for `x, y` in `W` and `z, w` in `W*`,
/// flattened in that index order.
pub fn sigma<S: Field>(d: &SymplecticData<S>, split: &BiLagrangian<S>, r: &CurvatureElement<S>) -> Vec<S> {
    let mut out = Vec::new();
    for x in &split.w {
        for y in &split.w {
            for z in &split.w_dual {
                let rzx = d.act(&r.eval(z, x), y);
                for w in &split.w_dual {
                    out.push(d.omega(w, &rzx));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SigmaReport {
    pub dim_w: usize,
    pub symmetric: bool,
    pub vanishes_on_lagrangians: bool,
    pub rank: usize,
    pub target_dim: usize,
}

impl SigmaReport {
    pub fn bijective(&self, dim_k: usize) -> bool {
        self.symmetric && self.vanishes_on_lagrangians && self.rank == dim_k && self.rank == self.target_dim
    }
}

pub fn sigma_correspondence<S: Field>(d: &SymplecticData<S>, k_basis: &[CurvatureElement<S>]) -> Result<SigmaReport> {
    let split = bilagrangian_split(d)?;
    let k = split.w.len();
    let idx = |x: usize, y: usize, z: usize, w: usize| ((x * k + y) * k + z) * k + w;
    let mut symmetric = true;
    let mut vanishes = true;
    let mut images = Vec::new();
    for r in k_basis {
        let s = sigma(d, &split, r);
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    for w in 0..k {
                        let v = s[idx(x, y, z, w)].clone();
                        symmetric &= (v.clone() - s[idx(y, x, z, w)].clone()).is_negligible()
                            && (v - s[idx(x, y, w, z)].clone()).is_negligible();
                    }
                }
            }
        }
        for side in [&split.w, &split.w_dual] {
            for a in side.iter() {
                for b in side.iter() {
                    vanishes &= r.eval(a, b).iter().all(|x| x.is_negligible());
                }
            }
        }
        images.push(s);
    }
    let sym2 = k * (k + 1) / 2;
    Ok(SigmaReport {
        dim_w: k,
        symmetric,
        vanishes_on_lagrangians: vanishes,
        rank: rank(&images),
        target_dim: sym2 * sym2,
    })
}

/// `psi: V -> R_h` stored as `psi(v_i) = R_{phi_i}`.
#[derive(Clone, Debug)]
pub struct Prolongation<S> {
    /// Each element is `phi_0, ..., phi_{n-1}` concatenated.
    pub basis: Vec<Vec<S>>,
    pub psi_u_dim: usize,
    pub psi_u_inside: bool,
}

/// `psi_u(x) = R_{u o x}`, flattened.
pub fn psi_u<S: Field>(d: &SymplecticData<S>, u: &[S]) -> Vec<S> {
    (0..d.dim_v()).flat_map(|i| d.circ(u, &d.unit_v(i))).collect()
}

/// Cyclic residual `psi(x)(y,z) + psi(y)(z,x) + psi(z)(x,y)` on basis triples.
pub fn cyclic_residual_zero<S: Field>(d: &SymplecticData<S>, rh: &[CurvatureElement<S>], phi: &[S]) -> bool {
    let (n, m) = (d.dim_v(), d.dim_h());
    let r_of = |i: usize, a: usize, b: usize| -> Vec<S> {
        let mut out = vec![S::zero(); m];
        for (c, r) in phi[i * m..(i + 1) * m].iter().zip(rh) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(r.at(a, b)) {
                *o = o.clone() + c.clone() * v;
            }
        }
        out
    };
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            (j + 1..n).all(|l| {
                let (a, b, c) = (r_of(i, j, l), r_of(j, l, i), r_of(l, i, j));
                (0..m).all(|k| (a[k].clone() + b[k].clone() + c[k].clone()).is_negligible())
            })
        })
    })
}

pub fn prolongation<S: Field>(d: &SymplecticData<S>, budget: Budget) -> Result<Prolongation<S>> {
    let (n, m) = (d.dim_v(), d.dim_h());
    budget.check(n, m)?;
    let rh: Vec<CurvatureElement<S>> = (0..m).map(|a| embed_rh(d, &d.unit_h(a))).collect();
    let ncols = n * m;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let mut block = vec![vec![S::zero(); ncols]; m];
                for (x, a, b) in [(i, j, l), (j, l, i), (l, i, j)] {
                    for (c, r) in rh.iter().enumerate() {
                        for (k, v) in r.at(a, b).into_iter().enumerate() {
                            block[k][x * m + c] = block[k][x * m + c].clone() + v;
                        }
                    }
                }
                rows.extend(block);
            }
        }
    }
    let basis = kernel(&rows, ncols);
    let psis: Vec<Vec<S>> = (0..n).map(|u| psi_u(d, &d.unit_v(u))).collect();
    let span = Subspace::span(&basis, ncols);
    let psi_u_inside = psis.iter().all(|p| span.contains(p) && cyclic_residual_zero(d, &rh, p));
    Ok(Prolongation { basis, psi_u_dim: rank(&psis), psi_u_inside })
}

/// Endomorphisms `phi` of `V` with `phi(x) o y = phi(y) o x`; columns of `phi` flattened.
pub fn schur_space<S: Field>(d: &SymplecticData<S>) -> Vec<Vec<S>> {
    let (n, m) = (d.dim_v(), d.dim_h());
    // unknown phi[a][x] at column x * n + a
    let mut rows = Vec::new();
    for (x, y) in pairs(n) {
        let mut block = vec![vec![S::zero(); n * n]; m];
        for a in 0..n {
            for k in 0..m {
                let p = d.circle[a][y][k].clone();
                let q = d.circle[a][x][k].clone();
                block[k][x * n + a] = block[k][x * n + a].clone() + p;
                block[k][y * n + a] = block[k][y * n + a].clone() - q;
            }
        }
        rows.extend(block);
    }
    kernel(&rows, n * n)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CurvatureReport {
    pub algebra: String,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimH")]
    pub dim_h: usize,
    #[serde(rename = "dimK")]
    pub dim_k: usize,
    #[serde(rename = "dimR")]
    pub dim_r: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    pub prolongation_dim: usize,
    pub schur_dim: usize,
    pub checks: Vec<Check>,
}

pub fn report<S: Field>(d: &SymplecticData<S>, budget: Budget) -> Result<CurvatureReport> {
    let k = bianchi_kernel(d, budget)?;
    let dec = decompose(d, k)?;
    let (dk, dr, dw) = dec.dims();
    let pro = prolongation(d, budget)?;
    let schur = schur_space(d);
    let mut checks = vec![
        Check::new("basis of K satisfies Bianchi", dec.k_basis.iter().all(|r| satisfies_bianchi(d, r)), None),
        Check::new(
            "h -> R_h injective",
            rank(&dec.r_basis.iter().map(|r| r.flat()).collect::<Vec<_>>()) == d.dim_h(),
            None,
        ),
        Check::new(
            "Ric(R_h) = 0 only for h = 0",
            rank(&dec.r_basis.iter().map(|r| ricci_trace(d, r).concat()).collect::<Vec<_>>()) == d.dim_h(),
            None,
        ),
        Check::new("K = R_h + W_h", dec.is_direct_sum(), Some(format!("{:?}", dec.dims()))),
    ];
    let mut agree = true;
    let mut sym = true;
    for r in &dec.k_basis {
        let ric = ricci(d, r)?;
        agree &= ric.agree();
        sym &= ric.symmetric();
    }
    checks.push(Check::new("Ricci formulas agree on K", agree, None));
    checks.push(Check::new("Ric symmetric on K", sym, None));
    checks.push(Check::new("psi_u lies in the prolongation", pro.psi_u_inside, None));
    let id: Vec<S> = (0..d.dim_v()).flat_map(|x| d.unit_v(x)).collect();
    let schur_span = Subspace::span(&schur, d.dim_v() * d.dim_v());
    checks.push(Check::new("identity solves the Schur condition", schur_span.contains(&id), None));
    Ok(CurvatureReport {
        algebra: d.name.clone(),
        dim_v: d.dim_v(),
        dim_h: d.dim_h(),
        dim_k: dk,
        dim_r: dr,
        dim_w: dw,
        prolongation_dim: pro.basis.len(),
        schur_dim: schur.len(),
        checks,
    })
}

/// Random antisymmetric `R` with small integer entries.
pub fn random_element<S: Field>(n: usize, m: usize, rng: &mut impl rand::Rng) -> CurvatureElement<S> {
    let flat: Vec<S> = (0..pairs(n).len() * m).map(|_| S::from_i64(rng.random_range(-5..=5))).collect();
    CurvatureElement::from_flat(n, m, &flat)
}

/// Random element of the span of `basis`.
pub fn random_combination<S: Field>(
    basis: &[CurvatureElement<S>],
    rng: &mut impl rand::Rng,
) -> Option<CurvatureElement<S>> {
    let first = basis.first()?;
    let m = first.table.first().map_or(0, |r| r.len());
    let c: Vec<S> = basis.iter().map(|_| S::from_i64(rng.random_range(-5..=5))).collect();
    let flat: Vec<Vec<S>> = basis.iter().map(|r| r.flat()).collect();
    Some(CurvatureElement::from_flat(first.n, m, &lin_comb(&c, &flat, first.table.len() * m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::TwoGrading;
    use crate::liecore::matrix_forms::{build, AlgebraSpec};
    use crate::liecore::ChevalleyOptions;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(s: &str) -> SymplecticData<Rational> {
        let p = build(&s.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
        let t = TwoGrading::new(&p.algebra, &p.seed).unwrap();
        SymplecticData::from_grading(&p.algebra, &t).unwrap()
    }

    #[test]
    fn pair_index_is_consistent() {
        for n in 2..7 {
            for (k, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), Some((k, false)));
                assert_eq!(pair_index(n, j, i), Some((k, true)));
            }
        }
    }

    #[test]
    fn dimension_table() {
        for (s, dims, pro) in [
            ("sp_real:2", (3, 3, 0), 6),
            ("sl_real:3", (1, 1, 0), 2),
            ("sl_real:4", (9, 4, 5), 4),
            ("g2_split", (3, 3, 0), 4),
            ("sp_real:3", (45, 10, 35), 4),
            ("su:2,2", (9, 4, 5), 4),
        ] {
            let d = data(s);
            let r = report(&d, Budget::default()).unwrap();
            assert_eq!((r.dim_k, r.dim_r, r.dim_w), dims, "{s}");
            assert_eq!(r.prolongation_dim, pro, "{s}");
            for c in &r.checks {
                assert!(c.pass, "{s}: {}", c.name);
            }
        }
    }

    #[test]
    fn rh_of_cartan_in_sp2() {
        let d = data("sp_real:2");
        let r = embed_rh(&d, &d.unit_h(0));
        assert!(satisfies_bianchi(&d, &r));
        assert!(embed_rh(&d, &vec![Rational::from_i64(0); 3]).is_zero());
    }

    #[test]
    fn ricci_on_random_k_elements() {
        let d = data("sl_real:4");
        let k = bianchi_kernel(&d, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = random_combination(&k, &mut rng).unwrap();
            let ric = ricci(&d, &r).unwrap();
            assert!(ric.agree() && ric.symmetric());
        }
    }

    #[test]
    fn ricci_formulas_off_k() {
        let d = data("sl_real:4");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let disagree =
            (0..20).filter(|_| !ricci(&d, &random_element::<Rational>(4, 4, &mut rng)).unwrap().agree()).count();
        assert!(disagree > 0);
    }

    #[test]
    fn schur_is_scalar_for_dim_v_four() {
        for s in ["g2_split", "sl_real:4"] {
            assert_eq!(schur_space(&data(s)).len(), 1, "{s}");
        }
    }

    #[test]
    fn sigma_is_bijective_for_gl() {
        for s in ["sl_real:3", "sl_real:4"] {
            let d = data(s);
            let k = bianchi_kernel(&d, Budget::default()).unwrap();
            let rep = sigma_correspondence(&d, &k).unwrap();
            assert!(rep.bijective(k.len()), "{s}: {rep:?}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d = data("sl_real:4");
        assert!(matches!(bianchi_kernel(&d, Budget { max_v: 2, max_h: 16 }), Err(Error::Budget(_))));
    }
}
