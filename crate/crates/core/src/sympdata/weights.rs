//! Weights of a split Cartan of `h` on `V`.
//!
//! Eigenvalues are located numerically, snapped to exact values and then
//! confirmed exactly: the eigenspace dimensions must add up.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{construction, Result};
use crate::grading::TwoGrading;
use crate::liecore::{Coordinates, LieAlgebra};
use crate::linalg::{identity, inverse, kernel, mat_sub, mat_vec, Mat, Subspace};
use crate::scalar::{Field, C64};

use super::SymplecticData;

const MAX_DEN: i64 = 720;

/// Exact eigenvalues of a diagonalizable matrix whose spectrum lies in `S`.
pub fn exact_eigenvalues<S: Field>(m: &Mat<S>) -> Result<Vec<(S, Vec<Vec<S>>)>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dm = DMatrix::<C64>::from_fn(n, n, |i, j| m[i][j].to_c64());
    let Some(ev) = dm.clone().schur().eigenvalues() else {
        return construction("eigenvalue computation failed");
    };
    let mut found: Vec<(S, Vec<Vec<S>>)> = Vec::new();
    for z in ev.iter() {
        let Some(l) = S::snap(*z, MAX_DEN) else {
            return construction(format!("eigenvalue {z} is not in the base field"));
        };
        if found.iter().any(|(x, _)| (x.clone() - l.clone()).is_negligible()) {
            continue;
        }
        let shifted = mat_sub(m, &crate::linalg::mat_scale(&identity(n), &l));
        let k = kernel(&shifted, n);
        if k.is_empty() {
            return construction(format!("snapped eigenvalue {z} has no eigenvector"));
        }
        found.push((l, k));
    }
    let total: usize = found.iter().map(|(_, k)| k.len()).sum();
    if total != n {
        return construction("matrix is not diagonalizable over the base field");
    }
    Ok(found)
}

/// Joint eigenvalues with a basis of the joint eigenspace.
pub type JointEigenspace<S> = (Vec<S>, Vec<Vec<S>>);

/// Joint eigenspaces of commuting operators given as `n x n` matrices.
pub fn joint_eigenspaces<S: Field>(ops: &[Mat<S>], n: usize) -> Result<Vec<JointEigenspace<S>>> {
    let mut spaces: Vec<JointEigenspace<S>> = vec![(Vec::new(), identity(n))];
    for op in ops {
        let mut next = Vec::new();
        for (w, basis) in spaces {
            let c = Coordinates::new(&basis, n)?;
            let cols: Vec<Vec<S>> = basis
                .iter()
                .map(|b| {
                    c.of(&mat_vec(op, b)).ok_or_else(|| crate::Error::Construction("operators do not commute".into()))
                })
                .collect::<Result<_>>()?;
            let d = basis.len();
            let restricted: Mat<S> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
            for (l, k) in exact_eigenvalues(&restricted)? {
                let mut w2 = w.clone();
                w2.push(l);
                let vecs = k.iter().map(|v| crate::linalg::lin_comb(v, &basis, n)).collect();
                next.push((w2, vecs));
            }
        }
        spaces = next;
    }
    Ok(spaces)
}

/// Split Cartan of `h` as coordinates in the `h` basis: the part of the
/// model Cartan lying in `g^0` and commuting with `H`.
pub fn cartan_of_h<S: Field>(g: &LieAlgebra<S>, t: &TwoGrading<S>) -> Result<Vec<Vec<S>>> {
    let c = Subspace::span(&g.cartan, g.dim);
    let h = Subspace::span(&t.h_basis, g.dim);
    let hc = Coordinates::new(&t.h_basis, g.dim)?;
    c.intersect(&h)
        .basis()
        .iter()
        .map(|v| hc.of(v).ok_or_else(|| crate::Error::Construction("Cartan not in h".into())))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WeightReport {
    pub algebra: String,
    pub cartan_dim: usize,
    pub weights: Vec<Vec<String>>,
    pub multiplicities: Vec<usize>,
    pub all_one_dimensional: bool,
    pub closed_under_negation: bool,
    pub long_weight: Vec<String>,
    /// Sizes of the classes `-3, -1, 1, 3`.
    pub partition: [usize; 4],
    pub partition_ok: bool,
    pub eigenvalue_identity: bool,
}

impl WeightReport {
    pub fn ok(&self) -> bool {
        self.all_one_dimensional && self.closed_under_negation && self.partition_ok && self.eigenvalue_identity
    }
}

fn same<S: Field>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible())
}

fn fmt<S: Field>(w: &[S]) -> Vec<String> {
    w.iter()
        .map(|x| {
            let z = x.to_c64();
            if z.im.abs() < 1e-12 {
                format!("{}", z.re)
            } else {
                format!("{}+{}i", z.re, z.im)
            }
        })
        .collect()
}

/// Checks the weight structure of `V` under `cartan` (coordinates in `h`).
pub fn weight_audit<S: Field>(d: &SymplecticData<S>, cartan: &[Vec<S>]) -> Result<WeightReport> {
    let (n, m) = (d.dim_v(), d.dim_h());
    let ops: Vec<Mat<S>> = cartan.iter().map(|t| d.act_matrix(t)).collect();
    let spaces = joint_eigenspaces(&ops, n)?;
    let ad: Vec<Mat<S>> = cartan
        .iter()
        .map(|t| {
            let cols: Vec<Vec<S>> = (0..m).map(|j| d.h_bracket(t, &d.unit_h(j))).collect();
            (0..m).map(|i| (0..m).map(|j| cols[j][i].clone()).collect()).collect()
        })
        .collect();
    let roots: Vec<Vec<S>> = joint_eigenspaces(&ad, m)?
        .into_iter()
        .map(|(w, _)| w)
        .filter(|w| !w.iter().all(|x| x.is_negligible()))
        .collect();

    let weights: Vec<Vec<S>> = spaces.iter().map(|(w, _)| w.clone()).collect();
    let multiplicities: Vec<usize> = spaces.iter().map(|(_, b)| b.len()).collect();
    let all_one = multiplicities.iter().all(|&k| k == 1);
    let neg = |w: &[S]| -> Vec<S> { w.iter().map(|x| -x.clone()).collect() };
    let closed = weights.iter().all(|w| weights.iter().any(|u| same(u, &neg(w))));

    // lengths through the dual of ( , ) restricted to the Cartan
    let gram: Mat<S> =
        cartan.iter().map(|a| cartan.iter().map(|b| super::bilinear(&d.h_form, a, b)).collect()).collect();
    let Some(ginv) = inverse(&gram) else {
        return construction("form is degenerate on the Cartan");
    };
    let len2 = |w: &[S]| super::bilinear(&ginv, w, w);
    let lens: Vec<C64> = weights.iter().map(|w| len2(w).to_c64()).collect();
    let mut i0 = 0;
    for (i, l) in lens.iter().enumerate() {
        if l.norm() > lens[i0].norm() + 1e-9 {
            i0 = i;
        }
    }
    let l0 = weights[i0].clone();
    let diff = |a: &[S], b: &[S]| -> Vec<S> { a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect() };
    let is_root = |r: &[S]| roots.iter().any(|x| same(x, r));
    let mut class = Vec::with_capacity(weights.len());
    for w in &weights {
        let c = if same(w, &l0) {
            vec![3]
        } else if same(w, &neg(&l0)) {
            vec![-3]
        } else {
            let mut c = Vec::new();
            if is_root(&diff(&l0, w)) {
                c.push(1);
            }
            if is_root(&diff(&neg(&l0), w)) {
                c.push(-1);
            }
            c
        };
        class.push(c);
    }
    let partition_ok = class.iter().all(|c| c.len() == 1);
    let mut partition = [0usize; 4];
    for c in class.iter().filter(|c| c.len() == 1) {
        partition[match c[0] {
            -3 => 0,
            -1 => 1,
            1 => 2,
            _ => 3,
        }] += 1;
    }
    let partition_ok = partition_ok && partition[0] == 1 && partition[3] == 1;

    // (v+ o v-) w_r = -2r omega(v+, v-) w_r with r = class / 2
    let ineg = weights.iter().position(|w| same(w, &neg(&l0)));
    let eigenvalue_identity = match (partition_ok, ineg) {
        (true, Some(ineg)) => {
            let vp = &spaces[i0].1[0];
            let vm = &spaces[ineg].1[0];
            let om = d.omega(vp, vm);
            let t = d.circ(vp, vm);
            !om.is_negligible()
                && spaces.iter().zip(&class).all(|((_, b), c)| {
                    b.iter().all(|w| {
                        let lhs = d.act(&t, w);
                        let f = -S::from_i64(c[0]) * om.clone();
                        lhs.iter().zip(w).all(|(x, y)| (x.clone() - f.clone() * y.clone()).is_negligible())
                    })
                })
        }
        _ => false,
    };

    Ok(WeightReport {
        algebra: d.name.clone(),
        cartan_dim: cartan.len(),
        weights: weights.iter().map(|w| fmt(w)).collect(),
        multiplicities,
        all_one_dimensional: all_one,
        closed_under_negation: closed,
        long_weight: fmt(&l0),
        partition,
        partition_ok,
        eigenvalue_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::matrix_forms::{build, AlgebraSpec};
    use crate::liecore::ChevalleyOptions;
    use crate::scalar::{GaussianRational, Rational};

    fn setup(s: &str) -> (LieAlgebra<Rational>, TwoGrading<Rational>, SymplecticData<Rational>) {
        let p = build(&s.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
        let t = TwoGrading::new(&p.algebra, &p.seed).unwrap();
        let d = SymplecticData::from_grading(&p.algebra, &t).unwrap();
        (p.algebra, t, d)
    }

    #[test]
    fn g2_weights() {
        let (g, t, d) = setup("g2_split");
        let c = cartan_of_h(&g, &t).unwrap();
        assert_eq!(c.len(), 1);
        let r = weight_audit(&d, &c).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.partition, [1, 1, 1, 1]);
        // weights are proportional to 3, 1, -1, -3
        let mut w: Vec<f64> = r.weights.iter().map(|x| x[0].parse().unwrap()).collect();
        w.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s = w[3] / 3.0;
        for (x, e) in w.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((x - e * s).abs() < 1e-12);
        }
    }

    #[test]
    fn sl4_weights() {
        let (g, t, d) = setup("sl_real:4");
        let c = cartan_of_h(&g, &t).unwrap();
        assert_eq!(c.len(), 2);
        let r = weight_audit(&d, &c).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.partition, [1, 1, 1, 1]);
    }

    #[test]
    fn su22_weights_after_complexifying() {
        let (g, t, d) = setup("su:2,2");
        let dc: SymplecticData<GaussianRational> = d.map(GaussianRational::from_rational);
        let c: Vec<Vec<GaussianRational>> = cartan_of_h(&g, &t)
            .unwrap()
            .iter()
            .map(|v| v.iter().map(GaussianRational::from_rational).collect())
            .collect();
        assert_eq!(c.len(), 2);
        let r = weight_audit(&dc, &c).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}
