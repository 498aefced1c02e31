//! Contact gradings `g = g^-2 + g^-1 + g^0 + g^1 + g^2` from a maximal root
//! element.
//!
//! Conventions: `e+^2 = 2x`, `e-^2 = -2y`, `e+e- = -h` for an sl2-triple
//! `(x, h, y)`. Then `[e+^2, e-^2] = 4 e+e-`, `ad(h)` is `i` on `g^i`, and
//! `V` is identified with `g^1` through `v -> e+ (x) v`.

use serde::Serialize;

use crate::error::{construction, invalid, Result};
use crate::liecore::{Coordinates, LieAlgebra};
use crate::linalg::{kernel, lin_comb, mat_mul, rank, solve, Mat};
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct TwoGrading<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub h: Vec<S>,
    pub e_plus2: Vec<S>,
    pub e_minus2: Vec<S>,
    pub e_pm: Vec<S>,
    /// Bases of `g^-2 .. g^2`.
    pub blocks: [Vec<Vec<S>>; 5],
    /// `e+ (x) v_i`, a basis of `g^1`.
    pub v_plus: Vec<Vec<S>>,
    /// `e- (x) v_i`, the matching basis of `g^-1`.
    pub v_minus: Vec<Vec<S>>,
    /// Basis of the centralizer of the sl2 inside `g^0`.
    pub h_basis: Vec<Vec<S>>,
}

/// Positions of the frame pieces inside [`TwoGrading::frame`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameLayout {
    pub n: usize,
    pub m: usize,
}

impl FrameLayout {
    pub fn dim(&self) -> usize {
        3 + 2 * self.n + self.m
    }
    pub fn em2(&self) -> usize {
        0
    }
    pub fn vm(&self, i: usize) -> usize {
        1 + i
    }
    pub fn epm(&self) -> usize {
        1 + self.n
    }
    pub fn hh(&self, k: usize) -> usize {
        2 + self.n + k
    }
    pub fn vp(&self, i: usize) -> usize {
        2 + self.n + self.m + i
    }
    pub fn ep2(&self) -> usize {
        2 + 2 * self.n + self.m
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GradingReport {
    pub algebra: String,
    pub block_dims: [usize; 5],
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimH")]
    pub dim_h: usize,
    pub frame_check: Vec<(String, bool)>,
}

fn scale<S: Field>(v: &[S], c: S) -> Vec<S> {
    v.iter().map(|x| x.clone() * c.clone()).collect()
}

fn sub<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn add<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn eq<S: Field>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible())
}

/// Completes a maximal root element `x` to an sl2-triple `(x, h, y)`.
pub fn sl2_triple<S: Field>(g: &LieAlgebra<S>, x: &[S]) -> Result<(Vec<S>, Vec<S>)> {
    let d = g.dim;
    if x.iter().all(|v| v.is_negligible()) {
        return invalid("seed is zero");
    }
    let adx = g.ad_matrix(x);
    let adx2 = mat_mul(&adx, &adx);
    if rank(&adx2) != 1 {
        return invalid("seed is not a maximal root element: rank ad(x)^2 != 1");
    }
    let rhs = scale(x, -S::from_i64(2));
    let z = solve(&adx2, &rhs)
        .ok_or_else(|| crate::Error::InvalidInput("seed is not a maximal root element: x not in im ad(x)^2".into()))?;
    let h = g.bracket(x, &z);
    let ker = kernel(&adx, d);
    let adh = g.ad_matrix(&h);
    // sum c_k ([h, u_k] + 2 u_k) = [h, z] + 2 z
    let cols: Vec<Vec<S>> =
        ker.iter().map(|u| add(&crate::linalg::mat_vec(&adh, u), &scale(u, S::from_i64(2)))).collect();
    let m: Mat<S> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let target = add(&crate::linalg::mat_vec(&adh, &z), &scale(&z, S::from_i64(2)));
    let c = if ker.is_empty() {
        Vec::new()
    } else {
        solve(&m, &target).ok_or_else(|| crate::Error::Construction("no sl2 completion".into()))?
    };
    let u = lin_comb(&c, &ker, d);
    let y = sub(&z, &u);
    if !eq(&g.bracket(&h, x), &scale(x, S::from_i64(2)))
        || !eq(&g.bracket(&h, &y), &scale(&y, -S::from_i64(2)))
        || !eq(&g.bracket(x, &y), &h)
    {
        return construction("sl2 relations fail");
    }
    Ok((h, y))
}

impl<S: Field> TwoGrading<S> {
    pub fn new(g: &LieAlgebra<S>, seed: &[S]) -> Result<Self> {
        let (h, y) = sl2_triple(g, seed)?;
        let x = seed.to_vec();
        let d = g.dim;
        let adh = g.ad_matrix(&h);
        let mut blocks: [Vec<Vec<S>>; 5] = Default::default();
        let mut total = 0;
        for (k, i) in (-2i64..=2).enumerate() {
            let mut m = adh.clone();
            for (r, row) in m.iter_mut().enumerate() {
                row[r] = row[r].clone() - S::from_i64(i);
            }
            blocks[k] = kernel(&m, d);
            total += blocks[k].len();
        }
        if total != d {
            return construction("ad(h) has eigenvalues outside -2..2");
        }
        if blocks[0].len() != 1 || blocks[4].len() != 1 {
            return construction("g^2 is not one dimensional");
        }
        let e_plus2 = scale(&x, S::from_i64(2));
        let e_minus2 = scale(&y, -S::from_i64(2));
        let e_pm = scale(&h, -S::one());
        let v_plus = blocks[3].clone();
        let half = -S::from_frac(1, 2);
        let v_minus: Vec<Vec<S>> = v_plus.iter().map(|v| scale(&g.bracket(&e_minus2, v), half.clone())).collect();
        // centralizer of the triple inside g^0
        let g0 = &blocks[2];
        let mut eqs: Mat<S> = Vec::new();
        for t in [&x, &y] {
            let images: Vec<Vec<S>> = g0.iter().map(|b| g.bracket(b, t)).collect();
            for r in 0..d {
                eqs.push(images.iter().map(|im| im[r].clone()).collect());
            }
        }
        let coeffs = kernel(&eqs, g0.len());
        let h_basis: Vec<Vec<S>> = coeffs.iter().map(|c| lin_comb(c, g0, d)).collect();
        if g0.len() != h_basis.len() + 1 {
            return construction("g^0 is not sl2-centralizer plus the grading line");
        }
        Ok(TwoGrading { x, y, h, e_plus2, e_minus2, e_pm, blocks, v_plus, v_minus, h_basis })
    }

    pub fn dim_v(&self) -> usize {
        self.v_plus.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_basis.len()
    }

    pub fn layout(&self) -> FrameLayout {
        FrameLayout { n: self.dim_v(), m: self.dim_h() }
    }

    pub fn block_dims(&self) -> [usize; 5] {
        [0, 1, 2, 3, 4].map(|k| self.blocks[k].len())
    }

    /// Adapted basis `[e-^2, e- v.., e+e-, h.., e+ v.., e+^2]`.
    pub fn frame(&self) -> Vec<Vec<S>> {
        let mut f = vec![self.e_minus2.clone()];
        f.extend(self.v_minus.iter().cloned());
        f.push(self.e_pm.clone());
        f.extend(self.h_basis.iter().cloned());
        f.extend(self.v_plus.iter().cloned());
        f.push(self.e_plus2.clone());
        f
    }

    pub fn frame_coordinates(&self, dim: usize) -> Result<Coordinates<S>> {
        Coordinates::new(&self.frame(), dim)
    }

    /// The normalized sl2 and sl2-action relations, by name.
    pub fn frame_check(&self, g: &LieAlgebra<S>) -> Vec<(String, bool)> {
        let two = S::from_i64(2);
        let (ep, em, epm) = (&self.e_plus2, &self.e_minus2, &self.e_pm);
        let mut out = vec![
            ("[e+e-,e+^2]=-2e+^2".to_string(), eq(&g.bracket(epm, ep), &scale(ep, -two.clone()))),
            ("[e+e-,e-^2]=2e-^2".to_string(), eq(&g.bracket(epm, em), &scale(em, two.clone()))),
            ("[e+^2,e-^2]=4e+e-".to_string(), eq(&g.bracket(ep, em), &scale(epm, S::from_i64(4)))),
        ];
        let act = self.v_plus.iter().zip(&self.v_minus).all(|(vp, vm)| {
            eq(&g.bracket(epm, vp), &scale(vp, -S::one()))
                && eq(&g.bracket(epm, vm), vm)
                && eq(&g.bracket(ep, vm), &scale(vp, two.clone()))
                && eq(&g.bracket(ep, vp), &vec![S::zero(); g.dim])
        });
        out.push(("sl2 acts on F^2 (x) V".to_string(), act));
        let central = self
            .h_basis
            .iter()
            .all(|b| [ep, em, epm].iter().all(|t| g.bracket(b, t).iter().all(|v| v.is_negligible())));
        out.push(("h commutes with sl2".to_string(), central));
        let dims = g.dim == 2 + 2 * self.dim_v() + 1 + self.dim_h();
        out.push(("dim g = 2 + 2 dimV + 1 + dimH".to_string(), dims));
        out
    }

    pub fn report(&self, g: &LieAlgebra<S>) -> GradingReport {
        GradingReport {
            algebra: g.name.clone(),
            block_dims: self.block_dims(),
            dim_v: self.dim_v(),
            dim_h: self.dim_h(),
            frame_check: self.frame_check(g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::matrix_forms::{build, AlgebraSpec};
    use crate::liecore::ChevalleyOptions;
    use crate::scalar::Rational;

    fn grading(s: &str) -> (LieAlgebra<Rational>, TwoGrading<Rational>) {
        let p = build(&s.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
        let t = TwoGrading::new(&p.algebra, &p.seed).unwrap();
        (p.algebra, t)
    }

    #[test]
    fn block_dimensions() {
        for (s, dims, h) in [
            ("sp_real:2", [1, 2, 4, 2, 1], 3),
            ("g2_split", [1, 4, 4, 4, 1], 3),
            ("sl_real:3", [1, 2, 2, 2, 1], 1),
            ("sl_real:4", [1, 4, 5, 4, 1], 4),
            ("su:2,2", [1, 4, 5, 4, 1], 4),
            ("so:3,4", [1, 6, 7, 6, 1], 6),
        ] {
            let (g, t) = grading(s);
            assert_eq!(t.block_dims(), dims, "{s}");
            assert_eq!(t.dim_h(), h, "{s}");
            assert!(t.frame_check(&g).iter().all(|c| c.1), "{s}: {:?}", t.frame_check(&g));
        }
    }

    #[test]
    fn grading_element_norm() {
        for s in ["sp_real:2", "g2_split", "sl_real:4", "su:1,2"] {
            let (g, t) = grading(s);
            let expect = Rational::from_i64(2 * (t.dim_v() as i64 + 4));
            assert_eq!(g.killing(&t.h, &t.h), expect, "{s}");
        }
    }

    #[test]
    fn regrading_from_own_seed_is_identical() {
        let (g, t) = grading("g2_split");
        let t2 = TwoGrading::new(&g, &t.x).unwrap();
        assert_eq!(t.frame(), t2.frame());
    }

    #[test]
    fn rejects_non_maximal_seed() {
        let (g, t) = grading("sl_real:4");
        assert!(TwoGrading::new(&g, &t.h).is_err());
        assert!(TwoGrading::new(&g, &vec![Rational::from_i64(0); g.dim]).is_err());
    }
}
