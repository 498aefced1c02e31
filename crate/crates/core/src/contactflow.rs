//! Floating point geometry on `Gamma_a = { g : Ad_{g^-1} a in Q }` with
//! `Q = 1/2 e-^2 + h + g^1 + g^2`.
//!
//! The group is the adjoint group acting on `g` in graded frame coordinates,
//! so `Ad_{g^-1} a` is a linear solve and `exp` is a matrix exponential.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::embed_rh;
use crate::error::{Error, Result};
use crate::grading::{FrameLayout, TwoGrading};
use crate::liecore::matrix_forms::Presented;
use crate::liecore::LieAlgebra;
use crate::linalg::{inverse, mat_vec, transpose, Mat};
use crate::scalar::{Field, Rational};
use crate::sympdata::SymplecticData;

pub mod momentum;

/// Default constraint tolerance for points of `Gamma_a`.
pub const RETRACT_TOL: f64 = 1e-12;

/// Exact and floating point data of a graded algebra.
#[derive(Clone, Debug)]
pub struct FlowModel {
    pub name: String,
    pub lay: FrameLayout,
    pub dim: usize,
    /// Exact algebra in the graded frame.
    pub frame_algebra: LieAlgebra<Rational>,
    pub ssd: SymplecticData<f64>,
    pub exact_ssd: SymplecticData<Rational>,
    pub grading: TwoGrading<Rational>,
    /// Original coordinates to frame coordinates.
    pub to_frame: Mat<Rational>,
    ad_basis: Vec<DMatrix<f64>>,
    killing_inv: DMatrix<f64>,
    /// Normalized invariant form in frame coordinates.
    pub gram: DMatrix<f64>,
}

fn grade_of(lay: &FrameLayout, k: usize) -> i32 {
    if k == lay.em2() {
        -2
    } else if k < lay.epm() {
        -1
    } else if k < lay.vp(0).min(lay.ep2()) {
        0
    } else if k < lay.ep2() {
        1
    } else {
        2
    }
}

impl FlowModel {
    pub fn new(p: &Presented) -> Result<Self> {
        let g = &p.algebra;
        let grading = TwoGrading::new(g, &p.seed)?;
        let exact_ssd = SymplecticData::from_grading(g, &grading)?;
        let frame = grading.frame();
        let frame_algebra = g.change_basis(&frame)?;
        // columns of the change of basis are the frame vectors
        let to_frame = inverse(&transpose(&frame)).ok_or_else(|| Error::Construction("frame is not a basis".into()))?;
        let dim = g.dim;
        let ad_basis: Vec<DMatrix<f64>> = (0..dim)
            .map(|i| {
                let mut m = DMatrix::zeros(dim, dim);
                for j in 0..dim {
                    for (k, v) in frame_algebra.basis_bracket(i, j) {
                        m[(*k, j)] = v.real_f64();
                    }
                }
                m
            })
            .collect();
        let killing = DMatrix::from_fn(dim, dim, |i, j| (&ad_basis[i] * &ad_basis[j]).trace());
        let killing_inv =
            killing.clone().try_inverse().ok_or_else(|| Error::Construction("Killing form is degenerate".into()))?;
        let lay = grading.layout();
        let gram = killing * (-1.0 / (2.0 * (lay.n as f64 + 4.0)));
        Ok(FlowModel {
            name: g.name.clone(),
            lay,
            dim,
            frame_algebra,
            ssd: exact_ssd.map(|x| x.real_f64()),
            exact_ssd,
            grading,
            to_frame,
            ad_basis,
            killing_inv,
            gram,
        })
    }

    /// Frame coordinates of a vector given in original coordinates.
    pub fn frame_coords(&self, orig: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.to_frame, orig)
    }

    pub fn frame_vector(&self, orig: &[Rational]) -> DVector<f64> {
        DVector::from_iterator(self.dim, self.frame_coords(orig).iter().map(|x| x.real_f64()))
    }

    pub fn ad(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (c, a) in v.iter().zip(&self.ad_basis) {
            if *c != 0.0 {
                m += a * *c;
            }
        }
        m
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.ad(x) * y
    }

    /// Algebra element `v` with `ad(v) = m`, read off through the Killing form.
    pub fn unad(&self, m: &DMatrix<f64>) -> DVector<f64> {
        let b = DVector::from_iterator(self.dim, self.ad_basis.iter().map(|a| (a * m).trace()));
        &self.killing_inv * b
    }

    pub fn form(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    pub fn exp(&self, v: &DVector<f64>) -> DMatrix<f64> {
        self.ad(v).exp()
    }

    pub fn unit(&self, k: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[k] = 1.0;
        v
    }

    /// Frame vector `e- (x) x + rho + ...` assembled from graded parts.
    pub fn assemble(&self, em2: f64, vm: &[f64], epm: f64, h: &[f64], vp: &[f64], ep2: f64) -> DVector<f64> {
        let l = &self.lay;
        let mut v = DVector::zeros(self.dim);
        v[l.em2()] = em2;
        v[l.epm()] = epm;
        v[l.ep2()] = ep2;
        for i in 0..l.n {
            v[l.vm(i)] = vm[i];
            v[l.vp(i)] = vp[i];
        }
        for k in 0..l.m {
            v[l.hh(k)] = h[k];
        }
        v
    }

    pub fn v_minus_part(&self, v: &DVector<f64>) -> Vec<f64> {
        (0..self.lay.n).map(|i| v[self.lay.vm(i)]).collect()
    }

    pub fn v_plus_part(&self, v: &DVector<f64>) -> Vec<f64> {
        (0..self.lay.n).map(|i| v[self.lay.vp(i)]).collect()
    }

    pub fn h_part(&self, v: &DVector<f64>) -> Vec<f64> {
        (0..self.lay.m).map(|k| v[self.lay.hh(k)]).collect()
    }

    /// `exp(ad w) - I` by its power series; accurate when `ad w` is small
    /// or nilpotent.
    pub fn expm1_ad(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let a = self.ad(w);
        let mut term = a.clone();
        let mut sum = a.clone();
        for k in 2..40 {
            term = &term * &a / k as f64;
            let t = term.amax();
            sum += &term;
            if t == 0.0 || t < 1e-18 * sum.amax() {
                break;
            }
        }
        sum
    }

    /// `exp(s ad e+e-) - I`, diagonal in the graded frame.
    fn expm1_scaling(&self, s: f64) -> DMatrix<f64> {
        DMatrix::from_fn(
            self.dim,
            self.dim,
            |i, j| {
                if i == j {
                    (-(grade_of(&self.lay, i) as f64) * s).exp_m1()
                } else {
                    0.0
                }
            },
        )
    }

    /// `Ad_{g^-1} a`.
    pub fn pull(&self, g: &DMatrix<f64>, a: &DVector<f64>) -> Result<DVector<f64>> {
        solve(g, a)
    }

    /// Distance of `Ad_{g^-1} a` from `Q`.
    pub fn q_residual(&self, g: &DMatrix<f64>, a: &DVector<f64>) -> Result<f64> {
        Ok(self.q_residual_of(&self.pull(g, a)?))
    }

    fn q_residual_of(&self, big_a: &DVector<f64>) -> f64 {
        let l = &self.lay;
        let mut r = (big_a[l.em2()] - 0.5).abs().max(big_a[l.epm()].abs());
        for i in 0..l.n {
            r = r.max(big_a[l.vm(i)].abs());
        }
        r
    }

    /// Moves `g` onto `Gamma_a` by right multiplication with
    /// `exp(s e+e-) exp(e+ (x) x) exp(t e+^2)`.
    pub fn retract(&self, g: &DMatrix<f64>, a: &DVector<f64>, tol: f64) -> Result<FramePoint> {
        let mut g = g.clone();
        let big_a = self.retract_state(&mut g, a, tol)?;
        Ok(self.frame_point(g, big_a))
    }

    fn retract_state<G: GroupState>(&self, g: &mut G, a: &DVector<f64>, tol: f64) -> Result<DVector<f64>> {
        let l = self.lay;
        let zero_n = vec![0.0; l.n];
        let zero_m = vec![0.0; l.m];
        let mut big_a = g.pull(a)?;
        for _ in 0..6 {
            let c = big_a[l.em2()];
            if c <= 0.0 {
                return Err(Error::Numerical(format!("e-^2 component {c} is not positive")));
            }
            let s = 0.5 * (2.0 * c).ln();
            g.right_mul(&self.expm1_scaling(s));
            big_a = g.pull(a)?;
            // grade -1 part of [e+ (x) x, A] is linear in x
            let jac = DMatrix::from_fn(l.n, l.n, |i, j| {
                let w = self.unit(l.vp(j));
                self.bracket(&w, &big_a)[l.vm(i)]
            });
            let rhs = DVector::from_iterator(l.n, (0..l.n).map(|i| big_a[l.vm(i)]));
            let x = jac.lu().solve(&rhs).ok_or_else(|| Error::Numerical("singular retraction step".into()))?;
            g.right_mul(&self.expm1_ad(&self.assemble(0.0, &zero_n, 0.0, &zero_m, x.as_slice(), 0.0)));
            big_a = g.pull(a)?;
            let jt = self.bracket(&self.unit(l.ep2()), &big_a)[l.epm()];
            let t = big_a[l.epm()] / jt;
            g.right_mul(&self.expm1_ad(&self.assemble(0.0, &zero_n, 0.0, &zero_m, &zero_n, t)));
            big_a = g.pull(a)?;
            if self.q_residual_of(&big_a) < tol * 1e-3 * residual_scale(&big_a) {
                break;
            }
        }
        let res = self.q_residual_of(&big_a);
        if res > tol * residual_scale(&big_a) {
            return Err(Error::Numerical(format!("retraction stalled at residual {res:e}")));
        }
        Ok(big_a)
    }

    fn frame_point(&self, g: DMatrix<f64>, big_a: DVector<f64>) -> FramePoint {
        FramePoint { rho: self.h_part(&big_a), u: self.v_plus_part(&big_a), f: 2.0 * big_a[self.lay.ep2()], g, big_a }
    }

    /// Point of `Gamma_a` at `g` without moving it.
    pub fn point(&self, g: &DMatrix<f64>, a: &DVector<f64>) -> Result<FramePoint> {
        let big_a = self.pull(g, a)?;
        Ok(self.frame_point(g.clone(), big_a))
    }

    /// Random group element: product of three exponentials of Gaussian vectors.
    pub fn random_group_element(&self, rng: &mut impl Rng, scale: f64) -> DMatrix<f64> {
        let mut g = DMatrix::identity(self.dim, self.dim);
        for _ in 0..3 {
            let v = DVector::from_fn(self.dim, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
            g = &g * self.exp(&v);
        }
        g
    }

    /// First random point of `Gamma_a` found from `rng`.
    pub fn random_point(&self, a: &DVector<f64>, rng: &mut impl Rng) -> Result<FramePoint> {
        let ep2 = self.unit(self.lay.ep2());
        for _ in 0..1000 {
            let g = self.random_group_element(rng, 0.4);
            if self.form(a, &(&g * &ep2)) > 0.0 {
                if let Ok(p) = self.retract(&g, a, RETRACT_TOL) {
                    return Ok(p);
                }
            }
        }
        Err(Error::Numerical("no point of Gamma_a found".into()))
    }

    /// Retraction of the identity when `c_{-2}(a) > 0`, otherwise a random point.
    /// Entries of `A` stay of the size of `a`, which keeps rounding small.
    pub fn base_point(&self, a: &DVector<f64>, rng: &mut impl Rng) -> Result<FramePoint> {
        let id = DMatrix::identity(self.dim, self.dim);
        if a[self.lay.em2()] > 0.0 {
            if let Ok(p) = self.retract(&id, a, RETRACT_TOL) {
                return Ok(p);
            }
        }
        self.random_point(a, rng)
    }

    /// `s A + e- (x) x + e+ (x) rho x + 1/2 omega(u, x) e+^2 + h`.
    pub fn tangent(&self, p: &FramePoint, s: f64, x: &[f64], h: &[f64]) -> DVector<f64> {
        let d = &self.ssd;
        let rx = d.act(&p.rho, x);
        let w = 0.5 * d.omega(&p.u, x);
        &p.big_a * s + self.assemble(0.0, x, 0.0, h, &rx, w)
    }

    /// Splits `mu = -2 kappa (1/2 e-^2 + rho) + e- (x) theta + eta + (dependent parts)`.
    pub fn mc_decompose(&self, p: &FramePoint, mu: &DVector<f64>) -> CoframeSample {
        let l = &self.lay;
        let d = &self.ssd;
        let kappa = -mu[l.em2()];
        let theta = self.v_minus_part(mu);
        let mu_h = self.h_part(mu);
        let eta: Vec<f64> = mu_h.iter().zip(&p.rho).map(|(a, r)| a + 2.0 * kappa * r).collect();
        let rt = d.act(&p.rho, &theta);
        let alpha_plus: Vec<f64> = rt.iter().zip(&p.u).map(|(a, u)| a - 2.0 * u * kappa).collect();
        let kappa_plus = 0.5 * d.omega(&p.u, &theta) - p.f * kappa;
        let rebuilt = self.assemble(-kappa, &theta, 0.0, &mu_h, &alpha_plus, kappa_plus);
        let reassembly = (mu - rebuilt).amax();
        CoframeSample { kappa, theta, eta, reassembly }
    }
}

/// Right multiplication by near-identity factors `I + n`.
trait GroupState {
    fn right_mul(&mut self, n: &DMatrix<f64>);
    /// `Ad_{g^-1} a`.
    fn pull(&self, a: &DVector<f64>) -> Result<DVector<f64>>;
}

/// Constraint residuals are measured relative to the size of `A`.
fn residual_scale(big_a: &DVector<f64>) -> f64 {
    big_a.amax().max(1.0)
}

fn solve(g: &DMatrix<f64>, a: &DVector<f64>) -> Result<DVector<f64>> {
    g.clone().lu().solve(a).ok_or_else(|| Error::Numerical("group element is singular".into()))
}

impl GroupState for DMatrix<f64> {
    fn right_mul(&mut self, n: &DMatrix<f64>) {
        let p = &*self * n;
        *self += p;
    }

    fn pull(&self, a: &DVector<f64>) -> Result<DVector<f64>> {
        solve(self, a)
    }
}

/// Group element kept as an unevaluated sum `hi + lo`, so that long
/// products of near-identity factors do not accumulate rounding in `hi`.
#[derive(Clone, Debug)]
pub struct Compensated {
    pub hi: DMatrix<f64>,
    pub lo: DMatrix<f64>,
}

impl Compensated {
    pub fn new(g: &DMatrix<f64>) -> Self {
        Compensated { hi: g.clone(), lo: DMatrix::zeros(g.nrows(), g.ncols()) }
    }
}

impl GroupState for Compensated {
    fn right_mul(&mut self, n: &DMatrix<f64>) {
        let p = &self.hi * n + &self.lo * n;
        for k in 0..p.len() {
            // two-sum of hi and p, then renormalize with lo
            let (x, y) = (self.hi[k], p[k]);
            let s = x + y;
            let bb = s - x;
            let e = (x - (s - bb)) + (y - bb);
            let lo = self.lo[k] + e;
            let hi = s + lo;
            self.lo[k] = lo - (hi - s);
            self.hi[k] = hi;
        }
    }

    fn pull(&self, a: &DVector<f64>) -> Result<DVector<f64>> {
        let x = solve(&self.hi, a)?;
        let r = a - &self.hi * &x - &self.lo * &x;
        Ok(&x + solve(&self.hi, &r)?)
    }
}

/// A point of `Gamma_a` with `Ad_{g^-1} a = 1/2 e-^2 + rho + e+ (x) u + 1/2 f e+^2`.
#[derive(Clone, Debug)]
pub struct FramePoint {
    pub g: DMatrix<f64>,
    pub big_a: DVector<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub f: f64,
}

#[derive(Clone, Debug)]
pub struct CoframeSample {
    pub kappa: f64,
    pub theta: Vec<f64>,
    pub eta: Vec<f64>,
    /// Size of the part of `mu` not accounted for by the tangent space of `Gamma_a`.
    pub reassembly: f64,
}

fn amax(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| x * c).collect()
}

/// Names of the six structure equations, in the order of [`StructureResiduals::values`].
pub const EQUATIONS: [&str; 6] = [
    "d kappa = 1/2 omega(theta ^ theta)",
    "d theta + eta ^ theta = 0",
    "d eta + 1/2 [eta, eta] = R_rho(theta ^ theta)",
    "d rho + [eta, rho] = u o theta",
    "d u + eta u = (rho^2 + f) theta",
    "d f + d (rho, rho) = 0",
];

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StructureResiduals {
    pub eps: f64,
    pub values: [f64; 6],
    /// Largest retraction residual met on the stencil.
    pub constraint: f64,
}

/// Discrete check of the structure equations on
/// `phi(s, t) = retract(g exp(s mu1) exp(t mu2))` with a 3 x 3 stencil.
/// Right-hand sides use the coframe of the tangent directions `mu1`, `mu2` at `p`.
pub fn structure_residuals(
    m: &FlowModel,
    a: &DVector<f64>,
    p: &FramePoint,
    mu1: &DVector<f64>,
    mu2: &DVector<f64>,
    eps: f64,
) -> Result<StructureResiduals> {
    let cx = m.mc_decompose(p, mu1);
    let cy = m.mc_decompose(p, mu2);
    if cx.reassembly > 1e-9 || cy.reassembly > 1e-9 {
        return Err(Error::InvalidInput("stencil directions must be tangent to Gamma_a".into()));
    }
    let e1 = |s: f64| m.exp(&(mu1 * s));
    let e2 = |t: f64| m.exp(&(mu2 * t));
    let mut phi = vec![vec![None; 3]; 3];
    let mut constraint = 0.0f64;
    for (i, s) in [-eps, 0.0, eps].into_iter().enumerate() {
        for (j, t) in [-eps, 0.0, eps].into_iter().enumerate() {
            let q = if i == 1 && j == 1 { p.clone() } else { m.retract(&(&p.g * e1(s) * e2(t)), a, RETRACT_TOL)? };
            constraint = constraint.max(m.q_residual_of(&q.big_a));
            phi[i][j] = Some(q);
        }
    }
    let at = |i: usize, j: usize| phi[i][j].as_ref().expect("filled");
    let deriv = |base: &FramePoint, plus: &FramePoint, minus: &FramePoint| -> Result<DVector<f64>> {
        let dg = (&plus.g - &minus.g) / (2.0 * eps);
        let x = base.g.clone().lu().solve(&dg).ok_or_else(|| Error::Numerical("singular stencil point".into()))?;
        Ok(m.unad(&x))
    };
    // mu(d/ds) along t = -eps, eps and mu(d/dt) along s = -eps, eps
    let mut ms = Vec::new();
    let mut mt = Vec::new();
    for k in [0, 2] {
        let b = at(1, k);
        ms.push(m.mc_decompose(b, &deriv(b, at(2, k), at(0, k))?));
        let b = at(k, 1);
        mt.push(m.mc_decompose(b, &deriv(b, at(k, 2), at(k, 0))?));
    }
    let c = at(1, 1);
    let d = &m.ssd;
    let h2 = 2.0 * eps;
    let ds = |f: &dyn Fn(&FramePoint) -> Vec<f64>| scale(&sub(&f(at(2, 1)), &f(at(0, 1))), 1.0 / h2);
    let dt = |f: &dyn Fn(&FramePoint) -> Vec<f64>| scale(&sub(&f(at(1, 2)), &f(at(1, 0))), 1.0 / h2);
    let exterior = |f: &dyn Fn(&CoframeSample) -> Vec<f64>| {
        let a = scale(&sub(&f(&mt[1]), &f(&mt[0])), 1.0 / h2);
        let b = scale(&sub(&f(&ms[1]), &f(&ms[0])), 1.0 / h2);
        sub(&a, &b)
    };
    let (x, y) = (&cx, &cy);

    let dk = exterior(&|c: &CoframeSample| vec![c.kappa]);
    let r0 = amax(&sub(&dk, &[d.omega(&x.theta, &y.theta)]));

    let dth = exterior(&|c: &CoframeSample| c.theta.clone());
    let r1 = amax(&add(&dth, &sub(&d.act(&x.eta, &y.theta), &d.act(&y.eta, &x.theta))));

    let deta = exterior(&|c: &CoframeSample| c.eta.clone());
    let rr = embed_rh(d, &c.rho).eval(&x.theta, &y.theta);
    let r2 = amax(&sub(&add(&deta, &d.h_bracket(&x.eta, &y.eta)), &rr));

    let mut r3 = 0.0f64;
    let mut r4 = 0.0f64;
    let mut r5 = 0.0f64;
    for (dir, cs) in [(0, x), (1, y)] {
        let der = |f: &dyn Fn(&FramePoint) -> Vec<f64>| if dir == 0 { ds(f) } else { dt(f) };
        let drho = der(&|q: &FramePoint| q.rho.clone());
        let du = der(&|q: &FramePoint| q.u.clone());
        let df = der(&|q: &FramePoint| vec![q.f])[0];
        r3 = r3.max(amax(&sub(&add(&drho, &d.h_bracket(&cs.eta, &c.rho)), &d.circ(&c.u, &cs.theta))));
        let rt = d.act(&c.rho, &d.act(&c.rho, &cs.theta));
        let rhs = add(&rt, &scale(&cs.theta, c.f));
        r4 = r4.max(amax(&sub(&add(&du, &d.act(&cs.eta, &c.u)), &rhs)));
        let exact = sub(&d.circ(&c.u, &cs.theta), &d.h_bracket(&cs.eta, &c.rho));
        let pair = crate::sympdata::bilinear(&d.h_form, &c.rho, &exact);
        r5 = r5.max((df + 2.0 * pair).abs());
    }
    Ok(StructureResiduals { eps, values: [r0, r1, r2, r3, r4, r5], constraint })
}

/// Observed orders `log(r_k / r_{k+1}) / log(eps_k / eps_{k+1})` for each equation.
pub fn convergence_orders(rs: &[StructureResiduals]) -> Vec<[f64; 6]> {
    rs.windows(2)
        .map(|w| {
            let ratio = (w[0].eps / w[1].eps).ln();
            let mut o = [0.0; 6];
            for k in 0..6 {
                o[k] = (w[0].values[k] / w[1].values[k]).ln() / ratio;
            }
            o
        })
        .collect()
}

/// Random tangent direction at `p`.
pub fn random_tangent(m: &FlowModel, p: &FramePoint, rng: &mut impl Rng) -> DVector<f64> {
    let s = rng.sample::<f64, _>(StandardNormal);
    let x: Vec<f64> = (0..m.lay.n).map(|_| rng.sample(StandardNormal)).collect();
    let h: Vec<f64> = (0..m.lay.m).map(|_| rng.sample(StandardNormal)).collect();
    m.tangent(p, s, &x, &h)
}

/// Conserved quantities at a point: `f + (rho, rho)` and `tr(ad_A^k)` for `k = 2..6`.
pub fn invariants(m: &FlowModel, p: &FramePoint) -> [f64; 6] {
    let mut out = [0.0; 6];
    out[0] = p.f + crate::sympdata::bilinear(&m.ssd.h_form, &p.rho, &p.rho);
    let ad = m.ad(&p.big_a);
    let mut pow = ad.clone();
    for k in 2..=6 {
        pow = &pow * &ad;
        out[k - 1] = pow.trace();
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InvariantDrift {
    pub steps: usize,
    /// Drift of `f + (rho, rho)`.
    pub casimir: f64,
    /// Drift of `tr(ad_A^k)` for `k = 2..6`.
    pub ad_traces: [f64; 5],
    pub max_constraint: f64,
}

/// Walks `steps` retracted steps of size `h` along random tangent directions.
pub fn walk(
    m: &FlowModel,
    a: &DVector<f64>,
    start: &FramePoint,
    steps: usize,
    h: f64,
    rng: &mut impl Rng,
) -> Result<Vec<FramePoint>> {
    let mut path = vec![start.clone()];
    let mut p = start.clone();
    let mut g = Compensated::new(&start.g);
    for _ in 0..steps {
        let v = random_tangent(m, &p, rng);
        let v = &v / v.amax().max(1e-300);
        g.right_mul(&m.expm1_ad(&(v * h)));
        let big_a = m.retract_state(&mut g, a, RETRACT_TOL)?;
        p = m.frame_point(g.hi.clone(), big_a);
        path.push(p.clone());
    }
    Ok(path)
}

pub fn conserved_invariants(m: &FlowModel, path: &[FramePoint]) -> InvariantDrift {
    let vals: Vec<[f64; 6]> = path.iter().map(|p| invariants(m, p)).collect();
    let drift = |k: usize| {
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[k]), hi.max(v[k])));
        if vals.is_empty() {
            0.0
        } else {
            hi - lo
        }
    };
    let mut ad_traces = [0.0; 5];
    for (k, t) in ad_traces.iter_mut().enumerate() {
        *t = drift(k + 1);
    }
    InvariantDrift {
        steps: path.len().saturating_sub(1),
        casimir: drift(0),
        ad_traces,
        max_constraint: path.iter().map(|p| m.q_residual_of(&p.big_a)).fold(0.0, f64::max),
    }
}

/// Fraction of sampled `X` in the cone `G e+^2` with `(a, X) > 0`.
pub fn transversality_scan(m: &FlowModel, a: &DVector<f64>, samples: usize, seed: u64) -> f64 {
    let ep2 = m.unit(m.lay.ep2());
    let an = a.norm();
    let positive = (0..samples)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let g = m.random_group_element(&mut rng, 1.0);
            let x = &g * &ep2;
            m.form(a, &x) / (an * x.norm()) > 0.0
        })
        .count();
    positive as f64 / samples.max(1) as f64
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VectorFieldResiduals {
    pub eps: f64,
    /// `xi_x(rho) = u o x`, `xi_x(u) = (rho^2 + f) x`, `xi_x(f) = -2 omega(rho u, x)`.
    pub horizontal: [f64; 3],
    /// `xi_h(rho) = -[h, rho]`, `xi_h(u) = -h u`, `xi_h(f) = 0`.
    pub vertical: [f64; 3],
    /// `mu([xi_x, xi_y]) = 2 omega(x,y) A - 2 omega(x,y) rho - x o rho y + y o rho x`.
    pub bracket: f64,
}

/// Derivatives of `(rho, u, f)` along `retract(g exp(t mu))` at `t = 0`.
fn derivatives(
    m: &FlowModel,
    a: &DVector<f64>,
    p: &FramePoint,
    mu: &DVector<f64>,
    eps: f64,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let plus = m.retract(&(&p.g * m.exp(&(mu * eps))), a, RETRACT_TOL)?;
    let minus = m.retract(&(&p.g * m.exp(&(mu * -eps))), a, RETRACT_TOL)?;
    let k = 1.0 / (2.0 * eps);
    Ok((scale(&sub(&plus.rho, &minus.rho), k), scale(&sub(&plus.u, &minus.u), k), (plus.f - minus.f) * k))
}

pub fn vector_field_audit(
    m: &FlowModel,
    a: &DVector<f64>,
    p: &FramePoint,
    x: &[f64],
    y: &[f64],
    h: &[f64],
    eps: f64,
) -> Result<VectorFieldResiduals> {
    let d = &m.ssd;
    let (n, mh) = (m.lay.n, m.lay.m);
    let zn = vec![0.0; n];
    let zm = vec![0.0; mh];
    let mux = m.tangent(p, 0.0, x, &zm);
    let muy = m.tangent(p, 0.0, y, &zm);
    let muh = m.tangent(p, 0.0, &zn, h);
    let (rx, ux, fx) = derivatives(m, a, p, &mux, eps)?;
    let (ry, uy, _) = derivatives(m, a, p, &muy, eps)?;
    let (rh, uh, fh) = derivatives(m, a, p, &muh, eps)?;
    let rho2 = |v: &[f64]| d.act(&p.rho, &d.act(&p.rho, v));
    let horizontal = [
        amax(&sub(&rx, &d.circ(&p.u, x))),
        amax(&sub(&ux, &add(&rho2(x), &scale(x, p.f)))),
        (fx + 2.0 * d.omega(&d.act(&p.rho, &p.u), x)).abs(),
    ];
    let vertical = [amax(&add(&rh, &d.h_bracket(h, &p.rho))), amax(&add(&uh, &d.act(h, &p.u))), fh.abs()];
    // derivative of mu(xi_y) = e- y + e+ rho y + 1/2 omega(u, y) e+^2 along xi_x
    let dmu = |dr: &[f64], du: &[f64], v: &[f64]| m.assemble(0.0, &zn, 0.0, &zm, &d.act(dr, v), 0.5 * d.omega(du, v));
    let lhs = dmu(&rx, &ux, y) - dmu(&ry, &uy, x) + m.bracket(&mux, &muy);
    let w = d.omega(x, y);
    let hpart =
        sub(&sub(&scale(&p.rho, -2.0 * w), &d.circ(x, &d.act(&p.rho, y))), &scale(&d.circ(y, &d.act(&p.rho, x)), -1.0));
    let rhs = &p.big_a * (2.0 * w) + m.assemble(0.0, &zn, 0.0, &hpart, &zn, 0.0);
    Ok(VectorFieldResiduals { eps, horizontal, vertical, bracket: (lhs - rhs).amax() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::matrix_forms::{build, AlgebraSpec};
    use crate::liecore::ChevalleyOptions;
    use momentum::MomentumSpec;

    fn setup(alg: &str, mom: &str) -> (FlowModel, DVector<f64>) {
        let p = build(&alg.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
        let m = FlowModel::new(&p).unwrap();
        let spec: MomentumSpec = mom.parse().unwrap();
        let a = spec.resolve(&p, &m).unwrap();
        let av = m.frame_vector(&a);
        (m, av)
    }

    #[test]
    fn identity_point_of_q() {
        let (m, _) = setup("sp_real:2", "ricci:1");
        let zn = vec![0.3, -0.2];
        let a = m.assemble(0.5, &[0.0, 0.0], 0.0, &[0.1, 0.2, -0.4], &zn, 0.7);
        let g = DMatrix::identity(m.dim, m.dim);
        assert!(m.q_residual(&g, &a).unwrap() < 1e-15);
        let p = m.retract(&g, &a, RETRACT_TOL).unwrap();
        assert!((p.f - 1.4).abs() < 1e-14);
        assert_eq!(p.u, zn);
    }

    #[test]
    fn flow_of_a_stays_on_gamma() {
        let (m, a) = setup("su:2,2", "bochner:1,1");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = m.random_point(&a, &mut rng).unwrap();
        let g = m.exp(&(&a * 0.37)) * &p.g;
        assert!(m.q_residual(&g, &a).unwrap() < 1e-12);
    }

    #[test]
    fn retraction_recovers_from_perturbation() {
        let (m, a) = setup("sp_real:2", "ricci:1");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = m.random_point(&a, &mut rng).unwrap();
        let v = DVector::from_fn(m.dim, |_, _| 1e-3 * rng.sample::<f64, _>(StandardNormal));
        let g = &p.g * m.exp(&v);
        assert!(m.q_residual(&g, &a).unwrap() > 1e-6);
        let q = m.retract(&g, &a, RETRACT_TOL).unwrap();
        assert!(m.q_residual(&q.g, &a).unwrap() < 1e-12);
    }

    #[test]
    fn coframe_on_special_directions() {
        let (m, a) = setup("sp_real:2", "ricci:1");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = m.random_point(&a, &mut rng).unwrap();
        let c = m.mc_decompose(&p, &p.big_a);
        assert!((c.kappa + 0.5).abs() < 1e-12 && amax(&c.theta) < 1e-12 && amax(&c.eta) < 1e-12);
        assert!(c.reassembly < 1e-12);
        let h = [0.3, -1.0, 2.0];
        let c = m.mc_decompose(&p, &m.tangent(&p, 0.0, &[0.0, 0.0], &h));
        assert!(c.kappa.abs() < 1e-15 && amax(&sub(&c.eta, &h)) < 1e-12);
        let x = [1.5, -0.5];
        let c = m.mc_decompose(&p, &m.tangent(&p, 0.0, &x, &[0.0; 3]));
        assert!(c.kappa.abs() < 1e-15 && amax(&sub(&c.theta, &x)) < 1e-12 && c.reassembly < 1e-12);
        // a direction leaving Gamma_a is detected
        let off = m.unit(m.lay.epm());
        assert!(m.mc_decompose(&p, &off).reassembly > 0.5);
    }

    #[test]
    fn structure_equations_converge() {
        for (alg, mom) in [("sp_real:2", "normal:1,1;-1;2"), ("su:2,2", "normal:1,1;-1;2;1")] {
            let (m, a) = setup(alg, mom);
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            let p = m.random_point(&a, &mut rng).unwrap();
            let v1 = random_tangent(&m, &p, &mut rng);
            let v2 = random_tangent(&m, &p, &mut rng);
            let rs: Vec<StructureResiduals> =
                [1e-2, 5e-3, 2.5e-3].iter().map(|&e| structure_residuals(&m, &a, &p, &v1, &v2, e).unwrap()).collect();
            for o in convergence_orders(&rs) {
                for (k, v) in o.iter().enumerate() {
                    assert!((1.9..=2.1).contains(v), "{alg} {}: order {v} {:?}", EQUATIONS[k], rs);
                }
            }
        }
    }

    #[test]
    fn model_momenta_have_vanishing_u() {
        for (alg, mom) in [("sp_real:2", "ricci:1"), ("su:2,2", "bochner:1,1")] {
            let (m, a) = setup(alg, mom);
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            for _ in 0..5 {
                let p = m.random_point(&a, &mut rng).unwrap();
                assert!(amax(&p.u) < 1e-9, "{alg} {:?}", p.u);
            }
        }
    }

    #[test]
    fn invariants_are_conserved() {
        let (m, a) = setup("sp_real:2", "ricci:1");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = m.base_point(&a, &mut rng).unwrap();
        assert!(m.q_residual(&p.g, &a).unwrap() < 1e-12);
        let path = walk(&m, &a, &p, 200, 1e-3, &mut rng).unwrap();
        let d = conserved_invariants(&m, &path);
        assert!(d.casimir < 1e-9 && d.ad_traces.iter().all(|t| *t < 1e-9), "{d:?}");
        let still = conserved_invariants(&m, &[p.clone(), p]);
        assert_eq!(still.casimir, 0.0);
    }

    #[test]
    fn vector_fields() {
        let (m, a) = setup("su:2,2", "bochner:1,1");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = m.random_point(&a, &mut rng).unwrap();
        let x = [0.4, -1.0, 0.3, 0.8];
        let y = [-0.2, 0.5, 1.1, -0.7];
        let h = [0.5, -0.3, 0.2, 0.9];
        let r1 = vector_field_audit(&m, &a, &p, &x, &y, &h, 1e-2).unwrap();
        let r2 = vector_field_audit(&m, &a, &p, &x, &y, &h, 5e-3).unwrap();
        assert!(r1.vertical[2] < 1e-9 && r2.vertical[2] < 1e-9);
        // each residual is below roundoff or shrinks like eps^2
        let ok = |a: f64, b: f64| b < 1e-9 || (0.15..=0.4).contains(&(b / a));
        for k in 0..3 {
            assert!(ok(r1.horizontal[k], r2.horizontal[k]) && ok(r1.vertical[k], r2.vertical[k]), "{r1:?} {r2:?}");
        }
        assert!(ok(r1.bracket, r2.bracket), "{r1:?} {r2:?}");
    }

    #[test]
    fn transversality_fractions() {
        let (m, a) = setup("sp_real:2", "ricci:1");
        assert_eq!(transversality_scan(&m, &a, 500, 4), 1.0);
        let (m, a) = setup("su:2,2", "bochner:1,1");
        assert_eq!(transversality_scan(&m, &a, 500, 4), 1.0);
        let (m, a) = setup("sl_real:3", "normal:1,0");
        let f = transversality_scan(&m, &a, 500, 4);
        assert!(f < 1.0 && f > 0.0, "{f}");
    }
}
