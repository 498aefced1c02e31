//! Special symplectic data `(V, omega, h, o)` read off a contact grading, the
//! identities it satisfies, and the reverse construction of `g` from it.
//!
//! The brackets are
//! `[e (x) x, f (x) y] = omega(x, y) ef + a(e, f) x o y`, with `a(e+, e-) = 1`.

use serde::Serialize;

use crate::error::{construction, Result};
use crate::grading::{FrameLayout, TwoGrading};
use crate::liecore::{Coordinates, LieAlgebra};
use crate::linalg::{lin_comb, mat_mul, rank, trace, Mat, Subspace};
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct SymplecticData<S> {
    pub name: String,
    /// `omega[i][j] = omega(v_i, v_j)`.
    pub omega: Mat<S>,
    /// `circle[i][j]`: coordinates of `v_i o v_j` in the basis of `h`.
    pub circle: Vec<Vec<Vec<S>>>,
    /// Matrix of `h_k` acting on `V`; column `j` is `h_k v_j`.
    pub action: Vec<Mat<S>>,
    /// `bracket[a][b]`: coordinates of `[h_a, h_b]`.
    pub bracket: Vec<Vec<Vec<S>>>,
    /// Normalized invariant form `-B / (2 (dimV + 4))` on `h`.
    pub h_form: Mat<S>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str, pass: bool, witness: Option<String>) -> Self {
        Check { name: name.to_string(), pass, witness: if pass { None } else { witness } }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityReport {
    pub algebra: String,
    pub checks: Vec<Check>,
    pub dims: Dims,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Dims {
    pub g: usize,
    #[serde(rename = "V")]
    pub v: usize,
    pub h: usize,
}

fn zero<S: Field>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

fn is_zero_vec<S: Field>(v: &[S]) -> bool {
    v.iter().all(|x| x.is_negligible())
}

fn vsub<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn vadd<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn vscale<S: Field>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

/// `x^T M y`.
pub fn bilinear<S: Field>(m: &Mat<S>, x: &[S], y: &[S]) -> S {
    let mut s = S::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !m[i][j].is_zero() {
                s = s + xi.clone() * m[i][j].clone() * yj.clone();
            }
        }
    }
    s
}

impl<S: Field> SymplecticData<S> {
    pub fn from_grading(g: &LieAlgebra<S>, t: &TwoGrading<S>) -> Result<Self> {
        let lay = t.layout();
        let (n, m) = (lay.n, lay.m);
        let fc = t.frame_coordinates(g.dim)?;
        let coords = |v: &[S]| -> Result<Vec<S>> {
            fc.of(v).ok_or_else(|| crate::Error::Construction("frame does not span g".into()))
        };
        let mut omega = vec![zero::<S>(n); n];
        let mut circle = vec![vec![zero::<S>(m); n]; n];
        for i in 0..n {
            for j in 0..n {
                let pp = coords(&g.bracket(&t.v_plus[i], &t.v_plus[j]))?;
                omega[i][j] = pp[lay.ep2()].clone();
                let mut rest = pp.clone();
                rest[lay.ep2()] = S::zero();
                if !is_zero_vec(&rest) {
                    return construction("[g^1, g^1] leaves g^2");
                }
                let pm = coords(&g.bracket(&t.v_plus[i], &t.v_minus[j]))?;
                if !(pm[lay.epm()].clone() - omega[i][j].clone()).is_negligible() {
                    return construction("e+e- component of [e+ x, e- y] differs from omega");
                }
                circle[i][j] = (0..m).map(|k| pm[lay.hh(k)].clone()).collect();
            }
        }
        let mut action = Vec::with_capacity(m);
        let mut bracket = Vec::with_capacity(m);
        for a in 0..m {
            let mut mat = vec![zero::<S>(n); n];
            for j in 0..n {
                let c = coords(&g.bracket(&t.h_basis[a], &t.v_plus[j]))?;
                for i in 0..n {
                    mat[i][j] = c[lay.vp(i)].clone();
                }
            }
            action.push(mat);
            let row: Result<Vec<Vec<S>>> = (0..m)
                .map(|b| {
                    let c = coords(&g.bracket(&t.h_basis[a], &t.h_basis[b]))?;
                    Ok((0..m).map(|k| c[lay.hh(k)].clone()).collect())
                })
                .collect();
            bracket.push(row?);
        }
        let norm = -S::one() / S::from_i64(2 * (n as i64 + 4));
        let h_form =
            t.h_basis.iter().map(|u| t.h_basis.iter().map(|v| g.killing(u, v) * norm.clone()).collect()).collect();
        Ok(SymplecticData { name: g.name.clone(), omega, circle, action, bracket, h_form })
    }

    pub fn dim_v(&self) -> usize {
        self.omega.len()
    }

    pub fn dim_h(&self) -> usize {
        self.action.len()
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T + Copy) -> SymplecticData<T> {
        let mm = |a: &Mat<S>| crate::linalg::map_mat(a, f);
        SymplecticData {
            name: self.name.clone(),
            omega: mm(&self.omega),
            circle: self.circle.iter().map(&mm).collect(),
            action: self.action.iter().map(mm).collect(),
            bracket: self.bracket.iter().map(&mm).collect(),
            h_form: mm(&self.h_form),
        }
    }

    pub fn omega(&self, x: &[S], y: &[S]) -> S {
        bilinear(&self.omega, x, y)
    }

    /// `x o y` in `h` coordinates.
    pub fn circ(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out: Vec<S> = zero(self.dim_h());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (o, v) in out.iter_mut().zip(&self.circle[i][j]) {
                    if !v.is_zero() {
                        *o = o.clone() + c.clone() * v.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `h` acting on `V`.
    pub fn act_matrix(&self, h: &[S]) -> Mat<S> {
        let n = self.dim_v();
        let mut out = vec![zero::<S>(n); n];
        for (c, a) in h.iter().zip(&self.action) {
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    if !a[i][j].is_zero() {
                        out[i][j] = out[i][j].clone() + c.clone() * a[i][j].clone();
                    }
                }
            }
        }
        out
    }

    /// `h x`.
    pub fn act(&self, h: &[S], x: &[S]) -> Vec<S> {
        crate::linalg::mat_vec(&self.act_matrix(h), x)
    }

    /// `[h, k]` in `h` coordinates.
    pub fn h_bracket(&self, a: &[S], b: &[S]) -> Vec<S> {
        let m = self.dim_h();
        let mut out: Vec<S> = zero(m);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.clone() * bj.clone();
                for (o, v) in out.iter_mut().zip(&self.bracket[i][j]) {
                    *o = o.clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    pub fn unit_v(&self, i: usize) -> Vec<S> {
        let mut v = zero(self.dim_v());
        v[i] = S::one();
        v
    }

    pub fn unit_h(&self, i: usize) -> Vec<S> {
        let mut v = zero(self.dim_h());
        v[i] = S::one();
        v
    }

    /// `h` viewed as a Lie algebra.
    pub fn h_algebra(&self) -> LieAlgebra<S> {
        LieAlgebra::from_fn(&format!("h({})", self.name), self.dim_h(), |a, b| self.bracket[a][b].clone())
    }

    /// Rank of `o` as a map `S^2 V -> h`.
    pub fn circle_rank(&self) -> usize {
        let n = self.dim_v();
        let rows: Vec<Vec<S>> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.circle[i][j].clone()).collect();
        rank(&rows)
    }

    /// `h = sp(V, omega)`.
    pub fn is_full_sp(&self) -> bool {
        let n = self.dim_v();
        self.dim_h() == n * (n + 1) / 2
    }

    /// All identities of the data that do not need the ambient algebra.
    pub fn intrinsic_checks(&self) -> Vec<Check> {
        let (n, m) = (self.dim_v(), self.dim_h());
        let mut out = Vec::new();
        let e = |i| self.unit_v(i);
        let mut w = None;
        'a: for i in 0..n {
            for j in 0..n {
                if !(self.omega[i][j].clone() + self.omega[j][i].clone()).is_negligible() {
                    w = Some(format!("omega({i},{j})"));
                    break 'a;
                }
            }
        }
        let nondeg = rank(&self.omega) == n;
        out.push(Check::new("omega antisymmetric and nondegenerate", w.is_none() && nondeg, w));

        let mut w = None;
        'b: for i in 0..n {
            for j in 0..n {
                if !is_zero_vec(&vsub(&self.circle[i][j], &self.circle[j][i])) {
                    w = Some(format!("v{i} o v{j}"));
                    break 'b;
                }
            }
        }
        out.push(Check::new("o symmetric", w.is_none(), w));

        let mut w = None;
        'c: for k in 0..m {
            let hk = self.unit_h(k);
            for i in 0..n {
                for j in 0..n {
                    let s = self.omega(&self.act(&hk, &e(i)), &e(j)) + self.omega(&e(i), &self.act(&hk, &e(j)));
                    if !s.is_negligible() {
                        w = Some(format!("h{k}, v{i}, v{j}"));
                        break 'c;
                    }
                }
            }
        }
        out.push(Check::new("omega is h-invariant", w.is_none(), w));

        let mut w = None;
        'd: for k in 0..m {
            let hk = self.unit_h(k);
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.h_bracket(&hk, &self.circle[i][j]);
                    let rhs = vadd(&self.circ(&self.act(&hk, &e(i)), &e(j)), &self.circ(&e(i), &self.act(&hk, &e(j))));
                    if !is_zero_vec(&vsub(&lhs, &rhs)) {
                        w = Some(format!("h{k}, v{i}, v{j}"));
                        break 'd;
                    }
                }
            }
        }
        out.push(Check::new("o is h-equivariant", w.is_none(), w));

        // Adams: (h, x o y) = omega(h x, y) = omega(h y, x)
        let mut w = None;
        'e: for k in 0..m {
            let hk = self.unit_h(k);
            for i in 0..n {
                for j in 0..n {
                    let lhs = bilinear(&self.h_form, &hk, &self.circle[i][j]);
                    let r1 = self.omega(&self.act(&hk, &e(i)), &e(j));
                    let r2 = self.omega(&self.act(&hk, &e(j)), &e(i));
                    if !(lhs.clone() - r1).is_negligible() || !(lhs - r2).is_negligible() {
                        w = Some(format!("h{k}, v{i}, v{j}"));
                        break 'e;
                    }
                }
            }
        }
        out.push(Check::new("(h, x o y) = omega(hx, y) = omega(hy, x)", w.is_none(), w));

        // (x o y) z - (x o z) y = 2 omega(y, z) x - omega(x, y) z + omega(x, z) y
        let mut w = None;
        let two = S::from_i64(2);
        'f: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (e(i), e(j), e(k));
                    let lhs = vsub(&self.act(&self.circle[i][j], &z), &self.act(&self.circle[i][k], &y));
                    let rhs = vadd(
                        &vsub(&vscale(&x, &(two.clone() * self.omega[j][k].clone())), &vscale(&z, &self.omega[i][j])),
                        &vscale(&y, &self.omega[i][k]),
                    );
                    if !is_zero_vec(&vsub(&lhs, &rhs)) {
                        w = Some(format!("v{i}, v{j}, v{k}"));
                        break 'f;
                    }
                }
            }
        }
        out.push(Check::new("(x o y)z - (x o z)y = 2 omega(y,z)x - omega(x,y)z + omega(x,z)y", w.is_none(), w));

        if self.is_full_sp() {
            let mut w = None;
            'g: for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = self.act(&self.circle[i][j], &e(k));
                        let rhs = vadd(&vscale(&e(j), &self.omega[i][k]), &vscale(&e(i), &self.omega[j][k]));
                        if !is_zero_vec(&vsub(&lhs, &rhs)) {
                            w = Some(format!("v{i}, v{j}, v{k}"));
                            break 'g;
                        }
                    }
                }
            }
            out.push(Check::new("sp case: (x o y)z = omega(x,z)y + omega(y,z)x", w.is_none(), w));
        }

        let r = self.circle_rank();
        out.push(Check::new("rank of o equals dim h", r == m, Some(format!("rank {r}, dim h {m}"))));
        out
    }
}

/// Identities that tie the data back to `g`.
pub fn ambient_checks<S: Field>(g: &LieAlgebra<S>, t: &TwoGrading<S>, d: &SymplecticData<S>) -> Result<Vec<Check>> {
    let (n, m) = (d.dim_v(), d.dim_h());
    let norm = -S::one() / S::from_i64(2 * (n as i64 + 4));
    let form = |x: &[S], y: &[S]| g.killing(x, y) * norm.clone();
    let mut out = Vec::new();

    let jac = g.jacobi_audit();
    out.push(Check::new("Jacobi identity", jac.ok, jac.witness.map(|w| format!("{w:?}"))));

    // grade of each frame vector
    let lay = t.layout();
    let frame = t.frame();
    let grade = |k: usize| -> i64 {
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
    };
    let mut w = None;
    'a: for a in 0..frame.len() {
        for b in a..frame.len() {
            if grade(a) + grade(b) != 0 && !form(&frame[a], &frame[b]).is_negligible() {
                w = Some(format!("frame {a}, {b}"));
                break 'a;
            }
        }
    }
    out.push(Check::new("(g^i, g^j) = 0 for i + j != 0", w.is_none(), w));

    // (ef, gh) = a(e,g)a(f,h) + a(e,h)a(f,g) on sl2
    let sl2 = [(-1i64, -1i64, &t.e_minus2), (1, -1, &t.e_pm), (1, 1, &t.e_plus2)];
    let a = |p: i64, q: i64| -> i64 {
        match (p, q) {
            (1, -1) => 1,
            (-1, 1) => -1,
            _ => 0,
        }
    };
    let mut w = None;
    for (e1, f1, x) in sl2 {
        for (e2, f2, y) in sl2 {
            let expect = a(e1, e2) * a(f1, f2) + a(e1, f2) * a(f1, e2);
            if !(form(x, y) - S::from_i64(expect)).is_negligible() {
                w = Some(format!("({e1}{f1}, {e2}{f2}) != {expect}"));
            }
        }
    }
    out.push(Check::new("(ef, gh) = a(e,g)a(f,h) + a(e,h)a(f,g)", w.is_none(), w));
    let pm = form(&t.e_pm, &t.e_pm);
    out.push(Check::new("(e+e-, e+e-) = -1", (pm.clone() + S::one()).is_negligible(), Some(format!("{pm:?}"))));

    // B(u, v) = 2 tr_V(uv) + B_h(u, v)
    let bh = d.h_algebra().killing_matrix();
    let mut w = None;
    'c: for i in 0..m {
        for j in 0..m {
            let tr = trace(&mat_mul(&d.action[i], &d.action[j]));
            let rhs = S::from_i64(2) * tr + bh[i][j].clone();
            if !(g.killing(&t.h_basis[i], &t.h_basis[j]) - rhs).is_negligible() {
                w = Some(format!("h{i}, h{j}"));
                break 'c;
            }
        }
    }
    out.push(Check::new("B = 2 tr_V(uv) + B_h on h", w.is_none(), w));

    // (e (x) x, f (x) y) = a(e, f) omega(x, y)
    let mut w = None;
    'd: for i in 0..n {
        for j in 0..n {
            let om = d.omega[i][j].clone();
            let pairs = [
                (&t.v_plus[i], &t.v_minus[j], om.clone()),
                (&t.v_minus[i], &t.v_plus[j], -om.clone()),
                (&t.v_plus[i], &t.v_plus[j], S::zero()),
                (&t.v_minus[i], &t.v_minus[j], S::zero()),
            ];
            for (x, y, expect) in pairs {
                if !(form(x, y) - expect).is_negligible() {
                    w = Some(format!("v{i}, v{j}"));
                    break 'd;
                }
            }
        }
    }
    out.push(Check::new("(e x, f y) = a(e,f) omega(x,y)", w.is_none(), w));

    let bhh = g.killing(&t.h, &t.h);
    out.push(Check::new(
        "B(H, H) = 2 (dimV + 4)",
        (bhh.clone() - S::from_i64(2 * (n as i64 + 4))).is_negligible(),
        Some(format!("{bhh:?}")),
    ));
    Ok(out)
}

/// Full identity report for a graded algebra.
pub fn identity_report<S: Field>(
    g: &LieAlgebra<S>,
    t: &TwoGrading<S>,
    d: &SymplecticData<S>,
) -> Result<IdentityReport> {
    let mut checks = ambient_checks(g, t, d)?;
    checks.extend(d.intrinsic_checks());
    Ok(IdentityReport { algebra: g.name.clone(), checks, dims: Dims { g: g.dim, v: d.dim_v(), h: d.dim_h() } })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sign {
    P,
    M,
}

fn a_form(x: Sign, y: Sign) -> i64 {
    match (x, y) {
        (Sign::P, Sign::M) => 1,
        (Sign::M, Sign::P) => -1,
        _ => 0,
    }
}

/// Rebuilds `sl2 + h + F^2 (x) V` from the data, in frame order.
pub fn reconstruct<S: Field>(d: &SymplecticData<S>, name: &str) -> LieAlgebra<S> {
    let (n, m) = (d.dim_v(), d.dim_h());
    let lay = FrameLayout { n, m };
    let dim = lay.dim();
    #[derive(Clone, Copy)]
    enum B {
        Sl(Sign, Sign),
        H(usize),
        Odd(Sign, usize),
    }
    let kind = |k: usize| -> B {
        if k == lay.em2() {
            B::Sl(Sign::M, Sign::M)
        } else if k < lay.epm() {
            B::Odd(Sign::M, k - 1)
        } else if k == lay.epm() {
            B::Sl(Sign::P, Sign::M)
        } else if k < lay.vp(0) {
            B::H(k - lay.hh(0))
        } else if k < lay.ep2() {
            B::Odd(Sign::P, k - lay.vp(0))
        } else {
            B::Sl(Sign::P, Sign::P)
        }
    };
    let sl_index = |p: Sign, q: Sign| -> usize {
        match (p, q) {
            (Sign::M, Sign::M) => lay.em2(),
            (Sign::P, Sign::P) => lay.ep2(),
            _ => lay.epm(),
        }
    };
    let odd_index = |s: Sign, i: usize| -> usize {
        match s {
            Sign::M => lay.vm(i),
            Sign::P => lay.vp(i),
        }
    };
    // (ef) . g = a(e,g) f + a(f,g) e, as coefficients on e+ and e-
    let act_sl = |e: Sign, f: Sign, g: Sign| -> [(Sign, i64); 2] { [(f, a_form(e, g)), (e, a_form(f, g))] };
    let bracket = |i: usize, j: usize| -> Vec<S> {
        let mut out = vec![S::zero(); dim];
        let mut add = |k: usize, c: S| out[k] = out[k].clone() + c;
        match (kind(i), kind(j)) {
            (B::Sl(e, f), B::Sl(g, h)) => {
                for (c, p, q) in
                    [(a_form(e, g), f, h), (a_form(e, h), f, g), (a_form(f, g), e, h), (a_form(f, h), e, g)]
                {
                    if c != 0 {
                        add(sl_index(p, q), S::from_i64(c));
                    }
                }
            }
            (B::Sl(e, f), B::Odd(g, x)) => {
                for (s, c) in act_sl(e, f, g) {
                    if c != 0 {
                        add(odd_index(s, x), S::from_i64(c));
                    }
                }
            }
            (B::Odd(g, x), B::Sl(e, f)) => {
                for (s, c) in act_sl(e, f, g) {
                    if c != 0 {
                        add(odd_index(s, x), -S::from_i64(c));
                    }
                }
            }
            (B::H(a), B::H(b)) => {
                for (k, c) in d.bracket[a][b].iter().enumerate() {
                    add(lay.hh(k), c.clone());
                }
            }
            (B::H(a), B::Odd(s, x)) => {
                for r in 0..n {
                    add(odd_index(s, r), d.action[a][r][x].clone());
                }
            }
            (B::Odd(s, x), B::H(a)) => {
                for r in 0..n {
                    add(odd_index(s, r), -d.action[a][r][x].clone());
                }
            }
            (B::Odd(e, x), B::Odd(f, y)) => {
                let om = d.omega[x][y].clone();
                add(sl_index(e, f), om);
                let c = a_form(e, f);
                if c != 0 {
                    for (k, v) in d.circle[x][y].iter().enumerate() {
                        add(lay.hh(k), S::from_i64(c) * v.clone());
                    }
                }
            }
            (B::Sl(..), B::H(_)) | (B::H(_), B::Sl(..)) => {}
        }
        out
    };
    LieAlgebra::from_fn(name, dim, bracket)
}

/// Dimension of the ideal generated by `x`.
pub fn ideal_dim<S: Field>(g: &LieAlgebra<S>, x: &[S]) -> usize {
    let mut span = Subspace::span(&[x.to_vec()], g.dim);
    loop {
        let basis = span.basis();
        let mut new = basis.clone();
        for b in &basis {
            for i in 0..g.dim {
                new.push(g.bracket(&g.unit(i), b));
            }
        }
        let next = Subspace::span(&new, g.dim);
        if next.dim() == span.dim() {
            return span.dim();
        }
        span = next;
    }
}

/// Outcome of rebuilding `g` from its own data.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RoundTrip {
    pub jacobi: bool,
    pub ideal_is_everything: bool,
    pub matches_original: bool,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.jacobi && self.ideal_is_everything && self.matches_original
    }
}

pub fn round_trip<S: Field>(g: &LieAlgebra<S>, t: &TwoGrading<S>, d: &SymplecticData<S>) -> Result<RoundTrip> {
    let rebuilt = reconstruct(d, &format!("{}~", g.name));
    let jacobi = rebuilt.jacobi_audit().ok;
    let lay = t.layout();
    let ideal = ideal_dim(&rebuilt, &rebuilt.unit(lay.ep2())) == rebuilt.dim;
    let original = g.change_basis(&t.frame())?;
    let matches = (0..g.dim).all(|i| {
        (0..g.dim).all(|j| {
            let a = original.basis_bracket(i, j);
            let b = rebuilt.basis_bracket(i, j);
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && (x.1.clone() - y.1.clone()).is_negligible())
        })
    });
    Ok(RoundTrip { jacobi, ideal_is_everything: ideal, matches_original: matches })
}

/// `[h, x o y] = (hx) o y + x o (hy)` for all basis triples.
pub fn circle_equivariance_audit<S: Field>(d: &SymplecticData<S>) -> bool {
    d.intrinsic_checks().iter().find(|c| c.name == "o is h-equivariant").is_some_and(|c| c.pass)
}

/// Copy of the data with `v_i o v_j` (and `v_j o v_i`) shifted by `delta h_k`.
pub fn perturb_circle<S: Field>(d: &SymplecticData<S>, i: usize, j: usize, k: usize, delta: S) -> SymplecticData<S> {
    let mut out = d.clone();
    out.circle[i][j][k] = out.circle[i][j][k].clone() + delta.clone();
    if i != j {
        out.circle[j][i][k] = out.circle[j][i][k].clone() + delta;
    }
    out
}

/// `sum_k c_k x_k` for vectors in `V`.
pub fn combine_v<S: Field>(c: &[S], basis: &[Vec<S>]) -> Vec<S> {
    let n = basis.first().map(|b| b.len()).unwrap_or(0);
    lin_comb(c, basis, n)
}

/// Coordinates of a graded-frame vector.
pub fn frame_coords<S: Field>(g: &LieAlgebra<S>, t: &TwoGrading<S>) -> Result<Coordinates<S>> {
    t.frame_coordinates(g.dim)
}

pub mod weights;
