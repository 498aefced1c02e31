//! Momenta `a` in `g`, exact stabilizers and normal forms.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::liecore::matrix_forms::{split_form, AlgebraSpec, Presented};
use crate::liecore::LieAlgebra;
use crate::linalg::{kernel, Mat};
use crate::scalar::{parse_rational, rational_string, Field, GaussianRational, Rational};

use super::FlowModel;

/// How to choose the momentum `a`.
#[derive(Clone, Debug, PartialEq)]
pub enum MomentumSpec {
    /// `i((q+1) P+ - (p+1) P-)` on `su(p+1, q+1)`.
    Bochner(usize, usize),
    /// `c J` on `sp(2n, R)` with `J = [[0, I], [-I, 0]]`.
    Ricci(Rational),
    /// `c/2 (e+^2 + e-^2) + rho0`, `rho0` in `h` coordinates (empty means zero).
    Normal(Rational, Vec<Rational>),
    /// JSON file with `{"coords": [...]}` or `{"matrix": [[[re, im], ...], ...]}`.
    Explicit(PathBuf),
}

impl fmt::Display for MomentumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentumSpec::Bochner(p, q) => write!(f, "bochner:{p},{q}"),
            MomentumSpec::Ricci(c) => write!(f, "ricci:{}", rational_string(c)),
            MomentumSpec::Normal(c, r) => {
                write!(f, "normal:{}", rational_string(c))?;
                if r.is_empty() {
                    write!(f, ",0")
                } else {
                    let s: Vec<String> = r.iter().map(rational_string).collect();
                    write!(f, ",{}", s.join(";"))
                }
            }
            MomentumSpec::Explicit(p) => write!(f, "explicit:{}", p.display()),
        }
    }
}

fn rat(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).ok_or_else(|| Error::InvalidInput(format!("bad rational {s:?}")))
}

impl FromStr for MomentumSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let Some((kind, rest)) = s.trim().split_once(':') else {
            return invalid(format!("momentum {s:?} is not KIND:ARGS"));
        };
        Ok(match kind {
            "bochner" => {
                let v: Vec<&str> = rest.split(',').collect();
                let parse =
                    |x: &str| x.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad integer {x:?}")));
                if v.len() != 2 {
                    return invalid("bochner needs p,q");
                }
                MomentumSpec::Bochner(parse(v[0])?, parse(v[1])?)
            }
            "ricci" => MomentumSpec::Ricci(rat(rest)?),
            "normal" => {
                let (c, r) = rest.split_once(',').unwrap_or((rest, "0"));
                let rho = if r.trim() == "0" { Vec::new() } else { r.split(';').map(rat).collect::<Result<_>>()? };
                MomentumSpec::Normal(rat(c)?, rho)
            }
            "explicit" => MomentumSpec::Explicit(PathBuf::from(rest)),
            other => return invalid(format!("unknown momentum kind {other:?}")),
        })
    }
}

fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

/// Matrix `i((q+1) P+ - (p+1) P-)` for the positive and negative parts of the
/// Hermitian form with one corner hyperbolic pair.
fn bochner_matrix(p: usize, q: usize) -> Mat<GaussianRational> {
    let n = p + q + 2;
    let eta = split_form(1, p, q);
    let half = |x: i64| GaussianRational::new(Rational::new(x.into(), 2.into()), Rational::zero());
    let mut pp = vec![vec![GaussianRational::zero(); n]; n];
    let mut pm = pp.clone();
    for (a, b) in [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)] {
        pp[a][b] = half(1);
        pm[a][b] = if a == b { half(1) } else { half(-1) };
    }
    for k in 1..n - 1 {
        if eta[k][k].re.is_one() {
            pp[k][k] = gr(1, 0);
        } else {
            pm[k][k] = gr(1, 0);
        }
    }
    let (cp, cm) = (gr(0, q as i64 + 1), gr(0, -(p as i64 + 1)));
    (0..n).map(|i| (0..n).map(|j| cp.clone() * pp[i][j].clone() + cm.clone() * pm[i][j].clone()).collect()).collect()
}

fn ricci_matrix(n: usize, c: &Rational) -> Mat<GaussianRational> {
    let mut m = vec![vec![GaussianRational::zero(); 2 * n]; 2 * n];
    let c = GaussianRational::from_rational(c);
    for k in 0..n {
        m[k][n + k] = c.clone();
        m[n + k][k] = -c.clone();
    }
    m
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => rat(s),
        serde_json::Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                rat(&x.to_string())
            }
        }
        _ => invalid(format!("expected a number, got {v}")),
    }
}

fn explicit(path: &PathBuf, g: &LieAlgebra<Rational>) -> Result<Vec<Rational>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    if let Some(c) = v.get("coords").and_then(|c| c.as_array()) {
        let c: Vec<Rational> = c.iter().map(json_rational).collect::<Result<_>>()?;
        if c.len() != g.dim {
            return invalid(format!("expected {} coordinates, got {}", g.dim, c.len()));
        }
        return Ok(c);
    }
    if let Some(rows) = v.get("matrix").and_then(|c| c.as_array()) {
        let model = g.model.as_ref().ok_or_else(|| Error::Unsupported("algebra has no matrix model".into()))?;
        let mut m = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::InvalidInput("matrix rows must be arrays".into()))?;
            let row = r
                .iter()
                .map(|z| match z.as_array().map(|z| z.as_slice()) {
                    Some([re, im]) => Ok(GaussianRational::new(json_rational(re)?, json_rational(im)?)),
                    _ => Ok(GaussianRational::new(json_rational(z)?, Rational::zero())),
                })
                .collect::<Result<Vec<_>>>()?;
            m.push(row);
        }
        if m.len() != model.size || m.iter().any(|r| r.len() != model.size) {
            return invalid(format!("matrix must be {0} x {0}", model.size));
        }
        return model.coords(&m);
    }
    invalid("explicit momentum needs \"coords\" or \"matrix\"")
}

impl MomentumSpec {
    /// Coordinates of `a` in the original basis of the algebra.
    pub fn resolve(&self, p: &Presented, m: &FlowModel) -> Result<Vec<Rational>> {
        let g = &p.algebra;
        let from_matrix = |mat: Mat<GaussianRational>| -> Result<Vec<Rational>> {
            g.model.as_ref().ok_or_else(|| Error::Unsupported("algebra has no matrix model".into()))?.coords(&mat)
        };
        match self {
            MomentumSpec::Bochner(a, b) => match p.spec {
                AlgebraSpec::Su(pp, qq) if pp == a + 1 && qq == b + 1 => from_matrix(bochner_matrix(*a, *b)),
                _ => invalid(format!("bochner:{a},{b} needs su:{},{}", a + 1, b + 1)),
            },
            MomentumSpec::Ricci(c) => match p.spec {
                AlgebraSpec::SpReal(n) => from_matrix(ricci_matrix(n, c)),
                _ => invalid("ricci momentum needs sp_real"),
            },
            MomentumSpec::Normal(c, rho) => {
                let l = m.lay;
                if !rho.is_empty() && rho.len() != l.m {
                    return invalid(format!("rho0 needs {} coordinates", l.m));
                }
                let mut f = vec![Rational::zero(); l.dim()];
                let half = c.clone() / Rational::from_integer(2.into());
                f[l.em2()] = half.clone();
                f[l.ep2()] = half;
                for (k, r) in rho.iter().enumerate() {
                    f[l.hh(k)] = r.clone();
                }
                Ok(m.from_frame(&f))
            }
            MomentumSpec::Explicit(path) => explicit(path, g),
        }
    }
}

impl FlowModel {
    /// Original coordinates of a vector given in frame coordinates.
    pub fn from_frame(&self, f: &[Rational]) -> Vec<Rational> {
        let frame = self.grading.frame();
        let d = self.dim;
        (0..d).map(|i| f.iter().zip(&frame).fold(Rational::zero(), |s, (c, v)| s + c.clone() * v[i].clone())).collect()
    }
}

/// Dimension of the stabilizer of `a` under the adjoint action.
pub fn stabilizer_dim(g: &LieAlgebra<Rational>, a: &[Rational]) -> Result<usize> {
    if a.iter().all(|x| x.is_zero()) {
        return invalid("momentum must be nonzero");
    }
    Ok(g.centralizer(a).len())
}

/// Dimension of the symmetry algebra of the flow for `a`: the stabilizer
/// modulo the line of `a` itself.
pub fn symmetry_dimension(g: &LieAlgebra<Rational>, a: &[Rational]) -> Result<usize> {
    Ok(stabilizer_dim(g, a)? - 1)
}

/// `exp(ad n) a` for nilpotent `n`, computed exactly.
pub fn conjugate_nilpotent(g: &LieAlgebra<Rational>, n: &[Rational], a: &[Rational]) -> Result<Vec<Rational>> {
    let mut term = a.to_vec();
    let mut out = a.to_vec();
    for k in 1..=g.dim + 1 {
        term = g.bracket(n, &term);
        if term.iter().all(|x| x.is_zero()) {
            return Ok(out);
        }
        let kk = Rational::from_integer((k as i64).into());
        term = term.into_iter().map(|x| x / kk.clone()).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o = o.clone() + t.clone();
        }
    }
    invalid("element is not ad-nilpotent")
}

/// `a = c/2 (e+^2 + e-^2) + rho0` with `rho0^2 = -c^2` on `V`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NormalForm {
    pub c: String,
    pub rho0: Vec<String>,
    /// Stabilizer dimension predicted as `1 + dim k + dim V`, `k` the centralizer of `rho0` in `h`.
    pub predicted_stabilizer: usize,
}

/// Recognizes the normal form in frame coordinates.
pub fn normal_form(m: &FlowModel, a_orig: &[Rational]) -> Option<NormalForm> {
    let l = m.lay;
    let f = m.frame_coords(a_orig);
    let zero_v = (0..l.n).all(|i| f[l.vm(i)].is_zero() && f[l.vp(i)].is_zero());
    if !zero_v || !f[l.epm()].is_zero() || f[l.em2()] != f[l.ep2()] || f[l.em2()].is_zero() {
        return None;
    }
    let c = f[l.em2()].clone() * Rational::from_integer(2.into());
    let rho0: Vec<Rational> = (0..l.m).map(|k| f[l.hh(k)].clone()).collect();
    let d = &m.exact_ssd;
    let r = d.act_matrix(&rho0);
    let r2 = crate::linalg::mat_mul(&r, &r);
    let c2 = c.clone() * c.clone();
    for i in 0..l.n {
        for j in 0..l.n {
            let want = if i == j { -c2.clone() } else { Rational::zero() };
            if r2[i][j] != want {
                return None;
            }
        }
    }
    let adr: Mat<Rational> = {
        let cols: Vec<Vec<Rational>> = (0..l.m).map(|j| d.h_bracket(&rho0, &d.unit_h(j))).collect();
        (0..l.m).map(|i| (0..l.m).map(|j| cols[j][i].clone()).collect()).collect()
    };
    let k = kernel(&adr, l.m).len();
    Some(NormalForm {
        c: rational_string(&c),
        rho0: rho0.iter().map(rational_string).collect(),
        predicted_stabilizer: 1 + k + l.n,
    })
}

/// The element `sum_k 10^k h_k` of the preferred Cartan subalgebra. Root
/// values on the `h_k` are small integers, so no root vanishes on it.
pub fn generic_cartan_element(g: &LieAlgebra<Rational>) -> Vec<Rational> {
    let coeffs: Vec<Rational> =
        (0..g.cartan.len()).map(|k| Rational::from_integer(num_bigint::BigInt::from(10).pow(k as u32))).collect();
    crate::linalg::lin_comb(&coeffs, &g.cartan, g.dim)
}

/// Matrix of `a` in the defining representation, when there is one.
pub fn as_matrix(g: &LieAlgebra<Rational>, a: &[Rational]) -> Option<Mat<GaussianRational>> {
    g.model.as_ref().map(|m| m.matrix(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::matrix_forms::build;
    use crate::liecore::ChevalleyOptions;

    fn setup(alg: &str) -> (Presented, FlowModel) {
        let p = build(&alg.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
        let m = FlowModel::new(&p).unwrap();
        (p, m)
    }

    #[test]
    fn parse_round_trip() {
        for s in ["bochner:1,1", "ricci:3/2", "normal:1,0", "normal:2,1;-1/2;0", "explicit:a.json"] {
            let m: MomentumSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("bochner:1".parse::<MomentumSpec>().is_err());
        assert!("spin:1".parse::<MomentumSpec>().is_err());
    }

    #[test]
    fn bochner_on_su22() {
        let (p, m) = setup("su:2,2");
        let a = MomentumSpec::Bochner(1, 1).resolve(&p, &m).unwrap();
        assert_eq!(stabilizer_dim(&p.algebra, &a).unwrap(), 7);
        assert_eq!(symmetry_dimension(&p.algebra, &a).unwrap(), 6);
        let nf = normal_form(&m, &a).expect("normal form");
        assert_eq!(nf.c, "2");
        assert_eq!(nf.predicted_stabilizer, 7);
        assert!(MomentumSpec::Bochner(1, 2).resolve(&p, &m).is_err());
    }

    #[test]
    fn invariance_under_nilpotents_and_scaling() {
        let (p, m) = setup("su:2,2");
        let g = &p.algebra;
        let a = MomentumSpec::Bochner(1, 1).resolve(&p, &m).unwrap();
        let s0 = stabilizer_dim(g, &a).unwrap();
        for v in m.grading.v_plus.iter().chain([&m.grading.e_plus2]) {
            let b = conjugate_nilpotent(g, v, &a).unwrap();
            assert_ne!(b, a);
            assert_eq!(stabilizer_dim(g, &b).unwrap(), s0);
        }
        let half = Rational::new(3.into(), 7.into());
        let b: Vec<Rational> = a.iter().map(|x| x.clone() * half.clone()).collect();
        assert_eq!(stabilizer_dim(g, &b).unwrap(), s0);
        assert!(conjugate_nilpotent(g, &a, &a).is_ok());
        assert!(stabilizer_dim(g, &vec![Rational::zero(); g.dim]).is_err());
    }

    #[test]
    fn generic_element_has_rank_stabilizer() {
        for alg in ["sl_real:3", "sp_real:2", "g2_split"] {
            let (p, _) = setup(alg);
            let a = generic_cartan_element(&p.algebra);
            let r = p.algebra.cartan.len();
            assert_eq!(symmetry_dimension(&p.algebra, &a).unwrap(), r - 1, "{alg}");
        }
    }

    #[test]
    fn normal_spec_is_recognized() {
        let (p, m) = setup("sp_real:2");
        let a = MomentumSpec::Normal(Rational::one(), Vec::new()).resolve(&p, &m).unwrap();
        let f = m.frame_coords(&a);
        assert_eq!(f[m.lay.em2()], Rational::new(1.into(), 2.into()));
        // rho0 = 0 does not square to -c^2
        assert!(normal_form(&m, &a).is_none());
    }
}
