//! Real matrix Lie algebras cut out by linear conditions, and the named
//! algebras the rest of the crate works with.
//!
//! Forms are written with hyperbolic pairs in the corners so that the first
//! basis vector is null and the canonical seed is a simple elementary matrix.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::linalg::{kernel, Mat, Rref};
use crate::rootsys::{Kind, RootSystem};
use crate::scalar::{gq, Field, GaussianRational, Rational};

use super::algebra::{LieAlgebra, MatrixModel};
use super::chevalley::{chevalley_algebra, root_vector_index, ChevalleyOptions};

type GMat = Mat<GaussianRational>;

pub fn zero_mat(n: usize) -> GMat {
    vec![vec![GaussianRational::zero(); n]; n]
}

/// `c E_ij`.
pub fn elementary(n: usize, i: usize, j: usize, c: GaussianRational) -> GMat {
    let mut m = zero_mat(n);
    m[i][j] = c;
    m
}

pub fn gmul(a: &GMat, b: &GMat) -> GMat {
    crate::linalg::mat_mul(a, b)
}

pub fn commutator(a: &GMat, b: &GMat) -> GMat {
    crate::linalg::mat_sub(&gmul(a, b), &gmul(b, a))
}

/// Conjugate transpose.
pub fn adjoint(a: &GMat) -> GMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn transpose(a: &GMat) -> GMat {
    crate::linalg::transpose(a)
}

fn diag(entries: &[i64]) -> GMat {
    let n = entries.len();
    let mut m = zero_mat(n);
    for (i, &e) in entries.iter().enumerate() {
        m[i][i] = GaussianRational::from_i64(e);
    }
    m
}

fn real_unit() -> GaussianRational {
    GaussianRational::one()
}

fn imag_unit() -> GaussianRational {
    gq(Rational::zero(), Rational::one())
}

/// The real Lie algebra `{X : constraint(X) = 0}` of `n x n` matrices,
/// with real or complex entries.
pub fn from_constraints(
    name: &str,
    n: usize,
    complex: bool,
    constraint: impl Fn(&GMat) -> Vec<GaussianRational>,
) -> Result<LieAlgebra<Rational>> {
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in 0..n {
            unknowns.push((i, j, false));
            if complex {
                unknowns.push((i, j, true));
            }
        }
    }
    let cols: Vec<Vec<Rational>> = unknowns
        .iter()
        .map(|&(i, j, im)| {
            let m = elementary(n, i, j, if im { imag_unit() } else { real_unit() });
            constraint(&m).into_iter().flat_map(|z| [z.re, z.im]).collect()
        })
        .collect();
    let neq = cols.first().map(|c| c.len()).unwrap_or(0);
    let rows: Vec<Vec<Rational>> = (0..neq).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let rr = Rref::new(&rows, unknowns.len());
    let mut positions = Vec::new();
    let mut mats = Vec::new();
    for (v, free) in rr.kernel().iter().zip(rr.free_columns()) {
        positions.push(unknowns[free]);
        let mut m = zero_mat(n);
        for (x, &(i, j, im)) in v.iter().zip(&unknowns) {
            if x.is_zero() {
                continue;
            }
            if im {
                m[i][j].im = x.clone();
            } else {
                m[i][j].re = x.clone();
            }
        }
        mats.push(m);
    }
    let model = MatrixModel { size: n, mats, positions };
    // Verify the read-off property.
    for (k, m) in model.mats.iter().enumerate() {
        let c = model.coords(m)?;
        for (l, x) in c.iter().enumerate() {
            let expect = if l == k { Rational::one() } else { Rational::zero() };
            if *x != expect {
                return invalid("basis is not in read-off form");
            }
        }
    }
    let dim = model.mats.len();
    let mut err: Option<Error> = None;
    let mut alg = LieAlgebra::from_fn(name, dim, |a, b| {
        let c = commutator(&model.mats[a], &model.mats[b]);
        model.coords(&c).unwrap_or_else(|e| {
            err = Some(e);
            vec![Rational::zero(); dim]
        })
    });
    if let Some(e) = err {
        return Err(Error::Construction(format!("{name} is not closed under commutators: {e}")));
    }
    alg.cartan = diagonal_part(&model);
    alg.model = Some(model);
    Ok(alg)
}

/// Basis of the diagonal matrices in the span of the model.
fn diagonal_part(model: &MatrixModel) -> Vec<Vec<Rational>> {
    let n = model.size;
    let d = model.mats.len();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            rows.push(model.mats.iter().map(|m| m[i][j].re.clone()).collect());
            rows.push(model.mats.iter().map(|m| m[i][j].im.clone()).collect());
        }
    }
    kernel(&rows, d)
}

/// Hermitian or symmetric form with hyperbolic pairs `(k, n-1-k)` for
/// `k < pairs` and a diagonal middle block of signature `(pos, neg)`.
pub fn split_form(pairs: usize, pos: usize, neg: usize) -> GMat {
    let n = 2 * pairs + pos + neg;
    let mut m = zero_mat(n);
    for k in 0..pairs {
        m[k][n - 1 - k] = real_unit();
        m[n - 1 - k][k] = real_unit();
    }
    for k in 0..pos + neg {
        let s = if k < pos { 1 } else { -1 };
        m[pairs + k][pairs + k] = GaussianRational::from_i64(s);
    }
    m
}

/// Standard symplectic form `[[0, I], [-I, 0]]` of size `2n`.
pub fn symplectic_form(n: usize) -> GMat {
    let mut m = zero_mat(2 * n);
    for k in 0..n {
        m[k][n + k] = real_unit();
        m[n + k][k] = -real_unit();
    }
    m
}

fn trace(m: &GMat) -> GaussianRational {
    crate::linalg::trace(m)
}

fn flatten(m: GMat) -> Vec<GaussianRational> {
    m.into_iter().flatten().collect()
}

pub fn sl_real(n: usize) -> Result<LieAlgebra<Rational>> {
    if n < 2 {
        return invalid("sl_real needs n >= 2");
    }
    from_constraints(&format!("sl_real({n})"), n, false, |x| vec![trace(x)])
}

/// `sp(2n, R)`: `2n x 2n` matrices preserving the standard symplectic form.
pub fn sp_real(n: usize) -> Result<LieAlgebra<Rational>> {
    if n < 1 {
        return invalid("sp_real needs n >= 1");
    }
    let j = symplectic_form(n);
    from_constraints(&format!("sp_real({n})"), 2 * n, false, move |x| {
        flatten(crate::linalg::mat_add(&gmul(&transpose(x), &j), &gmul(&j, x)))
    })
}

/// `su(p, q)` for the Hermitian form with one hyperbolic pair.
pub fn su(p: usize, q: usize) -> Result<LieAlgebra<Rational>> {
    if p < 1 || q < 1 {
        return invalid("su(p,q) needs p, q >= 1");
    }
    let eta = split_form(1, p - 1, q - 1);
    from_constraints(&format!("su({p},{q})"), p + q, true, move |x| {
        let mut v = flatten(crate::linalg::mat_add(&gmul(&adjoint(x), &eta), &gmul(&eta, x)));
        v.push(trace(x));
        v
    })
}

/// `so(p, q)` for the symmetric form with two hyperbolic pairs.
pub fn so(p: usize, q: usize) -> Result<LieAlgebra<Rational>> {
    if p < 2 || q < 2 {
        return invalid("so(p,q) needs p, q >= 2");
    }
    let eta = split_form(2, p - 2, q - 2);
    from_constraints(&format!("so({p},{q})"), p + q, false, move |x| {
        flatten(crate::linalg::mat_add(&gmul(&transpose(x), &eta), &gmul(&eta, x)))
    })
}

/// Which algebra to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    SlReal(usize),
    Su(usize, usize),
    SpReal(usize),
    So(usize, usize),
    Split(Kind, usize),
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSpec::SlReal(n) => write!(f, "sl_real:{n}"),
            AlgebraSpec::Su(p, q) => write!(f, "su:{p},{q}"),
            AlgebraSpec::SpReal(n) => write!(f, "sp_real:{n}"),
            AlgebraSpec::So(p, q) => write!(f, "so:{p},{q}"),
            AlgebraSpec::Split(Kind::G, 2) => write!(f, "g2_split"),
            AlgebraSpec::Split(Kind::F, 4) => write!(f, "f4_split"),
            AlgebraSpec::Split(k, n) => write!(f, "split:{k},{n}"),
        }
    }
}

fn parse_usizes(s: &str, count: usize) -> Result<Vec<usize>> {
    let v: std::result::Result<Vec<usize>, _> = s.split(',').map(|x| x.trim().parse()).collect();
    match v {
        Ok(v) if v.len() == count => Ok(v),
        _ => invalid(format!("expected {count} comma separated integers, got {s:?}")),
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "g2_split" => return Ok(AlgebraSpec::Split(Kind::G, 2)),
            "f4_split" => return Ok(AlgebraSpec::Split(Kind::F, 4)),
            _ => {}
        }
        let Some((fam, params)) = s.split_once(':') else {
            return invalid(format!("algebra spec {s:?} is not FAMILY:PARAMS"));
        };
        Ok(match fam {
            "sl_real" => AlgebraSpec::SlReal(parse_usizes(params, 1)?[0]),
            "sp_real" => AlgebraSpec::SpReal(parse_usizes(params, 1)?[0]),
            "su" => {
                let v = parse_usizes(params, 2)?;
                AlgebraSpec::Su(v[0], v[1])
            }
            "so" => {
                let v = parse_usizes(params, 2)?;
                AlgebraSpec::So(v[0], v[1])
            }
            "split" => {
                let (k, n) = params
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidInput(format!("split:{params} needs KIND,RANK")))?;
                let n: usize = n.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rank {n:?}")))?;
                AlgebraSpec::Split(k.parse()?, n)
            }
            other => return invalid(format!("unknown algebra family {other:?}")),
        })
    }
}

/// An algebra together with its canonical maximal root element.
#[derive(Clone, Debug)]
pub struct Presented {
    pub spec: AlgebraSpec,
    pub algebra: LieAlgebra<Rational>,
    pub seed: Vec<Rational>,
    pub root_system: Option<RootSystem>,
}

fn seed_from_matrix(alg: &LieAlgebra<Rational>, m: GMat) -> Result<Vec<Rational>> {
    alg.model.as_ref().expect("matrix model").coords(&m)
}

pub fn build(spec: &AlgebraSpec, opts: ChevalleyOptions) -> Result<Presented> {
    let one = real_unit();
    let (algebra, seed, root_system) = match *spec {
        AlgebraSpec::SlReal(n) => {
            let a = sl_real(n)?;
            let s = seed_from_matrix(&a, elementary(n, 0, n - 1, one))?;
            (a, s, None)
        }
        AlgebraSpec::SpReal(n) => {
            let a = sp_real(n)?;
            let s = seed_from_matrix(&a, elementary(2 * n, 0, n, one))?;
            (a, s, None)
        }
        AlgebraSpec::Su(p, q) => {
            let a = su(p, q)?;
            let s = seed_from_matrix(&a, elementary(p + q, 0, p + q - 1, imag_unit()))?;
            (a, s, None)
        }
        AlgebraSpec::So(p, q) => {
            let a = so(p, q)?;
            let n = p + q;
            let mut m = elementary(n, 0, n - 2, one.clone());
            m[1][n - 1] = -one;
            let s = seed_from_matrix(&a, m)?;
            (a, s, None)
        }
        AlgebraSpec::Split(kind, rank) => {
            let rs = RootSystem::new(kind, rank)?;
            let a = chevalley_algebra(&rs, opts)?;
            let idx = root_vector_index(&rs, &rs.highest_root()).expect("highest root");
            let s = a.unit(idx);
            (a, s, Some(rs))
        }
    };
    Ok(Presented { spec: spec.clone(), algebra, seed, root_system })
}

/// Identity matrix.
pub fn identity(n: usize) -> GMat {
    diag(&vec![1; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(sl_real(3).unwrap().dim, 8);
        assert_eq!(sl_real(4).unwrap().dim, 15);
        assert_eq!(sp_real(1).unwrap().dim, 3);
        assert_eq!(sp_real(2).unwrap().dim, 10);
        assert_eq!(sp_real(3).unwrap().dim, 21);
        assert_eq!(su(1, 2).unwrap().dim, 8);
        assert_eq!(su(2, 2).unwrap().dim, 15);
        assert_eq!(so(2, 3).unwrap().dim, 10);
        assert_eq!(so(3, 4).unwrap().dim, 21);
    }

    #[test]
    fn models_satisfy_jacobi() {
        for a in [sl_real(3).unwrap(), su(2, 2).unwrap(), sp_real(2).unwrap(), so(2, 3).unwrap()] {
            assert!(a.jacobi_audit().ok, "{}", a.name);
        }
    }

    #[test]
    fn cartan_ranks() {
        assert_eq!(sl_real(4).unwrap().cartan.len(), 3);
        assert_eq!(su(2, 2).unwrap().cartan.len(), 3);
        assert_eq!(sp_real(2).unwrap().cartan.len(), 2);
    }

    #[test]
    fn spec_round_trip() {
        for s in ["sl_real:3", "su:2,2", "sp_real:2", "so:3,4", "g2_split", "f4_split", "split:C,3"] {
            let spec: AlgebraSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("sl_real".parse::<AlgebraSpec>().is_err());
        assert!("su:2".parse::<AlgebraSpec>().is_err());
        assert!("foo:1".parse::<AlgebraSpec>().is_err());
    }

    #[test]
    fn coords_reject_outside_matrix() {
        let a = sl_real(2).unwrap();
        let m = a.model.as_ref().unwrap();
        assert!(m.coords(&identity(2)).is_err());
    }
}
