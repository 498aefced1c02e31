//! Irreducible reduced root systems built from their Cartan matrices.
//!
//! Roots are integer vectors in simple-root coordinates. The invariant form
//! gives short roots squared length 2.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Kind::A,
            "B" => Kind::B,
            "C" => Kind::C,
            "D" => Kind::D,
            "E" => Kind::E,
            "F" => Kind::F,
            "G" => Kind::G,
            other => return invalid(format!("unknown root system kind {other:?}")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: Kind,
    pub rank: usize,
    /// `cartan[i][j] = 2 (a_i, a_j) / (a_j, a_j)`.
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix of the simple roots.
    pub form: Vec<Vec<i64>>,
    /// Positive roots by height, then lexicographically.
    pub positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

#[derive(Serialize)]
struct RootSystemJson<'a> {
    kind: String,
    rank: usize,
    roots: Vec<&'a Vec<i64>>,
    cartan: &'a Vec<Vec<i64>>,
    long: Vec<bool>,
}

fn cartan_matrix(kind: Kind, n: usize) -> Result<Vec<Vec<i64>>> {
    let ok = match kind {
        Kind::A => n >= 1,
        Kind::B => n >= 2,
        Kind::C => n >= 2,
        Kind::D => n >= 4,
        Kind::E => (6..=8).contains(&n),
        Kind::F => n == 4,
        Kind::G => n == 2,
    };
    if !ok {
        return invalid(format!("no root system of type {kind}{n}"));
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match kind {
        Kind::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        Kind::B => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        Kind::C => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        Kind::D => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        Kind::E => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        Kind::F => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        Kind::G => link(0, 1, -1, -3),
    }
    Ok(a)
}

/// Half squared lengths `d_i` with `a_ij d_j = a_ji d_i`, smallest equal to 1.
fn symmetrizer(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    d[0] = Some((1, 1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let (pi, qi) = d[i].unwrap();
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                // d_j = a_ji d_i / a_ij
                d[j] = Some((a[j][i] * pi, a[i][j] * qi));
                stack.push(j);
            }
        }
    }
    let fr: Vec<(i64, i64)> = d
        .into_iter()
        .map(|x| {
            let (p, q) = x.expect("connected diagram");
            let g = num_integer::gcd(p, q);
            (p / g * q.signum(), (q / g).abs())
        })
        .collect();
    let lcm = fr.iter().fold(1i64, |l, &(_, q)| num_integer::lcm(l, q));
    let ints: Vec<i64> = fr.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let g = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    ints.iter().map(|x| x / g).collect()
}

impl RootSystem {
    pub fn new(kind: Kind, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(kind, rank)?;
        let d = symmetrizer(&cartan);
        let form: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| cartan[i][j] * d[j]).collect()).collect();
        let simple: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut frontier = simple;
        while let Some(b) = frontier.pop() {
            for i in 0..rank {
                let c: i64 = (0..rank).map(|j| b[j] * cartan[j][i]).sum();
                let mut r = b.clone();
                r[i] -= c;
                if seen.insert(r.clone()) {
                    frontier.push(r);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen.into_iter().filter(|r| r.iter().all(|&x| x >= 0)).collect();
        positive.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let mut rs = RootSystem { kind, rank, cartan, form, positive, index: HashMap::new() };
        let all = rs.roots();
        rs.index = all.into_iter().enumerate().map(|(i, r)| (r, i)).collect();
        Ok(rs)
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Positive roots followed by their negatives in the same order.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let neg = self.positive.iter().map(|r| r.iter().map(|x| -x).collect());
        self.positive.iter().cloned().chain(neg).collect()
    }

    /// Index of a root in [`Self::roots`].
    pub fn index_of(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        self.index.contains_key(r)
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.form[i][j] * b[j];
            }
        }
        s
    }

    /// `<lam, alpha> = 2 (lam, alpha) / (alpha, alpha)`.
    pub fn pairing(&self, lam: &[i64], alpha: &[i64]) -> Result<i64> {
        if lam.len() != self.rank || alpha.len() != self.rank {
            return invalid("coordinate length does not match rank");
        }
        let aa = self.inner(alpha, alpha);
        if aa == 0 {
            return invalid("pairing against the zero vector");
        }
        let num = 2 * self.inner(lam, alpha);
        if num % aa != 0 {
            return Err(Error::NotIntegral(format!("<{lam:?},{alpha:?}> = {num}/{aa}")));
        }
        Ok(num / aa)
    }

    /// Squared lengths of short and long roots.
    pub fn lengths(&self) -> (i64, i64) {
        let l: Vec<i64> = self.positive.iter().map(|r| self.inner(r, r)).collect();
        (*l.iter().min().unwrap(), *l.iter().max().unwrap())
    }

    pub fn is_long(&self, r: &[i64]) -> bool {
        self.inner(r, r) == self.lengths().1
    }

    pub fn highest_root(&self) -> Vec<i64> {
        self.positive.last().unwrap().clone()
    }

    /// Counts of `<beta, alpha0>` over all roots, for labels -2..=2.
    pub fn grading_labels(&self) -> Result<[usize; 5]> {
        let a0 = self.highest_root();
        let mut out = [0usize; 5];
        for r in self.roots() {
            let k = self.pairing(&r, &a0)?;
            if !(-2..=2).contains(&k) {
                return invalid(format!("label {k} outside -2..2"));
            }
            out[(k + 2) as usize] += 1;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots = self.roots();
        let long = roots.iter().map(|r| self.is_long(r)).collect();
        let j = RootSystemJson {
            kind: format!("{}{}", self.kind, self.rank),
            rank: self.rank,
            roots: roots.iter().collect(),
            cartan: &self.cartan,
            long,
        };
        serde_json::to_value(j).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(kind: Kind, n: usize) -> usize {
        2 * RootSystem::new(kind, n).unwrap().num_positive()
    }

    #[test]
    fn root_counts() {
        for n in 1..6 {
            assert_eq!(count(Kind::A, n), n * (n + 1));
        }
        for n in 2..5 {
            assert_eq!(count(Kind::B, n), 2 * n * n);
            assert_eq!(count(Kind::C, n), 2 * n * n);
        }
        assert_eq!(count(Kind::D, 4), 24);
        assert_eq!(count(Kind::D, 5), 40);
        assert_eq!(count(Kind::G, 2), 12);
        assert_eq!(count(Kind::F, 4), 48);
        assert_eq!(count(Kind::E, 6), 72);
        assert_eq!(count(Kind::E, 7), 126);
        assert_eq!(count(Kind::E, 8), 240);
    }

    #[test]
    fn long_counts() {
        let c2 = RootSystem::new(Kind::C, 2).unwrap();
        assert_eq!(c2.roots().iter().filter(|r| c2.is_long(r)).count(), 4);
        let g2 = RootSystem::new(Kind::G, 2).unwrap();
        assert_eq!(g2.roots().iter().filter(|r| g2.is_long(r)).count(), 6);
        assert_eq!(g2.lengths(), (2, 6));
    }

    #[test]
    fn highest_roots() {
        assert_eq!(RootSystem::new(Kind::G, 2).unwrap().highest_root(), vec![3, 2]);
        assert_eq!(RootSystem::new(Kind::C, 2).unwrap().highest_root(), vec![2, 1]);
        assert_eq!(RootSystem::new(Kind::F, 4).unwrap().highest_root(), vec![2, 3, 4, 2]);
        let e8 = RootSystem::new(Kind::E, 8).unwrap();
        assert_eq!(e8.highest_root(), vec![2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn labels_of_small_systems() {
        let c2 = RootSystem::new(Kind::C, 2).unwrap();
        assert_eq!(c2.grading_labels().unwrap(), [1, 2, 2, 2, 1]);
        let g2 = RootSystem::new(Kind::G, 2).unwrap();
        assert_eq!(g2.grading_labels().unwrap(), [1, 4, 2, 4, 1]);
    }

    #[test]
    fn pairing_rejects_bad_input() {
        let a2 = RootSystem::new(Kind::A, 2).unwrap();
        assert!(a2.pairing(&[1], &[1, 0]).is_err());
        assert!(a2.pairing(&[1, 0], &[0, 0]).is_err());
        assert!(RootSystem::new(Kind::D, 3).is_err());
        assert!(RootSystem::new(Kind::G, 3).is_err());
    }

    #[test]
    fn json_shape() {
        let j = RootSystem::new(Kind::G, 2).unwrap().to_json();
        assert_eq!(j["kind"], "G2");
        assert_eq!(j["roots"].as_array().unwrap().len(), 12);
        assert_eq!(j["long"].as_array().unwrap().iter().filter(|x| x.as_bool().unwrap()).count(), 6);
    }
}
