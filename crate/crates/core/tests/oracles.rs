//! Dimensions of curvature spaces against independent counts.

use spsym::curvature::{bianchi_kernel, bianchi_residual, pairs, report, Budget, CurvatureElement};
use spsym::grading::TwoGrading;
use spsym::liecore::matrix_forms::{build, AlgebraSpec};
use spsym::liecore::ChevalleyOptions;
use spsym::linalg::rank_fraction_free;
use spsym::{Field, QSymplecticData, Rational};

fn data(spec: &str) -> QSymplecticData {
    let p = build(&spec.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap();
    let t = TwoGrading::new(&p.algebra, &p.seed).unwrap();
    QSymplecticData::from_grading(&p.algebra, &t).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim K` as `#unknowns - rank(Bianchi map)`, with the map assembled column by
/// column from unit curvature tensors and ranked by fraction-free elimination.
fn kernel_dim_fraction_free(d: &QSymplecticData) -> usize {
    let (n, m) = (d.dim_v(), d.dim_h());
    let unknowns = pairs(n).len() * m;
    let mut cols = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut flat = vec![Rational::from_i64(0); unknowns];
        flat[u] = Rational::from_i64(1);
        let r = CurvatureElement::from_flat(n, m, &flat);
        let mut col = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    col.extend(bianchi_residual(d, &r, i, j, k));
                }
            }
        }
        cols.push(col);
    }
    unknowns - rank_fraction_free(&cols)
}

/// `dim ker(V (x) S^3 V -> S^4 V)`, the count for `h = sp(V)`.
fn sp_count(n: usize) -> usize {
    n * binom(n + 2, 3) - binom(n + 3, 4)
}

/// `dim S^2 W (x) S^2 W*`, the count for `h = gl(W)`.
fn gl_count(w: usize) -> usize {
    binom(w + 1, 2).pow(2)
}

#[test]
fn counts_match_representation_theory() {
    assert_eq!(sp_count(4), 45);
    assert_eq!(sp_count(2), 3);
    assert_eq!(gl_count(2), 9);
    assert_eq!(gl_count(1), 1);
}

#[test]
fn kernel_dimensions_agree_with_independent_elimination() {
    for (spec, expected) in [
        ("sp_real:2", sp_count(2)),
        ("sp_real:3", sp_count(4)),
        ("sl_real:3", gl_count(1)),
        ("sl_real:4", gl_count(2)),
        ("su:2,2", gl_count(2)),
        ("su:1,2", gl_count(1)),
        ("g2_split", 3),
    ] {
        let d = data(spec);
        let basis = bianchi_kernel(&d, Budget::default()).unwrap();
        let flats: Vec<Vec<Rational>> = basis.iter().map(|r| r.flat()).collect();
        assert_eq!(rank_fraction_free(&flats), basis.len(), "{spec}: basis not independent");
        assert_eq!(basis.len(), expected, "{spec}");
        assert_eq!(kernel_dim_fraction_free(&d), expected, "{spec}");
    }
}

#[test]
fn ricci_part_has_dimension_of_h() {
    for spec in ["sp_real:2", "sl_real:4", "g2_split"] {
        let d = data(spec);
        let r = report(&d, Budget::default()).unwrap();
        assert_eq!(r.dim_r, d.dim_h(), "{spec}");
        assert_eq!(r.dim_k, r.dim_r + r.dim_w, "{spec}");
    }
}

#[test]
fn f4_structure_constants_pass_audits() {
    let p = build(&"f4_split".parse().unwrap(), ChevalleyOptions::default()).unwrap();
    let g = &p.algebra;
    assert_eq!(g.dim, 52);
    let rep = g.jacobi_audit();
    assert!(rep.ok, "Jacobi fails at {:?}", rep.witness);
    let t = TwoGrading::new(g, &p.seed).unwrap();
    assert_eq!(t.block_dims(), [1, 14, 22, 14, 1]);
    let k = g.killing_matrix();
    assert_eq!(spsym::linalg::rank(&k), 52);
}
