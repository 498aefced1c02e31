//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use spsym::contactflow::momentum::{generic_cartan_element, symmetry_dimension};
use spsym::curvature::{self, schur_space, Budget};
use spsym::grading::TwoGrading;
use spsym::liecore::matrix_forms::{build, AlgebraSpec, Presented};
use spsym::liecore::ChevalleyOptions;
use spsym::sympdata::{identity_report, round_trip};
use spsym::{Field, QSymplecticData, Rational};
use spsym_cli::{run, Args, Command, Report};

const IDENTITY_ALGEBRAS: [&str; 8] =
    ["sl_real:3", "sl_real:4", "su:1,2", "su:2,2", "sp_real:2", "sp_real:3", "so:2,3", "g2_split"];
const ORDER_WINDOW: (f64, f64) = (1.9, 2.1);
const DRIFT_BOUND: f64 = 1e-9;
const WALK_STEPS: usize = 1000;
const SAMPLES: usize = 10_000;

type Criterion = (&'static str, fn() -> Outcome);
type DeterminismCase = (fn(Args) -> Command, &'static str, Option<&'static str>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn presented(spec: &str) -> Presented {
    build(&spec.parse::<AlgebraSpec>().unwrap(), ChevalleyOptions::default()).unwrap()
}

fn data(p: &Presented) -> (TwoGrading<Rational>, QSymplecticData) {
    let t = TwoGrading::new(&p.algebra, &p.seed).unwrap();
    let d = QSymplecticData::from_grading(&p.algebra, &t).unwrap();
    (t, d)
}

fn flow(algebra: &str, a: &str, seed: u64) -> Report {
    let args = Args { algebra: algebra.into(), momentum: Some(a.into()), seed, ..Args::default() };
    run(&Command::Flow(args)).unwrap_or_else(|e| panic!("flow {algebra} {a}: {e}"))
}

fn identities() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    for spec in IDENTITY_ALGEBRAS {
        let p = presented(spec);
        let (t, d) = data(&p);
        let r = identity_report(&p.algebra, &t, &d).unwrap();
        failed.extend(r.checks.iter().filter(|c| !c.pass).map(|c| format!("{spec}: {}", c.name)));
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(60);
    outcome(
        failed.is_empty() && fast,
        format!("{} algebras, {:.1} s (< 60 s), failures {:?}", IDENTITY_ALGEBRAS.len(), elapsed.as_secs_f64(), failed),
    )
}

fn killing_normalization() -> Outcome {
    let mut bad = Vec::new();
    for spec in IDENTITY_ALGEBRAS {
        let p = presented(spec);
        let (t, d) = data(&p);
        let lhs = p.algebra.killing(&t.h, &t.h);
        let rhs = Rational::from_i64(2 * (d.dim_v() as i64 + 4));
        if lhs != rhs {
            bad.push(format!("{spec}: {lhs} != {rhs}"));
        }
    }
    outcome(bad.is_empty(), format!("B(H,H) = 2(dim V + 4) exactly; mismatches {bad:?}"))
}

fn curvature_dims() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    let mut sp_count = 0;
    for (spec, expected) in [
        ("sp_real:2", Some((3, 3, 0))),
        ("sp_real:3", Some((45, 10, 35))),
        ("sl_real:3", Some((1, 1, 0))),
        ("sl_real:4", Some((9, 4, 5))),
        ("g2_split", None),
    ] {
        let p = presented(spec);
        let (_, d) = data(&p);
        let r = curvature::report(&d, Budget::default()).unwrap();
        let got = (r.dim_k, r.dim_r, r.dim_w);
        let ok = match expected {
            Some(e) => got == e,
            None => r.dim_k == r.dim_r && r.dim_w == 0,
        } && r.checks.iter().all(|c| c.pass);
        pass &= ok;
        lines.push(format!("{spec} {got:?}"));
        if spec == "sp_real:3" {
            // h = sp(V): K is the kernel of V (x) S^3 V -> S^4 V
            let n = d.dim_v();
            sp_count = n * binom(n + 2, 3) - binom(n + 3, 4);
            pass &= sp_count == r.dim_k;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    outcome(pass, format!("{}; sp_real:3 count {sp_count}; {:.1} s (< 300 s)", lines.join(", "), elapsed.as_secs_f64()))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn prolongation() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for spec in ["g2_split", "sl_real:3", "sl_real:4", "su:1,2", "su:2,2", "sp_real:3", "sp_real:2"] {
        let p = presented(spec);
        let (_, d) = data(&p);
        let pro = curvature::prolongation(&d, Budget::default()).unwrap();
        let expected = if spec == "sp_real:2" { 6 } else { d.dim_v() };
        pass &= pro.basis.len() == expected && pro.psi_u_inside;
        lines.push(format!("{spec} {}/{expected}", pro.basis.len()));
    }
    outcome(pass, lines.join(", "))
}

fn schur() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for spec in ["sl_real:4", "sl_real:5", "su:2,2", "su:1,3", "sp_real:3", "so:2,4", "so:3,4", "g2_split"] {
        let p = presented(spec);
        let (_, d) = data(&p);
        assert!(d.dim_v() >= 4, "{spec}");
        let dim = schur_space(&d).len();
        pass &= dim == 1;
        lines.push(format!("{spec} {dim}"));
    }
    outcome(pass, lines.join(", "))
}

fn round_trips() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for spec in ["sp_real:2", "g2_split"] {
        let p = presented(spec);
        let (t, d) = data(&p);
        let r = round_trip(&p.algebra, &t, &d).unwrap();
        pass &= r.ok();
        lines.push(format!("{spec} {}", r.ok()));
    }
    outcome(pass, lines.join(", "))
}

fn structure_block(r: &Report) -> &Value {
    &r.block("structure_equations").unwrap().data
}

fn structure_orders() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (alg, a) in [("su:2,2", "normal:1,1;-1;2;1"), ("sp_real:2", "normal:1,1;-1;2")] {
        let r = flow(alg, a, 0);
        for eq in structure_block(&r).as_array().unwrap() {
            let orders: Vec<f64> = eq["orders"].as_array().unwrap().iter().map(|o| o.as_f64().unwrap()).collect();
            let ok = orders.iter().all(|o| (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(o));
            pass &= ok;
            if !ok {
                lines.push(format!("{alg} {} orders {orders:?}", eq["equation"]));
            }
        }
        let worst = structure_block(&r)
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|eq| eq["orders"].as_array().unwrap().iter().map(|o| o.as_f64().unwrap()))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| (lo.min(o), hi.max(o)));
        lines.push(format!("{alg} {a}: orders in [{:.3}, {:.3}]", worst.0, worst.1));
    }
    // the model momenta have u = 0 on Gamma_a, so du and df vanish identically there
    for (alg, a) in [("su:2,2", "bochner:1,1"), ("sp_real:2", "ricci:1")] {
        let r = flow(alg, a, 0);
        let biggest = |k: usize| -> f64 {
            structure_block(&r)[k]["residuals"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .fold(0.0, f64::max)
        };
        println!("INFO  {alg} {a}: du residual <= {:.1e}, df residual <= {:.1e}", biggest(4), biggest(5));
    }
    outcome(pass, lines.join("; "))
}

fn conservation() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (alg, a) in [
        ("su:2,2", "bochner:1,1"),
        ("sp_real:2", "ricci:1"),
        ("su:2,2", "normal:1,1;-1;2;1"),
        ("sp_real:2", "normal:1,1;-1;2"),
    ] {
        let r = flow(alg, a, 0);
        let d = &r.block("conservation").unwrap().data;
        assert_eq!(d["steps"].as_u64(), Some(WALK_STEPS as u64));
        let casimir = d["casimir"].as_f64().unwrap();
        let traces = d["ad_traces"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).fold(0.0, f64::max);
        pass &= casimir < DRIFT_BOUND && traces < DRIFT_BOUND;
        lines.push(format!("{alg} {a}: f+(rho,rho) {casimir:.1e}, ad traces {traces:.1e}"));
    }
    outcome(pass, format!("{WALK_STEPS} steps of 1e-3, bound {DRIFT_BOUND:e}; {}", lines.join(", ")))
}

fn momenta() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (alg, a, want_one) in
        [("su:2,2", "bochner:1,1", true), ("sp_real:2", "ricci:1", true), ("sl_real:3", "normal:1,0", false)]
    {
        let r = flow(alg, a, 0);
        let t = &r.block("transversality").unwrap().data;
        assert_eq!(t["samples"].as_u64(), Some(SAMPLES as u64));
        let f = t["fraction"].as_f64().unwrap();
        pass &= if want_one { f == 1.0 } else { f < 1.0 };
        lines.push(format!("{alg} {a} fraction {f}"));
        if alg == "su:2,2" {
            let s = r.block("symmetry").unwrap();
            let stab = s.data["stab_dim"].as_u64().unwrap();
            let predicted = s.data["normal_form"]["predicted_stabilizer"].as_u64();
            pass &= stab == 7 && predicted == Some(7) && s.pass;
            lines.push(format!("stab {stab}, hat-s prediction {predicted:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for spec in ["sl_real:3", "sl_real:4", "sp_real:2", "su:2,2", "g2_split"] {
        let p = presented(spec);
        let g = &p.algebra;
        let rank = g.cartan.len();
        let mut candidates = vec![generic_cartan_element(g)];
        for _ in 0..3 {
            let c: Vec<Rational> =
                (0..rank).map(|_| Rational::from_i64(rng.random_range(-1_000_000..=1_000_000))).collect();
            candidates.push(spsym::linalg::lin_comb(&c, &g.cartan, g.dim));
        }
        let dims: Vec<usize> = candidates.iter().map(|a| symmetry_dimension(g, a).unwrap()).collect();
        pass &= dims.iter().all(|&s| s + 1 == rank);
        lines.push(format!("{spec} symmetry {dims:?} (rank {rank})"));
    }
    outcome(pass, lines.join(", "))
}

fn determinism() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    let cases: [DeterminismCase; 3] = [
        (Command::Report, "g2_split", None),
        (Command::Curvature, "sl_real:4", None),
        (Command::Flow, "sp_real:2", Some("normal:1,1;-1;2")),
    ];
    for (make, alg, a) in cases {
        let args = Args { algebra: alg.into(), momentum: a.map(String::from), seed: 11, ..Args::default() };
        let first = run(&make(args.clone())).unwrap().canonical_json();
        let second = run(&make(args)).unwrap().canonical_json();
        pass &= first == second;
        lines.push(format!("{alg} identical {}", first == second));
    }
    outcome(pass, lines.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact identity suite", identities),
        ("Killing normalization", killing_normalization),
        ("curvature dimensions", curvature_dims),
        ("prolongation", prolongation),
        ("Schur space", schur),
        ("round trip", round_trips),
        ("structure-equation orders", structure_orders),
        ("conservation", conservation),
        ("momenta and symmetries", momenta),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failures += usize::from(!o.pass);
        println!(
            "{} {:>2} {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
