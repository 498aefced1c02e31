//! The three subcommands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use spsym::contactflow::momentum::{normal_form, stabilizer_dim, MomentumSpec};
use spsym::contactflow::{
    conserved_invariants, convergence_orders, random_tangent, structure_residuals, transversality_scan,
    vector_field_audit, walk, FlowModel, EQUATIONS,
};
use spsym::grading::TwoGrading;
use spsym::sympdata::weights::{cartan_of_h, weight_audit};
use spsym::sympdata::{identity_report, round_trip, SymplecticData};
use spsym::{curvature, Field, GaussianRational, QGrading, QSymplecticData};

use crate::cache::presented;
use crate::config::{Command, RunConfig};
use crate::report::{Block, Report, Tolerance};
use crate::CliError;

/// Order window for the structure-equation residuals.
pub const ORDER_WINDOW: (f64, f64) = (1.9, 2.1);
/// Step of the conservation walk.
pub const WALK_STEP: f64 = 1e-3;

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let cfg = RunConfig::new(cmd.name(), cmd.args())?;
    match cmd {
        Command::Report(_) => cmd_report(cfg),
        Command::Curvature(_) => cmd_curvature(cfg),
        Command::Flow(_) => cmd_flow(cfg),
    }
}

fn graded(cfg: &RunConfig) -> Result<(spsym::liecore::matrix_forms::Presented, crate::cache::CacheStatus), CliError> {
    presented(cfg.spec(), cfg.cache.as_deref())
}

pub fn cmd_report(cfg: RunConfig) -> Result<Report, CliError> {
    let (p, status) = graded(&cfg)?;
    let g = &p.algebra;
    let t: QGrading = TwoGrading::new(g, &p.seed)?;
    let d: QSymplecticData = SymplecticData::from_grading(g, &t)?;
    let mut blocks = Vec::new();

    let gr = t.report(g);
    blocks.push(Block::new("grading", gr.frame_check.iter().all(|(_, ok)| *ok), Tolerance::Exact, &gr));

    let ids = identity_report(g, &t, &d)?;
    blocks.push(Block::new("identities", ids.checks.iter().all(|c| c.pass), Tolerance::Exact, &ids));

    let rt = round_trip(g, &t, &d)?;
    blocks.push(Block::new("round_trip", rt.ok(), Tolerance::Exact, &rt));

    // complexified so that compact parts of the Cartan diagonalize
    let dc: SymplecticData<GaussianRational> = d.map(GaussianRational::from_rational);
    let cartan: Vec<Vec<GaussianRational>> =
        cartan_of_h(g, &t)?.iter().map(|v| v.iter().cloned().map(GaussianRational::from).collect()).collect();
    if d.is_full_sp() {
        blocks.push(Block::new("weights", true, Tolerance::Informational, "h = sp(V): weight classes do not apply"));
    } else if cartan.is_empty() {
        blocks.push(Block::new("weights", true, Tolerance::Informational, "no Cartan of h available"));
    } else {
        let w = weight_audit(&dc, &cartan)?;
        blocks.push(Block::new("weights", w.ok(), Tolerance::Exact, &w));
    }
    Ok(Report::new(cfg, status, blocks))
}

pub fn cmd_curvature(cfg: RunConfig) -> Result<Report, CliError> {
    let (p, status) = graded(&cfg)?;
    let g = &p.algebra;
    let t: QGrading = TwoGrading::new(g, &p.seed)?;
    let d: QSymplecticData = SymplecticData::from_grading(g, &t)?;
    let r = curvature::report(&d, cfg.budget())?;
    let pass = r.checks.iter().all(|c| c.pass);
    let blocks = vec![Block::new("curvature", pass, Tolerance::Exact, &r)];
    Ok(Report::new(cfg, status, blocks))
}

#[derive(Serialize)]
struct EquationStatus {
    equation: &'static str,
    residuals: Vec<f64>,
    orders: Vec<f64>,
    /// `order` when the residual shrinks like eps^2, `identically` when it stays below tolerance.
    verdict: &'static str,
}

#[derive(Serialize)]
struct FlowSummary {
    algebra: String,
    a_spec: String,
    residual_orders: Vec<[f64; 6]>,
    invariant_drift: f64,
    transversality_fraction: f64,
    stab_dim: usize,
}

fn equation_status(rs: &[spsym::contactflow::StructureResiduals], tol: f64) -> (Vec<EquationStatus>, bool) {
    let orders = convergence_orders(rs);
    let mut all = true;
    let st = (0..6)
        .map(|k| {
            let residuals: Vec<f64> = rs.iter().map(|r| r.values[k]).collect();
            let o: Vec<f64> = orders.iter().map(|o| o[k]).collect();
            let verdict = if o.iter().all(|x| (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(x)) {
                "order"
            } else if residuals.iter().all(|r| *r < tol) {
                "identically"
            } else {
                all = false;
                "fail"
            };
            EquationStatus { equation: EQUATIONS[k], residuals, orders: o, verdict }
        })
        .collect();
    (st, all)
}

pub fn cmd_flow(cfg: RunConfig) -> Result<Report, CliError> {
    let (p, status) = graded(&cfg)?;
    let m = FlowModel::new(&p)?;
    let spec = cfg.momentum_spec.clone().expect("validated config");
    let a = spec.resolve(&p, &m)?;
    let av = m.frame_vector(&a);
    let tol = cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = m.random_point(&av, &mut rng)?;
    let mut blocks = Vec::new();

    let v1 = random_tangent(&m, &start, &mut rng);
    let v2 = random_tangent(&m, &start, &mut rng);
    let rs = cfg
        .eps_sweep
        .iter()
        .map(|&e| structure_residuals(&m, &av, &start, &v1, &v2, e))
        .collect::<spsym::Result<Vec<_>>>()?;
    let (eqs, pass) = equation_status(&rs, tol);
    blocks.push(Block::new("structure_equations", pass, Tolerance::Order(ORDER_WINDOW.0, ORDER_WINDOW.1), &eqs));

    let base = m.base_point(&av, &mut rng)?;
    let path = walk(&m, &av, &base, cfg.steps, WALK_STEP, &mut rng)?;
    let drift = conserved_invariants(&m, &path);
    let worst = drift.ad_traces.iter().fold(drift.casimir, |a, b| a.max(*b));
    blocks.push(Block::new("conservation", worst < tol, Tolerance::Absolute(tol), &drift));

    let n = m.lay.n;
    let mut gauss = |k: usize| -> Vec<f64> { (0..k).map(|_| rng.sample(StandardNormal)).collect() };
    let (x, y, h) = (gauss(n), gauss(n), gauss(m.lay.m));
    let (e0, e1) = (cfg.eps_sweep[0], cfg.eps_sweep[1]);
    let r0 = vector_field_audit(&m, &av, &start, &x, &y, &h, e0)?;
    let r1 = vector_field_audit(&m, &av, &start, &x, &y, &h, e1)?;
    // below tolerance, or shrinking like eps^2
    let expect = (e1 / e0).powi(2);
    let ok = |a: f64, b: f64| b < tol || (b / a > 0.6 * expect && b / a < 1.6 * expect);
    let vf_pass = r0.vertical[2] < tol
        && (0..3).all(|k| ok(r0.horizontal[k], r1.horizontal[k]) && ok(r0.vertical[k], r1.vertical[k]))
        && ok(r0.bracket, r1.bracket);
    blocks.push(Block::new("vector_fields", vf_pass, Tolerance::Absolute(tol), [&r0, &r1]));

    let fraction = transversality_scan(&m, &av, cfg.samples, cfg.seed);
    let expected = match &spec {
        MomentumSpec::Bochner(..) => Some(1.0),
        MomentumSpec::Ricci(c) if *c > spsym::Rational::from_integer(0.into()) => Some(1.0),
        _ => None,
    };
    let (tpass, ttol) = match expected {
        Some(e) => (fraction == e, Tolerance::Exact),
        None => (true, Tolerance::Informational),
    };
    blocks.push(Block::new(
        "transversality",
        tpass,
        ttol,
        serde_json::json!({ "samples": cfg.samples, "fraction": fraction, "expected": expected }),
    ));

    let stab = stabilizer_dim(&p.algebra, &a)?;
    let nf = normal_form(&m, &a);
    let hat_ok = nf.as_ref().is_none_or(|f| f.predicted_stabilizer == stab);
    blocks.push(Block::new(
        "symmetry",
        hat_ok,
        Tolerance::Exact,
        serde_json::json!({ "stab_dim": stab, "symmetry_dim": stab - 1, "normal_form": nf }),
    ));

    let summary = FlowSummary {
        algebra: m.name.clone(),
        a_spec: spec.to_string(),
        residual_orders: convergence_orders(&rs),
        invariant_drift: worst,
        transversality_fraction: fraction,
        stab_dim: stab,
    };
    blocks.push(Block::new("summary", true, Tolerance::Informational, &summary));
    Ok(Report::new(cfg, status, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Args;

    fn args(alg: &str) -> Args {
        Args { algebra: alg.into(), ..Args::default() }
    }

    #[test]
    fn report_sp4() {
        let r = run(&Command::Report(args("sp_real:2"))).unwrap();
        assert!(r.pass, "{}", r.to_json());
        let dims = &r.block("identities").unwrap().data["dims"];
        assert_eq!((dims["g"].as_u64(), dims["h"].as_u64(), dims["V"].as_u64()), (Some(10), Some(3), Some(2)));
    }

    #[test]
    fn curvature_sp4() {
        let r = run(&Command::Curvature(args("sp_real:2"))).unwrap();
        let c = &r.block("curvature").unwrap().data;
        assert_eq!((c["dimK"].as_u64(), c["dimR"].as_u64(), c["dimW"].as_u64()), (Some(3), Some(3), Some(0)));
        assert_eq!(c["prolongation_dim"].as_u64(), Some(6));
    }

    #[test]
    fn budget_is_enforced() {
        let mut a = args("sp_real:3");
        a.budget_kernel = Some(2);
        assert!(matches!(run(&Command::Curvature(a)), Err(CliError::Config(_))));
    }

    #[test]
    fn flow_sp4_ricci() {
        let mut a = args("sp_real:2");
        a.momentum = Some("ricci:1".into());
        a.samples = Some(300);
        a.steps = Some(50);
        let r = run(&Command::Flow(a)).unwrap();
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(r.block("transversality").unwrap().data["fraction"].as_f64(), Some(1.0));
    }
}
