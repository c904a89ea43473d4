//! One line per criterion; exits 1 when any fails.

use qtoda::arrays::diagonal_boundary;
use qtoda::cli::{run_suite, Suite};
use qtoda::dynamics::{CheckReport, RateModel};
use qtoda::qnum::{ratio, DriftParams};
use qtoda::sim::{absorption_times, doob_theory, mean_and_se, rate_audit, run_replicas, InitialLaw};
use qtoda::toda::ensemble;
use std::time::Instant;

const SEED: u64 = 7;

struct Verdict {
    pass: bool,
    detail: String,
}

fn suites(list: &[Suite], trials: u32) -> Verdict {
    let mut reports: Vec<CheckReport> = Vec::new();
    for &s in list {
        reports.extend(run_suite(s, trials, SEED).expect("suite runs"));
    }
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} (discrepancy {})", r.check, short(&r.instance), r.discrepancy))
        .collect();
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} checks, all pass", reports.len())
        } else {
            format!("{}/{} checks failed: {}", bad.len(), reports.len(), bad.join("; "))
        },
    }
}

fn short(v: &serde_json::Value) -> String {
    let (sh, dr) = match (v.get("shape"), v.get("drift")) {
        (Some(s), Some(d)) => (s, d),
        _ => (v, v),
    };
    match (sh.get("lambda"), sh.get("mu"), dr.get("alpha"), dr.get("q")) {
        (Some(l), Some(m), Some(a), Some(q)) => format!("{l}/{m} alpha={a} q={q}"),
        _ => v.to_string().chars().take(80).collect(),
    }
}

fn criterion8() -> Verdict {
    let d = DriftParams::driftless(ratio(1, 2)).unwrap();
    let sigma = diagonal_boundary(&[1, 1], &d).unwrap();
    let sh = sigma.shape().clone();
    let model = RateModel::new(qtoda::dynamics::RateVariant::SkewFull, sh.clone(), d.clone()).unwrap();
    let law = InitialLaw::Ensemble(ensemble(&sh, &sigma).unwrap());
    let runs = run_replicas(&law, &model, None, 50_000, SEED).unwrap();
    let audit = rate_audit(&runs, &sh, doob_theory(d.clone()));

    let one = RateModel::staircase(1, d.clone());
    let start = qtoda::arrays::CellArray::new(
        qtoda::arrays::Layout::new(one.shape().clone(), qtoda::arrays::Domain::Full, d),
        vec![1],
    )
    .unwrap();
    let ts = absorption_times(&start, &one, 10_000, SEED).unwrap();
    let (mean, se) = mean_and_se(&ts);
    let zt = (mean - 2.0) / se;
    Verdict {
        pass: audit.passes(4.0) && zt.abs() <= 4.0,
        detail: format!(
            "50000 replicas, {} audit rows, max |z| = {:.2}; absorption mean {:.4} (se {:.4}, z = {:.2})",
            audit.rows.len(),
            audit.max_abs_z,
            mean,
            se,
            zt
        ),
    }
}

fn criterion9() -> Verdict {
    let d = DriftParams::driftless(ratio(1, 2)).unwrap();
    let s0 = diagonal_boundary(&[2, 2], &d).unwrap();
    let sh = s0.shape().clone();
    let rep = qtoda::sim::conditional_law_test(&sh, &s0, &[0.25, 0.5, 1.0, 2.0], 20_000, SEED).unwrap();
    Verdict {
        pass: rep.passes(1e-3) && rep.samples >= 20_000,
        detail: format!(
            "{} samples, {} boundary groups, chi2 = {:.2} on {} dof, p = {:.4}",
            rep.samples, rep.groups, rep.statistic, rep.dof, rep.p_value
        ),
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Verdict>)> = vec![
        (1, "coefficient oracles agree", Box::new(|| suites(&[Suite::Coeff], 0))),
        (2, "Toda eigen-relation and series residual", Box::new(|| suites(&[Suite::Toda], 0))),
        (3, "kernel intertwining of Toda operators", Box::new(|| suites(&[Suite::Kernel], 0))),
        (4, "skew intertwinings and H.A = 0", Box::new(|| suites(&[Suite::Intertwine, Suite::Ha], 0))),
        (5, "sequence identity and potential identity", Box::new(|| suites(&[Suite::Sequence, Suite::Potential], 50))),
        (6, "staircase difference identity", Box::new(|| suites(&[Suite::StaircaseDiff], 20))),
        (7, "classical limits", Box::new(|| suites(&[Suite::Limits], 0))),
        (8, "simulation audit", Box::new(criterion8)),
        (9, "conditional law", Box::new(criterion9)),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {k}: {} - {name}: {} [{secs:.1}s]", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{failed} of 9 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
