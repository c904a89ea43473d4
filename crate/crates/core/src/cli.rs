//! `qtoda` command line: `coeff`, `enumerate`, `check`, `simulate`, `audit`, `limit`.
//!
//! Every JSON document written carries the parsed job under `"job"`.
//! Exit codes: 0 pass, 1 identity or audit failure, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;

use crate::arrays::{diagonal_boundary, enumerate_fiber, staircase_shape, CellArray, Constraint, Domain, Layout};
use crate::dynamics::{
    hamiltonian, intertwining_check, lambda_kernel, staircase_difference_sides, potential_identity_sides, random_array, random_partition,
    random_skew_instance, sequence_identity_sides, staircase_rank, kernel_discrepancy, top_sigma, CheckReport, RateModel,
    RateVariant,
};
use crate::error::{Error, Result};
use crate::qnum::{format_scalar, max_abs, parse_scalar, ratio, DriftParams, ExactScalar};
use crate::shapes::{staircase, Diagram, SkewShape};
use crate::sim::{self, InitialLaw};
use crate::toda::{
    classical_limit, coeff_direct, ensemble, series_residual, toda_residual, box_points, CoeffTable, LimitProbe,
};

#[derive(Parser, Serialize, Debug)]
#[command(name = "qtoda", version, about = "Exact q-Whittaker coefficients, skew dynamics and their checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Whittaker coefficient a_r(n) by both oracles.
    Coeff(CoeffArgs),
    /// List a fiber with exact weights.
    Enumerate(InstanceArgs),
    /// Run a named suite of exact checks.
    Check(CheckArgs),
    /// Simulate trajectories as JSONL.
    Simulate(SimArgs),
    /// Simulate and audit projected jump rates.
    Audit(AuditArgs),
    /// q -> 1 scaling sweep.
    Limit(LimitArgs),
}

/// Shape, drift and state flags shared by the subcommands.
#[derive(Args, Serialize, Debug, Clone, Default)]
pub struct InstanceArgs {
    /// Outer diagram, e.g. 3,3,3.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Inner diagram inside the interior of lambda.
    #[arg(long)]
    pub mu: Option<String>,
    /// Drift exponents, comma separated (default all zero).
    #[arg(long, default_value = "")]
    pub alpha: String,
    /// q as p/d.
    #[arg(long, default_value = "1/2")]
    pub q: String,
    /// Outer diagonal n_1,...,n_r (staircase instances).
    #[arg(long)]
    pub n: Option<String>,
    /// Array JSON file (boundary or full).
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Debug)]
pub struct CoeffArgs {
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub inst: InstanceArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Toda,
    Coeff,
    Kernel,
    Intertwine,
    Ha,
    Sequence,
    StaircaseDiff,
    Potential,
    Limits,
    Identities,
    All,
}

#[derive(Args, Serialize, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 50)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Debug)]
pub struct SimArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    /// Stop time; run to absorption when absent.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    /// Doob rates for staircase pairs, conjugated rates otherwise.
    Auto,
    Doob,
    Conjugated,
}

#[derive(Args, Serialize, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value_t = 4.0)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Theory::Auto)]
    pub theory: Theory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    Coeff,
    Doob,
    Potential,
}

#[derive(Args, Serialize, Debug)]
pub struct LimitArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Probe::Coeff)]
    pub probe: Probe,
    /// Coordinate for the doob probe (1-based).
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    #[arg(long, default_value_t = 10)]
    pub steps: u32,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| Error::Precondition(format!("--{what}: cannot parse {p:?}"))))
        .collect()
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub shape: SkewShape,
    pub drift: DriftParams,
    pub state: Option<CellArray>,
}

impl InstanceArgs {
    pub fn drift(&self) -> Result<DriftParams> {
        DriftParams::new(parse_list(&self.alpha, "alpha")?, parse_scalar(&self.q)?)
    }

    pub fn diagonal(&self) -> Result<Option<Vec<i64>>> {
        self.n.as_deref().map(|s| parse_list(s, "n")).transpose()
    }

    /// Resolve flags into a shape, drift and optional state.
    pub fn resolve(&self) -> Result<Instance> {
        let lambda = self.lambda.as_deref().map(Diagram::parse).transpose()?;
        let mu = self.mu.as_deref().map(Diagram::parse).transpose()?;
        if let Some(path) = &self.sigma {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Precondition(format!("--sigma {}: {e}", path.display())))?;
            let a = CellArray::from_json_str(&text)?;
            if lambda.as_ref().is_some_and(|l| l != a.shape().lambda()) || mu.as_ref().is_some_and(|m| m != a.shape().mu()) {
                return Err(Error::Precondition("--sigma disagrees with --lambda/--mu".into()));
            }
            return Ok(Instance { shape: a.shape().clone(), drift: a.drift().clone(), state: Some(a) });
        }
        let drift = self.drift()?;
        if let Some(n) = self.diagonal()? {
            let r = n.len();
            if r == 0 {
                return Err(Error::Precondition("--n must be nonempty".into()));
            }
            let shape = staircase_shape(r);
            if lambda.as_ref().is_some_and(|l| l != shape.lambda()) {
                return Err(Error::Precondition(format!("--n of length {r} needs --lambda {}", shape.lambda())));
            }
            if mu.as_ref().is_some_and(|m| m != shape.mu()) {
                return Err(Error::Precondition(format!("--n of length {r} needs --mu {}", shape.mu())));
            }
            let s = diagonal_boundary(&n, &drift)?;
            return Ok(Instance { shape, drift, state: Some(s) });
        }
        let Some(lambda) = lambda else {
            return Err(Error::Precondition("give --n, --sigma or --lambda".into()));
        };
        let shape = SkewShape::new(lambda, mu.unwrap_or_default())?;
        Ok(Instance { shape, drift, state: None })
    }
}

fn meta() -> Value {
    json!({ "tool": "qtoda", "version": env!("CARGO_PKG_VERSION") })
}

/// Output text and exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
    pub out: Option<PathBuf>,
}

fn doc(job: &Value, body: Value, pass: bool, out: Option<PathBuf>) -> Outcome {
    let mut v = json!({ "job": job, "meta": meta() });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    Outcome { text: serde_json::to_string_pretty(&v).expect("serializable") + "\n", code: if pass { 0 } else { 1 }, out }
}

/// Run a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let job = serde_json::to_value(&cli.command).expect("serializable");
    match &cli.command {
        Command::Coeff(a) => {
            let n = a.inst.diagonal()?.ok_or_else(|| Error::Precondition("coeff needs --n".into()))?;
            if a.r.is_some_and(|r| r != n.len()) {
                return Err(Error::Precondition(format!("--r {} but --n has {} entries", a.r.unwrap(), n.len())));
            }
            let drift = a.inst.drift()?;
            let direct = coeff_direct(&n, &drift);
            let rec = CoeffTable::new(drift).get(&n);
            let pass = direct == rec;
            let body = json!({ "n": n, "value": format_scalar(&rec), "direct": format_scalar(&direct), "recursive": format_scalar(&rec), "agree": pass });
            Ok(doc(&job, body, pass, a.inst.out.clone()))
        }
        Command::Enumerate(a) => {
            let inst = a.resolve()?;
            let Some(s) = inst.state.filter(|s| s.domain() == Domain::Boundary) else {
                return Err(Error::Precondition("enumerate needs --n or a boundary --sigma".into()));
            };
            let fib = enumerate_fiber(inst.shape.lambda(), &Constraint::Boundary(s.clone()), &inst.drift)?;
            let (weights, normalizer) = if fib.is_empty() {
                (Vec::new(), ExactScalar::zero())
            } else {
                let e = ensemble(&inst.shape, &s)?;
                (e.weights.iter().map(format_scalar).collect(), e.normalizer)
            };
            let arrays: Vec<_> = fib.members.iter().map(|m| m.to_json()).collect();
            let body = json!({ "count": arrays.len(), "arrays": arrays, "weights": weights, "normalizer": format_scalar(&normalizer) });
            Ok(doc(&job, body, true, a.out.clone()))
        }
        Command::Check(a) => {
            let reports = run_suite(a.suite, a.trials, a.seed)?;
            let failures = reports.iter().filter(|r| !r.pass).count();
            let body = json!({ "reports": reports, "checks": reports.len(), "failures": failures, "pass": failures == 0 });
            Ok(doc(&job, body, failures == 0, a.out.clone()))
        }
        Command::Simulate(a) => {
            let (law, model) = sim_setup(&a.inst)?;
            let runs = sim::run_replicas(&law, &model, a.horizon, a.replicas, a.inst.seed)?;
            let mut text = String::new();
            for (i, r) in runs.iter().enumerate() {
                text.push_str(&r.to_jsonl(json!({ "args": job, "replica": i, "meta": meta() })));
            }
            Ok(Outcome { text, code: 0, out: a.inst.out.clone() })
        }
        Command::Audit(a) => {
            let (law, model) = sim_setup(&a.sim.inst)?;
            let shape = model.shape().clone();
            let runs = sim::run_replicas(&law, &model, a.sim.horizon, a.sim.replicas, a.sim.inst.seed)?;
            let use_doob = match a.theory {
                Theory::Doob => {
                    if staircase_rank(&shape).is_none() {
                        return Err(Error::Precondition("--theory doob needs a staircase pair".into()));
                    }
                    true
                }
                Theory::Conjugated => false,
                Theory::Auto => staircase_rank(&shape).is_some(),
            };
            let audit = if use_doob {
                sim::rate_audit(&runs, &shape, sim::doob_theory(model.drift().clone()))
            } else {
                sim::rate_audit(&runs, &shape, sim::conjugated_theory(shape.clone()))
            };
            let pass = audit.passes(a.threshold);
            let body = json!({ "theory": if use_doob { "doob" } else { "conjugated" }, "threshold": a.threshold, "audit": audit, "pass": pass });
            Ok(doc(&job, body, pass, a.sim.inst.out.clone()))
        }
        Command::Limit(a) => {
            let probe = match a.probe {
                Probe::Coeff => LimitProbe::Coeff(a.inst.diagonal()?.ok_or_else(|| Error::Precondition("--n required".into()))?),
                Probe::Doob => LimitProbe::Doob(a.inst.diagonal()?.ok_or_else(|| Error::Precondition("--n required".into()))?, a.index),
                Probe::Potential => {
                    let inst = a.inst.resolve()?;
                    let s = inst
                        .state
                        .filter(|s| s.domain() == Domain::Boundary)
                        .ok_or_else(|| Error::Precondition("potential probe needs a boundary state".into()))?;
                    LimitProbe::Potential { shape: inst.shape, alpha: inst.drift.alpha().to_vec(), sigma: s.values().to_vec() }
                }
            };
            let pts = classical_limit(&probe, a.steps)?;
            Ok(doc(&job, json!({ "points": pts }), true, a.inst.out.clone()))
        }
    }
}

fn sim_setup(inst: &InstanceArgs) -> Result<(InitialLaw, RateModel)> {
    let i = inst.resolve()?;
    let Some(s) = i.state else {
        return Err(Error::Precondition("simulation needs --n or --sigma".into()));
    };
    let model = RateModel::new(RateVariant::SkewFull, i.shape.clone(), i.drift.clone())?;
    let law = match s.domain() {
        Domain::Full => InitialLaw::Fixed(s),
        Domain::Boundary => InitialLaw::Ensemble(ensemble(&i.shape, &s)?),
    };
    Ok((law, model))
}

/// Parse `args`, run, write output; returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(o) => {
            match &o.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &o.text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{}", o.text),
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Alpha and q grid used by the coefficient suites.
pub fn coefficient_grid() -> Vec<DriftParams> {
    let mut out = Vec::new();
    for q in [ratio(1, 2), ratio(2, 3), ratio(3, 5)] {
        for a in [vec![], vec![1, 0, 2], vec![2, 1, 0]] {
            out.push(DriftParams::new(a, q.clone()).unwrap());
        }
    }
    out
}

fn drift_json(d: &DriftParams) -> Value {
    json!({ "alpha": d.alpha(), "q": format_scalar(d.q()) })
}

/// Shapes, drifts and top states for the intertwining suites.
pub fn intertwining_instances() -> Vec<(SkewShape, CellArray)> {
    let specs: &[(&[u32], &[u32], &[u32], (i64, i64), i64)] = &[
        (&[2, 1], &[1], &[], (1, 2), 2),
        (&[2, 1], &[1], &[1, 0, 2], (2, 3), 2),
        (&[3, 2, 1], &[2, 1], &[], (1, 2), 2),
        (&[3, 2, 1], &[2, 1], &[1, 0, 2, 1], (2, 3), 1),
        (&[3, 3, 3], &[2, 2], &[], (2, 3), 2),
        (&[3, 3, 3], &[2, 2], &[1, 0, 1], (2, 3), 2),
        (&[3, 3, 3], &[2, 2], &[], (1, 2), 1),
        (&[4, 4, 3, 2], &[2, 1], &[], (1, 2), 1),
        (&[4, 4, 3, 2], &[2, 1], &[1, 0, 2, 0], (1, 2), 1),
        (&[3, 3], &[2], &[], (1, 2), 2),
        (&[3, 2, 1], &[1], &[1, 0, 2], (2, 3), 1),
    ];
    specs
        .iter()
        .map(|(l, m, a, (p, d), cap)| {
            let shape = SkewShape::new(Diagram::new(l.to_vec()).unwrap(), Diagram::new(m.to_vec()).unwrap()).unwrap();
            let drift = DriftParams::new(a.to_vec(), ratio(*p, *d)).unwrap();
            let s = top_sigma(&shape, &drift, *cap);
            (shape, s)
        })
        .collect()
}

fn shape_json(s: &SkewShape) -> Value {
    json!({ "lambda": s.lambda().parts(), "mu": s.mu().parts() })
}

/// Reports for one named suite.
pub fn run_suite(suite: Suite, trials: u32, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    match suite {
        Suite::All => {
            for s in [Suite::Coeff, Suite::Toda, Suite::Kernel, Suite::Intertwine, Suite::Ha, Suite::Identities, Suite::Limits] {
                out.extend(run_suite(s, trials, seed)?);
            }
        }
        Suite::Identities => {
            for s in [Suite::Sequence, Suite::StaircaseDiff, Suite::Potential] {
                out.extend(run_suite(s, trials, seed)?);
            }
        }
        Suite::Coeff => {
            for d in coefficient_grid() {
                let mut t = CoeffTable::new(d.clone());
                let mut worst = ExactScalar::zero();
                for r in 1..=3 {
                    for n in box_points(r, 3) {
                        worst = worst.max((coeff_direct(&n, &d) - t.get(&n)).abs());
                    }
                }
                out.push(CheckReport::new("coeff_oracles", json!({ "drift": drift_json(&d), "r_max": 3, "n_max": 3 }), &worst));
            }
        }
        Suite::Toda => {
            for d in coefficient_grid() {
                let mut t = CoeffTable::new(d.clone());
                let mut worst = ExactScalar::zero();
                for r in 1..=3 {
                    for n in box_points(r, 3) {
                        worst = worst.max(toda_residual(&n, &mut t).abs());
                    }
                }
                out.push(CheckReport::new("toda_residual", json!({ "drift": drift_json(&d), "r_max": 3, "n_max": 3 }), &worst));
                for r in 1..=2 {
                    let res = series_residual(r, 3, &d);
                    let worst = max_abs(res.values());
                    out.push(CheckReport::new("series_residual", json!({ "drift": drift_json(&d), "r": r, "cap": 3 }), &worst));
                }
            }
        }
        Suite::Kernel => {
            for a in [vec![], vec![1, 0, 2], vec![2, 1, 0]] {
                for q in [ratio(1, 2), ratio(2, 3)] {
                    let d = DriftParams::new(a.clone(), q).unwrap();
                    for r in 1..=3 {
                        let x = kernel_discrepancy(r, 3, &d);
                        out.push(CheckReport::new("kernel_intertwining", json!({ "drift": drift_json(&d), "r": r, "n_max": 3 }), &x));
                    }
                }
            }
        }
        Suite::Intertwine => {
            for (shape, s) in intertwining_instances() {
                let rep = intertwining_check(&shape, &s)?;
                let worst = [&rep.h_lambda, &rep.h_a, &rep.l_lambda]
                    .into_iter()
                    .chain(rep.doob.as_ref())
                    .map(|x| parse_scalar(x).unwrap().abs())
                    .max()
                    .unwrap();
                let inst = serde_json::to_value(&rep).unwrap();
                out.push(CheckReport::new("intertwining", inst, &worst));
            }
        }
        Suite::Ha => {
            for (shape, s) in intertwining_instances() {
                let model = RateModel::new(RateVariant::SkewBoundary, shape.clone(), s.drift().clone())?;
                let states = crate::arrays::downset(&s);
                let h = hamiltonian(&model, states.clone())?;
                let a = lambda_kernel(&shape, &states, false)?.normalizers;
                let worst = max_abs(&h.apply(&a));
                let inst = json!({ "shape": shape_json(&shape), "drift": drift_json(s.drift()), "sigma": s.values() });
                out.push(CheckReport::new("h_a", inst, &worst));
            }
        }
        Suite::Sequence => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let q = [ratio(1, 2), ratio(2, 3), ratio(3, 5)][rng.random_range(0..3)].clone();
                let off = rng.random_range(0..4usize);
                let mut seq = || -> Vec<i64> {
                    let mut v = vec![0; off];
                    v.extend((0..5).map(|_| rng.random_range(-3..=3)));
                    v
                };
                let (a, b, c) = (seq(), seq(), seq());
                let (l, r) = sequence_identity_sides(&a, &b, &c, &q)?;
                let inst = json!({ "a": a, "b": b, "c": c, "q": format_scalar(&q) });
                out.push(CheckReport::new("sequence_identity", inst, &(l - r).abs()));
            }
        }
        Suite::StaircaseDiff => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let pi = random_staircase_instance(&mut rng);
                let s = staircase_difference_sides(&pi)?;
                let worst = (&s.lhs - &s.collapsed).abs().max((&s.lhs - &s.expanded).abs());
                let inst = json!({ "array": pi.to_json(), "r": pi.shape().mu().len() + 1 });
                out.push(CheckReport::new("staircase_difference", inst, &worst));
            }
        }
        Suite::Potential => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let pi = random_skew_instance(&mut rng);
                let (l, r) = potential_identity_sides(&pi)?;
                out.push(CheckReport::new("potential_identity", json!({ "array": pi.to_json() }), &(l - r).abs()));
            }
        }
        Suite::Limits => {
            for (probe, label) in limit_probes() {
                let pts = classical_limit(&probe, 10)?;
                let (ok, last) = limit_verdict(&pts);
                out.push(CheckReport {
                    check: "limit".into(),
                    instance: json!({ "probe": label, "points": pts }),
                    discrepancy: format!("{last:e}"),
                    pass: ok,
                });
            }
        }
    }
    Ok(out)
}

/// Gaps strictly decrease over `j = 4..=10` and the last is below `1e-2`.
pub fn limit_verdict(pts: &[crate::toda::LimitPoint]) -> (bool, f64) {
    let tail: Vec<f64> = pts.iter().filter(|p| p.j >= 4).map(|p| p.gap).collect();
    let last = *tail.last().unwrap_or(&f64::INFINITY);
    let decreasing = tail.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0);
    (decreasing && last < 1e-2, last)
}

/// Probes for the limit suite: every `n` with `r <= 2`, `|n| <= 4`, some
/// Doob rates, and potentials on a few skew shapes.
pub fn limit_probes() -> Vec<(LimitProbe, String)> {
    let mut out = Vec::new();
    for r in 1..=2 {
        for n in box_points(r, 4) {
            let s: i64 = n.iter().sum();
            if s == 0 || s > 4 {
                continue;
            }
            out.push((LimitProbe::Coeff(n.clone()), format!("coeff n={n:?}")));
        }
    }
    for (n, i) in [(vec![2], 1), (vec![1, 1], 1), (vec![2, 1], 2), (vec![2, 2], 1)] {
        out.push((LimitProbe::Doob(n.clone(), i), format!("doob n={n:?} i={i}")));
    }
    let pots: &[(&[u32], &[u32], &[u32], &[i64])] = &[
        (&[2, 1], &[1], &[], &[1, 2]),
        (&[3, 3, 3], &[2, 2], &[1, 0, 1], &[2, 2, 2, 2, 2]),
        (&[4, 4, 3, 2], &[2, 1], &[], &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
        (&[3, 3], &[2], &[0, 1], &[1, 2, 2, 2]),
    ];
    for (l, m, a, s) in pots {
        let shape = SkewShape::new(Diagram::new(l.to_vec()).unwrap(), Diagram::new(m.to_vec()).unwrap()).unwrap();
        let label = format!("potential {shape} alpha={a:?} sigma={s:?}");
        out.push((LimitProbe::Potential { shape, alpha: a.to_vec(), sigma: s.to_vec() }, label));
    }
    out
}

/// Random driftless full array on some `λ ⊇ δ_{r+2}` with `μ = δ_{r+1}`, `r <= 3`.
pub fn random_staircase_instance<R: Rng>(rng: &mut R) -> CellArray {
    let r = rng.random_range(1..=3u32);
    let base = staircase(r + 2).unwrap();
    let size = rng.random_range(0..=10);
    let extra = random_partition(rng, size, 6);
    let len = base.len().max(extra.len());
    let parts: Vec<u32> = (0..len).map(|k| base.row(k as i64 + 1).max(extra.row(k as i64 + 1)) as u32).collect();
    let lambda = Diagram::new(parts).unwrap();
    let shape = SkewShape::new(lambda, staircase(r + 1).unwrap()).unwrap();
    let q = [ratio(1, 2), ratio(2, 3)][rng.random_range(0..2)].clone();
    let d = DriftParams::driftless(q).unwrap();
    random_array(rng, Layout::new(shape, Domain::Full, d), 3)
}
