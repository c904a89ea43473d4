//! Exact-rate continuous-time simulation, projections and statistical audits.
//!
//! Replica `i` of a batch seeded with `s` uses `ChaCha8Rng::seed_from_u64(s ^ i)`.
//! Rates are exact; they become `f64` only for the holding time and the
//! choice of cell. Batches fan out with rayon and are folded in replica order.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arrays::{validate, CellArray, Domain, Layout};
use crate::dynamics::{rates, RateModel, RateVariant};
use crate::error::{Error, Result};
use crate::qnum::{format_scalar, to_f64, ExactScalar};
use crate::shapes::{Cell, SkewShape};
use crate::toda::{doob_rates, ensemble, CoeffTable, WeightedEnsemble};

/// One jump: time since start and the decremented cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub cell: [i64; 2],
}

/// A sample path.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub initial: CellArray,
    pub events: Vec<Event>,
    pub variant: RateVariant,
    pub seed: u64,
    /// Horizon, or `None` to run until absorption.
    pub horizon: Option<f64>,
    /// Time at which the path entered an absorbing state, if it did.
    pub absorbed_at: Option<f64>,
}

impl Trajectory {
    /// Length of the observation window.
    pub fn end(&self) -> f64 {
        match (self.horizon, self.absorbed_at) {
            (Some(h), _) => h,
            (None, Some(a)) => a,
            (None, None) => self.events.last().map_or(0.0, |e| e.t),
        }
    }

    /// States visited, each with its entry time.
    pub fn states(&self) -> Vec<(f64, CellArray)> {
        let mut out = vec![(0.0, self.initial.clone())];
        let mut cur = self.initial.clone();
        for e in &self.events {
            cur = cur.decremented((e.cell[0], e.cell[1]));
            out.push((e.t, cur.clone()));
        }
        out
    }

    /// State at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> CellArray {
        let mut cur = self.initial.clone();
        for e in self.events.iter().take_while(|e| e.t <= t) {
            cur = cur.decremented((e.cell[0], e.cell[1]));
        }
        cur
    }

    pub fn final_state(&self) -> CellArray {
        self.state_at(f64::INFINITY)
    }

    /// Header line plus one line per event.
    pub fn to_jsonl(&self, extra: serde_json::Value) -> String {
        let header = serde_json::json!({
            "header": {
                "initial": self.initial.to_json(),
                "variant": self.variant,
                "seed": self.seed,
                "horizon": self.horizon,
                "absorbed_at": self.absorbed_at,
                "events": self.events.len(),
                "job": extra,
            }
        });
        let mut s = serde_json::to_string(&header).expect("serializable");
        s.push('\n');
        for e in &self.events {
            s.push_str(&serde_json::to_string(e).expect("serializable"));
            s.push('\n');
        }
        s
    }
}

fn uniform_u128<R: Rng>(rng: &mut R) -> ExactScalar {
    let u: u128 = rng.random();
    ExactScalar::new(BigInt::from(u), BigInt::one() << 128)
}

/// Exact categorical draw from an ensemble.
pub fn sample_with<R: Rng>(ens: &WeightedEnsemble, rng: &mut R) -> Result<CellArray> {
    if ens.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let target = uniform_u128(rng) * &ens.normalizer;
    let mut cum = ExactScalar::zero();
    for (m, w) in ens.members.iter().zip(&ens.weights) {
        cum += w;
        if target < cum {
            return Ok(m.clone());
        }
    }
    Ok(ens.members.last().unwrap().clone())
}

/// [`sample_with`] on a fresh generator seeded with `seed`.
pub fn sample_initial(ens: &WeightedEnsemble, seed: u64) -> Result<CellArray> {
    sample_with(ens, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Per-state rate cache: cells with positive rate and their `f64` values.
type RateRow = Arc<(Vec<Cell>, Vec<f64>, f64)>;

/// Shared rate lookup for one model.
#[derive(Default)]
pub struct RateCache {
    map: std::sync::Mutex<HashMap<Vec<i64>, RateRow>>,
}

impl RateCache {
    fn row(&self, s: &CellArray, model: &RateModel) -> RateRow {
        if let Some(r) = self.map.lock().unwrap().get(s.values()) {
            return r.clone();
        }
        let rs = rates(s, model);
        let cells = rs.iter().map(|x| x.0).collect();
        let vals: Vec<f64> = rs.iter().map(|x| to_f64(&x.1)).collect();
        let total = rs.iter().fold(ExactScalar::zero(), |a, x| a + &x.1);
        let row = Arc::new((cells, vals, if total.is_zero() { 0.0 } else { to_f64(&total) }));
        self.map.lock().unwrap().insert(s.values().to_vec(), row.clone());
        row
    }
}

fn run<R: Rng>(
    initial: &CellArray,
    model: &RateModel,
    horizon: Option<f64>,
    seed: u64,
    rng: &mut R,
    cache: &RateCache,
) -> Trajectory {
    let mut cur = initial.clone();
    let mut t = 0.0;
    let mut events = Vec::new();
    let mut absorbed_at = None;
    loop {
        let row = cache.row(&cur, model);
        let (cells, vals, total) = (&row.0, &row.1, row.2);
        if cells.is_empty() {
            absorbed_at = Some(t);
            break;
        }
        t += Exp::new(total).expect("positive rate").sample(rng);
        if horizon.is_some_and(|h| t > h) {
            break;
        }
        let mut u = rng.random::<f64>() * total;
        let mut pick = cells.len() - 1;
        for (k, v) in vals.iter().enumerate() {
            if u < *v {
                pick = k;
                break;
            }
            u -= v;
        }
        let c = cells[pick];
        cur = cur.decremented(c);
        debug_assert!(validate(&cur).is_ok());
        events.push(Event { t, cell: [c.0, c.1] });
    }
    Trajectory { initial: initial.clone(), events, variant: model.variant(), seed, horizon, absorbed_at }
}

/// Simulate from `initial` until `horizon` (or absorption when `None`).
pub fn simulate(initial: &CellArray, model: &RateModel, horizon: Option<f64>, seed: u64) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run(initial, model, horizon, seed, &mut rng, &RateCache::default())
}

/// Where replicas start.
#[derive(Clone, Debug)]
pub enum InitialLaw {
    Fixed(CellArray),
    Ensemble(WeightedEnsemble),
}

/// `replicas` independent runs; replica `i` uses seed `seed ^ i` for both
/// the initial draw and the path.
pub fn run_replicas(
    law: &InitialLaw,
    model: &RateModel,
    horizon: Option<f64>,
    replicas: u64,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    let cache = RateCache::default();
    (0..replicas)
        .into_par_iter()
        .map(|i| {
            let s = seed ^ i;
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let init = match law {
                InitialLaw::Fixed(a) => a.clone(),
                InitialLaw::Ensemble(e) => sample_with(e, &mut rng)?,
            };
            Ok(run(&init, model, horizon, s, &mut rng, &cache))
        })
        .collect()
}

/// Keep only events on `λ/μ`; the initial state is restricted.
pub fn project(traj: &Trajectory, shape: &SkewShape) -> Trajectory {
    let layout = Layout::new(shape.clone(), Domain::Boundary, traj.initial.drift().clone());
    Trajectory {
        initial: traj.initial.restrict(&layout),
        events: traj.events.iter().filter(|e| shape.in_boundary((e.cell[0], e.cell[1]))).copied().collect(),
        variant: RateVariant::SkewBoundary,
        seed: traj.seed,
        horizon: traj.horizon,
        absorbed_at: traj.absorbed_at,
    }
}

/// One `(state, cell)` line of a rate audit.
#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub state: Vec<i64>,
    pub cell: [i64; 2],
    pub count: u64,
    pub time: f64,
    pub rate: String,
    pub expected: f64,
    /// `None` when `rate·time = 0` and nothing was observed.
    pub z: Option<f64>,
}

/// Empirical jump intensities against theoretical boundary rates.
#[derive(Clone, Debug, Serialize)]
pub struct RateAudit {
    pub runs: usize,
    pub rows: Vec<AuditRow>,
    pub max_abs_z: f64,
}

impl RateAudit {
    pub fn passes(&self, threshold: f64) -> bool {
        self.max_abs_z <= threshold
    }
}

/// Aggregate projected jumps and occupation times of `runs` on `λ/μ` and
/// compare with `theory(σ, cell)`.
pub fn rate_audit<F>(runs: &[Trajectory], shape: &SkewShape, mut theory: F) -> RateAudit
where
    F: FnMut(&CellArray, Cell) -> ExactScalar,
{
    let mut time: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    let mut counts: BTreeMap<(Vec<i64>, Cell), u64> = BTreeMap::new();
    let mut reps: HashMap<Vec<i64>, CellArray> = HashMap::new();
    for run in runs {
        let p = project(run, shape);
        let end = p.end();
        let mut cur = p.initial.clone();
        let mut t0 = 0.0;
        for e in &p.events {
            *time.entry(cur.values().to_vec()).or_default() += e.t - t0;
            let c = (e.cell[0], e.cell[1]);
            *counts.entry((cur.values().to_vec(), c)).or_default() += 1;
            reps.entry(cur.values().to_vec()).or_insert_with(|| cur.clone());
            cur = cur.decremented(c);
            t0 = e.t;
        }
        *time.entry(cur.values().to_vec()).or_default() += (end - t0).max(0.0);
        reps.entry(cur.values().to_vec()).or_insert(cur);
    }
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (state, &occ) in &time {
        let s = &reps[state];
        for &c in s.cells() {
            let rate = theory(s, c);
            let count = counts.get(&(state.clone(), c)).copied().unwrap_or(0);
            let expected = to_f64(&rate) * occ;
            let z = if expected > 0.0 {
                Some((count as f64 - expected) / expected.sqrt())
            } else if count > 0 {
                Some(f64::INFINITY)
            } else {
                None
            };
            if let Some(z) = z {
                worst = worst.max(z.abs());
            }
            if expected > 0.0 || count > 0 {
                rows.push(AuditRow { state: state.clone(), cell: [c.0, c.1], count, time: occ, rate: format_scalar(&rate), expected, z });
            }
        }
    }
    RateAudit { runs: runs.len(), rows, max_abs_z: worst }
}

/// Doob rates of the outer diagonal of `δ_{r+1}`, cell `(i, r-i+1)`.
pub fn doob_theory(drift: crate::qnum::DriftParams) -> impl FnMut(&CellArray, Cell) -> ExactScalar {
    let mut table = CoeffTable::new(drift);
    move |s, (i, _)| doob_rates(s.values(), &mut table)[i as usize - 1].clone()
}

/// `L = A^{-1} H A` rates: `b̃(σ) A(σ-e)/A(σ)`.
pub fn conjugated_theory(shape: SkewShape) -> impl FnMut(&CellArray, Cell) -> ExactScalar {
    let mut memo: HashMap<Vec<i64>, ExactScalar> = HashMap::new();
    let mut a = move |s: &CellArray| -> ExactScalar {
        memo.entry(s.values().to_vec())
            .or_insert_with(|| ensemble(&shape, s).map(|e| e.normalizer).unwrap_or_else(|_| ExactScalar::zero()))
            .clone()
    };
    move |s, c| {
        let model = RateModel::for_array(s);
        let b = crate::dynamics::jump_rate(s, c, &model).unwrap_or_else(|_| ExactScalar::zero());
        if b.is_zero() {
            return b;
        }
        b * a(&s.decremented(c)) / a(s)
    }
}

/// Times to absorption of `replicas` runs from a fixed start.
pub fn absorption_times(initial: &CellArray, model: &RateModel, replicas: u64, seed: u64) -> Result<Vec<f64>> {
    let runs = run_replicas(&InitialLaw::Fixed(initial.clone()), model, None, replicas, seed)?;
    Ok(runs.iter().map(|r| r.absorbed_at.unwrap_or(f64::INFINITY)).collect())
}

/// Pooled chi-square test of `μ`-values given the boundary state.
#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareReport {
    pub samples: usize,
    pub groups: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareReport {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

/// Start from `K_{σ0}`, run `G^{λ,α}_μ`, read replica `i` at `times[i % len]`,
/// and test the interior values against `K_{σ(t)}`. Categories with expected
/// count below 5 are pooled within their group.
pub fn conditional_law_test(
    shape: &SkewShape,
    sigma0: &CellArray,
    times: &[f64],
    samples: u64,
    seed: u64,
) -> Result<ChiSquareReport> {
    if times.is_empty() {
        return Err(Error::Precondition("no sampling times".into()));
    }
    let ens = ensemble(shape, sigma0)?;
    let model = RateModel::new(RateVariant::SkewFull, shape.clone(), sigma0.drift().clone())?;
    let tmax = times.iter().cloned().fold(0.0, f64::max);
    let runs = run_replicas(&InitialLaw::Ensemble(ens), &model, Some(tmax), samples, seed)?;
    let blayout = Layout::new(shape.clone(), Domain::Boundary, sigma0.drift().clone());
    let mut groups: BTreeMap<Vec<i64>, BTreeMap<Vec<i64>, u64>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        let s = r.state_at(times[i % times.len()]);
        let b = s.restrict(&blayout);
        *groups.entry(b.values().to_vec()).or_default().entry(s.mu_values()).or_default() += 1;
    }
    let mut stat = 0.0;
    let mut dof = 0usize;
    let mut used = 0usize;
    for (bvals, obs) in &groups {
        let b = CellArray::from_values(blayout.clone(), bvals.clone());
        let e = ensemble(shape, &b)?;
        let n: u64 = obs.values().sum();
        let probs = e.probabilities();
        let mut bins: Vec<(f64, f64)> = Vec::new();
        let (mut po, mut pe) = (0.0, 0.0);
        for (m, p) in e.members.iter().zip(&probs) {
            let o = obs.get(&m.mu_values()).copied().unwrap_or(0) as f64;
            let ex = to_f64(p) * n as f64;
            if ex < 5.0 {
                po += o;
                pe += ex;
            } else {
                bins.push((o, ex));
            }
        }
        if pe > 0.0 {
            if pe < 5.0 && !bins.is_empty() {
                let last = bins.last_mut().unwrap();
                last.0 += po;
                last.1 += pe;
            } else {
                bins.push((po, pe));
            }
        }
        if bins.len() < 2 {
            continue;
        }
        used += 1;
        dof += bins.len() - 1;
        stat += bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum::<f64>();
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("dof > 0").cdf(stat)
    };
    Ok(ChiSquareReport { samples: runs.len(), groups: used, statistic: stat, dof, p_value })
}

/// Sample mean and standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}
