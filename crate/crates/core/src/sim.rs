//! Experiment generator and harness: random DAGs, random models, replicated
//! recovery experiments and a timing benchmark.
//!
//! Replicate `k` of a run derives its seed from the master seed via
//! [`derive_seed`], so parallel execution reproduces the sequential results
//! bit for bit.

use crate::error::Result;
use crate::estimators::{compute_gdpx, orientation_metrics, EstimationConfig};
use crate::func::{EdgeFunction, FunctionAtom};
use crate::graph::Dag;
use crate::meek::{maximally_oriented, BackgroundKnowledge};
use crate::model::Plsem;
use crate::oracle::oracle_gdpx;
use crate::rng::{derive_seed, Rng};
use crate::scoring::BasisConfig;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub p: u32,
    /// Probability of connecting two nodes.
    pub pc: f64,
    /// Probability that an edge function is linear.
    pub plin: f64,
    pub n: usize,
    pub nrep: usize,
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub alpha: f64,
    pub n: usize,
    pub p: u32,
    pub plin: f64,
    pub pc: f64,
    /// Mean percentage of CPDAG-undirected edges kept directed although the
    /// reference has them undirected.
    pub falsely_kept_pct: f64,
    /// Mean percentage of CPDAG-undirected edges undirected although the
    /// reference keeps them directed.
    pub falsely_removed_pct: f64,
    pub nrep: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub p: u32,
    pub expected_edges: f64,
    pub plin: f64,
    pub median_seconds: f64,
}

/// Random DAG with the identity topological order: each pair `i < j` is
/// connected by `i -> j` independently with probability `pc`.
pub fn random_dag(p: u32, pc: f64, seed: u64) -> Dag {
    assert!(p >= 1, "need at least one node");
    let mut rng = Rng::new(seed);
    let mut edges = Vec::new();
    for i in 1..=p {
        for j in (i + 1)..=p {
            if rng.bernoulli(pc) {
                edges.push((i, j));
            }
        }
    }
    Dag::new(p, &edges).expect("ordered construction is acyclic")
}

fn random_edge_function(rng: &mut Rng, plin: f64) -> EdgeFunction {
    if rng.bernoulli(plin) {
        EdgeFunction::linear(rng.uniform_signed(0.5, 1.5))
    } else {
        let weight = rng.uniform_signed(1.0, 2.0);
        let c1 = rng.uniform_in(1.0, 2.0);
        let c2 = rng.uniform_in(-std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_3);
        let atom = if rng.bernoulli(0.5) {
            FunctionAtom::CosWave { c1, c2 }
        } else {
            FunctionAtom::TanhWave { c1, c2 }
        };
        EdgeFunction::new([(weight, atom)]).expect("wave parameters are in range")
    }
}

/// Random model on `d`: linear edges with coefficient magnitude in
/// [0.5, 1.5] with probability `plin`, otherwise a cosine or tanh wave
/// (equal odds) with weight magnitude in [1, 2], frequency in [1, 2] and
/// phase in [-pi/3, pi/3]. Noise variances are uniform on [1, 2] for source
/// nodes and on [1/4, 1/2] otherwise; intercepts are zero.
pub fn random_plsem(d: &Dag, plin: f64, seed: u64) -> Plsem {
    let mut rng = Rng::new(seed);
    let mut f = BTreeMap::new();
    for (i, j) in d.edges() {
        f.insert((i, j), random_edge_function(&mut rng, plin));
    }
    let sigma2: Vec<f64> = (1..=d.p())
        .map(|j| {
            if d.parents(j).is_empty() {
                rng.uniform_in(1.0, 2.0)
            } else {
                rng.uniform_in(0.25, 0.5)
            }
        })
        .collect();
    Plsem::new(d.clone(), vec![0.0; d.p() as usize], sigma2, f)
        .expect("generated parameters satisfy the model invariants")
}

/// One replicate: generate, sample, estimate at every `alpha`, and score
/// against the exact class representative.
fn run_replicate(cfg: &SimConfig, rep: usize) -> Result<Vec<(f64, f64, f64)>> {
    let seed = derive_seed(cfg.seed, rep as u64);
    let dag = random_dag(cfg.p, cfg.pc, derive_seed(seed, 1));
    let model = random_plsem(&dag, cfg.plin, derive_seed(seed, 2));
    let data = model.sample(cfg.n, derive_seed(seed, 3));
    let truth = oracle_gdpx(&model);
    let cpdag = maximally_oriented(&dag.pattern(), &BackgroundKnowledge::empty())?;

    let mut out = Vec::with_capacity(cfg.alpha_grid.len());
    for &alpha in &cfg.alpha_grid {
        let est = compute_gdpx(
            &data,
            &dag,
            &EstimationConfig {
                alpha,
                basis: BasisConfig::default(),
                cap: usize::MAX,
            },
        )?;
        let m = orientation_metrics(est.gdpx.as_ref().unwrap(), &truth, &cpdag)?;
        let denom = m.denom.max(1) as f64;
        out.push((
            alpha,
            100.0 * m.falsely_kept as f64 / denom,
            100.0 * m.falsely_removed as f64 / denom,
        ));
    }
    Ok(out)
}

/// Runs `nrep` replicates (in parallel) and aggregates mean error
/// percentages per `alpha`.
pub fn run_experiment(cfg: &SimConfig) -> Result<Vec<ExperimentRow>> {
    let per_rep: Vec<Vec<(f64, f64, f64)>> = (0..cfg.nrep)
        .into_par_iter()
        .map(|rep| run_replicate(cfg, rep))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(cfg.alpha_grid.len());
    for (k, &alpha) in cfg.alpha_grid.iter().enumerate() {
        let kept = per_rep.iter().map(|r| r[k].1).sum::<f64>() / cfg.nrep as f64;
        let removed = per_rep.iter().map(|r| r[k].2).sum::<f64>() / cfg.nrep as f64;
        rows.push(ExperimentRow {
            alpha,
            n: cfg.n,
            p: cfg.p,
            plin: cfg.plin,
            pc: cfg.pc,
            falsely_kept_pct: kept,
            falsely_removed_pct: removed,
            nrep: cfg.nrep,
        });
    }
    Ok(rows)
}

/// Median wall-clock seconds of the estimator itself over `runs_per_p`
/// generated instances per node count.
pub fn benchmark_timing(
    p_list: &[u32],
    pc_for: impl Fn(u32) -> f64,
    plin: f64,
    n: usize,
    alpha: f64,
    seed: u64,
    runs_per_p: usize,
) -> Result<Vec<TimingRow>> {
    let runs = runs_per_p.max(5);
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let pc = pc_for(p);
        let mut times = Vec::with_capacity(runs);
        for run in 0..runs {
            let s = derive_seed(seed, ((p as u64) << 32) | run as u64);
            let dag = random_dag(p, pc, derive_seed(s, 1));
            let model = random_plsem(&dag, plin, derive_seed(s, 2));
            let data = model.sample(n, derive_seed(s, 3));
            let cfg = EstimationConfig {
                alpha,
                basis: BasisConfig::default(),
                cap: usize::MAX,
            };
            let start = Instant::now();
            compute_gdpx(&data, &dag, &cfg)?;
            times.push(start.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        let median = if runs % 2 == 1 {
            times[runs / 2]
        } else {
            0.5 * (times[runs / 2 - 1] + times[runs / 2])
        };
        rows.push(TimingRow {
            p,
            expected_edges: pc * (p as f64) * (p as f64 - 1.0) / 2.0,
            plin,
            median_seconds: median,
        });
    }
    Ok(rows)
}

pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut s =
        String::from("alpha,n,p,plin,pc,falsely_kept_pct,falsely_removed_pct,nrep\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.alpha, r.n, r.p, r.plin, r.pc, r.falsely_kept_pct, r.falsely_removed_pct, r.nrep
        ));
    }
    s
}

pub fn timing_csv(rows: &[TimingRow]) -> String {
    let mut s = String::from("p,expected_edges,plin,median_seconds\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.p, r.expected_edges, r.plin, r.median_seconds
        ));
    }
    s
}
