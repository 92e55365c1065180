//! Acceptance suite: one test per release criterion, each printing a PASS
//! line with the measured quantities. Heavy criteria serialize on a mutex so
//! wall-clock limits are not distorted by parallel test scheduling.

use plsem::{
    compute_gdpx, compute_gdpx_with, consistent_extensions, covered_reversal_delta,
    fit_additive_node, fixed_pairs, maximally_oriented, meek_closure_with_order, model_file,
    oracle_enumerate, oracle_gdpx, orientation_metrics, BackgroundKnowledge, BasisConfig, Dag,
    DataMatrix, EstimationConfig, NodeId, Pdag, Plsem, Rule, SimConfig, Verdict,
};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

static HEAVY: Mutex<()> = Mutex::new(());

fn fixture(name: &str) -> Plsem {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    model_file::read(&path).expect("fixture loads")
}

fn edge_sets(dags: &[Dag]) -> Vec<Vec<(NodeId, NodeId)>> {
    dags.iter().map(|d| d.edges()).collect()
}

#[test]
fn criterion_01_cancelling_chain_reversal_closed_form() {
    let start = Instant::now();
    let m = fixture("chain3_cancel.json");
    let m1 = m.reverse_covered_linear_edge(2, 3).unwrap();
    let m2 = m1.reverse_covered_linear_edge(1, 3).unwrap();

    assert_eq!(m2.dag().edges(), vec![(1, 2), (3, 1), (3, 2)]);
    assert!((m2.sigma2(1) - 2.0 / 3.0).abs() < 1e-12, "sigma2(1) = {}", m2.sigma2(1));
    assert!((m2.sigma2(2) - 0.5).abs() < 1e-12, "sigma2(2) = {}", m2.sigma2(2));
    assert!((m2.sigma2(3) - 3.0).abs() < 1e-12, "sigma2(3) = {}", m2.sigma2(3));

    let c31 = m2.edge_function(3, 1).unwrap().linear_coefficient();
    assert!((c31 - 1.0 / 3.0).abs() < 1e-12, "X1 on X3 coefficient {c31}");
    let f12 = m2.edge_function(1, 2).unwrap();
    assert!((f12.linear_coefficient() - 0.5).abs() < 1e-12);
    assert!(!f12.is_linear(), "quadratic part of X2 on X1 must survive");
    let c32 = m2.edge_function(3, 2).unwrap().linear_coefficient();
    assert!((c32 - 0.5).abs() < 1e-12, "X2 on X3 coefficient {c32}");

    assert!(m.densities_equal(&m2, 1000, 7, 1e-9).unwrap());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 01 PASS: two-step reversal variances (2/3, 1/2, 3) and \
         coefficients (1/3, 1/2 + quadratic, 1/2) within 1e-12; densities equal \
         (1000 points, 1e-9); {elapsed:?} < 1 s"
    );
}

#[test]
fn criterion_02_cancelling_diamond_reversal_drops_edge() {
    let m = fixture("diamond4_cancel.json");
    let r = m.reverse_covered_linear_edge(3, 4).unwrap();

    assert_eq!(
        r.dag().edges(),
        vec![(1, 2), (2, 3), (4, 3)],
        "the 2 -> 4 function must cancel exactly"
    );
    assert!((r.sigma2(4) - 2.0).abs() < 1e-12, "sigma2(4) = {}", r.sigma2(4));
    assert!((r.sigma2(3) - 0.5).abs() < 1e-12, "sigma2(3) = {}", r.sigma2(3));
    let c43 = r.edge_function(4, 3).unwrap().linear_coefficient();
    assert!((c43 - 0.5).abs() < 1e-12);
    let c23 = r.edge_function(2, 3).unwrap().linear_coefficient();
    assert!((c23 - 1.0).abs() < 1e-12);
    assert!(m.densities_equal(&r, 1000, 11, 1e-9).unwrap());
    println!(
        "criterion 02 PASS: reversal gives Var(X4) = 2 with the 2 -> 4 edge \
         dropped by exact cancellation and X3 = X2 + X4/2 with Var 1/2, all \
         within 1e-12"
    );
}

#[test]
fn criterion_03_triangle_class_has_exactly_two_members() {
    let m = fixture("triangle_mixed.json");
    let dags = oracle_enumerate(&m, 100).unwrap();
    assert_eq!(
        edge_sets(&dags),
        vec![
            vec![(1, 2), (1, 3), (2, 3)],
            vec![(1, 2), (1, 3), (3, 2)],
        ]
    );
    // in the reversed member the 1 -> 3 function becomes the sum of the two
    // original functions out of node 1, picking up the quadratic: x^2 + 2x
    let flipped = m.reverse_covered_linear_edge(2, 3).unwrap();
    let f13 = flipped.edge_function(1, 3).unwrap();
    assert!(!f13.is_linear());
    assert!((f13.linear_coefficient() - 2.0).abs() < 1e-12);
    assert!((f13.eval(1.5) - (1.5f64 * 1.5 + 2.0 * 1.5)).abs() < 1e-12);
    println!(
        "criterion 03 PASS: enumeration returns exactly the two triangle DAGs \
         and the transformed 1 -> 3 function is the nonlinear sum x^2 + 2x"
    );
}

#[test]
fn criterion_04_four_node_representative_and_extensions() {
    let m = fixture("four_node_class3.json");
    let g = oracle_gdpx(&m);
    assert_eq!(g.directed_edges(), vec![(1, 2), (2, 4)]);
    assert_eq!(g.undirected_edges(), vec![(1, 3), (2, 3)]);

    let exts = consistent_extensions(&g, 100).unwrap();
    assert_eq!(
        edge_sets(&exts),
        vec![
            vec![(1, 2), (1, 3), (2, 3), (2, 4)],
            vec![(1, 2), (1, 3), (2, 4), (3, 2)],
            vec![(1, 2), (2, 4), (3, 1), (3, 2)],
        ]
    );
    assert!(
        exts.iter().all(|d| !(d.has_edge(2, 3) && d.has_edge(3, 1))),
        "cyclic candidate 1 -> 2 -> 3 -> 1 must be excluded"
    );
    println!(
        "criterion 04 PASS: representative is {{1 -> 2, 2 -> 4; 1 -- 3, 2 -- 3}} \
         with exactly 3 consistent extensions, cyclic candidate excluded"
    );
}

#[test]
fn criterion_05_seven_node_walkthrough_trace() {
    let m = fixture("seven_node_demo.json");
    let fixed = fixed_pairs(&m);
    let decide = |_: &Pdag, i: NodeId, j: NodeId, _: &[NodeId]| {
        Ok(if fixed.contains(i, j) {
            (Verdict::Keep, f64::INFINITY)
        } else {
            (Verdict::Undirect, 0.0)
        })
    };
    let (ghat, trace) = compute_gdpx_with(m.dag(), decide).unwrap();

    // candidate orientations: the edges of the DAG undirected in its pattern
    let pattern = m.dag().pattern();
    let mut k: Vec<(NodeId, NodeId)> = m
        .dag()
        .edges()
        .into_iter()
        .filter(|&(i, j)| pattern.has_undirected(i, j))
        .collect();
    k.sort_by_key(|&(i, j)| (j, i));
    assert_eq!(k, vec![(2, 3), (6, 4), (4, 5), (6, 5), (5, 7)]);

    // knowledge-set sequence along the trace
    let mut sequence = vec![k.clone()];
    for r in &trace {
        k.retain(|&e| e != (r.from, r.to));
        sequence.push(k.clone());
    }
    assert_eq!(
        sequence,
        vec![
            vec![(2, 3), (6, 4), (4, 5), (6, 5), (5, 7)],
            vec![(2, 3), (4, 5), (6, 5), (5, 7)],
            vec![(2, 3), (6, 5), (5, 7)],
            vec![(2, 3), (5, 7)],
        ]
    );
    let decisions: Vec<_> = trace.iter().map(|r| (r.from, r.to, r.verdict)).collect();
    assert_eq!(
        decisions,
        vec![
            (6, 4, Verdict::Undirect),
            (4, 5, Verdict::Keep),
            (6, 5, Verdict::Undirect),
        ]
    );
    assert!(
        !decisions.iter().any(|&(i, j, _)| (i, j) == (2, 3) || (i, j) == (5, 7)),
        "2 -> 3 and 5 -> 7 must never be score-tested"
    );
    assert_eq!(
        ghat.directed_edges(),
        vec![(1, 2), (2, 3), (4, 2), (4, 5), (5, 7)]
    );
    assert_eq!(ghat.undirected_edges(), vec![(4, 6), (5, 6)]);
    println!(
        "criterion 05 PASS: exact decisions reproduce the knowledge-set \
         sequence (5, 4, 3, 2 candidates), test order 6->4, 4->5, 6->5, and \
         the final PDAG; 2->3 and 5->7 were never tested"
    );
}

/// Random faithful model with wave nonlinearities; retries until the
/// nonlinear functions out of every common parent have distinct atoms.
fn faithful_instance(seed: u64) -> Plsem {
    let p = 3 + (seed % 5) as u32; // 3..=7
    for attempt in 0..100 {
        let s = seed.wrapping_mul(1000).wrapping_add(attempt);
        let d = plsem::random_dag(p, 0.45, s);
        let m = plsem::random_plsem(&d, 0.5, s ^ 0x00C0FFEE);
        let mut ok = true;
        for i in 1..=p {
            let mut shapes = BTreeSet::new();
            for j in d.children(i) {
                let f = m.edge_function(i, *j).unwrap();
                if f.is_linear() {
                    continue;
                }
                let key = format!("{:?}", f.terms());
                if !shapes.insert(key) {
                    ok = false;
                }
            }
        }
        if ok {
            return m;
        }
    }
    unreachable!("random wave atoms collide with probability zero")
}

#[test]
fn criterion_06_enumeration_equals_extensions_of_representative() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let mut class_sizes = 0usize;
    let mut reversals_checked = 0usize;
    for seed in 0..200u64 {
        let m = faithful_instance(seed);
        let listed = oracle_enumerate(&m, 100_000).unwrap();
        let exts = consistent_extensions(&oracle_gdpx(&m), 100_000).unwrap();
        assert_eq!(
            edge_sets(&listed),
            edge_sets(&exts),
            "seed {seed}: enumeration and extensions disagree"
        );
        class_sizes += listed.len();

        // density invariance at every reachable reversal step
        let mut frontier = vec![m.clone()];
        let mut seen = BTreeSet::from([m.dag().edges()]);
        while let Some(cur) = frontier.pop() {
            for (i, j) in cur.dag().edges() {
                if !cur.dag().is_covered(i, j).unwrap() || !cur.is_edge_linear(i, j).unwrap() {
                    continue;
                }
                let next = cur.reverse_covered_linear_edge(i, j).unwrap();
                assert!(
                    cur.densities_equal(&next, 1000, seed, 1e-9).unwrap(),
                    "seed {seed}: density changed reversing {i} -> {j}"
                );
                reversals_checked += 1;
                if seen.insert(next.dag().edges()) {
                    frontier.push(next);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 06 PASS: 200 faithful instances (p <= 7, total class size \
         {class_sizes}), enumeration == extensions(representative); \
         {reversals_checked} reversal steps density-invariant at 1e-9; \
         {elapsed:?} < 2 min"
    );
}

#[test]
fn criterion_07_closure_confluence_and_cpdag_oracle() {
    // order-independence of the closure on 500 consistent random PDAGs
    let orders = [
        [Rule::R1, Rule::R2, Rule::R3, Rule::R4],
        [Rule::R4, Rule::R3, Rule::R2, Rule::R1],
        [Rule::R2, Rule::R4, Rule::R1, Rule::R3],
        [Rule::R3, Rule::R1, Rule::R4, Rule::R2],
    ];
    for seed in 0..500u64 {
        let p = 3 + (seed % 6) as u32; // 3..=8
        let d = plsem::random_dag(p, 0.45, seed);
        let pattern = d.pattern();
        let mut rng = plsem::rng::Rng::new(seed ^ 0x0DDB411);
        let knowledge: Vec<_> = d
            .edges()
            .into_iter()
            .filter(|&(i, j)| pattern.has_undirected(i, j) && rng.bernoulli(0.5))
            .collect();
        let mut g = pattern.clone();
        let base = maximally_oriented(&g, &BackgroundKnowledge::new(knowledge.clone()).unwrap())
            .unwrap();
        // re-run the closure from the seeded graph under every rule order
        g = {
            let mut seeded = pattern.clone();
            for (i, j) in knowledge {
                if seeded.has_undirected(i, j) {
                    // orient through the public constructor path
                    seeded = Pdag::new(
                        p,
                        &{
                            let mut dir = seeded.directed_edges();
                            dir.push((i, j));
                            dir
                        },
                        &seeded
                            .undirected_edges()
                            .into_iter()
                            .filter(|&(a, b)| (a, b) != (i.min(j), i.max(j)))
                            .collect::<Vec<_>>(),
                    )
                    .unwrap();
                }
            }
            seeded
        };
        for order in &orders {
            assert_eq!(
                meek_closure_with_order(&g, order).unwrap(),
                base,
                "seed {seed}: closure depends on rule order"
            );
        }
    }

    // CPDAG extensions equal the exhaustive Markov class for p <= 6
    let mut classes = 0usize;
    for seed in 0..150u64 {
        let p = 3 + (seed % 4) as u32; // 3..=6
        let d = plsem::random_dag(p, 0.45, seed ^ 0x31415);
        let cpdag = maximally_oriented(&d.pattern(), &BackgroundKnowledge::empty()).unwrap();
        let exts = consistent_extensions(&cpdag, 1 << 16).unwrap();

        let skel: Vec<(NodeId, NodeId)> = d.skeleton().into_iter().collect();
        let mut class = Vec::new();
        for mask in 0u32..(1 << skel.len()) {
            let edges: Vec<(NodeId, NodeId)> = skel
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| if mask >> k & 1 == 0 { (a, b) } else { (b, a) })
                .collect();
            if let Ok(cand) = Dag::new(p, &edges) {
                if cand.markov_equivalent(&d).unwrap() {
                    class.push(cand);
                }
            }
        }
        class.sort_by_key(|c| c.edges());
        assert_eq!(edge_sets(&exts), edge_sets(&class), "seed {seed}");
        classes += class.len();
    }
    println!(
        "criterion 07 PASS: closure order-independent on 500 random PDAGs; \
         CPDAG extensions match the brute-force Markov class on 150 instances \
         (total {classes} DAGs, p <= 6)"
    );
}

#[test]
fn criterion_08_statistical_recovery_at_n1000() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let mut summaries = Vec::new();
    for (k, plin) in [0.2, 0.5, 0.8].into_iter().enumerate() {
        let cfg = SimConfig {
            p: 10,
            pc: 2.0 / 9.0,
            plin,
            n: 1000,
            nrep: 50,
            alpha_grid: vec![0.05],
            seed: 0xACC0 + k as u64,
        };
        let rows = plsem::run_experiment(&cfg).unwrap();
        let row = &rows[0];
        assert!(
            row.falsely_kept_pct <= 10.0,
            "plin {plin}: falsely kept {}%",
            row.falsely_kept_pct
        );
        assert!(
            row.falsely_removed_pct <= 10.0,
            "plin {plin}: falsely removed {}%",
            row.falsely_removed_pct
        );
        summaries.push(format!(
            "plin {plin}: kept {:.2}% removed {:.2}%",
            row.falsely_kept_pct, row.falsely_removed_pct
        ));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "criterion 08 PASS: p=10, n=1000, alpha=0.05, 50 replicates; {}; both \
         error rates <= 10%; {elapsed:?} < 10 min",
        summaries.join("; ")
    );
}

#[test]
fn criterion_09_scale_sanity_large_p() {
    let _guard = HEAVY.lock().unwrap();
    let mut lines = Vec::new();
    for (p, limit) in [(1000u32, 60.0f64), (5000, 600.0)] {
        let pc = 2.0 / (p as f64 - 1.0);
        let d = plsem::random_dag(p, pc, 0x5CA1E + p as u64);
        let m = plsem::random_plsem(&d, 1.0, 0xF00D + p as u64);
        let data = m.sample(400, 0xDA7A + p as u64);
        let cfg = EstimationConfig {
            alpha: 0.05,
            basis: BasisConfig::default(),
            cap: usize::MAX,
        };
        let start = Instant::now();
        let res = compute_gdpx(&data, &d, &cfg).unwrap();
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs_f64() < limit,
            "p={p}: took {elapsed:?}, limit {limit} s"
        );
        lines.push(format!(
            "p={p} ({} edges, {} tests): {elapsed:?}",
            d.edge_count(),
            res.trace.len()
        ));
    }
    println!(
        "criterion 09 PASS: all-linear sparse estimation completed; {} \
         (limits 60 s and 600 s)",
        lines.join("; ")
    );
}

#[test]
fn criterion_10_score_layer_accuracy() {
    let _guard = HEAVY.lock().unwrap();
    let cfg = BasisConfig::default();
    let n = 5000;

    // residual scale recovery on true node models
    let mut sigma_ok = 0usize;
    let mut sigma_total = 0usize;
    for seed in 0..50u64 {
        let d = plsem::random_dag(5, 0.5, seed ^ 0x51);
        let m = plsem::random_plsem(&d, 0.5, seed ^ 0x52);
        let data = m.sample(n, seed ^ 0x53);
        for j in 1..=5u32 {
            let parents: Vec<&[f64]> = d.parents(j).iter().map(|&s| data.col(s)).collect();
            let fit = fit_additive_node(data.col(j), &parents, &cfg).unwrap();
            sigma_total += 1;
            if (fit.sigma_hat - m.sigma2(j).sqrt()).abs() <= 0.05 {
                sigma_ok += 1;
            }
        }
    }
    let sigma_rate = sigma_ok as f64 / sigma_total as f64;
    assert!(sigma_rate >= 0.9, "sigma recovery rate {sigma_rate}");

    // near-zero score gap for a covered linear pair
    let mut linear_ok = 0usize;
    for seed in 0..50u64 {
        let mut rng = plsem::rng::Rng::new(seed ^ 0x61);
        let x: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let y: Vec<f64> = x.iter().map(|&v| 0.9 * v + 0.6 * rng.normal()).collect();
        let data = DataMatrix::from_columns(vec![x, y]).unwrap();
        let delta = covered_reversal_delta(&data, 1, 2, &[], &cfg).unwrap();
        if delta.abs() <= 0.05 {
            linear_ok += 1;
        }
    }
    assert!(linear_ok >= 45, "only {linear_ok}/50 linear gaps within 0.05");

    // clear positive gap for the strong nonlinearity
    let mut nonlinear_ok = 0usize;
    for seed in 0..50u64 {
        let mut rng = plsem::rng::Rng::new(seed ^ 0x71);
        let x: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|&v| 2.0 * (1.5 * v).cos() + 0.3 * rng.normal())
            .collect();
        let data = DataMatrix::from_columns(vec![x, y]).unwrap();
        let delta = covered_reversal_delta(&data, 1, 2, &[], &cfg).unwrap();
        if delta > 0.2 {
            nonlinear_ok += 1;
        }
    }
    assert!(nonlinear_ok >= 45, "only {nonlinear_ok}/50 nonlinear gaps above 0.2");

    println!(
        "criterion 10 PASS: sigma within 0.05 in {sigma_ok}/{sigma_total} fits \
         at n=5000; |delta| <= 0.05 in {linear_ok}/50 linear pairs; \
         delta > 0.2 in {nonlinear_ok}/50 strong-nonlinearity pairs"
    );
}

/// The shipped fixture files must stay in sync with the exact class
/// structure the other criteria assume.
#[test]
fn fixtures_load_and_validate() {
    for name in [
        "triangle_mixed.json",
        "chain3_cancel.json",
        "diamond4_cancel.json",
        "four_node_class3.json",
        "seven_node_demo.json",
    ] {
        let m = fixture(name);
        assert!(m.p() >= 3, "{name}");
    }
    let demo = fixture("seven_node_demo.json");
    assert_eq!(
        demo.dag().edges(),
        vec![(1, 2), (2, 3), (4, 2), (4, 5), (5, 7), (6, 4), (6, 5)]
    );
    let metrics = orientation_metrics(
        &oracle_gdpx(&demo),
        &oracle_gdpx(&demo),
        &maximally_oriented(&demo.dag().pattern(), &BackgroundKnowledge::empty()).unwrap(),
    )
    .unwrap();
    assert_eq!((metrics.falsely_kept, metrics.falsely_removed), (0, 0));
}
