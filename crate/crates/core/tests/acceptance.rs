//! Acceptance gate. Runs every criterion in sequence (so the timing checks
//! are not competing with each other) and prints one PASS/FAIL line each.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nmrf::generate::{self, seeded, BlockShape};
use nmrf::graph::PlainGraph;
use nmrf::model::{Model, Potential};
use nmrf::mwss::{mwss_bipartite, mwss_branch_bound, solve_map, Method, DEFAULT_BNB_CAP};
use nmrf::nmrf::{build_nmrf, compile_binary_pairwise, reparameterize_model, EdgeForm, EnodePlan};
use nmrf::oracle::{brute_force_map, brute_force_mwss};
use nmrf::perfection::{
    binary_pairwise_perfection, cycle_forms, cycle_to_induced_hole, is_induced_cycle, is_perfect_small,
    locate_hole, PerfectionVerdict,
};
use nmrf::signed::{Sign, SignedCycle, SignedEdge, SignedGraph};
use nmrf::structure::{block_decompose, classify_block, classify_graph, classify_model, BlockClass};
use nmrf::submodular::{construct_k3, representation_feasible, Feasibility, HighOrderPotential, Infeasibility};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn random_form<R: Rng>(rng: &mut R, sign: Sign) -> EdgeForm {
    match (sign, rng.random_bool(0.5)) {
        (Sign::Associative, false) => EdgeForm::F00,
        (Sign::Associative, true) => EdgeForm::F11,
        (Sign::Repulsive, false) => EdgeForm::F01,
        (Sign::Repulsive, true) => EdgeForm::F10,
    }
}

fn random_plan<R: Rng>(rng: &mut R, g: &SignedGraph) -> EnodePlan {
    g.edges().iter().map(|e| ((e.u, e.v), random_form(rng, e.sign))).collect()
}

/// Solve-vs-oracle agreement on random tractable models.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(101);
    let mut classes: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut multi_block = 0;
    let mut checked = 0;
    while checked < 600 {
        let integer = checked % 3 != 2;
        let model = if checked % 5 == 4 {
            // Short block chains on up to 8 vertices.
            let e = rng.random_range(3..=9);
            let g = generate::block_chain_topology(&mut rng, e);
            if g.vertex_count() > 8 {
                continue;
            }
            generate::model_for_topology(&mut rng, &g, integer)
        } else {
            generate::random_tractable(&mut rng, 8, integer)
        };
        let report = classify_model(&model, 1e-9).map_err(|e| e.to_string())?;
        if !report.tractable {
            continue;
        }
        let nontrivial: Vec<_> = report.blocks.iter().filter(|b| !b.edges.is_empty()).collect();
        if nontrivial.len() > 1 {
            multi_block += 1;
        }
        for b in &nontrivial {
            let key = match b.class {
                BlockClass::Br { .. } => "B_R",
                BlockClass::Tmn { .. } => "T",
                BlockClass::Un { .. } => "U",
                BlockClass::Intractable { .. } => unreachable!(),
            };
            *classes.entry(key).or_default() += 1;
        }
        let got = solve_map(&model, Method::Auto).map_err(|e| format!("solve failed: {e}"))?;
        let want = brute_force_map(&model).map_err(|e| e.to_string())?;
        if integer {
            ensure(got.objective == want.objective, || {
                format!("integer model {checked}: {} vs {}", got.objective, want.objective)
            })?;
            ensure(got.assignment == want.assignment, || {
                format!("integer model {checked}: tie-break {:?} vs {:?}", got.assignment, want.assignment)
            })?;
        } else {
            ensure((got.objective - want.objective).abs() <= 1e-6, || {
                format!("model {checked}: {} vs {}", got.objective, want.objective)
            })?;
        }
        checked += 1;
    }
    ensure(classes.len() == 3, || format!("block mix incomplete: {classes:?}"))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{checked} models agree; blocks {classes:?}; {multi_block} multi-block; {:.2?}",
        start.elapsed()
    ))
}

/// B_R topologies compile to bipartite pruned NMRFs under their plan.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(202);
    let mut count = 0;
    for i in 0..150 {
        let g = if i % 3 == 0 {
            // Two dense associative sides joined by repulsive edges.
            let k = rng.random_range(5..=9);
            let edges = generate::block_edges(&mut rng, BlockShape::BalancedDense(k));
            SignedGraph::new(k, edges.into_iter().map(|(a, b, s)| SignedEdge::new(a, b, s)))
        } else {
            let n = rng.random_range(2..=12);
            // Balanced by construction: signs follow a random side split.
            let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random_bool(0.4) {
                        let s = if side[a] != side[b] { Sign::Repulsive } else { Sign::Associative };
                        edges.push(SignedEdge::new(a, b, s));
                    }
                }
            }
            SignedGraph::new(n, edges)
        };
        let report = classify_graph(&g);
        ensure(
            report.blocks.iter().all(|b| matches!(b.class, BlockClass::Br { .. })),
            || format!("instance {i} not classified B_R"),
        )?;
        let model = generate::model_for_topology(&mut rng, &g, i % 2 == 0);
        let pruned = compile_binary_pairwise(&model, &report.plan, 1e-9).map_err(|e| e.to_string())?;
        ensure(pruned.two_coloring().is_some(), || format!("instance {i}: pruned NMRF not bipartite"))?;
        let full = build_nmrf(&reparameterize_model(&model, &report.plan, 1e-9).unwrap()).prune_keeping_singletons(1e-9);
        ensure(full.two_coloring().is_some(), || {
            format!("instance {i}: NMRF with all snodes not bipartite")
        })?;
        count += 1;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{count} B_R models bipartite; {:.2?}", start.elapsed()))
}

/// Intractable topologies yield a witness cycle whose NMRF image is an odd
/// hole in the compiled graph.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cases: [(&str, usize, Vec<(usize, usize, bool)>); 3] = [
        ("frustrated C4", 4, vec![(0, 1, true), (1, 2, false), (2, 3, false), (0, 3, false)]),
        (
            "frustrated C5",
            5,
            vec![(0, 1, false), (1, 2, true), (2, 3, true), (3, 4, false), (0, 4, true)],
        ),
        (
            "K4 with frustrated triangle",
            4,
            vec![(0, 1, false), (1, 2, false), (0, 2, true), (0, 3, false), (1, 3, false), (2, 3, false)],
        ),
    ];
    let mut rng = seeded(303);
    let mut lines = Vec::new();
    for (name, n, triples) in cases {
        let g = SignedGraph::from_triples(n, &triples);
        let mut model = generate::model_for_topology(&mut rng, &g, true);
        let report = classify_model(&model, 1e-9).map_err(|e| e.to_string())?;
        ensure(!report.tractable, || format!("{name} classified tractable"))?;
        let witness: SignedCycle = report.witness().cloned().ok_or("no witness")?;
        ensure(witness.is_valid_in(&g) && witness.is_frustrated(), || {
            format!("{name}: bad witness {}", witness.describe())
        })?;
        let forms = cycle_forms(&witness, &report.plan).map_err(|e| e.to_string())?;
        let hole = cycle_to_induced_hole(&witness, &forms).map_err(|e| e.to_string())?;
        // Make the snodes the hole needs survive pruning.
        let mut pots: Vec<Potential<f64>> = model
            .potentials()
            .iter()
            .filter(|p| p.scope.len() == 2)
            .cloned()
            .collect();
        for v in 0..n {
            let mut t = vec![0.0, 0.0];
            if let Some(l) = hole.iter().find_map(|h| match *h {
                nmrf::perfection::HoleNode::Snode { var, label } if var == v => Some(label),
                _ => None,
            }) {
                t[l] = 100.0;
            }
            pots.push(Potential::new(vec![v], t));
        }
        model = Model::from_parts(model.variables().to_vec(), pots).unwrap();
        let nmrf = compile_binary_pairwise(&model, &report.plan, 1e-9).map_err(|e| e.to_string())?;
        let ids = locate_hole(&nmrf, &hole).ok_or_else(|| format!("{name}: hole nodes missing"))?;
        let graph = PlainGraph::from(&nmrf);
        ensure(ids.len() >= 5 && ids.len() % 2 == 1 && is_induced_cycle(&graph, &ids), || {
            format!("{name}: constructed cycle of length {} is not an odd hole", ids.len())
        })?;
        let verdict = binary_pairwise_perfection(&nmrf, 24).map_err(|e| e.to_string())?;
        ensure(matches!(verdict, PerfectionVerdict::OddHole(_)), || {
            format!("{name}: checker says {verdict:?}")
        })?;
        lines.push(format!("{name}: hole {}", ids.len()));
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{}; {:.2?}", lines.join(", "), start.elapsed()))
}

/// Canonical edge set of a graph on `n` vertices up to relabelling.
fn canonical(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        // Next permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return best.unwrap();
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

fn two_connected_graphs(max_n: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut seen = HashSet::new();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let triples: Vec<_> = edges.iter().map(|&(a, b)| (a, b, false)).collect();
            let tree = block_decompose(&SignedGraph::from_triples(n, &triples));
            if tree.blocks.len() != 1 || tree.blocks[0].vertices.len() != n {
                continue;
            }
            if seen.insert(canonical(n, &edges)) {
                out.push((n, edges));
            }
        }
    }
    out
}

/// Block verdicts agree with brute-force perfection of the compiled NMRF.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let graphs = two_connected_graphs(5);
    ensure(graphs.len() == 1 + 3 + 10, || format!("found {} 2-connected graphs", graphs.len()))?;
    let mut rng = seeded(404);
    let (mut tractable, mut intractable, mut samples) = (0, 0, 0);
    for (n, edges) in &graphs {
        for signs in 0u32..1 << edges.len() {
            let triples: Vec<_> = edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| (a, b, signs >> i & 1 == 1))
                .collect();
            let g = SignedGraph::from_triples(*n, &triples);
            let (class, plan) = classify_block(&g);
            let ok = class.is_tractable();
            if ok {
                tractable += 1;
            } else {
                intractable += 1;
            }
            for s in 0..50 {
                let model = generate::model_for_topology(&mut rng, &g, s % 2 == 0);
                let forms = if ok { plan.clone() } else { random_plan(&mut rng, &g) };
                let reparam = reparameterize_model(&model, &forms, 1e-9).map_err(|e| e.to_string())?;
                let nmrf = build_nmrf(&reparam).prune_keeping_singletons(1e-9);
                let verdict = is_perfect_small(&PlainGraph::from(&nmrf), 24).map_err(|e| e.to_string())?;
                ensure(verdict.is_perfect() == ok, || {
                    format!("{triples:?}: class {} but compiled NMRF {verdict:?}", class.label())
                })?;
                if ok {
                    let pruned = nmrf.prune(1e-9);
                    let v = is_perfect_small(&PlainGraph::from(&pruned), 24).map_err(|e| e.to_string())?;
                    ensure(v.is_perfect(), || format!("{triples:?}: psi-pruned NMRF {v:?}"))?;
                }
                samples += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!(
        "{} graphs, {tractable} tractable + {intractable} intractable signings, {samples} samples; {:.2?}",
        graphs.len(),
        start.elapsed()
    ))
}

/// Signed cycles map to chordless NMRF cycles of matching parity.
fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(505);
    for i in 0..600 {
        let len = rng.random_range(3..=9);
        let triples: Vec<_> = (0..len).map(|v| (v, (v + 1) % len, rng.random_bool(0.5))).collect();
        let g = SignedGraph::from_triples(len, &triples);
        let cycle = SignedCycle {
            vertices: (0..len).collect(),
            signs: (0..len)
                .map(|v| g.find_edge(v, (v + 1) % len).unwrap().sign)
                .collect(),
        };
        let plan = random_plan(&mut rng, &g);
        let forms = cycle_forms(&cycle, &plan).map_err(|e| e.to_string())?;
        let hole = cycle_to_induced_hole(&cycle, &forms).map_err(|e| e.to_string())?;
        let nmrf = nmrf::nmrf::structural_nmrf(&g, &plan);
        let ids = locate_hole(&nmrf, &hole).ok_or_else(|| format!("cycle {i}: nodes missing"))?;
        let graph = PlainGraph::from(&nmrf);
        ensure(is_induced_cycle(&graph, &ids), || format!("cycle {i}: image has a chord"))?;
        ensure(ids.len() >= len, || format!("cycle {i}: image shorter than cycle"))?;
        ensure(ids.len() % 2 == cycle.repulsive_count() % 2, || {
            format!("cycle {i}: parity {} vs {} repulsive", ids.len(), cycle.repulsive_count())
        })?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("600 cycles; {:.2?}", start.elapsed()))
}

/// Order-3 supermodular potentials: exact construction and bipartite
/// compilation of a triangle of them.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(606);
    let mut psis = Vec::new();
    for i in 0..210 {
        let psi = generate::random_supermodular_k3(&mut rng);
        let rep = construct_k3(&psi, 1e-9).map_err(|e| format!("{i}: {e}"))?;
        for x in 0..8 {
            let labels = [x >> 2 & 1, x >> 1 & 1, x & 1];
            let got = rep.evaluate(&labels);
            ensure((got - psi.table()[x]).abs() <= 1e-9, || {
                format!("{i}: setting {x} gives {got}, table {}", psi.table()[x])
            })?;
        }
        ensure(rep.min_higher_weight().unwrap() >= 0.0, || format!("{i}: negative weight"))?;
        psis.push((psi, rep));
    }
    // Triangle of order-3 scopes on six variables.
    let scopes = [[0usize, 1, 2], [2, 3, 4], [4, 5, 0]];
    for (t, chunk) in psis.chunks(3).enumerate() {
        let mut pots = Vec::new();
        let mut constant = 0.0;
        for (scope, (_, rep)) in scopes.iter().zip(chunk) {
            let (p, c) = rep.to_potentials(scope);
            pots.extend(p);
            constant += c;
        }
        let model = Model::from_parts(Model::<f64>::binary_variables(6), pots).map_err(|e| e.to_string())?;
        let nmrf = build_nmrf(&model).prune(1e-9);
        ensure(nmrf.two_coloring().is_some(), || format!("triangle {t}: NMRF not bipartite"))?;
        for x in 0..64usize {
            let labels: Vec<usize> = (0..6).map(|v| x >> (5 - v) & 1).collect();
            let direct: f64 = scopes
                .iter()
                .zip(chunk)
                .map(|(s, (psi, _))| psi.table()[labels[s[0]] << 2 | labels[s[1]] << 1 | labels[s[2]]])
                .sum();
            ensure((model.energy(&labels) + constant - direct).abs() <= 1e-9, || {
                format!("triangle {t}: energies differ at {labels:?}")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} potentials, {} triangles; {:.2?}", psis.len(), psis.len() / 3, start.elapsed()))
}

/// The order-4 counterexample and non-supermodular rejection.
fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut table = vec![0.0; 16];
    table[0] = 2.0;
    for b in 0..4 {
        table[1 << b] = 1.0;
    }
    let psi = HighOrderPotential::anonymous(table).unwrap();
    let projections = psi.projections();
    ensure(projections.len() == 24 && projections.iter().all(|p| p.value >= 0.0), || {
        "footnote table has a negative projection".into()
    })?;
    ensure(psi.alpha() == -2.0, || format!("alpha = {}", psi.alpha()))?;
    let verdict = representation_feasible(&psi, 0.0).map_err(|e| e.to_string())?;
    ensure(
        verdict == Feasibility::Infeasible(Infeasibility::NegativeAlpha(-2.0)),
        || format!("footnote table verdict {verdict:?}"),
    )?;
    let mut rng = seeded(707);
    for i in 0..60 {
        let k = 2 + i % 3;
        let psi = generate::random_non_supermodular(&mut rng, k);
        match representation_feasible(&psi, 0.0).map_err(|e| e.to_string())? {
            Feasibility::Infeasible(Infeasibility::NotSupermodular(p)) => {
                let again = psi.supermodularity(p.i, p.j, &p.rest).unwrap();
                ensure(p.value < 0.0 && again == p.value, || format!("{i}: bad witness {p:?}"))?;
            }
            other => return Err(format!("{i}: non-supermodular order {k} reported {other:?}")),
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("alpha -2, infeasible; 60 non-supermodular rejected; {:.2?}", start.elapsed()))
}

/// Three MWSS solvers agree.
fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(808);
    let mut bip = 0;
    for i in 0..600 {
        let n = rng.random_range(1..=24);
        let p = rng.random_range(0.05..0.6);
        let (g, side) = if i % 2 == 0 {
            let (g, side) = generate::random_bipartite_graph(&mut rng, n, p, 20);
            (g, Some(side))
        } else {
            (generate::random_weighted_graph(&mut rng, n, p, 20), None)
        };
        let brute = brute_force_mwss(&g).map_err(|e| e.to_string())?;
        let bnb = mwss_branch_bound(&g, DEFAULT_BNB_CAP).map_err(|e| e.to_string())?;
        ensure(g.is_stable(&bnb.nodes) && bnb.weight == brute.weight, || {
            format!("graph {i}: bnb {} vs brute {}", bnb.weight, brute.weight)
        })?;
        if let Some(side) = side {
            let b = mwss_bipartite(&g, &side).map_err(|e| e.to_string())?;
            ensure(g.is_stable(&b.nodes) && b.weight == brute.weight, || {
                format!("graph {i}: bipartite {} vs brute {}", b.weight, brute.weight)
            })?;
            bip += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("600 graphs ({bip} bipartite); {:.2?}", start.elapsed()))
}

/// Perfection checker on known graphs and on random compiled NMRFs.
fn criterion_9() -> Outcome {
    let start = Instant::now();
    let c5 = PlainGraph::cycle(5);
    let c7 = PlainGraph::cycle(7);
    let c7bar = c7.complement();
    for (name, g) in [("C5", &c5), ("C7", &c7)] {
        match is_perfect_small(g, 24).map_err(|e| e.to_string())? {
            PerfectionVerdict::OddHole(h) => ensure(is_induced_cycle(g, &h) && h.len() % 2 == 1, || {
                format!("{name}: bad witness {h:?}")
            })?,
            v => return Err(format!("{name} reported {v:?}")),
        }
    }
    match is_perfect_small(&c7bar, 24).map_err(|e| e.to_string())? {
        PerfectionVerdict::OddAntihole(a) => ensure(is_induced_cycle(&c7bar.complement(), &a) && a.len() == 7, || {
            format!("complement of C7: bad witness {a:?}")
        })?,
        v => return Err(format!("complement of C7 reported {v:?}")),
    }
    let mut rng = seeded(909);
    for n in 1..=10 {
        ensure(is_perfect_small(&PlainGraph::complete(n), 24).unwrap().is_perfect(), || {
            format!("K{n} rejected")
        })?;
        for _ in 0..5 {
            let (g, _) = generate::random_bipartite_graph(&mut rng, n, 0.5, 1);
            ensure(is_perfect_small(&g.graph, 24).unwrap().is_perfect(), || {
                format!("bipartite graph on {n} rejected")
            })?;
        }
    }
    let (mut compared, mut imperfect) = (0, 0);
    while compared < 150 {
        let n = rng.random_range(3..=8);
        let g = generate::random_signed_topology(&mut rng, n, 0.5);
        let model = generate::model_for_topology(&mut rng, &g, true);
        let nmrf = compile_binary_pairwise(&model, &random_plan(&mut rng, &g), 1e-9).map_err(|e| e.to_string())?;
        if nmrf.len() > 20 {
            continue;
        }
        let fast = binary_pairwise_perfection(&nmrf, 24).map_err(|e| e.to_string())?;
        let full = is_perfect_small(&PlainGraph::from(&nmrf), 24).map_err(|e| e.to_string())?;
        ensure(fast.is_perfect() == full.is_perfect(), || {
            format!("disagreement: {fast:?} vs {full:?}")
        })?;
        imperfect += usize::from(!full.is_perfect());
        compared += 1;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "known graphs ok; {compared} NMRFs agree ({imperfect} imperfect); {:.2?}",
        start.elapsed()
    ))
}

/// Classification time grows linearly in the edge count.
fn criterion_10() -> Outcome {
    let mut rng = seeded(1010);
    let mut per_edge = Vec::new();
    let mut big = Duration::ZERO;
    for edges in [1_000usize, 10_000, 100_000] {
        let model = generate::block_chain(&mut rng, edges);
        let reps = (300_000 / edges).max(3);
        let mut best = Duration::MAX;
        for _ in 0..reps {
            let t = Instant::now();
            let report = classify_model(&model, 1e-9).map_err(|e| e.to_string())?;
            let elapsed = t.elapsed();
            ensure(report.tractable, || "block chain classified intractable".into())?;
            best = best.min(elapsed);
        }
        per_edge.push(best.as_secs_f64() / edges as f64);
        big = best;
    }
    let max = per_edge.iter().cloned().fold(f64::MIN, f64::max);
    let min = per_edge.iter().cloned().fold(f64::MAX, f64::min);
    let ns: Vec<String> = per_edge.iter().map(|t| format!("{:.0}ns", t * 1e9)).collect();
    ensure(max / min <= 3.0, || format!("per-edge times {ns:?} spread {:.2}x", max / min))?;
    within(big, Duration::from_secs(1))?;
    Ok(format!("per-edge {ns:?} (spread {:.2}x); 1e5 edges in {big:.2?}", max / min))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 oracle equivalence on tractable models", criterion_1),
        ("2 B_R compiles to bipartite NMRF", criterion_2),
        ("3 intractable witnesses are odd holes", criterion_3),
        ("4 exhaustive 2-connected signed graphs", criterion_4),
        ("5 cycle-to-hole parity", criterion_5),
        ("6 order-3 construction", criterion_6),
        ("7 order-4 counterexample", criterion_7),
        ("8 MWSS solver cross-validation", criterion_8),
        ("9 perfection checker sanity", criterion_9),
        ("10 linear-time classification", criterion_10),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  criterion {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
