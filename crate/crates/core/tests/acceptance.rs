//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use eqcolor::algorithm1::{run_algorithm1, InitialColoring};
use eqcolor::balanced::balanced_mono_prob;
use eqcolor::bounds::{edge_threshold, lemma_bound, LemmaBound};
use eqcolor::chain::{
    chain_candidate_counts, extract_chain, validate_chain, CandidateKind, ChainKind, ChainRecord,
    Failure, DEFAULT_CHAIN_BUDGET,
};
use eqcolor::coloring::{equitable_targets, Color, Coloring};
use eqcolor::experiments::{
    exact_c0_event_prob, mc_estimate, C0Event, McParams, Quantity, DEFAULT_EXACT_BUDGET,
};
use eqcolor::hypergraph::{all_subsets, binomial_u128, Hypergraph};
use eqcolor::interval::{choose_p, sample_weights, IntervalPartition, Slot, WeightAssignment};
use eqcolor::oracle::{brute_force_equitable, DEFAULT_ENUMERATION_BUDGET};
use eqcolor::rebalance::{
    apply_recolor, excess_shortage, find_dangerous_edges, sample_candidate_sets,
    select_recolor_sets,
};
use eqcolor::seed;
use eqcolor::solver::{solve_equitable, SolveConfig};

fn report(n: u32, pass: bool, detail: String) {
    println!(
        "criterion {n:>2}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Independent properness check.
fn proper(h: &Hypergraph, colors: &[Color]) -> bool {
    h.edges()
        .iter()
        .all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
}

fn sizes(colors: &[Color], r: usize) -> Vec<usize> {
    let mut s = vec![0; r];
    for &c in colors {
        s[c as usize - 1] += 1;
    }
    s
}

#[test]
fn criterion_01_balanced_formula_matches_enumeration() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 1..=8usize {
        for r in [2usize, 4].into_iter().filter(|r| m % r == 0) {
            // Enumerate every r^m coloring, keep the balanced ones.
            let mut balanced = 0u64;
            let mut mono = vec![0u64; m + 1];
            let mut digits = vec![0usize; m];
            for code in 0..r.pow(m as u32) {
                let mut x = code;
                for d in digits.iter_mut() {
                    *d = x % r;
                    x /= r;
                }
                let mut count = vec![0; r];
                for &d in &digits {
                    count[d] += 1;
                }
                if count.iter().any(|&c| c != m / r) {
                    continue;
                }
                balanced += 1;
                // Fixed edge {0, .., n-1}: monochromatic for every n up to
                // the length of the initial run of equal colors.
                let run = digits.iter().take_while(|&&d| d == digits[0]).count();
                for (n, slot) in mono.iter_mut().enumerate().skip(1) {
                    if n <= run {
                        *slot += 1;
                    }
                }
            }
            for (n, &count) in mono.iter().enumerate().skip(1) {
                let want = BigRational::new(BigInt::from(count), BigInt::from(balanced));
                let got = balanced_mono_prob(m, n, r).unwrap().exact;
                checked += 1;
                if got != want {
                    bad.push((m, n, r, got, want));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        bad.is_empty() && secs < 10.0,
        format!("{checked} cases, {} mismatches, {secs:.2}s", bad.len()),
    );
    assert!(bad.is_empty(), "{bad:?}");
    assert!(secs < 10.0);
}

fn random_instance(
    rng: &mut impl Rng,
    n_choices: &[usize],
    max_m: usize,
    r_choices: &[usize],
) -> (Hypergraph, usize, f64) {
    let n = n_choices[rng.gen_range(0..n_choices.len())];
    let r = r_choices[rng.gen_range(0..r_choices.len())];
    let m = rng.gen_range(n..=max_m);
    let cap = binomial_u128(m, n).min(4 * m as u128) as usize;
    let e = rng.gen_range(0..=cap);
    let h = Hypergraph::generate_random(m, n, e, rng.gen()).unwrap();
    // Half the runs use the standard width, half a wider one so that the
    // small intervals see many deflections.
    let p = if rng.gen_bool(0.5) {
        choose_p(n, r).unwrap()
    } else {
        rng.gen_range(0.05..0.6)
    };
    (h, r, p)
}

#[test]
fn criterion_02_algorithm1_is_deterministic() {
    let mut rng = seed::rng(2);
    let mut same = 0;
    for _ in 0..100 {
        let (h, r, p) = random_instance(&mut rng, &[2, 3, 4], 30, &[2, 3, 4]);
        let part = IntervalPartition::new(p, r).unwrap();
        let s: u64 = rng.gen();
        let a = run_algorithm1(&h, &part, &sample_weights(h.num_vertices(), s)).unwrap();
        let b = run_algorithm1(&h, &part, &sample_weights(h.num_vertices(), s)).unwrap();
        let (ja, jb) = (
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
        );
        if a == b && ja == jb {
            same += 1;
        }
    }
    report(2, same == 100, format!("{same}/100 identical"));
    assert_eq!(same, 100);
}

/// Recomputes `Z` and `X` from the weights and colors alone.
fn recount(
    part: &IntervalPartition,
    w: &WeightAssignment,
    colors: &[Color],
    r: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut z = vec![0; r];
    let mut x = vec![0; r - 1];
    for (v, &c) in colors.iter().enumerate() {
        let x_v = w.weight(v);
        let (a, b) = ((1.0 - part.p()) / r as f64, part.p() / (r as f64 - 1.0));
        // Position within the repeating block of length a + b.
        let block = ((x_v / (a + b)).floor() as usize).min(r - 1);
        let offset = x_v - block as f64 * (a + b);
        let i = block + 1;
        z[i - 1] += 1;
        if offset >= a && i < r && c as usize == i + 1 {
            x[i - 1] += 1;
        }
    }
    (z, x)
}

/// Structural check of an ordered or improper chain, written against the
/// definitions rather than the library validator.
fn check_chain(
    h: &Hypergraph,
    part: &IntervalPartition,
    w: &WeightAssignment,
    colors: &[Color],
    rec: &ChainRecord,
) -> Result<(), String> {
    let k = rec.edges.len();
    let i = rec.color as usize;
    let edges: Vec<&[usize]> = rec.edges.iter().map(|&e| h.edge(e)).collect();
    for a in 0..k {
        for b in a + 1..k {
            let common: Vec<usize> = edges[a]
                .iter()
                .copied()
                .filter(|v| edges[b].contains(v))
                .collect();
            if b == a + 1 {
                if common != [rec.links[a].v] {
                    return Err(format!("C{} and C{} meet in {common:?}", a + 1, b + 1));
                }
            } else if !common.is_empty() {
                return Err(format!("C{} and C{} are not disjoint", a + 1, b + 1));
            }
        }
    }
    for (j, link) in rec.links.iter().enumerate() {
        let level = i - k + j + 1;
        if part.locate(link.x) != Ok(Slot::Small(level)) {
            return Err(format!("link {} not in small interval {level}", link.v));
        }
        let heaviest = edges[j].iter().all(|&u| w.weight(u) <= link.x);
        let lightest = edges[j + 1].iter().all(|&u| w.weight(u) >= link.x);
        if !heaviest || !lightest {
            return Err(format!(
                "link {} is not last in C{} and first in C{}",
                link.v,
                j + 1,
                j + 2
            ));
        }
        if colors[link.v] as usize != level + 1
            || edges[j]
                .iter()
                .any(|&u| u != link.v && colors[u] as usize != level)
        {
            return Err(format!("colors around link {}", link.v));
        }
    }
    let last = edges[k - 1];
    match rec.kind {
        ChainKind::Ordered => {
            if last.iter().any(|&u| colors[u] as usize != i) {
                return Err("last edge not monochromatic".into());
            }
        }
        ChainKind::Improper => {
            let t = rec.terminal_vertex.ok_or("missing terminal vertex")?;
            if colors[t] as usize != i + 1
                || last.iter().any(|&u| u != t && colors[u] as usize != i)
            {
                return Err("improper chain colors".into());
            }
        }
        ChainKind::Complex => return Err("unexpected complex chain".into()),
    }
    Ok(())
}

struct Run {
    h: Hypergraph,
    r: usize,
    part: IntervalPartition,
    w: WeightAssignment,
    c0: InitialColoring,
}

fn identity_runs() -> impl Iterator<Item = Run> {
    let mut rng = seed::rng(3);
    (0..10_000).map(move |_| {
        let (h, r, p) = random_instance(&mut rng, &[3, 4, 5], 30, &[2, 3]);
        let part = IntervalPartition::new(p, r).unwrap();
        let w = sample_weights(h.num_vertices(), rng.gen());
        let c0 = run_algorithm1(&h, &part, &w).unwrap();
        Run { h, r, part, w, c0 }
    })
}

#[test]
fn criterion_03_class_size_identity() {
    let mut runs = 0;
    let mut violations = 0;
    let mut deflections = 0;
    for Run { r, part, w, c0, .. } in identity_runs() {
        runs += 1;
        let colors = c0.coloring.to_vec();
        let (z, x) = recount(&part, &w, &colors, r);
        deflections += x.iter().sum::<usize>();
        let s = sizes(&colors, r);
        let xi = |i: usize| if i == 0 || i == r { 0 } else { x[i - 1] };
        let ok = (1..=r).all(|i| s[i - 1] + xi(i) == z[i - 1] + xi(i - 1))
            && z == c0.z_counts
            && x == c0.x_counts;
        if !ok {
            violations += 1;
        }
    }
    report(
        3,
        violations == 0,
        format!("{runs} runs, {deflections} deflections, {violations} violations"),
    );
    assert_eq!(violations, 0);
}

#[test]
fn criterion_04_every_failure_yields_a_valid_chain() {
    let mut ordered = 0;
    let mut improper = 0;
    let mut longest = 0;
    let mut failures = Vec::new();
    for Run { h, part, w, c0, .. } in identity_runs() {
        let colors = c0.coloring.to_vec();
        let mut events: Vec<Failure> = c0
            .coloring
            .monochromatic_edges(&h)
            .into_iter()
            .map(|(edge, color)| Failure::MonoEdge { edge, color })
            .collect();
        for v in 0..h.num_vertices() {
            if let (Slot::Small(j), true) = (c0.slots[v], c0.is_deflected(v)) {
                events.push(Failure::Deflected {
                    vertex: v,
                    color: j as Color,
                });
            }
        }
        for event in events {
            let outcome = extract_chain(&h, &part, &w, &c0, event)
                .map_err(|e| e.to_string())
                .and_then(|rec| {
                    validate_chain(&h, &part, &w, &c0, &rec, None)?;
                    check_chain(&h, &part, &w, &colors, &rec)?;
                    Ok(rec)
                });
            match outcome {
                Ok(rec) => {
                    longest = longest.max(rec.len());
                    match rec.kind {
                        ChainKind::Ordered => ordered += 1,
                        _ => improper += 1,
                    }
                }
                Err(e) => failures.push(format!("{event:?}: {e}")),
            }
        }
    }
    report(
        4,
        failures.is_empty(),
        format!(
            "{ordered} ordered, {improper} improper, longest {longest}, {} failures",
            failures.len()
        ),
    );
    assert!(
        failures.is_empty(),
        "{:?}",
        &failures[..failures.len().min(5)]
    );
}

/// Visits every subset of `0..len` of size at most `max` that contains 0.
fn subsets_with_first(len: usize, max: usize, f: &mut impl FnMut(&[usize])) {
    fn go(len: usize, max: usize, next: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for x in next..len {
            cur.push(x);
            go(len, max, x + 1, cur, f);
            cur.pop();
        }
    }
    go(len, max, 1, &mut vec![0], f);
}

#[test]
fn criterion_05_chain_candidate_counts() {
    // Adding isolated vertices changes no count, so every instance with
    // m <= 9 appears among the 9-vertex ones. Relabeling preserves all
    // counts as well, so it suffices to take edge sets containing {0, 1, 2}.
    let start = Instant::now();
    let triples = all_subsets(9, 3);
    let mut graphs = 0u64;
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    subsets_with_first(triples.len(), 5, &mut |idx| {
        graphs += 1;
        let edges: Vec<Vec<usize>> = idx.iter().map(|&i| triples[i].clone()).collect();
        let h = Hypergraph::new(9, 3, edges).unwrap();
        let e = h.num_edges();
        let ordered =
            chain_candidate_counts(&h, e, CandidateKind::Ordered, DEFAULT_CHAIN_BUDGET).unwrap();
        for (k, &count) in ordered.iter().enumerate().map(|(j, c)| (j + 1, c)) {
            let bound = 2 * binomial_u128(e, k);
            max_ratio = max_ratio.max(count as f64 / bound as f64);
            if count as u128 > bound {
                violations.push(format!("{idx:?} ordered k={k}: {count} > {bound}"));
            }
        }
        for last in 0..e {
            let complex = chain_candidate_counts(
                &h,
                e,
                CandidateKind::Complex { last_edge: last },
                DEFAULT_CHAIN_BUDGET,
            )
            .unwrap();
            for (k, &count) in complex.iter().enumerate().map(|(j, c)| (j + 1, c)).skip(1) {
                let bound = 2 * binomial_u128(e, k - 1);
                if count as u128 > bound {
                    violations.push(format!(
                        "{idx:?} complex k={k} last={last}: {count} > {bound}"
                    ));
                }
            }
        }
    });
    let secs = start.elapsed().as_secs_f64();
    let pass = violations.is_empty() && secs < 120.0;
    report(
        5,
        pass,
        format!(
            "{graphs} edge sets, max count/bound {max_ratio:.3}, {} violations, {secs:.1}s",
            violations.len()
        ),
    );
    assert!(
        violations.is_empty(),
        "{:?}",
        &violations[..violations.len().min(5)]
    );
    assert!(secs < 120.0);
}

/// Simple graphs on `m` vertices up to isomorphism, as edge bitmasks over
/// the pairs `(a, b)`, `a < b`, in lexicographic order.
fn graph_classes(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn canonical(m: usize, adj: &[u32]) -> u64 {
        let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
        let key = |v: usize| {
            let mut nd: Vec<u32> = (0..m)
                .filter(|&u| adj[v] >> u & 1 == 1)
                .map(|u| deg[u])
                .collect();
            nd.sort_unstable();
            (deg[v], nd)
        };
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&v| key(v));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for &v in &order {
            match cells.last_mut() {
                Some(c) if key(c[0]) == key(v) => c.push(v),
                _ => cells.push(vec![v]),
            }
        }
        let mut best = u64::MAX;
        let mut perm = Vec::with_capacity(m);
        fn go(
            cells: &mut [Vec<usize>],
            ci: usize,
            perm: &mut Vec<usize>,
            adj: &[u32],
            best: &mut u64,
        ) {
            if ci == cells.len() {
                // perm[new] = old
                let m = perm.len();
                let mut code = 0u64;
                let mut bit = 0;
                for a in 0..m {
                    for b in a + 1..m {
                        if adj[perm[a]] >> perm[b] & 1 == 1 {
                            code |= 1 << bit;
                        }
                        bit += 1;
                    }
                }
                *best = (*best).min(code);
                return;
            }
            let cell = cells[ci].clone();
            permute(0, &mut cell.clone(), &mut |p| {
                let base = perm.len();
                perm.extend_from_slice(p);
                go(cells, ci + 1, perm, adj, best);
                perm.truncate(base);
            });
        }
        fn permute(i: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
            if i == cur.len() {
                f(cur);
                return;
            }
            for j in i..cur.len() {
                cur.swap(i, j);
                permute(i + 1, cur, f);
                cur.swap(i, j);
            }
        }
        go(&mut cells, 0, &mut perm, adj, &mut best);
        best
    }

    let mut classes: Vec<Vec<u32>> = vec![vec![0]];
    for size in 2..=m {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &classes {
            for nbrs in 0u32..(1 << (size - 1)) {
                let mut adj = g.clone();
                adj.push(nbrs);
                for (u, a) in adj.iter_mut().enumerate().take(size - 1) {
                    *a |= (nbrs >> u & 1) << (size - 1);
                }
                if seen.insert(canonical(size, &adj)) {
                    next.push(adj);
                }
            }
        }
        classes = next;
    }
    classes
        .into_iter()
        .map(|adj| {
            let mut edges = Vec::new();
            for (a, row) in adj.iter().enumerate() {
                edges.extend((a + 1..m).filter(|&b| row >> b & 1 == 1).map(|b| (a, b)));
            }
            edges
        })
        .collect()
}

#[test]
fn criterion_06_solver_sound_and_complete_at_desk_scale() {
    let start = Instant::now();
    let mut instances: Vec<Hypergraph> = Vec::new();
    let known = [1, 2, 4, 11, 34, 156, 1044, 12346];
    for m in 1..=8 {
        let classes = graph_classes(m);
        assert_eq!(classes.len(), known[m - 1], "graph classes on {m} vertices");
        for edges in classes {
            let edges = edges.into_iter().map(|(a, b)| vec![a, b]).collect();
            instances.push(Hypergraph::new(m, 2, edges).unwrap());
        }
    }
    let mut rng = seed::rng(6);
    for _ in 0..1500 {
        let m = rng.gen_range(3..=9);
        let e = rng.gen_range(1..=binomial_u128(m, 3).min(20) as usize);
        instances.push(Hypergraph::generate_random(m, 3, e, rng.gen()).unwrap());
    }

    let mut feasible = 0u64;
    let mut solved = 0u64;
    let mut invalid = 0u64;
    let mut runs = 0u64;
    let mut unsolved = Vec::new();
    for (idx, h) in instances.iter().enumerate() {
        for r in [2usize, 3] {
            runs += 1;
            let oracle = brute_force_equitable(h, r, DEFAULT_ENUMERATION_BUDGET).unwrap();
            // Infeasible instances cannot succeed; a short run is enough to
            // exercise the soundness of the verification.
            let cfg = SolveConfig {
                seed: idx as u64,
                max_restarts: if oracle.is_some() { 10_000 } else { 100 },
                ..SolveConfig::default()
            };
            let rep = solve_equitable(h, r, &cfg).unwrap();
            if let Some(c) = rep.coloring() {
                let colors = c.to_vec();
                let s = sizes(&colors, r);
                let balanced = s.iter().max().unwrap() - s.iter().min().unwrap() <= 1;
                if !proper(h, &colors) || !balanced || oracle.is_none() {
                    invalid += 1;
                }
            }
            if oracle.is_some() {
                feasible += 1;
                if rep.is_success() {
                    solved += 1;
                } else {
                    unsolved.push((h.to_text(), r));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let rate = solved as f64 / feasible as f64;
    let pass = invalid == 0 && rate >= 0.99 && secs < 300.0;
    report(
        6,
        pass,
        format!("{runs} runs, {feasible} feasible, {solved} solved ({:.4}), {invalid} invalid, {secs:.1}s", rate),
    );
    assert_eq!(invalid, 0);
    assert!(
        rate >= 0.99,
        "unsolved: {:?}",
        &unsolved[..unsolved.len().min(5)]
    );
    assert!(secs < 300.0);
}

#[test]
fn criterion_07_monte_carlo_matches_exact_oracle() {
    let start = Instant::now();
    let pairs = |m: usize, list: &[(usize, usize)]| {
        Hypergraph::new(m, 2, list.iter().map(|&(a, b)| vec![a, b]).collect()).unwrap()
    };
    let cases: Vec<(&str, Hypergraph, usize, C0Event)> = vec![
        (
            "6-cycle",
            pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]),
            2,
            C0Event::MonoEdgeExists,
        ),
        (
            "K4",
            pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            2,
            C0Event::Deflected(0),
        ),
        (
            "3-uniform",
            Hypergraph::new(
                6,
                3,
                vec![vec![0, 1, 2], vec![2, 3, 4], vec![1, 4, 5], vec![0, 3, 5]],
            )
            .unwrap(),
            2,
            C0Event::MonoEdgeExists,
        ),
        (
            "6-path r=3",
            pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
            3,
            C0Event::MonoEdgeExists,
        ),
        (
            "8-path chain",
            pairs(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]),
            2,
            C0Event::OrderedChain {
                edges: vec![0, 1],
                color: 2,
            },
        ),
    ];
    let mut lines = Vec::new();
    let mut all = true;
    for (name, h, r, event) in cases {
        let p = choose_p(h.uniformity(), r).unwrap();
        let exact = exact_c0_event_prob(&h, r, p, event.clone(), DEFAULT_EXACT_BUDGET).unwrap();
        let q = match event {
            C0Event::MonoEdgeExists => Quantity::MonoEdgeInC0,
            C0Event::Deflected(v) => Quantity::DeflectedVertex(v),
            C0Event::OrderedChain { edges, color } => Quantity::ChainEvent { edges, color },
            _ => unreachable!(),
        };
        let rep = mc_estimate(&q, &h, r, &McParams::default(), 1_000_000, 7).unwrap();
        let ok = rep.covers(exact);
        all &= ok;
        lines.push(format!(
            "{name}: exact {exact:.5} mc {:.5}±{:.5} {}",
            rep.estimate,
            rep.half_width,
            if ok { "ok" } else { "MISS" }
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        7,
        all && secs < 120.0,
        format!("{}; {secs:.1}s", lines.join("; ")),
    );
    assert!(all, "{lines:?}");
    assert!(secs < 120.0);
}

#[test]
fn criterion_08_rebalance_keeps_coloring_proper() {
    let mut rng = seed::rng(8);
    let mut scenarios = 0;
    let mut selected = 0;
    let mut infeasible = 0;
    let mut dangerous_total = 0;
    let mut violations = Vec::new();
    while scenarios < 1000 {
        let (h, r, p) = random_instance(&mut rng, &[2, 3, 4], 30, &[2, 3]);
        let m = h.num_vertices();
        let part = IntervalPartition::new(p, r).unwrap();
        let w = sample_weights(m, rng.gen());
        let c0 = run_algorithm1(&h, &part, &w).unwrap().coloring;
        let (ex, sh) = excess_shortage(&c0, m, r);
        if !proper(&h, &c0.to_vec())
            || sh[..r - 1].iter().any(|&s| s > 0)
            || ex.iter().all(|&e| e == 0)
        {
            continue;
        }
        scenarios += 1;
        let p_tilde = rng.gen_range(0.2..=1.0);
        let sets = sample_candidate_sets(&h, &part, &w, p_tilde, rng.gen()).unwrap();
        let dangerous = find_dangerous_edges(&h, &c0, &sets);
        dangerous_total += dangerous.len();
        let Ok(wsets) = select_recolor_sets(&sets, &dangerous, &ex, &w) else {
            infeasible += 1;
            continue;
        };
        selected += 1;
        let after: Coloring = apply_recolor(&c0, &wsets).unwrap();
        let colors = after.to_vec();
        if !proper(&h, &colors) {
            violations.push(format!("improper after recolor: {}", h.to_text()));
        }
        if sizes(&colors, r) != equitable_targets(m, r) {
            violations.push(format!("sizes {:?} miss targets", sizes(&colors, r)));
        }
    }
    report(
        8,
        violations.is_empty() && selected > 0,
        format!("{scenarios} scenarios, {selected} selected, {infeasible} infeasible, {dangerous_total} dangerous edges, {} violations", violations.len()),
    );
    assert!(
        violations.is_empty(),
        "{:?}",
        &violations[..violations.len().min(5)]
    );
    assert!(selected > 0);
}

#[test]
fn criterion_09_bound_calculators() {
    use eqcolor::rebalance::{compute_p_tilde, compute_q};
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let mut checks: Vec<(&str, f64, f64, f64)> = Vec::new();
    // The paper states this constant directly.
    checks.push((
        "MonoEdgeProb",
        lemma_bound(LemmaBound::MonoEdgeProb, 100, 2),
        0.04 * std::f64::consts::E,
        1e-12,
    ));
    // Reference values computed with 50-digit arithmetic.
    let p = choose_p(100, 2).unwrap();
    checks.push(("choose_p", p, 0.015_389_952_800_900_951, 1e-9));
    checks.push((
        "edge_threshold",
        edge_threshold(100, 2).value,
        2.953_566_330_265_165_5e28,
        1e-9,
    ));
    let q = compute_q(10_000, 100, 2, p);
    checks.push(("compute_q", q, 534.043_070_989_724_1, 1e-9));
    checks.push((
        "compute_p_tilde",
        compute_p_tilde(q, 10_000, 2, p).unwrap(),
        0.108_478_086_834_256_04,
        1e-9,
    ));
    checks.push((
        "OrderedChainProb k=1",
        lemma_bound(LemmaBound::OrderedChainProb { k: 1 }, 100, 2),
        3.385_737_404_144_304e-31,
        1e-9,
    ));
    checks.push((
        "OrderedChainProb k=2",
        lemma_bound(LemmaBound::OrderedChainProb { k: 2 }, 100, 2),
        1.146_321_776_982_181e-61,
        1e-9,
    ));
    checks.push((
        "ExpectedX",
        lemma_bound(LemmaBound::ExpectedX, 100, 2),
        1.180_534_798_357_645,
        1e-9,
    ));
    checks.push((
        "DangerousCount",
        lemma_bound(LemmaBound::DangerousCount, 100, 2),
        10.857_362_047_581_296,
        1e-9,
    ));
    let failed: Vec<String> = checks
        .iter()
        .filter(|(_, got, want, tol)| {
            if *tol == 1e-12 {
                (got - want).abs() > *tol
            } else {
                rel(*got, *want) > *tol
            }
        })
        .map(|(name, got, want, _)| format!("{name}: {got:e} vs {want:e}"))
        .collect();
    report(
        9,
        failed.is_empty(),
        format!("{} values, {} off", checks.len(), failed.len()),
    );
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn criterion_10_partition_is_sound() {
    let mut rng = seed::rng(10);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let p = rng.gen_range(1e-9..1.0);
        let r = rng.gen_range(2..=50);
        let part = IntervalPartition::new(p, r).unwrap();
        let slots = part.slots();
        let total: f64 = slots.iter().map(|&s| part.length(s)).sum();
        if (total - 1.0).abs() > 1e-12 {
            bad.push(format!("p={p} r={r}: total length {total}"));
        }
        for s in slots {
            let (lo, hi) = part.bounds(s);
            let mid = lo + (hi - lo) / 2.0;
            if part.locate(mid) != Ok(s) {
                bad.push(format!(
                    "p={p} r={r}: midpoint of {s:?} located in {:?}",
                    part.locate(mid)
                ));
            }
        }
    }
    report(
        10,
        bad.is_empty(),
        format!("1000 partitions, {} failures", bad.len()),
    );
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(5)]);
}
