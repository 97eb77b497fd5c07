//! Random graphs, brute-force oracles and property checks shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soficov_core::covers::{self, Cover, KriegerRoute};
use soficov_core::graph::{self, LabeledGraph};
use soficov_core::{gprime, invariants, lang, EpSeq, Letter, Limits, Point, VertexSet};

pub fn lim() -> Limits {
    Limits::default()
}

pub fn fixtures() -> Vec<(&'static str, LabeledGraph)> {
    soficov_core::fixtures::ALL
        .iter()
        .map(|(n, t)| (*n, graph::parse_lg(t).unwrap()))
        .collect()
}

/// A trim right-resolving graph with at most `max_v` vertices and
/// `max_a` letters. Never empty.
pub fn random_graph(rng: &mut impl Rng, max_v: usize, max_a: usize) -> LabeledGraph {
    loop {
        let n = rng.gen_range(1..=max_v);
        let k = rng.gen_range(1..=max_a);
        let p = rng.gen_range(0.3..0.9);
        let mut edges = Vec::new();
        for s in 0..n {
            for a in 0..k {
                if rng.gen_bool(p) {
                    edges.push((format!("v{s}"), a.to_string(), format!("v{}", rng.gen_range(0..n))));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = LabeledGraph::from_edges(edges.iter().map(|(s, a, d)| (s.as_str(), a.as_str(), d.as_str()))).unwrap();
        let t = graph::trim(&g);
        if !t.is_empty() {
            return t;
        }
    }
}

pub fn random_graphs(seed: u64, count: usize) -> Vec<LabeledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, 6, 3)).collect()
}

/// All words over `k` letters of length `lo..=hi`.
pub fn all_words(k: usize, lo: usize, hi: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=hi {
        if len >= lo {
            out.extend(layer.iter().cloned());
        }
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| [w.as_slice(), &[a]].concat()))
            .collect();
    }
    out
}

/// `D^{u^∞}` as the limit of the decreasing sequence `V·u^n`.
pub fn tail_set_oracle(g: &LabeledGraph, u: &[Letter]) -> VertexSet {
    let mut s = g.full_set();
    loop {
        let next = g.image(&s, u);
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Every nonempty `D^{u^∞ w}` with `1 ≤ |u| ≤ left` and `|w| ≤ mid`.
pub fn dee_oracle(g: &LabeledGraph, left: usize, mid: usize) -> BTreeSet<VertexSet> {
    let k = g.alphabet().len();
    let mut layer: BTreeSet<VertexSet> = all_words(k, 1, left)
        .iter()
        .map(|u| tail_set_oracle(g, u))
        .filter(|s| !s.is_empty())
        .collect();
    let mut all = layer.clone();
    for _ in 0..mid {
        layer = layer
            .iter()
            .flat_map(|s| (0..k).map(move |a| g.step(s, a)))
            .filter(|s| !s.is_empty() && !all.contains(s))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// The fiber of `y` at `i`: vertices through which a path labeled `y` passes
/// at position `i`, read off a long finite window on either side.
pub fn fiber_oracle(g: &LabeledGraph, y: &Point, i: i64, reach: i64) -> VertexSet {
    let back = g.image(&g.full_set(), &y.window(i - reach, i));
    let fwd = g.preimage(&g.full_set(), &y.window(i, i + reach));
    back.intersection(&fwd)
}

/// The G″ graph computed from every nonempty subset, then trimmed.
pub fn double_subset_oracle(g: &LabeledGraph) -> LabeledGraph {
    let n = g.vertex_count();
    assert!(n <= 12);
    let mut edges = Vec::new();
    for bits in 1u32..(1 << n) {
        let f: VertexSet = (0..n).filter(|v| bits >> v & 1 == 1).collect();
        for a in 0..g.alphabet().len() {
            if f.iter().all(|v| g.successor(v, a).is_some()) {
                let t = g.step(&f, a);
                edges.push((g.format_set(&f), g.letter_name(a).to_string(), g.format_set(&t)));
            }
        }
    }
    if edges.is_empty() {
        return g.subgraph(&VertexSet::new(), |_| false);
    }
    let full = LabeledGraph::from_edges(edges.iter().map(|(s, a, d)| (s.as_str(), a.as_str(), d.as_str()))).unwrap();
    graph::trim(&full)
}

/// Words of length at most `n` readable from `v`.
pub fn words_from(g: &LabeledGraph, v: usize, n: usize) -> HashSet<Vec<Letter>> {
    let mut out = HashSet::new();
    let mut stack = vec![(v, Vec::new())];
    while let Some((x, w)) = stack.pop() {
        if w.len() < n {
            for &e in g.out_edges(x) {
                let e = g.edge(e);
                let mut w2 = w.clone();
                w2.push(e.label);
                stack.push((e.dst, w2));
            }
        }
        out.insert(w);
    }
    out
}

/// Vertices from which `v^∞` can be read, as the limit of `V·v^{-n}`.
pub fn viable_oracle(g: &LabeledGraph, v: &[Letter]) -> VertexSet {
    let mut s = g.full_set();
    loop {
        let next = g.preimage(&s, v);
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Whether `y` lies in the shift, by nonempty fibers on a long window.
pub fn in_shift_oracle(g: &LabeledGraph, y: &Point) -> bool {
    let reach = 4 * (g.vertex_count() as i64 + 2) * (y.left.len() + y.right.len() + 1) as i64;
    !fiber_oracle(g, y, 0, reach).is_empty()
}

/// Up to `want` distinct points `u^∞ . w v^∞` of the shift with
/// `|u|, |v| ≤ period` and `|w| ≤ mid`, short middles first.
pub fn shift_points_within(g: &LabeledGraph, want: usize, period: usize, max_mid: usize) -> Vec<Point> {
    let k = g.alphabet().len();
    let us: Vec<(Vec<Letter>, VertexSet)> = all_words(k, 1, period)
        .into_iter()
        .map(|u| {
            let d = tail_set_oracle(g, &u);
            (u, d)
        })
        .filter(|(_, d)| !d.is_empty())
        .collect();
    let vs: Vec<(Vec<Letter>, VertexSet)> = all_words(k, 1, period)
        .into_iter()
        .map(|v| {
            let w = viable_oracle(g, &v);
            (v, w)
        })
        .filter(|(_, w)| !w.is_empty())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mid in 0..=max_mid {
        for (u, d0) in &us {
            let mut layer = vec![(Vec::new(), d0.clone())];
            for _ in 0..mid {
                layer = layer
                    .iter()
                    .flat_map(|(w, d)| (0..k).map(move |a| ([w.as_slice(), &[a]].concat(), g.step(d, a))))
                    .filter(|(_, d)| !d.is_empty())
                    .collect();
            }
            for (w, d) in &layer {
                for (v, viable) in &vs {
                    if out.len() >= want {
                        return out;
                    }
                    if !d.intersects(viable) {
                        continue;
                    }
                    let y = EpSeq::point(u.clone(), w.clone(), v.clone()).unwrap().normalized();
                    if seen.insert(y.clone()) && in_shift_oracle(g, &y) {
                        out.push(y);
                    }
                }
            }
        }
    }
    out
}

pub fn shift_points(g: &LabeledGraph, want: usize) -> Vec<Point> {
    shift_points_within(g, want, 5, 6)
}

// ---- property checks, each returning a description of the first failure ----

pub type Check = Result<(), String>;

pub fn check_regular_hereditary(g: &LabeledGraph) -> Check {
    let reg = covers::regular_vertices(g, &lim()).map_err(|e| e.to_string())?;
    if graph::hereditary_closure(g, &reg) != reg {
        return Err(format!("regular set {} not closed", g.format_set(&reg)));
    }
    Ok(())
}

pub fn check_route_agreement(g: &LabeledGraph) -> Check {
    let a = covers::krieger_cover(g, KriegerRoute::Merge, &lim()).map_err(|e| e.to_string())?;
    let b = covers::krieger_cover(g, KriegerRoute::RegularPart, &lim()).map_err(|e| e.to_string())?;
    match invariants::graphs_isomorphic(&a.graph, &b.graph).map_err(|e| e.to_string())? {
        Some(_) => Ok(()),
        None => Err(format!("routes differ:\n{}--\n{}", graph::to_lg(&a.graph), graph::to_lg(&b.graph))),
    }
}

pub fn check_krieger_separated(g: &LabeledGraph) -> Check {
    let k = covers::krieger_cover(g, KriegerRoute::Merge, &lim()).map_err(|e| e.to_string())?;
    if !lang::is_follower_separated(&k.graph).map_err(|e| e.to_string())? {
        return Err("Krieger cover not follower-separated".into());
    }
    if !covers::is_predecessor_separated(&k.graph, &lim()).map_err(|e| e.to_string())? {
        return Err("Krieger cover not predecessor-separated".into());
    }
    let reg = covers::regular_vertices(&k.graph, &lim()).map_err(|e| e.to_string())?;
    if reg.len() != k.graph.vertex_count() {
        return Err("Krieger cover has a non-regular vertex".into());
    }
    if !lang::language_equal(&k.graph, g).map_err(|e| e.to_string())? {
        return Err("Krieger cover presents another shift".into());
    }
    Ok(())
}

pub fn check_dee_closed(g: &LabeledGraph) -> Check {
    let d: HashSet<VertexSet> = lang::dee_family(g, &lim()).map_err(|e| e.to_string())?.into_iter().collect();
    for s in &d {
        for a in 0..g.alphabet().len() {
            let t = g.step(s, a);
            if !t.is_empty() && !d.contains(&t) {
                return Err(format!("[{}, {}] = {} missing", g.format_set(s), g.letter_name(a), g.format_set(&t)));
            }
        }
    }
    Ok(())
}

/// Step law, edge condition and section law of `β` on the given points.
pub fn check_beta_laws(g: &LabeledGraph, points: &[Point]) -> Check {
    let g2 = gprime::double_subset_graph(g, &lim()).map_err(|e| e.to_string())?;
    for y in points {
        let fp = gprime::beta(g, y).map_err(|e| format!("{y:?}: {e}"))?;
        let lo = fp.fibers.origin - 2 * fp.fibers.left.len() as i64 - 2;
        let hi = fp.fibers.mid_end() + 2 * fp.fibers.right.len() as i64 + 2;
        for i in lo..hi {
            let (f, a) = (fp.fibers.at(i), *y.at(i));
            if f.is_empty() || f.iter().any(|v| g.successor(v, a).is_none()) {
                return Err(format!("{y:?}: edge condition fails at {i}"));
            }
            if g.step(f, a) != *fp.fibers.at(i + 1) {
                return Err(format!("{y:?}: step law fails at {i}"));
            }
        }
        let path = fp.to_path(&g2).map_err(|e| e.to_string())?;
        path.validate(&g2.graph).map_err(|e| e.to_string())?;
        let back = path.labels(&g2.graph);
        if !back.same_sequence(y) {
            return Err(format!("{y:?}: labels of beta differ"));
        }
        let again = gprime::beta(g, &back).map_err(|e| e.to_string())?;
        if !again.fibers.same_sequence(&fp.fibers) {
            return Err(format!("{y:?}: beta of its own label differs"));
        }
    }
    Ok(())
}

/// `β` against the window oracle on the given points.
pub fn check_beta_oracle(g: &LabeledGraph, points: &[Point]) -> Check {
    for y in points {
        let fp = gprime::beta(g, y).map_err(|e| format!("{y:?}: {e}"))?;
        let reach = 4 * (g.vertex_count() as i64 + 2) * (y.left.len() + y.right.len() + 1) as i64;
        let lo = y.origin - 2 * y.left.len() as i64 - 1;
        let hi = y.mid_end() + 2 * y.right.len() as i64 + 1;
        for i in lo..hi {
            if *fp.fibers.at(i) != fiber_oracle(g, y, i, reach) {
                return Err(format!("{y:?}: fiber at {i} differs from oracle"));
            }
        }
    }
    Ok(())
}

/// `α` labels back to `y`, runs through the follower classes of the tails
/// and is a regular path of the Krieger cover.
pub fn check_alpha_section(g: &LabeledGraph, points: &[Point]) -> Check {
    let k = covers::krieger_cover(g, KriegerRoute::Merge, &lim()).map_err(|e| e.to_string())?;
    for y in points {
        let x = covers::alpha(&k, y).map_err(|e| format!("{y:?}: {e}"))?;
        x.validate(&k.graph).map_err(|e| e.to_string())?;
        if !x.labels(&k.graph).same_sequence(y) {
            return Err(format!("{y:?}: labels of alpha differ"));
        }
        if !covers::is_regular_path(&k.graph, &x).map_err(|e| e.to_string())? {
            return Err(format!("{y:?}: alpha is not a regular path"));
        }
        for i in y.origin..y.mid_end() + 2 * y.right.len() as i64 {
            let w = y.window(y.origin, i);
            let (_, v) = covers::follower_of_tail(&k, &y.left, &w).map_err(|e| e.to_string())?;
            if k.graph.edge(*x.at(i)).src != v {
                return Err(format!("{y:?}: vertex at {i} is not the class of the tail"));
            }
        }
    }
    Ok(())
}

/// `|V_G| ≤ |V_K|`, with equality exactly when `G ≅ K`, for regular
/// follower-separated right-resolving `g`. `Ok(false)` when `g` is out of
/// scope.
pub fn check_extremality(g: &LabeledGraph) -> Result<bool, String> {
    if !g.is_right_resolving() || !lang::is_follower_separated(g).map_err(|e| e.to_string())? {
        return Ok(false);
    }
    let reg = covers::regular_vertices(g, &lim()).map_err(|e| e.to_string())?;
    if reg.len() != g.vertex_count() {
        return Ok(false);
    }
    let k = covers::krieger_cover(g, KriegerRoute::Merge, &lim()).map_err(|e| e.to_string())?;
    let (n, m) = (g.vertex_count(), k.graph.vertex_count());
    let iso = invariants::graphs_isomorphic(g, &k.graph).map_err(|e| e.to_string())?.is_some();
    if n > m || (n == m) != iso {
        return Err(format!("|V_G| = {n}, |V_K| = {m}, isomorphic: {iso}"));
    }
    Ok(true)
}

/// `follower_includes` against inclusion of word sets up to length `n`.
pub fn check_inclusion_oracle(g: &LabeledGraph, n: usize) -> Check {
    let words: Vec<HashSet<Vec<Letter>>> = (0..g.vertex_count()).map(|v| words_from(g, v, n)).collect();
    for u in 0..g.vertex_count() {
        for v in 0..g.vertex_count() {
            let fast = lang::follower_includes(g, u, g, v).map_err(|e| e.to_string())?;
            if fast != words[u].is_subset(&words[v]) {
                return Err(format!("f({}) ⊆ f({}) disagrees", g.vertex_name(u), g.vertex_name(v)));
            }
        }
    }
    Ok(())
}

pub fn check_words_across_blocks(g: &LabeledGraph, n: usize) -> Check {
    let base = lang::words_up_to(g, n, &lim()).map_err(|e| e.to_string())?;
    let names = |h: &LabeledGraph, ws: &[Vec<Letter>]| -> Vec<String> {
        ws.iter().map(|w| w.iter().map(|&a| h.letter_name(a)).collect::<Vec<_>>().join(" ")).collect()
    };
    let want = names(g, &base);
    for b in 2..=3 {
        let h = graph::higher_block(g, b).map_err(|e| e.to_string())?;
        let got = names(&h, &lang::words_up_to(&h, n, &lim()).map_err(|e| e.to_string())?);
        if got != want {
            return Err(format!("words differ for the {b}-block presentation"));
        }
    }
    Ok(())
}

pub fn check_dee_oracle(g: &LabeledGraph) -> Check {
    let fast: BTreeSet<VertexSet> = lang::dee_family(g, &lim()).map_err(|e| e.to_string())?.into_iter().collect();
    let slow = dee_oracle(g, 6, 6);
    if fast != slow {
        let show = |s: &BTreeSet<VertexSet>| s.iter().map(|x| g.format_set(x)).collect::<Vec<_>>().join(" ");
        return Err(format!("{} vs oracle {}", show(&fast), show(&slow)));
    }
    Ok(())
}

pub fn check_double_subset_oracle(g: &LabeledGraph) -> Check {
    let fast = gprime::double_subset_graph(g, &lim()).map_err(|e| e.to_string())?;
    let slow = double_subset_oracle(g);
    if graph::to_lg(&fast.graph) != graph::to_lg(&slow) {
        return Err(format!("G'' differs:\n{}--\n{}", graph::to_lg(&fast.graph), graph::to_lg(&slow)));
    }
    Ok(())
}

/// Krieger cover, for callers that only need the graph.
pub fn krieger(g: &LabeledGraph) -> Cover {
    covers::krieger_cover(g, KriegerRoute::Merge, &lim()).unwrap()
}
