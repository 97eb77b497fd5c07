//! The future cover by two routes, the Fischer cover and the maps relating
//! points and paths to them.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{self, ComponentDag, EdgeId, LabeledGraph, Letter, Vertex, VertexMap};
use crate::lang::{self, Limits, Relation};
use crate::seq::{EpPath, EpSeq, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Krieger,
    Fischer,
    Underline,
    FollowerSet,
    DoubleSubset,
    Gprime,
}

impl CoverKind {
    pub fn name(self) -> &'static str {
        match self {
            CoverKind::Krieger => "krieger",
            CoverKind::Fischer => "fischer",
            CoverKind::Underline => "underline",
            CoverKind::FollowerSet => "follower-set",
            CoverKind::DoubleSubset => "double-subset",
            CoverKind::Gprime => "gprime",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KriegerRoute {
    /// Merge follower-equivalent vertices of the underline graph.
    #[default]
    Merge,
    /// Keep the regular vertices of the follower set graph.
    RegularPart,
}

/// A graph built from subsets of a source graph's vertices. Vertex `v` of
/// `graph` stands for the sets in `provenance[v]`, and is named after the
/// least of them.
#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: LabeledGraph,
    pub kind: CoverKind,
    pub provenance: Vec<Vec<VertexSet>>,
    pub source: LabeledGraph,
}

impl Cover {
    pub(crate) fn assemble(
        source: &LabeledGraph,
        kind: CoverKind,
        members: Vec<Vec<VertexSet>>,
        edges: &[(usize, Letter, usize)],
    ) -> Result<Cover> {
        let mut names: Vec<String> = members
            .iter()
            .map(|m| source.format_set(m.iter().min().expect("nonempty member list")))
            .collect();
        let mut seen = HashSet::new();
        for (i, n) in names.iter_mut().enumerate() {
            if !seen.insert(n.clone()) {
                n.push_str(&format!("+{i}"));
            }
        }
        let triples: Vec<(&str, &str, &str)> = edges
            .iter()
            .map(|&(s, a, d)| (names[s].as_str(), source.letter_name(a), names[d].as_str()))
            .collect();
        let alpha: Vec<&str> = source.alphabet().iter().map(String::as_str).collect();
        let graph = LabeledGraph::build(names.iter().map(String::as_str).collect::<Vec<_>>(), alpha, triples)?;
        let mut provenance = vec![Vec::new(); graph.vertex_count()];
        for (i, mut m) in members.into_iter().enumerate() {
            m.sort();
            provenance[graph.vertex_id(&names[i])?] = m;
        }
        Ok(Cover { graph, kind, provenance, source: source.clone() })
    }

    /// The cover vertex standing for the set `s`, if any.
    pub fn vertex_of(&self, s: &VertexSet) -> Option<Vertex> {
        self.provenance.iter().position(|m| m.contains(s))
    }

    /// Restriction to a hereditary vertex set, relabeled as `kind`.
    pub fn restrict(&self, keep: &VertexSet, kind: CoverKind) -> Result<Cover> {
        let graph = graph::restrict_hereditary(&self.graph, keep)?;
        let provenance = graph
            .vertices()
            .iter()
            .map(|n| self.provenance[self.graph.vertex_id(n).expect("kept vertex")].clone())
            .collect();
        Ok(Cover { graph, kind, provenance, source: self.source.clone() })
    }

    /// Component DAG of the cover graph.
    pub fn components(&self) -> ComponentDag {
        graph::components(&self.graph)
    }

    /// Common cardinality of the member subsets of each component. Only
    /// double-subset graphs and G′ carry multiplicities; other kinds get
    /// `None` throughout.
    pub fn multiplicities(&self, dag: &ComponentDag) -> Vec<Option<usize>> {
        if !matches!(self.kind, CoverKind::DoubleSubset | CoverKind::Gprime) {
            return vec![None; dag.len()];
        }
        dag.components
            .iter()
            .map(|c| {
                let sizes: HashSet<Option<usize>> = c
                    .iter()
                    .map(|&v| match self.provenance[v].as_slice() {
                        [s] => Some(s.len()),
                        _ => None,
                    })
                    .collect();
                match sizes.into_iter().collect::<Vec<_>>().as_slice() {
                    [Some(k)] => Some(*k),
                    _ => None,
                }
            })
            .collect()
    }
}

/// Per-component multiplicities of a subset graph, failing when a component
/// mixes cardinalities.
pub fn multiplicity_check(cover: &Cover) -> Result<Vec<usize>> {
    let dag = cover.components();
    cover
        .multiplicities(&dag)
        .into_iter()
        .map(|m| m.ok_or(Error::MixedMultiplicity))
        .collect()
}

fn edges_of_closure(sa: &lang::SubsetAutomaton, keep: &[usize], class: &[usize]) -> Vec<(usize, Letter, usize)> {
    let mut pos = HashMap::new();
    for (i, &s) in keep.iter().enumerate() {
        pos.insert(s, i);
    }
    let mut edges = Vec::new();
    for (i, &s) in keep.iter().enumerate() {
        for (a, t) in sa.trans[s].iter().enumerate() {
            if let Some(t) = t {
                edges.push((class[i], a, class[pos[t]]));
            }
        }
    }
    edges
}

/// The underline graph: one vertex per set `D^y`, with `D -a-> [D, a]`.
pub fn underline_graph(g: &LabeledGraph, limits: &Limits) -> Result<Cover> {
    g.require_trim()?;
    let fam = lang::dee_family(g, limits)?;
    let sa = lang::subset_closure(g, &fam, limits)?;
    let keep: Vec<usize> = (0..sa.len()).collect();
    let edges = edges_of_closure(&sa, &keep, &keep);
    let members = sa.states.iter().map(|s| vec![s.clone()]).collect();
    Cover::assemble(g, CoverKind::Underline, members, &edges)
}

/// The follower set graph: subset-automaton states reached by a nonempty
/// word, merged by follower set.
pub fn follower_set_graph(g: &LabeledGraph, limits: &Limits) -> Result<Cover> {
    g.require_trim()?;
    let sa = lang::subset_automaton(g, limits)?;
    let mut reached = vec![false; sa.len()];
    let mut queue: VecDeque<usize> = sa.trans[0].iter().flatten().copied().collect();
    while let Some(s) = queue.pop_front() {
        if !std::mem::replace(&mut reached[s], true) {
            queue.extend(sa.trans[s].iter().flatten().copied());
        }
    }
    let keep: Vec<usize> = (0..sa.len()).filter(|&s| reached[s]).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let sub: Vec<Vec<Option<usize>>> =
        keep.iter().map(|&s| sa.trans[s].iter().map(|t| t.map(|t| pos[&t])).collect()).collect();
    let class = lang::moore_partition(&sub);
    let k = class.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); k];
    for (i, &s) in keep.iter().enumerate() {
        members[class[i]].push(sa.states[s].clone());
    }
    let mut edges = edges_of_closure(&sa, &keep, &class);
    edges.sort_unstable();
    edges.dedup();
    Cover::assemble(g, CoverKind::FollowerSet, members, &edges)
}

/// Regular vertices of a right-resolving graph without sinks: `v` is regular
/// when some `D^y` contains `v` and every follower set of `D^y` lies inside `f(v)`.
pub fn regular_vertices(g: &LabeledGraph, limits: &Limits) -> Result<VertexSet> {
    g.require_right_resolving()?;
    g.require_no_sinks()?;
    let fam = lang::dee_family(g, limits)?;
    let incl = lang::follower_inclusions(g)?;
    Ok((0..g.vertex_count())
        .filter(|&v| fam.iter().any(|d| d.contains(v) && d.iter().all(|u| incl[u].contains(v))))
        .collect())
}

pub fn krieger_cover(g: &LabeledGraph, route: KriegerRoute, limits: &Limits) -> Result<Cover> {
    match route {
        KriegerRoute::Merge => {
            let u = underline_graph(g, limits)?;
            let (m, map) = lang::merged_graph(&u.graph)?;
            let mut members = vec![Vec::new(); m.vertex_count()];
            for (v, &c) in map.vertices.iter().enumerate() {
                members[c].extend(u.provenance[v].iter().cloned());
            }
            let edges: Vec<_> = m.edges().iter().map(|e| (e.src, e.label, e.dst)).collect();
            Cover::assemble(g, CoverKind::Krieger, members, &edges)
        }
        KriegerRoute::RegularPart => {
            let f = follower_set_graph(g, limits)?;
            let reg = regular_vertices(&f.graph, limits)?;
            f.restrict(&reg, CoverKind::Krieger)
                .map_err(|e| Error::Internal(format!("regular part is not hereditary: {e}")))
        }
    }
}

/// The unique terminal component of the future cover, provided its
/// language is the whole shift.
pub fn fischer_cover(g: &LabeledGraph, limits: &Limits) -> Result<Cover> {
    let k = krieger_cover(g, KriegerRoute::Merge, limits)?;
    let dag = k.components();
    let [t] = dag.terminals()[..] else {
        return Err(Error::NotIrreducible);
    };
    let f = k.restrict(&dag.members(t), CoverKind::Fischer)?;
    if lang::distinguishing_word(&f.graph, g, limits)?.is_some() {
        return Err(Error::NotIrreducible);
    }
    Ok(f)
}

pub fn is_irreducible(g: &LabeledGraph, limits: &Limits) -> Result<bool> {
    match fischer_cover(g, limits) {
        Ok(_) => Ok(true),
        Err(Error::NotIrreducible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `D^y` for the left tail `u^∞ w`.
pub fn tail_set(g: &LabeledGraph, u: &[Letter], w: &[Letter]) -> Result<VertexSet> {
    if u.is_empty() {
        return Err(Error::InvalidSequence("empty period".into()));
    }
    let e = Relation::of_word(g, u).idempotent_power();
    let d = g.image(&e.range(), w);
    if d.is_empty() {
        return Err(Error::NotInShift(format!("({})^inf {}", g.format_word(u), g.format_word(w))));
    }
    Ok(d)
}

/// The Krieger vertex carrying the follower set of the left tail `u^∞ w`,
/// together with `D^y`.
pub fn follower_of_tail(k: &Cover, u: &[Letter], w: &[Letter]) -> Result<(VertexSet, Vertex)> {
    let d = tail_set(&k.source, u, w)?;
    let v = k
        .vertex_of(&d)
        .ok_or_else(|| Error::Internal("tail set missing from the cover".into()))?;
    Ok((d, v))
}

/// Sets `D^y` along an eventually periodic point: one left period, the
/// middle, and the right side up to its first repeat. Returns the sets for
/// positions `origin - |left| ..= end`, plus `(t, p)` where the right side
/// repeats after `t` blocks with period `p` blocks.
fn tail_sets_along(g: &LabeledGraph, y: &Point) -> Result<(Vec<VertexSet>, usize, usize)> {
    let d0 = tail_set(g, &y.left, &[])?;
    let mut sets = vec![d0.clone()];
    let mut cur = d0;
    for &a in y.left.iter().chain(&y.mid) {
        cur = g.step(&cur, a);
        if cur.is_empty() {
            return Err(Error::NotInShift("empty tail set".into()));
        }
        sets.push(cur.clone());
    }
    let mut blocks: Vec<VertexSet> = vec![cur.clone()];
    loop {
        for &a in &y.right {
            cur = g.step(&cur, a);
            if cur.is_empty() {
                return Err(Error::NotInShift("empty tail set".into()));
            }
            sets.push(cur.clone());
        }
        if let Some(t) = blocks.iter().position(|b| *b == cur) {
            let p = blocks.len() - t;
            return Ok((sets, t, p));
        }
        blocks.push(cur.clone());
    }
}

/// The path `α(y)` in the Krieger cover `k`: at each position the vertex
/// carrying the follower set of the tail ending there.
pub fn alpha(k: &Cover, y: &Point) -> Result<EpPath> {
    let g = &k.source;
    let (sets, t, p) = tail_sets_along(g, y)?;
    let edge_at = |i: usize, a: Letter| -> Result<EdgeId> {
        let v = k.vertex_of(&sets[i]).ok_or_else(|| Error::Internal("tail set missing from the cover".into()))?;
        k.graph.edge_from(v, a).ok_or_else(|| Error::Internal("missing cover edge".into()))
    };
    let (l, m, r) = (y.left.len(), y.mid.len(), y.right.len());
    let left = (0..l).map(|i| edge_at(i, y.left[i])).collect::<Result<Vec<_>>>()?;
    let mut mid = (0..m).map(|i| edge_at(l + i, y.mid[i])).collect::<Result<Vec<_>>>()?;
    let mut right = Vec::new();
    for b in 0..t + p {
        for j in 0..r {
            let e = edge_at(l + m + b * r + j, y.right[j])?;
            if b < t {
                mid.push(e);
            } else {
                right.push(e);
            }
        }
    }
    EpSeq::new(left, mid, right, y.origin)
}

/// Whether every vertex `x_i` of the path is regular along it, that is,
/// `f(u) ⊆ f(s(x_i))` for every `u` in `D` of the tail ending at `i`.
pub fn is_regular_path(g: &LabeledGraph, x: &EpPath) -> Result<bool> {
    g.require_right_resolving()?;
    x.validate(g)?;
    let incl = lang::follower_inclusions(g)?;
    let y = x.labels(g);
    let d0 = tail_set(g, &y.left, &[])?;
    let ok = |d: &VertexSet, e: EdgeId| {
        let s = g.edge(e).src;
        d.iter().all(|u| incl[u].contains(s))
    };
    let mut d = d0;
    let mut i = y.origin - y.left.len() as i64;
    while i < y.mid_end() {
        if !ok(&d, *x.at(i)) {
            return Ok(false);
        }
        d = g.step(&d, *y.at(i));
        i += 1;
    }
    let r = x.right.len();
    let mut seen = HashSet::new();
    let mut phase = 0;
    while seen.insert((phase, d.clone())) {
        if !ok(&d, x.right[phase]) {
            return Ok(false);
        }
        d = g.step(&d, g.edge(x.right[phase]).label);
        phase = (phase + 1) % r;
    }
    Ok(true)
}

/// The embedding `θ` of a regular, right-resolving graph into its Krieger
/// cover: each vertex goes to the cover vertex with the same follower set.
pub fn embed_theta(g: &LabeledGraph, k: &Cover, limits: &Limits) -> Result<VertexMap> {
    g.require_right_resolving()?;
    let reg = regular_vertices(g, limits)?;
    if let Some(v) = (0..g.vertex_count()).find(|&v| !reg.contains(v)) {
        return Err(Error::NotRegular(g.vertex_name(v).to_string()));
    }
    let class = joint_follower_classes(g, &k.graph)?;
    let n = g.vertex_count();
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let t = (0..k.graph.vertex_count())
            .find(|&w| class[n + w] == class[v])
            .ok_or_else(|| Error::Internal(format!("no cover vertex matches {}", g.vertex_name(v))))?;
        vertices.push(t);
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let a = k.graph.letter_id(g.letter_name(e.label))?;
            k.graph.edge_from(vertices[e.src], a).ok_or_else(|| Error::Internal("edge has no image".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexMap { vertices, edges: Some(edges) })
}

/// Follower classes on the disjoint union of two right-resolving graphs,
/// with letters matched by name. Vertices of `h` come after those of `g`.
pub fn joint_follower_classes(g: &LabeledGraph, h: &LabeledGraph) -> Result<Vec<usize>> {
    g.require_right_resolving()?;
    h.require_right_resolving()?;
    let mut alpha: Vec<&str> = g.alphabet().iter().chain(h.alphabet()).map(String::as_str).collect();
    alpha.sort_unstable();
    alpha.dedup();
    let n = g.vertex_count();
    let row = |gr: &LabeledGraph, v: Vertex, off: usize| -> Vec<Option<usize>> {
        alpha
            .iter()
            .map(|a| gr.letter_id(a).ok().and_then(|l| gr.successor(v, l)).map(|d| d + off))
            .collect()
    };
    let mut trans: Vec<Vec<Option<usize>>> = (0..n).map(|v| row(g, v, 0)).collect();
    trans.extend((0..h.vertex_count()).map(|v| row(h, v, n)));
    Ok(lang::moore_partition(&trans))
}

/// Follower classes of the subset-automaton states, which decide
/// synchronization.
struct SyncOracle {
    sa: lang::SubsetAutomaton,
    class: Vec<usize>,
}

impl SyncOracle {
    fn new(g: &LabeledGraph, limits: &Limits) -> Result<Self> {
        let sa = lang::subset_automaton(g, limits)?;
        let class = lang::moore_partition(&sa.trans);
        Ok(SyncOracle { sa, class })
    }

    /// Whether a word with relation `r` is synchronizing: every nonempty
    /// `[S, w]` over the states `S` has the follower set of `[V, w]`.
    fn synchronizing(&self, r: &Relation) -> bool {
        let Some(target) = self.sa.state_of(&r.apply(&self.sa.states[0])) else {
            return false;
        };
        self.sa.states.iter().all(|s| {
            let t = r.apply(s);
            t.is_empty() || self.sa.state_of(&t).is_some_and(|t| self.class[t] == self.class[target])
        })
    }
}

/// Whether `uw, wv ∈ L` always implies `uwv ∈ L`.
pub fn is_synchronizing_word(g: &LabeledGraph, w: &[Letter], limits: &Limits) -> Result<bool> {
    if !lang::contains_word(g, w)? {
        return Err(Error::NotInLanguage(g.format_word(w)));
    }
    let oracle = SyncOracle::new(g, limits)?;
    Ok(oracle.synchronizing(&Relation::of_word(g, w)))
}

/// A shortest path ending at `v` whose label is synchronizing. The graph must
/// be right-resolving, regular and follower-separated, and `v` must lie in a
/// terminal component. `max_depth` bounds the path length.
pub fn synchronizing_path_to(
    g: &LabeledGraph,
    v: Vertex,
    max_depth: Option<usize>,
    limits: &Limits,
) -> Result<Vec<EdgeId>> {
    g.require_right_resolving()?;
    let reg = regular_vertices(g, limits)?;
    if let Some(x) = (0..g.vertex_count()).find(|&x| !reg.contains(x)) {
        return Err(Error::NotRegular(g.vertex_name(x).to_string()));
    }
    if !lang::is_follower_separated(g)? {
        return Err(Error::NotFollowerSeparated);
    }
    let dag = graph::components(g);
    if !dag.component_of[v].is_some_and(|c| dag.terminal[c]) {
        return Err(Error::NotTerminal(g.vertex_name(v).to_string()));
    }
    let oracle = SyncOracle::new(g, limits)?;
    let letters: Vec<Relation> = (0..g.alphabet().len()).map(|a| Relation::of_letter(g, a)).collect();
    let mut seen: HashSet<(Vertex, Relation)> = HashSet::new();
    let mut layer: Vec<(Vertex, Relation, Vec<EdgeId>)> = Vec::new();
    for &i in g.in_edges(v) {
        let e = g.edge(i);
        let r = letters[e.label].clone();
        if seen.insert((e.src, r.clone())) {
            layer.push((e.src, r, vec![i]));
        }
    }
    let mut depth = 1;
    while !layer.is_empty() {
        if let Some((_, _, path)) = layer.iter().find(|(_, r, _)| oracle.synchronizing(r)) {
            return Ok(path.clone());
        }
        if max_depth.is_some_and(|m| depth >= m) {
            break;
        }
        let mut next = Vec::new();
        for (s, r, path) in &layer {
            for &i in g.in_edges(*s) {
                let e = g.edge(i);
                let r2 = letters[e.label].then(r);
                if seen.insert((e.src, r2.clone())) {
                    let mut p = vec![i];
                    p.extend_from_slice(path);
                    next.push((e.src, r2, p));
                }
            }
        }
        if seen.len() > limits.subsets {
            return Err(Error::cap("synchronizing search states", limits.subsets));
        }
        layer = next;
        depth += 1;
    }
    Err(Error::DepthExhausted(depth))
}

/// Whether distinct vertices have distinct sets of words leading into them.
pub fn is_predecessor_separated(g: &LabeledGraph, limits: &Limits) -> Result<bool> {
    let rev = graph::reverse(g);
    let singles: Vec<VertexSet> = (0..g.vertex_count()).map(VertexSet::singleton).collect();
    let sa = lang::subset_closure(&rev, &singles, limits)?;
    let class = lang::moore_partition(&sa.trans);
    let classes: HashSet<usize> = singles.iter().map(|s| class[sa.state_of(s).expect("seed state")]).collect();
    Ok(classes.len() == g.vertex_count())
}
