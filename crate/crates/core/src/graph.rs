//! Labeled graphs, the `.lg` text format and structural operations.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Letter = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: Vertex,
    pub label: Letter,
    pub dst: Vertex,
}

/// A finite directed multigraph with labeled edges.
///
/// Vertices and letters are interned in sorted order of their names, and
/// edges are kept sorted by `(src, label, dst)`, so two graphs built from the
/// same triples are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, Vertex>,
    letter_index: HashMap<String, Letter>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

pub fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '{' | '}' | ',' | '.' | '+' | '-'))
}

fn check_token(s: &str) -> Result<()> {
    if is_token(s) {
        Ok(())
    } else {
        Err(Error::InvalidToken(s.to_string()))
    }
}

impl LabeledGraph {
    /// Builds a graph from explicit vertex and letter lists plus edge triples.
    /// Endpoints and labels of edges are added automatically and duplicate
    /// triples collapse.
    pub fn build<V, A, E, S>(vertices: V, alphabet: A, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        A: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: AsRef<str>,
    {
        let mut vs: BTreeSet<String> = BTreeSet::new();
        let mut ls: BTreeSet<String> = BTreeSet::new();
        for v in vertices {
            check_token(v.as_ref())?;
            vs.insert(v.as_ref().to_string());
        }
        for a in alphabet {
            check_token(a.as_ref())?;
            ls.insert(a.as_ref().to_string());
        }
        let mut triples = Vec::new();
        for (s, l, d) in edges {
            for t in [&s, &l, &d] {
                check_token(t.as_ref())?;
            }
            vs.insert(s.as_ref().to_string());
            ls.insert(l.as_ref().to_string());
            vs.insert(d.as_ref().to_string());
            triples.push((s.as_ref().to_string(), l.as_ref().to_string(), d.as_ref().to_string()));
        }
        let vertices: Vec<String> = vs.into_iter().collect();
        let alphabet: Vec<String> = ls.into_iter().collect();
        let vertex_index: HashMap<String, Vertex> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let letter_index: HashMap<String, Letter> =
            alphabet.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let edges: BTreeSet<Edge> = triples
            .iter()
            .map(|(s, l, d)| Edge { src: vertex_index[s], label: letter_index[l], dst: vertex_index[d] })
            .collect();
        Ok(Self::assemble(vertices, alphabet, edges.into_iter().collect(), vertex_index, letter_index))
    }

    /// Builds a graph whose vertices and labels are exactly those used by the edges.
    pub fn from_edges<E, S>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (S, S, S)>,
        S: AsRef<str>,
    {
        Self::build(Vec::<S>::new(), Vec::<S>::new(), edges)
    }

    fn assemble(
        vertices: Vec<String>,
        alphabet: Vec<String>,
        edges: Vec<Edge>,
        vertex_index: HashMap<String, Vertex>,
        letter_index: HashMap<String, Letter>,
    ) -> Self {
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.src].push(i);
            in_edges[e.dst].push(i);
        }
        LabeledGraph { vertices, alphabet, edges, vertex_index, letter_index, out_edges, in_edges }
    }

    /// Subgraph on `keep` with the edges accepted by `edge_ok`. The alphabet is kept.
    pub fn subgraph(&self, keep: &VertexSet, edge_ok: impl Fn(&Edge) -> bool) -> LabeledGraph {
        let names: Vec<&str> = keep.iter().map(|v| self.vertex_name(v)).collect();
        let triples: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .filter(|e| keep.contains(e.src) && keep.contains(e.dst) && edge_ok(e))
            .map(|e| self.triple(e))
            .collect();
        let alphabet: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        LabeledGraph::build(names, alphabet, triples).expect("tokens already valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertices[v]
    }

    pub fn letter_name(&self, a: Letter) -> &str {
        &self.alphabet[a]
    }

    pub fn vertex_id(&self, name: &str) -> Result<Vertex> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn letter_id(&self, name: &str) -> Result<Letter> {
        self.letter_index.get(name).copied().ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn triple(&self, e: &Edge) -> (&str, &str, &str) {
        (self.vertex_name(e.src), self.letter_name(e.label), self.vertex_name(e.dst))
    }

    pub fn out_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.in_edges[v]
    }

    pub fn successors(&self, v: Vertex, a: Letter) -> impl Iterator<Item = Vertex> + '_ {
        self.out_edges[v].iter().map(|&i| self.edges[i]).filter(move |e| e.label == a).map(|e| e.dst)
    }

    /// The unique `a`-successor in a right-resolving graph.
    pub fn successor(&self, v: Vertex, a: Letter) -> Option<Vertex> {
        self.successors(v, a).next()
    }

    pub fn edge_from(&self, v: Vertex, a: Letter) -> Option<EdgeId> {
        self.out_edges[v].iter().copied().find(|&i| self.edges[i].label == a)
    }

    pub fn out_labels(&self, v: Vertex) -> VertexSet {
        self.out_edges[v].iter().map(|&i| self.edges[i].label).collect()
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// `[s, a]`: the set of `a`-successors of members of `s`.
    pub fn step(&self, s: &VertexSet, a: Letter) -> VertexSet {
        let mut r = VertexSet::new();
        for v in s {
            r.extend(self.successors(v, a));
        }
        r
    }

    /// `[s, w]`, stopping early once the image is empty.
    pub fn image(&self, s: &VertexSet, w: &[Letter]) -> VertexSet {
        let mut cur = s.clone();
        for &a in w {
            if cur.is_empty() {
                break;
            }
            cur = self.step(&cur, a);
        }
        cur
    }

    /// Vertices from which a path labeled `w` ends inside `target`.
    pub fn preimage(&self, target: &VertexSet, w: &[Letter]) -> VertexSet {
        let mut cur = target.clone();
        for &a in w.iter().rev() {
            let mut prev = VertexSet::new();
            for v in &cur {
                for &i in &self.in_edges[v] {
                    if self.edges[i].label == a {
                        prev.insert(self.edges[i].src);
                    }
                }
            }
            cur = prev;
        }
        cur
    }

    pub fn is_right_resolving(&self) -> bool {
        self.right_resolving_violation().is_none()
    }

    fn right_resolving_violation(&self) -> Option<(Vertex, Letter)> {
        for v in 0..self.vertex_count() {
            let mut seen = VertexSet::new();
            for &i in &self.out_edges[v] {
                if !seen.insert(self.edges[i].label) {
                    return Some((v, self.edges[i].label));
                }
            }
        }
        None
    }

    pub fn require_right_resolving(&self) -> Result<()> {
        match self.right_resolving_violation() {
            None => Ok(()),
            Some((v, a)) => Err(Error::NotRightResolving {
                vertex: self.vertex_name(v).to_string(),
                label: self.letter_name(a).to_string(),
            }),
        }
    }

    pub fn is_trim(&self) -> bool {
        (0..self.vertex_count()).all(|v| !self.out_edges[v].is_empty() && !self.in_edges[v].is_empty())
    }

    pub fn require_trim(&self) -> Result<()> {
        match (0..self.vertex_count()).find(|&v| self.out_edges[v].is_empty() || self.in_edges[v].is_empty()) {
            None => Ok(()),
            Some(v) => Err(Error::NotTrim(self.vertex_name(v).to_string())),
        }
    }

    pub fn require_no_sinks(&self) -> Result<()> {
        match (0..self.vertex_count()).find(|&v| self.out_edges[v].is_empty()) {
            None => Ok(()),
            Some(v) => Err(Error::HasSink(self.vertex_name(v).to_string())),
        }
    }

    /// Parses a word given either as space-separated tokens or, when every
    /// letter is a single character, as a plain string.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Letter>> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        if s.contains(char::is_whitespace) {
            return s.split_whitespace().map(|t| self.letter_id(t)).collect();
        }
        if self.alphabet.iter().all(|a| a.chars().count() == 1) {
            return s.chars().map(|c| self.letter_id(&c.to_string())).collect();
        }
        Ok(vec![self.letter_id(s)?])
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        let sep = if self.alphabet.iter().all(|a| a.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&a| self.letter_name(a)).collect::<Vec<_>>().join(sep)
    }

    pub fn format_set(&self, s: &VertexSet) -> String {
        let names: Vec<&str> = s.iter().map(|v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Parses `.lg` text. Blank lines and `#` comments are skipped.
pub fn parse_lg(text: &str) -> Result<LabeledGraph> {
    parse_lg_with_warnings(text).map(|(g, _)| g)
}

/// Like [`parse_lg`], also returning one warning per duplicate edge line.
pub fn parse_lg_with_warnings(text: &str) -> Result<(LabeledGraph, Vec<String>)> {
    let mut triples = Vec::new();
    let mut seen = HashMap::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse { line: i + 1, message: format!("expected 3 tokens, found {}", toks.len()) });
        }
        if let Some(bad) = toks.iter().find(|t| !is_token(t)) {
            return Err(Error::Parse { line: i + 1, message: format!("invalid token {bad:?}") });
        }
        let t = (toks[0], toks[1], toks[2]);
        if let Some(first) = seen.insert(t, i + 1) {
            warnings.push(format!("line {}: duplicate of line {first}", i + 1));
        }
        triples.push(t);
    }
    if triples.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    Ok((LabeledGraph::from_edges(triples)?, warnings))
}

/// One `src label dst` line per edge, sorted, LF terminated.
pub fn to_lg(g: &LabeledGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let (s, l, d) = g.triple(e);
        let _ = writeln!(out, "{s} {l} {d}");
    }
    out
}

pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for e in g.edges() {
        let (s, l, d) = g.triple(e);
        let _ = writeln!(out, "  \"{s}\" -> \"{d}\" [label=\"{l}\"];");
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub alphabet: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

pub fn to_json_value(g: &LabeledGraph) -> GraphJson {
    GraphJson {
        vertices: g.vertices().to_vec(),
        alphabet: g.alphabet().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| {
                let (s, l, d) = g.triple(e);
                (s.to_string(), l.to_string(), d.to_string())
            })
            .collect(),
    }
}

pub fn to_json(g: &LabeledGraph) -> String {
    serde_json::to_string_pretty(&to_json_value(g)).expect("graph json") + "\n"
}

pub fn from_json(text: &str) -> Result<LabeledGraph> {
    let j: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    LabeledGraph::build(j.vertices, j.alphabet, j.edges)
}

/// Repeatedly deletes sinks and sources. The result may be empty.
pub fn trim(g: &LabeledGraph) -> LabeledGraph {
    let n = g.vertex_count();
    let mut alive = g.full_set();
    let mut outdeg: Vec<usize> = (0..n).map(|v| g.out_edges(v).len()).collect();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_edges(v).len()).collect();
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| outdeg[v] == 0 || indeg[v] == 0).collect();
    while let Some(v) = queue.pop_front() {
        if !alive.remove(v) {
            continue;
        }
        for &i in g.out_edges(v) {
            let d = g.edge(i).dst;
            if d != v && alive.contains(d) {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    queue.push_back(d);
                }
            }
        }
        for &i in g.in_edges(v) {
            let s = g.edge(i).src;
            if s != v && alive.contains(s) {
                outdeg[s] -= 1;
                if outdeg[s] == 0 {
                    queue.push_back(s);
                }
            }
        }
    }
    g.subgraph(&alive, |_| true)
}

/// Strongly connected pieces of the recurrent vertices and the reachability
/// order between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDag {
    /// Each component sorted, components ordered by least member.
    pub components: Vec<Vec<Vertex>>,
    pub component_of: Vec<Option<usize>>,
    /// `(c, d)` whenever some vertex of `c` reaches some vertex of `d`, `c != d`.
    pub arrows: Vec<(usize, usize)>,
    pub terminal: Vec<bool>,
    pub source: Vec<bool>,
    pub transient: Vec<Vertex>,
}

impl ComponentDag {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.terminal[c]).collect()
    }

    pub fn members(&self, c: usize) -> VertexSet {
        self.components[c].iter().copied().collect()
    }
}

pub fn components(g: &LabeledGraph) -> ComponentDag {
    let n = g.vertex_count();
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(n, g.edge_count());
    let nodes: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(nodes[e.src], nodes[e.dst], ());
    }
    let mut comps: Vec<Vec<Vertex>> = tarjan_scc(&pg)
        .into_iter()
        .map(|scc| {
            let mut c: Vec<Vertex> = scc.into_iter().map(|x| x.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 1 || g.out_edges(c[0]).iter().any(|&i| g.edge(i).dst == c[0]))
        .collect();
    comps.sort();
    let mut component_of = vec![None; n];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            component_of[v] = Some(ci);
        }
    }
    let mut arrows = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        let mut seen: VertexSet = c.iter().copied().collect();
        let mut stack: Vec<Vertex> = c.clone();
        let mut hit = BTreeSet::new();
        while let Some(v) = stack.pop() {
            for &i in g.out_edges(v) {
                let d = g.edge(i).dst;
                if seen.insert(d) {
                    stack.push(d);
                    if let Some(cd) = component_of[d] {
                        if cd != ci {
                            hit.insert(cd);
                        }
                    }
                }
            }
        }
        arrows.extend(hit.into_iter().map(|cd| (ci, cd)));
    }
    let k = comps.len();
    let terminal = (0..k).map(|c| !arrows.iter().any(|&(a, _)| a == c)).collect();
    let source = (0..k).map(|c| !arrows.iter().any(|&(_, b)| b == c)).collect();
    let transient = (0..n).filter(|&v| component_of[v].is_none()).collect();
    ComponentDag { components: comps, component_of, arrows, terminal, source, transient }
}

/// Smallest superset of `seed` closed under out-edges.
pub fn hereditary_closure(g: &LabeledGraph, seed: &VertexSet) -> VertexSet {
    let mut seen = seed.clone();
    let mut stack: Vec<Vertex> = seed.iter().collect();
    while let Some(v) = stack.pop() {
        for &i in g.out_edges(v) {
            let d = g.edge(i).dst;
            if seen.insert(d) {
                stack.push(d);
            }
        }
    }
    seen
}

/// Subgraph on a hereditary set `u`, keeping every edge that leaves `u`'s members.
pub fn restrict_hereditary(g: &LabeledGraph, u: &VertexSet) -> Result<LabeledGraph> {
    for v in u {
        for &i in g.out_edges(v) {
            let d = g.edge(i).dst;
            if !u.contains(d) {
                return Err(Error::NotHereditary {
                    src: g.vertex_name(v).to_string(),
                    dst: g.vertex_name(d).to_string(),
                });
            }
        }
    }
    Ok(g.subgraph(u, |_| true))
}

fn path_name(g: &LabeledGraph, path: &[EdgeId]) -> String {
    let mut s = g.vertex_name(g.edge(path[0]).src).to_string();
    for &i in path {
        let (_, l, d) = g.triple(&g.edge(i));
        s.push('.');
        s.push_str(l);
        s.push('.');
        s.push_str(d);
    }
    s
}

fn paths_of_length(g: &LabeledGraph, k: usize) -> Vec<Vec<EdgeId>> {
    let mut paths: Vec<Vec<EdgeId>> = (0..g.edge_count()).map(|i| vec![i]).collect();
    for _ in 1..k {
        paths = paths
            .iter()
            .flat_map(|p| {
                let end = g.edge(*p.last().unwrap()).dst;
                g.out_edges(end).iter().map(move |&i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    paths
}

/// The `n`-block presentation. Vertices are paths of `n-1` edges; an edge
/// joins the two overlapping windows of a path of `n` edges and carries the
/// label of that path's last edge. The language is unchanged and a
/// right-resolving input stays right-resolving.
pub fn higher_block(g: &LabeledGraph, n: usize) -> Result<LabeledGraph> {
    match n {
        0 => Err(Error::BadBlockLength),
        1 => Ok(g.clone()),
        _ => {
            let long = paths_of_length(g, n);
            let name = |p: &[EdgeId]| path_name(g, p);
            let triples: Vec<(String, String, String)> = long
                .iter()
                .map(|p| {
                    let last = g.edge(p[n - 1]);
                    (name(&p[..n - 1]), g.letter_name(last.label).to_string(), name(&p[1..]))
                })
                .collect();
            let verts: Vec<String> = paths_of_length(g, n - 1).iter().map(|p| name(p)).collect();
            LabeledGraph::build(verts, Vec::new(), triples)
        }
    }
}

/// Presentation of the 2-block recoding of the shift: the edge graph of `g`
/// where the step from `e` to `f` reads the pair of labels `L(e).L(f)`.
pub fn two_block_recode(g: &LabeledGraph) -> Result<LabeledGraph> {
    let triples: Vec<(String, String, String)> = paths_of_length(g, 2)
        .iter()
        .map(|p| {
            let (e, f) = (g.edge(p[0]), g.edge(p[1]));
            (
                path_name(g, &p[..1]),
                format!("{}.{}", g.letter_name(e.label), g.letter_name(f.label)),
                path_name(g, &p[1..]),
            )
        })
        .collect();
    let verts: Vec<String> = (0..g.edge_count()).map(|i| path_name(g, &[i])).collect();
    LabeledGraph::build(verts, Vec::new(), triples)
}

/// Renames letters through a bijection of the alphabet.
pub fn relabel(g: &LabeledGraph, m: &BTreeMap<String, String>) -> Result<LabeledGraph> {
    for a in g.alphabet() {
        if !m.contains_key(a) {
            return Err(Error::NotBijection(format!("letter {a} is not mapped")));
        }
    }
    if let Some(k) = m.keys().find(|k| g.letter_id(k).is_err()) {
        return Err(Error::NotBijection(format!("{k} is not a letter of the graph")));
    }
    let images: BTreeSet<&String> = m.values().collect();
    if images.len() != m.len() {
        return Err(Error::NotBijection("two letters share an image".into()));
    }
    let triples: Vec<(&str, &str, &str)> = g
        .edges()
        .iter()
        .map(|e| {
            let (s, l, d) = g.triple(e);
            (s, m[l].as_str(), d)
        })
        .collect();
    let vs: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
    let alpha: Vec<&str> = g.alphabet().iter().map(|a| m[a].as_str()).collect();
    LabeledGraph::build(vs, alpha, triples)
}

pub fn reverse(g: &LabeledGraph) -> LabeledGraph {
    let triples: Vec<(&str, &str, &str)> = g
        .edges()
        .iter()
        .map(|e| {
            let (s, l, d) = g.triple(e);
            (d, l, s)
        })
        .collect();
    let vs: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
    let alpha: Vec<&str> = g.alphabet().iter().map(String::as_str).collect();
    LabeledGraph::build(vs, alpha, triples).expect("tokens already valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub vertices: usize,
    pub edges: usize,
    pub alphabet: usize,
    pub trim: bool,
    pub right_resolving: bool,
}

pub fn validate(g: &LabeledGraph) -> GraphReport {
    GraphReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        alphabet: g.alphabet().len(),
        trim: g.is_trim(),
        right_resolving: g.is_right_resolving(),
    }
}

/// A vertex map between two graphs, with the induced edge map when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    pub vertices: Vec<Vertex>,
    pub edges: Option<Vec<EdgeId>>,
}

impl VertexMap {
    pub fn is_injective(&self) -> bool {
        let img: BTreeSet<_> = self.vertices.iter().collect();
        img.len() == self.vertices.len()
    }

    pub fn image(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }
}
