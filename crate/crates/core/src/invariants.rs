//! Periodic-point counts, graph isomorphism and the invariant reports used
//! to compare covers of recoded presentations.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::covers::{self, Cover, KriegerRoute};
use crate::error::{Error, Result};
use crate::gprime;
use crate::graph::{self, ComponentDag, LabeledGraph, Vertex, VertexMap};
use crate::lang::{self, Limits};

pub const MAX_PERIOD: usize = 12;
/// Largest graph handed to the backtracking isomorphism search.
pub const MAX_ISO_VERTICES: usize = 16;

/// `trace(A^n)` for `n = 1..=k`: the number of points of period `n` in the
/// edge shift of `g`.
pub fn periodic_counts(g: &LabeledGraph, k: usize) -> Result<Vec<u128>> {
    if k > MAX_PERIOD {
        return Err(Error::cap("period", MAX_PERIOD));
    }
    let n = g.vertex_count();
    let mut a = vec![vec![0u128; n]; n];
    for e in g.edges() {
        a[e.src][e.dst] += 1;
    }
    let overflow = || Error::cap("periodic count magnitude", u128::MAX as usize);
    let mut p = a.clone();
    let mut out = Vec::with_capacity(k);
    for step in 1..=k {
        if step > 1 {
            let mut q = vec![vec![0u128; n]; n];
            for i in 0..n {
                for (l, &pil) in p[i].iter().enumerate() {
                    if pil == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = pil.checked_mul(a[l][j]).ok_or_else(overflow)?;
                        q[i][j] = q[i][j].checked_add(t).ok_or_else(overflow)?;
                    }
                }
            }
            p = q;
        }
        out.push((0..n).try_fold(0u128, |s, i| s.checked_add(p[i][i])).ok_or_else(overflow)?);
    }
    Ok(out)
}

/// Letter sets on each ordered vertex pair, with letters of `h` translated
/// into letter ids of `g` by name. `None` if `h` uses a letter `g` lacks.
fn label_matrix(g: &LabeledGraph, h: &LabeledGraph) -> Option<Vec<Vec<VertexSet>>> {
    let n = h.vertex_count();
    let mut m = vec![vec![VertexSet::new(); n]; n];
    for e in h.edges() {
        let a = g.letter_id(h.letter_name(e.label)).ok()?;
        m[e.src][e.dst].insert(a);
    }
    Some(m)
}

fn edge_map(g: &LabeledGraph, h: &LabeledGraph, vertices: &[Vertex]) -> Option<Vec<usize>> {
    g.edges()
        .iter()
        .map(|e| {
            let a = h.letter_id(g.letter_name(e.label)).ok()?;
            h.edges().iter().position(|f| f.src == vertices[e.src] && f.label == a && f.dst == vertices[e.dst])
        })
        .collect()
}

/// A label-preserving isomorphism `g -> h` (letters matched by name), if one exists.
pub fn graphs_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> Result<Option<VertexMap>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (Some(mg), Some(mh)) = (label_matrix(g, g), label_matrix(g, h)) else {
        return Ok(None);
    };
    let check = |vertices: Vec<Vertex>| -> Option<VertexMap> {
        let ok = (0..n).all(|v| (0..n).all(|w| mg[v][w] == mh[vertices[v]][vertices[w]]));
        if !ok {
            return None;
        }
        let edges = edge_map(g, h, &vertices)?;
        Some(VertexMap { vertices, edges: Some(edges) })
    };
    // right-resolving, follower-separated graphs admit at most one candidate
    let separated = |x: &LabeledGraph| x.is_right_resolving() && lang::is_follower_separated(x).unwrap_or(false);
    if separated(g) && separated(h) {
        let class = covers::joint_follower_classes(g, h)?;
        let mut vertices = Vec::with_capacity(n);
        for v in 0..n {
            match (0..n).find(|&w| class[n + w] == class[v]) {
                Some(w) => vertices.push(w),
                None => return Ok(None),
            }
        }
        return Ok(check(vertices));
    }
    if n > MAX_ISO_VERTICES {
        return Err(Error::cap("isomorphism search vertices", MAX_ISO_VERTICES));
    }
    let colors = refine_colors(&mg, &mh);
    let mut assign: Vec<Option<Vertex>> = vec![None; n];
    let mut used = vec![false; n];
    fn search(
        v: usize,
        n: usize,
        colors: &[usize],
        mg: &[Vec<VertexSet>],
        mh: &[Vec<VertexSet>],
        assign: &mut Vec<Option<Vertex>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || colors[v] != colors[n + w] {
                continue;
            }
            let consistent = (0..v).all(|u| {
                let x = assign[u].expect("assigned");
                mg[v][u] == mh[w][x] && mg[u][v] == mh[x][w]
            }) && mg[v][v] == mh[w][w];
            if !consistent {
                continue;
            }
            assign[v] = Some(w);
            used[w] = true;
            if search(v + 1, n, colors, mg, mh, assign, used) {
                return true;
            }
            assign[v] = None;
            used[w] = false;
        }
        false
    }
    if !search(0, n, &colors, &mg, &mh, &mut assign, &mut used) {
        return Ok(None);
    }
    Ok(check(assign.into_iter().map(|x| x.expect("complete")).collect()))
}

/// Joint color refinement over both label matrices; vertices of the second
/// graph are numbered after those of the first.
fn refine_colors(mg: &[Vec<VertexSet>], mh: &[Vec<VertexSet>]) -> Vec<usize> {
    let n = mg.len();
    let mat = |i: usize, j: usize| -> &VertexSet {
        match (i < n, j < n) {
            (true, true) => &mg[i][j],
            (false, false) => &mh[i - n][j - n],
            _ => unreachable!(),
        }
    };
    let side = |i: usize| if i < n { 0..n } else { n..2 * n };
    let mut colors = vec![0usize; 2 * n];
    let mut count = 1;
    loop {
        let keys: Vec<_> = (0..2 * n)
            .map(|i| {
                let mut outs: Vec<(Vec<usize>, usize)> =
                    side(i).filter(|&j| !mat(i, j).is_empty()).map(|j| (mat(i, j).iter().collect(), colors[j])).collect();
                let mut ins: Vec<(Vec<usize>, usize)> =
                    side(i).filter(|&j| !mat(j, i).is_empty()).map(|j| (mat(j, i).iter().collect(), colors[j])).collect();
                outs.sort();
                ins.sort();
                (colors[i], mat(i, i).iter().collect::<Vec<_>>(), outs, ins)
            })
            .collect();
        let mut ids = BTreeMap::new();
        for k in &keys {
            let len = ids.len();
            ids.entry(k.clone()).or_insert(len);
        }
        let next: Vec<usize> = keys.iter().map(|k| ids[k]).collect();
        if ids.len() == count {
            return next;
        }
        count = ids.len();
        colors = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ComponentSignature {
    pub size: usize,
    pub edges: usize,
    pub multiplicity: Option<usize>,
    pub terminal: bool,
    pub source: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub cover: String,
    pub vertices: usize,
    pub edges: usize,
    pub periodic: Vec<u128>,
    pub components: Vec<ComponentSignature>,
    pub dag: String,
}

impl InvariantReport {
    /// The part compared across presentations: periodic counts, component
    /// signatures and the DAG shape.
    pub fn signature_matches(&self, other: &InvariantReport) -> bool {
        self.components == other.components && self.dag == other.dag
    }
}

fn component_edges(g: &LabeledGraph, members: &VertexSet) -> usize {
    g.edges().iter().filter(|e| members.contains(e.src) && members.contains(e.dst)).count()
}

/// Arrows of the component DAG written over canonically sorted components.
/// Components are ordered by `key`, ties broken by the sorted keys of their
/// neighbours; this is a sorting, not a full canonization.
pub fn dag_shape<K: Ord + Clone>(dag: &ComponentDag, keys: &[K]) -> String {
    let k = dag.len();
    let mut rank: Vec<usize> = {
        let mut sorted: Vec<&K> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        keys.iter().map(|x| sorted.binary_search(&x).expect("present")).collect()
    };
    for _ in 0..k {
        let ext: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..k)
            .map(|c| {
                let mut outs: Vec<usize> = dag.arrows.iter().filter(|a| a.0 == c).map(|a| rank[a.1]).collect();
                let mut ins: Vec<usize> = dag.arrows.iter().filter(|a| a.1 == c).map(|a| rank[a.0]).collect();
                outs.sort();
                ins.sort();
                (rank[c], outs, ins)
            })
            .collect();
        let mut sorted = ext.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = ext.iter().map(|x| sorted.binary_search(x).expect("present")).collect();
        if next == rank {
            break;
        }
        rank = next;
    }
    let mut arrows: Vec<(usize, usize)> = dag.arrows.iter().map(|&(a, b)| (rank[a], rank[b])).collect();
    arrows.sort();
    let mut ranks = rank.clone();
    ranks.sort();
    let nodes: Vec<String> = ranks.iter().map(usize::to_string).collect();
    let edges: Vec<String> = arrows.iter().map(|(a, b)| format!("{a}>{b}")).collect();
    format!("[{}] {}", nodes.join(","), edges.join(";"))
}

pub fn invariant_report(cover: &Cover, k: usize) -> Result<InvariantReport> {
    let g = &cover.graph;
    let dag = cover.components();
    let mult = cover.multiplicities(&dag);
    let sigs: Vec<ComponentSignature> = (0..dag.len())
        .map(|c| ComponentSignature {
            size: dag.components[c].len(),
            edges: component_edges(g, &dag.members(c)),
            multiplicity: mult[c],
            terminal: dag.terminal[c],
            source: dag.source[c],
        })
        .collect();
    let dag_str = dag_shape(&dag, &sigs);
    let mut components = sigs;
    components.sort();
    Ok(InvariantReport {
        cover: cover.kind.name().to_string(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        periodic: periodic_counts(g, k)?,
        components,
        dag: dag_str,
    })
}

/// The conjugacy-invariant part of a component signature: periodic counts of
/// the component's own edge shift instead of its vertex and edge numbers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ComponentShape {
    pub periodic: Vec<u128>,
    pub multiplicity: Option<usize>,
    pub terminal: bool,
    pub source: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub components: Vec<ComponentShape>,
    pub dag: String,
}

pub fn shape_report(cover: &Cover, k: usize) -> Result<ShapeReport> {
    let g = &cover.graph;
    let dag = cover.components();
    let mult = cover.multiplicities(&dag);
    let shapes = (0..dag.len())
        .map(|c| {
            let sub = g.subgraph(&dag.members(c), |_| true);
            Ok(ComponentShape {
                periodic: periodic_counts(&sub, k)?,
                multiplicity: mult[c],
                terminal: dag.terminal[c],
                source: dag.source[c],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dag_str = dag_shape(&dag, &shapes);
    let mut components = shapes;
    components.sort();
    Ok(ShapeReport { components, dag: dag_str })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicityCheck {
    pub presentation: String,
    pub cover: String,
    /// `isomorphic`, `periodic-counts`, `component-signature` or `component-shape`.
    pub property: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicityReport {
    pub checks: Vec<CanonicityCheck>,
}

impl CanonicityReport {
    pub fn failures(&self) -> impl Iterator<Item = &CanonicityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn passed(&self, properties: &[&str]) -> bool {
        self.checks.iter().filter(|c| properties.contains(&c.property.as_str())).all(|c| c.pass)
    }
}

/// Alphabet rotation `a_i -> a_{i+1}` used as the relabeling presentation.
pub fn rotation_map(g: &LabeledGraph) -> BTreeMap<String, String> {
    let a = g.alphabet();
    (0..a.len()).map(|i| (a[i].clone(), a[(i + 1) % a.len()].clone())).collect()
}

/// Recodes `g` (2- and 3-block presentations, an alphabet relabeling and the
/// 2-block conjugate) and compares the Krieger and G′ covers of each with
/// those of `g`.
pub fn canonicity_suite(g: &LabeledGraph, k: usize, limits: &Limits) -> Result<CanonicityReport> {
    let rot = rotation_map(g);
    let presentations: Vec<(&str, LabeledGraph)> = vec![
        ("higher-block-2", graph::higher_block(g, 2)?),
        ("higher-block-3", graph::higher_block(g, 3)?),
        ("relabel", graph::relabel(g, &rot)?),
        ("two-block", graph::two_block_recode(g)?),
    ];
    type Build = fn(&LabeledGraph, &Limits) -> Result<Cover>;
    let builders: [(&str, Build); 2] = [
        ("krieger", |g, l| covers::krieger_cover(g, KriegerRoute::Merge, l)),
        ("gprime", gprime::gprime_cover),
    ];
    let mut checks = Vec::new();
    let mut push = |p: &str, c: &str, prop: &str, pass: bool, detail: String| {
        checks.push(CanonicityCheck {
            presentation: p.into(),
            cover: c.into(),
            property: prop.into(),
            pass,
            detail,
        })
    };
    let mut base: HashMap<&str, (Cover, InvariantReport, ShapeReport)> = HashMap::new();
    for (name, build) in builders {
        let c = build(g, limits)?;
        let r = invariant_report(&c, k)?;
        let s = shape_report(&c, k)?;
        base.insert(name, (c, r, s));
    }
    for (pname, p) in &presentations {
        for (cname, build) in builders {
            let (bc, br, bs) = &base[cname];
            let c = build(p, limits)?;
            let r = invariant_report(&c, k)?;
            let s = shape_report(&c, k)?;
            if cname == "krieger" {
                let target = if *pname == "relabel" { graph::relabel(&bc.graph, &rot)? } else { bc.graph.clone() };
                if *pname != "two-block" {
                    let iso = graphs_isomorphic(&c.graph, &target)?.is_some();
                    push(pname, cname, "isomorphic", iso, format!("{} vertices vs {}", c.graph.vertex_count(), target.vertex_count()));
                }
            }
            push(
                pname,
                cname,
                "periodic-counts",
                r.periodic == br.periodic,
                format!("{:?} vs {:?}", r.periodic, br.periodic),
            );
            let sig = |x: &InvariantReport| {
                let cs: Vec<String> = x
                    .components
                    .iter()
                    .map(|c| format!("({},{},{:?},{},{})", c.size, c.edges, c.multiplicity, c.terminal, c.source))
                    .collect();
                format!("{} {}", cs.join(""), x.dag)
            };
            push(pname, cname, "component-signature", r.signature_matches(br), format!("{} vs {}", sig(&r), sig(br)));
            push(pname, cname, "component-shape", s == *bs, format!("{} components vs {}", s.components.len(), bs.components.len()));
        }
    }
    Ok(CanonicityReport { checks })
}
