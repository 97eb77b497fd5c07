//! The double-subset graph G″, the fibers of points over it, and the cover
//! G′ spanned by the components that left tails settle into.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::covers::{self, Cover, CoverKind};
use crate::error::{Error, Result};
use crate::graph::{self, ComponentDag, LabeledGraph, Letter};
use crate::lang::{self, Limits, Relation};
use crate::seq::{EpPath, EpSeq, Point};

/// Largest idempotent range whose subsets are enumerated.
const MAX_RANGE: usize = 20;

fn require_presentation(g: &LabeledGraph) -> Result<()> {
    g.require_right_resolving()?;
    g.require_trim()
}

/// `F -a-> [F, a]` exists only when every member of `F` has an `a`-edge.
fn ds_step(g: &LabeledGraph, f: &VertexSet, a: Letter) -> Option<VertexSet> {
    let mut t = VertexSet::new();
    for v in f {
        t.insert(g.successor(v, a)?);
    }
    Some(t)
}

/// The double-subset graph, trimmed. Its recurrent vertices are exactly the
/// nonempty subsets of ranges of idempotent relations, so the construction
/// starts from those and follows edges forward.
pub fn double_subset_graph(g: &LabeledGraph, limits: &Limits) -> Result<Cover> {
    require_presentation(g)?;
    let m = lang::relation_monoid(g, limits)?;
    let mut seeds: Vec<VertexSet> = Vec::new();
    let mut seen: HashMap<VertexSet, usize> = HashMap::new();
    for e in m.idempotents() {
        let r = e.relation.range();
        if r.len() > MAX_RANGE {
            return Err(Error::cap("idempotent range size", MAX_RANGE));
        }
        for s in r.nonempty_subsets() {
            if !seen.contains_key(&s) {
                seen.insert(s.clone(), seeds.len());
                seeds.push(s);
            }
        }
    }
    let mut states = seeds;
    let mut queue: VecDeque<usize> = (0..states.len()).collect();
    let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
    while let Some(i) = queue.pop_front() {
        for a in 0..g.alphabet().len() {
            let Some(t) = ds_step(g, &states[i], a) else { continue };
            let j = match seen.get(&t) {
                Some(&j) => j,
                None => {
                    if states.len() >= limits.subsets {
                        return Err(Error::cap("double-subset graph states", limits.subsets));
                    }
                    seen.insert(t.clone(), states.len());
                    queue.push_back(states.len());
                    states.push(t);
                    states.len() - 1
                }
            };
            edges.push((i, a, j));
        }
    }
    // trim in index space, then renumber
    let n = states.len();
    let mut alive = vec![true; n];
    loop {
        let mut out = vec![0usize; n];
        let mut inn = vec![0usize; n];
        for &(s, _, d) in &edges {
            if alive[s] && alive[d] {
                out[s] += 1;
                inn[d] += 1;
            }
        }
        let dead: Vec<usize> = (0..n).filter(|&v| alive[v] && (out[v] == 0 || inn[v] == 0)).collect();
        if dead.is_empty() {
            break;
        }
        for v in dead {
            alive[v] = false;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let kept_edges: Vec<(usize, Letter, usize)> = edges
        .iter()
        .filter(|(s, _, d)| alive[*s] && alive[*d])
        .map(|&(s, a, d)| (pos[&s], a, pos[&d]))
        .collect();
    let members = keep.iter().map(|&v| vec![states[v].clone()]).collect();
    Cover::assemble(g, CoverKind::DoubleSubset, members, &kept_edges)
}

/// The fibers `F_i = D_i ∩ W_i` of a point over the double-subset graph:
/// `D_i` is the tail set of the left half ending at `i` and `W_i` the set of
/// vertices from which the right half starting at `i` can be read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPath {
    pub point: Point,
    pub fibers: EpSeq<VertexSet>,
}

impl FiberPath {
    /// The path of G″ edges `F_i -y_i-> F_{i+1}`.
    pub fn to_path(&self, g2: &Cover) -> Result<EpPath> {
        let edge = |f: &VertexSet, a: &Letter| {
            g2.vertex_of(f)
                .and_then(|v| g2.graph.edge_from(v, *a))
                .ok_or_else(|| Error::Internal(format!("fiber {f:?} has no {a}-edge in the double-subset graph")))
        };
        let part = |fs: &[VertexSet], ys: &[Letter]| -> Result<Vec<usize>> {
            fs.iter().zip(ys).map(|(f, a)| edge(f, a)).collect()
        };
        EpSeq::new(
            part(&self.fibers.left, &self.point.left)?,
            part(&self.fibers.mid, &self.point.mid)?,
            part(&self.fibers.right, &self.point.right)?,
            self.fibers.origin,
        )
    }

    /// The fiber the left tail repeats.
    pub fn left_fibers(&self) -> &[VertexSet] {
        &self.fibers.left
    }
}

/// Vertices from which `v^∞` can be read.
fn viable_forever(g: &LabeledGraph, v: &[Letter]) -> VertexSet {
    let mut w = g.full_set();
    loop {
        let next = g.preimage(&w, v);
        if next == w {
            return w;
        }
        w = next;
    }
}

/// `β(y)` for `y = u^∞ . w v^∞`.
pub fn beta(g: &LabeledGraph, y: &Point) -> Result<FiberPath> {
    require_presentation(g)?;
    let (u, w, v) = (&y.left, &y.mid, &y.right);
    let d0 = covers::tail_set(g, u, &[])?;
    let w_star = viable_forever(g, v);
    let w_origin = g.preimage(&w_star, w);
    // W at the u-block boundaries to the left, until it repeats
    let mut blocks = vec![w_origin.clone()];
    let (k0, k1) = loop {
        let next = g.preimage(blocks.last().unwrap(), u);
        if let Some(k0) = blocks.iter().position(|b| *b == next) {
            break (k0, blocks.len());
        }
        blocks.push(next);
    };
    let fiber = |d: &VertexSet, wv: &VertexSet| -> Result<VertexSet> {
        let f = d.intersection(wv);
        if f.is_empty() {
            return Err(Error::NotInShift("empty fiber".into()));
        }
        Ok(f)
    };
    // fibers of u-block k (k >= 1 counts blocks to the left of the origin)
    let u_block = |k: usize| -> Result<Vec<VertexSet>> {
        let target = &blocks[k - 1];
        let mut d = d0.clone();
        let mut out = Vec::with_capacity(u.len());
        for j in 0..u.len() {
            out.push(fiber(&d, &g.preimage(target, &u[j..]))?);
            d = g.step(&d, u[j]);
        }
        Ok(out)
    };
    // W at block k1 equals W at block k0, so blocks k0+1 ..= k1 form the cycle
    let mut left = Vec::new();
    for k in (k0 + 1..=k1).rev() {
        left.extend(u_block(k)?);
    }
    let mut mid = Vec::new();
    for k in (1..=k0).rev() {
        mid.extend(u_block(k)?);
    }
    let mut d = d0.clone();
    for i in 0..w.len() {
        mid.push(fiber(&d, &g.preimage(&w_star, &w[i..]))?);
        d = g.step(&d, w[i]);
    }
    let w_right: Vec<VertexSet> = (0..v.len()).map(|j| g.preimage(&w_star, &v[j..])).collect();
    let mut starts: Vec<VertexSet> = Vec::new();
    let (t, p) = loop {
        if let Some(t) = starts.iter().position(|s| *s == d) {
            break (t, starts.len() - t);
        }
        starts.push(d.clone());
        for j in 0..v.len() {
            d = g.step(&d, v[j]);
        }
    };
    let mut right = Vec::new();
    for (b, s) in starts.iter().enumerate() {
        let mut d = s.clone();
        let dest = if b < t { &mut mid } else { &mut right };
        for j in 0..v.len() {
            dest.push(fiber(&d, &w_right[j])?);
            d = g.step(&d, v[j]);
        }
    }
    debug_assert_eq!(starts.len(), t + p);
    let origin = y.origin - (k0 * u.len()) as i64;
    let rep = |x: &[Letter], n: usize| -> Vec<Letter> { x.iter().copied().cycle().take(x.len() * n).collect() };
    let mut pm = rep(u, k0);
    pm.extend_from_slice(w);
    pm.extend(rep(v, t));
    let point = EpSeq::new(rep(u, k1 - k0), pm, rep(v, p), origin)?;
    let fibers = EpSeq::new(left, mid, right, origin)?;
    Ok(FiberPath { point, fibers })
}

/// G″ component holding the left tail of `β(y)`.
pub fn backward_tail_component(g2: &Cover, dag: &ComponentDag, fp: &FiberPath) -> Result<usize> {
    let comps: HashSet<Option<usize>> = fp
        .left_fibers()
        .iter()
        .map(|f| g2.vertex_of(f).and_then(|v| dag.component_of[v]))
        .collect();
    match comps.into_iter().collect::<Vec<_>>()[..] {
        [Some(c)] => Ok(c),
        _ => Err(Error::Internal("left tail of a fiber path leaves its component".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub left: usize,
    pub mid: usize,
    pub right: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { left: 6, mid: 6, right: 6 }
    }
}

/// A point written with letter names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub left: Vec<String>,
    pub mid: Vec<String>,
    pub right: Vec<String>,
}

impl Witness {
    fn of(g: &LabeledGraph, u: &[Letter], w: &[Letter], v: &[Letter]) -> Self {
        let names = |x: &[Letter]| x.iter().map(|&a| g.letter_name(a).to_string()).collect();
        Witness { left: names(u), mid: names(w), right: names(v) }
    }

    pub fn point(&self, g: &LabeledGraph) -> Result<Point> {
        let ids = |x: &[String]| x.iter().map(|a| g.letter_id(a)).collect::<Result<Vec<_>>>();
        EpSeq::point(ids(&self.left)?, ids(&self.mid)?, ids(&self.right)?)
    }
}

/// Which G″ components are reached by left tails, with a witness point for
/// each, and the result of the bounded enumeration used as a cross-check.
#[derive(Clone, Debug, Serialize)]
pub struct SelectionReport {
    /// Every G″ component, as lists of vertex names.
    pub components: Vec<Vec<String>>,
    pub selected: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub bounds: Bounds,
    /// Components found by enumerating points within `bounds`.
    pub enumerated: Vec<usize>,
    pub enumerated_points: usize,
}

/// Components of G″ in which some `β(y)` ends up to the left. A left tail
/// `u^∞` settles on `range(e) ∩ W` where `e` is the idempotent power of
/// `R_u` and `W` is a preimage of the domain of an idempotent, so the
/// selection is computed exactly from the relation monoid; bounded point
/// enumeration confirms it from below.
pub fn asymptotic_components(g: &LabeledGraph, bounds: Bounds, limits: &Limits) -> Result<(Cover, SelectionReport)> {
    let g2 = double_subset_graph(g, limits)?;
    let dag = g2.components();
    let m = lang::relation_monoid(g, limits)?;
    let idem: Vec<(&Relation, &Vec<Letter>)> = m.idempotents().map(|e| (&e.relation, &e.witness)).collect();

    // preimages of idempotent domains, each with (idempotent, word) witness
    let mut ws: Vec<(VertexSet, usize, Vec<Letter>)> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for (i, (e, _)) in idem.iter().enumerate() {
        let d = e.domain();
        if seen.insert(d.clone()) {
            queue.push_back(ws.len());
            ws.push((d, i, Vec::new()));
        }
    }
    while let Some(i) = queue.pop_front() {
        for a in 0..g.alphabet().len() {
            let pre = g.preimage(&ws[i].0, &[a]);
            if !pre.is_empty() && seen.insert(pre.clone()) {
                let mut w = vec![a];
                w.extend_from_slice(&ws[i].2);
                queue.push_back(ws.len());
                ws.push((pre, ws[i].1, w));
            }
        }
    }

    let mut witness_of: HashMap<usize, Witness> = HashMap::new();
    for (e, u) in &idem {
        let r = e.range();
        for (wset, j, w) in &ws {
            let f = r.intersection(wset);
            if f.is_empty() {
                continue;
            }
            let c = g2
                .vertex_of(&f)
                .and_then(|x| dag.component_of[x])
                .ok_or_else(|| Error::Internal("settled fiber is not recurrent".into()))?;
            witness_of.entry(c).or_insert_with(|| Witness::of(g, u, w, idem[*j].1));
        }
    }
    let mut selected: Vec<usize> = witness_of.keys().copied().collect();
    selected.sort_unstable();
    let witnesses = selected.iter().map(|c| witness_of[c].clone()).collect();

    let (enumerated, enumerated_points) = enumerate_components(g, &g2, &dag, &m, bounds)?;
    if let Some(c) = enumerated.iter().find(|c| !selected.contains(c)) {
        return Err(Error::Internal(format!("enumeration reached unselected component {c}")));
    }
    let components = dag
        .components
        .iter()
        .map(|c| c.iter().map(|&v| g2.graph.vertex_name(v).to_string()).collect())
        .collect();
    let report = SelectionReport { components, selected, witnesses, bounds, enumerated, enumerated_points };
    Ok((g2, report))
}

fn rotations(w: &[Letter]) -> impl Iterator<Item = Vec<Letter>> + '_ {
    (0..w.len()).map(move |i| {
        let mut r = w.to_vec();
        r.rotate_left(i);
        r
    })
}

/// Backward-tail components of `β(u^∞ . w v^∞)` for `u`, `v` among the
/// idempotent witnesses (and rotations) within the bounds and every `w` up
/// to the middle bound that keeps the point in the shift.
fn enumerate_components(
    g: &LabeledGraph,
    g2: &Cover,
    dag: &ComponentDag,
    m: &lang::RelationMonoid,
    bounds: Bounds,
) -> Result<(Vec<usize>, usize)> {
    let periods = |bound: usize| -> Vec<Vec<Letter>> {
        let mut by_rel: HashMap<Relation, Vec<Letter>> = HashMap::new();
        for e in m.idempotents().filter(|e| e.witness.len() <= bound) {
            for r in rotations(&e.witness) {
                let rel = Relation::of_word(g, &r);
                by_rel.entry(rel).or_insert(r);
            }
        }
        let mut out: Vec<Vec<Letter>> = by_rel.into_values().collect();
        out.sort();
        out
    };
    let (us, vs) = (periods(bounds.left), periods(bounds.right));
    let mut found = HashSet::new();
    let mut count = 0;
    for u in &us {
        let d0 = covers::tail_set(g, u, &[])?;
        for v in &vs {
            let viable = viable_forever(g, v);
            let mut stack: Vec<(Vec<Letter>, VertexSet)> = vec![(Vec::new(), d0.clone())];
            while let Some((w, d)) = stack.pop() {
                if d.intersects(&viable) {
                    let y = EpSeq::point(u.clone(), w.clone(), v.clone())?;
                    let fp = beta(g, &y)?;
                    found.insert(backward_tail_component(g2, dag, &fp)?);
                    count += 1;
                }
                if w.len() < bounds.mid {
                    for a in 0..g.alphabet().len() {
                        let d2 = g.step(&d, a);
                        if !d2.is_empty() {
                            let mut w2 = w.clone();
                            w2.push(a);
                            stack.push((w2, d2));
                        }
                    }
                }
            }
        }
    }
    let mut found: Vec<usize> = found.into_iter().collect();
    found.sort_unstable();
    Ok((found, count))
}

pub fn gprime_cover(g: &LabeledGraph, limits: &Limits) -> Result<Cover> {
    gprime_with_report(g, Bounds::default(), limits).map(|(c, _)| c)
}

/// G′: the part of G″ hereditarily generated by the selected components.
pub fn gprime_with_report(g: &LabeledGraph, bounds: Bounds, limits: &Limits) -> Result<(Cover, SelectionReport)> {
    let (g2, report) = asymptotic_components(g, bounds, limits)?;
    let dag = g2.components();
    let mut seed = VertexSet::new();
    for &c in &report.selected {
        seed.union_with(&dag.members(c));
    }
    let keep = graph::hereditary_closure(&g2.graph, &seed);
    Ok((g2.restrict(&keep, CoverKind::Gprime)?, report))
}
