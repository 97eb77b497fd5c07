//! Language-level machinery: subset images, the relation monoid, the family
//! of tail sets and follower-set comparisons.

use std::collections::{HashMap, VecDeque};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Letter, Vertex, VertexMap};

/// Hard limits on the exponential constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of relation monoid elements.
    pub monoid: usize,
    /// Maximum number of states of any subset construction.
    pub subsets: usize,
    /// Longest word length `words_up_to` accepts.
    pub word_length: usize,
    /// Maximum number of words `words_up_to` may return.
    pub word_count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { monoid: 1_000_000, subsets: 1_000_000, word_length: 16, word_count: 10_000_000 }
    }
}

impl Limits {
    /// Defaults, with the monoid and subset caps overridden by `SOFICOV_CAP`.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(cap) = std::env::var("SOFICOV_CAP").ok().and_then(|s| s.trim().parse().ok()) {
            l.monoid = cap;
            l.subsets = cap;
        }
        l
    }
}

fn check_word(g: &LabeledGraph, w: &[Letter]) -> Result<()> {
    match w.iter().find(|&&a| a >= g.alphabet().len()) {
        Some(a) => Err(Error::UnknownLetter(format!("#{a}"))),
        None => Ok(()),
    }
}

/// `[s, w]` with letters checked against the alphabet.
pub fn image_of(g: &LabeledGraph, s: &VertexSet, w: &[Letter]) -> Result<VertexSet> {
    check_word(g, w)?;
    Ok(g.image(s, w))
}

pub fn contains_word(g: &LabeledGraph, w: &[Letter]) -> Result<bool> {
    Ok(!image_of(g, &g.full_set(), w)?.is_empty() && !g.is_empty())
}

/// A deterministic automaton on nonempty vertex sets, closed under nonempty
/// letter images. Empty images are missing transitions.
#[derive(Clone, Debug)]
pub struct SubsetAutomaton {
    pub states: Vec<VertexSet>,
    pub trans: Vec<Vec<Option<usize>>>,
    index: HashMap<VertexSet, usize>,
}

impl SubsetAutomaton {
    pub fn state_of(&self, s: &VertexSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn run(&self, from: usize, w: &[Letter]) -> Option<usize> {
        w.iter().try_fold(from, |s, &a| self.trans[s][a])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Closure of `seeds` under nonempty letter images, in breadth-first order.
pub fn subset_closure(g: &LabeledGraph, seeds: &[VertexSet], limits: &Limits) -> Result<SubsetAutomaton> {
    let k = g.alphabet().len();
    let mut states: Vec<VertexSet> = Vec::new();
    let mut index = HashMap::new();
    let mut queue = VecDeque::new();
    for s in seeds.iter().filter(|s| !s.is_empty()) {
        if !index.contains_key(s) {
            index.insert(s.clone(), states.len());
            queue.push_back(states.len());
            states.push(s.clone());
        }
    }
    let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let mut row = vec![None; k];
        for (a, slot) in row.iter_mut().enumerate() {
            let t = g.step(&states[i], a);
            if t.is_empty() {
                continue;
            }
            let j = match index.get(&t) {
                Some(&j) => j,
                None => {
                    if states.len() >= limits.subsets {
                        return Err(Error::cap("subset construction states", limits.subsets));
                    }
                    index.insert(t.clone(), states.len());
                    queue.push_back(states.len());
                    states.push(t);
                    states.len() - 1
                }
            };
            *slot = Some(j);
        }
        if trans.len() <= i {
            trans.resize(i + 1, Vec::new());
        }
        trans[i] = row;
    }
    Ok(SubsetAutomaton { states, trans, index })
}

/// The subset automaton started from the full vertex set.
pub fn subset_automaton(g: &LabeledGraph, limits: &Limits) -> Result<SubsetAutomaton> {
    subset_closure(g, &[g.full_set()], limits)
}

/// Every word of length at most `n`, in lexicographic order.
pub fn words_up_to(g: &LabeledGraph, n: usize, limits: &Limits) -> Result<Vec<Vec<Letter>>> {
    if n > limits.word_length {
        return Err(Error::cap("word length", limits.word_length));
    }
    let mut out = Vec::new();
    if g.is_empty() {
        return Ok(out);
    }
    fn go(
        g: &LabeledGraph,
        s: &VertexSet,
        w: &mut Vec<Letter>,
        n: usize,
        cap: usize,
        out: &mut Vec<Vec<Letter>>,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::cap("word count", cap));
        }
        out.push(w.clone());
        if w.len() == n {
            return Ok(());
        }
        for a in 0..g.alphabet().len() {
            let t = g.step(s, a);
            if !t.is_empty() {
                w.push(a);
                go(g, &t, w, n, cap, out)?;
                w.pop();
            }
        }
        Ok(())
    }
    go(g, &g.full_set(), &mut Vec::new(), n, limits.word_count, &mut out)?;
    Ok(out)
}

/// A relation on vertices, stored as one successor set per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub rows: Vec<VertexSet>,
}

impl Relation {
    pub fn of_letter(g: &LabeledGraph, a: Letter) -> Relation {
        Relation { rows: (0..g.vertex_count()).map(|v| g.successors(v, a).collect()).collect() }
    }

    pub fn of_word(g: &LabeledGraph, w: &[Letter]) -> Relation {
        let n = g.vertex_count();
        let mut r = Relation { rows: (0..n).map(VertexSet::singleton).collect() };
        for &a in w {
            r = r.then(&Relation::of_letter(g, a));
        }
        r
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Relation) -> Relation {
        Relation {
            rows: self
                .rows
                .iter()
                .map(|row| {
                    let mut s = VertexSet::new();
                    for u in row {
                        s.union_with(&other.rows[u]);
                    }
                    s
                })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(VertexSet::is_empty)
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }

    pub fn range(&self) -> VertexSet {
        let mut s = VertexSet::new();
        for r in &self.rows {
            s.union_with(r);
        }
        s
    }

    pub fn domain(&self) -> VertexSet {
        (0..self.rows.len()).filter(|&v| !self.rows[v].is_empty()).collect()
    }

    pub fn apply(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out.union_with(&self.rows[v]);
        }
        out
    }

    pub fn preimage(&self, s: &VertexSet) -> VertexSet {
        (0..self.rows.len()).filter(|&v| self.rows[v].intersects(s)).collect()
    }

    /// The idempotent power of `self` (it exists in any finite monoid).
    pub fn idempotent_power(&self) -> Relation {
        let mut p = self.clone();
        loop {
            if p.is_idempotent() {
                return p;
            }
            p = p.then(self);
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonoidElement {
    pub relation: Relation,
    /// A shortest word realizing the relation.
    pub witness: Vec<Letter>,
    pub idempotent: bool,
}

/// The semigroup of relations `R_w` for nonempty words `w`.
#[derive(Clone, Debug)]
pub struct RelationMonoid {
    pub elements: Vec<MonoidElement>,
}

impl RelationMonoid {
    pub fn nonzero(&self) -> impl Iterator<Item = &MonoidElement> {
        self.elements.iter().filter(|e| !e.relation.is_zero())
    }

    pub fn idempotents(&self) -> impl Iterator<Item = &MonoidElement> {
        self.nonzero().filter(|e| e.idempotent)
    }
}

pub fn relation_monoid(g: &LabeledGraph, limits: &Limits) -> Result<RelationMonoid> {
    let letters: Vec<Relation> = (0..g.alphabet().len()).map(|a| Relation::of_letter(g, a)).collect();
    let mut elements: Vec<MonoidElement> = Vec::new();
    let mut index: HashMap<Relation, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut add = |r: Relation, w: Vec<Letter>, elements: &mut Vec<MonoidElement>, queue: &mut VecDeque<usize>| {
        if index.contains_key(&r) {
            return Ok(());
        }
        if elements.len() >= limits.monoid {
            return Err(Error::cap("relation monoid size", limits.monoid));
        }
        index.insert(r.clone(), elements.len());
        queue.push_back(elements.len());
        let idempotent = r.is_idempotent();
        elements.push(MonoidElement { relation: r, witness: w, idempotent });
        Ok(())
    };
    for (a, r) in letters.iter().enumerate() {
        add(r.clone(), vec![a], &mut elements, &mut queue)?;
    }
    while let Some(i) = queue.pop_front() {
        if elements[i].relation.is_zero() {
            continue;
        }
        for (a, r) in letters.iter().enumerate() {
            let next = elements[i].relation.then(r);
            let mut w = elements[i].witness.clone();
            w.push(a);
            add(next, w, &mut elements, &mut queue)?;
        }
    }
    Ok(RelationMonoid { elements })
}

/// The family of sets `D^y` over left-infinite tails `y`: ranges of the
/// nonzero idempotents closed under letter images. Sorted.
pub fn dee_family(g: &LabeledGraph, limits: &Limits) -> Result<Vec<VertexSet>> {
    let m = relation_monoid(g, limits)?;
    dee_family_from(g, &m, limits)
}

pub fn dee_family_from(g: &LabeledGraph, m: &RelationMonoid, limits: &Limits) -> Result<Vec<VertexSet>> {
    let seeds: Vec<VertexSet> = m.idempotents().map(|e| e.relation.range()).collect();
    let mut fam = subset_closure(g, &seeds, limits)?.states;
    fam.sort();
    Ok(fam)
}

/// Coarsest partition of the states of a partial deterministic automaton
/// (all states accepting) into classes with equal languages. Classes are
/// numbered by first occurrence.
pub fn moore_partition(trans: &[Vec<Option<usize>>]) -> Vec<usize> {
    let renumber = |keys: Vec<Vec<usize>>| -> (Vec<usize>, usize) {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let cls = keys
            .into_iter()
            .map(|k| {
                let n = seen.len();
                *seen.entry(k).or_insert(n)
            })
            .collect();
        (cls, seen.len())
    };
    let init: Vec<Vec<usize>> =
        trans.iter().map(|row| row.iter().map(|t| usize::from(t.is_some())).collect()).collect();
    let (mut class, mut count) = renumber(init);
    loop {
        let keys: Vec<Vec<usize>> = trans
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let mut k = vec![class[s]];
                k.extend(row.iter().map(|t| t.map_or(usize::MAX, |j| class[j])));
                k
            })
            .collect();
        let (next, n) = renumber(keys);
        if n == count {
            return next;
        }
        class = next;
        count = n;
    }
}

/// Transition table of a right-resolving graph.
pub fn transition_table(g: &LabeledGraph) -> Vec<Vec<Option<usize>>> {
    (0..g.vertex_count())
        .map(|v| (0..g.alphabet().len()).map(|a| g.successor(v, a)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowerPartition {
    pub class_of: Vec<usize>,
    pub classes: Vec<VertexSet>,
}

impl FollowerPartition {
    fn from_classes(class_of: Vec<usize>) -> Self {
        let k = class_of.iter().max().map_or(0, |m| m + 1);
        let mut classes = vec![VertexSet::new(); k];
        for (v, &c) in class_of.iter().enumerate() {
            classes[c].insert(v);
        }
        FollowerPartition { class_of, classes }
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }
}

/// Vertices grouped by equal follower sets. The graph must be right-resolving.
pub fn follower_partition(g: &LabeledGraph) -> Result<FollowerPartition> {
    g.require_right_resolving()?;
    Ok(FollowerPartition::from_classes(moore_partition(&transition_table(g))))
}

pub fn is_follower_separated(g: &LabeledGraph) -> Result<bool> {
    Ok(follower_partition(g)?.is_discrete())
}

/// `incl[u].contains(v)` iff `f(u) ⊆ f(v)`, for a right-resolving graph.
/// This is the greatest simulation relation.
pub fn follower_inclusions(g: &LabeledGraph) -> Result<Vec<VertexSet>> {
    g.require_right_resolving()?;
    let n = g.vertex_count();
    let labels: Vec<VertexSet> = (0..n).map(|v| g.out_labels(v)).collect();
    let mut incl: Vec<VertexSet> =
        (0..n).map(|u| (0..n).filter(|&v| labels[u].is_subset(&labels[v])).collect()).collect();
    loop {
        let mut changed = false;
        for u in 0..n {
            let bad: Vec<Vertex> = incl[u]
                .iter()
                .filter(|&v| {
                    g.out_edges(u).iter().any(|&i| {
                        let e = g.edge(i);
                        match g.successor(v, e.label) {
                            Some(v2) => !incl[e.dst].contains(v2),
                            None => true,
                        }
                    })
                })
                .collect();
            for v in bad {
                incl[u].remove(v);
                changed = true;
            }
        }
        if !changed {
            return Ok(incl);
        }
    }
}

/// Whether `f(v1)` in `g1` is contained in `f(v2)` in `g2`. Letters are
/// matched by name. Both graphs must be right-resolving.
pub fn follower_includes(g1: &LabeledGraph, v1: Vertex, g2: &LabeledGraph, v2: Vertex) -> Result<bool> {
    g1.require_right_resolving()?;
    g2.require_right_resolving()?;
    let lmap: Vec<Option<Letter>> = g1.alphabet().iter().map(|a| g2.letter_id(a).ok()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(v1, v2)];
    seen.insert((v1, v2));
    while let Some((x, y)) = stack.pop() {
        for &i in g1.out_edges(x) {
            let e = g1.edge(i);
            let Some(y2) = lmap[e.label].and_then(|b| g2.successor(y, b)) else {
                return Ok(false);
            };
            if seen.insert((e.dst, y2)) {
                stack.push((e.dst, y2));
            }
        }
    }
    Ok(true)
}

/// Quotient of a right-resolving graph by follower equivalence. Each class
/// is named after its first member.
pub fn merged_graph(g: &LabeledGraph) -> Result<(LabeledGraph, VertexMap)> {
    let p = follower_partition(g)?;
    let rep = |c: usize| g.vertex_name(p.classes[c].first().expect("classes are nonempty"));
    let triples: Vec<(&str, &str, &str)> = g
        .edges()
        .iter()
        .map(|e| (rep(p.class_of[e.src]), g.letter_name(e.label), rep(p.class_of[e.dst])))
        .collect();
    let names: Vec<&str> = (0..p.classes.len()).map(rep).collect();
    let alpha: Vec<&str> = g.alphabet().iter().map(String::as_str).collect();
    let m = LabeledGraph::build(names, alpha, triples)?;
    let vertices: Vec<Vertex> =
        p.class_of.iter().map(|&c| m.vertex_id(rep(c)).expect("class vertex")).collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| m.edge_from(vertices[e.src], e.label).expect("quotient edge"))
        .collect();
    Ok((m, VertexMap { vertices, edges: Some(edges) }))
}

/// A shortest word in exactly one of the two languages, with letters by name.
pub fn distinguishing_word(g1: &LabeledGraph, g2: &LabeledGraph, limits: &Limits) -> Result<Option<Vec<String>>> {
    let mut alpha: Vec<&str> = g1.alphabet().iter().chain(g2.alphabet()).map(String::as_str).collect();
    alpha.sort_unstable();
    alpha.dedup();
    let step = |g: &LabeledGraph, s: &VertexSet, a: &str| match g.letter_id(a) {
        Ok(l) => g.step(s, l),
        Err(_) => VertexSet::new(),
    };
    let start = (g1.full_set(), g2.full_set());
    if start.0.is_empty() != start.1.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if start.0.is_empty() {
        return Ok(None);
    }
    let mut seen: HashMap<(VertexSet, VertexSet), Vec<String>> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), Vec::new());
    queue.push_back(start);
    while let Some((s1, s2)) = queue.pop_front() {
        let w = seen[&(s1.clone(), s2.clone())].clone();
        for a in &alpha {
            let (t1, t2) = (step(g1, &s1, a), step(g2, &s2, a));
            let mut w2 = w.clone();
            w2.push(a.to_string());
            if t1.is_empty() != t2.is_empty() {
                return Ok(Some(w2));
            }
            if !t1.is_empty() && !seen.contains_key(&(t1.clone(), t2.clone())) {
                if seen.len() >= limits.subsets {
                    return Err(Error::cap("language comparison states", limits.subsets));
                }
                seen.insert((t1.clone(), t2.clone()), w2);
                queue.push_back((t1, t2));
            }
        }
    }
    Ok(None)
}

pub fn language_equal(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<bool> {
    Ok(distinguishing_word(g1, g2, &Limits::default())?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(g: &LabeledGraph, names: &[&str]) -> VertexSet {
        names.iter().map(|n| g.vertex_id(n).unwrap()).collect()
    }

    #[test]
    fn images_on_ev2() {
        let g = fixtures::ev2();
        let w = g.parse_word("0").unwrap();
        assert_eq!(image_of(&g, &g.full_set(), &w).unwrap(), g.full_set());
        let w = g.parse_word("1").unwrap();
        assert_eq!(image_of(&g, &g.full_set(), &w).unwrap(), set(&g, &["a"]));
        let w = g.parse_word("101").unwrap();
        assert!(image_of(&g, &g.full_set(), &w).unwrap().is_empty());
        assert!(!contains_word(&g, &w).unwrap());
        assert!(image_of(&g, &g.full_set(), &[7]).is_err());
    }

    #[test]
    fn ev2_monoid() {
        let g = fixtures::ev2();
        let m = relation_monoid(&g, &Limits::default()).unwrap();
        let words: Vec<String> = m.nonzero().map(|e| g.format_word(&e.witness)).collect();
        assert_eq!(words, vec!["0", "1", "00", "01", "10", "010"]);
        assert_eq!(m.elements.len(), 7);
        let mut ranges: Vec<String> = m.idempotents().map(|e| g.format_set(&e.relation.range())).collect();
        ranges.sort();
        assert_eq!(ranges, vec!["{a,b}", "{a}", "{b}"]);
    }

    #[test]
    fn dee_family_of_nr3() {
        let g = fixtures::nr3();
        let fam: Vec<String> =
            dee_family(&g, &Limits::default()).unwrap().iter().map(|s| g.format_set(s)).collect();
        assert_eq!(fam, vec!["{b}", "{c}", "{a,b,c}"]);
    }

    #[test]
    fn ev4_follower_classes() {
        let g = fixtures::ev4();
        let p = follower_partition(&g).unwrap();
        let cls: Vec<String> = p.classes.iter().map(|c| g.format_set(c)).collect();
        assert_eq!(cls, vec!["{a,d}", "{b,c}"]);
        let (m, map) = merged_graph(&g).unwrap();
        assert_eq!(crate::graph::to_lg(&m), "a 0 b\nb 0 a\nb 1 b\n");
        assert_eq!(map.vertices, vec![0, 1, 1, 0]);
    }

    #[test]
    fn inclusions_on_nr3() {
        let g = fixtures::nr3();
        let incl = follower_inclusions(&g).unwrap();
        let (a, b, c) = (0, 1, 2);
        assert!(incl[b].contains(a) && incl[b].contains(c));
        assert!(!incl[c].contains(a) && !incl[a].contains(c));
        assert!(follower_includes(&g, b, &g, a).unwrap());
        assert!(!follower_includes(&g, c, &g, a).unwrap());
    }

    #[test]
    fn words_are_lexicographic() {
        let g = fixtures::ev2();
        let ws: Vec<String> =
            words_up_to(&g, 2, &Limits::default()).unwrap().iter().map(|w| g.format_word(w)).collect();
        assert_eq!(ws, vec!["", "0", "00", "01", "1", "10", "11"]);
        assert!(matches!(words_up_to(&g, 17, &Limits::default()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn languages() {
        let ev2 = fixtures::ev2();
        let ev3 = fixtures::ev3();
        assert!(language_equal(&ev2, &ev3).unwrap());
        assert!(language_equal(&fixtures::mx5(), &fixtures::mx5_follower()).unwrap());
        assert!(language_equal(&ev2, &fixtures::ev4()).unwrap());
        let w = distinguishing_word(&ev2, &fixtures::nr3(), &Limits::default()).unwrap().unwrap();
        assert_eq!(w, vec!["0"]);
    }

    #[test]
    fn monoid_cap() {
        let g = fixtures::mx5();
        let tiny = Limits { monoid: 3, ..Limits::default() };
        assert!(matches!(relation_monoid(&g, &tiny), Err(Error::CapExceeded { .. })));
    }
}
