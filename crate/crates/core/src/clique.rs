//! CWS clique graph and a budgeted maximum-clique solver.
//!
//! The solver is a bitset branch and bound with a greedy-coloring bound.
//! Graphs built from a stabilizer are Cayley graphs of the syndrome lattice,
//! so a maximum clique may be assumed to contain the zero syndrome.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cws::{check_codewords, detection_set, CwsCode, DetectionSet, Syndrome, Verdict};
use crate::error::{check_limit, Error, Result};
use crate::limits::Limits;
use crate::oracle::{kl_check, KlReport};
use crate::stabilizer::{CanonicalForm, StabilizerSpec};

/// Fixed-width bitset over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitset::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct CliqueGraph {
    /// Lexicographically sorted; empty for graphs not built from a stabilizer.
    pub vertices: Vec<Syndrome>,
    adjacency: Vec<Bitset>,
    /// Vertex 0 is the zero syndrome and may be fixed in the clique.
    pub anchor: bool,
    pub detection: Option<DetectionSet>,
}

impl CliqueGraph {
    /// Plain graph on `0..size`; anchoring is off.
    pub fn from_edges(size: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Bitset::new(size); size];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        CliqueGraph {
            vertices: Vec::new(),
            adjacency,
            anchor: false,
            detection: None,
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }

    pub fn index_of(&self, c: &Syndrome) -> Option<usize> {
        self.vertices.binary_search(c).ok()
    }

    /// DIMACS ascii: `p edge V E` then `e i j`, 1-indexed, `i < j`.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if let Some(ds) = &self.detection {
            let _ = writeln!(out, "c cws clique graph, delta {}", ds.delta);
        }
        let _ = writeln!(out, "p edge {} {}", self.len(), self.edge_count());
        for a in 0..self.len() {
            for b in self.adjacency[a].iter().filter(|&b| b > a) {
                let _ = writeln!(out, "e {} {}", a + 1, b + 1);
            }
        }
        out
    }
}

/// Vertices are the realizable syndromes that satisfy every degeneracy
/// constraint of weight-`<δ` stabilizer elements; `c ~ c'` iff `c − c'`
/// is not the syndrome of a weight-`<δ` error.
pub fn build_clique_graph(spec: &StabilizerSpec, delta: usize, limits: &Limits) -> Result<CliqueGraph> {
    let ds = detection_set(spec, delta, limits)?;
    let lattice = spec.syndrome_lattice(limits)?;
    let constraints = ds.degeneracy_constraints();
    let vertices: Vec<Syndrome> = lattice
        .into_iter()
        .filter(|c| constraints.iter().all(|a| a.dot(c) == 0))
        .collect();
    check_limit("clique graph vertices", vertices.len() as u128, limits.vertices as u128)?;
    let index: HashMap<&Syndrome, usize> = vertices.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let size = vertices.len();
    let mut adjacency = vec![Bitset::full(size); size];
    for (i, c) in vertices.iter().enumerate() {
        adjacency[i].remove(i);
        for s in ds.syndromes.keys() {
            if let Some(&j) = index.get(&c.sub(s)) {
                adjacency[i].remove(j);
            }
        }
    }
    Ok(CliqueGraph {
        vertices,
        adjacency,
        anchor: true,
        detection: Some(ds),
    })
}

#[derive(Clone, Debug)]
pub struct Budget {
    /// Branch-and-bound nodes; `None` is unbounded.
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    pub workers: usize,
    /// Fix vertex 0 in the clique when the graph allows it.
    pub anchor: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
            workers: 1,
            anchor: true,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            ..Budget::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueResult {
    /// Sorted vertex indices.
    pub clique: Vec<usize>,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

impl CliqueResult {
    pub fn size(&self) -> usize {
        self.clique.len()
    }
}

struct Shared<'a> {
    adj: &'a [Bitset],
    best_size: AtomicUsize,
    best: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: AtomicBool,
}

impl Shared<'_> {
    fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.max_nodes {
            self.nodes.fetch_sub(1, Ordering::Relaxed);
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        if n.is_multiple_of(1024) {
            if let Some(t) = self.deadline {
                if Instant::now() >= t {
                    self.aborted.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }

    fn offer(&self, clique: &[usize]) {
        let mut best = self.best.lock().expect("incumbent lock");
        if clique.len() > best.len() {
            *best = clique.to_vec();
            self.best_size.fetch_max(clique.len(), Ordering::Release);
        }
    }

    /// Greedy sequential coloring of `p` in index order. Returns vertices
    /// with nondecreasing color numbers.
    fn color_sort(&self, p: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(p.count());
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(&self.adj[v]);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn expand(&self, clique: &mut Vec<usize>, mut p: Bitset) {
        if !self.tick() {
            return;
        }
        let (order, colors) = self.color_sort(&p);
        for idx in (0..order.len()).rev() {
            if clique.len() + colors[idx] <= self.best_size.load(Ordering::Acquire) {
                return;
            }
            let v = order[idx];
            clique.push(v);
            let mut np = p.clone();
            np.intersect_with(&self.adj[v]);
            if np.is_empty() {
                self.offer(clique);
            } else {
                self.expand(clique, np);
            }
            clique.pop();
            if self.aborted.load(Ordering::Relaxed) {
                return;
            }
            p.remove(v);
        }
    }
}

/// Vertex order for the solver: reverse of a minimum-degree elimination
/// order, ties broken by index.
fn degeneracy_order(adj: &[Bitset], vertices: &[usize]) -> Vec<usize> {
    let mut alive = Bitset::new(adj.len());
    for &v in vertices {
        alive.insert(v);
    }
    let mut degree: HashMap<usize, usize> = vertices
        .iter()
        .map(|&v| {
            let mut nb = adj[v].clone();
            nb.intersect_with(&alive);
            (v, nb.count())
        })
        .collect();
    let mut removed = Vec::with_capacity(vertices.len());
    let mut remaining: Vec<usize> = vertices.to_vec();
    while !remaining.is_empty() {
        let (pos, &v) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| (degree[&v], v))
            .expect("nonempty");
        remaining.swap_remove(pos);
        alive.remove(v);
        for u in adj[v].iter().filter(|&u| alive.contains(u)) {
            *degree.get_mut(&u).expect("alive vertex") -= 1;
        }
        removed.push(v);
    }
    removed.reverse();
    removed
}

/// Maximum clique within `budget`. `optimal` is set only when the search
/// tree was exhausted.
pub fn max_clique(graph: &CliqueGraph, budget: &Budget) -> CliqueResult {
    let start = Instant::now();
    let size = graph.len();
    if size == 0 {
        return CliqueResult {
            clique: Vec::new(),
            optimal: true,
            nodes_explored: 0,
            wall_time: start.elapsed(),
        };
    }
    let anchored = budget.anchor && graph.anchor;
    let (seed, candidates): (Vec<usize>, Vec<usize>) = if anchored {
        (vec![0], graph.adjacency[0].iter().collect())
    } else {
        (Vec::new(), (0..size).collect())
    };

    // relabel candidates so that index order is the solver order
    let order = degeneracy_order(&graph.adjacency, &candidates);
    let local: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let c = order.len();
    let adj: Vec<Bitset> = order
        .iter()
        .map(|&v| {
            let mut b = Bitset::new(c);
            for u in graph.adjacency[v].iter() {
                if let Some(&lu) = local.get(&u) {
                    b.insert(lu);
                }
            }
            b
        })
        .collect();

    let shared = Shared {
        adj: &adj,
        best_size: AtomicUsize::new(0),
        best: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
        deadline: budget.max_time.map(|t| start + t),
        aborted: AtomicBool::new(false),
    };
    // a single vertex is always a clique
    if !anchored {
        shared.offer(&[0]);
    }

    if c > 0 {
        let workers = budget.workers.max(1);
        if workers == 1 {
            let mut clique = Vec::new();
            shared.expand(&mut clique, Bitset::full(c));
        } else if shared.tick() {
            let root = Bitset::full(c);
            let (top, colors) = shared.color_sort(&root);
            // top-level branch idx sees the vertices top[..idx]
            let next = AtomicUsize::new(0);
            std::thread::scope(|s| {
                for _ in 0..workers {
                    s.spawn(|| loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        if k >= top.len() || shared.aborted.load(Ordering::Relaxed) {
                            return;
                        }
                        let idx = top.len() - 1 - k;
                        if colors[idx] <= shared.best_size.load(Ordering::Acquire) {
                            continue;
                        }
                        let v = top[idx];
                        let mut p = Bitset::new(c);
                        for &u in &top[..idx] {
                            p.insert(u);
                        }
                        p.intersect_with(&adj[v]);
                        let mut clique = vec![v];
                        if p.is_empty() {
                            shared.offer(&clique);
                        } else {
                            shared.expand(&mut clique, p);
                        }
                    });
                }
            });
        }
    }

    let best_local = shared.best.lock().expect("incumbent lock").clone();
    let mut clique: Vec<usize> = seed;
    clique.extend(best_local.iter().map(|&l| order[l]));
    clique.sort_unstable();
    debug_assert!(graph.is_clique(&clique));
    CliqueResult {
        clique,
        optimal: !shared.aborted.load(Ordering::Relaxed),
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        wall_time: start.elapsed(),
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Code in the coordinates of the input spec.
    pub code: CwsCode,
    pub canonical: CanonicalForm,
    /// The same code on the canonical generators.
    pub canonical_code: CwsCode,
    pub result: CliqueResult,
    pub verdict: Verdict,
    pub oracle: Option<KlReport>,
    pub vertex_count: usize,
    pub edge_count: usize,
}

/// Builds the graph, finds a clique within `budget`, and re-verifies the
/// code with the classical checker and, when the state fits, the oracle.
pub fn search(
    spec: &StabilizerSpec,
    delta: usize,
    budget: &Budget,
    limits: &Limits,
) -> Result<SearchOutcome> {
    let canonical = spec.canonicalize(delta, limits)?;
    let graph = build_clique_graph(spec, delta, limits)?;
    let result = max_clique(&graph, budget);
    if !graph.is_clique(&result.clique) {
        return Err(Error::Internal("solver returned a non-clique".into()));
    }
    let codewords: Vec<Syndrome> = result.clique.iter().map(|&i| graph.vertices[i].clone()).collect();
    let ds = graph.detection.as_ref().expect("stabilizer graph");
    let verdict = check_codewords(ds, &codewords);
    if !verdict.ok {
        return Err(Error::Internal(format!(
            "clique failed re-verification: {verdict:?}"
        )));
    }
    let code = CwsCode::new(spec.clone(), codewords.clone(), delta, 0)?;
    let canonical_words = codewords.iter().map(|c| canonical.to_canonical(c)).collect();
    let canonical_code = CwsCode::new(
        canonical.spec.clone(),
        canonical_words,
        delta,
        canonical.canonical_rank,
    )?;
    let oracle = match kl_check(&code, delta, limits) {
        Ok(r) => Some(r),
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(r) = &oracle {
        if !r.ok {
            return Err(Error::Internal(format!(
                "classical checker and oracle disagree: {:?}",
                r.failure
            )));
        }
    }
    Ok(SearchOutcome {
        code,
        canonical,
        canonical_code,
        vertex_count: graph.len(),
        edge_count: graph.edge_count(),
        result,
        verdict,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliOperator;
    use crate::zd::ZdVector;

    fn ring(d: u32, n: usize) -> StabilizerSpec {
        let gens: Vec<PauliOperator> = (0..n)
            .map(|i| {
                let s = format!("Z{} X{} Z{}", (i + n - 1) % n, i, (i + 1) % n);
                PauliOperator::parse_literal(d, n, &s).unwrap()
            })
            .collect();
        StabilizerSpec::from_generators(d, n, &gens).unwrap()
    }

    fn complete(t: usize) -> CliqueGraph {
        let edges: Vec<_> = (0..t).flat_map(|a| (a + 1..t).map(move |b| (a, b))).collect();
        CliqueGraph::from_edges(t, &edges)
    }

    #[test]
    fn bitset_basics() {
        let mut b = Bitset::new(130);
        for i in [0, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(b.count(), 4);
        b.remove(0);
        assert_eq!(b.first(), Some(63));
    }

    #[test]
    fn complete_graphs() {
        for t in [1, 2, 5, 70] {
            let r = max_clique(&complete(t), &Budget::default());
            assert_eq!(r.size(), t);
            assert!(r.optimal);
        }
    }

    #[test]
    fn empty_graph_on_three_vertices() {
        let r = max_clique(&CliqueGraph::from_edges(3, &[]), &Budget::default());
        assert_eq!(r.size(), 1);
        assert!(r.optimal);
    }

    #[test]
    fn triangle_plus_tail() {
        let g = CliqueGraph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
        let r = max_clique(&g, &Budget::default());
        assert_eq!(r.clique, vec![0, 1, 2]);
    }

    #[test]
    fn delta_one_graph_is_complete() {
        let g = build_clique_graph(&ring(2, 3), 1, &Limits::default()).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.edge_count(), 28);
    }

    #[test]
    fn example1_graph_edges() {
        let g = build_clique_graph(&ring(3, 7), 3, &Limits::default()).unwrap();
        assert_eq!(g.len(), 2187);
        let c1 = ZdVector::new(3, vec![1, 1, 0, 0, 1, 0, 0]).unwrap();
        let c2 = ZdVector::new(3, vec![0, 0, 1, 0, 0, 1, 1]).unwrap();
        let (i1, i2) = (g.index_of(&c1).unwrap(), g.index_of(&c2).unwrap());
        let sum = g.index_of(&c1.add(&c2)).unwrap();
        let diff = g.index_of(&c1.sub(&c2)).unwrap();
        assert!(g.has_edge(i1, i2));
        assert!(!g.has_edge(0, sum));
        assert!(!g.has_edge(i2, diff));
        // (c1 + c2) - c2 = c1
        assert!(g.has_edge(i2, sum));
    }

    #[test]
    fn five_qubit_ring_gives_two_codewords() {
        let out = search(&ring(2, 5), 3, &Budget::default(), &Limits::default()).unwrap();
        assert_eq!(out.code.k(), 2);
        assert!(out.result.optimal);
        assert!(out.oracle.unwrap().ok);
    }

    #[test]
    fn zero_budget_returns_stabilizer_state() {
        let out = search(&ring(3, 4), 2, &Budget::nodes(0), &Limits::default()).unwrap();
        assert_eq!(out.code.k(), 1);
        assert!(out.code.codewords[0].is_zero());
        assert!(!out.result.optimal);
    }

    #[test]
    fn parallel_matches_sequential_size() {
        let g = build_clique_graph(&ring(3, 4), 2, &Limits::default()).unwrap();
        let seq = max_clique(&g, &Budget::default());
        let par = max_clique(
            &g,
            &Budget {
                workers: 4,
                ..Budget::default()
            },
        );
        assert_eq!(seq.size(), par.size());
        assert!(g.is_clique(&par.clique));
    }

    #[test]
    fn dimacs_header() {
        let g = CliqueGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.to_dimacs(), "p edge 3 2\ne 1 2\ne 2 3\n");
    }
}
