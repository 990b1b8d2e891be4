//! Side-information graphs and the structural queries the schemes rely on.
//!
//! Vertices are 0-indexed inside the crate. The JSON form is 1-indexed; the
//! conversion happens only in [`SideInfoGraph::from_json`] and
//! [`SideInfoGraph::to_json`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count representable by [`VertexSet`].
pub const MAX_VERTICES: usize = 64;

/// A subset of `[N]` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 1-indexed list, the external representation.
    pub fn to_one_indexed(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    /// All nonempty subsets of `[n]` in increasing bitmask order.
    pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        assert!(n < 64);
        (1u64..(1u64 << n)).map(VertexSet)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

/// Directed side-information graph: edge `(i, j)` iff receiver `i` knows message `j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SideInfoGraph {
    side_info: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    side_info: Vec<Vec<usize>>,
}

impl SideInfoGraph {
    /// Builds a graph from 0-indexed side-information sets.
    pub fn new(side_info: Vec<Vec<usize>>) -> Result<Self> {
        let n = side_info.len();
        if n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "{n} vertices, at most {MAX_VERTICES} supported"
            )));
        }
        let mut sets = Vec::with_capacity(n);
        for (i, known) in side_info.into_iter().enumerate() {
            let mut set = VertexSet::EMPTY;
            for j in known {
                if j >= n {
                    return Err(Error::InvalidGraph(format!(
                        "receiver {} knows {} which is outside [1, {n}]",
                        i + 1,
                        j + 1
                    )));
                }
                if j == i {
                    return Err(Error::InvalidGraph(format!(
                        "receiver {} lists its own message as side information",
                        i + 1
                    )));
                }
                set.insert(j);
            }
            sets.push(set);
        }
        Ok(SideInfoGraph { side_info: sets })
    }

    pub fn from_sets(side_info: Vec<VertexSet>) -> Result<Self> {
        Self::new(side_info.into_iter().map(VertexSet::to_vec).collect())
    }

    /// Parses the 1-indexed JSON form `{"n": N, "side_info": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        if doc.side_info.len() != doc.n {
            return Err(Error::InvalidGraph(format!(
                "n = {} but side_info has {} entries",
                doc.n,
                doc.side_info.len()
            )));
        }
        let mut zero_indexed = Vec::with_capacity(doc.n);
        for (i, known) in doc.side_info.into_iter().enumerate() {
            let mut row = Vec::with_capacity(known.len());
            for j in known {
                if j == 0 || j > doc.n {
                    return Err(Error::InvalidGraph(format!(
                        "receiver {} knows {j}, outside [1, {}]",
                        i + 1,
                        doc.n
                    )));
                }
                row.push(j - 1);
            }
            zero_indexed.push(row);
        }
        Self::new(zero_indexed)
    }

    /// Canonical 1-indexed JSON with sorted side-information sets.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            n: self.n(),
            side_info: self.side_info.iter().map(|s| s.to_one_indexed()).collect(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    pub fn n(&self) -> usize {
        self.side_info.len()
    }

    /// `K_i` as a set.
    pub fn side_info(&self, i: usize) -> VertexSet {
        self.side_info[i]
    }

    /// `K_i` sorted ascending.
    pub fn known(&self, i: usize) -> Vec<usize> {
        self.side_info[i].to_vec()
    }

    pub fn knows(&self, i: usize, j: usize) -> bool {
        self.side_info[i].contains(j)
    }

    pub fn edge_count(&self) -> usize {
        self.side_info.iter().map(|s| s.len()).sum()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(i, j)` with `j` in `K_i`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| self.side_info[i].iter().map(move |j| (i, j)))
    }

    pub fn edgeless(n: usize) -> Self {
        SideInfoGraph {
            side_info: vec![VertexSet::EMPTY; n],
        }
    }

    /// Every receiver knows every other message.
    pub fn complete(n: usize) -> Self {
        let full = VertexSet::full(n);
        SideInfoGraph {
            side_info: (0..n).map(|i| VertexSet(full.0 & !(1 << i))).collect(),
        }
    }

    /// Directed cycle: receiver `i` knows message `i + 1 (mod n)`.
    pub fn directed_cycle(n: usize) -> Self {
        Self::circulant(n, &[1])
    }

    /// Receiver `i` knows `i + s (mod n)` for each shift `s`.
    pub fn circulant(n: usize, shifts: &[usize]) -> Self {
        SideInfoGraph {
            side_info: (0..n)
                .map(|i| shifts.iter().map(|s| (i + s) % n).filter(|&j| j != i).collect())
                .collect(),
        }
    }

    /// Undirected (bidirected) cycle: receiver `i` knows `i - 1` and `i + 1`.
    pub fn undirected_cycle(n: usize) -> Self {
        Self::circulant(n, &[1, n - 1])
    }

    /// Returns a copy with `j` added to `K_i`.
    pub fn with_edge(&self, i: usize, j: usize) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = (0..self.n()).map(|v| self.known(v)).collect();
        sets[i].push(j);
        Self::new(sets)
    }

    /// Interference graph: `{i, j}` is an edge unless `i` and `j` know each other.
    pub fn interference_graph(&self) -> UndirectedGraph {
        let n = self.n();
        let mut adj = vec![VertexSet::EMPTY; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if !(self.knows(i, j) && self.knows(j, i)) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        UndirectedGraph { adj }
    }

    /// Subgraph induced by `s` relabelled to `[|s|]`, with side information
    /// `K_i ∩ s`. The returned map sends local indices to original ones.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<(SideInfoGraph, Vec<usize>)> {
        if s.is_empty() {
            return Err(Error::InvalidGraph("induced subgraph on an empty set".into()));
        }
        if !s.is_subset(self.vertices()) {
            return Err(Error::InvalidGraph(format!(
                "vertex set {s:?} is outside [1, {}]",
                self.n()
            )));
        }
        let map = s.to_vec();
        let local_of = |v: usize| map.iter().position(|&x| x == v);
        let side_info = map
            .iter()
            .map(|&v| self.side_info[v].intersection(s).iter().filter_map(local_of).collect())
            .collect();
        Ok((SideInfoGraph { side_info }, map))
    }

    pub fn is_acyclic_on(&self, s: VertexSet) -> bool {
        // Kahn's algorithm restricted to s.
        let mut remaining = s;
        loop {
            let source = remaining.iter().find(|&v| remaining.iter().all(|u| !self.knows(u, v)));
            match source {
                Some(v) => remaining.0 &= !(1 << v),
                None => return remaining.is_empty(),
            }
        }
    }

    /// A topological order (every edge goes from an earlier to a later vertex),
    /// or a directed cycle when none exists. Ties break toward the smallest index.
    pub fn topological_order(&self) -> TopologicalOrder {
        let n = self.n();
        let mut indegree: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| self.knows(u, v)).count()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for w in self.side_info[v].iter() {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() == n {
            return TopologicalOrder::Order(order);
        }
        // Every leftover vertex has a predecessor among the leftovers: walk
        // predecessors until a vertex repeats.
        let placed: VertexSet = order.iter().copied().collect();
        let leftover = VertexSet(self.vertices().0 & !placed.0);
        let start = leftover.min().expect("leftover vertices exist");
        let mut walk = vec![start];
        let mut current = start;
        loop {
            let pred = leftover
                .iter()
                .find(|&u| self.knows(u, current))
                .expect("leftover vertex has a leftover predecessor");
            if let Some(pos) = walk.iter().position(|&x| x == pred) {
                let mut cycle: Vec<usize> = walk[pos..].to_vec();
                cycle.reverse();
                let min_pos = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &v)| v)
                    .map(|(k, _)| k)
                    .unwrap();
                cycle.rotate_left(min_pos);
                return TopologicalOrder::Cyclic(cycle);
            }
            walk.push(pred);
            current = pred;
        }
    }

    /// Length of the shortest directed cycle, `None` when acyclic.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        for start in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            'bfs: while let Some(v) = queue.pop_front() {
                for w in self.side_info[v].iter() {
                    if w == start {
                        let len = dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                        break 'bfs;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        best
    }

    /// True iff the graph is exactly one directed Hamiltonian cycle.
    pub fn is_directed_cycle(&self) -> bool {
        let n = self.n();
        if n < 2 || self.side_info.iter().any(|s| s.len() != 1) {
            return false;
        }
        let mut seen = VertexSet::EMPTY;
        let mut v = 0;
        for _ in 0..n {
            if seen.contains(v) {
                return false;
            }
            seen.insert(v);
            v = self.side_info[v].min().unwrap();
        }
        v == 0 && seen == self.vertices()
    }

    /// True iff `i -> i + 1 (mod N)` is an automorphism.
    pub fn has_cyclic_automorphism(&self) -> bool {
        let n = self.n();
        let shift = |v: usize| (v + 1) % n;
        (0..n).all(|i| (0..n).all(|j| i == j || self.knows(i, j) == self.knows(shift(i), shift(j))))
    }

    /// Size of a maximum acyclic induced subgraph, by subset enumeration.
    pub fn max_acyclic_induced_subgraph(&self) -> Result<(usize, VertexSet)> {
        let n = self.n();
        if n > 24 {
            return Err(Error::SizeLimit { n, limit: 24 });
        }
        let mut best = (0, VertexSet::EMPTY);
        for mask in 0u64..(1u64 << n) {
            let s = VertexSet(mask);
            if s.len() > best.0 && self.is_acyclic_on(s) {
                best = (s.len(), s);
            }
        }
        Ok(best)
    }

    /// Exact isomorphism test against the directed 3-cycle.
    pub fn is_three_cycle(&self) -> bool {
        self.n() == 3 && self.is_directed_cycle()
    }
}

impl fmt::Debug for SideInfoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SideInfoGraph{}", self.to_json())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologicalOrder {
    Order(Vec<usize>),
    /// A directed cycle `v0 -> v1 -> ... -> v0`, rotated to start at its smallest vertex.
    Cyclic(Vec<usize>),
}

/// Simple undirected graph on `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    adj: Vec<VertexSet>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("bad edge ({a}, {b})")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(UndirectedGraph { adj })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n)).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Sorted pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|a| self.adj[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
            .collect()
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|s| s.is_empty())
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v].is_disjoint(s))
    }
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UndirectedGraph(n={}, edges={:?})", self.n(), self.edges())
    }
}
