//! Undirected simple graphs over basis states and the combinatorial
//! quantities (edge boundary, conductance, induced degrees, Cheeger
//! constant) that feed every bound in this crate.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational used for conductances and average degrees.
pub type Rational = Ratio<i64>;

/// Largest hypercube dimension accepted by [`Graph::hypercube`].
pub const MAX_HYPERCUBE_DIMS: u32 = 24;

/// Largest node count for which [`cheeger_constant`] enumerates subsets.
pub const MAX_CHEEGER_NODES: usize = 20;

const MAX_REGULAR_RETRIES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Adjacency {
    /// Compressed neighbor lists, each slice sorted ascending.
    Csr {
        offsets: Vec<usize>,
        targets: Vec<u32>,
    },
    /// Node ids are bitstrings; neighbors differ in exactly one bit.
    Hypercube { dims: u32 },
}

/// An immutable undirected simple graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    degree: Option<usize>,
    adjacency: Adjacency,
}

/// Iterator over the neighbors of one node.
pub enum Neighbors<'a> {
    List(std::slice::Iter<'a, u32>),
    Flips { node: usize, bit: u32, dims: u32 },
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::List(it) => it.next().map(|&j| j as usize),
            Neighbors::Flips { node, bit, dims } => {
                if *bit < *dims {
                    let j = *node ^ (1usize << *bit);
                    *bit += 1;
                    Some(j)
                } else {
                    None
                }
            }
        }
    }
}

impl Graph {
    /// Build a graph from an edge list, rejecting loops and duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::Parameter(format!("too many nodes: {n}")));
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(i, j) in edges {
            for node in [i, j] {
                if node >= n {
                    return Err(Error::ForeignNode { node, n });
                }
            }
            if i == j {
                return Err(Error::Validation(format!("self-loop at node {i}")));
            }
            lists[i].push(j as u32);
            lists[j].push(i as u32);
        }
        for (i, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!(
                    "duplicate edge ({i}, {})",
                    w[0]
                )));
            }
        }
        Ok(Self::from_lists(lists))
    }

    fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in &lists {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let mut g = Graph {
            n,
            degree: None,
            adjacency: Adjacency::Csr { offsets, targets },
        };
        g.degree = g.regular_degree();
        g
    }

    /// The `n_q`-dimensional hypercube: nodes are `n_q`-bit labels, adjacent
    /// iff they differ in exactly one bit.
    pub fn hypercube(n_q: u32) -> Result<Self> {
        if !(1..=MAX_HYPERCUBE_DIMS).contains(&n_q) {
            return Err(Error::Parameter(format!(
                "hypercube dimension {n_q} outside 1..={MAX_HYPERCUBE_DIMS}"
            )));
        }
        Ok(Graph {
            n: 1usize << n_q,
            degree: Some(n_q as usize),
            adjacency: Adjacency::Hypercube { dims: n_q },
        })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("cycle needs at least 3 nodes, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path graph is simple")
    }

    /// Star `K_{1,leaves}` with the center at node 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star graph is simple")
    }

    /// Uniform-ish random simple connected `d`-regular graph.
    ///
    /// Stubs are paired one random suitable pair at a time (no loops, no
    /// repeated edges); a pairing that gets stuck, or a disconnected result,
    /// triggers a restart. Deterministic for a fixed seed.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_regular_with(n, d, &mut rng)
    }

    pub(crate) fn random_regular_with(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if d >= n {
            return Err(Error::Parameter(format!("degree {d} must be below node count {n}")));
        }
        if (n * d) % 2 != 0 {
            return Err(Error::Parameter(format!(
                "n*d must be even for a {d}-regular graph on {n} nodes"
            )));
        }
        if d == 0 {
            return if n == 1 {
                Ok(Self::from_lists(vec![Vec::new()]))
            } else {
                Err(Error::Parameter("a 0-regular graph on several nodes is disconnected".into()))
            };
        }
        for attempt in 0..MAX_REGULAR_RETRIES {
            if let Some(lists) = try_pairing(n, d, rng) {
                let g = Self::from_lists(lists);
                if g.is_connected() {
                    log::trace!("{d}-regular graph on {n} nodes after {} attempts", attempt + 1);
                    return Ok(g);
                }
            }
        }
        Err(Error::Generation(format!(
            "no simple connected {d}-regular graph on {n} nodes after {MAX_REGULAR_RETRIES} attempts"
        )))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Common degree if every node has the same number of neighbors.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn hypercube_dims(&self) -> Option<u32> {
        match self.adjacency {
            Adjacency::Hypercube { dims } => Some(dims),
            Adjacency::Csr { .. } => None,
        }
    }

    #[inline]
    pub fn node_degree(&self, i: usize) -> usize {
        match &self.adjacency {
            Adjacency::Csr { offsets, .. } => offsets[i + 1] - offsets[i],
            Adjacency::Hypercube { dims } => *dims as usize,
        }
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> Neighbors<'_> {
        match &self.adjacency {
            Adjacency::Csr { offsets, targets } => {
                Neighbors::List(targets[offsets[i]..offsets[i + 1]].iter())
            }
            Adjacency::Hypercube { dims } => Neighbors::Flips {
                node: i,
                bit: 0,
                dims: *dims,
            },
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        match &self.adjacency {
            Adjacency::Csr { offsets, targets } => targets[offsets[i]..offsets[i + 1]]
                .binary_search(&(j as u32))
                .is_ok(),
            Adjacency::Hypercube { .. } => (i ^ j).count_ones() == 1,
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.node_degree(i)).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            let mut nb: Vec<usize> = self.neighbors(i).filter(|&j| j > i).collect();
            nb.sort_unstable();
            out.extend(nb.into_iter().map(|j| (i, j)));
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.node_degree(i)).max().unwrap_or(0)
    }

    fn regular_degree(&self) -> Option<usize> {
        let first = if self.n == 0 { 0 } else { self.node_degree(0) };
        (0..self.n)
            .all(|i| self.node_degree(i) == first)
            .then_some(first)
    }

    /// Unweighted shortest-path distances from `source`; `usize::MAX` marks
    /// unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(i) = queue.pop_front() {
            for j in self.neighbors(i) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Dense adjacency matrix, row-major.
    pub fn dense_adjacency(&self) -> nalgebra::DMatrix<f64> {
        let mut a = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.neighbors(i) {
                a[(i, j)] = 1.0;
            }
        }
        a
    }
}

/// One pairing attempt; `None` when no suitable stub pair remains.
fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<u32>>> {
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|i| std::iter::repeat_n(i, d)).collect();
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        let mut progressed = false;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && edges.insert((u, v)) {
                progressed = true;
            } else {
                leftover.extend_from_slice(pair);
            }
        }
        stubs = leftover;
        if !progressed && !stubs.is_empty() {
            // Only accept a stuck remainder if some suitable pair exists.
            if !has_suitable_pair(&stubs, &edges) {
                return None;
            }
            // Pick one suitable pair explicitly to guarantee progress.
            let len = stubs.len();
            let mut placed = false;
            for _ in 0..4 * len * len {
                let a = rng.random_range(0..len);
                let b = rng.random_range(0..len);
                let (u, v) = (stubs[a].min(stubs[b]), stubs[a].max(stubs[b]));
                if a != b && u != v && !edges.contains(&(u, v)) {
                    edges.insert((u, v));
                    let (hi, lo) = (a.max(b), a.min(b));
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return None;
            }
        }
    }
    let mut lists = vec![Vec::with_capacity(d); n];
    for (u, v) in edges {
        lists[u as usize].push(v);
        lists[v as usize].push(u);
    }
    for list in &mut lists {
        list.sort_unstable();
    }
    Some(lists)
}

fn has_suitable_pair(stubs: &[u32], edges: &BTreeSet<(u32, u32)>) -> bool {
    let distinct: BTreeSet<u32> = stubs.iter().copied().collect();
    let distinct: Vec<u32> = distinct.into_iter().collect();
    for (k, &u) in distinct.iter().enumerate() {
        for &v in &distinct[k + 1..] {
            if !edges.contains(&(u, v)) {
                return true;
            }
        }
    }
    false
}

/// A subset of the nodes of a particular graph, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeSet {
    members: Vec<usize>,
    parent_n: usize,
}

impl NodeSet {
    /// Validates membership against `g`; duplicates are merged.
    pub fn new(g: &Graph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&node) = members.iter().find(|&&m| m >= g.n()) {
            return Err(Error::ForeignNode { node, n: g.n() });
        }
        Ok(NodeSet {
            members,
            parent_n: g.n(),
        })
    }

    pub fn all(g: &Graph) -> Self {
        NodeSet {
            members: (0..g.n()).collect(),
            parent_n: g.n(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    /// Node count of the graph this set indexes.
    pub fn parent_n(&self) -> usize {
        self.parent_n
    }

    pub fn complement(&self) -> NodeSet {
        let mask = self.mask();
        NodeSet {
            members: (0..self.parent_n).filter(|&i| !mask[i]).collect(),
            parent_n: self.parent_n,
        }
    }

    fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.parent_n];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.parent_n != g.n() {
            return Err(Error::Validation(format!(
                "node set indexes a graph with {} nodes, got one with {}",
                self.parent_n,
                g.n()
            )));
        }
        Ok(())
    }

    fn check_nonempty(&self, g: &Graph) -> Result<()> {
        self.check(g)?;
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(())
    }
}

/// `|∂V|`: number of edges with exactly one endpoint in `v`.
pub fn edge_boundary(g: &Graph, v: &NodeSet) -> Result<usize> {
    v.check(g)?;
    let mask = v.mask();
    Ok(v.members()
        .iter()
        .map(|&i| g.neighbors(i).filter(|&j| !mask[j]).count())
        .sum())
}

/// `φ(V) = |∂V| / |V|` as an exact rational.
pub fn conductance(g: &Graph, v: &NodeSet) -> Result<Rational> {
    v.check_nonempty(g)?;
    let boundary = edge_boundary(g, v)?;
    Ok(Rational::new(boundary as i64, v.len() as i64))
}

/// The subgraph induced by `v`, re-indexed to `0..|V|`. The second value
/// maps new ids back to the original node ids.
pub fn induced_subgraph(g: &Graph, v: &NodeSet) -> Result<(Graph, Vec<usize>)> {
    v.check_nonempty(g)?;
    let mut index = vec![u32::MAX; g.n()];
    for (k, &m) in v.members().iter().enumerate() {
        index[m] = k as u32;
    }
    let lists: Vec<Vec<u32>> = v
        .members()
        .iter()
        .map(|&i| {
            let mut nb: Vec<u32> = g
                .neighbors(i)
                .filter_map(|j| (index[j] != u32::MAX).then_some(index[j]))
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    Ok((Graph::from_lists(lists), v.members().to_vec()))
}

/// Degree of each member of `v` inside `G(V)`, in member order.
pub fn induced_degrees(g: &Graph, v: &NodeSet) -> Result<Vec<usize>> {
    v.check(g)?;
    let mask = v.mask();
    Ok(v.members()
        .iter()
        .map(|&i| g.neighbors(i).filter(|&j| mask[j]).count())
        .collect())
}

/// `d_max(V)`, the maximal degree of the induced subgraph.
pub fn max_degree_in(g: &Graph, v: &NodeSet) -> Result<usize> {
    v.check_nonempty(g)?;
    Ok(induced_degrees(g, v)?.into_iter().max().unwrap_or(0))
}

/// Average induced degree `d - φ(V)` of a subset of a `d`-regular graph,
/// cross-checked against the direct count.
pub fn avg_degree_in(g: &Graph, v: &NodeSet) -> Result<Rational> {
    v.check_nonempty(g)?;
    let d = g.degree().ok_or(Error::Irregular)?;
    let via_boundary = Rational::from_integer(d as i64) - conductance(g, v)?;
    let direct = Rational::new(
        induced_degrees(g, v)?.iter().sum::<usize>() as i64,
        v.len() as i64,
    );
    if via_boundary != direct {
        return Err(Error::Validation(format!(
            "average degree mismatch: d - phi = {via_boundary}, direct = {direct}"
        )));
    }
    Ok(via_boundary)
}

/// Farthest node pair by double-sweep BFS: sweep from node 0, then from the
/// farthest node found. Ties go to the lowest node id.
///
/// Returns `(a, b, distance)`.
pub fn bfs_farthest_pair(g: &Graph) -> Result<(usize, usize, usize)> {
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let far = |source: usize| -> Result<(usize, usize)> {
        let dist = g.bfs_distances(source);
        let mut best = (source, 0);
        for (i, &d) in dist.iter().enumerate() {
            if d == usize::MAX {
                return Err(Error::Disconnected);
            }
            if d > best.1 {
                best = (i, d);
            }
        }
        Ok(best)
    };
    let (a, _) = far(0)?;
    let (b, dist) = far(a)?;
    Ok((a, b, dist))
}

/// Cheeger constant `φ_0`: the minimum conductance over non-empty subsets
/// with at most half the nodes, by exhaustive enumeration.
pub fn cheeger_constant(g: &Graph) -> Result<Rational> {
    let n = g.n();
    if n > MAX_CHEEGER_NODES {
        return Err(Error::Parameter(format!(
            "cheeger constant enumeration limited to {MAX_CHEEGER_NODES} nodes, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter("cheeger constant needs at least 2 nodes".into()));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|i| g.neighbors(i).fold(0u32, |m, j| m | (1 << j)))
        .collect();
    let mut best: Option<Rational> = None;
    for subset in 1u32..(1u32 << n) {
        let size = subset.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let mut boundary = 0u32;
        let mut rest = subset;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            boundary += (nbr[i] & !subset).count_ones();
            rest &= rest - 1;
        }
        let phi = Rational::new(boundary as i64, size as i64);
        if best.is_none_or(|b| phi < b) {
            best = Some(phi);
        }
    }
    Ok(best.expect("n >= 2 gives at least one subset"))
}

/// Maximal connected node sets, ordered by their lowest member.
pub fn connected_components(g: &Graph) -> Vec<NodeSet> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < members.len() {
            let i = members[head];
            head += 1;
            for j in g.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(NodeSet {
            members,
            parent_n: g.n(),
        });
    }
    out
}

/// On-disk graph form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GraphJson {
    Hypercube {
        hypercube: u32,
    },
    Explicit {
        n: usize,
        d: Option<usize>,
        edges: Vec<[usize; 2]>,
    },
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        match g.hypercube_dims() {
            Some(dims) => GraphJson::Hypercube { hypercube: dims },
            None => GraphJson::Explicit {
                n: g.n(),
                d: g.degree(),
                edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            },
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(json: GraphJson) -> Result<Self> {
        match json {
            GraphJson::Hypercube { hypercube } => Graph::hypercube(hypercube),
            GraphJson::Explicit { n, d, edges } => {
                let edges: Vec<_> = edges.into_iter().map(|[i, j]| (i, j)).collect();
                let g = Graph::from_edges(n, &edges)?;
                if let Some(d) = d {
                    if g.degree() != Some(d) {
                        return Err(Error::Validation(format!(
                            "graph declared {d}-regular but is not"
                        )));
                    }
                }
                Ok(g)
            }
        }
    }
}

/// Shared generator seeded the same way everywhere.
pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_nodes() {
        for seed in 0..5 {
            let g = Graph::random_regular(4, 3, seed).unwrap();
            assert_eq!(g, Graph::complete(4));
        }
    }

    #[test]
    fn random_regular_counts() {
        let g = Graph::random_regular(256, 8, 7).unwrap();
        assert_eq!(g.edge_count(), 1024);
        assert_eq!(g.degree(), Some(8));
        assert!(g.is_connected());
    }

    #[test]
    fn random_regular_rejects_odd_parity() {
        assert!(matches!(Graph::random_regular(5, 3, 0), Err(Error::Parameter(_))));
        assert!(matches!(Graph::random_regular(4, 4, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn random_regular_is_deterministic() {
        let a = Graph::random_regular(64, 5, 11).unwrap();
        let b = Graph::random_regular(64, 5, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hypercube_shapes() {
        let g = Graph::hypercube(1).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);

        let g = Graph::hypercube(3).unwrap();
        assert_eq!((g.n(), g.edge_count(), g.degree()), (8, 12, Some(3)));

        let g = Graph::hypercube(15).unwrap();
        assert_eq!((g.n(), g.degree()), (32768, Some(15)));

        assert!(Graph::hypercube(0).is_err());
        assert!(Graph::hypercube(25).is_err());
    }

    #[test]
    fn boundary_and_conductance() {
        let g = Graph::random_regular(32, 8, 3).unwrap();
        let all = NodeSet::all(&g);
        assert_eq!(edge_boundary(&g, &all).unwrap(), 0);
        assert_eq!(conductance(&g, &all).unwrap(), Rational::from_integer(0));

        let single = NodeSet::new(&g, [5]).unwrap();
        assert_eq!(edge_boundary(&g, &single).unwrap(), 8);
        assert_eq!(conductance(&g, &single).unwrap(), Rational::from_integer(8));

        let empty = NodeSet::new(&g, []).unwrap();
        assert!(matches!(conductance(&g, &empty), Err(Error::EmptySet)));
        assert!(matches!(NodeSet::new(&g, [40]), Err(Error::ForeignNode { node: 40, .. })));
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = Graph::hypercube(3).unwrap();
        let (sub, map) = induced_subgraph(&g, &NodeSet::all(&g)).unwrap();
        assert_eq!(sub.edges(), g.edges());
        assert_eq!(map, (0..8).collect::<Vec<_>>());

        // 0b000 and 0b011 are not adjacent
        let (sub, map) = induced_subgraph(&g, &NodeSet::new(&g, [0, 3]).unwrap()).unwrap();
        assert_eq!((sub.n(), sub.edge_count()), (2, 0));
        assert_eq!(map, vec![0, 3]);
    }

    #[test]
    fn induced_degrees_cases() {
        let g = Graph::random_regular(40, 8, 1).unwrap();
        assert_eq!(max_degree_in(&g, &NodeSet::new(&g, [3]).unwrap()).unwrap(), 0);
        assert_eq!(max_degree_in(&g, &NodeSet::all(&g)).unwrap(), 8);
        assert_eq!(avg_degree_in(&g, &NodeSet::all(&g)).unwrap(), Rational::from_integer(8));

        let j = g.neighbors(0).next().unwrap();
        let pair = NodeSet::new(&g, [0, j]).unwrap();
        assert_eq!(edge_boundary(&g, &pair).unwrap(), 14);
        assert_eq!(avg_degree_in(&g, &pair).unwrap(), Rational::from_integer(1));

        let irregular = Graph::star(3);
        assert!(matches!(
            avg_degree_in(&irregular, &NodeSet::all(&irregular)),
            Err(Error::Irregular)
        ));
    }

    #[test]
    fn farthest_pairs() {
        let g = Graph::hypercube(3).unwrap();
        let (a, b, dist) = bfs_farthest_pair(&g).unwrap();
        assert_eq!(dist, 3);
        assert_eq!(a ^ b, 0b111);

        let c6 = Graph::cycle(6).unwrap();
        let (a, b, dist) = bfs_farthest_pair(&c6).unwrap();
        assert_eq!(dist, 3);
        assert_eq!((a + 3) % 6, b);

        assert!(matches!(bfs_farthest_pair(&triangles()), Err(Error::Disconnected)));
    }

    #[test]
    fn farthest_pair_matches_bfs_oracle() {
        let g = Graph::random_regular(256, 8, 7).unwrap();
        let (a, b, dist) = bfs_farthest_pair(&g).unwrap();
        assert_eq!(g.bfs_distances(a)[b], dist);
        assert!(dist >= 3);
    }

    #[test]
    fn cheeger_small_graphs() {
        assert_eq!(cheeger_constant(&Graph::complete(4)).unwrap(), Rational::from_integer(2));
        assert_eq!(cheeger_constant(&Graph::hypercube(3).unwrap()).unwrap(), Rational::from_integer(1));
        assert_eq!(cheeger_constant(&Graph::complete(2)).unwrap(), Rational::from_integer(1));
        assert!(cheeger_constant(&Graph::cycle(21).unwrap()).is_err());
    }

    #[test]
    fn components() {
        let g = Graph::random_regular(30, 3, 2).unwrap();
        assert_eq!(connected_components(&g).len(), 1);
        let comps = connected_components(&triangles());
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn json_forms() {
        let g = Graph::cycle(4).unwrap();
        let text = serde_json::to_string(&GraphJson::from(&g)).unwrap();
        assert_eq!(text, r#"{"n":4,"d":2,"edges":[[0,1],[0,3],[1,2],[2,3]]}"#);
        let back: Graph = serde_json::from_str::<GraphJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, g);

        let cube = Graph::hypercube(5).unwrap();
        let text = serde_json::to_string(&GraphJson::from(&cube)).unwrap();
        assert_eq!(text, r#"{"hypercube":5}"#);

        let bad = r#"{"n":3,"d":2,"edges":[[0,1]]}"#;
        let parsed: GraphJson = serde_json::from_str(bad).unwrap();
        assert!(Graph::try_from(parsed).is_err());
    }
}
