//! Immutable simple undirected graphs, G(n, p) sampling and traversal primitives.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::Geometric;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// A set of vertices of a graph on `0..n`, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            mask: vec![true; n],
            len: n,
        }
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    /// Returns true if `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.mask[v] {
            return false;
        }
        self.mask[v] = true;
        self.len += 1;
        true
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if !self.mask[v] {
            return false;
        }
        self.mask[v] = false;
        self.len -= 1;
        true
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_vertices(self.universe(), self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_vertices(self.universe(), self.iter().filter(|&v| !other.contains(v)))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_vertices(self.universe(), self.iter().filter(|&v| other.contains(v)))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

/// Parameters of the binomial random graph G(n, c/n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    pub n: usize,
    pub c: f64,
    pub seed: u64,
}

impl SampleParams {
    pub fn new(n: usize, c: f64, seed: u64) -> Self {
        Self { n, c, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        if !(self.c.is_finite() && self.c >= 0.0 && self.c <= self.n as f64) {
            return Err(Error::Parameter(format!(
                "c = {} must lie in [0, n = {}]",
                self.c, self.n
            )));
        }
        Ok(())
    }

    pub fn edge_probability(&self) -> f64 {
        self.c / self.n as f64
    }
}

/// Simple undirected graph on vertices `0..n` in compressed adjacency form.
///
/// Neighbour lists are sorted, so two graphs with the same edge set compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Self-loops and out-of-range endpoints
    /// are rejected; repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        offsets.push(0);
        let total = adjacency.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in adjacency {
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).expect("path is simple")
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg(v))
    }

    /// Unchecked degree, for hot loops over known-valid vertices.
    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg_into(v, set))
    }

    #[inline]
    pub fn deg_into(&self, v: usize, set: &VertexSet) -> usize {
        self.neighbors(v)
            .iter()
            .filter(|&&u| set.contains(u))
            .count()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.deg(v)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Exact distances from `source` to every vertex within `radius` hops.
    ///
    /// The source itself is reported at distance 0; cycles through the source
    /// are not considered here.
    pub fn bounded_bfs(&self, source: usize, radius: usize) -> Result<Vec<(usize, usize)>> {
        self.check_vertex(source)?;
        let mut dist = std::collections::HashMap::new();
        let mut order = vec![(source, 0)];
        dist.insert(source, 0usize);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == radius {
                continue;
            }
            for &y in self.neighbors(x) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    order.push((y, d + 1));
                    queue.push_back(y);
                }
            }
        }
        order.sort_unstable();
        Ok(order)
    }

    /// The k-core: the largest vertex set in which every member has at least
    /// `k` neighbours inside the set, found by repeatedly peeling vertices of
    /// degree below `k`.
    pub fn k_core(&self, k: usize) -> VertexSet {
        self.k_core_within(k, &VertexSet::full(self.n()))
    }

    /// The k-core of the subgraph induced on `within`.
    pub fn k_core_within(&self, k: usize, within: &VertexSet) -> VertexSet {
        let mut alive = within.clone();
        let mut degree: Vec<usize> = (0..self.n())
            .map(|v| {
                if alive.contains(v) {
                    self.deg_into(v, within)
                } else {
                    0
                }
            })
            .collect();
        let mut stack: Vec<usize> = alive.iter().filter(|&v| degree[v] < k).collect();
        while let Some(v) = stack.pop() {
            if !alive.remove(v) {
                continue;
            }
            for &u in self.neighbors(v) {
                if alive.contains(u) {
                    degree[u] -= 1;
                    if degree[u] + 1 == k {
                        stack.push(u);
                    }
                }
            }
        }
        alive
    }

    /// Vertex sets of the blocks (maximal 2-connected subgraphs and bridges),
    /// largest first with ties broken by the smallest label. Each block is
    /// sorted ascending; isolated vertices belong to no block.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let unseen = usize::MAX;
        let mut disc = vec![unseen; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut blocks = Vec::new();
        for root in 0..n {
            if disc[root] != unseen {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            // (vertex, parent, index of the next neighbour to scan)
            let mut stack = vec![(root, unseen, 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent) = (top.0, top.1);
                if let Some(&w) = self.neighbors(v).get(top.2) {
                    top.2 += 1;
                    if disc[w] == unseen {
                        edges.push((v, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, v, 0));
                    } else if w != parent && disc[w] < disc[v] {
                        edges.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                    continue;
                }
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edges.pop() {
                            block.extend([e.0, e.1]);
                            if e == (p, v) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        block.dedup();
                        blocks.push(block);
                    }
                }
            }
        }
        blocks.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        blocks
    }

    /// Connected components, largest first; ties are broken by the smallest
    /// label in the component. Each component is sorted ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut component = vec![root];
            let mut head = 0;
            while head < component.len() {
                let x = component[head];
                head += 1;
                for &y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        component.push(y);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        // Components are discovered in order of their smallest label, so a
        // stable sort by size keeps the tie-break.
        components.sort_by_key(|c| std::cmp::Reverse(c.len()));
        components
    }

    /// The subgraph induced on `vertices`, relabelled `0..k` in ascending
    /// order of the original labels. Returns the subgraph and the map from new
    /// to original labels.
    pub fn induced(&self, vertices: &VertexSet) -> (Graph, Vec<usize>) {
        let to_old = vertices.to_vec();
        let mut to_new = vec![usize::MAX; self.n()];
        for (i, &v) in to_old.iter().enumerate() {
            to_new[v] = i;
        }
        let adjacency = to_old
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| to_new[u] != usize::MAX)
                    .map(|&u| to_new[u])
                    .collect()
            })
            .collect();
        (Self::from_sorted_adjacency(adjacency), to_old)
    }

    /// Checks the representation invariants: no self-loops, no repeated
    /// neighbours, symmetric adjacency.
    pub fn is_valid(&self) -> bool {
        (0..self.n()).all(|v| {
            let list = self.neighbors(v);
            list.windows(2).all(|w| w[0] < w[1])
                && list
                    .iter()
                    .all(|&u| u < self.n() && u != v && self.has_edge(u, v))
        })
    }

    /// Serializes to the edge-list format: a header line `n m`, then one
    /// `u v` line per edge with `u < v`, sorted lexicographically.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * (self.m() + 1));
        writeln!(out, "{} {}", self.n(), self.m()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let parse_pair = |line_no: usize, line: &str| -> Result<(usize, usize)> {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: "expected two integers".into(),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no + 1,
                    message: e.to_string(),
                })
            };
            Ok((parse(fields[0])?, parse(fields[1])?))
        };
        let (header_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n, m) = parse_pair(header_no, header)?;
        let mut edges = Vec::with_capacity(m);
        let mut previous: Option<(usize, usize)> = None;
        for (line_no, line) in lines {
            let (u, v) = parse_pair(line_no, line)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: format!("edge {u} {v} must satisfy u < v < n"),
                });
            }
            if previous.is_some_and(|p| p >= (u, v)) {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: "edges must be sorted and distinct".into(),
                });
            }
            previous = Some((u, v));
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: header_no + 1,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, &edges)
    }
}

/// Samples G(n, c/n).
///
/// Walks the C(n,2) vertex pairs `(w, v)`, `w < v`, in order, jumping over
/// absent edges with geometrically distributed skips, so the cost is
/// O(n + m) rather than O(n²).
pub fn sample_gnp(params: &SampleParams) -> Result<Graph> {
    params.validate()?;
    let n = params.n;
    let p = params.edge_probability();
    if p <= 0.0 {
        return Ok(Graph::empty(n));
    }
    if p >= 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = stream_rng(params.seed, Stream::Sampling);
    let skip = Geometric::new(p).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut edges =
        Vec::with_capacity((p * (n as f64) * (n as f64 - 1.0) / 2.0 * 1.1) as usize + 16);
    // Batagelj–Brandes: the slot after (w, v) is (w + 1, v), wrapping to (0, v + 1).
    let mut v: u64 = 1;
    let mut w: i64 = -1;
    let n64 = n as u64;
    while v < n64 {
        let jump = rng.sample(skip);
        w = w
            .saturating_add(1)
            .saturating_add(jump.min(i64::MAX as u64 / 2) as i64);
        while v < n64 && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n64 {
            edges.push((w as usize, v as usize));
        }
    }
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn block_examples() {
        let bowtie =
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(bowtie.blocks(), vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(Graph::cycle(6).blocks(), vec![(0..6).collect::<Vec<_>>()]);
        assert_eq!(Graph::path(3).blocks(), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(star(3).blocks().len(), 3);
        assert!(Graph::empty(4).blocks().is_empty());
    }

    #[test]
    fn block_cut_vertices_match_brute_force() {
        for seed in 0..200 {
            let g = sample_gnp(&SampleParams::new(9, 2.5, seed)).unwrap();
            let blocks = g.blocks();
            let mut count = vec![0; g.n()];
            for &v in blocks.iter().flatten() {
                count[v] += 1;
            }
            for (v, &blocks_at_v) in count.iter().enumerate() {
                let mut rest = VertexSet::full(g.n());
                rest.remove(v);
                let (h, _) = g.induced(&rest);
                let cut = h.components().len() > g.components().len() - usize::from(g.deg(v) == 0);
                assert_eq!(blocks_at_v > 1, cut, "seed {seed} vertex {v}");
                assert_eq!(count[v] == 0, g.deg(v) == 0);
            }
        }
    }

    #[test]
    fn sample_extremes() {
        let g = sample_gnp(&SampleParams::new(5, 0.0, 3)).unwrap();
        assert_eq!(g.m(), 0);
        let g = sample_gnp(&SampleParams::new(5, 5.0, 3)).unwrap();
        assert_eq!(g.m(), 10);
        assert_eq!(g, Graph::complete(5));
    }

    #[test]
    fn sample_rejects_bad_params() {
        assert!(sample_gnp(&SampleParams::new(0, 1.0, 0)).is_err());
        assert!(sample_gnp(&SampleParams::new(5, 6.0, 0)).is_err());
        assert!(sample_gnp(&SampleParams::new(5, -1.0, 0)).is_err());
    }

    #[test]
    fn sample_is_deterministic_and_valid() {
        let params = SampleParams::new(2000, 4.0, 11);
        let a = sample_gnp(&params).unwrap();
        let b = sample_gnp(&params).unwrap();
        assert_eq!(a, b);
        assert!(a.is_valid());
        let c = sample_gnp(&SampleParams::new(2000, 4.0, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_edge_count_large() {
        // m ~ Bin(C(n,2), 6/n): mean (n-1)*3, sd about sqrt(3n).
        let n = 100_000usize;
        let g = sample_gnp(&SampleParams::new(n, 6.0, 1)).unwrap();
        let mean = (n as f64 - 1.0) * 3.0;
        let sd = (mean * (1.0 - 6.0 / n as f64)).sqrt();
        assert!((g.m() as f64 - mean).abs() <= 4.0 * sd, "m = {}", g.m());
    }

    #[test]
    fn degrees() {
        assert_eq!(Graph::complete(3).degree(0).unwrap(), 2);
        assert_eq!(Graph::empty(4).degree(2).unwrap(), 0);
        let s = star(4);
        assert_eq!(s.degree(0).unwrap(), 4);
        assert_eq!(s.degree(3).unwrap(), 1);
        assert!(matches!(s.degree(5), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn degree_into_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(
            k3.degree_into(0, &VertexSet::from_vertices(3, [1]))
                .unwrap(),
            1
        );
        assert_eq!(k3.degree_into(0, &VertexSet::empty(3)).unwrap(), 0);
        let p4 = Graph::path(4);
        assert_eq!(
            p4.degree_into(1, &VertexSet::from_vertices(4, [0, 3]))
                .unwrap(),
            1
        );
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(
            Graph::path(4).bounded_bfs(0, 2).unwrap(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
        assert_eq!(Graph::empty(3).bounded_bfs(1, 5).unwrap(), vec![(1, 0)]);
        let c5 = Graph::cycle(5).bounded_bfs(0, 2).unwrap();
        assert_eq!(c5, vec![(0, 0), (1, 1), (2, 2), (3, 2), (4, 1)]);
    }

    #[test]
    fn k_core_examples() {
        // A tree peels away completely.
        let tree = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        assert!(tree.k_core(2).is_empty());
        assert_eq!(Graph::cycle(6).k_core(2).len(), 6);
        let mut edges: Vec<_> = (0..4).map(|v| (v, (v + 1) % 4)).collect();
        edges.push((2, 4));
        let g = Graph::from_edges(5, &edges).unwrap();
        assert_eq!(g.k_core(2).to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn components_examples() {
        assert_eq!(
            Graph::empty(3).components(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(Graph::complete(4).components(), vec![vec![0, 1, 2, 3]]);
        let g = Graph::from_edges(5, &[(3, 4), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        // Equal sizes: smallest label first.
        let g = Graph::from_edges(4, &[(2, 3), (0, 1)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(4, &[(2, 1), (0, 3), (0, 1)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "4 3\n0 1\n0 3\n1 2\n");
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
        assert!(Graph::from_edge_list("3 1\n1 0\n").is_err());
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::from_edge_list("3 2\n0 1\n0 1\n").is_err());
    }

    #[test]
    fn induced_relabels_in_order() {
        let g = Graph::cycle(6);
        let (h, to_g) = g.induced(&VertexSet::from_vertices(6, [1, 2, 3, 5]));
        assert_eq!(to_g, vec![1, 2, 3, 5]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
