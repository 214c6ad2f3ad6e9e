use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic generator of a finite window of an infinite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `side x side` piece of the square lattice.
    Grid { side: usize },
    /// Ball of the given radius in the `degree`-regular tree.
    Tree { degree: usize, radius: usize },
    Cycle { n: usize },
    Path { n: usize },
    /// Ball in the Cayley graph of the free group on `rank` generators.
    FreeCayley { rank: usize, radius: usize },
}

/// A graph given either by a generator or by an edge-list file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    File(String),
    Generator(GeneratorSpec),
}

impl GraphSource {
    pub fn load(&self) -> Result<WindowGraph> {
        match self {
            GraphSource::File(p) => WindowGraph::from_file(p),
            GraphSource::Generator(g) => gen_graph(g),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Vertex `r * side + c` sits at row `r`, column `c`.
    Grid { side: usize },
    Unstructured,
}

/// Finite, connected, undirected graph standing in for a window of an
/// infinite bounded-degree graph.
///
/// `full_degree` is the degree every vertex has in the infinite graph; a
/// vertex whose degree is smaller sits on the window boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowGraph {
    adj: Vec<Vec<usize>>,
    full_degree: usize,
    center: usize,
    layout: Layout,
    /// Distance from `center`.
    shells: Vec<usize>,
}

pub fn gen_graph(spec: &GeneratorSpec) -> Result<WindowGraph> {
    match *spec {
        GeneratorSpec::Grid { side } => {
            if side == 0 {
                return Err(Error::Graph("grid side must be positive".into()));
            }
            let mut edges = Vec::new();
            for r in 0..side {
                for c in 0..side {
                    let v = r * side + c;
                    if c + 1 < side {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < side {
                        edges.push((v, v + side));
                    }
                }
            }
            let mut g = WindowGraph::build(side * side, &edges, Some(4))?;
            g.layout = Layout::Grid { side };
            Ok(g)
        }
        GeneratorSpec::Tree { degree, radius } => {
            if degree < 2 {
                return Err(Error::Graph("tree degree must be at least 2".into()));
            }
            // BFS numbering from the root: the root has `degree` children,
            // every other internal vertex `degree - 1`.
            let mut edges = Vec::new();
            let mut frontier = vec![0usize];
            let mut next_id = 1;
            for depth in 0..radius {
                let mut next = Vec::new();
                for &v in &frontier {
                    let kids = if depth == 0 { degree } else { degree - 1 };
                    for _ in 0..kids {
                        edges.push((v, next_id));
                        next.push(next_id);
                        next_id += 1;
                    }
                }
                frontier = next;
            }
            WindowGraph::build(next_id, &edges, Some(degree))
        }
        GeneratorSpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::Graph("cycle needs at least 3 vertices".into()));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            WindowGraph::build(n, &edges, Some(2))
        }
        GeneratorSpec::Path { n } => {
            if n == 0 {
                return Err(Error::Graph("path needs at least one vertex".into()));
            }
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            WindowGraph::build(n, &edges, Some(2.min(n - 1)))
        }
        GeneratorSpec::FreeCayley { rank, radius } => {
            if rank == 0 {
                return Err(Error::Graph("free group rank must be positive".into()));
            }
            // Vertices are reduced words in shortlex order; w -- w g.
            let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
            let mut words: Vec<Vec<i32>> = vec![vec![]];
            let mut edges = Vec::new();
            let mut layer: Vec<usize> = vec![0];
            for _ in 0..radius {
                let mut next = Vec::new();
                for &v in &layer {
                    for &x in &letters {
                        if words[v].last() == Some(&-x) {
                            continue;
                        }
                        let mut w = words[v].clone();
                        w.push(x);
                        words.push(w);
                        edges.push((v, words.len() - 1));
                        next.push(words.len() - 1);
                    }
                }
                layer = next;
            }
            WindowGraph::build(words.len(), &edges, Some(2 * rank))
        }
    }
}

impl WindowGraph {
    /// Graph from an explicit edge list; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<WindowGraph> {
        WindowGraph::build(n, edges, None)
    }

    /// Parses `"n m"` followed by `m` lines `"u v"` (0-based).
    pub fn parse(text: &str) -> Result<WindowGraph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let nums = |l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
                .collect()
        };
        let h = nums(header)?;
        let [n, m] = h[..] else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let mut edges = Vec::with_capacity(m);
        for l in lines.by_ref().take(m) {
            let e = nums(l)?;
            let [u, v] = e[..] else {
                return Err(Error::Parse(format!("bad edge line {l:?}")));
            };
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
        }
        WindowGraph::from_edges(n, &edges)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<WindowGraph> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        WindowGraph::parse(&text)
    }

    fn build(n: usize, edges: &[(usize, usize)], full_degree: Option<usize>) -> Result<WindowGraph> {
        if n == 0 {
            return Err(Error::Graph("graph is empty".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::Graph(format!("self loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        let mut g = WindowGraph {
            adj,
            full_degree: full_degree.unwrap_or(max_degree).max(max_degree),
            center: 0,
            layout: Layout::Unstructured,
            shells: Vec::new(),
        };
        if g.distances_from(0).contains(&usize::MAX) {
            return Err(Error::Graph("graph is not connected".into()));
        }
        g.center = g.find_center();
        g.shells = g.distances_from(g.center);
        Ok(g)
    }

    /// Minimum-eccentricity vertex, lowest id on ties.
    fn find_center(&self) -> usize {
        (0..self.len())
            .min_by_key(|&v| (self.distances_from(v).into_iter().max().unwrap_or(0), v))
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn full_degree(&self) -> usize {
        self.full_degree
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Distance of `v` from the center.
    pub fn shell(&self, v: usize) -> usize {
        self.shells[v]
    }

    /// Eccentricity of the center.
    pub fn radius(&self) -> usize {
        self.shells.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// BFS distances; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.distances_from(u)[v]
    }

    pub fn all_distances(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|v| self.distances_from(v)).collect()
    }

    /// Vertices at distance `< k` from a boundary vertex are excluded; what
    /// remains has its full k-ball inside the window.
    pub fn interior(&self, k: usize) -> Vec<usize> {
        if k == 0 {
            return (0..self.len()).collect();
        }
        let boundary: Vec<usize> = (0..self.len())
            .filter(|&v| self.degree(v) < self.full_degree)
            .collect();
        let mut dist = vec![usize::MAX; self.len()];
        let mut q = VecDeque::new();
        for &b in &boundary {
            dist[b] = 0;
            q.push_back(b);
        }
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        (0..self.len()).filter(|&v| dist[v] >= k).collect()
    }

    pub fn is_interior(&self, v: usize, k: usize) -> bool {
        self.interior(k).binary_search(&v).is_ok()
    }

    /// Grid coordinates, if the graph is a generated grid.
    pub fn grid_coords(&self, v: usize) -> Option<(usize, usize)> {
        match self.layout {
            Layout::Grid { side } => Some((v / side, v % side)),
            Layout::Unstructured => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_sizes() {
        let t = gen_graph(&GeneratorSpec::Tree { degree: 3, radius: 3 }).unwrap();
        assert_eq!(t.len(), 22);
        assert_eq!(t.center(), 0);
        assert_eq!(t.radius(), 3);
        let g = gen_graph(&GeneratorSpec::Grid { side: 5 }).unwrap();
        assert_eq!((g.len(), g.max_degree()), (25, 4));
        assert_eq!(g.center(), 12);
        let c = gen_graph(&GeneratorSpec::Cycle { n: 10 }).unwrap();
        assert_eq!(c.len(), 10);
        assert!((0..10).all(|v| c.degree(v) == 2));
        let f = gen_graph(&GeneratorSpec::FreeCayley { rank: 2, radius: 2 }).unwrap();
        assert_eq!(f.len(), 1 + 4 + 12);
    }

    #[test]
    fn interior_of_tree_and_grid() {
        let t = gen_graph(&GeneratorSpec::Tree { degree: 3, radius: 5 }).unwrap();
        // depth <= 4
        assert_eq!(t.interior(1).len(), 46);
        assert_eq!(t.interior(2).len(), 22);
        let g = gen_graph(&GeneratorSpec::Grid { side: 6 }).unwrap();
        assert_eq!(g.interior(1).len(), 16);
        let c = gen_graph(&GeneratorSpec::Cycle { n: 7 }).unwrap();
        assert_eq!(c.interior(3).len(), 7);
    }

    #[test]
    fn file_format() {
        let g = WindowGraph::parse("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.center(), 1);
        assert!(WindowGraph::parse("3 1\n0 1\n").is_err(), "disconnected");
        assert!(WindowGraph::parse("2 1\n0 5\n").is_err());
        assert!(WindowGraph::parse("2 2\n0 1\n").is_err());
        assert!(WindowGraph::parse("").is_err());
    }

    #[test]
    fn generator_spec_json() {
        let s: GraphSource = serde_json::from_str(r#"{"type":"tree","degree":3,"radius":5}"#).unwrap();
        assert_eq!(s, GraphSource::Generator(GeneratorSpec::Tree { degree: 3, radius: 5 }));
        let s: GraphSource = serde_json::from_str(r#""g.txt""#).unwrap();
        assert_eq!(s, GraphSource::File("g.txt".into()));
    }
}
