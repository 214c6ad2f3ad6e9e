//! Finite windows of infinite bounded-degree graphs: metric balls,
//! isoperimetric ratios, and paradoxical pairs found by bipartite matching.

mod graph;
mod matching;
mod paradox;
mod sparse;

pub use graph::{gen_graph, GeneratorSpec, GraphSource, Layout, WindowGraph};
pub use matching::max_bipartite_matching;
pub use paradox::{non_ibn_witness, paradoxical_pair, verify_pair, IdentityReport, NonIbnCertificate, ParadoxicalPair};
pub use sparse::SparseIntMat;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::Ratio;

/// `B_k(F)`: all vertices within distance `k` of `F`, sorted.
pub fn ball(g: &WindowGraph, f: &[usize], k: usize) -> Result<Vec<usize>> {
    let mut dist = vec![usize::MAX; g.len()];
    let mut q = VecDeque::new();
    for &v in f {
        if v >= g.len() {
            return Err(Error::VertexOutOfRange(v));
        }
        if dist[v] != 0 {
            dist[v] = 0;
            q.push_back(v);
        }
    }
    while let Some(u) = q.pop_front() {
        if dist[u] == k {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    Ok((0..g.len()).filter(|&v| dist[v] != usize::MAX).collect())
}

/// `|B_k(F)| / |F|` for each set. Every set must be non-empty and lie in
/// `interior(k)`, so that its ball is not truncated by the window.
pub fn iso_profile(g: &WindowGraph, sets: &[Vec<usize>], k: usize) -> Result<Vec<Ratio>> {
    let interior = g.interior(k);
    sets.iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::Graph("isoperimetric ratio of an empty set".into()));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= g.len()) {
                return Err(Error::VertexOutOfRange(v));
            }
            if let Some(&v) = f.iter().find(|v| interior.binary_search(v).is_err()) {
                return Err(Error::MarginViolation { vertex: v, margin: k });
            }
            Ok(Ratio::new(ball(g, &f, k)?.len() as i64, f.len() as i64))
        })
        .collect()
}

/// The `n x n` box centered in a grid window (offset `(side - n) / 2`).
pub fn grid_box(g: &WindowGraph, n: usize) -> Result<Vec<usize>> {
    let Layout::Grid { side } = g.layout() else {
        return Err(Error::Graph("boxes need a grid window".into()));
    };
    if n == 0 || n > side {
        return Err(Error::Graph(format!("box {n} does not fit in grid {side}")));
    }
    let off = (side - n) / 2;
    Ok((off..off + n)
        .flat_map(|r| (off..off + n).map(move |c| r * side + c))
        .collect())
}

/// `m` consecutive vertices `start, start + 1, ...` (mod the window size).
pub fn cycle_arc(g: &WindowGraph, start: usize, m: usize) -> Result<Vec<usize>> {
    if start >= g.len() {
        return Err(Error::VertexOutOfRange(start));
    }
    if m == 0 || m > g.len() {
        return Err(Error::Graph(format!("arc of length {m} in a window of {}", g.len())));
    }
    Ok((0..m).map(|i| (start + i) % g.len()).collect())
}
