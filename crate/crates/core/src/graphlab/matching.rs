use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum bipartite matching (Hopcroft–Karp). `adj[u]` lists the right
/// vertices adjacent to left vertex `u`; augmenting paths are explored in
/// list order, so the result is a function of the input order alone.
///
/// Returns the partner of every left vertex.
pub fn max_bipartite_matching(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut match_l = vec![NIL; n_left];
    let mut match_r = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];
    loop {
        // Layer free left vertices; `found` records whether a free right
        // vertex is reachable.
        let mut q = VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == NIL {
                dist[u] = 0;
                q.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n_left];
        for u in 0..n_left {
            if match_l[u] == NIL {
                augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next);
            }
        }
    }
    match_l.into_iter().map(|v| (v != NIL).then_some(v)).collect()
}

/// Iterative DFS along the BFS layers; `next[u]` is the next edge of `u` to try.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next[u]];
        let w = match_r[v];
        if w == NIL {
            // Flip the path root -> ... -> u -> v.
            let mut v = v;
            while let Some(u) = stack.pop() {
                let prev = match_l[u];
                match_l[u] = v;
                match_r[v] = u;
                v = prev;
            }
            return true;
        }
        if dist[w] != usize::MAX && dist[w] == dist[u] + 1 {
            stack.push(w);
        } else {
            next[u] += 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(m: &[Option<usize>]) -> usize {
        m.iter().flatten().count()
    }

    fn is_matching(adj: &[Vec<usize>], m: &[Option<usize>]) -> bool {
        let mut used = std::collections::HashSet::new();
        m.iter()
            .enumerate()
            .all(|(u, v)| v.is_none_or(|v| adj[u].contains(&v) && used.insert(v)))
    }

    /// Exhaustive maximum for small instances.
    fn brute(adj: &[Vec<usize>], u: usize, used: &mut Vec<bool>) -> usize {
        if u == adj.len() {
            return 0;
        }
        let mut best = brute(adj, u + 1, used);
        for &v in &adj[u] {
            if !used[v] {
                used[v] = true;
                best = best.max(1 + brute(adj, u + 1, used));
                used[v] = false;
            }
        }
        best
    }

    #[test]
    fn needs_augmenting_paths() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = max_bipartite_matching(3, &adj);
        assert_eq!(size(&m), 3);
        assert!(is_matching(&adj, &m));
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let nl = rng.gen_range(0..7);
            let nr = rng.gen_range(1..7);
            let adj: Vec<Vec<usize>> = (0..nl)
                .map(|_| (0..nr).filter(|_| rng.gen_bool(0.35)).collect())
                .collect();
            let m = max_bipartite_matching(nr, &adj);
            assert!(is_matching(&adj, &m));
            assert_eq!(size(&m), brute(&adj, 0, &mut vec![false; nr]));
        }
    }
}
