//! Maximum bipartite matching (Hopcroft–Karp).

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching of the bipartite graph with `n_left` left vertices and
/// adjacency `adj[l] = right neighbours`. Returns `match_of_left` with
/// `NIL`-free entries for matched vertices.
pub fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut ml = vec![NIL; n_left];
    let mut mr = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];

    loop {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for l in 0..n_left {
            if ml[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let l2 = mr[r];
                if l2 == NIL {
                    found = true;
                } else if dist[l2] == usize::MAX {
                    dist[l2] = dist[l] + 1;
                    queue.push_back(l2);
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(
            l: usize,
            adj: &[Vec<usize>],
            ml: &mut [usize],
            mr: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &r in &adj[l] {
                let l2 = mr[r];
                if l2 == NIL || (dist[l2] == dist[l] + 1 && dfs(l2, adj, ml, mr, dist)) {
                    ml[l] = r;
                    mr[r] = l;
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..n_left {
            if ml[l] == NIL {
                dfs(l, adj, &mut ml, &mut mr, &mut dist);
            }
        }
    }
    ml.into_iter().map(|r| (r != NIL).then_some(r)).collect()
}

/// True iff a matching saturating every left vertex exists.
pub fn saturates_left(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> bool {
    hopcroft_karp(n_left, n_right, adj).iter().all(|m| m.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_found() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = hopcroft_karp(3, 3, &adj);
        assert!(m.iter().all(|x| x.is_some()));
        let rs: std::collections::BTreeSet<_> = m.iter().flatten().collect();
        assert_eq!(rs.len(), 3);
    }

    #[test]
    fn saturation_fails_on_pigeonhole() {
        // two lefts forced onto one right
        let adj = vec![vec![0], vec![0]];
        assert!(!saturates_left(2, 1, &adj));
    }

    #[test]
    fn empty_left_is_saturated() {
        assert!(saturates_left(0, 3, &[]));
    }
}
