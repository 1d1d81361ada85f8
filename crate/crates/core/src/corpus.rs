//! Small named graphs and an exhaustive corpus of connected graphs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::graph::Graph;

/// The five-vertex tree `C-A-B` with leaves `D`, `E` hanging off `B`.
pub fn figure_graph() -> Graph {
    Graph::from_edges(&[("C", "A"), ("A", "B"), ("B", "D"), ("B", "E")]).expect("static graph")
}

fn letter(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let names = (0..n).map(letter).collect();
    let edges: Vec<(String, String)> = pairs.iter().map(|&(u, v)| (letter(u), letter(v))).collect();
    Graph::new(names, &edges).expect("generated graph is valid")
}

pub fn single_vertex() -> Graph {
    from_pairs(1, &[])
}

pub fn complete(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    from_pairs(n, &pairs)
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    from_pairs(n, &pairs)
}

pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    from_pairs(n, &pairs)
}

/// One representative per isomorphism class of connected graphs on
/// `1..=max_n` vertices, ordered by vertex count then canonical edge list.
///
/// Canonical forms are found by trying every vertex permutation, so this is
/// only meant for `max_n <= 6`.
pub fn connected_graphs(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let perms = permutations(n);
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        for mask in 0u64..(1 << pairs.len()) {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if !is_connected(n, &chosen) {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> =
                        chosen.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .unwrap_or_default();
            seen.insert(canon);
        }
        let mut reps: Vec<_> = seen.into_iter().collect();
        reps.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out.extend(reps.iter().map(|e| from_pairs(n, e)));
    }
    out
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut reached = alloc::vec![false; n];
    reached[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in edges {
            if reached[u] != reached[v] {
                reached[u] = true;
                reached[v] = true;
                changed = true;
            }
        }
    }
    reached.into_iter().all(|r| r)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}
