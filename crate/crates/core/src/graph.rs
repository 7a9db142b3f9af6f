//! Random left-regular bipartite test-assignment graphs.
//!
//! Sampling follows the configuration model: every left node gets `ell`
//! stubs, right degrees are fixed as evenly as possible (two adjacent
//! values), and a seeded uniform permutation matches the stubs. Parallel
//! edges are then removed by degree-preserving swaps.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;

/// Reseeds attempted before sampling gives up.
const MAX_RESEEDS: u32 = 16;

/// A simple bipartite graph where every left node has degree `ell`.
///
/// Right neighbor lists are sorted ascending; the slot of a left node in that
/// list selects its signature column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiRegularGraph {
    n: usize,
    ell: usize,
    seed: u64,
    retries: u32,
    right_adj: Vec<Vec<u32>>,
    /// Per left node: (right node, slot within that right node's list).
    left_adj: Vec<Vec<(u32, u32)>>,
}

impl BiRegularGraph {
    /// Samples G(N, M) with left degree `ell`, deterministically from `seed`.
    pub fn sample(n: usize, m: usize, ell: usize, seed: u64) -> Result<Self, GraphError> {
        if ell < 2 {
            return Err(GraphError::LeftDegree(ell));
        }
        if m == 0 || n * ell < m || ell > m {
            return Err(GraphError::Shape { n, m, ell });
        }
        let mut attempt_seed = seed;
        for retry in 0..MAX_RESEEDS {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed);
            if let Some(assignment) = configuration_model(n, m, ell, &mut rng) {
                let mut right_adj = vec![Vec::new(); m];
                for (stub, &right) in assignment.iter().enumerate() {
                    right_adj[right as usize].push((stub / ell) as u32);
                }
                let mut g = Self::from_parts(n, ell, seed, right_adj)?;
                g.retries = retry;
                return Ok(g);
            }
            attempt_seed = crate::sim::splitmix64(attempt_seed);
        }
        Err(GraphError::RepairFailed { retries: MAX_RESEEDS })
    }

    /// Builds a graph from explicit right-node neighbor lists, validating
    /// that it is simple and left-regular.
    pub fn from_right_adjacency(
        n: usize,
        ell: usize,
        right_adj: Vec<Vec<usize>>,
        seed: u64,
    ) -> Result<Self, GraphError> {
        if ell < 2 {
            return Err(GraphError::LeftDegree(ell));
        }
        let right_adj = right_adj
            .into_iter()
            .map(|list| {
                list.into_iter()
                    .map(|v| {
                        if v < n {
                            Ok(v as u32)
                        } else {
                            Err(GraphError::Invalid(format!("left index {v} out of range for N={n}")))
                        }
                    })
                    .collect::<Result<Vec<u32>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(n, ell, seed, right_adj)
    }

    fn from_parts(n: usize, ell: usize, seed: u64, mut right_adj: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let mut left_adj: Vec<Vec<(u32, u32)>> = vec![Vec::with_capacity(ell); n];
        for (i, list) in right_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Invalid(format!("right node {i} has a parallel edge")));
            }
            for (slot, &v) in list.iter().enumerate() {
                left_adj[v as usize].push((i as u32, slot as u32));
            }
        }
        if let Some(v) = left_adj.iter().position(|a| a.len() != ell) {
            return Err(GraphError::Invalid(format!(
                "left node {v} has degree {}, expected {ell}",
                left_adj[v].len()
            )));
        }
        Ok(BiRegularGraph {
            n,
            ell,
            seed,
            retries: 0,
            right_adj,
            left_adj,
        })
    }

    /// Number of left nodes (items).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of right nodes.
    pub fn m(&self) -> usize {
        self.right_adj.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Reseeds needed before the edge repair converged.
    pub fn retries(&self) -> u32 {
        self.retries
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.ell
    }

    /// Sorted left neighbors of right node `i`.
    pub fn right_neighbors(&self, i: usize) -> &[u32] {
        &self.right_adj[i]
    }

    /// (right node, slot) pairs of left node `v`.
    pub fn left_neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.left_adj[v]
    }

    pub fn right_degree(&self, i: usize) -> usize {
        self.right_adj[i].len()
    }

    pub fn max_right_degree(&self) -> usize {
        self.right_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Slot of `left` within right node `right`'s neighbor list.
    pub fn position_of(&self, right: usize, left: usize) -> Result<usize, GraphError> {
        self.right_adj
            .get(right)
            .and_then(|list| list.binary_search(&(left as u32)).ok())
            .ok_or(GraphError::NotAnEdge { right, left })
    }

    /// Text form: a header line `N M ell seed`, then one line per right
    /// node with its space-separated left indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.n, self.m(), self.ell, self.seed);
        for list in &self.right_adj {
            let mut first = true;
            for v in list {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<u64> = header
            .split_whitespace()
            .map(|s| s.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| GraphError::Parse {
                line: 1,
                msg: e.to_string(),
            })?;
        let &[n, m, ell, seed] = fields.as_slice() else {
            return Err(GraphError::Parse {
                line: 1,
                msg: "header must be `N M ell seed`".into(),
            });
        };
        let mut right_adj = Vec::with_capacity(m as usize);
        for (k, line) in lines.enumerate() {
            if right_adj.len() == m as usize {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(GraphError::Parse {
                    line: k + 2,
                    msg: format!("more than {m} right nodes"),
                });
            }
            let list = line
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| GraphError::Parse {
                    line: k + 2,
                    msg: e.to_string(),
                })?;
            right_adj.push(list);
        }
        if right_adj.len() != m as usize {
            return Err(GraphError::Parse {
                line: right_adj.len() + 2,
                msg: format!("expected {m} right nodes, found {}", right_adj.len()),
            });
        }
        Self::from_right_adjacency(n as usize, ell as usize, right_adj, seed)
    }
}

/// Right degree of node `i` when `edges` stubs are spread over `m` nodes:
/// the first `edges % m` nodes take the larger value.
fn right_degree(edges: usize, m: usize, i: usize) -> usize {
    edges / m + usize::from(i < edges % m)
}

/// Returns the right node of every left stub (stub s belongs to left node
/// s / ell), or None if the swap repair stalls.
fn configuration_model(n: usize, m: usize, ell: usize, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    let edges = n * ell;
    let mut assignment: Vec<u32> = (0..m)
        .flat_map(|i| std::iter::repeat_n(i as u32, right_degree(edges, m, i)))
        .collect();
    assignment.shuffle(rng);

    let has_dup = |a: &[u32], v: usize| {
        let s = &a[v * ell..(v + 1) * ell];
        (0..ell).any(|i| s[i + 1..].contains(&s[i]))
    };
    let budget = 100 * edges + 1000;
    let mut swaps = 0usize;
    for v in 0..n {
        while has_dup(&assignment, v) {
            let base = v * ell;
            let k = (0..ell)
                .find(|&i| assignment[base + i + 1..base + ell].contains(&assignment[base + i]))
                .map(|i| base + i)
                .unwrap();
            let bad = assignment[k];
            // Swap with a random stub of another left node when neither side
            // gains a parallel edge.
            let other = rng.random_range(0..edges);
            let w = other / ell;
            let target = assignment[other];
            let v_stubs = &assignment[base..base + ell];
            let w_stubs = &assignment[w * ell..(w + 1) * ell];
            if w != v && target != bad && !v_stubs.contains(&target) && !w_stubs.contains(&bad) {
                assignment.swap(k, other);
            }
            swaps += 1;
            if swaps > budget {
                return None;
            }
        }
    }
    Some(assignment)
}
