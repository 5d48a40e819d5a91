//! Generic backtracking cycle-cover extraction: the safety net behind the
//! structured constructions.
//!
//! Repeatedly pulls one spanning set of vertex-disjoint `L`-cycles out of the
//! remaining edges, with global backtracking across factors. Early factors
//! can paint later ones into a corner (a lexicographically tempting factor
//! may leave a remainder with no valid cycle at all), so the search runs in
//! restarts: the first attempt is purely lexicographic, later attempts
//! reshuffle the adjacency order under a fixed seed schedule and get a slice
//! of the node budget each. Deliberately desk-scale (couple hundred
//! vertices): the structured routes carry the real workload, this route
//! cross-checks them and rescues small instances.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::factor::CycleFactor;
use crate::graph::{EdgeSet, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("node budget of {budget} exhausted after {nodes} nodes")]
    Budget { budget: u64, nodes: u64 },
    #[error("no cycle cover exists (search exhausted after {nodes} nodes)")]
    NoSolution { nodes: u64 },
}

/// Search counters reported alongside failures and the final result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoverStats {
    pub nodes: u64,
}

struct Search {
    n: u32,
    len: usize,
    count: usize,
    adj: Vec<Vec<(u32, u32)>>, // vertex id -> sorted (neighbor id, edge id)
    edge_used: Vec<bool>,
    covered: Vec<bool>,
    cycles: Vec<Vec<Vec<u32>>>, // per factor
    /// reach[u][s]: a length-s walk from u to the current cycle start
    /// exists in the full host. Static relaxation of availability, used to
    /// prune partial paths that cannot possibly close on time.
    reach: Vec<Vec<bool>>,
    /// Cycle start the reach table currently describes.
    reach_owner: Option<u32>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn vertex(&self, id: u32) -> Vertex {
        Vertex::new(id / self.n, id % self.n)
    }

    fn min_uncovered(&self) -> Option<u32> {
        self.covered.iter().position(|&c| !c).map(|p| p as u32)
    }

    fn solve_factor(&mut self, f: usize) -> Result<bool, CoverError> {
        if f == self.count {
            // Counting guarantees all edges are used at this point.
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CoverError::Budget { budget: self.budget, nodes: self.nodes });
        }
        match self.min_uncovered() {
            None => {
                self.covered.iter_mut().for_each(|c| *c = false);
                let done = self.solve_factor(f + 1)?;
                if !done {
                    // Restore this factor's (complete) coverage before
                    // handing control back to its enumeration.
                    self.recover_factor(f);
                }
                Ok(done)
            }
            Some(v) => {
                self.fill_reach(v);
                let mut path = vec![v];
                self.covered[v as usize] = true;
                let found = self.grow_path(f, &mut path)?;
                self.covered[v as usize] = false;
                Ok(found)
            }
        }
    }

    /// Exact-steps reachability to `start` over the full host: reach[u][s]
    /// holds iff some walk of exactly `s` edges joins `u` to `start`.
    fn fill_reach(&mut self, start: u32) {
        if self.reach_owner == Some(start) {
            return;
        }
        let vcount = self.covered.len();
        for row in self.reach.iter_mut() {
            row.iter_mut().for_each(|b| *b = false);
        }
        self.reach[start as usize][0] = true;
        for s in 1..=self.len {
            for u in 0..vcount {
                let ok = self.adj[u].iter().any(|&(w, _)| self.reach[w as usize][s - 1]);
                self.reach[u][s] = ok;
            }
        }
        self.reach_owner = Some(start);
    }

    fn recover_factor(&mut self, f: usize) {
        self.covered.iter_mut().for_each(|c| *c = false);
        for cyc in &self.cycles[f] {
            for &v in cyc {
                self.covered[v as usize] = true;
            }
        }
    }

    fn grow_path(&mut self, f: usize, path: &mut Vec<u32>) -> Result<bool, CoverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CoverError::Budget { budget: self.budget, nodes: self.nodes });
        }
        let u = *path.last().unwrap();
        if path.len() == self.len {
            // Close the cycle back to path[0]; canonical orientation keeps
            // each cycle enumerated once (second vertex below last vertex).
            if path[1] > path[self.len - 1] {
                return Ok(false);
            }
            let start = path[0];
            if let Some(pos) = self.adj[u as usize].iter().position(|&(w, _)| w == start) {
                let eid = self.adj[u as usize][pos].1;
                if !self.edge_used[eid as usize] {
                    self.edge_used[eid as usize] = true;
                    self.cycles[f].push(path.clone());
                    let done = self.solve_factor(f)?;
                    if done {
                        return Ok(true);
                    }
                    self.cycles[f].pop();
                    self.edge_used[eid as usize] = false;
                }
            }
            return Ok(false);
        }
        let candidates: Vec<(u32, u32)> = self.adj[u as usize].clone();
        for (w, eid) in candidates {
            if self.covered[w as usize] || self.edge_used[eid as usize] {
                continue;
            }
            self.edge_used[eid as usize] = true;
            self.covered[w as usize] = true;
            path.push(w);
            let done = self.grow_path(f, path)?;
            path.pop();
            self.covered[w as usize] = false;
            self.edge_used[eid as usize] = false;
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Partition `host` (an edge set on `Z_m x Z_n`) into `count` edge-disjoint
/// spanning `len`-cycle factors by exhaustive backtracking, deterministic
/// under the fixed lexicographic enumeration order.
pub fn exact_cover_cycle_factors(
    m: u32,
    n: u32,
    host: &EdgeSet,
    len: u32,
    count: usize,
    budget: u64,
    label_prefix: &str,
) -> Result<(Vec<CycleFactor>, CoverStats), CoverError> {
    let vertex_count = (m * n) as usize;
    if len < 3 || vertex_count % len as usize != 0 {
        return Err(CoverError::Precondition(format!(
            "cycle length {len} does not divide vertex count {vertex_count}"
        )));
    }
    let degrees = crate::graph::degree_map(m, n, host);
    for (v, d) in degrees {
        if d != 2 * count {
            return Err(CoverError::Precondition(format!(
                "vertex {v} has degree {d}, expected {}",
                2 * count
            )));
        }
    }
    if host.len() != count * vertex_count {
        return Err(CoverError::Precondition(format!(
            "edge count {} does not match {count} two-factors on {vertex_count} vertices",
            host.len()
        )));
    }

    let mut edges: Vec<(u32, u32)> = host
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            (a.row * n + a.col, b.row * n + b.col)
        })
        .collect();
    edges.sort_unstable();
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); vertex_count];
    for (eid, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push((b, eid as u32));
        adj[b as usize].push((a, eid as u32));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    // Restart schedule: a slice of the budget per attempt; attempt 0 is the
    // plain lexicographic order, later attempts reshuffle adjacency under a
    // fixed per-attempt seed, so the whole search stays deterministic.
    let quantum = (budget / 32).max(50_000).min(budget);
    let mut total_nodes: u64 = 0;
    let mut attempt: u64 = 0;
    loop {
        let mut attempt_adj = adj.clone();
        if attempt > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x2fac_0000 + attempt);
            for list in &mut attempt_adj {
                list.shuffle(&mut rng);
            }
        }
        let remaining = budget - total_nodes;
        let mut search = Search {
            n,
            len: len as usize,
            count,
            adj: attempt_adj,
            edge_used: vec![false; edges.len()],
            covered: vec![false; vertex_count],
            cycles: vec![Vec::new(); count],
            nodes: 0,
            budget: quantum.min(remaining),
        };
        match search.solve_factor(0) {
            Ok(true) => {
                let stats = CoverStats { nodes: total_nodes + search.nodes };
                let factors = search
                    .cycles
                    .iter()
                    .enumerate()
                    .map(|(idx, cycles)| {
                        let cycles = cycles
                            .iter()
                            .map(|cyc| cyc.iter().map(|&id| search.vertex(id)).collect())
                            .collect();
                        CycleFactor::new(len, format!("{label_prefix} #{}", idx + 1), cycles)
                    })
                    .collect();
                return Ok((factors, stats));
            }
            Ok(false) => {
                // The attempt ran to exhaustion: the instance has no cover,
                // and no amount of reshuffling will change that.
                return Err(CoverError::NoSolution { nodes: total_nodes + search.nodes });
            }
            Err(CoverError::Budget { .. }) => {
                total_nodes += search.nodes;
                if total_nodes >= budget {
                    return Err(CoverError::Budget { budget, nodes: total_nodes });
                }
                attempt += 1;
            }
            Err(other) => return Err(other),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{verify_cycle_factor, verify_decomposition, Decomposition};
    use crate::graph::{blown_cycle_edges, ConnectionSet, cayley_layer_edges, Host};

    #[test]
    fn two_regular_host_returns_itself() {
        // One 9-cycle per column on the {0} layer of C_9[16] restricted to
        // columns: the full column layer is 2-regular with 16 9-cycles.
        let host = cayley_layer_edges(&ConnectionSet::row_shift(9, 16, &[0]));
        let (factors, _) =
            exact_cover_cycle_factors(9, 16, &host, 9, 1, 1_000_000, "columns").unwrap();
        assert_eq!(factors.len(), 1);
        assert!(verify_cycle_factor(&factors[0], 9, 16).is_ok());
        assert_eq!(factors[0].edge_set(), host);
    }

    #[test]
    fn odd_degree_is_a_precondition_error() {
        let mut host = cayley_layer_edges(&ConnectionSet::row_shift(9, 16, &[0]));
        let e = *host.iter().next().unwrap();
        host.remove(&e);
        let err = exact_cover_cycle_factors(9, 16, &host, 9, 1, 1_000, "x").unwrap_err();
        assert!(matches!(err, CoverError::Precondition(_)));
    }

    #[test]
    fn c4_4_cover_found_and_verifies() {
        let host = blown_cycle_edges(4, 4);
        let (factors, _) =
            exact_cover_cycle_factors(4, 4, &host, 16, 4, 50_000_000, "ring-ham").unwrap();
        let mut d = Decomposition::new(Host::Blown { m: 4, n: 4 });
        d.cycle_factors = factors;
        let stats = verify_decomposition(&d).unwrap();
        assert_eq!(stats.cycles_of_len(16), 4);
    }

    #[test]
    fn budget_errors_are_explicit() {
        let host = blown_cycle_edges(4, 4);
        let err = exact_cover_cycle_factors(4, 4, &host, 16, 4, 10, "x").unwrap_err();
        assert!(matches!(err, CoverError::Budget { budget: 10, .. }));
    }
}
