//! Host-graph models on the point set `Z_m x Z_n`.
//!
//! Everything downstream (construction, search, verification) works on exact
//! edge sets. A [`Host`] descriptor deterministically regenerates its edge
//! set, so a serialized certificate can be re-checked from the descriptor
//! alone. Edge sets are hash sets of canonical [`Edge`] values: every check
//! we need (partition, disjointness, regularity) is set-algebraic.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Canonical edge container used throughout the crate.
pub type EdgeSet = HashSet<Edge>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("connection set contains the identity (0,0)")]
    ContainsIdentity,
    #[error("connection set is not negation-closed: missing -({0},{1})")]
    NotNegationClosed(u32, u32),
    #[error("matching has overlapping pairs at column {0}")]
    OverlappingPairs(u32),
    #[error("matching pair ({0},{0}) is degenerate")]
    DegeneratePair(u32),
    #[error("union parts are not edge-disjoint: {edge} appears in part {first} and part {second}")]
    UnionOverlap { edge: Edge, first: usize, second: usize },
    #[error("union parts disagree on the vertex set ({0}x{1} vs {2}x{3})")]
    MixedUnion(u32, u32, u32, u32),
    #[error("bad host parameters: {0}")]
    BadParameters(String),
}

/// Reduce an integer into `[0, modulus)`.
pub fn reduce(x: i64, modulus: u32) -> u32 {
    debug_assert!(modulus > 0);
    let md = modulus as i64;
    (((x % md) + md) % md) as u32
}

/// A point `(row mod m, col mod n)`. Always stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    pub row: u32,
    pub col: u32,
}

impl Vertex {
    pub fn new(row: u32, col: u32) -> Self {
        Vertex { row, col }
    }

    /// Build a vertex from unreduced coordinates.
    pub fn reduced(m: u32, n: u32, row: i64, col: i64) -> Self {
        Vertex { row: reduce(row, m), col: reduce(col, n) }
    }

    /// Translate by `(dr, dc)` modulo `(m, n)`.
    pub fn shifted(self, m: u32, n: u32, dr: i64, dc: i64) -> Self {
        Vertex::reduced(m, n, self.row as i64 + dr, self.col as i64 + dc)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.row, self.col)
    }
}

/// An unordered pair of distinct vertices, stored with the lexicographically
/// smaller endpoint first. Re-canonicalizing is a no-op by construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    /// Canonical edge between two distinct vertices.
    ///
    /// Panics on a loop; callers validate before constructing edges from
    /// untrusted input.
    pub fn new(u: Vertex, v: Vertex) -> Self {
        assert!(u != v, "loop edge at {u}");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn try_new(u: Vertex, v: Vertex) -> Option<Self> {
        if u == v {
            None
        } else {
            Some(Edge::new(u, v))
        }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.a, self.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// A negation-closed set of `(row-diff mod m, col-diff mod n)` pairs,
/// excluding the identity. Defines one Cayley layer graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionSet {
    m: u32,
    n: u32,
    elems: BTreeSet<(u32, u32)>,
}

impl ConnectionSet {
    /// Validate an explicitly given difference set.
    pub fn new(m: u32, n: u32, pairs: &[(i64, i64)]) -> Result<Self, GraphError> {
        let elems: BTreeSet<(u32, u32)> =
            pairs.iter().map(|&(r, c)| (reduce(r, m), reduce(c, n))).collect();
        if elems.contains(&(0, 0)) {
            return Err(GraphError::ContainsIdentity);
        }
        for &(r, c) in &elems {
            let neg = (reduce(-(r as i64), m), reduce(-(c as i64), n));
            if !elems.contains(&neg) {
                return Err(GraphError::NotNegationClosed(r, c));
            }
        }
        Ok(ConnectionSet { m, n, elems })
    }

    /// The negation closure of `{ (1, c) : c in cols }`: the layer that joins
    /// cyclically adjacent rows through the given column differences.
    pub fn row_shift(m: u32, n: u32, cols: &[i64]) -> Self {
        let mut elems = BTreeSet::new();
        for &c in cols {
            let c = reduce(c, n);
            elems.insert((reduce(1, m), c));
            elems.insert((reduce(-1, m), reduce(-(c as i64), n)));
        }
        ConnectionSet { m, n, elems }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.elems.iter().copied()
    }

    /// If this set is exactly the closure of `{(1, c) : c in cols}`, return
    /// the sorted column residues; `None` otherwise. Used by the certificate
    /// writer, which only needs the row-adjacent layers.
    pub fn row_shift_cols(&self) -> Option<Vec<u32>> {
        let cols: Vec<u32> = self
            .elems
            .iter()
            .filter(|&&(r, _)| r == reduce(1, self.m))
            .map(|&(_, c)| c)
            .collect();
        let rebuilt = ConnectionSet::row_shift(
            self.m,
            self.n,
            &cols.iter().map(|&c| c as i64).collect::<Vec<_>>(),
        );
        if rebuilt.elems == self.elems {
            Some(cols)
        } else {
            None
        }
    }
}

/// Descriptor for every host graph we decompose. Regenerating the edge set
/// from the descriptor is the verifier's ground truth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Host {
    /// `Cay(Z_m x Z_n, conn)`.
    Cayley { conn: ConnectionSet },
    /// The blown-up cycle `C_m[n]`: all edges between cyclically adjacent rows.
    Blown { m: u32, n: u32 },
    /// The wreath product `C_m wr K_n`: `C_m[n]` plus a clique inside each row.
    Wreath { m: u32, n: u32 },
    /// `m` row-copies of a partial matching on `Z_n` (within-row edges only).
    MatchingCopies { m: u32, n: u32, pairs: Vec<(u32, u32)> },
    /// `m` row-copies of `K_n`.
    RowCliques { m: u32, n: u32 },
    /// Disjoint union of sub-hosts on the same vertex set.
    Union { m: u32, n: u32, parts: Vec<Host> },
}

impl Host {
    pub fn cayley(conn: ConnectionSet) -> Host {
        Host::Cayley { conn }
    }

    /// A row-adjacent layer through the given column differences.
    pub fn layer(m: u32, n: u32, cols: &[i64]) -> Host {
        Host::Cayley { conn: ConnectionSet::row_shift(m, n, cols) }
    }

    /// Validated `m`-row copies of a set of disjoint column pairs.
    pub fn matching_copies(m: u32, n: u32, pairs: &[(u32, u32)]) -> Result<Host, GraphError> {
        let mut seen = HashSet::new();
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let (a, b) = (a % n, b % n);
            if a == b {
                return Err(GraphError::DegeneratePair(a));
            }
            for c in [a, b] {
                if !seen.insert(c) {
                    return Err(GraphError::OverlappingPairs(c));
                }
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        Ok(Host::MatchingCopies { m, n, pairs: canon })
    }

    /// Flatten parts into a union host; all parts must live on the same
    /// vertex set. Edge-disjointness is checked when the edge set is built.
    pub fn union(parts: Vec<Host>) -> Result<Host, GraphError> {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Host::Union { parts: inner, .. } => flat.extend(inner),
                other => flat.push(other),
            }
        }
        let (m, n) = match flat.first() {
            Some(h) => (h.m(), h.n()),
            None => return Err(GraphError::BadParameters("empty union".into())),
        };
        for h in &flat {
            if h.m() != m || h.n() != n {
                return Err(GraphError::MixedUnion(m, n, h.m(), h.n()));
            }
        }
        Ok(Host::Union { m, n, parts: flat })
    }

    pub fn m(&self) -> u32 {
        match self {
            Host::Cayley { conn } => conn.m,
            Host::Blown { m, .. }
            | Host::Wreath { m, .. }
            | Host::MatchingCopies { m, .. }
            | Host::RowCliques { m, .. }
            | Host::Union { m, .. } => *m,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            Host::Cayley { conn } => conn.n,
            Host::Blown { n, .. }
            | Host::Wreath { n, .. }
            | Host::MatchingCopies { n, .. }
            | Host::RowCliques { n, .. }
            | Host::Union { n, .. } => *n,
        }
    }

    pub fn vertex_count(&self) -> usize {
        (self.m() * self.n()) as usize
    }

    /// Regenerate the edge set. Fails only when a union's parts overlap,
    /// which signals an inconsistent assembly.
    pub fn edge_set(&self) -> Result<EdgeSet, GraphError> {
        match self {
            Host::Cayley { conn } => Ok(cayley_layer_edges(conn)),
            Host::Blown { m, n } => Ok(blown_cycle_edges(*m, *n)),
            Host::Wreath { m, n } => Ok(wreath_edges(*m, *n)),
            Host::MatchingCopies { m, n, pairs } => Ok(matching_copies_edges(*m, *n, pairs)),
            Host::RowCliques { m, n } => Ok(row_clique_edges(*m, *n)),
            Host::Union { parts, .. } => {
                let mut sets = Vec::with_capacity(parts.len());
                for p in parts {
                    sets.push(p.edge_set()?);
                }
                disjoint_union(sets)
            }
        }
    }
}

/// Edge set of the Cayley graph `Cay(Z_m x Z_n, conn)`: exactly
/// `{ {v, v+s} : v in Z_m x Z_n, s in conn }`, deduplicated as undirected
/// edges. The result is `|conn|`-regular.
pub fn cayley_layer_edges(conn: &ConnectionSet) -> EdgeSet {
    let (m, n) = (conn.m, conn.n);
    let mut edges = EdgeSet::with_capacity((m * n) as usize * conn.len() / 2 + 1);
    for row in 0..m {
        for col in 0..n {
            let v = Vertex::new(row, col);
            for (dr, dc) in conn.iter() {
                let w = v.shifted(m, n, dr as i64, dc as i64);
                if let Some(e) = Edge::try_new(v, w) {
                    edges.insert(e);
                }
            }
        }
    }
    edges
}

/// Edge set of `C_m[n]`: all pairs between cyclically adjacent rows.
pub fn blown_cycle_edges(m: u32, n: u32) -> EdgeSet {
    let all_cols: Vec<i64> = (0..n as i64).collect();
    cayley_layer_edges(&ConnectionSet::row_shift(m, n, &all_cols))
}

/// Edge set of the wreath product `C_m wr K_n`: the blown cycle plus `m`
/// disjoint row-cliques. For `n = 16` the graph is 47-regular.
pub fn wreath_edges(m: u32, n: u32) -> EdgeSet {
    let mut edges = blown_cycle_edges(m, n);
    edges.extend(row_clique_edges(m, n));
    edges
}

/// `m` row-copies of a column matching: `{ {(j,a),(j,b)} : j in Z_m }`.
pub fn matching_copies_edges(m: u32, n: u32, pairs: &[(u32, u32)]) -> EdgeSet {
    let mut edges = EdgeSet::with_capacity(m as usize * pairs.len());
    for j in 0..m {
        for &(a, b) in pairs {
            edges.insert(Edge::new(Vertex::new(j, a % n), Vertex::new(j, b % n)));
        }
    }
    edges
}

/// `m` row-copies of `K_n`.
pub fn row_clique_edges(m: u32, n: u32) -> EdgeSet {
    let mut edges = EdgeSet::with_capacity((m * n * (n - 1) / 2) as usize);
    for j in 0..m {
        for a in 0..n {
            for b in (a + 1)..n {
                edges.insert(Edge::new(Vertex::new(j, a), Vertex::new(j, b)));
            }
        }
    }
    edges
}

/// Union of pairwise edge-disjoint sets. On overlap, reports the
/// lexicographically smallest duplicated edge and the two parts involved.
pub fn disjoint_union(parts: Vec<EdgeSet>) -> Result<EdgeSet, GraphError> {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let mut seen: HashMap<Edge, usize> = HashMap::with_capacity(total);
    let mut dup: Option<(Edge, usize, usize)> = None;
    for (idx, part) in parts.iter().enumerate() {
        for &e in part {
            if let Some(&first) = seen.get(&e) {
                match dup {
                    Some((best, _, _)) if best <= e => {}
                    _ => dup = Some((e, first, idx)),
                }
            } else {
                seen.insert(e, idx);
            }
        }
    }
    if let Some((edge, first, second)) = dup {
        return Err(GraphError::UnionOverlap { edge, first, second });
    }
    Ok(seen.into_keys().collect())
}

/// Degree of every vertex of `Z_m x Z_n` in the given edge set.
pub fn degree_map(m: u32, n: u32, edges: &EdgeSet) -> HashMap<Vertex, usize> {
    let mut deg: HashMap<Vertex, usize> = HashMap::with_capacity((m * n) as usize);
    for row in 0..m {
        for col in 0..n {
            deg.insert(Vertex::new(row, col), 0);
        }
    }
    for e in edges {
        let (u, v) = e.endpoints();
        *deg.entry(u).or_insert(0) += 1;
        *deg.entry(v).or_insert(0) += 1;
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_handles_negatives() {
        assert_eq!(reduce(-4, 16), 12);
        assert_eq!(reduce(-16, 16), 0);
        assert_eq!(reduce(35, 16), 3);
    }

    #[test]
    fn edge_canonical_form_is_idempotent() {
        let u = Vertex::new(3, 7);
        let v = Vertex::new(1, 9);
        let e = Edge::new(u, v);
        let (a, b) = e.endpoints();
        assert_eq!(Edge::new(b, a), e);
        assert!(a < b);
    }

    #[test]
    fn connection_set_rejects_identity_and_open_sets() {
        assert_eq!(
            ConnectionSet::new(9, 16, &[(0, 0), (1, 5)]),
            Err(GraphError::ContainsIdentity)
        );
        // {(1,2),(15,2)} is not closed: -(1,2) = (8,14).
        assert_eq!(
            ConnectionSet::new(9, 16, &[(1, 2), (-1, 2)]),
            Err(GraphError::NotNegationClosed(1, 2))
        );
        assert!(ConnectionSet::new(9, 16, &[(1, 2), (-1, -2)]).is_ok());
    }

    #[test]
    fn layer_pm5_is_four_regular() {
        let conn = ConnectionSet::row_shift(9, 16, &[5, -5]);
        assert_eq!(conn.len(), 4);
        let edges = cayley_layer_edges(&conn);
        assert_eq!(edges.len(), 288);
        assert!(degree_map(9, 16, &edges).values().all(|&d| d == 4));
    }

    #[test]
    fn layer_zero_is_two_regular() {
        let conn = ConnectionSet::row_shift(9, 16, &[0]);
        assert_eq!(conn.len(), 2);
        let edges = cayley_layer_edges(&conn);
        assert_eq!(edges.len(), 144);
        assert!(degree_map(9, 16, &edges).values().all(|&d| d == 2));
    }

    #[test]
    fn full_layer_is_the_blown_cycle() {
        let all: Vec<i64> = (0..16).collect();
        let conn = ConnectionSet::row_shift(9, 16, &all);
        assert_eq!(conn.len(), 32);
        let edges = cayley_layer_edges(&conn);
        assert_eq!(edges.len(), 2304);
        assert_eq!(edges, blown_cycle_edges(9, 16));
    }

    #[test]
    fn wreath_edge_counts() {
        let e9 = wreath_edges(9, 16);
        assert_eq!(e9.len(), 3384);
        assert!(degree_map(9, 16, &e9).values().all(|&d| d == 47));
        assert_eq!(wreath_edges(11, 16).len(), 376 * 11);
    }

    #[test]
    fn matching_copies_counts() {
        let edges = matching_copies_edges(9, 16, &[(0, 1)]);
        assert_eq!(edges.len(), 9);
        let host = Host::matching_copies(9, 16, &[(0, 1), (1, 2)]);
        assert_eq!(host, Err(GraphError::OverlappingPairs(1)));
    }

    #[test]
    fn union_rejects_duplicates() {
        let a = cayley_layer_edges(&ConnectionSet::row_shift(9, 16, &[2, -2]));
        let err = disjoint_union(vec![a.clone(), a]).unwrap_err();
        match err {
            GraphError::UnionOverlap { first, second, .. } => {
                assert_eq!(first, 0);
                assert_eq!(second, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn union_of_layer_and_matchings_adds_up() {
        let parts = vec![
            cayley_layer_edges(&ConnectionSet::row_shift(9, 16, &[2, -2])),
            matching_copies_edges(9, 16, &[(0, 1), (2, 3), (4, 5), (6, 7)]),
        ];
        let u = disjoint_union(parts).unwrap();
        assert_eq!(u.len(), 288 + 36);
    }

    #[test]
    fn row_shift_cols_round_trip() {
        let conn = ConnectionSet::row_shift(9, 16, &[0, 2, -2]);
        assert_eq!(conn.row_shift_cols(), Some(vec![0, 2, 14]));
        // A symmetric set that does not come from row shifts.
        let conn = ConnectionSet::new(9, 16, &[(2, 0), (-2, 0)]).unwrap();
        assert_eq!(conn.row_shift_cols(), None);
    }

    #[test]
    fn host_descriptor_regenerates() {
        let host = Host::union(vec![
            Host::layer(9, 16, &[8]),
            Host::RowCliques { m: 9, n: 16 },
        ])
        .unwrap();
        let edges = host.edge_set().unwrap();
        assert_eq!(edges.len(), 144 + 9 * 120);
        assert_eq!(host.m(), 9);
        assert_eq!(host.vertex_count(), 144);
    }
}
