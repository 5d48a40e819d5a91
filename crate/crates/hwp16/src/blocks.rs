//! Explicit base-block constructions.
//!
//! Each generator here emits a small, fully verified decomposition of one
//! layer (possibly together with row matchings or row cliques): a handful of
//! base cycles stored as data, expanded by a translation orbit — row shifts
//! `+(l,0)` over `Z_m` or column shifts `+(0,s)`. Expansion never assumes
//! disjointness; every block runs through the verifier before it is
//! returned, so a transcription slip in the base data is caught at the exact
//! block that carries it.

use thiserror::Error;

use crate::factor::{
    verify_cycle_factor, verify_decomposition, CycleFactor, Decomposition, OneFactor, Violation,
};
use crate::graph::{Edge, GraphError, Host, Vertex};
use crate::tables::{self, Table, TableError};

#[derive(Debug, Error)]
pub enum BlockError {
    #[error("bad block parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("block failed verification: {0}")]
    Verify(#[from] Violation),
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), BlockError> {
    if cond {
        Ok(())
    } else {
        Err(BlockError::Parameters(msg.into()))
    }
}

/// Expand one base cycle over the whole row orbit `{ +(l, 0) : l in Z_m }`.
fn row_orbit_factor(
    m: u32,
    n: u32,
    length: u32,
    label: impl Into<String>,
    base: &[(i64, i64)],
) -> Result<CycleFactor, Violation> {
    let cycles = (0..m as i64)
        .map(|l| base.iter().map(|&(r, c)| Vertex::reduced(m, n, r + l, c)).collect())
        .collect();
    let factor = CycleFactor::new(length, label, cycles);
    verify_cycle_factor(&factor, m, n)?;
    Ok(factor)
}

/// Expand a family of base cycles over an explicit set of column shifts.
fn column_orbit_factor(
    m: u32,
    n: u32,
    length: u32,
    label: impl Into<String>,
    bases: &[Vec<(i64, i64)>],
    shifts: &[i64],
) -> Result<CycleFactor, Violation> {
    let mut cycles = Vec::with_capacity(bases.len() * shifts.len());
    for &s in shifts {
        for base in bases {
            cycles.push(
                base.iter().map(|&(r, c)| Vertex::reduced(m, n, r, c + s)).collect(),
            );
        }
    }
    let factor = CycleFactor::new(length, label, cycles);
    verify_cycle_factor(&factor, m, n)?;
    Ok(factor)
}

fn verified(d: Decomposition) -> Result<Decomposition, BlockError> {
    verify_decomposition(&d)?;
    Ok(d)
}

// ============================================================================
// Layer-only blocks
// ============================================================================

/// Two `C_n`-factors partitioning the layer `{+-1} x {+-d}`, `gcd(d,n) = 1`.
///
/// Both factors zigzag between adjacent row pairs along the column
/// progression `0, d, 2d, ...`; starting every cycle at column 0 makes the
/// two factors pick up complementary parity classes, which is what lets
/// them share the layer.
pub fn zigzag_pair(m: u32, n: u32, d: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    require(n >= 4 && n % 2 == 0, "n must be even and at least 4")?;
    require(gcd(d as u64, n as u64) == 1, format!("gcd(d={d}, n={n}) must be 1"))?;
    let mut decomp = Decomposition::new(Host::layer(m, n, &[d as i64, -(d as i64)]));
    for half in 0..2u32 {
        let cycles: Vec<Vec<Vertex>> = (0..m as i64)
            .map(|i| {
                (0..n as i64)
                    .map(|k| {
                        let up = (k % 2 == 0) == (half == 0);
                        Vertex::reduced(m, n, if up { i } else { i + 1 }, k * d as i64)
                    })
                    .collect()
            })
            .collect();
        let factor =
            CycleFactor::new(n, format!("zigzag d={d} #{}", half + 1), cycles);
        verify_cycle_factor(&factor, m, n).map_err(BlockError::Verify)?;
        decomp.cycle_factors.push(factor);
    }
    verified(decomp)
}

/// The `n` column cycles: one `C_m`-factor carrying the whole `{+-1} x {0}`
/// layer.
pub fn column_factor(m: u32, n: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let mut decomp = Decomposition::new(Host::layer(m, n, &[0]));
    let cycles: Vec<Vec<Vertex>> = (0..n)
        .map(|c| (0..m).map(|r| Vertex::new(r, c)).collect())
        .collect();
    let factor = CycleFactor::new(m, "columns", cycles);
    verify_cycle_factor(&factor, m, n).map_err(BlockError::Verify)?;
    decomp.cycle_factors.push(factor);
    verified(decomp)
}

/// Three `C_m`-factors partitioning the layer `{+-1} x {+-n/4, n/2}` for odd
/// `m` and `4 | n`. Each factor expands two row-monotone base cycles over
/// the half-length column orbit `{ s + t*n/2 : 0 <= s < n/4, t in {0,1} }`;
/// the two base columns differ by `n/4 mod n/2` at every row, which is what
/// makes the half orbit spanning.
pub fn quarter_triple(m: u32, n: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3 && m % 2 == 1, "m must be odd and at least 3")?;
    require(n % 4 == 0 && n >= 4, "n must be divisible by 4")?;
    let q = n as i64 / 4;
    let h = n as i64 / 2;
    let seeds: [[[i64; 3]; 2]; 3] = [
        [[0, q, h], [q, 0, -q]],
        [[0, -q, q], [-q, 0, h]],
        [[0, h, -q], [-q, q, 0]],
    ];
    let shifts: Vec<i64> = (0..q).flat_map(|s| [s, s + h]).collect();
    let mut decomp = Decomposition::new(Host::layer(m, n, &[q, -q, h]));
    for (i, seed) in seeds.iter().enumerate() {
        let bases: Vec<Vec<(i64, i64)>> = seed
            .iter()
            .map(|first3| {
                (0..m as i64)
                    .map(|t| {
                        // Columns repeat with period 2 past the seed triple:
                        // b_t = b_{t-2} for t >= 3.
                        let col = first3[if t < 3 { t as usize } else { (2 - t % 2) as usize }];
                        (t, col)
                    })
                    .collect()
            })
            .collect();
        let factor = column_orbit_factor(
            m,
            n,
            m,
            format!("quarter-layer #{}", i + 1),
            &bases,
            &shifts,
        )?;
        decomp.cycle_factors.push(factor);
    }
    verified(decomp)
}

/// Decompose the layer `{+-1} x {+-1, 2^(l-1)}` of `Z_m x Z_{2^l}` into two
/// `C_{2^l}`-factors and one `C_m`-factor, for odd `m >= 2^(l-1) + 1`.
///
/// The `C_m`-factor climbs the diagonal through row `2^(l-1)` and then
/// alternates columns `0, 2^(l-1)` down the remaining rows (empty tail when
/// `m = 2^(l-1)+1`). Each `C_{2^l}`-factor couples one row-0/row-(m-1)
/// zigzag, `2^(l-1)` hairpin cycles indexed by `i` (columns stepped by `2i`)
/// and, for larger `m`, plain zigzags on the leftover adjacent row pairs.
pub fn unit_half_split(m: u32, l: u32) -> Result<Decomposition, BlockError> {
    require(l >= 3, "l must be at least 3")?;
    let n: u32 = 1 << l;
    let half = (n / 2) as i64;
    require(
        m % 2 == 1 && m as i64 >= half + 1,
        format!("m must be odd and at least {}", half + 1),
    )?;
    let ni = n as i64;
    let mi = m as i64;
    let mut decomp = Decomposition::new(Host::layer(m, n, &[1, -1, half]));

    // The two C_{2^l}-factors.
    for fam in 0..2u32 {
        let mut cycles: Vec<Vec<Vertex>> = Vec::with_capacity(m as usize);
        let boundary: Vec<Vertex> = (0..ni)
            .map(|k| {
                let top = (k % 2 == 0) == (fam == 0);
                Vertex::reduced(m, n, if top { 0 } else { mi - 1 }, k)
            })
            .collect();
        cycles.push(boundary);
        for i in 0..half {
            let dd = 2 * i;
            let mut cyc = Vec::with_capacity(n as usize);
            if fam == 0 {
                let a = 1 + dd;
                let b = half + 1 + dd;
                let c = half + dd;
                for r in 0..half {
                    cyc.push(Vertex::reduced(m, n, r, if r % 2 == 0 { a } else { b }));
                }
                cyc.push(Vertex::reduced(m, n, half, c));
                for r in (1..half).rev() {
                    cyc.push(Vertex::reduced(m, n, r, if r % 2 == 0 { c } else { dd }));
                }
            } else {
                cyc.push(Vertex::reduced(m, n, 0, dd));
                for r in 1..=half {
                    cyc.push(Vertex::reduced(m, n, r, half + 1 - r + dd));
                }
                for r in (1..half).rev() {
                    cyc.push(Vertex::reduced(m, n, r, ni - r + dd));
                }
            }
            cycles.push(cyc);
        }
        for j in half..(mi - 1) {
            let cyc: Vec<Vertex> = (0..ni)
                .map(|k| {
                    let top = (k % 2 == 0) == (fam == 0);
                    Vertex::reduced(m, n, if top { j + 1 } else { j }, k)
                })
                .collect();
            cycles.push(cyc);
        }
        let factor =
            CycleFactor::new(n, format!("unit-half c{} #{}", n, fam + 1), cycles);
        verify_cycle_factor(&factor, m, n).map_err(BlockError::Verify)?;
        decomp.cycle_factors.push(factor);
    }

    // The C_m-factor: diagonal plus alternating tail, full column orbit.
    let base: Vec<(i64, i64)> = (0..mi)
        .map(|t| {
            let col = if t <= half {
                t
            } else if (t - half) % 2 == 1 {
                0
            } else {
                half
            };
            (t, col)
        })
        .collect();
    let shifts: Vec<i64> = (0..ni).collect();
    let factor = column_orbit_factor(
        m,
        n,
        m,
        format!("unit-half cm"),
        &[base],
        &shifts,
    )?;
    decomp.cycle_factors.push(factor);
    verified(decomp)
}

/// Interleaving sequence `e_1..e_{2^l}` pairing the columns of `Z_{2^l}`
/// into the group set `{e_1,e_2}, {e_3,e_4}, ...` used by
/// [`half_clique_block`]; consecutive groups sit half a cycle apart.
fn interleaving(n: u32) -> Vec<i64> {
    let half = (n / 2) as i64;
    let mut e = vec![0i64; n as usize];
    e[0] = 0;
    e[1] = 1;
    e[2] = half + 1;
    e[3] = half + 2;
    for t in 2..=(half - 2) {
        e[2 * t as usize] = t;
        e[2 * t as usize + 1] = t + 1 + half;
    }
    e[n as usize - 2] = half - 1;
    e[n as usize - 1] = half;
    e
}

/// Decompose `Cay(Z_m x Z_{2^l}, {+-1} x {2^(l-1)}) u mK_{2^l}` into
/// `2^(l-1)` `C_{2^l}`-factors and a perfect matching.
///
/// `2^(l-1) - 1` factors are row copies of Hamiltonian cycles of `K_{2^l}`
/// avoiding the interleaving's group pairs (a relabeled Walecki
/// decomposition); the last factor stitches the group pairs of two adjacent
/// rows together through the half-difference layer, and the leftover layer
/// edges form the matching.
pub fn half_clique_block(m: u32, l: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    require(l >= 3, "l must be at least 3")?;
    let n: u32 = 1 << l;
    let half = n / 2;
    let quarter = (n / 4) as usize;
    let e = interleaving(n);
    let groups: Vec<(u32, u32)> = (0..half as usize)
        .map(|t| (e[2 * t] as u32, e[2 * t + 1] as u32))
        .collect();

    let host = Host::union(vec![
        Host::layer(m, n, &[half as i64]),
        Host::RowCliques { m, n },
    ])?;
    let mut decomp = Decomposition::new(host);

    // Row copies of the clique Hamiltonian cycles.
    let ham = tables::walecki_minus(n, &groups)?;
    for (s, cyc) in ham.iter().enumerate() {
        let base: Vec<(i64, i64)> = cyc.iter().map(|&c| (0, c as i64)).collect();
        let factor = row_orbit_factor(
            m,
            n,
            n,
            format!("half-clique c{n} #{}", s + 1),
            &base,
        )?;
        decomp.cycle_factors.push(factor);
    }

    // The mixed cycle through the group pairs of two adjacent rows.
    let mixed: Vec<(i64, i64)> = (0..n as usize)
        .map(|k| (((k / 2) % 2) as i64, e[k]))
        .collect();
    let factor = row_orbit_factor(
        m,
        n,
        n,
        format!("half-clique c{n} #{half}"),
        &mixed,
    )?;
    decomp.cycle_factors.push(factor);

    // The matching collects the remaining half-layer edges.
    let mut edges = Vec::with_capacity((m * half) as usize);
    for j in 0..m as i64 {
        for p in 1..=quarter {
            let i1 = 4 * p - 3; // e_{4p-2} zero-based
            let i2 = 4 * p - 2;
            let i3 = 4 * p - 1;
            let i4 = (4 * p) % n as usize; // e_{4p+1} wraps to e_1
            edges.push(Edge::new(
                Vertex::reduced(m, n, j + 1, e[i1]),
                Vertex::reduced(m, n, j, e[i2]),
            ));
            edges.push(Edge::new(
                Vertex::reduced(m, n, j, e[i3]),
                Vertex::reduced(m, n, j + 1, e[i4]),
            ));
        }
    }
    decomp.one_factors.push(OneFactor::new("half-clique 1f", edges));
    verified(decomp)
}

// ============================================================================
// Blocks coupling a layer with row matchings
// ============================================================================

/// Base cycles through the pairs of `I_{i-1}` (shift by `+i` gives `I_i`).
const FORWARD_BASE: [[(i64, i64); 16]; 3] = [
    // i = 2, pairs of I_1
    [
        (0, 0), (0, 1), (1, 3), (1, 6), (0, 4), (0, 5), (1, 7), (1, 10),
        (0, 8), (0, 9), (1, 11), (1, 14), (0, 12), (0, 13), (1, 15), (1, 2),
    ],
    // i = 4, pairs of I_3
    [
        (0, 0), (0, 2), (1, 6), (1, 1), (0, 13), (0, 3), (1, 7), (1, 9),
        (0, 5), (0, 11), (1, 15), (1, 12), (0, 8), (0, 10), (1, 14), (1, 4),
    ],
    // i = 6, pairs of I_5
    [
        (0, 0), (0, 4), (1, 10), (1, 1), (0, 11), (0, 3), (1, 9), (1, 2),
        (0, 12), (0, 8), (1, 14), (1, 5), (0, 15), (0, 7), (1, 13), (1, 6),
    ],
];

/// Base cycles through the pairs of `I_{5+i}` (shift by `-i` gives `I_{6+i}`).
const BACKWARD_BASE: [[(i64, i64); 16]; 3] = [
    // i = 2, pairs of I_7
    [
        (0, 0), (0, 5), (1, 3), (1, 7), (0, 9), (0, 4), (1, 2), (1, 10),
        (0, 12), (0, 1), (1, 15), (1, 11), (0, 13), (0, 8), (1, 6), (1, 14),
    ],
    // i = 4, pairs of I_9
    [
        (0, 0), (0, 6), (1, 2), (1, 4), (0, 8), (0, 3), (1, 15), (1, 5),
        (0, 9), (0, 11), (1, 7), (1, 13), (0, 1), (0, 14), (1, 10), (1, 12),
    ],
    // i = 6, pairs of I_11
    [
        (0, 0), (0, 15), (1, 9), (1, 5), (0, 11), (0, 12), (1, 6), (1, 2),
        (0, 8), (0, 7), (1, 1), (1, 13), (0, 3), (0, 4), (1, 14), (1, 10),
    ],
];

fn shifted_base(base: &[(i64, i64); 16], dc: i64) -> Vec<(i64, i64)> {
    base.iter().map(|&(r, c)| (r, c + dc)).collect()
}

/// Two `C_16`-factors partitioning `{+-1} x {i} u mI_{i-1} u mI_i` for
/// `i in {2,4,6}`: the base cycle alternates matching pairs with layer
/// steps, and its `+i` column shift walks the next matching.
pub fn forward_shift_pair(m: u32, i: u32) -> Result<Decomposition, BlockError> {
    require(matches!(i, 2 | 4 | 6), "i must be one of 2, 4, 6")?;
    require(m >= 3, "m must be at least 3")?;
    let base = &FORWARD_BASE[(i / 2 - 1) as usize];
    let host = Host::union(vec![
        Host::layer(m, 16, &[i as i64]),
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, (i - 1) as usize)?)?,
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, i as usize)?)?,
    ])?;
    let mut decomp = Decomposition::new(host);
    for (t, dc) in [(1u32, 0i64), (2, i as i64)] {
        let factor = row_orbit_factor(
            m,
            16,
            16,
            format!("shift-pair i={i} #{t}"),
            &shifted_base(base, dc),
        )?;
        decomp.cycle_factors.push(factor);
    }
    verified(decomp)
}

/// Two `C_16`-factors partitioning `{+-1} x {-i} u mI_{5+i} u mI_{6+i}`
/// for `i in {2,4,6}`; mirror image of [`forward_shift_pair`] with the
/// second factor shifted by `-i`.
pub fn backward_shift_pair(m: u32, i: u32) -> Result<Decomposition, BlockError> {
    require(matches!(i, 2 | 4 | 6), "i must be one of 2, 4, 6")?;
    require(m >= 3, "m must be at least 3")?;
    let base = &BACKWARD_BASE[(i / 2 - 1) as usize];
    let host = Host::union(vec![
        Host::layer(m, 16, &[-(i as i64)]),
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, (5 + i) as usize)?)?,
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, (6 + i) as usize)?)?,
    ])?;
    let mut decomp = Decomposition::new(host);
    for (t, dc) in [(1u32, 0i64), (2, -(i as i64))] {
        let factor = row_orbit_factor(
            m,
            16,
            16,
            format!("shift-pair i=-{i} #{t}"),
            &shifted_base(base, dc),
        )?;
        decomp.cycle_factors.push(factor);
    }
    verified(decomp)
}

/// Two `C_16`-factors and a matching partitioning
/// `{+-1} x {8} u m(I_13 u I_14 u I_15)`: one within-row factor walking
/// `I_13 u I_14`, one mixed factor through `I_15` and half of the layer,
/// and an explicit matching on the other half.
pub fn half_tail_block(m: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let host = Host::union(vec![
        Host::layer(m, 16, &[8]),
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, 13)?)?,
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, 14)?)?,
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::I, 15)?)?,
    ])?;
    let mut decomp = Decomposition::new(host);
    let c1: [(i64, i64); 16] = [
        (0, 0), (0, 9), (0, 6), (0, 12), (0, 5), (0, 2), (0, 11), (0, 8),
        (0, 14), (0, 7), (0, 4), (0, 13), (0, 15), (0, 1), (0, 3), (0, 10),
    ];
    let c2: [(i64, i64); 16] = [
        (0, 0), (0, 11), (1, 3), (1, 5), (0, 13), (0, 2), (1, 10), (1, 4),
        (0, 12), (0, 7), (1, 15), (1, 6), (0, 14), (0, 9), (1, 1), (1, 8),
    ];
    for (t, base) in [(1u32, &c1), (2, &c2)] {
        let factor =
            row_orbit_factor(m, 16, 16, format!("half-tail #{t}"), base.as_slice())?;
        decomp.cycle_factors.push(factor);
    }
    let spec: [(i64, i64); 8] =
        [(9, 1), (2, 10), (11, 3), (12, 4), (13, 5), (14, 6), (7, 15), (0, 8)];
    let mut edges = Vec::with_capacity(8 * m as usize);
    for j in 0..m as i64 {
        for &(up, down) in &spec {
            edges.push(Edge::new(
                Vertex::reduced(m, 16, j + 1, up),
                Vertex::reduced(m, 16, j, down),
            ));
        }
    }
    decomp.one_factors.push(OneFactor::new("half-tail 1f", edges));
    verified(decomp)
}

/// One `C_16`-factor and a matching partitioning `{+-1} x {8} u mI'_11`.
pub fn half_single_block(m: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let host = Host::union(vec![
        Host::layer(m, 16, &[8]),
        Host::matching_copies(m, 16, &tables::matching_pairs(Table::IPrime, 11)?)?,
    ])?;
    let mut decomp = Decomposition::new(host);
    let c: [(i64, i64); 16] = [
        (0, 0), (0, 10), (1, 2), (1, 11), (0, 3), (0, 15), (1, 7), (1, 14),
        (0, 6), (0, 13), (1, 5), (1, 9), (0, 1), (0, 12), (1, 4), (1, 8),
    ];
    let factor = row_orbit_factor(m, 16, 16, "half-single", c.as_slice())?;
    decomp.cycle_factors.push(factor);
    let spec: [(i64, i64); 8] =
        [(1, 9), (10, 2), (3, 11), (12, 4), (13, 5), (6, 14), (15, 7), (0, 8)];
    let mut edges = Vec::with_capacity(8 * m as usize);
    for j in 0..m as i64 {
        for &(up, down) in &spec {
            edges.push(Edge::new(
                Vertex::reduced(m, 16, j + 1, up),
                Vertex::reduced(m, 16, j, down),
            ));
        }
    }
    decomp.one_factors.push(OneFactor::new("half-single 1f", edges));
    verified(decomp)
}

/// Four `C_16`-factors partitioning `{+-1} x {+-6} u m(I'_12 u ... u I'_15)`.
pub fn six_quad_block(m: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let mut parts = vec![Host::layer(m, 16, &[6, -6])];
    for k in 12..=15 {
        parts.push(Host::matching_copies(
            m,
            16,
            &tables::matching_pairs(Table::IPrime, k)?,
        )?);
    }
    let mut decomp = Decomposition::new(Host::union(parts)?);
    let bases: [[(i64, i64); 16]; 4] = [
        [
            (0, 0), (0, 1), (1, 7), (1, 2), (0, 12), (0, 4), (1, 10), (1, 3),
            (0, 13), (0, 5), (1, 11), (1, 14), (0, 8), (0, 9), (1, 15), (1, 6),
        ],
        [
            (0, 6), (0, 7), (1, 13), (1, 8), (0, 2), (0, 10), (1, 0), (1, 9),
            (0, 3), (0, 11), (1, 1), (1, 4), (0, 14), (0, 15), (1, 5), (1, 12),
        ],
        [
            (0, 0), (0, 3), (1, 13), (1, 1), (0, 7), (0, 4), (1, 14), (1, 2),
            (0, 8), (0, 11), (1, 5), (1, 6), (0, 12), (0, 15), (1, 9), (1, 10),
        ],
        [
            (0, 10), (0, 13), (1, 7), (1, 11), (0, 1), (0, 14), (1, 8), (1, 12),
            (0, 2), (0, 5), (1, 15), (1, 0), (0, 6), (0, 9), (1, 3), (1, 4),
        ],
    ];
    for (t, base) in bases.iter().enumerate() {
        let factor =
            row_orbit_factor(m, 16, 16, format!("six-quad #{}", t + 1), base.as_slice())?;
        decomp.cycle_factors.push(factor);
    }
    verified(decomp)
}

// ============================================================================
// Matching-derived blocks
// ============================================================================

/// One `C_16`-factor: the `m` within-row copies of the 16-cycle formed by
/// two matchings whose union is a single 16-cycle. Errors when the union
/// splits into shorter cycles.
pub fn matching_pair_factor(
    m: u32,
    label: impl Into<String>,
    m1: &[(u32, u32)],
    m2: &[(u32, u32)],
) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let order = tables::matching_union_cycle(16, m1, m2).ok_or_else(|| {
        BlockError::Parameters("matching union is not a single 16-cycle".into())
    })?;
    let host = Host::union(vec![
        Host::matching_copies(m, 16, m1)?,
        Host::matching_copies(m, 16, m2)?,
    ])?;
    let mut decomp = Decomposition::new(host);
    let base: Vec<(i64, i64)> = order.iter().map(|&c| (0, c as i64)).collect();
    let factor = row_orbit_factor(m, 16, 16, label, &base)?;
    decomp.cycle_factors.push(factor);
    verified(decomp)
}

/// Convenience wrapper: the within-row factor of `m(T_k u T_{k+1})`.
pub fn table_pair_factor(m: u32, table: Table, k: usize) -> Result<Decomposition, BlockError> {
    let m1 = tables::matching_pairs(table, k)?;
    let m2 = tables::matching_pairs(table, k + 1)?;
    matching_pair_factor(
        m,
        format!("row-cycle {0}{1}+{0}{2}", table.tag(), k, k + 1),
        &m1,
        &m2,
    )
}

/// The plain one-factor `mT_k` as a block of its own.
pub fn row_matching_block(m: u32, table: Table, k: usize) -> Result<Decomposition, BlockError> {
    let pairs = tables::matching_pairs(table, k)?;
    let host = Host::matching_copies(m, 16, &pairs)?;
    let mut decomp = Decomposition::new(host);
    let edges: Vec<Edge> = (0..m)
        .flat_map(|j| {
            pairs
                .iter()
                .map(move |&(a, b)| Edge::new(Vertex::new(j, a), Vertex::new(j, b)))
                .collect::<Vec<_>>()
        })
        .collect();
    decomp.one_factors.push(OneFactor::new(
        format!("rows {}{}", table.tag(), k),
        edges,
    ));
    verified(decomp)
}

/// Decompose the row cliques `mK_16` into 7 `C_16`-factors and a matching:
/// each Walecki Hamiltonian cycle of `K_16` copied into every row, plus the
/// leftover perfect matching copied into every row.
pub fn clique_walecki_block(m: u32) -> Result<Decomposition, BlockError> {
    require(m >= 3, "m must be at least 3")?;
    let (cycles, matching) = tables::walecki(16);
    let mut decomp = Decomposition::new(Host::RowCliques { m, n: 16 });
    for (j, cyc) in cycles.iter().enumerate() {
        let base: Vec<(i64, i64)> = cyc.iter().map(|&c| (0, c as i64)).collect();
        let factor =
            row_orbit_factor(m, 16, 16, format!("clique-ham #{}", j + 1), &base)?;
        decomp.cycle_factors.push(factor);
    }
    let edges: Vec<Edge> = (0..m)
        .flat_map(|j| {
            matching
                .iter()
                .map(move |&(a, b)| Edge::new(Vertex::new(j, a), Vertex::new(j, b)))
                .collect::<Vec<_>>()
        })
        .collect();
    decomp.one_factors.push(OneFactor::new("clique-matching", edges));
    verified(decomp)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ODD_M: [u32; 7] = [3, 5, 7, 9, 11, 13, 15];

    #[test]
    fn zigzag_layers() {
        for m in ODD_M {
            for d in [1u32, 3, 5, 7] {
                let d16 = zigzag_pair(m, 16, d).unwrap();
                let stats = verify_decomposition(&d16).unwrap();
                assert_eq!(stats.cycles_of_len(16), 2);
                assert_eq!(stats.edge_count, (2 * 16 * m) as usize);
            }
        }
        assert!(zigzag_pair(9, 16, 2).is_err(), "gcd(2,16) != 1");
        // The stated first cycle for d = 1.
        let d = zigzag_pair(9, 16, 1).unwrap();
        let expected: Vec<Vertex> = (0..16)
            .map(|k| Vertex::new(if k % 2 == 0 { 0 } else { 1 }, k))
            .collect();
        assert!(d.cycle_factors[0].cycles.contains(&crate::factor::canonicalize_cycle(expected)));
    }

    #[test]
    fn column_factor_all_m() {
        for m in ODD_M {
            let d = column_factor(m, 16).unwrap();
            assert_eq!(d.cycle_factors[0].cycles.len(), 16);
        }
        let d = column_factor(9, 4).unwrap();
        assert_eq!(d.cycle_factors[0].cycles.len(), 4);
    }

    #[test]
    fn quarter_triple_stated_base() {
        let d = quarter_triple(9, 16).unwrap();
        let stats = verify_decomposition(&d).unwrap();
        assert_eq!(stats.cycles_of_len(9), 3);
        assert_eq!(stats.edge_count, 432);
        // First base cycle of the first factor: columns 0,4,8,4,8,4,8,4,8.
        let cols = [0i64, 4, 8, 4, 8, 4, 8, 4, 8];
        let expect: Vec<Vertex> = cols
            .iter()
            .enumerate()
            .map(|(r, &c)| Vertex::reduced(9, 16, r as i64, c))
            .collect();
        assert!(d.cycle_factors[0]
            .cycles
            .contains(&crate::factor::canonicalize_cycle(expect)));
    }

    #[test]
    fn quarter_triple_other_widths() {
        for m in ODD_M {
            for n in [8u32, 12, 16] {
                let d = quarter_triple(m, n).unwrap();
                let stats = verify_decomposition(&d).unwrap();
                assert_eq!(stats.cycles_of_len(m), 3);
            }
        }
    }

    #[test]
    fn unit_half_split_both_branches() {
        // l = 3: boundary branch m = 5, general branch m >= 7.
        for (m, l) in [(5u32, 3u32), (7, 3), (9, 3), (11, 3), (9, 4), (11, 4), (13, 4), (15, 4)] {
            let d = unit_half_split(m, l).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            let n = 1u32 << l;
            assert_eq!(stats.cycles_of_len(n), 2, "m={m} l={l}");
            assert_eq!(stats.cycles_of_len(m), usize::from(n != m), "m={m} l={l}");
            assert_eq!(stats.edge_count, (3 * m * n) as usize);
        }
        assert!(unit_half_split(7, 4).is_err(), "m below 2^(l-1)+1");
        assert!(unit_half_split(10, 4).is_err(), "even m");
    }

    #[test]
    fn unit_half_split_stated_cm_cycle() {
        // Boundary branch: the diagonal cycle itself.
        let d = unit_half_split(9, 4).unwrap();
        let cm = &d.cycle_factors[2];
        let expect: Vec<Vertex> = (0..9).map(|t| Vertex::new(t, t)).collect();
        assert!(cm.cycles.contains(&crate::factor::canonicalize_cycle(expect)));
        // General branch: tail alternates columns 0 and 2^(l-1).
        let d = unit_half_split(11, 4).unwrap();
        let cm = &d.cycle_factors[2];
        let mut expect: Vec<Vertex> = (0..9).map(|t| Vertex::new(t, t)).collect();
        expect.push(Vertex::new(9, 0));
        expect.push(Vertex::new(10, 8));
        assert!(cm.cycles.contains(&crate::factor::canonicalize_cycle(expect)));
    }

    #[test]
    fn half_clique_both_widths() {
        for (m, l) in [(3u32, 3u32), (5, 3), (9, 3), (11, 3), (9, 4), (11, 4), (13, 4), (15, 4)] {
            let d = half_clique_block(m, l).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            let n = 1u32 << l;
            assert_eq!(stats.cycles_of_len(n), (n / 2) as usize, "m={m} l={l}");
            assert_eq!(stats.one_factor_count, 1);
            let expected_edges = (m * n) + m * (n * (n - 1) / 2);
            assert_eq!(stats.edge_count, expected_edges as usize);
        }
    }

    #[test]
    fn half_clique_matching_contains_stated_edge() {
        // At l = 4 the p = 1 clause pairs ((j+1)_1, j_9); check j = 0.
        let d = half_clique_block(9, 4).unwrap();
        let f = &d.one_factors[0];
        let e = Edge::new(Vertex::new(1, 1), Vertex::new(0, 9));
        assert!(f.edges.contains(&e));
    }

    #[test]
    fn shift_pairs_all_i() {
        for m in ODD_M {
            for i in [2u32, 4, 6] {
                let d = forward_shift_pair(m, i).unwrap();
                let stats = verify_decomposition(&d).unwrap();
                assert_eq!(stats.cycles_of_len(16), 2);
                assert_eq!(stats.edge_count, (16 * m + 16 * m) as usize);
                let d = backward_shift_pair(m, i).unwrap();
                let stats = verify_decomposition(&d).unwrap();
                assert_eq!(stats.cycles_of_len(16), 2);
            }
        }
        assert!(forward_shift_pair(9, 3).is_err());
    }

    #[test]
    fn half_tail_and_half_single() {
        for m in ODD_M {
            let d = half_tail_block(m).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            assert_eq!(stats.cycles_of_len(16), 2);
            assert_eq!(stats.one_factor_count, 1);
            assert_eq!(stats.edge_count, (16 * m + 3 * 8 * m) as usize);

            let d = half_single_block(m).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            assert_eq!(stats.cycles_of_len(16), 1);
            assert_eq!(stats.one_factor_count, 1);
            assert_eq!(stats.edge_count, (16 * m + 8 * m) as usize);
        }
    }

    #[test]
    fn half_single_stated_pieces() {
        let d = half_single_block(11).unwrap();
        // One-factor contains ((j+1)_1, j_9) for all j.
        for j in 0..11i64 {
            let e = Edge::new(Vertex::reduced(11, 16, j + 1, 1), Vertex::reduced(11, 16, j, 9));
            assert!(d.one_factors[0].edges.contains(&e));
        }
    }

    #[test]
    fn six_quad_all_m() {
        for m in ODD_M {
            let d = six_quad_block(m).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            assert_eq!(stats.cycles_of_len(16), 4);
            assert_eq!(stats.edge_count, (2 * 16 * m + 4 * 8 * m) as usize);
        }
    }

    #[test]
    fn matching_pairs_and_failures() {
        use crate::tables::matching_pairs;
        for m in [3u32, 9, 11, 15] {
            let d = table_pair_factor(m, Table::I, 13).unwrap();
            assert_eq!(verify_decomposition(&d).unwrap().cycles_of_len(16), 1);
            for j in 1..=5 {
                let d = table_pair_factor(m, Table::IPrime, 2 * j - 1).unwrap();
                assert_eq!(verify_decomposition(&d).unwrap().cycles_of_len(16), 1);
            }
        }
        // I_1 u I_2 splits into two 8-cycles.
        let m1 = matching_pairs(Table::I, 1).unwrap();
        let m2 = matching_pairs(Table::I, 2).unwrap();
        assert!(matching_pair_factor(9, "bad", &m1, &m2).is_err());
    }

    #[test]
    fn clique_block_and_row_matching() {
        for m in [3u32, 9, 13] {
            let d = clique_walecki_block(m).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            assert_eq!(stats.cycles_of_len(16), 7);
            assert_eq!(stats.one_factor_count, 1);
            assert_eq!(stats.edge_count, (120 * m) as usize);

            let d = row_matching_block(m, Table::IPrime, 11).unwrap();
            let stats = verify_decomposition(&d).unwrap();
            assert_eq!(stats.one_factor_count, 1);
            assert_eq!(stats.edge_count, (8 * m) as usize);
        }
    }
}
