//! Case assembly: compose verified blocks, solver patterns and clique
//! factorizations into full decompositions of `C_m wr K_16`.
//!
//! Every target `r` has a recipe: a list of ingredient pieces whose hosts
//! are pairwise disjoint and union to the wreath product. Recipes are plain
//! data; the dispatcher builds each piece (each already verified on its own
//! host), checks ingredient disjointness, merges, and verifies the final
//! certificate against the wreath host before returning it. Failures
//! therefore localize to the responsible piece or to the recipe itself.

use std::path::PathBuf;

use thiserror::Error;

use crate::blocks::{self, BlockError};
use crate::cache::{CacheKey, SolutionCache, SOLVER_VERSION};
use crate::cover::CoverError;
use crate::factor::{verify_decomposition, DecompStats, Decomposition, Violation};
use crate::graph::Host;
use crate::pattern::{
    c4_ring_factorize, pattern_to_factors, solve_row_monotone, DifferenceMultiset, SolveError,
};
use crate::tables::{c4_4_hamiltonian_decomposition, Table};

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("search gave out: {0}")]
    Search(String),
    #[error("internal verification failure: {0}")]
    Verification(#[from] Violation),
    #[error("assembly invariant broken: {0}")]
    Internal(String),
}

impl From<BlockError> for AssemblyError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::Verify(v) => AssemblyError::Verification(v),
            other => AssemblyError::Internal(other.to_string()),
        }
    }
}

impl From<SolveError> for AssemblyError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExhausted { .. } => AssemblyError::Search(e.to_string()),
            other => AssemblyError::Internal(other.to_string()),
        }
    }
}

impl From<CoverError> for AssemblyError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Budget { .. } => AssemblyError::Search(e.to_string()),
            other => AssemblyError::Internal(other.to_string()),
        }
    }
}

/// Knobs shared by every generation call.
#[derive(Clone, Debug, Default)]
pub struct GenContext {
    /// 0 keeps every search on its lexicographic-first path; nonzero only
    /// reshuffles solver candidate order (restarts for hard instances).
    pub seed: u64,
    pub cache: Option<SolutionCache>,
}

impl GenContext {
    pub fn with_cache_dir(seed: u64, dir: Option<PathBuf>) -> Self {
        GenContext { seed, cache: Some(SolutionCache::resolve(dir)) }
    }
}

/// Per-call search accounting, reported by the sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    pub solver_calls: u32,
    pub cache_hits: u32,
}

// ============================================================================
// Recipes
// ============================================================================

/// One ingredient of a case recipe.
#[derive(Clone, Copy, Debug)]
enum Piece {
    /// Two `C_16`-factors on the layer `{+-d}`.
    Zigzag(u32),
    /// One `C_m`-factor on the layer `{0}`.
    Column,
    /// Three `C_m`-factors on the layer `{+-4, 8}`.
    Quarter,
    /// Two `C_16`-factors and a `C_m`-factor on the layer `{+-1, 8}`.
    UnitHalf,
    /// Eight `C_16`-factors and the matching on `{8}` plus the row cliques.
    HalfClique,
    /// Two `C_16`-factors on `{i}` plus two row matchings.
    Fwd(u32),
    /// Two `C_16`-factors on `{-i}` plus two row matchings.
    Bwd(u32),
    /// Two `C_16`-factors and the matching on `{8}` plus `m(I_13..I_15)`.
    HalfTail,
    /// One `C_16`-factor and the matching on `{8}` plus `mI'_11`.
    HalfSingle,
    /// Four `C_16`-factors on `{+-6}` plus `m(I'_12..I'_15)`.
    SixQuad,
    /// One within-row `C_16`-factor from `m(T_k u T_{k+1})`.
    PairCycle(Table, usize),
    /// The plain one-factor `mT_k`.
    RowMatching(Table, usize),
    /// Solver-produced `C_m`-factors on the layer of the given differences.
    Pattern(&'static [i64]),
}

/// Decompositions of `C_m[16]` into `r1` `C_16`-factors and `16 - r1`
/// `C_m`-factors, for `r1` in `{0, 2, 4, 6, 8}` (`16` goes through the
/// blow-up route instead).
///
/// `r1 = 0` and `r1 = 8` deserve a note: the column sets `Z_16` and
/// `{0,+-2,+-4,+-6,8}` both sum to `8 mod 16`, so for odd `m` no
/// row-monotone pattern can carry them in one piece (see the solver module)
/// and the quarter layer `{+-4, 8}` absorbs that residue instead.
const CM16_RECIPES: &[(u32, &[Piece])] = &[
    (0, &[
        Piece::Quarter,
        Piece::Pattern(&[0, 5, -5]),
        Piece::Pattern(&[1, -1, 2, -2, 3, -3]),
        Piece::Pattern(&[6, -6, 7, -7]),
    ]),
    (2, &[
        Piece::Zigzag(5),
        Piece::Pattern(&[0, 1, -1, 2, -2]),
        Piece::Pattern(&[3, -3, 6, -6, 7, -7]),
        Piece::Quarter,
    ]),
    (4, &[
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Pattern(&[0, 6, -6]),
        Piece::Pattern(&[1, -1, 2, -2, 3, -3]),
        Piece::Quarter,
    ]),
    (6, &[
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::UnitHalf,
        Piece::Pattern(&[0, 3, -3]),
        Piece::Pattern(&[2, -2, 4, -4, 6, -6]),
    ]),
    (8, &[
        Piece::Zigzag(1),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Quarter,
        Piece::Pattern(&[0, 2, -2, 6, -6]),
    ]),
];

/// Direct recipes for the wreath targets not covered by the
/// `C_m[16]`-plus-cliques route.
const WREATH_RECIPES: &[(u32, &[Piece])] = &[
    (8, &[
        Piece::HalfClique,
        Piece::Pattern(&[0, 2, -2]),
        Piece::Pattern(&[1, -1, 5, -5, 6, -6]),
        Piece::Pattern(&[3, -3, 4, -4, 7, -7]),
    ]),
    (10, &[
        Piece::HalfSingle,
        Piece::SixQuad,
        Piece::PairCycle(Table::IPrime, 1),
        Piece::PairCycle(Table::IPrime, 3),
        Piece::PairCycle(Table::IPrime, 5),
        Piece::PairCycle(Table::IPrime, 7),
        Piece::PairCycle(Table::IPrime, 9),
        Piece::Column,
        Piece::Pattern(&[1, -1, 3, -3, 4, -4]),
        Piece::Pattern(&[2, -2, 5, -5, 7, -7]),
    ]),
    (12, &[
        Piece::HalfSingle,
        Piece::SixQuad,
        Piece::PairCycle(Table::IPrime, 1),
        Piece::PairCycle(Table::IPrime, 3),
        Piece::PairCycle(Table::IPrime, 5),
        Piece::PairCycle(Table::IPrime, 7),
        Piece::PairCycle(Table::IPrime, 9),
        Piece::Zigzag(5),
        Piece::Pattern(&[0, 1, -1, 2, -2]),
        Piece::Pattern(&[3, -3, 4, -4, 7, -7]),
    ]),
    (14, &[
        Piece::HalfClique,
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Pattern(&[0, 1, -1]),
        Piece::Pattern(&[2, -2, 4, -4, 6, -6]),
    ]),
    (16, &[
        Piece::HalfClique,
        Piece::Zigzag(1),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Column,
        Piece::Pattern(&[2, -2, 4, -4, 6, -6]),
    ]),
    (18, &[
        Piece::HalfSingle,
        Piece::SixQuad,
        Piece::PairCycle(Table::IPrime, 1),
        Piece::PairCycle(Table::IPrime, 3),
        Piece::PairCycle(Table::IPrime, 5),
        Piece::PairCycle(Table::IPrime, 7),
        Piece::PairCycle(Table::IPrime, 9),
        Piece::Zigzag(1),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Pattern(&[0, 2, -2, 4, -4]),
    ]),
    (20, &[
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Fwd(2),
        Piece::Fwd(4),
        Piece::Fwd(6),
        Piece::Bwd(2),
        Piece::Bwd(4),
        Piece::Bwd(6),
        Piece::HalfTail,
        Piece::Pattern(&[0, 1, -1]),
    ]),
    (22, &[
        Piece::Zigzag(1),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::Fwd(2),
        Piece::Fwd(4),
        Piece::Fwd(6),
        Piece::Bwd(2),
        Piece::Bwd(4),
        Piece::Bwd(6),
        Piece::HalfTail,
        Piece::Column,
    ]),
    (17, &[
        Piece::RowMatching(Table::IPrime, 11),
        Piece::SixQuad,
        Piece::PairCycle(Table::IPrime, 1),
        Piece::PairCycle(Table::IPrime, 3),
        Piece::PairCycle(Table::IPrime, 5),
        Piece::PairCycle(Table::IPrime, 7),
        Piece::PairCycle(Table::IPrime, 9),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::UnitHalf,
        Piece::Pattern(&[0, 2, -2, 4, -4]),
    ]),
    (19, &[
        Piece::RowMatching(Table::I, 15),
        Piece::Fwd(2),
        Piece::Fwd(4),
        Piece::Fwd(6),
        Piece::Bwd(2),
        Piece::Bwd(4),
        Piece::Bwd(6),
        Piece::PairCycle(Table::I, 13),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::UnitHalf,
        Piece::Pattern(&[0, 3, -3]),
    ]),
    (21, &[
        Piece::RowMatching(Table::I, 15),
        Piece::Fwd(2),
        Piece::Fwd(4),
        Piece::Fwd(6),
        Piece::Bwd(2),
        Piece::Bwd(4),
        Piece::Bwd(6),
        Piece::PairCycle(Table::I, 13),
        Piece::Zigzag(3),
        Piece::Zigzag(5),
        Piece::Zigzag(7),
        Piece::UnitHalf,
        Piece::Column,
    ]),
];

fn lookup_recipe(table: &[(u32, &'static [Piece])], key: u32) -> Option<&'static [Piece]> {
    table.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

// ============================================================================
// Piece construction
// ============================================================================

fn piece_name(piece: &Piece) -> String {
    match piece {
        Piece::Zigzag(d) => format!("zigzag d={d}"),
        Piece::Column => "columns".into(),
        Piece::Quarter => "quarter-layer".into(),
        Piece::UnitHalf => "unit-half".into(),
        Piece::HalfClique => "half-clique".into(),
        Piece::Fwd(i) => format!("shift-pair i={i}"),
        Piece::Bwd(i) => format!("shift-pair i=-{i}"),
        Piece::HalfTail => "half-tail".into(),
        Piece::HalfSingle => "half-single".into(),
        Piece::SixQuad => "six-quad".into(),
        Piece::PairCycle(t, k) => format!("row-cycle {0}{1}+{0}{2}", t.tag(), k, k + 1),
        Piece::RowMatching(t, k) => format!("rows {}{}", t.tag(), k),
        Piece::Pattern(cols) => {
            let ds = DifferenceMultiset::new(16, cols).expect("recipe multiset");
            format!("pattern{}", ds.token())
        }
    }
}

/// Solver-backed `C_m`-factorization of one column-difference layer, with
/// the persistent cache in front when the context carries one.
pub fn pattern_block(
    m: u32,
    cols: &[i64],
    ctx: &GenContext,
    stats: &mut GenStats,
) -> Result<Decomposition, AssemblyError> {
    let ds = DifferenceMultiset::new(16, cols)?;
    let key = CacheKey {
        kind: "row-monotone",
        m,
        n: 16,
        values: ds.values().to_vec(),
        version: SOLVER_VERSION,
    };
    if let Some(cache) = &ctx.cache {
        if let Some(d) = cache.lookup(&key) {
            if d.host == ds.layer(m) && d.count_len(m) == ds.factor_count() {
                stats.cache_hits += 1;
                return Ok(d);
            }
        }
    }
    stats.solver_calls += 1;
    let pattern = solve_row_monotone(m, 16, &ds, ctx.seed)?;
    let factors = pattern_to_factors(&pattern, &format!("pattern{}", ds.token()))?;
    let mut d = Decomposition::new(ds.layer(m));
    d.cycle_factors = factors;
    verify_decomposition(&d)?;
    if let Some(cache) = &ctx.cache {
        if let Err(e) = cache.store(&key, &d) {
            eprintln!("warning: could not store cache entry: {e}");
        }
    }
    Ok(d)
}

fn build_piece(
    piece: &Piece,
    m: u32,
    ctx: &GenContext,
    stats: &mut GenStats,
) -> Result<Decomposition, AssemblyError> {
    Ok(match piece {
        Piece::Zigzag(d) => blocks::zigzag_pair(m, 16, *d)?,
        Piece::Column => blocks::column_factor(m, 16)?,
        Piece::Quarter => blocks::quarter_triple(m, 16)?,
        Piece::UnitHalf => blocks::unit_half_split(m, 4)?,
        Piece::HalfClique => blocks::half_clique_block(m, 4)?,
        Piece::Fwd(i) => blocks::forward_shift_pair(m, *i)?,
        Piece::Bwd(i) => blocks::backward_shift_pair(m, *i)?,
        Piece::HalfTail => blocks::half_tail_block(m)?,
        Piece::HalfSingle => blocks::half_single_block(m)?,
        Piece::SixQuad => blocks::six_quad_block(m)?,
        Piece::PairCycle(t, k) => blocks::table_pair_factor(m, *t, *k)?,
        Piece::RowMatching(t, k) => blocks::row_matching_block(m, *t, *k)?,
        Piece::Pattern(cols) => pattern_block(m, cols, ctx, stats)?,
    })
}

/// Merge verified pieces into one decomposition of `target`. Ingredient
/// hosts must be pairwise edge-disjoint; an overlap aborts with the two
/// offending ingredient names, which catches recipe transcription errors
/// before the final partition check does.
fn merge_pieces(
    target: Host,
    pieces: Vec<(String, Decomposition)>,
) -> Result<Decomposition, AssemblyError> {
    let mut parts = Vec::with_capacity(pieces.len());
    for (name, d) in &pieces {
        let edges = d
            .host
            .edge_set()
            .map_err(|e| AssemblyError::Internal(format!("piece {name}: {e}")))?;
        parts.push(edges);
    }
    if let Err(crate::graph::GraphError::UnionOverlap { edge, first, second }) =
        crate::graph::disjoint_union(parts)
    {
        return Err(AssemblyError::Internal(format!(
            "ingredients `{}` and `{}` overlap at edge {edge}",
            pieces[first].0, pieces[second].0
        )));
    }
    let mut out = Decomposition::new(target);
    for (_, d) in pieces {
        out.absorb(d);
    }
    verify_decomposition(&out)?;
    Ok(out)
}

fn expect_census(
    stats: &DecompStats,
    m: u32,
    c16: usize,
    cm: usize,
    matchings: usize,
) -> Result<(), AssemblyError> {
    let got = (
        stats.cycles_of_len(16),
        stats.cycles_of_len(m),
        stats.one_factor_count,
    );
    if got != (c16, cm, matchings) {
        return Err(AssemblyError::Verification(Violation::CensusMismatch {
            expected: format!("c16={c16} cm={cm} matchings={matchings}"),
            got: format!("c16={} cm={} matchings={}", got.0, got.1, got.2),
        }));
    }
    Ok(())
}

// ============================================================================
// Public operations
// ============================================================================

/// Decompose `C_m[16]` into `r1` `C_16`-factors and `16 - r1` `C_m`-factors
/// for `r1` in `{0, 2, 4, 6, 8, 16}` and odd `m >= 9`.
pub fn hwp_cm16(
    m: u32,
    r1: u32,
    ctx: &GenContext,
    stats: &mut GenStats,
) -> Result<Decomposition, AssemblyError> {
    if m < 9 || m % 2 == 0 {
        return Err(AssemblyError::Unsupported(format!("m = {m} must be odd and at least 9")));
    }
    if r1 == 16 {
        // Blow up four C_4-factors of C_m[4] by width 4, turning each into
        // four C_16-factors via the fixed C_4[4] Hamiltonian model.
        let mut base = Decomposition::new(Host::Blown { m, n: 4 });
        base.cycle_factors = c4_ring_factorize(m)?;
        verify_decomposition(&base)?;
        let ham = c4_4_hamiltonian_decomposition();
        let out = blow_up(&base, 4, &ham, None)?;
        let out_stats = verify_decomposition(&out)?;
        expect_census(&out_stats, m, 16, 0, 0)?;
        return Ok(out);
    }
    let recipe = lookup_recipe(CM16_RECIPES, r1).ok_or_else(|| {
        AssemblyError::Unsupported(format!("r1 = {r1} not in {{0, 2, 4, 6, 8, 16}}"))
    })?;
    let mut pieces = Vec::with_capacity(recipe.len());
    for piece in recipe {
        pieces.push((piece_name(piece), build_piece(piece, m, ctx, stats)?));
    }
    let out = merge_pieces(Host::Blown { m, n: 16 }, pieces)?;
    let out_stats = verify_decomposition(&out)?;
    expect_census(&out_stats, m, r1 as usize, 16 - r1 as usize, 0)?;
    Ok(out)
}

/// Blow up a decomposition of `C_m[n]` (into `C_n`- and `C_m`-factors) by
/// width `w`: every vertex becomes `w` columns, every `C_n`-factor yields
/// `w` `C_{nw}`-factors through `ham_w` (a `C_{nw}`-factorization of
/// `C_n[w]`), and every `C_m`-factor yields `w` `C_m`-factors through
/// `cm_w` (a `C_m`-factorization of `C_m[w]`, required only when present).
pub fn blow_up(
    base: &Decomposition,
    w: u32,
    ham_w: &Decomposition,
    cm_w: Option<&Decomposition>,
) -> Result<Decomposition, AssemblyError> {
    let (m, n) = match base.host {
        Host::Blown { m, n } => (m, n),
        _ => return Err(AssemblyError::Internal("blow-up base must be a blown cycle".into())),
    };
    if m == n {
        return Err(AssemblyError::Unsupported(
            "blow-up with m = n would make factor lengths ambiguous".into(),
        ));
    }
    let base_stats = verify_decomposition(base)?;
    let alpha = base_stats.cycles_of_len(n);
    let beta = base_stats.cycles_of_len(m);
    if alpha + beta != base.cycle_factors.len() || base_stats.one_factor_count != 0 {
        return Err(AssemblyError::Internal(
            "blow-up base must consist of C_n- and C_m-factors only".into(),
        ));
    }

    // Validate the models.
    if ham_w.host != (Host::Blown { m: n, n: w }) {
        return Err(AssemblyError::Internal("C_n[w] model has the wrong host".into()));
    }
    let ham_stats = verify_decomposition(ham_w)?;
    if ham_stats.cycles_of_len(n * w) != w as usize
        || ham_w.cycle_factors.len() != w as usize
    {
        return Err(AssemblyError::Internal(format!(
            "C_n[w] model must be {w} factors of length {}",
            n * w
        )));
    }
    if beta > 0 {
        let model = cm_w.ok_or_else(|| {
            AssemblyError::Internal("base has C_m-factors but no C_m[w] model given".into())
        })?;
        if model.host != (Host::Blown { m, n: w }) {
            return Err(AssemblyError::Internal("C_m[w] model has the wrong host".into()));
        }
        let s = verify_decomposition(model)?;
        if s.cycles_of_len(m) != w as usize || model.cycle_factors.len() != w as usize {
            return Err(AssemblyError::Internal(format!(
                "C_m[w] model must be {w} factors of length {m}"
            )));
        }
    }

    let nw = n * w;
    let expand = |row: u32, col: u32, u: u32| crate::graph::Vertex::new(row, col * w + u);
    let mut out = Decomposition::new(Host::Blown { m, n: nw });
    for f in &base.cycle_factors {
        let (model, out_len) = if f.length == n {
            (ham_w, nw)
        } else {
            (cm_w.expect("checked above"), m)
        };
        for (k, model_factor) in model.cycle_factors.iter().enumerate() {
            let mut cycles = Vec::new();
            for base_cycle in &f.cycles {
                for model_cycle in &model_factor.cycles {
                    let cyc: Vec<crate::graph::Vertex> = model_cycle
                        .iter()
                        .map(|mv| {
                            let host_v = base_cycle[mv.row as usize];
                            expand(host_v.row, host_v.col, mv.col)
                        })
                        .collect();
                    cycles.push(cyc);
                }
            }
            out.cycle_factors.push(crate::factor::CycleFactor::new(
                out_len,
                format!("{} *w{w}#{}", f.label, k + 1),
                cycles,
            ));
        }
    }
    let out_stats = verify_decomposition(&out)?;
    expect_census(
        &out_stats,
        m,
        if nw == 16 { (w as usize) * alpha } else { 0 },
        (w as usize) * beta,
        0,
    )?;
    Ok(out)
}

/// Add the row-clique factorization on top of a `C_m[16]` decomposition:
/// seven `C_16`-factors (one Walecki Hamiltonian cycle of `K_16` copied
/// into every row) and the leftover matching, lifting `C_m[16]` to the
/// full wreath product.
pub fn add_clique_factorization(base: Decomposition) -> Result<Decomposition, AssemblyError> {
    let (m, n) = match base.host {
        Host::Blown { m, n: 16 } => (m, 16u32),
        _ => {
            return Err(AssemblyError::Internal(
                "clique factorization applies to C_m[16] decompositions".into(),
            ))
        }
    };
    let cliques = blocks::clique_walecki_block(m)?;
    let mut out = Decomposition::new(Host::Wreath { m, n });
    out.absorb(base);
    out.absorb(cliques);
    verify_decomposition(&out)?;
    Ok(out)
}

/// The headline operation: a verified partition of `C_m wr K_16` into `r`
/// `C_16`-factors, `23 - r` `C_m`-factors and one perfect matching, for odd
/// `m >= 9` and `7 <= r <= 23`.
pub fn generate(
    m: u32,
    r: u32,
    ctx: &GenContext,
) -> Result<(Decomposition, GenStats), AssemblyError> {
    if m % 2 == 0 || m < 9 {
        return Err(AssemblyError::Unsupported(format!(
            "m = {m}: the construction covers odd m >= 9"
        )));
    }
    let mut stats = GenStats::default();
    if !(7..=23).contains(&r) {
        return Err(AssemblyError::Unsupported(format!(
            "r = {r}: the construction covers 7 <= r <= 23"
        )));
    }
    let d = if matches!(r, 7 | 9 | 11 | 13 | 15 | 23) {
        let base = hwp_cm16(m, r - 7, ctx, &mut stats)?;
        add_clique_factorization(base)?
    } else {
        let recipe = lookup_recipe(WREATH_RECIPES, r)
            .ok_or_else(|| AssemblyError::Internal(format!("no recipe for r = {r}")))?;
        let mut pieces = Vec::with_capacity(recipe.len());
        for piece in recipe {
            pieces.push((piece_name(piece), build_piece(piece, m, ctx, &mut stats)?));
        }
        merge_pieces(Host::Wreath { m, n: 16 }, pieces)?
    };
    let final_stats = verify_decomposition(&d)?;
    expect_census(&final_stats, m, r as usize, (23 - r) as usize, 1)?;
    if final_stats.edge_count != (376 * m) as usize {
        return Err(AssemblyError::Internal(format!(
            "wreath edge total {} != 376m",
            final_stats.edge_count
        )));
    }
    Ok((d, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hwp_cm16_all_cases_m9() {
        let ctx = GenContext::default();
        let mut stats = GenStats::default();
        for r1 in [0u32, 2, 4, 6, 8, 16] {
            let d = hwp_cm16(9, r1, &ctx, &mut stats).unwrap();
            let s = verify_decomposition(&d).unwrap();
            assert_eq!(s.cycles_of_len(16), r1 as usize, "r1={r1}");
            assert_eq!(s.cycles_of_len(9), (16 - r1) as usize);
            assert_eq!(s.edge_count, 256 * 9);
        }
    }

    #[test]
    fn unsupported_parameters() {
        let ctx = GenContext::default();
        let mut stats = GenStats::default();
        assert!(matches!(
            hwp_cm16(9, 3, &ctx, &mut stats),
            Err(AssemblyError::Unsupported(_))
        ));
        assert!(matches!(generate(8, 10, &ctx), Err(AssemblyError::Unsupported(_))));
        assert!(matches!(generate(7, 10, &ctx), Err(AssemblyError::Unsupported(_))));
        let err = generate(9, 5, &ctx).unwrap_err();
        match err {
            AssemblyError::Unsupported(msg) => assert!(msg.contains("7 <= r <= 23")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(generate(9, 24, &ctx), Err(AssemblyError::Unsupported(_))));
    }

    #[test]
    fn generate_spot_checks() {
        let ctx = GenContext::default();
        for (m, r) in [(9u32, 14u32), (9, 17), (11, 8), (11, 23), (13, 7)] {
            let (d, _) = generate(m, r, &ctx).unwrap();
            let s = verify_decomposition(&d).unwrap();
            assert_eq!(s.cycles_of_len(16), r as usize);
            assert_eq!(s.cycles_of_len(m), (23 - r) as usize);
            assert_eq!(s.one_factor_count, 1);
            assert_eq!(s.edge_count, (376 * m) as usize);
        }
    }

    #[test]
    fn blow_up_census_checks() {
        // 4 C_4-factors of C_9[4] -> 16 C_16-factors of C_9[16].
        let mut base = Decomposition::new(Host::Blown { m: 9, n: 4 });
        base.cycle_factors = c4_ring_factorize(9).unwrap();
        let ham = c4_4_hamiltonian_decomposition();
        let out = blow_up(&base, 4, &ham, None).unwrap();
        assert_eq!(out.host, Host::Blown { m: 9, n: 16 });
        let s = verify_decomposition(&out).unwrap();
        assert_eq!(s.cycles_of_len(16), 16);
        assert_eq!(out.host.vertex_count(), 144);
        // A base C_m-factor without the C_m[w] model is rejected.
        let mut base2 = Decomposition::new(Host::Blown { m: 9, n: 4 });
        base2.absorb(blocks::column_factor(9, 4).unwrap());
        base2.absorb(blocks::quarter_triple(9, 4).unwrap());
        base2.host = Host::Blown { m: 9, n: 4 };
        assert!(blow_up(&base2, 4, &ham, None).is_err());
    }

    #[test]
    fn blow_up_cm_branch() {
        // All-C_m base: 4 C_9-factors of C_9[4] blown into 16 C_9-factors
        // of C_9[16], using the same C_9[4] decomposition as the model.
        let mut base = Decomposition::new(Host::Blown { m: 9, n: 4 });
        base.absorb(blocks::column_factor(9, 4).unwrap());
        base.absorb(blocks::quarter_triple(9, 4).unwrap());
        base.host = Host::Blown { m: 9, n: 4 };
        let ham = c4_4_hamiltonian_decomposition();
        let model = base.clone();
        let out = blow_up(&base, 4, &ham, Some(&model)).unwrap();
        let s = verify_decomposition(&out).unwrap();
        assert_eq!(s.cycles_of_len(9), 16);
        assert_eq!(s.edge_count, 2304);
    }

    #[test]
    fn pattern_block_uses_cache() {
        let tmp = tempfile::tempdir().unwrap();
        let ctx = GenContext {
            seed: 0,
            cache: Some(crate::cache::SolutionCache::new(tmp.path())),
        };
        let mut stats = GenStats::default();
        let a = pattern_block(9, &[0, 2, -2], &ctx, &mut stats).unwrap();
        assert_eq!(stats, GenStats { solver_calls: 1, cache_hits: 0 });
        let b = pattern_block(9, &[0, 2, -2], &ctx, &mut stats).unwrap();
        assert_eq!(stats, GenStats { solver_calls: 1, cache_hits: 1 });
        assert_eq!(a, b);
    }
}
