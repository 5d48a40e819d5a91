//! Certificate text format.
//!
//! Layout, line by line:
//!
//! ```text
//! HWP-CERT 1
//! host wreath m=9 q=16
//! factors c16=14 cm=9 matchings=1
//! factor 1 cycle len=16 label=zigzag d=5 #1
//! cycle 0:0 1:5 0:10 ...
//! ...
//! factor 24 matching label=clique-matching
//! edge 0:0 0:14
//! ...
//! end
//! ```
//!
//! Vertices print as `row:col`; cycles are written in canonical orientation
//! and matchings as sorted canonical edges, so serializing is deterministic
//! and `parse(serialize(d)) == d` for every decomposition this crate
//! produces. The census line is part of the format: a file whose block
//! counts disagree with it is rejected at parse time.

use std::fmt::Write as _;

use thiserror::Error;

use crate::factor::{CycleFactor, Decomposition, OneFactor};
use crate::graph::{ConnectionSet, Edge, Host, Vertex};

pub const FORMAT_HEADER: &str = "HWP-CERT 1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot serialize host: {0}")]
    Unserializable(String),
}

fn perr(line: usize, msg: impl Into<String>) -> CertError {
    CertError::Parse { line, msg: msg.into() }
}

// ============================================================================
// Serialization
// ============================================================================

/// Render the host body (everything after `host `).
fn host_body(host: &Host) -> Result<String, CertError> {
    match host {
        Host::Wreath { m, n } => Ok(format!("wreath m={m} q={n}")),
        Host::Blown { m, n } => Ok(format!("blown m={m} n={n}")),
        Host::RowCliques { m, n } => Ok(format!("mk m={m} q={n}")),
        Host::Cayley { conn } => {
            let cols = conn.row_shift_cols().ok_or_else(|| {
                CertError::Unserializable(
                    "only row-adjacent connection sets have a file form".into(),
                )
            })?;
            Ok(format!(
                "cayley m={} n={} conn=r:+-1;c:{}",
                conn.m(),
                conn.n(),
                col_tokens(conn.n(), &cols)
            ))
        }
        Host::MatchingCopies { m, n, pairs } => {
            let body: Vec<String> =
                pairs.iter().map(|&(a, b)| format!("{a}-{b}")).collect();
            Ok(format!("mi m={m} n={n} pairs={}", body.join(",")))
        }
        Host::Union { m, n, parts } => {
            let mut bodies = Vec::with_capacity(parts.len());
            for p in parts {
                bodies.push(host_body(p)?);
            }
            Ok(format!("union m={m} n={n} parts={}", bodies.join("|")))
        }
    }
}

/// Canonical column tokens: `0` and `n/2` stand alone, complementary pairs
/// collapse to `+-c`, everything else stays a plain residue.
fn col_tokens(n: u32, cols: &[u32]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut seen = vec![false; n as usize];
    for &c in cols {
        seen[c as usize] = true;
    }
    let mut done = vec![false; n as usize];
    for &c in cols {
        if done[c as usize] {
            continue;
        }
        let neg = (n - c) % n;
        if c == neg {
            out.push(format!("{c}"));
            done[c as usize] = true;
        } else if seen[neg as usize] {
            let rep = c.min(neg);
            out.push(format!("+-{rep}"));
            done[c as usize] = true;
            done[neg as usize] = true;
        } else {
            out.push(format!("{c}"));
            done[c as usize] = true;
        }
    }
    out.sort_by_key(|tok| tok.trim_start_matches("+-").parse::<u32>().unwrap_or(u32::MAX));
    out.join(",")
}

/// Census keys: `c16`, then `c<L>` for other non-`m` lengths, then `cm`.
fn census_line(d: &Decomposition) -> String {
    let m = d.host.m();
    let mut line = format!("factors c16={}", d.count_len(16));
    let mut extras: Vec<u32> = d
        .cycle_factors
        .iter()
        .map(|f| f.length)
        .filter(|&l| l != 16 && l != m)
        .collect();
    extras.sort_unstable();
    extras.dedup();
    for l in extras {
        let _ = write!(line, " c{l}={}", d.count_len(l));
    }
    let _ = write!(line, " cm={}", if m == 16 { 0 } else { d.count_len(m) });
    let _ = write!(line, " matchings={}", d.one_factors.len());
    line
}

pub fn serialize(d: &Decomposition) -> Result<String, CertError> {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_HEADER}");
    let _ = writeln!(out, "host {}", host_body(&d.host)?);
    let _ = writeln!(out, "{}", census_line(d));
    let mut idx = 0usize;
    for f in &d.cycle_factors {
        idx += 1;
        let _ = writeln!(out, "factor {idx} cycle len={} label={}", f.length, f.label);
        for cyc in &f.cycles {
            let verts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "cycle {}", verts.join(" "));
        }
    }
    for f in &d.one_factors {
        idx += 1;
        let _ = writeln!(out, "factor {idx} matching label={}", f.label);
        for e in &f.edges {
            let _ = writeln!(out, "edge {e}");
        }
    }
    let _ = writeln!(out, "end");
    Ok(out)
}

// ============================================================================
// Parsing
// ============================================================================

fn parse_kv(tok: &str, key: &str, line: usize) -> Result<u32, CertError> {
    let rest = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected {key}=<int>, found `{tok}`")))?;
    rest.parse::<u32>().map_err(|_| perr(line, format!("bad integer in `{tok}`")))
}

fn parse_cols(spec: &str, n: u32, line: usize) -> Result<Vec<i64>, CertError> {
    let mut cols = Vec::new();
    for tok in spec.split(',') {
        if tok.is_empty() {
            return Err(perr(line, "empty column token"));
        }
        if let Some(rest) = tok.strip_prefix("+-") {
            let c: i64 = rest.parse().map_err(|_| perr(line, format!("bad column `{tok}`")))?;
            cols.push(c);
            cols.push(-c);
        } else {
            let c: i64 = tok.parse().map_err(|_| perr(line, format!("bad column `{tok}`")))?;
            cols.push(c);
        }
    }
    if cols.iter().any(|&c| c >= n as i64) {
        return Err(perr(line, "column residue out of range"));
    }
    Ok(cols)
}

fn parse_host_body(body: &str, line: usize) -> Result<Host, CertError> {
    let (kind, rest) = body.split_once(' ').unwrap_or((body, ""));
    let toks: Vec<&str> = rest.split(' ').filter(|t| !t.is_empty()).collect();
    match kind {
        "wreath" | "mk" => {
            if toks.len() != 2 {
                return Err(perr(line, format!("{kind} host takes m= and q=")));
            }
            let m = parse_kv(toks[0], "m", line)?;
            let n = parse_kv(toks[1], "q", line)?;
            check_dims(m, n, line)?;
            Ok(if kind == "wreath" { Host::Wreath { m, n } } else { Host::RowCliques { m, n } })
        }
        "blown" => {
            if toks.len() != 2 {
                return Err(perr(line, "blown host takes m= and n="));
            }
            let m = parse_kv(toks[0], "m", line)?;
            let n = parse_kv(toks[1], "n", line)?;
            check_dims(m, n, line)?;
            Ok(Host::Blown { m, n })
        }
        "cayley" => {
            if toks.len() != 3 {
                return Err(perr(line, "cayley host takes m=, n= and conn="));
            }
            let m = parse_kv(toks[0], "m", line)?;
            let n = parse_kv(toks[1], "n", line)?;
            check_dims(m, n, line)?;
            let conn = toks[2]
                .strip_prefix("conn=r:+-1;c:")
                .ok_or_else(|| perr(line, "conn must look like conn=r:+-1;c:<cols>"))?;
            let cols = parse_cols(conn, n, line)?;
            Ok(Host::Cayley { conn: ConnectionSet::row_shift(m, n, &cols) })
        }
        "mi" => {
            if toks.len() != 3 {
                return Err(perr(line, "mi host takes m=, n= and pairs="));
            }
            let m = parse_kv(toks[0], "m", line)?;
            let n = parse_kv(toks[1], "n", line)?;
            check_dims(m, n, line)?;
            let spec = toks[2]
                .strip_prefix("pairs=")
                .ok_or_else(|| perr(line, "missing pairs="))?;
            let mut pairs = Vec::new();
            for p in spec.split(',') {
                let (a, b) = p
                    .split_once('-')
                    .ok_or_else(|| perr(line, format!("bad pair `{p}`")))?;
                let a: u32 = a.parse().map_err(|_| perr(line, format!("bad pair `{p}`")))?;
                let b: u32 = b.parse().map_err(|_| perr(line, format!("bad pair `{p}`")))?;
                if a >= n || b >= n {
                    return Err(perr(line, format!("pair `{p}` out of range")));
                }
                pairs.push((a, b));
            }
            Host::matching_copies(m, n, &pairs).map_err(|e| perr(line, e.to_string()))
        }
        "union" => {
            let (dims, parts_spec) = rest
                .split_once(" parts=")
                .ok_or_else(|| perr(line, "union host needs parts="))?;
            let dtoks: Vec<&str> = dims.split(' ').filter(|t| !t.is_empty()).collect();
            if dtoks.len() != 2 {
                return Err(perr(line, "union host takes m= and n="));
            }
            let m = parse_kv(dtoks[0], "m", line)?;
            let n = parse_kv(dtoks[1], "n", line)?;
            check_dims(m, n, line)?;
            let mut parts = Vec::new();
            for body in parts_spec.split('|') {
                parts.push(parse_host_body(body, line)?);
            }
            let host = Host::union(parts).map_err(|e| perr(line, e.to_string()))?;
            if host.m() != m || host.n() != n {
                return Err(perr(line, "union dimensions disagree with its parts"));
            }
            Ok(host)
        }
        other => Err(perr(line, format!("unknown host kind `{other}`"))),
    }
}

fn check_dims(m: u32, n: u32, line: usize) -> Result<(), CertError> {
    if m < 3 || n < 2 || m > 100_000 || n > 100_000 {
        Err(perr(line, format!("host dimensions m={m}, n={n} out of range")))
    } else {
        Ok(())
    }
}

fn parse_vertex(tok: &str, m: u32, n: u32, line: usize) -> Result<Vertex, CertError> {
    let (r, c) = tok
        .split_once(':')
        .ok_or_else(|| perr(line, format!("bad vertex `{tok}`")))?;
    let row: u32 = r.parse().map_err(|_| perr(line, format!("bad vertex `{tok}`")))?;
    let col: u32 = c.parse().map_err(|_| perr(line, format!("bad vertex `{tok}`")))?;
    if row >= m || col >= n {
        return Err(perr(line, format!("vertex `{tok}` outside Z_{m} x Z_{n}")));
    }
    Ok(Vertex::new(row, col))
}

pub fn parse(text: &str) -> Result<Decomposition, CertError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines.next().ok_or_else(|| perr(0, "empty file"))?;
    if header.trim_end() != FORMAT_HEADER {
        return Err(perr(ln, format!("expected `{FORMAT_HEADER}`")));
    }
    let (ln, host_line) = lines.next().ok_or_else(|| perr(ln, "missing host line"))?;
    let host_body_text = host_line
        .strip_prefix("host ")
        .ok_or_else(|| perr(ln, "expected `host ...`"))?;
    let host = parse_host_body(host_body_text.trim_end(), ln)?;
    let (m, n) = (host.m(), host.n());

    let (ln, census) = lines.next().ok_or_else(|| perr(ln, "missing census line"))?;
    let census_toks: Vec<&str> = census.split(' ').filter(|t| !t.is_empty()).collect();
    if census_toks.first() != Some(&"factors") {
        return Err(perr(ln, "expected `factors ...` census line"));
    }
    let mut claimed: Vec<(String, u32)> = Vec::new();
    for tok in &census_toks[1..] {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("bad census token `{tok}`")))?;
        let count: u32 =
            val.parse().map_err(|_| perr(ln, format!("bad census token `{tok}`")))?;
        claimed.push((key.to_string(), count));
    }
    let census_line_no = ln;

    let mut d = Decomposition::new(host);
    let mut pending: Option<(bool, u32, String, usize)> = None; // (is_cycle, len, label, line)
    let mut cycles_acc: Vec<Vec<Vertex>> = Vec::new();
    let mut edges_acc: Vec<Edge> = Vec::new();
    let mut next_idx = 1usize;
    let mut saw_end = false;

    fn flush(
        d: &mut Decomposition,
        pending: &mut Option<(bool, u32, String, usize)>,
        cycles_acc: &mut Vec<Vec<Vertex>>,
        edges_acc: &mut Vec<Edge>,
    ) -> Result<(), CertError> {
        if let Some((is_cycle, len, label, line)) = pending.take() {
            if is_cycle {
                if cycles_acc.is_empty() {
                    return Err(perr(line, "cycle factor block has no cycle lines"));
                }
                d.cycle_factors.push(CycleFactor::new(len, label, std::mem::take(cycles_acc)));
            } else {
                if edges_acc.is_empty() {
                    return Err(perr(line, "matching block has no edge lines"));
                }
                d.one_factors.push(OneFactor::new(label, std::mem::take(edges_acc)));
            }
        }
        Ok(())
    }

    for (ln, raw) in lines {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if saw_end {
            return Err(perr(ln, "content after `end`"));
        }
        if line == "end" {
            flush(&mut d, &mut pending, &mut cycles_acc, &mut edges_acc)?;
            saw_end = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("factor ") {
            flush(&mut d, &mut pending, &mut cycles_acc, &mut edges_acc)?;
            let mut parts = rest.splitn(2, ' ');
            let idx: usize = parts
                .next()
                .unwrap_or("")
                .parse()
                .map_err(|_| perr(ln, "bad factor index"))?;
            if idx != next_idx {
                return Err(perr(ln, format!("factor index {idx}, expected {next_idx}")));
            }
            next_idx += 1;
            let rest = parts.next().ok_or_else(|| perr(ln, "truncated factor line"))?;
            if let Some(spec) = rest.strip_prefix("cycle ") {
                let (len_tok, label_part) = spec
                    .split_once(" label=")
                    .ok_or_else(|| perr(ln, "cycle factor needs len= and label="))?;
                let len = parse_kv(len_tok.trim(), "len", ln)?;
                if len < 3 {
                    return Err(perr(ln, "cycle length below 3"));
                }
                pending = Some((true, len, label_part.to_string(), ln));
            } else if let Some(label_part) = rest.strip_prefix("matching label=") {
                pending = Some((false, 0, label_part.to_string(), ln));
            } else {
                return Err(perr(ln, "factor line must declare `cycle` or `matching`"));
            }
        } else if let Some(rest) = line.strip_prefix("cycle ") {
            match &pending {
                Some((true, _, _, _)) => {}
                _ => return Err(perr(ln, "cycle line outside a cycle factor block")),
            }
            let mut cyc = Vec::new();
            for tok in rest.split(' ').filter(|t| !t.is_empty()) {
                cyc.push(parse_vertex(tok, m, n, ln)?);
            }
            cycles_acc.push(cyc);
        } else if let Some(rest) = line.strip_prefix("edge ") {
            match &pending {
                Some((false, _, _, _)) => {}
                _ => return Err(perr(ln, "edge line outside a matching block")),
            }
            let toks: Vec<&str> = rest.split(' ').filter(|t| !t.is_empty()).collect();
            if toks.len() != 2 {
                return Err(perr(ln, "edge line takes exactly two vertices"));
            }
            let u = parse_vertex(toks[0], m, n, ln)?;
            let v = parse_vertex(toks[1], m, n, ln)?;
            let e = Edge::try_new(u, v).ok_or_else(|| perr(ln, "loop edge"))?;
            edges_acc.push(e);
        } else {
            return Err(perr(ln, format!("unrecognized line `{line}`")));
        }
    }
    if !saw_end {
        return Err(perr(text.lines().count(), "missing `end` line"));
    }

    // The census line must agree with the blocks.
    for (key, count) in &claimed {
        let actual = match key.as_str() {
            "c16" => d.count_len(16) as u32,
            "cm" => {
                if m == 16 {
                    0
                } else {
                    d.count_len(m) as u32
                }
            }
            "matchings" => d.one_factors.len() as u32,
            other => {
                let l: u32 = other
                    .strip_prefix('c')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| {
                        perr(census_line_no, format!("unknown census key `{other}`"))
                    })?;
                d.count_len(l) as u32
            }
        };
        if actual != *count {
            return Err(perr(
                census_line_no,
                format!("census claims {key}={count}, blocks have {actual}"),
            ));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks;
    use crate::factor::verify_decomposition;

    #[test]
    fn round_trip_block_certificates() {
        let samples = vec![
            blocks::zigzag_pair(9, 16, 5).unwrap(),
            blocks::half_clique_block(9, 4).unwrap(),
            blocks::half_tail_block(11).unwrap(),
            blocks::row_matching_block(9, crate::tables::Table::IPrime, 11).unwrap(),
            crate::tables::c4_4_hamiltonian_decomposition(),
        ];
        for d in samples {
            let text = serialize(&d).unwrap();
            let back = parse(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize(&back).unwrap(), text);
            verify_decomposition(&back).unwrap();
        }
    }

    #[test]
    fn header_and_host_lines() {
        let d = blocks::column_factor(9, 16).unwrap();
        let text = serialize(&d).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("HWP-CERT 1"));
        assert_eq!(lines.next(), Some("host cayley m=9 n=16 conn=r:+-1;c:0"));
        assert_eq!(lines.next(), Some("factors c16=0 cm=1 matchings=0"));
    }

    #[test]
    fn conn_token_forms() {
        let d = blocks::quarter_triple(9, 16).unwrap();
        let text = serialize(&d).unwrap();
        assert!(text.contains("conn=r:+-1;c:+-4,8"), "{text}");
        let back = parse(&text).unwrap();
        assert_eq!(back.host, d.host);
    }

    #[test]
    fn truncated_and_corrupt_files() {
        let d = blocks::zigzag_pair(9, 16, 5).unwrap();
        let text = serialize(&d).unwrap();

        let truncated: String =
            text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse(&truncated), Err(CertError::Parse { .. })));

        let bad_header = text.replacen("HWP-CERT 1", "HWP-CERT 2", 1);
        assert!(parse(&bad_header).is_err());

        let bad_census = text.replacen("c16=2", "c16=3", 1);
        let err = parse(&bad_census).unwrap_err();
        match err {
            CertError::Parse { msg, .. } => assert!(msg.contains("census")),
            other => panic!("unexpected {other:?}"),
        }

        let bad_vertex = text.replacen("0:0", "9:0", 1);
        assert!(parse(&bad_vertex).is_err());
    }

    #[test]
    fn verification_catches_dropped_edge_not_parser() {
        // Removing one whole edge line from a matching keeps the file
        // well-formed (census counts blocks, not edges); the verifier must
        // be the one to reject it.
        let d = blocks::row_matching_block(9, crate::tables::Table::I, 15).unwrap();
        let text = serialize(&d).unwrap();
        let victim = text.lines().find(|l| l.starts_with("edge ")).unwrap().to_string();
        let dropped = text.replacen(&format!("{victim}\n"), "", 1);
        let parsed = parse(&dropped).unwrap();
        assert!(verify_decomposition(&parsed).is_err());
    }
}
