//! Line-oriented text formats for instances and matchings.
//!
//! Instance files:
//!
//! ```text
//! # comment
//! dm 1 <n> <k> <d> <perfect|max> <line|cycle>
//! e <s> <t> <weight>      # weight is an integer or p/q
//! r <s> <count>           # optional loop lines
//! ```
//!
//! Matching files hold `m <s> <t>` lines. Both formats reject duplicates.
//! Serialization is canonical (edges sorted by `(s, t)`, loops by position),
//! so equal objects always produce byte-identical files.

use std::collections::BTreeMap;

use crate::core::{Edge, EdgeId, Instance, Matching, Mode, Variant};
use crate::rational::{fmt_rat, parse_rat};
use crate::{Error, Result};

/// An instance plus the optional loop multiset carried by `r` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedInstance {
    pub instance: Instance,
    /// Loop positions, sorted, with multiplicity.
    pub loops: Vec<usize>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed {what} `{token}`")))
}

/// Parses the instance text format.
pub fn parse_instance(text: &str) -> Result<ParsedInstance> {
    let mut header: Option<(usize, usize, usize, Mode, Variant)> = None;
    let mut edges = Vec::new();
    let mut loop_counts: BTreeMap<usize, usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "dm" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate header line"));
                }
                if fields.len() != 7 || fields[1] != "1" {
                    return Err(parse_err(
                        lineno,
                        "header must be `dm 1 <n> <k> <d> <perfect|max> <line|cycle>`",
                    ));
                }
                let n = parse_usize(lineno, fields[2], "node count")?;
                let k = parse_usize(lineno, fields[3], "node count")?;
                let d = parse_usize(lineno, fields[4], "distance")?;
                let mode = match fields[5] {
                    "perfect" => Mode::Perfect,
                    "max" => Mode::Maximum,
                    other => return Err(parse_err(lineno, format!("unknown mode `{other}`"))),
                };
                let variant = match fields[6] {
                    "line" => Variant::Line,
                    "cycle" => Variant::Cycle,
                    other => return Err(parse_err(lineno, format!("unknown variant `{other}`"))),
                };
                header = Some((n, k, d, mode, variant));
            }
            "e" => {
                if header.is_none() {
                    return Err(parse_err(lineno, "edge line before header"));
                }
                if fields.len() != 4 {
                    return Err(parse_err(lineno, "edge line must be `e <s> <t> <weight>`"));
                }
                let s = parse_usize(lineno, fields[1], "S-index")?;
                let t = parse_usize(lineno, fields[2], "T-index")?;
                let weight = parse_rat(fields[3]).map_err(|e| parse_err(lineno, e.to_string()))?;
                edges.push(Edge::new(s, t, weight));
            }
            "r" => {
                if header.is_none() {
                    return Err(parse_err(lineno, "loop line before header"));
                }
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "loop line must be `r <s> <count>`"));
                }
                let s = parse_usize(lineno, fields[1], "S-index")?;
                let count = parse_usize(lineno, fields[2], "loop count")?;
                if count == 0 {
                    return Err(parse_err(lineno, "loop count must be positive"));
                }
                if loop_counts.insert(s, count).is_some() {
                    return Err(parse_err(lineno, format!("duplicate loop line for s{s}")));
                }
            }
            other => return Err(parse_err(lineno, format!("unknown record `{other}`"))),
        }
    }

    let (n, k, d, mode, variant) =
        header.ok_or_else(|| parse_err(text.lines().count().max(1), "missing header line"))?;
    for &s in loop_counts.keys() {
        if s == 0 || s > n {
            return Err(Error::InvalidInput(format!(
                "loop position s{s} out of range 1..={n}"
            )));
        }
    }
    let instance = Instance::new(n, k, d, edges, variant, mode)?;
    let mut loops = Vec::new();
    for (s, count) in loop_counts {
        loops.extend(std::iter::repeat_n(s, count));
    }
    Ok(ParsedInstance { instance, loops })
}

/// Canonical serialization; `comments` are emitted verbatim as `#` lines
/// after the header.
pub fn serialize_instance(inst: &Instance, loops: &[usize], comments: &[String]) -> String {
    let mut out = String::new();
    let mode = match inst.mode() {
        Mode::Perfect => "perfect",
        Mode::Maximum => "max",
    };
    let variant = match inst.variant() {
        Variant::Line => "line",
        Variant::Cycle => "cycle",
    };
    out.push_str(&format!(
        "dm 1 {} {} {} {} {}\n",
        inst.n(),
        inst.k(),
        inst.d(),
        mode,
        variant
    ));
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    for e in inst.edges() {
        out.push_str(&format!("e {} {} {}\n", e.s, e.t, fmt_rat(&e.weight)));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in loops {
        *counts.entry(s).or_default() += 1;
    }
    for (s, count) in counts {
        out.push_str(&format!("r {s} {count}\n"));
    }
    out
}

/// Parses a matching file against an instance; edges must exist and may not
/// repeat.
pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching> {
    Matching::from_ids(parse_edge_list(text, inst)?)
}

/// Parses `m <s> <t>` lines preserving their order; used both for matchings
/// and for explicit greedy edge orders.
pub fn parse_edge_list(text: &str, inst: &Instance) -> Result<Vec<EdgeId>> {
    let mut ids = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] != "m" || fields.len() != 3 {
            return Err(parse_err(lineno, "matching line must be `m <s> <t>`"));
        }
        let s = parse_usize(lineno, fields[1], "S-index")?;
        let t = parse_usize(lineno, fields[2], "T-index")?;
        let id = inst
            .edge_id(s, t)
            .ok_or_else(|| parse_err(lineno, format!("edge s{s} t{t} not in instance")))?;
        if ids.contains(&id) {
            return Err(parse_err(lineno, format!("duplicate edge s{s} t{t}")));
        }
        ids.push(id);
    }
    Ok(ids)
}

/// Canonical matching serialization.
pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    let mut out = String::new();
    for &id in m.ids() {
        let e = inst.edge(id);
        out.push_str(&format!("m {} {}\n", e.s, e.t));
    }
    out
}

/// FNV-1a 64-bit digest of a byte string, rendered as 16 hex digits.
/// Stable across platforms; used to identify instances in reports.
pub fn digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
