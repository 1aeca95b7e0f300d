//! Line-based text format and its JSON mirror.
//!
//! ```text
//! c comment
//! p ksp <num_sets> <k> <universe_size>
//! s <num>/<den> <elem> <elem> ...
//!
//! p mwis <n> <m> [<d>]
//! v <id> <num>/<den>
//! e <u> <v>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Instance, MwisInstance, PackingInstance};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what}")))
}

fn weight(tok: Option<&str>, line: usize) -> Result<Rational> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing weight"))?;
    parse_rational(tok).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::parse(line, msg),
        other => other,
    })
}

enum Header {
    Ksp { sets: usize, k: usize, universe: usize },
    Mwis { n: usize, m: usize, d: Option<usize> },
}

pub fn parse_text(text: &str) -> Result<Instance> {
    let mut header = None;
    let mut sets = Vec::new();
    let mut set_weights = Vec::new();
    let mut vertex_weights: Vec<Option<Rational>> = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match (tag, &header) {
            ("c", _) => continue,
            ("p", None) => {
                header = Some(match toks.next() {
                    Some("ksp") => Header::Ksp {
                        sets: num(toks.next(), line, "set count")?,
                        k: num(toks.next(), line, "k")?,
                        universe: num(toks.next(), line, "universe size")?,
                    },
                    Some("mwis") => {
                        let n = num(toks.next(), line, "vertex count")?;
                        vertex_weights = vec![None; n];
                        let m = num(toks.next(), line, "edge count")?;
                        let d = toks.next().map(|t| num(Some(t), line, "claw bound")).transpose()?;
                        Header::Mwis { n, m, d }
                    }
                    _ => return Err(Error::parse(line, "unknown problem kind")),
                });
            }
            ("p", Some(_)) => return Err(Error::parse(line, "duplicate header")),
            (_, None) => return Err(Error::parse(line, "record before header")),
            ("s", Some(Header::Ksp { .. })) => {
                set_weights.push(weight(toks.next(), line)?);
                let elems = toks.map(|t| num(Some(t), line, "element")).collect::<Result<Vec<usize>>>()?;
                sets.push(elems);
                continue;
            }
            ("v", Some(Header::Mwis { n, .. })) => {
                let id: usize = num(toks.next(), line, "vertex id")?;
                if id >= *n {
                    return Err(Error::parse(line, format!("vertex {id} out of range")));
                }
                if vertex_weights[id].is_some() {
                    return Err(Error::parse(line, format!("vertex {id} declared twice")));
                }
                vertex_weights[id] = Some(weight(toks.next(), line)?);
            }
            ("e", Some(Header::Mwis { .. })) => {
                edges.push((num(toks.next(), line, "endpoint")?, num(toks.next(), line, "endpoint")?));
            }
            _ => return Err(Error::parse(line, format!("unexpected record `{tag}`"))),
        }
        if toks.next().is_some() {
            return Err(Error::parse(line, "trailing tokens"));
        }
    }

    match header {
        None => Err(Error::parse(0, "missing header")),
        Some(Header::Ksp { sets: count, k, universe }) => {
            if sets.len() != count {
                return Err(Error::parse(0, format!("header promises {count} sets, found {}", sets.len())));
            }
            Ok(Instance::Packing(PackingInstance::new(universe, k, sets, set_weights)?))
        }
        Some(Header::Mwis { m, d, .. }) => {
            if edges.len() != m {
                return Err(Error::parse(0, format!("header promises {m} edges, found {}", edges.len())));
            }
            let weights = vertex_weights
                .into_iter()
                .enumerate()
                .map(|(v, w)| w.ok_or_else(|| Error::parse(0, format!("vertex {v} not declared"))))
                .collect::<Result<Vec<_>>>()?;
            let inst = MwisInstance { weights, edges, claw_bound: d };
            inst_graph_check(&inst)?;
            Ok(Instance::Mwis(inst))
        }
    }
}

fn inst_graph_check(inst: &MwisInstance) -> Result<()> {
    crate::graph::ConflictGraph::new(inst.weights.clone(), &inst.edges).map(|_| ())
}

pub fn write_text(inst: &Instance) -> String {
    let mut out = String::new();
    match inst {
        Instance::Packing(p) => {
            writeln!(out, "p ksp {} {} {}", p.sets.len(), p.k, p.universe_size).unwrap();
            for (set, w) in p.sets.iter().zip(&p.weights) {
                write!(out, "s {}", format_rational(w)).unwrap();
                for e in set {
                    write!(out, " {e}").unwrap();
                }
                out.push('\n');
            }
        }
        Instance::Mwis(m) => {
            write!(out, "p mwis {} {}", m.weights.len(), m.edges.len()).unwrap();
            if let Some(d) = m.claw_bound {
                write!(out, " {d}").unwrap();
            }
            out.push('\n');
            for (v, w) in m.weights.iter().enumerate() {
                writeln!(out, "v {v} {}", format_rational(w)).unwrap();
            }
            for (u, v) in &m.edges {
                writeln!(out, "e {u} {v}").unwrap();
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universe: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sets: Option<Vec<Vec<usize>>>,
    weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claw_bound: Option<usize>,
}

pub fn to_json(inst: &Instance) -> String {
    let doc = match inst {
        Instance::Packing(p) => InstanceDoc {
            kind: "ksp".into(),
            k: Some(p.k),
            universe: Some(p.universe_size),
            sets: Some(p.sets.clone()),
            weights: p.weights.iter().map(format_rational).collect(),
            edges: None,
            claw_bound: None,
        },
        Instance::Mwis(m) => InstanceDoc {
            kind: "mwis".into(),
            k: None,
            universe: None,
            sets: None,
            weights: m.weights.iter().map(format_rational).collect(),
            edges: Some(m.edges.clone()),
            claw_bound: m.claw_bound,
        },
    };
    serde_json::to_string_pretty(&doc).expect("instance serializes")
}

pub fn from_json(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let weights = doc.weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?;
    let missing = |f: &str| Error::InvalidInstance(format!("ksp document lacks `{f}`"));
    match doc.kind.as_str() {
        "ksp" => Ok(Instance::Packing(PackingInstance::new(
            doc.universe.ok_or_else(|| missing("universe"))?,
            doc.k.ok_or_else(|| missing("k"))?,
            doc.sets.ok_or_else(|| missing("sets"))?,
            weights,
        )?)),
        "mwis" => {
            let inst = MwisInstance { weights, edges: doc.edges.unwrap_or_default(), claw_bound: doc.claw_bound };
            inst_graph_check(&inst)?;
            Ok(Instance::Mwis(inst))
        }
        other => Err(Error::InvalidInstance(format!("unknown kind `{other}`"))),
    }
}

/// Reads either format; JSON is recognized by a leading `{`.
pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        from_json(&text)
    } else {
        parse_text(&text)
    }
}
