//! Line-oriented net format:
//!
//! ```text
//! # comment
//! net NAME
//! place ID [TOKENS]
//! trans ID
//! arc FROM TO
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::marking::Marking;
use crate::net::{is_valid_id, validate_net, NetError, PetriNet, RawNet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpnError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{id}` declared twice")]
    DuplicateDecl { line: usize, id: String },
    #[error("line {line}: arc endpoint `{id}` is not declared")]
    UnknownArcEndpoint { line: usize, id: String },
    #[error(transparent)]
    Validation(#[from] NetError),
}

fn syntax(line: usize, message: impl Into<String>) -> LpnError {
    LpnError::Syntax { line, message: message.into() }
}

fn ident(line: usize, tok: Option<&str>) -> Result<String, LpnError> {
    match tok {
        Some(id) if is_valid_id(id) => Ok(id.to_string()),
        Some(id) => Err(syntax(line, format!("invalid identifier `{id}`"))),
        None => Err(syntax(line, "missing identifier")),
    }
}

pub fn parse_lpn(text: &str) -> Result<(PetriNet, Marking), LpnError> {
    let mut raw = RawNet::default();
    let mut named = false;
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut arcs: Vec<(usize, String, String)> = Vec::new();
    let mut arc_set = BTreeSet::new();

    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(keyword) = toks.next() else { continue };
        match keyword {
            "net" => {
                if named {
                    return Err(syntax(line, "second `net` declaration"));
                }
                raw.name = ident(line, toks.next())?;
                named = true;
            }
            "place" | "trans" => {
                let id = ident(line, toks.next())?;
                if ids.insert(id.clone(), line).is_some() {
                    return Err(LpnError::DuplicateDecl { line, id });
                }
                if keyword == "place" {
                    let tokens = match toks.next() {
                        None => 0,
                        Some(n) => n.parse::<u32>().map_err(|_| syntax(line, format!("bad token count `{n}`")))?,
                    };
                    raw.places.push((id, tokens));
                } else {
                    raw.transitions.push(id);
                }
            }
            "arc" => {
                let a = ident(line, toks.next())?;
                let b = ident(line, toks.next())?;
                if !arc_set.insert((a.clone(), b.clone())) {
                    return Err(LpnError::DuplicateDecl { line, id: format!("{a} {b}") });
                }
                arcs.push((line, a, b));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(syntax(line, format!("unexpected `{extra}`")));
        }
    }
    for (line, a, b) in arcs {
        for id in [&a, &b] {
            if !ids.contains_key(id) {
                return Err(LpnError::UnknownArcEndpoint { line, id: id.clone() });
            }
        }
        raw.arcs.push((a, b));
    }
    Ok(validate_net(&raw)?)
}

/// Sorted declarations: places, transitions, then arcs by endpoint ids.
pub fn write_lpn(net: &PetriNet, m: &Marking) -> String {
    let mut out = String::new();
    if !net.name().is_empty() {
        let _ = writeln!(out, "net {}", net.name());
    }
    for (p, name) in net.place_names().iter().enumerate() {
        match m.get(p) {
            0 => writeln!(out, "place {name}"),
            k => writeln!(out, "place {name} {k}"),
        }
        .expect("writing to a string");
    }
    for name in net.transition_names() {
        let _ = writeln!(out, "trans {name}");
    }
    let mut arcs: Vec<(&str, &str)> =
        net.arcs().into_iter().map(|(a, b)| (net.node_name(a), net.node_name(b))).collect();
    arcs.sort();
    for (a, b) in arcs {
        let _ = writeln!(out, "arc {a} {b}");
    }
    out
}
