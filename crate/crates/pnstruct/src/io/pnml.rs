//! Single-page P/T nets in PNML.

use std::fmt::Write as _;

use roxmltree::{Document, Node as XmlNode};
use thiserror::Error;

use crate::marking::Marking;
use crate::net::{validate_net, NetError, PetriNet, RawNet};

pub const PTNET: &str = "http://www.pnml.org/version-2009/grammar/ptnet";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmlError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("unsupported net: {0}")]
    UnsupportedNetType(String),
    #[error(transparent)]
    Validation(#[from] NetError),
}

fn child<'a, 'i>(n: XmlNode<'a, 'i>, tag: &str) -> Option<XmlNode<'a, 'i>> {
    n.children().find(|c| c.has_tag_name(tag))
}

/// Text of `<tag><text>..</text></tag>` under `n`, trimmed.
fn label_text<'a>(n: XmlNode<'a, '_>, tag: &str) -> Option<&'a str> {
    child(n, tag).and_then(|l| child(l, "text")).and_then(|t| t.text()).map(str::trim)
}

fn attr(n: XmlNode, name: &str) -> Result<String, PnmlError> {
    n.attribute(name)
        .map(str::to_string)
        .ok_or_else(|| PnmlError::MalformedXml(format!("<{}> without `{name}`", n.tag_name().name())))
}

pub fn parse_pnml(xml: &str) -> Result<(PetriNet, Marking), PnmlError> {
    let doc = Document::parse(xml).map_err(|e| PnmlError::MalformedXml(e.to_string()))?;
    let root = doc.root_element();
    if !root.has_tag_name("pnml") {
        return Err(PnmlError::MalformedXml("root element is not <pnml>".into()));
    }
    let nets: Vec<_> = root.children().filter(|c| c.has_tag_name("net")).collect();
    let [net] = nets.as_slice() else {
        return Err(PnmlError::UnsupportedNetType(format!("{} <net> elements", nets.len())));
    };
    match net.attribute("type") {
        Some(PTNET) => {}
        other => return Err(PnmlError::UnsupportedNetType(format!("net type {other:?}"))),
    }
    let pages: Vec<_> = net.children().filter(|c| c.has_tag_name("page")).collect();
    let [page] = pages.as_slice() else {
        return Err(PnmlError::UnsupportedNetType(format!("{} pages", pages.len())));
    };

    let mut raw =
        RawNet { name: label_text(*net, "name").map(str::to_string).unwrap_or(attr(*net, "id")?), ..RawNet::default() };
    for el in page.children().filter(XmlNode::is_element) {
        match el.tag_name().name() {
            "place" => {
                let tokens = match label_text(el, "initialMarking") {
                    None | Some("") => 0,
                    Some(t) => t.parse().map_err(|_| PnmlError::MalformedXml(format!("initial marking `{t}`")))?,
                };
                raw.places.push((attr(el, "id")?, tokens));
            }
            "transition" => raw.transitions.push(attr(el, "id")?),
            "arc" => {
                if let Some(w) = label_text(el, "inscription") {
                    if w != "1" {
                        return Err(PnmlError::UnsupportedNetType(format!("arc weight {w}")));
                    }
                }
                raw.arcs.push((attr(el, "source")?, attr(el, "target")?));
            }
            _ => {}
        }
    }
    Ok(validate_net(&raw)?)
}

pub fn write_pnml(net: &PetriNet, m: &Marking) -> String {
    let mut out = String::new();
    let name = if net.name().is_empty() { "net" } else { net.name() };
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(out, "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">");
    let _ = writeln!(out, "  <net id=\"{name}\" type=\"{PTNET}\">");
    let _ = writeln!(out, "    <name><text>{name}</text></name>");
    let _ = writeln!(out, "    <page id=\"page\">");
    for (p, id) in net.place_names().iter().enumerate() {
        match m.get(p) {
            0 => {
                let _ = writeln!(out, "      <place id=\"{id}\"/>");
            }
            k => {
                let _ =
                    writeln!(out, "      <place id=\"{id}\"><initialMarking><text>{k}</text></initialMarking></place>");
            }
        }
    }
    for id in net.transition_names() {
        let _ = writeln!(out, "      <transition id=\"{id}\"/>");
    }
    for (i, (a, b)) in net.arcs().into_iter().enumerate() {
        let _ =
            writeln!(out, "      <arc id=\"a{i}\" source=\"{}\" target=\"{}\"/>", net.node_name(a), net.node_name(b));
    }
    let _ = writeln!(out, "    </page>\n  </net>\n</pnml>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    const MINIMAL: &str = r#"<pnml><net id="n" type="http://www.pnml.org/version-2009/grammar/ptnet"><page id="g">
        <place id="p"><initialMarking><text>1</text></initialMarking></place>
        <transition id="t"/>
        <arc id="a1" source="p" target="t"/><arc id="a2" source="t" target="p"><inscription><text>1</text></inscription></arc>
        </page></net></pnml>"#;

    #[test]
    fn minimal_document() {
        let (net, m) = parse_pnml(MINIMAL).unwrap();
        assert_eq!((net.place_count(), net.transition_count(), net.arc_count()), (1, 1, 2));
        assert_eq!(net.show(&m), "[p]");
    }

    #[test]
    fn weights_and_types_are_rejected() {
        let weighted = MINIMAL.replace("<text>1</text></inscription>", "<text>2</text></inscription>");
        assert!(matches!(parse_pnml(&weighted), Err(PnmlError::UnsupportedNetType(_))));
        let colored = MINIMAL.replace("ptnet", "symmetricnet");
        assert!(matches!(parse_pnml(&colored), Err(PnmlError::UnsupportedNetType(_))));
        let paged = MINIMAL.replace("</page>", "</page><page id=\"h\"/>");
        assert!(matches!(parse_pnml(&paged), Err(PnmlError::UnsupportedNetType(_))));
        assert!(matches!(parse_pnml("<pnml><net"), Err(PnmlError::MalformedXml(_))));
    }

    #[test]
    fn corpus_matches_lpn_transcription() {
        for (name, net, m) in corpus::example_nets() {
            let (back, m2) = parse_pnml(&write_pnml(&net, &m)).unwrap();
            assert_eq!(back.to_raw(&m2), net.to_raw(&m), "{name}");
        }
    }
}
