//! Line-based structure files and DOT export.
//!
//! A file holds one or more sections, each opened by `frame NAME` and
//! followed by `world w`, `rel a u v`, `prop p w`, and `urel P w` lines.
//! Kripke models use `prop`, first-order structures use `urel` (and `rel`
//! for binary relations); tokens are whitespace-separated and a line whose
//! first token starts with `#` is a comment. Tokens may contain `#`
//! elsewhere, so machine-generated names like `q#1` survive a round trip.

use super::{FOStructure, Frame, KripkeError, Model};
use crate::syntax::UNIVERSAL_LABEL;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A parsed structure section, convertible to a frame, model, or
/// first-order structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamedStructure {
    pub name: String,
    pub worlds: Vec<String>,
    pub rels: BTreeMap<String, Vec<(usize, usize)>>,
    pub props: BTreeMap<String, Vec<usize>>,
    pub urels: BTreeMap<String, Vec<usize>>,
}

impl NamedStructure {
    pub fn to_frame(&self) -> Frame {
        let mut f = Frame::new(self.worlds.clone());
        for (label, pairs) in &self.rels {
            f.ensure_label(label);
            for &(u, v) in pairs {
                f.add_edge(label, u, v);
            }
        }
        f
    }

    pub fn to_model(&self) -> Model {
        let mut m = Model::new(self.to_frame());
        for (p, worlds) in &self.props {
            for &w in worlds {
                m.set_prop(p, w);
            }
        }
        m
    }

    pub fn to_fostructure(&self) -> FOStructure {
        let mut s = FOStructure::new(self.worlds.clone());
        for (label, pairs) in &self.rels {
            s.ensure_binary(label);
            for &(u, v) in pairs {
                s.add_pair(label, u, v);
            }
        }
        for (name, elems) in self.urels.iter().chain(self.props.iter()) {
            s.ensure_unary(name);
            for &e in elems {
                s.add_unary(name, e);
            }
        }
        s
    }

    pub fn of_frame(name: &str, f: &Frame) -> Self {
        let mut s = NamedStructure {
            name: name.to_string(),
            worlds: f.world_names().to_vec(),
            ..Default::default()
        };
        for (label, rel) in f.relations() {
            s.rels
                .insert(label.clone(), rel.pairs().iter().copied().collect());
        }
        s
    }

    pub fn of_model(name: &str, m: &Model) -> Self {
        let mut s = Self::of_frame(name, &m.frame);
        for (p, set) in m.valuation() {
            s.props.insert(p.clone(), set.iter().collect());
        }
        s
    }

    pub fn of_fostructure(name: &str, st: &FOStructure) -> Self {
        let mut s = NamedStructure {
            name: name.to_string(),
            worlds: st.element_names().to_vec(),
            ..Default::default()
        };
        for (label, rel) in st.binary_relations() {
            s.rels
                .insert(label.clone(), rel.pairs().iter().copied().collect());
        }
        for (name, set) in st.unary_relations() {
            s.urels.insert(name.clone(), set.iter().collect());
        }
        s
    }
}

/// Parses a structure file into its sections.
pub fn parse_structures(text: &str) -> Result<Vec<NamedStructure>, KripkeError> {
    let mut out: Vec<NamedStructure> = Vec::new();
    let err = |line: usize, msg: String| KripkeError::FileFormat { line, msg };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0].starts_with('#') {
            continue;
        }
        let current = |out: &mut Vec<NamedStructure>| -> Result<usize, KripkeError> {
            if out.is_empty() {
                Err(err(line_no, "expected 'frame NAME' first".into()))
            } else {
                Ok(out.len() - 1)
            }
        };
        match toks[0] {
            "frame" => {
                if toks.len() != 2 {
                    return Err(err(line_no, "usage: frame NAME".into()));
                }
                out.push(NamedStructure {
                    name: toks[1].to_string(),
                    ..Default::default()
                });
            }
            "world" => {
                if toks.len() != 2 {
                    return Err(err(line_no, "usage: world NAME".into()));
                }
                let i = current(&mut out)?;
                if out[i].worlds.iter().any(|w| w == toks[1]) {
                    return Err(err(line_no, format!("duplicate world '{}'", toks[1])));
                }
                out[i].worlds.push(toks[1].to_string());
            }
            "rel" => {
                if toks.len() != 4 {
                    return Err(err(line_no, "usage: rel LABEL FROM TO".into()));
                }
                if toks[1] == UNIVERSAL_LABEL {
                    return Err(err(
                        line_no,
                        format!("relation label '{UNIVERSAL_LABEL}' is reserved"),
                    ));
                }
                let i = current(&mut out)?;
                let u = lookup(&out[i], toks[2]).ok_or_else(|| {
                    err(line_no, format!("unknown world '{}'", toks[2]))
                })?;
                let v = lookup(&out[i], toks[3]).ok_or_else(|| {
                    err(line_no, format!("unknown world '{}'", toks[3]))
                })?;
                out[i]
                    .rels
                    .entry(toks[1].to_string())
                    .or_default()
                    .push((u, v));
            }
            "prop" | "urel" => {
                if toks.len() != 3 {
                    return Err(err(line_no, format!("usage: {} NAME WORLD", toks[0])));
                }
                let i = current(&mut out)?;
                let w = lookup(&out[i], toks[2]).ok_or_else(|| {
                    err(line_no, format!("unknown world '{}'", toks[2]))
                })?;
                let map = if toks[0] == "prop" {
                    &mut out[i].props
                } else {
                    &mut out[i].urels
                };
                map.entry(toks[1].to_string()).or_default().push(w);
            }
            other => {
                return Err(err(line_no, format!("unknown directive '{other}'")));
            }
        }
    }
    for s in &mut out {
        for pairs in s.rels.values_mut() {
            pairs.sort_unstable();
            pairs.dedup();
        }
        for worlds in s.props.values_mut().chain(s.urels.values_mut()) {
            worlds.sort_unstable();
            worlds.dedup();
        }
    }
    Ok(out)
}

impl std::fmt::Display for NamedStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "frame {}", self.name)?;
        for w in &self.worlds {
            writeln!(f, "world {w}")?;
        }
        for (label, pairs) in &self.rels {
            for &(u, v) in pairs {
                writeln!(f, "rel {label} {} {}", self.worlds[u], self.worlds[v])?;
            }
        }
        for (p, worlds) in &self.props {
            for &w in worlds {
                writeln!(f, "prop {p} {}", self.worlds[w])?;
            }
        }
        for (p, worlds) in &self.urels {
            for &w in worlds {
                writeln!(f, "urel {p} {}", self.worlds[w])?;
            }
        }
        Ok(())
    }
}

/// DOT export: one digraph per section, edge labels carrying modality
/// names, double circles on worlds satisfying some proposition or unary
/// relation.
pub fn to_dot(sections: &[NamedStructure]) -> String {
    let mut s = String::new();
    for sec in sections {
        let _ = writeln!(s, "digraph \"{}\" {{", sec.name);
        for (i, w) in sec.worlds.iter().enumerate() {
            let marks: Vec<&str> = sec
                .props
                .iter()
                .chain(sec.urels.iter())
                .filter(|(_, ws)| ws.contains(&i))
                .map(|(p, _)| p.as_str())
                .collect();
            let shape = if marks.is_empty() {
                "circle"
            } else {
                "doublecircle"
            };
            let label = if marks.is_empty() {
                w.clone()
            } else {
                format!("{w}\\n{}", marks.join(","))
            };
            let _ = writeln!(s, "  \"{w}\" [shape={shape}, label=\"{label}\"];");
        }
        for (label, pairs) in &sec.rels {
            for &(u, v) in pairs {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{label}\"];",
                    sec.worlds[u], sec.worlds[v]
                );
            }
        }
        let _ = writeln!(s, "}}");
    }
    s
}

fn lookup(s: &NamedStructure, name: &str) -> Option<usize> {
    s.worlds.iter().position(|w| w == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a two-world model
frame demo
world w0
world w1
rel a w0 w1
prop p w1
prop q#1 w0
";

    #[test]
    fn parse_and_roundtrip() {
        let sections = parse_structures(SAMPLE).unwrap();
        assert_eq!(sections.len(), 1);
        let m = sections[0].to_model();
        assert_eq!(m.n_worlds(), 2);
        assert!(m.frame.has_edge("a", 0, 1));
        assert!(m.satisfies_prop("p", 1));
        // machine-generated names with '#' survive
        assert!(m.satisfies_prop("q#1", 0));
        let printed = sections[0].to_string();
        let reparsed = parse_structures(&printed).unwrap();
        assert_eq!(sections, reparsed);
    }

    #[test]
    fn rejects_reserved_label() {
        let text = "frame f\nworld w\nrel U w w\n";
        assert!(matches!(
            parse_structures(text),
            Err(KripkeError::FileFormat { .. })
        ));
    }

    #[test]
    fn rejects_unknown_world() {
        let text = "frame f\nworld w\nrel a w z\n";
        assert!(parse_structures(text).is_err());
    }

    #[test]
    fn multiple_sections() {
        let text = "frame a\nworld x\nframe b\nworld y\nurel P y\n";
        let sections = parse_structures(text).unwrap();
        assert_eq!(sections.len(), 2);
        let st = sections[1].to_fostructure();
        assert!(st.has_unary("P", 0));
    }

    #[test]
    fn dot_marks_prop_worlds() {
        let sections = parse_structures(SAMPLE).unwrap();
        let dot = to_dot(&sections);
        assert!(dot.contains("digraph \"demo\""));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("\"w0\" -> \"w1\" [label=\"a\"]"));
    }
}
