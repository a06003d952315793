//! Text formats for models and morphisms.
//!
//! Models:
//!
//! ```text
//! # comment
//! kind groupoid
//! objects
//!   x y
//! edges            # name src tgt
//!   f x y
//! squares          # name top bottom left right
//!   s f f g g
//! compose_edge     # a b -> c, likewise compose1 and compose2
//!   f g -> h
//! eps              # x -> e, likewise eps1 eps2 gamma- gamma+
//!   x -> 1x
//! ```
//!
//! Morphisms use the sections `map_objects`, `map_edges` and `map_squares`
//! with `x -> y` lines.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::colimits::DoubleMorphism;
use crate::double::{Dir, DoubleGC, DoubleGCBuilder, Kind, ModelError, Obj, Sign};

const MODEL_SECTIONS: [&str; 13] = [
    "kind",
    "objects",
    "edges",
    "squares",
    "compose_edge",
    "compose1",
    "compose2",
    "eps",
    "eps1",
    "eps2",
    "gamma-",
    "gamma+",
    "name",
];

fn syntax(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, message: message.into() }
}

/// Line number, section and tokens.
type Entry<'t> = (usize, &'static str, Vec<&'t str>);

/// Splits the document into `(line, section, tokens)` entries. A line whose
/// first token is a section keyword opens that section; any further tokens
/// on it form an entry of the section.
fn entries<'t>(text: &'t str, sections: &[&'static str]) -> Result<Vec<Entry<'t>>, ModelError> {
    let mut out = Vec::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let indented = body.starts_with(char::is_whitespace);
        if let Some(&sec) = sections.iter().find(|s| **s == toks[0]) {
            if !indented {
                current = Some(sec);
                toks.remove(0);
                if !toks.is_empty() {
                    out.push((line, sec, toks));
                }
                continue;
            }
        }
        match current {
            Some(sec) if indented || !toks[0].chars().all(|c| c.is_ascii_lowercase() || c == '_') || toks.len() > 1 => {
                out.push((line, sec, toks))
            }
            _ => return Err(ModelError::UnknownKey { line, key: toks[0].to_owned() }),
        }
    }
    Ok(out)
}

fn arrow<'t>(line: usize, toks: &[&'t str], lhs: usize) -> Result<(Vec<&'t str>, &'t str), ModelError> {
    if toks.len() != lhs + 2 || toks[lhs] != "->" {
        return Err(syntax(line, format!("expected {lhs} name(s), `->` and a name")));
    }
    Ok((toks[..lhs].to_vec(), toks[lhs + 1]))
}

pub fn parse_model(text: &str) -> Result<DoubleGC, ModelError> {
    let mut b = DoubleGCBuilder::new(Kind::Groupoid);
    let mut kind_seen = false;
    for (line, sec, toks) in entries(text, &MODEL_SECTIONS)? {
        match sec {
            "kind" => {
                if kind_seen || toks.len() != 1 {
                    return Err(syntax(line, "`kind` takes exactly one value, once"));
                }
                kind_seen = true;
                match toks[0] {
                    "groupoid" => b.set_kind(Kind::Groupoid),
                    "category" => b.set_kind(Kind::Category),
                    other => return Err(syntax(line, format!("unknown kind `{other}`"))),
                };
            }
            "name" => {}
            "objects" => {
                for t in toks {
                    b.object(t);
                }
            }
            "edges" => match toks.as_slice() {
                [n, s, t] => {
                    b.edge(n, s, t);
                }
                _ => return Err(syntax(line, "edge lines are `name src tgt`")),
            },
            "squares" => match toks.as_slice() {
                [n, t, bo, l, r] => {
                    b.square(n, t, bo, l, r);
                }
                _ => return Err(syntax(line, "square lines are `name top bottom left right`")),
            },
            "compose_edge" | "compose1" | "compose2" => {
                let (args, res) = arrow(line, &toks, 2)?;
                match sec {
                    "compose_edge" => b.compose_edge(args[0], args[1], res),
                    "compose1" => b.compose(Dir::One, args[0], args[1], res),
                    _ => b.compose(Dir::Two, args[0], args[1], res),
                };
            }
            _ => {
                let (args, res) = arrow(line, &toks, 1)?;
                match sec {
                    "eps" => b.eps(args[0], res),
                    "eps1" => b.eps1(args[0], res),
                    "eps2" => b.eps2(args[0], res),
                    "gamma-" => b.gamma(Sign::Minus, args[0], res),
                    _ => b.gamma(Sign::Plus, args[0], res),
                };
            }
        }
    }
    b.build()
}

pub fn write_model(d: &DoubleGC) -> String {
    let mut s = String::new();
    let kind = if d.is_groupoid() { "groupoid" } else { "category" };
    let _ = writeln!(s, "kind {kind}");
    s.push_str("objects\n");
    for x in d.objects() {
        let _ = writeln!(s, "  {}", d.obj_name(x));
    }
    s.push_str("edges\n");
    for e in d.edges() {
        let _ = writeln!(s, "  {} {} {}", d.edge_name(e), d.obj_name(d.src(e)), d.obj_name(d.tgt(e)));
    }
    s.push_str("squares\n");
    for q in d.squares() {
        let n = |e| d.edge_name(e);
        let _ = writeln!(s, "  {} {} {} {} {}", d.sq_name(q), n(d.top(q)), n(d.bottom(q)), n(d.left(q)), n(d.right(q)));
    }
    s.push_str("eps\n");
    for x in d.objects() {
        let _ = writeln!(s, "  {} -> {}", d.obj_name(x), d.edge_name(d.eps(x)));
    }
    s.push_str("compose_edge\n");
    for (a, b, c) in d.edge_compose_entries() {
        let _ = writeln!(s, "  {} {} -> {}", d.edge_name(a), d.edge_name(b), d.edge_name(c));
    }
    for dir in Dir::BOTH {
        let _ = writeln!(s, "compose{}", dir.number());
        for (a, b, c) in d.compose_entries(dir) {
            let _ = writeln!(s, "  {} {} -> {}", d.sq_name(a), d.sq_name(b), d.sq_name(c));
        }
    }
    type Unary = fn(&DoubleGC, crate::double::Edge) -> crate::double::Sq;
    let unary: [(&str, Unary); 4] = [
        ("eps1", |d, e| d.eps1(e)),
        ("eps2", |d, e| d.eps2(e)),
        ("gamma-", |d, e| d.gamma(Sign::Minus, e)),
        ("gamma+", |d, e| d.gamma(Sign::Plus, e)),
    ];
    for (name, op) in unary {
        let _ = writeln!(s, "{name}");
        for e in d.edges() {
            let _ = writeln!(s, "  {} -> {}", d.edge_name(e), d.sq_name(op(d, e)));
        }
    }
    s
}

const MORPHISM_SECTIONS: [&str; 3] = ["map_objects", "map_edges", "map_squares"];

pub fn parse_morphism(text: &str, src: &Arc<DoubleGC>, tgt: &Arc<DoubleGC>) -> Result<DoubleMorphism, ModelError> {
    let mut f0 = vec![None; src.num_objects()];
    let mut f1 = vec![None; src.num_edges()];
    let mut f2 = vec![None; src.num_squares()];
    let unknown = |line: usize, what: &str, n: &str| syntax(line, format!("unknown {what} `{n}`"));
    for (line, sec, toks) in entries(text, &MORPHISM_SECTIONS)? {
        let (args, res) = arrow(line, &toks, 1)?;
        let x = args[0];
        match sec {
            "map_objects" => {
                let i = src.obj_by_name(x).ok_or_else(|| unknown(line, "source object", x))?;
                f0[i.index()] = Some(tgt.obj_by_name(res).ok_or_else(|| unknown(line, "target object", res))?);
            }
            "map_edges" => {
                let i = src.edge_by_name(x).ok_or_else(|| unknown(line, "source edge", x))?;
                f1[i.index()] = Some(tgt.edge_by_name(res).ok_or_else(|| unknown(line, "target edge", res))?);
            }
            _ => {
                let i = src.sq_by_name(x).ok_or_else(|| unknown(line, "source square", x))?;
                f2[i.index()] = Some(tgt.sq_by_name(res).ok_or_else(|| unknown(line, "target square", res))?);
            }
        }
    }
    fn total<T>(v: Vec<Option<T>>, what: &str, name: impl Fn(usize) -> String) -> Result<Vec<T>, ModelError> {
        v.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| ModelError::MalformedModel(format!("no image for {what} `{}`", name(i)))))
            .collect()
    }
    let f0 = total(f0, "object", |i| src.obj_name(Obj(i as u32)).to_owned())?;
    let f1 = total(f1, "edge", |i| src.edge_name(crate::double::Edge(i as u32)).to_owned())?;
    let f2 = total(f2, "square", |i| src.sq_name(crate::double::Sq(i as u32)).to_owned())?;
    DoubleMorphism::new(src.clone(), tgt.clone(), f0, f1, f2).map_err(|e| ModelError::MalformedModel(e.to_string()))
}

pub fn write_morphism(f: &DoubleMorphism) -> String {
    let (s, t) = (f.source(), f.target());
    let mut out = String::from("map_objects\n");
    for x in s.objects() {
        let _ = writeln!(out, "  {} -> {}", s.obj_name(x), t.obj_name(f.obj(x)));
    }
    out.push_str("map_edges\n");
    for e in s.edges() {
        let _ = writeln!(out, "  {} -> {}", s.edge_name(e), t.edge_name(f.edge(e)));
    }
    out.push_str("map_squares\n");
    for q in s.squares() {
        let _ = writeln!(out, "  {} -> {}", s.sq_name(q), t.sq_name(f.sq(q)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, indiscrete_groupoid, square_model};

    #[test]
    fn model_round_trip() {
        let d = square_model(&cyclic_group(2));
        let text = write_model(&d);
        let e = parse_model(&text).unwrap();
        assert_eq!(write_model(&e), text);
        assert!(crate::validate::validate(&e).is_ok());
    }

    #[test]
    fn unknown_key_is_reported_with_line() {
        let err = parse_model("kind groupoid\nwidgets\n  a\n").unwrap_err();
        assert_eq!(err, ModelError::UnknownKey { line: 2, key: "widgets".into() });
    }

    #[test]
    fn bad_line_shape() {
        let err = parse_model("objects\n  x\nedges\n  f x\n").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 4, .. }));
    }

    #[test]
    fn morphism_round_trip() {
        let d = Arc::new(square_model(&indiscrete_groupoid(2)));
        let id = DoubleMorphism::identity(&d);
        let text = write_morphism(&id);
        let f = parse_morphism(&text, &d, &d).unwrap();
        assert!(f.same_maps(&id));
        assert!(parse_morphism("map_objects\n  0 -> 0\n", &d, &d).is_err());
    }
}
