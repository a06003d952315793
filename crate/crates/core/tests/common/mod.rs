#![allow(dead_code)]

use cubal::models::{cyclic_group, disjoint_union, indiscrete_groupoid, klein_group, square_model};
use cubal::{DoubleGC, FiniteCategory};

/// The six groupoids every axiom-level check runs on, with the number of
/// squares of their square models: `n³` for a group of order `n`, `n⁴` for
/// the indiscrete groupoid on `n` objects, and the sum over components.
pub fn corpus() -> Vec<(&'static str, FiniteCategory, usize)> {
    vec![
        ("Z2", cyclic_group(2), 8),
        ("Z3", cyclic_group(3), 27),
        ("Z2xZ2", klein_group(), 64),
        ("ind2", indiscrete_groupoid(2), 16),
        ("ind3", indiscrete_groupoid(3), 81),
        ("Z2+Z3", disjoint_union(&cyclic_group(2), &cyclic_group(3)), 35),
    ]
}

pub fn zz2() -> DoubleGC {
    square_model(&cyclic_group(2))
}

/// Rewrites one entry of a model document: the first line of `section`
/// whose tokens before `->` equal `lhs`. With `rhs = None` the line is dropped.
pub fn mutate(text: &str, section: &str, lhs: &str, rhs: Option<&str>) -> String {
    let mut out = String::new();
    let mut current = "";
    let mut done = false;
    for line in text.lines() {
        if !line.starts_with(' ') {
            current = line.split_whitespace().next().unwrap_or("");
        } else if !done && current == section {
            let (l, _) = line.split_once("->").expect("table line");
            if l.split_whitespace().collect::<Vec<_>>() == lhs.split_whitespace().collect::<Vec<_>>() {
                done = true;
                if let Some(r) = rhs {
                    out.push_str(&format!("  {} -> {r}\n", l.trim()));
                }
                continue;
            }
        }
        out.push_str(line);
        out.push('\n');
    }
    assert!(done, "no entry `{lhs}` in section `{section}`");
    out
}

/// Name of the square of `⊡Z₂` with the given sides.
pub fn zz2_square(d: &DoubleGC, top: &str, bottom: &str, left: &str, right: &str) -> String {
    let e = |n: &str| d.edge_by_name(n).unwrap();
    let found = d.squares_with_boundary(e(top), e(bottom), e(left), e(right));
    assert_eq!(found.len(), 1);
    d.sq_name(found[0]).to_owned()
}

/// One single-entry mutation of `⊡Z₂` per axiom family. Each square of `⊡Z₂`
/// is determined by its boundary, so a redirected square entry breaks face
/// conditions as well as the law it was aimed at.
pub fn zz2_mutations() -> Vec<(&'static str, String)> {
    let d = zz2();
    let text = cubal::format::write_model(&d);
    let sq = |t: &str, b: &str, l: &str, r: &str| zz2_square(&d, t, b, l, r);
    let e1_1 = sq("1", "1", "0", "0");
    let e2_1 = sq("0", "0", "1", "1");
    let gm_1 = sq("1", "0", "1", "0");
    let gp_1 = sq("0", "1", "0", "1");
    let id = sq("0", "0", "0", "0");
    let full = sq("1", "1", "1", "1");
    vec![
        // one object only: corners cannot disagree, so this moves a square's
        // side and relies on the degeneracy that names it
        ("cubical.corners", text.replace(&format!("  {e1_1} 1 1 0 0\n"), &format!("  {e1_1} 1 1 1 0\n"))),
        ("edge.composite-faces", mutate(&text, "compose_edge", "1 1", Some("1"))),
        ("edge.defined-iff-composable", mutate(&text, "compose_edge", "1 0", None)),
        ("edge.unit", mutate(&text, "eps", "*", Some("1"))),
        ("edge.assoc", mutate(&text, "compose_edge", "0 1", Some("0"))),
        ("eps.faces", mutate(&text, "eps", "*", Some("1"))),
        ("degeneracy.faces", mutate(&text, "eps1", "1", Some(&e2_1))),
        ("connection.faces", mutate(&text, "gamma-", "1", Some(&e1_1))),
        ("square.composite-faces", mutate(&text, "compose1", &format!("{e2_1} {e2_1}"), Some(&e2_1))),
        ("square.defined-iff-composable", mutate(&text, "compose1", &format!("{gp_1} {gm_1}"), None)),
        ("square.unit", mutate(&text, "compose1", &format!("{id} {id}"), Some(&full))),
        ("square.assoc", mutate(&text, "compose2", &format!("{e2_1} {e2_1}"), Some(&full))),
        ("degeneracy.functorial", mutate(&text, "eps1", "1", Some(&full))),
        ("interchange", mutate(&text, "compose2", &format!("{gp_1} {gm_1}"), Some(&id))),
        ("transport", mutate(&text, "gamma-", "1", Some(&gp_1))),
        ("cancellation", mutate(&text, "gamma+", "1", Some(&gm_1))),
        ("degenerate-coincidence", mutate(&text, "eps2", "0", Some(&full))),
        ("groupoid.inverses", mutate(&text, "compose_edge", "1 1", Some("1"))),
    ]
}
