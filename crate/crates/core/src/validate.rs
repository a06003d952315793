//! Exhaustive axiom checking for tabulated models.
//!
//! Only the axioms listed in [`AXIOMS`] are checked. Further connection
//! axioms that appear in the wider literature are out of scope.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::double::{Dir, DoubleGC, Edge, Side, Sign, Sq};
use crate::report::Report;

/// Axiom family names, in reporting order.
pub const AXIOMS: &[&str] = &[
    "cubical.corners",
    "edge.composite-faces",
    "edge.defined-iff-composable",
    "edge.unit",
    "edge.assoc",
    "eps.faces",
    "degeneracy.faces",
    "connection.faces",
    "square.composite-faces",
    "square.defined-iff-composable",
    "square.unit",
    "square.assoc",
    "degeneracy.functorial",
    "interchange",
    "transport",
    "cancellation",
    "degenerate-coincidence",
    "groupoid.inverses",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub checked: BTreeMap<String, usize>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of<'a>(&'a self, axiom: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    pub fn to_report(&self, title: &str) -> Report {
        let mut r = Report::new(title);
        for axiom in AXIOMS {
            let n = self.checked.get(*axiom).copied().unwrap_or(0);
            let failed: Vec<&Violation> = self.violations_of(axiom).collect();
            r.tally(axiom, n - failed.len().min(n), failed.iter().map(|v| v.witness.clone()).collect());
        }
        r
    }
}

struct Checker<'a> {
    d: &'a DoubleGC,
    out: ValidationReport,
}

impl Checker<'_> {
    fn check(&mut self, axiom: &'static str, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        *self.out.checked.entry(axiom.to_owned()).or_default() += 1;
        if !ok {
            self.out.violations.push(Violation { axiom: axiom.to_owned(), witness: witness() });
        }
    }

}

fn en(d: &DoubleGC, e: Edge) -> String {
    d.edge_name(e).to_owned()
}

fn sn(d: &DoubleGC, s: Sq) -> String {
    d.sq_name(s).to_owned()
}

/// Checks every tabulated axiom and returns all violations with witnesses.
/// Enumeration runs in identifier order, so output is deterministic.
pub fn validate(d: &DoubleGC) -> ValidationReport {
    let mut c = Checker { d, out: ValidationReport::default() };
    for axiom in AXIOMS {
        c.out.checked.insert((*axiom).to_owned(), 0);
    }
    check_edges(&mut c);
    check_squares(&mut c);
    check_compositions(&mut c);
    check_interchange(&mut c);
    check_connections(&mut c);
    if d.is_groupoid() {
        check_inverses(&mut c);
    }
    c.out
}

fn check_edges(c: &mut Checker) {
    let d = c.d;
    for x in d.objects() {
        let e = d.eps(x);
        c.check("eps.faces", d.src(e) == x && d.tgt(e) == x, || vec![d.obj_name(x).to_owned(), en(d, e)]);
    }
    for a in d.edges() {
        for b in d.edges() {
            let composable = d.tgt(a) == d.src(b);
            let entry = d.compose_edges_opt(a, b);
            c.check("edge.defined-iff-composable", composable == entry.is_some(), || vec![en(d, a), en(d, b)]);
            let Some(ab) = entry else { continue };
            c.check("edge.composite-faces", d.src(ab) == d.src(a) && d.tgt(ab) == d.tgt(b), || vec![en(d, a), en(d, b), en(d, ab)]);
        }
    }
    for a in d.edges() {
        let (x, y) = (d.src(a), d.tgt(a));
        let ok = d.compose_edges_opt(d.eps(x), a) == Some(a) && d.compose_edges_opt(a, d.eps(y)) == Some(a);
        c.check("edge.unit", ok, || vec![en(d, a)]);
    }
    for a in d.edges() {
        for &b in d.edges_from(d.tgt(a)) {
            let Some(ab) = d.compose_edges_opt(a, b) else { continue };
            for &e in d.edges_from(d.tgt(b)) {
                let lhs = d.compose_edges_opt(ab, e);
                let rhs = d.compose_edges_opt(b, e).and_then(|be| d.compose_edges_opt(a, be));
                if lhs.is_some() && rhs.is_some() {
                    c.check("edge.assoc", lhs == rhs, || vec![en(d, a), en(d, b), en(d, e)]);
                }
            }
        }
    }
}

fn check_squares(c: &mut Checker) {
    let d = c.d;
    for s in d.squares() {
        let (t, b, l, r) = (d.top(s), d.bottom(s), d.left(s), d.right(s));
        let ok = d.src(t) == d.src(l) && d.tgt(t) == d.src(r) && d.src(b) == d.tgt(l) && d.tgt(b) == d.tgt(r);
        c.check("cubical.corners", ok, || vec![sn(d, s)]);
    }
    for a in d.edges() {
        let (ex, ey) = (d.eps(d.src(a)), d.eps(d.tgt(a)));
        let e1 = d.eps1(a);
        let ok1 = d.top(e1) == a && d.bottom(e1) == a && d.left(e1) == ex && d.right(e1) == ey;
        c.check("degeneracy.faces", ok1, || vec!["eps1".into(), en(d, a), sn(d, e1)]);
        let e2 = d.eps2(a);
        let ok2 = d.left(e2) == a && d.right(e2) == a && d.top(e2) == ex && d.bottom(e2) == ey;
        c.check("degeneracy.faces", ok2, || vec!["eps2".into(), en(d, a), sn(d, e2)]);
        let gm = d.gamma(Sign::Minus, a);
        let okm = d.top(gm) == a && d.left(gm) == a && d.right(gm) == ey && d.bottom(gm) == ey;
        c.check("connection.faces", okm, || vec!["gamma-".into(), en(d, a), sn(d, gm)]);
        let gp = d.gamma(Sign::Plus, a);
        let okp = d.top(gp) == ex && d.left(gp) == ex && d.right(gp) == a && d.bottom(gp) == a;
        c.check("connection.faces", okp, || vec!["gamma+".into(), en(d, a), sn(d, gp)]);
    }
}

fn check_compositions(c: &mut Checker) {
    let d = c.d;
    for dir in Dir::BOTH {
        let label = format!("+{dir}");
        let (hi, lo) = (Side::of(dir, Sign::Plus), Side::of(dir, Sign::Minus));
        let (tlo, thi) = (Side::of(dir.other(), Sign::Minus), Side::of(dir.other(), Sign::Plus));
        for a in d.squares() {
            for b in d.squares() {
                let composable = d.side(a, hi) == d.side(b, lo);
                let entry = d.compose_opt(dir, a, b);
                c.check("square.defined-iff-composable", composable == entry.is_some(), || {
                    vec![label.clone(), sn(d, a), sn(d, b)]
                });
                let Some(ab) = entry else { continue };
                let ok = d.side(ab, lo) == d.side(a, lo)
                    && d.side(ab, hi) == d.side(b, hi)
                    && Some(d.side(ab, tlo)) == d.compose_edges_opt(d.side(a, tlo), d.side(b, tlo))
                    && Some(d.side(ab, thi)) == d.compose_edges_opt(d.side(a, thi), d.side(b, thi));
                c.check("square.composite-faces", ok, || vec![label.clone(), sn(d, a), sn(d, b), sn(d, ab)]);
            }
        }
        for a in d.squares() {
            let before = d.eps_dir(dir, d.side(a, lo));
            let after = d.eps_dir(dir, d.side(a, hi));
            let ok = d.compose_opt(dir, before, a) == Some(a) && d.compose_opt(dir, a, after) == Some(a);
            c.check("square.unit", ok, || vec![label.clone(), sn(d, a)]);
        }
        for a in d.squares() {
            for &b in d.partners_after(dir, a) {
                let Some(ab) = d.compose_opt(dir, a, b) else { continue };
                for &g in d.partners_after(dir, b) {
                    let lhs = d.compose_opt(dir, ab, g);
                    let rhs = d.compose_opt(dir, b, g).and_then(|bg| d.compose_opt(dir, a, bg));
                    if lhs.is_some() && rhs.is_some() {
                        c.check("square.assoc", lhs == rhs, || vec![label.clone(), sn(d, a), sn(d, b), sn(d, g)]);
                    }
                }
            }
        }
    }
    // ε₁ is a functor for +₂ and ε₂ for +₁.
    for (a, b, ab) in d.edge_compose_entries().collect::<Vec<_>>() {
        let lhs1 = d.eps1(ab);
        let rhs1 = d.compose_opt(Dir::Two, d.eps1(a), d.eps1(b));
        c.check("degeneracy.functorial", rhs1 == Some(lhs1), || vec!["eps1".into(), en(d, a), en(d, b)]);
        let lhs2 = d.eps2(ab);
        let rhs2 = d.compose_opt(Dir::One, d.eps2(a), d.eps2(b));
        c.check("degeneracy.functorial", rhs2 == Some(lhs2), || vec!["eps2".into(), en(d, a), en(d, b)]);
    }
}

/// `(u +₂ w) +₁ (u′ +₂ w′) = (u +₁ u′) +₂ (w +₁ w′)`.
fn check_interchange(c: &mut Checker) {
    let d = c.d;
    for u in d.squares() {
        for &w in d.partners_after(Dir::Two, u) {
            let Some(uw) = d.compose_opt(Dir::Two, u, w) else { continue };
            for &u2 in d.partners_after(Dir::One, u) {
                let Some(uu) = d.compose_opt(Dir::One, u, u2) else { continue };
                for &w2 in d.partners_after(Dir::One, w) {
                    if d.left(w2) != d.right(u2) {
                        continue;
                    }
                    let lhs = d
                        .compose_opt(Dir::Two, u2, w2)
                        .and_then(|x| d.compose_opt(Dir::One, uw, x));
                    let rhs = d
                        .compose_opt(Dir::One, w, w2)
                        .and_then(|x| d.compose_opt(Dir::Two, uu, x));
                    if lhs.is_some() && rhs.is_some() {
                        c.check("interchange", lhs == rhs, || vec![sn(d, u), sn(d, w), sn(d, u2), sn(d, w2)]);
                    }
                }
            }
        }
    }
}

/// Evaluates a 2×2 array row-major if every composite exists.
fn grid(d: &DoubleGC, a: Sq, b: Sq, c: Sq, e: Sq) -> Option<Sq> {
    let top = d.compose_opt(Dir::Two, a, b)?;
    let bottom = d.compose_opt(Dir::Two, c, e)?;
    d.compose_opt(Dir::One, top, bottom)
}

fn check_connections(c: &mut Checker) {
    let d = c.d;
    for (a, b, ab) in d.edge_compose_entries().collect::<Vec<_>>() {
        // Γ⁻(a+b) = [Γ⁻a, ε₁b; ε₂b, Γ⁻b]
        let gm = grid(d, d.gamma(Sign::Minus, a), d.eps1(b), d.eps2(b), d.gamma(Sign::Minus, b));
        c.check("transport", gm == Some(d.gamma(Sign::Minus, ab)), || vec!["gamma-".into(), en(d, a), en(d, b)]);
        // Γ⁺(a+b) = [Γ⁺a, ε₂a; ε₁a, Γ⁺b]
        let gp = grid(d, d.gamma(Sign::Plus, a), d.eps2(a), d.eps1(a), d.gamma(Sign::Plus, b));
        c.check("transport", gp == Some(d.gamma(Sign::Plus, ab)), || vec!["gamma+".into(), en(d, a), en(d, b)]);
    }
    for a in d.edges() {
        let (gp, gm) = (d.gamma(Sign::Plus, a), d.gamma(Sign::Minus, a));
        c.check("cancellation", d.compose_opt(Dir::One, gp, gm) == Some(d.eps2(a)), || vec!["+1".into(), en(d, a)]);
        c.check("cancellation", d.compose_opt(Dir::Two, gp, gm) == Some(d.eps1(a)), || vec!["+2".into(), en(d, a)]);
    }
    for x in d.objects() {
        let e = d.eps(x);
        let o = d.eps1(e);
        let ok = d.eps2(e) == o && d.gamma(Sign::Minus, e) == o && d.gamma(Sign::Plus, e) == o;
        c.check("degenerate-coincidence", ok, || vec![d.obj_name(x).to_owned()]);
    }
}

fn check_inverses(c: &mut Checker) {
    let d = c.d;
    for e in d.edges() {
        c.check("groupoid.inverses", d.raw_edge_inverse(e).is_some(), || vec!["edge".into(), en(d, e)]);
    }
    for dir in Dir::BOTH {
        for s in d.squares() {
            c.check("groupoid.inverses", d.raw_inverse(dir, s).is_some(), || vec![format!("+{dir}"), sn(d, s)]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, square_model, trivial_category};

    #[test]
    fn zz2_is_valid() {
        let r = validate(&square_model(&cyclic_group(2)));
        assert!(r.is_ok(), "{:?}", r.violations);
        assert!(r.checked["interchange"] > 0);
        assert!(r.checked["transport"] > 0);
    }

    #[test]
    fn trivial_is_valid() {
        assert!(validate(&square_model(&trivial_category())).is_ok());
    }

    #[test]
    fn redirected_compose2_entry_is_named() {
        let d = square_model(&cyclic_group(2));
        let (a, b, ab) = d.compose_entries(Dir::Two).find(|&(a, b, _)| a != b).unwrap();
        let other = d.squares().find(|&s| s != ab).unwrap();
        let mut builder = d.to_builder();
        builder.compose(Dir::Two, d.sq_name(a), d.sq_name(b), d.sq_name(other));
        let m = builder.build().unwrap();
        let r = validate(&m);
        assert!(!r.is_ok());
        let names = [d.sq_name(a), d.sq_name(b)];
        assert!(r
            .violations
            .iter()
            .any(|v| names.iter().all(|n| v.witness.iter().any(|w| w == n))));
    }
}
