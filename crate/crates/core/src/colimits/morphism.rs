use std::sync::Arc;

use thiserror::Error;

use crate::double::{Dir, DoubleGC, Edge, Obj, Side, Sign, Sq};
use crate::report::Report;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("{what} map has {found} entries, the source has {expected}")]
    WrongLength { what: &'static str, expected: usize, found: usize },
    #[error("{what} map sends entry {index} outside the target")]
    OutOfRange { what: &'static str, index: usize },
    #[error("morphisms do not compose: the target of the first is not the source of the second")]
    NotComposable,
}

/// Three maps, on objects, edges and squares, between two models.
#[derive(Clone, Debug)]
pub struct DoubleMorphism {
    source: Arc<DoubleGC>,
    target: Arc<DoubleGC>,
    f0: Vec<Obj>,
    f1: Vec<Edge>,
    f2: Vec<Sq>,
}

/// Same model, either by pointer or by identical names and sizes.
pub(crate) fn same_model(a: &Arc<DoubleGC>, b: &Arc<DoubleGC>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.num_objects() == b.num_objects()
            && a.num_edges() == b.num_edges()
            && a.num_squares() == b.num_squares()
            && a.objects().all(|x| a.obj_name(x) == b.obj_name(x))
            && a.edges().all(|e| a.edge_name(e) == b.edge_name(e) && a.src(e) == b.src(e) && a.tgt(e) == b.tgt(e))
            && a.squares().all(|s| a.sq_name(s) == b.sq_name(s)))
}

impl DoubleMorphism {
    /// Checks only that the maps are total and land in the target; see
    /// [`validate_morphism`] for the structural equations.
    pub fn new(
        source: Arc<DoubleGC>,
        target: Arc<DoubleGC>,
        f0: Vec<Obj>,
        f1: Vec<Edge>,
        f2: Vec<Sq>,
    ) -> Result<DoubleMorphism, MorphismError> {
        let len = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(MorphismError::WrongLength { what, expected, found })
            }
        };
        len("object", source.num_objects(), f0.len())?;
        len("edge", source.num_edges(), f1.len())?;
        len("square", source.num_squares(), f2.len())?;
        if let Some(i) = f0.iter().position(|x| x.index() >= target.num_objects()) {
            return Err(MorphismError::OutOfRange { what: "object", index: i });
        }
        if let Some(i) = f1.iter().position(|x| x.index() >= target.num_edges()) {
            return Err(MorphismError::OutOfRange { what: "edge", index: i });
        }
        if let Some(i) = f2.iter().position(|x| x.index() >= target.num_squares()) {
            return Err(MorphismError::OutOfRange { what: "square", index: i });
        }
        Ok(DoubleMorphism { source, target, f0, f1, f2 })
    }

    pub fn identity(d: &Arc<DoubleGC>) -> DoubleMorphism {
        DoubleMorphism {
            source: d.clone(),
            target: d.clone(),
            f0: d.objects().collect(),
            f1: d.edges().collect(),
            f2: d.squares().collect(),
        }
    }

    pub fn source(&self) -> &Arc<DoubleGC> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DoubleGC> {
        &self.target
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.f0[x.index()]
    }

    pub fn edge(&self, e: Edge) -> Edge {
        self.f1[e.index()]
    }

    pub fn sq(&self, s: Sq) -> Sq {
        self.f2[s.index()]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.f0
    }

    pub fn edge_map(&self) -> &[Edge] {
        &self.f1
    }

    pub fn square_map(&self) -> &[Sq] {
        &self.f2
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &DoubleMorphism) -> Result<DoubleMorphism, MorphismError> {
        if !same_model(&self.target, &g.source) {
            return Err(MorphismError::NotComposable);
        }
        Ok(DoubleMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            f0: self.f0.iter().map(|&x| g.obj(x)).collect(),
            f1: self.f1.iter().map(|&x| g.edge(x)).collect(),
            f2: self.f2.iter().map(|&x| g.sq(x)).collect(),
        })
    }

    /// Equal maps; the models are compared with [`same_model`].
    pub fn same_maps(&self, other: &DoubleMorphism) -> bool {
        self.f0 == other.f0 && self.f1 == other.f1 && self.f2 == other.f2
    }

    pub fn is_valid(&self) -> bool {
        validate_morphism(self).is_ok()
    }
}

/// Checks every preservation equation: faces, identities, degeneracies,
/// connections, all three compositions and inverses.
pub fn validate_morphism(f: &DoubleMorphism) -> Report {
    let (s, t) = (&*f.source, &*f.target);
    let mut r = Report::new("morphism");
    for e in s.edges() {
        let ok = t.src(f.edge(e)) == f.obj(s.src(e)) && t.tgt(f.edge(e)) == f.obj(s.tgt(e));
        r.record("preserves.edge-ends", ok, || vec![s.edge_name(e).to_owned(), t.edge_name(f.edge(e)).to_owned()]);
    }
    for a in s.squares() {
        let ok = Side::ALL.iter().all(|&side| t.side(f.sq(a), side) == f.edge(s.side(a, side)));
        r.record("preserves.faces", ok, || vec![s.sq_name(a).to_owned(), t.sq_name(f.sq(a)).to_owned()]);
    }
    for x in s.objects() {
        r.record("preserves.eps", t.eps(f.obj(x)) == f.edge(s.eps(x)), || vec![s.obj_name(x).to_owned()]);
    }
    type Unary = fn(&DoubleGC, Edge) -> Sq;
    let unary: [(&str, Unary); 4] = [
        ("preserves.eps1", |d, e| d.eps1(e)),
        ("preserves.eps2", |d, e| d.eps2(e)),
        ("preserves.gamma-", |d, e| d.gamma(Sign::Minus, e)),
        ("preserves.gamma+", |d, e| d.gamma(Sign::Plus, e)),
    ];
    for (name, op) in unary {
        for e in s.edges() {
            let ok = op(t, f.edge(e)) == f.sq(op(s, e));
            r.record(name, ok, || vec![s.edge_name(e).to_owned(), t.sq_name(f.sq(op(s, e))).to_owned()]);
        }
    }
    for (a, b, c) in s.edge_compose_entries() {
        let ok = t.compose_edges_opt(f.edge(a), f.edge(b)) == Some(f.edge(c));
        r.record("preserves.edge-compose", ok, || vec![s.edge_name(a).to_owned(), s.edge_name(b).to_owned()]);
    }
    for dir in Dir::BOTH {
        let name = format!("preserves.compose{}", dir.number());
        for (a, b, c) in s.compose_entries(dir) {
            let ok = t.compose_opt(dir, f.sq(a), f.sq(b)) == Some(f.sq(c));
            r.record(&name, ok, || vec![s.sq_name(a).to_owned(), s.sq_name(b).to_owned()]);
        }
    }
    if s.is_groupoid() && t.is_groupoid() {
        for e in s.edges() {
            if let (Ok(i), Ok(j)) = (s.invert_edge(e), t.invert_edge(f.edge(e))) {
                r.record("preserves.inverses", f.edge(i) == j, || vec![s.edge_name(e).to_owned()]);
            }
        }
        for dir in Dir::BOTH {
            for a in s.squares() {
                if let (Ok(i), Ok(j)) = (s.invert(dir, a), t.invert(dir, f.sq(a))) {
                    r.record("preserves.inverses", f.sq(i) == j, || vec![format!("dir={}", dir.number()), s.sq_name(a).to_owned()]);
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, full_sub_double, indiscrete_groupoid, square_model};
    use crate::thin::is_thin;

    #[test]
    fn identity_is_valid() {
        let d = Arc::new(square_model(&cyclic_group(2)));
        let id = DoubleMorphism::identity(&d);
        assert!(validate_morphism(&id).is_ok());
        assert!(id.then(&id).unwrap().same_maps(&id));
    }

    #[test]
    fn inclusion_is_valid_and_preserves_thinness() {
        let d = Arc::new(square_model(&indiscrete_groupoid(3)));
        let (sub, incl) = full_sub_double(&d, &[Obj(0), Obj(1)]);
        assert_eq!(sub.num_squares(), 16);
        let r = validate_morphism(&incl);
        assert!(r.is_ok(), "{}", r.to_text());
        for s in sub.squares() {
            assert!(!is_thin(&sub, s) || is_thin(&d, incl.sq(s)));
        }
    }

    #[test]
    fn broken_connection_is_reported() {
        let d = Arc::new(square_model(&cyclic_group(2)));
        let a = d.edge_by_name("1").unwrap();
        let mut f2: Vec<Sq> = d.squares().collect();
        f2[d.gamma(Sign::Minus, a).index()] = d.eps1(a);
        let f = DoubleMorphism::new(d.clone(), d.clone(), d.objects().collect(), d.edges().collect(), f2).unwrap();
        let r = validate_morphism(&f);
        assert!(r.check("preserves.gamma-").unwrap().failed > 0);
    }

    #[test]
    fn lengths_are_checked() {
        let d = Arc::new(square_model(&cyclic_group(2)));
        let e = DoubleMorphism::new(d.clone(), d.clone(), vec![], d.edges().collect(), d.squares().collect());
        assert!(matches!(e, Err(MorphismError::WrongLength { what: "object", .. })));
    }
}
