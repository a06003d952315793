//! Backtracking search for morphisms between small models.

use std::collections::HashSet;
use std::sync::Arc;

use super::DoubleMorphism;
use crate::double::{Dir, DoubleGC, Edge, Obj, Side, Sq};
use crate::colimits::coequalise::Unary;

/// Prescribed images; `None` leaves an element free.
#[derive(Clone, Debug)]
pub struct Partial {
    pub objects: Vec<Option<Obj>>,
    pub edges: Vec<Option<Edge>>,
    pub squares: Vec<Option<Sq>>,
}

impl Partial {
    pub fn free(d: &DoubleGC) -> Partial {
        Partial { objects: vec![None; d.num_objects()], edges: vec![None; d.num_edges()], squares: vec![None; d.num_squares()] }
    }

    /// Constraints forcing `F ∘ p = f` for `p: X → D` and `f: X → E`.
    /// Returns `None` when `f` is not constant on the fibres of `p`.
    pub fn through(p: &DoubleMorphism, f: &DoubleMorphism) -> Option<Partial> {
        let mut c = Partial::free(p.target());
        let x = p.source();
        fn put<T: PartialEq + Copy>(slot: &mut Option<T>, v: T) -> bool {
            match slot {
                Some(w) => *w == v,
                None => {
                    *slot = Some(v);
                    true
                }
            }
        }
        for o in x.objects() {
            if !put(&mut c.objects[p.obj(o).index()], f.obj(o)) {
                return None;
            }
        }
        for e in x.edges() {
            if !put(&mut c.edges[p.edge(e).index()], f.edge(e)) {
                return None;
            }
        }
        for s in x.squares() {
            if !put(&mut c.squares[p.sq(s).index()], f.sq(s)) {
                return None;
            }
        }
        Some(c)
    }
}

#[derive(Clone, Copy)]
enum Item {
    Obj(Obj),
    Edge(Edge),
    Sq(Sq),
}

type Triple = [usize; 3];

struct Search<'a> {
    s: &'a DoubleGC,
    t: &'a DoubleGC,
    fixed: &'a Partial,
    bijective: bool,
    /// Per edge: composite entries `(x, y, z)` whose last assigned member is this edge.
    edge_checks: Vec<Vec<(Edge, Edge, Edge)>>,
    /// Per edge: a defining pair assigned earlier, if any.
    edge_def: Vec<Option<(Edge, Edge)>>,
    sq_checks: Vec<Vec<(Dir, Sq, Sq, Sq)>>,
    sq_def: Vec<Option<(Dir, Sq, Sq)>>,
    /// Per square: an edge whose degeneracy or connection it is.
    sq_unary: Vec<Option<(Unary, Edge)>>,
    obj_inv: Option<(Vec<Triple>, Vec<Triple>)>,
    f0: Vec<Obj>,
    f1: Vec<Edge>,
    f2: Vec<Sq>,
    used: [HashSet<u32>; 3],
}

fn obj_invariants(d: &DoubleGC) -> Vec<[usize; 3]> {
    let mut inv = vec![[0usize; 3]; d.num_objects()];
    for e in d.edges() {
        inv[d.src(e).index()][0] += 1;
        inv[d.tgt(e).index()][1] += 1;
        if d.src(e) == d.tgt(e) {
            inv[d.src(e).index()][2] += 1;
        }
    }
    inv
}

impl<'a> Search<'a> {
    fn new(s: &'a DoubleGC, t: &'a DoubleGC, fixed: &'a Partial, bijective: bool) -> Self {
        let mut edge_checks = vec![Vec::new(); s.num_edges()];
        let mut edge_def = vec![None; s.num_edges()];
        for (x, y, z) in s.edge_compose_entries() {
            let last = x.max(y).max(z);
            edge_checks[last.index()].push((x, y, z));
            if x < z && y < z && edge_def[z.index()].is_none() {
                edge_def[z.index()] = Some((x, y));
            }
        }
        let mut sq_checks = vec![Vec::new(); s.num_squares()];
        let mut sq_def = vec![None; s.num_squares()];
        for dir in Dir::BOTH {
            for (x, y, z) in s.compose_entries(dir) {
                let last = x.max(y).max(z);
                sq_checks[last.index()].push((dir, x, y, z));
                if x < z && y < z && sq_def[z.index()].is_none() {
                    sq_def[z.index()] = Some((dir, x, y));
                }
            }
        }
        let mut sq_unary = vec![None; s.num_squares()];
        for e in s.edges() {
            for u in Unary::ALL {
                let q = u.apply(s, e);
                if sq_unary[q.index()].is_none() {
                    sq_unary[q.index()] = Some((u, e));
                }
            }
        }
        let obj_inv = bijective.then(|| (obj_invariants(s), obj_invariants(t)));
        Search {
            s,
            t,
            fixed,
            bijective,
            edge_checks,
            edge_def,
            sq_checks,
            sq_def,
            sq_unary,
            obj_inv,
            f0: vec![Obj(0); s.num_objects()],
            f1: vec![Edge(0); s.num_edges()],
            f2: vec![Sq(0); s.num_squares()],
            used: Default::default(),
        }
    }

    fn item(&self, k: usize) -> Option<Item> {
        let (no, ne) = (self.s.num_objects(), self.s.num_edges());
        if k < no {
            Some(Item::Obj(Obj(k as u32)))
        } else if k < no + ne {
            Some(Item::Edge(Edge((k - no) as u32)))
        } else if k < no + ne + self.s.num_squares() {
            Some(Item::Sq(Sq((k - no - ne) as u32)))
        } else {
            None
        }
    }

    fn obj_candidates(&self, x: Obj) -> Vec<Obj> {
        let all: Vec<Obj> = match self.fixed.objects[x.index()] {
            Some(y) => vec![y],
            None => self.t.objects().collect(),
        };
        all.into_iter()
            .filter(|y| match &self.obj_inv {
                Some((a, b)) => a[x.index()] == b[y.index()],
                None => true,
            })
            .collect()
    }

    fn edge_candidates(&self, e: Edge) -> Vec<Edge> {
        let (s, t) = (self.s, self.t);
        let (a, b) = (self.f0[s.src(e).index()], self.f0[s.tgt(e).index()]);
        let forced = if let Some(y) = self.fixed.edges[e.index()] {
            Some(Some(y))
        } else if let Some(x) = s.objects().find(|&x| s.eps(x) == e) {
            Some(Some(t.eps(self.f0[x.index()])))
        } else {
            self.edge_def[e.index()].map(|(x, y)| t.compose_edges_opt(self.f1[x.index()], self.f1[y.index()]))
        };
        let cands: Vec<Edge> = match forced {
            Some(Some(y)) => vec![y],
            Some(None) => Vec::new(),
            None => t.edges_from(a).to_vec(),
        };
        cands.into_iter().filter(|&y| t.src(y) == a && t.tgt(y) == b).collect()
    }

    fn sq_candidates(&self, q: Sq) -> Vec<Sq> {
        let (s, t) = (self.s, self.t);
        let side = |sd: Side| self.f1[s.side(q, sd).index()];
        let forced = if let Some(y) = self.fixed.squares[q.index()] {
            Some(Some(y))
        } else if let Some((u, e)) = self.sq_unary[q.index()] {
            Some(Some(u.apply(t, self.f1[e.index()])))
        } else {
            self.sq_def[q.index()].map(|(dir, x, y)| t.compose_opt(dir, self.f2[x.index()], self.f2[y.index()]))
        };
        match forced {
            Some(Some(y)) => {
                if Side::ALL.iter().all(|&sd| t.side(y, sd) == side(sd)) {
                    vec![y]
                } else {
                    Vec::new()
                }
            }
            Some(None) => Vec::new(),
            None => t.squares_with_boundary(side(Side::Top), side(Side::Bottom), side(Side::Left), side(Side::Right)),
        }
    }

    fn edge_ok(&self, e: Edge) -> bool {
        self.edge_checks[e.index()].iter().all(|&(x, y, z)| {
            self.t.compose_edges_opt(self.f1[x.index()], self.f1[y.index()]) == Some(self.f1[z.index()])
        })
    }

    fn sq_ok(&self, q: Sq) -> bool {
        self.sq_checks[q.index()].iter().all(|&(dir, x, y, z)| {
            self.t.compose_opt(dir, self.f2[x.index()], self.f2[y.index()]) == Some(self.f2[z.index()])
        })
    }

    fn run(&mut self, k: usize, limit: usize, out: &mut Vec<(Vec<Obj>, Vec<Edge>, Vec<Sq>)>) {
        if out.len() >= limit {
            return;
        }
        let Some(item) = self.item(k) else {
            if self.unary_ok() {
                out.push((self.f0.clone(), self.f1.clone(), self.f2.clone()));
            }
            return;
        };
        match item {
            Item::Obj(x) => {
                for y in self.obj_candidates(x) {
                    if self.bijective && !self.used[0].insert(y.0) {
                        continue;
                    }
                    self.f0[x.index()] = y;
                    self.run(k + 1, limit, out);
                    if self.bijective {
                        self.used[0].remove(&y.0);
                    }
                }
            }
            Item::Edge(e) => {
                for y in self.edge_candidates(e) {
                    if self.bijective && !self.used[1].insert(y.0) {
                        continue;
                    }
                    self.f1[e.index()] = y;
                    if self.edge_ok(e) {
                        self.run(k + 1, limit, out);
                    }
                    if self.bijective {
                        self.used[1].remove(&y.0);
                    }
                }
            }
            Item::Sq(q) => {
                for y in self.sq_candidates(q) {
                    if self.bijective && !self.used[2].insert(y.0) {
                        continue;
                    }
                    self.f2[q.index()] = y;
                    if self.sq_ok(q) {
                        self.run(k + 1, limit, out);
                    }
                    if self.bijective {
                        self.used[2].remove(&y.0);
                    }
                }
            }
        }
    }

    /// Degeneracies and connections of every edge, for squares that were
    /// forced through another edge.
    fn unary_ok(&self) -> bool {
        self.s.edges().all(|e| {
            Unary::ALL.iter().all(|u| u.apply(self.t, self.f1[e.index()]) == self.f2[u.apply(self.s, e).index()])
        })
    }
}

/// Up to `limit` morphisms `s → t` agreeing with `fixed`, in a fixed order.
pub fn find_morphisms(s: &Arc<DoubleGC>, t: &Arc<DoubleGC>, fixed: &Partial, limit: usize) -> Vec<DoubleMorphism> {
    search(s, t, fixed, false, limit)
}

fn search(s: &Arc<DoubleGC>, t: &Arc<DoubleGC>, fixed: &Partial, bijective: bool, limit: usize) -> Vec<DoubleMorphism> {
    let mut st = Search::new(s, t, fixed, bijective);
    let mut raw = Vec::new();
    st.run(0, limit, &mut raw);
    raw.into_iter()
        .map(|(f0, f1, f2)| DoubleMorphism::new(s.clone(), t.clone(), f0, f1, f2).expect("search output is total"))
        .collect()
}

/// An isomorphism `d → e`, if one exists.
pub fn iso_check(d: &Arc<DoubleGC>, e: &Arc<DoubleGC>) -> Option<DoubleMorphism> {
    if (d.num_objects(), d.num_edges(), d.num_squares()) != (e.num_objects(), e.num_edges(), e.num_squares()) {
        return None;
    }
    let mut a = obj_invariants(d);
    let mut b = obj_invariants(e);
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    search(d, e, &Partial::free(d), true, 1).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimits::validate_morphism;
    use crate::models::{cyclic_group, indiscrete_groupoid, square_model};

    #[test]
    fn identity_is_found() {
        let d = Arc::new(square_model(&cyclic_group(3)));
        let f = iso_check(&d, &d).unwrap();
        assert!(validate_morphism(&f).is_ok());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let a = Arc::new(square_model(&cyclic_group(2)));
        let b = Arc::new(square_model(&cyclic_group(3)));
        assert!(iso_check(&a, &b).is_none());
    }

    #[test]
    fn endomorphisms_of_zz2() {
        // group endomorphisms of Z₂
        let d = Arc::new(square_model(&cyclic_group(2)));
        let all = find_morphisms(&d, &d, &Partial::free(&d), 100);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|f| validate_morphism(f).is_ok()));
    }

    #[test]
    fn maps_between_indiscrete_models_follow_object_maps() {
        let a = Arc::new(square_model(&indiscrete_groupoid(2)));
        let b = Arc::new(square_model(&indiscrete_groupoid(3)));
        assert_eq!(find_morphisms(&a, &b, &Partial::free(&a), 100).len(), 9);
        assert_eq!(find_morphisms(&a, &b, &Partial::free(&a), 4).len(), 4);
    }
}
