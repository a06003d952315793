//! Concrete finite models: finite categories and groupoids, the double
//! category `⊡C` of commuting squares, sphere models, products and full
//! substructures.

use std::collections::HashMap;
use std::sync::Arc;

use crate::colimits::DoubleMorphism;
use crate::double::{Dir, DoubleGC, DoubleGCBuilder, Edge, Kind, ModelError, Obj, Sign, Sq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category given by explicit tables.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    kind: Kind,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    compose: Vec<Option<usize>>,
    identity: Vec<usize>,
}

impl FiniteCategory {
    /// Builds a category from arrow data and a composition function
    /// `(f, g) ↦ f then g`, consulted only for composable pairs.
    pub fn new(
        kind: Kind,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identity: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, ModelError> {
        let n = arrows.len();
        let mut table = vec![None; n * n];
        for f in 0..n {
            for g in 0..n {
                if arrows[f].tgt == arrows[g].src {
                    table[f * n + g] = Some(compose(f, g));
                }
            }
        }
        let c = FiniteCategory { kind, objects, arrows, compose: table, identity };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::MalformedModel(m));
        let n = self.arrows.len();
        if self.identity.len() != self.objects.len() {
            return bad("identity table has the wrong length".into());
        }
        for a in &self.arrows {
            if a.src >= self.objects.len() || a.tgt >= self.objects.len() {
                return bad(format!("arrow `{}` has an unknown endpoint", a.name));
            }
        }
        for (x, &i) in self.identity.iter().enumerate() {
            if i >= n || self.arrows[i].src != x || self.arrows[i].tgt != x {
                return bad(format!("identity of `{}` is not a loop", self.objects[x]));
            }
        }
        for f in 0..n {
            let (s, t) = (self.arrows[f].src, self.arrows[f].tgt);
            if self.comp(self.identity[s], f) != Some(f) || self.comp(f, self.identity[t]) != Some(f) {
                return bad(format!("identity law fails at `{}`", self.arrows[f].name));
            }
            for g in 0..n {
                let Some(fg) = self.comp(f, g) else { continue };
                if fg >= n || self.arrows[fg].src != s || self.arrows[fg].tgt != self.arrows[g].tgt {
                    return bad(format!("composite of `{}` and `{}` has wrong endpoints", self.arrows[f].name, self.arrows[g].name));
                }
                for h in 0..n {
                    if let (Some(l), Some(gh)) = (self.comp(fg, h), self.comp(g, h)) {
                        if self.comp(f, gh) != Some(l) {
                            return bad(format!(
                                "associativity fails at ({}, {}, {})",
                                self.arrows[f].name, self.arrows[g].name, self.arrows[h].name
                            ));
                        }
                    }
                }
            }
            if self.kind == Kind::Groupoid && self.inverse(f).is_none() {
                return bad(format!("arrow `{}` has no inverse", self.arrows[f].name));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// `f` then `g`, when `tgt f = src g`.
    pub fn comp(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f * self.arrows.len() + g]
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let a = &self.arrows[f];
        (0..self.arrows.len()).find(|&g| {
            self.comp(f, g) == Some(self.identity[a.src]) && self.comp(g, f) == Some(self.identity[a.tgt])
        })
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// The full subcategory on `objs`, in the order given.
    pub fn full_subcategory(&self, objs: &[usize]) -> FiniteCategory {
        let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let keep: Vec<usize> = (0..self.arrows.len())
            .filter(|&f| pos.contains_key(&self.arrows[f].src) && pos.contains_key(&self.arrows[f].tgt))
            .collect();
        let new_index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let arrows = keep
            .iter()
            .map(|&f| Arrow { name: self.arrows[f].name.clone(), src: pos[&self.arrows[f].src], tgt: pos[&self.arrows[f].tgt] })
            .collect();
        let identity = objs.iter().map(|&o| new_index[&self.identity[o]]).collect();
        let objects = objs.iter().map(|&o| self.objects[o].clone()).collect();
        FiniteCategory::new(self.kind, objects, arrows, identity, |f, g| {
            new_index[&self.comp(keep[f], keep[g]).expect("composable in the ambient category")]
        })
        .expect("full subcategory of a valid category")
    }
}

/// A group given by its multiplication table, as a one-object groupoid.
/// Element `identity` must be the unit.
pub fn group_as_groupoid(names: Vec<String>, table: &[Vec<usize>], identity: usize) -> Result<FiniteCategory, ModelError> {
    let arrows = names.into_iter().map(|name| Arrow { name, src: 0, tgt: 0 }).collect();
    FiniteCategory::new(Kind::Groupoid, vec!["*".into()], arrows, vec![identity], |f, g| table[f][g])
}

/// The cyclic group `Zₙ` with arrows named `0..n-1`.
pub fn cyclic_group(n: usize) -> FiniteCategory {
    assert!(n > 0, "cyclic group needs a positive order");
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    group_as_groupoid((0..n).map(|i| i.to_string()).collect(), &table, 0).expect("cyclic group is valid")
}

/// `Z₂ × Z₂`.
pub fn klein_group() -> FiniteCategory {
    product(&cyclic_group(2), &cyclic_group(2))
}

/// One object, one arrow.
pub fn trivial_category() -> FiniteCategory {
    cyclic_group(1)
}

/// Objects `0..n-1`, exactly one arrow `i>j` for each ordered pair.
pub fn indiscrete_groupoid(n: usize) -> FiniteCategory {
    let objects = (0..n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            arrows.push(Arrow { name: format!("{i}>{j}"), src: i, tgt: j });
        }
    }
    let identity = (0..n).map(|i| i * n + i).collect();
    FiniteCategory::new(Kind::Groupoid, objects, arrows, identity, |f, g| (f / n) * n + g % n)
        .expect("indiscrete groupoid is valid")
}

/// The groupoid with two objects and one arrow between each ordered pair.
pub fn interval_groupoid() -> FiniteCategory {
    indiscrete_groupoid(2)
}

fn meet(a: Kind, b: Kind) -> Kind {
    if a == Kind::Groupoid && b == Kind::Groupoid {
        Kind::Groupoid
    } else {
        Kind::Category
    }
}

pub fn product(c: &FiniteCategory, d: &FiniteCategory) -> FiniteCategory {
    let (nc, nd) = (c.num_objects(), d.num_objects());
    let objects = c.objects.iter().flat_map(|x| d.objects.iter().map(move |y| format!("{x}.{y}"))).collect();
    let ma = d.num_arrows();
    let mut arrows = Vec::new();
    for f in &c.arrows {
        for g in &d.arrows {
            arrows.push(Arrow { name: format!("{}.{}", f.name, g.name), src: f.src * nd + g.src, tgt: f.tgt * nd + g.tgt });
        }
    }
    let identity = (0..nc * nd).map(|o| c.identity[o / nd] * ma + d.identity[o % nd]).collect();
    FiniteCategory::new(meet(c.kind, d.kind), objects, arrows, identity, |p, q| {
        let f = c.comp(p / ma, q / ma).expect("componentwise composable");
        let g = d.comp(p % ma, q % ma).expect("componentwise composable");
        f * ma + g
    })
    .expect("product of valid categories")
}

/// Disjoint union; names are prefixed with `0:` and `1:`.
pub fn disjoint_union(c: &FiniteCategory, d: &FiniteCategory) -> FiniteCategory {
    let nco = c.num_objects();
    let nca = c.num_arrows();
    let objects = c
        .objects
        .iter()
        .map(|x| format!("0:{x}"))
        .chain(d.objects.iter().map(|x| format!("1:{x}")))
        .collect();
    let arrows = c
        .arrows
        .iter()
        .map(|a| Arrow { name: format!("0:{}", a.name), src: a.src, tgt: a.tgt })
        .chain(d.arrows.iter().map(|a| Arrow { name: format!("1:{}", a.name), src: a.src + nco, tgt: a.tgt + nco }))
        .collect();
    let identity = c.identity.iter().copied().chain(d.identity.iter().map(|&i| i + nca)).collect();
    FiniteCategory::new(meet(c.kind, d.kind), objects, arrows, identity, |f, g| {
        if f < nca {
            c.comp(f, g).expect("composable in the first summand")
        } else {
            d.comp(f - nca, g - nca).expect("composable in the second summand") + nca
        }
    })
    .expect("disjoint union of valid categories")
}

fn square_name(c: &FiniteCategory, l: usize, t: usize, r: usize, b: usize) -> String {
    let n = |i: usize| c.arrows[i].name.as_str();
    format!("{}|{}|{}|{}", n(l), n(t), n(r), n(b))
}

/// The double category `⊡C` of commuting squares in `C`.
///
/// Squares are named `l|t|r|b` after their left, top, right and bottom
/// edges; edges carry the arrow names of `C`.
pub fn square_model(c: &FiniteCategory) -> DoubleGC {
    let mut b = DoubleGCBuilder::new(c.kind);
    for x in &c.objects {
        b.object(x);
    }
    for a in &c.arrows {
        b.edge(&a.name, &c.objects[a.src], &c.objects[a.tgt]);
    }
    let n = c.num_arrows();
    let mut quads = Vec::new();
    let mut index = HashMap::new();
    for t in 0..n {
        for l in (0..n).filter(|&l| c.arrows[l].src == c.arrows[t].src) {
            for r in (0..n).filter(|&r| c.arrows[r].src == c.arrows[t].tgt) {
                for bt in (0..n).filter(|&x| c.arrows[x].src == c.arrows[l].tgt && c.arrows[x].tgt == c.arrows[r].tgt) {
                    if c.comp(l, bt) == c.comp(t, r) {
                        index.insert((l, t, r, bt), quads.len());
                        quads.push((l, t, r, bt));
                    }
                }
            }
        }
    }
    for &(l, t, r, bt) in &quads {
        let an = |i: usize| c.arrows[i].name.as_str();
        b.square(&square_name(c, l, t, r, bt), an(t), an(bt), an(l), an(r));
    }
    for f in 0..n {
        for g in 0..n {
            if let Some(h) = c.comp(f, g) {
                b.compose_edge(&c.arrows[f].name, &c.arrows[g].name, &c.arrows[h].name);
            }
        }
    }
    let name_of = |q: (usize, usize, usize, usize)| square_name(c, q.0, q.1, q.2, q.3);
    for &(l, t, r, bt) in &quads {
        // vertical: stack along the shared horizontal edge `bt`
        for &(l2, t2, r2, b2) in &quads {
            if t2 == bt {
                let res = (c.comp(l, l2).unwrap(), t, c.comp(r, r2).unwrap(), b2);
                b.compose(Dir::One, &name_of((l, t, r, bt)), &name_of((l2, t2, r2, b2)), &name_of(res));
            }
            if l2 == r {
                let res = (l, c.comp(t, t2).unwrap(), r2, c.comp(bt, b2).unwrap());
                b.compose(Dir::Two, &name_of((l, t, r, bt)), &name_of((l2, t2, r2, b2)), &name_of(res));
            }
        }
    }
    for (x, name) in c.objects.iter().enumerate() {
        b.eps(name, &c.arrows[c.identity[x]].name);
    }
    for (a, arrow) in c.arrows.iter().enumerate() {
        let ix = c.identity[arrow.src];
        let iy = c.identity[arrow.tgt];
        b.eps1(&arrow.name, &name_of((ix, a, iy, a)));
        b.eps2(&arrow.name, &name_of((a, ix, a, iy)));
        b.gamma(Sign::Minus, &arrow.name, &name_of((a, a, iy, iy)));
        b.gamma(Sign::Plus, &arrow.name, &name_of((ix, ix, a, a)));
    }
    b.build().expect("square model is well formed")
}

/// One object, one edge, and squares `Zₙ` with both compositions given by
/// addition and every degeneracy and connection equal to zero.
///
/// Squares here are not determined by their boundaries, so these models
/// carry cubes whose odd and even composites differ.
pub fn sphere_model(n: usize) -> DoubleGC {
    assert!(n > 0, "sphere model needs a positive order");
    let mut b = DoubleGCBuilder::new(Kind::Groupoid);
    b.object("*").edge("0", "*", "*").compose_edge("0", "0", "0").eps("*", "0");
    let name = |i: usize| format!("s{i}");
    for i in 0..n {
        b.square(&name(i), "0", "0", "0", "0");
    }
    for i in 0..n {
        for j in 0..n {
            b.compose(Dir::One, &name(i), &name(j), &name((i + j) % n));
            b.compose(Dir::Two, &name(i), &name(j), &name((i + j) % n));
        }
    }
    let z = name(0);
    b.eps1("0", &z).eps2("0", &z).gamma(Sign::Minus, "0", &z).gamma(Sign::Plus, "0", &z);
    b.build().expect("sphere model is well formed")
}

/// Componentwise product of two double categories.
pub fn product_double(d: &DoubleGC, e: &DoubleGC) -> DoubleGC {
    let kind = meet(d.kind(), e.kind());
    let mut b = DoubleGCBuilder::new(kind);
    let on = |x: Obj, y: Obj| format!("{}.{}", d.obj_name(x), e.obj_name(y));
    let en = |x: Edge, y: Edge| format!("{}.{}", d.edge_name(x), e.edge_name(y));
    let sn = |x: Sq, y: Sq| format!("{}.{}", d.sq_name(x), e.sq_name(y));
    for x in d.objects() {
        for y in e.objects() {
            b.object(&on(x, y));
            b.eps(&on(x, y), &en(d.eps(x), e.eps(y)));
        }
    }
    for p in d.edges() {
        for q in e.edges() {
            b.edge(&en(p, q), &on(d.src(p), e.src(q)), &on(d.tgt(p), e.tgt(q)));
        }
    }
    for s in d.squares() {
        for t in e.squares() {
            b.square(
                &sn(s, t),
                &en(d.top(s), e.top(t)),
                &en(d.bottom(s), e.bottom(t)),
                &en(d.left(s), e.left(t)),
                &en(d.right(s), e.right(t)),
            );
        }
    }
    for (p1, p2, p3) in d.edge_compose_entries() {
        for (q1, q2, q3) in e.edge_compose_entries() {
            b.compose_edge(&en(p1, q1), &en(p2, q2), &en(p3, q3));
        }
    }
    for dir in Dir::BOTH {
        let es: Vec<_> = e.compose_entries(dir).collect();
        for (s1, s2, s3) in d.compose_entries(dir) {
            for &(t1, t2, t3) in &es {
                b.compose(dir, &sn(s1, t1), &sn(s2, t2), &sn(s3, t3));
            }
        }
    }
    for p in d.edges() {
        for q in e.edges() {
            let name = en(p, q);
            b.eps1(&name, &sn(d.eps1(p), e.eps1(q)));
            b.eps2(&name, &sn(d.eps2(p), e.eps2(q)));
            for sign in Sign::BOTH {
                b.gamma(sign, &name, &sn(d.gamma(sign, p), e.gamma(sign, q)));
            }
        }
    }
    b.build().expect("product of well-formed models")
}

/// The full substructure on `objs` together with its inclusion.
pub fn full_sub_double(d: &Arc<DoubleGC>, objs: &[Obj]) -> (Arc<DoubleGC>, DoubleMorphism) {
    let keep_obj: Vec<bool> = {
        let mut v = vec![false; d.num_objects()];
        for o in objs {
            v[o.index()] = true;
        }
        v
    };
    let obj_list: Vec<Obj> = d.objects().filter(|o| keep_obj[o.index()]).collect();
    let edge_list: Vec<Edge> = d
        .edges()
        .filter(|&e| keep_obj[d.src(e).index()] && keep_obj[d.tgt(e).index()])
        .collect();
    let mut keep_edge = vec![false; d.num_edges()];
    for e in &edge_list {
        keep_edge[e.index()] = true;
    }
    let sq_list: Vec<Sq> = d
        .squares()
        .filter(|&s| [d.top(s), d.bottom(s), d.left(s), d.right(s)].iter().all(|e| keep_edge[e.index()]))
        .collect();
    let mut keep_sq = vec![false; d.num_squares()];
    for s in &sq_list {
        keep_sq[s.index()] = true;
    }

    let mut b = DoubleGCBuilder::new(d.kind());
    for &x in &obj_list {
        b.object(d.obj_name(x));
        b.eps(d.obj_name(x), d.edge_name(d.eps(x)));
    }
    for &e in &edge_list {
        b.edge(d.edge_name(e), d.obj_name(d.src(e)), d.obj_name(d.tgt(e)));
    }
    for &s in &sq_list {
        b.square(d.sq_name(s), d.edge_name(d.top(s)), d.edge_name(d.bottom(s)), d.edge_name(d.left(s)), d.edge_name(d.right(s)));
    }
    for (p, q, r) in d.edge_compose_entries() {
        if keep_edge[p.index()] && keep_edge[q.index()] {
            b.compose_edge(d.edge_name(p), d.edge_name(q), d.edge_name(r));
        }
    }
    for dir in Dir::BOTH {
        for (p, q, r) in d.compose_entries(dir) {
            if keep_sq[p.index()] && keep_sq[q.index()] {
                b.compose(dir, d.sq_name(p), d.sq_name(q), d.sq_name(r));
            }
        }
    }
    for &e in &edge_list {
        let n = d.edge_name(e);
        b.eps1(n, d.sq_name(d.eps1(e)));
        b.eps2(n, d.sq_name(d.eps2(e)));
        for sign in Sign::BOTH {
            b.gamma(sign, n, d.sq_name(d.gamma(sign, e)));
        }
    }
    let sub = Arc::new(b.build().expect("full substructure is closed"));
    let incl = DoubleMorphism::new(sub.clone(), d.clone(), obj_list, edge_list, sq_list)
        .expect("inclusion maps are total");
    (sub, incl)
}

/// A functor between finite categories, by index.
#[derive(Clone, Debug)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    pub fn is_valid(&self, c: &FiniteCategory, d: &FiniteCategory) -> bool {
        if self.objects.len() != c.num_objects() || self.arrows.len() != c.num_arrows() {
            return false;
        }
        let ends = c.arrows.iter().enumerate().all(|(i, a)| {
            let b = &d.arrows[self.arrows[i]];
            b.src == self.objects[a.src] && b.tgt == self.objects[a.tgt]
        });
        let ids = (0..c.num_objects()).all(|x| self.arrows[c.identity[x]] == d.identity[self.objects[x]]);
        let comp = (0..c.num_arrows()).all(|f| {
            (0..c.num_arrows()).all(|g| match c.comp(f, g) {
                Some(h) => d.comp(self.arrows[f], self.arrows[g]) == Some(self.arrows[h]),
                None => true,
            })
        });
        ends && ids && comp
    }
}

/// The morphism `⊡C → ⊡D` induced by a functor, where `sc` and `sd` are
/// the square models of `c` and `d`.
pub fn induced_morphism(
    c: &FiniteCategory,
    d: &FiniteCategory,
    f: &Functor,
    sc: &Arc<DoubleGC>,
    sd: &Arc<DoubleGC>,
) -> Result<DoubleMorphism, ModelError> {
    if !f.is_valid(c, d) {
        return Err(ModelError::MalformedModel("functor does not preserve the category structure".into()));
    }
    let edge = |e: Edge| -> Edge {
        let i = c.arrow_index(sc.edge_name(e)).expect("square model edge names are arrow names");
        sd.edge_by_name(&d.arrows[f.arrows[i]].name).expect("target arrow present")
    };
    let f0 = sc
        .objects()
        .map(|x| {
            let i = c.object_index(sc.obj_name(x)).expect("object names agree");
            sd.obj_by_name(&d.objects[f.objects[i]]).expect("target object present")
        })
        .collect();
    let f1: Vec<Edge> = sc.edges().map(edge).collect();
    let f2 = sc
        .squares()
        .map(|s| {
            let found = sd.squares_with_boundary(edge(sc.top(s)), edge(sc.bottom(s)), edge(sc.left(s)), edge(sc.right(s)));
            found[0]
        })
        .collect();
    DoubleMorphism::new(sc.clone(), sd.clone(), f0, f1, f2).map_err(|e| ModelError::MalformedModel(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_counts() {
        assert_eq!(square_model(&cyclic_group(2)).num_squares(), 8);
        assert_eq!(square_model(&cyclic_group(3)).num_squares(), 27);
        assert_eq!(square_model(&klein_group()).num_squares(), 64);
        assert_eq!(square_model(&indiscrete_groupoid(3)).num_squares(), 81);
        let t = square_model(&trivial_category());
        assert_eq!((t.num_objects(), t.num_edges(), t.num_squares()), (1, 1, 1));
    }

    #[test]
    fn z2_square_count_matches_linear_relation() {
        let count = (0..16u32)
            .filter(|q| {
                let (l, t, r, b) = (q & 1, (q >> 1) & 1, (q >> 2) & 1, (q >> 3) & 1);
                (l + b) % 2 == (t + r) % 2
            })
            .count();
        assert_eq!(count, square_model(&cyclic_group(2)).num_squares());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(indiscrete_groupoid(2).num_arrows(), 4);
        let u = disjoint_union(&cyclic_group(2), &cyclic_group(3));
        assert_eq!((u.num_objects(), u.num_arrows()), (2, 5));
        let p = klein_group();
        let a = p.arrow_index("1.0").unwrap();
        let b = p.arrow_index("1.1").unwrap();
        assert_eq!(p.arrows()[p.comp(a, b).unwrap()].name, "0.1");
    }

    #[test]
    fn rejects_non_associative_table() {
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        let r = group_as_groupoid(vec!["e".into(), "a".into(), "b".into()], &table, 0);
        assert!(r.is_err());
    }

    #[test]
    fn full_subcategory_of_indiscrete() {
        let c = indiscrete_groupoid(3).full_subcategory(&[0, 2]);
        assert_eq!(c.num_arrows(), 4);
        assert!(c.arrow_index("0>2").is_some());
    }

    #[test]
    fn sphere_has_free_squares() {
        let s = sphere_model(3);
        assert_eq!(s.num_squares(), 3);
        let a = s.sq_by_name("s1").unwrap();
        assert_eq!(s.compose(Dir::One, a, a).unwrap(), s.sq_by_name("s2").unwrap());
    }
}
