//! Coequalisers by congruence closure with saturation.
//!
//! Elements live in union-find forests, one per dimension, with the least
//! identifier as representative. Objects are never created. Edges and
//! squares are created only when a composable pair has no composite yet;
//! each fresh edge also receives fresh degeneracy and connection squares.
//! After every batch of definitions the structural laws are re-applied until
//! nothing changes: a law whose two sides are both defined merges them, and
//! a law with one side defined defines the other.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::morphism::same_model;
use super::{coproduct, ColimitError, DoubleMorphism};
use crate::double::{Dir, DoubleGC, DoubleGCBuilder, Edge, Obj, Sign, Sq};

/// Default cap on live edges plus live squares during saturation.
pub const DEFAULT_BUDGET: usize = 5_000;
/// Composites defined between two closure passes.
const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientStatus {
    Finite,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Unary {
    Eps1,
    Eps2,
    GammaMinus,
    GammaPlus,
}

impl Unary {
    pub const ALL: [Unary; 4] = [Unary::Eps1, Unary::Eps2, Unary::GammaMinus, Unary::GammaPlus];

    pub fn apply(self, d: &DoubleGC, e: Edge) -> Sq {
        match self {
            Unary::Eps1 => d.eps1(e),
            Unary::Eps2 => d.eps2(e),
            Unary::GammaMinus => d.gamma(Sign::Minus, e),
            Unary::GammaPlus => d.gamma(Sign::Plus, e),
        }
    }
}

/// How an element of the closure was introduced. Arguments are raw
/// element identifiers, always smaller than the element's own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeDef {
    Original(Edge),
    Compose(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareDef {
    Original(Sq),
    Compose(Dir, u32, u32),
    Unary(Unary, u32),
}

/// Definitions of every element ever created and the quotient element each
/// one ended up in.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub object_class: Vec<Obj>,
    pub edge_defs: Vec<EdgeDef>,
    pub edge_class: Vec<Edge>,
    pub square_defs: Vec<SquareDef>,
    pub square_class: Vec<Sq>,
}

#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub status: QuotientStatus,
    /// The quotient, when the closure reached a fixed point.
    pub object: Option<Arc<DoubleGC>>,
    pub projection: Option<DoubleMorphism>,
    /// Fresh edges and squares created during saturation, including ones
    /// later identified with others.
    pub generators_added: usize,
    pub live_edges: usize,
    pub live_squares: usize,
    pub rounds: usize,
    pub provenance: Option<Provenance>,
    pub(crate) pair: (DoubleMorphism, DoubleMorphism),
}

impl QuotientResult {
    pub fn is_finite(&self) -> bool {
        self.status == QuotientStatus::Finite
    }

    /// The parallel pair this quotient coequalises.
    pub fn pair(&self) -> (&DoubleMorphism, &DoubleMorphism) {
        (&self.pair.0, &self.pair.1)
    }
}

const T: usize = 0;
const B: usize = 1;
const L: usize = 2;
const R: usize = 3;

#[derive(Clone, Copy, Debug)]
enum Merge {
    Obj(u32, u32),
    Edge(u32, u32),
    Sq(u32, u32),
}

#[derive(Clone, Copy, Debug)]
enum Action {
    Merge(Merge),
    DefEdge(u32, u32, u32),
    DefSq(usize, u32, u32, u32),
}

fn find(uf: &mut [u32], mut x: u32) -> u32 {
    while uf[x as usize] != x {
        let p = uf[x as usize];
        uf[x as usize] = uf[p as usize];
        x = p;
    }
    x
}

type Pairs = BTreeMap<(u32, u32), u32>;

type Keys = BTreeSet<(u32, u32)>;

/// A composition table indexed by each of its three positions:
/// `first[x]` holds `(y, z)`, `second[y]` holds `(x, z)` and `value[z]`
/// holds `(x, y)` for every entry `(x, y) -> z`.
#[derive(Default)]
struct Index {
    first: HashMap<u32, Vec<(u32, u32)>>,
    second: HashMap<u32, Vec<(u32, u32)>>,
    value: HashMap<u32, Vec<(u32, u32)>>,
}

impl Index {
    fn new(t: &Pairs) -> Self {
        let mut i = Index::default();
        for (&(x, y), &z) in t {
            i.first.entry(x).or_default().push((y, z));
            i.second.entry(y).or_default().push((x, z));
            i.value.entry(z).or_default().push((x, y));
        }
        i
    }

    fn get(m: &HashMap<u32, Vec<(u32, u32)>>, k: u32) -> &[(u32, u32)] {
        m.get(&k).map_or(&[], Vec::as_slice)
    }
}

/// Rewrites the keys and values of `t` to representatives. Entries that move
/// are marked dirty, and colliding keys queue a merge of their values.
fn rekey(t: &mut Pairs, dirty: &mut Keys, uf: &mut [u32], pending: &mut Vec<Merge>, merge: fn(u32, u32) -> Merge) {
    let old_dirty = std::mem::take(dirty);
    for (x, y) in old_dirty {
        dirty.insert((find(uf, x), find(uf, y)));
    }
    for ((x, y), z) in std::mem::take(t) {
        let key = (find(uf, x), find(uf, y));
        let w = find(uf, z);
        if key != (x, y) || w != z {
            dirty.insert(key);
        }
        match t.entry(key) {
            Entry::Vacant(v) => {
                v.insert(w);
            }
            Entry::Occupied(o) => {
                if *o.get() != w {
                    pending.push(merge(*o.get(), w));
                }
            }
        }
    }
}

/// Associativity instances `(a, b) -> c`, `(b, h) -> k` against `(c, h)` and
/// `(a, k)`, restricted to those touching a dirty entry.
fn assoc(t: &Pairs, idx: &Index, dirty: &Keys, out: &mut Vec<Action>, def: impl Fn(u32, u32, u32) -> Action, merge: fn(u32, u32) -> Merge) {
    let get = |x: u32, y: u32| t.get(&(x, y)).copied();
    let mut emit = |a: u32, c: u32, h: u32, k: u32| {
        let (x, y) = (get(c, h), get(a, k));
        let (dx, dy) = (x.or(y).unwrap_or(0), y.or(x).unwrap_or(0));
        agree(out, x, y, def(c, h, dy), def(a, k, dx), merge);
    };
    for &(u, v) in dirty {
        let Some(w) = get(u, v) else { continue };
        for &(h, k) in Index::get(&idx.first, v) {
            emit(u, w, h, k);
        }
        for &(a, c) in Index::get(&idx.second, u) {
            emit(a, c, v, w);
        }
        for &(a, b) in Index::get(&idx.value, u) {
            if let Some(k) = get(b, v) {
                emit(a, u, v, k);
            }
        }
        for &(b, h) in Index::get(&idx.value, v) {
            if let Some(c) = get(u, b) {
                emit(u, c, h, v);
            }
        }
    }
}

/// Pushes the merge or definition making `(x, y) -> z` and `(u, v) -> w`
/// agree, when at least one side is known.
fn agree(out: &mut Vec<Action>, lhs: Option<u32>, rhs: Option<u32>, def_lhs: Action, def_rhs: Action, merge: fn(u32, u32) -> Merge) {
    match (lhs, rhs) {
        (Some(x), Some(y)) if x != y => out.push(Action::Merge(merge(x, y))),
        (Some(_), None) => out.push(def_rhs),
        (None, Some(_)) => out.push(def_lhs),
        _ => {}
    }
}

struct Closure<'a> {
    base: &'a DoubleGC,
    obj_uf: Vec<u32>,
    edge_uf: Vec<u32>,
    edge_ends: Vec<[u32; 2]>,
    edge_def: Vec<EdgeDef>,
    edge_depth: Vec<u32>,
    sq_uf: Vec<u32>,
    sq_sides: Vec<[u32; 4]>,
    sq_def: Vec<SquareDef>,
    sq_depth: Vec<u32>,
    ecomp: Pairs,
    comp: [Pairs; 2],
    eps: Vec<u32>,
    unary: [BTreeMap<u32, u32>; 4],
    pending: Vec<Merge>,
    /// Table entries added or moved since the last scan.
    dirty_e: Keys,
    dirty_c: [Keys; 2],
}

impl<'a> Closure<'a> {
    fn new(base: &'a DoubleGC) -> Self {
        let mut c = Closure {
            base,
            obj_uf: (0..base.num_objects() as u32).collect(),
            edge_uf: (0..base.num_edges() as u32).collect(),
            edge_ends: base.edges().map(|e| [base.src(e).0, base.tgt(e).0]).collect(),
            edge_def: base.edges().map(EdgeDef::Original).collect(),
            edge_depth: vec![0; base.num_edges()],
            sq_uf: (0..base.num_squares() as u32).collect(),
            sq_sides: base
                .squares()
                .map(|s| [base.top(s).0, base.bottom(s).0, base.left(s).0, base.right(s).0])
                .collect(),
            sq_def: base.squares().map(SquareDef::Original).collect(),
            sq_depth: vec![0; base.num_squares()],
            ecomp: base.edge_compose_entries().map(|(a, b, c)| ((a.0, b.0), c.0)).collect(),
            comp: [
                base.compose_entries(Dir::One).map(|(a, b, c)| ((a.0, b.0), c.0)).collect(),
                base.compose_entries(Dir::Two).map(|(a, b, c)| ((a.0, b.0), c.0)).collect(),
            ],
            eps: base.objects().map(|x| base.eps(x).0).collect(),
            unary: Default::default(),
            pending: Vec::new(),
            dirty_e: Keys::new(),
            dirty_c: Default::default(),
        };
        c.dirty_e = c.ecomp.keys().copied().collect();
        c.dirty_c = [c.comp[0].keys().copied().collect(), c.comp[1].keys().copied().collect()];
        for (k, u) in Unary::ALL.iter().enumerate() {
            c.unary[k] = base.edges().map(|e| (e.0, u.apply(base, e).0)).collect();
        }
        c
    }

    fn live_edges(&self) -> Vec<u32> {
        (0..self.edge_uf.len() as u32).filter(|&i| self.edge_uf[i as usize] == i).collect()
    }

    fn live_squares(&self) -> Vec<u32> {
        (0..self.sq_uf.len() as u32).filter(|&i| self.sq_uf[i as usize] == i).collect()
    }

    fn live_objects(&self) -> Vec<u32> {
        (0..self.obj_uf.len() as u32).filter(|&i| self.obj_uf[i as usize] == i).collect()
    }

    fn live_count(&self) -> usize {
        self.live_edges().len() + self.live_squares().len()
    }

    fn union(&mut self) -> bool {
        let mut changed = false;
        while let Some(m) = self.pending.pop() {
            match m {
                Merge::Obj(x, y) => {
                    let (x, y) = (find(&mut self.obj_uf, x), find(&mut self.obj_uf, y));
                    if x != y {
                        let (lo, hi) = (x.min(y), x.max(y));
                        self.obj_uf[hi as usize] = lo;
                        self.pending.push(Merge::Edge(self.eps[lo as usize], self.eps[hi as usize]));
                        changed = true;
                    }
                }
                Merge::Edge(x, y) => {
                    let (x, y) = (find(&mut self.edge_uf, x), find(&mut self.edge_uf, y));
                    if x != y {
                        let (lo, hi) = (x.min(y), x.max(y));
                        self.edge_uf[hi as usize] = lo;
                        let (a, b) = (self.edge_ends[lo as usize], self.edge_ends[hi as usize]);
                        self.pending.push(Merge::Obj(a[0], b[0]));
                        self.pending.push(Merge::Obj(a[1], b[1]));
                        for k in 0..4 {
                            let (u, v) = (self.unary[k].get(&lo).copied(), self.unary[k].get(&hi).copied());
                            if let (Some(u), Some(v)) = (u, v) {
                                self.pending.push(Merge::Sq(u, v));
                            }
                        }
                        changed = true;
                    }
                }
                Merge::Sq(x, y) => {
                    let (x, y) = (find(&mut self.sq_uf, x), find(&mut self.sq_uf, y));
                    if x != y {
                        let (lo, hi) = (x.min(y), x.max(y));
                        self.sq_uf[hi as usize] = lo;
                        let (a, b) = (self.sq_sides[lo as usize], self.sq_sides[hi as usize]);
                        for k in 0..4 {
                            self.pending.push(Merge::Edge(a[k], b[k]));
                        }
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    /// Rewrites every stored identifier to its representative, merging the
    /// values of keys that collide, until no merge is left.
    fn canonicalise(&mut self) {
        loop {
            self.union();
            for e in 0..self.edge_ends.len() {
                for k in 0..2 {
                    self.edge_ends[e][k] = find(&mut self.obj_uf, self.edge_ends[e][k]);
                }
            }
            for s in 0..self.sq_sides.len() {
                for k in 0..4 {
                    self.sq_sides[s][k] = find(&mut self.edge_uf, self.sq_sides[s][k]);
                }
            }
            for x in 0..self.eps.len() {
                self.eps[x] = find(&mut self.edge_uf, self.eps[x]);
            }
            rekey(&mut self.ecomp, &mut self.dirty_e, &mut self.edge_uf, &mut self.pending, Merge::Edge);
            for d in 0..2 {
                rekey(&mut self.comp[d], &mut self.dirty_c[d], &mut self.sq_uf, &mut self.pending, Merge::Sq);
            }
            for k in 0..4 {
                let old = std::mem::take(&mut self.unary[k]);
                for (e, s) in old {
                    let e = find(&mut self.edge_uf, e);
                    let s = find(&mut self.sq_uf, s);
                    match self.unary[k].entry(e) {
                        Entry::Vacant(v) => {
                            v.insert(s);
                        }
                        Entry::Occupied(o) => {
                            if *o.get() != s {
                                self.pending.push(Merge::Sq(*o.get(), s));
                            }
                        }
                    }
                }
            }
            if self.pending.is_empty() {
                break;
            }
        }
    }

    /// One pass of the laws over the canonical tables. The joins
    /// (associativity, interchange) only visit instances with a dirty entry.
    fn scan(&self, dirty_e: &Keys, dirty_c: &[Keys; 2]) -> Vec<Action> {
        let mut out = Vec::new();
        let ends = |e: u32| self.edge_ends[e as usize];
        let sides = |s: u32| self.sq_sides[s as usize];
        let sc = |d: usize, x: u32, y: u32| self.comp[d].get(&(x, y)).copied();
        let un = |k: usize, e: u32| self.unary[k].get(&e).copied();
        let live_edges = self.live_edges();

        // edges: units, endpoints, associativity
        for &e in &live_edges {
            let [s, t] = ends(e);
            out.push(Action::DefEdge(self.eps[s as usize], e, e));
            out.push(Action::DefEdge(e, self.eps[t as usize], e));
        }
        for (&(e, f), &g) in &self.ecomp {
            out.push(Action::Merge(Merge::Obj(ends(e)[1], ends(f)[0])));
            out.push(Action::Merge(Merge::Obj(ends(g)[0], ends(e)[0])));
            out.push(Action::Merge(Merge::Obj(ends(g)[1], ends(f)[1])));
        }
        assoc(&self.ecomp, &Index::new(&self.ecomp), dirty_e, &mut out, Action::DefEdge, Merge::Edge);

        // squares: units, composite faces, associativity
        let live_sq = self.live_squares();
        for &a in &live_sq {
            let sd = sides(a);
            if let (Some(u), Some(v)) = (un(0, sd[T]), un(0, sd[B])) {
                out.push(Action::DefSq(0, u, a, a));
                out.push(Action::DefSq(0, a, v, a));
            }
            if let (Some(u), Some(v)) = (un(1, sd[L]), un(1, sd[R])) {
                out.push(Action::DefSq(1, u, a, a));
                out.push(Action::DefSq(1, a, v, a));
            }
        }
        let idx = [Index::new(&self.comp[0]), Index::new(&self.comp[1])];
        for d in 0..2 {
            for (&(a, b), &c) in &self.comp[d] {
                let (sa, sb, sg) = (sides(a), sides(b), sides(c));
                if d == 0 {
                    out.push(Action::Merge(Merge::Edge(sa[B], sb[T])));
                    out.push(Action::Merge(Merge::Edge(sg[T], sa[T])));
                    out.push(Action::Merge(Merge::Edge(sg[B], sb[B])));
                    out.push(Action::DefEdge(sa[L], sb[L], sg[L]));
                    out.push(Action::DefEdge(sa[R], sb[R], sg[R]));
                } else {
                    out.push(Action::Merge(Merge::Edge(sa[R], sb[L])));
                    out.push(Action::Merge(Merge::Edge(sg[L], sa[L])));
                    out.push(Action::Merge(Merge::Edge(sg[R], sb[R])));
                    out.push(Action::DefEdge(sa[T], sb[T], sg[T]));
                    out.push(Action::DefEdge(sa[B], sb[B], sg[B]));
                }
            }
            assoc(&self.comp[d], &idx[d], &dirty_c[d], &mut out, |x, y, z| Action::DefSq(d, x, y, z), Merge::Sq);
        }

        // interchange: [a, b; g, dl] with rows p = a+b, s = g+dl and
        // columns q = a/g, r = b/dl, so that p/s and q+r should agree
        let mut grid = |p: u32, q: u32, r: u32, s: u32| {
            let (x, y) = (sc(0, p, s), sc(1, q, r));
            let (dx, dy) = (x.or(y).unwrap_or(0), y.or(x).unwrap_or(0));
            agree(&mut out, x, y, Action::DefSq(0, p, s, dy), Action::DefSq(1, q, r, dx), Merge::Sq);
        };
        let (v, h) = (&idx[0], &idx[1]);
        for &(u, w) in &dirty_c[1] {
            let Some(z) = sc(1, u, w) else { continue };
            // as p = a+b
            for &(g, q) in Index::get(&v.first, u) {
                for &(dl, r) in Index::get(&v.first, w) {
                    if let Some(s) = sc(1, g, dl) {
                        grid(z, q, r, s);
                    }
                }
            }
            // as s = g+dl
            for &(a, q) in Index::get(&v.second, u) {
                for &(b, p) in Index::get(&h.first, a) {
                    if let Some(r) = sc(0, b, w) {
                        grid(p, q, r, z);
                    }
                }
            }
            // as q+r
            for &(a, g) in Index::get(&v.value, u) {
                for &(b, dl) in Index::get(&v.value, w) {
                    if let (Some(p), Some(s)) = (sc(1, a, b), sc(1, g, dl)) {
                        grid(p, u, w, s);
                    }
                }
            }
        }
        for &(u, w) in &dirty_c[0] {
            let Some(z) = sc(0, u, w) else { continue };
            // as q = a/g
            for &(b, p) in Index::get(&h.first, u) {
                for &(dl, r) in Index::get(&v.first, b) {
                    if let Some(s) = sc(1, w, dl) {
                        grid(p, z, r, s);
                    }
                }
            }
            // as r = b/dl
            for &(a, p) in Index::get(&h.second, u) {
                for &(g, q) in Index::get(&v.first, a) {
                    if let Some(s) = sc(1, g, w) {
                        grid(p, q, z, s);
                    }
                }
            }
            // as p/s
            for &(a, b) in Index::get(&h.value, u) {
                for &(g, dl) in Index::get(&h.value, w) {
                    if let (Some(q), Some(r)) = (sc(0, a, g), sc(0, b, dl)) {
                        grid(u, q, r, w);
                    }
                }
            }
        }

        // degeneracies are functorial, connections obey transport
        for (&(e, f), &g) in &self.ecomp {
            let u = |k: usize, x: u32| un(k, x);
            if let (Some(x), Some(y), Some(z)) = (u(0, e), u(0, f), u(0, g)) {
                out.push(Action::DefSq(1, x, y, z));
            }
            if let (Some(x), Some(y), Some(z)) = (u(1, e), u(1, f), u(1, g)) {
                out.push(Action::DefSq(0, x, y, z));
            }
            if let (Some(gm_e), Some(e1f), Some(e2f), Some(gm_f), Some(gm_g)) = (u(2, e), u(0, f), u(1, f), u(2, f), u(2, g)) {
                if let (Some(p), Some(q)) = (sc(1, gm_e, e1f), sc(1, e2f, gm_f)) {
                    out.push(Action::DefSq(0, p, q, gm_g));
                }
            }
            if let (Some(gp_e), Some(e2e), Some(e1e), Some(gp_f), Some(gp_g)) = (u(3, e), u(1, e), u(0, e), u(3, f), u(3, g)) {
                if let (Some(p), Some(q)) = (sc(1, gp_e, e2e), sc(1, e1e, gp_f)) {
                    out.push(Action::DefSq(0, p, q, gp_g));
                }
            }
        }

        // cancellation
        for &e in &live_edges {
            if let (Some(gp), Some(gm), Some(e1), Some(e2)) = (un(3, e), un(2, e), un(0, e), un(1, e)) {
                out.push(Action::DefSq(0, gp, gm, e2));
                out.push(Action::DefSq(1, gp, gm, e1));
            }
        }

        // the degeneracies and connections of an identity coincide
        for x in self.live_objects() {
            let i = self.eps[x as usize];
            if let Some(base) = un(0, i) {
                for k in 1..4 {
                    if let Some(s) = un(k, i) {
                        out.push(Action::Merge(Merge::Sq(base, s)));
                    }
                }
            }
        }
        out
    }

    fn apply(&mut self, actions: Vec<Action>) -> bool {
        let mut changed = false;
        for a in actions {
            match a {
                Action::Merge(m) => self.pending.push(m),
                Action::DefEdge(x, y, z) => match self.ecomp.entry((x, y)) {
                    Entry::Vacant(v) => {
                        v.insert(z);
                        self.dirty_e.insert((x, y));
                        changed = true;
                    }
                    Entry::Occupied(o) => {
                        if *o.get() != z {
                            self.pending.push(Merge::Edge(*o.get(), z));
                        }
                    }
                },
                Action::DefSq(d, x, y, z) => match self.comp[d].entry((x, y)) {
                    Entry::Vacant(v) => {
                        v.insert(z);
                        self.dirty_c[d].insert((x, y));
                        changed = true;
                    }
                    Entry::Occupied(o) => {
                        if *o.get() != z {
                            self.pending.push(Merge::Sq(*o.get(), z));
                        }
                    }
                },
            }
        }
        self.union() || changed
    }

    /// Applies the laws until a fixed point.
    fn close(&mut self) {
        self.canonicalise();
        loop {
            let (de, dc) = (std::mem::take(&mut self.dirty_e), std::mem::take(&mut self.dirty_c));
        let actions = self.scan(&de, &dc);
            if !self.apply(actions) {
                break;
            }
            self.canonicalise();
        }
        self.canonicalise();
    }

    fn new_square(&mut self, sides: [u32; 4], def: SquareDef, depth: u32) -> u32 {
        let id = self.sq_uf.len() as u32;
        self.sq_uf.push(id);
        self.sq_sides.push(sides);
        self.sq_def.push(def);
        self.sq_depth.push(depth);
        id
    }

    fn fresh_edge(&mut self, e: u32, f: u32) -> u32 {
        let g = self.edge_uf.len() as u32;
        let (s, t) = (self.edge_ends[e as usize][0], self.edge_ends[f as usize][1]);
        let depth = self.edge_depth[e as usize].max(self.edge_depth[f as usize]) + 1;
        self.edge_uf.push(g);
        self.edge_ends.push([s, t]);
        self.edge_def.push(EdgeDef::Compose(e, f));
        self.edge_depth.push(depth);
        self.ecomp.insert((e, f), g);
        self.dirty_e.insert((e, f));
        let (es, et) = (self.eps[s as usize], self.eps[t as usize]);
        let shapes = [[g, g, es, et], [es, et, g, g], [g, et, g, et], [es, g, es, g]];
        for (k, u) in Unary::ALL.iter().enumerate() {
            let s = self.new_square(shapes[k], SquareDef::Unary(*u, g), depth);
            self.unary[k].insert(g, s);
        }
        g
    }

    fn edge_composite(&mut self, e: u32, f: u32) -> u32 {
        match self.ecomp.get(&(e, f)) {
            Some(&g) => g,
            None => self.fresh_edge(e, f),
        }
    }

    fn fresh_square(&mut self, d: usize, a: u32, b: u32) -> u32 {
        let (sa, sb) = (self.sq_sides[a as usize], self.sq_sides[b as usize]);
        let sides = if d == 0 {
            [sa[T], sb[B], self.edge_composite(sa[L], sb[L]), self.edge_composite(sa[R], sb[R])]
        } else {
            [self.edge_composite(sa[T], sb[T]), self.edge_composite(sa[B], sb[B]), sa[L], sb[R]]
        };
        let depth = self.sq_depth[a as usize].max(self.sq_depth[b as usize]) + 1;
        let dir = if d == 0 { Dir::One } else { Dir::Two };
        let c = self.new_square(sides, SquareDef::Compose(dir, a, b), depth);
        self.comp[d].insert((a, b), c);
        self.dirty_c[d].insert((a, b));
        c
    }

    /// Composable pairs of live edges without a composite, shallowest first.
    fn missing_edges(&self) -> Vec<(u32, u32, u32)> {
        let live = self.live_edges();
        let mut from: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &e in &live {
            from.entry(self.edge_ends[e as usize][0]).or_default().push(e);
        }
        let mut out = Vec::new();
        for &e in &live {
            for &f in from.get(&self.edge_ends[e as usize][1]).into_iter().flatten() {
                if !self.ecomp.contains_key(&(e, f)) {
                    out.push((self.edge_depth[e as usize] + self.edge_depth[f as usize], e, f));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn missing_squares(&self) -> Vec<(u32, usize, u32, u32)> {
        let live = self.live_squares();
        let mut by_side: [BTreeMap<u32, Vec<u32>>; 2] = Default::default();
        for &s in &live {
            let sd = self.sq_sides[s as usize];
            by_side[0].entry(sd[T]).or_default().push(s);
            by_side[1].entry(sd[L]).or_default().push(s);
        }
        let mut out = Vec::new();
        for &a in &live {
            let sd = self.sq_sides[a as usize];
            for (d, key) in [(0usize, sd[B]), (1, sd[R])] {
                for &b in by_side[d].get(&key).into_iter().flatten() {
                    if !self.comp[d].contains_key(&(a, b)) {
                        out.push((self.sq_depth[a as usize] + self.sq_depth[b as usize], d, a, b));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn created(&self) -> usize {
        (self.edge_uf.len() - self.base.num_edges()) + (self.sq_uf.len() - self.base.num_squares())
    }
}

fn check_pair(a: &DoubleMorphism, b: &DoubleMorphism) -> Result<(), ColimitError> {
    if !same_model(a.source(), b.source()) || !same_model(a.target(), b.target()) {
        return Err(ColimitError::InputMismatch("the two morphisms have different sources or targets".into()));
    }
    Ok(())
}

/// The coequaliser of `a, b: A ⇉ B`, or a budget-exceeded outcome when
/// saturation does not settle within `budget` live edges and squares, or
/// creates more than twice that many elements in total.
pub fn coequalise(a: &DoubleMorphism, b: &DoubleMorphism, budget: usize) -> Result<QuotientResult, ColimitError> {
    check_pair(a, b)?;
    let base = b.target().clone();
    let mut cl = Closure::new(&base);
    let src = a.source();
    for x in src.objects() {
        cl.pending.push(Merge::Obj(a.obj(x).0, b.obj(x).0));
    }
    for e in src.edges() {
        cl.pending.push(Merge::Edge(a.edge(e).0, b.edge(e).0));
    }
    for s in src.squares() {
        cl.pending.push(Merge::Sq(a.sq(s).0, b.sq(s).0));
    }
    let raw_cap = budget.saturating_mul(2).max(1024);
    let mut rounds = 0usize;
    let status = loop {
        cl.close();
        rounds += 1;
        if cl.live_count() > budget || cl.edge_uf.len() + cl.sq_uf.len() > raw_cap {
            break QuotientStatus::BudgetExceeded;
        }
        let me = cl.missing_edges();
        if !me.is_empty() {
            for &(_, e, f) in me.iter().take(BATCH) {
                cl.fresh_edge(e, f);
            }
            continue;
        }
        let ms = cl.missing_squares();
        if ms.is_empty() {
            break QuotientStatus::Finite;
        }
        for &(_, d, x, y) in ms.iter().take(BATCH) {
            if !cl.comp[d].contains_key(&(x, y)) {
                cl.fresh_square(d, x, y);
            }
        }
    };
    let live_edges = cl.live_edges().len();
    let live_squares = cl.live_squares().len();
    let mut result = QuotientResult {
        status,
        object: None,
        projection: None,
        generators_added: cl.created(),
        live_edges,
        live_squares,
        rounds,
        provenance: None,
        pair: (a.clone(), b.clone()),
    };
    if status == QuotientStatus::Finite {
        let (q, proj, prov) = build_quotient(&mut cl)?;
        result.object = Some(q);
        result.projection = Some(proj);
        result.provenance = Some(prov);
    }
    Ok(result)
}

fn build_quotient(cl: &mut Closure<'_>) -> Result<(Arc<DoubleGC>, DoubleMorphism, Provenance), ColimitError> {
    let base = cl.base;
    let objs = cl.live_objects();
    let edges = cl.live_edges();
    let sqs = cl.live_squares();
    let index = |v: &[u32]| -> BTreeMap<u32, u32> { v.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect() };
    let (oi, ei, si) = (index(&objs), index(&edges), index(&sqs));
    let oname = |x: u32| base.obj_name(Obj(x)).to_owned();
    let ename = |e: u32| {
        if (e as usize) < base.num_edges() {
            base.edge_name(Edge(e)).to_owned()
        } else {
            format!("new.e{e}")
        }
    };
    let sname = |s: u32| {
        if (s as usize) < base.num_squares() {
            base.sq_name(Sq(s)).to_owned()
        } else {
            format!("new.s{s}")
        }
    };
    let mut bld = DoubleGCBuilder::new(base.kind());
    for &x in &objs {
        bld.object(&oname(x));
        bld.eps(&oname(x), &ename(cl.eps[x as usize]));
    }
    for &e in &edges {
        let [s, t] = cl.edge_ends[e as usize];
        bld.edge(&ename(e), &oname(s), &oname(t));
    }
    for &s in &sqs {
        let sd = cl.sq_sides[s as usize];
        bld.square(&sname(s), &ename(sd[T]), &ename(sd[B]), &ename(sd[L]), &ename(sd[R]));
    }
    for (&(x, y), &z) in &cl.ecomp {
        bld.compose_edge(&ename(x), &ename(y), &ename(z));
    }
    for (d, dir) in [(0usize, Dir::One), (1, Dir::Two)] {
        for (&(x, y), &z) in &cl.comp[d] {
            bld.compose(dir, &sname(x), &sname(y), &sname(z));
        }
    }
    for &e in &edges {
        let n = ename(e);
        let u = |k: usize| sname(cl.unary[k][&e]);
        bld.eps1(&n, &u(0));
        bld.eps2(&n, &u(1));
        bld.gamma(Sign::Minus, &n, &u(2));
        bld.gamma(Sign::Plus, &n, &u(3));
    }
    let q = Arc::new(bld.build()?);

    let object_class: Vec<Obj> = (0..base.num_objects() as u32).map(|x| Obj(oi[&find(&mut cl.obj_uf, x)])).collect();
    let edge_class: Vec<Edge> = (0..cl.edge_uf.len() as u32).map(|e| Edge(ei[&find(&mut cl.edge_uf, e)])).collect();
    let square_class: Vec<Sq> = (0..cl.sq_uf.len() as u32).map(|s| Sq(si[&find(&mut cl.sq_uf, s)])).collect();
    let bb = Arc::new(base.clone());
    let proj = DoubleMorphism::new(
        bb,
        q.clone(),
        object_class.clone(),
        edge_class[..base.num_edges()].to_vec(),
        square_class[..base.num_squares()].to_vec(),
    )?;
    let prov = Provenance {
        object_class,
        edge_defs: cl.edge_def.clone(),
        edge_class,
        square_defs: cl.sq_def.clone(),
        square_class,
    };
    Ok((q, proj, prov))
}

/// The unique `F` out of the quotient with `F ∘ projection = f`.
pub fn factor_through(q: &QuotientResult, f: &DoubleMorphism) -> Result<DoubleMorphism, ColimitError> {
    let (Some(obj), Some(prov)) = (&q.object, &q.provenance) else {
        return Err(ColimitError::NotFinite);
    };
    let (a, b) = q.pair();
    if !same_model(a.target(), f.source()) {
        return Err(ColimitError::InputMismatch("f does not start at the codomain of the pair".into()));
    }
    let (fa, fb) = (a.then(f)?, b.then(f)?);
    if !fa.same_maps(&fb) {
        return Err(ColimitError::NotCoequalised(first_difference(&fa, &fb)));
    }
    let e = f.target();
    let fail = |what: String| ColimitError::WellDefinednessFailure(what);

    let mut f0: Vec<Option<Obj>> = vec![None; obj.num_objects()];
    for (x, &c) in prov.object_class.iter().enumerate() {
        let v = f.obj(Obj(x as u32));
        match f0[c.index()] {
            None => f0[c.index()] = Some(v),
            Some(w) if w != v => return Err(fail(format!("object class {} has two images", obj.obj_name(c)))),
            _ => {}
        }
    }
    let mut edge_val: Vec<Edge> = Vec::with_capacity(prov.edge_defs.len());
    for (i, def) in prov.edge_defs.iter().enumerate() {
        let v = match *def {
            EdgeDef::Original(x) => f.edge(x),
            EdgeDef::Compose(x, y) => e
                .compose_edges_opt(edge_val[x as usize], edge_val[y as usize])
                .ok_or_else(|| fail(format!("images of the factors of fresh edge {i} do not compose")))?,
        };
        edge_val.push(v);
    }
    let mut f1: Vec<Option<Edge>> = vec![None; obj.num_edges()];
    for (i, &c) in prov.edge_class.iter().enumerate() {
        match f1[c.index()] {
            None => f1[c.index()] = Some(edge_val[i]),
            Some(w) if w != edge_val[i] => return Err(fail(format!("edge class {} has two images", obj.edge_name(c)))),
            _ => {}
        }
    }
    let mut sq_val: Vec<Sq> = Vec::with_capacity(prov.square_defs.len());
    for (i, def) in prov.square_defs.iter().enumerate() {
        let v = match *def {
            SquareDef::Original(x) => f.sq(x),
            SquareDef::Compose(dir, x, y) => e
                .compose_opt(dir, sq_val[x as usize], sq_val[y as usize])
                .ok_or_else(|| fail(format!("images of the factors of fresh square {i} do not compose")))?,
            SquareDef::Unary(u, x) => u.apply(e, edge_val[x as usize]),
        };
        sq_val.push(v);
    }
    let mut f2: Vec<Option<Sq>> = vec![None; obj.num_squares()];
    for (i, &c) in prov.square_class.iter().enumerate() {
        match f2[c.index()] {
            None => f2[c.index()] = Some(sq_val[i]),
            Some(w) if w != sq_val[i] => return Err(fail(format!("square class {} has two images", obj.sq_name(c)))),
            _ => {}
        }
    }
    let total = |what: &str| fail(format!("a {what} of the quotient has no preimage"));
    let f0 = f0.into_iter().map(|x| x.ok_or_else(|| total("object"))).collect::<Result<Vec<_>, _>>()?;
    let f1 = f1.into_iter().map(|x| x.ok_or_else(|| total("edge"))).collect::<Result<Vec<_>, _>>()?;
    let f2 = f2.into_iter().map(|x| x.ok_or_else(|| total("square"))).collect::<Result<Vec<_>, _>>()?;
    Ok(DoubleMorphism::new(obj.clone(), e.clone(), f0, f1, f2)?)
}

fn first_difference(x: &DoubleMorphism, y: &DoubleMorphism) -> String {
    let s = x.source();
    let t = x.target();
    if let Some(o) = s.objects().find(|&o| x.obj(o) != y.obj(o)) {
        return format!("object {}: {} versus {}", s.obj_name(o), t.obj_name(x.obj(o)), t.obj_name(y.obj(o)));
    }
    if let Some(e) = s.edges().find(|&e| x.edge(e) != y.edge(e)) {
        return format!("edge {}: {} versus {}", s.edge_name(e), t.edge_name(x.edge(e)), t.edge_name(y.edge(e)));
    }
    match s.squares().find(|&q| x.sq(q) != y.sq(q)) {
        Some(q) => format!("square {}: {} versus {}", s.sq_name(q), t.sq_name(x.sq(q)), t.sq_name(y.sq(q))),
        None => "maps agree".into(),
    }
}

/// A pushout computed as the coequaliser of `A ⇉ B ⊔ C`.
#[derive(Clone, Debug)]
pub struct PushoutResult {
    pub quotient: QuotientResult,
    pub coproduct: Arc<DoubleGC>,
    /// `B → B ⊔ C` and `C → B ⊔ C`.
    pub injections: [DoubleMorphism; 2],
    /// `B → P` and `C → P`, when the quotient is finite.
    pub cocone: Option<[DoubleMorphism; 2]>,
}

pub fn pushout(f: &DoubleMorphism, g: &DoubleMorphism, budget: usize) -> Result<PushoutResult, ColimitError> {
    if !same_model(f.source(), g.source()) {
        return Err(ColimitError::InputMismatch("the two morphisms have different sources".into()));
    }
    let (sum, inj) = coproduct(&[f.target().clone(), g.target().clone()]);
    let a = f.then(&inj[0])?;
    let b = g.then(&inj[1])?;
    let quotient = coequalise(&a, &b, budget)?;
    let cocone = match &quotient.projection {
        Some(p) => Some([inj[0].then(p)?, inj[1].then(p)?]),
        None => None,
    };
    let [i0, i1]: [DoubleMorphism; 2] = inj.try_into().expect("two summands");
    Ok(PushoutResult { quotient, coproduct: sum, injections: [i0, i1], cocone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimits::{iso_check, validate_morphism};
    use crate::models::{cyclic_group, full_sub_double, indiscrete_groupoid, interval_groupoid, square_model, trivial_category};
    use crate::validate::validate;

    #[test]
    fn identity_pair_gives_the_model_back() {
        let d = Arc::new(square_model(&cyclic_group(2)));
        let id = DoubleMorphism::identity(&d);
        let q = coequalise(&id, &id, DEFAULT_BUDGET).unwrap();
        assert!(q.is_finite());
        assert_eq!(q.generators_added, 0);
        let obj = q.object.as_ref().unwrap();
        assert_eq!(obj.num_squares(), 8);
        assert!(iso_check(obj, &d).is_some());
        let p = q.projection.as_ref().unwrap();
        let f = factor_through(&q, p).unwrap();
        assert!(f.same_maps(&DoubleMorphism::identity(obj)));
    }

    #[test]
    fn interval_loop_exceeds_budget() {
        let iv = Arc::new(square_model(&interval_groupoid()));
        let pt = Arc::new(square_model(&trivial_category()));
        let to = |x: u32| {
            let o = Obj(x);
            let e = iv.eps(o);
            DoubleMorphism::new(pt.clone(), iv.clone(), vec![o], vec![e], vec![iv.eps1(e)]).unwrap()
        };
        let q = coequalise(&to(0), &to(1), 500).unwrap();
        assert_eq!(q.status, QuotientStatus::BudgetExceeded);
        assert!(q.object.is_none());
    }

    #[test]
    fn indiscrete_gluing_is_indiscrete() {
        let big = Arc::new(square_model(&indiscrete_groupoid(4)));
        let (u, _) = full_sub_double(&big, &[Obj(0), Obj(1), Obj(2)]);
        let (v, _) = full_sub_double(&big, &[Obj(1), Obj(2), Obj(3)]);
        let (w, _) = full_sub_double(&big, &[Obj(1), Obj(2)]);
        let into = |target: &Arc<DoubleGC>| {
            DoubleMorphism::new(
                w.clone(),
                target.clone(),
                w.objects().map(|x| target.obj_by_name(w.obj_name(x)).unwrap()).collect(),
                w.edges().map(|x| target.edge_by_name(w.edge_name(x)).unwrap()).collect(),
                w.squares().map(|x| target.sq_by_name(w.sq_name(x)).unwrap()).collect(),
            )
            .unwrap()
        };
        let p = pushout(&into(&u), &into(&v), DEFAULT_BUDGET).unwrap();
        assert!(p.quotient.is_finite(), "live {} {}", p.quotient.live_edges, p.quotient.live_squares);
        let obj = p.quotient.object.as_ref().unwrap();
        assert!(validate(obj).is_ok());
        assert!(validate_morphism(p.quotient.projection.as_ref().unwrap()).is_ok());
        assert_eq!((obj.num_objects(), obj.num_edges(), obj.num_squares()), (4, 16, 256));
        assert!(iso_check(obj, &big).is_some());
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let a = Arc::new(square_model(&cyclic_group(2)));
        let b = Arc::new(square_model(&cyclic_group(3)));
        let r = coequalise(&DoubleMorphism::identity(&a), &DoubleMorphism::identity(&b), 10);
        assert!(matches!(r, Err(ColimitError::InputMismatch(_))));
    }
}
