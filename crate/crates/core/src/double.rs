//! Tabulated finite double categories and double groupoids with connections.
//!
//! A [`DoubleGC`] stores objects, edges and squares as dense identifier
//! ranges together with explicit partial composition tables. Face naming is
//! fixed throughout the crate: `∂₁⁻ = top`, `∂₁⁺ = bottom`, `∂₂⁻ = left`,
//! `∂₂⁺ = right`. Direction 1 composes vertically (stacking along a shared
//! horizontal edge), direction 2 horizontally.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::thin::ThinSet;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Object identifier (an element of K₀).
    Obj
);
id_type!(
    /// Edge identifier (an element of K₁).
    Edge
);
id_type!(
    /// Square identifier (an element of K₂).
    Sq
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Category,
    Groupoid,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Category => f.write_str("category"),
            Kind::Groupoid => f.write_str("groupoid"),
        }
    }
}

/// Composition direction for squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    /// `+₁`, vertical composition.
    One,
    /// `+₂`, horizontal composition.
    Two,
}

impl Dir {
    pub const BOTH: [Dir; 2] = [Dir::One, Dir::Two];

    pub fn number(self) -> u8 {
        match self {
            Dir::One => 1,
            Dir::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Dir> {
        match n {
            1 => Some(Dir::One),
            2 => Some(Dir::Two),
            _ => None,
        }
    }

    pub fn other(self) -> Dir {
        match self {
            Dir::One => Dir::Two,
            Dir::Two => Dir::One,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Minus => f.write_str("-"),
            Sign::Plus => f.write_str("+"),
        }
    }
}

/// One of the four faces of a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Top, Side::Bottom, Side::Left, Side::Right];

    pub fn of(dir: Dir, sign: Sign) -> Side {
        match (dir, sign) {
            (Dir::One, Sign::Minus) => Side::Top,
            (Dir::One, Sign::Plus) => Side::Bottom,
            (Dir::Two, Sign::Minus) => Side::Left,
            (Dir::Two, Sign::Plus) => Side::Right,
        }
    }

    fn slot(self) -> usize {
        match self {
            Side::Top => 0,
            Side::Bottom => 1,
            Side::Left => 2,
            Side::Right => 3,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("squares {left} and {right} are not composable in direction {dir}")]
    NotComposable { dir: Dir, left: String, right: String },
    #[error("edges {left} and {right} are not composable")]
    EdgesNotComposable { left: String, right: String },
    #[error("composite of {left} and {right} in direction {dir} is missing from the table")]
    MissingComposite { dir: Dir, left: String, right: String },
    #[error("model is not a groupoid")]
    NotAGroupoid,
    #[error("no inverse recorded for {0}")]
    NoInverse(String),
    #[error("unknown identifier `{0}`")]
    MissingIdentifier(String),
}

#[derive(Clone, Debug)]
pub(crate) struct Table<T> {
    /// Per left argument, `(right argument, value)` sorted by right argument.
    rows: Vec<Vec<(u32, T)>>,
}

impl<T: Copy> Table<T> {
    fn new(n: usize) -> Self {
        Table { rows: vec![Vec::new(); n] }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> Option<T> {
        let row = &self.rows[a];
        row.binary_search_by_key(&(b as u32), |&(k, _)| k).ok().map(|i| row[i].1)
    }

    fn set(&mut self, a: usize, b: usize, v: T) {
        let row = &mut self.rows[a];
        match row.binary_search_by_key(&(b as u32), |&(k, _)| k) {
            Ok(i) => row[i].1 = v,
            Err(i) => row.insert(i, (b as u32, v)),
        }
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.rows.iter().enumerate().flat_map(|(a, row)| row.iter().map(move |&(b, v)| (a, b as usize, v)))
    }
}

#[derive(Clone, Debug)]
struct EdgeCell {
    name: String,
    src: Obj,
    tgt: Obj,
}

#[derive(Clone, Debug)]
struct SquareCell {
    name: String,
    faces: [Edge; 4],
}

/// A finite, tabulated double category (or double groupoid) with connections.
///
/// Immutable once built; all queries are pure reads.
#[derive(Clone, Debug)]
pub struct DoubleGC {
    kind: Kind,
    objects: Vec<String>,
    edges: Vec<EdgeCell>,
    squares: Vec<SquareCell>,
    edge_compose: Table<Edge>,
    compose1: Table<Sq>,
    compose2: Table<Sq>,
    eps: Vec<Edge>,
    eps1: Vec<Sq>,
    eps2: Vec<Sq>,
    gamma_minus: Vec<Sq>,
    gamma_plus: Vec<Sq>,
    edge_inv: Vec<Option<Edge>>,
    inv1: Vec<Option<Sq>>,
    inv2: Vec<Option<Sq>>,
    obj_index: HashMap<String, Obj>,
    edge_index: HashMap<String, Edge>,
    sq_index: HashMap<String, Sq>,
    edges_from: Vec<Vec<Edge>>,
    by_side: [Vec<Vec<Sq>>; 4],
    thin: OnceLock<ThinSet>,
}

impl DoubleGC {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_groupoid(&self) -> bool {
        self.kind == Kind::Groupoid
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_squares(&self) -> usize {
        self.squares.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.objects.len() as u32).map(Obj)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + Clone {
        (0..self.edges.len() as u32).map(Edge)
    }

    pub fn squares(&self) -> impl ExactSizeIterator<Item = Sq> + Clone {
        (0..self.squares.len() as u32).map(Sq)
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.objects[x.index()]
    }

    pub fn edge_name(&self, e: Edge) -> &str {
        &self.edges[e.index()].name
    }

    pub fn sq_name(&self, s: Sq) -> &str {
        &self.squares[s.index()].name
    }

    pub fn obj_by_name(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<Edge> {
        self.edge_index.get(name).copied()
    }

    pub fn sq_by_name(&self, name: &str) -> Option<Sq> {
        self.sq_index.get(name).copied()
    }

    pub fn src(&self, e: Edge) -> Obj {
        self.edges[e.index()].src
    }

    pub fn tgt(&self, e: Edge) -> Obj {
        self.edges[e.index()].tgt
    }

    #[inline]
    pub fn side(&self, s: Sq, side: Side) -> Edge {
        self.squares[s.index()].faces[side.slot()]
    }

    pub fn face(&self, s: Sq, dir: Dir, sign: Sign) -> Edge {
        self.side(s, Side::of(dir, sign))
    }

    pub fn top(&self, s: Sq) -> Edge {
        self.side(s, Side::Top)
    }

    pub fn bottom(&self, s: Sq) -> Edge {
        self.side(s, Side::Bottom)
    }

    pub fn left(&self, s: Sq) -> Edge {
        self.side(s, Side::Left)
    }

    pub fn right(&self, s: Sq) -> Edge {
        self.side(s, Side::Right)
    }

    /// Edges leaving `x`.
    pub fn edges_from(&self, x: Obj) -> &[Edge] {
        &self.edges_from[x.index()]
    }

    /// Squares whose `side` face is `e`.
    pub fn squares_with(&self, side: Side, e: Edge) -> &[Sq] {
        &self.by_side[side.slot()][e.index()]
    }

    pub fn eps(&self, x: Obj) -> Edge {
        self.eps[x.index()]
    }

    pub fn eps1(&self, e: Edge) -> Sq {
        self.eps1[e.index()]
    }

    pub fn eps2(&self, e: Edge) -> Sq {
        self.eps2[e.index()]
    }

    /// Identity square for composition in `dir` on edge `e`.
    pub fn eps_dir(&self, dir: Dir, e: Edge) -> Sq {
        match dir {
            Dir::One => self.eps1(e),
            Dir::Two => self.eps2(e),
        }
    }

    pub fn gamma(&self, sign: Sign, e: Edge) -> Sq {
        match sign {
            Sign::Minus => self.gamma_minus[e.index()],
            Sign::Plus => self.gamma_plus[e.index()],
        }
    }

    /// The connection `Γ^sign(a)`. Its boundary follows the fixed pattern:
    /// `Γ⁻(a)` has top = left = `a`, `Γ⁺(a)` has right = bottom = `a`, the
    /// remaining faces being identities.
    pub fn connection(&self, sign: Sign, e: Edge) -> Sq {
        self.gamma(sign, e)
    }

    /// `⊙ₓ = ε₁ε(x)`.
    pub fn double_degeneracy(&self, x: Obj) -> Sq {
        self.eps1(self.eps(x))
    }

    pub fn is_identity_edge(&self, e: Edge) -> bool {
        self.src(e) == self.tgt(e) && self.eps(self.src(e)) == e
    }

    #[inline]
    pub fn compose_edges_opt(&self, a: Edge, b: Edge) -> Option<Edge> {
        self.edge_compose.get(a.index(), b.index())
    }

    #[inline]
    pub fn compose_opt(&self, dir: Dir, a: Sq, b: Sq) -> Option<Sq> {
        match dir {
            Dir::One => self.compose1.get(a.index(), b.index()),
            Dir::Two => self.compose2.get(a.index(), b.index()),
        }
    }

    pub fn compose_edges(&self, a: Edge, b: Edge) -> Result<Edge, OpError> {
        if self.tgt(a) != self.src(b) {
            return Err(OpError::EdgesNotComposable {
                left: self.edge_name(a).to_owned(),
                right: self.edge_name(b).to_owned(),
            });
        }
        self.compose_edges_opt(a, b).ok_or_else(|| OpError::EdgesNotComposable {
            left: self.edge_name(a).to_owned(),
            right: self.edge_name(b).to_owned(),
        })
    }

    /// Composes a path of edges left to right. An empty path has no value.
    pub fn compose_path(&self, path: &[Edge]) -> Option<Edge> {
        let (first, rest) = path.split_first()?;
        rest.iter()
            .try_fold(*first, |acc, &e| self.compose_edges_opt(acc, e))
    }

    /// `α +_dir β`.
    pub fn compose(&self, dir: Dir, a: Sq, b: Sq) -> Result<Sq, OpError> {
        let composable = self.face(a, dir, Sign::Plus) == self.face(b, dir, Sign::Minus);
        if !composable {
            return Err(OpError::NotComposable {
                dir,
                left: self.sq_name(a).to_owned(),
                right: self.sq_name(b).to_owned(),
            });
        }
        self.compose_opt(dir, a, b).ok_or_else(|| OpError::MissingComposite {
            dir,
            left: self.sq_name(a).to_owned(),
            right: self.sq_name(b).to_owned(),
        })
    }

    pub fn invert_edge(&self, e: Edge) -> Result<Edge, OpError> {
        if !self.is_groupoid() {
            return Err(OpError::NotAGroupoid);
        }
        self.edge_inv[e.index()].ok_or_else(|| OpError::NoInverse(self.edge_name(e).to_owned()))
    }

    /// Inverse of `α` for `+_dir`.
    pub fn invert(&self, dir: Dir, s: Sq) -> Result<Sq, OpError> {
        if !self.is_groupoid() {
            return Err(OpError::NotAGroupoid);
        }
        let slot = match dir {
            Dir::One => self.inv1[s.index()],
            Dir::Two => self.inv2[s.index()],
        };
        slot.ok_or_else(|| OpError::NoInverse(self.sq_name(s).to_owned()))
    }

    pub(crate) fn raw_edge_inverse(&self, e: Edge) -> Option<Edge> {
        self.edge_inv[e.index()]
    }

    pub(crate) fn raw_inverse(&self, dir: Dir, s: Sq) -> Option<Sq> {
        match dir {
            Dir::One => self.inv1[s.index()],
            Dir::Two => self.inv2[s.index()],
        }
    }

    /// All defined edge composites `(a, b, a + b)`.
    pub fn edge_compose_entries(&self) -> impl Iterator<Item = (Edge, Edge, Edge)> + '_ {
        self.edge_compose
            .entries()
            .map(|(a, b, c)| (Edge(a as u32), Edge(b as u32), c))
    }

    /// All defined square composites `(α, β, α +_dir β)`.
    pub fn compose_entries(&self, dir: Dir) -> impl Iterator<Item = (Sq, Sq, Sq)> + '_ {
        let table = match dir {
            Dir::One => &self.compose1,
            Dir::Two => &self.compose2,
        };
        table.entries().map(|(a, b, c)| (Sq(a as u32), Sq(b as u32), c))
    }

    /// Squares composable after `a` in direction `dir`.
    pub fn partners_after(&self, dir: Dir, a: Sq) -> &[Sq] {
        let e = self.face(a, dir, Sign::Plus);
        self.squares_with(Side::of(dir, Sign::Minus), e)
    }

    /// Squares composable before `b` in direction `dir`.
    pub fn partners_before(&self, dir: Dir, b: Sq) -> &[Sq] {
        let e = self.face(b, dir, Sign::Minus);
        self.squares_with(Side::of(dir, Sign::Plus), e)
    }

    /// Squares with the given four faces.
    pub fn squares_with_boundary(&self, top: Edge, bottom: Edge, left: Edge, right: Edge) -> Vec<Sq> {
        self.squares_with(Side::Top, top)
            .iter()
            .copied()
            .filter(|&s| self.bottom(s) == bottom && self.left(s) == left && self.right(s) == right)
            .collect()
    }

    pub(crate) fn thin_cache(&self) -> &OnceLock<ThinSet> {
        &self.thin
    }

    /// Rebuilds a name-level builder carrying every table entry.
    pub fn to_builder(&self) -> DoubleGCBuilder {
        let mut b = DoubleGCBuilder::new(self.kind);
        for x in self.objects() {
            b.object(self.obj_name(x));
        }
        for e in self.edges() {
            b.edge(self.edge_name(e), self.obj_name(self.src(e)), self.obj_name(self.tgt(e)));
        }
        for s in self.squares() {
            b.square(
                self.sq_name(s),
                self.edge_name(self.top(s)),
                self.edge_name(self.bottom(s)),
                self.edge_name(self.left(s)),
                self.edge_name(self.right(s)),
            );
        }
        for (a, c, r) in self.edge_compose_entries() {
            b.compose_edge(self.edge_name(a), self.edge_name(c), self.edge_name(r));
        }
        for dir in Dir::BOTH {
            for (p, q, r) in self.compose_entries(dir) {
                b.compose(dir, self.sq_name(p), self.sq_name(q), self.sq_name(r));
            }
        }
        for x in self.objects() {
            b.eps(self.obj_name(x), self.edge_name(self.eps(x)));
        }
        for e in self.edges() {
            let en = self.edge_name(e);
            b.eps1(en, self.sq_name(self.eps1(e)));
            b.eps2(en, self.sq_name(self.eps2(e)));
            b.gamma(Sign::Minus, en, self.sq_name(self.gamma(Sign::Minus, e)));
            b.gamma(Sign::Plus, en, self.sq_name(self.gamma(Sign::Plus, e)));
        }
        b
    }
}

/// Name-level construction of a [`DoubleGC`]. Later entries for the same key
/// replace earlier ones; [`DoubleGCBuilder::build`] resolves names and
/// rejects references to missing identifiers.
#[derive(Clone, Debug)]
pub struct DoubleGCBuilder {
    kind: Kind,
    objects: Vec<String>,
    edges: Vec<(String, String, String)>,
    squares: Vec<(String, [String; 4])>,
    edge_compose: Vec<((String, String), String)>,
    compose1: Vec<((String, String), String)>,
    compose2: Vec<((String, String), String)>,
    eps: Vec<(String, String)>,
    eps1: Vec<(String, String)>,
    eps2: Vec<(String, String)>,
    gamma_minus: Vec<(String, String)>,
    gamma_plus: Vec<(String, String)>,
}

impl DoubleGCBuilder {
    pub fn new(kind: Kind) -> Self {
        DoubleGCBuilder {
            kind,
            objects: Vec::new(),
            edges: Vec::new(),
            squares: Vec::new(),
            edge_compose: Vec::new(),
            compose1: Vec::new(),
            compose2: Vec::new(),
            eps: Vec::new(),
            eps1: Vec::new(),
            eps2: Vec::new(),
            gamma_minus: Vec::new(),
            gamma_plus: Vec::new(),
        }
    }

    pub fn set_kind(&mut self, kind: Kind) -> &mut Self {
        self.kind = kind;
        self
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_owned());
        self
    }

    pub fn edge(&mut self, name: &str, src: &str, tgt: &str) -> &mut Self {
        self.edges.push((name.to_owned(), src.to_owned(), tgt.to_owned()));
        self
    }

    pub fn square(&mut self, name: &str, top: &str, bottom: &str, left: &str, right: &str) -> &mut Self {
        self.squares.push((
            name.to_owned(),
            [top.to_owned(), bottom.to_owned(), left.to_owned(), right.to_owned()],
        ));
        self
    }

    pub fn compose_edge(&mut self, a: &str, b: &str, c: &str) -> &mut Self {
        self.edge_compose.push(((a.to_owned(), b.to_owned()), c.to_owned()));
        self
    }

    pub fn compose(&mut self, dir: Dir, a: &str, b: &str, c: &str) -> &mut Self {
        let row = ((a.to_owned(), b.to_owned()), c.to_owned());
        match dir {
            Dir::One => self.compose1.push(row),
            Dir::Two => self.compose2.push(row),
        }
        self
    }

    pub fn eps(&mut self, x: &str, e: &str) -> &mut Self {
        self.eps.push((x.to_owned(), e.to_owned()));
        self
    }

    pub fn eps1(&mut self, e: &str, s: &str) -> &mut Self {
        self.eps1.push((e.to_owned(), s.to_owned()));
        self
    }

    pub fn eps2(&mut self, e: &str, s: &str) -> &mut Self {
        self.eps2.push((e.to_owned(), s.to_owned()));
        self
    }

    pub fn gamma(&mut self, sign: Sign, e: &str, s: &str) -> &mut Self {
        let row = (e.to_owned(), s.to_owned());
        match sign {
            Sign::Minus => self.gamma_minus.push(row),
            Sign::Plus => self.gamma_plus.push(row),
        }
        self
    }

    /// Removes a binary table entry; returns whether one was present.
    pub fn remove_compose(&mut self, dir: Dir, a: &str, b: &str) -> bool {
        let rows = match dir {
            Dir::One => &mut self.compose1,
            Dir::Two => &mut self.compose2,
        };
        let before = rows.len();
        rows.retain(|((x, y), _)| !(x == a && y == b));
        rows.len() != before
    }

    pub fn build(&self) -> Result<DoubleGC, ModelError> {
        let malformed = |m: String| ModelError::MalformedModel(m);

        let mut obj_index = HashMap::new();
        for (i, name) in self.objects.iter().enumerate() {
            if obj_index.insert(name.clone(), Obj(i as u32)).is_some() {
                return Err(malformed(format!("duplicate object `{name}`")));
            }
        }
        let find_obj = |n: &str| {
            obj_index
                .get(n)
                .copied()
                .ok_or_else(|| malformed(format!("unknown object `{n}`")))
        };

        let mut edge_index = HashMap::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, (name, s, t)) in self.edges.iter().enumerate() {
            if edge_index.insert(name.clone(), Edge(i as u32)).is_some() {
                return Err(malformed(format!("duplicate edge `{name}`")));
            }
            edges.push(EdgeCell { name: name.clone(), src: find_obj(s)?, tgt: find_obj(t)? });
        }
        let find_edge = |n: &str| {
            edge_index
                .get(n)
                .copied()
                .ok_or_else(|| malformed(format!("unknown edge `{n}`")))
        };

        let mut sq_index = HashMap::new();
        let mut squares = Vec::with_capacity(self.squares.len());
        for (i, (name, faces)) in self.squares.iter().enumerate() {
            if sq_index.insert(name.clone(), Sq(i as u32)).is_some() {
                return Err(malformed(format!("duplicate square `{name}`")));
            }
            let mut ids = [Edge(0); 4];
            for (slot, f) in faces.iter().enumerate() {
                ids[slot] = find_edge(f)?;
            }
            squares.push(SquareCell { name: name.clone(), faces: ids });
        }
        let find_sq = |n: &str| {
            sq_index
                .get(n)
                .copied()
                .ok_or_else(|| malformed(format!("unknown square `{n}`")))
        };

        let ne = edges.len();
        let ns = squares.len();
        let mut edge_compose = Table::new(ne);
        for ((a, b), c) in &self.edge_compose {
            edge_compose.set(find_edge(a)?.index(), find_edge(b)?.index(), find_edge(c)?);
        }
        let mut compose1 = Table::new(ns);
        for ((a, b), c) in &self.compose1 {
            compose1.set(find_sq(a)?.index(), find_sq(b)?.index(), find_sq(c)?);
        }
        let mut compose2 = Table::new(ns);
        for ((a, b), c) in &self.compose2 {
            compose2.set(find_sq(a)?.index(), find_sq(b)?.index(), find_sq(c)?);
        }

        let mut eps: Vec<Option<Edge>> = vec![None; self.objects.len()];
        for (x, e) in &self.eps {
            eps[find_obj(x)?.index()] = Some(find_edge(e)?);
        }
        let eps = eps
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| malformed(format!("eps missing for object `{}`", self.objects[i]))))
            .collect::<Result<Vec<_>, _>>()?;

        let unary = |rows: &[(String, String)], label: &str| -> Result<Vec<Sq>, ModelError> {
            let mut out: Vec<Option<Sq>> = vec![None; ne];
            for (e, s) in rows {
                out[find_edge(e)?.index()] = Some(find_sq(s)?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| malformed(format!("{label} missing for edge `{}`", edges[i].name))))
                .collect()
        };
        let eps1 = unary(&self.eps1, "eps1")?;
        let eps2 = unary(&self.eps2, "eps2")?;
        let gamma_minus = unary(&self.gamma_minus, "gamma-")?;
        let gamma_plus = unary(&self.gamma_plus, "gamma+")?;

        let mut edges_from = vec![Vec::new(); self.objects.len()];
        for (i, e) in edges.iter().enumerate() {
            edges_from[e.src.index()].push(Edge(i as u32));
        }
        let mut by_side: [Vec<Vec<Sq>>; 4] = std::array::from_fn(|_| vec![Vec::new(); ne]);
        for (i, s) in squares.iter().enumerate() {
            for slot in 0..4 {
                by_side[slot][s.faces[slot].index()].push(Sq(i as u32));
            }
        }

        let mut d = DoubleGC {
            kind: self.kind,
            objects: self.objects.clone(),
            edges,
            squares,
            edge_compose,
            compose1,
            compose2,
            eps,
            eps1,
            eps2,
            gamma_minus,
            gamma_plus,
            edge_inv: vec![None; ne],
            inv1: vec![None; ns],
            inv2: vec![None; ns],
            obj_index,
            edge_index,
            sq_index,
            edges_from,
            by_side,
            thin: OnceLock::new(),
        };
        d.derive_inverses();
        Ok(d)
    }
}

impl DoubleGC {
    /// Inverses are determined by the composition tables; they are searched
    /// rather than supplied so that a groupoid model cannot carry inverse
    /// data contradicting its own tables.
    fn derive_inverses(&mut self) {
        for e in self.edges() {
            let (x, y) = (self.src(e), self.tgt(e));
            self.edge_inv[e.index()] = self.edges_from(y).iter().copied().find(|&f| {
                self.tgt(f) == x
                    && self.compose_edges_opt(e, f) == Some(self.eps(x))
                    && self.compose_edges_opt(f, e) == Some(self.eps(y))
            });
        }
        for dir in Dir::BOTH {
            let mut out = vec![None; self.num_squares()];
            for s in self.squares() {
                let lo = self.face(s, dir, Sign::Minus);
                let hi = self.face(s, dir, Sign::Plus);
                out[s.index()] = self.partners_after(dir, s).iter().copied().find(|&t| {
                    self.face(t, dir, Sign::Plus) == lo
                        && self.compose_opt(dir, s, t) == Some(self.eps_dir(dir, lo))
                        && self.compose_opt(dir, t, s) == Some(self.eps_dir(dir, hi))
                });
            }
            match dir {
                Dir::One => self.inv1 = out,
                Dir::Two => self.inv2 = out,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, square_model};

    fn zz2() -> DoubleGC {
        square_model(&cyclic_group(2))
    }

    fn sq(d: &DoubleGC, l: &str, t: &str, r: &str, b: &str) -> Sq {
        let top = d.edge_by_name(t).unwrap();
        let bottom = d.edge_by_name(b).unwrap();
        let left = d.edge_by_name(l).unwrap();
        let right = d.edge_by_name(r).unwrap();
        let found = d.squares_with_boundary(top, bottom, left, right);
        assert_eq!(found.len(), 1);
        found[0]
    }

    #[test]
    fn connection_boundaries_follow_the_fixed_pattern() {
        let d = zz2();
        let one = d.edge_by_name("1").unwrap();
        // (top, left, right, bottom) = (1, 1, 0, 0)
        assert_eq!(d.connection(Sign::Minus, one), sq(&d, "1", "1", "0", "0"));
        // (top, left, right, bottom) = (0, 0, 1, 1)
        assert_eq!(d.connection(Sign::Plus, one), sq(&d, "0", "0", "1", "1"));
        let x = d.obj_by_name("*").unwrap();
        assert_eq!(d.connection(Sign::Minus, d.eps(x)), d.double_degeneracy(x));
    }

    #[test]
    fn cancellation_evaluated_in_zz2() {
        let d = zz2();
        let one = d.edge_by_name("1").unwrap();
        let gp = d.connection(Sign::Plus, one);
        let gm = d.connection(Sign::Minus, one);
        assert_eq!(d.compose(Dir::One, gp, gm).unwrap(), d.eps2(one));
        assert_eq!(d.compose(Dir::Two, gp, gm).unwrap(), d.eps1(one));
    }

    #[test]
    fn identity_law_on_every_square() {
        let d = zz2();
        for s in d.squares() {
            assert_eq!(d.compose(Dir::One, s, d.eps1(d.bottom(s))).unwrap(), s);
            assert_eq!(d.compose(Dir::Two, d.eps2(d.left(s)), s).unwrap(), s);
        }
    }

    #[test]
    fn inverses_in_zz2() {
        let d = zz2();
        let one = d.edge_by_name("1").unwrap();
        assert_eq!(d.invert_edge(one).unwrap(), one);
        // invert in direction 1 sends (l, t, r, b) to (-l, b, -r, t)
        for s in d.squares() {
            let inv = d.invert(Dir::One, s).unwrap();
            assert_eq!(d.top(inv), d.bottom(s));
            assert_eq!(d.bottom(inv), d.top(s));
            assert_eq!(d.left(inv), d.invert_edge(d.left(s)).unwrap());
            assert_eq!(d.right(inv), d.invert_edge(d.right(s)).unwrap());
            assert_eq!(d.compose(Dir::One, s, inv).unwrap(), d.eps1(d.top(s)));
        }
        for e in d.edges() {
            let inv = d.invert(Dir::Two, d.eps2(e)).unwrap();
            assert_eq!(inv, d.eps2(d.invert_edge(e).unwrap()));
        }
    }

    #[test]
    fn non_composable_pairs_are_rejected() {
        let d = zz2();
        let a = sq(&d, "0", "0", "0", "0");
        let b = sq(&d, "0", "1", "1", "0");
        assert!(matches!(d.compose(Dir::One, a, b), Err(OpError::NotComposable { .. })));
    }

    #[test]
    fn categories_have_no_inverses() {
        let mut b = DoubleGCBuilder::new(Kind::Category);
        b.object("x").edge("i", "x", "x").square("o", "i", "i", "i", "i");
        b.compose_edge("i", "i", "i").compose(Dir::One, "o", "o", "o").compose(Dir::Two, "o", "o", "o");
        b.eps("x", "i").eps1("i", "o").eps2("i", "o");
        b.gamma(Sign::Minus, "i", "o").gamma(Sign::Plus, "i", "o");
        let d = b.build().unwrap();
        assert_eq!(d.invert_edge(Edge(0)), Err(OpError::NotAGroupoid));
    }

    #[test]
    fn missing_identifier_is_malformed() {
        let mut b = DoubleGCBuilder::new(Kind::Category);
        b.object("x").edge("i", "x", "y");
        assert!(matches!(b.build(), Err(ModelError::MalformedModel(_))));
    }
}
