//! A small language for pasting diagrams in matrix notation.
//!
//! ```text
//! expr := name | e1(arg) | e2(arg) | G-(arg) | G+(arg) | O(arg) | ? | [ row (; row)* ]
//! row  := expr (, expr)*
//! arg  := name | _
//! ```
//!
//! Rows are composed with `+₂` within and stacked with `+₁`. `?` stands for
//! any thin square and `_` for an unknown argument; both are filled by
//! [`solve`] from the surrounding seams.

mod check;
mod parse;
pub mod replay;
mod script;
mod solve;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::double::{DoubleGC, Edge, Obj, OpError, Sq};

pub use check::{evaluate, evaluate_column_major, typecheck, BoundaryScheme};
pub use parse::parse;
pub use script::{parse_script, replay, replay_chain, run_script, Script, Stmt};
pub use solve::{solve, solve_and_evaluate, PartitionedShell, Target};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    Eps1,
    Eps2,
    GammaMinus,
    GammaPlus,
    Odot,
}

impl Species {
    pub fn keyword(self) -> &'static str {
        match self {
            Species::Eps1 => "e1",
            Species::Eps2 => "e2",
            Species::GammaMinus => "G-",
            Species::GammaPlus => "G+",
            Species::Odot => "O",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Species> {
        Some(match s {
            "e1" => Species::Eps1,
            "e2" => Species::Eps2,
            "G-" => Species::GammaMinus,
            "G+" => Species::GammaPlus,
            "O" => Species::Odot,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    Hole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    /// A square, by environment binding or model name.
    Named(String),
    Apply(Species, Arg),
    /// `?`
    Thin,
    /// A concrete square, produced by the solver.
    Resolved(Sq),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Leaf { leaf: Leaf, pos: Pos },
    Array { rows: Vec<Vec<Expr>>, pos: Pos },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Leaf { pos, .. } | Expr::Array { pos, .. } => *pos,
        }
    }

    pub fn leaf(leaf: Leaf) -> Expr {
        Expr::Leaf { leaf, pos: Pos::default() }
    }

    pub fn array(rows: Vec<Vec<Expr>>) -> Expr {
        Expr::Array { rows, pos: Pos::default() }
    }

    /// Leaves in row-major order.
    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Leaf>) {
            match e {
                Expr::Leaf { leaf, .. } => out.push(leaf),
                Expr::Array { rows, .. } => rows.iter().flatten().for_each(|c| walk(c, out)),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn has_placeholders(&self) -> bool {
        self.leaves()
            .iter()
            .any(|l| matches!(l, Leaf::Thin | Leaf::Apply(_, Arg::Hole)))
    }

    /// Renders with model names for resolved leaves.
    pub fn display<'a>(&'a self, d: &'a DoubleGC) -> impl fmt::Display + 'a {
        Shown { e: self, d: Some(d) }
    }
}

struct Shown<'a> {
    e: &'a Expr,
    d: Option<&'a DoubleGC>,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            Expr::Leaf { leaf, .. } => match leaf {
                Leaf::Named(n) => f.write_str(n),
                Leaf::Apply(s, Arg::Name(n)) => write!(f, "{}({n})", s.keyword()),
                Leaf::Apply(s, Arg::Hole) => write!(f, "{}(_)", s.keyword()),
                Leaf::Thin => f.write_str("?"),
                Leaf::Resolved(s) => match self.d {
                    Some(d) => f.write_str(d.sq_name(*s)),
                    None => write!(f, "#{}", s.0),
                },
            },
            Expr::Array { rows, .. } => {
                f.write_str("[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    for (j, cell) in row.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", Shown { e: cell, d: self.d })?;
                    }
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Shown { e: self, d: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Square(Sq),
    Edge(Edge),
    Object(Obj),
}

/// Name bindings consulted before model names.
#[derive(Clone, Debug, Default)]
pub struct Env {
    bindings: HashMap<String, Value>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(&mut self, name: &str, v: Value) -> &mut Self {
        self.bindings.insert(name.to_owned(), v);
        self
    }

    pub fn square(&mut self, name: &str, s: Sq) -> &mut Self {
        self.bind(name, Value::Square(s))
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.bindings.get(name).copied()
    }

    pub(crate) fn resolve_square(&self, d: &DoubleGC, name: &str) -> Option<Sq> {
        match self.get(name) {
            Some(Value::Square(s)) => Some(s),
            Some(_) => None,
            None => d.sq_by_name(name),
        }
    }

    pub(crate) fn resolve_edge(&self, d: &DoubleGC, name: &str) -> Option<Edge> {
        match self.get(name) {
            Some(Value::Edge(e)) => Some(e),
            Some(_) => None,
            None => d.edge_by_name(name),
        }
    }

    pub(crate) fn resolve_object(&self, d: &DoubleGC, name: &str) -> Option<Obj> {
        match self.get(name) {
            Some(Value::Object(x)) => Some(x),
            Some(_) => None,
            None => d.obj_by_name(name),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PastingError {
    #[error("syntax error at {line}:{col}: {message}")]
    SyntaxError { line: usize, col: usize, message: String },
    #[error("ragged array at {0}")]
    RaggedArray(Pos),
    #[error("unbound name `{name}` at {pos}")]
    UnboundName { name: String, pos: Pos },
    #[error("seam mismatch at {pos} cell ({row},{col}) {seam}: expected {expected}, found {found}")]
    SeamMismatch { pos: Pos, row: usize, col: usize, seam: String, expected: String, found: String },
    #[error("unresolved placeholder at {0}; solve first")]
    UnresolvedPlaceholder(Pos),
    #[error("no thin square fits the slot at {0}")]
    UnsolvableSlot(Pos),
    #[error("slot at {pos} is ambiguous: {}", candidates.join(", "))]
    AmbiguousSlot { pos: Pos, candidates: Vec<String> },
    #[error("target has the wrong shape for the expression: {0}")]
    TargetShape(String),
    #[error("step {step} differs: {expected} versus {found}")]
    StepMismatch { step: usize, expected: String, found: String },
    #[error(transparent)]
    Op(#[from] OpError),
}
