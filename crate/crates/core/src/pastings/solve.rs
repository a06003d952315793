//! Placeholder filling by boundary unification.
//!
//! Every leaf becomes a variable with a finite domain. Seams and the target
//! boundary become equations between (possibly composite) sides. Domains
//! are narrowed by generalised arc consistency, then all remaining
//! assignments are enumerated; anything other than exactly one solution is
//! an error.

use std::collections::{BTreeSet, VecDeque};

use super::check::{concrete_leaf, species_square};
use super::{evaluate, Arg, Env, Expr, Leaf, PastingError, Pos, Species};
use crate::double::{DoubleGC, Edge, Side, Sq};
use crate::shells::Shell2;
use crate::thin::thin_set;

/// Largest domain product examined when narrowing a single equation.
const SUPPORT_CAP: usize = 20_000;
/// Solutions collected before declaring a slot ambiguous.
const SOLUTION_CAP: usize = 32;

/// A boundary given side by side, one edge per top-level cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedShell {
    pub top: Vec<Edge>,
    pub bottom: Vec<Edge>,
    pub left: Vec<Edge>,
    pub right: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    Free,
    Shell(Shell2),
    Partitioned(PartitionedShell),
}

#[derive(Clone, Debug)]
enum Domain {
    All,
    Set(Vec<Sq>),
}

impl Domain {
    fn len(&self) -> Option<usize> {
        match self {
            Domain::All => None,
            Domain::Set(v) => Some(v.len()),
        }
    }
}

struct Var {
    pos: Pos,
    placeholder: bool,
    domain: Domain,
}

enum Node {
    Leaf(usize),
    Array { rows: usize, cols: usize, cells: Vec<usize> },
}

#[derive(Clone, Copy)]
enum Rhs {
    Side(usize, Side),
    Edge(Edge),
}

struct Equation {
    lhs: (usize, Side),
    rhs: Rhs,
    vars: Vec<usize>,
}

struct Net<'a> {
    d: &'a DoubleGC,
    nodes: Vec<Node>,
    vars: Vec<Var>,
    eqs: Vec<Equation>,
    var_eqs: Vec<Vec<usize>>,
}

fn lower(d: &DoubleGC, env: &Env, e: &Expr, nodes: &mut Vec<Node>, vars: &mut Vec<Var>) -> Result<usize, PastingError> {
    match e {
        Expr::Leaf { leaf, pos } => {
            let (placeholder, domain) = match leaf {
                Leaf::Thin => (true, Domain::All),
                Leaf::Apply(Species::Odot, Arg::Hole) => {
                    let set: BTreeSet<Sq> = d.objects().map(|x| d.double_degeneracy(x)).collect();
                    (true, Domain::Set(set.into_iter().collect()))
                }
                Leaf::Apply(sp, Arg::Hole) => {
                    let set: BTreeSet<Sq> = d.edges().map(|x| species_square(d, *sp, x)).collect();
                    (true, Domain::Set(set.into_iter().collect()))
                }
                _ => (false, Domain::Set(vec![concrete_leaf(d, env, e)?])),
            };
            vars.push(Var { pos: *pos, placeholder, domain });
            nodes.push(Node::Leaf(vars.len() - 1));
            Ok(nodes.len() - 1)
        }
        Expr::Array { rows, .. } => {
            let mut cells = Vec::new();
            for row in rows {
                for c in row {
                    cells.push(lower(d, env, c, nodes, vars)?);
                }
            }
            nodes.push(Node::Array { rows: rows.len(), cols: rows[0].len(), cells });
            Ok(nodes.len() - 1)
        }
    }
}

impl<'a> Net<'a> {
    /// Cells along one side of an array, in order.
    fn side_cells(&self, node: usize, side: Side) -> Vec<usize> {
        match &self.nodes[node] {
            Node::Leaf(_) => vec![node],
            Node::Array { rows, cols, cells } => {
                let (r, c) = (*rows, *cols);
                match side {
                    Side::Top => (0..c).map(|j| cells[j]).collect(),
                    Side::Bottom => (0..c).map(|j| cells[(r - 1) * c + j]).collect(),
                    Side::Left => (0..r).map(|i| cells[i * c]).collect(),
                    Side::Right => (0..r).map(|i| cells[i * c + c - 1]).collect(),
                }
            }
        }
    }

    fn side_vars(&self, node: usize, side: Side, out: &mut Vec<usize>) {
        match &self.nodes[node] {
            Node::Leaf(v) => out.push(*v),
            Node::Array { .. } => {
                for c in self.side_cells(node, side) {
                    self.side_vars(c, side, out);
                }
            }
        }
    }

    fn side_value(&self, node: usize, side: Side, assign: &[Option<Sq>]) -> Option<Edge> {
        match &self.nodes[node] {
            Node::Leaf(v) => assign[*v].map(|s| self.d.side(s, side)),
            Node::Array { .. } => {
                let mut acc: Option<Edge> = None;
                for c in self.side_cells(node, side) {
                    let e = self.side_value(c, side, assign)?;
                    acc = Some(match acc {
                        None => e,
                        Some(a) => self.d.compose_edges_opt(a, e)?,
                    });
                }
                acc
            }
        }
    }

    fn add_eq(&mut self, lhs: (usize, Side), rhs: Rhs) {
        let mut vars = Vec::new();
        self.side_vars(lhs.0, lhs.1, &mut vars);
        if let Rhs::Side(n, s) = rhs {
            self.side_vars(n, s, &mut vars);
        }
        vars.sort_unstable();
        vars.dedup();
        let id = self.eqs.len();
        for &v in &vars {
            self.var_eqs[v].push(id);
        }
        self.eqs.push(Equation { lhs, rhs, vars });
    }

    fn holds(&self, eq: &Equation, assign: &[Option<Sq>]) -> bool {
        let Some(l) = self.side_value(eq.lhs.0, eq.lhs.1, assign) else { return false };
        match eq.rhs {
            Rhs::Edge(e) => l == e,
            Rhs::Side(n, s) => self.side_value(n, s, assign) == Some(l),
        }
    }

    fn seams(&mut self, node: usize) {
        let Node::Array { rows, cols, cells } = &self.nodes[node] else { return };
        let (r, c, cells) = (*rows, *cols, cells.clone());
        for i in 0..r {
            for j in 0..c {
                let a = cells[i * c + j];
                if j + 1 < c {
                    self.add_eq((a, Side::Right), Rhs::Side(cells[i * c + j + 1], Side::Left));
                }
                if i + 1 < r {
                    self.add_eq((a, Side::Bottom), Rhs::Side(cells[(i + 1) * c + j], Side::Top));
                }
            }
        }
        for cell in cells {
            self.seams(cell);
        }
    }

    fn target(&mut self, root: usize, target: &Target) -> Result<(), PastingError> {
        match target {
            Target::Free => {}
            Target::Shell(s) => {
                for (side, e) in [(Side::Top, s.top), (Side::Bottom, s.bottom), (Side::Left, s.left), (Side::Right, s.right)] {
                    self.add_eq((root, side), Rhs::Edge(e));
                }
            }
            Target::Partitioned(p) => {
                let (r, c) = match &self.nodes[root] {
                    Node::Leaf(_) => (1, 1),
                    Node::Array { rows, cols, .. } => (*rows, *cols),
                };
                if p.top.len() != c || p.bottom.len() != c || p.left.len() != r || p.right.len() != r {
                    return Err(PastingError::TargetShape(format!(
                        "expression is {r}x{c}, target partitions are {}/{}/{}/{}",
                        p.top.len(),
                        p.bottom.len(),
                        p.left.len(),
                        p.right.len()
                    )));
                }
                for (side, edges) in [(Side::Top, &p.top), (Side::Bottom, &p.bottom), (Side::Left, &p.left), (Side::Right, &p.right)] {
                    for (cell, &e) in self.side_cells(root, side).into_iter().zip(edges.iter()) {
                        self.add_eq((cell, side), Rhs::Edge(e));
                    }
                }
            }
        }
        Ok(())
    }

    /// If `eq` pins one side of a single unconstrained leaf, returns it.
    fn seed(&self, eq: &Equation) -> Option<(usize, Vec<Sq>)> {
        let open: Vec<usize> = eq.vars.iter().copied().filter(|&v| self.vars[v].domain.len().is_none()).collect();
        if open.len() != 1 || eq.vars.iter().any(|&v| self.vars[v].domain.len().is_some_and(|n| n != 1)) {
            return None;
        }
        let v = open[0];
        let assign = self.singletons();
        let direct = |node: usize| matches!(self.nodes[node], Node::Leaf(x) if x == v);
        let (side, value) = if direct(eq.lhs.0) {
            let value = match eq.rhs {
                Rhs::Edge(e) => e,
                Rhs::Side(n, s) => self.side_value(n, s, &assign)?,
            };
            (eq.lhs.1, value)
        } else {
            match eq.rhs {
                Rhs::Side(n, s) if direct(n) => (s, self.side_value(eq.lhs.0, eq.lhs.1, &assign)?),
                _ => return None,
            }
        };
        let thin = thin_set(self.d);
        let cands = self.d.squares_with(side, value).iter().copied().filter(|&s| thin.contains(s)).collect();
        Some((v, cands))
    }

    fn singletons(&self) -> Vec<Option<Sq>> {
        self.vars
            .iter()
            .map(|v| match &v.domain {
                Domain::Set(s) if s.len() == 1 => Some(s[0]),
                _ => None,
            })
            .collect()
    }

    fn propagate(&mut self) -> Result<(), PastingError> {
        let mut queue: VecDeque<usize> = (0..self.eqs.len()).collect();
        let mut queued = vec![true; self.eqs.len()];
        while let Some(id) = queue.pop_front() {
            queued[id] = false;
            let changed = self.narrow(id)?;
            for v in changed {
                for &other in &self.var_eqs[v] {
                    if !queued[other] {
                        queued[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        Ok(())
    }

    /// Narrows the domains touched by one equation; returns changed vars.
    fn narrow(&mut self, id: usize) -> Result<Vec<usize>, PastingError> {
        let eq = &self.eqs[id];
        if eq.vars.iter().any(|&v| self.vars[v].domain.len().is_none()) {
            return Ok(match self.seed(eq) {
                Some((v, cands)) => {
                    if cands.is_empty() {
                        return Err(PastingError::UnsolvableSlot(self.vars[v].pos));
                    }
                    self.vars[v].domain = Domain::Set(cands);
                    vec![v]
                }
                None => Vec::new(),
            });
        }
        let vars = eq.vars.clone();
        let doms: Vec<Vec<Sq>> = vars
            .iter()
            .map(|&v| match &self.vars[v].domain {
                Domain::Set(s) => s.clone(),
                Domain::All => unreachable!(),
            })
            .collect();
        let product = doms.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.len()));
        if product.is_none_or(|p| p > SUPPORT_CAP) {
            return Ok(Vec::new());
        }
        let mut assign = vec![None; self.vars.len()];
        let mut supported: Vec<BTreeSet<Sq>> = vec![BTreeSet::new(); vars.len()];
        let mut idx = vec![0usize; vars.len()];
        if doms.iter().all(|d| !d.is_empty()) {
            loop {
                for (k, &v) in vars.iter().enumerate() {
                    assign[v] = Some(doms[k][idx[k]]);
                }
                if self.holds(&self.eqs[id], &assign) {
                    for k in 0..vars.len() {
                        supported[k].insert(doms[k][idx[k]]);
                    }
                }
                let mut k = 0;
                while k < vars.len() {
                    idx[k] += 1;
                    if idx[k] < doms[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == vars.len() {
                    break;
                }
            }
        }
        let mut changed = Vec::new();
        for (k, &v) in vars.iter().enumerate() {
            if supported[k].len() < doms[k].len() {
                if supported[k].is_empty() {
                    let pos = vars
                        .iter()
                        .map(|&x| &self.vars[x])
                        .find(|x| x.placeholder)
                        .unwrap_or(&self.vars[v])
                        .pos;
                    return Err(PastingError::UnsolvableSlot(pos));
                }
                self.vars[v].domain = Domain::Set(supported[k].iter().copied().collect());
                changed.push(v);
            }
        }
        Ok(changed)
    }

    fn materialise(&mut self) -> bool {
        let thin: Vec<Sq> = thin_set(self.d).members().collect();
        let mut any = false;
        for v in &mut self.vars {
            if v.domain.len().is_none() {
                v.domain = Domain::Set(thin.clone());
                any = true;
            }
        }
        any
    }

    fn search(&self) -> Vec<Vec<Sq>> {
        let mut order: Vec<usize> = (0..self.vars.len()).collect();
        order.sort_by_key(|&v| (self.vars[v].domain.len().unwrap_or(usize::MAX), v));
        let mut rank = vec![0; self.vars.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        // equations become checkable once their last variable is assigned
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        for (id, eq) in self.eqs.iter().enumerate() {
            let last = eq.vars.iter().map(|&v| rank[v]).max().unwrap_or(0);
            ready[last].push(id);
        }
        let mut assign = vec![None; self.vars.len()];
        let mut out = Vec::new();
        self.dfs(0, &order, &ready, &mut assign, &mut out);
        out
    }

    fn dfs(&self, depth: usize, order: &[usize], ready: &[Vec<usize>], assign: &mut Vec<Option<Sq>>, out: &mut Vec<Vec<Sq>>) {
        if out.len() >= SOLUTION_CAP {
            return;
        }
        if depth == order.len() {
            out.push(assign.iter().map(|s| s.expect("complete assignment")).collect());
            return;
        }
        let v = order[depth];
        let Domain::Set(dom) = &self.vars[v].domain else { unreachable!("materialised") };
        for &s in dom {
            assign[v] = Some(s);
            if ready[depth].iter().all(|&id| self.holds(&self.eqs[id], assign)) {
                self.dfs(depth + 1, order, ready, assign, out);
            }
        }
        assign[v] = None;
    }
}

fn rebuild(e: &Expr, values: &mut impl Iterator<Item = Sq>) -> Expr {
    match e {
        Expr::Leaf { pos, .. } => Expr::Leaf { leaf: Leaf::Resolved(values.next().expect("one value per leaf")), pos: *pos },
        Expr::Array { rows, pos } => Expr::Array {
            rows: rows.iter().map(|r| r.iter().map(|c| rebuild(c, values)).collect()).collect(),
            pos: *pos,
        },
    }
}

/// Replaces every `?` and `_` so that all seams and the target match.
/// The result has only resolved leaves.
pub fn solve(d: &DoubleGC, env: &Env, expr: &Expr, target: &Target) -> Result<Expr, PastingError> {
    let mut nodes = Vec::new();
    let mut vars = Vec::new();
    let root = lower(d, env, expr, &mut nodes, &mut vars)?;
    let nvars = vars.len();
    let mut net = Net { d, nodes, vars, eqs: Vec::new(), var_eqs: vec![Vec::new(); nvars] };
    net.seams(root);
    net.target(root, target)?;
    net.propagate()?;
    if net.materialise() {
        net.propagate()?;
    }
    let sols = net.search();
    match sols.len() {
        0 => {
            let pos = net.vars.iter().find(|v| v.placeholder).unwrap_or(&net.vars[0]).pos;
            Err(PastingError::UnsolvableSlot(pos))
        }
        1 => Ok(rebuild(expr, &mut sols[0].iter().copied())),
        _ => {
            let v = (0..nvars)
                .find(|&v| sols.iter().any(|s| s[v] != sols[0][v]))
                .expect("distinct solutions differ somewhere");
            let distinct: BTreeSet<Sq> = sols.iter().map(|s| s[v]).collect();
            Err(PastingError::AmbiguousSlot {
                pos: net.vars[v].pos,
                candidates: distinct.into_iter().map(|s| d.sq_name(s).to_owned()).collect(),
            })
        }
    }
}

pub fn solve_and_evaluate(d: &DoubleGC, env: &Env, expr: &Expr, target: &Target) -> Result<Sq, PastingError> {
    let solved = solve(d, env, expr, target)?;
    evaluate(d, env, &solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::Sign;
    use crate::models::{cyclic_group, square_model};
    use crate::pastings::parse;

    #[test]
    fn single_slot_with_target() {
        let d = square_model(&cyclic_group(2));
        let x = d.obj_by_name("*").unwrap();
        let o = d.double_degeneracy(x);
        let solved = solve(&d, &Env::new(), &parse("[?]").unwrap(), &Target::Shell(Shell2::of(&d, o))).unwrap();
        assert_eq!(evaluate(&d, &Env::new(), &solved).unwrap(), o);
    }

    #[test]
    fn non_commuting_target_is_unsolvable() {
        let d = square_model(&cyclic_group(2));
        let (zero, one) = (d.edge_by_name("0").unwrap(), d.edge_by_name("1").unwrap());
        let target = Target::Shell(Shell2 { left: one, bottom: zero, top: zero, right: zero });
        assert!(matches!(
            solve(&d, &Env::new(), &parse("?").unwrap(), &target),
            Err(PastingError::UnsolvableSlot(_))
        ));
    }

    #[test]
    fn free_corner_is_ambiguous() {
        let d = square_model(&cyclic_group(2));
        let err = solve(&d, &Env::new(), &parse("[?, G-(1)]").unwrap(), &Target::Free).unwrap_err();
        let PastingError::AmbiguousSlot { candidates, .. } = err else { panic!("{err:?}") };
        assert!(candidates.len() > 1);
    }

    #[test]
    fn species_argument_from_seam() {
        let d = square_model(&cyclic_group(2));
        let one = d.edge_by_name("1").unwrap();
        let solved = solve(&d, &Env::new(), &parse("[G+(_), G-(1)]").unwrap(), &Target::Free).unwrap();
        assert_eq!(evaluate(&d, &Env::new(), &solved).unwrap(), d.eps1(one));
        assert_eq!(solved.leaves()[0], &Leaf::Resolved(d.gamma(Sign::Plus, one)));
    }
}
