//! Thin squares: the closure of degeneracies and connections under both
//! square compositions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::double::{Dir, DoubleGC, Edge, Obj, OpError, Sign, Sq};
use crate::report::Report;
use crate::shells::{all_shells, for_each_cube, is_commutative, Shell2, ShellError};

/// Default cap on candidate cubes examined by [`thinly_equivalent`].
pub const DEFAULT_EQUIVALENCE_BUDGET: usize = 1_000_000;

/// How a thin square was first reached during the closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThinStep {
    Eps1(Edge),
    Eps2(Edge),
    Gamma(Sign, Edge),
    Odot(Obj),
    Compose(Dir, Sq, Sq),
}

/// A composite of degeneracies and connections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThinExpr {
    Eps1(Edge),
    Eps2(Edge),
    Gamma(Sign, Edge),
    Odot(Obj),
    Compose(Dir, Box<ThinExpr>, Box<ThinExpr>),
}

impl ThinExpr {
    pub fn evaluate(&self, d: &DoubleGC) -> Result<Sq, OpError> {
        Ok(match self {
            ThinExpr::Eps1(e) => d.eps1(*e),
            ThinExpr::Eps2(e) => d.eps2(*e),
            ThinExpr::Gamma(sign, e) => d.gamma(*sign, *e),
            ThinExpr::Odot(x) => d.double_degeneracy(*x),
            ThinExpr::Compose(dir, a, b) => d.compose(*dir, a.evaluate(d)?, b.evaluate(d)?)?,
        })
    }

    pub fn display<'a>(&'a self, d: &'a DoubleGC) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a ThinExpr, &'a DoubleGC);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let d = self.1;
                match self.0 {
                    ThinExpr::Eps1(e) => write!(f, "e1({})", d.edge_name(*e)),
                    ThinExpr::Eps2(e) => write!(f, "e2({})", d.edge_name(*e)),
                    ThinExpr::Gamma(Sign::Minus, e) => write!(f, "G-({})", d.edge_name(*e)),
                    ThinExpr::Gamma(Sign::Plus, e) => write!(f, "G+({})", d.edge_name(*e)),
                    ThinExpr::Odot(x) => write!(f, "O({})", d.obj_name(*x)),
                    ThinExpr::Compose(dir, a, b) => {
                        let sep = if *dir == Dir::One { ";" } else { "," };
                        write!(f, "[{}{sep} {}]", Show(a, d), Show(b, d))
                    }
                }
            }
        }
        Show(self, d)
    }
}

#[derive(Clone, Debug)]
pub struct ThinSet {
    steps: Vec<Option<ThinStep>>,
    count: usize,
}

impl ThinSet {
    fn compute(d: &DoubleGC) -> ThinSet {
        let mut steps: Vec<Option<ThinStep>> = vec![None; d.num_squares()];
        let mut queue = VecDeque::new();
        let add = |s: Sq, step: ThinStep, steps: &mut Vec<Option<ThinStep>>, queue: &mut VecDeque<Sq>| {
            if steps[s.index()].is_none() {
                steps[s.index()] = Some(step);
                queue.push_back(s);
            }
        };
        for x in d.objects() {
            add(d.double_degeneracy(x), ThinStep::Odot(x), &mut steps, &mut queue);
        }
        for e in d.edges() {
            add(d.eps1(e), ThinStep::Eps1(e), &mut steps, &mut queue);
            add(d.eps2(e), ThinStep::Eps2(e), &mut steps, &mut queue);
            for sign in Sign::BOTH {
                add(d.gamma(sign, e), ThinStep::Gamma(sign, e), &mut steps, &mut queue);
            }
        }
        while let Some(s) = queue.pop_front() {
            for dir in Dir::BOTH {
                for &b in d.partners_after(dir, s) {
                    if steps[b.index()].is_some() {
                        let c = d.compose_opt(dir, s, b).expect("partner is composable");
                        add(c, ThinStep::Compose(dir, s, b), &mut steps, &mut queue);
                    }
                }
                for &a in d.partners_before(dir, s) {
                    if steps[a.index()].is_some() {
                        let c = d.compose_opt(dir, a, s).expect("partner is composable");
                        add(c, ThinStep::Compose(dir, a, s), &mut steps, &mut queue);
                    }
                }
            }
        }
        let count = steps.iter().filter(|s| s.is_some()).count();
        ThinSet { steps, count }
    }

    pub fn contains(&self, s: Sq) -> bool {
        self.steps.get(s.index()).is_some_and(Option::is_some)
    }

    pub fn members(&self) -> impl Iterator<Item = Sq> + '_ {
        self.steps.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(i, _)| Sq(i as u32))
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn step(&self, s: Sq) -> Option<ThinStep> {
        self.steps.get(s.index()).copied().flatten()
    }

    /// An expression over degeneracies and connections evaluating to `s`.
    pub fn witness(&self, s: Sq) -> Option<ThinExpr> {
        // composite steps only refer to squares reached earlier, so this terminates
        Some(match self.step(s)? {
            ThinStep::Eps1(e) => ThinExpr::Eps1(e),
            ThinStep::Eps2(e) => ThinExpr::Eps2(e),
            ThinStep::Gamma(sign, e) => ThinExpr::Gamma(sign, e),
            ThinStep::Odot(x) => ThinExpr::Odot(x),
            ThinStep::Compose(dir, a, b) => {
                ThinExpr::Compose(dir, Box::new(self.witness(a)?), Box::new(self.witness(b)?))
            }
        })
    }
}

/// The thin squares of `d`, computed on first use.
pub fn thin_set(d: &DoubleGC) -> &ThinSet {
    d.thin_cache().get_or_init(|| ThinSet::compute(d))
}

pub fn is_thin(d: &DoubleGC, s: Sq) -> bool {
    thin_set(d).contains(s)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThinError {
    #[error("no thin square has boundary {0}")]
    NoThinFiller(String),
    #[error("{count} thin squares have boundary {shell}")]
    MultipleThinFillers { shell: String, count: usize },
    #[error("search budget of {0} candidate cubes exceeded")]
    SearchBudgetExceeded(usize),
    #[error("shell mismatch: {0}")]
    ShellMismatch(String),
    #[error(transparent)]
    Shell(#[from] ShellError),
}

/// Thin squares with the given boundary.
pub fn thin_fillers(d: &DoubleGC, s: &Shell2) -> Vec<Sq> {
    let thin = thin_set(d);
    d.squares_with_boundary(s.top, s.bottom, s.left, s.right).into_iter().filter(|&x| thin.contains(x)).collect()
}

/// The unique thin square with boundary `s`.
pub fn thin_filler(d: &DoubleGC, s: &Shell2) -> Result<Sq, ThinError> {
    if !s.is_valid(d) {
        return Err(ThinError::ShellMismatch(format!("edges {} do not form a shell", s.names(d))));
    }
    match thin_fillers(d, s).as_slice() {
        [] => Err(ThinError::NoThinFiller(s.names(d))),
        [x] => Ok(*x),
        many => Err(ThinError::MultipleThinFillers { shell: s.names(d), count: many.len() }),
    }
}

/// Checks T0 to T3 and reports each separately.
pub fn check_thin_axioms(d: &DoubleGC) -> Report {
    let thin = thin_set(d);
    let mut r = Report::new("thin-axioms");
    for s in thin.members() {
        r.record("T0", Shell2::of(d, s).commutes(d), || vec![d.sq_name(s).to_owned(), Shell2::of(d, s).names(d)]);
    }
    for shell in all_shells(d).into_iter().filter(|s| s.commutes(d)) {
        let n = thin_fillers(d, &shell).len();
        r.record("T1", n == 1, || vec![shell.names(d), format!("fillers={n}")]);
    }
    for x in d.objects() {
        let s = d.double_degeneracy(x);
        r.record("T2.identities", thin.contains(s), || vec![d.sq_name(s).to_owned()]);
    }
    for e in d.edges() {
        for s in [d.eps1(e), d.eps2(e), d.gamma(Sign::Minus, e), d.gamma(Sign::Plus, e)] {
            r.record("T2.identities", thin.contains(s), || vec![d.edge_name(e).to_owned(), d.sq_name(s).to_owned()]);
        }
    }
    for dir in Dir::BOTH {
        for (a, b, c) in d.compose_entries(dir) {
            if thin.contains(a) && thin.contains(b) {
                r.record("T2.closure", thin.contains(c), || {
                    vec![format!("dir={}", dir.number()), d.sq_name(a).to_owned(), d.sq_name(b).to_owned()]
                });
            }
        }
    }
    // a thin square whose sides are identities has equal top and bottom and
    // must be the identity on that edge for the second composition
    let mut relative = 0usize;
    for s in thin.members() {
        if d.is_identity_edge(d.left(s)) && d.is_identity_edge(d.right(s)) {
            relative += 1;
            let top = d.top(s);
            r.record("T3", d.bottom(s) == top && s == d.eps1(top), || vec![d.sq_name(s).to_owned()]);
        }
        if d.is_identity_edge(d.top(s)) && d.is_identity_edge(d.bottom(s)) {
            let left = d.left(s);
            r.record("T3.transposed", d.right(s) == left && s == d.eps2(left), || vec![d.sq_name(s).to_owned()]);
        }
    }
    r.set("thin_squares", thin.len());
    r.set("squares", d.num_squares());
    r.set("relative_homotopies", relative);
    r
}

fn relative_thin(d: &DoubleGC, s: Sq) -> bool {
    is_thin(d, s) && d.is_identity_edge(d.left(s)) && d.is_identity_edge(d.right(s))
}

/// Searches for a commutative cube from `u` to `v` whose other four faces
/// are thin relative homotopies.
pub fn thinly_equivalent(d: &DoubleGC, u: Sq, v: Sq, budget: usize) -> Result<bool, ThinError> {
    if Shell2::of(d, u) != Shell2::of(d, v) {
        return Err(ThinError::ShellMismatch(format!("{} and {} have different boundaries", d.sq_name(u), d.sq_name(v))));
    }
    let mut fixed = [None; 6];
    fixed[0] = Some(u);
    fixed[1] = Some(v);
    let filter = |k: usize, s: Sq| k < 2 || relative_thin(d, s);
    let mut seen = 0usize;
    let mut outcome: Result<bool, ThinError> = Ok(false);
    for_each_cube(d, fixed, Some(&filter), &mut |c| {
        seen += 1;
        if seen > budget {
            outcome = Err(ThinError::SearchBudgetExceeded(budget));
            return ControlFlow::Break(());
        }
        match is_commutative(d, &c) {
            Ok(true) => {
                outcome = Ok(true);
                ControlFlow::Break(())
            }
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                outcome = Err(e.into());
                ControlFlow::Break(())
            }
        }
    });
    outcome
}

/// Thinly equivalent squares must coincide. Checks every pair with a common
/// boundary; pairs whose search runs out of budget are counted as unknown.
pub fn rigidity_check(d: &DoubleGC, budget: usize) -> Report {
    let mut r = Report::new("rigidity");
    let mut by_shell: BTreeMap<Shell2, Vec<Sq>> = BTreeMap::new();
    for s in d.squares() {
        by_shell.entry(Shell2::of(d, s)).or_default().push(s);
    }
    let (mut equivalent, mut inequivalent, mut unknown) = (0usize, 0usize, 0usize);
    for group in by_shell.values() {
        for &u in group {
            for &v in group {
                match thinly_equivalent(d, u, v, budget) {
                    Ok(te) => {
                        if te {
                            equivalent += 1;
                        } else {
                            inequivalent += 1;
                        }
                        let names = || vec![d.sq_name(u).to_owned(), d.sq_name(v).to_owned()];
                        if u == v {
                            r.record("reflexive", te, names);
                        } else {
                            r.record("equivalent-implies-equal", !te, names);
                        }
                    }
                    Err(ThinError::SearchBudgetExceeded(_)) => {
                        unknown += 1;
                        r.note("unknown", vec![d.sq_name(u).to_owned(), d.sq_name(v).to_owned()]);
                    }
                    Err(e) => r.record("search-error", false, || vec![e.to_string()]),
                }
            }
        }
    }
    r.set("pairs_equivalent", equivalent);
    r.set("pairs_inequivalent", inequivalent);
    r.set("pairs_unknown", unknown);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, indiscrete_groupoid, product_double, sphere_model, square_model, trivial_category};

    #[test]
    fn zz2_is_all_thin() {
        let d = square_model(&cyclic_group(2));
        assert_eq!(thin_set(&d).len(), 8);
        for s in d.squares() {
            let w = thin_set(&d).witness(s).unwrap();
            assert_eq!(w.evaluate(&d).unwrap(), s, "{}", w.display(&d));
        }
    }

    #[test]
    fn trivial_model() {
        let d = square_model(&trivial_category());
        assert_eq!(thin_set(&d).members().collect::<Vec<_>>(), vec![Sq(0)]);
        assert!(check_thin_axioms(&d).is_ok());
    }

    #[test]
    fn sphere_thin_squares_are_the_zero_square() {
        let d = product_double(&square_model(&cyclic_group(2)), &sphere_model(3));
        assert_eq!(thin_set(&d).len(), 8);
        assert!(thin_set(&d).members().all(|s| d.sq_name(s).ends_with(".s0")));
        let r = check_thin_axioms(&d);
        assert!(r.is_ok(), "{}", r.to_text());
    }

    #[test]
    fn filler_of_gamma_minus_shell() {
        let d = square_model(&cyclic_group(2));
        let (z, o) = (d.edge_by_name("0").unwrap(), d.edge_by_name("1").unwrap());
        let shell = Shell2 { left: o, bottom: z, top: o, right: z };
        assert_eq!(thin_filler(&d, &shell).unwrap(), d.gamma(Sign::Minus, o));
        let bad = Shell2 { left: o, bottom: z, top: z, right: z };
        assert!(matches!(thin_filler(&d, &bad), Err(ThinError::NoThinFiller(_))));
        let x = d.obj_by_name("*").unwrap();
        let odot = d.double_degeneracy(x);
        assert_eq!(thin_filler(&d, &Shell2::of(&d, odot)).unwrap(), odot);
    }

    #[test]
    fn cancellation_through_witness() {
        let d = square_model(&indiscrete_groupoid(2));
        let a = d.edge_by_name("0>1").unwrap();
        let w = ThinExpr::Compose(
            Dir::One,
            Box::new(ThinExpr::Gamma(Sign::Plus, a)),
            Box::new(ThinExpr::Gamma(Sign::Minus, a)),
        );
        assert_eq!(w.evaluate(&d).unwrap(), d.eps2(a));
    }

    #[test]
    fn axioms_on_indiscrete() {
        let r = check_thin_axioms(&square_model(&indiscrete_groupoid(2)));
        assert!(r.is_ok(), "{}", r.to_text());
        assert!(r.check("T3").unwrap().passed > 0);
    }

    #[test]
    fn rigidity_with_extra_component() {
        let d = product_double(&square_model(&cyclic_group(2)), &sphere_model(2));
        let u = d.sq_by_name("0|0|0|0.s0").unwrap();
        let v = d.sq_by_name("0|0|0|0.s1").unwrap();
        assert!(thinly_equivalent(&d, u, u, DEFAULT_EQUIVALENCE_BUDGET).unwrap());
        assert!(!thinly_equivalent(&d, u, v, DEFAULT_EQUIVALENCE_BUDGET).unwrap());
        let r = rigidity_check(&d, DEFAULT_EQUIVALENCE_BUDGET);
        assert!(r.is_ok(), "{}", r.to_text());
    }
}
