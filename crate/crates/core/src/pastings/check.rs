use super::{Arg, Env, Expr, Leaf, PastingError, Species};
use crate::double::{Dir, DoubleGC, Edge, Sign, Sq};
use crate::shells::Shell2;

/// Outer boundary of a typechecked expression, with the partition of each
/// side induced by the top-level cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryScheme {
    pub shell: Shell2,
    pub top: Vec<Edge>,
    pub bottom: Vec<Edge>,
    pub left: Vec<Edge>,
    pub right: Vec<Edge>,
}

pub(crate) fn species_square(d: &DoubleGC, sp: Species, e: Edge) -> Sq {
    match sp {
        Species::Eps1 => d.eps1(e),
        Species::Eps2 => d.eps2(e),
        Species::GammaMinus => d.gamma(Sign::Minus, e),
        Species::GammaPlus => d.gamma(Sign::Plus, e),
        Species::Odot => unreachable!("⊙ takes an object"),
    }
}

pub(crate) fn concrete_leaf(d: &DoubleGC, env: &Env, expr: &Expr) -> Result<Sq, PastingError> {
    let Expr::Leaf { leaf, pos } = expr else { unreachable!("called on leaves only") };
    let pos = *pos;
    let unbound = |name: &str| PastingError::UnboundName { name: name.to_owned(), pos };
    match leaf {
        Leaf::Resolved(s) => Ok(*s),
        Leaf::Named(n) => env.resolve_square(d, n).ok_or_else(|| unbound(n)),
        Leaf::Apply(Species::Odot, Arg::Name(n)) => {
            if let Some(x) = env.resolve_object(d, n) {
                return Ok(d.double_degeneracy(x));
            }
            // ⊙ of an identity edge is accepted as well
            let e = env.resolve_edge(d, n).ok_or_else(|| unbound(n))?;
            Ok(d.double_degeneracy(d.src(e)))
        }
        Leaf::Apply(sp, Arg::Name(n)) => {
            let e = env.resolve_edge(d, n).ok_or_else(|| unbound(n))?;
            Ok(species_square(d, *sp, e))
        }
        Leaf::Thin | Leaf::Apply(_, Arg::Hole) => Err(PastingError::UnresolvedPlaceholder(pos)),
    }
}

type Sides = [Edge; 4];
const TOP: usize = 0;
const BOTTOM: usize = 1;
const LEFT: usize = 2;
const RIGHT: usize = 3;

fn sides_of(d: &DoubleGC, s: Sq) -> Sides {
    [d.top(s), d.bottom(s), d.left(s), d.right(s)]
}

fn path(d: &DoubleGC, edges: &[Edge]) -> Result<Edge, PastingError> {
    let mut acc = edges[0];
    for &e in &edges[1..] {
        acc = d.compose_edges(acc, e)?;
    }
    Ok(acc)
}

fn check_node(d: &DoubleGC, env: &Env, expr: &Expr) -> Result<Sides, PastingError> {
    match expr {
        Expr::Leaf { .. } => Ok(sides_of(d, concrete_leaf(d, env, expr)?)),
        Expr::Array { rows, pos } => {
            let cells: Vec<Vec<Sides>> = rows
                .iter()
                .map(|row| row.iter().map(|c| check_node(d, env, c)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            let (nr, nc) = (cells.len(), cells[0].len());
            for i in 0..nr {
                for j in 0..nc {
                    if j + 1 < nc && cells[i][j][RIGHT] != cells[i][j + 1][LEFT] {
                        return Err(PastingError::SeamMismatch {
                            pos: *pos,
                            row: i,
                            col: j,
                            seam: "right/left".into(),
                            expected: d.edge_name(cells[i][j][RIGHT]).to_owned(),
                            found: d.edge_name(cells[i][j + 1][LEFT]).to_owned(),
                        });
                    }
                    if i + 1 < nr && cells[i][j][BOTTOM] != cells[i + 1][j][TOP] {
                        return Err(PastingError::SeamMismatch {
                            pos: *pos,
                            row: i,
                            col: j,
                            seam: "bottom/top".into(),
                            expected: d.edge_name(cells[i][j][BOTTOM]).to_owned(),
                            found: d.edge_name(cells[i + 1][j][TOP]).to_owned(),
                        });
                    }
                }
            }
            let top: Vec<Edge> = cells[0].iter().map(|c| c[TOP]).collect();
            let bottom: Vec<Edge> = cells[nr - 1].iter().map(|c| c[BOTTOM]).collect();
            let left: Vec<Edge> = cells.iter().map(|r| r[0][LEFT]).collect();
            let right: Vec<Edge> = cells.iter().map(|r| r[nc - 1][RIGHT]).collect();
            Ok([path(d, &top)?, path(d, &bottom)?, path(d, &left)?, path(d, &right)?])
        }
    }
}

/// Checks every seam of a concrete expression without evaluating it.
pub fn typecheck(d: &DoubleGC, env: &Env, expr: &Expr) -> Result<BoundaryScheme, PastingError> {
    let sides = check_node(d, env, expr)?;
    let shell = Shell2 { top: sides[TOP], bottom: sides[BOTTOM], left: sides[LEFT], right: sides[RIGHT] };
    let parts = match expr {
        Expr::Leaf { .. } => [vec![sides[TOP]], vec![sides[BOTTOM]], vec![sides[LEFT]], vec![sides[RIGHT]]],
        Expr::Array { rows, .. } => {
            let cell = |c: &Expr| check_node(d, env, c);
            let top = rows[0].iter().map(|c| cell(c).map(|s| s[TOP])).collect::<Result<_, _>>()?;
            let bottom = rows[rows.len() - 1].iter().map(|c| cell(c).map(|s| s[BOTTOM])).collect::<Result<_, _>>()?;
            let left = rows.iter().map(|r| cell(&r[0]).map(|s| s[LEFT])).collect::<Result<_, _>>()?;
            let right = rows.iter().map(|r| cell(&r[r.len() - 1]).map(|s| s[RIGHT])).collect::<Result<_, _>>()?;
            [top, bottom, left, right]
        }
    };
    let [top, bottom, left, right] = parts;
    Ok(BoundaryScheme { shell, top, bottom, left, right })
}

fn fold(d: &DoubleGC, env: &Env, expr: &Expr, row_major: bool) -> Result<Sq, PastingError> {
    match expr {
        Expr::Leaf { .. } => concrete_leaf(d, env, expr),
        Expr::Array { rows, .. } => {
            let vals: Vec<Vec<Sq>> = rows
                .iter()
                .map(|r| r.iter().map(|c| fold(d, env, c, row_major)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            let line = |items: &mut dyn Iterator<Item = Sq>, dir: Dir| -> Result<Sq, PastingError> {
                let mut acc = items.next().expect("arrays are non-empty");
                for s in items {
                    acc = d.compose(dir, acc, s)?;
                }
                Ok(acc)
            };
            if row_major {
                let row_vals = vals
                    .iter()
                    .map(|r| line(&mut r.iter().copied(), Dir::Two))
                    .collect::<Result<Vec<_>, _>>()?;
                line(&mut row_vals.into_iter(), Dir::One)
            } else {
                let ncols = vals[0].len();
                let col_vals = (0..ncols)
                    .map(|j| line(&mut vals.iter().map(|r| r[j]), Dir::One))
                    .collect::<Result<Vec<_>, _>>()?;
                line(&mut col_vals.into_iter(), Dir::Two)
            }
        }
    }
}

/// Typechecks, then folds row-major: `+₂` along rows, then `+₁` down.
pub fn evaluate(d: &DoubleGC, env: &Env, expr: &Expr) -> Result<Sq, PastingError> {
    typecheck(d, env, expr)?;
    fold(d, env, expr, true)
}

/// Column-major fold, for checking order independence.
pub fn evaluate_column_major(d: &DoubleGC, env: &Env, expr: &Expr) -> Result<Sq, PastingError> {
    typecheck(d, env, expr)?;
    fold(d, env, expr, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, square_model};
    use crate::pastings::{parse, Value};

    fn zz2() -> DoubleGC {
        square_model(&cyclic_group(2))
    }

    #[test]
    fn cancellation_in_a_row() {
        let d = zz2();
        let v = evaluate(&d, &Env::new(), &parse("[G+(1), G-(1)]").unwrap()).unwrap();
        assert_eq!(v, d.eps1(d.edge_by_name("1").unwrap()));
    }

    #[test]
    fn gamma_minus_transport_instance() {
        let d = zz2();
        let v = evaluate(&d, &Env::new(), &parse("[G-(1), e1(1); e2(1), G-(1)]").unwrap()).unwrap();
        let x = d.obj_by_name("*").unwrap();
        assert_eq!(v, d.double_degeneracy(x));
        assert_eq!(v, d.gamma(Sign::Minus, d.edge_by_name("0").unwrap()));
    }

    #[test]
    fn gamma_plus_transport_shell() {
        let d = zz2();
        let mut env = Env::new();
        let one = d.edge_by_name("1").unwrap();
        env.bind("a", Value::Edge(one)).bind("b", Value::Edge(one));
        let scheme = typecheck(&d, &env, &parse("[G+(a), e2(a); e1(a), G+(b)]").unwrap()).unwrap();
        let zero = d.edge_by_name("0").unwrap();
        assert_eq!(scheme.shell, Shell2::of(&d, d.gamma(Sign::Plus, zero)));
        assert_eq!(scheme.top.len(), 2);
    }

    #[test]
    fn single_leaf() {
        let d = zz2();
        let u = d.squares().nth(3).unwrap();
        let mut env = Env::new();
        env.square("u", u);
        assert_eq!(evaluate(&d, &env, &parse("u").unwrap()).unwrap(), u);
        assert_eq!(evaluate(&d, &env, &parse("[u]").unwrap()).unwrap(), u);
    }

    #[test]
    fn vertical_mismatch() {
        let d = zz2();
        let mut env = Env::new();
        let u = d.squares().find(|&s| d.edge_name(d.bottom(s)) == "1").unwrap();
        let v = d.squares().find(|&s| d.edge_name(d.top(s)) == "0").unwrap();
        env.square("u", u).square("v", v);
        assert!(matches!(
            typecheck(&d, &env, &parse("[u; v]").unwrap()),
            Err(PastingError::SeamMismatch { .. })
        ));
    }

    #[test]
    fn unbound_and_unsolved() {
        let d = zz2();
        assert!(matches!(evaluate(&d, &Env::new(), &parse("nope").unwrap()), Err(PastingError::UnboundName { .. })));
        assert!(matches!(
            evaluate(&d, &Env::new(), &parse("[?]").unwrap()),
            Err(PastingError::UnresolvedPlaceholder(_))
        ));
    }
}
