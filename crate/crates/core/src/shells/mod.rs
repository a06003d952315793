//! 2-shells, cubes (3-shells), their compositions, and the commutativity
//! condition for cubes.
//!
//! Cube faces are indexed `(i, σ)` with `i ∈ {1,2,3}`. Cube edges are named
//! by the direction they run in and their fixed coordinates: `e3(x1,x2)`,
//! `e2(x1,x3)` and `e1(x2,x3)`; vertices are `v(x1,x2,x3)`.

pub mod cube;
pub mod harness;

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::double::{Dir, DoubleGC, Edge, Obj, Side, Sign, Sq};
use crate::pastings::{self, Env, Expr, PartitionedShell, PastingError, Target};

pub use cube::{all_cubes, for_each_cube, sample_cube, CubeFilter};
pub use harness::{hcl_agreement, theorem25_harness, triple_interchange_check, HarnessConfig};

/// A square boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Shell2 {
    pub left: Edge,
    pub bottom: Edge,
    pub top: Edge,
    pub right: Edge,
}

impl Shell2 {
    pub fn of(d: &DoubleGC, s: Sq) -> Shell2 {
        Shell2 { left: d.left(s), bottom: d.bottom(s), top: d.top(s), right: d.right(s) }
    }

    /// The corner conditions of a 2-shell.
    pub fn is_valid(&self, d: &DoubleGC) -> bool {
        d.src(self.left) == d.src(self.top)
            && d.tgt(self.left) == d.src(self.bottom)
            && d.tgt(self.top) == d.src(self.right)
            && d.tgt(self.bottom) == d.tgt(self.right)
    }

    /// `left + bottom = top + right`.
    pub fn commutes(&self, d: &DoubleGC) -> bool {
        let lb = d.compose_edges_opt(self.left, self.bottom);
        lb.is_some() && lb == d.compose_edges_opt(self.top, self.right)
    }

    pub fn names(&self, d: &DoubleGC) -> String {
        format!(
            "(left={}, bottom={}, top={}, right={})",
            d.edge_name(self.left),
            d.edge_name(self.bottom),
            d.edge_name(self.top),
            d.edge_name(self.right)
        )
    }
}

pub fn boundary_shell(d: &DoubleGC, s: Sq) -> Shell2 {
    Shell2::of(d, s)
}

pub fn shell_commutes(d: &DoubleGC, s: &Shell2) -> bool {
    s.commutes(d)
}

/// All valid 2-shells of a model, top edge first.
pub fn all_shells(d: &DoubleGC) -> Vec<Shell2> {
    let mut out = Vec::new();
    for top in d.edges() {
        for left in d.edges_from(d.src(top)).iter().copied() {
            for right in d.edges_from(d.tgt(top)).iter().copied() {
                for bottom in d.edges_from(d.tgt(left)).iter().copied() {
                    if d.tgt(bottom) == d.tgt(right) {
                        out.push(Shell2 { left, bottom, top, right });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShellError {
    #[error("not a cube: {0}")]
    InvalidCube(String),
    #[error("cubes are not composable in direction {0}")]
    NotComposable(u8),
    #[error("face composition undefined while composing cubes in direction {dir}: {detail}")]
    FaceCompositionUndefined { dir: u8, detail: String },
    #[error("direction must be 1, 2 or 3, got {0}")]
    BadDirection(u8),
    #[error(transparent)]
    Pasting(#[from] PastingError),
}

pub(crate) fn face_index(i: u8, sign: Sign) -> usize {
    2 * (i as usize - 1) + usize::from(sign == Sign::Plus)
}

/// Face names in storage order.
pub const FACE_NAMES: [&str; 6] = ["1m", "1p", "2m", "2p", "3m", "3p"];

/// The square direction used for cube direction `k` inside a face.
fn side_dir(k: u8) -> Dir {
    if k == 1 {
        Dir::One
    } else {
        Dir::Two
    }
}

/// The twelve face relations: `∂ᵢ^σ α_j^τ = ∂_{j-1}^τ α_i^σ` for `i < j`,
/// as `((face, side), (face, side))` pairs.
pub fn relations() -> Vec<((usize, Side), (usize, Side))> {
    let mut out = Vec::with_capacity(12);
    for i in 1u8..=3 {
        for j in (i + 1)..=3 {
            for sigma in Sign::BOTH {
                for tau in Sign::BOTH {
                    let lhs = (face_index(j, tau), Side::of(side_dir(i), sigma));
                    let rhs = (face_index(i, sigma), Side::of(side_dir(j - 1), tau));
                    out.push((lhs, rhs));
                }
            }
        }
    }
    out
}

/// Six squares satisfying the cube face relations, stored as
/// `(α₁⁻, α₁⁺, α₂⁻, α₂⁺, α₃⁻, α₃⁺)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cube3 {
    faces: [Sq; 6],
}

impl Cube3 {
    pub fn new(d: &DoubleGC, faces: [Sq; 6]) -> Result<Cube3, ShellError> {
        for ((a, sa), (b, sb)) in relations() {
            if d.side(faces[a], sa) != d.side(faces[b], sb) {
                return Err(ShellError::InvalidCube(format!(
                    "{} of face {} is {}, but {} of face {} is {}",
                    sa,
                    FACE_NAMES[a],
                    d.edge_name(d.side(faces[a], sa)),
                    sb,
                    FACE_NAMES[b],
                    d.edge_name(d.side(faces[b], sb))
                )));
            }
        }
        Ok(Cube3 { faces })
    }

    pub(crate) fn new_unchecked(faces: [Sq; 6]) -> Cube3 {
        Cube3 { faces }
    }

    pub fn faces(&self) -> [Sq; 6] {
        self.faces
    }

    pub fn face(&self, i: u8, sign: Sign) -> Sq {
        self.faces[face_index(i, sign)]
    }

    /// Edge in direction 3 at `(x1, x2)`.
    pub fn e3(&self, d: &DoubleGC, x1: u8, x2: u8) -> Edge {
        let f = self.face(1, if x1 == 0 { Sign::Minus } else { Sign::Plus });
        if x2 == 0 {
            d.top(f)
        } else {
            d.bottom(f)
        }
    }

    /// Edge in direction 2 at `(x1, x3)`.
    pub fn e2(&self, d: &DoubleGC, x1: u8, x3: u8) -> Edge {
        let f = self.face(1, if x1 == 0 { Sign::Minus } else { Sign::Plus });
        if x3 == 0 {
            d.left(f)
        } else {
            d.right(f)
        }
    }

    /// Edge in direction 1 at `(x2, x3)`.
    pub fn e1(&self, d: &DoubleGC, x2: u8, x3: u8) -> Edge {
        let f = self.face(2, if x2 == 0 { Sign::Minus } else { Sign::Plus });
        if x3 == 0 {
            d.left(f)
        } else {
            d.right(f)
        }
    }

    pub fn vertex(&self, d: &DoubleGC, x1: u8, x2: u8, x3: u8) -> Obj {
        let e = self.e3(d, x1, x2);
        if x3 == 0 {
            d.src(e)
        } else {
            d.tgt(e)
        }
    }

    pub fn names(&self, d: &DoubleGC) -> Vec<String> {
        self.faces.iter().map(|&s| d.sq_name(s).to_owned()).collect()
    }

    /// Binds `{p}1m`, `{p}1p`, ..., `{p}3p` to the faces.
    pub fn bind(&self, env: &mut Env, prefix: &str) {
        for (k, name) in FACE_NAMES.iter().enumerate() {
            env.square(&format!("{prefix}{name}"), self.faces[k]);
        }
    }
}

/// Cube with all faces `⊙ₓ`.
pub fn odot_cube(d: &DoubleGC, x: Obj) -> Cube3 {
    Cube3 { faces: [d.double_degeneracy(x); 6] }
}

/// The identity cube for composition in direction `dir` whose two
/// `dir`-faces are `s`.
pub fn identity_cube(d: &DoubleGC, dir: u8, s: Sq) -> Result<Cube3, ShellError> {
    let (t, b, l, r) = (d.top(s), d.bottom(s), d.left(s), d.right(s));
    let faces = match dir {
        1 => [s, s, d.eps1(t), d.eps1(b), d.eps1(l), d.eps1(r)],
        2 => [d.eps1(t), d.eps1(b), s, s, d.eps2(l), d.eps2(r)],
        3 => [d.eps2(t), d.eps2(b), d.eps2(l), d.eps2(r), s, s],
        other => return Err(ShellError::BadDirection(other)),
    };
    Cube3::new(d, faces)
}

/// Composes cubes in direction `dir ∈ {1,2,3}`.
pub fn compose_cubes(d: &DoubleGC, dir: u8, a: &Cube3, b: &Cube3) -> Result<Cube3, ShellError> {
    if !(1..=3).contains(&dir) {
        return Err(ShellError::BadDirection(dir));
    }
    if a.face(dir, Sign::Plus) != b.face(dir, Sign::Minus) {
        return Err(ShellError::NotComposable(dir));
    }
    let comp = |sd: Dir, i: u8, sign: Sign| -> Result<Sq, ShellError> {
        let (x, y) = (a.face(i, sign), b.face(i, sign));
        d.compose(sd, x, y).map_err(|e| ShellError::FaceCompositionUndefined { dir, detail: e.to_string() })
    };
    use Sign::{Minus as M, Plus as P};
    let faces = match dir {
        1 => [a.face(1, M), b.face(1, P), comp(Dir::One, 2, M)?, comp(Dir::One, 2, P)?, comp(Dir::One, 3, M)?, comp(Dir::One, 3, P)?],
        2 => [comp(Dir::One, 1, M)?, comp(Dir::One, 1, P)?, a.face(2, M), b.face(2, P), comp(Dir::Two, 3, M)?, comp(Dir::Two, 3, P)?],
        _ => [comp(Dir::Two, 1, M)?, comp(Dir::Two, 1, P)?, comp(Dir::Two, 2, M)?, comp(Dir::Two, 2, P)?, a.face(3, M), b.face(3, P)],
    };
    Cube3::new(d, faces)
}

const ODD: &str = "[?, a1m, ?; a3m, a2p, ?]";
const EVEN: &str = "[?, a2m, a3p; ?, a1p, ?]";
const HCL_PRIME_ODD: &str = "[?, a1m; a3m, a2p; ?, ?]";
const HCL_PRIME_EVEN: &str = "[?, ?; a2m, a3p; a1p, ?]";

fn template(slot: &'static OnceLock<Expr>, text: &str) -> &'static Expr {
    slot.get_or_init(|| pastings::parse(text).expect("built-in array parses"))
}

fn odd_expr() -> &'static Expr {
    static E: OnceLock<Expr> = OnceLock::new();
    template(&E, ODD)
}

fn even_expr() -> &'static Expr {
    static E: OnceLock<Expr> = OnceLock::new();
    template(&E, EVEN)
}

fn hcl_prime_odd_expr() -> &'static Expr {
    static E: OnceLock<Expr> = OnceLock::new();
    template(&E, HCL_PRIME_ODD)
}

fn hcl_prime_even_expr() -> &'static Expr {
    static E: OnceLock<Expr> = OnceLock::new();
    template(&E, HCL_PRIME_EVEN)
}

/// The boundary pieces of the odd composite, one edge per array cell.
/// The two composites share a boundary but not its subdivision.
fn odd_target(d: &DoubleGC, c: &Cube3) -> PartitionedShell {
    let eps = |x1, x2, x3| d.eps(c.vertex(d, x1, x2, x3));
    PartitionedShell {
        top: vec![eps(0, 0, 0), c.e3(d, 0, 0), c.e2(d, 0, 1)],
        left: vec![eps(0, 0, 0), c.e1(d, 0, 0)],
        right: vec![eps(0, 1, 1), c.e1(d, 1, 1)],
        bottom: vec![c.e2(d, 1, 0), c.e3(d, 1, 1), eps(1, 1, 1)],
    }
}

fn even_target(d: &DoubleGC, c: &Cube3) -> PartitionedShell {
    let eps = |x1, x2, x3| d.eps(c.vertex(d, x1, x2, x3));
    PartitionedShell {
        top: vec![eps(0, 0, 0), c.e3(d, 0, 0), c.e2(d, 0, 1)],
        left: vec![c.e1(d, 0, 0), eps(1, 0, 0)],
        right: vec![c.e1(d, 1, 1), eps(1, 1, 1)],
        bottom: vec![c.e2(d, 1, 0), c.e3(d, 1, 1), eps(1, 1, 1)],
    }
}

fn hcl_prime_odd_target(d: &DoubleGC, c: &Cube3) -> PartitionedShell {
    let eps = |x1, x2, x3| d.eps(c.vertex(d, x1, x2, x3));
    PartitionedShell {
        top: vec![eps(0, 0, 0), c.e3(d, 0, 0)],
        left: vec![eps(0, 0, 0), c.e1(d, 0, 0), c.e2(d, 1, 0)],
        right: vec![c.e2(d, 0, 1), c.e1(d, 1, 1), eps(1, 1, 1)],
        bottom: vec![eps(1, 1, 0), c.e3(d, 1, 1)],
    }
}

fn hcl_prime_even_target(d: &DoubleGC, c: &Cube3) -> PartitionedShell {
    let eps = |x1, x2, x3| d.eps(c.vertex(d, x1, x2, x3));
    PartitionedShell {
        top: vec![c.e3(d, 0, 0), eps(0, 0, 1)],
        left: vec![eps(0, 0, 0), c.e1(d, 0, 0), c.e2(d, 1, 0)],
        right: vec![c.e2(d, 0, 1), c.e1(d, 1, 1), eps(1, 1, 1)],
        bottom: vec![c.e3(d, 1, 1), eps(1, 1, 1)],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composite {
    Odd,
    Even,
    HclPrimeOdd,
    HclPrimeEven,
}

/// The composite array with its thin slots solved.
pub fn solved_array(d: &DoubleGC, c: &Cube3, which: Composite) -> Result<Expr, ShellError> {
    let mut env = Env::new();
    c.bind(&mut env, "a");
    let (expr, target) = match which {
        Composite::Odd => (odd_expr(), odd_target(d, c)),
        Composite::Even => (even_expr(), even_target(d, c)),
        Composite::HclPrimeOdd => (hcl_prime_odd_expr(), hcl_prime_odd_target(d, c)),
        Composite::HclPrimeEven => (hcl_prime_even_expr(), hcl_prime_even_target(d, c)),
    };
    Ok(pastings::solve(d, &env, expr, &Target::Partitioned(target))?)
}

pub fn composite(d: &DoubleGC, c: &Cube3, which: Composite) -> Result<Sq, ShellError> {
    let solved = solved_array(d, c, which)?;
    Ok(pastings::evaluate(d, &Env::new(), &solved)?)
}

/// Composite of the faces `α₁⁻, α₃⁻, α₂⁺`, padded with thin squares.
pub fn odd_composite(d: &DoubleGC, c: &Cube3) -> Result<Sq, ShellError> {
    composite(d, c, Composite::Odd)
}

/// Composite of the faces `α₁⁺, α₃⁺, α₂⁻`, padded with thin squares.
pub fn even_composite(d: &DoubleGC, c: &Cube3) -> Result<Sq, ShellError> {
    composite(d, c, Composite::Even)
}

pub fn is_commutative(d: &DoubleGC, c: &Cube3) -> Result<bool, ShellError> {
    Ok(odd_composite(d, c)? == even_composite(d, c)?)
}

/// The two sides of the three-row form of the commutativity equation.
pub fn hcl_prime_sides(d: &DoubleGC, c: &Cube3) -> Result<(Sq, Sq), ShellError> {
    Ok((composite(d, c, Composite::HclPrimeOdd)?, composite(d, c, Composite::HclPrimeEven)?))
}

pub fn hcl_prime_holds(d: &DoubleGC, c: &Cube3) -> Result<bool, ShellError> {
    let (l, r) = hcl_prime_sides(d, c)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, product_double, sphere_model, square_model};

    #[test]
    fn shell_commutation_in_z2() {
        let d = square_model(&cyclic_group(2));
        let (z, o) = (d.edge_by_name("0").unwrap(), d.edge_by_name("1").unwrap());
        assert!(Shell2 { left: o, bottom: o, top: z, right: z }.commutes(&d));
        assert!(!Shell2 { left: o, bottom: z, top: z, right: z }.commutes(&d));
        let x = d.obj_by_name("*").unwrap();
        assert!(Shell2::of(&d, d.double_degeneracy(x)).commutes(&d));
    }

    #[test]
    fn eps1_boundary() {
        let d = square_model(&cyclic_group(3));
        let a = d.edge_by_name("2").unwrap();
        let s = Shell2::of(&d, d.eps1(a));
        let id = d.eps(d.src(a));
        assert_eq!(s, Shell2 { left: id, bottom: a, top: a, right: id });
    }

    #[test]
    fn twelve_relations() {
        assert_eq!(relations().len(), 12);
    }

    #[test]
    fn odot_cube_composites() {
        let d = square_model(&cyclic_group(2));
        let x = d.obj_by_name("*").unwrap();
        let c = odot_cube(&d, x);
        assert_eq!(odd_composite(&d, &c).unwrap(), d.double_degeneracy(x));
        assert_eq!(even_composite(&d, &c).unwrap(), d.double_degeneracy(x));
        assert!(hcl_prime_holds(&d, &c).unwrap());
    }

    #[test]
    fn sphere_cube_composites_are_face_sums() {
        let d = sphere_model(5);
        let s = |i: usize| d.sq_by_name(&format!("s{i}")).unwrap();
        let c = Cube3::new(&d, [s(1), s(2), s(3), s(4), s(0), s(1)]).unwrap();
        // odd: 1m + 3m + 2p = 1 + 0 + 4; even: 2m + 1p + 3p = 3 + 2 + 1
        assert_eq!(odd_composite(&d, &c).unwrap(), s(0));
        assert_eq!(even_composite(&d, &c).unwrap(), s(1));
        assert!(!is_commutative(&d, &c).unwrap());
        assert!(!hcl_prime_holds(&d, &c).unwrap());
    }

    #[test]
    fn identity_cubes_are_units() {
        let d = product_double(&square_model(&cyclic_group(2)), &sphere_model(2));
        for c in all_cubes(&d).into_iter().step_by(97) {
            for dir in 1..=3u8 {
                let id = identity_cube(&d, dir, c.face(dir, Sign::Plus)).unwrap();
                assert_eq!(compose_cubes(&d, dir, &c, &id).unwrap(), c);
            }
        }
    }

    #[test]
    fn composing_mismatched_cubes_fails() {
        let d = sphere_model(2);
        let s = |i: usize| d.sq_by_name(&format!("s{i}")).unwrap();
        let a = Cube3::new(&d, [s(0); 6]).unwrap();
        let b = Cube3::new(&d, [s(1); 6]).unwrap();
        assert_eq!(compose_cubes(&d, 1, &a, &b), Err(ShellError::NotComposable(1)));
        assert_eq!(compose_cubes(&d, 4, &a, &b), Err(ShellError::BadDirection(4)));
    }

    #[test]
    fn thin_slots_are_the_expected_connections() {
        use crate::pastings::Leaf;
        use rand::SeedableRng;
        let d = square_model(&crate::models::indiscrete_groupoid(3));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let resolved = |e: &Expr| -> Vec<Sq> {
            e.leaves().iter().map(|l| match l {
                Leaf::Resolved(s) => *s,
                other => panic!("unsolved slot {other:?}"),
            }).collect()
        };
        for _ in 0..200 {
            let c = sample_cube(&d, [None; 6], &mut rng).unwrap();
            let f = |i, sign| c.face(i, sign);
            let (m, p) = (Sign::Minus, Sign::Plus);
            let odd = resolved(&solved_array(&d, &c, Composite::Odd).unwrap());
            assert_eq!(odd[0], d.gamma(p, d.left(f(1, m))));
            assert_eq!(odd[2], d.gamma(m, d.right(f(1, m))));
            assert_eq!(odd[5], d.eps2(d.right(f(2, p))));
            let even = resolved(&solved_array(&d, &c, Composite::Even).unwrap());
            assert_eq!(even[0], d.eps2(d.left(f(2, m))));
            assert_eq!(even[3], d.gamma(p, d.left(f(1, p))));
            assert_eq!(even[5], d.gamma(m, d.right(f(1, p))));
        }
    }
}
