//! Enumeration and sampling of cubes by face-by-face backtracking.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{relations, Cube3};
use crate::double::{DoubleGC, Side, Sq};

/// Fill order when nothing is fixed: each face after the first meets an
/// earlier one along at least one edge.
const DEFAULT_ORDER: [usize; 6] = [0, 2, 4, 3, 1, 5];

/// Restricts candidate squares per face index.
pub type CubeFilter<'a> = &'a dyn Fn(usize, Sq) -> bool;

struct Filler<'a> {
    d: &'a DoubleGC,
    order: Vec<usize>,
    fixed: [Option<Sq>; 6],
    filter: Option<CubeFilter<'a>>,
    /// For each face, relations to faces filled earlier.
    links: Vec<Vec<(Side, usize, Side)>>,
}

impl<'a> Filler<'a> {
    fn new(d: &'a DoubleGC, fixed: [Option<Sq>; 6], filter: Option<CubeFilter<'a>>) -> Self {
        let mut order: Vec<usize> = (0..6).filter(|&k| fixed[k].is_some()).collect();
        order.extend(DEFAULT_ORDER.iter().copied().filter(|&k| fixed[k].is_none()));
        let mut rank = [0usize; 6];
        for (i, &k) in order.iter().enumerate() {
            rank[k] = i;
        }
        let mut links = vec![Vec::new(); 6];
        for ((a, sa), (b, sb)) in relations() {
            if rank[a] > rank[b] {
                links[a].push((sa, b, sb));
            } else {
                links[b].push((sb, a, sa));
            }
        }
        Filler { d, order, fixed, filter, links }
    }

    fn candidates(&self, k: usize, faces: &[Sq; 6]) -> Vec<Sq> {
        let d = self.d;
        let links = &self.links[k];
        let ok = |s: Sq| {
            links.iter().all(|&(side, other, other_side)| d.side(s, side) == d.side(faces[other], other_side))
                && self.filter.is_none_or(|f| f(k, s))
        };
        if let Some(s) = self.fixed[k] {
            return if ok(s) { vec![s] } else { Vec::new() };
        }
        match links.first() {
            Some(&(side, other, other_side)) => {
                let e = d.side(faces[other], other_side);
                d.squares_with(side, e).iter().copied().filter(|&s| ok(s)).collect()
            }
            None => d.squares().filter(|&s| ok(s)).collect(),
        }
    }

    fn run(&self, depth: usize, faces: &mut [Sq; 6], visit: &mut dyn FnMut(Cube3) -> ControlFlow<()>) -> ControlFlow<()> {
        if depth == 6 {
            return visit(Cube3::new_unchecked(*faces));
        }
        let k = self.order[depth];
        for s in self.candidates(k, faces) {
            faces[k] = s;
            self.run(depth + 1, faces, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn sample<R: Rng>(&self, depth: usize, faces: &mut [Sq; 6], rng: &mut R, budget: &mut usize) -> bool {
        if depth == 6 {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let k = self.order[depth];
        let mut cands = self.candidates(k, faces);
        cands.shuffle(rng);
        for s in cands {
            faces[k] = s;
            if self.sample(depth + 1, faces, rng, budget) {
                return true;
            }
        }
        false
    }
}

/// Visits every cube agreeing with `fixed` (and `filter`, when given).
pub fn for_each_cube(
    d: &DoubleGC,
    fixed: [Option<Sq>; 6],
    filter: Option<CubeFilter<'_>>,
    visit: &mut dyn FnMut(Cube3) -> ControlFlow<()>,
) {
    if d.num_squares() == 0 {
        return;
    }
    let f = Filler::new(d, fixed, filter);
    let mut faces = [Sq(0); 6];
    let _ = f.run(0, &mut faces, visit);
}

/// Every cube of the model, in deterministic order.
pub fn all_cubes(d: &DoubleGC) -> Vec<Cube3> {
    let mut out = Vec::new();
    for_each_cube(d, [None; 6], None, &mut |c| {
        out.push(c);
        ControlFlow::Continue(())
    });
    out
}

/// A random cube agreeing with `fixed`, found by randomised backtracking.
/// Returns `None` if none exists within the search budget.
pub fn sample_cube<R: Rng>(d: &DoubleGC, fixed: [Option<Sq>; 6], rng: &mut R) -> Option<Cube3> {
    if d.num_squares() == 0 {
        return None;
    }
    let f = Filler::new(d, fixed, None);
    let mut faces = [Sq(0); 6];
    let mut budget = 100_000;
    f.sample(0, &mut faces, rng, &mut budget).then(|| Cube3::new_unchecked(faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, indiscrete_groupoid, square_model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zz2_cube_count() {
        // 12 edge labels in Z₂ subject to 6 face equations of rank 5
        let d = square_model(&cyclic_group(2));
        let cubes = all_cubes(&d);
        assert_eq!(cubes.len(), 1 << 7);
        for c in &cubes {
            Cube3::new(&d, c.faces()).unwrap();
        }
    }

    #[test]
    fn sampled_cubes_are_valid_and_respect_fixed_faces() {
        let d = square_model(&indiscrete_groupoid(3));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = sample_cube(&d, [None; 6], &mut rng).unwrap();
            Cube3::new(&d, c.faces()).unwrap();
            let mut fixed = [None; 6];
            fixed[2] = Some(c.faces()[3]);
            let e = sample_cube(&d, fixed, &mut rng).unwrap();
            assert_eq!(e.faces()[2], c.faces()[3]);
            Cube3::new(&d, e.faces()).unwrap();
        }
    }
}
