mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubal::cli::parse_catspec;
use cubal::colimits::{coequalise, factor_through, find_morphisms, validate_morphism, Partial, DEFAULT_BUDGET};
use cubal::format::{parse_model, write_model};
use cubal::models::{cyclic_group, indiscrete_groupoid, klein_group, square_model};
use cubal::shells::{compose_cubes, is_commutative, sample_cube, Shell2};
use cubal::thin::{is_thin, thin_fillers};
use cubal::{validate, Cube3, Dir, DoubleGC, DoubleMorphism};

fn model(i: usize) -> DoubleGC {
    match i % 4 {
        0 => square_model(&cyclic_group(3)),
        1 => square_model(&klein_group()),
        2 => square_model(&indiscrete_groupoid(3)),
        _ => square_model(&parse_catspec("Z2*ind2").unwrap()),
    }
}

fn catspec() -> impl Strategy<Value = String> {
    let atom = prop_oneof![(1usize..5).prop_map(|n| format!("Z{n}")), (1usize..3).prop_map(|n| format!("ind{n}")), Just("klein".to_owned())];
    (atom.clone(), proptest::option::of(atom), any::<bool>()).prop_map(|(a, b, sum)| match b {
        Some(b) => format!("{a}{}{b}", if sum { "+" } else { "*" }),
        None => a,
    })
    .prop_filter("small enough to check exhaustively", |s| parse_catspec(s).unwrap().num_arrows() <= 9)
}

/// A cube `β` that can follow `α` in direction `k`.
fn follower(d: &DoubleGC, a: &Cube3, k: u8, rng: &mut ChaCha8Rng) -> Option<Cube3> {
    let mut fixed = [None; 6];
    let k = (k - 1) as usize;
    fixed[2 * k] = Some(a.faces()[2 * k + 1]);
    sample_cube(d, fixed, rng)
}

fn image(f: &DoubleMorphism, c: &Cube3) -> Cube3 {
    Cube3::new(f.target(), c.faces().map(|s| f.sq(s))).expect("morphisms carry cubes to cubes")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composites_of_commutative_cubes_commute(m in 0usize..4, k in 1u8..=3, seed in any::<u64>()) {
        let d = model(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_cube(&d, [None; 6], &mut rng).unwrap();
        let b = follower(&d, &a, k, &mut rng).unwrap();
        prop_assert!(is_commutative(&d, &a).unwrap() && is_commutative(&d, &b).unwrap());
        let c = compose_cubes(&d, k, &a, &b).unwrap();
        prop_assert!(is_commutative(&d, &c).unwrap());
    }

    #[test]
    fn cube_composition_is_associative(m in 0usize..4, k in 1u8..=3, seed in any::<u64>()) {
        let d = model(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_cube(&d, [None; 6], &mut rng).unwrap();
        let b = follower(&d, &a, k, &mut rng).unwrap();
        let c = follower(&d, &b, k, &mut rng).unwrap();
        let left = compose_cubes(&d, k, &compose_cubes(&d, k, &a, &b).unwrap(), &c).unwrap();
        let right = compose_cubes(&d, k, &a, &compose_cubes(&d, k, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.faces(), right.faces());
    }

    #[test]
    fn square_models_validate_and_are_thin(spec in catspec()) {
        let d = square_model(&parse_catspec(&spec).unwrap());
        prop_assert!(validate(&d).is_ok());
        for s in d.squares() {
            let shell = Shell2::of(&d, s);
            prop_assert!(shell.commutes(&d));
            prop_assert!(is_thin(&d, s));
            prop_assert_eq!(thin_fillers(&d, &shell), vec![s]);
        }
    }

    #[test]
    fn model_text_round_trips(spec in catspec()) {
        let d = square_model(&parse_catspec(&spec).unwrap());
        let text = write_model(&d);
        let e = parse_model(&text).unwrap();
        prop_assert_eq!(write_model(&e), text);
    }

    #[test]
    fn interchange_on_random_grids(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        // in ⊡Z3 a grid is fixed by its vertical edges and its top row
        let c = cyclic_group(3);
        let d = square_model(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = |i: usize| d.edge_by_name(&c.arrows()[i].name).unwrap();
        let vert: Vec<Vec<usize>> = (0..rows).map(|_| (0..=cols).map(|_| rng.random_range(0..3)).collect()).collect();
        let mut top: Vec<usize> = (0..cols).map(|_| rng.random_range(0..3)).collect();
        let mut grid = Vec::new();
        for row in &vert {
            let mut sq = Vec::new();
            let mut bottom = Vec::new();
            for j in 0..cols {
                let (l, t, r) = (row[j], top[j], row[j + 1]);
                let b = c.comp(c.inverse(l).unwrap(), c.comp(t, r).unwrap()).unwrap();
                let found = d.squares_with_boundary(e(t), e(b), e(l), e(r));
                prop_assert_eq!(found.len(), 1);
                sq.push(found[0]);
                bottom.push(b);
            }
            grid.push(sq);
            top = bottom;
        }
        let fold = |xs: Vec<cubal::Sq>, dir: Dir| xs.into_iter().reduce(|a, b| d.compose(dir, a, b).unwrap()).unwrap();
        let by_rows = fold(grid.iter().map(|r| fold(r.clone(), Dir::Two)).collect(), Dir::One);
        let by_cols = fold((0..cols).map(|j| fold(grid.iter().map(|r| r[j]).collect(), Dir::One)).collect(), Dir::Two);
        prop_assert_eq!(by_rows, by_cols);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn morphisms_preserve_commutativity_and_thinness(pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let s = Arc::new(square_model(&indiscrete_groupoid(2)));
        let t = Arc::new(square_model(&klein_group()));
        let maps = find_morphisms(&s, &t, &Partial::free(&s), usize::MAX);
        let f = pick.get(&maps);
        prop_assert!(validate_morphism(f).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample_cube(&s, [None; 6], &mut rng).unwrap();
        prop_assert!(is_commutative(&t, &image(f, &c)).unwrap());
        for q in s.squares() {
            prop_assert!(!is_thin(&s, q) || is_thin(&t, f.sq(q)));
        }
    }

    #[test]
    fn coequalisers_of_endomorphism_pairs(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let d = Arc::new(square_model(&cyclic_group(4)));
        let ends = find_morphisms(&d, &d, &Partial::free(&d), usize::MAX);
        let (a, b) = (i.get(&ends), j.get(&ends));
        let q = coequalise(a, b, DEFAULT_BUDGET).unwrap();
        prop_assert!(q.is_finite());
        let obj = q.object.as_ref().unwrap();
        let p = q.projection.as_ref().unwrap();
        prop_assert!(validate(obj).is_ok());
        prop_assert!(a.then(p).unwrap().same_maps(&b.then(p).unwrap()));
        let id = factor_through(&q, p).unwrap();
        prop_assert!(id.same_maps(&DoubleMorphism::identity(obj)));
        let again = coequalise(a, b, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(write_model(again.object.as_ref().unwrap()), write_model(obj));
    }
}
