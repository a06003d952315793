//! Closure of commutative cubes under composition, the triple-category
//! laws, and agreement of the two commutativity forms.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    all_cubes, compose_cubes, composite, hcl_prime_sides, identity_cube, is_commutative, sample_cube, Composite, Cube3,
    ShellError, Shell2,
};
use crate::double::{DoubleGC, Sign};
use crate::report::Report;

/// Exhaustive enumeration is used up to this many squares.
pub const EXHAUSTIVE_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct HarnessConfig {
    /// `Some(true)` forces enumeration, `Some(false)` forces sampling;
    /// `None` decides by [`EXHAUSTIVE_LIMIT`].
    pub exhaustive: Option<bool>,
    /// Pairs sampled per direction.
    pub samples: usize,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { exhaustive: None, samples: 10_000, seed: 0 }
    }
}

impl HarnessConfig {
    pub fn use_exhaustive(&self, d: &DoubleGC) -> bool {
        self.exhaustive.unwrap_or(d.num_squares() <= EXHAUSTIVE_LIMIT)
    }
}

fn witness(d: &DoubleGC, dir: u8, a: &Cube3, b: &Cube3) -> Vec<String> {
    let mut w = vec![format!("dir={dir}"), "alpha".to_owned()];
    w.extend(a.names(d));
    w.push("beta".into());
    w.extend(b.names(d));
    w
}

/// Draws a commutative cube matching `fixed`, retrying a bounded number of
/// times.
fn draw(d: &DoubleGC, fixed: [Option<crate::double::Sq>; 6], rng: &mut ChaCha8Rng) -> Result<Option<Cube3>, ShellError> {
    for _ in 0..64 {
        let Some(c) = sample_cube(d, fixed, rng) else { return Ok(None) };
        if is_commutative(d, &c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Checks that composites of commutative cubes are commutative in each
/// direction, exhaustively or by sampling.
pub fn theorem25_harness(d: &DoubleGC, cfg: &HarnessConfig) -> Result<Report, ShellError> {
    let mut r = Report::new("theorem25");
    let exhaustive = cfg.use_exhaustive(d);
    r.set("mode", if exhaustive { "exhaustive" } else { "sampled" });
    if exhaustive {
        let cubes = all_cubes(d);
        let mut comm = Vec::new();
        for c in &cubes {
            if is_commutative(d, c)? {
                comm.push(*c);
            }
        }
        r.set("cubes", cubes.len());
        r.set("commutative_cubes", comm.len());
        for dir in 1..=3u8 {
            let mut by_face: HashMap<_, Vec<&Cube3>> = HashMap::new();
            for c in &comm {
                by_face.entry(c.face(dir, Sign::Minus)).or_default().push(c);
            }
            let mut pairs = 0usize;
            for a in &comm {
                for b in by_face.get(&a.face(dir, Sign::Plus)).into_iter().flatten() {
                    pairs += 1;
                    let ab = compose_cubes(d, dir, a, b)?;
                    let ok = is_commutative(d, &ab)?;
                    r.record(&format!("composite-commutative.dir{dir}"), ok, || witness(d, dir, a, b));
                }
            }
            r.set(&format!("pairs.dir{dir}"), pairs);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for dir in 1..=3u8 {
            let mut pairs = 0usize;
            let mut misses = 0usize;
            while pairs < cfg.samples && misses < cfg.samples.max(100) {
                let Some(a) = draw(d, [None; 6], &mut rng)? else {
                    misses += 1;
                    continue;
                };
                let mut fixed = [None; 6];
                fixed[super::face_index(dir, Sign::Minus)] = Some(a.face(dir, Sign::Plus));
                let Some(b) = draw(d, fixed, &mut rng)? else {
                    misses += 1;
                    continue;
                };
                pairs += 1;
                let ab = compose_cubes(d, dir, &a, &b)?;
                let ok = is_commutative(d, &ab)?;
                r.record(&format!("composite-commutative.dir{dir}"), ok, || witness(d, dir, &a, &b));
            }
            r.set(&format!("pairs.dir{dir}"), pairs);
            r.set(&format!("misses.dir{dir}"), misses);
        }
    }
    Ok(r)
}

/// Compares the two commutativity forms on the given cubes and checks that
/// each pair of composites shares a boundary. The first few cubes that are
/// not commutative are kept as notes.
pub fn hcl_agreement(d: &DoubleGC, cubes: &[Cube3]) -> Result<Report, ShellError> {
    let mut r = Report::new("hcl-agreement");
    let mut noncomm = 0usize;
    for c in cubes {
        let odd = composite(d, c, Composite::Odd)?;
        let even = composite(d, c, Composite::Even)?;
        let (lp, rp) = hcl_prime_sides(d, c)?;
        r.record("odd-even-shells-equal", Shell2::of(d, odd) == Shell2::of(d, even), || c.names(d));
        r.record("hcl-prime-shells-equal", Shell2::of(d, lp) == Shell2::of(d, rp), || c.names(d));
        r.record("hcl-iff-hcl-prime", (odd == even) == (lp == rp), || c.names(d));
        if odd != even {
            noncomm += 1;
            if noncomm <= 3 {
                r.note("non-commutative-witness", c.names(d));
            }
        }
    }
    r.set("cubes", cubes.len());
    r.set("non_commutative", noncomm);
    Ok(r)
}

/// Associativity and pairwise interchange of the three cube compositions on
/// sampled commutative cubes, plus unit laws for identity cubes.
pub fn triple_interchange_check(d: &DoubleGC, samples: usize, seed: u64) -> Result<Report, ShellError> {
    let mut r = Report::new("triple-interchange");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fix = |pairs: &[(u8, Cube3, u8)]| {
        let mut f = [None; 6];
        for &(dir, ref c, from) in pairs {
            f[super::face_index(dir, Sign::Minus)] = Some(c.face(from, Sign::Plus));
        }
        f
    };
    for _ in 0..samples {
        let Some(a) = draw(d, [None; 6], &mut rng)? else { continue };
        for dir in 1..=3u8 {
            let id = identity_cube(d, dir, a.face(dir, Sign::Plus))?;
            r.record("identity-cube", compose_cubes(d, dir, &a, &id)? == a, || a.names(d));
            let Some(b) = draw(d, fix(&[(dir, a, dir)]), &mut rng)? else { continue };
            let Some(c) = draw(d, fix(&[(dir, b, dir)]), &mut rng)? else { continue };
            let lhs = compose_cubes(d, dir, &compose_cubes(d, dir, &a, &b)?, &c)?;
            let rhs = compose_cubes(d, dir, &a, &compose_cubes(d, dir, &b, &c)?)?;
            r.record(&format!("assoc.dir{dir}"), lhs == rhs, || a.names(d));
            r.record("closure", is_commutative(d, &lhs)?, || lhs.names(d));
        }
        for (i, j) in [(1u8, 2u8), (1, 3), (2, 3)] {
            let Some(b) = draw(d, fix(&[(i, a, i)]), &mut rng)? else { continue };
            let Some(g) = draw(d, fix(&[(j, a, j)]), &mut rng)? else { continue };
            let mut f = fix(&[(i, g, i)]);
            f[super::face_index(j, Sign::Minus)] = Some(b.face(j, Sign::Plus));
            let Some(dl) = draw(d, f, &mut rng)? else { continue };
            let lhs = compose_cubes(d, j, &compose_cubes(d, i, &a, &b)?, &compose_cubes(d, i, &g, &dl)?)?;
            let rhs = compose_cubes(d, i, &compose_cubes(d, j, &a, &g)?, &compose_cubes(d, j, &b, &dl)?)?;
            r.record(&format!("interchange.{i}{j}"), lhs == rhs, || a.names(d));
        }
    }
    r.set("samples", samples);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, product_double, sphere_model, square_model};

    #[test]
    fn exhaustive_on_zz2() {
        let d = square_model(&cyclic_group(2));
        let r = theorem25_harness(&d, &HarnessConfig::default()).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
        assert_eq!(r.get("mode"), Some("exhaustive"));
        assert!(r.check("composite-commutative.dir3").unwrap().passed > 0);
    }

    #[test]
    fn agreement_with_non_commutative_cubes() {
        let d = product_double(&square_model(&cyclic_group(2)), &sphere_model(2));
        let cubes: Vec<Cube3> = all_cubes(&d).into_iter().step_by(5).collect();
        let r = hcl_agreement(&d, &cubes).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
        assert!(r.get("non_commutative").unwrap().parse::<usize>().unwrap() > 0);
    }

    #[test]
    fn triple_laws_sampled() {
        let d = product_double(&square_model(&cyclic_group(2)), &sphere_model(3));
        let r = triple_interchange_check(&d, 20, 1).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
        assert!(r.check("interchange.13").is_some());
    }
}
