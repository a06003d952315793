//! Step-by-step derivations that commutative cubes compose to commutative
//! cubes, one per direction, replayed on concrete cube pairs.
//!
//! For a pair `α, β` composable in direction `k`, the faces are bound as
//! `a1m .. a3p`, `b1m .. b3p` and those of `γ = α +ₖ β` as `c1m .. c3p`.
//! Each chain starts at the odd composite of `γ` and ends at the even one
//! (for direction 3, at the two sides of the three-row form).

use std::collections::HashMap;

use super::{parse_script, solve, Env, Expr, PastingError, Target};
use crate::double::{DoubleGC, Sign, Sq};
use crate::report::Report;
use crate::shells::{all_cubes, compose_cubes, composite, is_commutative, Composite, Cube3, Shell2, ShellError};

pub const PLUS1_CHAIN: &str = "\
# composition in direction 1
[G+(_), c1m, G-(_); c3m, c2p, e2(_)]
= [G+(_), a1m, G-(_); [a3m; b3m], [a2p; b2p], e2(_)]
= [G+(_), a1m, G-(_); a3m, a2p, e2(_); b3m, b2p, e2(_)]
= [e2(_), a2m, a3p; G+(_), a1p, G-(_); b3m, b2p, e2(_)]
= [e2(_), a2m, a3p; G+(_), b1m, G-(_); b3m, b2p, e2(_)]
= [e2(_), a2m, a3p; e2(_), b2m, b3p; G+(_), b1p, G-(_)]
= [e2(_), [a2m; b2m], [a3p; b3p]; G+(_), b1p, G-(_)]
= [e2(_), c2m, c3p; G+(_), c1p, G-(_)]
";

pub const PLUS2_CHAIN: &str = "\
# composition in direction 2
[G+(_), c1m, G-(_); c3m, c2p, e2(_)]
= [G+(_), [a1m; b1m], G-(_); [a3m, b3m], b2p, e2(_)]
= [G+(_), e2(_), a1m, G-(_), e1(_); e1(_), G+(_), b1m, e2(_), G-(_); a3m, b3m, b2p, e2(_), e2(_)]
= [G+(_), e2(_), a1m, G-(_), e1(_); a3m, e2(_), b2m, e2(_), b3p; e1(_), G+(_), b1p, e2(_), G-(_)]
= [G+(_), e2(_), a1m, G-(_), e1(_); a3m, e2(_), a2p, e2(_), b3p; e1(_), G+(_), b1p, e2(_), G-(_)]
= [e2(_), e2(_), a2m, a3p, b3p; G+(_), e2(_), a1p, G-(_), e1(_); e1(_), G+(_), b1p, e2(_), G-(_)]
= [e2(_), c2m, c3p; G+(_), c1p, G-(_)]
";

pub const PLUS3_CHAIN: &str = "\
# composition in direction 3, three-row form
[G+(_), c1m; c3m, c2p; G-(_), e1(_)]
= [G+(_), [a1m, b1m]; a3m, [a2p, b2p]; G-(_), e1(_)]
= [G+(_), a1m, b1m; a3m, a2p, b2p; G-(_), e1(_), e1(_)]
= [e1(_), G+(_), b1m; a2m, a3p, b2p; a1p, G-(_), e1(_)]
= [e1(_), G+(_), b1m; a2m, b3m, b2p; a1p, G-(_), e1(_)]
= [e1(_), e1(_), G+(_); a2m, b2m, b3p; a1p, b1p, G-(_)]
= [e1(_), G+(_); c2m, c3p; c1p, G-(_)]
";

pub fn chain_text(dir: u8) -> Option<&'static str> {
    match dir {
        1 => Some(PLUS1_CHAIN),
        2 => Some(PLUS2_CHAIN),
        3 => Some(PLUS3_CHAIN),
        _ => None,
    }
}

/// The parsed steps of the chain for direction `dir`.
pub fn chain_steps(dir: u8) -> Result<Vec<Expr>, PastingError> {
    let text = chain_text(dir).ok_or_else(|| PastingError::TargetShape(format!("no chain for direction {dir}")))?;
    let script = parse_script(text)?;
    Ok(script.derivations().into_iter().next().unwrap_or_default().into_iter().cloned().collect())
}

fn pair_env(a: &Cube3, b: &Cube3, c: &Cube3) -> Env {
    let mut env = Env::new();
    a.bind(&mut env, "a");
    b.bind(&mut env, "b");
    c.bind(&mut env, "c");
    env
}

fn step_value(d: &DoubleGC, env: &Env, expr: &Expr, shell: Shell2) -> Result<Sq, PastingError> {
    match solve(d, env, expr, &Target::Free) {
        Ok(s) => super::evaluate(d, env, &s),
        Err(PastingError::AmbiguousSlot { .. }) => {
            let s = solve(d, env, expr, &Target::Shell(shell))?;
            super::evaluate(d, env, &s)
        }
        Err(e) => Err(e),
    }
}

/// Outcome of replaying one chain on one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReplay {
    pub values: Vec<Sq>,
    /// The two composites the chain should start and end at.
    pub expected: (Sq, Sq),
}

impl PairReplay {
    pub fn steps_equal(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn endpoints_match(&self) -> bool {
        self.values.first() == Some(&self.expected.0) && self.values.last() == Some(&self.expected.1)
    }
}

/// Evaluates every step of `steps` for the pair `a +_dir b`.
pub fn replay_pair(d: &DoubleGC, dir: u8, steps: &[Expr], a: &Cube3, b: &Cube3) -> Result<PairReplay, ShellError> {
    let c = compose_cubes(d, dir, a, b)?;
    let (first, last) = if dir == 3 { (Composite::HclPrimeOdd, Composite::HclPrimeEven) } else { (Composite::Odd, Composite::Even) };
    let expected = (composite(d, &c, first)?, composite(d, &c, last)?);
    let env = pair_env(a, b, &c);
    let shell = Shell2::of(d, expected.0);
    let mut values = Vec::with_capacity(steps.len());
    for e in steps {
        values.push(step_value(d, &env, e, shell)?);
    }
    Ok(PairReplay { values, expected })
}

/// Replays the chains for directions `dirs` on every composable pair of
/// commutative cubes, up to `max_pairs` per direction.
pub fn derivation_harness(d: &DoubleGC, dirs: &[u8], max_pairs: usize) -> Result<Report, ShellError> {
    let mut r = Report::new("derivation-replay");
    let mut comm = Vec::new();
    for c in all_cubes(d) {
        if is_commutative(d, &c)? {
            comm.push(c);
        }
    }
    r.set("commutative_cubes", comm.len());
    for &dir in dirs {
        let steps = chain_steps(dir)?;
        let mut by_face: HashMap<Sq, Vec<usize>> = HashMap::new();
        for (i, c) in comm.iter().enumerate() {
            by_face.entry(c.face(dir, Sign::Minus)).or_default().push(i);
        }
        let mut pairs = 0usize;
        'outer: for a in &comm {
            for &j in by_face.get(&a.face(dir, Sign::Plus)).into_iter().flatten() {
                if pairs == max_pairs {
                    break 'outer;
                }
                pairs += 1;
                let b = &comm[j];
                let witness = || {
                    let mut w = vec![format!("dir={dir}")];
                    w.extend(a.names(d));
                    w.extend(b.names(d));
                    w
                };
                match replay_pair(d, dir, &steps, a, b) {
                    Ok(p) => {
                        r.record(&format!("step-equal.dir{dir}"), p.steps_equal(), || {
                            let mut w = witness();
                            w.extend(p.values.iter().map(|&s| d.sq_name(s).to_owned()));
                            w
                        });
                        r.record(&format!("endpoints.dir{dir}"), p.endpoints_match(), witness);
                    }
                    Err(e) => r.record(&format!("step-equal.dir{dir}"), false, || {
                        let mut w = witness();
                        w.push(e.to_string());
                        w
                    }),
                }
            }
        }
        r.set(&format!("pairs.dir{dir}"), pairs);
        r.set(&format!("steps.dir{dir}"), steps.len());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, indiscrete_groupoid, square_model};

    #[test]
    fn chains_parse() {
        assert_eq!(chain_steps(1).unwrap().len(), 8);
        assert_eq!(chain_steps(2).unwrap().len(), 7);
        assert_eq!(chain_steps(3).unwrap().len(), 7);
        assert!(chain_steps(4).is_err());
    }

    #[test]
    fn replay_on_a_few_zz2_pairs() {
        let d = square_model(&cyclic_group(2));
        let r = derivation_harness(&d, &[1, 2, 3], 40).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
        assert_eq!(r.check("endpoints.dir3").unwrap().passed, 40);
    }

    #[test]
    fn replay_on_indiscrete_pairs() {
        let d = square_model(&indiscrete_groupoid(2));
        let r = derivation_harness(&d, &[1, 2, 3], 25).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
    }
}
