//! Derivation scripts.
//!
//! ```text
//! # comment
//! let u = [G+(a), e2(a)]
//! [u; e1(a)]          # starts a derivation
//! = [...]             # next step, asserted equal to the previous one
//! ```

use super::parse::{is_name_char, parse_at};
use super::{solve, Env, Expr, PastingError, Target, Value};
use crate::double::{DoubleGC, Sq};
use crate::report::Report;
use crate::shells::Shell2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Let { name: String, expr: Expr, line: usize },
    Step { expr: Expr, line: usize, continues: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl Script {
    /// Step expressions grouped by derivation.
    pub fn derivations(&self) -> Vec<Vec<&Expr>> {
        let mut out: Vec<Vec<&Expr>> = Vec::new();
        for s in &self.stmts {
            if let Stmt::Step { expr, continues, .. } = s {
                if *continues && !out.is_empty() {
                    out.last_mut().expect("non-empty").push(expr);
                } else {
                    out.push(vec![expr]);
                }
            }
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_script(text: &str) -> Result<Script, PastingError> {
    let mut stmts = Vec::new();
    let mut started = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let syntax = |col: usize, message: &str| PastingError::SyntaxError { line: line_no, col, message: message.into() };
        if let Some(rest) = trimmed.strip_prefix('=') {
            if !started {
                return Err(syntax(indent + 1, "`=` continues a derivation, but none has started"));
            }
            let expr = parse_at(rest, line_no).map_err(|e| shift(e, indent + 1))?;
            stmts.push(Stmt::Step { expr, line: line_no, continues: true });
        } else if let Some(rest) = trimmed.strip_prefix("let").filter(|r| r.starts_with(char::is_whitespace)) {
            let body = rest.trim_start();
            let name: String = body.chars().take_while(|&c| is_name_char(c)).collect();
            if name.is_empty() {
                return Err(syntax(indent + 4, "expected a name after `let`"));
            }
            let after = body[name.len()..].trim_start();
            let Some(def) = after.strip_prefix('=') else {
                return Err(syntax(indent + 4, "expected `=` in `let`"));
            };
            let offset = line.len() - def.len();
            let expr = parse_at(def, line_no).map_err(|e| shift(e, offset))?;
            stmts.push(Stmt::Let { name, expr, line: line_no });
        } else {
            let expr = parse_at(trimmed, line_no).map_err(|e| shift(e, indent))?;
            stmts.push(Stmt::Step { expr, line: line_no, continues: false });
            started = true;
        }
    }
    Ok(Script { stmts })
}

fn shift(e: PastingError, by: usize) -> PastingError {
    match e {
        PastingError::SyntaxError { line, col, message } => PastingError::SyntaxError { line, col: col + by, message },
        other => other,
    }
}

/// Solves without a target, falling back to the boundary of the previous
/// step when the seams alone leave a slot open.
fn step_value(d: &DoubleGC, env: &Env, expr: &Expr, prev: Option<Sq>) -> Result<Sq, PastingError> {
    match solve(d, env, expr, &Target::Free) {
        Ok(s) => super::evaluate(d, env, &s),
        Err(PastingError::AmbiguousSlot { .. }) if prev.is_some() => {
            let target = Target::Shell(Shell2::of(d, prev.expect("checked")));
            let s = solve(d, env, expr, &target)?;
            super::evaluate(d, env, &s)
        }
        Err(e) => Err(e),
    }
}

/// Evaluates a chain and fails at the first step that differs from its
/// predecessor.
pub fn replay_chain(d: &DoubleGC, env: &Env, steps: &[&Expr]) -> Result<Vec<Sq>, PastingError> {
    let mut out: Vec<Sq> = Vec::with_capacity(steps.len());
    for (i, e) in steps.iter().enumerate() {
        let v = step_value(d, env, e, out.last().copied())?;
        if let Some(&p) = out.last() {
            if p != v {
                return Err(PastingError::StepMismatch {
                    step: i + 1,
                    expected: d.sq_name(p).to_owned(),
                    found: d.sq_name(v).to_owned(),
                });
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Values of every step, grouped by derivation, after binding the lets.
pub fn run_script(d: &DoubleGC, env: &Env, script: &Script) -> Result<Vec<Vec<Sq>>, PastingError> {
    let mut env = env.clone();
    let mut out: Vec<Vec<Sq>> = Vec::new();
    for s in &script.stmts {
        match s {
            Stmt::Let { name, expr, .. } => {
                let v = step_value(d, &env, expr, None)?;
                env.bind(name, Value::Square(v));
            }
            Stmt::Step { expr, continues, .. } => {
                let prev = if *continues { out.last().and_then(|v| v.last().copied()) } else { None };
                let v = step_value(d, &env, expr, prev)?;
                if *continues && !out.is_empty() {
                    out.last_mut().expect("non-empty").push(v);
                } else {
                    out.push(vec![v]);
                }
            }
        }
    }
    Ok(out)
}

/// Runs a script and reports equality of consecutive steps.
pub fn replay(d: &DoubleGC, env: &Env, script: &Script) -> Result<Report, PastingError> {
    let values = run_script(d, env, script)?;
    let mut r = Report::new("replay");
    for (k, chain) in values.iter().enumerate() {
        for (i, w) in chain.windows(2).enumerate() {
            r.record("step-equal", w[0] == w[1], || {
                vec![
                    format!("derivation={}", k + 1),
                    format!("step={}", i + 2),
                    d.sq_name(w[0]).to_owned(),
                    d.sq_name(w[1]).to_owned(),
                ]
            });
        }
        if chain.len() == 1 {
            r.record("step-equal", true, Vec::new);
        }
    }
    r.set("derivations", values.len());
    r.set("steps", values.iter().map(Vec::len).sum::<usize>());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cyclic_group, square_model};

    #[test]
    fn parses_lets_steps_and_comments() {
        let s = parse_script("# header\nlet u = [G+(1), G-(1)]\nu   # start\n= e1(1)\n\n[e2(0)]\n").unwrap();
        assert_eq!(s.stmts.len(), 4);
        assert_eq!(s.derivations().len(), 2);
        assert_eq!(s.derivations()[0].len(), 2);
    }

    #[test]
    fn continuation_without_start_is_an_error() {
        assert!(matches!(parse_script("= [u]"), Err(PastingError::SyntaxError { line: 1, .. })));
    }

    #[test]
    fn cancellation_script_replays() {
        let d = square_model(&cyclic_group(2));
        let s = parse_script("[G+(1); G-(1)]\n= e2(1)\n[G+(1), G-(1)]\n= e1(1)\n").unwrap();
        let r = replay(&d, &Env::new(), &s).unwrap();
        assert!(r.is_ok(), "{}", r.to_text());
        assert_eq!(r.check("step-equal").unwrap().passed, 2);
    }

    #[test]
    fn mismatch_is_reported() {
        let d = square_model(&cyclic_group(2));
        let s = parse_script("e1(1)\n= e1(0)\n").unwrap();
        let r = replay(&d, &Env::new(), &s).unwrap();
        assert_eq!(r.failures(), 1);
        let steps: Vec<Expr> = s.derivations()[0].iter().map(|e| (*e).clone()).collect();
        let refs: Vec<&Expr> = steps.iter().collect();
        assert!(matches!(replay_chain(&d, &Env::new(), &refs), Err(PastingError::StepMismatch { step: 2, .. })));
    }

    #[test]
    fn single_step_passes() {
        let d = square_model(&cyclic_group(2));
        let r = replay(&d, &Env::new(), &parse_script("[e1(1)]").unwrap()).unwrap();
        assert!(r.is_ok());
    }
}
