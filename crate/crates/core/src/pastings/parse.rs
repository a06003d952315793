use super::{Arg, Expr, Leaf, PastingError, Pos, Species};

pub(crate) fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !"[](),;=?#".contains(c)
}

struct Parser<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Parser { chars: src.chars().collect(), i: 0, line, col: 1, _src: src }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PastingError> {
        Err(PastingError::SyntaxError { line: self.line, col: self.col, message: message.into() })
    }

    fn expect(&mut self, want: char) -> Result<(), PastingError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected `{want}`, found `{c}`")),
            None => self.err(format!("expected `{want}`, found end of input")),
        }
    }

    fn name(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !is_name_char(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn expr(&mut self) -> Result<Expr, PastingError> {
        self.skip_ws();
        let pos = self.pos();
        match self.peek() {
            None => self.err("expected an expression, found end of input"),
            Some('?') => {
                self.bump();
                Ok(Expr::Leaf { leaf: Leaf::Thin, pos })
            }
            Some('[') => self.array(),
            Some(c) if is_name_char(c) => {
                let name = self.name();
                if self.peek() == Some('(') {
                    let Some(species) = Species::from_keyword(&name) else {
                        return Err(PastingError::SyntaxError {
                            line: pos.line,
                            col: pos.col,
                            message: format!("unknown operator `{name}`"),
                        });
                    };
                    self.bump();
                    self.skip_ws();
                    let arg = self.name();
                    if arg.is_empty() {
                        return self.err("expected an argument name or `_`");
                    }
                    self.expect(')')?;
                    let arg = if arg == "_" { Arg::Hole } else { Arg::Name(arg) };
                    Ok(Expr::Leaf { leaf: Leaf::Apply(species, arg), pos })
                } else if name == "_" {
                    Err(PastingError::SyntaxError {
                        line: pos.line,
                        col: pos.col,
                        message: "`_` is only allowed as an argument".into(),
                    })
                } else {
                    Ok(Expr::Leaf { leaf: Leaf::Named(name), pos })
                }
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn array(&mut self) -> Result<Expr, PastingError> {
        let pos = self.pos();
        self.expect('[')?;
        let mut rows = vec![vec![self.expr()?]];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                    let e = self.expr()?;
                    rows.last_mut().expect("at least one row").push(e);
                }
                Some(';') => {
                    self.bump();
                    rows.push(vec![self.expr()?]);
                }
                Some(']') => {
                    self.bump();
                    break;
                }
                Some(c) => return self.err(format!("expected `,`, `;` or `]`, found `{c}`")),
                None => return self.err("unterminated array"),
            }
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(PastingError::RaggedArray(pos));
        }
        Ok(Expr::Array { rows, pos })
    }
}

/// Parses one expression; positions are 1-based.
pub fn parse(text: &str) -> Result<Expr, PastingError> {
    parse_at(text, 1)
}

pub(crate) fn parse_at(text: &str, line: usize) -> Result<Expr, PastingError> {
    let mut p = Parser::new(text, line);
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return p.err(format!("trailing input starting at `{c}`"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_square_parses() {
        let e = parse("[G+(a), e2(a); e1(a), G+(b)]").unwrap();
        let Expr::Array { rows, .. } = &e else { panic!() };
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].len(), 2);
        assert_eq!(
            e.leaves()[3],
            &Leaf::Apply(Species::GammaPlus, Arg::Name("b".into()))
        );
    }

    #[test]
    fn row_of_references() {
        let e = parse("[u, w]").unwrap();
        assert_eq!(e.leaves(), vec![&Leaf::Named("u".into()), &Leaf::Named("w".into())]);
    }

    #[test]
    fn ragged() {
        assert!(matches!(parse("[u; v, w]"), Err(PastingError::RaggedArray(_))));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("[u,\n  (v]") {
            Err(PastingError::SyntaxError { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("foo(a)"), Err(PastingError::SyntaxError { .. })));
        assert!(matches!(parse("[a, b"), Err(PastingError::SyntaxError { .. })));
        assert!(matches!(parse("a b"), Err(PastingError::SyntaxError { .. })));
    }

    #[test]
    fn names_may_contain_model_punctuation() {
        let e = parse("[0|1|1|0, G-(i>j)]").unwrap();
        assert_eq!(e.leaves()[0], &Leaf::Named("0|1|1|0".into()));
    }
}
