use super::ast::{BinOp, Expr, ExprKind, Func};
use super::lexer::{tokenize, Tok, Token};
use super::{ExprError, ExprErrorKind};

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    /// Errors at the end of input point at the last real token, which is
    /// where the input is incomplete.
    fn error_here(&self, msg: &str) -> ExprError {
        let t = &self.tokens[self.pos];
        let span = if t.tok == Tok::End && self.pos > 0 {
            self.tokens[self.pos - 1].span
        } else {
            t.span
        };
        let found = match &t.tok {
            Tok::End => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        ExprError::new(ExprErrorKind::Syntax, span, format!("{msg} (found {found})"))
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == &Tok::Minus {
            let minus = self.bump();
            let inner = self.factor()?;
            let span = minus.span.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == &Tok::Caret {
            self.bump();
            let exp = self.factor()?;
            let span = base.span.join(exp.span);
            return Ok(Expr::new(ExprKind::Binary(BinOp::Pow, Box::new(base), Box::new(exp)), span));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                let t = self.bump();
                Ok(Expr::new(ExprKind::Num(v), t.span))
            }
            Tok::Var(i) => {
                let t = self.bump();
                Ok(Expr::new(ExprKind::Var(i), t.span))
            }
            Tok::LParen => {
                let open = self.bump();
                let inner = self.expr()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.error_here("expected `)`"));
                }
                let close = self.bump();
                Ok(Expr::new(inner.kind, open.span.join(close.span)))
            }
            Tok::Ident(name) => {
                let t = self.bump();
                if self.peek() != &Tok::LParen {
                    if name == "x" {
                        return Err(ExprError::new(
                            ExprErrorKind::Syntax,
                            t.span,
                            "bare `x` is only allowed as the argument of norm",
                        ));
                    }
                    return Err(ExprError::new(
                        ExprErrorKind::Syntax,
                        t.span,
                        format!("unknown identifier `{name}`"),
                    ));
                }
                let func = Func::from_name(&name).ok_or_else(|| {
                    ExprError::new(
                        ExprErrorKind::UnknownFunction,
                        t.span,
                        format!("unknown function `{name}`"),
                    )
                })?;
                self.bump();
                let args = self.arguments(func)?;
                if self.peek() != &Tok::RParen {
                    return Err(self.error_here("expected `,` or `)`"));
                }
                let close = self.bump();
                let span = t.span.join(close.span);
                if func.is_unary() && args.len() != 1 {
                    return Err(ExprError::new(
                        ExprErrorKind::Arity,
                        span,
                        format!("`{name}` takes exactly one argument, got {}", args.len()),
                    ));
                }
                Ok(Expr::new(ExprKind::Call(func, args), span))
            }
            _ => Err(self.error_here("expected a number, variable, call or `(`")),
        }
    }

    fn arguments(&mut self, func: Func) -> Result<Vec<Expr>, ExprError> {
        // norm(x): whole-vector norm
        if func == Func::Norm {
            if let (Tok::Ident(name), Some(next)) = (self.peek(), self.tokens.get(self.pos + 1)) {
                if name == "x" && next.tok == Tok::RParen {
                    let t = self.bump();
                    return Ok(vec![Expr::new(ExprKind::Vector, t.span)]);
                }
            }
        }
        let mut args = vec![self.expr()?];
        while self.peek() == &Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        Ok(args)
    }
}
