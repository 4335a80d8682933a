//! Parser and evaluator for scalar expressions of the time variable `t`.
//!
//! Grammar: `t`, float literals, `+ - * / ^`, `sin`, `cos`, `exp`, `log`
//! (natural logarithm) and parentheses. `^` is right-associative and binds
//! tighter than unary minus, so `-t^2` reads as `-(t^2)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
}

/// Syntax tree of a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Time,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Time => t,
            Expr::Neg(e) => -e.eval(t),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(t), b.eval(t));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let v = e.eval(t);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Time | Expr::Call(..) => 5,
        }
    }
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

// The printer parenthesizes exactly where reparsing would otherwise regroup,
// so parse -> print -> parse returns a structurally identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    // negative literals only arise from folded input like "-3";
                    // print parenthesized-free via Neg form instead
                    write!(f, "-{}", -v)
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Time => write!(f, "t"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, 3)
            }
            Expr::Bin(op, a, b) => match op {
                BinOp::Add => {
                    child(f, a, 1)?;
                    write!(f, " + ")?;
                    // right operand must outrank +, else reparsing regroups
                    // left-associatively
                    child(f, b, 2)
                }
                BinOp::Sub => {
                    child(f, a, 1)?;
                    write!(f, " - ")?;
                    child(f, b, 2)
                }
                BinOp::Mul => {
                    child(f, a, 2)?;
                    write!(f, " * ")?;
                    child(f, b, 3)
                }
                BinOp::Div => {
                    child(f, a, 2)?;
                    write!(f, " / ")?;
                    child(f, b, 3)
                }
                BinOp::Pow => {
                    // left operand of ^ must outrank ^ itself (right-assoc)
                    child(f, a, 5)?;
                    write!(f, " ^ ")?;
                    child(f, b, 3)
                }
            },
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.src.is_empty() || p.pos >= p.src.len() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let expr = p.additive()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::Syntax {
            offset: p.pos,
            message: format!("unexpected `{}`", p.src[p.pos] as char),
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn additive(&mut self) -> Result<Expr> {
        let mut lhs = self.multiplicative()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'+' => BinOp::Add,
                b'-' => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.multiplicative()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'*' => BinOp::Mul,
                b'/' => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // exponent parsed as unary: `2^-t` works, `2^3^2` is right-assoc
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let c = self.peek().ok_or(Error::Syntax {
            offset: self.pos,
            message: "expected expression".into(),
        })?;
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.additive()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            b'0'..=b'9' | b'.' => self.number(),
            c if c.is_ascii_alphabetic() => self.identifier(),
            c => Err(Error::Syntax {
                offset: self.pos,
                message: format!("expected expression, found `{}`", c as char),
            }),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
        {
            self.pos += 1;
        }
        // optional exponent, only when followed by digits
        if self.src.get(self.pos).is_some_and(|c| *c == b'e' || *c == b'E') {
            let mut ahead = self.pos + 1;
            if self.src.get(ahead).is_some_and(|c| *c == b'+' || *c == b'-') {
                ahead += 1;
            }
            if self.src.get(ahead).is_some_and(u8::is_ascii_digit) {
                self.pos = ahead;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| Error::Syntax {
                offset: start,
                message: format!("invalid number `{text}`"),
            })
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if name == "t" {
            return Ok(Expr::Time);
        }
        let func = match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => {
                return Err(Error::UnknownIdentifier {
                    name: name.into(),
                    offset: start,
                })
            }
        };
        if self.peek() != Some(b'(') {
            return Err(Error::Syntax {
                offset: self.pos,
                message: format!("expected `(` after `{name}`"),
            });
        }
        self.pos += 1;
        let arg = self.additive()?;
        if self.peek() != Some(b')') {
            return Err(Error::Syntax {
                offset: self.pos,
                message: "expected `)`".into(),
            });
        }
        self.pos += 1;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(text: &str, t: f64) -> f64 {
        parse(text).unwrap().eval(t)
    }

    #[test]
    fn literals_and_precedence() {
        assert_eq!(eval("2.5", 7.0), 2.5);
        assert_eq!(eval("1+0.5*sin(t)", 0.0), 1.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0); // right-associative
        assert_eq!(eval("-t^2", 3.0), -9.0);
        assert_eq!(eval("(1+2)*3", 0.0), 9.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("1e-3", 0.0), 1e-3);
        assert_eq!(eval("6/2/3", 0.0), 1.0); // left-associative
    }

    #[test]
    fn functions() {
        assert!((eval("exp(t)", 1.0) - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(eval("cos(0)", 5.0), 1.0);
        assert!((eval("log(exp(2))", 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn double_caret_is_syntax_error_at_offset_two() {
        match parse("t^^2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_reported() {
        match parse("2*pi") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "pi");
                assert_eq!(offset, 2);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_rejected() {
        assert!(parse("").is_err());
        assert!(parse("   ").is_err());
    }

    #[test]
    fn print_reparse_stability_spot_checks() {
        for src in [
            "1 + 0.5*sin(t)",
            "-(t + 1) * cos(2*t)",
            "t^2^t",
            "(t - 1)/(t + 1)",
            "--t",
            "2^-t",
            "exp(-0.5*t)*sin(t^2)",
        ] {
            let first = parse(src).unwrap();
            let printed = first.to_string();
            let second = parse(&printed).unwrap();
            assert_eq!(first, second, "round trip failed for `{src}` -> `{printed}`");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0..100.0f64).prop_map(Expr::Num),
            Just(Expr::Time),
        ];
        leaf.prop_recursive(5, 64, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0..5usize).prop_map(|(a, b, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][k];
                    Expr::Bin(op, Box::new(a), Box::new(b))
                }),
                (inner, 0..4usize).prop_map(|(e, k)| {
                    let f = [Func::Sin, Func::Cos, Func::Exp, Func::Log][k];
                    Expr::Call(f, Box::new(e))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_reparse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            // and printing is a fixed point
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
