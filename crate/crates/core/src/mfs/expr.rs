//! A small expression language over series.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := compose (('·' | '*') compose)*
//! compose := postfix (('∘' | '@') postfix)*
//! postfix := atom ('^-1' | '⁻¹')*
//! atom    := name | 'I' | '1' | '0' | '(' sum ')'
//! ```
//!
//! Composition binds stronger than product, so `F·G∘H·K` reads as
//! `F·(G∘H)·K`. `I` is the composition identity and `1` the constant unit
//! series; `^-1` is the multiplicative inverse.

use std::collections::HashMap;

use super::series::MultiSeries;
use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String),
    Identity,
    One,
    Zero,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Compose(Box<Expr>, Box<Expr>),
    Inverse(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    Plus,
    Minus,
    Dot,
    Circ,
    Inv,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '·' | '*' => {
                tokens.push(Token::Dot);
                i += 1;
            }
            '∘' | '@' => {
                tokens.push(Token::Circ);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            '⁻' if chars.get(i + 1) == Some(&'¹') => {
                tokens.push(Token::Inv);
                i += 2;
            }
            '^' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'1') => {
                tokens.push(Token::Inv);
                i += 3;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Name(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Expr(format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.compose()?;
        while self.peek() == Some(&Token::Dot) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.compose()?));
        }
        Ok(lhs)
    }

    fn compose(&mut self) -> Result<Expr> {
        let mut lhs = self.postfix()?;
        while self.peek() == Some(&Token::Circ) {
            self.pos += 1;
            lhs = Expr::Compose(Box::new(lhs), Box::new(self.postfix()?));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Token::Inv) {
            self.pos += 1;
            e = Expr::Inverse(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Name(n)) => Ok(match n.as_str() {
                "I" => Expr::Identity,
                "1" => Expr::One,
                "0" => Expr::Zero,
                _ if n.chars().next().is_some_and(|c| c.is_ascii_digit()) => {
                    return Err(Error::Expr(format!("unsupported literal {n}")))
                }
                _ => Expr::Var(n),
            }),
            Some(Token::Open) => {
                let e = self.sum()?;
                match self.next() {
                    Some(Token::Close) => Ok(e),
                    _ => Err(Error::Expr("missing ')'".into())),
                }
            }
            other => Err(Error::Expr(format!("expected operand, found {other:?}"))),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            tokens: tokenize(src)?,
            pos: 0,
        };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expr(format!(
                "trailing input at token {}",
                p.pos
            )));
        }
        Ok(e)
    }

    /// Evaluates against named series; `I`, `1` and `0` are built at `order`.
    pub fn eval(
        &self,
        ctx: AlgebraContext,
        order: usize,
        env: &HashMap<String, MultiSeries>,
    ) -> Result<MultiSeries> {
        Ok(match self {
            Expr::Var(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Expr(format!("unbound series {name}")))?,
            Expr::Identity => MultiSeries::identity(ctx, order),
            Expr::One => MultiSeries::one(ctx, order),
            Expr::Zero => MultiSeries::zero(ctx, order),
            Expr::Add(a, b) => a.eval(ctx, order, env)?.add(&b.eval(ctx, order, env)?)?,
            Expr::Sub(a, b) => a.eval(ctx, order, env)?.sub(&b.eval(ctx, order, env)?)?,
            Expr::Mul(a, b) => a.eval(ctx, order, env)?.mul(&b.eval(ctx, order, env)?)?,
            Expr::Compose(a, b) => a
                .eval(ctx, order, env)?
                .compose(&b.eval(ctx, order, env)?)?,
            Expr::Inverse(a) => a.eval(ctx, order, env)?.mul_inverse()?,
        })
    }
}

/// Parses and evaluates `src` in one step.
pub fn eval_expr(
    src: &str,
    ctx: AlgebraContext,
    order: usize,
    env: &HashMap<String, MultiSeries>,
) -> Result<MultiSeries> {
    Expr::parse(src)?.eval(ctx, order, env)
}
