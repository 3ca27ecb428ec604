//! Recursive-descent parser for polynomial text.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' INT]
//! atom   := INT ['/' INT] | VAR | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::multi::MultiPoly;
use crate::poly::uni::UniPoly;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug)]
enum Vars {
    /// `z1..zk`.
    Z(usize),
    /// The single variable `t`.
    T,
}

impl Vars {
    fn arity(self) -> usize {
        match self {
            Vars::Z(k) => k,
            Vars::T => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Node {
    Num(Rat),
    Var(usize),
    Sum(Vec<Node>),
    Neg(Box<Node>),
    Prod(Vec<Node>),
    Pow(Box<Node>, u32),
}

fn err(column: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        msg: msg.into(),
    }
}

fn tokenize(src: &str, vars: Vars) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push((Tok::Var(resolve_var(&name, vars, col)?), col));
            continue;
        }
        return Err(err(col, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

fn resolve_var(name: &str, vars: Vars, col: usize) -> Result<usize> {
    match vars {
        Vars::T if name == "t" => Ok(0),
        Vars::Z(k) => {
            let idx = name
                .strip_prefix('z')
                .filter(|d| !d.is_empty() && !d.starts_with('0'))
                .and_then(|d| d.parse::<usize>().ok());
            match idx {
                Some(i) if (1..=k).contains(&i) => Ok(i - 1),
                Some(i) => Err(err(col, format!("variable z{i} exceeds arity {k}"))),
                None => Err(err(col, format!("unknown identifier {name:?}"))),
            }
        }
        Vars::T => Err(err(col, format!("unknown identifier {name:?}, expected t"))),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut items = Vec::new();
        let first_neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let t = self.term()?;
        items.push(if first_neg { Node::Neg(Box::new(t)) } else { t });
        loop {
            if self.eat(&Tok::Plus) {
                items.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                items.push(Node::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Node::Sum(items)
        })
    }

    fn term(&mut self) -> Result<Node> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::Star) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Node::Prod(items)
        })
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(&Tok::Minus) {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let col = self.col();
            return match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = u32::try_from(&n).map_err(|_| err(col, "exponent too large"))?;
                    Ok(Node::Pow(Box::new(base), e))
                }
                _ => Err(err(col, "expected a nonnegative integer exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.eat(&Tok::Slash) {
                    let dcol = self.col();
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(Node::Num(Rat::new(n, d)))
                        }
                        Some(Tok::Int(_)) => Err(err(dcol, "zero denominator")),
                        _ => Err(err(dcol, "expected an integer denominator")),
                    }
                } else {
                    Ok(Node::Num(Rat::from_integer(n)))
                }
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    return Err(err(self.col(), "division is only allowed in rational literals"));
                }
                Ok(Node::Var(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(err(self.col(), "expected ')'"));
                }
                if self.peek() == Some(&Tok::Slash) {
                    return Err(err(self.col(), "division is only allowed in rational literals"));
                }
                Ok(e)
            }
            Some(t) => Err(err(col, format!("unexpected token {t:?}"))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

fn parse_tree(src: &str, vars: Vars) -> Result<Node> {
    let toks = tokenize(src, vars)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        let col = p.col();
        let msg = match p.peek() {
            Some(Tok::Var(_) | Tok::LParen | Tok::Int(_)) => {
                "implicit multiplication is not allowed; use '*'"
            }
            _ => "unexpected trailing input",
        };
        return Err(err(col, msg));
    }
    Ok(node)
}

fn eval(node: &Node, k: usize) -> MultiPoly {
    match node {
        Node::Num(r) => MultiPoly::constant(k, r.clone()),
        Node::Var(i) => MultiPoly::var(k, *i),
        Node::Sum(items) => items
            .iter()
            .fold(MultiPoly::zero(k), |acc, n| &acc + &eval(n, k)),
        Node::Neg(n) => -&eval(n, k),
        Node::Prod(items) => items
            .iter()
            .fold(MultiPoly::one(k), |acc, n| &acc * &eval(n, k)),
        Node::Pow(b, e) => eval(b, k).pow(*e),
    }
}

/// Splits the top-level product structure: `scalar · ∏ base^exp`.
fn flatten(node: &Node, k: usize, exp: u32, scalar: &mut Rat, out: &mut Vec<(MultiPoly, u32)>) {
    match node {
        Node::Num(r) => *scalar *= num_traits::pow(r.clone(), exp as usize),
        Node::Neg(n) => {
            if exp % 2 == 1 {
                *scalar = -scalar.clone();
            }
            flatten(n, k, exp, scalar, out);
        }
        Node::Prod(items) => {
            for n in items {
                flatten(n, k, exp, scalar, out);
            }
        }
        Node::Pow(b, e) => flatten(b, k, exp * e, scalar, out),
        Node::Var(_) | Node::Sum(_) => {
            if exp > 0 {
                out.push((eval(node, k), exp));
            }
        }
    }
}

/// Parses a polynomial in `z1..zk`.
pub fn parse_poly(src: &str, k: usize) -> Result<MultiPoly> {
    Ok(eval(&parse_tree(src, Vars::Z(k))?, k))
}

/// Parses a polynomial in `t`.
pub fn parse_unipoly(src: &str) -> Result<UniPoly> {
    Ok(multi_to_uni(&eval(&parse_tree(src, Vars::T)?, 1)))
}

/// Parses a polynomial keeping its top-level factorization.
pub fn parse_factored(src: &str, k: usize) -> Result<(Rat, Vec<(MultiPoly, u32)>)> {
    let tree = parse_tree(src, Vars::Z(k))?;
    let mut scalar = Rat::one();
    let mut out = Vec::new();
    flatten(&tree, k, 1, &mut scalar, &mut out);
    Ok((scalar, out))
}

/// Univariate counterpart of [`parse_factored`].
pub fn parse_factored_uni(src: &str) -> Result<(Rat, Vec<(UniPoly, u32)>)> {
    let tree = parse_tree(src, Vars::T)?;
    let mut scalar = Rat::one();
    let mut out = Vec::new();
    flatten(&tree, Vars::T.arity(), 1, &mut scalar, &mut out);
    Ok((scalar, out.into_iter().map(|(p, e)| (multi_to_uni(&p), e)).collect()))
}

pub(crate) fn multi_to_uni(p: &MultiPoly) -> UniPoly {
    let mut coeffs = vec![Rat::zero(); p.total_degree() as usize + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    UniPoly::from_coeffs(coeffs)
}
