//! Parameter expressions over the process index `k`.
//!
//! Law descriptors give their parameters as small formulas in `k`, e.g.
//! `"3*sqrt(log(k+2))"` or `"k^2"`. Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '·' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            right-associative
//! atom   := number | 'k' | 'pi' | 'e'
//!         | func '(' expr (',' expr)* ')'
//!         | '(' expr ')'
//! func   := log | sqrt | min | max
//! ```
//!
//! `log` is the natural logarithm. Whitespace is ignored.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Index,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Log(Box<Node>),
    Sqrt(Box<Node>),
    Min(Vec<Node>),
    Max(Vec<Node>),
}

impl Node {
    fn eval(&self, k: f64) -> f64 {
        match self {
            Node::Const(c) => *c,
            Node::Index => k,
            Node::Neg(a) => -a.eval(k),
            Node::Add(a, b) => a.eval(k) + b.eval(k),
            Node::Sub(a, b) => a.eval(k) - b.eval(k),
            Node::Mul(a, b) => a.eval(k) * b.eval(k),
            Node::Div(a, b) => a.eval(k) / b.eval(k),
            Node::Pow(a, b) => a.eval(k).powf(b.eval(k)),
            Node::Log(a) => a.eval(k).ln(),
            Node::Sqrt(a) => a.eval(k).sqrt(),
            Node::Min(v) => v.iter().map(|n| n.eval(k)).fold(f64::INFINITY, f64::min),
            Node::Max(v) => v.iter().map(|n| n.eval(k)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn depends_on_index(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Index => true,
            Node::Neg(a) | Node::Log(a) | Node::Sqrt(a) => a.depends_on_index(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.depends_on_index() || b.depends_on_index()
            }
            Node::Min(v) | Node::Max(v) => v.iter().any(Node::depends_on_index),
        }
    }
}

/// A parsed parameter formula together with its source text.
#[derive(Clone, PartialEq)]
pub struct ParamExpr {
    source: String,
    root: Node,
}

impl ParamExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let mut p = Parser { src: source.as_bytes(), pos: 0 };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Self { source: source.to_string(), root })
    }

    pub fn constant(value: f64) -> Self {
        Self { source: format_number(value), root: Node::Const(value) }
    }

    pub fn eval(&self, k: u64) -> f64 {
        self.root.eval(k as f64)
    }

    pub fn eval_f64(&self, k: f64) -> f64 {
        self.root.eval(k)
    }

    pub fn is_constant(&self) -> bool {
        !self.root.depends_on_index()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

fn format_number(v: f64) -> String {
    format!("{v:?}")
}

impl fmt::Debug for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamExpr({:?})", self.source)
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl From<f64> for ParamExpr {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Serialize for ParamExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.root {
            Node::Const(c) if self.source == format_number(c) => s.serialize_f64(c),
            _ => s.serialize_str(&self.source),
        }
    }
}

impl<'de> Deserialize<'de> for ParamExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ParamExpr::constant(v)),
            Raw::Text(s) => ParamExpr::parse(&s).map_err(serde::de::Error::custom),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Expression { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    /// Multiplication may be spelled `*` or as the UTF-8 middle dot.
    fn eat_mul(&mut self) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'*') {
            self.pos += 1;
            true
        } else if self.src[self.pos..].starts_with("·".as_bytes()) {
            self.pos += "·".len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_mul() {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Node::Const).map_err(|_| Error::Expression {
            offset: start,
            message: format!("malformed number '{text}'"),
        })
    }

    fn identifier(&mut self) -> Result<Node> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "k" => Ok(Node::Index),
            "pi" => Ok(Node::Const(std::f64::consts::PI)),
            "e" => Ok(Node::Const(std::f64::consts::E)),
            "log" | "sqrt" | "min" | "max" => {
                self.expect(b'(')?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(b')')?;
                let arity_ok = match name {
                    "log" | "sqrt" => args.len() == 1,
                    _ => !args.is_empty(),
                };
                if !arity_ok {
                    return Err(Error::Expression { offset: start, message: format!("wrong number of arguments to {name}") });
                }
                Ok(match name {
                    "log" => Node::Log(Box::new(args.pop().unwrap())),
                    "sqrt" => Node::Sqrt(Box::new(args.pop().unwrap())),
                    "min" => Node::Min(args),
                    _ => Node::Max(args),
                })
            }
            _ => Err(Error::Expression { offset: start, message: format!("unknown identifier '{name}'") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, k: u64) -> f64 {
        ParamExpr::parse(src).unwrap().eval(k)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1+2*3", 0), 7.0);
        assert_eq!(ev("(1+2)*3", 0), 9.0);
        assert_eq!(ev("2^3^2", 0), 512.0);
        assert_eq!(ev("-2^2", 0), -4.0);
        assert_eq!(ev("8/2/2", 0), 2.0);
        assert_eq!(ev("10-3-2", 0), 5.0);
        assert_eq!(ev("2·k", 4), 8.0);
    }

    #[test]
    fn index_and_functions() {
        assert_eq!(ev("k^2", 7), 49.0);
        assert!((ev("sqrt(log(k+2))", 1) - 3f64.ln().sqrt()).abs() < 1e-15);
        assert_eq!(ev("min(k, 3, 10)", 5), 3.0);
        assert_eq!(ev("max(k,1)", 0), 1.0);
        assert_eq!(ev("1.5e2", 0), 150.0);
        assert!((ev("pi", 0) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_offsets() {
        match ParamExpr::parse("k + * 2") {
            Err(Error::Expression { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(ParamExpr::parse("foo(k)").is_err());
        assert!(ParamExpr::parse("log(k,2)").is_err());
        assert!(ParamExpr::parse("(k").is_err());
        assert!(ParamExpr::parse("k)").is_err());
    }

    #[test]
    fn serde_accepts_numbers_and_strings() {
        let a: ParamExpr = serde_json::from_str("2.5").unwrap();
        assert!(a.is_constant());
        assert_eq!(a.eval(9), 2.5);
        let b: ParamExpr = serde_json::from_str("\"k/2\"").unwrap();
        assert!(!b.is_constant());
        assert_eq!(serde_json::to_string(&b).unwrap(), "\"k/2\"");
        assert_eq!(serde_json::to_string(&a).unwrap(), "2.5");
    }
}
