//! Feature guard expressions and their concrete syntax.
//!
//! Grammar:
//!
//! ```text
//! expr  := or
//! or    := and ( "||" and )*
//! and   := unary ( "&&" unary )*
//! unary := "!" unary | atom
//! atom  := "true" | "false" | identifier | "(" expr ")"
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{FeatureSet, Product};

/// A boolean expression over feature names.
///
/// Nodes are reference counted, so cloning is cheap and shared subtrees are
/// common after solver iterations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeatureExpr {
    node: Arc<Node>,
}

#[derive(PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Var(Arc<str>),
    Not(FeatureExpr),
    And(FeatureExpr, FeatureExpr),
    Or(FeatureExpr, FeatureExpr),
}

impl FeatureExpr {
    pub fn tt() -> Self {
        FeatureExpr { node: Arc::new(Node::True) }
    }

    pub fn ff() -> Self {
        FeatureExpr { node: Arc::new(Node::False) }
    }

    pub fn var(name: impl Into<Arc<str>>) -> Self {
        FeatureExpr { node: Arc::new(Node::Var(name.into())) }
    }

    /// Negation. Constant operands and double negations are folded away.
    pub fn not(e: &FeatureExpr) -> Self {
        match &*e.node {
            Node::True => FeatureExpr::ff(),
            Node::False => FeatureExpr::tt(),
            Node::Not(inner) => inner.clone(),
            _ => FeatureExpr { node: Arc::new(Node::Not(e.clone())) },
        }
    }

    /// Conjunction. Constant operands are folded away.
    pub fn and(a: &FeatureExpr, b: &FeatureExpr) -> Self {
        match (&*a.node, &*b.node) {
            (Node::False, _) | (_, Node::False) => FeatureExpr::ff(),
            (Node::True, _) => b.clone(),
            (_, Node::True) => a.clone(),
            _ => FeatureExpr { node: Arc::new(Node::And(a.clone(), b.clone())) },
        }
    }

    /// Disjunction. Constant operands are folded away.
    pub fn or(a: &FeatureExpr, b: &FeatureExpr) -> Self {
        match (&*a.node, &*b.node) {
            (Node::True, _) | (_, Node::True) => FeatureExpr::tt(),
            (Node::False, _) => b.clone(),
            (_, Node::False) => a.clone(),
            _ => FeatureExpr { node: Arc::new(Node::Or(a.clone(), b.clone())) },
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(&*self.node, Node::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(&*self.node, Node::False)
    }

    /// Evaluates the expression under the assignment induced by `product`:
    /// a feature variable is true iff the feature is a member of the product.
    pub fn eval(&self, product: Product, features: &FeatureSet) -> Result<bool> {
        match &*self.node {
            Node::True => Ok(true),
            Node::False => Ok(false),
            Node::Var(name) => match features.index_of(name) {
                Some(i) => Ok(product.contains_index(i)),
                None => Err(Error::validation(format!("unknown feature variable `{name}`"))),
            },
            Node::Not(e) => Ok(!e.eval(product, features)?),
            Node::And(a, b) => Ok(a.eval(product, features)? && b.eval(product, features)?),
            Node::Or(a, b) => Ok(a.eval(product, features)? || b.eval(product, features)?),
        }
    }

    /// Checks that every variable names a member of `features`.
    pub fn validate(&self, features: &FeatureSet) -> Result<()> {
        match &*self.node {
            Node::True | Node::False => Ok(()),
            Node::Var(name) => {
                if features.index_of(name).is_some() {
                    Ok(())
                } else {
                    Err(Error::validation(format!("unknown feature variable `{name}`")))
                }
            }
            Node::Not(e) => e.validate(features),
            Node::And(a, b) | Node::Or(a, b) => {
                a.validate(features)?;
                b.validate(features)
            }
        }
    }

    /// Parses an expression and validates its variables against `features`.
    pub fn parse(text: &str, features: &FeatureSet) -> Result<Self> {
        let expr = parse_expr(text)?;
        expr.validate(features)?;
        Ok(expr)
    }

    fn precedence(&self) -> u8 {
        match &*self.node {
            Node::Or(..) => 0,
            Node::And(..) => 1,
            Node::Not(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match &*self.node {
            Node::True => write!(f, "true")?,
            Node::False => write!(f, "false")?,
            Node::Var(name) => write!(f, "{name}")?,
            Node::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, 3)?;
            }
            Node::And(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " && ")?;
                b.fmt_prec(f, 2)?;
            }
            Node::Or(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " || ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FeatureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for FeatureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses an expression without validating variables against a feature set.
pub fn parse_expr(text: &str) -> Result<FeatureExpr> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let expr = parser.or_expr()?;
    match parser.peek() {
        None => Ok(expr),
        Some(tok) => Err(Error::parse(format!(
            "unexpected `{}` at offset {} in guard expression",
            tok.text, tok.offset
        ))),
    }
}

struct Token {
    text: String,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' | ')' | '!' => {
                tokens.push(Token { text: c.to_string(), offset: i });
                i += 1;
            }
            '&' | '|' => {
                if i + 1 < bytes.len() && bytes[i + 1] == bytes[i] {
                    tokens.push(Token { text: format!("{c}{c}"), offset: i });
                    i += 2;
                } else {
                    return Err(Error::parse(format!(
                        "expected `{c}{c}` at offset {i} in guard expression"
                    )));
                }
            }
            'A'..='Z' | 'a'..='z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token { text: text[start..i].to_string(), offset: start });
            }
            _ => {
                return Err(Error::parse(format!(
                    "unexpected character `{c}` at offset {i} in guard expression"
                )))
            }
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

    fn eat(&mut self, text: &str) -> bool {
        if self.peek().is_some_and(|t| t.text == text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or_expr(&mut self) -> Result<FeatureExpr> {
        let mut expr = self.and_expr()?;
        while self.eat("||") {
            let rhs = self.and_expr()?;
            expr = FeatureExpr::or(&expr, &rhs);
        }
        Ok(expr)
    }

    fn and_expr(&mut self) -> Result<FeatureExpr> {
        let mut expr = self.unary()?;
        while self.eat("&&") {
            let rhs = self.unary()?;
            expr = FeatureExpr::and(&expr, &rhs);
        }
        Ok(expr)
    }

    fn unary(&mut self) -> Result<FeatureExpr> {
        if self.eat("!") {
            let inner = self.unary()?;
            return Ok(FeatureExpr::not(&inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<FeatureExpr> {
        if self.eat("(") {
            let expr = self.or_expr()?;
            if !self.eat(")") {
                return Err(Error::parse("missing `)` in guard expression"));
            }
            return Ok(expr);
        }
        let tok = self
            .peek()
            .ok_or_else(|| Error::parse("unexpected end of guard expression"))?;
        let text = tok.text.clone();
        let offset = tok.offset;
        if !text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::parse(format!(
                "unexpected `{text}` at offset {offset} in guard expression"
            )));
        }
        self.pos += 1;
        Ok(match text.as_str() {
            "true" => FeatureExpr::tt(),
            "false" => FeatureExpr::ff(),
            _ => FeatureExpr::var(text),
        })
    }
}
