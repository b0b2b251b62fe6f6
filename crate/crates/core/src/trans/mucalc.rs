//! Mu-calculus formulas: parsing, alternation depth, substitution.
//!
//! Grammar, with modalities binding tightest, then `&&`, then `||`, and
//! fixpoint binders extending as far right as possible:
//!
//! ```text
//! phi := "tt" | "ff" | ident
//!      | phi "||" phi | phi "&&" phi
//!      | "<" ident ">" phi | "[" ident "]" phi
//!      | ("mu" | "nu") IDENT "." phi
//! ```

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixKind {
    Least,
    Greatest,
}

/// A closed mu-calculus formula; bound variables are made distinct at parse
/// time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MuFormula {
    True,
    False,
    Var(Arc<str>),
    Or(Arc<MuFormula>, Arc<MuFormula>),
    And(Arc<MuFormula>, Arc<MuFormula>),
    Diamond(Arc<str>, Arc<MuFormula>),
    Box(Arc<str>, Arc<MuFormula>),
    Fix(FixKind, Arc<str>, Arc<MuFormula>),
}

impl MuFormula {
    /// Parses and validates: closed, bound variables distinct (renamed
    /// apart when needed).
    pub fn parse(text: &str) -> Result<MuFormula> {
        let mut parser = MuParser { tokens: tokenize(text)?, pos: 0 };
        let formula = parser.or_expr()?;
        if let Some(tok) = parser.peek() {
            return Err(Error::parse(format!("unexpected `{tok}` after formula")));
        }
        let mut used = HashSet::new();
        let formula = rename_apart(&formula, &mut used, &Default::default())?;
        if let Some(free) = first_free_variable(&formula, &mut HashSet::new()) {
            return Err(Error::parse(format!("unbound variable `{free}`")));
        }
        Ok(formula)
    }

    /// The actions used in modalities.
    pub fn actions(&self) -> HashSet<Arc<str>> {
        let mut out = HashSet::new();
        collect_actions(self, &mut out);
        out
    }

    /// Capture-free substitution of `replacement` for the free variable
    /// `var`.
    pub fn substitute(&self, var: &str, replacement: &MuFormula) -> MuFormula {
        match self {
            MuFormula::True | MuFormula::False => self.clone(),
            MuFormula::Var(name) => {
                if name.as_ref() == var {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            MuFormula::Or(a, b) => MuFormula::Or(
                Arc::new(a.substitute(var, replacement)),
                Arc::new(b.substitute(var, replacement)),
            ),
            MuFormula::And(a, b) => MuFormula::And(
                Arc::new(a.substitute(var, replacement)),
                Arc::new(b.substitute(var, replacement)),
            ),
            MuFormula::Diamond(action, body) => {
                MuFormula::Diamond(action.clone(), Arc::new(body.substitute(var, replacement)))
            }
            MuFormula::Box(action, body) => {
                MuFormula::Box(action.clone(), Arc::new(body.substitute(var, replacement)))
            }
            MuFormula::Fix(kind, name, body) => {
                if name.as_ref() == var {
                    // Shadowed; with variables renamed apart this cannot
                    // occur for the unfoldings we perform.
                    self.clone()
                } else {
                    MuFormula::Fix(*kind, name.clone(), Arc::new(body.substitute(var, replacement)))
                }
            }
        }
    }
}

fn collect_actions(formula: &MuFormula, out: &mut HashSet<Arc<str>>) {
    match formula {
        MuFormula::True | MuFormula::False | MuFormula::Var(_) => {}
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            collect_actions(a, out);
            collect_actions(b, out);
        }
        MuFormula::Diamond(action, body) | MuFormula::Box(action, body) => {
            out.insert(action.clone());
            collect_actions(body, out);
        }
        MuFormula::Fix(_, _, body) => collect_actions(body, out),
    }
}

fn first_free_variable(formula: &MuFormula, bound: &mut HashSet<Arc<str>>) -> Option<Arc<str>> {
    match formula {
        MuFormula::True | MuFormula::False => None,
        MuFormula::Var(name) => (!bound.contains(name)).then(|| name.clone()),
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            first_free_variable(a, bound).or_else(|| first_free_variable(b, bound))
        }
        MuFormula::Diamond(_, body) | MuFormula::Box(_, body) => first_free_variable(body, bound),
        MuFormula::Fix(_, name, body) => {
            let inserted = bound.insert(name.clone());
            let result = first_free_variable(body, bound);
            if inserted {
                bound.remove(name);
            }
            result
        }
    }
}

fn contains_free(formula: &MuFormula, var: &str) -> bool {
    match formula {
        MuFormula::True | MuFormula::False => false,
        MuFormula::Var(name) => name.as_ref() == var,
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            contains_free(a, var) || contains_free(b, var)
        }
        MuFormula::Diamond(_, body) | MuFormula::Box(_, body) => contains_free(body, var),
        MuFormula::Fix(_, name, body) => name.as_ref() != var && contains_free(body, var),
    }
}

type Renaming = std::collections::HashMap<Arc<str>, Arc<str>>;

fn rename_apart(
    formula: &MuFormula,
    used: &mut HashSet<Arc<str>>,
    renaming: &Renaming,
) -> Result<MuFormula> {
    Ok(match formula {
        MuFormula::True | MuFormula::False => formula.clone(),
        MuFormula::Var(name) => {
            MuFormula::Var(renaming.get(name).cloned().unwrap_or_else(|| name.clone()))
        }
        MuFormula::Or(a, b) => MuFormula::Or(
            Arc::new(rename_apart(a, used, renaming)?),
            Arc::new(rename_apart(b, used, renaming)?),
        ),
        MuFormula::And(a, b) => MuFormula::And(
            Arc::new(rename_apart(a, used, renaming)?),
            Arc::new(rename_apart(b, used, renaming)?),
        ),
        MuFormula::Diamond(action, body) => {
            MuFormula::Diamond(action.clone(), Arc::new(rename_apart(body, used, renaming)?))
        }
        MuFormula::Box(action, body) => {
            MuFormula::Box(action.clone(), Arc::new(rename_apart(body, used, renaming)?))
        }
        MuFormula::Fix(kind, name, body) => {
            let fresh = if used.contains(name) {
                let mut k = 1;
                loop {
                    let candidate: Arc<str> = format!("{name}_{k}").into();
                    if !used.contains(&candidate) {
                        break candidate;
                    }
                    k += 1;
                }
            } else {
                name.clone()
            };
            used.insert(fresh.clone());
            let mut inner = renaming.clone();
            inner.insert(name.clone(), fresh.clone());
            MuFormula::Fix(*kind, fresh, Arc::new(rename_apart(body, used, &inner)?))
        }
    })
}

/// The alternation depth of the bound variable `var` in `formula`: the
/// length of the longest chain of sign-alternating fixpoint binders that
/// starts at the binder of `var` and descends through binders whose
/// subformula still uses the chain's previous variable.
pub fn alternation_depth(var: &str, formula: &MuFormula) -> Result<u32> {
    let binder = find_binder(formula, var)
        .ok_or_else(|| Error::domain(format!("variable `{var}` is not bound in the formula")))?;
    Ok(depth_of(binder))
}

fn find_binder<'a>(formula: &'a MuFormula, var: &str) -> Option<&'a MuFormula> {
    match formula {
        MuFormula::True | MuFormula::False | MuFormula::Var(_) => None,
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            find_binder(a, var).or_else(|| find_binder(b, var))
        }
        MuFormula::Diamond(_, body) | MuFormula::Box(_, body) => find_binder(body, var),
        MuFormula::Fix(_, name, body) => {
            if name.as_ref() == var {
                Some(formula)
            } else {
                find_binder(body, var)
            }
        }
    }
}

fn depth_of(binder: &MuFormula) -> u32 {
    let MuFormula::Fix(kind, name, body) = binder else {
        return 0;
    };
    1 + deepest_opposite(body, *kind, name)
}

/// The largest depth among opposite-sign binders inside `body` whose
/// subformula still mentions `var` free.
fn deepest_opposite(body: &MuFormula, kind: FixKind, var: &str) -> u32 {
    match body {
        MuFormula::True | MuFormula::False | MuFormula::Var(_) => 0,
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            deepest_opposite(a, kind, var).max(deepest_opposite(b, kind, var))
        }
        MuFormula::Diamond(_, inner) | MuFormula::Box(_, inner) => {
            deepest_opposite(inner, kind, var)
        }
        MuFormula::Fix(inner_kind, _, inner_body) => {
            let through = deepest_opposite(inner_body, kind, var);
            if *inner_kind != kind && contains_free(body, var) {
                through.max(depth_of(body))
            } else {
                through
            }
        }
    }
}

impl fmt::Display for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MuFormula {
    fn precedence(&self) -> u8 {
        match self {
            MuFormula::Fix(..) => 0,
            MuFormula::Or(..) => 1,
            MuFormula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let parens = self.precedence() < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            MuFormula::True => write!(f, "tt")?,
            MuFormula::False => write!(f, "ff")?,
            MuFormula::Var(name) => write!(f, "{name}")?,
            MuFormula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " || ")?;
                b.fmt_prec(f, 2)?;
            }
            MuFormula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " && ")?;
                b.fmt_prec(f, 3)?;
            }
            MuFormula::Diamond(action, body) => {
                write!(f, "<{action}>")?;
                body.fmt_prec(f, 3)?;
            }
            MuFormula::Box(action, body) => {
                write!(f, "[{action}]")?;
                body.fmt_prec(f, 3)?;
            }
            MuFormula::Fix(kind, name, body) => {
                let keyword = match kind {
                    FixKind::Least => "mu",
                    FixKind::Greatest => "nu",
                };
                write!(f, "{keyword} {name}. ")?;
                body.fmt_prec(f, 0)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' | ')' | '<' | '>' | '[' | ']' | '.' => {
                tokens.push(c.to_string());
                i += 1;
            }
            '&' | '|' => {
                if i + 1 < bytes.len() && bytes[i + 1] == bytes[i] {
                    tokens.push(format!("{c}{c}"));
                    i += 2;
                } else {
                    return Err(Error::parse(format!("expected `{c}{c}` at offset {i}")));
                }
            }
            'A'..='Z' | 'a'..='z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(text[start..i].to_string());
            }
            _ => return Err(Error::parse(format!("unexpected character `{c}` at offset {i}"))),
        }
    }
    Ok(tokens)
}

struct MuParser {
    tokens: Vec<String>,
    pos: usize,
}

impl MuParser {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|s| s.as_str())
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_identifier(&mut self, role: &str) -> Result<String> {
        let tok = self
            .peek()
            .ok_or_else(|| Error::parse(format!("expected {role}, found end of input")))?;
        if !tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            || matches!(tok, "tt" | "ff" | "mu" | "nu")
        {
            return Err(Error::parse(format!("expected {role}, found `{tok}`")));
        }
        let tok = tok.to_string();
        self.pos += 1;
        Ok(tok)
    }

    fn or_expr(&mut self) -> Result<MuFormula> {
        let mut formula = self.and_expr()?;
        while self.eat("||") {
            let rhs = self.and_expr()?;
            formula = MuFormula::Or(Arc::new(formula), Arc::new(rhs));
        }
        Ok(formula)
    }

    fn and_expr(&mut self) -> Result<MuFormula> {
        let mut formula = self.unary()?;
        while self.eat("&&") {
            let rhs = self.unary()?;
            formula = MuFormula::And(Arc::new(formula), Arc::new(rhs));
        }
        Ok(formula)
    }

    fn unary(&mut self) -> Result<MuFormula> {
        if self.eat("<") {
            let action = self.expect_identifier("an action name")?;
            if !self.eat(">") {
                return Err(Error::parse("missing `>` after modality action"));
            }
            return Ok(MuFormula::Diamond(action.into(), Arc::new(self.unary()?)));
        }
        if self.eat("[") {
            let action = self.expect_identifier("an action name")?;
            if !self.eat("]") {
                return Err(Error::parse("missing `]` after modality action"));
            }
            return Ok(MuFormula::Box(action.into(), Arc::new(self.unary()?)));
        }
        if self.eat("(") {
            let formula = self.or_expr()?;
            if !self.eat(")") {
                return Err(Error::parse("missing `)` in formula"));
            }
            return Ok(formula);
        }
        match self.peek() {
            Some("tt") => {
                self.pos += 1;
                Ok(MuFormula::True)
            }
            Some("ff") => {
                self.pos += 1;
                Ok(MuFormula::False)
            }
            Some("mu") | Some("nu") => {
                let kind = if self.eat("mu") {
                    FixKind::Least
                } else {
                    self.eat("nu");
                    FixKind::Greatest
                };
                let name = self.expect_identifier("a fixpoint variable")?;
                if !self.eat(".") {
                    return Err(Error::parse("missing `.` after fixpoint variable"));
                }
                // Fixpoints bind weakest: the body extends to the right as
                // far as possible.
                let body = self.or_expr()?;
                Ok(MuFormula::Fix(kind, name.into(), Arc::new(body)))
            }
            Some(_) => {
                let name = self.expect_identifier("a variable")?;
                Ok(MuFormula::Var(name.into()))
            }
            None => Err(Error::parse("unexpected end of formula")),
        }
    }
}
