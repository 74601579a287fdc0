//! Abstract syntax of the language.
//!
//! Statements and expressions share one tree type: every node evaluates to an
//! integer and may update variables in the surrounding context. Sequences are
//! n-ary and kept in a normal form where a `Seq` never has exactly one
//! element, so that printing and parsing are mutually inverse.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Words that can never be used as variable names.
pub const KEYWORDS: [&str; 3] = ["var", "in", "skip"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("variable name is empty")]
    Empty,
    #[error("invalid character {ch:?} in variable name {name:?}")]
    InvalidChar { name: String, ch: char },
    #[error("variable name {0:?} starts with a digit")]
    LeadingDigit(String),
    #[error("{0:?} is a keyword")]
    Keyword(String),
}

/// A validated identifier: `[A-Za-z_][A-Za-z0-9_]*`, not a keyword.
///
/// Cheap to clone: the text is shared.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
        let name = name.into();
        let mut chars = name.chars();
        let first = chars.next().ok_or(NameError::Empty)?;
        if first.is_ascii_digit() {
            return Err(NameError::LeadingDigit(name));
        }
        if let Some(ch) = name.chars().find(|c| !(c.is_ascii_alphanumeric() || *c == '_')) {
            return Err(NameError::InvalidChar { name, ch });
        }
        if KEYWORDS.contains(&name.as_str()) {
            return Err(NameError::Keyword(name));
        }
        Ok(VarName(name.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VarName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarName::new(s)
    }
}

impl TryFrom<&str> for VarName {
    type Error = NameError;

    fn try_from(s: &str) -> Result<Self, Self::Error> {
        VarName::new(s)
    }
}

impl Serialize for VarName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VarName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        VarName::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Mul,
}

impl Op {
    pub fn apply(self, lhs: i64, rhs: i64) -> i64 {
        match self {
            Op::Add => lhs.wrapping_add(rhs),
            Op::Mul => lhs.wrapping_mul(rhs),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Const(i64),
    Var(VarName),
    BinOp(Op, Box<Stmt>, Box<Stmt>),
    /// `avar := aval`; the target must already be bound.
    Assign(VarName, Box<Stmt>),
    /// `var bvar := bval in body`; the binding does not escape `body`.
    Bind(VarName, Box<Stmt>, Box<Stmt>),
    Seq(Vec<Stmt>),
}

impl Stmt {
    pub fn var(name: &VarName) -> Stmt {
        Stmt::Var(name.clone())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(lhs: Stmt, rhs: Stmt) -> Stmt {
        Stmt::BinOp(Op::Add, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(lhs: Stmt, rhs: Stmt) -> Stmt {
        Stmt::BinOp(Op::Mul, Box::new(lhs), Box::new(rhs))
    }

    pub fn assign(avar: &VarName, aval: Stmt) -> Stmt {
        Stmt::Assign(avar.clone(), Box::new(aval))
    }

    pub fn bind(bvar: &VarName, bval: Stmt, body: Stmt) -> Stmt {
        Stmt::Bind(bvar.clone(), Box::new(bval), Box::new(body))
    }

    /// `Seq([])`, printed as `skip`.
    pub fn skip() -> Stmt {
        Stmt::Seq(Vec::new())
    }

    /// Builds a sequence in normal form: a single statement is returned as is.
    pub fn seq(mut stmts: Vec<Stmt>) -> Stmt {
        if stmts.len() == 1 {
            stmts.pop().unwrap()
        } else {
            Stmt::Seq(stmts)
        }
    }

    /// Leaves have depth 0, every other node is one above its deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Stmt::Const(_) | Stmt::Var(_) => 0,
            Stmt::BinOp(_, lhs, rhs) => 1 + lhs.depth().max(rhs.depth()),
            Stmt::Assign(_, aval) => 1 + aval.depth(),
            Stmt::Bind(_, bval, body) => 1 + bval.depth().max(body.depth()),
            Stmt::Seq(stmts) => 1 + stmts.iter().map(Stmt::depth).max().unwrap_or(0),
        }
    }

    /// Every variable name occurring in the tree, as a read, an assignment
    /// target or a binder.
    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Stmt::Const(_) => {}
            Stmt::Var(x) => {
                out.insert(x.clone());
            }
            Stmt::BinOp(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Stmt::Assign(avar, aval) => {
                out.insert(avar.clone());
                aval.collect_vars(out);
            }
            Stmt::Bind(bvar, bval, body) => {
                out.insert(bvar.clone());
                bval.collect_vars(out);
                body.collect_vars(out);
            }
            Stmt::Seq(stmts) => stmts.iter().for_each(|s| s.collect_vars(out)),
        }
    }

    /// True when no `Seq` anywhere in the tree has exactly one element.
    pub fn is_normal(&self) -> bool {
        match self {
            Stmt::Const(_) | Stmt::Var(_) => true,
            Stmt::BinOp(_, lhs, rhs) => lhs.is_normal() && rhs.is_normal(),
            Stmt::Assign(_, aval) => aval.is_normal(),
            Stmt::Bind(_, bval, body) => bval.is_normal() && body.is_normal(),
            Stmt::Seq(stmts) => stmts.len() != 1 && stmts.iter().all(Stmt::is_normal),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Stmt::Const(_) | Stmt::Var(_) => 1,
            Stmt::BinOp(_, lhs, rhs) => 1 + lhs.size() + rhs.size(),
            Stmt::Assign(_, aval) => 1 + aval.size(),
            Stmt::Bind(_, bval, body) => 1 + bval.size() + body.size(),
            Stmt::Seq(stmts) => 1 + stmts.iter().map(Stmt::size).sum::<usize>(),
        }
    }

    /// Pre-order walk over the tree, including `self`.
    pub fn any_node(&self, pred: &mut impl FnMut(&Stmt) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Stmt::Const(_) | Stmt::Var(_) => false,
            Stmt::BinOp(_, lhs, rhs) => lhs.any_node(pred) || rhs.any_node(pred),
            Stmt::Assign(_, aval) => aval.any_node(pred),
            Stmt::Bind(_, bval, body) => bval.any_node(pred) || body.any_node(pred),
            Stmt::Seq(stmts) => stmts.iter().any(|s| s.any_node(pred)),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::pretty_print(self))
    }
}
