//! Definitional interpreter.
//!
//! Evaluation threads a [`Context`] through the tree left to right and stops
//! at the first undefined variable. A `Bind` restores the outer binding of
//! its variable once the body has run:
//!
//! ```text
//! (v1, ctx1) <- eval(bval, ctx)
//! (v2, ctx3) <- eval(body, ctx1[bvar := v1])
//! result       = (v2, ctx1 + (ctx3 - {bvar}))
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

use crate::ast::{Stmt, VarName};

type Bindings = SmallVec<[(VarName, i64); 4]>;

/// Finite map from variable names to integers, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(Bindings);

/// Iterator over the bindings of a [`Context`] in name order.
pub type Iter<'a> = std::iter::Map<std::slice::Iter<'a, (VarName, i64)>, fn(&(VarName, i64)) -> (&VarName, &i64)>;

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    fn find(&self, name: &VarName) -> Result<usize, usize> {
        self.0.binary_search_by(|(k, _)| k.cmp(name))
    }

    pub fn get(&self, name: &VarName) -> Option<i64> {
        self.find(name).ok().map(|i| self.0[i].1)
    }

    pub fn contains(&self, name: &VarName) -> bool {
        self.find(name).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &VarName> {
        self.0.iter().map(|(k, _)| k)
    }

    pub fn key_set(&self) -> BTreeSet<VarName> {
        self.keys().cloned().collect()
    }

    pub fn iter(&self) -> Iter<'_> {
        self.0.iter().map(|(k, v)| (k, v))
    }

    pub fn same_keys(&self, other: &Context) -> bool {
        self.0.len() == other.0.len() && self.keys().eq(other.keys())
    }

    pub fn insert(&mut self, name: VarName, value: i64) -> Option<i64> {
        match self.find(&name) {
            Ok(i) => Some(std::mem::replace(&mut self.0[i].1, value)),
            Err(i) => {
                self.0.insert(i, (name, value));
                None
            }
        }
    }

    pub fn remove(&mut self, name: &VarName) -> Option<i64> {
        self.find(name).ok().map(|i| self.0.remove(i).1)
    }

    /// `ctx[name := value]`
    pub fn with(&self, name: &VarName, value: i64) -> Context {
        let mut out = self.clone();
        out.insert(name.clone(), value);
        out
    }

    /// `ctx - keys`: drops every binding whose name is in `keys`.
    pub fn remove_keys<'a>(&self, keys: impl IntoIterator<Item = &'a VarName>) -> Context {
        let mut out = self.clone();
        for key in keys {
            out.remove(key);
        }
        out
    }

    /// `self + right`: the union of both maps, with `right` winning on shared keys.
    pub fn overridden_by(&self, right: &Context) -> Context {
        let mut out = self.clone();
        for (k, v) in right {
            out.insert(k.clone(), *v);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("context serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Context, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl Serialize for Context {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.iter())
    }
}

impl<'de> Deserialize<'de> for Context {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(BTreeMap::<VarName, i64>::deserialize(deserializer)?
            .into_iter()
            .collect())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl FromIterator<(VarName, i64)> for Context {
    fn from_iter<I: IntoIterator<Item = (VarName, i64)>>(iter: I) -> Self {
        let mut ctx = Context::new();
        for (k, v) in iter {
            ctx.insert(k, v);
        }
        ctx
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = (&'a VarName, &'a i64);
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Error)]
pub enum EvalError {
    #[error("undefined variable: {0}")]
    UndefinedVariable(VarName),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Evaluated {
    pub value: i64,
    pub ctx: Context,
}

/// The error monad: `?` plays the role of `:-`.
pub type Outcome = Result<Evaluated, EvalError>;

/// Interpreter configuration. [`Interpreter::REFERENCE`] is the language
/// semantics; clearing `reset_bind_scope` lets a `Bind` leak its variable
/// (used for fault injection).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interpreter {
    pub reset_bind_scope: bool,
}

impl Default for Interpreter {
    fn default() -> Self {
        Interpreter::REFERENCE
    }
}

impl Interpreter {
    pub const REFERENCE: Interpreter = Interpreter { reset_bind_scope: true };

    pub fn eval(&self, s: &Stmt, ctx: &Context) -> Outcome {
        match s {
            Stmt::Const(n) => Ok(Evaluated {
                value: *n,
                ctx: ctx.clone(),
            }),
            Stmt::Var(x) => match ctx.get(x) {
                Some(value) => Ok(Evaluated {
                    value,
                    ctx: ctx.clone(),
                }),
                None => Err(EvalError::UndefinedVariable(x.clone())),
            },
            Stmt::BinOp(op, lhs, rhs) => {
                let Evaluated { value: vl, ctx: ctx1 } = self.eval(lhs, ctx)?;
                let Evaluated { value: vr, ctx: ctx2 } = self.eval(rhs, &ctx1)?;
                Ok(Evaluated {
                    value: op.apply(vl, vr),
                    ctx: ctx2,
                })
            }
            Stmt::Assign(avar, aval) => {
                let Evaluated { value, ctx: mut ctx1 } = self.eval(aval, ctx)?;
                if !ctx1.contains(avar) {
                    return Err(EvalError::UndefinedVariable(avar.clone()));
                }
                ctx1.insert(avar.clone(), value);
                Ok(Evaluated { value, ctx: ctx1 })
            }
            Stmt::Bind(bvar, bval, body) => {
                let Evaluated {
                    value: bvalv,
                    ctx: ctx1,
                } = self.eval(bval, ctx)?;
                let ctx2 = ctx1.with(bvar, bvalv);
                let Evaluated {
                    value: bodyv,
                    ctx: ctx3,
                } = self.eval(body, &ctx2)?;
                let ctx4 = if self.reset_bind_scope {
                    ctx1.overridden_by(&ctx3.remove_keys([bvar]))
                } else {
                    ctx3
                };
                Ok(Evaluated {
                    value: bodyv,
                    ctx: ctx4,
                })
            }
            Stmt::Seq(stmts) => {
                let mut last = Evaluated {
                    value: 0,
                    ctx: ctx.clone(),
                };
                for stmt in stmts {
                    last = self.eval(stmt, &last.ctx)?;
                }
                Ok(last)
            }
        }
    }
}

/// Evaluates `s` under the reference semantics.
pub fn interp_stmt(s: &Stmt, ctx: &Context) -> Outcome {
    Interpreter::REFERENCE.eval(s, ctx)
}
