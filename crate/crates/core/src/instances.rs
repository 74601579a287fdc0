//! Concrete instantiations of the induction harness: `IsPure` correctness,
//! `UnchangedVar` correctness, `EliminateMulZero` refinement, and
//! associativity of list append.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::{unchanged_var, LocalsSet};
use crate::ast::{Stmt, VarName};
use crate::gen::Behavior;
use crate::induction::{ListInduction, StmtInduction};
use crate::interp::{Context, Evaluated};

/// `SameCtxs`: equal key sets, and equal bindings outside `locals`.
pub fn same_ctxs(locals: &LocalsSet, ctx: &Context, ctx1: &Context) -> bool {
    ctx1.same_keys(ctx)
        && ctx
            .iter()
            .filter(|(k, _)| !locals.contains(*k))
            .all(|(k, v)| ctx1.get(k) == Some(*v))
}

fn covers(ctx: &Context, locals: &LocalsSet) -> bool {
    locals.iter().all(|x| ctx.contains(x))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureState {
    pub locals: LocalsSet,
    pub ctx: Context,
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// A pure statement leaves every non-local binding untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsPureInstance {
    pub behavior: Behavior,
}

impl IsPureInstance {
    pub fn new(behavior: Behavior) -> Self {
        IsPureInstance { behavior }
    }
}

impl StmtInduction for IsPureInstance {
    type State = PureState;
    type Value = i64;

    fn property(&self, st: &PureState, s: &Stmt) -> bool {
        if !self.behavior.is_pure(s, &st.locals) || !covers(&st.ctx, &st.locals) {
            return true;
        }
        match self.behavior.eval(s, &st.ctx) {
            Err(_) => true,
            Ok(Evaluated { ctx: ctx1, .. }) => same_ctxs(&st.locals, &st.ctx, &ctx1),
        }
    }

    fn step_property(&self, st: &PureState, s: &Stmt, st1: &PureState, v: &i64) -> bool {
        self.behavior.is_pure(s, &st.locals)
            && covers(&st.ctx, &st.locals)
            && self.behavior.eval(s, &st.ctx)
                == Ok(Evaluated {
                    value: *v,
                    ctx: st1.ctx.clone(),
                })
            && st1.locals == st.locals
            && same_ctxs(&st.locals, &st.ctx, &st1.ctx)
    }

    fn step(&self, st: &PureState, s: &Stmt) -> Option<(PureState, i64)> {
        let Evaluated { value, ctx } = self.behavior.eval(s, &st.ctx).ok()?;
        Some((
            PureState {
                locals: st.locals.clone(),
                ctx,
            },
            value,
        ))
    }

    fn enter_bind(&self, st1: &PureState, bvar: &VarName, v: &i64) -> PureState {
        let mut locals = st1.locals.clone();
        locals.insert(bvar.clone());
        PureState {
            locals,
            ctx: st1.ctx.with(bvar, *v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnchangedState {
    pub watched: VarName,
    pub ctx: Context,
}

/// A statement satisfying `UnchangedVar(s, x)` leaves `x` at its old value.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnchangedVarInstance {
    pub behavior: Behavior,
}

impl UnchangedVarInstance {
    pub fn new(behavior: Behavior) -> Self {
        UnchangedVarInstance { behavior }
    }
}

impl StmtInduction for UnchangedVarInstance {
    type State = UnchangedState;
    type Value = i64;

    fn property(&self, st: &UnchangedState, s: &Stmt) -> bool {
        let w = &st.watched;
        if !unchanged_var(s, w) || !st.ctx.contains(w) {
            return true;
        }
        match self.behavior.eval(s, &st.ctx) {
            Err(_) => true,
            Ok(Evaluated { ctx: ctx1, .. }) => ctx1.get(w) == st.ctx.get(w),
        }
    }

    fn step_property(&self, st: &UnchangedState, s: &Stmt, st1: &UnchangedState, v: &i64) -> bool {
        let w = &st.watched;
        unchanged_var(s, w)
            && st.ctx.contains(w)
            && self.behavior.eval(s, &st.ctx)
                == Ok(Evaluated {
                    value: *v,
                    ctx: st1.ctx.clone(),
                })
            && st1.watched == st.watched
            && st1.ctx.get(w) == st.ctx.get(w)
    }

    fn step(&self, st: &UnchangedState, s: &Stmt) -> Option<(UnchangedState, i64)> {
        let Evaluated { value, ctx } = self.behavior.eval(s, &st.ctx).ok()?;
        Some((
            UnchangedState {
                watched: st.watched.clone(),
                ctx,
            },
            value,
        ))
    }

    fn enter_bind(&self, st1: &UnchangedState, bvar: &VarName, v: &i64) -> UnchangedState {
        UnchangedState {
            watched: st1.watched.clone(),
            ctx: st1.ctx.with(bvar, *v),
        }
    }
}

/// Whenever the original program succeeds, the optimized one succeeds with
/// the same value and context.
#[derive(Debug, Clone, Copy, Default)]
pub struct MulZeroInstance {
    pub behavior: Behavior,
}

impl MulZeroInstance {
    pub fn new(behavior: Behavior) -> Self {
        MulZeroInstance { behavior }
    }
}

impl StmtInduction for MulZeroInstance {
    type State = Context;
    type Value = i64;

    fn property(&self, ctx: &Context, s: &Stmt) -> bool {
        match self.behavior.eval(s, ctx) {
            Err(_) => true,
            Ok(original) => self.behavior.eval(&self.behavior.eliminate_mul_zero(s), ctx) == Ok(original),
        }
    }

    fn step_property(&self, ctx: &Context, s: &Stmt, ctx1: &Context, v: &i64) -> bool {
        let expected = Ok(Evaluated {
            value: *v,
            ctx: ctx1.clone(),
        });
        self.behavior.eval(s, ctx) == expected
            && self.behavior.eval(&self.behavior.eliminate_mul_zero(s), ctx) == expected
    }

    fn step(&self, ctx: &Context, s: &Stmt) -> Option<(Context, i64)> {
        let Evaluated { value, ctx } = self.behavior.eval(s, ctx).ok()?;
        Some((ctx, value))
    }

    fn enter_bind(&self, ctx1: &Context, bvar: &VarName, v: &i64) -> Context {
        ctx1.with(bvar, *v)
    }
}

/// List append by structural recursion on the first list. Setting
/// `snoc_head` moves the head behind the recursive result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListAppend {
    pub snoc_head: bool,
}

impl ListAppend {
    pub const REFERENCE: ListAppend = ListAppend { snoc_head: false };

    pub fn apply<T: Clone>(&self, l0: &[T], l1: &[T]) -> Vec<T> {
        match l0.split_first() {
            None => l1.to_vec(),
            Some((h, t)) => {
                let rest = self.apply(t, l1);
                if self.snoc_head {
                    let mut out = rest;
                    out.push(h.clone());
                    out
                } else {
                    let mut out = Vec::with_capacity(rest.len() + 1);
                    out.push(h.clone());
                    out.extend(rest);
                    out
                }
            }
        }
    }
}

impl Default for ListAppend {
    fn default() -> Self {
        ListAppend::REFERENCE
    }
}

pub fn app_list<T: Clone>(l0: &[T], l1: &[T]) -> Vec<T> {
    ListAppend::REFERENCE.apply(l0, l1)
}

/// `P(ls) = forall l1, l2 in corpus :: App(App(ls, l1), l2) == App(ls, App(l1, l2))`.
#[derive(Debug, Clone)]
pub struct AppAssocInstance {
    pub corpus: Vec<Vec<i64>>,
    pub append: ListAppend,
}

impl AppAssocInstance {
    pub fn new(corpus: Vec<Vec<i64>>, behavior: Behavior) -> Self {
        AppAssocInstance {
            corpus,
            append: behavior.append,
        }
    }
}

impl ListInduction for AppAssocInstance {
    type Elem = i64;

    fn property(&self, ls: &[i64]) -> bool {
        let app = |a: &[i64], b: &[i64]| self.append.apply(a, b);
        self.corpus.iter().all(|l1| {
            let left_inner = app(ls, l1);
            self.corpus
                .iter()
                .all(|l2| app(&left_inner, l2) == app(ls, &app(l1, l2)))
        })
    }
}
