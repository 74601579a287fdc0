//! Case-decomposed induction obligations.
//!
//! An instance supplies a target property `P(st, s)`, a success-path variant
//! `P_Step(st, s, st1, v)`, an execution oracle and the state used to enter a
//! `Bind` body. The harness then checks every inductive case separately over
//! a finite corpus of states and statements: each [`Obligation`] is a small
//! premise/conclusion lemma, so a violation points at one constructor and one
//! control path instead of at the theorem as a whole.
//!
//! Premises that mention the result of a sub-execution are instantiated at
//! the instance's own `step` witness. A reported counterexample is therefore
//! always a counterexample of the universally quantified lemma.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Stmt, VarName};
use crate::par::map_chunks;
use crate::syntax::{self, pretty_print, ParseError};

/// Counterexamples kept per obligation; the rest are only counted.
pub const COUNTEREXAMPLE_LIMIT: usize = 25;

const CHUNK: usize = 64;

/// Name of the report that checks the assembled theorem directly.
pub const ASSEMBLED: &str = "Induct";

pub trait StmtInduction: Sync {
    type State: Clone + Send + Sync + Serialize + DeserializeOwned;
    type Value: Clone + Send + Sync + fmt::Display;

    /// `P(st, s)`
    fn property(&self, st: &Self::State, s: &Stmt) -> bool;

    /// `P_Step(st, s, st1, v)`: running `s` from `st` succeeds with `(st1, v)`
    /// and the property holds along the way.
    fn step_property(&self, st: &Self::State, s: &Stmt, st1: &Self::State, v: &Self::Value) -> bool;

    /// Executes `s` from `st`; `None` when execution fails.
    fn step(&self, st: &Self::State, s: &Stmt) -> Option<(Self::State, Self::Value)>;

    /// State in which the body of `var bvar := _ in body` starts, given the
    /// state and value produced by the bound expression.
    fn enter_bind(&self, st1: &Self::State, bvar: &VarName, v: &Self::Value) -> Self::State;
}

pub trait ListInduction: Sync {
    type Elem: Clone + Send + Sync + Serialize + DeserializeOwned;

    fn property(&self, ls: &[Self::Elem]) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obligation {
    ConstCase,
    VarCase,
    StepSound,
    BinOpStep,
    BinOpFailLeft,
    BinOpFailRight,
    AssignStep,
    AssignFail,
    BindStep,
    BindFail,
    SeqNil,
    SeqConsStep,
    SeqConsFail,
}

impl Obligation {
    pub const ALL: [Obligation; 13] = [
        Obligation::ConstCase,
        Obligation::VarCase,
        Obligation::StepSound,
        Obligation::BinOpStep,
        Obligation::BinOpFailLeft,
        Obligation::BinOpFailRight,
        Obligation::AssignStep,
        Obligation::AssignFail,
        Obligation::BindStep,
        Obligation::BindFail,
        Obligation::SeqNil,
        Obligation::SeqConsStep,
        Obligation::SeqConsFail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Obligation::ConstCase => "ConstCase",
            Obligation::VarCase => "VarCase",
            Obligation::StepSound => "StepSound",
            Obligation::BinOpStep => "BinOpStep",
            Obligation::BinOpFailLeft => "BinOpFailLeft",
            Obligation::BinOpFailRight => "BinOpFailRight",
            Obligation::AssignStep => "AssignStep",
            Obligation::AssignFail => "AssignFail",
            Obligation::BindStep => "BindStep",
            Obligation::BindFail => "BindFail",
            Obligation::SeqNil => "SeqNil",
            Obligation::SeqConsStep => "SeqConsStep",
            Obligation::SeqConsFail => "SeqConsFail",
        }
    }

    pub fn from_name(name: &str) -> Option<Obligation> {
        Obligation::ALL.into_iter().find(|o| o.name() == name)
    }

    /// Whether the obligation is stated for statements of this shape.
    pub fn applies_to(self, s: &Stmt) -> bool {
        match self {
            Obligation::ConstCase => matches!(s, Stmt::Const(_)),
            Obligation::VarCase => matches!(s, Stmt::Var(_)),
            Obligation::StepSound => true,
            Obligation::BinOpStep | Obligation::BinOpFailLeft | Obligation::BinOpFailRight => {
                matches!(s, Stmt::BinOp(..))
            }
            Obligation::AssignStep | Obligation::AssignFail => matches!(s, Stmt::Assign(..)),
            Obligation::BindStep | Obligation::BindFail => matches!(s, Stmt::Bind(..)),
            Obligation::SeqNil => matches!(s, Stmt::Seq(v) if v.is_empty()),
            Obligation::SeqConsStep | Obligation::SeqConsFail => matches!(s, Stmt::Seq(v) if !v.is_empty()),
        }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub stmt: String,
    pub state: String,
    #[serde(rename = "subResults")]
    pub sub_results: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObligationReport {
    pub name: String,
    /// Instances whose premise held.
    pub checked: u64,
    pub vacuous: bool,
    /// The first [`COUNTEREXAMPLE_LIMIT`] violations in corpus order.
    pub failures: Vec<Counterexample>,
    /// Instances the obligation was stated for, premise true or not.
    #[serde(skip)]
    pub applicable: u64,
    /// All violations, including those not kept in `failures`.
    #[serde(skip)]
    pub failure_count: u64,
}

impl ObligationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.failures.is_empty()
    }

    pub fn total_failures(&self) -> u64 {
        self.failure_count.max(self.failures.len() as u64)
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    applicable: u64,
    checked: u64,
    failure_count: u64,
    failures: Vec<Counterexample>,
}

impl Tally {
    fn fail(&mut self, make: impl FnOnce() -> Counterexample) {
        self.failure_count += 1;
        if self.failures.len() < COUNTEREXAMPLE_LIMIT {
            self.failures.push(make());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.applicable += other.applicable;
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        let room = COUNTEREXAMPLE_LIMIT.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    fn into_report(self, name: &str) -> ObligationReport {
        ObligationReport {
            name: name.to_string(),
            checked: self.checked,
            vacuous: self.checked == 0,
            failures: self.failures,
            applicable: self.applicable,
            failure_count: self.failure_count,
        }
    }
}

fn merge(parts: Vec<Vec<Tally>>, width: usize) -> Vec<Tally> {
    let mut total = vec![Tally::default(); width];
    for part in parts {
        for (acc, t) in total.iter_mut().zip(part) {
            acc.absorb(t);
        }
    }
    total
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("state serialization cannot fail")
}

/// Optional record of how a premise was evaluated.
struct Trace<'a>(Option<&'a mut Vec<String>>);

impl Trace<'_> {
    fn note(&mut self, line: impl FnOnce() -> String) {
        if let Some(lines) = self.0.as_mut() {
            lines.push(line());
        }
    }
}

type Witness<I> = Option<(<I as StmtInduction>::State, <I as StmtInduction>::Value)>;

/// Step results for one `(state, statement)` pair, keyed by sub-statement
/// address. Within a pair every sub-statement is always stepped from the
/// same state, so the address alone identifies the call.
struct Memo<I: StmtInduction> {
    steps: Vec<(*const Stmt, Witness<I>, Option<bool>)>,
}

impl<I: StmtInduction> Memo<I> {
    fn new() -> Self {
        Memo { steps: Vec::new() }
    }

    fn slot(&mut self, inst: &I, st: &I::State, sub: &Stmt) -> usize {
        let key = sub as *const Stmt;
        match self.steps.iter().position(|(k, _, _)| *k == key) {
            Some(i) => i,
            None => {
                self.steps.push((key, inst.step(st, sub), None));
                self.steps.len() - 1
            }
        }
    }

    fn step(&mut self, inst: &I, st: &I::State, sub: &Stmt) -> Witness<I> {
        let i = self.slot(inst, st, sub);
        self.steps[i].1.clone()
    }

    /// `step(st, sub)` together with `P_Step` at its witness, if it steps.
    fn checked_step(&mut self, inst: &I, st: &I::State, sub: &Stmt) -> (Witness<I>, bool) {
        let i = self.slot(inst, st, sub);
        let (_, witness, sound) = &mut self.steps[i];
        let holds = match witness {
            None => false,
            Some((st1, v)) => *sound.get_or_insert_with(|| inst.step_property(st, sub, st1, v)),
        };
        (witness.clone(), holds)
    }
}

/// `step(st, sub) = (st1, v) && P_Step(st, sub, st1, v)`, yielding the witness.
fn succeeds<I: StmtInduction>(
    inst: &I,
    memo: &mut Memo<I>,
    st: &I::State,
    sub: &Stmt,
    label: &str,
    tr: &mut Trace,
) -> Witness<I> {
    let (witness, holds) = memo.checked_step(inst, st, sub);
    let Some((st1, v)) = witness else {
        tr.note(|| format!("step({label}) fails"));
        return None;
    };
    tr.note(|| format!("step({label}) = ({}, {v}); P_Step = {holds}", to_json(&st1)));
    holds.then_some((st1, v))
}

/// `step(st, sub)` absent `&& P(st, sub)`.
fn fails<I: StmtInduction>(
    inst: &I,
    memo: &mut Memo<I>,
    st: &I::State,
    sub: &Stmt,
    label: &str,
    tr: &mut Trace,
) -> bool {
    if let Some((st1, v)) = memo.step(inst, st, sub) {
        tr.note(|| format!("step({label}) = ({}, {v})", to_json(&st1)));
        return false;
    }
    let holds = inst.property(st, sub);
    tr.note(|| format!("step({label}) fails; P({label}) = {holds}"));
    holds
}

fn premise_traced<I: StmtInduction>(
    inst: &I,
    memo: &mut Memo<I>,
    ob: Obligation,
    st: &I::State,
    s: &Stmt,
    tr: &mut Trace,
) -> Option<bool> {
    use Obligation::*;
    let holds = match (ob, s) {
        (ConstCase, Stmt::Const(_)) | (VarCase, Stmt::Var(_)) => true,
        (SeqNil, Stmt::Seq(stmts)) if stmts.is_empty() => true,
        (StepSound, _) => succeeds(inst, memo, st, s, "s", tr).is_some(),
        (BinOpStep, Stmt::BinOp(_, lhs, rhs)) => match succeeds(inst, memo, st, lhs, "lhs", tr) {
            Some((st1, _)) => succeeds(inst, memo, &st1, rhs, "rhs", tr).is_some(),
            None => false,
        },
        (BinOpFailLeft, Stmt::BinOp(_, lhs, _)) => fails(inst, memo, st, lhs, "lhs", tr),
        (BinOpFailRight, Stmt::BinOp(_, lhs, rhs)) => match succeeds(inst, memo, st, lhs, "lhs", tr) {
            Some((st1, _)) => fails(inst, memo, &st1, rhs, "rhs", tr),
            None => false,
        },
        (AssignStep, Stmt::Assign(_, aval)) => succeeds(inst, memo, st, aval, "aval", tr).is_some(),
        (AssignFail, Stmt::Assign(_, aval)) => fails(inst, memo, st, aval, "aval", tr),
        (BindStep, Stmt::Bind(bvar, bval, body)) => match succeeds(inst, memo, st, bval, "bval", tr) {
            Some((st1, v)) => {
                let entered = inst.enter_bind(&st1, bvar, &v);
                let holds = inst.property(&entered, body);
                tr.note(|| format!("enter_bind = {}; P(enter_bind, body) = {holds}", to_json(&entered)));
                holds
            }
            None => false,
        },
        (BindFail, Stmt::Bind(_, bval, _)) => fails(inst, memo, st, bval, "bval", tr),
        (SeqConsStep, Stmt::Seq(stmts)) if !stmts.is_empty() => match succeeds(inst, memo, st, &stmts[0], "head", tr) {
            Some((st1, _)) => {
                let tail = Stmt::seq(stmts[1..].to_vec());
                let holds = inst.property(&st1, &tail);
                tr.note(|| format!("P(st1, {}) = {holds}", pretty_print(&tail)));
                holds
            }
            None => false,
        },
        (SeqConsFail, Stmt::Seq(stmts)) if !stmts.is_empty() => fails(inst, memo, st, &stmts[0], "head", tr),
        _ => return None,
    };
    Some(holds)
}

/// Premise of `ob` at `(st, s)`; `None` when `ob` is not stated for `s`.
pub fn premise<I: StmtInduction>(inst: &I, ob: Obligation, st: &I::State, s: &Stmt) -> Option<bool> {
    premise_traced(inst, &mut Memo::new(), ob, st, s, &mut Trace(None))
}

fn counterexample<I: StmtInduction>(inst: &I, ob: Obligation, st: &I::State, s: &Stmt) -> Counterexample {
    let mut lines = Vec::new();
    premise_traced(inst, &mut Memo::new(), ob, st, s, &mut Trace(Some(&mut lines)));
    Counterexample {
        stmt: pretty_print(s),
        state: to_json(st),
        sub_results: lines.join("; "),
        note: format!("{} premise holds but P(st, s) is false", ob.name()),
    }
}

/// Checks the thirteen per-case obligations over every `(state, statement)`
/// pair, statements outermost. Reports follow [`Obligation::ALL`].
pub fn check_stmt_obligations<I: StmtInduction>(
    inst: &I,
    states: &[I::State],
    stmts: &[Stmt],
) -> Vec<ObligationReport> {
    let width = Obligation::ALL.len();
    let parts = map_chunks(stmts, CHUNK, |chunk| {
        let mut tallies = vec![Tally::default(); width];
        for s in chunk {
            let applicable: Vec<(usize, Obligation)> = Obligation::ALL
                .into_iter()
                .enumerate()
                .filter(|(_, ob)| ob.applies_to(s))
                .collect();
            for st in states {
                let mut conclusion: Option<bool> = None;
                let mut memo = Memo::new();
                for &(i, ob) in &applicable {
                    let tally = &mut tallies[i];
                    tally.applicable += 1;
                    if premise_traced(inst, &mut memo, ob, st, s, &mut Trace(None)) != Some(true) {
                        continue;
                    }
                    tally.checked += 1;
                    if !*conclusion.get_or_insert_with(|| inst.property(st, s)) {
                        tally.fail(|| counterexample(inst, ob, st, s));
                    }
                }
            }
        }
        tallies
    });
    merge(parts, width)
        .into_iter()
        .zip(Obligation::ALL)
        .map(|(t, ob)| t.into_report(ob.name()))
        .collect()
}

/// Checks `P(st, s)` for every pair directly.
pub fn check_assembled<I: StmtInduction>(inst: &I, states: &[I::State], stmts: &[Stmt]) -> ObligationReport {
    let parts = map_chunks(stmts, CHUNK, |chunk| {
        let mut tally = Tally::default();
        for s in chunk {
            for st in states {
                tally.applicable += 1;
                tally.checked += 1;
                if !inst.property(st, s) {
                    tally.fail(|| Counterexample {
                        stmt: pretty_print(s),
                        state: to_json(st),
                        sub_results: String::new(),
                        note: "P(st, s) is false".to_string(),
                    });
                }
            }
        }
        vec![tally]
    });
    merge(parts, 1).pop().unwrap().into_report(ASSEMBLED)
}

pub const NIL_CASE: &str = "NilCase";
pub const CONS_CASE: &str = "ConsCase";

/// All lists over `elems` up to `max_len`, shortest first, then
/// lexicographically by element position.
pub fn enum_lists<T: Clone>(elems: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..max_len {
        if elems.is_empty() {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|prefix| {
                elems.iter().map(move |e| {
                    let mut next = prefix.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn list_counterexample<T: Serialize>(ls: &[T], sub_results: String, note: &str) -> Counterexample {
    Counterexample {
        stmt: to_json(&ls),
        state: "{}".to_string(),
        sub_results,
        note: note.to_string(),
    }
}

/// `NilCase` and `ConsCase` reports, plus the assembled `Induct` report over
/// every list up to `max_len`.
pub fn check_list_obligations<L: ListInduction>(
    inst: &L,
    elems: &[L::Elem],
    max_len: usize,
) -> (Vec<ObligationReport>, ObligationReport) {
    let mut nil = Tally {
        applicable: 1,
        checked: 1,
        ..Tally::default()
    };
    if !inst.property(&[]) {
        nil.fail(|| list_counterexample::<L::Elem>(&[], String::new(), "P([]) is false"));
    }

    let tails = enum_lists(elems, max_len.saturating_sub(1));
    let tails: Vec<Vec<L::Elem>> = if max_len == 0 { Vec::new() } else { tails };
    let parts = map_chunks(&tails, CHUNK, |chunk| {
        let mut tally = Tally::default();
        for tail in chunk {
            let tail_holds = inst.property(tail);
            for h in elems {
                tally.applicable += 1;
                if !tail_holds {
                    continue;
                }
                tally.checked += 1;
                let mut ls = Vec::with_capacity(tail.len() + 1);
                ls.push(h.clone());
                ls.extend(tail.iter().cloned());
                if !inst.property(&ls) {
                    tally.fail(|| {
                        list_counterexample(
                            &ls,
                            format!("P(tail {}) = true", to_json(tail)),
                            "ConsCase premise holds but P(h :: tail) is false",
                        )
                    });
                }
            }
        }
        vec![tally]
    });
    let cons = merge(parts, 1).pop().unwrap();

    let all = enum_lists(elems, max_len);
    let parts = map_chunks(&all, CHUNK, |chunk| {
        let mut tally = Tally::default();
        for ls in chunk {
            tally.applicable += 1;
            tally.checked += 1;
            if !inst.property(ls) {
                tally.fail(|| list_counterexample(ls, String::new(), "P(ls) is false"));
            }
        }
        vec![tally]
    });
    let induct = merge(parts, 1).pop().unwrap();

    (
        vec![nil.into_report(NIL_CASE), cons.into_report(CONS_CASE)],
        induct.into_report(ASSEMBLED),
    )
}

#[derive(Debug, Error)]
pub enum RevalidateError {
    #[error("counterexample statement does not parse: {0}")]
    Stmt(#[from] ParseError),
    #[error("counterexample state or list does not decode: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("unknown obligation `{0}`")]
    UnknownObligation(String),
    #[error("obligation {0} is not stated for this statement")]
    NotApplicable(String),
}

/// Recomputes `(premise, conclusion)` for a reported statement
/// counterexample from its printed statement and state alone.
pub fn revalidate_stmt<I: StmtInduction>(
    inst: &I,
    obligation: &str,
    cx: &Counterexample,
) -> Result<(bool, bool), RevalidateError> {
    let s = syntax::parse(&cx.stmt)?;
    let st: I::State = serde_json::from_str(&cx.state)?;
    let premise = if obligation == ASSEMBLED {
        true
    } else {
        let ob = Obligation::from_name(obligation)
            .ok_or_else(|| RevalidateError::UnknownObligation(obligation.to_string()))?;
        premise(inst, ob, &st, &s).ok_or_else(|| RevalidateError::NotApplicable(obligation.to_string()))?
    };
    Ok((premise, inst.property(&st, &s)))
}

/// Recomputes `(premise, conclusion)` for a reported list counterexample.
pub fn revalidate_list<L: ListInduction>(
    inst: &L,
    obligation: &str,
    cx: &Counterexample,
) -> Result<(bool, bool), RevalidateError> {
    let ls: Vec<L::Elem> = serde_json::from_str(&cx.stmt)?;
    match obligation {
        NIL_CASE if ls.is_empty() => Ok((true, inst.property(&ls))),
        ASSEMBLED => Ok((true, inst.property(&ls))),
        CONS_CASE if !ls.is_empty() => Ok((inst.property(&ls[1..]), inst.property(&ls))),
        NIL_CASE | CONS_CASE => Err(RevalidateError::NotApplicable(obligation.to_string())),
        other => Err(RevalidateError::UnknownObligation(other.to_string())),
    }
}
