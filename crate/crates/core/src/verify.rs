//! Builds a corpus for a named instance, runs the obligation checks and
//! renders the report.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::LocalsSet;
use crate::ast::Stmt;
use crate::gen::{enum_contexts, enum_stmts, random_stmts, subsets, Behavior, CorpusSpec, Mutant};
use crate::induction::{
    check_assembled, check_list_obligations, check_stmt_obligations, enum_lists, ObligationReport, StmtInduction,
};
use crate::instances::{
    AppAssocInstance, IsPureInstance, MulZeroInstance, PureState, UnchangedState, UnchangedVarInstance,
};
use crate::interp::Context;
use crate::par::with_threads;

/// Default list length bound for `list-assoc`.
pub const LIST_DEFAULT_MAX_LEN: usize = 4;
pub const LIST_ELEMS: [i64; 2] = [1, 2];

/// Random statements appended to the corpus when a seed is given.
pub const RANDOM_EXTRA: usize = 2_000;

/// Counterexamples printed per obligation in the text format.
pub const TEXT_COUNTEREXAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceName {
    IsPure,
    UnchangedVar,
    MulZero,
    ListAssoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown instance `{name}` (valid: {})", InstanceName::names().join(", "))]
pub struct UnknownInstance {
    pub name: String,
}

impl InstanceName {
    pub const ALL: [InstanceName; 4] = [
        InstanceName::IsPure,
        InstanceName::UnchangedVar,
        InstanceName::MulZero,
        InstanceName::ListAssoc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceName::IsPure => "is-pure",
            InstanceName::UnchangedVar => "unchanged-var",
            InstanceName::MulZero => "mul-zero",
            InstanceName::ListAssoc => "list-assoc",
        }
    }

    pub fn names() -> Vec<&'static str> {
        InstanceName::ALL.iter().map(|i| i.name()).collect()
    }

    pub fn default_depth(self) -> usize {
        match self {
            InstanceName::ListAssoc => LIST_DEFAULT_MAX_LEN,
            _ => CorpusSpec::standard().max_depth,
        }
    }
}

impl fmt::Display for InstanceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceName {
    type Err = UnknownInstance;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InstanceName::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| UnknownInstance { name: s.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub instance: InstanceName,
    pub depth: Option<usize>,
    pub mutant: Option<Mutant>,
    pub seed: Option<u64>,
    /// Worker threads; `None` or `Some(0)` uses the default pool.
    pub threads: Option<usize>,
    /// Overrides the standard statement budget.
    pub budget: Option<usize>,
}

impl VerifyOptions {
    pub fn new(instance: InstanceName) -> Self {
        VerifyOptions {
            instance,
            depth: None,
            mutant: None,
            seed: None,
            threads: None,
            budget: None,
        }
    }

    pub fn corpus_spec(&self) -> CorpusSpec {
        let depth = self.depth.unwrap_or(self.instance.default_depth());
        match self.instance {
            InstanceName::ListAssoc => CorpusSpec {
                max_depth: depth,
                vars: Vec::new(),
                consts: LIST_ELEMS.to_vec(),
                ctx_values: Vec::new(),
                seed: None,
                budget: None,
            },
            _ => {
                let mut spec = CorpusSpec::standard().with_depth(depth);
                spec.seed = self.seed;
                if self.budget.is_some() {
                    spec.budget = self.budget;
                }
                spec
            }
        }
    }
}

/// The verification report; serializes to the documented JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub instance: String,
    pub corpus: CorpusSpec,
    pub obligations: Vec<ObligationReport>,
    pub assembled: ObligationReport,
    pub ok: bool,
    #[serde(skip)]
    pub mutant: Option<Mutant>,
    /// Corpus size: statements, or lists for `list-assoc`.
    #[serde(skip)]
    pub statements: usize,
    #[serde(skip)]
    pub states: usize,
}

impl VerifyReport {
    pub fn obligation(&self, name: &str) -> Option<&ObligationReport> {
        self.obligations
            .iter()
            .chain(std::iter::once(&self.assembled))
            .find(|r| r.name == name)
    }

    /// Names of every report with at least one violation, assembled included.
    pub fn failing(&self) -> Vec<&str> {
        self.obligations
            .iter()
            .chain(std::iter::once(&self.assembled))
            .filter(|r| !r.passed())
            .map(|r| r.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mutant = self.mutant.map_or("none", Mutant::name);
        let _ = write!(
            out,
            "instance={} mutant={} depth={}",
            self.instance, mutant, self.corpus.max_depth
        );
        if self.instance == InstanceName::ListAssoc.name() {
            let _ = writeln!(out, " lists={}", self.statements);
        } else {
            let _ = writeln!(out, " statements={} states={}", self.statements, self.states);
        }
        for report in self.obligations.iter().chain(std::iter::once(&self.assembled)) {
            let _ = writeln!(
                out,
                "{} checked={} vacuous={} failures={}",
                report.name,
                report.checked,
                report.vacuous,
                report.total_failures()
            );
            for cx in report.failures.iter().take(TEXT_COUNTEREXAMPLES) {
                let _ = writeln!(out, "  stmt:  {}", cx.stmt);
                let _ = writeln!(out, "  state: {}", cx.state);
                if !cx.sub_results.is_empty() {
                    let _ = writeln!(out, "  given: {}", cx.sub_results);
                }
                let _ = writeln!(out, "  why:   {}", cx.note);
            }
        }
        let _ = writeln!(out, "ok={}", self.ok);
        out
    }
}

/// Statements of the corpus: enumerated, then random ones when seeded.
pub fn corpus_stmts(spec: &CorpusSpec) -> Vec<Stmt> {
    let mut stmts: Vec<Stmt> = enum_stmts(spec).collect();
    if spec.seed.is_some() {
        stmts.extend(random_stmts(spec, RANDOM_EXTRA));
    }
    stmts
}

pub fn corpus_contexts(spec: &CorpusSpec) -> Vec<Context> {
    enum_contexts(&spec.vars, &spec.ctx_values)
}

/// Locals ranging over every subset of the corpus variables.
pub fn pure_states(spec: &CorpusSpec) -> Vec<PureState> {
    let contexts = corpus_contexts(spec);
    subsets(&spec.vars)
        .into_iter()
        .flat_map(|locals| {
            let locals: LocalsSet = locals.into_iter().collect();
            contexts.iter().map(move |ctx| PureState {
                locals: locals.clone(),
                ctx: ctx.clone(),
            })
        })
        .collect()
}

/// The watched variable ranging over the corpus variables.
pub fn unchanged_states(spec: &CorpusSpec) -> Vec<UnchangedState> {
    let contexts = corpus_contexts(spec);
    spec.vars
        .iter()
        .flat_map(|w| {
            contexts.iter().map(move |ctx| UnchangedState {
                watched: w.clone(),
                ctx: ctx.clone(),
            })
        })
        .collect()
}

fn run_stmt_instance<I: StmtInduction>(
    inst: &I,
    states: &[I::State],
    stmts: &[Stmt],
) -> (Vec<ObligationReport>, ObligationReport) {
    (
        check_stmt_obligations(inst, states, stmts),
        check_assembled(inst, states, stmts),
    )
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let spec = opts.corpus_spec();
    let behavior = Behavior::with_mutant(opts.mutant);
    let (obligations, assembled, statements, states) = with_threads(opts.threads, || match opts.instance {
        InstanceName::ListAssoc => {
            let corpus = enum_lists(&spec.consts, spec.max_depth);
            let inst = AppAssocInstance::new(corpus.clone(), behavior);
            let (obligations, assembled) = check_list_obligations(&inst, &spec.consts, spec.max_depth);
            (obligations, assembled, corpus.len(), 0)
        }
        InstanceName::IsPure => {
            let stmts = corpus_stmts(&spec);
            let states = pure_states(&spec);
            let (o, a) = run_stmt_instance(&IsPureInstance::new(behavior), &states, &stmts);
            (o, a, stmts.len(), states.len())
        }
        InstanceName::UnchangedVar => {
            let stmts = corpus_stmts(&spec);
            let states = unchanged_states(&spec);
            let (o, a) = run_stmt_instance(&UnchangedVarInstance::new(behavior), &states, &stmts);
            (o, a, stmts.len(), states.len())
        }
        InstanceName::MulZero => {
            let stmts = corpus_stmts(&spec);
            let states = corpus_contexts(&spec);
            let (o, a) = run_stmt_instance(&MulZeroInstance::new(behavior), &states, &stmts);
            (o, a, stmts.len(), states.len())
        }
    });
    let ok = obligations.iter().all(ObligationReport::passed) && assembled.passed();
    VerifyReport {
        instance: opts.instance.name().to_string(),
        corpus: spec,
        obligations,
        assembled,
        ok,
        mutant: opts.mutant,
        statements,
        states,
    }
}
