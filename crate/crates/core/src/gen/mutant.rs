use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::{LocalsSet, Purity};
use crate::ast::Stmt;
use crate::instances::ListAppend;
use crate::interp::{Interpreter, Outcome};
use crate::passes::eliminate_mul_zero_with;

/// A seeded single-rule bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mutant {
    /// `Bind` keeps the body's context instead of restoring the outer binding.
    NoScopeReset,
    /// `IsPure` accepts any assignment target.
    DropLocalsCheck,
    /// `EliminateMulZero` drops the multiplicand without checking purity.
    RewriteImpure,
    /// List append puts the head at the end instead of the front.
    AppSnoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mutant `{name}` (valid: {})", Mutant::names().join(", "))]
pub struct UnknownMutant {
    pub name: String,
}

impl Mutant {
    pub const ALL: [Mutant; 4] = [
        Mutant::NoScopeReset,
        Mutant::DropLocalsCheck,
        Mutant::RewriteImpure,
        Mutant::AppSnoc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::NoScopeReset => "no-scope-reset",
            Mutant::DropLocalsCheck => "drop-locals-check",
            Mutant::RewriteImpure => "rewrite-impure",
            Mutant::AppSnoc => "app-snoc",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Mutant::ALL.iter().map(|m| m.name()).collect()
    }

    pub fn description(self) -> &'static str {
        match self {
            Mutant::NoScopeReset => "Bind returns the body context without restoring the bound variable",
            Mutant::DropLocalsCheck => "IsPure's Assign case no longer requires the target to be local",
            Mutant::RewriteImpure => "EliminateMulZero rewrites 0 * s even when s has effects",
            Mutant::AppSnoc => "App's Cons case appends the head after the recursive result",
        }
    }

    /// The module whose behavior the mutant replaces.
    pub fn target(self) -> &'static str {
        match self {
            Mutant::NoScopeReset => "interp",
            Mutant::DropLocalsCheck => "analysis",
            Mutant::RewriteImpure => "passes",
            Mutant::AppSnoc => "instances",
        }
    }

    pub fn apply(self) -> Behavior {
        let mut behavior = Behavior::REFERENCE;
        match self {
            Mutant::NoScopeReset => behavior.interpreter.reset_bind_scope = false,
            Mutant::DropLocalsCheck => behavior.purity.check_assign_target = false,
            Mutant::RewriteImpure => behavior.mul_zero_checks_purity = false,
            Mutant::AppSnoc => behavior.append.snoc_head = true,
        }
        behavior
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutant {
    type Err = UnknownMutant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutant::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMutant { name: s.to_string() })
    }
}

/// The semantics, analysis, pass and list append that instances run
/// against. [`Behavior::REFERENCE`] is the unmodified language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Behavior {
    pub interpreter: Interpreter,
    pub purity: Purity,
    pub mul_zero_checks_purity: bool,
    pub append: ListAppend,
}

impl Default for Behavior {
    fn default() -> Self {
        Behavior::REFERENCE
    }
}

impl Behavior {
    pub const REFERENCE: Behavior = Behavior {
        interpreter: Interpreter::REFERENCE,
        purity: Purity::REFERENCE,
        mul_zero_checks_purity: true,
        append: ListAppend::REFERENCE,
    };

    pub fn with_mutant(mutant: Option<Mutant>) -> Behavior {
        mutant.map_or(Behavior::REFERENCE, Mutant::apply)
    }

    pub fn eval(&self, s: &Stmt, ctx: &crate::interp::Context) -> Outcome {
        self.interpreter.eval(s, ctx)
    }

    pub fn is_pure(&self, s: &Stmt, locals: &LocalsSet) -> bool {
        self.purity.holds(s, locals)
    }

    pub fn eliminate_mul_zero(&self, s: &Stmt) -> Stmt {
        if self.mul_zero_checks_purity {
            let empty = LocalsSet::new();
            eliminate_mul_zero_with(s, &|t| self.purity.holds(t, &empty))
        } else {
            eliminate_mul_zero_with(s, &|_| true)
        }
    }

    pub fn app_list<T: Clone>(&self, l0: &[T], l1: &[T]) -> Vec<T> {
        self.append.apply(l0, l1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{Context, Evaluated};
    use crate::syntax::parse;

    #[test]
    fn names_round_trip() {
        for m in Mutant::ALL {
            assert_eq!(m.name().parse::<Mutant>().unwrap(), m);
        }
        let err = "flip-add".parse::<Mutant>().unwrap_err();
        let msg = err.to_string();
        assert!(Mutant::ALL.iter().all(|m| msg.contains(m.name())), "{msg}");
    }

    #[test]
    fn no_scope_reset_leaks_binding() {
        let b = Mutant::NoScopeReset.apply();
        let s = parse("var x := 0 in x := 3").unwrap();
        let x = "x".parse().unwrap();
        assert_eq!(
            b.eval(&s, &Context::new()),
            Ok(Evaluated {
                value: 3,
                ctx: [(x, 3)].into_iter().collect()
            })
        );
    }

    #[test]
    fn drop_locals_check_accepts_assign() {
        let b = Mutant::DropLocalsCheck.apply();
        assert!(b.is_pure(&parse("x := 3").unwrap(), &LocalsSet::new()));
    }

    #[test]
    fn rewrite_impure_drops_effects() {
        let b = Mutant::RewriteImpure.apply();
        assert_eq!(b.eliminate_mul_zero(&parse("0 * (x := 1)").unwrap()), Stmt::Const(0));
        let reference = Behavior::REFERENCE;
        assert_eq!(
            reference.eliminate_mul_zero(&parse("0 * (x := 1)").unwrap()),
            parse("0 * (x := 1)").unwrap()
        );
    }

    #[test]
    fn app_snoc_reorders() {
        let b = Mutant::AppSnoc.apply();
        assert_eq!(b.app_list(&[1, 2], &[3]), vec![3, 2, 1]);
        assert_eq!(Behavior::REFERENCE.app_list(&[1, 2], &[3]), vec![1, 2, 3]);
    }

    #[test]
    fn each_mutant_changes_one_component() {
        for m in Mutant::ALL {
            let b = m.apply();
            let changed = [
                b.interpreter != Interpreter::REFERENCE,
                b.purity != Purity::REFERENCE,
                !b.mul_zero_checks_purity,
                b.append != ListAppend::REFERENCE,
            ];
            assert_eq!(changed.iter().filter(|c| **c).count(), 1, "{m}");
        }
    }
}
