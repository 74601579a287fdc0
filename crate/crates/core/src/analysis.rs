//! Syntactic effect analyses.

use std::collections::BTreeSet;

use crate::ast::{Stmt, VarName};

/// Variables a statement may update without the update being observable
/// outside (they are bound by an enclosing `var`).
pub type LocalsSet = BTreeSet<VarName>;

/// `IsPure`: the statement only assigns variables in `locals`.
///
/// `check_assign_target` is the `avar in locals` conjunct of the `Assign`
/// case; [`Purity::REFERENCE`] keeps it, fault injection drops it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Purity {
    pub check_assign_target: bool,
}

impl Default for Purity {
    fn default() -> Self {
        Purity::REFERENCE
    }
}

impl Purity {
    pub const REFERENCE: Purity = Purity {
        check_assign_target: true,
    };

    pub fn holds(&self, s: &Stmt, locals: &LocalsSet) -> bool {
        match s {
            Stmt::Const(_) => true,
            Stmt::Var(_) => true,
            Stmt::BinOp(_, lhs, rhs) => self.holds(lhs, locals) && self.holds(rhs, locals),
            Stmt::Assign(avar, aval) => {
                (!self.check_assign_target || locals.contains(avar)) && self.holds(aval, locals)
            }
            Stmt::Bind(bvar, bval, body) => {
                if !self.holds(bval, locals) {
                    return false;
                }
                if locals.contains(bvar) {
                    self.holds(body, locals)
                } else {
                    let mut inner = locals.clone();
                    inner.insert(bvar.clone());
                    self.holds(body, &inner)
                }
            }
            Stmt::Seq(stmts) => stmts.iter().all(|s| self.holds(s, locals)),
        }
    }
}

pub fn is_pure(s: &Stmt, locals: &LocalsSet) -> bool {
    Purity::REFERENCE.holds(s, locals)
}

/// `IsPure(s, {})`: no side effects at all.
pub fn is_effect_free(s: &Stmt) -> bool {
    is_pure(s, &LocalsSet::new())
}

/// `UnchangedVar`: running `s` leaves the value of `x` as it was.
///
/// A `Bind` of `x` itself restores `x` when its body finishes, so the body
/// is unconstrained in that case.
pub fn unchanged_var(s: &Stmt, x: &VarName) -> bool {
    match s {
        Stmt::Const(_) | Stmt::Var(_) => true,
        Stmt::BinOp(_, lhs, rhs) => unchanged_var(lhs, x) && unchanged_var(rhs, x),
        Stmt::Assign(avar, aval) => avar != x && unchanged_var(aval, x),
        Stmt::Bind(bvar, bval, body) => unchanged_var(bval, x) && (bvar == x || unchanged_var(body, x)),
        Stmt::Seq(stmts) => stmts.iter().all(|s| unchanged_var(s, x)),
    }
}
