//! The `EliminateMulZero` micro-pass: `0 * s` and `s * 0` become `0` when
//! `s` is pure.

use crate::analysis::is_effect_free;
use crate::ast::{Op, Stmt};

/// Rewrites bottom-up, so `0 * (0 * x)` collapses in a single run.
pub fn eliminate_mul_zero(s: &Stmt) -> Stmt {
    eliminate_mul_zero_with(s, &is_effect_free)
}

/// Same traversal with a caller-supplied guard deciding whether the
/// non-zero operand may be dropped.
pub fn eliminate_mul_zero_with(s: &Stmt, droppable: &dyn Fn(&Stmt) -> bool) -> Stmt {
    match s {
        Stmt::Const(_) | Stmt::Var(_) => s.clone(),
        Stmt::BinOp(op, lhs, rhs) => {
            let lhs = eliminate_mul_zero_with(lhs, droppable);
            let rhs = eliminate_mul_zero_with(rhs, droppable);
            if *op == Op::Mul {
                let other = match (&lhs, &rhs) {
                    (Stmt::Const(0), other) | (other, Stmt::Const(0)) => Some(other),
                    _ => None,
                };
                if other.is_some_and(droppable) {
                    return Stmt::Const(0);
                }
            }
            Stmt::BinOp(*op, Box::new(lhs), Box::new(rhs))
        }
        Stmt::Assign(avar, aval) => Stmt::Assign(avar.clone(), Box::new(eliminate_mul_zero_with(aval, droppable))),
        Stmt::Bind(bvar, bval, body) => Stmt::Bind(
            bvar.clone(),
            Box::new(eliminate_mul_zero_with(bval, droppable)),
            Box::new(eliminate_mul_zero_with(body, droppable)),
        ),
        Stmt::Seq(stmts) => Stmt::Seq(stmts.iter().map(|s| eliminate_mul_zero_with(s, droppable)).collect()),
    }
}
