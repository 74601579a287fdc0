//! A small Dafny-like language with an interpreter, two syntactic analyses,
//! a multiply-by-zero micro-pass, and a harness that checks structural
//! induction proofs about them one inductive case at a time.
//!
//! ```
//! use mdfy::{interp::{interp_stmt, Context}, syntax::parse};
//!
//! let s = parse("var x := 0 in x := 3").unwrap();
//! let out = interp_stmt(&s, &Context::new()).unwrap();
//! assert_eq!(out.value, 3);
//! assert!(out.ctx.is_empty());
//! ```

pub mod analysis;
pub mod ast;
pub mod gen;
pub mod induction;
pub mod instances;
pub mod interp;
pub mod par;
pub mod passes;
pub mod syntax;
pub mod verify;

pub use ast::{Op, Stmt, VarName};
pub use interp::{interp_stmt, Context, EvalError, Evaluated, Outcome};
pub use syntax::{parse, pretty_print, ParseError};
