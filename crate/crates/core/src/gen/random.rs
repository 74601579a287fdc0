use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::Stmt;

use super::CorpusSpec;

/// Longest `Seq` the random generator produces.
pub const RANDOM_SEQ_ARITY_CAP: usize = 5;

const SEQ_LENGTHS: [usize; 5] = [0, 2, 3, 4, RANDOM_SEQ_ARITY_CAP];

/// `count` statements drawn from a ChaCha8 stream seeded with `spec.seed`
/// (0 when unset). Every statement has depth at most `spec.max_depth` and is
/// in normal form.
pub fn random_stmts(spec: &CorpusSpec, count: usize) -> Vec<Stmt> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
    (0..count)
        .map(|_| random_stmt(&mut rng, spec, spec.max_depth))
        .collect()
}

fn random_atom(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Stmt {
    let n = spec.consts.len() + spec.vars.len();
    let i = rng.random_range(0..n);
    if i < spec.consts.len() {
        Stmt::Const(spec.consts[i])
    } else {
        Stmt::Var(spec.vars[i - spec.consts.len()].clone())
    }
}

fn random_stmt(rng: &mut ChaCha8Rng, spec: &CorpusSpec, depth: usize) -> Stmt {
    if depth == 0 {
        return random_atom(rng, spec);
    }
    let sub = depth - 1;
    match rng.random_range(0..7) {
        0 | 1 => random_atom(rng, spec),
        2 => Stmt::add(random_stmt(rng, spec, sub), random_stmt(rng, spec, sub)),
        3 => Stmt::mul(random_stmt(rng, spec, sub), random_stmt(rng, spec, sub)),
        4 => {
            let x = pick_var(rng, spec);
            Stmt::Assign(x, Box::new(random_stmt(rng, spec, sub)))
        }
        5 => {
            let x = pick_var(rng, spec);
            let bval = random_stmt(rng, spec, sub);
            Stmt::Bind(x, Box::new(bval), Box::new(random_stmt(rng, spec, sub)))
        }
        _ => {
            let len = SEQ_LENGTHS[rng.random_range(0..SEQ_LENGTHS.len())];
            Stmt::Seq((0..len).map(|_| random_stmt(rng, spec, sub)).collect())
        }
    }
}

fn pick_var(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> crate::ast::VarName {
    spec.vars[rng.random_range(0..spec.vars.len())].clone()
}
