use crate::ast::{Stmt, VarName};
use crate::interp::Context;

use super::CorpusSpec;

/// Longest `Seq` produced by enumeration.
pub const SEQ_ARITY_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Add,
    Mul,
    Assign,
    Bind,
    Skip,
    Seq(usize),
}

impl Shape {
    fn for_depth(depth: usize) -> Vec<Shape> {
        let mut shapes = vec![Shape::Add, Shape::Mul, Shape::Assign, Shape::Bind];
        if depth == 1 {
            shapes.push(Shape::Skip);
        }
        shapes.extend((2..=SEQ_ARITY_CAP).map(Shape::Seq));
        shapes
    }

    /// Whether the first tuple coordinate picks a variable.
    fn picks_var(self) -> bool {
        matches!(self, Shape::Assign | Shape::Bind)
    }

    fn children(self) -> usize {
        match self {
            Shape::Add | Shape::Mul | Shape::Bind => 2,
            Shape::Assign => 1,
            Shape::Skip => 0,
            Shape::Seq(n) => n,
        }
    }
}

/// Streams every normal-form statement of depth at most `max_depth`,
/// shallowest first.
///
/// Within a depth the order is by constructor (`+`, `*`, assignment, `var`,
/// `skip`, then sequences by length) and then lexicographic over the children,
/// each child ranging over all shallower statements in enumeration order. A
/// node only qualifies for depth `d` when one of its children has depth
/// exactly `d - 1`.
pub struct StmtEnumerator {
    vars: Vec<VarName>,
    consts: Vec<i64>,
    max_depth: usize,
    remaining: Option<usize>,
    // All statements shallower than `depth`; those at `depth - 1` start at `frontier`.
    pool: Vec<Stmt>,
    frontier: usize,
    level: Vec<Stmt>,
    depth: usize,
    next_atom: usize,
    shapes: Vec<Shape>,
    shape: usize,
    counter: Option<Vec<usize>>,
    done: bool,
}

impl StmtEnumerator {
    pub fn new(spec: &CorpusSpec) -> Self {
        StmtEnumerator {
            vars: spec.vars.clone(),
            consts: spec.consts.clone(),
            max_depth: spec.max_depth,
            remaining: spec.budget,
            pool: Vec::new(),
            frontier: 0,
            level: Vec::new(),
            depth: 0,
            next_atom: 0,
            shapes: Vec::new(),
            shape: 0,
            counter: None,
            done: false,
        }
    }

    fn emit(&mut self, s: Stmt) -> Option<Stmt> {
        if self.depth < self.max_depth {
            self.level.push(s.clone());
        }
        if let Some(left) = self.remaining.as_mut() {
            *left -= 1;
        }
        Some(s)
    }

    fn descend(&mut self) -> bool {
        if self.depth >= self.max_depth {
            return false;
        }
        self.frontier = self.pool.len();
        self.pool.append(&mut self.level);
        self.depth += 1;
        self.shapes = Shape::for_depth(self.depth);
        self.shape = 0;
        self.counter = None;
        true
    }

    fn radices(&self, shape: Shape) -> Vec<usize> {
        let mut radices = Vec::with_capacity(3);
        if shape.picks_var() {
            radices.push(self.vars.len());
        }
        radices.extend(std::iter::repeat_n(self.pool.len(), shape.children()));
        radices
    }

    fn next_compound(&mut self) -> Option<Stmt> {
        let shape = self.shapes[self.shape];
        let radices = self.radices(shape);
        let skip = usize::from(shape.picks_var());
        loop {
            match self.counter.as_mut() {
                None => {
                    if radices.contains(&0) {
                        return None;
                    }
                    self.counter = Some(vec![0; radices.len()]);
                }
                Some(counter) => {
                    if !odometer_step(counter, &radices) {
                        return None;
                    }
                }
            }
            let counter = self.counter.as_ref().unwrap();
            let children = &counter[skip..];
            if shape == Shape::Skip || children.iter().any(|&i| i >= self.frontier) {
                return Some(self.build(shape, counter));
            }
        }
    }

    fn build(&self, shape: Shape, counter: &[usize]) -> Stmt {
        let child = |i: usize| Box::new(self.pool[i].clone());
        match shape {
            Shape::Add => Stmt::add(self.pool[counter[0]].clone(), self.pool[counter[1]].clone()),
            Shape::Mul => Stmt::mul(self.pool[counter[0]].clone(), self.pool[counter[1]].clone()),
            Shape::Assign => Stmt::Assign(self.vars[counter[0]].clone(), child(counter[1])),
            Shape::Bind => Stmt::Bind(self.vars[counter[0]].clone(), child(counter[1]), child(counter[2])),
            Shape::Skip => Stmt::skip(),
            Shape::Seq(_) => Stmt::Seq(counter.iter().map(|&i| self.pool[i].clone()).collect()),
        }
    }
}

impl Iterator for StmtEnumerator {
    type Item = Stmt;

    fn next(&mut self) -> Option<Stmt> {
        if self.done || self.remaining == Some(0) {
            return None;
        }
        loop {
            if self.depth == 0 {
                let atom = self.next_atom;
                if atom < self.consts.len() {
                    self.next_atom += 1;
                    return self.emit(Stmt::Const(self.consts[atom]));
                }
                if atom < self.consts.len() + self.vars.len() {
                    self.next_atom += 1;
                    let name = self.vars[atom - self.consts.len()].clone();
                    return self.emit(Stmt::Var(name));
                }
            } else if self.shape < self.shapes.len() {
                match self.next_compound() {
                    Some(s) => return self.emit(s),
                    None => {
                        self.shape += 1;
                        self.counter = None;
                        continue;
                    }
                }
            }
            if !self.descend() {
                self.done = true;
                return None;
            }
        }
    }
}

/// Advances a mixed-radix counter, last coordinate fastest. Returns false on
/// wrap-around.
fn odometer_step(counter: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..counter.len()).rev() {
        counter[i] += 1;
        if counter[i] < radices[i] {
            return true;
        }
        counter[i] = 0;
    }
    false
}

pub fn enum_stmts(spec: &CorpusSpec) -> StmtEnumerator {
    StmtEnumerator::new(spec)
}

/// Number of statements [`enum_stmts`] yields, computed in closed form.
/// `None` when the count does not fit in 128 bits.
pub fn count_stmts(spec: &CorpusSpec) -> Option<u128> {
    let vars = spec.vars.len() as u128;
    let atoms = vars + spec.consts.len() as u128;
    // below = statements of depth <= d - 2, upto = depth <= d - 1.
    let (mut below, mut upto) = (0u128, atoms);
    for depth in 1..=spec.max_depth {
        let tuples = |k: u32| -> Option<u128> { upto.checked_pow(k)?.checked_sub(below.checked_pow(k)?) };
        let pairs = tuples(2)?;
        let mut exact = pairs.checked_mul(2)?;
        exact = exact.checked_add(vars.checked_mul(upto - below)?)?;
        exact = exact.checked_add(vars.checked_mul(pairs)?)?;
        if depth == 1 {
            exact += 1;
        }
        for arity in 2..=SEQ_ARITY_CAP as u32 {
            exact = exact.checked_add(tuples(arity)?)?;
        }
        below = upto;
        upto = upto.checked_add(exact)?;
    }
    Some(match spec.budget {
        Some(budget) => upto.min(budget as u128),
        None => upto,
    })
}

/// All subsets of `items`, by increasing size and then lexicographically by
/// position.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    fn combos<T: Clone>(items: &[T], k: usize, start: usize, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..items.len() {
            acc.push(items[i].clone());
            combos(items, k, i + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=items.len() {
        combos(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Every context whose keys are a subset of `vars` and whose values come from
/// `values`.
pub fn enum_contexts(vars: &[VarName], values: &[i64]) -> Vec<Context> {
    let mut out = Vec::new();
    for keys in subsets(vars) {
        if keys.is_empty() {
            out.push(Context::new());
            continue;
        }
        if values.is_empty() {
            continue;
        }
        let radices = vec![values.len(); keys.len()];
        let mut counter = vec![0; keys.len()];
        loop {
            out.push(keys.iter().cloned().zip(counter.iter().map(|&i| values[i])).collect());
            if !odometer_step(&mut counter, &radices) {
                break;
            }
        }
    }
    out
}
