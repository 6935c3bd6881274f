//! Backtracking over operation-table cells with watched identity instances.
//!
//! Cells `0..n*n` hold the meet table row-major and `n*n..2*n*n` the join
//! table. Every identity is expanded into one instance per assignment of its
//! variables. An instance is evaluated as far as the current partial tables
//! allow; if it is blocked it waits on the first unset cell it needs. When
//! one side is known and the other is blocked only at its outermost
//! operation, the missing cell is forced.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::algebra::{Algebra, Op};
use crate::error::{Error, Result};
use crate::identities::{Identity, Term};

pub(crate) const UNSET: u8 = u8::MAX;

/// Largest carrier the engine accepts (domains are `u32` bitmasks).
pub const ENGINE_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug)]
enum Instr {
    Var(u8),
    Op(u8),
}

#[derive(Clone, Debug)]
struct Compiled {
    lhs: Vec<Instr>,
    rhs: Vec<Instr>,
    arity: usize,
}

fn compile_term(t: &Term, out: &mut Vec<Instr>) {
    match t {
        Term::Var(v) => out.push(Instr::Var(*v as u8)),
        Term::Node(op, l, r) => {
            compile_term(l, out);
            compile_term(r, out);
            out.push(Instr::Op(match op {
                Op::Meet => 0,
                Op::Join => 1,
            }));
        }
    }
}

fn compile(id: &Identity) -> Compiled {
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    compile_term(&id.lhs, &mut lhs);
    compile_term(&id.rhs, &mut rhs);
    Compiled { lhs, rhs, arity: id.arity() }
}

enum Eval {
    Val(u8),
    Blocked { cell: u32, root: bool },
}

#[derive(Clone, Copy, Debug)]
enum Trail {
    Assign(u32),
    Watch(u32),
}

/// Weak isomorph rejection: once the meet table is complete, prune when one
/// of `perms` relabels it into a strictly smaller table.
#[derive(Clone, Debug)]
pub(crate) enum Canonicity {
    Off,
    Weak(Arc<Vec<Vec<u8>>>),
}

impl Canonicity {
    /// All permutations up to six elements, transpositions beyond.
    pub(crate) fn weak(n: usize) -> Canonicity {
        let mut perms = Vec::new();
        if n <= 6 {
            let mut p: Vec<u8> = (0..n as u8).collect();
            permutations(&mut p, 0, &mut perms);
            perms.retain(|p| p.iter().enumerate().any(|(i, &v)| i != v as usize));
        } else {
            for i in 0..n {
                for j in i + 1..n {
                    let mut p: Vec<u8> = (0..n as u8).collect();
                    p.swap(i, j);
                    perms.push(p);
                }
            }
        }
        Canonicity::Weak(Arc::new(perms))
    }
}

pub(crate) fn permutations(p: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

/// Early termination shared between workers: a task gives up once a task
/// with a smaller index has succeeded.
#[derive(Clone, Debug)]
pub(crate) struct Cancel {
    pub first_hit: Arc<AtomicUsize>,
    pub index: usize,
}

/// The static part of a search problem.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub n: usize,
    pub constraints: Vec<Identity>,
    /// Pre-assigned cells.
    pub fixed: Vec<(usize, u8)>,
    /// Allowed values per cell.
    pub domains: Vec<u32>,
    pub propagate: bool,
    pub canonicity: Canonicity,
}

impl Problem {
    pub(crate) fn new(n: usize, constraints: Vec<Identity>) -> Problem {
        let full = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
        Problem {
            n,
            constraints,
            fixed: Vec::new(),
            domains: vec![full; 2 * n * n],
            propagate: true,
            canonicity: Canonicity::Off,
        }
    }

    pub(crate) fn cell(&self, op: Op, x: usize, y: usize) -> usize {
        let base = match op {
            Op::Meet => 0,
            Op::Join => self.n * self.n,
        };
        base + x * self.n + y
    }
}

#[derive(Clone)]
pub(crate) struct Engine {
    n: usize,
    values: Vec<u8>,
    domains: Arc<Vec<u32>>,
    idents: Arc<Vec<Compiled>>,
    instances: Arc<Vec<(u16, u32)>>,
    watches: Vec<Vec<u32>>,
    trail: Vec<Trail>,
    queue: Vec<u32>,
    propagate: bool,
    canonicity: Canonicity,
    decisions: Vec<(u32, u8)>,
    nodes: u64,
    deadline: Option<Instant>,
    cancel: Option<Cancel>,
    stopped: bool,
}

impl Engine {
    /// Builds the engine and runs root propagation. `None` when the problem
    /// is already contradictory.
    pub(crate) fn new(p: &Problem) -> Result<Option<Engine>> {
        let n = p.n;
        if n == 0 || n > ENGINE_LIMIT {
            return Err(Error::InvalidQuery(format!("size {n} outside 1..={ENGINE_LIMIT}")));
        }
        let idents: Vec<Compiled> = p.constraints.iter().map(compile).collect();
        let mut instances = Vec::new();
        for (k, c) in idents.iter().enumerate() {
            let count = n.checked_pow(c.arity as u32).filter(|&m| m <= u32::MAX as usize).ok_or_else(|| {
                Error::InvalidQuery(format!("identity with {} variables is too large at size {n}", c.arity))
            })?;
            instances.extend((0..count as u32).map(|code| (k as u16, code)));
        }
        let cells = 2 * n * n;
        let mut e = Engine {
            n,
            values: vec![UNSET; cells],
            domains: Arc::new(p.domains.clone()),
            idents: Arc::new(idents),
            instances: Arc::new(instances),
            watches: vec![Vec::new(); cells],
            trail: Vec::new(),
            queue: Vec::new(),
            propagate: p.propagate,
            canonicity: p.canonicity.clone(),
            decisions: Vec::new(),
            nodes: 0,
            deadline: None,
            cancel: None,
            stopped: false,
        };
        for &(cell, v) in &p.fixed {
            if e.values[cell] == UNSET {
                if !e.assign(cell as u32, v) {
                    return Ok(None);
                }
            } else if e.values[cell] != v {
                return Ok(None);
            }
        }
        if e.propagate {
            for i in 0..e.instances.len() as u32 {
                if !e.visit(i) {
                    return Ok(None);
                }
            }
            if !e.run_queue() {
                return Ok(None);
            }
        } else {
            e.queue.clear();
        }
        e.trail.clear();
        Ok(Some(e))
    }

    pub(crate) fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub(crate) fn set_cancel(&mut self, cancel: Option<Cancel>) {
        self.cancel = cancel;
    }

    pub(crate) fn to_algebra(&self) -> Algebra {
        let nn = self.n * self.n;
        let meet = self.values[..nn].iter().map(|&v| v as usize).collect();
        let join = self.values[nn..].iter().map(|&v| v as usize).collect();
        Algebra::from_flat(self.n, meet, join).expect("complete tables are in range")
    }

    fn decode(&self, code: u32, arity: usize, asg: &mut [u8; 8]) {
        let mut c = code as usize;
        for k in (0..arity).rev() {
            asg[k] = (c % self.n) as u8;
            c /= self.n;
        }
    }

    fn eval(&self, code: &[Instr], asg: &[u8; 8]) -> Eval {
        let mut stack = [0u8; 32];
        let mut sp = 0;
        let last = code.len() - 1;
        for (i, ins) in code.iter().enumerate() {
            match *ins {
                Instr::Var(v) => {
                    stack[sp] = asg[v as usize];
                    sp += 1;
                }
                Instr::Op(op) => {
                    let r = stack[sp - 1] as usize;
                    let l = stack[sp - 2] as usize;
                    sp -= 2;
                    let cell = op as usize * self.n * self.n + l * self.n + r;
                    let v = self.values[cell];
                    if v == UNSET {
                        return Eval::Blocked { cell: cell as u32, root: i == last };
                    }
                    stack[sp] = v;
                    sp += 1;
                }
            }
        }
        Eval::Val(stack[0])
    }

    fn assign(&mut self, cell: u32, v: u8) -> bool {
        if self.domains[cell as usize] & (1 << v) == 0 {
            return false;
        }
        self.values[cell as usize] = v;
        self.trail.push(Trail::Assign(cell));
        if self.propagate {
            self.queue.push(cell);
        }
        true
    }

    /// Re-examines one instance: check, force, or re-watch.
    fn visit(&mut self, inst: u32) -> bool {
        let (k, code) = self.instances[inst as usize];
        let c = &self.idents[k as usize];
        let mut asg = [0u8; 8];
        self.decode(code, c.arity, &mut asg);
        let l = self.eval(&c.lhs, &asg);
        let r = self.eval(&c.rhs, &asg);
        match (l, r) {
            (Eval::Val(a), Eval::Val(b)) => a == b,
            (Eval::Val(a), Eval::Blocked { cell, root: true })
            | (Eval::Blocked { cell, root: true }, Eval::Val(a)) => self.assign(cell, a),
            (Eval::Blocked { cell, .. }, _) | (_, Eval::Blocked { cell, .. }) => {
                self.watches[cell as usize].push(inst);
                self.trail.push(Trail::Watch(cell));
                true
            }
        }
    }

    fn run_queue(&mut self) -> bool {
        let mut head = 0;
        while head < self.queue.len() {
            let cell = self.queue[head] as usize;
            head += 1;
            let mut i = 0;
            while i < self.watches[cell].len() {
                let inst = self.watches[cell][i];
                i += 1;
                if !self.visit(inst) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        self.queue.clear();
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Assign(c) => self.values[c as usize] = UNSET,
                Trail::Watch(c) => {
                    self.watches[c as usize].pop();
                }
            }
        }
    }

    /// Applies a decision and propagates; false on conflict (state is then
    /// partially updated and must be undone by the caller).
    pub(crate) fn decide(&mut self, cell: u32, v: u8) -> bool {
        self.assign(cell, v) && (!self.propagate || self.run_queue())
    }

    fn all_instances_hold(&self) -> bool {
        let mut asg = [0u8; 8];
        self.instances.iter().all(|&(k, code)| {
            let c = &self.idents[k as usize];
            self.decode(code, c.arity, &mut asg);
            matches!(
                (self.eval(&c.lhs, &asg), self.eval(&c.rhs, &asg)),
                (Eval::Val(a), Eval::Val(b)) if a == b
            )
        })
    }

    fn meet_is_minimal(&self, perms: &[Vec<u8>]) -> bool {
        let n = self.n;
        let t = &self.values[..n * n];
        let mut inv = vec![0u8; n];
        'perm: for p in perms {
            for (x, &px) in p.iter().enumerate() {
                inv[px as usize] = x as u8;
            }
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (inv[i] as usize, inv[j] as usize);
                    let v = p[t[x * n + y] as usize];
                    let w = t[i * n + j];
                    if v < w {
                        return false;
                    }
                    if v > w {
                        continue 'perm;
                    }
                }
            }
        }
        true
    }

    fn check_limits(&mut self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::BudgetExceeded);
            }
        }
        if let Some(c) = &self.cancel {
            if c.first_hit.load(Ordering::Relaxed) < c.index {
                self.stopped = true;
            }
        }
        Ok(())
    }

    /// Depth-first search from the current state. `on_leaf` sees every
    /// complete assignment satisfying the constraints; `on_split`, when
    /// given with a depth, receives the decision path at that depth instead
    /// of descending.
    pub(crate) fn search(
        &mut self,
        on_leaf: &mut dyn FnMut(&Engine) -> Flow,
        split: Option<(usize, &mut dyn FnMut(&[(u32, u8)]))>,
    ) -> Result<Flow> {
        let mut split = split;
        self.dfs(0, false, on_leaf, &mut split)
    }

    fn dfs(
        &mut self,
        cursor: usize,
        meet_checked: bool,
        on_leaf: &mut dyn FnMut(&Engine) -> Flow,
        split: &mut Option<(usize, &mut dyn FnMut(&[(u32, u8)]))>,
    ) -> Result<Flow> {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            self.check_limits()?;
        }
        if self.stopped {
            return Ok(Flow::Stop);
        }
        let nn = self.n * self.n;
        let cells = 2 * nn;
        let mut c = cursor;
        while c < cells && self.values[c] != UNSET {
            c += 1;
        }
        let mut meet_checked = meet_checked;
        if !meet_checked && c >= nn {
            if let Canonicity::Weak(perms) = &self.canonicity {
                if !self.meet_is_minimal(perms) {
                    return Ok(Flow::Continue);
                }
            }
            meet_checked = true;
        }
        if c == cells {
            if !self.propagate && !self.all_instances_hold() {
                return Ok(Flow::Continue);
            }
            return Ok(on_leaf(self));
        }
        if let Some((depth, f)) = split {
            if self.decisions.len() == *depth {
                f(&self.decisions);
                return Ok(Flow::Continue);
            }
        }
        let mut dom = self.domains[c];
        while dom != 0 {
            let v = dom.trailing_zeros() as u8;
            dom &= dom - 1;
            let mark = self.trail.len();
            self.decisions.push((c as u32, v));
            let flow = if self.decide(c as u32, v) {
                self.dfs(c + 1, meet_checked, on_leaf, split)
            } else {
                Ok(Flow::Continue)
            };
            self.decisions.pop();
            self.undo(mark);
            if flow? == Flow::Stop {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::catalog;

    fn count(p: &Problem) -> usize {
        let mut k = 0;
        if let Some(mut e) = Engine::new(p).unwrap() {
            e.search(&mut |_| {
                k += 1;
                Flow::Continue
            }, None)
            .unwrap();
        }
        k
    }

    #[test]
    fn labeled_skew_lattices_of_size_two() {
        // L2 twice (two labelings), RR2 and LR2 once each
        let p = Problem::new(2, catalog::skew_lattice_axioms());
        assert_eq!(count(&p), 4);
        let mut q = p.clone();
        q.propagate = false;
        assert_eq!(count(&q), 4);
    }

    #[test]
    fn weak_canonicity_keeps_one_labeling_of_l2() {
        let mut p = Problem::new(2, catalog::lattice_axioms());
        assert_eq!(count(&p), 2);
        p.canonicity = Canonicity::weak(2);
        assert_eq!(count(&p), 1);
    }

    #[test]
    fn fixed_cells_are_respected() {
        let mut p = Problem::new(2, catalog::skew_lattice_axioms());
        let c = p.cell(Op::Meet, 0, 1);
        p.fixed.push((c, 1));
        let mut seen = Vec::new();
        let mut e = Engine::new(&p).unwrap().unwrap();
        e.search(&mut |e| {
            seen.push(e.to_algebra());
            Flow::Continue
        }, None)
        .unwrap();
        assert!(seen.iter().all(|a| a.meet(0, 1) == 1));
        assert_eq!(seen.len(), 2);
    }
}
