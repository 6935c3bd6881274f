//! Terms over `{^, v}`, their parser and printer.
//!
//! Grammar:
//!
//! ```text
//! identity := term '=' term
//! term     := atom (op atom)*        -- one operator per chain, left-assoc
//! atom     := var | '(' term ')'
//! var      := 'x' | 'y' | 'z' | 'w' | 'x' digits
//! op       := '^' | 'v'
//! ```
//!
//! Both operators share one precedence level, so mixing `^` and `v` in the
//! same chain is rejected; parentheses must make the nesting explicit.

use std::fmt;

use crate::algebra::{Algebra, Elem, Op};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Node(Op, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn meet(l: Term, r: Term) -> Term {
        Term::Node(Op::Meet, Box::new(l), Box::new(r))
    }

    pub fn join(l: Term, r: Term) -> Term {
        Term::Node(Op::Join, Box::new(l), Box::new(r))
    }

    /// Left-associated product `t0 op t1 op ... op tk`.
    pub fn chain(op: Op, terms: impl IntoIterator<Item = Term>) -> Term {
        let mut it = terms.into_iter();
        let first = it.next().expect("chain needs at least one term");
        it.fold(first, |acc, t| Term::Node(op, Box::new(acc), Box::new(t)))
    }

    /// One more than the largest variable index, or 0 for no variables.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Node(_, l, r) => l.arity().max(r.arity()),
        }
    }

    pub fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::Node(_, l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }

    /// The dual term: meet and join swapped everywhere, variables fixed.
    pub fn dual(&self) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::Node(op, l, r) => Term::Node(op.dual(), Box::new(l.dual()), Box::new(r.dual())),
        }
    }

    pub fn rename(&self, f: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(i) => Term::Var(f(*i)),
            Term::Node(op, l, r) => Term::Node(*op, Box::new(l.rename(f)), Box::new(r.rename(f))),
        }
    }

    /// Evaluates with an assignment that must cover every variable.
    pub fn eval(&self, a: &Algebra, asg: &[Elem]) -> Result<Elem> {
        match self {
            Term::Var(i) => asg.get(*i).copied().ok_or(Error::UnboundVariable(*i)),
            Term::Node(op, l, r) => {
                let x = l.eval(a, asg)?;
                let y = r.eval(a, asg)?;
                a.apply(*op, x, y)
            }
        }
    }

    /// Unchecked evaluation for hot loops; the caller guarantees coverage.
    pub(crate) fn eval_fast(&self, a: &Algebra, asg: &[Elem]) -> Elem {
        match self {
            Term::Var(i) => asg[*i],
            Term::Node(op, l, r) => a.op(*op, l.eval_fast(a, asg), r.eval_fast(a, asg)),
        }
    }
}

pub fn var_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => format!("x{i}"),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => f.write_str(&var_name(*i)),
            Term::Node(op, l, r) => {
                let left_bare = matches!(**l, Term::Var(_))
                    || matches!(**l, Term::Node(lop, _, _) if lop == *op);
                let right_bare = matches!(**r, Term::Var(_));
                if left_bare {
                    write!(f, "{l}")?;
                } else {
                    write!(f, "({l})")?;
                }
                write!(f, " {} ", op.symbol())?;
                if right_bare {
                    write!(f, "{r}")
                } else {
                    write!(f, "({r})")
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Op(Op),
    Open,
    Close,
    Eq,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '^' | '∧' => Tok::Op(Op::Meet),
            'v' | '∨' => Tok::Op(Op::Join),
            '(' => Tok::Open,
            ')' => Tok::Close,
            '=' | '≈' => Tok::Eq,
            'y' => Tok::Var(1),
            'z' => Tok::Var(2),
            'w' => Tok::Var(3),
            'x' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    Tok::Var(0)
                } else {
                    let digits: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                    let idx = digits.parse().map_err(|_| Error::Syntax {
                        pos,
                        msg: format!("variable index `{digits}` is too large"),
                    })?;
                    Tok::Var(idx)
                }
            }
            other => {
                return Err(Error::Syntax { pos, msg: format!("unexpected character `{other}`") })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|&(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.atom()?;
        let mut chain_op: Option<Op> = None;
        while let Some(Tok::Op(op)) = self.peek() {
            if let Some(prev) = chain_op {
                if prev != op {
                    return Err(Error::Syntax {
                        pos: self.pos(),
                        msg: "mixing `^` and `v` requires parentheses".into(),
                    });
                }
            }
            chain_op = Some(op);
            self.at += 1;
            let rhs = self.atom()?;
            acc = Term::Node(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Var(i)) => {
                self.at += 1;
                Ok(Term::Var(i))
            }
            Some(Tok::Open) => {
                self.at += 1;
                let t = self.term()?;
                if self.peek() != Some(Tok::Close) {
                    return Err(Error::Syntax { pos: self.pos(), msg: "expected `)`".into() });
                }
                self.at += 1;
                Ok(t)
            }
            Some(_) => Err(Error::Syntax { pos, msg: "expected a variable or `(`".into() }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let t = p.term()?;
    if p.at != p.toks.len() {
        return Err(Error::Syntax { pos: p.pos(), msg: "unexpected trailing input".into() });
    }
    Ok(t)
}

/// An equation `lhs ≈ rhs` whose variables are `0..arity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub code: Option<String>,
}

impl Identity {
    /// Builds an identity, renumbering variables so that the ones used are
    /// contiguous from 0 (relative order preserved).
    pub fn new(lhs: Term, rhs: Term) -> Identity {
        let mut used = Vec::new();
        lhs.vars(&mut used);
        rhs.vars(&mut used);
        used.sort_unstable();
        used.dedup();
        if used.iter().enumerate().all(|(i, &v)| i == v) {
            return Identity { lhs, rhs, code: None };
        }
        let rename = |v: usize| used.binary_search(&v).unwrap();
        Identity { lhs: lhs.rename(&rename), rhs: rhs.rename(&rename), code: None }
    }

    pub fn with_code(mut self, code: impl Into<String>) -> Identity {
        self.code = Some(code.into());
        self
    }

    pub fn arity(&self) -> usize {
        self.lhs.arity().max(self.rhs.arity())
    }

    /// Both sides replaced by their dual terms.
    pub fn dual(&self) -> Identity {
        Identity {
            lhs: self.lhs.dual(),
            rhs: self.rhs.dual(),
            code: self.code.as_ref().map(|c| format!("D({c})")),
        }
    }

    pub fn label(&self) -> String {
        match &self.code {
            Some(c) => c.clone(),
            None => self.to_string(),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    let toks = tokenize(text)?;
    let split = toks
        .iter()
        .position(|&(_, t)| t == Tok::Eq)
        .ok_or(Error::Syntax { pos: text.len(), msg: "expected `=`".into() })?;
    let eq_pos = toks[split].0;
    let (left, right) = toks.split_at(split);
    let right = right[1..].to_vec();
    if let Some(&(pos, _)) = right.iter().find(|&&(_, t)| t == Tok::Eq) {
        return Err(Error::Syntax { pos, msg: "more than one `=`".into() });
    }
    let parse_side = |toks: Vec<(usize, Tok)>, end: usize| -> Result<Term> {
        let mut p = Parser { toks, at: 0, end };
        let t = p.term()?;
        if p.at != p.toks.len() {
            return Err(Error::Syntax { pos: p.pos(), msg: "unexpected trailing input".into() });
        }
        Ok(t)
    };
    let lhs = parse_side(left.to_vec(), eq_pos)?;
    let rhs = parse_side(right, text.len())?;
    Ok(Identity::new(lhs, rhs))
}
