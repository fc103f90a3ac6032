use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Type {
    Base(usize),
    Unit,
    Tensor(Box<Type>, Box<Type>),
    Lolli(Box<Type>, Box<Type>),
}

impl Type {
    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: Type, b: Type) -> Type {
        Type::Lolli(Box::new(a), Box::new(b))
    }

    /// Built from base types, the unit and tensors only.
    pub fn is_data(&self) -> bool {
        match self {
            Type::Base(_) | Type::Unit => true,
            Type::Tensor(a, b) => a.is_data() && b.is_data(),
            Type::Lolli(..) => false,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(n) => write!(f, "B{n}"),
            Type::Unit => write!(f, "I"),
            Type::Tensor(a, b) => {
                match **a {
                    Type::Lolli(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " * ")?;
                match **b {
                    Type::Lolli(..) | Type::Tensor(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Type::Lolli(a, b) => match **a {
                Type::Lolli(..) => write!(f, "({a}) -o {b}"),
                _ => write!(f, "{a} -o {b}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Lam(String, Option<Type>, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    LetPair(String, String, Box<Term>, Box<Term>),
    Unit,
    Annot(Box<Term>, Type),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn lam(x: &str, ty: Option<Type>, body: Term) -> Term {
        Term::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn let_pair(x: &str, y: &str, t: Term, u: Term) -> Term {
        Term::LetPair(x.to_string(), y.to_string(), Box::new(t), Box::new(u))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::LetPair(x, y, t, u) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                bound.push(y.clone());
                u.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
            Term::Unit => {}
            Term::Annot(t, _) => t.collect_free(bound, out),
        }
    }

    /// Number of free occurrences of `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y) => usize::from(y == x),
            Term::Lam(y, _, b) => {
                if y == x {
                    0
                } else {
                    b.occurrences(x)
                }
            }
            Term::App(a, b) | Term::Pair(a, b) => a.occurrences(x) + b.occurrences(x),
            Term::LetPair(y, z, t, u) => {
                t.occurrences(x) + if y == x || z == x { 0 } else { u.occurrences(x) }
            }
            Term::Unit => 0,
            Term::Annot(t, _) => t.occurrences(x),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit => 1,
            Term::Lam(_, _, b) | Term::Annot(b, _) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::LetPair(_, _, a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Unit | Term::Pair(..) | Term::Annot(..))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Lam(x, None, b) => write!(f, "\\{x}. {b}"),
            Term::Lam(x, Some(t), b) => write!(f, "\\{x}:{t}. {b}"),
            Term::App(a, b) => {
                match **a {
                    Term::Lam(..) | Term::LetPair(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                if b.is_atom() {
                    write!(f, " {b}")
                } else {
                    write!(f, " ({b})")
                }
            }
            Term::Pair(a, b) => write!(f, "({a}, {b})"),
            Term::LetPair(x, y, t, u) => write!(f, "let ({x}, {y}) = {t} in {u}"),
            Term::Unit => write!(f, "()"),
            Term::Annot(t, ty) => write!(f, "({t} : {ty})"),
        }
    }
}
