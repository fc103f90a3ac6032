//! Bidirectional affine type checking.
//!
//! The output term has every binder annotated, so later passes can read
//! types off the syntax. Annotation nodes are dropped.

use serde::Serialize;
use thiserror::Error;

use super::syntax::{Term, Type};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("variable {0} is used more than once")]
    Contraction(String),
    #[error("{term}: expected {expected}, found {found}")]
    Mismatch {
        term: String,
        expected: Type,
        found: Type,
    },
    #[error("{term}: expected {expected}")]
    Shape { term: String, expected: String },
    #[error("cannot infer the type of {0}; annotate the binder")]
    CannotInfer(String),
}

type Tc<T> = std::result::Result<T, TypeError>;

/// A checked term with its type and the context it was checked in.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypedTerm {
    pub term: Term,
    pub ty: Type,
    pub context: Vec<(String, Type)>,
}

/// Rejects any variable occurring more than once in its scope, including
/// free variables.
pub fn check_affine(t: &Term) -> Tc<()> {
    for x in t.free_vars() {
        if t.occurrences(&x) > 1 {
            return Err(TypeError::Contraction(x));
        }
    }
    match t {
        Term::Var(_) | Term::Unit => Ok(()),
        Term::Lam(x, _, b) => {
            if b.occurrences(x) > 1 {
                return Err(TypeError::Contraction(x.clone()));
            }
            check_affine(b)
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            check_affine(a)?;
            check_affine(b)
        }
        Term::LetPair(x, y, a, b) => {
            for v in [x, y] {
                if b.occurrences(v) > 1 {
                    return Err(TypeError::Contraction(v.clone()));
                }
            }
            check_affine(a)?;
            check_affine(b)
        }
        Term::Annot(a, _) => check_affine(a),
    }
}

struct Ctx {
    vars: Vec<(String, Type)>,
}

impl Ctx {
    fn lookup(&self, x: &str) -> Tc<Type> {
        self.vars
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| TypeError::Unbound(x.to_string()))
    }

    fn with<T>(&mut self, binds: &[(String, Type)], f: impl FnOnce(&mut Ctx) -> Tc<T>) -> Tc<T> {
        self.vars.extend_from_slice(binds);
        let out = f(self);
        self.vars.truncate(self.vars.len() - binds.len());
        out
    }
}

fn mismatch(term: &Term, expected: &Type, found: &Type) -> TypeError {
    TypeError::Mismatch {
        term: term.to_string(),
        expected: expected.clone(),
        found: found.clone(),
    }
}

fn infer(ctx: &mut Ctx, t: &Term) -> Tc<(Term, Type)> {
    match t {
        Term::Var(x) => Ok((t.clone(), ctx.lookup(x)?)),
        Term::Unit => Ok((Term::Unit, Type::Unit)),
        Term::Lam(x, Some(a), body) => {
            let (body, b) = ctx.with(&[(x.clone(), a.clone())], |c| infer(c, body))?;
            Ok((
                Term::Lam(x.clone(), Some(a.clone()), Box::new(body)),
                Type::lolli(a.clone(), b),
            ))
        }
        Term::Lam(x, None, _) => Err(TypeError::CannotInfer(format!("\\{x}"))),
        Term::App(f, a) => {
            // An unannotated head lambda takes its binder type from the argument.
            if let Term::Lam(x, None, body) = &**f {
                let (a, ta) = infer(ctx, a)?;
                let (body, tb) = ctx.with(&[(x.clone(), ta.clone())], |c| infer(c, body))?;
                let f = Term::Lam(x.clone(), Some(ta), Box::new(body));
                return Ok((Term::app(f, a), tb));
            }
            let (f2, tf) = infer(ctx, f)?;
            match tf {
                Type::Lolli(dom, cod) => {
                    let a = check(ctx, a, &dom)?;
                    Ok((Term::app(f2, a), *cod))
                }
                other => Err(TypeError::Shape {
                    term: f.to_string(),
                    expected: format!("a function type, found {other}"),
                }),
            }
        }
        Term::Pair(a, b) => {
            let (a, ta) = infer(ctx, a)?;
            let (b, tb) = infer(ctx, b)?;
            Ok((Term::pair(a, b), Type::tensor(ta, tb)))
        }
        Term::LetPair(x, y, s, u) => {
            let (s, ta, tb) = infer_tensor(ctx, s)?;
            let (u, tu) = ctx.with(&[(x.clone(), ta), (y.clone(), tb)], |c| infer(c, u))?;
            Ok((Term::LetPair(x.clone(), y.clone(), Box::new(s), Box::new(u)), tu))
        }
        Term::Annot(inner, ty) => Ok((check(ctx, inner, ty)?, ty.clone())),
    }
}

fn infer_tensor(ctx: &mut Ctx, s: &Term) -> Tc<(Term, Type, Type)> {
    let (s2, ts) = infer(ctx, s)?;
    match ts {
        Type::Tensor(a, b) => Ok((s2, *a, *b)),
        other => Err(TypeError::Shape {
            term: s.to_string(),
            expected: format!("a tensor type, found {other}"),
        }),
    }
}

fn check(ctx: &mut Ctx, t: &Term, want: &Type) -> Tc<Term> {
    match (t, want) {
        (Term::Lam(x, ann, body), Type::Lolli(a, b)) => {
            if let Some(ann) = ann {
                if ann != &**a {
                    return Err(mismatch(t, a, ann));
                }
            }
            let body = ctx.with(&[(x.clone(), (**a).clone())], |c| check(c, body, b))?;
            Ok(Term::Lam(x.clone(), Some((**a).clone()), Box::new(body)))
        }
        (Term::Pair(l, r), Type::Tensor(a, b)) => Ok(Term::pair(check(ctx, l, a)?, check(ctx, r, b)?)),
        (Term::LetPair(x, y, s, u), _) => {
            let (s, ta, tb) = infer_tensor(ctx, s)?;
            let u = ctx.with(&[(x.clone(), ta), (y.clone(), tb)], |c| check(c, u, want))?;
            Ok(Term::LetPair(x.clone(), y.clone(), Box::new(s), Box::new(u)))
        }
        (Term::Lam(..), _) => Err(TypeError::Shape {
            term: t.to_string(),
            expected: format!("{want}, but a function was given"),
        }),
        _ => {
            let (t2, found) = infer(ctx, t)?;
            if &found != want {
                return Err(mismatch(t, want, &found));
            }
            Ok(t2)
        }
    }
}

/// Checks `t` against the free-variable `context`. Weakening is allowed;
/// every variable may be used at most once.
pub fn typecheck(t: &Term, context: &[(String, Type)]) -> Tc<TypedTerm> {
    check_affine(t)?;
    let mut ctx = Ctx {
        vars: context.to_vec(),
    };
    let (term, ty) = infer(&mut ctx, t)?;
    Ok(TypedTerm {
        term,
        ty,
        context: context.to_vec(),
    })
}
