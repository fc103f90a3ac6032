//! Normal-order β-reduction with capture-avoiding substitution.

use std::collections::BTreeSet;

use super::syntax::Term;

const MAX_STEPS: usize = 100_000;

fn all_names(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Lam(x, _, b) => {
            out.insert(x.clone());
            all_names(b, out);
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            all_names(a, out);
            all_names(b, out);
        }
        Term::LetPair(x, y, a, b) => {
            out.insert(x.clone());
            out.insert(y.clone());
            all_names(a, out);
            all_names(b, out);
        }
        Term::Unit => {}
        Term::Annot(a, _) => all_names(a, out),
    }
}

fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}

/// `t[s/x]`, renaming binders that would capture free variables of `s`.
pub fn subst(t: &Term, x: &str, s: &Term) -> Term {
    let fv: BTreeSet<String> = s.free_vars().into_iter().collect();
    subst_with(t, x, s, &fv)
}

fn subst_with(t: &Term, x: &str, s: &Term, fv: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Unit => t.clone(),
        Term::Lam(y, ty, b) => {
            if y == x || b.occurrences(x) == 0 {
                return t.clone();
            }
            let (y, b) = avoid_capture(y, b, s, fv);
            Term::Lam(y, ty.clone(), Box::new(subst_with(&b, x, s, fv)))
        }
        Term::App(a, b) => Term::app(subst_with(a, x, s, fv), subst_with(b, x, s, fv)),
        Term::Pair(a, b) => Term::pair(subst_with(a, x, s, fv), subst_with(b, x, s, fv)),
        Term::LetPair(y, z, a, b) => {
            let a = subst_with(a, x, s, fv);
            if y == x || z == x || b.occurrences(x) == 0 {
                return Term::LetPair(y.clone(), z.clone(), Box::new(a), b.clone());
            }
            let (y, b) = avoid_capture(y, b, s, fv);
            let (z, b) = avoid_capture(z, &b, s, fv);
            Term::LetPair(y, z, Box::new(a), Box::new(subst_with(&b, x, s, fv)))
        }
        Term::Annot(a, ty) => Term::Annot(Box::new(subst_with(a, x, s, fv)), ty.clone()),
    }
}

fn avoid_capture(y: &str, body: &Term, s: &Term, fv: &BTreeSet<String>) -> (String, Term) {
    if !fv.contains(y) {
        return (y.to_string(), body.clone());
    }
    let mut avoid = fv.clone();
    all_names(body, &mut avoid);
    all_names(s, &mut avoid);
    let y2 = fresh(y, &avoid);
    let body = subst(body, y, &Term::Var(y2.clone()));
    (y2, body)
}

/// One leftmost-outermost step, if any redex exists.
pub fn step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(x, _, b) = strip(f) {
                return Some(subst(b, x, a));
            }
            if let Some(f2) = step(f) {
                return Some(Term::App(Box::new(f2), a.clone()));
            }
            step(a).map(|a2| Term::App(f.clone(), Box::new(a2)))
        }
        Term::LetPair(x, y, s, u) => {
            if let Term::Pair(l, r) = strip(s) {
                // Rename both binders first so the two substitutions are simultaneous.
                let mut avoid = BTreeSet::new();
                all_names(t, &mut avoid);
                let x2 = fresh(x, &avoid);
                avoid.insert(x2.clone());
                let y2 = fresh(y, &avoid);
                let u = subst(&subst(u, x, &Term::Var(x2.clone())), y, &Term::Var(y2.clone()));
                return Some(subst(&subst(&u, &x2, l), &y2, r));
            }
            if let Some(s2) = step(s) {
                return Some(Term::LetPair(x.clone(), y.clone(), Box::new(s2), u.clone()));
            }
            step(u).map(|u2| Term::LetPair(x.clone(), y.clone(), s.clone(), Box::new(u2)))
        }
        Term::Lam(x, ty, b) => step(b).map(|b2| Term::Lam(x.clone(), ty.clone(), Box::new(b2))),
        Term::Pair(a, b) => match step(a) {
            Some(a2) => Some(Term::Pair(Box::new(a2), b.clone())),
            None => step(b).map(|b2| Term::Pair(a.clone(), Box::new(b2))),
        },
        Term::Annot(a, ty) => step(a).map(|a2| Term::Annot(Box::new(a2), ty.clone())),
        Term::Var(_) | Term::Unit => None,
    }
}

/// Looks through annotations when matching a redex.
fn strip(t: &Term) -> &Term {
    match t {
        Term::Annot(a, _) => strip(a),
        _ => t,
    }
}

/// The normal form and the number of steps taken. Affine terms always
/// normalise; the step bound only matters for ill-typed input.
pub fn beta_reduce_counted(t: &Term) -> (Term, usize) {
    let mut cur = t.clone();
    for n in 0..MAX_STEPS {
        match step(&cur) {
            Some(next) => cur = next,
            None => return (cur, n),
        }
    }
    (cur, MAX_STEPS)
}

pub fn beta_reduce(t: &Term) -> Term {
    beta_reduce_counted(t).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mll::parse::parse;

    fn nf(src: &str) -> Term {
        beta_reduce(&parse(src).unwrap())
    }

    #[test]
    fn identity_application() {
        assert_eq!(nf("(\\x. x) y"), Term::var("y"));
    }

    #[test]
    fn substitution_avoids_capture() {
        let t = nf("(\\x. \\y. (x, y)) y");
        match t {
            Term::Lam(b, _, body) => {
                assert_ne!(b, "y");
                assert_eq!(*body, Term::pair(Term::var("y"), Term::var(&b)));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn let_over_pair_reduces_simultaneously() {
        assert_eq!(nf("let (a, b) = (b, a) in (b, a)"), parse("(a, b)").unwrap());
    }

    #[test]
    fn reduces_under_binders_and_inside_pairs() {
        assert_eq!(nf("\\z. ((\\x. x) z, (\\y. y) ())"), parse("\\z. (z, ())").unwrap());
    }

    #[test]
    fn annotations_do_not_block_redexes() {
        assert_eq!(nf("(\\x. x : B2 -o B2) y"), Term::var("y"));
    }

    #[test]
    fn normal_order_counts_steps() {
        let (t, n) = beta_reduce_counted(&parse("(\\f. \\x. f x) (\\y. y) z").unwrap());
        assert_eq!(t, Term::var("z"));
        assert_eq!(n, 3);
    }

    #[test]
    fn self_application_terminates_at_bound() {
        let omega = parse("(\\x. x x) (\\x. x x)").unwrap();
        let (_, n) = beta_reduce_counted(&omega);
        assert_eq!(n, MAX_STEPS);
    }
}
