//! Compilation of affine terms into `G(FDVec)`.
//!
//! Types: `B n |-> (C^n, I)`, tensor componentwise, `A -o B |-> A* ⊗ B`.
//! A term with free variables `x1 .. xk` (in order of first occurrence)
//! becomes a morphism `[A1] ⊗ .. ⊗ [Ak] -> [T]`.
//!
//! Weakening discards with the sum effect `(1, .., 1)` and, dually, creates
//! with the uniform state `(1, .., 1)/n`; the two pair to 1, so erasing a
//! closed argument does not rescale the result.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::goi::{Goi, GoiMorphism, GoiMorphismOf, GoiObject, GoiObjectOf};
use crate::linalg::{FdSpace, LinMap, TensorSpace, Vector, C64};
use crate::traced::FdVec;

use super::parse::parse;
use super::syntax::{Term, Type};
use super::typeck::{typecheck, TypedTerm};

/// Largest dimension either side of a base matrix may reach while wiring.
pub const MAX_WIRING_DIM: usize = 2048;

pub type Morphism = GoiMorphismOf<FdVec>;
pub type Object = GoiObjectOf<FdVec>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compiled {
    pub morphism: Morphism,
    pub ty: Type,
}

const G: Goi<FdVec> = Goi { base: FdVec };

fn base_space(n: usize) -> TensorSpace {
    TensorSpace::from(FdSpace::new(format!("B{n}"), n))
}

pub fn object(ty: &Type) -> Object {
    match ty {
        Type::Base(n) => GoiObject::new(base_space(*n), TensorSpace::unit()),
        Type::Unit => G.unit_object(),
        Type::Tensor(a, b) => G.tensor_objects(&object(a), &object(b)),
        Type::Lolli(a, b) => G.tensor_objects(&object(a).dual(), &object(b)),
    }
}

fn constant(ty: &Type, n: usize, value: f64, as_state: bool) -> Morphism {
    let (space, unit) = (base_space(n), TensorSpace::unit());
    let c = C64::new(value, 0.0);
    if as_state {
        GoiMorphism {
            src: G.unit_object(),
            dst: object(ty),
            under: LinMap::from_fn(unit, space, |_, _| c),
        }
    } else {
        GoiMorphism {
            src: object(ty),
            dst: G.unit_object(),
            under: LinMap::from_fn(space, unit, |_, _| c),
        }
    }
}

/// `[T] -> I`.
pub fn discard(ty: &Type) -> Result<Morphism> {
    match ty {
        Type::Base(n) => Ok(constant(ty, *n, 1.0, false)),
        Type::Unit => identity(&G.unit_object()),
        Type::Tensor(a, b) => tensor(&discard(a)?, &discard(b)?),
        Type::Lolli(a, b) => tensor(&G.dual_morphism(&state(a)?)?, &discard(b)?),
    }
}

/// `I -> [T]`.
pub fn state(ty: &Type) -> Result<Morphism> {
    match ty {
        Type::Base(n) => Ok(constant(ty, *n, 1.0 / *n as f64, true)),
        Type::Unit => identity(&G.unit_object()),
        Type::Tensor(a, b) => tensor(&state(a)?, &state(b)?),
        Type::Lolli(a, b) => tensor(&G.dual_morphism(&discard(a)?)?, &state(b)?),
    }
}

fn guard(dom: usize, cod: usize) -> Result<()> {
    if dom.max(cod) > MAX_WIRING_DIM {
        return Err(Error::Compile(format!(
            "term too large to compile densely ({dom}x{cod} exceeds {MAX_WIRING_DIM})"
        )));
    }
    Ok(())
}

/// GoI composition as a direct contraction over `B+` and `B-`; the same
/// map as `G.compose` without building `f~ ⊗ g~`.
fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if !G.objects_match(&f.dst, &g.src) {
        return Err(Error::Dimension("GoI composition: f.dst differs from g.src".into()));
    }
    let (a, mid, c) = (&f.src, &f.dst, &g.dst);
    let (ap, an, bp, bn, cp, cn) = (
        a.pos.dim(),
        a.neg.dim(),
        mid.pos.dim(),
        mid.neg.dim(),
        c.pos.dim(),
        c.neg.dim(),
    );
    guard(ap.saturating_mul(cn), an.saturating_mul(cp))?;
    let mut out = vec![C64::new(0.0, 0.0); ap * cn * an * cp];
    for xp in 0..ap {
        for xn in 0..an {
            for yp in 0..bp {
                for yn in 0..bn {
                    let fv = f.under.get(xp * bn + yn, xn * bp + yp);
                    if fv == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for zn in 0..cn {
                        for zp in 0..cp {
                            let gv = g.under.get(yp * cn + zn, yn * cp + zp);
                            out[(xp * cn + zn) * (an * cp) + xn * cp + zp] += fv * gv;
                        }
                    }
                }
            }
        }
    }
    let under = LinMap::new(a.pos.tensor(&c.neg), a.neg.tensor(&c.pos), out)?;
    Ok(GoiMorphism {
        src: a.clone(),
        dst: c.clone(),
        under,
    })
}

fn tensor_guard(f: &Morphism, g: &Morphism) -> Result<()> {
    guard(
        f.under.dom_dim().saturating_mul(g.under.dom_dim()),
        f.under.cod_dim().saturating_mul(g.under.cod_dim()),
    )
}

fn tensor(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    tensor_guard(f, g)?;
    G.tensor(f, g)
}

fn checked(o: &Object) -> Result<()> {
    let d = o.pos.dim().saturating_mul(o.neg.dim());
    guard(d, d)
}

fn identity(o: &Object) -> Result<Morphism> {
    checked(o)?;
    Ok(G.identity(o))
}

fn unit(o: &Object) -> Result<Morphism> {
    checked(&G.tensor_objects(o, &o.dual()))?;
    Ok(G.unit(o))
}

fn counit(o: &Object) -> Result<Morphism> {
    checked(&G.tensor_objects(o, &o.dual()))?;
    Ok(G.counit(o))
}

/// Flat index in the old layout for each flat index of the layout whose
/// factor `k` is old factor `perm[k]`.
fn reindex(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut stride = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0; dims.len()];
    for _ in 0..total {
        out.push(perm.iter().zip(&digits).map(|(&p, &d)| d * stride[p]).sum());
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    out
}

/// `f ; permute(blocks, perm)`, computed by relabelling the wires of `f`.
fn then_permute(f: &Morphism, blocks: &[Object], perm: &[usize]) -> Result<Morphism> {
    crate::linalg::check_permutation(perm, blocks.len())?;
    if !G.objects_match(&f.dst, &G.tensor_all(blocks)) {
        return Err(Error::Compile("permutation blocks do not match the codomain".into()));
    }
    let permuted: Vec<Object> = perm.iter().map(|&p| blocks[p].clone()).collect();
    let dst = G.tensor_all(&permuted);
    let wide: Vec<usize> = std::iter::once(0).chain(perm.iter().map(|&p| p + 1)).collect();
    let side = |outer: usize, part: fn(&Object) -> usize| -> Vec<usize> {
        std::iter::once(outer).chain(blocks.iter().map(part)).collect()
    };
    let rows = reindex(&side(f.src.pos.dim(), |o| o.neg.dim()), &wide);
    let cols = reindex(&side(f.src.neg.dim(), |o| o.pos.dim()), &wide);
    let dom = f.src.pos.tensor(&dst.neg);
    let cod = f.src.neg.tensor(&dst.pos);
    let under = LinMap::from_fn(dom, cod, |i, j| f.under.get(rows[i], cols[j]));
    Ok(GoiMorphism {
        src: f.src.clone(),
        dst,
        under,
    })
}

fn tensor_all(ms: &[Morphism]) -> Result<Morphism> {
    let mut acc = identity(&G.unit_object())?;
    for m in ms {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

fn context_object(ctx: &[(String, Type)]) -> Object {
    let objs: Vec<Object> = ctx.iter().map(|(_, t)| object(t)).collect();
    G.tensor_all(&objs)
}

/// Reorders named blocks into `target` order, discarding blocks whose name
/// is absent from `target`: a discarding map followed by a permutation.
fn arrange(blocks: &[(String, Type)], target: &[String]) -> Result<(Morphism, Vec<Object>, Vec<usize>)> {
    let mut kept = Vec::new();
    let mut parts = Vec::new();
    for (name, ty) in blocks {
        if target.contains(name) {
            kept.push((name.clone(), ty.clone()));
            parts.push(identity(&object(ty))?);
        } else {
            parts.push(discard(ty)?);
        }
    }
    let drop = tensor_all(&parts)?;
    let perm: Vec<usize> = target
        .iter()
        .map(|n| {
            kept.iter()
                .position(|(k, _)| k == n)
                .ok_or_else(|| Error::Compile(format!("no block for {n}")))
        })
        .collect::<Result<_>>()?;
    let objs: Vec<Object> = kept.iter().map(|(_, t)| object(t)).collect();
    Ok((drop, objs, perm))
}

struct Node {
    morphism: Morphism,
    ty: Type,
    ctx: Vec<(String, Type)>,
}

fn lookup(env: &[(String, Type)], x: &str) -> Result<Type> {
    env.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, t)| t.clone())
        .ok_or_else(|| Error::Compile(format!("unbound variable {x}")))
}

fn node(t: &Term, env: &mut Vec<(String, Type)>) -> Result<Node> {
    match t {
        Term::Var(x) => {
            let ty = lookup(env, x)?;
            Ok(Node {
                morphism: identity(&object(&ty))?,
                ctx: vec![(x.clone(), ty.clone())],
                ty,
            })
        }
        Term::Unit => Ok(Node {
            morphism: identity(&G.unit_object())?,
            ty: Type::Unit,
            ctx: Vec::new(),
        }),
        Term::Annot(a, _) => node(a, env),
        Term::Pair(a, b) => {
            let l = node(a, env)?;
            let r = node(b, env)?;
            Ok(Node {
                morphism: tensor(&l.morphism, &r.morphism)?,
                ty: Type::tensor(l.ty, r.ty),
                ctx: [l.ctx, r.ctx].concat(),
            })
        }
        Term::App(f, a) => {
            let h = node(f, env)?;
            let arg = node(a, env)?;
            let (dom, cod) = match &h.ty {
                Type::Lolli(d, c) => ((**d).clone(), (**c).clone()),
                other => return Err(Error::Compile(format!("applying a term of type {other}"))),
            };
            if arg.ty != dom {
                return Err(Error::Compile(format!("argument of type {} for {dom}", arg.ty)));
            }
            let (oa, ob) = (object(&dom), object(&cod));
            let both = tensor(&h.morphism, &arg.morphism)?;
            let ordered = then_permute(&both, &[oa.dual(), ob.clone(), oa.clone()], &[1, 2, 0])?;
            let eval = tensor(&identity(&ob)?, &counit(&oa)?)?;
            Ok(Node {
                morphism: compose(&ordered, &eval)?,
                ty: cod,
                ctx: [h.ctx, arg.ctx].concat(),
            })
        }
        Term::Lam(x, ann, body) => {
            let a = ann
                .clone()
                .ok_or_else(|| Error::Compile(format!("binder {x} is not annotated")))?;
            env.push((x.clone(), a.clone()));
            let b = node(body, env);
            env.pop();
            let b = b?;
            let ty = Type::lolli(a.clone(), b.ty.clone());
            let oa = object(&a);
            if b.ctx.iter().any(|(y, _)| y == x) {
                let outer: Vec<(String, Type)> =
                    b.ctx.iter().filter(|(y, _)| y != x).cloned().collect();
                let open = tensor(&identity(&context_object(&outer))?, &unit(&oa.dual())?)?;
                let (objs, perm) = arrange_with_dual(&outer, x, &a, &b.ctx)?;
                let arranged = then_permute(&open, &objs, &perm)?;
                let run = tensor(&identity(&oa.dual())?, &b.morphism)?;
                Ok(Node {
                    morphism: compose(&arranged, &run)?,
                    ty,
                    ctx: outer,
                })
            } else {
                Ok(Node {
                    morphism: tensor(&G.dual_morphism(&discard(&a)?)?, &b.morphism)?,
                    ty,
                    ctx: b.ctx,
                })
            }
        }
        Term::LetPair(x, y, s, u) => {
            let sn = node(s, env)?;
            let (ta, tb) = match &sn.ty {
                Type::Tensor(a, b) => ((**a).clone(), (**b).clone()),
                other => return Err(Error::Compile(format!("destructuring a term of type {other}"))),
            };
            env.push((x.clone(), ta.clone()));
            env.push((y.clone(), tb.clone()));
            let un = node(u, env);
            env.pop();
            env.pop();
            let un = un?;
            let rest: Vec<(String, Type)> = un
                .ctx
                .iter()
                .filter(|(n, _)| n != x && n != y)
                .cloned()
                .collect();
            let first = tensor(&sn.morphism, &identity(&context_object(&rest))?)?;
            let mut blocks = vec![(x.clone(), ta), (y.clone(), tb)];
            blocks.extend(rest.iter().cloned());
            let target: Vec<String> = un.ctx.iter().map(|(n, _)| n.clone()).collect();
            let (drop, objs, perm) = arrange(&blocks, &target)?;
            let arranged = then_permute(&compose(&first, &drop)?, &objs, &perm)?;
            Ok(Node {
                morphism: compose(&arranged, &un.morphism)?,
                ty: un.ty,
                ctx: [sn.ctx, rest].concat(),
            })
        }
    }
}

/// Blocks `outer ⊗ A* ⊗ A` and the permutation onto `A* ⊗ body_ctx`, with
/// `A` moved to the position of `x`.
fn arrange_with_dual(
    outer: &[(String, Type)],
    x: &str,
    a: &Type,
    body_ctx: &[(String, Type)],
) -> Result<(Vec<Object>, Vec<usize>)> {
    let oa = object(a);
    let mut objs: Vec<Object> = outer.iter().map(|(_, t)| object(t)).collect();
    objs.push(oa.dual());
    objs.push(oa);
    let dual_at = outer.len();
    let mut perm = vec![dual_at];
    for (n, _) in body_ctx {
        if n == x {
            perm.push(dual_at + 1);
        } else {
            let i = outer
                .iter()
                .position(|(m, _)| m == n)
                .ok_or_else(|| Error::Compile(format!("lost variable {n}")))?;
            perm.push(i);
        }
    }
    Ok((objs, perm))
}

/// Compiles a closed, checked term.
pub fn compile(t: &TypedTerm) -> Result<Compiled> {
    let free = t.term.free_vars();
    if !free.is_empty() {
        return Err(Error::Compile(format!("open term: free variables {}", free.join(", "))));
    }
    let n = node(&t.term, &mut Vec::new())?;
    if n.ty != t.ty {
        return Err(Error::Compile(format!("compiled type {} differs from {}", n.ty, t.ty)));
    }
    Ok(Compiled {
        morphism: n.morphism,
        ty: n.ty,
    })
}

/// Parses, checks and compiles a closed program.
pub fn compile_source(src: &str) -> Result<Compiled> {
    let term = parse(src)?;
    let typed = typecheck(&term, &[])?;
    compile(&typed)
}

/// Splits `A1 -o .. -o Ak -o B` into its arguments and result.
pub fn uncurry(ty: &Type) -> (Vec<Type>, Type) {
    let mut args = Vec::new();
    let mut cur = ty;
    while let Type::Lolli(a, b) = cur {
        args.push((**a).clone());
        cur = b;
    }
    (args, cur.clone())
}

/// The linear map `A1 ⊗ .. ⊗ Ak -> B` of a first-order program, read off by
/// feeding basis states through the compiled morphism.
pub fn denote(c: &Compiled) -> Result<LinMap> {
    let (args, result) = uncurry(&c.ty);
    if let Some(bad) = args.iter().chain([&result]).find(|t| !t.is_data()) {
        return Err(Error::Compile(format!(
            "unsupported extraction: {bad} in {} is higher-order",
            c.ty
        )));
    }
    let m = &c.morphism;
    let dom = args
        .iter()
        .fold(TensorSpace::unit(), |acc, t| acc.tensor(&object(t).pos));
    let cod = object(&result).pos;
    if m.under.dom() != &dom || m.under.cod() != &cod {
        return Err(Error::Compile("compiled morphism has an unexpected shape".into()));
    }
    let mut entries = Vec::with_capacity(dom.dim() * cod.dim());
    for i in 0..dom.dim() {
        let out = m.under.apply(&Vector::basis(dom.clone(), i))?;
        entries.extend_from_slice(out.coords());
    }
    LinMap::new(dom, cod, entries)
}
