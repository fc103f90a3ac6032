//! The Geometry-of-Interaction construction `G(C)` over a traced category.
//!
//! Objects are pairs `(A+, A-)`. A morphism `(A+, A-) -> (B+, B-)` is a base
//! morphism `A+ ⊗ B- -> A- ⊗ B+`: positive data flows left to right,
//! negative data flows right to left. Composition feeds each side's output
//! into the other's input through the base trace over `B+ ⊗ B-`.
//!
//! Every structural morphism of `G(C)` (identities, symmetries, units and
//! counits of the compact closed structure) has a base symmetry as its
//! underlying morphism.

use rand::Rng;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::traced::TracedCategory;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoiObject<O> {
    pub pos: O,
    pub neg: O,
}

impl<O> GoiObject<O> {
    pub fn new(pos: O, neg: O) -> Self {
        GoiObject { pos, neg }
    }
}

impl<O: Clone> GoiObject<O> {
    /// Swaps the two components. Strictly involutive.
    pub fn dual(&self) -> Self {
        GoiObject {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }
}

/// `f : src -> dst` with `under : src.pos ⊗ dst.neg -> src.neg ⊗ dst.pos`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoiMorphism<O, M> {
    pub src: GoiObject<O>,
    pub dst: GoiObject<O>,
    pub under: M,
}

pub type GoiObjectOf<C> = GoiObject<<C as TracedCategory>::Object>;
pub type GoiMorphismOf<C> =
    GoiMorphism<<C as TracedCategory>::Object, <C as TracedCategory>::Morphism>;

/// `G(C)` for a base instance `C`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Goi<C> {
    pub base: C,
}

impl<C: TracedCategory> Goi<C> {
    pub fn new(base: C) -> Self {
        Goi { base }
    }

    pub fn unit_object(&self) -> GoiObjectOf<C> {
        GoiObject::new(self.base.unit(), self.base.unit())
    }

    pub fn tensor_objects(&self, a: &GoiObjectOf<C>, b: &GoiObjectOf<C>) -> GoiObjectOf<C> {
        GoiObject::new(
            self.base.tensor_objects(&a.pos, &b.pos),
            self.base.tensor_objects(&a.neg, &b.neg),
        )
    }

    pub fn tensor_all(&self, objs: &[GoiObjectOf<C>]) -> GoiObjectOf<C> {
        objs.iter()
            .fold(self.unit_object(), |acc, o| self.tensor_objects(&acc, o))
    }

    pub fn objects_match(&self, a: &GoiObjectOf<C>, b: &GoiObjectOf<C>) -> bool {
        self.base.objects_match(&a.pos, &b.pos) && self.base.objects_match(&a.neg, &b.neg)
    }

    /// Validates that `under` has the shape required by the endpoints.
    pub fn morphism(
        &self,
        src: GoiObjectOf<C>,
        dst: GoiObjectOf<C>,
        under: C::Morphism,
    ) -> Result<GoiMorphismOf<C>> {
        let m = GoiMorphism { src, dst, under };
        self.check(&m)?;
        Ok(m)
    }

    pub fn check(&self, m: &GoiMorphismOf<C>) -> Result<()> {
        let b = &self.base;
        let dom = b.tensor_objects(&m.src.pos, &m.dst.neg);
        let cod = b.tensor_objects(&m.src.neg, &m.dst.pos);
        if !b.objects_match(&b.dom(&m.under), &dom) || !b.objects_match(&b.cod(&m.under), &cod) {
            return Err(Error::Dimension(
                "underlying morphism does not match src.pos ⊗ dst.neg -> src.neg ⊗ dst.pos".into(),
            ));
        }
        Ok(())
    }

    /// Parses a JSON morphism and checks its shape.
    pub fn decode(&self, json: &str) -> Result<GoiMorphismOf<C>>
    where
        C::Object: DeserializeOwned,
        C::Morphism: DeserializeOwned,
    {
        let m: GoiMorphismOf<C> = serde_json::from_str(json)?;
        self.check(&m).map_err(|e| Error::Decode(e.to_string()))?;
        Ok(m)
    }

    /// Underlying morphism is the symmetry `A+ ⊗ A- -> A- ⊗ A+`.
    pub fn identity(&self, a: &GoiObjectOf<C>) -> GoiMorphismOf<C> {
        GoiMorphism {
            src: a.clone(),
            dst: a.clone(),
            under: self.base.symmetry(&a.pos, &a.neg),
        }
    }

    /// `f ; g` as `Tr^{B+ ⊗ B-}(pre ; (f~ ⊗ g~) ; post)`, with
    /// `pre : A+ ⊗ C- ⊗ B+ ⊗ B- -> A+ ⊗ B- ⊗ B+ ⊗ C-` and
    /// `post : A- ⊗ B+ ⊗ B- ⊗ C+ -> A- ⊗ C+ ⊗ B+ ⊗ B-`.
    pub fn compose(&self, f: &GoiMorphismOf<C>, g: &GoiMorphismOf<C>) -> Result<GoiMorphismOf<C>> {
        if !self.objects_match(&f.dst, &g.src) {
            return Err(Error::Dimension("GoI composition: f.dst differs from g.src".into()));
        }
        let b = &self.base;
        let (a, mid, c) = (&f.src, &f.dst, &g.dst);
        let pre = b.permute(
            &[a.pos.clone(), c.neg.clone(), mid.pos.clone(), mid.neg.clone()],
            &[0, 3, 2, 1],
        )?;
        let post = b.permute(
            &[a.neg.clone(), mid.pos.clone(), mid.neg.clone(), c.pos.clone()],
            &[0, 3, 1, 2],
        )?;
        let body = b.compose(&b.compose(&pre, &b.tensor(&f.under, &g.under))?, &post)?;
        let under = b.trace(
            &body,
            &b.tensor_objects(&a.pos, &c.neg),
            &b.tensor_objects(&a.neg, &c.pos),
            &b.tensor_objects(&mid.pos, &mid.neg),
        )?;
        Ok(GoiMorphism {
            src: a.clone(),
            dst: c.clone(),
            under,
        })
    }

    pub fn tensor(&self, f: &GoiMorphismOf<C>, g: &GoiMorphismOf<C>) -> Result<GoiMorphismOf<C>> {
        let b = &self.base;
        let pre = b.permute(
            &[f.src.pos.clone(), g.src.pos.clone(), f.dst.neg.clone(), g.dst.neg.clone()],
            &[0, 2, 1, 3],
        )?;
        let post = b.permute(
            &[f.src.neg.clone(), f.dst.pos.clone(), g.src.neg.clone(), g.dst.pos.clone()],
            &[0, 2, 1, 3],
        )?;
        let under = b.compose(&b.compose(&pre, &b.tensor(&f.under, &g.under))?, &post)?;
        Ok(GoiMorphism {
            src: self.tensor_objects(&f.src, &g.src),
            dst: self.tensor_objects(&f.dst, &g.dst),
            under,
        })
    }

    pub fn dual(&self, a: &GoiObjectOf<C>) -> GoiObjectOf<C> {
        a.dual()
    }

    /// `f* : B* -> A*` for `f : A -> B`.
    pub fn dual_morphism(&self, f: &GoiMorphismOf<C>) -> Result<GoiMorphismOf<C>> {
        let b = &self.base;
        let under = b.compose(
            &b.compose(&b.symmetry(&f.dst.neg, &f.src.pos), &f.under)?,
            &b.symmetry(&f.src.neg, &f.dst.pos),
        )?;
        Ok(GoiMorphism {
            src: f.dst.dual(),
            dst: f.src.dual(),
            under,
        })
    }

    /// `c : A -> B` as `(A, I) -> (B, I)`.
    pub fn embed(&self, c: &C::Morphism) -> GoiMorphismOf<C> {
        let unit = self.base.unit();
        GoiMorphism {
            src: GoiObject::new(self.base.dom(c), unit.clone()),
            dst: GoiObject::new(self.base.cod(c), unit),
            under: c.clone(),
        }
    }

    /// `eta : I -> A ⊗ A*`.
    pub fn unit(&self, a: &GoiObjectOf<C>) -> GoiMorphismOf<C> {
        GoiMorphism {
            src: self.unit_object(),
            dst: self.tensor_objects(a, &a.dual()),
            under: self.base.symmetry(&a.neg, &a.pos),
        }
    }

    /// `epsilon : A ⊗ A* -> I`.
    pub fn counit(&self, a: &GoiObjectOf<C>) -> GoiMorphismOf<C> {
        GoiMorphism {
            src: self.tensor_objects(a, &a.dual()),
            dst: self.unit_object(),
            under: self.base.symmetry(&a.pos, &a.neg),
        }
    }

    /// Reorders `blocks[0] ⊗ ... ⊗ blocks[n-1]` so that output block `k` is
    /// input block `perm[k]`.
    pub fn permute(&self, blocks: &[GoiObjectOf<C>], perm: &[usize]) -> Result<GoiMorphismOf<C>> {
        crate::linalg::check_permutation(perm, blocks.len())?;
        let n = blocks.len();
        let mut inverse = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let base_blocks: Vec<C::Object> = blocks
            .iter()
            .map(|o| o.pos.clone())
            .chain(perm.iter().map(|&p| blocks[p].neg.clone()))
            .collect();
        let base_perm: Vec<usize> = (0..n)
            .map(|i| n + inverse[i])
            .chain(perm.iter().copied())
            .collect();
        let under = self.base.permute(&base_blocks, &base_perm)?;
        let permuted: Vec<_> = perm.iter().map(|&p| blocks[p].clone()).collect();
        Ok(GoiMorphism {
            src: self.tensor_all(blocks),
            dst: self.tensor_all(&permuted),
            under,
        })
    }

    pub fn symmetry(&self, a: &GoiObjectOf<C>, b: &GoiObjectOf<C>) -> Result<GoiMorphismOf<C>> {
        self.permute(&[a.clone(), b.clone()], &[1, 0])
    }

    /// Trace of `f : x ⊗ u -> y ⊗ u` built from the compact closed structure:
    /// `(id_x ⊗ eta_u) ; (f ⊗ id_u*) ; (id_y ⊗ epsilon_u)`.
    pub fn trace(
        &self,
        f: &GoiMorphismOf<C>,
        x: &GoiObjectOf<C>,
        y: &GoiObjectOf<C>,
        u: &GoiObjectOf<C>,
    ) -> Result<GoiMorphismOf<C>> {
        self.check_trace_shape(f, x, y, u)?;
        let open = self.tensor(&self.identity(x), &self.unit(u))?;
        let body = self.tensor(f, &self.identity(&u.dual()))?;
        let close = self.tensor(&self.identity(y), &self.counit(u))?;
        self.compose(&self.compose(&open, &body)?, &close)
    }

    /// The same trace computed in one base trace over `u+ ⊗ u-`.
    pub fn trace_direct(
        &self,
        f: &GoiMorphismOf<C>,
        x: &GoiObjectOf<C>,
        y: &GoiObjectOf<C>,
        u: &GoiObjectOf<C>,
    ) -> Result<GoiMorphismOf<C>> {
        self.check_trace_shape(f, x, y, u)?;
        let b = &self.base;
        // f~ : x+ ⊗ u+ ⊗ y- ⊗ u- -> x- ⊗ u- ⊗ y+ ⊗ u+
        let pre = b.permute(
            &[x.pos.clone(), y.neg.clone(), u.pos.clone(), u.neg.clone()],
            &[0, 2, 1, 3],
        )?;
        let post = b.permute(
            &[x.neg.clone(), u.neg.clone(), y.pos.clone(), u.pos.clone()],
            &[0, 2, 3, 1],
        )?;
        let body = b.compose(&b.compose(&pre, &f.under)?, &post)?;
        let under = b.trace(
            &body,
            &b.tensor_objects(&x.pos, &y.neg),
            &b.tensor_objects(&x.neg, &y.pos),
            &b.tensor_objects(&u.pos, &u.neg),
        )?;
        Ok(GoiMorphism {
            src: x.clone(),
            dst: y.clone(),
            under,
        })
    }

    fn check_trace_shape(
        &self,
        f: &GoiMorphismOf<C>,
        x: &GoiObjectOf<C>,
        y: &GoiObjectOf<C>,
        u: &GoiObjectOf<C>,
    ) -> Result<()> {
        if !self.objects_match(&f.src, &self.tensor_objects(x, u))
            || !self.objects_match(&f.dst, &self.tensor_objects(y, u))
        {
            return Err(Error::Dimension("GoI trace: morphism is not x ⊗ u -> y ⊗ u".into()));
        }
        Ok(())
    }

    /// Infinite when endpoints differ.
    pub fn distance(&self, f: &GoiMorphismOf<C>, g: &GoiMorphismOf<C>) -> f64 {
        if !self.objects_match(&f.src, &g.src) || !self.objects_match(&f.dst, &g.dst) {
            return f64::INFINITY;
        }
        self.base.distance(&f.under, &g.under)
    }

    pub fn approx_eq(&self, f: &GoiMorphismOf<C>, g: &GoiMorphismOf<C>, tol: f64) -> bool {
        self.distance(f, g) <= tol
    }

    pub fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> GoiObjectOf<C> {
        GoiObject::new(
            self.base.random_object(rng, max_size),
            self.base.random_object(rng, max_size),
        )
    }

    pub fn random_morphism<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        src: &GoiObjectOf<C>,
        dst: &GoiObjectOf<C>,
    ) -> GoiMorphismOf<C> {
        let b = &self.base;
        let under = b.random_morphism(
            rng,
            &b.tensor_objects(&src.pos, &dst.neg),
            &b.tensor_objects(&src.neg, &dst.pos),
        );
        GoiMorphism {
            src: src.clone(),
            dst: dst.clone(),
            under,
        }
    }
}
