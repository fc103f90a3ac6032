//! The three traced symmetric monoidal categories: finite-dimensional vector
//! spaces under `⊗`, finite relations under cartesian product, and finite
//! relations under disjoint union.
//!
//! All three are presented strictly. Objects are flat lists (factor lists for
//! `FDVec`, flattened carriers for relations) so associators and unitors are
//! identities and never have to be inserted by hand.

use std::fmt::{self, Debug};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_permutation, flatten, permute_factors, unflatten, FdSpace, LinMap, TensorSpace, C64, ZERO};
use crate::rel::{same_size, symmetry_plus, symmetry_times, Carrier, Rel};

/// Which of the three instances a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CategoryKind {
    FdvecTensor,
    FrelTimes,
    FrelPlus,
}

impl CategoryKind {
    pub const ALL: [CategoryKind; 3] = [
        CategoryKind::FdvecTensor,
        CategoryKind::FrelTimes,
        CategoryKind::FrelPlus,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            CategoryKind::FdvecTensor => "fdvec",
            CategoryKind::FrelTimes => "rel-times",
            CategoryKind::FrelPlus => "rel-plus",
        }
    }
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for CategoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fdvec" | "fdvec-tensor" => Ok(CategoryKind::FdvecTensor),
            "rel-times" | "frel-times" | "times" => Ok(CategoryKind::FrelTimes),
            "rel-plus" | "frel-plus" | "plus" => Ok(CategoryKind::FrelPlus),
            other => Err(Error::Precondition(format!("unknown category '{other}'"))),
        }
    }
}

/// A strict traced symmetric monoidal category.
pub trait TracedCategory {
    type Object: Clone + Debug + PartialEq + Serialize;
    type Morphism: Clone + Debug + Serialize;

    fn kind(&self) -> CategoryKind;

    fn unit(&self) -> Self::Object;
    fn tensor_objects(&self, a: &Self::Object, b: &Self::Object) -> Self::Object;
    /// Whether two objects are interchangeable as composition boundaries.
    fn objects_match(&self, a: &Self::Object, b: &Self::Object) -> bool;

    fn dom(&self, f: &Self::Morphism) -> Self::Object;
    fn cod(&self, f: &Self::Morphism) -> Self::Object;

    fn identity(&self, a: &Self::Object) -> Self::Morphism;
    /// Sequential composition `f ; g`.
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;
    fn tensor(&self, f: &Self::Morphism, g: &Self::Morphism) -> Self::Morphism;
    /// `a ⊗ b -> b ⊗ a`.
    fn symmetry(&self, a: &Self::Object, b: &Self::Object) -> Self::Morphism;
    /// Block permutation of `blocks[0] ⊗ ... ⊗ blocks[n-1]`: output block `k`
    /// is input block `perm[k]`.
    fn permute(&self, blocks: &[Self::Object], perm: &[usize]) -> Result<Self::Morphism>;
    /// `Tr^u_{a,b}(f)` for `f : a ⊗ u -> b ⊗ u`.
    fn trace(
        &self,
        f: &Self::Morphism,
        a: &Self::Object,
        b: &Self::Object,
        u: &Self::Object,
    ) -> Result<Self::Morphism>;

    /// Zero iff equal. Relational instances only return 0 or 1.
    fn distance(&self, f: &Self::Morphism, g: &Self::Morphism) -> f64;

    fn approx_eq(&self, f: &Self::Morphism, g: &Self::Morphism, tol: f64) -> bool {
        self.distance(f, g) <= tol
    }

    fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Self::Object;
    fn random_morphism<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        a: &Self::Object,
        b: &Self::Object,
    ) -> Self::Morphism;

    fn tensor_all(&self, objs: &[Self::Object]) -> Self::Object {
        objs.iter()
            .fold(self.unit(), |acc, o| self.tensor_objects(&acc, o))
    }
}

/// `(FDVec, ⊗)` with the usual partial trace.
#[derive(Clone, Copy, Debug, Default)]
pub struct FdVec;

/// `(FRel, ×)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RelTimes;

/// `(FRel, +)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RelPlus;

/// Partial trace over `u`: `Tr(f)_{ik} = sum_a f_{(i,a),(k,a)}` for
/// `f : v ⊗ u -> w ⊗ u`.
pub fn vec_trace(f: &LinMap, v: &TensorSpace, w: &TensorSpace, u: &TensorSpace) -> Result<LinMap> {
    if f.dom() != &v.tensor(u) || f.cod() != &w.tensor(u) {
        return Err(Error::Dimension(format!(
            "trace over {u} of a map {} -> {} (expected {} -> {})",
            f.dom(),
            f.cod(),
            v.tensor(u),
            w.tensor(u)
        )));
    }
    let n = u.dim();
    Ok(LinMap::from_fn(v.clone(), w.clone(), |i, k| {
        (0..n).map(|a| f.get(i * n + a, k * n + a)).sum()
    }))
}

/// `x Tr(R) y` iff `(x,z) R (y,z)` for some `z`.
pub fn rel_times_trace(r: &Rel, x: &Carrier, y: &Carrier, z: &Carrier) -> Result<Rel> {
    same_size(r.dom(), &x.product(z), "trace domain")?;
    same_size(r.cod(), &y.product(z), "trace codomain")?;
    let nz = z.len();
    let pairs = r
        .pairs()
        .iter()
        .filter(|&&(a, b)| a % nz == b % nz)
        .map(|&(a, b)| (a / nz, b / nz));
    Rel::new(x.clone(), y.clone(), pairs)
}

/// Feedback trace of `R ⊆ (X+Z) × (Y+Z)`: `R_XY ∪ R_XZ ; R_ZZ* ; R_ZY`, where
/// the direct path (no pass through `Z`) is included.
pub fn rel_plus_trace(r: &Rel, x: &Carrier, y: &Carrier, z: &Carrier) -> Result<Rel> {
    rel_plus_trace_with_rounds(r, x, y, z).map(|(t, _)| t)
}

/// Like [`rel_plus_trace`], also reporting how many squaring rounds the
/// feedback closure needed before it saturated.
pub fn rel_plus_trace_with_rounds(
    r: &Rel,
    x: &Carrier,
    y: &Carrier,
    z: &Carrier,
) -> Result<(Rel, usize)> {
    same_size(r.dom(), &x.sum(z), "trace domain")?;
    same_size(r.cod(), &y.sum(z), "trace codomain")?;
    let (nx, ny, nz) = (x.len(), y.len(), z.len());
    let xy = r.block(0..nx, 0..ny, x.clone(), y.clone());
    let xz = r.block(0..nx, ny..ny + nz, x.clone(), z.clone());
    let zz = r.block(nx..nx + nz, ny..ny + nz, z.clone(), z.clone());
    let zy = r.block(nx..nx + nz, 0..ny, z.clone(), y.clone());
    let (loop_closure, rounds) = zz.star()?;
    let through = xz.compose(&loop_closure)?.compose(&zy)?;
    Ok((xy.union(&through)?, rounds))
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_linmap<R: Rng + ?Sized>(rng: &mut R, a: &TensorSpace, b: &TensorSpace) -> LinMap {
    LinMap::from_fn(a.clone(), b.clone(), |_, _| random_complex(rng))
}

/// Entries drawn from `[0, 1)`, with roughly a third set to zero.
pub fn random_nonnegative_linmap<R: Rng + ?Sized>(
    rng: &mut R,
    a: &TensorSpace,
    b: &TensorSpace,
) -> LinMap {
    LinMap::from_fn(a.clone(), b.clone(), |_, _| {
        if rng.gen_bool(0.35) {
            ZERO
        } else {
            C64::new(rng.gen_range(0.05..1.0), 0.0)
        }
    })
}

pub fn random_rel<R: Rng + ?Sized>(rng: &mut R, a: &Carrier, b: &Carrier) -> Rel {
    let (n, m) = (a.len(), b.len());
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if rng.gen_bool(0.35) {
                pairs.push((i, j));
            }
        }
    }
    Rel::new(a.clone(), b.clone(), pairs).expect("indices in range")
}

impl TracedCategory for FdVec {
    type Object = TensorSpace;
    type Morphism = LinMap;

    fn kind(&self) -> CategoryKind {
        CategoryKind::FdvecTensor
    }

    fn unit(&self) -> TensorSpace {
        TensorSpace::unit()
    }

    fn tensor_objects(&self, a: &TensorSpace, b: &TensorSpace) -> TensorSpace {
        a.tensor(b)
    }

    fn objects_match(&self, a: &TensorSpace, b: &TensorSpace) -> bool {
        a == b
    }

    fn dom(&self, f: &LinMap) -> TensorSpace {
        f.dom().clone()
    }

    fn cod(&self, f: &LinMap) -> TensorSpace {
        f.cod().clone()
    }

    fn identity(&self, a: &TensorSpace) -> LinMap {
        LinMap::identity(a.clone())
    }

    fn compose(&self, f: &LinMap, g: &LinMap) -> Result<LinMap> {
        f.compose(g)
    }

    fn tensor(&self, f: &LinMap, g: &LinMap) -> LinMap {
        f.kron(g)
    }

    fn symmetry(&self, a: &TensorSpace, b: &TensorSpace) -> LinMap {
        crate::linalg::swap(a, b)
    }

    fn permute(&self, blocks: &[TensorSpace], perm: &[usize]) -> Result<LinMap> {
        check_permutation(perm, blocks.len())?;
        let mut starts = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in blocks {
            starts.push(acc);
            acc += b.len();
        }
        let factor_perm: Vec<usize> = perm
            .iter()
            .flat_map(|&p| starts[p]..starts[p] + blocks[p].len())
            .collect();
        permute_factors(&TensorSpace::tensor_all(blocks), &factor_perm)
    }

    fn trace(&self, f: &LinMap, a: &TensorSpace, b: &TensorSpace, u: &TensorSpace) -> Result<LinMap> {
        vec_trace(f, a, b, u)
    }

    fn distance(&self, f: &LinMap, g: &LinMap) -> f64 {
        f.max_abs_diff(g)
    }

    fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> TensorSpace {
        let dim = rng.gen_range(1..=max_size.max(1));
        TensorSpace::from(FdSpace::new(format!("C{dim}"), dim))
    }

    fn random_morphism<R: Rng + ?Sized>(&self, rng: &mut R, a: &TensorSpace, b: &TensorSpace) -> LinMap {
        random_linmap(rng, a, b)
    }
}

fn rel_random_carrier<R: Rng + ?Sized>(rng: &mut R, max_size: usize, allow_empty: bool) -> Carrier {
    let lo = if allow_empty { 0 } else { 1 };
    let n = rng.gen_range(lo..=max_size.max(1));
    let tag = (b'a' + rng.gen_range(0..26u8)) as char;
    Carrier::indexed(&tag.to_string(), n)
}

impl TracedCategory for RelTimes {
    type Object = Carrier;
    type Morphism = Rel;

    fn kind(&self) -> CategoryKind {
        CategoryKind::FrelTimes
    }

    fn unit(&self) -> Carrier {
        Carrier::singleton()
    }

    fn tensor_objects(&self, a: &Carrier, b: &Carrier) -> Carrier {
        a.product(b)
    }

    fn objects_match(&self, a: &Carrier, b: &Carrier) -> bool {
        a.len() == b.len()
    }

    fn dom(&self, f: &Rel) -> Carrier {
        f.dom().clone()
    }

    fn cod(&self, f: &Rel) -> Carrier {
        f.cod().clone()
    }

    fn identity(&self, a: &Carrier) -> Rel {
        Rel::identity(a.clone())
    }

    fn compose(&self, f: &Rel, g: &Rel) -> Result<Rel> {
        f.compose(g)
    }

    fn tensor(&self, f: &Rel, g: &Rel) -> Rel {
        f.tensor_times(g)
    }

    fn symmetry(&self, a: &Carrier, b: &Carrier) -> Rel {
        symmetry_times(a, b)
    }

    fn permute(&self, blocks: &[Carrier], perm: &[usize]) -> Result<Rel> {
        check_permutation(perm, blocks.len())?;
        let dims: Vec<usize> = blocks.iter().map(Carrier::len).collect();
        let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let dom = blocks.iter().fold(Carrier::singleton(), |acc, c| acc.product(c));
        let cod = perm
            .iter()
            .fold(Carrier::singleton(), |acc, &p| acc.product(&blocks[p]));
        let pairs = (0..dom.len()).map(|i| {
            let idx = unflatten(i, &dims);
            let out: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            (i, flatten(&out, &out_dims))
        });
        Rel::new(dom, cod, pairs.collect::<Vec<_>>())
    }

    fn trace(&self, f: &Rel, a: &Carrier, b: &Carrier, u: &Carrier) -> Result<Rel> {
        rel_times_trace(f, a, b, u)
    }

    fn distance(&self, f: &Rel, g: &Rel) -> f64 {
        if f.same_graph(g) {
            0.0
        } else {
            1.0
        }
    }

    fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Carrier {
        rel_random_carrier(rng, max_size, false)
    }

    fn random_morphism<R: Rng + ?Sized>(&self, rng: &mut R, a: &Carrier, b: &Carrier) -> Rel {
        random_rel(rng, a, b)
    }
}

impl TracedCategory for RelPlus {
    type Object = Carrier;
    type Morphism = Rel;

    fn kind(&self) -> CategoryKind {
        CategoryKind::FrelPlus
    }

    fn unit(&self) -> Carrier {
        Carrier::empty()
    }

    fn tensor_objects(&self, a: &Carrier, b: &Carrier) -> Carrier {
        a.sum(b)
    }

    fn objects_match(&self, a: &Carrier, b: &Carrier) -> bool {
        a.len() == b.len()
    }

    fn dom(&self, f: &Rel) -> Carrier {
        f.dom().clone()
    }

    fn cod(&self, f: &Rel) -> Carrier {
        f.cod().clone()
    }

    fn identity(&self, a: &Carrier) -> Rel {
        Rel::identity(a.clone())
    }

    fn compose(&self, f: &Rel, g: &Rel) -> Result<Rel> {
        f.compose(g)
    }

    fn tensor(&self, f: &Rel, g: &Rel) -> Rel {
        f.tensor_plus(g)
    }

    fn symmetry(&self, a: &Carrier, b: &Carrier) -> Rel {
        symmetry_plus(a, b)
    }

    fn permute(&self, blocks: &[Carrier], perm: &[usize]) -> Result<Rel> {
        check_permutation(perm, blocks.len())?;
        let mut in_start = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in blocks {
            in_start.push(acc);
            acc += b.len();
        }
        let mut out_start = vec![0; blocks.len()];
        let mut acc = 0;
        for &p in perm {
            out_start[p] = acc;
            acc += blocks[p].len();
        }
        let dom = blocks.iter().fold(Carrier::empty(), |acc, c| acc.sum(c));
        let cod = perm.iter().fold(Carrier::empty(), |acc, &p| acc.sum(&blocks[p]));
        let pairs: Vec<_> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, c)| (0..c.len()).map(move |o| (b, o)))
            .map(|(b, o)| (in_start[b] + o, out_start[b] + o))
            .collect();
        Rel::new(dom, cod, pairs)
    }

    fn trace(&self, f: &Rel, a: &Carrier, b: &Carrier, u: &Carrier) -> Result<Rel> {
        rel_plus_trace(f, a, b, u)
    }

    fn distance(&self, f: &Rel, g: &Rel) -> f64 {
        if f.same_graph(g) {
            0.0
        } else {
            1.0
        }
    }

    fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Carrier {
        rel_random_carrier(rng, max_size, false)
    }

    fn random_morphism<R: Rng + ?Sized>(&self, rng: &mut R, a: &Carrier, b: &Carrier) -> Rel {
        random_rel(rng, a, b)
    }
}
