//! Dense complex linear algebra over tensor-typed finite-dimensional spaces.
//!
//! Matrices follow the input-major convention: for `f : V -> W` the entry
//! `f[(i, j)]` is the coefficient of the output basis vector `w_j` in
//! `f(v_i)`, so that `f(v_i) = sum_j f_ij w_j`. This is the transpose of the
//! usual column-vector layout. With it, sequential composition `f;g` is the
//! plain matrix product `F * G`.
//!
//! Tensor products flatten first-factor-major: the basis vector
//! `e_{i_1} (x) ... (x) e_{i_n}` sits at `((i_1 * d_2 + i_2) * d_3 + ...)`.
//!
//! Dual spaces are the same space with the `dual` flag toggled. A dual vector
//! `<v|-|` is stored with conjugated coordinates so the dual basis stays
//! orthonormal.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance used for every approximate comparison unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Upper bound on the total dimension of a decoded space. Desk-scale only.
pub const MAX_DECODED_DIM: usize = 1 << 12;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A named finite-dimensional Hilbert space, possibly marked as a dual.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FdSpaceWire", into = "FdSpaceWire")]
pub struct FdSpace {
    label: String,
    dim: usize,
    dual: bool,
}

#[derive(Serialize, Deserialize)]
struct FdSpaceWire {
    label: String,
    dim: usize,
    #[serde(default)]
    dual: bool,
}

impl TryFrom<FdSpaceWire> for FdSpace {
    type Error = Error;

    fn try_from(w: FdSpaceWire) -> Result<Self> {
        if w.dim == 0 || w.dim > MAX_DECODED_DIM {
            return Err(Error::Decode(format!(
                "space '{}' has unsupported dimension {}",
                w.label, w.dim
            )));
        }
        Ok(FdSpace {
            label: w.label,
            dim: w.dim,
            dual: w.dual,
        })
    }
}

impl From<FdSpace> for FdSpaceWire {
    fn from(s: FdSpace) -> Self {
        FdSpaceWire {
            label: s.label,
            dim: s.dim,
            dual: s.dual,
        }
    }
}

impl FdSpace {
    /// Panics if `dim == 0`.
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        assert!(dim >= 1, "space dimension must be positive");
        FdSpace {
            label: label.into(),
            dim,
            dual: false,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn dual(&self) -> FdSpace {
        FdSpace {
            label: self.label.clone(),
            dim: self.dim,
            dual: !self.dual,
        }
    }
}

impl fmt::Display for FdSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]{}", self.label, self.dim, if self.dual { "*" } else { "" })
    }
}

/// An ordered tensor product of spaces. The empty product is the unit `C`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TensorSpace {
    factors: Vec<FdSpace>,
}

impl From<FdSpace> for TensorSpace {
    fn from(s: FdSpace) -> Self {
        TensorSpace { factors: vec![s] }
    }
}

impl From<Vec<FdSpace>> for TensorSpace {
    fn from(factors: Vec<FdSpace>) -> Self {
        TensorSpace { factors }
    }
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (k, s) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " (x) ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl TensorSpace {
    pub fn unit() -> Self {
        TensorSpace::default()
    }

    pub fn new(factors: Vec<FdSpace>) -> Self {
        TensorSpace { factors }
    }

    pub fn factors(&self) -> &[FdSpace] {
        &self.factors
    }

    /// Number of factors.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(FdSpace::dim).product()
    }

    fn checked_dim(&self) -> Option<usize> {
        self.factors
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.dim()))
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(FdSpace::dim).collect()
    }

    pub fn tensor(&self, other: &TensorSpace) -> TensorSpace {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TensorSpace { factors }
    }

    pub fn tensor_all<'a>(spaces: impl IntoIterator<Item = &'a TensorSpace>) -> TensorSpace {
        spaces
            .into_iter()
            .fold(TensorSpace::unit(), |acc, s| acc.tensor(s))
    }

    /// Toggles the dual flag of every factor.
    pub fn dual(&self) -> TensorSpace {
        TensorSpace {
            factors: self.factors.iter().map(FdSpace::dual).collect(),
        }
    }

    /// Factor at output position `k` is the factor at input position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<TensorSpace> {
        check_permutation(perm, self.len())?;
        Ok(TensorSpace {
            factors: perm.iter().map(|&p| self.factors[p].clone()).collect(),
        })
    }
}

pub(crate) fn check_permutation(perm: &[usize], arity: usize) -> Result<()> {
    if perm.len() != arity {
        return Err(Error::Permutation(format!(
            "permutation of length {} applied to {} factors",
            perm.len(),
            arity
        )));
    }
    let mut seen = vec![false; arity];
    for &p in perm {
        if p >= arity || seen[p] {
            return Err(Error::Permutation(format!("{perm:?} is not a bijection")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Splits a flat first-factor-major index into per-factor indices.
pub(crate) fn unflatten(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

pub(crate) fn flatten(indices: &[usize], dims: &[usize]) -> usize {
    indices
        .iter()
        .zip(dims)
        .fold(0, |acc, (&i, &d)| acc * d + i)
}

/// A vector in a tensor-typed space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorWire", into = "VectorWire")]
pub struct Vector {
    space: TensorSpace,
    coords: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    space: TensorSpace,
    coords: Vec<[f64; 2]>,
}

impl TryFrom<VectorWire> for Vector {
    type Error = Error;

    fn try_from(w: VectorWire) -> Result<Self> {
        let dim = w
            .space
            .checked_dim()
            .filter(|&d| d <= MAX_DECODED_DIM)
            .ok_or_else(|| Error::Decode("vector space too large".into()))?;
        if w.coords.len() != dim {
            return Err(Error::Decode(format!(
                "vector has {} coordinates, space dimension is {dim}",
                w.coords.len()
            )));
        }
        Ok(Vector {
            space: w.space,
            coords: w.coords.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        })
    }
}

impl From<Vector> for VectorWire {
    fn from(v: Vector) -> Self {
        VectorWire {
            space: v.space,
            coords: v.coords.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl Vector {
    pub fn new(space: TensorSpace, coords: Vec<C64>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} coordinates for space {space} of dimension {}",
                coords.len(),
                space.dim()
            )));
        }
        Ok(Vector { space, coords })
    }

    pub fn from_real(space: TensorSpace, coords: &[f64]) -> Result<Self> {
        Vector::new(space, coords.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(space: TensorSpace) -> Self {
        let n = space.dim();
        Vector {
            space,
            coords: vec![ZERO; n],
        }
    }

    /// Panics if `index` is out of range.
    pub fn basis(space: TensorSpace, index: usize) -> Self {
        let mut v = Vector::zeros(space);
        v.coords[index] = ONE;
        v
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn same_space(&self, other: &Vector, what: &str) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Dimension(format!(
                "{what}: {} vs {}",
                self.space, other.space
            )));
        }
        Ok(())
    }

    /// Conjugate-linear in `self`, linear in `other`.
    pub fn inner(&self, other: &Vector) -> Result<C64> {
        self.same_space(other, "inner product")?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(C64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Vector {
        Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.same_space(other, "vector sum")?;
        Ok(Vector {
            space: self.space.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.scale(-ONE))
    }

    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scale(C64::new(1.0 / n, 0.0)))
        }
    }

    pub fn kron(&self, other: &Vector) -> Vector {
        let mut coords = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.coords {
            for b in &other.coords {
                coords.push(a * b);
            }
        }
        Vector {
            space: self.space.tensor(&other.space),
            coords,
        }
    }

    /// The functional `<v|-|` as a vector of the dual space.
    pub fn dualize(&self) -> Vector {
        Vector {
            space: self.space.dual(),
            coords: self.coords.iter().map(C64::conj).collect(),
        }
    }

    /// Same coordinates, reinterpreted in another space of equal dimension.
    pub fn retyped(&self, space: TensorSpace) -> Result<Vector> {
        Vector::new(space, self.coords.clone())
    }

    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        if self.space != other.space {
            return f64::INFINITY;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Vector, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Finds `c` with `self = c * other`. See [`proportional`].
    pub fn proportional_to(&self, other: &Vector, tol: f64) -> Option<Proportion> {
        proportional(self, other, tol)
    }
}

/// Result of a successful proportionality test `u = scalar * v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proportion {
    pub scalar: C64,
    /// Both vectors vanish; `scalar` is zero by convention.
    pub degenerate: bool,
}

/// Returns `c` with `u = c * v` up to `tol` (max-entry, scaled by the size
/// of `u`), or `None` if no such scalar exists. Two zero vectors yield a
/// degenerate result with `c = 0`.
pub fn proportional(u: &Vector, v: &Vector, tol: f64) -> Option<Proportion> {
    if u.space != v.space {
        return None;
    }
    let scaled_tol = tol * u.max_abs().max(1.0);
    if v.max_abs() <= tol {
        return (u.max_abs() <= scaled_tol).then_some(Proportion {
            scalar: ZERO,
            degenerate: true,
        });
    }
    let c = v.inner(u).ok()? / v.norm_sqr();
    let residual = u
        .coords
        .iter()
        .zip(&v.coords)
        .map(|(a, b)| (a - c * b).norm())
        .fold(0.0, f64::max);
    (residual <= scaled_tol).then_some(Proportion {
        scalar: c,
        degenerate: false,
    })
}

/// A linear map between tensor-typed spaces, stored input-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinMapWire", into = "LinMapWire")]
pub struct LinMap {
    dom: TensorSpace,
    cod: TensorSpace,
    entries: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct LinMapWire {
    dom: TensorSpace,
    cod: TensorSpace,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<LinMapWire> for LinMap {
    type Error = Error;

    fn try_from(w: LinMapWire) -> Result<Self> {
        let size = |s: &TensorSpace| {
            s.checked_dim()
                .filter(|&d| d <= MAX_DECODED_DIM)
                .ok_or_else(|| Error::Decode(format!("space {s} too large")))
        };
        let n = size(&w.dom)?
            .checked_mul(size(&w.cod)?)
            .ok_or_else(|| Error::Decode("matrix too large".into()))?;
        if w.entries.len() != n {
            return Err(Error::Decode(format!(
                "matrix has {} entries, expected {n}",
                w.entries.len()
            )));
        }
        Ok(LinMap {
            dom: w.dom,
            cod: w.cod,
            entries: w.entries.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        })
    }
}

impl From<LinMap> for LinMapWire {
    fn from(m: LinMap) -> Self {
        LinMapWire {
            dom: m.dom,
            cod: m.cod,
            entries: m.entries.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl LinMap {
    /// `entries[i * dim(cod) + j]` is `f_ij`.
    pub fn new(dom: TensorSpace, cod: TensorSpace, entries: Vec<C64>) -> Result<Self> {
        let expected = dom.dim() * cod.dim();
        if entries.len() != expected {
            return Err(Error::Dimension(format!(
                "{} entries for a map {dom} -> {cod} (expected {expected})",
                entries.len()
            )));
        }
        Ok(LinMap { dom, cod, entries })
    }

    pub fn from_fn(dom: TensorSpace, cod: TensorSpace, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let (n, m) = (dom.dim(), cod.dim());
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                entries.push(f(i, j));
            }
        }
        LinMap { dom, cod, entries }
    }

    pub fn from_real(dom: TensorSpace, cod: TensorSpace, entries: &[f64]) -> Result<Self> {
        LinMap::new(dom, cod, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dom: TensorSpace, cod: TensorSpace) -> Self {
        LinMap::from_fn(dom, cod, |_, _| ZERO)
    }

    pub fn identity(space: TensorSpace) -> Self {
        LinMap::from_fn(space.clone(), space, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn dom(&self) -> &TensorSpace {
        &self.dom
    }

    pub fn cod(&self) -> &TensorSpace {
        &self.cod
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn dom_dim(&self) -> usize {
        self.dom.dim()
    }

    pub fn cod_dim(&self) -> usize {
        self.cod.dim()
    }

    /// Coefficient of output basis `j` in the image of input basis `i`.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cod_dim() + j]
    }

    /// The same matrix with relabelled endpoints of equal total dimension.
    pub fn retyped(&self, dom: TensorSpace, cod: TensorSpace) -> Result<LinMap> {
        LinMap::new(dom, cod, self.entries.clone())
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.space() != &self.dom {
            return Err(Error::Dimension(format!(
                "applying map on {} to vector in {}",
                self.dom,
                v.space()
            )));
        }
        let m = self.cod_dim();
        let mut out = vec![ZERO; m];
        for (i, vi) in v.coords().iter().enumerate() {
            if *vi == ZERO {
                continue;
            }
            let row = &self.entries[i * m..(i + 1) * m];
            for (o, f) in out.iter_mut().zip(row) {
                *o += vi * f;
            }
        }
        Vector::new(self.cod.clone(), out)
    }

    /// Sequential composition `self ; g`, i.e. `g` after `self`.
    pub fn compose(&self, g: &LinMap) -> Result<LinMap> {
        if self.cod != g.dom {
            return Err(Error::Dimension(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.dom, self.cod, g.dom, g.cod
            )));
        }
        let (n, k, m) = (self.dom_dim(), self.cod_dim(), g.cod_dim());
        let mut entries = vec![ZERO; n * m];
        for i in 0..n {
            for j in 0..k {
                let a = self.entries[i * k + j];
                if a == ZERO {
                    continue;
                }
                let grow = &g.entries[j * m..(j + 1) * m];
                let out = &mut entries[i * m..(i + 1) * m];
                for (o, b) in out.iter_mut().zip(grow) {
                    *o += a * b;
                }
            }
        }
        Ok(LinMap {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            entries,
        })
    }

    pub fn kron(&self, g: &LinMap) -> LinMap {
        let (n1, m1) = (self.dom_dim(), self.cod_dim());
        let (n2, m2) = (g.dom_dim(), g.cod_dim());
        let m = m1 * m2;
        let mut entries = vec![ZERO; n1 * n2 * m];
        for i1 in 0..n1 {
            for j1 in 0..m1 {
                let a = self.entries[i1 * m1 + j1];
                if a == ZERO {
                    continue;
                }
                for i2 in 0..n2 {
                    let row = (i1 * n2 + i2) * m;
                    for j2 in 0..m2 {
                        entries[row + j1 * m2 + j2] = a * g.entries[i2 * m2 + j2];
                    }
                }
            }
        }
        LinMap {
            dom: self.dom.tensor(&g.dom),
            cod: self.cod.tensor(&g.cod),
            entries,
        }
    }

    /// Conjugate transpose: `<f+ v | w> = <v | f w>`.
    pub fn adjoint(&self) -> LinMap {
        let m = self.cod_dim();
        LinMap::from_fn(self.cod.clone(), self.dom.clone(), |j, i| {
            self.entries[i * m + j].conj()
        })
    }

    /// The transpose `f* : W* -> V*` with `f*(w_j-bar) = sum_i f_ij v_i-bar`.
    pub fn dual(&self) -> LinMap {
        let m = self.cod_dim();
        LinMap::from_fn(self.cod.dual(), self.dom.dual(), |j, i| self.entries[i * m + j])
    }

    pub fn scale(&self, c: C64) -> LinMap {
        LinMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::Dimension("sum of maps with different types".into()));
        }
        Ok(LinMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance; infinite when the maps are typed differently.
    pub fn max_abs_diff(&self, other: &LinMap) -> f64 {
        if self.dom != other.dom || self.cod != other.cod {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &LinMap, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// The matrix read as a vector of `dom* (x) cod`, i.e. `sum f_ij v_i-bar (x) w_j`.
    pub fn as_vector(&self) -> Vector {
        Vector {
            space: self.dom.dual().tensor(&self.cod),
            coords: self.entries.clone(),
        }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.dom == self.cod && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Idempotent and self-adjoint to `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_self_adjoint(tol)
            && self
                .compose(self)
                .map(|pp| pp.max_abs_diff(self) <= tol)
                .unwrap_or(false)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.dom_dim() == self.cod_dim()
            && self
                .compose(&self.adjoint())
                .map(|u| u.approx_eq(&LinMap::identity(self.dom.clone()), tol))
                .unwrap_or(false)
    }
}

/// The unitary reordering tensor factors of `space`: output factor `k` is
/// input factor `perm[k]`, so `e_{i_1} (x) ... (x) e_{i_n}` goes to
/// `e_{i_perm[0]} (x) ... (x) e_{i_perm[n-1]}`.
pub fn permute_factors(space: &TensorSpace, perm: &[usize]) -> Result<LinMap> {
    let cod = space.permuted(perm)?;
    let dims = space.dims();
    let out_dims = cod.dims();
    let n = space.dim();
    let mut entries = vec![ZERO; n * n];
    for i in 0..n {
        let idx = unflatten(i, &dims);
        let out: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
        entries[i * n + flatten(&out, &out_dims)] = ONE;
    }
    Ok(LinMap {
        dom: space.clone(),
        cod,
        entries,
    })
}

/// Permutation obtained by applying `first` and then `second` in
/// [`permute_factors`] order.
pub fn compose_permutations(first: &[usize], second: &[usize]) -> Vec<usize> {
    second.iter().map(|&k| first[k]).collect()
}

/// Symmetry `A (x) B -> B (x) A`.
pub fn swap(a: &TensorSpace, b: &TensorSpace) -> LinMap {
    let space = a.tensor(b);
    let perm: Vec<usize> = (a.len()..a.len() + b.len()).chain(0..a.len()).collect();
    permute_factors(&space, &perm).expect("block swap is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(dims: &[usize]) -> TensorSpace {
        TensorSpace::new(
            dims.iter()
                .enumerate()
                .map(|(k, &d)| FdSpace::new(format!("S{k}"), d))
                .collect(),
        )
    }

    fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn rand_vec(rng: &mut ChaCha8Rng, s: &TensorSpace) -> Vector {
        Vector::new(s.clone(), (0..s.dim()).map(|_| rand_c(rng)).collect()).unwrap()
    }

    fn rand_map(rng: &mut ChaCha8Rng, d: &TensorSpace, c: &TensorSpace) -> LinMap {
        LinMap::from_fn(d.clone(), c.clone(), |_, _| rand_c(rng))
    }

    #[test]
    fn inner_products_of_basis_vectors() {
        let s = sp(&[3]);
        let e1 = Vector::basis(s.clone(), 0);
        let e2 = Vector::basis(s.clone(), 1);
        assert_eq!(e1.inner(&e1).unwrap(), ONE);
        assert_eq!(e1.inner(&e2).unwrap(), ZERO);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sp(&[2, 3]);
        for _ in 0..20 {
            let (u, v, c) = (rand_vec(&mut rng, &s), rand_vec(&mut rng, &s), rand_c(&mut rng));
            let lhs = u.scale(c).inner(&v).unwrap();
            let rhs = c.conj() * u.inner(&v).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            let uu = u.inner(&u).unwrap();
            assert!(uu.im.abs() < 1e-12 && uu.re >= 0.0);
        }
    }

    #[test]
    fn inner_rejects_space_mismatch() {
        let u = Vector::zeros(sp(&[2]));
        let v = Vector::zeros(sp(&[3]));
        assert!(matches!(u.inner(&v), Err(Error::Dimension(_))));
    }

    #[test]
    fn inner_factorizes_over_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (a, b) = (sp(&[2]), sp(&[3]));
        for _ in 0..20 {
            let (u, v) = (rand_vec(&mut rng, &a), rand_vec(&mut rng, &a));
            let (u2, v2) = (rand_vec(&mut rng, &b), rand_vec(&mut rng, &b));
            let lhs = u.kron(&u2).inner(&v.kron(&v2)).unwrap();
            let rhs = u.inner(&v).unwrap() * u2.inner(&v2).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn kron_of_identities() {
        let id = LinMap::identity(sp(&[2])).kron(&LinMap::identity(sp(&[3])));
        assert_eq!(id.dom_dim(), 6);
        assert!(id.approx_eq(&LinMap::identity(id.dom().clone()), 0.0));
    }

    #[test]
    fn kron_acts_factorwise_on_basis_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b, c, d) = (sp(&[2]), sp(&[3]), sp(&[2]), sp(&[2]));
        let f = rand_map(&mut rng, &a, &c);
        let g = rand_map(&mut rng, &b, &d);
        let fg = f.kron(&g);
        for i in 0..2 {
            for j in 0..3 {
                let ei = Vector::basis(a.clone(), i);
                let ej = Vector::basis(b.clone(), j);
                // oracle: elementwise products of the individual images
                let fi = f.apply(&ei).unwrap();
                let gj = g.apply(&ej).unwrap();
                let mut expected = Vec::new();
                for x in fi.coords() {
                    for y in gj.coords() {
                        expected.push(x * y);
                    }
                }
                let got = fg.apply(&ei.kron(&ej)).unwrap();
                for (x, y) in got.coords().iter().zip(&expected) {
                    assert!((x - y).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = rand_map(&mut rng, &sp(&[2]), &sp(&[1]));
        let g = rand_map(&mut rng, &sp(&[3]), &sp(&[2]));
        let h = rand_map(&mut rng, &sp(&[2]), &sp(&[2]));
        let left = f.kron(&g).kron(&h);
        let right = f.kron(&g.kron(&h));
        assert_eq!(left.dom(), right.dom());
        assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn compose_identity_and_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, b, c, d) = (sp(&[2]), sp(&[3]), sp(&[2, 2]), sp(&[1]));
        let f = rand_map(&mut rng, &a, &b);
        let g = rand_map(&mut rng, &b, &c);
        let h = rand_map(&mut rng, &c, &d);
        assert!(f.compose(&LinMap::identity(b.clone())).unwrap().approx_eq(&f, 0.0));
        let l = f.compose(&g).unwrap().compose(&h).unwrap();
        let r = f.compose(&g.compose(&h).unwrap()).unwrap();
        assert!(l.approx_eq(&r, 1e-12));
        assert!(matches!(f.compose(&f), Err(Error::Dimension(_))));
    }

    #[test]
    fn compose_applies_first_map_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b, c) = (sp(&[2]), sp(&[3]), sp(&[4]));
        let f = rand_map(&mut rng, &a, &b);
        let g = rand_map(&mut rng, &b, &c);
        let v = rand_vec(&mut rng, &a);
        let direct = g.apply(&f.apply(&v).unwrap()).unwrap();
        let composed = f.compose(&g).unwrap().apply(&v).unwrap();
        assert!(direct.approx_eq(&composed, 1e-12));
    }

    #[test]
    fn hadamard_like_map_is_an_involution() {
        let s = sp(&[2]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = LinMap::from_real(s.clone(), s.clone(), &[h, h, h, -h]).unwrap();
        assert!(f.compose(&f).unwrap().approx_eq(&LinMap::identity(s), 1e-12));
    }

    #[test]
    fn kron_and_compose_interchange() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b, c) = (sp(&[2]), sp(&[3]), sp(&[2]));
        let (x, y, z) = (sp(&[1]), sp(&[2]), sp(&[3]));
        let f = rand_map(&mut rng, &a, &b);
        let g = rand_map(&mut rng, &b, &c);
        let h = rand_map(&mut rng, &x, &y);
        let k = rand_map(&mut rng, &y, &z);
        let lhs = f.compose(&g).unwrap().kron(&h.compose(&k).unwrap());
        let rhs = f.kron(&h).compose(&g.kron(&k)).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn adjoint_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b) = (sp(&[2, 2]), sp(&[3]));
        assert!(LinMap::identity(a.clone()).adjoint().approx_eq(&LinMap::identity(a.clone()), 0.0));
        for _ in 0..20 {
            let f = rand_map(&mut rng, &a, &b);
            assert!(f.adjoint().adjoint().approx_eq(&f, 0.0));
            let v = rand_vec(&mut rng, &b);
            let w = rand_vec(&mut rng, &a);
            let lhs = f.adjoint().apply(&v).unwrap().inner(&w).unwrap();
            let rhs = v.inner(&f.apply(&w).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn permutations() {
        let s = sp(&[2, 2]);
        let id = permute_factors(&s, &[0, 1]).unwrap();
        assert!(id.approx_eq(&LinMap::identity(s.clone()), 0.0));
        let sw = permute_factors(&s, &[1, 0]).unwrap();
        // e1 (x) e2 -> e2 (x) e1
        let e12 = Vector::basis(s.clone(), 1);
        let e21 = Vector::basis(sw.cod().clone(), 2);
        assert!(sw.apply(&e12).unwrap().approx_eq(&e21, 0.0));
        let back = permute_factors(sw.cod(), &[1, 0]).unwrap();
        assert!(sw.compose(&back).unwrap().approx_eq(&id, 0.0));
        assert!(matches!(permute_factors(&s, &[0]), Err(Error::Permutation(_))));
        assert!(matches!(permute_factors(&s, &[1, 1]), Err(Error::Permutation(_))));
    }

    #[test]
    fn permutation_maps_compose_like_permutations() {
        let s = sp(&[2, 3, 4]);
        let p = [2, 0, 1];
        let q = [1, 2, 0];
        let mp = permute_factors(&s, &p).unwrap();
        let mq = permute_factors(mp.cod(), &q).unwrap();
        let both = permute_factors(&s, &compose_permutations(&p, &q)).unwrap();
        assert!(mp.compose(&mq).unwrap().approx_eq(&both, 0.0));
        assert!(mp.is_unitary(1e-12));
    }

    #[test]
    fn dualize_is_antilinear_and_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = sp(&[3]);
        let e = Vector::basis(s.clone(), 1);
        assert_eq!(e.dualize().coords(), e.coords());
        assert!(e.dualize().space().factors()[0].is_dual());
        for _ in 0..10 {
            let v = rand_vec(&mut rng, &s);
            let c = rand_c(&mut rng);
            assert!(v.dualize().dualize().approx_eq(&v, 0.0));
            assert!(v.scale(c).dualize().approx_eq(&v.dualize().scale(c.conj()), 1e-12));
        }
    }

    #[test]
    fn proportional_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let s = sp(&[3]);
        let v = rand_vec(&mut rng, &s);
        let p = proportional(&v.scale(C64::new(2.0, 0.0)), &v, 1e-9).unwrap();
        assert!((p.scalar - C64::new(2.0, 0.0)).norm() < 1e-12);
        let e1 = Vector::basis(s.clone(), 0);
        let e2 = Vector::basis(s.clone(), 1);
        assert!(proportional(&e1, &e2, 1e-9).is_none());
        let theta: f64 = 0.7;
        let p = proportional(&v.scale(C64::from_polar(1.0, theta)), &v, 1e-9).unwrap();
        assert!((p.scalar.norm() - 1.0).abs() < 1e-12);
        assert!((p.scalar.arg() - theta).abs() < 1e-12);
        let z = Vector::zeros(s.clone());
        let d = proportional(&z, &z, 1e-9).unwrap();
        assert!(d.degenerate && d.scalar == ZERO);
        assert!(proportional(&v, &z, 1e-9).is_none());
    }

    #[test]
    fn matrix_json_layout() {
        let s = TensorSpace::from(FdSpace::new("V", 2));
        let f = LinMap::from_real(s.clone(), s, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["dom"][0]["label"], "V");
        assert_eq!(json["dom"][0]["dim"], 2);
        assert_eq!(json["dom"][0]["dual"], false);
        assert_eq!(json["entries"][1], serde_json::json!([2.0, 0.0]));
        let back: LinMap = serde_json::from_value(json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_json_is_rejected() {
        let bad = r#"{"dom":[{"label":"V","dim":2}],"cod":[],"entries":[[1,0]]}"#;
        assert!(serde_json::from_str::<LinMap>(bad).is_err());
        let zero_dim = r#"{"dom":[{"label":"V","dim":0}],"cod":[],"entries":[]}"#;
        assert!(serde_json::from_str::<LinMap>(zero_dim).is_err());
        let huge = r#"{"dom":[{"label":"V","dim":4096},{"label":"W","dim":4096}],"cod":[],"entries":[]}"#;
        assert!(serde_json::from_str::<LinMap>(huge).is_err());
        let v = r#"{"space":[{"label":"V","dim":2}],"coords":[[1,0],[0,1]]}"#;
        let v: Vector = serde_json::from_str(v).unwrap();
        assert_eq!(v.coords()[1], C64::new(0.0, 1.0));
    }
}
