//! Finite carriers and binary relations between them.
//!
//! Carriers are lists of element names. Only their sizes matter when
//! checking that two relations can be composed; names are carried along for
//! display and JSON output. Compound carriers use index arithmetic that
//! matches the tensor flattening of [`crate::linalg`]:
//!
//! * product `X x Y`: element `(x, y)` at `x * |Y| + y`,
//! * disjoint union `X + Y`: `inl x` at `x`, `inr y` at `|X| + y`.
//!
//! With this, both tensors are strictly associative with strict units
//! (a singleton for `x`, the empty carrier for `+`).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::MAX_DECODED_DIM;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Carrier {
    elems: Vec<String>,
}

impl Carrier {
    pub fn new<S: Into<String>>(elems: impl IntoIterator<Item = S>) -> Self {
        Carrier {
            elems: elems.into_iter().map(Into::into).collect(),
        }
    }

    /// `n` elements named `{prefix}0 .. {prefix}{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Carrier::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn empty() -> Self {
        Carrier::default()
    }

    /// The unit of the cartesian tensor.
    pub fn singleton() -> Self {
        Carrier::new(["*"])
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[String] {
        &self.elems
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn product(&self, other: &Carrier) -> Carrier {
        // Unit factors are dropped from names so that strict unit laws keep names stable.
        if self.is_unit_name() {
            return other.clone();
        }
        if other.is_unit_name() {
            return self.clone();
        }
        let mut elems = Vec::with_capacity(self.len() * other.len());
        for a in &self.elems {
            for b in &other.elems {
                elems.push(format!("({a},{b})"));
            }
        }
        Carrier { elems }
    }

    pub fn sum(&self, other: &Carrier) -> Carrier {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let elems = self
            .elems
            .iter()
            .map(|a| format!("inl {a}"))
            .chain(other.elems.iter().map(|b| format!("inr {b}")))
            .collect();
        Carrier { elems }
    }

    fn is_unit_name(&self) -> bool {
        self.elems.len() == 1 && self.elems[0] == "*"
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elems.join(", "))
    }
}

/// A relation `R ⊆ dom x cod` stored as a sorted set of index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RelWire", into = "RelWire")]
pub struct Rel {
    dom: Carrier,
    cod: Carrier,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RelWire {
    dom: Carrier,
    cod: Carrier,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<RelWire> for Rel {
    type Error = Error;

    fn try_from(w: RelWire) -> Result<Self> {
        if w.dom.len() > MAX_DECODED_DIM || w.cod.len() > MAX_DECODED_DIM {
            return Err(Error::Decode("relation carrier too large".into()));
        }
        Rel::new(w.dom, w.cod, w.pairs.iter().map(|&[a, b]| (a, b)))
            .map_err(|e| Error::Decode(e.to_string()))
    }
}

impl From<Rel> for RelWire {
    fn from(r: Rel) -> Self {
        RelWire {
            pairs: r.pairs.iter().map(|&(a, b)| [a, b]).collect(),
            dom: r.dom,
            cod: r.cod,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, &(a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", self.dom.name(a), self.cod.name(b))?;
        }
        write!(f, "}} : {} -> {}", self.dom, self.cod)
    }
}

pub(crate) fn same_size(a: &Carrier, b: &Carrier, what: &str) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Carrier(format!(
            "{what}: carrier of size {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

impl Rel {
    pub fn new(
        dom: Carrier,
        cod: Carrier,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= dom.len() || b >= cod.len()) {
            return Err(Error::Carrier(format!(
                "pair ({a}, {b}) out of range for {}x{} relation",
                dom.len(),
                cod.len()
            )));
        }
        Ok(Rel { dom, cod, pairs })
    }

    pub fn empty(dom: Carrier, cod: Carrier) -> Self {
        Rel {
            dom,
            cod,
            pairs: BTreeSet::new(),
        }
    }

    pub fn full(dom: Carrier, cod: Carrier) -> Self {
        let pairs = (0..dom.len())
            .flat_map(|a| (0..cod.len()).map(move |b| (a, b)))
            .collect();
        Rel { dom, cod, pairs }
    }

    /// The diagonal on `x`.
    pub fn identity(x: Carrier) -> Self {
        let pairs = (0..x.len()).map(|i| (i, i)).collect();
        Rel {
            dom: x.clone(),
            cod: x,
            pairs,
        }
    }

    /// The graph of a function given by `image[i]`.
    pub fn from_fn(dom: Carrier, cod: Carrier, image: impl Fn(usize) -> usize) -> Result<Self> {
        let pairs: Vec<_> = (0..dom.len()).map(|i| (i, image(i))).collect();
        Rel::new(dom, cod, pairs)
    }

    pub fn dom(&self) -> &Carrier {
        &self.dom
    }

    pub fn cod(&self) -> &Carrier {
        &self.cod
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Same carrier sizes and the same pairs; element names are ignored.
    pub fn same_graph(&self, other: &Rel) -> bool {
        self.dom.len() == other.dom.len()
            && self.cod.len() == other.cod.len()
            && self.pairs == other.pairs
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.dom.len() == other.dom.len()
            && self.cod.len() == other.cod.len()
            && self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &Rel) -> Result<Rel> {
        same_size(&self.dom, &other.dom, "union domain")?;
        same_size(&self.cod, &other.cod, "union codomain")?;
        Ok(Rel {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    pub fn converse(&self) -> Rel {
        Rel {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Relational composition `self ; s`.
    pub fn compose(&self, s: &Rel) -> Result<Rel> {
        same_size(&self.cod, &s.dom, "composition")?;
        let mut succ = vec![Vec::new(); s.dom.len()];
        for &(b, c) in &s.pairs {
            succ[b].push(c);
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(a, b)| succ[b].iter().map(move |&c| (a, c)))
            .collect();
        Ok(Rel {
            dom: self.dom.clone(),
            cod: s.cod.clone(),
            pairs,
        })
    }

    /// `{ y | exists t in T: t R y }`.
    pub fn image(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.pairs
            .iter()
            .filter(|(a, _)| subset.contains(a))
            .map(|&(_, b)| b)
            .collect()
    }

    /// Cartesian tensor `R x S`.
    pub fn tensor_times(&self, s: &Rel) -> Rel {
        let (n2, m2) = (s.dom.len(), s.cod.len());
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(a, b)| {
                s.pairs
                    .iter()
                    .map(move |&(c, d)| (a * n2 + c, b * m2 + d))
            })
            .collect();
        Rel {
            dom: self.dom.product(&s.dom),
            cod: self.cod.product(&s.cod),
            pairs,
        }
    }

    /// Disjoint-union tensor `R + S`.
    pub fn tensor_plus(&self, s: &Rel) -> Rel {
        let (n1, m1) = (self.dom.len(), self.cod.len());
        let pairs = self
            .pairs
            .iter()
            .copied()
            .chain(s.pairs.iter().map(|&(c, d)| (n1 + c, m1 + d)))
            .collect();
        Rel {
            dom: self.dom.sum(&s.dom),
            cod: self.cod.sum(&s.cod),
            pairs,
        }
    }

    /// Reflexive-transitive closure of an endorelation, by iterated squaring.
    /// Also returns the number of squaring rounds until saturation.
    pub fn star(&self) -> Result<(Rel, usize)> {
        same_size(&self.dom, &self.cod, "closure of a non-endorelation")?;
        let mut cur = Rel::identity(self.dom.clone()).union(self)?;
        let mut rounds = 0;
        loop {
            let next = cur.compose(&cur)?;
            if next.pairs == cur.pairs {
                return Ok((cur, rounds));
            }
            cur = next;
            rounds += 1;
        }
    }

    /// Restriction to a rectangle of index ranges, reindexed from zero.
    pub(crate) fn block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
        dom: Carrier,
        cod: Carrier,
    ) -> Rel {
        let pairs = self
            .pairs
            .iter()
            .filter(|(a, b)| rows.contains(a) && cols.contains(b))
            .map(|&(a, b)| (a - rows.start, b - cols.start))
            .collect();
        Rel { dom, cod, pairs }
    }
}

/// Symmetry `X x Y -> Y x X`.
pub fn symmetry_times(x: &Carrier, y: &Carrier) -> Rel {
    let (n, m) = (x.len(), y.len());
    let pairs = (0..n)
        .flat_map(|a| (0..m).map(move |b| (a * m + b, b * n + a)))
        .collect();
    Rel {
        dom: x.product(y),
        cod: y.product(x),
        pairs,
    }
}

/// Symmetry `X + Y -> Y + X`.
pub fn symmetry_plus(x: &Carrier, y: &Carrier) -> Rel {
    let (n, m) = (x.len(), y.len());
    let pairs = (0..n)
        .map(|a| (a, m + a))
        .chain((0..m).map(|b| (n + b, b)))
        .collect();
    Rel {
        dom: x.sum(y),
        cod: y.sum(x),
        pairs,
    }
}
