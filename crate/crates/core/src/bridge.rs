//! From linear maps to relations: `R(f) = {(i,j) : f_ij != 0}` relative to
//! fixed bases, and the multirelations that keep the weights `R` forgets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FdSpace, LinMap, TensorSpace, Vector, C64};
use crate::rel::{same_size, Carrier, Rel};
use crate::traced::{rel_plus_trace, rel_times_trace, vec_trace};

/// A space together with names for its specified basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasedSpace {
    pub space: FdSpace,
    pub basis_labels: Vec<String>,
}

impl BasedSpace {
    /// Labels `e1, e2, ...` prefixed by the space label; dual spaces get a `*`.
    pub fn new(space: FdSpace) -> Self {
        let star = if space.is_dual() { "*" } else { "" };
        let basis_labels = (1..=space.dim())
            .map(|i| format!("{}{star}.{i}", space.label()))
            .collect();
        BasedSpace {
            space,
            basis_labels,
        }
    }

    pub fn with_labels(space: FdSpace, basis_labels: Vec<String>) -> Result<Self> {
        if basis_labels.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} labels for a space of dimension {}",
                basis_labels.len(),
                space.dim()
            )));
        }
        let distinct: BTreeSet<&String> = basis_labels.iter().collect();
        if distinct.len() != basis_labels.len() {
            return Err(Error::Precondition("basis labels must be distinct".into()));
        }
        Ok(BasedSpace {
            space,
            basis_labels,
        })
    }

    pub fn carrier(&self) -> Carrier {
        Carrier::new(self.basis_labels.iter().cloned())
    }
}

/// Basis of a tensor space, indexed like its flattened coordinates.
pub fn basis_carrier(space: &TensorSpace) -> Carrier {
    space
        .factors()
        .iter()
        .map(|f| BasedSpace::new(f.clone()).carrier())
        .fold(Carrier::singleton(), |acc, c| acc.product(&c))
}

/// `R(f)`: pairs whose matrix entry exceeds `tol` in modulus.
pub fn functor_r(f: &LinMap, tol: f64) -> Rel {
    let m = f.cod_dim();
    let pairs = f
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, x)| x.norm() > tol)
        .map(|(k, _)| (k / m, k % m));
    Rel::new(basis_carrier(f.dom()), basis_carrier(f.cod()), pairs)
        .expect("indices come from the matrix shape")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaxReport {
    /// `R(f;g)`.
    pub of_composite: Rel,
    /// `R(f);R(g)`.
    pub composite_of_images: Rel,
    pub inclusion_holds: bool,
    pub equal: bool,
}

pub fn check_lax(f: &LinMap, g: &LinMap, tol: f64) -> Result<LaxReport> {
    let of_composite = functor_r(&f.compose(g)?, tol);
    let composite_of_images = functor_r(f, tol).compose(&functor_r(g, tol))?;
    Ok(LaxReport {
        inclusion_holds: of_composite.is_subset(&composite_of_images),
        equal: of_composite.same_graph(&composite_of_images),
        of_composite,
        composite_of_images,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub f: LinMap,
    pub report: LaxReport,
}

/// `f = [[h, h], [h, -h]]` with `h = 1/sqrt 2`: `f;f = id`, so `R(f;f)` is the
/// diagonal while `R(f);R(f)` is full.
pub fn laxity_counterexample(tol: f64) -> Counterexample {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = TensorSpace::from(FdSpace::new("V", 2));
    let f = LinMap::from_real(s.clone(), s, &[h, h, h, -h]).expect("2x2");
    let report = check_lax(&f, &f, tol).expect("endomorphism");
    Counterexample { f, report }
}

/// Entries must be real and nonnegative up to `tol`.
pub fn check_nonnegative(f: &LinMap, tol: f64) -> Result<()> {
    match f.entries().iter().position(|x| x.re < -tol || x.im.abs() > tol) {
        Some(k) => Err(Error::Precondition(format!(
            "entry ({}, {}) = {} is not a nonnegative real",
            k / f.cod_dim(),
            k % f.cod_dim(),
            f.entries()[k]
        ))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    /// `R(Tr f)`.
    pub of_trace: Rel,
    /// `Tr(R f)` in `(Rel, x)`.
    pub trace_of_image: Rel,
    pub equal: bool,
}

/// Compares `R(Tr f)` with the product trace of `R(f)`. Signed entries are
/// rejected, since cancellation inside the trace sum breaks the claim.
pub fn r_preserves_trace(
    f: &LinMap,
    v: &TensorSpace,
    w: &TensorSpace,
    u: &TensorSpace,
    tol: f64,
) -> Result<TraceReport> {
    check_nonnegative(f, tol)?;
    let of_trace = functor_r(&vec_trace(f, v, w, u)?, tol);
    let trace_of_image = rel_times_trace(
        &functor_r(f, tol),
        &basis_carrier(v),
        &basis_carrier(w),
        &basis_carrier(u),
    )?;
    Ok(TraceReport {
        equal: of_trace.same_graph(&trace_of_image),
        of_trace,
        trace_of_image,
    })
}

/// Support `{i : |c_i| > tol}` of a state.
pub fn abstract_state(psi: &Vector, tol: f64) -> BTreeSet<usize> {
    psi.coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > tol)
        .map(|(i, _)| i)
        .collect()
}

/// A matrix of nonnegative weights between two finite sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MultirelWire", into = "MultirelWire")]
pub struct Multirel {
    dom: Carrier,
    cod: Carrier,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MultirelWire {
    dom: Carrier,
    cod: Carrier,
    weights: Vec<Vec<f64>>,
}

impl TryFrom<MultirelWire> for Multirel {
    type Error = Error;

    fn try_from(w: MultirelWire) -> Result<Self> {
        if w.weights.len() != w.dom.len() || w.weights.iter().any(|r| r.len() != w.cod.len()) {
            return Err(Error::Decode(format!(
                "weights must be a {}x{} matrix",
                w.dom.len(),
                w.cod.len()
            )));
        }
        let flat = w.weights.into_iter().flatten().collect();
        Multirel::new(w.dom, w.cod, flat)
    }
}

impl From<Multirel> for MultirelWire {
    fn from(m: Multirel) -> Self {
        let cols = m.cod.len().max(1);
        let weights = if m.cod.is_empty() {
            vec![Vec::new(); m.dom.len()]
        } else {
            m.weights.chunks(cols).map(<[f64]>::to_vec).collect()
        };
        MultirelWire {
            dom: m.dom,
            cod: m.cod,
            weights,
        }
    }
}

fn check_weights(ws: &[f64]) -> Result<()> {
    match ws.iter().find(|w| !w.is_finite() || **w < 0.0) {
        Some(w) => Err(Error::Precondition(format!("weight {w} is not a nonnegative real"))),
        None => Ok(()),
    }
}

impl Multirel {
    pub fn new(dom: Carrier, cod: Carrier, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != dom.len() * cod.len() {
            return Err(Error::Dimension(format!(
                "{} weights for a {}x{} multirelation",
                weights.len(),
                dom.len(),
                cod.len()
            )));
        }
        check_weights(&weights)?;
        Ok(Multirel { dom, cod, weights })
    }

    pub fn identity(x: Carrier) -> Self {
        let n = x.len();
        let weights = (0..n * n)
            .map(|k| if k / n == k % n { 1.0 } else { 0.0 })
            .collect();
        Multirel {
            dom: x.clone(),
            cod: x,
            weights,
        }
    }

    pub fn dom(&self) -> &Carrier {
        &self.dom
    }

    pub fn cod(&self) -> &Carrier {
        &self.cod
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.cod.len() + j]
    }

    /// `t |-> (j |-> sum_i t_i r_ij)`.
    pub fn apply(&self, t: &[f64]) -> Result<Vec<f64>> {
        if t.len() != self.dom.len() {
            return Err(Error::Dimension(format!(
                "weight vector of length {} for domain of size {}",
                t.len(),
                self.dom.len()
            )));
        }
        check_weights(t)?;
        let m = self.cod.len();
        let mut out = vec![0.0; m];
        for (i, ti) in t.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += ti * self.weights[i * m + j];
            }
        }
        Ok(out)
    }

    pub fn compose(&self, s: &Multirel) -> Result<Multirel> {
        same_size(&self.cod, &s.dom, "multirelation composition")?;
        let (n, k, m) = (self.dom.len(), self.cod.len(), s.cod.len());
        let mut weights = vec![0.0; n * m];
        for i in 0..n {
            for j in 0..k {
                let a = self.weights[i * k + j];
                for l in 0..m {
                    weights[i * m + l] += a * s.weights[j * m + l];
                }
            }
        }
        Ok(Multirel {
            dom: self.dom.clone(),
            cod: s.cod.clone(),
            weights,
        })
    }

    /// Product tensor: `((a,b),(c,d)) |-> r_ac s_bd`.
    pub fn tensor(&self, s: &Multirel) -> Multirel {
        let (n1, m1) = (self.dom.len(), self.cod.len());
        let (n2, m2) = (s.dom.len(), s.cod.len());
        let m = m1 * m2;
        let mut weights = vec![0.0; n1 * n2 * m];
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                for j1 in 0..m1 {
                    for j2 in 0..m2 {
                        weights[(i1 * n2 + i2) * m + j1 * m2 + j2] =
                            self.weights[i1 * m1 + j1] * s.weights[i2 * m2 + j2];
                    }
                }
            }
        }
        Multirel {
            dom: self.dom.product(&s.dom),
            cod: self.cod.product(&s.cod),
            weights,
        }
    }

    /// `Tr(r)_{xy} = sum_z r_{(x,z),(y,z)}`.
    pub fn trace(&self, x: &Carrier, y: &Carrier, z: &Carrier) -> Result<Multirel> {
        same_size(&self.dom, &x.product(z), "multirelation trace domain")?;
        same_size(&self.cod, &y.product(z), "multirelation trace codomain")?;
        let (nx, ny, nz) = (x.len(), y.len(), z.len());
        let cols = self.cod.len();
        let mut weights = vec![0.0; nx * ny];
        for i in 0..nx {
            for k in 0..ny {
                weights[i * ny + k] = (0..nz)
                    .map(|a| self.weights[(i * nz + a) * cols + k * nz + a])
                    .sum();
            }
        }
        Ok(Multirel {
            dom: x.clone(),
            cod: y.clone(),
            weights,
        })
    }

    /// The relation of nonzero weights.
    pub fn support(&self) -> Rel {
        let m = self.cod.len();
        let pairs = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(k, _)| (k / m, k % m));
        Rel::new(self.dom.clone(), self.cod.clone(), pairs).expect("indices from shape")
    }

    /// Whether every weight is 0 or 1, i.e. nothing beyond the support.
    pub fn is_indicator(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    pub fn max_abs_diff(&self, other: &Multirel) -> f64 {
        if self.dom.len() != other.dom.len() || self.cod.len() != other.cod.len() {
            return f64::INFINITY;
        }
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `FDVec+ -> FMult`: copy the (nonnegative, real) entries.
pub fn vec_iso(f: &LinMap, tol: f64) -> Result<Multirel> {
    check_nonnegative(f, tol)?;
    let weights = f.entries().iter().map(|x| x.re.max(0.0)).collect();
    Multirel::new(basis_carrier(f.dom()), basis_carrier(f.cod()), weights)
}

/// Inverse of [`vec_iso`] onto the given spaces.
pub fn vec_iso_inverse(r: &Multirel, dom: &TensorSpace, cod: &TensorSpace) -> Result<LinMap> {
    if dom.dim() != r.dom.len() || cod.dim() != r.cod.len() {
        return Err(Error::Dimension("spaces do not match the multirelation".into()));
    }
    let entries = r.weights.iter().map(|&w| C64::new(w, 0.0)).collect();
    LinMap::new(dom.clone(), cod.clone(), entries)
}

/// Naive unfolding of the `(Rel, +)` feedback: the number of passes around
/// the loop until no new states of `z` become reachable from `x`.
pub fn feedback_iterations(r: &Rel, x: &Carrier, y: &Carrier, z: &Carrier) -> Result<usize> {
    same_size(r.dom(), &x.sum(z), "trace domain")?;
    same_size(r.cod(), &y.sum(z), "trace codomain")?;
    let (nx, ny) = (x.len(), y.len());
    let step = |from: &BTreeSet<usize>| -> BTreeSet<usize> {
        r.pairs()
            .iter()
            .filter(|(a, b)| from.contains(a) && *b >= ny)
            .map(|&(_, b)| b - ny + nx)
            .collect()
    };
    let mut reached: BTreeSet<usize> = step(&(0..nx).collect());
    let mut frontier = reached.clone();
    let mut passes = 0;
    while !frontier.is_empty() {
        passes += 1;
        frontier = step(&frontier).difference(&reached).copied().collect();
        reached.extend(frontier.iter().copied());
    }
    Ok(passes)
}

/// A particle moving `x -> z1 -> z2 -> z3 -> y` through the feedback loop.
pub fn default_particle_network() -> (Rel, Carrier, Carrier, Carrier) {
    let x = Carrier::new(["x"]);
    let y = Carrier::new(["y"]);
    let z = Carrier::new(["z1", "z2", "z3"]);
    let r = Rel::new(x.sum(&z), y.sum(&z), [(0, 1), (1, 2), (2, 3), (3, 0)])
        .expect("indices within 4x4");
    (r, x, y, z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentReport {
    /// `R(Tr f)` for the wave network.
    pub wave_image: Rel,
    /// The product trace of `R(f)`.
    pub relational_trace: Rel,
    pub image_commutes_with_trace: bool,
    /// Signed amplitudes cancel in `f;f` but not in `R(f);R(f)`.
    pub cancellation_lost: bool,
    /// `Tr f` carries weights other than 0 and 1, which `R` discards.
    pub multiplicities_lost: bool,
    pub particle_trace: Rel,
    /// The product trace is a single contraction.
    pub one_shot_passes: usize,
    /// Loop passes the feedback trace needed to saturate.
    pub recursive_passes: usize,
}

pub struct WaveNetwork<'a> {
    pub f: &'a LinMap,
    pub v: &'a TensorSpace,
    pub w: &'a TensorSpace,
    pub u: &'a TensorSpace,
}

pub struct ParticleNetwork<'a> {
    pub r: &'a Rel,
    pub x: &'a Carrier,
    pub y: &'a Carrier,
    pub z: &'a Carrier,
}

/// Compares a nonnegative wave network, its relational image, and a
/// particle network run on the coproduct trace.
pub fn descent(wave: &WaveNetwork, particle: &ParticleNetwork, tol: f64) -> Result<DescentReport> {
    let traced = r_preserves_trace(wave.f, wave.v, wave.w, wave.u, tol)?;
    let weights = vec_iso(&vec_trace(wave.f, wave.v, wave.w, wave.u)?, tol)?;
    let counter = laxity_counterexample(tol);
    let particle_trace = rel_plus_trace(particle.r, particle.x, particle.y, particle.z)?;
    let recursive_passes = feedback_iterations(particle.r, particle.x, particle.y, particle.z)?;
    Ok(DescentReport {
        image_commutes_with_trace: traced.equal,
        wave_image: traced.of_trace,
        relational_trace: traced.trace_of_image,
        cancellation_lost: !counter.report.equal,
        multiplicities_lost: !weights.is_indicator(),
        particle_trace,
        one_shot_passes: 1,
        recursive_passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traced::{random_linmap, random_nonnegative_linmap};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn sp(label: &str, dim: usize) -> TensorSpace {
        TensorSpace::from(FdSpace::new(label, dim))
    }

    #[test]
    fn image_of_identity_and_zero() {
        let s = sp("V", 3);
        let r = functor_r(&LinMap::identity(s.clone()), TOL);
        assert!(r.same_graph(&Rel::identity(Carrier::indexed("v", 3))));
        assert!(functor_r(&LinMap::zeros(s.clone(), s), TOL).is_empty());
    }

    #[test]
    fn basis_labels() {
        let b = BasedSpace::new(FdSpace::new("V", 2));
        assert_eq!(b.basis_labels, vec!["V.1", "V.2"]);
        assert!(BasedSpace::with_labels(FdSpace::new("V", 2), vec!["a".into(), "a".into()]).is_err());
        let c = basis_carrier(&sp("V", 2).tensor(&sp("W", 2)));
        assert_eq!(c.name(1), "(V.1,W.2)");
    }

    #[test]
    fn image_preserves_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = random_nonnegative_linmap(&mut rng, &sp("A", 2), &sp("B", 3));
            let g = random_nonnegative_linmap(&mut rng, &sp("C", 3), &sp("D", 2));
            let lhs = functor_r(&f.kron(&g), TOL);
            let rhs = functor_r(&f, TOL).tensor_times(&functor_r(&g, TOL));
            assert!(lhs.same_graph(&rhs));
        }
    }

    #[test]
    fn counterexample_shows_cancellation() {
        let c = laxity_counterexample(TOL);
        assert!(c.report.inclusion_holds);
        assert!(!c.report.equal);
        assert!(c.report.of_composite.same_graph(&Rel::identity(Carrier::indexed("v", 2))));
        assert!(c
            .report
            .composite_of_images
            .same_graph(&Rel::full(Carrier::indexed("v", 2), Carrier::indexed("v", 2))));
    }

    #[test]
    fn lax_inclusion_always_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (a, b, c) = (sp("A", rng.gen_range(1..=3)), sp("B", rng.gen_range(1..=3)), sp("C", 2));
            let f = random_linmap(&mut rng, &a, &b);
            let g = random_linmap(&mut rng, &b, &c);
            assert!(check_lax(&f, &g, TOL).unwrap().inclusion_holds);
            let f = random_nonnegative_linmap(&mut rng, &a, &b);
            let g = random_nonnegative_linmap(&mut rng, &b, &c);
            assert!(check_lax(&f, &g, TOL).unwrap().equal);
        }
    }

    #[test]
    fn zero_row_never_violates_inclusion() {
        let s = sp("V", 2);
        let f = LinMap::from_real(s.clone(), s.clone(), &[0.0, 0.0, 0.5, -0.5]).unwrap();
        let g = LinMap::from_real(s.clone(), s, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(check_lax(&f, &g, TOL).unwrap().inclusion_holds);
    }

    #[test]
    fn trace_preservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (v, u, w) = (
                sp("V", rng.gen_range(1..=3)),
                sp("U", rng.gen_range(1..=3)),
                sp("W", rng.gen_range(1..=3)),
            );
            let f = random_nonnegative_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
            assert!(r_preserves_trace(&f, &v, &w, &u, TOL).unwrap().equal);
        }
        let (v, u) = (sp("V", 2), sp("U", 2));
        let id = LinMap::identity(v.tensor(&u));
        let r = r_preserves_trace(&id, &v, &v, &u, TOL).unwrap();
        assert!(r.of_trace.same_graph(&Rel::identity(basis_carrier(&v))));
        let mut entries = id.entries().to_vec();
        entries[1] = C64::new(-0.5, 0.0);
        let signed = LinMap::new(v.tensor(&u), v.tensor(&u), entries).unwrap();
        assert!(matches!(
            r_preserves_trace(&signed, &v, &v, &u, TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn state_abstraction() {
        let s = sp("V", 2);
        assert_eq!(abstract_state(&Vector::basis(s.clone(), 0), TOL), BTreeSet::from([0]));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Vector::from_real(s, &[h, h]).unwrap();
        assert_eq!(abstract_state(&plus, TOL), BTreeSet::from([0, 1]));
    }

    #[test]
    fn abstraction_commutes_with_nonnegative_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let f = random_nonnegative_linmap(&mut rng, &sp("V", 3), &sp("W", 3));
            let psi = Vector::from_real(
                sp("V", 3),
                &(0..3)
                    .map(|_| if rng.gen_bool(0.4) { 0.0 } else { rng.gen_range(0.1..1.0) })
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let direct = abstract_state(&f.apply(&psi).unwrap(), TOL);
            let relational = functor_r(&f, TOL).image(&abstract_state(&psi, TOL));
            assert_eq!(direct, relational);
        }
    }

    #[test]
    fn dual_is_converse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_nonnegative_linmap(&mut rng, &sp("V", 2), &sp("W", 3));
            assert!(functor_r(&f.dual(), TOL).same_graph(&functor_r(&f, TOL).converse()));
        }
    }

    #[test]
    fn multirelation_basics() {
        let x = Carrier::indexed("x", 3);
        let id = Multirel::identity(x.clone());
        assert_eq!(id.apply(&[0.5, 2.0, 0.0]).unwrap(), vec![0.5, 2.0, 0.0]);
        assert!(Multirel::new(x.clone(), x.clone(), vec![-1.0; 9]).is_err());
        assert!(id.apply(&[1.0, -1.0, 0.0]).is_err());
        assert!(id.is_indicator());
    }

    #[test]
    fn vec_iso_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let (a, b, c) = (sp("A", 2), sp("B", 3), sp("C", 2));
            let f = random_nonnegative_linmap(&mut rng, &a, &b);
            let g = random_nonnegative_linmap(&mut rng, &b, &c);
            let lhs = vec_iso(&f, TOL).unwrap().compose(&vec_iso(&g, TOL).unwrap()).unwrap();
            let rhs = vec_iso(&f.compose(&g).unwrap(), TOL).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            let t = vec_iso(&f, TOL).unwrap().tensor(&vec_iso(&g, TOL).unwrap());
            assert!(t.max_abs_diff(&vec_iso(&f.kron(&g), TOL).unwrap()) < 1e-12);
            let back = vec_iso_inverse(&vec_iso(&f, TOL).unwrap(), &a, &b).unwrap();
            assert!(back.approx_eq(&f, 0.0));
            assert!(vec_iso(&f, TOL).unwrap().support().same_graph(&functor_r(&f, TOL)));
        }
    }

    #[test]
    fn vec_iso_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (v, u, w) = (sp("V", 2), sp("U", 3), sp("W", 2));
        let f = random_nonnegative_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
        let lhs = vec_iso(&f, TOL)
            .unwrap()
            .trace(&basis_carrier(&v), &basis_carrier(&w), &basis_carrier(&u))
            .unwrap();
        let rhs = vec_iso(&vec_trace(&f, &v, &w, &u).unwrap(), TOL).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        assert!(vec_iso(&random_linmap(&mut rng, &v, &w), TOL).is_err());
    }

    #[test]
    fn multirel_json_round_trip() {
        let m = Multirel::new(Carrier::indexed("a", 2), Carrier::indexed("b", 1), vec![0.5, 2.0])
            .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"dom":["a0","a1"],"cod":["b0"],"weights":[[0.5],[2.0]]}"#);
        assert_eq!(serde_json::from_str::<Multirel>(&json).unwrap(), m);
        assert!(serde_json::from_str::<Multirel>(r#"{"dom":["a"],"cod":["b"],"weights":[[-1]]}"#).is_err());
        assert!(serde_json::from_str::<Multirel>(r#"{"dom":["a"],"cod":["b"],"weights":[[1,2]]}"#).is_err());
    }

    #[test]
    fn descent_on_the_default_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (v, u, w) = (sp("V", 2), sp("U", 2), sp("W", 2));
        let f = random_nonnegative_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
        let (r, x, y, z) = default_particle_network();
        let report = descent(
            &WaveNetwork { f: &f, v: &v, w: &w, u: &u },
            &ParticleNetwork { r: &r, x: &x, y: &y, z: &z },
            TOL,
        )
        .unwrap();
        assert!(report.image_commutes_with_trace);
        assert!(report.cancellation_lost);
        assert!(report.multiplicities_lost);
        assert!(report.particle_trace.contains(0, 0));
        assert_eq!(report.one_shot_passes, 1);
        assert_eq!(report.recursive_passes, 3);
    }
}
