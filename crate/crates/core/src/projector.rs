//! Rank-one projectors as the only non-unitary primitive: traces and
//! arbitrary linear maps realised by post-selected projective measurements.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::goi::{Goi, GoiMorphismOf};
use crate::linalg::{proportional, LinMap, Proportion, TensorSpace, Vector, C64, DEFAULT_TOL};
use crate::traced::{vec_trace, FdVec, TracedCategory};

/// An orthogonal projector. `scale` is the normaliser the lemmas multiply
/// by (`N` or `M`); `map` itself is always idempotent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Projector {
    pub map: LinMap,
    pub ray: Option<Vector>,
    pub scale: f64,
}

impl Projector {
    /// `x |-> <r|x> r` for a nonzero `r`, normalised first.
    pub fn from_ray(ray: &Vector, scale: f64) -> Result<Projector> {
        let r = ray
            .normalized()
            .ok_or_else(|| Error::DegenerateRay("cannot project onto the zero vector".into()))?;
        let c = r.coords();
        let map = LinMap::from_fn(r.space().clone(), r.space().clone(), |i, j| c[i].conj() * c[j]);
        Ok(Projector {
            map,
            ray: Some(r),
            scale,
        })
    }

    pub fn space(&self) -> &TensorSpace {
        self.map.dom()
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.map.apply(v)
    }

    /// `id_left ⊗ P ⊗ id_right`. Still a projector, no longer rank one.
    pub fn lifted(&self, left: &TensorSpace, right: &TensorSpace) -> Projector {
        let map = LinMap::identity(left.clone())
            .kron(&self.map)
            .kron(&LinMap::identity(right.clone()));
        Projector {
            map,
            ray: None,
            scale: self.scale,
        }
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.map.is_projector(tol)
    }
}

/// `sum_a e_a ⊗ ē_a` in `U ⊗ U*`.
pub fn bell_vector(u: &TensorSpace) -> Vector {
    let n = u.dim();
    let coords = (0..n * n)
        .map(|k| if k % (n + 1) == 0 { 1.0 } else { 0.0 })
        .collect::<Vec<_>>();
    Vector::from_real(u.tensor(&u.dual()), &coords).expect("length matches")
}

/// `P_{U*}` on `U ⊗ U*`, scale `N = dim U`.
pub fn proj_ustar(u: &TensorSpace) -> Projector {
    Projector::from_ray(&bell_vector(u), u.dim() as f64).expect("bell vector is nonzero")
}

/// `P_f` on `V* ⊗ W` spanned by `sum f_ij v̄_i ⊗ w_j`, scale `M = |f|^2`.
pub fn proj_f(f: &LinMap) -> Result<Projector> {
    let fv = f.as_vector();
    let m = fv.norm_sqr();
    if m == 0.0 {
        return Err(Error::DegenerateRay("P_f is undefined for f = 0".into()));
    }
    Projector::from_ray(&fv, m)
}

/// `P_U = P_{id_U}` on `U* ⊗ U`.
pub fn proj_u(u: &TensorSpace) -> Projector {
    proj_f(&LinMap::identity(u.clone())).expect("identity is nonzero")
}

/// The prefix `v` of `space = v ⊗ u`.
fn strip_suffix(space: &TensorSpace, u: &TensorSpace, what: &str) -> Result<TensorSpace> {
    let (n, k) = (space.len(), u.len());
    if k > n || space.factors()[n - k..] != *u.factors() {
        return Err(Error::Dimension(format!("{what}: {space} does not end with {u}")));
    }
    Ok(TensorSpace::new(space.factors()[..n - k].to_vec()))
}

/// `tau = N (f ⊗ id_{U*} ; id_W ⊗ P_{U*})` on `V ⊗ U ⊗ U*` for `f : V ⊗ U -> W ⊗ U`.
pub fn tau(f: &LinMap, u: &TensorSpace) -> Result<LinMap> {
    strip_suffix(f.dom(), u, "tau")?;
    let w = strip_suffix(f.cod(), u, "tau")?;
    let p = proj_ustar(u);
    let step = f.kron(&LinMap::identity(u.dual()));
    let project = LinMap::identity(w).kron(&p.map);
    Ok(step.compose(&project)?.scale(C64::new(p.scale, 0.0)))
}

/// `theta = (id_V ⊗ P_{U*}) ; tau`. Satisfies `theta(v ⊗ x) = Tr(f)(v) ⊗ P_{U*}(x)`.
pub fn theta(f: &LinMap, u: &TensorSpace) -> Result<LinMap> {
    let v = strip_suffix(f.dom(), u, "theta")?;
    let pre = LinMap::identity(v).kron(&proj_ustar(u).map);
    pre.compose(&tau(f, u)?)
}

/// `xi = N (P_{V*} ⊗ id_W)` on `V ⊗ V* ⊗ W` for `f : V -> W`.
pub fn xi(f: &LinMap) -> LinMap {
    let p = proj_ustar(f.dom());
    p.map
        .kron(&LinMap::identity(f.cod().clone()))
        .scale(C64::new(p.scale, 0.0))
}

/// `zeta = (id_V ⊗ P_f) ; xi`. Satisfies `zeta(v ⊗ u) = K bell_V ⊗ f(v)`.
pub fn zeta(f: &LinMap) -> Result<LinMap> {
    let pre = LinMap::identity(f.dom().clone()).kron(&proj_f(f)?.map);
    pre.compose(&xi(f))
}

/// `K = <f-vector|u> / M`.
pub fn k_coeff(f: &LinMap, u: &Vector) -> Result<C64> {
    let fv = f.as_vector();
    let m = fv.norm_sqr();
    if m == 0.0 {
        return Err(Error::DegenerateRay("K is undefined for f = 0".into()));
    }
    Ok(fv.inner(u)? / m)
}

/// Contracts factors `at..at+k` of `s` against `ctx`, i.e. `(<ctx| ⊗ id) s`
/// with the bra placed at those positions.
pub fn partial_inner(s: &Vector, ctx: &Vector, at: usize) -> Result<Vector> {
    let k = ctx.space().len();
    let factors = s.space().factors();
    if at + k > factors.len() || factors[at..at + k] != *ctx.space().factors() {
        return Err(Error::Dimension(format!(
            "cannot contract {} at position {at} of {}",
            ctx.space(),
            s.space()
        )));
    }
    let left = TensorSpace::new(factors[..at].to_vec());
    let right = TensorSpace::new(factors[at + k..].to_vec());
    let (mid, r) = (ctx.dim(), right.dim());
    let c = ctx.coords();
    let sc = s.coords();
    let mut out = Vec::with_capacity(left.dim() * r);
    for l in 0..left.dim() {
        for j in 0..r {
            let mut acc = C64::new(0.0, 0.0);
            for (m, cm) in c.iter().enumerate() {
                acc += cm.conj() * sc[(l * mid + m) * r + j];
            }
            out.push(acc);
        }
    }
    Vector::new(left.tensor(&right), out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementOutcome {
    pub outcome: u8,
    pub probability: f64,
    pub post_state: Option<Vector>,
}

/// Both branches of a projective measurement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub pass: MeasurementOutcome,
    pub fail: MeasurementOutcome,
}

impl Measurement {
    /// Draws one branch with the Born probabilities.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &MeasurementOutcome {
        if rng.gen::<f64>() < self.pass.probability {
            &self.pass
        } else {
            &self.fail
        }
    }
}

fn branch(outcome: u8, state: Vector) -> MeasurementOutcome {
    let probability = state.norm_sqr();
    let post_state = if probability > DEFAULT_TOL * DEFAULT_TOL {
        state.normalized()
    } else {
        None
    };
    MeasurementOutcome {
        outcome,
        probability,
        post_state,
    }
}

/// Outcome 1 has probability `|P psi|^2`; outcome 0 the complement.
pub fn measure(p: &Projector, psi: &Vector) -> Result<Measurement> {
    if (psi.norm() - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::Precondition(format!(
            "measured state has norm {}, expected 1",
            psi.norm()
        )));
    }
    let hit = p.apply(psi)?;
    let miss = psi.sub(&hit)?;
    Ok(Measurement {
        pass: branch(1, hit),
        fail: branch(0, miss),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub probability: f64,
    pub output_factor: Option<Vector>,
    pub proportional_to_expected: bool,
    pub scalar: C64,
}

/// Realises `f` on `v` by measuring `id_V ⊗ P_f` and then `P_{V*} ⊗ id_W`
/// on `v ⊗ u`, keeping only the passing branches.
pub fn realize_map(f: &LinMap, v: &Vector, u: &Vector) -> Result<DemoReport> {
    if v.space() != f.dom() {
        return Err(Error::Dimension(format!("input {} is not in {}", v.space(), f.dom())));
    }
    let fspace = f.dom().dual().tensor(f.cod());
    if u.space() != &fspace {
        return Err(Error::Dimension(format!("resource {} is not in {fspace}", u.space())));
    }
    let failed = DemoReport {
        probability: 0.0,
        output_factor: None,
        proportional_to_expected: false,
        scalar: C64::new(0.0, 0.0),
    };
    let u = match u.normalized() {
        Some(u) => u,
        None => return Ok(failed),
    };
    let psi = v.kron(&u);
    let first = proj_f(f)?.lifted(f.dom(), &TensorSpace::unit());
    let m1 = measure(&first, &psi)?;
    let s1 = match m1.pass.post_state {
        Some(s) => s,
        None => return Ok(failed),
    };
    let bell = proj_ustar(f.dom());
    let second = bell.lifted(&TensorSpace::unit(), f.cod());
    let m2 = measure(&second, &s1)?;
    let s2 = match m2.pass.post_state {
        Some(s) => s,
        None => {
            return Ok(DemoReport {
                probability: m1.pass.probability * m2.pass.probability,
                ..failed
            })
        }
    };
    let ctx = bell.ray.as_ref().expect("rank one");
    let out = partial_inner(&s2, ctx, 0)?;
    let expected = f.apply(v)?;
    let prop = proportional(&out, &expected, DEFAULT_TOL);
    Ok(DemoReport {
        probability: m1.pass.probability * m2.pass.probability,
        output_factor: Some(out),
        proportional_to_expected: matches!(prop, Some(Proportion { degenerate: false, .. })),
        scalar: prop.map(|p| p.scalar).unwrap_or(C64::new(0.0, 0.0)),
    })
}

/// Teleportation is the case `f = id`.
pub fn teleport_demo(v: &Vector, u: &Vector) -> Result<DemoReport> {
    realize_map(&LinMap::identity(v.space().clone()), v, u)
}

/// `Δ : e_i |-> e_i ⊗ e_i`.
pub fn diagonal_map(space: &TensorSpace) -> LinMap {
    let n = space.dim();
    LinMap::from_fn(space.clone(), space.tensor(space), |i, j| {
        if j == i * n + i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloneReport {
    #[serde(flatten)]
    pub report: DemoReport,
    pub equals_product_state: bool,
}

/// Basis copying with the resource set to the ray of `P_Δ`. The output is
/// `Δ(v)`, which equals `v ⊗ v` only on basis states.
pub fn clone_demo(v: &Vector) -> Result<CloneReport> {
    let delta = diagonal_map(v.space());
    let ray = proj_f(&delta)?.ray.expect("rank one");
    let report = realize_map(&delta, v, &ray)?;
    let equals_product_state = report
        .output_factor
        .as_ref()
        .and_then(|out| proportional(out, &v.kron(v), DEFAULT_TOL))
        .is_some_and(|p| !p.degenerate);
    Ok(CloneReport {
        report,
        equals_product_state,
    })
}

/// The three-stage projector network composing GoI morphisms
/// `f : (V+, V-) -> (U+, U-)` and `g : (U+, U-) -> (W+, W-)` over
/// `V+ ⊗ U- ⊗ U-* ⊗ U+* ⊗ U+ ⊗ W-`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Network {
    pub map: LinMap,
    /// Context ray prepared by the first stage, on `U- ⊗ U-* ⊗ U+* ⊗ U+`.
    pub pre_ray: Vector,
    /// Ray the last stage post-selects on, on `U+ ⊗ U-* ⊗ U+* ⊗ U-`.
    pub post_ray: Vector,
    pub input: (TensorSpace, TensorSpace),
    pub output: (TensorSpace, TensorSpace),
}

pub type FdGoiMorphism = GoiMorphismOf<FdVec>;

pub fn goi_compose_network(f: &FdGoiMorphism, g: &FdGoiMorphism) -> Result<Network> {
    if f.dst != g.src {
        return Err(Error::Dimension("network: f.dst differs from g.src".into()));
    }
    let (vp, vm) = (&f.src.pos, &f.src.neg);
    let (up, um) = (&f.dst.pos, &f.dst.neg);
    let (wp, wm) = (&g.dst.pos, &g.dst.neg);

    let p_um_star = proj_ustar(um);
    let p_up = proj_u(up);
    let stage1 = LinMap::identity(vp.clone())
        .kron(&p_um_star.map)
        .kron(&p_up.map)
        .kron(&LinMap::identity(wm.clone()));

    let stage2 = f
        .under
        .kron(&LinMap::identity(um.dual().tensor(&up.dual())))
        .kron(&g.under);

    let p_up_star = proj_ustar(up);
    let p_um = proj_u(um);
    let reorder = FdVec.permute(&[up.clone(), up.dual(), um.dual(), um.clone()], &[0, 2, 1, 3])?;
    let post_ray = reorder.apply(&p_up_star.ray.clone().expect("rank one").kron(
        p_um.ray.as_ref().expect("rank one"),
    ))?;
    let post = Projector::from_ray(&post_ray, p_up_star.scale * p_um.scale)?;
    let stage3 = post.lifted(vm, wp).map;

    let map = stage1.compose(&stage2)?.compose(&stage3)?;
    let pre_ray = p_um_star
        .ray
        .expect("rank one")
        .kron(p_up.ray.as_ref().expect("rank one"));
    Ok(Network {
        map,
        pre_ray,
        post_ray,
        input: (vp.clone(), wm.clone()),
        output: (vm.clone(), wp.clone()),
    })
}

impl Network {
    /// The map `V+ ⊗ W- -> V- ⊗ W+` obtained by feeding `context` into the
    /// middle factors and post-selecting on the last stage's ray.
    pub fn extract(&self, context: &Vector) -> Result<LinMap> {
        let (vp, wm) = &self.input;
        let (vm, wp) = &self.output;
        let dom = vp.tensor(wm);
        let cod = vm.tensor(wp);
        let mut entries = Vec::with_capacity(dom.dim() * cod.dim());
        for a in 0..vp.dim() {
            for b in 0..wm.dim() {
                let x = Vector::basis(vp.clone(), a)
                    .kron(context)
                    .kron(&Vector::basis(wm.clone(), b));
                let y = self.map.apply(&x.retyped(self.map.dom().clone())?)?;
                let row = partial_inner(&y, &self.post_ray, vm.len())?;
                entries.extend_from_slice(row.coords());
            }
        }
        LinMap::new(dom, cod, entries)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkReport {
    pub extracted: LinMap,
    pub expected: LinMap,
    pub proportional: bool,
    pub scalar: C64,
}

/// Runs the network with its own prepared context and compares against
/// the GoI composite.
pub fn check_network(f: &FdGoiMorphism, g: &FdGoiMorphism, tol: f64) -> Result<NetworkReport> {
    let net = goi_compose_network(f, g)?;
    let extracted = net.extract(&net.pre_ray)?;
    let expected = Goi::new(FdVec).compose(f, g)?.under;
    let prop = proportional(&extracted.as_vector(), &expected.as_vector(), tol);
    let (ok, scalar) = match prop {
        Some(p) => (!p.degenerate && p.scalar.norm() > tol, p.scalar),
        None => (false, C64::new(0.0, 0.0)),
    };
    Ok(NetworkReport {
        extracted,
        expected,
        proportional: ok,
        scalar,
    })
}

/// `max |theta - Tr(f) ⊗ P_{U*}|`.
pub fn lemma1_error(f: &LinMap, u: &TensorSpace) -> Result<f64> {
    let v = strip_suffix(f.dom(), u, "lemma 1")?;
    let w = strip_suffix(f.cod(), u, "lemma 1")?;
    let lhs = theta(f, u)?;
    let rhs = vec_trace(f, &v, &w, u)?.kron(&proj_ustar(u).map);
    Ok(lhs.max_abs_diff(&rhs))
}

/// `max |zeta(v ⊗ u) - K bell_V ⊗ f(v)|`.
pub fn lemma2_error(f: &LinMap, v: &Vector, u: &Vector) -> Result<f64> {
    let lhs = zeta(f)?.apply(&v.kron(u))?;
    let k = k_coeff(f, u)?;
    let rhs = bell_vector(f.dom()).kron(&f.apply(v)?).scale(k);
    Ok(lhs.max_abs_diff(&rhs))
}
