use std::f64::consts::FRAC_1_SQRT_2;

use goi_core::axioms::{axiom_suite, AxiomReport, SuiteConfig};
use goi_core::bridge::{
    check_lax, default_particle_network, descent, functor_r, laxity_counterexample,
    r_preserves_trace, ParticleNetwork, WaveNetwork,
};
use goi_core::goi::GoiObject;
use goi_core::mll::{beta_reduce, compile, denote, parse, typecheck};
use goi_core::projector::{
    check_network, clone_demo, lemma1_error, lemma2_error, measure, proj_f, proj_ustar, teleport_demo,
    theta,
};
use goi_core::traced::{random_linmap, random_nonnegative_linmap};
use goi_core::{
    Error, FdSpace, FdVec, Goi, LinMap, RelPlus, RelTimes, Result, TensorSpace, TracedCategory, Vector,
    C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Cat, Command, Common};

/// Output lines with their pass flags.
type Lines = Vec<(String, bool)>;

/// Largest dimension the demos accept from the command line.
const MAX_DEMO_DIM: usize = 64;

pub fn run(cmd: Command) -> Result<Lines> {
    match cmd {
        Command::Axioms {
            cat,
            samples,
            max_size,
            common,
        } => axioms(cat, samples, max_size, common),
        Command::Lemma1 { samples, dims, common } => lemma1(samples, dims, common),
        Command::Lemma2 { samples, dims, common } => lemma2(samples, dims, common),
        Command::Teleport { dim, sample, common } => teleport(dim, sample, common),
        Command::Clone { dim } => cloning(dim),
        Command::GoiCompose { cat, samples, common } => goi_compose(cat, samples, common),
        Command::Network { samples, common } => network(samples, common),
        Command::FunctorR {
            counterexample,
            samples,
            common,
        } => functor(counterexample, samples, common),
        Command::Descent { dim, common } => descent_demo(dim, common),
        Command::Compile { file, denote, json } => compile_file(&file, denote, json),
    }
}

fn line(v: Value, passed: bool) -> (String, bool) {
    (v.to_string(), passed)
}

fn with(mut v: Value, extra: Value) -> Value {
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        let mut merged = e;
        merged.append(m);
        *m = merged;
    }
    v
}

fn sp(label: &str, dim: usize) -> TensorSpace {
    TensorSpace::from(FdSpace::new(label, dim))
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DEMO_DIM {
        return Err(Error::Precondition(format!("dimension must be in 1..={MAX_DEMO_DIM}")));
    }
    Ok(())
}

fn random_unit(rng: &mut ChaCha8Rng, space: TensorSpace) -> Vector {
    let coords = (0..space.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let v = Vector::new(space, coords).expect("length matches");
    v.normalized().unwrap_or(v)
}

fn cats(cat: Cat) -> Vec<Cat> {
    match cat {
        Cat::All => vec![Cat::Fdvec, Cat::RelTimes, Cat::RelPlus],
        c => vec![c],
    }
}

fn axioms(cat: Cat, samples: usize, max_size: usize, common: Common) -> Result<Lines> {
    let cfg = SuiteConfig {
        samples,
        seed: common.seed,
        max_size: max_size.clamp(1, 8),
        tol: common.tol,
    };
    let mut reports: Vec<AxiomReport> = Vec::new();
    for c in cats(cat) {
        reports.extend(match c {
            Cat::Fdvec => axiom_suite(&FdVec, &cfg)?,
            Cat::RelTimes => axiom_suite(&RelTimes, &cfg)?,
            Cat::RelPlus | Cat::All => axiom_suite(&RelPlus, &cfg)?,
        });
    }
    reports
        .iter()
        .map(|r| Ok((serde_json::to_string(r)?, r.passed)))
        .collect()
}

fn lemma1(samples: usize, dims: Option<[usize; 3]>, common: Common) -> Result<Lines> {
    let shapes = match dims {
        Some([nv, nu, nw]) => vec![(nv, nu, nw)],
        None => vec![(2, 2, 2), (2, 3, 2)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut out = Vec::new();
    for (nv, nu, nw) in shapes {
        for d in [nv, nu, nw] {
            check_dim(d)?;
        }
        let (v, u, w) = (sp("V", nv), sp("U", nu), sp("W", nw));
        let mut max_error: f64 = 0.0;
        let mut off_ray: f64 = 0.0;
        for _ in 0..samples {
            let f = random_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
            max_error = max_error.max(lemma1_error(&f, &u)?);
            let x = random_unit(&mut rng, u.tensor(&u.dual()));
            let perp = x.sub(&proj_ustar(&u).apply(&x)?)?;
            let input = random_unit(&mut rng, v.clone()).kron(&perp);
            off_ray = off_ray.max(theta(&f, &u)?.apply(&input)?.max_abs());
        }
        let passed = max_error <= common.tol && off_ray <= common.tol;
        out.push(line(
            json!({
                "check": "lemma1",
                "dims": [nv, nu, nw],
                "samples": samples,
                "max_error": max_error,
                "max_off_ray": off_ray,
                "passed": passed,
            }),
            passed,
        ));
    }
    Ok(out)
}

fn lemma2(samples: usize, [nv, nw]: [usize; 2], common: Common) -> Result<Lines> {
    check_dim(nv)?;
    check_dim(nw)?;
    let (v_sp, w_sp) = (sp("V", nv), sp("W", nw));
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..samples {
        let f = random_linmap(&mut rng, &v_sp, &w_sp);
        let u = random_unit(&mut rng, v_sp.dual().tensor(&w_sp));
        for _ in 0..2 {
            let v = random_unit(&mut rng, v_sp.clone());
            max_error = max_error.max(lemma2_error(&f, &v, &u)?);
        }
    }
    let passed = max_error <= common.tol;
    Ok(vec![line(
        json!({
            "check": "lemma2",
            "dims": [nv, nw],
            "samples": samples,
            "max_error": max_error,
            "passed": passed,
        }),
        passed,
    )])
}

/// `sum_a ē_a ⊗ e_a / sqrt d` in `V* ⊗ V`.
fn entangled(v: &TensorSpace) -> Vector {
    let d = v.dim();
    let c = 1.0 / (d as f64).sqrt();
    let coords: Vec<f64> = (0..d * d).map(|k| if k % (d + 1) == 0 { c } else { 0.0 }).collect();
    Vector::from_real(v.dual().tensor(v), &coords).expect("length matches")
}

fn teleport(dim: usize, sample: bool, common: Common) -> Result<Lines> {
    check_dim(dim)?;
    let v_sp = sp("V", dim);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let v = random_unit(&mut rng, v_sp.clone());
    let u = entangled(&v_sp);
    let report = teleport_demo(&v, &u)?;
    let expected = 1.0 / (dim * dim) as f64;
    let passed = report.proportional_to_expected
        && (report.probability - expected).abs() <= common.tol
        && (report.scalar.norm() - 1.0).abs() <= common.tol;
    let mut out = with(
        serde_json::to_value(&report)?,
        json!({ "check": "teleport", "dim": dim, "input": v, "expected_probability": expected }),
    );
    if sample {
        let psi = v.kron(&u);
        let first = proj_f(&LinMap::identity(v_sp.clone()))?.lifted(&v_sp, &TensorSpace::unit());
        let m1 = measure(&first, &psi)?;
        let o1 = m1.sample(&mut rng).clone();
        let mut outcomes = vec![o1.outcome];
        if let (1, Some(s1)) = (o1.outcome, o1.post_state) {
            let second = proj_ustar(&v_sp).lifted(&TensorSpace::unit(), &v_sp);
            outcomes.push(measure(&second, &s1)?.sample(&mut rng).outcome);
        }
        let succeeded = outcomes == [1, 1];
        out = with(out, json!({ "sampled": { "outcomes": outcomes, "succeeded": succeeded } }));
    }
    out["passed"] = json!(passed);
    Ok(vec![line(out, passed)])
}

fn cloning(dim: usize) -> Result<Lines> {
    check_dim(dim)?;
    let space = sp("V", dim);
    let mut out = Vec::new();
    let basis = Vector::basis(space.clone(), 0);
    let uniform = Vector::from_real(space.clone(), &vec![1.0 / (dim as f64).sqrt(); dim])?;
    let inputs: Vec<(&str, Vector, bool)> = if dim > 1 {
        vec![("basis", basis, true), ("superposition", uniform, false)]
    } else {
        vec![("basis", basis, true)]
    };
    for (kind, v, copies) in inputs {
        let report = clone_demo(&v)?;
        let passed = report.report.proportional_to_expected && report.equals_product_state == copies;
        let mut value = with(
            serde_json::to_value(&report)?,
            json!({ "check": "clone", "input": kind, "state": v, "expected_copy": copies }),
        );
        value["passed"] = json!(passed);
        out.push(line(value, passed));
    }
    Ok(out)
}

fn goi_laws<C: TracedCategory + Copy>(base: C, samples: usize, max_size: usize, common: Common) -> Result<(String, bool)> {
    let g = Goi::new(base);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (mut left, mut right, mut assoc) = (true, true, true);
    let mut max_error: f64 = 0.0;
    for _ in 0..samples {
        let objs: Vec<_> = (0..4).map(|_| g.random_object(&mut rng, max_size)).collect();
        let f = g.random_morphism(&mut rng, &objs[0], &objs[1]);
        let h = g.random_morphism(&mut rng, &objs[1], &objs[2]);
        let k = g.random_morphism(&mut rng, &objs[2], &objs[3]);
        let el = g.distance(&g.compose(&g.identity(&objs[0]), &f)?, &f);
        let er = g.distance(&g.compose(&f, &g.identity(&objs[1]))?, &f);
        let ea = g.distance(
            &g.compose(&g.compose(&f, &h)?, &k)?,
            &g.compose(&f, &g.compose(&h, &k)?)?,
        );
        left &= el <= common.tol;
        right &= er <= common.tol;
        assoc &= ea <= common.tol;
        max_error = max_error.max(el).max(er).max(ea);
    }
    let passed = left && right && assoc;
    Ok(line(
        json!({
            "check": "goi-compose",
            "category": base.kind().short_name(),
            "samples": samples,
            "left_unit": left,
            "right_unit": right,
            "associativity": assoc,
            "max_error": max_error,
            "passed": passed,
        }),
        passed,
    ))
}

fn goi_compose(cat: Cat, samples: usize, common: Common) -> Result<Lines> {
    cats(cat)
        .into_iter()
        .map(|c| match c {
            Cat::Fdvec => goi_laws(FdVec, samples, 2, common),
            Cat::RelTimes => goi_laws(RelTimes, samples, 3, common),
            Cat::RelPlus | Cat::All => goi_laws(RelPlus, samples, 3, common),
        })
        .collect()
}

fn network(samples: usize, common: Common) -> Result<Lines> {
    let g = Goi::new(FdVec);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut obj = |tag: &str| {
        let (p, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        GoiObject::new(sp(&format!("{tag}+"), p), sp(&format!("{tag}-"), n))
    };
    let objects: Vec<_> = (0..samples).map(|_| [obj("A"), obj("B"), obj("C")]).collect();
    let mut proportional = 0;
    let mut min_scalar = f64::INFINITY;
    for [a, b, c] in &objects {
        let f = g.random_morphism(&mut rng, a, b);
        let h = g.random_morphism(&mut rng, b, c);
        let report = check_network(&f, &h, common.tol)?;
        if report.proportional {
            proportional += 1;
            min_scalar = min_scalar.min(report.scalar.norm());
        }
    }
    let passed = proportional == samples;
    Ok(vec![line(
        json!({
            "check": "network",
            "samples": samples,
            "proportional": proportional,
            "min_scalar_modulus": if min_scalar.is_finite() { json!(min_scalar) } else { Value::Null },
            "passed": passed,
        }),
        passed,
    )])
}

fn sparse_complex(rng: &mut ChaCha8Rng, a: &TensorSpace, b: &TensorSpace) -> LinMap {
    LinMap::from_fn(a.clone(), b.clone(), |_, _| {
        if rng.gen_bool(0.4) {
            C64::new(0.0, 0.0)
        } else {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }
    })
}

fn functor(counterexample: bool, samples: usize, common: Common) -> Result<Lines> {
    if counterexample {
        let h = FRAC_1_SQRT_2;
        let ce = laxity_counterexample(common.tol);
        let passed = ce.report.inclusion_holds && !ce.report.equal;
        return Ok(vec![line(
            json!({
                "check": "functor-r-counterexample",
                "h": h,
                "f": ce.f,
                "r_of_composite": ce.report.of_composite,
                "composite_of_r": ce.report.composite_of_images,
                "inclusion_holds": ce.report.inclusion_holds,
                "equal": ce.report.equal,
                "passed": passed,
            }),
            passed,
        )]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let tol = common.tol;
    let dim = |rng: &mut ChaCha8Rng, tag: &str| sp(tag, rng.gen_range(1..=3));
    let (mut lax, mut strict, mut tensor, mut trace) = (0, 0, 0, 0);
    for _ in 0..samples {
        let (a, b, c) = (dim(&mut rng, "A"), dim(&mut rng, "B"), dim(&mut rng, "C"));
        let f = sparse_complex(&mut rng, &a, &b);
        let g = sparse_complex(&mut rng, &b, &c);
        lax += usize::from(check_lax(&f, &g, tol)?.inclusion_holds);

        let f = random_nonnegative_linmap(&mut rng, &a, &b);
        let g = random_nonnegative_linmap(&mut rng, &b, &c);
        strict += usize::from(check_lax(&f, &g, tol)?.equal);
        let image = functor_r(&f.kron(&g), tol);
        tensor += usize::from(image.same_graph(&functor_r(&f, tol).tensor_times(&functor_r(&g, tol))));

        let (v, w, u) = (dim(&mut rng, "V"), dim(&mut rng, "W"), dim(&mut rng, "U"));
        let t = random_nonnegative_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
        trace += usize::from(r_preserves_trace(&t, &v, &w, &u, tol)?.equal);
    }
    Ok([
        ("lax_inclusion", "complex", lax),
        ("strict_composition", "nonnegative", strict),
        ("tensor", "nonnegative", tensor),
        ("trace", "nonnegative", trace),
    ]
    .into_iter()
    .map(|(property, entries, held)| {
        let passed = held == samples;
        line(
            json!({
                "check": "functor-r",
                "property": property,
                "entries": entries,
                "samples": samples,
                "held": held,
                "passed": passed,
            }),
            passed,
        )
    })
    .collect())
}

fn descent_demo(dim: usize, common: Common) -> Result<Lines> {
    check_dim(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (v, w, u) = (sp("V", dim), sp("W", dim), sp("U", dim));
    let f = random_nonnegative_linmap(&mut rng, &v.tensor(&u), &w.tensor(&u));
    let (r, x, y, z) = default_particle_network();
    let report = descent(
        &WaveNetwork { f: &f, v: &v, w: &w, u: &u },
        &ParticleNetwork { r: &r, x: &x, y: &y, z: &z },
        common.tol,
    )?;
    let passed = report.image_commutes_with_trace;
    let mut value = with(serde_json::to_value(&report)?, json!({ "check": "descent", "wave": f }));
    value["passed"] = json!(passed);
    Ok(vec![line(value, passed)])
}

fn compile_file(path: &std::path::Path, want_denotation: bool, want_morphism: bool) -> Result<Lines> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Decode(format!("cannot read {}: {e}", path.display())))?;
    let term = parse(&src)?;
    let typed = typecheck(&term, &[])?;
    let compiled = compile(&typed)?;
    let mut out = json!({
        "check": "compile",
        "file": path.display().to_string(),
        "type": typed.ty.to_string(),
        "normal_form": beta_reduce(&typed.term).to_string(),
    });
    if want_denotation {
        out["denotation"] = serde_json::to_value(denote(&compiled)?)?;
    }
    if want_morphism {
        out["morphism"] = serde_json::to_value(&compiled.morphism)?;
    }
    Ok(vec![line(out, true)])
}
