//! Randomized checks of the trace axioms.
//!
//! The five-axiom presentation used here: tightening (naturality in the two
//! free objects), sliding (dinaturality in the traced object), vanishing
//! (tracing over the unit, and over a tensor as nested traces), superposing
//! and yanking.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::traced::{CategoryKind, TracedCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Tightening,
    Sliding,
    Vanishing,
    Superposing,
    Yanking,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Tightening,
        Axiom::Sliding,
        Axiom::Vanishing,
        Axiom::Superposing,
        Axiom::Yanking,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Tightening => "tightening",
            Axiom::Sliding => "sliding",
            Axiom::Vanishing => "vanishing",
            Axiom::Superposing => "superposing",
            Axiom::Yanking => "yanking",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// Largest dimension / carrier size drawn for a single object.
    pub max_size: usize,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 50,
            seed: 0,
            max_size: 4,
            tol: crate::linalg::DEFAULT_TOL,
        }
    }
}

/// One line of the axiom report.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub category: String,
    pub axiom: Axiom,
    pub passed: bool,
    pub samples: usize,
    pub max_error: f64,
    pub counterexample: Option<Value>,
}

struct Sample {
    error: f64,
    witness: Value,
}

/// Runs every axiom `cfg.samples` times. Deterministic in `cfg.seed`.
pub fn axiom_suite<C: TracedCategory>(cat: &C, cfg: &SuiteConfig) -> Result<Vec<AxiomReport>> {
    Axiom::ALL
        .iter()
        .map(|&axiom| check_axiom(cat, axiom, cfg))
        .collect()
}

pub fn check_axiom<C: TracedCategory>(cat: &C, axiom: Axiom, cfg: &SuiteConfig) -> Result<AxiomReport> {
    let stream = Axiom::ALL.iter().position(|&a| a == axiom).unwrap() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream + 1);
    let mut max_error: f64 = 0.0;
    let mut counterexample = None;
    for _ in 0..cfg.samples.max(1) {
        let s = match axiom {
            Axiom::Tightening => tightening(cat, &mut rng, cfg.max_size)?,
            Axiom::Sliding => sliding(cat, &mut rng, cfg.max_size)?,
            Axiom::Vanishing => vanishing(cat, &mut rng, cfg.max_size)?,
            Axiom::Superposing => superposing(cat, &mut rng, cfg.max_size)?,
            Axiom::Yanking => yanking(cat, &mut rng, cfg.max_size)?,
        };
        if s.error > max_error {
            max_error = s.error;
        }
        if s.error > cfg.tol && counterexample.is_none() {
            counterexample = Some(s.witness);
        }
    }
    Ok(AxiomReport {
        category: kind_name(cat.kind()),
        axiom,
        passed: counterexample.is_none(),
        samples: cfg.samples.max(1),
        max_error,
        counterexample,
    })
}

fn kind_name(k: CategoryKind) -> String {
    k.short_name().to_string()
}

fn tightening<C: TracedCategory>(cat: &C, rng: &mut ChaCha8Rng, n: usize) -> Result<Sample> {
    let a0 = cat.random_object(rng, n);
    let a = cat.random_object(rng, n);
    let b = cat.random_object(rng, n);
    let b1 = cat.random_object(rng, n);
    let u = cat.random_object(rng, n);
    let g = cat.random_morphism(rng, &a0, &a);
    let f = cat.random_morphism(rng, &cat.tensor_objects(&a, &u), &cat.tensor_objects(&b, &u));
    let h = cat.random_morphism(rng, &b, &b1);
    let id_u = cat.identity(&u);
    let inner = cat.compose(&cat.compose(&cat.tensor(&g, &id_u), &f)?, &cat.tensor(&h, &id_u))?;
    let lhs = cat.trace(&inner, &a0, &b1, &u)?;
    let rhs = cat.compose(&cat.compose(&g, &cat.trace(&f, &a, &b, &u)?)?, &h)?;
    Ok(Sample {
        error: cat.distance(&lhs, &rhs),
        witness: json!({"g": g, "f": f, "h": h, "lhs": lhs, "rhs": rhs}),
    })
}

fn sliding<C: TracedCategory>(cat: &C, rng: &mut ChaCha8Rng, n: usize) -> Result<Sample> {
    let a = cat.random_object(rng, n);
    let b = cat.random_object(rng, n);
    let u = cat.random_object(rng, n);
    let v = cat.random_object(rng, n);
    let f = cat.random_morphism(rng, &cat.tensor_objects(&a, &u), &cat.tensor_objects(&b, &v));
    let g = cat.random_morphism(rng, &v, &u);
    let lhs = cat.trace(&cat.compose(&f, &cat.tensor(&cat.identity(&b), &g))?, &a, &b, &u)?;
    let rhs = cat.trace(&cat.compose(&cat.tensor(&cat.identity(&a), &g), &f)?, &a, &b, &v)?;
    Ok(Sample {
        error: cat.distance(&lhs, &rhs),
        witness: json!({"f": f, "g": g, "lhs": lhs, "rhs": rhs}),
    })
}

fn vanishing<C: TracedCategory>(cat: &C, rng: &mut ChaCha8Rng, n: usize) -> Result<Sample> {
    let a = cat.random_object(rng, n);
    let b = cat.random_object(rng, n);
    let unit = cat.unit();
    let f0 = cat.random_morphism(rng, &a, &b);
    let over_unit = cat.trace(&f0, &a, &b, &unit)?;
    let e0 = cat.distance(&over_unit, &f0);

    let u = cat.random_object(rng, n);
    let v = cat.random_object(rng, n);
    let uv = cat.tensor_objects(&u, &v);
    let f = cat.random_morphism(rng, &cat.tensor_objects(&a, &uv), &cat.tensor_objects(&b, &uv));
    let lhs = cat.trace(&f, &a, &b, &uv)?;
    let inner = cat.trace(&f, &cat.tensor_objects(&a, &u), &cat.tensor_objects(&b, &u), &v)?;
    let rhs = cat.trace(&inner, &a, &b, &u)?;
    let e1 = cat.distance(&lhs, &rhs);
    Ok(Sample {
        error: e0.max(e1),
        witness: json!({"unit_case": {"f": f0, "trace": over_unit},
                        "tensor_case": {"f": f, "lhs": lhs, "rhs": rhs}}),
    })
}

fn superposing<C: TracedCategory>(cat: &C, rng: &mut ChaCha8Rng, n: usize) -> Result<Sample> {
    let a = cat.random_object(rng, n);
    let b = cat.random_object(rng, n);
    let c = cat.random_object(rng, n);
    let d = cat.random_object(rng, n);
    let u = cat.random_object(rng, n);
    let g = cat.random_morphism(rng, &c, &d);
    let f = cat.random_morphism(rng, &cat.tensor_objects(&a, &u), &cat.tensor_objects(&b, &u));
    let lhs = cat.trace(
        &cat.tensor(&g, &f),
        &cat.tensor_objects(&c, &a),
        &cat.tensor_objects(&d, &b),
        &u,
    )?;
    let rhs = cat.tensor(&g, &cat.trace(&f, &a, &b, &u)?);
    Ok(Sample {
        error: cat.distance(&lhs, &rhs),
        witness: json!({"g": g, "f": f, "lhs": lhs, "rhs": rhs}),
    })
}

fn yanking<C: TracedCategory>(cat: &C, rng: &mut ChaCha8Rng, n: usize) -> Result<Sample> {
    let u = cat.random_object(rng, n);
    let lhs = cat.trace(&cat.symmetry(&u, &u), &u, &u, &u)?;
    let rhs = cat.identity(&u);
    Ok(Sample {
        error: cat.distance(&lhs, &rhs),
        witness: json!({"object": u, "lhs": lhs, "rhs": rhs}),
    })
}
