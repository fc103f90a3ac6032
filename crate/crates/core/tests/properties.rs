use goi_core::axioms::{axiom_suite, SuiteConfig};
use goi_core::bridge::{check_lax, Multirel};
use goi_core::linalg::{permute_factors, LinMap, Vector};
use goi_core::mll::{beta_reduce, compile, denote, parse, parse_type, typecheck, Term, Type};
use goi_core::{Carrier, FdSpace, FdVec, Goi, Rel, RelPlus, RelTimes, TensorSpace, C64};
use proptest::prelude::*;

fn ty() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![(1usize..5).prop_map(Type::Base), Just(Type::Unit)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::tensor(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::lolli(a, b)),
        ]
    })
}

fn name() -> impl Strategy<Value = String> {
    prop_oneof![Just("x"), Just("y"), Just("f"), Just("a1"), Just("b'")].prop_map(String::from)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![name().prop_map(Term::Var), Just(Term::Unit)];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (name(), proptest::option::of(ty()), inner.clone())
                .prop_map(|(x, t, b)| Term::Lam(x, t, Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            (name(), name(), inner.clone(), inner.clone())
                .prop_filter("distinct binders", |(x, y, _, _)| x != y)
                .prop_map(|(x, y, a, b)| Term::LetPair(x, y, Box::new(a), Box::new(b))),
            (inner, ty()).prop_map(|(a, t)| Term::Annot(Box::new(a), t)),
        ]
    })
}

fn space(dims: &[usize]) -> TensorSpace {
    TensorSpace::new(
        dims.iter()
            .enumerate()
            .map(|(k, &n)| FdSpace::new(format!("S{k}"), n))
            .collect(),
    )
}

/// A complex matrix with roughly half its entries zero.
fn sparse(n: usize, m: usize) -> impl Strategy<Value = LinMap> {
    proptest::collection::vec((any::<bool>(), -1.0f64..1.0, -1.0f64..1.0), n * m).prop_map(
        move |cells| {
            let entries = cells
                .into_iter()
                .map(|(on, re, im)| if on { C64::new(re, im) } else { C64::new(0.0, 0.0) })
                .collect();
            LinMap::new(space(&[n]), space(&[m]), entries).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_terms_parse_back(t in term()) {
        let printed = t.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), t, "{}", printed);
    }

    #[test]
    fn printed_types_parse_back(t in ty()) {
        prop_assert_eq!(parse_type(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn trace_axioms_hold_for_any_seed(seed in any::<u64>()) {
        let cfg = SuiteConfig { samples: 3, seed, max_size: 3, tol: 1e-9 };
        let reports = [
            axiom_suite(&FdVec, &cfg).unwrap(),
            axiom_suite(&RelTimes, &cfg).unwrap(),
            axiom_suite(&RelPlus, &cfg).unwrap(),
        ];
        for r in reports.iter().flatten() {
            prop_assert!(r.passed, "{} {} error {}", r.category, r.axiom, r.max_error);
        }
    }

    #[test]
    fn image_of_a_composite_is_contained_in_the_composite_of_images(
        (f, g) in (1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(a, b, c)| (sparse(a, b), sparse(b, c)))
    ) {
        prop_assert!(check_lax(&f, &g, 1e-9).unwrap().inclusion_holds);
    }

    #[test]
    fn factor_permutations_invert(dims in proptest::collection::vec(1usize..4, 1..5), seed in any::<u64>()) {
        let n = dims.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            perm.swap(k, (s % (k as u64 + 1)) as usize);
            s /= k as u64 + 1;
        }
        let mut inverse = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let sp = space(&dims);
        let there = permute_factors(&sp, &perm).unwrap();
        let back = permute_factors(there.cod(), &inverse).unwrap();
        prop_assert!(there.compose(&back).unwrap().approx_eq(&LinMap::identity(sp), 1e-12));
    }

    #[test]
    fn relation_json_round_trips(n in 0usize..4, m in 0usize..4, bits in proptest::collection::vec(any::<bool>(), 16)) {
        let pairs = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| bits[i * 4 + j]);
        let r = Rel::new(Carrier::indexed("a", n), Carrier::indexed("b", m), pairs).unwrap();
        let back: Rel = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert!(back.same_graph(&r));
    }

    #[test]
    fn multirel_json_round_trips(n in 1usize..4, m in 1usize..4, ws in proptest::collection::vec(0.0f64..5.0, 16)) {
        let r = Multirel::new(Carrier::indexed("a", n), Carrier::indexed("b", m), ws[..n * m].to_vec()).unwrap();
        let back: Multirel = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn vectors_and_maps_round_trip(coords in proptest::collection::vec(-2.0f64..2.0, 6)) {
        let v = Vector::from_real(space(&[2, 3]), &coords).unwrap();
        let back: Vector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(&back, &v);
        let f = LinMap::from_real(space(&[2]), space(&[3]), &coords).unwrap();
        let back: LinMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn goi_morphisms_round_trip(seed in any::<u64>()) {
        use rand::SeedableRng;
        let g = Goi::new(FdVec);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (g.random_object(&mut rng, 2), g.random_object(&mut rng, 2));
        let f = g.random_morphism(&mut rng, &a, &b);
        let back = g.decode(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert!(g.approx_eq(&back, &f, 0.0));
    }
}

/// Curried programs `\p. \q. \r. body` over base types whose body uses
/// some of the variables once each and contains one redex.
fn redex_program() -> impl Strategy<Value = String> {
    let names = ["p", "q", "r"];
    (proptest::collection::vec(1usize..3, 3), proptest::sample::subsequence(vec![0usize, 1, 2], 1..=3), any::<bool>())
        .prop_map(move |(dims, used, wrap_pair)| {
            let binders: String = names
                .iter()
                .zip(&dims)
                .map(|(n, d)| format!("\\{n}:B{d}. "))
                .collect();
            let body = used
                .iter()
                .rev()
                .map(|&k| names[k].to_string())
                .reduce(|acc, v| format!("({acc}, {v})"))
                .unwrap();
            let inner_ty = used.iter().rev().map(|&k| format!("B{}", dims[k])).reduce(|acc, t| format!("({acc}) * {t}")).unwrap();
            let body = if wrap_pair {
                format!("(\\z:{inner_ty}. z) ({body})")
            } else {
                format!("(\\w:I. {body}) ()")
            };
            format!("{binders}{body}")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beta_reduction_preserves_denotation(src in redex_program()) {
        let t = typecheck(&parse(&src).unwrap(), &[]).unwrap();
        let r = typecheck(&beta_reduce(&t.term), &[]).unwrap();
        prop_assert_eq!(&r.ty, &t.ty);
        let a = denote(&compile(&t).unwrap()).unwrap();
        let b = denote(&compile(&r).unwrap()).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-9), "{}", src);
    }
}
