mod common;

use std::collections::BTreeMap;

use cubesolve::dim::names;
use cubesolve::poset::Mode;
use cubesolve::{
    cell_boundary, check, check_agda_syntax, classify, eval_dim, formula_to_pm, normalize_dim, parse_cell, parse_cube,
    pm_to_formula, print_agda, print_cube, solve, DimTerm, Endpoint, Name, Ppm, SolverConfig, Theory,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Duration;

fn term(vars: Vec<&'static str>, neg: bool) -> impl Strategy<Value = DimTerm> {
    let leaf = prop_oneof![
        Just(DimTerm::zero()),
        Just(DimTerm::one()),
        proptest::sample::select(vars).prop_map(DimTerm::var),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let bin = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DimTerm::join(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DimTerm::meet(a, b)),
        ];
        if neg {
            prop_oneof![bin, inner.prop_map(DimTerm::neg)].boxed()
        } else {
            bin.boxed()
        }
    })
}

fn assignments(vars: &[Name]) -> Vec<BTreeMap<Name, Endpoint>> {
    (0..1u32 << vars.len())
        .map(|m| {
            vars.iter()
                .enumerate()
                .map(|(b, v)| (v.clone(), Endpoint::from_bool(m >> b & 1 == 1)))
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn normalization_is_idempotent(t in term(vec!["i", "j", "k"], true)) {
        let n = normalize_dim(&t, Theory::DeMorgan).unwrap();
        prop_assert_eq!(normalize_dim(&n.to_term(), Theory::DeMorgan).unwrap(), n);
    }

    #[test]
    fn normal_form_evaluates_like_the_term(t in term(vec!["i", "j", "k"], true)) {
        let n = normalize_dim(&t, Theory::DeMorgan).unwrap();
        for asg in assignments(&names(&["i", "j", "k"])) {
            let lhs = eval_dim(&t, &asg).unwrap();
            let rhs = n.eval(&|x| asg.get(x).copied()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn terms_print_and_parse_back(t in term(vec!["i", "j", "k"], true)) {
        let back: DimTerm = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, &t);
    }

    #[test]
    fn classified_theory_accepts_the_term(t in term(vec!["i", "j"], true)) {
        prop_assert!(normalize_dim(&t, classify(&t)).is_ok());
    }

    #[test]
    fn formulas_survive_poset_maps(ts in proptest::collection::vec(term(vec!["i", "j", "k"], false), 1..3)) {
        let vars = names(&["i", "j", "k"]);
        let nfs: Vec<_> = ts.iter().map(|t| normalize_dim(t, Theory::Dedekind).unwrap()).collect();
        let pm = formula_to_pm(&nfs, &vars, Mode::Dedekind).unwrap();
        prop_assert!(pm.is_monotone());
        prop_assert_eq!(pm_to_formula(&pm, &vars, Mode::Dedekind), nfs);
    }

    #[test]
    fn ppm_unfolds_what_it_was_built_from(
        ts in proptest::collection::vec(proptest::collection::vec(term(vec!["i", "j", "k"], false), 2), 1..5)
    ) {
        let vars = names(&["i", "j", "k"]);
        let maps: Vec<_> = ts
            .iter()
            .map(|pair| {
                let nfs: Vec<_> = pair.iter().map(|t| normalize_dim(t, Theory::Dedekind).unwrap()).collect();
                formula_to_pm(&nfs, &vars, Mode::Dedekind).unwrap()
            })
            .collect();
        let ppm = Ppm::from_maps(3, 2, &maps).unwrap();
        let unfolded: Vec<_> = ppm.unfold().collect();
        for m in &maps {
            prop_assert!(unfolded.contains(m));
        }
        for m in &unfolded {
            prop_assert!(m.is_monotone());
            prop_assert!(ppm.contains(m));
        }
        prop_assert_eq!(unfolded.len(), ppm.count());
    }

    #[test]
    fn cells_print_and_parse_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = common::small_ctx();
        let psi = common::dims(2);
        let t = common::random_fill(&mut rng, &ctx, &psi, Theory::DeMorgan);
        let back = parse_cell(&t.to_string()).unwrap().normalize(&ctx, &psi);
        prop_assert_eq!(back, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_check_and_print(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = common::small_ctx();
        let (psi, phi, theory) = common::random_problem(&mut rng, &ctx);
        let cfg = SolverConfig { theory: Some(theory), max_depth: 2, timeout: Some(Duration::from_millis(300)) };
        if let Ok(s) = solve(&ctx, &psi, &phi, &cfg) {
            prop_assert!(check(&ctx, &psi, &s.cell, &phi).is_ok());
            let agda = print_agda(&ctx, &psi, &s.cell, &phi).unwrap();
            prop_assert!(check_agda_syntax(&agda).is_ok(), "{}", agda);
        }
    }

    #[test]
    fn contortions_solve_their_own_boundary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = common::small_ctx();
        let psi = common::dims(2);
        let t = common::random_contortion(&mut rng, &ctx, &psi, Theory::DeMorgan);
        let phi = cell_boundary(&ctx, &psi, &t);
        let cfg = SolverConfig { theory: Some(Theory::DeMorgan), max_depth: 1, timeout: None };
        let s = solve(&ctx, &psi, &phi, &cfg).unwrap();
        prop_assert_eq!(s.depth, 0);
    }
}

#[test]
fn problem_files_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let f = parse_cube(&std::fs::read_to_string(&p).unwrap()).unwrap();
        let again = parse_cube(&print_cube(&f)).unwrap();
        assert!(again == f, "{}", p.display());
    }
}
