use negprob::bayes::{self, ExpertJudgment, LikelihoodModel};
use negprob::feasibility::{joint_exists, suppes_zanotti};
use negprob::lp::{self, enumerate_vertices, Bounds, LinearConstraint, LpProblem, LpSolution, Polytope, Relation, Sense};
use negprob::negprob::{delta_family, minimize_negative_mass, moment_range, upper_probability, Budget};
use negprob::oracle;
use negprob::{q, MomentSystem, QuasiDistribution, Rational, SampleSpace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unit(rng: &mut impl Rng) -> Rational {
    let d = [1i64, 2, 3, 4, 5, 6, 8][rng.gen_range(0..7)];
    q(rng.gen_range(-d..=d), d)
}

fn zero_mean(xy: Rational, xz: Rational, yz: Rational) -> MomentSystem {
    let mut sys = MomentSystem::new(SampleSpace::new(&["X", "Y", "Z"]).unwrap());
    for v in ["X", "Y", "Z"] {
        sys.constrain(&[v], q(0, 1)).unwrap();
    }
    sys.constrain(&["X", "Y"], xy).unwrap();
    sys.constrain(&["X", "Z"], xz).unwrap();
    sys.constrain(&["Y", "Z"], yz).unwrap();
    sys
}

#[test]
fn closed_form_agrees_with_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut infeasible = 0;
    for _ in 0..1000 {
        let (xy, xz, yz) = (random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng));
        let closed = suppes_zanotti(&xy, &yz, &xz).unwrap();
        let lp = joint_exists(&zero_mean(xy, xz, yz)).unwrap();
        assert_eq!(closed.exists, lp.exists);
        assert_eq!(closed.sz_detail, lp.sz_detail);
        if !lp.exists {
            infeasible += 1;
        }
    }
    // both verdicts must actually occur in the sample
    assert!(infeasible > 50 && infeasible < 950, "{infeasible}");
}

#[test]
fn minimal_mass_matches_vertex_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let sys = zero_mean(random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng));
        let sol = minimize_negative_mass(&sys).unwrap();
        let (oracle_mass, _) = oracle::min_mass_by_vertices(&sys).unwrap();
        assert_eq!(sol.mass, oracle_mass);
        assert_eq!(sol.l1_norm, Rational::one() + &sol.mass * q(2, 1));
        assert!(sys.is_satisfied_by(&sol.distribution));

        let exists = joint_exists(&sys).unwrap();
        assert_eq!(exists.exists, sol.mass.is_zero());
        assert_eq!(exists.exists, oracle::proper_joint_by_vertices(&sys).unwrap());
        if let Some(w) = exists.witness {
            assert!(w.is_proper());
            assert!(sys.is_satisfied_by(&w));
        }
        let upper = upper_probability(&sol.distribution);
        assert_eq!(&upper.total - Rational::one(), sol.mass);
    }
}

#[test]
fn ranges_nested_and_witnessed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let sys = zero_mean(random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng));
        let xyz = sys.space().full_set();
        let minimal = moment_range(&sys, xyz, &Budget::Minimal).unwrap();
        let (lo, hi) = oracle::range_by_vertices(&sys, xyz, &minimal.mass_budget).unwrap();
        assert_eq!((&minimal.low, &minimal.high), (&lo, &hi));

        let mut previous = minimal;
        for extra in [q(1, 8), q(1, 4), q(1, 1)] {
            let budget = &previous.mass_budget + &extra;
            let r = moment_range(&sys, xyz, &Budget::Mass(budget.clone())).unwrap();
            assert!(r.low <= previous.low && r.high >= previous.high);
            for (w, v) in [(&r.low_witness, &r.low), (&r.high_witness, &r.high)] {
                assert_eq!(&w.moment(xyz).unwrap(), v);
                assert!(w.negative_mass() <= budget);
                assert!(sys.is_satisfied_by(w));
            }
            let (lo, hi) = oracle::range_by_vertices(&sys, xyz, &budget).unwrap();
            assert_eq!((&r.low, &r.high), (&lo, &hi));
            previous = r;
        }
    }
}

#[test]
fn family_constraint_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let delta = q(rng.gen_range(-40..=40), rng.gen_range(1..=32));
        let d = delta_family(&delta);
        let expected = q(-1, 4) - &delta * q(4, 1);
        assert_eq!(d.moment_of(&["X", "Y", "Z"]).unwrap(), expected);
        assert_eq!(d.moment_of(&["X"]).unwrap(), expected);
        assert_eq!(d.moment_of(&["Y"]).unwrap(), Rational::zero());
        assert_eq!(d.moment_of(&["Z"]).unwrap(), Rational::zero());
        assert_eq!(d.moment_of(&["X", "Y"]).unwrap(), Rational::zero());
        assert_eq!(d.moment_of(&["X", "Z"]).unwrap(), q(-1, 2));
        assert_eq!(d.moment_of(&["Y", "Z"]).unwrap(), q(-1, 1));
        let upper = upper_probability(&d);
        assert_eq!(upper.total - Rational::one(), d.negative_mass());
    }
}

fn random_judgments(rng: &mut impl Rng, s: &SampleSpace, count: usize) -> Vec<ExpertJudgment> {
    let pairs = [("X", "Y"), ("X", "Z"), ("Y", "Z")];
    (0..count)
        .map(|i| {
            let (u, v) = pairs[rng.gen_range(0..3)];
            ExpertJudgment::new(s, format!("E{i}"), u, v, random_unit(rng)).unwrap()
        })
        .collect()
}

#[test]
fn pairwise_evidence_leaves_triple_moment_at_zero() {
    let s = SampleSpace::new(&["X", "Y", "Z"]).unwrap();
    let prior = bayes::uniform_prior(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 200 {
        let count = rng.gen_range(1..=5);
        let js = random_judgments(&mut rng, &s, count);
        match bayes::pool(&prior, &js, &LikelihoodModel::Quadratic) {
            Ok(r) => {
                assert_eq!(r.moment(s.full_set()), Some(&Rational::zero()));
                assert!(r.posterior.is_proper());
                let (direct, total) = oracle::posterior_by_product(&prior, &js, &LikelihoodModel::Quadratic).unwrap();
                assert_eq!(direct, r.posterior);
                assert_eq!(total, r.k);
                let mut shuffled = js.clone();
                shuffled.shuffle(&mut rng);
                let again = bayes::pool(&prior, &shuffled, &LikelihoodModel::Quadratic).unwrap();
                assert_eq!(again.posterior, r.posterior);
                done += 1;
            }
            Err(negprob::Error::ZeroEvidence(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

// Bounded LP: every variable boxed in [-3, 3], a few random constraints.
fn bounded_lp() -> impl Strategy<Value = LpProblem> {
    (1usize..=4, 0usize..=4, any::<bool>()).prop_flat_map(|(n, m, maximize)| {
        let coeff = (-4i64..=4, 1i64..=3).prop_map(|(a, b)| q(a, b));
        (
            prop::collection::vec(coeff.clone(), n),
            prop::collection::vec(
                (prop::collection::vec(coeff.clone(), n), 0usize..3, -6i64..=6),
                m,
            ),
        )
            .prop_map(move |(obj, rows)| {
                let mut p = LpProblem::new(if maximize { Sense::Maximize } else { Sense::Minimize });
                for (i, c) in obj.into_iter().enumerate() {
                    p.add_variable(format!("x{i}"), c, Bounds::between(q(-3, 1), q(3, 1)));
                }
                for (coeffs, rel, rhs) in rows {
                    let relation = [Relation::Le, Relation::Ge, Relation::Eq][rel];
                    p.constraints.push(LinearConstraint::new(coeffs, relation, q(rhs, 2)));
                }
                p
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_matches_vertex_enumeration(p in bounded_lp()) {
        let mut poly = Polytope::new(p.variables.len());
        poly.constraints = p.constraints.clone();
        poly.bounds = p.bounds.clone();
        let vertices = enumerate_vertices(&poly).unwrap();
        let sol = lp::solve(&p).unwrap();
        prop_assert_eq!(&lp::solve(&p).unwrap(), &sol);
        match sol {
            LpSolution::Optimal(o) => {
                prop_assert!(p.is_feasible(&o.point));
                let values = vertices.iter().map(|v| p.objective_value(v));
                let best = match p.sense {
                    Sense::Minimize => values.min(),
                    Sense::Maximize => values.max(),
                };
                prop_assert_eq!(Some(o.value), best);
            }
            LpSolution::Infeasible => prop_assert!(vertices.is_empty()),
            LpSolution::Unbounded => prop_assert!(false, "boxed problem reported unbounded"),
        }
    }

    #[test]
    fn random_proper_distributions_have_zero_mass(raw in prop::collection::vec(0u32..10, 8)) {
        let total: u32 = raw.iter().sum();
        prop_assume!(total > 0);
        let weights: Vec<Rational> = raw.iter().map(|&w| q(w as i64, total as i64)).collect();
        let s = SampleSpace::new(&["X", "Y", "Z"]).unwrap();
        let d = QuasiDistribution::new(s.clone(), weights).unwrap();
        // its pairwise moments, with zero-mean not required, define a feasible system
        let mut sys = MomentSystem::new(s.clone());
        for names in [&["X", "Y"][..], &["X", "Z"], &["Y", "Z"], &["X"]] {
            sys.constrain(names, d.moment_of(names).unwrap()).unwrap();
        }
        let sol = minimize_negative_mass(&sys).unwrap();
        prop_assert_eq!(sol.mass, Rational::zero());
        prop_assert!(joint_exists(&sys).unwrap().exists);
    }
}
