//! Invariants checked on random inputs.

use proptest::prelude::*;

use cobi::archive::BiArchive;
use cobi::constraint::{ConvexConstraint, ConvexSelection, LinearConstraint, QuadraticConstraint};
use cobi::dominance::{dominates, Dominance, ObjectivePair};
use cobi::generator::{from_hex, generate, save, to_hex, ConstraintRecipe, GeneratorConfig, InstanceDocument};
use cobi::hypervolume::hypervolume;
use cobi::linalg::{Point, SpdMatrix};
use cobi::objective::QuadraticPeak;
use cobi::pareto::{epsilon_weights, unconstrained_point};
use cobi::projection::{build_scalarized, project};
use cobi::transform::{MonotoneTransform, SignPreservingTransform};

fn pair() -> impl Strategy<Value = ObjectivePair> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| ObjectivePair::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn archive_stays_mutually_nondominated(pts in prop::collection::vec(pair(), 0..60)) {
        let mut a = BiArchive::new();
        for p in &pts {
            a.insert(*p, None);
        }
        let f = a.objectives();
        for i in 0..f.len() {
            for j in 0..f.len() {
                if i != j {
                    prop_assert_ne!(dominates(&f[i], &f[j]), Dominance::Dominates);
                }
            }
        }
        for w in f.windows(2) {
            prop_assert!(w[0].f1 < w[1].f1 && w[0].f2 > w[1].f2);
        }
        // every inserted point is covered by something kept
        for p in &pts {
            prop_assert!(a.is_covered(p));
        }
    }

    #[test]
    fn hypervolume_monotone_and_bounded(pts in prop::collection::vec(pair(), 0..30), extra in pair()) {
        let r = ObjectivePair::new(10.0, 10.0);
        let base = hypervolume(&pts, r);
        let mut more = pts.clone();
        more.push(extra);
        let hv = hypervolume(&more, r);
        prop_assert!(hv >= base);
        prop_assert!(hv <= 400.0 + 1e-9);
        // dominated points change nothing
        let mut shuffled: Vec<_> = pts.iter().rev().copied().collect();
        shuffled.extend(pts.iter().map(|p| ObjectivePair::new(p.f1 + 1.0, p.f2 + 1.0)));
        prop_assert!((hypervolume(&shuffled, r) - base).abs() <= 1e-9 * (1.0 + base));
    }

    #[test]
    fn hex_floats_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let back = from_hex(&to_hex(v)).unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }

    #[test]
    fn transforms_preserve_order_and_sign(a in -50.0..50.0f64, b in -50.0..50.0f64, k in 0.1..5.0f64) {
        for t in [
            SignPreservingTransform::PositiveScale { factor: k },
            SignPreservingTransform::BinaryStep,
            SignPreservingTransform::SignedPower { exponent: k },
        ] {
            prop_assert_eq!(t.apply(a) > 0.0, a > 0.0);
            prop_assert_eq!(t.apply(a) <= 0.0, a <= 0.0);
        }
        let (lo, hi) = (a.abs().min(b.abs()), a.abs().max(b.abs()));
        prop_assume!(lo < hi);
        for t in [
            MonotoneTransform::Power { exponent: k },
            MonotoneTransform::Log1pScale { scale: k },
            MonotoneTransform::Affine { slope: k, intercept: -3.0 },
        ] {
            prop_assert!(t.apply(lo, "test").unwrap() < t.apply(hi, "test").unwrap());
        }
    }

    #[test]
    fn projection_feasible_and_idempotent(
        c1 in prop::array::uniform2(-3.0..3.0f64),
        c2 in prop::array::uniform2(-3.0..3.0f64),
        d in prop::array::uniform2(0.2..5.0f64),
        normal in prop::array::uniform2(-1.0..1.0f64),
        ball in prop::array::uniform2(-1.0..1.0f64),
        theta in 0.0..=1.0f64,
    ) {
        let n = Point::from_vec(normal.to_vec());
        prop_assume!(n.norm() > 0.1);
        let p1 = QuadraticPeak::quadratic(Point::from_vec(c1.to_vec()), SpdMatrix::diagonal(&d).unwrap(), 0.0).unwrap();
        let p2 = QuadraticPeak::sphere(&c2);
        let half = ConvexConstraint::Linear(LinearConstraint::new(n.clone(), -n.dot(&Point::from_vec(ball.to_vec())) - 0.3).unwrap());
        let disc = ConvexConstraint::Quadratic(QuadraticConstraint::ball(&ball, 1.0).unwrap());
        let sel = ConvexSelection::new(2, vec![half, disc]).unwrap();
        let sp = build_scalarized(&p1, &p2, theta, &sel).unwrap();
        let r = project(&sp);
        prop_assert!(r.is_optimal(), "{:?}", r.status);
        prop_assert!(sel.max_value(&r.x_star) <= 1e-8);
        // projecting the projection returns it
        let again = project(&sp.recentered(r.x_star.clone()));
        prop_assert!((&again.x_star - &r.x_star).norm() <= 1e-7);
    }

    #[test]
    fn schedule_steps_within_epsilon(
        c1 in prop::array::uniform3(-2.0..2.0f64),
        c2 in prop::array::uniform3(-2.0..2.0f64),
        d1 in prop::array::uniform3(0.1..10.0f64),
        d2 in prop::array::uniform3(0.1..10.0f64),
        eps in 0.01..0.5f64,
    ) {
        let p1 = QuadraticPeak::quadratic(Point::from_vec(c1.to_vec()), SpdMatrix::diagonal(&d1).unwrap(), 0.0).unwrap();
        let p2 = QuadraticPeak::quadratic(Point::from_vec(c2.to_vec()), SpdMatrix::diagonal(&d2).unwrap(), 0.0).unwrap();
        let s = epsilon_weights(&p1, &p2, eps);
        prop_assert_eq!(s.weights.first().copied(), Some(0.0));
        prop_assert_eq!(s.weights.last().copied(), Some(1.0));
        for w in s.weights.windows(2) {
            prop_assert!(w[0] < w[1]);
            let step = (unconstrained_point(&p1, &p2, w[0]) - unconstrained_point(&p1, &p2, w[1])).norm();
            prop_assert!(step <= eps * (1.0 + 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_instances_round_trip(
        n in 2usize..6,
        seed in any::<u64>(),
        peaks in (1usize..4, 1usize..4),
        recipe in prop::sample::select(vec!["", "linear", "quadratic,linear", "multipeak:lq", "multipeak:qql,quadratic"]),
    ) {
        let mut cfg = GeneratorConfig::new(n, seed);
        cfg.peaks = peaks;
        cfg.constraints = if recipe.is_empty() { Vec::new() } else { ConstraintRecipe::parse_list(recipe).unwrap() };
        let prob = generate(&cfg).unwrap();
        prop_assert!(prob.evaluate(prob.anchor()).unwrap().feasible);
        let text = save(&prob).with_config(cfg.clone()).to_json();
        prop_assert_eq!(&text, &save(&generate(&cfg).unwrap()).with_config(cfg).to_json());
        let doc = InstanceDocument::from_json(&text).unwrap();
        prop_assert_eq!(doc.to_json(), text);
        let back = doc.to_problem().unwrap();
        let x = prob.anchor() * 0.5;
        prop_assert_eq!(prob.evaluate(&x).unwrap(), back.evaluate(&x).unwrap());
    }
}
