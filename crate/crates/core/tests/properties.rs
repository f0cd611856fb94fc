mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use strate::arith::{functional_reverse, Coeffs, LPolynomial, NormedEulerFactor};
use strate::chars::{eval_char, power_sum_char, moment_char, CharLabel, ClassFunction, ExactFn, TrigFamily};
use strate::expr::parse_expr;
use strate::stats::{delta, i_norm, StatSeries};
use strate::stgroup::{class_power, haar_sample, normalize};
use strate::{ClassPoint, StGroup};

const PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 101, 199, 1009, 7919, 65537, 999_983, 1_000_003];

fn g1_factor() -> impl Strategy<Value = NormedEulerFactor> {
    prop::sample::select(&PRIMES[..]).prop_flat_map(|p| {
        let b = (2.0 * (p as f64).sqrt()).floor() as i64;
        (-b..=b).prop_map(move |a| LPolynomial::genus1(p, a).unwrap().as_factor())
    })
}

/// Genus-2 factors built from real eigen-angles, rounded and kept if still valid.
fn g2_factor() -> impl Strategy<Value = NormedEulerFactor> {
    (prop::sample::select(&PRIMES[..]), 0.0..PI, 0.0..PI).prop_filter_map("invalid after rounding", |(p, a, b)| {
        let q = p as f64;
        let c1 = (q.sqrt() * (2.0 * a.cos() + 2.0 * b.cos())).round() as i64;
        let c2 = (q * (2.0 + 4.0 * a.cos() * b.cos())).round() as i64;
        LPolynomial::genus2(p, c1, c2).ok().map(|l| l.as_factor())
    })
}

fn angle_close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9 || ((a - b).abs() - 2.0 * PI).abs() < 1e-9
}

fn point(group: StGroup) -> impl Strategy<Value = ClassPoint> {
    (0.0..PI, 0.0..PI, any::<bool>()).prop_map(move |(a, b, s)| match group {
        StGroup::NU1 if s => ClassPoint::sigma(),
        StGroup::U1 => ClassPoint::g1(group, if s { a } else { -a }),
        g if g.genus() == 1 => ClassPoint::g1(g, a),
        g => ClassPoint::g2(g, a, b),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_round_trip_g1(f in g1_factor()) {
        let t = normalize(&f, StGroup::SU2).unwrap().theta();
        let Coeffs::G1 { a } = f.coeffs else { unreachable!() };
        let back = 2.0 * (f.norm as f64).sqrt() * t.cos();
        prop_assert!((back - a as f64).abs() < 1e-6 * (1.0 + a.abs() as f64));
    }

    #[test]
    fn normalize_round_trip_g2(f in g2_factor()) {
        let pt = normalize(&f, StGroup::USp4).unwrap();
        let (x, y) = (pt.angles()[0].cos(), pt.angles()[1].cos());
        let q = f.norm as f64;
        let Coeffs::G2 { c1, c2 } = f.coeffs else { unreachable!() };
        prop_assert!((q.sqrt() * 2.0 * (x + y) - c1 as f64).abs() < 1e-5 * q.sqrt().max(1.0));
        prop_assert!((q * (2.0 + 4.0 * x * y) - c2 as f64).abs() < 1e-5 * q);
    }

    #[test]
    fn functional_equation_fixes_factors(f in prop_oneof![g1_factor(), g2_factor()]) {
        let c = f.coefficients();
        prop_assert_eq!(functional_reverse(&c, f.norm as i128), Some(c));
    }

    #[test]
    fn functional_reverse_is_an_involution(q in 2i128..50, c in prop::collection::vec(-1000i128..1000, 5)) {
        if let Some(r) = functional_reverse(&c, q) {
            prop_assert_eq!(functional_reverse(&r, q), Some(c));
        }
    }

    #[test]
    fn newton_identities(f in g2_factor()) {
        // p_2 = e_1^2 - 2 e_2 for the normalized roots, with e_1 = a1 and e_2 = a2
        let (a1, a2) = f.normalized();
        let pt = normalize(&f, StGroup::USp4).unwrap();
        let s2: f64 = pt.angles().iter().map(|t| 2.0 * (2.0 * t).cos()).sum();
        prop_assert!((a1 * a1 - 2.0 * a2 - s2).abs() < 1e-6);
    }

    #[test]
    fn class_power_composes(g in prop::sample::select(StGroup::ALL.to_vec()), m in 1u32..7, n in 1u32..7, seed in any::<u64>()) {
        let p = haar_sample(g, seed, 1)[0];
        let lhs = class_power(&class_power(&p, m), n);
        let rhs = class_power(&p, m * n);
        prop_assert_eq!(lhs.is_sigma(), rhs.is_sigma());
        for (a, b) in lhs.angles().iter().zip(rhs.angles()) {
            prop_assert!(angle_close(*a, *b), "{:?} vs {:?}", lhs, rhs);
        }
    }

    #[test]
    fn delta_is_linear(
        vals in prop::collection::vec((2u64..500, -2.0f64..2.0, -2.0f64..2.0), 1..60),
        k in -3.0f64..3.0,
        x in 2.0f64..600.0,
    ) {
        let mut vals = vals;
        vals.sort_by_key(|v| v.0);
        let s = |f: &dyn Fn(&(u64, f64, f64)) -> f64| {
            StatSeries::from_values(vals.iter().map(|v| (v.0, Complex64::new(f(v), 0.0)))).unwrap()
        };
        let (a, b, ab) = (s(&|v| v.1), s(&|v| v.2), s(&|v| v.1 + k * v.2));
        let lhs = delta(&ab, x).unwrap();
        let rhs = delta(&a, x).unwrap() + k * delta(&b, x).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn i_norm_ignores_later_data_and_accumulates(
        vals in prop::collection::vec((2u64..400, -2.0f64..2.0), 1..40),
        extra in prop::collection::vec(-2.0f64..2.0, 0..5),
        x in 3.0f64..400.0,
        y in 3.0f64..400.0,
    ) {
        let mut vals: Vec<(u64, f64)> = vals;
        vals.sort_by_key(|v| v.0);
        let base = StatSeries::from_values(vals.iter().map(|v| (v.0, Complex64::new(v.1, 0.0)))).unwrap();
        let longer = StatSeries::from_values(
            vals.iter().map(|v| (v.0, Complex64::new(v.1, 0.0)))
                .chain(extra.iter().enumerate().map(|(i, e)| (401 + i as u64, Complex64::new(*e, 0.0)))),
        ).unwrap();
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        prop_assert!((i_norm(&base, hi).unwrap() - i_norm(&longer, hi).unwrap()).abs() < 1e-12);
        // the unnormalized integral is nondecreasing in X
        let lo_int = i_norm(&base, lo).unwrap() * lo.ln();
        let hi_int = i_norm(&base, hi).unwrap() * hi.ln();
        prop_assert!(hi_int >= lo_int - 1e-9);
    }

    #[test]
    fn su2_characters_match_sine_ratio(t in 0.01f64..(PI - 0.01), n in 0u32..12) {
        let v = eval_char(CharLabel::SU2(n), &ClassPoint::g1(StGroup::SU2, t)).unwrap();
        let want = ((n + 1) as f64 * t).sin() / t.sin();
        prop_assert!((v.re - want).abs() < 1e-9 && v.im.abs() < 1e-12);
    }

    #[test]
    fn usp4_characters_match_weyl_quotient(a in 0.05f64..3.0, b in 0.05f64..3.0, m in 0u32..5, k in 0u32..5) {
        prop_assume!((a - b).abs() > 0.05);
        let n = k.min(m);
        // Weyl character formula for C2 with weights (m, n) and rho = (2, 1)
        let det = |p: f64, q: f64| (p * a).sin() * (q * b).sin() - (q * a).sin() * (p * b).sin();
        let want = det((m + 2) as f64, (n + 1) as f64) / det(2.0, 1.0);
        let v = eval_char(CharLabel::USp4(m, n), &ClassPoint::g2(StGroup::USp4, a, b)).unwrap();
        prop_assert!((v.re - want).abs() < 1e-7 * (1.0 + want.abs()), "{} vs {}", v.re, want);
    }

    #[test]
    fn identities_hold_pointwise(p in point(StGroup::USp4), q in point(StGroup::SU2), r in point(StGroup::NU1), u in point(StGroup::U1)) {
        let pairs: [(&str, &str, ClassPoint); 8] = [
            ("a1^3", "2*chi_1 + chi_3", q),
            ("a1^2", "chi_2 + chi_0", q),
            ("a2 - 1", "chi_{1,1}", p),
            ("a1^2 - 1", "chi_{1,1} + chi_{2,0}", p),
            ("s2 + 1", "chi_{2,0} - chi_{1,1}", p),
            ("s5", "chi_{5,0} - chi_{4,1} + chi_{2,1} - chi_{1,0}", p),
            ("a1^3", "3*rho_1 + rho_3", r),
            ("a1^3", "nu_{-3} + 3*nu_{-1} + 3*nu_1 + nu_3", u),
        ];
        for (l, rhs, pt) in pairs {
            let g = pt.group();
            let a = parse_expr(l, g).unwrap().eval(&pt);
            let b = parse_expr(rhs, g).unwrap().eval(&pt);
            prop_assert!((a - b).norm() < 1e-8, "{} = {} on {}: {} vs {}", l, rhs, g, a, b);
        }
    }
}

#[test]
fn trig_and_polynomial_routes_agree_on_haar_samples() {
    for g in StGroup::ALL {
        let pts = haar_sample(g, 17, 1000);
        for n in 1..=6 {
            for k in [1, 2] {
                if g.genus() == 1 && k == 2 {
                    continue;
                }
                let routes: [(Box<dyn ClassFunction>, TrigFamily); 2] = [
                    (Box::new(moment_char(k, n, g).unwrap()), TrigFamily::moment(k, n, g)),
                    (Box::new(power_sum_char(k, n, g).unwrap()), TrigFamily::power_sum(k, n, g)),
                ];
                for (poly, trig) in &routes {
                    for p in &pts {
                        let (a, b) = (poly.eval(p), trig.eval(p));
                        assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()), "{g} k={k} n={n} at {p:?}: {a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn exact_constructors_agree_with_trigonometry() {
    let p = ClassPoint::g2(StGroup::USp4, 0.4, 2.1);
    let (x, y) = (0.4f64.cos(), 2.1f64.cos());
    let a1 = ExactFn::a1(StGroup::USp4).eval(&p).re;
    let a2 = ExactFn::a2(StGroup::USp4).eval(&p).re;
    assert!((a1 - 2.0 * (x + y)).abs() < 1e-12);
    assert!((a2 - (2.0 + 4.0 * x * y)).abs() < 1e-12);
    // chi_{1,1} at the identity has dimension 5
    let id = ClassPoint::g2(StGroup::USp4, 0.0, 0.0);
    assert!((eval_char(CharLabel::USp4(1, 1), &id).unwrap().re - 5.0).abs() < 1e-9);
    assert!(eval_char(CharLabel::NU1Rho(3), &ClassPoint::sigma()).unwrap().norm() < 1e-15);
}
