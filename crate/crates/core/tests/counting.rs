mod common;

use common::*;
use strate::arith::{self, Coeffs, CurveKind, CurveModel};
use strate::stgroup::normalize;
use strate::{Error, StGroup};

fn curves() -> Vec<CurveModel> {
    arith::read_curve_file(curves_path()).unwrap()
}

#[test]
fn data_file_lists_all_curves_with_ranks() {
    let ranks = curve_ranks();
    let labels: Vec<&str> = ranks.iter().map(|r| r.0.as_str()).collect();
    for l in ["37.a1", "37.b2", "389.a1", "390.a1", "40.a1", "49.a1", "62127.a.62127.1", "277.a.277.1"] {
        assert!(labels.contains(&l), "{l}");
    }
    assert_eq!(curves().len(), ranks.len());
}

#[test]
fn elliptic_traces_match_brute_force() {
    for c in curves() {
        let CurveKind::Elliptic { ainvs } = c.kind else { continue };
        let mut good = 0;
        for p in primes_upto(200) {
            if !arith::good_reduction(&c, p) {
                assert!(matches!(arith::ec_trace(&c, p), Err(Error::BadReduction { .. })));
                continue;
            }
            good += 1;
            let a = arith::ec_trace(&c, p).unwrap();
            assert_eq!(a, brute_ec_trace(ainvs, p), "{} at p = {p}", c.label);
            assert!((a * a) as u64 <= 4 * p);
        }
        assert!(good >= 42, "{}: only {good} good primes", c.label);
    }
}

#[test]
fn elliptic_bad_primes_are_the_conductor_primes() {
    let bad = |label: &str| {
        let c = curves().into_iter().find(|c| c.label == label).unwrap();
        primes_upto(400).into_iter().filter(|&p| !arith::good_reduction(&c, p)).collect::<Vec<_>>()
    };
    assert_eq!(bad("37.a1"), vec![37]);
    assert_eq!(bad("389.a1"), vec![389]);
    assert_eq!(bad("49.a1"), vec![7]);
    assert_eq!(bad("40.a1"), vec![2, 5]);
}

#[test]
fn genus2_lpolys_match_brute_force() {
    for c in curves() {
        let CurveKind::Genus2 { f, h } = &c.kind else { continue };
        for p in primes_upto(200) {
            if !arith::good_reduction(&c, p) {
                continue;
            }
            let l = arith::g2_lpoly(&c, p, arith::G2_DEFAULT_CAP).unwrap();
            let Coeffs::G2 { c1, c2 } = l.coeffs else { panic!("genus 2 factor expected") };
            assert_eq!((c1, c2), brute_g2(f, h, p), "{} at p = {p}", c.label);
        }
    }
}

#[test]
fn outputs_satisfy_weil_and_real_angles() {
    for c in curves() {
        let group = if c.genus() == 1 { StGroup::SU2 } else { StGroup::USp4 };
        let lp = arith::lpolys(&c, 200, arith::G2_DEFAULT_CAP).unwrap();
        assert!(!lp.is_empty());
        for l in lp {
            let f = l.as_factor();
            f.validate().unwrap();
            let pt = normalize(&f, group).unwrap();
            for &t in pt.angles() {
                assert!((0.0..=std::f64::consts::PI).contains(&t));
            }
            let q = l.prime as f64;
            match l.coeffs {
                Coeffs::G1 { a } => assert!((a as f64).abs() <= 2.0 * q.sqrt() + 1e-9),
                Coeffs::G2 { c1, c2 } => {
                    assert!((c1 as f64).abs() <= 4.0 * q.sqrt() + 1e-9);
                    // the normalized a2 lies in [-2, 6]
                    let a2 = c2 as f64 / q;
                    assert!((-2.0 - 1e-9..=6.0 + 1e-9).contains(&a2));
                    let (x, y) = f.cos_pair().unwrap();
                    assert!(x.abs() <= 1.0 + 1e-9 && y.abs() <= 1.0 + 1e-9);
                }
            }
        }
    }
}

#[test]
fn budget_is_enforced() {
    let c = curves().into_iter().find(|c| c.label == "277.a.277.1").unwrap();
    assert!(matches!(
        arith::lpolys(&c, 5000, 3000),
        Err(Error::BudgetExceeded { cap: 3000, .. })
    ));
    assert!(matches!(arith::g2_lpoly(&c, 3001, 3000), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn known_small_values() {
    // a_p of 37.a1 for the first primes, as tabulated in the LMFDB
    let c = curves().into_iter().find(|c| c.label == "37.a1").unwrap();
    let want = [(2, -2), (3, -3), (5, -2), (7, -1), (11, -5), (13, -2)];
    for (p, a) in want {
        assert_eq!(arith::ec_trace(&c, p).unwrap(), a);
    }
}

#[test]
fn csv_round_trip() {
    let c = curves().into_iter().find(|c| c.label == "62127.a.62127.1").unwrap();
    let f: Vec<_> = arith::lpolys(&c, 300, 3000).unwrap().iter().map(|l| l.as_factor()).collect();
    let mut buf = Vec::new();
    arith::write_lpoly_csv(&mut buf, &["x".into()], &f).unwrap();
    assert_eq!(arith::ingest_lpoly_reader(&buf[..]).unwrap(), f);
}
