use super::lpoly::{Coeffs, LPolynomial, NormedEulerFactor};
use crate::error::Result;

/// Decomposition type of a rational prime in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i8 {
    if p == 2 {
        return match d.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let mut e = 1u128;
    let mut base = r as u128;
    let mut k = (p - 1) / 2;
    let m = p as u128;
    while k > 0 {
        if k & 1 == 1 {
            e = e * base % m;
        }
        base = base * base % m;
        k >>= 1;
    }
    if e == 1 {
        1
    } else {
        -1
    }
}

/// How `p` decomposes in the quadratic field of discriminant `disc`.
pub fn splitting(disc: i64, p: u64) -> Splitting {
    match kronecker(disc, p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

/// Euler factors over a quadratic field above a genus-1 prime `p` with trace `a_p`.
/// Split primes give two copies of `(a_p, p)`; an inert prime gives one factor of
/// norm `p^2` and trace `a_p^2 - 2p` (the eigenvalues squared).
pub fn quadratic_base_change(a_p: i64, p: u64, split: bool) -> Result<Vec<NormedEulerFactor>> {
    let l = LPolynomial::genus1(p, a_p)?;
    base_change_factor(&l, if split { Splitting::Split } else { Splitting::Inert })
}

/// Base change of any Euler factor; ramified primes keep a single factor of norm `p`.
pub fn base_change_factor(l: &LPolynomial, how: Splitting) -> Result<Vec<NormedEulerFactor>> {
    let f = l.as_factor();
    f.validate()?;
    Ok(match how {
        Splitting::Split => vec![f, f],
        Splitting::Ramified => vec![f],
        Splitting::Inert => {
            let p = l.prime;
            let q = p.checked_mul(p).expect("norm fits in u64");
            let coeffs = match l.coeffs {
                Coeffs::G1 { a } => Coeffs::G1 {
                    a: a * a - 2 * p as i64,
                },
                Coeffs::G2 { c1, c2 } => {
                    let p = p as i64;
                    // power sums of squared eigenvalues via e1..e4 = c1, c2, p c1, p^2
                    Coeffs::G2 {
                        c1: c1 * c1 - 2 * c2,
                        c2: c2 * c2 - 2 * c1 * (p * c1) + 2 * p * p,
                    }
                }
            };
            vec![NormedEulerFactor::new(q, coeffs)?]
        }
    })
}

/// Base change of a prime-ordered list of factors to the quadratic field of
/// discriminant `disc`, re-sorted by norm.
pub fn base_change_series(lpolys: &[LPolynomial], disc: i64) -> Result<Vec<NormedEulerFactor>> {
    let mut out = Vec::with_capacity(lpolys.len() * 2);
    for l in lpolys {
        out.extend(base_change_factor(l, splitting(disc, l.prime))?);
    }
    out.sort_by_key(|f| f.norm);
    Ok(out)
}
