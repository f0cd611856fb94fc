//! Moment and power-sum characters `a_k^n` and `s_n^k`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::exact::ExactFn;
use super::label::CharLabel;
use super::vchar::ClassFunction;
use crate::error::{Error, Result};
use crate::stgroup::{class_power, ClassPoint, StGroup};

fn check_k(k: u32) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("k = {k}: only a_1 and a_2 are supported")))
    }
}

/// `a_k^n` as an exact function.
pub fn moment_char(k: u32, n: u32, group: StGroup) -> Result<ExactFn> {
    check_k(k)?;
    Ok(ExactFn::coefficient(k, group)?.pow(n))
}

/// `s_n^k(g) = a_k(g^n)` as an exact function.
pub fn power_sum_char(k: u32, n: u32, group: StGroup) -> Result<ExactFn> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::InvalidInput("power sums start at n = 1".into()));
    }
    Ok(match k {
        1 => ExactFn::power_sum(group, n),
        _ => ExactFn::power_sum2(group, n),
    })
}

/// Which family a [`TrigFamily`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Moment,
    PowerSum,
}

/// `a_k^n` or `s_n^k` evaluated from eigen-angles with plain trigonometry,
/// independent of the polynomial algebra.
#[derive(Debug, Clone, Copy)]
pub struct TrigFamily {
    pub kind: FamilyKind,
    pub k: u32,
    pub n: u32,
    pub group: StGroup,
}

impl TrigFamily {
    pub fn moment(k: u32, n: u32, group: StGroup) -> Self {
        Self { kind: FamilyKind::Moment, k, n, group }
    }

    pub fn power_sum(k: u32, n: u32, group: StGroup) -> Self {
        Self { kind: FamilyKind::PowerSum, k, n, group }
    }
}

fn ak(k: u32, p: &ClassPoint) -> f64 {
    let (a1, a2) = p.normalized_coeffs();
    if k == 1 {
        a1
    } else {
        a2
    }
}

impl ClassFunction for TrigFamily {
    fn group(&self) -> StGroup {
        self.group
    }

    fn eval(&self, p: &ClassPoint) -> Complex64 {
        let v = match self.kind {
            FamilyKind::Moment => ak(self.k, p).powi(self.n as i32),
            FamilyKind::PowerSum => ak(self.k, &class_power(p, self.n)),
        };
        Complex64::new(v, 0.0)
    }
}

fn binom(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn insert(m: &mut BTreeMap<CharLabel, i128>, l: CharLabel, v: i128) {
    let e = m.entry(l).or_insert(0);
    *e += v;
    if *e == 0 {
        m.remove(&l);
    }
}

/// Closed-form decomposition of `a_1^n` on a genus-1 group:
///
/// * `SU2`: `chi_{n-2j}` with multiplicity `C(n,j) - C(n,j-1)`;
/// * `U1`: `nu_{n-2j}` with multiplicity `C(n,j)`;
/// * `NU1`: `rho_{n-2j}` with multiplicity `C(n,j)` for `n - 2j > 0`, and
///   `C(n,n/2)/2` copies each of `triv` and `sign` when `n` is even.
pub fn a1_power_closed(group: StGroup, n: u32) -> Option<BTreeMap<CharLabel, i128>> {
    let mut out = BTreeMap::new();
    for j in 0..=n / 2 {
        let m = n - 2 * j;
        match group {
            StGroup::SU2 => {
                let c = binom(n, j) - if j == 0 { 0 } else { binom(n, j - 1) };
                insert(&mut out, CharLabel::SU2(m), c);
            }
            StGroup::U1 => {
                insert(&mut out, CharLabel::U1(m as i32), binom(n, j));
                if m > 0 {
                    insert(&mut out, CharLabel::U1(-(m as i32)), binom(n, j));
                }
            }
            StGroup::NU1 if m > 0 => insert(&mut out, CharLabel::NU1Rho(m), binom(n, j)),
            StGroup::NU1 => {
                insert(&mut out, CharLabel::NU1Trivial, binom(n, j) / 2);
                insert(&mut out, CharLabel::NU1Sign, binom(n, j) / 2);
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Closed-form decomposition of `s_n = s_n^1`:
///
/// * `SU2`: `chi_n - chi_{n-2}`;
/// * `U1`: `nu_n + nu_{-n}`;
/// * `NU1`: `rho_n`, plus `(-1)^{n/2} (triv - sign)` for even `n`;
/// * `SU2xSU2`: the `SU2` formula in each factor;
/// * `USp4`: `chi_{n,0} - chi_{n-1,1} + chi_{n-3,1} - chi_{n-4,0}` for `n >= 4`,
///   with `s_1 = chi_{1,0}`, `s_2 = chi_{2,0} - chi_{1,1} - chi_{0,0}` and
///   `s_3 = chi_{3,0} - chi_{2,1}`.
pub fn power_sum_closed(group: StGroup, n: u32) -> Option<BTreeMap<CharLabel, i128>> {
    if n == 0 {
        return None;
    }
    let mut out = BTreeMap::new();
    let su2 = |n: u32| -> Vec<(u32, i128)> {
        if n >= 2 {
            vec![(n, 1), (n - 2, -1)]
        } else {
            vec![(n, 1)]
        }
    };
    match group {
        StGroup::SU2 => {
            for (m, c) in su2(n) {
                insert(&mut out, CharLabel::SU2(m), c);
            }
        }
        StGroup::U1 => {
            insert(&mut out, CharLabel::U1(n as i32), 1);
            insert(&mut out, CharLabel::U1(-(n as i32)), 1);
        }
        StGroup::NU1 => {
            insert(&mut out, CharLabel::NU1Rho(n), 1);
            if n % 2 == 0 {
                let s = if n % 4 == 0 { 1 } else { -1 };
                insert(&mut out, CharLabel::NU1Trivial, s);
                insert(&mut out, CharLabel::NU1Sign, -s);
            }
        }
        StGroup::SU2xSU2 => {
            for (m, c) in su2(n) {
                insert(&mut out, CharLabel::SU2xSU2(m, 0), c);
                insert(&mut out, CharLabel::SU2xSU2(0, m), c);
            }
        }
        StGroup::USp4 => {
            let terms: Vec<(u32, u32, i128)> = match n {
                1 => vec![(1, 0, 1)],
                2 => vec![(2, 0, 1), (1, 1, -1), (0, 0, -1)],
                3 => vec![(3, 0, 1), (2, 1, -1)],
                _ => vec![(n, 0, 1), (n - 1, 1, -1), (n - 3, 1, 1), (n - 4, 0, -1)],
            };
            for (a, b, c) in terms {
                insert(&mut out, CharLabel::USp4(a, b), c);
            }
        }
    }
    Some(out)
}
