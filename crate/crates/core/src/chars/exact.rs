use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::label::CharLabel;
use super::poly::{p_poly, SBasis, SymPoly};
use super::vchar::{char_poly, ClassFunction, VirtualCharacter};
use crate::error::{Error, Result};
use crate::stgroup::{ClassPoint, StGroup};

/// Laurent polynomial in `u`, keyed by exponent.
pub type Laurent = BTreeMap<i32, i128>;

/// Class function with exact integer data.
///
/// * `Poly`: polynomial in `x = 2cos(alpha)` (and `y = 2cos(beta)` in genus 2) on
///   `SU2`, `SU2xSU2` or `USp4`.
/// * `Laurent`: polynomial in `u, u^{-1}` on `U1`.
/// * `Normalizer`: `NU1` function, a Laurent polynomial on the identity component
///   and a constant on the sigma component (all of which is one conjugacy class).
#[derive(Debug, Clone)]
pub enum ExactFn {
    Poly {
        group: StGroup,
        p: SymPoly,
        sb: OnceLock<SBasis>,
    },
    Laurent(Laurent),
    Normalizer { id: Laurent, sigma: i128 },
}

impl PartialEq for ExactFn {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactFn::Poly { group: g, p, .. }, ExactFn::Poly { group: h, p: q, .. }) => {
                g == h && p == q
            }
            (ExactFn::Laurent(a), ExactFn::Laurent(b)) => a == b,
            (
                ExactFn::Normalizer { id: a, sigma: s },
                ExactFn::Normalizer { id: b, sigma: t },
            ) => a == b && s == t,
            _ => false,
        }
    }
}

fn laurent_clean(mut l: Laurent) -> Laurent {
    l.retain(|_, v| *v != 0);
    l
}

fn laurent_add(a: &Laurent, b: &Laurent, sign: i128) -> Laurent {
    let mut out = a.clone();
    for (&k, &v) in b {
        *out.entry(k).or_insert(0) += sign * v;
    }
    laurent_clean(out)
}

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&i, &u) in a {
        for (&j, &v) in b {
            *out.entry(i + j).or_insert(0) += u * v;
        }
    }
    laurent_clean(out)
}

fn laurent_eval(l: &Laurent, theta: f64) -> Complex64 {
    l.iter()
        .map(|(&m, &v)| v as f64 * Complex64::from_polar(1.0, m as f64 * theta))
        .sum()
}

/// `u^n + u^{-n}` (just `2` for `n = 0`).
fn laurent_cos(n: i32) -> Laurent {
    laurent_add(&Laurent::from([(n, 1)]), &Laurent::from([(-n, 1)]), 1)
}

impl ExactFn {
    pub fn poly(group: StGroup, p: SymPoly) -> Self {
        debug_assert!(matches!(
            group,
            StGroup::SU2 | StGroup::SU2xSU2 | StGroup::USp4
        ));
        ExactFn::Poly {
            group,
            p,
            sb: OnceLock::new(),
        }
    }

    pub fn group(&self) -> StGroup {
        match self {
            ExactFn::Poly { group, .. } => *group,
            ExactFn::Laurent(_) => StGroup::U1,
            ExactFn::Normalizer { .. } => StGroup::NU1,
        }
    }

    pub fn constant(group: StGroup, v: i128) -> Self {
        match group {
            StGroup::U1 => ExactFn::Laurent(laurent_clean(Laurent::from([(0, v)]))),
            StGroup::NU1 => ExactFn::Normalizer {
                id: laurent_clean(Laurent::from([(0, v)])),
                sigma: v,
            },
            g => Self::poly(g, SymPoly::constant(v)),
        }
    }

    pub fn zero(group: StGroup) -> Self {
        Self::constant(group, 0)
    }

    /// Trace of the standard representation.
    pub fn a1(group: StGroup) -> Self {
        match group {
            StGroup::U1 => ExactFn::Laurent(laurent_cos(1)),
            StGroup::NU1 => ExactFn::Normalizer {
                id: laurent_cos(1),
                sigma: 0,
            },
            StGroup::SU2 => Self::poly(group, SymPoly::x()),
            g => Self::poly(g, &SymPoly::x() + &SymPoly::y()),
        }
    }

    /// Trace of the second exterior power; identically `1` in genus 1.
    pub fn a2(group: StGroup) -> Self {
        match group.genus() {
            1 => Self::constant(group, 1),
            _ => Self::poly(group, &(&SymPoly::x() * &SymPoly::y()) + &SymPoly::constant(2)),
        }
    }

    /// `a_k`, for `k` in `{1, 2}`.
    pub fn coefficient(k: u32, group: StGroup) -> Result<Self> {
        match k {
            1 => Ok(Self::a1(group)),
            2 => Ok(Self::a2(group)),
            _ => Err(Error::InvalidInput(format!("a_{k} is not supported"))),
        }
    }

    /// `g -> a1(g^n)`.
    pub fn power_sum(group: StGroup, n: u32) -> Self {
        let pn = SymPoly::univariate(&p_poly(n as usize));
        match group {
            StGroup::U1 => ExactFn::Laurent(laurent_cos(n as i32)),
            StGroup::NU1 => {
                // (A_u sigma)^2 = -1, so odd powers stay in the sigma component
                let sigma = if n % 2 == 1 {
                    0
                } else if n % 4 == 0 {
                    2
                } else {
                    -2
                };
                ExactFn::Normalizer {
                    id: laurent_cos(n as i32),
                    sigma,
                }
            }
            StGroup::SU2 => Self::poly(group, pn),
            g => Self::poly(g, &pn + &pn.swap()),
        }
    }

    /// `g -> a2(g^n)`, which is `P_n(x) P_n(y) + 2` in genus 2 and `1` in genus 1.
    pub fn power_sum2(group: StGroup, n: u32) -> Self {
        match group.genus() {
            1 => Self::constant(group, 1),
            _ => {
                let pn = SymPoly::univariate(&p_poly(n as usize));
                Self::poly(group, &(&pn * &pn.swap()) + &SymPoly::constant(2))
            }
        }
    }

    /// An irreducible character as an exact function.
    pub fn from_label(label: CharLabel) -> Self {
        match label {
            CharLabel::U1(m) => ExactFn::Laurent(Laurent::from([(m, 1)])),
            CharLabel::NU1Trivial => Self::constant(StGroup::NU1, 1),
            CharLabel::NU1Sign => ExactFn::Normalizer {
                id: Laurent::from([(0, 1)]),
                sigma: -1,
            },
            CharLabel::NU1Rho(m) => ExactFn::Normalizer {
                id: laurent_cos(m as i32),
                sigma: 0,
            },
            l => Self::poly(l.group(), char_poly(l).expect("polynomial character")),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group() != other.group() {
            return Err(Error::InvalidInput(format!(
                "cannot combine functions on {} and {}",
                self.group(),
                other.group()
            )));
        }
        Ok(())
    }

    fn combine(
        &self,
        other: &Self,
        poly: impl Fn(&SymPoly, &SymPoly) -> SymPoly,
        laurent: impl Fn(&Laurent, &Laurent) -> Laurent,
        scalar: impl Fn(i128, i128) -> i128,
    ) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (ExactFn::Poly { group, p, .. }, ExactFn::Poly { p: q, .. }) => {
                Self::poly(*group, poly(p, q))
            }
            (ExactFn::Laurent(a), ExactFn::Laurent(b)) => ExactFn::Laurent(laurent(a, b)),
            (
                ExactFn::Normalizer { id: a, sigma: s },
                ExactFn::Normalizer { id: b, sigma: t },
            ) => ExactFn::Normalizer {
                id: laurent(a, b),
                sigma: scalar(*s, *t),
            },
            _ => unreachable!("groups were checked"),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |p, q| p + q, |a, b| laurent_add(a, b, 1), |s, t| s + t)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |p, q| p - q, |a, b| laurent_add(a, b, -1), |s, t| s - t)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |p, q| p * q, laurent_mul, |s, t| s * t)
    }

    pub fn scale(&self, k: i128) -> Self {
        let sc = |l: &Laurent| laurent_clean(l.iter().map(|(&m, &v)| (m, v * k)).collect());
        match self {
            ExactFn::Poly { group, p, .. } => Self::poly(*group, p.scale(k)),
            ExactFn::Laurent(l) => ExactFn::Laurent(sc(l)),
            ExactFn::Normalizer { id, sigma } => ExactFn::Normalizer {
                id: sc(id),
                sigma: sigma * k,
            },
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(self.group(), 1);
        for _ in 0..n {
            out = out.mul(self).expect("same group");
        }
        out
    }

    /// Exact decomposition into irreducible characters.
    ///
    /// Fails if the function is not an integral combination of characters, which
    /// happens for non-symmetric `USp4` polynomials or `NU1` data that is not a
    /// class function.
    pub fn decompose(&self) -> Result<BTreeMap<CharLabel, i128>> {
        let mut out = BTreeMap::new();
        let mut put = |l: CharLabel, v: i128| {
            if v != 0 {
                out.insert(l, v);
            }
        };
        match self {
            ExactFn::Poly { group, p, .. } => match group {
                StGroup::SU2 => {
                    if !p.is_univariate() {
                        return Err(Error::InvalidInput("SU2 function depends on y".into()));
                    }
                    for (i, _, v) in p.to_s_basis().terms {
                        put(CharLabel::SU2(i as u32), v);
                    }
                }
                StGroup::SU2xSU2 => {
                    for (i, j, v) in p.to_s_basis().terms {
                        put(CharLabel::SU2xSU2(i as u32, j as u32), v);
                    }
                }
                _ => {
                    if !p.is_symmetric() {
                        return Err(Error::InvalidInput(
                            "USp4 function must be symmetric in x and y".into(),
                        ));
                    }
                    // chi_{m,n} (x - y) = S_{m+1}(x) S_n(y) - S_{m+1}(y) S_n(x)
                    let g = p * &(&SymPoly::x() - &SymPoly::y());
                    for (i, j, v) in g.to_s_basis().terms {
                        if i > j {
                            put(CharLabel::USp4(i as u32 - 1, j as u32), v);
                        }
                    }
                }
            },
            ExactFn::Laurent(l) => {
                for (&m, &v) in l {
                    put(CharLabel::U1(m), v);
                }
            }
            ExactFn::Normalizer { id, sigma } => {
                for (&m, &v) in id.range(1..) {
                    if id.get(&-m).copied().unwrap_or(0) != v {
                        return Err(Error::InvalidInput(
                            "NU1 identity-component data must be symmetric in u and 1/u".into(),
                        ));
                    }
                    put(CharLabel::NU1Rho(m as u32), v);
                }
                if id.range(..0).any(|(m, _)| !id.contains_key(&-m)) {
                    return Err(Error::InvalidInput(
                        "NU1 identity-component data must be symmetric in u and 1/u".into(),
                    ));
                }
                let c0 = id.get(&0).copied().unwrap_or(0);
                if (c0 + sigma) % 2 != 0 {
                    return Err(Error::InvalidInput(
                        "NU1 data is not an integral combination of characters".into(),
                    ));
                }
                put(CharLabel::NU1Trivial, (c0 + sigma) / 2);
                put(CharLabel::NU1Sign, (c0 - sigma) / 2);
            }
        }
        Ok(out)
    }

    pub fn to_vchar(&self) -> Result<VirtualCharacter> {
        let d = self.decompose()?;
        VirtualCharacter::from_terms(
            self.group(),
            d.into_iter().map(|(l, v)| (l, Complex64::new(v as f64, 0.0))),
        )
    }

    fn s_basis(&self) -> Option<&SBasis> {
        match self {
            ExactFn::Poly { p, sb, .. } => Some(sb.get_or_init(|| p.to_s_basis())),
            _ => None,
        }
    }
}

impl ClassFunction for ExactFn {
    fn group(&self) -> StGroup {
        ExactFn::group(self)
    }

    fn eval(&self, point: &ClassPoint) -> Complex64 {
        match self {
            ExactFn::Poly { .. } => {
                let sb = self.s_basis().expect("polynomial");
                let a = point.angles();
                let x = 2.0 * a[0].cos();
                let y = a.get(1).map_or(0.0, |b| 2.0 * b.cos());
                Complex64::new(sb.eval(x, y), 0.0)
            }
            ExactFn::Laurent(l) => laurent_eval(l, point.theta()),
            ExactFn::Normalizer { id, sigma } => {
                if point.is_sigma() {
                    Complex64::new(*sigma as f64, 0.0)
                } else {
                    laurent_eval(id, point.theta())
                }
            }
        }
    }
}

impl fmt::Display for ExactFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decompose() {
            Ok(d) if d.is_empty() => f.write_str("0"),
            Ok(d) => {
                let parts: Vec<String> = d.iter().map(|(l, v)| format!("{v}*{l}")).collect();
                f.write_str(&parts.join(" + "))
            }
            Err(_) => write!(f, "<{} function>", self.group()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(f: &ExactFn) -> Vec<(String, i128)> {
        f.decompose()
            .unwrap()
            .into_iter()
            .map(|(l, v)| (l.to_string(), v))
            .collect()
    }

    #[test]
    fn usp4_small_identities() {
        let g = StGroup::USp4;
        let a2m1 = ExactFn::a2(g).sub(&ExactFn::constant(g, 1)).unwrap();
        assert_eq!(dec(&a2m1), vec![("chi_{1,1}".into(), 1)]);
        let s2 = ExactFn::power_sum(g, 2);
        assert_eq!(
            dec(&s2),
            vec![("chi_{0,0}".into(), -1), ("chi_{1,1}".into(), -1), ("chi_{2,0}".into(), 1)]
        );
    }

    #[test]
    fn label_roundtrip() {
        for g in StGroup::ALL {
            for l in CharLabel::enumerate(g, 5) {
                let d = ExactFn::from_label(l).decompose().unwrap();
                assert_eq!(d.len(), 1, "{l}");
                assert_eq!(d.get(&l), Some(&1), "{l}");
            }
        }
    }

    #[test]
    fn nu1_cube() {
        let f = ExactFn::a1(StGroup::NU1).pow(3);
        assert_eq!(dec(&f), vec![("rho_1".into(), 3), ("rho_3".into(), 1)]);
        let f2 = ExactFn::a1(StGroup::NU1).pow(2);
        assert_eq!(
            dec(&f2),
            vec![("triv".into(), 1), ("sign".into(), 1), ("rho_2".into(), 1)]
        );
    }

    #[test]
    fn rejects_non_class_functions() {
        let f = ExactFn::poly(StGroup::USp4, SymPoly::x());
        assert!(f.decompose().is_err());
        let h = ExactFn::Normalizer {
            id: Laurent::from([(1, 1)]),
            sigma: 0,
        };
        assert!(h.decompose().is_err());
    }
}
