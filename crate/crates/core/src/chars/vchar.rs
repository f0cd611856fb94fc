use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::label::CharLabel;
use super::poly::{s_poly, s_values, SBasis, SymPoly};
use crate::error::{Error, Result};
use crate::stgroup::{ClassPoint, StGroup};

/// A function on the conjugacy classes of a group.
pub trait ClassFunction: Send + Sync {
    fn group(&self) -> StGroup;
    fn eval(&self, point: &ClassPoint) -> Complex64;
}

impl<T: ClassFunction + ?Sized> ClassFunction for &T {
    fn group(&self) -> StGroup {
        (**self).group()
    }
    fn eval(&self, point: &ClassPoint) -> Complex64 {
        (**self).eval(point)
    }
}

impl<T: ClassFunction + ?Sized> ClassFunction for Box<T> {
    fn group(&self) -> StGroup {
        (**self).group()
    }
    fn eval(&self, point: &ClassPoint) -> Complex64 {
        (**self).eval(point)
    }
}

/// Wraps a closure as a class function.
pub struct FnClass<F> {
    group: StGroup,
    f: F,
}

impl<F: Fn(&ClassPoint) -> Complex64 + Send + Sync> FnClass<F> {
    pub fn new(group: StGroup, f: F) -> Self {
        Self { group, f }
    }
}

impl<F: Fn(&ClassPoint) -> Complex64 + Send + Sync> ClassFunction for FnClass<F> {
    fn group(&self) -> StGroup {
        self.group
    }
    fn eval(&self, point: &ClassPoint) -> Complex64 {
        (self.f)(point)
    }
}

/// Exact polynomial of a character of `SU2`, `SU2xSU2` or `USp4`.
///
/// `chi_{m,n}` is the quotient `[S_{m+1}(x) S_n(y) - S_{m+1}(y) S_n(x)] / (x - y)`.
pub fn char_poly(label: CharLabel) -> Result<SymPoly> {
    let sx = |k: u32| SymPoly::univariate(&s_poly(k as usize));
    let sy = |k: u32| sx(k).swap();
    match label {
        CharLabel::SU2(n) => Ok(sx(n)),
        CharLabel::SU2xSU2(i, j) => Ok(&sx(i) * &sy(j)),
        CharLabel::USp4(m, n) => {
            let num = &(&sx(m + 1) * &sy(n)) - &(&sy(m + 1) * &sx(n));
            Ok(num.div_x_minus_y().expect("antisymmetric numerator is divisible by x - y"))
        }
        other => Err(Error::InvalidInput(format!(
            "{other} is not a polynomial in the class coordinates"
        ))),
    }
}

/// Cached `S`-basis coefficients of a polynomial character.
pub(crate) fn char_s_basis(label: CharLabel) -> Arc<SBasis> {
    static CACHE: OnceLock<Mutex<HashMap<CharLabel, Arc<SBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&label) {
        return s.clone();
    }
    let s = Arc::new(char_poly(label).expect("polynomial character").to_s_basis());
    cache.lock().expect("cache lock").insert(label, s.clone());
    s
}

/// Value of an irreducible character at a class point.
pub fn eval_char(label: CharLabel, point: &ClassPoint) -> Result<Complex64> {
    if label.group() != point.group() {
        return Err(Error::GroupMismatch {
            label: label.to_string(),
            group: point.group(),
        });
    }
    Ok(eval_char_unchecked(label, point))
}

pub(crate) fn eval_char_unchecked(label: CharLabel, point: &ClassPoint) -> Complex64 {
    let re = |v: f64| Complex64::new(v, 0.0);
    match label {
        CharLabel::U1(m) => Complex64::from_polar(1.0, m as f64 * point.theta()),
        CharLabel::NU1Trivial => re(1.0),
        CharLabel::NU1Sign => re(if point.is_sigma() { -1.0 } else { 1.0 }),
        CharLabel::NU1Rho(m) => {
            if point.is_sigma() {
                re(0.0)
            } else {
                re(2.0 * (m as f64 * point.theta()).cos())
            }
        }
        CharLabel::SU2(n) => re(s_values(2.0 * point.theta().cos(), n as usize)[n as usize]),
        CharLabel::SU2xSU2(..) | CharLabel::USp4(..) => {
            let a = point.angles();
            re(char_s_basis(label).eval(2.0 * a[0].cos(), 2.0 * a[1].cos()))
        }
    }
}

/// Finite complex combination of irreducible characters of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualCharacter {
    group: StGroup,
    coeffs: BTreeMap<CharLabel, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct VcharJson {
    group: StGroup,
    coeffs: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    label: CharLabel,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl VirtualCharacter {
    pub fn new(group: StGroup) -> Self {
        Self {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I, C>(group: StGroup, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CharLabel, C)>,
        C: Into<Complex64>,
    {
        let mut v = Self::new(group);
        for (l, c) in terms {
            v.add_term(l, c.into())?;
        }
        Ok(v)
    }

    /// Integer-coefficient shorthand, mainly for tests and tables.
    pub fn from_ints(group: StGroup, terms: &[(CharLabel, i64)]) -> Self {
        Self::from_terms(group, terms.iter().map(|&(l, c)| (l, Complex64::new(c as f64, 0.0))))
            .expect("labels belong to the group")
    }

    pub fn add_term(&mut self, label: CharLabel, c: Complex64) -> Result<()> {
        if label.group() != self.group {
            return Err(Error::GroupMismatch {
                label: label.to_string(),
                group: self.group,
            });
        }
        let e = self.coeffs.entry(label).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if e.norm() == 0.0 {
            self.coeffs.remove(&label);
        }
        Ok(())
    }

    pub fn coeff(&self, label: CharLabel) -> Complex64 {
        self.coeffs.get(&label).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (CharLabel, Complex64)> + '_ {
        self.coeffs.iter().map(|(l, c)| (*l, *c))
    }

    pub fn labels(&self) -> impl Iterator<Item = CharLabel> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn trivial_coeff(&self) -> Complex64 {
        self.coeff(CharLabel::trivial(self.group))
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            group: self.group,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(l, c)| (*l, *c))
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            group: self.group,
            coeffs: self.coeffs.iter().map(|(l, c)| (*l, c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `c_chi = conj(c_{conj chi})` for every label, within `tol`.
    pub fn is_selfdual(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .all(|(l, c)| (c - self.coeff(l.conj()).conj()).norm() <= tol)
    }

    /// Largest index appearing in a label, used to size numeric searches.
    pub fn max_index(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|l| match *l {
                CharLabel::U1(m) => m.unsigned_abs(),
                CharLabel::NU1Trivial | CharLabel::NU1Sign => 0,
                CharLabel::NU1Rho(m) | CharLabel::SU2(m) => m,
                CharLabel::SU2xSU2(i, j) => i.max(j),
                CharLabel::USp4(m, _) => m,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = VcharJson {
            group: self.group,
            coeffs: self
                .coeffs
                .iter()
                .map(|(l, c)| TermJson {
                    label: *l,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("virtual character serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: VcharJson = serde_json::from_str(text)?;
        Self::from_terms(
            doc.group,
            doc.coeffs.into_iter().map(|t| (t.label, Complex64::new(t.re, t.im))),
        )
    }
}

impl ClassFunction for VirtualCharacter {
    fn group(&self) -> StGroup {
        self.group
    }

    fn eval(&self, point: &ClassPoint) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(l, c)| c * eval_char_unchecked(*l, point))
            .sum()
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (l, c) in &self.coeffs {
            let coeff = if c.im == 0.0 {
                format!("{}", c.re)
            } else {
                format!("({}{:+}i)", c.re, c.im)
            };
            if first {
                write!(f, "{coeff}*{l}")?;
            } else {
                write!(f, " + {coeff}*{l}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(CharLabel::SU2(1)).unwrap(), SymPoly::x());
        assert_eq!(char_poly(CharLabel::USp4(1, 0)).unwrap(), &SymPoly::x() + &SymPoly::y());
        let c11 = char_poly(CharLabel::USp4(1, 1)).unwrap();
        assert_eq!(c11, &(&SymPoly::x() * &SymPoly::y()) + &SymPoly::one());
        assert_eq!(c11.eval(2.0, 2.0), 5.0);
        assert!(char_poly(CharLabel::U1(1)).is_err());
    }

    #[test]
    fn eval_examples() {
        let p = ClassPoint::g1(StGroup::SU2, FRAC_PI_2);
        assert!(eval_char(CharLabel::SU2(3), &p).unwrap().norm() < 1e-15);
        assert_eq!(eval_char(CharLabel::NU1Rho(4), &ClassPoint::sigma()).unwrap().re, 0.0);
        assert_eq!(eval_char(CharLabel::NU1Sign, &ClassPoint::sigma()).unwrap().re, -1.0);
        let id = ClassPoint::g2(StGroup::USp4, 0.0, 0.0);
        for l in CharLabel::enumerate(StGroup::USp4, 5) {
            let v = eval_char(l, &id).unwrap();
            assert!((v.re - l.degree() as f64).abs() < 1e-9, "{l}");
        }
        assert!(eval_char(CharLabel::SU2(1), &id).is_err());
        let u = ClassPoint::g1(StGroup::U1, PI / 3.0);
        assert!((eval_char(CharLabel::U1(3), &u).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn json_roundtrip_and_selfduality() {
        let v = VirtualCharacter::from_ints(
            StGroup::U1,
            &[(CharLabel::U1(-1), 3), (CharLabel::U1(1), 3), (CharLabel::U1(3), 1)],
        );
        assert!(!v.is_selfdual(1e-12));
        let w = v.add(&VirtualCharacter::from_ints(StGroup::U1, &[(CharLabel::U1(-3), 1)])).unwrap();
        assert!(w.is_selfdual(1e-12));
        let text = w.to_json().to_string();
        assert_eq!(VirtualCharacter::from_json(&text).unwrap(), w);
        assert!(text.contains("\"nu_{-3}\""));
        let bad = r#"{"group":"SU2","coeffs":[{"label":"chi_{1,0}","re":1,"im":0}]}"#;
        assert!(matches!(VirtualCharacter::from_json(bad), Err(Error::GroupMismatch { .. })));
    }
}
