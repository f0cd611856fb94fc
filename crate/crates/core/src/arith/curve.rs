use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curve over the rationals given by an integral model.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveModel {
    pub label: String,
    pub kind: CurveKind,
    discriminant: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveKind {
    /// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
    Elliptic { ainvs: [i64; 5] },
    /// `y^2 + h(x) y = f(x)`, coefficient lists in ascending degree.
    Genus2 { f: Vec<i64>, h: Vec<i64> },
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRecord {
    label: String,
    kind: String,
    coeffs: CoeffRecord,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRecord {
    Elliptic { ainvs: Vec<i64> },
    Genus2 { f: Vec<i64>, h: Vec<i64> },
}

impl CurveModel {
    pub fn elliptic(label: impl Into<String>, ainvs: [i64; 5]) -> Result<Self> {
        let label = label.into();
        let discriminant = weierstrass_discriminant(&ainvs);
        if discriminant.is_zero() {
            return Err(Error::InvalidInput(format!("{label}: singular Weierstrass model")));
        }
        Ok(Self {
            label,
            kind: CurveKind::Elliptic { ainvs },
            discriminant,
        })
    }

    pub fn genus2(label: impl Into<String>, f: Vec<i64>, h: Vec<i64>) -> Result<Self> {
        let label = label.into();
        let mut f = f;
        let mut h = h;
        trim(&mut f);
        trim(&mut h);
        if h.len() > 4 {
            return Err(Error::InvalidInput(format!("{label}: deg h must be at most 3")));
        }
        let sextic = completed_square(&f, &h);
        let deg = sextic.len().saturating_sub(1);
        if !(deg == 5 || deg == 6) {
            return Err(Error::InvalidInput(format!(
                "{label}: 4f + h^2 has degree {deg}, expected 5 or 6"
            )));
        }
        let discriminant = sextic_discriminant(&sextic);
        if discriminant.is_zero() {
            return Err(Error::InvalidInput(format!("{label}: singular genus-2 model")));
        }
        Ok(Self {
            label,
            kind: CurveKind::Genus2 { f, h },
            discriminant,
        })
    }

    pub fn genus(&self) -> u8 {
        match self.kind {
            CurveKind::Elliptic { .. } => 1,
            CurveKind::Genus2 { .. } => 2,
        }
    }

    /// Discriminant of the model. For genus 2 this is the discriminant of
    /// `4f + h^2` read as a binary sextic.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `4f + h^2` in ascending degree (genus 2 only).
    pub fn completed_square(&self) -> Option<Vec<i64>> {
        match &self.kind {
            CurveKind::Genus2 { f, h } => Some(completed_square(f, h)),
            CurveKind::Elliptic { .. } => None,
        }
    }

    pub fn from_json(line: &str) -> Result<Self> {
        let rec: CurveRecord = serde_json::from_str(line)?;
        match (rec.kind.as_str(), rec.coeffs) {
            ("ec", CoeffRecord::Elliptic { ainvs }) => {
                let ainvs: [i64; 5] = ainvs.try_into().map_err(|v: Vec<i64>| {
                    Error::parse(None, format!("ainvs needs 5 entries, got {}", v.len()))
                })?;
                Self::elliptic(rec.label, ainvs)
            }
            ("g2", CoeffRecord::Genus2 { f, h }) => Self::genus2(rec.label, f, h),
            (kind, _) => Err(Error::parse(
                None,
                format!("curve kind {kind:?} does not match its coefficient record"),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        let coeffs = match &self.kind {
            CurveKind::Elliptic { ainvs } => CoeffRecord::Elliptic {
                ainvs: ainvs.to_vec(),
            },
            CurveKind::Genus2 { f, h } => CoeffRecord::Genus2 {
                f: f.clone(),
                h: h.clone(),
            },
        };
        let kind = if self.genus() == 1 { "ec" } else { "g2" };
        serde_json::to_string(&CurveRecord {
            label: self.label.clone(),
            kind: kind.into(),
            coeffs,
        })
        .expect("curve record serializes")
    }
}

/// Reads a JSON-lines curve file. Blank lines and `#` comments are skipped.
pub fn read_curve_file(path: impl AsRef<Path>) -> Result<Vec<CurveModel>> {
    let text = fs::read_to_string(path)?;
    parse_curve_lines(&text)
}

pub fn parse_curve_lines(text: &str) -> Result<Vec<CurveModel>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let curve = CurveModel::from_json(line).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(Some(i + 1), msg),
            other => other,
        })?;
        out.push(curve);
    }
    Ok(out)
}

/// `p` does not divide the model discriminant; genus 2 additionally needs `p` odd.
pub fn good_reduction(curve: &CurveModel, p: u64) -> bool {
    if curve.genus() == 2 && p == 2 {
        return false;
    }
    let r: BigInt = curve.discriminant() % BigInt::from(p);
    !r.is_zero()
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn weierstrass_discriminant(a: &[i64; 5]) -> BigInt {
    let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
    let b2 = &a1 * &a1 + 4 * &a2;
    let b4 = 2 * &a4 + &a1 * &a3;
    let b6 = &a3 * &a3 + 4 * &a6;
    let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    let t: BigInt = &b2 * &b2 * &b8;
    9 * &b2 * &b4 * &b6 - t - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6
}

pub(crate) fn completed_square(f: &[i64], h: &[i64]) -> Vec<i64> {
    let n = f.len().max(2 * h.len().saturating_sub(1) + 1).max(1);
    let mut out = vec![0i64; n];
    for (i, &c) in f.iter().enumerate() {
        out[i] += 4 * c;
    }
    for (i, &a) in h.iter().enumerate() {
        for (j, &b) in h.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(&mut out);
    out
}

/// Discriminant of `F` viewed as a binary sextic: `disc_6(F) = a5^2 disc_5(F)`
/// when the leading coefficient vanishes.
pub(crate) fn sextic_discriminant(poly: &[i64]) -> BigInt {
    let p: Vec<BigInt> = poly.iter().map(|&c| BigInt::from(c)).collect();
    match p.len() {
        7 => poly_discriminant(&p),
        6 => {
            let lead = &p[5];
            lead * lead * poly_discriminant(&p)
        }
        _ => BigInt::zero(),
    }
}

/// Discriminant of a polynomial of exact degree `n = p.len() - 1`.
pub(crate) fn poly_discriminant(p: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    let deriv: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(p, &deriv);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let lead = &p[n];
    debug_assert!((&res % lead).is_zero());
    BigInt::from(sign) * res / lead
}

/// Sylvester resultant via fraction-free (Bareiss) elimination.
pub(crate) fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // rows hold coefficients from the leading term down
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !mat[r][k].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    BigInt::from(sign) * &mat[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};

    fn bigint_abs_u128(v: &BigInt) -> Option<u128> {
        v.abs().to_u128()
    }

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn discriminant_of_37a1() {
        let e = CurveModel::elliptic("37.a1", [0, 0, 1, -1, 0]).unwrap();
        assert_eq!(*e.discriminant(), BigInt::from(37));
        assert!(!good_reduction(&e, 37));
        assert!(good_reduction(&e, 5));
        assert!(good_reduction(&e, 2));
    }

    #[test]
    fn quadratic_and_cubic_discriminants() {
        // x^2 - 4 -> 16 ; x^3 + x -> -4
        assert_eq!(poly_discriminant(&b(&[-4, 0, 1])), BigInt::from(16));
        assert_eq!(poly_discriminant(&b(&[0, 1, 0, 1])), BigInt::from(-4));
        // x^3 - x -> 4
        assert_eq!(poly_discriminant(&b(&[0, -1, 0, 1])), BigInt::from(4));
    }

    #[test]
    fn genus2_277_discriminant() {
        let c = CurveModel::genus2("277.a.277.1", vec![0, -1, -1], vec![1, 1, 1, 1]).unwrap();
        assert_eq!(bigint_abs_u128(c.discriminant()), Some(277 * 4096));
        assert!(!good_reduction(&c, 277));
        assert!(!good_reduction(&c, 2));
        assert!(good_reduction(&c, 3));
    }

    #[test]
    fn singular_models_rejected() {
        assert!(CurveModel::elliptic("bad", [0, 0, 0, 0, 0]).is_err());
        assert!(CurveModel::genus2("bad", vec![0, 0, 0, 0, 0, 1], vec![]).is_err());
        assert!(CurveModel::genus2("low", vec![1, 0, 0, 1], vec![]).is_err());
    }

    #[test]
    fn json_lines_roundtrip() {
        let text = r#"
# comment
{"label": "37.a1", "kind": "ec", "coeffs": {"ainvs": [0,0,1,-1,0]}}
{"label": "277.a.277.1", "kind": "g2", "coeffs": {"f": [0,-1,-1], "h": [1,1,1,1]}}
"#;
        let curves = parse_curve_lines(text).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[1].genus(), 2);
        let again = CurveModel::from_json(&curves[0].to_json()).unwrap();
        assert_eq!(again, curves[0]);
    }

    #[test]
    fn malformed_json_reports_line() {
        let err = parse_curve_lines("\n{\"label\": 3}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, Some(2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_curve_lines(r#"{"label":"x","kind":"ec","coeffs":{"f":[1],"h":[]}}"#).is_err());
    }
}
