use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when deciding whether normalized eigen-angle data is real.
pub const ANGLE_TOL: f64 = 1e-9;

/// Unnormalized Euler-factor coefficients with the sign convention `1 - c1 T + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coeffs {
    /// `1 - a T + q T^2`
    G1 { a: i64 },
    /// `1 - c1 T + c2 T^2 - q c1 T^3 + q^2 T^4`
    G2 { c1: i64, c2: i64 },
}

impl Coeffs {
    pub fn genus(&self) -> u8 {
        match self {
            Coeffs::G1 { .. } => 1,
            Coeffs::G2 { .. } => 2,
        }
    }

    pub fn c1(&self) -> i64 {
        match *self {
            Coeffs::G1 { a } => a,
            Coeffs::G2 { c1, .. } => c1,
        }
    }
}

/// Euler factor attached to a prime of norm `norm` (a rational prime or a prime power).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormedEulerFactor {
    pub norm: u64,
    pub coeffs: Coeffs,
}

/// Euler factor at a rational prime, produced by point counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub prime: u64,
    pub coeffs: Coeffs,
}

impl LPolynomial {
    pub fn genus1(prime: u64, a: i64) -> Result<Self> {
        let l = Self {
            prime,
            coeffs: Coeffs::G1 { a },
        };
        l.as_factor().validate()?;
        Ok(l)
    }

    pub fn genus2(prime: u64, c1: i64, c2: i64) -> Result<Self> {
        let l = Self {
            prime,
            coeffs: Coeffs::G2 { c1, c2 },
        };
        l.as_factor().validate()?;
        Ok(l)
    }

    pub fn genus(&self) -> u8 {
        self.coeffs.genus()
    }

    pub fn as_factor(&self) -> NormedEulerFactor {
        NormedEulerFactor {
            norm: self.prime,
            coeffs: self.coeffs,
        }
    }

    pub fn coefficients(&self) -> Vec<i128> {
        self.as_factor().coefficients()
    }
}

impl From<LPolynomial> for NormedEulerFactor {
    fn from(l: LPolynomial) -> Self {
        l.as_factor()
    }
}

impl NormedEulerFactor {
    pub fn new(norm: u64, coeffs: Coeffs) -> Result<Self> {
        let f = Self { norm, coeffs };
        f.validate()?;
        Ok(f)
    }

    pub fn genus(&self) -> u8 {
        self.coeffs.genus()
    }

    /// Checks the Weil bound and, in genus 2, that the eigen-angle quadratic has
    /// real roots in `[-1, 1]`.
    pub fn validate(&self) -> Result<()> {
        if self.norm < 2 {
            return Err(Error::InvalidInput(format!("norm {} is not a prime power", self.norm)));
        }
        let q = self.norm as i128;
        match self.coeffs {
            Coeffs::G1 { a } => {
                let a = a as i128;
                if a * a > 4 * q {
                    return Err(Error::WeilViolation {
                        norm: self.norm,
                        detail: format!("|a| = {} exceeds 2 sqrt({})", a.abs(), self.norm),
                    });
                }
            }
            Coeffs::G2 { c1, .. } => {
                let c = c1 as i128;
                if c * c > 16 * q {
                    return Err(Error::WeilViolation {
                        norm: self.norm,
                        detail: format!("|c1| = {} exceeds 4 sqrt({})", c.abs(), self.norm),
                    });
                }
                self.cos_pair()?;
            }
        }
        Ok(())
    }

    /// Normalized coefficients `(c1 / sqrt(q), c2 / q)`; `c2` term is zero in genus 1.
    pub fn normalized(&self) -> (f64, f64) {
        let q = self.norm as f64;
        match self.coeffs {
            Coeffs::G1 { a } => (a as f64 / q.sqrt(), 0.0),
            Coeffs::G2 { c1, c2 } => (c1 as f64 / q.sqrt(), c2 as f64 / q),
        }
    }

    /// For genus 2: `(cos alpha, cos beta)`, ascending, the roots of
    /// `z^2 - (a1/2) z + (a2 - 2)/4` with clamping inside [`ANGLE_TOL`].
    pub fn cos_pair(&self) -> Result<(f64, f64)> {
        let (a1, a2) = self.normalized();
        cos_pair_from(a1, a2).ok_or_else(|| Error::WeilViolation {
            norm: self.norm,
            detail: format!("normalized ({a1:.6}, {a2:.6}) has no real eigen-angles"),
        })
    }

    /// Full coefficient list `[1, -c1, c2, -q c1, q^2]` (or `[1, -a, q]`).
    pub fn coefficients(&self) -> Vec<i128> {
        let q = self.norm as i128;
        match self.coeffs {
            Coeffs::G1 { a } => vec![1, -(a as i128), q],
            Coeffs::G2 { c1, c2 } => {
                let (c1, c2) = (c1 as i128, c2 as i128);
                vec![1, -c1, c2, -q * c1, q * q]
            }
        }
    }
}

pub(crate) fn cos_pair_from(a1: f64, a2: f64) -> Option<(f64, f64)> {
    let half_sum = a1 / 4.0;
    let mut disc = half_sum * half_sum - (a2 - 2.0) / 4.0;
    if disc < 0.0 {
        if disc < -ANGLE_TOL {
            return None;
        }
        disc = 0.0;
    }
    let r = disc.sqrt();
    let clamp = |z: f64| -> Option<f64> {
        if z.abs() > 1.0 + ANGLE_TOL {
            None
        } else {
            Some(z.clamp(-1.0, 1.0))
        }
    };
    Some((clamp(half_sum - r)?, clamp(half_sum + r)?))
}

/// Reverses an Euler factor of degree `2g` with weight `q`:
/// `T^{2g} q^g L(1/(qT))`. A factor satisfying the functional equation is fixed
/// by this map; returns `None` if the result is not integral.
pub fn functional_reverse(coeffs: &[i128], q: i128) -> Option<Vec<i128>> {
    let deg = coeffs.len() - 1;
    if deg % 2 != 0 {
        return None;
    }
    let g = deg / 2;
    let mut out = Vec::with_capacity(coeffs.len());
    for i in 0..=deg {
        let c = coeffs[deg - i];
        // coefficient of T^i is c_{2g-i} q^{g} / q^{2g-i} = c_{2g-i} q^{i-g}
        let v = if i >= g {
            c * q.pow((i - g) as u32)
        } else {
            let d = q.pow((g - i) as u32);
            if c % d != 0 {
                return None;
            }
            c / d
        };
        out.push(v);
    }
    Some(out)
}
