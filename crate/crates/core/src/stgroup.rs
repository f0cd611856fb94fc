//! The five supported Sato–Tate groups, their conjugacy-class coordinates and Haar measures.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{Coeffs, NormedEulerFactor, ANGLE_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StGroup {
    U1,
    NU1,
    SU2,
    SU2xSU2,
    USp4,
}

impl StGroup {
    pub const ALL: [StGroup; 5] = [
        StGroup::U1,
        StGroup::NU1,
        StGroup::SU2,
        StGroup::SU2xSU2,
        StGroup::USp4,
    ];

    /// Genus of the abelian varieties whose Frobenius classes live in this group.
    pub fn genus(self) -> u8 {
        match self {
            StGroup::U1 | StGroup::NU1 | StGroup::SU2 => 1,
            StGroup::SU2xSU2 | StGroup::USp4 => 2,
        }
    }

    /// Number of angle coordinates of a class point.
    pub fn arity(self) -> usize {
        self.genus() as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StGroup::U1 => "U1",
            StGroup::NU1 => "NU1",
            StGroup::SU2 => "SU2",
            StGroup::SU2xSU2 => "SU2xSU2",
            StGroup::USp4 => "USp4",
        }
    }
}

impl fmt::Display for StGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "u1" => Ok(StGroup::U1),
            "nu1" => Ok(StGroup::NU1),
            "su2" | "usp2" => Ok(StGroup::SU2),
            "su2xsu2" | "g33" | "g3,3" => Ok(StGroup::SU2xSU2),
            "usp4" => Ok(StGroup::USp4),
            _ => Err(Error::InvalidInput(format!("unknown Sato-Tate group {s:?}"))),
        }
    }
}

/// Connected component of a class; only `NU1` has a non-identity component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    Identity,
    Sigma,
}

/// A conjugacy class given by eigen-angles.
///
/// `U1` points may carry a signed angle in `[-pi, pi]` (Frobenius data only ever
/// produces the unsigned one). `SU2xSU2` points built directly keep their factor
/// order, while points coming from [`normalize_g2`] are sorted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassPoint {
    group: StGroup,
    angles: [f64; 2],
    component: Component,
}

impl ClassPoint {
    /// Genus-1 class with angle `theta` (identity component for `NU1`).
    pub fn g1(group: StGroup, theta: f64) -> Self {
        debug_assert_eq!(group.genus(), 1);
        Self {
            group,
            angles: [theta, 0.0],
            component: Component::Identity,
        }
    }

    /// The non-identity component of `NU1`.
    pub fn sigma() -> Self {
        Self {
            group: StGroup::NU1,
            angles: [0.0, 0.0],
            component: Component::Sigma,
        }
    }

    /// Genus-2 class; `USp4` points are stored sorted, `SU2xSU2` points keep order.
    pub fn g2(group: StGroup, alpha: f64, beta: f64) -> Self {
        debug_assert_eq!(group.genus(), 2);
        let angles = if group == StGroup::USp4 && beta < alpha {
            [beta, alpha]
        } else {
            [alpha, beta]
        };
        Self {
            group,
            angles,
            component: Component::Identity,
        }
    }

    /// Genus-2 class in sorted (canonical) form regardless of group.
    pub fn g2_sorted(group: StGroup, alpha: f64, beta: f64) -> Self {
        let (a, b) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
        Self::g2(group, a, b)
    }

    pub fn group(&self) -> StGroup {
        self.group
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn is_sigma(&self) -> bool {
        self.component == Component::Sigma
    }

    pub fn theta(&self) -> f64 {
        self.angles[0]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles[..self.group.arity()]
    }

    /// Normalized characteristic-polynomial data `(a1, a2)` of the class in its
    /// standard representation; `a2` is `1` in genus 1.
    pub fn normalized_coeffs(&self) -> (f64, f64) {
        match self.group.genus() {
            1 if self.is_sigma() => (0.0, 1.0),
            1 => (2.0 * self.theta().cos(), 1.0),
            _ => {
                let (x, y) = (2.0 * self.angles[0].cos(), 2.0 * self.angles[1].cos());
                (x + y, 2.0 + x * y)
            }
        }
    }

    /// CSV row `norm,angle1[,angle2],component` for debugging output.
    pub fn csv_row(&self, norm: u64) -> String {
        let comp = match self.component {
            Component::Identity => "identity",
            Component::Sigma => "sigma",
        };
        match self.angles() {
            [a] => format!("{norm},{a:.12},{comp}"),
            [a, b] => format!("{norm},{a:.12},{b:.12},{comp}"),
            _ => unreachable!(),
        }
    }
}

fn clamped_acos(z: f64, norm: u64) -> Result<f64> {
    if z.abs() > 1.0 + ANGLE_TOL {
        return Err(Error::WeilViolation {
            norm,
            detail: format!("normalized trace {z} outside [-1, 1]"),
        });
    }
    Ok(z.clamp(-1.0, 1.0).acos())
}

/// Class point of a genus-1 Euler factor in `U1`, `NU1` or `SU2`.
pub fn normalize_g1(factor: &NormedEulerFactor, group: StGroup) -> Result<ClassPoint> {
    let Coeffs::G1 { a } = factor.coeffs else {
        return Err(Error::InvalidInput("genus-2 factor given to a genus-1 group".into()));
    };
    if group.genus() != 1 {
        return Err(Error::InvalidInput(format!("{group} is not a genus-1 group")));
    }
    factor.validate()?;
    if group == StGroup::NU1 && a == 0 {
        return Ok(ClassPoint::sigma());
    }
    let theta = clamped_acos(a as f64 / (2.0 * (factor.norm as f64).sqrt()), factor.norm)?;
    Ok(ClassPoint::g1(group, theta))
}

/// Class point of a genus-2 Euler factor in `SU2xSU2` or `USp4`, sorted ascending.
pub fn normalize_g2(factor: &NormedEulerFactor, group: StGroup) -> Result<ClassPoint> {
    if factor.genus() != 2 {
        return Err(Error::InvalidInput("genus-1 factor given to a genus-2 group".into()));
    }
    if group.genus() != 2 {
        return Err(Error::InvalidInput(format!("{group} is not a genus-2 group")));
    }
    let (lo, hi) = factor.cos_pair()?;
    Ok(ClassPoint::g2_sorted(group, hi.acos(), lo.acos()))
}

/// Dispatches on the group genus.
pub fn normalize(factor: &NormedEulerFactor, group: StGroup) -> Result<ClassPoint> {
    match group.genus() {
        1 => normalize_g1(factor, group),
        _ => normalize_g2(factor, group),
    }
}

/// Normalizing constant: `integral over [0,pi]^2 of (cos a - cos b)^2 sin^2 a sin^2 b = pi^2 / 8`.
const USP4_DENSITY_CONST: f64 = 8.0 / (PI * PI);

/// Haar class density. Genus-1 densities are with respect to `d theta` on `[0, pi]`;
/// genus-2 densities are with respect to `d alpha d beta` on the full square
/// `[0, pi]^2`. The `NU1` sigma component is an atom and returns its mass `1/2`.
pub fn haar_density(point: &ClassPoint) -> f64 {
    let s2 = |t: f64| t.sin() * t.sin();
    match point.group {
        StGroup::U1 => 1.0 / PI,
        StGroup::NU1 => match point.component {
            Component::Identity => 0.5 / PI,
            Component::Sigma => 0.5,
        },
        StGroup::SU2 => 2.0 / PI * s2(point.theta()),
        StGroup::SU2xSU2 => 4.0 / (PI * PI) * s2(point.angles[0]) * s2(point.angles[1]),
        StGroup::USp4 => {
            let [a, b] = point.angles;
            let d = a.cos() - b.cos();
            USP4_DENSITY_CONST * d * d * s2(a) * s2(b)
        }
    }
}

/// Haar-distributed class points by rejection sampling from the uniform
/// distribution on the class space. `U1` samples carry signed angles.
pub fn haar_sample(group: StGroup, seed: u64, count: usize) -> Vec<ClassPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_sample_one(group, &mut rng)).collect()
}

pub fn haar_sample_one<R: Rng + ?Sized>(group: StGroup, rng: &mut R) -> ClassPoint {
    let sin2 = |t: f64| t.sin() * t.sin();
    let su2 = |rng: &mut R| loop {
        let t = rng.gen::<f64>() * PI;
        if rng.gen::<f64>() < sin2(t) {
            break t;
        }
    };
    match group {
        StGroup::U1 => ClassPoint::g1(group, rng.gen_range(-PI..PI)),
        StGroup::NU1 => {
            if rng.gen::<bool>() {
                ClassPoint::sigma()
            } else {
                ClassPoint::g1(group, rng.gen::<f64>() * PI)
            }
        }
        StGroup::SU2 => ClassPoint::g1(group, su2(rng)),
        StGroup::SU2xSU2 => {
            let a = su2(rng);
            let b = su2(rng);
            ClassPoint::g2(group, a, b)
        }
        StGroup::USp4 => loop {
            let a = rng.gen::<f64>() * PI;
            let b = rng.gen::<f64>() * PI;
            let d = a.cos() - b.cos();
            // d^2 sin^2 a sin^2 b never exceeds 16/27 < 1
            if rng.gen::<f64>() < d * d * sin2(a) * sin2(b) {
                break ClassPoint::g2(group, a, b);
            }
        },
    }
}

/// Folds an angle onto `[0, pi]` (the class of `e^{i t}` in `SU(2)`).
pub fn fold(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        2.0 * PI - r
    } else {
        r
    }
}

/// Wraps an angle onto `(-pi, pi]`.
pub fn wrap(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Class of `g^n`. For `NU1`, a sigma-component element squares to `-1`
/// (angle `pi` on the identity component).
pub fn class_power(point: &ClassPoint, n: u32) -> ClassPoint {
    let nf = n as f64;
    match point.group {
        StGroup::U1 => ClassPoint::g1(StGroup::U1, wrap(nf * point.theta())),
        StGroup::NU1 if point.is_sigma() => match n % 4 {
            1 | 3 => ClassPoint::sigma(),
            2 => ClassPoint::g1(StGroup::NU1, PI),
            _ => ClassPoint::g1(StGroup::NU1, 0.0),
        },
        StGroup::NU1 | StGroup::SU2 => ClassPoint::g1(point.group, fold(nf * point.theta())),
        StGroup::SU2xSU2 | StGroup::USp4 => ClassPoint::g2(
            point.group,
            fold(nf * point.angles[0]),
            fold(nf * point.angles[1]),
        ),
    }
}

/// Image of a class point under one of the supported subgroup embeddings:
/// `SU2xSU2 -> USp4`, `NU1 -> SU2`, `U1 -> SU2`, `U1 -> NU1`, or the identity.
pub fn embed(point: &ClassPoint, into: StGroup) -> Result<ClassPoint> {
    let from = point.group;
    Ok(match (from, into) {
        (a, b) if a == b => *point,
        (StGroup::SU2xSU2, StGroup::USp4) => {
            ClassPoint::g2(StGroup::USp4, point.angles[0], point.angles[1])
        }
        (StGroup::NU1, StGroup::SU2) => {
            // sigma-component elements have eigenvalues +-i
            let t = if point.is_sigma() { FRAC_PI_2 } else { point.theta() };
            ClassPoint::g1(StGroup::SU2, t)
        }
        (StGroup::U1, StGroup::SU2) | (StGroup::U1, StGroup::NU1) => {
            ClassPoint::g1(into, point.theta().abs())
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "no supported embedding of {from} into {into}"
            )))
        }
    })
}

/// Whether `sub` embeds in `group` through [`embed`].
pub fn embeds(sub: StGroup, group: StGroup) -> bool {
    matches!(
        (sub, group),
        (StGroup::SU2xSU2, StGroup::USp4)
            | (StGroup::NU1, StGroup::SU2)
            | (StGroup::U1, StGroup::SU2)
            | (StGroup::U1, StGroup::NU1)
    ) || sub == group
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(norm: u64, a: i64) -> NormedEulerFactor {
        NormedEulerFactor::new(norm, Coeffs::G1 { a }).unwrap()
    }

    #[test]
    fn group_names_roundtrip() {
        for g in StGroup::ALL {
            assert_eq!(g.to_string().parse::<StGroup>().unwrap(), g);
        }
        assert_eq!("G_{3,3}".replace(['{', '}'], "").parse::<StGroup>().unwrap(), StGroup::SU2xSU2);
        assert!("SO3".parse::<StGroup>().is_err());
    }

    #[test]
    fn normalize_g1_examples() {
        let p = normalize_g1(&g1(7, 0), StGroup::SU2).unwrap();
        assert!((p.theta() - FRAC_PI_2).abs() < 1e-15);
        assert!(normalize_g1(&g1(7, 0), StGroup::NU1).unwrap().is_sigma());
        let p = normalize_g1(&g1(5, 2), StGroup::SU2).unwrap();
        assert!((p.theta() - (1.0 / 5f64.sqrt()).acos()).abs() < 1e-15);
        // 1 - 2 cos(theta) sqrt(5) T + 5 T^2 re-expands to a = 2
        assert!((2.0 * p.theta().cos() * 5f64.sqrt() - 2.0).abs() < 1e-12);
        assert_eq!(normalize_g1(&g1(4, 4), StGroup::SU2).unwrap().theta(), 0.0);
    }

    #[test]
    fn normalize_g2_examples() {
        let f = |q, c1, c2| NormedEulerFactor::new(q, Coeffs::G2 { c1, c2 }).unwrap();
        let p = normalize_g2(&f(11, 0, 0), StGroup::USp4).unwrap();
        assert!((p.angles()[0] - PI / 4.0).abs() < 1e-12);
        assert!((p.angles()[1] - 3.0 * PI / 4.0).abs() < 1e-12);
        // a1 = 4, a2 = 6 at norm 4: c1 = 8, c2 = 24
        let p = normalize_g2(&f(4, 8, 24), StGroup::USp4).unwrap();
        assert_eq!(p.angles(), &[0.0, 0.0]);
        let p = normalize_g2(&f(5, 0, 10), StGroup::USp4).unwrap();
        assert!((p.angles()[0] - FRAC_PI_2).abs() < 1e-12 && (p.angles()[1] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn haar_density_examples() {
        assert!((haar_density(&ClassPoint::g1(StGroup::SU2, FRAC_PI_2)) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(haar_density(&ClassPoint::sigma()), 0.5);
        assert_eq!(haar_density(&ClassPoint::g2(StGroup::USp4, 0.7, 0.7)), 0.0);
    }

    #[test]
    fn class_power_examples() {
        let p = class_power(&ClassPoint::g1(StGroup::SU2, PI / 3.0), 3);
        assert!((p.theta() - PI).abs() < 1e-12);
        let id = ClassPoint::g2(StGroup::USp4, 0.0, 0.0);
        assert_eq!(class_power(&id, 7), id);
        let s = ClassPoint::sigma();
        assert!(class_power(&s, 3).is_sigma());
        assert_eq!(class_power(&s, 2).theta(), PI);
        assert_eq!(class_power(&s, 4).theta(), 0.0);
        let t = class_power(&ClassPoint::g1(StGroup::SU2, 2.0), 2);
        assert!((t.theta() - fold(4.0)).abs() < 1e-15);
    }

    #[test]
    fn fold_and_wrap() {
        assert!((fold(3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert!((fold(-0.5) - 0.5).abs() < 1e-15);
        assert!((wrap(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap(PI), PI);
    }

    #[test]
    fn embeddings() {
        let s = embed(&ClassPoint::sigma(), StGroup::SU2).unwrap();
        assert_eq!(s.theta(), FRAC_PI_2);
        let p = embed(&ClassPoint::g2(StGroup::SU2xSU2, 2.0, 1.0), StGroup::USp4).unwrap();
        assert_eq!(p.angles(), &[1.0, 2.0]);
        assert!(embed(&p, StGroup::SU2).is_err());
    }
}
