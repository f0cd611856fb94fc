use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::stgroup::StGroup;

/// Irreducible character of one of the supported groups.
///
/// `NU1` uses the basis `triv`, `sign`, `rho_m` (`m >= 1`); `rho_0` is the
/// reducible `triv + sign` and is not a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLabel {
    /// `nu_m(u) = u^m`
    U1(i32),
    NU1Trivial,
    NU1Sign,
    NU1Rho(u32),
    /// `chi_n = Tr Sym^n`
    SU2(u32),
    /// `chi_i ⊠ chi_j`
    SU2xSU2(u32, u32),
    /// `chi_{m,n}`, `m >= n`
    USp4(u32, u32),
}

impl CharLabel {
    pub fn group(&self) -> StGroup {
        match self {
            CharLabel::U1(_) => StGroup::U1,
            CharLabel::NU1Trivial | CharLabel::NU1Sign | CharLabel::NU1Rho(_) => StGroup::NU1,
            CharLabel::SU2(_) => StGroup::SU2,
            CharLabel::SU2xSU2(..) => StGroup::SU2xSU2,
            CharLabel::USp4(..) => StGroup::USp4,
        }
    }

    pub fn trivial(group: StGroup) -> Self {
        match group {
            StGroup::U1 => CharLabel::U1(0),
            StGroup::NU1 => CharLabel::NU1Trivial,
            StGroup::SU2 => CharLabel::SU2(0),
            StGroup::SU2xSU2 => CharLabel::SU2xSU2(0, 0),
            StGroup::USp4 => CharLabel::USp4(0, 0),
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::trivial(self.group())
    }

    /// Dimension of the representation.
    pub fn degree(&self) -> u64 {
        match *self {
            CharLabel::U1(_) | CharLabel::NU1Trivial | CharLabel::NU1Sign => 1,
            CharLabel::NU1Rho(_) => 2,
            CharLabel::SU2(n) => n as u64 + 1,
            CharLabel::SU2xSU2(i, j) => (i as u64 + 1) * (j as u64 + 1),
            CharLabel::USp4(m, n) => {
                let (m, n) = (m as u64, n as u64);
                (m - n + 1) * (n + 1) * (m + 2) * (m + n + 3) / 6
            }
        }
    }

    /// Combinatorial weight used by the bound formulas and the parity bookkeeping.
    pub fn weight(&self) -> u32 {
        match *self {
            CharLabel::U1(m) => m.unsigned_abs(),
            CharLabel::NU1Trivial | CharLabel::NU1Sign => 0,
            CharLabel::NU1Rho(m) | CharLabel::SU2(m) => m,
            CharLabel::SU2xSU2(i, j) | CharLabel::USp4(i, j) => i + j,
        }
    }

    /// Label of the complex-conjugate character.
    pub fn conj(&self) -> Self {
        match *self {
            CharLabel::U1(m) => CharLabel::U1(-m),
            other => other,
        }
    }

    /// All labels of `group` with indices bounded by `max`:
    /// `|m| <= max` for `U1`, `m <= max` for `rho_m`, `chi_n` and `chi_{m,n}`,
    /// and `i, j <= max` for `SU2xSU2`.
    pub fn enumerate(group: StGroup, max: u32) -> Vec<CharLabel> {
        let m = max as i32;
        match group {
            StGroup::U1 => (-m..=m).map(CharLabel::U1).collect(),
            StGroup::NU1 => [CharLabel::NU1Trivial, CharLabel::NU1Sign]
                .into_iter()
                .chain((1..=max).map(CharLabel::NU1Rho))
                .collect(),
            StGroup::SU2 => (0..=max).map(CharLabel::SU2).collect(),
            StGroup::SU2xSU2 => (0..=max)
                .flat_map(|i| (0..=max).map(move |j| CharLabel::SU2xSU2(i, j)))
                .collect(),
            StGroup::USp4 => (0..=max)
                .flat_map(|a| (0..=a).map(move |b| CharLabel::USp4(a, b)))
                .collect(),
        }
    }

    /// Parses a label and checks that it belongs to `group`.
    pub fn parse_in(s: &str, group: StGroup) -> Result<Self> {
        let label = parse_label(s)?;
        if label.group() != group {
            return Err(Error::GroupMismatch {
                label: s.to_string(),
                group,
            });
        }
        Ok(label)
    }
}

fn bad(s: &str) -> Error {
    Error::InvalidInput(format!("unrecognized character label {s:?}"))
}

fn strip_braces(s: &str) -> &str {
    s.strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(s)
}

fn parse_label(s: &str) -> Result<CharLabel> {
    let t = s.trim();
    let num = |v: &str| -> Result<u32> { strip_braces(v).trim().parse().map_err(|_| bad(s)) };
    match t {
        "triv" => return Ok(CharLabel::NU1Trivial),
        "sign" => return Ok(CharLabel::NU1Sign),
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("nu_") {
        let m: i32 = strip_braces(rest).trim().parse().map_err(|_| bad(s))?;
        return Ok(CharLabel::U1(m));
    }
    if let Some(rest) = t.strip_prefix("rho_") {
        let m = num(rest)?;
        if m == 0 {
            return Err(Error::InvalidInput(
                "rho_0 is reducible; use triv + sign".into(),
            ));
        }
        return Ok(CharLabel::NU1Rho(m));
    }
    if let Some((a, b)) = t.split_once('x') {
        let i = a.strip_prefix("chi_").ok_or_else(|| bad(s))?;
        let j = b.strip_prefix("chi_").ok_or_else(|| bad(s))?;
        return Ok(CharLabel::SU2xSU2(num(i)?, num(j)?));
    }
    if let Some(rest) = t.strip_prefix("chi_") {
        let inner = strip_braces(rest);
        if let Some((a, b)) = inner.split_once(',') {
            let (m, n) = (num(a)?, num(b)?);
            if n > m {
                return Err(Error::InvalidInput(format!("{s}: need m >= n")));
            }
            return Ok(CharLabel::USp4(m, n));
        }
        return Ok(CharLabel::SU2(num(inner)?));
    }
    Err(bad(s))
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CharLabel::U1(m) if m < 0 => write!(f, "nu_{{{m}}}"),
            CharLabel::U1(m) => write!(f, "nu_{m}"),
            CharLabel::NU1Trivial => f.write_str("triv"),
            CharLabel::NU1Sign => f.write_str("sign"),
            CharLabel::NU1Rho(m) => write!(f, "rho_{m}"),
            CharLabel::SU2(n) => write!(f, "chi_{n}"),
            CharLabel::SU2xSU2(i, j) => write!(f, "chi_{i}xchi_{j}"),
            CharLabel::USp4(m, n) => write!(f, "chi_{{{m},{n}}}"),
        }
    }
}

impl FromStr for CharLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_label(s)
    }
}

impl Serialize for CharLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CharLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
