//! Predicted limits `I_1`, `I_2`, bias means and the explicit upper bounds, from
//! user-supplied ranks and zeros.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chars::{fs_index, rc_stats, CharLabel, VirtualCharacter};
use crate::error::{Error, Result};

/// Analytic ranks `r_chi` at the central point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankProfile {
    ranks: BTreeMap<CharLabel, u32>,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    label: CharLabel,
    rank: u32,
}

impl RankProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (CharLabel, u32)>>(pairs: I) -> Result<Self> {
        let mut p = Self::new();
        for (l, r) in pairs {
            p.insert(l, r)?;
        }
        Ok(p)
    }

    /// Adds `r_chi`; the rank of a conjugate label must agree.
    pub fn insert(&mut self, label: CharLabel, rank: u32) -> Result<()> {
        for l in [label, label.conj()] {
            if let Some(&old) = self.ranks.get(&l) {
                if old != rank {
                    return Err(Error::InvalidInput(format!(
                        "conflicting ranks {old} and {rank} for {label} and its conjugate"
                    )));
                }
            }
        }
        self.ranks.insert(label, rank);
        Ok(())
    }

    /// `r_chi`, falling back on `r_{conj chi}`.
    pub fn get(&self, label: CharLabel) -> Option<u32> {
        self.ranks
            .get(&label)
            .or_else(|| self.ranks.get(&label.conj()))
            .copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CharLabel, u32)> + '_ {
        self.ranks.iter().map(|(l, r)| (*l, *r))
    }

    /// Parses a JSON array of `{"label", "rank"}` objects, or one such object per line.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let entries: Vec<RankEntry> = if text.trim_start().starts_with('[') {
            serde_json::from_str(text)?
        } else {
            text.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    serde_json::from_str(l).map_err(|e| Error::parse(Some(i + 1), e.to_string()))
                })
                .collect::<Result<_>>()?
        };
        Self::from_pairs(entries.into_iter().map(|e| (e.label, e.rank)))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<RankEntry> = self
            .iter()
            .map(|(label, rank)| RankEntry { label, rank })
            .collect();
        serde_json::to_value(entries).expect("ranks serialize")
    }
}

/// Positive ordinates `gamma_chi` of critical-line zeros, ascending per label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroList {
    zeros: BTreeMap<CharLabel, Vec<f64>>,
}

impl ZeroList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the zeros of `label`; they must be positive and ascending.
    pub fn insert(&mut self, label: CharLabel, gammas: Vec<f64>) -> Result<()> {
        if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::InvalidInput(format!("zero ordinate {g} must be positive")));
        }
        if gammas.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput(format!("zeros of {label} are not ascending")));
        }
        self.zeros.insert(label, gammas);
        Ok(())
    }

    /// Appends one ordinate to `label`.
    pub fn push(&mut self, label: CharLabel, gamma: f64) -> Result<()> {
        let mut g = self.get(label).to_vec();
        g.push(gamma);
        self.insert(label, g)
    }

    pub fn get(&self, label: CharLabel) -> &[f64] {
        self.zeros
            .get(&label)
            .or_else(|| self.zeros.get(&label.conj()))
            .map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, label: CharLabel) -> bool {
        self.zeros.contains_key(&label) || self.zeros.contains_key(&label.conj())
    }

    /// Plain text, one ordinate per line. A line `[label]` starts the list of that
    /// label; numbers before any header belong to `default`. `#` starts a comment.
    pub fn parse<R: BufRead>(r: R, default: Option<CharLabel>) -> Result<Self> {
        let mut out = Self::new();
        let mut cur = default;
        let mut acc: BTreeMap<CharLabel, Vec<f64>> = BTreeMap::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let l: CharLabel = inner.parse()?;
                acc.entry(l).or_default();
                cur = Some(l);
                continue;
            }
            let g: f64 = t
                .parse()
                .map_err(|_| Error::parse(Some(i + 1), format!("bad zero ordinate {t:?}")))?;
            let l = cur.ok_or_else(|| {
                Error::parse(Some(i + 1), "zero ordinate before any [label] header")
            })?;
            acc.entry(l).or_default().push(g);
        }
        for (l, g) in acc {
            out.insert(l, g)?;
        }
        Ok(out)
    }

    pub fn read(path: impl AsRef<Path>, default: Option<CharLabel>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::parse(std::io::BufReader::new(f), default)
    }
}

/// `sum_chi c_chi (2 r_chi + u_chi)`.
pub fn rank_pairing(v: &VirtualCharacter, ranks: &RankProfile) -> Result<Complex64> {
    v.terms()
        .map(|(l, c)| {
            let r = ranks.get(l).ok_or_else(|| Error::MissingRank(l.to_string()))?;
            Ok(c * (2.0 * r as f64 + fs_index(l) as f64))
        })
        .sum()
}

/// `I_1(phi) = |sum_chi c_chi (2 r_chi + u_chi)|^2`.
pub fn i1(v: &VirtualCharacter, ranks: &RankProfile) -> Result<f64> {
    Ok(rank_pairing(v, ranks)?.norm_sqr())
}

/// Predicted limit of the bias mean, `-sum_chi c_chi (2 r_chi + u_chi)`.
pub fn bias_prediction(v: &VirtualCharacter, ranks: &RankProfile) -> Result<Complex64> {
    Ok(-rank_pairing(v, ranks)?)
}

/// `I_2` over the supplied zeros. The contribution of zeros above the largest
/// supplied ordinate is unknown, so the value is a lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct I2Report {
    pub value: f64,
    /// Largest ordinate used for each constituent (`None` for an empty list).
    pub truncated_at: BTreeMap<String, Option<f64>>,
}

/// `I_2(phi) = sum_chi sum_{gamma > 0} 2 |c_chi|^2 / (1/4 + gamma^2)`.
pub fn i2(v: &VirtualCharacter, zeros: &ZeroList) -> I2Report {
    let mut value = 0.0;
    let mut truncated_at = BTreeMap::new();
    for (l, c) in v.terms() {
        let g = zeros.get(l);
        value += g
            .iter()
            .map(|g| 2.0 * c.norm_sqr() / (0.25 + g * g))
            .sum::<f64>();
        truncated_at.insert(l.to_string(), g.last().copied());
    }
    I2Report { value, truncated_at }
}

/// Arithmetic situation of an elliptic curve in the `a_1^3` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeCase {
    NonCmOverQ,
    CmOverQ,
    NonCmOverK,
    /// CM by the base field `K`.
    CmOverK,
}

/// Closed forms of `I_1(a_1^3)` in terms of `r_A` and `r_{Sym^3 A}`:
/// `(4r + 2s - 3)^2` without CM, `(4r + 2s - 4)^2` with CM over `Q`, and
/// `(4r + 2s)^2` with CM by the base field.
pub fn i1_formula_a1cubed(case: CubeCase, r_a: u32, r_sym3: u32) -> f64 {
    let base = 4 * r_a as i64 + 2 * r_sym3 as i64;
    let v = match case {
        CubeCase::NonCmOverQ | CubeCase::NonCmOverK => base - 3,
        CubeCase::CmOverQ => base - 4,
        CubeCase::CmOverK => base,
    };
    (v * v) as f64
}

/// Absolute constants `K_1..K_6` of the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants(pub [f64; 6]);

impl Default for Constants {
    fn default() -> Self {
        Constants([1.0; 6])
    }
}

impl Constants {
    /// `K_i` for `i` in `1..=6`.
    pub fn k(&self, i: usize) -> f64 {
        self.0[i - 1]
    }
}

/// Inputs of the bound formulas for one irreducible constituent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// `d_chi`
    pub degree: f64,
    /// `[k : Q]`
    pub field_degree: f64,
    /// Norm of the conductor.
    pub conductor: f64,
    /// `w_chi`
    pub weight: f64,
}

/// `S_chi = d_chi [k:Q] log(N (w_chi + 3))`.
pub fn s_bound(b: &BoundInputs) -> f64 {
    b.degree * b.field_degree * (b.conductor * (b.weight + 3.0)).ln()
}

/// `m(chi, T) <= K_4 d_chi [k:Q] log(N (T + 5) (w_chi + 3))`.
pub fn zero_count_bound(b: &BoundInputs, t: f64, k4: f64) -> f64 {
    k4 * b.degree * b.field_degree * (b.conductor * (t + 5.0) * (b.weight + 3.0)).ln()
}

/// `I(phi) <= K_6 R_phi S_phi^2 C_phi`.
pub fn upper_bound(r: f64, s: f64, c: f64, k6: f64) -> f64 {
    k6 * r * s * s * c
}

/// `K_1 ((sum |c_chi| S_chi)^2 + sum c_chi^2 S_chi)`.
pub fn l2_bound(cs: &[(f64, f64)], k1: f64) -> f64 {
    let lin: f64 = cs.iter().map(|(c, s)| c.abs() * s).sum();
    let quad: f64 = cs.iter().map(|(c, s)| c * c * s).sum();
    k1 * (lin * lin + quad)
}

/// All bound quantities of a virtual character.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub r: usize,
    pub c: f64,
    /// `S_phi = max_chi S_chi`
    pub s: f64,
    pub per_label: BTreeMap<String, f64>,
    pub upper_bound: f64,
    pub l2_bound: f64,
}

/// Evaluates the bounds with `d_chi` and `w_chi` taken from the labels.
pub fn bound_report(
    v: &VirtualCharacter,
    field_degree: f64,
    conductor: f64,
    k: &Constants,
) -> Result<BoundReport> {
    let rc = rc_stats(v)?;
    let mut per_label = BTreeMap::new();
    let mut cs = Vec::new();
    let mut s_max: f64 = 0.0;
    for c in &rc.constituents {
        let s = s_bound(&BoundInputs {
            degree: c.degree as f64,
            field_degree,
            conductor,
            weight: c.weight as f64,
        });
        per_label.insert(c.label.to_string(), s);
        cs.push((c.coeff.norm(), s));
        s_max = s_max.max(s);
    }
    Ok(BoundReport {
        r: rc.r,
        c: rc.c,
        s: s_max,
        upper_bound: upper_bound(rc.r as f64, s_max, rc.c, k.k(6)),
        l2_bound: l2_bound(&cs, k.k(1)),
        per_label,
    })
}

/// Ranks over a quadratic field `K` from ranks over `Q`:
/// `r_{E_K} = r_E + r_{E~}` and likewise for `Sym^3`. With CM by `K` the twist has
/// the same ranks, so both double, and `r_{Sym^3} >= r` is required.
pub fn rank_base_change(
    r_e: u32,
    r_twist: u32,
    cm_by_k: bool,
    r_sym3_e: u32,
    r_sym3_twist: u32,
) -> Result<(u32, u32)> {
    if cm_by_k {
        let (r, s) = (2 * r_e, 2 * r_sym3_e);
        if s < r {
            return Err(Error::CmConstraintViolation { rank: r, sym3_rank: s });
        }
        Ok((r, s))
    } else {
        Ok((r_e + r_twist, r_sym3_e + r_sym3_twist))
    }
}
