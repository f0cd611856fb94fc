use rayon::prelude::*;

use super::curve::{good_reduction, CurveKind, CurveModel};
use super::lpoly::LPolynomial;
use super::sieve::sieve_primes;
use crate::error::{Error, Result};

/// Default largest prime for genus-2 counting.
pub const G2_DEFAULT_CAP: u64 = 3000;

/// Quadratic residues of `F_p` as a bitset (zero counts as a square).
#[derive(Debug, Clone, Default)]
pub struct LegendreTable {
    p: u32,
    squares: Vec<u32>,
}

impl LegendreTable {
    pub fn new(p: u64) -> Self {
        let mut t = Self::default();
        t.rebuild(p);
        t
    }

    pub fn rebuild(&mut self, p: u64) {
        assert!(p >= 2 && p < 1 << 31, "prime {p} out of range");
        self.p = p as u32;
        self.squares.clear();
        self.squares.resize(p as usize / 32 + 1, 0);
        // i^2 -> (i+1)^2 by adding 2i + 1
        let p = p as u32;
        let mut sq = 0u32;
        for i in 0..p.div_ceil(2) {
            self.squares[(sq >> 5) as usize] |= 1 << (sq & 31);
            sq = add_mod(sq, 2 * i + 1, p);
        }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn is_square(&self, v: u64) -> bool {
        (self.squares[(v >> 5) as usize] >> (v & 31)) & 1 == 1
    }

    #[inline]
    pub fn chi(&self, v: u64) -> i8 {
        if v == 0 {
            0
        } else if self.is_square(v) {
            1
        } else {
            -1
        }
    }

    /// Smallest quadratic non-residue (`p` odd).
    pub fn non_residue(&self) -> u64 {
        (2..self.p as u64).find(|&v| self.chi(v) < 0).expect("odd prime has a non-residue")
    }
}

#[inline(always)]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    // min picks s - p exactly when it does not wrap; keeps the loop branch-free
    let s = a.wrapping_add(b);
    s.min(s.wrapping_sub(p))
}

#[inline(always)]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a.wrapping_sub(b);
    s.min(s.wrapping_add(p))
}

fn reduce(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Forward differences `[F(0), ΔF(0), Δ²F(0), ...]` of a polynomial over `F_p`.
fn forward_differences(poly: &[u64], p: u64) -> Vec<u32> {
    let deg = poly.len().saturating_sub(1);
    let vals: Vec<u64> = (0..=deg as u64).map(|x| eval_mod(poly, x % p, p)).collect();
    differences_of(&vals, p)
}

/// Leading forward differences of the value list `F(0), ..., F(deg)`.
fn differences_of(vals: &[u64], p: u64) -> Vec<u32> {
    let deg = vals.len() - 1;
    let mut vals = vals.to_vec();
    let mut out = Vec::with_capacity(deg + 1);
    for k in 0..=deg {
        out.push(vals[0] as u32);
        for i in 0..deg - k {
            vals[i] = (vals[i + 1] + p - vals[i]) % p;
        }
    }
    out
}

/// `sum_{x in F_p} chi(F(x))` stepping the polynomial by finite differences.
fn char_sum_fp(poly: &[u64], table: &LegendreTable) -> i64 {
    let p = table.p;
    let mut d = forward_differences(poly, p as u64);
    let n = d.len();
    let mut acc: i64 = 0;
    for _ in 0..p {
        acc += table.chi(d[0] as u64) as i64;
        for k in 0..n - 1 {
            d[k] = add_mod(d[k], d[k + 1], p);
        }
    }
    acc
}

const LANES: usize = 16;

/// `sum_{x in F_p} chi(g(x))` for a cubic `g`, with `LANES` independent
/// finite-difference walks so the loop vectorizes.
#[inline(always)]
fn cubic_char_sum_lanes(g: &[u64], table: &LegendreTable) -> i64 {
    let p = table.p;
    let pp = p as u64;
    let bits = &table.squares[..];
    let m = (p as usize).div_ceil(LANES);
    let mut v = [0u32; LANES];
    let mut d1 = [0u32; LANES];
    let mut d2 = [0u32; LANES];
    let mut d3 = [0u32; LANES];
    for j in 0..LANES {
        let x0 = (j * m) as u64 % pp;
        let shifted: Vec<u64> = (0..4).map(|x| eval_mod(g, (x0 + x) % pp, pp)).collect();
        let d = differences_of(&shifted, pp);
        (v[j], d1[j], d2[j], d3[j]) = (d[0], d[1], d[2], d[3]);
    }
    let mut squares = [0u32; LANES];
    let mut zeros = [0u32; LANES];
    for _ in 0..m {
        for j in 0..LANES {
            let x = v[j];
            // SAFETY: add_mod keeps every walk value below p, and the bitset has p/32 + 1 words.
            let word = unsafe { *bits.get_unchecked((x >> 5) as usize) };
            squares[j] = squares[j].wrapping_add((word >> (x & 31)) & 1);
            zeros[j] = zeros[j].wrapping_add((x == 0) as u32);
            v[j] = add_mod(v[j], d1[j], p);
            d1[j] = add_mod(d1[j], d2[j], p);
            d2[j] = add_mod(d2[j], d3[j], p);
        }
    }
    let mut sq: i64 = squares.iter().map(|&c| c as i64).sum();
    let mut zero: i64 = zeros.iter().map(|&c| c as i64).sum();
    // the last walks run past p and revisit x - p
    for x in pp..(LANES * m) as u64 {
        let val = eval_mod(g, x % pp, pp);
        sq -= table.is_square(val) as i64;
        zero -= (val == 0) as i64;
    }
    // chi = 2 [square] - 1 on nonzero values, 0 at zero (which is in the bitset)
    2 * sq - pp as i64 - zero
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512vl,avx512bw")]
unsafe fn cubic_char_sum_avx512(g: &[u64], table: &LegendreTable) -> i64 {
    cubic_char_sum_lanes(g, table)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn cubic_char_sum_avx2(g: &[u64], table: &LegendreTable) -> i64 {
    cubic_char_sum_lanes(g, table)
}

#[cfg(target_arch = "x86_64")]
fn has_avx512() -> bool {
    is_x86_feature_detected!("avx512f")
        && is_x86_feature_detected!("avx512vl")
        && is_x86_feature_detected!("avx512bw")
}

fn cubic_char_sum(g: &[u64], table: &LegendreTable) -> i64 {
    if table.p < 256 {
        return char_sum_fp(g, table);
    }
    #[cfg(target_arch = "x86_64")]
    {
        if has_avx512() {
            // SAFETY: the required features were detected at runtime.
            return unsafe { cubic_char_sum_avx512(g, table) };
        }
        if is_x86_feature_detected!("avx2") {
            // SAFETY: as above.
            return unsafe { cubic_char_sum_avx2(g, table) };
        }
    }
    cubic_char_sum_lanes(g, table)
}

/// Weierstrass `b`-invariants of the completed-square model
/// `(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`, ascending.
fn ec_cubic(ainvs: &[i64; 5]) -> [i64; 4] {
    let [a1, a2, a3, a4, a6] = *ainvs;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    [b6, 2 * b4, b2, 4]
}

/// Projective point count by enumerating the affine Weierstrass equation.
fn ec_count_enumerate(ainvs: &[i64; 5], p: u64) -> u64 {
    let a: Vec<u64> = ainvs.iter().map(|&c| reduce(c, p)).collect();
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + a[1] * x % p * x + a[3] * x + a[4]) % p;
        for y in 0..p {
            let lhs = (y * y + a[0] * x % p * y + a[2] * y) % p;
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

fn ec_trace_with(ainvs: &[i64; 5], p: u64, table: &mut LegendreTable) -> i64 {
    if p <= 3 {
        return p as i64 + 1 - ec_count_enumerate(ainvs, p) as i64;
    }
    if table.p() != p {
        table.rebuild(p);
    }
    let g: Vec<u64> = ec_cubic(ainvs).iter().map(|&c| reduce(c, p)).collect();
    -cubic_char_sum(&g, table)
}

fn require_good(curve: &CurveModel, p: u64) -> Result<()> {
    if p < 2 || !good_reduction(curve, p) {
        return Err(Error::BadReduction {
            label: curve.label.clone(),
            p,
        });
    }
    Ok(())
}

/// `a_p = p + 1 - #E(F_p)` by exhaustive counting.
pub fn ec_trace(curve: &CurveModel, p: u64) -> Result<i64> {
    let CurveKind::Elliptic { ainvs } = &curve.kind else {
        return Err(Error::InvalidInput(format!("{} is not an elliptic curve", curve.label)));
    };
    require_good(curve, p)?;
    Ok(ec_trace_with(ainvs, p, &mut LegendreTable::default()))
}

/// Arithmetic in `F_p[t]/(t^2 - d)`.
#[derive(Debug, Clone, Copy)]
struct Fp2 {
    p: u64,
    d: u64,
}

impl Fp2 {
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }

    fn sub(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        ((a.0 + self.p - b.0) % self.p, (a.1 + self.p - b.1) % self.p)
    }

    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        let re = (a.0 * b.0 + a.1 * b.1 % p * self.d) % p;
        let im = (a.0 * b.1 + a.1 * b.0) % p;
        (re, im)
    }

    fn eval(&self, poly: &[u64], z: (u64, u64)) -> (u64, u64) {
        poly.iter()
            .rev()
            .fold((0, 0), |acc, &c| self.add(self.mul(acc, z), (c, 0)))
    }
}

/// `sum_{z in F_{p^2}} chi_{p^2}(F(z))` where `chi_{p^2}(w) = chi_p(N(w))`.
///
/// Rows `z = a + b t` with fixed `b` are walked in `a` by finite differences,
/// `LANES` rows at a time; rows `b` and `-b` are conjugate and contribute equally.
#[inline(always)]
fn char_sum_fp2_lanes(poly: &[u64], table: &LegendreTable) -> i64 {
    const MAXD: usize = 7;
    let p = table.p();
    let p32 = p as u32;
    let field = Fp2 { p, d: table.non_residue() };
    let sq: Vec<u32> = (0..p).map(|v| (v * v % p) as u32).collect();
    let dsq: Vec<u32> = sq.iter().map(|&s| (s as u64 * field.d % p) as u32).collect();
    let bits = &table.squares[..];
    let deg = poly.len() - 1;
    assert!(deg < MAXD);
    let rows = p.div_ceil(2);
    let mut total: i64 = 0;
    let mut b0 = 0u64;
    while b0 < rows {
        let mut re = [[0u32; LANES]; MAXD];
        let mut im = [[0u32; LANES]; MAXD];
        let mut weight = [0i64; LANES];
        for j in 0..LANES {
            let b = b0 + j as u64;
            if b >= rows {
                continue;
            }
            weight[j] = if b == 0 { 1 } else { 2 };
            let mut vals: Vec<(u64, u64)> =
                (0..=deg as u64).map(|a| field.eval(poly, (a % p, b))).collect();
            for k in 0..=deg {
                re[k][j] = vals[0].0 as u32;
                im[k][j] = vals[0].1 as u32;
                for i in 0..deg - k {
                    vals[i] = field.sub(vals[i + 1], vals[i]);
                }
            }
        }
        let mut squares = [0u32; LANES];
        let mut zeros = [0u32; LANES];
        for _ in 0..p {
            for j in 0..LANES {
                // SAFETY: walk values stay below p, the length of both tables.
                let (s, t) = unsafe {
                    (
                        *sq.get_unchecked(re[0][j] as usize),
                        *dsq.get_unchecked(im[0][j] as usize),
                    )
                };
                let n = sub_mod(s, t, p32);
                // SAFETY: n < p and the bitset has p/32 + 1 words.
                let word = unsafe { *bits.get_unchecked((n >> 5) as usize) };
                squares[j] = squares[j].wrapping_add((word >> (n & 31)) & 1);
                zeros[j] = zeros[j].wrapping_add((n == 0) as u32);
            }
            for k in 0..deg {
                for j in 0..LANES {
                    re[k][j] = add_mod(re[k][j], re[k + 1][j], p32);
                    im[k][j] = add_mod(im[k][j], im[k + 1][j], p32);
                }
            }
        }
        for j in 0..LANES {
            let row = 2 * squares[j] as i64 - p as i64 - zeros[j] as i64;
            total += weight[j] * row;
        }
        b0 += LANES as u64;
    }
    total
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512vl,avx512bw")]
unsafe fn char_sum_fp2_avx512(poly: &[u64], table: &LegendreTable) -> i64 {
    char_sum_fp2_lanes(poly, table)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn char_sum_fp2_avx2(poly: &[u64], table: &LegendreTable) -> i64 {
    char_sum_fp2_lanes(poly, table)
}

fn char_sum_fp2(poly: &[u64], table: &LegendreTable) -> i64 {
    #[cfg(target_arch = "x86_64")]
    {
        if has_avx512() {
            // SAFETY: the required features were detected at runtime.
            return unsafe { char_sum_fp2_avx512(poly, table) };
        }
        if is_x86_feature_detected!("avx2") {
            // SAFETY: as above.
            return unsafe { char_sum_fp2_avx2(poly, table) };
        }
    }
    char_sum_fp2_lanes(poly, table)
}

fn g2_lpoly_with(curve: &CurveModel, p: u64, table: &mut LegendreTable) -> Result<LPolynomial> {
    let sextic = curve.completed_square().expect("genus-2 model");
    if table.p() != p {
        table.rebuild(p);
    }
    let mut poly: Vec<u64> = sextic.iter().map(|&c| reduce(c, p)).collect();
    while poly.last() == Some(&0) {
        poly.pop();
    }
    // good reduction keeps the binary-sextic degree at 5 or 6 mod p
    let (inf1, inf2) = match poly.len() {
        7 => ((1 + table.chi(poly[6]) as i64), 2),
        6 => (1, 1),
        _ => {
            return Err(Error::BadReduction {
                label: curve.label.clone(),
                p,
            })
        }
    };
    let p_i = p as i64;
    let n1 = p_i + char_sum_fp(&poly, table) + inf1;
    let n2 = p_i * p_i + char_sum_fp2(&poly, table) + inf2;
    let t1 = p_i + 1 - n1;
    let t2 = p_i * p_i + 1 - n2;
    let c2 = (t1 * t1 - t2) / 2;
    LPolynomial::genus2(p, t1, c2)
}

/// L-polynomial of a genus-2 curve at `p` from `#C(F_p)` and `#C(F_{p^2})`.
pub fn g2_lpoly(curve: &CurveModel, p: u64, cap: u64) -> Result<LPolynomial> {
    if curve.genus() != 2 {
        return Err(Error::InvalidInput(format!("{} is not a genus-2 curve", curve.label)));
    }
    require_good(curve, p)?;
    if p > cap {
        return Err(Error::BudgetExceeded { p, cap });
    }
    g2_lpoly_with(curve, p, &mut LegendreTable::default())
}

/// Euler factors at all good primes `<= bound`, ascending by prime.
/// Genus-2 curves fail with `BudgetExceeded` if `bound > cap`.
pub fn lpolys(curve: &CurveModel, bound: u64, cap: u64) -> Result<Vec<LPolynomial>> {
    let mut out = lpolys_many(std::slice::from_ref(curve), bound, cap)?;
    Ok(out.pop().unwrap_or_default())
}

/// Counts several curves at once, sharing one quadratic-residue table per prime.
/// Primes are processed in parallel; each output list is sorted by prime.
pub fn lpolys_many(curves: &[CurveModel], bound: u64, cap: u64) -> Result<Vec<Vec<LPolynomial>>> {
    let primes = sieve_primes(bound);
    if curves.iter().any(|c| c.genus() == 2) {
        if let Some(&p) = primes.iter().find(|&&p| p > cap) {
            return Err(Error::BudgetExceeded { p, cap });
        }
    }
    let per_prime: Vec<Vec<Option<LPolynomial>>> = primes
        .par_iter()
        .map_init(LegendreTable::default, |table, &p| {
            curves
                .iter()
                .map(|curve| -> Result<Option<LPolynomial>> {
                    if !good_reduction(curve, p) {
                        return Ok(None);
                    }
                    match &curve.kind {
                        CurveKind::Elliptic { ainvs } => {
                            let a = ec_trace_with(ainvs, p, table);
                            LPolynomial::genus1(p, a).map(Some)
                        }
                        CurveKind::Genus2 { .. } => g2_lpoly_with(curve, p, table).map(Some),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::with_capacity(primes.len()); curves.len()];
    for row in per_prime {
        for (slot, l) in out.iter_mut().zip(row) {
            slot.extend(l);
        }
    }
    Ok(out)
}
