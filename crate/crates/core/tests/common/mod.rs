//! Oracles shared by the integration tests. Apart from [`eval_worked`], nothing
//! here calls into the library's counting, character or integration code.
#![allow(dead_code)]

use std::path::PathBuf;

pub fn curves_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/curves.jsonl")
}

/// `(label, kind, rank)` for every record of the curve data file.
pub fn curve_ranks() -> Vec<(String, String, u32)> {
    let text = std::fs::read_to_string(curves_path()).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            (
                v["label"].as_str().unwrap().to_string(),
                v["kind"].as_str().unwrap().to_string(),
                v["rank"].as_u64().unwrap() as u32,
            )
        })
        .collect()
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

fn md(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// `p + 1 - #E(F_p)` by testing every affine pair.
pub fn brute_ec_trace(a: [i64; 5], p: u64) -> i64 {
    let [a1, a2, a3, a4, a6] = a.map(|c| md(c, p));
    let mut count = 1u64; // point at infinity
    for x in 0..p {
        let rhs = (((x * x % p) * x) % p + a2 * (x * x % p) + a4 * x + a6) % p;
        for y in 0..p {
            let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    p as i64 + 1 - count as i64
}

/// `F_p[t] / (t^2 - b t - c)` for the first irreducible pair `(b, c)` with `b >= 1`.
struct Fq2 {
    p: u64,
    b: u64,
    c: u64,
}

impl Fq2 {
    fn new(p: u64) -> Self {
        for b in 1..p {
            for c in 1..p {
                if (0..p).all(|t| (t * t % p + p * p - b * t % p - c) % p != 0) {
                    return Fq2 { p, b, c };
                }
            }
        }
        unreachable!("an irreducible quadratic exists for odd p")
    }

    fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        let vv = x.1 * y.1 % p;
        let u = (x.0 * y.0 + vv * self.c) % p;
        let v = (x.0 * y.1 + x.1 * y.0 + vv * self.b) % p;
        (u, v)
    }

    fn pow(&self, mut x: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut r = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    /// Quadratic character of `F_{p^2}` by Euler's criterion.
    fn chi(&self, x: (u64, u64)) -> i64 {
        if x == (0, 0) {
            return 0;
        }
        let q = self.p * self.p;
        if self.pow(x, (q - 1) / 2) == (1, 0) {
            1
        } else {
            -1
        }
    }
}

fn chi_p(v: u64, p: u64) -> i64 {
    if v % p == 0 {
        return 0;
    }
    let (mut r, mut b, mut e) = (1u64, v % p, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// `h^2 + 4 f` reduced mod `p`, padded to degree 6.
fn disc_poly(f: &[i64], h: &[i64], p: u64) -> [u64; 7] {
    let mut d = [0i64; 7];
    for (i, &c) in f.iter().enumerate() {
        d[i] += 4 * c;
    }
    for (i, &x) in h.iter().enumerate() {
        for (j, &y) in h.iter().enumerate() {
            d[i + j] += x * y;
        }
    }
    d.map(|c| md(c, p))
}

/// `(c1, c2)` of `y^2 + h(x) y = f(x)` at an odd prime from `#C(F_p)` and
/// `#C(F_{p^2})`, both counted over every `x` (Horner evaluation) plus the points
/// at infinity of the degree-6 model.
pub fn brute_g2(f: &[i64], h: &[i64], p: u64) -> (i64, i64) {
    assert!(p % 2 == 1);
    let d = disc_poly(f, h, p);
    let mut n1: i64 = 1 + chi_p(d[6], p);
    for x in 0..p {
        let v = d.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
        n1 += 1 + chi_p(v, p);
    }
    let k = Fq2::new(p);
    let mut n2: i64 = 1 + k.chi((d[6], 0));
    for u in 0..p {
        for w in 0..p {
            let x = (u, w);
            let v = d
                .iter()
                .rev()
                .fold((0u64, 0u64), |acc, &c| {
                    let m = k.mul(acc, x);
                    ((m.0 + c) % p, m.1)
                });
            n2 += 1 + k.chi(v);
        }
    }
    let p = p as i64;
    let c1 = p + 1 - n1;
    // p^2 + 1 - N2 = sum alpha^2 = c1^2 - 2 c2
    let s2 = p * p + 1 - n2;
    assert_eq!((c1 * c1 - s2) % 2, 0);
    (c1, (c1 * c1 - s2) / 2)
}

/// `S(k)` and `pi(k)` for every integer `k <= x_max`, by direct accumulation.
pub fn step_tables(data: &[(u64, f64)], x_max: usize) -> (Vec<f64>, Vec<u64>) {
    let mut s = vec![0.0; x_max + 1];
    let mut n = vec![0u64; x_max + 1];
    for &(q, v) in data {
        if (q as usize) <= x_max {
            s[q as usize] += v;
            n[q as usize] += 1;
        }
    }
    for k in 1..=x_max {
        s[k] += s[k - 1];
        n[k] += n[k - 1];
    }
    (s, n)
}

/// Midpoint rule for `(1/log X) int_2^X g(x) dx` with `per_unit` cells on every
/// unit interval, so that no cell straddles an integer jump.
pub fn midpoint(g: impl Fn(f64) -> f64, x_max: f64, per_unit: usize) -> f64 {
    let mut total = 0.0;
    let mut a = 2.0;
    while a < x_max {
        let b = (a.floor() + 1.0).min(x_max);
        let h = (b - a) / per_unit as f64;
        let mut cell = 0.0;
        for i in 0..per_unit {
            cell += g(a + (i as f64 + 0.5) * h);
        }
        total += cell * h;
        a = b;
    }
    total / x_max.ln()
}

/// Oracle for `I(phi, X)`: midpoint integration of `delta^2`.
pub fn oracle_i_norm(data: &[(u64, f64)], x_max: f64, per_unit: usize) -> f64 {
    let (s, n) = step_tables(data, x_max.ceil() as usize);
    midpoint(
        |x| {
            let k = x.floor() as usize;
            if n[k] == 0 {
                0.0
            } else {
                (s[k] / n[k] as f64).powi(2)
            }
        },
        x_max,
        per_unit,
    )
}

/// Oracle for the bias mean: midpoint integration of `psi(x) / x`.
pub fn oracle_bias(data: &[(u64, f64)], x_max: f64, per_unit: usize) -> f64 {
    let (s, _) = step_tables(data, x_max.ceil() as usize);
    midpoint(|x| s[x.floor() as usize] * x.ln() / x.powf(1.5), x_max, per_unit)
}

/// Deterministic pseudo-random series: sorted norms in `[2, x_max]` with values in `[-2, 2]`.
pub fn synthetic_series(seed: u64, x_max: u64, len: usize) -> Vec<(u64, f64)> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut v: Vec<(u64, f64)> = (0..len)
        .map(|_| {
            let q = 2 + next() % (x_max - 1);
            let val = (next() >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0;
            (q, val)
        })
        .collect();
    v.sort_by_key(|p| p.0);
    v
}

/// One worked `I_1` value: group, character expression, ranks, expected value.
pub struct Worked {
    pub name: &'static str,
    pub group: &'static str,
    pub expr: &'static str,
    pub ranks: &'static [(&'static str, u32)],
    pub want: f64,
}

pub const WORKED: &[Worked] = &[
    Worked { name: "rank 1 elliptic a1", group: "SU2", expr: "a1", ranks: &[("chi_1", 1)], want: 1.0 },
    Worked { name: "rank 2 elliptic a1", group: "SU2", expr: "a1", ranks: &[("chi_1", 2)], want: 9.0 },
    Worked { name: "rank 1 beside rank 0", group: "SU2", expr: "a1", ranks: &[("chi_1", 1)], want: 1.0 },
    Worked { name: "rank 0 same value", group: "SU2", expr: "a1", ranks: &[("chi_1", 0)], want: 1.0 },
    // a1^3 without CM: chi_1 carries r_A = 0, chi_3 carries r_Sym3 = 1
    Worked { name: "cube without CM", group: "SU2", expr: "a1^3", ranks: &[("chi_1", 0), ("chi_3", 1)], want: 1.0 },
    // with CM over Q: rho_1 carries r_A, rho_3 carries r_Sym3 - r_A
    Worked { name: "cube with CM", group: "NU1", expr: "a1^3", ranks: &[("rho_1", 0), ("rho_3", 1)], want: 4.0 },
    // CM by K with r_A = 2, r_Sym3 = 4: every nu_{+-1}, nu_{+-3} has rank 1
    Worked {
        name: "cube with CM by K",
        group: "U1",
        expr: "a1^3",
        ranks: &[("nu_1", 1), ("nu_{-1}", 1), ("nu_3", 1), ("nu_{-3}", 1)],
        want: 256.0,
    },
    Worked { name: "surface rank 0", group: "USp4", expr: "a1", ranks: &[("chi_{1,0}", 0)], want: 1.0 },
    Worked { name: "surface rank 1", group: "USp4", expr: "a1", ranks: &[("chi_{1,0}", 1)], want: 1.0 },
    Worked { name: "surface rank 2", group: "USp4", expr: "a1", ranks: &[("chi_{1,0}", 2)], want: 9.0 },
    Worked { name: "surface rank 3", group: "USp4", expr: "a1", ranks: &[("chi_{1,0}", 3)], want: 25.0 },
    Worked { name: "generic surface rank 2", group: "USp4", expr: "a1", ranks: &[("chi_{1,0}", 2)], want: 9.0 },
    Worked {
        name: "product surface ranks 1 and 1",
        group: "SU2xSU2",
        expr: "a1",
        ranks: &[("chi_1xchi_0", 1), ("chi_0xchi_1", 1)],
        want: 4.0,
    },
    Worked { name: "chi_1 at rank 2", group: "SU2", expr: "chi_1", ranks: &[("chi_1", 2)], want: 9.0 },
    Worked {
        name: "chi_1 + chi_3 with r_Sym3 = 0",
        group: "SU2",
        expr: "chi_1 + chi_3",
        ranks: &[("chi_1", 2), ("chi_3", 0)],
        want: 4.0,
    },
    Worked { name: "a2 - 1", group: "USp4", expr: "a2 - 1", ranks: &[("chi_{1,1}", 0)], want: 1.0 },
    Worked {
        name: "a1^2 - 1",
        group: "USp4",
        expr: "a1^2 - 1",
        ranks: &[("chi_{1,1}", 0), ("chi_{2,0}", 0)],
        want: 4.0,
    },
    Worked {
        name: "s2 + 1",
        group: "USp4",
        expr: "s2 + 1",
        ranks: &[("chi_{1,1}", 0), ("chi_{2,0}", 0)],
        want: 0.0,
    },
];

pub fn binom(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// `I_1` of a worked case through the library's virtual characters and rank profiles.
pub fn eval_worked(w: &Worked) -> f64 {
    use strate::chars::CharLabel;
    use strate::predict::{i1, RankProfile};
    let g: strate::StGroup = w.group.parse().unwrap();
    let v = strate::expr::parse_expr(w.expr, g).unwrap().to_vchar().unwrap();
    let ranks = RankProfile::from_pairs(
        w.ranks.iter().map(|(l, r)| (CharLabel::parse_in(l, g).unwrap(), *r)),
    )
    .unwrap();
    i1(&v, &ranks).unwrap()
}
