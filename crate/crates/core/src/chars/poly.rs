use std::ops::{Add, Mul, Neg, Sub};

/// Integer polynomial in `x = 2 cos(alpha)` and `y = 2 cos(beta)`; genus-1
/// polynomials only use `x`. `c[i][j]` is the coefficient of `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPoly {
    c: Vec<Vec<i128>>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: i128) -> Self {
        Self::monomial(0, 0, v)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn monomial(i: usize, j: usize, v: i128) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, v);
        p
    }

    /// Polynomial in `x` alone from ascending coefficients.
    pub fn univariate(coeffs: &[i128]) -> Self {
        let mut p = Self::zero();
        for (i, &v) in coeffs.iter().enumerate() {
            p.add_term(i, 0, v);
        }
        p
    }

    pub fn coeff(&self, i: usize, j: usize) -> i128 {
        self.c.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, i: usize, j: usize, v: i128) {
        if v == 0 {
            return;
        }
        if self.c.len() <= i {
            self.c.resize(i + 1, Vec::new());
        }
        let row = &mut self.c[i];
        if row.len() <= j {
            row.resize(j + 1, 0);
        }
        row[j] += v;
        self.trim();
    }

    fn trim(&mut self) {
        for row in &mut self.c {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
        while self.c.last().is_some_and(|r| r.is_empty()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Nonzero terms `(i, j, coeff)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i128)> + '_ {
        self.c.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(move |(j, &v)| (i, j, v))
        })
    }

    pub fn deg_x(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.c.iter().map(|r| r.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    /// Exchanges `x` and `y`.
    pub fn swap(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, v) in self.terms() {
            out.add_term(j, i, v);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.swap() == *self
    }

    pub fn scale(&self, k: i128) -> Self {
        let mut out = Self::zero();
        for (i, j, v) in self.terms() {
            out.add_term(i, j, k * v);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_univariate(&self) -> bool {
        self.deg_y() == 0
    }

    /// Exact quotient by `(x - y)`, or `None` if `(x - y)` does not divide.
    pub fn div_x_minus_y(&self) -> Option<SymPoly> {
        // as a polynomial in x with coefficients a_i(y): b_{i-1} = a_i + y b_i
        let n = self.deg_x();
        if self.is_zero() {
            return Some(Self::zero());
        }
        let row = |i: usize| -> Vec<i128> { self.c.get(i).cloned().unwrap_or_default() };
        let mut q: Vec<Vec<i128>> = vec![Vec::new(); n];
        let mut carry: Vec<i128> = Vec::new();
        for i in (1..=n).rev() {
            let a = row(i);
            let mut b = vec![0i128; a.len().max(carry.len() + 1)];
            for (j, &v) in a.iter().enumerate() {
                b[j] += v;
            }
            for (j, &v) in carry.iter().enumerate() {
                b[j + 1] += v;
            }
            q[i - 1] = b.clone();
            carry = b;
        }
        // remainder a_0(y) + y b_0(y) must vanish
        let a0 = row(0);
        let mut rem = vec![0i128; a0.len().max(carry.len() + 1)];
        for (j, &v) in a0.iter().enumerate() {
            rem[j] += v;
        }
        for (j, &v) in carry.iter().enumerate() {
            rem[j + 1] += v;
        }
        if rem.iter().any(|&v| v != 0) {
            return None;
        }
        let mut out = Self { c: q };
        out.trim();
        Some(out)
    }

    /// Coefficients in the product basis `S_i(x) S_j(y)`.
    pub fn to_s_basis(&self) -> SBasis {
        let tx = monomial_to_s(self.deg_x());
        let ty = monomial_to_s(self.deg_y());
        let mut d = vec![vec![0i128; self.deg_y() + 1]; self.deg_x() + 1];
        for (i, j, v) in self.terms() {
            for (a, &ta) in tx[i].iter().enumerate() {
                if ta == 0 {
                    continue;
                }
                for (b, &tb) in ty[j].iter().enumerate() {
                    d[a][b] += v * ta * tb;
                }
            }
        }
        SBasis::from_dense(d)
    }

    pub fn from_s_basis(s: &SBasis) -> Self {
        let mut out = Self::zero();
        for &(i, j, v) in &s.terms {
            let si = s_poly(i);
            let sj = s_poly(j);
            for (a, &ca) in si.iter().enumerate() {
                for (b, &cb) in sj.iter().enumerate() {
                    out.add_term(a, b, v * ca * cb);
                }
            }
        }
        out
    }

    /// Value at `(x, y)`, computed in the `S` basis where the recurrence is stable on `[-2, 2]`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.to_s_basis().eval(x, y)
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (i, j, v) in rhs.terms() {
            out.add_term(i, j, v);
        }
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (i, j, v) in rhs.terms() {
            out.add_term(i, j, -v);
        }
        out
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        if self.is_zero() || rhs.is_zero() {
            return SymPoly::zero();
        }
        let mut c = vec![vec![0i128; self.deg_y() + rhs.deg_y() + 1]; self.deg_x() + rhs.deg_x() + 1];
        for (i, j, v) in self.terms() {
            for (k, l, w) in rhs.terms() {
                c[i + k][j + l] += v * w;
            }
        }
        let mut out = SymPoly { c };
        out.trim();
        out
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(-1)
    }
}

/// Sparse coefficients in the basis `S_i(x) S_j(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SBasis {
    pub terms: Vec<(usize, usize, i128)>,
    pub deg_x: usize,
    pub deg_y: usize,
}

impl SBasis {
    pub fn from_dense(d: Vec<Vec<i128>>) -> Self {
        let mut terms = Vec::new();
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    terms.push((i, j, v));
                }
            }
        }
        let deg_x = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let deg_y = terms.iter().map(|t| t.1).max().unwrap_or(0);
        Self { terms, deg_x, deg_y }
    }

    pub fn coeff(&self, i: usize, j: usize) -> i128 {
        self.terms
            .iter()
            .find(|t| t.0 == i && t.1 == j)
            .map(|t| t.2)
            .unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let sx = s_values(x, self.deg_x);
        let sy = s_values(y, self.deg_y);
        self.terms
            .iter()
            .map(|&(i, j, v)| v as f64 * sx[i] * sy[j])
            .sum()
    }
}

/// `S_0(x), ..., S_n(x)` by the three-term recurrence.
pub fn s_values(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 2..=n {
        let v = x * out[k - 1] - out[k - 2];
        out.push(v);
    }
    out
}

/// Ascending coefficients of `S_k`: `S_0 = 1`, `S_1 = x`, `S_k = x S_{k-1} - S_{k-2}`.
pub fn s_poly(k: usize) -> Vec<i128> {
    chebyshev_like(k, vec![1], vec![0, 1])
}

/// Ascending coefficients of `P_n` with `P_n(2 cos t) = 2 cos(n t)`:
/// `P_0 = 2`, `P_1 = x`, `P_n = x P_{n-1} - P_{n-2}`.
pub fn p_poly(n: usize) -> Vec<i128> {
    chebyshev_like(n, vec![2], vec![0, 1])
}

fn chebyshev_like(k: usize, p0: Vec<i128>, p1: Vec<i128>) -> Vec<i128> {
    if k == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..k {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, &v) in cur.iter().enumerate() {
            next[i + 1] += v;
        }
        for (i, &v) in prev.iter().enumerate() {
            next[i] -= v;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Row `k` gives `x^k` in the `S` basis: `x^k = sum_j (C(k,j) - C(k,j-1)) S_{k-2j}`.
fn monomial_to_s(n: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = vec![vec![1]];
    // multiply by x: x S_i = S_{i+1} + S_{i-1}
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut next = vec![0i128; k + 1];
        for (i, &v) in prev.iter().enumerate() {
            next[i + 1] += v;
            if i > 0 {
                next[i - 1] += v;
            }
        }
        rows.push(next);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_families() {
        assert_eq!(s_poly(2), vec![-1, 0, 1]);
        assert_eq!(s_poly(3), vec![0, -2, 0, 1]);
        assert_eq!(p_poly(2), vec![-2, 0, 1]);
        assert_eq!(p_poly(3), vec![0, -3, 0, 1]);
        for t in [0.3f64, 1.1, 2.9] {
            let x = 2.0 * t.cos();
            let s = SymPoly::univariate(&s_poly(5)).eval(x, 0.0);
            assert!((s - (6.0 * t).sin() / t.sin()).abs() < 1e-12);
            let p = SymPoly::univariate(&p_poly(5)).eval(x, 0.0);
            assert!((p - 2.0 * (5.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn division_by_x_minus_y() {
        let x = SymPoly::x();
        let y = SymPoly::y();
        let d = &x - &y;
        let f = &(&x * &x) + &(&y * &SymPoly::constant(3));
        let prod = &d * &f;
        assert_eq!(prod.div_x_minus_y(), Some(f));
        assert_eq!((&x + &y).div_x_minus_y(), None);
    }

    #[test]
    fn s_basis_roundtrip() {
        let x = SymPoly::x();
        let y = SymPoly::y();
        let f = &(&(&x * &x).pow(3) * &y) - &(&y.pow(4) * &SymPoly::constant(7));
        let s = f.to_s_basis();
        assert_eq!(SymPoly::from_s_basis(&s), f);
        // x^2 = S_2 + S_0
        let sq = x.pow(2).to_s_basis();
        assert_eq!(sq.coeff(2, 0), 1);
        assert_eq!(sq.coeff(0, 0), 1);
    }
}
