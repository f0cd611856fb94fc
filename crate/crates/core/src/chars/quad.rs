use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::label::CharLabel;
use super::poly::s_values;
use super::vchar::{char_s_basis, eval_char_unchecked, ClassFunction, VirtualCharacter};
use crate::error::{Error, Result};
use crate::stgroup::{class_power, embed, embeds, haar_density, ClassPoint, StGroup};

/// Nodes per dimension.
pub const QUAD_NODES: usize = 512;
/// Coefficients this close to an integer are snapped to it.
pub const ROUND_TOL: f64 = 1e-6;
/// Largest acceptable squared residual of a numeric decomposition.
pub const RESIDUAL_LIMIT: f64 = 1e-4;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Haar quadrature rule for one group.
///
/// Genus-1 rules are a list of weighted class points (`U1` integrates over the full
/// circle with signed angles; the `NU1` sigma atom is one extra point). Genus-2
/// rules are a tensor grid on `[0, pi]^2`.
pub struct Quadrature {
    group: StGroup,
    points: Vec<ClassPoint>,
    weights: Vec<f64>,
    theta: Vec<f64>,
    /// Row-major `N x N` Haar weights of the genus-2 grid.
    grid_w: Vec<f64>,
}

impl Quadrature {
    fn build(group: StGroup) -> Self {
        let (t, w) = gauss_legendre(QUAD_NODES);
        let half = PI / 2.0;
        let theta: Vec<f64> = t.iter().map(|&t| half * (t + 1.0)).collect();
        let wt: Vec<f64> = w.iter().map(|&w| half * w).collect();
        let mut q = Self {
            group,
            points: Vec::new(),
            weights: Vec::new(),
            theta: theta.clone(),
            grid_w: Vec::new(),
        };
        match group {
            StGroup::U1 => {
                for (&t, &w) in t.iter().zip(&w) {
                    q.points.push(ClassPoint::g1(group, PI * t));
                    q.weights.push(PI * w / (2.0 * PI));
                }
            }
            StGroup::NU1 | StGroup::SU2 => {
                for (&t, &w) in theta.iter().zip(&wt) {
                    let p = ClassPoint::g1(group, t);
                    q.weights.push(w * haar_density(&p));
                    q.points.push(p);
                }
                if group == StGroup::NU1 {
                    q.points.push(ClassPoint::sigma());
                    q.weights.push(0.5);
                }
            }
            StGroup::SU2xSU2 | StGroup::USp4 => {
                let n = QUAD_NODES;
                q.grid_w = vec![0.0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        let p = ClassPoint::g2(group, theta[a], theta[b]);
                        q.grid_w[a * n + b] = wt[a] * wt[b] * haar_density(&p);
                    }
                }
            }
        }
        q
    }

    pub fn group(&self) -> StGroup {
        self.group
    }

    fn is_grid(&self) -> bool {
        self.group.genus() == 2
    }

    fn grid_point(&self, a: usize, b: usize) -> ClassPoint {
        // keep factor order so that SU2xSU2 functions see (alpha, beta) as given
        ClassPoint::g2(self.group, self.theta[a], self.theta[b])
    }

    /// Values of `f` at every node, row-major for genus-2 grids.
    pub fn values<F: ClassFunction + ?Sized>(&self, f: &F) -> Vec<Complex64> {
        if self.is_grid() {
            let n = QUAD_NODES;
            (0..n)
                .into_par_iter()
                .flat_map_iter(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| f.eval(&self.grid_point(a, b)))
                .collect()
        } else {
            self.points.iter().map(|p| f.eval(p)).collect()
        }
    }

    fn weight_slice(&self) -> &[f64] {
        if self.is_grid() {
            &self.grid_w
        } else {
            &self.weights
        }
    }

    /// `sum w_k v_k` with a fixed reduction order.
    fn weighted_sum(&self, v: &[Complex64]) -> Complex64 {
        let w = self.weight_slice();
        let rows: Vec<Complex64> = w
            .par_chunks(QUAD_NODES)
            .zip(v.par_chunks(QUAD_NODES))
            .map(|(wr, vr)| wr.iter().zip(vr).map(|(w, v)| v * *w).sum())
            .collect();
        rows.iter().sum()
    }

    /// `int f dmu`.
    pub fn integrate<F: ClassFunction + ?Sized>(&self, f: &F) -> Complex64 {
        self.weighted_sum(&self.values(f))
    }

    /// `<f, g> = int f conj(g) dmu`.
    pub fn inner<F: ClassFunction + ?Sized, G: ClassFunction + ?Sized>(
        &self,
        f: &F,
        g: &G,
    ) -> Complex64 {
        let fv = self.values(f);
        let gv = self.values(g);
        let prod: Vec<Complex64> = fv.iter().zip(&gv).map(|(a, b)| a * b.conj()).collect();
        self.weighted_sum(&prod)
    }

    /// All inner products `<f_i, f_j>`, evaluating each function once.
    pub fn gram<F: ClassFunction>(&self, fs: &[F]) -> Vec<Vec<Complex64>> {
        let vals: Vec<Vec<Complex64>> = fs.iter().map(|f| self.values(f)).collect();
        vals.iter()
            .map(|a| {
                vals.iter()
                    .map(|b| {
                        let prod: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y.conj()).collect();
                        self.weighted_sum(&prod)
                    })
                    .collect()
            })
            .collect()
    }

    /// Sum of all weights; `1` up to rounding when the density is normalized.
    pub fn total_mass(&self) -> f64 {
        self.weight_slice().iter().sum()
    }
}

/// Cached quadrature rule for `group`.
pub fn quadrature(group: StGroup) -> &'static Quadrature {
    static RULES: [OnceLock<Quadrature>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let i = StGroup::ALL.iter().position(|&g| g == group).expect("known group");
    RULES[i].get_or_init(|| Quadrature::build(group))
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= ROUND_TOL {
        r
    } else {
        v
    }
}

fn snap_c(c: Complex64) -> Complex64 {
    Complex64::new(snap(c.re), snap(c.im))
}

/// Result of [`decompose_numeric`].
#[derive(Debug, Clone)]
pub struct NumericDecomposition {
    pub group: StGroup,
    /// Nonzero coefficients after integer snapping.
    pub coeffs: BTreeMap<CharLabel, Complex64>,
    /// Quadrature value of `||f - sum c_chi chi||^2`.
    pub residual: f64,
    /// Whether every coefficient snapped to an integer (in both parts).
    pub integral: bool,
}

impl NumericDecomposition {
    pub fn coeff(&self, label: CharLabel) -> Complex64 {
        self.coeffs.get(&label).copied().unwrap_or_default()
    }

    /// Integer coefficients, if all of them are integral and real.
    pub fn integer_coeffs(&self) -> Option<BTreeMap<CharLabel, i128>> {
        if !self.integral {
            return None;
        }
        self.coeffs
            .iter()
            .map(|(l, c)| (c.im == 0.0).then_some((*l, c.re as i128)))
            .collect()
    }

    pub fn to_vchar(&self) -> VirtualCharacter {
        VirtualCharacter::from_terms(self.group, self.coeffs.iter().map(|(l, c)| (*l, *c)))
            .expect("labels belong to the group")
    }
}

/// Haar inner products `<f, chi>` for all labels with indices `<= max`, snapped to
/// integers within [`ROUND_TOL`], together with the residual of the reconstruction.
pub fn decompose_numeric<F: ClassFunction + ?Sized>(
    f: &F,
    max: u32,
) -> Result<NumericDecomposition> {
    let group = f.group();
    let q = quadrature(group);
    let fv = q.values(f);
    let labels = CharLabel::enumerate(group, max);
    let (raw, recon): (Vec<Complex64>, Box<dyn Fn(&[Complex64]) -> Vec<Complex64>>) =
        if q.is_grid() {
            grid_moments(q, &fv, &labels, max as usize)
        } else {
            let raw = labels
                .iter()
                .map(|&l| {
                    q.points
                        .iter()
                        .zip(&q.weights)
                        .zip(&fv)
                        .map(|((p, w), v)| v * eval_char_unchecked(l, p).conj() * *w)
                        .sum()
                })
                .collect();
            let labels = labels.clone();
            let recon = Box::new(move |c: &[Complex64]| -> Vec<Complex64> {
                q.points
                    .iter()
                    .map(|p| labels.iter().zip(c).map(|(l, c)| c * eval_char_unchecked(*l, p)).sum())
                    .collect()
            });
            (raw, recon)
        };
    let snapped: Vec<Complex64> = raw.iter().map(|&c| snap_c(c)).collect();
    let integral = snapped.iter().all(|c| c.re.fract() == 0.0 && c.im.fract() == 0.0);
    let g = recon(&snapped);
    let diff: Vec<Complex64> = fv
        .iter()
        .zip(&g)
        .map(|(a, b)| Complex64::new((a - b).norm_sqr(), 0.0))
        .collect();
    let residual = q.weighted_sum(&diff).re;
    if residual > RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    let coeffs = labels
        .into_iter()
        .zip(snapped)
        .filter(|(_, c)| c.norm() > 0.0)
        .collect();
    Ok(NumericDecomposition {
        group,
        coeffs,
        residual,
        integral,
    })
}

type Recon<'a> = Box<dyn Fn(&[Complex64]) -> Vec<Complex64> + 'a>;

/// Moments `M_ij = sum_ab W_ab f_ab S_i(x_a) S_j(y_b)` on the tensor grid, mapped to
/// label coefficients through each character's `S`-basis expansion.
fn grid_moments<'a>(
    q: &'a Quadrature,
    fv: &[Complex64],
    labels: &[CharLabel],
    max: usize,
) -> (Vec<Complex64>, Recon<'a>) {
    let n = QUAD_NODES;
    let m = max + 1;
    let s: Vec<Vec<f64>> = q.theta.iter().map(|t| s_values(2.0 * t.cos(), max)).collect();
    // t[a][j] = sum_b W_ab f_ab S_j(y_b)
    let t: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![Complex64::new(0.0, 0.0); m];
            for b in 0..n {
                let v = fv[a * n + b] * q.grid_w[a * n + b];
                for (j, r) in row.iter_mut().enumerate() {
                    *r += v * s[b][j];
                }
            }
            row
        })
        .collect();
    let mut mom = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for a in 0..n {
        for (i, mrow) in mom.iter_mut().enumerate() {
            let si = s[a][i];
            for (j, v) in mrow.iter_mut().enumerate() {
                *v += t[a][j] * si;
            }
        }
    }
    let expansions: Vec<Vec<(usize, usize, f64)>> = labels
        .iter()
        .map(|&l| match l {
            CharLabel::SU2xSU2(i, j) => vec![(i as usize, j as usize, 1.0)],
            _ => char_s_basis(l)
                .terms
                .iter()
                .map(|&(i, j, v)| (i, j, v as f64))
                .collect(),
        })
        .collect();
    let raw = expansions
        .iter()
        .map(|e| e.iter().map(|&(i, j, v)| mom[i][j] * v).sum())
        .collect();
    let recon = Box::new(move |c: &[Complex64]| -> Vec<Complex64> {
        let mut gm = vec![vec![Complex64::new(0.0, 0.0); m]; m];
        for (e, c) in expansions.iter().zip(c) {
            for &(i, j, v) in e {
                gm[i][j] += c * v;
            }
        }
        // h[b][i] = sum_j G_ij S_j(y_b)
        let h: Vec<Vec<Complex64>> = (0..n)
            .map(|b| {
                (0..m)
                    .map(|i| (0..m).map(|j| gm[i][j] * s[b][j]).sum())
                    .collect()
            })
            .collect();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let (h, s) = (&h, &s);
                (0..n).map(move |b| (0..m).map(|i| h[b][i] * s[a][i]).sum())
            })
            .collect()
    });
    (raw, recon)
}

/// `delta(f)`: the multiplicity of the trivial character, snapped within [`ROUND_TOL`].
pub fn trivial_multiplicity<F: ClassFunction + ?Sized>(f: &F) -> Complex64 {
    snap_c(quadrature(f.group()).integrate(f))
}

/// `u_chi = int chi(g^2) dmu` by quadrature.
pub fn fs_index_numeric(label: CharLabel) -> f64 {
    let q = quadrature(label.group());
    let sq = SquaredArg(label);
    q.integrate(&sq).re
}

struct SquaredArg(CharLabel);

impl ClassFunction for SquaredArg {
    fn group(&self) -> StGroup {
        self.0.group()
    }
    fn eval(&self, p: &ClassPoint) -> Complex64 {
        eval_char_unchecked(self.0, &class_power(p, 2))
    }
}

/// Frobenius–Schur index. Standard labels use the closed table
/// (`nu_m`: 1 iff `m = 0`; `chi_n`: `(-1)^n`; `chi_{m,n}`: `(-1)^{m+n}`); the rest
/// come from [`fs_index_numeric`].
pub fn fs_index(label: CharLabel) -> i8 {
    let parity = |k: u32| if k % 2 == 0 { 1 } else { -1 };
    match label {
        CharLabel::U1(m) => i8::from(m == 0),
        CharLabel::SU2(n) => parity(n),
        CharLabel::USp4(m, n) => parity(m + n),
        other => fs_index_numeric(other).round() as i8,
    }
}

/// `f` viewed on a subgroup through [`embed`].
pub struct Restricted<F> {
    f: F,
    sub: StGroup,
}

impl<F: ClassFunction> Restricted<F> {
    pub fn new(f: F, sub: StGroup) -> Result<Self> {
        if !embeds(sub, f.group()) {
            return Err(Error::InvalidInput(format!(
                "{sub} does not embed in {}",
                f.group()
            )));
        }
        Ok(Self { f, sub })
    }
}

impl<F: ClassFunction> ClassFunction for Restricted<F> {
    fn group(&self) -> StGroup {
        self.sub
    }
    fn eval(&self, p: &ClassPoint) -> Complex64 {
        let target = self.f.group();
        self.f.eval(&embed(p, target).expect("embedding checked at construction"))
    }
}

/// Decomposition of `f|_sub` into irreducibles of `sub` with indices `<= max`.
pub fn restrict<F: ClassFunction>(f: F, sub: StGroup, max: u32) -> Result<NumericDecomposition> {
    decompose_numeric(&Restricted::new(f, sub)?, max)
}

/// `f - delta(f)`, the function with its trivial part removed.
pub struct Tilde<F> {
    f: F,
    delta: Complex64,
}

impl<F: ClassFunction> Tilde<F> {
    pub fn new(f: F) -> Self {
        let delta = trivial_multiplicity(&f);
        Self { f, delta }
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn inner(&self) -> &F {
        &self.f
    }
}

impl<F: ClassFunction> ClassFunction for Tilde<F> {
    fn group(&self) -> StGroup {
        self.f.group()
    }
    fn eval(&self, p: &ClassPoint) -> Complex64 {
        self.f.eval(p) - self.delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::exact::ExactFn;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact through degree 13
        let m12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((m12 - 2.0 / 13.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(QUAD_NODES);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn masses() {
        for g in StGroup::ALL {
            assert!((quadrature(g).total_mass() - 1.0).abs() < 1e-8, "{g}");
        }
    }

    #[test]
    fn su2_moment() {
        let f = ExactFn::a1(StGroup::SU2).pow(4);
        let d = decompose_numeric(&f, 6).unwrap();
        assert_eq!(d.coeff(CharLabel::SU2(4)).re, 1.0);
        assert_eq!(d.coeff(CharLabel::SU2(2)).re, 3.0);
        assert_eq!(d.coeff(CharLabel::SU2(0)).re, 2.0);
        assert!(d.residual < 1e-10);
    }

    #[test]
    fn residual_failure() {
        let f = ExactFn::a1(StGroup::SU2).pow(8);
        assert!(matches!(
            decompose_numeric(&f, 3),
            Err(Error::ResidualTooLarge { .. })
        ));
    }

    #[test]
    fn fs_examples() {
        assert_eq!(fs_index(CharLabel::SU2(1)), -1);
        assert_eq!(fs_index(CharLabel::U1(3)), 0);
        assert!((fs_index_numeric(CharLabel::SU2(2)) - 1.0).abs() < 1e-8);
        assert!(fs_index_numeric(CharLabel::U1(1)).abs() < 1e-8);
        assert_eq!(fs_index(CharLabel::NU1Rho(3)), -1);
        assert_eq!(fs_index(CharLabel::NU1Sign), 1);
    }
}
