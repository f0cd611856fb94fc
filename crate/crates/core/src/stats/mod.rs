//! Empirical statistics of a class function along a stream of Frobenius classes:
//! `delta(phi, x)`, `I(phi, X)`, `psi(phi, x)` and the bias mean.
//!
//! Every quantity is a step function of `x` with jumps at prime norms, so the
//! integrals are evaluated segment by segment in closed form.

mod output;

pub use output::{checkpoints, log_checkpoints, svg_plot, write_delta_csv, DeltaColumns, Series2d};

use num_complex::Complex64;

use crate::arith::NormedEulerFactor;
use crate::chars::{ClassFunction, Tilde};
use crate::error::{Error, Result};
use crate::stgroup::{normalize, ClassPoint, StGroup};

/// Lower limit of the `x`-integrals.
pub const X_START: f64 = 2.0;

/// Cumulative sums of `phi(y_p)` at each distinct norm.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatSeries {
    norms: Vec<u64>,
    sums: Vec<Complex64>,
    counts: Vec<u64>,
    pub curve: String,
    pub character: String,
}

impl StatSeries {
    /// Builds the series from `(norm, value)` pairs sorted by norm; equal norms
    /// are merged into one jump.
    pub fn from_values<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut s = Self::default();
        let mut total = Complex64::new(0.0, 0.0);
        let mut count = 0u64;
        for (norm, v) in values {
            if let Some(&last) = s.norms.last() {
                if norm < last {
                    return Err(Error::Order { prev: last, next: norm });
                }
            }
            total += v;
            count += 1;
            if s.norms.last() == Some(&norm) {
                *s.sums.last_mut().expect("nonempty") = total;
                *s.counts.last_mut().expect("nonempty") = count;
            } else {
                s.norms.push(norm);
                s.sums.push(total);
                s.counts.push(count);
            }
        }
        Ok(s)
    }

    pub fn with_labels(mut self, curve: impl Into<String>, character: impl Into<String>) -> Self {
        self.curve = curve.into();
        self.character = character.into();
        self
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn norms(&self) -> &[u64] {
        &self.norms
    }

    pub fn sums(&self) -> &[Complex64] {
        &self.sums
    }

    /// `pi` at each entry (number of primes, not of norms).
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn first_norm(&self) -> Result<u64> {
        self.norms.first().copied().ok_or(Error::EmptySeries)
    }

    pub fn last_norm(&self) -> Result<u64> {
        self.norms.last().copied().ok_or(Error::EmptySeries)
    }

    /// Index of the last entry with norm `<= x`.
    fn index_at(&self, x: f64) -> Option<usize> {
        let k = self.norms.partition_point(|&n| n as f64 <= x);
        k.checked_sub(1)
    }

    /// `(S(x), pi(x))`.
    pub fn cumulative(&self, x: f64) -> Result<(Complex64, u64)> {
        if self.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(self
            .index_at(x)
            .map_or((Complex64::new(0.0, 0.0), 0), |k| (self.sums[k], self.counts[k])))
    }

    /// `delta` on the segment starting at entry `k`.
    fn delta_k(&self, k: usize) -> Complex64 {
        self.sums[k] / self.counts[k] as f64
    }

    /// Step segments `[a, b)` of `[2, x_end)` with the entry index in force
    /// (`None` before the first norm).
    fn segments(&self, x_end: f64) -> Vec<(f64, f64, Option<usize>)> {
        let mut out = Vec::new();
        let mut a = X_START;
        let mut cur: Option<usize> = None;
        for (k, &n) in self.norms.iter().enumerate() {
            let n = n as f64;
            if n >= x_end {
                break;
            }
            if n > a {
                out.push((a, n, cur));
                a = n;
            }
            cur = Some(k);
        }
        if x_end > a {
            out.push((a, x_end, cur));
        }
        out
    }
}

/// Evaluates `phi` along a norm-sorted stream of class points.
pub fn build_series<I, F>(stream: I, phi: &F) -> Result<StatSeries>
where
    I: IntoIterator<Item = (u64, ClassPoint)>,
    F: ClassFunction + ?Sized,
{
    StatSeries::from_values(stream.into_iter().map(|(n, p)| (n, phi.eval(&p))))
}

/// Class points of a norm-sorted list of Euler factors.
pub fn class_stream(factors: &[NormedEulerFactor], group: StGroup) -> Result<Vec<(u64, ClassPoint)>> {
    factors
        .iter()
        .map(|f| Ok((f.norm, normalize(f, group)?)))
        .collect()
}

/// `delta(phi, x) = S(x) / pi(x)`, taken to be `0` before the first norm.
pub fn delta(series: &StatSeries, x: f64) -> Result<Complex64> {
    let (s, n) = series.cumulative(x)?;
    Ok(if n == 0 { s } else { s / n as f64 })
}

fn check_upper(x: f64) -> Result<()> {
    if x.is_finite() && x > X_START {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("upper limit {x} must exceed {X_START}")))
    }
}

/// `I(phi, X) = (1/log X) int_2^X |delta(phi, x)|^2 dx`, exactly for the step function.
pub fn i_norm(series: &StatSeries, x_max: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    check_upper(x_max)?;
    let integral: f64 = series
        .segments(x_max)
        .into_iter()
        .filter_map(|(a, b, k)| k.map(|k| series.delta_k(k).norm_sqr() * (b - a)))
        .sum();
    Ok(integral / x_max.ln())
}

/// `psi(phi, x) = (log x / sqrt x) S(x)`.
pub fn psi_value(series: &StatSeries, x: f64) -> Result<Complex64> {
    let (s, _) = series.cumulative(x)?;
    Ok(s * (x.ln() / x.sqrt()))
}

/// Antiderivative of `log(x) x^{-3/2}`.
fn bias_antiderivative(x: f64) -> f64 {
    -2.0 * (x.ln() + 2.0) / x.sqrt()
}

/// `(1/log X) int_2^X psi(phi, x) dx / x`, exactly for the step function `S`.
pub fn bias_mean(series: &StatSeries, x_max: f64) -> Result<Complex64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    check_upper(x_max)?;
    let integral: Complex64 = series
        .segments(x_max)
        .into_iter()
        .filter_map(|(a, b, k)| {
            k.map(|k| series.sums[k] * (bias_antiderivative(b) - bias_antiderivative(a)))
        })
        .sum();
    Ok(integral / x_max.ln())
}

/// `phi - delta(phi)`: `phi` with its trivial constituent removed.
pub fn tilde_char<F: ClassFunction>(phi: F) -> Tilde<F> {
    Tilde::new(phi)
}
