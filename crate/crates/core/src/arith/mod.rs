//! Frobenius data: primes, reduction checks, point counting, base change and ingestion.

mod basechange;
mod count;
mod curve;
mod ingest;
mod lpoly;
mod sieve;

pub use basechange::{base_change_factor, base_change_series, kronecker, quadratic_base_change, splitting, Splitting};
pub use count::{ec_trace, g2_lpoly, lpolys, lpolys_many, LegendreTable, G2_DEFAULT_CAP};
pub use curve::{good_reduction, parse_curve_lines, read_curve_file, CurveKind, CurveModel};
pub use ingest::{ingest_lpoly_file, ingest_lpoly_reader, write_lpoly_csv};
pub use lpoly::{functional_reverse, Coeffs, LPolynomial, NormedEulerFactor, ANGLE_TOL};
pub use sieve::{is_prime, sieve_primes};
