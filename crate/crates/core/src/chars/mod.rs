//! Characters of the supported groups: exact evaluation, the moment and power-sum
//! families, exact and numeric decomposition, Frobenius–Schur indices.

pub mod exact;
pub mod families;
pub mod label;
pub mod poly;
pub mod quad;
pub mod vchar;

use num_complex::Complex64;

pub use exact::{ExactFn, Laurent};
pub use families::{
    a1_power_closed, moment_char, power_sum_char, power_sum_closed, FamilyKind, TrigFamily,
};
pub use label::CharLabel;
pub use poly::{p_poly, s_poly, s_values, SBasis, SymPoly};
pub use quad::{
    decompose_numeric, fs_index, fs_index_numeric, gauss_legendre, quadrature, restrict,
    trivial_multiplicity, NumericDecomposition, Quadrature, Restricted, Tilde, QUAD_NODES,
    RESIDUAL_LIMIT, ROUND_TOL,
};
pub use vchar::{char_poly, eval_char, ClassFunction, FnClass, VirtualCharacter};

use crate::error::{Error, Result};

/// One irreducible constituent with the data the bound formulas need.
#[derive(Debug, Clone, PartialEq)]
pub struct Constituent {
    pub label: CharLabel,
    pub coeff: Complex64,
    pub degree: u64,
    pub weight: u32,
}

/// `R_phi` (number of constituents) and `C_phi = sum |c_chi|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RcStats {
    pub r: usize,
    pub c: f64,
    pub constituents: Vec<Constituent>,
}

/// Constituent statistics of a virtual character without trivial part.
pub fn rc_stats(v: &VirtualCharacter) -> Result<RcStats> {
    let t = v.trivial_coeff();
    if t.norm() > 1e-12 {
        return Err(Error::TrivialPresent {
            coeff: format!("{t}"),
        });
    }
    let constituents: Vec<Constituent> = v
        .terms()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(label, coeff)| Constituent {
            label,
            coeff,
            degree: label.degree(),
            weight: label.weight(),
        })
        .collect();
    Ok(RcStats {
        r: constituents.len(),
        c: constituents.iter().map(|c| c.coeff.norm_sqr()).sum(),
        constituents,
    })
}
