//! Sign conventions in force across the crate. Reports print these so that
//! every number they contain can be interpreted.

use serde_json::{json, Value};

/// Relates connection degrees to label shifts: a connection on the module of a
/// tuple `(l_1..l_n; l_inf)` has degree `DEGREE_SIGN * (alpha_inf - sum alpha_i)`.
///
/// Function degrees use total degree (`f(lz) = l^k f` has degree `k`). Parallel
/// sections of a degree-`k` connection are homogeneous of degree `-k`, which is
/// where the analytic convention "degree of f is -k" enters.
pub const DEGREE_SIGN: i64 = -1;

/// Orientation of the curl part: `C_ij = d_i E_j - d_j E_i` for `i < j`.
pub const CURL_ORIENTATION: &str = "C_ij = d_i E_j - d_j E_i (i < j)";

/// Parallel transport solves `Y' = TRANSPORT_SIGN * (sum_i E_i(z) z_i') Y`.
/// Monodromy eigenvalues around a simple pole with residue `R` are `exp(TRANSPORT_SIGN * 2 pi i sigma)`.
pub const TRANSPORT_SIGN: f64 = -1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatnessConvention {
    /// `d_j E_i - d_i E_j = -1/2 [E_i, E_j]`, i.e. `C_ij - 1/2 B_ij = 0`.
    Paper,
    /// `C_ij + B_ij = 0`, the curvature of `d + E` with `E` acting on column vectors.
    Standard,
}

impl FlatnessConvention {
    pub fn name(self) -> &'static str {
        match self {
            FlatnessConvention::Paper => "paper",
            FlatnessConvention::Standard => "standard",
        }
    }
}

pub fn conventions_json() -> Value {
    json!({
        "grading": "total degree; connection degree = DEGREE_SIGN * (alpha_inf - sum alpha_i)",
        "degree_sign": DEGREE_SIGN,
        "curl": CURL_ORIENTATION,
        "flatness_paper": "C_ij - 1/2 [E_i,E_j] = 0",
        "flatness_standard": "C_ij + [E_i,E_j] = 0",
        "transport_sign": TRANSPORT_SIGN,
        "kz_differential": "dz_l (outer summation index)",
        "indices": "0-based in files, z1..zn in printed formulas",
    })
}
