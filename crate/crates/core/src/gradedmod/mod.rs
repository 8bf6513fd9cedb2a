//! Graded free complexes over `k[x_1..x_n]` with a positive grading, and the
//! grade-restriction window for the single unstable stratum at the origin.

mod complex;
mod format;
mod koszul;
mod lift;
mod minimize;
mod poly;

pub use complex::{
    column, cone_of_chain_map, is_supported_at_origin, restrict_to_fixed, window_test_complex, ChainMap,
    GradedFreeComplex, WeightProfile, WindowTest,
};
pub use format::{complex_from_json, complex_to_json, parse_complex};
pub use koszul::{koszul_complex, koszul_skyscraper};
pub use lift::{find_isomorphism, window_lift, window_lift_ordered, LiftOrder, WindowLift};
pub use minimize::{minimize, minimize_with_maps, Minimization};
pub use poly::{Exponent, Poly, PolyMatrix, WeightedRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("differential in degree {degree} is not homogeneous at entry ({row}, {col})")]
    NotHomogeneous { degree: i32, row: usize, col: usize },
    #[error("d∘d is nonzero starting in degree {0}")]
    NotComplex(i32),
    #[error("map does not commute with the differentials in degree {0}")]
    InvalidChainMap(i32),
    #[error("complexes live over different rings")]
    RingMismatch,
    #[error("window lift did not finish within {0} steps")]
    IterationBound(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

/// Dimensions of `Hom(O(a), O(b))` on the quotient stack `A^n/G_m` (the
/// equivariant side) and on the projective quotient (closed form, equal
/// variable weights only). The twist difference is `b − a`.
pub fn quantization_hom_dims(ring: &WeightedRing, a: i64, b: i64) -> Result<(u128, u128), GradedError> {
    let c = ring.weights()[0];
    if ring.weights().iter().any(|&x| x != c) {
        return Err(GradedError::Unsupported("the closed form needs equal variable weights".into()));
    }
    let d = b.checked_sub(a).ok_or_else(|| GradedError::Unsupported("twist difference overflows".into()))?;
    let equivariant = count_monomials(ring.weights(), d)?;
    let n = ring.n() as u128;
    let quotient = if d < 0 || d % c != 0 {
        0
    } else {
        binomial((d / c) as u128 + n - 1, n - 1)?
    };
    Ok((equivariant, quotient))
}

/// Number of exponents of the given weighted degree.
fn count_monomials(weights: &[i64], degree: i64) -> Result<u128, GradedError> {
    if degree < 0 {
        return Ok(0);
    }
    let size = usize::try_from(degree).map_err(|_| GradedError::Unsupported("degree too large".into()))? + 1;
    let mut ways = vec![0u128; size];
    ways[0] = 1;
    for &c in weights {
        let c = c as usize;
        for m in c..size {
            ways[m] = ways[m]
                .checked_add(ways[m - c])
                .ok_or_else(|| GradedError::Unsupported("dimension overflows".into()))?;
        }
    }
    Ok(ways[size - 1])
}

fn binomial(n: u128, k: u128) -> Result<u128, GradedError> {
    let mut out: u128 = 1;
    for i in 0..k {
        out = out
            .checked_mul(n - i)
            .ok_or_else(|| GradedError::Unsupported("dimension overflows".into()))?
            / (i + 1);
    }
    Ok(out)
}
