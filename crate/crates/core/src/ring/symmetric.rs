use super::domain::CoefficientRing;
use super::poly::SparsePoly;
use super::truncation::TruncationPolicy;
use crate::error::{structural, Result};

/// All elementary symmetric polynomials `[σ_0, σ_1, …, σ_m]` of `values`,
/// read off from the expansion of `∏ (1 + z·v_j)` one factor at a time.
pub fn elementary_symmetric_all<R: CoefficientRing>(
    values: &[SparsePoly<R>],
    t: &TruncationPolicy,
) -> Result<Vec<SparsePoly<R>>> {
    let first = values
        .first()
        .ok_or_else(|| structural("elementary symmetric polynomials of an empty list"))?;
    let zero = SparsePoly::zero(first.vars().clone(), first.ring().clone());
    let mut sigma = vec![SparsePoly::one(first.vars().clone(), first.ring().clone()).truncate(t)];
    for v in values {
        v.same_space(first)?;
        sigma.push(zero.clone());
        // multiply the running generating function by (1 + z·v)
        for k in (1..sigma.len()).rev() {
            let shifted = sigma[k - 1].mul(v, t)?;
            sigma[k] = sigma[k].add(&shifted)?;
        }
    }
    Ok(sigma)
}

/// σ_i of the given polynomials, `1 ≤ i ≤ values.len()`.
pub fn elementary_symmetric<R: CoefficientRing>(
    i: usize,
    values: &[SparsePoly<R>],
    t: &TruncationPolicy,
) -> Result<SparsePoly<R>> {
    if i == 0 || i > values.len() {
        return Err(structural(format!(
            "σ_{i} requested for {} values",
            values.len()
        )));
    }
    let mut all = elementary_symmetric_all(values, t)?;
    Ok(all.swap_remove(i))
}
