//! Integral Witt symmetric polynomials in two variables.
//!
//! `w_0, w_1, …` are the integer polynomials determined by
//! `x^(p^n) + y^(p^n) = Σ_{j≤n} p^j · w_j^(p^(n-j))`. Each is symmetric,
//! homogeneous of degree `p^j`, and for `j > 0` vanishes on both axes.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Zero};

use crate::error::{FglError, Result};
use crate::ring::{vars, Integers, PrimeField, SparsePoly, TruncationPolicy, Vars};

pub const DEFAULT_MAX_WITT_DEGREE: u64 = 1_000_000;

fn xy() -> Vars {
    vars(&["x", "y"])
}

#[derive(Debug, Clone, PartialEq)]
pub struct WittFamily {
    p: u64,
    polys: Vec<SparsePoly<Integers>>,
}

impl WittFamily {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn jmax(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[SparsePoly<Integers>] {
        &self.polys
    }

    pub fn get(&self, j: usize) -> Option<&SparsePoly<Integers>> {
        self.polys.get(j)
    }

    /// Re-checks the defining identity for every `n ≤ jmax`; returns the first
    /// `n` where it fails.
    pub fn certify(&self) -> std::result::Result<(), usize> {
        let none = TruncationPolicy::none();
        for n in 0..=self.jmax() {
            let pn = self.p.pow(n as u32);
            let mut lhs = SparsePoly::zero(xy(), Integers);
            for (j, w) in self.polys[..=n].iter().enumerate() {
                let scale = BigInt::from(self.p).pow(j as u32);
                let term = w.pow(self.p.pow((n - j) as u32), &none).scale(&scale);
                lhs = lhs.add(&term).expect("same space");
            }
            if lhs != power_sum(pn as u32) {
                return Err(n);
            }
        }
        Ok(())
    }
}

fn power_sum(e: u32) -> SparsePoly<Integers> {
    let one = BigInt::one();
    SparsePoly::from_terms(
        xy(),
        Integers,
        [(vec![e, 0], one.clone()), (vec![0, e], one)],
    )
    .expect("two variables")
}

/// Solves the defining identity for `w_0 … w_jmax` over the integers.
pub fn witt_family(p: u64, jmax: usize) -> Result<WittFamily> {
    witt_family_with_limit(p, jmax, DEFAULT_MAX_WITT_DEGREE)
}

/// As [`witt_family`], refusing any `p^jmax` above `max_degree`.
pub fn witt_family_with_limit(p: u64, jmax: usize, max_degree: u64) -> Result<WittFamily> {
    PrimeField::new(p)?;
    let top = (p as u128).checked_pow(jmax as u32).unwrap_or(u128::MAX);
    if top > max_degree as u128 {
        return Err(FglError::Resource {
            what: format!("Witt polynomial w_{jmax} at p = {p}"),
            projected: top,
            limit: max_degree as u128,
        });
    }
    let none = TruncationPolicy::none();
    let pb = BigInt::from(p);
    let mut polys: Vec<SparsePoly<Integers>> = Vec::with_capacity(jmax + 1);
    for n in 0..=jmax {
        let mut rest = power_sum(p.pow(n as u32) as u32);
        for (j, w) in polys.iter().enumerate() {
            let scale = pb.clone().pow(j as u32);
            let term = w.pow(p.pow((n - j) as u32), &none).scale(&scale);
            rest = rest.sub(&term)?;
        }
        let divisor = pb.clone().pow(n as u32);
        let mut terms = Vec::with_capacity(rest.len());
        for (m, c) in rest.terms() {
            let (q, r) = c.div_rem(&divisor);
            if !r.is_zero() {
                return Err(FglError::InternalConsistency(format!(
                    "coefficient {c} of w_{n} is not divisible by {divisor}"
                )));
            }
            terms.push((m.exponents().to_vec(), q));
        }
        polys.push(SparsePoly::from_terms(xy(), Integers, terms)?);
    }
    Ok(WittFamily { p, polys })
}

/// Coefficientwise reduction of every `w_j` into F_p.
pub fn witt_mod_p(family: &WittFamily) -> Vec<SparsePoly<PrimeField>> {
    let fp = PrimeField::new(family.p).expect("family prime already validated");
    family
        .polys
        .iter()
        .map(|w| w.map_domain(&fp).expect("integer reduction cannot fail"))
        .collect()
}

/// `w_1 = -Σ_{0<j<p} p^{-1} C(p, j) x^j y^(p-j)`, used only as a cross-check.
pub fn w1_closed_form(p: u64) -> SparsePoly<Integers> {
    let pb = BigInt::from(p);
    let terms = (1..p).map(|j| {
        let c = binomial(pb.clone(), BigInt::from(j)) / &pb;
        (vec![j as u32, (p - j) as u32], -c)
    });
    SparsePoly::from_terms(xy(), Integers, terms).expect("two variables")
}
