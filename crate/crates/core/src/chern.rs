//! Chern class relations from the formal group law and the splitting
//! principle: with `m = p^k` formal roots `x_1 … x_m` and `u = c_1(θ)`,
//! `u^(p^(ks)) = 0`,
//!
//! ```text
//! relation_i = σ_i(F(x_1, u), …, F(x_m, u)) - σ_i(x_1, …, x_m)
//! ```
//!
//! in `F_p[x_1, …, x_m][u]/u^(p^(ks))`. Completeness of the resulting ideal
//! is not decided here.

use crate::engine::{p_series, EngineLimits, FglParams, FglTower, TruncatedFgl};
use crate::error::{FglError, Result};
use crate::ring::{elementary_symmetric_all, vars, PrimeField, SparsePoly, TruncationPolicy, Vars};

pub const DEFAULT_MAX_CHERN_TERMS: u128 = 10_000_000;

/// `F_p[u]/u^(p^(ks))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedCoeffRing {
    pub params: FglParams,
    pub k: u32,
}

impl TruncatedCoeffRing {
    pub fn new(params: FglParams, k: u32) -> Result<Self> {
        u_cap(params, k)?;
        Ok(TruncatedCoeffRing { params, k })
    }

    /// `p^(ks)`; every element has u-exponents below it.
    pub fn nilpotence(&self) -> u64 {
        u_cap(self.params, self.k).expect("checked at construction")
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::none().with_cap("u", self.nilpotence())
    }
}

fn u_cap(params: FglParams, k: u32) -> Result<u64> {
    k.checked_mul(params.s())
        .and_then(|e| params.p().checked_pow(e))
        .filter(|&v| v <= u32::MAX as u64)
        .ok_or_else(|| FglError::InvalidParameter(format!("p^(ks) too large for k = {k}")))
}

/// Smallest `n` with `q^n ≥ p^(ks)`: the level at which `P_n` determines
/// `F(x_j, u)` completely once `u^(p^(ks)) = 0`.
pub fn required_level(params: FglParams, k: u32) -> Result<u32> {
    let target = u_cap(params, k)?;
    let q = params.q();
    let mut n = 1u32;
    let mut qn = q;
    while qn < target {
        n += 1;
        qn = qn.saturating_mul(q);
    }
    Ok(n)
}

/// Outcome of checking `[p^k](u) = u^(p^(ks))` below the validity bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotenceCertificate {
    pub k: u32,
    pub exponent: u64,
    pub validity_bound: u64,
    pub series: SparsePoly<PrimeField>,
    pub passed: bool,
}

/// Computes `[p^k](u)` from the given level and compares it with
/// `u^(p^(ks))`. Needs `q^n > p^(ks)`; otherwise the comparison would be
/// empty and a [`FglError::Vacuity`] is returned.
pub fn pk_nilpotence(
    params: FglParams,
    k: u32,
    level: &TruncatedFgl,
) -> Result<NilpotenceCertificate> {
    if level.params() != params {
        return Err(FglError::Structural("tower parameters differ".into()));
    }
    let exponent = u_cap(params, k)?;
    let bound = level.y_cap();
    if bound <= exponent {
        return Err(FglError::Vacuity(format!(
            "[p^{k}](u) is known only modulo u^{bound}, which hides u^{exponent}; \
             extend the tower past level {}",
            level.level()
        )));
    }
    let ps = p_series(level, k)?;
    let uv = vars(&["u"]);
    let series = ps.series.embed(uv.clone(), &[0])?;
    let expected = SparsePoly::var_power(uv, params.field(), "u", exponent as u32)?;
    Ok(NilpotenceCertificate {
        k,
        exponent,
        validity_bound: bound,
        passed: series == expected,
        series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernLimits {
    pub max_terms: u128,
    pub engine: EngineLimits,
}

impl Default for ChernLimits {
    fn default() -> Self {
        ChernLimits {
            max_terms: DEFAULT_MAX_CHERN_TERMS,
            engine: EngineLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernRelationSet {
    pub params: FglParams,
    pub k: u32,
    pub m: usize,
    /// Tower level used for `F`.
    pub level: u32,
    pub u_cap: u64,
    /// `relations[i - 1]` is relation_i, in variables `x_1 … x_m, u`.
    pub relations: Vec<SparsePoly<PrimeField>>,
    /// `F(x_j, u)` for each root.
    pub roots: Vec<SparsePoly<PrimeField>>,
}

pub fn relation_set(params: FglParams, k: u32) -> Result<ChernRelationSet> {
    relation_set_with_limits(params, k, ChernLimits::default())
}

pub fn relation_set_with_limits(
    params: FglParams,
    k: u32,
    limits: ChernLimits,
) -> Result<ChernRelationSet> {
    let coeffs = TruncatedCoeffRing::new(params, k)?;
    let cap = coeffs.nilpotence();
    let m = params
        .p()
        .checked_pow(k)
        .filter(|&m| m as u128 <= limits.max_terms)
        .ok_or_else(|| FglError::Resource {
            what: format!("number of roots p^{k}"),
            projected: (params.p() as u128).saturating_pow(k),
            limit: limits.max_terms,
        })? as usize;
    let n = required_level(params, k)?;
    let mut tower = FglTower::with_limits(params, limits.engine)?;
    let top = tower.extend_to(n)?;
    let fxu = top.poly().filter_terms(|t| (t.exp(1) as u64) < cap);

    let projected = m as u128 * fxu.len() as u128;
    if projected > limits.max_terms {
        return Err(FglError::Resource {
            what: format!(
                "Chern relations for p = {}, s = {}, k = {k}",
                params.p(),
                params.s()
            ),
            projected,
            limit: limits.max_terms,
        });
    }

    let names: Vec<String> = (1..=m)
        .map(|j| format!("x_{j}"))
        .chain(["u".to_string()])
        .collect();
    let vs: Vars = vars(&names);
    let ring = params.field();
    let policy = coeffs.policy();
    let roots: Vec<SparsePoly<PrimeField>> = (0..m)
        .map(|j| fxu.embed(vs.clone(), &[j, m]))
        .collect::<Result<_>>()?;
    let xs: Vec<SparsePoly<PrimeField>> = (1..=m)
        .map(|j| SparsePoly::var(vs.clone(), ring, &format!("x_{j}")))
        .collect::<Result<_>>()?;

    let twisted = elementary_symmetric_all(&roots, &policy)?;
    let plain = elementary_symmetric_all(&xs, &policy)?;
    let relations = twisted[1..]
        .iter()
        .zip(&plain[1..])
        .map(|(a, b)| a.sub(b))
        .collect::<Result<_>>()?;
    Ok(ChernRelationSet {
        params,
        k,
        m,
        level: n,
        u_cap: cap,
        relations,
        roots,
    })
}

impl ChernRelationSet {
    fn u_index(&self) -> usize {
        self.m
    }

    pub fn relation(&self, i: usize) -> Option<&SparsePoly<PrimeField>> {
        self.relations.get(i.checked_sub(1)?)
    }

    pub fn check_u_zero_vanishing(&self) -> bool {
        let u = self.u_index();
        self.relations.iter().all(|r| r.set_zero(u).is_zero())
    }

    /// Invariance under every adjacent transposition of the roots, which
    /// generate the symmetric group.
    pub fn check_permutation_invariance(&self) -> bool {
        self.relations
            .iter()
            .all(|r| (1..self.m).all(|a| &r.swap_vars(a - 1, a) == r))
    }

    pub fn check_u_cap(&self) -> bool {
        let u = self.u_index();
        self.relations
            .iter()
            .all(|r| r.max_exp(u).is_none_or(|e| (e as u64) < self.u_cap))
    }

    /// `∏ F(x_j, u) - ∏ x_j`, computed by direct multiplication.
    pub fn top_relation_by_product(&self) -> Result<SparsePoly<PrimeField>> {
        let policy = TruncationPolicy::none().with_cap("u", self.u_cap);
        let vs = self.roots[0].vars().clone();
        let ring = self.params.field();
        let mut lhs = SparsePoly::one(vs.clone(), ring);
        let mut rhs = SparsePoly::one(vs.clone(), ring);
        for (j, f) in self.roots.iter().enumerate() {
            lhs = lhs.mul(f, &policy)?;
            let x = SparsePoly::var(vs.clone(), ring, &format!("x_{}", j + 1))?;
            rhs = rhs.mul(&x, &policy)?;
        }
        lhs.sub(&rhs)
    }

    pub fn check_top_relation(&self) -> Result<bool> {
        Ok(self.relations.last() == Some(&self.top_relation_by_product()?))
    }
}
