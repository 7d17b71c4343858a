//! Independent construction of the Honda formal group law from its
//! logarithm `ℓ(x) = Σ_{i≥0} x^(p^(si)) / p^i` over the rationals:
//! `F(x, y) = ℓ^{-1}(ℓ(x) + ℓ(y))` modulo total degree `D`, then reduced
//! into F_p. Used to cross-check the recursion in [`crate::engine`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::engine::{xy, FglParams, TruncatedFgl};
use crate::error::{structural, FglError, Result};
use crate::ring::{vars, PrimeField, Rationals, SparsePoly, TruncationPolicy, Vars};

fn xv() -> Vars {
    vars(&["x"])
}

/// `ℓ(x) = Σ x^(p^(si)) / p^i` over all `i` with `p^(si) < D`.
pub fn honda_log(params: FglParams, degree: u64) -> Result<SparsePoly<Rationals>> {
    if degree < 2 {
        return Err(FglError::InvalidParameter(
            "degree bound D must be at least 2".into(),
        ));
    }
    let step = params.p().pow(params.s());
    let mut terms = Vec::new();
    let mut e: u64 = 1;
    let mut i: u32 = 0;
    while e < degree {
        let c = BigRational::new(BigInt::one(), BigInt::from(params.p()).pow(i));
        terms.push((vec![e as u32], c));
        e = match e.checked_mul(step) {
            Some(v) => v,
            None => break,
        };
        i += 1;
    }
    SparsePoly::from_terms(xv(), Rationals, terms)
}

/// Compositional inverse `g` of `f = x + …` modulo `x^D`, one coefficient at
/// a time: `g_d = -[x^d] f(g_{<d})`.
pub fn revert_series(f: &SparsePoly<Rationals>, degree: u64) -> Result<SparsePoly<Rationals>> {
    if f.vars().len() != 1 {
        return Err(structural("series reversion needs a univariate series"));
    }
    if !f.coeff(&[0]).is_zero() {
        return Err(structural("series to revert has a nonzero constant term"));
    }
    if !f.coeff(&[1]).is_one() {
        return Err(structural("series to revert must start with x"));
    }
    let name = f.vars()[0].clone();
    let x = SparsePoly::var(f.vars().clone(), Rationals, &name)?;
    let mut g = x.truncate(&TruncationPolicy::none().with_total_degree(degree));
    for d in 2..degree {
        let t = TruncationPolicy::none().with_total_degree(d + 1);
        let mut asg = BTreeMap::new();
        asg.insert(name.clone(), g.clone());
        let composed = f.substitute(&asg, &t)?;
        let c = composed.coeff(&[d as u32]);
        if !c.is_zero() {
            let correction =
                SparsePoly::from_terms(f.vars().clone(), Rationals, [(vec![d as u32], -c)])?;
            g = g.add(&correction)?;
        }
    }
    Ok(g)
}

/// Composition `f(g)` modulo `x^D` for univariate series.
pub fn compose(
    f: &SparsePoly<Rationals>,
    g: &SparsePoly<Rationals>,
    degree: u64,
) -> Result<SparsePoly<Rationals>> {
    let mut asg = BTreeMap::new();
    asg.insert(f.vars()[0].clone(), g.clone());
    f.substitute(&asg, &TruncationPolicy::none().with_total_degree(degree))
}

/// The logarithm-built formal group law modulo total degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleFgl {
    pub params: FglParams,
    pub degree: u64,
    pub poly_rational: SparsePoly<Rationals>,
    pub poly_mod_p: SparsePoly<PrimeField>,
}

/// `F = exp(ℓ(x) + ℓ(y))` with `exp = ℓ^{-1}`, modulo total degree `D`.
/// Any coefficient whose denominator is divisible by `p` is fatal.
pub fn oracle_fgl(params: FglParams, degree: u64) -> Result<OracleFgl> {
    let log = honda_log(params, degree)?;
    let exp = revert_series(&log, degree)?;
    let t = TruncationPolicy::none().with_total_degree(degree);
    let lx = log.embed(xy(), &[0])?;
    let ly = log.embed(xy(), &[1])?;
    let mut asg = BTreeMap::new();
    asg.insert("x".to_string(), lx.add(&ly)?);
    let poly_rational = exp.substitute(&asg, &t)?;
    let poly_mod_p = poly_rational.map_domain(&params.field())?;
    Ok(OracleFgl {
        params,
        degree,
        poly_rational,
        poly_mod_p,
    })
}

/// `max(p^s + 1, q^n)`: large enough that comparison at level `n` sees the
/// first `v_s` term and the whole y-range.
pub fn default_degree(params: FglParams, level: u32) -> u64 {
    let ps = params.p().pow(params.s()) + 1;
    ps.max(params.y_cap(level).unwrap_or(u64::MAX))
}

impl OracleFgl {
    /// `F(F(x, y), z)` and `F(x, F(y, z))` modulo total degree `D`, mod p.
    pub fn associativity_sides(&self) -> Result<(SparsePoly<PrimeField>, SparsePoly<PrimeField>)> {
        let xyz = vars(&["x", "y", "z"]);
        let t = TruncationPolicy::none().with_total_degree(self.degree);
        let f = &self.poly_mod_p;
        let fxy = f.embed(xyz.clone(), &[0, 1])?;
        let fyz = f.embed(xyz.clone(), &[1, 2])?;
        let ring = self.params.field();
        let x = SparsePoly::var(xyz.clone(), ring, "x")?;
        let z = SparsePoly::var(xyz, ring, "z")?;

        let mut left = BTreeMap::new();
        left.insert("x".to_string(), fxy);
        left.insert("y".to_string(), z);
        let mut right = BTreeMap::new();
        right.insert("x".to_string(), x);
        right.insert("y".to_string(), fyz);
        Ok((f.substitute(&left, &t)?, f.substitute(&right, &t)?))
    }

    pub fn check_associativity(&self) -> Result<bool> {
        let (l, r) = self.associativity_sides()?;
        Ok(l == r)
    }

    pub fn check_commutativity(&self) -> bool {
        self.poly_mod_p.swap_vars(0, 1) == self.poly_mod_p
            && self.poly_rational.swap_vars(0, 1) == self.poly_rational
    }

    pub fn check_unit_laws(&self) -> bool {
        let ring = self.params.field();
        let x = SparsePoly::var(xy(), ring, "x").expect("x");
        let y = SparsePoly::var(xy(), ring, "y").expect("y");
        self.poly_mod_p.set_zero(1) == x && self.poly_mod_p.set_zero(0) == y
    }

    /// `[p](x)` mod p and mod `x^D`, by iterated diagonal substitution.
    pub fn p_series(&self) -> Result<SparsePoly<PrimeField>> {
        let ring = self.params.field();
        let t = TruncationPolicy::none().with_total_degree(self.degree);
        let x = SparsePoly::var(xv(), ring, "x")?.truncate(&t);
        let mut cur = x.clone();
        for _ in 1..self.params.p() {
            let mut asg = BTreeMap::new();
            asg.insert("x".to_string(), cur);
            asg.insert("y".to_string(), x.clone());
            cur = self.poly_mod_p.substitute(&asg, &t)?;
        }
        Ok(cur)
    }

    /// `[p](x) = x^(p^s)` modulo `x^D`.
    pub fn check_p_series(&self) -> Result<bool> {
        let ring = self.params.field();
        let e = self.params.p().pow(self.params.s());
        let expected = SparsePoly::var_power(xv(), ring, "x", e as u32)?
            .truncate(&TruncationPolicy::none().with_total_degree(self.degree));
        Ok(self.p_series()? == expected)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub i: u32,
    pub j: u32,
    pub engine: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareReport {
    pub p: u64,
    pub s: u32,
    pub level: u32,
    pub degree: u64,
    pub y_cap: u64,
    /// Monomials `x^i y^j` with `i + j < D` and `j < q^n`.
    pub region_size: u64,
    pub mismatches: Vec<Mismatch>,
}

impl CompareReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Termwise comparison on `{x^i y^j : i + j < D, j < q^n}`.
pub fn compare(engine: &TruncatedFgl, oracle: &OracleFgl) -> Result<CompareReport> {
    let params = engine.params();
    if params != oracle.params {
        return Err(structural(format!(
            "comparing (p, s) = ({}, {}) against ({}, {})",
            params.p(),
            params.s(),
            oracle.params.p(),
            oracle.params.s()
        )));
    }
    let d = oracle.degree;
    let y_cap = engine.y_cap();
    let inside = |i: u32, j: u32| (i as u64 + j as u64) < d && (j as u64) < y_cap;

    let mut keys: BTreeMap<(u32, u32), ()> = BTreeMap::new();
    for (m, _) in engine.poly().terms().chain(oracle.poly_mod_p.terms()) {
        if inside(m.exp(0), m.exp(1)) {
            keys.insert((m.exp(0), m.exp(1)), ());
        }
    }
    let mut mismatches = Vec::new();
    for &(i, j) in keys.keys() {
        let a = engine.poly().coeff(&[i, j]);
        let b = oracle.poly_mod_p.coeff(&[i, j]);
        if a != b {
            mismatches.push(Mismatch {
                i,
                j,
                engine: a,
                oracle: b,
            });
        }
    }
    // sort in the same graded order the polynomials use
    mismatches.sort_by_key(|m| (m.i + m.j, std::cmp::Reverse(m.i)));
    let region_size = (0..y_cap.min(d)).map(|j| d - j).sum();
    Ok(CompareReport {
        p: params.p(),
        s: params.s(),
        level: engine.level(),
        degree: d,
        y_cap,
        region_size,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::FglTower;
    use crate::ring::CoefficientRing;

    fn q(s: &str) -> BigRational {
        Rationals.parse(s).unwrap()
    }

    fn params(p: u64, s: u32) -> FglParams {
        FglParams::any_height(p, s).unwrap()
    }

    #[test]
    fn log_examples() {
        assert_eq!(honda_log(params(2, 2), 5).unwrap().to_text(), "x + 1/2*x^4");
        assert_eq!(honda_log(params(3, 2), 9).unwrap().to_text(), "x");
        assert_eq!(
            honda_log(params(2, 2), 17).unwrap().to_text(),
            "x + 1/2*x^4 + 1/4*x^16"
        );
        assert!(honda_log(params(2, 2), 1).is_err());
    }

    #[test]
    fn revert_identity() {
        let x = SparsePoly::var(xv(), Rationals, "x").unwrap();
        assert_eq!(revert_series(&x, 10).unwrap(), x);
    }

    /// g = x + a x^4 + b x^7 + … with f(g) = x mod x^8: the x^4 coefficient
    /// gives a + 1/2 = 0, and the x^7 coefficient gives b + 4·(1/2)·a = 0
    /// since (x + a x^4)^4 = x^4 + 4a x^7 + …, so b = -2a = 1.
    #[test]
    fn revert_log_by_hand() {
        let f = honda_log(params(2, 2), 8).unwrap();
        let g = revert_series(&f, 8).unwrap();
        assert_eq!(g.to_text(), "x - 1/2*x^4 + x^7");
        let g5 = revert_series(&f, 7).unwrap();
        assert_eq!(g5.to_text(), "x - 1/2*x^4");
    }

    #[test]
    fn revert_rejects_bad_leading_terms() {
        let f = SparsePoly::from_terms(xv(), Rationals, [(vec![1], q("2"))]).unwrap();
        assert!(revert_series(&f, 5).is_err());
        let f = SparsePoly::from_terms(xv(), Rationals, [(vec![0], q("1")), (vec![1], q("1"))])
            .unwrap();
        assert!(revert_series(&f, 5).is_err());
    }

    #[test]
    fn revert_is_two_sided() {
        let f = SparsePoly::from_terms(
            xv(),
            Rationals,
            [(vec![1], q("1")), (vec![2], q("-3/5")), (vec![5], q("7"))],
        )
        .unwrap();
        let d = 12;
        let g = revert_series(&f, d).unwrap();
        let x = SparsePoly::var(xv(), Rationals, "x").unwrap();
        assert_eq!(compose(&f, &g, d).unwrap(), x);
        assert_eq!(compose(&g, &f, d).unwrap(), x);
    }

    /// exp(ℓx + ℓy) mod degree 5 expands to
    /// x + y + (x^4 + y^4 - (x+y)^4)/2 = x + y - 2x^3y - 3x^2y^2 - 2xy^3.
    #[test]
    fn oracle_p2_s2_degree5() {
        let o = oracle_fgl(params(2, 2), 5).unwrap();
        assert_eq!(
            o.poly_rational.to_text(),
            "x + y - 2*x^3*y - 3*x^2*y^2 - 2*x*y^3"
        );
        assert_eq!(o.poly_mod_p.to_text(), "x + y + x^2*y^2");
    }

    #[test]
    fn oracle_has_no_mixed_terms_below_q_plus_one() {
        for (p, s) in [(2, 2), (3, 2), (2, 3)] {
            let pr = params(p, s);
            let o = oracle_fgl(pr, 12).unwrap();
            let q = pr.q();
            assert!(o
                .poly_mod_p
                .terms()
                .all(|(m, _)| m.total_degree() == 1 || m.total_degree() > q));
        }
    }

    #[test]
    fn oracle_laws() {
        for (p, s) in [(2, 2), (3, 2), (2, 3), (2, 1)] {
            let o = oracle_fgl(params(p, s), 10).unwrap();
            assert!(o.check_unit_laws());
            assert!(o.check_commutativity());
            assert!(o.check_associativity().unwrap());
            assert!(o.check_p_series().unwrap());
        }
    }

    #[test]
    fn compare_small_instances() {
        let t = FglTower::compute(FglParams::new(2, 2).unwrap(), 2).unwrap();
        let o = oracle_fgl(t.params(), 5).unwrap();
        let r = compare(t.top(), &o).unwrap();
        assert!(r.agrees());

        let t = FglTower::compute(FglParams::new(3, 2).unwrap(), 2).unwrap();
        let o = oracle_fgl(t.params(), 10).unwrap();
        assert!(compare(t.top(), &o).unwrap().agrees());
    }

    #[test]
    fn compare_flags_corruption() {
        let t = FglTower::compute(FglParams::new(2, 2).unwrap(), 2).unwrap();
        let o = oracle_fgl(t.params(), 9).unwrap();
        let ring = t.params().field();
        let extra = SparsePoly::from_terms(xy(), ring, [(vec![3, 0], 1)]).unwrap();
        let bad =
            TruncatedFgl::from_poly(t.params(), 2, t.top().poly().add(&extra).unwrap()).unwrap();
        let r = compare(&bad, &o).unwrap();
        assert_eq!(
            r.mismatches,
            vec![Mismatch {
                i: 3,
                j: 0,
                engine: 1,
                oracle: 0
            }]
        );
    }

    #[test]
    fn compare_rejects_parameter_mismatch() {
        let t = FglTower::compute(FglParams::new(2, 2).unwrap(), 1).unwrap();
        let o = oracle_fgl(params(3, 2), 5).unwrap();
        assert!(compare(t.top(), &o).is_err());
    }

    #[test]
    fn default_degree_rule() {
        assert_eq!(default_degree(FglParams::new(2, 2).unwrap(), 2), 5);
        assert_eq!(default_degree(FglParams::new(2, 2).unwrap(), 4), 16);
    }
}
