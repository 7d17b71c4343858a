//! The truncated Honda formal group law tower `P_1, P_2, …`.
//!
//! `P_n ≡ F(x, y) mod y^(q^n)` over F_p with `v_s = 1` and `q = p^(s-1)`.
//! `P_1 = x + y`, `P_2 = x + y + w_1^q`, and `P_(n+1)` comes from `P_1 … P_n`
//! through the substitution ladder
//!
//! ```text
//! t <- P_n(x + y, w_1^q)
//! t <- P_(n+1-j)(t, w_j^(q^j))      for j = 2 … n-1
//! P_(n+1) = t + w_n^(q^n)           mod y^(q^(n+1))
//! ```
//!
//! Each step is only valid because the second slot `b_j = w_j^(q^j)` is
//! divisible by `y^(q^j)`, so `b_j^(q^(n+1-j))` vanishes modulo
//! `y^(q^(n+1))`. [`extend`] checks that divisibility on every step.

use std::collections::BTreeMap;

use crate::error::{structural, FglError, Result};
use crate::ring::{vars, CoefficientRing, PrimeField, SparsePoly, TruncationPolicy, Vars};
use crate::witt::{witt_family_with_limit, witt_mod_p, DEFAULT_MAX_WITT_DEGREE};

pub const DEFAULT_MAX_Y_CAP: u64 = 10_000;

pub(crate) fn xy() -> Vars {
    vars(&["x", "y"])
}

/// Prime `p` and height `s` of Morava K-theory K(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FglParams {
    p: u64,
    s: u32,
}

impl FglParams {
    /// Parameters for the recursion; requires `s > 1`.
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if s < 2 {
            return Err(FglError::InvalidParameter(format!(
                "height s = {s} is not supported by the recursion: it requires s > 1"
            )));
        }
        Self::any_height(p, s)
    }

    /// Parameters accepted by the logarithm oracle, where `s = 1` is allowed.
    pub fn any_height(p: u64, s: u32) -> Result<Self> {
        PrimeField::new(p)?;
        if s < 1 {
            return Err(FglError::InvalidParameter(
                "height s must be at least 1".into(),
            ));
        }
        if (p as u128)
            .checked_pow(s)
            .is_none_or(|v| v > u64::MAX as u128)
        {
            return Err(FglError::InvalidParameter(format!(
                "p^s overflows for p = {p}, s = {s}"
            )));
        }
        Ok(FglParams { p, s })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `q = p^(s-1)`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.s - 1)
    }

    /// `p^s - 1`; `|v_s| = -2(p^s - 1)`.
    pub fn grading_modulus(&self) -> u64 {
        self.p.pow(self.s) - 1
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    /// `q^n`, or `None` on overflow.
    pub fn y_cap(&self, level: u32) -> Option<u64> {
        self.q().checked_pow(level)
    }

    fn require_recursion(&self) -> Result<()> {
        if self.s < 2 {
            return Err(FglError::InvalidParameter(format!(
                "height s = {} is not supported by the recursion: it requires s > 1",
                self.s
            )));
        }
        Ok(())
    }
}

/// `F(x, y)` known exactly modulo `y^(q^level)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFgl {
    params: FglParams,
    level: u32,
    poly: SparsePoly<PrimeField>,
}

impl TruncatedFgl {
    pub fn params(&self) -> FglParams {
        self.params
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn poly(&self) -> &SparsePoly<PrimeField> {
        &self.poly
    }

    /// Exclusive bound `q^level` on y-exponents.
    pub fn y_cap(&self) -> u64 {
        self.params
            .y_cap(self.level)
            .expect("checked when the level was built")
    }

    /// Builds a level from an externally supplied polynomial. Only the
    /// shape is validated; use the `check_*` methods for the FGL laws.
    pub fn from_poly(params: FglParams, level: u32, poly: SparsePoly<PrimeField>) -> Result<Self> {
        params.require_recursion()?;
        if level == 0 {
            return Err(structural("truncation level must be positive"));
        }
        if poly.vars()[..] != xy()[..] || *poly.ring() != params.field() {
            return Err(structural("expected a polynomial in (x, y) over F_p"));
        }
        let cap = params
            .y_cap(level)
            .ok_or_else(|| structural("y-cap overflows"))?;
        if poly.max_exp(1).is_some_and(|e| e as u64 >= cap) {
            return Err(structural(format!(
                "term with y-exponent ≥ q^{level} = {cap}"
            )));
        }
        Ok(TruncatedFgl {
            params,
            level,
            poly,
        })
    }

    /// `P_m` for `m ≤ level`, obtained by dropping y-exponents `≥ q^m`.
    pub fn restrict(&self, m: u32) -> Result<TruncatedFgl> {
        if m == 0 || m > self.level {
            return Err(structural(format!(
                "cannot restrict level {} to {m}",
                self.level
            )));
        }
        let cap = self.params.y_cap(m).expect("smaller than current cap");
        Ok(TruncatedFgl {
            params: self.params,
            level: m,
            poly: self.poly.filter_terms(|t| (t.exp(1) as u64) < cap),
        })
    }

    /// `P(x, 0) = x` and `P(0, y) = y` on the term map.
    pub fn check_unit_laws(&self) -> bool {
        let f = self.params.field();
        let x = SparsePoly::var(xy(), f, "x").expect("x");
        let y = SparsePoly::var(xy(), f, "y").expect("y");
        self.poly.set_zero(1) == x && self.poly.set_zero(0) == y
    }

    /// Symmetry under `x <-> y` on the region where both exponents are
    /// below the y-cap; outside it the truncation itself is asymmetric.
    pub fn check_commutativity(&self) -> bool {
        let cap = self.y_cap();
        let square = self.poly.filter_terms(|m| (m.exp(0) as u64) < cap);
        square.swap_vars(0, 1) == square
    }

    /// `(p^s - 1) | (i + j - 1)` for every nonzero term.
    pub fn check_grading(&self) -> bool {
        vs_regrade(self).is_ok()
    }
}

/// Resource limits for [`extend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineLimits {
    /// Largest admissible `q^(n+1)`.
    pub max_y_cap: u64,
    pub max_witt_degree: u64,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            max_y_cap: DEFAULT_MAX_Y_CAP,
            max_witt_degree: DEFAULT_MAX_WITT_DEGREE,
        }
    }
}

/// `P_1 = x + y`.
pub fn initial_fgl(params: FglParams) -> Result<TruncatedFgl> {
    params.require_recursion()?;
    let f = params.field();
    let poly = SparsePoly::from_terms(xy(), f, [(vec![1, 0], 1), (vec![0, 1], 1)])?;
    TruncatedFgl::from_poly(params, 1, poly)
}

/// Computes `P_(n+1)` from the full tower `P_1 … P_n`.
pub fn extend(tower: &[TruncatedFgl]) -> Result<TruncatedFgl> {
    extend_with_limits(tower, EngineLimits::default())
}

pub fn extend_with_limits(tower: &[TruncatedFgl], limits: EngineLimits) -> Result<TruncatedFgl> {
    let top = tower.last().ok_or_else(|| structural("empty tower"))?;
    let n = top.level as usize;
    check_next_cap(top.params, top.level, limits)?;
    let family = witt_family_with_limit(top.params.p, n, limits.max_witt_degree)?;
    extend_inner(tower, &witt_mod_p(&family))
}

fn check_next_cap(params: FglParams, level: u32, limits: EngineLimits) -> Result<u64> {
    let projected = (params.q() as u128)
        .checked_pow(level + 1)
        .unwrap_or(u128::MAX);
    if projected > limits.max_y_cap as u128 {
        return Err(FglError::Resource {
            what: format!("extending to level {} (y-cap q^{})", level + 1, level + 1),
            projected,
            limit: limits.max_y_cap as u128,
        });
    }
    Ok(projected as u64)
}

fn validate_tower(tower: &[TruncatedFgl]) -> Result<FglParams> {
    let params = tower
        .first()
        .ok_or_else(|| structural("empty tower"))?
        .params;
    params.require_recursion()?;
    for (i, t) in tower.iter().enumerate() {
        if t.params != params {
            return Err(structural("tower levels have different parameters"));
        }
        if t.level as usize != i + 1 {
            return Err(structural(format!(
                "tower position {} holds level {}",
                i + 1,
                t.level
            )));
        }
    }
    Ok(params)
}

/// `witt[j]` must hold `w_j mod p` for `j ≤ n`.
fn extend_inner(tower: &[TruncatedFgl], witt: &[SparsePoly<PrimeField>]) -> Result<TruncatedFgl> {
    let params = validate_tower(tower)?;
    let n = tower.len();
    if witt.len() <= n {
        return Err(structural("not enough Witt polynomials for this level"));
    }
    let q = params.q();
    let cap = params
        .y_cap(n as u32 + 1)
        .ok_or_else(|| structural("y-cap overflows"))?;
    let trunc = TruncationPolicy::none().with_cap("y", cap);
    let f = params.field();

    // b_j = (w_j mod p)^(q^j), 1 ≤ j ≤ n
    let mut b: Vec<SparsePoly<PrimeField>> = vec![SparsePoly::zero(xy(), f)];
    for (j, w) in witt.iter().enumerate().take(n + 1).skip(1) {
        b.push(w.pow(q.pow(j as u32), &trunc));
    }
    let x_plus_y = SparsePoly::from_terms(xy(), f, [(vec![1, 0], 1), (vec![0, 1], 1)])?;

    let poly = if n == 1 {
        x_plus_y.add(&b[1])?
    } else {
        let mut t = x_plus_y;
        for j in 1..n {
            let k = n + 1 - j;
            certify_step(params, n, j, k, &b[j])?;
            let mut asg = BTreeMap::new();
            asg.insert("x".to_string(), t);
            asg.insert("y".to_string(), b[j].clone());
            t = tower[k - 1].poly.substitute(&asg, &trunc)?;
        }
        t.add(&b[n])?
    };
    Ok(TruncatedFgl {
        params,
        level: n as u32 + 1,
        poly: poly.truncate(&trunc),
    })
}

/// `P_k(t, b_j)` agrees with `F(t, b_j)` modulo `y^(q^(n+1))` provided every
/// monomial of `b_j` has y-exponent `e` with `e · q^k ≥ q^(n+1)`.
fn certify_step(
    params: FglParams,
    n: usize,
    j: usize,
    k: usize,
    bj: &SparsePoly<PrimeField>,
) -> Result<()> {
    let Some(min_y) = bj.min_exp(1) else {
        return Ok(());
    };
    let need = params.y_cap(n as u32 + 1).expect("checked") as u128;
    let have = min_y as u128 * params.y_cap(k as u32).expect("k ≤ n") as u128;
    if have < need {
        return Err(FglError::InternalConsistency(format!(
            "ladder step {j}: w_{j}^(q^{j}) has a monomial with y-exponent {min_y}, \
             so P_{k} does not determine F modulo y^{need}"
        )));
    }
    Ok(())
}

/// The cached tower `P_1 … P_n` for one parameter set.
#[derive(Debug, Clone)]
pub struct FglTower {
    params: FglParams,
    limits: EngineLimits,
    levels: Vec<TruncatedFgl>,
    witt: Vec<SparsePoly<PrimeField>>,
}

impl FglTower {
    pub fn new(params: FglParams) -> Result<Self> {
        Self::with_limits(params, EngineLimits::default())
    }

    pub fn with_limits(params: FglParams, limits: EngineLimits) -> Result<Self> {
        let first = initial_fgl(params)?;
        Ok(FglTower {
            params,
            limits,
            levels: vec![first],
            witt: Vec::new(),
        })
    }

    /// Tower computed up to `level`.
    pub fn compute(params: FglParams, level: u32) -> Result<Self> {
        let mut t = Self::new(params)?;
        t.extend_to(level)?;
        Ok(t)
    }

    pub fn params(&self) -> FglParams {
        self.params
    }

    pub fn levels(&self) -> &[TruncatedFgl] {
        &self.levels
    }

    pub fn top(&self) -> &TruncatedFgl {
        self.levels.last().expect("tower is never empty")
    }

    pub fn level(&self, n: u32) -> Option<&TruncatedFgl> {
        self.levels.get((n as usize).checked_sub(1)?)
    }

    /// Adds one level; lower levels are never recomputed.
    pub fn extend(&mut self) -> Result<&TruncatedFgl> {
        let n = self.levels.len();
        check_next_cap(self.params, n as u32, self.limits)?;
        if self.witt.len() <= n {
            let fam = witt_family_with_limit(self.params.p, n, self.limits.max_witt_degree)?;
            self.witt = witt_mod_p(&fam);
        }
        let next = extend_inner(&self.levels, &self.witt)?;
        self.levels.push(next);
        Ok(self.top())
    }

    pub fn extend_to(&mut self, level: u32) -> Result<&TruncatedFgl> {
        if level == 0 {
            return Err(FglError::InvalidParameter("level must be positive".into()));
        }
        while (self.levels.len() as u32) < level {
            self.extend()?;
        }
        Ok(self.top())
    }
}

/// `A_l(x)` for `0 ≤ l < q^n`, where `P_n = Σ A_l(x) y^l`.
pub fn coefficient_table(f: &TruncatedFgl) -> Vec<SparsePoly<PrimeField>> {
    let xv = vars(&["x"]);
    let ring = f.params.field();
    let mut rows: Vec<Vec<(Vec<u32>, u64)>> = vec![Vec::new(); f.y_cap() as usize];
    for (m, c) in f.poly.terms() {
        rows[m.exp(1) as usize].push((vec![m.exp(0)], *c));
    }
    rows.into_iter()
        .map(|r| SparsePoly::from_terms(xv.clone(), ring, r).expect("one variable"))
        .collect()
}

/// `Σ A_l(x) y^l` from a coefficient table.
pub fn reassemble(
    table: &[SparsePoly<PrimeField>],
    ring: PrimeField,
) -> Result<SparsePoly<PrimeField>> {
    let mut terms = Vec::new();
    for (l, a) in table.iter().enumerate() {
        if a.vars()[..] != ["x".to_string()] {
            return Err(structural(
                "coefficient table rows must be polynomials in x",
            ));
        }
        for (m, c) in a.terms() {
            terms.push((vec![m.exp(0), l as u32], *c));
        }
    }
    SparsePoly::from_terms(xy(), ring, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeViolation {
    pub i: u32,
    pub j: u32,
    pub m: u32,
}

/// Largest x-exponent observed among terms with `y`-exponent below `q^m`,
/// next to the bound `(pq)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBand {
    pub m: u32,
    pub y_cap: u64,
    pub bound: u128,
    pub max_x_exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBoundReport {
    pub level: u32,
    pub violations: Vec<DegreeViolation>,
    pub bands: Vec<DegreeBand>,
}

impl DegreeBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `i ≤ (pq)^m` for every term `x^i y^j` with `j < q^m`, `m ≤ n`.
pub fn verify_degree_bound(f: &TruncatedFgl) -> DegreeBoundReport {
    let pq = (f.params.p * f.params.q()) as u128;
    let mut violations = Vec::new();
    let mut bands = Vec::new();
    for m in 0..=f.level {
        let y_cap = f.params.y_cap(m).expect("m ≤ level");
        let bound = pq.checked_pow(m).unwrap_or(u128::MAX);
        let mut max_x = None;
        for (t, _) in f.poly.terms() {
            let (i, j) = (t.exp(0), t.exp(1));
            if (j as u64) < y_cap {
                max_x = max_x.max(Some(i));
                if i as u128 > bound {
                    violations.push(DegreeViolation { i, j, m });
                }
            }
        }
        bands.push(DegreeBand {
            m,
            y_cap,
            bound,
            max_x_exponent: max_x,
        });
    }
    DegreeBoundReport {
        level: f.level,
        violations,
        bands,
    }
}

/// `[p^k](x)` with the exclusive bound `q^n` below which it is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PSeries {
    pub k: u32,
    pub series: SparsePoly<PrimeField>,
    pub validity_bound: u64,
}

impl PSeries {
    /// True when the truncation leaves nothing to check about `x^expected`.
    pub fn is_vacuous_for(&self, expected: u64) -> bool {
        expected >= self.validity_bound
    }
}

/// `[p^k](x)` by iterated diagonal substitution `[m+1](x) = P_n([m](x), x)`,
/// keeping x-exponents below `q^n`.
pub fn p_series(f: &TruncatedFgl, k: u32) -> Result<PSeries> {
    let ring = f.params.field();
    let xv = vars(&["x"]);
    let bound = f.y_cap();
    let trunc = TruncationPolicy::none().with_cap("x", bound);
    let iterations = f
        .params
        .p
        .checked_pow(k)
        .ok_or_else(|| FglError::InvalidParameter(format!("p^k overflows for k = {k}")))?;
    let x = SparsePoly::var(xv, ring, "x")?.truncate(&trunc);
    let mut cur = x.clone();
    for _ in 1..iterations {
        let mut asg = BTreeMap::new();
        asg.insert("x".to_string(), cur);
        asg.insert("y".to_string(), x.clone());
        cur = f.poly.substitute(&asg, &trunc)?;
    }
    Ok(PSeries {
        k,
        series: cur,
        validity_bound: bound,
    })
}

/// The `v_s` exponent `(i + j - 1)/(p^s - 1)` of every term `x^i y^j`.
pub fn vs_regrade(f: &TruncatedFgl) -> Result<BTreeMap<(u32, u32), u64>> {
    let modulus = f.params.grading_modulus();
    let ring = f.params.field();
    let mut out = BTreeMap::new();
    for (m, c) in f.poly.terms() {
        if ring.is_zero(c) {
            continue;
        }
        let (i, j) = (m.exp(0), m.exp(1));
        let d = i as u64 + j as u64;
        if d == 0 || !(d - 1).is_multiple_of(modulus) {
            return Err(FglError::Grading { i, j, modulus });
        }
        out.insert((i, j), (d - 1) / modulus);
    }
    Ok(out)
}
