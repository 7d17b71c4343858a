use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::domain::{CoefficientMap, CoefficientRing};
use super::monomial::Monomial;
use super::truncation::{ResolvedPolicy, TruncationPolicy};
use crate::error::{structural, FglError, Result};

/// Ordered variable names shared between polynomials.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Exact sparse multivariate polynomial.
///
/// Terms are kept in graded-lex order with no zero coefficients, so two
/// polynomials are equal exactly when their term maps are.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<R: CoefficientRing> {
    vars: Vars,
    ring: R,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: CoefficientRing> SparsePoly<R> {
    pub fn zero(vars: Vars, ring: R) -> Self {
        SparsePoly {
            vars,
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, ring: R, c: R::Elem) -> Self {
        let mut p = Self::zero(vars, ring);
        if !p.ring.is_zero(&c) {
            p.terms.insert(Monomial::one(p.vars.len()), c);
        }
        p
    }

    pub fn one(vars: Vars, ring: R) -> Self {
        let c = ring.one();
        Self::constant(vars, ring, c)
    }

    pub fn var(vars: Vars, ring: R, name: &str) -> Result<Self> {
        Self::var_power(vars, ring, name, 1)
    }

    pub fn var_power(vars: Vars, ring: R, name: &str, exp: u32) -> Result<Self> {
        let idx = index_of(&vars, name)?;
        let mut p = Self::zero(vars, ring);
        let one = p.ring.one();
        p.terms.insert(Monomial::var(p.vars.len(), idx, exp), one);
        Ok(p)
    }

    /// Builds a polynomial from (exponents, coefficient) pairs; repeated
    /// exponent vectors are summed and zeros dropped. Short exponent vectors
    /// are padded with zeros.
    pub fn from_terms<I>(vars: Vars, ring: R, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, R::Elem)>,
    {
        let n = vars.len();
        let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (mut e, c) in terms {
            if e.len() > n {
                return Err(structural(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    n
                )));
            }
            e.resize(n, 0);
            match acc.get_mut(&Monomial::new(e.clone())) {
                Some(slot) => ring.add_assign(slot, &c),
                None => {
                    acc.insert(Monomial::new(e), c);
                }
            }
        }
        acc.retain(|_, c| !ring.is_zero(c));
        Ok(SparsePoly {
            vars,
            ring,
            terms: acc,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> R::Elem {
        let mut e = exponents.to_vec();
        e.resize(self.vars.len(), 0);
        self.terms
            .get(&Monomial::new(e))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        index_of(&self.vars, name)
    }

    /// Largest exponent of the variable at `index`, or `None` for zero.
    pub fn max_exp(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(index)).max()
    }

    pub fn min_exp(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(index)).min()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn same_space(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(structural(format!(
                "domain mismatch: {} vs {}",
                self.ring.descriptor(),
                other.ring.descriptor()
            )));
        }
        if self.vars != other.vars {
            return Err(structural(format!(
                "variable mismatch: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn truncate(&self, t: &TruncationPolicy) -> Self {
        let r = t.resolve(&self.vars);
        self.filter_terms(|m| r.admits(m))
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(slot) => {
                    self.ring.add_assign(slot, c);
                    if self.ring.is_zero(slot) {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Product with every monomial rejected by `t` dropped.
    pub fn mul(&self, other: &Self, t: &TruncationPolicy) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.mul_resolved(other, &t.resolve(&self.vars)))
    }

    fn mul_resolved(&self, other: &Self, r: &ResolvedPolicy) -> Self {
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if !r.admits_product(ma, mb) {
                    continue;
                }
                let c = self.ring.mul(ca, cb);
                let slot = acc.entry(ma.mul(mb)).or_insert_with(|| self.ring.zero());
                self.ring.add_assign(slot, &c);
            }
        }
        self.collect(acc)
    }

    fn collect(&self, acc: HashMap<Monomial, R::Elem>) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !self.ring.is_zero(c))
                .collect(),
        }
    }

    /// `self^e` by repeated squaring, truncating after every product.
    pub fn pow(&self, e: u64, t: &TruncationPolicy) -> Self {
        let r = t.resolve(&self.vars);
        self.pow_resolved(e, &r)
    }

    fn pow_resolved(&self, mut e: u64, r: &ResolvedPolicy) -> Self {
        let one = Self::one(self.vars.clone(), self.ring.clone());
        let mut acc = one.filter_terms(|m| r.admits(m));
        if e == 0 {
            return acc;
        }
        let mut base = self.filter_terms(|m| r.admits(m));
        loop {
            if e & 1 == 1 {
                acc = acc.mul_resolved(&base, r);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_resolved(&base, r);
        }
        acc
    }

    /// Evaluates `self` at `assignment` (one image per variable of `self`).
    /// All images must share one variable set and this polynomial's domain;
    /// every intermediate product is truncated by `t`.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, SparsePoly<R>>,
        t: &TruncationPolicy,
    ) -> Result<SparsePoly<R>> {
        let images: Vec<&SparsePoly<R>> = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .ok_or_else(|| structural(format!("no assignment for variable {v:?}")))
            })
            .collect::<Result<_>>()?;
        let first = images
            .first()
            .ok_or_else(|| structural("cannot substitute into a polynomial with no variables"))?;
        for img in &images {
            img.same_space(first)?;
        }
        if self.ring != first.ring {
            return Err(structural(
                "template and images live over different domains",
            ));
        }
        let target_vars = first.vars.clone();
        let r = t.resolve(&target_vars);

        // Powers of each image, computed only for the exponents that occur.
        let powers: Vec<HashMap<u32, SparsePoly<R>>> = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let mut needed: Vec<u32> = self.terms.keys().map(|m| m.exp(i)).collect();
                needed.sort_unstable();
                needed.dedup();
                let mut out = HashMap::new();
                let mut prev = 0u32;
                let mut cur =
                    Self::one(target_vars.clone(), self.ring.clone()).filter_terms(|m| r.admits(m));
                for e in needed {
                    if e > prev {
                        let step = img.pow_resolved((e - prev) as u64, &r);
                        cur = cur.mul_resolved(&step, &r);
                        prev = e;
                    }
                    out.insert(e, cur.clone());
                }
                out
            })
            .collect();

        let terms: Vec<(&Monomial, &R::Elem)> = self.terms.iter().collect();
        let zero = Self::zero(target_vars, self.ring.clone());
        Ok(eval_grouped(&terms, 0, &powers, &r, &zero))
    }

    /// Image of every coefficient under the canonical map into `target`.
    pub fn map_domain<T>(&self, target: &T) -> Result<SparsePoly<T>>
    where
        T: CoefficientRing,
        R: CoefficientMap<T>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.ring.map_elem(c, target)?;
            if !target.is_zero(&d) {
                terms.insert(m.clone(), d);
            }
        }
        Ok(SparsePoly {
            vars: self.vars.clone(),
            ring: target.clone(),
            terms,
        })
    }

    /// Re-expresses the polynomial in `new_vars`, sending variable `i` of
    /// `self` to variable `mapping[i]` of `new_vars`. Distinct variables must
    /// map to distinct targets.
    pub fn embed(&self, new_vars: Vars, mapping: &[usize]) -> Result<Self> {
        if mapping.len() != self.vars.len() {
            return Err(structural("embedding must map every variable"));
        }
        let mut seen = vec![false; new_vars.len()];
        for &j in mapping {
            if j >= new_vars.len() || std::mem::replace(&mut seen[j], true) {
                return Err(structural("embedding target out of range or repeated"));
            }
        }
        let n = new_vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; n];
                for (i, &j) in mapping.iter().enumerate() {
                    e[j] = m.exp(i);
                }
                (Monomial::new(e), c.clone())
            })
            .collect();
        Ok(SparsePoly {
            vars: new_vars,
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Exchanges the roles of two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                e.swap(a, b);
                (Monomial::new(e), c.clone())
            })
            .collect();
        SparsePoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Specializes the variable at `index` to zero.
    pub fn set_zero(&self, index: usize) -> Self {
        self.filter_terms(|m| m.exp(index) == 0)
    }
}

fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| FglError::Structural(format!("unknown variable {name:?} in {vars:?}")))
}

/// Horner-style evaluation: group terms by the exponent of variable `level`
/// and multiply each group's inner sum by the matching power once.
fn eval_grouped<R: CoefficientRing>(
    terms: &[(&Monomial, &R::Elem)],
    level: usize,
    powers: &[HashMap<u32, SparsePoly<R>>],
    r: &ResolvedPolicy,
    zero: &SparsePoly<R>,
) -> SparsePoly<R> {
    let ring = zero.ring();
    let mut groups: BTreeMap<u32, Vec<(&Monomial, &R::Elem)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.exp(level)).or_default().push((m, c));
    }
    let last = level + 1 == powers.len();
    let mut acc: HashMap<Monomial, R::Elem> = HashMap::new();
    for (e, group) in groups {
        let pw = &powers[level][&e];
        let contribution = if last {
            let c = group.iter().fold(ring.zero(), |s, (_, c)| ring.add(&s, c));
            pw.scale(&c)
        } else {
            let inner = eval_grouped(&group, level + 1, powers, r, zero);
            if e == 0 {
                inner
            } else {
                pw.mul_resolved(&inner, r)
            }
        };
        for (m, c) in contribution.terms {
            match acc.get_mut(&m) {
                Some(slot) => ring.add_assign(slot, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
    }
    zero.collect(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::domain::{Integers, PrimeField, Rationals};
    use num_bigint::BigInt;

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    fn zpoly(terms: &[(&[u32], i64)]) -> SparsePoly<Integers> {
        SparsePoly::from_terms(
            xy(),
            Integers,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    fn f2poly(terms: &[&[u32]]) -> SparsePoly<PrimeField> {
        let f2 = PrimeField::new(2).unwrap();
        SparsePoly::from_terms(xy(), f2, terms.iter().map(|e| (e.to_vec(), 1))).unwrap()
    }

    #[test]
    fn additive_identity() {
        let a = zpoly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let z = SparsePoly::zero(xy(), Integers);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn characteristic_two_cancels() {
        let x = f2poly(&[&[1, 0]]);
        assert!(x.add(&x).unwrap().is_zero());
    }

    #[test]
    fn integer_cancellation() {
        let a = zpoly(&[(&[2, 0], 1), (&[0, 1], 3)]);
        let b = zpoly(&[(&[0, 1], -3)]);
        assert_eq!(a.add(&b).unwrap(), zpoly(&[(&[2, 0], 1)]));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = zpoly(&[(&[1, 0], 1)]);
        let b = SparsePoly::from_terms(
            vars(&["y", "x"]),
            Integers,
            vec![(vec![1], BigInt::from(1))],
        )
        .unwrap();
        assert!(matches!(a.add(&b), Err(FglError::Structural(_))));
        let f3 = PrimeField::new(3).unwrap();
        let c = SparsePoly::one(xy(), f3);
        let d = SparsePoly::one(xy(), PrimeField::new(5).unwrap());
        assert!(c.mul(&d, &TruncationPolicy::none()).is_err());
    }

    #[test]
    fn freshmans_dream_in_f2() {
        let s = f2poly(&[&[1, 0], &[0, 1]]);
        let sq = s.mul(&s, &TruncationPolicy::none()).unwrap();
        assert_eq!(sq, f2poly(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn cap_drops_y_squared() {
        let s = zpoly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let t = TruncationPolicy::none().with_cap("y", 2);
        let sq = s.mul(&s, &t).unwrap();
        assert_eq!(sq, zpoly(&[(&[2, 0], 1), (&[1, 1], 2)]));
    }

    #[test]
    fn pow_edge_cases() {
        let f3 = PrimeField::new(3).unwrap();
        let s = SparsePoly::from_terms(xy(), f3, vec![(vec![1, 0], 1), (vec![0, 1], 1)]).unwrap();
        let none = TruncationPolicy::none();
        assert_eq!(s.pow(0, &none), SparsePoly::one(xy(), f3));
        let cube = s.pow(3, &none);
        let frob =
            SparsePoly::from_terms(xy(), f3, vec![(vec![3, 0], 1), (vec![0, 3], 1)]).unwrap();
        assert_eq!(cube, frob);
        let m = f2poly(&[&[1, 1]]);
        assert_eq!(m.pow(2, &none), f2poly(&[&[2, 2]]));
    }

    #[test]
    fn substitute_simple() {
        let ab = vars(&["a", "b"]);
        let tmpl = SparsePoly::from_terms(
            ab.clone(),
            Integers,
            vec![(vec![1, 0], BigInt::from(1)), (vec![0, 1], BigInt::from(1))],
        )
        .unwrap();
        let mut asg = BTreeMap::new();
        asg.insert("a".to_string(), zpoly(&[(&[1, 0], 1), (&[0, 1], 1)]));
        asg.insert("b".to_string(), zpoly(&[(&[1, 1], 1)]));
        let got = tmpl.substitute(&asg, &TruncationPolicy::none()).unwrap();
        assert_eq!(got, zpoly(&[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]));

        let prod =
            SparsePoly::from_terms(ab, Integers, vec![(vec![1, 1], BigInt::from(1))]).unwrap();
        asg.insert("a".to_string(), zpoly(&[(&[1, 0], 1)]));
        asg.insert("b".to_string(), SparsePoly::zero(xy(), Integers));
        assert!(prod
            .substitute(&asg, &TruncationPolicy::none())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn substitute_requires_every_variable() {
        let tmpl = SparsePoly::var(vars(&["a", "b"]), Integers, "a").unwrap();
        let mut asg = BTreeMap::new();
        asg.insert("a".to_string(), zpoly(&[(&[1, 0], 1)]));
        assert!(matches!(
            tmpl.substitute(&asg, &TruncationPolicy::none()),
            Err(FglError::Structural(_))
        ));
    }

    /// P_2 template a + b + a^2 b^2 over F_2 against a direct expansion
    /// written out by hand for three assignments.
    #[test]
    fn substitute_matches_direct_expansion_grid() {
        let f2 = PrimeField::new(2).unwrap();
        let ab = vars(&["a", "b"]);
        let tmpl = SparsePoly::from_terms(
            ab,
            f2,
            vec![(vec![1, 0], 1), (vec![0, 1], 1), (vec![2, 2], 1)],
        )
        .unwrap();
        let none = TruncationPolicy::none();
        let cases: Vec<(Vec<&[u32]>, Vec<&[u32]>, Vec<&[u32]>)> = vec![
            // a = x, b = y: x + y + x^2y^2
            (
                vec![&[1, 0]],
                vec![&[0, 1]],
                vec![&[1, 0], &[0, 1], &[2, 2]],
            ),
            // a = x + y, b = xy: x + y + xy + (x^2 + y^2)x^2y^2
            (
                vec![&[1, 0], &[0, 1]],
                vec![&[1, 1]],
                vec![&[1, 0], &[0, 1], &[1, 1], &[4, 2], &[2, 4]],
            ),
            // a = x, b = x: 2x + x^4 = x^4
            (vec![&[1, 0]], vec![&[1, 0]], vec![&[4, 0]]),
        ];
        for (a, b, want) in cases {
            let mut asg = BTreeMap::new();
            asg.insert("a".to_string(), f2poly(&a));
            asg.insert("b".to_string(), f2poly(&b));
            assert_eq!(tmpl.substitute(&asg, &none).unwrap(), f2poly(&want));
        }
    }

    #[test]
    fn map_domain_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let w2 = zpoly(&[(&[3, 1], -1), (&[2, 2], -2), (&[1, 3], -1)]);
        assert_eq!(w2.map_domain(&f2).unwrap(), f2poly(&[&[3, 1], &[1, 3]]));
        assert!(SparsePoly::zero(xy(), Integers)
            .map_domain(&f2)
            .unwrap()
            .is_zero());

        let f3 = PrimeField::new(3).unwrap();
        let half_x = SparsePoly::from_terms(
            xy(),
            Rationals,
            vec![(vec![1, 0], Rationals.parse("1/2").unwrap())],
        )
        .unwrap();
        let got = half_x.map_domain(&f3).unwrap();
        assert_eq!(got.coeff(&[1, 0]), 2);
        assert!(matches!(
            half_x.map_domain(&f2),
            Err(FglError::Integrality { .. })
        ));
    }

    #[test]
    fn embed_and_swap() {
        let p = zpoly(&[(&[2, 1], 5)]);
        let q = p.embed(vars(&["u", "x", "y"]), &[2, 0]).unwrap();
        assert_eq!(q.coeff(&[1, 0, 2]), BigInt::from(5));
        assert_eq!(p.swap_vars(0, 1).coeff(&[1, 2]), BigInt::from(5));
    }
}
