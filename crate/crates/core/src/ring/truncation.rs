use std::collections::BTreeMap;

use super::monomial::Monomial;

/// Exclusive exponent bounds applied to every product.
///
/// A monomial survives when each capped variable's exponent is below its cap
/// and, if set, its total degree is below the total-degree cap. Caps naming a
/// variable absent from the ambient variable list are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruncationPolicy {
    per_variable_caps: BTreeMap<String, u64>,
    total_degree_cap: Option<u64>,
}

impl TruncationPolicy {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_cap(mut self, var: impl Into<String>, cap: u64) -> Self {
        let var = var.into();
        let cap = match self.per_variable_caps.get(&var) {
            Some(&old) => old.min(cap),
            None => cap,
        };
        self.per_variable_caps.insert(var, cap);
        self
    }

    pub fn with_total_degree(mut self, cap: u64) -> Self {
        self.total_degree_cap = Some(self.total_degree_cap.map_or(cap, |c| c.min(cap)));
        self
    }

    pub fn cap(&self, var: &str) -> Option<u64> {
        self.per_variable_caps.get(var).copied()
    }

    pub fn total_degree_cap(&self) -> Option<u64> {
        self.total_degree_cap
    }

    pub fn is_unbounded(&self) -> bool {
        self.per_variable_caps.is_empty() && self.total_degree_cap.is_none()
    }

    pub(crate) fn resolve(&self, vars: &[String]) -> ResolvedPolicy {
        ResolvedPolicy {
            caps: vars.iter().map(|v| self.cap(v)).collect(),
            total: self.total_degree_cap,
        }
    }
}

/// A policy bound to a concrete variable order.
#[derive(Debug, Clone)]
pub(crate) struct ResolvedPolicy {
    caps: Vec<Option<u64>>,
    total: Option<u64>,
}

impl ResolvedPolicy {
    pub fn admits(&self, m: &Monomial) -> bool {
        let within_caps = self
            .caps
            .iter()
            .zip(m.exponents())
            .all(|(cap, &e)| cap.is_none_or(|c| (e as u64) < c));
        within_caps && self.total.is_none_or(|t| m.total_degree() < t)
    }

    /// Cheap pre-check on a product before the exponent vector is built.
    pub fn admits_product(&self, a: &Monomial, b: &Monomial) -> bool {
        for (i, cap) in self.caps.iter().enumerate() {
            if let Some(c) = cap {
                if (a.exp(i) as u64 + b.exp(i) as u64) >= *c {
                    return false;
                }
            }
        }
        self.total
            .is_none_or(|t| a.total_degree() + b.total_degree() < t)
    }
}
