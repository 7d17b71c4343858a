//! Canonical JSON and text forms of [`SparsePoly`].
//!
//! JSON:
//!
//! ```text
//! {"vars":["x","y"],"domain":{"kind":"fp","p":2},"terms":[{"e":[1],"c":"1"},{"e":[0,1],"c":"1"}]}
//! ```
//!
//! Terms appear in graded-lex order; exponent vectors drop trailing zeros and
//! coefficients are decimal strings (`"num/den"` over Q). The text form lists
//! the same terms in the same order, e.g. `x^3*y + x*y^3` or `x - 1/2*x^4`.

use serde::{Deserialize, Serialize};

use super::domain::{CoefficientRing, Domain, Integers, PrimeField, Rationals};
use super::poly::{SparsePoly, Vars};
use crate::error::{FglError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub domain: Domain,
    pub terms: Vec<TermJson>,
}

impl<R: CoefficientRing> SparsePoly<R> {
    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            vars: self.vars().to_vec(),
            domain: self.ring().descriptor(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    e: m.trimmed().to_vec(),
                    c: self.ring().format(c),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("polynomial JSON is serializable")
    }

    /// Reads a polynomial whose declared domain must match `ring`.
    pub fn from_json_value(v: &PolyJson, ring: R) -> Result<Self> {
        if v.domain != ring.descriptor() {
            return Err(FglError::Parse(format!(
                "domain {} does not match expected {}",
                v.domain,
                ring.descriptor()
            )));
        }
        let vars: Vars = v.vars.iter().cloned().collect();
        let mut terms = Vec::with_capacity(v.terms.len());
        for t in &v.terms {
            let c = ring.parse(&t.c)?;
            if ring.is_zero(&c) {
                return Err(FglError::Parse("zero coefficient in canonical form".into()));
            }
            terms.push((t.e.clone(), c));
        }
        let n = terms.len();
        let p = SparsePoly::from_terms(vars, ring, terms)
            .map_err(|e| FglError::Parse(e.to_string()))?;
        if p.len() != n {
            return Err(FglError::Parse("repeated exponent vector".into()));
        }
        Ok(p)
    }

    pub fn from_json(s: &str, ring: R) -> Result<Self> {
        let v: PolyJson = serde_json::from_str(s).map_err(|e| FglError::Parse(e.to_string()))?;
        Self::from_json_value(&v, ring)
    }

    /// Human-readable form, e.g. `x + y + x^2*y^2`.
    pub fn to_text(&self) -> String {
        let ring = self.ring();
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = ring.is_negative(c);
            let mag = if negative { ring.neg(c) } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono: Vec<String> = self
                .vars()
                .iter()
                .zip(m.exponents())
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let unit = mag == ring.one();
            match (mono.is_empty(), unit) {
                (true, _) => out.push_str(&ring.format(&mag)),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => {
                    out.push_str(&ring.format(&mag));
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the text form produced by [`SparsePoly::to_text`].
    pub fn from_text(s: &str, vars: Vars, ring: R) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(SparsePoly::zero(vars, ring));
        }
        if compact.is_empty() {
            return Err(FglError::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut cur = String::new();
        for ch in compact.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                } else if !pieces.is_empty() || negative {
                    return Err(FglError::Parse(format!("dangling sign in {s:?}")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(FglError::Parse(format!("trailing sign in {s:?}")));
        }
        pieces.push((negative, cur));

        let mut terms = Vec::new();
        for (neg, body) in pieces {
            let mut coeff = ring.one();
            let mut exps = vec![0u32; vars.len()];
            for factor in body.split('*') {
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff = ring.mul(&coeff, &ring.parse(factor)?);
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| FglError::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| FglError::Parse(format!("unknown variable {name:?}")))?;
                exps[idx] += e;
            }
            if neg {
                coeff = ring.neg(&coeff);
            }
            terms.push((exps, coeff));
        }
        SparsePoly::from_terms(vars, ring, terms)
    }
}

/// A polynomial over whichever domain its JSON declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPoly {
    Fp(SparsePoly<PrimeField>),
    Z(SparsePoly<Integers>),
    Q(SparsePoly<Rationals>),
}

impl AnyPoly {
    pub fn from_json(s: &str) -> Result<Self> {
        let v: PolyJson = serde_json::from_str(s).map_err(|e| FglError::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &PolyJson) -> Result<Self> {
        Ok(match v.domain {
            Domain::Fp { p } => AnyPoly::Fp(SparsePoly::from_json_value(
                v,
                PrimeField::new(p).map_err(|e| FglError::Parse(e.to_string()))?,
            )?),
            Domain::Z => AnyPoly::Z(SparsePoly::from_json_value(v, Integers)?),
            Domain::Q => AnyPoly::Q(SparsePoly::from_json_value(v, Rationals)?),
        })
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyPoly::Fp(p) => p.to_text(),
            AnyPoly::Z(p) => p.to_text(),
            AnyPoly::Q(p) => p.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::vars;
    use num_bigint::BigInt;

    #[test]
    fn text_form_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let xy = vars(&["x", "y"]);
        let p =
            SparsePoly::from_terms(xy.clone(), f2, vec![(vec![1, 3], 1), (vec![3, 1], 1)]).unwrap();
        assert_eq!(p.to_text(), "x^3*y + x*y^3");

        let w2 = SparsePoly::from_terms(
            xy.clone(),
            Integers,
            vec![
                (vec![3, 1], BigInt::from(-1)),
                (vec![2, 2], BigInt::from(-2)),
                (vec![1, 3], BigInt::from(-1)),
            ],
        )
        .unwrap();
        assert_eq!(w2.to_text(), "-x^3*y - 2*x^2*y^2 - x*y^3");
        assert_eq!(SparsePoly::zero(xy, Integers).to_text(), "0");
    }

    #[test]
    fn json_form_example() {
        let f2 = PrimeField::new(2).unwrap();
        let p = SparsePoly::from_terms(
            vars(&["x", "y"]),
            f2,
            vec![(vec![0, 1], 1), (vec![1, 0], 1), (vec![2, 2], 1)],
        )
        .unwrap();
        assert_eq!(
            p.to_json(),
            r#"{"vars":["x","y"],"domain":{"kind":"fp","p":2},"terms":[{"e":[1],"c":"1"},{"e":[0,1],"c":"1"},{"e":[2,2],"c":"1"}]}"#
        );
        assert_eq!(SparsePoly::from_json(&p.to_json(), f2).unwrap(), p);
        assert!(SparsePoly::from_json(&p.to_json(), PrimeField::new(3).unwrap()).is_err());
    }

    #[test]
    fn rational_text_roundtrip() {
        let x = vars(&["x"]);
        let p = SparsePoly::from_terms(
            x.clone(),
            Rationals,
            vec![
                (vec![1], Rationals.parse("1").unwrap()),
                (vec![4], Rationals.parse("-1/2").unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(p.to_text(), "x - 1/2*x^4");
        assert_eq!(
            SparsePoly::from_text(&p.to_text(), x, Rationals).unwrap(),
            p
        );
    }

    #[test]
    fn rejects_malformed_text() {
        let xy = vars(&["x", "y"]);
        assert!(SparsePoly::from_text("x + + y", xy.clone(), Integers).is_err());
        assert!(SparsePoly::from_text("x + z", xy.clone(), Integers).is_err());
        assert!(SparsePoly::from_text("x +", xy, Integers).is_err());
    }

    #[test]
    fn any_poly_dispatches_on_domain() {
        let s = r#"{"vars":["x"],"domain":{"kind":"q"},"terms":[{"e":[1],"c":"1/3"}]}"#;
        assert!(matches!(AnyPoly::from_json(s).unwrap(), AnyPoly::Q(_)));
        let bad = r#"{"vars":["x"],"domain":{"kind":"fp","p":4},"terms":[]}"#;
        assert!(AnyPoly::from_json(bad).is_err());
    }
}
