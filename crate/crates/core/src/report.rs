//! Pass/fail records for identity checks, with a first-difference witness.

use serde::{Deserialize, Serialize};

use crate::poly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub monomial: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Exact comparison of two polynomials in the same layout.
    pub fn equal(name: impl Into<String>, left: &SparsePoly, right: &SparsePoly) -> Self {
        let name = name.into();
        match first_difference(left, right) {
            None => Check::pass(name),
            Some(w) => Check {
                name,
                pass: false,
                witness: Some(w),
                detail: None,
            },
        }
    }
}

/// The graded-lex smallest monomial where `left` and `right` differ.
pub fn first_difference(left: &SparsePoly, right: &SparsePoly) -> Option<Witness> {
    if left.vars() != right.vars() {
        return Some(Witness {
            monomial: "<layout>".into(),
            left: left.vars().to_string(),
            right: right.vars().to_string(),
        });
    }
    let diff = left.sub(right).expect("same layout");
    let (m, _) = diff.terms().next()?;
    Some(Witness {
        monomial: SparsePoly::render_monomial(&left.vars(), m),
        left: left.coeff(m).to_string(),
        right: right.coeff(m).to_string(),
    })
}

/// Fails the first time a check fails; convenient for report assembly.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::varset::VarSet;

    #[test]
    fn witness_is_lowest_differing_monomial() {
        let v = VarSet::z(2);
        let a = parse_poly("z1^3 + 2*z2 + 1", v).unwrap();
        let b = parse_poly("z1^3 + 3*z2 + 5*z1^2 + 1", v).unwrap();
        let w = first_difference(&a, &b).unwrap();
        assert_eq!(w.monomial, "z2");
        assert_eq!((w.left.as_str(), w.right.as_str()), ("2", "3"));
        assert!(first_difference(&a, &a).is_none());
        assert!(!Check::equal("x", &a, &b).pass);
    }
}
