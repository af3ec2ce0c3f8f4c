use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasishuffle::evaluate;
use crate::wordsum::WordSum;

/// Where a relation comes from. Only `NumericKernel` relations are unproven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Difference of two length-one expressions for the same derivative.
    DerivationSplit,
    /// Leibniz rule applied to a product of two brackets.
    Leibniz,
    /// Identity between modular forms.
    Modular,
    /// Quasi-shuffle product of a proven relation with a bracket.
    RelationProduct,
    /// Derivative of a proven relation.
    RelationDerivative,
    /// Kernel vector of a coefficient matrix.
    NumericKernel,
}

impl Provenance {
    pub fn status(self) -> Status {
        match self {
            Provenance::NumericKernel => Status::Candidate,
            _ => Status::Proven,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("provenance serializes");
        write!(f, "{}", s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proven,
    Candidate,
}

/// A word sum asserted to vanish as a `q`-series, normalized so that its
/// largest term (canonical order) has coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    body: WordSum,
    provenance: Provenance,
    verified_order: usize,
}

impl Relation {
    /// A relation with a derivation behind it. Checks the body against the
    /// brackets through `q^order` and refuses kernel provenance.
    pub fn proven(body: &WordSum, provenance: Provenance, order: usize) -> Result<Relation> {
        if provenance.status() != Status::Proven {
            return Err(Error::Unsupported(format!(
                "{provenance} relations cannot be marked proven"
            )));
        }
        Self::checked(body, provenance, order)
    }

    /// A relation observed numerically; it stays a candidate.
    pub fn candidate(body: &WordSum, order: usize) -> Result<Relation> {
        Self::checked(body, Provenance::NumericKernel, order)
    }

    fn checked(body: &WordSum, provenance: Provenance, order: usize) -> Result<Relation> {
        if body.is_zero() {
            return Err(Error::Verification("the zero word sum is not a relation".into()));
        }
        let s = evaluate(body, order);
        if let Some(n) = s.valuation() {
            return Err(Error::Verification(format!(
                "{provenance} relation {body} has nonzero coefficient at q^{n}"
            )));
        }
        Ok(Relation {
            body: body.normalized(),
            provenance,
            verified_order: order,
        })
    }

    pub fn body(&self) -> &WordSum {
        &self.body
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn status(&self) -> Status {
        self.provenance.status()
    }

    pub fn verified_order(&self) -> usize {
        self.verified_order
    }

    pub fn weight(&self) -> u32 {
        self.body.weight()
    }

    pub fn max_length(&self) -> usize {
        self.body.max_length()
    }

    /// Re-evaluates the body through `q^order`.
    pub fn holds_to(&self, order: usize) -> bool {
        evaluate(&self.body, order).is_zero()
    }

    /// Same relation up to a nonzero scalar.
    pub fn equivalent_to(&self, other: &WordSum) -> bool {
        self.body == other.normalized()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RelationJson::from(self)).expect("relations serialize")
    }

    /// Reads a relation back. The body is re-verified at its recorded order.
    pub fn from_json(v: &serde_json::Value) -> Result<Relation> {
        let raw: RelationJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let body = WordSum::from_json(&serde_json::json!({ "terms": raw.terms }))?;
        match raw.provenance {
            Provenance::NumericKernel => Relation::candidate(&body, raw.verified_order),
            p => Relation::proven(&body, p, raw.verified_order),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    weight: u32,
    max_length: usize,
    terms: serde_json::Value,
    provenance: Provenance,
    verified_order: usize,
}

impl From<&Relation> for RelationJson {
    fn from(r: &Relation) -> Self {
        RelationJson {
            weight: r.weight(),
            max_length: r.max_length(),
            terms: r.body.to_json()["terms"].clone(),
            provenance: r.provenance,
            verified_order: r.verified_order,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0  ({}, checked to q^{})", self.body, self.provenance, self.verified_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::comp;

    fn rel4() -> WordSum {
        WordSum::parse("[4] - 2[2,2] + 2[3,1] - [3] + 1/3[2]").unwrap()
    }

    #[test]
    fn proven_and_candidate() {
        let r = Relation::proven(&rel4(), Provenance::DerivationSplit, 60).unwrap();
        assert_eq!(r.status(), Status::Proven);
        assert_eq!(r.body().coeff(&comp![3, 1]), int(1));
        assert!(r.equivalent_to(&rel4()));
        assert!(Relation::proven(&rel4(), Provenance::NumericKernel, 60).is_err());
        assert_eq!(Relation::candidate(&rel4(), 60).unwrap().status(), Status::Candidate);
    }

    #[test]
    fn rejects_false_relation() {
        let bad = WordSum::parse("[4] - [3]").unwrap();
        assert!(matches!(
            Relation::proven(&bad, Provenance::Leibniz, 30),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let r = Relation::proven(&rel4(), Provenance::DerivationSplit, 40).unwrap();
        let v = r.to_json();
        assert_eq!(v["provenance"], "derivation-split");
        assert_eq!(v["weight"], 4);
        assert_eq!(v["max_length"], 2);
        assert_eq!(Relation::from_json(&v).unwrap(), r);
    }
}
