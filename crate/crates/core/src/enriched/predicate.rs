use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::report::{ValidationReport, Violation};
use super::space::{same_space, ApproximationSpace, VSpace};
use super::wire::{Payload, PredicateDoc};
use super::EnrichedError;
use crate::valuation::VValue;

/// A V-valued characteristic vector over a space. Enriched predicates
/// satisfy `φ(x1) ⊗ μ(x1, x2) ⪯ φ(x2)`; see [`VPredicate::check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PredicateDoc", into = "PredicateDoc")]
pub struct VPredicate {
    space: Arc<VSpace>,
    values: Vec<VValue>,
}

impl VPredicate {
    pub fn new(space: Arc<VSpace>, values: Vec<VValue>) -> Result<Self, EnrichedError> {
        if values.len() != space.len() {
            return Err(EnrichedError::DimensionMismatch { expected: space.len(), found: values.len() });
        }
        let v = space.valuation();
        values.iter().try_for_each(|&x| v.check(x))?;
        Ok(VPredicate { space, values })
    }

    pub(crate) fn new_unchecked(space: Arc<VSpace>, values: Vec<VValue>) -> Self {
        debug_assert_eq!(space.len(), values.len());
        VPredicate { space, values }
    }

    pub fn constant(space: Arc<VSpace>, value: VValue) -> Result<Self, EnrichedError> {
        let n = space.len();
        Self::new(space, vec![value; n])
    }

    pub fn space(&self) -> &Arc<VSpace> {
        &self.space
    }

    pub fn values(&self) -> &[VValue] {
        &self.values
    }

    pub fn value(&self, i: usize) -> VValue {
        self.values[i]
    }

    pub fn get(&self, name: &str) -> Result<VValue, EnrichedError> {
        Ok(self.values[self.space.require(name)?])
    }

    /// Lists the pairs that break the metric constraint.
    pub fn check(&self) -> ValidationReport {
        let s = &self.space;
        let v = s.valuation();
        let mut report = ValidationReport::default();
        for a in 0..s.len() {
            for b in 0..s.len() {
                let transported = v.tensor_raw(self.values[a], s.metric(a, b));
                if !v.leq_raw(transported, self.values[b]) {
                    report.push(Violation::Predicate {
                        x1: s.elements()[a].clone(),
                        x2: s.elements()[b].clone(),
                        transported,
                        value: self.values[b],
                    });
                }
            }
        }
        report
    }

    fn require_same_space(&self, other: &VPredicate) -> Result<(), EnrichedError> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(EnrichedError::SpaceMismatch("predicates live on different spaces"))
        }
    }

    /// Pointwise `⪯`.
    pub fn leq(&self, other: &VPredicate) -> Result<bool, EnrichedError> {
        self.require_same_space(other)?;
        let v = self.space.valuation();
        Ok(self.values.iter().zip(&other.values).all(|(&a, &b)| v.leq_raw(a, b)))
    }

    /// Pointwise equivalence within tolerance.
    pub fn equiv(&self, other: &VPredicate) -> Result<bool, EnrichedError> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// The power-space metric `φ ⇒ ψ = ⋀_x φ(x) ⇒ ψ(x)`.
    pub fn power_metric(&self, other: &VPredicate) -> Result<VValue, EnrichedError> {
        self.require_same_space(other)?;
        let v = self.space.valuation();
        Ok(v.meet_raw(self.values.iter().zip(&other.values).map(|(&a, &b)| v.implies_raw(a, b))))
    }
}

/// `y(x) = μ(x, −)`.
pub fn yoneda(space: &Arc<VSpace>, x: &str) -> Result<VPredicate, EnrichedError> {
    let i = space.require(x)?;
    Ok(VPredicate::new_unchecked(space.clone(), space.row(i).to_vec()))
}

/// Smallest enriched predicate above a raw vector:
/// `φ̄(x2) = ⋁_{x1} raw(x1) ⊗ μ(x1, x2)`.
pub fn predicate_closure(raw: Vec<VValue>, space: &Arc<VSpace>) -> Result<VPredicate, EnrichedError> {
    let raw = VPredicate::new(space.clone(), raw)?;
    let v = space.valuation();
    let n = space.len();
    let values = (0..n).map(|b| v.join_raw((0..n).map(|a| v.tensor_raw(raw.values[a], space.metric(a, b))))).collect();
    Ok(VPredicate::new_unchecked(space.clone(), values))
}

fn require_on(p: &VPredicate, s: &ApproximationSpace) -> Result<(), EnrichedError> {
    if same_space(p.space(), s.space()) {
        Ok(())
    } else {
        Err(EnrichedError::SpaceMismatch("predicate is not over the approximation space"))
    }
}

/// `lower(φ)(x) = ⋀_{x'} μ(x, x') ⇒ φ(x')`.
pub fn lower_approx(p: &VPredicate, s: &ApproximationSpace) -> Result<VPredicate, EnrichedError> {
    require_on(p, s)?;
    let v = s.valuation();
    let n = s.len();
    let values = (0..n).map(|x| v.meet_raw((0..n).map(|y| v.implies_raw(s.metric(x, y), p.values[y])))).collect();
    Ok(VPredicate::new_unchecked(s.space().clone(), values))
}

/// `upper(φ)(x) = ⋁_{x'} μ(x, x') ⊗ φ(x')`.
pub fn upper_approx(p: &VPredicate, s: &ApproximationSpace) -> Result<VPredicate, EnrichedError> {
    require_on(p, s)?;
    let v = s.valuation();
    let n = s.len();
    let values = (0..n).map(|x| v.join_raw((0..n).map(|y| v.tensor_raw(s.metric(x, y), p.values[y])))).collect();
    Ok(VPredicate::new_unchecked(s.space().clone(), values))
}

impl From<VPredicate> for PredicateDoc {
    fn from(p: VPredicate) -> Self {
        PredicateDoc {
            valuation: p.space.valuation().kind(),
            space: p.space.to_doc(),
            values: p.values.into_iter().map(Payload::from).collect(),
        }
    }
}

impl TryFrom<PredicateDoc> for VPredicate {
    type Error = EnrichedError;

    fn try_from(doc: PredicateDoc) -> Result<Self, Self::Error> {
        let space = Arc::new(VSpace::try_from(doc.space)?);
        if space.valuation().kind() != doc.valuation {
            return Err(EnrichedError::SpaceMismatch("predicate valuation differs from its space"));
        }
        let v = space.valuation();
        let values = doc.values.into_iter().map(|p| p.into_value(v)).collect::<Result<Vec<_>, _>>()?;
        VPredicate::new(space, values)
    }
}
