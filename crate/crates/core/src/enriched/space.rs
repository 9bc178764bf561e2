use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::report::{ValidationReport, Violation};
use super::wire::{Payload, SpaceDoc};
use super::EnrichedError;
use crate::valuation::{VValue, Valuation};

/// A finite V-enriched space: elements with a V-valued metric.
///
/// Construction checks dimensions and carriers only. The reflexivity and
/// transitivity axioms are reported by [`VSpace::check`] so that authoring
/// errors can be listed rather than rejected one at a time.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SpaceDoc", into = "SpaceDoc")]
pub struct VSpace {
    valuation: Valuation,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    metric: Vec<VValue>,
}

impl PartialEq for VSpace {
    fn eq(&self, other: &Self) -> bool {
        self.valuation == other.valuation && self.elements == other.elements && self.metric == other.metric
    }
}

pub(crate) fn index_elements(elements: &[String]) -> Result<HashMap<String, usize>, EnrichedError> {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(EnrichedError::DuplicateElement(e.clone()));
        }
    }
    Ok(index)
}

impl VSpace {
    pub fn new(valuation: Valuation, elements: Vec<String>, rows: Vec<Vec<VValue>>) -> Result<Self, EnrichedError> {
        let n = elements.len();
        if rows.len() != n {
            return Err(EnrichedError::DimensionMismatch { expected: n, found: rows.len() });
        }
        let mut metric = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(EnrichedError::DimensionMismatch { expected: n, found: row.len() });
            }
            for v in row {
                valuation.check(v)?;
                metric.push(v);
            }
        }
        let index = index_elements(&elements)?;
        Ok(VSpace { valuation, elements, index, metric })
    }

    pub fn from_fn(
        valuation: Valuation,
        elements: Vec<String>,
        mut f: impl FnMut(usize, usize) -> VValue,
    ) -> Result<Self, EnrichedError> {
        let n = elements.len();
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(valuation, elements, rows)
    }

    /// The discrete space: `e` on the diagonal, bottom elsewhere.
    pub fn discrete(valuation: Valuation, elements: Vec<String>) -> Result<Self, EnrichedError> {
        Self::from_fn(valuation, elements, |i, j| if i == j { valuation.unit() } else { valuation.bottom() })
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize, EnrichedError> {
        self.index_of(name).ok_or_else(|| EnrichedError::UnknownElement(name.to_string()))
    }

    pub fn metric(&self, i: usize, j: usize) -> VValue {
        self.metric[i * self.len() + j]
    }

    pub fn distance(&self, x: &str, y: &str) -> Result<VValue, EnrichedError> {
        Ok(self.metric(self.require(x)?, self.require(y)?))
    }

    pub fn row(&self, i: usize) -> &[VValue] {
        let n = self.len();
        &self.metric[i * n..(i + 1) * n]
    }

    /// Lists every failed reflexivity and transitivity instance.
    pub fn check(&self) -> ValidationReport {
        let v = self.valuation;
        let n = self.len();
        let mut report = ValidationReport::default();
        for x in 0..n {
            let d = self.metric(x, x);
            if !v.leq_raw(v.unit(), d) {
                report.push(Violation::Reflexivity { element: self.elements[x].clone(), value: d });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.metric(a, b);
                for c in 0..n {
                    let composite = v.tensor_raw(ab, self.metric(b, c));
                    let direct = self.metric(a, c);
                    if !v.leq_raw(composite, direct) {
                        report.push(Violation::Transitivity {
                            x1: self.elements[a].clone(),
                            x2: self.elements[b].clone(),
                            x3: self.elements[c].clone(),
                            composite,
                            direct,
                        });
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_valid()
    }

    /// Lists every pair whose metric is not symmetric (within tolerance).
    pub fn check_symmetry(&self) -> ValidationReport {
        let v = self.valuation;
        let mut report = ValidationReport::default();
        for a in 0..self.len() {
            for b in (a + 1)..self.len() {
                let (forward, backward) = (self.metric(a, b), self.metric(b, a));
                if !v.equiv_raw(forward, backward) {
                    report.push(Violation::Symmetry {
                        x1: self.elements[a].clone(),
                        x2: self.elements[b].clone(),
                        forward,
                        backward,
                    });
                }
            }
        }
        report
    }

    /// The opposite space: transposed metric.
    pub fn opposite(&self) -> VSpace {
        let n = self.len();
        let metric = (0..n * n).map(|k| self.metric(k % n, k / n)).collect();
        VSpace { valuation: self.valuation, elements: self.elements.clone(), index: self.index.clone(), metric }
    }

    /// `μ_sym(x1, x2) = μ(x1, x2) ⊗ μ(x2, x1)`.
    pub fn symmetrize(&self) -> ApproximationSpace {
        let n = self.len();
        let v = self.valuation;
        let metric = (0..n * n).map(|k| v.tensor_raw(self.metric(k / n, k % n), self.metric(k % n, k / n))).collect();
        ApproximationSpace(Arc::new(VSpace {
            valuation: v,
            elements: self.elements.clone(),
            index: self.index.clone(),
            metric,
        }))
    }

    pub(crate) fn to_doc(&self) -> SpaceDoc {
        let n = self.len();
        SpaceDoc {
            valuation: self.valuation.kind(),
            elements: self.elements.clone(),
            matrix: (0..n).map(|i| self.row(i).iter().map(|&v| Payload::from(v)).collect()).collect(),
        }
    }
}

impl From<VSpace> for SpaceDoc {
    fn from(s: VSpace) -> Self {
        s.to_doc()
    }
}

impl TryFrom<SpaceDoc> for VSpace {
    type Error = EnrichedError;

    fn try_from(doc: SpaceDoc) -> Result<Self, Self::Error> {
        let valuation = Valuation::new(doc.valuation);
        let rows = doc
            .matrix
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.into_value(valuation)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        VSpace::new(valuation, doc.elements, rows)
    }
}

pub(crate) fn same_space(a: &Arc<VSpace>, b: &Arc<VSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A symmetric V-space; its metric is an indiscernibility measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationSpace(Arc<VSpace>);

impl ApproximationSpace {
    /// Accepts a space only if it is symmetric. Axiom violations are
    /// reported as well, so the error carries a complete report.
    pub fn new(space: Arc<VSpace>) -> Result<Self, EnrichedError> {
        let mut report = space.check_symmetry();
        if !report.is_valid() {
            report.extend(space.check());
            return Err(EnrichedError::Asymmetric(report));
        }
        Ok(ApproximationSpace(space))
    }

    pub fn space(&self) -> &Arc<VSpace> {
        &self.0
    }
}

impl std::ops::Deref for ApproximationSpace {
    type Target = VSpace;

    fn deref(&self) -> &VSpace {
        &self.0
    }
}
