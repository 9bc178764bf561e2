use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::predicate::VPredicate;
use super::report::{ValidationReport, Violation};
use super::space::{same_space, VSpace};
use super::wire::{Payload, RelationDoc};
use super::EnrichedError;
use crate::valuation::VValue;

/// A V-relation `X ⇸ Y`: a `|X| × |Y|` matrix of values.
///
/// Entries supplied by callers are not closed automatically; use
/// [`VRelation::check_closure`] to list bimodule-closure failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RelationDoc", into = "RelationDoc")]
pub struct VRelation {
    source: Arc<VSpace>,
    target: Arc<VSpace>,
    entries: Vec<VValue>,
}

impl VRelation {
    pub fn new(source: Arc<VSpace>, target: Arc<VSpace>, rows: Vec<Vec<VValue>>) -> Result<Self, EnrichedError> {
        if source.valuation() != target.valuation() {
            return Err(EnrichedError::ValuationMismatch { left: source.valuation(), right: target.valuation() });
        }
        if rows.len() != source.len() {
            return Err(EnrichedError::DimensionMismatch { expected: source.len(), found: rows.len() });
        }
        let v = source.valuation();
        let mut entries = Vec::with_capacity(source.len() * target.len());
        for row in rows {
            if row.len() != target.len() {
                return Err(EnrichedError::DimensionMismatch { expected: target.len(), found: row.len() });
            }
            for x in row {
                v.check(x)?;
                entries.push(x);
            }
        }
        Ok(VRelation { source, target, entries })
    }

    pub fn from_fn(
        source: Arc<VSpace>,
        target: Arc<VSpace>,
        mut f: impl FnMut(usize, usize) -> VValue,
    ) -> Result<Self, EnrichedError> {
        let rows = (0..source.len()).map(|i| (0..target.len()).map(|j| f(i, j)).collect()).collect();
        Self::new(source, target, rows)
    }

    pub(crate) fn from_entries_unchecked(source: Arc<VSpace>, target: Arc<VSpace>, entries: Vec<VValue>) -> Self {
        debug_assert_eq!(entries.len(), source.len() * target.len());
        VRelation { source, target, entries }
    }

    /// The metric of a space viewed as a relation `X ⇸ X`; the unit for
    /// composition of closed relations.
    pub fn identity(space: Arc<VSpace>) -> Self {
        let n = space.len();
        let entries = (0..n * n).map(|k| space.metric(k / n, k % n)).collect();
        VRelation { source: space.clone(), target: space, entries }
    }

    pub fn source(&self) -> &Arc<VSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VSpace> {
        &self.target
    }

    pub fn get(&self, i: usize, j: usize) -> VValue {
        self.entries[i * self.target.len() + j]
    }

    pub fn value(&self, x: &str, y: &str) -> Result<VValue, EnrichedError> {
        Ok(self.get(self.source.require(x)?, self.target.require(y)?))
    }

    pub fn row(&self, i: usize) -> &[VValue] {
        let m = self.target.len();
        &self.entries[i * m..(i + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[VValue]> {
        (0..self.source.len()).map(move |i| self.row(i))
    }

    /// Row `i` as a predicate on the target space.
    pub fn row_predicate(&self, i: usize) -> VPredicate {
        VPredicate::new_unchecked(self.target.clone(), self.row(i).to_vec())
    }

    /// Column `j` as a predicate on the source space.
    pub fn column_predicate(&self, j: usize) -> VPredicate {
        let values = (0..self.source.len()).map(|i| self.get(i, j)).collect();
        VPredicate::new_unchecked(self.source.clone(), values)
    }

    /// `(σ ∘ τ)(x, z) = ⋁_y σ(x, y) ⊗ τ(y, z)`.
    pub fn compose(&self, tau: &VRelation) -> Result<VRelation, EnrichedError> {
        if !same_space(&self.target, &tau.source) {
            return Err(EnrichedError::SpaceMismatch("composition needs a shared middle space"));
        }
        let v = self.source.valuation();
        let (nx, ny, nz) = (self.source.len(), self.target.len(), tau.target.len());
        let entries = (0..nx * nz)
            .map(|k| {
                let (x, z) = (k / nz, k % nz);
                v.join_raw((0..ny).map(|y| v.tensor_raw(self.get(x, y), tau.get(y, z))))
            })
            .collect();
        Ok(VRelation::from_entries_unchecked(self.source.clone(), tau.target.clone(), entries))
    }

    /// Residuation, the right adjoint of composition:
    /// `(σ ⊸ ρ)(y, z) = ⋀_x σ(x, y) ⇒ ρ(x, z)` for `σ: X ⇸ Y`, `ρ: X ⇸ Z`.
    pub fn residuate(&self, rho: &VRelation) -> Result<VRelation, EnrichedError> {
        if !same_space(&self.source, &rho.source) {
            return Err(EnrichedError::SpaceMismatch("residuation needs a shared source space"));
        }
        let v = self.source.valuation();
        let (nx, ny, nz) = (self.source.len(), self.target.len(), rho.target.len());
        let entries = (0..ny * nz)
            .map(|k| {
                let (y, z) = (k / nz, k % nz);
                v.meet_raw((0..nx).map(|x| v.implies_raw(self.get(x, y), rho.get(x, z))))
            })
            .collect();
        Ok(VRelation::from_entries_unchecked(self.target.clone(), rho.target.clone(), entries))
    }

    /// `τ^op: Y^op ⇸ X^op`.
    pub fn transpose(&self) -> VRelation {
        let (n, m) = (self.source.len(), self.target.len());
        let entries = (0..m * n).map(|k| self.get(k % n, k / n)).collect();
        VRelation::from_entries_unchecked(Arc::new(self.target.opposite()), Arc::new(self.source.opposite()), entries)
    }

    /// Entrywise `⪯`.
    pub fn leq(&self, other: &VRelation) -> Result<bool, EnrichedError> {
        if !same_space(&self.source, &other.source) || !same_space(&self.target, &other.target) {
            return Err(EnrichedError::SpaceMismatch("relations have different endpoints"));
        }
        let v = self.source.valuation();
        Ok(self.entries.iter().zip(&other.entries).all(|(&a, &b)| v.leq_raw(a, b)))
    }

    pub fn equiv(&self, other: &VRelation) -> Result<bool, EnrichedError> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// Bimodule closure: `μ ∘ τ ⪯ τ` and `τ ∘ ν ⪯ τ`, listing each
    /// offending witness.
    pub fn check_closure(&self) -> ValidationReport {
        let v = self.source.valuation();
        let (s, t) = (&self.source, &self.target);
        let mut report = ValidationReport::default();
        for x in 0..s.len() {
            for y in 0..t.len() {
                let direct = self.get(x, y);
                for via in 0..s.len() {
                    let composite = v.tensor_raw(s.metric(x, via), self.get(via, y));
                    if !v.leq_raw(composite, direct) {
                        report.push(Violation::LeftClosure {
                            x: s.elements()[x].clone(),
                            via: s.elements()[via].clone(),
                            y: t.elements()[y].clone(),
                            composite,
                            direct,
                        });
                    }
                }
                for via in 0..t.len() {
                    let composite = v.tensor_raw(self.get(x, via), t.metric(via, y));
                    if !v.leq_raw(composite, direct) {
                        report.push(Violation::RightClosure {
                            x: s.elements()[x].clone(),
                            via: t.elements()[via].clone(),
                            y: t.elements()[y].clone(),
                            composite,
                            direct,
                        });
                    }
                }
            }
        }
        report
    }
}

impl From<VRelation> for RelationDoc {
    fn from(r: VRelation) -> Self {
        RelationDoc {
            valuation: r.source.valuation().kind(),
            source: r.source.to_doc(),
            target: r.target.to_doc(),
            matrix: (0..r.source.len()).map(|i| r.row(i).iter().map(|&x| Payload::from(x)).collect()).collect(),
        }
    }
}

impl TryFrom<RelationDoc> for VRelation {
    type Error = EnrichedError;

    fn try_from(doc: RelationDoc) -> Result<Self, Self::Error> {
        let source = Arc::new(VSpace::try_from(doc.source)?);
        let target = Arc::new(VSpace::try_from(doc.target)?);
        let v = source.valuation();
        if v.kind() != doc.valuation {
            return Err(EnrichedError::SpaceMismatch("relation valuation differs from its spaces"));
        }
        let rows = doc
            .matrix
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.into_value(v)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        VRelation::new(source, target, rows)
    }
}

/// A function between the element sets of two V-spaces. It is a V-map
/// when [`VMap::check`] reports nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct VMap {
    source: Arc<VSpace>,
    target: Arc<VSpace>,
    mapping: Vec<usize>,
}

impl VMap {
    /// `images[i]` names the image of the i-th source element.
    pub fn new<S: AsRef<str>>(source: Arc<VSpace>, target: Arc<VSpace>, images: &[S]) -> Result<Self, EnrichedError> {
        if images.len() != source.len() {
            return Err(EnrichedError::DimensionMismatch { expected: source.len(), found: images.len() });
        }
        if source.valuation() != target.valuation() {
            return Err(EnrichedError::ValuationMismatch { left: source.valuation(), right: target.valuation() });
        }
        let mapping = images.iter().map(|y| target.require(y.as_ref())).collect::<Result<_, _>>()?;
        Ok(VMap { source, target, mapping })
    }

    pub fn identity(space: Arc<VSpace>) -> Self {
        VMap { mapping: (0..space.len()).collect(), source: space.clone(), target: space }
    }

    pub fn source(&self) -> &Arc<VSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VSpace> {
        &self.target
    }

    pub fn image(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// Pairs violating `μ(x1, x2) ⪯ ν(f(x1), f(x2))`.
    pub fn check(&self) -> ValidationReport {
        let v = self.source.valuation();
        let mut report = ValidationReport::default();
        for a in 0..self.source.len() {
            for b in 0..self.source.len() {
                let source = self.source.metric(a, b);
                let image = self.target.metric(self.mapping[a], self.mapping[b]);
                if !v.leq_raw(source, image) {
                    report.push(Violation::Measure {
                        x1: self.source.elements()[a].clone(),
                        x2: self.source.elements()[b].clone(),
                        source,
                        image,
                    });
                }
            }
        }
        report
    }

    fn require_valid(&self) -> Result<(), EnrichedError> {
        let report = self.check();
        if report.is_valid() {
            Ok(())
        } else {
            Err(EnrichedError::InvalidMap(report))
        }
    }

    /// `f_*(x, y) = ν(f(x), y)`, a relation `X ⇸ Y`.
    pub fn lift_lower(&self) -> Result<VRelation, EnrichedError> {
        self.require_valid()?;
        let (n, m) = (self.source.len(), self.target.len());
        let entries = (0..n * m).map(|k| self.target.metric(self.mapping[k / m], k % m)).collect();
        Ok(VRelation::from_entries_unchecked(self.source.clone(), self.target.clone(), entries))
    }

    /// `f^*(y, x) = ν(y, f(x))`, a relation `Y ⇸ X`.
    pub fn lift_upper(&self) -> Result<VRelation, EnrichedError> {
        self.require_valid()?;
        let (n, m) = (self.source.len(), self.target.len());
        let entries = (0..m * n).map(|k| self.target.metric(k / n, self.mapping[k % n])).collect();
        Ok(VRelation::from_entries_unchecked(self.target.clone(), self.source.clone(), entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::VValue::{Bool, Fuzzy, Real};
    use crate::valuation::Valuation;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn chain2(a: &str, b: &str) -> Arc<VSpace> {
        Arc::new(
            VSpace::new(
                Valuation::BOOLEAN,
                names(&[a, b]),
                vec![vec![Bool(true), Bool(true)], vec![Bool(false), Bool(true)]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn fuzzy_composition_single_middle() {
        let x = Arc::new(VSpace::discrete(Valuation::FUZZY, names(&["x"])).unwrap());
        let y = Arc::new(VSpace::discrete(Valuation::FUZZY, names(&["y"])).unwrap());
        let z = Arc::new(VSpace::discrete(Valuation::FUZZY, names(&["z"])).unwrap());
        let sigma = VRelation::new(x.clone(), y.clone(), vec![vec![Fuzzy(0.6)]]).unwrap();
        let tau = VRelation::new(y.clone(), z.clone(), vec![vec![Fuzzy(0.8)]]).unwrap();
        assert_eq!(sigma.compose(&tau).unwrap().get(0, 0), Fuzzy(0.6));

        let rho = VRelation::new(x.clone(), z, vec![vec![Fuzzy(0.3)]]).unwrap();
        let sig7 = VRelation::new(x, y, vec![vec![Fuzzy(0.7)]]).unwrap();
        assert_eq!(sig7.residuate(&rho).unwrap().get(0, 0), Fuzzy(0.3));
    }

    #[test]
    fn boolean_residuation_of_singletons() {
        let x = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["x"])).unwrap());
        let y = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["y"])).unwrap());
        let z = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["z"])).unwrap());
        let sigma = VRelation::new(x.clone(), y, vec![vec![Bool(true)]]).unwrap();
        let rho = VRelation::new(x, z, vec![vec![Bool(false)]]).unwrap();
        assert_eq!(sigma.residuate(&rho).unwrap().get(0, 0), Bool(false));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["a"])).unwrap());
        let b = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["b"])).unwrap());
        let r = VRelation::identity(a.clone());
        let s = VRelation::identity(b);
        assert!(matches!(r.compose(&s), Err(EnrichedError::SpaceMismatch(_))));
        assert!(matches!(r.residuate(&s), Err(EnrichedError::SpaceMismatch(_))));
        let f = Arc::new(VSpace::discrete(Valuation::FUZZY, names(&["f"])).unwrap());
        assert!(matches!(VRelation::new(a, f, vec![vec![Bool(true)]]), Err(EnrichedError::ValuationMismatch { .. })));
    }

    #[test]
    fn monotone_and_antitone_maps() {
        let s = chain2("a", "b");
        let t = chain2("p", "q");
        assert!(VMap::identity(s.clone()).check().is_valid());
        assert!(VMap::new(s.clone(), t.clone(), &["p", "q"]).unwrap().check().is_valid());
        let anti = VMap::new(s.clone(), t.clone(), &["q", "p"]).unwrap();
        let report = anti.check();
        assert_eq!(report.len(), 1);
        assert!(matches!(&report.violations[0], Violation::Measure { x1, x2, .. } if x1 == "a" && x2 == "b"));
        assert!(matches!(anti.lift_lower(), Err(EnrichedError::InvalidMap(_))));
        assert!(matches!(VMap::new(s, t, &["p", "nowhere"]), Err(EnrichedError::UnknownElement(_))));
    }

    #[test]
    fn lifts_of_identity_are_the_metric() {
        let s = chain2("a", "b");
        let id = VMap::identity(s.clone());
        assert_eq!(id.lift_lower().unwrap(), VRelation::identity(s.clone()));
        assert_eq!(id.lift_upper().unwrap(), VRelation::identity(s));
    }

    #[test]
    fn monotone_lift_matches_direct_formula() {
        let s = chain2("a", "b");
        let t = Arc::new(
            VSpace::new(
                Valuation::BOOLEAN,
                names(&["p", "q", "r"]),
                vec![
                    vec![Bool(true), Bool(true), Bool(true)],
                    vec![Bool(false), Bool(true), Bool(true)],
                    vec![Bool(false), Bool(false), Bool(true)],
                ],
            )
            .unwrap(),
        );
        let f = VMap::new(s.clone(), t.clone(), &["p", "r"]).unwrap();
        let lower = f.lift_lower().unwrap();
        let upper = f.lift_upper().unwrap();
        // a ↦ p: p ≤ everything; b ↦ r: r ≤ only r
        let expected_lower = [[true, true, true], [false, false, true]];
        for (i, row) in expected_lower.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(lower.get(i, j), Bool(e));
                assert_eq!(upper.get(j, i), Bool(t.metric(j, f.image(i)).as_bool().unwrap()));
            }
        }
        assert!(lower.check_closure().is_valid());
        assert!(upper.check_closure().is_valid());
    }

    #[test]
    fn real_contraction() {
        let s = Arc::new(
            VSpace::new(
                Valuation::REAL,
                names(&["x", "y", "z"]),
                vec![
                    vec![Real(0.0), Real(2.0), Real(4.0)],
                    vec![Real(2.0), Real(0.0), Real(2.0)],
                    vec![Real(4.0), Real(2.0), Real(0.0)],
                ],
            )
            .unwrap(),
        );
        let half = Arc::new(
            VSpace::new(
                Valuation::REAL,
                names(&["x'", "y'", "z'"]),
                vec![
                    vec![Real(0.0), Real(1.0), Real(2.0)],
                    vec![Real(1.0), Real(0.0), Real(1.0)],
                    vec![Real(2.0), Real(1.0), Real(0.0)],
                ],
            )
            .unwrap(),
        );
        let f = VMap::new(s.clone(), half.clone(), &["x'", "y'", "z'"]).unwrap();
        // enumerate pairs: δ(a,b) ≥ δ'(f a, f b), i.e. halving is a contraction
        for a in 0..3 {
            for b in 0..3 {
                assert!(s.metric(a, b).as_f64() >= half.metric(a, b).as_f64());
            }
        }
        assert!(f.check().is_valid());
        let lower = f.lift_lower().unwrap();
        for a in 0..3 {
            for y in 0..3 {
                assert_eq!(lower.get(a, y), half.metric(f.image(a), y));
            }
        }
        // the converse map stretches distances
        let g = VMap::new(half.clone(), s.clone(), &["x", "y", "z"]).unwrap();
        assert!(!g.check().is_valid());
    }

    #[test]
    fn closure_violation_is_listed() {
        let s = chain2("a", "b");
        let d = Arc::new(VSpace::discrete(Valuation::BOOLEAN, names(&["d"])).unwrap());
        // b relates to d but a (above b in μ(a,b)=1) does not: μ(a,b) ⊗ τ(b,d) ⋠ τ(a,d)
        let tau = VRelation::new(s, d, vec![vec![Bool(false)], vec![Bool(true)]]).unwrap();
        let report = tau.check_closure();
        assert_eq!(report.len(), 1);
        assert!(matches!(&report.violations[0], Violation::LeftClosure { x, via, .. } if x == "a" && via == "b"));
    }

    #[test]
    fn relation_json_round_trip() {
        let s = chain2("a", "b");
        let r = VRelation::identity(s);
        let text = serde_json::to_string(&r).unwrap();
        let back: VRelation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
