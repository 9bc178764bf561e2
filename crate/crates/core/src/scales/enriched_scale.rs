use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::query::{Datum, Query};
use super::ScaleError;
use crate::enriched::{VRelation, VSpace};
use crate::valuation::{VValue, Valuation};

/// A piecewise-linear grade function through `(x, y)` points, constant
/// beyond the first and last point. Dates are placed by day number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, String> {
        if points.is_empty() {
            return Err("needs at least one point".into());
        }
        if points.iter().any(|(x, y)| !x.is_finite() || y.is_nan()) {
            return Err("points must be finite".into());
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("x coordinates must strictly increase".into());
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.points;
        if x <= p[0].0 {
            return p[0].1;
        }
        for w in p.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        p[p.len() - 1].1
    }
}

impl TryFrom<Vec<(f64, f64)>> for PiecewiseLinear {
    type Error = String;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

impl From<PiecewiseLinear> for Vec<(f64, f64)> {
    fn from(p: PiecewiseLinear) -> Self {
        p.points
    }
}

/// How a term grades a datum: crisply through its query, or by a
/// piecewise-linear function read directly in the valuation's carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Query(Query),
    Piecewise(PiecewiseLinear),
}

impl Membership {
    pub fn grade(&self, term: &str, valuation: Valuation, d: &Datum) -> Result<VValue, ScaleError> {
        match self {
            Membership::Query(q) => Ok(valuation.from_bool(q.evaluate(d)?)),
            Membership::Piecewise(p) => {
                let bad = |reason: String| ScaleError::BadMembership { term: term.to_string(), reason };
                let x = d.key().ok_or_else(|| bad(format!("`{d}` has no numeric position")))?;
                let y = p.eval(x as f64);
                // snap float noise at the carrier ends
                let y = if y.abs() < crate::valuation::EPSILON { 0.0 } else { y };
                valuation.value(y).map_err(|e| bad(e.to_string()))
            }
        }
    }
}

/// A V-relation `σ: M ⇸ D` from a term space to a data space, closed
/// under both metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnrichedScale {
    name: String,
    sigma: VRelation,
}

/// Builds `σ` from rows indexed by term then data point and checks
/// `μ∘σ ⪯ σ` and `σ∘δ ⪯ σ`.
pub fn make_enriched_scale(
    name: &str,
    term_space: Arc<VSpace>,
    data_space: Arc<VSpace>,
    rows: Vec<Vec<VValue>>,
) -> Result<EnrichedScale, ScaleError> {
    let sigma = VRelation::new(term_space, data_space, rows)?;
    let report = sigma.check_closure();
    if !report.is_valid() {
        return Err(ScaleError::NotClosed(report));
    }
    Ok(EnrichedScale { name: name.to_string(), sigma })
}

impl EnrichedScale {
    /// No terms over a one-point data space: the unit for apposition.
    pub fn empty(valuation: Valuation) -> Self {
        let terms = Arc::new(VSpace::discrete(valuation, Vec::new()).expect("empty space"));
        let data = Arc::new(VSpace::discrete(valuation, vec!["()".into()]).expect("one point"));
        EnrichedScale { name: String::new(), sigma: VRelation::new(terms, data, Vec::new()).expect("empty relation") }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn valuation(&self) -> Valuation {
        self.sigma.source().valuation()
    }

    pub fn term_space(&self) -> &Arc<VSpace> {
        self.sigma.source()
    }

    pub fn data_space(&self) -> &Arc<VSpace> {
        self.sigma.target()
    }

    pub fn sigma(&self) -> &VRelation {
        &self.sigma
    }

    pub fn terms(&self) -> &[String] {
        self.term_space().elements()
    }

    /// `σ(term, d)` with `d` named as in the data space.
    pub fn value(&self, term: &str, data_point: &str) -> Result<VValue, ScaleError> {
        Ok(self.sigma.value(term, data_point)?)
    }

    /// Side-by-side combination: terms `M0 ⊕ M1` with no cross relation,
    /// data `D0 ⊗ D1` named `(d0, d1)`, and each term reading its own
    /// coordinate. Term names shared by both scales are qualified as
    /// `scale.term`.
    pub fn apposition(&self, other: &EnrichedScale) -> Result<EnrichedScale, ScaleError> {
        let v = self.valuation();
        if v != other.valuation() {
            return Err(ScaleError::ValuationMismatch);
        }
        let (m0, m1) = (self.term_space(), other.term_space());
        let (d0, d1) = (self.data_space(), other.data_space());
        let clash = m0.elements().iter().any(|t| m1.index_of(t).is_some());
        let right_prefix = if self.name == other.name { format!("{}#2", other.name) } else { other.name.clone() };
        let qualify = |scale: &str, t: &String| if clash { format!("{scale}.{t}") } else { t.clone() };
        let terms: Vec<String> = m0
            .elements()
            .iter()
            .map(|t| qualify(&self.name, t))
            .chain(m1.elements().iter().map(|t| qualify(&right_prefix, t)))
            .collect();
        let n0 = m0.len();
        let term_space = VSpace::from_fn(v, terms, |i, j| match (i < n0, j < n0) {
            (true, true) => m0.metric(i, j),
            (false, false) => m1.metric(i - n0, j - n0),
            _ => v.bottom(),
        })?;
        let k1 = d1.len();
        let pairs: Vec<(usize, usize)> = (0..d0.len()).flat_map(|a| (0..k1).map(move |b| (a, b))).collect();
        let names = pairs.iter().map(|&(a, b)| format!("({}, {})", d0.elements()[a], d1.elements()[b])).collect();
        let data_space = VSpace::from_fn(v, names, |p, q| {
            let ((a, b), (c, d)) = (pairs[p], pairs[q]);
            v.tensor_raw(d0.metric(a, c), d1.metric(b, d))
        })?;
        let rows = (0..term_space.len())
            .map(|i| {
                pairs
                    .iter()
                    .map(|&(a, b)| if i < n0 { self.sigma.get(i, a) } else { other.sigma.get(i - n0, b) })
                    .collect()
            })
            .collect();
        let name = match (self.name.is_empty(), other.name.is_empty()) {
            (true, _) => other.name.clone(),
            (_, true) => self.name.clone(),
            _ => format!("{}|{}", self.name, other.name),
        };
        make_enriched_scale(&name, Arc::new(term_space), Arc::new(data_space), rows)
    }
}
