//! Closed preorders: the truth-value algebras that parameterize every
//! enriched structure in this crate.
//!
//! Three valuations are provided:
//!
//! | kind      | carrier  | order          | tensor | implication             | unit |
//! |-----------|----------|----------------|--------|-------------------------|------|
//! | `boolean` | {0, 1}   | 0 ≤ 1          | and    | material implication    | 1    |
//! | `fuzzy`   | [0, 1]   | numeric ≤      | min    | Gödel: 1 if a ≤ b else b | 1    |
//! | `real`    | [0, ∞]   | numeric ≥      | +      | truncated difference    | 0    |
//!
//! The real valuation is ordered *downward*: `leq(5.0, 3.0)` holds, the
//! bottom element is ∞ and the top element is 0.
//!
//! Fuzzy and real comparisons use an absolute tolerance of [`EPSILON`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for comparisons on floating-point carriers.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValuationError {
    #[error("value {value} is not in the carrier of the {kind} valuation")]
    OutOfCarrier { kind: ValuationKind, value: VValue },
    #[error("mixed valuations: expected a {expected} value, found {found}")]
    Mixed { expected: ValuationKind, found: VValue },
    #[error("unknown valuation kind `{0}` (expected boolean, fuzzy or real)")]
    UnknownKind(String),
    #[error("`{0}` is not a valid payload")]
    BadPayload(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValuationKind {
    Boolean,
    Fuzzy,
    Real,
}

impl ValuationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ValuationKind::Boolean => "boolean",
            ValuationKind::Fuzzy => "fuzzy",
            ValuationKind::Real => "real",
        }
    }
}

impl fmt::Display for ValuationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ValuationKind {
    type Err = ValuationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boolean" => Ok(ValuationKind::Boolean),
            "fuzzy" => Ok(ValuationKind::Fuzzy),
            "real" => Ok(ValuationKind::Real),
            other => Err(ValuationError::UnknownKind(other.to_string())),
        }
    }
}

/// A generalized truth value. The variant records which valuation it
/// belongs to; `Real(f64::INFINITY)` is the real valuation's ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VValue {
    Bool(bool),
    Fuzzy(f64),
    Real(f64),
}

impl VValue {
    pub fn kind(self) -> ValuationKind {
        match self {
            VValue::Bool(_) => ValuationKind::Boolean,
            VValue::Fuzzy(_) => ValuationKind::Fuzzy,
            VValue::Real(_) => ValuationKind::Real,
        }
    }

    /// Numeric payload; booleans map to 0.0 / 1.0.
    pub fn as_f64(self) -> f64 {
        match self {
            VValue::Bool(b) => {
                if b {
                    1.0
                } else {
                    0.0
                }
            }
            VValue::Fuzzy(x) | VValue::Real(x) => x,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            VValue::Bool(b) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for VValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VValue::Bool(b) => write!(f, "{}", u8::from(*b)),
            VValue::Fuzzy(x) => write!(f, "{x}"),
            VValue::Real(x) if x.is_infinite() => f.write_str("inf"),
            VValue::Real(x) => write!(f, "{x}"),
        }
    }
}

/// A closed preorder `(V, ⪯, ⊗, ⇒, e)`.
///
/// The checked operations (`leq`, `tensor`, ...) reject operands from
/// another valuation. The `*_raw` variants skip that check and are used
/// internally once a matrix or vector has been validated against its
/// valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    kind: ValuationKind,
}

impl Valuation {
    pub const BOOLEAN: Valuation = Valuation { kind: ValuationKind::Boolean };
    pub const FUZZY: Valuation = Valuation { kind: ValuationKind::Fuzzy };
    pub const REAL: Valuation = Valuation { kind: ValuationKind::Real };

    pub fn new(kind: ValuationKind) -> Self {
        Valuation { kind }
    }

    pub fn kind(self) -> ValuationKind {
        self.kind
    }

    /// Builds a value of this valuation from a number. Booleans accept
    /// exactly 0 and 1; the real valuation accepts `f64::INFINITY`.
    pub fn value(self, x: f64) -> Result<VValue, ValuationError> {
        if self.kind == ValuationKind::Boolean && x != 0.0 && x != 1.0 {
            return Err(ValuationError::OutOfCarrier { kind: self.kind, value: VValue::Fuzzy(x) });
        }
        let v = self.wrap(x);
        self.check(v)?;
        Ok(v)
    }

    /// Wraps a number without a carrier check.
    fn wrap(self, x: f64) -> VValue {
        match self.kind {
            ValuationKind::Boolean => VValue::Bool(x >= 0.5),
            ValuationKind::Fuzzy => VValue::Fuzzy(x),
            ValuationKind::Real => VValue::Real(x),
        }
    }

    pub fn from_bool(self, b: bool) -> VValue {
        if b {
            self.top()
        } else {
            self.bottom()
        }
    }

    /// Checks that `v` belongs to this valuation's carrier.
    pub fn check(self, v: VValue) -> Result<(), ValuationError> {
        if v.kind() != self.kind {
            return Err(ValuationError::Mixed { expected: self.kind, found: v });
        }
        let ok = match v {
            VValue::Bool(_) => true,
            VValue::Fuzzy(x) => x.is_finite() && (-EPSILON..=1.0 + EPSILON).contains(&x),
            VValue::Real(x) => !x.is_nan() && x >= -EPSILON,
        };
        if ok {
            Ok(())
        } else {
            Err(ValuationError::OutOfCarrier { kind: self.kind, value: v })
        }
    }

    fn check2(self, a: VValue, b: VValue) -> Result<(), ValuationError> {
        self.check(a)?;
        self.check(b)
    }

    /// The monoidal unit `e`.
    pub fn unit(self) -> VValue {
        match self.kind {
            ValuationKind::Boolean => VValue::Bool(true),
            ValuationKind::Fuzzy => VValue::Fuzzy(1.0),
            ValuationKind::Real => VValue::Real(0.0),
        }
    }

    pub fn bottom(self) -> VValue {
        match self.kind {
            ValuationKind::Boolean => VValue::Bool(false),
            ValuationKind::Fuzzy => VValue::Fuzzy(0.0),
            ValuationKind::Real => VValue::Real(f64::INFINITY),
        }
    }

    pub fn top(self) -> VValue {
        match self.kind {
            ValuationKind::Boolean => VValue::Bool(true),
            ValuationKind::Fuzzy => VValue::Fuzzy(1.0),
            ValuationKind::Real => VValue::Real(0.0),
        }
    }

    pub fn leq(self, a: VValue, b: VValue) -> Result<bool, ValuationError> {
        self.check2(a, b)?;
        Ok(self.leq_raw(a, b))
    }

    pub fn tensor(self, a: VValue, b: VValue) -> Result<VValue, ValuationError> {
        self.check2(a, b)?;
        Ok(self.tensor_raw(a, b))
    }

    pub fn implies(self, a: VValue, b: VValue) -> Result<VValue, ValuationError> {
        self.check2(a, b)?;
        Ok(self.implies_raw(a, b))
    }

    pub fn join_finite(self, xs: &[VValue]) -> Result<VValue, ValuationError> {
        xs.iter().try_for_each(|&x| self.check(x))?;
        Ok(self.join_raw(xs.iter().copied()))
    }

    pub fn meet_finite(self, xs: &[VValue]) -> Result<VValue, ValuationError> {
        xs.iter().try_for_each(|&x| self.check(x))?;
        Ok(self.meet_raw(xs.iter().copied()))
    }

    /// `a ⪯ b` and `b ⪯ a`.
    pub fn equiv(self, a: VValue, b: VValue) -> Result<bool, ValuationError> {
        self.check2(a, b)?;
        Ok(self.equiv_raw(a, b))
    }

    pub(crate) fn leq_raw(self, a: VValue, b: VValue) -> bool {
        let (x, y) = (a.as_f64(), b.as_f64());
        match self.kind {
            ValuationKind::Boolean => x <= y,
            ValuationKind::Fuzzy => x <= y + EPSILON,
            ValuationKind::Real => {
                if x.is_infinite() {
                    true
                } else if y.is_infinite() {
                    false
                } else {
                    x + EPSILON >= y
                }
            }
        }
    }

    pub(crate) fn equiv_raw(self, a: VValue, b: VValue) -> bool {
        self.leq_raw(a, b) && self.leq_raw(b, a)
    }

    pub(crate) fn tensor_raw(self, a: VValue, b: VValue) -> VValue {
        let (x, y) = (a.as_f64(), b.as_f64());
        match self.kind {
            ValuationKind::Boolean | ValuationKind::Fuzzy => self.wrap(x.min(y)),
            // IEEE addition already makes ∞ absorbing for nonnegative operands.
            ValuationKind::Real => VValue::Real(x + y),
        }
    }

    pub(crate) fn implies_raw(self, a: VValue, b: VValue) -> VValue {
        let (x, y) = (a.as_f64(), b.as_f64());
        match self.kind {
            ValuationKind::Boolean | ValuationKind::Fuzzy => {
                if self.leq_raw(a, b) {
                    self.top()
                } else {
                    self.wrap(y)
                }
            }
            ValuationKind::Real => {
                if x.is_infinite() || x + EPSILON >= y {
                    VValue::Real(0.0)
                } else {
                    VValue::Real(y - x)
                }
            }
        }
    }

    pub(crate) fn join2_raw(self, a: VValue, b: VValue) -> VValue {
        if self.leq_raw(a, b) {
            b
        } else {
            a
        }
    }

    pub(crate) fn meet2_raw(self, a: VValue, b: VValue) -> VValue {
        if self.leq_raw(a, b) {
            a
        } else {
            b
        }
    }

    pub(crate) fn join_raw(self, xs: impl IntoIterator<Item = VValue>) -> VValue {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join2_raw(acc, x))
    }

    pub(crate) fn meet_raw(self, xs: impl IntoIterator<Item = VValue>) -> VValue {
        xs.into_iter().fold(self.top(), |acc, x| self.meet2_raw(acc, x))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl FromStr for Valuation {
    type Err = ValuationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Valuation::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Valuation = Valuation::BOOLEAN;
    const F: Valuation = Valuation::FUZZY;
    const R: Valuation = Valuation::REAL;

    fn b(x: bool) -> VValue {
        VValue::Bool(x)
    }
    fn f(x: f64) -> VValue {
        VValue::Fuzzy(x)
    }
    fn r(x: f64) -> VValue {
        VValue::Real(x)
    }

    #[test]
    fn order_examples() {
        assert!(B.leq(b(false), b(true)).unwrap());
        assert!(!B.leq(b(true), b(false)).unwrap());
        assert!(R.leq(r(5.0), r(3.0)).unwrap());
        assert!(!R.leq(r(3.0), r(5.0)).unwrap());
        assert!(F.leq(f(0.3), f(0.3)).unwrap());
        assert!(R.leq(r(f64::INFINITY), r(0.0)).unwrap());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(F.tensor(f(0.4), f(0.7)).unwrap(), f(0.4));
        assert_eq!(R.tensor(r(2.0), r(3.0)).unwrap(), r(5.0));
        assert_eq!(B.tensor(b(true), b(true)).unwrap(), b(true));
        assert_eq!(R.tensor(r(f64::INFINITY), r(3.0)).unwrap(), r(f64::INFINITY));
    }

    #[test]
    fn implication_examples() {
        assert_eq!(F.implies(f(0.3), f(0.7)).unwrap(), f(1.0));
        assert_eq!(F.implies(f(0.7), f(0.3)).unwrap(), f(0.3));
        assert_eq!(R.implies(r(3.0), r(5.0)).unwrap(), r(2.0));
        assert_eq!(R.implies(r(5.0), r(3.0)).unwrap(), r(0.0));
        assert_eq!(R.implies(r(f64::INFINITY), r(4.0)).unwrap(), r(0.0));
        assert_eq!(R.implies(r(4.0), r(f64::INFINITY)).unwrap(), r(f64::INFINITY));
        assert_eq!(B.implies(b(true), b(false)).unwrap(), b(false));
        assert_eq!(B.implies(b(false), b(false)).unwrap(), b(true));
    }

    #[test]
    fn finite_joins_and_meets() {
        assert_eq!(B.join_finite(&[b(false), b(true), b(false)]).unwrap(), b(true));
        assert_eq!(R.join_finite(&[r(3.0), r(5.0)]).unwrap(), r(3.0));
        assert_eq!(F.join_finite(&[]).unwrap(), f(0.0));
        assert_eq!(R.join_finite(&[]).unwrap(), r(f64::INFINITY));
        assert_eq!(F.meet_finite(&[f(0.2), f(0.9)]).unwrap(), f(0.2));
        assert_eq!(R.meet_finite(&[r(3.0), r(5.0)]).unwrap(), r(5.0));
        assert_eq!(B.meet_finite(&[]).unwrap(), b(true));
        assert_eq!(R.meet_finite(&[]).unwrap(), r(0.0));
    }

    // Independent check that the real join is the ⪯-supremum: among the
    // candidates, it is an upper bound and below every other upper bound.
    #[test]
    fn real_join_is_supremum_by_exhaustion() {
        let xs = [r(3.0), r(5.0)];
        let candidates = [r(0.0), r(1.0), r(3.0), r(4.0), r(5.0), r(7.0), r(f64::INFINITY)];
        let upper: Vec<_> = candidates.iter().copied().filter(|&u| xs.iter().all(|&x| R.leq(x, u).unwrap())).collect();
        let least = upper.iter().copied().find(|&u| upper.iter().all(|&w| R.leq(u, w).unwrap())).unwrap();
        assert_eq!(R.join_finite(&xs).unwrap(), least);

        let lower: Vec<_> = candidates.iter().copied().filter(|&l| xs.iter().all(|&x| R.leq(l, x).unwrap())).collect();
        let greatest = lower.iter().copied().find(|&l| lower.iter().all(|&w| R.leq(w, l).unwrap())).unwrap();
        assert_eq!(R.meet_finite(&xs).unwrap(), greatest);
    }

    #[test]
    fn mixed_operands_are_rejected() {
        assert!(matches!(F.leq(f(0.1), b(true)), Err(ValuationError::Mixed { .. })));
        assert!(matches!(R.tensor(f(0.1), r(1.0)), Err(ValuationError::Mixed { .. })));
        assert!(matches!(B.implies(r(1.0), b(true)), Err(ValuationError::Mixed { .. })));
    }

    #[test]
    fn carrier_checks() {
        assert!(F.value(1.5).is_err());
        assert!(F.value(-0.5).is_err());
        assert!(R.value(-1.0).is_err());
        assert!(R.value(f64::NAN).is_err());
        assert_eq!(R.value(f64::INFINITY).unwrap(), r(f64::INFINITY));
        assert!(B.value(0.5).is_err());
        assert_eq!(B.value(1.0).unwrap(), b(true));
    }

    fn grid(v: Valuation) -> Vec<VValue> {
        match v.kind() {
            ValuationKind::Boolean => vec![b(false), b(true)],
            ValuationKind::Fuzzy => (0..=20).map(|i| f(i as f64 * 0.05)).collect(),
            ValuationKind::Real => (0..=20).map(|i| r(i as f64 * 0.5)).chain([r(f64::INFINITY)]).collect(),
        }
    }

    #[test]
    fn closed_preorder_laws_on_grids() {
        for v in [B, F, R] {
            let g = grid(v);
            for &a in &g {
                assert!(v.equiv(v.tensor(v.unit(), a).unwrap(), a).unwrap());
                for &x in &g {
                    assert!(v.equiv(v.tensor(a, x).unwrap(), v.tensor(x, a).unwrap()).unwrap());
                    for &c in &g {
                        let lhs = v.leq(v.tensor(a, x).unwrap(), c).unwrap();
                        let rhs = v.leq(a, v.implies(x, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "{v}: adjunction at {a} {x} {c}");
                        let l = v.tensor(v.tensor(a, x).unwrap(), c).unwrap();
                        let r2 = v.tensor(a, v.tensor(x, c).unwrap()).unwrap();
                        assert!(v.equiv(l, r2).unwrap());
                        if v.leq(a, x).unwrap() {
                            assert!(v.leq(v.tensor(a, c).unwrap(), v.tensor(x, c).unwrap()).unwrap());
                            // antitone in the first argument, monotone in the second
                            assert!(v.leq(v.implies(x, c).unwrap(), v.implies(a, c).unwrap()).unwrap());
                            assert!(v.leq(v.implies(c, a).unwrap(), v.implies(c, x).unwrap()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn joins_and_meets_are_bounds() {
        for v in [B, F, R] {
            let g = grid(v);
            for w in g.windows(3) {
                let j = v.join_finite(w).unwrap();
                let m = v.meet_finite(w).unwrap();
                for &x in w {
                    assert!(v.leq(x, j).unwrap());
                    assert!(v.leq(m, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn kind_strings() {
        for k in [ValuationKind::Boolean, ValuationKind::Fuzzy, ValuationKind::Real] {
            assert_eq!(k.as_str().parse::<ValuationKind>().unwrap(), k);
        }
        assert!("quantale".parse::<ValuationKind>().is_err());
    }
}
