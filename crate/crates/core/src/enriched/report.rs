use std::fmt;

use serde::Serialize;

use crate::valuation::VValue;

/// One failed axiom instance, with the element names and values involved.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `e ⋠ μ(x, x)`
    Reflexivity { element: String, value: VValue },
    /// `μ(x1, x2) ⊗ μ(x2, x3) ⋠ μ(x1, x3)`
    Transitivity { x1: String, x2: String, x3: String, composite: VValue, direct: VValue },
    /// `μ(x1, x2) ≠ μ(x2, x1)`
    Symmetry { x1: String, x2: String, forward: VValue, backward: VValue },
    /// `μ(x1, x2) ⋠ ν(f(x1), f(x2))`
    Measure { x1: String, x2: String, source: VValue, image: VValue },
    /// `φ(x1) ⊗ μ(x1, x2) ⋠ φ(x2)`
    Predicate { x1: String, x2: String, transported: VValue, value: VValue },
    /// `μ(x, via) ⊗ τ(via, y) ⋠ τ(x, y)`
    LeftClosure { x: String, via: String, y: String, composite: VValue, direct: VValue },
    /// `τ(x, via) ⊗ ν(via, y) ⋠ τ(x, y)`
    RightClosure { x: String, via: String, y: String, composite: VValue, direct: VValue },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity { element, value } => {
                write!(f, "reflexivity fails at {element}: self-distance {value}")
            }
            Violation::Transitivity { x1, x2, x3, composite, direct } => {
                write!(f, "transitivity fails at ({x1}, {x2}, {x3}): composite {composite} exceeds direct {direct}")
            }
            Violation::Symmetry { x1, x2, forward, backward } => {
                write!(f, "symmetry fails at ({x1}, {x2}): {forward} vs {backward}")
            }
            Violation::Measure { x1, x2, source, image } => {
                write!(f, "map does not preserve measure at ({x1}, {x2}): {source} exceeds image {image}")
            }
            Violation::Predicate { x1, x2, transported, value } => {
                write!(f, "predicate constraint fails at ({x1}, {x2}): transported {transported} exceeds {value}")
            }
            Violation::LeftClosure { x, via, y, composite, direct } => {
                write!(f, "left closure fails at ({x}, {y}) via {via}: {composite} exceeds {direct}")
            }
            Violation::RightClosure { x, via, y, composite, direct } => {
                write!(f, "right closure fails at ({x}, {y}) via {via}: {composite} exceeds {direct}")
            }
        }
    }
}

/// Result of a structural check. Empty means the checked object is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub(crate) fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
