//! Comparison queries over description-function values, their evaluation,
//! and their symbolic denotations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Days, Months, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::interval::IntervalSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("type mismatch: {function} has type {expected}, constant `{found}` does not fit")]
    TypeMismatch { function: String, expected: Datatype, found: String },
    #[error("cannot parse `{text}` as {datatype}")]
    BadDatum { text: String, datatype: Datatype },
    #[error("unknown datatype `{0}`")]
    UnknownDatatype(String),
    #[error("unknown comparison keyword `{0}`")]
    UnknownOrder(String),
    #[error("relative date `{0}` needs a reference date")]
    MissingReferenceDate(String),
    #[error("query mixes description functions {0:?}")]
    MixedFunctions(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Datatype {
    Integer,
    Natural,
    Date,
    String,
}

impl Datatype {
    pub fn as_str(self) -> &'static str {
        match self {
            Datatype::Integer => "Integer",
            Datatype::Natural => "Natural",
            Datatype::Date => "Date",
            Datatype::String => "String",
        }
    }

    pub fn is_ordered_numeric(self) -> bool {
        !matches!(self, Datatype::String)
    }

    pub fn parse_datum(self, text: &str) -> Result<Datum, QueryError> {
        let bad = || QueryError::BadDatum { text: text.to_string(), datatype: self };
        let t = text.trim();
        match self {
            Datatype::Integer => t.parse().map(Datum::Int).map_err(|_| bad()),
            Datatype::Natural => match t.parse::<i64>() {
                Ok(n) if n >= 0 => Ok(Datum::Int(n)),
                _ => Err(bad()),
            },
            Datatype::Date => NaiveDate::parse_from_str(t, "%Y-%m-%d").map(Datum::Date).map_err(|_| bad()),
            Datatype::String => Ok(Datum::Str(text.to_string())),
        }
    }

    /// Whether `d` inhabits this type.
    pub fn admits(self, d: &Datum) -> bool {
        match (self, d) {
            (Datatype::Integer, Datum::Int(_)) => true,
            (Datatype::Natural, Datum::Int(n)) => *n >= 0,
            (Datatype::Date, Datum::Date(_)) => true,
            (Datatype::String, Datum::Str(_)) => true,
            _ => false,
        }
    }

    /// The whole carrier as an interval set (ordered types only).
    pub(crate) fn universe(self) -> IntervalSet {
        match self {
            Datatype::Natural => IntervalSet::range(0, i64::MAX),
            _ => IntervalSet::full(),
        }
    }

    pub(crate) fn datum_from_key(self, key: i64) -> Datum {
        match self {
            Datatype::Date => Datum::Date(NaiveDate::from_num_days_from_ce_opt(key as i32).unwrap_or(NaiveDate::MIN)),
            _ => Datum::Int(key),
        }
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Datatype {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Integer" | "Int" => Ok(Datatype::Integer),
            "Natural" | "NaturalNumber" => Ok(Datatype::Natural),
            "Date" => Ok(Datatype::Date),
            "String" => Ok(Datatype::String),
            other => Err(QueryError::UnknownDatatype(other.to_string())),
        }
    }
}

/// A primitive data value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Datum {
    Int(i64),
    Date(NaiveDate),
    Str(String),
}

impl Datum {
    /// Position on the integer line for ordered types.
    pub(crate) fn key(&self) -> Option<i64> {
        match self {
            Datum::Int(n) => Some(*n),
            Datum::Date(d) => Some(i64::from(d.num_days_from_ce())),
            Datum::Str(_) => None,
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Int(n) => write!(f, "{n}"),
            Datum::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Datum::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Equal,
    NotEqual,
}

impl Order {
    pub const ALL: [Order; 6] =
        [Order::Less, Order::LessEqual, Order::Greater, Order::GreaterEqual, Order::Equal, Order::NotEqual];

    pub fn keyword(self) -> &'static str {
        match self {
            Order::Less => "less",
            Order::LessEqual => "less-equal",
            Order::Greater => "greater",
            Order::GreaterEqual => "greater-equal",
            Order::Equal => "equal",
            Order::NotEqual => "not-equal",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Order::Less => "<",
            Order::LessEqual => "≤",
            Order::Greater => ">",
            Order::GreaterEqual => "≥",
            Order::Equal => "=",
            Order::NotEqual => "≠",
        }
    }

    fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Order::Less => lhs < rhs,
            Order::LessEqual => lhs <= rhs,
            Order::Greater => lhs > rhs,
            Order::GreaterEqual => lhs >= rhs,
            Order::Equal => lhs == rhs,
            Order::NotEqual => lhs != rhs,
        }
    }

    fn interval(self, c: i64) -> IntervalSet {
        let below = || IntervalSet::range(i64::MIN, c.saturating_sub(1));
        let above = || IntervalSet::range(c.saturating_add(1), i64::MAX);
        match self {
            Order::Less if c == i64::MIN => IntervalSet::empty(),
            Order::Less => below(),
            Order::LessEqual => IntervalSet::range(i64::MIN, c),
            Order::Greater if c == i64::MAX => IntervalSet::empty(),
            Order::Greater => above(),
            Order::GreaterEqual => IntervalSet::range(c, i64::MAX),
            Order::Equal => IntervalSet::range(c, c),
            Order::NotEqual => IntervalSet::range(c, c).complement(),
        }
    }
}

impl FromStr for Order {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Order::ALL.into_iter().find(|o| o.keyword() == s).ok_or_else(|| QueryError::UnknownOrder(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DateUnit {
    Days,
    Months,
    Years,
}

/// The right-hand side of a comparison. Relative dates are written
/// `today`, `today-10y`, `today+6m`, `today-30d` and must be resolved
/// against an explicit reference date before evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constant {
    Value(Datum),
    RelativeDate { offset: i64, unit: DateUnit },
}

impl Constant {
    pub fn parse(text: &str, datatype: Datatype) -> Result<Constant, QueryError> {
        if datatype == Datatype::Date {
            if let Some(rest) = text.trim().strip_prefix("today") {
                return parse_offset(rest)
                    .map(|(offset, unit)| Constant::RelativeDate { offset, unit })
                    .ok_or_else(|| QueryError::BadDatum { text: text.to_string(), datatype });
            }
        }
        datatype.parse_datum(text).map(Constant::Value)
    }

    fn resolve(&self, reference: Option<NaiveDate>) -> Result<Datum, QueryError> {
        match self {
            Constant::Value(d) => Ok(d.clone()),
            Constant::RelativeDate { offset, unit } => {
                let today = reference.ok_or_else(|| QueryError::MissingReferenceDate(self.to_string()))?;
                let magnitude = offset.unsigned_abs();
                let shifted = match unit {
                    DateUnit::Days => {
                        let d = Days::new(magnitude);
                        if *offset < 0 {
                            today.checked_sub_days(d)
                        } else {
                            today.checked_add_days(d)
                        }
                    }
                    DateUnit::Months | DateUnit::Years => {
                        let months = if *unit == DateUnit::Years { magnitude * 12 } else { magnitude };
                        let m = Months::new(u32::try_from(months).unwrap_or(u32::MAX));
                        if *offset < 0 {
                            today.checked_sub_months(m)
                        } else {
                            today.checked_add_months(m)
                        }
                    }
                };
                Ok(Datum::Date(shifted.unwrap_or(if *offset < 0 { NaiveDate::MIN } else { NaiveDate::MAX })))
            }
        }
    }
}

fn parse_offset(rest: &str) -> Option<(i64, DateUnit)> {
    if rest.is_empty() {
        return Some((0, DateUnit::Days));
    }
    let (sign, body) = match rest.as_bytes()[0] {
        b'-' => (-1, &rest[1..]),
        b'+' => (1, &rest[1..]),
        _ => return None,
    };
    let unit = match body.chars().last()? {
        'd' => DateUnit::Days,
        'm' => DateUnit::Months,
        'y' => DateUnit::Years,
        _ => return None,
    };
    let n: i64 = body[..body.len() - 1].parse().ok()?;
    Some((sign * n, unit))
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Value(d) => d.fmt(f),
            Constant::RelativeDate { offset, unit } => {
                let u = match unit {
                    DateUnit::Days => 'd',
                    DateUnit::Months => 'm',
                    DateUnit::Years => 'y',
                };
                if *offset == 0 && *unit == DateUnit::Days {
                    f.write_str("today")
                } else {
                    write!(f, "today{offset:+}{u}")
                }
            }
        }
    }
}

/// A logical query: comparisons of a description-function value with a
/// constant, closed under conjunction, disjunction and negation.
/// `And(vec![])` is the always-true query.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Query {
    Compare { function: String, order: Order, constant: Constant },
    And(Vec<Query>),
    Or(Vec<Query>),
    Not(Box<Query>),
}

impl Query {
    pub fn compare(function: &str, order: Order, constant: Datum) -> Query {
        Query::Compare { function: function.to_string(), order, constant: Constant::Value(constant) }
    }

    pub fn int(function: &str, order: Order, n: i64) -> Query {
        Self::compare(function, order, Datum::Int(n))
    }

    pub fn tautology() -> Query {
        Query::And(Vec::new())
    }

    pub fn negate(self) -> Query {
        Query::Not(Box::new(self))
    }

    /// Names of the description functions the query mentions.
    pub fn functions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        match self {
            Query::Compare { function, .. } => {
                out.insert(function.clone());
            }
            Query::And(qs) | Query::Or(qs) => qs.iter().for_each(|q| q.collect_functions(out)),
            Query::Not(q) => q.collect_functions(out),
        }
    }

    /// Checks every constant against the function's datatype.
    pub fn typecheck(&self, datatype: Datatype) -> Result<(), QueryError> {
        match self {
            Query::Compare { function, constant, .. } => {
                let ok = match constant {
                    Constant::Value(d) => datatype.admits(d),
                    Constant::RelativeDate { .. } => datatype == Datatype::Date,
                };
                if ok {
                    Ok(())
                } else {
                    Err(QueryError::TypeMismatch {
                        function: function.clone(),
                        expected: datatype,
                        found: constant.to_string(),
                    })
                }
            }
            Query::And(qs) | Query::Or(qs) => qs.iter().try_for_each(|q| q.typecheck(datatype)),
            Query::Not(q) => q.typecheck(datatype),
        }
    }

    /// Replaces relative date constants with absolute dates.
    pub fn resolve(&self, reference: Option<NaiveDate>) -> Result<Query, QueryError> {
        Ok(match self {
            Query::Compare { function, order, constant } => Query::Compare {
                function: function.clone(),
                order: *order,
                constant: Constant::Value(constant.resolve(reference)?),
            },
            Query::And(qs) => Query::And(qs.iter().map(|q| q.resolve(reference)).collect::<Result<_, _>>()?),
            Query::Or(qs) => Query::Or(qs.iter().map(|q| q.resolve(reference)).collect::<Result<_, _>>()?),
            Query::Not(q) => Query::Not(Box::new(q.resolve(reference)?)),
        })
    }

    /// Truth of the query for the value `d`.
    pub fn evaluate(&self, d: &Datum) -> Result<bool, QueryError> {
        match self {
            Query::Compare { function, order, constant } => {
                let c = match constant {
                    Constant::Value(c) => c,
                    rel => return Err(QueryError::MissingReferenceDate(rel.to_string())),
                };
                match (d, c) {
                    (Datum::Int(a), Datum::Int(b)) => Ok(order.holds(a, b)),
                    (Datum::Date(a), Datum::Date(b)) => Ok(order.holds(a, b)),
                    (Datum::Str(a), Datum::Str(b)) => Ok(order.holds(a, b)),
                    _ => Err(QueryError::TypeMismatch {
                        function: function.clone(),
                        expected: datatype_of(d),
                        found: c.to_string(),
                    }),
                }
            }
            Query::And(qs) => {
                for q in qs {
                    if !q.evaluate(d)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Query::Or(qs) => {
                for q in qs {
                    if q.evaluate(d)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Query::Not(q) => Ok(!q.evaluate(d)?),
        }
    }

    /// Symbolic denotation over an ordered datatype, as a set of integer
    /// keys (dates map to their day number).
    pub fn denotation(&self, datatype: Datatype) -> Result<IntervalSet, QueryError> {
        let universe = datatype.universe();
        Ok(self.raw_denotation(datatype)?.intersect(&universe))
    }

    fn raw_denotation(&self, datatype: Datatype) -> Result<IntervalSet, QueryError> {
        match self {
            Query::Compare { function, order, constant } => {
                let key = match constant {
                    Constant::Value(c) if datatype.admits(c) => c.key(),
                    Constant::Value(c) => {
                        return Err(QueryError::TypeMismatch {
                            function: function.clone(),
                            expected: datatype,
                            found: c.to_string(),
                        })
                    }
                    rel => return Err(QueryError::MissingReferenceDate(rel.to_string())),
                };
                let key = key.ok_or_else(|| QueryError::TypeMismatch {
                    function: function.clone(),
                    expected: datatype,
                    found: constant.to_string(),
                })?;
                Ok(order.interval(key))
            }
            Query::And(qs) => {
                qs.iter().try_fold(IntervalSet::full(), |acc, q| Ok(acc.intersect(&q.raw_denotation(datatype)?)))
            }
            Query::Or(qs) => {
                qs.iter().try_fold(IntervalSet::empty(), |acc, q| Ok(acc.union(&q.raw_denotation(datatype)?)))
            }
            Query::Not(q) => Ok(q.raw_denotation(datatype)?.complement()),
        }
    }
}

fn datatype_of(d: &Datum) -> Datatype {
    match d {
        Datum::Int(_) => Datatype::Integer,
        Datum::Date(_) => Datatype::Date,
        Datum::Str(_) => Datatype::String,
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn joined(f: &mut fmt::Formatter<'_>, qs: &[Query], op: &str, empty: &str) -> fmt::Result {
            if qs.is_empty() {
                return f.write_str(empty);
            }
            f.write_str("(")?;
            for (i, q) in qs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{q}")?;
            }
            f.write_str(")")
        }
        match self {
            Query::Compare { function, order, constant } => {
                write!(f, "({function} {} {constant})", order.symbol())
            }
            Query::And(qs) => joined(f, qs, "∧", "⊤"),
            Query::Or(qs) => joined(f, qs, "∨", "⊥"),
            Query::Not(q) => write!(f, "¬{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        assert!(Query::int("age", Order::LessEqual, 18).evaluate(&Datum::Int(17)).unwrap());
        assert!(!Query::int("age", Order::GreaterEqual, 80).evaluate(&Datum::Int(50)).unwrap());
        assert!(Query::int("age", Order::Equal, 17).evaluate(&Datum::Int(17)).unwrap());
        assert!(Query::tautology().evaluate(&Datum::Int(-3)).unwrap());
        let q = Query::And(vec![Query::int("age", Order::LessEqual, 65), Query::int("age", Order::Less, 40).negate()]);
        assert!(q.evaluate(&Datum::Int(40)).unwrap());
        assert!(!q.evaluate(&Datum::Int(39)).unwrap());
    }

    #[test]
    fn type_mismatches() {
        let q = Query::compare("name", Order::Equal, Datum::Str("x".into()));
        assert!(matches!(q.evaluate(&Datum::Int(1)), Err(QueryError::TypeMismatch { .. })));
        assert!(q.typecheck(Datatype::Integer).is_err());
        assert!(q.typecheck(Datatype::String).is_ok());
        assert!(Query::int("age", Order::Less, -1).typecheck(Datatype::Natural).is_err());
    }

    #[test]
    fn keywords_round_trip() {
        for o in Order::ALL {
            assert_eq!(o.keyword().parse::<Order>().unwrap(), o);
        }
        assert!("between".parse::<Order>().is_err());
    }

    #[test]
    fn denotations_over_naturals() {
        let young = Query::int("x", Order::Less, 40).denotation(Datatype::Natural).unwrap();
        assert_eq!(young, IntervalSet::range(0, 39));
        let ne = Query::int("x", Order::NotEqual, 5).denotation(Datatype::Natural).unwrap();
        assert!(!ne.contains(5) && ne.contains(4) && ne.contains(6) && !ne.contains(-1));
        // the denotation agrees with evaluation on a window
        let q = Query::Or(vec![
            Query::int("x", Order::Greater, 65),
            Query::And(vec![Query::int("x", Order::GreaterEqual, 10), Query::int("x", Order::Less, 20)]),
        ]);
        let den = q.denotation(Datatype::Natural).unwrap();
        for x in 0..=120 {
            assert_eq!(den.contains(x), q.evaluate(&Datum::Int(x)).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn relative_dates() {
        let q = Query::Compare {
            function: "year".into(),
            order: Order::GreaterEqual,
            constant: Constant::parse("today-10y", Datatype::Date).unwrap(),
        };
        let d = Datum::Date(NaiveDate::from_ymd_opt(2015, 6, 1).unwrap());
        assert!(matches!(q.evaluate(&d), Err(QueryError::MissingReferenceDate(_))));
        let reference = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap();
        let resolved = q.resolve(Some(reference)).unwrap();
        assert!(resolved.evaluate(&d).unwrap());
        let old = Datum::Date(NaiveDate::from_ymd_opt(2013, 12, 31).unwrap());
        assert!(!resolved.evaluate(&old).unwrap());
        assert_eq!(Constant::parse("today", Datatype::Date).unwrap().to_string(), "today");
        assert_eq!(Constant::parse("today-10y", Datatype::Date).unwrap().to_string(), "today-10y");
        assert!(Constant::parse("today*3", Datatype::Date).is_err());
    }
}
