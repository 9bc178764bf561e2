use std::fmt;

use serde::Serialize;

/// A finite union of closed integer intervals, kept sorted, disjoint and
/// non-adjacent so that equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalSet {
    ranges: Vec<(i64, i64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { ranges: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet { ranges: vec![(i64::MIN, i64::MAX)] }
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn range(lo: i64, hi: i64) -> Self {
        if lo > hi {
            Self::empty()
        } else {
            IntervalSet { ranges: vec![(lo, hi)] }
        }
    }

    fn normalize(mut ranges: Vec<(i64, i64)>) -> Self {
        ranges.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(ranges.len());
        for (lo, hi) in ranges {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { ranges: out }
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.ranges.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    pub fn first(&self) -> Option<i64> {
        self.ranges.first().map(|r| r.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalize(self.ranges.iter().chain(&other.ranges).copied().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a_lo, a_hi) = self.ranges[i];
            let (b_lo, b_hi) = other.ranges[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { ranges: out }
    }

    /// Complement within the full `i64` line.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut next = Some(i64::MIN);
        for &(lo, hi) in &self.ranges {
            if let Some(start) = next {
                if start < lo {
                    out.push((start, lo - 1));
                }
            }
            next = hi.checked_add(1);
        }
        if let Some(start) = next {
            out.push((start, i64::MAX));
        }
        IntervalSet { ranges: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ranges.is_empty() {
            return f.write_str("∅");
        }
        for (i, &(lo, hi)) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            let l = if lo == i64::MIN { "-∞".to_string() } else { lo.to_string() };
            let h = if hi == i64::MAX { "∞".to_string() } else { hi.to_string() };
            write!(f, "[{l}, {h}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((-20i64..20, 0i64..6), 0..4)
            .prop_map(|rs| IntervalSet::normalize(rs.into_iter().map(|(lo, len)| (lo, lo + len)).collect()))
    }

    fn members(s: &IntervalSet) -> Vec<i64> {
        (-30..30).filter(|&x| s.contains(x)).collect()
    }

    proptest! {
        #[test]
        fn set_algebra_matches_membership(a in arb_set(), b in arb_set()) {
            for x in -30..30 {
                prop_assert_eq!(a.union(&b).contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(a.intersect(&b).contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(a.complement().contains(x), !a.contains(x));
            }
            let subset = members(&a).iter().all(|x| b.contains(*x));
            prop_assert_eq!(a.is_subset(&b), subset);
            prop_assert_eq!(a.complement().complement(), a);
        }
    }

    #[test]
    fn adjacent_ranges_merge() {
        let s = IntervalSet::range(0, 3).union(&IntervalSet::range(4, 9));
        assert_eq!(s, IntervalSet::range(0, 9));
        assert_eq!(IntervalSet::full().complement(), IntervalSet::empty());
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::full());
    }
}
