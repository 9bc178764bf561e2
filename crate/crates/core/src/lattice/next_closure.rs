//! Lectic-order enumeration of all closed sets of a closure operator on
//! `{0, .., n-1}`. Index 0 is the most significant position, so the
//! output starts with the closure of the empty set and ends with the
//! full set.

use fixedbitset::FixedBitSet;

pub fn closed_sets<F>(n: usize, close: F) -> Vec<FixedBitSet>
where
    F: Fn(&FixedBitSet) -> FixedBitSet,
{
    let mut current = close(&FixedBitSet::with_capacity(n));
    let mut out = vec![current.clone()];
    while let Some(next) = next_closed(n, &current, &close) {
        out.push(next.clone());
        current = next;
    }
    out
}

fn next_closed<F>(n: usize, current: &FixedBitSet, close: &F) -> Option<FixedBitSet>
where
    F: Fn(&FixedBitSet) -> FixedBitSet,
{
    let mut prefix = current.clone();
    for i in (0..n).rev() {
        if prefix.contains(i) {
            prefix.set(i, false);
            continue;
        }
        let mut seed = prefix.clone();
        seed.insert(i);
        let candidate = close(&seed);
        // canonicity: nothing new below position i
        let fresh_below = candidate.ones().take_while(|&j| j < i).any(|j| !prefix.contains(j));
        if !fresh_below {
            return Some(candidate);
        }
    }
    None
}
