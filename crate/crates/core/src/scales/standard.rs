use super::{AbstractScale, Implication, ScaleError};

fn owned<S: AsRef<str>>(xs: &[S]) -> Vec<String> {
    xs.iter().map(|s| s.as_ref().to_string()).collect()
}

fn chain(terms: &[String]) -> impl Iterator<Item = Implication> + '_ {
    terms.windows(2).map(|w| Implication::new(&[&w[0]], &[&w[1]]))
}

fn non_empty(name: &str, terms: &[String]) -> Result<(), ScaleError> {
    if terms.is_empty() {
        Err(ScaleError::EmptyTerms(name.to_string()))
    } else {
        Ok(())
    }
}

/// Pairwise incompatible terms.
pub fn nominal<S: AsRef<str>>(name: &str, values: &[S]) -> Result<AbstractScale, ScaleError> {
    let terms = owned(values);
    non_empty(name, &terms)?;
    let mut basis = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            basis.push(Implication::incompatible(&[&terms[i], &terms[j]]));
        }
    }
    AbstractScale::new(name, terms, basis)
}

/// A chain `m1 ⇒ m2 ⇒ … ⇒ mn`.
pub fn ordinal<S: AsRef<str>>(name: &str, values: &[S]) -> Result<AbstractScale, ScaleError> {
    let terms = owned(values);
    non_empty(name, &terms)?;
    let basis = chain(&terms).collect();
    AbstractScale::new(name, terms, basis)
}

/// Two chains whose most general terms are incompatible. Terms are
/// declared as the first chain followed by the second chain read from its
/// most general end, so the two extremes sit at either end of the list.
pub fn biordinal<S: AsRef<str>>(name: &str, first: &[S], second: &[S]) -> Result<AbstractScale, ScaleError> {
    let a = owned(first);
    let b = owned(second);
    non_empty(name, &a)?;
    non_empty(name, &b)?;
    let mut basis: Vec<Implication> = chain(&a).collect();
    basis.extend(chain(&b));
    basis.push(Implication::incompatible(&[a.last().unwrap(), b.last().unwrap()]));
    let terms = a.iter().cloned().chain(b.iter().rev().cloned()).collect();
    AbstractScale::new(name, terms, basis)
}

/// Terms `<=v` and `>=v` for each value: the `<=` chain ascending, the
/// `>=` chain descending, and `<=vi ∧ >=v(i+1)` incompatible.
pub fn interordinal<S: AsRef<str>>(name: &str, values: &[S]) -> Result<AbstractScale, ScaleError> {
    let vs = owned(values);
    non_empty(name, &vs)?;
    let le: Vec<String> = vs.iter().map(|v| format!("<={v}")).collect();
    let ge: Vec<String> = vs.iter().map(|v| format!(">={v}")).collect();
    let ge_desc: Vec<String> = ge.iter().rev().cloned().collect();
    let mut basis: Vec<Implication> = chain(&le).collect();
    basis.extend(chain(&ge_desc));
    for i in 0..vs.len().saturating_sub(1) {
        basis.push(Implication::incompatible(&[&le[i], &ge[i + 1]]));
    }
    let terms = le.into_iter().chain(ge).collect();
    AbstractScale::new(name, terms, basis)
}
