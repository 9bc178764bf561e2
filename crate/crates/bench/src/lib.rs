//! Seeded workloads shared by the benchmarks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use softscale_core::scales::{
    bind_queries, biordinal, DataDomain, Datatype, Datum, Membership, Order, PiecewiseLinear,
};
use softscale_core::{ConcreteScale, DescriptionFunction, FormalContext, Query, VRelation, VSpace, VValue, Valuation};

/// A random context where each cross is present with probability `density`.
pub fn random_context(objects: usize, attributes: usize, density: f64, seed: u64) -> FormalContext {
    let mut rng = StdRng::seed_from_u64(seed);
    let cells: Vec<bool> = (0..objects * attributes).map(|_| rng.random_bool(density)).collect();
    FormalContext::new(
        (0..objects).map(|g| format!("g{g}")).collect(),
        (0..attributes).map(|m| format!("m{m}")).collect(),
        |g, m| cells[g * attributes + m],
    )
    .expect("generated names are unique")
}

/// The Age scale bound to its integer queries.
pub fn age_scale() -> ConcreteScale {
    let scale = biordinal("Age", &["minor", "young", "working"], &["old", "retired"]).expect("age scale");
    let assignment: BTreeMap<String, Query> = [
        ("minor", Query::int("age", Order::LessEqual, 18)),
        ("young", Query::int("age", Order::Less, 40)),
        ("working", Query::int("age", Order::LessEqual, 65)),
        ("retired", Query::int("age", Order::Greater, 65)),
        ("old", Query::int("age", Order::GreaterEqual, 80)),
    ]
    .into_iter()
    .map(|(t, q)| (t.to_string(), q))
    .collect();
    bind_queries(&scale, &assignment, &DataDomain::of(Datatype::Integer), None).expect("consistent queries")
}

/// The fuzzy reading of `young`: 1 up to 20, falling to 0 at 40.
pub fn young_membership() -> BTreeMap<String, Membership> {
    let young = PiecewiseLinear::new(vec![(20.0, 1.0), (40.0, 0.0)]).expect("increasing points");
    [("young".to_string(), Membership::Piecewise(young))].into()
}

/// `n` people with ages in 0..=110, one in twenty unknown.
pub fn ages(n: usize, seed: u64) -> DescriptionFunction {
    let mut rng = StdRng::seed_from_u64(seed);
    let values = (0..n).map(|_| (!rng.random_ratio(1, 20)).then(|| Datum::Int(rng.random_range(0..=110)))).collect();
    DescriptionFunction::new("age", "Person", Datatype::Integer, (0..n).map(|i| format!("p{i}")).collect(), values)
        .expect("matching lengths")
}

/// A discrete fuzzy space with elements `{prefix}0`, `{prefix}1`, ...
pub fn fuzzy_space(n: usize, prefix: &str) -> Arc<VSpace> {
    Arc::new(VSpace::discrete(Valuation::FUZZY, (0..n).map(|i| format!("{prefix}{i}")).collect()).expect("names"))
}

/// A random fuzzy relation between two spaces.
pub fn fuzzy_relation(source: &Arc<VSpace>, target: &Arc<VSpace>, seed: u64) -> VRelation {
    let mut rng = StdRng::seed_from_u64(seed);
    VRelation::from_fn(source.clone(), target.clone(), |_, _| VValue::Fuzzy(rng.random())).expect("grades in [0,1]")
}
