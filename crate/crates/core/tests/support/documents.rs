//! Random ontology and collection documents for round-trip checks.

use proptest::prelude::*;
use softscale_core::markup::{AttributeDecl, CollectionDoc, FunctionSchema, OntologyDoc, ScaleDecl};
use softscale_core::scales::{
    AbstractScale, Constant, Datatype, DateUnit, Datum, Implication, Order, PiecewiseLinear, Query,
};

pub fn name() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[a-z]{1,8}",
        1 => "[a-z<>&\"' \t\n]{1,6}",
        1 => "[é漢字ß]{1,3}",
    ]
}

pub fn scale_strategy() -> impl Strategy<Value = AbstractScale> {
    (name(), prop::collection::btree_set(name(), 1..6)).prop_flat_map(|(n, terms)| {
        let terms: Vec<String> = terms.into_iter().collect();
        let k = terms.len();
        let subset = prop::collection::vec(0..k, 0..3);
        let imp = (subset.clone(), prop::collection::vec(0..k, 0..3));
        prop::collection::vec(imp, 0..5).prop_map(move |imps| {
            let basis = imps
                .into_iter()
                .map(|(p, c)| Implication {
                    premise: p.iter().map(|&i| terms[i].clone()).collect(),
                    conclusion: c.iter().map(|&i| terms[i].clone()).collect(),
                })
                .collect();
            AbstractScale::new(n.clone(), terms.clone(), basis).unwrap()
        })
    })
}

pub fn ontology_strategy() -> impl Strategy<Value = OntologyDoc> {
    (
        name(),
        "[0-9]\\.[0-9]",
        prop::collection::btree_set(name(), 1..3),
        prop::collection::btree_map(
            name(),
            (
                prop::sample::select(vec![Datatype::Integer, Datatype::Date, Datatype::String]),
                prop::collection::vec(name(), 0..3),
            ),
            1..4,
        ),
        prop::collection::btree_map(name(), scale_strategy(), 0..3),
    )
        .prop_map(|(n, version, cats, fns, scales)| {
            let categories: Vec<String> = cats.into_iter().collect();
            let first = categories[0].clone();
            OntologyDoc {
                name: n,
                version,
                functions: fns
                    .into_iter()
                    .map(|(name, (image_type, values))| FunctionSchema {
                        name,
                        arg_type: first.clone(),
                        image_type,
                        values: if image_type == Datatype::String { values } else { Vec::new() },
                    })
                    .collect(),
                scales: scales
                    .into_values()
                    .enumerate()
                    .map(|(i, s)| {
                        // scale names must differ; prefix with the position
                        let renamed =
                            AbstractScale::new(format!("{i}{}", s.name()), s.terms().to_vec(), s.basis().to_vec())
                                .unwrap();
                        ScaleDecl { category: first.clone(), scale: renamed }
                    })
                    .collect(),
                categories,
            }
        })
}

pub fn constant(datatype: Datatype) -> BoxedStrategy<Constant> {
    match datatype {
        Datatype::Integer | Datatype::Natural => any::<i64>().prop_map(|n| Constant::Value(Datum::Int(n))).boxed(),
        Datatype::Date => prop_oneof![
            (1900i32..2100, 1u32..13, 1u32..29).prop_map(|(y, m, d)| {
                Constant::Value(Datum::Date(chrono::NaiveDate::from_ymd_opt(y, m, d).unwrap()))
            }),
            (-50i64..50, prop::sample::select(vec![DateUnit::Days, DateUnit::Months, DateUnit::Years]))
                .prop_map(|(offset, unit)| Constant::RelativeDate { offset, unit }),
        ]
        .boxed(),
        Datatype::String => "[a-z &<>\"]{0,6}".prop_map(|s| Constant::Value(Datum::Str(s))).boxed(),
    }
}

pub fn query(function: String, datatype: Datatype) -> impl Strategy<Value = Query> {
    let leaf = (prop::sample::select(Order::ALL.to_vec()), constant(datatype))
        .prop_map(move |(order, constant)| Query::Compare { function: function.clone(), order, constant });
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(Query::And),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Query::Or),
            inner.prop_map(Query::negate),
        ]
    })
}

pub fn document_pair() -> impl Strategy<Value = (OntologyDoc, CollectionDoc)> {
    ontology_strategy().prop_flat_map(|onto| {
        let mut slots: Vec<(String, String)> = Vec::new();
        for s in &onto.scales {
            for t in s.scale.terms() {
                slots.push((s.scale.name().to_string(), t.clone()));
            }
        }
        let f = onto.functions[0].clone();
        let attrs = prop::collection::vec(
            (
                query(f.name.clone(), f.image_type),
                name(),
                prop::option::of(prop::collection::btree_map(-100i32..100, 0.0f64..1.0, 1..4)),
            ),
            slots.len(),
        );
        (Just(onto), Just(slots), attrs, name(), name()).prop_map(|(onto, slots, attrs, kind, scope)| {
            let attributes = slots
                .into_iter()
                .zip(attrs)
                .map(|((scale, key), (query, variable, points))| AttributeDecl {
                    scale,
                    key,
                    category: variable.to_uppercase(),
                    variable,
                    query,
                    membership: points.map(|p| {
                        PiecewiseLinear::new(p.into_iter().map(|(x, y)| (f64::from(x) / 3.0, y)).collect()).unwrap()
                    }),
                })
                .collect();
            let c =
                CollectionDoc { kind, scope, ontology: onto.name.clone(), version: onto.version.clone(), attributes };
            (onto, c)
        })
    })
}
