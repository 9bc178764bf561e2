use std::collections::BTreeSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use proptest::prelude::*;

use softscale_core::enriched::{VPredicate, VRelation, VSpace};
use softscale_core::lattice::{
    build_lattice, enriched_derive_extent, enriched_derive_intent, ConceptId, FormalContext,
};
use softscale_core::scales::{
    bind_queries, biordinal, AbstractScale, Closure, DataDomain, Datatype, Datum, Implication, Order, Query,
};
use softscale_core::scaling::{composite_scaling, evaluate_query, simple_scaling, DescriptionFunction, Facet};
use softscale_core::valuation::{VValue, Valuation};

fn context(rows: &[Vec<bool>], m: usize) -> FormalContext {
    FormalContext::new(
        (0..rows.len()).map(|g| format!("g{g}")).collect(),
        (0..m).map(|a| format!("m{a}")).collect(),
        |g, a| rows[g][a],
    )
    .unwrap()
}

fn context_strategy() -> impl Strategy<Value = (Vec<Vec<bool>>, usize)> {
    (0usize..6, 0usize..6)
        .prop_flat_map(|(g, m)| (prop::collection::vec(prop::collection::vec(any::<bool>(), m), g), Just(m)))
}

fn bits(n: usize, mask: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if mask >> i & 1 == 1 {
            b.insert(i);
        }
    }
    b
}

proptest! {
    #[test]
    fn lattice_equals_brute_force((rows, m) in context_strategy()) {
        let ctx = context(&rows, m);
        let n = rows.len();
        // every concept is (A'', A') for some object set A
        let expected: BTreeSet<Vec<usize>> = (0..1usize << n)
            .map(|mask| ctx.common_attributes(&bits(n, mask)).ones().collect())
            .collect();
        let l = build_lattice(&ctx);
        let got: BTreeSet<Vec<usize>> = l.concepts().iter().map(|c| c.intent().ones().collect()).collect();
        prop_assert_eq!(got.len(), l.len());
        prop_assert_eq!(&got, &expected);

        let below = |a: ConceptId, b: ConceptId| a != b && l.leq(a, b).unwrap();
        for c in l.ids() {
            let covers: Vec<ConceptId> = l
                .ids()
                .filter(|&d| below(c, d) && !l.ids().any(|e| below(c, e) && below(e, d)))
                .collect();
            prop_assert_eq!(l.upper_covers(c).unwrap(), covers.as_slice());
        }
    }

    #[test]
    fn derivations_form_a_galois_connection((rows, m) in context_strategy(), a in any::<usize>(), b in any::<usize>()) {
        let ctx = context(&rows, m);
        let (objs, attrs) = (bits(rows.len(), a), bits(m, b));
        let left = attrs.is_subset(&ctx.common_attributes(&objs));
        let right = objs.is_subset(&ctx.common_objects(&attrs));
        prop_assert_eq!(left, right);
        let closed = ctx.close_extent(&objs);
        prop_assert!(objs.is_subset(&closed));
        prop_assert_eq!(ctx.close_extent(&closed), closed);
    }
}

fn scale_strategy() -> impl Strategy<Value = AbstractScale> {
    (1usize..6).prop_flat_map(|k| {
        let set = prop::collection::btree_set(0..k, 0..3);
        prop::collection::vec((set.clone(), set, any::<bool>()), 0..5).prop_map(move |imps| {
            let t = |i: &usize| format!("t{i}");
            let basis = imps
                .iter()
                .map(|(p, c, bottom)| {
                    let p: Vec<String> = p.iter().map(t).collect();
                    if *bottom {
                        Implication::incompatible(&p)
                    } else {
                        Implication::new(&p, &c.iter().map(t).collect::<Vec<_>>())
                    }
                })
                .collect();
            AbstractScale::new("s", (0..k).map(|i| t(&i)).collect(), basis).unwrap()
        })
    })
}

fn names(s: &AbstractScale, mask: usize) -> Vec<String> {
    (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s.terms()[i].clone()).collect()
}

/// Term sets respecting every basis implication.
fn models(s: &AbstractScale) -> Vec<usize> {
    let mask = |ts: &[String]| ts.iter().map(|t| 1usize << s.term_index(t).unwrap()).fold(0, |a, b| a | b);
    (0..1usize << s.len())
        .filter(|&x| {
            s.basis().iter().all(|imp| {
                let p = mask(&imp.premise);
                x & p != p || (!imp.is_incompatibility() && x & mask(&imp.conclusion) == mask(&imp.conclusion))
            })
        })
        .collect()
}

proptest! {
    #[test]
    fn implication_closure_is_a_closure_operator(s in scale_strategy(), x in any::<usize>(), y in any::<usize>()) {
        let full = (1usize << s.len()) - 1;
        let (x, y) = (x & full, (x | y) & full);
        let close = |m: usize| match s.implication_closure(&names(&s, m)).unwrap() {
            Closure::Consistent(ts) => ts.iter().map(|t| 1usize << s.term_index(t).unwrap()).fold(0, |a, b| a | b),
            Closure::Inconsistent => full,
        };
        let cx = close(x);
        prop_assert_eq!(cx & x, x);
        prop_assert_eq!(close(cx), cx);
        prop_assert_eq!(cx & close(y), cx);
    }

    #[test]
    fn follows_equals_semantic_entailment(s in scale_strategy(), x in any::<usize>(), y in any::<usize>(), bottom in any::<bool>()) {
        let full = (1usize << s.len()) - 1;
        let (x, y) = (x & full, y & full);
        // an empty conclusion is written ⇒ ⊥
        let bottom = bottom || y == 0;
        let imp = if bottom {
            Implication::incompatible(&names(&s, x))
        } else {
            Implication::new(&names(&s, x), &names(&s, y))
        };
        let semantic = models(&s).into_iter().filter(|&mdl| mdl & x == x).all(|mdl| !bottom && mdl & y == y);
        prop_assert_eq!(s.follows(&imp).unwrap(), semantic);
    }
}

fn fuzzy(x: u8) -> VValue {
    VValue::Fuzzy(f64::from(x) / 10.0)
}

fn space(n: usize) -> Arc<VSpace> {
    Arc::new(VSpace::discrete(Valuation::FUZZY, (0..n).map(|i| format!("x{i}")).collect()).unwrap())
}

fn relation(src: &Arc<VSpace>, tgt: &Arc<VSpace>, grades: &[u8]) -> VRelation {
    let w = tgt.len();
    VRelation::from_fn(src.clone(), tgt.clone(), |i, j| fuzzy(grades[i * w + j])).unwrap()
}

fn grades(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=10, n)
}

proptest! {
    #[test]
    fn fuzzy_residuation_is_adjoint(s in grades(6), t in grades(6), r in grades(4)) {
        let (x, y, z) = (space(2), space(3), space(2));
        let sigma = relation(&x, &y, &s);
        let tau = relation(&y, &z, &t);
        let rho = relation(&x, &z, &r);
        let lhs = sigma.compose(&tau).unwrap().leq(&rho).unwrap();
        let rhs = tau.leq(&sigma.residuate(&rho).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn enriched_derivations_close(rows in grades(12), ext in grades(4)) {
        let (g, m) = (space(4), space(3));
        let facet = Facet::new("f", relation(&g, &m, &rows)).unwrap();
        let e = VPredicate::new(g.clone(), ext.iter().map(|&x| fuzzy(x)).collect()).unwrap();
        let intent = enriched_derive_intent(&facet, &e).unwrap();
        let closed = enriched_derive_extent(&facet, &intent).unwrap();
        prop_assert!(e.leq(&closed).unwrap());
        let again = enriched_derive_intent(&facet, &closed).unwrap();
        prop_assert!(again.equiv(&intent).unwrap());
        prop_assert!(enriched_derive_extent(&facet, &again).unwrap().equiv(&closed).unwrap());
    }

    #[test]
    fn composite_scaling_with_identity_is_inert(rows in grades(12)) {
        let (g, m) = (space(4), space(3));
        let facet = Facet::new("f", relation(&g, &m, &rows)).unwrap();
        let out = composite_scaling(&VRelation::identity(g), &facet).unwrap();
        prop_assert!(out.relation().equiv(facet.relation()).unwrap());
    }

    #[test]
    fn boolean_simple_scaling_is_granulation(ages in prop::collection::vec(prop::option::of(0i64..120), 0..12)) {
        let scale = biordinal("Age", &["minor", "young", "working"], &["old", "retired"]).unwrap();
        let queries: Vec<(&str, Query)> = vec![
            ("minor", Query::int("age", Order::LessEqual, 18)),
            ("young", Query::int("age", Order::Less, 40)),
            ("working", Query::int("age", Order::LessEqual, 65)),
            ("retired", Query::int("age", Order::Greater, 65)),
            ("old", Query::int("age", Order::GreaterEqual, 80)),
        ];
        let assignment = queries.iter().map(|(t, q)| (t.to_string(), q.clone())).collect();
        let cs = bind_queries(&scale, &assignment, &DataDomain::of(Datatype::Integer), None).unwrap();
        let phi = DescriptionFunction::new(
            "age",
            "Person",
            Datatype::Integer,
            (0..ages.len()).map(|i| format!("p{i}")).collect(),
            ages.iter().map(|a| a.map(Datum::Int)).collect(),
        )
        .unwrap();
        let enriched = cs.to_enriched(Valuation::BOOLEAN, &phi.observed(), &Default::default()).unwrap();
        let facet = simple_scaling(&phi, &enriched).unwrap();
        for (g, age) in ages.iter().enumerate() {
            for (t, q) in &queries {
                let expected = match age {
                    Some(a) => evaluate_query(q, &Datum::Int(*a)).unwrap(),
                    None => VValue::Bool(false),
                };
                prop_assert_eq!(facet.value(&format!("p{g}"), t).unwrap(), expected);
            }
        }
    }
}
