//! Property tests for guard expressions and partition functions, checked
//! against an independent truth-table evaluator.

use proptest::prelude::*;

use featgames::logic::{validate_partition, FeatureExpr, FeatureFunction};
use featgames::{FeatureSet, Product, ProductSet};

/// A raw expression tree, built without the simplifying constructors, so the
/// reference evaluation is independent of the library's representation.
#[derive(Clone, Debug)]
enum RawExpr {
    T,
    F,
    Var(usize),
    Not(Box<RawExpr>),
    And(Box<RawExpr>, Box<RawExpr>),
    Or(Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    fn to_expr(&self, features: &FeatureSet) -> FeatureExpr {
        match self {
            RawExpr::T => FeatureExpr::tt(),
            RawExpr::F => FeatureExpr::ff(),
            RawExpr::Var(i) => FeatureExpr::var(features.name(*i % features.len())),
            RawExpr::Not(e) => FeatureExpr::not(&e.to_expr(features)),
            RawExpr::And(a, b) => {
                FeatureExpr::and(&a.to_expr(features), &b.to_expr(features))
            }
            RawExpr::Or(a, b) => FeatureExpr::or(&a.to_expr(features), &b.to_expr(features)),
        }
    }

    /// Truth-table evaluation under an explicit assignment.
    fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            RawExpr::T => true,
            RawExpr::F => false,
            RawExpr::Var(i) => assignment[*i % assignment.len()],
            RawExpr::Not(e) => !e.eval(assignment),
            RawExpr::And(a, b) => a.eval(assignment) && b.eval(assignment),
            RawExpr::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }
}

fn raw_expr() -> impl Strategy<Value = RawExpr> {
    let leaf = prop_oneof![
        Just(RawExpr::T),
        Just(RawExpr::F),
        (0usize..3).prop_map(RawExpr::Var),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| RawExpr::Not(Box::new(e))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| RawExpr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| RawExpr::Or(Box::new(a), Box::new(b))),
        ]
    })
}

const N_FEATURES: usize = 3;

fn features() -> FeatureSet {
    FeatureSet::new((0..N_FEATURES).map(|i| format!("f{i}"))).unwrap()
}

fn product_set(mask_bits: u8) -> ProductSet {
    // A non-empty subset of the 2^3 products, chosen by the low 8 bits.
    let members = (0..(1u64 << N_FEATURES))
        .filter(|&m| mask_bits & (1 << m) != 0)
        .map(Product::from_mask);
    let members: Vec<Product> = members.collect();
    let members = if members.is_empty() { vec![Product::empty()] } else { members };
    ProductSet::new(features(), members).unwrap()
}

fn assignment_of(p: Product) -> Vec<bool> {
    (0..N_FEATURES).map(|i| p.contains_index(i)).collect()
}

proptest! {
    #[test]
    fn eval_matches_the_truth_table(raw in raw_expr(), mask in 1u8..) {
        let ctx = product_set(mask);
        let expr = raw.to_expr(ctx.features());
        for &p in ctx.products() {
            prop_assert_eq!(
                expr.eval(p, ctx.features()).unwrap(),
                raw.eval(&assignment_of(p))
            );
        }
    }

    #[test]
    fn sat_and_equivalence_are_enumeration(a in raw_expr(), b in raw_expr(), mask in 1u8..) {
        let ctx = product_set(mask);
        let ea = a.to_expr(ctx.features());
        let eb = b.to_expr(ctx.features());
        let sat_expected = ctx.products().iter().any(|&p| a.eval(&assignment_of(p)));
        prop_assert_eq!(ctx.sat(&ea).unwrap(), sat_expected);
        let equiv_expected = ctx
            .products()
            .iter()
            .all(|&p| a.eval(&assignment_of(p)) == b.eval(&assignment_of(p)));
        prop_assert_eq!(ctx.equivalent(&ea, &eb).unwrap(), equiv_expected);
    }

    #[test]
    fn parser_round_trips(raw in raw_expr()) {
        let fs = features();
        let expr = raw.to_expr(&fs);
        let reparsed = FeatureExpr::parse(&expr.to_string(), &fs).unwrap();
        let all = ProductSet::all(fs).unwrap();
        prop_assert!(all.equivalent(&expr, &reparsed).unwrap());
    }

    #[test]
    fn reduce_preserves_lookups_and_is_idempotent(seed in 0u64.., mask in 1u8..) {
        let ctx = product_set(mask);
        let f = featgames::random::random_feature_function(&ctx, 3, seed).unwrap();
        let reduced = f.reduce();
        prop_assert!(reduced.is_canonical());
        prop_assert!(reduced.is_partition(&ctx));
        for i in 0..ctx.len() {
            prop_assert_eq!(reduced.value_at_index(i), f.value_at_index(i));
        }
        let twice = reduced.reduce();
        prop_assert_eq!(twice.cell_count(), reduced.cell_count());
        for i in 0..ctx.len() {
            prop_assert_eq!(twice.value_at_index(i), reduced.value_at_index(i));
        }
    }

    #[test]
    fn combine_satisfies_the_lookup_law(s1 in 0u64.., s2 in 0u64.., mask in 1u8.., which in 0u8..3) {
        let ctx = product_set(mask);
        let f1 = featgames::random::random_feature_function(&ctx, 5, s1).unwrap();
        let f2 = featgames::random::random_feature_function(&ctx, 5, s2).unwrap();
        let op = |a: &u64, b: &u64| match which {
            0 => *a.min(b),
            1 => *a.max(b),
            _ => a + b,
        };
        let combined = f1.combine(&f2, op);
        prop_assert!(combined.is_canonical());
        prop_assert!(combined.is_partition(&ctx));
        for i in 0..ctx.len() {
            prop_assert_eq!(
                *combined.value_at_index(i),
                op(f1.value_at_index(i), f2.value_at_index(i))
            );
        }
    }

    #[test]
    fn restrict_satisfies_the_lookup_law(seed in 0u64.., raw in raw_expr(), mask in 1u8..) {
        let ctx = product_set(mask);
        let f = featgames::random::random_feature_function(&ctx, 5, seed).unwrap();
        let guard = raw.to_expr(ctx.features());
        let neutral = 99u64;
        let restricted = f.restrict(&ctx, &guard, neutral).unwrap();
        prop_assert!(restricted.is_partition(&ctx));
        for (i, &p) in ctx.products().iter().enumerate() {
            let expected = if raw.eval(&assignment_of(p)) {
                *f.value_at_index(i)
            } else {
                neutral
            };
            prop_assert_eq!(*restricted.value_at_index(i), expected);
        }
    }

    #[test]
    fn characteristic_formulas_identify_products(mask in 1u8..) {
        let ctx = product_set(mask);
        for &p in ctx.products() {
            let gamma = p.characteristic_formula(ctx.features());
            for &q in ctx.products() {
                prop_assert_eq!(gamma.eval(q, ctx.features()).unwrap(), p == q);
            }
        }
    }

    #[test]
    fn operation_outputs_validate_as_partitions(s1 in 0u64.., s2 in 0u64.., mask in 1u8..) {
        let ctx = product_set(mask);
        let f1 = featgames::random::random_feature_function(&ctx, 4, s1).unwrap();
        let f2 = featgames::random::random_feature_function(&ctx, 4, s2).unwrap();
        let combined = f1.combine(&f2, |a, b| a.max(b) - a.min(b));
        let guards: Vec<FeatureExpr> =
            combined.cells().iter().map(|c| c.guard.clone()).collect();
        prop_assert!(validate_partition(&ctx, &guards).unwrap());
    }
}

#[test]
fn function_lookup_rejects_foreign_products() {
    let ctx = product_set(0b0110);
    let f = FeatureFunction::constant(&ctx, 1);
    let foreign = Product::from_mask(0b111);
    assert!(f.lookup(&ctx, foreign).is_err());
}
