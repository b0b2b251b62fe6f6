//! Feature sets, products, guard expressions and canonical guard partitions.
//!
//! All satisfiability and equivalence questions are decided relative to an
//! explicit, finite product set by enumeration.

mod expr;
mod function;

pub use expr::{parse_expr, FeatureExpr};
pub use function::{validate_partition, Denotation, FeatureFunction, FunctionCell};
pub(crate) use function::empty_denotation;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the feature count when expanding the `"products": "all"`
/// shorthand; beyond this the explicit product list would be unreasonable.
pub const MAX_ALL_FEATURES: usize = 20;

/// An ordered set of distinct feature names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl FeatureSet {
    pub fn new(names: impl IntoIterator<Item = String>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().collect();
        if names.len() > 64 {
            return Err(Error::validation("more than 64 features are not supported"));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::validation(format!(
                    "feature name `{name}` is not a valid identifier"
                )));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate feature name `{name}`")));
            }
        }
        Ok(FeatureSet { names, index })
    }

    pub fn empty() -> Self {
        FeatureSet { names: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    if name == "true" || name == "false" {
        return false;
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A subset of a feature set, stored as a bitmask over feature indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Product {
    mask: u64,
}

impl Product {
    pub fn empty() -> Self {
        Product { mask: 0 }
    }

    pub fn from_mask(mask: u64) -> Self {
        Product { mask }
    }

    pub fn from_names(features: &FeatureSet, names: &[String]) -> Result<Self> {
        let mut mask = 0u64;
        for name in names {
            let i = features.index_of(name).ok_or_else(|| {
                Error::validation(format!("product member `{name}` is not a declared feature"))
            })?;
            mask |= 1 << i;
        }
        Ok(Product { mask })
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.mask & (1 << index) != 0
    }

    pub fn member_names<'a>(&self, features: &'a FeatureSet) -> Vec<&'a str> {
        (0..features.len())
            .filter(|&i| self.contains_index(i))
            .map(|i| features.name(i))
            .collect()
    }

    /// Sort key ordering products lexicographically along the feature order,
    /// absent before present, first feature most significant.
    fn lex_key(&self, n_features: usize) -> u64 {
        let mut key = 0u64;
        for i in 0..n_features {
            key = (key << 1) | u64::from(self.contains_index(i));
        }
        key
    }

    /// The characteristic formula of this product: the conjunction of all
    /// member features and the negations of all non-members. Exactly this
    /// product satisfies it.
    pub fn characteristic_formula(&self, features: &FeatureSet) -> FeatureExpr {
        let mut expr = FeatureExpr::tt();
        for i in 0..features.len() {
            let var = FeatureExpr::var(features.name(i));
            let literal = if self.contains_index(i) { var } else { FeatureExpr::not(&var) };
            expr = FeatureExpr::and(&expr, &literal);
        }
        expr
    }

    pub fn render(&self, features: &FeatureSet) -> String {
        format!("{{{}}}", self.member_names(features).join(","))
    }
}

impl fmt::Debug for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Product({:#b})", self.mask)
    }
}

/// A non-empty, deterministically ordered set of products together with the
/// feature set they range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSet {
    features: FeatureSet,
    products: Vec<Product>,
}

impl ProductSet {
    pub fn new(features: FeatureSet, products: impl IntoIterator<Item = Product>) -> Result<Self> {
        let mut products: Vec<Product> = products.into_iter().collect();
        let n = features.len();
        for p in &products {
            if n < 64 && p.mask >> n != 0 {
                return Err(Error::validation(
                    "product contains features outside the feature set",
                ));
            }
        }
        products.sort_by_key(|p| p.lex_key(n));
        products.dedup();
        if products.is_empty() {
            return Err(Error::validation("product set must be non-empty"));
        }
        Ok(ProductSet { features, products })
    }

    /// All `2^n` subsets of the feature set.
    pub fn all(features: FeatureSet) -> Result<Self> {
        let n = features.len();
        if n > MAX_ALL_FEATURES {
            return Err(Error::validation(format!(
                "`products: all` with {n} features would enumerate 2^{n} products"
            )));
        }
        let products = (0..(1u64 << n)).map(Product::from_mask);
        ProductSet::new(features, products)
    }

    pub fn features(&self) -> &FeatureSet {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn products(&self) -> &[Product] {
        &self.products
    }

    pub fn product(&self, index: usize) -> Product {
        self.products[index]
    }

    pub fn index_of(&self, product: Product) -> Option<usize> {
        self.products.iter().position(|&p| p == product)
    }

    /// The set of products satisfying `expr`, as a bitset over product
    /// indices.
    pub fn denotation(&self, expr: &FeatureExpr) -> Result<Denotation> {
        let mut denot = function::empty_denotation(self.len());
        for (i, &p) in self.products.iter().enumerate() {
            if expr.eval(p, &self.features)? {
                denot.set(i, true);
            }
        }
        Ok(denot)
    }

    /// True iff some product satisfies `expr`.
    pub fn sat(&self, expr: &FeatureExpr) -> Result<bool> {
        for &p in &self.products {
            if expr.eval(p, &self.features)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// True iff `a` and `b` agree on every product.
    pub fn equivalent(&self, a: &FeatureExpr, b: &FeatureExpr) -> Result<bool> {
        for &p in &self.products {
            if a.eval(p, &self.features)? != b.eval(p, &self.features)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_products() -> ProductSet {
        let features = FeatureSet::new(["euro".into(), "dollar".into()]).unwrap();
        let e = Product::from_names(&features, &["euro".into()]).unwrap();
        let d = Product::from_names(&features, &["dollar".into()]).unwrap();
        let ed = Product::from_names(&features, &["euro".into(), "dollar".into()]).unwrap();
        ProductSet::new(features, [e, d, ed]).unwrap()
    }

    #[test]
    fn product_ordering_is_lexicographic_in_feature_order() {
        let px = ProductSet::all(FeatureSet::new(["a".into(), "b".into()]).unwrap()).unwrap();
        let rendered: Vec<String> =
            px.products().iter().map(|p| p.render(px.features())).collect();
        assert_eq!(rendered, vec!["{}", "{b}", "{a}", "{a,b}"]);
    }

    #[test]
    fn sat_over_product_set() {
        let px = fig1_products();
        let features = px.features().clone();
        let both = FeatureExpr::parse("euro && dollar", &features).unwrap();
        assert!(px.sat(&both).unwrap());
        let contradiction = FeatureExpr::parse("euro && !euro", &features).unwrap();
        assert!(!px.sat(&contradiction).unwrap());
        // No product of the coffee machine lacks both coins.
        let neither = FeatureExpr::parse("!euro && !dollar", &features).unwrap();
        assert!(!px.sat(&neither).unwrap());
    }

    #[test]
    fn equivalence_over_product_set() {
        let px = fig1_products();
        let features = px.features().clone();
        let a = FeatureExpr::parse("euro || !euro", &features).unwrap();
        assert!(px.equivalent(&a, &FeatureExpr::tt()).unwrap());
        let e = FeatureExpr::parse("euro", &features).unwrap();
        let absorbed = FeatureExpr::parse("euro && (euro || dollar)", &features).unwrap();
        assert!(px.equivalent(&e, &absorbed).unwrap());
        let d = FeatureExpr::parse("dollar", &features).unwrap();
        // Differ on {euro}.
        assert!(!px.equivalent(&e, &d).unwrap());
    }

    #[test]
    fn characteristic_formulas() {
        let features = FeatureSet::new(["euro".into(), "dollar".into()]).unwrap();
        let e = Product::from_names(&features, &["euro".into()]).unwrap();
        assert_eq!(e.characteristic_formula(&features).to_string(), "euro && !dollar");

        let f = FeatureSet::new(["f".into()]).unwrap();
        assert_eq!(Product::empty().characteristic_formula(&f).to_string(), "!f");

        let fb = FeatureSet::new(["fextra".into(), "fbrock".into()]).unwrap();
        let all = Product::from_names(&fb, &["fextra".into(), "fbrock".into()]).unwrap();
        assert_eq!(all.characteristic_formula(&fb).to_string(), "fextra && fbrock");

        // Exactly the defining product satisfies its characteristic formula.
        let px = ProductSet::all(fb).unwrap();
        for &p in px.products() {
            let gamma = p.characteristic_formula(px.features());
            for &q in px.products() {
                assert_eq!(gamma.eval(q, px.features()).unwrap(), p == q);
            }
        }
    }

    #[test]
    fn all_expansion_and_limits() {
        let px = ProductSet::all(FeatureSet::empty()).unwrap();
        assert_eq!(px.len(), 1);
        assert_eq!(px.product(0), Product::empty());

        let big = FeatureSet::new((0..21).map(|i| format!("f{i}"))).unwrap();
        assert!(ProductSet::all(big).is_err());
    }

    #[test]
    fn rejects_invalid_feature_names() {
        assert!(FeatureSet::new(["9x".into()]).is_err());
        assert!(FeatureSet::new(["true".into()]).is_err());
        assert!(FeatureSet::new(["a".into(), "a".into()]).is_err());
    }
}
