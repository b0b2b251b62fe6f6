//! Canonical functions from feature expressions to values, represented by
//! guard partitions.

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::logic::{FeatureExpr, Product, ProductSet};

/// The set of products satisfying a guard, as a bitset over the indices of a
/// [`ProductSet`].
pub type Denotation = BitVec<u64, Lsb0>;

pub(crate) fn empty_denotation(len: usize) -> Denotation {
    bitvec![u64, Lsb0; 0; len]
}

pub(crate) fn full_denotation(len: usize) -> Denotation {
    bitvec![u64, Lsb0; 1; len]
}

/// One cell of a guard partition together with its value.
#[derive(Clone, Debug)]
pub struct FunctionCell<X> {
    pub guard: FeatureExpr,
    pub(crate) denot: Denotation,
    pub value: X,
}

/// A function `Bool(N) -> X`, represented by a guard partition of the product
/// set with one value per cell.
///
/// Cells are kept in a deterministic order: sorted by the first product
/// (in product-set order) satisfying their guard. The representation is
/// *canonical* when distinct cells carry distinct values; [`reduce`] merges
/// equal-valued cells to restore canonicity.
///
/// [`reduce`]: FeatureFunction::reduce
#[derive(Clone, Debug)]
pub struct FeatureFunction<X> {
    cells: Vec<FunctionCell<X>>,
}

impl<X> FeatureFunction<X> {
    /// The constant function, represented by the single cell `true`.
    pub fn constant(ctx: &ProductSet, value: X) -> Self {
        FeatureFunction {
            cells: vec![FunctionCell {
                guard: FeatureExpr::tt(),
                denot: full_denotation(ctx.len()),
                value,
            }],
        }
    }

    /// Builds a function from guard/value pairs, validating that the guards
    /// form a partition of the product set.
    pub fn from_cells(
        ctx: &ProductSet,
        cells: impl IntoIterator<Item = (FeatureExpr, X)>,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (guard, value) in cells {
            let denot = ctx.denotation(&guard)?;
            out.push(FunctionCell { guard, denot, value });
        }
        if !denotations_form_partition(ctx.len(), out.iter().map(|c| &c.denot)) {
            return Err(Error::validation("guards do not form a partition of the product set"));
        }
        let mut f = FeatureFunction { cells: out };
        f.sort_cells();
        Ok(f)
    }

    pub(crate) fn from_cells_unchecked(cells: Vec<FunctionCell<X>>) -> Self {
        let mut f = FeatureFunction { cells };
        f.sort_cells();
        f
    }

    fn sort_cells(&mut self) {
        self.cells.sort_by_key(|c| c.denot.first_one().unwrap_or(usize::MAX));
    }

    pub fn cells(&self) -> &[FunctionCell<X>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The value at the product with the given product-set index.
    pub fn value_at_index(&self, index: usize) -> &X {
        self.cells
            .iter()
            .find(|c| c.denot[index])
            .map(|c| &c.value)
            .expect("partition covers every product")
    }

    /// The value at `product`, which must be a member of `ctx`.
    pub fn lookup(&self, ctx: &ProductSet, product: Product) -> Result<&X> {
        let index = ctx.index_of(product).ok_or_else(|| {
            Error::domain(format!(
                "product {} is not in the product set",
                product.render(ctx.features())
            ))
        })?;
        Ok(self.value_at_index(index))
    }

    /// True iff the cell guards form a partition of the product set.
    pub fn is_partition(&self, ctx: &ProductSet) -> bool {
        denotations_form_partition(ctx.len(), self.cells.iter().map(|c| &c.denot))
    }

    /// Applies `map` to every cell value, keeping the partition.
    pub fn map<Y>(&self, map: impl Fn(&X) -> Y) -> FeatureFunction<Y> {
        FeatureFunction {
            cells: self
                .cells
                .iter()
                .map(|c| FunctionCell {
                    guard: c.guard.clone(),
                    denot: c.denot.clone(),
                    value: map(&c.value),
                })
                .collect(),
        }
    }
}

impl<X: Clone + PartialEq> FeatureFunction<X> {
    /// True iff distinct cells carry distinct values.
    pub fn is_canonical(&self) -> bool {
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                if a.value == b.value {
                    return false;
                }
            }
        }
        true
    }

    /// Merges equal-valued cells by disjunction, yielding the canonical
    /// representation. Lookup at every product is unchanged.
    pub fn reduce(&self) -> Self {
        let mut merged: Vec<FunctionCell<X>> = Vec::new();
        for cell in &self.cells {
            match merged.iter_mut().find(|m| m.value == cell.value) {
                Some(m) => {
                    m.guard = FeatureExpr::or(&m.guard, &cell.guard);
                    let denot = m.denot.clone() | &cell.denot;
                    m.denot = denot;
                }
                None => merged.push(cell.clone()),
            }
        }
        FeatureFunction::from_cells_unchecked(merged)
    }

    /// Pairwise combination: the result's cells are the satisfiable
    /// intersections of the operands' cells, valued through `op`, reduced to
    /// canonical form.
    pub fn combine(&self, other: &Self, op: impl Fn(&X, &X) -> X) -> Self {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let denot = a.denot.clone() & &b.denot;
                if denot.any() {
                    let guard = and_reusing(&a.guard, &a.denot, &b.guard, &b.denot, &denot);
                    cells.push(FunctionCell { guard, denot, value: op(&a.value, &b.value) });
                }
            }
        }
        FeatureFunction::from_cells_unchecked(cells).reduce()
    }

    /// Intersects every cell with `guard`, mapping the kept values through
    /// `map`; products outside `guard` are collected in a single `!guard`
    /// cell carrying `neutral`.
    pub fn restrict_with(
        &self,
        ctx: &ProductSet,
        guard: &FeatureExpr,
        guard_denot: &Denotation,
        neutral: X,
        map: impl Fn(&X) -> X,
    ) -> Self {
        let mut cells = Vec::new();
        for cell in &self.cells {
            let denot = cell.denot.clone() & guard_denot;
            if denot.any() {
                let g = and_reusing(guard, guard_denot, &cell.guard, &cell.denot, &denot);
                cells.push(FunctionCell { guard: g, denot, value: map(&cell.value) });
            }
        }
        let complement = full_denotation(ctx.len()) & !guard_denot.clone();
        if complement.any() {
            cells.push(FunctionCell {
                guard: FeatureExpr::not(guard),
                denot: complement,
                value: neutral,
            });
        }
        FeatureFunction::from_cells_unchecked(cells)
    }

    /// [`restrict_with`](Self::restrict_with) with the identity value map.
    pub fn restrict(&self, ctx: &ProductSet, guard: &FeatureExpr, neutral: X) -> Result<Self> {
        let denot = ctx.denotation(guard)?;
        Ok(self.restrict_with(ctx, guard, &denot, neutral, |x| x.clone()))
    }

    /// Product-wise semantic equality.
    pub fn semantically_equal(&self, other: &Self, ctx: &ProductSet) -> bool {
        (0..ctx.len()).all(|i| self.value_at_index(i) == other.value_at_index(i))
    }
}

/// Conjunction of two guards that reuses an operand when the intersection
/// does not actually refine it, keeping guard expressions from growing
/// across solver iterations.
fn and_reusing(
    a: &FeatureExpr,
    a_denot: &Denotation,
    b: &FeatureExpr,
    b_denot: &Denotation,
    intersection: &Denotation,
) -> FeatureExpr {
    if intersection == a_denot {
        a.clone()
    } else if intersection == b_denot {
        b.clone()
    } else {
        FeatureExpr::and(a, b)
    }
}

/// Checks the three partition conditions over `px`: the guards jointly cover
/// the product set, each is satisfiable, and they are pairwise disjoint.
pub fn validate_partition(ctx: &ProductSet, guards: &[FeatureExpr]) -> Result<bool> {
    let denots = guards.iter().map(|g| ctx.denotation(g)).collect::<Result<Vec<_>>>()?;
    Ok(denotations_form_partition(ctx.len(), denots.iter()))
}

fn denotations_form_partition<'a>(
    n_products: usize,
    denots: impl Iterator<Item = &'a Denotation>,
) -> bool {
    let mut seen = empty_denotation(n_products);
    for denot in denots {
        if !denot.any() {
            return false;
        }
        if (seen.clone() & denot).any() {
            return false;
        }
        seen |= denot;
    }
    seen.count_ones() == n_products
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::FeatureSet;

    fn px(names: &[&str]) -> ProductSet {
        ProductSet::all(FeatureSet::new(names.iter().map(|n| n.to_string())).unwrap()).unwrap()
    }

    fn coffee_px() -> ProductSet {
        let features = FeatureSet::new(["euro".into(), "dollar".into()]).unwrap();
        let products = [0b01u64, 0b10, 0b11].map(Product::from_mask);
        ProductSet::new(features, products).unwrap()
    }

    fn guard(ctx: &ProductSet, text: &str) -> FeatureExpr {
        FeatureExpr::parse(text, ctx.features()).unwrap()
    }

    #[test]
    fn validate_partition_examples() {
        let ctx = coffee_px();
        assert!(validate_partition(&ctx, &[FeatureExpr::tt()]).unwrap());
        assert!(
            validate_partition(&ctx, &[guard(&ctx, "euro"), guard(&ctx, "!euro")]).unwrap()
        );
        // {euro,dollar} lies in both cells.
        assert!(
            !validate_partition(&ctx, &[guard(&ctx, "euro"), guard(&ctx, "dollar")]).unwrap()
        );
        // An unsatisfiable cell is not allowed.
        assert!(!validate_partition(
            &ctx,
            &[FeatureExpr::tt(), guard(&ctx, "euro && !euro")]
        )
        .unwrap());
    }

    #[test]
    fn reduce_merges_equal_values() {
        let ctx = px(&["a"]);
        let f = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 1), (guard(&ctx, "!a"), 1)],
        )
        .unwrap();
        let r = f.reduce();
        assert_eq!(r.cell_count(), 1);
        assert_eq!(r.cells()[0].guard.to_string(), "!a || a");
        for i in 0..ctx.len() {
            assert_eq!(r.value_at_index(i), f.value_at_index(i));
        }

        let already = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 1), (guard(&ctx, "!a"), 2)],
        )
        .unwrap();
        assert_eq!(already.reduce().cell_count(), 2);
    }

    #[test]
    fn reduce_derived_example() {
        // Over the three coffee products, the two euro cells with value 0
        // merge and the lookup table is unchanged.
        let ctx = coffee_px();
        let f = FeatureFunction::from_cells(
            &ctx,
            [
                (guard(&ctx, "euro && dollar"), 0),
                (guard(&ctx, "euro && !dollar"), 0),
                (guard(&ctx, "!euro"), 1),
            ],
        )
        .unwrap();
        let r = f.reduce();
        assert_eq!(r.cell_count(), 2);
        assert!(r.is_canonical());
        for (i, &p) in ctx.products().iter().enumerate() {
            let expected = if p.contains_index(0) { 0 } else { 1 };
            assert_eq!(*r.value_at_index(i), expected, "at {}", p.render(ctx.features()));
        }
    }

    #[test]
    fn reduce_is_idempotent() {
        let ctx = px(&["a", "b"]);
        let f = FeatureFunction::from_cells(
            &ctx,
            [
                (guard(&ctx, "a && b"), 7),
                (guard(&ctx, "a && !b"), 7),
                (guard(&ctx, "!a"), 9),
            ],
        )
        .unwrap();
        let once = f.reduce();
        let twice = once.reduce();
        assert_eq!(once.cell_count(), twice.cell_count());
        for i in 0..ctx.len() {
            assert_eq!(once.value_at_index(i), twice.value_at_index(i));
        }
    }

    #[test]
    fn combine_examples() {
        let ctx = px(&["a"]);
        let constant = FeatureFunction::constant(&ctx, true);
        let split = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), true), (guard(&ctx, "!a"), false)],
        )
        .unwrap();
        let anded = constant.combine(&split, |x, y| *x && *y);
        assert_eq!(anded.cell_count(), 2);
        for i in 0..ctx.len() {
            assert_eq!(anded.value_at_index(i), split.value_at_index(i));
        }

        let inf = u64::MAX;
        let c = FeatureFunction::constant(&ctx, inf);
        let g = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 3u64), (guard(&ctx, "!a"), inf)],
        )
        .unwrap();
        let min = c.combine(&g, |x, y| *x.min(y));
        for i in 0..ctx.len() {
            assert_eq!(min.value_at_index(i), g.value_at_index(i));
        }
    }

    #[test]
    fn combine_reduces_to_coarsest_partition() {
        // max over {a: 1, !a: 2} and {b: 10, !b: 20} collapses to the second
        // function over the four products of {a, b}.
        let ctx = px(&["a", "b"]);
        let f1 = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 1), (guard(&ctx, "!a"), 2)],
        )
        .unwrap();
        let f2 = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "b"), 10), (guard(&ctx, "!b"), 20)],
        )
        .unwrap();
        let max = f1.combine(&f2, |x, y| *x.max(y));
        assert_eq!(max.cell_count(), 2);
        for (i, &p) in ctx.products().iter().enumerate() {
            let expected = if p.contains_index(1) { 10 } else { 20 };
            assert_eq!(*max.value_at_index(i), expected);
        }
        // Lookup law against plain enumeration.
        for i in 0..ctx.len() {
            assert_eq!(
                *max.value_at_index(i),
                *f1.value_at_index(i).max(f2.value_at_index(i))
            );
        }
    }

    #[test]
    fn restrict_examples() {
        let ctx = coffee_px();
        let v = FeatureFunction::constant(&ctx, 5);

        let same = v.restrict(&ctx, &FeatureExpr::tt(), 9).unwrap();
        assert_eq!(same.cell_count(), 1);
        assert_eq!(same.cells()[0].guard.to_string(), "true");

        let dollar = guard(&ctx, "dollar");
        let split = v.restrict(&ctx, &dollar, 9).unwrap();
        assert_eq!(split.cell_count(), 2);
        assert!(split.is_partition(&ctx));
        for (i, &p) in ctx.products().iter().enumerate() {
            let expected = if p.contains_index(1) { 5 } else { 9 };
            assert_eq!(*split.value_at_index(i), expected);
        }

        let ctx = px(&["a"]);
        let f = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 1), (guard(&ctx, "!a"), 2)],
        )
        .unwrap();
        let a = guard(&ctx, "a");
        let r = f.restrict(&ctx, &a, 9).unwrap();
        assert_eq!(r.cell_count(), 2);
        for (i, &p) in ctx.products().iter().enumerate() {
            let expected = if p.contains_index(0) { 1 } else { 9 };
            assert_eq!(*r.value_at_index(i), expected);
        }
    }

    #[test]
    fn guard_reuse_keeps_expressions_small() {
        let ctx = coffee_px();
        let f = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "dollar"), 1), (guard(&ctx, "!dollar"), 2)],
        )
        .unwrap();
        // Restricting by true must not wrap the guards in conjunctions.
        let r = f.restrict(&ctx, &FeatureExpr::tt(), 0).unwrap();
        assert_eq!(r.cells()[0].guard.to_string(), "dollar");
        assert_eq!(r.cells()[1].guard.to_string(), "!dollar");
    }

    #[test]
    fn cells_ordered_by_first_satisfying_product() {
        let ctx = px(&["a", "b"]);
        // Product order: {}, {b}, {a}, {a,b}; so the !a cell comes first.
        let f = FeatureFunction::from_cells(
            &ctx,
            [(guard(&ctx, "a"), 1), (guard(&ctx, "!a"), 2)],
        )
        .unwrap();
        assert_eq!(f.cells()[0].guard.to_string(), "!a");
        assert_eq!(f.cells()[1].guard.to_string(), "a");
    }
}
